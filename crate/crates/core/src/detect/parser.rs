//! Tolerant recursive-descent parser over the TypeScript grammar.
//!
//! The parser does not build a tree. It walks declarations, class bodies,
//! import/export clauses, expressions and the type grammar, and sets a
//! feature bit whenever it completes the construct that the compiler would
//! represent with the corresponding AST node. Speculative branches (arrow
//! heads, type arguments in expressions, `infer` constraints) restore the
//! feature bits they set when they backtrack.

use std::collections::HashSet;

use super::lexer::{Token, TokenKind};
use crate::features::FeatureId;

const MAX_DEPTH: u32 = 160;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ParseError {
    pub pos: usize,
}

type PResult<T = ()> = Result<T, ParseError>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum ListKind {
    TopLevel,
    Block,
}

/// Which declaration a type parameter list belongs to; variance annotations
/// only count on interfaces, type aliases and classes.
#[derive(Clone, Copy, PartialEq, Eq)]
enum TypeParamOwner {
    VarianceAllowed,
    Other,
}

pub(crate) struct Parser<'t, 'a> {
    toks: &'t [Token<'a>],
    pos: usize,
    flags: u16,
    depth: u32,
    no_in: bool,
    no_cond_types: bool,
    failed_arrows: HashSet<usize>,
    recovered: usize,
    first_recovery: Option<usize>,
}

const MODIFIERS: &[&str] = &[
    "abstract", "accessor", "async", "const", "declare", "default", "export", "in", "out",
    "public", "private", "protected", "readonly", "static", "override",
];

fn binary_precedence(op: &str) -> Option<u8> {
    Some(match op {
        "??" => 4,
        "||" => 5,
        "&&" => 6,
        "|" => 7,
        "^" => 8,
        "&" => 9,
        "==" | "!=" | "===" | "!==" => 10,
        "<" | ">" | "<=" | ">=" | "instanceof" | "in" | "as" | "satisfies" => 11,
        "<<" | ">>" | ">>>" => 12,
        "+" | "-" => 13,
        "*" | "/" | "%" => 14,
        "**" => 15,
        _ => return None,
    })
}

const ASSIGNMENT_OPS: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "**=", "&=", "|=", "^=", "&&=", "||=", "??=",
];

impl<'t, 'a> Parser<'t, 'a> {
    /// `toks` must end with an `Eof` token.
    pub(crate) fn new(toks: &'t [Token<'a>]) -> Self {
        debug_assert_eq!(toks.last().map(|t| t.kind), Some(TokenKind::Eof));
        Parser {
            toks,
            pos: 0,
            flags: 0,
            depth: 0,
            no_in: false,
            no_cond_types: false,
            failed_arrows: HashSet::new(),
            recovered: 0,
            first_recovery: None,
        }
    }

    pub(crate) fn flags(&self) -> u16 {
        self.flags
    }

    /// Number of statements or members skipped by error recovery.
    pub(crate) fn recovered_errors(&self) -> usize {
        self.recovered
    }

    /// Byte offset of the first construct that needed recovery.
    pub(crate) fn first_recovery_offset(&self) -> Option<usize> {
        self.first_recovery
    }

    fn note_recovery(&mut self, failed_at: usize) {
        self.recovered += 1;
        if self.first_recovery.is_none() {
            self.first_recovery = Some(self.toks[failed_at].start);
        }
    }

    pub(crate) fn parse_source_file(&mut self) -> PResult {
        self.statement_list(ListKind::TopLevel)
    }

    // ----- token helpers -------------------------------------------------

    fn tok(&self) -> &Token<'a> {
        &self.toks[self.pos]
    }

    fn nth(&self, n: usize) -> &Token<'a> {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)]
    }

    fn bump(&mut self) {
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
    }

    fn bump_n(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn at(&self, p: &str) -> bool {
        self.tok().is_punct(p)
    }

    fn at_word(&self, w: &str) -> bool {
        self.tok().is_word(w)
    }

    fn at_eof(&self) -> bool {
        self.tok().kind == TokenKind::Eof
    }

    fn at_ident(&self) -> bool {
        self.tok().kind == TokenKind::Identifier
    }

    fn at_ident_or_keyword(&self) -> bool {
        self.tok().is_identifier_or_keyword()
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.at(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self) -> PResult<T> {
        Err(ParseError { pos: self.pos })
    }

    fn expect(&mut self, p: &str) -> PResult {
        if self.eat(p) {
            Ok(())
        } else {
            self.fail()
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.fail()
        }
    }

    fn expect_ident(&mut self) -> PResult {
        if self.at_ident() {
            self.bump();
            Ok(())
        } else {
            self.fail()
        }
    }

    fn expect_ident_or_keyword(&mut self) -> PResult {
        if self.at_ident_or_keyword() {
            self.bump();
            Ok(())
        } else {
            self.fail()
        }
    }

    /// `;`, or an automatically inserted one.
    fn semicolon(&mut self) -> PResult {
        if self.eat(";") || self.at("}") || self.at_eof() || self.tok().newline_before {
            Ok(())
        } else {
            self.fail()
        }
    }

    fn mark(&mut self, feature: FeatureId) {
        self.flags |= feature.bit();
    }

    fn adjacent(&self, i: usize) -> bool {
        i + 1 < self.toks.len() && self.toks[i].end == self.toks[i + 1].start
    }

    // ----- context and speculation ---------------------------------------

    fn guarded<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        if self.depth >= MAX_DEPTH {
            return self.fail();
        }
        self.depth += 1;
        let r = f(self);
        self.depth -= 1;
        r
    }

    fn with_ctx<T>(
        &mut self,
        no_in: bool,
        no_cond_types: bool,
        f: impl FnOnce(&mut Self) -> PResult<T>,
    ) -> PResult<T> {
        let saved = (self.no_in, self.no_cond_types);
        self.no_in = no_in;
        self.no_cond_types = no_cond_types;
        let r = f(self);
        (self.no_in, self.no_cond_types) = saved;
        r
    }

    /// Expression context inside brackets: `in` allowed again.
    fn nested_expr<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let nct = self.no_cond_types;
        self.with_ctx(false, nct, f)
    }

    fn with_cond_types<T>(
        &mut self,
        allowed: bool,
        f: impl FnOnce(&mut Self) -> PResult<T>,
    ) -> PResult<T> {
        let no_in = self.no_in;
        self.with_ctx(no_in, !allowed, f)
    }

    fn speculate<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> Option<T> {
        let saved = (self.pos, self.flags, self.no_in, self.no_cond_types, self.depth);
        match f(self) {
            Ok(v) => Some(v),
            Err(_) => {
                (self.pos, self.flags, self.no_in, self.no_cond_types, self.depth) = saved;
                None
            }
        }
    }

    fn lookahead(&mut self, f: impl FnOnce(&mut Self) -> bool) -> bool {
        let saved = (self.pos, self.flags, self.no_in, self.no_cond_types, self.depth);
        let r = f(self);
        (self.pos, self.flags, self.no_in, self.no_cond_types, self.depth) = saved;
        r
    }

    // ----- statements ----------------------------------------------------

    fn statement_list(&mut self, kind: ListKind) -> PResult {
        loop {
            if self.at_eof() {
                return match kind {
                    ListKind::TopLevel => Ok(()),
                    ListKind::Block => self.fail(),
                };
            }
            if kind == ListKind::Block && self.at("}") {
                return Ok(());
            }
            let start = self.pos;
            if let Err(e) = self.parse_statement() {
                self.note_recovery(e.pos);
                self.pos = start;
                self.skip_to_statement_boundary(kind == ListKind::TopLevel)?;
            }
        }
    }

    /// Skips tokens from `self.pos` up to the next statement boundary at the
    /// current bracket depth. Fails when brackets never balance, or when a
    /// stray closing bracket shows up at top level.
    fn skip_to_statement_boundary(&mut self, top_level: bool) -> PResult {
        let mut balance: i64 = 0;
        let mut first = true;
        loop {
            let t = *self.tok();
            if t.kind == TokenKind::Eof {
                return if balance == 0 { Ok(()) } else { self.fail() };
            }
            if !first && balance == 0 && t.newline_before && self.starts_declaration_keyword() {
                return Ok(());
            }
            first = false;
            match t.kind {
                TokenKind::TemplateHead => balance += 1,
                TokenKind::TemplateTail => balance -= 1,
                TokenKind::Punctuator => match t.text {
                    "(" | "[" | "{" => balance += 1,
                    ")" | "]" | "}" => balance -= 1,
                    ";" if balance == 0 => {
                        self.bump();
                        return Ok(());
                    }
                    _ => {}
                },
                _ => {}
            }
            if balance < 0 {
                if top_level || !t.is_punct("}") {
                    return self.fail();
                }
                // Leave the `}` for the enclosing block.
                return Ok(());
            }
            self.bump();
            if balance == 0 && t.is_punct("}") && self.tok().newline_before {
                return Ok(());
            }
        }
    }

    fn starts_declaration_keyword(&self) -> bool {
        let t = self.tok();
        t.is_identifier_or_keyword()
            && matches!(
                t.text,
                "function" | "class" | "interface" | "type" | "enum" | "const" | "let" | "var"
                    | "import" | "export" | "namespace" | "module" | "declare" | "abstract"
                    | "async"
            )
    }

    fn parse_statement(&mut self) -> PResult {
        self.guarded(|p| p.parse_statement_inner())
    }

    fn parse_statement_inner(&mut self) -> PResult {
        let t = *self.tok();
        match t.kind {
            TokenKind::Punctuator => match t.text {
                ";" => {
                    self.bump();
                    return Ok(());
                }
                "{" => return self.parse_block(),
                "@" => {
                    self.parse_decorators()?;
                    return self.parse_declaration_after_decorators();
                }
                _ => {}
            },
            TokenKind::Keyword => match t.text {
                "var" => return self.parse_variable_statement(),
                "const" => {
                    if self.nth(1).is_word("enum") {
                        self.bump();
                        return self.parse_enum();
                    }
                    return self.parse_variable_statement();
                }
                "function" => return self.parse_function(),
                "class" => return self.parse_class(),
                "enum" => return self.parse_enum(),
                "if" => return self.parse_if(),
                "do" => return self.parse_do(),
                "while" => {
                    self.bump();
                    self.parse_paren_expression()?;
                    return self.parse_statement();
                }
                "with" => {
                    self.bump();
                    self.parse_paren_expression()?;
                    return self.parse_statement();
                }
                "for" => return self.parse_for(),
                "continue" | "break" => {
                    self.bump();
                    if self.at_ident() && !self.tok().newline_before {
                        self.bump();
                    }
                    return self.semicolon();
                }
                "return" => {
                    self.bump();
                    if !self.at(";") && !self.at("}") && !self.at_eof() && !self.tok().newline_before {
                        self.parse_expression()?;
                    }
                    return self.semicolon();
                }
                "throw" => {
                    self.bump();
                    self.parse_expression()?;
                    return self.semicolon();
                }
                "switch" => return self.parse_switch(),
                "try" => return self.parse_try(),
                "debugger" => {
                    self.bump();
                    return self.semicolon();
                }
                "import" => {
                    let next = self.nth(1);
                    if !(next.is_punct("(") || next.is_punct(".")) {
                        return self.parse_import_declaration();
                    }
                }
                "export" => return self.parse_export(),
                _ => {}
            },
            TokenKind::Identifier => {
                if let Some(r) = self.try_contextual_declaration() {
                    return r;
                }
                if self.nth(1).is_punct(":") {
                    // Labeled statement.
                    self.bump_n(2);
                    return self.parse_statement();
                }
            }
            _ => {}
        }
        self.parse_expression()?;
        self.semicolon()
    }

    /// Declarations introduced by identifiers that are only keywords in this
    /// position (`let`, `type`, `interface`, `namespace`, `declare`, ...).
    fn try_contextual_declaration(&mut self) -> Option<PResult> {
        let t = *self.tok();
        let next = *self.nth(1);
        let next_same_line = !next.newline_before;
        match t.text {
            "let" if next.kind == TokenKind::Identifier || next.is_punct("[") || next.is_punct("{") => {
                Some(self.parse_variable_statement())
            }
            "async" if next.is_word("function") && next_same_line => {
                self.bump();
                Some(self.parse_function())
            }
            "abstract" if next.is_word("class") && next_same_line => {
                self.bump();
                Some(self.parse_class())
            }
            "type" if next.kind == TokenKind::Identifier && next_same_line => Some(self.parse_type_alias()),
            "interface" if next.kind == TokenKind::Identifier && next_same_line => Some(self.parse_interface()),
            "namespace" | "module"
                if next_same_line && (next.kind == TokenKind::Identifier || next.kind == TokenKind::String) =>
            {
                Some(self.parse_module_declaration())
            }
            "global" if next.is_punct("{") => {
                self.bump();
                Some(self.parse_module_block())
            }
            "declare" if next_same_line && self.lookahead(|p| {
                p.bump();
                p.at_declaration_start()
            }) =>
            {
                self.bump();
                Some(self.parse_declaration_after_decorators())
            }
            _ => None,
        }
    }

    /// Whether the current token starts a declaration that can follow
    /// `declare`, `export` or decorators.
    fn at_declaration_start(&self) -> bool {
        let t = self.tok();
        let next = self.nth(1);
        match t.text {
            "var" | "let" | "const" | "function" | "class" | "enum" => t.is_identifier_or_keyword(),
            "abstract" => next.is_word("class") && !next.newline_before,
            "async" => next.is_word("function") && !next.newline_before,
            "interface" | "type" => next.kind == TokenKind::Identifier && !next.newline_before,
            "namespace" | "module" => {
                !next.newline_before && (next.kind == TokenKind::Identifier || next.kind == TokenKind::String)
            }
            "global" => next.is_punct("{") || next.kind == TokenKind::Identifier,
            "declare" => !next.newline_before,
            _ => false,
        }
    }

    /// Parses a declaration after `export`, `declare` or decorators.
    fn parse_declaration_after_decorators(&mut self) -> PResult {
        let t = *self.tok();
        match t.text {
            "export" if t.kind == TokenKind::Keyword => self.parse_export(),
            "var" | "let" => self.parse_variable_statement(),
            "const" => {
                if self.nth(1).is_word("enum") {
                    self.bump();
                    self.parse_enum()
                } else {
                    self.parse_variable_statement()
                }
            }
            "function" => self.parse_function(),
            "class" => self.parse_class(),
            "enum" => self.parse_enum(),
            "abstract" | "declare" | "async" => {
                self.bump();
                self.parse_declaration_after_decorators()
            }
            "interface" => self.parse_interface(),
            "type" => self.parse_type_alias(),
            "namespace" | "module" => self.parse_module_declaration(),
            "global" => {
                self.bump();
                if self.at("{") {
                    self.parse_module_block()
                } else {
                    self.semicolon()
                }
            }
            "import" => self.parse_import_declaration(),
            _ => self.fail(),
        }
    }

    fn parse_block(&mut self) -> PResult {
        self.expect("{")?;
        self.nested_expr(|p| p.statement_list(ListKind::Block))?;
        self.expect("}")
    }

    fn parse_paren_expression(&mut self) -> PResult {
        self.expect("(")?;
        self.nested_expr(|p| p.parse_expression())?;
        self.expect(")")
    }

    fn parse_if(&mut self) -> PResult {
        self.bump();
        self.parse_paren_expression()?;
        self.parse_statement()?;
        if self.eat_word("else") {
            self.parse_statement()?;
        }
        Ok(())
    }

    fn parse_do(&mut self) -> PResult {
        self.bump();
        self.parse_statement()?;
        self.expect_word("while")?;
        self.parse_paren_expression()?;
        self.eat(";");
        Ok(())
    }

    fn parse_for(&mut self) -> PResult {
        self.bump();
        self.eat_word("await");
        self.expect("(")?;
        let head = |p: &mut Self| -> PResult {
            if !p.at(";") {
                let is_decl = p.at_word("var")
                    || p.at_word("const")
                    || (p.at_word("let") && {
                        let n = p.nth(1);
                        n.kind == TokenKind::Identifier || n.is_punct("[") || n.is_punct("{")
                    });
                if is_decl {
                    p.bump();
                    p.with_ctx(true, false, |p| p.parse_variable_declarations())?;
                } else {
                    p.with_ctx(true, false, |p| p.parse_expression())?;
                }
            }
            if p.eat_word("of") {
                p.nested_expr(|p| p.parse_assignment())?;
            } else if p.eat_word("in") {
                p.nested_expr(|p| p.parse_expression())?;
            } else {
                p.expect(";")?;
                if !p.at(";") {
                    p.nested_expr(|p| p.parse_expression())?;
                }
                p.expect(";")?;
                if !p.at(")") {
                    p.nested_expr(|p| p.parse_expression())?;
                }
            }
            Ok(())
        };
        head(self)?;
        self.expect(")")?;
        self.parse_statement()
    }

    fn parse_switch(&mut self) -> PResult {
        self.bump();
        self.parse_paren_expression()?;
        self.expect("{")?;
        while !self.at("}") {
            if self.eat_word("case") {
                self.nested_expr(|p| p.parse_expression())?;
            } else {
                self.expect_word("default")?;
            }
            self.expect(":")?;
            while !self.at("}") && !self.at_word("case") && !self.at_word("default") {
                if self.at_eof() {
                    return self.fail();
                }
                self.parse_statement()?;
            }
        }
        self.expect("}")
    }

    fn parse_try(&mut self) -> PResult {
        self.bump();
        self.parse_block()?;
        if self.eat_word("catch") {
            if self.eat("(") {
                self.parse_binding_name()?;
                if self.eat(":") {
                    self.parse_type()?;
                }
                self.expect(")")?;
            }
            self.parse_block()?;
        }
        if self.eat_word("finally") {
            self.parse_block()?;
        }
        Ok(())
    }

    fn parse_variable_statement(&mut self) -> PResult {
        self.bump(); // var / let / const
        self.parse_variable_declarations()?;
        self.semicolon()
    }

    fn parse_variable_declarations(&mut self) -> PResult {
        loop {
            self.parse_binding_name()?;
            self.eat("!");
            if self.eat(":") {
                self.parse_type()?;
            }
            if self.eat("=") {
                self.parse_assignment()?;
            }
            if !self.eat(",") {
                return Ok(());
            }
        }
    }

    fn parse_binding_name(&mut self) -> PResult {
        if self.at("[") {
            self.parse_array_binding_pattern()
        } else if self.at("{") {
            self.parse_object_binding_pattern()
        } else {
            self.expect_ident()
        }
    }

    fn parse_array_binding_pattern(&mut self) -> PResult {
        self.expect("[")?;
        self.nested_expr(|p| {
            loop {
                if p.at("]") {
                    break;
                }
                if p.eat(",") {
                    continue;
                }
                p.eat("...");
                p.parse_binding_name()?;
                if p.eat("=") {
                    p.parse_assignment()?;
                }
                if !p.at("]") {
                    p.expect(",")?;
                }
            }
            Ok(())
        })?;
        self.expect("]")
    }

    fn parse_object_binding_pattern(&mut self) -> PResult {
        self.expect("{")?;
        self.nested_expr(|p| {
            while !p.at("}") {
                if p.eat("...") {
                    p.parse_binding_name()?;
                } else {
                    let shorthand = p.at_ident();
                    p.parse_property_name()?;
                    if p.eat(":") {
                        p.parse_binding_name()?;
                    } else if !shorthand {
                        return p.fail();
                    }
                    if p.eat("=") {
                        p.parse_assignment()?;
                    }
                }
                if !p.at("}") {
                    p.expect(",")?;
                }
            }
            Ok(())
        })?;
        self.expect("}")
    }

    fn parse_function(&mut self) -> PResult {
        self.expect_word("function")?;
        self.eat("*");
        if self.at_ident() {
            self.bump();
        }
        self.parse_signature(TypeParamOwner::Other, false)?;
        self.parse_function_body_or_semicolon()
    }

    /// Type parameters, parameter list and optional return type annotation.
    fn parse_signature(&mut self, owner: TypeParamOwner, is_constructor: bool) -> PResult {
        if self.at("<") {
            self.parse_type_parameters(owner)?;
        }
        self.parse_parameters(is_constructor)?;
        if self.eat(":") {
            self.parse_return_type()?;
        }
        Ok(())
    }

    fn parse_function_body_or_semicolon(&mut self) -> PResult {
        if self.at("{") {
            self.parse_function_body()
        } else {
            self.semicolon()
        }
    }

    fn parse_function_body(&mut self) -> PResult {
        self.expect("{")?;
        self.with_ctx(false, false, |p| p.statement_list(ListKind::Block))?;
        self.expect("}")
    }

    fn parse_parameters(&mut self, is_constructor: bool) -> PResult {
        self.expect("(")?;
        self.nested_expr(|p| {
            while !p.at(")") {
                p.parse_parameter(is_constructor)?;
                if !p.at(")") {
                    p.expect(",")?;
                }
            }
            Ok(())
        })?;
        self.expect(")")
    }

    fn parse_parameter(&mut self, is_constructor: bool) -> PResult {
        if self.at("@") {
            self.parse_decorators()?;
        }
        while self.at_modifier_word() && self.next_can_follow_modifier(self.tok().text) {
            if self.at_word("override") && is_constructor {
                self.mark(FeatureId::F7);
            }
            self.bump();
        }
        self.eat("...");
        if self.at_word("this") {
            self.bump();
        } else {
            self.parse_binding_name()?;
        }
        self.eat("?");
        if self.eat(":") {
            self.parse_type()?;
        }
        if self.eat("=") {
            self.parse_assignment()?;
        }
        Ok(())
    }

    fn parse_decorators(&mut self) -> PResult {
        while self.eat("@") {
            if self.eat("(") {
                self.nested_expr(|p| p.parse_expression())?;
                self.expect(")")?;
            } else {
                self.expect_ident_or_keyword()?;
            }
            loop {
                if self.eat(".") {
                    if self.tok().kind == TokenKind::PrivateName {
                        self.bump();
                    } else {
                        self.expect_ident_or_keyword()?;
                    }
                } else if self.at("(") {
                    self.parse_arguments()?;
                } else if self.at("<") {
                    if self.speculate(|p| p.parse_type_arguments_in_expression()).is_none() {
                        break;
                    }
                } else {
                    break;
                }
            }
        }
        Ok(())
    }

    fn parse_enum(&mut self) -> PResult {
        self.expect_word("enum")?;
        self.expect_ident()?;
        self.expect("{")?;
        self.nested_expr(|p| {
            while !p.at("}") {
                p.parse_property_name()?;
                if p.eat("=") {
                    p.parse_assignment()?;
                }
                if !p.at("}") {
                    p.expect(",")?;
                }
            }
            Ok(())
        })?;
        self.expect("}")
    }

    fn parse_type_alias(&mut self) -> PResult {
        self.expect_word("type")?;
        self.expect_ident()?;
        if self.at("<") {
            self.parse_type_parameters(TypeParamOwner::VarianceAllowed)?;
        }
        self.expect("=")?;
        self.parse_type()?;
        self.semicolon()
    }

    fn parse_interface(&mut self) -> PResult {
        self.expect_word("interface")?;
        self.expect_ident()?;
        if self.at("<") {
            self.parse_type_parameters(TypeParamOwner::VarianceAllowed)?;
        }
        if self.eat_word("extends") {
            loop {
                self.parse_type_reference()?;
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.parse_type_literal()
    }

    fn parse_module_declaration(&mut self) -> PResult {
        self.bump(); // namespace / module
        if self.tok().kind == TokenKind::String {
            self.bump();
            if !self.at("{") {
                return self.semicolon();
            }
        } else {
            self.expect_ident()?;
            while self.eat(".") {
                self.expect_ident()?;
            }
        }
        self.parse_module_block()
    }

    fn parse_module_block(&mut self) -> PResult {
        self.expect("{")?;
        self.with_ctx(false, false, |p| p.statement_list(ListKind::Block))?;
        self.expect("}")
    }

    // ----- import / export ------------------------------------------------

    fn parse_import_declaration(&mut self) -> PResult {
        self.expect_word("import")?;
        let mut has_default = false;
        if self.at_ident() {
            let first_is_type = self.at_word("type");
            self.bump();
            has_default = true;
            if first_is_type
                && !self.at_word("from")
                && (self.at_ident() || self.at("*") || self.at("{"))
            {
                // `import type ...` (whole clause).
                has_default = self.at_ident();
                if has_default {
                    self.bump();
                }
            }
            if has_default && !(self.at(",") || self.at_word("from")) {
                // `import x = require("m")` / `import x = A.B`
                self.expect("=")?;
                if self.at_word("require") && self.nth(1).is_punct("(") {
                    self.bump_n(2);
                    self.nested_expr(|p| p.parse_assignment())?;
                    self.expect(")")?;
                } else {
                    self.expect_ident_or_keyword()?;
                    while self.eat(".") {
                        self.expect_ident_or_keyword()?;
                    }
                }
                return self.semicolon();
            }
        }
        if has_default || self.at("*") || self.at("{") {
            if !has_default || self.eat(",") {
                if self.eat("*") {
                    self.expect_word("as")?;
                    self.expect_ident()?;
                } else {
                    self.parse_named_specifiers()?;
                }
            }
            self.expect_word("from")?;
        }
        self.parse_module_specifier()?;
        if self.at_word("assert") && !self.tok().newline_before {
            self.parse_assert_clause()?;
        }
        self.semicolon()
    }

    fn parse_module_specifier(&mut self) -> PResult {
        if self.tok().kind == TokenKind::String {
            self.bump();
            Ok(())
        } else {
            self.parse_expression()
        }
    }

    fn parse_assert_clause(&mut self) -> PResult {
        self.expect_word("assert")?;
        self.expect("{")?;
        self.nested_expr(|p| {
            while !p.at("}") {
                if p.tok().kind == TokenKind::String {
                    p.bump();
                } else {
                    p.expect_ident_or_keyword()?;
                }
                p.expect(":")?;
                p.parse_assignment()?;
                if !p.at("}") && !p.eat(",") {
                    p.expect(";")?;
                }
            }
            Ok(())
        })?;
        self.expect("}")?;
        self.mark(FeatureId::F5);
        Ok(())
    }

    fn parse_named_specifiers(&mut self) -> PResult {
        self.expect("{")?;
        while !self.at("}") {
            self.parse_import_or_export_specifier()?;
            if !self.at("}") {
                self.expect(",")?;
            }
        }
        self.expect("}")
    }

    fn parse_import_or_export_specifier(&mut self) -> PResult {
        if self.tok().kind == TokenKind::String {
            self.bump();
            if self.eat_word("as") {
                self.parse_specifier_name()?;
            }
            return Ok(());
        }
        let is_type = self.at_word("type");
        self.expect_ident_or_keyword()?;
        let mut type_only = false;
        let mut can_parse_as = true;
        if is_type {
            if self.at_word("as") {
                self.bump();
                if self.at_word("as") {
                    self.bump();
                    if self.at_ident_or_keyword() {
                        // { type as as x }
                        type_only = true;
                        self.bump();
                    }
                    can_parse_as = false;
                } else if self.at_ident_or_keyword() {
                    // { type as x }
                    self.bump();
                    can_parse_as = false;
                } else {
                    // { type as }
                    type_only = true;
                }
            } else if self.at_ident_or_keyword() {
                // { type X ... }
                type_only = true;
                self.bump();
            }
        }
        if can_parse_as && self.eat_word("as") {
            self.parse_specifier_name()?;
        }
        if type_only {
            self.mark(FeatureId::F4);
        }
        Ok(())
    }

    fn parse_specifier_name(&mut self) -> PResult {
        if self.tok().kind == TokenKind::String {
            self.bump();
            Ok(())
        } else {
            self.expect_ident_or_keyword()
        }
    }

    fn parse_export(&mut self) -> PResult {
        self.expect_word("export")?;
        if self.eat("=") {
            self.parse_assignment()?;
            return self.semicolon();
        }
        if self.at_word("as") && self.nth(1).is_word("namespace") {
            self.bump_n(2);
            self.expect_ident()?;
            return self.semicolon();
        }
        if self.at_word("import") {
            return self.parse_import_declaration();
        }
        if self.eat_word("default") {
            let t = *self.tok();
            let next = *self.nth(1);
            let is_decl = match t.text {
                "function" | "class" => t.kind == TokenKind::Keyword,
                "abstract" => next.is_word("class") && !next.newline_before,
                "async" => next.is_word("function") && !next.newline_before,
                "interface" => next.kind == TokenKind::Identifier && !next.newline_before,
                _ => false,
            };
            if t.is_punct("@") {
                self.parse_decorators()?;
                return self.parse_declaration_after_decorators();
            }
            if is_decl {
                return self.parse_declaration_after_decorators();
            }
            self.parse_assignment()?;
            return self.semicolon();
        }
        if self.at_word("type") && (self.nth(1).is_punct("{") || self.nth(1).is_punct("*")) {
            self.bump();
        }
        if self.eat("*") {
            if self.eat_word("as") {
                self.parse_specifier_name()?;
            }
            self.expect_word("from")?;
            return self.finish_export_from();
        }
        if self.at("{") {
            self.parse_named_specifiers()?;
            if self.at_word("from")
                || (self.tok().kind == TokenKind::String && !self.tok().newline_before)
            {
                self.expect_word("from")?;
                return self.finish_export_from();
            }
            return self.semicolon();
        }
        if self.at("@") {
            self.parse_decorators()?;
        }
        self.parse_declaration_after_decorators()
    }

    fn finish_export_from(&mut self) -> PResult {
        self.parse_module_specifier()?;
        if self.at_word("assert") && !self.tok().newline_before {
            self.parse_assert_clause()?;
        }
        self.semicolon()
    }

    // ----- classes -------------------------------------------------------

    fn parse_class(&mut self) -> PResult {
        self.expect_word("class")?;
        if self.at_ident() && !(self.at_word("implements") && self.nth(1).is_identifier_or_keyword()) {
            self.bump();
        }
        if self.at("<") {
            self.parse_type_parameters(TypeParamOwner::VarianceAllowed)?;
        }
        loop {
            if self.eat_word("extends") {
                self.parse_heritage_expression()?;
                while self.eat(",") {
                    self.parse_heritage_expression()?;
                }
            } else if self.at_word("implements") {
                self.bump();
                loop {
                    self.parse_type_reference()?;
                    if !self.eat(",") {
                        break;
                    }
                }
            } else {
                break;
            }
        }
        self.parse_class_body()
    }

    fn parse_heritage_expression(&mut self) -> PResult {
        self.parse_lhs_expression()?;
        if self.at("<") {
            self.parse_type_arguments()?;
        }
        Ok(())
    }

    fn parse_class_body(&mut self) -> PResult {
        self.expect("{")?;
        self.with_ctx(false, false, |p| {
            loop {
                if p.at("}") {
                    return Ok(());
                }
                if p.at_eof() {
                    return p.fail();
                }
                let start = p.pos;
                if let Err(e) = p.parse_class_member() {
                    p.note_recovery(e.pos);
                    p.pos = start;
                    p.skip_to_statement_boundary(false)?;
                }
            }
        })?;
        self.expect("}")
    }

    fn at_modifier_word(&self) -> bool {
        self.tok().is_identifier_or_keyword() && MODIFIERS.contains(&self.tok().text)
    }

    fn can_follow_modifier(t: &Token<'_>) -> bool {
        t.is_punct("[")
            || t.is_punct("{")
            || t.is_punct("*")
            || t.is_punct("...")
            || t.is_identifier_or_keyword()
            || t.kind == TokenKind::PrivateName
            || t.kind == TokenKind::String
            || t.kind == TokenKind::Number
    }

    /// Whether the modifier-like word at the current position is really a
    /// modifier, judged from what follows it.
    fn next_can_follow_modifier(&self, word: &str) -> bool {
        let next = self.nth(1);
        match word {
            "const" => next.is_word("enum"),
            "export" => {
                if next.is_word("default") || next.is_word("type") {
                    return true;
                }
                !next.is_punct("*") && !next.is_word("as") && !next.is_punct("{") && Self::can_follow_modifier(next)
            }
            "default" => {
                matches!(next.text, "class" | "function" | "interface" | "abstract" | "async")
                    && next.is_identifier_or_keyword()
            }
            "accessor" | "static" | "get" | "set" => Self::can_follow_modifier(next),
            _ => !next.newline_before && Self::can_follow_modifier(next),
        }
    }

    fn parse_class_member(&mut self) -> PResult {
        self.guarded(|p| p.parse_class_member_inner())
    }

    fn parse_class_member_inner(&mut self) -> PResult {
        if self.eat(";") {
            return Ok(());
        }
        if self.at("@") {
            self.parse_decorators()?;
        }
        let mut has_accessor = false;
        let mut has_override = false;
        let mut seen_static = false;
        loop {
            if !self.at_modifier_word() {
                break;
            }
            let word = self.tok().text;
            if word == "static" && (self.nth(1).is_punct("{") || seen_static) {
                break;
            }
            if !self.next_can_follow_modifier(word) {
                break;
            }
            match word {
                "accessor" => has_accessor = true,
                "override" => has_override = true,
                "static" => seen_static = true,
                _ => {}
            }
            self.bump();
        }
        if has_override {
            self.mark(FeatureId::F7);
        }

        if self.at_word("static") && self.nth(1).is_punct("{") {
            self.bump();
            self.parse_function_body()?;
            self.mark(FeatureId::F6);
            return Ok(());
        }

        if (self.at_word("get") || self.at_word("set")) && Self::can_follow_modifier(self.nth(1)) {
            self.bump();
            self.parse_property_name()?;
            self.parse_signature(TypeParamOwner::Other, false)?;
            return self.parse_function_body_or_semicolon();
        }

        let is_ctor_name = self.at_word("constructor") || self.tok().text == "\"constructor\"" || self.tok().text == "'constructor'";
        if is_ctor_name && (self.nth(1).is_punct("(") || self.nth(1).is_punct("<")) {
            self.bump();
            self.parse_signature(TypeParamOwner::Other, true)?;
            return self.parse_function_body_or_semicolon();
        }

        if self.at("[") && self.is_index_signature() {
            self.parse_index_signature()?;
            return self.type_member_separator_in_class();
        }

        let generator = self.eat("*");
        self.parse_property_name()?;
        self.eat("?");
        if generator || self.at("(") || self.at("<") {
            self.parse_signature(TypeParamOwner::Other, false)?;
            return self.parse_function_body_or_semicolon();
        }
        self.eat("!");
        if self.eat(":") {
            self.parse_type()?;
        }
        if self.eat("=") {
            self.parse_assignment()?;
        }
        if has_accessor {
            self.mark(FeatureId::F1);
        }
        self.semicolon()
    }

    fn type_member_separator_in_class(&mut self) -> PResult {
        if self.eat(",") {
            return Ok(());
        }
        self.semicolon()
    }

    fn is_index_signature(&mut self) -> bool {
        self.lookahead(|p| {
            p.bump(); // [
            if p.at("...") || p.at("]") {
                return true;
            }
            if p.at_modifier_word() && p.nth(1).is_identifier_or_keyword() {
                return true;
            }
            if !p.at_ident() {
                return false;
            }
            p.bump();
            if p.at(":") || p.at(",") {
                return true;
            }
            if p.at("?") {
                p.bump();
                return p.at(":") || p.at(",") || p.at("]");
            }
            false
        })
    }

    fn parse_index_signature(&mut self) -> PResult {
        self.expect("[")?;
        self.nested_expr(|p| {
            while !p.at("]") {
                p.parse_parameter(false)?;
                if !p.at("]") {
                    p.expect(",")?;
                }
            }
            Ok(())
        })?;
        self.expect("]")?;
        if self.eat(":") {
            self.parse_type()?;
        }
        Ok(())
    }

    fn parse_property_name(&mut self) -> PResult {
        let t = *self.tok();
        match t.kind {
            TokenKind::Identifier
            | TokenKind::Keyword
            | TokenKind::String
            | TokenKind::Number
            | TokenKind::PrivateName
            | TokenKind::NoSubstitutionTemplate => {
                self.bump();
                Ok(())
            }
            TokenKind::Punctuator if t.text == "[" => {
                self.bump();
                self.nested_expr(|p| p.parse_assignment())?;
                self.expect("]")
            }
            _ => self.fail(),
        }
    }

    // ----- expressions ---------------------------------------------------

    fn parse_expression(&mut self) -> PResult {
        self.parse_assignment()?;
        while self.eat(",") {
            self.parse_assignment()?;
        }
        Ok(())
    }

    fn parse_assignment(&mut self) -> PResult {
        self.parse_assignment_ex(true)
    }

    fn parse_assignment_ex(&mut self, allow_return_type: bool) -> PResult {
        self.guarded(|p| p.parse_assignment_inner(allow_return_type))
    }

    fn parse_assignment_inner(&mut self, allow_return_type: bool) -> PResult {
        if self.at_word("yield") && self.yield_has_operand() {
            self.bump();
            self.eat("*");
            if self.starts_expression(self.tok()) && !self.tok().newline_before {
                return self.parse_assignment_ex(allow_return_type);
            }
            return Ok(());
        }
        if self.try_arrow_function(allow_return_type)? {
            return Ok(());
        }
        self.parse_binary(0)?;
        if self.at("?") {
            self.bump();
            self.nested_expr(|p| p.parse_assignment_ex(false))?;
            self.expect(":")?;
            return self.parse_assignment_ex(allow_return_type);
        }
        if let Some((op, n)) = self.assignment_operator() {
            if matches!(op, "&&=" | "||=" | "??=") {
                self.mark(FeatureId::F12);
            }
            self.bump_n(n);
            return self.parse_assignment_ex(allow_return_type);
        }
        Ok(())
    }

    fn yield_has_operand(&self) -> bool {
        let next = self.nth(1);
        next.is_punct("*") || (!next.newline_before && self.starts_expression(next))
            || next.is_punct(")")
            || next.is_punct(";")
            || next.is_punct("]")
            || next.is_punct("}")
            || next.is_punct(",")
            || next.newline_before
    }

    fn assignment_operator(&self) -> Option<(&'static str, usize)> {
        let t = self.tok();
        if t.kind != TokenKind::Punctuator {
            return None;
        }
        if t.text == ">" {
            return match self.glued_greater() {
                (">>=", n) => Some((">>=", n)),
                (">>>=", n) => Some((">>>=", n)),
                _ => None,
            };
        }
        if t.text == "<" {
            return match self.glued_less() {
                ("<<=", n) => Some(("<<=", n)),
                _ => None,
            };
        }
        ASSIGNMENT_OPS.iter().find(|op| **op == t.text).map(|op| (*op, 1))
    }

    /// Joins adjacent `>` / `=` tokens starting at the current `>`.
    fn glued_greater(&self) -> (&'static str, usize) {
        let mut n = 1;
        while n < 3 && self.adjacent(self.pos + n - 1) && self.nth(n).is_punct(">") {
            n += 1;
        }
        let eq = self.adjacent(self.pos + n - 1) && self.nth(n).is_punct("=");
        match (n, eq) {
            (1, false) => (">", 1),
            (1, true) => (">=", 2),
            (2, false) => (">>", 2),
            (2, true) => (">>=", 3),
            (3, false) => (">>>", 3),
            (_, _) => (">>>=", 4),
        }
    }

    /// Joins adjacent `<` / `=` tokens starting at the current `<`.
    fn glued_less(&self) -> (&'static str, usize) {
        let two = self.adjacent(self.pos) && self.nth(1).is_punct("<");
        let n = if two { 2 } else { 1 };
        let eq = self.adjacent(self.pos + n - 1) && self.nth(n).is_punct("=");
        match (two, eq) {
            (false, false) => ("<", 1),
            (false, true) => ("<=", 2),
            (true, false) => ("<<", 2),
            (true, true) => ("<<=", 3),
        }
    }

    fn binary_operator(&self) -> Option<(&'static str, usize, u8)> {
        let t = self.tok();
        let (op, n): (&'static str, usize) = match t.kind {
            TokenKind::Punctuator if t.text == ">" => self.glued_greater(),
            TokenKind::Punctuator if t.text == "<" => self.glued_less(),
            TokenKind::Punctuator => {
                let op = [
                    "??", "||", "&&", "|", "^", "&", "==", "!=", "===", "!==",
                    "+", "-", "*", "/", "%", "**",
                ]
                .into_iter()
                .find(|op| *op == t.text)?;
                (op, 1)
            }
            TokenKind::Keyword if t.text == "instanceof" => ("instanceof", 1),
            TokenKind::Keyword if t.text == "in" && !self.no_in => ("in", 1),
            TokenKind::Identifier if t.text == "as" => ("as", 1),
            TokenKind::Identifier if t.text == "satisfies" => ("satisfies", 1),
            _ => return None,
        };
        binary_precedence(op).map(|p| (op, n, p))
    }

    fn parse_binary(&mut self, min_prec: u8) -> PResult {
        self.parse_unary()?;
        while let Some((op, n, prec)) = self.binary_operator() {
            let take = if op == "**" { prec >= min_prec } else { prec > min_prec };
            if !take {
                break;
            }
            if op == "as" || op == "satisfies" {
                if self.tok().newline_before {
                    break;
                }
                self.bump();
                if !self.eat_word("const") {
                    self.parse_type()?;
                }
                if op == "satisfies" {
                    self.mark(FeatureId::F0);
                }
                continue;
            }
            self.bump_n(n);
            self.parse_binary(prec)?;
        }
        Ok(())
    }

    fn parse_unary(&mut self) -> PResult {
        self.guarded(|p| p.parse_unary_inner())
    }

    fn parse_unary_inner(&mut self) -> PResult {
        let t = *self.tok();
        match t.kind {
            TokenKind::Punctuator => match t.text {
                "!" | "~" | "+" | "-" | "++" | "--" => {
                    self.bump();
                    return self.parse_unary();
                }
                "<" => {
                    // Type assertion `<T>expr`.
                    self.bump();
                    self.parse_type()?;
                    self.expect(">")?;
                    return self.parse_unary();
                }
                _ => {}
            },
            TokenKind::Keyword if matches!(t.text, "typeof" | "void" | "delete") => {
                self.bump();
                return self.parse_unary();
            }
            TokenKind::Identifier if t.text == "await" && self.await_has_operand() => {
                self.bump();
                return self.parse_unary();
            }
            _ => {}
        }
        self.parse_lhs_expression()?;
        if (self.at("++") || self.at("--")) && !self.tok().newline_before {
            self.bump();
        }
        Ok(())
    }

    fn await_has_operand(&self) -> bool {
        let next = self.nth(1);
        if next.newline_before {
            return false;
        }
        match next.kind {
            TokenKind::Punctuator => matches!(next.text, "(" | "[" | "{" | "!" | "~" | "++" | "--" | "<" | "/" | "/=" | "-" | "+"),
            TokenKind::Identifier => !matches!(next.text, "as" | "satisfies" | "of"),
            TokenKind::Keyword => !matches!(next.text, "in" | "instanceof"),
            TokenKind::Eof | TokenKind::Unknown => false,
            TokenKind::TemplateMiddle | TokenKind::TemplateTail => false,
            _ => true,
        }
    }

    fn starts_expression(&self, t: &Token<'_>) -> bool {
        match t.kind {
            TokenKind::Identifier
            | TokenKind::PrivateName
            | TokenKind::String
            | TokenKind::Number
            | TokenKind::Regex
            | TokenKind::NoSubstitutionTemplate
            | TokenKind::TemplateHead => true,
            TokenKind::Keyword => matches!(
                t.text,
                "this" | "super" | "null" | "true" | "false" | "function" | "class" | "new"
                    | "typeof" | "void" | "delete" | "import"
            ),
            TokenKind::Punctuator => matches!(
                t.text,
                "(" | "[" | "{" | "!" | "~" | "+" | "-" | "++" | "--" | "<" | "/" | "/=" | "@"
            ),
            _ => false,
        }
    }

    fn is_binary_operator_token(&self, t: &Token<'_>) -> bool {
        match t.kind {
            TokenKind::Punctuator => binary_precedence(t.text).is_some(),
            TokenKind::Keyword => t.text == "instanceof" || (t.text == "in" && !self.no_in),
            TokenKind::Identifier => t.text == "as" || t.text == "satisfies",
            _ => false,
        }
    }

    /// Tries `x => ...`, `async x => ...`, `(params) => ...` and
    /// `<T>(params) => ...`. Returns Ok(false) without consuming anything
    /// when the tokens do not form an arrow function.
    fn try_arrow_function(&mut self, allow_return_type: bool) -> PResult<bool> {
        let t = *self.tok();
        let next = *self.nth(1);
        // Fast path: single identifier parameter.
        if t.kind == TokenKind::Identifier && next.is_punct("=>") && !next.newline_before {
            self.bump_n(2);
            self.parse_arrow_body(allow_return_type)?;
            return Ok(true);
        }
        let is_async = t.is_word("async") && !next.newline_before;
        if is_async && next.kind == TokenKind::Identifier && self.nth(2).is_punct("=>") {
            self.bump_n(3);
            self.parse_arrow_body(allow_return_type)?;
            return Ok(true);
        }
        let head_start = if is_async && (next.is_punct("(") || next.is_punct("<")) {
            1
        } else if t.is_punct("(") || t.is_punct("<") {
            0
        } else {
            return Ok(false);
        };
        let start = self.pos;
        if self.failed_arrows.contains(&start) {
            return Ok(false);
        }
        let parsed = self.speculate(|p| {
            p.bump_n(head_start);
            if p.at("<") {
                p.parse_type_parameters(TypeParamOwner::Other)?;
            }
            p.parse_parameters(false)?;
            let has_return_type = p.eat(":");
            if has_return_type {
                p.parse_return_type()?;
            }
            if !p.at("=>") || p.tok().newline_before {
                return p.fail();
            }
            p.bump();
            if has_return_type && !allow_return_type {
                // In the true branch of a conditional, `a ? (b): c => d`
                // only has a return type if a `:` still follows the body.
                p.parse_arrow_body(false)?;
                if !p.at(":") {
                    return p.fail();
                }
                return Ok(true);
            }
            Ok(false)
        });
        match parsed {
            Some(true) => Ok(true),
            Some(false) => {
                self.parse_arrow_body(allow_return_type)?;
                Ok(true)
            }
            None => {
                self.failed_arrows.insert(start);
                Ok(false)
            }
        }
    }

    fn parse_arrow_body(&mut self, allow_return_type: bool) -> PResult {
        if self.at("{") {
            self.parse_function_body()
        } else {
            let no_in = self.no_in;
            self.with_ctx(no_in, false, |p| p.parse_assignment_ex(allow_return_type))
        }
    }

    fn parse_arguments(&mut self) -> PResult {
        self.expect("(")?;
        self.nested_expr(|p| {
            while !p.at(")") {
                p.eat("...");
                p.parse_assignment()?;
                if !p.at(")") {
                    p.expect(",")?;
                }
            }
            Ok(())
        })?;
        self.expect(")")
    }

    /// `<T, U>` in expression position. Succeeds only if the token after
    /// the closing `>` makes the type-argument reading preferable.
    fn parse_type_arguments_in_expression(&mut self) -> PResult {
        self.parse_type_arguments()?;
        let t = *self.tok();
        let ok = match t.kind {
            TokenKind::NoSubstitutionTemplate | TokenKind::TemplateHead => true,
            TokenKind::Punctuator if t.text == "(" => true,
            TokenKind::Punctuator if matches!(t.text, "<" | ">" | "+" | "-") => false,
            _ => t.newline_before || self.is_binary_operator_token(&t) || !self.starts_expression(&t),
        };
        if ok {
            Ok(())
        } else {
            self.fail()
        }
    }

    fn parse_lhs_expression(&mut self) -> PResult {
        if self.at_word("new") {
            self.parse_new_expression()?;
        } else {
            self.parse_primary()?;
        }
        self.parse_call_and_member_suffixes(true)
    }

    fn parse_new_expression(&mut self) -> PResult {
        self.expect_word("new")?;
        if self.eat(".") {
            return self.expect_ident_or_keyword();
        }
        if self.at_word("new") {
            self.parse_new_expression()?;
        } else {
            self.parse_primary()?;
        }
        self.parse_call_and_member_suffixes(false)?;
        if self.at("(") {
            self.parse_arguments()?;
        }
        Ok(())
    }

    fn parse_call_and_member_suffixes(&mut self, allow_calls: bool) -> PResult {
        loop {
            let t = *self.tok();
            match t.kind {
                TokenKind::Punctuator => match t.text {
                    "." => {
                        self.bump();
                        if self.tok().kind == TokenKind::PrivateName {
                            self.bump();
                        } else {
                            self.expect_ident_or_keyword()?;
                        }
                    }
                    "?." => {
                        if !allow_calls {
                            return Ok(());
                        }
                        self.bump();
                        if self.at("(") {
                            self.parse_arguments()?;
                        } else if self.at("[") {
                            self.bump();
                            self.nested_expr(|p| p.parse_expression())?;
                            self.expect("]")?;
                        } else if self.at("<") {
                            self.parse_type_arguments()?;
                            self.parse_arguments()?;
                        } else if self.tok().kind == TokenKind::PrivateName {
                            self.bump();
                        } else {
                            self.expect_ident_or_keyword()?;
                        }
                    }
                    "[" => {
                        self.bump();
                        self.nested_expr(|p| p.parse_expression())?;
                        self.expect("]")?;
                    }
                    "!" if !t.newline_before => {
                        self.bump();
                    }
                    "(" if allow_calls => {
                        self.parse_arguments()?;
                    }
                    "<" => {
                        if self.speculate(|p| p.parse_type_arguments_in_expression()).is_none() {
                            return Ok(());
                        }
                        if !allow_calls && self.at("(") {
                            return Ok(());
                        }
                    }
                    _ => return Ok(()),
                },
                TokenKind::NoSubstitutionTemplate => self.bump(),
                TokenKind::TemplateHead => self.parse_template_expression()?,
                _ => return Ok(()),
            }
        }
    }

    fn parse_template_expression(&mut self) -> PResult {
        // At TemplateHead.
        self.bump();
        loop {
            self.nested_expr(|p| p.parse_expression())?;
            match self.tok().kind {
                TokenKind::TemplateMiddle => self.bump(),
                TokenKind::TemplateTail => {
                    self.bump();
                    return Ok(());
                }
                _ => return self.fail(),
            }
        }
    }

    fn parse_primary(&mut self) -> PResult {
        let t = *self.tok();
        match t.kind {
            TokenKind::Identifier => {
                if t.text == "async" && self.nth(1).is_word("function") && !self.nth(1).newline_before {
                    self.bump();
                    return self.parse_function();
                }
                self.bump();
                Ok(())
            }
            TokenKind::PrivateName
            | TokenKind::String
            | TokenKind::Number
            | TokenKind::Regex
            | TokenKind::NoSubstitutionTemplate => {
                self.bump();
                Ok(())
            }
            TokenKind::TemplateHead => self.parse_template_expression(),
            TokenKind::Keyword => match t.text {
                "this" | "super" | "null" | "true" | "false" => {
                    self.bump();
                    Ok(())
                }
                "function" => self.parse_function(),
                "class" => self.parse_class(),
                "import" => {
                    self.bump();
                    if self.eat(".") {
                        self.expect_ident_or_keyword()
                    } else if self.at("(") {
                        self.parse_arguments()
                    } else {
                        self.fail()
                    }
                }
                _ => self.fail(),
            },
            TokenKind::Punctuator => match t.text {
                "(" => {
                    self.bump();
                    self.nested_expr(|p| p.parse_expression())?;
                    self.expect(")")
                }
                "[" => self.parse_array_literal(),
                "{" => self.parse_object_literal(),
                "@" => {
                    self.parse_decorators()?;
                    self.parse_class()
                }
                _ => self.fail(),
            },
            _ => self.fail(),
        }
    }

    fn parse_array_literal(&mut self) -> PResult {
        self.expect("[")?;
        self.nested_expr(|p| {
            loop {
                if p.at("]") {
                    return Ok(());
                }
                if p.eat(",") {
                    continue;
                }
                p.eat("...");
                p.parse_assignment()?;
                if !p.at("]") {
                    p.expect(",")?;
                }
            }
        })?;
        self.expect("]")
    }

    fn parse_object_literal(&mut self) -> PResult {
        self.expect("{")?;
        self.nested_expr(|p| {
            while !p.at("}") {
                p.parse_object_member()?;
                if !p.at("}") {
                    p.expect(",")?;
                }
            }
            Ok(())
        })?;
        self.expect("}")
    }

    fn parse_object_member(&mut self) -> PResult {
        if self.eat("...") {
            return self.parse_assignment();
        }
        while self.at_modifier_word() && self.next_can_follow_modifier(self.tok().text) {
            self.bump();
        }
        let generator = self.eat("*");
        if !generator
            && (self.at_word("get") || self.at_word("set"))
            && Self::can_follow_modifier(self.nth(1))
        {
            self.bump();
            self.parse_property_name()?;
            self.parse_signature(TypeParamOwner::Other, false)?;
            return self.parse_function_body();
        }
        let shorthand_ok = self.at_ident() || self.at_ident_or_keyword();
        self.parse_property_name()?;
        self.eat("?");
        if generator || self.at("(") || self.at("<") {
            self.parse_signature(TypeParamOwner::Other, false)?;
            return self.parse_function_body();
        }
        if self.eat(":") || self.eat("=") {
            return self.parse_assignment();
        }
        if shorthand_ok {
            Ok(())
        } else {
            self.fail()
        }
    }

    // ----- types ---------------------------------------------------------

    fn parse_type(&mut self) -> PResult {
        self.guarded(|p| p.parse_type_inner())
    }

    fn parse_type_inner(&mut self) -> PResult {
        if self.is_start_of_function_or_constructor_type() {
            return self.parse_function_or_constructor_type();
        }
        self.parse_union_type()?;
        if !self.no_cond_types && !self.tok().newline_before && self.eat_word("extends") {
            self.with_cond_types(false, |p| p.parse_type())?;
            self.expect("?")?;
            self.with_cond_types(true, |p| p.parse_type())?;
            self.expect(":")?;
            self.with_cond_types(true, |p| p.parse_type())?;
        }
        Ok(())
    }

    /// Return types re-allow conditional types even inside an `extends`
    /// clause.
    fn parse_return_type(&mut self) -> PResult {
        self.with_cond_types(true, |p| p.parse_return_type_inner())
    }

    fn parse_return_type_inner(&mut self) -> PResult {
        if self.at_word("asserts")
            && self.nth(1).is_identifier_or_keyword()
            && !self.nth(1).newline_before
        {
            self.bump_n(2);
            if self.eat_word("is") {
                self.parse_type()?;
            }
            return Ok(());
        }
        if self.at_ident() && self.nth(1).is_word("is") && !self.nth(1).newline_before {
            self.bump_n(2);
        }
        self.parse_type()
    }

    fn is_start_of_function_or_constructor_type(&mut self) -> bool {
        if self.at("<") || self.at_word("new") {
            return true;
        }
        if self.at_word("abstract") && self.nth(1).is_word("new") {
            return true;
        }
        self.at("(") && self.lookahead(|p| p.is_unambiguously_function_type())
    }

    fn is_unambiguously_function_type(&mut self) -> bool {
        self.bump(); // (
        if self.at(")") || self.at("...") {
            return true;
        }
        if self.skip_parameter_start() {
            if self.at(":") || self.at(",") || self.at("?") || self.at("=") {
                return true;
            }
            if self.at(")") {
                self.bump();
                if self.at("=>") {
                    return true;
                }
            }
        }
        false
    }

    fn skip_parameter_start(&mut self) -> bool {
        while self.at_modifier_word() && self.next_can_follow_modifier(self.tok().text) {
            self.bump();
        }
        if self.at_ident() || self.at_word("this") {
            self.bump();
            return true;
        }
        if self.at("[") || self.at("{") {
            return self.speculate(|p| p.parse_binding_name()).is_some();
        }
        false
    }

    fn parse_function_or_constructor_type(&mut self) -> PResult {
        let is_abstract = self.eat_word("abstract");
        let is_constructor = self.eat_word("new");
        if self.at("<") {
            self.parse_type_parameters(TypeParamOwner::Other)?;
        }
        self.parse_parameters(false)?;
        self.expect("=>")?;
        self.parse_return_type()?;
        if is_abstract && is_constructor {
            self.mark(FeatureId::F8);
        }
        Ok(())
    }

    fn parse_union_type(&mut self) -> PResult {
        self.parse_union_or_intersection("|")
    }

    fn parse_union_or_intersection(&mut self, op: &'static str) -> PResult {
        let constituent = |p: &mut Self| -> PResult {
            if op == "|" {
                p.parse_union_or_intersection("&")
            } else {
                p.parse_type_operator()
            }
        };
        let leading = self.eat(op);
        if leading && self.is_start_of_function_or_constructor_type() {
            self.parse_function_or_constructor_type()?;
        } else {
            constituent(self)?;
        }
        while self.eat(op) {
            if self.is_start_of_function_or_constructor_type() {
                self.parse_function_or_constructor_type()?;
            } else {
                constituent(self)?;
            }
        }
        Ok(())
    }

    fn parse_type_operator(&mut self) -> PResult {
        self.guarded(|p| p.parse_type_operator_inner())
    }

    fn parse_type_operator_inner(&mut self) -> PResult {
        let t = *self.tok();
        if t.kind == TokenKind::Identifier {
            match t.text {
                "keyof" | "unique" | "readonly" => {
                    self.bump();
                    return self.parse_type_operator();
                }
                "infer" => {
                    self.bump();
                    self.expect_ident()?;
                    let outer_no_cond = self.no_cond_types;
                    let constrained = self.speculate(|p| {
                        p.expect_word("extends")?;
                        p.with_cond_types(false, |p| p.parse_type())?;
                        if outer_no_cond || !p.at("?") {
                            Ok(())
                        } else {
                            p.fail()
                        }
                    });
                    if constrained.is_some() {
                        self.mark(FeatureId::F2);
                    }
                    return Ok(());
                }
                _ => {}
            }
        }
        self.with_cond_types(true, |p| p.parse_postfix_type())
    }

    fn parse_postfix_type(&mut self) -> PResult {
        self.parse_non_array_type()?;
        while !self.tok().newline_before {
            if self.at("!") {
                self.bump();
            } else if self.at("?") {
                let next = *self.nth(1);
                if self.lookahead(|p| {
                    p.bump();
                    p.is_start_of_type()
                }) && !next.is_punct("]")
                {
                    return Ok(());
                }
                self.bump();
            } else if self.at("[") {
                self.bump();
                if !self.at("]") {
                    self.parse_type()?;
                }
                self.expect("]")?;
            } else {
                break;
            }
        }
        Ok(())
    }

    fn is_start_of_type(&mut self) -> bool {
        let t = *self.tok();
        match t.kind {
            TokenKind::Identifier
            | TokenKind::String
            | TokenKind::Number
            | TokenKind::NoSubstitutionTemplate
            | TokenKind::TemplateHead => true,
            TokenKind::Keyword => matches!(
                t.text,
                "void" | "null" | "this" | "typeof" | "true" | "false" | "new" | "import" | "function"
            ),
            TokenKind::Punctuator => match t.text {
                "{" | "[" | "<" | "|" | "&" | "*" | "?" | "!" | "..." => true,
                "-" => self.nth(1).kind == TokenKind::Number,
                "(" => self.lookahead(|p| {
                    p.bump();
                    p.at(")") || p.at("...") || p.at_ident() || p.at_modifier_word() || p.is_start_of_type()
                }),
                _ => false,
            },
            _ => false,
        }
    }

    fn parse_non_array_type(&mut self) -> PResult {
        let t = *self.tok();
        match t.kind {
            TokenKind::String | TokenKind::Number | TokenKind::NoSubstitutionTemplate => {
                self.bump();
                Ok(())
            }
            TokenKind::TemplateHead => self.parse_template_literal_type(),
            TokenKind::Keyword => match t.text {
                "true" | "false" | "null" | "void" => {
                    self.bump();
                    Ok(())
                }
                "this" => {
                    self.bump();
                    if self.at_word("is") && !self.tok().newline_before {
                        self.bump();
                        self.parse_type()?;
                    }
                    Ok(())
                }
                "typeof" => {
                    if self.nth(1).is_word("import") {
                        self.bump();
                        return self.parse_import_type();
                    }
                    self.bump();
                    self.parse_entity_name(true)?;
                    if self.at("<") && !self.tok().newline_before {
                        self.parse_type_arguments()?;
                    }
                    Ok(())
                }
                "import" => self.parse_import_type(),
                _ => self.fail(),
            },
            TokenKind::Punctuator => match t.text {
                "-" if self.nth(1).kind == TokenKind::Number => {
                    self.bump_n(2);
                    Ok(())
                }
                "{" => {
                    if self.lookahead(|p| p.is_start_of_mapped_type()) {
                        self.parse_mapped_type()
                    } else {
                        self.parse_type_literal()
                    }
                }
                "[" => self.parse_tuple_type(),
                "(" => {
                    self.bump();
                    self.with_cond_types(true, |p| p.parse_type())?;
                    self.expect(")")
                }
                _ => self.fail(),
            },
            TokenKind::Identifier => {
                if t.text == "asserts"
                    && self.nth(1).is_identifier_or_keyword()
                    && !self.nth(1).newline_before
                {
                    self.bump_n(2);
                    if self.eat_word("is") {
                        self.parse_type()?;
                    }
                    return Ok(());
                }
                self.parse_type_reference()
            }
            _ => self.fail(),
        }
    }

    fn parse_template_literal_type(&mut self) -> PResult {
        self.bump(); // TemplateHead
        loop {
            self.with_cond_types(true, |p| p.parse_type())?;
            match self.tok().kind {
                TokenKind::TemplateMiddle => self.bump(),
                TokenKind::TemplateTail => {
                    self.bump();
                    break;
                }
                _ => return self.fail(),
            }
        }
        self.mark(FeatureId::F9);
        Ok(())
    }

    fn parse_import_type(&mut self) -> PResult {
        self.expect_word("import")?;
        self.expect("(")?;
        self.with_cond_types(true, |p| p.parse_type())?;
        if self.eat(",") {
            // `{ assert: { ... } }` on import types.
            self.expect("{")?;
            self.expect_word("assert")?;
            self.expect(":")?;
            self.expect("{")?;
            self.nested_expr(|p| {
                while !p.at("}") {
                    if p.tok().kind == TokenKind::String {
                        p.bump();
                    } else {
                        p.expect_ident_or_keyword()?;
                    }
                    p.expect(":")?;
                    p.parse_assignment()?;
                    if !p.at("}") {
                        p.expect(",")?;
                    }
                }
                Ok(())
            })?;
            self.expect("}")?;
            self.expect("}")?;
        }
        self.expect(")")?;
        if self.eat(".") {
            self.parse_entity_name(true)?;
        }
        if self.at("<") && !self.tok().newline_before {
            self.parse_type_arguments()?;
        }
        Ok(())
    }

    fn parse_entity_name(&mut self, allow_reserved_first: bool) -> PResult {
        if allow_reserved_first {
            self.expect_ident_or_keyword()?;
        } else {
            self.expect_ident()?;
        }
        while self.at(".") {
            self.bump();
            if self.tok().kind == TokenKind::PrivateName {
                self.bump();
            } else {
                self.expect_ident_or_keyword()?;
            }
        }
        Ok(())
    }

    fn parse_type_reference(&mut self) -> PResult {
        self.parse_entity_name(false)?;
        if self.at("<") && !self.tok().newline_before {
            self.parse_type_arguments()?;
        }
        Ok(())
    }

    fn parse_type_arguments(&mut self) -> PResult {
        self.expect("<")?;
        self.with_ctx(false, false, |p| {
            loop {
                p.parse_type()?;
                if !p.eat(",") {
                    break;
                }
                if p.at(">") {
                    break;
                }
            }
            Ok(())
        })?;
        self.expect(">")
    }

    fn parse_type_parameters(&mut self, owner: TypeParamOwner) -> PResult {
        self.expect("<")?;
        let mut variance = false;
        self.with_ctx(false, false, |p| {
            while !p.at(">") {
                while p.at_modifier_word() && p.next_can_follow_modifier(p.tok().text) {
                    if p.at_word("in") || p.at_word("out") {
                        variance = true;
                    }
                    p.bump();
                }
                p.expect_ident()?;
                if p.eat_word("extends") {
                    p.parse_type()?;
                }
                if p.eat("=") {
                    p.parse_type()?;
                }
                if !p.at(">") {
                    p.expect(",")?;
                }
            }
            Ok(())
        })?;
        self.expect(">")?;
        if variance && owner == TypeParamOwner::VarianceAllowed {
            self.mark(FeatureId::F3);
        }
        Ok(())
    }

    fn is_start_of_mapped_type(&mut self) -> bool {
        self.bump(); // {
        if self.at("+") || self.at("-") {
            self.bump();
            return self.at_word("readonly");
        }
        self.eat_word("readonly");
        self.at("[") && self.nth(1).kind == TokenKind::Identifier && self.nth(2).is_word("in")
    }

    fn parse_mapped_type(&mut self) -> PResult {
        self.expect("{")?;
        if self.eat("+") || self.eat("-") {
            self.expect_word("readonly")?;
        } else {
            self.eat_word("readonly");
        }
        self.expect("[")?;
        self.expect_ident()?;
        self.expect_word("in")?;
        self.with_ctx(false, false, |p| p.parse_type())?;
        let remapped = self.eat_word("as");
        if remapped {
            self.with_ctx(false, false, |p| p.parse_type())?;
        }
        self.expect("]")?;
        if self.eat("+") || self.eat("-") {
            self.expect("?")?;
        } else {
            self.eat("?");
        }
        if self.eat(":") {
            self.with_ctx(false, false, |p| p.parse_type())?;
        }
        if !self.eat(";") {
            self.eat(",");
        }
        self.expect("}")?;
        if remapped {
            self.mark(FeatureId::F10);
        }
        Ok(())
    }

    fn parse_tuple_type(&mut self) -> PResult {
        self.expect("[")?;
        self.with_ctx(false, false, |p| {
            while !p.at("]") {
                if !p.at("...") && !p.is_start_of_type() {
                    return p.fail();
                }
                let named = p.lookahead(|p| {
                    p.eat("...");
                    if !p.at_ident_or_keyword() {
                        return false;
                    }
                    p.bump();
                    p.at(":") || (p.at("?") && p.nth(1).is_punct(":"))
                });
                if named {
                    p.eat("...");
                    p.bump();
                    p.eat("?");
                    p.expect(":")?;
                    p.eat("...");
                    p.parse_type()?;
                    p.mark(FeatureId::F11);
                } else {
                    p.eat("...");
                    p.parse_type()?;
                }
                if !p.at("]") {
                    p.expect(",")?;
                }
            }
            Ok(())
        })?;
        self.expect("]")
    }

    fn parse_type_literal(&mut self) -> PResult {
        self.expect("{")?;
        self.with_ctx(false, false, |p| {
            while !p.at("}") {
                if p.at_eof() {
                    return p.fail();
                }
                p.parse_type_member()?;
                if !p.eat(",") && !p.eat(";") && !p.at("}") && !p.tok().newline_before {
                    return p.fail();
                }
            }
            Ok(())
        })?;
        self.expect("}")
    }

    fn parse_type_member(&mut self) -> PResult {
        self.guarded(|p| p.parse_type_member_inner())
    }

    fn parse_type_member_inner(&mut self) -> PResult {
        if self.at("(") || self.at("<") {
            return self.parse_signature(TypeParamOwner::Other, false);
        }
        if self.at_word("new") && (self.nth(1).is_punct("(") || self.nth(1).is_punct("<")) {
            self.bump();
            return self.parse_signature(TypeParamOwner::Other, false);
        }
        while self.at_modifier_word() && self.next_can_follow_modifier(self.tok().text) {
            self.bump();
        }
        if (self.at_word("get") || self.at_word("set")) && Self::can_follow_modifier(self.nth(1)) {
            self.bump();
            self.parse_property_name()?;
            return self.parse_signature(TypeParamOwner::Other, false);
        }
        if self.at("[") && self.is_index_signature() {
            return self.parse_index_signature();
        }
        self.parse_property_name()?;
        self.eat("?");
        if self.at("(") || self.at("<") {
            return self.parse_signature(TypeParamOwner::Other, false);
        }
        if self.eat(":") {
            self.parse_type()?;
        }
        Ok(())
    }
}
