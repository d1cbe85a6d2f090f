//! A TypeScript scanner.
//!
//! Produces a flat token stream with comments and whitespace removed. Template
//! literals are split into head/middle/tail parts, and a `/` is read as a
//! regular expression or a division operator based on the previous token.
//! `<` and `>` are always emitted on their own; the parser glues `<<`, `>=`
//! and friends back together from adjacent spans.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    Keyword,
    PrivateName,
    Punctuator,
    String,
    Number,
    Regex,
    NoSubstitutionTemplate,
    TemplateHead,
    TemplateMiddle,
    TemplateTail,
    /// A character that cannot start any token.
    Unknown,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    pub start: usize,
    pub end: usize,
    /// A line terminator occurs between the previous token and this one.
    pub newline_before: bool,
}

impl Token<'_> {
    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punctuator && self.text == p
    }

    pub fn is_word(&self, w: &str) -> bool {
        matches!(self.kind, TokenKind::Identifier | TokenKind::Keyword) && self.text == w
    }

    pub fn is_identifier_or_keyword(&self) -> bool {
        matches!(self.kind, TokenKind::Identifier | TokenKind::Keyword)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexErrorKind {
    UnterminatedString,
    UnterminatedTemplate,
    UnterminatedComment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub struct LexError {
    pub kind: LexErrorKind,
    pub offset: usize,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            LexErrorKind::UnterminatedString => "unterminated string literal",
            LexErrorKind::UnterminatedTemplate => "unterminated template literal",
            LexErrorKind::UnterminatedComment => "unterminated block comment",
        };
        write!(f, "{what} starting at byte {}", self.offset)
    }
}

/// Reserved words. Contextual keywords (`type`, `as`, `satisfies`, ...) are
/// scanned as identifiers and interpreted by the parser.
const RESERVED: &[&str] = &[
    "break", "case", "catch", "class", "const", "continue", "debugger", "default", "delete", "do",
    "else", "enum", "export", "extends", "false", "finally", "for", "function", "if", "import",
    "in", "instanceof", "new", "null", "return", "super", "switch", "this", "throw", "true", "try",
    "typeof", "var", "void", "while", "with",
];

pub fn is_reserved_word(word: &str) -> bool {
    RESERVED.contains(&word)
}

/// Longest-match punctuator table, longest entries first. `<` and `>` are
/// always emitted alone; the parser joins adjacent ones when it needs a
/// shift or comparison operator, since `Foo<<T>() => T>` and `Foo<Bar<T>>`
/// close and open type argument lists there.
const PUNCTUATORS: &[&str] = &[
    "...", "===", "!==", "**=", "&&=", "||=", "??=", "=>", "==", "!=", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "++", "--", "&&", "||", "??", "?.", "**", "{", "}",
    "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/", "%", "&", "|", "^", "!", "~",
    "?", ":", "=", ".", "@",
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Brace {
    Plain,
    Template,
}

struct Scanner<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    tokens: Vec<Token<'a>>,
    braces: Vec<Brace>,
    newline_before: bool,
}

/// Tokenizes a whole source file.
pub fn scan(source: &str) -> Result<Vec<Token<'_>>, LexError> {
    let mut s = Scanner {
        src: source,
        bytes: source.as_bytes(),
        pos: 0,
        tokens: Vec::with_capacity(source.len() / 4),
        braces: Vec::new(),
        newline_before: false,
    };
    s.run()?;
    Ok(s.tokens)
}

fn is_line_terminator(c: char) -> bool {
    matches!(c, '\n' | '\r' | '\u{2028}' | '\u{2029}')
}

fn is_id_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '$' || c == '_' || (!c.is_ascii() && c.is_alphabetic())
}

fn is_id_part(c: char) -> bool {
    c.is_ascii_alphanumeric()
        || c == '$'
        || c == '_'
        || c == '\u{200C}'
        || c == '\u{200D}'
        || (!c.is_ascii() && (c.is_alphanumeric() || is_combining(c)))
}

fn is_combining(c: char) -> bool {
    matches!(c as u32, 0x0300..=0x036F | 0x1AB0..=0x1AFF | 0x1DC0..=0x1DFF | 0x20D0..=0x20FF | 0xFE20..=0xFE2F)
}

impl<'a> Scanner<'a> {
    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn byte_at(&self, i: usize) -> Option<u8> {
        self.bytes.get(i).copied()
    }

    fn push(&mut self, kind: TokenKind, start: usize) {
        self.tokens.push(Token {
            kind,
            text: &self.src[start..self.pos],
            start,
            end: self.pos,
            newline_before: self.newline_before,
        });
        self.newline_before = false;
    }

    fn run(&mut self) -> Result<(), LexError> {
        if self.src.starts_with('\u{FEFF}') {
            self.pos = '\u{FEFF}'.len_utf8();
        }
        if self.src[self.pos..].starts_with("#!") {
            self.skip_line();
        }
        loop {
            self.skip_trivia()?;
            let Some(c) = self.peek_char() else { break };
            let start = self.pos;
            match c {
                '"' | '\'' => {
                    self.scan_string(c)?;
                    self.push(TokenKind::String, start);
                }
                '`' => {
                    self.pos += 1;
                    let kind = self.scan_template_continuation(start)?;
                    self.push(kind, start);
                }
                '0'..='9' => {
                    self.scan_number();
                    self.push(TokenKind::Number, start);
                }
                '.' if matches!(self.byte_at(self.pos + 1), Some(b'0'..=b'9')) => {
                    self.scan_number();
                    self.push(TokenKind::Number, start);
                }
                '#' if self.src[self.pos + 1..].chars().next().is_some_and(is_id_start) => {
                    self.pos += 1;
                    self.scan_identifier_rest();
                    self.push(TokenKind::PrivateName, start);
                }
                '}' => {
                    match self.braces.pop() {
                        Some(Brace::Template) => {
                            self.pos += 1;
                            let kind = match self.scan_template_continuation(start)? {
                                TokenKind::TemplateHead => TokenKind::TemplateMiddle,
                                _ => TokenKind::TemplateTail,
                            };
                            self.push(kind, start);
                        }
                        _ => {
                            self.pos += 1;
                            self.push(TokenKind::Punctuator, start);
                        }
                    }
                }
                '{' => {
                    self.braces.push(Brace::Plain);
                    self.pos += 1;
                    self.push(TokenKind::Punctuator, start);
                }
                '/' if self.regex_allowed() && self.try_scan_regex() => {
                    self.push(TokenKind::Regex, start);
                }
                c if is_id_start(c) || c == '\\' => {
                    if self.scan_identifier() {
                        let kind = if is_reserved_word(&self.src[start..self.pos]) {
                            TokenKind::Keyword
                        } else {
                            TokenKind::Identifier
                        };
                        self.push(kind, start);
                    } else {
                        self.pos = start + 1;
                        self.push(TokenKind::Unknown, start);
                    }
                }
                _ => {
                    if let Some(p) = self.match_punctuator() {
                        self.pos += p.len();
                    } else {
                        self.pos += c.len_utf8();
                        self.push(TokenKind::Unknown, start);
                        continue;
                    }
                    self.push(TokenKind::Punctuator, start);
                }
            }
        }
        let end = self.src.len();
        if self.braces.contains(&Brace::Template) {
            return Err(LexError { kind: LexErrorKind::UnterminatedTemplate, offset: end });
        }
        self.tokens.push(Token {
            kind: TokenKind::Eof,
            text: "",
            start: end,
            end,
            newline_before: self.newline_before,
        });
        Ok(())
    }

    fn skip_line(&mut self) {
        while let Some(c) = self.peek_char() {
            if is_line_terminator(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn skip_trivia(&mut self) -> Result<(), LexError> {
        while let Some(c) = self.peek_char() {
            if is_line_terminator(c) {
                self.newline_before = true;
                self.pos += c.len_utf8();
            } else if c.is_whitespace() || c == '\u{FEFF}' {
                self.pos += c.len_utf8();
            } else if c == '/' && self.byte_at(self.pos + 1) == Some(b'/') {
                self.skip_line();
            } else if c == '/' && self.byte_at(self.pos + 1) == Some(b'*') {
                let start = self.pos;
                match self.src[self.pos + 2..].find("*/") {
                    Some(rel) => {
                        let body = &self.src[self.pos + 2..self.pos + 2 + rel];
                        if body.contains(is_line_terminator) {
                            self.newline_before = true;
                        }
                        self.pos += 2 + rel + 2;
                    }
                    None => {
                        return Err(LexError { kind: LexErrorKind::UnterminatedComment, offset: start })
                    }
                }
            } else {
                break;
            }
        }
        Ok(())
    }

    fn scan_string(&mut self, quote: char) -> Result<(), LexError> {
        let start = self.pos;
        self.pos += 1;
        while let Some(c) = self.peek_char() {
            self.pos += c.len_utf8();
            if c == quote {
                return Ok(());
            }
            if c == '\\' {
                // Escapes, including line continuations.
                if let Some(next) = self.peek_char() {
                    self.pos += next.len_utf8();
                    if next == '\r' && self.byte_at(self.pos) == Some(b'\n') {
                        self.pos += 1;
                    }
                }
            } else if c == '\n' || c == '\r' {
                break;
            }
        }
        Err(LexError { kind: LexErrorKind::UnterminatedString, offset: start })
    }

    /// Scans template characters after a backtick or after the `}` closing a
    /// substitution. Returns `TemplateHead` when it stops at `${`.
    fn scan_template_continuation(&mut self, start: usize) -> Result<TokenKind, LexError> {
        while let Some(c) = self.peek_char() {
            self.pos += c.len_utf8();
            match c {
                '`' => return Ok(TokenKind::NoSubstitutionTemplate),
                '\\' => {
                    if let Some(next) = self.peek_char() {
                        self.pos += next.len_utf8();
                    }
                }
                '$' if self.byte_at(self.pos) == Some(b'{') => {
                    self.pos += 1;
                    self.braces.push(Brace::Template);
                    return Ok(TokenKind::TemplateHead);
                }
                _ => {}
            }
        }
        Err(LexError { kind: LexErrorKind::UnterminatedTemplate, offset: start })
    }

    fn scan_digits(&mut self, pred: impl Fn(u8) -> bool) {
        while let Some(b) = self.byte_at(self.pos) {
            if pred(b) || b == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn scan_number(&mut self) {
        let b0 = self.bytes[self.pos];
        let b1 = self.byte_at(self.pos + 1).map(|b| b.to_ascii_lowercase());
        if b0 == b'0' && matches!(b1, Some(b'x') | Some(b'o') | Some(b'b')) {
            self.pos += 2;
            self.scan_digits(|b| b.is_ascii_hexdigit());
        } else {
            self.scan_digits(|b| b.is_ascii_digit());
            if self.byte_at(self.pos) == Some(b'.') {
                self.pos += 1;
                self.scan_digits(|b| b.is_ascii_digit());
            }
            if matches!(self.byte_at(self.pos), Some(b'e') | Some(b'E')) {
                let save = self.pos;
                self.pos += 1;
                if matches!(self.byte_at(self.pos), Some(b'+') | Some(b'-')) {
                    self.pos += 1;
                }
                if matches!(self.byte_at(self.pos), Some(b'0'..=b'9')) {
                    self.scan_digits(|b| b.is_ascii_digit());
                } else {
                    self.pos = save;
                }
            }
        }
        if self.byte_at(self.pos) == Some(b'n') {
            self.pos += 1;
        }
    }

    /// Returns false when an escape sequence in the identifier is malformed.
    fn scan_identifier(&mut self) -> bool {
        match self.peek_char() {
            Some('\\') => {
                if !self.scan_unicode_escape() {
                    return false;
                }
            }
            Some(c) => self.pos += c.len_utf8(),
            None => return false,
        }
        self.scan_identifier_rest()
    }

    fn scan_identifier_rest(&mut self) -> bool {
        while let Some(c) = self.peek_char() {
            if c == '\\' {
                if !self.scan_unicode_escape() {
                    return false;
                }
            } else if is_id_part(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        true
    }

    fn scan_unicode_escape(&mut self) -> bool {
        let rest = &self.bytes[self.pos..];
        if rest.len() < 2 || rest[1] != b'u' {
            return false;
        }
        if rest.get(2) == Some(&b'{') {
            match rest[3..].iter().position(|&b| b == b'}') {
                Some(n) if n > 0 && rest[3..3 + n].iter().all(u8::is_ascii_hexdigit) => {
                    self.pos += 3 + n + 1;
                    true
                }
                _ => false,
            }
        } else if rest.len() >= 6 && rest[2..6].iter().all(u8::is_ascii_hexdigit) {
            self.pos += 6;
            true
        } else {
            false
        }
    }

    fn match_punctuator(&self) -> Option<&'static str> {
        let rest = &self.src[self.pos..];
        for p in PUNCTUATORS {
            if rest.starts_with(p) {
                // `?.` followed by a digit is a conditional with a decimal.
                if *p == "?." && matches!(self.byte_at(self.pos + 2), Some(b'0'..=b'9')) {
                    continue;
                }
                return Some(p);
            }
        }
        None
    }

    /// Whether a `/` at the current position may begin a regular expression,
    /// judged from the previous significant token.
    fn regex_allowed(&self) -> bool {
        let Some(prev) = self.tokens.last() else { return true };
        match prev.kind {
            TokenKind::Number
            | TokenKind::String
            | TokenKind::Regex
            | TokenKind::NoSubstitutionTemplate
            | TokenKind::TemplateTail
            | TokenKind::PrivateName => false,
            TokenKind::Identifier => matches!(prev.text, "of" | "yield" | "await"),
            TokenKind::Keyword => !matches!(prev.text, "this" | "super" | "null" | "true" | "false"),
            TokenKind::Punctuator => !matches!(prev.text, ")" | "]" | "++" | "--"),
            TokenKind::TemplateHead | TokenKind::TemplateMiddle => true,
            TokenKind::Unknown | TokenKind::Eof => true,
        }
    }

    /// Attempts to read a regular expression literal. Leaves the position
    /// untouched and returns false when the body runs into a line break, so
    /// the slash is re-read as a division operator.
    fn try_scan_regex(&mut self) -> bool {
        let start = self.pos;
        let mut i = self.pos + 1;
        let mut in_class = false;
        // `/=` and `//` never reach here as regex bodies: `//` was consumed as
        // a comment, and an empty body is not a regex.
        if self.byte_at(i) == Some(b'*') {
            return false;
        }
        loop {
            let Some(c) = self.src[i..].chars().next() else { return false };
            if is_line_terminator(c) {
                return false;
            }
            i += c.len_utf8();
            match c {
                '\\' => match self.src[i..].chars().next() {
                    Some(n) if !is_line_terminator(n) => i += n.len_utf8(),
                    _ => return false,
                },
                '[' => in_class = true,
                ']' => in_class = false,
                '/' if !in_class => break,
                _ => {}
            }
        }
        while let Some(c) = self.src[i..].chars().next() {
            if is_id_part(c) {
                i += c.len_utf8();
            } else {
                break;
            }
        }
        debug_assert!(i > start);
        self.pos = i;
        true
    }
}
