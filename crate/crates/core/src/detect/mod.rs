//! Feature detection over TypeScript source text.

pub mod cache;
pub mod lexer;
mod parser;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::features::FeatureId;

pub use cache::DetectionCache;
pub use lexer::{scan, LexError, LexErrorKind, Token, TokenKind};

/// Bumped whenever detection results can change for the same input.
/// Cached entries carrying a different value are ignored.
pub const DETECTOR_VERSION: u32 = 1;

const ALL_BITS: u16 = (1 << FeatureId::COUNT) - 1;

/// Which features a file uses, plus whether it parsed at all.
///
/// A file that failed to parse never reports any feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "RawFeatureSet", into = "RawFeatureSet")]
pub struct FeatureSet {
    flags: u16,
    parsed_ok: bool,
}

#[derive(Serialize, Deserialize)]
struct RawFeatureSet {
    flags: u16,
    parsed_ok: bool,
}

impl TryFrom<RawFeatureSet> for FeatureSet {
    type Error = String;

    fn try_from(raw: RawFeatureSet) -> Result<Self, Self::Error> {
        FeatureSet::from_bits(raw.flags, raw.parsed_ok)
            .ok_or_else(|| format!("invalid feature set: flags={:#x} parsed_ok={}", raw.flags, raw.parsed_ok))
    }
}

impl From<FeatureSet> for RawFeatureSet {
    fn from(set: FeatureSet) -> Self {
        RawFeatureSet { flags: set.flags, parsed_ok: set.parsed_ok }
    }
}

impl FeatureSet {
    /// Parsed successfully, no features.
    pub const EMPTY: FeatureSet = FeatureSet { flags: 0, parsed_ok: true };

    /// The result for a file that could not be parsed.
    pub const UNPARSED: FeatureSet = FeatureSet { flags: 0, parsed_ok: false };

    /// Rejects bits above f12 and flags on an unparsed file.
    pub fn from_bits(flags: u16, parsed_ok: bool) -> Option<FeatureSet> {
        if flags & !ALL_BITS != 0 || (!parsed_ok && flags != 0) {
            return None;
        }
        Some(FeatureSet { flags, parsed_ok })
    }

    pub fn from_features<I: IntoIterator<Item = FeatureId>>(features: I) -> FeatureSet {
        let flags = features.into_iter().fold(0, |acc, f| acc | f.bit());
        FeatureSet { flags, parsed_ok: true }
    }

    pub fn bits(self) -> u16 {
        self.flags
    }

    pub fn parsed_ok(self) -> bool {
        self.parsed_ok
    }

    pub fn contains(self, feature: FeatureId) -> bool {
        self.flags & feature.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.flags == 0
    }

    pub fn len(self) -> usize {
        self.flags.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = FeatureId> {
        FeatureId::ALL.into_iter().filter(move |f| self.contains(*f))
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.parsed_ok {
            return f.write_str("<unparsed>");
        }
        f.write_str("{")?;
        for (i, id) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(id.code())?;
        }
        f.write_str("}")
    }
}

/// Parses `source` and reports the features it uses.
///
/// Unrecoverable syntax at top level, or an unterminated string, template
/// or comment, yields [`FeatureSet::UNPARSED`].
pub fn detect_features(source: &str) -> FeatureSet {
    analyze(source).features
}

/// Detection result plus how much error recovery it took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Analysis {
    pub features: FeatureSet,
    /// Statements or class members skipped while resynchronizing.
    pub recovered_errors: usize,
    /// Byte offset where the first of those errors was detected.
    pub first_recovery_offset: Option<usize>,
}

/// [`detect_features`] with parser diagnostics.
pub fn analyze(source: &str) -> Analysis {
    let Ok(tokens) = lexer::scan(source) else {
        return Analysis { features: FeatureSet::UNPARSED, recovered_errors: 0, first_recovery_offset: None };
    };
    let mut parser = parser::Parser::new(&tokens);
    let features = match parser.parse_source_file() {
        Ok(()) => FeatureSet { flags: parser.flags(), parsed_ok: true },
        Err(_) => FeatureSet::UNPARSED,
    };
    Analysis {
        features,
        recovered_errors: parser.recovered_errors(),
        first_recovery_offset: parser.first_recovery_offset(),
    }
}

/// Like [`detect_features`] for raw file bytes; invalid UTF-8 is replaced.
pub fn detect_features_bytes(bytes: &[u8]) -> FeatureSet {
    detect_features(&String::from_utf8_lossy(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use FeatureId::*;

    fn set(features: &[FeatureId]) -> FeatureSet {
        FeatureSet::from_features(features.iter().copied())
    }

    #[track_caller]
    fn check(src: &str, expected: &[FeatureId]) {
        assert_eq!(detect_features(src), set(expected), "source: {src}");
    }

    #[test]
    fn documented_examples() {
        check("const x = y satisfies Foo;", &[F0]);
        check("let satisfies = 1; satisfies + 2;", &[]);
        check("a ||= b;", &[F12]);
        check("class C { static { init(); } }", &[F6]);
        check("type T = `v${V}`;", &[F9]);
        check("const s = `v${v}`;", &[]);
        check("interface Box<out T> {}", &[F3]);
        check("for (k in o) {}", &[]);
        check("", &[]);
    }

    #[test]
    fn one_positive_per_feature() {
        check("class A { accessor x = 1; }", &[F1]);
        check("type X<T> = T extends [infer H extends string, ...unknown[]] ? H : never;", &[F2]);
        check("import { type A, B } from 'm';", &[F4]);
        check("import data from './d.json' assert { type: 'json' };", &[F5]);
        check("class B extends A { override m() {} }", &[F7]);
        check("type C = abstract new () => object;", &[F8]);
        check("type M<T> = { [K in keyof T as `get${string & K}`]: T[K] };", &[F9, F10]);
        check("type P = [first: string, second?: number, ...rest: boolean[]];", &[F11]);
    }

    #[test]
    fn whole_clause_type_import_is_not_f4() {
        check("import type { A } from 'm';", &[]);
        check("export type { A } from 'm';", &[]);
        check("import { type } from 'm';", &[]);
        check("import { type as } from 'm';", &[F4]);
        check("import { type as as } from 'm';", &[]);
        check("import { type as as x } from 'm';", &[F4]);
    }

    #[test]
    fn infer_constraint_in_conditional_check_position_is_not_constraint() {
        check("type X<T> = T extends infer U extends string ? 1 : 0;", &[F2]);
        check("type Y<T> = T extends (infer U extends string ? 1 : 0) ? 1 : 0;", &[]);
    }

    #[test]
    fn modifiers_need_same_line() {
        check("class A { override\n foo() {} }", &[]);
        check("class A { static #x = 1; accessor #y = 2; }", &[F1]);
        check("class A { accessor() {} }", &[]);
    }

    #[test]
    fn unparsed_files_report_nothing() {
        let r = detect_features("let s = 'abc");
        assert_eq!(r, FeatureSet::UNPARSED);
        let r = detect_features("a ||= b; function f( {");
        assert!(!r.parsed_ok());
        assert!(r.is_empty());
    }

    #[test]
    fn recovers_after_bad_statement() {
        let r = detect_features("let = = ;\na ??= 1;");
        assert_eq!(r, set(&[F12]));
    }

    #[test]
    fn deep_nesting_does_not_overflow() {
        let src = format!("x = {}1{};", "(".repeat(5000), ")".repeat(5000));
        let r = detect_features(&src);
        assert!(r.parsed_ok());
        let src = format!("type T = {}1{};", "[".repeat(5000), "]".repeat(5000));
        assert!(detect_features(&src).parsed_ok());
    }

    #[test]
    fn feature_set_bits_validate() {
        assert!(FeatureSet::from_bits(1 << 13, true).is_none());
        assert!(FeatureSet::from_bits(1, false).is_none());
        let s = FeatureSet::from_bits(0b1_0000_0000_0001, true).unwrap();
        assert_eq!(s.to_string(), "{f0,f12}");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"flags":4097,"parsed_ok":true}"#);
        assert_eq!(serde_json::from_str::<FeatureSet>(&json).unwrap(), s);
    }
}
