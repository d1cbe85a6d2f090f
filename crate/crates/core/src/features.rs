//! The studied TypeScript syntax features and the compiler releases that
//! introduced them.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// One of the thirteen syntactic features tracked by the detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FeatureId {
    /// `expr satisfies Type`
    F0,
    /// `accessor` modifier on a class property
    F1,
    /// `infer X extends C` constraint
    F2,
    /// `in` / `out` variance annotations on type parameters
    F3,
    /// `type` modifier on a single import/export specifier
    F4,
    /// `assert { ... }` clause on import/export declarations
    F5,
    /// `static { ... }` blocks in class bodies
    F6,
    /// `override` modifier on class members
    F7,
    /// `abstract new (...) => T` constructor types
    F8,
    /// Template literal types
    F9,
    /// `as` key remapping in mapped types
    F10,
    /// Labeled tuple elements
    F11,
    /// `&&=`, `||=`, `??=`
    F12,
}

impl FeatureId {
    pub const COUNT: usize = 13;

    pub const ALL: [FeatureId; 13] = [
        FeatureId::F0,
        FeatureId::F1,
        FeatureId::F2,
        FeatureId::F3,
        FeatureId::F4,
        FeatureId::F5,
        FeatureId::F6,
        FeatureId::F7,
        FeatureId::F8,
        FeatureId::F9,
        FeatureId::F10,
        FeatureId::F11,
        FeatureId::F12,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<FeatureId> {
        Self::ALL.get(index).copied()
    }

    pub fn bit(self) -> u16 {
        1 << self.index()
    }

    /// Short id such as `f9`.
    pub fn code(self) -> &'static str {
        const CODES: [&str; 13] = [
            "f0", "f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9", "f10", "f11", "f12",
        ];
        CODES[self.index()]
    }

    pub fn display_name(self) -> &'static str {
        match self {
            FeatureId::F0 => "satisfies operator",
            FeatureId::F1 => "accessor property",
            FeatureId::F2 => "extends constraint on infer",
            FeatureId::F3 => "variance annotations in and out",
            FeatureId::F4 => "type import modifier",
            FeatureId::F5 => "import assertions",
            FeatureId::F6 => "static blocks in classes",
            FeatureId::F7 => "override modifier on methods",
            FeatureId::F8 => "abstract construct signatures",
            FeatureId::F9 => "template literal types",
            FeatureId::F10 => "key remapping in mapped types",
            FeatureId::F11 => "labeled tuple elements",
            FeatureId::F12 => "short-circuiting assignment",
        }
    }

    /// The TypeScript release (major.minor) that introduced the feature.
    pub fn introducing_version(self) -> &'static str {
        match self {
            FeatureId::F0 | FeatureId::F1 => "4.9",
            FeatureId::F2 | FeatureId::F3 => "4.7",
            FeatureId::F4 | FeatureId::F5 => "4.5",
            FeatureId::F6 => "4.4",
            FeatureId::F7 => "4.3",
            FeatureId::F8 => "4.2",
            FeatureId::F9 | FeatureId::F10 => "4.1",
            FeatureId::F11 | FeatureId::F12 => "4.0",
        }
    }

    pub fn release_date(self) -> NaiveDate {
        ReleaseTable::standard()
            .release_date(self.introducing_version())
            .expect("every feature maps to a release in the table")
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown feature id `{0}`")]
pub struct UnknownFeature(pub String);

impl FromStr for FeatureId {
    type Err = UnknownFeature;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s
            .strip_prefix('f')
            .or_else(|| s.strip_prefix('F'))
            .ok_or_else(|| UnknownFeature(s.to_string()))?;
        if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
            return Err(UnknownFeature(s.to_string()));
        }
        digits
            .parse::<usize>()
            .ok()
            .and_then(FeatureId::from_index)
            .ok_or_else(|| UnknownFeature(s.to_string()))
    }
}

impl From<FeatureId> for String {
    fn from(id: FeatureId) -> String {
        id.code().to_string()
    }
}

impl TryFrom<String> for FeatureId {
    type Error = UnknownFeature;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

/// A compiler release and the features it introduced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Release {
    pub version: &'static str,
    pub release_date: NaiveDate,
    pub features: &'static [FeatureId],
}

/// Day Zero for every studied release.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReleaseTable {
    entries: Vec<Release>,
}

fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid calendar date")
}

impl ReleaseTable {
    pub fn standard() -> ReleaseTable {
        use FeatureId::*;
        ReleaseTable {
            entries: vec![
                Release { version: "4.9", release_date: ymd(2022, 11, 15), features: &[F0, F1] },
                Release { version: "4.7", release_date: ymd(2022, 5, 24), features: &[F2, F3] },
                Release { version: "4.5", release_date: ymd(2021, 11, 17), features: &[F4, F5] },
                Release { version: "4.4", release_date: ymd(2021, 8, 26), features: &[F6] },
                Release { version: "4.3", release_date: ymd(2021, 5, 26), features: &[F7] },
                Release { version: "4.2", release_date: ymd(2021, 2, 23), features: &[F8] },
                Release { version: "4.1", release_date: ymd(2020, 11, 19), features: &[F9, F10] },
                Release { version: "4.0", release_date: ymd(2020, 8, 20), features: &[F11, F12] },
            ],
        }
    }

    pub fn entries(&self) -> &[Release] {
        &self.entries
    }

    pub fn versions(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|r| r.version)
    }

    pub fn release_date(&self, version: &str) -> Option<NaiveDate> {
        self.entries
            .iter()
            .find(|r| r.version == version)
            .map(|r| r.release_date)
    }
}

impl Default for ReleaseTable {
    fn default() -> Self {
        Self::standard()
    }
}
