//! Mines git histories for the first use of TypeScript syntax features and
//! compiler versions, and turns those first uses into release-relative
//! adoption curves.

pub mod analytics;
pub mod config;
pub mod detect;
pub mod features;
pub mod hash;
pub mod miner;
pub mod pipeline;
pub mod report;
pub mod synth;
pub mod version;

pub use analytics::{AdoptionCurve, AdoptionEvent, Subject};
pub use config::RunConfig;
pub use detect::{detect_features, DetectionCache, FeatureSet, DETECTOR_VERSION};
pub use features::{FeatureId, ReleaseTable};
pub use hash::ContentHash;
pub use version::ResolvedVersion;
