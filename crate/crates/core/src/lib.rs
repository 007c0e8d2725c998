//! Language identification and code-switching detection for short,
//! noisy messages, plus the tooling to build evaluation samples and score a
//! detector against manual tags.
//!
//! The pipeline is [`textnorm::normalize`] → whitespace tokens →
//! [`detector::split_chunks`] → per-chunk [`langid::ProfileSet::identify`] →
//! [`detector::aggregate`].

pub mod cli;
pub mod corpus;
pub mod detector;
pub mod error;
pub mod eval;
pub mod langid;
pub mod synthgen;
pub mod tag;
pub mod textnorm;

pub use corpus::{Document, SampleSpec, Stratum};
pub use detector::{detect, detect_batch, DetectConfig, DetectionResult};
pub use error::{Error, Result};
pub use langid::{LanguageProfile, NgramConfig, Prediction, ProfileSet};
pub use tag::{ClassScheme, LanguageTag};
