//! Occlusion-aware driver monitoring system (DMS) core.
//!
//! Everything a dual RGB/IR in-cabin monitoring pipeline needs short of the
//! neural networks themselves:
//!
//! - [`imaging`]: deterministic image primitives (PNM I/O, grayscale, resize,
//!   crops, CLAHE, dHash)
//! - [`dataset`]: manifest-based curation (dedup, brightness filter,
//!   person-disjoint and stratified splits)
//! - [`backends`]: pluggable inference interfaces for the four models plus a
//!   fully deterministic scripted mock
//! - [`identity`]: driver database with running-mean embeddings and cosine
//!   matching
//! - [`acquisition`]: RGB → CLAHE-IR → estimated-box detection fallback chain
//! - [`pipeline`]: per-frame state machine with occlusion alerts and RGB/IR
//!   mode switching
//! - [`evaluation`]: confusion matrices, FAR/FRR and threshold sweeps
//!
//! All operations are deterministic functions of their inputs and seeds; no
//! wall clocks, no global state.

pub mod acquisition;
pub mod backends;
pub mod dataset;
pub mod evaluation;
pub mod identity;
pub mod imaging;
pub mod pipeline;

/// Which camera a sample, detection, or embedding came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    Rgb,
    Ir,
}

impl Modality {
    pub fn as_str(self) -> &'static str {
        match self {
            Modality::Rgb => "rgb",
            Modality::Ir => "ir",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rgb" => Some(Modality::Rgb),
            "ir" => Some(Modality::Ir),
            _ => None,
        }
    }
}

impl std::fmt::Display for Modality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
