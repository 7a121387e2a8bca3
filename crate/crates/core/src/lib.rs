//! Audio corpus analysis toolkit.
//!
//! The pipeline runs from raw PCM audio to corpus-level statistics:
//!
//! * [`signal`] — WAV ingestion, STFT front-end, synthetic test signals.
//! * [`features`] — 41 timbral/rhythmic features per frame at ~43 Hz,
//!   windowed means, and per-song summary vectors.
//! * [`harmony`] — chroma, template chord detection, local key estimation,
//!   functional transition statistics, harmonic rhythm.
//! * [`corpus`] — manifests, max-min normalization, similarity matrices,
//!   representativeness ranking, chronological trend fits.
//! * [`learn`] — song-preserving splits, a single-hidden-layer net, Gaussian
//!   naive Bayes, and greedy forward feature selection.

pub mod corpus;
pub mod features;
pub mod harmony;
pub mod learn;
pub mod signal;
