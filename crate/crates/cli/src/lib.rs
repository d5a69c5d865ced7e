//! IO, file formats and corpus handling around `fractint-core`.

pub mod export;
pub mod fetch;
pub mod gutenberg;
pub mod pipeline;

pub use fractint_core as core;
