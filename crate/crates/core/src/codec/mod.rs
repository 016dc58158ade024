//! Zero-error timing codes: payload maps, code construction, the block
//! pipeline and codebook tables.

pub mod code;
pub mod codebook;
pub mod payload;
pub mod pipeline;

pub use code::{
    build_single_relay_code, build_table2_code, counting_rate, matches_counting_bound, NodeCode, TimingCode,
};
pub use codebook::{codebooks, render_codebooks, Codebook, CodebookColumn, CodebookEntry};
pub use payload::PayloadMap;
pub use pipeline::{run_pipeline, verify_exhaustive, Messages, PipelineRun, SinkDecode, TranscriptEntry};
