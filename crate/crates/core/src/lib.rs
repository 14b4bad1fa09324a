//! Frobenius-twisted Veronese varieties over finite fields and the linear
//! codes whose parity-check matrices they define.
//!
//! The pipeline is field ([`ff`]) → points ([`pg`]) → embedding
//! ([`veronese`]) → code parameters ([`code`]), with exact arithmetic
//! throughout.

pub mod code;
pub mod error;
pub mod ff;
pub mod linalg;
pub mod pg;
pub mod search;
pub mod veronese;

pub use code::{
    analyze, build_code, classify_min_words, min_distance, mds_status, oracle_min_distance,
    verify_general_position, Code, CodeReport, SearchPlan, Status,
};
pub use error::{Error, Result};
pub use ff::{Elem, FieldCtx, Mode};
pub use linalg::Matrix;
pub use pg::{enum_points, ProjPoint};
pub use veronese::{build_variety, embed_point, MonomialBasis, ScrollFrame, SigmaVector, VarietyMatrix};
