//! Minimum-rank completion of partially erased matrices over prime fields, and
//! the design of linear index codes from such completions.
//!
//! The pipeline: an index coding instance becomes an incomplete matrix
//! ([`IndexCodingProblem::build_matrix`]); a randomized search seeds a complete
//! sub-matrix ([`find_max_complete_submatrix`]); a best-first decision tree
//! completes the rest by erasure-decoding lines against the code the sub-matrix
//! spans ([`complete_min_rank`]); the completion's independent columns are the
//! transmissions ([`IndexCode::extract`]), checked by [`verify_code`].
//! [`oracle_min_rank`] gives exact answers for small instances.

pub mod error;
pub mod field;
mod gf2;
pub mod generate;
pub mod index_coding;
pub mod linalg;
pub mod masked;
pub mod oracle;
pub mod projection;
pub mod search;
pub mod tree;

pub use error::{Error, Result};
pub use field::FieldSpec;
pub use index_coding::{
    parse_transmissions, render_transmissions, solve_problem, verify_code, Decoder, IndexCode, IndexCodingProblem,
    Rate, Receiver, Solution, SolutionSource, VerificationReport,
};
pub use linalg::{AffineSolutionSet, GFMatrix};
pub use masked::{lift_completion, Entry, MaskedMatrix, SubmatrixIndex};
pub use oracle::{oracle_min_rank, oracle_min_rank_with, OracleMode, OracleResult};
pub use projection::{LinearCode, ProjectionOutcome};
pub use search::{find_max_complete_submatrix, SearchConfig};
pub use tree::{complete_min_rank, complete_min_rank_with_candidate, Branch, CompletionResult, Direction, TreeConfig, TreeStats};
