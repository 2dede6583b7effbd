//! Exact linear algebra over `Q` and `F_p` for realizing non-commutation graphs by matrices:
//! explicit witnesses, checkable lower-bound certificates, exhaustive minimal-dimension
//! search and composition series of small modules.

pub mod certificate;
pub mod commgraph;
pub mod exactla;
pub mod json;
pub mod modsplit;
pub mod search;
pub mod witness;

pub use certificate::{build_certificate, verify_certificate, LowerBoundCertificate, Verdict};
pub use commgraph::{matching_graph, realizes, Assignment, CommGraph};
pub use exactla::{FieldSpec, Matrix, Prime, Scalar, Vector};
pub use modsplit::{composition_factor_dims, theorem3_count_check, CompositionReport, ModuleSpec};
pub use search::{min_realization_dim, Mode, SearchOptions, SearchReport};
pub use witness::{product_block_embedding, sharp_witness};
