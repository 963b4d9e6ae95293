//! Counting identities for correspondences and definable bipartite graphs.

mod regularity;
mod unimod;

pub use regularity::{
    regularity_analyze, regularity_split, regularity_verify, Case, Graph, PairVerification,
    RegularityReport, VerifySummary,
};
pub use unimod::{exactly, unimodularity_check, CorrespondenceReport};
