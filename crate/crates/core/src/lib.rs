//! Spectral influence analysis of large directed networks.
//!
//! The crate builds the Google matrix of a directed graph as an implicit
//! operator, ranks nodes by PageRank and CheiRank, and computes the reduced
//! Google matrix of a node selection together with its decomposition into
//! direct, projector and indirect parts. On top of the reduced matrix it
//! offers PageRank sensitivity sweeps and friend/follower network extraction.

pub mod dense;
pub mod error;
pub mod fixtures;
pub mod google;
pub mod graph;
pub mod io;
pub mod netview;
pub mod oracle;
pub mod rank;
pub mod reduced;
pub mod reorder;
pub mod selection;
pub mod sensitivity;

pub use error::{Error, Result};
pub use google::{Direction, GoogleOperator, DEFAULT_ALPHA};
pub use graph::{DirectedGraph, LabelTable, LoadOptions};
pub use netview::{build_network, export_dot, top_per_group, InfluenceNetwork, Mode, NetworkParams};
pub use rank::{cheirank, local_rank, pagerank, rank_join, RankJoinRow, RankVector};
pub use reduced::{
    compute_reduced, reduce, scattering_eigs, Component, ReduceOptions, ReducedMatrix, WeightMode, Weights,
};
pub use reorder::{bandwidth, bandwidth_order, cuthill_mckee, Permutation};
pub use selection::{NodeSelection, SelectedNode};
pub use sensitivity::{sensitivity_matrix, Method, Sensitivity, SensitivityOptions, SensitivityTable};
