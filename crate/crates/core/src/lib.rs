//! Minimum-cost edge covers of disjointness-compliable set families.
//!
//! A family `F` of node sets is disjointness-compliable when every member
//! `A` and every `A' ⊆ A` have `A' ∈ F` or `A \ A' ∈ F`; it is proper when it
//! is also closed under complement. An edge set covers `F` when every member
//! has an edge with exactly one end inside it.
//!
//! The crate provides:
//! - [`graph`]: the weighted multigraph, contraction and shortest paths;
//! - [`family`] and [`residual`]: the family oracle and residual states;
//! - [`spider`]: spider decompositions and minimum-density spider search;
//! - [`oracles`]: exact restricted covers, brute-force optima and pruning;
//! - [`greedy`]: the spider-covering greedy algorithm;
//! - [`fpt`]: subset dynamic programs over the cores;
//! - [`pdual`]: the primal-dual baseline for proper families.

pub mod density;
pub mod error;
pub mod family;
pub mod fpt;
pub mod graph;
pub mod greedy;
pub mod oracles;
pub mod pdual;
pub mod residual;
pub mod spider;

pub use density::Density;
pub use error::{Error, Result};
pub use family::{
    union_family, Attrs, DemandGroup, ExplicitFamily, Family, FamilySpec, QuotaInstance,
};
pub use fpt::{
    fpt_dc_solve, fpt_proper_solve, gp2p_redblue_solve, steiner_forest_fpt, steiner_tree_exact,
};
pub use graph::{
    connected_components, contract, is_forest, mst_induced, shortest_paths, spanning_forest,
    Contraction, Cost, Edge, EdgeId, EdgeSet, NodeId, Partition, ShortestPaths, WeightedGraph,
};
pub use greedy::{
    density_bound_check, evaluate_candidate, ratio_bound, spider_cover_solve,
    spider_cover_solve_with, CandidateKind, DensityReport, SolveResult, SolverConfig, TieBreak,
};
pub use oracles::{
    brute_force_cover, exact_restricted_cover, prune_minimal, ExactOracle, GrowthOracle,
    OracleCaps, RestrictedCoverOracle,
};
pub use pdual::{gw_run, gw_solve, GwRun};
pub use residual::{is_cover, residual, ResidualState};
pub use spider::{kr_decompose, min_density_spider, Spider, SpiderCandidate};
