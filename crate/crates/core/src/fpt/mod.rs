//! Exact and near-exact dynamic programs over subsets of cores.

mod dc;
mod proper;
mod specialised;
mod steiner;

pub use dc::{fpt_dc_solve, MAX_DC_CORES};
pub use proper::fpt_proper_solve;
pub use specialised::{gp2p_redblue_solve, steiner_forest_fpt, MAX_PARTS, MAX_RED};
pub use steiner::{steiner_tree_exact, SteinerTable, MAX_TERMINALS};
