//! The spider-covering greedy algorithm.

use crate::density::Density;
use crate::error::{Error, Result};
use crate::family::{Family, FamilySpec};
use crate::graph::{Cost, EdgeSet, NodeId, WeightedGraph};
use crate::oracles::{prune_minimal, ExactOracle, OracleCaps, RestrictedCoverOracle};
use crate::residual::{residual, ResidualState};
use crate::spider::min_density_spider;

/// Which candidate kind wins a density tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    RestrictedFirst,
    SpiderFirst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Declared quality of the restricted-cover oracle, at least 1.
    pub alpha: f64,
    pub caps: OracleCaps,
    pub tie_break: TieBreak,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            caps: OracleCaps::default(),
            tie_break: TieBreak::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alpha.is_nan() || self.alpha < 1.0 {
            return Err(Error::input(format!("alpha must be at least 1, got {}", self.alpha)));
        }
        self.caps.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CandidateKind {
    RestrictedCover,
    Spider,
}

impl CandidateKind {
    pub fn name(&self) -> &'static str {
        match self {
            CandidateKind::RestrictedCover => "restricted-cover",
            CandidateKind::Spider => "spider",
        }
    }
}

/// Measured effect of one augmentation step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub kind: CandidateKind,
    /// Core (restricted cover) or center (spider) supernode that produced
    /// the candidate.
    pub source: NodeId,
    pub edges: EdgeSet,
    pub cost: Cost,
    pub nu_before: usize,
    pub nu_after: usize,
    pub delta: usize,
    pub sigma: Density,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub edges: EdgeSet,
    pub cost: Cost,
    pub iterations: Vec<DensityReport>,
    pub feasible: bool,
    /// Base nodes of a core that no candidate could reduce.
    pub witness: Option<Vec<NodeId>>,
    pub tau0: usize,
    /// Claimed approximation ratio for this run.
    pub bound: f64,
}

/// Scores `s` (base edge ids) by its actual core-count drop.
pub fn evaluate_candidate(
    state: &ResidualState<'_>,
    s: &EdgeSet,
    kind: CandidateKind,
    source: NodeId,
) -> Result<DensityReport> {
    let nu_before = state.core_count();
    let nu_after = state.cores_after(s)?;
    let delta = nu_before.saturating_sub(nu_after);
    let cost = state.base().cost_of(s);
    Ok(DensityReport {
        kind,
        source,
        edges: s.clone(),
        cost,
        nu_before,
        nu_after,
        delta,
        sigma: Density::new(cost, delta as u64),
    })
}

/// `alpha + max(alpha, 2) ln tau0`; with no cores the bound is `alpha`.
pub fn ratio_bound(alpha: f64, tau0: usize) -> f64 {
    if tau0 <= 1 {
        alpha
    } else {
        alpha + alpha.max(2.0) * (tau0 as f64).ln()
    }
}

/// Greedy with the exact restricted-cover oracle.
pub fn spider_cover_solve(
    family: &Family,
    g: &WeightedGraph,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    spider_cover_solve_with(family, g, &ExactOracle::new(cfg.caps), cfg)
}

/// Greedy with a caller-supplied oracle. The claimed bound uses the larger
/// of `cfg.alpha` and the oracle's declared quality.
pub fn spider_cover_solve_with(
    family: &Family,
    g: &WeightedGraph,
    oracle: &dyn RestrictedCoverOracle,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    require_dc(family)?;
    let state = residual(family, g, &EdgeSet::empty())?;
    let tau0 = state.core_count();
    let alpha = cfg.alpha.max(oracle.alpha());
    let mut result = continue_greedy(state, oracle, cfg)?;
    result.tau0 = tau0;
    result.bound = ratio_bound(alpha, tau0);
    Ok(result)
}

pub(crate) fn require_dc(family: &Family) -> Result<()> {
    if let FamilySpec::Explicit(f) = family.spec() {
        if !f.is_dc() {
            return Err(Error::NotDisjointnessCompliable(
                "explicit family fails the exhaustive check".into(),
            ));
        }
    }
    Ok(())
}

/// Runs the greedy loop from an arbitrary residual state and prunes the
/// final cover. `tau0` and `bound` are left for the caller to fill.
pub(crate) fn continue_greedy(
    mut state: ResidualState<'_>,
    oracle: &dyn RestrictedCoverOracle,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    let family = state.family();
    let g = state.base();
    let mut iterations = Vec::new();
    let mut witness = None;
    while state.core_count() > 0 {
        let mut best: Option<((Density, u8, NodeId), DensityReport)> = None;
        let rank = |kind| match (cfg.tie_break, kind) {
            (TieBreak::RestrictedFirst, CandidateKind::RestrictedCover)
            | (TieBreak::SpiderFirst, CandidateKind::Spider) => 0u8,
            _ => 1u8,
        };
        let mut consider = |report: DensityReport| {
            if report.delta == 0 {
                return;
            }
            let key = (report.sigma, rank(report.kind), report.source);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, report));
            }
        };
        for &core in state.cores() {
            if let Some(s) = oracle.restricted_cover(&state, core)? {
                consider(evaluate_candidate(
                    &state,
                    &s,
                    CandidateKind::RestrictedCover,
                    core,
                )?);
            }
        }
        if state.core_count() >= 2 {
            if let Some(sp) = min_density_spider(&state)? {
                consider(evaluate_candidate(
                    &state,
                    &sp.edges,
                    CandidateKind::Spider,
                    sp.center,
                )?);
            }
        }
        let Some((_, report)) = best else {
            let core = state.cores()[0];
            witness = Some(state.blocks()[core].clone());
            break;
        };
        state = state.absorb(&report.edges)?;
        iterations.push(report);
    }
    let feasible = witness.is_none();
    let edges = if feasible {
        prune_minimal(family, g, state.solution())?
    } else {
        state.solution().clone()
    };
    Ok(SolveResult {
        cost: g.cost_of(&edges),
        edges,
        iterations,
        feasible,
        witness,
        tau0: 0,
        bound: f64::INFINITY,
    })
}

/// Checks `min(alpha θ / q, 2 (1 - θ) / (ν0 - q)) <= max(alpha, 2) / ν0`
/// over `θ ∈ {0, 1/grid, ..., 1}` and integer `q ∈ [1, ν0]`, with absolute
/// slack `1e-12`. The second term is infinite when `q = ν0`.
pub fn density_bound_check(alpha: f64, nu0: u32, grid: u32) -> bool {
    if alpha.is_nan() || alpha < 1.0 || nu0 == 0 || grid == 0 {
        return false;
    }
    let rho = alpha.max(2.0);
    let rhs = rho / nu0 as f64 + 1e-12;
    (0..=grid).all(|i| {
        let theta = i as f64 / grid as f64;
        (1..=nu0).all(|q| {
            let first = alpha * theta / q as f64;
            let second = if q == nu0 {
                f64::INFINITY
            } else {
                2.0 * (1.0 - theta) / (nu0 - q) as f64
            };
            first.min(second) <= rhs
        })
    })
}
