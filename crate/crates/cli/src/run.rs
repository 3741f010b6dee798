//! Solver dispatch and solution documents.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use famcover::{
    brute_force_cover, fpt_dc_solve, fpt_proper_solve, gp2p_redblue_solve, gw_solve, spider_cover_solve_with,
    steiner_forest_fpt, DensityReport, EdgeSet, ExactOracle, FamilySpec, GrowthOracle, NodeId, OracleCaps,
    RestrictedCoverOracle, SolveResult, SolverConfig,
};
use serde_json::{Map, Value};

use crate::doc::InstanceDoc;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Greedy,
    Fpt,
    FptDc,
    SteinerForest,
    Redblue,
    Gw,
    BruteForce,
}

impl Algo {
    pub const ALL: [Algo; 7] = [
        Algo::Greedy,
        Algo::Fpt,
        Algo::FptDc,
        Algo::SteinerForest,
        Algo::Redblue,
        Algo::Gw,
        Algo::BruteForce,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algo::Greedy => "greedy",
            Algo::Fpt => "fpt",
            Algo::FptDc => "fpt-dc",
            Algo::SteinerForest => "steiner-forest",
            Algo::Redblue => "redblue",
            Algo::Gw => "gw",
            Algo::BruteForce => "brute-force",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm \"{s}\""))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleChoice {
    #[default]
    Exact,
    Growth,
}

impl FromStr for OracleChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(OracleChoice::Exact),
            "growth" => Ok(OracleChoice::Growth),
            _ => Err(format!("unknown oracle \"{s}\"")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub algo: Algo,
    pub alpha: f64,
    pub caps: OracleCaps,
    pub oracle: OracleChoice,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            algo: Algo::Greedy,
            alpha: 1.0,
            caps: OracleCaps::default(),
            oracle: OracleChoice::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub tau0: usize,
    pub alpha: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub algo: Algo,
    /// `None` when the instance is infeasible.
    pub edges: Option<EdgeSet>,
    pub iterations: Vec<DensityReport>,
    pub bound: Bound,
    pub witness: Option<Vec<NodeId>>,
}

/// Red nodes carry charge -1 and blue nodes a charge of at least the red
/// count; with no other charges the G-P2P family is exactly the red/blue one.
pub fn redblue_roles(charges: &[i64]) -> CliResult<(Vec<NodeId>, Vec<NodeId>)> {
    let red: Vec<NodeId> = (0..charges.len()).filter(|&v| charges[v] < 0).collect();
    let blue: Vec<NodeId> = (0..charges.len()).filter(|&v| charges[v] > 0).collect();
    if let Some(&v) = red.iter().find(|&&v| charges[v] != -1) {
        return Err(CliError::input(format!("$.family.charges: node {v} has charge {} (red nodes need -1)", charges[v])));
    }
    if let Some(&v) = blue.iter().find(|&&v| charges[v] < red.len() as i64) {
        return Err(CliError::input(format!(
            "$.family.charges: node {v} has charge {} (blue nodes need at least {})",
            charges[v],
            red.len()
        )));
    }
    Ok((red, blue))
}

fn from_result(algo: Algo, r: SolveResult, alpha: f64) -> Outcome {
    Outcome {
        algo,
        edges: r.feasible.then_some(r.edges),
        iterations: r.iterations,
        bound: Bound { tau0: r.tau0, alpha, ratio: r.bound },
        witness: r.witness,
    }
}

pub fn solve(doc: &InstanceDoc, opts: &SolveOptions) -> CliResult<Outcome> {
    let family = doc.family()?;
    let g = doc.graph();
    let tau0 = famcover::residual(&family, &g, &EdgeSet::empty())?.core_count();
    let exact = |edges: Option<EdgeSet>, tau0: usize| Outcome {
        algo: opts.algo,
        edges,
        iterations: Vec::new(),
        bound: Bound { tau0, alpha: 1.0, ratio: 1.0 },
        witness: None,
    };
    let cfg = SolverConfig { alpha: opts.alpha, caps: opts.caps, ..SolverConfig::default() };
    let exact_oracle = ExactOracle::new(opts.caps);
    let oracle: &dyn RestrictedCoverOracle = match opts.oracle {
        OracleChoice::Exact => &exact_oracle,
        OracleChoice::Growth => &GrowthOracle,
    };
    let alpha = opts.alpha.max(oracle.alpha());
    Ok(match opts.algo {
        Algo::Greedy => from_result(opts.algo, spider_cover_solve_with(&family, &g, oracle, &cfg)?, alpha),
        Algo::FptDc => from_result(opts.algo, fpt_dc_solve(&family, &g, oracle, &cfg)?, alpha),
        Algo::Fpt => {
            let terminals = family.proper_terminals().len();
            exact(fpt_proper_solve(&family, &g)?, terminals)
        }
        Algo::BruteForce => exact(brute_force_cover(&family, &g, &opts.caps)?, tau0),
        Algo::Gw => {
            let terminals = family.proper_terminals().len();
            let mut out = exact(gw_solve(&family, &g)?, terminals);
            out.bound.ratio = 2.0;
            out
        }
        Algo::SteinerForest => match &doc.family {
            FamilySpec::SteinerForest { parts } => exact(steiner_forest_fpt(parts, &g)?, tau0),
            other => {
                return Err(CliError::input(format!(
                    "$.family.kind: steiner-forest needs a steiner_forest family, got {}",
                    other.kind()
                )))
            }
        },
        Algo::Redblue => match &doc.family {
            FamilySpec::Gp2p { charges } => {
                let (red, blue) = redblue_roles(charges)?;
                exact(gp2p_redblue_solve(&g, &red, &blue)?, red.len())
            }
            other => {
                return Err(CliError::input(format!(
                    "$.family.kind: redblue needs a gp2p family, got {}",
                    other.kind()
                )))
            }
        },
    })
}

fn finite(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

/// Solution document. `wall_time_ms` is the only field that varies between
/// identical runs.
pub fn solution_value(doc: &InstanceDoc, out: &Outcome, wall_ms: f64) -> Value {
    let mut root = Map::new();
    root.insert("algorithm".into(), Value::String(out.algo.name().into()));
    root.insert("feasible".into(), Value::Bool(out.edges.is_some()));
    let empty = EdgeSet::empty();
    let edges = out.edges.as_ref().unwrap_or(&empty);
    let total: famcover::Cost = edges.iter().map(|e| doc.edges[e].2).sum();
    root.insert("cost".into(), if out.edges.is_some() { doc.cost_number(total) } else { Value::Null });
    let listed: Vec<Value> = edges
        .iter()
        .map(|e| {
            let (u, v, c) = doc.edges[e];
            let mut o = Map::new();
            o.insert("id".into(), Value::from(e));
            o.insert("u".into(), doc.label(u).clone());
            o.insert("v".into(), doc.label(v).clone());
            o.insert("cost".into(), doc.cost_number(c));
            Value::Object(o)
        })
        .collect();
    root.insert("edges".into(), Value::Array(listed));
    if matches!(out.algo, Algo::Greedy | Algo::FptDc) {
        let its: Vec<Value> = out
            .iterations
            .iter()
            .map(|it| {
                let mut o = Map::new();
                o.insert("kind".into(), Value::String(it.kind.name().into()));
                o.insert("source".into(), Value::from(it.source));
                o.insert("edges".into(), Value::Array(it.edges.iter().map(Value::from).collect()));
                o.insert("cost".into(), doc.cost_number(it.cost));
                o.insert("nu_before".into(), Value::from(it.nu_before));
                o.insert("nu_after".into(), Value::from(it.nu_after));
                o.insert("delta".into(), Value::from(it.delta));
                o.insert("sigma".into(), finite(doc.cost_f64(it.cost) / it.delta as f64));
                Value::Object(o)
            })
            .collect();
        root.insert("iterations".into(), Value::Array(its));
    }
    let mut bound = Map::new();
    bound.insert("tau0".into(), Value::from(out.bound.tau0));
    bound.insert("alpha".into(), finite(out.bound.alpha));
    bound.insert("ratio".into(), finite(out.bound.ratio));
    root.insert("bound".into(), Value::Object(bound));
    if let Some(w) = &out.witness {
        root.insert("witness".into(), doc.labels(w));
    }
    root.insert("wall_time_ms".into(), finite(wall_ms));
    Value::Object(root)
}

/// Solves and renders the solution document text.
pub fn solve_to_text(doc: &InstanceDoc, opts: &SolveOptions) -> CliResult<(Outcome, String)> {
    let start = Instant::now();
    let out = solve(doc, opts)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let mut text = serde_json::to_string_pretty(&solution_value(doc, &out, ms)).expect("serializable");
    text.push('\n');
    Ok((out, text))
}
