//! Seeded benchmark suites. Each suite checks one guarantee on many random
//! instances against an exhaustive oracle and reports every violation with
//! the instance that caused it.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use famcover::{
    brute_force_cover, density_bound_check, fpt_dc_solve, fpt_proper_solve, gp2p_redblue_solve, gw_run, is_cover,
    is_forest, kr_decompose, spider_cover_solve, spider_cover_solve_with, Cost, EdgeSet, ExactOracle, ExplicitFamily,
    Family, FamilySpec, GrowthOracle, NodeId, OracleCaps, SolverConfig, WeightedGraph,
};
use num_rational::BigRational;
use rand::{Rng as _, RngExt};
use serde_json::{Map, Value};

use crate::doc::InstanceDoc;
use crate::error::{CliError, CliResult};
use crate::gen::{self, dc_closure, generate, random_tree, Balance, GenKind, GenParams, Rng};
use crate::run::redblue_roles;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    GreedyRatio,
    FptExactness,
    FptdcRatio,
    RedblueExactness,
    GwRatio,
    SpiderInvariants,
    DensityGrid,
    DcAxioms,
    Performance,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::GreedyRatio,
        Suite::FptExactness,
        Suite::FptdcRatio,
        Suite::RedblueExactness,
        Suite::GwRatio,
        Suite::SpiderInvariants,
        Suite::DensityGrid,
        Suite::DcAxioms,
        Suite::Performance,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::GreedyRatio => "greedy-ratio",
            Suite::FptExactness => "fpt-exactness",
            Suite::FptdcRatio => "fptdc-ratio",
            Suite::RedblueExactness => "redblue-exactness",
            Suite::GwRatio => "gw-ratio",
            Suite::SpiderInvariants => "spider-invariants",
            Suite::DensityGrid => "density-grid",
            Suite::DcAxioms => "dc-axioms",
            Suite::Performance => "performance",
        }
    }

    /// Instance count used when none is given. For fpt-exactness, gw-ratio
    /// and dc-axioms the count applies to each of the two instance groups;
    /// for density-grid it is the largest core count checked.
    pub fn default_count(&self) -> usize {
        match self {
            Suite::GreedyRatio | Suite::DcAxioms => 200,
            Suite::SpiderInvariants => 500,
            Suite::DensityGrid => 50,
            Suite::Performance => 1,
            _ => 100,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite \"{s}\""))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchConfig {
    pub suite: Suite,
    pub count: usize,
    pub seed: u64,
    pub caps: OracleCaps,
}

impl BenchConfig {
    pub fn new(suite: Suite, seed: u64) -> Self {
        BenchConfig { suite, count: suite.default_count(), seed, caps: OracleCaps::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub index: usize,
    pub kind: String,
    pub seed: Option<u64>,
    pub n: usize,
    pub m: usize,
    pub tau0: usize,
    pub cost: Option<Cost>,
    pub opt: Option<Cost>,
    pub ratio: Option<f64>,
    pub bound: Option<f64>,
    pub ok: bool,
    pub detail: Option<String>,
    pub wall_ms: f64,
    /// The offending instance, for reproduction.
    pub instance: Option<Value>,
}

impl Record {
    fn new(index: usize, kind: impl Into<String>) -> Self {
        Record {
            index,
            kind: kind.into(),
            seed: None,
            n: 0,
            m: 0,
            tau0: 0,
            cost: None,
            opt: None,
            ratio: None,
            bound: None,
            ok: true,
            detail: None,
            wall_ms: 0.0,
            instance: None,
        }
    }

    fn for_doc(index: usize, doc: &InstanceDoc) -> Self {
        let mut r = Record::new(index, doc.family.kind());
        r.seed = doc.seed;
        r.n = doc.node_count();
        r.m = doc.edges.len();
        r
    }

    /// Marks the record as a violation; the first reason is kept.
    fn violate(&mut self, why: impl Into<String>) {
        if self.ok {
            self.ok = false;
            self.detail = Some(why.into());
        }
    }

    pub fn to_value(&self, suite: Suite) -> Value {
        let mut o = Map::new();
        o.insert("suite".into(), Value::String(suite.name().into()));
        o.insert("index".into(), Value::from(self.index));
        o.insert("kind".into(), Value::String(self.kind.clone()));
        o.insert("seed".into(), self.seed.map_or(Value::Null, Value::from));
        o.insert("n".into(), Value::from(self.n));
        o.insert("m".into(), Value::from(self.m));
        o.insert("tau0".into(), Value::from(self.tau0));
        o.insert("cost".into(), self.cost.map_or(Value::Null, Value::from));
        o.insert("opt".into(), self.opt.map_or(Value::Null, Value::from));
        o.insert("ratio".into(), num(self.ratio));
        o.insert("bound".into(), num(self.bound));
        o.insert("ok".into(), Value::Bool(self.ok));
        if let Some(d) = &self.detail {
            o.insert("detail".into(), Value::String(d.clone()));
        }
        o.insert("wall_ms".into(), num(Some(self.wall_ms)));
        if let Some(i) = &self.instance {
            o.insert("instance".into(), i.clone());
        }
        Value::Object(o)
    }
}

fn num(x: Option<f64>) -> Value {
    x.and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub suite: Suite,
    pub instances: usize,
    pub violations: usize,
    pub max_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub wall_ms: f64,
    pub max_instance_ms: f64,
}

impl Summary {
    pub fn to_value(&self) -> Value {
        let mut o = Map::new();
        o.insert("suite".into(), Value::String(self.suite.name().into()));
        o.insert("summary".into(), Value::Bool(true));
        o.insert("instances".into(), Value::from(self.instances));
        o.insert("violations".into(), Value::from(self.violations));
        o.insert("max_ratio".into(), num(self.max_ratio));
        o.insert("mean_ratio".into(), num(self.mean_ratio));
        o.insert("wall_ms".into(), num(Some(self.wall_ms)));
        o.insert("max_instance_ms".into(), num(Some(self.max_instance_ms)));
        Value::Object(o)
    }
}

fn ratio(cost: Cost, opt: Cost) -> f64 {
    if opt == 0 {
        if cost == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        cost as f64 / opt as f64
    }
}

/// Small instance shape: `4 <= n <= 8`, `n - 1 <= m <= min(14, n(n-1)/2)`.
fn small_params(rng: &mut Rng, kind: GenKind) -> GenParams {
    let n = rng.random_range(4..=8usize);
    let m = rng.random_range(n - 1..=(n * (n - 1) / 2).min(14));
    GenParams::new(kind, n, m, rng.next_u64())
}

fn gp2p_params(rng: &mut Rng, balance: Balance, max_tau: usize) -> GenParams {
    let mut p = small_params(rng, GenKind::Gp2p);
    // each negative node needs at least one unit of positive charge to offset
    let slack = usize::from(balance == Balance::Positive);
    let reachable = (3 * p.n - slack) / 4;
    p.tau = Some(rng.random_range(1..=max_tau.min(p.n - 1).min(reachable)));
    p.balance = balance;
    p
}

fn steiner_forest_params(rng: &mut Rng) -> GenParams {
    let mut p = small_params(rng, GenKind::SteinerForest);
    p.parts = Some(rng.random_range(1..=(p.n / 2).min(3)));
    p
}

fn instance(p: &GenParams) -> CliResult<(InstanceDoc, Family, WeightedGraph)> {
    let doc = generate(p)?;
    let family = doc.family()?;
    let g = doc.graph();
    Ok((doc, family, g))
}

struct Runner<'a> {
    cfg: BenchConfig,
    sink: &'a mut dyn FnMut(&Record),
    records: usize,
    violations: usize,
    ratios: Vec<f64>,
    max_instance_ms: f64,
}

impl Runner<'_> {
    fn push(&mut self, mut r: Record, started: Instant, doc: Option<&InstanceDoc>) {
        r.wall_ms = started.elapsed().as_secs_f64() * 1e3;
        self.max_instance_ms = self.max_instance_ms.max(r.wall_ms);
        if let Some(x) = r.ratio {
            self.ratios.push(x);
        }
        if !r.ok {
            self.violations += 1;
            r.instance = doc.map(InstanceDoc::to_value);
        }
        self.records += 1;
        (self.sink)(&r);
    }

    fn opt(&self, family: &Family, g: &WeightedGraph) -> CliResult<Option<Cost>> {
        Ok(brute_force_cover(family, g, &self.cfg.caps)?.map(|j| g.cost_of(&j)))
    }
}

/// Runs a suite, calling `sink` once per record in a fixed order.
pub fn run(cfg: BenchConfig, sink: &mut dyn FnMut(&Record)) -> CliResult<Summary> {
    let start = Instant::now();
    let mut rng = gen::rng(cfg.seed);
    let mut r = Runner { cfg, sink, records: 0, violations: 0, ratios: Vec::new(), max_instance_ms: 0.0 };
    match cfg.suite {
        Suite::GreedyRatio => greedy_ratio(&mut r, &mut rng)?,
        Suite::FptExactness => fpt_exactness(&mut r, &mut rng)?,
        Suite::FptdcRatio => fptdc_ratio(&mut r, &mut rng)?,
        Suite::RedblueExactness => redblue_exactness(&mut r, &mut rng)?,
        Suite::GwRatio => gw_ratio(&mut r, &mut rng)?,
        Suite::SpiderInvariants => spider_invariants(&mut r, &mut rng)?,
        Suite::DensityGrid => density_grid(&mut r)?,
        Suite::DcAxioms => dc_axioms(&mut r, &mut rng)?,
        Suite::Performance => performance(&mut r, &mut rng)?,
    }
    let max_ratio = r.ratios.iter().copied().reduce(f64::max);
    let mean_ratio = (!r.ratios.is_empty()).then(|| r.ratios.iter().sum::<f64>() / r.ratios.len() as f64);
    Ok(Summary {
        suite: cfg.suite,
        instances: r.records,
        violations: r.violations,
        max_ratio,
        mean_ratio,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        max_instance_ms: r.max_instance_ms,
    })
}

/// Greedy with the exact oracle against brute force on G-P2P and
/// Multiroot Quota Tree instances with `1 <= tau0 <= 4`.
fn greedy_ratio(r: &mut Runner<'_>, rng: &mut Rng) -> CliResult<()> {
    for i in 0..r.cfg.count {
        let p = if i % 2 == 0 {
            gp2p_params(rng, Balance::Nonneg, 4)
        } else {
            let mut p = small_params(rng, GenKind::MultirootQuotaTree);
            p.roots = Some(rng.random_range(1..=4));
            p
        };
        let started = Instant::now();
        let (doc, family, g) = instance(&p)?;
        let mut rec = Record::for_doc(i, &doc);
        let cfg = SolverConfig { caps: r.cfg.caps, ..SolverConfig::default() };
        let res = spider_cover_solve(&family, &g, &cfg)?;
        let opt = r.opt(&family, &g)?;
        let tau0 = res.tau0;
        rec.tau0 = tau0;
        rec.opt = opt;
        let bound = 1.0 + 2.0 * (tau0.max(1) as f64).ln();
        rec.bound = Some(bound);
        if !(1..=4).contains(&tau0) {
            rec.violate(format!("tau0 = {tau0} outside [1, 4]"));
        }
        match opt {
            None if res.feasible => rec.violate("greedy reports a cover but none exists"),
            None => {}
            Some(_) if !res.feasible => rec.violate("greedy reports infeasible but a cover exists"),
            Some(o) => {
                rec.cost = Some(res.cost);
                rec.ratio = Some(ratio(res.cost, o));
                if !is_cover(&family, &g, &res.edges)? {
                    rec.violate("greedy output is not a cover");
                } else if res.cost < o {
                    rec.violate("greedy beats the exhaustive optimum");
                } else if tau0 == 1 && res.cost != o {
                    rec.violate(format!("single core but cost {} != opt {o}", res.cost));
                } else if res.cost as f64 > bound * o as f64 + 1e-9 {
                    rec.violate(format!("cost {} exceeds {bound:.4} * opt {o}", res.cost));
                }
            }
        }
        r.push(rec, started, Some(&doc));
    }
    Ok(())
}

/// Exact agreement of the proper-family DP with brute force, on Steiner
/// Forest and zero-sum G-P2P instances.
fn fpt_exactness(r: &mut Runner<'_>, rng: &mut Rng) -> CliResult<()> {
    for i in 0..2 * r.cfg.count {
        let p = if i % 2 == 0 { steiner_forest_params(rng) } else { gp2p_params(rng, Balance::Zero, 3) };
        let started = Instant::now();
        let (doc, family, g) = instance(&p)?;
        let mut rec = Record::for_doc(i, &doc);
        rec.tau0 = family.proper_terminals().len();
        let got = fpt_proper_solve(&family, &g)?;
        let opt = r.opt(&family, &g)?;
        rec.opt = opt;
        rec.bound = Some(1.0);
        let cost = got.as_ref().map(|j| g.cost_of(j));
        rec.cost = cost;
        if let (Some(c), Some(o)) = (cost, opt) {
            rec.ratio = Some(ratio(c, o));
        }
        if cost != opt {
            rec.violate(format!("fpt cost {cost:?} != opt {opt:?}"));
        } else if let Some(j) = &got {
            if !is_cover(&family, &g, j)? {
                rec.violate("fpt output is not a cover");
            }
        }
        r.push(rec, started, Some(&doc));
    }
    Ok(())
}

/// The non-symmetric DP with the exact oracle stays within twice optimal on
/// G-P2P instances with positive total charge.
fn fptdc_ratio(r: &mut Runner<'_>, rng: &mut Rng) -> CliResult<()> {
    for i in 0..r.cfg.count {
        let p = gp2p_params(rng, Balance::Positive, 4);
        let started = Instant::now();
        let (doc, family, g) = instance(&p)?;
        let mut rec = Record::for_doc(i, &doc);
        let cfg = SolverConfig { caps: r.cfg.caps, ..SolverConfig::default() };
        let res = fpt_dc_solve(&family, &g, &ExactOracle::new(r.cfg.caps), &cfg)?;
        let opt = r.opt(&family, &g)?;
        rec.tau0 = family.singleton_cores().len();
        rec.opt = opt;
        rec.bound = Some(2.0);
        match opt {
            None if res.feasible => rec.violate("fpt-dc reports a cover but none exists"),
            None => {}
            Some(_) if !res.feasible => rec.violate("fpt-dc reports infeasible but a cover exists"),
            Some(o) => {
                rec.cost = Some(res.cost);
                rec.ratio = Some(ratio(res.cost, o));
                if !is_cover(&family, &g, &res.edges)? {
                    rec.violate("fpt-dc output is not a cover");
                } else if res.cost < o || res.cost > 2 * o {
                    rec.violate(format!("cost {} outside [opt, 2 opt] with opt {o}", res.cost));
                }
            }
        }
        r.push(rec, started, Some(&doc));
    }
    Ok(())
}

/// The red/blue DP against brute force on the G-P2P encoding.
fn redblue_exactness(r: &mut Runner<'_>, rng: &mut Rng) -> CliResult<()> {
    for i in 0..r.cfg.count {
        let mut p = small_params(rng, GenKind::Redblue);
        let red = rng.random_range(1..=4.min(p.n - 1));
        p.red = Some(red);
        p.blue = Some(rng.random_range(0..=2.min(p.n - red)));
        let started = Instant::now();
        let (doc, family, g) = instance(&p)?;
        let mut rec = Record::for_doc(i, &doc);
        rec.kind = "redblue".into();
        let FamilySpec::Gp2p { charges } = &doc.family else { unreachable!("redblue instances are gp2p") };
        let (red, blue) = redblue_roles(charges)?;
        rec.tau0 = red.len();
        let got = gp2p_redblue_solve(&g, &red, &blue)?;
        let opt = r.opt(&family, &g)?;
        let cost = got.as_ref().map(|j| g.cost_of(j));
        rec.cost = cost;
        rec.opt = opt;
        rec.bound = Some(1.0);
        if let (Some(c), Some(o)) = (cost, opt) {
            rec.ratio = Some(ratio(c, o));
        }
        if cost != opt {
            rec.violate(format!("redblue cost {cost:?} != opt {opt:?}"));
        } else if let Some(j) = &got {
            if !is_cover(&family, &g, j)? {
                rec.violate("redblue output is not a cover");
            }
        }
        r.push(rec, started, Some(&doc));
    }
    Ok(())
}

/// Leaves of every tree in `j` that are not terminals.
fn non_terminal_leaves(g: &WeightedGraph, j: &EdgeSet, terminals: &[NodeId]) -> Vec<NodeId> {
    let mut degree = vec![0usize; g.node_count()];
    for e in j.iter() {
        degree[g.edge(e).u] += 1;
        degree[g.edge(e).v] += 1;
    }
    (0..g.node_count())
        .filter(|&v| degree[v] == 1 && !terminals.contains(&v))
        .collect()
}

/// Primal-dual on proper instances: within twice optimal, a forest whose
/// leaves are terminals, with feasible duals.
fn gw_ratio(r: &mut Runner<'_>, rng: &mut Rng) -> CliResult<()> {
    for i in 0..r.cfg.count {
        let p = if i % 2 == 0 { steiner_forest_params(rng) } else { gp2p_params(rng, Balance::Zero, 3) };
        let started = Instant::now();
        let (doc, family, g) = instance(&p)?;
        let mut rec = Record::for_doc(i, &doc);
        let terminals = family.proper_terminals();
        rec.tau0 = terminals.len();
        rec.bound = Some(2.0);
        let run = gw_run(&family, &g)?;
        let opt = r.opt(&family, &g)?;
        rec.opt = opt;
        if !run.dual_feasible(&g) {
            rec.violate("dual potentials overload an edge");
        }
        match (&run.edges, opt) {
            (None, None) => {}
            (Some(_), None) => rec.violate("gw reports a cover but none exists"),
            (None, Some(_)) => rec.violate("gw stalls but a cover exists"),
            (Some(j), Some(o)) => {
                let c = g.cost_of(j);
                rec.cost = Some(c);
                rec.ratio = Some(ratio(c, o));
                let bad_leaves = non_terminal_leaves(&g, j, &terminals);
                if !is_cover(&family, &g, j)? {
                    rec.violate("gw output is not a cover");
                } else if !is_forest(&g, j)? {
                    rec.violate("gw output has a cycle");
                } else if c > 2 * o {
                    rec.violate(format!("cost {c} exceeds 2 * opt {o}"));
                } else if !bad_leaves.is_empty() {
                    rec.violate(format!("non-terminal leaves {bad_leaves:?}"));
                } else if run.dual_value() > BigRational::from_integer(o.into()) {
                    rec.violate("dual value exceeds the optimum");
                }
            }
        }
        r.push(rec, started, Some(&doc));
    }
    Ok(())
}

/// Spider decompositions of random trees with `2 <= n <= 50`.
fn spider_invariants(r: &mut Runner<'_>, rng: &mut Rng) -> CliResult<()> {
    for i in 0..r.cfg.count {
        let started = Instant::now();
        let n = rng.random_range(2..=50usize);
        let tree = random_tree(rng, n);
        let edges: Vec<(NodeId, NodeId, Cost)> = tree.iter().map(|&(u, v)| (u, v, 1)).collect();
        let g = WeightedGraph::from_edges(n, &edges)?;
        let mut terminals: Vec<NodeId> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        while terminals.len() < 2 {
            let v = rng.random_range(0..n);
            if !terminals.contains(&v) {
                terminals.push(v);
            }
        }
        terminals.sort_unstable();
        let mut rec = Record::new(i, "tree");
        rec.n = n;
        rec.m = n - 1;
        rec.tau0 = terminals.len();
        let all: EdgeSet = (0..g.edge_count()).collect();
        let spiders = kr_decompose(&g, &all, &terminals)?;
        let mut owner = vec![usize::MAX; n];
        let mut covered = Vec::new();
        for (k, s) in spiders.iter().enumerate() {
            if !s.is_valid(&g, &terminals) {
                rec.violate(format!("spider {k} breaks the degree or terminal rules"));
            }
            if s.terminals.len() < 2 {
                rec.violate(format!("spider {k} holds fewer than two terminals"));
            }
            for v in s.nodes(&g) {
                if owner[v] != usize::MAX {
                    rec.violate(format!("node {v} lies in spiders {} and {k}", owner[v]));
                }
                owner[v] = k;
            }
            covered.extend_from_slice(&s.terminals);
        }
        covered.sort_unstable();
        if covered != terminals {
            rec.violate("spider terminals do not partition the terminal set");
        }
        if !rec.ok {
            let tree_doc = InstanceDoc {
                name: Some(format!("tree-{i}")),
                seed: None,
                nodes: (0..n).map(Value::from).collect(),
                edges,
                decimals: 0,
                family: FamilySpec::SteinerForest { parts: vec![terminals.clone()] },
            };
            r.push(rec, started, Some(&tree_doc));
        } else {
            r.push(rec, started, None);
        }
    }
    Ok(())
}

/// The density inequality over alpha in {1, 2, 3}, nu0 in `1..=count`,
/// every integer q and 1000 grid steps of theta.
fn density_grid(r: &mut Runner<'_>) -> CliResult<()> {
    let mut i = 0;
    for alpha in [1.0f64, 2.0, 3.0] {
        for nu0 in 1..=r.cfg.count as u32 {
            let started = Instant::now();
            let mut rec = Record::new(i, format!("alpha={alpha}"));
            rec.tau0 = nu0 as usize;
            rec.bound = Some(alpha.max(2.0) / nu0 as f64);
            if !density_bound_check(alpha, nu0, 1000) {
                rec.violate(format!("inequality fails for alpha = {alpha}, nu0 = {nu0}"));
            }
            r.push(rec, started, None);
            i += 1;
        }
    }
    Ok(())
}

fn explicit_axioms(f: &ExplicitFamily) -> Option<String> {
    let cores = f.cores();
    for (i, &a) in cores.iter().enumerate() {
        for &b in &cores[i + 1..] {
            if a & b != 0 {
                return Some(format!("cores {a:#b} and {b:#b} intersect"));
            }
        }
    }
    for &a in f.members() {
        for &c in &cores {
            if a & c != 0 && a & c != c {
                return Some(format!("core {c:#b} straddles member {a:#b}"));
            }
        }
        for &b in f.members() {
            let meet = a & b;
            let meet_in = meet != 0 && f.contains_mask(meet);
            let diffs_in = f.contains_mask(a & !b) && f.contains_mask(b & !a);
            if !meet_in && !diffs_in {
                return Some(format!("members {a:#b} and {b:#b} break the intersection/difference rule"));
            }
        }
    }
    None
}

fn explicit_doc(f: ExplicitFamily) -> InstanceDoc {
    let n = f.ground();
    InstanceDoc {
        name: None,
        seed: None,
        nodes: (0..n).map(Value::from).collect(),
        edges: Vec::new(),
        decimals: 0,
        family: FamilySpec::Explicit(f),
    }
}

/// Random explicit families that pass `is_dc`, then every structured kind
/// on at most 10 nodes expanded to an explicit family.
fn dc_axioms(r: &mut Runner<'_>, rng: &mut Rng) -> CliResult<()> {
    let mut accepted = 0;
    let mut i = 0;
    while accepted < r.cfg.count {
        let started = Instant::now();
        let ground = rng.random_range(3..=6usize);
        let full = (1u32 << ground) - 1;
        let k = rng.random_range(1..=4usize);
        let seeds: Vec<u32> = (0..k).map(|_| rng.random_range(1..full)).collect();
        // alternate raw random families with closed ones so both shapes appear
        let f = if i % 2 == 0 {
            ExplicitFamily::from_masks(ground, seeds)?
        } else {
            dc_closure(ground, seeds)?
        };
        i += 1;
        if !f.is_dc() {
            continue;
        }
        let mut rec = Record::new(accepted, "explicit");
        rec.n = ground;
        rec.tau0 = f.cores().len();
        if let Some(why) = explicit_axioms(&f) {
            rec.violate(why);
        }
        let doc = explicit_doc(f);
        r.push(rec, started, Some(&doc));
        accepted += 1;
    }
    let kinds = [
        (GenKind::Gp2p, Balance::Any),
        (GenKind::Gp2p, Balance::Zero),
        (GenKind::QuotaTree, Balance::Any),
        (GenKind::MultirootQuotaTree, Balance::Any),
        (GenKind::MultiInstanceQuotaTree, Balance::Any),
        (GenKind::MultirootGroupSteiner, Balance::Any),
        (GenKind::MultirootCoveringSteiner, Balance::Any),
        (GenKind::SteinerForest, Balance::Any),
        (GenKind::Redblue, Balance::Any),
    ];
    for j in 0..r.cfg.count {
        let (kind, balance) = kinds[j % kinds.len()];
        let n = rng.random_range(3..=10usize);
        let mut p = GenParams::new(kind, n, n - 1, rng.next_u64());
        p.balance = balance;
        p.tau = Some(rng.random_range(1..=n / 2));
        p.roots = Some(rng.random_range(1..=3usize.min(n)));
        p.parts = Some(rng.random_range(1..=n / 2));
        p.red = Some(rng.random_range(1..=n / 2));
        p.blue = Some(rng.random_range(0..=1));
        let started = Instant::now();
        let doc = match generate(&p) {
            Ok(d) => d,
            // a zero total is not always reachable with the drawn tau
            Err(CliError::Input(_)) if balance == Balance::Zero => {
                p.tau = Some(1);
                generate(&p)?
            }
            Err(e) => return Err(e),
        };
        let family = doc.family()?;
        let mut rec = Record::for_doc(accepted + j, &doc);
        if kind == GenKind::Redblue {
            rec.kind = "redblue".into();
        }
        let expanded = family.to_explicit(false)?;
        rec.tau0 = expanded.cores().len();
        let zero_sum = matches!(doc.family, FamilySpec::Gp2p { .. }) && family.total_charge() == 0;
        let forest = matches!(doc.family, FamilySpec::SteinerForest { .. });
        if !expanded.is_dc() {
            rec.violate("expanded family is not disjointness-compliable");
        } else if let Some(why) = explicit_axioms(&expanded) {
            rec.violate(why);
        } else if zero_sum && !family.to_explicit(true)?.is_proper() {
            rec.violate("zero-sum G-P2P symmetric view is not proper");
        } else if forest && !expanded.is_proper() {
            rec.violate("Steiner Forest family is not proper");
        } else if family.is_known_proper() != (zero_sum || forest) {
            rec.violate("proper-solver acceptance disagrees with the family kind");
        }
        r.push(rec, started, Some(&doc));
    }
    Ok(())
}

/// Time limits for the performance suite, in milliseconds.
pub const PERF_FPT_MS: f64 = 60_000.0;
pub const PERF_GREEDY_MS: f64 = 10_000.0;

/// Proper DP on a 40-node Steiner Forest with 14 terminals, and greedy with
/// the growth oracle on a 200-node Multiroot Quota Tree with 20 roots.
fn performance(r: &mut Runner<'_>, rng: &mut Rng) -> CliResult<()> {
    for round in 0..r.cfg.count {
        let mut p = GenParams::new(GenKind::SteinerForest, 40, 80, rng.next_u64());
        p.parts = Some(7);
        p.part_size = Some(2);
        let (doc, family, g) = instance(&p)?;
        let started = Instant::now();
        let mut rec = Record::for_doc(2 * round, &doc);
        rec.tau0 = family.proper_terminals().len();
        rec.bound = Some(PERF_FPT_MS);
        match fpt_proper_solve(&family, &g)? {
            Some(j) if is_cover(&family, &g, &j)? => rec.cost = Some(g.cost_of(&j)),
            Some(_) => rec.violate("fpt output is not a cover"),
            None => rec.violate("fpt reports a connected instance infeasible"),
        }
        if started.elapsed().as_secs_f64() * 1e3 > PERF_FPT_MS {
            rec.violate("fpt exceeded its time limit");
        }
        r.push(rec, started, Some(&doc));

        let mut p = GenParams::new(GenKind::MultirootQuotaTree, 200, 400, rng.next_u64());
        p.roots = Some(20);
        let (doc, family, g) = instance(&p)?;
        let started = Instant::now();
        let mut rec = Record::for_doc(2 * round + 1, &doc);
        let cfg = SolverConfig { caps: r.cfg.caps, ..SolverConfig::default() };
        let res = spider_cover_solve_with(&family, &g, &GrowthOracle, &cfg)?;
        rec.tau0 = res.tau0;
        rec.bound = Some(PERF_GREEDY_MS);
        if res.feasible && !is_cover(&family, &g, &res.edges)? {
            rec.violate("greedy output is not a cover");
        }
        if res.feasible {
            rec.cost = Some(res.cost);
        }
        if started.elapsed().as_secs_f64() * 1e3 > PERF_GREEDY_MS {
            rec.violate("greedy exceeded its time limit");
        }
        if res.tau0 != 20 {
            rec.violate(format!("expected 20 cores, found {}", res.tau0));
        }
        r.push(rec, started, Some(&doc));
    }
    Ok(())
}
