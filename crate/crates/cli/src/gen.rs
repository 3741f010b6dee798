//! Seeded random instances. All randomness comes from `SplitMix64` seeded
//! with the `seed` parameter, so a parameter set always yields the same
//! document.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use famcover::{Cost, DemandGroup, ExplicitFamily, FamilySpec, NodeId, QuotaInstance};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde_json::Value;

use crate::doc::InstanceDoc;
use crate::error::{CliError, CliResult};

pub type Rng = SplitMix64;

pub fn rng(seed: u64) -> Rng {
    SplitMix64::seed_from_u64(seed)
}

/// Largest ground set for generated explicit families.
pub const MAX_EXPLICIT_NODES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Gp2p,
    QuotaTree,
    MultirootQuotaTree,
    MultiInstanceQuotaTree,
    MultirootGroupSteiner,
    MultirootCoveringSteiner,
    SteinerForest,
    Redblue,
    Explicit,
}

impl GenKind {
    pub const ALL: [GenKind; 9] = [
        GenKind::Gp2p,
        GenKind::QuotaTree,
        GenKind::MultirootQuotaTree,
        GenKind::MultiInstanceQuotaTree,
        GenKind::MultirootGroupSteiner,
        GenKind::MultirootCoveringSteiner,
        GenKind::SteinerForest,
        GenKind::Redblue,
        GenKind::Explicit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GenKind::Gp2p => "gp2p",
            GenKind::QuotaTree => "quota_tree",
            GenKind::MultirootQuotaTree => "multiroot_quota_tree",
            GenKind::MultiInstanceQuotaTree => "multi_instance_quota_tree",
            GenKind::MultirootGroupSteiner => "multiroot_group_steiner",
            GenKind::MultirootCoveringSteiner => "multiroot_covering_steiner",
            GenKind::SteinerForest => "steiner_forest",
            GenKind::Redblue => "redblue",
            GenKind::Explicit => "explicit",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown kind \"{s}\""))
    }
}

/// Target sign of the total charge for G-P2P instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Balance {
    #[default]
    Any,
    Zero,
    Positive,
    Nonneg,
}

impl FromStr for Balance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "any" => Ok(Balance::Any),
            "zero" => Ok(Balance::Zero),
            "positive" => Ok(Balance::Positive),
            "nonneg" => Ok(Balance::Nonneg),
            _ => Err(format!("unknown balance \"{s}\"")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub kind: GenKind,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// G-P2P: number of negative-charge nodes.
    pub tau: Option<usize>,
    pub balance: Balance,
    /// Steiner Forest: number of parts.
    pub parts: Option<usize>,
    /// Steiner Forest: fixed part size; random in 2..=3 when absent.
    pub part_size: Option<usize>,
    /// Root count for multiroot kinds, instance count for multi-instance.
    pub roots: Option<usize>,
    /// Groups per root.
    pub groups: Option<usize>,
    pub red: Option<usize>,
    pub blue: Option<usize>,
    /// Seed sets of a random explicit family.
    pub sets: Option<usize>,
    /// Edge costs are drawn from `1..=max_cost`.
    pub max_cost: Cost,
}

impl GenParams {
    pub fn new(kind: GenKind, n: usize, m: usize, seed: u64) -> Self {
        GenParams {
            kind,
            n,
            m,
            seed,
            tau: None,
            balance: Balance::Any,
            parts: None,
            part_size: None,
            roots: None,
            groups: None,
            red: None,
            blue: None,
            sets: None,
            max_cost: 100,
        }
    }
}

/// Uniform labelled spanning tree from a random Prüfer sequence.
pub fn random_tree(rng: &mut Rng, n: usize) -> Vec<(NodeId, NodeId)> {
    if n < 2 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let code: Vec<NodeId> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BTreeSet<NodeId> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = leaves.pop_first().expect("a leaf always exists");
        edges.push((leaf.min(c), leaf.max(c)));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let a = leaves.pop_first().expect("two leaves remain");
    let b = leaves.pop_first().expect("two leaves remain");
    edges.push((a, b));
    edges
}

/// Random connected simple graph: a uniform spanning tree plus `m - n + 1`
/// distinct extra edges, costs uniform in `1..=max_cost`.
pub fn random_graph(rng: &mut Rng, n: usize, m: usize, max_cost: Cost) -> CliResult<Vec<(NodeId, NodeId, Cost)>> {
    if n < 2 {
        return Err(CliError::input("n must be at least 2"));
    }
    let total = n * (n - 1) / 2;
    if m < n - 1 || m > total {
        return Err(CliError::input(format!("m must lie in [{}, {total}] for n = {n}", n - 1)));
    }
    if max_cost < 1 {
        return Err(CliError::input("max cost must be at least 1"));
    }
    let tree = random_tree(rng, n);
    let mut present: HashSet<(NodeId, NodeId)> = tree.iter().copied().collect();
    let mut pairs = tree;
    let extra = m - (n - 1);
    if 2 * m <= total {
        while pairs.len() < m {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            let p = (u.min(v), u.max(v));
            if u != v && present.insert(p) {
                pairs.push(p);
            }
        }
    } else {
        let mut absent: Vec<(NodeId, NodeId)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|p| !present.contains(p))
            .collect();
        absent.shuffle(rng);
        pairs.extend(absent.into_iter().take(extra));
    }
    Ok(pairs
        .into_iter()
        .map(|(u, v)| (u, v, rng.random_range(1..=max_cost)))
        .collect())
}

fn distinct_nodes(rng: &mut Rng, n: usize, k: usize) -> Vec<NodeId> {
    rand::seq::index::sample(rng, n, k).into_vec()
}

fn sum_except(charges: &[i64], skip: NodeId) -> i64 {
    charges.iter().enumerate().filter(|&(v, _)| v != skip).map(|(_, c)| c).sum()
}

/// G-P2P charges: exactly `tau` nodes in `[-3, -1]`, the rest in `[0, 3]`,
/// then unit steps toward the requested total.
fn gp2p_charges(rng: &mut Rng, n: usize, tau: usize, balance: Balance) -> CliResult<Vec<i64>> {
    if tau > n {
        return Err(CliError::input(format!("tau = {tau} exceeds n = {n}")));
    }
    let negative: HashSet<NodeId> = distinct_nodes(rng, n, tau).into_iter().collect();
    let mut charges: Vec<i64> = (0..n)
        .map(|v| {
            if negative.contains(&v) {
                rng.random_range(-3..=-1)
            } else {
                rng.random_range(0..=3)
            }
        })
        .collect();
    let (lo, hi) = match balance {
        Balance::Any => return Ok(charges),
        Balance::Zero => (0, 0),
        Balance::Positive => (1, i64::MAX),
        Balance::Nonneg => (0, i64::MAX),
    };
    loop {
        let s: i64 = charges.iter().sum();
        if (lo..=hi).contains(&s) {
            return Ok(charges);
        }
        // raise when below, lower when above, one unit on a random eligible node
        let eligible: Vec<NodeId> = (0..n)
            .filter(|v| {
                let c = charges[*v];
                if s < lo {
                    if negative.contains(v) { c < -1 } else { c < 3 }
                } else if negative.contains(v) {
                    c > -3
                } else {
                    c > 0
                }
            })
            .collect();
        let Some(&v) = eligible.choose(rng) else {
            return Err(CliError::input(format!(
                "no charges in [-3, 3] with {tau} negative nodes reach the requested total"
            )));
        };
        charges[v] += if s < lo { 1 } else { -1 };
    }
}

fn nonneg_charges(rng: &mut Rng, n: usize) -> Vec<i64> {
    (0..n).map(|_| rng.random_range(0..=3)).collect()
}

/// A demand strictly above `b(root)`, at most `b(V)` when that is possible.
fn demand_above(rng: &mut Rng, charges: &[i64], root: NodeId) -> i64 {
    let rest = sum_except(charges, root);
    charges[root] + rng.random_range(1..=rest.max(1))
}

fn random_groups(rng: &mut Rng, n: usize, root: NodeId, count: usize) -> Vec<Vec<NodeId>> {
    let others: Vec<NodeId> = (0..n).filter(|&v| v != root).collect();
    (0..count)
        .map(|_| {
            let size = rng.random_range(1..=others.len().min(3));
            let mut g: Vec<NodeId> = distinct_nodes(rng, others.len(), size)
                .into_iter()
                .map(|i| others[i])
                .collect();
            g.sort_unstable();
            g
        })
        .collect()
}

/// Adds, until none is missing, the first part of every violated split.
pub fn dc_closure(ground: usize, mut members: Vec<u32>) -> CliResult<ExplicitFamily> {
    let full = (1u32 << ground) - 1;
    members.retain(|&m| m != 0 && m != full);
    loop {
        let f = ExplicitFamily::from_masks(ground, members.clone())?;
        let before = members.len();
        for &a in f.members() {
            let mut sub = (a - 1) & a;
            while sub != 0 {
                if !f.contains_mask(sub) && !f.contains_mask(a & !sub) {
                    members.push(sub);
                    break;
                }
                sub = (sub - 1) & a;
            }
        }
        if members.len() == before {
            return Ok(f);
        }
    }
}

fn count_in(what: &str, value: usize, lo: usize, hi: usize) -> CliResult<usize> {
    if value < lo || value > hi {
        return Err(CliError::input(format!("{what} must lie in [{lo}, {hi}], got {value}")));
    }
    Ok(value)
}

pub fn generate(p: &GenParams) -> CliResult<InstanceDoc> {
    let n = p.n;
    let mut rng = rng(p.seed);
    let edges = random_graph(&mut rng, n, p.m, p.max_cost)?;
    let family = match p.kind {
        GenKind::Gp2p => {
            let tau = p.tau.unwrap_or((n / 4).max(1));
            FamilySpec::Gp2p { charges: gp2p_charges(&mut rng, n, tau, p.balance)? }
        }
        GenKind::QuotaTree => {
            let root = rng.random_range(0..n);
            let charges = nonneg_charges(&mut rng, n);
            let quota = demand_above(&mut rng, &charges, root);
            FamilySpec::QuotaTree { root, charges, quota }
        }
        GenKind::MultirootQuotaTree => {
            let r = count_in("roots", p.roots.unwrap_or(2), 1, n)?;
            let mut roots = distinct_nodes(&mut rng, n, r);
            roots.sort_unstable();
            let charges = nonneg_charges(&mut rng, n);
            let demands = roots.iter().map(|&v| (v, demand_above(&mut rng, &charges, v))).collect();
            FamilySpec::MultirootQuotaTree { charges, demands }
        }
        GenKind::MultiInstanceQuotaTree => {
            let r = count_in("roots", p.roots.unwrap_or(2), 1, 16)?;
            let instances = (0..r)
                .map(|_| {
                    let root = rng.random_range(0..n);
                    let charges = nonneg_charges(&mut rng, n);
                    let quota = demand_above(&mut rng, &charges, root);
                    QuotaInstance { root, charges, quota }
                })
                .collect();
            FamilySpec::MultiInstanceQuotaTree { instances }
        }
        GenKind::MultirootGroupSteiner | GenKind::MultirootCoveringSteiner => {
            let r = count_in("roots", p.roots.unwrap_or(2), 1, n)?;
            let per = count_in("groups", p.groups.unwrap_or(2), 1, 64)?;
            let mut roots = distinct_nodes(&mut rng, n, r);
            roots.sort_unstable();
            let groups: Vec<(NodeId, Vec<Vec<NodeId>>)> =
                roots.iter().map(|&v| (v, random_groups(&mut rng, n, v, per))).collect();
            if p.kind == GenKind::MultirootGroupSteiner {
                FamilySpec::MultirootGroupSteiner { groups }
            } else {
                let groups = groups
                    .into_iter()
                    .map(|(v, gs)| {
                        let gs = gs
                            .into_iter()
                            .map(|nodes| {
                                let demand = rng.random_range(1..=nodes.len() as u32);
                                DemandGroup { nodes, demand }
                            })
                            .collect();
                        (v, gs)
                    })
                    .collect();
                FamilySpec::MultirootCoveringSteiner { groups }
            }
        }
        GenKind::SteinerForest => {
            let parts = count_in("parts", p.parts.unwrap_or(2), 1, n / 2)?;
            if let Some(s) = p.part_size {
                if s < 2 || s * parts > n {
                    return Err(CliError::input(format!("{parts} parts of size {s} do not fit in {n} nodes")));
                }
            }
            let mut order: Vec<NodeId> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut next = 0;
            let mut out = Vec::with_capacity(parts);
            for i in 0..parts {
                let room = n - next - 2 * (parts - i - 1);
                let size = match p.part_size {
                    Some(s) => s,
                    None => rng.random_range(2..=room.min(3)),
                };
                let mut part = order[next..next + size].to_vec();
                part.sort_unstable();
                out.push(part);
                next += size;
            }
            FamilySpec::SteinerForest { parts: out }
        }
        GenKind::Redblue => {
            let red = p.red.unwrap_or((n / 4).max(1));
            let blue = p.blue.unwrap_or(1);
            count_in("red + blue", red + blue, 0, n)?;
            let picked = distinct_nodes(&mut rng, n, red + blue);
            let mut charges = vec![0; n];
            for (i, &v) in picked.iter().enumerate() {
                charges[v] = if i < red { -1 } else { n as i64 };
            }
            FamilySpec::Gp2p { charges }
        }
        GenKind::Explicit => {
            count_in("n", n, 2, MAX_EXPLICIT_NODES)?;
            let k = p.sets.unwrap_or(3);
            let full = (1u32 << n) - 1;
            let seeds = (0..k).map(|_| rng.random_range(1..full)).collect();
            FamilySpec::Explicit(dc_closure(n, seeds)?)
        }
    };
    Ok(InstanceDoc {
        name: Some(format!("{}-n{}-m{}-s{}", p.kind, n, p.m, p.seed)),
        seed: Some(p.seed),
        nodes: (0..n).map(Value::from).collect(),
        edges,
        decimals: 0,
        family,
    })
}
