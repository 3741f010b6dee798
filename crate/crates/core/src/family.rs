//! Set families over the node set of a graph.
//!
//! Every structured kind is described by a per-node attribute that merges
//! associatively (charges add, groups counts add, roots unite). Membership of
//! a node set `A` is then a predicate on the merged attribute of `A`, and the
//! same predicate decides whether a connected component of a partial solution
//! is a core of the residual family.

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Ground sets of explicit families are bitmasks, so they are capped.
pub const MAX_EXPLICIT_NODES: usize = 16;

/// A family given by listing its members as bitmasks over `ground` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitFamily {
    ground: usize,
    members: Vec<u32>,
}

impl ExplicitFamily {
    pub fn new(ground: usize, sets: &[Vec<NodeId>]) -> Result<Self> {
        Self::check_ground(ground)?;
        let mut masks = Vec::with_capacity(sets.len());
        for set in sets {
            let mut mask = 0u32;
            for &v in set {
                if v >= ground {
                    return Err(Error::input(format!("explicit member uses node {v} outside 0..{ground}")));
                }
                mask |= 1 << v;
            }
            masks.push(mask);
        }
        Self::from_masks(ground, masks)
    }

    pub fn from_masks(ground: usize, mut masks: Vec<u32>) -> Result<Self> {
        Self::check_ground(ground)?;
        let full = full_mask(ground);
        for &m in &masks {
            if m == 0 || m & !full != 0 || m == full {
                return Err(Error::input(format!(
                    "explicit member {m:#b} is not a non-empty proper subset of the ground set"
                )));
            }
        }
        masks.sort_unstable();
        masks.dedup();
        Ok(Self {
            ground,
            members: masks,
        })
    }

    fn check_ground(ground: usize) -> Result<()> {
        if ground > MAX_EXPLICIT_NODES {
            Err(Error::cap("explicit ground set", MAX_EXPLICIT_NODES, ground))
        } else {
            Ok(())
        }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_mask(&self, mask: u32) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    /// Inclusion-minimal members.
    pub fn cores(&self) -> Vec<u32> {
        self.members
            .iter()
            .copied()
            .filter(|&a| !self.members.iter().any(|&b| b != a && b & !a == 0))
            .collect()
    }

    /// Exhaustive disjointness check: for every member `A` and every
    /// `∅ ≠ A' ⊊ A`, `A'` or `A \ A'` is a member.
    pub fn is_dc(&self) -> bool {
        self.members.iter().all(|&a| {
            let mut sub = (a - 1) & a;
            while sub != 0 {
                if !self.contains_mask(sub) && !self.contains_mask(a & !sub) {
                    return false;
                }
                sub = (sub - 1) & a;
            }
            true
        })
    }

    /// Disjointness-compliable and closed under complement.
    pub fn is_proper(&self) -> bool {
        let full = full_mask(self.ground);
        self.is_dc() && self.members.iter().all(|&a| self.contains_mask(full & !a))
    }

    /// Member-wise union of two families on the same ground set.
    pub fn union(&self, other: &ExplicitFamily) -> Result<ExplicitFamily> {
        if self.ground != other.ground {
            return Err(Error::input(format!(
                "ground sets differ: {} vs {}",
                self.ground, other.ground
            )));
        }
        let mut masks = self.members.clone();
        masks.extend_from_slice(&other.members);
        Self::from_masks(self.ground, masks)
    }

    /// Node lists of the members, for display and serialization.
    pub fn sets(&self) -> Vec<Vec<NodeId>> {
        self.members.iter().map(|&m| mask_nodes(m)).collect()
    }
}

pub fn union_family(f1: &ExplicitFamily, f2: &ExplicitFamily) -> Result<ExplicitFamily> {
    f1.union(f2)
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn mask_nodes(mask: u32) -> Vec<NodeId> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// One quota requirement of a multi-instance quota-tree family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotaInstance {
    pub root: NodeId,
    pub charges: Vec<i64>,
    pub quota: i64,
}

/// A group with a coverage demand `1 <= demand <= |nodes|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandGroup {
    pub nodes: Vec<NodeId>,
    pub demand: u32,
}

/// Description of a set family. Charge vectors are dense over node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Explicit(ExplicitFamily),
    /// `{A : b(A) < 0}`
    Gp2p { charges: Vec<i64> },
    /// `{A : root ∈ A, b(A) < quota}`
    QuotaTree {
        root: NodeId,
        charges: Vec<i64>,
        quota: i64,
    },
    /// `{A : b(A) < max k_r over roots r ∈ A}`
    MultirootQuotaTree {
        charges: Vec<i64>,
        demands: Vec<(NodeId, i64)>,
    },
    /// Union over instances `i` of `{A : r_i ∈ A, b_i(A) < k_i}`
    MultiInstanceQuotaTree { instances: Vec<QuotaInstance> },
    /// `{A : some root r ∈ A misses some group of r entirely}`
    MultirootGroupSteiner {
        groups: Vec<(NodeId, Vec<Vec<NodeId>>)>,
    },
    /// `{A : some root r ∈ A has a group X with |A ∩ X| < k_X}`
    MultirootCoveringSteiner {
        groups: Vec<(NodeId, Vec<DemandGroup>)>,
    },
    /// `{A : A divides some part}`
    SteinerForest { parts: Vec<Vec<NodeId>> },
}

impl FamilySpec {
    pub fn kind(&self) -> &'static str {
        match self {
            FamilySpec::Explicit(_) => "explicit",
            FamilySpec::Gp2p { .. } => "gp2p",
            FamilySpec::QuotaTree { .. } => "quota_tree",
            FamilySpec::MultirootQuotaTree { .. } => "multiroot_quota_tree",
            FamilySpec::MultiInstanceQuotaTree { .. } => "multi_instance_quota_tree",
            FamilySpec::MultirootGroupSteiner { .. } => "multiroot_group_steiner",
            FamilySpec::MultirootCoveringSteiner { .. } => "multiroot_covering_steiner",
            FamilySpec::SteinerForest { .. } => "steiner_forest",
        }
    }
}

/// Mergeable summary of a node set, from which membership is decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Attrs {
    Mask(u32),
    Charge(i64),
    Quota {
        charge: i64,
        rooted: bool,
    },
    MultirootQuota {
        charge: i64,
        demand: i64,
    },
    MultiInstance {
        charges: Vec<i64>,
        rooted: Vec<bool>,
    },
    /// Sorted indices of contained roots and per-group hit counts.
    Groups {
        roots: Vec<usize>,
        hits: Vec<u32>,
    },
    /// Per-part hit counts.
    Parts(Vec<u32>),
}

impl Attrs {
    pub fn merge(&mut self, other: &Attrs) {
        match (self, other) {
            (Attrs::Mask(a), Attrs::Mask(b)) => *a |= b,
            (Attrs::Charge(a), Attrs::Charge(b)) => *a += b,
            (
                Attrs::Quota { charge, rooted },
                Attrs::Quota {
                    charge: c2,
                    rooted: r2,
                },
            ) => {
                *charge += c2;
                *rooted |= r2;
            }
            (
                Attrs::MultirootQuota { charge, demand },
                Attrs::MultirootQuota {
                    charge: c2,
                    demand: d2,
                },
            ) => {
                *charge += c2;
                *demand = (*demand).max(*d2);
            }
            (
                Attrs::MultiInstance { charges, rooted },
                Attrs::MultiInstance {
                    charges: c2,
                    rooted: r2,
                },
            ) => {
                charges.iter_mut().zip(c2).for_each(|(a, b)| *a += b);
                rooted.iter_mut().zip(r2).for_each(|(a, b)| *a |= b);
            }
            (Attrs::Groups { roots, hits }, Attrs::Groups { roots: r2, hits: h2 }) => {
                roots.extend_from_slice(r2);
                roots.sort_unstable();
                roots.dedup();
                hits.iter_mut().zip(h2).for_each(|(a, b)| *a += b);
            }
            (Attrs::Parts(a), Attrs::Parts(b)) => a.iter_mut().zip(b).for_each(|(x, y)| *x += y),
            (a, b) => panic!("cannot merge attributes of different kinds: {a:?} / {b:?}"),
        }
    }
}

#[derive(Debug, Clone)]
struct FlatGroup {
    demand: u32,
}

/// A validated family bound to a node count, with precomputed per-node
/// attributes. All membership, residual and oracle code works through this.
#[derive(Debug, Clone)]
pub struct Family {
    spec: FamilySpec,
    n: usize,
    node_attrs: Vec<Attrs>,
    groups: Vec<FlatGroup>,
    /// For group kinds: range of flat group indices owned by each root index.
    root_groups: Vec<std::ops::Range<usize>>,
    part_sizes: Vec<u32>,
    total_charge: i64,
}

impl Family {
    pub fn new(spec: FamilySpec, n: usize) -> Result<Self> {
        validate(&spec, n)?;
        let mut groups = Vec::new();
        let mut root_groups = Vec::new();
        let mut part_sizes = Vec::new();
        let mut total_charge = 0;
        let node_attrs: Vec<Attrs> = match &spec {
            FamilySpec::Explicit(_) => (0..n).map(|v| Attrs::Mask(1 << v)).collect(),
            FamilySpec::Gp2p { charges } => {
                total_charge = charges.iter().sum();
                charges.iter().map(|&c| Attrs::Charge(c)).collect()
            }
            FamilySpec::QuotaTree { root, charges, .. } => charges
                .iter()
                .enumerate()
                .map(|(v, &c)| Attrs::Quota {
                    charge: c,
                    rooted: v == *root,
                })
                .collect(),
            FamilySpec::MultirootQuotaTree { charges, demands } => {
                let mut attrs: Vec<Attrs> = charges
                    .iter()
                    .map(|&c| Attrs::MultirootQuota { charge: c, demand: 0 })
                    .collect();
                for &(r, k) in demands {
                    if let Attrs::MultirootQuota { demand, .. } = &mut attrs[r] {
                        *demand = k;
                    }
                }
                attrs
            }
            FamilySpec::MultiInstanceQuotaTree { instances } => (0..n)
                .map(|v| Attrs::MultiInstance {
                    charges: instances.iter().map(|i| i.charges[v]).collect(),
                    rooted: instances.iter().map(|i| i.root == v).collect(),
                })
                .collect(),
            FamilySpec::MultirootGroupSteiner { groups: g } => {
                let as_demand: Vec<(NodeId, Vec<DemandGroup>)> = g
                    .iter()
                    .map(|(r, xs)| {
                        (
                            *r,
                            xs.iter()
                                .map(|x| DemandGroup {
                                    nodes: x.clone(),
                                    demand: 1,
                                })
                                .collect(),
                        )
                    })
                    .collect();
                group_attrs(&as_demand, n, &mut groups, &mut root_groups)
            }
            FamilySpec::MultirootCoveringSteiner { groups: g } => {
                group_attrs(g, n, &mut groups, &mut root_groups)
            }
            FamilySpec::SteinerForest { parts } => {
                part_sizes = parts.iter().map(|p| p.len() as u32).collect();
                let mut attrs = vec![vec![0u32; parts.len()]; n];
                for (i, p) in parts.iter().enumerate() {
                    for &v in p {
                        attrs[v][i] = 1;
                    }
                }
                attrs.into_iter().map(Attrs::Parts).collect()
            }
        };
        Ok(Self {
            spec,
            n,
            node_attrs,
            groups,
            root_groups,
            part_sizes,
            total_charge,
        })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn node_attrs(&self, v: NodeId) -> &Attrs {
        &self.node_attrs[v]
    }

    /// Merged attributes of an arbitrary node set (computed from scratch).
    pub fn attrs_of(&self, nodes: &[NodeId]) -> Attrs {
        let mut it = nodes.iter();
        let first = it.next().expect("attrs_of needs at least one node");
        let mut acc = self.node_attrs[*first].clone();
        for &v in it {
            acc.merge(&self.node_attrs[v]);
        }
        acc
    }

    /// Whether a node set with attributes `a` is a member of the family.
    pub fn violates(&self, a: &Attrs) -> bool {
        match (&self.spec, a) {
            (FamilySpec::Explicit(f), Attrs::Mask(m)) => f.contains_mask(*m),
            (FamilySpec::Gp2p { .. }, Attrs::Charge(c)) => *c < 0,
            (FamilySpec::QuotaTree { quota, .. }, Attrs::Quota { charge, rooted }) => {
                *rooted && charge < quota
            }
            (FamilySpec::MultirootQuotaTree { .. }, Attrs::MultirootQuota { charge, demand }) => {
                charge < demand
            }
            (FamilySpec::MultiInstanceQuotaTree { instances }, Attrs::MultiInstance { charges, rooted }) => {
                instances
                    .iter()
                    .enumerate()
                    .any(|(i, inst)| rooted[i] && charges[i] < inst.quota)
            }
            (_, Attrs::Groups { roots, hits }) => roots.iter().any(|&r| {
                self.root_groups[r]
                    .clone()
                    .any(|g| hits[g] < self.groups[g].demand)
            }),
            (FamilySpec::SteinerForest { .. }, Attrs::Parts(hits)) => hits
                .iter()
                .zip(&self.part_sizes)
                .any(|(&h, &size)| h > 0 && h < size),
            (spec, a) => panic!("attributes {a:?} do not belong to a {} family", spec.kind()),
        }
    }

    /// Membership in the symmetric form of the family. Only zero-sum G-P2P
    /// differs: there the family `{A : b(A) != 0}` is used.
    pub fn violates_proper(&self, a: &Attrs) -> bool {
        match (&self.spec, a) {
            (FamilySpec::Gp2p { .. }, Attrs::Charge(c)) if self.total_charge == 0 => *c != 0,
            _ => self.violates(a),
        }
    }

    fn checked_set(&self, a: &[NodeId]) -> Result<Vec<NodeId>> {
        let mut set = a.to_vec();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() {
            return Err(Error::input("membership query on the empty set"));
        }
        if let Some(&v) = set.last() {
            if v >= self.n {
                return Err(Error::input(format!("node {v} out of range")));
            }
        }
        if set.len() == self.n {
            return Err(Error::input("membership query on the whole node set"));
        }
        Ok(set)
    }

    /// Membership of `a` (a non-empty proper subset of the nodes).
    pub fn contains(&self, a: &[NodeId]) -> Result<bool> {
        let set = self.checked_set(a)?;
        Ok(self.violates(&self.attrs_of(&set)))
    }

    /// Membership in the symmetric form used by the proper-family solvers.
    pub fn contains_proper(&self, a: &[NodeId]) -> Result<bool> {
        let set = self.checked_set(a)?;
        Ok(self.violates_proper(&self.attrs_of(&set)))
    }

    /// Total charge `b(V)` for G-P2P families, 0 otherwise.
    pub fn total_charge(&self) -> i64 {
        self.total_charge
    }

    /// Kinds accepted by the proper-family solvers: explicit families that
    /// pass the exhaustive check, zero-sum G-P2P and Steiner forest.
    pub fn is_known_proper(&self) -> bool {
        match &self.spec {
            FamilySpec::Explicit(f) => f.is_proper(),
            FamilySpec::Gp2p { .. } => self.total_charge == 0,
            FamilySpec::SteinerForest { .. } => true,
            _ => false,
        }
    }

    /// Cores of the family itself. For a disjointness-compliable family
    /// every core is a singleton, so these are just the violating nodes.
    pub fn singleton_cores(&self) -> Vec<NodeId> {
        (0..self.n)
            .filter(|&v| self.violates(&self.node_attrs[v]))
            .collect()
    }

    /// Terminals of the symmetric form (its singleton cores).
    pub fn proper_terminals(&self) -> Vec<NodeId> {
        (0..self.n)
            .filter(|&v| self.violates_proper(&self.node_attrs[v]))
            .collect()
    }

    /// Lists every member explicitly. `proper_view` selects the symmetric
    /// form for zero-sum G-P2P.
    pub fn to_explicit(&self, proper_view: bool) -> Result<ExplicitFamily> {
        if self.n > MAX_EXPLICIT_NODES {
            return Err(Error::cap("explicit ground set", MAX_EXPLICIT_NODES, self.n));
        }
        let full = full_mask(self.n);
        let members = (1..full)
            .filter(|&m| {
                let a = self.attrs_of(&mask_nodes(m));
                if proper_view {
                    self.violates_proper(&a)
                } else {
                    self.violates(&a)
                }
            })
            .collect();
        ExplicitFamily::from_masks(self.n, members)
    }
}

fn group_attrs(
    roots: &[(NodeId, Vec<DemandGroup>)],
    n: usize,
    groups: &mut Vec<FlatGroup>,
    root_groups: &mut Vec<std::ops::Range<usize>>,
) -> Vec<Attrs> {
    let total: usize = roots.iter().map(|(_, g)| g.len()).sum();
    let mut attrs: Vec<Attrs> = (0..n)
        .map(|_| Attrs::Groups {
            roots: Vec::new(),
            hits: vec![0; total],
        })
        .collect();
    for (ri, (root, gs)) in roots.iter().enumerate() {
        let start = groups.len();
        for g in gs {
            let gi = groups.len();
            groups.push(FlatGroup { demand: g.demand });
            for &v in &g.nodes {
                if let Attrs::Groups { hits, .. } = &mut attrs[v] {
                    hits[gi] = 1;
                }
            }
        }
        root_groups.push(start..groups.len());
        if let Attrs::Groups { roots, .. } = &mut attrs[*root] {
            roots.push(ri);
        }
    }
    attrs
}

fn check_node(v: NodeId, n: usize, what: &str) -> Result<()> {
    if v >= n {
        Err(Error::input(format!("{what} references node {v} outside 0..{n}")))
    } else {
        Ok(())
    }
}

fn check_charges(charges: &[i64], n: usize, nonneg: bool, what: &str) -> Result<()> {
    if charges.len() != n {
        return Err(Error::input(format!(
            "{what}: charge vector has length {}, expected {n}",
            charges.len()
        )));
    }
    if nonneg {
        if let Some(v) = charges.iter().position(|&c| c < 0) {
            return Err(Error::input(format!("{what}: negative charge at node {v}")));
        }
    }
    Ok(())
}

fn check_distinct_nodes(nodes: &[NodeId], n: usize, what: &str) -> Result<()> {
    let mut seen = vec![false; n];
    for &v in nodes {
        check_node(v, n, what)?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::input(format!("{what} lists node {v} twice")));
        }
    }
    Ok(())
}

fn validate(spec: &FamilySpec, n: usize) -> Result<()> {
    match spec {
        FamilySpec::Explicit(f) => {
            if f.ground() != n {
                return Err(Error::input(format!(
                    "explicit family ground set has {} nodes, graph has {n}",
                    f.ground()
                )));
            }
        }
        FamilySpec::Gp2p { charges } => check_charges(charges, n, false, "gp2p")?,
        FamilySpec::QuotaTree {
            root,
            charges,
            quota,
        } => {
            check_node(*root, n, "quota_tree root")?;
            check_charges(charges, n, true, "quota_tree")?;
            if *quota <= charges[*root] {
                return Err(Error::input(format!(
                    "quota_tree: quota {quota} must exceed the root charge {}",
                    charges[*root]
                )));
            }
        }
        FamilySpec::MultirootQuotaTree { charges, demands } => {
            check_charges(charges, n, true, "multiroot_quota_tree")?;
            let roots: Vec<NodeId> = demands.iter().map(|d| d.0).collect();
            check_distinct_nodes(&roots, n, "multiroot_quota_tree demands")?;
            if let Some((r, k)) = demands.iter().find(|&&(r, k)| k <= charges[r]) {
                return Err(Error::input(format!(
                    "multiroot_quota_tree: demand {k} at root {r} must exceed its charge {}",
                    charges[*r]
                )));
            }
        }
        FamilySpec::MultiInstanceQuotaTree { instances } => {
            for (i, inst) in instances.iter().enumerate() {
                check_node(inst.root, n, "multi_instance_quota_tree root")?;
                check_charges(&inst.charges, n, true, "multi_instance_quota_tree")?;
                if inst.quota < 1 {
                    return Err(Error::input(format!(
                        "multi_instance_quota_tree: instance {i} has non-positive quota"
                    )));
                }
            }
        }
        FamilySpec::MultirootGroupSteiner { groups } => {
            let roots: Vec<NodeId> = groups.iter().map(|g| g.0).collect();
            check_distinct_nodes(&roots, n, "multiroot_group_steiner roots")?;
            for (_, xs) in groups {
                for x in xs {
                    if x.is_empty() {
                        return Err(Error::input("multiroot_group_steiner: empty group"));
                    }
                    check_distinct_nodes(x, n, "multiroot_group_steiner group")?;
                }
            }
        }
        FamilySpec::MultirootCoveringSteiner { groups } => {
            let roots: Vec<NodeId> = groups.iter().map(|g| g.0).collect();
            check_distinct_nodes(&roots, n, "multiroot_covering_steiner roots")?;
            for (_, xs) in groups {
                for x in xs {
                    check_distinct_nodes(&x.nodes, n, "multiroot_covering_steiner group")?;
                    if x.demand < 1 || x.demand as usize > x.nodes.len() {
                        return Err(Error::input(format!(
                            "multiroot_covering_steiner: demand {} outside 1..={}",
                            x.demand,
                            x.nodes.len()
                        )));
                    }
                }
            }
        }
        FamilySpec::SteinerForest { parts } => {
            let all: Vec<NodeId> = parts.iter().flatten().copied().collect();
            check_distinct_nodes(&all, n, "steiner_forest parts")?;
            if parts.iter().any(|p| p.len() < 2) {
                return Err(Error::input("steiner_forest: every part needs at least 2 nodes"));
            }
        }
    }
    Ok(())
}
