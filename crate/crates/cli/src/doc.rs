//! JSON instance documents.
//!
//! ```json
//! {
//!   "name": "path", "seed": 1,
//!   "graph": {"nodes": ["a", "b", "c"],
//!             "edges": [{"u": "a", "v": "b", "cost": 1}, {"u": "b", "v": "c", "cost": 2.5}]},
//!   "family": {"kind": "gp2p", "charges": {"a": -1, "c": 1}}
//! }
//! ```
//!
//! Node labels are strings or non-negative integers; node `i` is the `i`-th
//! entry of `nodes` and edge `j` the `j`-th entry of `edges`. Costs are exact
//! decimals, scaled to integers by `10^d` where `d` is the largest number of
//! decimal places in the document.

use std::collections::HashMap;

use famcover::{Cost, DemandGroup, ExplicitFamily, Family, FamilySpec, NodeId, QuotaInstance, WeightedGraph};
use serde_json::{Map, Number, Value};

use crate::error::{CliError, CliResult};

/// Largest accepted number of decimal places in costs.
pub const MAX_DECIMALS: u32 = 9;
/// Largest accepted scaled cost, leaving room for sums over many edges.
pub const MAX_SCALED_COST: i128 = 1_000_000_000_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDoc {
    pub name: Option<String>,
    pub seed: Option<u64>,
    pub nodes: Vec<Value>,
    /// `(u, v, scaled cost)`
    pub edges: Vec<(NodeId, NodeId, Cost)>,
    pub decimals: u32,
    pub family: FamilySpec,
}

fn err(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::input(format!("{path}: {msg}"))
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> CliResult<&'v Value> {
    obj.get(key).ok_or_else(|| err(path, format!("missing field \"{key}\"")))
}

fn object<'v>(v: &'v Value, path: &str) -> CliResult<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn array<'v>(v: &'v Value, path: &str) -> CliResult<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn integer(v: &Value, path: &str) -> CliResult<i64> {
    v.as_i64().ok_or_else(|| err(path, "expected an integer"))
}

fn label_key(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) if n.as_u64().is_some() => Some(n.to_string()),
        _ => None,
    }
}

/// Splits a non-negative decimal literal into `(mantissa, decimal places)`.
pub(crate) fn parse_decimal(text: &str) -> Option<(i128, u32)> {
    let (body, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let digits = digits.trim_start_matches('0');
    let mut mantissa: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let mut places = frac.len() as i32 - exp;
    while places < 0 {
        mantissa = mantissa.checked_mul(10)?;
        places += 1;
    }
    // drop trailing zeros so "2.50" counts one decimal place
    while places > 0 && mantissa % 10 == 0 {
        mantissa /= 10;
        places -= 1;
    }
    Some((mantissa, places as u32))
}

struct Labels {
    index: HashMap<String, NodeId>,
}

impl Labels {
    fn node(&self, v: &Value, path: &str) -> CliResult<NodeId> {
        let key = label_key(v).ok_or_else(|| err(path, "node labels are strings or non-negative integers"))?;
        self.index
            .get(&key)
            .copied()
            .ok_or_else(|| err(path, format!("unknown node {v}")))
    }

    fn nodes(&self, v: &Value, path: &str) -> CliResult<Vec<NodeId>> {
        array(v, path)?
            .iter()
            .enumerate()
            .map(|(i, x)| self.node(x, &format!("{path}[{i}]")))
            .collect()
    }

    /// Charges as an object `{label: int}` (missing nodes are 0) or an array
    /// of length n.
    fn charges(&self, v: &Value, n: usize, path: &str) -> CliResult<Vec<i64>> {
        match v {
            Value::Array(xs) => {
                if xs.len() != n {
                    return Err(err(path, format!("expected {n} charges, got {}", xs.len())));
                }
                xs.iter()
                    .enumerate()
                    .map(|(i, x)| integer(x, &format!("{path}[{i}]")))
                    .collect()
            }
            Value::Object(m) => {
                let mut out = vec![0; n];
                for (k, x) in m {
                    let p = format!("{path}.{k}");
                    let v = self.node(&Value::String(k.clone()), &p)?;
                    out[v] = integer(x, &p)?;
                }
                Ok(out)
            }
            _ => Err(err(path, "expected an object or an array of charges")),
        }
    }

    /// A map keyed by root label, as an object or as `[{"root": .., key: ..}]`.
    fn rooted<'v>(&self, v: &'v Value, key: &str, path: &str) -> CliResult<Vec<(NodeId, &'v Value, String)>> {
        match v {
            Value::Object(m) => m
                .iter()
                .map(|(k, x)| {
                    let p = format!("{path}.{k}");
                    Ok((self.node(&Value::String(k.clone()), &p)?, x, p))
                })
                .collect(),
            Value::Array(xs) => xs
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let p = format!("{path}[{i}]");
                    let o = object(x, &p)?;
                    let root = self.node(field(o, "root", &p)?, &format!("{p}.root"))?;
                    Ok((root, field(o, key, &p)?, format!("{p}.{key}")))
                })
                .collect(),
            _ => Err(err(path, "expected an object keyed by root or an array")),
        }
    }
}

impl InstanceDoc {
    pub fn parse(text: &str) -> CliResult<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::input(format!("$: {e}")))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> CliResult<Self> {
        let root = object(value, "$")?;
        let name = match root.get("name") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(err("$.name", "expected a string")),
        };
        let seed = match root.get("seed") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| err("$.seed", "expected a non-negative integer"))?),
        };
        let graph = object(field(root, "graph", "$")?, "$.graph")?;
        let nodes = array(field(graph, "nodes", "$.graph")?, "$.graph.nodes")?.clone();
        if nodes.len() < 2 {
            return Err(err("$.graph.nodes", "at least two nodes are required"));
        }
        let mut index = HashMap::new();
        for (i, v) in nodes.iter().enumerate() {
            let p = format!("$.graph.nodes[{i}]");
            let key = label_key(v).ok_or_else(|| err(&p, "node labels are strings or non-negative integers"))?;
            if index.insert(key, i).is_some() {
                return Err(err(&p, format!("duplicate node {v}")));
            }
        }
        let labels = Labels { index };
        let n = nodes.len();

        let raw = array(field(graph, "edges", "$.graph")?, "$.graph.edges")?;
        let mut parsed = Vec::with_capacity(raw.len());
        let mut decimals = 0;
        for (i, e) in raw.iter().enumerate() {
            let p = format!("$.graph.edges[{i}]");
            let o = object(e, &p)?;
            let u = labels.node(field(o, "u", &p)?, &format!("{p}.u"))?;
            let v = labels.node(field(o, "v", &p)?, &format!("{p}.v"))?;
            if u == v {
                return Err(err(&p, "self-loops are not allowed"));
            }
            let cp = format!("{p}.cost");
            let cost = match field(o, "cost", &p)? {
                Value::Number(x) => x.to_string(),
                _ => return Err(err(&cp, "expected a number")),
            };
            if cost.starts_with('-') {
                return Err(err(&cp, "costs must be non-negative"));
            }
            let (m, d) = parse_decimal(&cost).ok_or_else(|| err(&cp, "malformed number"))?;
            if d > MAX_DECIMALS {
                return Err(err(&cp, format!("more than {MAX_DECIMALS} decimal places")));
            }
            decimals = decimals.max(d);
            parsed.push((u, v, m, d, cp));
        }
        let mut edges = Vec::with_capacity(parsed.len());
        for (u, v, m, d, cp) in parsed {
            let scaled = m * 10i128.pow(decimals - d);
            if scaled > MAX_SCALED_COST {
                return Err(err(&cp, "cost too large"));
            }
            edges.push((u, v, scaled as Cost));
        }

        let family = parse_family(field(root, "family", "$")?, &labels, n)?;
        let doc = InstanceDoc { name, seed, nodes, edges, decimals, family };
        doc.family()?;
        Ok(doc)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn graph(&self) -> WeightedGraph {
        WeightedGraph::from_edges(self.nodes.len(), &self.edges).expect("edges validated at parse time")
    }

    pub fn family(&self) -> CliResult<Family> {
        Family::new(self.family.clone(), self.nodes.len()).map_err(|e| match e {
            famcover::Error::CapExceeded { .. } => CliError::Cap(format!("$.family: {e}")),
            _ => CliError::input(format!("$.family: {e}")),
        })
    }

    pub fn label(&self, v: NodeId) -> &Value {
        &self.nodes[v]
    }

    pub fn labels(&self, vs: &[NodeId]) -> Value {
        Value::Array(vs.iter().map(|&v| self.nodes[v].clone()).collect())
    }

    /// Scaled cost back to an exact decimal JSON number.
    pub fn cost_number(&self, c: Cost) -> Value {
        format_decimal(c as i128, self.decimals)
    }

    /// Scaled cost as a float in document units.
    pub fn cost_f64(&self, c: Cost) -> f64 {
        c as f64 / 10f64.powi(self.decimals as i32)
    }

    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        if let Some(name) = &self.name {
            root.insert("name".into(), Value::String(name.clone()));
        }
        if let Some(seed) = self.seed {
            root.insert("seed".into(), Value::from(seed));
        }
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|&(u, v, c)| {
                let mut e = Map::new();
                e.insert("u".into(), self.nodes[u].clone());
                e.insert("v".into(), self.nodes[v].clone());
                e.insert("cost".into(), self.cost_number(c));
                Value::Object(e)
            })
            .collect();
        let mut graph = Map::new();
        graph.insert("nodes".into(), Value::Array(self.nodes.clone()));
        graph.insert("edges".into(), Value::Array(edges));
        root.insert("graph".into(), Value::Object(graph));
        root.insert("family".into(), self.family_value());
        Value::Object(root)
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }

    fn charges_value(&self, charges: &[i64]) -> Value {
        let mut m = Map::new();
        for (v, &c) in charges.iter().enumerate() {
            if c != 0 {
                m.insert(self.key(v), Value::from(c));
            }
        }
        Value::Object(m)
    }

    fn key(&self, v: NodeId) -> String {
        label_key(&self.nodes[v]).expect("labels validated")
    }

    fn family_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), Value::String(self.family.kind().into()));
        match &self.family {
            FamilySpec::Explicit(f) => {
                let sets = f.sets().iter().map(|s| self.labels(s)).collect();
                m.insert("sets".into(), Value::Array(sets));
            }
            FamilySpec::Gp2p { charges } => {
                m.insert("charges".into(), self.charges_value(charges));
            }
            FamilySpec::QuotaTree { root, charges, quota } => {
                m.insert("root".into(), self.nodes[*root].clone());
                m.insert("charges".into(), self.charges_value(charges));
                m.insert("quota".into(), Value::from(*quota));
            }
            FamilySpec::MultirootQuotaTree { charges, demands } => {
                m.insert("charges".into(), self.charges_value(charges));
                let d = demands.iter().map(|&(r, k)| (self.key(r), Value::from(k))).collect();
                m.insert("demands".into(), Value::Object(d));
            }
            FamilySpec::MultiInstanceQuotaTree { instances } => {
                let xs = instances
                    .iter()
                    .map(|i| {
                        let mut o = Map::new();
                        o.insert("root".into(), self.nodes[i.root].clone());
                        o.insert("charges".into(), self.charges_value(&i.charges));
                        o.insert("quota".into(), Value::from(i.quota));
                        Value::Object(o)
                    })
                    .collect();
                m.insert("instances".into(), Value::Array(xs));
            }
            FamilySpec::MultirootGroupSteiner { groups } => {
                let g = groups
                    .iter()
                    .map(|(r, gs)| (self.key(*r), Value::Array(gs.iter().map(|x| self.labels(x)).collect())))
                    .collect();
                m.insert("groups".into(), Value::Object(g));
            }
            FamilySpec::MultirootCoveringSteiner { groups } => {
                let g = groups
                    .iter()
                    .map(|(r, gs)| {
                        let xs = gs
                            .iter()
                            .map(|x| {
                                let mut o = Map::new();
                                o.insert("nodes".into(), self.labels(&x.nodes));
                                o.insert("demand".into(), Value::from(x.demand));
                                Value::Object(o)
                            })
                            .collect();
                        (self.key(*r), Value::Array(xs))
                    })
                    .collect();
                m.insert("groups".into(), Value::Object(g));
            }
            FamilySpec::SteinerForest { parts } => {
                m.insert("parts".into(), Value::Array(parts.iter().map(|p| self.labels(p)).collect()));
            }
        }
        Value::Object(m)
    }

    /// Node lookup by label, used for command-line node lists.
    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.nodes.iter().position(|v| label_key(v).as_deref() == Some(label))
    }
}

pub fn format_decimal(c: i128, decimals: u32) -> Value {
    let text = if decimals == 0 {
        c.to_string()
    } else {
        let scale = 10i128.pow(decimals);
        let sign = if c < 0 { "-" } else { "" };
        let a = c.abs();
        format!("{sign}{}.{:0width$}", a / scale, a % scale, width = decimals as usize)
    };
    Value::Number(serde_json::from_str::<Number>(&text).expect("decimal literal"))
}

fn parse_family(v: &Value, labels: &Labels, n: usize) -> CliResult<FamilySpec> {
    let p = "$.family";
    let o = object(v, p)?;
    let kind = field(o, "kind", p)?
        .as_str()
        .ok_or_else(|| err("$.family.kind", "expected a string"))?;
    let sub = |k: &str| format!("{p}.{k}");
    let charges = |key: &str| labels.charges(field(o, key, p)?, n, &sub(key));
    let spec = match kind {
        "explicit" => {
            let sets_path = sub("sets");
            let sets: Vec<Vec<NodeId>> = array(field(o, "sets", p)?, &sets_path)?
                .iter()
                .enumerate()
                .map(|(i, s)| labels.nodes(s, &format!("{sets_path}[{i}]")))
                .collect::<CliResult<_>>()?;
            let f = ExplicitFamily::new(n, &sets).map_err(|e| match e {
                famcover::Error::CapExceeded { .. } => CliError::Cap(format!("{sets_path}: {e}")),
                _ => err(&sets_path, e),
            })?;
            FamilySpec::Explicit(f)
        }
        "gp2p" => FamilySpec::Gp2p { charges: charges("charges")? },
        "quota_tree" => FamilySpec::QuotaTree {
            root: labels.node(field(o, "root", p)?, &sub("root"))?,
            charges: charges("charges")?,
            quota: integer(field(o, "quota", p)?, &sub("quota"))?,
        },
        "multiroot_quota_tree" => {
            let demands = labels
                .rooted(field(o, "demands", p)?, "demand", &sub("demands"))?
                .into_iter()
                .map(|(r, x, path)| Ok((r, integer(x, &path)?)))
                .collect::<CliResult<_>>()?;
            FamilySpec::MultirootQuotaTree { charges: charges("charges")?, demands }
        }
        "multi_instance_quota_tree" => {
            let ip = sub("instances");
            let instances = array(field(o, "instances", p)?, &ip)?
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let q = format!("{ip}[{i}]");
                    let io = object(x, &q)?;
                    Ok(QuotaInstance {
                        root: labels.node(field(io, "root", &q)?, &format!("{q}.root"))?,
                        charges: labels.charges(field(io, "charges", &q)?, n, &format!("{q}.charges"))?,
                        quota: integer(field(io, "quota", &q)?, &format!("{q}.quota"))?,
                    })
                })
                .collect::<CliResult<_>>()?;
            FamilySpec::MultiInstanceQuotaTree { instances }
        }
        "multiroot_group_steiner" => {
            let groups = labels
                .rooted(field(o, "groups", p)?, "groups", &sub("groups"))?
                .into_iter()
                .map(|(r, x, path)| {
                    let gs = array(x, &path)?
                        .iter()
                        .enumerate()
                        .map(|(i, g)| labels.nodes(g, &format!("{path}[{i}]")))
                        .collect::<CliResult<_>>()?;
                    Ok((r, gs))
                })
                .collect::<CliResult<_>>()?;
            FamilySpec::MultirootGroupSteiner { groups }
        }
        "multiroot_covering_steiner" => {
            let groups = labels
                .rooted(field(o, "groups", p)?, "groups", &sub("groups"))?
                .into_iter()
                .map(|(r, x, path)| {
                    let gs = array(x, &path)?
                        .iter()
                        .enumerate()
                        .map(|(i, g)| {
                            let q = format!("{path}[{i}]");
                            let go = object(g, &q)?;
                            let demand = integer(field(go, "demand", &q)?, &format!("{q}.demand"))?;
                            Ok(DemandGroup {
                                nodes: labels.nodes(field(go, "nodes", &q)?, &format!("{q}.nodes"))?,
                                demand: u32::try_from(demand)
                                    .map_err(|_| err(&format!("{q}.demand"), "expected a non-negative integer"))?,
                            })
                        })
                        .collect::<CliResult<_>>()?;
                    Ok((r, gs))
                })
                .collect::<CliResult<_>>()?;
            FamilySpec::MultirootCoveringSteiner { groups }
        }
        "steiner_forest" => {
            let pp = sub("parts");
            let parts = array(field(o, "parts", p)?, &pp)?
                .iter()
                .enumerate()
                .map(|(i, x)| labels.nodes(x, &format!("{pp}[{i}]")))
                .collect::<CliResult<_>>()?;
            FamilySpec::SteinerForest { parts }
        }
        other => return Err(err("$.family.kind", format!("unknown family kind \"{other}\""))),
    };
    Ok(spec)
}
