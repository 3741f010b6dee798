//! Independent re-check of a solution document against its instance.

use famcover::{is_cover, is_forest, residual, Cost, EdgeSet};
use serde_json::{Map, Value};

use crate::doc::{parse_decimal, InstanceDoc};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub edges: EdgeSet,
    pub cost: Cost,
}

impl VerifyReport {
    pub fn to_value(&self, doc: &InstanceDoc) -> Value {
        let mut o = Map::new();
        o.insert("ok".into(), Value::Bool(true));
        o.insert("cost".into(), doc.cost_number(self.cost));
        o.insert("edges".into(), Value::from(self.edges.len()));
        o.insert("cover".into(), Value::Bool(true));
        o.insert("forest".into(), Value::Bool(true));
        Value::Object(o)
    }
}

fn fail(msg: impl Into<String>) -> CliError {
    CliError::Verify(msg.into())
}

fn same_label(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => x.to_string() == y.to_string(),
        (Value::String(x), Value::Number(y)) | (Value::Number(y), Value::String(x)) => *x == y.to_string(),
        _ => a == b,
    }
}

/// Scaled cost of a decimal JSON number at the document's scale, or `None`
/// when it has more decimals than the document.
fn scaled(doc: &InstanceDoc, v: &Value) -> Option<Cost> {
    let Value::Number(n) = v else { return None };
    let text = n.to_string();
    let (m, d) = parse_decimal(&text)?;
    if d > doc.decimals {
        return None;
    }
    Cost::try_from(m * 10i128.pow(doc.decimals - d)).ok()
}

/// Checks, in order: the edge list, the cost field, coverage, the forest
/// property. The first failure is returned as a verification error.
pub fn verify(doc: &InstanceDoc, solution: &Value) -> CliResult<VerifyReport> {
    let root = solution
        .as_object()
        .ok_or_else(|| CliError::input("solution: expected an object"))?;
    let feasible = root
        .get("feasible")
        .and_then(Value::as_bool)
        .ok_or_else(|| CliError::input("solution.feasible: expected a boolean"))?;
    if !feasible {
        return Err(CliError::Infeasible("the solution declares the instance infeasible".into()));
    }
    let listed = root
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::input("solution.edges: expected an array"))?;
    let m = doc.edges.len();
    let mut ids = Vec::with_capacity(listed.len());
    for (i, e) in listed.iter().enumerate() {
        let p = format!("solution.edges[{i}]");
        let o = e.as_object().ok_or_else(|| CliError::input(format!("{p}: expected an object")))?;
        let id = o
            .get("id")
            .and_then(Value::as_u64)
            .ok_or_else(|| CliError::input(format!("{p}.id: expected an edge id")))? as usize;
        if id >= m {
            return Err(fail(format!("{p}: edge id {id} does not exist")));
        }
        let (u, v, c) = doc.edges[id];
        if let (Some(a), Some(b)) = (o.get("u"), o.get("v")) {
            let (lu, lv) = (doc.label(u), doc.label(v));
            let matches = (same_label(a, lu) && same_label(b, lv)) || (same_label(a, lv) && same_label(b, lu));
            if !matches {
                return Err(fail(format!("{p}: endpoints {a}-{b} do not match edge {id} ({lu}-{lv})")));
            }
        }
        if let Some(cost) = o.get("cost") {
            if scaled(doc, cost) != Some(c) {
                return Err(fail(format!("{p}: cost {cost} does not match edge {id} ({})", doc.cost_number(c))));
            }
        }
        ids.push(id);
    }
    let edges = EdgeSet::new(ids.clone());
    if edges.len() != ids.len() {
        return Err(fail("solution.edges: an edge is listed twice"));
    }
    let total: Cost = edges.iter().map(|e| doc.edges[e].2).sum();
    let claimed = root.get("cost").ok_or_else(|| CliError::input("solution.cost: missing"))?;
    if scaled(doc, claimed) != Some(total) {
        return Err(fail(format!(
            "cost mismatch: solution claims {claimed}, listed edges sum to {}",
            doc.cost_number(total)
        )));
    }
    let family = doc.family()?;
    let g = doc.graph();
    if !is_cover(&family, &g, &edges)? {
        let state = residual(&family, &g, &edges)?;
        let uncovered: Vec<Value> = state.cores().iter().map(|&c| doc.labels(&state.blocks()[c])).collect();
        return Err(fail(format!(
            "not a cover; uncovered core(s): {}",
            Value::Array(uncovered)
        )));
    }
    if !is_forest(&g, &edges)? {
        return Err(fail("the edge set contains a cycle"));
    }
    Ok(VerifyReport { edges, cost: total })
}
