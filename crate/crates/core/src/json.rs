//! JSON documents: curve and table inputs, and the outputs of every command.
//! All documents carry `"schema": "torres-mult/1"`; rationals are `"p/q"` strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::multiplier::{IdealPresentation, Monomial};
use crate::oracles::BlowupChain;
use crate::parse::parse_poly;
use crate::poly::BiPoly;
use crate::rat::{fmt_rat, Rat};
use crate::resolution::{resolve_with, Curve, Factor, NodeKind, Resolution, ResolveOptions};
use crate::tree::{BranchRow, EndKind, RuptureRow, ValuationTable};

pub const SCHEMA: &str = "torres-mult/1";

/// A polynomial given as infix text or as `[[i, j, "p/q"], …]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyInput {
    Text(String),
    Terms(BiPoly),
}

impl PolyInput {
    pub fn to_poly(&self) -> Result<BiPoly> {
        match self {
            PolyInput::Text(s) => parse_poly(s),
            PolyInput::Terms(p) => Ok(p.clone()),
        }
    }
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub poly: PolyInput,
    #[serde(default = "one")]
    pub mult: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveDoc {
    #[serde(default)]
    pub schema: Option<String>,
    pub factors: Vec<FactorDoc>,
    #[serde(default, rename = "first_L")]
    pub first_l: Option<PolyInput>,
    /// Display names of the ends, keyed by label (`R1`, `L1`, `L2`, …).
    #[serde(default)]
    pub names: BTreeMap<String, String>,
}

fn check_schema(s: &Option<String>) -> Result<()> {
    match s {
        Some(s) if s != SCHEMA => Err(Error::InvalidInput(format!("unsupported schema {s}"))),
        _ => Ok(()),
    }
}

impl CurveDoc {
    pub fn from_json(s: &str) -> Result<Self> {
        let d: CurveDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        check_schema(&d.schema)?;
        Ok(d)
    }

    /// Lines `name = poly`, `name [a] = poly` or `first_L = poly`; `#` starts a comment.
    pub fn from_text(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        let mut first_l = None;
        for (n, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = match line.split_once('=') {
                Some((l, r)) => (l.trim(), r.trim()),
                None => ("", line),
            };
            if lhs == "first_L" {
                first_l = Some(PolyInput::Text(rhs.to_string()));
                continue;
            }
            let (name, mult) = match lhs.split_once('[') {
                Some((nm, rest)) => {
                    let a = rest
                        .trim_end_matches(']')
                        .trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("line {}: bad multiplicity", n + 1)))?;
                    (nm.trim(), a)
                }
                None => (lhs, 1),
            };
            factors.push(FactorDoc {
                name: (!name.is_empty()).then(|| name.to_string()),
                poly: PolyInput::Text(rhs.to_string()),
                mult,
            });
        }
        Ok(CurveDoc { schema: None, factors, first_l, names: BTreeMap::new() })
    }

    pub fn to_curve(&self) -> Result<(Curve, Option<BiPoly>)> {
        let factors = self
            .factors
            .iter()
            .enumerate()
            .map(|(k, f)| {
                Ok(Factor {
                    name: f.name.clone().unwrap_or_else(|| format!("C{}", k + 1)),
                    poly: f.poly.to_poly()?,
                    mult: f.mult,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let first_l = self.first_l.as_ref().map(|p| p.to_poly()).transpose()?;
        Ok((Curve::new(factors)?, first_l))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchDoc {
    pub name: String,
    #[serde(default = "one")]
    pub mult: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuptureDoc {
    pub name: String,
    pub lambda: i64,
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableDoc {
    #[serde(default)]
    pub schema: Option<String>,
    pub elements: Vec<String>,
    pub branches: Vec<BranchDoc>,
    pub rupture: Vec<RuptureDoc>,
}

impl TableDoc {
    /// Accepts a bare table or a full `resolve` output containing one.
    pub fn from_json(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let schema = v.get("schema").and_then(|s| s.as_str()).map(String::from);
        check_schema(&schema)?;
        let inner = v.get("table").cloned().unwrap_or(v);
        serde_json::from_value(inner).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_table(&self) -> Result<ValuationTable> {
        ValuationTable::new(
            self.elements.clone(),
            self.branches.iter().map(|b| BranchRow { name: b.name.clone(), mult: b.mult }).collect(),
            self.rupture
                .iter()
                .map(|r| RuptureRow {
                    name: r.name.clone(),
                    lambda: r.lambda.into(),
                    values: r.values.iter().map(|&v| BigInt::from(v)).collect(),
                })
                .collect(),
        )
    }
}

/// A resolved curve with its display names and valuation table.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub resolution: Resolution,
    pub names: BTreeMap<String, String>,
    pub table: ValuationTable,
}

pub fn analyze(doc: &CurveDoc) -> Result<Analysis> {
    let (curve, first_l) = doc.to_curve()?;
    let resolution = resolve_with(&curve, &ResolveOptions { first_l, depth_guard: None })?;
    let mut names = resolution.element_names();
    for (k, v) in &doc.names {
        if !names.contains_key(k) {
            return Err(Error::UnknownElement(k.clone()));
        }
        names.insert(k.clone(), v.clone());
    }
    let table = resolution.valuation_table(&names)?;
    Ok(Analysis { resolution, names, table })
}

impl Analysis {
    /// The polynomial behind a display name or label, lifted when needed.
    pub fn element_poly(&self, name: &str) -> Result<BiPoly> {
        let label = self
            .names
            .iter()
            .find(|(_, v)| v.as_str() == name)
            .map(|(k, _)| k.clone())
            .unwrap_or_else(|| name.to_string());
        self.resolution.lift_curvetta(&label)
    }

    /// Expands a formal monomial into a polynomial when every element lifts.
    pub fn monomial_poly(&self, m: &Monomial) -> Result<BiPoly> {
        let mut acc = BiPoly::one();
        for (e, name) in m.0.iter().zip(&self.table.elements) {
            if *e > 0 {
                acc = acc.mul(&self.element_poly(name)?.pow(*e));
            }
        }
        Ok(acc)
    }
}

pub fn rat_json(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

fn int_json(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => Value::String(n.to_string()),
    }
}

pub fn table_json(t: &ValuationTable) -> Value {
    json!({
        "elements": t.elements,
        "branches": t.branches.iter().map(|b| json!({"name": b.name, "mult": b.mult})).collect::<Vec<_>>(),
        "rupture": t.rupture.iter().map(|r| json!({
            "name": r.name,
            "lambda": int_json(&r.lambda),
            "values": r.values.iter().map(int_json).collect::<Vec<_>>(),
            "curve_value": int_json(&t.curve_value(r)),
        })).collect::<Vec<_>>(),
    })
}

pub fn table_doc_json(t: &ValuationTable) -> Value {
    let mut v = table_json(t);
    v["schema"] = json!(SCHEMA);
    v
}

pub fn tree_json(a: &Analysis) -> Value {
    let res = &a.resolution;
    let nodes: Vec<Value> = res
        .tree
        .nodes
        .iter()
        .zip(&res.ledger)
        .map(|(n, l)| {
            let kind = match l.kind {
                NodeKind::Modified => "modified",
                NodeKind::Terminal => "terminal",
                NodeKind::Conjugate => "conjugate",
            };
            json!({
                "id": n.id,
                "parent": n.parent,
                "attach": n.attach.as_ref().map(rat_json),
                "kind": kind,
                "r": n.r_label,
                "end": n.end_label,
                "end_name": a.names.get(&n.end_label).cloned().unwrap_or_else(|| n.end_label.clone()),
                "end_is_branch": matches!(n.end_kind, EndKind::Branch(_)),
                "end_slope": n.end_slope.to_string(),
                "marked": n.marked.iter().map(|m| json!({
                    "label": m.label,
                    "slope": rat_json(&m.slope),
                    "ray": [int_json(&m.ray.a), int_json(&m.ray.b)],
                    "children": m.children,
                })).collect::<Vec<_>>(),
                "center": l.parent.as_ref().map(|p| rat_json(&p.center)),
                "lambda_r": int_json(&l.lambda_r),
            })
        })
        .collect();
    json!({ "nodes": nodes })
}

pub fn resolve_json(a: &Analysis) -> Result<Value> {
    let decs = a.resolution.tree.decorations()?;
    let decorations: Vec<Value> = decs
        .iter()
        .map(|d| {
            json!({
                "label": d.label,
                "node": d.node,
                "slope": rat_json(&d.slope),
                "delta": d.delta,
                "delta_plus": d.delta_plus,
                "index": int_json(&d.index),
                "index_plus": int_json(&d.index_plus),
                "exponent": rat_json(&d.exponent),
                "contact": rat_json(&d.contact),
                "lambda": int_json(&d.lambda),
                "rupture": a.table.row(&d.label).is_some(),
            })
        })
        .collect();
    let mut notes = Vec::new();
    if a.table.rupture.is_empty() {
        notes.push("no rupture components");
    }
    Ok(json!({
        "schema": SCHEMA,
        "factors": a.resolution.curve.factors.iter().map(|f| json!({
            "name": f.name, "poly": f.poly.to_string(), "mult": f.mult,
        })).collect::<Vec<_>>(),
        "names": a.names,
        "tree": tree_json(a),
        "decorations": decorations,
        "table": table_json(&a.table),
        "lct": rat_json(&crate::multiplier::lct(&a.table)),
        "notes": notes,
    }))
}

pub fn jumping_json(list: &[Rat]) -> Value {
    json!({ "schema": SCHEMA, "jumping_numbers": list.iter().map(rat_json).collect::<Vec<_>>() })
}

pub fn ideal_json(p: &IdealPresentation) -> Value {
    let gens: Vec<Value> = p
        .generators
        .iter()
        .map(|g| {
            json!({
                "monomial": p_named(&g.monomial, &p.elements),
                "text": g.monomial.display(&p.elements),
                "xi_M": rat_json(&g.xi_m),
                "values": g.values.iter().map(int_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "schema": SCHEMA, "ideal": { "xi": rat_json(&p.xi), "text": p.to_string(), "generators": gens } })
}

fn p_named(m: &Monomial, elements: &[String]) -> Value {
    let named = m.named(elements);
    json!(named)
}

pub fn member_json(member: bool, witness: Option<&str>, xi: &Rat) -> Value {
    json!({ "schema": SCHEMA, "xi": rat_json(xi), "member": member, "witness": witness })
}

pub fn blowup_json(ch: &BlowupChain) -> Value {
    let divs: Vec<Value> = ch
        .divisors
        .iter()
        .map(|d| {
            json!({
                "id": d.id + 1,
                "lambda": int_json(&d.lambda),
                "nu_curve": int_json(&ch.curve_value(d)),
                "nu_factors": d.nu.iter().map(int_json).collect::<Vec<_>>(),
                "through": d.through.iter().map(|t| t + 1).collect::<Vec<_>>(),
                "valency": ch.valency(d.id),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "divisors": divs,
        "rupture": ch.rupture_data().iter().map(|(l, n)| json!({"lambda": int_json(l), "nu_curve": int_json(n)})).collect::<Vec<_>>(),
    })
}
