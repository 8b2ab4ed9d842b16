//! Fan trees and their decorations: index, exponent, contact complexity,
//! tripod centers, log-discrepancies and divisorial valuations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{vec_of_slope, LatticeVec};
use crate::rat::{den, rat_int, Rat, Slope};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndKind {
    /// A completion branch `L_i` that is not a component of the curve.
    L,
    /// An end of the factor with this index.
    Branch(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedPoint {
    pub slope: Rat,
    pub ray: LatticeVec,
    pub label: String,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    /// Slope of the attaching point on the parent trunk.
    pub attach: Option<Rat>,
    /// Label of the point of slope 0.
    pub r_label: String,
    pub marked: Vec<MarkedPoint>,
    /// `∞` for an ordinary trunk, `1` for a terminal one.
    pub end_slope: Slope,
    pub end_label: String,
    pub end_kind: EndKind,
    pub terminal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanTree {
    /// Nodes by id; node `k` is stored at index `k - 1`.
    pub nodes: Vec<TreeNode>,
    /// Factor names and multiplicities, in declaration order.
    pub branches: Vec<(String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreePoint {
    pub node: usize,
    pub slope: Slope,
}

impl TreePoint {
    pub fn new(node: usize, slope: Slope) -> Self {
        TreePoint { node, slope }
    }
}

pub const ROOT_LABEL: &str = "R1";

impl FanTree {
    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id - 1]
    }

    pub fn root(&self) -> TreePoint {
        TreePoint::new(1, Slope::zero())
    }

    /// Moves a slope-0 point onto its parent trunk.
    pub fn canonical(&self, p: &TreePoint) -> TreePoint {
        let mut p = p.clone();
        while p.slope.is_zero() {
            let n = self.node(p.node);
            match (n.parent, &n.attach) {
                (Some(par), Some(s)) => p = TreePoint::new(par, Slope::Finite(s.clone())),
                _ => break,
            }
        }
        p
    }

    /// Root-to-point list of `(node, slope)`: attach slopes, then the final slope.
    pub fn chain(&self, p: &TreePoint) -> Vec<(usize, Slope)> {
        let p = self.canonical(p);
        let mut out = vec![(p.node, p.slope.clone())];
        let mut cur = p.node;
        while let Some(par) = self.node(cur).parent {
            let s = self.node(cur).attach.clone().expect("attached node");
            out.push((par, Slope::Finite(s)));
            cur = par;
        }
        out.reverse();
        out
    }

    /// Attach slopes of the nodes leading to `id`.
    pub fn attach_chain(&self, id: usize) -> Vec<Rat> {
        let mut out = Vec::new();
        let mut cur = id;
        while let Some(par) = self.node(cur).parent {
            out.push(self.node(cur).attach.clone().unwrap());
            cur = par;
        }
        out.reverse();
        out
    }

    pub fn marked_at(&self, p: &TreePoint) -> Option<&MarkedPoint> {
        let p = self.canonical(p);
        let s = p.slope.finite()?;
        self.node(p.node).marked.iter().find(|m| &m.slope == s)
    }

    pub fn is_ramification(&self, p: &TreePoint) -> bool {
        self.marked_at(p).is_some_and(|m| !m.children.is_empty())
    }

    /// All interior marked points, by node id then slope.
    pub fn marked_points(&self) -> Vec<(TreePoint, &MarkedPoint)> {
        self.nodes
            .iter()
            .flat_map(|n| n.marked.iter().map(move |m| (TreePoint::new(n.id, Slope::Finite(m.slope.clone())), m)))
            .collect()
    }

    /// Every end with its label: `R1`, the `L_i`, and branch ends.
    pub fn ends(&self) -> Vec<(String, TreePoint)> {
        let mut out = vec![(ROOT_LABEL.to_string(), self.root())];
        for n in &self.nodes {
            out.push((n.end_label.clone(), TreePoint::new(n.id, n.end_slope.clone())));
        }
        out
    }

    pub fn point_of(&self, label: &str) -> Option<TreePoint> {
        if label == ROOT_LABEL {
            return Some(self.root());
        }
        for n in &self.nodes {
            if n.end_label == label {
                return Some(TreePoint::new(n.id, n.end_slope.clone()));
            }
            if let Some(m) = n.marked.iter().find(|m| m.label == label) {
                return Some(TreePoint::new(n.id, Slope::Finite(m.slope.clone())));
            }
        }
        None
    }

    /// Ends belonging to the factor with index `j`.
    pub fn branch_ends(&self, j: usize) -> Vec<TreePoint> {
        self.nodes
            .iter()
            .filter(|n| n.end_kind == EndKind::Branch(j))
            .map(|n| TreePoint::new(n.id, n.end_slope.clone()))
            .collect()
    }

    /// Nodes whose end is a completion branch `L_i` outside the curve.
    pub fn l_nodes(&self) -> Vec<&TreeNode> {
        self.nodes.iter().filter(|n| n.end_kind == EndKind::L).collect()
    }

    pub fn index(&self, p: &TreePoint) -> BigInt {
        let c = self.chain(p);
        c[..c.len() - 1]
            .iter()
            .map(|(_, s)| den(s.finite().expect("attach slopes are finite")))
            .product()
    }

    pub fn index_plus(&self, p: &TreePoint) -> BigInt {
        let i = self.index(p);
        if self.is_ramification(p) {
            let p = self.canonical(p);
            i * den(p.slope.finite().unwrap())
        } else {
            i
        }
    }

    fn weighted_sum(&self, p: &TreePoint, power: u32) -> Result<Rat> {
        let mut acc = Rat::zero();
        let mut idx = BigInt::one();
        for (_, s) in self.chain(p) {
            let s = s
                .finite()
                .ok_or_else(|| Error::InvalidInput("integral diverges at an end of slope ∞".into()))?;
            acc += s / rat_int(num_traits::pow(idx.clone(), power as usize));
            idx *= den(s);
        }
        Ok(acc)
    }

    pub fn exponent(&self, p: &TreePoint) -> Result<Rat> {
        self.weighted_sum(p, 1)
    }

    pub fn contact(&self, p: &TreePoint) -> Result<Rat> {
        self.weighted_sum(p, 2)
    }

    pub fn meet(&self, p: &TreePoint, q: &TreePoint) -> TreePoint {
        let cp = self.chain(p);
        let cq = self.chain(q);
        let mut k = 0;
        loop {
            debug_assert_eq!(cp[k].0, cq[k].0);
            let (sp, sq) = (&cp[k].1, &cq[k].1);
            let more = k + 1 < cp.len() && k + 1 < cq.len();
            if more && sp == sq && cp[k + 1].0 == cq[k + 1].0 {
                k += 1;
                continue;
            }
            return self.canonical(&TreePoint::new(cp[k].0, sp.min(sq).clone()));
        }
    }

    /// Whether `p` lies on the segment from the root to `q`.
    pub fn precedes(&self, p: &TreePoint, q: &TreePoint) -> bool {
        self.meet(p, q) == self.canonical(p)
    }

    pub fn tripod_center(&self, a: &TreePoint, b: &TreePoint, c: &TreePoint) -> TreePoint {
        let ms = [self.meet(a, b), self.meet(a, c), self.meet(b, c)];
        ms.iter()
            .find(|m| ms.iter().all(|o| self.precedes(o, m)))
            .cloned()
            .expect("pairwise meets are totally ordered")
    }

    /// Log-discrepancy from the index and exponent: `i⁺(p)·(1 + e(p))`.
    ///
    /// At points that are not ramification points the index is multiplied by
    /// the denominator of the slope, which is the index just past `p`.
    pub fn log_discrepancy_index_form(&self, p: &TreePoint) -> Result<BigInt> {
        let p = self.canonical(p);
        let s = p.slope.finite().ok_or_else(|| Error::InvalidInput("λ at an end of slope ∞".into()))?;
        let ip = self.index(&p) * den(s);
        to_integer(rat_int(ip) * (Rat::one() + self.exponent(&p)?))
    }

    /// Log-discrepancy of the root divisor of a node: `λ_{R_1} = 1`.
    pub fn lambda_r(&self, node: usize) -> BigInt {
        let n = self.node(node);
        match (n.parent, &n.attach) {
            (Some(par), Some(s)) => {
                let v = vec_of_slope(&Slope::Finite(s.clone()));
                v.a * self.lambda_r(par) + v.b
            }
            _ => BigInt::one(),
        }
    }

    /// Log-discrepancy by propagation: `⟨e_{D_p}, (λ_{R_i}, 1)⟩`.
    pub fn log_discrepancy_propagated(&self, p: &TreePoint) -> Result<BigInt> {
        let p = self.canonical(p);
        if !matches!(p.slope, Slope::Finite(_)) {
            return Err(Error::InvalidInput("λ at an end of slope ∞".into()));
        }
        let v = vec_of_slope(&p.slope);
        Ok(v.a * self.lambda_r(p.node) + v.b)
    }

    /// `ν_{D_p}` of a completion branch end; `e` is `None` for `R`.
    pub fn valuation(&self, p: &TreePoint, e: Option<&TreePoint>) -> Result<BigInt> {
        let ip = self.index_plus(p);
        match e {
            None => Ok(ip),
            Some(e) => {
                let c = self.contact(&self.meet(p, e))?;
                to_integer(rat_int(ip * self.index(e)) * c)
            }
        }
    }

    /// Intersection number of two distinct ends; `None` stands for `R`.
    pub fn intersection_number(&self, a: Option<&TreePoint>, b: Option<&TreePoint>) -> Result<BigInt> {
        match (a, b) {
            (None, None) => Err(Error::InvalidInput("R meets itself".into())),
            (None, Some(e)) | (Some(e), None) => Ok(self.index(e)),
            (Some(a), Some(b)) => {
                let c = self.contact(&self.meet(a, b))?;
                to_integer(rat_int(self.index(a) * self.index(b)) * c)
            }
        }
    }

    /// Label-based wrapper over [`FanTree::intersection_number`].
    pub fn intersection_of_labels(&self, a: &str, b: &str) -> Result<BigInt> {
        let pt = |l: &str| -> Result<Option<TreePoint>> {
            if l == ROOT_LABEL {
                return Ok(None);
            }
            self.point_of(l).map(Some).ok_or_else(|| Error::UnknownElement(l.to_string()))
        };
        self.intersection_number(pt(a)?.as_ref(), pt(b)?.as_ref())
    }

    pub fn decorations(&self) -> Result<Vec<Decoration>> {
        self.marked_points()
            .into_iter()
            .map(|(p, m)| {
                let chain = self.chain(&p);
                let delta: Vec<String> = chain[..chain.len() - 1]
                    .iter()
                    .map(|(n, s)| self.marked_at(&TreePoint::new(*n, s.clone())).unwrap().label.clone())
                    .collect();
                let mut delta_plus = delta.clone();
                if self.is_ramification(&p) {
                    delta_plus.push(m.label.clone());
                }
                Ok(Decoration {
                    label: m.label.clone(),
                    node: p.node,
                    slope: m.slope.clone(),
                    delta,
                    delta_plus,
                    index: self.index(&p),
                    index_plus: self.index_plus(&p),
                    exponent: self.exponent(&p)?,
                    contact: self.contact(&p)?,
                    lambda: self.log_discrepancy_propagated(&p)?,
                })
            })
            .collect()
    }
}

fn to_integer(r: Rat) -> Result<BigInt> {
    if r.denom().is_one() {
        Ok(r.to_integer())
    } else {
        Err(Error::Invariant(format!("expected an integer, got {r}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoration {
    pub label: String,
    pub node: usize,
    pub slope: Rat,
    pub delta: Vec<String>,
    pub delta_plus: Vec<String>,
    pub index: BigInt,
    pub index_plus: BigInt,
    pub exponent: Rat,
    pub contact: Rat,
    pub lambda: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchRow {
    pub name: String,
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuptureRow {
    pub name: String,
    pub lambda: BigInt,
    /// Values on the elements, aligned with [`ValuationTable::elements`].
    pub values: Vec<BigInt>,
}

/// Log-discrepancies and values of the rupture divisors on the completion branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationTable {
    pub elements: Vec<String>,
    pub branches: Vec<BranchRow>,
    pub rupture: Vec<RuptureRow>,
}

impl ValuationTable {
    pub fn new(elements: Vec<String>, branches: Vec<BranchRow>, rupture: Vec<RuptureRow>) -> Result<Self> {
        let t = ValuationTable { elements, branches, rupture };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.elements {
            if !seen.insert(e) {
                return bad(format!("duplicate element {e}"));
            }
        }
        for b in &self.branches {
            if !self.elements.contains(&b.name) {
                return bad(format!("branch {} is not an element", b.name));
            }
            if b.mult == 0 {
                return bad(format!("branch {} has multiplicity 0", b.name));
            }
        }
        if self.branches.is_empty() {
            return bad("no branches".into());
        }
        for r in &self.rupture {
            if r.values.len() != self.elements.len() {
                return bad(format!("row {} has {} values for {} elements", r.name, r.values.len(), self.elements.len()));
            }
            if r.values.iter().any(|v| v <= &BigInt::zero()) || r.lambda <= BigInt::zero() {
                return bad(format!("row {} has a nonpositive entry", r.name));
            }
        }
        Ok(())
    }

    pub fn element_index(&self, name: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// Element index of each branch, in branch order.
    pub fn branch_indices(&self) -> Vec<usize> {
        self.branches.iter().map(|b| self.element_index(&b.name).unwrap()).collect()
    }

    pub fn is_branch(&self, k: usize) -> bool {
        self.branches.iter().any(|b| b.name == self.elements[k])
    }

    /// `ν_D(C) = Σ a_j ν_D(C_j)`.
    pub fn curve_value(&self, row: &RuptureRow) -> BigInt {
        self.branches
            .iter()
            .zip(self.branch_indices())
            .map(|(b, k)| &row.values[k] * BigInt::from(b.mult))
            .sum()
    }

    pub fn is_reduced(&self) -> bool {
        self.branches.iter().all(|b| b.mult == 1)
    }

    pub fn row(&self, name: &str) -> Option<&RuptureRow> {
        self.rupture.iter().find(|r| r.name == name)
    }

    pub fn value(&self, row: &str, element: &str) -> Option<BigInt> {
        let k = self.element_index(element).ok()?;
        self.row(row).map(|r| r.values[k].clone())
    }
}

/// Default display names of the ends: `x`, `y`, then `z`, `w`, `u`, `v`, `s`, `t`.
pub fn default_element_names(tree: &FanTree, first_l_is_y: bool) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert(ROOT_LABEL.to_string(), "x".to_string());
    let pool = ["z", "w", "u", "v", "s", "t"];
    let mut k = 0;
    for n in tree.l_nodes() {
        let name = if n.id == 1 {
            if first_l_is_y { "y".to_string() } else { "L1".to_string() }
        } else {
            let s = pool.get(k).map(|s| s.to_string()).unwrap_or_else(|| n.end_label.clone());
            k += 1;
            s
        };
        m.insert(n.end_label.clone(), name);
    }
    m
}

/// Rows for every ramification point, columns `R`, the `L_i`, then the branches.
pub fn build_valuation_table(tree: &FanTree, names: &BTreeMap<String, String>) -> Result<ValuationTable> {
    let disp = |l: &str| names.get(l).cloned().unwrap_or_else(|| l.to_string());
    let mut elements = vec![disp(ROOT_LABEL)];
    let mut columns: Vec<Vec<Option<TreePoint>>> = vec![vec![None]];
    for n in tree.l_nodes() {
        elements.push(disp(&n.end_label));
        columns.push(vec![Some(TreePoint::new(n.id, n.end_slope.clone()))]);
    }
    let mut branches = Vec::new();
    for (j, (name, mult)) in tree.branches.iter().enumerate() {
        elements.push(name.clone());
        columns.push(tree.branch_ends(j).into_iter().map(Some).collect());
        branches.push(BranchRow { name: name.clone(), mult: *mult });
    }
    let mut rupture = Vec::new();
    for (p, m) in tree.marked_points() {
        if !tree.is_ramification(&p) {
            continue;
        }
        let values = columns
            .iter()
            .map(|ends| ends.iter().map(|e| tree.valuation(&p, e.as_ref())).sum::<Result<BigInt>>())
            .collect::<Result<Vec<_>>>()?;
        rupture.push(RuptureRow { name: m.label.clone(), lambda: tree.log_discrepancy_propagated(&p)?, values });
    }
    ValuationTable::new(elements, branches, rupture)
}
