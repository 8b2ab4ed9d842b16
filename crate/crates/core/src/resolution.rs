//! Toroidal resolution by iterated regularized Newton modifications.
//!
//! Each node carries a cross `(R_i, L_i)` with local coordinates `(X, Y)`,
//! `R_i = {X = 0}` and `L_i = {Y = 0}`. The Newton fan of the strict part of
//! the curve is regularized, every edge normal `w` gives an exceptional
//! divisor `D_w`, and the points where the strict transform meets `D_w` become
//! child nodes. The ledger keeps the chart and recentering of every node so
//! any test function can be pushed to any node later.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{regularize_fan, slope, Chart, LatticeVec};
use crate::newton::{first_violation, minkowski, newton_fan, support_eval, NewtonPolygon};
use crate::poly::{exact_div_count, resultant_y, BiPoly};
use crate::rat::{rat_int, Rat, Slope};
use crate::tree::{
    build_valuation_table, default_element_names, EndKind, FanTree, MarkedPoint, TreeNode, TreePoint,
    ValuationTable, ROOT_LABEL,
};
use crate::upoly::{rational_roots, UPoly};

pub const DEFAULT_DEPTH_GUARD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub poly: BiPoly,
    pub mult: u64,
}

/// `C = Σ a_j C_j`, each factor assumed irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub factors: Vec<Factor>,
}

impl Curve {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("curve has no factors".into()));
        }
        for (k, f) in factors.iter().enumerate() {
            if f.poly.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            if f.mult == 0 {
                return Err(Error::InvalidInput(format!("factor {} has multiplicity 0", f.name)));
            }
            if f.poly.is_constant() || !f.poly.constant_term().is_zero() {
                return Err(Error::InvalidInput(format!("factor {} does not pass through the origin", f.name)));
            }
            if f.poly.restrict_x0().is_zero() {
                return Err(Error::RIsComponent);
            }
            if factors[..k].iter().any(|g| g.name == f.name) {
                return Err(Error::InvalidInput(format!("duplicate factor name {}", f.name)));
            }
        }
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                resultant_y(&factors[i].poly, &factors[j].poly)?;
            }
        }
        Ok(Curve { factors })
    }

    /// Factors named `C1, C2, …`.
    pub fn from_polys(polys: Vec<(BiPoly, u64)>) -> Result<Self> {
        Curve::new(
            polys
                .into_iter()
                .enumerate()
                .map(|(k, (poly, mult))| Factor { name: format!("C{}", k + 1), poly, mult })
                .collect(),
        )
    }

    /// `f_C = ∏ f_j^{a_j}`.
    pub fn equation(&self) -> BiPoly {
        self.factors.iter().fold(BiPoly::one(), |acc, f| acc.mul(&f.poly.pow(f.mult)))
    }

    pub fn is_reduced(&self) -> bool {
        self.factors.iter().all(|f| f.mult == 1)
    }
}

/// The first cross: `L = α·y + φ(x)` used as the new `y` coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub alpha: Rat,
    pub phi: UPoly,
}

impl Frame {
    pub fn standard() -> Self {
        Frame { alpha: Rat::one(), phi: UPoly::zero() }
    }

    pub fn from_first_l(l: &BiPoly) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("first L must have the form a·y + φ(x) through the origin, got {l}"));
        let mut alpha = Rat::zero();
        let mut phi = BiPoly::zero();
        for (&(i, j), c) in l.terms() {
            match (i, j) {
                (0, 1) => alpha = c.clone(),
                (_, 0) => phi.add_term((i, 0), c.clone()),
                _ => return Err(bad()),
            }
        }
        if alpha.is_zero() || !phi.constant_term().is_zero() {
            return Err(bad());
        }
        Ok(Frame { alpha, phi: phi.restrict_y0() })
    }

    pub fn is_standard(&self) -> bool {
        self.alpha.is_one() && self.phi.is_zero()
    }

    /// The polynomial of `L_1` in the original coordinates.
    pub fn l_poly(&self) -> BiPoly {
        BiPoly::y().scale(&self.alpha).add(&BiPoly::from_upoly_x(&self.phi))
    }

    /// Rewrites `h` in the coordinates `(x, L)`.
    pub fn apply(&self, h: &BiPoly) -> BiPoly {
        if self.is_standard() {
            return h.clone();
        }
        let inv = Rat::one() / &self.alpha;
        let y = BiPoly::y().sub(&BiPoly::from_upoly_x(&self.phi)).scale(&inv);
        h.compose(&BiPoly::x(), &y)
    }

    /// Maps a parametrization in `(x, L)` coordinates back to `(x, y)`.
    pub fn unapply(&self, x: &UPoly, l: &UPoly) -> (UPoly, UPoly) {
        let y = l.sub(&self.phi.compose(x)).scale(&(Rat::one() / &self.alpha));
        (x.clone(), y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentLink {
    pub node: usize,
    pub ray: LatticeVec,
    pub chart: Chart,
    pub center: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    /// A node where a Newton modification was performed.
    Modified,
    /// A cross formed by `R_i` and a smooth transversal branch.
    Terminal,
    /// One of several conjugate non-rational points on a divisor.
    Conjugate,
}

/// Ledger entry of one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerNode {
    pub id: usize,
    pub parent: Option<ParentLink>,
    pub kind: NodeKind,
    pub depth: usize,
    /// Total transforms of all factors; `None` at conjugate nodes.
    pub totals: Option<Vec<BiPoly>>,
    pub passing: Vec<usize>,
    /// Newton fan rays that are compact-edge normals, with the chart used for each.
    pub divisors: Vec<(LatticeVec, Chart)>,
    /// Product of the restrictions of the strict transforms to each divisor.
    pub restrictions: Vec<UPoly>,
    pub lambda_r: BigInt,
}

#[derive(Debug, Clone)]
pub struct Resolution {
    pub curve: Curve,
    pub frame: Frame,
    pub ledger: Vec<LedgerNode>,
    pub tree: FanTree,
}

#[derive(Debug, Clone, Default)]
pub struct ResolveOptions {
    pub first_l: Option<BiPoly>,
    pub depth_guard: Option<usize>,
}

fn strip_x(g: &BiPoly) -> BiPoly {
    let a = g.terms().map(|(e, _)| e.0).min().unwrap_or(0);
    BiPoly::from_terms(g.terms().map(|(e, c)| ((e.0 - a, e.1), c.clone())))
}

struct Pending {
    id: usize,
    parent: Option<ParentLink>,
    depth: usize,
    kind: NodeKind,
    totals: Option<Vec<BiPoly>>,
    passing: Vec<usize>,
}

pub fn resolve(curve: &Curve, first_l: Option<&BiPoly>) -> Result<Resolution> {
    resolve_with(curve, &ResolveOptions { first_l: first_l.cloned(), depth_guard: None })
}

pub fn resolve_with(curve: &Curve, opts: &ResolveOptions) -> Result<Resolution> {
    let guard = opts.depth_guard.unwrap_or(DEFAULT_DEPTH_GUARD);
    let frame = match &opts.first_l {
        Some(l) => Frame::from_first_l(l)?,
        None => Frame::standard(),
    };
    let totals: Vec<BiPoly> = curve.factors.iter().map(|f| frame.apply(&f.poly)).collect();
    let mut ledger: Vec<LedgerNode> = Vec::new();
    let mut tree_nodes: Vec<TreeNode> = Vec::new();
    let mut queue = VecDeque::new();
    queue.push_back(Pending {
        id: 1,
        parent: None,
        depth: 0,
        kind: NodeKind::Modified,
        totals: Some(totals),
        passing: (0..curve.factors.len()).collect(),
    });
    let mut next_id = 2;

    while let Some(p) = queue.pop_front() {
        if p.depth > guard {
            return Err(Error::DepthExceeded(guard));
        }
        let lambda_r = match &p.parent {
            None => BigInt::one(),
            Some(l) => &l.ray.a * &ledger[l.node - 1].lambda_r + &l.ray.b,
        };
        let attach = p.parent.as_ref().map(|l| slope(&l.ray).unwrap().finite().unwrap().clone());
        let r_label = match &p.parent {
            None => ROOT_LABEL.to_string(),
            Some(l) => {
                let par = &tree_nodes[l.node - 1];
                let s = attach.clone().unwrap();
                par.marked.iter().find(|m| m.slope == s).unwrap().label.clone()
            }
        };
        let mut tnode = TreeNode {
            id: p.id,
            parent: p.parent.as_ref().map(|l| l.node),
            attach,
            r_label,
            marked: Vec::new(),
            end_slope: Slope::Finite(Rat::one()),
            end_label: String::new(),
            end_kind: EndKind::L,
            terminal: true,
        };
        let mut entry = LedgerNode {
            id: p.id,
            parent: p.parent.clone(),
            kind: p.kind.clone(),
            depth: p.depth,
            totals: p.totals.clone(),
            passing: p.passing.clone(),
            divisors: Vec::new(),
            restrictions: Vec::new(),
            lambda_r,
        };

        if p.kind == NodeKind::Conjugate {
            tnode.end_kind = EndKind::Branch(p.passing[0]);
            ledger.push(entry);
            tree_nodes.push(tnode);
            continue;
        }
        let totals = p.totals.as_ref().unwrap();
        let cores: Vec<(usize, BiPoly)> = p.passing.iter().map(|&j| (j, strip_x(&totals[j]))).collect();
        if cores.len() == 1 && cores[0].1.restrict_x0().ord0() == Some(1) {
            entry.kind = NodeKind::Terminal;
            tnode.end_kind = EndKind::Branch(cores[0].0);
            ledger.push(entry);
            tree_nodes.push(tnode);
            continue;
        }
        tnode.terminal = false;
        tnode.end_slope = Slope::Infinite;
        if let Some((j, _)) = cores.iter().find(|(_, c)| c.coeffs_in_y()[0].is_zero()) {
            tnode.end_kind = EndKind::Branch(*j);
        }

        let polygon = cores
            .iter()
            .map(|(_, c)| c.newton_polygon())
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .reduce(|a, b| minkowski(&a, &b))
            .unwrap();
        let fan = newton_fan(&polygon);
        if fan.rays.len() < 3 {
            return Err(Error::Invariant(format!("node {} has no compact Newton edge", p.id)));
        }
        let reg = regularize_fan(&fan);
        for w in &fan.rays[1..fan.rays.len() - 1] {
            let pos = reg.rays.iter().position(|r| r == w).unwrap();
            let chart = Chart { u: w.clone(), v: reg.rays[pos + 1].clone() };
            let pulled: Vec<BiPoly> =
                totals.iter().map(|t| t.monomial_pullback(&chart)).collect::<Result<_>>()?;
            let mut by_root: BTreeMap<Rat, Vec<usize>> = BTreeMap::new();
            let mut cofactors: Vec<(usize, UPoly)> = Vec::new();
            let mut restriction = UPoly::one();
            for (j, core) in &cores {
                let (_, _, strict) = core.monomial_pullback(&chart)?.exceptional_split()?;
                let r = strict.restrict_x0();
                if r.degree().unwrap_or(0) == 0 {
                    continue;
                }
                if r.ord0() != Some(0) {
                    return Err(Error::Invariant(format!("strict transform meets a corner at node {}", p.id)));
                }
                restriction = restriction.mul(&r);
                let (roots, cof) = rational_roots(&r);
                for (c, _) in roots {
                    by_root.entry(c).or_default().push(*j);
                }
                if cof.degree().unwrap_or(0) > 0 {
                    cofactors.push((*j, cof));
                }
            }
            check_conjugates(p.id, &cofactors)?;
            let mut children = Vec::new();
            for (c, js) in &by_root {
                let id = next_id;
                next_id += 1;
                children.push(id);
                queue.push_back(Pending {
                    id,
                    parent: Some(ParentLink { node: p.id, ray: w.clone(), chart: chart.clone(), center: c.clone() }),
                    depth: p.depth + 1,
                    kind: NodeKind::Modified,
                    totals: Some(pulled.iter().map(|g| g.shift_y(c)).collect()),
                    passing: js.clone(),
                });
            }
            for (j, cof) in &cofactors {
                for _ in 0..cof.degree().unwrap() {
                    let id = next_id;
                    next_id += 1;
                    children.push(id);
                    queue.push_back(Pending {
                        id,
                        parent: Some(ParentLink { node: p.id, ray: w.clone(), chart: chart.clone(), center: Rat::zero() }),
                        depth: p.depth + 1,
                        kind: NodeKind::Conjugate,
                        totals: None,
                        passing: vec![*j],
                    });
                }
            }
            let label = format!("R{}", children[0]);
            tnode.marked.push(MarkedPoint {
                slope: slope(w)?.finite().unwrap().clone(),
                ray: w.clone(),
                label,
                children,
            });
            entry.divisors.push((w.clone(), chart));
            entry.restrictions.push(restriction);
        }
        ledger.push(entry);
        tree_nodes.push(tnode);
    }

    label_ends(&mut tree_nodes, curve);
    let tree = FanTree {
        nodes: tree_nodes,
        branches: curve.factors.iter().map(|f| (f.name.clone(), f.mult)).collect(),
    };
    Ok(Resolution { curve: curve.clone(), frame, ledger, tree })
}

fn check_conjugates(node: usize, cofactors: &[(usize, UPoly)]) -> Result<()> {
    for (k, (j, c)) in cofactors.iter().enumerate() {
        if !c.is_square_free() {
            return Err(Error::NonRationalCenter {
                node,
                detail: format!("factor {} meets the divisor at a non-rational singular or tangent point", j + 1),
            });
        }
        for (_, d) in &cofactors[..k] {
            if c.gcd(d).degree().unwrap_or(0) > 0 {
                return Err(Error::NonRationalCenter {
                    node,
                    detail: "two factors meet at a non-rational point".into(),
                });
            }
        }
    }
    Ok(())
}

fn label_ends(nodes: &mut [TreeNode], curve: &Curve) {
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for n in nodes.iter() {
        if let EndKind::Branch(j) = n.end_kind {
            *count.entry(j).or_default() += 1;
        }
    }
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for n in nodes.iter_mut() {
        n.end_label = match n.end_kind {
            EndKind::L => format!("L{}", n.id),
            EndKind::Branch(j) => {
                let k = seen.entry(j).or_default();
                *k += 1;
                if count[&j] > 1 {
                    format!("{}#{}", curve.factors[j].name, k)
                } else {
                    curve.factors[j].name.clone()
                }
            }
        };
    }
}

/// Ordering of the trunk points of a node: slope 0, marked points, end.
pub fn trunk_points(tree: &FanTree, id: usize) -> Vec<(Slope, String)> {
    let n = tree.node(id);
    let mut v = vec![(Slope::zero(), n.r_label.clone())];
    v.extend(n.marked.iter().map(|m| (Slope::Finite(m.slope.clone()), m.label.clone())));
    v.push((n.end_slope.clone(), n.end_label.clone()));
    v
}

impl Resolution {
    pub fn node(&self, id: usize) -> &LedgerNode {
        &self.ledger[id - 1]
    }

    fn path(&self, id: usize) -> Vec<&ParentLink> {
        let mut links = Vec::new();
        let mut cur = id;
        while let Some(l) = &self.node(cur).parent {
            links.push(l);
            cur = l.node;
        }
        links.reverse();
        links
    }

    /// Total transform of `h` in the local coordinates of node `id`.
    pub fn transform_at(&self, id: usize, h: &BiPoly) -> Result<Option<BiPoly>> {
        if h.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.node(id).kind == NodeKind::Conjugate {
            return Ok(None);
        }
        let mut g = self.frame.apply(h);
        for l in self.path(id) {
            g = g.monomial_pullback(&l.chart)?.shift_y(&l.center);
        }
        Ok(Some(g))
    }

    /// Newton polygon of the total transform of `h` at node `id`.
    pub fn newton_data_at(&self, id: usize, h: &BiPoly) -> Result<NewtonPolygon> {
        match self.transform_at(id, h)? {
            Some(g) => g.newton_polygon(),
            None => Err(Error::InvalidInput(format!("node {id} has no rational coordinates"))),
        }
    }

    /// Newton polygon of the total transform of `f_C` at node `id`.
    pub fn curve_polygon_at(&self, id: usize) -> Result<NewtonPolygon> {
        let totals = self.node(id).totals.as_ref().ok_or_else(|| Error::InvalidInput(format!("node {id} is conjugate")))?;
        let mut acc = NewtonPolygon::point(0, 0);
        for (t, f) in totals.iter().zip(&self.curve.factors) {
            acc = minkowski(&acc, &t.newton_polygon()?.scale(&BigInt::from(f.mult)));
        }
        Ok(acc)
    }

    /// Values of `h` on every marked divisor and every end of the tree.
    pub fn valuations_of(&self, h: &BiPoly) -> Result<BTreeMap<String, BigInt>> {
        let mut out = BTreeMap::new();
        for (n, tn) in self.ledger.iter().zip(&self.tree.nodes) {
            if n.kind != NodeKind::Modified {
                continue;
            }
            let poly = self.newton_data_at(n.id, h)?;
            if n.id == 1 {
                out.insert(ROOT_LABEL.to_string(), support_eval(&poly, &LatticeVec::e_r())?);
            }
            for ((w, _), m) in n.divisors.iter().zip(&tn.marked) {
                out.insert(m.label.clone(), support_eval(&poly, w)?);
            }
            if tn.end_kind == EndKind::L {
                out.insert(tn.end_label.clone(), support_eval(&poly, &LatticeVec::e_l())?);
            }
        }
        for tn in &self.tree.nodes {
            if let EndKind::Branch(j) = tn.end_kind {
                let k = exact_div_count(h, &self.curve.factors[j].poly)?;
                out.insert(tn.end_label.clone(), k.into());
            }
        }
        Ok(out)
    }

    pub fn element_names(&self) -> BTreeMap<String, String> {
        default_element_names(&self.tree, self.frame.is_standard())
    }

    pub fn valuation_table(&self, names: &BTreeMap<String, String>) -> Result<ValuationTable> {
        build_valuation_table(&self.tree, names)
    }

    /// Polygon-form membership test; on failure returns the violated label.
    pub fn membership(&self, h: &BiPoly, xi: &Rat) -> Result<Membership> {
        Ok(self.probe(h)?.test(xi))
    }

    /// Precomputes everything the membership test needs about `h`.
    pub fn probe(&self, h: &BiPoly) -> Result<Probe> {
        if h.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut nodes = Vec::new();
        for (n, tn) in self.ledger.iter().zip(&self.tree.nodes) {
            if n.kind != NodeKind::Modified {
                continue;
            }
            let nc = self.curve_polygon_at(n.id)?;
            let lam = (n.lambda_r.clone(), BigInt::one());
            let a = self.newton_data_at(n.id, h)?.translate(&lam);
            nodes.push((nc, a, tn.r_label.clone(), tn.end_label.clone(), tn.marked.clone()));
        }
        let branches = self
            .curve
            .factors
            .iter()
            .map(|f| Ok((f.name.clone(), exact_div_count(h, &f.poly)?, f.mult)))
            .collect::<Result<_>>()?;
        Ok(Probe { nodes, branches })
    }

    fn push_down(&self, id: usize, mut x: UPoly, mut y: UPoly) -> (UPoly, UPoly) {
        let mut cur = id;
        while let Some(l) = &self.node(cur).parent {
            let yy = y.add(&UPoly::constant(l.center.clone()));
            let mono = |a: &BigInt, b: &BigInt| x.pow(a.to_usize().unwrap()).mul(&yy.pow(b.to_usize().unwrap()));
            let nx = mono(&l.chart.u.a, &l.chart.v.a);
            let ny = mono(&l.chart.u.b, &l.chart.v.b);
            x = nx;
            y = ny;
            cur = l.node;
        }
        self.frame.unapply(&x, &y)
    }

    /// A polynomial curvetta representing an end or a marked divisor.
    pub fn lift_curvetta(&self, label: &str) -> Result<BiPoly> {
        let fail = |m: &str| Error::LiftFailed(format!("{label}: {m}"));
        if label == ROOT_LABEL {
            return Ok(BiPoly::x());
        }
        if let Some(f) = self.curve.factors.iter().find(|f| f.name == label) {
            return Ok(f.poly.clone());
        }
        let t = UPoly::monomial(Rat::one(), 1);
        let (target, param) = if let Some(n) = self.tree.nodes.iter().find(|n| n.end_label == label) {
            match n.end_kind {
                EndKind::L if n.id == 1 => return Ok(self.frame.l_poly()),
                EndKind::L => (Target::End(n.id), self.push_down(n.id, t, UPoly::zero())),
                EndKind::Branch(j) => return Ok(self.curve.factors[j].poly.clone()),
            }
        } else {
            let (p, _) = self
                .tree
                .marked_points()
                .into_iter()
                .find(|(_, m)| m.label == label)
                .ok_or_else(|| Error::UnknownElement(label.to_string()))?;
            let ln = self.node(p.node);
            let k = self.tree.node(p.node).marked.iter().position(|m| m.label == label).unwrap();
            let (_, chart) = &ln.divisors[k];
            let restr = &ln.restrictions[k];
            let c = (1..200i64)
                .flat_map(|k| [k, -k])
                .map(rat_int)
                .find(|c| !restr.eval(c).is_zero())
                .ok_or_else(|| fail("no free point on the divisor"))?;
            let cu = |e: &BigInt| UPoly::monomial(num_traits::pow(c.clone(), e.to_usize().unwrap()), 0);
            let x = t.pow(chart.u.a.to_usize().unwrap()).mul(&cu(&chart.v.a));
            let y = t.pow(chart.u.b.to_usize().unwrap()).mul(&cu(&chart.v.b));
            let sl = p.slope.finite().unwrap().clone();
            (Target::Divisor(p.node, sl), self.push_down(p.node, x, y))
        };
        let (x, y) = param;
        let f = implicitize(&x, &y).ok_or_else(|| fail("parametrization is degenerate"))?;
        if f.restrict_x0().ord0() != x.ord0() {
            return Err(fail("the implicit equation has extra branches through the origin"));
        }
        self.verify_lift(label, &f, &target)?;
        Ok(f)
    }

    fn verify_lift(&self, label: &str, f: &BiPoly, target: &Target) -> Result<()> {
        let fail = |m: &str| Error::LiftFailed(format!("{label}: {m}"));
        let mut factors = self.curve.factors.clone();
        let name = format!("{label}'");
        factors.push(Factor { name, poly: f.clone(), mult: 1 });
        let joint = Curve::new(factors).map_err(|_| fail("lift shares a component with the curve"))?;
        let first_l = (!self.frame.is_standard()).then(|| self.frame.l_poly());
        let res = resolve(&joint, first_l.as_ref()).map_err(|e| fail(&e.to_string()))?;
        let j = joint.factors.len() - 1;
        let ends = res.tree.branch_ends(j);
        if ends.len() != 1 {
            return Err(fail("lift does not have a single end"));
        }
        let e = &ends[0];
        let chain = res.tree.attach_chain(e.node);
        let ok = match target {
            Target::End(id) => e.slope == Slope::Infinite && chain == self.tree.attach_chain(*id),
            Target::Divisor(id, s) => {
                let mut want = self.tree.attach_chain(*id);
                want.push(s.clone());
                res.tree.node(e.node).terminal && chain == want
            }
        };
        if !ok {
            return Err(fail("lift ends at a different point of the tree"));
        }
        if let Target::End(id) = target {
            let vals = self.valuations_of(f)?;
            let end = TreePoint::new(*id, Slope::Infinite);
            for (p, m) in self.tree.marked_points() {
                if vals[&m.label] != self.tree.valuation(&p, Some(&end))? {
                    return Err(fail("valuations of the lift disagree with the tree"));
                }
            }
        }
        Ok(())
    }
}

enum Target {
    End(usize),
    Divisor(usize, Rat),
}

type ProbeNode = (NewtonPolygon, NewtonPolygon, String, String, Vec<MarkedPoint>);

/// Newton data of a fixed test function at every node.
#[derive(Debug, Clone)]
pub struct Probe {
    nodes: Vec<ProbeNode>,
    branches: Vec<(String, u64, u64)>,
}

impl Probe {
    pub fn test(&self, xi: &Rat) -> Membership {
        for (nc, a, r_label, end_label, marked) in &self.nodes {
            if let Some(v) = first_violation(nc, xi, a) {
                let label = if v == LatticeVec::e_r() {
                    r_label.clone()
                } else if v == LatticeVec::e_l() {
                    end_label.clone()
                } else {
                    marked.iter().find(|m| m.ray == v).unwrap().label.clone()
                };
                return Membership { member: false, witness: Some(label) };
            }
        }
        for (name, k, a) in &self.branches {
            if rat_int(k + 1) <= xi * rat_int(*a) {
                return Membership { member: false, witness: Some(name.clone()) };
            }
        }
        Membership { member: true, witness: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<String>,
}

/// Implicit equation of `t ↦ (x(t), y(t))` as the characteristic polynomial
/// of multiplication by `y(t)` on `ℚ[x][t]/(x(t) − x)`.
pub fn implicitize(xt: &UPoly, yt: &UPoly) -> Option<BiPoly> {
    let d = xt.degree()?;
    if d == 0 {
        return None;
    }
    let lead = xt.lead().unwrap().clone();
    // t^d = (x − Σ_{k<d} x_k t^k) / x_d, coefficients in ℚ[x]
    let reduce = |mut v: Vec<UPoly>| -> Vec<UPoly> {
        while v.len() > d {
            let top = v.pop().unwrap();
            let k = v.len() - d;
            let scaled = top.scale(&(Rat::one() / &lead));
            v[k] = v[k].add(&scaled.mul(&UPoly::monomial(Rat::one(), 1)));
            for i in 0..d {
                let c = xt.coeff(i);
                if !c.is_zero() {
                    v[k + i] = v[k + i].sub(&scaled.scale(&c));
                }
            }
        }
        v.resize(d, UPoly::zero());
        v
    };
    let cols: Vec<Vec<UPoly>> = (0..d)
        .map(|k| {
            let mut v = vec![UPoly::zero(); k + yt.0.len()];
            for (i, c) in yt.0.iter().enumerate() {
                v[k + i] = UPoly::constant(c.clone());
            }
            reduce(v)
        })
        .collect();
    // m[r][c] = coefficient of t^r in y·t^c
    let m: Vec<Vec<UPoly>> = (0..d).map(|r| (0..d).map(|c| cols[c][r].clone()).collect()).collect();
    let matmul = |a: &Vec<Vec<UPoly>>, b: &Vec<Vec<UPoly>>| -> Vec<Vec<UPoly>> {
        (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| (0..d).fold(UPoly::zero(), |acc, k| acc.add(&a[r][k].mul(&b[k][c]))))
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![UPoly::zero(); d + 1];
    coeffs[d] = UPoly::one();
    let mut mk: Vec<Vec<UPoly>> = vec![vec![UPoly::zero(); d]; d];
    for k in 1..=d {
        let mut next = matmul(&m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].add(&coeffs[d - k + 1]);
        }
        mk = next;
        let am = matmul(&m, &mk);
        let tr = (0..d).fold(UPoly::zero(), |acc, i| acc.add(&am[i][i]));
        coeffs[d - k] = tr.scale(&-Rat::new(BigInt::one(), BigInt::from(k)));
    }
    let mut f = BiPoly::zero();
    for (j, c) in coeffs.iter().enumerate() {
        for (i, a) in c.0.iter().enumerate() {
            f.add_term((i as u64, j as u64), a.clone());
        }
    }
    Some(f.normalized())
}

/// Orders `(i, j)` of the strict transform's defining terms; a helper for displays.
pub fn describe_node(res: &Resolution, id: usize) -> String {
    let n = res.node(id);
    let kind = match n.kind {
        NodeKind::Modified => "modified",
        NodeKind::Terminal => "terminal",
        NodeKind::Conjugate => "conjugate",
    };
    let center = n
        .parent
        .as_ref()
        .map(|l| format!(" on D{} at Y = {}", l.ray, crate::rat::fmt_rat(&l.center)))
        .unwrap_or_default();
    let sign = if n.lambda_r.is_positive() { "" } else { "-" };
    format!("node {id} ({kind}){center}, λ_R = {sign}{}", n.lambda_r.abs())
}
