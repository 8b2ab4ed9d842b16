//! Independent checks: Howald's criterion for Newton non-degenerate curves,
//! a resolver by point blowups, and intersection numbers from resultants.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::LatticeVec;
use crate::newton::{first_violation, newton_fan, support_eval};
use crate::poly::{exact_div_count, resultant_y, BiPoly};
use crate::rat::{rat_int, Rat};
use crate::resolution::Curve;
use crate::upoly::{rational_roots, UPoly};

/// Face polynomials of every compact edge, as polynomials in one variable.
pub fn face_polynomials(f: &BiPoly) -> Result<Vec<UPoly>> {
    let n = f.newton_polygon()?;
    let mut out = Vec::new();
    for (p, q) in n.edges() {
        let len = crate::newton::lattice_length(p, q);
        let di = (&q.0 - &p.0) / &len;
        let dj = (&q.1 - &p.1) / &len;
        let steps: usize = num_traits::ToPrimitive::to_usize(&len).unwrap();
        let coeffs = (0..=steps)
            .map(|k| {
                let i = &p.0 + &di * BigInt::from(k);
                let j = &p.1 + &dj * BigInt::from(k);
                f.coeff(num_traits::ToPrimitive::to_u64(&i).unwrap(), num_traits::ToPrimitive::to_u64(&j).unwrap())
            })
            .collect();
        out.push(UPoly::new(coeffs));
    }
    Ok(out)
}

pub fn is_newton_nondegenerate(f: &BiPoly) -> Result<bool> {
    Ok(face_polynomials(f)?.iter().all(|p| p.is_square_free()))
}

/// `N(h) + (1,1) ⊂ Int(ξ·N(f))`.
pub fn howald_membership(f: &BiPoly, h: &BiPoly, xi: &Rat) -> Result<bool> {
    if h.is_zero() || f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !is_newton_nondegenerate(f)? {
        return Err(Error::DegenerateFaces);
    }
    let n = f.newton_polygon()?;
    let a = h.newton_polygon()?.translate(&(BigInt::one(), BigInt::one()));
    Ok(first_violation(&n, xi, &a).is_none())
}

fn howald_threshold(rays: &[(LatticeVec, BigInt)], i: u64, j: u64) -> Option<Rat> {
    rays.iter()
        .map(|(v, phi)| Rat::new(v.pair(&i.into(), &j.into()), phi.clone()))
        .min()
}

/// Jumping numbers in `(0, upper)` of a Newton non-degenerate `f`, `upper ≤ 1`.
pub fn howald_jumping_numbers(f: &BiPoly, upper: &Rat) -> Result<Vec<Rat>> {
    if !is_newton_nondegenerate(f)? {
        return Err(Error::DegenerateFaces);
    }
    let n = f.newton_polygon()?;
    let rays: Vec<(LatticeVec, BigInt)> = newton_fan(&n)
        .rays
        .into_iter()
        .map(|v| {
            let phi = support_eval(&n, &v).unwrap();
            (v, phi)
        })
        .filter(|(_, phi)| !phi.is_zero())
        .collect();
    let mut out = BTreeSet::new();
    let mut prev_row: Option<Rat> = None;
    for j in 1.. {
        let first = howald_threshold(&rays, 1, j);
        match &first {
            Some(t) if t < upper && prev_row.as_ref() != Some(t) => {}
            _ => break,
        }
        prev_row = first;
        let mut prev: Option<Rat> = None;
        for i in 1.. {
            let t = howald_threshold(&rays, i, j).unwrap();
            if &t >= upper || prev.as_ref() == Some(&t) {
                break;
            }
            out.insert(t.clone());
            prev = Some(t);
        }
    }
    Ok(out.into_iter().collect())
}

/// An exceptional divisor of the blowup chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalDivisor {
    pub id: usize,
    pub lambda: BigInt,
    /// `ν_E` of each factor.
    pub nu: Vec<BigInt>,
    /// Divisors through the blown-up center.
    pub through: Vec<usize>,
    /// Center index in [`BlowupChain::centers`].
    pub center: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChartStep {
    /// `u = u', v = u'(v' + c)`.
    Affine(Rat),
    /// `u = u'v', v = v'`.
    AtInfinity,
}

/// A blown-up point: reached from the divisor of `parent` through `step`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Center {
    pub parent: Option<usize>,
    pub step: Option<ChartStep>,
    /// Divisors through the point, with `true` for the axis `{u = 0}`.
    pub divisors: Vec<(usize, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupChain {
    pub curve: Curve,
    pub centers: Vec<Center>,
    pub divisors: Vec<ExceptionalDivisor>,
    pub edges: BTreeSet<(usize, usize)>,
    /// Number of curve branches meeting each divisor after the last blowup.
    pub branch_meets: Vec<usize>,
}

fn div_u_pow(g: &BiPoly, m: u64) -> BiPoly {
    BiPoly::from_terms(g.terms().map(|(e, c)| ((e.0 - m, e.1), c.clone())))
}

fn pass_affine(g: &BiPoly, c: &Rat) -> (BiPoly, u64) {
    let m = g.order().unwrap();
    let u = BiPoly::x();
    let v = BiPoly::x().mul(&BiPoly::y().add(&BiPoly::constant(c.clone())));
    (div_u_pow(&g.compose(&u, &v), m), m)
}

fn pass_infinity(g: &BiPoly) -> (BiPoly, u64) {
    let m = g.order().unwrap();
    let u = BiPoly::x().mul(&BiPoly::y());
    let t = g.compose(&u, &BiPoly::y());
    (BiPoly::from_terms(t.terms().map(|(e, c)| ((e.0, e.1 - m), c.clone()))), m)
}

fn step_poly(g: &BiPoly, step: &ChartStep) -> BiPoly {
    match step {
        ChartStep::Affine(c) => pass_affine(g, c).0,
        ChartStep::AtInfinity => pass_infinity(g).0,
    }
}

fn through_origin(g: &BiPoly) -> bool {
    g.constant_term().is_zero()
}

struct Pending {
    parent: Option<(usize, ChartStep)>,
    divisors: Vec<(usize, bool)>,
    strict: Vec<(usize, BiPoly)>,
    depth: usize,
}

pub fn blowup_resolve(c: &Curve) -> Result<BlowupChain> {
    blowup_resolve_with(c, 4 * crate::resolution::DEFAULT_DEPTH_GUARD)
}

pub fn blowup_resolve_with(c: &Curve, guard: usize) -> Result<BlowupChain> {
    let mut chain = BlowupChain {
        curve: c.clone(),
        centers: Vec::new(),
        divisors: Vec::new(),
        edges: BTreeSet::new(),
        branch_meets: Vec::new(),
    };
    let mut queue = VecDeque::new();
    queue.push_back(Pending {
        parent: None,
        divisors: Vec::new(),
        strict: c.factors.iter().enumerate().map(|(j, f)| (j, f.poly.clone())).collect(),
        depth: 0,
    });
    while let Some(p) = queue.pop_front() {
        if p.depth > guard {
            return Err(Error::DepthExceeded(guard));
        }
        let passing: Vec<(usize, BiPoly)> = p.strict.into_iter().filter(|(_, g)| through_origin(g)).collect();
        if passing.is_empty() {
            continue;
        }
        if p.depth > 0 && passing.len() == 1 && p.divisors.len() == 1 {
            let (_, g) = &passing[0];
            let axis_restriction = if p.divisors[0].1 { g.restrict_x0() } else { g.restrict_y0() };
            if axis_restriction.ord0() == Some(1) {
                chain.branch_meets[p.divisors[0].0] += 1;
                continue;
            }
        }
        let center = chain.centers.len();
        chain.centers.push(Center {
            parent: p.parent.as_ref().map(|(q, _)| *q),
            step: p.parent.map(|(_, s)| s),
            divisors: p.divisors.clone(),
        });
        let id = chain.divisors.len();
        let through: Vec<usize> = p.divisors.iter().map(|(d, _)| *d).collect();
        let lambda = through.iter().map(|d| &chain.divisors[*d].lambda - BigInt::one()).sum::<BigInt>() + 2;
        let mut nu = vec![BigInt::zero(); c.factors.len()];
        for (j, n) in nu.iter_mut().enumerate() {
            *n = through.iter().map(|d| chain.divisors[*d].nu[j].clone()).sum();
        }
        for (j, g) in &passing {
            nu[*j] += BigInt::from(g.order().unwrap());
        }
        if through.len() == 2 {
            chain.edges.remove(&(through[0].min(through[1]), through[0].max(through[1])));
        }
        for d in &through {
            chain.edges.insert((*d.min(&id), *d.max(&id)));
        }
        chain.divisors.push(ExceptionalDivisor { id, lambda, nu, through: through.clone(), center });
        chain.branch_meets.push(0);

        let old_u = p.divisors.iter().find(|(_, u)| *u).map(|(d, _)| *d);
        let old_v = p.divisors.iter().find(|(_, u)| !*u).map(|(d, _)| *d);

        let affine: Vec<(usize, BiPoly)> = passing.iter().map(|(j, g)| (*j, pass_affine(g, &Rat::zero()).0)).collect();
        let mut by_root: BTreeMap<Rat, ()> = BTreeMap::new();
        let mut cofactors: Vec<UPoly> = Vec::new();
        for (_, g) in &affine {
            let r = g.restrict_x0();
            let (roots, cof) = rational_roots(&r);
            for (c, _) in roots {
                by_root.insert(c, ());
            }
            if cof.degree().unwrap_or(0) > 0 {
                cofactors.push(cof);
            }
        }
        for (k, cof) in cofactors.iter().enumerate() {
            let shared = cofactors[..k].iter().any(|d| cof.gcd(d).degree().unwrap_or(0) > 0);
            if !cof.is_square_free() || shared {
                return Err(Error::NonRationalCenter { node: id + 1, detail: "blowup center is not rational".into() });
            }
            chain.branch_meets[id] += cof.degree().unwrap();
        }
        for c0 in by_root.keys() {
            let mut divs = vec![(id, true)];
            if c0.is_zero() {
                if let Some(v) = old_v {
                    divs.push((v, false));
                }
            }
            queue.push_back(Pending {
                parent: Some((center, ChartStep::Affine(c0.clone()))),
                divisors: divs,
                strict: affine.iter().map(|(j, g)| (*j, g.shift_y(c0))).collect(),
                depth: p.depth + 1,
            });
        }
        let inf: Vec<(usize, BiPoly)> = passing.iter().map(|(j, g)| (*j, pass_infinity(g).0)).collect();
        if inf.iter().any(|(_, g)| through_origin(g)) {
            let mut divs = vec![(id, false)];
            if let Some(u) = old_u {
                divs.push((u, true));
            }
            queue.push_back(Pending {
                parent: Some((center, ChartStep::AtInfinity)),
                divisors: divs,
                strict: inf,
                depth: p.depth + 1,
            });
        }
    }
    Ok(chain)
}

impl BlowupChain {
    /// `ν_E(h)` for every divisor.
    pub fn values_of(&self, h: &BiPoly) -> Result<Vec<BigInt>> {
        if h.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut strict: Vec<BiPoly> = Vec::with_capacity(self.centers.len());
        let mut vals: Vec<BigInt> = Vec::with_capacity(self.divisors.len());
        for (k, c) in self.centers.iter().enumerate() {
            let g = match (&c.parent, &c.step) {
                (Some(q), Some(s)) => step_poly(&strict[*q], s),
                _ => h.clone(),
            };
            let d = &self.divisors[k];
            let v: BigInt = d.through.iter().map(|t| vals[*t].clone()).sum::<BigInt>() + BigInt::from(g.order().unwrap());
            vals.push(v);
            strict.push(g);
        }
        Ok(vals)
    }

    pub fn curve_value(&self, d: &ExceptionalDivisor) -> BigInt {
        d.nu.iter().zip(&self.curve.factors).map(|(n, f)| n * BigInt::from(f.mult)).sum()
    }

    pub fn valency(&self, id: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == id || *b == id).count() + self.branch_meets[id]
    }

    /// `(λ_E, ν_E(C))` of the divisors of valency at least three.
    pub fn rupture_data(&self) -> Vec<(BigInt, BigInt)> {
        self.divisors
            .iter()
            .filter(|d| self.valency(d.id) >= 3)
            .map(|d| (d.lambda.clone(), self.curve_value(d)))
            .collect()
    }
}

/// Values of a fixed test function on every divisor and branch.
#[derive(Debug, Clone)]
pub struct BlowupProbe {
    rows: Vec<(BigInt, BigInt)>,
    branches: Vec<(u64, u64)>,
}

impl BlowupProbe {
    pub fn test(&self, xi: &Rat) -> bool {
        self.rows.iter().all(|(lhs, nc)| Rat::from_integer(lhs.clone()) > xi * Rat::from_integer(nc.clone()))
            && self.branches.iter().all(|(k, a)| rat_int(k + 1) > xi * rat_int(*a))
    }
}

impl BlowupChain {
    pub fn probe(&self, h: &BiPoly) -> Result<BlowupProbe> {
        let vals = self.values_of(h)?;
        let rows = self.divisors.iter().zip(vals).map(|(d, v)| (v + &d.lambda, self.curve_value(d))).collect();
        let branches = self
            .curve
            .factors
            .iter()
            .map(|f| Ok((exact_div_count(h, &f.poly)?, f.mult)))
            .collect::<Result<_>>()?;
        Ok(BlowupProbe { rows, branches })
    }
}

/// Membership through `ν_E(h) + λ_E > ξ·ν_E(C)` on every divisor and branch.
pub fn blowup_membership(chain: &BlowupChain, h: &BiPoly, xi: &Rat) -> Result<bool> {
    Ok(chain.probe(h)?.test(xi))
}

fn shear(f: &BiPoly, t: &Rat) -> BiPoly {
    f.compose(&BiPoly::x().add(&BiPoly::y().scale(t)), &BiPoly::y())
}

/// Intersection multiplicity at the origin from the order of a sheared resultant.
pub fn resultant_intersection(f: &BiPoly, g: &BiPoly) -> Result<u64> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !through_origin(f) || !through_origin(g) {
        return Ok(0);
    }
    for k in 0..64i64 {
        let t = rat_int(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        let (fs, gs) = (shear(f, &t), shear(g, &t));
        let ok = [&fs, &gs].iter().all(|p| {
            let lc = p.coeffs_in_y().last().cloned().unwrap_or_else(UPoly::zero);
            !lc.coeff(0).is_zero() && !p.restrict_x0().is_zero()
        });
        if !ok {
            continue;
        }
        let common = fs.restrict_x0().gcd(&gs.restrict_x0());
        if common.degree().unwrap_or(0) != common.ord0().unwrap_or(0) {
            continue;
        }
        let r = resultant_y(&fs, &gs)?;
        return Ok(r.ord0().unwrap() as u64);
    }
    Err(Error::Invariant("no admissible shear found".into()))
}
