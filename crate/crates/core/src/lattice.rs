//! Rank-two lattice vectors, cones, fans, regular subdivisions and monomial charts.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{Rat, Slope};

/// The vector `a·e_R + b·e_L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVec {
    pub a: BigInt,
    pub b: BigInt,
}

impl LatticeVec {
    pub fn new(a: i64, b: i64) -> Self {
        LatticeVec { a: a.into(), b: b.into() }
    }

    pub fn from_big(a: BigInt, b: BigInt) -> Self {
        LatticeVec { a, b }
    }

    pub fn e_r() -> Self {
        Self::new(1, 0)
    }

    pub fn e_l() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.a.gcd(&self.b).is_one()
    }

    pub fn in_quadrant(&self) -> bool {
        !self.a.is_negative() && !self.b.is_negative()
    }

    pub fn primitive(&self) -> Self {
        let g = self.a.gcd(&self.b);
        if g.is_zero() {
            return self.clone();
        }
        LatticeVec { a: &self.a / &g, b: &self.b / &g }
    }

    pub fn add(&self, o: &Self) -> Self {
        LatticeVec { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn scale(&self, t: &BigInt) -> Self {
        LatticeVec { a: &self.a * t, b: &self.b * t }
    }

    /// Pairing with a weight `(i, j)` of the dual lattice.
    pub fn pair(&self, i: &BigInt, j: &BigInt) -> BigInt {
        &self.a * i + &self.b * j
    }

    pub fn slope(&self) -> Result<Slope> {
        slope(self)
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

pub fn det2(u: &LatticeVec, v: &LatticeVec) -> BigInt {
    &u.a * &v.b - &u.b * &v.a
}

pub fn slope(u: &LatticeVec) -> Result<Slope> {
    if u.is_zero() {
        return Err(Error::ZeroVector);
    }
    if u.a.is_zero() {
        Ok(Slope::Infinite)
    } else {
        Ok(Slope::Finite(Rat::new(u.b.clone(), u.a.clone())))
    }
}

/// The primitive vector with the given slope.
pub fn vec_of_slope(s: &Slope) -> LatticeVec {
    match s {
        Slope::Infinite => LatticeVec::e_l(),
        Slope::Finite(r) => LatticeVec::from_big(r.denom().clone(), r.numer().clone()),
    }
}

/// A strictly convex cone `⟨u, v⟩` with `det(u, v) > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone2 {
    pub u: LatticeVec,
    pub v: LatticeVec,
}

impl Cone2 {
    pub fn new(u: LatticeVec, v: LatticeVec) -> Result<Self> {
        if !u.is_primitive() || !v.is_primitive() || !det2(&u, &v).is_positive() {
            return Err(Error::InvalidInput(format!("{u}, {v} do not span a strictly convex cone")));
        }
        Ok(Cone2 { u, v })
    }

    pub fn is_regular(&self) -> bool {
        det2(&self.u, &self.v).is_one()
    }
}

/// Rays inserted by the minimal regular subdivision of `c`, in slope order.
///
/// Walks from `u` towards `v`; at each step the next ray is the lattice vector
/// `w` with `det(c, w) = 1` lying in the cone and closest to the current ray.
pub fn regularize_cone(c: &Cone2) -> Vec<LatticeVec> {
    let v = &c.v;
    let mut out = Vec::new();
    let mut cur = c.u.clone();
    while det2(&cur, v) > BigInt::one() {
        let eg = cur.a.extended_gcd(&cur.b);
        let (x, y) = if eg.gcd.is_negative() { (-eg.x, -eg.y) } else { (eg.x, eg.y) };
        let w0 = LatticeVec::from_big(-y, x);
        // det(w0 + t·cur, v) = det(w0, v) + t·det(cur, v) must be ≥ 0
        let t = ceil_div(&-det2(&w0, v), &det2(&cur, v));
        let w = w0.add(&cur.scale(&t));
        out.push(w.clone());
        cur = w;
    }
    out
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}

/// A fan subdividing the first quadrant, rays in increasing slope order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan2 {
    pub rays: Vec<LatticeVec>,
}

impl Fan2 {
    pub fn new(rays: Vec<LatticeVec>) -> Result<Self> {
        let bad = |m: &str| Error::InvalidInput(format!("invalid fan: {m}"));
        if rays.len() < 2 {
            return Err(bad("fewer than two rays"));
        }
        if rays[0] != LatticeVec::e_r() || rays[rays.len() - 1] != LatticeVec::e_l() {
            return Err(bad("must start at (1,0) and end at (0,1)"));
        }
        for r in &rays {
            if !r.is_primitive() || !r.in_quadrant() {
                return Err(bad("rays must be primitive and in the first quadrant"));
            }
        }
        for w in rays.windows(2) {
            if !det2(&w[0], &w[1]).is_positive() {
                return Err(bad("slopes must strictly increase"));
            }
        }
        Ok(Fan2 { rays })
    }

    pub fn trivial() -> Self {
        Fan2 { rays: vec![LatticeVec::e_r(), LatticeVec::e_l()] }
    }

    pub fn cones(&self) -> impl Iterator<Item = Cone2> + '_ {
        self.rays.windows(2).map(|w| Cone2 { u: w[0].clone(), v: w[1].clone() })
    }

    pub fn is_regular(&self) -> bool {
        self.cones().all(|c| c.is_regular())
    }
}

pub fn regularize_fan(f: &Fan2) -> Fan2 {
    let mut rays = vec![f.rays[0].clone()];
    for c in f.cones() {
        rays.extend(regularize_cone(&c));
        rays.push(c.v.clone());
    }
    Fan2 { rays }
}

/// A unimodular monomial chart: columns `u` and `v`.
///
/// Pulling back along the chart substitutes `x = X^{u.a} Y^{v.a}` and
/// `y = X^{u.b} Y^{v.b}`, so that `{X = 0}` is the divisor of `u` and
/// `{Y = 0}` the divisor of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    pub u: LatticeVec,
    pub v: LatticeVec,
}

impl Chart {
    pub fn identity() -> Self {
        Chart { u: LatticeVec::e_r(), v: LatticeVec::e_l() }
    }

    /// Row-major matrix with columns `u`, `v`.
    pub fn matrix(&self) -> [[BigInt; 2]; 2] {
        [[self.u.a.clone(), self.v.a.clone()], [self.u.b.clone(), self.v.b.clone()]]
    }

    pub fn det(&self) -> BigInt {
        det2(&self.u, &self.v)
    }

    /// Exponent of `(X, Y)` produced by the monomial `x^i y^j`.
    pub fn map_exponent(&self, i: &BigInt, j: &BigInt) -> (BigInt, BigInt) {
        (self.u.pair(i, j), self.v.pair(i, j))
    }

    /// Chart of the composite pullback: first `self`, then `next`.
    pub fn compose(&self, next: &Chart) -> Chart {
        // exponents (i,j) ↦ (⟨u,(i,j)⟩, ⟨v,(i,j)⟩) ↦ ⟨u',·⟩, ⟨v',·⟩
        let col = |w: &LatticeVec| {
            LatticeVec::from_big(
                &w.a * &self.u.a + &w.b * &self.v.a,
                &w.a * &self.u.b + &w.b * &self.v.b,
            )
        };
        Chart { u: col(&next.u), v: col(&next.v) }
    }
}

pub fn charts(f: &Fan2) -> Result<Vec<Chart>> {
    f.cones()
        .map(|c| {
            if c.is_regular() {
                Ok(Chart { u: c.u, v: c.v })
            } else {
                Err(Error::NonRegularFan(c.u.to_string(), c.v.to_string()))
            }
        })
        .collect()
}
