//! Newton polygons, support functions, Newton fans and Minkowski sums.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Fan2, LatticeVec};
use crate::rat::Rat;

pub type Point = (BigInt, BigInt);

/// Vertices of the convex hull of a support plus the first quadrant, by increasing `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NewtonPolygon {
    pub vertices: Vec<Point>,
}

fn cross(o: &Point, p: &Point, q: &Point) -> BigInt {
    (&p.0 - &o.0) * (&q.1 - &p.1) - (&p.1 - &o.1) * (&q.0 - &p.0)
}

pub fn polygon_from_support<I>(points: I) -> Result<NewtonPolygon>
where
    I: IntoIterator<Item = Point>,
{
    let mut pts: Vec<Point> = points.into_iter().collect();
    if pts.is_empty() {
        return Err(Error::EmptySupport);
    }
    if pts.iter().any(|p| p.0.is_negative() || p.1.is_negative()) {
        return Err(Error::InvalidInput("support exponents must be nonnegative".into()));
    }
    pts.sort();
    let mut stair: Vec<Point> = Vec::new();
    for p in pts {
        if stair.last().is_none_or(|l| p.1 < l.1) {
            stair.push(p);
        }
    }
    let mut hull: Vec<Point> = Vec::new();
    for p in stair {
        while hull.len() >= 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p).is_positive() {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(NewtonPolygon { vertices: hull })
}

impl NewtonPolygon {
    pub fn point(i: i64, j: i64) -> Self {
        NewtonPolygon { vertices: vec![(i.into(), j.into())] }
    }

    pub fn from_vertices(v: &[(i64, i64)]) -> Result<Self> {
        polygon_from_support(v.iter().map(|&(i, j)| (BigInt::from(i), BigInt::from(j))))
    }

    /// Compact edges as pairs of consecutive vertices.
    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// Primitive inward normals of the compact edges, in increasing slope.
    pub fn edge_normals(&self) -> Vec<LatticeVec> {
        self.edges().map(|(p, q)| edge_normal(p, q)).collect()
    }

    pub fn translate(&self, d: &Point) -> Self {
        NewtonPolygon {
            vertices: self.vertices.iter().map(|(i, j)| (i + &d.0, j + &d.1)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return NewtonPolygon { vertices: vec![(BigInt::zero(), BigInt::zero())] };
        }
        NewtonPolygon {
            vertices: self.vertices.iter().map(|(i, j)| (i * k, j * k)).collect(),
        }
    }
}

pub fn edge_normal(p: &Point, q: &Point) -> LatticeVec {
    LatticeVec::from_big(&p.1 - &q.1, &q.0 - &p.0).primitive()
}

pub fn support_eval(p: &NewtonPolygon, v: &LatticeVec) -> Result<BigInt> {
    if !v.in_quadrant() {
        return Err(Error::VectorOutsideQuadrant(v.to_string()));
    }
    Ok(p.vertices.iter().map(|(i, j)| v.pair(i, j)).min().expect("polygon has a vertex"))
}

pub fn newton_fan(p: &NewtonPolygon) -> Fan2 {
    let mut rays = vec![LatticeVec::e_r()];
    rays.extend(p.edge_normals());
    rays.push(LatticeVec::e_l());
    Fan2 { rays }
}

pub fn minkowski(p: &NewtonPolygon, q: &NewtonPolygon) -> NewtonPolygon {
    let sums = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| (&a.0 + &b.0, &a.1 + &b.1)));
    polygon_from_support(sums).expect("sum of non-empty polygons")
}

/// Whether `A ⊂ Int(ξ·N)`, checked on the rays of the Newton fan of `N`.
pub fn scaled_interior_contains(n: &NewtonPolygon, xi: &Rat, a: &NewtonPolygon) -> bool {
    first_violation(n, xi, a).is_none()
}

/// The first Newton-fan ray of `N` on which `Φ_A(v) > ξ·Φ_N(v)` fails.
pub fn first_violation(n: &NewtonPolygon, xi: &Rat, a: &NewtonPolygon) -> Option<LatticeVec> {
    newton_fan(n).rays.into_iter().find(|v| {
        let lhs = support_eval(a, v).unwrap() * xi.denom();
        let rhs = support_eval(n, v).unwrap() * xi.numer();
        lhs <= rhs
    })
}

/// Gcd of a point's coordinates, used to split an edge into lattice steps.
pub fn lattice_length(p: &Point, q: &Point) -> BigInt {
    (&q.0 - &p.0).abs().gcd(&(&q.1 - &p.1).abs())
}
