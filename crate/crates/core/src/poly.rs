//! Sparse bivariate polynomials over ℚ.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{Chart, LatticeVec};
use crate::newton::{polygon_from_support, NewtonPolygon};
use crate::rat::{fmt_rat, parse_rat, rat_int, Rat};
use crate::upoly::UPoly;

/// Exponent pair `(i, j)` of the monomial `x^i y^j`.
pub type Exp = (u64, u64);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<Exp, Rat>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn x() -> Self {
        Self::monomial(Rat::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rat::one(), 0, 1)
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rat, i: u64, j: u64) -> Self {
        let mut p = BiPoly::zero();
        p.add_term((i, j), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, Rat)>>(it: I) -> Self {
        let mut p = BiPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    /// Builds from `(i, j, coefficient)` with integer coefficients.
    pub fn from_int_terms(t: &[(u64, u64, i64)]) -> Self {
        Self::from_terms(t.iter().map(|&(i, j, c)| ((i, j), rat_int(c))))
    }

    pub fn add_term(&mut self, e: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u64, j: u64) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0, 0)
    }

    pub fn deg_x(&self) -> u64 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u64 {
        self.terms.keys().map(|e| e.1).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|e| e.0 + e.1).max().unwrap_or(0)
    }

    /// Lowest total degree of a term: the multiplicity at the origin.
    pub fn order(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.0 + e.1).min()
    }

    pub fn support(&self) -> Vec<(BigInt, BigInt)> {
        self.terms.keys().map(|&(i, j)| (BigInt::from(i), BigInt::from(j))).collect()
    }

    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        polygon_from_support(self.support())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = BiPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                r.add_term((a.0 + b.0, a.1 + b.1), x * y);
            }
        }
        r
    }

    pub fn mul_monomial(&self, i: u64, j: u64) -> Self {
        BiPoly { terms: self.terms.iter().map(|(e, c)| ((e.0 + i, e.1 + j), c.clone())).collect() }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = BiPoly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `min ⟨v, u⟩` over the support.
    pub fn ord_v(&self, v: &LatticeVec) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !v.in_quadrant() {
            return Err(Error::VectorOutsideQuadrant(v.to_string()));
        }
        Ok(self
            .terms
            .keys()
            .map(|&(i, j)| v.pair(&i.into(), &j.into()))
            .min()
            .unwrap())
    }

    /// Substitutes `x = X^{u.a} Y^{v.a}`, `y = X^{u.b} Y^{v.b}`.
    pub fn monomial_pullback(&self, chart: &Chart) -> Result<Self> {
        let mut r = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            let (a, b) = chart.map_exponent(&i.into(), &j.into());
            let a = a.to_u64().ok_or_else(|| Error::InvalidInput("chart exponent out of range".into()))?;
            let b = b.to_u64().ok_or_else(|| Error::InvalidInput("chart exponent out of range".into()))?;
            r.add_term((a, b), c.clone());
        }
        Ok(r)
    }

    /// Splits `g = x^a y^b · core` with `core` divisible by neither variable.
    pub fn exceptional_split(&self) -> Result<(u64, u64, Self)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let a = self.terms.keys().map(|e| e.0).min().unwrap();
        let b = self.terms.keys().map(|e| e.1).min().unwrap();
        let core = BiPoly { terms: self.terms.iter().map(|(e, c)| ((e.0 - a, e.1 - b), c.clone())).collect() };
        Ok((a, b, core))
    }

    /// Substitutes `x ↦ px`, `y ↦ py`.
    pub fn compose(&self, px: &BiPoly, py: &BiPoly) -> Self {
        let mut xpow: Vec<BiPoly> = vec![BiPoly::one()];
        let mut ypow: Vec<BiPoly> = vec![BiPoly::one()];
        let mut r = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            while xpow.len() <= i as usize {
                let n = xpow.last().unwrap().mul(px);
                xpow.push(n);
            }
            while ypow.len() <= j as usize {
                let n = ypow.last().unwrap().mul(py);
                ypow.push(n);
            }
            r = r.add(&xpow[i as usize].mul(&ypow[j as usize]).scale(c));
        }
        r
    }

    /// `f(x, y + c)`.
    pub fn shift_y(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        self.compose(&BiPoly::x(), &BiPoly::y().add(&BiPoly::constant(c.clone())))
    }

    /// `f(0, y)` as a univariate polynomial in `y`.
    pub fn restrict_x0(&self) -> UPoly {
        let mut v = vec![Rat::zero(); self.deg_y() as usize + 1];
        for (&(i, j), c) in &self.terms {
            if i == 0 {
                v[j as usize] = c.clone();
            }
        }
        UPoly::new(v)
    }

    /// `f(x, 0)` as a univariate polynomial in `x`.
    pub fn restrict_y0(&self) -> UPoly {
        let mut v = vec![Rat::zero(); self.deg_x() as usize + 1];
        for (&(i, j), c) in &self.terms {
            if j == 0 {
                v[i as usize] = c.clone();
            }
        }
        UPoly::new(v)
    }

    /// Coefficients in `y`, each a univariate polynomial in `x`.
    pub fn coeffs_in_y(&self) -> Vec<UPoly> {
        let dy = self.deg_y() as usize;
        let dx = self.deg_x() as usize;
        let mut v = vec![vec![Rat::zero(); dx + 1]; dy + 1];
        for (&(i, j), c) in &self.terms {
            v[j as usize][i as usize] = c.clone();
        }
        v.into_iter().map(UPoly::new).collect()
    }

    pub fn from_upoly_x(p: &UPoly) -> Self {
        Self::from_terms(p.0.iter().enumerate().map(|(i, c)| ((i as u64, 0), c.clone())))
    }

    pub fn from_upoly_y(p: &UPoly) -> Self {
        Self::from_terms(p.0.iter().enumerate().map(|(j, c)| ((0, j as u64), c.clone())))
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize))
            .fold(Rat::zero(), |a, b| a + b)
    }

    fn leading(&self) -> Option<(Exp, Rat)> {
        // graded order: y-degree first, then x-degree
        self.terms
            .iter()
            .max_by(|a, b| (a.0 .1, a.0 .0).cmp(&(b.0 .1, b.0 .0)))
            .map(|(e, c)| (*e, c.clone()))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let (le, lc) = d.leading()?;
        let mut r = self.clone();
        let mut q = BiPoly::zero();
        while let Some((e, c)) = r.leading() {
            if e.0 < le.0 || e.1 < le.1 {
                return None;
            }
            let t = BiPoly::monomial(c / &lc, e.0 - le.0, e.1 - le.1);
            r = r.sub(&d.mul(&t));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            l = num_integer::lcm(l, c.denom().clone());
        }
        for c in self.terms.values() {
            g = num_integer::gcd(g, (c * rat_int(l.clone())).to_integer());
        }
        let (_, lc) = self.leading().unwrap();
        let s = if lc.is_negative() { -Rat::one() } else { Rat::one() };
        self.scale(&(rat_int(l) / rat_int(g) * s))
    }
}

pub fn ord_v(f: &BiPoly, v: &LatticeVec) -> Result<BigInt> {
    f.ord_v(v)
}

pub fn monomial_pullback(f: &BiPoly, chart: &Chart) -> Result<BiPoly> {
    f.monomial_pullback(chart)
}

pub fn exceptional_split(g: &BiPoly) -> Result<(u64, u64, BiPoly)> {
    g.exceptional_split()
}

pub fn shift_y(f: &BiPoly, c: &Rat) -> BiPoly {
    f.shift_y(c)
}

/// All rational roots with multiplicity and the degree of the root-free cofactor.
pub fn univariate_rational_roots(p: &[Rat]) -> Result<(Vec<(Rat, usize)>, usize)> {
    let u = UPoly::new(p.to_vec());
    if u.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (r, c) = crate::upoly::rational_roots(&u);
    Ok((r, c.degree().unwrap_or(0)))
}

/// Largest `k` with `f^k | h`.
pub fn exact_div_count(h: &BiPoly, f: &BiPoly) -> Result<u64> {
    if h.is_zero() || f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::InvalidInput("divisor must not be a unit".into()));
    }
    let mut k = 0;
    let mut cur = h.clone();
    while let Some(q) = cur.div_exact(f) {
        cur = q;
        k += 1;
    }
    Ok(k)
}

fn det_rat(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let piv = m[col][col].clone();
        det *= &piv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &piv;
            for c in col..n {
                let d = &f * &m[col][c];
                m[r][c] -= d;
            }
        }
    }
    det
}

fn sylvester_det(f: &[Rat], g: &[Rat]) -> Rat {
    // f, g coefficient lists in y of formal degrees m = len-1, n = len-1
    let m = f.len() - 1;
    let n = g.len() - 1;
    let s = m + n;
    if s == 0 {
        return Rat::one();
    }
    let mut rows = Vec::with_capacity(s);
    for r in 0..n {
        let mut row = vec![Rat::zero(); s];
        for (k, c) in f.iter().rev().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![Rat::zero(); s];
        for (k, c) in g.iter().rev().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    det_rat(rows)
}

/// Interpolating polynomial through `(xs[k], ys[k])` by divided differences.
fn interpolate(xs: &[Rat], ys: &[Rat]) -> UPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for lvl in 1..n {
        for k in (lvl..n).rev() {
            dd[k] = (&dd[k] - &dd[k - 1]) / (&xs[k] - &xs[k - lvl]);
        }
    }
    let mut p = UPoly::zero();
    for k in (0..n).rev() {
        p = p.mul(&UPoly::new(vec![-xs[k].clone(), Rat::one()])).add(&UPoly::constant(dd[k].clone()));
    }
    p
}

/// Content of `f` as a polynomial in `y` over `ℚ[x]`.
pub fn x_content(f: &BiPoly) -> UPoly {
    f.coeffs_in_y().iter().fold(UPoly::zero(), |g, c| if g.is_zero() { c.monic() } else { g.gcd(c) })
}

/// Resultant of `f` and `g` with respect to `y`, as a polynomial in `x`.
pub fn resultant_y(f: &BiPoly, g: &BiPoly) -> Result<UPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if x_content(f).gcd(&x_content(g)).degree().unwrap_or(0) > 0 {
        return Err(Error::CommonFactor);
    }
    let fc = f.coeffs_in_y();
    let gc = g.coeffs_in_y();
    let bound = (g.deg_y() * f.deg_x() + f.deg_y() * g.deg_x()) as usize;
    let xs: Vec<Rat> = (0..=bound).map(|k| rat_int(k as i64)).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|x| {
            let fv: Vec<Rat> = fc.iter().map(|c| c.eval(x)).collect();
            let gv: Vec<Rat> = gc.iter().map(|c| c.eval(x)).collect();
            sylvester_det(&fv, &gv)
        })
        .collect();
    let r = interpolate(&xs, &ys);
    if r.is_zero() {
        return Err(Error::CommonFactor);
    }
    Ok(r)
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut keys: Vec<&Exp> = self.terms.keys().collect();
        keys.sort_by_key(|&&(i, j)| (i + j, std::cmp::Reverse(j)));
        for e in keys {
            let c = &self.terms[e];
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            let unit = a.is_one();
            if !unit || (e.0 == 0 && e.1 == 0) {
                parts.push(fmt_rat(&a));
            }
            for (v, k) in [("x", e.0), ("y", e.1)] {
                match k {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    k => parts.push(format!("{v}^{k}")),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (&(i, j), c) in &self.terms {
            seq.serialize_element(&(i, j, fmt_rat(c)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = BiPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a list of [i, j, \"p/q\"] triples")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut a: A) -> std::result::Result<BiPoly, A::Error> {
                let mut p = BiPoly::zero();
                while let Some((i, j, c)) = a.next_element::<(u64, u64, CoeffRepr)>()? {
                    let c = match c {
                        CoeffRepr::Int(n) => rat_int(n),
                        CoeffRepr::Str(s) => parse_rat(&s).map_err(de::Error::custom)?,
                    };
                    p.add_term((i, j), c);
                }
                Ok(p)
            }
        }
        d.deserialize_seq(V)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Int(i64),
    Str(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn f1() -> BiPoly {
        let z = BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, 1)]);
        z.pow(2).add(&BiPoly::from_int_terms(&[(6, 1, 1)]))
    }

    fn f2() -> BiPoly {
        BiPoly::from_int_terms(&[(0, 3, 1), (5, 0, 1)])
    }

    #[test]
    fn arithmetic() {
        let z = BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, 1)]);
        assert_eq!(z.pow(2), BiPoly::from_int_terms(&[(0, 4, 1), (3, 2, 2), (6, 0, 1)]));
        assert_eq!(f1().mul(&BiPoly::one()), f1());
        assert_eq!(f1(), BiPoly::from_int_terms(&[(0, 4, 1), (3, 2, 2), (6, 0, 1), (6, 1, 1)]));
        assert!(z.sub(&z).is_zero());
    }

    #[test]
    fn monomial_orders() {
        assert_eq!(f1().ord_v(&LatticeVec::new(2, 3)).unwrap(), 12.into());
        assert_eq!(f2().ord_v(&LatticeVec::new(3, 5)).unwrap(), 15.into());
        assert_eq!(BiPoly::monomial(rat(1, 1), 4, 7).ord_v(&LatticeVec::new(1, 1)).unwrap(), 11.into());
        assert_eq!(BiPoly::zero().ord_v(&LatticeVec::new(1, 1)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn chart_pullbacks() {
        let ch = Chart { u: LatticeVec::new(2, 3), v: LatticeVec::new(3, 5) };
        let g = f1().monomial_pullback(&ch).unwrap();
        let strict = BiPoly::from_int_terms(&[(0, 0, 1), (0, 1, 2), (0, 2, 1), (3, 5, 1)]);
        assert_eq!(g, strict.mul_monomial(12, 18));
        assert_eq!(g.exceptional_split().unwrap(), (12, 18, strict));
        let g2 = f2().monomial_pullback(&ch).unwrap();
        assert_eq!(g2, BiPoly::from_int_terms(&[(9, 15, 1), (10, 15, 1)]));
        assert_eq!(BiPoly::x().monomial_pullback(&Chart::identity()).unwrap(), BiPoly::x());
        assert_eq!(BiPoly::monomial(rat(1, 1), 3, 0).exceptional_split().unwrap(), (3, 0, BiPoly::one()));
    }

    #[test]
    fn shifts() {
        let p = BiPoly::from_int_terms(&[(0, 0, 1), (0, 1, 2), (0, 2, 1), (3, 5, 1)]);
        let s = p.shift_y(&rat(-1, 1));
        assert_eq!(s.coeff(0, 2), rat(1, 1));
        assert_eq!(s.coeff(0, 1), rat(0, 1));
        assert_eq!(s.coeff(0, 0), rat(0, 1));
        assert_eq!(s.coeff(3, 0), rat(-1, 1));
        assert_eq!(s.newton_polygon().unwrap().vertices.len(), 2);
        assert_eq!(p.shift_y(&rat(0, 1)), p);
        assert_eq!(BiPoly::y().shift_y(&rat(5, 1)), BiPoly::from_int_terms(&[(0, 1, 1), (0, 0, 5)]));
    }

    #[test]
    fn root_finding() {
        let (r, d) = univariate_rational_roots(&[rat(1, 1), rat(2, 1), rat(1, 1)]).unwrap();
        assert_eq!((r, d), (vec![(rat(-1, 1), 2)], 0));
        let (r, d) = univariate_rational_roots(&[rat(1, 1), rat(0, 1), rat(1, 1)]).unwrap();
        assert!(r.is_empty());
        assert_eq!(d, 2);
    }

    #[test]
    fn divisibility() {
        let z = BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, 1)]);
        assert_eq!(exact_div_count(&z.pow(2).mul(&BiPoly::y()), &z).unwrap(), 2);
        assert_eq!(exact_div_count(&f1(), &z).unwrap(), 0);
        assert_eq!(exact_div_count(&f1(), &f1()).unwrap(), 1);
        assert!(exact_div_count(&f1(), &BiPoly::one()).is_err());
    }

    #[test]
    fn resultants() {
        let z = BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, 1)]);
        assert_eq!(resultant_y(&z, &BiPoly::y()).unwrap().ord0(), Some(3));
        assert_eq!(resultant_y(&BiPoly::x(), &BiPoly::y()).unwrap().ord0(), Some(1));
        assert_eq!(resultant_y(&f1(), &f2()).unwrap().ord0(), Some(18));
        assert_eq!(resultant_y(&z, &z.mul(&BiPoly::x())), Err(Error::CommonFactor));
        assert_eq!(resultant_y(&BiPoly::x(), &BiPoly::x().mul(&BiPoly::y())), Err(Error::CommonFactor));
    }

    #[test]
    fn json_round_trip() {
        let p = f1().scale(&rat(1, 2));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"[[0,4,"1/2"],[3,2,"1"],[6,0,"1/2"],[6,1,"1/2"]]"#);
        let q: BiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        let q: BiPoly = serde_json::from_str("[[0,3,1],[5,0,\"1\"]]").unwrap();
        assert_eq!(q, f2());
    }

    #[test]
    fn display() {
        assert_eq!(f2().to_string(), "y^3 + x^5");
        assert_eq!(BiPoly::from_int_terms(&[(0, 0, -2), (1, 1, 3)]).to_string(), "-2 + 3*x*y");
    }
}
