#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use torres_core::json::{analyze, Analysis, CurveDoc};
use torres_core::lattice::{Cone2, LatticeVec};
use torres_core::multiplier::Monomial;
use torres_core::parse::parse_poly;
use torres_core::rat::{parse_rat, Rat};
use torres_core::{BiPoly, Curve, ValuationTable};

pub const F1: &str = "(y^2+x^3)^2+x^6*y";
pub const F2: &str = "y^3+x^5";

pub fn poly(s: &str) -> BiPoly {
    parse_poly(s).unwrap()
}

pub fn r(s: &str) -> Rat {
    parse_rat(s).unwrap()
}

pub fn example_doc() -> CurveDoc {
    CurveDoc::from_text(&format!("C1 = {F1}\nC2 = {F2}\n")).unwrap()
}

pub fn example() -> Analysis {
    analyze(&example_doc()).unwrap()
}

pub fn analysis_of(polys: &[&str]) -> Analysis {
    let text: String = polys.iter().enumerate().map(|(k, p)| format!("C{} = {p}\n", k + 1)).collect();
    analyze(&CurveDoc::from_text(&text).unwrap()).unwrap()
}

/// The ideals listed for each jumping number below one of the two-branch example.
pub const LISTED_IDEALS: [(&str, &str); 30] = [
    ("5/21", "x,y,z"),
    ("1/3", "x^2,y,z"),
    ("8/21", "x^2,xy,y^2,z"),
    ("14/33", "x^3,xy,y^2,z"),
    ("10/21", "x^3,x^2y,y^2,z"),
    ("17/33", "x^4,x^2y,y^2,xz,yz,z^2"),
    ("25/48", "x^4,x^2y,xy^2,y^3,xz,yz,z^2"),
    ("27/48", "x^4,x^3y,xy^2,y^3,xz,yz,z^2"),
    ("29/48", "x^5,x^3y,x^2y^2,y^3,xz,yz,z^2"),
    ("20/33", "x^5,x^3y,x^2y^2,y^3,x^2z,yz,z^2"),
    ("31/48", "x^5,x^4y,x^2y^2,xy^3,y^4,x^2z,yz,z^2"),
    ("2/3", "x^5,x^4y,x^2y^2,xy^3,y^4,x^2z,xyz,y^2z,z^2"),
    ("33/48", "x^6,x^4y,x^3y^2,xy^3,y^4,x^2z,xyz,y^2z,z^2"),
    ("23/33", "x^6,x^4y,x^3y^2,xy^3,y^4,x^3z,xyz,y^2z,z^2"),
    ("35/48", "x^6,x^5y,x^3y^2,x^2y^3,y^4,x^3z,xyz,y^2z,z^2"),
    ("25/33", "x^6,x^5y,x^3y^2,x^2y^3,y^4,x^3z,x^2yz,y^2z,z^2"),
    ("37/48", "x^7,x^5y,x^4y^2,x^2y^3,xy^4,y^5,x^3z,x^2yz,y^2z,z^2"),
    ("26/33", "x^7,x^5y,x^4y^2,x^2y^3,xy^4,y^5,x^4z,x^2yz,y^2z,xz^2,yz^2"),
    ("17/21", "x^7,x^5y,x^4y^2,x^2y^3,xy^4,y^5,x^4z,x^2yz,xy^2z,y^3z,xz^2,yz^2"),
    ("39/48", "x^7,x^6y,x^4y^2,x^3y^3,xy^4,y^5,x^4z,x^2yz,xy^2z,y^3z,xz^2,yz^2"),
    ("28/33", "x^7,x^6y,x^4y^2,x^3y^3,xy^4,y^5,x^4z,x^3yz,xy^2z,y^3z,xz^2,yz^2"),
    ("41/48", "x^8,x^6y,x^5y^2,x^3y^3,x^2y^4,y^5,x^4z,x^3yz,xy^2z,y^3z,xz^2,yz^2"),
    ("29/33", "x^8,x^6y,x^5y^2,x^3y^3,x^2y^4,y^5,x^5z,x^3yz,xy^2z,y^3z,x^2z^2,yz^2"),
    ("43/48", "x^8,x^7y,x^5y^2,x^4y^3,x^2y^4,xy^5,y^6,x^5z,x^3yz,xy^2z,y^3z,x^2z^2,yz^2"),
    ("19/21", "x^8,x^7y,x^5y^2,x^4y^3,x^2y^4,xy^5,y^6,x^5z,x^3yz,x^2y^2z,y^3z,x^2z^2,yz^2"),
    ("45/48", "x^9,x^7y,x^6y^2,x^4y^3,x^3y^4,xy^5,y^6,x^5z,x^3yz,x^2y^2z,y^3z,x^2z^2,yz^2"),
    ("31/33", "x^9,x^7y,x^6y^2,x^4y^3,x^3y^4,xy^5,y^6,x^5z,x^4yz,x^2y^2z,y^3z,x^2z^2,xyz^2,y^2z^2"),
    ("20/21", "x^9,x^7y,x^6y^2,x^4y^3,x^3y^4,xy^5,y^6,x^5z,x^4yz,x^2y^2z,xy^3z,y^4z,x^2z^2,xyz^2,y^2z^2"),
    ("32/33", "x^9,x^7y,x^6y^2,x^4y^3,x^3y^4,xy^5,y^6,x^6z,x^4yz,x^2y^2z,xy^3z,y^4z,x^3z^2,xyz^2,y^2z^2"),
    ("47/48", "x^9,x^8y,x^6y^2,x^5y^3,x^3y^4,x^2y^5,y^6,x^6z,x^4yz,x^2y^2z,xy^3z,y^4z,x^3z^2,xyz^2,y^2z^2"),
];

/// Parses a monomial written like `x^2yz^3` over single-letter elements.
pub fn monomial(table: &ValuationTable, s: &str) -> Monomial {
    let mut m = Monomial::one(table.elements.len());
    let cs: Vec<char> = s.chars().collect();
    let mut k = 0;
    while k < cs.len() {
        let idx = table.element_index(&cs[k].to_string()).unwrap();
        k += 1;
        let mut e = 1;
        if k < cs.len() && cs[k] == '^' {
            let start = k + 1;
            k = start;
            while k < cs.len() && cs[k].is_ascii_digit() {
                k += 1;
            }
            e = cs[start..k].iter().collect::<String>().parse().unwrap();
        }
        m.0[idx] += e;
    }
    m
}

pub fn primitive_in_box(rng: &mut ChaCha8Rng, max: i64) -> LatticeVec {
    loop {
        let v = LatticeVec::new(rng.gen_range(0..=max), rng.gen_range(0..=max));
        if v.is_primitive() {
            return v;
        }
    }
}

pub fn random_cone(rng: &mut ChaCha8Rng, max: i64) -> Cone2 {
    loop {
        let (u, v) = (primitive_in_box(rng, max), primitive_in_box(rng, max));
        if let Ok(c) = Cone2::new(u, v) {
            return c;
        }
    }
}

/// Lattice points on the boundary of the convex hull of the nonzero lattice
/// points of the cone, strictly between its two rays.
pub fn hull_oracle(c: &Cone2) -> Vec<LatticeVec> {
    let to_i = |b: &BigInt| i64::try_from(b).unwrap();
    let (u, v) = ((to_i(&c.u.a), to_i(&c.u.b)), (to_i(&c.v.a), to_i(&c.v.b)));
    let cross = |o: (i64, i64), p: (i64, i64), q: (i64, i64)| (p.0 - o.0) * (q.1 - o.1) - (p.1 - o.1) * (q.0 - o.0);
    let mut pts = Vec::new();
    for a in 0..=u.0.max(v.0) {
        for b in 0..=u.1.max(v.1) {
            let p = (a, b);
            // closed triangle 0, u, v without the origin
            if p != (0, 0) && cross((0, 0), u, p) >= 0 && cross((0, 0), p, v) >= 0 && cross(u, v, p) >= 0 {
                pts.push(p);
            }
        }
    }
    pts.sort();
    let half = |it: &mut dyn Iterator<Item = (i64, i64)>| {
        let mut h: Vec<(i64, i64)> = Vec::new();
        for p in it {
            while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], p) <= 0 {
                h.pop();
            }
            h.push(p);
        }
        h.pop();
        h
    };
    let mut hull = half(&mut pts.clone().into_iter());
    hull.extend(half(&mut pts.into_iter().rev()));
    // counterclockwise; the chain facing the origin runs from v back round to u
    let n = hull.len();
    let iv = hull.iter().position(|&p| p == v).unwrap();
    let mut chain = vec![v];
    let mut k = iv;
    while hull[k] != u {
        k = (k + 1) % n;
        chain.push(hull[k]);
    }
    chain.reverse();
    let mut out = Vec::new();
    for w in chain.windows(2) {
        let (d0, d1) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let g = num_integer::gcd(d0, d1);
        for s in 1..=g {
            out.push(LatticeVec::new(w[0].0 + s * d0 / g, w[0].1 + s * d1 / g));
        }
    }
    out.pop();
    out
}

/// Irreducible pieces with rational resolutions, for randomized curves.
pub fn random_branch(rng: &mut ChaCha8Rng) -> String {
    let c = rng.gen_range(1..=3);
    match rng.gen_range(0..4) {
        0 => {
            let (p, q) = loop {
                let p = rng.gen_range(2..=7);
                let q = rng.gen_range(2..=5);
                if num_integer::gcd(p, q) == 1 {
                    break (p, q);
                }
            };
            // x^i y^j strictly above the edge from (0,q) to (p,0)
            let j = rng.gen_range(1..q);
            let i = p * (q - j) / q + 1 + rng.gen_range(0..2);
            format!("y^{q} + {c}*x^{p} + x^{i}*y^{j}")
        }
        1 => {
            let m = [7, 9, 11][rng.gen_range(0..3)];
            format!("(y^2+{c}*x^3)^2 + x^{m}*y")
        }
        2 => {
            let k = rng.gen_range(1..=2);
            let p = 2 * k + [1, 3, 5][rng.gen_range(0..3)];
            format!("(y - {c}*x^{k})^2 + x^{p}")
        }
        _ => {
            let k = rng.gen_range(1..=3);
            format!("y - {c}*x^{k}")
        }
    }
}

pub fn random_curve(rng: &mut ChaCha8Rng) -> Option<Curve> {
    let n = rng.gen_range(1..=3);
    let polys: Vec<(BiPoly, u64)> = (0..n).map(|_| (poly(&random_branch(rng)), 1)).collect();
    Curve::from_polys(polys).ok()
}
