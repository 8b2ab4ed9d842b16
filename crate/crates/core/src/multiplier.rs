//! Jumping numbers and monomial presentations of multiplier ideals computed
//! from a valuation table.
//!
//! A monomial `M` in the maximal contact elements has the threshold
//! `ξ_M = min_D (ν_D(M) + λ_D) / ν_D(C)`, where `D` runs over the rupture
//! rows and the branch rows (`λ = 1`, `ν = exponent of f_{C_j}`, `ν(C) = a_j`).
//! `M ∈ J(ξC)` iff `ξ < ξ_M`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rat::{rat_int, Rat};
use crate::tree::ValuationTable;

/// Exponent vector aligned with the elements of a [`ValuationTable`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u64>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn from_named(table: &ValuationTable, named: &BTreeMap<String, u64>) -> Result<Self> {
        let mut v = vec![0; table.elements.len()];
        for (name, e) in named {
            v[table.element_index(name)?] += e;
        }
        Ok(Monomial(v))
    }

    pub fn named(&self, elements: &[String]) -> BTreeMap<String, u64> {
        self.0
            .iter()
            .zip(elements)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| (n.clone(), *e))
            .collect()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn display(&self, elements: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(elements)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Which rows and elements enter the computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Rupture and branch rows over every element.
    Full,
    /// Rupture rows over the non-branch elements; valid for reduced `C` and `ξ < 1`.
    Reduced,
}

fn nu(table: &ValuationTable, row: usize, m: &Monomial) -> BigInt {
    table.rupture[row].values.iter().zip(&m.0).map(|(v, e)| v * BigInt::from(*e)).sum()
}

fn xi_with(table: &ValuationTable, m: &Monomial, mode: Mode) -> Option<Rat> {
    let mut best: Option<Rat> = None;
    let mut take = |r: Rat| {
        if best.as_ref().is_none_or(|b| &r < b) {
            best = Some(r);
        }
    };
    for (k, row) in table.rupture.iter().enumerate() {
        take(Rat::new(nu(table, k, m) + &row.lambda, table.curve_value(row)));
    }
    if mode == Mode::Full {
        for (b, k) in table.branches.iter().zip(table.branch_indices()) {
            take(Rat::new(BigInt::from(m.0[k] + 1), BigInt::from(b.mult)));
        }
    }
    best
}

/// `ξ_M` over rupture and branch rows.
pub fn xi_of_monomial(table: &ValuationTable, m: &Monomial) -> Result<Rat> {
    check_len(table, m)?;
    Ok(xi_with(table, m, Mode::Full).expect("table has a branch row"))
}

/// `ξ_M` over the rupture rows only; `None` when there are none.
pub fn xi_of_monomial_reduced(table: &ValuationTable, m: &Monomial) -> Result<Option<Rat>> {
    check_len(table, m)?;
    Ok(xi_with(table, m, Mode::Reduced))
}

fn check_len(table: &ValuationTable, m: &Monomial) -> Result<()> {
    if m.0.len() != table.elements.len() {
        return Err(Error::InvalidInput(format!(
            "monomial has {} exponents for {} elements",
            m.0.len(),
            table.elements.len()
        )));
    }
    Ok(())
}

pub fn lct(table: &ValuationTable) -> Rat {
    xi_with(table, &Monomial::one(table.elements.len()), Mode::Full).unwrap()
}

/// Largest exponent any element needs for thresholds up to `upper`.
pub fn exponent_bound(table: &ValuationTable, k: usize, upper: &Rat) -> u64 {
    let up = upper + rat_int(1);
    let mut b = BigInt::zero();
    for row in &table.rupture {
        let q = (&up * Rat::from_integer(table.curve_value(row)) / Rat::from_integer(row.values[k].clone())).ceil();
        b = b.max(q.to_integer());
    }
    if let Some(br) = table.branches.iter().find(|br| br.name == table.elements[k]) {
        b = b.max((&up * rat_int(br.mult as i64)).floor().to_integer());
    }
    b.to_u64().unwrap_or(u64::MAX)
}

/// Jumping numbers in `(0, upper]`.
pub fn jumping_numbers(table: &ValuationTable, upper: &Rat) -> Vec<Rat> {
    let mut out = BTreeSet::new();
    if upper <= &Rat::zero() {
        return Vec::new();
    }
    for b in &table.branches {
        let a = b.mult as i64;
        let mut m = 0i64;
        while rat_int(m + 1) / rat_int(a) <= *upper {
            out.insert(rat_int(m + 1) / rat_int(a));
            m += 1;
        }
    }
    if !table.rupture.is_empty() {
        let n = table.elements.len();
        let bounds: Vec<u64> = (0..n).map(|k| exponent_bound(table, k, upper)).collect();
        let mut cur = Monomial::one(n);
        rupture_dfs(table, upper, &bounds, 0, &mut cur, &mut out);
    }
    out.into_iter().collect()
}

fn rupture_dfs(table: &ValuationTable, upper: &Rat, bounds: &[u64], k: usize, cur: &mut Monomial, out: &mut BTreeSet<Rat>) {
    let rupture_min = xi_with(table, cur, Mode::Reduced).unwrap();
    if &rupture_min > upper {
        return;
    }
    if k == cur.0.len() {
        let xi = xi_with(table, cur, Mode::Full).unwrap();
        if &xi <= upper {
            out.insert(xi);
        }
        return;
    }
    for e in 0..=bounds[k] {
        cur.0[k] = e;
        if &xi_with(table, cur, Mode::Reduced).unwrap() > upper {
            break;
        }
        rupture_dfs(table, upper, bounds, k + 1, cur, out);
    }
    cur.0[k] = 0;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub monomial: Monomial,
    /// `ν_D(M)` for each rupture row.
    pub values: Vec<BigInt>,
    pub xi_m: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealPresentation {
    pub xi: Rat,
    pub elements: Vec<String>,
    /// Element index and multiplicity of each branch.
    pub branches: Vec<(usize, u64)>,
    pub mode: Mode,
    pub generators: Vec<Generator>,
}

impl IdealPresentation {
    pub fn monomials(&self) -> Vec<&Monomial> {
        self.generators.iter().map(|g| &g.monomial).collect()
    }

    /// Whether the formal monomial ideal contains `m`.
    pub fn contains(&self, m: &Monomial) -> bool {
        self.generators.iter().any(|g| g.monomial.divides(m))
    }

    /// Equality of the generated formal monomial ideals.
    pub fn same_ideal(&self, other: &IdealPresentation) -> bool {
        self.elements == other.elements
            && self.generators.iter().all(|g| other.contains(&g.monomial))
            && other.generators.iter().all(|g| self.contains(&g.monomial))
    }
}

impl fmt::Display for IdealPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.monomial.display(&self.elements)).collect();
        write!(f, "J({} C) = ({})", crate::rat::fmt_rat(&self.xi), gens.join(", "))
    }
}

/// The set `{M : ξ_M > ξ}` as per-row lower bounds.
struct Region {
    rupture: Vec<BigInt>,
    branch: Vec<(usize, u64)>,
}

impl Region {
    fn new(table: &ValuationTable, xi: &Rat, mode: Mode) -> Self {
        let rupture = table
            .rupture
            .iter()
            .map(|r| (xi * Rat::from_integer(table.curve_value(r)) - Rat::from_integer(r.lambda.clone())).floor().to_integer() + 1)
            .collect();
        let branch = match mode {
            Mode::Full => table
                .branches
                .iter()
                .zip(table.branch_indices())
                .map(|(b, k)| (k, (xi * rat_int(b.mult as i64)).floor().to_integer().to_u64().unwrap()))
                .collect(),
            Mode::Reduced => Vec::new(),
        };
        Region { rupture, branch }
    }

    fn contains(&self, table: &ValuationTable, m: &Monomial) -> bool {
        self.branch.iter().all(|(k, lo)| m.0[*k] >= *lo)
            && self.rupture.iter().enumerate().all(|(r, lo)| &nu(table, r, m) >= lo)
    }
}

/// Monomial generators of `J(ξC)`, minimal under divisibility.
pub fn ideal_presentation(table: &ValuationTable, xi: &Rat) -> Result<IdealPresentation> {
    let mode = if table.is_reduced() && xi < &rat_int(1) { Mode::Reduced } else { Mode::Full };
    ideal_presentation_with(table, xi, mode)
}

pub fn ideal_presentation_with(table: &ValuationTable, xi: &Rat, mode: Mode) -> Result<IdealPresentation> {
    if xi <= &Rat::zero() {
        return Err(Error::InvalidInput("ξ must be positive".into()));
    }
    if mode == Mode::Reduced && !(table.is_reduced() && xi < &rat_int(1)) {
        return Err(Error::InvalidInput("the reduced presentation needs a reduced curve and ξ < 1".into()));
    }
    let n = table.elements.len();
    let region = Region::new(table, xi, mode);
    let alphabet: Vec<usize> = (0..n).filter(|&k| mode == Mode::Full || !table.is_branch(k)).collect();
    let bounds: Vec<u64> = (0..n).map(|k| exponent_bound(table, k, xi)).collect();
    let mut found = Vec::new();
    let mut cur = Monomial::one(n);
    minimal_dfs(table, &region, &alphabet, &bounds, 0, &mut cur, &mut found);
    let mut minimal: Vec<Monomial> = found
        .into_iter()
        .filter(|m| {
            alphabet.iter().all(|&k| {
                if m.0[k] == 0 {
                    return true;
                }
                let mut d = m.clone();
                d.0[k] -= 1;
                !region.contains(table, &d)
            })
        })
        .collect();
    minimal.sort_by(|a, b| a.0.iter().rev().cmp(b.0.iter().rev()));
    minimal.dedup();
    let generators = minimal
        .into_iter()
        .map(|m| Generator {
            values: (0..table.rupture.len()).map(|r| nu(table, r, &m)).collect(),
            xi_m: xi_with(table, &m, mode).unwrap_or_else(|| rat_int(1)),
            monomial: m,
        })
        .collect();
    Ok(IdealPresentation {
        xi: xi.clone(),
        elements: table.elements.clone(),
        branches: table.branch_indices().into_iter().zip(table.branches.iter().map(|b| b.mult)).collect(),
        mode,
        generators,
    })
}

fn minimal_dfs(
    table: &ValuationTable,
    region: &Region,
    alphabet: &[usize],
    bounds: &[u64],
    pos: usize,
    cur: &mut Monomial,
    found: &mut Vec<Monomial>,
) {
    if pos == alphabet.len() {
        return;
    }
    let k = alphabet[pos];
    for e in 0..=bounds[k] {
        cur.0[k] = e;
        if region.contains(table, cur) {
            found.push(cur.clone());
            break;
        }
        minimal_dfs(table, region, alphabet, bounds, pos + 1, cur, found);
    }
    cur.0[k] = 0;
}

/// Multiplies every generator by `f_C^k`.
pub fn shift_by_period(pres: &IdealPresentation, k: u64) -> IdealPresentation {
    let mut out = pres.clone();
    if k == 0 {
        return out;
    }
    out.xi = &pres.xi + rat_int(k as i64);
    for g in &mut out.generators {
        for (idx, a) in &pres.branches {
            g.monomial.0[*idx] += k * a;
        }
        g.xi_m = &g.xi_m + rat_int(k as i64);
    }
    out.mode = Mode::Full;
    out
}

/// Membership of a formal monomial: `ξ < ξ_M`.
pub fn monomial_membership(table: &ValuationTable, m: &Monomial, xi: &Rat) -> Result<bool> {
    Ok(xi < &xi_of_monomial(table, m)?)
}

/// Membership from the values of `h` on the rupture rows and its order along each branch.
pub fn valuation_membership(table: &ValuationTable, rupture_values: &[BigInt], branch_orders: &[u64], xi: &Rat) -> Result<Option<String>> {
    if rupture_values.len() != table.rupture.len() || branch_orders.len() != table.branches.len() {
        return Err(Error::InvalidInput("valuation vector does not match the table".into()));
    }
    for (row, v) in table.rupture.iter().zip(rupture_values) {
        if Rat::from_integer(v + &row.lambda) <= xi * Rat::from_integer(table.curve_value(row)) {
            return Ok(Some(row.name.clone()));
        }
    }
    for (b, m) in table.branches.iter().zip(branch_orders) {
        if rat_int(*m as i64 + 1) <= xi * rat_int(b.mult as i64) {
            return Ok(Some(b.name.clone()));
        }
    }
    Ok(None)
}

/// Smallest `ε` with no candidate threshold strictly between `ξ − ε` and `ξ`.
pub fn separation_epsilon(table: &ValuationTable) -> Rat {
    let mut l = BigInt::from(1);
    for r in &table.rupture {
        l = l.lcm(&table.curve_value(r));
    }
    for b in &table.branches {
        l = l.lcm(&BigInt::from(b.mult));
    }
    Rat::new(BigInt::from(1), l * 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::tree::{BranchRow, RuptureRow};

    pub(crate) fn example_table() -> ValuationTable {
        let row = |n: &str, l: i64, v: [i64; 5]| RuptureRow {
            name: n.into(),
            lambda: l.into(),
            values: v.iter().map(|&x| BigInt::from(x)).collect(),
        };
        ValuationTable::new(
            ["x", "y", "z", "C1", "C2"].iter().map(|s| s.to_string()).collect(),
            vec![BranchRow { name: "C1".into(), mult: 1 }, BranchRow { name: "C2".into(), mult: 1 }],
            vec![row("R2", 5, [2, 3, 6, 12, 9]), row("R3", 8, [3, 5, 9, 18, 15]), row("R4", 13, [4, 6, 15, 30, 18])],
        )
        .unwrap()
    }

    fn mono(t: &ValuationTable, s: &[(&str, u64)]) -> Monomial {
        Monomial::from_named(t, &s.iter().map(|(n, e)| (n.to_string(), *e)).collect()).unwrap()
    }

    #[test]
    fn thresholds() {
        let t = example_table();
        assert_eq!(xi_of_monomial(&t, &Monomial::one(5)).unwrap(), rat(5, 21));
        assert_eq!(xi_of_monomial(&t, &mono(&t, &[("x", 1)])).unwrap(), rat(1, 3));
        assert_eq!(xi_of_monomial(&t, &mono(&t, &[("z", 1)])).unwrap(), rat(17, 33));
        assert_eq!(lct(&t), rat(5, 21));
        assert!(Monomial::from_named(&t, &[("q".to_string(), 1)].into_iter().collect()).is_err());
    }

    #[test]
    fn jumping_numbers_of_the_example() {
        let t = example_table();
        let j = jumping_numbers(&t, &rat(1, 1));
        assert_eq!(j.len(), 31);
        assert_eq!(&j[..3], &[rat(5, 21), rat(1, 3), rat(8, 21)]);
        assert_eq!(j[29], rat(47, 48));
        assert_eq!(j[30], rat(1, 1));
    }

    #[test]
    fn presentations() {
        let t = example_table();
        let p = ideal_presentation(&t, &rat(5, 21)).unwrap();
        assert_eq!(p.to_string(), "J(5/21 C) = (x, y, z)");
        let p = ideal_presentation(&t, &rat(2, 3)).unwrap();
        assert_eq!(p.to_string(), "J(2/3 C) = (x^5, x^4*y, x^2*y^2, x*y^3, y^4, x^2*z, x*y*z, y^2*z, z^2)");
        let p = ideal_presentation(&t, &rat(1, 5)).unwrap();
        assert_eq!(p.to_string(), "J(1/5 C) = (1)");
        for g in &p.generators {
            assert!(g.xi_m > p.xi);
        }
    }

    #[test]
    fn periodicity() {
        let t = example_table();
        let p = ideal_presentation_with(&t, &rat(5, 21), Mode::Full).unwrap();
        let q = ideal_presentation(&t, &rat(26, 21)).unwrap();
        let s = shift_by_period(&p, 1);
        assert!(s.same_ideal(&q));
        assert_eq!(s.xi, rat(26, 21));
        assert_eq!(shift_by_period(&p, 0), p);
    }

    #[test]
    fn membership_by_values() {
        let t = example_table();
        let zv = vec![BigInt::from(6), BigInt::from(9), BigInt::from(15)];
        assert_eq!(valuation_membership(&t, &zv, &[0, 0], &rat(10, 21)).unwrap(), None);
        assert_eq!(valuation_membership(&t, &zv, &[0, 0], &rat(17, 33)).unwrap(), Some("R3".into()));
        assert!(monomial_membership(&t, &mono(&t, &[("z", 1)]), &rat(10, 21)).unwrap());
        assert!(monomial_membership(&t, &mono(&t, &[("C1", 1), ("C2", 1)]), &rat(1, 1)).unwrap());
        assert!(!monomial_membership(&t, &mono(&t, &[("C1", 1)]), &rat(1, 1)).unwrap());
    }
}
