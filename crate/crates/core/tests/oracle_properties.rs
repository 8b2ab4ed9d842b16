mod common;

use common::{poly, r, random_branch};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torres_core::json::analyze;
use torres_core::multiplier::separation_epsilon;
use torres_core::oracles::{
    blowup_membership, blowup_resolve, howald_jumping_numbers, is_newton_nondegenerate, resultant_intersection,
};
use torres_core::resolution::resolve;
use torres_core::{jumping_numbers, BiPoly, Curve, Rat};

fn curve_from_seed(seed: u64, allow_mult: bool) -> Option<Curve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let polys: Vec<(BiPoly, u64)> = (0..n)
        .map(|_| {
            let a = if allow_mult && rng.gen_bool(0.3) { 2 } else { 1 };
            (poly(&random_branch(&mut rng)), a)
        })
        .collect();
    Curve::from_polys(polys).ok()
}

fn sorted(mut v: Vec<(BigInt, BigInt)>) -> Vec<(BigInt, BigInt)> {
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn blowup_rupture_rows_appear_in_table(seed in any::<u64>()) {
        let Some(c) = curve_from_seed(seed, true) else { return Ok(()) };
        let (Ok(res), Ok(chain)) = (resolve(&c, None), blowup_resolve(&c)) else { return Ok(()) };
        let table = res.valuation_table(&res.element_names()).unwrap();
        let rows = sorted(table.rupture.iter().map(|row| (row.lambda.clone(), table.curve_value(row))).collect());
        // the toric resolution need not be minimal, so the table may carry extra rows
        for d in sorted(chain.rupture_data()) {
            prop_assert!(rows.contains(&d), "rupture divisor {:?} missing from the table {:?}", d, rows);
        }
    }

    #[test]
    fn membership_matches_blowups(seed in any::<u64>()) {
        let Some(c) = curve_from_seed(seed, true) else { return Ok(()) };
        let (Ok(res), Ok(chain)) = (resolve(&c, None), blowup_resolve(&c)) else { return Ok(()) };
        let table = res.valuation_table(&res.element_names()).unwrap();
        let eps = separation_epsilon(&table);
        let mut xis: Vec<Rat> = Vec::new();
        for j in jumping_numbers(&table, &r("3/2")) {
            xis.push(&j - &eps);
            xis.push(j.clone());
            xis.push(&j + &eps);
        }
        let mut hs: Vec<BiPoly> = (0..=3).flat_map(|a| (0..=3).map(move |b| poly(&format!("x^{a}*y^{b}")))).collect();
        hs.extend(c.factors.iter().map(|f| f.poly.clone()));
        for h in &hs {
            let probe = res.probe(h).unwrap();
            for xi in &xis {
                let fan = probe.test(xi).member;
                let blow = blowup_membership(&chain, h, xi).unwrap();
                prop_assert_eq!(fan, blow, "h = {}, ξ = {}", h, xi);
            }
        }
    }

    #[test]
    fn intersections_match_resultants(seed in any::<u64>()) {
        let Some(c) = curve_from_seed(seed, false) else { return Ok(()) };
        if c.factors.len() < 2 {
            return Ok(());
        }
        let Ok(res) = resolve(&c, None) else { return Ok(()) };
        for i in 0..c.factors.len() {
            for j in i + 1..c.factors.len() {
                let (a, b) = (&c.factors[i], &c.factors[j]);
                // ends of a factor that splits into conjugate branches are summed
                let ends = |name: &str| -> Vec<String> {
                    res.tree.ends().into_iter().map(|(l, _)| l).filter(|l| l == name || l.starts_with(&format!("{name}#"))).collect()
                };
                let mut tree = BigInt::from(0);
                for ea in ends(&a.name) {
                    for eb in ends(&b.name) {
                        tree += res.tree.intersection_of_labels(&ea, &eb).unwrap();
                    }
                }
                let resu = resultant_intersection(&a.poly, &b.poly).unwrap();
                prop_assert_eq!(tree, BigInt::from(resu), "{} · {}", a.poly, b.poly);
            }
        }
    }
}

#[test]
fn howald_matches_pipeline_on_nondegenerate_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 25 {
        let n = rng.gen_range(1..=3);
        let factors: Vec<String> = (0..n)
            .map(|_| {
                let (p, q) = (rng.gen_range(1..=6), rng.gen_range(1..=5));
                let c = rng.gen_range(1..=4);
                format!("(y^{q} + {c}*x^{p})")
            })
            .collect();
        let f = poly(&factors.join("*"));
        let Ok(c) = Curve::from_polys(factors.iter().map(|s| (poly(s), 1)).collect()) else { continue };
        if !is_newton_nondegenerate(&f).unwrap_or(false) {
            continue;
        }
        let Ok(doc_res) = analyze(&torres_core::json::CurveDoc {
            schema: None,
            factors: c
                .factors
                .iter()
                .map(|fa| torres_core::json::FactorDoc {
                    name: Some(fa.name.clone()),
                    poly: torres_core::json::PolyInput::Terms(fa.poly.clone()),
                    mult: 1,
                })
                .collect(),
            first_l: None,
            names: Default::default(),
        }) else {
            continue;
        };
        let one = r("1");
        let pipeline: Vec<Rat> = jumping_numbers(&doc_res.table, &one).into_iter().filter(|j| j < &one).collect();
        let howald = howald_jumping_numbers(&f, &one).unwrap();
        assert_eq!(pipeline, howald, "f = {f}");
        checked += 1;
    }
}
