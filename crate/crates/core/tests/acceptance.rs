mod common;

use std::time::Instant;

use common::*;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torres_core::lattice::{charts, det2, regularize_cone, regularize_fan};
use torres_core::multiplier::{Monomial, ideal_presentation, ideal_presentation_with, jumping_numbers, monomial_membership, shift_by_period, Mode};
use torres_core::newton::{minkowski, newton_fan, polygon_from_support, support_eval};
use torres_core::oracles::{blowup_resolve, howald_jumping_numbers, resultant_intersection};
use torres_core::rat::{fmt_rat, rat, rat_int, Rat, Slope};
use torres_core::resolution::resolve;
use torres_core::tree::TreePoint;
use torres_core::{BiPoly, LatticeVec};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn valuation_table() -> Check {
    let a = example();
    let t = &a.table;
    ensure(t.elements == ["x", "y", "z", "C1", "C2"], || format!("elements {:?}", t.elements))?;
    let want: [(&str, i64, [i64; 6]); 3] = [
        ("R2", 5, [2, 3, 6, 12, 9, 21]),
        ("R3", 8, [3, 5, 9, 18, 15, 33]),
        ("R4", 13, [4, 6, 15, 30, 18, 48]),
    ];
    ensure(t.rupture.len() == 3, || format!("{} rupture rows", t.rupture.len()))?;
    let mut entries = 0;
    for (row, (name, lambda, vals)) in t.rupture.iter().zip(want) {
        ensure(row.name == name, || format!("row {} where {name} expected", row.name))?;
        ensure(row.lambda == lambda.into(), || format!("λ of {name} is {}", row.lambda))?;
        let mut got = row.values.clone();
        got.push(t.curve_value(row));
        for (g, w) in got.iter().zip(vals) {
            ensure(*g == w.into(), || format!("{name}: {got:?} vs {vals:?}"))?;
            entries += 1;
        }
    }
    Ok(format!("{entries} entries, λ = (5, 8, 13)"))
}

fn jumping() -> Check {
    let a = example();
    let got: Vec<Rat> = jumping_numbers(&a.table, &rat(1, 1)).into_iter().filter(|x| x < &rat(1, 1)).collect();
    let want: Vec<Rat> = LISTED_IDEALS.iter().map(|(x, _)| r(x)).collect();
    ensure(got == want, || {
        format!("got {}", got.iter().map(fmt_rat).collect::<Vec<_>>().join(", "))
    })?;
    Ok(format!("{} jumping numbers in (0,1)", got.len()))
}

fn ideals() -> Check {
    let a = example();
    let t = &a.table;
    let mut listed = 0;
    let mut exact = 0;
    let mut via_z = Vec::new();
    let z = t.element_index("z").unwrap();
    let lifts: Vec<BiPoly> = ["x", "y", "z"].iter().map(|e| a.element_poly(e)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    for (xs, gens) in LISTED_IDEALS {
        let xi = r(xs);
        let pres = ideal_presentation(t, &xi).map_err(|e| e.to_string())?;
        let expected: Vec<_> = gens.split(',').map(|g| monomial(t, g)).collect();
        for (g, m) in gens.split(',').zip(&expected) {
            ensure(monomial_membership(t, m, &xi).unwrap(), || format!("{g} not in J({xs} C) by the table"))?;
            let h = (0..3).fold(BiPoly::one(), |acc, k| acc.mul(&lifts[k].pow(m.0[k])));
            let mem = a.resolution.membership(&h, &xi).map_err(|e| e.to_string())?;
            ensure(mem.member, || format!("{g} not in J({xs} C), witness {:?}", mem.witness))?;
            listed += 1;
        }
        for m in &expected {
            ensure(pres.contains(m), || format!("{} missing from {pres}", m.display(&t.elements)))?;
        }
        let covered = |m: &Monomial| expected.iter().any(|p| p.divides(m));
        let mut formal = true;
        for g in &pres.generators {
            if covered(&g.monomial) {
                continue;
            }
            formal = false;
            // z = y² + x³: one substitution must land every term in the listed ideal
            let mut m = g.monomial.clone();
            ensure(m.0[z] > 0, || format!("{} in {pres} is not generated by the listed monomials", g.monomial.display(&t.elements)))?;
            m.0[z] -= 1;
            let terms = [monomial(t, "y^2"), monomial(t, "x^3")];
            let ok = terms.iter().all(|e| covered(&Monomial(m.0.iter().zip(&e.0).map(|(a, b)| a + b).collect())));
            ensure(ok, || format!("{} in {pres} is not in the listed ideal", g.monomial.display(&t.elements)))?;
        }
        if formal {
            exact += 1;
        } else {
            via_z.push(xs);
        }
    }
    Ok(format!(
        "{listed} listed monomials are members; {exact} ideals equal formally, {} equal after expanding z ({})",
        via_z.len(),
        via_z.join(" ")
    ))
}

fn lambda_forms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut curves = vec![example().resolution];
    let mut tries = 0;
    while curves.len() < 21 {
        tries += 1;
        if tries > 2000 {
            return Err("could not draw 20 curves".into());
        }
        let Some(c) = random_curve(&mut rng) else { continue };
        if let Ok(res) = resolve(&c, None) {
            if res.tree.nodes.iter().any(|n| !n.marked.is_empty()) {
                curves.push(res);
            }
        }
    }
    let mut points = 0;
    for res in &curves {
        let t = &res.tree;
        for n in &t.nodes {
            if n.terminal {
                continue;
            }
            let mut slopes: Vec<Rat> = n.marked.iter().map(|m| m.slope.clone()).collect();
            slopes.extend([rat(1, 2), rat(1, 1), rat(4, 3), rat(7, 2)]);
            for s in slopes {
                let p = TreePoint::new(n.id, Slope::Finite(s.clone()));
                let a = t.log_discrepancy_index_form(&p).map_err(|e| e.to_string())?;
                let b = t.log_discrepancy_propagated(&p).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("node {} slope {}: {a} vs {b}", n.id, fmt_rat(&s)))?;
                points += 1;
            }
        }
        for (m, l) in res.ledger.iter().zip(&t.nodes) {
            ensure(m.lambda_r == t.lambda_r(l.id), || format!("λ_R of node {} disagrees with the ledger", l.id))?;
        }
    }
    Ok(format!("{} curves, {points} points", curves.len()))
}

fn howald() -> Check {
    let mut out = Vec::new();
    for (p, q) in [(2, 3), (3, 4), (2, 5), (3, 5)] {
        let f = format!("x^{p} + y^{q}");
        let a = analysis_of(&[&f]);
        let ours: Vec<Rat> = jumping_numbers(&a.table, &rat(1, 1)).into_iter().filter(|x| x < &rat(1, 1)).collect();
        let theirs = howald_jumping_numbers(&poly(&f), &rat(1, 1)).map_err(|e| e.to_string())?;
        let mut brute: Vec<Rat> = Vec::new();
        for i in 1..=12i64 {
            for j in 1..=12i64 {
                let x = rat_int(i) / rat_int(p) + rat_int(j) / rat_int(q);
                if x < rat(1, 1) && !brute.contains(&x) {
                    brute.push(x);
                }
            }
        }
        brute.sort();
        ensure(ours == theirs && ours == brute, || format!("({p},{q}): {ours:?} vs {theirs:?} vs {brute:?}"))?;
        out.push(format!("({p},{q}):{}", ours.len()));
    }
    ensure(
        howald_jumping_numbers(&poly("x^3+y^4"), &rat(1, 1)).unwrap() == vec![rat(7, 12), rat(5, 6), rat(11, 12)],
        || "(3,4) example".into(),
    )?;
    Ok(out.join(" "))
}

fn blowup() -> Check {
    let eps = rat(1, 1000);
    let mut decisions = 0;
    for polys in [vec![F1, F2], vec!["y^2+x^3"]] {
        let a = analysis_of(&polys);
        let chain = blowup_resolve(&a.resolution.curve).map_err(|e| e.to_string())?;
        let mut hs: Vec<(String, BiPoly)> = Vec::new();
        for i in 0..=6u64 {
            for j in 0..=6u64 {
                hs.push((format!("x^{i}y^{j}"), BiPoly::monomial(rat(1, 1), i, j)));
            }
        }
        for (n, s) in [("z", "y^2+x^3"), ("f1", F1), ("f2", F2)] {
            hs.push((n.into(), poly(s)));
        }
        let mut grid = Vec::new();
        let two = rat(2, 1);
        let rows: Vec<(BigInt, BigInt)> = a
            .table
            .rupture
            .iter()
            .map(|row| (row.lambda.clone(), a.table.curve_value(row)))
            .chain(a.table.branches.iter().map(|b| (BigInt::from(1), BigInt::from(b.mult))))
            .collect();
        for (lambda, nc) in rows {
            let mut k = BigInt::from(0);
            loop {
                let c = Rat::new(&k + &lambda, nc.clone());
                if c > two {
                    break;
                }
                grid.push(&c - &eps);
                grid.push(&c + &eps);
                k += 1;
            }
        }
        grid.sort();
        grid.dedup();
        for (name, h) in &hs {
            let fan = a.resolution.probe(h).map_err(|e| e.to_string())?;
            let blow = chain.probe(h).map_err(|e| e.to_string())?;
            for xi in &grid {
                let (x, y) = (fan.test(xi).member, blow.test(xi));
                ensure(x == y, || format!("{polys:?}: h = {name}, ξ = {}: fan {x}, blowup {y}", fmt_rat(xi)))?;
                decisions += 1;
            }
        }
    }
    Ok(format!("{decisions} decisions agree"))
}

fn periodicity() -> Check {
    let a = example();
    let t = &a.table;
    let list = jumping_numbers(t, &rat(2, 1));
    let mut checked = 0;
    for xi in list.iter().filter(|x| *x <= &rat(1, 1)) {
        let next = xi + rat(1, 1);
        ensure(list.contains(&next), || format!("{} missing", fmt_rat(&next)))?;
        let base = ideal_presentation_with(t, xi, Mode::Full).map_err(|e| e.to_string())?;
        let shifted = shift_by_period(&base, 1);
        let direct = ideal_presentation(t, &next).map_err(|e| e.to_string())?;
        ensure(shifted.same_ideal(&direct), || format!("{direct} vs {shifted}"))?;
        if xi < &rat(1, 1) {
            let pres = ideal_presentation(t, xi).map_err(|e| e.to_string())?;
            for g in &pres.generators {
                ensure(base.contains(&g.monomial), || format!("{} lost at {}", g.monomial.display(&t.elements), fmt_rat(xi)))?;
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} jumping numbers ≤ 1 shifted"))
}

fn geometry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let c = random_cone(&mut rng, 30);
        let got = regularize_cone(&c);
        let want = hull_oracle(&c);
        ensure(got == want, || format!("cone {} {}: {got:?} vs {want:?}", c.u, c.v))?;
        let mut prev = c.u.clone();
        for w in got.iter().chain([&c.v]) {
            ensure(det2(&prev, w) == BigInt::from(1), || format!("cone {} {} not unimodular", c.u, c.v))?;
            prev = w.clone();
        }
    }
    let random_polygon = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(1..=6);
        polygon_from_support((0..n).map(|_| (BigInt::from(rng.gen_range(0..=12)), BigInt::from(rng.gen_range(0..=12))))).unwrap()
    };
    let mut dets = 0;
    for _ in 0..200 {
        let p = random_polygon(&mut rng);
        let q = random_polygon(&mut rng);
        let s = minkowski(&p, &q);
        let mut rays: Vec<LatticeVec> = newton_fan(&s).rays;
        rays.extend((0..5).map(|_| primitive_in_box(&mut rng, 20)));
        for v in rays {
            let lhs = support_eval(&s, &v).unwrap();
            let rhs = support_eval(&p, &v).unwrap() + support_eval(&q, &v).unwrap();
            ensure(lhs == rhs, || format!("Φ additivity fails at {v}"))?;
        }
        for ch in charts(&regularize_fan(&newton_fan(&s))).map_err(|e| e.to_string())? {
            ensure(ch.det() == BigInt::from(1) || ch.det() == BigInt::from(-1), || "chart determinant".into())?;
            dets += 1;
        }
    }
    Ok(format!("1000 cones, 200 Minkowski pairs, {dets} charts"))
}

fn intersections() -> Check {
    let a = example();
    let res = &a.resolution;
    let labels = ["R1", "L1", "L2", "C1", "C2"];
    let polys: Vec<BiPoly> = labels.iter().map(|l| res.lift_curvetta(l)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut pairs = 0;
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            let tree = res.tree.intersection_of_labels(labels[i], labels[j]).map_err(|e| e.to_string())?;
            let resu = resultant_intersection(&polys[i], &polys[j]).map_err(|e| e.to_string())?;
            ensure(tree == BigInt::from(resu), || format!("({}·{}): tree {tree}, resultant {resu}", labels[i], labels[j]))?;
            pairs += 1;
        }
    }
    let c12 = res.tree.intersection_of_labels("C1", "C2").unwrap();
    ensure(c12 == BigInt::from(18), || format!("(C1·C2) = {c12}"))?;
    Ok(format!("{pairs} pairs, (C1·C2) = 18"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("valuation table reproduction", valuation_table),
        ("jumping numbers below one", jumping),
        ("ideal presentations", ideals),
        ("log-discrepancy forms agree", lambda_forms),
        ("Howald oracle equivalence", howald),
        ("blowup oracle equivalence", blowup),
        ("periodicity", periodicity),
        ("geometry properties", geometry),
        ("tripods and intersections", intersections),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok(msg) => println!("criterion {}: PASS  {name} ({msg}) [{:.2?}]", k + 1, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.2?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
