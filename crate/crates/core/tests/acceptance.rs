//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use restrep::algebra::Morphism;
use restrep::heisenberg::{build_scenario, cgm_check, rank_table, tau_sum_closed_form, twist_automorphism};
use restrep::hom::{fingerprint, free_rank, iso_test};
use restrep::hopf::{Comultiplication, WANG_STRUCTURES};
use restrep::klein::{basev, check_basev_formula, check_pb_witness, hom_table, random_automorphism, system_invertible};
use restrep::module::block_tensor_table;
use restrep::pipoint::{nobility, point_module, projective_points, support, Nobility, PointFamily};
use restrep::wild::{wild_abelian_isotropy_check, WildCase};
use restrep::{invert_morphism, Algebra, Field, Matrix, Representation};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_klein_formula() -> Outcome {
    let a = common::klein(2, 2);
    let mut checked = 0;
    let mut failures = Vec::new();
    for s in WANG_STRUCTURES {
        let d = Comultiplication::named(&a, s).map_err(|e| e.to_string())?;
        for pt in projective_points(a.field(), 2) {
            if nobility(s, a.field(), &pt).unwrap() != Nobility::Noble {
                continue;
            }
            for n in 1..=4 {
                for m in 1..=4 {
                    let r = check_basev_formula(&d, &pt, n, m).map_err(|e| e.to_string())?;
                    checked += 1;
                    if !r.matches {
                        failures.push(format!("{s} {} n={n} m={m}: expected {} got {}", r.point, r.expected, r.computed));
                    }
                }
            }
        }
    }
    check(failures.is_empty(), if failures.is_empty() { format!("{checked} products match") } else { failures.join("; ") })
}

fn c2_free_rank() -> Outcome {
    let a = common::klein(2, 2);
    let mut checked = 0;
    let mut failures = Vec::new();
    for s in WANG_STRUCTURES {
        let d = Comultiplication::named(&a, s).unwrap();
        for pt in projective_points(a.field(), 2) {
            for n in 1..=4 {
                for m in 1..=4 {
                    let prod = basev(&a, &pt, n).unwrap().rep.tensor(&basev(&a, &pt, m).unwrap().rep, &d).unwrap();
                    let c = free_rank(&prod).unwrap();
                    checked += 1;
                    if c != n * m - n.min(m) {
                        failures.push(format!("{s} {pt:?} n={n} m={m}: free rank {c}"));
                    }
                }
            }
        }
    }
    check(failures.is_empty(), if failures.is_empty() { format!("{checked} free ranks match") } else { failures.join("; ") })
}

fn c3_pb_witnesses() -> Outcome {
    let a = common::klein(2, 2);
    let mut certified = 0;
    let mut failures = Vec::new();
    for s in WANG_STRUCTURES {
        let d = Comultiplication::named(&a, s).unwrap();
        for pt in projective_points(a.field(), 2) {
            if nobility(s, a.field(), &pt).unwrap() == Nobility::Noble {
                continue;
            }
            let w = check_pb_witness(&d, &pt).map_err(|e| e.to_string())?;
            if w.certified {
                certified += 1;
            } else {
                failures.push(format!("{s} {}", w.point));
            }
        }
    }
    check(
        failures.is_empty() && certified > 0,
        if failures.is_empty() { format!("{certified} ignoble points certified") } else { format!("uncertified: {}", failures.join(", ")) },
    )
}

fn c4_twodim() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for p in [3, 5, 7] {
        let c = wild_abelian_isotropy_check(WildCase::TwoDim { p }).map_err(|e| e.to_string())?;
        let t = c.twodim.as_ref().unwrap();
        ok &= c.passes();
        details.push(format!(
            "p={p}: M⊗M≅pM {}, max part {} (want {}), square has J{p} {}, pM^φ⁻¹ has J{p} {}",
            t.square_is_multiple, t.max_part, t.expected_max_part, t.square_has_full_part, t.multiple_has_full_part
        ));
    }
    check(ok, details.join("; "))
}

fn c5_heisenberg_tables() -> Outcome {
    let mut mismatches = Vec::new();
    let mut sums = Vec::new();
    for p in [3u32, 5, 7] {
        let rows = rank_table(p).map_err(|e| e.to_string())?;
        for r in &rows {
            let mm = r.mismatches();
            if !mm.is_empty() {
                mismatches.push(format!(
                    "p={p} r={}: {} (rank² {} vs {:?}, τ {} vs {:?})",
                    r.r,
                    mm.join("+"),
                    r.rank_square,
                    r.rank_square_expected,
                    r.tau,
                    r.tau_expected
                ));
            }
        }
        let two_sum: usize = 2 * rows.iter().filter(|r| r.r >= 2 && r.r < p as usize).map(|r| r.tau).sum::<usize>();
        let want = tau_sum_closed_form(p as usize);
        let other = 9 + 4 * (p as i64 - 3);
        let cgm = cgm_check(p).map_err(|e| e.to_string())?;
        sums.push(format!(
            "p={p}: 2Στ={two_sum} (closed form {want}), L1⊗L1 J1 count {} (≠ right side: {})",
            cgm.left, cgm.unequal
        ));
        if two_sum as i64 != want || two_sum as i64 == other {
            mismatches.push(format!("p={p} sum {two_sum} vs {want}"));
        }
    }
    check(mismatches.is_empty(), format!("{}; mismatches: [{}]", sums.join(", "), mismatches.join("; ")))
}

fn c6_cross_validation() -> Outcome {
    let mut n = 0;
    for p in [3u32, 5, 7] {
        for r in 1..=p as usize {
            build_scenario(p, r).map_err(|e| format!("p={p} r={r}: {e}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} (p,r) pairs agree entrywise"))
}

fn c7_witt() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (p, r) in [(2u32, 1u32), (3, 1), (5, 1), (2, 2), (3, 2)] {
        let f = Field::prime(p).unwrap();
        let b = (p as usize).pow(r);
        let a = Algebra::truncated_polynomial(&f, &[b]).unwrap();
        let names: &[&str] = if r == 1 { &["lie_primitive", "oorttate_Zp"] } else { &["lie_primitive", "witt_G2", "witt_Zp2"] };
        let tables: Vec<_> = names
            .iter()
            .map(|n| block_tensor_table(&Comultiplication::named(&a, n).unwrap()).unwrap())
            .collect();
        let agree = tables.windows(2).all(|w| w[0] == w[1]);
        ok &= agree;
        details.push(format!("({p},{r}) {} structures on {} products: {}", names.len(), b * b, if agree { "agree" } else { "DIFFER" }));
    }
    check(ok, details.join("; "))
}

fn c8_support_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut samples = 0;
    let mut failures = Vec::new();
    for (p, e) in [(2u32, 2u32), (3, 1)] {
        let a = common::klein(p, e);
        let fam = PointFamily::projective(&a, e).unwrap();
        let structures: Vec<Comultiplication> = WANG_STRUCTURES.iter().map(|s| Comultiplication::named(&a, s).unwrap()).collect();
        let sup = |m: &Representation| -> BTreeSet<usize> { support(m, &fam).unwrap().indices.into_iter().collect() };
        for (i, pt) in fam.points.iter().enumerate() {
            let v = point_module(pt).unwrap();
            if sup(&v) != BTreeSet::from([i]) {
                failures.push(format!("support of V({}) ≠ point", pt.label()));
            }
        }
        for _ in 0..100 {
            samples += 1;
            let max = (p * p) as usize;
            let m = common::random_module(&a, max, &mut rng);
            let n = common::random_module(&a, max, &mut rng);
            let free = Representation::free(&a, rng.gen_range(1..3));
            if !sup(&free).is_empty() {
                failures.push("free module with nonempty support".into());
            }
            let (sm, sn) = (sup(&m), sup(&n));
            let union: BTreeSet<usize> = sm.union(&sn).copied().collect();
            if sup(&m.direct_sum(&n).unwrap()) != union {
                failures.push(format!("p={p}: ⊕ not union"));
            }
            let inter: BTreeSet<usize> = sm.intersection(&sn).copied().collect();
            for d in &structures {
                if sup(&m.tensor(&n, d).unwrap()) != inter {
                    failures.push(format!("p={p}: ⊗ under {} not intersection", d.name()));
                }
            }
        }
    }
    check(failures.is_empty(), if failures.is_empty() { format!("{samples} random module pairs") } else { failures.join("; ") })
}

fn c9_wild() -> Outcome {
    let cases = [
        WildCase::Klein3Gen,
        WildCase::Equal2Power { n: 2 },
        WildCase::Equal2Power { n: 3 },
        WildCase::Mixed { p: 2, n: 1, m: 2 },
        WildCase::Mixed { p: 3, n: 1, m: 2 },
        WildCase::Mixed { p: 2, n: 2, m: 3 },
        WildCase::TwoDim { p: 3 },
    ];
    let mut details = Vec::new();
    let mut ok = true;
    for case in cases {
        let c = wild_abelian_isotropy_check(case).map_err(|e| format!("{case}: {e}"))?;
        let mut pass = c.passes();
        if case == WildCase::Klein3Gen {
            pass &= c.restriction.contains("J2");
        }
        if case == (WildCase::Equal2Power { n: 2 }) {
            pass &= c.restriction == "2J2";
        }
        ok &= pass;
        details.push(format!("{case}: {} {}", c.restriction, if pass { "ok" } else { "FAIL" }));
    }
    check(ok, details.join("; "))
}

fn named_automorphisms() -> Vec<Morphism> {
    let mut out = Vec::new();
    for p in [3u32, 5] {
        let h = Algebra::heisenberg(&Field::prime(p).unwrap(), 1).unwrap();
        out.push(twist_automorphism(&h).unwrap());
    }
    for p in [3u32, 5, 7] {
        let a = common::klein(p, 1);
        let x2 = a.pow(&a.gen(0), 2);
        out.push(Morphism::from_substitutions(&a, &[(1, a.add(&a.gen(1), &x2))]).unwrap());
    }
    let f2 = Field::prime(2).unwrap();
    let k3 = Algebra::truncated_polynomial(&f2, &[2, 2, 2]).unwrap();
    let yz = k3.mul(&k3.gen(1), &k3.gen(2));
    out.push(Morphism::from_substitutions(&k3, &[(0, k3.add(&k3.gen(0), &yz))]).unwrap());
    let e2 = Algebra::truncated_polynomial(&f2, &[4, 4]).unwrap();
    for k in [2, 3] {
        let yk = e2.pow(&e2.gen(1), k);
        out.push(Morphism::from_substitutions(&e2, &[(0, e2.add(&e2.gen(0), &yk))]).unwrap());
    }
    let a4 = common::klein(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..5 {
        out.push(random_automorphism(&a4, &mut rng));
    }
    out
}

fn c10_infrastructure() -> Outcome {
    let mut notes = Vec::new();
    // Hopf axioms for every named structure
    let mut verified = 0;
    for p in [2u32, 3] {
        let a = common::klein(p, 1);
        for s in WANG_STRUCTURES {
            Comultiplication::named(&a, s).and_then(|d| d.verify()).map_err(|e| format!("{s} p={p}: {e}"))?;
            verified += 1;
        }
    }
    for p in [2u32, 3, 5] {
        let f = Field::prime(p).unwrap();
        let c1 = Algebra::truncated_polynomial(&f, &[p as usize]).unwrap();
        Comultiplication::named(&c1, "oorttate_Zp").and_then(|d| d.verify()).map_err(|e| e.to_string())?;
        let c2 = Algebra::truncated_polynomial(&f, &[(p * p) as usize]).unwrap();
        for s in ["witt_G2", "witt_Zp2"] {
            Comultiplication::named(&c2, s).and_then(|d| d.verify()).map_err(|e| format!("{s} p={p}: {e}"))?;
        }
        verified += 3;
    }
    let h = Algebra::heisenberg(&Field::prime(3).unwrap(), 1).unwrap();
    Comultiplication::named(&h, "heisenberg_primitive").and_then(|d| d.verify()).map_err(|e| e.to_string())?;
    verified += 1;
    notes.push(format!("{verified} structures verified"));

    // inversion round trips
    let autos = named_automorphisms();
    for phi in &autos {
        let inv = invert_morphism(phi).map_err(|e| e.to_string())?;
        if !phi.compose(&inv).unwrap().is_identity() || !inv.compose(phi).unwrap().is_identity() {
            return Err(format!("inverse of {} does not round-trip", phi.describe()));
        }
    }
    notes.push(format!("{} automorphisms invert", autos.len()));

    // iso oracle on conjugates and on distinct fingerprints
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut false_pos = 0;
    for i in 0..100u64 {
        let (p, e) = if i % 2 == 0 { (2, 2) } else { (3, 1) };
        let a = common::klein(p, e);
        let m = common::random_module(&a, 9, &mut rng);
        let sigma = Matrix::random_invertible(a.field(), m.dim(), &mut rng);
        let c = m.conjugate(&sigma).unwrap();
        if !iso_test(&m, &c, 20, None, i).unwrap().is_isomorphic() {
            return Err(format!("conjugate {i} not certified isomorphic"));
        }
        let n = common::random_module(&a, 9, &mut rng);
        if n.dim() == m.dim() && fingerprint(&n).unwrap() != fingerprint(&m).unwrap() && iso_test(&m, &n, 20, None, i).unwrap().is_isomorphic() {
            false_pos += 1;
        }
    }
    if false_pos > 0 {
        return Err(format!("{false_pos} false positives"));
    }
    notes.push("100 conjugations certified".into());

    // Hom system for decomposition
    let a = common::klein(2, 2);
    for pt in projective_points(a.field(), 2) {
        let t = hom_table(&a, &pt, 8).map_err(|e| e.to_string())?;
        if !system_invertible(&t) {
            return Err(format!("Hom system singular at {}", t.point));
        }
    }
    let t = hom_table(&a, &[0, 1], 8).unwrap();
    notes.push(format!("H invertible to cap 8; H at [0:1] = {:?}, h = {:?}", t.h, t.free));
    Ok(notes.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 Klein tensor formula at noble points", c1_klein_formula),
        ("2 projective component", c2_free_rank),
        ("3 ignoble-point witnesses", c3_pb_witnesses),
        ("4 two-dimensional counterexample", c4_twodim),
        ("5 Heisenberg rank and tau tables", c5_heisenberg_tables),
        ("6 explicit vs induced matrices", c6_cross_validation),
        ("7 Witt Green rings", c7_witt),
        ("8 support axioms", c8_support_axioms),
        ("9 wild abelian isotropies", c9_wild),
        ("10 infrastructure", c10_infrastructure),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {name}: PASS ({secs:.2}s) {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {name}: FAIL ({secs:.2}s) {d}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
