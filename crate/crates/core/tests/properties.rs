mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use restrep::hom::iso_test;
use restrep::hopf::WANG_STRUCTURES;
use restrep::klein::{basev, decompose, random_automorphism, rebuild, MultiplicityVector};
use restrep::pipoint::{nobility, nobility_of, projective_points, support, Nobility, PointFamily};
use restrep::{invert_morphism, Comultiplication, Field, Matrix, Representation};

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2u32, 1u32), (2, 2), (3, 1), (5, 1), (3, 2)]).prop_map(|(p, e)| Field::new(p, e).unwrap())
}

/// Multiplicity vectors with Σ 2n·aₙ + 4c ≤ 40.
fn multiplicities() -> impl Strategy<Value = MultiplicityVector> {
    (prop::collection::vec(0usize..3, 0..5), 0usize..4)
        .prop_filter("nonzero", |(a, c)| a.iter().any(|&k| k > 0) || *c > 0)
        .prop_map(|(a, c)| MultiplicityVector { a, c })
        .prop_filter("dimension at most 40", |mv| mv.dim() <= 40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_of_product_is_bounded(f in field(), r in 1usize..7, k in 1usize..7, c in 1usize..7, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Matrix::random(&f, r, k, &mut rng);
        let b = Matrix::random(&f, k, c, &mut rng);
        let ab = a.mul(&b).unwrap();
        prop_assert!(ab.rank() <= a.rank().min(b.rank()));
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn jordan_type_survives_conjugation(f in field(), parts in prop::collection::vec(1usize..5, 1..4), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blocks: Vec<Matrix> = parts.iter().map(|&s| Matrix::nilpotent_block(&f, s)).collect();
        let n = Matrix::block_diag(&f, &blocks);
        let sigma = Matrix::random_invertible(&f, n.rows(), &mut rng);
        let conj = sigma.mul(&n).unwrap().mul(&sigma.inverse().unwrap()).unwrap();
        prop_assert_eq!(conj.nilpotent_jordan_type().unwrap(), n.nilpotent_jordan_type().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decompose_inverts_rebuild(mv in multiplicities(), pt in 0usize..5, seed: u64) {
        let a = common::klein(2, 2);
        let point = projective_points(a.field(), 2)[pt].clone();
        let m = rebuild(&a, &point, &mv).unwrap();
        // scramble the basis so decompose cannot read off the block structure
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = Matrix::random_invertible(a.field(), m.dim(), &mut rng);
        let got = decompose(&m.conjugate(&sigma).unwrap(), &point).unwrap();
        for n in 1..=mv.a.len().max(got.a.len()) {
            prop_assert_eq!(got.get(n), mv.get(n), "a_{} of {}", n, mv);
        }
        prop_assert_eq!(got.c, mv.c);
    }

    #[test]
    fn automorphisms_invert(seed: u64, e in 1u32..3) {
        let a = common::klein(2, e);
        let phi = random_automorphism(&a, &mut ChaCha8Rng::seed_from_u64(seed));
        let inv = invert_morphism(&phi).unwrap();
        prop_assert!(phi.compose(&inv).unwrap().is_identity());
        prop_assert!(inv.compose(&phi).unwrap().is_identity());
    }

    #[test]
    fn twisting_composes(seed: u64, s in 0usize..4) {
        let a = common::klein(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (phi, psi) = (random_automorphism(&a, &mut rng), random_automorphism(&a, &mut rng));
        let d = Comultiplication::named(&a, WANG_STRUCTURES[s]).unwrap();
        let lhs = d.twist(&phi).unwrap().twist(&psi).unwrap();
        let rhs = d.twist(&psi.compose(&phi).unwrap()).unwrap();
        prop_assert_eq!(lhs.images(), rhs.images());
    }

    #[test]
    fn module_twist_respects_direct_sums(seed: u64, p in prop::sample::select(vec![2u32, 3])) {
        let a = common::klein(p, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_module(&a, 6, &mut rng);
        let n = common::random_module(&a, 6, &mut rng);
        let phi = if p == 2 {
            random_automorphism(&a, &mut rng)
        } else {
            let x2 = a.pow(&a.gen(0), 2);
            restrep::Morphism::from_substitutions(&a, &[(1, a.add(&a.gen(1), &x2))]).unwrap()
        };
        let lhs = m.direct_sum(&n).unwrap().twist(&phi).unwrap();
        let rhs = m.twist(&phi).unwrap().direct_sum(&n.twist(&phi).unwrap()).unwrap();
        prop_assert_eq!(lhs.actions(), rhs.actions());
    }

    #[test]
    fn support_axioms(seed: u64, pe in prop::sample::select(vec![(2u32, 2u32), (3, 1)])) {
        let (p, e) = pe;
        let a = common::klein(p, e);
        let fam = PointFamily::projective(&a, e).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max = (p * p) as usize;
        let m = common::random_module(&a, max, &mut rng);
        let n = common::random_module(&a, max, &mut rng);
        let sup = |x: &Representation| -> BTreeSet<usize> { support(x, &fam).unwrap().indices.into_iter().collect() };
        let (sm, sn) = (sup(&m), sup(&n));
        prop_assert_eq!(sup(&m.direct_sum(&n).unwrap()), sm.union(&sn).copied().collect::<BTreeSet<_>>());
        let inter: BTreeSet<usize> = sm.intersection(&sn).copied().collect();
        for s in WANG_STRUCTURES {
            let d = Comultiplication::named(&a, s).unwrap();
            prop_assert_eq!(sup(&m.tensor(&n, &d).unwrap()), inter.clone(), "{}", s);
        }
        prop_assert!(sup(&Representation::free(&a, 1)).is_empty());
    }

    #[test]
    fn tensor_is_symmetric_for_cocommutative_structures(seed: u64, s in 0usize..4) {
        let a = common::klein(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_module(&a, 4, &mut rng);
        let n = common::random_module(&a, 4, &mut rng);
        let d = Comultiplication::named(&a, WANG_STRUCTURES[s]).unwrap();
        let mn = m.tensor(&n, &d).unwrap();
        let nm = n.tensor(&m, &d).unwrap();
        prop_assert!(iso_test(&mn, &nm, 20, None, seed).unwrap().is_isomorphic());
    }

    /// Noble iff s₂ kills V(𝔮)⊗V(𝔮): an independent read of the pulled-back nobility.
    #[test]
    fn twisted_nobility_matches_square_fingerprint(seed: u64, s in 0usize..4, pt in 0usize..5) {
        let a = common::klein(2, 2);
        let fam = PointFamily::projective(&a, 2).unwrap();
        let phi = random_automorphism(&a, &mut ChaCha8Rng::seed_from_u64(seed));
        let name = WANG_STRUCTURES[s];
        let d = Comultiplication::named(&a, name).unwrap().twist(&phi).unwrap();
        let q = &projective_points(a.field(), 2)[pt];
        let v = basev(&a, q, 1).unwrap().rep;
        let s2 = a.linear_combination(&[(q[0], &a.gen(0)), (q[1], &a.gen(1))]);
        let killed = v.tensor(&v, &d).unwrap().act(&s2).is_zero();
        let nb = nobility_of(&d, fam.point(q).unwrap(), &fam).unwrap();
        prop_assert_eq!(nb == Nobility::Noble, killed);
    }
}

#[test]
fn untwisted_nobility_matches_square_fingerprint() {
    let a = common::klein(2, 2);
    for s in WANG_STRUCTURES {
        let d = Comultiplication::named(&a, s).unwrap();
        for q in projective_points(a.field(), 2) {
            let v = basev(&a, &q, 1).unwrap().rep;
            let s2 = a.linear_combination(&[(q[0], &a.gen(0)), (q[1], &a.gen(1))]);
            let killed = v.tensor(&v, &d).unwrap().act(&s2).is_zero();
            assert_eq!(nobility(s, a.field(), &q).unwrap() == Nobility::Noble, killed, "{s} {q:?}");
        }
    }
}
