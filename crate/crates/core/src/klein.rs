//! The Klein four case: k[x,y]/(x², y²) in characteristic 2.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Algebra, Element, Morphism};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::hom::{free_rank, hom_dim, iso_test_peeled};
use crate::hopf::Comultiplication;
use crate::matrix::{JordanType, Matrix};
use crate::module::Representation;
use crate::pipoint::{aut_action_on_point, format_coords, nobility, normalize_coords, Nobility, PointFamily};

/// k[x,y]/(x²,y²) over GF(2^e).
pub fn klein_algebra(e: u32) -> Result<Arc<Algebra>> {
    Algebra::truncated_polynomial(&Field::new(2, e)?, &[2, 2])
}

fn check_klein(a: &Algebra) -> Result<()> {
    if a.field().p() != 2 || !a.is_truncated() || a.bounds() != [2, 2] {
        return Err(Error::ShapeMismatch(format!("expected k[x,y]/(x^2,y^2) over GF(2^e), got {}", a.describe())));
    }
    Ok(())
}

/// s₂ = ax + by and the default s₁: x unless b = 0, then y.
pub fn default_s1(coords: &[Elem]) -> [Elem; 2] {
    if coords[1] != 0 {
        [1, 0]
    } else {
        [0, 1]
    }
}

#[derive(Clone, Debug)]
pub struct BasevModule {
    pub point: Vec<Elem>,
    pub n: usize,
    pub rep: Representation,
}

/// V_{2n}(𝔭): s₁ ↦ [[0, I_n], [0, 0]], s₂ ↦ [[0, N_n], [0, 0]].
pub fn basev(algebra: &Arc<Algebra>, point: &[Elem], n: usize) -> Result<BasevModule> {
    basev_with(algebra, point, n, default_s1(point))
}

/// As [`basev`] with an explicit s₁ = cx + dy.
pub fn basev_with(algebra: &Arc<Algebra>, point: &[Elem], n: usize, s1: [Elem; 2]) -> Result<BasevModule> {
    check_klein(algebra)?;
    if n == 0 {
        return Err(Error::DimensionMismatch("V_{2n} needs n >= 1".into()));
    }
    let f = algebra.field();
    let (a, b) = (point[0], point[1]);
    let (c, d) = (s1[0], s1[1]);
    let det = f.sub(f.mul(a, d), f.mul(b, c));
    if det == 0 {
        return Err(Error::DegenerateBasis(format!(
            "s₁ = {}x + {}y is proportional to s₂",
            f.format(c),
            f.format(d)
        )));
    }
    let mut s1m = Matrix::zeros(f, 2 * n, 2 * n);
    s1m.set_block(0, n, &Matrix::identity(f, n));
    let mut s2m = Matrix::zeros(f, 2 * n, 2 * n);
    s2m.set_block(0, n, &Matrix::nilpotent_block(f, n));
    // [x; y] = (1/det) [[d, -b], [-c, a]] [s₂; s₁]
    let inv = f.inv(det);
    let x = s2m.scaled(f.mul(d, inv)).add(&s1m.scaled(f.mul(f.neg(b), inv)))?;
    let y = s2m.scaled(f.mul(f.neg(c), inv)).add(&s1m.scaled(f.mul(a, inv)))?;
    let label = format!("V{}({})", 2 * n, format_coords(f, point));
    let rep = Representation::new(algebra, vec![x, y], label)?;
    Ok(BasevModule { point: point.to_vec(), n, rep })
}

/// a_n multiplicities of V_{2n} and the free multiplicity c.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityVector {
    pub a: Vec<usize>,
    pub c: usize,
}

impl MultiplicityVector {
    pub fn dim(&self) -> usize {
        self.a.iter().enumerate().map(|(i, &k)| 2 * (i + 1) * k).sum::<usize>() + 4 * self.c
    }

    pub fn get(&self, n: usize) -> usize {
        self.a.get(n - 1).copied().unwrap_or(0)
    }

    fn trimmed(mut self) -> Self {
        while self.a.last() == Some(&0) {
            self.a.pop();
        }
        self
    }

    /// 2V_{2min} ⊕ (nm − min)P
    pub fn tensor_formula(n: usize, m: usize) -> MultiplicityVector {
        let k = n.min(m);
        let mut a = vec![0; k];
        a[k - 1] = 2;
        MultiplicityVector { a, c: n * m - k }
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .a
            .iter()
            .enumerate()
            .filter(|t| *t.1 > 0)
            .map(|(i, &k)| if k == 1 { format!("V{}", 2 * (i + 1)) } else { format!("{k}V{}", 2 * (i + 1)) })
            .collect();
        if self.c > 0 {
            parts.push(if self.c == 1 { "P".into() } else { format!("{}P", self.c) });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// H_{m,n} = dim Hom(V_{2m}, V_{2n}) and h_m = dim Hom(V_{2m}, P) for m, n ≤ cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomTable {
    pub point: String,
    pub h: Vec<Vec<usize>>,
    pub free: Vec<usize>,
}

pub fn hom_table(algebra: &Arc<Algebra>, point: &[Elem], cap: usize) -> Result<HomTable> {
    let mods: Vec<Representation> = (1..=cap).map(|n| basev(algebra, point, n).map(|b| b.rep)).collect::<Result<_>>()?;
    let reg = Representation::regular(algebra);
    let h = mods.iter().map(|vm| mods.iter().map(|vn| hom_dim(vm, vn)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    let free = mods.iter().map(|vm| hom_dim(vm, &reg)).collect::<Result<Vec<_>>>()?;
    Ok(HomTable { point: format_coords(algebra.field(), point), h, free })
}

type Q = Ratio<i64>;

/// Solve a square rational system; None if singular.
fn solve_rational(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != Q::from_integer(0))?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Q::from_integer(1) / a[col][col];
        for j in col..n {
            a[col][j] *= inv;
        }
        b[col] *= inv;
        for r in 0..n {
            if r != col && a[r][col] != Q::from_integer(0) {
                let factor = a[r][col];
                for j in col..n {
                    let v = a[col][j];
                    a[r][j] -= factor * v;
                }
                let v = b[col];
                b[r] -= factor * v;
            }
        }
    }
    Some(b)
}

/// The decomposition system matrix: Hom rows for m = 1..cap, then the dimension row.
fn system_matrix(table: &HomTable) -> Vec<Vec<Q>> {
    let cap = table.h.len();
    let mut rows: Vec<Vec<Q>> = (0..cap)
        .map(|m| {
            let mut r: Vec<Q> = table.h[m].iter().map(|&v| Q::from_integer(v as i64)).collect();
            r.push(Q::from_integer(table.free[m] as i64));
            r
        })
        .collect();
    let mut dim_row: Vec<Q> = (1..=cap).map(|n| Q::from_integer(2 * n as i64)).collect();
    dim_row.push(Q::from_integer(4));
    rows.push(dim_row);
    rows
}

/// Whether the (cap+1)-square decomposition system is invertible.
pub fn system_invertible(table: &HomTable) -> bool {
    let rows = system_matrix(table);
    let n = rows.len();
    solve_rational(rows, vec![Q::from_integer(0); n]).is_some()
}

/// M ≅ ⊕ a_n V_{2n}(𝔭) ⊕ cP for M with support {𝔭}.
pub fn decompose(m: &Representation, point: &[Elem]) -> Result<MultiplicityVector> {
    let algebra = m.algebra().clone();
    check_klein(&algebra)?;
    let c0 = free_rank(m)?;
    let rest = m.dim().checked_sub(4 * c0).ok_or_else(|| Error::VerificationFailed("free rank too large".into()))?;
    if rest % 2 != 0 {
        return Err(Error::VerificationFailed(format!("non-projective part has odd dimension {rest}")));
    }
    let cap = rest / 2;
    if cap == 0 {
        return Ok(MultiplicityVector { a: Vec::new(), c: c0 });
    }
    let table = hom_table(&algebra, point, cap)?;
    let mut rhs: Vec<Q> = (1..=cap)
        .map(|k| Ok(Q::from_integer(hom_dim(&basev(&algebra, point, k)?.rep, m)? as i64)))
        .collect::<Result<_>>()?;
    rhs.push(Q::from_integer(m.dim() as i64));
    let sol = solve_rational(system_matrix(&table), rhs)
        .ok_or_else(|| Error::SingularSystem(format!("Hom system at {} with cap {cap}", table.point)))?;
    let mut ints = Vec::with_capacity(sol.len());
    for v in &sol {
        if !v.is_integer() || *v < Q::from_integer(0) {
            return Err(Error::VerificationFailed(format!("solution entry {v} is not a nonnegative integer")));
        }
        ints.push(v.to_integer() as usize);
    }
    let c = ints.pop().unwrap();
    if c != c0 {
        return Err(Error::VerificationFailed(format!("solved c = {c} but the integral has rank {c0}")));
    }
    let mv = MultiplicityVector { a: ints, c }.trimmed();
    let rebuilt = rebuild(&algebra, point, &mv)?;
    let report = iso_test_peeled(&rebuilt, m, 20, None, 0x6b6c)?;
    if !report.is_isomorphic() {
        return Err(Error::VerificationFailed(format!("{mv} is not isomorphic to the input: {:?}", report.verdict)));
    }
    Ok(mv)
}

/// ⊕ a_n V_{2n}(𝔭) ⊕ cP
pub fn rebuild(algebra: &Arc<Algebra>, point: &[Elem], mv: &MultiplicityVector) -> Result<Representation> {
    let mut parts = Vec::new();
    for (i, &k) in mv.a.iter().enumerate() {
        let v = basev(algebra, point, i + 1)?.rep;
        parts.extend(std::iter::repeat(v).take(k));
    }
    let reg = Representation::regular(algebra);
    parts.extend(std::iter::repeat(reg).take(mv.c));
    Ok(Representation::direct_sum_all(algebra, &parts)?.with_label(mv.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct FormulaReport {
    pub structure: String,
    pub point: String,
    pub n: usize,
    pub m: usize,
    pub noble: bool,
    pub expected: String,
    pub computed: String,
    pub matches: bool,
    pub free_rank: usize,
    pub free_rank_expected: usize,
    /// Whether s₂ acts by zero on V(𝔭)⊗V(𝔭) (n = m = 1 only).
    pub s2_annihilates: Option<bool>,
}

impl FormulaReport {
    /// Noble rows must match the formula; every row must have the predicted free rank.
    pub fn passes(&self) -> bool {
        self.free_rank == self.free_rank_expected && (!self.noble || self.matches)
    }
}

fn structure_nobility(delta: &Comultiplication, point: &[Elem]) -> Result<Nobility> {
    let algebra = delta.algebra();
    if delta.twists().is_empty() {
        return nobility(delta.base_name(), algebra.field(), point);
    }
    let family = PointFamily::projective(algebra, algebra.field().e())?;
    let pt = family.point(point).ok_or_else(|| Error::DegenerateBasis("point not in the family".into()))?;
    crate::pipoint::nobility_of(delta, pt, &family)
}

fn s2_element(algebra: &Algebra, point: &[Elem]) -> Element {
    algebra.linear_combination(&[(point[0], &algebra.gen(0)), (point[1], &algebra.gen(1))])
}

/// Builds V_{2n}⊗V_{2m} under the named structure at the point and compares with 2V_{2min} ⊕ (nm − min)P.
pub fn check_basev_formula(delta: &Comultiplication, point: &[Elem], n: usize, m: usize) -> Result<FormulaReport> {
    let algebra = delta.algebra().clone();
    check_klein(&algebra)?;
    let f = algebra.field();
    let point = normalize_coords(f, point).ok_or_else(|| Error::DegenerateBasis("zero point".into()))?;
    let noble = structure_nobility(delta, &point)? == Nobility::Noble;
    let vn = basev(&algebra, &point, n)?.rep;
    let vm = basev(&algebra, &point, m)?.rep;
    let prod = vn.tensor(&vm, delta)?;
    let expected = MultiplicityVector::tensor_formula(n, m);
    let fr = free_rank(&prod)?;
    let computed = match decompose(&prod, &point) {
        Ok(mv) => Ok(mv),
        Err(e @ (Error::VerificationFailed(_) | Error::SingularSystem(_))) => Err(e),
        Err(e) => return Err(e),
    };
    let s2_annihilates = (n == 1 && m == 1).then(|| prod.act(&s2_element(&algebra, &point)).is_zero());
    let (computed_str, matches) = match &computed {
        Ok(mv) => (mv.to_string(), *mv == expected),
        Err(e) => (format!("undecomposed ({e})"), false),
    };
    Ok(FormulaReport {
        structure: delta.name().to_string(),
        point: format_coords(f, &point),
        n,
        m,
        noble,
        expected: expected.to_string(),
        computed: computed_str,
        matches,
        free_rank: fr,
        free_rank_expected: n * m - n.min(m),
        s2_annihilates,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PbWitness {
    pub structure: String,
    pub point: String,
    /// Rank of s₂ on V(𝔭)⊗_iV(𝔭); nonzero certifies the deviation.
    pub s2_rank_structure: usize,
    /// Rank of s₂ on V(𝔭)⊗̃V(𝔭).
    pub s2_rank_lie: usize,
    pub certified: bool,
}

/// V(𝔭)⊗_iV(𝔭) ≇ V(𝔭)⊗̃V(𝔭) at an ignoble point, by the s₂-annihilation fingerprint.
pub fn check_pb_witness(delta: &Comultiplication, point: &[Elem]) -> Result<PbWitness> {
    let algebra = delta.algebra().clone();
    check_klein(&algebra)?;
    let f = algebra.field();
    let point = normalize_coords(f, point).ok_or_else(|| Error::DegenerateBasis("zero point".into()))?;
    if structure_nobility(delta, &point)? == Nobility::Noble {
        return Err(Error::PointNotIgnoble(format!("{} is noble for {}", format_coords(f, &point), delta.name())));
    }
    let lie = Comultiplication::named(&algebra, "lie_primitive")?;
    let v = basev(&algebra, &point, 1)?.rep;
    let s2 = s2_element(&algebra, &point);
    let r_struct = v.tensor(&v, delta)?.act(&s2).rank();
    let r_lie = v.tensor(&v, &lie)?.act(&s2).rank();
    Ok(PbWitness {
        structure: delta.name().to_string(),
        point: format_coords(f, &point),
        s2_rank_structure: r_struct,
        s2_rank_lie: r_lie,
        certified: r_struct != r_lie,
    })
}

/// Random augmented automorphism: generators go to invertible linear parts plus xy terms.
pub fn random_automorphism<R: Rng + ?Sized>(algebra: &Arc<Algebra>, rng: &mut R) -> Morphism {
    let f = algebra.field();
    let q = f.order();
    loop {
        let c: Vec<Elem> = (0..6).map(|_| rng.gen_range(0..q)).collect();
        if f.sub(f.mul(c[0], c[3]), f.mul(c[1], c[2])) == 0 {
            continue;
        }
        let xy = algebra.monomial(&[1, 1]);
        let (x, y) = (algebra.gen(0), algebra.gen(1));
        let img = |a: Elem, b: Elem, e: Elem| algebra.linear_combination(&[(a, &x), (b, &y), (e, &xy)]);
        let images = vec![img(c[0], c[2], c[4]), img(c[1], c[3], c[5])];
        if let Ok(phi) = Morphism::new(algebra, algebra, images) {
            return phi;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsotropyReport {
    pub point: String,
    pub automorphism: String,
    pub n: usize,
    pub fixes_point: bool,
    pub isomorphic: bool,
}

/// For sampled φ fixing 𝔭, checks V_{2n}(𝔭)^φ ≅ V_{2n}(𝔭).
pub fn sample_isotropy(
    family: &PointFamily,
    point: &[Elem],
    max_n: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<IsotropyReport>> {
    let algebra = family.algebra.clone();
    check_klein(&algebra)?;
    let pt = family.point(point).ok_or_else(|| Error::DegenerateBasis("point not in the family".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut found = 0;
    let mut attempts = 0;
    while found < samples && attempts < 50 * samples {
        attempts += 1;
        let phi = random_automorphism(&algebra, &mut rng);
        let fixes = aut_action_on_point(&phi, pt, family)?.as_deref() == pt.coords();
        if !fixes {
            continue;
        }
        found += 1;
        for n in 1..=max_n {
            let v = basev(&algebra, point, n)?.rep;
            let tw = v.twist(&phi)?;
            let iso = crate::hom::isomorphic(&tw, &v, seed ^ n as u64)?;
            out.push(IsotropyReport {
                point: format_coords(algebra.field(), point),
                automorphism: phi.describe(),
                n,
                fixes_point: fixes,
                isomorphic: iso,
            });
        }
    }
    Ok(out)
}

/// Jordan type of s₂∘s₁⁻¹ on the radical layer of M/(free part): a_n parts of size n.
///
/// Used as an independent check of [`decompose`]. Requires s₁ to map the top
/// of the non-projective part isomorphically onto its radical.
pub fn kronecker_invariant(m: &Representation, point: &[Elem]) -> Result<(JordanType, usize)> {
    let algebra = m.algebra().clone();
    let (c, rest) = crate::hom::split_free(m)?;
    let f = algebra.field().clone();
    let s1c = default_s1(point);
    let s1 = rest.act(&algebra.linear_combination(&[(s1c[0], &algebra.gen(0)), (s1c[1], &algebra.gen(1))]));
    let s2 = rest.act(&s2_element(&algebra, point));
    let d = rest.dim();
    if d == 0 {
        return Ok((JordanType::new(vec![]), c));
    }
    // basis of the radical: column space of [x | y]
    let rad_rows = {
        let both = Matrix::from_fn(&f, d, 2 * d, |i, j| if j < d { rest.action(0).get(i, j) } else { rest.action(1).get(i, j - d) });
        let (r, piv) = both.transpose().rref();
        (0..piv.len()).map(|i| r.row(i).to_vec()).collect::<Vec<_>>()
    };
    let k = rad_rows.len();
    if 2 * k != d {
        return Err(Error::VerificationFailed(format!("radical of dimension {k} in a module of dimension {d}")));
    }
    let rad = Matrix::from_columns(&f, d, &rad_rows);
    // top: complement of the radical inside standard basis vectors
    let mut space = crate::matrix::RowSpace::new(&f, d);
    for r in &rad_rows {
        space.insert(r.clone());
    }
    let mut top = Vec::new();
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        if space.insert(e.clone()) {
            top.push(e);
        }
    }
    let top = Matrix::from_columns(&f, d, &top);
    // coordinates in the radical basis
    let rad_pinv = |v: Vec<Elem>| rad.solve(&v).expect("vector in the radical");
    let a1 = Matrix::from_columns(&f, k, &(0..k).map(|j| rad_pinv(s1.mul_vec(&top.column(j)))).collect::<Vec<_>>());
    let a2 = Matrix::from_columns(&f, k, &(0..k).map(|j| rad_pinv(s2.mul_vec(&top.column(j)))).collect::<Vec<_>>());
    let a1inv = a1.inverse().ok_or_else(|| Error::VerificationFailed("s₁ is not invertible from top to radical".into()))?;
    Ok((a2.mul(&a1inv)?.nilpotent_jordan_type()?, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basev_restriction_and_support() {
        let a = klein_algebra(2).unwrap();
        let fam = PointFamily::projective(&a, 2).unwrap();
        for (i, pt) in fam.points.iter().enumerate() {
            for n in 1..=4 {
                let v = basev(&a, pt.coords().unwrap(), n).unwrap();
                let mut expected = vec![2; n - 1];
                expected.extend([1, 1]);
                assert_eq!(pt.restriction(&v.rep).unwrap(), JordanType::new(expected));
                assert_eq!(crate::pipoint::support(&v.rep, &fam).unwrap().indices, vec![i]);
            }
        }
    }

    #[test]
    fn basev_two_agrees_with_point_module() {
        let a = klein_algebra(1).unwrap();
        let fam = PointFamily::projective(&a, 1).unwrap();
        for pt in &fam.points {
            let v = basev(&a, pt.coords().unwrap(), 1).unwrap().rep;
            let w = crate::pipoint::point_module(pt).unwrap();
            assert_eq!(v.actions(), w.actions());
        }
    }

    #[test]
    fn degenerate_basis_rejected() {
        let a = klein_algebra(1).unwrap();
        assert!(matches!(basev_with(&a, &[1, 1], 2, [1, 1]), Err(Error::DegenerateBasis(_))));
    }

    #[test]
    fn basis_choices_give_isomorphic_modules() {
        let a = klein_algebra(2).unwrap();
        let g = a.field().generator();
        for n in 1..=3 {
            let v1 = basev_with(&a, &[1, 1], n, [1, 0]).unwrap().rep;
            let v2 = basev_with(&a, &[1, 1], n, [g, 0]).unwrap().rep;
            let v3 = basev_with(&a, &[1, 1], n, [0, 1]).unwrap().rep;
            assert!(crate::hom::isomorphic(&v1, &v2, 1).unwrap());
            assert!(crate::hom::isomorphic(&v1, &v3, 2).unwrap());
        }
    }

    #[test]
    fn decompose_single_modules() {
        let a = klein_algebra(1).unwrap();
        for n in 1..=4 {
            let v = basev(&a, &[0, 1], n).unwrap().rep;
            let mv = decompose(&v, &[0, 1]).unwrap();
            let mut expect = vec![0; n];
            expect[n - 1] = 1;
            assert_eq!(mv, MultiplicityVector { a: expect, c: 0 });
        }
    }

    #[test]
    fn kronecker_invariant_reads_multiplicities() {
        let a = klein_algebra(1).unwrap();
        let mv = MultiplicityVector { a: vec![1, 0, 2], c: 2 };
        let m = rebuild(&a, &[1, 0], &mv).unwrap();
        let (jt, c) = kronecker_invariant(&m, &[1, 0]).unwrap();
        assert_eq!(c, 2);
        assert_eq!(jt, JordanType::new(vec![3, 3, 1]));
    }

    #[test]
    fn tensor_decomposition_matches_kronecker_invariant() {
        let a = klein_algebra(2).unwrap();
        for name in crate::hopf::WANG_STRUCTURES {
            let d = Comultiplication::named(&a, name).unwrap();
            for pt in crate::pipoint::projective_points(a.field(), 2) {
                if nobility(name, a.field(), &pt).unwrap() == Nobility::Ignoble {
                    continue;
                }
                for (n, m) in [(1, 2), (2, 2), (3, 2)] {
                    let prod = basev(&a, &pt, n).unwrap().rep.tensor(&basev(&a, &pt, m).unwrap().rep, &d).unwrap();
                    let mv = decompose(&prod, &pt).unwrap();
                    let (jt, c) = kronecker_invariant(&prod, &pt).unwrap();
                    assert_eq!(c, mv.c);
                    let parts: Vec<usize> = (1..=mv.a.len()).flat_map(|k| std::iter::repeat(k).take(mv.get(k))).collect();
                    assert_eq!(jt, JordanType::new(parts), "{name} {pt:?} {n} {m}");
                }
            }
        }
    }

    #[test]
    fn pb_witnesses_at_ignoble_points() {
        let a = klein_algebra(2).unwrap();
        for name in crate::hopf::WANG_STRUCTURES {
            let d = Comultiplication::named(&a, name).unwrap();
            for pt in crate::pipoint::projective_points(a.field(), 2) {
                match check_pb_witness(&d, &pt) {
                    Ok(w) => {
                        assert!(w.certified, "{name} {pt:?}");
                        assert_eq!(w.s2_rank_lie, 0);
                    }
                    Err(Error::PointNotIgnoble(_)) => assert_eq!(nobility(name, a.field(), &pt).unwrap(), Nobility::Noble),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn hom_table_system_invertible() {
        let a = klein_algebra(2).unwrap();
        let t = hom_table(&a, &[1, 1], 6).unwrap();
        assert!(system_invertible(&t));
        assert!(t.free.iter().enumerate().all(|(m, &h)| h == 2 * (m + 1)));
    }

    #[test]
    fn isotropy_samples_fix_modules() {
        let a = klein_algebra(1).unwrap();
        let fam = PointFamily::projective(&a, 1).unwrap();
        let reps = sample_isotropy(&fam, &[1, 1], 3, 3, 5).unwrap();
        assert!(!reps.is_empty());
        assert!(reps.iter().all(|r| r.fixes_point && r.isomorphic));
    }

    #[test]
    fn third_structure_deviation_modulo_annihilator_ideal() {
        use crate::hopf::simple_tensor;
        let a = klein_algebra(2).unwrap();
        let f = a.field().clone();
        let d = Comultiplication::named(&a, "wang_ZpZp").unwrap();
        let sq = d.square().clone();
        let one = a.one();
        for c in f.elements() {
            let s2 = s2_element(&a, &[c, 1]);
            let s1 = a.gen(0);
            let ideal: Vec<Matrix> = [simple_tensor(&sq, &s2, &one), simple_tensor(&sq, &one, &s2)]
                .iter()
                .map(|g| sq.left_mul_matrix(g))
                .collect();
            let mut span = crate::matrix::RowSpace::new(&f, sq.dim());
            for m in &ideal {
                for j in 0..sq.dim() {
                    span.insert(m.column(j));
                }
            }
            let lhs = sq.sub(&sq.sub(&d.delta(&s2), &simple_tensor(&sq, &s2, &one)), &simple_tensor(&sq, &one, &s2));
            let coeff = f.add(c, f.mul(c, c));
            let rhs = sq.scale(&simple_tensor(&sq, &s1, &s1), coeff);
            assert!(span.contains(&sq.sub(&lhs, &rhs).to_dense()), "a = {c}");
        }
    }

    #[test]
    fn multiplicity_display() {
        assert_eq!(MultiplicityVector::tensor_formula(2, 3).to_string(), "2V4 + 4P");
        assert_eq!(MultiplicityVector { a: vec![], c: 0 }.to_string(), "0");
    }
}
