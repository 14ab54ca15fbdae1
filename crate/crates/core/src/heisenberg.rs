//! Induced modules V_r = A/Ax^r for the 3-dimensional Heisenberg algebra and
//! the twist x ↦ x + (yz)^{p−1}.
//!
//! Explicit basis order for V_r: blocks by ℓ decreasing, then i increasing,
//! then j decreasing, for monomials y^i z^j x^ℓ.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Algebra, Element, Morphism};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hopf::Comultiplication;
use crate::matrix::{JordanType, Matrix};
use crate::module::{jordan_block_module, jordan_type_module, Representation};

const Y: usize = 0;
const Z: usize = 1;
const X: usize = 2;

fn check_p(p: u32) -> Result<Field> {
    if p == 2 {
        return Err(Error::Unsupported("the Heisenberg computation needs p > 2".into()));
    }
    Field::prime(p)
}

/// p² × p² block matrix with (i+1)𝔑_p at block (i, i+1).
pub fn block_m(f: &Field) -> Matrix {
    let p = f.p() as usize;
    let n = Matrix::nilpotent_block(f, p);
    let mut m = Matrix::zeros(f, p * p, p * p);
    for i in 0..p - 1 {
        m.set_block(i * p, (i + 1) * p, &n.scaled(f.from_int(i as i64 + 1)));
    }
    m
}

/// p × p with a single 1 in the top right corner.
pub fn block_e(f: &Field) -> Matrix {
    let p = f.p() as usize;
    Matrix::unit(f, p, p, 0, p - 1)
}

/// p² × p² with 𝔈 in the bottom left block.
pub fn block_f(f: &Field) -> Matrix {
    let p = f.p() as usize;
    let mut m = Matrix::zeros(f, p * p, p * p);
    m.set_block((p - 1) * p, 0, &block_e(f));
    m
}

/// r × r blocks: 𝔐 on the diagonal, I above it.
pub fn block_l(f: &Field, r: usize) -> Matrix {
    let q = (f.p() * f.p()) as usize;
    let mm = block_m(f);
    let id = Matrix::identity(f, q);
    let mut l = Matrix::zeros(f, r * q, r * q);
    for b in 0..r {
        l.set_block(b * q, b * q, &mm);
        if b + 1 < r {
            l.set_block(b * q, (b + 1) * q, &id);
        }
    }
    l
}

/// r × r blocks with 𝔉 on the diagonal.
pub fn block_o(f: &Field, r: usize) -> Matrix {
    let ff = block_f(f);
    Matrix::block_diag(f, &vec![ff; r])
}

/// x ↦ x + (yz)^{p−1}, y ↦ y.
pub fn twist_automorphism(algebra: &Arc<Algebra>) -> Result<Morphism> {
    let p = algebra.field().p() as usize;
    let yz = algebra.mul(&algebra.gen(Y), &algebra.gen(Z));
    let img = algebra.add(&algebra.gen(X), &algebra.pow(&yz, p - 1));
    Morphism::from_substitutions(algebra, &[(X, img)])
}

/// k[x]/x^p → A, x ↦ x for the generator of index `gen`.
fn cyclic_inclusion(algebra: &Arc<Algebra>, gen: usize) -> Result<(Arc<Algebra>, Morphism)> {
    let p = algebra.field().p() as usize;
    let d = Algebra::truncated_named(algebra.field(), &[p], vec![algebra.gen_names()[gen].clone()])?;
    let iota = Morphism::new(&d, algebra, vec![algebra.gen(gen)])?;
    Ok((d, iota))
}

/// V_r by generic induction of J_r from ⟨x⟩, permuted into the explicit basis order.
pub fn induced_module(algebra: &Arc<Algebra>, r: usize) -> Result<Representation> {
    let p = algebra.field().p() as usize;
    let (d, iota) = cyclic_inclusion(algebra, X)?;
    let jr = jordan_block_module(&d, r)?;
    // coset c = i·p + (p−1−j) is y^i z^j
    let cosets: Vec<Element> = (0..p * p).map(|c| algebra.monomial(&[c / p, p - 1 - c % p, 0])).collect();
    let v = jr.induce(&iota, &cosets)?;
    // induced index c·r + m (J_r index m holds x^{r−1−m}) goes to explicit index m·p² + c
    let perm: Vec<usize> = (0..p * p * r).map(|k| (k % r) * p * p + k / r).collect();
    Ok(v.permute_basis(&perm).with_label(format!("V{r}")))
}

#[derive(Clone, Debug)]
pub struct HeisenbergScenario {
    pub p: u32,
    pub r: usize,
    pub algebra: Arc<Algebra>,
    pub phi: Morphism,
    pub module: Representation,
    pub explicit_l: Matrix,
    pub explicit_o: Matrix,
}

impl HeisenbergScenario {
    /// Action of φ(x) = x + (yz)^{p−1} on V_r, i.e. of x on V_r^{φ⁻¹}.
    pub fn twisted_x(&self) -> Result<Matrix> {
        self.explicit_l.add(&self.explicit_o)
    }
}

pub fn build_scenario(p: u32, r: usize) -> Result<HeisenbergScenario> {
    let f = check_p(p)?;
    if r == 0 || r > p as usize {
        return Err(Error::DimensionMismatch(format!("r = {r} outside 1..={p}")));
    }
    let algebra = Algebra::heisenberg(&f, 1)?;
    let phi = twist_automorphism(&algebra)?;
    let module = induced_module(&algebra, r)?;
    let explicit_l = block_l(&f, r);
    let explicit_o = block_o(&f, r);
    if module.action(X) != &explicit_l {
        return Err(Error::CrossCheckFailed(format!("x on V{r} differs from the block matrix at p = {p}")));
    }
    let yz = algebra.pow(&algebra.mul(&algebra.gen(Y), &algebra.gen(Z)), p as usize - 1);
    if module.act(&yz) != explicit_o {
        return Err(Error::CrossCheckFailed(format!("(yz)^(p-1) on V{r} differs from the block matrix at p = {p}")));
    }
    Ok(HeisenbergScenario { p, r, algebra, phi, module, explicit_l, explicit_o })
}

/// Rank of (𝔏_r + 𝔒_r)² as tabulated in closed form, for r ≥ 2.
pub fn rho_closed_form(r: usize, p: usize) -> Option<i64> {
    let (r, p) = (r as i64, p as i64);
    if r == p {
        Some(p * p * (p - 2))
    } else if r == 2 {
        Some(2 * p * p - 8 * p + 11)
    } else if r >= 3 && r < p {
        let base = r * p * p - 2 * p * r + r * r - 4 * r;
        Some(if r % 3 == 0 { base } else { base + 2 })
    } else {
        None
    }
}

/// Number of J₁ summands of L_r as tabulated in closed form, for r ≥ 2.
pub fn tau_closed_form(r: usize, p: usize) -> Option<i64> {
    let (r, p) = (r as i64, p as i64);
    if r == p {
        Some(0)
    } else if r == 2 {
        Some(3)
    } else if r >= 3 && r < p {
        let base = (2 * p - 4) * r - r * r;
        Some(if r % 3 == 0 { base } else { base + 2 })
    } else {
        None
    }
}

/// 2Σ_{r=2}^{p−1} τ(r,p) in closed form by the residue of p mod 3.
pub fn tau_sum_closed_form(p: usize) -> i64 {
    let m = (p / 3) as i64;
    match p % 3 {
        0 => 6,
        1 => 36 * m * m * m - 3 * m * m - 35 * m + 20,
        _ => 36 * m * m * m + 27 * m * m - 29 * m + 10,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RankRow {
    pub p: u32,
    pub r: usize,
    pub rank: usize,
    pub rank_expected: i64,
    pub nullity: usize,
    pub nullity_expected: i64,
    pub rank_square: usize,
    pub rank_square_expected: Option<i64>,
    /// Number of J₁ parts in the Jordan type of 𝔏_r + 𝔒_r.
    pub tau: usize,
    pub tau_expected: Option<i64>,
    pub jordan_type: String,
}

impl RankRow {
    pub fn mismatches(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.rank as i64 != self.rank_expected {
            out.push("rank");
        }
        if self.nullity as i64 != self.nullity_expected {
            out.push("nullity");
        }
        if self.rank_square_expected.is_some_and(|v| v != self.rank_square as i64) {
            out.push("rank_square");
        }
        if self.tau_expected.is_some_and(|v| v != self.tau as i64) {
            out.push("tau");
        }
        out
    }

    pub fn matches(&self) -> bool {
        self.mismatches().is_empty()
    }
}

pub fn rank_row(sc: &HeisenbergScenario) -> Result<RankRow> {
    let (p, r) = (sc.p as usize, sc.r);
    let s = sc.twisted_x()?;
    let jt = s.nilpotent_jordan_type()?;
    let rank = s.rank();
    let rank_square = s.mul(&s)?.rank();
    let (ri, pi) = (r as i64, p as i64);
    // r = 1 has its own closed form (p−1)² + 1
    let rank_expected = if r == 1 { (pi - 1) * (pi - 1) + 1 } else { ri * pi * pi - 2 * ri * pi + ri * ri };
    let rank_square_expected = if r == 1 { Some((pi - 2) * (pi - 2)) } else { rho_closed_form(r, p) };
    Ok(RankRow {
        p: sc.p,
        r,
        rank,
        rank_expected,
        nullity: s.rows() - rank,
        nullity_expected: (r * p * p) as i64 - rank_expected,
        rank_square,
        rank_square_expected,
        tau: jt.count(1),
        tau_expected: if r == 1 { Some(0) } else { tau_closed_form(r, p) },
        jordan_type: jt.to_string(),
    })
}

pub fn rank_table(p: u32) -> Result<Vec<RankRow>> {
    (1..=p as usize).map(|r| rank_row(&build_scenario(p, r)?)).collect()
}

/// Number of J₁ summands in the primitive tensor product of two Jordan types over k[t]/t^p.
pub fn j1_count_of_square(f: &Field, jt: &JordanType) -> Result<usize> {
    let p = f.p() as usize;
    let d = Algebra::truncated_polynomial(f, &[p])?;
    let delta = Comultiplication::named(&d, "lie_primitive")?;
    let mut total = 0;
    for &a in &jt.parts {
        for &b in &jt.parts {
            let ja = jordan_block_module(&d, a)?;
            let jb = jordan_block_module(&d, b)?;
            total += ja.tensor(&jb, &delta)?.action(0).nilpotent_jordan_type()?.count(1);
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct CgmCertificate {
    pub p: u32,
    pub l1_jordan_type: String,
    /// J₁ count of L₁⊗̃L₁, computed from the tensor products of its blocks.
    pub left: usize,
    pub left_closed_form: i64,
    /// 2Σ_{r=2}^{p−1} τ(r,p) with τ read off the computed Jordan types.
    pub right: usize,
    pub right_closed_form: i64,
    pub unequal: bool,
    pub untwisted_restriction: String,
    pub untwisted_matches_mackey: bool,
    /// L₁ has a J₂ summand, so the twist fixes the point of x.
    pub phi_fixes_point: bool,
}

impl CgmCertificate {
    /// The twisted identity fails and the closed forms agree with the computation.
    pub fn passes(&self) -> bool {
        self.unequal
            && self.untwisted_matches_mackey
            && self.phi_fixes_point
            && self.left as i64 == self.left_closed_form
            && self.right as i64 == self.right_closed_form
    }
}

pub fn cgm_check(p: u32) -> Result<CgmCertificate> {
    let f = check_p(p)?;
    let pu = p as usize;
    let sc1 = build_scenario(p, 1)?;
    let l1 = sc1.twisted_x()?.nilpotent_jordan_type()?;
    let left = j1_count_of_square(&f, &l1)?;
    let mut right = 0;
    for r in 2..pu {
        let sc = build_scenario(p, r)?;
        right += 2 * sc.twisted_x()?.nilpotent_jordan_type()?.count(1);
    }
    let untwisted = sc1.module.action(X).nilpotent_jordan_type()?;
    let mut mackey: Vec<usize> = (1..pu).flat_map(|i| [i, i]).collect();
    mackey.push(pu);
    Ok(CgmCertificate {
        p,
        l1_jordan_type: l1.to_string(),
        left,
        left_closed_form: 9 + 4 * (p as i64 - 3),
        right,
        right_closed_form: tau_sum_closed_form(pu),
        unequal: left != right,
        untwisted_restriction: untwisted.to_string(),
        untwisted_matches_mackey: untwisted == JordanType::new(mackey),
        phi_fixes_point: l1.count(2) > 0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralExtensionCheck {
    pub p: u32,
    pub n: usize,
    pub index: usize,
    pub twisted_restriction: String,
    pub expected: String,
    pub untwisted_restriction: String,
    pub untwisted_expected: String,
    pub matches: bool,
}

/// For the (2n+1)-dimensional Heisenberg algebra: restricting V_1(x₁) twisted by
/// x₁ ↦ x₁ + (y₁z)^{p−1} to ⟨x₁⟩ gives [𝔤_n : 𝔤_1] copies of the n = 1 answer.
pub fn central_extension_check(p: u32, n: usize) -> Result<CentralExtensionCheck> {
    let f = check_p(p)?;
    let pu = p as usize;
    let algebra = Algebra::heisenberg(&f, n)?;
    // generators y_1..y_n, z, x_1..x_n
    let (y1, z, x1) = (0, n, n + 1);
    let (d, iota) = cyclic_inclusion(&algebra, x1)?;
    let triv = Representation::trivial(&d);
    let k = algebra.num_gens();
    let cosets: Vec<Element> = (0..algebra.dim() / pu)
        .map(|c| {
            let mut exps = vec![0; k];
            let mut rest = c;
            for (g, e) in exps.iter_mut().enumerate() {
                if g == x1 {
                    continue;
                }
                *e = rest % pu;
                rest /= pu;
            }
            algebra.monomial(&exps)
        })
        .collect();
    let v = triv.induce(&iota, &cosets)?;
    let yz = algebra.pow(&algebra.mul(&algebra.gen(y1), &algebra.gen(z)), pu - 1);
    let twisted_x = algebra.add(&algebra.gen(x1), &yz);
    let twisted = v.act(&twisted_x).nilpotent_jordan_type()?;
    let untwisted = v.action(x1).nilpotent_jordan_type()?;
    let base = build_scenario(p, 1)?;
    let base_twisted = base.twisted_x()?.nilpotent_jordan_type()?;
    let base_untwisted = base.module.action(X).nilpotent_jordan_type()?;
    let index = algebra.dim() / (pu * pu * pu);
    let scale = |jt: &JordanType| JordanType::new(jt.parts.iter().flat_map(|&s| std::iter::repeat(s).take(index)).collect());
    let (expected, untwisted_expected) = (scale(&base_twisted), scale(&base_untwisted));
    Ok(CentralExtensionCheck {
        p,
        n,
        index,
        matches: twisted == expected && untwisted == untwisted_expected,
        twisted_restriction: twisted.to_string(),
        expected: expected.to_string(),
        untwisted_restriction: untwisted.to_string(),
        untwisted_expected: untwisted_expected.to_string(),
    })
}

/// ⊕ J_λ over k[x]/x^p, for comparing restrictions.
pub fn restriction_module(f: &Field, jt: &JordanType) -> Result<Representation> {
    let d = Algebra::truncated_polynomial(f, &[f.p() as usize])?;
    jordan_type_module(&d, jt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_for_r_one() {
        let sc = build_scenario(3, 1).unwrap();
        assert_eq!(sc.module.dim(), 9);
        assert_eq!(sc.explicit_l, block_m(sc.algebra.field()));
        assert_eq!(sc.explicit_o, block_f(sc.algebra.field()));
    }

    #[test]
    fn top_module_is_free() {
        for p in [3, 5] {
            let sc = build_scenario(p, p as usize).unwrap();
            let jt = sc.twisted_x().unwrap().nilpotent_jordan_type().unwrap();
            assert!(jt.all_equal(p as usize));
            assert_eq!(crate::hom::free_rank(&sc.module).unwrap(), 1);
        }
    }

    #[test]
    fn dimension_count() {
        assert_eq!(build_scenario(5, 2).unwrap().module.dim(), 50);
    }

    #[test]
    fn twist_matches_block_sum() {
        // x on V_r^{φ⁻¹} through the generic twist
        let sc = build_scenario(3, 2).unwrap();
        let inv = crate::algebra::invert_morphism(&sc.phi).unwrap();
        let tw = sc.module.twist(&inv).unwrap();
        assert_eq!(tw.action(X), &sc.twisted_x().unwrap());
    }

    #[test]
    fn r_one_and_two_rows() {
        let rows = rank_table(3).unwrap();
        assert_eq!(rows[0].rank, 5);
        assert_eq!(rows[0].jordan_type, "J3+3J2");
        assert_eq!((rows[1].rank, rows[1].nullity, rows[1].rank_square, rows[1].tau), (10, 8, 5, 3));
        assert!(rows.iter().all(|r| r.matches()));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(rho_closed_form(3, 5), Some(42));
        assert_eq!(tau_sum_closed_form(3), 6);
        assert_eq!(tau_sum_closed_form(5), 44);
        assert_eq!(tau_sum_closed_form(7), 226);
        // the per-r table sums to the total for p ≡ 2 mod 3 but not for p ≡ 1 mod 3
        let table_sum = |p: usize| 2 * (2..p).map(|r| tau_closed_form(r, p).unwrap()).sum::<i64>();
        for p in [5usize, 11, 17] {
            assert_eq!(table_sum(p), tau_sum_closed_form(p));
        }
        assert_eq!(table_sum(7), 202);
        assert_eq!(table_sum(13), 2040);
    }

    #[test]
    fn j1_count_oracle() {
        let f = Field::prime(5).unwrap();
        // J₁ parts of J_a⊗J_b for a, b < p: one when a = b, none otherwise
        let jt = JordanType::new(vec![2, 2, 2, 3, 3, 4, 4, 5]);
        assert_eq!(j1_count_of_square(&f, &jt).unwrap(), 9 + 4 + 4);
    }

    #[test]
    fn cgm_at_three() {
        let c = cgm_check(3).unwrap();
        assert_eq!((c.left, c.right), (9, 6));
        assert!(c.unequal && c.untwisted_matches_mackey && c.phi_fixes_point);
        assert!(c.passes());
    }

    #[test]
    fn central_extension_at_three() {
        let c = central_extension_check(3, 2).unwrap();
        assert_eq!(c.index, 9);
        assert!(c.matches, "{c:?}");
    }
}
