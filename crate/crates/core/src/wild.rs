//! Isotropies that move restrictions of induced modules off the trivial and free types.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{invert_morphism, Algebra, Morphism};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hom::iso_test;
use crate::hopf::Comultiplication;
use crate::matrix::JordanType;
use crate::module::Representation;
use crate::pipoint::{canonical_pi_point, point_module, support, PiPoint, PointFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WildCase {
    /// k[x,y]/(x^p,y^p), p > 2, with y ↦ y + x².
    TwoDim { p: u32 },
    /// k[x,y,z]/(x²,y²,z²) with x ↦ x + yz.
    Klein3Gen,
    /// k[x,y]/(x^{p^n}, y^{p^m}), m ≥ max(n, 2).
    Mixed { p: u32, n: u32, m: u32 },
    /// k[x,y]/(x^{2^n}, y^{2^n}), n ≥ 2, with t = x of order n.
    Equal2Power { n: u32 },
}

impl fmt::Display for WildCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WildCase::TwoDim { p } => write!(f, "twodim(p={p})"),
            WildCase::Klein3Gen => write!(f, "klein3gen"),
            WildCase::Mixed { p, n, m } => write!(f, "mixed(p={p},n={n},m={m})"),
            WildCase::Equal2Power { n } => write!(f, "equal2power(n={n})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoDimReport {
    /// M⊗̃M ≅ pM.
    pub square_is_multiple: bool,
    pub twisted_restriction: String,
    pub max_part: usize,
    pub expected_max_part: usize,
    /// The restriction of M^{φ⁻¹}⊗̃M^{φ⁻¹} has a part of size p.
    pub square_has_full_part: bool,
    /// The restriction of pM^{φ⁻¹} has a part of size p.
    pub multiple_has_full_part: bool,
}

impl TwoDimReport {
    pub fn passes(&self) -> bool {
        self.square_is_multiple
            && self.max_part == self.expected_max_part
            && self.square_has_full_part
            && !self.multiple_has_full_part
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WildCertificate {
    pub case: String,
    pub automorphism: String,
    pub point: String,
    /// Support of V^{φ⁻¹} over the enumerated family equals the point.
    pub fixes_point: bool,
    pub restriction: String,
    /// p^{order of t}: the size of a free block.
    pub free_part: usize,
    /// The restriction is neither trivial (all J₁) nor free (all J_{free_part}).
    pub hypothesis_met: bool,
    /// Some part lies strictly between 1 and the free block size.
    pub intermediate_part: bool,
    /// The restriction is not a multiple of a single block J_{p^s}.
    pub mixed_sizes: bool,
    pub auxiliary: Option<Box<WildCertificate>>,
    pub twodim: Option<TwoDimReport>,
}

impl WildCertificate {
    pub fn passes(&self) -> bool {
        self.fixes_point && self.hypothesis_met && self.twodim.as_ref().map_or(true, |t| t.passes())
    }
}

fn pure_power(algebra: &Arc<Algebra>, g: usize, k: usize) -> crate::algebra::Element {
    let mut e = vec![0; algebra.num_gens()];
    e[g] = k;
    algebra.monomial(&e)
}

/// t = x of order `order` (as a subalgebra k[t]/t^{p^order}) and V = k↑ from ⟨t⟩.
fn order_point(algebra: &Arc<Algebra>, order: u32) -> Result<(PiPoint, Representation)> {
    let f = algebra.field();
    let big = (f.p() as usize).pow(order);
    let d = Algebra::truncated_polynomial(f, &[big])?;
    let iota = Morphism::new(&d, algebra, vec![algebra.gen(0)])?;
    let t = PiPoint::unchecked(algebra, algebra.gen(0), None)?;
    let cosets: Vec<_> = (0..algebra.bounds()[1]).map(|j| pure_power(algebra, 1, j)).collect();
    let v = Representation::trivial(&d).induce(&iota, &cosets)?;
    Ok((t, v))
}

fn certify(
    case: String,
    algebra: &Arc<Algebra>,
    phi: &Morphism,
    coords: &[u32],
    restriction_point: &PiPoint,
    v: &Representation,
    free_part: usize,
) -> Result<WildCertificate> {
    let family = PointFamily::projective(algebra, algebra.field().e())?;
    let inv = invert_morphism(phi)?;
    let twisted = v.twist(&inv)?;
    let sup = support(&twisted, &family)?;
    let idx = family.index_of(coords);
    let fixes_point = idx.is_some() && sup.indices == vec![idx.unwrap()];
    let jt = twisted.act(restriction_point.image()).nilpotent_jordan_type()?;
    let hypothesis_met = !jt.all_equal(1) && !jt.all_equal(free_part);
    let intermediate_part = jt.parts.iter().any(|&s| s > 1 && s < free_part);
    let mixed_sizes = jt.parts.iter().any(|&s| s != jt.parts[0]);
    Ok(WildCertificate {
        case,
        automorphism: phi.describe(),
        point: crate::pipoint::format_coords(algebra.field(), coords),
        fixes_point,
        restriction: jt.to_string(),
        free_part,
        hypothesis_met,
        intermediate_part,
        mixed_sizes,
        auxiliary: None,
        twodim: None,
    })
}

pub fn wild_abelian_isotropy_check(case: WildCase) -> Result<WildCertificate> {
    match case {
        WildCase::TwoDim { p } => twodim(p),
        WildCase::Klein3Gen => {
            let f = Field::prime(2)?;
            let a = Algebra::truncated_polynomial(&f, &[2, 2, 2])?;
            let yz = a.mul(&a.gen(1), &a.gen(2));
            let phi = Morphism::from_substitutions(&a, &[(0, a.add(&a.gen(0), &yz))])?;
            let pt = canonical_pi_point(&a, &[1, 0, 0])?;
            let v = point_module(&pt)?;
            certify(case.to_string(), &a, &phi, &[1, 0, 0], &pt, &v, 2)
        }
        WildCase::Mixed { p, n, m } => {
            if n == 0 || m < n.max(2) {
                return Err(Error::HypothesisNotMet(format!("{case} needs n ≥ 1 and m ≥ max(n, 2)")));
            }
            if p == 2 && n == m {
                return Err(Error::HypothesisNotMet(format!("{case} is the equal-power case")));
            }
            let f = Field::prime(p)?;
            let (pn, pm) = ((p as usize).pow(n), (p as usize).pow(m));
            let a = Algebra::truncated_polynomial(&f, &[pn, pm])?;
            // x ↦ x + y^k needs (x + y^k)^{p^n} = y^{k p^n} = 0
            let k = (p as usize).pow(m - n) + 1;
            let phi = Morphism::from_substitutions(&a, &[(0, a.add(&a.gen(0), &pure_power(&a, 1, k)))])?;
            let pt = canonical_pi_point(&a, &[1, 0])?;
            let v = point_module(&pt)?;
            certify(case.to_string(), &a, &phi, &[1, 0], &pt, &v, p as usize)
        }
        WildCase::Equal2Power { n } => {
            if n < 2 {
                return Err(Error::HypothesisNotMet(format!("{case} needs n ≥ 2")));
            }
            let f = Field::prime(2)?;
            let b = 1usize << n;
            let a = Algebra::truncated_polynomial(&f, &[b, b])?;
            let (t, v) = order_point(&a, n)?;
            let with_shift = |k: usize| -> Result<WildCertificate> {
                let phi = Morphism::from_substitutions(&a, &[(0, a.add(&a.gen(0), &pure_power(&a, 1, k)))])?;
                certify(case.to_string(), &a, &phi, &[1, 0], &t, &v, b)
            };
            let mut cert = with_shift(b / 2)?;
            cert.auxiliary = Some(Box::new(with_shift(b - 1)?));
            Ok(cert)
        }
    }
}

fn twodim(p: u32) -> Result<WildCertificate> {
    if p == 2 {
        return Err(Error::HypothesisNotMet("no PA violation at p=2: the construction needs p > 2".into()));
    }
    let f = Field::prime(p)?;
    let pu = p as usize;
    let a = Algebra::truncated_polynomial(&f, &[pu, pu])?;
    let x2 = a.pow(&a.gen(0), 2);
    let phi = Morphism::from_substitutions(&a, &[(1, a.add(&a.gen(1), &x2))])?;
    let alpha = canonical_pi_point(&a, &[0, 1])?;
    let m = point_module(&alpha)?;
    let mut cert = certify(WildCase::TwoDim { p }.to_string(), &a, &phi, &[0, 1], &alpha, &m, pu)?;

    let lie = Comultiplication::named(&a, "lie_primitive")?;
    let square = m.tensor(&m, &lie)?;
    let square_is_multiple = iso_test(&square, &m.multiple(pu), 20, None, u64::from(p))?.is_isomorphic();
    let inv = invert_morphism(&phi)?;
    let mt = m.twist(&inv)?;
    let jt = alpha.restriction(&mt)?;
    let sq_jt: JordanType = alpha.restriction(&mt.tensor(&mt, &lie)?)?;
    let mult_jt = alpha.restriction(&mt.multiple(pu))?;
    cert.twodim = Some(TwoDimReport {
        square_is_multiple,
        twisted_restriction: jt.to_string(),
        max_part: jt.max_part(),
        expected_max_part: (pu + 1) / 2,
        square_has_full_part: sq_jt.count(pu) > 0,
        multiple_has_full_part: mult_jt.count(pu) > 0,
    });
    Ok(cert)
}
