//! π-points t ↦ α(t), supports over enumerated projective points, nobility.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Algebra, Element, Morphism};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::hopf::Comultiplication;
use crate::matrix::{JordanType, Matrix, RowSpace};
use crate::module::Representation;

#[derive(Clone, Debug)]
pub struct PiPoint {
    algebra: Arc<Algebra>,
    image: Element,
    coords: Option<Vec<Elem>>,
}

/// Jordan type of left multiplication by `a` on the regular module.
fn regular_jordan_type(algebra: &Algebra, a: &Element) -> Result<JordanType> {
    algebra.left_mul_matrix(a).nilpotent_jordan_type()
}

impl PiPoint {
    /// Checks augmentation, t^p = 0 and flatness.
    pub fn new(algebra: &Arc<Algebra>, image: Element, coords: Option<Vec<Elem>>) -> Result<PiPoint> {
        let pt = PiPoint::unchecked(algebra, image, coords)?;
        let p = algebra.field().p() as usize;
        if !algebra.pow(&pt.image, p).is_zero() {
            return Err(Error::NotFlat(format!("{} has nonzero p-th power", algebra.format(&pt.image))));
        }
        let jt = regular_jordan_type(algebra, &pt.image)?;
        if !jt.all_equal(p) {
            return Err(Error::NotFlat(format!(
                "A restricted along t ↦ {} has Jordan type {jt}",
                algebra.format(&pt.image)
            )));
        }
        Ok(pt)
    }

    /// Only checks the augmentation; used for composites φ∘α.
    pub fn unchecked(algebra: &Arc<Algebra>, image: Element, coords: Option<Vec<Elem>>) -> Result<PiPoint> {
        if algebra.counit(&image) != 0 {
            return Err(Error::NotAugmented(format!("{} is not in the augmentation ideal", algebra.format(&image))));
        }
        Ok(PiPoint { algebra: algebra.clone(), image, coords })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn field(&self) -> &Field {
        self.algebra.field()
    }
    pub fn image(&self) -> &Element {
        &self.image
    }
    pub fn coords(&self) -> Option<&[Elem]> {
        self.coords.as_deref()
    }

    pub fn label(&self) -> String {
        match &self.coords {
            Some(c) => format_coords(self.field(), c),
            None => format!("t ↦ {}", self.algebra.format(&self.image)),
        }
    }

    /// φ∘α, not checked for flatness.
    pub fn compose(&self, phi: &Morphism) -> Result<PiPoint> {
        if **phi.source() != *self.algebra {
            return Err(Error::AlgebraMismatch("automorphism of another algebra".into()));
        }
        PiPoint::unchecked(phi.target(), phi.apply(&self.image), None)
    }

    /// Restriction of M along the point, as a Jordan type.
    pub fn restriction(&self, m: &Representation) -> Result<JordanType> {
        let m = on_algebra(m, &self.algebra)?;
        m.jordan_type(&self.image)
    }

    /// Whether M restricted along the point is not free over k[t]/t^p.
    pub fn detects(&self, m: &Representation) -> Result<bool> {
        let p = self.field().p() as usize;
        Ok(!self.restriction(m)?.all_equal(p))
    }

    /// k[t]/t^p → A as an algebra morphism.
    pub fn as_morphism(&self) -> Result<Morphism> {
        let line = Algebra::truncated_polynomial(self.field(), &[self.field().p() as usize])?;
        Morphism::new(&line, &self.algebra, vec![self.image.clone()])
    }
}

/// M viewed over `target` (base change if the field is larger).
fn on_algebra(m: &Representation, target: &Arc<Algebra>) -> Result<Representation> {
    if **m.algebra() == **target {
        return Ok(m.clone());
    }
    let same_shape = m.algebra().base_change(target.field())?;
    if *same_shape != **target {
        return Err(Error::AlgebraMismatch(format!(
            "module over {} used with {}",
            m.algebra().describe(),
            target.describe()
        )));
    }
    m.base_change(target)
}

pub fn format_coords(field: &Field, c: &[Elem]) -> String {
    let parts: Vec<String> = c.iter().map(|&x| field.format(x)).collect();
    format!("[{}]", parts.join(":"))
}

/// Points of P^{n-1}(K), normalized with first nonzero coordinate 1, in code order.
pub fn projective_points(field: &Field, n: usize) -> Vec<Vec<Elem>> {
    let q = field.order();
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let count = (q as usize).pow(free as u32);
        for k in 0..count {
            let mut c = vec![0; n];
            c[lead] = 1;
            let mut r = k;
            for i in (lead + 1..n).rev() {
                c[i] = (r % q as usize) as Elem;
                r /= q as usize;
            }
            out.push(c);
        }
    }
    // order by coordinates read left to right: [1:0], [1:1], ..., [0:1]
    out
}

pub fn normalize_coords(field: &Field, c: &[Elem]) -> Option<Vec<Elem>> {
    let lead = c.iter().position(|&x| x != 0)?;
    let inv = field.inv(c[lead]);
    Some(c.iter().map(|&x| field.mul(x, inv)).collect())
}

/// Top p-power slice of generator g: g^{b/p}.
fn slice(algebra: &Algebra, g: usize) -> Element {
    let p = algebra.field().p() as usize;
    let mut e = vec![0; algebra.num_gens()];
    e[g] = algebra.bounds()[g] / p;
    algebra.monomial(&e)
}

/// t ↦ Σ c_i · (top p-power slice of generator i) over the field of `algebra`.
pub fn canonical_pi_point(algebra: &Arc<Algebra>, coords: &[Elem]) -> Result<PiPoint> {
    if !algebra.is_truncated() || coords.len() != algebra.num_gens() {
        return Err(Error::ShapeMismatch(format!(
            "canonical points need a truncated polynomial algebra with {} coordinates",
            coords.len()
        )));
    }
    if coords.iter().all(|&c| c == 0) {
        return Err(Error::NotFlat("the zero vector is not a point".into()));
    }
    let f = algebra.field();
    if let Some(&c) = coords.iter().find(|&&c| !f.is_valid(c)) {
        return Err(Error::FieldMismatch(format!("coordinate {c} is not in {f}")));
    }
    let terms: Vec<(Elem, Element)> = coords.iter().enumerate().map(|(g, &c)| (c, slice(algebra, g))).collect();
    let refs: Vec<(Elem, &Element)> = terms.iter().map(|(c, e)| (*c, e)).collect();
    PiPoint::new(algebra, algebra.linear_combination(&refs), Some(coords.to_vec()))
}

/// Cosets c_i with A = ⊕ c_i k[t], chosen greedily among basis monomials.
pub fn complement_cosets(algebra: &Algebra, t: &Element) -> Result<Vec<Element>> {
    let p = algebra.field().p() as usize;
    let powers: Vec<Element> = (0..p).map(|j| algebra.pow(t, j)).collect();
    let mut space = RowSpace::new(algebra.field(), algebra.dim());
    let mut cosets = Vec::new();
    for u in 0..algebra.dim() {
        let m = algebra.basis_element(u);
        let vecs: Vec<Vec<Elem>> = powers.iter().map(|tj| algebra.mul(&m, tj).to_dense()).collect();
        let mut trial = space.clone();
        if vecs.into_iter().all(|v| trial.insert(v)) {
            space = trial;
            cosets.push(m);
            if space.is_full() {
                return Ok(cosets);
            }
        }
    }
    Err(Error::NotFreeBasis(format!("A is not free over k[{}]", algebra.format(t))))
}

/// k induced from the cyclic subalgebra generated by the point: a test module with support {point}.
///
/// For k[x,y]/(x^p,y^p) the basis is s₁^{p-1}v, …, s₁v, v with s₁ = x unless the point is [1:0].
pub fn point_module(point: &PiPoint) -> Result<Representation> {
    let a = point.algebra();
    let iota = point.as_morphism()?;
    let p = a.field().p() as usize;
    let cosets = match point.coords() {
        Some(c) if a.is_truncated() && a.bounds() == [p, p] => {
            let s1 = if c[1] != 0 { a.gen(0) } else { a.gen(1) };
            (0..p).rev().map(|i| a.pow(&s1, i)).collect()
        }
        _ => complement_cosets(a, point.image())?,
    };
    let k = Representation::trivial(iota.source());
    Ok(k.induce(&iota, &cosets)?.with_label(format!("V({})", point.label())))
}

/// Canonical points over all of P^{n-1}(K) for an n-generator truncated algebra over K.
#[derive(Clone, Debug)]
pub struct PointFamily {
    pub algebra: Arc<Algebra>,
    pub points: Vec<PiPoint>,
}

impl PointFamily {
    /// Base-changes `algebra` to GF(p^ext) and enumerates its canonical points.
    pub fn projective(algebra: &Arc<Algebra>, ext: u32) -> Result<PointFamily> {
        let f = algebra.field();
        let big = if ext == f.e() { f.clone() } else { Field::new(f.p(), ext)? };
        let alg = if big == *f { algebra.clone() } else { algebra.base_change(&big)? };
        let points = projective_points(&big, alg.num_gens())
            .into_iter()
            .map(|c| canonical_pi_point(&alg, &c))
            .collect::<Result<Vec<_>>>()?;
        Ok(PointFamily { algebra: alg, points })
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    pub fn describe(&self) -> String {
        format!("P^{}({})", self.algebra.num_gens() - 1, self.field())
    }

    pub fn index_of(&self, coords: &[Elem]) -> Option<usize> {
        let c = normalize_coords(self.field(), coords)?;
        self.points.iter().position(|p| p.coords() == Some(&c[..]))
    }

    pub fn point(&self, coords: &[Elem]) -> Option<&PiPoint> {
        self.index_of(coords).map(|i| &self.points[i])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    pub family: String,
    pub points: Vec<String>,
    #[serde(skip)]
    pub indices: Vec<usize>,
}

impl SupportSet {
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Points of the family along which M restricts non-projectively.
pub fn support(m: &Representation, family: &PointFamily) -> Result<SupportSet> {
    let mk = on_algebra(m, &family.algebra)?;
    let mut indices = Vec::new();
    for (i, pt) in family.points.iter().enumerate() {
        if pt.detects(&mk)? {
            indices.push(i);
        }
    }
    Ok(SupportSet {
        family: family.describe(),
        points: indices.iter().map(|&i| family.points[i].label()).collect(),
        indices,
    })
}

/// Whether α and β detect the same point, judged by a test module with support {𝔭(α)}.
pub fn equivalent(alpha: &PiPoint, beta: &PiPoint, test: &Representation, family: &PointFamily) -> Result<bool> {
    let supp = support(test, family)?;
    if supp.indices.len() != 1 {
        return Err(Error::BadTestModule(format!("support is {:?}", supp.points)));
    }
    if !alpha.detects(test)? {
        return Err(Error::BadTestModule(format!("test module is not detected by {}", alpha.label())));
    }
    beta.detects(test)
}

/// Class of φ∘α among the family, by scanning the test modules V(𝔮).
pub fn aut_action_on_point(phi: &Morphism, alpha: &PiPoint, family: &PointFamily) -> Result<Option<Vec<Elem>>> {
    let composite = alpha.compose(phi)?;
    let mut hits = Vec::new();
    for q in &family.points {
        let v = point_module(q)?;
        if composite.detects(&v)? {
            hits.push(q.coords().expect("canonical points carry coordinates").to_vec());
        }
    }
    Ok(if hits.len() == 1 { hits.pop() } else { None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Nobility {
    Noble,
    Ignoble,
}

/// Nobility of a point for an untwisted named structure.
pub fn nobility(structure: &str, field: &Field, coords: &[Elem]) -> Result<Nobility> {
    let c = normalize_coords(field, coords).ok_or_else(|| Error::NotFlat("zero coordinates".into()))?;
    let noble = match structure {
        "lie_primitive" | "heisenberg_primitive" => true,
        "oorttate_Zp" | "witt_G2" | "witt_Zp2" => {
            if c.len() != 1 {
                return Err(Error::ShapeMismatch(format!("{structure} has a single point")));
            }
            true
        }
        "wang_Ga2" | "wang_Ga1xZp" | "wang_ZpZp" => {
            if c.len() != 2 {
                return Err(Error::ShapeMismatch(format!("{structure} lives on P^1")));
            }
            match structure {
                "wang_Ga2" => c[1] == 0,
                "wang_Ga1xZp" => c[0] == 0 || c[1] == 0,
                _ => c.iter().all(|&x| field.in_prime_field(x)),
            }
        }
        other => return Err(Error::UnknownStructure(format!("no nobility data for {other}"))),
    };
    Ok(if noble { Nobility::Noble } else { Nobility::Ignoble })
}

/// Nobility for a possibly twisted structure, pulled back along its recorded twists.
pub fn nobility_of(delta: &Comultiplication, point: &PiPoint, family: &PointFamily) -> Result<Nobility> {
    let mut current = point.clone();
    for phi in delta.twists().iter().rev() {
        // noble for Δ^φ at 𝔮 iff noble for Δ at (φ*)⁻¹𝔮 = [φ⁻¹∘β]
        let inv = crate::algebra::invert_morphism(phi)?;
        let inv = if **inv.source() == *family.algebra {
            inv
        } else {
            base_change_morphism(&inv, &family.algebra)?
        };
        let c = aut_action_on_point(&inv, &current, family)?
            .ok_or_else(|| Error::UnknownStructure("pulled-back class is not rational over the family".into()))?;
        current = family.point(&c).expect("family point").clone();
    }
    let coords = current.coords().ok_or_else(|| Error::UnknownStructure("point without coordinates".into()))?;
    nobility(delta.base_name(), current.field(), coords)
}

/// The same morphism on the base-changed algebra.
pub fn base_change_morphism(phi: &Morphism, big: &Arc<Algebra>) -> Result<Morphism> {
    let table = phi.source().field().embedding_into(big.field())?;
    let images = phi.images().iter().map(|a| crate::algebra::embed_element(a, &table)).collect();
    Morphism::new(big, big, images)
}

/// Matrix of t on the restriction of M along the point.
pub fn restricted_action(point: &PiPoint, m: &Representation) -> Result<Matrix> {
    Ok(on_algebra(m, point.algebra())?.act(point.image()))
}
