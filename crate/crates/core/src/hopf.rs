//! Cocommutative comultiplications A → A⊗A.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{invert_morphism, Algebra, Element, Morphism};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::matrix::Matrix;

/// Named structures shipped with the library.
pub const STRUCTURE_NAMES: [&str; 8] = [
    "lie_primitive",
    "wang_Ga2",
    "wang_Ga1xZp",
    "wang_ZpZp",
    "oorttate_Zp",
    "witt_G2",
    "witt_Zp2",
    "heisenberg_primitive",
];

/// The four cocommutative structures on k[x,y]/(x^p,y^p).
pub const WANG_STRUCTURES: [&str; 4] = ["lie_primitive", "wang_Ga2", "wang_Ga1xZp", "wang_ZpZp"];

const FULL_CHECK_LIMIT: usize = 256;
const SAMPLES: usize = 64;
const PAIR_SAMPLES: usize = 256;

/// C(p, i) / p for 0 < i < p, computed over the integers.
pub fn omega_coefficients(p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut binom: u128 = 1;
    for i in 1..p {
        binom = binom * (p - i + 1) as u128 / i as u128;
        assert_eq!(binom % p as u128, 0);
        out.push((binom / p as u128 % p as u128) as u64);
    }
    out
}

/// Σ a_i ⊗ b_i placed in the tensor square.
pub fn simple_tensor(square: &Algebra, a: &Element, b: &Element) -> Element {
    let (left, right) = square.tensor_factors().expect("tensor algebra");
    let d = right.dim();
    assert_eq!(a.dim(), left.dim());
    let f = square.field();
    let mut terms = Vec::with_capacity(a.terms().len() * b.terms().len());
    for &(i, x) in a.terms() {
        for &(j, y) in b.terms() {
            terms.push((i * d + j, f.mul(x, y)));
        }
    }
    Element::from_terms(f, square.dim(), terms)
}

/// ω(a) = Σ_{i=1}^{p-1} (C(p,i)/p) a^i ⊗ a^{p-i}.
pub fn omega(square: &Algebra, a: &Element) -> Element {
    let (alg, _) = square.tensor_factors().expect("tensor algebra");
    let f = alg.field();
    let p = f.p() as u64;
    let powers: Vec<Element> = (0..=p as usize).map(|k| alg.pow(a, k)).collect();
    let mut acc = square.zero();
    for (k, c) in omega_coefficients(p).into_iter().enumerate() {
        let i = k + 1;
        let term = simple_tensor(square, &powers[i], &powers[p as usize - i]);
        acc = square.add(&acc, &square.scale(&term, f.from_int(c as i64)));
    }
    acc
}

/// x⊗1 + 1⊗x
pub fn primitive_image(square: &Algebra, a: &Element) -> Element {
    let (alg, _) = square.tensor_factors().expect("tensor algebra");
    square.add(&simple_tensor(square, a, &alg.one()), &simple_tensor(square, &alg.one(), a))
}

#[derive(Clone)]
pub struct Comultiplication {
    name: String,
    base: String,
    twists: Vec<Morphism>,
    map: Morphism,
}

impl fmt::Debug for Comultiplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Comultiplication({})", self.name)
    }
}

impl Comultiplication {
    /// Builds and verifies a comultiplication from generator images in A⊗A.
    pub fn new(algebra: &Arc<Algebra>, name: &str, images: Vec<Element>) -> Result<Comultiplication> {
        let square = Algebra::tensor_square(algebra)?;
        let map = Morphism::new(algebra, &square, images).map_err(|e| Error::AxiomViolation(e.to_string()))?;
        let c = Comultiplication { name: name.into(), base: name.into(), twists: Vec::new(), map };
        c.verify()?;
        Ok(c)
    }

    pub fn named(algebra: &Arc<Algebra>, name: &str) -> Result<Comultiplication> {
        let square = Algebra::tensor_square(algebra)?;
        let p = algebra.field().p() as usize;
        let k = algebra.num_gens();
        let gen = |g: usize| algebra.gen(g);
        let prim = |g: usize| primitive_image(&square, &gen(g));
        let grouplike = |g: usize| square.add(&prim(g), &simple_tensor(&square, &gen(g), &gen(g)));
        let truncated_shape = |bounds: &[usize]| algebra.is_truncated() && algebra.bounds() == bounds;
        let mismatch = |what: &str| Error::ShapeMismatch(format!("{name} needs {what}, got {}", algebra.describe()));
        let images: Vec<Element> = match name {
            "lie_primitive" => (0..k).map(prim).collect(),
            "heisenberg_primitive" => {
                if algebra.heisenberg_rank().is_none() {
                    return Err(mismatch("a Heisenberg algebra"));
                }
                (0..k).map(prim).collect()
            }
            "wang_Ga2" | "wang_Ga1xZp" | "wang_ZpZp" => {
                if !truncated_shape(&[p, p]) {
                    return Err(mismatch("k[x,y]/(x^p,y^p)"));
                }
                match name {
                    "wang_Ga2" => vec![prim(0), square.add(&prim(1), &omega(&square, &gen(0)))],
                    "wang_Ga1xZp" => vec![prim(0), grouplike(1)],
                    _ => vec![grouplike(0), grouplike(1)],
                }
            }
            "oorttate_Zp" => {
                if !truncated_shape(&[p]) {
                    return Err(mismatch("k[x]/x^p"));
                }
                vec![grouplike(0)]
            }
            "witt_G2" | "witt_Zp2" => {
                if !truncated_shape(&[p * p]) {
                    return Err(mismatch("k[x]/x^(p^2)"));
                }
                if name == "witt_G2" {
                    let xp = algebra.pow(&gen(0), p);
                    vec![square.add(&prim(0), &omega(&square, &xp))]
                } else {
                    vec![grouplike(0)]
                }
            }
            other => return Err(Error::UnknownStructure(other.into())),
        };
        Comultiplication::new(algebra, name, images)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.map.source()
    }
    pub fn square(&self) -> &Arc<Algebra> {
        self.map.target()
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    /// Name of the untwisted structure this one was derived from.
    pub fn base_name(&self) -> &str {
        &self.base
    }
    /// Automorphisms applied so far, oldest first.
    pub fn twists(&self) -> &[Morphism] {
        &self.twists
    }
    pub fn image(&self, g: usize) -> &Element {
        self.map.image(g)
    }
    pub fn images(&self) -> &[Element] {
        self.map.images()
    }
    pub fn as_morphism(&self) -> &Morphism {
        &self.map
    }

    pub fn delta_basis(&self, u: usize) -> &Element {
        self.map.apply_basis(u)
    }

    pub fn delta(&self, a: &Element) -> Element {
        self.map.apply(a)
    }

    /// Δ^φ = (φ⊗φ)∘Δ∘φ⁻¹.
    pub fn twist(&self, phi: &Morphism) -> Result<Comultiplication> {
        let a = self.algebra();
        if !phi.is_endomorphism() || **phi.source() != **a {
            return Err(Error::NotAutomorphism("twist must be an endomorphism of the algebra".into()));
        }
        let inv = invert_morphism(phi).map_err(|e| Error::NotAutomorphism(e.to_string()))?;
        let square = self.square();
        let d = a.dim();
        let images = (0..a.num_gens())
            .map(|g| {
                let x = self.delta(inv.image(g));
                let mut acc = square.zero();
                for &(t, c) in x.terms() {
                    let st = simple_tensor(square, phi.apply_basis(t / d), phi.apply_basis(t % d));
                    acc = square.add(&acc, &square.scale(&st, c));
                }
                acc
            })
            .collect();
        let map = Morphism::new(a, square, images).map_err(|e| Error::AxiomViolation(e.to_string()))?;
        let mut twists = self.twists.clone();
        twists.push(phi.clone());
        let c = Comultiplication {
            name: format!("{}^({})", self.name, phi.describe()),
            base: self.base.clone(),
            twists,
            map,
        };
        c.verify()?;
        Ok(c)
    }

    fn sample_basis(&self) -> Vec<usize> {
        let d = self.algebra().dim();
        if d <= FULL_CHECK_LIMIT {
            return (0..d).collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0a1);
        let mut v: Vec<usize> = (0..self.algebra().num_gens()).map(|g| self.algebra().gen_index(g)).collect();
        v.push(0);
        v.push(d - 1);
        v.extend((0..SAMPLES).map(|_| rng.gen_range(0..d)));
        v
    }

    /// Counit, cocommutativity, coassociativity and multiplicativity.
    pub fn verify(&self) -> Result<()> {
        let a = self.algebra();
        let f = a.field();
        let d = a.dim();
        let basis = self.sample_basis();
        for &u in &basis {
            let x = self.delta_basis(u);
            let b = a.basis_element(u);
            let left: Vec<(usize, Elem)> = x.terms().iter().filter(|t| t.0 / d == 0).map(|&(t, c)| (t % d, c)).collect();
            let right: Vec<(usize, Elem)> = x.terms().iter().filter(|t| t.0 % d == 0).map(|&(t, c)| (t / d, c)).collect();
            if Element::from_terms(f, d, left) != b || Element::from_terms(f, d, right) != b {
                return Err(self.violation("counit law", u));
            }
            let swapped = x.terms().iter().map(|&(t, c)| ((t % d) * d + t / d, c)).collect();
            if Element::from_terms(f, d * d, swapped) != *x {
                return Err(self.violation("cocommutativity", u));
            }
            if !self.coassociative_on(u) {
                return Err(self.violation("coassociativity", u));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0a2);
        let square = self.square();
        for _ in 0..PAIR_SAMPLES.min(d * d) {
            let (u, v) = (rng.gen_range(0..d), rng.gen_range(0..d));
            let lhs = self.delta(&a.mul_basis(u, v));
            let rhs = square.mul(self.delta_basis(u), self.delta_basis(v));
            if lhs != rhs {
                return Err(Error::AxiomViolation(format!(
                    "{}: Δ({}·{}) ≠ Δ({})Δ({})",
                    self.name,
                    a.format_monomial(u),
                    a.format_monomial(v),
                    a.format_monomial(u),
                    a.format_monomial(v)
                )));
            }
        }
        Ok(())
    }

    fn violation(&self, what: &str, u: usize) -> Error {
        Error::AxiomViolation(format!("{}: {what} fails on {}", self.name, self.algebra().format_monomial(u)))
    }

    fn coassociative_on(&self, u: usize) -> bool {
        let a = self.algebra();
        let f = a.field();
        let d = a.dim();
        let x = self.delta_basis(u);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for &(t, c) in x.terms() {
            let (i, j) = (t / d, t % d);
            for &(s, y) in self.delta_basis(i).terms() {
                left.push((s * d + j, f.mul(c, y)));
            }
            for &(s, y) in self.delta_basis(j).terms() {
                right.push((i * d * d + s, f.mul(c, y)));
            }
        }
        Element::from_terms(f, d * d * d, left) == Element::from_terms(f, d * d * d, right)
    }

    pub fn is_primitive(&self, a: &Element) -> bool {
        self.delta(a) == primitive_image(self.square(), a)
    }

    /// Basis of {a : Δ(a) = a⊗1 + 1⊗a}.
    pub fn primitive_subspace(&self) -> Vec<Element> {
        let a = self.algebra();
        let d = a.dim();
        let square = self.square();
        let cols: Vec<Vec<Elem>> = (0..d)
            .map(|u| {
                let b = a.basis_element(u);
                square.sub(self.delta_basis(u), &primitive_image(square, &b)).to_dense()
            })
            .collect();
        let m = Matrix::from_columns(a.field(), d * d, &cols);
        m.nullspace_vectors().iter().map(|v| Element::from_dense(v)).collect()
    }

    pub fn to_json(&self) -> ComultiplicationJson {
        let d = self.algebra().dim();
        let f = self.algebra().field();
        ComultiplicationJson {
            name: self.name.clone(),
            images: self
                .images()
                .iter()
                .map(|x| x.terms().iter().map(|&(t, c)| (t / d, t % d, f.digits(c))).collect())
                .collect(),
        }
    }

    pub fn from_json(algebra: &Arc<Algebra>, js: &ComultiplicationJson) -> Result<Comultiplication> {
        let d = algebra.dim();
        let f = algebra.field();
        let images = js
            .images
            .iter()
            .map(|img| {
                let mut terms = Vec::new();
                for (i, j, c) in img {
                    if *i >= d || *j >= d {
                        return Err(Error::Parse(format!("basis pair ({i},{j}) out of range")));
                    }
                    terms.push((i * d + j, f.from_digits(c)?));
                }
                Ok(Element::from_terms(f, d * d, terms))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut c = Comultiplication::new(algebra, &js.name, images)?;
        if STRUCTURE_NAMES.contains(&js.name.as_str()) {
            c.base = format!("custom:{}", js.name);
            c.name = c.base.clone();
        }
        Ok(c)
    }
}

/// Generator images as lists of (i, j, coefficient digits) pairs for e_i ⊗ e_j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComultiplicationJson {
    pub name: String,
    pub images: Vec<Vec<(usize, usize, Vec<u32>)>>,
}
