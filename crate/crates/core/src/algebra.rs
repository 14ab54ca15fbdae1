//! Finite augmented algebras with ordered monomial bases.
//!
//! Three shapes are supported: commutative truncated polynomial algebras
//! `k[x_1..x_k]/(x_i^{b_i})`, restricted enveloping algebras of Heisenberg Lie
//! algebras, and tensor products of two such algebras. Basis monomials are
//! indexed in mixed radix with the first generator least significant, so for
//! `k[x,y]/(x^2,y^2)` the basis is `1, x, y, xy`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec};
use crate::matrix::{Matrix, RowSpace};

/// Largest dimension with a stored product table.
pub const TABLE_LIMIT: usize = 1024;
/// Largest dimension with exhaustive associativity verification.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 512;
const SAMPLED_TRIPLES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    Truncated,
    Heisenberg { n: usize },
    Tensor { left: Arc<Algebra>, right: Arc<Algebra> },
}

/// A defining relation among generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// g^exp = 0
    Power { gen: usize, exp: usize },
    /// a b - b a = rhs (a generator) or 0
    Commutator { a: usize, b: usize, rhs: Option<usize> },
}

/// Element of an algebra as sparse coefficients over the basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    dim: usize,
    terms: Vec<(usize, Elem)>,
}

impl Element {
    pub fn zero(dim: usize) -> Element {
        Element { dim, terms: Vec::new() }
    }

    pub fn basis(dim: usize, i: usize) -> Element {
        assert!(i < dim);
        Element { dim, terms: vec![(i, 1)] }
    }

    /// Combine arbitrary (index, coefficient) pairs.
    pub fn from_terms(field: &Field, dim: usize, mut terms: Vec<(usize, Elem)>) -> Element {
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(usize, Elem)> = Vec::with_capacity(terms.len());
        for (i, c) in terms {
            assert!(i < dim, "basis index {i} out of range {dim}");
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(last.1, c),
                _ => out.push((i, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Element { dim, terms: out }
    }

    pub fn from_dense(v: &[Elem]) -> Element {
        Element {
            dim: v.len(),
            terms: v.iter().enumerate().filter(|t| *t.1 != 0).map(|(i, &c)| (i, c)).collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Elem> {
        let mut v = vec![0; self.dim];
        for &(i, c) in &self.terms {
            v[i] = c;
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn terms(&self) -> &[(usize, Elem)] {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, i: usize) -> Elem {
        match self.terms.binary_search_by_key(&i, |t| t.0) {
            Ok(k) => self.terms[k].1,
            Err(_) => 0,
        }
    }
}

pub struct Algebra {
    field: Field,
    shape: Shape,
    names: Vec<String>,
    bounds: Vec<usize>,
    radix: Vec<usize>,
    dim: usize,
    /// Cyclic factor dimensions n_i when built as an abelian restricted Lie algebra.
    restricted: Option<Vec<usize>>,
    table: OnceLock<ProductTable>,
}

struct ProductTable {
    offsets: Vec<u32>,
    terms: Vec<(u32, Elem)>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.shape == other.shape
            && self.bounds == other.bounds
            && self.names == other.names
    }
}
impl Eq for Algebra {}

fn default_names(k: usize) -> Vec<String> {
    const LETTERS: [&str; 4] = ["x", "y", "z", "w"];
    if k <= 4 {
        LETTERS[..k].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=k).map(|i| format!("x{i}")).collect()
    }
}

fn radix_of(bounds: &[usize]) -> (Vec<usize>, usize) {
    let mut radix = Vec::with_capacity(bounds.len());
    let mut acc = 1usize;
    for &b in bounds {
        radix.push(acc);
        acc = acc.checked_mul(b).expect("algebra dimension overflow");
    }
    (radix, acc)
}

fn is_power_of(p: usize, mut b: usize) -> bool {
    if b < p {
        return false;
    }
    while b % p == 0 {
        b /= p;
    }
    b == 1
}

impl Algebra {
    /// `k[x_1..x_k]/(x_i^{b_i})`, each bound a power of p.
    pub fn truncated_polynomial(field: &Field, bounds: &[usize]) -> Result<Arc<Algebra>> {
        Algebra::truncated_named(field, bounds, default_names(bounds.len()))
    }

    pub fn truncated_named(field: &Field, bounds: &[usize], names: Vec<String>) -> Result<Arc<Algebra>> {
        if bounds.is_empty() {
            return Err(Error::InvalidBound("at least one generator is required".into()));
        }
        let p = field.p() as usize;
        if let Some(&b) = bounds.iter().find(|&&b| !is_power_of(p, b)) {
            return Err(Error::InvalidBound(format!("{b} is not a positive power of {p}")));
        }
        if names.len() != bounds.len() {
            return Err(Error::InvalidBound("one name per generator".into()));
        }
        let (radix, dim) = radix_of(bounds);
        let alg = Algebra {
            field: field.clone(),
            shape: Shape::Truncated,
            names,
            bounds: bounds.to_vec(),
            radix,
            dim,
            restricted: None,
            table: OnceLock::new(),
        };
        alg.verify()?;
        Ok(Arc::new(alg))
    }

    /// u(n_{d_1} + ... + n_{d_k}) for nilcyclic restricted Lie algebras of the given dimensions.
    pub fn abelian_restricted(field: &Field, cyclic_dims: &[usize]) -> Result<Arc<Algebra>> {
        if cyclic_dims.is_empty() {
            return Err(Error::Unsupported("no cyclic summands given".into()));
        }
        if cyclic_dims.contains(&0) {
            return Err(Error::Unsupported("torus summands are not supported".into()));
        }
        let p = field.p() as usize;
        let bounds: Vec<usize> = cyclic_dims.iter().map(|&d| p.pow(d as u32)).collect();
        let base = Algebra::truncated_polynomial(field, &bounds)?;
        let mut alg = Arc::try_unwrap(base).ok().expect("fresh algebra");
        alg.restricted = Some(cyclic_dims.to_vec());
        Ok(Arc::new(alg))
    }

    /// u(g_n) for the Heisenberg Lie algebra of dimension 2n+1.
    ///
    /// Generators in basis order `y_1 < .. < y_n < z < x_1 < .. < x_n`.
    pub fn heisenberg(field: &Field, n: usize) -> Result<Arc<Algebra>> {
        if n == 0 {
            return Err(Error::Unsupported("Heisenberg algebra needs n >= 1".into()));
        }
        if field.p() == 2 {
            log::warn!("Heisenberg algebra in characteristic 2");
        }
        let p = field.p() as usize;
        let names: Vec<String> = if n == 1 {
            vec!["y".into(), "z".into(), "x".into()]
        } else {
            (1..=n)
                .map(|i| format!("y{i}"))
                .chain(std::iter::once("z".to_string()))
                .chain((1..=n).map(|i| format!("x{i}")))
                .collect()
        };
        let bounds = vec![p; 2 * n + 1];
        let (radix, dim) = radix_of(&bounds);
        let alg = Algebra {
            field: field.clone(),
            shape: Shape::Heisenberg { n },
            names,
            bounds,
            radix,
            dim,
            restricted: None,
            table: OnceLock::new(),
        };
        alg.verify()?;
        Ok(Arc::new(alg))
    }

    /// A ⊗ B with basis pairs (i, j) at index i * dim B + j.
    pub fn tensor(left: &Arc<Algebra>, right: &Arc<Algebra>) -> Result<Arc<Algebra>> {
        if left.field != right.field {
            return Err(Error::FieldMismatch("tensor factors over different fields".into()));
        }
        let names = left
            .names
            .iter()
            .map(|g| format!("{g}(1)"))
            .chain(right.names.iter().map(|g| format!("{g}(2)")))
            .collect();
        let bounds = left.bounds.iter().chain(&right.bounds).copied().collect();
        let dim = left.dim.checked_mul(right.dim).ok_or_else(|| {
            Error::DimensionMismatch("tensor product dimension overflow".into())
        })?;
        Ok(Arc::new(Algebra {
            field: left.field.clone(),
            shape: Shape::Tensor { left: left.clone(), right: right.clone() },
            names,
            bounds,
            radix: Vec::new(),
            dim,
            restricted: None,
            table: OnceLock::new(),
        }))
    }

    pub fn tensor_square(a: &Arc<Algebra>) -> Result<Arc<Algebra>> {
        Algebra::tensor(a, a)
    }

    /// The same presentation over an extension field.
    pub fn base_change(&self, big: &Field) -> Result<Arc<Algebra>> {
        self.field.embedding_into(big)?;
        match &self.shape {
            Shape::Truncated => {
                let a = Algebra::truncated_named(big, &self.bounds, self.names.clone())?;
                if self.restricted.is_some() {
                    let mut a = Arc::try_unwrap(a).ok().expect("fresh algebra");
                    a.restricted = self.restricted.clone();
                    return Ok(Arc::new(a));
                }
                Ok(a)
            }
            Shape::Heisenberg { n } => Algebra::heisenberg(big, *n),
            Shape::Tensor { left, right } => Algebra::tensor(&left.base_change(big)?, &right.base_change(big)?),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn num_gens(&self) -> usize {
        self.names.len()
    }
    pub fn gen_names(&self) -> &[String] {
        &self.names
    }
    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }
    pub fn is_commutative(&self) -> bool {
        match &self.shape {
            Shape::Truncated => true,
            Shape::Heisenberg { .. } => false,
            Shape::Tensor { left, right } => left.is_commutative() && right.is_commutative(),
        }
    }
    pub fn is_truncated(&self) -> bool {
        self.shape == Shape::Truncated
    }
    pub fn heisenberg_rank(&self) -> Option<usize> {
        match self.shape {
            Shape::Heisenberg { n } => Some(n),
            _ => None,
        }
    }
    pub fn tensor_factors(&self) -> Option<(&Arc<Algebra>, &Arc<Algebra>)> {
        match &self.shape {
            Shape::Tensor { left, right } => Some((left, right)),
            _ => None,
        }
    }
    pub fn cyclic_dims(&self) -> Option<&[usize]> {
        self.restricted.as_deref()
    }

    pub fn gen_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn describe(&self) -> String {
        match &self.shape {
            Shape::Truncated => {
                let rels: Vec<String> =
                    self.names.iter().zip(&self.bounds).map(|(g, b)| format!("{g}^{b}")).collect();
                format!("{}[{}]/({})", self.field, self.names.join(","), rels.join(","))
            }
            Shape::Heisenberg { n } => format!("u(g_{n}) over {}", self.field),
            Shape::Tensor { left, right } => format!("({}) ⊗ ({})", left.describe(), right.describe()),
        }
    }

    // ---- monomials ----

    /// Exponent vector of a basis monomial in generator order.
    pub fn exponents(&self, u: usize) -> Vec<usize> {
        match &self.shape {
            Shape::Tensor { left, right } => {
                let mut e = left.exponents(u / right.dim);
                e.extend(right.exponents(u % right.dim));
                e
            }
            _ => self.radix.iter().zip(&self.bounds).map(|(&r, &b)| (u / r) % b).collect(),
        }
    }

    pub fn monomial_index(&self, exps: &[usize]) -> Option<usize> {
        if exps.len() != self.num_gens() || exps.iter().zip(&self.bounds).any(|(e, b)| e >= b) {
            return None;
        }
        match &self.shape {
            Shape::Tensor { left, right } => {
                let k = left.num_gens();
                Some(left.monomial_index(&exps[..k])? * right.dim + right.monomial_index(&exps[k..])?)
            }
            _ => Some(exps.iter().zip(&self.radix).map(|(e, r)| e * r).sum()),
        }
    }

    /// Basis index of the generator monomial g.
    pub fn gen_index(&self, g: usize) -> usize {
        match &self.shape {
            Shape::Tensor { left, right } => {
                if g < left.num_gens() {
                    left.gen_index(g) * right.dim
                } else {
                    right.gen_index(g - left.num_gens())
                }
            }
            _ => self.radix[g],
        }
    }

    /// First generator letter of the normal-form word of u and the remaining monomial,
    /// so that u = g * rest exactly.
    pub fn first_letter(&self, u: usize) -> Option<(usize, usize)> {
        if u == 0 {
            return None;
        }
        match &self.shape {
            Shape::Tensor { left, right } => {
                let (i, j) = (u / right.dim, u % right.dim);
                if i != 0 {
                    let (g, rest) = left.first_letter(i).unwrap();
                    Some((g, rest * right.dim + j))
                } else {
                    let (g, rest) = right.first_letter(j).unwrap();
                    Some((g + left.num_gens(), rest))
                }
            }
            _ => {
                let g = (0..self.num_gens()).find(|&g| (u / self.radix[g]) % self.bounds[g] != 0)?;
                Some((g, u - self.radix[g]))
            }
        }
    }

    /// Normal-form word of a monomial as a list of generators, left to right.
    pub fn word(&self, mut u: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((g, rest)) = self.first_letter(u) {
            w.push(g);
            u = rest;
        }
        w
    }

    pub fn format_monomial(&self, u: usize) -> String {
        if u == 0 {
            return "1".into();
        }
        match &self.shape {
            Shape::Tensor { left, right } => format!(
                "{}⊗{}",
                left.format_monomial(u / right.dim),
                right.format_monomial(u % right.dim)
            ),
            _ => {
                let mut s = String::new();
                for (g, e) in self.exponents(u).into_iter().enumerate() {
                    match e {
                        0 => {}
                        1 => s.push_str(&self.names[g]),
                        _ => s.push_str(&format!("{}^{e}", self.names[g])),
                    }
                }
                s
            }
        }
    }

    pub fn format(&self, a: &Element) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = a
            .terms
            .iter()
            .map(|&(u, c)| {
                let m = self.format_monomial(u);
                match (c, u) {
                    (1, _) => m,
                    (_, 0) => self.field.format(c),
                    _ => format!("{}*{m}", self.field.format(c)),
                }
            })
            .collect();
        parts.join(" + ")
    }

    // ---- elements ----

    pub fn zero(&self) -> Element {
        Element::zero(self.dim)
    }
    pub fn one(&self) -> Element {
        Element::basis(self.dim, 0)
    }
    pub fn gen(&self, g: usize) -> Element {
        Element::basis(self.dim, self.gen_index(g))
    }
    pub fn basis_element(&self, u: usize) -> Element {
        Element::basis(self.dim, u)
    }
    pub fn monomial(&self, exps: &[usize]) -> Element {
        match self.monomial_index(exps) {
            Some(u) => Element::basis(self.dim, u),
            None => self.zero(),
        }
    }
    pub fn scalar(&self, c: Elem) -> Element {
        Element::from_terms(&self.field, self.dim, vec![(0, c)])
    }

    fn check(&self, a: &Element) {
        assert_eq!(a.dim, self.dim, "element of dimension {} used in {}", a.dim, self.describe());
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        self.check(a);
        self.check(b);
        let terms = a.terms.iter().chain(&b.terms).copied().collect();
        Element::from_terms(&self.field, self.dim, terms)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.add(a, &self.scale(b, self.field.neg(1)))
    }

    pub fn scale(&self, a: &Element, c: Elem) -> Element {
        if c == 0 {
            return self.zero();
        }
        Element { dim: a.dim, terms: a.terms.iter().map(|&(i, x)| (i, self.field.mul(x, c))).collect() }
    }

    pub fn linear_combination(&self, items: &[(Elem, &Element)]) -> Element {
        let mut terms = Vec::new();
        for &(c, a) in items {
            self.check(a);
            terms.extend(a.terms.iter().map(|&(i, x)| (i, self.field.mul(c, x))));
        }
        Element::from_terms(&self.field, self.dim, terms)
    }

    pub fn counit(&self, a: &Element) -> Elem {
        a.coeff(0)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.check(a);
        self.check(b);
        let f = &self.field;
        let mut terms = Vec::new();
        for &(u, cu) in &a.terms {
            for &(v, cv) in &b.terms {
                let c = f.mul(cu, cv);
                self.mul_basis_into(u, v, c, &mut terms);
            }
        }
        Element::from_terms(f, self.dim, terms)
    }

    pub fn pow(&self, a: &Element, k: usize) -> Element {
        let mut out = self.one();
        for _ in 0..k {
            out = self.mul(&out, a);
        }
        out
    }

    pub fn commutator(&self, a: &Element, b: &Element) -> Element {
        self.sub(&self.mul(a, b), &self.mul(b, a))
    }

    /// Product of two basis monomials.
    pub fn mul_basis(&self, u: usize, v: usize) -> Element {
        let mut terms = Vec::new();
        self.mul_basis_into(u, v, 1, &mut terms);
        Element::from_terms(&self.field, self.dim, terms)
    }

    /// Append c * (u v) to `out` (unnormalized).
    fn mul_basis_into(&self, u: usize, v: usize, c: Elem, out: &mut Vec<(usize, Elem)>) {
        let f = &self.field;
        match &self.shape {
            Shape::Truncated => {
                let mut w = 0;
                for g in 0..self.bounds.len() {
                    let (r, b) = (self.radix[g], self.bounds[g]);
                    let e = (u / r) % b + (v / r) % b;
                    if e >= b {
                        return;
                    }
                    w += e * r;
                }
                out.push((w, c));
            }
            Shape::Heisenberg { .. } => {
                if self.dim <= TABLE_LIMIT {
                    let t = self.product_table();
                    let k = u * self.dim + v;
                    for &(w, x) in &t.terms[t.offsets[k] as usize..t.offsets[k + 1] as usize] {
                        out.push((w as usize, f.mul(c, x)));
                    }
                } else {
                    let mut cur = vec![(v, c)];
                    for &g in self.word(u).iter().rev() {
                        cur = self.heisenberg_left_gen(g, &cur);
                    }
                    out.extend(cur);
                }
            }
            Shape::Tensor { left, right } => {
                let d = right.dim;
                let l = left.mul_basis(u / d, v / d);
                if l.is_zero() {
                    return;
                }
                let r = right.mul_basis(u % d, v % d);
                for &(i, a) in &l.terms {
                    for &(j, b) in &r.terms {
                        out.push((i * d + j, f.mul(c, f.mul(a, b))));
                    }
                }
            }
        }
    }

    /// Left multiplication by a Heisenberg generator on a sparse vector.
    fn heisenberg_left_gen(&self, g: usize, v: &[(usize, Elem)]) -> Vec<(usize, Elem)> {
        let Shape::Heisenberg { n } = self.shape else { unreachable!() };
        let f = &self.field;
        let p = self.bounds[0];
        let z = n;
        let mut out = Vec::with_capacity(2 * v.len());
        for &(u, c) in v {
            let exp = |k: usize| (u / self.radix[k]) % p;
            if g <= z {
                // y_i and z: the letter is already in front
                if exp(g) + 1 < p {
                    out.push((u + self.radix[g], c));
                }
            } else {
                // x_i y^a z^c x^b = y^a z^c x^{b+e_i} + a_i y^{a-e_i} z^{c+1} x^b
                let i = g - z - 1;
                if exp(g) + 1 < p {
                    out.push((u + self.radix[g], c));
                }
                let ai = exp(i);
                if ai > 0 && exp(z) + 1 < p {
                    let w = u - self.radix[i] + self.radix[z];
                    out.push((w, f.mul(c, f.from_int(ai as i64))));
                }
            }
        }
        let e = Element::from_terms(f, self.dim, out);
        e.terms
    }

    fn product_table(&self) -> &ProductTable {
        self.table.get_or_init(|| {
            let d = self.dim;
            let mut rows: Vec<Vec<Vec<(usize, Elem)>>> = Vec::with_capacity(d);
            rows.push((0..d).map(|v| vec![(v, 1)]).collect());
            for u in 1..d {
                let (g, rest) = self.first_letter(u).unwrap();
                let row = (0..d).map(|v| self.heisenberg_left_gen(g, &rows[rest][v])).collect();
                rows.push(row);
            }
            let mut offsets = Vec::with_capacity(d * d + 1);
            let mut terms = Vec::new();
            offsets.push(0u32);
            for row in &rows {
                for cell in row {
                    terms.extend(cell.iter().map(|&(w, c)| (w as u32, c)));
                    offsets.push(terms.len() as u32);
                }
            }
            ProductTable { offsets, terms }
        })
    }

    /// Defining relations in terms of generator indices.
    pub fn relations(&self) -> Vec<Relation> {
        let k = self.num_gens();
        let mut rels: Vec<Relation> =
            (0..k).map(|g| Relation::Power { gen: g, exp: self.bounds[g] }).collect();
        match &self.shape {
            Shape::Truncated => {
                for a in 0..k {
                    for b in a + 1..k {
                        rels.push(Relation::Commutator { a, b, rhs: None });
                    }
                }
            }
            Shape::Heisenberg { n } => {
                let n = *n;
                for a in 0..k {
                    for b in a + 1..k {
                        // x_i = n+1+i, y_i = i
                        let rhs = (b > n && a < n && b - n - 1 == a).then_some(n);
                        // [x_i, y_i] = z, written as Commutator{a: x_i, b: y_i}
                        match rhs {
                            Some(z) => rels.push(Relation::Commutator { a: b, b: a, rhs: Some(z) }),
                            None => rels.push(Relation::Commutator { a, b, rhs: None }),
                        }
                    }
                }
            }
            Shape::Tensor { left, right } => {
                rels.clear();
                let kl = left.num_gens();
                for r in left.relations() {
                    rels.push(r);
                }
                for r in right.relations() {
                    rels.push(match r {
                        Relation::Power { gen, exp } => Relation::Power { gen: gen + kl, exp },
                        Relation::Commutator { a, b, rhs } => {
                            Relation::Commutator { a: a + kl, b: b + kl, rhs: rhs.map(|z| z + kl) }
                        }
                    });
                }
                for a in 0..kl {
                    for b in kl..k {
                        rels.push(Relation::Commutator { a, b, rhs: None });
                    }
                }
            }
        }
        rels
    }

    /// Check that `images` (elements of `target`, one per generator of self) satisfy every relation.
    pub fn check_relations_in(&self, target: &Algebra, images: &[Element]) -> Result<()> {
        for rel in self.relations() {
            let value = match rel {
                Relation::Power { gen, exp } => target.pow(&images[gen], exp),
                Relation::Commutator { a, b, rhs } => {
                    let c = target.commutator(&images[a], &images[b]);
                    match rhs {
                        Some(z) => target.sub(&c, &images[z]),
                        None => c,
                    }
                }
            };
            if !value.is_zero() {
                return Err(Error::RelationViolated(format!(
                    "{} fails: {}",
                    self.format_relation(&rel),
                    target.format(&value)
                )));
            }
        }
        Ok(())
    }

    /// Check that matrices satisfy every relation.
    pub fn check_relations_matrices(&self, mats: &[Matrix]) -> Result<()> {
        for rel in self.relations() {
            let ok = match rel {
                Relation::Power { gen, exp } => mats[gen].pow(exp).is_zero(),
                Relation::Commutator { a, b, rhs } => {
                    let ab = mats[a].mul(&mats[b])?;
                    let ba = mats[b].mul(&mats[a])?;
                    let mut c = ab.sub(&ba)?;
                    if let Some(z) = rhs {
                        c = c.sub(&mats[z])?;
                    }
                    c.is_zero()
                }
            };
            if !ok {
                return Err(Error::RelationViolated(format!(
                    "{} fails on the action matrices",
                    self.format_relation(&rel)
                )));
            }
        }
        Ok(())
    }

    pub fn format_relation(&self, rel: &Relation) -> String {
        match *rel {
            Relation::Power { gen, exp } => format!("{}^{exp} = 0", self.names[gen]),
            Relation::Commutator { a, b, rhs } => format!(
                "[{},{}] = {}",
                self.names[a],
                self.names[b],
                rhs.map_or("0".to_string(), |z| self.names[z].clone())
            ),
        }
    }

    /// Matrix of left multiplication by `a` (columns indexed by basis monomials).
    pub fn left_mul_matrix(&self, a: &Element) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.dim, self.dim);
        for v in 0..self.dim {
            let prod = self.mul(a, &Element::basis(self.dim, v));
            for &(w, c) in prod.terms() {
                m.set(w, v, c);
            }
        }
        m
    }

    /// Matrix of right multiplication by `a`.
    pub fn right_mul_matrix(&self, a: &Element) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.dim, self.dim);
        for v in 0..self.dim {
            let prod = self.mul(&Element::basis(self.dim, v), a);
            for &(w, c) in prod.terms() {
                m.set(w, v, c);
            }
        }
        m
    }

    /// Product of top generator powers in basis order.
    pub fn integral(&self) -> Element {
        let top: Vec<usize> = self.bounds.iter().map(|b| b - 1).collect();
        self.monomial(&top)
    }

    /// Upper bound on the nilpotency index of the augmentation ideal.
    pub fn loewy_bound(&self) -> usize {
        let weights: Vec<usize> = match &self.shape {
            Shape::Heisenberg { n } => (0..self.num_gens()).map(|g| if g == *n { 2 } else { 1 }).collect(),
            _ => vec![1; self.num_gens()],
        };
        self.bounds.iter().zip(&weights).map(|(b, w)| (b - 1) * w).sum::<usize>() + 1
    }

    /// p-nilpotent generators of order 1 for abelian restricted algebras: x_i^{p^{n_i-1}}.
    pub fn nullcone_generators(&self) -> Vec<Element> {
        let p = self.field.p() as usize;
        (0..self.num_gens())
            .map(|g| {
                let mut exps = vec![0; self.num_gens()];
                exps[g] = self.bounds[g] / p;
                self.monomial(&exps)
            })
            .collect()
    }

    fn verify(&self) -> Result<()> {
        // unit
        for u in [0, self.dim - 1, self.dim / 2] {
            if self.mul_basis(0, u) != self.basis_element(u) || self.mul_basis(u, 0) != self.basis_element(u) {
                return Err(Error::RelationViolated("identity monomial is not a unit".into()));
            }
        }
        self.check_relations_in(self, &(0..self.num_gens()).map(|g| self.gen(g)).collect::<Vec<_>>())?;
        self.verify_associativity()?;
        self.verify_socle()
    }

    fn verify_associativity(&self) -> Result<()> {
        let d = self.dim;
        let check = |u: usize, v: usize, w: usize| -> Result<()> {
            let left = self.mul(&self.mul_basis(u, v), &self.basis_element(w));
            let right = self.mul(&self.basis_element(u), &self.mul_basis(v, w));
            if left != right {
                return Err(Error::RelationViolated(format!(
                    "associativity fails on ({}, {}, {})",
                    self.format_monomial(u),
                    self.format_monomial(v),
                    self.format_monomial(w)
                )));
            }
            Ok(())
        };
        if self.is_commutative() && matches!(self.shape, Shape::Truncated) {
            // monomial multiplication adds exponent vectors
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..SAMPLED_TRIPLES.min(d * d * d) {
                check(rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d))?;
            }
            return Ok(());
        }
        if d <= EXHAUSTIVE_ASSOC_LIMIT {
            self.verify_associativity_exhaustive()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..SAMPLED_TRIPLES {
                check(rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d))?;
            }
            Ok(())
        }
    }

    /// (uv)w = u(vw) for every basis triple, using dense accumulators.
    fn verify_associativity_exhaustive(&self) -> Result<()> {
        let d = self.dim;
        let f = &self.field;
        let mut lhs = vec![0 as Elem; d];
        let mut rhs = vec![0 as Elem; d];
        let mut scratch = Vec::new();
        let prods: Vec<Element> = (0..d * d).map(|k| self.mul_basis(k / d, k % d)).collect();
        for u in 0..d {
            for v in 0..d {
                let uv = &prods[u * d + v];
                for w in 0..d {
                    for &(t, c) in uv.terms() {
                        for &(s, x) in prods[t * d + w].terms() {
                            lhs[s] = f.add(lhs[s], f.mul(c, x));
                        }
                    }
                    for &(t, c) in prods[v * d + w].terms() {
                        for &(s, x) in prods[u * d + t].terms() {
                            rhs[s] = f.add(rhs[s], f.mul(c, x));
                        }
                    }
                    scratch.clear();
                    scratch.extend(uv.terms().iter().flat_map(|&(t, _)| prods[t * d + w].terms()));
                    scratch.extend(prods[v * d + w].terms().iter().flat_map(|&(t, _)| prods[u * d + t].terms()));
                    for &(s, _) in &scratch {
                        if lhs[s] != rhs[s] {
                            return Err(Error::RelationViolated(format!(
                                "associativity fails on ({}, {}, {})",
                                self.format_monomial(u),
                                self.format_monomial(v),
                                self.format_monomial(w)
                            )));
                        }
                    }
                    for &(s, _) in &scratch {
                        lhs[s] = 0;
                        rhs[s] = 0;
                    }
                }
            }
        }
        Ok(())
    }

    fn verify_socle(&self) -> Result<()> {
        let lam = self.integral();
        if lam.is_zero() {
            return Err(Error::NoIntegral("top monomial vanishes".into()));
        }
        for g in 0..self.num_gens() {
            let x = self.gen(g);
            if !self.mul(&x, &lam).is_zero() || !self.mul(&lam, &x).is_zero() {
                return Err(Error::NoIntegral(format!("{} does not kill the integral", self.names[g])));
            }
        }
        if self.dim <= TABLE_LIMIT {
            let mut rs = RowSpace::new(&self.field, self.dim);
            for g in 0..self.num_gens() {
                let m = self.left_mul_matrix(&self.gen(g));
                for i in 0..self.dim {
                    rs.insert(m.row(i).to_vec());
                }
            }
            if rs.rank() + 1 != self.dim {
                return Err(Error::NoIntegral(format!(
                    "socle has dimension {}, expected 1",
                    self.dim - rs.rank()
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<AlgebraJson> {
        let relation = match self.shape {
            Shape::Truncated => "truncated_poly",
            Shape::Heisenberg { .. } => "heisenberg",
            Shape::Tensor { .. } => {
                return Err(Error::Unsupported("tensor products are not serialized".into()))
            }
        };
        Ok(AlgebraJson {
            field: self.field.spec(),
            relation: relation.into(),
            generators: self
                .names
                .iter()
                .zip(&self.bounds)
                .map(|(n, &b)| GeneratorJson { name: n.clone(), bound: b })
                .collect(),
            n: self.heisenberg_rank(),
        })
    }

    pub fn from_json(json: &AlgebraJson) -> Result<Arc<Algebra>> {
        let field = Field::from_spec(json.field)?;
        match json.relation.as_str() {
            "truncated_poly" => {
                let bounds: Vec<usize> = json.generators.iter().map(|g| g.bound).collect();
                let names = json.generators.iter().map(|g| g.name.clone()).collect();
                Algebra::truncated_named(&field, &bounds, names)
            }
            "heisenberg" => {
                let n = json.n.unwrap_or((json.generators.len().max(3) - 1) / 2);
                Algebra::heisenberg(&field, n)
            }
            other => Err(Error::Parse(format!("unknown relation kind {other:?}"))),
        }
    }
}

/// Push coefficients through a field embedding table.
pub fn embed_element(a: &Element, table: &[Elem]) -> Element {
    Element { dim: a.dim, terms: a.terms.iter().map(|&(i, c)| (i, table[c as usize])).collect() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub field: FieldSpec,
    pub relation: String,
    pub generators: Vec<GeneratorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

/// Sparse element as (basis index, coefficient digits) pairs.
pub type ElementJson = Vec<(usize, Vec<u32>)>;

pub fn element_to_json(field: &Field, a: &Element) -> ElementJson {
    a.terms().iter().map(|&(i, c)| (i, field.digits(c))).collect()
}

pub fn element_from_json(field: &Field, dim: usize, js: &ElementJson) -> Result<Element> {
    let mut terms = Vec::new();
    for (i, d) in js {
        if *i >= dim {
            return Err(Error::Parse(format!("basis index {i} out of range {dim}")));
        }
        terms.push((*i, field.from_digits(d)?));
    }
    Ok(Element::from_terms(field, dim, terms))
}

/// Algebra map given on generators.
pub struct Morphism {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    images: Vec<Element>,
    basis_images: OnceLock<Vec<Element>>,
}

impl Clone for Morphism {
    fn clone(&self) -> Self {
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images.clone(),
            basis_images: OnceLock::new(),
        }
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(g, img)| format!("{} ↦ {}", self.source.names[g], self.target.format(img)))
            .collect();
        write!(f, "Morphism[{}]", parts.join(", "))
    }
}

impl Morphism {
    /// Validates relations and augmentation.
    pub fn new(source: &Arc<Algebra>, target: &Arc<Algebra>, images: Vec<Element>) -> Result<Morphism> {
        if images.len() != source.num_gens() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                source.num_gens()
            )));
        }
        if source.field != target.field {
            return Err(Error::FieldMismatch("morphism between algebras over different fields".into()));
        }
        if let Some(img) = images.iter().find(|a| a.dim() != target.dim) {
            return Err(Error::DimensionMismatch(format!("image of dimension {}", img.dim())));
        }
        for (g, img) in images.iter().enumerate() {
            if target.counit(img) != 0 {
                return Err(Error::NotAugmented(format!(
                    "{} ↦ {} has nonzero counit",
                    source.names[g],
                    target.format(img)
                )));
            }
        }
        source.check_relations_in(target, &images)?;
        Ok(Morphism { source: source.clone(), target: target.clone(), images, basis_images: OnceLock::new() })
    }

    pub fn identity(a: &Arc<Algebra>) -> Morphism {
        let images = (0..a.num_gens()).map(|g| a.gen(g)).collect();
        Morphism { source: a.clone(), target: a.clone(), images, basis_images: OnceLock::new() }
    }

    /// Automorphism sending generator `g` to `g + extra[g]`, other generators fixed.
    pub fn from_substitutions(a: &Arc<Algebra>, subs: &[(usize, Element)]) -> Result<Morphism> {
        let mut images: Vec<Element> = (0..a.num_gens()).map(|g| a.gen(g)).collect();
        for (g, img) in subs {
            images[*g] = img.clone();
        }
        Morphism::new(a, a, images)
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }
    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }
    pub fn images(&self) -> &[Element] {
        &self.images
    }
    pub fn image(&self, g: usize) -> &Element {
        &self.images[g]
    }
    /// Non-identity generator images, e.g. "y ↦ y + x^2", or "id".
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .filter(|(g, img)| !self.is_endomorphism() || **img != self.source.gen(*g))
            .map(|(g, img)| format!("{} ↦ {}", self.source.names[g], self.target.format(img)))
            .collect();
        if parts.is_empty() {
            "id".into()
        } else {
            parts.join(", ")
        }
    }

    pub fn is_endomorphism(&self) -> bool {
        *self.source == *self.target
    }

    fn basis_table(&self) -> &[Element] {
        self.basis_images.get_or_init(|| {
            let mut out: Vec<Element> = Vec::with_capacity(self.source.dim);
            out.push(self.target.one());
            for u in 1..self.source.dim {
                let (g, rest) = self.source.first_letter(u).unwrap();
                let img = self.target.mul(&self.images[g], &out[rest]);
                out.push(img);
            }
            out
        })
    }

    pub fn apply_basis(&self, u: usize) -> &Element {
        &self.basis_table()[u]
    }

    pub fn apply(&self, a: &Element) -> Element {
        assert_eq!(a.dim(), self.source.dim);
        let table = self.basis_table();
        let items: Vec<(Elem, &Element)> = a.terms().iter().map(|&(u, c)| (c, &table[u])).collect();
        self.target.linear_combination(&items)
    }

    /// self ∘ other
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if *other.target != *self.source {
            return Err(Error::AlgebraMismatch("composition of incompatible morphisms".into()));
        }
        let images = other.images.iter().map(|a| self.apply(a)).collect();
        Ok(Morphism {
            source: other.source.clone(),
            target: self.target.clone(),
            images,
            basis_images: OnceLock::new(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.is_endomorphism() && self.images.iter().enumerate().all(|(g, img)| *img == self.source.gen(g))
    }

    /// Matrix of the underlying linear map (columns = source basis).
    pub fn matrix(&self) -> Matrix {
        let table = self.basis_table();
        let mut m = Matrix::zeros(self.target.field(), self.target.dim, self.source.dim);
        for (u, img) in table.iter().enumerate() {
            for &(w, c) in img.terms() {
                m.set(w, u, c);
            }
        }
        m
    }

    /// Both compositions fix every basis element.
    pub fn is_inverse_of(&self, other: &Morphism) -> bool {
        let (Ok(a), Ok(b)) = (self.compose(other), other.compose(self)) else {
            return false;
        };
        let id_on_basis = |m: &Morphism| (0..m.source.dim).all(|u| *m.apply_basis(u) == m.source.basis_element(u));
        id_on_basis(&a) && id_on_basis(&b)
    }

    pub fn to_json(&self) -> MorphismJson {
        MorphismJson { images: self.images.iter().map(|a| element_to_json(&self.source.field, a)).collect() }
    }

    pub fn from_json(source: &Arc<Algebra>, target: &Arc<Algebra>, js: &MorphismJson) -> Result<Morphism> {
        let images = js
            .images
            .iter()
            .map(|e| element_from_json(&target.field, target.dim, e))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(source, target, images)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub images: Vec<ElementJson>,
}

/// Inverse of an augmented automorphism of unipotent-plus-linear shape.
///
/// The linear part on generators is inverted first; the remaining unipotent
/// map is inverted by the iteration ψ(g) ← ψ(g) − (φ(ψ(g)) − g).
pub fn invert_morphism(phi: &Morphism) -> Result<Morphism> {
    let a = phi.source.clone();
    if !phi.is_endomorphism() {
        return Err(Error::NotInvertible("source and target differ".into()));
    }
    let f = a.field().clone();
    let k = a.num_gens();
    for (g, img) in phi.images.iter().enumerate() {
        if a.counit(img) != 0 {
            return Err(Error::NotAugmented(format!("image of {} has nonzero counit", a.names[g])));
        }
    }
    // linear part: lin[h][g] = coefficient of generator h in phi(g)
    let lin = Matrix::from_fn(&f, k, k, |h, g| phi.images[g].coeff(a.gen_index(h)));
    let lin_inv = lin
        .inverse()
        .ok_or_else(|| Error::NotInvertible("linear part on generators is singular".into()))?;
    let lambda_inv_images: Vec<Element> = (0..k)
        .map(|g| {
            let items: Vec<(Elem, Element)> = (0..k).map(|h| (lin_inv.get(h, g), a.gen(h))).collect();
            let refs: Vec<(Elem, &Element)> = items.iter().map(|(c, e)| (*c, e)).collect();
            a.linear_combination(&refs)
        })
        .collect();
    let lambda_inv = Morphism::new(&a, &a, lambda_inv_images)
        .map_err(|e| Error::NotInvertible(format!("linear part does not lift to an automorphism: {e}")))?;
    let unipotent = phi.compose(&lambda_inv)?;
    let mut psi: Vec<Element> = (0..k).map(|g| a.gen(g)).collect();
    let bound = a.loewy_bound() + 1;
    let mut converged = false;
    for _ in 0..=bound {
        let errors: Vec<Element> =
            (0..k).map(|g| a.sub(&unipotent.apply(&psi[g]), &a.gen(g))).collect();
        if errors.iter().all(|e| e.is_zero()) {
            converged = true;
            break;
        }
        for g in 0..k {
            psi[g] = a.sub(&psi[g], &errors[g]);
        }
    }
    if !converged {
        return Err(Error::NotInvertible(format!("iteration did not converge within {bound} steps")));
    }
    let psi = Morphism::new(&a, &a, psi)?;
    let inverse = lambda_inv.compose(&psi)?;
    if !inverse.is_inverse_of(phi) {
        return Err(Error::NotInvertible("computed map is not a two-sided inverse".into()));
    }
    Ok(inverse)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn klein_basis_and_integral() {
        let a = Algebra::truncated_polynomial(&f(2), &[2, 2]).unwrap();
        assert_eq!(a.dim(), 4);
        let labels: Vec<String> = (0..4).map(|u| a.format_monomial(u)).collect();
        assert_eq!(labels, ["1", "x", "y", "xy"]);
        assert_eq!(a.format(&a.integral()), "xy");
        let x = a.gen(0);
        let y = a.gen(1);
        // (x+y)^2 = 2xy = 0 in characteristic 2
        assert!(a.pow(&a.add(&x, &y), 2).is_zero());
        let b = Algebra::truncated_polynomial(&f(3), &[3, 3]).unwrap();
        let s = b.add(&b.gen(0), &b.gen(1));
        let expected = b.linear_combination(&[
            (1, &b.monomial(&[2, 0])),
            (2, &b.monomial(&[1, 1])),
            (1, &b.monomial(&[0, 2])),
        ]);
        assert_eq!(b.pow(&s, 2), expected);
    }

    #[test]
    fn truncated_builders() {
        assert_eq!(Algebra::truncated_polynomial(&f(3), &[3]).unwrap().dim(), 3);
        assert!(matches!(Algebra::truncated_polynomial(&f(3), &[4]), Err(Error::InvalidBound(_))));
        assert!(matches!(Algebra::truncated_polynomial(&f(2), &[1]), Err(Error::InvalidBound(_))));
        let big = Algebra::truncated_polynomial(&f(2), &[8, 8]).unwrap();
        assert_eq!(big.dim(), 64);
        let ab = Algebra::abelian_restricted(&f(2), &[1, 1, 1]).unwrap();
        assert_eq!(ab.bounds(), &[2, 2, 2]);
        let ab2 = Algebra::abelian_restricted(&f(2), &[2, 2]).unwrap();
        assert_eq!(ab2.bounds(), &[4, 4]);
        assert_eq!(ab2.format(&ab2.nullcone_generators()[1]), "y^2");
        assert!(Algebra::abelian_restricted(&f(2), &[1, 0]).is_err());
    }

    #[test]
    fn heisenberg_straightening() {
        let a = Algebra::heisenberg(&f(3), 1).unwrap();
        assert_eq!(a.dim(), 27);
        let (y, z, x) = (a.gen(0), a.gen(1), a.gen(2));
        assert_eq!(a.mul(&x, &y), a.add(&a.mul(&y, &x), &z));
        assert_eq!(a.format(&a.mul(&x, &y)), "z + yx");
        for u in 0..a.dim() {
            let b = a.basis_element(u);
            assert_eq!(a.mul(&z, &b), a.mul(&b, &z));
        }
        // x * y^2 = y^2 x + 2 y z
        let y2 = a.monomial(&[2, 0, 0]);
        let expected = a.add(&a.monomial(&[2, 0, 1]), &a.scale(&a.monomial(&[1, 1, 0]), 2));
        assert_eq!(a.mul(&x, &y2), expected);
    }

    /// Words in y, z, x rewritten one xy -> yx + z step at a time.
    fn brute_force_normal_form(p: usize, word: Vec<u8>) -> std::collections::BTreeMap<(usize, usize, usize), i64> {
        use std::collections::BTreeMap;
        let mut pending: Vec<(Vec<u8>, i64)> = vec![(word, 1)];
        let mut out: BTreeMap<(usize, usize, usize), i64> = BTreeMap::new();
        while let Some((w, c)) = pending.pop() {
            // move z letters to the front first: z is central
            if let Some(pos) = w.windows(2).position(|s| s[0] != b'z' && s[1] == b'z') {
                let mut w2 = w.clone();
                w2.swap(pos, pos + 1);
                pending.push((w2, c));
                continue;
            }
            if let Some(pos) = w.windows(2).position(|s| s[0] == b'x' && s[1] == b'y') {
                let mut swapped = w.clone();
                swapped.swap(pos, pos + 1);
                pending.push((swapped, c));
                let mut with_z = w[..pos].to_vec();
                with_z.push(b'z');
                with_z.extend_from_slice(&w[pos + 2..]);
                pending.push((with_z, c));
                continue;
            }
            // now of the form z^c y^a x^b
            let cz = w.iter().filter(|&&l| l == b'z').count();
            let cy = w.iter().filter(|&&l| l == b'y').count();
            let cx = w.iter().filter(|&&l| l == b'x').count();
            if cz < p && cy < p && cx < p {
                *out.entry((cy, cz, cx)).or_insert(0) += c;
            }
        }
        out.retain(|_, c| c.rem_euclid(p as i64) != 0);
        out.values_mut().for_each(|c| *c = c.rem_euclid(p as i64));
        out
    }

    #[test]
    fn heisenberg_products_match_brute_force_rewriting() {
        let p = 3;
        let a = Algebra::heisenberg(&f(3), 1).unwrap();
        let word_of = |u: usize| -> Vec<u8> {
            let e = a.exponents(u);
            let mut w = vec![b'y'; e[0]];
            w.extend(vec![b'z'; e[1]]);
            w.extend(vec![b'x'; e[2]]);
            w
        };
        for u in 0..a.dim() {
            for v in 0..a.dim() {
                let mut w = word_of(u);
                w.extend(word_of(v));
                let expected = brute_force_normal_form(p, w);
                let got = a.mul_basis(u, v);
                let got: std::collections::BTreeMap<(usize, usize, usize), i64> = got
                    .terms()
                    .iter()
                    .map(|&(t, c)| {
                        let e = a.exponents(t);
                        ((e[0], e[1], e[2]), c as i64)
                    })
                    .collect();
                assert_eq!(got, expected, "{} * {}", a.format_monomial(u), a.format_monomial(v));
            }
        }
    }

    #[test]
    fn heisenberg_higher_rank_order_and_center() {
        let a = Algebra::heisenberg(&f(3), 2).unwrap();
        assert_eq!(a.dim(), 243);
        assert_eq!(a.gen_names(), &["y1", "y2", "z", "x1", "x2"]);
        let (y1, y2, z, x1, x2) = (a.gen(0), a.gen(1), a.gen(2), a.gen(3), a.gen(4));
        assert_eq!(a.commutator(&x1, &y1), z);
        assert_eq!(a.commutator(&x2, &y2), z);
        assert!(a.commutator(&x1, &y2).is_zero());
        assert!(a.commutator(&x1, &x2).is_zero());
    }

    #[test]
    fn tensor_square_products() {
        let a = Algebra::truncated_polynomial(&f(2), &[2, 2]).unwrap();
        let t = Algebra::tensor_square(&a).unwrap();
        assert_eq!(t.dim(), 16);
        // (x⊗1)(1⊗y) = x⊗y
        let x1 = t.gen(0);
        let y2 = t.gen(3);
        let prod = t.mul(&x1, &y2);
        assert_eq!(prod, t.basis_element(1 * 4 + 2));
        assert_eq!(t.format(&prod), "x⊗y");
        let h = Algebra::heisenberg(&f(3), 1).unwrap();
        let th = Algebra::tensor_square(&h).unwrap();
        let (yl, xl) = (th.gen(0), th.gen(2));
        assert_eq!(th.commutator(&xl, &yl), th.gen(1));
    }

    #[test]
    fn unit_law_everywhere() {
        for alg in [
            Algebra::truncated_polynomial(&f(3), &[3, 9]).unwrap(),
            Algebra::heisenberg(&f(5), 1).unwrap(),
        ] {
            for u in 0..alg.dim() {
                let b = alg.basis_element(u);
                assert_eq!(alg.mul(&alg.one(), &b), b);
                assert_eq!(alg.mul(&b, &alg.one()), b);
            }
        }
    }

    #[test]
    fn invert_named_automorphisms() {
        // y -> y + x^2 on k[x,y]/(x^p,y^p)
        for p in [3u32, 5, 7] {
            let a = Algebra::truncated_polynomial(&f(p), &[p as usize, p as usize]).unwrap();
            let x2 = a.monomial(&[2, 0]);
            let phi = Morphism::from_substitutions(&a, &[(1, a.add(&a.gen(1), &x2))]).unwrap();
            let psi = invert_morphism(&phi).unwrap();
            assert_eq!(*psi.image(1), a.sub(&a.gen(1), &x2));
            assert_eq!(*psi.image(0), a.gen(0));
        }
        // x -> x + (yz)^{p-1} on u(g_1)
        for p in [3u32, 5] {
            let h = Algebra::heisenberg(&f(p), 1).unwrap();
            let q = p as usize - 1;
            let yz = h.monomial(&[q, q, 0]);
            let phi = Morphism::from_substitutions(&h, &[(2, h.add(&h.gen(2), &yz))]).unwrap();
            let psi = invert_morphism(&phi).unwrap();
            assert_eq!(*psi.image(2), h.sub(&h.gen(2), &yz));
            assert_eq!(*psi.image(0), h.gen(0));
            assert_eq!(*psi.image(1), h.gen(1));
        }
        let a = Algebra::truncated_polynomial(&f(2), &[2, 2]).unwrap();
        let id = Morphism::identity(&a);
        assert!(invert_morphism(&id).unwrap().is_identity());
    }

    #[test]
    fn inversion_agrees_with_matrix_inverse() {
        // oracle: the inverse linear map of the underlying matrix
        let a = Algebra::truncated_polynomial(&f(3), &[3, 9]).unwrap();
        let (x, y) = (a.gen(0), a.gen(1));
        let phi = Morphism::new(
            &a,
            &a,
            vec![
                a.add(&a.scale(&x, 2), &a.mul(&x, &y)),
                a.add(&a.add(&y, &x), &a.pow(&y, 3)),
            ],
        )
        .unwrap();
        let psi = invert_morphism(&phi).unwrap();
        let inv = phi.matrix().inverse().unwrap();
        assert_eq!(psi.matrix(), inv);
    }

    #[test]
    fn inversion_errors() {
        let a = Algebra::truncated_polynomial(&f(3), &[3, 3]).unwrap();
        let bad = Morphism {
            source: a.clone(),
            target: a.clone(),
            images: vec![a.add(&a.gen(0), &a.one()), a.gen(1)],
            basis_images: OnceLock::new(),
        };
        assert!(matches!(invert_morphism(&bad), Err(Error::NotAugmented(_))));
        let degenerate = Morphism::new(&a, &a, vec![a.monomial(&[0, 1]), a.monomial(&[0, 1])]).unwrap();
        assert!(matches!(invert_morphism(&degenerate), Err(Error::NotInvertible(_))));
        assert!(matches!(
            Morphism::new(&a, &a, vec![a.gen(0), a.add(&a.gen(1), &a.one())]),
            Err(Error::NotAugmented(_))
        ));
    }

    #[test]
    fn relation_checks_reject_bad_images() {
        let h = Algebra::heisenberg(&f(3), 1).unwrap();
        // swapping x and y breaks [x,y] = z
        let r = Morphism::new(&h, &h, vec![h.gen(2), h.gen(1), h.gen(0)]);
        assert!(matches!(r, Err(Error::RelationViolated(_))));
    }

    #[test]
    fn json_round_trips() {
        let a = Algebra::truncated_polynomial(&f(2), &[2, 4]).unwrap();
        let js = serde_json::to_string(&a.to_json().unwrap()).unwrap();
        let back = Algebra::from_json(&serde_json::from_str(&js).unwrap()).unwrap();
        assert_eq!(*back, *a);
        let h = Algebra::heisenberg(&f(3), 1).unwrap();
        let back = Algebra::from_json(&h.to_json().unwrap()).unwrap();
        assert_eq!(*back, *h);
        let phi = Morphism::from_substitutions(&a, &[(0, a.add(&a.gen(0), &a.monomial(&[0, 2])))]).unwrap();
        let m = Morphism::from_json(&a, &a, &phi.to_json()).unwrap();
        assert_eq!(m.images(), phi.images());
    }
}
