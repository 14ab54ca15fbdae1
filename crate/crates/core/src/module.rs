//! Modules given by generator action matrices.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::algebra::{invert_morphism, Algebra, Element, Morphism};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::hopf::Comultiplication;
use crate::matrix::{JordanType, Matrix, MatrixJson, RowSpace};

pub struct Representation {
    algebra: Arc<Algebra>,
    dim: usize,
    actions: Vec<Matrix>,
    label: String,
    monomials: Mutex<HashMap<usize, Arc<Matrix>>>,
}

impl Clone for Representation {
    fn clone(&self) -> Self {
        Representation {
            algebra: self.algebra.clone(),
            dim: self.dim,
            actions: self.actions.clone(),
            label: self.label.clone(),
            monomials: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation({}, dim {})", self.label, self.dim)
    }
}

impl Representation {
    /// Validates shapes and every defining relation.
    pub fn new(algebra: &Arc<Algebra>, actions: Vec<Matrix>, label: impl Into<String>) -> Result<Representation> {
        let rep = Representation::unchecked(algebra, actions, label)?;
        algebra.check_relations_matrices(&rep.actions)?;
        Ok(rep)
    }

    fn unchecked(algebra: &Arc<Algebra>, actions: Vec<Matrix>, label: impl Into<String>) -> Result<Representation> {
        if actions.len() != algebra.num_gens() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for {} generators",
                actions.len(),
                algebra.num_gens()
            )));
        }
        let dim = actions.first().map_or(0, |m| m.rows());
        for m in &actions {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch("action matrices must be square of equal size".into()));
            }
            if m.field() != algebra.field() {
                return Err(Error::FieldMismatch("action matrix over the wrong field".into()));
            }
        }
        Ok(Representation {
            algebra: algebra.clone(),
            dim,
            actions,
            label: label.into(),
            monomials: Mutex::new(HashMap::new()),
        })
    }

    /// The counit module k.
    pub fn trivial(algebra: &Arc<Algebra>) -> Representation {
        let f = algebra.field();
        let actions = (0..algebra.num_gens()).map(|_| Matrix::zeros(f, 1, 1)).collect();
        Representation::unchecked(algebra, actions, "k").unwrap()
    }

    /// A acting on itself by left multiplication.
    pub fn regular(algebra: &Arc<Algebra>) -> Representation {
        let actions = (0..algebra.num_gens()).map(|g| algebra.left_mul_matrix(&algebra.gen(g))).collect();
        Representation::unchecked(algebra, actions, "A").unwrap()
    }

    pub fn free(algebra: &Arc<Algebra>, rank: usize) -> Representation {
        let reg = Representation::regular(algebra);
        let mut out = Representation::zero(algebra);
        for _ in 0..rank {
            out = out.direct_sum(&reg).unwrap();
        }
        out.label = format!("{rank}A");
        out
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Representation {
        let f = algebra.field();
        let actions = (0..algebra.num_gens()).map(|_| Matrix::zeros(f, 0, 0)).collect();
        Representation::unchecked(algebra, actions, "0").unwrap()
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn field(&self) -> &Field {
        self.algebra.field()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }
    pub fn action(&self, g: usize) -> &Matrix {
        &self.actions[g]
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn with_label(mut self, label: impl Into<String>) -> Representation {
        self.label = label.into();
        self
    }

    fn same_algebra(&self, other: &Representation) -> Result<()> {
        if *self.algebra != *other.algebra {
            return Err(Error::AlgebraMismatch(format!(
                "{} is over {}, {} is over {}",
                self.label,
                self.algebra.describe(),
                other.label,
                other.algebra.describe()
            )));
        }
        Ok(())
    }

    /// Action of a basis monomial, memoized.
    pub fn act_basis(&self, u: usize) -> Arc<Matrix> {
        if let Some(m) = self.monomials.lock().unwrap().get(&u) {
            return m.clone();
        }
        let m = match self.algebra.first_letter(u) {
            None => Arc::new(Matrix::identity(self.field(), self.dim)),
            Some((g, rest)) => {
                let r = self.act_basis(rest);
                Arc::new(self.actions[g].mul(&r).expect("square actions"))
            }
        };
        self.monomials.lock().unwrap().insert(u, m.clone());
        m
    }

    pub fn act(&self, a: &Element) -> Matrix {
        assert_eq!(a.dim(), self.algebra.dim(), "element from a different algebra");
        let mut out = Matrix::zeros(self.field(), self.dim, self.dim);
        for &(u, c) in a.terms() {
            out.add_scaled(c, &self.act_basis(u));
        }
        out
    }

    pub fn jordan_type(&self, a: &Element) -> Result<JordanType> {
        self.act(a).nilpotent_jordan_type()
    }

    pub fn generator_jordan_types(&self) -> Result<Vec<JordanType>> {
        self.actions.iter().map(|m| m.nilpotent_jordan_type()).collect()
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        self.same_algebra(other)?;
        let actions = self.actions.iter().zip(&other.actions).map(|(a, b)| a.direct_sum(b)).collect();
        Representation::unchecked(&self.algebra, actions, format!("{} ⊕ {}", self.label, other.label))
    }

    pub fn direct_sum_all(algebra: &Arc<Algebra>, parts: &[Representation]) -> Result<Representation> {
        let mut out = Representation::zero(algebra);
        for p in parts {
            out = out.direct_sum(p)?;
        }
        if !parts.is_empty() {
            out.label = parts.iter().map(|p| p.label.as_str()).collect::<Vec<_>>().join(" ⊕ ");
        }
        Ok(out)
    }

    /// n copies of self.
    pub fn multiple(&self, n: usize) -> Representation {
        let mut out = Representation::zero(&self.algebra);
        for _ in 0..n {
            out = out.direct_sum(self).unwrap();
        }
        out.label = format!("{n}({})", self.label);
        out
    }

    /// M ⊗ N with g acting by Δ(g).
    pub fn tensor(&self, other: &Representation, delta: &Comultiplication) -> Result<Representation> {
        self.same_algebra(other)?;
        if **delta.algebra() != *self.algebra {
            return Err(Error::AlgebraMismatch("comultiplication is for a different algebra".into()));
        }
        let d = self.algebra.dim();
        let mut actions = Vec::with_capacity(self.algebra.num_gens());
        for g in 0..self.algebra.num_gens() {
            let mut m = Matrix::zeros(self.field(), self.dim * other.dim, self.dim * other.dim);
            for &(t, c) in delta.image(g).terms() {
                let k = self.act_basis(t / d).kron(&other.act_basis(t % d))?;
                m.add_scaled(c, &k);
            }
            actions.push(m);
        }
        Representation::new(&self.algebra, actions, format!("({})⊗[{}]({})", self.label, delta.name(), other.label))
    }

    /// Pullback along φ: B → A, where self is over A.
    pub fn restrict(&self, phi: &Morphism) -> Result<Representation> {
        if **phi.target() != *self.algebra {
            return Err(Error::AlgebraMismatch("restriction along a map into another algebra".into()));
        }
        let actions = phi.images().iter().map(|a| self.act(a)).collect();
        Representation::unchecked(phi.source(), actions, format!("{}↓", self.label))
    }

    /// Restriction along a single element t ↦ a, as a nilpotent matrix.
    pub fn restrict_to_element(&self, a: &Element) -> Matrix {
        self.act(a)
    }

    /// A ⊗_B M for ι: B → A, given cosets c_i with A = ⊕ c_i ι(B).
    ///
    /// The basis is c_i ⊗ m_j at index i * dim M + j.
    pub fn induce(&self, iota: &Morphism, cosets: &[Element]) -> Result<Representation> {
        let b = iota.source();
        let a = iota.target();
        if **b != *self.algebra {
            return Err(Error::AlgebraMismatch("module is not over the source of the embedding".into()));
        }
        let (da, db, k) = (a.dim(), b.dim(), cosets.len());
        if k * db != da {
            return Err(Error::NotFreeBasis(format!("{k} cosets times dim {db} is not dim {da}")));
        }
        let f = a.field();
        // Φ: (i, u) ↦ c_i ι(e_u)
        let mut phi = Matrix::zeros(f, da, da);
        for (i, c) in cosets.iter().enumerate() {
            for u in 0..db {
                let v = a.mul(c, iota.apply_basis(u));
                for &(w, x) in v.terms() {
                    phi.set(w, i * db + u, x);
                }
            }
        }
        let phi_inv = phi
            .inverse()
            .ok_or_else(|| Error::NotFreeBasis("multiplication map onto A is not bijective".into()))?;
        let dm = self.dim;
        let mut actions = Vec::with_capacity(a.num_gens());
        for g in 0..a.num_gens() {
            let mut m = Matrix::zeros(f, k * dm, k * dm);
            for (i, c) in cosets.iter().enumerate() {
                let gc = a.mul(&a.gen(g), c).to_dense();
                let coords = phi_inv.mul_vec(&gc);
                for l in 0..k {
                    let beta = Element::from_dense(&coords[l * db..(l + 1) * db]);
                    if beta.is_zero() {
                        continue;
                    }
                    m.set_block(l * dm, i * dm, &self.act(&beta));
                }
            }
            actions.push(m);
        }
        Representation::new(a, actions, format!("{}↑", self.label))
    }

    /// M^φ: g acts by φ⁻¹(g).
    pub fn twist(&self, phi: &Morphism) -> Result<Representation> {
        if !phi.is_endomorphism() || **phi.source() != *self.algebra {
            return Err(Error::NotAutomorphism("twist needs an automorphism of the module's algebra".into()));
        }
        let inv = invert_morphism(phi).map_err(|e| Error::NotAutomorphism(e.to_string()))?;
        let actions = inv.images().iter().map(|a| self.act(a)).collect();
        Representation::unchecked(&self.algebra, actions, format!("{}^({})", self.label, phi.describe()))
    }

    /// Same module in a permuted basis: new index perm[i] holds old basis vector i.
    pub fn permute_basis(&self, perm: &[usize]) -> Representation {
        let actions = self.actions.iter().map(|m| m.permuted(perm)).collect();
        Representation::unchecked(&self.algebra, actions, self.label.clone()).unwrap()
    }

    /// σ ρ(g) σ⁻¹
    pub fn conjugate(&self, sigma: &Matrix) -> Result<Representation> {
        let inv = sigma.inverse().ok_or_else(|| Error::NotInvertible("basis change is singular".into()))?;
        let actions = self
            .actions
            .iter()
            .map(|m| sigma.mul(m)?.mul(&inv))
            .collect::<Result<Vec<_>>>()?;
        Representation::unchecked(&self.algebra, actions, format!("{}^σ", self.label))
    }

    /// Same module over the base-changed algebra.
    pub fn base_change(&self, big: &Arc<Algebra>) -> Result<Representation> {
        let table = self.field().embedding_into(big.field())?;
        let actions = self.actions.iter().map(|m| m.embed(big.field(), &table)).collect();
        Representation::new(big, actions, self.label.clone())
    }

    /// Smallest submodule containing the given vectors, as RREF basis rows.
    pub fn submodule_generated(&self, vectors: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
        let mut space = RowSpace::new(self.field(), self.dim);
        let mut queue: Vec<Vec<Elem>> = Vec::new();
        for v in vectors {
            if space.insert(v.clone()) {
                queue.push(v.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for m in &self.actions {
                let w = m.mul_vec(&v);
                if space.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        space.reduced_rows()
    }

    /// M / S for a submodule S given by RREF rows.
    pub fn quotient(&self, sub_rref: &[Vec<Elem>]) -> Result<Representation> {
        let f = self.field().clone();
        let pivots: Vec<usize> = sub_rref
            .iter()
            .map(|r| r.iter().position(|&c| c != 0).expect("nonzero rows"))
            .collect();
        let free: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let reduce = |mut v: Vec<Elem>| -> Vec<Elem> {
            for (r, &pc) in sub_rref.iter().zip(&pivots) {
                let a = v[pc];
                if a != 0 {
                    f.axpy(&mut v, f.neg(a), r);
                }
            }
            free.iter().map(|&c| v[c]).collect()
        };
        let q = free.len();
        let mut actions = Vec::with_capacity(self.actions.len());
        for m in &self.actions {
            let cols: Vec<Vec<Elem>> = free.iter().map(|&c| reduce(m.column(c))).collect();
            actions.push(Matrix::from_columns(&f, q, &cols));
        }
        Representation::new(&self.algebra, actions, format!("{}/S", self.label))
    }

    /// Submodule on a basis of S given by RREF rows.
    pub fn submodule(&self, sub_rref: &[Vec<Elem>]) -> Result<Representation> {
        let f = self.field().clone();
        let k = sub_rref.len();
        let pivots: Vec<usize> = sub_rref
            .iter()
            .map(|r| r.iter().position(|&c| c != 0).expect("nonzero rows"))
            .collect();
        let mut actions = Vec::with_capacity(self.actions.len());
        for m in &self.actions {
            // image of each basis row, expressed through pivot coordinates
            let cols: Vec<Vec<Elem>> =
                sub_rref.iter().map(|r| pivots.iter().map(|&pc| m.mul_vec(r)[pc]).collect()).collect();
            actions.push(Matrix::from_columns(&f, k, &cols));
        }
        Representation::new(&self.algebra, actions, format!("S⊂{}", self.label))
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson { label: Some(self.label.clone()), actions: self.actions.iter().map(|m| m.to_json()).collect() }
    }

    pub fn from_json(algebra: &Arc<Algebra>, js: &ModuleJson) -> Result<Representation> {
        let actions = js.actions.iter().map(Matrix::from_json).collect::<Result<Vec<_>>>()?;
        Representation::new(algebra, actions, js.label.clone().unwrap_or_else(|| "M".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    #[serde(default)]
    pub label: Option<String>,
    pub actions: Vec<MatrixJson>,
}

/// A single nilpotent block J_i as a module over k[t]/t^b.
pub fn jordan_block_module(algebra: &Arc<Algebra>, i: usize) -> Result<Representation> {
    if algebra.num_gens() != 1 || !algebra.is_truncated() {
        return Err(Error::ShapeMismatch("Jordan block modules live over k[t]/t^b".into()));
    }
    if i == 0 || i > algebra.bounds()[0] {
        return Err(Error::DimensionMismatch(format!("J_{i} over k[t]/t^{}", algebra.bounds()[0])));
    }
    Representation::new(algebra, vec![Matrix::nilpotent_block(algebra.field(), i)], format!("J{i}"))
}

/// ⊕ J_λ for a partition.
pub fn jordan_type_module(algebra: &Arc<Algebra>, jt: &JordanType) -> Result<Representation> {
    let blocks: Vec<Matrix> = jt.parts.iter().map(|&s| Matrix::nilpotent_block(algebra.field(), s)).collect();
    Representation::new(algebra, vec![Matrix::block_diag(algebra.field(), &blocks)], jt.to_string())
}

/// Jordan types of J_i ⊗ J_j under Δ over k[t]/t^b, for 1 ≤ i, j ≤ b.
pub fn block_tensor_table(delta: &Comultiplication) -> Result<Vec<Vec<JordanType>>> {
    let algebra = delta.algebra();
    let b = algebra.bounds().first().copied().unwrap_or(0);
    if algebra.num_gens() != 1 {
        return Err(Error::ShapeMismatch("block tensor tables live over k[t]/t^b".into()));
    }
    let blocks: Vec<Representation> = (1..=b).map(|i| jordan_block_module(algebra, i)).collect::<Result<_>>()?;
    blocks
        .iter()
        .map(|ji| blocks.iter().map(|jj| ji.tensor(jj, delta)?.action(0).nilpotent_jordan_type()).collect())
        .collect()
}
