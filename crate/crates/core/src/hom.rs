//! Intertwiners, a randomized isomorphism oracle and free ranks.
//!
//! Hom(M, N) is computed from a spanning basis of M grown from module
//! generators: an intertwiner is determined by the images of the generators,
//! and every linear dependency met while spinning gives linear equations on
//! those images.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{Matrix, RowSpace};
use crate::module::Representation;

/// Echelon space that remembers how each stored row combines the inserted vectors.
struct TrackedSpace {
    field: Field,
    rows: Vec<(Vec<Elem>, Vec<Elem>)>,
    pivot_row: Vec<Option<usize>>,
    inserted: usize,
    capacity: usize,
}

impl TrackedSpace {
    fn new(field: &Field, ncols: usize, capacity: usize) -> TrackedSpace {
        TrackedSpace { field: field.clone(), rows: Vec::new(), pivot_row: vec![None; ncols], inserted: 0, capacity }
    }

    /// Ok(index) if v was independent and got recorded, Err(combination) otherwise.
    fn insert(&mut self, v: &[Elem]) -> std::result::Result<usize, Vec<Elem>> {
        let f = self.field.clone();
        let mut v = v.to_vec();
        let mut combo = vec![0; self.capacity];
        for c in 0..v.len() {
            let a = v[c];
            if a == 0 {
                continue;
            }
            match self.pivot_row[c] {
                Some(r) => {
                    let (row, rc) = &self.rows[r];
                    let na = f.neg(a);
                    f.axpy(&mut v[c..], na, &row[c..]);
                    f.axpy(&mut combo, na, rc);
                }
                None => {
                    // v now equals original + combo·(earlier originals)
                    let idx = self.inserted;
                    self.inserted += 1;
                    let mut rc = combo;
                    rc[idx] = 1;
                    let inv = f.inv(v[c]);
                    f.scale(&mut v[c..], inv);
                    f.scale(&mut rc, inv);
                    self.pivot_row[c] = Some(self.rows.len());
                    self.rows.push((v, rc));
                    return Ok(idx);
                }
            }
        }
        // 0 = original + combo, so original = -combo
        Err(combo.iter().map(|&x| f.neg(x)).collect())
    }
}

struct Node {
    vector: Vec<Elem>,
    origin: usize,
    parent: Option<(usize, usize)>,
}

struct Dependency {
    node: usize,
    gen: usize,
    combo: Vec<(usize, Elem)>,
}

/// Spanning basis of M grown from generators, with the relations found on the way.
struct Spin {
    generators: usize,
    nodes: Vec<Node>,
    deps: Vec<Dependency>,
}

/// Vectors spanning M modulo its radical, preferring e_i in index order.
fn top_generators(m: &Representation) -> Vec<Vec<Elem>> {
    let f = m.field();
    let d = m.dim();
    let mut rad = RowSpace::new(f, d);
    for a in m.actions() {
        for j in 0..d {
            rad.insert(a.column(j));
            if rad.is_full() {
                break;
            }
        }
    }
    let mut gens = Vec::new();
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        if rad.insert(e.clone()) {
            gens.push(e);
        }
    }
    gens
}

fn spin(m: &Representation, gens: &[Vec<Elem>]) -> Spin {
    let d = m.dim();
    let mut space = TrackedSpace::new(m.field(), d, d);
    let mut nodes = Vec::with_capacity(d);
    for (i, g) in gens.iter().enumerate() {
        space.insert(g).expect("generators independent modulo the radical");
        nodes.push(Node { vector: g.clone(), origin: i, parent: None });
    }
    let mut deps = Vec::new();
    let mut idx = 0;
    while idx < nodes.len() {
        for (g, a) in m.actions().iter().enumerate() {
            let w = a.mul_vec(&nodes[idx].vector);
            match space.insert(&w) {
                Ok(_) => {
                    let origin = nodes[idx].origin;
                    nodes.push(Node { vector: w, origin, parent: Some((idx, g)) });
                }
                Err(combo) => {
                    let combo = combo.into_iter().enumerate().filter(|t| t.1 != 0).collect();
                    deps.push(Dependency { node: idx, gen: g, combo });
                }
            }
        }
        idx += 1;
    }
    assert_eq!(nodes.len(), d, "generators must span the module");
    Spin { generators: gens.len(), nodes, deps }
}

/// Images of generators satisfying all relations, plus what is needed to rebuild F.
struct HomSolve {
    spin: Spin,
    words: Vec<Matrix>,
    kernel: Vec<Vec<Elem>>,
}

fn solve_hom(m: &Representation, n: &Representation) -> Result<HomSolve> {
    if **m.algebra() != **n.algebra() {
        return Err(Error::AlgebraMismatch("Hom between modules over different algebras".into()));
    }
    let f = m.field().clone();
    let dn = n.dim();
    let gens = top_generators(m);
    let spin = spin(m, &gens);
    let s = spin.generators;
    // W_l = ρ_N(word of node l)
    let mut words: Vec<Matrix> = Vec::with_capacity(spin.nodes.len());
    for node in &spin.nodes {
        let w = match node.parent {
            None => Matrix::identity(&f, dn),
            Some((par, g)) => n.action(g).mul(&words[par])?,
        };
        words.push(w);
    }
    let unknowns = s * dn;
    let mut eqs = RowSpace::new(&f, unknowns);
    'deps: for dep in &spin.deps {
        if eqs.is_full() {
            break;
        }
        let lead = n.action(dep.gen).mul(&words[dep.node])?;
        let o = spin.nodes[dep.node].origin;
        for r in 0..dn {
            let mut row = vec![0; unknowns];
            row[o * dn..(o + 1) * dn].copy_from_slice(lead.row(r));
            for &(l, c) in &dep.combo {
                let ol = spin.nodes[l].origin;
                f.axpy(&mut row[ol * dn..(ol + 1) * dn], f.neg(c), words[l].row(r));
            }
            if row.iter().any(|&x| x != 0) {
                eqs.insert(row);
                if eqs.is_full() {
                    break 'deps;
                }
            }
        }
    }
    Ok(HomSolve { spin, words, kernel: eqs.kernel() })
}

/// Basis of Hom_A(M, N) as dim N × dim M matrices.
pub fn hom_space(m: &Representation, n: &Representation) -> Result<Vec<Matrix>> {
    let sol = solve_hom(m, n)?;
    let f = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    if sol.kernel.is_empty() {
        return Ok(Vec::new());
    }
    let basis_cols: Vec<Vec<Elem>> = sol.spin.nodes.iter().map(|nd| nd.vector.clone()).collect();
    let bmat = Matrix::from_columns(f, dm, &basis_cols);
    let binv = bmat.inverse().expect("spanning basis");
    let mut out = Vec::with_capacity(sol.kernel.len());
    for x in &sol.kernel {
        let cols: Vec<Vec<Elem>> = sol
            .spin
            .nodes
            .iter()
            .zip(&sol.words)
            .map(|(nd, w)| w.mul_vec(&x[nd.origin * dn..(nd.origin + 1) * dn]))
            .collect();
        let fimg = Matrix::from_columns(f, dn, &cols);
        out.push(fimg.mul(&binv)?);
    }
    Ok(out)
}

pub fn hom_dim(m: &Representation, n: &Representation) -> Result<usize> {
    Ok(solve_hom(m, n)?.kernel.len())
}

/// ρ_N(g) F = F ρ_M(g) for every generator.
pub fn is_intertwiner(m: &Representation, n: &Representation, f: &Matrix) -> bool {
    m.actions().iter().zip(n.actions()).all(|(a, b)| b.mul(f).ok() == f.mul(a).ok())
}

/// Rank of the integral's action: the number of free summands.
pub fn free_rank(m: &Representation) -> Result<usize> {
    let lam = m.algebra().integral();
    if lam.is_zero() {
        return Err(Error::NoIntegral(m.algebra().describe()));
    }
    Ok(m.act(&lam).rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub jordan_types: Vec<String>,
    pub integral_rank: usize,
}

pub fn fingerprint(m: &Representation) -> Result<Fingerprint> {
    Ok(Fingerprint {
        dim: m.dim(),
        jordan_types: m.generator_jordan_types()?.iter().map(|j| j.to_string()).collect(),
        integral_rank: free_rank(m)?,
    })
}

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    /// An invertible intertwiner, possibly over an extension field.
    Isomorphic(Matrix),
    NotIsomorphic(String),
    /// No invertible combination found; the chance of this for isomorphic modules is below `bound`.
    ProbablyNot { bound: f64 },
}

#[derive(Clone, Debug)]
pub struct IsoReport {
    pub verdict: IsoVerdict,
    pub fingerprints: (Option<Fingerprint>, Option<Fingerprint>),
    pub trials: usize,
    pub sample_field: Option<Field>,
}

impl IsoReport {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self.verdict, IsoVerdict::Isomorphic(_))
    }

    pub fn is_not_isomorphic(&self) -> bool {
        matches!(self.verdict, IsoVerdict::NotIsomorphic(_))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (verdict, witness, reason, bound) = match &self.verdict {
            IsoVerdict::Isomorphic(w) => ("isomorphic", Some(w.to_json()), None, None),
            IsoVerdict::NotIsomorphic(r) => ("not_isomorphic", None, Some(r.clone()), None),
            IsoVerdict::ProbablyNot { bound } => ("probably_not", None, None, Some(*bound)),
        };
        serde_json::json!({
            "verdict": verdict,
            "witness": witness,
            "reason": reason,
            "fingerprints": [self.fingerprints.0, self.fingerprints.1],
            "trials": self.trials,
            "bound": bound,
            "sample_field": self.sample_field.as_ref().map(|f| f.spec()),
        })
    }
}

/// Least multiple e' of the base degree with p^e' > 4 dim.
pub fn default_sample_degree(field: &Field, dim: usize) -> u32 {
    let p = field.p() as u64;
    let mut e = field.e();
    while p.pow(e) <= 4 * dim as u64 {
        e += field.e();
    }
    e
}

/// Randomized isomorphism test with deterministic fingerprint pre-checks.
pub fn iso_test(
    m: &Representation,
    n: &Representation,
    trials: usize,
    ext_degree: Option<u32>,
    seed: u64,
) -> Result<IsoReport> {
    let not_iso = |reason: String, fps| IsoReport {
        verdict: IsoVerdict::NotIsomorphic(reason),
        fingerprints: fps,
        trials: 0,
        sample_field: None,
    };
    if **m.algebra() != **n.algebra() {
        return Ok(not_iso("modules over different algebras".into(), (None, None)));
    }
    if m.dim() != n.dim() {
        return Ok(not_iso(format!("dimensions {} and {}", m.dim(), n.dim()), (None, None)));
    }
    let (fm, fn_) = (fingerprint(m)?, fingerprint(n)?);
    let fps = (Some(fm.clone()), Some(fn_.clone()));
    if fm.jordan_types != fn_.jordan_types {
        return Ok(not_iso("generator Jordan types differ".into(), fps));
    }
    if fm.integral_rank != fn_.integral_rank {
        return Ok(not_iso("integral ranks differ".into(), fps));
    }
    if m.dim() == 0 {
        return Ok(IsoReport {
            verdict: IsoVerdict::Isomorphic(Matrix::zeros(m.field(), 0, 0)),
            fingerprints: fps,
            trials: 0,
            sample_field: None,
        });
    }
    let basis = hom_space(m, n)?;
    if basis.is_empty() {
        return Ok(not_iso("Hom(M, N) = 0".into(), fps));
    }
    let back = hom_dim(n, m)?;
    if back != basis.len() {
        return Ok(not_iso(format!("dim Hom(M,N) = {} but dim Hom(N,M) = {back}", basis.len()), fps));
    }
    // a single intertwiner that is already invertible
    if basis.len() == 1 && basis[0].is_invertible() {
        return Ok(IsoReport { verdict: IsoVerdict::Isomorphic(basis[0].clone()), fingerprints: fps, trials: 0, sample_field: None });
    }
    let base = m.field();
    let e = ext_degree.unwrap_or_else(|| default_sample_degree(base, m.dim()));
    let big = if e == base.e() { base.clone() } else { Field::new(base.p(), e)? };
    let table = base.embedding_into(&big)?;
    let basis: Vec<Matrix> = basis.iter().map(|b| b.embed(&big, &table)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let mut w = Matrix::zeros(&big, n.dim(), m.dim());
        for b in &basis {
            w.add_scaled(rng.gen_range(0..big.order()), b);
        }
        if w.is_invertible() {
            return Ok(IsoReport { verdict: IsoVerdict::Isomorphic(w), fingerprints: fps, trials: t + 1, sample_field: Some(big) });
        }
    }
    let bound = (m.dim() as f64 / big.order() as f64).powi(trials as i32);
    Ok(IsoReport { verdict: IsoVerdict::ProbablyNot { bound }, fingerprints: fps, trials, sample_field: Some(big) })
}

/// Convenience wrapper with 20 trials and the default sampling field.
pub fn isomorphic(m: &Representation, n: &Representation, seed: u64) -> Result<bool> {
    Ok(iso_test(m, n, 20, None, seed)?.is_isomorphic())
}

/// Splits off a maximal free summand: returns its rank c and M/F with F ≅ A^c.
///
/// Vectors v_j with Λv_j independent generate a free submodule, which is a
/// summand since free modules over these algebras are injective.
pub fn split_free(m: &Representation) -> Result<(usize, Representation)> {
    let alg = m.algebra();
    let lam = alg.integral();
    if lam.is_zero() {
        return Err(Error::NoIntegral(alg.describe()));
    }
    let l = m.act(&lam);
    let f = m.field();
    let mut img = RowSpace::new(f, m.dim());
    let mut gens = Vec::new();
    for j in 0..m.dim() {
        if img.insert(l.column(j)) {
            let mut e = vec![0; m.dim()];
            e[j] = 1;
            gens.push(e);
        }
    }
    let c = gens.len();
    if c == 0 {
        return Ok((0, m.clone()));
    }
    let sub = m.submodule_generated(&gens);
    if sub.len() != c * alg.dim() {
        return Err(Error::VerificationFailed(format!("free part has dimension {} instead of {}", sub.len(), c * alg.dim())));
    }
    Ok((c, m.quotient(&sub)?))
}

/// iso_test after removing free summands from both sides.
///
/// Equivalent to comparing M and N by Krull-Schmidt; the witness in the
/// report relates the non-projective parts only.
pub fn iso_test_peeled(
    m: &Representation,
    n: &Representation,
    trials: usize,
    ext_degree: Option<u32>,
    seed: u64,
) -> Result<IsoReport> {
    if **m.algebra() != **n.algebra() || m.dim() != n.dim() {
        return iso_test(m, n, trials, ext_degree, seed);
    }
    let (cm, rm) = split_free(m)?;
    let (cn, rn) = split_free(n)?;
    if cm != cn {
        return Ok(IsoReport {
            verdict: IsoVerdict::NotIsomorphic(format!("free ranks {cm} and {cn}")),
            fingerprints: (None, None),
            trials: 0,
            sample_field: None,
        });
    }
    iso_test(&rm, &rn, trials, ext_degree, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::module::jordan_block_module;
    use std::sync::Arc;

    fn klein(p: u32) -> Arc<Algebra> {
        Algebra::truncated_polynomial(&Field::prime(p).unwrap(), &[p as usize, p as usize]).unwrap()
    }

    /// Direct Kronecker-system oracle: vec(F) in the kernel of (I⊗ρ_N(g) − ρ_M(g)ᵀ⊗I).
    fn brute_hom_dim(m: &Representation, n: &Representation) -> usize {
        let f = m.field();
        let (dm, dn) = (m.dim(), n.dim());
        let mut eqs = RowSpace::new(f, dm * dn);
        for (a, b) in m.actions().iter().zip(n.actions()) {
            let lhs = Matrix::identity(f, dm).kron(b).unwrap();
            let rhs = a.transpose().kron(&Matrix::identity(f, dn)).unwrap();
            let sys = lhs.sub(&rhs).unwrap();
            for r in 0..sys.rows() {
                eqs.insert(sys.row(r).to_vec());
            }
        }
        dm * dn - eqs.rank()
    }

    #[test]
    fn hom_matches_kronecker_oracle() {
        let a = klein(2);
        let reg = Representation::regular(&a);
        let k = Representation::trivial(&a);
        let mods = [reg.clone(), k.clone(), reg.direct_sum(&k).unwrap(), reg.quotient(&reg.submodule_generated(&[a.integral().to_dense()])).unwrap()];
        for m in &mods {
            for n in &mods {
                let basis = hom_space(m, n).unwrap();
                assert_eq!(basis.len(), brute_hom_dim(m, n));
                for h in &basis {
                    assert!(is_intertwiner(m, n, h));
                }
            }
        }
        assert_eq!(hom_dim(&reg, &reg).unwrap(), 4);
    }

    #[test]
    fn iso_basics() {
        let f = Field::prime(3).unwrap();
        let c = Algebra::truncated_polynomial(&f, &[3]).unwrap();
        let j = |i| jordan_block_module(&c, i).unwrap();
        let m = j(2).direct_sum(&j(2)).unwrap();
        let n = j(1).direct_sum(&j(3)).unwrap();
        let r = iso_test(&m, &n, 5, None, 1).unwrap();
        assert!(r.is_not_isomorphic());
        let r = iso_test(&m, &m, 5, None, 1).unwrap();
        assert!(r.is_isomorphic());
        let _ = r.to_json();
    }

    #[test]
    fn free_rank_of_regular() {
        let a = klein(3);
        assert_eq!(free_rank(&Representation::regular(&a)).unwrap(), 1);
        assert_eq!(free_rank(&Representation::free(&a, 3)).unwrap(), 3);
        assert_eq!(free_rank(&Representation::trivial(&a)).unwrap(), 0);
    }

    #[test]
    fn conjugates_are_isomorphic() {
        let a = klein(2);
        let reg = Representation::regular(&a);
        let m = reg.direct_sum(&Representation::trivial(&a)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for s in 0..10 {
            let sigma = Matrix::random_invertible(a.field(), m.dim(), &mut rng);
            let c = m.conjugate(&sigma).unwrap();
            let r = iso_test(&m, &c, 20, None, s).unwrap();
            let IsoVerdict::Isomorphic(w) = &r.verdict else { panic!("{:?}", r.verdict) };
            let big = Algebra::truncated_polynomial(w.field(), &[2, 2]).unwrap();
            let (mb, cb) = (m.base_change(&big).unwrap(), c.base_change(&big).unwrap());
            assert!(is_intertwiner(&mb, &cb, w));
        }
    }

    #[test]
    fn peeling_free_summands() {
        let a = klein(2);
        let m = Representation::free(&a, 2).direct_sum(&Representation::trivial(&a)).unwrap();
        let (c, rest) = split_free(&m).unwrap();
        assert_eq!((c, rest.dim()), (2, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sigma = Matrix::random_invertible(a.field(), m.dim(), &mut rng);
        let conj = m.conjugate(&sigma).unwrap();
        assert!(iso_test_peeled(&m, &conj, 20, None, 1).unwrap().is_isomorphic());
        let other = Representation::free(&a, 1).direct_sum(&Representation::trivial(&a).multiple(5)).unwrap();
        assert!(iso_test_peeled(&m, &other, 20, None, 1).unwrap().is_not_isomorphic());
    }

    #[test]
    fn sample_degree() {
        assert_eq!(default_sample_degree(&Field::prime(2).unwrap(), 4), 5);
        assert_eq!(default_sample_degree(&Field::prime(7).unwrap(), 49), 3);
        assert_eq!(default_sample_degree(&Field::new(2, 2).unwrap(), 1), 4);
    }
}
