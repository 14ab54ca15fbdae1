//! Dense matrices over a finite field, exact elimination and Jordan types.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|&a| self.field.format(a)).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_data(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&a| !field.is_valid(a)) {
            return Err(Error::InvalidField(format!("entry {bad} is not in {field}")));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Elem>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::from_data(field, rows.len(), cols, rows.concat())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, nrows: usize, columns: &[Vec<Elem>]) -> Matrix {
        let mut m = Matrix::zeros(field, nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for i in 0..nrows {
                m.data[i * columns.len() + j] = c[i];
            }
        }
        m
    }

    /// Upper triangular nilpotent Jordan block of size n (ones on the superdiagonal).
    pub fn nilpotent_block(field: &Field, n: usize) -> Matrix {
        Matrix::from_fn(field, n, n, |i, j| (j == i + 1) as Elem)
    }

    /// Single 1 at (i, j).
    pub fn unit(field: &Field, rows: usize, cols: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        m.set(i, j, 1);
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|&&a| a != 0).count()
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        self.field.axpy(&mut out.data, 1, &other.data);
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scaled(self.field.neg(1)))
    }

    /// self += c * other
    pub fn add_scaled(&mut self, c: Elem, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.field.axpy(&mut self.data, c, &other.data);
    }

    pub fn scaled(&self, c: Elem) -> Matrix {
        let mut out = self.clone();
        if c == 0 {
            out.data.iter_mut().for_each(|a| *a = 0);
        } else {
            self.field.scale(&mut out.data, c);
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            let dst = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    self.field.axpy(dst, a, &other.data[k * n..(k + 1) * n]);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { f.add(acc, f.mul(a, b)) })
            })
            .collect()
    }

    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square());
        let mut out = Matrix::identity(&self.field, self.rows);
        for _ in 0..k {
            out = out.mul(self).expect("square");
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Kronecker product; row index of (i_a, i_b) is i_a * b.rows + i_b.
    pub fn kron(&self, b: &Matrix) -> Result<Matrix> {
        self.check_field(b)?;
        let (r, c) = (self.rows * b.rows, self.cols * b.cols);
        let mut out = Matrix::zeros(&self.field, r, c);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self.get(ia, ja);
                if a == 0 {
                    continue;
                }
                for ib in 0..b.rows {
                    let start = (ia * b.rows + ib) * c + ja * b.cols;
                    self.field
                        .axpy(&mut out.data[start..start + b.cols], a, b.row(ib));
                }
            }
        }
        Ok(out)
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn block_diag(field: &Field, blocks: &[Matrix]) -> Matrix {
        let r = blocks.iter().map(|b| b.rows).sum();
        let c = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, r, c);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            out.set_block(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, i0: usize, j0: usize, block: &Matrix) {
        assert!(i0 + block.rows <= self.rows && j0 + block.cols <= self.cols);
        for i in 0..block.rows {
            let start = (i0 + i) * self.cols + j0;
            self.data[start..start + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn block(&self, i0: usize, j0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(&self.field, rows, cols, |i, j| self.get(i0 + i, j0 + j))
    }

    /// Conjugate P * self * P^{-1} where P permutes basis vectors: new index perm[i] holds old i.
    pub fn permuted(&self, perm: &[usize]) -> Matrix {
        assert!(self.is_square() && perm.len() == self.rows);
        let mut out = Matrix::zeros(&self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(perm[i], perm[j], self.get(i, j));
            }
        }
        out
    }

    /// Uniformly random entries.
    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        Matrix::from_fn(field, rows, cols, |_, _| rng.gen_range(0..field.order()))
    }

    /// Each entry nonzero with probability `density`.
    pub fn random_sparse<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, density: f64, rng: &mut R) -> Matrix {
        Matrix::from_fn(field, rows, cols, |_, _| {
            if rng.gen_bool(density) {
                rng.gen_range(0..field.order())
            } else {
                0
            }
        })
    }

    pub fn random_invertible<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Matrix {
        loop {
            let m = Matrix::random(field, n, n, rng);
            if m.is_invertible() {
                return m;
            }
        }
    }

    /// Entries mapped through a field embedding table.
    pub fn embed(&self, big: &Field, table: &[Elem]) -> Matrix {
        Matrix {
            field: big.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| table[a as usize]).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.forward_eliminate()
    }

    /// Row echelon in place (no back substitution); returns the rank.
    fn forward_eliminate(&mut self) -> usize {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in c..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            f.scale(&mut self.data[r * cols + c..(r + 1) * cols], inv);
            let (top, bottom) = self.data.split_at_mut((r + 1) * cols);
            let pivot_row = &top[r * cols + c..(r + 1) * cols];
            for i in 0..rows - r - 1 {
                let row = &mut bottom[i * cols + c..(i + 1) * cols];
                let a = row[0];
                if a != 0 {
                    f.axpy(row, f.neg(a), pivot_row);
                }
            }
            r += 1;
        }
        r
    }

    /// Reduced row echelon form and pivot columns (leftmost pivot, topmost row).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let f = m.field.clone();
        let rank = m.forward_eliminate();
        let cols = m.cols;
        let mut pivots = Vec::with_capacity(rank);
        for i in 0..rank {
            let c = (0..cols).find(|&c| m.data[i * cols + c] != 0).expect("pivot row");
            pivots.push(c);
        }
        for i in (0..rank).rev() {
            let c = pivots[i];
            let (top, rest) = m.data.split_at_mut(i * cols);
            let pivot_row = &rest[c..cols];
            for k in 0..i {
                let row = &mut top[k * cols + c..(k + 1) * cols];
                let a = row[0];
                if a != 0 {
                    f.axpy(row, f.neg(a), pivot_row);
                }
            }
        }
        (m, pivots)
    }

    /// Basis of the right kernel, as columns of the returned matrix (canonical RREF basis).
    pub fn nullspace(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    /// Kernel basis as a list of vectors.
    pub fn nullspace_vectors(&self) -> Vec<Vec<Elem>> {
        let n = self.nullspace();
        (0..n.cols).map(|j| n.column(j)).collect()
    }

    /// One solution of self * x = b, if any.
    pub fn solve(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Jordan type of a nilpotent matrix from the ranks of its powers.
    pub fn nilpotent_jordan_type(&self) -> Result<JordanType> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("Jordan type of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut ranks = vec![n];
        let mut power = self.clone();
        loop {
            let r = power.rank();
            ranks.push(r);
            if r == 0 {
                break;
            }
            if ranks.len() > n + 1 || r == ranks[ranks.len() - 2] {
                return Err(Error::NotNilpotent);
            }
            power = power.mul(self)?;
        }
        Ok(JordanType::from_power_ranks(&ranks))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            field: self.field.spec(),
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|&a| self.field.digits(a)).collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Matrix> {
        let field = Field::from_spec(json.field)?;
        let data = json
            .entries
            .iter()
            .map(|d| field.from_digits(d))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_data(&field, json.rows, json.cols, data)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u32>>,
}

/// Partition of a nilpotent matrix into Jordan block sizes, largest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JordanType {
    pub parts: Vec<usize>,
}

impl JordanType {
    pub fn new(mut parts: Vec<usize>) -> JordanType {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        JordanType { parts }
    }

    /// From ranks r_0 = n, r_1, ..., r_k = 0 of successive powers.
    pub fn from_power_ranks(ranks: &[usize]) -> JordanType {
        let at = |s: usize| ranks.get(s).copied().unwrap_or(0);
        let mut parts = Vec::new();
        for s in 1..ranks.len() {
            let at_least_s = at(s - 1) - at(s);
            let at_least_next = at(s) - at(s + 1);
            for _ in 0..at_least_s - at_least_next {
                parts.push(s);
            }
        }
        JordanType::new(parts)
    }

    pub fn dim(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of blocks of size exactly s.
    pub fn count(&self, s: usize) -> usize {
        self.parts.iter().filter(|&&p| p == s).count()
    }

    pub fn max_part(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn num_blocks(&self) -> usize {
        self.parts.len()
    }

    /// All blocks have size `s` (e.g. free over k[t]/t^s).
    pub fn all_equal(&self, s: usize) -> bool {
        self.parts.iter().all(|&p| p == s)
    }

    /// (size, multiplicity) pairs, largest size first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((s, c)) if *s == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .multiplicities()
            .iter()
            .map(|&(s, c)| if c == 1 { format!("J{s}") } else { format!("{c}J{s}") })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

/// Incrementally built row space in echelon form.
///
/// Each stored row has its leading entry equal to 1 at its pivot column.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: Field,
    ncols: usize,
    rows: Vec<Vec<Elem>>,
    pivot_row: Vec<Option<usize>>,
}

impl RowSpace {
    pub fn new(field: &Field, ncols: usize) -> RowSpace {
        RowSpace { field: field.clone(), ncols, rows: Vec::new(), pivot_row: vec![None; ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Reduce v in place; returns the first column where the remainder is
    /// nonzero and has no pivot, or None if v reduced to zero.
    pub fn reduce(&self, v: &mut [Elem]) -> Option<usize> {
        let f = &self.field;
        for c in 0..self.ncols {
            let a = v[c];
            if a == 0 {
                continue;
            }
            match self.pivot_row[c] {
                Some(r) => {
                    let row = &self.rows[r];
                    f.axpy(&mut v[c..], f.neg(a), &row[c..]);
                }
                None => return Some(c),
            }
        }
        None
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w).is_none()
    }

    /// Insert v; returns true if it enlarged the space.
    pub fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        assert_eq!(v.len(), self.ncols);
        match self.reduce(&mut v) {
            None => false,
            Some(c) => {
                let inv = self.field.inv(v[c]);
                self.field.scale(&mut v[c..], inv);
                self.pivot_row[c] = Some(self.rows.len());
                self.rows.push(v);
                true
            }
        }
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_some()).collect()
    }

    /// Reduced basis rows sorted by pivot.
    pub fn reduced_rows(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let pivots = self.pivots();
        let mut rows: Vec<Vec<Elem>> =
            pivots.iter().map(|&c| self.rows[self.pivot_row[c].unwrap()].clone()).collect();
        for i in (0..rows.len()).rev() {
            let c = pivots[i];
            let (top, rest) = rows.split_at_mut(i);
            let pr = &rest[0];
            for row in top.iter_mut() {
                let a = row[c];
                if a != 0 {
                    f.axpy(&mut row[c..], f.neg(a), &pr[c..]);
                }
            }
        }
        rows
    }

    /// Basis of {x : r . x = 0 for all rows r}, canonical RREF kernel basis.
    pub fn kernel(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let pivots = self.pivots();
        let rows = self.reduced_rows();
        let mut is_pivot = vec![false; self.ncols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|fc| {
                let mut x = vec![0; self.ncols];
                x[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    x[pc] = f.neg(rows[i][fc]);
                }
                x
            })
            .collect()
    }

    /// Rows as stored (each with a unit leading entry).
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.rows
    }
}
