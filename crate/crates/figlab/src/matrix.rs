//! Dense exact linear algebra over a [`Field`].
//!
//! Everything the rest of the crate needs reduces to a handful of primitives:
//!
//! - canonical reduced row echelon form with pivot tracking,
//! - kernel / image / row-space bases,
//! - exact linear solves (single and multi right-hand side),
//! - canonical subspaces (RREF row bases) with sums and membership tests,
//! - quotient maps `k^n -> k^n / U` together with a chosen section.
//!
//! Matrices are dense and row-major. Vectors are plain `Vec<F::El>` and act
//! as columns: a matrix of shape `rows x cols` maps `k^cols -> k^rows`.
//! Subspaces of `k^n` are represented by their unique RREF row basis, so two
//! subspaces are equal iff their representations are equal.

use crate::error::{FigError, Result};
use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    pub field: F,
    pub rows: usize,
    pub cols: usize,
    data: Vec<F::El>,
}

impl<F: Field> std::fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field.spec())?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.field.format(self.at(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Build from a closure on (row, col).
    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::El) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Build from explicit rows; all rows must have length `cols`.
    pub fn from_rows(field: F, cols: usize, rows: Vec<Vec<F::El>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        Matrix { field, rows: n, cols, data }
    }

    /// Sparse triplet constructor; later triplets overwrite earlier ones.
    pub fn from_triplets(field: F, rows: usize, cols: usize, triplets: &[(usize, usize, F::El)]) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for (r, c, v) in triplets {
            m.set(*r, *c, v.clone());
        }
        m
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &F::El {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: F::El) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::El] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<F::El> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub shape");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &F::El) -> Self {
        let f = self.field;
        let data = self.data.iter().map(|a| f.mul(a, s)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mul shape: {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if f.is_zero(b) {
                        continue;
                    }
                    let cur = out.at(r, c);
                    let v = f.add(cur, &f.mul(a, b));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Apply to a column vector: `self * v`.
    pub fn mul_vec(&self, v: &[F::El]) -> Vec<F::El> {
        assert_eq!(self.cols, v.len(), "mul_vec shape");
        let f = self.field;
        let mut out = vec![f.zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = f.zero();
            for c in 0..self.cols {
                let a = self.at(r, c);
                if !f.is_zero(a) && !f.is_zero(&v[c]) {
                    acc = f.add(&acc, &f.mul(a, &v[c]));
                }
            }
            out[r] = acc;
        }
        out
    }

    /// Stack vertically: `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack cols");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Stack horizontally: `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack rows");
        Self::from_fn(self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        })
    }

    pub fn block_diag(field: F, blocks: &[&Matrix<F>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.at(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Canonical reduced row echelon form together with the pivot columns.
    ///
    /// The result is unique for the row space, so it doubles as a canonical
    /// form: two row-equivalent matrices produce identical output.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Find a pivot in column c at or below row r.
            let mut pr = None;
            for i in r..m.rows {
                if !f.is_zero(m.at(i, c)) {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != r {
                for c2 in 0..m.cols {
                    let a = m.at(r, c2).clone();
                    let b = m.at(pr, c2).clone();
                    m.set(r, c2, b);
                    m.set(pr, c2, a);
                }
            }
            // Normalise the pivot row.
            let inv = f.inv(m.at(r, c));
            for c2 in c..m.cols {
                let v = f.mul(m.at(r, c2), &inv);
                m.set(r, c2, v);
            }
            // Eliminate the column everywhere else.
            for i in 0..m.rows {
                if i == r || f.is_zero(m.at(i, c)) {
                    continue;
                }
                let factor = m.at(i, c).clone();
                for c2 in c..m.cols {
                    let v = f.sub(m.at(i, c2), &f.mul(&factor, m.at(r, c2)));
                    m.set(i, c2, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : self * x = 0}` as a canonical subspace
    /// of `k^cols`.
    pub fn kernel_basis(&self) -> Subspace<F> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.at(i, free));
            }
            basis.push(v);
        }
        Subspace::from_vectors(f, self.cols, basis)
    }

    /// Basis of the column space as a canonical subspace of `k^rows`.
    /// (Subspaces are row bases repo-wide, hence the transpose.)
    pub fn image_basis(&self) -> Subspace<F> {
        Subspace::from_vectors(self.field, self.rows, (0..self.cols).map(|c| self.col(c)).collect())
    }

    /// Canonical basis of the row space.
    pub fn row_space(&self) -> Subspace<F> {
        Subspace::from_vectors(self.field, self.cols, (0..self.rows).map(|r| self.row(r).to_vec()).collect())
    }

    /// One solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[F::El]) -> Option<Vec<F::El>> {
        let sols = self.solve_matrix(&Matrix::from_fn(self.field, self.rows, 1, |r, _| b[r].clone()))?;
        Some(sols.col(0))
    }

    /// Columnwise solve `self * X = B`; `None` if any column is inconsistent.
    pub fn solve_matrix(&self, b: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(self.rows, b.rows, "solve shape");
        let f = self.field;
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        // Inconsistent iff a pivot lands in the RHS block.
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(f, self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(p, c, r.at(i, self.cols + c).clone());
            }
        }
        Some(x)
    }
}

/// A subspace of `k^ambient`, stored as its unique RREF row basis.
#[derive(Clone, PartialEq)]
pub struct Subspace<F: Field> {
    pub ambient: usize,
    /// Full-row-rank matrix in RREF; rows form the canonical basis.
    pub basis: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> std::fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of k^{})", self.dim(), self.ambient)
    }
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: F, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(field, 0, ambient), pivots: vec![] }
    }

    pub fn full(field: F, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Canonicalise a spanning set into the RREF basis.
    pub fn from_vectors(field: F, ambient: usize, vectors: Vec<Vec<F::El>>) -> Self {
        let m = Matrix::from_rows(field, ambient, vectors);
        let (r, pivots) = m.rref();
        let dim = pivots.len();
        let basis = Matrix::from_fn(field, dim, ambient, |i, j| r.at(i, j).clone());
        Subspace { ambient, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[F::El]) -> Option<Vec<F::El>> {
        assert_eq!(v.len(), self.ambient, "coordinates ambient");
        let f = self.basis.field;
        let coeffs: Vec<F::El> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        // Verify the combination reproduces v (detects vectors outside).
        let mut rec = vec![f.zero(); self.ambient];
        for (i, c) in coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            for j in 0..self.ambient {
                rec[j] = f.add(&rec[j], &f.mul(c, self.basis.at(i, j)));
            }
        }
        if rec == *v {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[F::El]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace<F>) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    /// Insert one vector while keeping the canonical RREF basis. Returns the
    /// new canonical row if the dimension grew, `None` if `v` was already
    /// inside. Cost is one reduction pass, not a full RREF rebuild.
    pub fn insert(&mut self, v: &[F::El]) -> Option<Vec<F::El>> {
        assert_eq!(v.len(), self.ambient, "insert ambient");
        let f = self.basis.field;
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if f.is_zero(&w[p]) {
                continue;
            }
            let c = w[p].clone();
            for j in p..self.ambient {
                let t = f.mul(&c, self.basis.at(i, j));
                w[j] = f.sub(&w[j], &t);
            }
        }
        let lp = (0..self.ambient).find(|&j| !f.is_zero(&w[j]))?;
        let inv = f.inv(&w[lp]);
        for j in lp..self.ambient {
            w[j] = f.mul(&w[j], &inv);
        }
        // Clear the new pivot column in the existing rows.
        for i in 0..self.basis.rows {
            let c = self.basis.at(i, lp).clone();
            if f.is_zero(&c) {
                continue;
            }
            for j in lp..self.ambient {
                let t = f.mul(&c, &w[j]);
                let cur = f.sub(self.basis.at(i, j), &t);
                self.basis.set(i, j, cur);
            }
        }
        // Splice the new row in, keeping pivots ascending.
        let idx = self.pivots.partition_point(|&p| p < lp);
        self.pivots.insert(idx, lp);
        let start = idx * self.ambient;
        self.basis.data.splice(start..start, w.iter().cloned());
        self.basis.rows += 1;
        Some(w)
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        assert_eq!(self.ambient, other.ambient, "sum ambient");
        let (big, small) = if self.dim() >= other.dim() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for i in 0..small.dim() {
            out.insert(small.basis.row(i));
        }
        out
    }

    pub fn intersection(&self, other: &Subspace<F>) -> Subspace<F> {
        // Kernel of the stacked constraint: v in both row spaces.
        // Solve via the standard trick: x = a*B1 = b*B2; kernel of [B1^T | -B2^T] pairs.
        assert_eq!(self.ambient, other.ambient);
        let f = self.basis.field;
        let b1t = self.basis.transpose();
        let b2t = other.basis.transpose();
        let neg_b2t = b2t.scale(&f.neg(&f.one()));
        let stacked = b1t.hstack(&neg_b2t);
        let ker = stacked.kernel_basis();
        let mut vecs = Vec::new();
        for i in 0..ker.dim() {
            let row = ker.basis.row(i);
            let a = &row[..self.dim()];
            let v = self.basis.transpose().mul_vec(a);
            vecs.push(v);
        }
        Subspace::from_vectors(f, self.ambient, vecs)
    }
}

/// Quotient data for `k^n / U`: a projection matrix `q` (shape `(n-d) x n`)
/// whose kernel is exactly `U`, and a section `s` (shape `n x (n-d)`) with
/// `q * s = I`. Both are canonical given the RREF basis of `U`.
pub struct QuotientMap<F: Field> {
    pub proj: Matrix<F>,
    pub section: Matrix<F>,
}

pub fn quotient_map<F: Field>(field: F, ambient: usize, sub: &Subspace<F>) -> QuotientMap<F> {
    assert_eq!(sub.ambient, ambient, "quotient ambient");
    let d = sub.dim();
    let free: Vec<usize> = {
        let mut pivot = vec![false; ambient];
        for &p in &sub.pivots {
            pivot[p] = true;
        }
        (0..ambient).filter(|c| !pivot[*c]).collect()
    };
    let q = Matrix::from_fn(field, ambient - d, ambient, |r, c| {
        if c == free[r] {
            field.one()
        } else if let Some(i) = sub.pivots.iter().position(|&p| p == c) {
            field.neg(sub.basis.at(i, free[r]))
        } else {
            field.zero()
        }
    });
    let s = Matrix::from_fn(field, ambient, ambient - d, |r, c| {
        if r == free[c] {
            field.one()
        } else {
            field.zero()
        }
    });
    QuotientMap { proj: q, section: s }
}

/// Express each column of `img` in the row basis `sub` (columns are vectors
/// in the ambient space). Errors if some column falls outside the subspace.
pub fn columns_in_subspace<F: Field>(sub: &Subspace<F>, img: &Matrix<F>) -> Result<Matrix<F>> {
    let f = img.field;
    let mut out = Matrix::zeros(f, sub.dim(), img.cols);
    for c in 0..img.cols {
        let v = img.col(c);
        let coords = sub.coordinates(&v).ok_or_else(|| {
            FigError::SolveInconsistent(format!("column {c} is outside the target subspace"))
        })?;
        for (r, x) in coords.into_iter().enumerate() {
            out.set(r, c, x);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn qm(rows: Vec<Vec<i64>>) -> Matrix<Rationals> {
        let f = Rationals;
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        Matrix::from_rows(f, cols, rows.into_iter().map(|r| r.into_iter().map(|x| f.from_i64(x)).collect()).collect())
    }

    #[test]
    fn rref_identity_is_fixed() {
        let f = PrimeField::new(3).unwrap();
        let id = Matrix::identity(f, 4);
        let (r, pivots) = id.rref();
        assert_eq!(r, id);
        assert_eq!(pivots, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rref_rank_one_example() {
        // [[2,4],[1,2]] over Q -> [[1,2],[0,0]] with pivot column 0.
        let m = qm(vec![vec![2, 4], vec![1, 2]]);
        let (r, pivots) = m.rref();
        assert_eq!(r, qm(vec![vec![1, 2], vec![0, 0]]));
        assert_eq!(pivots, vec![0]);
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        let f = PrimeField::new(2).unwrap();
        let z = Matrix::zeros(f, 3, 3);
        assert_eq!(z.kernel_basis().dim(), 3);
        let id = Matrix::identity(f, 3);
        assert_eq!(id.kernel_basis().dim(), 0);
        // [[1,1]] over F_2 has kernel spanned by (1,1).
        let m = Matrix::from_rows(f, 2, vec![vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis.row(0), &[1, 1]);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = qm(vec![vec![1, 2], vec![2, 4]]);
        let f = Rationals;
        let b = vec![f.from_i64(3), f.from_i64(6)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let bad = vec![f.from_i64(3), f.from_i64(7)];
        assert!(m.solve(&bad).is_none());
    }

    #[test]
    fn quotient_map_of_line_in_plane() {
        // U = span{(1,1)} in Q^2: projection is 1x2 with kernel U.
        let f = Rationals;
        let u = Subspace::from_vectors(f, 2, vec![vec![f.from_i64(1), f.from_i64(1)]]);
        let q = quotient_map(f, 2, &u);
        assert_eq!(q.proj.rows, 1);
        assert!(q.proj.mul_vec(&[f.from_i64(1), f.from_i64(1)]).iter().all(|x| f.is_zero(x)));
        let qs = q.proj.mul(&q.section);
        assert_eq!(qs, Matrix::identity(f, 1));
    }

    #[test]
    fn subspace_sum_spans_plane() {
        let f = PrimeField::new(5).unwrap();
        let a = Subspace::from_vectors(f, 2, vec![vec![1, 0]]);
        let b = Subspace::from_vectors(f, 2, vec![vec![1, 1]]);
        let s = a.sum(&b);
        assert_eq!(s.dim(), 2);
        assert_eq!(s, Subspace::full(f, 2));
    }

    #[test]
    fn intersection_of_planes_in_3_space() {
        let f = Rationals;
        let a = Subspace::from_vectors(
            f,
            3,
            vec![
                vec![f.from_i64(1), f.from_i64(0), f.from_i64(0)],
                vec![f.from_i64(0), f.from_i64(1), f.from_i64(0)],
            ],
        );
        let b = Subspace::from_vectors(
            f,
            3,
            vec![
                vec![f.from_i64(0), f.from_i64(1), f.from_i64(1)],
                vec![f.from_i64(1), f.from_i64(0), f.from_i64(1)],
            ],
        );
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        // The intersection is spanned by (1, -1, 0)... check membership both ways.
        assert!(a.contains(i.basis.row(0)));
        assert!(b.contains(i.basis.row(0)));
    }

    #[test]
    fn empty_shapes_are_fine() {
        let f = PrimeField::new(2).unwrap();
        let m = Matrix::zeros(f, 0, 4);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().dim(), 4);
        let n = Matrix::zeros(f, 4, 0);
        assert_eq!(n.kernel_basis().dim(), 0);
        assert_eq!(n.image_basis().dim(), 0);
        let p = m.mul(&Matrix::zeros(f, 4, 0));
        assert_eq!((p.rows, p.cols), (0, 0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// RREF is idempotent and rank + nullity = cols (5x7 over F_2).
        #[test]
        fn rref_idempotent_and_rank_nullity(bits in proptest::collection::vec(0u64..2, 35)) {
            let f = PrimeField::new(2).unwrap();
            let m = Matrix::from_fn(f, 5, 7, |r, c| bits[r * 7 + c]);
            let (r1, p1) = m.rref();
            let (r2, p2) = r1.rref();
            prop_assert_eq!(&r1, &r2);
            prop_assert_eq!(&p1, &p2);
            prop_assert_eq!(m.rank() + m.kernel_basis().dim(), 7);
            // Every kernel vector is annihilated.
            let k = m.kernel_basis();
            for i in 0..k.dim() {
                let img = m.mul_vec(k.basis.row(i));
                prop_assert!(img.iter().all(|x| f.is_zero(x)));
            }
        }

        /// The canonical subspace form is independent of the spanning order.
        #[test]
        fn subspace_canonical_under_permutation(vals in proptest::collection::vec(-4i64..5, 12), swap in 0usize..3) {
            let f = Rationals;
            let mut rows: Vec<Vec<_>> = (0..3)
                .map(|r| (0..4).map(|c| f.from_i64(vals[r * 4 + c])).collect())
                .collect();
            let s1 = Subspace::from_vectors(f, 4, rows.clone());
            rows.swap(swap, (swap + 1) % 3);
            let s2 = Subspace::from_vectors(f, 4, rows);
            prop_assert_eq!(s1, s2);
        }

        /// solve_matrix returns exact solutions when consistent.
        #[test]
        fn solve_matrix_exact(vals in proptest::collection::vec(0u64..5, 12), xs in proptest::collection::vec(0u64..5, 6)) {
            let f = PrimeField::new(5).unwrap();
            let a = Matrix::from_fn(f, 4, 3, |r, c| vals[r * 3 + c]);
            let x = Matrix::from_fn(f, 3, 2, |r, c| xs[r * 2 + c]);
            let b = a.mul(&x);
            let sol = a.solve_matrix(&b).expect("consistent system");
            prop_assert_eq!(a.mul(&sol), b);
        }
    }
}
