//! Exact linear algebra: matrices with dense or sparse row storage,
//! incremental reduced row echelon forms and subspaces.
//!
//! Matrices act on column vectors from the left. The column of a linear map
//! indexed by `j` is the image of the `j`-th basis vector.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalars::Field;

/// Sparse vector: `(index, value)` pairs, indices strictly increasing, no zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

static DENSITY_PERCENT: AtomicUsize = AtomicUsize::new(25);

/// Matrices whose fraction of nonzero entries is below `percent`% are stored sparsely.
pub fn set_density_threshold(percent: usize) {
    DENSITY_PERCENT.store(percent.min(100), Ordering::Relaxed);
}

pub fn density_threshold() -> usize {
    DENSITY_PERCENT.load(Ordering::Relaxed)
}

pub fn sparsify<F: Field>(v: &[F]) -> SparseVec<F> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn densify<F: Field>(v: &[(usize, F)], n: usize) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a + c*b` for sparse vectors.
pub fn axpy<F: Field>(a: &[(usize, F)], c: &F, b: &[(usize, F)]) -> SparseVec<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = c.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.clone() + c.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_get<F: Field>(v: &[(usize, F)], i: usize) -> F {
    match v.binary_search_by_key(&i, |(k, _)| *k) {
        Ok(pos) => v[pos].1.clone(),
        Err(_) => F::zero(),
    }
}

pub fn scale_sparse<F: Field>(v: &[(usize, F)], c: &F) -> SparseVec<F> {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, c.clone() * x.clone())).collect()
}

#[derive(Clone)]
enum Storage<F> {
    Dense(Vec<F>),
    Sparse(Vec<SparseVec<F>>),
}

/// A `rows × cols` matrix over `F`.
#[derive(Clone)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    storage: Storage<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, storage: Storage::Sparse(vec![Vec::new(); rows]) }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| vec![(i, F::one())]).collect();
        Self::from_sparse_rows(n, n, rows)
    }

    pub fn scalar(c: F) -> Self {
        Self::from_sparse_rows(1, 1, vec![if c.is_zero() { vec![] } else { vec![(0, c)] }])
    }

    /// Builds from sparse rows and picks the storage by density.
    pub fn from_sparse_rows(rows: usize, cols: usize, data: Vec<SparseVec<F>>) -> Self {
        assert_eq!(data.len(), rows, "row count mismatch");
        debug_assert!(data.iter().all(|r| r.iter().all(|(j, x)| *j < cols && !x.is_zero())));
        debug_assert!(data.iter().all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)));
        let nnz: usize = data.iter().map(Vec::len).sum();
        let cells = rows * cols;
        if cells > 0 && nnz * 100 >= density_threshold() * cells && density_threshold() < 100 {
            let mut dense = vec![F::zero(); cells];
            for (i, r) in data.into_iter().enumerate() {
                for (j, x) in r {
                    dense[i * cols + j] = x;
                }
            }
            Matrix { rows, cols, storage: Storage::Dense(dense) }
        } else {
            Matrix { rows, cols, storage: Storage::Sparse(data) }
        }
    }

    /// Builds from dense rows. All rows must have length `cols`.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Vec<F>>) -> Result<Self> {
        if data.len() != rows || data.iter().any(|r| r.len() != cols) {
            return Err(Error::Schema(format!("expected a {rows}x{cols} matrix")));
        }
        Ok(Self::from_sparse_rows(rows, cols, data.iter().map(|r| sparsify(r)).collect()))
    }

    /// Builds from sparse columns.
    pub fn from_sparse_cols(rows: usize, cols: usize, data: Vec<SparseVec<F>>) -> Self {
        assert_eq!(data.len(), cols, "column count mismatch");
        Self::from_sparse_rows(cols, rows, data).transpose()
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let data = (0..rows)
            .map(|i| {
                (0..cols)
                    .filter_map(|j| {
                        let x = f(i, j);
                        (!x.is_zero()).then_some((j, x))
                    })
                    .collect()
            })
            .collect();
        Self::from_sparse_rows(rows, cols, data)
    }

    /// Permutation-style matrix sending basis vector `j` to `sign_j * e_{targets[j]}`.
    pub fn monomial(rows: usize, targets: &[(usize, F)]) -> Self {
        let cols = targets.len();
        let mut data: Vec<SparseVec<F>> = vec![Vec::new(); rows];
        for (j, (i, c)) in targets.iter().enumerate() {
            if !c.is_zero() {
                data[*i].push((j, c.clone()));
            }
        }
        Self::from_sparse_rows(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.iter().filter(|x| !x.is_zero()).count(),
            Storage::Sparse(s) => s.iter().map(Vec::len).sum(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols + j].clone(),
            Storage::Sparse(s) => sparse_get(&s[i], j),
        }
    }

    pub fn row(&self, i: usize) -> SparseVec<F> {
        match &self.storage {
            Storage::Dense(d) => sparsify(&d[i * self.cols..(i + 1) * self.cols]),
            Storage::Sparse(s) => s[i].clone(),
        }
    }

    pub fn sparse_rows(&self) -> Vec<SparseVec<F>> {
        match &self.storage {
            Storage::Dense(_) => (0..self.rows).map(|i| self.row(i)).collect(),
            Storage::Sparse(s) => s.clone(),
        }
    }

    fn for_row(&self, i: usize, mut f: impl FnMut(usize, &F)) {
        match &self.storage {
            Storage::Dense(d) => {
                for (j, x) in d[i * self.cols..(i + 1) * self.cols].iter().enumerate() {
                    if !x.is_zero() {
                        f(j, x);
                    }
                }
            }
            Storage::Sparse(s) => {
                for (j, x) in &s[i] {
                    f(*j, x);
                }
            }
        }
    }

    pub fn dense_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| densify(&self.row(i), self.cols)).collect()
    }

    pub fn col(&self, j: usize) -> SparseVec<F> {
        (0..self.rows)
            .filter_map(|i| {
                let x = self.get(i, j);
                (!x.is_zero()).then_some((i, x))
            })
            .collect()
    }

    pub fn sparse_cols(&self) -> Vec<SparseVec<F>> {
        self.transpose().sparse_rows()
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec<F>> = vec![Vec::new(); self.cols];
        for i in 0..self.rows {
            self.for_row(i, |j, x| data[j].push((i, x.clone())));
        }
        Self::from_sparse_rows(self.cols, self.rows, data)
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    /// `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let brows: Vec<SparseVec<F>> = other.sparse_rows();
        let mut data = Vec::with_capacity(self.rows);
        let mut acc = vec![F::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.cols];
        for i in 0..self.rows {
            self.for_row(i, |k, a| {
                for (j, b) in &brows[k] {
                    if !mark[*j] {
                        mark[*j] = true;
                        touched.push(*j);
                    }
                    acc[*j] = acc[*j].clone() + a.clone() * b.clone();
                }
            });
            touched.sort_unstable();
            let mut row = Vec::with_capacity(touched.len());
            for &j in &touched {
                let v = std::mem::replace(&mut acc[j], F::zero());
                mark[j] = false;
                if !v.is_zero() {
                    row.push((j, v));
                }
            }
            touched.clear();
            data.push(row);
        }
        Self::from_sparse_rows(self.rows, other.cols, data)
    }

    /// `self * v` for a dense vector.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut s = F::zero();
                self.for_row(i, |j, x| {
                    if !v[j].is_zero() {
                        s = s.clone() + x.clone() * v[j].clone();
                    }
                });
                s
            })
            .collect()
    }

    pub fn apply_sparse(&self, v: &[(usize, F)]) -> SparseVec<F> {
        sparsify(&self.apply(&densify(v, self.cols)))
    }

    /// Kronecker product on the lexicographic tensor basis (left factor major).
    pub fn kron(&self, other: &Self) -> Self {
        let arows = self.sparse_rows();
        let brows = other.sparse_rows();
        let mut data = Vec::with_capacity(self.rows * other.rows);
        for ar in &arows {
            for br in &brows {
                let mut row = Vec::with_capacity(ar.len() * br.len());
                for (j, x) in ar {
                    for (l, y) in br {
                        row.push((j * other.cols + l, x.clone() * y.clone()));
                    }
                }
                data.push(row);
            }
        }
        Self::from_sparse_rows(self.rows * other.rows, self.cols * other.cols, data)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(&F::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(&-F::one(), other)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = (0..self.rows).map(|i| axpy(&self.row(i), c, &other.row(i))).collect();
        Self::from_sparse_rows(self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &F) -> Self {
        let data = (0..self.rows).map(|i| scale_sparse(&self.row(i), c)).collect();
        Self::from_sparse_rows(self.rows, self.cols, data)
    }

    /// Block diagonal matrix.
    pub fn block_diag(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows);
        let mut off = 0;
        for b in blocks {
            for r in b.sparse_rows() {
                data.push(r.into_iter().map(|(j, x)| (j + off, x)).collect());
            }
            off += b.cols;
        }
        Self::from_sparse_rows(rows, cols, data)
    }

    /// `[a | b | ...]`, all with equal row counts.
    pub fn hstack(blocks: &[Self], rows: usize) -> Self {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut data: Vec<SparseVec<F>> = vec![Vec::new(); rows];
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for (i, r) in b.sparse_rows().into_iter().enumerate() {
                data[i].extend(r.into_iter().map(|(j, x)| (j + off, x)));
            }
            off += b.cols;
        }
        Self::from_sparse_rows(rows, cols, data)
    }

    /// Stacks blocks vertically, all with equal column counts.
    pub fn vstack(blocks: &[Self], cols: usize) -> Self {
        let mut data = Vec::new();
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.sparse_rows());
        }
        Self::from_sparse_rows(data.len(), cols, data)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let cols = self.sparse_cols();
        Self::from_sparse_cols(self.rows, idx.len(), idx.iter().map(|&j| cols[j].clone()).collect())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_sparse_rows(idx.len(), self.cols, idx.iter().map(|&i| self.row(i)).collect())
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.cols, self.sparse_rows()).rank()
    }

    /// Rank, a kernel basis (as columns) and an image basis (as columns).
    ///
    /// The kernel basis is indexed by the free columns of the reduced row
    /// echelon form; a kernel vector's coordinates in this basis are its
    /// entries at the free columns.
    pub fn rref_kernel_image(&self) -> (usize, Self, Self) {
        let ech = Echelon::from_rows(self.cols, self.sparse_rows());
        let kernel = ech.kernel_basis();
        let image = self.select_cols(&ech.pivot_cols());
        (ech.rank(), Self::from_sparse_cols(self.cols, kernel.len(), kernel), image)
    }

    /// Kernel basis vectors.
    pub fn kernel(&self) -> Vec<SparseVec<F>> {
        Echelon::from_rows(self.cols, self.sparse_rows()).kernel_basis()
    }

    /// Column space as a subspace of `F^rows`.
    pub fn image(&self) -> Subspace<F> {
        Subspace::from_vectors(self.rows, self.sparse_cols())
    }

    /// Some `x` with `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let n = self.cols;
        let rows: Vec<SparseVec<F>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i);
                if !b[i].is_zero() {
                    r.push((n, b[i].clone()));
                }
                r
            })
            .collect();
        let ech = Echelon::from_rows(n + 1, rows);
        let mut x = vec![F::zero(); n];
        for r in ech.rows() {
            let p = r[0].0;
            if p == n {
                return None;
            }
            x[p] = sparse_get(r, n);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let rows: Vec<SparseVec<F>> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                r.push((n + i, F::one()));
                r
            })
            .collect();
        let ech = Echelon::from_rows(2 * n, rows);
        let mut out: Vec<SparseVec<F>> = vec![Vec::new(); n];
        for r in ech.rows() {
            let p = r[0].0;
            if p >= n {
                return None;
            }
            out[p] = r.iter().filter(|(j, _)| *j >= n).map(|(j, x)| (j - n, x.clone())).collect();
        }
        if ech.rank() < n {
            return None;
        }
        Some(Self::from_sparse_rows(n, n, out))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Restores the shape of an empty matrix read from JSON, where an empty
    /// array carries no column count.
    pub fn with_shape(self, rows: usize, cols: usize) -> Result<Self> {
        if self.rows == rows && self.cols == cols {
            return Ok(self);
        }
        if self.rows == rows && self.is_zero() && (rows == 0 || self.cols == 0) {
            return Ok(Self::zeros(rows, cols));
        }
        Err(Error::Schema(format!(
            "expected a {rows}x{cols} matrix, found {}x{}",
            self.rows, self.cols
        )))
    }
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && (0..self.rows).all(|i| self.row(i) == other.row(i))
    }
}

impl<F: Field> Eq for Matrix<F> {}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in self.dense_rows() {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Serialize for Matrix<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.dense_rows().serialize(s)
    }
}

impl<'de, F: Field> Deserialize<'de> for Matrix<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<F>> = Vec::deserialize(d)?;
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Matrix::from_rows(r, c, rows).map_err(serde::de::Error::custom)
    }
}

/// Reduced row echelon form, built incrementally.
///
/// Every stored row has leading entry 1 at its pivot column and every other
/// stored row vanishes at that column.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    n: usize,
    rows: Vec<SparseVec<F>>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(n: usize) -> Self {
        Echelon { n, rows: Vec::new(), pivot_row: vec![None; n] }
    }

    pub fn from_rows(n: usize, rows: impl IntoIterator<Item = SparseVec<F>>) -> Self {
        let mut e = Self::new(n);
        for r in rows {
            e.insert(&r);
        }
        e
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Enlarges the ambient space; existing rows are unaffected.
    pub fn grow(&mut self, n: usize) {
        if n > self.n {
            self.n = n;
            self.pivot_row.resize(n, None);
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.pivot_row[j].is_some()).collect()
    }

    pub fn free_cols(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.pivot_row[j].is_none()).collect()
    }

    pub fn is_pivot(&self, j: usize) -> bool {
        self.pivot_row[j].is_some()
    }

    /// Reduces a dense vector in place to its canonical remainder.
    pub fn reduce_dense(&self, v: &mut [F]) {
        for r in &self.rows {
            let p = r[0].0;
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (j, x) in r {
                    v[*j] = v[*j].clone() - c.clone() * x.clone();
                }
            }
        }
    }

    pub fn reduce(&self, v: &[(usize, F)]) -> SparseVec<F> {
        if self.rows.is_empty() {
            return v.to_vec();
        }
        let mut d = densify(v, self.n);
        self.reduce_dense(&mut d);
        sparsify(&d)
    }

    /// Adds a row; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[(usize, F)]) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let (q, lead) = r[0].clone();
        let inv = F::one() / lead;
        let r = scale_sparse(&r, &inv);
        for row in &mut self.rows {
            let c = sparse_get(row, q);
            if !c.is_zero() {
                *row = axpy(row, &-c, &r);
            }
        }
        self.pivot_row[q] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    /// Null space basis of the row space: one vector per free column.
    pub fn kernel_basis(&self) -> Vec<SparseVec<F>> {
        self.free_cols()
            .into_iter()
            .map(|f| {
                let mut v: SparseVec<F> = self
                    .rows
                    .iter()
                    .filter_map(|r| {
                        let x = sparse_get(r, f);
                        (!x.is_zero()).then(|| (r[0].0, -x))
                    })
                    .collect();
                v.push((f, F::one()));
                v.sort_by_key(|(i, _)| *i);
                v
            })
            .collect()
    }

    /// Rows sorted by pivot column.
    pub fn sorted_rows(&self) -> Vec<SparseVec<F>> {
        self.pivot_cols()
            .into_iter()
            .map(|p| self.rows[self.pivot_row[p].unwrap()].clone())
            .collect()
    }
}

/// A linear subspace of `F^n`, stored in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace<F> {
    ech: Echelon<F>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(n: usize) -> Self {
        Subspace { ech: Echelon::new(n) }
    }

    pub fn full(n: usize) -> Self {
        Self::from_vectors(n, (0..n).map(|i| vec![(i, F::one())]))
    }

    pub fn from_vectors(n: usize, vs: impl IntoIterator<Item = SparseVec<F>>) -> Self {
        Subspace { ech: Echelon::from_rows(n, vs) }
    }

    pub fn ambient(&self) -> usize {
        self.ech.n
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn codim(&self) -> usize {
        self.ambient() - self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.codim() == 0
    }

    pub fn echelon(&self) -> &Echelon<F> {
        &self.ech
    }

    /// Canonical basis (reduced rows sorted by pivot).
    pub fn basis(&self) -> Vec<SparseVec<F>> {
        self.ech.sorted_rows()
    }

    /// Basis vectors as the columns of an `n × dim` matrix.
    pub fn basis_matrix(&self) -> Matrix<F> {
        Matrix::from_sparse_cols(self.ambient(), self.dim(), self.basis())
    }

    pub fn insert(&mut self, v: &[(usize, F)]) -> bool {
        self.ech.insert(v)
    }

    pub fn contains(&self, v: &[(usize, F)]) -> bool {
        self.ech.reduce(v).is_empty()
    }

    pub fn reduce(&self, v: &[(usize, F)]) -> SparseVec<F> {
        self.ech.reduce(v)
    }

    /// Columns indexing the canonical quotient basis.
    pub fn quotient_cols(&self) -> Vec<usize> {
        self.ech.free_cols()
    }

    /// Coordinates of the class of `v` in `F^n / self`, on the basis given by
    /// the unit vectors at [`Self::quotient_cols`].
    pub fn quotient_coords(&self, v: &[(usize, F)]) -> Vec<F> {
        let r = densify(&self.reduce(v), self.ambient());
        self.quotient_cols().into_iter().map(|j| r[j].clone()).collect()
    }

    /// Projection `F^n → F^n / self` as a matrix.
    pub fn quotient_map(&self) -> Matrix<F> {
        let free = self.quotient_cols();
        let mut pos = vec![usize::MAX; self.ambient()];
        for (k, &j) in free.iter().enumerate() {
            pos[j] = k;
        }
        let cols = (0..self.ambient())
            .map(|i| {
                self.reduce(&[(i, F::one())])
                    .into_iter()
                    .map(|(j, x)| (pos[j], x))
                    .collect::<SparseVec<F>>()
            })
            .map(|mut c| {
                c.sort_by_key(|(i, _)| *i);
                c
            })
            .collect();
        Matrix::from_sparse_cols(free.len(), self.ambient(), cols)
    }

    /// `dim × n` matrix taking a vector of the subspace to its coordinates in
    /// the canonical basis (its entries at the pivot columns).
    pub fn coords_map(&self) -> Matrix<F> {
        let cols: Vec<SparseVec<F>> = {
            let mut c = vec![Vec::new(); self.ambient()];
            for (k, p) in self.ech.pivot_cols().into_iter().enumerate() {
                c[p] = vec![(k, F::one())];
            }
            c
        };
        Matrix::from_sparse_cols(self.dim(), self.ambient(), cols)
    }

    /// Section of the quotient map sending quotient basis vectors to unit vectors.
    pub fn quotient_lift(&self) -> Matrix<F> {
        let free = self.quotient_cols();
        let cols = free.iter().map(|&j| vec![(j, F::one())]).collect();
        Matrix::from_sparse_cols(self.ambient(), free.len(), cols)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ech.rows().iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for r in other.ech.rows() {
            out.insert(r);
        }
        out
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let n = self.ambient();
        let u = self.basis();
        let w = other.basis();
        let k = u.len();
        let mut cols: Vec<SparseVec<F>> = u.clone();
        cols.extend(w.iter().map(|v| scale_sparse(v, &-F::one())));
        let m = Matrix::from_sparse_cols(n, cols.len(), cols);
        let vs = m.kernel().into_iter().map(|a| {
            let mut acc = Vec::new();
            for (i, c) in a {
                if i < k {
                    acc = axpy(&acc, &c, &u[i]);
                }
            }
            acc
        });
        Self::from_vectors(n, vs)
    }

    /// Whether the subspace is spanned by standard basis vectors.
    pub fn is_coordinate(&self) -> bool {
        self.ech.rows().iter().all(|r| r.len() == 1)
    }

    /// Image under a linear map.
    pub fn map(&self, m: &Matrix<F>) -> Self {
        Self::from_vectors(m.rows(), self.ech.rows().iter().map(|r| m.apply_sparse(r)))
    }
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient() == other.ambient() && self.basis() == other.basis()
    }
}

impl<F: Field> Eq for Subspace<F> {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Fp, Rational};
    use proptest::prelude::*;

    type Q = Rational;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Matrix::from_rows(r, c, rows.iter().map(|x| x.iter().map(|&v| q(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let (r, k, _) = Matrix::<Q>::identity(2).rref_kernel_image();
        assert_eq!((r, k.cols()), (2, 0));
        let (r, k, img) = Matrix::<Q>::zeros(3, 4).rref_kernel_image();
        assert_eq!((r, k.cols(), img.cols()), (0, 4, 0));
    }

    #[test]
    fn rank_one_kernel() {
        let m = qm(&[&[1, 2], &[2, 4]]);
        let (r, k, img) = m.rref_kernel_image();
        assert_eq!(r, 1);
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col(0), vec![(0, q(-2)), (1, q(1))]);
        assert_eq!(img.col(0), vec![(0, q(1)), (1, q(2))]);
    }

    #[test]
    fn kron_small() {
        assert_eq!(Matrix::<Q>::identity(2).kron(&Matrix::identity(3)), Matrix::identity(6));
        assert_eq!(qm(&[&[2]]).kron(&qm(&[&[3]])), qm(&[&[6]]));
        let a = qm(&[&[1, 2], &[3, 4]]);
        let b = qm(&[&[0, 1], &[1, 0]]);
        let k = a.kron(&b);
        assert_eq!(k.get(0, 1), q(1));
        assert_eq!(k.get(3, 2), q(4));
        assert_eq!(k.get(2, 1), q(3));
    }

    #[test]
    fn storage_choice_and_equality() {
        let d = qm(&[&[1, 2], &[3, 4]]);
        assert!(!d.is_sparse());
        let s = Matrix::<Q>::identity(10);
        assert!(s.is_sparse());
        assert_eq!(s.mul(&s), s);
    }

    #[test]
    fn inverse_and_solve() {
        let a = qm(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(qm(&[&[1, 2], &[2, 4]]).solve(&[q(1), q(3)]), None);
    }

    #[test]
    fn subspace_ops() {
        let u = Subspace::from_vectors(3, vec![vec![(0, q(1))], vec![(1, q(1))]]);
        let w = Subspace::from_vectors(3, vec![vec![(1, q(1)), (2, q(1))], vec![(0, q(1))]]);
        let i = u.intersect(&w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[(0, q(1))]));
        assert_eq!(u.sum(&w).dim(), 3);
        assert!(u.is_coordinate());
        assert!(!w.is_coordinate());
        let qmap = u.quotient_map();
        assert_eq!(qmap.rows(), 1);
        assert_eq!(u.quotient_coords(&[(2, q(5)), (0, q(1))]), vec![q(5)]);
    }

    #[test]
    fn prime_field_rank() {
        type F3 = Fp<3>;
        let m = Matrix::<F3>::from_fn(2, 2, |i, j| F3::new([[1, 2], [2, 1]][i][j]));
        assert_eq!(m.rank(), 1);
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Q>> {
        prop::collection::vec(-3i64..4, rows * cols).prop_map(move |v| {
            Matrix::from_fn(rows, cols, |i, j| q(v[i * cols + j]))
        })
    }

    proptest! {
        #[test]
        fn kron_rank_multiplies(a in small_matrix(2, 2), b in small_matrix(2, 2)) {
            prop_assert_eq!(a.kron(&b).rank(), a.rank() * b.rank());
        }

        #[test]
        fn solve_round_trip(a in small_matrix(3, 4), x in prop::collection::vec(-5i64..6, 4)) {
            let x: Vec<Q> = x.into_iter().map(q).collect();
            let b = a.apply(&x);
            let y = a.solve(&b).expect("consistent system");
            prop_assert_eq!(a.apply(&y), b);
        }

        #[test]
        fn rank_nullity(a in small_matrix(3, 5)) {
            let (r, k, img) = a.rref_kernel_image();
            prop_assert_eq!(r + k.cols(), 5);
            prop_assert_eq!(img.cols(), r);
            prop_assert!(a.mul(&k).is_zero());
        }

        #[test]
        fn transpose_product(a in small_matrix(2, 3), b in small_matrix(3, 2)) {
            prop_assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
        }
    }
}
