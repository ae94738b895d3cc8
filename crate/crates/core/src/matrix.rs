//! Dense exact matrices over a [`FieldCtx`].
//!
//! Everything here is small (at most a few dozen rows at desk scale), so the
//! representation is a plain row-major `Vec`. Elimination always pivots on the
//! first nonzero entry in column order, which makes kernels, inverses and the
//! nilpotent normal form reproducible.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::field::{FieldCtx, FieldElem, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("shape mismatch: {op} of {lhs:?} and {rhs:?}")]
    ShapeMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("entries belong to different fields")]
    CtxMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.ctx)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join("; "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = FieldElem;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mat {
    pub fn new(ctx: &FieldCtx, rows: usize, cols: usize, data: Vec<FieldElem>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::ShapeMismatch {
                op: "construct",
                lhs: (rows, cols),
                rhs: (data.len(), 1),
            });
        }
        if data.iter().any(|e| e.ctx() != ctx) {
            return Err(MatrixError::CtxMismatch);
        }
        Ok(Mat {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(ctx: &FieldCtx, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Small integer matrices, mostly for fixtures.
    pub fn from_ints(ctx: &FieldCtx, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(ctx, r, c, |i, j| ctx.from_int(rows[i][j]))
    }

    pub fn zero(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        Mat {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        Mat::scalar(ctx, n, &ctx.one())
    }

    pub fn scalar(ctx: &FieldCtx, n: usize, c: &FieldElem) -> Self {
        let mut m = Mat::zero(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn diagonal(ctx: &FieldCtx, diag: &[FieldElem]) -> Self {
        let mut m = Mat::zero(ctx, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Column vector.
    pub fn column(ctx: &FieldCtx, v: Vec<FieldElem>) -> Self {
        Mat {
            ctx: ctx.clone(),
            rows: v.len(),
            cols: 1,
            data: v,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ctx: &FieldCtx, cols: &[Vec<FieldElem>]) -> Self {
        let n = cols.first().map_or(0, Vec::len);
        Mat::from_fn(ctx, n, cols.len(), |i, j| cols[j][i].clone())
    }

    /// Block diagonal matrix of upper shift (nilpotent Jordan) blocks.
    pub fn block_shift(ctx: &FieldCtx, sizes: &[usize]) -> Self {
        let n = sizes.iter().sum();
        let mut m = Mat::zero(ctx, n, n);
        let mut start = 0;
        for &s in sizes {
            for k in 0..s.saturating_sub(1) {
                m[(start + k, start + k + 1)] = ctx.one();
            }
            start += s;
        }
        m
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<FieldElem> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column_vec(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElem::is_zero)
    }

    fn square_dim(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare(self.rows, self.cols))
        }
    }

    fn check_same(&self, other: &Mat, op: &'static str) -> Result<(), MatrixError> {
        if self.ctx != other.ctx {
            return Err(MatrixError::CtxMismatch);
        }
        if self.shape() != other.shape() {
            return Err(MatrixError::ShapeMismatch {
                op,
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Mat) -> Result<Mat, MatrixError> {
        self.check_same(other, "add")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Mat { data, ..self.clone_shape() })
    }

    pub fn try_sub(&self, other: &Mat) -> Result<Mat, MatrixError> {
        self.check_same(other, "sub")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Mat { data, ..self.clone_shape() })
    }

    pub fn try_mul(&self, other: &Mat) -> Result<Mat, MatrixError> {
        if self.ctx != other.ctx {
            return Err(MatrixError::CtxMismatch);
        }
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch {
                op: "mul",
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        let mut out = Mat::zero(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn clone_shape(&self) -> Mat {
        Mat {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: Vec::new(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Mat {
        let data = self.data.iter().map(|a| a * c).collect();
        Mat { data, ..self.clone_shape() }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.ctx, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn pow(&self, mut exp: u64) -> Result<Mat, MatrixError> {
        let n = self.square_dim()?;
        let mut acc = Mat::identity(&self.ctx, n);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<FieldElem, MatrixError> {
        let n = self.square_dim()?;
        Ok((0..n).fold(self.ctx.zero(), |acc, i| acc + &self[(i, i)]))
    }

    pub fn det(&self) -> Result<FieldElem, MatrixError> {
        let n = self.square_dim()?;
        let mut m = self.clone();
        let mut det = self.ctx.one();
        for c in 0..n {
            let Some(pivot) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return Ok(self.ctx.zero());
            };
            if pivot != c {
                m.swap_rows(pivot, c);
                det = -det;
            }
            let pv = m[(c, c)].clone();
            det = &det * &pv;
            let pinv = pv.inv()?;
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = &m[(r, c)] * &pinv;
                for k in c..n {
                    let v = &m[(r, k)] - &(&f * &m[(c, k)]);
                    m[(r, k)] = v;
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pivot) = (r..self.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(pivot, r);
            let pinv = m[(r, c)].inv().expect("pivot is nonzero");
            for k in c..self.cols {
                m[(r, k)] = &m[(r, k)] * &pinv;
            }
            for i in 0..self.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for k in c..self.cols {
                    let v = &m[(i, k)] - &(&f * &m[(r, k)]);
                    m[(i, k)] = v;
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

    /// Null space basis as plain vectors, one per free column in increasing
    /// order, each with a 1 in its free column.
    pub fn kernel_vectors(&self) -> Vec<Vec<FieldElem>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.ctx.zero(); self.cols];
                v[f] = self.ctx.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }

    /// Null space basis as column matrices.
    pub fn kernel(&self) -> Vec<Mat> {
        self.kernel_vectors()
            .into_iter()
            .map(|v| Mat::column(&self.ctx, v))
            .collect()
    }

    pub fn inverse(&self) -> Result<Mat, MatrixError> {
        let n = self.square_dim()?;
        let aug = Mat::from_fn(&self.ctx, n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                self.ctx.one()
            } else {
                self.ctx.zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(MatrixError::Singular);
        }
        Ok(Mat::from_fn(&self.ctx, n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Entrywise [`FieldElem::modular_image`].
    pub fn modular_image(&self) -> Option<Mat> {
        let target = self.ctx.modular_image()?;
        let data = self
            .data
            .iter()
            .map(FieldElem::modular_image)
            .collect::<Option<Vec<_>>>()?;
        Some(Mat::from_vector(target, self.rows, self.cols, data))
    }

    /// `Some(c)` when the matrix equals `c·I`.
    pub fn is_scalar(&self) -> Option<FieldElem> {
        let n = self.square_dim().ok()?;
        if n == 0 {
            return None;
        }
        let c = self[(0, 0)].clone();
        for i in 0..n {
            for j in 0..n {
                let e = &self[(i, j)];
                let ok = if i == j { *e == c } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn is_nilpotent(&self) -> bool {
        match self.square_dim() {
            Ok(n) => self.pow(n as u64).map(|p| p.is_zero()).unwrap_or(false),
            Err(_) => false,
        }
    }

    /// `q · self · q_inv`.
    pub fn conjugate(&self, q: &Mat, q_inv: &Mat) -> Mat {
        &(q * self) * q_inv
    }

    /// Row-major flattening.
    pub fn vectorize(&self) -> Vec<FieldElem> {
        self.data.clone()
    }

    /// Inverse of [`Mat::vectorize`].
    pub fn from_vector(ctx: &FieldCtx, rows: usize, cols: usize, v: Vec<FieldElem>) -> Mat {
        assert_eq!(v.len(), rows * cols);
        Mat {
            ctx: ctx.clone(),
            rows,
            cols,
            data: v,
        }
    }

    /// Nilpotent normal form by kernel chains.
    ///
    /// Returns `Q` and the block sizes `(m_1 ≥ m_2 ≥ …)` such that `Q·A·Q⁻¹` is the
    /// block diagonal matrix of upper shift blocks of those sizes.
    pub fn nilpotent_normalize(&self) -> Result<(Mat, Vec<usize>), MatrixError> {
        let n = self.square_dim()?;
        if !self.is_nilpotent() {
            return Err(MatrixError::NotNilpotent);
        }
        // powers[k] = A^k, up to the nilpotency index s (A^s = 0)
        let mut powers = vec![Mat::identity(&self.ctx, n)];
        while !powers.last().unwrap().is_zero() {
            let next = powers.last().unwrap() * self;
            powers.push(next);
        }
        let s = powers.len() - 1;
        let kernels: Vec<Vec<Vec<FieldElem>>> = powers.iter().map(Mat::kernel_vectors).collect();

        let apply = |m: &Mat, v: &[FieldElem]| -> Vec<FieldElem> {
            (0..n)
                .map(|i| {
                    m.row(i)
                        .iter()
                        .zip(v)
                        .fold(self.ctx.zero(), |acc, (a, b)| acc + a * b)
                })
                .collect()
        };

        // each chain is [A^{m-1} w, ..., A w, w]
        let mut chains: Vec<Vec<Vec<FieldElem>>> = Vec::new();
        for k in (1..=s).rev() {
            let mut span = SpanBuilder::new(n);
            for v in &kernels[k - 1] {
                span.insert(v.clone());
            }
            for chain in &chains {
                span.insert(chain[k - 1].clone());
            }
            for v in &kernels[k] {
                if span.insert(v.clone()) {
                    let chain: Vec<Vec<FieldElem>> = (0..k).rev().map(|e| apply(&powers[e], v)).collect();
                    chains.push(chain);
                }
            }
        }
        let sizes: Vec<usize> = chains.iter().map(Vec::len).collect();
        let columns: Vec<Vec<FieldElem>> = chains.into_iter().flatten().collect();
        let basis = Mat::from_columns(&self.ctx, &columns);
        let q = basis.inverse()?;
        debug_assert_eq!(&(&q * self) * &basis, Mat::block_shift(&self.ctx, &sizes));
        Ok((q, sizes))
    }
}

/// Incrementally maintained echelon basis of a subspace of `K^dim`.
///
/// Rows are stored with pivot entry 1 and zeros at every earlier row's pivot, so
/// a sequential sweep fully reduces a new vector.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    dim: usize,
    rows: Vec<(usize, Vec<FieldElem>)>,
}

impl SpanBuilder {
    pub fn new(dim: usize) -> Self {
        SpanBuilder {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, mut v: Vec<FieldElem>) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.dim);
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        self.reduce(v.to_vec()).iter().all(FieldElem::is_zero)
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: Vec<FieldElem>) -> bool {
        let v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].inv().expect("nonzero pivot");
        let row = v.iter().map(|x| x * &inv).collect();
        self.rows.push((pivot, row));
        true
    }
}

/// Solution set `{ particular + span(kernel) }` of a linear system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<FieldElem>,
    pub kernel: Vec<Vec<FieldElem>>,
}

/// Solves `a · v = b`; `None` when inconsistent.
pub fn solve_affine(a: &Mat, b: &[FieldElem]) -> Option<AffineSolution> {
    assert_eq!(a.rows(), b.len());
    let ctx = a.ctx();
    let n = a.cols();
    let aug = Mat::from_fn(ctx, a.rows(), n + 1, |i, j| if j < n { a[(i, j)].clone() } else { b[i].clone() });
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut particular = vec![ctx.zero(); n];
    for (row, &pc) in pivots.iter().enumerate() {
        particular[pc] = r[(row, n)].clone();
    }
    Some(AffineSolution {
        particular,
        kernel: a.kernel_vectors(),
    })
}

/// Matrix of the linear map `Z ↦ Z·right − c·left·Z` on row-major `vec(Z)`.
///
/// `right` is `k×k`, `left` is `m×m`, and `Z` is `m×k`.
pub fn sylvester_operator(right: &Mat, left: &Mat, c: &FieldElem) -> Mat {
    let ctx = right.ctx();
    let (m, k) = (left.rows(), right.rows());
    let mut op = Mat::zero(ctx, m * k, m * k);
    for i in 0..m {
        for j in 0..k {
            let row = i * k + j;
            // (Z·right)_{ij} = Σ_t z_{it} right_{tj}
            for t in 0..k {
                let e = &right[(t, j)];
                if !e.is_zero() {
                    op[(row, i * k + t)] = &op[(row, i * k + t)] + e;
                }
            }
            // (left·Z)_{ij} = Σ_t left_{it} z_{tj}
            for t in 0..m {
                let e = &left[(i, t)];
                if !e.is_zero() {
                    op[(row, t * k + j)] = &op[(row, t * k + j)] - &(c * e);
                }
            }
        }
    }
    op
}

macro_rules! forward_matop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&Mat> for &Mat {
            type Output = Mat;
            fn $method(self, rhs: &Mat) -> Mat {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Mat> for Mat {
            type Output = Mat;
            fn $method(self, rhs: Mat) -> Mat {
                (&self).$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_matop!(Add, add, try_add);
forward_matop!(Sub, sub, try_sub);
forward_matop!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldCtx {
        FieldCtx::prime(7, 3, Some(2)).unwrap()
    }

    #[test]
    fn intro_pair_anticommutes() {
        let ctx = FieldCtx::cyclotomic(2).unwrap();
        let x = Mat::from_ints(&ctx, &[&[0, 1], &[0, 0]]);
        let y = Mat::from_ints(&ctx, &[&[0, 0], &[1, 0]]);
        assert_eq!(&(&y * &x) + &(&x * &y), Mat::identity(&ctx, 2));
    }

    #[test]
    fn shift_power_vanishes() {
        for l in 2..=6 {
            let ctx = FieldCtx::cyclotomic(l).unwrap();
            let x = Mat::block_shift(&ctx, &[l]);
            assert!(x.pow(l as u64).unwrap().is_zero());
            assert!(!x.pow(l as u64 - 1).unwrap().is_zero());
            assert_eq!(x.pow(l as u64).unwrap().is_scalar(), Some(ctx.zero()));
            assert_eq!(x.is_scalar(), None);
        }
    }

    #[test]
    fn det_and_trace() {
        let ctx = f7();
        assert!(Mat::identity(&ctx, 4).det().unwrap().is_one());
        let a = Mat::from_ints(&ctx, &[&[1, 2], &[3, 4]]);
        assert_eq!(a.det().unwrap(), ctx.from_int(-2));
        assert_eq!(a.trace().unwrap(), ctx.from_int(5));
        let swap = Mat::from_ints(&ctx, &[&[0, 1], &[1, 0]]);
        assert_eq!(swap.det().unwrap(), ctx.from_int(-1));
        assert!(matches!(Mat::zero(&ctx, 2, 3).det(), Err(MatrixError::NotSquare(2, 3))));
    }

    #[test]
    fn kernels() {
        let ctx = f7();
        assert_eq!(Mat::zero(&ctx, 3, 3).kernel().len(), 3);
        assert!(Mat::identity(&ctx, 3).kernel().is_empty());
        let x = Mat::block_shift(&ctx, &[3]);
        let k = x.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], Mat::column(&ctx, vec![ctx.one(), ctx.zero(), ctx.zero()]));
    }

    #[test]
    fn inverses() {
        let ctx = FieldCtx::cyclotomic(2).unwrap();
        let g = ctx.gamma();
        let d = Mat::diagonal(&ctx, &[g.clone(), g.pow(2)]);
        assert_eq!(d.inverse().unwrap(), Mat::from_ints(&ctx, &[&[-1, 0], &[0, 1]]));
        assert_eq!(Mat::block_shift(&ctx, &[3]).inverse(), Err(MatrixError::Singular));
        let q3 = FieldCtx::cyclotomic(3).unwrap();
        let a = q3.gamma();
        let mut p = Mat::identity(&q3, 2);
        p[(0, 1)] = a.clone();
        let mut expect = Mat::identity(&q3, 2);
        expect[(0, 1)] = -a;
        assert_eq!(p.inverse().unwrap(), expect);
    }

    #[test]
    fn scalar_detection() {
        let ctx = f7();
        let c = ctx.from_int(3);
        assert_eq!(Mat::scalar(&ctx, 3, &c).is_scalar(), Some(c));
        assert_eq!(Mat::from_ints(&ctx, &[&[1, 0], &[0, 2]]).is_scalar(), None);
    }

    #[test]
    fn nilpotent_normal_forms() {
        let ctx = f7();
        for l in 1..=5 {
            let x = Mat::block_shift(&ctx, &[l]);
            let (q, sizes) = x.nilpotent_normalize().unwrap();
            assert_eq!(q, Mat::identity(&ctx, l));
            assert_eq!(sizes, vec![l]);
        }
        let xt = Mat::block_shift(&ctx, &[2]).transpose();
        let (q, sizes) = xt.nilpotent_normalize().unwrap();
        assert_eq!(sizes, vec![2]);
        assert_eq!(q, Mat::from_ints(&ctx, &[&[0, 1], &[1, 0]]));

        let (q, sizes) = Mat::zero(&ctx, 3, 3).nilpotent_normalize().unwrap();
        assert_eq!(sizes, vec![1, 1, 1]);
        assert_eq!(q, Mat::identity(&ctx, 3));

        let mixed = Mat::block_shift(&ctx, &[1, 3, 2]);
        let (q, sizes) = mixed.nilpotent_normalize().unwrap();
        assert_eq!(sizes, vec![3, 2, 1]);
        assert_eq!(mixed.conjugate(&q, &q.inverse().unwrap()), Mat::block_shift(&ctx, &sizes));

        assert_eq!(
            Mat::identity(&ctx, 2).nilpotent_normalize(),
            Err(MatrixError::NotNilpotent)
        );
    }

    #[test]
    fn affine_solve() {
        let ctx = f7();
        let a = Mat::from_ints(&ctx, &[&[1, 1], &[2, 2]]);
        let sol = solve_affine(&a, &[ctx.from_int(1), ctx.from_int(2)]).unwrap();
        assert_eq!(sol.kernel.len(), 1);
        assert!(solve_affine(&a, &[ctx.from_int(1), ctx.from_int(3)]).is_none());
    }

    #[test]
    fn sylvester_operator_matches_direct_product() {
        let ctx = f7();
        let r = Mat::from_ints(&ctx, &[&[1, 2], &[0, 3]]);
        let l = Mat::from_ints(&ctx, &[&[4, 0, 1], &[1, 1, 1], &[0, 5, 2]]);
        let z = Mat::from_ints(&ctx, &[&[1, 6], &[2, 3], &[0, 4]]);
        let c = ctx.from_int(2);
        let op = sylvester_operator(&r, &l, &c);
        let direct = &z * &r - (&l * &z).scale(&c);
        let via_op = &op * &Mat::column(&ctx, z.vectorize());
        assert_eq!(via_op.into_entries(), direct.vectorize());
    }

    #[test]
    fn span_builder_rank() {
        let ctx = f7();
        let mut span = SpanBuilder::new(3);
        assert!(span.insert(vec![ctx.from_int(1), ctx.from_int(2), ctx.zero()]));
        assert!(!span.insert(vec![ctx.from_int(3), ctx.from_int(6), ctx.zero()]));
        assert!(span.insert(vec![ctx.zero(), ctx.from_int(1), ctx.from_int(1)]));
        assert!(span.contains(&[ctx.from_int(1), ctx.from_int(3), ctx.from_int(1)]));
        assert_eq!(span.rank(), 2);
    }
}
