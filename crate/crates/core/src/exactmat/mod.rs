//! Exact dense linear algebra over prime fields and the rationals.
//!
//! Matrices are immutable values stored row-major. Every routine is exact;
//! there is no floating point anywhere in this crate.

mod field;

use std::fmt;

use rand::Rng;

pub use field::{
    Field, FieldError, FieldSpec, PrimeField, Rationals, RationalsTag, GENERIC_PRIME, MAX_PRIME,
    RATIONAL_SAMPLE_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("inconsistent block layout: {0}")]
    Layout(String),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
}

/// Dense `rows × cols` matrix over `F`.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} over {} [", self.rows, self.cols, self.field.spec())?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.cols {
                write!(f, " {}", self.field.format(self.get(i, j)))?;
            }
        }
        write!(f, " ]")
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|e| self.field.format(e)).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Row echelon data: the reduced matrix and its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// `E_{ij}`: a single one at `(i, j)`.
    pub fn unit(field: &F, rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        m.data[i * cols + j] = field.one();
        m
    }

    pub fn from_fn(
        field: &F,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> F::Elem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_elems(
        field: &F,
        rows: usize,
        cols: usize,
        data: Vec<F::Elem>,
    ) -> Result<Self, MatError> {
        if data.len() != rows * cols {
            return Err(MatError::EntryCount { expected: rows * cols, got: data.len() });
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// Builds a matrix from integer rows. All rows must have equal length.
    pub fn from_i64_rows(field: &F, rows: &[Vec<i64>]) -> Result<Self, MatError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(MatError::EntryCount { expected: cols, got: bad.len() });
        }
        Ok(Self::from_fn(field, rows.len(), cols, |i, j| field.from_i64(rows[i][j])))
    }

    pub fn column_vector(field: &F, entries: Vec<F::Elem>) -> Self {
        let n = entries.len();
        Matrix { field: field.clone(), rows: n, cols: 1, data: entries }
    }

    pub fn random<R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    /// Uniformly random invertible matrix, by rejection.
    pub fn random_invertible<R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
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

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Matrix<F> {
        self.submatrix(0, j, self.rows, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Matrix<F> {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &F::Elem) -> Matrix<F> {
        let data = self.data.iter().map(|e| self.field.mul(c, e)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix<F> {
        let data = self.data.iter().map(|e| self.field.neg(e)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn checked_add(&self, other: &Matrix<F>) -> Result<Matrix<F>, MatError> {
        self.zip_with(other, "add", |f, a, b| f.add(a, b))
    }

    pub fn checked_sub(&self, other: &Matrix<F>) -> Result<Matrix<F>, MatError> {
        self.zip_with(other, "sub", |f, a, b| f.sub(a, b))
    }

    fn zip_with(
        &self,
        other: &Matrix<F>,
        op: &'static str,
        f: impl Fn(&F, &F::Elem, &F::Elem) -> F::Elem,
    ) -> Result<Matrix<F>, MatError> {
        if self.shape() != other.shape() {
            return Err(MatError::DimensionMismatch { op, left: self.shape(), right: other.shape() });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(&self.field, a, b))
            .collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn checked_mul(&self, other: &Matrix<F>) -> Result<Matrix<F>, MatError> {
        if self.cols != other.rows {
            return Err(MatError::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.mul_add(&out.data[idx], a, &other.data[k * other.cols + j]);
                }
            }
        }
        Ok(out)
    }

    /// Matrix product. Panics on a shape mismatch; see [`Matrix::checked_mul`].
    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        self.checked_mul(other).expect("matrix product shape mismatch")
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        self.checked_add(other).expect("matrix sum shape mismatch")
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        self.checked_sub(other).expect("matrix difference shape mismatch")
    }

    /// Copies out the `nrows × ncols` block whose top-left corner is `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Matrix<F> {
        assert!(r0 + nrows <= self.rows && c0 + ncols <= self.cols, "block out of bounds");
        Self::from_fn(&self.field, nrows, ncols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Selects the given columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix<F> {
        Self::from_fn(&self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn hstack(parts: &[&Matrix<F>]) -> Result<Matrix<F>, MatError> {
        if parts.is_empty() {
            return Err(MatError::Layout("empty hstack".into()));
        }
        let grid = vec![parts.iter().map(|m| (*m).clone()).collect::<Vec<_>>()];
        block_compose(&grid)
    }

    pub fn vstack(parts: &[&Matrix<F>]) -> Result<Matrix<F>, MatError> {
        if parts.is_empty() {
            return Err(MatError::Layout("empty vstack".into()));
        }
        let grid: Vec<Vec<Matrix<F>>> = parts.iter().map(|m| vec![(*m).clone()]).collect();
        block_compose(&grid)
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Matrix<F>) -> Matrix<F> {
        let mut out = Matrix::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        out
    }

    /// Overwrites the block at `(r0, c0)` with `block`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix<F>) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "paste out of bounds");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    /// Reduced row echelon form. Pivots are chosen column by column, taking the
    /// first nonzero entry scanning downward from the current row.
    pub fn echelon(&self) -> Echelon<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = f.mul(&m.data[idx], &inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let sub = f.mul(&factor, &m.data[r * m.cols + j]);
                    let idx = i * m.cols + j;
                    m.data[idx] = f.sub(&m.data[idx], &sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right kernel, one vector per column of the result
    /// (`cols × (cols − rank)`).
    pub fn kernel_basis(&self) -> Matrix<F> {
        let f = &self.field;
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(f, self.cols, free.len());
        for (t, &fc) in free.iter().enumerate() {
            k.set(fc, t, f.one());
            for (r, &pc) in pivots.iter().enumerate() {
                k.set(pc, t, f.neg(reduced.get(r, fc)));
            }
        }
        k
    }

    /// Kernel basis as a list of column vectors.
    pub fn kernel_vectors(&self) -> Vec<Matrix<F>> {
        let k = self.kernel_basis();
        (0..k.cols).map(|j| k.column(j)).collect()
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn column_space(&self) -> Matrix<F> {
        let pivots = self.echelon().pivots;
        self.select_columns(&pivots)
    }

    /// Some `X` with `self · X = rhs`, if one exists.
    pub fn solve(&self, rhs: &Matrix<F>) -> Result<Option<Matrix<F>>, MatError> {
        if rhs.rows != self.rows {
            return Err(MatError::DimensionMismatch {
                op: "solve",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let f = &self.field;
        let aug = self.hstack_with(rhs);
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(f, self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, reduced.get(r, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    fn hstack_with(&self, other: &Matrix<F>) -> Matrix<F> {
        let mut out = Matrix::zeros(&self.field, self.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, other);
        out
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if !self.is_square() {
            return None;
        }
        let id = Matrix::identity(&self.field, self.rows);
        let aug = self.hstack_with(&id);
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.len() < self.rows || pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        Some(reduced.submatrix(0, self.cols, self.rows, self.cols))
    }

    /// Determinant by Gaussian elimination. Panics on non-square input.
    pub fn determinant(&self) -> F::Elem {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let f = &self.field;
        let mut m = self.clone();
        let n = m.rows;
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(m.get(i, c))) else {
                return f.zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let pivot = m.get(c, c).clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("nonzero pivot");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..n {
                    let sub = f.mul(&factor, &m.data[c * n + j]);
                    m.data[i * n + j] = f.sub(&m.data[i * n + j], &sub);
                }
            }
        }
        det
    }
}

/// Assembles a grid of blocks into one matrix. Every block in a grid row must
/// have the same height and every block in a grid column the same width.
pub fn block_compose<F: Field>(grid: &[Vec<Matrix<F>>]) -> Result<Matrix<F>, MatError> {
    let first_row = grid.first().ok_or_else(|| MatError::Layout("empty grid".into()))?;
    let first = first_row.first().ok_or_else(|| MatError::Layout("empty grid row".into()))?;
    let ncols = first_row.len();
    if let Some((i, _)) = grid.iter().enumerate().find(|(_, r)| r.len() != ncols) {
        return Err(MatError::Layout(format!("grid row {i} has a different block count")));
    }
    let heights: Vec<usize> = grid.iter().map(|r| r[0].rows).collect();
    let widths: Vec<usize> = first_row.iter().map(|b| b.cols).collect();
    for (i, row) in grid.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            if b.rows != heights[i] || b.cols != widths[j] {
                return Err(MatError::Layout(format!(
                    "block ({i},{j}) is {}x{}, expected {}x{}",
                    b.rows, b.cols, heights[i], widths[j]
                )));
            }
        }
    }
    let mut out = Matrix::zeros(first.field(), heights.iter().sum(), widths.iter().sum());
    let mut r0 = 0;
    for (i, row) in grid.iter().enumerate() {
        let mut c0 = 0;
        for (j, b) in row.iter().enumerate() {
            out.paste(r0, c0, b);
            c0 += widths[j];
        }
        r0 += heights[i];
    }
    Ok(out)
}

/// Splits `m` into blocks with the given row and column sizes; the inverse of
/// [`block_compose`].
pub fn block_split<F: Field>(
    m: &Matrix<F>,
    row_sizes: &[usize],
    col_sizes: &[usize],
) -> Result<Vec<Vec<Matrix<F>>>, MatError> {
    let (h, w): (usize, usize) = (row_sizes.iter().sum(), col_sizes.iter().sum());
    if (h, w) != m.shape() {
        return Err(MatError::DimensionMismatch { op: "block_split", left: m.shape(), right: (h, w) });
    }
    let mut grid = Vec::with_capacity(row_sizes.len());
    let mut r0 = 0;
    for &rh in row_sizes {
        let mut c0 = 0;
        let mut row = Vec::with_capacity(col_sizes.len());
        for &cw in col_sizes {
            row.push(m.submatrix(r0, c0, rh, cw));
            c0 += cw;
        }
        grid.push(row);
        r0 += rh;
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(&f3(), 5).rank(), 5);
        assert_eq!(Matrix::zeros(&f3(), 4, 7).rank(), 0);
        let q = Matrix::from_i64_rows(&Rationals, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(q.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(&f3(), 3).kernel_basis().cols(), 0);
        let z = Matrix::zeros(&f3(), 2, 3);
        let k = z.kernel_basis();
        assert_eq!(k.shape(), (3, 3));
        assert_eq!(k.rank(), 3);

        let f5 = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64_rows(&f5, &[vec![1, 1, 0]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
        // deterministic pivoting gives (-1,1,0) and (0,0,1)
        assert_eq!(k, Matrix::from_i64_rows(&f5, &[vec![4, 0], vec![1, 0], vec![0, 1]]).unwrap());
    }

    #[test]
    fn block_examples() {
        let f = f3();
        let m = Matrix::from_i64_rows(&f, &[vec![1, 2], vec![0, 1]]).unwrap();
        assert_eq!(block_compose(&[vec![m.clone()]]).unwrap(), m);

        let a = Matrix::from_i64_rows(&f, &[vec![1], vec![2]]).unwrap();
        let grid = vec![
            vec![Matrix::zeros(&f, 2, 2), a.clone()],
            vec![Matrix::zeros(&f, 1, 2), Matrix::zeros(&f, 1, 1)],
        ];
        let big = block_compose(&grid).unwrap();
        assert_eq!(big.shape(), (3, 3));
        assert_eq!(big.submatrix(0, 2, 2, 1), a);
        assert_eq!(big.submatrix(0, 0, 3, 2), Matrix::zeros(&f, 3, 2));

        let bad = vec![vec![Matrix::zeros(&f, 2, 2), Matrix::zeros(&f, 1, 1)]];
        assert!(matches!(block_compose(&bad), Err(MatError::Layout(_))));
    }

    #[test]
    fn zero_dimensional_matrices() {
        let f = f3();
        let e = Matrix::zeros(&f, 0, 3);
        assert_eq!(e.rank(), 0);
        assert_eq!(e.kernel_basis().cols(), 3);
        let t = Matrix::zeros(&f, 3, 0);
        assert_eq!(t.kernel_basis().shape(), (0, 0));
        assert_eq!(e.mul(&Matrix::zeros(&f, 3, 0)).shape(), (0, 0));
        assert_eq!(Matrix::<PrimeField>::identity(&f, 0).determinant(), 1);
    }

    #[test]
    fn inverse_solve_det() {
        let q = Rationals;
        let m = Matrix::from_i64_rows(&q, &[vec![2, 1], vec![1, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&q, 2));
        assert_eq!(m.determinant(), q.from_i64(1));
        let b = Matrix::from_i64_rows(&q, &[vec![3], vec![2]]).unwrap();
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul(&x), b);
        let sing = Matrix::from_i64_rows(&q, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(sing.inverse().is_none());
        assert_eq!(sing.determinant(), q.zero());
        let off = Matrix::from_i64_rows(&q, &[vec![1], vec![1]]).unwrap();
        assert!(sing.solve(&off).unwrap().is_none());
    }

    fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), proptest::collection::vec(-3i64..=3, r * c))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity_and_annihilation((r, c, v) in small_matrix(), p in prop::sample::select(vec![3u64, 5, 7, 32003])) {
            let f = PrimeField::new(p).unwrap();
            let m = Matrix::from_fn(&f, r, c, |i, j| f.from_i64(v[i * c + j]));
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.cols(), c);
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn rank_invariant_under_invertible_transforms((r, c, v) in small_matrix(), seed in any::<u64>()) {
            let f = PrimeField::generic();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = Matrix::from_fn(&f, r, c, |i, j| f.from_i64(v[i * c + j]));
            let p = Matrix::random_invertible(&f, r, &mut rng);
            let q = Matrix::random_invertible(&f, c, &mut rng);
            prop_assert_eq!(p.mul(&m).mul(&q).rank(), m.rank());
        }

        #[test]
        fn rational_rank_scale_invariant((r, c, v) in small_matrix(), num in 1i64..20, den in 1i64..20) {
            let q = Rationals;
            let m = Matrix::from_fn(&q, r, c, |i, j| q.from_i64(v[i * c + j]));
            let s = q.parse(&format!("-{num}/{den}")).unwrap();
            prop_assert_eq!(m.scale(&s).rank(), m.rank());
            prop_assert!(m.mul(&m.kernel_basis()).is_zero());
        }

        #[test]
        fn compose_then_split_round_trips(sizes in proptest::collection::vec(0usize..3, 6), seed in any::<u64>()) {
            let f = f3();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (rs, cs) = (&sizes[..3], &sizes[3..]);
            let grid: Vec<Vec<_>> = rs.iter()
                .map(|&h| cs.iter().map(|&w| Matrix::random(&f, h, w, &mut rng)).collect())
                .collect();
            let m = block_compose(&grid).unwrap();
            prop_assert_eq!(block_split(&m, rs, cs).unwrap(), grid);
        }
    }
}
