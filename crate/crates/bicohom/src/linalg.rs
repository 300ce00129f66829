//! Exact linear algebra over the Gaussian rationals Q(i).
//!
//! This is the only arithmetic substrate used anywhere in the crate: every
//! rank, kernel, image, intersection and quotient dimension is computed here
//! with arbitrary-precision rational arithmetic, so there are no tolerance
//! questions anywhere downstream.
//!
//! Row reduction uses fraction-free (Bareiss-style) forward elimination over
//! the Gaussian integers after clearing row denominators, followed by a
//! rational normalization pass that produces the unique reduced row echelon
//! form. A naive rational Gauss-Jordan lives in the test module as an
//! independent oracle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number (reduced form, positive denominator —
/// both invariants are maintained by the underlying implementation).
pub type Rational = BigRational;

/// Gaussian rational `re + im*i`: the coefficient field of every complex in
/// this crate. Arithmetic is exact; conjugation is an involution.
pub type Scalar = num_complex::Complex<Rational>;

/// Errors from subspace operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    /// Two subspaces (or a map and a subspace) live in different ambient
    /// spaces.
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    /// `quotient_dim(V, W)` was called with W not contained in V.
    #[error("not a subspace: the would-be denominator is not contained in the numerator")]
    NotASubspace,
}

// ---------------------------------------------------------------------------
// Scalar helpers
// ---------------------------------------------------------------------------

/// The rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer scalar `n`.
pub fn scalar(n: i64) -> Scalar {
    Scalar::new(Rational::from(BigInt::from(n)), Rational::zero())
}

/// The Gaussian rational `re + im*i` with integer parts.
pub fn scalar_i(re: i64, im: i64) -> Scalar {
    Scalar::new(
        Rational::from(BigInt::from(re)),
        Rational::from(BigInt::from(im)),
    )
}

/// The Gaussian rational with the given rational parts.
pub fn scalar_from_parts(re: Rational, im: Rational) -> Scalar {
    Scalar::new(re, im)
}

/// Complex conjugate.
pub fn conj(z: &Scalar) -> Scalar {
    Scalar::new(z.re.clone(), -z.im.clone())
}

/// Canonical compact rendering: `"0"`, `"3/2"`, `"i"`, `"-2i"`, `"1/2-3i"`.
/// Pure-imaginary units drop the coefficient (`i`, not `1i`).
pub fn scalar_to_string(z: &Scalar) -> String {
    use num_traits::Signed;
    if z.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    if !z.re.is_zero() {
        out.push_str(&z.re.to_string());
    }
    if !z.im.is_zero() {
        if z.im.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let magnitude = z.im.abs();
        if !magnitude.is_one() {
            out.push_str(&magnitude.to_string());
        }
        out.push('i');
    }
    out
}

// ---------------------------------------------------------------------------
// QMatrix
// ---------------------------------------------------------------------------

/// Dense row-major matrix over the Gaussian rationals.
///
/// Zero-by-n and n-by-zero matrices are first-class citizens: they represent
/// maps to or from the zero space and every operation is total on them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Result of reduced-row-echelon reduction: the RREF matrix, its pivot
/// column indices, and the rank (`pivots.len()`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub r: QMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Build from explicit rows. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(
            rows.iter().all(|row| row.len() == c),
            "ragged rows in QMatrix::from_rows"
        );
        QMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Build from integer rows (test/construction convenience).
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&n| scalar(n)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        QMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise complex conjugate.
    pub fn conj_entries(&self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(conj).collect(),
        }
    }

    pub fn neg(&self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e.clone()).collect(),
        }
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    /// Apply to a coordinate vector (length = cols), producing length-rows.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Scalar::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    out[i] = out[i].clone() + a * &v[j];
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        QMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols, "vstack col mismatch");
        QMatrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    /// Keep the listed columns, in the listed order.
    pub fn select_cols(&self, cols: &[usize]) -> QMatrix {
        QMatrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    /// Keep the listed rows, in the listed order.
    pub fn select_rows(&self, rows: &[usize]) -> QMatrix {
        QMatrix::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    /// Rank, via fraction-free elimination.
    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Reduced row echelon form over Q(i), with pivot columns.
    ///
    /// Forward elimination is fraction-free over the Gaussian integers
    /// (Bareiss one-step formula) after per-row denominator clearing; the
    /// echelon rows are then normalized and back-substituted rationally to
    /// the unique RREF. Row space is preserved.
    pub fn rref(&self) -> Rref {
        if self.rows == 0 || self.cols == 0 {
            return Rref {
                r: self.clone(),
                pivots: vec![],
                rank: 0,
            };
        }

        // Clear denominators row by row: each row becomes a Gaussian-integer
        // row (scaling a row does not change the row space).
        let mut m: Vec<Vec<GaussInt>> = (0..self.rows)
            .map(|i| clear_row_denominators(self.row(i)))
            .collect();

        // Fraction-free forward elimination with row pivoting.
        let mut pivots: Vec<usize> = Vec::new();
        let mut prev_pivot = GaussInt::one();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, pr);
            let pivot = m[r][c].clone();
            for i in (r + 1)..self.rows {
                for j in (c + 1)..self.cols {
                    // one-step Bareiss: exact division by the previous pivot
                    let num = m[i][j].mul(&pivot).sub(&m[i][c].mul(&m[r][j]));
                    m[i][j] = num.exact_div(&prev_pivot);
                }
                m[i][c] = GaussInt::zero();
            }
            prev_pivot = pivot;
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }

        // Normalize to RREF rationally: scale pivot rows to leading 1, then
        // eliminate above the pivots.
        let rank = pivots.len();
        let mut out = QMatrix::zeros(self.rows, self.cols);
        let mut rows_q: Vec<Vec<Scalar>> = Vec::with_capacity(rank);
        for i in 0..rank {
            let lead = m[i][pivots[i]].to_scalar();
            let inv = Scalar::one() / lead;
            let row: Vec<Scalar> = (0..self.cols)
                .map(|j| {
                    if j < pivots[i] {
                        Scalar::zero()
                    } else {
                        m[i][j].to_scalar() * &inv
                    }
                })
                .collect();
            rows_q.push(row);
        }
        // Back-substitute above pivots (work upward).
        for i in (0..rank).rev() {
            for upper in 0..i {
                let factor = rows_q[upper][pivots[i]].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in pivots[i]..self.cols {
                    let sub = &rows_q[i][j] * &factor;
                    rows_q[upper][j] = &rows_q[upper][j] - &sub;
                }
            }
        }
        for (i, row) in rows_q.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Rref {
            r: out,
            pivots,
            rank,
        }
    }

    /// Inverse of a square invertible matrix; None when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let aug = self.hstack(&QMatrix::identity(n));
        let red = aug.rref();
        if red.rank != n || red.pivots != (0..n).collect::<Vec<_>>() {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| red.r.get(i, n + j).clone()))
    }

    /// A particular solution of `self * x = b` with all free variables set
    /// to zero (the RREF particular solution), or None when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "solve: rhs length mismatch");
        let bmat = QMatrix::from_fn(self.rows, 1, |i, _| b[i].clone());
        let red = self.hstack(&bmat).rref();
        if red.pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &p) in red.pivots.iter().enumerate() {
            x[p] = red.r.get(i, self.cols).clone();
        }
        Some(x)
    }
}

// ---------------------------------------------------------------------------
// Gaussian integers (internal, for fraction-free elimination)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn zero() -> Self {
        GaussInt {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }
    fn one() -> Self {
        GaussInt {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
    /// Exact division in Z[i]; panics if not divisible (which would signal a
    /// broken elimination invariant, never user input).
    fn exact_div(&self, d: &GaussInt) -> GaussInt {
        if d.is_one() {
            return self.clone();
        }
        assert!(!d.is_zero(), "division by zero in fraction-free elimination");
        let n = &d.re * &d.re + &d.im * &d.im;
        let re_num = &self.re * &d.re + &self.im * &d.im;
        let im_num = &self.im * &d.re - &self.re * &d.im;
        let (rq, rr) = re_num.div_rem(&n);
        let (iq, ir) = im_num.div_rem(&n);
        assert!(
            rr.is_zero() && ir.is_zero(),
            "non-exact division in fraction-free elimination"
        );
        GaussInt { re: rq, im: iq }
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::new(
            Rational::from(self.re.clone()),
            Rational::from(self.im.clone()),
        )
    }
}

/// Scale a row of Gaussian rationals by the lcm of all denominators,
/// producing Gaussian integers.
fn clear_row_denominators(row: &[Scalar]) -> Vec<GaussInt> {
    let mut l = BigInt::one();
    for z in row {
        l = l.lcm(z.re.denom());
        l = l.lcm(z.im.denom());
    }
    row.iter()
        .map(|z| {
            let re = z.re.numer() * (&l / z.re.denom());
            let im = z.im.numer() * (&l / z.im.denom());
            GaussInt { re, im }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Subspace
// ---------------------------------------------------------------------------

/// A linear subspace of Q(i)^ambient, stored in canonical form: the basis
/// matrix columns are the nonzero rows of the RREF of any spanning set
/// (equivalently: the RREF of the transpose, transposed back). Two subspaces
/// are equal as sets iff their canonical `basis` matrices are equal, so
/// `==` is exact subspace equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    /// ambient_dim x dim matrix whose columns are the canonical basis.
    basis: QMatrix,
    /// Leading (pivot) coordinate of each basis column, strictly increasing.
    leading: Vec<usize>,
}

impl Subspace {
    /// The zero subspace of the given ambient space.
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: QMatrix::zeros(ambient_dim, 0),
            leading: vec![],
        }
    }

    /// The full ambient space.
    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: QMatrix::identity(ambient_dim),
            leading: (0..ambient_dim).collect(),
        }
    }

    /// Span of the given vectors (each of length `ambient_dim`), canonicalized.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Self {
        for v in vectors {
            assert_eq!(v.len(), ambient_dim, "span: vector length mismatch");
        }
        let rows = QMatrix::from_rows(vectors.to_vec());
        Self::from_row_span(ambient_dim, &rows)
    }

    /// Span of the rows of `rows` inside Q(i)^ambient.
    fn from_row_span(ambient_dim: usize, rows: &QMatrix) -> Self {
        if rows.rows() == 0 {
            return Self::zero(ambient_dim);
        }
        assert_eq!(rows.cols(), ambient_dim);
        let red = rows.rref();
        let basis = QMatrix::from_fn(ambient_dim, red.rank, |i, j| red.r.get(j, i).clone());
        Subspace {
            ambient_dim,
            basis,
            leading: red.pivots,
        }
    }

    /// Span of the columns of `m`.
    pub fn from_col_span(m: &QMatrix) -> Self {
        Self::from_row_span(m.rows(), &m.transpose())
    }

    /// Span of the coordinate vectors `e_j` for `j` in `coords` (must be
    /// strictly increasing and within the ambient dimension).
    pub fn coordinate(ambient_dim: usize, coords: &[usize]) -> Self {
        assert!(coords.windows(2).all(|w| w[0] < w[1]), "coords not sorted");
        assert!(coords.iter().all(|&j| j < ambient_dim));
        let basis = QMatrix::from_fn(ambient_dim, coords.len(), |i, j| {
            if i == coords[j] {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        Subspace {
            ambient_dim,
            basis,
            leading: coords.to_vec(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// The canonical basis matrix (columns are basis vectors).
    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    /// Basis vector `j` as a coordinate vector.
    pub fn basis_vector(&self, j: usize) -> Vec<Scalar> {
        self.basis.col(j)
    }

    /// Leading coordinates of the canonical basis (strictly increasing).
    pub fn leading_coords(&self) -> &[usize] {
        &self.leading
    }

    /// The ambient coordinates NOT led by any basis vector. The coordinate
    /// vectors `e_j` at these positions span a complement of this subspace.
    pub fn complement_coords(&self) -> Vec<usize> {
        let lead: std::collections::BTreeSet<usize> = self.leading.iter().copied().collect();
        (0..self.ambient_dim).filter(|j| !lead.contains(j)).collect()
    }

    /// A canonical complement: span of coordinate vectors at the non-leading
    /// positions (the "pivot rule" complement).
    pub fn complement(&self) -> Subspace {
        let coords = self.complement_coords();
        let vecs: Vec<Vec<Scalar>> = coords
            .iter()
            .map(|&j| {
                let mut v = vec![Scalar::zero(); self.ambient_dim];
                v[j] = Scalar::one();
                v
            })
            .collect();
        Subspace::span(self.ambient_dim, &vecs)
    }

    /// Exact membership test.
    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        if self.dim() == 0 {
            return false;
        }
        // Reduce v against the canonical row basis.
        let mut w = v.to_vec();
        for (j, &lead) in self.leading.iter().enumerate() {
            let c = w[lead].clone();
            if c.is_zero() {
                continue;
            }
            for i in 0..self.ambient_dim {
                let b = self.basis.get(i, j);
                if !b.is_zero() {
                    w[i] = &w[i] - &(b * &c);
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    /// Is `other` contained in `self`?
    pub fn contains(&self, other: &Subspace) -> bool {
        if self.ambient_dim != other.ambient_dim {
            return false;
        }
        (0..other.dim()).all(|j| self.contains_vector(&other.basis_vector(j)))
    }

    /// Kernel of the linear map with matrix `m` (a subspace of the domain).
    pub fn kernel_basis(m: &QMatrix) -> Subspace {
        let n = m.cols();
        if n == 0 {
            return Subspace::zero(0);
        }
        if m.rows() == 0 {
            return Subspace::full(n);
        }
        let red = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = red.pivots.iter().copied().collect();
        let mut vecs = Vec::new();
        for f in 0..n {
            if pivot_set.contains(&f) {
                continue;
            }
            let mut v = vec![Scalar::zero(); n];
            v[f] = Scalar::one();
            for (i, &p) in red.pivots.iter().enumerate() {
                v[p] = -red.r.get(i, f).clone();
            }
            vecs.push(v);
        }
        Subspace::span(n, &vecs)
    }

    /// Column space of `m` (a subspace of the codomain).
    pub fn image_basis(m: &QMatrix) -> Subspace {
        if m.rows() == 0 {
            return Subspace::zero(0);
        }
        if m.cols() == 0 {
            return Subspace::zero(m.rows());
        }
        Self::from_col_span(m)
    }

    /// Sum U + V.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        let rows = self
            .basis
            .transpose()
            .vstack(&other.basis.transpose());
        Ok(Subspace::from_row_span(self.ambient_dim, &rows))
    }

    /// Intersection U ∩ V.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        // Solve U a - V b = 0; the intersection is { U a }.
        let stacked = self.basis.hstack(&other.basis.neg());
        let ker = Subspace::kernel_basis(&stacked);
        let vecs: Vec<Vec<Scalar>> = (0..ker.dim())
            .map(|j| {
                let w = ker.basis_vector(j);
                self.basis.apply(&w[..self.dim()])
            })
            .collect();
        Ok(Subspace::span(self.ambient_dim, &vecs))
    }

    /// Preimage { x : M x ∈ W }, a subspace of the domain of `m`.
    pub fn preimage(m: &QMatrix, w: &Subspace) -> Result<Subspace, LinalgError> {
        if w.ambient_dim != m.rows() {
            return Err(LinalgError::AmbientMismatch {
                left: m.rows(),
                right: w.ambient_dim,
            });
        }
        let n = m.cols();
        if m.rows() == 0 {
            return Ok(Subspace::full(n));
        }
        // Solve M x - W y = 0 and project onto x.
        let stacked = m.hstack(&w.basis.neg());
        let ker = Subspace::kernel_basis(&stacked);
        let vecs: Vec<Vec<Scalar>> = (0..ker.dim())
            .map(|j| ker.basis_vector(j)[..n].to_vec())
            .collect();
        Ok(Subspace::span(n, &vecs))
    }

    /// dim(V / W), checking W ⊆ V.
    pub fn quotient_dim(&self, w: &Subspace) -> Result<usize, LinalgError> {
        if self.ambient_dim != w.ambient_dim {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient_dim,
                right: w.ambient_dim,
            });
        }
        if !self.contains(w) {
            return Err(LinalgError::NotASubspace);
        }
        Ok(self.dim() - w.dim())
    }

    /// Image of this subspace under the map `m` (ambient must equal m.cols).
    pub fn map_by(&self, m: &QMatrix) -> Subspace {
        assert_eq!(self.ambient_dim, m.cols(), "map_by: shape mismatch");
        let vecs: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|j| m.apply(&self.basis_vector(j)))
            .collect();
        Subspace::span(m.rows(), &vecs)
    }
}

// ---------------------------------------------------------------------------
// Subquotients
// ---------------------------------------------------------------------------

/// A subquotient num/den (with den ⊆ num ⊆ ambient) together with chosen
/// representatives: the canonical-basis vectors of `num` whose coordinates
/// (in num's basis) are not leading coordinates of den-inside-num. Classes
/// of the representatives form a basis of the subquotient.
#[derive(Debug, Clone)]
pub struct Subquotient {
    num: Subspace,
    den: Subspace,
    /// ambient_dim x dim matrix: representative vectors, one per class-basis
    /// element.
    reps: QMatrix,
    /// dim x ambient_dim: reads off class coordinates of any vector in `num`
    /// as a single matrix-vector product.
    proj: QMatrix,
    /// (ambient_dim − num.dim()) x ambient_dim: rows annihilating exactly
    /// `num`, kept for membership checks in debug builds.
    num_check: QMatrix,
}

impl Subquotient {
    /// Build num/den. Panics if den ⊄ num (engine invariant, not user input).
    pub fn new(num: Subspace, den: Subspace) -> Self {
        assert_eq!(num.ambient_dim(), den.ambient_dim());
        assert!(num.contains(&den), "subquotient: denominator not inside numerator");
        // Express den in num-coordinates.
        let dim_num = num.dim();
        let den_in_num: Vec<Vec<Scalar>> = (0..den.dim())
            .map(|j| {
                num.basis()
                    .solve(&den.basis_vector(j))
                    .expect("den ⊆ num must be solvable")
            })
            .collect();
        let den_coords = Subspace::span(dim_num, &den_in_num);
        let free = den_coords.complement_coords();
        let reps = QMatrix::from_fn(num.ambient_dim(), free.len(), |i, j| {
            num.basis().get(i, free[j]).clone()
        });
        // One row reduction of [den | reps | I] yields a left inverse of the
        // full-column-rank block M = [den | reps]: rref gives E·M = [I; 0],
        // so in the augmented part the first rank(M) rows invert M on its
        // image (= num) and the remaining rows annihilate exactly num.
        let ambient = num.ambient_dim();
        let k = den.dim();
        let m = den.basis().hstack(&reps);
        let r = m.cols();
        let reduced = m.hstack(&QMatrix::identity(ambient)).rref();
        debug_assert!(
            (0..r).all(|j| reduced.pivots.get(j) == Some(&j)),
            "den ∪ reps must be independent"
        );
        let proj = QMatrix::from_fn(r - k, ambient, |i, j| reduced.r.get(k + i, r + j).clone());
        let num_check =
            QMatrix::from_fn(ambient - r, ambient, |i, j| reduced.r.get(r + i, r + j).clone());
        Subquotient {
            num,
            den,
            reps,
            proj,
            num_check,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn num(&self) -> &Subspace {
        &self.num
    }

    pub fn den(&self) -> &Subspace {
        &self.den
    }

    /// Representative vectors (columns), one per basis class.
    pub fn reps(&self) -> &QMatrix {
        &self.reps
    }

    /// Coordinates of the class of `v` in the chosen class basis.
    /// `v` must lie in `num` (engine invariant; asserted in debug builds).
    pub fn class_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.num.ambient_dim());
        debug_assert!(
            self.num_check.apply(v).iter().all(Scalar::is_zero),
            "class_coords: vector not in the numerator subspace"
        );
        self.proj.apply(v)
    }

    /// Matrix of the identity-induced map from `self` to `other` (both
    /// subquotients of the same ambient space; well-definedness requires
    /// self.num ⊆ other.num and self.den ⊆ other.den — asserted).
    pub fn induced_map_to(&self, other: &Subquotient) -> QMatrix {
        assert!(
            other.num.contains(&self.num),
            "induced map: numerators not nested"
        );
        assert!(
            other.den.contains(&self.den),
            "induced map: denominators not nested"
        );
        let mut m = QMatrix::zeros(other.dim(), self.dim());
        for j in 0..self.dim() {
            let rep = self.reps.col(j);
            for (i, c) in other.class_coords(&rep).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: plain rational Gauss-Jordan, no fraction-free
    /// tricks shared with the implementation under test.
    fn naive_rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
        let mut rows: Vec<Vec<Scalar>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
        let (nr, nc) = (m.rows(), m.cols());
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..nc {
            let Some(pr) = (r..nr).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = Scalar::one() / rows[r][c].clone();
            for j in 0..nc {
                rows[r][j] = &rows[r][j] * &inv;
            }
            for i in 0..nr {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in 0..nc {
                        let sub = &rows[r][j] * &f;
                        rows[i][j] = &rows[i][j] - &sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == nr {
                break;
            }
        }
        (QMatrix::from_rows(rows), pivots)
    }

    #[test]
    fn scalar_strings() {
        assert_eq!(scalar_to_string(&scalar(0)), "0");
        assert_eq!(scalar_to_string(&scalar(3)), "3");
        assert_eq!(scalar_to_string(&scalar_from_parts(ratio(-3, 2), ratio(0, 1))), "-3/2");
        assert_eq!(scalar_to_string(&scalar_i(0, 1)), "i");
        assert_eq!(scalar_to_string(&scalar_i(0, -1)), "-i");
        assert_eq!(scalar_to_string(&scalar_i(0, -2)), "-2i");
        assert_eq!(scalar_to_string(&scalar_i(2, 5)), "2+5i");
        assert_eq!(scalar_to_string(&scalar_from_parts(ratio(1, 2), ratio(-3, 1))), "1/2-3i");
        assert_eq!(scalar_to_string(&scalar_i(1, 1)), "1+i");
    }

    #[test]
    fn rref_identity() {
        let m = QMatrix::identity(2);
        let red = m.rref();
        assert_eq!(red.r, QMatrix::identity(2));
        assert_eq!(red.pivots, vec![0, 1]);
        assert_eq!(red.rank, 2);
    }

    #[test]
    fn rref_proportional_rows() {
        let m = QMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        let red = m.rref();
        assert_eq!(red.rank, 1);
        assert_eq!(red.r, QMatrix::from_int_rows(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_complex_entries() {
        // [[i, 1], [1, -i]] has rank 1 (second row = -i * first).
        let m = QMatrix::from_rows(vec![
            vec![scalar_i(0, 1), scalar(1)],
            vec![scalar(1), scalar_i(0, -1)],
        ]);
        let red = m.rref();
        assert_eq!(red.rank, 1);
        // canonical leading-1 row: [1, -i]
        assert_eq!(red.r.get(0, 0), &scalar(1));
        assert_eq!(red.r.get(0, 1), &scalar_i(0, -1));
    }

    #[test]
    fn rref_matches_naive_oracle_small() {
        // dense deterministic sweep over small integer matrices
        let vals = [-2i64, -1, 0, 1, 2, 3];
        let mut idx = 0usize;
        for _ in 0..200 {
            let mut entries = vec![];
            for _ in 0..6 {
                entries.push(vals[idx % vals.len()]);
                idx = idx.wrapping_mul(31).wrapping_add(17) % 100003;
            }
            let m = QMatrix::from_int_rows(&[
                &entries[0..3],
                &entries[3..6],
            ]);
            let red = m.rref();
            let (nr, np) = naive_rref(&m);
            assert_eq!(red.r, nr, "mismatch vs naive oracle on {:?}", entries);
            assert_eq!(red.pivots, np);
        }
    }

    #[test]
    fn rref_idempotent() {
        let m = QMatrix::from_int_rows(&[&[2, 4, 1], &[0, 3, 5], &[2, 7, 6]]);
        let r1 = m.rref().r;
        let r2 = r1.rref().r;
        assert_eq!(r1, r2);
    }

    #[test]
    fn kernel_zero_map() {
        let k = Subspace::kernel_basis(&QMatrix::zeros(2, 3));
        assert_eq!(k.dim(), 3);
        assert_eq!(k, Subspace::full(3));
    }

    #[test]
    fn kernel_identity() {
        let k = Subspace::kernel_basis(&QMatrix::identity(3));
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn rank_nullity() {
        let m = QMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank() + Subspace::kernel_basis(&m).dim(), m.cols());
    }

    #[test]
    fn sum_intersect_grassmann() {
        // complementary coordinate planes in dim 4
        let u = Subspace::span(4, &[
            vec![scalar(1), scalar(0), scalar(0), scalar(0)],
            vec![scalar(0), scalar(1), scalar(0), scalar(0)],
        ]);
        let v = Subspace::span(4, &[
            vec![scalar(0), scalar(0), scalar(1), scalar(0)],
            vec![scalar(0), scalar(0), scalar(0), scalar(1)],
        ]);
        let s = u.sum(&v).unwrap();
        let i = u.intersect(&v).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(i.dim(), 0);
        assert_eq!(u.dim() + v.dim(), s.dim() + i.dim());
        // U = V case
        assert_eq!(u.sum(&u).unwrap(), u);
        assert_eq!(u.intersect(&u).unwrap(), u);
    }

    #[test]
    fn ambient_mismatch_reported() {
        let u = Subspace::full(2);
        let v = Subspace::full(3);
        assert!(matches!(
            u.sum(&v),
            Err(LinalgError::AmbientMismatch { left: 2, right: 3 })
        ));
        assert!(matches!(u.intersect(&v), Err(LinalgError::AmbientMismatch { .. })));
    }

    #[test]
    fn preimage_full_and_zero() {
        let m = QMatrix::from_int_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(Subspace::preimage(&m, &Subspace::full(2)).unwrap().dim(), 3);
        assert_eq!(
            Subspace::preimage(&m, &Subspace::zero(2)).unwrap(),
            Subspace::kernel_basis(&m)
        );
    }

    #[test]
    fn quotient_dim_checks() {
        let v = Subspace::full(3);
        let w = Subspace::span(3, &[vec![scalar(1), scalar(1), scalar(0)]]);
        assert_eq!(v.quotient_dim(&w).unwrap(), 2);
        assert_eq!(v.quotient_dim(&Subspace::zero(3)).unwrap(), 3);
        assert_eq!(w.quotient_dim(&w).unwrap(), 0);
        assert_eq!(w.quotient_dim(&v), Err(LinalgError::NotASubspace));
    }

    #[test]
    fn subquotient_class_coords() {
        // V = Q^2, W = span{(1,1)}: quotient is 1-dim; class of (1,0) and
        // (0,-1) must agree... (1,0) - (0,-1) = (1,1) ∈ W.
        let sq = Subquotient::new(
            Subspace::full(2),
            Subspace::span(2, &[vec![scalar(1), scalar(1)]]),
        );
        assert_eq!(sq.dim(), 1);
        let a = sq.class_coords(&[scalar(1), scalar(0)]);
        let b = sq.class_coords(&[scalar(0), scalar(-1)]);
        assert_eq!(a, b);
    }

    #[test]
    fn solve_particular() {
        let m = QMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        let x = m.solve(&[scalar(3), scalar(6)]).unwrap();
        // free variable (col 1) set to zero
        assert_eq!(x, vec![scalar(3), scalar(0)]);
        assert!(m.solve(&[scalar(1), scalar(0)]).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = QMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
        assert!(QMatrix::from_int_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
