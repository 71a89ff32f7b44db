//! Dense kernels for small real and complex matrices.
//!
//! Everything downstream reduces to four primitives on matrices of
//! dimension ≤ 16: Hermitian eigendecomposition, complex SVD, a
//! positive-semidefiniteness verdict and the Frobenius projection onto
//! the PSD cone. The eigensolver is a cyclic complex Jacobi iteration:
//! at these sizes robustness matters and speed does not.

use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the matrix kernels.
#[derive(Debug, Error)]
pub enum MatError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension must be positive")]
    EmptyMatrix,
    #[error("dimension mismatch: {left} vs {right} in {context}")]
    DimMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },
    #[error("rows have inconsistent lengths")]
    RaggedRows,
    #[error("entry ({row},{col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian: max |H - H^dag| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not symmetric: max |M - M^T| = {deviation:e}")]
    NotSymmetric { deviation: f64 },
    #[error("matrix is not antisymmetric: max |M + M^T| = {deviation:e}")]
    NotAntisymmetric { deviation: f64 },
    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

// ---------------------------------------------------------------------------
// Real matrices
// ---------------------------------------------------------------------------

/// Dense real matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// Builds a matrix from nested rows, validating shape and finiteness.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(MatError::EmptyMatrix);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatError::RaggedRows);
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(MatError::NonFinite { row: i, col: j });
                }
                data.push(v);
            }
        }
        Ok(RealMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Copies the `rows x cols` block with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn symmetry_deviation(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                d = d.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        d
    }

    pub fn symmetrized(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            0.5 * (self.get(i, j) + self.get(j, i))
        })
    }

    /// Congruence `P M P^T` for a permutation given as `perm[new] = old`.
    pub fn permute_congruence(&self, perm: &[usize]) -> Self {
        assert!(self.is_square() && perm.len() == self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| self.get(perm[i], perm[j]))
    }

    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| {
            Complex64::new(self.get(i, j), 0.0)
        })
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Complex matrices
// ---------------------------------------------------------------------------

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Assembles `re + i*im`; the parts must have equal shape.
    pub fn from_parts(re: &RealMatrix, im: &RealMatrix) -> Result<Self, MatError> {
        if (re.rows(), re.cols()) != (im.rows(), im.cols()) {
            return Err(MatError::DimMismatch {
                left: re.rows(),
                right: im.rows(),
                context: "real/imaginary parts",
            });
        }
        Ok(Self::from_fn(re.rows(), re.cols(), |i, j| {
            Complex64::new(re.get(i, j), im.get(i, j))
        }))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn re_part(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).re)
    }

    pub fn im_part(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).im)
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                d = d.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        d
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut t = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                t += self.get(i, k) * other.get(k, i);
            }
        }
        t
    }

    /// Deviation from unitarity, `max |Z^dag Z - 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let gram = self.adjoint().matmul(self);
        gram.sub(&Self::identity(self.rows)).max_norm()
    }
}

// ---------------------------------------------------------------------------
// Hermitian matrices
// ---------------------------------------------------------------------------

/// Tolerance on `|H - H^dag|` accepted at construction, relative to scale.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Complex matrix with the Hermitian invariant enforced at construction:
/// inputs within tolerance are symmetrized, anything worse is rejected.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    mat: CMatrix,
}

impl HermitianMatrix {
    pub fn new(mat: CMatrix) -> Result<Self, MatError> {
        if !mat.is_square() {
            return Err(MatError::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        if mat.rows() == 0 {
            return Err(MatError::EmptyMatrix);
        }
        let dev = mat.hermiticity_deviation();
        if dev > HERMITICITY_TOL * (1.0 + mat.max_norm()) {
            return Err(MatError::NotHermitian { deviation: dev });
        }
        Ok(Self::symmetrize(mat))
    }

    /// Symmetrizes unconditionally. For matrices Hermitian by construction
    /// (products `Z^dag Z`, congruences of Hermitians) where rounding is the
    /// only source of asymmetry.
    pub fn symmetrize(mat: CMatrix) -> Self {
        assert!(mat.is_square());
        let h = CMatrix::from_fn(mat.rows(), mat.cols(), |i, j| {
            0.5 * (mat.get(i, j) + mat.get(j, i).conj())
        });
        HermitianMatrix { mat: h }
    }

    /// A real symmetric matrix viewed as Hermitian.
    pub fn from_real_symmetric(m: &RealMatrix) -> Result<Self, MatError> {
        let dev = m.symmetry_deviation();
        if !m.is_square() {
            return Err(MatError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if dev > HERMITICITY_TOL * (1.0 + m.max_norm()) {
            return Err(MatError::NotSymmetric { deviation: dev });
        }
        Self::new(m.to_complex())
    }

    /// Assembles `re + i*im` with `re` symmetric and `im` antisymmetric.
    pub fn from_parts(re: &RealMatrix, im: &RealMatrix) -> Result<Self, MatError> {
        let scale = 1.0 + re.max_norm().max(im.max_norm());
        let sym_dev = re.symmetry_deviation();
        if sym_dev > HERMITICITY_TOL * scale {
            return Err(MatError::NotSymmetric { deviation: sym_dev });
        }
        let mut anti_dev = 0.0f64;
        for i in 0..im.rows() {
            for j in 0..im.cols() {
                anti_dev = anti_dev.max((im.get(i, j) + im.get(j, i)).abs());
            }
        }
        if anti_dev > HERMITICITY_TOL * scale {
            return Err(MatError::NotAntisymmetric {
                deviation: anti_dev,
            });
        }
        Self::new(CMatrix::from_parts(re, im)?)
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix {
            mat: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix {
            mat: CMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.mat.get(i, j)
    }

    pub fn max_norm(&self) -> f64 {
        self.mat.max_norm()
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianMatrix {
            mat: self.mat.add(&other.mat),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermitianMatrix {
            mat: self.mat.sub(&other.mat),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianMatrix {
            mat: self.mat.scale(Complex64::new(s, 0.0)),
        }
    }

    /// Hermitian direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.dim(), other.dim());
        HermitianMatrix {
            mat: CMatrix::from_fn(a + b, a + b, |i, j| {
                if i < a && j < a {
                    self.get(i, j)
                } else if i >= a && j >= a {
                    other.get(i - a, j - a)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Eigendecomposition: cyclic complex Jacobi
// ---------------------------------------------------------------------------

/// Result of [`herm_eigen`]: `H = V diag(values) V^dag`, values ascending,
/// columns of `V` orthonormal. No ordering guarantee within degenerate
/// eigenvalues; consumers must be tie-agnostic.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

const JACOBI_MAX_SWEEPS: usize = 64;
const JACOBI_OFF_TOL: f64 = 1e-14;

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations. Converges when
/// the off-diagonal Frobenius mass drops below `1e-14 * |H|_F`.
pub fn herm_eigen(h: &HermitianMatrix) -> Result<EigenDecomposition, MatError> {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        let mut converged = false;
        for _ in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&a) < JACOBI_OFF_TOL * scale {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let beta = a.get(p, q);
                    let b = beta.norm();
                    if b <= 1e-18 * scale {
                        continue;
                    }
                    // Phase factor that makes the (p,q) entry real, then a
                    // standard real Jacobi rotation on the 2x2 block.
                    let w = beta / b;
                    let alpha = a.get(p, p).re;
                    let gamma = a.get(q, q).re;
                    let theta = (gamma - alpha) / (2.0 * b);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (1.0 + theta * theta).sqrt())
                    } else {
                        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    // Column update: A <- A * U with U = [[w c, w s], [-s, c]]
                    // on the (p,q) plane.
                    let (wc, ws) = (w * c, w * s);
                    for i in 0..n {
                        let aip = a.get(i, p);
                        let aiq = a.get(i, q);
                        a.set(i, p, aip * wc - aiq * s);
                        a.set(i, q, aip * ws + aiq * c);
                    }
                    // Row update: A <- U^dag * A.
                    for j in 0..n {
                        let apj = a.get(p, j);
                        let aqj = a.get(q, j);
                        a.set(p, j, apj * wc.conj() - aqj * s);
                        a.set(q, j, apj * ws.conj() + aqj * c);
                    }
                    // Keep the rotated entries exactly Hermitian.
                    a.set(p, q, Complex64::new(0.0, 0.0));
                    a.set(q, p, Complex64::new(0.0, 0.0));
                    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
                    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

                    // Accumulate eigenvectors: V <- V * U.
                    for i in 0..n {
                        let vip = v.get(i, p);
                        let viq = v.get(i, q);
                        v.set(i, p, vip * wc - viq * s);
                        v.set(i, q, vip * ws + viq * c);
                    }
                }
            }
        }
        if !converged && off_diagonal_norm(&a) >= JACOBI_OFF_TOL * scale {
            return Err(MatError::NoConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok(EigenDecomposition { values, vectors })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &HermitianMatrix) -> f64 {
    herm_eigen(h).expect("Jacobi did not converge").values[0]
}

/// PSD verdict: true iff the smallest eigenvalue is ≥ -tol.
pub fn is_psd(h: &HermitianMatrix, tol: f64) -> bool {
    min_eigenvalue(h) >= -tol
}

/// Frobenius-nearest PSD matrix: eigenvalues clipped at zero.
pub fn psd_project(h: &HermitianMatrix) -> HermitianMatrix {
    let eig = herm_eigen(h).expect("Jacobi did not converge");
    let n = h.dim();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let lam = eig.values[k].max(0.0);
        if lam == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = eig.vectors.get(i, k);
            for j in 0..n {
                let v = out.get(i, j) + lam * vik * eig.vectors.get(j, k).conj();
                out.set(i, j, v);
            }
        }
    }
    HermitianMatrix::symmetrize(out)
}

// ---------------------------------------------------------------------------
// Complex singular value decomposition
// ---------------------------------------------------------------------------

/// Result of [`complex_svd`]: `Z = U diag(values) V^dag` with unitary `U`,
/// `V` and singular values descending.
#[derive(Debug, Clone)]
pub struct SvdDecomposition {
    pub u: CMatrix,
    pub values: Vec<f64>,
    pub v: CMatrix,
}

/// SVD of a square complex matrix, via the Hermitian eigendecomposition of
/// `Z^dag Z` plus Gram-Schmidt completion of the left factor on the null
/// space.
pub fn complex_svd(z: &CMatrix) -> Result<SvdDecomposition, MatError> {
    if !z.is_square() {
        return Err(MatError::NotSquare {
            rows: z.rows(),
            cols: z.cols(),
        });
    }
    let n = z.rows();
    let gram = HermitianMatrix::symmetrize(z.adjoint().matmul(z));
    let eig = herm_eigen(&gram)?;

    // Descending singular values.
    let mut values = Vec::with_capacity(n);
    let mut v = CMatrix::zeros(n, n);
    for k in 0..n {
        let src = n - 1 - k;
        values.push(eig.values[src].max(0.0).sqrt());
        for i in 0..n {
            v.set(i, k, eig.vectors.get(i, src));
        }
    }

    let sigma_max = values.first().copied().unwrap_or(0.0);
    let rank_tol = 1e-12 * (1.0 + sigma_max);
    let mut u = CMatrix::zeros(n, n);
    let mut ncols = 0usize;
    for k in 0..n {
        if values[k] > rank_tol {
            // u_k = Z v_k / sigma_k, re-orthogonalized against earlier columns.
            let mut col: Vec<Complex64> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| z.get(i, j) * v.get(j, k))
                        .sum::<Complex64>()
                        / values[k]
                })
                .collect();
            gram_schmidt_step(&u, ncols, &mut col);
            normalize(&mut col);
            for i in 0..n {
                u.set(i, ncols, col[i]);
            }
            ncols += 1;
        }
    }
    // Null-space completion from canonical basis vectors.
    let mut basis = 0usize;
    while ncols < n {
        assert!(basis < n, "failed to complete unitary factor");
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        col[basis] = Complex64::new(1.0, 0.0);
        basis += 1;
        gram_schmidt_step(&u, ncols, &mut col);
        let norm: f64 = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 0.5 {
            continue;
        }
        normalize(&mut col);
        for i in 0..n {
            u.set(i, ncols, col[i]);
        }
        ncols += 1;
    }

    Ok(SvdDecomposition { u, values, v })
}

/// Two-pass modified Gram-Schmidt of `col` against the first `ncols` columns.
fn gram_schmidt_step(u: &CMatrix, ncols: usize, col: &mut [Complex64]) {
    let n = u.rows();
    for _ in 0..2 {
        for k in 0..ncols {
            let mut proj = Complex64::new(0.0, 0.0);
            for i in 0..n {
                proj += u.get(i, k).conj() * col[i];
            }
            for i in 0..n {
                col[i] -= proj * u.get(i, k);
            }
        }
    }
}

fn normalize(col: &mut [Complex64]) {
    let norm: f64 = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    assert!(norm > 0.0, "cannot normalize zero column");
    for x in col.iter_mut() {
        *x /= norm;
    }
}

// ---------------------------------------------------------------------------
