//! Symplectic forms, coordinate orderings, covariance-matrix validity,
//! passivity and squeezing tests, and the passive-unitary machinery.
//!
//! Two coordinate orderings are in play. Mode-major order
//! `(Q_1, P_1, ..., Q_n, P_n)` gives the symplectic form as a direct sum of
//! 2x2 blocks `[[0,1],[-1,0]]`; block-major order `(Q_1..Q_n, P_1..P_n)`
//! gives `[[0, 1_n], [-1_n, 0]]`. Matrices commuting with the mode-major
//! form have 2x2 mode blocks `[[a,b],[-b,a]]`, which in block-major order
//! become `[[A,B],[-B,A]]`; the map `[[A,B],[-B,A]] ↦ A+iB` is
//! multiplicative and restricts to the isomorphism between the symplectic
//! orthogonal group K(m) and the unitary group U(m). That isomorphism is
//! what makes gauge-covariant channels tractable: the singular value
//! decomposition of `A+iB` lifts to a symplectic-orthogonal normal form.

use num_complex::Complex64;
use thiserror::Error;

use crate::mat::{
    self, CMatrix, EigenDecomposition, HermitianMatrix, MatError, RealMatrix,
};

/// Default absolute eigenvalue tolerance for PSD verdicts.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative tolerance for membership in the commutant of the symplectic
/// form: `|[M, sigma]|_max <= 1e-9 * (1 + |M|_max)`.
pub const COMMUTANT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SymplecticError {
    #[error("matrix must have even dimension, got {dim}")]
    OddDimension { dim: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("mode count must be positive")]
    ZeroModes,
    #[error("matrix is not symmetric: max |M - M^T| = {deviation:e}")]
    NotSymmetric { deviation: f64 },
    #[error("matrix is not unitary: max |U^dag U - 1| = {deviation:e}")]
    NotUnitary { deviation: f64 },
    #[error("block pattern [[A,B],[-B,A]] violated: {which} (deviation {deviation:e})")]
    BlockPattern { which: &'static str, deviation: f64 },
    #[error("matrix does not commute with the symplectic form: |[M,sigma]| = {deviation:e}")]
    NotInCommutant { deviation: f64 },
    #[error("transmittivity must lie in [0,1], got {t}")]
    BadTransmittivity { t: f64 },
    #[error("mode index {index} out of range for {modes} modes")]
    BadModeIndex { index: usize, modes: usize },
    #[error("beamsplitter requires two distinct modes")]
    DegenerateModePair,
    #[error("mode energy {energy} is not positive")]
    NonPositiveModeEnergy { energy: f64 },
    #[error("inverse temperature must be positive, got {beta}")]
    BadTemperature { beta: f64 },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Ordering of the 2n canonical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordOrder {
    /// `(Q_1, P_1, ..., Q_n, P_n)`
    ModeMajor,
    /// `(Q_1, ..., Q_n, P_1, ..., P_n)`
    BlockMajor,
}

/// The symplectic form on `n` modes in the given ordering.
pub fn symplectic_form(n: usize, order: CoordOrder) -> RealMatrix {
    assert!(n > 0, "mode count must be positive");
    let mut s = RealMatrix::zeros(2 * n, 2 * n);
    match order {
        CoordOrder::ModeMajor => {
            for k in 0..n {
                s.set(2 * k, 2 * k + 1, 1.0);
                s.set(2 * k + 1, 2 * k, -1.0);
            }
        }
        CoordOrder::BlockMajor => {
            for k in 0..n {
                s.set(k, n + k, 1.0);
                s.set(n + k, k, -1.0);
            }
        }
    }
    s
}

/// Permutation `perm[new] = old` taking `from`-ordered coordinates to `to`.
fn reorder_permutation(n: usize, from: CoordOrder, to: CoordOrder) -> Vec<usize> {
    match (from, to) {
        (CoordOrder::ModeMajor, CoordOrder::BlockMajor) => (0..2 * n)
            .map(|i| if i < n { 2 * i } else { 2 * (i - n) + 1 })
            .collect(),
        (CoordOrder::BlockMajor, CoordOrder::ModeMajor) => (0..2 * n)
            .map(|i| if i % 2 == 0 { i / 2 } else { n + i / 2 })
            .collect(),
        _ => (0..2 * n).collect(),
    }
}

/// Congruence by the coordinate-reordering permutation. A round trip is the
/// identity.
pub fn reorder(m: &RealMatrix, from: CoordOrder, to: CoordOrder) -> Result<RealMatrix, SymplecticError> {
    if !m.is_square() {
        return Err(SymplecticError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() % 2 != 0 {
        return Err(SymplecticError::OddDimension { dim: m.rows() });
    }
    let n = m.rows() / 2;
    Ok(m.permute_congruence(&reorder_permutation(n, from, to)))
}

/// `max |M sigma - sigma M|`, with `sigma` built in the matching ordering.
pub fn commutator_with_form(m: &RealMatrix, order: CoordOrder) -> f64 {
    let n = m.rows() / 2;
    let sigma = symplectic_form(n, order);
    m.matmul(&sigma).sub(&sigma.matmul(m)).max_norm()
}

/// True iff `M` commutes with the symplectic form within the commutant
/// tolerance.
pub fn commutes_with_form(m: &RealMatrix, order: CoordOrder) -> bool {
    commutator_with_form(m, order) <= COMMUTANT_TOL * (1.0 + m.max_norm())
}

/// `S sigma S^T = sigma` within `tol` (absolute, max-entry norm).
pub fn is_symplectic(s: &RealMatrix, order: CoordOrder, tol: f64) -> bool {
    if !s.is_square() || s.rows() % 2 != 0 || s.rows() == 0 {
        return false;
    }
    let sigma = symplectic_form(s.rows() / 2, order);
    s.matmul(&sigma).matmul(&s.transpose()).sub(&sigma).max_norm() <= tol
}

/// `S S^T = 1` within `tol` (absolute, max-entry norm).
pub fn is_orthogonal(s: &RealMatrix, tol: f64) -> bool {
    if !s.is_square() || s.rows() == 0 {
        return false;
    }
    s.matmul(&s.transpose())
        .sub(&RealMatrix::identity(s.rows()))
        .max_norm()
        <= tol
}

// ---------------------------------------------------------------------------
// Covariance matrices
// ---------------------------------------------------------------------------

/// Real symmetric second-moment matrix of an `n`-mode state. Symmetry is
/// enforced at construction; the uncertainty relation `Γ + iσ ⪰ 0` is the
/// separate predicate [`CovarianceMatrix::is_valid`], so that invalid
/// candidates can be probed.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    n: usize,
    order: CoordOrder,
    gamma: RealMatrix,
}

impl CovarianceMatrix {
    pub fn new(gamma: RealMatrix, order: CoordOrder) -> Result<Self, SymplecticError> {
        if !gamma.is_square() {
            return Err(SymplecticError::NotSquare {
                rows: gamma.rows(),
                cols: gamma.cols(),
            });
        }
        if gamma.rows() == 0 {
            return Err(SymplecticError::ZeroModes);
        }
        if gamma.rows() % 2 != 0 {
            return Err(SymplecticError::OddDimension { dim: gamma.rows() });
        }
        let dev = gamma.symmetry_deviation();
        if dev > DEFAULT_TOL * (1.0 + gamma.max_norm()) {
            return Err(SymplecticError::NotSymmetric { deviation: dev });
        }
        Ok(CovarianceMatrix {
            n: gamma.rows() / 2,
            order,
            gamma: gamma.symmetrized(),
        })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> CoordOrder {
        self.order
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.gamma
    }

    pub fn reordered(&self, to: CoordOrder) -> Self {
        CovarianceMatrix {
            n: self.n,
            order: to,
            gamma: reorder(&self.gamma, self.order, to).expect("even square by invariant"),
        }
    }

    /// Uncertainty relation `Γ + iσ ⪰ -tol`. By complex conjugation the sign
    /// of `σ` is immaterial.
    pub fn is_valid(&self, tol: f64) -> bool {
        let sigma = symplectic_form(self.n, self.order);
        let h = HermitianMatrix::from_parts(&self.gamma, &sigma)
            .expect("Γ symmetric, σ antisymmetric");
        mat::is_psd(&h, tol)
    }

    /// True iff `[Γ, σ] = 0` within `tol * (1 + |Γ|)`: the covariance of a
    /// Gibbs state of some passive Hamiltonian.
    pub fn is_passive_state(&self, tol: f64) -> bool {
        commutator_with_form(&self.gamma, self.order) <= tol * (1.0 + self.gamma.max_norm())
    }

    /// Smallest ordinary eigenvalue of `Γ`.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = HermitianMatrix::from_real_symmetric(&self.gamma).expect("symmetric by invariant");
        mat::min_eigenvalue(&h)
    }

    /// True iff some quadrature variance lies below the vacuum value:
    /// smallest eigenvalue of `Γ` below `1 - tol`.
    pub fn is_squeezed(&self, tol: f64) -> bool {
        self.min_eigenvalue() < 1.0 - tol
    }
}

// ---------------------------------------------------------------------------
// Passive unitaries and the U(m) -> K(m) isomorphism
// ---------------------------------------------------------------------------

/// An `m x m` unitary, the U(m) pre-image of a symplectic orthogonal.
#[derive(Debug, Clone)]
pub struct PassiveUnitary {
    m: usize,
    u: CMatrix,
}

/// Unitarity tolerance for [`PassiveUnitary`] construction.
pub const UNITARITY_TOL: f64 = 1e-10;

impl PassiveUnitary {
    pub fn new(u: CMatrix) -> Result<Self, SymplecticError> {
        if !u.is_square() {
            return Err(SymplecticError::NotSquare {
                rows: u.rows(),
                cols: u.cols(),
            });
        }
        if u.rows() == 0 {
            return Err(SymplecticError::ZeroModes);
        }
        let dev = u.unitarity_deviation();
        if dev > UNITARITY_TOL {
            return Err(SymplecticError::NotUnitary { deviation: dev });
        }
        Ok(PassiveUnitary { m: u.rows(), u })
    }

    pub fn identity(m: usize) -> Self {
        PassiveUnitary {
            m,
            u: CMatrix::identity(m),
        }
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    /// Group product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self, SymplecticError> {
        Self::new(self.u.matmul(&other.u))
    }

    pub fn adjoint(&self) -> Self {
        PassiveUnitary {
            m: self.m,
            u: self.u.adjoint(),
        }
    }

    /// The symplectic orthogonal image: mode blocks
    /// `[[Re c, Im c], [-Im c, Re c]]` in mode-major order, permuted for
    /// block-major.
    pub fn to_symplectic(&self, order: CoordOrder) -> RealMatrix {
        let m = self.m;
        let mut out = RealMatrix::zeros(2 * m, 2 * m);
        for i in 0..m {
            for j in 0..m {
                let c = self.u.get(i, j);
                out.set(2 * i, 2 * j, c.re);
                out.set(2 * i, 2 * j + 1, c.im);
                out.set(2 * i + 1, 2 * j, -c.im);
                out.set(2 * i + 1, 2 * j + 1, c.re);
            }
        }
        match order {
            CoordOrder::ModeMajor => out,
            CoordOrder::BlockMajor => {
                reorder(&out, CoordOrder::ModeMajor, CoordOrder::BlockMajor).expect("even square")
            }
        }
    }
}

/// Beamsplitter of transmittivity `t` on the (distinct) mode pair, as an
/// element of U(m): `[[sqrt t, sqrt(1-t)], [-sqrt(1-t), sqrt t]]` on the two
/// coupled modes, identity elsewhere.
pub fn beamsplitter(t: f64, modes: (usize, usize), m: usize) -> Result<PassiveUnitary, SymplecticError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(SymplecticError::BadTransmittivity { t });
    }
    let (i, j) = modes;
    for idx in [i, j] {
        if idx >= m {
            return Err(SymplecticError::BadModeIndex { index: idx, modes: m });
        }
    }
    if i == j {
        return Err(SymplecticError::DegenerateModePair);
    }
    let (c, s) = (t.sqrt(), (1.0 - t).sqrt());
    let mut u = CMatrix::identity(m);
    u.set(i, i, Complex64::new(c, 0.0));
    u.set(i, j, Complex64::new(s, 0.0));
    u.set(j, i, Complex64::new(-s, 0.0));
    u.set(j, j, Complex64::new(c, 0.0));
    PassiveUnitary::new(u)
}

/// Phase shifter `e^{i phi}` on one mode, as an element of U(m).
pub fn phase_shifter(phi: f64, mode: usize, m: usize) -> Result<PassiveUnitary, SymplecticError> {
    if mode >= m {
        return Err(SymplecticError::BadModeIndex { index: mode, modes: m });
    }
    let mut u = CMatrix::identity(m);
    u.set(mode, mode, Complex64::from_polar(1.0, phi));
    PassiveUnitary::new(u)
}

// ---------------------------------------------------------------------------
// Block form <-> complex representation
// ---------------------------------------------------------------------------

/// Reads a block-major matrix of the pattern `[[A, B], [-B, A]]` off into
/// `A + iB`. The pattern is checked to relative tolerance and violations
/// name the offending block.
pub fn block_to_complex(m: &RealMatrix) -> Result<CMatrix, SymplecticError> {
    if !m.is_square() {
        return Err(SymplecticError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() % 2 != 0 || m.rows() == 0 {
        return Err(SymplecticError::OddDimension { dim: m.rows() });
    }
    let n = m.rows() / 2;
    let a = m.block(0, 0, n, n);
    let b = m.block(0, n, n, n);
    let tol = COMMUTANT_TOL * (1.0 + m.max_norm());
    let dev_d = m.block(n, n, n, n).sub(&a).max_norm();
    if dev_d > tol {
        return Err(SymplecticError::BlockPattern {
            which: "bottom-right block differs from top-left",
            deviation: dev_d,
        });
    }
    let dev_c = m.block(n, 0, n, n).add(&b).max_norm();
    if dev_c > tol {
        return Err(SymplecticError::BlockPattern {
            which: "bottom-left block differs from negated top-right",
            deviation: dev_c,
        });
    }
    CMatrix::from_parts(&a, &b).map_err(SymplecticError::from)
}

/// Inverse of [`block_to_complex`]: `A + iB ↦ [[A, B], [-B, A]]` in
/// block-major order.
pub fn complex_to_block(z: &CMatrix) -> RealMatrix {
    assert!(z.is_square());
    let n = z.rows();
    RealMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i >= n, j >= n);
        let c = z.get(i % n, j % n);
        match (bi, bj) {
            (false, false) | (true, true) => c.re,
            (false, true) => c.im,
            (true, false) => -c.im,
        }
    })
}

/// Positive-semidefiniteness of the doubled block form via the complex
/// criterion: `[[A,B],[-B,A]] ⪰ 0  ⟺  A + iB ⪰ 0 and A - iB ⪰ 0`.
/// Requires `A` symmetric and `B` antisymmetric (otherwise the block matrix
/// is not symmetric and the question is ill-posed).
pub fn block_psd_check(a: &RealMatrix, b: &RealMatrix, tol: f64) -> Result<bool, SymplecticError> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(SymplecticError::Mat(MatError::DimMismatch {
            left: a.rows(),
            right: b.rows(),
            context: "block_psd_check operands",
        }));
    }
    let plus = HermitianMatrix::from_parts(a, b)?;
    let minus = HermitianMatrix::from_parts(a, &b.neg())?;
    Ok(mat::is_psd(&plus, tol) && mat::is_psd(&minus, tol))
}

// ---------------------------------------------------------------------------
// Symplectic SVD of gauge-covariant matrices
// ---------------------------------------------------------------------------

/// Output of [`symplectic_svd_gauge`]: symplectic orthogonal `G`, `F` (in
/// the ordering of the input) with `G X F` diagonal; in block-major order
/// the product equals `diag(values) ⊕ diag(values)`, with the values equal
/// to the singular values of `X_1 + i X_2`, descending.
#[derive(Debug, Clone)]
pub struct GaugeSvd {
    pub g: RealMatrix,
    pub f: RealMatrix,
    pub values: Vec<f64>,
}

impl GaugeSvd {
    /// `diag(values) ⊕ diag(values)` expressed in the given ordering.
    pub fn diagonal_form(&self, order: CoordOrder) -> RealMatrix {
        let n = self.values.len();
        match order {
            CoordOrder::BlockMajor => {
                let d = RealMatrix::diagonal(&self.values);
                d.direct_sum(&d)
            }
            CoordOrder::ModeMajor => {
                let mut interleaved = Vec::with_capacity(2 * n);
                for &v in &self.values {
                    interleaved.push(v);
                    interleaved.push(v);
                }
                RealMatrix::diagonal(&interleaved)
            }
        }
    }
}

/// Singular value decomposition within the commutant of the symplectic
/// form: for `[X, σ] = 0`, returns symplectic orthogonals `G`, `F` with
/// `G X F` nonnegative diagonal. Built from the complex SVD of `X_1 + iX_2`
/// through the multiplicative block isomorphism.
pub fn symplectic_svd_gauge(x: &RealMatrix, order: CoordOrder) -> Result<GaugeSvd, SymplecticError> {
    let dev = commutator_with_form(x, order);
    if dev > COMMUTANT_TOL * (1.0 + x.max_norm()) {
        return Err(SymplecticError::NotInCommutant { deviation: dev });
    }
    let x_bm = reorder(x, order, CoordOrder::BlockMajor)?;
    let z = block_to_complex(&x_bm)?;
    let svd = mat::complex_svd(&z)?;
    let g_c = PassiveUnitary::new(svd.u.adjoint())?;
    let f_c = PassiveUnitary::new(svd.v)?;
    // In block-major order Λ(u) is exactly the block form of u, so the
    // multiplicative isomorphism turns U^dag Z V = Σ into G X F = Σ ⊕ Σ.
    let to_order = |p: &PassiveUnitary| -> RealMatrix {
        match order {
            CoordOrder::ModeMajor => p.to_symplectic(CoordOrder::ModeMajor),
            CoordOrder::BlockMajor => p.to_symplectic(CoordOrder::BlockMajor),
        }
    };
    Ok(GaugeSvd {
        g: to_order(&g_c),
        f: to_order(&f_c),
        values: svd.values,
    })
}

// ---------------------------------------------------------------------------
// Thermal covariance of a passive Hamiltonian
// ---------------------------------------------------------------------------

/// Covariance matrix of the Gibbs state of the passive Hamiltonian with
/// single-particle matrix `h` at inverse temperature `beta`:
/// `Γ = Λ(V) (⊕_k ν_k 1_2) Λ(V)^T` for `h = V diag(ε) V^dag`, with the
/// bosonic occupation `ν = coth(βε/2)` clamped at the vacuum value 1.
///
/// The result commutes with the symplectic form and satisfies `Γ ⪰ 1`
/// (never squeezed). All mode energies must be positive.
pub fn thermal_covariance(
    h: &HermitianMatrix,
    beta: f64,
) -> Result<CovarianceMatrix, SymplecticError> {
    if !(beta > 0.0) {
        return Err(SymplecticError::BadTemperature { beta });
    }
    let EigenDecomposition { values, vectors } = mat::herm_eigen(h)?;
    if let Some(&e) = values.iter().find(|&&e| e <= 0.0) {
        return Err(SymplecticError::NonPositiveModeEnergy { energy: e });
    }
    let occ: Vec<f64> = values
        .iter()
        .map(|&e| {
            let x = 0.5 * beta * e;
            // coth(x) -> 1 for large x; the clamp absorbs rounding below 1.
            let nu = if x > 20.0 { 1.0 } else { 1.0 / x.tanh() };
            nu.max(1.0)
        })
        .collect();
    let m = h.dim();
    let lam = PassiveUnitary::new(vectors)?.to_symplectic(CoordOrder::ModeMajor);
    let mut interleaved = Vec::with_capacity(2 * m);
    for &nu in &occ {
        interleaved.push(nu);
        interleaved.push(nu);
    }
    let d = RealMatrix::diagonal(&interleaved);
    let gamma = lam.matmul(&d).matmul(&lam.transpose());
    CovarianceMatrix::new(gamma.symmetrized(), CoordOrder::ModeMajor)
}

// ---------------------------------------------------------------------------
