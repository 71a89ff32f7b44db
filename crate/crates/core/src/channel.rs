//! The Gaussian channel data model and its structural predicates.
//!
//! A channel is the pair `(X, Y)` acting on covariance matrices as
//! `Γ ↦ XΓX^T + Y`. Admissibility, gauge covariance and PPT are all
//! eigenvalue tests on Hermitian matrices assembled from `X`, `Y` and the
//! symplectic form; construction from a dilation reads the blocks of the
//! coupling matrix, `X = S_4` and `Y = S_3 Γ_E S_3^T`.
//!
//! Channels are stored in mode-major coordinates; block-major input is
//! converted at construction so every predicate is ordering-uniform.

use thiserror::Error;

use crate::mat::{self, CMatrix, HermitianMatrix, RealMatrix};
use crate::symplectic::{
    self, block_to_complex, complex_to_block, reorder, symplectic_form, CoordOrder,
    CovarianceMatrix, SymplecticError, COMMUTANT_TOL, DEFAULT_TOL,
};

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("X must be 2n x 2n for n = {expected} modes, got {rows}x{cols}")]
    BadXShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("Y must be 2n x 2n for n = {expected} modes, got {rows}x{cols}")]
    BadYShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("mode count must be positive")]
    ZeroModes,
    #[error("Y is not symmetric: max |Y - Y^T| = {deviation:e}")]
    AsymmetricY { deviation: f64 },
    #[error(
        "(X, Y) violates complete positivity: min eig of Y + i(sigma - X sigma X^T) = {min_eig:e}"
    )]
    NotCompletelyPositive { min_eig: f64 },
    #[error("coupling matrix is not symplectic: deviation {deviation:e}")]
    NotSymplectic { deviation: f64 },
    #[error("coupling matrix has dimension {dim}, expected {expected} for the mode split")]
    BadCouplingShape { dim: usize, expected: usize },
    #[error("environment covariance violates the uncertainty relation")]
    InvalidEnvironment,
    #[error("channels act on different mode counts: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },
    #[error("conjugating matrix {which} is not symplectic orthogonal")]
    NotPassiveConjugation { which: &'static str },
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

/// Tolerance above which Y-asymmetry is reported rather than silently
/// averaged away.
const Y_SYMMETRY_TOL: f64 = 1e-9;

/// A Gaussian channel `(X, Y)` on `n` modes, mode-major coordinates.
#[derive(Debug, Clone)]
pub struct GaussianChannel {
    n: usize,
    x: RealMatrix,
    y: RealMatrix,
}

impl GaussianChannel {
    /// Validated constructor: shape checks, Y symmetrization and the
    /// complete-positivity test at the default tolerance.
    pub fn new(
        n: usize,
        x: RealMatrix,
        y: RealMatrix,
        order: CoordOrder,
    ) -> Result<Self, ChannelError> {
        let c = Self::candidate(n, x, y, order)?;
        let min_eig = mat::min_eigenvalue(&c.cp_operand());
        if min_eig < -DEFAULT_TOL * (1.0 + c.y.max_norm()) {
            return Err(ChannelError::NotCompletelyPositive { min_eig });
        }
        Ok(c)
    }

    /// Unchecked candidate: shapes and symmetry are still enforced, the
    /// complete-positivity test is not, so invalid pairs can be probed.
    pub fn candidate(
        n: usize,
        x: RealMatrix,
        y: RealMatrix,
        order: CoordOrder,
    ) -> Result<Self, ChannelError> {
        if n == 0 {
            return Err(ChannelError::ZeroModes);
        }
        if x.rows() != 2 * n || x.cols() != 2 * n {
            return Err(ChannelError::BadXShape {
                expected: n,
                rows: x.rows(),
                cols: x.cols(),
            });
        }
        if y.rows() != 2 * n || y.cols() != 2 * n {
            return Err(ChannelError::BadYShape {
                expected: n,
                rows: y.rows(),
                cols: y.cols(),
            });
        }
        let x = reorder(&x, order, CoordOrder::ModeMajor)?;
        let y = reorder(&y, order, CoordOrder::ModeMajor)?;
        let dev = y.symmetry_deviation();
        if dev > Y_SYMMETRY_TOL * (1.0 + y.max_norm()) {
            log::warn!("Y asymmetry {dev:e} exceeds {Y_SYMMETRY_TOL:e}; symmetrizing");
        }
        Ok(GaussianChannel {
            n,
            x,
            y: y.symmetrized(),
        })
    }

    /// Identity channel on `n` modes.
    pub fn identity(n: usize) -> Self {
        GaussianChannel {
            n,
            x: RealMatrix::identity(2 * n),
            y: RealMatrix::zeros(2 * n, 2 * n),
        }
    }

    /// Single-mode attenuator: `X = sqrt(t) 1`, `Y = y 1`.
    pub fn attenuator(t: f64, y: f64) -> Result<Self, ChannelError> {
        Self::new(
            1,
            RealMatrix::identity(2).scale(t.sqrt()),
            RealMatrix::identity(2).scale(y),
            CoordOrder::ModeMajor,
        )
    }

    /// Gauge-covariant channel from its complex parametrization: `X` is the
    /// block form of `z` and `Y` of the Hermitian `y_c`. No validity check;
    /// pair with [`GaussianChannel::is_valid`].
    pub fn from_complex_parts(z: &CMatrix, y_c: &HermitianMatrix) -> Result<Self, ChannelError> {
        let n = z.rows();
        if !z.is_square() || y_c.dim() != n {
            return Err(ChannelError::ModeMismatch {
                left: z.rows(),
                right: y_c.dim(),
            });
        }
        let x = complex_to_block(z);
        let y = complex_to_block(y_c.matrix());
        Self::candidate(n, x, y, CoordOrder::BlockMajor)
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &RealMatrix {
        &self.x
    }

    pub fn y(&self) -> &RealMatrix {
        &self.y
    }

    /// `X`, `Y` expressed in the requested ordering.
    pub fn matrices(&self, order: CoordOrder) -> (RealMatrix, RealMatrix) {
        (
            reorder(&self.x, CoordOrder::ModeMajor, order).expect("even square"),
            reorder(&self.y, CoordOrder::ModeMajor, order).expect("even square"),
        )
    }

    pub fn sigma(&self) -> RealMatrix {
        symplectic_form(self.n, CoordOrder::ModeMajor)
    }

    /// `X sigma X^T`, the twisted form entering the PPT and
    /// entanglement-breaking criteria.
    pub fn x_sigma_xt(&self) -> RealMatrix {
        let sigma = self.sigma();
        self.x.matmul(&sigma).matmul(&self.x.transpose())
    }

    /// The complete-positivity operand `Y + i(sigma - X sigma X^T)`.
    pub fn cp_operand(&self) -> HermitianMatrix {
        let im = self.sigma().sub(&self.x_sigma_xt());
        HermitianMatrix::from_parts(&self.y, &im).expect("Y symmetric, form antisymmetric")
    }

    /// The PPT operand `Y - i(sigma + X sigma X^T)`.
    pub fn ppt_operand(&self) -> HermitianMatrix {
        let im = self.sigma().add(&self.x_sigma_xt()).neg();
        HermitianMatrix::from_parts(&self.y, &im).expect("Y symmetric, form antisymmetric")
    }

    /// Complete positivity: `Y + i(sigma - X sigma X^T) ⪰ -tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        mat::is_psd(&self.cp_operand(), tol)
    }

    /// Gauge covariance: both `X` and `Y` commute with the symplectic form.
    pub fn is_gauge_covariant(&self, tol: f64) -> bool {
        let ok = |m: &RealMatrix| {
            symplectic::commutator_with_form(m, CoordOrder::ModeMajor)
                <= tol * (1.0 + m.max_norm())
        };
        ok(&self.x) && ok(&self.y)
    }

    /// PPT: `Y - i(sigma + X sigma X^T) ⪰ -tol`. PPT channels have zero
    /// quantum capacity.
    pub fn is_ppt(&self, tol: f64) -> bool {
        mat::is_psd(&self.ppt_operand(), tol)
    }

    /// Parallel composition; the mode-major direct sum keeps the symplectic
    /// form in its standard shape.
    pub fn tensor(&self, other: &Self) -> Self {
        GaussianChannel {
            n: self.n + other.n,
            x: self.x.direct_sum(&other.x),
            y: self.y.direct_sum(&other.y),
        }
    }

    /// Serial composition `self ∘ before`: `X = X_2 X_1`,
    /// `Y = X_2 Y_1 X_2^T + Y_2`.
    pub fn compose(&self, before: &Self) -> Result<Self, ChannelError> {
        if self.n != before.n {
            return Err(ChannelError::ModeMismatch {
                left: self.n,
                right: before.n,
            });
        }
        let x = self.x.matmul(&before.x);
        let y = self
            .x
            .matmul(&before.y)
            .matmul(&self.x.transpose())
            .add(&self.y);
        Ok(GaussianChannel {
            n: self.n,
            x,
            y: y.symmetrized(),
        })
    }

    /// Conjugation by passive unitaries on output and input:
    /// `X' = G X F`, `Y' = G Y G^T`. Leaves validity and PPT unchanged.
    pub fn conjugate(&self, g: &RealMatrix, f: &RealMatrix) -> Result<Self, ChannelError> {
        let check = |m: &RealMatrix, which: &'static str| -> Result<(), ChannelError> {
            if m.rows() != 2 * self.n
                || !symplectic::is_symplectic(m, CoordOrder::ModeMajor, 1e-9)
                || !symplectic::is_orthogonal(m, 1e-9)
            {
                return Err(ChannelError::NotPassiveConjugation { which });
            }
            Ok(())
        };
        check(g, "G")?;
        check(f, "F")?;
        Ok(GaussianChannel {
            n: self.n,
            x: g.matmul(&self.x).matmul(f),
            y: g.matmul(&self.y).matmul(&g.transpose()).symmetrized(),
        })
    }

    /// Complex parametrization `(Z, Y_c)` of a gauge-covariant channel;
    /// errors if `X` or `Y` is outside the commutant.
    pub fn to_complex_parts(&self) -> Result<(CMatrix, HermitianMatrix), ChannelError> {
        let x_bm = reorder(&self.x, CoordOrder::ModeMajor, CoordOrder::BlockMajor)?;
        let y_bm = reorder(&self.y, CoordOrder::ModeMajor, CoordOrder::BlockMajor)?;
        let z = block_to_complex(&x_bm)?;
        let y_c = HermitianMatrix::new(block_to_complex(&y_bm)?)
            .map_err(|e| ChannelError::Symplectic(SymplecticError::Mat(e)))?;
        Ok((z, y_c))
    }
}

// ---------------------------------------------------------------------------
// Dilations
// ---------------------------------------------------------------------------

/// A unitary dilation at the covariance level: a symplectic coupling `S` on
/// `n_env + n_sys` modes (environment coordinates first) and an environment
/// covariance `Γ_E`.
#[derive(Debug, Clone)]
pub struct DilationSpec {
    n_env: usize,
    n_sys: usize,
    s: RealMatrix,
    gamma_env: CovarianceMatrix,
}

impl DilationSpec {
    pub fn new(
        n_env: usize,
        n_sys: usize,
        s: RealMatrix,
        gamma_env: CovarianceMatrix,
        order: CoordOrder,
    ) -> Result<Self, ChannelError> {
        if n_sys == 0 {
            return Err(ChannelError::ZeroModes);
        }
        let total = 2 * (n_env + n_sys);
        if s.rows() != total || s.cols() != total {
            return Err(ChannelError::BadCouplingShape {
                dim: s.rows(),
                expected: total,
            });
        }
        if gamma_env.modes() != n_env {
            return Err(ChannelError::BadCouplingShape {
                dim: 2 * gamma_env.modes(),
                expected: 2 * n_env,
            });
        }
        let s = reorder(&s, order, CoordOrder::ModeMajor)?;
        if !symplectic::is_symplectic(&s, CoordOrder::ModeMajor, 1e-9) {
            let sigma = symplectic_form(n_env + n_sys, CoordOrder::ModeMajor);
            let deviation = s
                .matmul(&sigma)
                .matmul(&s.transpose())
                .sub(&sigma)
                .max_norm();
            return Err(ChannelError::NotSymplectic { deviation });
        }
        let gamma_env = gamma_env.reordered(CoordOrder::ModeMajor);
        if !gamma_env.is_valid(DEFAULT_TOL) {
            return Err(ChannelError::InvalidEnvironment);
        }
        Ok(DilationSpec {
            n_env,
            n_sys,
            s,
            gamma_env,
        })
    }

    pub fn env_modes(&self) -> usize {
        self.n_env
    }

    pub fn system_modes(&self) -> usize {
        self.n_sys
    }

    pub fn coupling(&self) -> &RealMatrix {
        &self.s
    }

    pub fn environment(&self) -> &CovarianceMatrix {
        &self.gamma_env
    }

    /// The channel induced on the system block: `X = S_4`,
    /// `Y = S_3 Γ_E S_3^T`.
    pub fn to_channel(&self) -> Result<GaussianChannel, ChannelError> {
        let e = 2 * self.n_env;
        let d = 2 * self.n_sys;
        let s4 = self.s.block(e, e, d, d);
        let y = if self.n_env == 0 {
            RealMatrix::zeros(d, d)
        } else {
            let s3 = self.s.block(e, 0, d, e);
            s3.matmul(self.gamma_env.matrix()).matmul(&s3.transpose())
        };
        GaussianChannel::new(self.n_sys, s4, y.symmetrized(), CoordOrder::ModeMajor)
    }

    /// Passivity of the dilation: the coupling is symplectic orthogonal and
    /// the environment is the Gibbs state of a passive Hamiltonian
    /// (equivalently, commutes with the symplectic form).
    pub fn is_passive(&self, tol: f64) -> bool {
        symplectic::is_symplectic(&self.s, CoordOrder::ModeMajor, tol.max(1e-12))
            && symplectic::is_orthogonal(&self.s, tol.max(1e-12))
            && self.gamma_env.is_passive_state(tol.max(COMMUTANT_TOL))
    }
}

/// Free-function form of [`DilationSpec::to_channel`].
pub fn from_dilation(d: &DilationSpec) -> Result<GaussianChannel, ChannelError> {
    d.to_channel()
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil;
    use num_complex::Complex64;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn example_dilation() -> DilationSpec {
        DilationSpec::new(
            2,
            2,
            testutil::squeezed_env_example_s(),
            testutil::squeezed_env_covariance(),
            CoordOrder::ModeMajor,
        )
        .unwrap()
    }

    #[test]
    fn identity_channel_is_valid_not_ppt() {
        let id = GaussianChannel::identity(1);
        assert!(id.is_valid(DEFAULT_TOL));
        assert!(id.is_gauge_covariant(COMMUTANT_TOL));
        // The PPT operand is -2i sigma, eigenvalues ±2.
        assert!(!id.is_ppt(DEFAULT_TOL));
    }

    #[test]
    fn attenuator_family() {
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let ch = GaussianChannel::attenuator(t, 1.0 - t).unwrap();
            assert!(ch.is_valid(DEFAULT_TOL), "t = {t}");
            assert!(ch.is_gauge_covariant(COMMUTANT_TOL));
            if t > 0.0 {
                assert!(!ch.is_ppt(DEFAULT_TOL), "t = {t}");
            }
        }
        // t = 0 is a measure-and-prepare limit: X = 0, Y = 1; PPT iff
        // Y - i sigma >= 0, which fails for Y = 1 only marginally (eigs 0, 2).
        let mp = GaussianChannel::attenuator(0.0, 1.0).unwrap();
        assert!(mp.is_ppt(DEFAULT_TOL));
    }

    #[test]
    fn amplifier_without_noise_is_invalid() {
        let bad = GaussianChannel::candidate(
            1,
            RealMatrix::identity(2).scale(2.0),
            RealMatrix::zeros(2, 2),
            CoordOrder::ModeMajor,
        )
        .unwrap();
        assert!(!bad.is_valid(DEFAULT_TOL));
        assert!(matches!(
            GaussianChannel::new(
                1,
                RealMatrix::identity(2).scale(2.0),
                RealMatrix::zeros(2, 2),
                CoordOrder::ModeMajor,
            ),
            Err(ChannelError::NotCompletelyPositive { .. })
        ));
    }

    #[test]
    fn example_channel_is_valid_ppt_not_gauge_covariant() {
        let ch = testutil::squeezed_env_example_channel();
        assert!(ch.is_valid(DEFAULT_TOL));
        assert!(ch.is_ppt(DEFAULT_TOL));
        // X commutes with the form; Y does not (its cross blocks carry
        // opposite signs), so the channel is not gauge covariant.
        assert!(symplectic::commutes_with_form(ch.x(), CoordOrder::ModeMajor));
        assert!(!symplectic::commutes_with_form(ch.y(), CoordOrder::ModeMajor));
        assert!(!ch.is_gauge_covariant(COMMUTANT_TOL));
    }

    #[test]
    fn dilation_of_identity_coupling() {
        let gamma = testutil::squeezed_env_covariance();
        let d = DilationSpec::new(2, 2, RealMatrix::identity(8), gamma, CoordOrder::ModeMajor)
            .unwrap();
        let ch = d.to_channel().unwrap();
        assert!(ch.x().sub(&RealMatrix::identity(4)).max_norm() == 0.0);
        assert!(ch.y().max_norm() == 0.0);
    }

    #[test]
    fn beamsplitter_with_vacuum_gives_attenuator() {
        let t = 0.37;
        let bs = symplectic::beamsplitter(t, (0, 1), 2).unwrap();
        let s = bs.to_symplectic(CoordOrder::ModeMajor);
        let vacuum =
            CovarianceMatrix::new(RealMatrix::identity(2), CoordOrder::ModeMajor).unwrap();
        let d = DilationSpec::new(1, 1, s, vacuum, CoordOrder::ModeMajor).unwrap();
        let ch = d.to_channel().unwrap();
        let want_x = RealMatrix::identity(2).scale(t.sqrt());
        let want_y = RealMatrix::identity(2).scale(1.0 - t);
        assert!(ch.x().sub(&want_x).max_norm() < 1e-12);
        assert!(ch.y().sub(&want_y).max_norm() < 1e-12);
    }

    #[test]
    fn example_dilation_reproduces_printed_channel() {
        let ch = example_dilation().to_channel().unwrap();
        let dx = ch.x().sub(&testutil::squeezed_env_example_x()).max_norm();
        let dy = ch.y().sub(&testutil::squeezed_env_example_y()).max_norm();
        assert!(dx < 1e-12, "X deviation {dx:e}");
        assert!(dy < 1e-12, "Y deviation {dy:e}");
    }

    #[test]
    fn passivity_of_dilations() {
        // Beamsplitter coupling to a thermal mode: passive.
        let bs = symplectic::beamsplitter(0.5, (0, 1), 2).unwrap();
        let thermal =
            CovarianceMatrix::new(RealMatrix::identity(2).scale(2.5), CoordOrder::ModeMajor)
                .unwrap();
        let d = DilationSpec::new(
            1,
            1,
            bs.to_symplectic(CoordOrder::ModeMajor),
            thermal,
            CoordOrder::ModeMajor,
        )
        .unwrap();
        assert!(d.is_passive(DEFAULT_TOL));

        // The bundled example: passive coupling, squeezed (non-Gibbs)
        // environment.
        let ex = example_dilation();
        assert!(!ex.is_passive(DEFAULT_TOL));

        // A squeezer on the system with vacuum environment: coupling not
        // orthogonal.
        let squeezer = RealMatrix::identity(2).direct_sum(&RealMatrix::diagonal(&[2.0, 0.5]));
        let vacuum =
            CovarianceMatrix::new(RealMatrix::identity(2), CoordOrder::ModeMajor).unwrap();
        let d2 = DilationSpec::new(1, 1, squeezer, vacuum, CoordOrder::ModeMajor).unwrap();
        assert!(!d2.is_passive(DEFAULT_TOL));
    }

    #[test]
    fn dilation_construction_errors() {
        let vacuum =
            CovarianceMatrix::new(RealMatrix::identity(2), CoordOrder::ModeMajor).unwrap();
        let not_symplectic = RealMatrix::identity(4).scale(2.0);
        assert!(matches!(
            DilationSpec::new(1, 1, not_symplectic, vacuum.clone(), CoordOrder::ModeMajor),
            Err(ChannelError::NotSymplectic { .. })
        ));
        let bad_env =
            CovarianceMatrix::new(RealMatrix::identity(2).scale(0.25), CoordOrder::ModeMajor)
                .unwrap();
        assert!(matches!(
            DilationSpec::new(1, 1, RealMatrix::identity(4), bad_env, CoordOrder::ModeMajor),
            Err(ChannelError::InvalidEnvironment)
        ));
        assert!(matches!(
            DilationSpec::new(2, 1, RealMatrix::identity(4), vacuum, CoordOrder::ModeMajor),
            Err(ChannelError::BadCouplingShape { .. })
        ));
    }

    #[test]
    fn tensor_and_compose() {
        let id2 = GaussianChannel::identity(1).tensor(&GaussianChannel::identity(1));
        assert_eq!(id2.modes(), 2);
        assert!(id2.x().sub(&RealMatrix::identity(4)).max_norm() == 0.0);

        let a = GaussianChannel::attenuator(0.5, 0.5).unwrap();
        let b = GaussianChannel::attenuator(0.8, 0.2).unwrap();
        let ab = b.compose(&a).unwrap();
        // Attenuators compose to the attenuator with t = t1 t2 and
        // Y = (1 - t1 t2) 1.
        let t12: f64 = 0.4;
        assert!(ab
            .x()
            .sub(&RealMatrix::identity(2).scale(t12.sqrt()))
            .max_norm()
            < 1e-12);
        assert!(ab
            .y()
            .sub(&RealMatrix::identity(2).scale(1.0 - t12))
            .max_norm()
            < 1e-12);
        assert!(ab.is_valid(DEFAULT_TOL));
    }

    #[test]
    fn tensor_preserves_validity_and_ppt() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let y1 = rng.gen_range(1.5..3.0);
            let y2 = rng.gen_range(1.5..3.0);
            let t1 = rng.gen_range(0.0..(y1 - 1.0).min(1.0));
            let t2 = rng.gen_range(0.0..(y2 - 1.0).min(1.0));
            let c1 = GaussianChannel::attenuator(t1, y1).unwrap();
            let c2 = GaussianChannel::attenuator(t2, y2).unwrap();
            assert!(c1.is_ppt(DEFAULT_TOL) && c2.is_ppt(DEFAULT_TOL));
            let pair = c1.tensor(&c2);
            assert!(pair.is_valid(DEFAULT_TOL));
            assert!(pair.is_ppt(DEFAULT_TOL));
        }
    }

    #[test]
    fn conjugation_preserves_predicates() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let ch = testutil::squeezed_env_example_channel();
        for _ in 0..10 {
            let g = testutil::random_unitary(2, &mut rng).to_symplectic(CoordOrder::ModeMajor);
            let f = testutil::random_unitary(2, &mut rng).to_symplectic(CoordOrder::ModeMajor);
            let conj = ch.conjugate(&g, &f).unwrap();
            assert_eq!(conj.is_valid(DEFAULT_TOL), ch.is_valid(DEFAULT_TOL));
            assert_eq!(conj.is_ppt(DEFAULT_TOL), ch.is_ppt(DEFAULT_TOL));
        }
        // Non-orthogonal conjugation is rejected.
        let squeezer = RealMatrix::diagonal(&[2.0, 0.5, 2.0, 0.5]);
        assert!(matches!(
            ch.conjugate(&squeezer, &RealMatrix::identity(4)),
            Err(ChannelError::NotPassiveConjugation { which: "G" })
        ));
    }

    #[test]
    fn passive_dilations_yield_gauge_covariant_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..20 {
            let n_env = rng.gen_range(1..=2usize);
            let n_sys = rng.gen_range(1..=2usize);
            let m = n_env + n_sys;
            // Random circuit of beamsplitters and phase shifters.
            let mut u = symplectic::phase_shifter(rng.gen_range(0.0..6.28), 0, m).unwrap();
            for _ in 0..4 {
                let i = rng.gen_range(0..m);
                let mut j = rng.gen_range(0..m);
                if m > 1 {
                    while j == i {
                        j = rng.gen_range(0..m);
                    }
                    let bs = symplectic::beamsplitter(rng.gen_range(0.0..1.0), (i, j), m).unwrap();
                    u = u.compose(&bs).unwrap();
                }
                let ps =
                    symplectic::phase_shifter(rng.gen_range(0.0..6.28), rng.gen_range(0..m), m)
                        .unwrap();
                u = u.compose(&ps).unwrap();
            }
            let h = testutil::random_positive_hamiltonian(n_env, &mut rng);
            let env = symplectic::thermal_covariance(&h, rng.gen_range(0.1..3.0)).unwrap();
            let d = DilationSpec::new(
                n_env,
                n_sys,
                u.to_symplectic(CoordOrder::ModeMajor),
                env,
                CoordOrder::ModeMajor,
            )
            .unwrap();
            assert!(d.is_passive(DEFAULT_TOL));
            let ch = d.to_channel().unwrap();
            assert!(ch.is_valid(1e-9));
            assert!(ch.is_gauge_covariant(COMMUTANT_TOL));
        }
    }

    #[test]
    fn complex_parts_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let z = CMatrix::from_fn(2, 2, |_, _| {
            Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
        });
        let y_c = testutil::random_positive_hamiltonian(2, &mut rng).scale(3.0);
        let ch = GaussianChannel::from_complex_parts(&z, &y_c).unwrap();
        let (z2, y2) = ch.to_complex_parts().unwrap();
        assert!(z2.sub(&z).max_norm() < 1e-12);
        assert!(y2.matrix().sub(y_c.matrix()).max_norm() < 1e-12);
        assert!(ch.is_gauge_covariant(COMMUTANT_TOL));
        // The example channel is not gauge covariant, so the complex
        // parametrization must refuse it.
        assert!(testutil::squeezed_env_example_channel()
            .to_complex_parts()
            .is_err());
    }

    #[test]
    fn block_major_input_is_normalized() {
        let x_bm = RealMatrix::identity(4).scale(0.5);
        let y_bm = RealMatrix::identity(4).scale(2.0);
        let ch = GaussianChannel::new(2, x_bm, y_bm, CoordOrder::BlockMajor).unwrap();
        let (x_back, _) = ch.matrices(CoordOrder::BlockMajor);
        assert!(x_back.sub(&RealMatrix::identity(4).scale(0.5)).max_norm() == 0.0);
    }
}
