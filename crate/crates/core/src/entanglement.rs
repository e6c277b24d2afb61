//! Separability and logarithmic negativity of two-mode Gaussian states.
//!
//! The covariance matrix is split as `V = [[A, C], [Cᵀ, B]]`. The partially
//! transposed symplectic eigenvalues are the positive roots of
//!
//! ```text
//! ζ⁴ − (det A + det B − 2 det C) ζ² + det V = 0
//! ```
//!
//! and the state is entangled iff the smaller one is below 1/2.
//!
//! Near separable pure states the two roots coincide and the discriminant
//! cancels catastrophically, so the determinants and the discriminant are
//! formed in double-double arithmetic from the (exact) `f64` entries.

use twofloat::TwoFloat;

use crate::dynamics::CovarianceMatrix;
use crate::error::{Error, Result};
use crate::matkernel::{gen_eigvals, Mat2, Mat4};

/// Most negative discriminant or `ζ²` root that is clamped to zero rather
/// than reported as unphysical.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

/// Largest real part accepted on the `±i c` eigenvalues of `Ω Ṽ`, relative
/// to `max(1, spectral radius)`.
pub const ORACLE_REAL_TOL: f64 = 1e-8;

/// Local covariances `A`, `B` and intermodal correlations `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockDecomposition {
    pub a: Mat2,
    pub b: Mat2,
    pub c: Mat2,
}

impl BlockDecomposition {
    pub fn reassemble(&self) -> Mat4 {
        Mat4::from_blocks(&self.a, &self.b, &self.c)
    }
}

pub fn block_decompose(v: &CovarianceMatrix) -> BlockDecomposition {
    split(v.matrix())
}

fn split(m: &Mat4) -> BlockDecomposition {
    BlockDecomposition {
        a: m.block(0, 0),
        b: m.block(1, 1),
        c: m.block(0, 1),
    }
}

/// Partially transposed symplectic eigenvalues, negativity and logarithmic
/// negativity (in bits).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    pub c1: f64,
    pub c2: f64,
    pub negativity: f64,
    pub log_neg: f64,
}

impl EntanglementReport {
    /// Builds the report from an ascending pair of PT symplectic eigenvalues.
    pub fn from_spectrum(c1: f64, c2: f64) -> Self {
        let log_neg = log_neg_term(c1) + log_neg_term(c2);
        let negativity = (log_neg.exp2() - 1.0) / 2.0;
        EntanglementReport {
            c1,
            c2,
            negativity,
            log_neg,
        }
    }

    pub fn is_entangled(&self) -> bool {
        self.log_neg > 0.0
    }
}

/// `F(c) = −log₂(2c)` for `2c < 1`, else 0.
pub fn log_neg_term(c: f64) -> f64 {
    if 2.0 * c >= 1.0 {
        0.0
    } else {
        -(2.0 * c).log2()
    }
}

fn det2_dd(m: &Mat2) -> TwoFloat {
    TwoFloat::new_mul(m.get(0, 0), m.get(1, 1)) - TwoFloat::new_mul(m.get(0, 1), m.get(1, 0))
}

fn det4_dd(m: &Mat4) -> TwoFloat {
    let e = |r: usize, c: usize| m.0[r][c];
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        TwoFloat::new_mul(e(r0, c0), e(r1, c1)) - TwoFloat::new_mul(e(r0, c1), e(r1, c0))
    };
    minor(0, 1, 0, 1) * minor(2, 3, 2, 3) - minor(0, 1, 0, 2) * minor(2, 3, 1, 3)
        + minor(0, 1, 0, 3) * minor(2, 3, 1, 2)
        + minor(0, 1, 1, 2) * minor(2, 3, 0, 3)
        - minor(0, 1, 1, 3) * minor(2, 3, 0, 2)
        + minor(0, 1, 2, 3) * minor(2, 3, 0, 1)
}

/// Positive roots of `ζ⁴ − Δ ζ² + det V = 0`, ascending.
fn biquadratic_roots(delta: TwoFloat, det_v: TwoFloat) -> Result<(f64, f64)> {
    let disc = delta * delta - det_v * 4.0;
    if disc < -NEGATIVE_CLAMP {
        return Err(Error::numerical(
            "symplectic biquadratic has complex roots (unphysical covariance matrix)",
            f64::from(disc),
        ));
    }
    let root = if disc > 0.0 {
        disc.sqrt()
    } else {
        TwoFloat::from(0.0)
    };
    let hi2 = (delta + root) / 2.0;
    let lo2 = (delta - root) / 2.0;
    if lo2 < -NEGATIVE_CLAMP || hi2 <= 0.0 {
        return Err(Error::numerical(
            "symplectic biquadratic has a negative root (unphysical covariance matrix)",
            f64::from(lo2),
        ));
    }
    let lo = if lo2 > 0.0 {
        f64::from(lo2.sqrt())
    } else {
        0.0
    };
    Ok((lo, f64::from(hi2.sqrt())))
}

/// Ordinary (not transposed) symplectic eigenvalues, ascending.
pub fn symplectic_eigenvalues(m: &Mat4) -> Result<(f64, f64)> {
    let blocks = split(m);
    let delta = det2_dd(&blocks.a) + det2_dd(&blocks.b) + det2_dd(&blocks.c) * 2.0;
    biquadratic_roots(delta, det4_dd(m))
}

/// PT symplectic eigenvalues `(c1, c2)` from the biquadratic in block
/// determinants.
pub fn pt_symplectic_spectrum(v: &CovarianceMatrix) -> Result<(f64, f64)> {
    let blocks = block_decompose(v);
    let delta = det2_dd(&blocks.a) + det2_dd(&blocks.b) - det2_dd(&blocks.c) * 2.0;
    biquadratic_roots(delta, det4_dd(v.matrix()))
}

/// Independent route to the same pair: flip the sign of `p_B`
/// (`Ṽ = Λ V Λ`, `Λ = diag(1, 1, 1, −1)`) and read `±i c_j` off the
/// eigenvalues of `Ω Ṽ`.
pub fn pt_spectrum_oracle(v: &CovarianceMatrix) -> Result<(f64, f64)> {
    let lambda = Mat4::diag([1.0, 1.0, 1.0, -1.0]);
    let flipped = &(&lambda * v.matrix()) * &lambda;
    let k = &Mat4::<f64>::symplectic_form() * &flipped;
    let eig = gen_eigvals(&k)?;
    let scale = eig.spectral_radius().max(1.0);
    if eig.max_abs_real() > ORACLE_REAL_TOL * scale {
        return Err(Error::numerical(
            "Ω·Ṽ has eigenvalues off the imaginary axis (unphysical covariance matrix)",
            eig.max_abs_real(),
        ));
    }
    let mut upper: Vec<f64> = eig
        .roots()
        .iter()
        .map(|z| z.im)
        .filter(|&im| im > 0.0)
        .collect();
    if upper.len() != 2 {
        return Err(Error::numerical(
            "Ω·Ṽ spectrum is not two conjugate pairs",
            eig.max_abs_real(),
        ));
    }
    upper.sort_by(f64::total_cmp);
    Ok((upper[0], upper[1]))
}

/// Logarithmic negativity `E_N = F(c1) + F(c2)`, with the negativity
/// recovered from `E_N = log₂(1 + 2N)`.
pub fn log_negativity(v: &CovarianceMatrix) -> Result<EntanglementReport> {
    let (c1, c2) = pt_symplectic_spectrum(v)?;
    if c1 <= 0.0 {
        return Err(Error::numerical(
            "partially transposed symplectic eigenvalue vanished",
            c1,
        ));
    }
    Ok(EntanglementReport::from_spectrum(c1, c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::vacuum_covariance;
    use std::f64::consts::LOG2_E;

    fn tmsv(r: f64) -> CovarianceMatrix {
        let ch = 0.5 * (2.0 * r).cosh();
        let sh = 0.5 * (2.0 * r).sinh();
        CovarianceMatrix::new(Mat4::new([
            [ch, 0.0, sh, 0.0],
            [0.0, ch, 0.0, -sh],
            [sh, 0.0, ch, 0.0],
            [0.0, -sh, 0.0, ch],
        ]))
        .unwrap()
    }

    #[test]
    fn vacuum_blocks() {
        let b = block_decompose(&vacuum_covariance());
        assert_eq!(b.a, Mat2::new([[0.5, 0.0], [0.0, 0.5]]));
        assert_eq!(b.b, b.a);
        assert_eq!(b.c, Mat2::zeros());
        assert_eq!(&b.reassemble(), vacuum_covariance().matrix());
    }

    #[test]
    fn vacuum_spectrum_both_routes() {
        assert_eq!(
            pt_symplectic_spectrum(&vacuum_covariance()).unwrap(),
            (0.5, 0.5)
        );
        let (c1, c2) = pt_spectrum_oracle(&vacuum_covariance()).unwrap();
        assert!((c1 - 0.5).abs() < 1e-12 && (c2 - 0.5).abs() < 1e-12);
        let rep = log_negativity(&vacuum_covariance()).unwrap();
        assert_eq!(rep.log_neg, 0.0);
        assert_eq!(rep.negativity, 0.0);
    }

    #[test]
    fn tmsv_spectrum() {
        let v = tmsv(0.5);
        let e = std::f64::consts::E;
        let (c1, c2) = pt_symplectic_spectrum(&v).unwrap();
        assert!((c1 - 0.5 / e).abs() < 1e-12, "{c1}");
        assert!((c2 - 0.5 * e).abs() < 1e-12, "{c2}");
        let (o1, o2) = pt_spectrum_oracle(&v).unwrap();
        assert!((o1 - 0.5 / e).abs() < 1e-12 && (o2 - 0.5 * e).abs() < 1e-12);
        let rep = log_negativity(&v).unwrap();
        assert!((rep.log_neg - LOG2_E).abs() < 1e-12);
        // 1 + 2N = 2^{E_N} = e
        assert!((rep.negativity - (e - 1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn product_of_squeezed_states_is_separable() {
        let v = CovarianceMatrix::new(Mat4::diag([2.0, 0.125, 0.1, 2.5])).unwrap();
        let (c1, c2) = pt_symplectic_spectrum(&v).unwrap();
        assert!((c1 - 0.5).abs() < 1e-15 && (c2 - 0.5).abs() < 1e-15);
        assert_eq!(log_negativity(&v).unwrap().log_neg, 0.0);
    }

    #[test]
    fn ordinary_symplectic_spectrum_of_tmsv_is_pure() {
        let (n1, n2) = symplectic_eigenvalues(tmsv(0.7).matrix()).unwrap();
        assert!((n1 - 0.5).abs() < 1e-14 && (n2 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn thermal_state_has_larger_symplectic_eigenvalues() {
        let (n1, n2) = symplectic_eigenvalues(&Mat4::diag([1.5, 1.5, 0.75, 0.75])).unwrap();
        assert!((n1 - 0.75).abs() < 1e-15 && (n2 - 1.5).abs() < 1e-15);
    }

    #[test]
    fn log_neg_term_edges() {
        assert_eq!(log_neg_term(0.5), 0.0);
        assert_eq!(log_neg_term(3.0), 0.0);
        assert!((log_neg_term(0.25) - 1.0).abs() < 1e-15);
    }
}
