//! Propagation of the two-mode Gaussian state and the generalized squeeze
//! variance.
//!
//! Everything is generic over [`Real`] so the same code can be run in
//! [`Extended`](crate::matkernel::Extended) precision when the amplification
//! is too strong for `f64` to resolve the symplectic identities.

use crate::coupler::{build_drift, CouplerParams, DriftMatrix};
use crate::entanglement::symplectic_eigenvalues;
use crate::error::{Error, Result};
use crate::matkernel::{expm, sym_eigvals, Mat4, Real};

/// Relative asymmetry tolerated before a covariance matrix is rejected.
pub const COVARIANCE_SYMMETRY_TOL: f64 = 1e-10;

/// Allowed undershoot of the uncertainty bound `ν ≥ 1/2`.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Vacuum quadrature variance.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// `S(z) = exp(M z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator<T: Real = f64> {
    matrix: Mat4<T>,
    z: f64,
}

impl<T: Real> Propagator<T> {
    pub fn matrix(&self) -> &Mat4<T> {
        &self.matrix
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// `max |S Ω Sᵀ − Ω|`, evaluated in the propagator's own precision.
    pub fn symplectic_defect(&self) -> f64 {
        let om = Mat4::<T>::symplectic_form();
        let sos = &(&self.matrix * &om) * &self.matrix.transpose();
        (&sos - &om).max_abs()
    }
}

pub fn propagator(drift: &DriftMatrix, z: f64) -> Result<Propagator> {
    propagator_in(drift, z)
}

/// [`propagator`] in an arbitrary scalar type. The drift entries are
/// converted exactly, so the Hamiltonian structure of `M` carries over.
pub fn propagator_in<T: Real>(drift: &DriftMatrix, z: f64) -> Result<Propagator<T>> {
    if !(z.is_finite() && z >= 0.0) {
        return Err(Error::invalid(format!(
            "length z must be finite and >= 0, got {z}"
        )));
    }
    let mz = Mat4::<T>::from_f64(drift.matrix()).scale(T::from_f64(z));
    let matrix = expm(&mz, T::EXPM_TOL)?;
    Ok(Propagator { matrix, z })
}

/// Symmetric, physical 4×4 covariance matrix (vacuum variance 1/2).
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix<T: Real = f64> {
    matrix: Mat4<T>,
}

impl<T: Real> CovarianceMatrix<T> {
    /// Validates symmetry and the uncertainty principle (both symplectic
    /// eigenvalues at least `1/2 − PHYSICALITY_TOL`). Small asymmetry is
    /// averaged away.
    pub fn new(matrix: Mat4<T>) -> Result<Self> {
        matrix.ensure_finite("covariance matrix")?;
        let scale = matrix.max_abs().max(1.0);
        let asym = matrix.asymmetry();
        if asym > COVARIANCE_SYMMETRY_TOL * scale {
            return Err(Error::invalid(format!(
                "covariance matrix not symmetric (max |V_ij - V_ji| = {asym:e})"
            )));
        }
        let matrix = matrix.symmetrized();
        let (nu1, _) = symplectic_eigenvalues(&matrix.map_f64()).map_err(|e| match e {
            Error::NumericalFailure { what, .. } => {
                Error::invalid(format!("covariance matrix is unphysical: {what}"))
            }
            other => other,
        })?;
        if nu1 < VACUUM_VARIANCE - PHYSICALITY_TOL {
            return Err(Error::invalid(format!(
                "covariance matrix is unphysical: smallest symplectic eigenvalue {nu1} < 1/2"
            )));
        }
        Ok(CovarianceMatrix { matrix })
    }

    pub fn matrix(&self) -> &Mat4<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat4<T> {
        self.matrix
    }

    pub fn det(&self) -> T {
        self.matrix.det()
    }

    pub fn to_f64(&self) -> CovarianceMatrix<f64> {
        CovarianceMatrix {
            matrix: self.matrix.map_f64(),
        }
    }
}

pub fn vacuum_covariance() -> CovarianceMatrix {
    vacuum_covariance_in()
}

pub fn vacuum_covariance_in<T: Real>() -> CovarianceMatrix<T> {
    CovarianceMatrix {
        matrix: Mat4::diag(std::array::from_fn(|_| T::from_f64(VACUUM_VARIANCE))),
    }
}

/// `V(z) = S V0 Sᵀ`, symmetrized.
pub fn evolve<T: Real>(v0: &CovarianceMatrix<T>, s: &Propagator<T>) -> Result<CovarianceMatrix<T>> {
    let out = &(&s.matrix * &v0.matrix) * &s.matrix.transpose();
    let scale = out.max_abs().max(1.0);
    let asym = out.asymmetry();
    if asym > COVARIANCE_SYMMETRY_TOL * scale {
        return Err(Error::numerical(
            "evolved covariance matrix lost symmetry",
            asym / scale,
        ));
    }
    if !out.is_finite() {
        return Err(Error::numerical(
            "evolved covariance matrix overflowed",
            f64::INFINITY,
        ));
    }
    Ok(CovarianceMatrix {
        matrix: out.symmetrized(),
    })
}

/// Smallest eigenvalue of the covariance matrix; the state is squeezed
/// (nonclassical) iff this is below 1/2.
pub fn squeeze_variance(v: &CovarianceMatrix) -> Result<f64> {
    Ok(sym_eigvals(&v.matrix)?[0])
}

/// Vacuum input propagated through a coupler of length `z`.
pub fn evolved_vacuum(p: &CouplerParams, z: f64) -> Result<CovarianceMatrix> {
    let s = propagator(&build_drift(p), z)?;
    evolve(&vacuum_covariance(), &s)
}

pub fn evolved_vacuum_in<T: Real>(p: &CouplerParams, z: f64) -> Result<CovarianceMatrix<T>> {
    let s = propagator_in::<T>(&build_drift(p), z)?;
    evolve(&vacuum_covariance_in::<T>(), &s)
}
