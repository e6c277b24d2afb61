//! Device parameters and the quadrature drift matrix.
//!
//! Quadratures are ordered `(x_A, p_A, x_B, p_B)`; each complex coupling
//! `g_j = |g_j| e^{iφ_j}` (j = L, A, B) enters through
//! `S_j = 2|g_j| sin φ_j` and `C_j = 2|g_j| cos φ_j`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matkernel::{gen_eigvals, ComplexQuad, Mat4};

/// Reduce a phase to `[0, 2π)`.
pub fn canonical_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative input
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Coupling magnitudes `|g_L|, |g_A|, |g_B|` (inverse length).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingMagnitudes {
    pub gl: f64,
    pub ga: f64,
    pub gb: f64,
}

impl CouplingMagnitudes {
    pub fn new(gl: f64, ga: f64, gb: f64) -> Result<Self> {
        for (name, v) in [("gl_mag", gl), ("ga_mag", ga), ("gb_mag", gb)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(CouplingMagnitudes { gl, ga, gb })
    }

    /// Symmetric coupler below threshold: `|g_L| = 2`, `|g_A| = |g_B| = 0.2`.
    pub const BELOW_THRESHOLD: CouplingMagnitudes = CouplingMagnitudes {
        gl: 2.0,
        ga: 0.2,
        gb: 0.2,
    };

    /// Symmetric coupler above threshold: `|g_L| = 0.15`, `|g_A| = |g_B| = 0.2`.
    pub const ABOVE_THRESHOLD: CouplingMagnitudes = CouplingMagnitudes {
        gl: 0.15,
        ga: 0.2,
        gb: 0.2,
    };
}

/// Three coupling magnitudes and three phases; phases are kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerParams {
    mags: CouplingMagnitudes,
    phi_l: f64,
    phi_a: f64,
    phi_b: f64,
}

impl CouplerParams {
    pub fn new(gl: f64, ga: f64, gb: f64, phi_l: f64, phi_a: f64, phi_b: f64) -> Result<Self> {
        let mags = CouplingMagnitudes::new(gl, ga, gb)?;
        Self::from_magnitudes(mags, phi_l, phi_a, phi_b)
    }

    pub fn from_magnitudes(
        mags: CouplingMagnitudes,
        phi_l: f64,
        phi_a: f64,
        phi_b: f64,
    ) -> Result<Self> {
        for (name, v) in [("phi_l", phi_l), ("phi_a", phi_a), ("phi_b", phi_b)] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(CouplerParams {
            mags,
            phi_l: canonical_phase(phi_l),
            phi_a: canonical_phase(phi_a),
            phi_b: canonical_phase(phi_b),
        })
    }

    /// Canonical realization of an effective phase difference:
    /// `φ_A = Δφ`, `φ_B = φ_L = 0`.
    pub fn with_effective_phase(mags: CouplingMagnitudes, dphi: f64) -> Result<Self> {
        Self::from_magnitudes(mags, 0.0, dphi, 0.0)
    }

    pub fn magnitudes(&self) -> CouplingMagnitudes {
        self.mags
    }
    pub fn gl_mag(&self) -> f64 {
        self.mags.gl
    }
    pub fn ga_mag(&self) -> f64 {
        self.mags.ga
    }
    pub fn gb_mag(&self) -> f64 {
        self.mags.gb
    }
    pub fn phi_l(&self) -> f64 {
        self.phi_l
    }
    pub fn phi_a(&self) -> f64 {
        self.phi_a
    }
    pub fn phi_b(&self) -> f64 {
        self.phi_b
    }

    pub fn g_l(&self) -> Complex64 {
        Complex64::from_polar(self.mags.gl, self.phi_l)
    }
    pub fn g_a(&self) -> Complex64 {
        Complex64::from_polar(self.mags.ga, self.phi_a)
    }
    pub fn g_b(&self) -> Complex64 {
        Complex64::from_polar(self.mags.gb, self.phi_b)
    }
}

/// The drift matrix `M` of `dξ/dz = M ξ`, together with its source parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftMatrix {
    matrix: Mat4,
    params: CouplerParams,
}

impl DriftMatrix {
    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }
    pub fn params(&self) -> &CouplerParams {
        &self.params
    }
}

fn s_c(mag: f64, phi: f64) -> (f64, f64) {
    (2.0 * mag * phi.sin(), 2.0 * mag * phi.cos())
}

pub fn build_drift(p: &CouplerParams) -> DriftMatrix {
    let (sa, ca) = s_c(p.mags.ga, p.phi_a);
    let (sb, cb) = s_c(p.mags.gb, p.phi_b);
    let (sl, cl) = s_c(p.mags.gl, p.phi_l);
    let matrix = Mat4::new([
        [-sa, ca, sl, -cl],
        [ca, sa, cl, sl],
        [-sl, -cl, -sb, cb],
        [cl, -sl, cb, sb],
    ]);
    DriftMatrix { matrix, params: *p }
}

/// `Δφ = φ_A − φ_B + 2φ_L` reduced to `[0, 2π)`.
pub fn effective_phase(p: &CouplerParams) -> f64 {
    canonical_phase(p.phi_a - p.phi_b + 2.0 * p.phi_l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeKind {
    BelowThreshold,
    AboveThreshold,
    AtThreshold,
}

impl RegimeKind {
    pub fn label(&self) -> &'static str {
        match self {
            RegimeKind::BelowThreshold => "below-threshold",
            RegimeKind::AboveThreshold => "above-threshold",
            RegimeKind::AtThreshold => "at-threshold",
        }
    }
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Operating regime together with the threshold margin
/// `2|g_L| − |g_A e^{iφ_A} + g_B e^{iφ_B}|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub kind: RegimeKind,
    pub margin: f64,
}

/// Band around zero margin that counts as the threshold itself.
pub fn threshold_tolerance(p: &CouplerParams) -> f64 {
    1e-12 * (1.0 + 2.0 * p.mags.gl + p.mags.ga + p.mags.gb)
}

pub fn classify_regime(p: &CouplerParams) -> Regime {
    let margin = 2.0 * p.mags.gl - (p.g_a() + p.g_b()).norm();
    let tol = threshold_tolerance(p);
    let kind = if margin > tol {
        RegimeKind::BelowThreshold
    } else if margin < -tol {
        RegimeKind::AboveThreshold
    } else {
        RegimeKind::AtThreshold
    };
    Regime { kind, margin }
}

/// Imaginary parts below `SPECTRAL_IMAG_TOL · (1 + ‖M‖∞)` count as real.
pub const SPECTRAL_IMAG_TOL: f64 = 1e-9;

/// A spectral radius below `SPECTRAL_DEGENERACY_TOL · (1 + ‖M‖∞)` is read as
/// the collapsed (nilpotent) spectrum of the symmetric threshold. A four-fold
/// zero root is only resolved to about ε^{1/4} by polynomial root finding.
pub const SPECTRAL_DEGENERACY_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRegime {
    pub kind: RegimeKind,
    pub eigenvalues: ComplexQuad,
}

/// Regime read off the drift spectrum: oscillatory (some eigenvalue off the
/// real axis) is below threshold, purely real is above, and a collapsed
/// spectrum is the threshold.
pub fn classify_regime_spectral(p: &CouplerParams) -> Result<SpectralRegime> {
    let drift = build_drift(p);
    let scale = 1.0 + drift.matrix.norm_inf();
    let eigenvalues = gen_eigvals(&drift.matrix)?;
    let kind = if eigenvalues.spectral_radius() <= SPECTRAL_DEGENERACY_TOL * scale {
        RegimeKind::AtThreshold
    } else if eigenvalues.max_abs_imag() > SPECTRAL_IMAG_TOL * scale {
        RegimeKind::BelowThreshold
    } else {
        RegimeKind::AboveThreshold
    };
    Ok(SpectralRegime { kind, eigenvalues })
}
