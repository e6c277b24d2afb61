//! Tuning the effective phase difference for maximal entanglement.
//!
//! For fixed coupling magnitudes the logarithmic negativity depends on the
//! phases only through `Δφ`, and it is symmetric under `Δφ → 2π − Δφ`. Each
//! length `z` is optimized independently: a dense uniform scan over
//! `[0, 2π)` picks the best lobe, then golden-section search refines inside
//! the bracketing grid cell.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::coupler::{canonical_phase, CouplerParams, CouplingMagnitudes};
use crate::dynamics::evolved_vacuum;
use crate::entanglement::log_negativity;
use crate::error::{Error, Result};

pub const DEFAULT_COARSE_N: usize = 256;
pub const DEFAULT_REFINE_TOL: f64 = 1e-6;
pub const MIN_COARSE_N: usize = 16;

/// Coarse-grid values within this relative distance of the running best
/// count as ties and resolve toward the smaller phase.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseOptimum {
    pub z: f64,
    pub dphi_opt: f64,
    pub en_max: f64,
    pub evaluations: usize,
}

/// Logarithmic negativity of the evolved vacuum with `Δφ` realized as
/// `φ_A = Δφ`, `φ_B = φ_L = 0`.
pub fn en_of_phase(mags: CouplingMagnitudes, dphi: f64, z: f64) -> Result<f64> {
    let p = CouplerParams::with_effective_phase(mags, dphi)?;
    en_of_params(&p, z)
}

pub fn en_of_params(p: &CouplerParams, z: f64) -> Result<f64> {
    Ok(log_negativity(&evolved_vacuum(p, z)?)?.log_neg)
}

fn is_tie(candidate: f64, best: f64) -> bool {
    candidate <= best + TIE_TOL * best.abs().max(1.0)
}

/// Circular distance between two phases.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = canonical_phase(a - b);
    d.min(TAU - d)
}

pub fn optimize_phase(
    mags: CouplingMagnitudes,
    z: f64,
    coarse_n: usize,
    refine_tol: f64,
) -> Result<PhaseOptimum> {
    optimize_phase_with(|d| en_of_phase(mags, d, z), z, coarse_n, refine_tol)
}

/// [`optimize_phase`] over an arbitrary objective `Δφ ↦ E_N`. The objective
/// receives phases that may lie slightly outside `[0, 2π)`.
pub fn optimize_phase_with(
    mut objective: impl FnMut(f64) -> Result<f64>,
    z: f64,
    coarse_n: usize,
    refine_tol: f64,
) -> Result<PhaseOptimum> {
    if coarse_n < MIN_COARSE_N {
        return Err(Error::invalid(format!(
            "coarse_n must be at least {MIN_COARSE_N}, got {coarse_n}"
        )));
    }
    if !(refine_tol > 0.0 && refine_tol <= 1e-3) {
        return Err(Error::invalid(format!(
            "refine_tol must lie in (0, 1e-3], got {refine_tol}"
        )));
    }

    let step = TAU / coarse_n as f64;
    let mut evaluations = 0;
    let mut best_k = 0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..coarse_n {
        let value = objective(k as f64 * step)?;
        evaluations += 1;
        if k == 0 || !is_tie(value, best) {
            best_k = k;
            best = value;
        }
    }
    let center = best_k as f64 * step;

    // golden-section maximization on the cell bracketing the grid maximum
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (center - step, center + step);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = objective(x1)?;
    let mut f2 = objective(x2)?;
    evaluations += 2;
    while b - a >= refine_tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2)?;
        }
        evaluations += 1;
    }
    let refined = 0.5 * (a + b);
    let refined_value = objective(refined)?;
    evaluations += 1;

    let (dphi_opt, en_max) = if is_tie(refined_value, best) {
        (center, best)
    } else {
        (canonical_phase(refined), refined_value)
    };
    Ok(PhaseOptimum {
        z,
        dphi_opt,
        en_max,
        evaluations,
    })
}

/// Independent per-length optimization; output follows the grid order.
pub fn optimize_over_z(
    mags: CouplingMagnitudes,
    z_grid: &[f64],
    coarse_n: usize,
    refine_tol: f64,
) -> Result<Vec<PhaseOptimum>> {
    if z_grid.is_empty() {
        return Err(Error::invalid("z grid is empty"));
    }
    if z_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("z grid must be strictly ascending"));
    }
    z_grid
        .par_iter()
        .map(|&z| optimize_phase(mags, z, coarse_n, refine_tol))
        .collect()
}

/// Length of the initial stretch (over `z > 0`) on which `Δφ = 0` stays
/// optimal: the last such grid length, or `None` if the first positive
/// length already prefers another phase.
pub fn onset_length(optima: &[PhaseOptimum], tol: f64) -> Option<f64> {
    let mut last = None;
    for o in optima.iter().filter(|o| o.z > 0.0) {
        if phase_distance(o.dphi_opt, 0.0) <= tol {
            last = Some(o.z);
        } else {
            break;
        }
    }
    last
}

/// Mean and (population) standard deviation of `Δφ_opt` over the last 20%
/// of the grid.
pub fn tail_statistics(optima: &[PhaseOptimum]) -> Option<(f64, f64)> {
    let n = optima.len();
    let tail = (n as f64 * 0.2).ceil() as usize;
    if tail == 0 {
        return None;
    }
    let values: Vec<f64> = optima[n - tail..].iter().map(|o| o.dphi_opt).collect();
    let mean = values.iter().sum::<f64>() / tail as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / tail as f64;
    Some((mean, var.sqrt()))
}
