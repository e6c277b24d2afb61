use super::{Mat4, Real};
use crate::error::{Error, Result};

/// Degree of the truncated Taylor series evaluated after scaling.
pub const TAYLOR_ORDER: u32 = 18;

/// Upper bound on the number of squarings; `‖M‖∞ ≤ 2^MAX_SQUARINGS` covers
/// anything that does not overflow on exponentiation anyway.
const MAX_SQUARINGS: u32 = 200;

/// Matrix exponential by scaling and squaring around a fixed-order Taylor
/// polynomial.
///
/// With `θ = ‖M‖∞ / 2^s`, the truncation remainder of the degree-18 series is
/// bounded by `θ^19 / 19! · 1/(1 − θ/20)`. Squaring `s` times multiplies the
/// relative error by at most `2^s`, so `s` is the smallest integer with
/// `2^s · remainder(θ) ≤ tol`.
///
/// `tol` must lie in `(0, 1e-6]`.
pub fn expm<T: Real>(m: &Mat4<T>, tol: f64) -> Result<Mat4<T>> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::invalid(format!(
            "expm tolerance {tol} outside (0, 1e-6]"
        )));
    }
    m.ensure_finite("expm")?;

    let norm = m.norm_inf();
    let s = squarings_for(norm, tol);
    let a = if s == 0 {
        m.clone()
    } else {
        m.scale(T::one() / T::from_f64(2f64.powi(s as i32)))
    };

    // Horner: I + A(I + A/2(I + A/3(...)))
    let id = Mat4::<T>::identity();
    let mut p = id.clone();
    for k in (1..=TAYLOR_ORDER).rev() {
        let inv_k = T::one() / T::from_f64(k as f64);
        p = &id + &(&a * &p).scale(inv_k);
    }
    for _ in 0..s {
        p = &p * &p;
    }
    if !p.is_finite() {
        return Err(Error::numerical("expm overflowed", norm));
    }
    Ok(p)
}

fn remainder_bound(theta: f64) -> f64 {
    let m = TAYLOR_ORDER as f64;
    if theta >= m + 2.0 {
        return f64::INFINITY;
    }
    let mut term = 1.0;
    for k in 1..=(TAYLOR_ORDER + 1) {
        term *= theta / k as f64;
    }
    term / (1.0 - theta / (m + 2.0))
}

fn squarings_for(norm: f64, tol: f64) -> u32 {
    if norm == 0.0 {
        return 0;
    }
    (0..MAX_SQUARINGS)
        .find(|&s| {
            let scale = 2f64.powi(s as i32);
            remainder_bound(norm / scale) * scale <= tol
        })
        .unwrap_or(MAX_SQUARINGS)
}
