use num_complex::Complex64;
use twofloat::TwoFloat;

use super::{Mat4, Real};
use crate::error::{Error, Result};

pub const ROOT_MAX_ITER: usize = 500;

/// Roots closer than this (times `1 + ‖M‖∞`) are treated as one cluster.
/// Simultaneous iteration only resolves an m-fold root to ~ε^{1/m}; each
/// cluster is re-solved locally against the double-double polynomial.
pub const CLUSTER_RADIUS: f64 = 1e-6;

const POLISH_MAX_ITER: usize = 50;

/// The four eigenvalues of a real 4×4 matrix, canonically sorted by real
/// part and then imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexQuad {
    roots: [Complex64; 4],
    conjugate_defect: f64,
    residual: f64,
}

impl ComplexQuad {
    pub fn roots(&self) -> &[Complex64; 4] {
        &self.roots
    }

    /// Largest correction applied when pairing roots with their complex
    /// conjugates (or snapping lone roots onto the real axis).
    pub fn conjugate_defect(&self) -> f64 {
        self.conjugate_defect
    }

    /// Largest `|p(λ)|` over the unpolished roots.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.roots.iter().fold(0.0, |a, z| a.max(z.im.abs()))
    }

    pub fn max_abs_real(&self) -> f64 {
        self.roots.iter().fold(0.0, |a, z| a.max(z.re.abs()))
    }

    pub fn spectral_radius(&self) -> f64 {
        self.roots.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    /// Multiset equality within `tol`, relying on the canonical order.
    pub fn approx_eq(&self, other: &[Complex64], tol: f64) -> bool {
        let mut want: Vec<Complex64> = other.to_vec();
        want.sort_by(canonical_order);
        want.len() == 4
            && self
                .roots
                .iter()
                .zip(&want)
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

fn canonical_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Coefficients `[c0, c1, c2, c3]` of the monic characteristic polynomial
/// `λ⁴ + c3 λ³ + c2 λ² + c1 λ + c0` by the Faddeev–LeVerrier recursion.
pub fn char_poly<T: Real>(m: &Mat4<T>) -> [T; 4] {
    let id = Mat4::<T>::identity();
    let mut c: [T; 5] = std::array::from_fn(|_| T::zero());
    c[4] = T::one();
    let mut mk = Mat4::<T>::zeros();
    for k in 1..=4 {
        mk = &(m * &mk) + &id.scale(c[5 - k].clone());
        c[4 - k] = -(m * &mk).trace().div_f64(k as f64);
    }
    let [c0, c1, c2, c3, _] = c;
    [c0, c1, c2, c3]
}

fn poly_eval(c: &[f64; 4], z: Complex64) -> Complex64 {
    (((z + c[3]) * z + c[2]) * z + c[1]) * z + c[0]
}

/// `k`-th derivative of the monic quartic at `z`.
fn poly_derivative(c: &[f64; 4], k: usize, z: Complex64) -> Complex64 {
    let a = [c[0], c[1], c[2], c[3], 1.0];
    let mut acc = Complex64::new(0.0, 0.0);
    for j in (k..=4).rev() {
        let falling: f64 = ((j - k + 1)..=j).map(|i| i as f64).product();
        acc = acc * z + a[j] * falling;
    }
    acc
}

/// Complex double-double value.
#[derive(Clone, Copy)]
struct DdComplex {
    re: TwoFloat,
    im: TwoFloat,
}

impl DdComplex {
    fn mul(self, o: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }
}

/// `p(z)` with double-double coefficients and arithmetic.
fn poly_eval_dd(c: &[TwoFloat; 4], z: Complex64) -> Complex64 {
    let zz = DdComplex {
        re: TwoFloat::from(z.re),
        im: TwoFloat::from(z.im),
    };
    let mut acc = DdComplex {
        re: TwoFloat::from(1.0),
        im: TwoFloat::from(0.0),
    };
    for k in (0..4).rev() {
        acc = acc.mul(zz);
        acc.re += c[k];
    }
    acc.to_c64()
}

/// Newton iteration for a root of `f` with derivative `df`.
fn newton(
    start: Complex64,
    f: impl Fn(Complex64) -> Complex64,
    df: impl Fn(Complex64) -> Complex64,
) -> Complex64 {
    let mut z = start;
    for _ in 0..POLISH_MAX_ITER {
        let d = df(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = f(z) / d;
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    if z.is_finite() {
        z
    } else {
        start
    }
}

/// Eigenvalues of a general real 4×4 matrix: characteristic polynomial plus
/// Durand–Kerner simultaneous iteration started on the circle of radius
/// `1 + ‖M‖∞`.
///
/// Roots are accepted when `|p(λ)| < 1e-12 · (1 + ‖M‖∞⁴)`; otherwise a
/// numerical failure carrying the worst residual is returned.
pub fn gen_eigvals(m: &Mat4) -> Result<ComplexQuad> {
    m.ensure_finite("gen_eigvals")?;
    let norm = m.norm_inf();
    let c_dd = char_poly(&Mat4::<TwoFloat>::from_f64(m));
    let c: [f64; 4] = std::array::from_fn(|k| f64::from(c_dd[k]));

    let radius = 1.0 + norm;
    let mut z: [Complex64; 4] = std::array::from_fn(|k| {
        Complex64::from_polar(radius, 0.4 + std::f64::consts::FRAC_PI_2 * k as f64)
    });

    for _ in 0..ROOT_MAX_ITER {
        let mut max_step = 0.0f64;
        for k in 0..4 {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = poly_eval(&c, z[k]) / denom;
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        let size = z.iter().fold(0.0f64, |a, w| a.max(w.norm()));
        if max_step <= 4.0 * f64::EPSILON * (1.0 + size) {
            break;
        }
    }

    let residual = z
        .iter()
        .fold(0.0f64, |a, &w| a.max(poly_eval(&c, w).norm()));
    let bound = 1e-12 * (1.0 + norm.powi(4));
    if !(residual < bound) {
        return Err(Error::numerical(
            "characteristic-polynomial root iteration did not converge",
            residual,
        ));
    }

    refine_clusters(&mut z, &c, &c_dd, CLUSTER_RADIUS * (1.0 + norm));
    let conjugate_defect = pair_conjugates(&mut z);
    z.sort_by(canonical_order);
    Ok(ComplexQuad {
        roots: z,
        conjugate_defect,
        residual,
    })
}

/// Groups roots lying within `radius` of each other and re-solves each
/// group locally: simple roots by Newton on `p`, pairs by locating the
/// critical point of `p` and splitting with the local quadratic model,
/// larger groups as a simple root of `p^{(m−1)}`.
fn refine_clusters(z: &mut [Complex64; 4], c: &[f64; 4], c_dd: &[TwoFloat; 4], radius: f64) {
    let mut label = [0usize, 1, 2, 3];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (z[i] - z[j]).norm() <= radius {
                let (from, to) = (label[j].max(label[i]), label[j].min(label[i]));
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let p = |w| poly_eval_dd(c_dd, w);
    for g in 0..4 {
        let members: Vec<usize> = (0..4).filter(|&i| label[i] == g).collect();
        let m = members.len();
        if m == 0 {
            continue;
        }
        let mean = members.iter().map(|&i| z[i]).sum::<Complex64>() / m as f64;
        let accept = |w: Complex64| if (w - mean).norm() <= radius { w } else { mean };
        match m {
            1 => z[g] = accept(newton(z[g], p, |w| poly_derivative(c, 1, w))),
            2 => {
                let center = accept(newton(
                    mean,
                    |w| poly_derivative(c, 1, w),
                    |w| poly_derivative(c, 2, w),
                ));
                let curvature = poly_derivative(c, 2, center);
                let offset = if curvature.norm() > 0.0 {
                    (-2.0 * p(center) / curvature).sqrt()
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let offset = if offset.is_finite() && offset.norm() <= radius {
                    offset
                } else {
                    Complex64::new(0.0, 0.0)
                };
                z[members[0]] = center + offset;
                z[members[1]] = center - offset;
            }
            _ => {
                let root = accept(newton(
                    mean,
                    |w| poly_derivative(c, m - 1, w),
                    |w| poly_derivative(c, m, w),
                ));
                for &i in &members {
                    z[i] = root;
                }
            }
        }
    }
}

/// Pairs every root with the nearest conjugate of another root (or with
/// itself, meaning real) and enforces exact conjugacy. Returns the largest
/// correction made.
fn pair_conjugates(z: &mut [Complex64; 4]) -> f64 {
    let mut used = [false; 4];
    let mut defect = 0.0f64;
    for i in 0..4 {
        if used[i] {
            continue;
        }
        used[i] = true;
        let self_cost = 2.0 * z[i].im.abs();
        let partner = (0..4)
            .filter(|&j| !used[j])
            .map(|j| (j, (z[i] - z[j].conj()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, cost)) if cost < self_cost => {
                used[j] = true;
                let avg = (z[i] + z[j].conj()) / 2.0;
                defect = defect.max(cost / 2.0);
                // keep the upper half-plane member first; ordering is fixed later
                z[i] = avg;
                z[j] = avg.conj();
            }
            _ => {
                defect = defect.max(z[i].im.abs());
                z[i].im = 0.0;
            }
        }
    }
    defect
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_spectrum() {
        let q = gen_eigvals(&Mat4::diag([1.0, -1.0, 2.0, -2.0])).unwrap();
        assert!(q.approx_eq(&[c(1., 0.), c(-1., 0.), c(2., 0.), c(-2., 0.)], 1e-12));
    }

    #[test]
    fn rotation_generator_double_pair() {
        let q = gen_eigvals(&Mat4::symplectic_form()).unwrap();
        assert!(
            q.approx_eq(&[c(0., 1.), c(0., -1.), c(0., 1.), c(0., -1.)], 1e-12),
            "{q:?}"
        );
    }

    #[test]
    fn zero_matrix_has_quadruple_zero() {
        let q = gen_eigvals(&Mat4::zeros()).unwrap();
        assert!(q.spectral_radius() < 1e-12);
    }

    #[test]
    fn char_poly_of_diagonal() {
        // (λ-1)(λ-2)(λ-3)(λ-4) = λ⁴ - 10λ³ + 35λ² - 50λ + 24
        let p = char_poly(&Mat4::<f64>::diag([1.0, 2.0, 3.0, 4.0]));
        assert_eq!(p, [24.0, -50.0, 35.0, -10.0]);
    }

    #[test]
    fn companion_matrix_complex_roots() {
        // roots 1±2i and -3, 0.5: p = (λ²-2λ+5)(λ+3)(λ-0.5)
        //   = λ⁴ + 0.5λ³ - 1.5λ² + 15.5λ - 7.5
        let m = Mat4::new([
            [-0.5, 1.5, -15.5, 7.5],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ]);
        let q = gen_eigvals(&m).unwrap();
        assert!(
            q.approx_eq(&[c(1., 2.), c(1., -2.), c(-3., 0.), c(0.5, 0.)], 1e-10),
            "{q:?}"
        );
        assert!(q.conjugate_defect() < 1e-9);
    }

    #[test]
    fn derivative_coefficients() {
        let c = [24.0, -50.0, 35.0, -10.0];
        let z = Complex64::new(1.5, 0.0);
        assert_eq!(poly_derivative(&c, 0, z), poly_eval(&c, z));
        // p''' = 24λ - 60, p'''' = 24
        assert_eq!(poly_derivative(&c, 3, z).re, -24.0);
        assert_eq!(poly_derivative(&c, 4, z).re, 24.0);
    }

    #[test]
    fn double_real_roots_resolved_to_full_precision() {
        let q = gen_eigvals(&Mat4::diag([0.7, 0.7, -0.3, -0.3])).unwrap();
        assert!(
            q.approx_eq(&[c(0.7, 0.), c(0.7, 0.), c(-0.3, 0.), c(-0.3, 0.)], 1e-14),
            "{q:?}"
        );
    }

    #[test]
    fn nearly_degenerate_pair_is_split() {
        let gap = 1e-7;
        let q = gen_eigvals(&Mat4::diag([0.5 - gap, 0.5 + gap, 2.0, -1.0])).unwrap();
        assert!(
            q.approx_eq(
                &[c(0.5 - gap, 0.), c(0.5 + gap, 0.), c(2., 0.), c(-1., 0.)],
                1e-13
            ),
            "{q:?}"
        );
    }

    #[test]
    fn nonfinite_rejected() {
        let mut m = Mat4::<f64>::zeros();
        m.0[0][0] = f64::INFINITY;
        assert!(matches!(gen_eigvals(&m), Err(Error::InvalidInput(_))));
    }
}
