use super::Mat4;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm, relative to the matrix Frobenius norm, at
/// which the sweeps stop.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Relative asymmetry accepted (and averaged away) on input.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Eigenvalues of a real symmetric 4×4 matrix in nondecreasing order, by
/// cyclic Jacobi rotations.
///
/// The input is symmetrized as `(V + Vᵀ)/2` first; an asymmetry larger than
/// `SYMMETRY_TOL · max(1, max|V_ij|)` is rejected.
pub fn sym_eigvals(v: &Mat4) -> Result<[f64; 4]> {
    v.ensure_finite("sym_eigvals")?;
    let scale = v.max_abs().max(1.0);
    let asym = v.asymmetry();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::invalid(format!(
            "sym_eigvals: matrix not symmetric (max |a_ij - a_ji| = {asym:e})"
        )));
    }
    let mut a = v.symmetrized().0;

    let frob = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = JACOBI_OFF_TOL * frob;

    let off_norm = |a: &[[f64; 4]; 4]| {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::numerical(
                "Jacobi sweeps did not converge",
                off_norm(&a),
            ));
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
    }

    let mut eig = [a[0][0], a[1][1], a[2][2], a[3][3]];
    eig.sort_by(|x, y| x.total_cmp(y));
    Ok(eig)
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut [[f64; 4]; 4], p: usize, q: usize) {
    let apq = a[p][q];
    if apq == 0.0 {
        return;
    }
    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let app = a[p][p];
    let aqq = a[q][q];
    a[p][p] = app - t * apq;
    a[q][q] = aqq + t * apq;
    a[p][q] = 0.0;
    a[q][p] = 0.0;
    for r in 0..4 {
        if r == p || r == q {
            continue;
        }
        let arp = a[r][p];
        let arq = a[r][q];
        a[r][p] = c * arp - s * arq;
        a[p][r] = a[r][p];
        a[r][q] = s * arp + c * arq;
        a[q][r] = a[r][q];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_vacuum() {
        let e = sym_eigvals(&Mat4::diag([0.5; 4])).unwrap();
        assert_eq!(e, [0.5; 4]);
    }

    #[test]
    fn rotated_diagonal_recovers_spectrum() {
        // orthogonal Q from two Givens rotations in different planes
        let (c1, s1) = (0.3f64.cos(), 0.3f64.sin());
        let (c2, s2) = (1.1f64.cos(), 1.1f64.sin());
        let g1 = Mat4::new([
            [c1, -s1, 0.0, 0.0],
            [s1, c1, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        let g2 = Mat4::new([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, c2, 0.0, -s2],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, s2, 0.0, c2],
        ]);
        let q = &g1 * &g2;
        let v = &(&q * &Mat4::diag([3.0, 1.0, 4.0, 2.0])) * &q.transpose();
        let e = sym_eigvals(&v).unwrap();
        for (got, want) in e.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((got - want).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let mut v = Mat4::diag([1.0; 4]);
        v.0[0][3] = 1e-6;
        assert!(matches!(sym_eigvals(&v), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn tiny_asymmetry_is_absorbed() {
        let mut v = Mat4::diag([1.0, 2.0, 3.0, 4.0]);
        v.0[0][1] = 1e-12;
        assert!(sym_eigvals(&v).is_ok());
    }
}
