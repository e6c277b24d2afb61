use std::ops::{Add, Mul, Sub};

use super::Real;
use crate::error::{Error, Result};

/// Real 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const fn new(rows: [[f64; 2]; 2]) -> Self {
        Mat2(rows)
    }

    pub fn zeros() -> Self {
        Mat2([[0.0; 2]; 2])
    }

    pub fn identity() -> Self {
        Mat2([[1.0, 0.0], [0.0, 1.0]])
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.0[r][c]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Mat2(out)
    }
}

/// Real 4×4 matrix, row-major, generic over the scalar type.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat4<T = f64>(pub [[T; 4]; 4]);

impl<T: Real> Mat4<T> {
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn zeros() -> Self {
        Self::from_fn(|_, _| T::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(d: [T; 4]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    /// `J ⊕ J` with `J = [[0, 1], [-1, 0]]`: the symplectic form in
    /// `(x_A, p_A, x_B, p_B)` ordering.
    pub fn symplectic_form() -> Self {
        let mut m = Self::zeros();
        m.0[0][1] = T::one();
        m.0[1][0] = -T::one();
        m.0[2][3] = T::one();
        m.0[3][2] = -T::one();
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.0[r][c]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn scale(&self, k: T) -> Self {
        Self::from_fn(|i, j| self.0[i][j].clone() * k.clone())
    }

    pub fn map_f64(&self) -> Mat4<f64> {
        Mat4::from_fn(|i, j| self.0[i][j].to_f64())
    }

    pub fn from_f64(m: &Mat4<f64>) -> Self {
        Self::from_fn(|i, j| T::from_f64(m.0[i][j]))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Largest entry magnitude, in `f64`.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0, |acc: f64, x| acc.max(x.to_f64().abs()))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|row| row.iter().map(|x| x.to_f64().abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> T {
        (1..4).fold(self.0[0][0].clone(), |acc, i| acc + self.0[i][i].clone())
    }

    /// Largest `|M_ij - M_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let d = (self.0[i][j].clone() - self.0[j][i].clone()).to_f64().abs();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `(M + Mᵀ) / 2`.
    pub fn symmetrized(&self) -> Self {
        let half = T::from_f64(0.5);
        Self::from_fn(|i, j| {
            if i == j {
                self.0[i][i].clone()
            } else {
                (self.0[i][j].clone() + self.0[j][i].clone()) * half.clone()
            }
        })
    }

    /// Determinant by Laplace expansion along the first two rows
    /// (products of complementary 2×2 minors); exact up to rounding, no pivoting.
    pub fn det(&self) -> T {
        let m = &self.0;
        let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0].clone() * m[r1][c1].clone() - m[r0][c1].clone() * m[r1][c0].clone()
        };
        let s01 = minor(0, 1, 0, 1);
        let s02 = minor(0, 1, 0, 2);
        let s03 = minor(0, 1, 0, 3);
        let s12 = minor(0, 1, 1, 2);
        let s13 = minor(0, 1, 1, 3);
        let s23 = minor(0, 1, 2, 3);
        let c23 = minor(2, 3, 2, 3);
        let c13 = minor(2, 3, 1, 3);
        let c12 = minor(2, 3, 1, 2);
        let c03 = minor(2, 3, 0, 3);
        let c02 = minor(2, 3, 0, 2);
        let c01 = minor(2, 3, 0, 1);
        s01 * c23 - s02 * c13 + s03 * c12 + s12 * c03 - s13 * c02 + s23 * c01
    }

    pub(crate) fn ensure_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(format!("{what}: non-finite matrix entry")))
        }
    }
}

impl Mat4<f64> {
    pub const fn new(rows: [[f64; 4]; 4]) -> Self {
        Mat4(rows)
    }

    /// 2×2 block at block-row `br`, block-column `bc` (each 0 or 1).
    pub fn block(&self, br: usize, bc: usize) -> Mat2 {
        let (r, c) = (2 * br, 2 * bc);
        Mat2([
            [self.0[r][c], self.0[r][c + 1]],
            [self.0[r + 1][c], self.0[r + 1][c + 1]],
        ])
    }

    /// `[[a, c], [cᵀ, b]]`.
    pub fn from_blocks(a: &Mat2, b: &Mat2, c: &Mat2) -> Self {
        let ct = c.transpose();
        Mat4::from_fn(|i, j| match (i / 2, j / 2) {
            (0, 0) => a.0[i][j],
            (0, 1) => c.0[i][j - 2],
            (1, 0) => ct.0[i - 2][j],
            _ => b.0[i - 2][j - 2],
        })
    }

    /// `self` applied to a vector.
    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| (0..4).map(|k| self.0[i][k] * v[k]).sum())
    }

    /// Largest entrywise `|self - other|`.
    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        (self - other).max_abs()
    }

    /// Direct sum of two 2×2 blocks.
    pub fn direct_sum(a: &Mat2, b: &Mat2) -> Self {
        Mat4::from_blocks(a, b, &Mat2::zeros())
    }
}

impl<T: Real> Mul for &Mat4<T> {
    type Output = Mat4<T>;
    fn mul(self, rhs: &Mat4<T>) -> Mat4<T> {
        Mat4::from_fn(|i, j| {
            let a = &self.0[i];
            a[0].clone() * rhs.0[0][j].clone()
                + a[1].clone() * rhs.0[1][j].clone()
                + a[2].clone() * rhs.0[2][j].clone()
                + a[3].clone() * rhs.0[3][j].clone()
        })
    }
}

impl<T: Real> Mul for Mat4<T> {
    type Output = Mat4<T>;
    fn mul(self, rhs: Mat4<T>) -> Mat4<T> {
        &self * &rhs
    }
}

impl<T: Real> Add for &Mat4<T> {
    type Output = Mat4<T>;
    fn add(self, rhs: &Mat4<T>) -> Mat4<T> {
        Mat4::from_fn(|i, j| self.0[i][j].clone() + rhs.0[i][j].clone())
    }
}

impl<T: Real> Add for Mat4<T> {
    type Output = Mat4<T>;
    fn add(self, rhs: Mat4<T>) -> Mat4<T> {
        &self + &rhs
    }
}

impl<T: Real> Sub for &Mat4<T> {
    type Output = Mat4<T>;
    fn sub(self, rhs: &Mat4<T>) -> Mat4<T> {
        Mat4::from_fn(|i, j| self.0[i][j].clone() - rhs.0[i][j].clone())
    }
}

impl<T: Real> Sub for Mat4<T> {
    type Output = Mat4<T>;
    fn sub(self, rhs: Mat4<T>) -> Mat4<T> {
        &self - &rhs
    }
}
