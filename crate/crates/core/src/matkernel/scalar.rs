use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use twofloat::TwoFloat;

/// Scalar field the fixed-size kernel is generic over.
///
/// `f64` is the working precision everywhere; [`Extended`] exists for
/// strongly amplifying regimes where propagator entries reach 1e7 and the
/// symplectic / purity identities can no longer be resolved in double
/// precision.
pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Truncation tolerance handed to `expm` by the propagator.
    const EXPM_TOL: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn is_finite(&self) -> bool;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    /// Division by an exact `f64`.
    fn div_f64(&self, k: f64) -> Self {
        self.clone() / Self::from_f64(k)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Real for f64 {
    const EXPM_TOL: f64 = f64::EPSILON / 2.0;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }
    #[inline]
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    #[inline]
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Double-double (~106-bit) arithmetic, used where `f64` cancels
/// catastrophically but the input data are exact `f64` values.
impl Real for TwoFloat {
    const EXPM_TOL: f64 = 1e-30;

    #[inline]
    fn from_f64(x: f64) -> Self {
        TwoFloat::from(x)
    }
    #[inline]
    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
    #[inline]
    fn abs(&self) -> Self {
        TwoFloat::abs(self)
    }
    #[inline]
    fn is_finite(&self) -> bool {
        self.is_valid()
    }
    // twofloat's TwoFloat / TwoFloat only reaches f64 accuracy
    #[inline]
    fn div_f64(&self, k: f64) -> Self {
        *self / k
    }
}

/// Binary precision of [`Extended`] values.
pub const EXTENDED_BITS: usize = 256;

type Big = FBig<HalfEven, 2>;

/// 256-bit binary floating point (round-half-even), backed by `dashu-float`.
///
/// Conversion from `f64` is exact; every value carries the same precision so
/// results of arithmetic are rounded to 256 bits.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Extended(Big);

impl Extended {
    /// Panics on non-finite input; callers validate finiteness first.
    pub fn new(x: f64) -> Self {
        let v = Big::try_from(x).expect("Extended::new requires a finite value");
        Extended(v.with_precision(EXTENDED_BITS).value())
    }
}

impl Real for Extended {
    const EXPM_TOL: f64 = 1e-70;

    fn from_f64(x: f64) -> Self {
        Extended::new(x)
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn abs(&self) -> Self {
        if self.0 < Big::ZERO {
            Extended(-self.0.clone())
        } else {
            self.clone()
        }
    }
    fn is_finite(&self) -> bool {
        !self.0.repr().is_infinite()
    }
}

macro_rules! extended_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for Extended {
            type Output = Extended;
            fn $method(self, rhs: Extended) -> Extended {
                Extended(self.0 $op rhs.0)
            }
        }
    };
}

extended_binop!(Add, add, +);
extended_binop!(Sub, sub, -);
extended_binop!(Mul, mul, *);
extended_binop!(Div, div, /);

impl Neg for Extended {
    type Output = Extended;
    fn neg(self) -> Extended {
        Extended(-self.0)
    }
}
