//! Working-precision conventions shared by every numeric module.

use rug::float::Constant;
use rug::{Float, Rational};

/// Default output precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Extra bits carried internally on top of the requested precision.
pub const GUARD_BITS: u32 = 64;

/// Requested output precision together with the derived working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    bits: u32,
}

impl Precision {
    pub fn new(bits: u32) -> Self {
        Precision { bits: bits.max(32) }
    }

    /// Output precision in bits.
    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Internal working precision.
    pub fn working(self) -> u32 {
        self.bits + GUARD_BITS
    }

    /// Default zero threshold 2^{-bits/2}.
    pub fn default_tolerance_exponent(self) -> u32 {
        self.bits / 2
    }

    pub fn float(self, v: impl Into<f64>) -> Float {
        Float::with_val(self.working(), v.into())
    }

    pub fn rational(self, q: &Rational) -> Float {
        Float::with_val(self.working(), q)
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.working(), Constant::Pi)
    }

    pub fn euler_gamma(self) -> Float {
        Float::with_val(self.working(), Constant::Euler)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::new(DEFAULT_PRECISION)
    }
}

/// 2^{-exponent} at the given precision.
pub fn pow2_neg(exponent: u32, prec: u32) -> Float {
    let mut x = Float::with_val(prec, 1);
    x >>= exponent;
    x
}

/// |a - b| / max(|a|, |b|, floor).
pub fn relative_difference(a: &Float, b: &Float, floor: &Float) -> Float {
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    let mut scale = Float::with_val(prec, a.abs_ref());
    let bb = Float::with_val(prec, b.abs_ref());
    if bb > scale {
        scale = bb;
    }
    if *floor > scale {
        scale = Float::with_val(prec, floor);
    }
    diff / scale
}

/// Decimal rendering with enough digits to round-trip at the value's precision.
pub fn to_decimal(x: &Float) -> String {
    x.to_string_radix(10, None)
}

/// Round a working-precision value to `bits` and render it.
pub fn to_decimal_at(x: &Float, bits: u32) -> String {
    to_decimal(&Float::with_val(bits, x))
}
