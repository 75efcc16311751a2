//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use arthur_coeff::{Calculator, Precision, ZetaProvider};

/// A calculator over the rationals with a fresh zeta cache.
pub fn calculator(bits: u32) -> Calculator {
    Calculator::new(Arc::new(ZetaProvider::rationals(Precision::new(bits))), 4, 0)
}
