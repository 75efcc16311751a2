//! Jets of the Hurwitz zeta function `ζ(s, a) = Σ_{k≥0} (k+a)^{-s}` along the
//! real axis by Euler–Maclaurin summation.
//!
//! With `s = c + h`,
//!
//! ```text
//! ζ(s, a) = Σ_{k<N} (k+a)^{-s}
//!         + (N+a)^{-s} [ (N+a)/(s-1) + 1/2 + Σ_{j=1}^{M} B_{2j}/(2j)! (s)_{2j-1} (N+a)^{1-2j} ]
//!         + R_{N,M}(s)
//! ```
//!
//! and every piece is expanded as a jet in `h`. `N` and `M` are chosen so that
//! the remainder bound holds on the whole disk `|h| <= 1`, which by Cauchy's
//! estimate bounds the error of every Taylor coefficient.

use rug::{Float, Rational};

use super::bernoulli::even_bernoulli;
use crate::error::{Error, Result};
use crate::jets::Jet;

/// `log2` of `|B_{2k}| / (2k)!`, upper bound `log2(4 / (2π)^{2k})`.
fn log2_bernoulli_ratio(k: usize) -> f64 {
    2.0 - (2 * k) as f64 * (2.0 * std::f64::consts::PI).log2()
}

/// `log2` of the remainder bound after `M` correction terms and `N` summed terms.
fn log2_remainder(c: f64, a: f64, n: usize, m: usize) -> f64 {
    let radius = 1.0;
    let abs_s = c.abs() + radius;
    let sigma = c - radius;
    // |s (s+1) ... (s+2M)| over the disk
    let rising: f64 = (0..=2 * m).map(|i| (abs_s + i as f64).log2()).sum();
    let exponent = sigma + (2 * m) as f64 + 1.0;
    let ratio = ((abs_s + (2 * m) as f64 + 1.0) / exponent).log2();
    1.0 + rising + log2_bernoulli_ratio(m + 1) - exponent * (n as f64 + a).log2() + ratio
}

/// Summation parameters `(N, M)` for an absolute error below `2^{-bits}`.
pub fn parameters(c: f64, a: f64, bits: u32, order: usize) -> Result<(usize, usize)> {
    let target = -(f64::from(bits) + order as f64 + 8.0);
    let m = (f64::from(bits) / 4.0).ceil() as usize + order + 2;
    let mut n = (c.abs().ceil() as usize) + order + 4;
    while log2_remainder(c, a, n, m) > target {
        n += 1 + n / 8;
        if n > 1_000_000 {
            return Err(Error::PrecisionBudget(format!(
                "Euler-Maclaurin parameters for s = {c} at {bits} bits"
            )));
        }
    }
    Ok((n, m))
}

/// Jet of `h -> ζ(c + h, a)` through `h^order`, for `0 < a <= 1`. At `c = 1`
/// the jet starts at `h^{-1}`.
pub fn hurwitz_jet(c: &Rational, a: &Rational, order: usize, prec: u32) -> Result<Jet> {
    if *a <= 0 || *a > 1 {
        return Err(Error::InvalidArgument(format!("Hurwitz parameter {a} outside (0, 1]")));
    }
    let cf = c.to_f64();
    if cf < -0.5 {
        return Err(Error::InvalidArgument(format!(
            "Euler-Maclaurin jets are used for Re(s) >= -1/2 only, got {c}"
        )));
    }
    let (n_terms, m_terms) = parameters(cf, a.to_f64(), prec, order)?;
    let end = order as i32 + 1;
    let len = order + 1;
    let cfl = Float::with_val(prec, c);
    let af = Float::with_val(prec, a);

    // direct sum: coefficient j of (k+a)^{-c} e^{-h ln(k+a)} is (k+a)^{-c} (-ln(k+a))^j / j!
    let mut direct = vec![Float::new(prec); len];
    for k in 0..n_terms {
        let base = Float::with_val(prec, &af + k as u32);
        let minus_log = -base.ln();
        let mut term = Float::with_val(prec, &minus_log * &cfl).exp();
        for (j, slot) in direct.iter_mut().enumerate() {
            if j > 0 {
                term *= &minus_log;
                term /= j as u32;
            }
            *slot += &term;
        }
    }
    let direct = Jet::new(0, direct, prec);

    let big = Float::with_val(prec, &af + n_terms as u32);
    let log_big = Float::with_val(prec, big.ln_ref());
    // (N+a)^{-c} e^{-h ln(N+a)}
    let scale = Float::with_val(prec, -Float::with_val(prec, &log_big * &cfl)).exp();
    let tail_exp = Jet::monomial(Float::with_val(prec, -&log_big), 1, end + 1, prec);
    let tail_factor = tail_exp.exp()?.scale(&scale);

    // bracket: (N+a)/(c-1+h) + 1/2 + Σ_j B_{2j}/(2j)! (s)_{2j-1} (N+a)^{1-2j}
    let pole_part = if *c == 1 {
        Jet::monomial(big.clone(), -1, end + 1, prec)
    } else {
        let shifted = Float::with_val(prec, &cfl - 1u32);
        Jet::affine(shifted, end + 1).recip()?.scale(&big)
    };
    let mut bracket = &pole_part + &Jet::constant(Float::with_val(prec, 0.5), end + 1);
    let bern = even_bernoulli(m_terms);
    let inv_big_sq = Float::with_val(prec, big.square_ref()).recip();
    let mut big_power = Float::with_val(prec, big.recip_ref()); // (N+a)^{1-2j}
    // rising factorial (s)_{2j-1} = s (s+1) ... (s+2j-2)
    let mut rising = Jet::affine(cfl.clone(), end + 1);
    let mut factorial = Rational::from(2); // (2j)!
    for j in 1..=m_terms {
        if j > 1 {
            let lo = Float::with_val(prec, &cfl + (2 * j - 3) as u32);
            let hi = Float::with_val(prec, &cfl + (2 * j - 2) as u32);
            rising = &(&rising * &Jet::affine(lo, end + 1)) * &Jet::affine(hi, end + 1);
            factorial *= Rational::from((2 * j - 1) as u64 * (2 * j) as u64);
            big_power *= &inv_big_sq;
        }
        let coef = Float::with_val(prec, Rational::from(&bern[j] / &factorial)) * &big_power;
        bracket = &bracket + &rising.scale(&coef);
    }
    let tail = &tail_factor * &bracket;
    Ok((&direct + &tail).truncate(end))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn riemann_zeta_values() {
        let prec = 200;
        let j = hurwitz_jet(&Rational::from(2), &Rational::from(1), 3, prec).unwrap();
        let z2 = Float::with_val(prec, 2u32).zeta();
        let err = Float::with_val(prec, j.constant_term().unwrap() - &z2).abs();
        assert!(err < 1e-55, "{err} {} {}", j.constant_term().unwrap(), z2);
        // derivative against a central difference of MPFR's zeta
        let h = Float::with_val(prec, 1e-20);
        let up = Float::with_val(prec, Float::with_val(prec, 2 + &h).zeta());
        let dn = Float::with_val(prec, Float::with_val(prec, 2 - &h).zeta());
        let fd = Float::with_val(prec, up - dn) / (2u32 * h);
        let d1 = j.coeff(1).unwrap();
        assert!(Float::with_val(prec, d1 - fd).abs() < 1e-35);
    }

    #[test]
    fn pole_at_one() {
        let prec = 200;
        let j = hurwitz_jet(&Rational::from(1), &Rational::from(1), 2, prec).unwrap();
        assert_eq!(j.low(), -1);
        let res = j.coeff(-1).unwrap();
        assert!(Float::with_val(prec, res - 1u32).abs() < 1e-55);
        let gamma = Float::with_val(prec, rug::float::Constant::Euler);
        assert!(Float::with_val(prec, j.constant_term().unwrap() - gamma).abs() < 1e-55);
    }

    #[test]
    fn half_parameter() {
        // ζ(s, 1/2) = (2^s - 1) ζ(s)
        let prec = 200;
        let s = Rational::from((7, 3));
        let j = hurwitz_jet(&s, &Rational::from((1, 2)), 0, prec).unwrap();
        let sf = Float::with_val(prec, &s);
        let expected = Float::with_val(prec, Float::with_val(prec, 2u32).pow(&sf) - 1u32)
            * Float::with_val(prec, sf.zeta_ref());
        assert!(Float::with_val(prec, j.constant_term().unwrap() - expected).abs() < 1e-55);
    }
}
