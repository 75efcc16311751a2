//! Jets of `ln Γ` on the positive real axis: shift the argument up by `m`,
//! apply Stirling's series there and subtract `Σ ln(z + i)`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use super::bernoulli::even_bernoulli;
use crate::error::{Error, Result};
use crate::jets::Jet;

/// Jet of `u -> ln(w + u)` through `u^order`.
fn ln_affine(w: &Float, order: usize, prec: u32) -> Vec<Float> {
    let mut out = Vec::with_capacity(order + 1);
    out.push(Float::with_val(prec, w.ln_ref()));
    let inv = Float::with_val(prec, w.recip_ref());
    let mut power = inv.clone();
    for k in 1..=order {
        let term = Float::with_val(prec, &power / k as u32);
        out.push(if k % 2 == 1 { term } else { -term });
        power *= &inv;
    }
    out
}

/// Jet of `u -> (w + u)^{-p}` through `u^order`.
fn inverse_power(w: &Float, p: u32, order: usize, prec: u32) -> Vec<Float> {
    let inv = Float::with_val(prec, w.recip_ref());
    let mut c = Float::with_val(prec, (&inv).pow(p));
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        if k > 0 {
            // C(-p, k) = C(-p, k-1) * (-(p + k - 1)) / k
            c *= &inv;
            c *= (p + k as u32 - 1) as f64;
            c /= k as u32;
            c = -c;
        }
        out.push(c.clone());
    }
    out
}

fn log2_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).log2()).sum()
}

/// Jet of `u -> ln Γ(z + u)` through `u^order`, for rational `z > 0`.
pub fn ln_gamma_jet(z: &Rational, order: usize, prec: u32) -> Result<Jet> {
    if *z <= 0 {
        return Err(Error::InvalidArgument(format!("ln Γ jets need a positive argument, got {z}")));
    }
    let bits = f64::from(prec) + order as f64 + 8.0;
    let shift = (f64::from(prec) / 3.0).ceil() as usize + order;
    let zf = Float::with_val(prec, z);
    let w = Float::with_val(prec, &zf + shift as u32);
    // remainder after J terms on |u| <= 1: 2 |B_{2J+2}| / ((2J+2)(2J+1) (w-1)^{2J+1})
    let wmin = w.to_f64() - 1.0;
    let mut terms = 1;
    loop {
        let k = 2 * terms + 2;
        let log_b = 2.0 + log2_factorial(k) - k as f64 * (2.0 * std::f64::consts::PI).log2();
        let bound = 1.0 + log_b - ((k * (k - 1)) as f64).log2() - (k - 1) as f64 * wmin.log2();
        if bound < -bits {
            break;
        }
        terms += 1;
        if terms > 10_000 {
            return Err(Error::PrecisionBudget(format!("Stirling series for ln Γ({z})")));
        }
    }

    let len = order + 1;
    let mut acc = vec![Float::new(prec); len];
    // (w + u - 1/2) ln(w + u) - (w + u) + ln(2π)/2
    let lw = ln_affine(&w, order, prec);
    let half = Float::with_val(prec, &w - 0.5f64);
    for k in 0..len {
        acc[k] += Float::with_val(prec, &half * &lw[k]);
        if k > 0 {
            acc[k] += &lw[k - 1];
        }
    }
    acc[0] -= &w;
    if len > 1 {
        acc[1] -= 1u32;
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    acc[0] += Float::with_val(prec, two_pi.ln()) / 2u32;
    // Σ_j B_{2j} / (2j (2j-1)) (w + u)^{1-2j}
    let bern = even_bernoulli(terms);
    for (j, b) in bern.iter().enumerate().skip(1) {
        let denom = (2 * j * (2 * j - 1)) as u64;
        let coef = Float::with_val(prec, b / Rational::from(denom));
        for (slot, x) in acc.iter_mut().zip(inverse_power(&w, (2 * j - 1) as u32, order, prec)) {
            *slot += Float::with_val(prec, &coef * &x);
        }
    }
    // ln Γ(z + u) = ln Γ(z + m + u) - Σ_{i<m} ln(z + i + u)
    for i in 0..shift {
        let zi = Float::with_val(prec, &zf + i as u32);
        for (slot, x) in acc.iter_mut().zip(ln_affine(&zi, order, prec)) {
            *slot -= x;
        }
    }
    Ok(Jet::new(0, acc, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_and_digamma() {
        let prec = 200;
        for (p, q) in [(1, 2), (1, 1), (3, 2), (7, 3), (5, 1)] {
            let z = Rational::from((p, q));
            let jet = ln_gamma_jet(&z, 2, prec).unwrap();
            let zf = Float::with_val(prec, &z);
            let lg = Float::with_val(prec, zf.ln_gamma_ref());
            let dg = Float::with_val(prec, zf.digamma_ref());
            assert!(Float::with_val(prec, jet.coeff(0).unwrap() - lg).abs() < 1e-55, "{z}");
            assert!(Float::with_val(prec, jet.coeff(1).unwrap() - dg).abs() < 1e-55, "{z}");
        }
    }

    #[test]
    fn trigamma_at_one() {
        // ψ'(1) = π²/6, so the u² coefficient is π²/12
        let prec = 200;
        let jet = ln_gamma_jet(&Rational::from(1), 3, prec).unwrap();
        let pi = Float::with_val(prec, Constant::Pi);
        let expected = Float::with_val(prec, pi.square_ref()) / 12u32;
        assert!(Float::with_val(prec, jet.coeff(2).unwrap() - expected).abs() < 1e-55);
        // u³ coefficient is ψ''(1)/6 = -ζ(3)/3
        let z3 = Float::with_val(prec, 3u32).zeta();
        assert!(Float::with_val(prec, jet.coeff(3).unwrap() + z3 / 3u32).abs() < 1e-55);
    }
}
