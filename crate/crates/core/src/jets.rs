//! Truncated univariate power and Laurent series over `rug::Float`.
//!
//! A [`Jet`] stores the coefficients of `t^low, t^{low+1}, ..., t^{end-1}`;
//! everything from `t^end` on is unknown. Arithmetic tracks `end` so that no
//! operation ever reads past what its inputs actually determine.

use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::precision::to_decimal;

#[derive(Clone, Debug)]
pub struct Jet {
    low: i32,
    coeffs: Vec<Float>,
    prec: u32,
}

impl Jet {
    /// Jet with coefficients of `t^low ..` taken from `coeffs`.
    pub fn new(low: i32, coeffs: Vec<Float>, prec: u32) -> Self {
        Jet { low, coeffs, prec }
    }

    /// The zero series known up to (excluding) `t^end`.
    pub fn zero(end: i32, prec: u32) -> Self {
        let low = end.min(0);
        Jet::new(low, vec![Float::new(prec); (end - low) as usize], prec)
    }

    /// `c` known up to (excluding) `t^end`.
    pub fn constant(c: Float, end: i32) -> Self {
        let prec = c.prec();
        Jet::monomial(c, 0, end, prec)
    }

    /// `c * t^k` known up to (excluding) `t^end`.
    pub fn monomial(c: Float, k: i32, end: i32, prec: u32) -> Self {
        assert!(end > k, "monomial t^{k} needs end > {k}");
        let mut coeffs = vec![Float::new(prec); (end - k) as usize];
        coeffs[0] = Float::with_val(prec, c);
        Jet::new(k, coeffs, prec)
    }

    /// The series `a + t` known up to (excluding) `t^end`.
    pub fn affine(a: Float, end: i32) -> Self {
        let prec = a.prec();
        let mut j = Jet::constant(a, end.max(2));
        j.coeffs[1] = Float::with_val(prec, 1);
        j.truncate(end)
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    /// Exclusive truncation exponent.
    pub fn end(&self) -> i32 {
        self.low + self.coeffs.len() as i32
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Coefficient of `t^k`; zero below `low`, `None` at or beyond `end`.
    pub fn coeff(&self, k: i32) -> Option<Float> {
        if k >= self.end() {
            None
        } else if k < self.low {
            Some(Float::new(self.prec))
        } else {
            Some(self.coeffs[(k - self.low) as usize].clone())
        }
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    /// Coefficient of `t^0`.
    pub fn constant_term(&self) -> Result<Float> {
        self.coeff(0)
            .ok_or_else(|| Error::Truncation(format!("constant term of a jet ending at t^{}", self.end())))
    }

    /// True when no coefficient of a negative power is stored as nonzero.
    pub fn is_analytic(&self) -> bool {
        (self.low..0.min(self.end())).all(|k| self.coeff(k).is_none_or(|c| c.is_zero()))
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> Float {
        let mut m = Float::new(self.prec);
        for c in &self.coeffs {
            let a = Float::with_val(self.prec, c.abs_ref());
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Drop everything from `t^end` on.
    pub fn truncate(mut self, end: i32) -> Self {
        if end < self.end() {
            let keep = (end - self.low).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        self
    }

    /// Re-express the jet starting at `low` (which must not exceed the current one).
    fn extend_low(&self, low: i32) -> Vec<Float> {
        debug_assert!(low <= self.low);
        let mut v = vec![Float::new(self.prec); (self.low - low) as usize];
        v.extend(self.coeffs.iter().cloned());
        v
    }

    pub fn scale(&self, c: &Float) -> Jet {
        let prec = self.prec.max(c.prec());
        Jet::new(
            self.low,
            self.coeffs.iter().map(|x| Float::with_val(prec, x * c)).collect(),
            prec,
        )
    }

    pub fn scale_rational(&self, q: &Rational) -> Jet {
        Jet::new(
            self.low,
            self.coeffs.iter().map(|x| Float::with_val(self.prec, x * q)).collect(),
            self.prec,
        )
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i32) -> Jet {
        Jet::new(self.low + k, self.coeffs.clone(), self.prec)
    }

    /// Divide by `t^k`, checking that every coefficient that would land on a
    /// negative power is below `tolerance` in absolute value. Those coefficients
    /// are discarded; the largest of them is returned as the residual.
    pub fn div_by_monomial(&self, k: i32, tolerance: &Float) -> Result<(Jet, Float)> {
        let shifted = self.shift(-k);
        let mut residual = Float::new(self.prec);
        for j in shifted.low..0.min(shifted.end()) {
            let c = shifted.coeff(j).expect("in range");
            let a = Float::with_val(self.prec, c.abs_ref());
            if a > *tolerance {
                return Err(Error::Cancellation {
                    order: j,
                    residual: to_decimal(&Float::with_val(53, &a)),
                    tolerance: to_decimal(&Float::with_val(53, tolerance)),
                });
            }
            if a > residual {
                residual = a;
            }
        }
        if shifted.end() <= 0 {
            return Err(Error::Truncation(format!(
                "division by t^{k} leaves no nonnegative coefficient"
            )));
        }
        let low = shifted.low.max(0);
        let coeffs = shifted.coeffs[(low - shifted.low) as usize..].to_vec();
        Ok((Jet::new(low, coeffs, self.prec), residual))
    }

    /// `f(c t)`: the coefficient of `t^k` is multiplied by `c^k`.
    pub fn scale_argument(&self, c: &Float) -> Jet {
        let prec = self.prec.max(c.prec());
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut power = Float::with_val(prec, c).pow(self.low);
        for x in &self.coeffs {
            out.push(Float::with_val(prec, x * &power));
            power *= c;
        }
        Jet::new(self.low, out, prec)
    }

    /// `f(-t)`.
    pub fn reflect(&self) -> Jet {
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, x)| {
                if (self.low + i as i32).rem_euclid(2) == 1 {
                    Float::with_val(self.prec, -x)
                } else {
                    x.clone()
                }
            })
            .collect();
        Jet::new(self.low, out, self.prec)
    }

    /// Multiplicative inverse. The leading stored coefficient must be nonzero.
    pub fn recip(&self) -> Result<Jet> {
        let g0 = self
            .coeffs
            .first()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidArgument("reciprocal of a jet with zero leading coefficient".into()))?;
        let prec = self.prec;
        let inv0 = Float::with_val(prec, g0.recip_ref());
        let len = self.coeffs.len();
        let mut h: Vec<Float> = Vec::with_capacity(len);
        h.push(inv0.clone());
        for i in 1..len {
            let mut acc = Float::new(prec);
            for j in 1..=i {
                acc += Float::with_val(prec, &self.coeffs[j] * &h[i - j]);
            }
            h.push(Float::with_val(prec, -acc * &inv0));
        }
        Ok(Jet::new(-self.low, h, prec))
    }

    /// Coefficients from `t^0` to `t^{end-1}`; fails if a negative power is nonzero.
    fn analytic_coeffs(&self, what: &str) -> Result<Vec<Float>> {
        if !self.is_analytic() {
            return Err(Error::InvalidArgument(format!("{what} of a jet with a pole")));
        }
        if self.end() <= 0 {
            return Err(Error::Truncation(format!("{what} of a jet ending at t^{}", self.end())));
        }
        if self.low >= 0 {
            Ok(self.extend_low(0))
        } else {
            Ok(self.coeffs[(-self.low) as usize..].to_vec())
        }
    }

    pub fn exp(&self) -> Result<Jet> {
        let a = self.analytic_coeffs("exp")?;
        let prec = self.prec;
        let mut e: Vec<Float> = Vec::with_capacity(a.len());
        e.push(Float::with_val(prec, a[0].exp_ref()));
        for i in 1..a.len() {
            let mut acc = Float::new(prec);
            for j in 1..=i {
                acc += Float::with_val(prec, &a[j] * &e[i - j]) * (j as u32);
            }
            e.push(acc / (i as u32));
        }
        Ok(Jet::new(0, e, prec))
    }

    /// Natural logarithm; the constant term must be positive.
    pub fn ln(&self) -> Result<Jet> {
        let g = self.analytic_coeffs("ln")?;
        if g[0] <= 0 {
            return Err(Error::InvalidArgument("ln of a jet with nonpositive constant term".into()));
        }
        let prec = self.prec;
        let mut l: Vec<Float> = Vec::with_capacity(g.len());
        l.push(Float::with_val(prec, g[0].ln_ref()));
        for i in 1..g.len() {
            let mut acc = Float::new(prec);
            for j in 1..i {
                acc += Float::with_val(prec, &l[j] * &g[i - j]) * (j as u32);
            }
            let v = (Float::with_val(prec, &g[i]) - acc / (i as u32)) / &g[0];
            l.push(v);
        }
        Ok(Jet::new(0, l, prec))
    }

    /// `self^k` for `k >= 1`.
    pub fn powi(&self, k: u32) -> Jet {
        assert!(k >= 1, "powi needs a positive exponent");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate the truncated series at `h`.
    pub fn eval(&self, h: &Float) -> Float {
        let prec = self.prec.max(h.prec());
        let mut acc = Float::new(prec);
        let mut power = Float::with_val(prec, h).pow(self.low);
        for c in &self.coeffs {
            acc += Float::with_val(prec, c * &power);
            power *= h;
        }
        acc
    }

    /// Sum of jets in the given order (fixed reduction order).
    pub fn sum<'a>(jets: impl IntoIterator<Item = &'a Jet>) -> Option<Jet> {
        let mut it = jets.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, j| &acc + j))
    }
}

impl<'a> Add<&'a Jet> for &'a Jet {
    type Output = Jet;

    fn add(self, rhs: &'a Jet) -> Jet {
        let prec = self.prec.max(rhs.prec);
        let low = self.low.min(rhs.low);
        let end = self.end().min(rhs.end());
        let a = self.extend_low(low);
        let b = rhs.extend_low(low);
        let len = (end - low).max(0) as usize;
        let coeffs = (0..len).map(|i| Float::with_val(prec, &a[i] + &b[i])).collect();
        Jet::new(low, coeffs, prec)
    }
}

impl<'a> Sub<&'a Jet> for &'a Jet {
    type Output = Jet;

    fn sub(self, rhs: &'a Jet) -> Jet {
        self + &(-rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;

    fn neg(self) -> Jet {
        Jet::new(
            self.low,
            self.coeffs.iter().map(|c| Float::with_val(self.prec, -c)).collect(),
            self.prec,
        )
    }
}

impl<'a> Mul<&'a Jet> for &'a Jet {
    type Output = Jet;

    fn mul(self, rhs: &'a Jet) -> Jet {
        let prec = self.prec.max(rhs.prec);
        let low = self.low + rhs.low;
        let end = (self.low + rhs.end()).min(rhs.low + self.end());
        let len = (end - low).max(0) as usize;
        let mut coeffs = vec![Float::new(prec); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] += Float::with_val(prec, a * b);
            }
        }
        Jet::new(low, coeffs, prec)
    }
}

/// A scalar function known through its jets at a base point: `s -> f(base + s)`.
pub trait ScalarHandle {
    /// Jet of `s -> f(base + s)` with coefficients through `s^order`.
    fn jet(&self, order: usize) -> Result<Jet>;
}

impl<F> ScalarHandle for F
where
    F: Fn(usize) -> Result<Jet>,
{
    fn jet(&self, order: usize) -> Result<Jet> {
        self(order)
    }
}

/// Jet in `t` of `s -> f(base + s)` restricted to `s = rate * t`.
pub fn compose_linear(handle: &impl ScalarHandle, rate: &Rational, order: usize) -> Result<Jet> {
    let jet = handle.jet(order)?;
    let c = Float::with_val(jet.prec(), rate);
    Ok(jet.scale_argument(&c))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn f(x: f64) -> Float {
        Float::with_val(P, x)
    }

    fn jet(low: i32, c: &[f64]) -> Jet {
        Jet::new(low, c.iter().map(|&x| f(x)).collect(), P)
    }

    fn assert_coeffs(j: &Jet, low: i32, expected: &[f64]) {
        assert_eq!(j.low(), low);
        assert_eq!(j.coeffs().len(), expected.len(), "{j:?}");
        for (a, &b) in j.coeffs().iter().zip(expected) {
            assert!((a.to_f64() - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn difference_of_squares() {
        let p = jet(0, &[1.0, 1.0, 0.0, 0.0]);
        let m = jet(0, &[1.0, -1.0, 0.0, 0.0]);
        assert_coeffs(&(&p * &m), 0, &[1.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn laurent_inverse_of_t() {
        let t = Jet::monomial(f(1.0), 1, 5, P);
        let inv = t.recip().unwrap();
        assert_eq!(inv.low(), -1);
        let one = &t * &inv;
        assert_coeffs(&one, 0, &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn scale_by_zero() {
        let a = jet(0, &[3.0, 2.0, 1.0]);
        let z = a.scale(&f(0.0));
        assert!(z.coeffs().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn division_by_monomial() {
        let a = jet(2, &[1.0, 1.0, 0.0]);
        let tol = f(1e-30);
        let (q, res) = a.div_by_monomial(2, &tol).unwrap();
        assert_coeffs(&q, 0, &[1.0, 1.0, 0.0]);
        assert!(res.is_zero());

        let b = jet(0, &[1.0, 1.0, 0.0]);
        match b.div_by_monomial(1, &tol) {
            Err(Error::Cancellation { order, residual, .. }) => {
                assert_eq!(order, -1);
                assert!(residual.starts_with('1'));
            }
            other => panic!("expected cancellation failure, got {other:?}"),
        }
    }

    #[test]
    fn truncation_end_of_product() {
        let a = jet(-1, &[1.0, 2.0, 3.0]); // ends at t^2
        let b = jet(0, &[1.0, 1.0, 1.0, 1.0, 1.0]); // ends at t^5
        let c = &a * &b;
        assert_eq!(c.low(), -1);
        assert_eq!(c.end(), 2);
    }

    #[test]
    fn exp_and_ln_are_inverse() {
        let a = jet(0, &[0.5, 1.0, -2.0, 0.25, 3.0]);
        let back = a.exp().unwrap().ln().unwrap();
        assert_coeffs(&back, 0, &[0.5, 1.0, -2.0, 0.25, 3.0]);
    }

    #[test]
    fn exponential_series_via_compose() {
        let handle = |order: usize| Jet::new(0, vec![f(0.0), f(1.0)], P).truncate(order as i32 + 1).exp_padded(order);
        let j = compose_linear(&handle, &Rational::from(2), 3).unwrap();
        assert_coeffs(&j, 0, &[1.0, 2.0, 2.0, 4.0 / 3.0]);
    }

    #[test]
    fn direction_doubling_rescales() {
        let a = jet(-1, &[1.0, 1.0, 1.0, 1.0]);
        let b = a.scale_argument(&f(2.0));
        assert_coeffs(&b, -1, &[0.5, 1.0, 2.0, 4.0]);
    }

    #[test]
    fn reflection() {
        let a = jet(-1, &[1.0, 1.0, 1.0]);
        assert_coeffs(&a.reflect(), -1, &[-1.0, 1.0, -1.0]);
    }

    #[test]
    fn evaluation() {
        let a = jet(-1, &[1.0, 2.0, 3.0]);
        assert!((a.eval(&f(0.5)).to_f64() - (2.0 + 2.0 + 1.5)).abs() < 1e-15);
    }

    impl Jet {
        fn exp_padded(&self, order: usize) -> Result<Jet> {
            let mut c = self.coeffs.clone();
            c.resize(order + 1, Float::new(self.prec));
            Jet::new(self.low, c, self.prec).exp()
        }
    }
}
