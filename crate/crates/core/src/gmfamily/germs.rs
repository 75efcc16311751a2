//! Smooth functions on `a_0^*` known through their jets along lines.

use std::sync::Arc;

use rug::{Float, Rational};

use crate::error::Result;
use crate::jets::{compose_linear, Jet};
use crate::rootdata::LinearForm;
use crate::zeta::{PlaceSet, ZetaProvider};

/// A function `φ` near `0`, known through the jets of `t -> φ(t μ)`.
pub trait SmoothGerm: Send + Sync {
    /// Jet of `t -> φ(t μ)` through `t^order`.
    fn jet_along(&self, direction: &LinearForm, order: usize) -> Result<Jet>;

    fn prec(&self) -> u32;
}

/// `φ ≡ c`.
#[derive(Clone, Debug)]
pub struct ConstantGerm {
    value: Float,
}

impl ConstantGerm {
    pub fn new(value: Float) -> Self {
        ConstantGerm { value }
    }
}

impl SmoothGerm for ConstantGerm {
    fn jet_along(&self, _direction: &LinearForm, order: usize) -> Result<Jet> {
        Ok(Jet::constant(self.value.clone(), order as i32 + 1))
    }

    fn prec(&self) -> u32 {
        self.value.prec()
    }
}

/// `φ(λ) = exp <λ, H>`.
#[derive(Clone, Debug)]
pub struct ExpGerm {
    h: LinearForm,
    prec: u32,
}

impl ExpGerm {
    pub fn new(h: LinearForm, prec: u32) -> Self {
        ExpGerm { h, prec }
    }
}

impl SmoothGerm for ExpGerm {
    fn jet_along(&self, direction: &LinearForm, order: usize) -> Result<Jet> {
        let rate = Float::with_val(self.prec, direction.dot(&self.h));
        let end = order as i32 + 1;
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = Float::with_val(self.prec, 1);
        for k in 0..=order {
            if k > 0 {
                c *= &rate;
                c /= k as u32;
            }
            coeffs.push(c.clone());
        }
        Ok(Jet::new(0, coeffs, self.prec).truncate(end))
    }

    fn prec(&self) -> u32 {
        self.prec
    }
}

/// `φ(λ) = Σ_i c_i Π_j <λ, v_ij>`.
#[derive(Clone, Debug)]
pub struct PolynomialGerm {
    terms: Vec<(Rational, Vec<LinearForm>)>,
    prec: u32,
}

impl PolynomialGerm {
    pub fn new(terms: Vec<(Rational, Vec<LinearForm>)>, prec: u32) -> Self {
        PolynomialGerm { terms, prec }
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, f)| f.len()).max().unwrap_or(0)
    }
}

impl SmoothGerm for PolynomialGerm {
    fn jet_along(&self, direction: &LinearForm, order: usize) -> Result<Jet> {
        let mut coeffs = vec![Rational::new(); order + 1];
        for (c, forms) in &self.terms {
            if forms.len() <= order {
                let value = forms.iter().fold(c.clone(), |acc, v| acc * direction.dot(v));
                coeffs[forms.len()] += value;
            }
        }
        Ok(Jet::new(0, coeffs.iter().map(|q| Float::with_val(self.prec, q)).collect(), self.prec))
    }

    fn prec(&self) -> u32 {
        self.prec
    }
}

/// `φ(λ) = Π_v Z̃^S_d(d + <λ, v>/d) / Z̃^S_d(d)`.
#[derive(Clone, Debug)]
pub struct ZetaProductGerm {
    provider: Arc<ZetaProvider>,
    d: usize,
    places: PlaceSet,
    forms: Vec<LinearForm>,
}

impl ZetaProductGerm {
    pub fn new(provider: Arc<ZetaProvider>, d: usize, places: PlaceSet, forms: Vec<LinearForm>) -> Self {
        ZetaProductGerm { provider, d, places, forms }
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    /// Jet of `s -> Z̃^S_d(d + s) / Z̃^S_d(d)`.
    pub fn normalized_factor(&self, order: usize) -> Result<Jet> {
        let jet = self.provider.ztilde_s_jet(self.d, &self.places, order)?;
        let at_zero = jet.constant_term()?;
        let inv = Float::with_val(jet.prec(), at_zero.recip_ref());
        Ok(jet.scale(&inv))
    }
}

impl SmoothGerm for ZetaProductGerm {
    fn jet_along(&self, direction: &LinearForm, order: usize) -> Result<Jet> {
        let end = order as i32 + 1;
        let mut acc = Jet::constant(Float::with_val(self.prec(), 1), end);
        let d = Rational::from(self.d as u64);
        for v in &self.forms {
            let rate = direction.dot(v) / &d;
            let factor = compose_linear(&|m: usize| self.normalized_factor(m), &rate, order)?;
            acc = &acc * &factor;
        }
        Ok(acc.truncate(end))
    }

    fn prec(&self) -> u32 {
        self.provider.prec()
    }
}

/// `λ -> Π_v Z_{d,{p}}(d) / Z_{d,{p}}(d + <λ, v>/d)`: the factor turning the
/// `Z̃^S` germ into the `Z̃^{S ∪ {p}}` germ.
#[derive(Clone, Debug)]
pub struct PlaceCorrectionGerm {
    provider: Arc<ZetaProvider>,
    d: usize,
    place: PlaceSet,
    forms: Vec<LinearForm>,
}

impl PlaceCorrectionGerm {
    pub fn new(provider: Arc<ZetaProvider>, d: usize, prime: u64, forms: Vec<LinearForm>) -> Result<Self> {
        let place = PlaceSet::new(vec![prime], false)?;
        Ok(PlaceCorrectionGerm { provider, d, place, forms })
    }

    fn factor(&self, order: usize) -> Result<Jet> {
        let local = self.provider.z_places_jet(self.d, &self.place, order)?;
        let at_zero = local.constant_term()?;
        Ok(local.recip()?.scale(&at_zero))
    }
}

impl SmoothGerm for PlaceCorrectionGerm {
    fn jet_along(&self, direction: &LinearForm, order: usize) -> Result<Jet> {
        let end = order as i32 + 1;
        let mut acc = Jet::constant(Float::with_val(self.prec(), 1), end);
        let d = Rational::from(self.d as u64);
        for v in &self.forms {
            let rate = direction.dot(v) / &d;
            acc = &acc * &compose_linear(&|m: usize| self.factor(m), &rate, order)?;
        }
        Ok(acc.truncate(end))
    }

    fn prec(&self) -> u32 {
        self.provider.prec()
    }
}

/// Pointwise product of germs.
pub struct ProductGerm {
    factors: Vec<Box<dyn SmoothGerm>>,
    prec: u32,
}

impl ProductGerm {
    pub fn new(factors: Vec<Box<dyn SmoothGerm>>, prec: u32) -> Self {
        ProductGerm { factors, prec }
    }
}

impl SmoothGerm for ProductGerm {
    fn jet_along(&self, direction: &LinearForm, order: usize) -> Result<Jet> {
        let end = order as i32 + 1;
        let mut acc = Jet::constant(Float::with_val(self.prec, 1), end);
        for f in &self.factors {
            acc = &acc * &f.jet_along(direction, order)?;
        }
        Ok(acc.truncate(end))
    }

    fn prec(&self) -> u32 {
        self.prec
    }
}

/// `λ -> φ(wλ)` for a permutation of `d`-blocks.
pub struct TwistedGerm<'a> {
    inner: &'a dyn SmoothGerm,
    sigma: Vec<usize>,
    d: usize,
}

impl<'a> TwistedGerm<'a> {
    pub fn new(inner: &'a dyn SmoothGerm, sigma: Vec<usize>, d: usize) -> Self {
        TwistedGerm { inner, sigma, d }
    }
}

impl SmoothGerm for TwistedGerm<'_> {
    fn jet_along(&self, direction: &LinearForm, order: usize) -> Result<Jet> {
        self.inner.jet_along(&super::act(&self.sigma, direction, self.d), order)
    }

    fn prec(&self) -> u32 {
        self.inner.prec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Precision;

    #[test]
    fn exponential_series() {
        let g = ExpGerm::new(LinearForm::from_integers(&[1, 0]), 128);
        let jet = g.jet_along(&LinearForm::from_integers(&[2, -2]), 3).unwrap();
        let expected = [1.0, 2.0, 2.0, 4.0 / 3.0];
        for (c, e) in jet.coeffs().iter().zip(expected) {
            assert!((c.to_f64() - e).abs() < 1e-15);
        }
    }

    #[test]
    fn polynomial_by_degree() {
        let v = LinearForm::from_integers(&[1, -1]);
        let g = PolynomialGerm::new(
            vec![(Rational::from(3), vec![]), (Rational::from(2), vec![v.clone(), v.clone()])],
            128,
        );
        let jet = g.jet_along(&LinearForm::from_integers(&[1, 0]), 3).unwrap();
        let got: Vec<f64> = jet.coeffs().iter().map(Float::to_f64).collect();
        assert_eq!(got, vec![3.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn zeta_product_normalized_at_zero() {
        let provider = Arc::new(ZetaProvider::rationals(Precision::new(128)));
        let forms = vec![LinearForm::from_ratios(&[(1, 2), (-1, 2)])];
        let g = ZetaProductGerm::new(provider, 1, "2,3".parse().unwrap(), forms);
        let jet = g.jet_along(&LinearForm::from_integers(&[1, -1]), 2).unwrap();
        assert!((jet.constant_term().unwrap().to_f64() - 1.0).abs() < 1e-30);
        assert_eq!(g.jet_along(&LinearForm::zeros(2), 2).unwrap().coeff(1).unwrap(), 0);
    }
}
