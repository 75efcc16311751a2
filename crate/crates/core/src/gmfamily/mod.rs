//! Values at `λ = 0` of the combinations of a smooth function `φ` on
//! `a_0^{L,*}` that are regular there even though each summand has a pole:
//!
//! * `c̃ = Σ_Q ε_Q^L θ̂_0^Q(λ)^{-1} φ(λ^Q) θ_Q^L(λ)^{-1}`
//! * `c  = Σ_Q ε_0^Q θ̂_0^Q(λ)^{-1} φ(λ_Q) θ_Q^L(λ)^{-1}`
//! * the Weyl average `|W_0^L|^{-1} Σ_w φ(wλ) θ_0^L(wλ)^{-1}`
//! * Arthur's `k`-th derivative formula over the parabolics of `L` with Levi `M_0`.
//!
//! Sums over `Q` run over `P_0 ⊆ Q ⊆ L`. Each is evaluated along a line
//! `λ = t λ0`: every summand is `t^{-k}` times a scalar times a jet of `φ`, the
//! jets are added, the sum is divided by `t^k` (checking that the
//! coefficients below `t^k` cancel) and the constant term is read off.

pub mod germs;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::rootdata::{parabolics_between, project, relative_sign, BlockProfile, LinearForm, ThetaFactor};

pub use germs::SmoothGerm;

/// One `Q` with `P_0 ⊆ Q ⊆ L` and the factors attached to it.
#[derive(Clone, Debug)]
pub struct Intermediate {
    pub profile: BlockProfile,
    /// `θ̂_0^Q`.
    pub hat: ThetaFactor,
    /// `θ_Q^L`.
    pub theta: ThetaFactor,
    /// `ε_Q^L`.
    pub sign_to_levi: i32,
    /// `ε_0^Q`.
    pub sign_from_minimal: i32,
}

/// A Levi `L ⊇ M_0`, given as the standard parabolic with that Levi.
#[derive(Clone, Debug)]
pub struct Level {
    minimal: BlockProfile,
    levi: BlockProfile,
    between: Vec<Intermediate>,
    theta0: ThetaFactor,
    weyl: Vec<Vec<usize>>,
}

/// A direction `λ0 ∈ a_0^{L,*}` with the pairings that were verified nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericDirection {
    pub lambda: LinearForm,
    pub certificate: Vec<Rational>,
}

/// Value of one route with its cancellation residual (relative to the size of
/// the summands).
#[derive(Clone, Debug)]
pub struct RouteValue {
    pub value: Float,
    pub residual: Float,
    pub terms: usize,
}

/// Evaluation settings shared by all routes.
#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Extra jet orders beyond the pole order.
    pub guard: usize,
    /// Absolute threshold for cancelling coefficients, scaled by the summand size.
    pub tolerance: Float,
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Move `d`-block `j` of `λ` to position `σ(j)`: `(σλ)_{σ(j)} = λ_j`.
pub fn act(sigma: &[usize], lambda: &LinearForm, d: usize) -> LinearForm {
    let mut out = lambda.coords().to_vec();
    for (j, &target) in sigma.iter().enumerate() {
        for i in 0..d {
            out[target * d + i] = lambda.coords()[j * d + i].clone();
        }
    }
    LinearForm::new(out)
}

/// `(λ∘σ)_j = λ_{σ(j)}` on `d`-blocks.
fn compose(lambda: &LinearForm, sigma: &[usize], d: usize) -> LinearForm {
    let mut out = lambda.coords().to_vec();
    for (j, &source) in sigma.iter().enumerate() {
        for i in 0..d {
            out[j * d + i] = lambda.coords()[source * d + i].clone();
        }
    }
    LinearForm::new(out)
}

/// Add up `t^{-k}`-scaled jets, divide by `t^k` and read the constant term.
fn limit_of_sum(terms: &[Jet], k: usize, options: &EvalOptions) -> Result<RouteValue> {
    let sum = Jet::sum(terms).ok_or_else(|| Error::InvalidArgument("empty sum".into()))?;
    let prec = sum.prec();
    let mut scale = Float::with_val(prec, 1);
    for t in terms {
        let m = t.max_abs();
        if m > scale {
            scale = m;
        }
    }
    let tol = Float::with_val(prec, &options.tolerance * &scale);
    let (analytic, residual) = sum.div_by_monomial(k as i32, &tol)?;
    Ok(RouteValue {
        value: analytic.constant_term()?,
        residual: residual / scale,
        terms: terms.len(),
    })
}

impl Level {
    /// Level data for `L` (a composition of `r` with block size `d`).
    pub fn new(levi: &BlockProfile) -> Result<Self> {
        let minimal = BlockProfile::minimal(levi.d(), levi.r());
        let mut between = Vec::new();
        for q in parabolics_between(&minimal, levi)? {
            between.push(Intermediate {
                hat: ThetaFactor::hat_theta(&minimal, &q)?,
                theta: ThetaFactor::theta(&q, levi)?,
                sign_to_levi: relative_sign(&q, levi),
                sign_from_minimal: relative_sign(&minimal, &q),
                profile: q,
            });
        }
        let theta0 = ThetaFactor::theta(&minimal, levi)?;
        // W_0^L: permutations of the d-blocks inside each block of L
        let mut weyl: Vec<Vec<usize>> = vec![Vec::new()];
        let mut start = 0;
        for &ri in levi.composition() {
            let perms = permutations(&(start..start + ri).collect::<Vec<_>>());
            weyl = weyl
                .into_iter()
                .flat_map(|prefix| {
                    perms.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.extend_from_slice(p);
                        v
                    })
                })
                .collect();
            start += ri;
        }
        Ok(Level { minimal, levi: levi.clone(), between, theta0, weyl })
    }

    pub fn levi(&self) -> &BlockProfile {
        &self.levi
    }

    pub fn minimal(&self) -> &BlockProfile {
        &self.minimal
    }

    pub fn intermediates(&self) -> &[Intermediate] {
        &self.between
    }

    /// `k = dim a_0^L`, the pole order of every summand.
    pub fn pole_order(&self) -> usize {
        self.minimal.relative_rank(&self.levi)
    }

    /// `|W_0^L| = Π r_i!`.
    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    pub fn weyl_elements(&self) -> &[Vec<usize>] {
        &self.weyl
    }

    /// Exact nonzero checks for a candidate direction: the coroots of every
    /// `θ_Q^L`, the coweights of every `θ̂_0^Q`, and distinctness of the
    /// `d`-block values inside each block of `L` (so that `θ_0^L(wλ) ≠ 0`).
    pub fn certify(&self, lambda: &LinearForm) -> Option<Vec<Rational>> {
        let n = self.levi.n();
        let d = self.levi.d();
        if lambda.dim() != n
            || !lambda.is_constant_on(&self.minimal.blocks())
            || !lambda.sums_to_zero_on(&self.levi.blocks())
        {
            return None;
        }
        let mut cert = Vec::new();
        for q in &self.between {
            for v in q.theta.pairings(lambda).into_iter().chain(q.hat.pairings(lambda)) {
                if v == 0 {
                    return None;
                }
                cert.push(v);
            }
        }
        let unit = self.levi.block_of_unit();
        for i in 0..self.levi.r() {
            for j in i + 1..self.levi.r() {
                if unit[i] == unit[j] {
                    let diff = Rational::from(&lambda.coords()[i * d] - &lambda.coords()[j * d]);
                    if diff == 0 {
                        return None;
                    }
                    cert.push(diff);
                }
            }
        }
        Some(cert)
    }

    /// Seeded pseudo-random direction in `a_0^{L,*}`, redrawn until certified.
    pub fn generic_direction(&self, seed: u64) -> Result<GenericDirection> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.levi.d();
        let r = self.levi.r();
        const DRAWS: usize = 64;
        for _ in 0..DRAWS {
            let mut coords = Vec::with_capacity(r * d);
            for _ in 0..r {
                let num: i64 = rng.gen_range(-24..=24);
                let den: i64 = rng.gen_range(1..=4);
                for _ in 0..d {
                    coords.push(Rational::from((num, den)));
                }
            }
            let raw = LinearForm::new(coords);
            let lambda = raw.sub(&raw.block_means(&self.levi.blocks()));
            if let Some(certificate) = self.certify(&lambda) {
                return Ok(GenericDirection { lambda, certificate });
            }
        }
        Err(Error::NoGenericDirection(DRAWS))
    }

    fn order(&self, options: &EvalOptions) -> usize {
        self.pole_order() + options.guard
    }

    fn scaled(jet: Jet, sign: i32, denominator: &Float) -> Jet {
        let mut factor = Float::with_val(jet.prec(), denominator.recip_ref());
        if sign < 0 {
            factor = -factor;
        }
        jet.scale(&factor)
    }

    /// `c̃` at `λ = 0`.
    pub fn tilde_c(&self, germ: &dyn SmoothGerm, dir: &GenericDirection, options: &EvalOptions) -> Result<RouteValue> {
        let order = self.order(options);
        let prec = germ.prec();
        let terms: Vec<Jet> = self
            .between
            .par_iter()
            .map(|q| {
                let (upper, _) = project(&dir.lambda, &q.profile);
                let jet = germ.jet_along(&upper, order)?;
                let denom = Float::with_val(prec, q.hat.eval(&dir.lambda, prec) * q.theta.eval(&dir.lambda, prec));
                Ok(Self::scaled(jet, q.sign_to_levi, &denom))
            })
            .collect::<Result<_>>()?;
        limit_of_sum(&terms, self.pole_order(), options)
    }

    /// `c` at `λ = 0`.
    pub fn c(&self, germ: &dyn SmoothGerm, dir: &GenericDirection, options: &EvalOptions) -> Result<RouteValue> {
        let order = self.order(options);
        let prec = germ.prec();
        let terms: Vec<Jet> = self
            .between
            .par_iter()
            .map(|q| {
                let (_, lower) = project(&dir.lambda, &q.profile);
                let jet = germ.jet_along(&lower, order)?;
                let denom = Float::with_val(prec, q.hat.eval(&dir.lambda, prec) * q.theta.eval(&dir.lambda, prec));
                Ok(Self::scaled(jet, q.sign_from_minimal, &denom))
            })
            .collect::<Result<_>>()?;
        limit_of_sum(&terms, self.pole_order(), options)
    }

    /// `|W_0^L|^{-1} Σ_w φ(wλ) θ_0^L(wλ)^{-1}` at `λ = 0`.
    pub fn symmetrized_value(&self, germ: &dyn SmoothGerm, dir: &GenericDirection, options: &EvalOptions) -> Result<RouteValue> {
        let order = self.order(options);
        let prec = germ.prec();
        let d = self.levi.d();
        let terms: Vec<Jet> = self
            .weyl
            .par_iter()
            .map(|w| {
                let moved = act(w, &dir.lambda, d);
                let jet = germ.jet_along(&moved, order)?;
                Ok(Self::scaled(jet, 1, &self.theta0.eval(&moved, prec)))
            })
            .collect::<Result<_>>()?;
        let mut out = limit_of_sum(&terms, self.pole_order(), options)?;
        out.value /= self.weyl.len() as u32;
        Ok(out)
    }

    /// Simple coroots of the parabolic of `L` whose chamber orders the
    /// `d`-blocks of each block of `L` as `σ(start), σ(start+1), ...`.
    fn ordered_coroots(&self, sigma: &[usize]) -> Vec<LinearForm> {
        let d = self.levi.d();
        let n = self.levi.n();
        let weight = Rational::from((1, d as u64));
        let mut forms = Vec::new();
        let mut start = 0;
        for &ri in self.levi.composition() {
            for i in start..start + ri - 1 {
                let a = sigma[i] * d;
                let b = sigma[i + 1] * d;
                let left = LinearForm::indicator(n, &(a..a + d), &weight);
                let right = LinearForm::indicator(n, &(b..b + d), &weight);
                forms.push(left.sub(&right));
            }
            start += ri;
        }
        forms
    }

    /// Arthur's formula `(1/k!) Σ_P (d/dt)^k φ_P(tλ)|_{t=0} θ_P(λ)^{-1}` over the
    /// `|W_0^L|` parabolics of `L` with Levi `M_0`, where `φ_P(λ) = φ(λ∘σ_P)`.
    /// The sum equals `|W_0^L|` times the other routes; the value returned is
    /// divided by `|W_0^L|` so all four routes are directly comparable.
    pub fn arthur_derivative_value(
        &self,
        germ: &dyn SmoothGerm,
        dir: &GenericDirection,
        options: &EvalOptions,
    ) -> Result<RouteValue> {
        let k = self.pole_order();
        let order = self.order(options);
        let prec = germ.prec();
        let d = self.levi.d();
        let terms: Vec<Jet> = self
            .weyl
            .par_iter()
            .map(|sigma| {
                let theta = ThetaFactor::from_forms(self.ordered_coroots(sigma))?;
                let jet = germ.jet_along(&compose(&dir.lambda, sigma, d), order)?;
                Ok(Self::scaled(jet, 1, &theta.eval(&dir.lambda, prec)))
            })
            .collect::<Result<_>>()?;
        // the coefficients below t^k of the family sum vanish; the t^k
        // coefficient is (1/k!) times the k-th derivative
        let sum = Jet::sum(&terms).ok_or_else(|| Error::InvalidArgument("empty sum".into()))?;
        let mut scale = Float::with_val(prec, 1);
        for t in &terms {
            let m = t.max_abs();
            if m > scale {
                scale = m;
            }
        }
        let tol = Float::with_val(prec, &options.tolerance * &scale);
        let mut residual = Float::new(prec);
        for j in 0..k as i32 {
            let c = sum.coeff(j).ok_or_else(|| Error::Truncation("family sum".into()))?.abs();
            if c > tol {
                return Err(Error::Cancellation {
                    order: j - k as i32,
                    residual: crate::precision::to_decimal(&Float::with_val(53, &c)),
                    tolerance: crate::precision::to_decimal(&Float::with_val(53, &tol)),
                });
            }
            if c > residual {
                residual = c;
            }
        }
        let raw = sum.coeff(k as i32).ok_or_else(|| Error::Truncation("family sum".into()))?;
        let weyl = Float::with_val(prec, Integer::from(self.weyl.len()));
        Ok(RouteValue { value: raw / weyl, residual: residual / scale, terms: terms.len() })
    }
}
