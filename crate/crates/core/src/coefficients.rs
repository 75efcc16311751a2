//! The global coefficients `a^L(S, o_L)` and `ã^L(S, o')` of the fine
//! expansion at the orbit `(r^d)`, the regularized integrals of the unit
//! function, and the assembled expansion.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::gmfamily::germs::{PlaceCorrectionGerm, ProductGerm, ZetaProductGerm};
use crate::gmfamily::{EvalOptions, GenericDirection, Level, RouteValue, SmoothGerm};
use crate::jets::{compose_linear, Jet};
use crate::orbits::{enumerate_inducing_pairs, induce, LeviDatum, Partition};
use crate::precision::{pow2_neg, relative_difference};
use crate::rootdata::{project, simple_data, BlockProfile, LinearForm, ThetaFactor};
use crate::zeta::{PlaceSet, ZetaProvider};

/// Names of the evaluation routes, in reporting order.
pub const ROUTES: [&str; 4] = ["symmetrized", "tilde_c", "c", "arthur"];

/// `φ(λ) = Π_{α ∈ Δ_0^L} Z̃^S_d(d + <λ, ϖ_α^∨>/d) / Z̃^S_d(d)`.
pub fn phi_for_level(provider: Arc<ZetaProvider>, levi: &BlockProfile, places: &PlaceSet) -> Result<ZetaProductGerm> {
    let minimal = BlockProfile::minimal(levi.d(), levi.r());
    let forms = simple_data(&minimal, levi)?.coweights;
    Ok(ZetaProductGerm::new(provider, levi.d(), places.clone(), forms))
}

/// Route values, their spread and the worst cancellation residual.
#[derive(Clone, Debug)]
pub struct Diagnostics {
    pub routes: BTreeMap<String, Float>,
    /// Largest `|x - y| / max(|x|, |y|, 1)` over pairs of routes.
    pub max_route_disagreement: Float,
    pub cancellation_residual: Float,
    pub direction: LinearForm,
}

/// `a^L(S)` for a standard `L ⊇ M_0`.
#[derive(Clone, Debug)]
pub struct LevelCoefficient {
    pub levi: BlockProfile,
    pub value: Float,
    pub diagnostics: Diagnostics,
}

/// One row of the expansion.
#[derive(Clone, Debug)]
pub struct CoefficientResult {
    pub levi: LeviDatum,
    /// The induced orbit `(r^d)`.
    pub orbit: Partition,
    pub a_value: Float,
    pub a_tilde_value: Float,
    /// `|W^L| / |W|`.
    pub weyl_weight: Rational,
    pub standard_levi_count: usize,
    pub places: PlaceSet,
    pub diagnostics: Diagnostics,
}

/// One term `ã^L(S, o') J_L^G(o', f_S)` of the expansion.
#[derive(Clone, Debug)]
pub struct ExpansionTerm {
    pub result: CoefficientResult,
    /// Label of the local weighted orbital integral, which is not evaluated.
    pub local_integral: String,
}

#[derive(Clone, Debug)]
pub struct FormalExpansion {
    pub d: usize,
    pub r: usize,
    pub orbit: Partition,
    pub places: PlaceSet,
    pub minimal_levi_volume: Float,
    pub terms: Vec<ExpansionTerm>,
}

/// Coefficient engine: a zeta provider plus evaluation settings.
#[derive(Clone, Debug)]
pub struct Calculator {
    provider: Arc<ZetaProvider>,
    guard: usize,
    seed: u64,
}

impl Calculator {
    pub fn new(provider: Arc<ZetaProvider>, guard: usize, seed: u64) -> Self {
        Calculator { provider, guard, seed }
    }

    pub fn provider(&self) -> &Arc<ZetaProvider> {
        &self.provider
    }

    pub fn prec(&self) -> u32 {
        self.provider.prec()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn options(&self) -> EvalOptions {
        EvalOptions { guard: self.guard, tolerance: self.provider.tolerance() }
    }

    /// Threshold on the relative spread between routes.
    pub fn route_tolerance(&self) -> Float {
        pow2_neg(self.provider.tolerance_exponent(), self.prec())
    }

    /// All four routes on an arbitrary germ at level `L`.
    pub fn all_routes(&self, level: &Level, germ: &dyn SmoothGerm, dir: &GenericDirection) -> Result<Vec<(String, RouteValue)>> {
        let opts = self.options();
        Ok(vec![
            (ROUTES[0].to_string(), level.symmetrized_value(germ, dir, &opts)?),
            (ROUTES[1].to_string(), level.tilde_c(germ, dir, &opts)?),
            (ROUTES[2].to_string(), level.c(germ, dir, &opts)?),
            (ROUTES[3].to_string(), level.arthur_derivative_value(germ, dir, &opts)?),
        ])
    }

    /// `a^L(S)`: the symmetrized route, cross-checked against the other three.
    pub fn a_coefficient(&self, levi: &BlockProfile, places: &PlaceSet) -> Result<LevelCoefficient> {
        let level = Level::new(levi)?;
        let dir = level.generic_direction(self.seed)?;
        let germ = phi_for_level(self.provider.clone(), levi, places)?;
        let routes = self.all_routes(&level, &germ, &dir)?;
        let prec = self.prec();
        let one = Float::with_val(prec, 1);
        let mut spread = Float::new(prec);
        let mut residual = Float::new(prec);
        for (i, (_, a)) in routes.iter().enumerate() {
            if a.residual > residual {
                residual = a.residual.clone();
            }
            for (_, b) in &routes[i + 1..] {
                let diff = relative_difference(&a.value, &b.value, &one);
                if diff > spread {
                    spread = diff;
                }
            }
        }
        let tolerance = self.route_tolerance();
        if spread > tolerance {
            return Err(Error::RouteDisagreement {
                what: format!("a^L for L = {levi}, S = {{{places}}}"),
                spread: crate::precision::to_decimal(&Float::with_val(53, &spread)),
                tolerance: crate::precision::to_decimal(&Float::with_val(53, &tolerance)),
            });
        }
        let value = routes[0].1.value.clone();
        Ok(LevelCoefficient {
            levi: levi.clone(),
            value,
            diagnostics: Diagnostics {
                routes: routes.into_iter().map(|(k, v)| (k, v.value)).collect(),
                max_route_disagreement: spread,
                cancellation_residual: residual,
                direction: dir.lambda,
            },
        })
    }

    /// `a^L(S ∪ {p})` from the `S` germ times the local correction at `p`,
    /// symmetrized route only.
    pub fn a_coefficient_adding_prime(&self, levi: &BlockProfile, places: &PlaceSet, prime: u64) -> Result<Float> {
        let level = Level::new(levi)?;
        let dir = level.generic_direction(self.seed)?;
        let base = phi_for_level(self.provider.clone(), levi, places)?;
        let correction = PlaceCorrectionGerm::new(self.provider.clone(), levi.d(), prime, base.forms().to_vec())?;
        let germ = ProductGerm::new(vec![Box::new(base), Box::new(correction)], self.prec());
        Ok(level.symmetrized_value(&germ, &dir, &self.options())?.value)
    }

    /// `ã^L(S, o') = vol([M_0]^1) a^{L'}(S)` with `L'` the standard conjugate of `L`.
    pub fn a_tilde(&self, d: usize, r: usize, levi: &LeviDatum, places: &PlaceSet) -> Result<CoefficientResult> {
        let target = Partition::rectangle(r, d);
        if levi.n() != d * r || induce(levi) != target {
            return Err(Error::NotInducing { target: target.parts().to_vec() });
        }
        let profile = levi
            .block_profile(d)
            .ok_or_else(|| Error::NotInducing { target: target.parts().to_vec() })?;
        let a = self.a_coefficient(&profile, places)?;
        let volume = self.provider.volume_minimal_levi(d, r)?;
        let weyl_weight = Rational::from((levi.weyl_order(), crate::orbits::factorial(d * r)));
        let canonical = levi.canonical();
        let standard_levi_count = enumerate_inducing_pairs(d, r)?
            .into_iter()
            .find(|c| c.levi == canonical)
            .map_or(0, |c| c.standard_levi_count);
        Ok(CoefficientResult {
            levi: canonical,
            orbit: target,
            a_tilde_value: Float::with_val(self.prec(), &volume * &a.value),
            a_value: a.value,
            weyl_weight,
            standard_levi_count,
            places: places.clone(),
            diagnostics: a.diagnostics,
        })
    }

    /// One term per class of pairs inducing `(r^d)`, in the canonical order.
    pub fn expansion(&self, d: usize, r: usize, places: &PlaceSet) -> Result<FormalExpansion> {
        let classes = enumerate_inducing_pairs(d, r)?;
        let terms: Vec<ExpansionTerm> = classes
            .par_iter()
            .map(|class| {
                let result = self.a_tilde(d, r, &class.levi, places)?;
                let local_integral = format!("J_L^G(o', f_S) [L = {}, S = {{{}}}]", class.levi, places);
                Ok(ExpansionTerm { result, local_integral })
            })
            .collect::<Result<_>>()?;
        Ok(FormalExpansion {
            d,
            r,
            orbit: Partition::rectangle(r, d),
            places: places.clone(),
            minimal_levi_volume: self.provider.volume_minimal_levi(d, r)?,
            terms,
        })
    }

    /// Jet in `t` of `J_{P,X}(1, tλ0) = vol([M_X]^1) θ_P(tλ0)^{-1} Π_{α ∈ Δ_0^P} Z_d(d + <tλ0^P, ϖ_α^∨>/d)`.
    pub fn j_p_unit(&self, profile: &BlockProfile, lambda0: &LinearForm, order: usize) -> Result<Jet> {
        let d = profile.d();
        let minimal = BlockProfile::minimal(d, profile.r());
        let coweights = simple_data(&minimal, profile)?.coweights;
        let theta = ThetaFactor::theta(profile, &BlockProfile::group(d, profile.r()))?;
        let prec = self.prec();
        let (upper, _) = project(lambda0, profile);
        // each Z_d factor has a simple pole; carry enough terms through the product
        let inner = order + coweights.len() + theta.degree() + 1;
        let theta_end = (2 * theta.degree() + inner + 1) as i32;
        let dd = Rational::from(d as u64);
        let mut acc = Jet::constant(self.provider.volume_centralizer_levi(profile)?, inner as i32 + 1);
        for v in &coweights {
            let rate = upper.dot(v) / &dd;
            if rate == 0 {
                return Err(Error::InvalidArgument("direction is not generic for J_P".into()));
            }
            let z = compose_linear(&|m: usize| self.provider.z_jet(d, &Rational::from(d as u64), m), &rate, inner)?;
            acc = &acc * &z;
        }
        let theta_jet = theta.on_line(lambda0, theta_end, prec);
        let out = &acc * &theta_jet.recip()?;
        if out.end() < order as i32 + 1 {
            return Err(Error::Truncation(format!("J_P jet for {profile}")));
        }
        Ok(out.truncate(order as i32 + 1))
    }

    /// Jet in `t` of `J̃_{G,X}(1, tλ0) = d^{r-1} covol(Δ̂_0^∨)^{-1} vol([G_X]^1) Π_α Z̃_d(d + <tλ0, ϖ_α^∨>/d)`.
    pub fn j_tilde_unit(&self, d: usize, r: usize, lambda0: &LinearForm, order: usize) -> Result<Jet> {
        let group = BlockProfile::group(d, r);
        let minimal = BlockProfile::minimal(d, r);
        let hat = ThetaFactor::hat_theta(&minimal, &group)?;
        let prec = self.prec();
        let mut constant = self.provider.volume_centralizer_levi(&group)?;
        constant *= Float::with_val(prec, Integer::from(d).pow(r as u32 - 1));
        constant /= hat.covolume.value(prec);
        let dd = Rational::from(d as u64);
        let mut acc = Jet::constant(constant, order as i32 + 1);
        for v in &hat.forms {
            let rate = lambda0.dot(v) / &dd;
            let z = compose_linear(
                &|m: usize| self.provider.ztilde_jet(d, &Rational::from(d as u64), m),
                &rate,
                order,
            )?;
            acc = &acc * &z;
        }
        Ok(acc.truncate(order as i32 + 1))
    }

    /// Largest relative coefficient mismatch in
    /// `J̃(1, λ^P) = θ̂_0^P(λ) J_{P,X}(1, λ) θ_P(λ)` along `λ = tλ0`.
    pub fn prolongement_residual(&self, profile: &BlockProfile, lambda0: &LinearForm, order: usize) -> Result<Float> {
        let d = profile.d();
        let r = profile.r();
        let prec = self.prec();
        let (upper, _) = project(lambda0, profile);
        let lhs = self.j_tilde_unit(d, r, &upper, order)?;
        let minimal = BlockProfile::minimal(d, r);
        let hat = ThetaFactor::hat_theta(&minimal, profile)?;
        let theta = ThetaFactor::theta(profile, &BlockProfile::group(d, r))?;
        let end = order as i32 + 1;
        let jp = self.j_p_unit(profile, lambda0, order + hat.degree() + theta.degree())?;
        let wide = end + 2 * (hat.degree() + theta.degree()) as i32 + 4;
        let rhs = &(&jp * &hat.on_line(lambda0, wide, prec)) * &theta.on_line(lambda0, wide, prec);
        let one = Float::with_val(prec, 1);
        let mut worst = Float::new(prec);
        for k in rhs.low().min(0)..end {
            let a = lhs.coeff(k).ok_or_else(|| Error::Truncation("J̃ jet".into()))?;
            let b = rhs.coeff(k).ok_or_else(|| Error::Truncation("θ̂ J_P θ jet".into()))?;
            let diff = relative_difference(&a, &b, &one);
            if diff > worst {
                worst = diff;
            }
        }
        Ok(worst)
    }

    /// `J_o(1)`: the value at `0` of `|W_0|^{-1} Σ_w J̃(1, wλ) θ_0(wλ)^{-1}`.
    pub fn j_o_unit(&self, d: usize, r: usize) -> Result<RouteValue> {
        let level = Level::new(&BlockProfile::group(d, r))?;
        let dir = level.generic_direction(self.seed)?;
        let germ = UnitGerm { calc: self, d, r };
        level.symmetrized_value(&germ, &dir, &self.options())
    }
}

/// `λ -> J̃_{G,X}(1, λ)` as a germ.
struct UnitGerm<'a> {
    calc: &'a Calculator,
    d: usize,
    r: usize,
}

impl SmoothGerm for UnitGerm<'_> {
    fn jet_along(&self, direction: &LinearForm, order: usize) -> Result<Jet> {
        self.calc.j_tilde_unit(self.d, self.r, direction, order)
    }

    fn prec(&self) -> u32 {
        self.calc.prec()
    }
}
