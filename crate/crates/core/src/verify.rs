//! Named invariant suites. Each returns the worst residual it saw and the
//! cases that failed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};
use serde::Serialize;

use crate::coefficients::Calculator;
use crate::error::{Error, Result};
use crate::gmfamily::germs::{ExpGerm, PolynomialGerm, ProductGerm, ZetaProductGerm};
use crate::gmfamily::{Level, SmoothGerm};
use crate::orbits::{
    block_nilpotent_matrix, induce, induction_oracle, jordan_type, partitions, rank_powers_oracle, LeviDatum,
};
use crate::precision::{pow2_neg, relative_difference, to_decimal_at};
use crate::rootdata::{borel_coroot_covolume, enumerate_parabolics, BlockProfile, LinearForm, ThetaFactor};
use crate::zeta::PlaceSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    CpIdentity,
    Covolumes,
    Prolongement4,
    InductionOracle,
    Routes,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::CpIdentity, Suite::Covolumes, Suite::Prolongement4, Suite::InductionOracle, Suite::Routes];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CpIdentity => "cp-identity",
            Suite::Covolumes => "covolumes",
            Suite::Prolongement4 => "prolongement4",
            Suite::InductionOracle => "induction-oracle",
            Suite::Routes => "routes",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub max_residual: Float,
    pub tolerance: Float,
    /// Secondary maxima, e.g. cancellation residuals.
    pub extra: BTreeMap<String, Float>,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite, tolerance: Float) -> Self {
        SuiteReport {
            suite,
            cases: 0,
            max_residual: Float::new(tolerance.prec()),
            tolerance,
            extra: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    fn record(&mut self, case: impl FnOnce() -> String, residual: &Float) {
        self.cases += 1;
        if *residual > self.max_residual {
            self.max_residual.clone_from(residual);
        }
        // NaN counts as a failure
        if residual.partial_cmp(&self.tolerance).map_or(true, |o| o.is_gt()) {
            self.failures.push(format!("{}: residual {}", case(), to_decimal_at(residual, 24)));
        }
    }

    fn record_extra(&mut self, key: &str, value: &Float) {
        let slot = self.extra.entry(key.to_string()).or_insert_with(|| Float::new(value.prec()));
        if *value > *slot {
            slot.clone_from(value);
        }
    }

    fn fail(&mut self, case: String, err: &Error) {
        self.cases += 1;
        self.failures.push(format!("{case}: {err}"));
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.max_residual <= self.tolerance
    }

    pub fn record_json(&self) -> SuiteRecord {
        SuiteRecord {
            suite: self.suite.name().to_string(),
            cases: self.cases,
            max_residual: to_decimal_at(&self.max_residual, 24),
            tolerance: to_decimal_at(&self.tolerance, 24),
            extra: self.extra.iter().map(|(k, v)| (k.clone(), to_decimal_at(v, 24))).collect(),
            passed: self.passed(),
            failures: self.failures.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteRecord {
    pub suite: String,
    pub cases: usize,
    pub max_residual: String,
    pub tolerance: String,
    pub extra: BTreeMap<String, String>,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// `(d, r)` with `1 <= d r <= n_max`.
pub fn shapes(n_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for d in 1..=n {
            if n % d == 0 {
                out.push((d, n / d));
            }
        }
    }
    out
}

fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    Rational::from((rng.gen_range(-num..=num), rng.gen_range(1..=den)))
}

fn random_form(rng: &mut ChaCha8Rng, n: usize) -> LinearForm {
    LinearForm::new((0..n).map(|_| random_rational(rng, 3, 3)).collect())
}

/// Germ number `index` of the randomized family used by the `c = c̃` check:
/// exponentials of rational linear forms, polynomials of degree up to
/// `k + 2`, and products of `Z̃^S_d` factors with an exponential.
pub fn random_germ(calc: &Calculator, d: usize, r: usize, index: usize) -> Box<dyn SmoothGerm> {
    let n = d * r;
    let k = r - 1;
    let prec = calc.prec();
    let mut rng = ChaCha8Rng::seed_from_u64(calc.seed() ^ ((n as u64) << 32 | (d as u64) << 16 | index as u64));
    match index % 3 {
        0 => Box::new(ExpGerm::new(random_form(&mut rng, n), prec)),
        1 => {
            let terms = (0..rng.gen_range(1..=4))
                .map(|_| {
                    let degree = rng.gen_range(0..=k + 2);
                    (random_rational(&mut rng, 5, 4), (0..degree).map(|_| random_form(&mut rng, n)).collect())
                })
                .collect();
            Box::new(PolynomialGerm::new(terms, prec))
        }
        _ => {
            let places = [PlaceSet::empty(), PlaceSet::new(vec![2], false).expect("valid"), PlaceSet::new(vec![3, 5], false).expect("valid")]
                [rng.gen_range(0..3)]
            .clone();
            let forms = (0..rng.gen_range(1..=3)).map(|_| random_form(&mut rng, n)).collect();
            let zeta = ZetaProductGerm::new(Arc::clone(calc.provider()), d, places, forms);
            let exp = ExpGerm::new(random_form(&mut rng, n), prec);
            Box::new(ProductGerm::new(vec![Box::new(zeta), Box::new(exp)], prec))
        }
    }
}

/// `c(φ) = c̃(φ)` on `germs` random germs at the top level of every `(d, r)`.
pub fn cp_identity(calc: &Calculator, n_max: usize, germs: usize) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::CpIdentity, calc.route_tolerance());
    let one = Float::with_val(calc.prec(), 1);
    for (d, r) in shapes(n_max) {
        let outcome = (|| -> Result<Vec<(Float, Float)>> {
            let level = Level::new(&BlockProfile::group(d, r))?;
            let dir = level.generic_direction(calc.seed())?;
            (0..germs)
                .map(|i| {
                    let germ = random_germ(calc, d, r, i);
                    let a = level.c(germ.as_ref(), &dir, &calc.options())?;
                    let b = level.tilde_c(germ.as_ref(), &dir, &calc.options())?;
                    let res = Float::with_val(calc.prec(), a.residual.max_ref(&b.residual));
                    Ok((relative_difference(&a.value, &b.value, &one), res))
                })
                .collect()
        })();
        match outcome {
            Ok(values) => {
                for (i, (diff, res)) in values.iter().enumerate() {
                    report.record(|| format!("d={d} r={r} germ {i}"), diff);
                    report.record_extra("max_cancellation_residual", res);
                }
            }
            Err(e) => report.fail(format!("d={d} r={r}"), &e),
        }
    }
    report
}

/// Exact covolume identities for `d = 1`, then the volume lemma
/// `covol(Δ̂_0^P)/covol(Δ̂_0^G) vol([G_X]^1)/vol([M_X]^1) (d Z̃_d(d))^{|Δ_P|} = 1`
/// for every `(d, r)` and `P`.
pub fn covolumes(calc: &Calculator, n_max: usize) -> SuiteReport {
    let prec = calc.prec();
    let mut report = SuiteReport::new(Suite::Covolumes, calc.route_tolerance());
    let zero = Float::new(prec);
    let one = Float::with_val(prec, 1);
    for n in 2..=n_max.max(2) {
        match borel_coroot_covolume(n) {
            Ok(c) if *c.gram_determinant() == n as u32 => report.record(|| format!("coroots of GL({n})"), &zero),
            Ok(c) => report.record(|| format!("coroots of GL({n}): Gram {}", c.gram_determinant()), &one),
            Err(e) => report.fail(format!("coroots of GL({n})"), &e),
        }
        for p in enumerate_parabolics(1, n) {
            let borel = BlockProfile::minimal(1, n);
            match ThetaFactor::hat_theta(&borel, &p).and_then(|h| Ok((h, ThetaFactor::theta(&borel, &p)?))) {
                Ok((h, t)) => {
                    let product = h.covolume.times(&t.covolume);
                    let residual = if *product.gram_determinant() == 1 { &zero } else { &one };
                    report.record(|| format!("dual lattices for {p}"), residual);
                }
                Err(e) => report.fail(format!("dual lattices for {p}"), &e),
            }
        }
    }
    for (d, r) in shapes(n_max) {
        let outcome = (|| -> Result<Vec<(BlockProfile, Float)>> {
            let provider = calc.provider();
            let group = BlockProfile::group(d, r);
            let minimal = BlockProfile::minimal(d, r);
            let hat_g = ThetaFactor::hat_theta(&minimal, &group)?.covolume.value(prec);
            let vol_g = provider.volume_centralizer_levi(&group)?;
            let base = Float::with_val(prec, d as u32) * provider.ztilde_value(d)?;
            enumerate_parabolics(d, r)
                .into_iter()
                .map(|p| {
                    let hat_p = ThetaFactor::hat_theta(&minimal, &p)?.covolume.value(prec);
                    let vol_m = provider.volume_centralizer_levi(&p)?;
                    let mut x = Float::with_val(prec, &hat_p / &hat_g);
                    x *= &vol_g;
                    x /= &vol_m;
                    for _ in 1..p.len() {
                        x *= &base;
                    }
                    Ok((p, relative_difference(&x, &one, &one)))
                })
                .collect()
        })();
        match outcome {
            Ok(rows) => {
                for (p, res) in rows {
                    report.record(|| format!("volume lemma for {p}"), &res);
                }
            }
            Err(e) => report.fail(format!("volume lemma d={d} r={r}"), &e),
        }
    }
    report
}

/// `J̃(1, λ^P) = θ̂_0^P(λ) J_{P,X}(1, λ) θ_P(λ)` at `points` certified
/// directions for every `P` with `n <= n_max`.
pub fn prolongement4(calc: &Calculator, n_max: usize, points: usize, order: usize) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Prolongement4, calc.route_tolerance());
    for (d, r) in shapes(n_max) {
        let level = match Level::new(&BlockProfile::group(d, r)) {
            Ok(l) => l,
            Err(e) => {
                report.fail(format!("d={d} r={r}"), &e);
                continue;
            }
        };
        for i in 0..points {
            let seed = calc.seed().wrapping_add(1000 * i as u64 + 1);
            let dir = match level.generic_direction(seed) {
                Ok(dir) => dir,
                Err(e) => {
                    report.fail(format!("d={d} r={r} point {i}"), &e);
                    continue;
                }
            };
            for p in enumerate_parabolics(d, r) {
                match calc.prolongement_residual(&p, &dir.lambda, order) {
                    Ok(res) => report.record(|| format!("P={p} point {i}"), &res),
                    Err(e) => report.fail(format!("P={p} point {i}"), &e),
                }
            }
        }
    }
    report
}

/// Ordered Levi tuples `(n_1, o_1), ..., (n_k, o_k)` with `Σ n_i = n`.
pub fn levi_tuples(n: usize) -> Vec<LeviDatum> {
    fn go(rest: usize, acc: &mut Vec<(usize, crate::orbits::Partition)>, out: &mut Vec<LeviDatum>) {
        if rest == 0 {
            let (parts, orbits) = acc.iter().cloned().unzip();
            out.push(LeviDatum::new(parts, orbits).expect("valid tuple"));
            return;
        }
        for m in 1..=rest {
            for o in partitions(m) {
                acc.push((m, o));
                go(rest - m, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

/// Partition-sum induction against ranks of powers of a generic element of
/// `o' + n_P` for every Levi tuple with `n <= levi_max`, and the Jordan type
/// of `X_P` against the same oracle for every `P` with `n <= xp_max`.
pub fn induction(seed: u64, levi_max: usize, xp_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::InductionOracle, Float::new(24));
    let zero = Float::new(24);
    let one = Float::with_val(24, 1);
    for n in 1..=levi_max {
        for (i, levi) in levi_tuples(n).iter().enumerate() {
            match induction_oracle(levi, seed.wrapping_add(i as u64), 3) {
                Ok(o) if o == induce(levi) => report.record(|| levi.to_string(), &zero),
                Ok(o) => report.record(|| format!("{levi}: oracle {o}, sum {}", induce(levi)), &one),
                Err(e) => report.fail(levi.to_string(), &e),
            }
        }
    }
    for (d, r) in shapes(xp_max) {
        for p in enumerate_parabolics(d, r) {
            match rank_powers_oracle(&block_nilpotent_matrix(&p)) {
                Ok(o) if o == jordan_type(&p) => report.record(|| format!("X_P for {p}"), &zero),
                Ok(o) => report.record(|| format!("X_P for {p}: oracle {o}"), &one),
                Err(e) => report.fail(format!("X_P for {p}"), &e),
            }
        }
    }
    report
}

/// All four routes on every `a^L(S)` with `n <= n_max`.
pub fn routes(calc: &Calculator, n_max: usize, place_sets: &[PlaceSet]) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Routes, calc.route_tolerance());
    let cancel_limit = pow2_neg(128, calc.prec());
    for (d, r) in shapes(n_max) {
        for levi in enumerate_parabolics(d, r) {
            for s in place_sets {
                match calc.a_coefficient(&levi, s) {
                    Ok(a) => {
                        report.record(|| format!("L={levi} S={{{s}}}"), &a.diagnostics.max_route_disagreement);
                        report.record_extra("max_cancellation_residual", &a.diagnostics.cancellation_residual);
                        if a.diagnostics.cancellation_residual > cancel_limit {
                            report.failures.push(format!("L={levi} S={{{s}}}: cancellation residual above 2^-128"));
                        }
                    }
                    Err(e) => report.fail(format!("L={levi} S={{{s}}}"), &e),
                }
            }
        }
    }
    report
}

/// The place sets used by default for the route suite.
pub fn default_place_sets() -> Vec<PlaceSet> {
    vec![
        PlaceSet::empty(),
        PlaceSet::new(vec![2], false).expect("valid"),
        PlaceSet::new(vec![2, 3, 5], false).expect("valid"),
    ]
}

/// Runs a suite with its default sizes, scaled by `n`.
pub fn run(suite: Suite, calc: &Calculator, n: Option<usize>) -> SuiteReport {
    match suite {
        Suite::CpIdentity => cp_identity(calc, n.unwrap_or(6), 20),
        Suite::Covolumes => covolumes(calc, n.unwrap_or(8)),
        Suite::Prolongement4 => prolongement4(calc, n.unwrap_or(6), 10, 2),
        Suite::InductionOracle => induction(calc.seed(), n.unwrap_or(8), n.map_or(10, |n| n + 2)),
        Suite::Routes => routes(calc, n.unwrap_or(6), &default_place_sets()),
    }
}
