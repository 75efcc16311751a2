use std::process::ExitCode;

use anyhow::{bail, Context};
use arthur_coeff::coefficients::Calculator;
use arthur_coeff::orbits::{enumerate_inducing_pairs, induce};
use arthur_coeff::precision::{relative_difference, DEFAULT_PRECISION};
use arthur_coeff::report::{coefficient_diagnostics, expansion_records, CoefficientRecord, NumberRecord};
use arthur_coeff::rootdata::{enumerate_parabolics, BlockProfile, ThetaFactor};
use arthur_coeff::verify::{self, Suite};
use arthur_coeff::zeta::Place;
use arthur_coeff::{Error, PlaceSet, Report, RunConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Float, Rational};
use serde_json::json;

mod table;

#[derive(Parser, Debug)]
#[command(name = "arthur-coeff", version, about = "Global coefficients of the fine geometric expansion for GL(n) at the orbits (r^d)")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Precision in bits.
    #[arg(long, global = true, env = "ARTHUR_COEFF_PREC", default_value_t = DEFAULT_PRECISION)]
    prec: u32,

    /// Extra jet orders carried through products.
    #[arg(long, global = true, default_value_t = 4)]
    guard: usize,

    /// Seed for generic directions and random test data.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// "Q" or a field data file.
    #[arg(long, global = true, default_value = "Q")]
    field: String,

    /// Cancellation and route tolerance 2^-e (default: prec/2).
    #[arg(long = "tol-exp", global = true)]
    tolerance_exponent: Option<u32>,

    /// Worker threads for independent coefficient terms.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// `GL(n)` with `n = d r`; `--n` alone means `d = 1`.
#[derive(Args, Debug, Clone)]
struct Shape {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

impl Shape {
    fn resolve(&self) -> anyhow::Result<(usize, usize)> {
        let (d, r) = match (self.d, self.r, self.n) {
            (Some(d), Some(r), None) => (d, r),
            (Some(d), Some(r), Some(n)) if d * r == n => (d, r),
            (Some(d), None, Some(n)) if d > 0 && n % d == 0 => (d, n / d),
            (None, Some(r), Some(n)) if r > 0 && n % r == 0 => (n / r, r),
            (None, None, Some(n)) => (1, n),
            (None, Some(r), None) => (1, r),
            _ => bail!("give --d and --r, or --n (optionally with one of them) with n = d r"),
        };
        if d == 0 || r == 0 {
            bail!("d and r must be positive");
        }
        Ok((d, r))
    }

    fn json(&self, d: usize, r: usize) -> serde_json::Value {
        json!({ "d": d, "r": r, "n": d * r })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients a^L(S) and ã^L(S, o') for every pair (L, o') inducing (r^d).
    Coeff {
        #[command(flatten)]
        shape: Shape,
        /// Places in S: comma-separated primes and optionally "inf".
        #[arg(long = "S", default_value = "")]
        places: String,
    },
    /// The fine expansion of J_o at (r^d) as a formal combination.
    Expansion {
        #[command(flatten)]
        shape: Shape,
        #[arg(long = "S", default_value = "")]
        places: String,
    },
    /// Jets of the completed zeta function and its products.
    Zeta {
        #[arg(long, value_enum, default_value_t = ZetaFunction::Xi)]
        eval: ZetaFunction,
        /// Rational center, e.g. 2 or 3/2.
        #[arg(long, default_value = "2")]
        at: String,
        /// Highest power of the jet.
        #[arg(long, default_value_t = 0)]
        order: usize,
        /// Index m of Z_m, Z̃_m, Z̃^S_m.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Place for xi-local: a prime or "inf".
        #[arg(long, default_value = "inf")]
        place: String,
        #[arg(long = "S", default_value = "")]
        places: String,
    },
    /// Volumes vol([M_X]^1) and the volume identity for every standard P.
    Volumes {
        #[command(flatten)]
        shape: Shape,
    },
    /// Classes of pairs (L, o') inducing (r^d).
    Orbits {
        #[command(flatten)]
        shape: Shape,
    },
    /// Run a named invariant suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        /// Largest n covered (suite default if omitted).
        #[arg(long)]
        n: Option<usize>,
        /// Jet order for prolongement4.
        #[arg(long)]
        order: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ZetaFunction {
    /// ξ_F(at + h)
    Xi,
    /// ξ_v(at + h)
    XiLocal,
    /// Z_m(at + h)
    Z,
    /// Z̃_m(at + h)
    Ztilde,
    /// Z̃^S_m(m + h)
    ZtildeS,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure kinds with distinct exit codes.
enum Outcome {
    Ok,
    SuiteFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::SuiteFailed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Error>() {
                Some(Error::RouteDisagreement { .. }) | Some(Error::Cancellation { .. }) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn config(global: &GlobalArgs) -> RunConfig {
    let mut c = RunConfig::new(global.prec);
    c.jet_guard_order = global.guard;
    c.seed = global.seed;
    c.field = global.field.clone();
    if let Some(e) = global.tolerance_exponent {
        c.tolerance_exponent = e;
    }
    c
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    if cli.global.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.jobs)
        .build_global()
        .context("starting the worker pool")?;
    let config = config(&cli.global);
    let calc = config.calculator()?;
    let bits = config.precision_bits;
    let mut outcome = Outcome::Ok;
    let report = match &cli.command {
        Command::Coeff { shape, places } => {
            let (d, r) = shape.resolve()?;
            let s: PlaceSet = places.parse()?;
            let expansion = calc.expansion(d, r, &s)?;
            let mut report = Report::new(config.clone(), "coeff").query("shape", shape.json(d, r)).query("S", s.to_string());
            for term in &expansion.terms {
                report.push(CoefficientRecord::new(&term.result, bits))?;
            }
            let rows: Vec<_> = expansion.terms.iter().map(|t| &t.result).collect();
            report.diagnostics = coefficient_diagnostics(&rows, &calc.route_tolerance());
            report
        }
        Command::Expansion { shape, places } => {
            let (d, r) = shape.resolve()?;
            let s: PlaceSet = places.parse()?;
            let expansion = calc.expansion(d, r, &s)?;
            let mut report =
                Report::new(config.clone(), "expansion").query("shape", shape.json(d, r)).query("S", s.to_string());
            for rec in expansion_records(&expansion, bits) {
                report.push(rec)?;
            }
            let rows: Vec<_> = expansion.terms.iter().map(|t| &t.result).collect();
            report.diagnostics = coefficient_diagnostics(&rows, &calc.route_tolerance());
            report.diagnostics.insert("orbit".into(), json!(expansion.orbit.parts()));
            report
                .diagnostics
                .insert("minimal_levi_volume".into(), serde_json::to_value(NumberRecord::exact(&expansion.minimal_levi_volume, bits))?);
            report
        }
        Command::Zeta { eval, at, order, n, place, places } => zeta_report(&calc, config.clone(), *eval, at, *order, *n, place, places)?,
        Command::Volumes { shape } => {
            let (d, r) = shape.resolve()?;
            volumes_report(&calc, config.clone(), d, r)?.query("shape", shape.json(d, r))
        }
        Command::Orbits { shape } => {
            let (d, r) = shape.resolve()?;
            let mut report = Report::new(config.clone(), "orbits").query("shape", shape.json(d, r));
            for class in enumerate_inducing_pairs(d, r)? {
                report.push(json!({
                    "levi": class.levi.to_string(),
                    "levi_sizes": class.levi.parts,
                    "levi_orbits": class.levi.orbits.iter().map(|o| o.parts().to_vec()).collect::<Vec<_>>(),
                    "induced_orbit": induce(&class.levi).parts(),
                    "weyl_weight": class.weyl_weight.to_string(),
                    "standard_levi_count": class.standard_levi_count,
                    "conjugate_count": class.conjugate_count.to_string(),
                }))?;
            }
            report.diagnostics.insert("classes".into(), json!(report.results.len()));
            report
        }
        Command::Verify { suite, n, order } => {
            let result = match (suite, order) {
                (Suite::Prolongement4, Some(k)) => verify::prolongement4(&calc, n.unwrap_or(6), 10, *k),
                _ => verify::run(*suite, &calc, *n),
            };
            if !result.passed() {
                outcome = Outcome::SuiteFailed;
            }
            let mut report = Report::new(config.clone(), "verify").query("suite", suite.name());
            if let Some(n) = n {
                report = report.query("n", *n);
            }
            report.diagnostics.insert("passed".into(), json!(result.passed()));
            report.push(result.record_json())?;
            report
        }
    };
    match cli.global.format {
        Format::Json => print!("{}", report.to_json()?),
        Format::Table => print!("{}", table::render(&report)),
    }
    Ok(outcome)
}

#[allow(clippy::too_many_arguments)]
fn zeta_report(
    calc: &Calculator,
    config: RunConfig,
    eval: ZetaFunction,
    at: &str,
    order: usize,
    m: usize,
    place: &str,
    places: &str,
) -> anyhow::Result<Report> {
    let provider = calc.provider();
    let bits = config.precision_bits;
    let center: Rational = at.parse().with_context(|| format!("--at {at:?} is not a rational number"))?;
    let s: PlaceSet = places.parse()?;
    let (name, jet) = match eval {
        ZetaFunction::Xi => ("xi", provider.xi_jet(&center, order)?),
        ZetaFunction::XiLocal => {
            let v = if place.eq_ignore_ascii_case("inf") {
                Place::Archimedean
            } else {
                Place::Finite(place.parse().with_context(|| format!("bad place {place:?}"))?)
            };
            ("xi_local", provider.xi_local_jet(v, &center, order)?)
        }
        ZetaFunction::Z => ("Z", provider.z_jet(m, &center, order)?),
        ZetaFunction::Ztilde => ("Ztilde", provider.ztilde_jet(m, &center, order)?),
        ZetaFunction::ZtildeS => ("Ztilde_S", provider.ztilde_s_jet(m, &s, order)?),
    };
    let center_str = if eval == ZetaFunction::ZtildeS { m.to_string() } else { center.to_string() };
    let mut report = Report::new(config, "zeta")
        .query("function", name)
        .query("at", center_str.clone())
        .query("order", order);
    if matches!(eval, ZetaFunction::Z | ZetaFunction::Ztilde | ZetaFunction::ZtildeS) {
        report = report.query("index", m);
    }
    if eval == ZetaFunction::ZtildeS {
        report = report.query("S", s.to_string());
    }
    if eval == ZetaFunction::XiLocal {
        report = report.query("place", place.to_string());
    }
    for k in jet.low()..jet.end() {
        let c = jet.coeff(k).expect("inside the jet");
        report.push(json!({
            "function": name,
            "at": center_str,
            "power": k,
            "coefficient": NumberRecord::exact(&c, bits),
        }))?;
    }
    report.diagnostics.insert("field".into(), serde_json::to_value(provider.field().data())?);
    Ok(report)
}

fn volumes_report(calc: &Calculator, config: RunConfig, d: usize, r: usize) -> anyhow::Result<Report> {
    let provider = calc.provider();
    let bits = config.precision_bits;
    let prec = calc.prec();
    let mut report = Report::new(config, "volumes");
    let group = BlockProfile::group(d, r);
    let minimal = BlockProfile::minimal(d, r);
    let zero = Float::new(24);
    report.push(json!({
        "quantity": "vol([GL_n]^1)",
        "value": NumberRecord::exact(&provider.volume_gl(d * r)?, bits),
    }))?;
    report.push(json!({
        "quantity": "vol([M_0]^1)",
        "value": NumberRecord::exact(&provider.volume_minimal_levi(d, r)?, bits),
    }))?;
    let hat_g = ThetaFactor::hat_theta(&minimal, &group)?.covolume.value(prec);
    let vol_g = provider.volume_centralizer_levi(&group)?;
    let base = Float::with_val(prec, d as u32) * provider.ztilde_value(d)?;
    let one = Float::with_val(prec, 1);
    let mut worst = zero.clone();
    for p in enumerate_parabolics(d, r) {
        let hat = ThetaFactor::hat_theta(&minimal, &p)?;
        let vol_m = provider.volume_centralizer_levi(&p)?;
        let mut lemma = Float::with_val(prec, hat.covolume.value(prec) / &hat_g);
        lemma *= &vol_g;
        lemma /= &vol_m;
        for _ in 1..p.len() {
            lemma *= &base;
        }
        let residual = relative_difference(&lemma, &one, &one);
        if residual > worst {
            worst = Float::with_val(24, &residual);
        }
        report.push(json!({
            "quantity": "vol([M_X]^1)",
            "parabolic": p.composition(),
            "value": NumberRecord::exact(&vol_m, bits),
            "coweight_covolume_gram": hat.covolume.gram_determinant().to_string(),
            "volume_identity": NumberRecord::new(&lemma, bits, &residual),
        }))?;
    }
    report.diagnostics.insert("max_volume_identity_residual".into(), json!(arthur_coeff::precision::to_decimal_at(&worst, 24)));
    Ok(report)
}
