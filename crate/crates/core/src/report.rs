//! Run configuration and JSON records.
//!
//! Every number is written as a decimal string at the requested precision,
//! next to that precision and the residual of the computation behind it.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::coefficients::{Calculator, CoefficientResult, ExpansionTerm, FormalExpansion};
use crate::error::{Error, Result};
use crate::precision::{to_decimal_at, Precision, DEFAULT_PRECISION};
use crate::zeta::{NumberField, NumberFieldData, ZetaProvider};

/// Default number of extra jet orders carried through products.
pub const DEFAULT_GUARD: usize = 4;

/// Settings echoed into every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub jet_guard_order: usize,
    pub seed: u64,
    /// `"Q"` or the path of a field data file.
    pub field: String,
    pub tolerance_exponent: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::new(DEFAULT_PRECISION)
    }
}

impl RunConfig {
    pub fn new(precision_bits: u32) -> Self {
        RunConfig {
            precision_bits,
            jet_guard_order: DEFAULT_GUARD,
            seed: 0,
            field: "Q".into(),
            tolerance_exponent: Precision::new(precision_bits).default_tolerance_exponent(),
        }
    }

    pub fn precision(&self) -> Precision {
        Precision::new(self.precision_bits)
    }

    pub fn number_field(&self) -> Result<NumberField> {
        if self.field == "Q" {
            return Ok(NumberField::Rationals);
        }
        NumberField::from_data(&NumberFieldData::load(Path::new(&self.field))?)
    }

    pub fn provider(&self) -> Result<ZetaProvider> {
        if self.precision_bits < 32 {
            return Err(Error::InvalidArgument(format!("precision {} is below 32 bits", self.precision_bits)));
        }
        Ok(ZetaProvider::new(self.number_field()?, self.precision()).with_tolerance_exponent(self.tolerance_exponent))
    }

    pub fn calculator(&self) -> Result<Calculator> {
        Ok(Calculator::new(Arc::new(self.provider()?), self.jet_guard_order, self.seed))
    }
}

/// A real number with its precision and residual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberRecord {
    pub value: String,
    pub precision_bits: u32,
    pub residual: String,
}

impl NumberRecord {
    pub fn new(value: &Float, precision_bits: u32, residual: &Float) -> Self {
        NumberRecord {
            value: to_decimal_at(value, precision_bits),
            precision_bits,
            residual: to_decimal_at(residual, 24),
        }
    }

    /// A value that is correct up to rounding.
    pub fn exact(value: &Float, precision_bits: u32) -> Self {
        NumberRecord::new(value, precision_bits, &Float::new(24))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientRecord {
    pub levi: String,
    pub levi_sizes: Vec<usize>,
    pub levi_orbits: Vec<Vec<usize>>,
    pub orbit: Vec<usize>,
    pub standard_composition: Vec<usize>,
    pub weyl_weight: String,
    pub standard_levi_count: usize,
    pub places: String,
    pub a: NumberRecord,
    pub a_tilde: NumberRecord,
    pub routes: BTreeMap<String, String>,
    pub route_disagreement: String,
    pub direction: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub local_integral: Option<String>,
}

impl CoefficientRecord {
    pub fn new(result: &CoefficientResult, bits: u32) -> Self {
        let diag = &result.diagnostics;
        let d = result.orbit.parts().len();
        CoefficientRecord {
            levi: result.levi.to_string(),
            levi_sizes: result.levi.parts.clone(),
            levi_orbits: result.levi.orbits.iter().map(|o| o.parts().to_vec()).collect(),
            orbit: result.orbit.parts().to_vec(),
            standard_composition: result.levi.sorted_parts().iter().map(|p| p / d.max(1)).collect(),
            weyl_weight: result.weyl_weight.to_string(),
            standard_levi_count: result.standard_levi_count,
            places: result.places.to_string(),
            a: NumberRecord::new(&result.a_value, bits, &diag.cancellation_residual),
            a_tilde: NumberRecord::new(&result.a_tilde_value, bits, &diag.cancellation_residual),
            routes: diag.routes.iter().map(|(k, v)| (k.clone(), to_decimal_at(v, bits))).collect(),
            route_disagreement: to_decimal_at(&diag.max_route_disagreement, 24),
            direction: diag.direction.coords().iter().map(ToString::to_string).collect(),
            local_integral: None,
        }
    }

    pub fn from_term(term: &ExpansionTerm, bits: u32) -> Self {
        CoefficientRecord { local_integral: Some(term.local_integral.clone()), ..Self::new(&term.result, bits) }
    }
}

/// Largest route disagreement and residual over a set of rows.
pub fn coefficient_diagnostics(rows: &[&CoefficientResult], tolerance: &Float) -> BTreeMap<String, serde_json::Value> {
    let mut spread = Float::new(tolerance.prec());
    let mut residual = Float::new(tolerance.prec());
    for r in rows {
        if r.diagnostics.max_route_disagreement > spread {
            spread.clone_from(&r.diagnostics.max_route_disagreement);
        }
        if r.diagnostics.cancellation_residual > residual {
            residual.clone_from(&r.diagnostics.cancellation_residual);
        }
    }
    let mut out = BTreeMap::new();
    out.insert("rows".into(), serde_json::Value::from(rows.len()));
    out.insert("max_route_disagreement".into(), to_decimal_at(&spread, 24).into());
    out.insert("max_cancellation_residual".into(), to_decimal_at(&residual, 24).into());
    out.insert("route_tolerance".into(), to_decimal_at(tolerance, 24).into());
    out
}

pub fn expansion_records(expansion: &FormalExpansion, bits: u32) -> Vec<CoefficientRecord> {
    expansion.terms.iter().map(|t| CoefficientRecord::from_term(t, bits)).collect()
}

/// Top-level JSON document.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub query: BTreeMap<String, serde_json::Value>,
    pub results: Vec<serde_json::Value>,
    pub diagnostics: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(config: RunConfig, command: &str) -> Self {
        let mut query = BTreeMap::new();
        query.insert("command".into(), command.into());
        Report { config, query, results: Vec::new(), diagnostics: BTreeMap::new() }
    }

    pub fn query(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.query.insert(key.into(), value.into());
        self
    }

    pub fn push(&mut self, record: impl Serialize) -> Result<()> {
        self.results.push(serde_json::to_value(record)?);
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::PlaceSet;

    #[test]
    fn default_config() {
        let c = RunConfig::default();
        assert_eq!(c.precision_bits, 256);
        assert_eq!(c.tolerance_exponent, 128);
        assert_eq!(c.jet_guard_order, 4);
        assert!(matches!(RunConfig { field: "/nonexistent".into(), ..c }.provider(), Err(Error::Io(_))));
    }

    #[test]
    fn report_is_deterministic() {
        let config = RunConfig::new(128);
        let calc = config.calculator().unwrap();
        let e = calc.expansion(1, 2, &PlaceSet::empty()).unwrap();
        let render = || {
            let mut r = Report::new(config.clone(), "expansion").query("d", 1).query("r", 2);
            for rec in expansion_records(&e, 128) {
                r.push(rec).unwrap();
            }
            r.to_json().unwrap()
        };
        let a = render();
        assert_eq!(a, render());
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["results"][0]["weyl_weight"], "1/2");
        assert_eq!(v["results"][1]["weyl_weight"], "1");
        assert!(v["results"][1]["a_tilde"]["value"].as_str().unwrap().starts_with("-6.9077"));
    }
}
