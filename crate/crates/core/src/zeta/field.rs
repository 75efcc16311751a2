//! Number-field data files.
//!
//! The file is a JSON object
//!
//! ```json
//! {
//!   "degree": 2,
//!   "discriminant": -4,
//!   "signature": [0, 1],
//!   "dirichlet_coefficients": [1, 1, 0, 1, 2, 0, 0, 1, 1, 2],
//!   "gamma_factor_shifts": [0, 1]
//! }
//! ```
//!
//! `dirichlet_coefficients` lists `a_1, ..., a_M` of `ζ_F(s) = Σ a_n n^{-s}`;
//! `gamma_factor_shifts` lists the `μ_j` of the archimedean factor
//! `Π_j Γ_R(s + μ_j)` with `Γ_R(s) = π^{-s/2} Γ(s/2)`. The completed zeta is
//! `ξ_F(s) = |d_F|^{s/2} Π_j Γ_R(s + μ_j) ζ_F(s)`.
//!
//! Supported fields are the rationals and quadratic fields, where
//! `ζ_F = ζ · L(·, χ_d)` with `χ_d` the Kronecker symbol of the discriminant.

use std::path::Path;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumberFieldData {
    pub degree: u32,
    pub discriminant: i64,
    pub signature: [u32; 2],
    pub dirichlet_coefficients: Vec<i64>,
    pub gamma_factor_shifts: Vec<u32>,
}

impl NumberFieldData {
    pub fn rationals() -> Self {
        NumberFieldData {
            degree: 1,
            discriminant: 1,
            signature: [1, 0],
            dirichlet_coefficients: vec![1; 10],
            gamma_factor_shifts: vec![0],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// A field the zeta engine can evaluate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NumberField {
    Rationals,
    /// `Q(sqrt(D))` for a fundamental discriminant `D`.
    Quadratic { discriminant: i64 },
}

impl NumberField {
    pub fn degree(&self) -> u32 {
        match self {
            NumberField::Rationals => 1,
            NumberField::Quadratic { .. } => 2,
        }
    }

    pub fn discriminant(&self) -> i64 {
        match self {
            NumberField::Rationals => 1,
            NumberField::Quadratic { discriminant } => *discriminant,
        }
    }

    /// `(r_1, r_2)`.
    pub fn signature(&self) -> [u32; 2] {
        match self {
            NumberField::Rationals => [1, 0],
            NumberField::Quadratic { discriminant } if *discriminant > 0 => [2, 0],
            NumberField::Quadratic { .. } => [0, 1],
        }
    }

    /// Shifts `μ_j` of the archimedean factor `Π Γ_R(s + μ_j)`.
    pub fn gamma_shifts(&self) -> Vec<u32> {
        match self.signature() {
            [1, 0] => vec![0],
            [2, 0] => vec![0, 0],
            _ => vec![0, 1],
        }
    }

    /// Kronecker character of the field (trivial for the rationals).
    pub fn character(&self, a: i64) -> i32 {
        match self {
            NumberField::Rationals => 1,
            NumberField::Quadratic { discriminant } => {
                Integer::from(*discriminant).kronecker(&Integer::from(a))
            }
        }
    }

    /// `a_n`: `1` for the rationals, `Σ_{m | n} χ(m)` for quadratic fields.
    pub fn dirichlet_coefficient(&self, n: i64) -> i64 {
        if *self == NumberField::Rationals {
            return 1;
        }
        (1..=n).filter(|m| n % m == 0).map(|m| i64::from(self.character(m))).sum()
    }

    pub fn data(&self) -> NumberFieldData {
        NumberFieldData {
            degree: self.degree(),
            discriminant: self.discriminant(),
            signature: self.signature(),
            dirichlet_coefficients: (1..=10).map(|n| self.dirichlet_coefficient(n)).collect(),
            gamma_factor_shifts: self.gamma_shifts(),
        }
    }

    /// Validate a data file against the supported families.
    pub fn from_data(data: &NumberFieldData) -> Result<Self> {
        let field = match data.degree {
            1 => {
                if data.discriminant != 1 {
                    return Err(Error::UnsupportedField(format!(
                        "degree 1 requires discriminant 1, got {}",
                        data.discriminant
                    )));
                }
                NumberField::Rationals
            }
            2 => {
                if !is_fundamental_discriminant(data.discriminant) {
                    return Err(Error::UnsupportedField(format!(
                        "{} is not a fundamental discriminant",
                        data.discriminant
                    )));
                }
                NumberField::Quadratic { discriminant: data.discriminant }
            }
            n => {
                return Err(Error::UnsupportedField(format!(
                    "degree {n}: only the rationals and quadratic fields are supported"
                )))
            }
        };
        if data.signature != field.signature() {
            return Err(Error::UnsupportedField(format!(
                "signature {:?} does not match discriminant {}",
                data.signature, data.discriminant
            )));
        }
        let mut shifts = data.gamma_factor_shifts.clone();
        shifts.sort_unstable();
        if shifts != field.gamma_shifts() {
            return Err(Error::UnsupportedField(format!(
                "gamma factor shifts {:?} do not match signature {:?}",
                data.gamma_factor_shifts, data.signature
            )));
        }
        for (i, &a) in data.dirichlet_coefficients.iter().enumerate() {
            let n = i as i64 + 1;
            if a != field.dirichlet_coefficient(n) {
                return Err(Error::UnsupportedField(format!(
                    "Dirichlet coefficient a_{n} = {a} does not match the field of discriminant {}",
                    data.discriminant
                )));
            }
        }
        Ok(field)
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 || d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_field_roundtrip() {
        let text = r#"{"degree":2,"discriminant":-4,"signature":[0,1],
            "dirichlet_coefficients":[1,1,0,1,2,0,0,1,1,2],"gamma_factor_shifts":[0,1]}"#;
        let data = NumberFieldData::from_json(text).unwrap();
        let field = NumberField::from_data(&data).unwrap();
        assert_eq!(field, NumberField::Quadratic { discriminant: -4 });
        assert_eq!(field.data(), data);
    }

    #[test]
    fn rejects_bad_data() {
        let mut data = NumberField::Quadratic { discriminant: 5 }.data();
        data.dirichlet_coefficients[3] += 1;
        assert!(matches!(NumberField::from_data(&data), Err(Error::UnsupportedField(_))));
        let mut cubic = NumberFieldData::rationals();
        cubic.degree = 3;
        assert!(NumberField::from_data(&cubic).is_err());
        assert!(!is_fundamental_discriminant(20));
        assert!(is_fundamental_discriminant(12));
        assert!(is_fundamental_discriminant(-8));
        assert!(is_fundamental_discriminant(5));
        assert_eq!(NumberField::from_data(&NumberFieldData::rationals()).unwrap(), NumberField::Rationals);
    }
}
