//! Global coefficients of the fine geometric expansion of the trace formula
//! for `GL(n)` at regular-by-blocks nilpotent orbits.

pub mod coefficients;
pub mod error;
pub mod gmfamily;
pub mod jets;
pub mod linalg;
pub mod orbits;
pub mod precision;
pub mod report;
pub mod rootdata;
pub mod verify;
pub mod zeta;

pub use coefficients::{Calculator, CoefficientResult, FormalExpansion};
pub use error::{Error, Result};
pub use jets::Jet;
pub use orbits::{LeviDatum, Partition};
pub use precision::Precision;
pub use report::{Report, RunConfig};
pub use rootdata::{BlockProfile, LinearForm, ThetaFactor};
pub use zeta::{NumberField, PlaceSet, ZetaProvider};
