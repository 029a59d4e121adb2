//! Exact truncated q-series arithmetic, theta-function products, and a
//! verifier for vanishing coefficients in arithmetic progressions.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod expr;
pub mod families;
pub mod identities;
pub mod series;
pub mod theta;
pub mod verify;

pub use catalog::{default_catalog, instantiate, load_catalog, Claim, SweepConfig, TheoremEntry};
pub use error::{Error, Result};
pub use families::{family_series, legacy_series, Family, FamilySpec, LegacySeries};
pub use identities::{extract, is_vanishing, Vanishing};
pub use series::{QSeries, Sign};
pub use theta::{theta_series, Monomial, PochhammerSpec, ThetaSpec};
pub use verify::{run_suite, verify_instance, ExecMode, Status, Summary, VerificationReport};
