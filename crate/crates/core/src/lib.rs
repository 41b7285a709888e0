pub mod cli;
pub mod error;
pub mod inversion;
pub mod mirror;
pub mod rational;
pub mod reference;
pub mod series;
pub mod weights;

pub use error::{Error, Result};
pub use inversion::{integrality_report, IntegralityReport, LambertTable, Variant};
pub use mirror::{mahler_measure, pf_operator, MirrorData, OperatorForm, PFOperator};
pub use rational::Rational;
pub use series::{lagrange_coeffs, LogSeries, Series};
pub use weights::{KVector, Model};
