//! Quantum connections on user-supplied quantum cohomology data.

mod connection;
mod obstruction;
mod ring;

pub use connection::{d_q_connection, d_u_connection, deg_q_operator, uq_bracket, uq_identity_check};
pub use obstruction::{forbidden_summand_check, ObstructionCertificate, ObstructionReport, SummandRing, Verdict};
pub use ring::{monomial_scalar, QuantumRing, RingReport};

use thiserror::Error;

use crate::novikov::NovikovError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error("invalid quantum data: {0}")]
    Invalid(String),
    #[error("inhomogeneous element: {0}")]
    Inhomogeneous(String),
    #[error("criterion inapplicable: {0}")]
    Inapplicable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}
