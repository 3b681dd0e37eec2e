//! Cartan data `(d_eq, λ_eq, ι_eq)` over `Λ[[u]]` and the two connections
//! `Γ_q`, `Γ_u` built from them.

mod data;
mod gamma;
mod induced;
mod iota;
mod lambda;
mod modm;

pub use data::{
    d_degree, frac_monomials, iota_degree, lambda_degree, CartanData, CartanReport, CartanViolation, EquivariantDifferential,
    Monomials,
};
pub use gamma::{gamma_q, gamma_q_self_test, gamma_relation_check, gamma_u, gamma_u_self_test, u_deg, CheckLine, SelfTest};
pub use induced::{induced_on_cohomology, InducedConnection, Which};
pub use iota::{iota_discrepancy, solve_iota, EntryValue, IotaDiscrepancy, IotaOutcome, Obstruction};
pub use lambda::{lambda_from_differentiation, PreLambdaCertificate};
pub use modm::{reduce_mod, reduced_data, ModReport};

use thiserror::Error;

use crate::complexes::ComplexError;
use crate::novikov::NovikovError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CartanError {
    #[error("Cartan data fails validation ({} violations)", .0.violations.len())]
    InvalidData(CartanReport),
    #[error("{} relation violations", .0.len())]
    Violations(Vec<CartanViolation>),
    #[error("field coefficients required")]
    NonField,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("equivariant cohomology is not free of full rank: {0}")]
    NotDegenerate(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}
