//! Summands `R[u]/(u−λ)^d` excluded by a connection in the `2u²∂_u`
//! direction.
//!
//! If `x` generated such a summand then
//! `0 = Γ_u((u−λ)^d x) = (u−λ)^d Γ_u x + 2d u²(u−λ)^{d−1} x`.
//! The first term dies in the summand. Writing `t = u − λ`, the second is
//! `2d(t+λ)² t^{d−1} x ≡ 2dλ² t^{d−1} x (mod t^d)`, so the summand cannot
//! exist when `2dλ²` is nonzero in `R`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::QuantumError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "p", rename_all = "snake_case")]
pub enum SummandRing {
    Integers,
    PrimeField(u64),
}

impl fmt::Display for SummandRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummandRing::Integers => write!(f, "Z"),
            SummandRing::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Forbidden,
    NotExcluded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCertificate {
    pub identity: String,
    /// Coefficients of `2d u²(u−λ)^{d−1}` in powers of `u`, lowest first.
    pub expansion_in_u: Vec<String>,
    /// The same polynomial in powers of `t = u − λ`, reduced mod `t^d`.
    pub projected: Vec<String>,
    /// Coefficient of `t^{d−1} x` in the summand.
    pub surviving_coefficient: String,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub summand: String,
    pub ring: SummandRing,
    pub lambda: String,
    pub d: u64,
    pub verdict: Verdict,
    pub certificate: ObstructionCertificate,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `p(u) ↦ p(t + λ)` by Horner's rule.
fn taylor_shift(p: &[BigRational], lambda: &BigRational) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero()];
    for c in p.iter().rev() {
        out = poly_mul(&out, &[lambda.clone(), BigRational::one()]);
        out[0] += c;
    }
    out
}

/// Decides whether `R[u]/(u−λ)^d` can be a summand, with the projected
/// obstruction term as certificate. `λ` must be an integer; over `F_p` it is
/// read as a residue.
pub fn forbidden_summand_check(lambda: &BigRational, d: u64, ring: SummandRing) -> Result<ObstructionReport, QuantumError> {
    if d == 0 {
        return Err(QuantumError::Invalid("d must be at least 1".into()));
    }
    if !lambda.is_integer() {
        return Err(QuantumError::Invalid(format!("lambda = {lambda} is not an integer")));
    }
    let reduce = |x: &BigRational| -> BigRational {
        match ring {
            SummandRing::Integers => x.clone(),
            SummandRing::PrimeField(p) => BigRational::from_integer(x.numer().mod_floor(&BigInt::from(p))),
        }
    };
    if let SummandRing::PrimeField(p) = ring {
        if !is_prime(p) {
            return Err(QuantumError::Invalid(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(QuantumError::Inapplicable("the criterion is stated for odd primes only".into()));
        }
    }
    let lambda = reduce(lambda);
    let dd = BigRational::from_integer(BigInt::from(d));
    // 2d u² (u − λ)^{d−1}
    let mut poly = vec![BigRational::zero(), BigRational::zero(), dd.clone() * BigRational::from_integer(2.into())];
    for _ in 1..d {
        poly = poly_mul(&poly, &[-lambda.clone(), BigRational::one()]);
    }
    let shifted = taylor_shift(&poly, &lambda);
    let projected: Vec<BigRational> = shifted.iter().take(d as usize).map(reduce).collect();
    let surviving = projected[d as usize - 1].clone();
    let show = |v: &[BigRational]| v.iter().map(|c| reduce(c).to_string()).collect::<Vec<_>>();
    let verdict = if surviving.is_zero() { Verdict::NotExcluded } else { Verdict::Forbidden };
    Ok(ObstructionReport {
        summand: format!("{ring}[u]/(u-{lambda})^{d}"),
        ring,
        lambda: lambda.to_string(),
        d,
        verdict,
        certificate: ObstructionCertificate {
            identity: "0 = (u-lambda)^d Gamma_u x + 2d u^2 (u-lambda)^(d-1) x".into(),
            expansion_in_u: show(&poly),
            projected: show(&projected),
            surviving_coefficient: surviving.to_string(),
            formula: "2*d*lambda^2".into(),
        },
    })
}
