//! Reduction of integer Cartan data modulo `m`.
//!
//! If every q-exponent of `d_eq` lies in `mℤ` and `ι_eq` has all
//! coefficients divisible by `m`, then after reduction `Γ_q` becomes `u∂_q`
//! and `Γ_u` becomes `u·deg`. The `Γ_u` square is checked on the scalars
//! with exponents in `mℤ`, where `2q∂_q` vanishes mod `m`.

use serde::Serialize;

use super::data::{CartanData, EquivariantDifferential};
use super::gamma::{gamma_q, gamma_u, u_deg};
use super::induced::Which;
use super::CartanError;
use crate::complexes::{EqOperator, EqVec, GradedComplex, OperatorMatrix};
use crate::novikov::{CoefficientRing, NovikovElem, Setup, USeries};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ModReport {
    /// The diagram is not expected to commute; nothing was claimed.
    HypothesisViolated { reasons: Vec<String> },
    Commutes { cases: usize },
    Fails { witness: String },
}

fn reduce_elem(e: &NovikovElem, target: Setup) -> Result<NovikovElem, CartanError> {
    Ok(e.change_ring(target)?)
}

fn reduce_matrix(m: &OperatorMatrix<NovikovElem>, target: Setup) -> Result<OperatorMatrix<NovikovElem>, CartanError> {
    m.try_map(target, |v| reduce_elem(v, target))
}

fn reduce_family(f: &EqOperator<NovikovElem>, target: Setup) -> Result<EqOperator<NovikovElem>, CartanError> {
    Ok(EqOperator::new(f.terms.iter().map(|m| reduce_matrix(m, target)).collect::<Result<_, _>>()?))
}

/// The same data with every coefficient reduced into `ℤ/m`.
pub fn reduced_data(data: &CartanData<NovikovElem>, m: u64) -> Result<CartanData<NovikovElem>, CartanError> {
    let src = data.setup();
    let target = Setup::new(src.lattice, CoefficientRing::IntegersMod(m))?;
    let frame = &data.base.frame;
    let reduced_frame = GradedComplex::new(frame.grading, frame.basis.clone(), reduce_matrix(&frame.d, target)?, target, frame.q_degree_two);
    let base = EquivariantDifferential::new(reduced_frame, reduce_family(&data.base.family, target)?, data.order());
    Ok(CartanData::new(base, reduce_family(&data.lambda, target)?, reduce_family(&data.iota, target)?))
}

fn hypotheses(data: &CartanData<NovikovElem>, m: u64) -> Vec<String> {
    let lattice = data.setup().lattice;
    let step = lattice.denom() * m as i64;
    let names = |r: usize, c: usize| (data.base.frame.basis[r].name.clone(), data.base.frame.basis[c].name.clone());
    let mut reasons = Vec::new();
    for (k, dk) in data.base.family.terms.iter().enumerate() {
        for (&(r, c), v) in dk.iter() {
            if let Some(t) = v.terms().iter().find(|t| t.0.rem_euclid(step) != 0) {
                let (a, b) = names(r, c);
                reasons.push(format!("d_{k} entry ({a}, {b}) has exponent {} outside {m}Z", lattice.exponent(t.0)));
            }
        }
    }
    let ring = data.setup().ring;
    for (k, ik) in data.iota.terms.iter().enumerate() {
        for (&(r, c), v) in ik.iter() {
            let bad = v.terms().iter().any(|t| ring.to_rational(&t.1).numer() % num_bigint::BigInt::from(m) != 0.into());
            if bad {
                let (a, b) = names(r, c);
                reasons.push(format!("iota_{k} entry ({a}, {b}) = {v} is not divisible by {m}"));
            }
        }
    }
    reasons
}

/// Reduces `data` mod `m` and checks `reduce∘Γ = (model)∘reduce` on basis
/// vectors times `q^a u^j`, with the model `u∂_q` for `Γ_q` and `u·deg` for
/// `Γ_u`.
pub fn reduce_mod(data: &CartanData<NovikovElem>, m: u64, which: Which) -> Result<(CartanData<NovikovElem>, ModReport), CartanError> {
    if data.setup().ring != CoefficientRing::Integers {
        return Err(CartanError::Unsupported("reduction mod m needs integer coefficients".into()));
    }
    if m < 2 {
        return Err(CartanError::Unsupported("modulus must be at least 2".into()));
    }
    data.ensure_valid()?;
    let reduced = reduced_data(data, m)?;
    let reasons = hypotheses(data, m);
    if !reasons.is_empty() {
        return Ok((reduced, ModReport::HypothesisViolated { reasons }));
    }
    let target = reduced.setup();
    let (n, order) = (data.dim(), data.order());
    let k = data.setup().lattice.denom();
    // Γ_q also commutes off the mℤ subring; Γ_u only on it
    let exponents: Vec<i64> = match which {
        Which::Q => vec![-1, 0, 1, 2, m as i64 + 1].into_iter().map(|a| a * k).collect(),
        Which::U => vec![-1, 0, 1, 2].into_iter().map(|a| a * k * m as i64).collect(),
    };
    let reduce_vec = |v: &EqVec<NovikovElem>| -> Result<EqVec<NovikovElem>, CartanError> {
        v.try_map(|c| {
            let coeffs = c.coeffs().iter().map(|x| reduce_elem(x, target)).collect::<Result<Vec<_>, _>>()?;
            Ok(USeries::from_coeffs(target, coeffs, c.order()).with_valid(c.valid_order()))
        })
    };
    let mut cases = 0;
    for i in 0..n {
        for &a in &exponents {
            for j in 0..order.min(3) {
                let x = EqVec::basis(data.setup(), n, order, i)
                    .scale(&USeries::monomial(NovikovElem::q_power(data.setup(), a), j, order));
                let rx = reduce_vec(&x)?;
                let (top, model) = match which {
                    Which::Q => (reduce_vec(&gamma_q(data, &x)?)?, rx.udq()?.shift_u(1)),
                    Which::U => (reduce_vec(&gamma_u(data, &x)?)?, u_deg(&reduced, &rx)?),
                };
                cases += 1;
                if !top.agrees_with(&model) {
                    let witness = format!(
                        "generator {} times q^{} u^{j}",
                        data.base.frame.basis[i].name,
                        data.setup().lattice.exponent(a)
                    );
                    return Ok((reduced, ModReport::Fails { witness }));
                }
            }
        }
    }
    Ok((reduced, ModReport::Commutes { cases }))
}
