use serde::Serialize;

use super::data::{lambda_degree, relation_violations, CartanData, EquivariantDifferential, Monomials};
use super::CartanError;
use crate::complexes::EqOperator;

/// Orders at which `Σ d_{k₁}λ_{k₂} + λ_{k₁}d_{k₂} = 0` was checked, all zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreLambdaCertificate {
    pub verified_order: usize,
}

/// `λ_k := ∂_q d_k` entrywise, with the derived identity checked on every
/// order below the truncation.
pub fn lambda_from_differentiation<S: Monomials>(
    d: &EquivariantDifferential<S>,
) -> Result<(EqOperator<S>, PreLambdaCertificate), CartanError> {
    let q2 = d.frame.q_degree_two;
    let terms = d
        .family
        .terms
        .iter()
        .enumerate()
        .map(|(k, m)| Ok(m.dq_entrywise()?.with_degree(lambda_degree(q2, k))))
        .collect::<Result<Vec<_>, CartanError>>()?;
    let lambda = EqOperator::new(terms);
    let probe = CartanData::new(d.clone(), lambda.clone(), EqOperator::new(vec![]));
    let mut bad = Vec::new();
    for k in 0..d.order {
        relation_violations(&d.frame, "pre-lambda", k, &probe.pre_lambda_defect(k), &mut bad);
    }
    if !bad.is_empty() {
        return Err(CartanError::Violations(bad));
    }
    Ok((lambda, PreLambdaCertificate { verified_order: d.order }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{GeneratorInfo, GradedComplex, GradingKind, OperatorMatrix};
    use crate::novikov::{CoefficientRing, NovikovElem, Setup};

    fn two_gen(setup: Setup, entry: NovikovElem) -> EquivariantDifferential<NovikovElem> {
        let basis = vec![GeneratorInfo::new("x+", 0), GeneratorInfo::new("x-", 1)];
        let d = OperatorMatrix::from_entries(setup, 2, 2, 1, [((1, 0), entry)]);
        let frame = GradedComplex::new(GradingKind::IntGraded, basis, d.clone(), setup, false);
        EquivariantDifferential::new(frame, EqOperator::new(vec![d]), 3)
    }

    #[test]
    fn single_monomial() {
        let s = Setup::integral(CoefficientRing::Integers);
        let (lam, cert) = lambda_from_differentiation(&two_gen(s, NovikovElem::q_power(s, 2))).unwrap();
        assert_eq!(lam.terms[0].get(1, 0), NovikovElem::constant(s, 2).mul(&NovikovElem::q_power(s, 1)));
        assert_eq!(cert.verified_order, 3);
    }

    #[test]
    fn q_free_gives_zero() {
        let s = Setup::integral(CoefficientRing::Rationals);
        let (lam, _) = lambda_from_differentiation(&two_gen(s, NovikovElem::constant(s, 5))).unwrap();
        assert!(lam.terms.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn exponents_in_m_vanish_mod_m() {
        let s = Setup::integral("Z/3".parse().unwrap());
        let e = NovikovElem::q_power(s, 3).add(&NovikovElem::q_power(s, 6));
        let (lam, _) = lambda_from_differentiation(&two_gen(s, e)).unwrap();
        assert!(lam.terms[0].is_zero());
    }
}
