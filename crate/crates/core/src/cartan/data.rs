use serde::Serialize;

use super::CartanError;
use crate::complexes::{check_operator, elem_monomials, EqOperator, GradedComplex, GradingKind, OperatorMatrix, Violation};
use crate::novikov::{Frac, NovikovElem, Scalar, Setup};

/// Expected index shift of `d_k`.
pub fn d_degree(k: usize) -> i64 {
    1 - 2 * k as i64
}

/// Expected index shift of `λ_k = ∂_q d_k`; with `|q| = 2` the derivative
/// lowers degree by two.
pub fn lambda_degree(q_degree_two: bool, k: usize) -> i64 {
    if q_degree_two {
        -1 - 2 * k as i64
    } else {
        1 - 2 * k as i64
    }
}

/// Expected index shift of `ι_k`.
pub fn iota_degree(q_degree_two: bool, k: usize) -> i64 {
    if q_degree_two {
        -2 * k as i64
    } else {
        2 - 2 * k as i64
    }
}

/// `d_eq = Σ_k u^k d_k` on the basis of `frame`, known to order `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantDifferential<S: Scalar> {
    /// Basis, grading and scalars; `frame.d` is `d_0`.
    pub frame: GradedComplex,
    pub family: EqOperator<S>,
    pub order: usize,
}

/// Equivariant differential together with `λ_eq` and `ι_eq`.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanData<S: Scalar> {
    pub base: EquivariantDifferential<S>,
    pub lambda: EqOperator<S>,
    pub iota: EqOperator<S>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CartanViolation {
    Structure { violation: Violation },
    OrderTooSmall { order: usize, family_len: usize },
    HeadMismatch { detail: String },
    RelationFails { relation: String, order: usize, row: String, col: String, value: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CartanReport {
    pub violations: Vec<CartanViolation>,
    /// Orders `0..verified_order` of every relation were checked.
    pub verified_order: usize,
}

impl CartanReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Monomial indices seen by the homogeneity check; a non-trivial
/// denominator contributes extra exponents so that it is flagged.
pub fn frac_monomials(f: &Frac) -> Vec<i64> {
    let mut v = elem_monomials(f.num());
    if !f.den().is_one() {
        let base = f.num().valuation().unwrap_or(0);
        v.extend(f.den().terms().iter().filter(|t| t.0 != 0).map(|t| base - t.0));
    }
    v
}

/// Homogeneity bookkeeping for the two scalar types.
pub trait Monomials: Scalar {
    fn monomials(&self) -> Vec<i64>;
}

impl Monomials for NovikovElem {
    fn monomials(&self) -> Vec<i64> {
        elem_monomials(self)
    }
}

impl Monomials for Frac {
    fn monomials(&self) -> Vec<i64> {
        frac_monomials(self)
    }
}

pub(crate) fn relation_violations<S: Scalar>(
    frame: &GradedComplex,
    relation: &str,
    order: usize,
    m: &OperatorMatrix<S>,
    out: &mut Vec<CartanViolation>,
) {
    for (&(r, c), v) in m.iter() {
        out.push(CartanViolation::RelationFails {
            relation: relation.to_string(),
            order,
            row: frame.basis[r].name.clone(),
            col: frame.basis[c].name.clone(),
            value: v.to_string(),
        });
    }
}

impl<S: Scalar + Monomials> EquivariantDifferential<S> {
    pub fn new(frame: GradedComplex, family: EqOperator<S>, order: usize) -> Self {
        EquivariantDifferential { frame, family, order }
    }

    pub fn setup(&self) -> Setup {
        self.frame.setup
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn term(&self, k: usize) -> OperatorMatrix<S> {
        self.family.term(k, self.setup(), self.dim()).with_degree(d_degree(k))
    }

    /// Whether `Γ_u` and the `μ` relations make sense: with `|q| = 2` on any
    /// grading, or on an integer grading where `q` carries no degree.
    pub fn has_integer_lift(&self) -> bool {
        self.frame.q_degree_two || self.frame.grading == GradingKind::IntGraded
    }

    /// Order-`k` coefficient of `d_eq²`.
    pub fn square(&self, k: usize) -> OperatorMatrix<S> {
        self.family.compose_order(&self.family, k, self.setup(), self.dim())
    }

    /// Shapes, degrees, homogeneity and `d_eq² = 0` to the truncation order.
    pub fn validate(&self) -> CartanReport {
        let mut violations = Vec::new();
        if self.order < self.family.len() {
            violations.push(CartanViolation::OrderTooSmall { order: self.order, family_len: self.family.len() });
        }
        let mut structure = Vec::new();
        for (k, dk) in self.family.terms.iter().enumerate() {
            check_operator(&self.frame, &format!("d_{k}"), dk, d_degree(k), |v: &S| v.monomials(), &mut structure);
        }
        violations.extend(structure.into_iter().map(|v| CartanViolation::Structure { violation: v }));
        if violations.iter().any(|v| matches!(v, CartanViolation::Structure { violation: Violation::ShapeMismatch { .. } })) {
            return CartanReport { violations, verified_order: 0 };
        }
        let head = self.term(0);
        let given = self.frame.d.clone();
        let same = head.nnz() == given.nnz()
            && given.iter().all(|(&(r, c), v)| head.get(r, c) == S::from_elem(v.clone()));
        if !same {
            violations.push(CartanViolation::HeadMismatch { detail: "d_0 differs from the complex differential".into() });
        }
        for k in 0..self.order {
            relation_violations(&self.frame, "d_eq^2 = 0", k, &self.square(k), &mut violations);
        }
        CartanReport { violations, verified_order: self.order }
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> EquivariantDifferential<T> {
        EquivariantDifferential {
            frame: self.frame.clone(),
            family: EqOperator::new(self.family.terms.iter().map(|m| map_matrix(m, self.setup(), f)).collect()),
            order: self.order,
        }
    }
}

pub(crate) fn map_matrix<S: Scalar, T: Scalar>(m: &OperatorMatrix<S>, setup: Setup, f: impl Fn(&S) -> T) -> OperatorMatrix<T> {
    m.try_map(setup, |v| Ok::<T, ()>(f(v))).expect("infallible")
}

pub(crate) fn map_family<S: Scalar, T: Scalar>(fam: &EqOperator<S>, setup: Setup, f: impl Fn(&S) -> T + Copy) -> EqOperator<T> {
    EqOperator::new(fam.terms.iter().map(|m| map_matrix(m, setup, f)).collect())
}

impl EquivariantDifferential<NovikovElem> {
    pub fn to_frac(&self) -> EquivariantDifferential<Frac> {
        self.map_scalars(|v| Frac::from_elem(v.clone()))
    }
}

impl CartanData<NovikovElem> {
    pub fn to_frac(&self) -> CartanData<Frac> {
        let setup = self.base.setup();
        let f = |v: &NovikovElem| Frac::from_elem(v.clone());
        CartanData {
            base: self.base.to_frac(),
            lambda: map_family(&self.lambda, setup, f),
            iota: map_family(&self.iota, setup, f),
        }
    }
}

impl<S: Scalar + Monomials> CartanData<S> {
    pub fn new(base: EquivariantDifferential<S>, lambda: EqOperator<S>, iota: EqOperator<S>) -> Self {
        CartanData { base, lambda, iota }
    }

    pub fn setup(&self) -> Setup {
        self.base.setup()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn order(&self) -> usize {
        self.base.order
    }

    pub fn q_degree_two(&self) -> bool {
        self.base.frame.q_degree_two
    }

    pub fn lambda_term(&self, k: usize) -> OperatorMatrix<S> {
        self.lambda.term(k, self.setup(), self.dim()).with_degree(lambda_degree(self.q_degree_two(), k))
    }

    pub fn iota_term(&self, k: usize) -> OperatorMatrix<S> {
        self.iota.term(k, self.setup(), self.dim()).with_degree(iota_degree(self.q_degree_two(), k))
    }

    /// `Σ d_{k₁}λ_{k₂} + λ_{k₁}d_{k₂}` at order `k`.
    pub fn pre_lambda_defect(&self, k: usize) -> OperatorMatrix<S> {
        let (s, n) = (self.setup(), self.dim());
        self.base.family.compose_order(&self.lambda, k, s, n).add(&self.lambda.compose_order(&self.base.family, k, s, n))
    }

    /// `Σ d_{k₁}ι_{k₂} − ι_{k₁}d_{k₂} − λ_{k−1}` at order `k`.
    pub fn cartan_defect(&self, k: usize) -> OperatorMatrix<S> {
        let (s, n) = (self.setup(), self.dim());
        let mut m = self.base.family.compose_order(&self.iota, k, s, n).sub(&self.iota.compose_order(&self.base.family, k, s, n));
        if k > 0 {
            m = m.sub(&self.lambda.term(k - 1, s, n));
        }
        m
    }

    /// Every invariant of the data, to the truncation order.
    pub fn validate(&self) -> CartanReport {
        let mut rep = self.base.validate();
        if rep.violations.iter().any(|v| matches!(v, CartanViolation::Structure { violation: Violation::ShapeMismatch { .. } })) {
            return rep;
        }
        let q2 = self.q_degree_two();
        let mut structure = Vec::new();
        for (k, m) in self.lambda.terms.iter().enumerate() {
            check_operator(&self.base.frame, &format!("lambda_{k}"), m, lambda_degree(q2, k), |v: &S| v.monomials(), &mut structure);
        }
        for (k, m) in self.iota.terms.iter().enumerate() {
            check_operator(&self.base.frame, &format!("iota_{k}"), m, iota_degree(q2, k), |v: &S| v.monomials(), &mut structure);
        }
        rep.violations.extend(structure.into_iter().map(|v| CartanViolation::Structure { violation: v }));
        for k in 0..self.order() {
            relation_violations(&self.base.frame, "pre-lambda", k, &self.pre_lambda_defect(k), &mut rep.violations);
            relation_violations(&self.base.frame, "cartan", k, &self.cartan_defect(k), &mut rep.violations);
        }
        rep
    }

    pub fn ensure_valid(&self) -> Result<(), CartanError> {
        let rep = self.validate();
        if rep.is_valid() {
            Ok(())
        } else {
            Err(CartanError::InvalidData(rep))
        }
    }
}
