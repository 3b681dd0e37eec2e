use serde::Serialize;

use super::grading::{homogeneity_defect, DegreeGroup, GeneratorInfo, GradingKind};
use super::matrix::OperatorMatrix;
use crate::novikov::{NovikovElem, Scalar, Setup};

/// Finite free complex over `Λ` with a distinguished basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedComplex {
    pub grading: GradingKind,
    pub basis: Vec<GeneratorInfo>,
    pub d: OperatorMatrix<NovikovElem>,
    pub setup: Setup,
    /// Whether `|q| = 2` homogeneity is enforced (the monotone-graded regime).
    pub q_degree_two: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ShapeMismatch { detail: String },
    SetupMismatch { detail: String },
    DSquaredNonzero { row: String, col: String, value: String },
    Inhomogeneous { operator: String, row: String, col: String, monomial: String, defect: String },
    WrongDegree { operator: String, row: String, col: String, expected_shift: i64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl GradedComplex {
    pub fn new(
        grading: GradingKind,
        basis: Vec<GeneratorInfo>,
        d: OperatorMatrix<NovikovElem>,
        setup: Setup,
        q_degree_two: bool,
    ) -> Self {
        GradedComplex { grading, basis, d, setup, q_degree_two }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree_group(&self) -> DegreeGroup {
        DegreeGroup::new(self.grading, self.setup, self.q_degree_two)
    }

    /// The complex with the same basis and a different differential.
    pub fn with_differential(&self, d: OperatorMatrix<NovikovElem>) -> Self {
        GradedComplex { d, ..self.clone() }
    }
}

/// Checks grading and homogeneity of one operator of declared degree `shift`
/// on the basis of `c`, appending violations to `out`.
pub fn check_operator<S: Scalar>(
    c: &GradedComplex,
    name: &str,
    m: &OperatorMatrix<S>,
    shift: i64,
    monomials: impl Fn(&S) -> Vec<i64>,
    out: &mut Vec<Violation>,
) {
    let n = c.dim();
    if m.rows() != n || m.cols() != n {
        out.push(Violation::ShapeMismatch {
            detail: format!("{name} is {}x{}, basis has {n} generators", m.rows(), m.cols()),
        });
        return;
    }
    if m.setup() != c.setup {
        out.push(Violation::SetupMismatch { detail: format!("{name}: {} vs {}", m.setup(), c.setup) });
        return;
    }
    let grp = c.degree_group();
    let lattice = c.setup.lattice;
    for (&(r, col), v) in m.iter() {
        let (t, s) = (&c.basis[r], &c.basis[col]);
        if c.q_degree_two {
            for idx in monomials(v) {
                let e = lattice.exponent(idx);
                let defect = homogeneity_defect(t, s, &e, shift);
                if defect != num_rational::BigRational::from_integer(0.into()) {
                    out.push(Violation::Inhomogeneous {
                        operator: name.to_string(),
                        row: t.name.clone(),
                        col: s.name.clone(),
                        monomial: NovikovElem::q_power(c.setup, idx).to_string(),
                        defect: defect.to_string(),
                    });
                }
            }
        } else if grp.reduce(t.index - s.index) != grp.reduce(shift) {
            out.push(Violation::WrongDegree {
                operator: name.to_string(),
                row: t.name.clone(),
                col: s.name.clone(),
                expected_shift: shift,
            });
        }
    }
}

pub fn elem_monomials(e: &NovikovElem) -> Vec<i64> {
    e.terms().iter().map(|t| t.0).collect()
}

/// Lists every violated invariant; an empty report means the complex is valid.
pub fn validate_complex(c: &GradedComplex) -> ValidationReport {
    let mut violations = Vec::new();
    if let Err(e) = c.grading.validate() {
        violations.push(Violation::ShapeMismatch { detail: e });
    }
    check_operator(c, "d", &c.d, 1, elem_monomials, &mut violations);
    if violations.iter().any(|v| matches!(v, Violation::ShapeMismatch { .. } | Violation::SetupMismatch { .. })) {
        return ValidationReport { violations };
    }
    let dd = c.d.compose(&c.d);
    for (&(r, col), v) in dd.iter() {
        violations.push(Violation::DSquaredNonzero {
            row: c.basis[r].name.clone(),
            col: c.basis[col].name.clone(),
            value: v.to_string(),
        });
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::CoefficientRing;

    fn setup() -> Setup {
        Setup::integral(CoefficientRing::Integers)
    }

    fn two_gen(q2: bool, indices: (i64, i64)) -> GradedComplex {
        let basis = vec![GeneratorInfo::new("x+", indices.0), GeneratorInfo::new("x-", indices.1)];
        let d = OperatorMatrix::from_entries(setup(), 2, 2, 1, [((1, 0), NovikovElem::q_power(setup(), 1))]);
        GradedComplex::new(GradingKind::IntGraded, basis, d, setup(), q2)
    }

    #[test]
    fn zero_differential_is_valid() {
        let basis = (0..3).map(|i| GeneratorInfo::new(format!("g{i}"), i)).collect();
        let c = GradedComplex::new(GradingKind::IntGraded, basis, OperatorMatrix::zero(setup(), 3, 3, 1), setup(), false);
        assert!(validate_complex(&c).is_valid());
    }

    #[test]
    fn d_squared_is_reported() {
        let c = two_gen(false, (0, 1));
        assert!(validate_complex(&c).is_valid());
        let mut d = c.d.clone();
        d.set(0, 1, NovikovElem::one(setup()));
        let bad = c.with_differential(d);
        let rep = validate_complex(&bad);
        assert!(rep.violations.iter().any(|v| matches!(v, Violation::DSquaredNonzero { .. })));
    }

    #[test]
    fn monotone_homogeneity() {
        let c = two_gen(true, (0, -1));
        assert!(validate_complex(&c).is_valid());
        let off = two_gen(true, (0, 1));
        let rep = validate_complex(&off);
        assert!(matches!(rep.violations[0], Violation::Inhomogeneous { .. }));
    }
}
