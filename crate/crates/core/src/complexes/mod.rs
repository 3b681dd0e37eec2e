//! Finite free graded complexes over `Λ` and `Λ[[u]]`: validation,
//! cohomology over the Novikov field, and the u-module structure of
//! equivariant cohomology.

mod cohomology;
mod complex;
mod cone;
mod dvr;
mod grading;
pub mod linalg;
mod les;
mod matrix;

pub use cohomology::{cohomology_over_novikov_field, verify_certificate, BettiEntry, CohomologyReport, DegreeCohomology};
pub(crate) use cohomology::cohomology_of;
pub use complex::{check_operator, elem_monomials, validate_complex, GradedComplex, ValidationReport, Violation};
pub use cone::{mapping_cone, quasi_isomorphism_check, ConeReport, QuasiIsoCheck, QuasiIsoDegree};
pub use dvr::{
    check_square_zero, dvr_normal_form, family_matrix, u_module_decomposition, DecompositionReport, DegreeDecomposition,
    DvrPivot, TorsionSummand, UPoly,
};
pub use grading::{homogeneity_defect, is_homogeneous, DegreeGroup, GeneratorInfo, GradingKind};
pub use les::{les_consistency, LesReport, LesRow};
pub use matrix::{EqOperator, EqVec, OperatorMatrix};

use thiserror::Error;

use crate::novikov::NovikovError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("field coefficients required")]
    NonField,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("d_eq squared is nonzero at order u^{order}")]
    DSquaredNonzero { order: usize },
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("long exact sequence bookkeeping fails in degree {degree}: HF has rank {ordinary}, equivariant side gives {equivariant}")]
    LesMismatch { degree: i64, ordinary: usize, equivariant: usize },
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::novikov::{CoefficientRing, NovikovElem, Setup};
    use proptest::prelude::*;

    fn qq() -> Setup {
        Setup::integral(CoefficientRing::Rationals)
    }

    // A complex d = P·D·P⁻¹ with P elementary, so d² = 0 by construction.
    fn random_complex() -> impl Strategy<Value = GradedComplex> {
        (
            prop::collection::vec(0i64..3, 2..7),
            prop::collection::vec((0usize..7, 0usize..7, -2i64..3, 0i64..3), 0..6),
        )
            .prop_map(|(indices, entries)| {
                let n = indices.len();
                let basis: Vec<GeneratorInfo> =
                    indices.iter().enumerate().map(|(i, &k)| GeneratorInfo::new(format!("g{i}"), k)).collect();
                let mut d = OperatorMatrix::zero(qq(), n, n, 1);
                let mut used = vec![false; n];
                for (r, c, coef, e) in entries {
                    let (r, c) = (r % n, c % n);
                    if used[r] || used[c] || r == c || indices[r] != indices[c] + 1 || coef == 0 {
                        continue;
                    }
                    used[r] = true;
                    used[c] = true;
                    d.set(r, c, NovikovElem::monomial(qq(), e, qq().ring.from_i64(coef)));
                }
                GradedComplex::new(GradingKind::IntGraded, basis, d, qq(), false)
            })
    }

    proptest! {
        #[test]
        fn rank_nullity(c in random_complex()) {
            prop_assert!(validate_complex(&c).is_valid());
            let rep = cohomology_over_novikov_field(&c).unwrap();
            for deg in &rep.degrees {
                prop_assert_eq!(deg.rank_out + deg.betti() + deg.rank_in, deg.generators.len());
            }
            prop_assert!(verify_certificate(&c.d.to_frac(), &rep, qq()).is_ok());
        }

        #[test]
        fn decomposition_ignores_basis_order(c in random_complex(), seed in 0usize..720) {
            let n = c.dim();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                perm.swap(i, s % (i + 1));
                s /= i + 1;
            }
            let mut basis = c.basis.clone();
            for (i, &p) in perm.iter().enumerate() {
                basis[p] = c.basis[i].clone();
            }
            let pc = GradedComplex::new(c.grading, basis, c.d.permute(&perm, &perm), c.setup, false);
            let fam = EqOperator::new(vec![c.d.clone()]);
            let pfam = EqOperator::new(vec![pc.d.clone()]);
            let a = u_module_decomposition(&c, &fam, 3).unwrap();
            let b = u_module_decomposition(&pc, &pfam, 3).unwrap();
            prop_assert_eq!(a.torsion_orders(), b.torsion_orders());
            let ranks = |r: &DecompositionReport| r.degrees.iter().map(|d| (d.degree, d.free_rank)).collect::<Vec<_>>();
            prop_assert_eq!(ranks(&a), ranks(&b));
        }

        #[test]
        fn homogeneity_survives_composition(e1 in -2i64..3, e2 in -2i64..3, i0 in -3i64..3) {
            // f: x → y of degree s1, g: y → z of degree s2, both homogeneous
            let s = qq();
            let (iy, iz) = (i0 + 1 - 2 * e1, i0 + 3 - 2 * e1 - 2 * e2);
            let basis = vec![GeneratorInfo::new("x", i0), GeneratorInfo::new("y", iy), GeneratorInfo::new("z", iz)];
            let c = GradedComplex::new(GradingKind::IntGraded, basis, OperatorMatrix::zero(s, 3, 3, 1), s, true);
            let f = OperatorMatrix::from_entries(s, 3, 3, 1, [((1, 0), NovikovElem::q_power(s, e1))]);
            let g = OperatorMatrix::from_entries(s, 3, 3, 2, [((2, 1), NovikovElem::q_power(s, e2))]);
            let mut v = Vec::new();
            check_operator(&c, "f", &f, 1, elem_monomials, &mut v);
            check_operator(&c, "g", &g, 2, elem_monomials, &mut v);
            prop_assert!(v.is_empty());
            check_operator(&c, "gf", &g.compose(&f), 3, elem_monomials, &mut v);
            check_operator(&c, "f+f", &f.add(&f), 1, elem_monomials, &mut v);
            prop_assert!(v.is_empty());
        }
    }
}
