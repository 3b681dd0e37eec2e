//! The three-block cone `C₋ ⊕ C₋[−1] ⊕ C₊` of a chain map `c: C₊ → C₋`.
//!
//! In cone degree `k` the blocks are `a ∈ C₋^k`, `b ∈ C₋^{k−1}`, `e ∈ C₊^k`
//! and `D(a, b, e) = (d₋a, −a − d₋b + c(e), d₊e)`. The projection to `C₊`
//! has the acyclic kernel `cone(id)`, so it is always a quasi-isomorphism;
//! the projection to `C₋` is one exactly when `c` is.

use serde::Serialize;

use super::cohomology::{cohomology_of, CohomologyReport};
use super::complex::GradedComplex;
use super::grading::GeneratorInfo;
use super::matrix::OperatorMatrix;
use super::ComplexError;
use crate::novikov::{NovikovElem, Setup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoDegree {
    pub degree: i64,
    pub source_betti: usize,
    pub target_betti: usize,
    pub image_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoCheck {
    pub degrees: Vec<QuasiIsoDegree>,
    pub is_quasi_isomorphism: bool,
}

#[derive(Clone, Debug)]
pub struct ConeReport {
    pub cone: GradedComplex,
    pub to_minus: OperatorMatrix<NovikovElem>,
    pub to_plus: OperatorMatrix<NovikovElem>,
    pub minus_check: QuasiIsoCheck,
    pub plus_check: QuasiIsoCheck,
}

fn effective_degrees(c: &GradedComplex) -> Vec<i64> {
    let g = c.degree_group();
    c.basis.iter().map(|x| g.degree_of(x)).collect()
}

fn cohomology(c: &GradedComplex) -> CohomologyReport {
    cohomology_of(&c.d.to_frac(), &effective_degrees(c), c.degree_group().modulus, c.setup)
}

/// Whether the degree-0 chain map `f: source → target` induces an
/// isomorphism on cohomology over the Novikov field.
pub fn quasi_isomorphism_check(
    source: &GradedComplex,
    target: &GradedComplex,
    f: &OperatorMatrix<NovikovElem>,
) -> Result<QuasiIsoCheck, ComplexError> {
    if !source.setup.ring.is_field() {
        return Err(ComplexError::NonField);
    }
    let hs = cohomology(source);
    let ht = cohomology(target);
    let ff = f.to_frac();
    let setup = source.setup;
    let mut degrees: Vec<i64> = hs.degrees.iter().chain(&ht.degrees).map(|d| d.degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut out = Vec::new();
    let mut ok = true;
    for k in degrees {
        let sb = hs.betti(k);
        let tb = ht.betti(k);
        let image_rank = match (hs.degree(k), ht.degree(k)) {
            (Some(sd), Some(td)) => {
                let mut coords = Vec::new();
                for r in &sd.representatives {
                    let img = ff.apply(&sd.embed(r, source.dim(), setup));
                    let z = td.restrict(&img);
                    let class = td
                        .class_of(&z, setup)
                        .ok_or_else(|| ComplexError::NotChainMap(format!("image of a cocycle in degree {k} is not closed")))?;
                    coords.push(class);
                }
                super::linalg::rank(&super::linalg::from_columns(&coords, tb, setup), coords.len())
            }
            _ => 0,
        };
        ok &= sb == tb && image_rank == tb;
        out.push(QuasiIsoDegree { degree: k, source_betti: sb, target_betti: tb, image_rank });
    }
    Ok(QuasiIsoCheck { degrees: out, is_quasi_isomorphism: ok })
}

fn check_chain_map(plus: &GradedComplex, minus: &GradedComplex, c: &OperatorMatrix<NovikovElem>) -> Result<(), ComplexError> {
    if plus.setup != minus.setup || plus.grading != minus.grading || plus.q_degree_two != minus.q_degree_two {
        return Err(ComplexError::Invalid("cone pieces have different scalar setups or gradings".into()));
    }
    if c.rows() != minus.dim() || c.cols() != plus.dim() {
        return Err(ComplexError::Invalid(format!(
            "chain map is {}x{}, expected {}x{}",
            c.rows(),
            c.cols(),
            minus.dim(),
            plus.dim()
        )));
    }
    let defect = minus.d.compose(c).sub(&c.compose(&plus.d));
    if let Some((&(r, col), v)) = defect.iter().next() {
        return Err(ComplexError::NotChainMap(format!(
            "d₋c − cd₊ has entry {v} at ({}, {})",
            minus.basis[r].name, plus.basis[col].name
        )));
    }
    Ok(())
}

/// Builds the cone of `c`, its two projections, and checks both for being
/// quasi-isomorphisms.
pub fn mapping_cone(
    plus: &GradedComplex,
    minus: &GradedComplex,
    c: &OperatorMatrix<NovikovElem>,
) -> Result<ConeReport, ComplexError> {
    check_chain_map(plus, minus, c)?;
    let setup: Setup = plus.setup;
    let (nm, np) = (minus.dim(), plus.dim());
    let n = 2 * nm + np;
    let mut basis: Vec<GeneratorInfo> = minus.basis.iter().map(|g| GeneratorInfo::new(format!("a.{}", g.name), g.index)).collect();
    basis.extend(minus.basis.iter().map(|g| GeneratorInfo::new(format!("b.{}", g.name), g.index + 1)));
    basis.extend(plus.basis.iter().map(|g| GeneratorInfo::new(format!("e.{}", g.name), g.index)));

    let mut d = minus.d.embed(n, n, 0, 0);
    d = d.add(&OperatorMatrix::identity(setup, nm).neg().embed(n, n, nm, 0).with_degree(1));
    d = d.add(&minus.d.neg().embed(n, n, nm, nm));
    d = d.add(&c.embed(n, n, nm, 2 * nm).with_degree(1));
    d = d.add(&plus.d.embed(n, n, 2 * nm, 2 * nm));
    let d = d.with_degree(1);
    let cone = GradedComplex::new(plus.grading, basis, d, setup, plus.q_degree_two);

    let to_minus = OperatorMatrix::identity(setup, nm).embed(nm, n, 0, 0);
    let to_plus = OperatorMatrix::identity(setup, np).embed(np, n, 0, 2 * nm);
    if !setup.ring.is_field() {
        return Err(ComplexError::NonField);
    }
    let minus_check = quasi_isomorphism_check(&cone, minus, &to_minus)?;
    let plus_check = quasi_isomorphism_check(&cone, plus, &to_plus)?;
    Ok(ConeReport { cone, to_minus, to_plus, minus_check, plus_check })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::complex::validate_complex;
    use crate::complexes::grading::GradingKind;
    use crate::novikov::CoefficientRing;

    fn qq() -> Setup {
        Setup::integral(CoefficientRing::Rationals)
    }

    fn point() -> GradedComplex {
        GradedComplex::new(
            GradingKind::IntGraded,
            vec![GeneratorInfo::new("x", 0)],
            OperatorMatrix::zero(qq(), 1, 1, 1),
            qq(),
            false,
        )
    }

    #[test]
    fn identity_cone() {
        let p = point();
        let rep = mapping_cone(&p, &p, &OperatorMatrix::identity(qq(), 1)).unwrap();
        assert!(validate_complex(&rep.cone).is_valid());
        assert!(rep.minus_check.is_quasi_isomorphism);
        assert!(rep.plus_check.is_quasi_isomorphism);
    }

    #[test]
    fn rescaling_is_quasi_iso() {
        let p = point();
        let c = OperatorMatrix::from_entries(qq(), 1, 1, 0, [((0, 0), NovikovElem::q_power(qq(), 3))]);
        let rep = mapping_cone(&p, &p, &c).unwrap();
        assert!(rep.minus_check.is_quasi_isomorphism && rep.plus_check.is_quasi_isomorphism);
    }

    #[test]
    fn zero_map_breaks_the_minus_projection() {
        let p = point();
        let rep = mapping_cone(&p, &p, &OperatorMatrix::zero(qq(), 1, 1, 0)).unwrap();
        assert!(!rep.minus_check.is_quasi_isomorphism);
        assert!(rep.plus_check.is_quasi_isomorphism);
    }

    #[test]
    fn non_chain_map_rejected() {
        let basis = vec![GeneratorInfo::new("x", 0), GeneratorInfo::new("y", 1)];
        let d = OperatorMatrix::from_entries(qq(), 2, 2, 1, [((1, 0), NovikovElem::one(qq()))]);
        let c2 = GradedComplex::new(GradingKind::IntGraded, basis, d, qq(), false);
        let c = OperatorMatrix::from_entries(qq(), 2, 2, 0, [((0, 0), NovikovElem::one(qq()))]);
        assert!(matches!(mapping_cone(&c2, &c2, &c), Err(ComplexError::NotChainMap(_))));
    }
}
