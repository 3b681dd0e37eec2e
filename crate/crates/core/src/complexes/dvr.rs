//! Diagonalization over the discrete valuation ring `Λ[[u]]`.
//!
//! Entries are exact u-polynomials with coefficients in the Novikov field.
//! Pivot rule: least u-valuation, then least q-valuation of the lowest
//! u-coefficient, then `(row, col)`. A row is cleared with
//! `row_j ← a'·row_j − (b/u^v)·row_p` where `a = u^v·a'`; `a'` is a unit, so
//! the operation is invertible over `Λ[[u]]` and the pivot row and column can
//! be dropped afterwards.

use serde::Serialize;

use super::complex::GradedComplex;
use super::matrix::EqOperator;
use super::ComplexError;
use crate::novikov::{Frac, NovikovElem, Setup};

/// Exact polynomial in `u` over the Novikov field, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly {
    coeffs: Vec<Frac>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Frac>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn lowest(&self) -> &Frac {
        &self.coeffs[self.valuation().expect("nonzero polynomial")]
    }

    fn mul(&self, o: &Self, setup: Setup) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Frac::zero(setup); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::from_coeffs(out)
    }

    fn sub(&self, o: &Self, setup: Setup) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Frac::zero(setup);
        Self::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z).sub(o.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    /// Division by `u^v`; the caller guarantees `valuation ≥ v`.
    fn shift_down(&self, v: usize) -> Self {
        Self::from_coeffs(self.coeffs[v.min(self.coeffs.len())..].to_vec())
    }
}

/// One pivot of the diagonal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DvrPivot {
    pub row: usize,
    pub col: usize,
    pub valuation: usize,
}

/// Diagonal form of a rectangular matrix over `Λ[[u]]`: the pivot list, in
/// elimination order. The multiset of valuations is the list of invariant
/// factors `u^v`.
pub fn dvr_normal_form(setup: Setup, m: Vec<Vec<UPoly>>) -> Result<Vec<DvrPivot>, ComplexError> {
    if !setup.ring.is_field() {
        return Err(ComplexError::NonField);
    }
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut m = m;
    let mut row_alive = vec![true; rows];
    let mut col_alive = vec![true; cols];
    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(usize, i64, usize, usize)> = None;
        for r in (0..rows).filter(|&r| row_alive[r]) {
            for c in (0..cols).filter(|&c| col_alive[c]) {
                let x = &m[r][c];
                let Some(v) = x.valuation() else { continue };
                let qv = x.lowest().valuation().expect("nonzero coefficient");
                let key = (v, qv, r, c);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
        let Some((v, _, pr, pc)) = best else { break };
        let unit = m[pr][pc].shift_down(v);
        for r in (0..rows).filter(|&r| row_alive[r] && r != pr) {
            if m[r][pc].is_zero() {
                continue;
            }
            let factor = m[r][pc].shift_down(v);
            for c in (0..cols).filter(|&c| col_alive[c]) {
                let lhs = unit.mul(&m[r][c], setup);
                let rhs = factor.mul(&m[pr][c], setup);
                m[r][c] = lhs.sub(&rhs, setup);
            }
            debug_assert!(m[r][pc].is_zero());
        }
        row_alive[pr] = false;
        col_alive[pc] = false;
        pivots.push(DvrPivot { row: pr, col: pc, valuation: v });
    }
    Ok(pivots)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionSummand {
    /// `j` in `Λ[u]/u^j`.
    pub order: usize,
    /// Degree of the generator (the pivot row).
    pub degree: i64,
    /// Degree of the source generator whose image it is (the pivot column).
    pub partner_degree: i64,
    pub generator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeDecomposition {
    pub degree: i64,
    pub generators: usize,
    pub free_rank: usize,
    pub torsion_orders: Vec<usize>,
    pub undetermined: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub order: usize,
    pub modulus: i64,
    pub degrees: Vec<DegreeDecomposition>,
    pub torsion: Vec<TorsionSummand>,
    pub pivots: Vec<DvrPivot>,
}

impl DecompositionReport {
    pub fn is_determined(&self) -> bool {
        self.degrees.iter().all(|d| d.undetermined == 0)
    }

    pub fn free_rank(&self) -> usize {
        self.degrees.iter().map(|d| d.free_rank).sum()
    }

    pub fn degree(&self, k: i64) -> Option<&DegreeDecomposition> {
        self.degrees.iter().find(|d| d.degree == k)
    }

    /// All torsion orders, sorted.
    pub fn torsion_orders(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.torsion.iter().map(|t| t.order).collect();
        v.sort_unstable();
        v
    }
}

/// Exact u-polynomial matrix of a family `Σ u^k d_k`.
pub fn family_matrix(setup: Setup, n: usize, family: &EqOperator<NovikovElem>) -> Vec<Vec<UPoly>> {
    let mut coeffs = vec![vec![vec![Frac::zero(setup); family.len()]; n]; n];
    for (k, dk) in family.terms.iter().enumerate() {
        for (&(r, c), v) in dk.iter() {
            coeffs[r][c][k] = Frac::from_elem(v.clone());
        }
    }
    coeffs.into_iter().map(|row| row.into_iter().map(UPoly::from_coeffs).collect()).collect()
}

/// Checks `d_eq² = 0` on orders `0..order`.
pub fn check_square_zero(n: usize, family: &EqOperator<NovikovElem>, setup: Setup, order: usize) -> Result<(), ComplexError> {
    for k in 0..order {
        let sq = family.compose_order(family, k, setup, n);
        if !sq.is_zero() {
            return Err(ComplexError::DSquaredNonzero { order: k });
        }
    }
    Ok(())
}

/// Free ranks and u-torsion of the cohomology of `d_eq = Σ u^k d_k` on the
/// basis of `c`, known to order `order`.
///
/// A pivot of valuation `v` from source `x` to target `y` is a summand
/// `Λ[u]/u^v` generated by `y`, in `y`'s degree. Valuation 0 kills both
/// generators; valuation `≥ order` is reported as undetermined. The free rank
/// in degree `k` is the number of degree-`k` generators not used by a pivot.
pub fn u_module_decomposition(
    c: &GradedComplex,
    family: &EqOperator<NovikovElem>,
    order: usize,
) -> Result<DecompositionReport, ComplexError> {
    if !c.setup.ring.is_field() {
        return Err(ComplexError::NonField);
    }
    let n = c.dim();
    for (k, dk) in family.terms.iter().enumerate() {
        if dk.rows() != n || dk.cols() != n {
            return Err(ComplexError::Invalid(format!("d_{k} is {}x{}, basis has {n} generators", dk.rows(), dk.cols())));
        }
    }
    check_square_zero(n, family, c.setup, order)?;
    let grp = c.degree_group();
    let deg: Vec<i64> = c.basis.iter().map(|g| grp.degree_of(g)).collect();
    let pivots = dvr_normal_form(c.setup, family_matrix(c.setup, n, family))?;

    // Only rows are combined, so a pivot row may share its index with another
    // pivot's column; each pivot removes one generator on either side.
    let mut paired: Vec<i64> = Vec::new();
    let mut torsion = Vec::new();
    let mut undetermined_at = Vec::new();
    for p in &pivots {
        paired.push(deg[p.row]);
        paired.push(deg[p.col]);
        if p.valuation >= order {
            undetermined_at.push(deg[p.row]);
        } else if p.valuation > 0 {
            torsion.push(TorsionSummand {
                order: p.valuation,
                degree: deg[p.row],
                partner_degree: deg[p.col],
                generator: c.basis[p.row].name.clone(),
            });
        }
    }
    let degrees = grp
        .degrees(&c.basis)
        .into_iter()
        .map(|k| {
            let here: Vec<usize> = (0..n).filter(|&i| deg[i] == k).collect();
            let mut torsion_orders: Vec<usize> = torsion.iter().filter(|t| t.degree == k).map(|t| t.order).collect();
            torsion_orders.sort_unstable();
            DegreeDecomposition {
                degree: k,
                generators: here.len(),
                free_rank: here.len() - paired.iter().filter(|&&d| d == k).count(),
                torsion_orders,
                undetermined: undetermined_at.iter().filter(|&&d| d == k).count(),
            }
        })
        .collect();
    Ok(DecompositionReport { order, modulus: grp.modulus, degrees, torsion, pivots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::grading::{GeneratorInfo, GradingKind};
    use crate::complexes::matrix::OperatorMatrix;
    use crate::novikov::CoefficientRing;

    fn qq() -> Setup {
        Setup::integral(CoefficientRing::Rationals)
    }

    fn xy() -> GradedComplex {
        // x in degree 0, y in degree −1 so that d_eq(x) = u·y has degree 1
        let basis = vec![GeneratorInfo::new("x", 0), GeneratorInfo::new("y", -1)];
        GradedComplex::new(GradingKind::IntGraded, basis, OperatorMatrix::zero(qq(), 2, 2, 1), qq(), false)
    }

    fn u_power_family(power: usize) -> EqOperator<NovikovElem> {
        let mut terms: Vec<OperatorMatrix<NovikovElem>> =
            (0..=power).map(|k| OperatorMatrix::zero(qq(), 2, 2, 1 - 2 * k as i64)).collect();
        terms[power].set(1, 0, NovikovElem::one(qq()));
        EqOperator::new(terms)
    }

    #[test]
    fn zero_family_is_free() {
        let rep = u_module_decomposition(&xy(), &EqOperator::new(vec![]), 4).unwrap();
        assert_eq!(rep.free_rank(), 2);
        assert!(rep.torsion.is_empty());
    }

    #[test]
    fn single_u_torsion() {
        let rep = u_module_decomposition(&xy(), &u_power_family(1), 4).unwrap();
        assert_eq!(rep.torsion_orders(), vec![1]);
        assert_eq!(rep.torsion[0].generator, "y");
        assert_eq!(rep.free_rank(), 0);
    }

    #[test]
    fn pivot_row_reused_as_column() {
        // x → y₁ + y₂, y₁ → z, y₂ → −z: acyclic, but the pivots are (y₁, x) and (z, y₁)
        let s = qq();
        let basis = ["x", "y1", "y2", "z"].iter().zip([0, 1, 1, 2]).map(|(n, i)| GeneratorInfo::new(*n, i)).collect();
        let one = NovikovElem::one(s);
        let d = OperatorMatrix::from_entries(s, 4, 4, 1, [((1, 0), one.clone()), ((2, 0), one.clone()), ((3, 1), one.clone()), ((3, 2), one.neg())]);
        let c = GradedComplex::new(GradingKind::IntGraded, basis, d.clone(), s, false);
        let rep = u_module_decomposition(&c, &EqOperator::new(vec![d]), 3).unwrap();
        assert_eq!(rep.pivots.len(), 2);
        assert_eq!(rep.free_rank(), 0);
        assert!(rep.degrees.iter().all(|d| d.free_rank == 0), "{:?}", rep.degrees);
    }

    #[test]
    fn pivot_at_truncation_is_undetermined() {
        let rep = u_module_decomposition(&xy(), &u_power_family(2), 2).unwrap();
        assert!(!rep.is_determined());
        assert!(rep.torsion.is_empty());
    }

    #[test]
    fn non_square_zero_rejected() {
        let mut fam = u_power_family(0);
        fam.terms[0].set(0, 1, NovikovElem::one(qq()));
        assert!(matches!(u_module_decomposition(&xy(), &fam, 3), Err(ComplexError::DSquaredNonzero { order: 0 })));
    }

    #[test]
    fn unit_times_u_is_u() {
        // (1 + u)·u and u·(q) both have invariant factor u
        let s = qq();
        let one = Frac::one(s);
        let q = Frac::from_elem(NovikovElem::q_power(s, 1));
        let m = vec![
            vec![UPoly::from_coeffs(vec![Frac::zero(s), one.clone(), one.clone()]), UPoly::zero()],
            vec![UPoly::zero(), UPoly::from_coeffs(vec![Frac::zero(s), q])],
        ];
        let piv = dvr_normal_form(s, m).unwrap();
        assert_eq!(piv.iter().map(|p| p.valuation).collect::<Vec<_>>(), vec![1, 1]);
    }
}
