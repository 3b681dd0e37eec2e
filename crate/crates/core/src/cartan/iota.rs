//! Order-by-order construction of `ι_eq` with `d_eq ι_eq − ι_eq d_eq = u λ_eq`.
//!
//! At order `m` the unknown `ι_m` solves
//! `d₀ι_m − ι_m d₀ = λ_{m−1} − Σ_{k₂<m} (d_{m−k₂} ι_{k₂} − ι_{k₂} d_{m−k₂})`,
//! a linear system over the Novikov field. Unknowns are restricted to the
//! entries the grading allows. When a stage has no solution the earlier free
//! choices are reopened and orders `0..=m` are solved jointly; only if that
//! fails is an obstruction reported.

use std::collections::BTreeMap;

use serde::Serialize;

use super::data::{iota_degree, CartanData, EquivariantDifferential};
use super::CartanError;
use crate::complexes::linalg::solve_detailed;
use crate::complexes::{EqOperator, OperatorMatrix};
use crate::novikov::{Frac, NovikovElem, Setup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryValue {
    pub row: String,
    pub col: String,
    pub value: String,
}

/// No `ι_eq` exists through this order, with the right-hand side that could
/// not be written as a commutator with `d₀`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub order: usize,
    pub rhs: Vec<EntryValue>,
    /// Equation that keeps a nonzero residual after elimination.
    pub witness: EntryValue,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IotaOutcome {
    Solved { iota: EqOperator<Frac>, verified_order: usize },
    Obstructed(Obstruction),
}

/// Allowed entries of `ι_k`, with the q-index a homogeneous entry must have
/// in the `|q| = 2` regime.
fn allowed_entries(d: &EquivariantDifferential<Frac>, k: usize) -> Vec<(usize, usize, Option<i64>)> {
    let frame = &d.frame;
    let deg = iota_degree(frame.q_degree_two, k);
    let grp = frame.degree_group();
    let lattice = frame.setup.lattice;
    let n = frame.dim();
    let mut out = Vec::new();
    for t in 0..n {
        for s in 0..n {
            let shift = frame.basis[t].index - frame.basis[s].index;
            if frame.q_degree_two {
                // i(t) − i(s) + 2E = deg
                let e = num_rational::BigRational::new((deg - shift).into(), 2.into());
                if let Some(idx) = lattice.index_of(&e) {
                    out.push((t, s, Some(idx)));
                }
            } else if grp.reduce(shift) == grp.reduce(deg) {
                out.push((t, s, None));
            }
        }
    }
    out
}

struct System {
    rows: Vec<(usize, usize, usize)>,
    index: BTreeMap<(usize, usize, usize), usize>,
    matrix: Vec<Vec<Frac>>,
    rhs: Vec<Frac>,
}

impl System {
    fn row(&mut self, key: (usize, usize, usize), ncols: usize, setup: Setup) -> usize {
        if let Some(&r) = self.index.get(&key) {
            return r;
        }
        let r = self.rows.len();
        self.rows.push(key);
        self.index.insert(key, r);
        self.matrix.push(vec![Frac::zero(setup); ncols]);
        self.rhs.push(Frac::zero(setup));
        r
    }
}

/// Builds and solves the Cartan equations at `orders`, with unknown entries
/// `unknowns` (as `(k, t, s)`) and the remaining `ι_k` taken from `fixed`.
fn solve_orders(
    d: &EquivariantDifferential<Frac>,
    lambda: &EqOperator<Frac>,
    fixed: &[OperatorMatrix<Frac>],
    unknowns: &[(usize, usize, usize)],
    orders: std::ops::RangeInclusive<usize>,
) -> Result<Vec<Frac>, (usize, usize, usize, Frac, OperatorMatrix<Frac>)> {
    let setup = d.setup();
    let n = d.dim();
    let ncols = unknowns.len();
    let unknown_k: Vec<bool> = (0..fixed.len()).map(|k| unknowns.iter().any(|u| u.0 == k)).collect();
    let mut sys = System { rows: Vec::new(), index: BTreeMap::new(), matrix: Vec::new(), rhs: Vec::new() };
    let mut rhs_by_order = BTreeMap::new();
    for m in orders.clone() {
        // right-hand side: λ_{m−1} minus the commutators with known ι_{k₂}
        let mut rhs = if m > 0 { lambda.term(m - 1, setup, n) } else { OperatorMatrix::zero(setup, n, n, 0) };
        for k2 in 0..=m {
            if unknown_k.get(k2).copied().unwrap_or(false) {
                continue;
            }
            let Some(i2) = fixed.get(k2) else { continue };
            let dk = d.family.term(m - k2, setup, n);
            rhs = rhs.sub(&dk.compose(i2).sub(&i2.compose(&dk)));
        }
        for (&(a, b), v) in rhs.iter() {
            let r = sys.row((m, a, b), ncols, setup);
            sys.rhs[r] = v.clone();
        }
        rhs_by_order.insert(m, rhs);
    }
    for (col, &(k, t, s)) in unknowns.iter().enumerate() {
        for m in orders.clone() {
            if k > m {
                continue;
            }
            let dk = d.family.term(m - k, setup, n);
            // (d X)_{a s} picks up d[a, t]; (X d)_{t b} picks up d[s, b]
            for (&(a, tt), v) in dk.iter() {
                if tt == t {
                    let r = sys.row((m, a, s), ncols, setup);
                    sys.matrix[r][col] = sys.matrix[r][col].add(v);
                }
            }
            for (&(ss, b), v) in dk.iter() {
                if ss == s {
                    let r = sys.row((m, t, b), ncols, setup);
                    sys.matrix[r][col] = sys.matrix[r][col].sub(v);
                }
            }
        }
    }
    solve_detailed(&sys.matrix, ncols, &sys.rhs, setup).map_err(|(r, residual)| {
        let (m, a, b) = sys.rows[r];
        (m, a, b, residual, rhs_by_order.remove(&m).unwrap())
    })
}

/// Replaces each entry by its `q^E` coefficient, `E` being the exponent the
/// grading prescribes.
fn homogenize(x: &Frac, idx: Option<i64>) -> Result<Frac, CartanError> {
    match idx {
        None => Ok(x.clone()),
        Some(i) => {
            let c = x.coefficient(i)?;
            Ok(Frac::from_elem(NovikovElem::monomial(x.setup(), i, c)))
        }
    }
}

/// Solves for `ι_0, …, ι_{N−1}`. A supplied `ι_0` is kept fixed.
pub fn solve_iota(
    d: &EquivariantDifferential<NovikovElem>,
    lambda: &EqOperator<NovikovElem>,
    iota0: Option<&OperatorMatrix<NovikovElem>>,
) -> Result<IotaOutcome, CartanError> {
    let setup = d.setup();
    if !setup.ring.is_field() {
        return Err(CartanError::NonField);
    }
    let probe = CartanData::new(d.clone(), lambda.clone(), EqOperator::new(vec![]));
    let base = probe.base.validate();
    if !base.is_valid() {
        return Err(CartanError::InvalidData(base));
    }
    let df = d.to_frac();
    let lf = probe.to_frac().lambda;
    let n = d.dim();
    let order = d.order;
    let q2 = d.frame.q_degree_two;
    let allowed: Vec<Vec<(usize, usize, Option<i64>)>> = (0..order).map(|k| allowed_entries(&df, k)).collect();
    let mut fixed: Vec<OperatorMatrix<Frac>> =
        (0..order).map(|k| OperatorMatrix::zero(setup, n, n, iota_degree(q2, k))).collect();
    let user_zero = iota0.is_some();
    if let Some(i0) = iota0 {
        if order > 0 {
            fixed[0] = i0.to_frac().with_degree(iota_degree(q2, 0));
        }
    }
    let unknowns_for = |ks: std::ops::RangeInclusive<usize>| -> Vec<(usize, usize, usize)> {
        ks.filter(|&k| !(k == 0 && user_zero))
            .flat_map(|k| allowed[k].iter().map(move |&(t, s, _)| (k, t, s)))
            .collect()
    };
    let install = |fixed: &mut Vec<OperatorMatrix<Frac>>, unknowns: &[(usize, usize, usize)], x: &[Frac]| -> Result<(), CartanError> {
        for k in unknowns.iter().map(|u| u.0).collect::<std::collections::BTreeSet<_>>() {
            fixed[k] = OperatorMatrix::zero(setup, n, n, iota_degree(q2, k));
        }
        for (&(k, t, s), v) in unknowns.iter().zip(x) {
            let idx = allowed[k].iter().find(|a| a.0 == t && a.1 == s).and_then(|a| a.2);
            fixed[k].set(t, s, homogenize(v, idx)?);
        }
        Ok(())
    };
    for m in 0..order {
        let unknowns = unknowns_for(m..=m);
        match solve_orders(&df, &lf, &fixed, &unknowns, m..=m) {
            Ok(x) => install(&mut fixed, &unknowns, &x)?,
            Err(_) => {
                let joint = unknowns_for(0..=m);
                match solve_orders(&df, &lf, &fixed, &joint, 0..=m) {
                    Ok(x) => install(&mut fixed, &joint, &x)?,
                    Err((mm, a, b, residual, rhs)) => {
                        let name = |i: usize| d.frame.basis[i].name.clone();
                        return Ok(IotaOutcome::Obstructed(Obstruction {
                            order: mm,
                            rhs: rhs
                                .iter()
                                .map(|(&(r, c), v)| EntryValue { row: name(r), col: name(c), value: v.to_string() })
                                .collect(),
                            witness: EntryValue { row: name(a), col: name(b), value: residual.to_string() },
                        }));
                    }
                }
            }
        }
    }
    let iota = EqOperator::new(fixed);
    let data = CartanData::new(df, lf, iota.clone());
    for k in 0..order {
        if !data.cartan_defect(k).is_zero() {
            return Err(CartanError::Internal(format!("solved iota fails the Cartan identity at order {k}")));
        }
    }
    Ok(IotaOutcome::Solved { iota, verified_order: order })
}

/// Difference between a supplied and a solved `ι_eq`. Both solve the same
/// inhomogeneous equation, so the difference must commute with `d_eq`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IotaDiscrepancy {
    pub differing_orders: Vec<usize>,
    pub difference_commutes_with_d_eq: bool,
}

pub fn iota_discrepancy(data: &CartanData<Frac>, solved: &EqOperator<Frac>) -> IotaDiscrepancy {
    let (s, n) = (data.setup(), data.dim());
    let order = data.order();
    let diff = EqOperator::new((0..order).map(|k| data.iota.term(k, s, n).sub(&solved.term(k, s, n))).collect());
    let differing_orders = (0..order).filter(|&k| !diff.terms[k].is_zero()).collect();
    let fam = &data.base.family;
    let commutes =
        (0..order).all(|k| fam.compose_order(&diff, k, s, n).sub(&diff.compose_order(fam, k, s, n)).is_zero());
    IotaDiscrepancy { differing_orders, difference_commutes_with_d_eq: commutes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::lambda_from_differentiation;
    use crate::complexes::{GeneratorInfo, GradedComplex, GradingKind};
    use crate::novikov::CoefficientRing;

    fn qq() -> Setup {
        Setup::integral(CoefficientRing::Rationals)
    }

    fn diff(indices: &[i64], d0: OperatorMatrix<NovikovElem>, q2: bool, order: usize) -> EquivariantDifferential<NovikovElem> {
        let basis = indices.iter().enumerate().map(|(i, &k)| GeneratorInfo::new(format!("g{i}"), k)).collect();
        let frame = GradedComplex::new(GradingKind::IntGraded, basis, d0.clone(), qq(), q2);
        EquivariantDifferential::new(frame, EqOperator::new(vec![d0]), order)
    }

    #[test]
    fn zero_lambda_keeps_iota_zero() {
        let d0 = OperatorMatrix::from_entries(qq(), 2, 2, 1, [((1, 0), NovikovElem::one(qq()))]);
        let d = diff(&[0, 1], d0, false, 3);
        let (lam, _) = lambda_from_differentiation(&d).unwrap();
        let IotaOutcome::Solved { iota, .. } = solve_iota(&d, &lam, None).unwrap() else { panic!() };
        assert!(iota.terms.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn two_generator_solution_substitutes() {
        let d0 = OperatorMatrix::from_entries(qq(), 2, 2, 1, [((1, 0), NovikovElem::q_power(qq(), 1))]);
        let d = diff(&[0, 1], d0, false, 3);
        let (lam, _) = lambda_from_differentiation(&d).unwrap();
        let IotaOutcome::Solved { iota, .. } = solve_iota(&d, &lam, None).unwrap() else { panic!() };
        // direct substitution: d₀ι₁ − ι₁d₀ = λ₀
        let l = lam.terms[0].to_frac();
        let d0 = d.family.terms[0].to_frac();
        let i1 = &iota.terms[1];
        assert_eq!(d0.compose(i1).sub(&i1.compose(&d0)), l);
    }

    #[test]
    fn monotone_solution_is_homogeneous() {
        let d0 = OperatorMatrix::from_entries(qq(), 2, 2, 1, [((1, 0), NovikovElem::q_power(qq(), 1))]);
        let d = diff(&[0, -1], d0, true, 3);
        let (lam, _) = lambda_from_differentiation(&d).unwrap();
        let IotaOutcome::Solved { iota, .. } = solve_iota(&d, &lam, None).unwrap() else { panic!() };
        let data = CartanData::new(d.to_frac(), EqOperator::new(vec![lam.terms[0].to_frac()]), iota);
        assert!(data.validate().is_valid(), "{:?}", data.validate());
    }

    #[test]
    fn obstruction_against_zero_differential() {
        let d = diff(&[0], OperatorMatrix::zero(qq(), 1, 1, 1), false, 3);
        let lam = EqOperator::new(vec![OperatorMatrix::identity(qq(), 1)]);
        match solve_iota(&d, &lam, None).unwrap() {
            IotaOutcome::Obstructed(o) => {
                assert_eq!(o.order, 1);
                assert_eq!(o.witness.row, "g0");
            }
            other => panic!("expected obstruction, got {other:?}"),
        }
    }
}
