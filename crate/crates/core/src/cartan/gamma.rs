//! The connections `Γ_q = u∂_q + ι_eq` and `Γ_u = 2u²∂_u + uμ − 2ι_eq`,
//! their self-tests, and the grading identity `Γ_u + 2qΓ_q = u·deg`.
//!
//! With `|q| = 2` the stored `λ` and `ι` are the ungraded ones
//! (`λ = ∂_q d`, `[d_eq, ι_eq] = uλ_eq`), and the operators entering `Γ_u`
//! and the `μ` relations are `qλ` and `qι`. On an integer grading where `q`
//! has degree 0 the first Chern class plays no role and `Γ_u` has no `ι`
//! term.

use serde::Serialize;

use super::data::{CartanData, Monomials};
use super::CartanError;
use crate::complexes::{EqOperator, EqVec, OperatorMatrix};
use crate::novikov::{NovikovElem, Scalar, USeries};

/// Outcome of one named identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub verified_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfTest {
    pub checks: Vec<CheckLine>,
}

impl SelfTest {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Tally {
    name: String,
    cases: usize,
    order: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &str, order: usize) -> Self {
        Tally { name: name.into(), cases: 0, order, witness: None }
    }

    fn compare<S: Scalar>(&mut self, label: impl Fn() -> String, lhs: &EqVec<S>, rhs: &EqVec<S>) {
        self.cases += 1;
        self.order = self.order.min(lhs.valid_order()).min(rhs.valid_order());
        if self.witness.is_none() && !lhs.agrees_with(rhs) {
            let show = |v: &EqVec<S>| v.comps.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
            self.witness = Some(format!("{}: lhs [{}] vs rhs [{}]", label(), show(lhs), show(rhs)));
        }
    }

    fn compare_flat<S: Scalar>(&mut self, label: impl Fn() -> String, lhs: &[S], rhs: &[S]) {
        self.cases += 1;
        if self.witness.is_none() && lhs != rhs {
            let show = |v: &[S]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
            self.witness = Some(format!("{}: lhs [{}] vs rhs [{}]", label(), show(lhs), show(rhs)));
        }
    }

    fn matrix<S: Scalar>(&mut self, label: &str, m: &OperatorMatrix<S>, names: &[String]) {
        self.cases += 1;
        if self.witness.is_none() {
            if let Some((&(r, c), v)) = m.iter().next() {
                self.witness = Some(format!("{label}: entry ({}, {}) is {v}", names[r], names[c]));
            }
        }
    }

    fn done(self) -> CheckLine {
        CheckLine { passed: self.witness.is_none(), name: self.name, cases: self.cases, verified_order: self.order, witness: self.witness }
    }
}

impl<S: Monomials> CartanData<S> {
    fn q(&self) -> S {
        S::from_elem(NovikovElem::q_power(self.setup(), self.setup().lattice.denom()))
    }

    fn names(&self) -> Vec<String> {
        self.base.frame.basis.iter().map(|g| g.name.clone()).collect()
    }

    fn indices(&self) -> Vec<i64> {
        self.base.frame.basis.iter().map(|g| g.index).collect()
    }

    /// `d_eq` applied to a vector.
    pub fn apply_d_eq(&self, x: &EqVec<S>) -> EqVec<S> {
        self.base.family.apply(x)
    }

    /// The operator standing for `ι` in `Γ_u`: `qι` with `|q| = 2`, zero on an
    /// integer grading with ungraded `q`.
    fn graded_family(&self, fam: &EqOperator<S>) -> Result<EqOperator<S>, CartanError> {
        if self.q_degree_two() {
            let q = self.q();
            Ok(EqOperator::new(fam.terms.iter().map(|m| m.scale(&q)).collect()))
        } else if self.base.has_integer_lift() {
            Ok(EqOperator::new(vec![]))
        } else {
            Err(CartanError::Unsupported("Γ_u needs an integer grading or |q| = 2".into()))
        }
    }

    pub fn graded_iota(&self) -> Result<EqOperator<S>, CartanError> {
        self.graded_family(&self.iota)
    }

    pub fn graded_lambda(&self) -> Result<EqOperator<S>, CartanError> {
        self.graded_family(&self.lambda)
    }

    fn const_series(&self, c: S) -> USeries<S> {
        USeries::constant(c, self.order())
    }

    fn basis_vec(&self, i: usize) -> EqVec<S> {
        EqVec::basis(self.setup(), self.dim(), self.order(), i)
    }
}

/// `u∂_q x + ι_eq(x)`.
pub fn gamma_q<S: Monomials>(data: &CartanData<S>, x: &EqVec<S>) -> Result<EqVec<S>, CartanError> {
    Ok(x.udq()?.shift_u(1).add(&data.iota.apply(x)))
}

/// `2u²∂_u x + uμ(x) − 2ι(x)`, with `ι` in its graded form.
pub fn gamma_u<S: Monomials>(data: &CartanData<S>, x: &EqVec<S>) -> Result<EqVec<S>, CartanError> {
    let iota = data.graded_iota()?;
    let a = x.du().shift_u(2).scale_int(2);
    let b = x.weight(&data.indices()).shift_u(1);
    Ok(a.add(&b).sub(&iota.apply(x).scale_int(2)))
}

/// `u·deg(x) = u(μ + 2u∂_u + 2q∂_q)x`, with the `q` term only when `|q| = 2`.
pub fn u_deg<S: Monomials>(data: &CartanData<S>, x: &EqVec<S>) -> Result<EqVec<S>, CartanError> {
    let mut inner = x.weight(&data.indices()).add(&x.map(|c| c.u_du()).scale_int(2));
    if data.q_degree_two() {
        let q = data.const_series(data.q());
        inner = inner.add(&x.udq()?.scale(&q).scale_int(2));
    }
    Ok(inner.shift_u(1))
}

/// Chain-map and Leibniz self-tests of `Γ_q` on every basis vector, with the
/// Leibniz rule tried against each of `scalars`.
pub fn gamma_q_self_test<S: Monomials>(data: &CartanData<S>, scalars: &[USeries<S>]) -> Result<SelfTest, CartanError> {
    let n = data.dim();
    let names = data.names();
    let mut chain = Tally::new("gamma_q commutes with d_eq", data.order());
    let mut leibniz = Tally::new("gamma_q Leibniz rule", data.order());
    let mut u_zero = Tally::new("u^0 part of gamma_q is iota", data.order());
    for i in 0..n {
        let e = data.basis_vec(i);
        let lhs = gamma_q(data, &data.apply_d_eq(&e))?;
        let rhs = data.apply_d_eq(&gamma_q(data, &e)?);
        chain.compare(|| format!("basis vector {}", names[i]), &lhs, &rhs);
        let g = gamma_q(data, &e)?;
        let iota0 = data.iota_term(0).apply(&e.u_coefficient(0));
        u_zero.compare_flat(|| format!("basis vector {}", names[i]), &g.u_coefficient(0), &iota0);
        for (j, f) in scalars.iter().enumerate() {
            let fx = e.scale(f);
            let lhs = gamma_q(data, &fx)?;
            let df = f.udq()?.shift_u(1);
            let rhs = g.scale(f).add(&e.scale(&df));
            leibniz.compare(|| format!("scalar #{j} on {}", names[i]), &lhs, &rhs);
        }
    }
    Ok(SelfTest { checks: vec![chain.done(), leibniz.done(), u_zero.done()] })
}

/// The four self-tests of `Γ_u`: the two `μ` relations, the twisted chain
/// map property and the Leibniz rule.
pub fn gamma_u_self_test<S: Monomials>(data: &CartanData<S>, scalars: &[USeries<S>]) -> Result<SelfTest, CartanError> {
    let (s, n, order) = (data.setup(), data.dim(), data.order());
    let names = data.names();
    let idx = data.indices();
    let lam_g = data.graded_lambda()?;
    let mu = OperatorMatrix::from_entries(
        s,
        n,
        n,
        0,
        idx.iter().enumerate().map(|(i, &k)| ((i, i), S::from_elem(NovikovElem::constant(s, k)))),
    );
    let mut rel0 = Tally::new("mu d - d mu = d - 2 lambda", order);
    let mut rel = Tally::new("mu d_eq - d_eq mu = sum (1-2k) u^k d_k - 2 lambda_eq", order);
    for k in 0..order {
        let dk = data.base.family.term(k, s, n);
        let lk = lam_g.term(k, s, n);
        let lhs = mu.compose(&dk).sub(&dk.compose(&mu));
        let defect = lhs.sub(&dk.scale_int(1 - 2 * k as i64)).add(&lk.scale_int(2));
        if k == 0 {
            rel0.matrix("order 0", &defect, &names);
        }
        rel.matrix(&format!("order {k}"), &defect, &names);
    }
    let mut twisted = Tally::new("gamma_u d_eq - d_eq gamma_u = u d_eq", order);
    let mut leibniz = Tally::new("gamma_u Leibniz rule", order);
    let mut u_zero = Tally::new("u^0 part of gamma_u is -2 iota", order);
    let iota_g = data.graded_iota()?;
    for i in 0..n {
        let e = data.basis_vec(i);
        let de = data.apply_d_eq(&e);
        let lhs = gamma_u(data, &de)?.sub(&data.apply_d_eq(&gamma_u(data, &e)?));
        twisted.compare(|| format!("basis vector {}", names[i]), &lhs, &de.shift_u(1));
        let g = gamma_u(data, &e)?;
        let want: Vec<S> = iota_g.term(0, s, n).apply(&e.u_coefficient(0)).iter().map(|v| v.scale_int(-2)).collect();
        u_zero.compare_flat(|| format!("basis vector {}", names[i]), &g.u_coefficient(0), &want);
        for (j, f) in scalars.iter().enumerate() {
            let lhs = gamma_u(data, &e.scale(f))?;
            let rhs = g.scale(f).add(&e.scale(&f.du().shift_u(2).scale_int(2)));
            leibniz.compare(|| format!("scalar #{j} on {}", names[i]), &lhs, &rhs);
        }
    }
    Ok(SelfTest { checks: vec![rel0.done(), rel.done(), twisted.done(), leibniz.done(), u_zero.done()] })
}

/// `Γ_u + 2qΓ_q = u·deg` on every basis vector times each of `scalars`
/// (the unit scalar is always included).
pub fn gamma_relation_check<S: Monomials>(data: &CartanData<S>, scalars: &[USeries<S>]) -> Result<SelfTest, CartanError> {
    if !data.q_degree_two() {
        return Err(CartanError::Unsupported("the grading identity needs |q| = 2".into()));
    }
    let names = data.names();
    let two_q = data.const_series(data.q().scale_int(2));
    let mut all = vec![data.const_series(S::one(data.setup()))];
    all.extend(scalars.iter().cloned());
    let mut t = Tally::new("gamma_u + 2q gamma_q = u deg", data.order());
    for i in 0..data.dim() {
        for (j, f) in all.iter().enumerate() {
            let x = data.basis_vec(i).scale(f);
            let lhs = gamma_u(data, &x)?.add(&gamma_q(data, &x)?.scale(&two_q));
            let rhs = u_deg(data, &x)?;
            t.compare(|| format!("scalar #{j} on {}", names[i]), &lhs, &rhs);
        }
    }
    Ok(SelfTest { checks: vec![t.done()] })
}
