use num_rational::BigRational;
use serde::Serialize;

use super::QuantumError;
use crate::cartan::CheckLine;
use crate::complexes::{EqVec, GeneratorInfo};
use crate::novikov::{NovikovElem, Setup, USeries};

/// A small quantum product on a free `Λ`-module with a graded basis.
///
/// `basis[i].index` is the cohomological degree. `omega` is the distinguished
/// class: `q^{-1}[Ω]` in general, and `c₁` (so that `q^{-1}[Ω] = q^{-1}ω̂`)
/// when `q_degree_two` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumRing {
    pub setup: Setup,
    pub basis: Vec<GeneratorInfo>,
    pub unit: usize,
    pub omega: Vec<NovikovElem>,
    pub q_degree_two: bool,
    table: Vec<Vec<Vec<NovikovElem>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingReport {
    pub checks: Vec<CheckLine>,
}

impl RingReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl QuantumRing {
    /// `products` lists `e_i ∗ e_j` as coefficient vectors; absent pairs are zero.
    pub fn new(
        setup: Setup,
        basis: Vec<GeneratorInfo>,
        unit: usize,
        omega: Vec<NovikovElem>,
        q_degree_two: bool,
        products: impl IntoIterator<Item = ((usize, usize), Vec<NovikovElem>)>,
    ) -> Result<Self, QuantumError> {
        let n = basis.len();
        if unit >= n {
            return Err(QuantumError::Invalid(format!("unit index {unit} out of range for {n} classes")));
        }
        if omega.len() != n {
            return Err(QuantumError::Invalid(format!("distinguished class has {} coefficients, expected {n}", omega.len())));
        }
        let mut table = vec![vec![vec![NovikovElem::zero(setup); n]; n]; n];
        for ((i, j), v) in products {
            if i >= n || j >= n || v.len() != n {
                return Err(QuantumError::Invalid(format!("product entry ({i}, {j}) has the wrong shape")));
            }
            table[i][j] = v;
        }
        for c in omega.iter().chain(table.iter().flatten().flatten()) {
            setup.check_same(&c.setup())?;
        }
        Ok(QuantumRing { setup, basis, unit, omega, q_degree_two, table })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|g| g.index).collect()
    }

    /// Coefficients of `e_i ∗ e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[NovikovElem] {
        &self.table[i][j]
    }

    /// Nonzero table entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &[NovikovElem])> {
        let n = self.dim();
        (0..n)
            .flat_map(move |i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), self.table[i][j].as_slice()))
            .filter(|(_, v)| v.iter().any(|c| !c.is_zero()))
    }

    /// `x ∗ y`, extended `Λ[[u]]`-bilinearly.
    pub fn multiply(&self, x: &EqVec<NovikovElem>, y: &EqVec<NovikovElem>) -> EqVec<NovikovElem> {
        let n = self.dim();
        let mut out = EqVec::zero(self.setup, n, x.order());
        for (i, xi) in x.comps.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.comps.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.mul(yj);
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out.comps[k] = out.comps[k].add(&c.scale(t));
                    }
                }
            }
        }
        out
    }

    /// `ω̂` as a constant element of `H ⊗ Λ[[u]]`.
    pub fn omega_vec(&self, order: usize) -> EqVec<NovikovElem> {
        EqVec::from_scalars(self.setup, self.omega.clone(), order)
    }

    pub fn basis_vec(&self, i: usize, order: usize) -> EqVec<NovikovElem> {
        EqVec::basis(self.setup, self.dim(), order, i)
    }

    /// The ring with `q = 1` substituted in every structure constant and in `ω̂`.
    pub fn specialize_at_one(&self) -> QuantumRing {
        let s = self.setup;
        let one = |e: &NovikovElem| NovikovElem::monomial(s, 0, e.at_q_one());
        QuantumRing {
            setup: s,
            basis: self.basis.clone(),
            unit: self.unit,
            omega: self.omega.iter().map(one).collect(),
            q_degree_two: false,
            table: self.table.iter().map(|r| r.iter().map(|v| v.iter().map(one).collect()).collect()).collect(),
        }
    }

    /// Degree of `q^a` for lattice index `a`: `2a` when `|q| = 2`, else 0.
    pub fn q_degree(&self, index: i64) -> BigRational {
        if self.q_degree_two {
            self.setup.lattice.exponent(index) * BigRational::from_integer(2.into())
        } else {
            BigRational::from_integer(0.into())
        }
    }

    /// The common degree of every monomial `q^a u^j e_i` in `x`, or a
    /// description of two monomials of different degree. Zero is homogeneous
    /// of every degree and gives `Ok(None)`.
    pub fn homogeneous_degree(&self, x: &EqVec<NovikovElem>) -> Result<Option<BigRational>, String> {
        let mut seen: Option<(BigRational, String)> = None;
        for (i, c) in x.comps.iter().enumerate() {
            for (j, e) in c.coeffs().iter().enumerate().take(c.valid_order()) {
                for (a, _) in e.terms() {
                    let deg = self.q_degree(*a) + BigRational::from_integer((self.basis[i].index + 2 * j as i64).into());
                    let label = format!("q^{} u^{j} {}", self.setup.lattice.exponent(*a), self.basis[i].name);
                    match &seen {
                        None => seen = Some((deg, label)),
                        Some((d, l)) if *d != deg => return Err(format!("{l} has degree {d} but {label} has degree {deg}")),
                        _ => {}
                    }
                }
            }
        }
        Ok(seen.map(|s| s.0))
    }

    /// Unit, graded commutativity and associativity on basis elements.
    pub fn validate_axioms(&self) -> Vec<CheckLine> {
        let n = self.dim();
        let deg = self.degrees();
        let names: Vec<&str> = self.basis.iter().map(|g| g.name.as_str()).collect();
        let e = |i: usize| self.basis_vec(i, 1);
        let mut unit = Line::new("unit acts as identity");
        let mut comm = Line::new("graded commutativity");
        let mut assoc = Line::new("associativity");
        for i in 0..n {
            unit.check(self.multiply(&e(self.unit), &e(i)) == e(i) && self.multiply(&e(i), &e(self.unit)) == e(i), || {
                format!("unit times {}", names[i])
            });
            for j in 0..n {
                let sign = if (deg[i] * deg[j]).rem_euclid(2) == 0 { 1 } else { -1 };
                comm.check(self.multiply(&e(i), &e(j)) == self.multiply(&e(j), &e(i)).scale_int(sign), || {
                    format!("{} * {}", names[i], names[j])
                });
                let ij = self.multiply(&e(i), &e(j));
                for k in 0..n {
                    let jk = self.multiply(&e(j), &e(k));
                    assoc.check(self.multiply(&ij, &e(k)) == self.multiply(&e(i), &jk), || {
                        format!("({} * {}) * {}", names[i], names[j], names[k])
                    });
                }
            }
        }
        vec![unit.done(), comm.done(), assoc.done()]
    }

    /// The ring axioms, plus additivity of degrees when `|q| = 2`.
    pub fn validate(&self) -> RingReport {
        let n = self.dim();
        let deg = self.degrees();
        let names: Vec<&str> = self.basis.iter().map(|g| g.name.as_str()).collect();
        let e = |i: usize| self.basis_vec(i, 1);
        let mut checks = self.validate_axioms();
        if self.q_degree_two {
            let mut graded = Line::new("product adds degrees");
            for i in 0..n {
                for j in 0..n {
                    let p = self.multiply(&e(i), &e(j));
                    let ok = match self.homogeneous_degree(&p) {
                        Ok(Some(d)) => d == BigRational::from_integer((deg[i] + deg[j]).into()),
                        Ok(None) => true,
                        Err(_) => false,
                    };
                    graded.check(ok, || format!("{} * {}", names[i], names[j]));
                }
            }
            checks.push(graded.done());
        }
        RingReport { checks }
    }

    pub fn ensure_valid(&self) -> Result<(), QuantumError> {
        let rep = self.validate();
        match rep.checks.iter().find(|c| !c.passed) {
            None => Ok(()),
            Some(c) => Err(QuantumError::Invalid(format!("{} fails at {}", c.name, c.witness.clone().unwrap_or_default()))),
        }
    }
}

pub(crate) struct Line {
    name: &'static str,
    cases: usize,
    witness: Option<String>,
}

impl Line {
    pub(crate) fn new(name: &'static str) -> Self {
        Line { name, cases: 0, witness: None }
    }

    pub(crate) fn check(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(label());
        }
    }

    pub(crate) fn fail(&mut self, label: String) {
        self.cases += 1;
        if self.witness.is_none() {
            self.witness = Some(label);
        }
    }

    pub(crate) fn done_at(self, order: usize) -> CheckLine {
        CheckLine { name: self.name.into(), passed: self.witness.is_none(), cases: self.cases, verified_order: order, witness: self.witness }
    }

    pub(crate) fn done(self) -> CheckLine {
        self.done_at(0)
    }
}

/// `q^a u^j` as a series of the given order.
pub fn monomial_scalar(setup: Setup, index: i64, j: usize, order: usize) -> USeries<NovikovElem> {
    USeries::monomial(NovikovElem::q_power(setup, index), j, order)
}
