//! The ℤ/2 finite analogue: operators `d, ι, λ, σ, Σ, ξ, Ξ` over
//! `(ℤ/2)((q))`, the equivariant differential
//! `d_eq = d + h(id + σ) + h²Σ` and the q-connection
//! `Γ_q = ι + hξ + h²(∂_q + Ξ)`, both modulo `h³`.
//!
//! Everything is in characteristic 2, so `+` and `−` agree and the
//! commutator `d∂_q − ∂_q d` is the entrywise derivative `∂_q d`. Note that
//! `∂_q` kills every even power of `q` here. `u = h²` is only notation; the
//! variable is `h`.

use serde::Serialize;
use thiserror::Error;

use crate::complexes::{EqOperator, EqVec, GeneratorInfo, OperatorMatrix};
use crate::novikov::{CoefficientRing, NovikovElem, NovikovError, Setup, USeries};

type Mat = OperatorMatrix<NovikovElem>;

/// Truncation in `h`: every formula is known through `h²`.
pub const H_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("relations fail: {}", .0.failures().join("; "))]
    RelationsFail(Z2Report),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Z2CartanData {
    pub basis: Vec<GeneratorInfo>,
    pub d: Mat,
    pub iota: Mat,
    pub lambda: Mat,
    pub sigma: Mat,
    pub big_sigma: Mat,
    pub xi: Mat,
    pub big_xi: Mat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationLine {
    pub relation: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Z2Report {
    pub relations: Vec<RelationLine>,
}

impl Z2Report {
    pub fn valid(&self) -> bool {
        self.relations.iter().all(|r| r.holds)
    }

    pub fn failures(&self) -> Vec<String> {
        self.relations
            .iter()
            .filter(|r| !r.holds)
            .map(|r| format!("{} ({})", r.relation, r.witness.clone().unwrap_or_default()))
            .collect()
    }
}

/// One order of `h` in an assembled identity: the named contributions and
/// whether they cancel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCertificate {
    pub order: usize,
    pub terms: Vec<String>,
    pub cancels: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub identity: String,
    pub orders: Vec<OrderCertificate>,
    /// Vectors `q^a e_i` on which both sides were also evaluated directly.
    pub evaluated_on: usize,
    pub evaluation_agrees: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assembly {
    /// `d, id + σ, Σ`.
    pub d_eq: EqOperator<NovikovElem>,
    /// The matrix part `ι, ξ, Ξ` of `Γ_q`; the derivation `h²∂_q` is added on application.
    pub gamma_matrix: EqOperator<NovikovElem>,
    pub d_eq_squared: Certificate,
    pub gamma_commutes: Certificate,
}

impl Assembly {
    pub fn apply_gamma(&self, x: &EqVec<NovikovElem>) -> Result<EqVec<NovikovElem>, NovikovError> {
        Ok(self.gamma_matrix.apply(x).add(&x.udq()?.shift_u(2)))
    }

    pub fn passed(&self) -> bool {
        self.d_eq_squared.passed && self.gamma_commutes.passed
    }
}

impl Z2CartanData {
    /// Checks the coefficient ring and the shapes; the relations are left to
    /// [`verify_relations`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        basis: Vec<GeneratorInfo>,
        d: Mat,
        iota: Mat,
        lambda: Mat,
        sigma: Mat,
        big_sigma: Mat,
        xi: Mat,
        big_xi: Mat,
    ) -> Result<Self, FiniteError> {
        let n = basis.len();
        let setup = d.setup();
        if setup.ring != CoefficientRing::PrimeField(2) {
            return Err(FiniteError::Invalid(format!("coefficients must be Z/2, got {}", setup.ring)));
        }
        for (name, m) in [("d", &d), ("iota", &iota), ("lambda", &lambda), ("sigma", &sigma), ("Sigma", &big_sigma), ("xi", &xi), ("Xi", &big_xi)] {
            if m.rows() != n || m.cols() != n {
                return Err(FiniteError::Invalid(format!("{name} is {}x{}, expected {n}x{n}", m.rows(), m.cols())));
            }
            setup.check_same(&m.setup())?;
        }
        Ok(Z2CartanData { basis, d, iota, lambda, sigma, big_sigma, xi, big_xi })
    }

    pub fn setup(&self) -> Setup {
        self.d.setup()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn id(&self) -> Mat {
        OperatorMatrix::identity(self.setup(), self.dim())
    }

    fn witness(&self, m: &Mat) -> Option<String> {
        m.iter().next().map(|(&(r, c), v)| {
            format!("on basis vector {}: component {} is {v}", self.basis[c].name, self.basis[r].name)
        })
    }
}

fn anti(a: &Mat, b: &Mat) -> Mat {
    a.compose(b).add(&b.compose(a))
}

/// Checks every relation exactly; each failure names a basis vector on which
/// the two sides differ.
pub fn verify_relations(z: &Z2CartanData) -> Z2Report {
    let (d, iota, lambda, sigma, ss, xi, xx) = (&z.d, &z.iota, &z.lambda, &z.sigma, &z.big_sigma, &z.xi, &z.big_xi);
    let mut relations = Vec::new();
    let mut line = |name: &str, defect: Result<Mat, NovikovError>| {
        let (holds, witness) = match defect {
            Ok(m) => (m.is_zero(), z.witness(&m)),
            Err(e) => (false, Some(e.to_string())),
        };
        relations.push(RelationLine { relation: name.into(), holds, witness });
    };
    line("d^2 = 0", Ok(d.compose(d)));
    line("d iota = iota d", Ok(anti(d, iota)));
    line("d lambda = lambda d", Ok(anti(d, lambda)));
    line("lambda = dq(d)", d.dq_entrywise().map(|m| m.add(lambda)));
    line("d sigma = sigma d", Ok(anti(d, sigma)));
    line("d Sigma + Sigma d = sigma^2 + id", Ok(anti(d, ss).add(&sigma.compose(sigma)).add(&z.id())));
    line("d xi + xi d = sigma iota + iota sigma", Ok(anti(d, xi).add(&anti(sigma, iota))));
    line(
        "d Xi + Xi d = sigma xi + xi sigma + Sigma iota + iota Sigma + lambda",
        Ok(anti(d, xx).add(&anti(sigma, xi)).add(&anti(ss, iota)).add(lambda)),
    );
    Z2Report { relations }
}

fn order_line(z: &Z2CartanData, order: usize, terms: &[&str], total: &Mat) -> OrderCertificate {
    OrderCertificate {
        order,
        terms: terms.iter().map(|s| s.to_string()).collect(),
        cancels: total.is_zero(),
        witness: z.witness(total),
    }
}

/// Builds `d_eq` and `Γ_q` modulo `h³` and certifies `d_eq² ≡ 0` and
/// `d_eqΓ_q + Γ_q d_eq ≡ 0`, order by order and by direct evaluation on
/// `q^a e_i` for `a ∈ {−2, …, 3}`.
pub fn assemble_and_check(z: &Z2CartanData) -> Result<Assembly, FiniteError> {
    let report = verify_relations(z);
    if !report.valid() {
        return Err(FiniteError::RelationsFail(report));
    }
    let (s, n) = (z.setup(), z.dim());
    let d_eq = EqOperator::new(vec![z.d.clone(), z.id().add(&z.sigma), z.big_sigma.clone()]);
    let gamma_matrix = EqOperator::new(vec![z.iota.clone(), z.xi.clone(), z.big_xi.clone()]);

    let sq: Vec<Mat> = (0..H_ORDER).map(|k| d_eq.compose_order(&d_eq, k, s, n)).collect();
    let sq_orders = vec![
        order_line(z, 0, &["d d"], &sq[0]),
        order_line(z, 1, &["d (id+sigma)", "(id+sigma) d"], &sq[1]),
        order_line(z, 2, &["d Sigma", "Sigma d", "(id+sigma)^2"], &sq[2]),
    ];

    let mut comm: Vec<Mat> =
        (0..H_ORDER).map(|k| d_eq.compose_order(&gamma_matrix, k, s, n).add(&gamma_matrix.compose_order(&d_eq, k, s, n))).collect();
    // d∂_q + ∂_q d = ∂_q(d) entrywise
    comm[2] = comm[2].add(&z.d.dq_entrywise()?);
    let comm_orders = vec![
        order_line(z, 0, &["d iota", "iota d"], &comm[0]),
        order_line(z, 1, &["d xi", "xi d", "(id+sigma) iota", "iota (id+sigma)"], &comm[1]),
        order_line(z, 2, &["d Xi", "Xi d", "dq(d)", "(id+sigma) xi", "xi (id+sigma)", "Sigma iota", "iota Sigma"], &comm[2]),
    ];

    let mut assembly = Assembly {
        d_eq,
        gamma_matrix,
        d_eq_squared: Certificate { identity: "d_eq^2 = 0 mod h^3".into(), orders: sq_orders, evaluated_on: 0, evaluation_agrees: true, passed: false },
        gamma_commutes: Certificate {
            identity: "d_eq Gamma_q + Gamma_q d_eq = 0 mod h^3".into(),
            orders: comm_orders,
            evaluated_on: 0,
            evaluation_agrees: true,
            passed: false,
        },
    };
    let g = s.lattice.denom();
    for i in 0..n {
        for a in -2..=3 {
            let x = EqVec::basis(s, n, H_ORDER, i).scale(&USeries::constant(NovikovElem::q_power(s, a * g), H_ORDER));
            let dx = assembly.d_eq.apply(&x);
            let sq_ok = assembly.d_eq.apply(&dx).is_zero();
            let lhs = assembly.d_eq.apply(&assembly.apply_gamma(&x)?).add(&assembly.apply_gamma(&dx)?);
            assembly.d_eq_squared.evaluated_on += 1;
            assembly.d_eq_squared.evaluation_agrees &= sq_ok;
            assembly.gamma_commutes.evaluated_on += 1;
            assembly.gamma_commutes.evaluation_agrees &= lhs.is_zero();
        }
    }
    for c in [&mut assembly.d_eq_squared, &mut assembly.gamma_commutes] {
        c.passed = c.evaluation_agrees && c.orders.iter().all(|o| o.cancels);
    }
    Ok(assembly)
}
