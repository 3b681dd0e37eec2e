//! `D_q x = u∂_q x + q^{-1}[Ω] ∗ x`, `D_u x = 2u²∂_u x − 2c₁ ∗ x + uμ(x)`
//! and `deg_q = μ + 2u∂_u + 2q∂_q`, with the monotone identity
//! `D_u = (u·deg_q − 2qD_q)|_{q=1}`.

use num_rational::BigRational;

use super::ring::{monomial_scalar, Line, QuantumRing};
use super::QuantumError;
use crate::cartan::SelfTest;
use crate::complexes::EqVec;
use crate::novikov::{NovikovElem, USeries};

type Elem = EqVec<NovikovElem>;

fn check_grading(ring: &QuantumRing, x: &Elem, check: bool) -> Result<(), QuantumError> {
    if check {
        ring.homogeneous_degree(x).map_err(QuantumError::Inhomogeneous)?;
    }
    Ok(())
}

/// `q^{-1}[Ω]` as an element: `ω̂` itself, or `q^{-1}ω̂` when `ω̂` stands for `c₁`.
fn omega_over_q(ring: &QuantumRing, order: usize) -> Elem {
    let w = ring.omega_vec(order);
    if ring.q_degree_two {
        let g = ring.setup.lattice.denom();
        w.map(|c| c.map(|e| e.shift(-g)))
    } else {
        w
    }
}

/// `D_q x`. With `check` set, an inhomogeneous `x` is rejected.
pub fn d_q_connection(ring: &QuantumRing, x: &Elem, check: bool) -> Result<Elem, QuantumError> {
    check_grading(ring, x, check)?;
    let w = omega_over_q(ring, x.order());
    Ok(x.udq()?.shift_u(1).add(&ring.multiply(&w, x)))
}

/// `D_u x`, with `ω̂` in the role of `c₁`.
pub fn d_u_connection(ring: &QuantumRing, x: &Elem, check: bool) -> Result<Elem, QuantumError> {
    check_grading(ring, x, check)?;
    let c1 = ring.omega_vec(x.order());
    let a = x.du().shift_u(2).scale_int(2);
    let b = ring.multiply(&c1, x).scale_int(2);
    let c = x.weight(&ring.degrees()).shift_u(1);
    Ok(a.sub(&b).add(&c))
}

/// `deg_q x = μ(x) + 2u∂_u x + 2q∂_q x`.
pub fn deg_q_operator(ring: &QuantumRing, x: &Elem) -> Result<Elem, QuantumError> {
    let q_dq = x.try_map(|c| {
        let coeffs = c.coeffs().iter().map(|e| e.q_dq()).collect::<Result<Vec<_>, _>>()?;
        Ok::<_, QuantumError>(USeries::from_coeffs(ring.setup, coeffs, c.order()).with_valid(c.valid_order()))
    })?;
    Ok(x.weight(&ring.degrees()).add(&x.map(|c| c.u_du()).scale_int(2)).add(&q_dq.scale_int(2)))
}

/// `u·deg_q x − 2q·D_q x`.
pub fn uq_bracket(ring: &QuantumRing, x: &Elem) -> Result<Elem, QuantumError> {
    let g = ring.setup.lattice.denom();
    let dq = d_q_connection(ring, x, false)?.map(|c| c.map(|e| e.shift(g)));
    Ok(deg_q_operator(ring, x)?.shift_u(1).sub(&dq.scale_int(2)))
}

fn at_q_one(ring: &QuantumRing, x: &Elem) -> Elem {
    let s = ring.setup;
    x.map(|c| c.map(|e| NovikovElem::monomial(s, 0, e.at_q_one())))
}

/// Checks the monotone identity on `q^a u^j e_i` for every basis class, every
/// lattice index `a` in `exponents` and `j < min(order, 3)`.
///
/// The first line certifies that the bracket is `ℤ[q, q^{-1}]`-linear and
/// raises degree by 2 (a structure constant of the wrong degree breaks
/// this); only then is the bracket specialized to `q = 1` and compared with
/// `D_u` of the specialized ring.
pub fn uq_identity_check(ring: &QuantumRing, order: usize, exponents: &[i64]) -> Result<SelfTest, QuantumError> {
    if !ring.q_degree_two {
        return Err(QuantumError::Unsupported("the uq identity needs |q| = 2".into()));
    }
    if let Some(c) = ring.validate_axioms().iter().find(|c| !c.passed) {
        return Err(QuantumError::Invalid(format!("{} fails at {}", c.name, c.witness.clone().unwrap_or_default())));
    }
    let at_one = ring.specialize_at_one();
    let s = ring.setup;
    let mut linear = Line::new("bracket is Z[q,q^-1]-linear of degree 2");
    let mut identity = Line::new("D_u = (u deg_q - 2q D_q) at q = 1");
    let mut pending = Vec::new();
    for i in 0..ring.dim() {
        for j in 0..order.min(3) {
            let base = ring.basis_vec(i, order).scale(&monomial_scalar(s, 0, j, order));
            let b0 = uq_bracket(ring, &base)?;
            for &a in exponents {
                let q_a = monomial_scalar(s, a, 0, order);
                let x = base.scale(&q_a);
                let b = uq_bracket(ring, &x)?;
                let label = || format!("q^{} u^{j} {}", s.lattice.exponent(a), ring.basis[i].name);
                if !b.agrees_with(&b0.scale(&q_a)) {
                    linear.fail(format!("{}: bracket does not commute with q^{}", label(), s.lattice.exponent(a)));
                }
                let want = ring.q_degree(a) + BigRational::from_integer((ring.basis[i].index + 2 * j as i64 + 2).into());
                match ring.homogeneous_degree(&b) {
                    Ok(Some(d)) if d != want => linear.fail(format!("{}: bracket has degree {d}, expected {want}", label())),
                    Err(w) => linear.fail(format!("{}: bracket is inhomogeneous ({w})", label())),
                    _ => linear.check(true, String::new),
                }
                pending.push((label(), b, i, j));
            }
        }
    }
    let linear = linear.done_at(order);
    if linear.passed {
        for (label, b, i, j) in pending {
            let x1 = at_one.basis_vec(i, order).scale(&monomial_scalar(s, 0, j, order));
            let rhs = d_u_connection(&at_one, &x1, false)?;
            identity.check(at_q_one(ring, &b).agrees_with(&rhs), || label);
        }
    } else {
        identity.fail("not evaluated: the bracket is not q-linear of degree 2".into());
    }
    Ok(SelfTest { checks: vec![linear, identity.done_at(order)] })
}
