//! The connections on equivariant cohomology, as matrices over `Λ[[u]]` in a
//! basis of lifted representatives.
//!
//! Representatives of `H(d₀)` are lifted order by order to `d_eq`-cocycles
//! `z_i = r_i + u z_{i,1} + ⋯`. This needs the cohomology to be free over
//! `Λ[[u]]` with that many generators; otherwise a lift fails and the
//! computation stops. A closed `w` is then reduced as
//! `w = Σ c_i(u) z_i + d_eq(y)`, one power of `u` at a time.

use serde::Serialize;

use super::data::CartanData;
use super::gamma::{gamma_q, gamma_u};
use super::CartanError;
use crate::complexes::linalg::solve;
use crate::complexes::{cohomology_of, CohomologyReport, EqVec};
use crate::novikov::{Frac, USeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    Q,
    U,
}

impl Which {
    pub fn derivation(&self) -> &'static str {
        match self {
            Which::Q => "u*d/dq",
            Which::U => "2*u^2*d/du",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InducedConnection {
    pub which: Which,
    /// `matrix[j][i]` is the coefficient of `z_j` in `Γ(z_i)`; on
    /// `Σ c_i z_i` the connection acts as the derivation term plus this matrix.
    pub matrix: Vec<Vec<USeries<Frac>>>,
    pub representatives: Vec<EqVec<Frac>>,
    pub degrees: Vec<i64>,
    pub well_defined: bool,
    /// Orders `0..verified_order` of the matrix are exact.
    pub verified_order: usize,
}

impl InducedConnection {
    /// Whether the connection is the bare derivation term (zero matrix).
    pub fn is_pure_derivation(&self) -> bool {
        self.matrix.iter().all(|row| row.iter().all(|c| c.is_zero()))
    }
}

struct Basis<'a> {
    data: &'a CartanData<Frac>,
    coh: CohomologyReport,
    lifts: Vec<EqVec<Frac>>,
    rep_degree: Vec<i64>,
}

impl<'a> Basis<'a> {
    fn new(data: &'a CartanData<Frac>) -> Result<Self, CartanError> {
        let frame = &data.base.frame;
        let grp = frame.degree_group();
        let deg_of: Vec<i64> = frame.basis.iter().map(|g| grp.degree_of(g)).collect();
        let (s, n) = (data.setup(), data.dim());
        let d0 = data.base.family.term(0, s, n);
        let coh = cohomology_of(&d0, &deg_of, grp.modulus, s);
        let mut basis = Basis { data, coh, lifts: Vec::new(), rep_degree: Vec::new() };
        let reps: Vec<(i64, Vec<Frac>)> = basis
            .coh
            .degrees
            .iter()
            .flat_map(|d| d.representatives.iter().map(move |r| (d.degree, d.embed(r, n, s))))
            .collect();
        for (deg, r) in reps {
            let z = basis.lift(r)?;
            basis.lifts.push(z);
            basis.rep_degree.push(deg);
        }
        Ok(basis)
    }

    /// Extends a `d₀`-cocycle to a `d_eq`-cocycle modulo `u^N`.
    fn lift(&self, r: Vec<Frac>) -> Result<EqVec<Frac>, CartanError> {
        let (s, n, order) = (self.data.setup(), self.data.dim(), self.data.order());
        let mut z = EqVec::from_scalars(s, r, order);
        let d0 = self.data.base.family.term(0, s, n);
        for m in 1..order {
            // d₀ z_m = −(order-m part of d_eq applied to z so far)
            let rhs: Vec<Frac> = self.data.apply_d_eq(&z).u_coefficient(m).iter().map(|x| x.neg()).collect();
            let y = solve(&d0.to_dense(), n, &rhs, s).ok_or_else(|| {
                CartanError::NotDegenerate(format!("a representative does not lift past order u^{m}"))
            })?;
            for (i, v) in y.into_iter().enumerate() {
                if !v.is_zero() {
                    z.comps[i] = z.comps[i].add(&USeries::monomial(v, m, order));
                }
            }
        }
        Ok(z)
    }

    /// Coefficients `c_i(u)` with `w = Σ c_i z_i + d_eq(y)` to `valid` orders.
    fn reduce(&self, w: &EqVec<Frac>, valid: usize) -> Result<Vec<USeries<Frac>>, CartanError> {
        let (s, n, order) = (self.data.setup(), self.data.dim(), self.data.order());
        let d0 = self.data.base.family.term(0, s, n).to_dense();
        let k = self.lifts.len();
        let mut coeffs = vec![vec![Frac::zero(s); order]; k];
        let mut y = EqVec::zero(s, n, order);
        for m in 0..valid {
            let mut acc = self.data.apply_d_eq(&y);
            for (i, zi) in self.lifts.iter().enumerate() {
                let ci = USeries::from_coeffs(s, coeffs[i].clone(), order);
                acc = acc.add(&zi.scale(&ci));
            }
            let rho: Vec<Frac> = w.u_coefficient(m).iter().zip(acc.u_coefficient(m)).map(|(a, b)| a.sub(&b)).collect();
            // split ρ into classes degree by degree, then solve for the boundary part
            let mut rest = rho.clone();
            let mut next = 0;
            for deg in &self.coh.degrees {
                let local = deg.restrict(&rho);
                let class = deg
                    .class_of(&local, s)
                    .ok_or_else(|| CartanError::Internal(format!("image is not closed at order u^{m}")))?;
                for (j, c) in class.into_iter().enumerate() {
                    if !c.is_zero() {
                        let r = deg.embed(&deg.representatives[j], n, s);
                        for (x, ri) in rest.iter_mut().zip(&r) {
                            *x = x.sub(&c.mul(ri));
                        }
                    }
                    coeffs[next + j][m] = c;
                }
                next += deg.betti();
            }
            let ym = solve(&d0, n, &rest, s)
                .ok_or_else(|| CartanError::Internal(format!("residual at order u^{m} is not a boundary")))?;
            for (i, v) in ym.into_iter().enumerate() {
                if !v.is_zero() {
                    y.comps[i] = y.comps[i].add(&USeries::monomial(v, m, order));
                }
            }
        }
        Ok(coeffs.into_iter().map(|c| USeries::from_coeffs(s, c, order).with_valid(valid)).collect())
    }
}

fn apply(which: Which, data: &CartanData<Frac>, x: &EqVec<Frac>) -> Result<EqVec<Frac>, CartanError> {
    match which {
        Which::Q => gamma_q(data, x),
        Which::U => gamma_u(data, x),
    }
}

/// Matrix of `Γ_q` or `Γ_u` on equivariant cohomology in the lifted
/// representative basis, with a well-definedness test that perturbs every
/// representative by `d_eq` of every basis vector.
pub fn induced_on_cohomology(data: &CartanData<Frac>, which: Which) -> Result<InducedConnection, CartanError> {
    if !data.setup().ring.is_field() {
        return Err(CartanError::NonField);
    }
    data.ensure_valid()?;
    let basis = Basis::new(data)?;
    let (s, n) = (data.setup(), data.dim());
    let mut matrix_cols = Vec::new();
    let mut verified = data.order();
    for z in &basis.lifts {
        let w = apply(which, data, z)?;
        let valid = w.valid_order();
        verified = verified.min(valid);
        matrix_cols.push(basis.reduce(&w, valid)?);
    }
    let k = basis.lifts.len();
    let matrix: Vec<Vec<USeries<Frac>>> = (0..k).map(|j| (0..k).map(|i| matrix_cols[i][j].clone()).collect()).collect();

    let mut well_defined = true;
    for (i, z) in basis.lifts.iter().enumerate() {
        for g in 0..n {
            let bump = data.apply_d_eq(&EqVec::basis(s, n, data.order(), g));
            if bump.is_zero() {
                continue;
            }
            let w = apply(which, data, &z.add(&bump))?;
            let c = basis.reduce(&w, verified)?;
            if c.iter().zip(&matrix_cols[i]).any(|(a, b)| !a.agrees_with(b)) {
                well_defined = false;
            }
        }
    }
    Ok(InducedConnection {
        which,
        matrix,
        representatives: basis.lifts.clone(),
        degrees: basis.rep_degree.clone(),
        well_defined,
        verified_order: verified,
    })
}
