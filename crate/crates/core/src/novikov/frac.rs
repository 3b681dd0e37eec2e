use std::fmt;

use super::elem::NovikovElem;
use super::ring::{Coef, CoefficientRing, Setup};
use super::NovikovError;

/// Element of the fraction field of `Λ` (Laurent polynomials in `q^g` over a
/// field), kept in lowest terms.
///
/// Normal form: the denominator has valuation 0, constant term 1, and is
/// coprime to the numerator. Equality is therefore structural, and a value
/// with denominator 1 is exactly a finite Novikov sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frac {
    num: NovikovElem,
    den: NovikovElem,
}

// Dense polynomial helpers on coefficient vectors (index 0 = constant term).

fn trim(ring: CoefficientRing, p: &mut Vec<Coef>) {
    while p.last().is_some_and(|c| ring.is_zero(c)) {
        p.pop();
    }
}

fn to_dense(e: &NovikovElem) -> (i64, Vec<Coef>) {
    let ring = e.setup().ring;
    let Some(v) = e.valuation() else {
        return (0, Vec::new());
    };
    let top = e.top_index().unwrap();
    let mut out = vec![ring.zero(); (top - v + 1) as usize];
    for (n, c) in e.terms() {
        out[(n - v) as usize] = c.clone();
    }
    (v, out)
}

fn from_dense(setup: Setup, shift: i64, p: &[Coef]) -> NovikovElem {
    NovikovElem::from_terms(
        setup,
        p.iter().enumerate().map(|(i, c)| (i as i64 + shift, c.clone())),
    )
}

fn poly_rem(ring: CoefficientRing, a: &[Coef], b: &[Coef]) -> Vec<Coef> {
    let mut r = a.to_vec();
    trim(ring, &mut r);
    let lead_inv = ring.inv(b.last().unwrap()).expect("field coefficients");
    while r.len() >= b.len() && !r.is_empty() {
        let f = ring.mul(r.last().unwrap(), &lead_inv);
        let off = r.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            r[off + i] = ring.sub(&r[off + i], &ring.mul(&f, bc));
        }
        trim(ring, &mut r);
    }
    r
}

fn poly_div_exact(ring: CoefficientRing, a: &[Coef], b: &[Coef]) -> Vec<Coef> {
    let mut r = a.to_vec();
    trim(ring, &mut r);
    if r.is_empty() {
        return r;
    }
    let lead_inv = ring.inv(b.last().unwrap()).expect("field coefficients");
    let mut q = vec![ring.zero(); r.len() + 1 - b.len()];
    while r.len() >= b.len() && !r.is_empty() {
        let f = ring.mul(r.last().unwrap(), &lead_inv);
        let off = r.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            r[off + i] = ring.sub(&r[off + i], &ring.mul(&f, bc));
        }
        q[off] = f;
        trim(ring, &mut r);
    }
    debug_assert!(r.is_empty(), "inexact polynomial division");
    trim(ring, &mut q);
    q
}

fn poly_gcd(ring: CoefficientRing, a: &[Coef], b: &[Coef]) -> Vec<Coef> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(ring, &mut x);
    trim(ring, &mut y);
    while !y.is_empty() {
        let r = poly_rem(ring, &x, &y);
        x = y;
        y = r;
    }
    x
}

impl Frac {
    pub fn from_elem(num: NovikovElem) -> Self {
        let setup = num.setup();
        Frac { num, den: NovikovElem::one(setup) }
    }

    pub fn zero(setup: Setup) -> Self {
        Self::from_elem(NovikovElem::zero(setup))
    }

    pub fn one(setup: Setup) -> Self {
        Self::from_elem(NovikovElem::one(setup))
    }

    /// `num/den` in lowest terms.
    pub fn new(num: NovikovElem, den: NovikovElem) -> Result<Self, NovikovError> {
        num.setup().check_same(&den.setup())?;
        let setup = num.setup();
        if !setup.ring.is_field() {
            return Err(NovikovError::NonField);
        }
        if den.is_zero() {
            return Err(NovikovError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: NovikovElem, den: NovikovElem) -> Self {
        let setup = num.setup();
        let ring = setup.ring;
        if num.is_zero() {
            return Self::zero(setup);
        }
        if den.is_monomial() {
            let (v, c) = den.leading().unwrap().clone();
            let inv = ring.inv(&c).expect("field coefficients");
            return Frac { num: num.shift(-v).scale(&inv), den: NovikovElem::one(setup) };
        }
        let (nv, np) = to_dense(&num);
        let (dv, dp) = to_dense(&den);
        let g = poly_gcd(ring, &np, &dp);
        let (np, dp) = if g.len() > 1 {
            (poly_div_exact(ring, &np, &g), poly_div_exact(ring, &dp, &g))
        } else {
            (np, dp)
        };
        // dp has nonzero constant term: the shift by dv was removed in to_dense,
        // and dividing by a gcd keeps that property
        let c0_inv = ring.inv(&dp[0]).expect("nonzero constant term");
        let dp: Vec<Coef> = dp.iter().map(|c| ring.mul(c, &c0_inv)).collect();
        let np: Vec<Coef> = np.iter().map(|c| ring.mul(c, &c0_inv)).collect();
        Frac { num: from_dense(setup, nv - dv, &np), den: from_dense(setup, 0, &dp) }
    }

    pub fn setup(&self) -> Setup {
        self.num.setup()
    }

    pub fn num(&self) -> &NovikovElem {
        &self.num
    }

    pub fn den(&self) -> &NovikovElem {
        &self.den
    }

    /// The underlying finite sum, when the denominator is trivial.
    pub fn as_elem(&self) -> Option<&NovikovElem> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn valuation(&self) -> Option<i64> {
        self.num.valuation()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den.is_one() && o.den.is_one() {
            return Self::from_elem(self.num.add(&o.num));
        }
        if self.den == o.den {
            return Self::normalize(self.num.add(&o.num), self.den.clone());
        }
        Self::normalize(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Self {
        Frac { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.den.is_one() && o.den.is_one() {
            return Self::from_elem(self.num.mul(&o.num));
        }
        Self::normalize(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Result<Self, NovikovError> {
        if self.is_zero() {
            return Err(NovikovError::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self, NovikovError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        Frac { num: self.num.scale_int(k), den: self.den.clone() }.renorm_if_zero()
    }

    fn renorm_if_zero(self) -> Self {
        if self.num.is_zero() {
            Self::zero(self.setup())
        } else {
            self
        }
    }

    pub fn shift(&self, s: i64) -> Self {
        Frac { num: self.num.shift(s), den: self.den.clone() }
    }

    /// Quotient rule.
    pub fn dq(&self) -> Result<Self, NovikovError> {
        if self.den.is_one() {
            return Ok(Self::from_elem(self.num.dq()?));
        }
        let top = self.num.dq()?.mul(&self.den).sub(&self.num.mul(&self.den.dq()?));
        Ok(Self::normalize(top, self.den.mul(&self.den)))
    }

    /// Laurent expansion, keeping terms of index `< bound`.
    pub fn expand_below(&self, bound: i64) -> Result<NovikovElem, NovikovError> {
        if self.den.is_one() {
            return Ok(self.num.truncate_below(bound));
        }
        let Some(v) = self.num.valuation() else {
            return Ok(NovikovElem::zero(self.setup()));
        };
        let order = (bound - v).max(0) as usize;
        let inv = self.den.invert_truncated(order)?;
        Ok(self.num.mul(&inv).truncate_below(bound))
    }

    /// Coefficient of `q^{index·g}` in the Laurent expansion.
    pub fn coefficient(&self, index: i64) -> Result<Coef, NovikovError> {
        Ok(self.expand_below(index + 1)?.coefficient(index))
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::ring::ExponentLattice;

    fn qq() -> Setup {
        Setup::integral(CoefficientRing::Rationals)
    }

    fn el(s: Setup, t: &[(i64, i64)]) -> NovikovElem {
        NovikovElem::from_terms(s, t.iter().map(|&(n, c)| (n, s.ring.from_i64(c))))
    }

    #[test]
    fn lowest_terms() {
        // (q^2 − 1)/(q − 1) = q + 1
        let f = Frac::new(el(qq(), &[(0, -1), (2, 1)]), el(qq(), &[(0, -1), (1, 1)])).unwrap();
        assert_eq!(f.as_elem(), Some(&el(qq(), &[(0, 1), (1, 1)])));
        // monomial denominators are absorbed
        let g = Frac::new(el(qq(), &[(0, 3)]), el(qq(), &[(2, 6)])).unwrap();
        assert_eq!(g.to_string(), "1/2*q^(-2)");
    }

    #[test]
    fn field_axioms_on_samples() {
        let a = Frac::new(el(qq(), &[(0, 1)]), el(qq(), &[(0, 1), (1, 1)])).unwrap();
        let b = Frac::new(el(qq(), &[(1, 2)]), el(qq(), &[(0, 1), (1, -1)])).unwrap();
        let s = a.add(&b);
        assert_eq!(s.sub(&b), a);
        assert!(a.mul(&a.inv().unwrap()).is_one());
        assert_eq!(a.mul(&b).div(&b).unwrap(), a);
    }

    #[test]
    fn quotient_rule() {
        // d/dq 1/(1+q) = −1/(1+q)^2
        let a = Frac::new(el(qq(), &[(0, 1)]), el(qq(), &[(0, 1), (1, 1)])).unwrap();
        let expected = Frac::new(el(qq(), &[(0, -1)]), el(qq(), &[(0, 1), (1, 2), (2, 1)])).unwrap();
        assert_eq!(a.dq().unwrap(), expected);
    }

    #[test]
    fn expansion_matches_series() {
        let a = Frac::new(el(qq(), &[(1, 1)]), el(qq(), &[(0, 1), (1, -1)])).unwrap();
        assert_eq!(a.expand_below(4).unwrap(), el(qq(), &[(1, 1), (2, 1), (3, 1)]));
    }

    #[test]
    fn half_lattice() {
        let s = Setup::new(ExponentLattice::new(2).unwrap(), CoefficientRing::PrimeField(7)).unwrap();
        let a = Frac::new(el(s, &[(1, 1)]), el(s, &[(0, 1), (1, 1)])).unwrap();
        assert_eq!(a.mul(&a.inv().unwrap()), Frac::one(s));
    }
}
