use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ring::{Coef, Setup};
use super::NovikovError;

/// Finite sum `Σ rᵢ q^{nᵢ·g}` in canonical form: indices strictly increasing,
/// no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NovikovElem {
    setup: Setup,
    terms: Vec<(i64, Coef)>,
}

impl NovikovElem {
    pub fn zero(setup: Setup) -> Self {
        NovikovElem { setup, terms: Vec::new() }
    }

    pub fn one(setup: Setup) -> Self {
        Self::constant(setup, 1)
    }

    pub fn constant(setup: Setup, c: i64) -> Self {
        Self::monomial(setup, 0, setup.ring.from_i64(c))
    }

    /// `c·q^{index·g}`.
    pub fn monomial(setup: Setup, index: i64, c: Coef) -> Self {
        if setup.ring.is_zero(&c) {
            Self::zero(setup)
        } else {
            NovikovElem { setup, terms: vec![(index, c)] }
        }
    }

    /// `q^{index·g}`.
    pub fn q_power(setup: Setup, index: i64) -> Self {
        Self::monomial(setup, index, setup.ring.one())
    }

    /// Builds an element from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(setup: Setup, terms: impl IntoIterator<Item = (i64, Coef)>) -> Self {
        let mut v: Vec<(i64, Coef)> = terms.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let ring = setup.ring;
        let mut out: Vec<(i64, Coef)> = Vec::with_capacity(v.len());
        for (n, c) in v {
            match out.last_mut() {
                Some((m, acc)) if *m == n => *acc = ring.add(acc, &c),
                _ => out.push((n, c)),
            }
        }
        out.retain(|(_, c)| !ring.is_zero(c));
        NovikovElem { setup, terms: out }
    }

    pub fn setup(&self) -> Setup {
        self.setup
    }

    pub fn terms(&self) -> &[(i64, Coef)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.setup.ring.is_one(&self.terms[0].1)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Lowest lattice index present (the q-valuation in units of `g`).
    pub fn valuation(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn top_index(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn leading(&self) -> Option<&(i64, Coef)> {
        self.terms.first()
    }

    pub fn coefficient(&self, index: i64) -> Coef {
        match self.terms.binary_search_by_key(&index, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.setup.ring.zero(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, NovikovError> {
        self.setup.check_same(&other.setup)?;
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, NovikovError> {
        self.setup.check_same(&other.setup)?;
        Ok(self.mul(other))
    }

    /// Sum; setups are assumed to agree (checked in debug builds).
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.setup, other.setup);
        let ring = self.setup.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            if a.0 < b.0 {
                out.push(a.clone());
                i += 1;
            } else if b.0 < a.0 {
                out.push(b.clone());
                j += 1;
            } else {
                let c = ring.add(&a.1, &b.1);
                if !ring.is_zero(&c) {
                    out.push((a.0, c));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        NovikovElem { setup: self.setup, terms: out }
    }

    pub fn neg(&self) -> Self {
        let ring = self.setup.ring;
        NovikovElem {
            setup: self.setup,
            terms: self.terms.iter().map(|(n, c)| (*n, ring.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.setup, other.setup);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.setup);
        }
        let ring = self.setup.ring;
        if other.terms.len() == 1 {
            let (m, ref b) = other.terms[0];
            let terms = self
                .terms
                .iter()
                .map(|(n, a)| (n + m, ring.mul(a, b)))
                .filter(|(_, c)| !ring.is_zero(c))
                .collect();
            return NovikovElem { setup: self.setup, terms };
        }
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (n, a) in &self.terms {
            for (m, b) in &other.terms {
                acc.push((n + m, ring.mul(a, b)));
            }
        }
        Self::from_terms(self.setup, acc)
    }

    pub fn scale(&self, c: &Coef) -> Self {
        let ring = self.setup.ring;
        let terms = self
            .terms
            .iter()
            .map(|(n, a)| (*n, ring.mul(a, c)))
            .filter(|(_, c)| !ring.is_zero(c))
            .collect();
        NovikovElem { setup: self.setup, terms }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&self.setup.ring.from_i64(k))
    }

    /// Multiplies by `q^{shift·g}`.
    pub fn shift(&self, shift: i64) -> Self {
        NovikovElem {
            setup: self.setup,
            terms: self.terms.iter().map(|(n, c)| (n + shift, c.clone())).collect(),
        }
    }

    /// `∂_q`: `Σ rᵢ q^{aᵢ} ↦ Σ rᵢ aᵢ q^{aᵢ−1}`.
    pub fn dq(&self) -> Result<Self, NovikovError> {
        let ring = self.setup.ring;
        let lat = self.setup.lattice;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (n, c) in &self.terms {
            if *n == 0 {
                continue;
            }
            let a = lat.exponent(*n);
            let nc = ring.mul_rational(c, &a).ok_or_else(|| NovikovError::DerivativeLeavesRing {
                exponent: a.to_string(),
                coefficient: ring.to_rational(c).to_string(),
            })?;
            if !ring.is_zero(&nc) {
                terms.push((n - lat.denom(), nc));
            }
        }
        Ok(NovikovElem { setup: self.setup, terms })
    }

    /// `q·∂_q`, which keeps exponents in place.
    pub fn q_dq(&self) -> Result<Self, NovikovError> {
        Ok(self.dq()?.shift(self.setup.lattice.denom()))
    }

    /// Inverse modulo terms of exponent `≥ −v + q_order·g`, where `v` is the
    /// exponent of the leading term.
    pub fn invert_truncated(&self, q_order: usize) -> Result<Self, NovikovError> {
        let ring = self.setup.ring;
        if !ring.is_field() {
            return Err(NovikovError::NonField);
        }
        let (v, c0) = self.leading().ok_or(NovikovError::DivisionByZero)?.clone();
        let c0_inv = ring.inv(&c0).ok_or(NovikovError::DivisionByZero)?;
        // write self = c0 q^v (1 + t), t having positive relative indices
        let mut out: Vec<(i64, Coef)> = Vec::with_capacity(q_order);
        let rel: Vec<(i64, Coef)> =
            self.terms[1..].iter().map(|(n, c)| (n - v, ring.mul(c, &c0_inv))).collect();
        // b_k for relative index k: b_0 = 1, b_k = −Σ_{j≥1} t_j b_{k−j}
        let mut b: Vec<Coef> = vec![ring.zero(); q_order];
        for k in 0..q_order {
            let mut acc = if k == 0 { ring.one() } else { ring.zero() };
            for (j, t) in &rel {
                let j = *j as usize;
                if j > k {
                    break;
                }
                acc = ring.sub(&acc, &ring.mul(t, &b[k - j]));
            }
            b[k] = acc;
        }
        for (k, bk) in b.into_iter().enumerate() {
            if !ring.is_zero(&bk) {
                out.push((k as i64 - v, ring.mul(&bk, &c0_inv)));
            }
        }
        Ok(NovikovElem { setup: self.setup, terms: out })
    }

    /// Drops all terms with index `≥ bound`.
    pub fn truncate_below(&self, bound: i64) -> Self {
        NovikovElem {
            setup: self.setup,
            terms: self.terms.iter().filter(|(n, _)| *n < bound).cloned().collect(),
        }
    }

    /// Sum of coefficients (evaluation at `q = 1`).
    pub fn at_q_one(&self) -> Coef {
        let ring = self.setup.ring;
        self.terms.iter().fold(ring.zero(), |acc, (_, c)| ring.add(&acc, c))
    }

    /// Reinterprets integer coefficients in another ring (reduction mod m).
    pub fn change_ring(&self, setup: Setup) -> Result<Self, NovikovError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (n, c) in &self.terms {
            let r = self.setup.ring.to_rational(c);
            let nc = setup
                .ring
                .from_rational(&r)
                .ok_or_else(|| NovikovError::Parse(format!("coefficient {r} has no image in {}", setup.ring)))?;
            let idx = setup
                .lattice
                .index_of(&self.setup.lattice.exponent(*n))
                .ok_or_else(|| NovikovError::Parse("exponent outside the target lattice".into()))?;
            terms.push((idx, nc));
        }
        Ok(Self::from_terms(setup, terms))
    }
}

fn fmt_exponent(f: &mut fmt::Formatter<'_>, e: &BigRational) -> fmt::Result {
    if e.is_integer() && !e.is_negative() {
        if !e.is_one() {
            write!(f, "^{}", e.numer())?;
        }
        Ok(())
    } else if e.is_integer() {
        write!(f, "^({})", e.numer())
    } else {
        write!(f, "^({}/{})", e.numer(), e.denom())
    }
}

impl fmt::Display for NovikovElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let ring = self.setup.ring;
        for (i, (n, c)) in self.terms.iter().enumerate() {
            let r = ring.to_rational(c);
            let neg = r.is_negative();
            let mag = r.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let e = self.setup.lattice.exponent(*n);
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "q")?;
            fmt_exponent(f, &e)?;
        }
        Ok(())
    }
}

/// Rational number `num/den` as a `BigRational`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
