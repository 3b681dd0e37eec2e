use std::fmt;

use super::elem::NovikovElem;
use super::frac::Frac;
use super::ring::Setup;
use super::NovikovError;

/// Coefficient scalars for operator matrices: finite Novikov sums, or
/// elements of the Novikov fraction field when division is needed.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn setup(&self) -> Setup;
    fn zero(setup: Setup) -> Self;
    fn one(setup: Setup) -> Self;
    fn from_elem(e: NovikovElem) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn dq(&self) -> Result<Self, NovikovError>;
    fn scale_int(&self, k: i64) -> Self;
    /// Multiplication by `q^{s·g}`.
    fn shift(&self, s: i64) -> Self;
    /// Lowest index in the Laurent expansion.
    fn valuation(&self) -> Option<i64>;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

impl Scalar for NovikovElem {
    fn setup(&self) -> Setup {
        NovikovElem::setup(self)
    }
    fn zero(setup: Setup) -> Self {
        NovikovElem::zero(setup)
    }
    fn one(setup: Setup) -> Self {
        NovikovElem::one(setup)
    }
    fn from_elem(e: NovikovElem) -> Self {
        e
    }
    fn is_zero(&self) -> bool {
        NovikovElem::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        NovikovElem::add(self, o)
    }
    fn neg(&self) -> Self {
        NovikovElem::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        NovikovElem::mul(self, o)
    }
    fn dq(&self) -> Result<Self, NovikovError> {
        NovikovElem::dq(self)
    }
    fn scale_int(&self, k: i64) -> Self {
        NovikovElem::scale_int(self, k)
    }
    fn shift(&self, s: i64) -> Self {
        NovikovElem::shift(self, s)
    }
    fn valuation(&self) -> Option<i64> {
        NovikovElem::valuation(self)
    }
}

impl Scalar for Frac {
    fn setup(&self) -> Setup {
        Frac::setup(self)
    }
    fn zero(setup: Setup) -> Self {
        Frac::zero(setup)
    }
    fn one(setup: Setup) -> Self {
        Frac::one(setup)
    }
    fn from_elem(e: NovikovElem) -> Self {
        Frac::from_elem(e)
    }
    fn is_zero(&self) -> bool {
        Frac::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Frac::add(self, o)
    }
    fn neg(&self) -> Self {
        Frac::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        Frac::mul(self, o)
    }
    fn dq(&self) -> Result<Self, NovikovError> {
        Frac::dq(self)
    }
    fn scale_int(&self, k: i64) -> Self {
        Frac::scale_int(self, k)
    }
    fn shift(&self, s: i64) -> Self {
        Frac::shift(self, s)
    }
    fn valuation(&self) -> Option<i64> {
        Frac::valuation(self)
    }
    fn sub(&self, o: &Self) -> Self {
        Frac::sub(self, o)
    }
}

/// Power series in `u` truncated at order `N`.
///
/// `valid` is the order up to which the stored coefficients are guaranteed:
/// coefficients at orders `valid..N` are placeholders (zero) whose true
/// value was lost, e.g. by `∂_u`.
#[derive(Clone, Debug, PartialEq)]
pub struct USeries<S: Scalar> {
    coeffs: Vec<S>,
    valid: usize,
}

impl<S: Scalar> USeries<S> {
    pub fn zero(setup: Setup, order: usize) -> Self {
        USeries { coeffs: vec![S::zero(setup); order], valid: order }
    }

    /// The constant series `c` (truncated at `order`).
    pub fn constant(c: S, order: usize) -> Self {
        Self::monomial(c, 0, order)
    }

    /// `c·u^k`.
    pub fn monomial(c: S, k: usize, order: usize) -> Self {
        let mut s = Self::zero(c.setup(), order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Series with the given leading coefficients; extra entries beyond
    /// `order` are dropped.
    pub fn from_coeffs(setup: Setup, coeffs: Vec<S>, order: usize) -> Self {
        let mut s = Self::zero(setup, order);
        for (k, c) in coeffs.into_iter().enumerate().take(order) {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn valid_order(&self) -> usize {
        self.valid
    }

    /// Whether every stored coefficient is guaranteed.
    pub fn is_complete(&self) -> bool {
        self.valid == self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &S {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest order with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_order(&self, o: &Self) -> Result<(), NovikovError> {
        if self.order() == o.order() {
            Ok(())
        } else {
            Err(NovikovError::OrderMismatch(self.order(), o.order()))
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, NovikovError> {
        self.check_order(o)?;
        Ok(self.add(o))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, NovikovError> {
        self.check_order(o)?;
        Ok(self.mul(o))
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.order(), o.order());
        USeries {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(),
            valid: self.valid.min(o.valid),
        }
    }

    pub fn neg(&self) -> Self {
        USeries { coeffs: self.coeffs.iter().map(|a| a.neg()).collect(), valid: self.valid }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Truncated product.
    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.order(), o.order());
        let n = self.order();
        let setup = self.setup_hint(o);
        let mut out = vec![S::zero(setup); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        // an unknown coefficient of one factor at order v only pollutes orders
        // ≥ v + (valuation of the other factor)
        let va = self.valid + o.valuation().unwrap_or(n);
        let vb = o.valid + self.valuation().unwrap_or(n);
        USeries { coeffs: out, valid: va.min(vb).min(n) }
    }

    fn setup_hint(&self, o: &Self) -> Setup {
        self.coeffs.first().or(o.coeffs.first()).map(|c| c.setup()).expect("nonempty series")
    }

    /// Multiplies every coefficient by a scalar.
    pub fn scale(&self, c: &S) -> Self {
        USeries { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(), valid: self.valid }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        USeries { coeffs: self.coeffs.iter().map(|a| a.scale_int(k)).collect(), valid: self.valid }
    }

    /// Multiplies by `u^k`.
    pub fn shift_u(&self, k: usize) -> Self {
        let n = self.order();
        if n == 0 {
            return self.clone();
        }
        let setup = self.coeffs[0].setup();
        let mut out = vec![S::zero(setup); n];
        for i in 0..n.saturating_sub(k) {
            out[i + k] = self.coeffs[i].clone();
        }
        USeries { coeffs: out, valid: (self.valid + k).min(n) }
    }

    /// `∂_u`; the top order becomes unknown.
    pub fn du(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return self.clone();
        }
        let setup = self.coeffs[0].setup();
        let mut out = vec![S::zero(setup); n];
        for k in 0..n - 1 {
            out[k] = self.coeffs[k + 1].scale_int(k as i64 + 1);
        }
        USeries { coeffs: out, valid: self.valid.saturating_sub(1) }
    }

    /// `u·∂_u`, which keeps every known order known.
    pub fn u_du(&self) -> Self {
        USeries {
            coeffs: self.coeffs.iter().enumerate().map(|(k, c)| c.scale_int(k as i64)).collect(),
            valid: self.valid,
        }
    }

    /// Coefficientwise `∂_q`.
    pub fn udq(&self) -> Result<Self, NovikovError> {
        let coeffs = self.coeffs.iter().map(|c| c.dq()).collect::<Result<Vec<_>, _>>()?;
        Ok(USeries { coeffs, valid: self.valid })
    }

    /// Restricts to a lower truncation order.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        USeries { coeffs: self.coeffs[..order].to_vec(), valid: self.valid.min(order) }
    }

    pub fn with_valid(mut self, valid: usize) -> Self {
        self.valid = valid.min(self.coeffs.len());
        self
    }

    /// Agreement on the orders both sides guarantee.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let n = self.valid.min(o.valid).min(self.order()).min(o.order());
        self.coeffs[..n] == o.coeffs[..n]
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> USeries<T> {
        USeries { coeffs: self.coeffs.iter().map(f).collect(), valid: self.valid }
    }
}

impl<S: Scalar> fmt::Display for USeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*u")?,
                _ => write!(f, "({c})*u^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.is_complete() {
            write!(f, " + O(u^{})", self.valid)?;
        }
        Ok(())
    }
}
