use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NovikovError;

/// Cyclic exponent group `(1/denom)·ℤ ⊂ ℚ`.
///
/// Requiring `1` to be a multiple of the generator forces the generator to be
/// `1/k` for a positive integer `k`, so only `k` is stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentLattice {
    denom: u32,
}

impl ExponentLattice {
    pub const INTEGERS: ExponentLattice = ExponentLattice { denom: 1 };

    pub fn new(denom: u32) -> Result<Self, NovikovError> {
        if denom == 0 {
            return Err(NovikovError::InvalidLattice("generator must be positive".into()));
        }
        Ok(ExponentLattice { denom })
    }

    /// Builds the lattice from its generator `g = num/den`.
    pub fn from_generator(num: i64, den: i64) -> Result<Self, NovikovError> {
        if den == 0 || num == 0 || (num < 0) != (den < 0) {
            return Err(NovikovError::InvalidLattice(format!("generator {num}/{den} is not positive")));
        }
        let (num, den) = (num.abs(), den.abs());
        if den % num != 0 {
            return Err(NovikovError::InvalidLattice(format!(
                "1 is not an integer multiple of the generator {num}/{den}"
            )));
        }
        let k = den / num;
        let denom = u32::try_from(k)
            .map_err(|_| NovikovError::InvalidLattice(format!("generator 1/{k} too fine")))?;
        Ok(ExponentLattice { denom })
    }

    /// Number of lattice steps making up the exponent `1`.
    pub fn denom(&self) -> i64 {
        self.denom as i64
    }

    pub fn exponent(&self, index: i64) -> BigRational {
        BigRational::new(BigInt::from(index), BigInt::from(self.denom))
    }

    /// Lattice index of a rational exponent, if it lies in the lattice.
    pub fn index_of(&self, exponent: &BigRational) -> Option<i64> {
        let scaled = exponent * BigRational::from_integer(BigInt::from(self.denom));
        if scaled.is_integer() {
            scaled.to_integer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for ExponentLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            write!(f, "1")
        } else {
            write!(f, "1/{}", self.denom)
        }
    }
}

/// Coefficient ring `R` of the Novikov ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    PrimeField(u64),
    IntegersMod(u64),
}

/// A coefficient value. Modular rings store the residue in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coef {
    Q(BigRational),
    M(u64),
}

const MAX_MODULUS: u64 = 1 << 32;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl CoefficientRing {
    pub fn validate(&self) -> Result<(), NovikovError> {
        match *self {
            CoefficientRing::PrimeField(p) if !is_prime(p) || p >= MAX_MODULUS => {
                Err(NovikovError::InvalidRing(format!("{p} is not a supported prime")))
            }
            CoefficientRing::IntegersMod(m) if !(2..MAX_MODULUS).contains(&m) => {
                Err(NovikovError::InvalidRing(format!("modulus {m} out of range")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoefficientRing::Rationals | CoefficientRing::PrimeField(_))
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            CoefficientRing::Integers | CoefficientRing::Rationals => 0,
            CoefficientRing::PrimeField(m) | CoefficientRing::IntegersMod(m) => m,
        }
    }

    fn modulus(&self) -> Option<u64> {
        match *self {
            CoefficientRing::PrimeField(m) | CoefficientRing::IntegersMod(m) => Some(m),
            _ => None,
        }
    }

    pub fn zero(&self) -> Coef {
        match self.modulus() {
            Some(_) => Coef::M(0),
            None => Coef::Q(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Coef {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coef {
        match self.modulus() {
            Some(m) => Coef::M((v as i128).rem_euclid(m as i128) as u64),
            None => Coef::Q(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// Maps a rational number into the ring, if it has an image there.
    ///
    /// Over `ℤ/m` a rational whose denominator is a unit mod `m` is sent to
    /// the corresponding residue.
    pub fn from_rational(&self, r: &BigRational) -> Option<Coef> {
        match *self {
            CoefficientRing::Rationals => Some(Coef::Q(r.clone())),
            CoefficientRing::Integers => r.is_integer().then(|| Coef::Q(r.clone())),
            CoefficientRing::PrimeField(m) | CoefficientRing::IntegersMod(m) => {
                let mb = BigInt::from(m);
                let num = r.numer().mod_floor(&mb).to_u64()?;
                let den = r.denom().mod_floor(&mb).to_u64()?;
                let inv = mod_inverse(den, m)?;
                Some(Coef::M(((num as u128 * inv as u128) % m as u128) as u64))
            }
        }
    }

    pub fn is_zero(&self, a: &Coef) -> bool {
        match a {
            Coef::Q(r) => r.is_zero(),
            Coef::M(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Coef) -> bool {
        match a {
            Coef::Q(r) => r.is_one(),
            Coef::M(v) => *v == 1,
        }
    }

    pub fn add(&self, a: &Coef, b: &Coef) -> Coef {
        match (a, b) {
            (Coef::Q(x), Coef::Q(y)) => Coef::Q(x + y),
            (Coef::M(x), Coef::M(y)) => {
                let m = self.modulus().expect("modular coefficient in a modular ring");
                Coef::M(((*x as u128 + *y as u128) % m as u128) as u64)
            }
            _ => panic!("coefficient kinds mixed"),
        }
    }

    pub fn neg(&self, a: &Coef) -> Coef {
        match a {
            Coef::Q(x) => Coef::Q(-x),
            Coef::M(x) => {
                let m = self.modulus().expect("modular coefficient in a modular ring");
                Coef::M(if *x == 0 { 0 } else { m - x })
            }
        }
    }

    pub fn sub(&self, a: &Coef, b: &Coef) -> Coef {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coef, b: &Coef) -> Coef {
        match (a, b) {
            (Coef::Q(x), Coef::Q(y)) => Coef::Q(x * y),
            (Coef::M(x), Coef::M(y)) => {
                let m = self.modulus().expect("modular coefficient in a modular ring");
                Coef::M(((*x as u128 * *y as u128) % m as u128) as u64)
            }
            _ => panic!("coefficient kinds mixed"),
        }
    }

    /// Multiplicative inverse, when it exists in the ring.
    pub fn inv(&self, a: &Coef) -> Option<Coef> {
        match (self, a) {
            (CoefficientRing::Rationals, Coef::Q(x)) if !x.is_zero() => Some(Coef::Q(x.recip())),
            (CoefficientRing::Integers, Coef::Q(x)) if x.abs().is_one() => Some(Coef::Q(x.clone())),
            (_, Coef::M(x)) => mod_inverse(*x, self.modulus()?).map(Coef::M),
            _ => None,
        }
    }

    /// Multiplies by a rational scalar, failing when the product leaves the ring.
    pub fn mul_rational(&self, a: &Coef, r: &BigRational) -> Option<Coef> {
        match a {
            Coef::Q(x) => {
                let p = x * r;
                self.from_rational(&p)
            }
            Coef::M(_) => Some(self.mul(a, &self.from_rational(r)?)),
        }
    }

    /// Rational lift of a coefficient (the residue itself for modular rings).
    pub fn to_rational(&self, a: &Coef) -> BigRational {
        match a {
            Coef::Q(x) => x.clone(),
            Coef::M(v) => BigRational::from_integer(BigInt::from(*v)),
        }
    }

    /// Whether the printed form of the coefficient starts with a minus sign.
    pub fn is_negative(&self, a: &Coef) -> bool {
        matches!(a, Coef::Q(x) if x.is_negative())
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integers => write!(f, "Z"),
            CoefficientRing::Rationals => write!(f, "Q"),
            CoefficientRing::PrimeField(p) => write!(f, "F{p}"),
            CoefficientRing::IntegersMod(m) => write!(f, "Z/{m}"),
        }
    }
}

impl std::str::FromStr for CoefficientRing {
    type Err = NovikovError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let ring = match s {
            "Z" | "ZZ" | "integers" => CoefficientRing::Integers,
            "Q" | "QQ" | "rationals" => CoefficientRing::Rationals,
            _ => {
                if let Some(p) = s.strip_prefix('F') {
                    CoefficientRing::PrimeField(
                        p.parse().map_err(|_| NovikovError::InvalidRing(s.to_string()))?,
                    )
                } else if let Some(m) = s.strip_prefix("Z/") {
                    CoefficientRing::IntegersMod(
                        m.parse().map_err(|_| NovikovError::InvalidRing(s.to_string()))?,
                    )
                } else {
                    return Err(NovikovError::InvalidRing(s.to_string()));
                }
            }
        };
        ring.validate()?;
        Ok(ring)
    }
}

/// Lattice plus coefficient ring: everything needed to build scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Setup {
    pub lattice: ExponentLattice,
    pub ring: CoefficientRing,
}

impl Setup {
    pub fn new(lattice: ExponentLattice, ring: CoefficientRing) -> Result<Self, NovikovError> {
        ring.validate()?;
        Ok(Setup { lattice, ring })
    }

    pub fn integral(ring: CoefficientRing) -> Self {
        Setup { lattice: ExponentLattice::INTEGERS, ring }
    }

    pub fn check_same(&self, other: &Setup) -> Result<(), NovikovError> {
        if self == other {
            Ok(())
        } else {
            Err(NovikovError::Mismatch { left: *self, right: *other })
        }
    }
}

impl fmt::Display for Setup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with exponents in ({})Z", self.ring, self.lattice)
    }
}
