use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::novikov::Setup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingKind {
    IntGraded,
    Mod2,
    /// `ℤ/2m`-grading.
    Mod2m(u32),
}

impl GradingKind {
    /// Order of the grading group (0 for `ℤ`).
    pub fn modulus(&self) -> i64 {
        match *self {
            GradingKind::IntGraded => 0,
            GradingKind::Mod2 => 2,
            GradingKind::Mod2m(m) => 2 * m as i64,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            GradingKind::Mod2m(0) => Err("Mod2m needs m ≥ 1".into()),
            _ => Ok(()),
        }
    }
}

/// A basis generator with its integer index `i(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub name: String,
    pub index: i64,
}

impl GeneratorInfo {
    pub fn new(name: impl Into<String>, index: i64) -> Self {
        GeneratorInfo { name: name.into(), index }
    }

    /// Image of the index in the grading group.
    pub fn displayed_degree(&self, kind: GradingKind) -> i64 {
        reduce(self.index, kind.modulus())
    }
}

pub(crate) fn reduce(x: i64, modulus: i64) -> i64 {
    if modulus == 0 {
        x
    } else {
        x.rem_euclid(modulus)
    }
}

/// The grading that linear algebra over `Λ` can see.
///
/// With `|q| = 2` the scalars themselves carry degrees `2·a` for exponents
/// `a ∈ (1/k)ℤ`, so only the quotient by those degrees survives: for `k = 1`
/// this is the parity, for finer lattices nothing is left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeGroup {
    pub modulus: i64,
}

impl DegreeGroup {
    pub fn new(kind: GradingKind, setup: Setup, q_degree_two: bool) -> Self {
        let m = kind.modulus();
        let modulus = if !q_degree_two {
            m
        } else if setup.lattice.denom() == 1 {
            m.gcd(&2)
        } else {
            1
        };
        DegreeGroup { modulus }
    }

    pub fn reduce(&self, x: i64) -> i64 {
        reduce(x, self.modulus)
    }

    pub fn degree_of(&self, g: &GeneratorInfo) -> i64 {
        self.reduce(g.index)
    }

    /// Sorted distinct degrees carried by a basis.
    pub fn degrees(&self, basis: &[GeneratorInfo]) -> Vec<i64> {
        let mut v: Vec<i64> = basis.iter().map(|g| self.degree_of(g)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Indices of the generators in a given degree.
    pub fn generators_in(&self, basis: &[GeneratorInfo], degree: i64) -> Vec<usize> {
        let d = self.reduce(degree);
        (0..basis.len()).filter(|&i| self.degree_of(&basis[i]) == d).collect()
    }
}

/// Degree defect of a monomial `q^E` in the entry `(target, source)` of an
/// operator of degree `s`: zero exactly when `i(t) − i(s) + 2E = s`.
pub fn homogeneity_defect(target: &GeneratorInfo, source: &GeneratorInfo, exponent: &BigRational, degree: i64) -> BigRational {
    let lhs = BigRational::from_integer((target.index - source.index).into()) + exponent * BigRational::from_integer(2.into());
    lhs - BigRational::from_integer(degree.into())
}

pub fn is_homogeneous(target: &GeneratorInfo, source: &GeneratorInfo, exponent: &BigRational, degree: i64) -> bool {
    homogeneity_defect(target, source, exponent, degree).is_zero()
}
