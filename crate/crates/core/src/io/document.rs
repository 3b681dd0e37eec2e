//! The JSON input document and its conversion to library objects.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::InputError;
use crate::cartan::{d_degree, iota_degree, lambda_degree, EquivariantDifferential};
use crate::complexes::{EqOperator, GeneratorInfo, GradedComplex, GradingKind, OperatorMatrix};
use crate::finite_analog::Z2CartanData;
use crate::novikov::{parse_elem, CoefficientRing, ExponentLattice, NovikovElem, Setup};
use crate::quantum::QuantumRing;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchDocument {
    pub schema_version: u32,
    pub setup: SetupDoc,
    /// Truncation order `N` in `u` (overridden by `--order`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexDoc>,
    /// `d_1, d_2, …`; `d_0` is the differential of `complex`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_family: Option<Vec<Vec<EntryDoc>>>,
    /// `λ_0, λ_1, …`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_family: Option<Vec<Vec<EntryDoc>>>,
    /// `ι_0, ι_1, …`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iota_family: Option<Vec<Vec<EntryDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum_ring: Option<QuantumDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z2_data: Option<Z2Doc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupDoc {
    /// `Z`, `Q`, `F<p>` or `Z/<m>`.
    pub ring: String,
    /// `k` for exponents in `(1/k)ℤ`.
    #[serde(default = "one")]
    pub exponent_denominator: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub name: String,
    pub index: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub row: String,
    pub col: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub grading: GradingKind,
    #[serde(default)]
    pub q_degree_two: bool,
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub differential: Vec<EntryDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub left: String,
    pub right: String,
    /// Coefficient of each class in the product; absent classes are zero.
    pub result: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumDoc {
    /// Classes with their cohomological degrees.
    pub classes: Vec<GeneratorDoc>,
    pub unit: String,
    /// The distinguished class; `c₁` when `q_degree_two` is set.
    pub omega: BTreeMap<String, String>,
    #[serde(default)]
    pub q_degree_two: bool,
    pub products: Vec<ProductDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Z2Doc {
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub d: Vec<EntryDoc>,
    #[serde(default)]
    pub iota: Vec<EntryDoc>,
    #[serde(default)]
    pub lambda: Vec<EntryDoc>,
    #[serde(default)]
    pub sigma: Vec<EntryDoc>,
    #[serde(default)]
    pub big_sigma: Vec<EntryDoc>,
    #[serde(default)]
    pub xi: Vec<EntryDoc>,
    #[serde(default)]
    pub big_xi: Vec<EntryDoc>,
}

/// A chain map from `complex` (the `C₊` side) to `minus`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    pub minus: ComplexDoc,
    pub map: Vec<EntryDoc>,
}

fn bad(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

fn generators(gs: &[GeneratorDoc], what: &str) -> Result<Vec<GeneratorInfo>, InputError> {
    let mut seen = std::collections::BTreeSet::new();
    for g in gs {
        if !seen.insert(g.name.as_str()) {
            return Err(bad(format!("{what}: duplicate generator name '{}'", g.name)));
        }
    }
    Ok(gs.iter().map(|g| GeneratorInfo::new(g.name.clone(), g.index)).collect())
}

fn position(basis: &[GeneratorInfo], name: &str, what: &str) -> Result<usize, InputError> {
    basis.iter().position(|g| g.name == name).ok_or_else(|| bad(format!("{what}: unknown generator '{name}'")))
}

fn elem(src: &str, setup: Setup, what: &str) -> Result<NovikovElem, InputError> {
    parse_elem(src, setup).map_err(|e| bad(format!("{what}: {e}")))
}

fn matrix(
    entries: &[EntryDoc],
    rows: &[GeneratorInfo],
    cols: &[GeneratorInfo],
    setup: Setup,
    degree: i64,
    what: &str,
) -> Result<OperatorMatrix<NovikovElem>, InputError> {
    let mut out = Vec::new();
    for e in entries {
        let r = position(rows, &e.row, what)?;
        let c = position(cols, &e.col, what)?;
        out.push(((r, c), elem(&e.value, setup, what)?));
    }
    Ok(OperatorMatrix::from_entries(setup, rows.len(), cols.len(), degree, out))
}

impl WorkbenchDocument {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let doc: WorkbenchDocument = serde_json::from_str(text).map_err(|e| bad(format!("document: {e}")))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(bad(format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", doc.schema_version)));
        }
        doc.check()?;
        Ok(doc)
    }

    /// Builds every block once so that malformed input is caught before any
    /// computation.
    fn check(&self) -> Result<(), InputError> {
        self.setup()?;
        if self.complex.is_some() {
            self.complex()?;
        }
        if self.d_family.is_some() || self.lambda_family.is_some() || self.iota_family.is_some() {
            self.equivariant(self.truncation.unwrap_or(1).max(1))?;
            self.lambda_family()?;
            self.iota_family()?;
        }
        if self.quantum_ring.is_some() {
            self.quantum_ring()?;
        }
        if self.z2_data.is_some() {
            self.z2_data()?;
        }
        if self.cone.is_some() {
            self.cone()?;
        }
        Ok(())
    }

    pub fn setup(&self) -> Result<Setup, InputError> {
        let ring: CoefficientRing = self.setup.ring.parse().map_err(|e| bad(format!("setup: {e}")))?;
        let lattice = ExponentLattice::new(self.setup.exponent_denominator).map_err(|e| bad(format!("setup: {e}")))?;
        Setup::new(lattice, ring).map_err(|e| bad(format!("setup: {e}")))
    }

    fn build_complex(&self, c: &ComplexDoc, what: &str) -> Result<GradedComplex, InputError> {
        let setup = self.setup()?;
        c.grading.validate().map_err(|e| bad(format!("{what}: {e}")))?;
        let basis = generators(&c.generators, what)?;
        let d = matrix(&c.differential, &basis, &basis, setup, 1, what)?;
        Ok(GradedComplex::new(c.grading, basis, d, setup, c.q_degree_two))
    }

    pub fn complex(&self) -> Result<GradedComplex, InputError> {
        let c = self.complex.as_ref().ok_or_else(|| bad("this command needs a 'complex' block"))?;
        self.build_complex(c, "complex")
    }

    fn family(&self, terms: &[Vec<EntryDoc>], first: usize, degree: impl Fn(usize) -> i64, what: &str) -> Result<Vec<OperatorMatrix<NovikovElem>>, InputError> {
        let c = self.complex()?;
        terms
            .iter()
            .enumerate()
            .map(|(k, t)| matrix(t, &c.basis, &c.basis, c.setup, degree(k + first), &format!("{what}[{}]", k + first)))
            .collect()
    }

    /// `d_eq` truncated at `order`.
    pub fn equivariant(&self, order: usize) -> Result<EquivariantDifferential<NovikovElem>, InputError> {
        let c = self.complex()?;
        let mut terms = vec![c.d.clone()];
        terms.extend(self.family(self.d_family.as_deref().unwrap_or(&[]), 1, d_degree, "d_family")?);
        Ok(EquivariantDifferential::new(c, EqOperator::new(terms), order))
    }

    pub fn lambda_family(&self) -> Result<Option<EqOperator<NovikovElem>>, InputError> {
        let Some(t) = &self.lambda_family else { return Ok(None) };
        let q2 = self.complex()?.q_degree_two;
        Ok(Some(EqOperator::new(self.family(t, 0, |k| lambda_degree(q2, k), "lambda_family")?)))
    }

    pub fn iota_family(&self) -> Result<Option<EqOperator<NovikovElem>>, InputError> {
        let Some(t) = &self.iota_family else { return Ok(None) };
        let q2 = self.complex()?.q_degree_two;
        Ok(Some(EqOperator::new(self.family(t, 0, |k| iota_degree(q2, k), "iota_family")?)))
    }

    pub fn quantum_ring(&self) -> Result<QuantumRing, InputError> {
        let what = "quantum_ring";
        let q = self.quantum_ring.as_ref().ok_or_else(|| bad("this command needs a 'quantum_ring' block"))?;
        let setup = self.setup()?;
        let basis = generators(&q.classes, what)?;
        let vector = |m: &BTreeMap<String, String>| -> Result<Vec<NovikovElem>, InputError> {
            let mut v = vec![NovikovElem::zero(setup); basis.len()];
            for (name, value) in m {
                v[position(&basis, name, what)?] = elem(value, setup, what)?;
            }
            Ok(v)
        };
        let unit = position(&basis, &q.unit, what)?;
        let omega = vector(&q.omega)?;
        let mut products = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for p in &q.products {
            let key = (position(&basis, &p.left, what)?, position(&basis, &p.right, what)?);
            if !seen.insert(key) {
                return Err(bad(format!("{what}: product {} * {} given twice", p.left, p.right)));
            }
            products.push((key, vector(&p.result)?));
        }
        QuantumRing::new(setup, basis, unit, omega, q.q_degree_two, products).map_err(|e| bad(format!("{what}: {e}")))
    }

    pub fn z2_data(&self) -> Result<Z2CartanData, InputError> {
        let what = "z2_data";
        let z = self.z2_data.as_ref().ok_or_else(|| bad("this command needs a 'z2_data' block"))?;
        let setup = self.setup()?;
        let basis = generators(&z.generators, what)?;
        let m = |e: &[EntryDoc], name: &str| matrix(e, &basis, &basis, setup, 0, &format!("{what}.{name}"));
        Z2CartanData::new(
            basis.clone(),
            m(&z.d, "d")?,
            m(&z.iota, "iota")?,
            m(&z.lambda, "lambda")?,
            m(&z.sigma, "sigma")?,
            m(&z.big_sigma, "big_sigma")?,
            m(&z.xi, "xi")?,
            m(&z.big_xi, "big_xi")?,
        )
        .map_err(|e| bad(format!("{what}: {e}")))
    }

    /// `(C₊, C₋, c)`.
    pub fn cone(&self) -> Result<(GradedComplex, GradedComplex, OperatorMatrix<NovikovElem>), InputError> {
        let cd = self.cone.as_ref().ok_or_else(|| bad("this command needs a 'cone' block"))?;
        let plus = self.complex()?;
        let minus = self.build_complex(&cd.minus, "cone.minus")?;
        let c = matrix(&cd.map, &minus.basis, &plus.basis, plus.setup, 0, "cone.map")?;
        Ok((plus, minus, c))
    }
}
