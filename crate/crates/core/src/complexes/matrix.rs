use std::collections::BTreeMap;

use crate::novikov::{Frac, NovikovElem, NovikovError, Scalar, Setup, USeries};

/// Sparse matrix of an operator in the distinguished bases; entry `(r, c)`
/// is the coefficient of target generator `r` in the image of source `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<S: Scalar> {
    setup: Setup,
    rows: usize,
    cols: usize,
    degree: i64,
    entries: BTreeMap<(usize, usize), S>,
}

impl<S: Scalar> OperatorMatrix<S> {
    pub fn zero(setup: Setup, rows: usize, cols: usize, degree: i64) -> Self {
        OperatorMatrix { setup, rows, cols, degree, entries: BTreeMap::new() }
    }

    pub fn identity(setup: Setup, n: usize) -> Self {
        let mut m = Self::zero(setup, n, n, 0);
        for i in 0..n {
            m.set(i, i, S::one(setup));
        }
        m
    }

    pub fn from_entries(
        setup: Setup,
        rows: usize,
        cols: usize,
        degree: i64,
        entries: impl IntoIterator<Item = ((usize, usize), S)>,
    ) -> Self {
        let mut m = Self::zero(setup, rows, cols, degree);
        for ((r, c), v) in entries {
            let cur = m.get(r, c);
            m.set(r, c, cur.add(&v));
        }
        m
    }

    pub fn setup(&self) -> Setup {
        self.setup
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn with_degree(mut self, degree: i64) -> Self {
        self.degree = degree;
        self
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(|| S::zero(self.setup))
    }

    pub fn entry(&self, r: usize, c: usize) -> Option<&S> {
        self.entries.get(&(r, c))
    }

    /// Stores a value, dropping zeros so every stored entry is nonzero.
    pub fn set(&mut self, r: usize, c: usize, v: S) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &S)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "composition shape mismatch");
        let mut by_row: BTreeMap<usize, Vec<(usize, &S)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Self::zero(self.setup, self.rows, other.cols, self.degree + other.degree);
        let mut acc: BTreeMap<(usize, usize), S> = BTreeMap::new();
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    let p = a.mul(b);
                    acc.entry((r, c))
                        .and_modify(|x| *x = x.add(&p))
                        .or_insert(p);
                }
            }
        }
        for ((r, c), v) in acc {
            out.set(r, c, v);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sum shape mismatch");
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            let cur = out.get(r, c);
            out.set(r, c, cur.add(v));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|v| v.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|v| v.mul(s))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.map(|v| v.scale_int(k))
    }

    /// Applies `f` to every stored entry (zeros are dropped afterwards).
    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = Self::zero(self.setup, self.rows, self.cols, self.degree);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, f(v));
        }
        out
    }

    pub fn try_map<T: Scalar, E>(&self, setup: Setup, f: impl Fn(&S) -> Result<T, E>) -> Result<OperatorMatrix<T>, E> {
        let mut out = OperatorMatrix::zero(setup, self.rows, self.cols, self.degree);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, f(v)?);
        }
        Ok(out)
    }

    /// Entrywise `∂_q`, i.e. the commutator `[∂_q, M]` on the fixed basis.
    pub fn dq_entrywise(&self) -> Result<Self, NovikovError> {
        self.try_map(self.setup, |v| v.dq())
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![S::zero(self.setup); self.rows];
        for (&(r, c), a) in &self.entries {
            if !v[c].is_zero() {
                out[r] = out[r].add(&a.mul(&v[c]));
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut m = vec![vec![S::zero(self.setup); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            m[r][c] = v.clone();
        }
        m
    }

    /// Restriction to a set of target rows and source columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zero(self.setup, rows.len(), cols.len(), self.degree);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if let Some(v) = self.entries.get(&(r, c)) {
                    out.set(i, j, v.clone());
                }
            }
        }
        out
    }

    /// Reindexes rows and columns: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut out = Self::zero(self.setup, self.rows, self.cols, self.degree);
        for (&(r, c), v) in &self.entries {
            out.set(row_perm[r], col_perm[c], v.clone());
        }
        out
    }

    /// Places `self` at offset `(r0, c0)` inside a larger zero matrix.
    pub fn embed(&self, rows: usize, cols: usize, r0: usize, c0: usize) -> Self {
        let mut out = Self::zero(self.setup, rows, cols, self.degree);
        for (&(r, c), v) in &self.entries {
            out.set(r + r0, c + c0, v.clone());
        }
        out
    }
}

impl OperatorMatrix<NovikovElem> {
    pub fn to_frac(&self) -> OperatorMatrix<Frac> {
        let mut out = OperatorMatrix::zero(self.setup, self.rows, self.cols, self.degree);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, Frac::from_elem(v.clone()));
        }
        out
    }
}

/// An operator on the equivariant complex, `Σ_k u^k A_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EqOperator<S: Scalar> {
    pub terms: Vec<OperatorMatrix<S>>,
}

impl<S: Scalar> EqOperator<S> {
    pub fn new(terms: Vec<OperatorMatrix<S>>) -> Self {
        EqOperator { terms }
    }

    /// The `u^k` coefficient, or zero beyond the stored family.
    pub fn term(&self, k: usize, setup: Setup, n: usize) -> OperatorMatrix<S> {
        self.terms.get(k).cloned().unwrap_or_else(|| OperatorMatrix::zero(setup, n, n, 0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies the operator to a vector of u-series, truncating at its order.
    pub fn apply(&self, v: &EqVec<S>) -> EqVec<S> {
        let n = v.order();
        let setup = v.setup();
        let dim = v.dim();
        let mut out = EqVec::zero(setup, dim, n);
        for (k, a) in self.terms.iter().enumerate() {
            if k >= n || a.is_zero() {
                continue;
            }
            for j in 0..n - k {
                let col: Vec<S> = v.comps.iter().map(|s| s.coeff(j).clone()).collect();
                if col.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let img = a.apply(&col);
                for (r, x) in img.into_iter().enumerate() {
                    if !x.is_zero() {
                        out.comps[r] = out.comps[r].add(&USeries::monomial(x, j + k, n));
                    }
                }
            }
        }
        let valid = v.valid_order();
        for c in &mut out.comps {
            *c = c.clone().with_valid(valid);
        }
        out
    }

    /// Order-`k` coefficient of the composite `self ∘ other`.
    pub fn compose_order(&self, other: &Self, k: usize, setup: Setup, n: usize) -> OperatorMatrix<S> {
        let mut acc = OperatorMatrix::zero(setup, n, n, 0);
        for k1 in 0..=k {
            let (Some(a), Some(b)) = (self.terms.get(k1), other.terms.get(k - k1)) else {
                continue;
            };
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc = acc.add(&a.compose(b));
        }
        acc
    }
}

/// A vector of the equivariant complex: one u-series per generator.
#[derive(Clone, Debug, PartialEq)]
pub struct EqVec<S: Scalar> {
    pub comps: Vec<USeries<S>>,
    setup: Setup,
    order: usize,
}

impl<S: Scalar> EqVec<S> {
    pub fn zero(setup: Setup, dim: usize, order: usize) -> Self {
        EqVec { comps: vec![USeries::zero(setup, order); dim], setup, order }
    }

    /// The basis vector `e_i` (u-constant).
    pub fn basis(setup: Setup, dim: usize, order: usize, i: usize) -> Self {
        let mut v = Self::zero(setup, dim, order);
        v.comps[i] = USeries::constant(S::one(setup), order);
        v
    }

    /// A u-constant vector.
    pub fn from_scalars(setup: Setup, xs: Vec<S>, order: usize) -> Self {
        let dim = xs.len();
        let mut v = Self::zero(setup, dim, order);
        for (i, x) in xs.into_iter().enumerate() {
            v.comps[i] = USeries::constant(x, order);
        }
        v
    }

    pub fn from_comps(setup: Setup, comps: Vec<USeries<S>>, order: usize) -> Self {
        assert!(comps.iter().all(|c| c.order() == order));
        EqVec { comps, setup, order }
    }

    pub fn setup(&self) -> Setup {
        self.setup
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn valid_order(&self) -> usize {
        self.comps.iter().map(|c| c.valid_order()).min().unwrap_or(self.order)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Coefficient vector of `u^k`.
    pub fn u_coefficient(&self, k: usize) -> Vec<S> {
        self.comps.iter().map(|c| c.coeff(k).clone()).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    fn zip(&self, o: &Self, f: impl Fn(&USeries<S>, &USeries<S>) -> USeries<S>) -> Self {
        assert_eq!(self.dim(), o.dim());
        EqVec {
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| f(a, b)).collect(),
            setup: self.setup,
            order: self.order,
        }
    }

    pub fn map(&self, f: impl Fn(&USeries<S>) -> USeries<S>) -> Self {
        EqVec { comps: self.comps.iter().map(f).collect(), setup: self.setup, order: self.order }
    }

    pub fn try_map<E>(&self, f: impl Fn(&USeries<S>) -> Result<USeries<S>, E>) -> Result<Self, E> {
        Ok(EqVec {
            comps: self.comps.iter().map(f).collect::<Result<_, _>>()?,
            setup: self.setup,
            order: self.order,
        })
    }

    /// Multiplication by a scalar u-series.
    pub fn scale(&self, f: &USeries<S>) -> Self {
        self.map(|a| a.mul(f))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.map(|a| a.scale_int(k))
    }

    pub fn shift_u(&self, k: usize) -> Self {
        self.map(|a| a.shift_u(k))
    }

    pub fn du(&self) -> Self {
        self.map(|a| a.du())
    }

    pub fn udq(&self) -> Result<Self, NovikovError> {
        self.try_map(|a| a.udq())
    }

    /// Scales component `i` by the integer `w[i]` (a diagonal operator).
    pub fn weight(&self, w: &[i64]) -> Self {
        EqVec {
            comps: self.comps.iter().zip(w).map(|(a, &k)| a.scale_int(k)).collect(),
            setup: self.setup,
            order: self.order,
        }
    }

    /// Equality on the orders both sides guarantee.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.dim() == o.dim() && self.comps.iter().zip(&o.comps).all(|(a, b)| a.agrees_with(b))
    }
}
