//! Random fixture generators shared by the acceptance suite.

#![allow(dead_code)]

use cartan_workbench::cartan::{d_degree, EquivariantDifferential};
use cartan_workbench::complexes::{EqOperator, GeneratorInfo, GradedComplex, GradingKind, OperatorMatrix};
use cartan_workbench::finite_analog::Z2CartanData;
use cartan_workbench::novikov::{CoefficientRing, NovikovElem, Setup};
use cartan_workbench::quantum::QuantumRing;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Mat = OperatorMatrix<NovikovElem>;

pub fn f101() -> Setup {
    Setup::integral(CoefficientRing::PrimeField(101))
}

pub fn f2() -> Setup {
    Setup::integral(CoefficientRing::PrimeField(2))
}

pub fn zz() -> Setup {
    Setup::integral(CoefficientRing::Integers)
}

pub fn term(s: Setup, c: i64, e: i64) -> NovikovElem {
    NovikovElem::constant(s, c).mul(&NovikovElem::q_power(s, e))
}

/// Exponent of an entry from `s` to `t` of an operator of index shift `deg`,
/// if the grading allows one. Without `|q| = 2` any exponent in `-2..=2` is
/// drawn; with it the exponent is forced.
fn entry_exponent(rng: &mut ChaCha8Rng, q2: bool, shift: i64, deg: i64, q_free: bool) -> Option<i64> {
    if q2 {
        let twice = deg - shift;
        (twice % 2 == 0 && (!q_free || twice == 0)).then_some(twice / 2)
    } else if shift == deg {
        Some(if q_free { 0 } else { rng.gen_range(-2..=2) })
    } else {
        None
    }
}

fn nonzero(rng: &mut ChaCha8Rng) -> i64 {
    let c: i64 = rng.gen_range(1..=9);
    if rng.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

pub struct CartanFixture {
    pub d: EquivariantDifferential<NovikovElem>,
    /// Number of `x → y` pairs of the model differential at `u⁰` and `u¹`.
    pub pairs: (usize, usize),
}

/// `d_eq = P D P⁻¹` on at most `max_gens` generators over `𝔽₁₀₁`, with `D` a
/// disjoint union of arrows `c q^e u^k` (`k ∈ {0, 1}`, or only `k = 0` when
/// `torsion_free`) and `P = (1 + N₀)(1 + uP₁)` with `N₀` strictly lower
/// triangular of degree 0 and `P₁² = 0`. Then `d_eq² = 0` and `d_eq` has
/// terms up to `u³`.
pub fn random_cartan(rng: &mut ChaCha8Rng, max_gens: usize, q2: bool, q_free: bool, torsion_free: bool, order: usize) -> CartanFixture {
    let s = f101();
    let mut basis: Vec<GeneratorInfo> = Vec::new();
    let mut arrows: Vec<(usize, usize, usize, i64)> = Vec::new();
    let target = rng.gen_range(2..=max_gens);
    while basis.len() < target {
        let a = rng.gen_range(-2..=2);
        if basis.len() + 2 <= target && rng.gen_bool(0.7) {
            let k = if torsion_free { 0 } else { rng.gen_range(0..=1) };
            let shift = if q2 {
                *[-3i64, -1, 1, 3].iter().nth(rng.gen_range(0..4)).unwrap()
            } else {
                d_degree(k)
            };
            let Some(e) = entry_exponent(rng, q2, shift, d_degree(k), q_free) else { continue };
            let x = basis.len();
            basis.push(GeneratorInfo::new(format!("x{x}"), a));
            basis.push(GeneratorInfo::new(format!("x{}", x + 1), a + shift));
            arrows.push((x + 1, x, k, e));
        } else {
            let x = basis.len();
            basis.push(GeneratorInfo::new(format!("x{x}"), a));
        }
    }
    let n = basis.len();
    let idx: Vec<i64> = basis.iter().map(|g| g.index).collect();

    let mut dterms = vec![Mat::zero(s, n, n, d_degree(0)), Mat::zero(s, n, n, d_degree(1))];
    for &(t, x, k, e) in &arrows {
        dterms[k].set(t, x, term(s, nonzero(rng), e));
    }
    let pairs = (arrows.iter().filter(|a| a.2 == 0).count(), arrows.iter().filter(|a| a.2 == 1).count());

    let mut n0 = Mat::zero(s, n, n, 0);
    let mut p1 = Mat::zero(s, n, n, -2);
    let role: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    for t in 0..n {
        for src in 0..n {
            let shift = idx[t] - idx[src];
            if t > src && rng.gen_bool(0.4) {
                if let Some(e) = entry_exponent(rng, q2, shift, 0, q_free) {
                    n0.set(t, src, term(s, nonzero(rng), e));
                }
            }
            if role[t] && !role[src] && rng.gen_bool(0.5) {
                if let Some(e) = entry_exponent(rng, q2, shift, -2, q_free) {
                    p1.set(t, src, term(s, nonzero(rng), e));
                }
            }
        }
    }
    // (1 + N₀)⁻¹ = Σ (−N₀)^j
    let id = Mat::identity(s, n);
    let mut inv0 = id.clone();
    let mut pow = id.clone();
    for _ in 0..n {
        pow = pow.compose(&n0.neg());
        inv0 = inv0.add(&pow);
    }
    let p0 = id.add(&n0);
    // P = P₀ + u P₀P₁, P⁻¹ = P₀⁻¹ − u P₁P₀⁻¹
    let p = [p0.clone(), p0.compose(&p1)];
    let pinv = [inv0.clone(), p1.compose(&inv0).neg()];
    let mut family = vec![Mat::zero(s, n, n, 0); 4];
    for (i, pi) in p.iter().enumerate() {
        for (j, dj) in dterms.iter().enumerate() {
            for (k, pk) in pinv.iter().enumerate() {
                family[i + j + k] = family[i + j + k].add(&pi.compose(dj).compose(pk));
            }
        }
    }
    while family.last().is_some_and(|m| m.is_zero()) && family.len() > 1 {
        family.pop();
    }
    let family: Vec<Mat> = family.into_iter().enumerate().map(|(k, m)| m.with_degree(d_degree(k))).collect();
    let frame = GradedComplex::new(GradingKind::IntGraded, basis, family[0].clone(), s, q2);
    CartanFixture { d: EquivariantDifferential::new(frame, EqOperator::new(family), order), pairs }
}

fn gens(n: usize) -> Vec<GeneratorInfo> {
    (0..n).map(|i| GeneratorInfo::new(format!("g{i}"), i as i64)).collect()
}

fn random_mat(rng: &mut ChaCha8Rng, n: usize, density: f64, even: bool) -> Mat {
    let s = f2();
    let mut m = Mat::zero(s, n, n, 0);
    for r in 0..n {
        for c in 0..n {
            if rng.gen_bool(density) {
                let e: i64 = rng.gen_range(-1..=2);
                m.set(r, c, NovikovElem::q_power(s, if even { 2 * e } else { e }));
            }
        }
    }
    m
}

fn lower_nilpotent(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    let s = f2();
    let mut m = Mat::zero(s, n, n, 0);
    for r in 0..n {
        for c in 0..r {
            if rng.gen_bool(0.4) {
                m.set(r, c, NovikovElem::q_power(s, rng.gen_range(-1..=2)));
            }
        }
    }
    m
}

/// ℤ/2 data from `d = P D₀ P⁻¹` (`D₀` with even exponents so `∂_q D₀ = 0`),
/// `σ = 1 + D(A)`, `Σ = A·D(A)`, `ι = f + D(B)`, `ξ = A D(B) + B D(A)` and
/// `Ξ = A B D(A) + A A D(B) + B A D(A) + P′P⁻¹`, where `D(X) = dX + Xd`.
pub fn random_z2(rng: &mut ChaCha8Rng, max_gens: usize) -> Z2CartanData {
    let s = f2();
    let n = rng.gen_range(1..=max_gens);
    let mut d0 = Mat::zero(s, n, n, 0);
    let mut used = vec![false; n];
    for _ in 0..n {
        let (r, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if r != c && !used[r] && !used[c] {
            used[r] = true;
            used[c] = true;
            d0.set(r, c, NovikovElem::q_power(s, 2 * rng.gen_range(-1..=1)));
        }
    }
    let nil = lower_nilpotent(rng, n);
    let id = Mat::identity(s, n);
    let p = id.add(&nil);
    let mut pinv = id.clone();
    let mut pow = id.clone();
    for _ in 0..n {
        pow = pow.compose(&nil);
        pinv = pinv.add(&pow);
    }
    let d = p.compose(&d0).compose(&pinv);
    let der = |x: &Mat| d.compose(x).add(&x.compose(&d));
    let a = random_mat(rng, n, 0.3, false);
    let b = random_mat(rng, n, 0.3, false);
    let (da, db) = (der(&a), der(&b));
    let f = NovikovElem::q_power(s, rng.gen_range(-1..=1));
    let lambda = d.dq_entrywise().unwrap();
    let sigma = id.add(&da);
    let big_sigma = a.compose(&da);
    let iota = id.scale(&f).add(&db);
    let xi = a.compose(&db).add(&b.compose(&da));
    let big_xi = a
        .compose(&b)
        .compose(&da)
        .add(&a.compose(&a).compose(&db))
        .add(&b.compose(&a).compose(&da))
        .add(&nil.dq_entrywise().unwrap().compose(&pinv));
    Z2CartanData::new(gens(n), d, iota, lambda, sigma, big_sigma, xi, big_xi).unwrap()
}

/// `ℤ[x, y]/(x^a − αq^a, y^b − βq^b)` with `|x| = |y| = 2`, `|q| = 2`, basis
/// `x^i y^j`, and `c₁ = γx + δy`. Associative and commutative by
/// construction; `b = 1` gives the one-variable ring.
pub fn random_quantum(rng: &mut ChaCha8Rng) -> QuantumRing {
    let s = zz();
    let a: usize = rng.gen_range(1..=3);
    let b: usize = rng.gen_range(1..=2);
    let alpha = nonzero(rng);
    let beta = nonzero(rng);
    let gamma = rng.gen_range(-3..=3);
    let delta = rng.gen_range(-3..=3);
    let n = a * b;
    let at = |i: usize, j: usize| i * b + j;
    let basis: Vec<GeneratorInfo> =
        (0..a).flat_map(|i| (0..b).map(move |j| GeneratorInfo::new(format!("x{i}y{j}"), 2 * (i + j) as i64))).collect();
    let mut products = Vec::new();
    for (i1, j1) in (0..a).flat_map(|i| (0..b).map(move |j| (i, j))) {
        for (i2, j2) in (0..a).flat_map(|i| (0..b).map(move |j| (i, j))) {
            let (mut i, mut j) = (i1 + i2, j1 + j2);
            let mut c = NovikovElem::one(s);
            if i >= a {
                i -= a;
                c = c.mul(&term(s, alpha, a as i64));
            }
            if j >= b {
                j -= b;
                c = c.mul(&term(s, beta, b as i64));
            }
            let mut v = vec![NovikovElem::zero(s); n];
            v[at(i, j)] = c;
            products.push(((at(i1, j1), at(i2, j2)), v));
        }
    }
    let mut omega = vec![NovikovElem::zero(s); n];
    if a > 1 {
        omega[at(1, 0)] = NovikovElem::constant(s, gamma);
    }
    if b > 1 {
        omega[at(0, 1)] = NovikovElem::constant(s, delta);
    }
    QuantumRing::new(s, basis, at(0, 0), omega, true, products).unwrap()
}
