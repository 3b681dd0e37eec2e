//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach standard output.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use cartan_workbench::cartan::{
    gamma_q_self_test, gamma_relation_check, gamma_u, induced_on_cohomology, lambda_from_differentiation, reduce_mod,
    solve_iota, u_deg, CartanData, EquivariantDifferential, IotaOutcome, ModReport, Which,
};
use cartan_workbench::complexes::{
    les_consistency, u_module_decomposition, EqOperator, EqVec, GeneratorInfo, GradedComplex, GradingKind, OperatorMatrix,
};
use cartan_workbench::finite_analog::{assemble_and_check, verify_relations};
use cartan_workbench::morse_cpn::{additivity, alpha1_winding, weight_matrix_facts, ROUNDOFF_FLOOR};
use cartan_workbench::novikov::{Frac, NovikovElem, Setup, USeries};
use cartan_workbench::quantum::{forbidden_summand_check, uq_identity_check, QuantumRing, SummandRing, Verdict};
use common::*;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Wall-clock budgets.
const CARTAN_BUDGET: Duration = Duration::from_secs(10);
const MORSE_BUDGET: Duration = Duration::from_secs(5);
/// Morse tolerances.
const WINDING_RESIDUAL_TOL: f64 = 0.01;
const ADDITIVITY_TOL: f64 = 1e-3;
const DELTAS: [f64; 3] = [1e-2, 1e-3, 1e-4];

type Verdict_ = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn frac_scalars(s: Setup, order: usize) -> Vec<USeries<Frac>> {
    let q = |n: i64| Frac::from_elem(NovikovElem::q_power(s, n));
    vec![
        USeries::constant(q(1), order),
        USeries::from_coeffs(s, vec![q(-1), Frac::zero(s), q(2).scale_int(3)], order),
        USeries::monomial(Frac::one(s), 1, order),
    ]
}

fn solved(d: &EquivariantDifferential<NovikovElem>) -> Result<Option<CartanData<Frac>>, String> {
    let (lambda, _) = lambda_from_differentiation(d).map_err(|e| format!("pre-lambda: {e}"))?;
    match solve_iota(d, &lambda, None).map_err(|e| e.to_string())? {
        IotaOutcome::Solved { iota, .. } => {
            let mut data = CartanData::new(d.clone(), lambda, EqOperator::new(vec![])).to_frac();
            data.iota = iota;
            Ok(Some(data))
        }
        IotaOutcome::Obstructed(_) => Ok(None),
    }
}

fn criterion_1() -> Verdict_ {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut fixtures, mut solved_count) = (0, 0);
    while fixtures < 24 {
        let fx = random_cartan(&mut rng, 8, false, false, false, 5);
        let rep = fx.d.validate();
        check(rep.is_valid(), format!("generator produced invalid d_eq: {:?}", rep.violations.first()))?;
        check(fx.d.family.len() <= 4, "more than K = 3 higher terms")?;
        fixtures += 1;
        if let Some(data) = solved(&fx.d)? {
            solved_count += 1;
            let t = gamma_q_self_test(&data, &frac_scalars(data.setup(), 5)).map_err(|e| e.to_string())?;
            check(t.passed(), format!("gamma_q self-test failed on fixture {fixtures}: {:?}", t.checks))?;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < CARTAN_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("{fixtures} fixtures, pre-lambda exact on all, iota solved on {solved_count} with gamma_q self-tests passing, {elapsed:.2?}"))
}

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_cartanwb"))
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn run_bin(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(bin()).args(args).env_remove("CARTANWB_ORDER").output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_2() -> Verdict_ {
    let doc = fixtures_dir().join("exact_case.json");
    let (code, out) = run_bin(&["cartan", "connection", doc.to_str().unwrap(), "--which", "q"]);
    let golden = std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/exact_case_connection_q.json")).unwrap();
    check(code == 0, format!("exit code {code}"))?;
    check(out == golden, format!("report differs from golden:\n{}", String::from_utf8_lossy(&out)))?;

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut n = 0;
    while n < 10 {
        let fx = random_cartan(&mut rng, 6, false, true, true, 4);
        let data = solved(&fx.d)?.ok_or("q-independent fixture obstructed")?;
        let conn = induced_on_cohomology(&data, Which::Q).map_err(|e| e.to_string())?;
        check(conn.is_pure_derivation() && conn.well_defined, format!("induced gamma_q is not u d/dq: {:?}", conn.matrix))?;
        n += 1;
    }
    Ok(format!("golden report matches; induced gamma_q = u d/dq on {n} random q-independent fixtures"))
}

// d(x) = q^e y over Z, λ = e q^{e−1}, ι₁ = diag(e q^{-1}, 0)
fn single_arrow(e: i64) -> CartanData<NovikovElem> {
    let s = zz();
    let basis = vec![GeneratorInfo::new("x", 0), GeneratorInfo::new("y", 1)];
    let d0 = OperatorMatrix::from_entries(s, 2, 2, 1, [((1, 0), term(s, 1, e))]);
    let frame = GradedComplex::new(GradingKind::IntGraded, basis, d0.clone(), s, false);
    let base = EquivariantDifferential::new(frame, EqOperator::new(vec![d0]), 3);
    let lambda = EqOperator::new(vec![OperatorMatrix::from_entries(s, 2, 2, 1, [((1, 0), term(s, e, e - 1))])]);
    let iota1 = OperatorMatrix::from_entries(s, 2, 2, 0, [((0, 0), term(s, e, -1))]);
    CartanData::new(base, lambda, EqOperator::new(vec![OperatorMatrix::zero(s, 2, 2, 2), iota1]))
}

fn criterion_3() -> Verdict_ {
    let mut lines = Vec::new();
    for which in [Which::Q, Which::U] {
        let (_, rep) = reduce_mod(&single_arrow(2), 2, which).map_err(|e| e.to_string())?;
        check(matches!(rep, ModReport::Commutes { .. }), format!("exponent 2, {which:?}: {rep:?}"))?;
        let (_, neg) = reduce_mod(&single_arrow(1), 2, which).map_err(|e| e.to_string())?;
        check(matches!(neg, ModReport::HypothesisViolated { .. }), format!("exponent 1, {which:?}: {neg:?}"))?;
        lines.push(format!("{which:?}: commutes / hypothesis violated"));
    }
    Ok(lines.join("; "))
}

fn criterion_4() -> Verdict_ {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut monotone, mut tries) = (0, 0);
    while monotone < 10 && tries < 200 {
        tries += 1;
        let fx = random_cartan(&mut rng, 6, true, false, false, 4);
        check(fx.d.validate().is_valid(), "generator produced an invalid monotone d_eq")?;
        let Some(data) = solved(&fx.d)? else { continue };
        let t = gamma_relation_check(&data, &frac_scalars(data.setup(), 4)).map_err(|e| e.to_string())?;
        check(t.passed(), format!("grading identity failed: {:?}", t.checks))?;
        monotone += 1;
    }
    check(monotone == 10, format!("only {monotone} monotone fixtures solved"))?;

    let mut graded = 0;
    for _ in 0..10 {
        let fx = random_cartan(&mut rng, 6, false, false, false, 4);
        let data = CartanData::new(fx.d.clone(), EqOperator::new(vec![]), EqOperator::new(vec![])).to_frac();
        let s = data.setup();
        for i in 0..data.dim() {
            for f in frac_scalars(s, 4) {
                let x = EqVec::basis(s, data.dim(), 4, i).scale(&f);
                let (a, b) = (gamma_u(&data, &x).map_err(|e| e.to_string())?, u_deg(&data, &x).map_err(|e| e.to_string())?);
                check(a.agrees_with(&b), format!("gamma_u != u deg on {}", data.base.frame.basis[i].name))?;
                graded += 1;
            }
        }
    }
    Ok(format!("gamma_u + 2q gamma_q = u deg on {monotone} monotone fixtures; gamma_u = u deg with iota = 0 on {graded} vectors"))
}

fn cp1_monotone() -> QuantumRing {
    let s = zz();
    let c = |n| NovikovElem::constant(s, n);
    let basis = vec![GeneratorInfo::new("1", 0), GeneratorInfo::new("e", 2)];
    let products = vec![
        ((0, 0), vec![c(1), c(0)]),
        ((0, 1), vec![c(0), c(1)]),
        ((1, 0), vec![c(0), c(1)]),
        ((1, 1), vec![NovikovElem::q_power(s, 2), c(0)]),
    ];
    QuantumRing::new(s, basis, 0, vec![c(0), c(2)], true, products).unwrap()
}

fn uq_passes(ring: &QuantumRing, label: &str) -> Result<(), String> {
    check(ring.validate().passed(), format!("{label}: ring axioms fail"))?;
    let t = uq_identity_check(ring, 4, &[-1, 0, 1, 2]).map_err(|e| e.to_string())?;
    check(t.checks[0].name.contains("linear"), "q-linearity is not the first line")?;
    check(t.checks[0].passed, format!("{label}: q-linearity: {:?}", t.checks[0].witness))?;
    check(t.checks[1].passed, format!("{label}: identity: {:?}", t.checks[1].witness))
}

fn criterion_5() -> Verdict_ {
    uq_passes(&cp1_monotone(), "rank 2")?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut dims = Vec::new();
    for i in 0..10 {
        let r = random_quantum(&mut rng);
        dims.push(r.dim());
        uq_passes(&r, &format!("table {i}"))?;
    }
    Ok(format!("rank-2 fixture and 10 random tables (ranks {dims:?}), q-linearity certified first"))
}

fn criterion_6() -> Verdict_ {
    let r = |n: i64| BigRational::from_integer(n.into());
    let mut rows = 0;
    for lambda in -5i64..=5 {
        for d in 1u64..=5 {
            let rep = forbidden_summand_check(&r(lambda), d, SummandRing::Integers).map_err(|e| e.to_string())?;
            let want = 2 * d as i64 * lambda * lambda;
            check(rep.certificate.surviving_coefficient == want.to_string(), format!("Z, λ={lambda}, d={d}: {}", rep.certificate.surviving_coefficient))?;
            let expected = if lambda != 0 { Verdict::Forbidden } else { Verdict::NotExcluded };
            check(rep.verdict == expected, format!("Z, λ={lambda}, d={d}: {:?}", rep.verdict))?;
            rows += 1;
            for p in [3u64, 5, 7] {
                let rep = forbidden_summand_check(&r(lambda), d, SummandRing::PrimeField(p)).map_err(|e| e.to_string())?;
                let want = (2 * d as i64 * lambda * lambda).rem_euclid(p as i64);
                check(rep.certificate.surviving_coefficient == want.to_string(), format!("F{p}, λ={lambda}, d={d}"))?;
                let divides = d % p == 0 || lambda.rem_euclid(p as i64) == 0;
                if divides {
                    check(rep.verdict == Verdict::NotExcluded, format!("F{p}, λ={lambda}, d={d}: p | dλ but {:?}", rep.verdict))?;
                } else {
                    check(rep.verdict == Verdict::Forbidden, format!("F{p}, λ={lambda}, d={d}: {:?}", rep.verdict))?;
                }
                rows += 1;
            }
        }
    }
    Ok(format!("{rows} (ring, λ, d) cases classified; surviving coefficient 2dλ² in every certificate"))
}

/// `F₂[u]` polynomials as bit masks (bit `k` = coefficient of `u^k`).
fn clmul(a: u64, b: u64) -> u64 {
    let mut out = 0;
    for k in 0..32 {
        if (b >> k) & 1 == 1 {
            out ^= a << k;
        }
    }
    out
}

/// Leibniz determinant over `F₂[u]` (signs are irrelevant in characteristic 2).
fn det(m: &[Vec<u64>]) -> u64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0;
    loop {
        total ^= (0..n).fold(1u64, |acc, i| clmul(acc, m[i][perm[i]]));
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// Invariant-factor exponents from the determinantal divisors.
fn oracle_invariants(m: &[Vec<u64>]) -> Vec<u32> {
    let (r, c) = (m.len(), m[0].len());
    let mut prev = 0u32;
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut best: Option<u32> = None;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<u64>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                let v = det(&sub);
                if v != 0 {
                    best = Some(best.map_or(v.trailing_zeros(), |b| b.min(v.trailing_zeros())));
                }
            }
        }
        let Some(dk) = best else { break };
        out.push(dk - prev);
        prev = dk;
    }
    out
}

/// The matrix as `d_eq` from sources `x_j` to targets `y_i` on a ℤ/2-graded
/// complex, so that every power of `u` is allowed.
fn as_complex(m: &[Vec<u64>]) -> (GradedComplex, EqOperator<NovikovElem>) {
    let s = f2();
    let (r, c) = (m.len(), m[0].len());
    let n = r + c;
    let mut basis: Vec<GeneratorInfo> = (0..c).map(|j| GeneratorInfo::new(format!("x{j}"), 0)).collect();
    basis.extend((0..r).map(|i| GeneratorInfo::new(format!("y{i}"), 1)));
    let terms: Vec<OperatorMatrix<NovikovElem>> = (0..3)
        .map(|k| {
            let entries = (0..r)
                .flat_map(|i| (0..c).map(move |j| (i, j)))
                .filter(|&(i, j)| (m[i][j] >> k) & 1 == 1)
                .map(|(i, j)| ((c + i, j), NovikovElem::one(s)));
            OperatorMatrix::from_entries(s, n, n, 1 - 2 * k as i64, entries)
        })
        .collect();
    (GradedComplex::new(GradingKind::Mod2, basis, terms[0].clone(), s, false), EqOperator::new(terms))
}

fn matrices(r: usize, c: usize) -> Vec<Vec<Vec<u64>>> {
    let cells = r * c;
    let max_support = if cells <= 4 { cells } else { 3 };
    let mut out = Vec::new();
    for k in 0..=max_support {
        for support in subsets(cells, k) {
            let mut values = vec![1u64; k];
            loop {
                let mut m = vec![vec![0u64; c]; r];
                for (&cell, &v) in support.iter().zip(&values) {
                    m[cell / c][cell % c] = v;
                }
                out.push(m);
                let Some(i) = values.iter().position(|&v| v < 7) else { break };
                values[i] += 1;
                values[..i].iter_mut().for_each(|v| *v = 1);
            }
        }
    }
    out
}

fn criterion_7() -> Verdict_ {
    let order = 3;
    let mut count = 0;
    for r in 1..=3 {
        for c in 1..=3 {
            for m in matrices(r, c) {
                let (cx, fam) = as_complex(&m);
                let rep = u_module_decomposition(&cx, &fam, order).map_err(|e| e.to_string())?;
                let inv = oracle_invariants(&m);
                let mut want_torsion: Vec<usize> = inv.iter().filter(|&&e| (1..order as u32).contains(&e)).map(|&e| e as usize).collect();
                want_torsion.sort_unstable();
                let want_units = inv.iter().filter(|&&e| e == 0).count();
                let want_undetermined = inv.iter().filter(|&&e| e >= order as u32).count();
                let undetermined: usize = rep.degrees.iter().map(|d| d.undetermined).sum();
                let pivots = (cx.dim() - rep.free_rank() - undetermined) / 2;
                let torsion = rep.torsion_orders();
                let units = pivots - torsion.len();
                check(
                    torsion == want_torsion && units == want_units && undetermined == want_undetermined,
                    format!("{m:?}: torsion {torsion:?} units {units} undetermined {undetermined}, oracle {inv:?}"),
                )?;
                count += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut balanced = 0;
    for _ in 0..20 {
        let fx = random_cartan(&mut rng, 8, false, false, false, 5);
        let rep = u_module_decomposition(&fx.d.frame, &fx.d.family, 5).map_err(|e| e.to_string())?;
        let les = les_consistency(&fx.d.frame, &rep).map_err(|e| e.to_string())?;
        check(les.rows.iter().all(|r| r.balanced()), format!("LES unbalanced: {:?}", les.rows))?;
        check(rep.torsion_orders().len() == fx.pairs.1, "torsion count differs from the model differential")?;
        balanced += 1;
    }
    Ok(format!("{count} matrices over F2[u]/u^3 agree with the determinantal-divisor oracle; LES balanced on {balanced} fixtures"))
}

fn criterion_8() -> Verdict_ {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut passing = 0;
    let mut tries = 0;
    while passing < 20 && tries < 100 {
        tries += 1;
        let z = random_z2(&mut rng, 6);
        if !verify_relations(&z).valid() {
            continue;
        }
        let a = assemble_and_check(&z).map_err(|e| e.to_string())?;
        check(a.d_eq_squared.passed, format!("d_eq^2 certificate failed: {:?}", a.d_eq_squared))?;
        check(a.gamma_commutes.passed, format!("[d_eq, gamma_q] certificate failed: {:?}", a.gamma_commutes))?;
        passing += 1;
    }
    check(passing == 20, format!("only {passing} of {tries} fixtures satisfied the relations"))?;
    Ok(format!("{passing} fixtures passing the relations ({tries} drawn); both h^3 certificates pass on all"))
}

fn criterion_9() -> Verdict_ {
    let start = Instant::now();
    let w = alpha1_winding(64).map_err(|e| e.to_string())?;
    check(w.winding.abs() == 1, format!("winding {}", w.winding))?;
    check(w.unwrap_residual < WINDING_RESIDUAL_TOL, format!("residual {}", w.unwrap_residual))?;
    let add = additivity(&DELTAS).map_err(|e| e.to_string())?;
    let errors: Vec<f64> = add.rows.iter().map(|r| r.error).collect();
    check(add.monotone, format!("errors not non-increasing above the {ROUNDOFF_FLOOR:e} floor: {errors:?}"))?;
    check(add.finest_error < ADDITIVITY_TOL, format!("finest error {}", add.finest_error))?;
    let f = weight_matrix_facts();
    check(f.transition == [[0, 1], [1, 1]], format!("transition {:?}", f.transition))?;
    check(f.kernel_vector == [1, -1], format!("kernel {:?}", f.kernel_vector))?;
    let elapsed = start.elapsed();
    check(elapsed < MORSE_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!(
        "winding {} at grid {} (residual {:.1e}); additivity errors {errors:?}; X = (0 1; 1 1), kernel (1,-1); {elapsed:.2?}",
        w.winding, w.grid, w.unwrap_residual
    ))
}

fn doc_commands() -> Vec<Vec<String>> {
    let f = |name: &str| fixtures_dir().join(name).to_str().unwrap().to_string();
    let mut cmds: Vec<Vec<String>> = Vec::new();
    let all = ["exact_case.json", "monotone.json", "u_torsion.json", "quantum_cp1.json", "z2_identity.json", "cone_identity.json"];
    for name in all {
        cmds.push(vec!["validate".into(), f(name)]);
    }
    for name in ["exact_case.json", "monotone.json", "u_torsion.json"] {
        for c in [&["cohomology"][..], &["u-decompose"], &["cartan", "verify"], &["cartan", "solve-iota"]] {
            let mut v: Vec<String> = c.iter().map(|s| s.to_string()).collect();
            v.push(f(name));
            cmds.push(v);
        }
    }
    for w in ["q", "u"] {
        cmds.push(vec!["cartan".into(), "connection".into(), f("exact_case.json"), "--which".into(), w.into()]);
    }
    cmds.push(vec!["quantum".into(), "check".into(), f("quantum_cp1.json")]);
    cmds.push(vec!["finite2".into(), "verify".into(), f("z2_identity.json")]);
    cmds.push(vec!["finite2".into(), "assemble".into(), f("z2_identity.json")]);
    cmds.push(vec!["cone".into(), f("cone_identity.json")]);
    cmds
}

fn criterion_10() -> Verdict_ {
    let mut cmds = doc_commands();
    for extra in [
        &["quantum", "obstruction", "--lambda", "1", "--d", "1", "--ring", "Z"][..],
        &["quantum", "obstruction", "--lambda", "3", "--d", "2", "--ring", "F3"],
        &["morse", "alpha1", "--grid", "64"],
        &["morse", "additivity", "--delta", "1e-2,1e-3,1e-4"],
        &["morse", "weights"],
        &["--schema"],
    ] {
        cmds.push(extra.iter().map(|s| s.to_string()).collect());
    }
    let tmp = std::env::temp_dir().join(format!("cartanwb-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let mut roundtrips = 0;
    for (i, c) in cmds.iter().enumerate() {
        let args: Vec<&str> = c.iter().map(|s| s.as_str()).collect();
        let a = run_bin(&args);
        let b = run_bin(&args);
        check(a == b, format!("`{}` differs between runs", args.join(" ")))?;
        check((0..=3).contains(&a.0), format!("`{}` exit code {}", args.join(" "), a.0))?;
        if args[0] == "--schema" {
            continue;
        }
        let report: serde_json::Value = serde_json::from_slice(&a.1).map_err(|e| format!("`{}`: {e}", args.join(" ")))?;
        if let Some(input) = report.get("input") {
            let p = tmp.join(format!("input{i}.json"));
            std::fs::write(&p, serde_json::to_vec(input).unwrap()).unwrap();
            let (code, _) = run_bin(&["validate", p.to_str().unwrap()]);
            check(code == 0, format!("embedded input of `{}` does not re-validate", args.join(" ")))?;
            roundtrips += 1;
        }
    }
    Ok(format!("{} commands byte-identical across two runs; {roundtrips} embedded inputs re-validate", cmds.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict_); 10] = [
        ("1 Cartan identity suite", criterion_1),
        ("2 exact case: gamma_q = u d/dq", criterion_2),
        ("3 mod-m reduction", criterion_3),
        ("4 grading identities", criterion_4),
        ("5 quantum uq identity", criterion_5),
        ("6 obstruction table", criterion_6),
        ("7 DVR decomposition and LES", criterion_7),
        ("8 finite analogue certificates", criterion_8),
        ("9 Morse numerics", criterion_9),
        ("10 CLI determinism", criterion_10),
    ];
    // the libtest harness would pass `--list`, filters etc.; only `--list` matters
    if std::env::args().any(|a| a == "--list") {
        for (name, _) in &criteria {
            println!("criterion {name}: test");
        }
        return;
    }
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match r {
            Ok(msg) => println!("PASS criterion {name} [{:.2?}]: {msg}", start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} [{:.2?}]: {msg}", start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
