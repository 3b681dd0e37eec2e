//! Execution of the subcommands; every command produces one JSON report.

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use super::document::WorkbenchDocument;
use super::{Command, CartanCommand, FiniteCommand, InputError, MorseCommand, Outcome, QuantumCommand, Status, WhichArg};
use crate::cartan::{
    gamma_q_self_test, gamma_relation_check, gamma_u_self_test, induced_on_cohomology, lambda_from_differentiation,
    solve_iota, CartanData, CartanError, EquivariantDifferential, IotaOutcome, Monomials, SelfTest, Which,
};
use crate::complexes::{
    cohomology_over_novikov_field, les_consistency, mapping_cone, u_module_decomposition, validate_complex,
    verify_certificate, ComplexError, EqOperator, GradedComplex, OperatorMatrix,
};
use crate::finite_analog::{assemble_and_check, verify_relations, FiniteError};
use crate::morse_cpn::{additivity, alpha1_winding, weight_matrix_facts};
use crate::novikov::{Frac, NovikovElem, Scalar, USeries};
use crate::quantum::{forbidden_summand_check, uq_identity_check, QuantumError, SummandRing};

/// Truncation order used when neither `--order`, the document nor the
/// environment sets one.
pub const DEFAULT_ORDER: usize = 4;
pub const ORDER_ENV: &str = "CARTANWB_ORDER";

type Step = Result<(Status, Value), Outcome>;

fn malformed(msg: impl Into<String>) -> Outcome {
    Outcome { status: Status::Malformed, body: json!({ "error": msg.into() }) }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn load(path: &std::path::Path) -> Result<WorkbenchDocument, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    WorkbenchDocument::parse(&text).map_err(|InputError(e)| malformed(e))
}

fn resolve_order(flag: Option<usize>, doc: &WorkbenchDocument) -> Result<usize, Outcome> {
    if let Some(n) = flag.or(doc.truncation) {
        return Ok(n);
    }
    match std::env::var(ORDER_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| malformed(format!("{ORDER_ENV}='{v}' is not a truncation order"))),
        Err(_) => Ok(DEFAULT_ORDER),
    }
}

fn cartan_outcome(e: CartanError) -> Outcome {
    let status = match &e {
        CartanError::InvalidData(_) | CartanError::Violations(_) | CartanError::NotDegenerate(_) | CartanError::Internal(_) => {
            Status::Fail
        }
        CartanError::Complex(ComplexError::Undetermined(_)) => Status::Undetermined,
        _ => Status::Malformed,
    };
    let detail = match &e {
        CartanError::InvalidData(r) => to_value(r),
        CartanError::Violations(v) => to_value(v),
        _ => Value::Null,
    };
    Outcome { status, body: json!({ "error": e.to_string(), "detail": detail }) }
}

fn complex_outcome(e: ComplexError) -> Outcome {
    let status = match &e {
        ComplexError::Undetermined(_) => Status::Undetermined,
        ComplexError::DSquaredNonzero { .. } | ComplexError::NotChainMap(_) | ComplexError::LesMismatch { .. } => Status::Fail,
        _ => Status::Malformed,
    };
    Outcome { status, body: json!({ "error": e.to_string() }) }
}

fn entries<S: Scalar>(m: &OperatorMatrix<S>, rows: &GradedComplex, cols: &GradedComplex) -> Value {
    Value::Array(
        m.iter()
            .map(|(&(r, c), v)| json!({ "row": rows.basis[r].name, "col": cols.basis[c].name, "value": v.to_string() }))
            .collect(),
    )
}

fn family_json<S: Scalar>(f: &EqOperator<S>, frame: &GradedComplex) -> Value {
    Value::Array(f.terms.iter().map(|m| entries(m, frame, frame)).collect())
}

/// Scalars the Leibniz self-tests are tried against.
fn test_scalars<S: Scalar>(d: &EquivariantDifferential<NovikovElem>, order: usize) -> Vec<USeries<S>> {
    let s = d.setup();
    let g = s.lattice.denom();
    let q = |n: i64| S::from_elem(NovikovElem::q_power(s, n * g));
    vec![
        USeries::constant(q(1), order),
        USeries::from_coeffs(s, vec![q(-1), S::zero(s), q(2).scale_int(3)], order),
        USeries::monomial(S::one(s), 1, order),
    ]
}

fn self_tests<S: Monomials>(data: &CartanData<S>, scalars: &[USeries<S>]) -> Result<Vec<Value>, Outcome> {
    let mut out = Vec::new();
    type Test<S> = fn(&CartanData<S>, &[USeries<S>]) -> Result<SelfTest, CartanError>;
    let tests: [(&str, Test<S>); 3] =
        [("gamma_q", gamma_q_self_test), ("gamma_u", gamma_u_self_test), ("grading_identity", gamma_relation_check)];
    for (name, t) in tests {
        match t(data, scalars) {
            Ok(r) => out.push(json!({ "name": name, "passed": r.passed(), "checks": r.checks })),
            Err(CartanError::Unsupported(why)) => out.push(json!({ "name": name, "skipped": why })),
            Err(e) => return Err(cartan_outcome(e)),
        }
    }
    Ok(out)
}

fn all_passed(tests: &[Value]) -> bool {
    tests.iter().all(|t| t.get("passed").map_or(true, |p| p == &Value::Bool(true)))
}

/// `λ_eq` from the document, or `∂_q d_eq` with its certificate.
fn lambda_for(doc: &WorkbenchDocument, d: &EquivariantDifferential<NovikovElem>) -> Result<(EqOperator<NovikovElem>, Value), Outcome> {
    match doc.lambda_family().map_err(|InputError(e)| malformed(e))? {
        Some(l) => Ok((l, json!("supplied"))),
        None => {
            let (l, cert) = lambda_from_differentiation(d).map_err(cartan_outcome)?;
            Ok((l, json!({ "derived": "entrywise d/dq", "pre_lambda_verified_order": cert.verified_order })))
        }
    }
}

/// Full Cartan data over the Novikov field, solving for `ι_eq` when the
/// document does not supply it.
fn field_data(doc: &WorkbenchDocument, order: usize) -> Result<(CartanData<Frac>, Value, Value), Outcome> {
    let d = doc.equivariant(order).map_err(|InputError(e)| malformed(e))?;
    if !d.setup().ring.is_field() {
        return Err(malformed("this command needs field coefficients"));
    }
    let (lambda, lsrc) = lambda_for(doc, &d)?;
    match doc.iota_family().map_err(|InputError(e)| malformed(e))? {
        Some(iota) => Ok((CartanData::new(d, lambda, iota).to_frac(), lsrc, json!("supplied"))),
        None => match solve_iota(&d, &lambda, None).map_err(cartan_outcome)? {
            IotaOutcome::Solved { iota, .. } => {
                let mut data = CartanData::new(d, lambda, EqOperator::new(vec![])).to_frac();
                data.iota = iota;
                Ok((data, lsrc, json!("solved")))
            }
            IotaOutcome::Obstructed(ob) => {
                Err(Outcome { status: Status::Fail, body: json!({ "error": "no iota_eq exists", "obstruction": ob }) })
            }
        },
    }
}

fn validate(doc: &WorkbenchDocument, order: usize) -> Step {
    let mut blocks = serde_json::Map::new();
    let mut ok = true;
    let mut push = |name: &str, valid: bool, v: Value| {
        ok &= valid;
        blocks.insert(name.into(), json!({ "valid": valid, "report": v }));
    };
    let err = |InputError(e)| malformed(e);
    if doc.complex.is_some() {
        let r = validate_complex(&doc.complex().map_err(err)?);
        push("complex", r.is_valid(), to_value(&r));
    }
    if doc.d_family.is_some() {
        let r = doc.equivariant(order).map_err(err)?.validate();
        push("d_eq", r.is_valid(), to_value(&r));
    }
    if let (Some(l), Some(i)) = (doc.lambda_family().map_err(err)?, doc.iota_family().map_err(err)?) {
        let r = CartanData::new(doc.equivariant(order).map_err(err)?, l, i).validate();
        push("cartan", r.is_valid(), to_value(&r));
    }
    if doc.quantum_ring.is_some() {
        let r = doc.quantum_ring().map_err(err)?.validate();
        push("quantum_ring", r.passed(), to_value(&r));
    }
    if doc.z2_data.is_some() {
        let r = verify_relations(&doc.z2_data().map_err(err)?);
        push("z2_data", r.valid(), to_value(&r));
    }
    if doc.cone.is_some() {
        let (_, minus, _) = doc.cone().map_err(err)?;
        let r = validate_complex(&minus);
        push("cone.minus", r.is_valid(), to_value(&r));
    }
    Ok((pass_if(ok), Value::Object(blocks)))
}

fn cohomology(doc: &WorkbenchDocument) -> Step {
    let c = doc.complex().map_err(|InputError(e)| malformed(e))?;
    let v = validate_complex(&c);
    if !v.is_valid() {
        return Ok((Status::Fail, json!({ "validation": v })));
    }
    let rep = cohomology_over_novikov_field(&c).map_err(complex_outcome)?;
    let cert = verify_certificate(&c.d.to_frac(), &rep, c.setup);
    Ok((
        pass_if(cert.is_ok()),
        json!({
            "grading_modulus": rep.modulus,
            "table": rep.table(),
            "certificate": cert.err().unwrap_or_else(|| "kernel and image bases verified".into()),
        }),
    ))
}

fn u_decompose(doc: &WorkbenchDocument, order: usize) -> Step {
    let d = doc.equivariant(order).map_err(|InputError(e)| malformed(e))?;
    let rep = u_module_decomposition(&d.frame, &d.family, order).map_err(complex_outcome)?;
    if !rep.is_determined() {
        return Ok((Status::Undetermined, json!({ "decomposition": rep })));
    }
    let les = les_consistency(&d.frame, &rep).map_err(complex_outcome)?;
    let balanced = les.rows.iter().all(|r| r.balanced());
    Ok((pass_if(balanced), json!({ "decomposition": rep, "les": les, "les_balanced": balanced })))
}

fn cartan_verify(doc: &WorkbenchDocument, order: usize) -> Step {
    let d = doc.equivariant(order).map_err(|InputError(e)| malformed(e))?;
    let base = d.validate();
    if !base.is_valid() {
        return Ok((Status::Fail, json!({ "d_eq": base })));
    }
    let (lambda, lsrc) = lambda_for(doc, &d)?;
    let frame = d.frame.clone();
    let supplied = doc.iota_family().map_err(|InputError(e)| malformed(e))?;
    let (report, tests, iota_json, isrc) = match supplied {
        Some(iota) => {
            let data = CartanData::new(d.clone(), lambda, iota);
            let report = data.validate();
            let tests = if report.is_valid() { self_tests(&data, &test_scalars(&d, order))? } else { vec![] };
            (report, tests, family_json(&data.iota, &frame), "supplied")
        }
        None => {
            let (data, _, _) = field_data(doc, order)?;
            let report = data.validate();
            let tests = self_tests(&data, &test_scalars(&d, order))?;
            (report, tests, family_json(&data.iota, &frame), "solved")
        }
    };
    let ok = report.is_valid() && all_passed(&tests);
    Ok((
        pass_if(ok),
        json!({ "order": order, "lambda": lsrc, "iota": isrc, "relations": report, "self_tests": tests, "iota_eq": iota_json }),
    ))
}

fn cartan_solve(doc: &WorkbenchDocument, order: usize) -> Step {
    let (data, lsrc, _) = match field_data(&WorkbenchDocument { iota_family: None, ..doc.clone() }, order) {
        Ok(x) => x,
        Err(o) if o.status == Status::Fail => return Ok((Status::Fail, o.body)),
        Err(o) => return Err(o),
    };
    let frame = &data.base.frame;
    Ok((Status::Pass, json!({ "order": order, "lambda": lsrc, "verified_order": order, "iota_eq": family_json(&data.iota, frame) })))
}

fn cartan_connection(doc: &WorkbenchDocument, order: usize, which: Which) -> Step {
    let (data, lsrc, isrc) = field_data(doc, order)?;
    let conn = induced_on_cohomology(&data, which).map_err(cartan_outcome)?;
    let matrix: Vec<Vec<String>> = conn.matrix.iter().map(|row| row.iter().map(|c| c.to_string()).collect()).collect();
    let pure = conn.is_pure_derivation();
    let formula = if pure { which.derivation().to_string() } else { format!("{} + M", which.derivation()) };
    Ok((
        pass_if(conn.well_defined),
        json!({
            "which": which,
            "order": order,
            "lambda": lsrc,
            "iota": isrc,
            "connection": formula,
            "pure_derivation": pure,
            "degrees": conn.degrees,
            "matrix": matrix,
            "well_defined": conn.well_defined,
            "verified_order": conn.verified_order,
        }),
    ))
}

fn quantum_outcome(e: QuantumError) -> Outcome {
    let status = match &e {
        QuantumError::Inapplicable(_) => Status::Undetermined,
        _ => Status::Malformed,
    };
    Outcome { status, body: json!({ "error": e.to_string() }) }
}

fn quantum_check(doc: &WorkbenchDocument, order: usize, exponents: &[i64]) -> Step {
    let ring = doc.quantum_ring().map_err(|InputError(e)| malformed(e))?;
    let rep = ring.validate();
    let uq = if !ring.q_degree_two {
        json!({ "skipped": "the uq identity needs |q| = 2" })
    } else if ring.validate_axioms().iter().all(|c| c.passed) {
        let t = uq_identity_check(&ring, order, exponents).map_err(quantum_outcome)?;
        json!({ "passed": t.passed(), "checks": t.checks })
    } else {
        json!({ "skipped": "ring axioms fail" })
    };
    let ok = rep.passed() && uq.get("passed").map_or(true, |p| p == &Value::Bool(true));
    Ok((pass_if(ok), json!({ "ring": rep, "uq_identity": uq })))
}

fn summand_ring(src: &str) -> Result<SummandRing, Outcome> {
    let s = src.trim();
    if s == "Z" {
        return Ok(SummandRing::Integers);
    }
    s.strip_prefix('F')
        .and_then(|p| p.parse().ok())
        .map(SummandRing::PrimeField)
        .ok_or_else(|| malformed(format!("ring '{src}' is neither Z nor F<p>")))
}

fn quantum_obstruction(lambda: &str, d: u64, ring: &str) -> Step {
    let lambda: BigRational = lambda.trim().parse().map_err(|_| malformed(format!("lambda '{lambda}' is not a rational number")))?;
    let rep = forbidden_summand_check(&lambda, d, summand_ring(ring)?).map_err(quantum_outcome)?;
    Ok((Status::Pass, to_value(&rep)))
}

fn finite_verify(doc: &WorkbenchDocument) -> Step {
    let z = doc.z2_data().map_err(|InputError(e)| malformed(e))?;
    let r = verify_relations(&z);
    Ok((pass_if(r.valid()), to_value(&r)))
}

fn finite_assemble(doc: &WorkbenchDocument) -> Step {
    let z = doc.z2_data().map_err(|InputError(e)| malformed(e))?;
    match assemble_and_check(&z) {
        Ok(a) => {
            let frame = GradedComplex::new(
                crate::complexes::GradingKind::Mod2,
                z.basis.clone(),
                z.d.clone(),
                z.setup(),
                false,
            );
            Ok((
                pass_if(a.passed()),
                json!({
                    "d_eq": family_json(&a.d_eq, &frame),
                    "gamma_matrix": family_json(&a.gamma_matrix, &frame),
                    "gamma_derivation": "h^2 d/dq",
                    "d_eq_squared": a.d_eq_squared,
                    "gamma_commutes": a.gamma_commutes,
                }),
            ))
        }
        Err(FiniteError::RelationsFail(r)) => Ok((Status::Fail, json!({ "relations": r }))),
        Err(e) => Err(malformed(e.to_string())),
    }
}

fn cone(doc: &WorkbenchDocument) -> Step {
    let (plus, minus, c) = doc.cone().map_err(|InputError(e)| malformed(e))?;
    let rep = mapping_cone(&plus, &minus, &c).map_err(complex_outcome)?;
    let ok = rep.minus_check.is_quasi_isomorphism && rep.plus_check.is_quasi_isomorphism;
    let gens: Vec<Value> = rep.cone.basis.iter().map(|g| json!({ "name": g.name, "index": g.index })).collect();
    Ok((
        pass_if(ok),
        json!({
            "cone_generators": gens,
            "cone_differential": entries(&rep.cone.d, &rep.cone, &rep.cone),
            "projection_to_minus": rep.minus_check,
            "projection_to_plus": rep.plus_check,
        }),
    ))
}

fn morse(cmd: &MorseCommand) -> Step {
    let err = |e: crate::morse_cpn::MorseError| malformed(e.to_string());
    match cmd {
        MorseCommand::Alpha1 { grid } => {
            let w = alpha1_winding(*grid).map_err(err)?;
            Ok((pass_if(w.winding.abs() == 1 && w.unwrap_residual < 0.01), to_value(&w)))
        }
        MorseCommand::Additivity { delta } => {
            let r = additivity(delta).map_err(err)?;
            Ok((pass_if(r.monotone && r.finest_error < 1e-3), to_value(&r)))
        }
        MorseCommand::Weights => {
            let f = weight_matrix_facts();
            let ok = f.diagonal_trivial && f.boundary_map_is_diagonal && f.transition_det.abs() == 1;
            Ok((pass_if(ok), to_value(&f)))
        }
    }
}

fn with_doc(path: &std::path::Path, order: Option<usize>, f: impl FnOnce(&WorkbenchDocument, usize) -> Step) -> Result<(Status, Value, Option<Value>), Outcome> {
    let doc = load(path)?;
    let order = resolve_order(order, &doc)?;
    let (status, result) = f(&doc, order)?;
    Ok((status, result, Some(to_value(&doc))))
}

/// Runs one command. The report carries the command name, the status, the
/// result and, for document commands, the parsed input.
pub fn execute(cmd: &Command, order: Option<usize>) -> Outcome {
    let name = cmd.name();
    let r = match cmd {
        Command::Validate { doc } => with_doc(doc, order, validate),
        Command::Cohomology { doc } => with_doc(doc, order, |d, _| cohomology(d)),
        Command::UDecompose { doc } => with_doc(doc, order, u_decompose),
        Command::Cartan(CartanCommand::Verify { doc }) => with_doc(doc, order, cartan_verify),
        Command::Cartan(CartanCommand::SolveIota { doc }) => with_doc(doc, order, cartan_solve),
        Command::Cartan(CartanCommand::Connection { doc, which }) => with_doc(doc, order, |d, n| {
            cartan_connection(d, n, match which {
                WhichArg::Q => Which::Q,
                WhichArg::U => Which::U,
            })
        }),
        Command::Quantum(QuantumCommand::Check { doc, exponents }) => with_doc(doc, order, |d, n| quantum_check(d, n, exponents)),
        Command::Quantum(QuantumCommand::Obstruction { lambda, d, ring }) => {
            quantum_obstruction(lambda, *d, ring).map(|(s, v)| (s, v, None))
        }
        Command::Finite2(FiniteCommand::Verify { doc }) => with_doc(doc, order, |d, _| finite_verify(d)),
        Command::Finite2(FiniteCommand::Assemble { doc }) => with_doc(doc, order, |d, _| finite_assemble(d)),
        Command::Morse(m) => morse(m).map(|(s, v)| (s, v, None)),
        Command::Cone { doc } => with_doc(doc, order, |d, _| cone(d)),
    };
    let (status, mut body) = match r {
        Ok((status, result, input)) => {
            let mut body = json!({ "result": result });
            if let Some(input) = input {
                body["input"] = input;
            }
            (status, body)
        }
        Err(o) => (o.status, o.body),
    };
    let mut out = serde_json::Map::new();
    out.insert("command".into(), json!(name));
    out.insert("status".into(), json!(status.label()));
    if let Value::Object(m) = body.take() {
        out.extend(m);
    }
    Outcome { status, body: Value::Object(out) }
}
