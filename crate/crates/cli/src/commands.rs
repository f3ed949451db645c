//! One function per subcommand. Each returns the process exit code or a
//! [`Failure`] carrying the message and code for `main` to report.

use std::path::Path;

use serde::Serialize;
use spinretro::construction::{
    audit_printed, check_axis_dependence, check_constraints, compare_m4, dependence_coefficients, feasibility,
    linear_relations, m4_family, m4_table, min_outcomes_lower_bound, parse_construction_input,
    postmeasurement_rank, symmetric_input, AuditReport, AxisGram, Builtin, ConstructionInput,
};
use spinretro::network::{
    check_preparation, cu_decomposition_residual, end_to_end, not_decomposition, parse_circuit,
    verify_measurement_mapping, verify_preparation, Circuit, Gate, NetworkBuiltin,
};
use spinretro::protocol::{
    emit_protocol, enumerate_outcomes, implied_table, parse_protocol, run_trials, verify_protocol,
    RetrodictionProtocol, TrialConfig,
};
use spinretro::report::{Check, Report};
use spinretro::{StateVector, Tolerances, UnitAxis};

use crate::output::Out;
use crate::{CircuitSource, ConstructArgs, Failure, ProtocolSource, Segment, TableChoice, TolArgs};

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn tolerances(args: TolArgs) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(t) = args.tol {
        tol.pipeline = t;
    }
    if let Some(f) = args.floor {
        tol.probability_floor = f;
        tol.warning_floor = tol.warning_floor.min(f);
    }
    tol
}

fn code(pass: bool) -> u8 {
    if pass {
        0
    } else {
        1
    }
}

/// Parse failures keep their line number in the message.
fn in_file(path: &Path, e: spinretro::Error) -> Failure {
    let mut f = Failure::from(e);
    f.message = format!("{}: {}", path.display(), f.message);
    f
}

fn builtin(name: &str) -> Result<Builtin, Failure> {
    Builtin::from_name(name).map_err(|e| Failure::usage(e.to_string()))
}

fn load_protocol(src: &ProtocolSource) -> Result<RetrodictionProtocol, Failure> {
    match (&src.path, &src.builtin) {
        (Some(path), None) => {
            let p = parse_protocol(&read(path)?).map_err(|e| in_file(path, e))?;
            match src.table {
                TableChoice::Printed => Ok(p),
                TableChoice::Implied => {
                    let t = implied_table(
                        p.initial(),
                        p.axes(),
                        p.measurement(),
                        Tolerances::default().probability_floor,
                    )?;
                    Ok(p.with_table(t)?)
                }
            }
        }
        (None, Some(name)) => {
            let b = builtin(name)?;
            match src.table {
                TableChoice::Printed => Ok(b.protocol()),
                TableChoice::Implied => Ok(b.implied()?),
            }
        }
        _ => Err(Failure::usage("give a protocol file or --builtin NAME")),
    }
}

fn report(out: &mut Out, r: &Report) {
    out.block(r);
    for c in &r.checks {
        out.record("check", &CheckRecord { report: &r.title, check: c });
    }
}

#[derive(Serialize)]
struct CheckRecord<'a> {
    report: &'a str,
    #[serde(flatten)]
    check: &'a Check,
}

fn audit_output(out: &mut Out, a: &AuditReport) {
    out.block(&a.checks);
    for c in &a.checks.checks {
        out.record("check", &CheckRecord { report: &a.checks.title, check: c });
    }
    out.line(format!("findings: {}", a.findings.len()));
    for f in &a.findings {
        out.line(format!("  {f}"));
        out.record("finding", &Tagged { protocol: &a.protocol, item: f });
    }
}

#[derive(Serialize)]
struct Tagged<'a, T: Serialize> {
    protocol: &'a str,
    #[serde(flatten)]
    item: &'a T,
}

pub fn verify(out: &mut Out, src: &ProtocolSource, tol: TolArgs) -> Outcome {
    let tol = tolerances(tol);
    let p = load_protocol(src)?;
    let r = verify_protocol(&p, &tol);
    out.line(format!("protocol {} (m = {}, K = {}, dim H_A = {})", p.name, p.m(), p.k(), p.dim_a()));
    report(out, &r.checks);
    out.line(format!("violations: {}", r.violations.len()));
    for v in &r.violations {
        out.line(format!("  {v}"));
        out.record("violation", &Tagged { protocol: &p.name, item: v });
    }
    if !r.warnings.is_empty() {
        out.line(format!("warnings: {}", r.warnings.len()));
    }
    for v in &r.warnings {
        out.line(format!("  {v}"));
        out.record("warning", &Tagged { protocol: &p.name, item: v });
    }
    let clean = r.is_clean();
    if let (Some(name), TableChoice::Printed, false) = (&src.builtin, src.table, clean) {
        let audit = audit_printed(&builtin(name)?.printed(), &tol)?;
        out.line("");
        out.line(format!("errata for the published {name} protocol:"));
        audit_output(out, &audit);
    }
    out.line(if clean { "result: clean" } else { "result: FAILED" });
    out.record(
        "summary",
        &serde_json::json!({
            "protocol": p.name,
            "violations": r.violations.len(),
            "warnings": r.warnings.len(),
            "checks_passed": r.checks.passed(),
            "clean": clean,
        }),
    );
    Ok(code(clean))
}

pub fn simulate(out: &mut Out, src: &ProtocolSource, trials: usize, seed: u64, sigmas: f64, trace: bool) -> Outcome {
    if !(sigmas.is_finite() && sigmas > 0.0) {
        return Err(Failure::usage("--sigmas must be positive"));
    }
    let p = if src.path.is_none() && src.builtin.is_none() {
        load_protocol(&ProtocolSource {
            path: None,
            builtin: Some(Builtin::Vaa.name().into()),
            table: src.table,
        })?
    } else {
        load_protocol(src)?
    };
    let mut config = TrialConfig::new(trials, seed);
    config.keep_records = trace;
    let stats = run_trials(&p, &config)?;
    let exact = enumerate_outcomes(&p);
    let cells = exact.compare(&stats, sigmas);
    let outside = cells.iter().filter(|c| !c.pass).count();

    out.line(format!("protocol {}  seed {}  trials {}", p.name, stats.seed, stats.trials));
    match stats.success_rate() {
        Some(rate) => out.line(format!("success {}/{} ({rate:.6})", stats.successes, stats.trials)),
        None => out.line("success 0/0 (no trials)"),
    }
    out.line("axis  chosen  successes  bob↑  bob↓");
    for a in &stats.per_axis {
        out.line(format!(
            "n{:<4} {:>6}  {:>9}  {:>4}  {:>4}",
            a.axis + 1,
            a.chosen,
            a.successes,
            a.bob_up,
            a.bob_down
        ));
        out.record("axis", a);
    }
    out.line(format!("alice outcomes: {:?}", stats.alice_counts));
    out.line(format!(
        "exact vs sampled: {} of {} cells outside {sigmas} sigma",
        outside,
        cells.len()
    ));
    for c in cells.iter().filter(|c| !c.pass) {
        out.line(format!(
            "  n{} {} λ{}: expected {:.2}, observed {}",
            c.axis + 1,
            c.eta.arrow(),
            c.outcome + 1,
            c.expected,
            c.observed
        ));
    }
    for c in &cells {
        out.record("cell", c);
    }
    if let Some(records) = &stats.records {
        for r in records {
            out.line(format!(
                "trial {:>6}: n{} bob {} alice λ{} answers {} {}",
                r.trial,
                r.chosen_axis + 1,
                r.bob_outcome.arrow(),
                r.alice_outcome + 1,
                r.retrodictions.iter().map(|s| s.arrow()).collect::<String>(),
                if r.correct { "ok" } else { "WRONG" }
            ));
            out.record("trial", r);
        }
    }
    out.record(
        "summary",
        &serde_json::json!({
            "protocol": p.name,
            "seed": stats.seed,
            "trials": stats.trials,
            "successes": stats.successes,
            "cells_outside": outside,
        }),
    );
    Ok(code(stats.successes == stats.trials))
}

fn load_circuit(src: &CircuitSource) -> Result<(String, Circuit), Failure> {
    match (&src.path, &src.builtin) {
        (Some(path), None) => {
            let c = parse_circuit(&read(path)?).map_err(|e| in_file(path, e))?;
            Ok((path.display().to_string(), c))
        }
        (None, Some(name)) => {
            let b = NetworkBuiltin::from_name(name).map_err(|e| Failure::usage(e.to_string()))?;
            Ok((name.clone(), b.binding().circuit))
        }
        _ => Err(Failure::usage("give a circuit file or --builtin NAME")),
    }
}

fn ket(index: usize, qubits: usize) -> String {
    format!("{index:0qubits$b}")
}

#[derive(Serialize)]
struct Amplitude {
    index: usize,
    ket: String,
    re: f64,
    im: f64,
    probability: f64,
}

pub fn circuit_run(out: &mut Out, src: &CircuitSource, input: Option<&str>, segment: Segment) -> Outcome {
    let (name, c) = load_circuit(src)?;
    let part = match segment {
        Segment::All => c.clone(),
        Segment::Prep => c.preparation(),
        Segment::Meas => c.measurement(),
    };
    let start = match input {
        Some(bits) => {
            if bits.len() != c.qubits() || !bits.chars().all(|ch| ch == '0' || ch == '1') {
                return Err(Failure::usage(format!(
                    "--input must be {} binary digits, got {bits:?}",
                    c.qubits()
                )));
            }
            StateVector::ket(bits)?
        }
        None => StateVector::basis(c.dim(), 0)?,
    };
    let state = part.apply(&start)?;
    out.line(format!("{name}: {} qubits, {} gates applied", c.qubits(), part.len()));
    for (i, a) in state.amplitudes().iter().enumerate() {
        let probability = a.norm_sqr();
        out.line(format!("|{}⟩  {:+.12} {:+.12}i  p = {:.12}", ket(i, c.qubits()), a.re, a.im, probability));
        out.record(
            "amplitude",
            &Amplitude {
                index: i,
                ket: ket(i, c.qubits()),
                re: a.re,
                im: a.im,
                probability,
            },
        );
    }
    Ok(0)
}

fn gate_identities(tol: &Tolerances) -> Report {
    let mut r = Report::new("gate identities");
    r.push(Check::new("CU from P, CP and CH", cu_decomposition_residual(), tol.exact));
    let not = Gate::Not { qubit: 0 }.matrix();
    r.push(Check::new(
        "NOT = H P(π) H",
        not.max_abs_diff(&not_decomposition()).expect("both 2x2"),
        tol.exact,
    ));
    r
}

fn protocol_by_name_or_path(arg: &str) -> Result<RetrodictionProtocol, Failure> {
    if let Ok(b) = Builtin::from_name(arg) {
        return Ok(b.protocol());
    }
    let path = Path::new(arg);
    parse_protocol(&read(path)?).map_err(|e| in_file(path, e))
}

pub fn circuit_check(out: &mut Out, src: &CircuitSource, protocol: Option<&str>, tol: TolArgs) -> Outcome {
    let tol = tolerances(tol);
    let (name, circuit, p, prep, mapping) = match (&src.builtin, protocol) {
        (Some(b), None) => {
            let binding = NetworkBuiltin::from_name(b).map_err(|e| Failure::usage(e.to_string()))?.binding();
            let p = binding.protocol.protocol();
            let prep = verify_preparation(&binding, &tol)?;
            let mapping = verify_measurement_mapping(
                &binding.measurement(),
                p.basis(),
                Some(&binding.expected_mapping),
                &tol,
            )?;
            (binding.name.clone(), binding.circuit.clone(), p, prep, mapping)
        }
        (Some(_), Some(_)) => {
            return Err(Failure::usage("builtin networks carry their own protocol; drop --protocol"))
        }
        (None, _) => {
            let (name, circuit) = load_circuit(src)?;
            let arg = protocol.ok_or_else(|| Failure::usage("a circuit file needs --protocol NAME|FILE"))?;
            let p = protocol_by_name_or_path(arg)?;
            if circuit.dim() != p.initial().dim() {
                return Err(Failure::usage(format!(
                    "circuit acts on dimension {} but the protocol on {}",
                    circuit.dim(),
                    p.initial().dim()
                )));
            }
            if circuit.bob().is_none() {
                return Err(Failure::usage("the circuit has no `bob` marker separating its halves"));
            }
            let prep = check_preparation(&circuit.preparation(), p.initial(), &tol)?;
            let mapping = verify_measurement_mapping(&circuit.measurement(), p.basis(), None, &tol)?;
            (name, circuit, p, prep, mapping)
        }
    };
    out.line(format!("{name} against protocol {}", p.name));
    report(out, &prep.checks);
    report(out, &mapping.checks);
    let mut pipeline = Report::new("end to end");
    if mapping.bijective() {
        let e2e = end_to_end(&circuit, &p, &tol)?;
        pipeline.push(Check::flag("pipeline reproduces the verifier", e2e.agree).with_detail(format!(
            "{} inconsistent cells via the circuit, {} via the verifier",
            e2e.circuit_violations.len(),
            e2e.protocol_violations.len()
        )));
    } else {
        pipeline.push(Check::flag("pipeline reproduces the verifier", false).with_detail("mapping not one-to-one"));
    }
    report(out, &pipeline);
    let identities = gate_identities(&tol);
    report(out, &identities);
    let pass = prep.passed() && mapping.passed() && pipeline.passed() && identities.passed();
    out.line(if pass { "result: ok" } else { "result: FAILED" });
    out.record("summary", &serde_json::json!({ "circuit": name, "protocol": p.name, "pass": pass }));
    Ok(code(pass))
}

fn construction_input(args: &ConstructArgs) -> Result<ConstructionInput, Failure> {
    let mut input = if let Some(path) = &args.input {
        parse_construction_input(&read(path)?).map_err(|e| in_file(path, e))?
    } else if let Some(m) = args.symmetric {
        symmetric_input(m)?
    } else if let (Some(b5), Some(b6)) = (args.b5, args.b6) {
        let fam = m4_family(b5, b6)?;
        let mut input = ConstructionInput::new(m4_table());
        input.name = format!("m4-b5={b5}-b6={b6}");
        input.gram = Some(fam.gram);
        input.coefficients = Some(fam.b);
        input
    } else if args.compare_paper.is_some() {
        symmetric_input(4)?
    } else {
        return Err(Failure::usage("give an input file, --symmetric M or --b5/--b6"));
    };
    if let Some(t) = &args.theta_plus {
        input.params.theta_plus = t.clone();
    }
    if let Some(t) = &args.theta_minus {
        input.params.theta_minus = t.clone();
    }
    if let Some(l) = args.lambda_plus {
        input.params.lambda_plus = l;
    }
    if let Some(l) = args.lambda_minus {
        input.params.lambda_minus = l;
    }
    Ok(input)
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:+.12}")).collect::<Vec<_>>().join(" ")
}

fn axis_string(n: &UnitAxis) -> String {
    fmt_vec(&n.components())
}

pub fn construct(out: &mut Out, args: &ConstructArgs) -> Outcome {
    let tol = tolerances(args.tol);
    if let Some(which) = &args.compare_paper {
        if which != "m4" {
            return Err(Failure::usage(format!("--compare-paper supports only m4, got {which:?}")));
        }
    }
    let input = construction_input(args)?;
    let result = input.run(&tol)?;
    let m = result.axes.len();

    out.line(format!("construction {} (m = {m}, K = {}, dim H_A = {})", input.name, result.table.k(), result.dim_a()));
    out.line(format!("b = {}", fmt_vec(&result.coefficients)));
    out.record("coefficients", &serde_json::json!({ "b": result.coefficients }));
    for (l, n) in result.axes.iter().enumerate() {
        out.line(format!("n{} = {}", l + 1, axis_string(n)));
        out.record("axis", &serde_json::json!({ "axis": l, "components": n.components() }));
    }
    let gram = AxisGram::from_axes(&result.axes);
    out.line("Gram matrix:");
    for row in gram.rows() {
        out.line(format!("  {}", fmt_vec(row)));
    }
    out.record("gram", &serde_json::json!({ "rows": gram.rows() }));
    let verdict = feasibility(&result.axes);
    out.line(format!("feasibility: {}", verdict.reason));
    out.record("feasibility", &verdict);

    let constraints = check_constraints(&result.table, &result.coefficients, &result.axes, &tol)?;
    report(out, &constraints.enforced);
    out.line(format!("  (unsquared balance, informational) {}", constraints.unsquared));
    out.record("check", &CheckRecord { report: "unsquared balance", check: &constraints.unsquared });
    let mut pass = constraints.passed();
    if m > 3 {
        let coeffs = dependence_coefficients(&result.axes)?;
        for (k, c) in coeffs.iter().enumerate() {
            out.line(format!("n{} = Σ c n_l with c = {}", k + 4, fmt_vec(c)));
        }
        let dep = check_axis_dependence(&result.table, &coeffs)?;
        report(out, &dep.checks);
        pass &= dep.holds();
    }
    report(out, &result.checks);
    pass &= result.checks.passed();

    out.line("basis:");
    for (j, phi) in result.basis.iter().enumerate() {
        out.line(format!("  φ{} = {phi}", j + 1));
        out.record("basis-vector", &amplitudes_record(j, phi));
    }
    out.line(format!("  ψ  = {}", result.initial));
    out.record("initial-state", &amplitudes_record(0, &result.initial));

    if args.compare_paper.is_some() {
        let cmp = compare_m4(&result.params, &tol)?;
        out.line("");
        out.line(format!(
            "published four-axis basis vs constructed: {} entries differ by more than {:.1e}",
            cmp.diff.entries.len(),
            tol.pipeline
        ));
        for e in &cmp.diff.entries {
            out.line(format!("  {e}"));
            out.record("basis-diff", e);
        }
        out.line(format!("  largest difference per vector: {}", fmt_vec(&cmp.diff.max_per_outcome)));
        out.line(format!(
            "  transition map: unitarity residual {:.3e}, commutator with σ_z {:.3e}",
            cmp.diff.unitarity, cmp.diff.spin_commutator
        ));
        let culprits: Vec<String> = cmp.culprits.iter().map(|j| format!("φ{}", j + 1)).collect();
        out.line(format!(
            "  published orthonormality failures all involve: {}",
            if culprits.is_empty() { "none".to_string() } else { culprits.join(", ") }
        ));
        out.record(
            "comparison",
            &serde_json::json!({
                "entries": cmp.diff.entries.len(),
                "max_per_outcome": cmp.diff.max_per_outcome,
                "unitarity": cmp.diff.unitarity,
                "spin_commutator": cmp.diff.spin_commutator,
                "culprits": cmp.culprits,
            }),
        );
        audit_output(out, &cmp.audit);
    }

    if let Some(path) = &args.emit_protocol {
        let p = result.protocol(input.name.clone())?;
        std::fs::write(path, emit_protocol(&p))
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
        out.line(format!("protocol written to {}", path.display()));
    }
    out.line(if pass { "result: ok" } else { "result: FAILED" });
    out.record("summary", &serde_json::json!({ "construction": input.name, "pass": pass }));
    Ok(code(pass))
}

#[derive(Serialize)]
struct AmplitudesRecord {
    index: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

fn amplitudes_record(index: usize, v: &StateVector) -> AmplitudesRecord {
    AmplitudesRecord {
        index,
        re: v.amplitudes().iter().map(|a| a.re).collect(),
        im: v.amplitudes().iter().map(|a| a.im).collect(),
    }
}

pub fn audit(out: &mut Out, name: Option<&str>, tol: TolArgs) -> Outcome {
    let tol = tolerances(tol);
    let targets = match name {
        Some(n) => vec![builtin(n)?],
        None => Builtin::ALL.to_vec(),
    };
    let mut findings = 0;
    for (i, b) in targets.iter().enumerate() {
        if i > 0 {
            out.line("");
        }
        let a = audit_printed(&b.printed(), &tol)?;
        audit_output(out, &a);
        findings += a.findings.len();
    }
    out.record("summary", &serde_json::json!({ "audited": targets.len(), "findings": findings }));
    Ok(code(findings == 0))
}

pub fn table(out: &mut Out, src: &ProtocolSource) -> Outcome {
    let p = load_protocol(src)?;
    out.block(p.table());
    for (j, row) in p.table().rows().iter().enumerate() {
        out.record(
            "row",
            &serde_json::json!({
                "outcome": j,
                "signs": row.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(0)
}

pub fn export(out: &mut Out, src: &ProtocolSource, dest: Option<&Path>) -> Outcome {
    let p = load_protocol(src)?;
    let text = emit_protocol(&p);
    match dest {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?,
        None => out.raw(text),
    }
    Ok(0)
}

pub fn rank(out: &mut Out, src: &ProtocolSource) -> Outcome {
    let tol = Tolerances::default();
    let p = load_protocol(src)?;
    let r = postmeasurement_rank(p.initial(), p.axes(), tol.pipeline)?;
    out.line(format!("{}: {} post-measurement states span dimension {r}", p.name, 2 * p.m()));
    out.record("rank", &serde_json::json!({ "protocol": p.name, "rank": r }));
    if p.m() == 3 {
        match min_outcomes_lower_bound(p.initial(), p.axes(), tol.pipeline) {
            Ok(lb) => {
                for (triple, rk) in &lb.triple_ranks {
                    let t: String = triple.iter().map(|s| s.arrow()).collect();
                    out.line(format!("  signs {t}: excluded states span {rk}"));
                }
                out.line(format!("Alice needs at least {} outcomes", lb.min_outcomes));
                out.record("lower-bound", &lb);
            }
            Err(e) => out.line(format!("lower bound not applicable: {e}")),
        }
    }
    let xyz = [UnitAxis::X, UnitAxis::Y, UnitAxis::Z];
    if p.initial().dim() == 4 && p.axes() == xyz {
        let rel = linear_relations(p.initial())?;
        out.line(format!(
            "P₋ψ = P₊(z)ψ + P₋(z)ψ - P₊ψ along x, y: residuals {:.3e}, {:.3e} (√2-scaled {:.3e}, {:.3e})",
            rel.projection_x, rel.projection_y, rel.scaled_x, rel.scaled_y
        ));
        out.record("linear-relations", &rel);
    }
    Ok(0)
}
