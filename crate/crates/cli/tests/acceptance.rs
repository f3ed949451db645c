//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! quantities underneath. Exits nonzero when any criterion fails.

use std::path::PathBuf;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinretro::construction::{
    audit_printed, axes_from_gram, check_axis_dependence, check_constraints, compare_m4, construct_basis,
    dependence_coefficients, feasibility, linear_relations, m4_table, min_outcomes_lower_bound,
    postmeasurement_rank, symmetric_input, table_gram, tetrahedral_axes, two_qubit_table, AxisGram, Builtin,
    FindingKind, UnitaryParams,
};
use spinretro::network::{
    cu_decomposition_residual, emit_circuit, parse_circuit, singlet_network, vaa_network,
    verify_measurement_mapping, verify_preparation, Gate,
};
use spinretro::protocol::{run_trials, verify_protocol, RetrodictionProtocol, TrialConfig, DEFAULT_SEED};
use spinretro::state::{project_spin, spin_apply};
use spinretro::{Operator, Sign, StateVector, Tolerances, UnitAxis};

/// Outcome of one criterion: pass flag and the lines explaining it.
struct Verdict {
    pass: bool,
    notes: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict {
            pass: true,
            notes: Vec::new(),
        }
    }

    /// Records a sub-check; any failing sub-check fails the criterion.
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.pass &= ok;
        self.notes.push(format!("{} {}", if ok { "ok  " } else { "FAIL" }, what.into()));
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(format!("     {}", what.into()));
    }
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn full_success(p: &RetrodictionProtocol, v: &mut Verdict) {
    let s = run_trials(p, &TrialConfig::new(10_000, DEFAULT_SEED)).expect("trials run");
    v.check(
        s.successes == 10_000,
        format!("10000-trial simulation: success {}/{}", s.successes, s.trials),
    );
}

fn zero_violations(p: &RetrodictionProtocol, v: &mut Verdict) {
    let r = verify_protocol(p, &tol());
    v.check(
        r.violations.is_empty(),
        format!("verify_protocol at 1e-10: {} violation(s)", r.violations.len()),
    );
    for x in r.violations.iter().take(4) {
        v.note(format!("{x}"));
    }
}

fn vaa_protocol() -> Verdict {
    let mut v = Verdict::new();
    let p = Builtin::Vaa.protocol();
    zero_violations(&p, &mut v);
    full_success(&p, &mut v);
    let implied = Builtin::Vaa.implied().expect("implied table");
    if implied.table() == &p.table().negated() {
        v.note("the table the state and basis imply is the published table with every sign flipped");
    }
    v
}

fn singlet_protocol() -> Verdict {
    let mut v = Verdict::new();
    let p = Builtin::Singlet.protocol();
    zero_violations(&p, &mut v);
    full_success(&p, &mut v);
    // φ_j must be orthogonal to P_{-ε_j^(l)}(n_l)ψ for each l, and to none
    // of the states carrying the table's own sign.
    let mut worst = 0.0f64;
    let mut wrong = Vec::new();
    for (j, phi) in p.basis().iter().enumerate() {
        let mut zeros = 0;
        for (l, n) in p.axes().iter().enumerate() {
            let eps = p.table().rows()[j][l];
            let avoided = phi.inner(&project_spin(p.initial(), n, eps.flipped())).unwrap().norm();
            let kept = phi.inner(&project_spin(p.initial(), n, eps)).unwrap().norm();
            worst = worst.max(avoided);
            if avoided < 1e-12 && kept > 1e-12 {
                zeros += 1;
            }
        }
        if zeros != 3 {
            wrong.push(format!("φ{} meets {zeros} of 3", j + 1));
        }
    }
    v.check(
        wrong.is_empty(),
        format!("three orthogonality conditions per φ_j (largest forbidden overlap {worst:.3e})"),
    );
    for w in wrong {
        v.note(w);
    }
    let implied = Builtin::Singlet.implied().expect("implied table");
    let mut swapped = p.table().rows().to_vec();
    swapped.swap(2, 3);
    if implied.table().rows() == &swapped[..] {
        v.note("the implied table is the published one with rows λ3 and λ4 exchanged");
    }
    v
}

fn rank_argument() -> Verdict {
    let mut v = Verdict::new();
    let p = Builtin::Vaa.protocol();
    let r = postmeasurement_rank(p.initial(), p.axes(), 1e-10).expect("rank");
    v.check(r == 4, format!("six post-measurement states under x, y, z have rank {r}"));
    let rel = linear_relations(p.initial()).expect("relations");
    v.check(
        rel.projection_x.max(rel.projection_y) < 1e-12,
        format!("projection form: residuals {:.3e}, {:.3e}", rel.projection_x, rel.projection_y),
    );
    v.check(
        rel.scaled_x.max(rel.scaled_y) < 1e-12,
        format!("√2-scaled form: residuals {:.3e}, {:.3e}", rel.scaled_x, rel.scaled_y),
    );
    match min_outcomes_lower_bound(p.initial(), p.axes(), 1e-10) {
        Ok(lb) => {
            let all3 = lb.triple_ranks.iter().all(|(_, r)| *r == 3);
            v.check(
                lb.triple_ranks.len() == 8 && all3,
                format!(
                    "sign-triple ranks {:?}",
                    lb.triple_ranks.iter().map(|(_, r)| *r).collect::<Vec<_>>()
                ),
            );
        }
        Err(e) => v.check(false, format!("lower bound: {e}")),
    }
    v
}

fn four_axis_construction() -> Verdict {
    let mut v = Verdict::new();
    let b = vec![1.0 / 6f64.sqrt(); 6];
    let g = table_gram(&m4_table(), &b).expect("gram");
    let off = (0..4)
        .flat_map(|l| (0..4).filter(move |&k| k != l).map(move |k| (l, k)))
        .map(|(l, k)| (g[l][k] + 1.0 / 3.0).abs())
        .fold(0.0, f64::max);
    v.check(off < 1e-12, format!("Gram off-diagonals = -1/3 within {off:.3e}"));
    let axes = axes_from_gram(&AxisGram::new(g).expect("valid gram")).expect("factorization");
    let mut s = [0.0; 3];
    for a in &axes {
        for (acc, c) in s.iter_mut().zip(a.components()) {
            *acc += c;
        }
    }
    let sum = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.check(sum < 1e-10, format!("‖Σ n_l‖ = {sum:.3e}"));
    match construct_basis(&m4_table(), &b, &axes, &UnitaryParams::default(), &tol()) {
        Ok(r) => {
            let ortho = r.checks.get("constructed basis orthonormal").map(|c| c.residual).unwrap_or(f64::NAN);
            v.check(ortho < 1e-10, format!("constructed basis orthonormal within {ortho:.3e}"));
            let exp: Vec<f64> = r
                .checks
                .checks
                .iter()
                .filter(|c| c.name.starts_with("(1⊗σ·n"))
                .map(|c| c.residual)
                .collect();
            let worst = exp.iter().copied().fold(0.0, f64::max);
            v.check(
                exp.len() == 4 && worst < 1e-10,
                format!("{} spin-action expansions, worst {worst:.3e}", exp.len()),
            );
        }
        Err(e) => v.check(false, format!("construct_basis: {e}")),
    }
    match compare_m4(&UnitaryParams::default(), &tol()) {
        Ok(cmp) => {
            v.check(
                !cmp.diff.entries.is_empty(),
                format!("diff against the published basis: {} differing entries", cmp.diff.entries.len()),
            );
            let culprits: Vec<String> = cmp.culprits.iter().map(|j| format!("φ{}", j + 1)).collect();
            v.check(
                cmp.culprits == vec![5],
                format!("published orthonormality failures localized to {}", culprits.join(", ")),
            );
        }
        Err(e) => v.check(false, format!("comparison: {e}")),
    }
    v
}

fn constraint_suite() -> Verdict {
    let mut v = Verdict::new();
    let xyz = [UnitAxis::X, UnitAxis::Y, UnitAxis::Z];
    let cases = [
        ("two-qubit, b² = 1/4", two_qubit_table(), vec![0.5; 4], xyz.to_vec()),
        ("four-axis, b² = 1/6", m4_table(), vec![1.0 / 6f64.sqrt(); 6], tetrahedral_axes()),
    ];
    for (name, table, b, axes) in cases {
        let r = check_constraints(&table, &b, &axes, &tol()).expect("constraints");
        let worst = r.max_residual();
        v.check(r.passed() && worst < 1e-12, format!("{name}: worst residual {worst:.3e}"));
    }
    let c = dependence_coefficients(&tetrahedral_axes()).expect("dependence");
    let minus_ones = c[0].iter().all(|x| (x + 1.0).abs() < 1e-12);
    let holds = check_axis_dependence(&m4_table(), &c).map(|d| d.holds()).unwrap_or(false);
    v.check(minus_ones && holds, format!("n4 dependence c = {:?}, signs consistent: {holds}", c[0]));
    let five = symmetric_input(5);
    v.check(
        five.as_ref().err().is_some_and(|e| e.to_string().contains("no solutions exist")),
        "m = 5 reported infeasible",
    );
    let mut skew = tetrahedral_axes();
    skew[3] = UnitAxis::Z;
    v.check(!feasibility(&skew).feasible, "m = 4 axes with nonzero sum reported infeasible");
    v
}

fn networks() -> Verdict {
    let mut v = Verdict::new();
    let tol = tol();
    for b in [vaa_network(), singlet_network()] {
        let prep = verify_preparation(&b, &tol).expect("preparation");
        v.check(
            prep.overlap >= 1.0 - 1e-10,
            format!("{}: preparation overlap {:.15}", b.name, prep.overlap),
        );
        let map = verify_measurement_mapping(&b.measurement(), &b.basis(), Some(&b.expected_mapping), &tol)
            .expect("mapping");
        v.check(
            map.bijective() && map.passed(),
            format!("{}: measurement half maps the basis onto {:?}", b.name, map.permutation),
        );
    }
    let cu = cu_decomposition_residual();
    v.check(cu <= 1e-12, format!("CU decomposition entrywise residual {cu:.3e}"));
    v.check(
        Gate::Not { qubit: 0 }.matrix() == Operator::pauli_x(),
        "NOT equals σ_x exactly",
    );
    v
}

fn errata_audit() -> Verdict {
    let mut v = Verdict::new();
    let printed = Builtin::M3Nonorthogonal.printed();
    let b2: f64 = printed.printed_b.as_ref().expect("printed b").iter().map(|x| x * x).sum();
    let a = audit_printed(&printed, &tol()).expect("audit");
    let norm = a
        .findings
        .iter()
        .find(|f| f.kind == FindingKind::Constraint && f.location.starts_with("normalization"));
    v.check(
        norm.is_some_and(|f| (f.magnitude - (1.0 - b2)).abs() < 1e-12) && (b2 - 0.875).abs() < 1e-12,
        format!("b² sum {b2:.12} reported as a normalization finding"),
    );
    let dup = a.findings.iter().find(|f| f.kind == FindingKind::DuplicateRows);
    v.check(
        dup.is_some_and(|f| f.outcomes == vec![6, 7]),
        format!("duplicate rows: {}", dup.map(|f| f.location.clone()).unwrap_or_else(|| "none".into())),
    );
    let ortho = a.findings.iter().filter(|f| f.kind == FindingKind::Orthonormality).count();
    v.check(ortho > 0, format!("{ortho} orthonormality finding(s) for the published basis"));
    let residual = printed.protocol.measurement().orthonormality_residual();
    v.check(residual > 1e-10, format!("published basis kept as printed (orthonormality residual {residual:.3e})"));
    let out = Command::new(env!("CARGO_BIN_EXE_spinretro"))
        .args(["audit", "--builtin", "m3-nonorthogonal"])
        .output()
        .expect("binary runs");
    v.check(out.status.code() == Some(1), format!("`audit` exit code {:?}", out.status.code()));
    v
}

fn property_suites() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut completeness, mut eigen) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let dim_a = rng.gen_range(1..=4);
        let pairs: Vec<(f64, f64)> = (0..2 * dim_a)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let psi = StateVector::from_pairs(&pairs).unwrap().normalized();
        for _ in 0..10 {
            let n = UnitAxis::normalized([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                .unwrap();
            let up = project_spin(&psi, &n, Sign::Up);
            let down = project_spin(&psi, &n, Sign::Down);
            completeness = completeness.max((&up + &down).max_abs_diff(&psi).unwrap());
            completeness = completeness.max((up.norm_sqr() + down.norm_sqr() - 1.0).abs());
            for (eta, s) in [(1.0, &up), (-1.0, &down)] {
                eigen = eigen.max(spin_apply(s, &n).max_abs_diff(&s.scale_real(eta)).unwrap());
            }
        }
    }
    v.check(completeness < 1e-12, format!("100 states × 10 axes: completeness residual {completeness:.3e}"));
    v.check(eigen < 1e-12, format!("eigenvector residual {eigen:.3e}"));

    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "qc"))
        .collect();
    files.sort();
    let mut failures = Vec::new();
    for f in &files {
        let text = std::fs::read_to_string(f).unwrap();
        let ok = parse_circuit(&text).ok().is_some_and(|c| {
            let e = emit_circuit(&c);
            parse_circuit(&e).ok().as_ref() == Some(&c)
        });
        if !ok {
            failures.push(f.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    v.check(
        files.len() == 20 && failures.is_empty(),
        format!("parser round trip on {} corpus circuits ({} failures)", files.len(), failures.len()),
    );

    let args = ["--format", "records", "simulate", "--builtin", "singlet", "-n", "2000", "--seed", "9", "--trace"];
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_spinretro"))
            .args(args)
            .output()
            .expect("binary runs")
            .stdout
    };
    let (a, b) = (run(), run());
    v.check(a == b && !a.is_empty(), format!("fixed-seed reruns byte-identical ({} bytes)", a.len()));
    v
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("VAA protocol: zero violations, 10000/10000 successes", vaa_protocol),
        ("singlet protocol: zero violations, full success, orthogonality conditions", singlet_protocol),
        ("rank argument: rank 4, linear relations, sign-triple ranks", rank_argument),
        ("four-axis construction and comparison with the published basis", four_axis_construction),
        ("constraint suite and feasibility verdicts", constraint_suite),
        ("preparation and measurement networks", networks),
        ("errata audit of the eight-outcome protocol", errata_audit),
        ("property suites, parser corpus, determinism", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        println!("{} criterion {}: {name}", if v.pass { "PASS" } else { "FAIL" }, i + 1);
        for n in &v.notes {
            println!("    {n}");
        }
        if !v.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
