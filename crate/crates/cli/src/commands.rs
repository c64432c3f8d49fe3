//! Subcommand implementations. Each writes human-readable text to `out`,
//! optionally writes a JSON report, and returns whether its checks passed.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use hqis_core::access_audit::{hierarchy_report, persistency_check, HierarchyReport};
use hqis_core::parallel::Execution;
use hqis_core::protocol::verify::{
    collapse_oracle, density_oracle, real_lambda_variant, run_suite, Suite,
};
use hqis_core::protocol::{
    correction_bob, correction_diana_x, correction_diana_zz, run_protocol, Agent, BellOutcome,
    OutcomeSource, ProtocolTranscript, Scenario, SecretSpec,
};
use hqis_core::rng::{derive_seed, stream};
use hqis_core::sampling::{chi_square_uniform, sample_shots};

use crate::args::{Cli, Command, Common, RunArgs, TableKind};
use crate::error::CliError;
use crate::report::{
    AuditReport, RunConfig, RunReport, RunSummary, TableReport, TableRow, VerifyReport,
};

pub const VERIFY_DEFAULT_SECRETS: usize = 4;
pub const AUDIT_DEFAULT_SECRETS: usize = 128;
pub const MIN_SAMPLE_SHOTS: u64 = 1000;
/// Significance of the uniformity tests in `sample`.
pub const SAMPLE_SIGNIFICANCE: f64 = 0.001;
/// Haar-random bases per qubit in the persistency check run by `verify`.
pub const PERSISTENCY_BASES: usize = 20;
/// Runs with at most this many shots print one line per shot.
const SHOT_LINES: u64 = 10;

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    let c = &cli.common;
    if c.tolerance.is_nan() || c.tolerance < 0.0 {
        return Err(CliError::Usage(format!(
            "--tolerance must be non-negative, got {}",
            c.tolerance
        )));
    }
    match &cli.command {
        Command::Run(args) => cmd_run(c, args, out),
        Command::Verify => cmd_verify(c, out),
        Command::Table { which } => cmd_table(c, *which, out),
        Command::Audit => cmd_audit(c, out),
        Command::Sample { shots } => cmd_sample(c, *shots, out),
    }
}

fn execution(c: &Common) -> Execution {
    if c.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    if let Some(path) = path {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })?;
    }
    Ok(())
}

fn build_scenario(args: &RunArgs) -> Result<Scenario, CliError> {
    let mut s = Scenario::new(args.receiver.into());
    if let Some(b) = args.basis_b {
        s = s.with_basis(Agent::Bob, b.into())?;
    }
    if let Some(b) = args.basis_c {
        s = s.with_basis(Agent::Charlie, b.into())?;
    }
    for &d in &args.drop {
        s = s.with_dropped(d.into())?;
    }
    // reject before any work is done
    s.plan()?;
    Ok(s)
}

fn fixed_secret(args: &RunArgs) -> Result<Option<SecretSpec>, CliError> {
    match (args.lambda, args.alpha, args.beta) {
        (Some(l), _, _) => Ok(Some(SecretSpec::from_lambda(l)?)),
        (None, Some(a), Some(b)) => Ok(Some(SecretSpec::from_amplitudes(a, b)?)),
        _ => Ok(None),
    }
}

fn helper_summary(t: &ProtocolTranscript) -> String {
    t.helper_events
        .iter()
        .map(|e| {
            let mark = if e.delivered { "" } else { " (dropped)" };
            format!(
                "{}={}{mark}",
                e.agent.qubit(),
                e.basis.outcome_symbol(e.outcome)
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn cmd_run(c: &Common, args: &RunArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    if args.shots == 0 {
        return Err(CliError::Usage("--shots must be at least 1".into()));
    }
    let scenario = build_scenario(args)?;
    let secret = fixed_secret(args)?;
    let seed = c.seed;

    // shot k: outcomes from stream 2k, its Haar secret (if any) from 2k+1
    let results = execution(c).map_indexed(args.shots as usize, |k| {
        let k = k as u64;
        let s = secret.unwrap_or_else(|| SecretSpec::haar(&mut stream(seed, 2 * k + 1)));
        run_protocol(
            &scenario,
            &s,
            OutcomeSource::Seeded(derive_seed(seed, 2 * k)),
        )
    });
    let transcripts: Vec<ProtocolTranscript> = results.into_iter().collect::<Result<_, _>>()?;

    let mut histogram: BTreeMap<BellOutcome, u64> =
        BellOutcome::ALL.iter().map(|&b| (b, 0)).collect();
    for t in &transcripts {
        *histogram.entry(t.bell).or_default() += 1;
    }
    let counts: Vec<u64> = histogram.values().copied().collect();
    let fidelities = transcripts.iter().map(|t| t.fidelity);
    let summary = RunSummary {
        shots: args.shots,
        min_fidelity: fidelities.clone().fold(f64::INFINITY, f64::min),
        mean_fidelity: fidelities.clone().sum::<f64>() / args.shots as f64,
        failures: fidelities.filter(|f| (1.0 - f).abs() > c.tolerance).count() as u64,
        outcome_histogram: histogram,
        chi_square: chi_square_uniform(&counts).0,
    };

    let helpers: Vec<String> = scenario
        .helpers()
        .iter()
        .zip(scenario.bases())
        .zip(scenario.delivered())
        .map(|((a, b), d)| format!("{a} ({b}{})", if d { "" } else { ", dropped" }))
        .collect();
    writeln!(
        out,
        "receiver {}, helpers {}",
        scenario.receiver(),
        helpers.join(", ")
    )?;
    match &secret {
        Some(s) => writeln!(
            out,
            "secret alpha = {:.6}, beta = {:.6}",
            s.alpha(),
            s.beta()
        )?,
        None => writeln!(out, "secret Haar-random per shot")?,
    }
    if args.shots <= SHOT_LINES {
        for (k, t) in transcripts.iter().enumerate() {
            writeln!(
                out,
                "shot {k}: {}, {}, correction {}, fidelity {:.12}",
                t.bell,
                helper_summary(t),
                t.correction,
                t.fidelity
            )?;
        }
    }
    writeln!(
        out,
        "{} shots: mean fidelity {:.12}, min fidelity {:.12}, {} below tolerance",
        summary.shots, summary.mean_fidelity, summary.min_fidelity, summary.failures
    )?;
    let hist: Vec<String> = summary
        .outcome_histogram
        .iter()
        .map(|(b, n)| format!("{b} {n}"))
        .collect();
    writeln!(
        out,
        "Bell outcomes: {} (chi-square {:.3})",
        hist.join(", "),
        summary.chi_square
    )?;

    let passed = summary.failures == 0;
    let mut bases = BTreeMap::new();
    for (a, b) in scenario.helpers().into_iter().zip(scenario.bases()) {
        bases.insert(a, b);
    }
    let report = RunReport {
        config: RunConfig {
            receiver: scenario.receiver(),
            secret,
            bases,
            dropped: args.drop.iter().map(|&d| d.into()).collect(),
            seed,
            shots: args.shots,
            tolerance: c.tolerance,
        },
        transcripts,
        summary,
    };
    write_json(c.json.as_deref(), &report)?;
    Ok(passed)
}

pub fn verify_report(c: &Common) -> Result<VerifyReport, CliError> {
    let n = c.secrets.unwrap_or(VERIFY_DEFAULT_SECRETS);
    if n == 0 {
        return Err(CliError::Usage("--secrets must be at least 1".into()));
    }
    let secrets = SecretSpec::haar_batch(&mut stream(c.seed, 1), n);
    let suites = execution(c)
        .map_slice(&Suite::ALL, |&s| run_suite(s, &secrets, c.tolerance))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut with_real = secrets.clone();
    with_real.extend(secrets.iter().map(real_lambda_variant));
    let oracles = vec![
        collapse_oracle(&secrets, c.tolerance)?,
        density_oracle(&with_real, c.tolerance)?,
    ];
    let persistency = persistency_check(PERSISTENCY_BASES, c.seed)?;
    let passed = suites.iter().all(|s| s.ok())
        && oracles.iter().all(|o| o.ok())
        && persistency.chi_stays_entangled
        && persistency.ghz_disentangled;
    Ok(VerifyReport {
        tolerance: c.tolerance,
        n_secrets: n,
        seed: c.seed,
        suites,
        oracles,
        persistency,
        passed,
    })
}

pub fn cmd_verify(c: &Common, out: &mut dyn Write) -> Result<bool, CliError> {
    let r = verify_report(c)?;
    for s in &r.suites {
        let verdict = if s.ok() { "OK" } else { "FAIL" };
        writeln!(
            out,
            "{:<22} {:>5}/{:<5} {verdict:<4}  max |1-F| {:.1e}",
            s.suite.label(),
            s.passed,
            s.checked,
            s.max_deviation
        )?;
        if let Some(f) = &s.first_failure {
            let outs: Vec<String> = f.outcomes.iter().map(|o| o.to_string()).collect();
            writeln!(
                out,
                "  first failure: ({}, {}, {}) secret #{} fidelity {:.17}",
                f.receiver,
                f.bell,
                outs.join(""),
                f.secret_index,
                f.fidelity
            )?;
        }
    }
    for o in &r.oracles {
        let verdict = if o.ok() { "OK" } else { "FAIL" };
        writeln!(
            out,
            "{:<22} {:>5}/{:<5} {verdict:<4}  max deviation {:.1e}",
            format!("{} oracle", o.name),
            o.passed,
            o.checked,
            o.max_deviation
        )?;
    }
    let p = &r.persistency;
    writeln!(
        out,
        "{:<22} chi min residual entropy {:.6} ({}), GHZ max {:.1e} ({})",
        "persistency",
        p.chi_min_max_entropy,
        if p.chi_stays_entangled { "OK" } else { "FAIL" },
        p.ghz_max_entropy,
        if p.ghz_disentangled { "OK" } else { "FAIL" }
    )?;
    let short: Vec<String> = r
        .suites
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let name = match s.suite {
                Suite::DianaX { delivered } => format!("Diana-X ({})", delivered.qubit()),
                other => other.label().to_string(),
            };
            let tail = if i == 0 { " branches OK" } else { "" };
            format!("{}/{} {name}{tail}", s.passed, s.checked)
        })
        .collect();
    writeln!(out, "{}", short.join(", "))?;
    writeln!(
        out,
        "{}",
        if r.passed {
            "verify: PASS"
        } else {
            "verify: FAIL"
        }
    )?;
    write_json(c.json.as_deref(), &r)?;
    Ok(r.passed)
}

pub fn table_report(which: TableKind) -> TableReport {
    let mut rows = Vec::new();
    let (name, keys): (&str, Vec<(String, [u8; 2])>) = match which {
        TableKind::Bob => (
            "bob",
            [[0, 0], [0, 1], [1, 0], [1, 1]]
                .iter()
                .map(|o| (format!("{}{}", o[0], o[1]), *o))
                .collect(),
        ),
        TableKind::DianaZz => (
            "diana-zz",
            vec![("same".into(), [0, 0]), ("diff".into(), [0, 1])],
        ),
        TableKind::DianaX => ("diana-x", vec![("+".into(), [0, 0]), ("-".into(), [1, 1])]),
    };
    for bell in BellOutcome::ALL {
        for (key, o) in &keys {
            let correction = match which {
                TableKind::Bob => correction_bob(bell, o[0], o[1]),
                TableKind::DianaZz => correction_diana_zz(bell, o[0], o[1]),
                TableKind::DianaX => correction_diana_x(bell, o[0]),
            };
            rows.push(TableRow {
                bell,
                key: key.clone(),
                correction,
            });
        }
    }
    TableReport {
        table: name.into(),
        rows,
    }
}

pub fn render_table(t: &TableReport) -> String {
    let mut s = String::new();
    let header = match t.table.as_str() {
        "bob" => "# Bob's correction; C and D report Z outcomes\nbell  C D  correction",
        "diana-zz" => "# Diana's correction; B and C report Z outcomes\nbell  B,C   correction",
        _ => "# Diana's correction; one of B or C reports an X outcome\nbell  x  correction",
    };
    s.push_str(header);
    s.push('\n');
    for r in &t.rows {
        let key = match t.table.as_str() {
            "bob" => format!("{} {}  ", &r.key[..1], &r.key[1..]),
            "diana-zz" => format!("{:<6}", r.key),
            _ => format!("{}  ", r.key),
        };
        s.push_str(&format!("{:<6}{key}{}\n", r.bell.symbol(), r.correction));
    }
    s
}

pub fn cmd_table(c: &Common, which: TableKind, out: &mut dyn Write) -> Result<bool, CliError> {
    let t = table_report(which);
    out.write_all(render_table(&t).as_bytes())?;
    write_json(c.json.as_deref(), &t)?;
    Ok(true)
}

pub fn audit_report(c: &Common) -> Result<AuditReport, CliError> {
    let n = c.secrets.unwrap_or(AUDIT_DEFAULT_SECRETS);
    let hierarchy: HierarchyReport = hierarchy_report(n, c.seed, execution(c))?;
    let violations = hierarchy.violations();
    Ok(AuditReport {
        hierarchy,
        violations,
    })
}

pub fn cmd_audit(c: &Common, out: &mut dyn Write) -> Result<bool, CliError> {
    let r = audit_report(c)?;
    writeln!(
        out,
        "{} secrets, seed {}; rows ranked by best average fidelity",
        r.hierarchy.n_secrets, r.hierarchy.seed
    )?;
    writeln!(
        out,
        "rank  coalition          fidelity        bases      reconstructs"
    )?;
    for (i, a) in r.hierarchy.results.iter().enumerate() {
        let bases: Vec<String> = a
            .best_strategy
            .bases
            .iter()
            .map(|(agent, b)| format!("{}:{b}", agent.qubit()))
            .collect();
        let bases = if bases.is_empty() {
            "-".to_string()
        } else {
            bases.join(" ")
        };
        let expected = if HierarchyReport::expected_to_reconstruct(&a.coalition) {
            "yes"
        } else {
            "no"
        };
        writeln!(
            out,
            "{:>4}  {:<18} {:.12}  {bases:<10} {expected}",
            i + 1,
            a.coalition.to_string(),
            a.best_avg_fidelity
        )?;
    }
    if r.violations.is_empty() {
        writeln!(out, "access structure and monotonicity: OK")?;
    } else {
        for v in &r.violations {
            writeln!(out, "VIOLATION: {v}")?;
        }
    }
    write_json(c.json.as_deref(), &r)?;
    Ok(r.violations.is_empty())
}

pub fn cmd_sample(c: &Common, shots: u64, out: &mut dyn Write) -> Result<bool, CliError> {
    if shots < MIN_SAMPLE_SHOTS {
        return Err(CliError::Usage(format!(
            "--shots must be at least {MIN_SAMPLE_SHOTS}, got {shots}"
        )));
    }
    let r = sample_shots(shots, c.seed, execution(c))?;
    writeln!(out, "{} shots, seed {}", r.shots, r.seed)?;
    for (b, n) in &r.bell_counts {
        writeln!(
            out,
            "{:<6}{n:>10}  {:.5}",
            b.symbol(),
            r.bell_frequencies[b]
        )?;
    }
    writeln!(
        out,
        "Bell outcomes vs uniform: chi-square {:.4} (3 dof), p = {:.4}",
        r.bell_chi_square, r.bell_p_value
    )?;
    writeln!(
        out,
        "C,D Z outcomes vs uniform per Bell outcome: chi-square {:.4} (12 dof), p = {:.4}",
        r.zz_chi_square, r.zz_p_value
    )?;
    writeln!(
        out,
        "B,C X outcomes: {} equal, {} opposite",
        r.x_correlated, r.x_anticorrelated
    )?;
    let passed = r.x_anticorrelated == 0 && r.passes_uniformity(SAMPLE_SIGNIFICANCE);
    writeln!(
        out,
        "sample: {} (significance {SAMPLE_SIGNIFICANCE})",
        if passed { "PASS" } else { "FAIL" }
    )?;
    write_json(c.json.as_deref(), &r)?;
    Ok(passed)
}
