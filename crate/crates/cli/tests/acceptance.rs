//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each. Exits nonzero if
//! any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;

use common::*;
use hqis_core::access_audit::{hierarchy_report, persistency_check, Coalition};
use hqis_core::parallel::Execution;
use hqis_core::protocol::verify::{
    collapse_oracle, density_oracle, real_lambda_variant, run_suite, Suite,
};
use hqis_core::protocol::{
    build_chi, build_secret, compose_system, run_protocol, Agent, BellOutcome, OutcomeSource,
    Scenario, SecretSpec,
};
use hqis_core::rng::stream;
use hqis_core::sampling::sample_shots;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn haar(n: usize, seed: u64) -> Vec<SecretSpec> {
    SecretSpec::haar_batch(&mut stream(seed, 1), n)
}

fn check(cond: bool, what: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what)
    }
}

fn criterion_1() -> Outcome {
    let secrets = haar(128, 101);
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut diana_x = (0, 0);
    for suite in Suite::ALL {
        let r = run_suite(suite, &secrets, 1e-10).map_err(|e| e.to_string())?;
        check(
            r.ok(),
            format!(
                "{}: {}/{} first failure {:?}",
                suite.label(),
                r.passed,
                r.checked,
                r.first_failure
            ),
        )?;
        let per_secret = suite.branches_per_secret();
        match suite {
            Suite::DianaX { .. } => {
                diana_x.0 += per_secret;
                diana_x.1 += r.checked;
            }
            _ => {
                check(
                    per_secret == 16,
                    format!("{} has {per_secret} branches", suite.label()),
                )?;
                parts.push(format!("{} {}", suite.label(), r.checked));
            }
        }
    }
    check(
        diana_x.0 == 16,
        format!("Diana-X has {} branches", diana_x.0),
    )?;
    parts.push(format!("Diana-X {}", diana_x.1));
    let elapsed = t.elapsed();
    check(
        elapsed < Duration::from_secs(5),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "16 branches per receiver, 128 secrets, |1-F| <= 1e-10 ({}) in {:.2?}",
        parts.join(", "),
        elapsed
    ))
}

fn criterion_2() -> Outcome {
    let r = collapse_oracle(&haar(200, 102), 1e-10).map_err(|e| e.to_string())?;
    check(
        r.ok() && r.checked == 800,
        format!("{}/{} max {:e}", r.passed, r.checked, r.max_deviation),
    )?;
    Ok(format!(
        "{}/{} collapse states, max deviation {:.1e}",
        r.passed, r.checked, r.max_deviation
    ))
}

fn criterion_3() -> Outcome {
    let mut secrets = haar(88, 103);
    let real: Vec<SecretSpec> = secrets.iter().take(12).map(real_lambda_variant).collect();
    let n_real = real
        .iter()
        .filter(|s| s.lambda().is_some_and(|l| l.im == 0.0))
        .count();
    secrets.extend(real);
    check(n_real >= 10, format!("only {n_real} real-lambda secrets"))?;
    let r = density_oracle(&secrets, 1e-12).map_err(|e| e.to_string())?;
    check(
        r.ok(),
        format!("{}/{} max {:e}", r.passed, r.checked, r.max_deviation),
    )?;
    Ok(format!(
        "{} secrets ({n_real} real lambda), {}/{} reduced states, max entry error {:.1e}",
        secrets.len(),
        r.passed,
        r.checked,
        r.max_deviation
    ))
}

fn criterion_4() -> Outcome {
    let mut secrets = haar(100, 104);
    for l in [
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(-2.0, 0.5),
    ] {
        secrets.push(SecretSpec::from_lambda(l).map_err(|e| e.to_string())?);
    }
    let mut worst_bell: f64 = 0.0;
    let mut worst_joint: f64 = 0.0;
    for s in &secrets {
        let system = compose_system(&build_secret(s).unwrap(), &build_chi()).unwrap();
        for p in system
            .bell_probabilities('S', 'A')
            .map_err(|e| e.to_string())?
        {
            worst_bell = worst_bell.max((p - 0.25).abs());
        }
        for receiver in Agent::RECEIVERS {
            for bell in BellOutcome::ALL {
                for helpers in [[0, 0], [0, 1], [1, 0], [1, 1]] {
                    let t = run_protocol(
                        &Scenario::new(receiver),
                        s,
                        OutcomeSource::Forced { bell, helpers },
                    )
                    .map_err(|e| e.to_string())?;
                    // P(helpers | bell) = P(branch) / P(bell)
                    worst_joint = worst_joint.max((t.branch_probability * 4.0 - 0.25).abs());
                }
            }
        }
    }
    check(
        worst_bell <= 1e-12,
        format!("Bell probability off by {worst_bell:e}"),
    )?;
    check(
        worst_joint <= 1e-12,
        format!("Z-helper joint probability off by {worst_joint:e}"),
    )?;
    let r = sample_shots(100_000, 0, Execution::default()).map_err(|e| e.to_string())?;
    check(
        r.bell_p_value > 0.001,
        format!("Bell chi-square {} p {}", r.bell_chi_square, r.bell_p_value),
    )?;
    check(
        r.zz_p_value > 0.001,
        format!("Z chi-square {} p {}", r.zz_chi_square, r.zz_p_value),
    )?;
    check(
        r.x_anticorrelated == 0,
        format!("{} anticorrelated X shots", r.x_anticorrelated),
    )?;
    Ok(format!(
        "Bell and Z-helper probabilities exact to {:.1e}; 1e5 shots: Bell p = {:.3}, Z p = {:.3}, 0 anticorrelated X outcomes",
        worst_bell.max(worst_joint),
        r.bell_p_value,
        r.zz_p_value
    ))
}

fn criterion_5() -> Outcome {
    let mut runs = 0;
    for dropped in [Agent::Bob, Agent::Charlie] {
        let delivered = if dropped == Agent::Bob {
            Agent::Charlie
        } else {
            Agent::Bob
        };
        let r = run_suite(Suite::DianaX { delivered }, &haar(100, 105), 1e-10)
            .map_err(|e| e.to_string())?;
        check(r.ok(), format!("dropping {dropped}: {:?}", r.first_failure))?;
        runs += r.checked;
        let o = hqis([
            "run",
            "--receiver",
            "diana",
            "--basis-b",
            "x",
            "--basis-c",
            "x",
            "--drop",
            &dropped.name().to_lowercase(),
            "--shots",
            "200",
        ]);
        let text = stdout(&o);
        check(
            code(&o) == 0 && text.contains("min fidelity 1.000000000000, 0 below tolerance"),
            format!("hqis run dropping {dropped}: exit {} {text}", code(&o)),
        )?;
        runs += 200;
    }
    Ok(format!(
        "{runs} Diana runs with Bob or Charlie dropped, all fidelity 1 within 1e-10"
    ))
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let r = hierarchy_report(128, 0, Execution::default()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let f = |receiver: Agent, helpers: &[Agent]| -> f64 {
        let c = Coalition::new(receiver, helpers.iter().copied()).unwrap();
        r.get(&c).unwrap().best_avg_fidelity
    };
    use Agent::{Bob, Charlie, Diana};
    for (rc, hs) in [
        (Diana, vec![Bob]),
        (Diana, vec![Charlie]),
        (Bob, vec![Charlie, Diana]),
        (Charlie, vec![Bob, Diana]),
    ] {
        let v = f(rc, &hs);
        check(v >= 1.0 - 1e-6, format!("{rc} with {hs:?}: {v}"))?;
    }
    let mut ceiling: f64 = 0.0;
    for (rc, hs) in [
        (Bob, vec![Charlie]),
        (Bob, vec![Diana]),
        (Charlie, vec![Bob]),
        (Charlie, vec![Diana]),
        (Bob, vec![]),
        (Charlie, vec![]),
        (Diana, vec![]),
    ] {
        let v = f(rc, &hs);
        ceiling = ceiling.max(v);
        check(v <= 0.95, format!("{rc} with {hs:?}: {v}"))?;
    }
    let violations = r.violations();
    check(violations.is_empty(), violations.join("; "))?;
    check(
        elapsed < Duration::from_secs(60),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "authorized coalitions >= 1-1e-6, unauthorized ceiling {ceiling:.6} <= 0.95, monotone over 12 coalitions, {elapsed:.2?}"
    ))
}

fn criterion_7() -> Outcome {
    let r = persistency_check(24, 0).map_err(|e| e.to_string())?;
    check(
        r.chi_stays_entangled && r.chi.iter().all(|x| x.max_entropy > 0.5),
        format!("chi residual entropy fell to {}", r.chi_min_max_entropy),
    )?;
    check(
        r.ghz_disentangled,
        format!("GHZ residual entropy {:e}", r.ghz_max_entropy),
    )?;
    Ok(format!(
        "{} channel residuals (Z + 24 random bases per qubit) keep >= {:.6} bits; GHZ residuals max {:.1e} bits",
        r.chi.len(),
        r.chi_min_max_entropy,
        r.ghz_max_entropy
    ))
}

fn criterion_8() -> Outcome {
    let mut rows = 0;
    for (name, golden) in [
        ("bob", BOB_TABLE),
        ("diana-zz", DIANA_ZZ_TABLE),
        ("diana-x", DIANA_X_TABLE),
    ] {
        let o = hqis(["table", name]);
        let text = stdout(&o);
        check(
            code(&o) == 0 && text == golden,
            format!("table {name} differs:\n{text}"),
        )?;
        rows += golden.lines().count() - 2;
    }
    check(rows == 32, format!("{rows} rows"))?;
    Ok("bob (16 rows), diana-zz (8), diana-x (8) match the golden text exactly".into())
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases: [(&str, &[&str]); 3] = [
        ("verify", &["verify", "--seed", "17"]),
        ("audit", &["audit", "--seed", "17"]),
        ("sample", &["sample", "--seed", "17"]),
    ];
    let mut sizes = Vec::new();
    for (name, args) in cases {
        let (o1, a) = json_bytes(dir.path(), &format!("{name}-1.json"), args);
        let (o2, b) = json_bytes(dir.path(), &format!("{name}-2.json"), args);
        let mut seq_args = args.to_vec();
        seq_args.push("--sequential");
        let (_, c) = json_bytes(dir.path(), &format!("{name}-seq.json"), &seq_args);
        check(
            code(&o1) == 0 && code(&o2) == 0,
            format!("{name} exited {} / {}", code(&o1), code(&o2)),
        )?;
        check(
            !a.is_empty() && a == b,
            format!("{name} reports differ between runs"),
        )?;
        check(
            a == c,
            format!("{name} report differs between parallel and sequential"),
        )?;
        sizes.push(format!("{name} {} bytes", a.len()));
    }
    Ok(format!(
        "byte-identical JSON across runs and execution modes ({})",
        sizes.join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("exhaustive protocol correctness", criterion_1),
        ("collapse oracle", criterion_2),
        ("reduced density matrices", criterion_3),
        ("branch statistics", criterion_4),
        ("supervisor-loss robustness", criterion_5),
        ("hierarchy audit", criterion_6),
        ("persistency contrast", criterion_7),
        ("correction tables", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("[PASS] criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
