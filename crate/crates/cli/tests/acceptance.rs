//! Acceptance run. Each criterion prints one line; the process fails if any
//! criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use nilrenorm::dynamics::counterexample::{fibonacci_matrix_data, gamma_zero};
use nilrenorm::dynamics::golden::q;
use nilrenorm::verify::{self, VerifyConfig, VerifyReport};
use serde_json::Value;

const SEED: u64 = 20_240_601;

fn config() -> VerifyConfig {
    VerifyConfig {
        seed: SEED,
        samples: 100,
        group_samples: 1000,
        exchange_iterates: 10_000,
        broken_line_inversions: 10_000,
        broken_line_projection: 100_000,
        weyl_iterates: vec![1_000_000, 10_000_000],
    }
}

fn suite(names: &[&str]) -> VerifyReport {
    let report = verify::run_selected(&config(), |n| names.contains(&n));
    assert_eq!(report.checks.len(), names.len(), "unknown check name in {names:?}");
    report
}

/// `Ok(note)` on success, `Err(reason)` on failure.
type Outcome = Result<String, String>;

fn checks_pass(report: &VerifyReport) -> Outcome {
    if report.passed {
        return Ok(format!("{} checks", report.checks.len()));
    }
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} witness {}", c.name, c.witness.clone().unwrap_or(Value::Null)))
        .collect();
    Err(failed.join("; "))
}

fn details<'a>(report: &'a VerifyReport, name: &str) -> &'a Value {
    &report.checks.iter().find(|c| c.name == name).expect("check present").details
}

fn group_algebra() -> Outcome {
    checks_pass(&suite(&[
        "group.associativity",
        "group.inverse",
        "group.bch",
        "group.exp_log",
        "group.norm",
    ]))
}

fn flow_commutation() -> Outcome {
    checks_pass(&suite(&["flows.commutation", "flows.central"]))
}

fn factorization() -> Outcome {
    checks_pass(&suite(&[
        "factor.tau_central_row",
        "factor.closed_form",
        "factor.central_scaling",
        "factor.homomorphism",
    ]))
}

fn eigenflows() -> Outcome {
    let r = suite(&["eigen.fibonacci_gamma", "eigen.conjugation"]);
    let d = details(&r, "eigen.fibonacci_gamma");
    if d["gamma"] != "-3/2+l" || d["gamma_prime_scaled"] != "1/2" {
        return Err(format!("γ = {}, γ′ = {}", d["gamma"], d["gamma_prime_scaled"]));
    }
    let endos = details(&r, "eigen.conjugation")["endos"].as_array().map_or(0, |a| a.len());
    if endos != 11 {
        return Err(format!("{endos} endomorphisms checked"));
    }
    checks_pass(&r)
}

fn strip_induction() -> Outcome {
    let r = suite(&["strip.return_counts", "strip.renormalization", "strip.psi"]);
    let psi = details(&r, "strip.psi");
    let mut errors = Vec::new();
    if let Err(e) = checks_pass(&r) {
        errors.push(e);
    }
    if psi["psi_at_0"] != "1-l" || psi["psi_at_1"] != "1-l" {
        errors.push(format!("ψ(0) = {}, ψ(1) = {}", psi["psi_at_0"], psi["psi_at_1"]));
    }
    if psi["jump_at_breakpoint"] != "-1" {
        errors.push(format!(
            "jump of ψ at 1/φ² is {} (exact ψ⁺ − ψ⁻ = −1/φ³ + 2/φ = 1), required −1",
            psi["jump_at_breakpoint"]
        ));
    }
    if psi["corrected_identity_failures"] != 0 {
        errors.push(format!("coboundary failures {}", psi["corrected_identity_failures"]));
    }
    if errors.is_empty() {
        Ok("return counts, renormalization, ψ".into())
    } else {
        Err(errors.join("; "))
    }
}

fn section_pipeline() -> Outcome {
    let r = suite(&[
        "section.exchange",
        "section.self_induction",
        "diagonal.return_map",
        "diagonal.inequalities",
    ]);
    let iterates = &details(&r, "section.exchange")["iterates"];
    if iterates != 10_000 {
        return Err(format!("{iterates} iterates"));
    }
    checks_pass(&r)
}

fn chart_equivalence() -> Outcome {
    let r = suite(&["diagonal.chart_equivalence"]);
    let d = details(&r, "diagonal.chart_equivalence");
    if d["affine"] != true || d["points"] != 100 || d["mismatches"] != 0 {
        return Err(d.to_string());
    }
    checks_pass(&r).map(|_| {
        let s = |k: &str| d[k].as_str().unwrap_or("?").to_string();
        format!("affine H(X, W) = ({}·X + {}, {}·W + {}·X)", d["epsilon"], s("u0"), d["delta"], s("c1"))
    })
}

fn counterexample() -> Outcome {
    let r = suite(&[
        "counterexample.affine_identity",
        "counterexample.cx",
        "counterexample.region_audit",
    ]);
    let g0 = gamma_zero(&fibonacci_matrix_data());
    if g0 != q("3/2-l") {
        return Err(format!("γ₀ = {g0}"));
    }
    let audit = details(&r, "counterexample.region_audit");
    if audit["invariant"].is_null() {
        return Err("region audit missing".into());
    }
    checks_pass(&r).map(|_| format!("region audit: invariant = {}, witness {}", audit["invariant"], audit["witness"]))
}

fn equidistribution() -> Outcome {
    let r = suite(&["equidistribution.skew_map", "equidistribution.nilflow"]);
    let note = ["equidistribution.skew_map", "equidistribution.nilflow"]
        .iter()
        .map(|n| {
            let d = details(&r, n);
            format!("{n} max {} at N = {}", d["max_modulus"], d["iterates"])
        })
        .collect::<Vec<_>>()
        .join(", ");
    checks_pass(&r).map(|_| note.clone()).map_err(|e| format!("{e}; {note}"))
}

fn broken_line() -> Outcome {
    checks_pass(&suite(&["broken_line.inversions", "broken_line.projection"]))
}

fn decomposition() -> Outcome {
    let r = suite(&["decompose.roundtrip"]);
    if details(&r, "decompose.roundtrip")["samples"] != 50 {
        return Err("expected 50 automorphisms".into());
    }
    checks_pass(&r)
}

fn run_verify(out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_nilrenorm"))
        .args(["verify", "--seed", "11", "--out"])
        .arg(out)
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("verify exited with {status}"));
    }
    std::fs::read(out.join("verify.json")).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = run_verify(&dir.path().join("a"))?;
    let b = run_verify(&dir.path().join("b"))?;
    if a == b {
        Ok(format!("{} identical bytes", a.len()))
    } else {
        Err("reports differ".into())
    }
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Outcome); 12] = [
        ("group and algebra identities", Some(5), group_algebra),
        ("flow commutation with central correction", None, flow_commutation),
        ("factorization of substitutions", None, factorization),
        ("eigenflow constants and conjugation", Some(10), eigenflows),
        ("strip induction and ψ", None, strip_induction),
        ("section returns, self-induction, diagonal", Some(60), section_pipeline),
        ("diagonal chart vs golden skew map", None, chart_equivalence),
        ("affine identity, C_x, γ₀, region audit", None, counterexample),
        ("Weyl sums below 0.05", Some(120), equidistribution),
        ("broken line inversions and projection", None, broken_line),
        ("decompose after recompose", None, decomposition),
        ("verify reports are byte-identical", None, determinism),
    ];
    let mut failures = 0;
    for (i, (label, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > Duration::from_secs(*l) => {
                Err(format!("took {:.1}s, limit {l}s", elapsed.as_secs_f64()))
            }
            (o, _) => o,
        };
        let (tag, note) = match &outcome {
            Ok(n) => ("PASS", n.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        if outcome.is_err() {
            failures += 1;
        }
        println!("criterion {:>2} {tag} [{:.2}s] {label}: {note}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
