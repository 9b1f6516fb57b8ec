use std::sync::Arc;

use nilrenorm::dynamics::diagonal::{diag_section, diagonal_check, fibonacci_chart_equivalence, inequality_audit, golden_skew_map};
use nilrenorm::dynamics::equidistribution::{equidistribution, System, WeylReport};
use nilrenorm::dynamics::section::{replay, sample_section_point, self_induction_sigma, sigma_return, SectionPoint};
use nilrenorm::dynamics::torus::{renormalization_check, strip_family, strip_return_count, TorusPoint2};
use nilrenorm::factorization::{check_hypothesis_h, EigenData, HeisenbergEndo};
use nilrenorm::freegroup::{broken_line, decompose, Endomorphism};
use nilrenorm::heisenberg::{canonicalize, canonicalize_f64, AlgebraVector, GroupPoint};
use nilrenorm::sampling;
use nilrenorm::scalar::{QuadraticContext, QuadraticNumber};
use nilrenorm::verify;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, OrbitSystem, WeylSystems};
use crate::emit::{emit, emit_table, float, json_bytes, Table};
use crate::error::CliError;

fn substitution(cfg: &ExperimentConfig) -> Result<Endomorphism, CliError> {
    Endomorphism::parse(&cfg.substitution).map_err(|e| CliError::Parse(format!("substitution {:?}: {e}", cfg.substitution)))
}

fn eigen_data(cfg: &ExperimentConfig, oriented: bool) -> Result<EigenData, CliError> {
    let l = HeisenbergEndo::factor(&substitution(cfg)?);
    let report = check_hypothesis_h(&l);
    if !report.passed() {
        return Err(CliError::Hypothesis(report.failures.join("; ")));
    }
    let e = if oriented { EigenData::oriented(&l) } else { EigenData::new(&l) };
    e.map_err(|e| CliError::Hypothesis(e.to_string()))
}

fn scalar(text: &str, ctx: &Arc<QuadraticContext>) -> Result<QuadraticNumber, CliError> {
    QuadraticNumber::parse(text, ctx).map_err(|e| CliError::Parse(format!("scalar {text:?}: {e}")))
}

fn exact(x: &QuadraticNumber) -> Value {
    json!({ "exact": x.to_string(), "float": x.to_f64() })
}

fn start_coords(cfg: &ExperimentConfig, ctx: &Arc<QuadraticContext>, n: usize) -> Result<Vec<QuadraticNumber>, CliError> {
    let mut out = Vec::new();
    for i in 0..n {
        match cfg.orbit.start.get(i) {
            Some(t) => out.push(scalar(t, ctx)?),
            None => out.push(ctx.integer(0)),
        }
    }
    Ok(out)
}

fn meta(cfg: &ExperimentConfig, command: &str, extra: Value) -> Value {
    json!({ "command": command, "seed": cfg.seed, "config": cfg, "details": extra })
}

pub fn analyze(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let sigma = substitution(cfg)?;
    let l = HeisenbergEndo::factor(&sigma);
    let report = check_hypothesis_h(&l);
    let mut doc = json!({
        "seed": cfg.seed,
        "substitution": sigma.to_string(),
        "matrix": l.matrix(),
        "e": l.e,
        "f": l.f,
        "central_row": l.z_row(),
        "hypothesis": report,
    });
    if !report.passed() {
        if let Some(dir) = cfg.out.as_deref() {
            emit(Some(dir), "analyze.json", &json_bytes(&doc))?;
        }
        return Err(CliError::Hypothesis(report.failures.join("; ")));
    }
    let e = EigenData::new(&l).map_err(|e| CliError::Hypothesis(e.to_string()))?;
    let q = e.surface_quadric();
    let fields = [
        ("lambda", &e.lambda),
        ("lambda_conj", &e.lambda_conj),
        ("alpha", &e.alpha),
        ("beta", &e.beta),
        ("gamma", &e.gamma),
        ("alpha_p", &e.alpha_p),
        ("beta_p", &e.beta_p),
        ("gamma_p", &e.gamma_p),
        ("delta", &e.delta),
        ("t_a", &e.t_a),
        ("t_b", &e.t_b),
        ("s_a", &e.s_a),
        ("s_b", &e.s_b),
    ];
    for (k, v) in &fields {
        doc[*k] = exact(v);
    }
    doc["quadric"] = json!({
        "xx": exact(&q.q_xx), "yy": exact(&q.q_yy), "xy": exact(&q.q_xy),
        "x": exact(&q.q_x), "y": exact(&q.q_y), "const": exact(&q.q_0),
    });
    doc["orientation_issues"] = json!(e.orientation_issues());
    doc["decomposition"] = match decompose(&l) {
        Ok(w) => json!(w.iter().map(|g| g.to_string()).collect::<Vec<_>>()),
        Err(err) => json!({ "error": err.to_string() }),
    };
    if let Some(dir) = cfg.out.as_deref() {
        emit(Some(dir), "analyze.json", &json_bytes(&doc))?;
    }
    let mut text = format!(
        "substitution {}\nM = {:?}, e = {}, f = {}\nz-row: {}\n",
        sigma,
        l.matrix(),
        l.e,
        l.f,
        l.z_row()
    );
    for (k, v) in &fields {
        text.push_str(&format!("{k} = {v} ≈ {}\n", float(v.to_f64())));
    }
    text.push_str(&format!(
        "Q(x,y) = ({})x² + ({})y² + ({})xy + ({})x + ({})y + ({})\n",
        q.q_xx, q.q_yy, q.q_xy, q.q_x, q.q_y, q.q_0
    ));
    for issue in e.orientation_issues() {
        text.push_str(&format!("orientation: {issue}\n"));
    }
    print!("{text}");
    Ok(())
}

fn torus_row(t: &mut Table, k: usize, u: &QuadraticNumber, v: &QuadraticNumber) {
    t.push(
        vec![k.to_string(), float(u.to_f64()), float(v.to_f64())],
        json!({ "k": k, "u": u.to_ab_string(), "v": v.to_ab_string() }),
    );
}

fn group_row(t: &mut Table, k: usize, g: &GroupPoint<QuadraticNumber>) {
    t.push(
        vec![k.to_string(), float(g.x.to_f64()), float(g.y.to_f64()), float(g.z.to_f64())],
        json!({ "k": k, "x": g.x.to_ab_string(), "y": g.y.to_ab_string(), "z": g.z.to_ab_string() }),
    );
}

pub fn orbit(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let n = cfg.iters.unwrap_or(1000);
    let golden = QuadraticContext::golden();
    let table = match cfg.orbit.system {
        OrbitSystem::SkewMap | OrbitSystem::Strip => {
            let map = if cfg.orbit.system == OrbitSystem::SkewMap {
                golden_skew_map()
            } else {
                strip_family(&scalar(&cfg.induce.s, &golden)?, &scalar(&cfg.induce.theta, &golden)?)
            };
            let c = start_coords(cfg, &golden, 2)?;
            let mut p = TorusPoint2::new(c[0].clone(), c[1].clone());
            let mut t = Table::new(vec!["k", "u", "v"]);
            for k in 0..n {
                torus_row(&mut t, k, &p.u, &p.v);
                p = map.apply(&p).expect("maps are total on the torus");
            }
            t
        }
        OrbitSystem::Section => {
            let e = eigen_data(cfg, true)?;
            let c = start_coords(cfg, &e.context, 2)?;
            let mut p = SectionPoint { s: c[0].clone(), zoff: c[1].clone() };
            if !p.is_valid(&e) {
                return Err(CliError::Parse(format!("start ({}, {}) is not a section point", p.s, p.zoff)));
            }
            let mut t = Table::new(vec!["k", "u", "v"]);
            for k in 0..n {
                torus_row(&mut t, k, &p.s, &p.zoff);
                p = sigma_return(&e, &p).point;
            }
            t
        }
        OrbitSystem::Niltranslation => {
            let e = eigen_data(cfg, false)?;
            let c = start_coords(cfg, &e.context, 3)?;
            let step = e.flow(nilrenorm::factorization::Eigen::Expanding).exp();
            let mut g = canonicalize(&GroupPoint::new(c[0].clone(), c[1].clone(), c[2].clone())).rep;
            let mut t = Table::new(vec!["k", "x", "y", "z"]);
            for k in 0..n {
                group_row(&mut t, k, &g);
                g = canonicalize(&step.mul(&g)).rep;
            }
            t
        }
        OrbitSystem::Nilflow => {
            let e = eigen_data(cfg, false)?;
            let c = start_coords(cfg, &e.context, 3)?;
            let v = e.flow(nilrenorm::factorization::Eigen::Expanding);
            let v = AlgebraVector::new(v.alpha.to_f64(), v.beta.to_f64(), v.gamma.to_f64());
            let step = v.exp_t(&cfg.orbit.step);
            let mut g = canonicalize_f64(&GroupPoint::new(c[0].to_f64(), c[1].to_f64(), c[2].to_f64()));
            let mut t = Table::new(vec!["k", "x", "y", "z"]);
            for k in 0..n {
                t.push(
                    vec![k.to_string(), float(g.x), float(g.y), float(g.z)],
                    json!({ "k": k, "x": g.x, "y": g.y, "z": g.z }),
                );
                g = canonicalize_f64(&step.mul(&g));
            }
            t
        }
    };
    emit_table(cfg.out.as_deref(), "orbit", &table, cfg.format, &meta(cfg, "orbit", json!({ "iterates": n })))
}

pub fn broken_line_cmd(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let n = cfg.iters.unwrap_or(1000);
    let sigma = substitution(cfg)?;
    let w = sigma
        .fixed_point_prefix(n)
        .map_err(|e| CliError::Parse(format!("no fixed word for {sigma}: {e}")))?;
    let e = eigen_data(cfg, false)?;
    let mut t = Table::new(vec!["k", "a", "b", "c", "px", "py"]);
    for (k, p) in broken_line(&w).iter().enumerate() {
        let kk = e.context.integer(k as i64);
        let px = e.context.integer(p.a) - e.alpha.clone() * kk.clone();
        let py = e.context.integer(p.b) - e.beta.clone() * kk;
        t.push(
            vec![
                k.to_string(),
                p.a.to_string(),
                p.b.to_string(),
                p.c.to_string(),
                float(px.to_f64()),
                float(py.to_f64()),
            ],
            json!({ "k": k, "a": p.a, "b": p.b, "c": p.c, "px": px.to_ab_string(), "py": py.to_ab_string() }),
        );
    }
    emit_table(
        cfg.out.as_deref(),
        "broken_line",
        &t,
        cfg.format,
        &meta(cfg, "broken-line", json!({ "length": n, "alpha": e.alpha.to_string(), "beta": e.beta.to_string() })),
    )
}

pub fn induce(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let golden = QuadraticContext::golden();
    let samples = cfg.samples.unwrap_or(100);
    let iters = cfg.iters.unwrap_or(20);
    let mut rng = sampling::rng(cfg.seed);
    let s = scalar(&cfg.induce.s, &golden)?;
    let sp = scalar(&cfg.induce.s_prime, &golden)?;
    let th = scalar(&cfg.induce.theta, &golden)?;
    let renorm = renormalization_check(&s, &sp, &th, &mut rng, samples);

    let counts: Vec<Value> = (0..10)
        .map(|i| {
            let u = golden.rational(nilrenorm::scalar::rat(i, 10)) * (golden.integer(2) - golden.lambda());
            json!({ "u": u.to_string(), "return_count": strip_return_count(&u) })
        })
        .collect();

    let e = eigen_data(cfg, true)?;
    let mut p = SectionPoint { s: e.zero(), zoff: e.zero() };
    let mut returns = Vec::new();
    for k in 0..iters {
        let r = sigma_return(&e, &p);
        let replays = replay(&e, &p, &r) == r.point.to_group(&e);
        returns.push(json!({
            "k": k,
            "s": p.s.to_string(),
            "zoff": p.zoff.to_string(),
            "time": r.time.to_string(),
            "lattice_word": r.lattice_word.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "replays": replays,
        }));
        p = r.point;
    }
    let pts: Vec<_> = (0..samples).map(|_| sample_section_point(&e, &mut rng)).collect();
    let selfind = self_induction_sigma(&e, &pts);
    let diag = diagonal_check(&diag_section(&e), &mut rng, samples);
    let audit = inequality_audit(&e);
    let chart = fibonacci_chart_equivalence(&mut rng, samples);
    let passed = renorm.passed && selfind.passed && diag.passed && chart.passed;
    let doc = json!({
        "seed": cfg.seed,
        "substitution": cfg.substitution,
        "renormalization": renorm,
        "strip_return_counts": counts,
        "section_returns": returns,
        "self_induction": selfind,
        "diagonal": diag,
        "inequality_audit": audit,
        "chart_equivalence": chart,
        "passed": passed,
    });
    emit(cfg.out.as_deref(), "induce.json", &json_bytes(&doc))?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Verification("induce residuals are nonzero".into()))
    }
}

pub fn verify_cmd(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let mut vc = cfg.verify.clone();
    vc.seed = cfg.seed;
    if let Some(s) = cfg.samples {
        vc.samples = s;
    }
    if let Some(n) = cfg.iters {
        vc.exchange_iterates = n;
    }
    let report = verify::run(&vc);
    for c in &report.checks {
        eprintln!("{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
    }
    emit(cfg.out.as_deref(), "verify.json", &json_bytes(&report))?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Verification(report.failed.join(", ")))
    }
}

pub fn equidistribution_cmd(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let ec = &cfg.equidistribution;
    let mut counts = ec.iterates.clone();
    if let Some(n) = cfg.iters {
        counts = vec![n];
    }
    if counts.is_empty() {
        return Err(CliError::Parse("no iterate counts given".into()));
    }
    let systems: Vec<System> = match ec.system {
        WeylSystems::Both => vec![System::SkewMap, System::FibonacciNilflow],
        WeylSystems::SkewMap => vec![System::SkewMap],
        WeylSystems::Nilflow => vec![System::FibonacciNilflow],
    };
    let reports: Vec<WeylReport> = systems
        .iter()
        .map(|&s| equidistribution(s, &counts, ec.max_index, ec.threshold))
        .collect();
    let mut t = Table::new(vec!["system", "iterates", "p", "q", "modulus"]);
    for r in &reports {
        let name = match r.system {
            System::SkewMap => "skew-map",
            System::FibonacciNilflow => "nilflow",
        };
        for c in &r.sums {
            t.push(
                vec![name.into(), r.iterates.to_string(), c.p.to_string(), c.q.to_string(), float(c.modulus)],
                json!({ "system": name, "iterates": r.iterates, "p": c.p, "q": c.q, "modulus": c.modulus }),
            );
        }
    }
    let summary: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "system": r.system, "iterates": r.iterates, "escalated_from": r.escalated_from,
                "max_modulus": r.max_modulus, "threshold": r.threshold, "passed": r.passed,
            })
        })
        .collect();
    emit_table(
        cfg.out.as_deref(),
        "equidistribution",
        &t,
        cfg.format,
        &meta(cfg, "equidistribution", json!(summary)),
    )?;
    for s in &summary {
        eprintln!("{s}");
    }
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(CliError::Verification("Weyl sums above threshold".into()))
    }
}
