//! The verification suite: every exact invariant check, run in a fixed
//! order from one seed, collected into a JSON-serializable report.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dynamics::counterexample::{
    affine_identity_check, conjugation_cx, fibonacci_matrix_data, gamma_zero, region_audit, RegionCoefficients,
};
use crate::dynamics::diagonal::{diag_section, diagonal_check, fibonacci_chart_equivalence, inequality_audit};
use crate::dynamics::equidistribution::{equidistribution, System, DEFAULT_THRESHOLD};
use crate::dynamics::golden::{inv_phi4, inv_phi2, num, q};
use crate::dynamics::section::{exchange_check, sample_section_point, self_induction_sigma, SectionPoint};
use crate::dynamics::torus::{psi_identity_check, renormalization_check, strip_return_count};
use crate::factorization::{closed_form_matches, Eigen, EigenData, HeisenbergEndo};
use crate::freegroup::{broken_line, decompose, recompose, Endomorphism, Letter};
use crate::heisenberg::{canonicalize, dist, AlgebraVector, GroupPoint, LatticePoint};
use crate::sampling::{self, SampleRng};
use crate::scalar::{rat, QuadraticContext, QuadraticNumber, Rational, RealScalar};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Sample count for the exact pointwise checks.
    pub samples: usize,
    /// Sample count for the group-law checks.
    pub group_samples: usize,
    /// Iterates of the `Σ`-return.
    pub exchange_iterates: usize,
    pub broken_line_inversions: usize,
    pub broken_line_projection: usize,
    /// Iterate counts for the Weyl sums, tried in order; empty skips them.
    pub weyl_iterates: Vec<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            samples: 100,
            group_samples: 1000,
            exchange_iterates: 10_000,
            broken_line_inversions: 10_000,
            broken_line_projection: 100_000,
            weyl_iterates: vec![1_000_000, 10_000_000],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: Value,
    /// First failing case, or the whole details object when the check has
    /// no single witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub config: VerifyConfig,
    pub checks: Vec<Check>,
    pub failed: Vec<String>,
    pub passed: bool,
}

type CheckFn = fn(&VerifyConfig, &mut SampleRng) -> (bool, Value);

/// Names of all checks, in run order.
pub fn check_names() -> Vec<&'static str> {
    SUITE.iter().map(|(n, _)| *n).collect()
}

const SUITE: &[(&str, CheckFn)] = &[
    ("group.associativity", group_associativity),
    ("group.inverse", group_inverse),
    ("group.bch", group_bch),
    ("group.exp_log", group_exp_log),
    ("group.norm", group_norm),
    ("group.cosets", group_cosets),
    ("flows.commutation", flows_commutation),
    ("flows.central", flows_central),
    ("factor.tau_central_row", factor_tau_row),
    ("factor.closed_form", factor_closed_form),
    ("factor.homomorphism", factor_homomorphism),
    ("factor.central_scaling", factor_central_scaling),
    ("eigen.fibonacci_gamma", eigen_fibonacci_gamma),
    ("eigen.conjugation", eigen_conjugation),
    ("surface.quadric", surface_quadric),
    ("strip.return_counts", strip_return_counts),
    ("strip.renormalization", strip_renormalization),
    ("strip.psi", strip_psi),
    ("section.exchange", section_exchange),
    ("section.self_induction", section_self_induction),
    ("diagonal.return_map", diagonal_return_map),
    ("diagonal.inequalities", diagonal_inequalities),
    ("diagonal.chart_equivalence", diagonal_chart_equivalence),
    ("counterexample.affine_identity", counterexample_affine),
    ("counterexample.cx", counterexample_cx),
    ("counterexample.region_audit", counterexample_region_audit),
    ("equidistribution.skew_map", equidistribution_skew_map),
    ("equidistribution.nilflow", equidistribution_nilflow),
    ("broken_line.inversions", broken_line_inversions),
    ("broken_line.projection", broken_line_projection),
    ("decompose.roundtrip", decompose_roundtrip),
];

/// Per-check seed, so that selecting a subset does not shift the others.
fn check_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn run(config: &VerifyConfig) -> VerifyReport {
    run_selected(config, |_| true)
}

/// Runs the checks whose names satisfy `select`, keeping the suite order.
pub fn run_selected(config: &VerifyConfig, select: impl Fn(&str) -> bool) -> VerifyReport {
    let mut checks = Vec::new();
    for (i, (name, f)) in SUITE.iter().enumerate() {
        if !select(name) {
            continue;
        }
        let mut rng = sampling::rng(check_seed(config.seed, i));
        let (passed, details) = f(config, &mut rng);
        let witness = (!passed).then(|| match details.get("witness") {
            Some(w) if !w.is_null() => w.clone(),
            _ => details.clone(),
        });
        checks.push(Check {
            name: name.to_string(),
            passed,
            details,
            witness,
        });
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    VerifyReport {
        seed: config.seed,
        config: config.clone(),
        passed: failed.is_empty(),
        failed,
        checks,
    }
}

fn count_failures<T>(n: usize, mut sample: impl FnMut() -> T, mut ok: impl FnMut(&T) -> bool) -> (usize, Option<T>) {
    let mut failures = 0;
    let mut witness = None;
    for _ in 0..n {
        let s = sample();
        if !ok(&s) {
            failures += 1;
            if witness.is_none() {
                witness = Some(s);
            }
        }
    }
    (failures, witness)
}

fn simple(samples: usize, failures: usize, witness: Option<String>) -> (bool, Value) {
    (
        failures == 0,
        json!({ "samples": samples, "failures": failures, "witness": witness }),
    )
}

fn fmt_point<S: std::fmt::Display>(g: &GroupPoint<S>) -> String {
    format!("[{}, {}, {}]", g.x, g.y, g.z)
}

fn group_associativity(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.group_samples;
    let (f, w) = count_failures(
        n,
        || {
            (
                sampling::rational_point(rng, 5, 12),
                sampling::rational_point(rng, 5, 12),
                sampling::rational_point(rng, 5, 12),
            )
        },
        |(a, b, d)| a.mul(b).mul(d) == a.mul(&b.mul(d)),
    );
    simple(n, f, w.map(|t| fmt_point(&t.0)))
}

fn group_inverse(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.group_samples;
    let (f, w) = count_failures(
        n,
        || (sampling::rational_point(rng, 5, 12), sampling::rational(rng, 5, 12), sampling::rational(rng, 5, 12)),
        |(a, z1, z2)| {
            let zero = rat(0, 1);
            let c1 = GroupPoint::new(zero.clone(), zero.clone(), z1.clone());
            let c2 = GroupPoint::new(zero.clone(), zero, z2.clone());
            a.mul(&a.inv()).is_identity() && a.inv().mul(a).is_identity() && c1.commutator(&c2).is_identity()
        },
    );
    simple(n, f, w.map(|t| fmt_point(&t.0)))
}

fn group_bch(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.group_samples;
    let (f, w) = count_failures(
        n,
        || (sampling::rational_vector(rng, 5, 12), sampling::rational_vector(rng, 5, 12)),
        |(u, v)| u.add(v).exp().mul(&u.bracket(v).exp()) == u.exp().mul(&v.exp()),
    );
    simple(n, f, w.map(|t| format!("{:?}", t.0)))
}

fn group_exp_log(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.group_samples;
    let ctx = QuadraticContext::golden();
    let (f, w) = count_failures(
        n,
        || (sampling::rational_point(rng, 5, 12), sampling::quadratic_point(rng, &ctx, 3)),
        |(g, h)| g.log().exp() == *g && h.log().exp() == *h && g.log().exp().log() == g.log(),
    );
    simple(n, f, w.map(|t| fmt_point(&t.0)))
}

fn group_norm(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.group_samples;
    let mut triangle_failures = 0;
    let (f, w) = count_failures(
        n,
        || {
            (
                sampling::rational_point(rng, 5, 12),
                sampling::rational_point(rng, 5, 12),
                sampling::rational_point(rng, 5, 12),
            )
        },
        |(a, b, d)| {
            if dist(a, d) > dist(a, b) + dist(b, d) + 1e-9 {
                triangle_failures += 1;
            }
            a.norm4() == a.inv().norm4()
        },
    );
    let (_, mut v) = simple(n, f, w.map(|t| fmt_point(&t.0)));
    v["triangle_failures"] = json!(triangle_failures);
    (f == 0 && triangle_failures == 0, v)
}

fn group_cosets(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.group_samples;
    let ctx = QuadraticContext::golden();
    let (f, w) = count_failures(
        n,
        || {
            let g = sampling::quadratic_point(rng, &ctx, 4);
            let l = LatticePoint::new(
                sampling::rational(rng, 9, 1).to_integer(),
                sampling::rational(rng, 9, 1).to_integer(),
                sampling::rational(rng, 9, 1).to_integer(),
            );
            (g, l)
        },
        |(g, l)| {
            let a = canonicalize(g);
            a.rep == canonicalize(&g.mul_lattice(l)).rep && g.mul_lattice(&a.witness) == a.rep
        },
    );
    simple(n, f, w.map(|t| fmt_point(&t.0)))
}

/// `Φ′ˢ ∘ Φᵗ = Φᵗ ∘ Φ′ˢ ∘ Ψ^{Δ·t·s}` with `Δ = βα′ − β′α`.
fn flows_commutation(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.samples;
    let ctx = QuadraticContext::golden();
    let (f, w) = count_failures(
        n,
        || {
            let v = AlgebraVector::new(
                sampling::quadratic(rng, &ctx, 3, 10),
                sampling::quadratic(rng, &ctx, 3, 10),
                sampling::quadratic(rng, &ctx, 3, 10),
            );
            let vp = AlgebraVector::new(
                sampling::quadratic(rng, &ctx, 3, 10),
                sampling::quadratic(rng, &ctx, 3, 10),
                sampling::quadratic(rng, &ctx, 3, 10),
            );
            let t = sampling::quadratic(rng, &ctx, 3, 10);
            let s = sampling::quadratic(rng, &ctx, 3, 10);
            let g = sampling::quadratic_point(rng, &ctx, 3);
            (v, vp, t, s, g)
        },
        |(v, vp, t, s, g)| {
            let delta = v.beta.clone() * vp.alpha.clone() - vp.beta.clone() * v.alpha.clone();
            let lhs = vp.flow(s, &v.flow(t, g));
            let central = AlgebraVector::central(&t.clone());
            let rhs = v.flow(t, &vp.flow(s, &central.flow(&(delta * t.clone() * s.clone()), g)));
            lhs == rhs
        },
    );
    simple(n, f, w.map(|t| format!("t={}, s={}", t.2, t.3)))
}

fn flows_central(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.samples;
    let (f, w) = count_failures(
        n,
        || {
            (
                sampling::rational_vector(rng, 4, 10),
                sampling::rational(rng, 4, 10),
                sampling::rational(rng, 4, 10),
                sampling::rational_point(rng, 4, 10),
            )
        },
        |(v, t, s, g)| {
            let central = AlgebraVector::central(t);
            central.flow(s, &v.flow(t, g)) == v.flow(t, &central.flow(s, g))
        },
    );
    simple(n, f, w.map(|t| fmt_point(&t.3)))
}

fn factor_tau_row(_: &VerifyConfig, _: &mut SampleRng) -> (bool, Value) {
    // −z + x(x+1)/2 + xy
    let row = HeisenbergEndo::factor(&Endomorphism::fibonacci()).central_row();
    let expected = [
        ("z", Rational::from_integer((-1).into()), Rational::from_integer(row.z.into())),
        ("x^2", rat(1, 2), row.xx.clone()),
        ("x", rat(1, 2), row.x.clone()),
        ("xy", rat(1, 1), row.xy.clone()),
        ("y^2", rat(0, 1), row.yy.clone()),
        ("y", rat(0, 1), row.y.clone()),
    ];
    let ok = expected.iter().all(|(_, e, g)| e == g);
    let coeffs: Vec<Value> = expected
        .iter()
        .map(|(m, e, g)| json!({ "monomial": m, "expected": e.to_string(), "got": g.to_string() }))
        .collect();
    (ok, json!({ "coefficients": coeffs }))
}

fn factor_closed_form(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.samples.clamp(1, 50);
    let (f, w) = count_failures(
        n,
        || {
            let s = sampling::positive_substitution(rng, 6);
            let words: Vec<_> = (0..5).map(|_| sampling::word(rng, 8, false)).collect();
            (s, words)
        },
        |(s, words)| words.iter().all(|w| closed_form_matches(s, w)),
    );
    simple(n, f, w.map(|t| t.0.to_string()))
}

fn factor_homomorphism(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.samples;
    let (f, w) = count_failures(
        n,
        || (sampling::positive_substitution(rng, 3), sampling::positive_substitution(rng, 3)),
        |(s, r)| HeisenbergEndo::factor(&s.compose(r)) == HeisenbergEndo::factor(s).compose(&HeisenbergEndo::factor(r)),
    );
    simple(n, f, w.map(|t| format!("{} ∘ {}", t.0, t.1)))
}

fn factor_central_scaling(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.samples;
    let (f, w) = count_failures(
        n,
        || (sampling::positive_substitution(rng, 5), sampling::rational(rng, 20, 1).to_integer()),
        |(s, k)| {
            let l = HeisenbergEndo::factor(s);
            l.apply_lattice(&LatticePoint::new(0, 0, k.clone())) == LatticePoint::new(0, 0, k * l.det())
        },
    );
    simple(n, f, w.map(|t| t.0.to_string()))
}

fn eigen_fibonacci_gamma(_: &VerifyConfig, _: &mut SampleRng) -> (bool, Value) {
    let e = EigenData::oriented(&HeisenbergEndo::factor(&Endomorphism::fibonacci())).expect("Fibonacci");
    // γ′ for the eigenvector (1/φ², −1/φ)
    let ap = inv_phi2();
    let bp = -q("-1+l");
    let gp = crate::factorization::gamma_for(&e.endo, &ap, &bp, &e.lambda_conj).expect("λ′ ≠ det");
    let ok = e.gamma == q("l-3/2") && gp == q("1/2") && e.t_a == q("1/5+3/5*l") && e.t_b == q("2/5+1/5*l");
    (
        ok,
        json!({
            "gamma": e.gamma.to_string(),
            "gamma_prime_scaled": gp.to_string(),
            "t_a": e.t_a.to_string(),
            "t_b": e.t_b.to_string(),
        }),
    )
}

fn conjugation_failures(e: &EigenData, rng: &mut SampleRng, n: usize) -> usize {
    let ctx = e.context.clone();
    let mut failures = 0;
    for _ in 0..n {
        let t = sampling::quadratic(rng, &ctx, 3, 10);
        let g = sampling::quadratic_point(rng, &ctx, 3);
        if !e.conjugation_holds(Eigen::Expanding, &t, &g) || !e.conjugation_holds(Eigen::Contracting, &t, &g) {
            failures += 1;
        }
    }
    failures
}

fn eigen_conjugation(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let fib = EigenData::new(&HeisenbergEndo::factor(&Endomorphism::fibonacci())).expect("Fibonacci");
    let mut rows = vec![json!({ "endo": format!("{:?}", fib.endo), "failures": conjugation_failures(&fib, rng, c.samples) })];
    for _ in 0..10 {
        let (l, e) = sampling::oriented_automorphism(rng, 5);
        rows.push(json!({ "endo": format!("{l:?}"), "failures": conjugation_failures(&e, rng, c.samples) }));
    }
    let ok = rows.iter().all(|r| r["failures"] == 0);
    (ok, json!({ "samples_per_endo": c.samples, "endos": rows }))
}

fn surface_quadric(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let e = EigenData::oriented(&HeisenbergEndo::factor(&Endomorphism::fibonacci())).expect("Fibonacci");
    let quad = e.surface_quadric();
    let ctx = e.context.clone();
    let n = c.samples * 10;
    let mut surface_failures = 0;
    let mut invariance_failures = 0;
    for _ in 0..n {
        let t = sampling::quadratic(rng, &ctx, 3, 10);
        let s = sampling::quadratic(rng, &ctx, 3, 10);
        let g = e.surface_point(&t, &s);
        if quad.eval(&g.x, &g.y) != g.z {
            surface_failures += 1;
        }
        let image = e.endo.apply(&g);
        if image != e.surface_point(&(e.lambda.clone() * t), &(e.lambda_conj.clone() * s)) {
            invariance_failures += 1;
        }
    }
    (
        surface_failures == 0 && invariance_failures == 0 && quad.q_0.is_zero(),
        json!({ "samples": n, "surface_failures": surface_failures, "invariance_failures": invariance_failures }),
    )
}

fn strip_return_counts(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let ctx = QuadraticContext::golden();
    let b4 = inv_phi4();
    let b2 = inv_phi2();
    let mut failures = Vec::new();
    let eps = ctx.rational(rat(1, 1_000_000));
    let mut pts = vec![
        num(0),
        b4.clone(),
        b4.clone() - eps.clone(),
        b4.clone() + eps.clone(),
        b2.clone() - eps.clone(),
    ];
    for _ in 0..c.samples {
        pts.push(ctx.rational(sampling::unit_rational(rng, 1000)) * b2.clone());
    }
    for u in &pts {
        let expected = if u.lt(&b4) { 2 } else { 3 };
        let got = strip_return_count(u);
        if got != expected {
            failures.push(json!({ "u": u.to_string(), "expected": expected, "got": got }));
        }
    }
    (failures.is_empty(), json!({ "points": pts.len(), "failures": failures }))
}

fn strip_renormalization(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let ctx = QuadraticContext::golden();
    let mut triples = vec![(num(-1), num(-1), num(0)), (num(-1), num(-1), num(1))];
    while triples.len() < 5 {
        triples.push((
            ctx.rational(sampling::rational(rng, 2, 9)),
            ctx.rational(sampling::rational(rng, 2, 9)),
            ctx.rational(sampling::rational(rng, 2, 9)),
        ));
    }
    let reports: Vec<_> = triples
        .iter()
        .map(|(s, sp, th)| renormalization_check(s, sp, th, rng, c.samples))
        .collect();
    let ok = reports.iter().all(|r| r.passed);
    (ok, json!({ "triples": reports }))
}

/// Evaluates `ψ`; the value of the jump at `1/φ²` is reported against the
/// printed `−1`. The asserted facts are the endpoint values, integrality of
/// the jump and the coboundary identity with the corrected sign.
fn strip_psi(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let r = psi_identity_check(rng, c.samples);
    let ok = r.endpoints_equal_minus_inv_phi && r.jump_is_integer && r.corrected_identity_failures == 0;
    let mut v = serde_json::to_value(&r).expect("serializable");
    v["discrepancies"] = json!([
        format!("jump at 1/φ² is {} (printed value {})", r.jump_at_breakpoint, r.jump_expected),
        format!(
            "coboundary constant +1/(2φ³) fails on {} of {} points; −1/(2φ³) is used",
            r.printed_identity_failures, r.points
        ),
    ]);
    (ok, v)
}

fn fibonacci() -> EigenData {
    EigenData::oriented(&HeisenbergEndo::factor(&Endomorphism::fibonacci())).expect("Fibonacci")
}

fn section_exchange(c: &VerifyConfig, _: &mut SampleRng) -> (bool, Value) {
    let e = fibonacci();
    let start = SectionPoint { s: q("1/7"), zoff: q("-1/3") };
    let r = exchange_check(&e, &start, c.exchange_iterates, 97);
    (r.passed, serde_json::to_value(&r).expect("serializable"))
}

fn section_self_induction(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let mut reports = Vec::new();
    let e = fibonacci();
    let mut pts = vec![SectionPoint { s: q("0"), zoff: q("0") }];
    while pts.len() < c.samples {
        pts.push(sample_section_point(&e, rng));
    }
    reports.push(self_induction_sigma(&e, &pts));
    for _ in 0..5 {
        let (_, e) = sampling::oriented_automorphism(rng, 5);
        let pts: Vec<_> = (0..(c.samples / 5).max(1)).map(|_| sample_section_point(&e, rng)).collect();
        reports.push(self_induction_sigma(&e, &pts));
    }
    let ok = reports.iter().all(|r| r.passed);
    (ok, json!({ "reports": reports }))
}

fn diagonal_return_map(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let mut reports = vec![diagonal_check(&diag_section(&fibonacci()), rng, c.samples)];
    reports.push(diagonal_check(&diag_section(&fibonacci_matrix_data()), rng, c.samples));
    for _ in 0..3 {
        let (_, e) = sampling::oriented_automorphism(rng, 5);
        reports.push(diagonal_check(&diag_section(&e), rng, (c.samples / 5).max(1)));
    }
    let ok = reports.iter().all(|r| r.passed);
    (ok, json!({ "reports": reports }))
}

fn diagonal_inequalities(_: &VerifyConfig, _: &mut SampleRng) -> (bool, Value) {
    let a = inequality_audit(&fibonacci());
    (a.passed, serde_json::to_value(&a).expect("serializable"))
}

fn diagonal_chart_equivalence(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let r = fibonacci_chart_equivalence(rng, c.samples);
    (r.passed, serde_json::to_value(&r).expect("serializable"))
}

fn counterexample_affine(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let r = affine_identity_check(rng, c.samples);
    (r.passed, serde_json::to_value(&r).expect("serializable"))
}

fn counterexample_cx(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let e = fibonacci_matrix_data();
    let r = conjugation_cx(&e, &q("1/3"), rng, c.samples, 10);
    let g0 = gamma_zero(&e);
    let ok = r.passed && g0 == q("3/2-l");
    (ok, serde_json::to_value(&r).expect("serializable"))
}

/// Always passes once the report exists; the report states whether the
/// regions are invariant.
fn counterexample_region_audit(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let a = region_audit(&RegionCoefficients::default(), rng, c.samples * 2);
    (true, serde_json::to_value(&a).expect("serializable"))
}

fn weyl(system: System, c: &VerifyConfig) -> (bool, Value) {
    if c.weyl_iterates.is_empty() {
        return (true, json!({ "skipped": true }));
    }
    let r = equidistribution(system, &c.weyl_iterates, 3, DEFAULT_THRESHOLD);
    let worst: Vec<_> = {
        let mut s = r.sums[1..].to_vec();
        s.sort_by(|a, b| b.modulus.total_cmp(&a.modulus));
        s.truncate(5);
        s
    };
    (
        r.passed,
        json!({
            "iterates": r.iterates,
            "escalated_from": r.escalated_from,
            "threshold": r.threshold,
            "max_modulus": r.max_modulus,
            "largest": worst,
        }),
    )
}

fn equidistribution_skew_map(c: &VerifyConfig, _: &mut SampleRng) -> (bool, Value) {
    weyl(System::SkewMap, c)
}

fn equidistribution_nilflow(c: &VerifyConfig, _: &mut SampleRng) -> (bool, Value) {
    weyl(System::FibonacciNilflow, c)
}

fn broken_line_inversions(c: &VerifyConfig, _: &mut SampleRng) -> (bool, Value) {
    let n = c.broken_line_inversions;
    let w = Endomorphism::fibonacci().fixed_point_prefix(n).expect("Fibonacci is prolongable");
    let pts = broken_line(&w);
    // independent count: c_k = Σ_{j<k, u_j = b} #{i < j : u_i = a}
    let mut a_seen = 0i64;
    let mut inv = 0i64;
    let mut failures = 0;
    let mut witness = None;
    for (k, l) in w.letters().iter().enumerate() {
        match l {
            Letter::A => a_seen += 1,
            Letter::B => inv += a_seen,
            _ => {}
        }
        if pts[k + 1].c != inv {
            failures += 1;
            witness.get_or_insert(k + 1);
        }
    }
    (failures == 0, json!({ "k_max": n, "failures": failures, "witness": witness }))
}

fn broken_line_projection(c: &VerifyConfig, _: &mut SampleRng) -> (bool, Value) {
    let n = c.broken_line_projection;
    let w = Endomorphism::fibonacci().fixed_point_prefix(n).expect("Fibonacci is prolongable");
    let ctx = QuadraticContext::golden();
    let inv_phi = q("-1+l");
    let inv_phi2 = inv_phi2();
    let two = Rational::from_integer(2.into());
    let within = |v: QuadraticNumber| v.add_rational(&-two.clone()).signum() < 0 && v.add_rational(&two).signum() > 0;
    let (mut a, mut b) = (0i64, 0i64);
    let mut failures = 0;
    let mut witness = None;
    let (mut max_x, mut max_y) = (0f64, 0f64);
    for (k, l) in w.letters().iter().enumerate() {
        match l {
            Letter::A => a += 1,
            _ => b += 1,
        }
        let k = (k + 1) as i64;
        let px = ctx.integer(a) - inv_phi.clone() * ctx.integer(k);
        let py = ctx.integer(b) - inv_phi2.clone() * ctx.integer(k);
        max_x = max_x.max(px.to_f64().abs());
        max_y = max_y.max(py.to_f64().abs());
        if !(within(px) && within(py)) {
            failures += 1;
            witness.get_or_insert(k);
        }
    }
    (
        failures == 0,
        json!({ "k_max": n, "failures": failures, "witness": witness, "sup_x": max_x, "sup_y": max_y }),
    )
}

fn decompose_roundtrip(c: &VerifyConfig, rng: &mut SampleRng) -> (bool, Value) {
    let n = c.samples.clamp(1, 50);
    let mut errors = 0;
    let (f, w) = count_failures(
        n,
        || {
            let count = rng.gen_range(1..=10);
            recompose(&sampling::generator_word(rng, count))
        },
        |l| match decompose(l) {
            Ok(word) => recompose(&word) == *l,
            Err(_) => {
                errors += 1;
                false
            }
        },
    );
    let (ok, mut v) = simple(n, f, w.map(|l| format!("{l:?}")));
    v["errors"] = json!(errors);
    (ok, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyConfig {
        VerifyConfig {
            seed: 7,
            samples: 10,
            group_samples: 50,
            exchange_iterates: 200,
            broken_line_inversions: 500,
            broken_line_projection: 500,
            weyl_iterates: vec![100_000],
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names = check_names();
        let total = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), total);
    }

    #[test]
    fn quick_suite_passes() {
        let r = run_selected(&quick(), |n| !n.starts_with("equidistribution"));
        assert!(r.passed, "{:?}", r.failed);
    }

    #[test]
    fn deterministic() {
        let c = quick();
        let sel = |n: &str| n.starts_with("group") || n.starts_with("section");
        let a = serde_json::to_string(&run_selected(&c, sel)).unwrap();
        let b = serde_json::to_string(&run_selected(&c, sel)).unwrap();
        assert_eq!(a, b);
    }
}
