//! The skew map `T_φ`, its quadratic-boundary fundamental domain, and the
//! conjugation `C_x` by horizontal translations.

use serde::Serialize;

use super::golden::{inv_phi, inv_phi2, inv_phi3, num, phi, phi2, q};
use crate::factorization::{EigenData, HeisenbergEndo};
use crate::heisenberg::GroupPoint;
use crate::sampling::{self, SampleRng};
use crate::scalar::{rat, QuadraticContext, QuadraticNumber, Rational, RealScalar};

type Q = QuadraticNumber;
type Pt = (Q, Q);

/// `T_φ(x, y) = (x + 1/φ², y + x − 1/(2φ³))` on `ℝ²` (no reduction).
pub fn t_phi(p: &Pt) -> Pt {
    (
        p.0.clone() + inv_phi2(),
        p.1.clone() + p.0.clone() - inv_phi3().mul_rational(&rat(1, 2)),
    )
}

/// Coefficients of the boundary curves: `p(x) = p2·x² + p1·x + p0`,
/// `q = p + q1·x + q0`, `r = p + r1·x + r0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionCoefficients {
    pub p2: Q,
    pub p1: Q,
    pub p0: Q,
    pub q1: Q,
    pub q0: Q,
    pub r1: Q,
    pub r0: Q,
}

impl Default for RegionCoefficients {
    fn default() -> Self {
        RegionCoefficients {
            p2: phi2().mul_rational(&rat(1, 2)),
            p1: -phi().mul_rational(&rat(1, 2)),
            p0: -inv_phi(),
            q1: phi2(),
            q0: q("3/2"),
            r1: -phi2(),
            r0: num(1) + inv_phi3().mul_rational(&rat(1, 2)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    D1,
    D2,
    Outside,
}

impl RegionCoefficients {
    pub fn p(&self, x: &Q) -> Q {
        self.p2.clone() * x.clone() * x.clone() + self.p1.clone() * x.clone() + self.p0.clone()
    }

    /// Membership in `D₁`/`D₂` after the shear `ψ`, i.e. in terms of
    /// `w = y − p(x)`.
    pub fn classify_sheared(&self, x: &Q, w: &Q) -> Region {
        let one = num(1);
        if !(w.signum() > 0 && w.le(&one)) {
            return Region::Outside;
        }
        let q_rel = self.q1.clone() * x.clone() + self.q0.clone();
        let r_rel = self.r1.clone() * x.clone() + self.r0.clone();
        let r_low = r_rel.clone() - one;
        if r_low.lt(w) && w.le(&r_rel) {
            Region::D2
        } else if w.le(&q_rel) && w.le(&r_low) {
            Region::D1
        } else {
            Region::Outside
        }
    }

    pub fn classify(&self, p: &Pt) -> Region {
        let w = p.1.clone() - self.p(&p.0);
        self.classify_sheared(&p.0, &w)
    }

    /// `ψ(x, y) = (x, y − p(x))`.
    pub fn psi(&self, p: &Pt) -> Pt {
        (p.0.clone(), p.1.clone() - self.p(&p.0))
    }
}

/// `R = T_φ` on `D₁` and `T_φ − (1, 0)` on `D₂`.
pub fn r_map(c: &RegionCoefficients, p: &Pt) -> Option<Pt> {
    match c.classify(p) {
        Region::D1 => Some(t_phi(p)),
        Region::D2 => {
            let (x, y) = t_phi(p);
            Some((x - num(1), y))
        }
        Region::Outside => None,
    }
}

pub fn r1_prime(p: &Pt) -> Pt {
    (p.0.clone() + inv_phi2(), p.1.clone())
}

pub fn r2_prime(p: &Pt) -> Pt {
    (
        p.0.clone() + inv_phi2() - num(1),
        p.1.clone() + phi2() * p.0.clone() - inv_phi3().mul_rational(&rat(1, 2)),
    )
}

/// `R′` on the sheared domain `D′ = ψ(D)`.
pub fn r_prime(c: &RegionCoefficients, p: &Pt) -> Option<Pt> {
    match c.classify_sheared(&p.0, &p.1) {
        Region::D1 => Some(r1_prime(p)),
        Region::D2 => Some(r2_prime(p)),
        Region::Outside => None,
    }
}

/// `ψ̄ ∘ R′₁ⁿ ∘ R′₂ ∘ ψ̄⁻¹` with `ψ̄(x, y) = (φ²x, y)`.
pub fn induced_chain(n: u32, p: &Pt) -> Pt {
    let mut cur = (p.0.clone() * inv_phi2(), p.1.clone());
    cur = r2_prime(&cur);
    for _ in 0..n {
        cur = r1_prime(&cur);
    }
    (phi2() * cur.0, cur.1)
}

#[derive(Clone, Debug, Serialize)]
pub struct AffineIdentityReport {
    pub points: usize,
    pub failures_by_n: [usize; 4],
    pub witness: Option<String>,
    pub passed: bool,
}

/// `ψ̄ ∘ R′₁ⁿ ∘ R′₂ ∘ ψ̄⁻¹ = T_φ + (n − 2, 0)` for `n ∈ {0, 1, 2, 3}`.
pub fn affine_identity_check(rng: &mut SampleRng, points: usize) -> AffineIdentityReport {
    let ctx = QuadraticContext::golden();
    let mut failures = [0usize; 4];
    let mut witness = None;
    for _ in 0..points {
        let p = (sampling::quadratic(rng, &ctx, 2, 40), sampling::quadratic(rng, &ctx, 2, 40));
        for n in 0..4u32 {
            let lhs = induced_chain(n, &p);
            let t = t_phi(&p);
            let rhs = (t.0 + num(n as i64 - 2), t.1);
            if lhs != rhs {
                failures[n as usize] += 1;
                witness.get_or_insert_with(|| format!("n={n} at ({}, {})", p.0, p.1));
            }
        }
    }
    AffineIdentityReport {
        points,
        failures_by_n: failures,
        witness,
        passed: failures.iter().all(|&f| f == 0),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionAudit {
    pub samples: usize,
    pub in_d1: usize,
    pub in_d2: usize,
    /// `R(x) ∉ D` for these samples.
    pub r_escapes: usize,
    /// `ψ ∘ R ≠ R′ ∘ ψ` on these samples.
    pub shear_mismatches: usize,
    pub d2_prime_samples: usize,
    /// Return counts `n` of `R′` into `D₂′`, indexed by `n`; index 4 counts
    /// `n ≥ 4`.
    pub return_counts: [usize; 5],
    /// Orbits that left `D′` before returning.
    pub r_prime_escapes: usize,
    pub witness: Option<String>,
    pub invariant: bool,
}

/// Reports on whether `R` preserves `D` and whether the first return of
/// `R′` to `D₂′` has the form `R′₁ⁿ ∘ R′₂` with `n ≤ 3`. Nothing here is
/// asserted; the literal coefficients are expected to fail.
pub fn region_audit(c: &RegionCoefficients, rng: &mut SampleRng, samples: usize) -> RegionAudit {
    let ctx = QuadraticContext::golden();
    let mut audit = RegionAudit {
        samples: 0,
        in_d1: 0,
        in_d2: 0,
        r_escapes: 0,
        shear_mismatches: 0,
        d2_prime_samples: 0,
        return_counts: [0; 5],
        r_prime_escapes: 0,
        witness: None,
        invariant: false,
    };
    let origin = (q("0"), q("0"));
    let mut points = vec![origin];
    while points.len() < samples {
        // x ∈ [−1, 1), w ∈ (0, 1]
        let x = sampling::quadratic(rng, &ctx, 1, 40).frac() * num(2) - num(1);
        let w = num(1) - sampling::quadratic(rng, &ctx, 1, 40).frac();
        let y = w + c.p(&x);
        if c.classify(&(x.clone(), y.clone())) != Region::Outside {
            points.push((x, y));
        }
    }
    for p in &points {
        let region = c.classify(p);
        match region {
            Region::D1 => audit.in_d1 += 1,
            Region::D2 => audit.in_d2 += 1,
            Region::Outside => continue,
        }
        audit.samples += 1;
        let image = r_map(c, p).expect("p is in D");
        if c.classify(&image) == Region::Outside {
            audit.r_escapes += 1;
            audit
                .witness
                .get_or_insert_with(|| format!("R({}, {}) = ({}, {}) leaves D", p.0, p.1, image.0, image.1));
        }
        let lhs = c.psi(&image);
        let rhs = r_prime(c, &c.psi(p));
        if rhs.as_ref() != Some(&lhs) {
            audit.shear_mismatches += 1;
        }
        if region == Region::D2 {
            audit.d2_prime_samples += 1;
            let mut cur = r2_prime(&c.psi(p));
            let mut n = 0usize;
            loop {
                match c.classify_sheared(&cur.0, &cur.1) {
                    Region::D2 => {
                        audit.return_counts[n.min(4)] += 1;
                        break;
                    }
                    Region::D1 if n < 16 => {
                        cur = r1_prime(&cur);
                        n += 1;
                    }
                    _ => {
                        audit.r_prime_escapes += 1;
                        break;
                    }
                }
            }
        }
    }
    audit.invariant = audit.r_escapes == 0
        && audit.shear_mismatches == 0
        && audit.r_prime_escapes == 0
        && audit.return_counts[4] == 0;
    audit
}

/// `γ₀ = −(α·A·C + β·B·D) / (2λ − 2 det M)`.
pub fn gamma_zero(e: &EigenData) -> Q {
    let l = &e.endo;
    let ac = Rational::from_integer((l.m_aa * l.m_ba).into());
    let bd = Rational::from_integer((l.m_ab * l.m_bb).into());
    let num_ = e.alpha.mul_rational(&ac) + e.beta.mul_rational(&bd);
    let den = (e.lambda.clone() - e.context.integer(l.det())).mul_rational(&rat(2, 1));
    -(num_ / den)
}

/// Value of `γ` attached to the central corrections `(n, m)`.
pub fn gamma_grid_value(e: &EigenData, n: i64, m: i64) -> Q {
    let l = &e.endo;
    let d = e.lambda.clone() - e.context.integer(l.det());
    let ca = Rational::from_integer(n.into()) - rat(l.m_aa * l.m_ba, 2);
    let cb = Rational::from_integer(m.into()) - rat(l.m_ab * l.m_bb, 2);
    (e.alpha.mul_rational(&ca) + e.beta.mul_rational(&cb)) / d
}

/// `C_x(g)`-conjugation: `[x, 0, 0] • g = g(x) • [x, 0, 0]`, where `g(x)`
/// adds `β·x` to the central coordinate of `g = [α, β, ·]`.
pub fn cx_identity_holds<S: crate::scalar::Scalar>(x: &S, g: &GroupPoint<S>) -> bool {
    let zero = x.zero_like();
    let cx = GroupPoint::new(x.clone(), zero.clone(), zero);
    let gx = GroupPoint::new(g.x.clone(), g.y.clone(), g.z.clone() + g.y.clone() * x.clone());
    cx.mul(g) == gx.mul(&cx)
}

#[derive(Clone, Debug, Serialize)]
pub struct CxReport {
    pub samples: usize,
    pub failures: usize,
    pub gamma_zero: String,
    pub x0: String,
    /// Grid pairs `(n, m)`, `|n|, |m| ≤ bound`, at which `γ + β·x0` hits the grid.
    pub resonances: Vec<(i64, i64)>,
    pub grid_bound: i64,
    pub passed: bool,
}

/// Exact `C_x` identity on random rational `(x, g)`, `γ₀`, and the
/// non-resonance of `x0` on the grid `|n|, |m| ≤ bound`.
pub fn conjugation_cx(
    e: &EigenData,
    x0: &Q,
    rng: &mut SampleRng,
    samples: usize,
    bound: i64,
) -> CxReport {
    let mut failures = 0;
    for _ in 0..samples {
        let x = sampling::rational(rng, 3, 20);
        let g = sampling::rational_point(rng, 3, 20);
        if !cx_identity_holds(&x, &g) {
            failures += 1;
        }
    }
    let shifted = e.gamma.clone() + e.beta.clone() * x0.clone();
    let mut resonances = Vec::new();
    for n in -bound..=bound {
        for m in -bound..=bound {
            if gamma_grid_value(e, n, m) == shifted {
                resonances.push((n, m));
            }
        }
    }
    CxReport {
        samples,
        failures,
        gamma_zero: gamma_zero(e).to_string(),
        x0: x0.to_string(),
        resonances,
        grid_bound: bound,
        passed: failures == 0,
    }
}

/// Fibonacci matrix with no central correction.
pub fn fibonacci_matrix_data() -> EigenData {
    EigenData::oriented(&HeisenbergEndo::new([[1, 1], [1, 0]], 0, 0)).expect("Fibonacci data")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_examples() {
        let o = (q("0"), q("0"));
        assert_eq!(induced_chain(2, &o), (q("2-l"), q("3/2-l")));
        assert_eq!(induced_chain(0, &o).0, -phi());
        assert_eq!(t_phi(&o), (inv_phi2(), q("3/2-l")));
    }

    #[test]
    fn origin_in_d2() {
        let c = RegionCoefficients::default();
        let o = (q("0"), q("0"));
        assert_eq!(c.p(&q("0")), -inv_phi());
        assert_eq!(c.r0.clone() + c.p0.clone(), q("1/2"));
        assert_eq!(c.classify(&o), Region::D2);
        let image = r_map(&c, &o).unwrap();
        assert_eq!(c.classify(&image), Region::Outside);
    }

    #[test]
    fn affine_identity() {
        let r = affine_identity_check(&mut sampling::rng(2), 100);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn audit_reports_literal_failure() {
        let a = region_audit(&RegionCoefficients::default(), &mut sampling::rng(3), 200);
        assert_eq!(a.samples, 200);
        assert!(a.r_escapes > 0);
        assert!(!a.invariant);
    }

    #[test]
    fn cx_examples() {
        let g = GroupPoint::new(rat(1, 2), rat(1, 3), rat(0, 1));
        let one = rat(1, 1);
        assert!(cx_identity_holds(&one, &g));
        let lhs = GroupPoint::new(one.clone(), rat(0, 1), rat(0, 1)).mul(&g);
        assert_eq!(lhs, GroupPoint::new(rat(3, 2), rat(1, 3), rat(1, 3)));
        assert!(cx_identity_holds(&rat(0, 1), &g));
    }

    #[test]
    fn gamma_zero_fibonacci() {
        let e = fibonacci_matrix_data();
        assert_eq!(gamma_zero(&e), q("3/2-l"));
        assert_eq!(gamma_grid_value(&e, 0, 0), gamma_zero(&e));
        let r = conjugation_cx(&e, &q("1/3"), &mut sampling::rng(4), 50, 5);
        assert!(r.passed);
        assert!(r.resonances.is_empty());
        // one grid step in m is β/(λ+1)
        let x0 = num(1) / (e.lambda.clone() + num(1));
        let r = conjugation_cx(&e, &x0, &mut sampling::rng(4), 1, 5);
        assert_eq!(r.resonances, vec![(0, 1)]);
    }
}
