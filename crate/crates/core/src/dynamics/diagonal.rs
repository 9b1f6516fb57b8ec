//! The diagonal section `{x + y ∈ ℤ}` and its chart `(X, Z) ↔ [X, −X, Z]`.

use serde::Serialize;

use super::golden::{inv_phi2, inv_phi3, q};
use super::section::{sigma_return, SectionPoint};
use super::torus::{PiecewiseTorusMap, TorusBranch, TorusPoint2};
use crate::factorization::{Eigen, EigenData, HeisenbergEndo};
use crate::heisenberg::{coset_eq, GroupPoint};
use crate::sampling::{self, SampleRng};
use crate::scalar::{rat, QuadraticNumber, Rational, RealScalar, Scalar};

/// Chart data of the diagonal section for one eigenflow.
#[derive(Clone, Debug)]
pub struct DiagonalSection {
    pub eigen: EigenData,
    /// `exp(α, β, γ)`, the time-one map of the flow.
    pub generator: GroupPoint<QuadraticNumber>,
    pub chart_map: PiecewiseTorusMap<QuadraticNumber>,
}

/// Chart coordinates of a point with `x + y ∈ ℤ`, obtained by reducing
/// with `[n, −(x+y)−n, p]`.
pub fn chart_of(g: &GroupPoint<QuadraticNumber>) -> Option<TorusPoint2<QuadraticNumber>> {
    let sum = g.x.clone() + g.y.clone();
    if !sum.is_rational() || !sum.a().is_integer() {
        return None;
    }
    let n = -g.x.floor();
    let m = -sum.a().to_integer() - &n;
    let x = g.x.add_rational(&Rational::from_integer(n));
    let z = g.z.clone() + g.x.mul_rational(&Rational::from_integer(m));
    Some(TorusPoint2::new(x, z))
}

pub fn chart_point(p: &TorusPoint2<QuadraticNumber>) -> GroupPoint<QuadraticNumber> {
    GroupPoint::new(p.u.clone(), -p.u.clone(), p.v.clone())
}

/// Builds the chart map in closed form.
///
/// On `[0, 1−α)` the reduction uses `[0, −1, ·]`, on `[1−α, 1)` it uses
/// `[−1, 0, ·]`.
pub fn diag_section(e: &EigenData) -> DiagonalSection {
    let generator = e.flow(Eigen::Expanding).exp();
    let one = e.context.integer(1);
    let zero = e.zero();
    let g0 = generator.z.clone();
    let (a, _b) = (e.alpha.clone(), e.beta.clone());
    let br = |lo: QuadraticNumber, hi: QuadraticNumber, shift, c0, c1| TorusBranch {
        lo,
        hi,
        shift,
        c0,
        c1,
        c2: e.zero(),
    };
    let split = one.clone() - a.clone();
    let chart_map = PiecewiseTorusMap::new(vec![
        br(
            zero,
            split.clone(),
            a.clone(),
            g0.clone() - a.clone(),
            -(one.clone() + a.clone()),
        ),
        br(split, one.clone(), a.clone() - one, g0, -a),
    ]);
    DiagonalSection {
        eigen: e.clone(),
        generator,
        chart_map,
    }
}

impl DiagonalSection {
    /// Time for the flow from `g` to next reach `x + y ∈ ℤ`.
    pub fn hit_time(&self, g: &GroupPoint<QuadraticNumber>) -> QuadraticNumber {
        let sum = g.x.clone() + g.y.clone();
        let next = sum.floor() + 1;
        let gap = sum.rational_like(Rational::from_integer(next)) - sum;
        gap / (self.eigen.alpha.clone() + self.eigen.beta.clone())
    }

    /// Flow time `tˣ = −(α′ + β′)s` carrying `x_{0,s}` to the diagonal.
    pub fn psi_time(&self, s: &QuadraticNumber) -> QuadraticNumber {
        -((self.eigen.alpha_p.clone() + self.eigen.beta_p.clone()) * s.clone())
    }

    pub fn psi(&self, p: &SectionPoint) -> TorusPoint2<QuadraticNumber> {
        let t = self.psi_time(&p.s);
        let g = self.eigen.flow(Eigen::Expanding).flow(&t, &p.to_group(&self.eigen));
        chart_of(&g).expect("flow lands on the diagonal")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalReport {
    pub generator: [String; 3],
    pub samples: usize,
    pub partitions: bool,
    pub return_time_failures: usize,
    pub translation_failures: usize,
    pub psi_conjugacy_failures: usize,
    pub witness: Option<String>,
    pub passed: bool,
}

/// Checks on random chart points that the return time is `1` and that
/// the chart map agrees with left translation by `exp(α, β, γ)`, and that
/// `ψ` conjugates the `Σ`-return to the chart map.
pub fn diagonal_check(d: &DiagonalSection, rng: &mut SampleRng, samples: usize) -> DiagonalReport {
    let e = &d.eigen;
    let ctx = e.context.clone();
    let one = ctx.integer(1);
    let mut rt = 0;
    let mut tr = 0;
    let mut pc = 0;
    let mut witness = None;
    for _ in 0..samples {
        let p = TorusPoint2::new(
            sampling::quadratic(rng, &ctx, 2, 30),
            sampling::quadratic(rng, &ctx, 2, 30),
        );
        let g = chart_point(&p);
        if d.hit_time(&g) != one {
            rt += 1;
            witness.get_or_insert_with(|| format!("return time at {p:?}"));
        }
        let flowed = e.flow(Eigen::Expanding).flow(&one, &g);
        let image = d.chart_map.apply(&p).ok();
        let ok = image
            .as_ref()
            .map(|im| chart_of(&flowed).as_ref() == Some(im) && coset_eq(&flowed, &chart_point(im)))
            .unwrap_or(false);
        if !ok || flowed != d.generator.mul(&g) {
            tr += 1;
            witness.get_or_insert_with(|| format!("translation at {p:?}"));
        }

        let sp = super::section::sample_section_point(e, rng);
        let lhs = d.psi(&sigma_return(e, &sp).point);
        let rhs = d.chart_map.apply(&d.psi(&sp)).ok();
        if rhs.as_ref() != Some(&lhs) {
            pc += 1;
            witness.get_or_insert_with(|| format!("ψ conjugacy at s={}", sp.s));
        }
    }
    DiagonalReport {
        generator: [
            d.generator.x.to_string(),
            d.generator.y.to_string(),
            d.generator.z.to_string(),
        ],
        samples,
        partitions: d.chart_map.partitions_unit_interval(),
        return_time_failures: rt,
        translation_failures: tr,
        psi_conjugacy_failures: pc,
        witness,
        passed: rt == 0 && tr == 0 && pc == 0 && d.chart_map.partitions_unit_interval(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityAudit {
    /// Sign of `α′ + β′`.
    pub case: i32,
    pub checks: Vec<InequalityCheck>,
    pub passed: bool,
}

fn strict(name: &str, lhs: QuadraticNumber, rhs: QuadraticNumber) -> InequalityCheck {
    InequalityCheck {
        name: name.to_string(),
        holds: lhs.lt(&rhs),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// The inequalities guaranteeing that the `ψ`-transfer between `Σ` and
/// the diagonal never overshoots a return.
pub fn inequality_audit(e: &EigenData) -> InequalityAudit {
    let w = e.alpha_p.clone() + e.beta_p.clone();
    let case = w.signum();
    let mut checks = Vec::new();
    match case {
        -1 => {
            checks.push(strict("t^x_max < t_b", -(w.clone() * e.s_b.clone()), e.t_b.clone()));
            checks.push(strict("-t^x_min < t_b", w.clone() * e.s_a.clone(), e.t_b.clone()));
            checks.push(strict("beta' < alpha (alpha'+beta')", e.beta_p.clone(), e.alpha.clone() * w.clone()));
            checks.push(strict("beta' < beta (alpha'+beta')", e.beta_p.clone(), e.beta.clone() * w.clone()));
        }
        1 => {
            checks.push(strict("t^x_min < t_a", -(w.clone() * e.s_a.clone()), e.t_a.clone()));
            checks.push(strict(
                "-t^x_int < t_a",
                w.clone() * (e.s_a.clone() + e.s_b.clone()),
                e.t_a.clone(),
            ));
            checks.push(strict("-t^x_max < t_b", w.clone() * e.s_b.clone(), e.t_b.clone()));
        }
        _ => {}
    }
    let passed = checks.iter().all(|c| c.holds);
    InequalityAudit { case, checks, passed }
}

/// The map `(y, z) ↦ (y + 1/φ², z + y − 1/(2φ³))`.
pub fn golden_skew_map() -> PiecewiseTorusMap<QuadraticNumber> {
    PiecewiseTorusMap::new(vec![TorusBranch {
        lo: q("0"),
        hi: q("1"),
        shift: inv_phi2(),
        c0: -(inv_phi3().mul_rational(&rat(1, 2))),
        c1: q("1"),
        c2: q("0"),
    }])
}

/// Fibonacci data with zero central correction, `M = [[1,1],[1,0]]`.
pub fn fibonacci_linear_endo() -> HeisenbergEndo {
    HeisenbergEndo::new([[1, 1], [1, 0]], 0, 0)
}

/// Change of coordinates `H(X, Z) = (εX + u0, δZ + c2·X² + c1·X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartConjugacy {
    pub epsilon: i64,
    pub delta: i64,
    pub u0: QuadraticNumber,
    pub c1: QuadraticNumber,
    pub c2: QuadraticNumber,
}

impl ChartConjugacy {
    fn delta_times(&self, x: &QuadraticNumber) -> QuadraticNumber {
        x.mul_rational(&Rational::from_integer(self.delta.into()))
    }

    pub fn apply(&self, p: &TorusPoint2<QuadraticNumber>) -> TorusPoint2<QuadraticNumber> {
        let x = &p.u;
        let u = x.mul_rational(&Rational::from_integer(self.epsilon.into())) + self.u0.clone();
        let v = p.v.mul_rational(&Rational::from_integer(self.delta.into()))
            + self.c2.clone() * x.clone() * x.clone()
            + self.c1.clone() * x.clone();
        TorusPoint2::new(u, v)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartEquivalenceReport {
    pub chart_rotation: String,
    pub target_rotation: String,
    pub rotations_match_up_to_orientation: bool,
    /// Conjugacy found in the symmetric chart `W = Z + X(X−1)/2`.
    pub epsilon: Option<i64>,
    pub delta: Option<i64>,
    pub u0: Option<String>,
    pub c1: Option<String>,
    pub c2: Option<String>,
    /// `c2 = 0`, so the conjugacy is an affine map of the torus.
    pub affine: bool,
    /// The same conjugacy read in the group chart `(X, Z)`; its `X²`
    /// coefficient cannot vanish there because the fiber slopes of the two
    /// branches differ by one.
    pub group_chart_c1: Option<String>,
    pub group_chart_c2: Option<String>,
    pub candidates_tried: usize,
    pub points: usize,
    pub chart_change_mismatches: usize,
    pub mismatches: usize,
    pub group_chart_mismatches: usize,
    pub witness: Option<String>,
    pub passed: bool,
}

/// `(X, Z) ↦ (X, Z + X(X−1)/2)`, continuous on the torus.
pub fn to_symmetric_chart(p: &TorusPoint2<QuadraticNumber>) -> TorusPoint2<QuadraticNumber> {
    let x = p.u.clone();
    let w = p.v.clone() + (x.clone() * x.clone() - x.clone()).halved();
    TorusPoint2::new(x, w)
}

/// The chart map conjugated by [`to_symmetric_chart`]. On a branch with
/// shift `h` the fiber term picks up `h·X + h(h−1)/2`; the `X²` terms
/// cancel.
pub fn symmetric_chart_map(f: &PiecewiseTorusMap<QuadraticNumber>) -> PiecewiseTorusMap<QuadraticNumber> {
    let branches = f
        .branches
        .iter()
        .map(|b| {
            let h = b.shift.clone();
            TorusBranch {
                lo: b.lo.clone(),
                hi: b.hi.clone(),
                shift: h.clone(),
                c0: b.c0.clone() + (h.clone() * h.clone() - h.clone()).halved(),
                c1: b.c1.clone() + h,
                c2: b.c2.clone(),
            }
        })
        .collect();
    PiecewiseTorusMap::new(branches)
}

/// Exact Gaussian elimination for an overdetermined system; `None` when
/// inconsistent or underdetermined.
fn solve_exact(mut rows: Vec<Vec<QuadraticNumber>>, unknowns: usize) -> Option<Vec<QuadraticNumber>> {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let r = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, r);
        let p = rows[pivot_row][col].clone();
        for c in 0..=unknowns {
            rows[pivot_row][c] = rows[pivot_row][c].clone() / p.clone();
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=unknowns {
                    let v = rows[pivot_row][c].clone() * f.clone();
                    rows[r][c] = rows[r][c].clone() - v;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[unknowns].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| rows[r][unknowns].clone()).collect())
}

/// Looks for `H` with `H ∘ F = P ∘ H`, where `F` is a piecewise chart map
/// and `P` a single-branch skew map with linear fiber term.
///
/// Comparing coefficients of `X` and `1` on each branch gives a linear
/// system in `(c2, c1, u0)` for each choice of signs `ε, δ` and integer
/// offsets; candidates are also required to be continuous across the seam
/// (`c2 + c1 ∈ ℤ`).
pub fn solve_chart_conjugacy(
    f: &PiecewiseTorusMap<QuadraticNumber>,
    p: &PiecewiseTorusMap<QuadraticNumber>,
) -> (Vec<ChartConjugacy>, usize) {
    let target = &p.branches[0];
    assert!(p.branches.len() == 1 && target.c2.is_zero(), "target must be a single linear skew branch");
    let ctx = target.shift.context().clone();
    let int = |n: i64| ctx.integer(n);
    let mut found = Vec::new();
    let mut tried = 0;
    let nb = f.branches.len();
    if f.branches.iter().any(|b| !b.c2.is_zero()) {
        // the X² coefficient δ·κ2 would have to vanish
        return (found, tried);
    }
    for epsilon in [-1i64, 1] {
        let shifts_ok = f.branches.iter().all(|b| {
            let d = b.shift.mul_rational(&Rational::from_integer(epsilon.into())) - target.shift.clone();
            d.is_rational() && d.a().is_integer()
        });
        if !shifts_ok {
            continue;
        }
        for delta in [1i64, -1] {
            // offsets k_i ∈ {−1, 0, 1} with k_0 = 0
            let combos = 3usize.pow(nb.saturating_sub(1) as u32);
            for code in 0..combos {
                tried += 1;
                let mut ks = vec![0i64];
                let mut c = code;
                for _ in 1..nb {
                    ks.push((c % 3) as i64 - 1);
                    c /= 3;
                }
                let mut rows = Vec::new();
                for (b, k) in f.branches.iter().zip(&ks) {
                    let sh = b.shift.clone();
                    let two = int(2);
                    // X: δκ1 + 2·c2·sh − π1·ε = 0
                    rows.push(vec![
                        two * sh.clone(),
                        int(0),
                        int(0),
                        target.c1.mul_rational(&Rational::from_integer(epsilon.into()))
                            - b.c1.mul_rational(&Rational::from_integer(delta.into())),
                    ]);
                    // 1: δκ0 + c2·sh² + c1·sh − π0 − π1·u0 = k
                    rows.push(vec![
                        sh.clone() * sh.clone(),
                        sh.clone(),
                        -target.c1.clone(),
                        int(*k) + target.c0.clone() - b.c0.mul_rational(&Rational::from_integer(delta.into())),
                    ]);
                }
                if let Some(sol) = solve_exact(rows, 3) {
                    let cont = sol[0].clone() + sol[1].clone();
                    if cont.is_rational() && cont.a().is_integer() {
                        found.push(ChartConjugacy {
                            epsilon,
                            delta,
                            c2: sol[0].clone(),
                            c1: sol[1].clone(),
                            u0: sol[2].frac(),
                        });
                    }
                }
            }
        }
    }
    (found, tried)
}

/// Solves for and verifies the conjugacy between the Fibonacci chart map
/// and the map of [`golden_skew_map`].
pub fn fibonacci_chart_equivalence(rng: &mut SampleRng, points: usize) -> ChartEquivalenceReport {
    let e = EigenData::oriented(&fibonacci_linear_endo()).expect("Fibonacci data is oriented");
    let d = diag_section(&e);
    let sym = symmetric_chart_map(&d.chart_map);
    let target = golden_skew_map();
    let rho_chart = d.chart_map.branches[0].shift.frac();
    let rho_target = target.branches[0].shift.frac();
    let up_to_orientation = rho_chart == rho_target || (-rho_chart.clone()).frac() == rho_target;
    let (mut found, tried) = solve_chart_conjugacy(&sym, &target);
    found.sort_by_key(|h| !h.c2.is_zero());
    let h = found.first().cloned();
    // H ∘ S in the group chart: S adds X(X−1)/2, which H carries over with
    // the sign δ
    let hg = h.as_ref().map(|h| {
        let half = h.delta_times(&q("1/2"));
        ChartConjugacy {
            epsilon: h.epsilon,
            delta: h.delta,
            u0: h.u0.clone(),
            c1: h.c1.clone() - half.clone(),
            c2: h.c2.clone() + half,
        }
    });
    let ctx = e.context.clone();
    let mut chart_change = 0;
    let mut mismatches = 0;
    let mut group_mismatches = 0;
    let mut witness = None;
    for _ in 0..points {
        let p = TorusPoint2::new(
            sampling::quadratic(rng, &ctx, 2, 40),
            sampling::quadratic(rng, &ctx, 2, 40),
        );
        let fp = d.chart_map.apply(&p).expect("chart map is total");
        if to_symmetric_chart(&fp) != sym.apply(&to_symmetric_chart(&p)).expect("total") {
            chart_change += 1;
            witness.get_or_insert_with(|| format!("chart change at ({}, {})", p.u, p.v));
        }
        if let (Some(h), Some(hg)) = (&h, &hg) {
            let w = to_symmetric_chart(&p);
            let lhs = h.apply(&sym.apply(&w).expect("total"));
            let rhs = target.apply(&h.apply(&w)).expect("target is total");
            if lhs != rhs {
                mismatches += 1;
                witness.get_or_insert_with(|| format!("({}, {})", w.u, w.v));
            }
            if hg.apply(&fp) != target.apply(&hg.apply(&p)).expect("total") {
                group_mismatches += 1;
                witness.get_or_insert_with(|| format!("group chart ({}, {})", p.u, p.v));
            }
        }
    }
    let affine = h.as_ref().is_some_and(|h| h.c2.is_zero());
    ChartEquivalenceReport {
        chart_rotation: rho_chart.to_string(),
        target_rotation: rho_target.to_string(),
        rotations_match_up_to_orientation: up_to_orientation,
        epsilon: h.as_ref().map(|h| h.epsilon),
        delta: h.as_ref().map(|h| h.delta),
        u0: h.as_ref().map(|h| h.u0.to_string()),
        c1: h.as_ref().map(|h| h.c1.to_string()),
        c2: h.as_ref().map(|h| h.c2.to_string()),
        affine,
        group_chart_c1: hg.as_ref().map(|h| h.c1.to_string()),
        group_chart_c2: hg.as_ref().map(|h| h.c2.to_string()),
        candidates_tried: tried,
        points,
        chart_change_mismatches: chart_change,
        mismatches,
        group_chart_mismatches: group_mismatches,
        witness,
        passed: affine && up_to_orientation && chart_change == 0 && mismatches == 0 && group_mismatches == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::strip_family;
    use crate::freegroup::Endomorphism;

    fn fib() -> EigenData {
        EigenData::oriented(&HeisenbergEndo::factor(&Endomorphism::fibonacci())).unwrap()
    }

    #[test]
    fn linear_endo_generator() {
        let e = EigenData::oriented(&fibonacci_linear_endo()).unwrap();
        assert_eq!(e.gamma, q("3/2-l"));
        let d = diag_section(&e);
        assert_eq!(d.generator, GroupPoint::new(q("-1+l"), q("2-l"), q("0")));
        // same as the strip map with s = −1, θ = 0
        assert_eq!(d.chart_map, strip_family(&q("-1"), &q("0")));
    }

    #[test]
    fn diagonal_checks_pass() {
        let mut rng = sampling::rng(9);
        for e in [fib(), EigenData::oriented(&fibonacci_linear_endo()).unwrap()] {
            let r = diagonal_check(&diag_section(&e), &mut rng, 30);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn psi_time_vanishes_at_zero() {
        let d = diag_section(&fib());
        assert!(d.psi_time(&q("0")).is_zero());
    }

    #[test]
    fn fibonacci_audit() {
        let a = inequality_audit(&fib());
        assert_eq!(a.case, -1);
        assert!(a.passed, "{a:?}");
    }

    #[test]
    fn golden_skew_origin() {
        let p = golden_skew_map().apply(&TorusPoint2::new(q("0"), q("0"))).unwrap();
        assert_eq!(p, TorusPoint2::new(q("2-l"), q("5/2-l")));
    }

    #[test]
    fn chart_equivalence() {
        let r = fibonacci_chart_equivalence(&mut sampling::rng(1), 100);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.epsilon, Some(-1));
        assert_eq!(r.c2.as_deref(), Some("0"));
        assert!(r.group_chart_c2.as_deref() == Some("1/2") || r.group_chart_c2.as_deref() == Some("-1/2"));
    }
}
