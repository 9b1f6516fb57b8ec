//! The section `Σ` through the contracting line and the first return of
//! the expanding eigenflow to it.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::factorization::{EigenData, Eigen, HeisenbergEndo};
use crate::heisenberg::{GroupPoint, LatticePoint};
use crate::sampling::{self, SampleRng};
use crate::scalar::{rat, QuadraticNumber, Rational, RealScalar};

/// Point `x_{0,s} • [0, 0, zoff]` of `Σ`, with `s ∈ [s_a, s_b)` and
/// `zoff ∈ [−1/2, 1/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SectionPoint {
    pub s: QuadraticNumber,
    pub zoff: QuadraticNumber,
}

/// First return of a point, with the lattice corrections applied after
/// flowing: `Φ^{time}(start) • l_1 • l_2 • … = end`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionReturn {
    pub point: SectionPoint,
    pub time: QuadraticNumber,
    pub iterates: usize,
    pub lattice_word: Vec<LatticePoint>,
}

/// Half-open parameter interval on the contracting line.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub lo: QuadraticNumber,
    pub hi: QuadraticNumber,
    /// `true` for `[lo, hi)`, `false` for `(lo, hi]`.
    pub closed_below: bool,
}

impl Segment {
    pub fn contains(&self, s: &QuadraticNumber) -> bool {
        if self.closed_below {
            self.lo.le(s) && s.lt(&self.hi)
        } else {
            self.lo.lt(s) && s.le(&self.hi)
        }
    }

    pub fn is_within(&self, other: &Segment) -> bool {
        let lo_ok = if !self.closed_below && other.closed_below {
            other.lo.le(&self.lo)
        } else if self.closed_below && !other.closed_below {
            other.lo.lt(&self.lo)
        } else {
            other.lo.le(&self.lo)
        };
        let hi_ok = if !self.closed_below && other.closed_below {
            self.hi.lt(&other.hi)
        } else {
            self.hi.le(&other.hi)
        };
        lo_ok && hi_ok
    }
}

pub fn sigma_segment(e: &EigenData) -> Segment {
    Segment {
        lo: e.s_a.clone(),
        hi: e.s_b.clone(),
        closed_below: true,
    }
}

/// `λ′·[s_a, s_b)`, the parameter range of `𝔖(Σ)`.
pub fn image_segment(e: &EigenData) -> Segment {
    let a = e.lambda_conj.clone() * e.s_a.clone();
    let b = e.lambda_conj.clone() * e.s_b.clone();
    if e.lambda_conj.signum() > 0 {
        Segment {
            lo: a,
            hi: b,
            closed_below: true,
        }
    } else {
        Segment {
            lo: b,
            hi: a,
            closed_below: false,
        }
    }
}

impl SectionPoint {
    pub fn to_group(&self, e: &EigenData) -> GroupPoint<QuadraticNumber> {
        e.surface_point(&e.zero(), &self.s).central_flow(&self.zoff)
    }

    pub fn is_valid(&self, e: &EigenData) -> bool {
        let half = rat(1, 2);
        sigma_segment(e).contains(&self.s)
            && self.zoff.add_rational(&half).signum() >= 0
            && self.zoff.add_rational(&-half).signum() < 0
    }
}

/// Reduces the central coordinate of a point lying over `x_{0,s}` into
/// the window; returns the offset and the central lattice power used.
fn reduce_offset(e: &EigenData, h: &GroupPoint<QuadraticNumber>, s: &QuadraticNumber) -> (QuadraticNumber, BigInt) {
    let raw = h.z.clone() - e.line_height(s);
    let p = -raw.add_rational(&rat(1, 2)).floor();
    let zoff = raw.add_rational(&Rational::from_integer(p.clone()));
    (zoff, p)
}

/// One step of the return map: flow for `t_a` and subtract `n_a` when
/// `s ≥ 0`, flow for `t_b` and subtract `n_b` when `s < 0`.
pub fn sigma_return(e: &EigenData, p: &SectionPoint) -> SectionReturn {
    let (time, s2, l) = if p.s.signum() >= 0 {
        (e.t_a.clone(), p.s.clone() + e.s_a.clone(), LatticePoint::new(-1, 0, 0))
    } else {
        (e.t_b.clone(), p.s.clone() + e.s_b.clone(), LatticePoint::new(0, -1, 0))
    };
    let g = p.to_group(e);
    let h = e.flow(Eigen::Expanding).flow(&time, &g).mul_lattice(&l);
    let (zoff, pz) = reduce_offset(e, &h, &s2);
    let l = LatticePoint { p: pz, ..l };
    SectionReturn {
        point: SectionPoint { s: s2, zoff },
        time,
        iterates: 1,
        lattice_word: vec![l],
    }
}

/// Replays a return record: `Φ^{time}(start) • l_1 • … • l_k`.
pub fn replay(e: &EigenData, start: &SectionPoint, r: &SectionReturn) -> GroupPoint<QuadraticNumber> {
    let mut h = e.flow(Eigen::Expanding).flow(&r.time, &start.to_group(e));
    for l in &r.lattice_word {
        h = h.mul_lattice(l);
    }
    h
}

/// Solves `n·t_a + m·t_b = τ` over the integers (unique when it exists).
fn solve_times(e: &EigenData, tau: &QuadraticNumber) -> Option<(BigInt, BigInt)> {
    let (a1, b1) = (e.t_a.a(), e.t_a.b());
    let (a2, b2) = (e.t_b.a(), e.t_b.b());
    let (a0, b0) = (tau.a(), tau.b());
    let det = a1 * b2 - a2 * b1;
    if det.is_zero() {
        return None;
    }
    let n = (a0 * b2 - a2 * b0) / &det;
    let m = (a1 * b0 - a0 * b1) / &det;
    if n.is_integer() && m.is_integer() {
        Some((n.to_integer(), m.to_integer()))
    } else {
        None
    }
}

/// If `g Γ` meets `Σ`, the section point and the lattice element `l` with
/// `g • l = point`.
pub fn section_point_of(e: &EigenData, g: &GroupPoint<QuadraticNumber>) -> Option<(SectionPoint, LatticePoint)> {
    let (t, s) = e.ts_of(&g.x, &g.y);
    let (n, m) = solve_times(e, &t)?;
    let s = s + e.s_a.mul_rational(&Rational::from_integer(n.clone()))
        + e.s_b.mul_rational(&Rational::from_integer(m.clone()));
    if !sigma_segment(e).contains(&s) {
        return None;
    }
    let l0 = LatticePoint {
        n: -n,
        m: -m,
        p: BigInt::zero(),
    };
    let h = g.mul_lattice(&l0);
    let (zoff, p) = reduce_offset(e, &h, &s);
    let l = l0.mul(&LatticePoint::new(0, 0, p));
    Some((SectionPoint { s, zoff }, l))
}

/// First hit of the flow from `x_{0,s0}•c` (given as `g`) with the lifted
/// segment, found by enumerating the lattice translates that can be reached.
/// Independent of [`sigma_return`].
pub fn direct_return(
    e: &EigenData,
    s0: &QuadraticNumber,
    g: &GroupPoint<QuadraticNumber>,
    target: &Segment,
) -> Option<(QuadraticNumber, QuadraticNumber, LatticePoint)> {
    let ta = e.t_a.to_f64();
    let tb = e.t_b.to_f64();
    let sa = e.s_a.to_f64();
    let sb = e.s_b.to_f64();
    let (al, be) = (e.alpha.to_f64(), e.beta.to_f64());
    let (alp, bep) = (e.alpha_p.to_f64(), e.beta_p.to_f64());
    let s0f = s0.to_f64();
    let (lo, hi) = (target.lo.to_f64(), target.hi.to_f64());
    let mut tmax = 2.0 * ta.max(tb);
    for _ in 0..40 {
        // (n, m) = t(α, β) + (s0 − σ)(α′, β′) with t ∈ (0, tmax], σ ∈ [lo, hi]
        let ds = [s0f - lo, s0f - hi];
        let range = |a: f64, ap: f64| {
            let vals = [0.0, a * tmax].iter().flat_map(|x| ds.iter().map(move |d| x + d * ap)).collect::<Vec<_>>();
            let mn = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let mx = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            ((mn - 1.0).floor() as i64, (mx + 1.0).ceil() as i64)
        };
        let (n_lo, n_hi) = range(al, alp);
        let (m_lo, m_hi) = range(be, bep);
        let mut best: Option<(QuadraticNumber, QuadraticNumber, i64, i64)> = None;
        for n in n_lo..=n_hi {
            for m in m_lo..=m_hi {
                let tf = n as f64 * ta + m as f64 * tb;
                let sf = s0f + n as f64 * sa + m as f64 * sb;
                if tf <= -1e-9 || tf > tmax + 1e-9 || sf < lo - 1e-9 || sf > hi + 1e-9 {
                    continue;
                }
                let t = e.t_a.mul_rational(&Rational::from_integer(n.into()))
                    + e.t_b.mul_rational(&Rational::from_integer(m.into()));
                if t.signum() <= 0 {
                    continue;
                }
                let s = s0.clone()
                    + e.s_a.mul_rational(&Rational::from_integer(n.into()))
                    + e.s_b.mul_rational(&Rational::from_integer(m.into()));
                if !target.contains(&s) {
                    continue;
                }
                if best.as_ref().map(|b| t.lt(&b.0)).unwrap_or(true) {
                    best = Some((t, s, n, m));
                }
            }
        }
        if let Some((t, s, n, m)) = best {
            let h = e
                .flow(Eigen::Expanding)
                .flow(&t, g)
                .mul_lattice(&LatticePoint::new(-n, -m, 0));
            let (_, p) = reduce_offset(e, &h, &s);
            return Some((t, s, LatticePoint::new(-n, -m, p)));
        }
        tmax *= 2.0;
    }
    None
}

/// Two-interval exchange statistics of a long orbit.
#[derive(Clone, Debug, Serialize)]
pub struct ExchangeReport {
    pub iterates: usize,
    pub translations_seen: Vec<String>,
    pub times_seen: Vec<String>,
    pub translations_ok: bool,
    pub times_ok: bool,
    pub stays_in_section: bool,
    pub replay_failures: usize,
    pub passed: bool,
}

pub fn exchange_check(e: &EigenData, start: &SectionPoint, iterates: usize, replay_every: usize) -> ExchangeReport {
    let mut cur = start.clone();
    let mut translations: Vec<QuadraticNumber> = Vec::new();
    let mut times: Vec<QuadraticNumber> = Vec::new();
    let mut stays = true;
    let mut replay_failures = 0;
    for k in 0..iterates {
        let r = sigma_return(e, &cur);
        let ds = r.point.s.clone() - cur.s.clone();
        if !translations.contains(&ds) {
            translations.push(ds);
        }
        if !times.contains(&r.time) {
            times.push(r.time.clone());
        }
        if !r.point.is_valid(e) {
            stays = false;
        }
        if replay_every > 0 && k % replay_every == 0 && replay(e, &cur, &r) != r.point.to_group(e) {
            replay_failures += 1;
        }
        cur = r.point;
    }
    let allowed_s = [e.s_a.clone(), e.s_b.clone()];
    let allowed_t = [e.t_a.clone(), e.t_b.clone()];
    let translations_ok = translations.iter().all(|d| allowed_s.contains(d));
    let times_ok = times.iter().all(|t| allowed_t.contains(t));
    ExchangeReport {
        iterates,
        translations_seen: translations.iter().map(|d| d.to_string()).collect(),
        times_seen: times.iter().map(|t| t.to_string()).collect(),
        translations_ok,
        times_ok,
        stays_in_section: stays,
        replay_failures,
        passed: translations_ok && times_ok && stays && replay_failures == 0,
    }
}

/// Random section point, with `s` drawn irrationally from `[s_a, s_b)`.
pub fn sample_section_point(e: &EigenData, rng: &mut SampleRng) -> SectionPoint {
    let ctx = e.context.clone();
    let s = sampling::quadratic_in(rng, &ctx, &e.s_a, &e.s_b);
    let zoff = sampling::quadratic(rng, &ctx, 2, 20).frac().add_rational(&rat(-1, 2));
    SectionPoint { s, zoff }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfInductionReport {
    pub endo: String,
    pub samples: usize,
    pub image_within_section: bool,
    pub induced_failures: usize,
    pub direct_failures: usize,
    pub time_failures: usize,
    pub max_induced_steps: usize,
    pub witness: Option<String>,
    pub passed: bool,
}

/// Checks `𝔖⁻¹ ∘ T_{𝔖(Σ)} ∘ 𝔖 = T_Σ` exactly.
///
/// `T_{𝔖(Σ)}` is computed twice: as the induced map of [`sigma_return`]
/// (when `𝔖(Σ) ⊂ Σ`) and by [`direct_return`] with the image segment.
pub fn self_induction_sigma(e: &EigenData, points: &[SectionPoint]) -> SelfInductionReport {
    let l: &HeisenbergEndo = &e.endo;
    let l_inv = l.invert().expect("unimodular implies invertible");
    let image = image_segment(e);
    let within = image.is_within(&sigma_segment(e));
    let mut induced_failures = 0;
    let mut direct_failures = 0;
    let mut time_failures = 0;
    let mut max_steps = 0;
    let mut witness = None;
    let note = |w: &mut Option<String>, p: &SectionPoint, what: &str| {
        if w.is_none() {
            *w = Some(format!("{what} at s={}, zoff={}", p.s, p.zoff));
        }
    };
    for p in points {
        let base = sigma_return(e, p);
        let expected_time = e.lambda.clone() * base.time.clone();
        let q = l.apply(&p.to_group(e));
        let q_s = e.lambda_conj.clone() * p.s.clone();

        if within {
            match section_point_of(e, &q) {
                Some((mut cur, _)) => {
                    let mut total = e.zero();
                    let mut steps = 0;
                    loop {
                        let r = sigma_return(e, &cur);
                        total = total + r.time;
                        cur = r.point;
                        steps += 1;
                        if image.contains(&cur.s) || steps > 10_000 {
                            break;
                        }
                    }
                    max_steps = max_steps.max(steps);
                    let back = l_inv.apply(&cur.to_group(e));
                    let ok = section_point_of(e, &back).map(|(sp, _)| sp == base.point).unwrap_or(false);
                    if !ok {
                        induced_failures += 1;
                        note(&mut witness, p, "induced map");
                    }
                    if total != expected_time {
                        time_failures += 1;
                        note(&mut witness, p, "return time");
                    }
                }
                None => {
                    induced_failures += 1;
                    note(&mut witness, p, "image point off the section");
                }
            }
        }

        match direct_return(e, &q_s, &q, &image) {
            Some((t, s, lat)) => {
                let end = e.flow(Eigen::Expanding).flow(&t, &q).mul_lattice(&lat);
                debug_assert!(image.contains(&s));
                let back = l_inv.apply(&end);
                let ok = section_point_of(e, &back).map(|(sp, _)| sp == base.point).unwrap_or(false);
                if !ok {
                    direct_failures += 1;
                    note(&mut witness, p, "direct return");
                }
                if t != expected_time {
                    time_failures += 1;
                    note(&mut witness, p, "direct return time");
                }
            }
            None => {
                direct_failures += 1;
                note(&mut witness, p, "no direct return found");
            }
        }
    }
    SelfInductionReport {
        endo: format!("{l:?}"),
        samples: points.len(),
        image_within_section: within,
        induced_failures,
        direct_failures,
        time_failures,
        max_induced_steps: max_steps,
        witness,
        passed: induced_failures == 0 && direct_failures == 0 && time_failures == 0,
    }
}

/// Float view of a section point as `(s, zoff)`.
pub fn section_point_f64(p: &SectionPoint) -> (f64, f64) {
    (p.s.to_f64(), p.zoff.to_f64())
}

pub fn lattice_to_string(l: &LatticePoint) -> String {
    match (l.n.to_i64(), l.m.to_i64(), l.p.to_i64()) {
        (Some(n), Some(m), Some(p)) => format!("[{n},{m},{p}]"),
        _ => l.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::golden::q;
    use crate::freegroup::Endomorphism;

    fn fib() -> EigenData {
        EigenData::oriented(&HeisenbergEndo::factor(&Endomorphism::fibonacci())).unwrap()
    }

    #[test]
    fn return_examples() {
        let e = fib();
        let p = SectionPoint { s: q("0"), zoff: q("0") };
        let r = sigma_return(&e, &p);
        assert_eq!(r.time, q("1/5+3/5*l"));
        assert_eq!(r.point.s, q("-3/5+1/5*l"));
        assert!(r.point.is_valid(&e));
        assert_eq!(replay(&e, &p, &r), r.point.to_group(&e));

        let p = SectionPoint { s: q("-1/10"), zoff: q("1/4") };
        let r = sigma_return(&e, &p);
        assert_eq!(r.time, q("2/5+1/5*l"));
        assert_eq!(r.point.s, q("-1/10-1/5+2/5*l"));
        assert!((r.point.s.to_f64() - 0.3472).abs() < 1e-4);
    }

    #[test]
    fn direct_return_agrees_with_exchange() {
        let e = fib();
        let mut rng = sampling::rng(4);
        for _ in 0..20 {
            let p = sample_section_point(&e, &mut rng);
            let r = sigma_return(&e, &p);
            let (t, s, _) = direct_return(&e, &p.s, &p.to_group(&e), &sigma_segment(&e)).unwrap();
            assert_eq!(t, r.time);
            assert_eq!(s, r.point.s);
        }
    }

    #[test]
    fn section_point_recovery() {
        let e = fib();
        let p = SectionPoint { s: q("1/7"), zoff: q("-1/3") };
        let g = p.to_group(&e).mul_lattice(&LatticePoint::new(3, -2, 5));
        let (sp, l) = section_point_of(&e, &g).unwrap();
        assert_eq!(sp, p);
        assert_eq!(g.mul_lattice(&l), p.to_group(&e));
    }

    #[test]
    fn self_induction_fibonacci() {
        let e = fib();
        let mut rng = sampling::rng(5);
        let mut pts = vec![SectionPoint { s: q("0"), zoff: q("0") }];
        pts.extend((0..10).map(|_| sample_section_point(&e, &mut rng)));
        let r = self_induction_sigma(&e, &pts);
        assert!(r.image_within_section);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn exchange_structure() {
        let e = fib();
        let r = exchange_check(&e, &SectionPoint { s: q("1/3"), zoff: q("0") }, 300, 7);
        assert!(r.passed, "{r:?}");
    }
}
