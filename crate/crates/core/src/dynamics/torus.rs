//! Piecewise skew maps of the two-torus and the strip renormalization.

use serde::Serialize;
use thiserror::Error;

use super::golden::{inv_phi, inv_phi2, inv_phi3, inv_phi4, num, phi, phi2, phi3, q};
use crate::sampling::{self, SampleRng};
use crate::scalar::{QuadraticContext, QuadraticNumber, RealScalar, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorusError {
    #[error("no return within {0} iterates")]
    NoReturn(usize),
    #[error("point {0} is outside every branch")]
    Uncovered(String),
}

/// Point of `(ℝ/ℤ)²` with both coordinates in `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint2<S> {
    pub u: S,
    pub v: S,
}

impl<S: RealScalar> TorusPoint2<S> {
    pub fn new(u: S, v: S) -> Self {
        TorusPoint2 {
            u: u.frac(),
            v: v.frac(),
        }
    }
}

/// Branch on `lo ≤ u < hi`: `(u, v) ↦ (u + shift, v + c0 + c1·u + c2·u²)`
/// reduced mod 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusBranch<S> {
    pub lo: S,
    pub hi: S,
    pub shift: S,
    pub c0: S,
    pub c1: S,
    pub c2: S,
}

impl<S: RealScalar> TorusBranch<S> {
    pub fn contains(&self, u: &S) -> bool {
        self.lo.le(u) && u.lt(&self.hi)
    }

    /// Unreduced image.
    pub fn raw(&self, u: &S, v: &S) -> (S, S) {
        let dv = self.c0.clone() + self.c1.clone() * u.clone() + self.c2.clone() * u.clone() * u.clone();
        (u.clone() + self.shift.clone(), v.clone() + dv)
    }

    /// Polynomial part evaluated at `u + d`, re-expanded in `u`.
    fn shifted_poly(&self, d: &S) -> (S, S, S) {
        let two = d.from_int_like(&2.into());
        (
            self.c0.clone() + self.c1.clone() * d.clone() + self.c2.clone() * d.clone() * d.clone(),
            self.c1.clone() + two * self.c2.clone() * d.clone(),
            self.c2.clone(),
        )
    }
}

/// Torus map given by finitely many [`TorusBranch`]es whose domains
/// partition `[0, 1)` in the first coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseTorusMap<S> {
    pub branches: Vec<TorusBranch<S>>,
}

impl<S: RealScalar> PiecewiseTorusMap<S> {
    pub fn new(mut branches: Vec<TorusBranch<S>>) -> Self {
        branches.sort_by(|a, b| {
            if a.lo.lt(&b.lo) {
                std::cmp::Ordering::Less
            } else if b.lo.lt(&a.lo) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        PiecewiseTorusMap { branches }
    }

    pub fn branch_index(&self, u: &S) -> Option<usize> {
        self.branches.iter().position(|b| b.contains(u))
    }

    pub fn apply(&self, p: &TorusPoint2<S>) -> Result<TorusPoint2<S>, TorusError> {
        let i = self
            .branch_index(&p.u)
            .ok_or_else(|| TorusError::Uncovered(format!("{:?}", p.u)))?;
        let (u, v) = self.branches[i].raw(&p.u, &p.v);
        Ok(TorusPoint2::new(u, v))
    }

    /// Domains are nonempty, sorted, contiguous and cover `[0, 1)`.
    pub fn partitions_unit_interval(&self) -> bool {
        let Some(first) = self.branches.first() else {
            return false;
        };
        let zero = first.lo.zero_like();
        let one = first.lo.one_like();
        if first.lo != zero {
            return false;
        }
        for w in self.branches.windows(2) {
            if w[0].hi != w[1].lo {
                return false;
            }
        }
        self.branches.iter().all(|b| b.lo.lt(&b.hi)) && self.branches.last().map(|b| b.hi == one).unwrap_or(false)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PiecewiseTorusMap<S>) -> PiecewiseTorusMap<S> {
        let mut out = Vec::new();
        for bj in &other.branches {
            let k_lo = (bj.lo.clone() + bj.shift.clone()).floor_int();
            let k_hi = (bj.hi.clone() + bj.shift.clone()).floor_int();
            let mut k = k_lo;
            while k <= k_hi {
                let kk = bj.lo.from_int_like(&k);
                // u in D_j with u + shift − k in D_i
                for bi in &self.branches {
                    let lo = max(&bj.lo, &(bi.lo.clone() + kk.clone() - bj.shift.clone()));
                    let hi = min(&bj.hi, &(bi.hi.clone() + kk.clone() - bj.shift.clone()));
                    if !lo.lt(&hi) {
                        continue;
                    }
                    let d = bj.shift.clone() - kk.clone();
                    let (a0, a1, a2) = bi.shifted_poly(&d);
                    out.push(TorusBranch {
                        lo,
                        hi,
                        shift: (d + bi.shift.clone()).frac(),
                        c0: bj.c0.clone() + a0,
                        c1: bj.c1.clone() + a1,
                        c2: bj.c2.clone() + a2,
                    });
                }
                k += 1;
            }
        }
        PiecewiseTorusMap::new(out)
    }

    pub fn inverse(&self) -> PiecewiseTorusMap<S> {
        let mut out = Vec::new();
        for b in &self.branches {
            let k_lo = (b.lo.clone() + b.shift.clone()).floor_int();
            let k_hi = (b.hi.clone() + b.shift.clone()).floor_int();
            let mut k = k_lo;
            while k <= k_hi {
                let kk = b.lo.from_int_like(&k);
                let zero = kk.zero_like();
                let one = kk.one_like();
                let lo = max(&zero, &(b.lo.clone() + b.shift.clone() - kk.clone()));
                let hi = min(&one, &(b.hi.clone() + b.shift.clone() - kk.clone()));
                if lo.lt(&hi) {
                    let d = kk.clone() - b.shift.clone();
                    let (a0, a1, a2) = b.shifted_poly(&d);
                    out.push(TorusBranch {
                        lo,
                        hi,
                        shift: d.frac(),
                        c0: -a0,
                        c1: -a1,
                        c2: -a2,
                    });
                }
                k += 1;
            }
        }
        PiecewiseTorusMap::new(out)
    }

    /// Merges adjacent branches with identical updates.
    pub fn simplified(&self) -> PiecewiseTorusMap<S> {
        let mut out: Vec<TorusBranch<S>> = Vec::new();
        for b in &self.branches {
            if let Some(last) = out.last_mut() {
                if last.hi == b.lo && last.shift == b.shift && last.c0 == b.c0 && last.c1 == b.c1 && last.c2 == b.c2 {
                    last.hi = b.hi.clone();
                    continue;
                }
            }
            out.push(b.clone());
        }
        PiecewiseTorusMap { branches: out }
    }

    pub fn to_f64(&self) -> PiecewiseTorusMap<f64> {
        PiecewiseTorusMap {
            branches: self
                .branches
                .iter()
                .map(|b| TorusBranch {
                    lo: b.lo.approx(),
                    hi: b.hi.approx(),
                    shift: b.shift.approx(),
                    c0: b.c0.approx(),
                    c1: b.c1.approx(),
                    c2: b.c2.approx(),
                })
                .collect(),
        }
    }
}

fn max<S: RealScalar>(a: &S, b: &S) -> S {
    if a.lt(b) {
        b.clone()
    } else {
        a.clone()
    }
}

fn min<S: RealScalar>(a: &S, b: &S) -> S {
    if a.lt(b) {
        a.clone()
    } else {
        b.clone()
    }
}

/// Result of iterating until the orbit re-enters a region.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusReturn<S> {
    pub point: TorusPoint2<S>,
    pub iterates: usize,
}

pub fn first_return<S: RealScalar>(
    map: &PiecewiseTorusMap<S>,
    region: impl Fn(&TorusPoint2<S>) -> bool,
    p: &TorusPoint2<S>,
    max_iter: usize,
) -> Result<TorusReturn<S>, TorusError> {
    let mut cur = p.clone();
    for n in 1..=max_iter {
        cur = map.apply(&cur)?;
        if region(&cur) {
            return Ok(TorusReturn {
                point: cur,
                iterates: n,
            });
        }
    }
    Err(TorusError::NoReturn(max_iter))
}

/// The two-branch strip map `Tˢ_θ` with breakpoint `1/φ²`:
///
/// * `u < 1/φ²`: `(u + 1 − 1/φ², v − φu + θ − 1/φ + (s+1)φ)`
/// * `u ≥ 1/φ²`: `(u − 1/φ², v − u/φ + θ + (s+1)/φ)`
pub fn strip_family(s: &QuadraticNumber, theta: &QuadraticNumber) -> PiecewiseTorusMap<QuadraticNumber> {
    let s1 = s.clone() + num(1);
    let zero = num(0);
    PiecewiseTorusMap::new(vec![
        TorusBranch {
            lo: zero.clone(),
            hi: inv_phi2(),
            shift: num(1) - inv_phi2(),
            c0: theta.clone() - inv_phi() + s1.clone() * phi(),
            c1: -phi(),
            c2: zero.clone(),
        },
        TorusBranch {
            lo: inv_phi2(),
            hi: num(1),
            shift: -inv_phi2(),
            c0: theta.clone() + s1 * inv_phi(),
            c1: -inv_phi(),
            c2: zero,
        },
    ])
}

/// `u ∈ [0, 1/φ²)`.
pub fn in_strip_base(p: &TorusPoint2<QuadraticNumber>) -> bool {
    p.u.lt(&inv_phi2())
}

/// Return count of the strip map to `[0, 1/φ²)`.
pub fn strip_return_count(u: &QuadraticNumber) -> usize {
    let map = strip_family(&num(-1), &num(0));
    let p = TorusPoint2::new(u.clone(), num(0));
    first_return(&map, in_strip_base, &p, 16)
        .expect("strip returns within a few steps")
        .iterates
}

/// `(a, b, θ′)` of the renormalization `Φ(u, v) = (φ²u, a·u² + b·u + v)`.
pub fn renormalization_parameters(
    s: &QuadraticNumber,
    s2: &QuadraticNumber,
    theta: &QuadraticNumber,
) -> (QuadraticNumber, QuadraticNumber, QuadraticNumber) {
    let s1 = s.clone() + num(1);
    let s21 = s2.clone() + num(1);
    let a = -phi3();
    let b = phi2() * theta.clone() + phi() * s1.clone() + phi2() * s21.clone() - phi();
    let theta2 = phi2() * theta.clone() + phi2() * s1 - s21;
    (a, b, theta2)
}

#[derive(Clone, Debug, Serialize)]
pub struct RenormalizationReport {
    pub s: String,
    pub s_prime: String,
    pub theta: String,
    pub a: String,
    pub b: String,
    pub theta_prime: String,
    pub points: usize,
    pub mismatches: usize,
    pub witness: Option<String>,
    pub passed: bool,
}

/// Checks `Φ ∘ T_ind = T^{s′}_{θ′} ∘ Φ` exactly on sample points of the
/// base strip `[0, 1/φ²) × [0, 1)`.
pub fn renormalization_check(
    s: &QuadraticNumber,
    s2: &QuadraticNumber,
    theta: &QuadraticNumber,
    rng: &mut SampleRng,
    points: usize,
) -> RenormalizationReport {
    let (a, b, theta2) = renormalization_parameters(s, s2, theta);
    let source = strip_family(s, theta);
    let target = strip_family(s2, &theta2);
    let transfer = |p: &TorusPoint2<QuadraticNumber>| {
        TorusPoint2::new(
            phi2() * p.u.clone(),
            a.clone() * p.u.clone() * p.u.clone() + b.clone() * p.u.clone() + p.v.clone(),
        )
    };
    let ctx = QuadraticContext::golden();
    let mut mismatches = 0;
    let mut witness = None;
    for i in 0..points {
        let u = if i == 0 {
            num(0)
        } else {
            sampling::quadratic_in(rng, &ctx, &num(0), &inv_phi2())
        };
        let v = sampling::quadratic(rng, &ctx, 2, 20).frac();
        let p = TorusPoint2::new(u, v);
        let induced = first_return(&source, in_strip_base, &p, 16).expect("strip return");
        let lhs = transfer(&induced.point);
        let rhs = target.apply(&transfer(&p)).expect("target map covers the torus");
        if lhs != rhs {
            mismatches += 1;
            if witness.is_none() {
                witness = Some(format!("u={}, v={}", p.u, p.v));
            }
        }
    }
    RenormalizationReport {
        s: s.to_string(),
        s_prime: s2.to_string(),
        theta: theta.to_string(),
        a: a.to_string(),
        b: b.to_string(),
        theta_prime: theta2.to_string(),
        points,
        mismatches,
        witness,
        passed: mismatches == 0,
    }
}

/// `ψ(y) = −φy − 1/φ` on `[0, 1/φ²)` and `−y/φ` on `[1/φ², 1]`.
pub fn psi(y: &QuadraticNumber) -> QuadraticNumber {
    if y.lt(&inv_phi2()) {
        -(phi() * y.clone()) - inv_phi()
    } else {
        -(y.clone() * inv_phi())
    }
}

/// `p(y) = −y²/2 − y/2`.
pub fn coboundary_p(y: &QuadraticNumber) -> QuadraticNumber {
    -((y.clone() * y.clone() + y.clone()).halved())
}

/// Right side of the coboundary identity with the sign of the constant
/// term given by `sign`: `p(y − 1/φ² mod 1) − p(y) − y + sign/(2φ³)`.
pub fn coboundary_rhs(y: &QuadraticNumber, sign: i64) -> QuadraticNumber {
    let shifted = (y.clone() - inv_phi2()).frac();
    coboundary_p(&shifted) - coboundary_p(y) - y.clone() + (inv_phi3() * num(sign)).halved()
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiReport {
    pub psi_at_0: String,
    pub psi_at_1: String,
    pub endpoints_equal_minus_inv_phi: bool,
    pub jump_at_breakpoint: String,
    pub jump_expected: String,
    pub jump_matches_expected: bool,
    pub jump_is_integer: bool,
    pub psi_at_half: String,
    pub points: usize,
    pub corrected_identity_failures: usize,
    pub printed_identity_failures: usize,
    pub witness: Option<String>,
}

impl PsiReport {
    /// Every asserted property holds, including the expected jump value.
    pub fn passed(&self) -> bool {
        self.endpoints_equal_minus_inv_phi
            && self.jump_matches_expected
            && self.corrected_identity_failures == 0
    }
}

pub fn psi_identity_check(rng: &mut SampleRng, points: usize) -> PsiReport {
    let ctx = QuadraticContext::golden();
    let psi0 = psi(&num(0));
    let psi1 = psi(&num(1));
    let bp = inv_phi2();
    // left limit from the first branch formula, right value from the second
    let left = -(phi() * bp.clone()) - inv_phi();
    let right = psi(&bp);
    let jump = right - left;
    let expected = num(-1);
    let mut corrected_failures = 0;
    let mut printed_failures = 0;
    let mut witness = None;
    for i in 0..points {
        let y = match i {
            0 => num(0),
            1 => q("1/2"),
            2 => q("1/5"),
            3 => inv_phi2(),
            4 => inv_phi4(),
            _ if i % 2 == 0 => sampling::quadratic(rng, &ctx, 2, 30).frac(),
            _ => ctx.rational(sampling::unit_rational(rng, 500)),
        };
        let lhs = psi(&y);
        if lhs != coboundary_rhs(&y, -1) {
            corrected_failures += 1;
            if witness.is_none() {
                witness = Some(y.to_string());
            }
        }
        if lhs != coboundary_rhs(&y, 1) {
            printed_failures += 1;
        }
    }
    PsiReport {
        psi_at_0: psi0.to_string(),
        psi_at_1: psi1.to_string(),
        endpoints_equal_minus_inv_phi: psi0 == -inv_phi() && psi1 == -inv_phi(),
        jump_matches_expected: jump == expected,
        jump_is_integer: jump.is_rational() && jump.a().is_integer(),
        jump_at_breakpoint: jump.to_string(),
        jump_expected: expected.to_string(),
        psi_at_half: psi(&q("1/2")).to_string(),
        points,
        corrected_identity_failures: corrected_failures,
        printed_identity_failures: printed_failures,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng;

    #[test]
    fn strip_map_examples() {
        let t = strip_family(&num(-1), &num(0));
        assert!(t.partitions_unit_interval());
        assert_eq!(t.branches[0].hi, q("2-l"));
        let img = t.apply(&TorusPoint2::new(num(0), num(0))).unwrap();
        assert_eq!(img, TorusPoint2::new(inv_phi(), inv_phi2()));
    }

    #[test]
    fn return_counts() {
        assert_eq!(strip_return_count(&q("1/10")), 2);
        assert_eq!(strip_return_count(&q("1/5")), 3);
        assert_eq!(strip_return_count(&num(0)), 2);
        assert_eq!(strip_return_count(&inv_phi4()), 3);
        let t = strip_family(&num(-1), &num(0));
        let all = first_return(&t, |_| true, &TorusPoint2::new(q("1/3"), q("1/7")), 4).unwrap();
        assert_eq!(all.iterates, 1);
    }

    #[test]
    fn renormalization_parameters_examples() {
        let (a, b, th) = renormalization_parameters(&num(-1), &num(-1), &num(0));
        assert_eq!(a, -phi3());
        assert_eq!(b, -phi());
        assert_eq!(th, num(0));
        let (_, _, th) = renormalization_parameters(&num(-1), &num(-1), &num(1));
        assert_eq!(th, phi2());
    }

    #[test]
    fn renormalization_holds_at_default_parameters() {
        let r = renormalization_check(&num(-1), &num(-1), &num(0), &mut rng(1), 20);
        assert!(r.passed, "{r:?}");
        let r = renormalization_check(&q("1/3"), &q("-2/7"), &q("3/5"), &mut rng(2), 20);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn compose_and_invert_stay_in_class() {
        let t = strip_family(&q("1/2"), &q("1/3"));
        let inv = t.inverse();
        assert!(inv.partitions_unit_interval());
        let id = t.compose(&inv).simplified();
        assert!(id.partitions_unit_interval());
        for b in &id.branches {
            assert!(b.shift.is_zero() && b.c1.is_zero() && b.c2.is_zero());
            assert!(b.c0.frac().is_zero());
        }
        let t2 = t.compose(&t);
        let p = TorusPoint2::new(q("1/7"), q("2/9"));
        assert_eq!(t2.apply(&p).unwrap(), t.apply(&t.apply(&p).unwrap()).unwrap());
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(&num(0)), -inv_phi());
        assert_eq!(psi(&q("1/2")), -(inv_phi().halved()));
        assert_eq!(psi(&q("1/2")), coboundary_rhs(&q("1/2"), -1));
        assert_ne!(psi(&q("1/2")), coboundary_rhs(&q("1/2"), 1));
        let r = psi_identity_check(&mut rng(3), 30);
        assert_eq!(r.corrected_identity_failures, 0);
        assert_eq!(r.printed_identity_failures, 30);
        assert!(r.jump_is_integer);
        assert_eq!(r.jump_at_breakpoint, "1");
    }
}
