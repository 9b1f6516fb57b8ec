//! Birkhoff averages of torus characters along float orbits.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::factorization::{Eigen, EigenData, HeisenbergEndo};
use crate::freegroup::Endomorphism;
use crate::heisenberg::{canonicalize_f64, AlgebraVector, GroupPoint};

/// Orbits whose Weyl sums are measured. Each yields a point `(u, v)` of
/// the unit square per step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum System {
    /// `(y, z) ↦ (y + 1/φ², z + y − 1/(2φ³))`.
    SkewMap,
    /// The expanding Fibonacci flow sampled at step [`NILFLOW_STEP`],
    /// observed through `(x, z)` of the cube representative.
    FibonacciNilflow,
}

/// Sampling step of the nilflow. The time-one map keeps `x + y` fixed mod 1,
/// so an irrational step is used.
pub const NILFLOW_STEP: f64 = PI / 50.0;

pub const DEFAULT_THRESHOLD: f64 = 0.05;

#[derive(Clone, Debug, Serialize)]
pub struct CharacterSum {
    pub p: i64,
    pub q: i64,
    pub modulus: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    pub system: System,
    pub iterates: usize,
    pub max_index: i64,
    pub threshold: f64,
    pub sums: Vec<CharacterSum>,
    pub max_modulus: f64,
    /// Iterate counts tried before this one.
    pub escalated_from: Vec<usize>,
    pub passed: bool,
}

fn orbit_visit(system: System, n: usize, mut visit: impl FnMut(f64, f64)) {
    match system {
        System::SkewMap => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            let rho = 1.0 / (phi * phi);
            let c = 1.0 / (2.0 * phi * phi * phi);
            let (mut u, mut v) = (0.0f64, 0.0f64);
            for _ in 0..n {
                visit(u, v);
                let nv = v + u - c;
                u = (u + rho).rem_euclid(1.0);
                v = nv.rem_euclid(1.0);
            }
        }
        System::FibonacciNilflow => {
            let e = EigenData::oriented(&HeisenbergEndo::factor(&Endomorphism::fibonacci()))
                .expect("Fibonacci data is oriented");
            let v = e.flow(Eigen::Expanding);
            let v = AlgebraVector::new(v.alpha.to_f64(), v.beta.to_f64(), v.gamma.to_f64());
            let step = v.exp_t(&NILFLOW_STEP);
            let mut g = GroupPoint::new(0.0, 0.0, 0.0);
            for _ in 0..n {
                visit(g.x, g.z);
                g = canonicalize_f64(&step.mul(&g));
            }
        }
    }
}

/// Averages of `exp(2πi(p·u + q·v))` for `0 < max(|p|, |q|) ≤ max_index`,
/// and `(0, 0)` first.
pub fn weyl_sums(system: System, n: usize, max_index: i64) -> Vec<CharacterSum> {
    let k = max_index as usize;
    let width = 2 * k + 1;
    let mut acc = vec![Complex64::new(0.0, 0.0); width * width];
    let mut pu = vec![Complex64::new(1.0, 0.0); width];
    let mut pv = vec![Complex64::new(1.0, 0.0); width];
    orbit_visit(system, n, |u, v| {
        let eu = Complex64::from_polar(1.0, 2.0 * PI * u);
        let ev = Complex64::from_polar(1.0, 2.0 * PI * v);
        for j in 1..=k {
            pu[k + j] = pu[k + j - 1] * eu;
            pu[k - j] = pu[k + j].conj();
            pv[k + j] = pv[k + j - 1] * ev;
            pv[k - j] = pv[k + j].conj();
        }
        for a in 0..width {
            for b in 0..width {
                acc[a * width + b] += pu[a] * pv[b];
            }
        }
    });
    let mut out = vec![CharacterSum {
        p: 0,
        q: 0,
        modulus: acc[k * width + k].norm() / n as f64,
    }];
    for a in 0..width {
        for b in 0..width {
            if a == k && b == k {
                continue;
            }
            out.push(CharacterSum {
                p: a as i64 - max_index,
                q: b as i64 - max_index,
                modulus: acc[a * width + b].norm() / n as f64,
            });
        }
    }
    out
}

/// Runs the Weyl-sum test at each iterate count in turn, stopping at the
/// first that passes.
pub fn equidistribution(system: System, counts: &[usize], max_index: i64, threshold: f64) -> WeylReport {
    let mut tried = Vec::new();
    let mut report = None;
    for &n in counts {
        let sums = weyl_sums(system, n, max_index);
        let max_modulus = sums[1..].iter().map(|c| c.modulus).fold(0.0, f64::max);
        let passed = max_modulus < threshold;
        report = Some(WeylReport {
            system,
            iterates: n,
            max_index,
            threshold,
            sums,
            max_modulus,
            escalated_from: tried.clone(),
            passed,
        });
        if passed {
            break;
        }
        tried.push(n);
    }
    report.expect("at least one iterate count")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_character() {
        let s = weyl_sums(System::SkewMap, 1000, 1);
        assert_eq!((s[0].p, s[0].q), (0, 0));
        assert!((s[0].modulus - 1.0).abs() < 1e-12);
        assert_eq!(s.len(), 9);
    }

    #[test]
    fn skew_map_small() {
        let r = equidistribution(System::SkewMap, &[100_000], 1, 0.05);
        assert!(r.passed, "{:?}", r.max_modulus);
    }
}
