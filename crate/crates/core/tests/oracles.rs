//! Known values computed by hand.

use nilrenorm::dynamics::counterexample::{fibonacci_matrix_data, gamma_zero};
use nilrenorm::dynamics::diagonal::{diag_section, fibonacci_linear_endo, golden_skew_map};
use nilrenorm::dynamics::golden::{inv_phi, inv_phi2, inv_phi4, num, q};
use nilrenorm::dynamics::torus::{psi, strip_return_count, TorusPoint2};
use nilrenorm::factorization::{EigenData, HeisenbergEndo};
use nilrenorm::freegroup::{broken_line, Endomorphism, Word};
use nilrenorm::heisenberg::{canonicalize, AlgebraVector, GroupPoint};
use nilrenorm::scalar::{rat, QuadraticContext, QuadraticNumber};

fn fib() -> EigenData {
    EigenData::oriented(&HeisenbergEndo::factor(&Endomorphism::fibonacci())).unwrap()
}

#[test]
fn group_law_by_hand() {
    let a = GroupPoint::new(rat(1, 1), rat(2, 1), rat(3, 1));
    let b = GroupPoint::new(rat(4, 1), rat(5, 1), rat(6, 1));
    assert_eq!(a.mul(&b), GroupPoint::new(rat(5, 1), rat(7, 1), rat(14, 1)));
    assert_eq!(a.inv(), GroupPoint::new(rat(-1, 1), rat(-2, 1), rat(-1, 1)));
    let v = AlgebraVector::new(rat(2, 1), rat(3, 1), rat(0, 1));
    assert_eq!(v.exp(), GroupPoint::new(rat(2, 1), rat(3, 1), rat(3, 1)));
}

#[test]
fn canonical_representative() {
    let ctx = QuadraticContext::golden();
    let g = GroupPoint::new(ctx.lambda(), q("-1/2"), q("7/3"));
    let c = canonicalize(&g);
    assert_eq!(c.rep.x, q("-1+l"));
    assert_eq!(c.rep.y, q("1/2"));
    assert!(c.rep.z.to_f64() >= 0.0 && c.rep.z.to_f64() < 1.0);
    assert_eq!(g.mul_lattice(&c.witness), c.rep);
}

#[test]
fn golden_field() {
    let l = QuadraticContext::golden().lambda();
    assert_eq!(l.clone() * l.clone(), l.clone() + num(1));
    assert_eq!(num(1) / l.clone(), l - num(1));
    assert_eq!(inv_phi().to_ab_string(), "a=-1,b=1");
    let x = QuadraticNumber::parse("1/2-l", &QuadraticContext::golden()).unwrap();
    assert_eq!(x.to_ab_string(), "a=1/2,b=-1");
    assert_eq!(QuadraticNumber::parse("a=1/2,b=−1", &QuadraticContext::golden()).unwrap(), x);
}

#[test]
fn fibonacci_words() {
    let s = Endomorphism::fibonacci();
    assert_eq!(s.fixed_point_prefix(13).unwrap().to_string(), "abaababaabaab");
    assert_eq!(s.abelianization(), [[1, 1], [1, 0]]);
    assert_eq!(Word::parse("abBA").unwrap().to_string(), "");
}

#[test]
fn broken_line_counts_pairs() {
    // "abaab": pairs a-before-b are 1 + 3 = 4
    let pts = broken_line(&Word::parse("abaab").unwrap());
    let last = pts.last().unwrap();
    assert_eq!((last.a, last.b, last.c), (3, 2, 4));
}

#[test]
fn fibonacci_eigen_data() {
    let e = fib();
    assert_eq!(e.alpha, q("-1+l"));
    assert_eq!(e.beta, q("2-l"));
    assert_eq!(e.gamma, q("-3/2+l"));
    assert_eq!(e.delta, q("-3+l"));
    assert_eq!(e.t_a, q("1/5+3/5*l"));
    assert_eq!(e.t_b, q("2/5+1/5*l"));
    assert_eq!(e.s_a, q("-3/5+1/5*l"));
    assert_eq!(e.s_b, q("-1/5+2/5*l"));
}

#[test]
fn strip_return_counts_at_breakpoints() {
    assert_eq!(strip_return_count(&num(0)), 2);
    assert_eq!(strip_return_count(&inv_phi4()), 3);
    assert_eq!(strip_return_count(&(inv_phi2() - q("1/1000000"))), 3);
}

#[test]
fn psi_values() {
    assert_eq!(psi(&num(0)), -inv_phi());
    assert_eq!(psi(&num(1)), -inv_phi());
    assert_eq!(psi(&q("1/2")), q("1/2-1/2*l"));
}

#[test]
fn golden_skew_map_image() {
    let p = golden_skew_map().apply(&TorusPoint2::new(q("1/2"), q("0"))).unwrap();
    // (1/2 + 1/φ², 1/2 − 1/(2φ³)) mod 1
    assert_eq!(p, TorusPoint2::new(q("5/2-l"), q("2-l")));
}

#[test]
fn diagonal_generator() {
    let d = diag_section(&EigenData::oriented(&fibonacci_linear_endo()).unwrap());
    assert_eq!(d.generator, GroupPoint::new(q("-1+l"), q("2-l"), q("0")));
}

#[test]
fn gamma_zero_fibonacci() {
    assert_eq!(gamma_zero(&fibonacci_matrix_data()), q("3/2-l"));
}
