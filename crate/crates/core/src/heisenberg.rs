//! The Heisenberg group `ℍ₃(ℝ)` in coordinates `[x, y, z]`, its Lie
//! algebra, flows, and reduction modulo the integer lattice.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::scalar::{RealScalar, Scalar};

/// Group element `[x, y, z]`, i.e. the unipotent matrix with entries x, y
/// above the diagonal and z in the corner.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPoint<S> {
    pub x: S,
    pub y: S,
    pub z: S,
}

/// Lie algebra vector `(α, β, γ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraVector<S> {
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
}

/// Element `[n, m, p]` of the integer lattice `Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub n: BigInt,
    pub m: BigInt,
    pub p: BigInt,
}

impl LatticePoint {
    pub fn new(n: impl Into<BigInt>, m: impl Into<BigInt>, p: impl Into<BigInt>) -> Self {
        LatticePoint {
            n: n.into(),
            m: m.into(),
            p: p.into(),
        }
    }

    pub fn identity() -> Self {
        LatticePoint::new(0, 0, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.n.is_zero() && self.m.is_zero() && self.p.is_zero()
    }

    pub fn to_point<S: Scalar>(&self, like: &S) -> GroupPoint<S> {
        GroupPoint::new(
            like.from_int_like(&self.n),
            like.from_int_like(&self.m),
            like.from_int_like(&self.p),
        )
    }

    pub fn mul(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint {
            n: &self.n + &other.n,
            m: &self.m + &other.m,
            p: &self.p + &other.p + &self.n * &other.m,
        }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.n, self.m, self.p)
    }
}

impl<S: fmt::Display> fmt::Display for GroupPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.x, self.y, self.z)
    }
}

impl<S: fmt::Display> fmt::Display for AlgebraVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

impl<S: Scalar> GroupPoint<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        GroupPoint { x, y, z }
    }

    pub fn identity_like(like: &S) -> Self {
        GroupPoint::new(like.zero_like(), like.zero_like(), like.zero_like())
    }

    pub fn is_identity(&self) -> bool {
        self.x.vanishes() && self.y.vanishes() && self.z.vanishes()
    }

    /// `[x,y,z]•[x′,y′,z′] = [x+x′, y+y′, z+z′+xy′]`.
    pub fn mul(&self, o: &GroupPoint<S>) -> GroupPoint<S> {
        GroupPoint::new(
            self.x.clone() + o.x.clone(),
            self.y.clone() + o.y.clone(),
            self.z.clone() + o.z.clone() + self.x.clone() * o.y.clone(),
        )
    }

    pub fn inv(&self) -> GroupPoint<S> {
        GroupPoint::new(
            -self.x.clone(),
            -self.y.clone(),
            self.x.clone() * self.y.clone() - self.z.clone(),
        )
    }

    /// `a•b•a⁻¹•b⁻¹`.
    pub fn commutator(&self, o: &GroupPoint<S>) -> GroupPoint<S> {
        self.mul(o).mul(&self.inv()).mul(&o.inv())
    }

    pub fn mul_lattice(&self, l: &LatticePoint) -> GroupPoint<S> {
        self.mul(&l.to_point(&self.x))
    }

    pub fn log(&self) -> AlgebraVector<S> {
        AlgebraVector::new(
            self.x.clone(),
            self.y.clone(),
            self.z.clone() - (self.x.clone() * self.y.clone()).halved(),
        )
    }

    /// Fourth power of the homogeneous group norm, `(x²+y²)² + (z − xy/2)²`.
    pub fn norm4(&self) -> S {
        let r2 = self.x.clone() * self.x.clone() + self.y.clone() * self.y.clone();
        let c = self.z.clone() - (self.x.clone() * self.y.clone()).halved();
        r2.clone() * r2 + c.clone() * c
    }

    /// Dilation `[xt, yt, zt²]`.
    pub fn dilate(&self, t: &S) -> GroupPoint<S> {
        GroupPoint::new(
            self.x.clone() * t.clone(),
            self.y.clone() * t.clone(),
            self.z.clone() * t.clone() * t.clone(),
        )
    }

    /// Shift of the central coordinate (the flow of `(0,0,1)`).
    pub fn central_flow(&self, t: &S) -> GroupPoint<S> {
        GroupPoint::new(self.x.clone(), self.y.clone(), self.z.clone() + t.clone())
    }

    pub fn to_f64(&self) -> GroupPoint<f64> {
        GroupPoint::new(self.x.approx(), self.y.approx(), self.z.approx())
    }
}

/// Left-invariant distance `‖a⁻¹•b‖` in floating point.
pub fn dist<S: Scalar>(a: &GroupPoint<S>, b: &GroupPoint<S>) -> f64 {
    let d = a.inv().mul(b).to_f64();
    d.norm4().max(0.0).powf(0.25)
}

impl<S: Scalar> AlgebraVector<S> {
    pub fn new(alpha: S, beta: S, gamma: S) -> Self {
        AlgebraVector { alpha, beta, gamma }
    }

    pub fn central(like: &S) -> Self {
        AlgebraVector::new(like.zero_like(), like.zero_like(), like.one_like())
    }

    pub fn add(&self, o: &Self) -> Self {
        AlgebraVector::new(
            self.alpha.clone() + o.alpha.clone(),
            self.beta.clone() + o.beta.clone(),
            self.gamma.clone() + o.gamma.clone(),
        )
    }

    pub fn scale(&self, t: &S) -> Self {
        AlgebraVector::new(
            self.alpha.clone() * t.clone(),
            self.beta.clone() * t.clone(),
            self.gamma.clone() * t.clone(),
        )
    }

    /// `exp(α,β,γ) = [α, β, γ + αβ/2]`.
    pub fn exp(&self) -> GroupPoint<S> {
        GroupPoint::new(
            self.alpha.clone(),
            self.beta.clone(),
            self.gamma.clone() + (self.alpha.clone() * self.beta.clone()).halved(),
        )
    }

    /// `[u, v] = (0, 0, (αβ′ − α′β)/2)`.
    pub fn bracket(&self, o: &Self) -> Self {
        let zero = self.alpha.zero_like();
        let c = self.alpha.clone() * o.beta.clone() - o.alpha.clone() * self.beta.clone();
        AlgebraVector::new(zero.clone(), zero, c.halved())
    }

    /// `exp(t·v)`, i.e. `[αt, βt, γt + (αβ/2)t²]`.
    pub fn exp_t(&self, t: &S) -> GroupPoint<S> {
        self.scale(t).exp()
    }

    /// The flow `Φᵗ(g) = exp(t·v)•g`.
    pub fn flow(&self, t: &S, g: &GroupPoint<S>) -> GroupPoint<S> {
        self.exp_t(t).mul(g)
    }

    /// Translation by `exp(v)`, i.e. the flow at time one.
    pub fn translate(&self, g: &GroupPoint<S>) -> GroupPoint<S> {
        self.exp().mul(g)
    }
}

/// A point of the nilmanifold: the representative in `[0,1)³` of the right
/// coset `gΓ`, together with the lattice element used to reach it.
#[derive(Clone, Debug, PartialEq)]
pub struct NilPoint<S> {
    pub rep: GroupPoint<S>,
    pub witness: LatticePoint,
}

/// Reduces `g` into the fundamental cube: `g•[n,m,p]` with
/// `n = −⌊x⌋`, `m = −⌊y⌋`, `p = −⌊z + x·m⌋`.
pub fn canonicalize<S: RealScalar>(g: &GroupPoint<S>) -> NilPoint<S> {
    let n = -g.x.floor_int();
    let m = -g.y.floor_int();
    let zm = g.z.clone() + g.x.clone() * g.x.from_int_like(&m);
    let p = -zm.floor_int();
    let witness = LatticePoint { n, m, p };
    let rep = g.mul_lattice(&witness);
    NilPoint { rep, witness }
}

/// Whether `a` and `b` lie in the same right coset of `Γ`.
pub fn coset_eq<S: RealScalar>(a: &GroupPoint<S>, b: &GroupPoint<S>) -> bool {
    canonicalize(a).rep == canonicalize(b).rep
}

/// Floating point cube reduction used by long orbit experiments.
pub fn canonicalize_f64(g: &GroupPoint<f64>) -> GroupPoint<f64> {
    let m = -g.y.floor();
    let x = g.x - g.x.floor();
    let y = g.y + m;
    let z = g.z + g.x * m;
    // z + x·m uses the original x; the shift in x does not touch z.
    let z = z - z.floor();
    GroupPoint::new(wrap_unit(x), wrap_unit(y), wrap_unit(z))
}

fn wrap_unit(v: f64) -> f64 {
    if v >= 1.0 {
        v - 1.0
    } else if v < 0.0 {
        v + 1.0
    } else {
        v
    }
}

/// Lattice element as machine integers, when small enough.
pub fn lattice_to_i64(l: &LatticePoint) -> Option<(i64, i64, i64)> {
    Some((l.n.to_i64()?, l.m.to_i64()?, l.p.to_i64()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    fn p(x: Rational, y: Rational, z: Rational) -> GroupPoint<Rational> {
        GroupPoint::new(x, y, z)
    }

    fn pi(x: i64, y: i64, z: i64) -> GroupPoint<Rational> {
        p(int(x), int(y), int(z))
    }

    #[test]
    fn group_law_examples() {
        assert_eq!(pi(1, 0, 0).mul(&pi(0, 1, 0)), pi(1, 1, 1));
        assert_eq!(pi(1, 2, 3).inv(), pi(-1, -2, -1));
        assert_eq!(pi(1, 0, 0).commutator(&pi(0, 1, 0)), pi(0, 0, 1));
    }

    #[test]
    fn exp_and_log() {
        let v = AlgebraVector::new(int(1), int(1), int(0));
        assert_eq!(v.exp(), p(int(1), int(1), rat(1, 2)));
        assert_eq!(pi(1, 1, 1).log(), AlgebraVector::new(int(1), int(1), rat(1, 2)));
        let c = AlgebraVector::new(int(0), int(0), rat(7, 3));
        assert_eq!(c.exp(), p(int(0), int(0), rat(7, 3)));
    }

    #[test]
    fn bracket_examples() {
        let u = AlgebraVector::new(int(1), int(0), int(0));
        let v = AlgebraVector::new(int(0), int(1), int(0));
        assert_eq!(u.bracket(&v), AlgebraVector::new(int(0), int(0), rat(1, 2)));
        assert_eq!(u.bracket(&u), AlgebraVector::new(int(0), int(0), int(0)));
        let lhs = u.add(&v).exp().mul(&u.bracket(&v).exp());
        assert_eq!(lhs, pi(1, 1, 1));
        assert_eq!(lhs, u.exp().mul(&v.exp()));
    }

    #[test]
    fn norms() {
        assert_eq!(pi(0, 0, 1).norm4(), int(1));
        assert_eq!(p(int(1), int(1), rat(1, 2)).norm4(), int(4));
        assert_eq!(pi(1, 2, 3).norm4(), int(29));
        assert_eq!(pi(-1, -2, -1).norm4(), int(29));
        assert_eq!(pi(1, 2, 3).dilate(&int(3)).norm4(), int(81 * 29));
    }

    #[test]
    fn dilation() {
        assert_eq!(pi(1, 1, 1).dilate(&int(2)), pi(2, 2, 4));
        assert_eq!(pi(4, -1, 7).dilate(&int(1)), pi(4, -1, 7));
    }

    #[test]
    fn canonical_representatives() {
        let g = p(rat(3, 2), rat(-1, 4), int(2));
        let c = canonicalize(&g);
        assert_eq!(c.rep, p(rat(1, 2), rat(3, 4), rat(1, 2)));
        assert_eq!(c.witness, LatticePoint::new(-1, 1, -3));
        assert_eq!(g.mul_lattice(&c.witness), c.rep);
        assert_eq!(canonicalize(&pi(0, 0, 0)).rep, pi(0, 0, 0));
        assert!(coset_eq(&pi(0, 0, 0), &pi(1, 1, 1)));
        assert!(!coset_eq(&pi(0, 0, 0), &p(int(0), int(0), rat(1, 2))));
    }

    #[test]
    fn float_canonicalization_agrees_with_exact() {
        let g = p(rat(-7, 3), rat(13, 5), rat(-11, 7));
        let exact = canonicalize(&g).rep.to_f64();
        let float = canonicalize_f64(&g.to_f64());
        assert!((exact.x - float.x).abs() < 1e-12);
        assert!((exact.y - float.y).abs() < 1e-12);
        assert!((exact.z - float.z).abs() < 1e-12);
    }
}
