//! Lattice automorphisms `𝔖_σ` attached to free-group endomorphisms,
//! their eigenflows, and the geometry of the invariant surface.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Roots;
use serde::Serialize;
use thiserror::Error;

use crate::freegroup::{Endomorphism, Letter, Word};
use crate::heisenberg::{AlgebraVector, GroupPoint, LatticePoint};
use crate::scalar::{int, rat, QuadraticContext, QuadraticNumber, Rational, RealScalar, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorizationError {
    #[error("endomorphism is not invertible (det = {0})")]
    NotInvertible(i64),
    #[error("matrix is not hyperbolic unimodular: {0}")]
    Hypothesis(String),
    #[error("eigenvalue equals the determinant; gamma is undefined")]
    EigenvalueEqualsDet,
    #[error("eigen-directions are not oriented for the section construction: {0}")]
    NotOriented(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `[x,y,z] ↦ [Ax+By, Cx+Dy, det·z + P(x,y)]` with
/// `P = AC/2·x(x−1) + BD/2·y(y−1) + BC·xy + e·x + f·y`.
///
/// The images of the generators are `n_a ↦ [A, C, e]` and `n_b ↦ [B, D, f]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HeisenbergEndo {
    pub m_aa: i64,
    pub m_ab: i64,
    pub m_ba: i64,
    pub m_bb: i64,
    pub e: i64,
    pub f: i64,
}

impl fmt::Debug for HeisenbergEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Endo([[{}, {}], [{}, {}]], e={}, f={})",
            self.m_aa, self.m_ab, self.m_ba, self.m_bb, self.e, self.f
        )
    }
}

fn letter_point(l: Letter) -> LatticePoint {
    match l {
        Letter::A => LatticePoint::new(1, 0, 0),
        Letter::B => LatticePoint::new(0, 1, 0),
        Letter::AInv => LatticePoint::new(-1, 0, 0),
        Letter::BInv => LatticePoint::new(0, -1, 0),
    }
}

/// Product of the generator matrices along a word.
pub fn word_point(w: &Word) -> LatticePoint {
    w.letters()
        .iter()
        .fold(LatticePoint::identity(), |acc, &l| acc.mul(&letter_point(l)))
}

fn to_i64(v: &BigInt) -> i64 {
    i64::try_from(v).expect("lattice coordinate exceeds i64")
}

impl HeisenbergEndo {
    pub fn new(m: [[i64; 2]; 2], e: i64, f: i64) -> Self {
        HeisenbergEndo {
            m_aa: m[0][0],
            m_ab: m[0][1],
            m_ba: m[1][0],
            m_bb: m[1][1],
            e,
            f,
        }
    }

    pub fn identity() -> Self {
        HeisenbergEndo::new([[1, 0], [0, 1]], 0, 0)
    }

    /// `[x,y,z] ↦ [−x, y, −z]`.
    pub fn reflection() -> Self {
        HeisenbergEndo::new([[-1, 0], [0, 1]], 0, 0)
    }

    /// Builds `𝔖_σ` from the products of generators along `σ(a)`, `σ(b)`.
    pub fn factor(sigma: &Endomorphism) -> Self {
        let ia = word_point(&sigma.image_a);
        let ib = word_point(&sigma.image_b);
        HeisenbergEndo {
            m_aa: to_i64(&ia.n),
            m_ba: to_i64(&ia.m),
            e: to_i64(&ia.p),
            m_ab: to_i64(&ib.n),
            m_bb: to_i64(&ib.m),
            f: to_i64(&ib.p),
        }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        [[self.m_aa, self.m_ab], [self.m_ba, self.m_bb]]
    }

    pub fn det(&self) -> i64 {
        self.m_aa * self.m_bb - self.m_ab * self.m_ba
    }

    pub fn trace(&self) -> i64 {
        self.m_aa + self.m_bb
    }

    pub fn is_automorphism(&self) -> bool {
        self.det().abs() == 1
    }

    pub fn apply<S: Scalar>(&self, g: &GroupPoint<S>) -> GroupPoint<S> {
        let k = |n: i64| g.x.from_rational_like(&int(n));
        let (x, y, z) = (&g.x, &g.y, &g.z);
        let one = x.one_like();
        let nx = k(self.m_aa) * x.clone() + k(self.m_ab) * y.clone();
        let ny = k(self.m_ba) * x.clone() + k(self.m_bb) * y.clone();
        let p = (k(self.m_aa * self.m_ba) * x.clone() * (x.clone() - one.clone())).halved()
            + (k(self.m_ab * self.m_bb) * y.clone() * (y.clone() - one)).halved()
            + k(self.m_ab * self.m_ba) * x.clone() * y.clone()
            + k(self.e) * x.clone()
            + k(self.f) * y.clone();
        let nz = k(self.det()) * z.clone() + p;
        GroupPoint::new(nx, ny, nz)
    }

    pub fn apply_lattice(&self, l: &LatticePoint) -> LatticePoint {
        let g = l.to_point(&int(0));
        let r = self.apply(&g);
        let whole = |v: &Rational| {
            assert!(v.is_integer(), "lattice image is not integral");
            v.to_integer()
        };
        LatticePoint {
            n: whole(&r.x),
            m: whole(&r.y),
            p: whole(&r.z),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &HeisenbergEndo) -> HeisenbergEndo {
        let ia = self.apply_lattice(&LatticePoint::new(other.m_aa, other.m_ba, other.e));
        let ib = self.apply_lattice(&LatticePoint::new(other.m_ab, other.m_bb, other.f));
        HeisenbergEndo {
            m_aa: to_i64(&ia.n),
            m_ba: to_i64(&ia.m),
            e: to_i64(&ia.p),
            m_ab: to_i64(&ib.n),
            m_bb: to_i64(&ib.m),
            f: to_i64(&ib.p),
        }
    }

    pub fn invert(&self) -> Result<HeisenbergEndo, FactorizationError> {
        let det = self.det();
        if det.abs() != 1 {
            return Err(FactorizationError::NotInvertible(det));
        }
        // M⁻¹ = det·[[D, −B], [−C, A]]
        let (a2, c2) = (det * self.m_bb, -det * self.m_ba);
        let (b2, d2) = (-det * self.m_ab, det * self.m_aa);
        // the central coordinate p of L⁻¹(n_a) solves det·p + P(a2, c2) = 0
        let solve = |x: i64, y: i64| {
            let image = self.apply_lattice(&LatticePoint::new(x, y, 0));
            -det * to_i64(&image.p)
        };
        let inv = HeisenbergEndo {
            m_aa: a2,
            m_ab: b2,
            m_ba: c2,
            m_bb: d2,
            e: solve(a2, c2),
            f: solve(b2, d2),
        };
        debug_assert_eq!(self.compose(&inv), HeisenbergEndo::identity());
        Ok(inv)
    }

    pub fn pow(&self, k: i64) -> Result<HeisenbergEndo, FactorizationError> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut n = k.unsigned_abs();
        let mut acc = HeisenbergEndo::identity();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(&sq);
            }
            n >>= 1;
            if n > 0 {
                sq = sq.compose(&sq);
            }
        }
        Ok(acc)
    }

    /// Human-readable formula of the central row.
    pub fn z_row(&self) -> String {
        let mut terms = vec![format!("{}*z", self.det())];
        let mut push = |coef: Rational, mono: &str| {
            if coef != int(0) {
                terms.push(format!("({coef})*{mono}"));
            }
        };
        push(rat(self.m_aa * self.m_ba, 2), "x*(x-1)");
        push(rat(self.m_ab * self.m_bb, 2), "y*(y-1)");
        push(int(self.m_ab * self.m_ba), "x*y");
        push(int(self.e), "x");
        push(int(self.f), "y");
        terms.join(" + ")
    }
}

/// Central row `det·z + Σ c·monomial` expanded in the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralRow {
    pub z: i64,
    pub xx: Rational,
    pub yy: Rational,
    pub xy: Rational,
    pub x: Rational,
    pub y: Rational,
}

impl HeisenbergEndo {
    pub fn central_row(&self) -> CentralRow {
        let ac = rat(self.m_aa * self.m_ba, 2);
        let bd = rat(self.m_ab * self.m_bb, 2);
        CentralRow {
            z: self.det(),
            xx: ac.clone(),
            yy: bd.clone(),
            xy: int(self.m_ab * self.m_ba),
            x: int(self.e) - ac,
            y: int(self.f) - bd,
        }
    }
}

/// Checks that the closed form agrees with the generator-product images on
/// a word: `𝔖_σ(∏ n_{w_i}) = ∏ 𝔖_σ(n_{w_i}) = ∏ n_{σ(w)_j}`.
pub fn closed_form_matches(sigma: &Endomorphism, w: &Word) -> bool {
    let endo = HeisenbergEndo::factor(sigma);
    let lhs = endo.apply_lattice(&word_point(w));
    let rhs = word_point(&sigma.apply(w));
    lhs == rhs
}

/// Outcome of the hyperbolicity test.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub trace: i64,
    pub det: i64,
    pub discriminant: i64,
    pub unimodular: bool,
    pub real_distinct: bool,
    pub irrational: bool,
    pub expanding: bool,
    pub lambda: Option<String>,
    pub lambda_float: Option<f64>,
    pub failures: Vec<String>,
    #[serde(skip)]
    pub context: Option<Arc<QuadraticContext>>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Dominant eigenvalue in the context of the larger root `μ`:
/// `μ` itself when the trace is positive, `T − μ` otherwise.
fn dominant_root(ctx: &Arc<QuadraticContext>, trace: i64) -> QuadraticNumber {
    let mu = ctx.lambda();
    if trace > 0 {
        mu
    } else {
        ctx.integer(trace) - mu
    }
}

pub fn check_hypothesis_h(l: &HeisenbergEndo) -> HypothesisReport {
    let (t, d) = (l.trace(), l.det());
    let disc = t * t - 4 * d;
    let unimodular = d.abs() == 1;
    let real_distinct = disc > 0;
    let irrational = real_distinct && {
        let r = disc.sqrt();
        r * r != disc
    };
    let mut failures = Vec::new();
    if !unimodular {
        failures.push(format!("|det| = {} is not 1", d.abs()));
    }
    if !real_distinct {
        failures.push(format!("discriminant {disc} is not positive"));
    } else if !irrational {
        failures.push(format!("discriminant {disc} is a perfect square"));
    }
    let mut report = HypothesisReport {
        trace: t,
        det: d,
        discriminant: disc,
        unimodular,
        real_distinct,
        irrational,
        expanding: false,
        lambda: None,
        lambda_float: None,
        failures,
        context: None,
    };
    if irrational {
        let ctx = QuadraticContext::new(t, d).expect("validated discriminant");
        let lam = dominant_root(&ctx, t);
        let lam_c = ctx.integer(t) - lam.clone();
        let one = ctx.integer(1);
        let expanding = lam.abs().cmp_value(&one).is_gt() && lam_c.abs().cmp_value(&one).is_lt();
        report.expanding = expanding;
        if !expanding {
            report.failures.push("eigenvalues are not |λ| > 1 > |λ′|".to_string());
        }
        report.lambda = Some(lam.to_string());
        report.lambda_float = Some(lam.to_f64());
        report.context = Some(ctx);
    }
    report
}

/// `γ = (α(e − AC/2) + β(f − BD/2)) / (μ − det)` for the eigenvector
/// `(α, β)` of eigenvalue `μ`.
pub fn gamma_for(
    l: &HeisenbergEndo,
    alpha: &QuadraticNumber,
    beta: &QuadraticNumber,
    mu: &QuadraticNumber,
) -> Result<QuadraticNumber, FactorizationError> {
    let denom = mu.add_rational(&-int(l.det()));
    if denom.is_zero() {
        return Err(FactorizationError::EigenvalueEqualsDet);
    }
    let ca = int(l.e) - rat(l.m_aa * l.m_ba, 2);
    let cb = int(l.f) - rat(l.m_ab * l.m_bb, 2);
    let num = alpha.mul_rational(&ca) + beta.mul_rational(&cb);
    Ok(num.try_div(&denom)?)
}

/// Which eigen-direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Eigen {
    Expanding,
    Contracting,
}

/// Eigen-data and section geometry of an endomorphism with a hyperbolic unimodular matrix.
#[derive(Clone, Debug)]
pub struct EigenData {
    pub endo: HeisenbergEndo,
    pub context: Arc<QuadraticContext>,
    pub lambda: QuadraticNumber,
    pub lambda_conj: QuadraticNumber,
    pub alpha: QuadraticNumber,
    pub beta: QuadraticNumber,
    pub alpha_p: QuadraticNumber,
    pub beta_p: QuadraticNumber,
    pub gamma: QuadraticNumber,
    pub gamma_p: QuadraticNumber,
    pub delta: QuadraticNumber,
    pub t_a: QuadraticNumber,
    pub t_b: QuadraticNumber,
    pub s_a: QuadraticNumber,
    pub s_b: QuadraticNumber,
}

impl EigenData {
    /// Computes the eigen-data; does not require the orientation used by
    /// the section construction (see [`EigenData::orientation_issues`]).
    pub fn new(l: &HeisenbergEndo) -> Result<Self, FactorizationError> {
        let report = check_hypothesis_h(l);
        if !report.passed() {
            return Err(FactorizationError::Hypothesis(report.failures.join("; ")));
        }
        let ctx = report.context.expect("context exists for hyperbolic matrices");
        let lambda = dominant_root(&ctx, l.trace());
        let lambda_conj = ctx.integer(l.trace()) - lambda.clone();
        let (a, b) = (l.m_aa, l.m_ab);
        if b == 0 {
            // triangular matrices have integer eigenvalues, excluded by hyperbolicity
            return Err(FactorizationError::Hypothesis("m_ab = 0".to_string()));
        }
        let bq = ctx.integer(b);
        let alpha = bq.clone() / (bq.clone() + lambda.add_rational(&-int(a)));
        let beta = ctx.integer(1) - alpha.clone();
        let sign = if b > 0 { 1 } else { -1 };
        let alpha_p = ctx.integer(sign * b);
        let beta_p = lambda_conj.add_rational(&-int(a)).mul_rational(&int(sign));
        let gamma = gamma_for(l, &alpha, &beta, &lambda)?;
        let gamma_p = gamma_for(l, &alpha_p, &beta_p, &lambda_conj)?;
        let delta = alpha.clone() * beta_p.clone() - alpha_p.clone() * beta.clone();
        let t_a = beta_p.clone() / delta.clone();
        let t_b = -(alpha_p.clone() / delta.clone());
        let s_a = beta.clone() / delta.clone();
        let s_b = -(alpha.clone() / delta.clone());
        Ok(EigenData {
            endo: l.clone(),
            context: ctx,
            lambda,
            lambda_conj,
            alpha,
            beta,
            alpha_p,
            beta_p,
            gamma,
            gamma_p,
            delta,
            t_a,
            t_b,
            s_a,
            s_b,
        })
    }

    /// Like [`EigenData::new`] but also requires the orientation
    /// `λ > 0`, `α, β > 0`, `α′ > 0 > β′`.
    pub fn oriented(l: &HeisenbergEndo) -> Result<Self, FactorizationError> {
        let e = EigenData::new(l)?;
        let issues = e.orientation_issues();
        if issues.is_empty() {
            Ok(e)
        } else {
            Err(FactorizationError::NotOriented(issues.join("; ")))
        }
    }

    pub fn orientation_issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.lambda.signum() <= 0 {
            out.push("λ is negative".to_string());
        }
        if self.alpha.signum() <= 0 || self.beta.signum() <= 0 {
            out.push("expanding direction leaves the positive quadrant".to_string());
        }
        if self.beta_p.signum() >= 0 {
            out.push("contracting direction has α′β′ ≥ 0".to_string());
        }
        out
    }

    pub fn eigenvalue(&self, which: Eigen) -> &QuadraticNumber {
        match which {
            Eigen::Expanding => &self.lambda,
            Eigen::Contracting => &self.lambda_conj,
        }
    }

    pub fn flow(&self, which: Eigen) -> AlgebraVector<QuadraticNumber> {
        match which {
            Eigen::Expanding => AlgebraVector::new(
                self.alpha.clone(),
                self.beta.clone(),
                self.gamma.clone(),
            ),
            Eigen::Contracting => AlgebraVector::new(
                self.alpha_p.clone(),
                self.beta_p.clone(),
                self.gamma_p.clone(),
            ),
        }
    }

    /// `𝔖(Φᵗ(g)) = Φ^{μt}(𝔖(g))`, evaluated exactly.
    pub fn conjugation_holds(
        &self,
        which: Eigen,
        t: &QuadraticNumber,
        g: &GroupPoint<QuadraticNumber>,
    ) -> bool {
        let v = self.flow(which);
        let lhs = self.endo.apply(&v.flow(t, g));
        let mt = self.eigenvalue(which).clone() * t.clone();
        let rhs = v.flow(&mt, &self.endo.apply(g));
        lhs == rhs
    }

    pub fn zero(&self) -> QuadraticNumber {
        self.context.integer(0)
    }

    /// `x_{t,s} = Φ_λᵗ ∘ Φ_{λ′}ˢ(1)`.
    pub fn surface_point(&self, t: &QuadraticNumber, s: &QuadraticNumber) -> GroupPoint<QuadraticNumber> {
        self.flow(Eigen::Expanding)
            .exp_t(t)
            .mul(&self.flow(Eigen::Contracting).exp_t(s))
    }

    /// Flow coordinates `(t, s)` of a planar point.
    pub fn ts_of(&self, x: &QuadraticNumber, y: &QuadraticNumber) -> (QuadraticNumber, QuadraticNumber) {
        let t = (self.beta_p.clone() * x.clone() - self.alpha_p.clone() * y.clone()) / self.delta.clone();
        let s = (self.alpha.clone() * y.clone() - self.beta.clone() * x.clone()) / self.delta.clone();
        (t, s)
    }

    /// Central coordinate of `x_{0,s}`.
    pub fn line_height(&self, s: &QuadraticNumber) -> QuadraticNumber {
        self.gamma_p.clone() * s.clone()
            + (self.alpha_p.clone() * self.beta_p.clone() * s.clone() * s.clone()).halved()
    }

    pub fn surface_quadric(&self) -> SurfaceQuadric {
        // t = t_x·x + t_y·y, s = s_x·x + s_y·y
        let d = &self.delta;
        let tx = self.beta_p.clone() / d.clone();
        let ty = -(self.alpha_p.clone() / d.clone());
        let sx = -(self.beta.clone() / d.clone());
        let sy = self.alpha.clone() / d.clone();
        let pp = self.alpha_p.clone() * self.beta_p.clone();
        let ab = self.alpha.clone() * self.beta.clone();
        let mixed = self.alpha.clone() * self.beta_p.clone();
        let quad = |s1: &QuadraticNumber, s2: &QuadraticNumber, t1: &QuadraticNumber, t2: &QuadraticNumber| {
            pp.clone() * s1.clone() * s2.clone()
                + mixed.clone() * (s1.clone() * t2.clone() + s2.clone() * t1.clone())
                + ab.clone() * t1.clone() * t2.clone()
        };
        SurfaceQuadric {
            q_xx: quad(&sx, &sx, &tx, &tx).halved(),
            q_yy: quad(&sy, &sy, &ty, &ty).halved(),
            q_xy: quad(&sx, &sy, &tx, &ty),
            q_x: self.gamma_p.clone() * sx.clone() + self.gamma.clone() * tx.clone(),
            q_y: self.gamma_p.clone() * sy + self.gamma.clone() * ty,
            q_0: self.zero(),
        }
    }
}

/// `Q(x, y) = q_xx·x² + q_yy·y² + q_xy·xy + q_x·x + q_y·y + q_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceQuadric {
    pub q_xx: QuadraticNumber,
    pub q_yy: QuadraticNumber,
    pub q_xy: QuadraticNumber,
    pub q_x: QuadraticNumber,
    pub q_y: QuadraticNumber,
    pub q_0: QuadraticNumber,
}

impl SurfaceQuadric {
    pub fn eval(&self, x: &QuadraticNumber, y: &QuadraticNumber) -> QuadraticNumber {
        self.q_xx.clone() * x.clone() * x.clone()
            + self.q_yy.clone() * y.clone() * y.clone()
            + self.q_xy.clone() * x.clone() * y.clone()
            + self.q_x.clone() * x.clone()
            + self.q_y.clone() * y.clone()
            + self.q_0.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TileSide {
    Da,
    Db,
    Outside,
}

/// Locates `g` relative to the tile built on the two domains
/// `𝒟_a = {s ∈ [s_a, 0), t ∈ [0, t_b)}` and `𝒟_b = {s ∈ [0, s_b), t ∈ [0, t_a)}`
/// with the window `Q − 1/2 ≤ z < Q + 1/2`.
pub fn tile_membership(e: &EigenData, q: &SurfaceQuadric, g: &GroupPoint<QuadraticNumber>) -> TileSide {
    let (t, s) = e.ts_of(&g.x, &g.y);
    let half = rat(1, 2);
    let off = g.z.clone() - q.eval(&g.x, &g.y);
    let in_window = off.add_rational(&half).signum() >= 0 && off.add_rational(&-half).signum() < 0;
    if !in_window || t.signum() < 0 {
        return TileSide::Outside;
    }
    if s.signum() < 0 {
        if RealScalar::le(&e.s_a, &s) && RealScalar::lt(&t, &e.t_b) {
            return TileSide::Da;
        }
    } else if RealScalar::lt(&s, &e.s_b) && RealScalar::lt(&t, &e.t_a) {
        return TileSide::Db;
    }
    TileSide::Outside
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::Endomorphism;

    fn golden() -> Arc<QuadraticContext> {
        QuadraticContext::golden()
    }

    fn q(text: &str) -> QuadraticNumber {
        QuadraticNumber::parse(text, &golden()).unwrap()
    }

    fn tau() -> HeisenbergEndo {
        HeisenbergEndo::factor(&Endomorphism::fibonacci())
    }

    #[test]
    fn fibonacci_factor() {
        let l = tau();
        assert_eq!(l, HeisenbergEndo::new([[1, 1], [1, 0]], 1, 0));
        // −z + x(x+1)/2 + xy at a generic rational point
        let g = GroupPoint::new(rat(2, 3), rat(-5, 7), rat(1, 11));
        let expected = -g.z.clone()
            + g.x.clone() * (g.x.clone() + int(1)) / int(2)
            + g.x.clone() * g.y.clone();
        assert_eq!(l.apply(&g).z, expected);
        let one = GroupPoint::new(int(1), int(1), int(1));
        assert_eq!(l.apply(&one), GroupPoint::new(int(2), int(1), int(1)));
    }

    #[test]
    fn sigma5_image() {
        let s5 = HeisenbergEndo::factor(&Endomorphism::parse("a->Bab;b->b").unwrap());
        assert_eq!(s5.apply_lattice(&LatticePoint::new(1, 0, 0)), LatticePoint::new(1, 0, 1));
        assert_eq!(HeisenbergEndo::factor(&Endomorphism::identity()), HeisenbergEndo::identity());
    }

    #[test]
    fn inverse_and_center() {
        let l = tau();
        let inv = l.invert().unwrap();
        assert_eq!(inv.compose(&l), HeisenbergEndo::identity());
        assert_eq!(l.apply_lattice(&LatticePoint::new(0, 0, 1)), LatticePoint::new(0, 0, -1));
        assert!(HeisenbergEndo::new([[2, 0], [0, 1]], 0, 0).invert().is_err());
    }

    #[test]
    fn hypothesis_examples() {
        let r = check_hypothesis_h(&tau());
        assert!(r.passed());
        assert_eq!(r.lambda.as_deref(), Some("l"));
        assert!(!check_hypothesis_h(&HeisenbergEndo::new([[1, 1], [0, 1]], 0, 0)).passed());
        let r = check_hypothesis_h(&HeisenbergEndo::new([[2, 1], [1, 1]], 0, 0));
        assert!(r.passed());
        assert!((r.lambda_float.unwrap() - 2.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn fibonacci_eigen_data() {
        let e = EigenData::oriented(&tau()).unwrap();
        assert_eq!(e.alpha, q("-1+l"));
        assert_eq!(e.beta, q("2-l"));
        assert_eq!(e.alpha_p, q("1"));
        assert_eq!(e.beta_p, q("-l"));
        assert_eq!(e.delta, q("-3+l"));
        assert_eq!(e.t_a, q("1/5+3/5*l"));
        assert_eq!(e.t_b, q("2/5+1/5*l"));
        assert_eq!(e.s_a, q("-3/5+1/5*l"));
        assert_eq!(e.s_b, q("-1/5+2/5*l"));
        assert_eq!(e.gamma, q("-3/2+l"));
        let lhs = (e.t_a.clone() * e.alpha.clone() - q("1")) * e.beta_p.clone();
        assert_eq!(lhs, e.t_a.clone() * e.beta.clone() * e.alpha_p.clone());
        // contracting γ with the eigenvector (1/φ², −1/φ)
        let gp = gamma_for(&tau(), &q("2-l"), &q("1-l"), &e.lambda_conj).unwrap();
        assert_eq!(gp, q("1/2"));
        let linear = HeisenbergEndo::new([[1, 1], [1, 0]], 0, 0);
        let g0 = gamma_for(&linear, &e.alpha, &e.beta, &e.lambda).unwrap();
        assert_eq!(g0, q("3/2-l"));
    }

    #[test]
    fn flows_and_conjugation() {
        let e = EigenData::oriented(&tau()).unwrap();
        let id = GroupPoint::identity_like(&e.zero());
        let one = q("1");
        assert_eq!(e.flow(Eigen::Expanding).flow(&one, &id), GroupPoint::new(q("-1+l"), q("2-l"), q("-3+2*l")));
        assert!(e.conjugation_holds(Eigen::Expanding, &one, &id));
        assert!(e.conjugation_holds(Eigen::Expanding, &q("0"), &id));
        assert!(e.conjugation_holds(Eigen::Contracting, &one, &id));
    }

    #[test]
    fn quadric_values() {
        let e = EigenData::oriented(&tau()).unwrap();
        let qd = e.surface_quadric();
        assert!(qd.eval(&q("0"), &q("0")).is_zero());
        assert_eq!(qd.eval(&q("-1+l"), &q("2-l")), q("-3+2*l"));
        assert_eq!(qd.eval(&q("1"), &q("-l")), q("1/2"));
    }

    #[test]
    fn tile_examples() {
        let e = EigenData::oriented(&tau()).unwrap();
        let qd = e.surface_quadric();
        let id = GroupPoint::identity_like(&e.zero());
        assert_eq!(tile_membership(&e, &qd, &id), TileSide::Db);
        let p = e.surface_point(&e.t_a.halved(), &e.s_a.halved());
        assert_eq!(tile_membership(&e, &qd, &p), TileSide::Da);
        let lifted = p.central_flow(&q("1"));
        assert_eq!(tile_membership(&e, &qd, &lifted), TileSide::Outside);
    }
}
