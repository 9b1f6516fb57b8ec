//! Seeded sampling of exact test points.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::factorization::{EigenData, HeisenbergEndo};
use crate::freegroup::{recompose, Endomorphism, Generator, GeneratorPower, Letter, Word};
use crate::heisenberg::{AlgebraVector, GroupPoint};
use crate::scalar::{rat, QuadraticContext, QuadraticNumber, Rational, RealScalar};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational `p/q` with `q ∈ [1, max_den]` and `|p/q| ≤ bound`.
pub fn rational(rng: &mut SampleRng, bound: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    let n = rng.gen_range(-bound * d..=bound * d);
    rat(n, d)
}

/// Rational in `[0, 1)`.
pub fn unit_rational(rng: &mut SampleRng, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    rat(rng.gen_range(0..d), d)
}

/// `a + bλ` with small rational coordinates.
pub fn quadratic(rng: &mut SampleRng, ctx: &Arc<QuadraticContext>, bound: i64, max_den: i64) -> QuadraticNumber {
    QuadraticNumber::new(
        rational(rng, bound, max_den),
        rational(rng, bound, max_den),
        ctx.clone(),
    )
}

/// Irrational-looking element of `[lo, hi)`.
pub fn quadratic_in(
    rng: &mut SampleRng,
    ctx: &Arc<QuadraticContext>,
    lo: &QuadraticNumber,
    hi: &QuadraticNumber,
) -> QuadraticNumber {
    let w = hi.clone() - lo.clone();
    let frac = quadratic(rng, ctx, 3, 30).frac();
    lo.clone() + w * frac
}

pub fn rational_point(rng: &mut SampleRng, bound: i64, max_den: i64) -> GroupPoint<Rational> {
    GroupPoint::new(
        rational(rng, bound, max_den),
        rational(rng, bound, max_den),
        rational(rng, bound, max_den),
    )
}

pub fn rational_vector(rng: &mut SampleRng, bound: i64, max_den: i64) -> AlgebraVector<Rational> {
    AlgebraVector::new(
        rational(rng, bound, max_den),
        rational(rng, bound, max_den),
        rational(rng, bound, max_den),
    )
}

pub fn quadratic_point(rng: &mut SampleRng, ctx: &Arc<QuadraticContext>, bound: i64) -> GroupPoint<QuadraticNumber> {
    GroupPoint::new(
        quadratic(rng, ctx, bound, 12),
        quadratic(rng, ctx, bound, 12),
        quadratic(rng, ctx, bound, 12),
    )
}

pub fn word(rng: &mut SampleRng, max_len: usize, positive: bool) -> Word {
    let len = rng.gen_range(0..=max_len);
    let alphabet: &[Letter] = if positive {
        &[Letter::A, Letter::B]
    } else {
        &Letter::ALL
    };
    Word::reduce_from((0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]))
}

/// Positive substitution with nonempty images of length at most `max_len`.
pub fn positive_substitution(rng: &mut SampleRng, max_len: usize) -> Endomorphism {
    let mut image = || loop {
        let w = word(rng, max_len, true);
        if !w.is_empty() {
            return w;
        }
    };
    let a = image();
    let b = image();
    Endomorphism::new(a, b)
}

/// Composition of `count` random generators with random signs.
pub fn generator_product(rng: &mut SampleRng, count: usize, positive_only: bool) -> Vec<(Generator, i64)> {
    (0..count)
        .map(|_| {
            let g = if positive_only {
                [Generator::S1, Generator::S2, Generator::S3, Generator::S4][rng.gen_range(0..4)]
            } else {
                Generator::ALL[rng.gen_range(0..6)]
            };
            let sign = if positive_only || rng.gen_bool(0.5) { 1 } else { -1 };
            (g, sign)
        })
        .collect()
}

pub fn generator_word(rng: &mut SampleRng, count: usize) -> Vec<GeneratorPower> {
    generator_product(rng, count, false)
        .into_iter()
        .map(|(generator, exponent)| GeneratorPower { generator, exponent })
        .collect()
}

/// Hyperbolic automorphism built from `factors` random generators whose
/// eigen-data has the orientation needed by the sections. Candidates that
/// fail are replaced by their square, their conjugate by the reflection,
/// or the conjugate of the square, before a new word is drawn.
pub fn oriented_automorphism(rng: &mut SampleRng, factors: usize) -> (HeisenbergEndo, EigenData) {
    let iota = HeisenbergEndo::reflection();
    loop {
        let l = recompose(&generator_word(rng, factors));
        let Ok(sq) = l.pow(2) else { continue };
        for cand in [l.clone(), sq.clone(), iota.compose(&l).compose(&iota), iota.compose(&sq).compose(&iota)] {
            if let Ok(e) = EigenData::oriented(&cand) {
                if e.lambda.to_f64() < 50.0 {
                    return (cand, e);
                }
            }
        }
    }
}
