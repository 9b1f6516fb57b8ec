//! Reduced words in the free group on `a, b`, endomorphisms given by the
//! images of the two generators, and the broken line of a word.

use std::fmt;

use thiserror::Error;

use crate::factorization::HeisenbergEndo;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGroupError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("image of {0} is empty")]
    EmptyImage(char),
    #[error("substitution has inverse letters; a fixed word needs a positive substitution")]
    NotPositive,
    #[error("image of a must start with a and have length at least 2")]
    NotProlongable,
    #[error("matrix is not invertible over the integers (det = {0})")]
    NotInvertible(String),
    #[error("decomposition did not recompose to the input: {0}")]
    Verification(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    AInv,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Letter::A | Letter::B)
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::AInv => 'A',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'A' => Some(Letter::AInv),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }

    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::AInv, Letter::BInv];
}

/// Freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds the reduced form of an arbitrary letter sequence.
    pub fn reduce_from(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn parse(text: &str) -> Result<Self, FreeGroupError> {
        let mut letters = Vec::with_capacity(text.len());
        for (position, c) in text.char_indices() {
            letters.push(Letter::from_char(c).ok_or(FreeGroupError::Syntax {
                position,
                message: format!("unexpected character {c:?}"),
            })?);
        }
        Ok(Word::reduce_from(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|l| l.is_positive())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce_from(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `u•v•u⁻¹•v⁻¹`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.invert()).concat(&other.invert())
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Endomorphism of the free group, given by the images of `a` and `b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Endomorphism {
    pub image_a: Word,
    pub image_b: Word,
    pub name: Option<String>,
}

impl Endomorphism {
    pub fn new(image_a: Word, image_b: Word) -> Self {
        Endomorphism {
            image_a,
            image_b,
            name: None,
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn identity() -> Self {
        Endomorphism::new(Word(vec![Letter::A]), Word(vec![Letter::B]))
    }

    pub fn fibonacci() -> Self {
        Endomorphism::new(
            Word(vec![Letter::A, Letter::B]),
            Word(vec![Letter::A]),
        )
        .named("fibonacci")
    }

    /// Parses `a->WORD;b->WORD` (either order, whitespace ignored).
    pub fn parse(text: &str) -> Result<Self, FreeGroupError> {
        let mut images: [Option<Word>; 2] = [None, None];
        let mut offset = 0;
        for part in text.split(';') {
            let start = offset;
            offset += part.len() + 1;
            if part.trim().is_empty() {
                continue;
            }
            let (lhs, rhs) = part.split_once("->").ok_or(FreeGroupError::Syntax {
                position: start,
                message: "expected LETTER->WORD".to_string(),
            })?;
            let slot = match lhs.trim() {
                "a" => 0,
                "b" => 1,
                other => {
                    return Err(FreeGroupError::Syntax {
                        position: start,
                        message: format!("left side must be a or b, found {other:?}"),
                    })
                }
            };
            if images[slot].is_some() {
                return Err(FreeGroupError::Syntax {
                    position: start,
                    message: format!("{} defined twice", lhs.trim()),
                });
            }
            let rhs_start = start + lhs.len() + 2;
            let body: String = rhs.chars().filter(|c| !c.is_whitespace()).collect();
            let word = Word::parse(&body).map_err(|e| match e {
                FreeGroupError::Syntax { position, message } => FreeGroupError::Syntax {
                    position: rhs_start + position,
                    message,
                },
                other => other,
            })?;
            if word.is_empty() {
                return Err(FreeGroupError::EmptyImage(if slot == 0 { 'a' } else { 'b' }));
            }
            images[slot] = Some(word);
        }
        let [a, b] = images;
        let a = a.ok_or(FreeGroupError::Syntax {
            position: text.len(),
            message: "missing image of a".to_string(),
        })?;
        let b = b.ok_or(FreeGroupError::Syntax {
            position: text.len(),
            message: "missing image of b".to_string(),
        })?;
        Ok(Endomorphism::new(a, b))
    }

    pub fn image(&self, l: Letter) -> Word {
        match l {
            Letter::A => self.image_a.clone(),
            Letter::B => self.image_b.clone(),
            Letter::AInv => self.image_a.invert(),
            Letter::BInv => self.image_b.invert(),
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        let inv_a = self.image_a.invert();
        let inv_b = self.image_b.invert();
        Word::reduce_from(w.letters().iter().flat_map(|l| {
            let img = match l {
                Letter::A => &self.image_a,
                Letter::B => &self.image_b,
                Letter::AInv => &inv_a,
                Letter::BInv => &inv_b,
            };
            img.letters().to_vec()
        }))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        Endomorphism::new(self.apply(&other.image_a), self.apply(&other.image_b))
    }

    pub fn is_positive(&self) -> bool {
        self.image_a.is_positive() && self.image_b.is_positive()
    }

    /// Abelianization `[[#a in σ(a), #a in σ(b)], [#b in σ(a), #b in σ(b)]]`
    /// with inverse letters counted negatively.
    pub fn abelianization(&self) -> [[i64; 2]; 2] {
        let exps = |w: &Word| {
            let mut e = [0i64; 2];
            for l in w.letters() {
                match l {
                    Letter::A => e[0] += 1,
                    Letter::AInv => e[0] -= 1,
                    Letter::B => e[1] += 1,
                    Letter::BInv => e[1] -= 1,
                }
            }
            e
        };
        let ea = exps(&self.image_a);
        let eb = exps(&self.image_b);
        [[ea[0], eb[0]], [ea[1], eb[1]]]
    }

    /// Length-`n` prefix of the fixed word obtained by iterating on `a`.
    pub fn fixed_point_prefix(&self, n: usize) -> Result<Word, FreeGroupError> {
        if !self.is_positive() {
            return Err(FreeGroupError::NotPositive);
        }
        if self.image_a.len() < 2 || self.image_a.letters()[0] != Letter::A {
            return Err(FreeGroupError::NotProlongable);
        }
        let mut w = Word(vec![Letter::A]);
        while w.len() < n {
            w = self.apply(&w);
        }
        Ok(w.prefix(n))
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a->{};b->{}", self.image_a, self.image_b)
    }
}

/// Vertex `x_k = [a_k, b_k, c_k]` of a broken line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BrokenLinePoint {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// Partial products `x_0 = 1`, `x_{k+1} = x_k • n_{u_{k+1}}`.
pub fn broken_line(w: &Word) -> Vec<BrokenLinePoint> {
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut cur = BrokenLinePoint { a: 0, b: 0, c: 0 };
    out.push(cur);
    for l in w.letters() {
        match l {
            Letter::A => cur.a += 1,
            Letter::AInv => cur.a -= 1,
            Letter::B => {
                cur.b += 1;
                cur.c += cur.a;
            }
            Letter::BInv => {
                cur.b -= 1;
                cur.c -= cur.a;
            }
        }
        out.push(cur);
    }
    out
}

/// The six generators used to decompose lattice automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::S1,
        Generator::S2,
        Generator::S3,
        Generator::S4,
        Generator::S5,
        Generator::S6,
    ];

    pub fn substitution(self) -> Endomorphism {
        let text = match self {
            Generator::S1 => "a->ab;b->b",
            Generator::S2 => "a->ab;b->a",
            Generator::S3 => "a->a;b->ba",
            Generator::S4 => "a->b;b->ab",
            Generator::S5 => "a->Bab;b->b",
            Generator::S6 => "a->a;b->Aba",
        };
        Endomorphism::parse(text)
            .expect("generator table")
            .named(self.name())
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::S1 => "s1",
            Generator::S2 => "s2",
            Generator::S3 => "s3",
            Generator::S4 => "s4",
            Generator::S5 => "s5",
            Generator::S6 => "s6",
        }
    }

    pub fn endo(self) -> HeisenbergEndo {
        HeisenbergEndo::factor(&self.substitution())
    }
}

/// Generator raised to a nonzero integer power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorPower {
    pub generator: Generator,
    pub exponent: i64,
}

impl fmt::Display for GeneratorPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.generator.name())
        } else {
            write!(f, "{}^{}", self.generator.name(), self.exponent)
        }
    }
}

/// Composes `w[0] ∘ w[1] ∘ …` (the last factor acts first).
pub fn recompose(word: &[GeneratorPower]) -> HeisenbergEndo {
    let mut acc = HeisenbergEndo::identity();
    for gp in word {
        let g = gp.generator.endo().pow(gp.exponent).expect("generators are invertible");
        acc = acc.compose(&g);
    }
    acc
}

/// Writes a lattice automorphism as a composition of generator powers.
///
/// The abelianized matrix is reduced to the identity by row operations
/// (σ1 adds row one to row two, σ3 adds row two to row one), and the
/// remaining central part `(I, e, f)` equals `σ5^e ∘ σ6^(−f)`.
pub fn decompose(target: &HeisenbergEndo) -> Result<Vec<GeneratorPower>, FreeGroupError> {
    let det = target.det();
    if det != 1 && det != -1 {
        return Err(FreeGroupError::NotInvertible(det.to_string()));
    }
    // ops[i] is applied on the left of the running endomorphism, in order.
    let mut ops: Vec<GeneratorPower> = Vec::new();
    let mut cur = target.clone();
    let mut push = |cur: &mut HeisenbergEndo, generator: Generator, exponent: i64| {
        if exponent == 0 {
            return;
        }
        let g = generator.endo().pow(exponent).expect("generators are invertible");
        *cur = g.compose(cur);
        ops.push(GeneratorPower {
            generator,
            exponent,
        });
    };

    // Euclid on the first column.
    loop {
        let (a, c) = (cur.m_aa, cur.m_ba);
        if c == 0 {
            break;
        }
        if a == 0 {
            push(&mut cur, Generator::S3, 1);
            continue;
        }
        if a.abs() <= c.abs() {
            push(&mut cur, Generator::S1, -(c / a));
        } else {
            push(&mut cur, Generator::S3, -(a / c));
        }
    }
    // Now M = [[±1, b], [0, ±1]].
    if cur.m_aa != cur.m_bb {
        // left multiplication by diag(1, −1) = E1⁻¹·M2·E3⁻¹
        push(&mut cur, Generator::S3, -1);
        push(&mut cur, Generator::S2, 1);
        push(&mut cur, Generator::S1, -1);
    }
    if cur.m_aa == -1 {
        // −I = (E3·E1⁻¹·E3)²
        for _ in 0..2 {
            push(&mut cur, Generator::S3, 1);
            push(&mut cur, Generator::S1, -1);
            push(&mut cur, Generator::S3, 1);
        }
    }
    let b = cur.m_ab;
    push(&mut cur, Generator::S3, -b);
    if !(cur.m_aa == 1 && cur.m_ab == 0 && cur.m_ba == 0 && cur.m_bb == 1) {
        return Err(FreeGroupError::Verification(format!(
            "linear part did not reduce to the identity: {cur:?}"
        )));
    }
    let (e, f) = (cur.e, cur.f);
    // target = ops⁻¹ ∘ σ5^e ∘ σ6^(−f)
    let mut word: Vec<GeneratorPower> = ops
        .iter()
        .map(|gp| GeneratorPower {
            generator: gp.generator,
            exponent: -gp.exponent,
        })
        .collect();
    for (generator, exponent) in [(Generator::S5, e), (Generator::S6, -f)] {
        if exponent != 0 {
            word.push(GeneratorPower {
                generator,
                exponent,
            });
        }
    }
    let check = recompose(&word);
    if &check != target {
        return Err(FreeGroupError::Verification(format!(
            "{check:?} differs from {target:?}"
        )));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn reduction_and_inversion() {
        assert_eq!(w("abB"), w("a"));
        assert_eq!(w("ab").invert(), w("BA"));
        assert!(w("ab").concat(&w("BA")).is_empty());
        assert_eq!(w("aAbBa").to_string(), "a");
    }

    #[test]
    fn parse_substitutions() {
        let tau = Endomorphism::parse("a->ab;b->a").unwrap();
        assert_eq!(tau.image_a, w("ab"));
        assert_eq!(tau.image_b, w("a"));
        let s5 = Endomorphism::parse("a->Bab;b->b").unwrap();
        assert_eq!(s5.apply(&w("a")), w("Bab"));
        assert_eq!(
            Endomorphism::parse("a->aB;b->"),
            Err(FreeGroupError::EmptyImage('b'))
        );
        assert!(matches!(
            Endomorphism::parse("a->ax;b->a"),
            Err(FreeGroupError::Syntax { position: 4, .. })
        ));
        assert_eq!(
            Endomorphism::parse(" b -> a ; a -> a b ").unwrap().to_string(),
            "a->ab;b->a"
        );
    }

    #[test]
    fn application() {
        let tau = Endomorphism::fibonacci();
        assert_eq!(tau.apply(&w("ab")), w("aba"));
        assert_eq!(tau.abelianization(), [[1, 1], [1, 0]]);
    }

    #[test]
    fn fixed_word() {
        let tau = Endomorphism::fibonacci();
        assert_eq!(tau.fixed_point_prefix(8).unwrap(), w("abaababa"));
        assert_eq!(tau.fixed_point_prefix(1).unwrap(), w("a"));
        assert_eq!(tau.fixed_point_prefix(13).unwrap().count(Letter::A), 8);
        assert_eq!(
            Generator::S5.substitution().fixed_point_prefix(3),
            Err(FreeGroupError::NotPositive)
        );
        assert_eq!(
            Generator::S4.substitution().fixed_point_prefix(3),
            Err(FreeGroupError::NotProlongable)
        );
    }

    #[test]
    fn broken_line_counts() {
        let pts = broken_line(&w("abaab"));
        assert_eq!(pts[5], BrokenLinePoint { a: 3, b: 2, c: 4 });
        assert_eq!(broken_line(&w("a"))[1], BrokenLinePoint { a: 1, b: 0, c: 0 });
        assert_eq!(broken_line(&w("ab"))[2], BrokenLinePoint { a: 1, b: 1, c: 1 });
    }

    #[test]
    fn decompose_small_cases() {
        assert!(decompose(&HeisenbergEndo::identity()).unwrap().is_empty());
        let s13 = HeisenbergEndo::factor(
            &Generator::S1.substitution().compose(&Generator::S3.substitution()),
        );
        assert_eq!(recompose(&decompose(&s13).unwrap()), s13);
        let tau = HeisenbergEndo::factor(&Endomorphism::fibonacci());
        assert_eq!(recompose(&decompose(&tau).unwrap()), tau);
    }
}
