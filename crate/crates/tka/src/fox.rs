//! Free-group words, Wirtinger-style presentations with a coefficient
//! homomorphism φ, and Fox free differential calculus evaluated through φ.
//!
//! Arc generators `a_k` are meridians and map to `t`; surface generators
//! `s_l` generate π₁(Σ) and map to `x_l`. Fox derivatives are kept as formal
//! integer combinations of words until `apply_phi` pushes them into the
//! Laurent ring.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::diagram::AlexMatrix;
use crate::laurent::{ExponentVector, LaurentPoly, UnitMonomial};

/// A generator of the presentation's free group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// Meridian generator `a_index`, 1-based, index <= arc count.
    Arc(usize),
    /// Surface generator `s_index`, 1-based, index <= 2g.
    Surface(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Arc(i) => write!(f, "a{i}"),
            Generator::Surface(i) => write!(f, "s{i}"),
        }
    }
}

/// A letter: generator with exponent +1 or -1.
pub type Letter = (Generator, i8);

/// A freely reduced word in the free group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    /// Single-letter word.
    pub fn gen(g: Generator, exp: i8) -> Self {
        assert!(exp == 1 || exp == -1);
        Word {
            letters: vec![(g, exp)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(g, e)| (g, -e))
                .collect(),
        }
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Self) -> Self {
        let mut raw = self.letters.clone();
        raw.extend_from_slice(&other.letters);
        free_reduce(&raw)
    }

    /// Conjugate `u w u^{-1}`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.concat(self).concat(&u.inverse())
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, (g, e)) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            let name = match g {
                Generator::Arc(i) => (if *e > 0 { "a" } else { "A" }, i),
                Generator::Surface(i) => (if *e > 0 { "s" } else { "S" }, i),
            };
            write!(f, "{}{}", name.0, name.1)?;
        }
        Ok(())
    }
}

/// Freely reduce a raw letter sequence (cancel adjacent inverse pairs).
pub fn free_reduce(raw: &[Letter]) -> Word {
    let mut stack: Vec<Letter> = Vec::with_capacity(raw.len());
    for &(g, e) in raw {
        assert!(e == 1 || e == -1, "letter exponents must be ±1");
        match stack.last() {
            Some(&(h, f)) if h == g && f == -e => {
                stack.pop();
            }
            _ => stack.push((g, e)),
        }
    }
    Word { letters: stack }
}

/// The coefficient homomorphism φ: arcs ↦ t, surface generator l ↦ x_l.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhiAssignment {
    pub genus: usize,
}

impl PhiAssignment {
    pub fn new(genus: usize) -> Self {
        PhiAssignment { genus }
    }

    pub fn of_generator(&self, g: Generator, exp: i8) -> UnitMonomial {
        let mut exps = ExponentVector::zero(self.genus);
        match g {
            Generator::Arc(_) => exps.t_exp = exp as i64,
            Generator::Surface(l) => {
                assert!(l >= 1 && l <= 2 * self.genus, "surface index out of range");
                exps.set(l, exp as i64);
            }
        }
        UnitMonomial { sign: 1, exps }
    }

    pub fn of_word(&self, w: &Word) -> UnitMonomial {
        let mut u = UnitMonomial::one(self.genus);
        for &(g, e) in w.letters() {
            u = u.mul(&self.of_generator(g, e));
        }
        u
    }
}

/// A formal integer combination of words (element of the free group ring).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalSum {
    /// Sorted by word, nonzero coefficients only.
    terms: Vec<(Word, BigInt)>,
}

impl FormalSum {
    pub fn zero() -> Self {
        FormalSum { terms: Vec::new() }
    }

    pub fn one() -> Self {
        FormalSum::from_word(Word::identity(), BigInt::one())
    }

    pub fn from_word(w: Word, c: BigInt) -> Self {
        if c.is_zero() {
            return FormalSum::zero();
        }
        FormalSum {
            terms: vec![(w, c)],
        }
    }

    pub fn terms(&self) -> &[(Word, BigInt)] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.terms.clone();
        for (w, c) in &other.terms {
            match out.binary_search_by(|(v, _)| v.cmp(w)) {
                Ok(i) => {
                    out[i].1 += c;
                    if out[i].1.is_zero() {
                        out.remove(i);
                    }
                }
                Err(i) => out.insert(i, (w.clone(), c.clone())),
            }
        }
        FormalSum { terms: out }
    }

    /// Left-multiply every word by `u` (group-ring action of a group element).
    pub fn left_mul(&self, u: &Word) -> Self {
        let mut terms: Vec<(Word, BigInt)> = self
            .terms
            .iter()
            .map(|(w, c)| (u.concat(w), c.clone()))
            .collect();
        terms.sort_by(|(a, _), (b, _)| a.cmp(b));
        // Free reduction cannot merge distinct products of distinct reduced
        // words under a common left factor, but stay defensive.
        let mut out = FormalSum::zero();
        for (w, c) in terms {
            out = out.add(&FormalSum::from_word(w, c));
        }
        out
    }
}

/// Fox free derivative ∂w/∂gen as a formal combination of words.
///
/// Rules: ∂(uv) = ∂u + u·∂v, ∂a/∂a = 1, ∂a^{-1}/∂a = −a^{-1}, ∂b/∂a = 0.
pub fn fox_derivative(w: &Word, gen: Generator) -> FormalSum {
    let mut sum = FormalSum::zero();
    let mut prefix = Word::identity();
    for &(g, e) in w.letters() {
        if g == gen {
            if e == 1 {
                sum = sum.add(&FormalSum::from_word(prefix.clone(), BigInt::one()));
            } else {
                let letter = Word::gen(g, -1);
                sum = sum.add(&FormalSum::from_word(
                    prefix.concat(&letter),
                    -BigInt::one(),
                ));
            }
        }
        prefix = prefix.concat(&Word::gen(g, e));
    }
    sum
}

/// Push a formal combination through φ into the Laurent ring.
pub fn apply_phi(c: &FormalSum, phi: &PhiAssignment) -> LaurentPoly {
    let mut out = LaurentPoly::zero(phi.genus);
    for (w, coeff) in c.terms() {
        let u = phi.of_word(w);
        out = out.add(&u.to_poly().scale(coeff));
    }
    out
}

/// φ applied to a single word, as a polynomial.
pub fn phi_word(w: &Word, phi: &PhiAssignment) -> LaurentPoly {
    phi.of_word(w).to_poly()
}

/// A finitely presented group with Wirtinger-style generators and the fixed
/// coefficient homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    /// Arc (meridian) generator count.
    pub n: usize,
    /// Surface genus; surface generators are s_1..s_{2g}.
    pub g: usize,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn phi(&self) -> PhiAssignment {
        PhiAssignment::new(self.g)
    }

    /// Check generator ranges in every relator.
    pub fn validate(&self) -> Result<(), String> {
        for (k, r) in self.relators.iter().enumerate() {
            for &(g, _) in r.letters() {
                match g {
                    Generator::Arc(i) => {
                        if i == 0 || i > self.n {
                            return Err(format!("relator {}: arc index {} out of range", k + 1, i));
                        }
                    }
                    Generator::Surface(i) => {
                        if i == 0 || i > 2 * self.g {
                            return Err(format!(
                                "relator {}: surface index {} out of range",
                                k + 1,
                                i
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Serialize as "gens n g" plus one relator line each.
    pub fn to_text(&self) -> String {
        let mut out = format!("gens {} {}\n", self.n, self.g);
        for r in &self.relators {
            out.push_str(&format!("{r}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or("empty presentation text")?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "gens" {
            return Err(format!("bad header line: {header:?}"));
        }
        let n: usize = parts[1].parse().map_err(|_| "bad arc count")?;
        let g: usize = parts[2].parse().map_err(|_| "bad genus")?;
        let mut relators = Vec::new();
        for line in lines {
            relators.push(parse_word(line)?);
        }
        let p = Presentation { n, g, relators };
        p.validate()?;
        Ok(p)
    }
}

/// Parse a word in letter syntax: "a3 A1 s2 S2" (uppercase = inverse), "1"
/// or "-" for the empty word.
pub fn parse_word(s: &str) -> Result<Word, String> {
    let s = s.trim();
    if s == "1" || s == "-" || s.is_empty() {
        return Ok(Word::identity());
    }
    let mut raw = Vec::new();
    for tok in s.split_whitespace() {
        let mut chars = tok.chars();
        let head = chars.next().unwrap();
        let idx: usize = chars
            .as_str()
            .parse()
            .map_err(|_| format!("bad letter {tok:?}"))?;
        if idx == 0 {
            return Err(format!("bad letter {tok:?}: indices are 1-based"));
        }
        let (gen, exp) = match head {
            'a' => (Generator::Arc(idx), 1),
            'A' => (Generator::Arc(idx), -1),
            's' => (Generator::Surface(idx), 1),
            'S' => (Generator::Surface(idx), -1),
            _ => return Err(format!("bad letter {tok:?}")),
        };
        raw.push((gen, exp));
    }
    Ok(free_reduce(&raw))
}

/// Jacobian of the relators through φ. Columns are the arc generators only
/// when `arc_columns_only`, realizing the relative pair (X, Σ×{0}); otherwise
/// arc columns followed by surface columns.
pub fn jacobian(p: &Presentation, arc_columns_only: bool) -> AlexMatrix {
    let phi = p.phi();
    let mut cols: Vec<Generator> = (1..=p.n).map(Generator::Arc).collect();
    if !arc_columns_only {
        cols.extend((1..=2 * p.g).map(Generator::Surface));
    }
    let entries = p
        .relators
        .iter()
        .map(|r| {
            cols.iter()
                .map(|&gen| apply_phi(&fox_derivative(r, gen), &phi))
                .collect()
        })
        .collect();
    AlexMatrix {
        genus: p.g,
        rows: p.relators.len(),
        cols: cols.len(),
        entries,
    }
}
