//! Exact arithmetic in the Laurent ring `Z[t^±1, x1^±1, ..., x_{2g}^±1]`.
//!
//! Every invariant in the crate takes values here. A polynomial carries the
//! genus `g` of its ambient ring as context; polynomials with different
//! contexts never combine. Terms are kept in a canonical lexicographic order
//! on `(t_exp, x_exps)` so printing and comparison are deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("ring context mismatch: genus {0} vs genus {1}")]
    ContextMismatch(usize, usize),
    #[error("zero input where a nonzero polynomial is required")]
    ZeroInput,
    #[error("substitution of zero for a variable with negative exponent")]
    ZeroSubstitution,
    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
}

/// Exponent vector of a single monomial: the `t` exponent followed by the
/// exponents of `x1..x_{2g}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector {
    pub t_exp: i64,
    pub x_exps: Vec<i64>,
}

impl ExponentVector {
    pub fn zero(genus: usize) -> Self {
        ExponentVector {
            t_exp: 0,
            x_exps: vec![0; 2 * genus],
        }
    }

    pub fn nvars(&self) -> usize {
        1 + self.x_exps.len()
    }

    /// Variable 0 is `t`; variables `1..=2g` are `x1..x_{2g}`.
    pub fn get(&self, var: usize) -> i64 {
        if var == 0 {
            self.t_exp
        } else {
            self.x_exps[var - 1]
        }
    }

    pub fn set(&mut self, var: usize, e: i64) {
        if var == 0 {
            self.t_exp = e;
        } else {
            self.x_exps[var - 1] = e;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector {
            t_exp: self.t_exp + other.t_exp,
            x_exps: self
                .x_exps
                .iter()
                .zip(&other.x_exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        ExponentVector {
            t_exp: -self.t_exp,
            x_exps: self.x_exps.iter().map(|e| -e).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.t_exp == 0 && self.x_exps.iter().all(|&e| e == 0)
    }
}

/// A unit of the Laurent ring: `± t^a x1^b1 ... x_{2g}^b_{2g}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitMonomial {
    pub sign: i8,
    pub exps: ExponentVector,
}

impl UnitMonomial {
    pub fn one(genus: usize) -> Self {
        UnitMonomial {
            sign: 1,
            exps: ExponentVector::zero(genus),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        UnitMonomial {
            sign: self.sign * other.sign,
            exps: self.exps.add(&other.exps),
        }
    }

    pub fn inv(&self) -> Self {
        UnitMonomial {
            sign: self.sign,
            exps: self.exps.neg(),
        }
    }

    pub fn genus(&self) -> usize {
        self.exps.x_exps.len() / 2
    }

    pub fn to_poly(&self) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        terms.insert(self.exps.clone(), BigInt::from(self.sign));
        LaurentPoly {
            genus: self.genus(),
            terms,
        }
    }
}

/// Exact multivariate Laurent polynomial over the integers.
///
/// Invariant: no stored zero coefficients; all exponent vectors have length
/// `2g` in their x-part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    genus: usize,
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl LaurentPoly {
    pub fn zero(genus: usize) -> Self {
        LaurentPoly {
            genus,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(genus: usize) -> Self {
        Self::constant(genus, BigInt::one())
    }

    pub fn constant(genus: usize, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ExponentVector::zero(genus), c);
        }
        LaurentPoly { genus, terms }
    }

    pub fn from_terms(
        genus: usize,
        raw: impl IntoIterator<Item = (ExponentVector, BigInt)>,
    ) -> Self {
        let mut p = LaurentPoly::zero(genus);
        for (e, c) in raw {
            assert_eq!(e.x_exps.len(), 2 * genus, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn monomial(genus: usize, exps: ExponentVector, c: BigInt) -> Self {
        Self::from_terms(genus, [(exps, c)])
    }

    /// The variable `t`.
    pub fn t(genus: usize) -> Self {
        let mut e = ExponentVector::zero(genus);
        e.t_exp = 1;
        Self::monomial(genus, e, BigInt::one())
    }

    /// The variable `x_l`, `1 <= l <= 2g`.
    pub fn x(genus: usize, l: usize) -> Self {
        assert!(l >= 1 && l <= 2 * genus, "surface variable index");
        let mut e = ExponentVector::zero(genus);
        e.x_exps[l - 1] = 1;
        Self::monomial(genus, e, BigInt::one())
    }

    /// Generic variable by index: 0 is `t`, `1..=2g` are the `x_l`.
    pub fn var(genus: usize, var: usize) -> Self {
        let mut e = ExponentVector::zero(genus);
        e.set(var, 1);
        Self::monomial(genus, e, BigInt::one())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn nvars(&self) -> usize {
        1 + 2 * self.genus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| e.is_zero() && c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    /// True iff the polynomial is `± monomial`, i.e. a unit of the ring.
    pub fn as_unit(&self) -> Option<UnitMonomial> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if c.magnitude().is_one() {
            Some(UnitMonomial {
                sign: if c.is_negative() { -1 } else { 1 },
                exps: e.clone(),
            })
        } else {
            None
        }
    }

    /// Constant term viewed as an integer, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            return Some(BigInt::zero());
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.is_zero() {
                return Some(c.clone());
            }
        }
        None
    }

    fn add_term(&mut self, e: ExponentVector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<(), LaurentError> {
        if self.genus != other.genus {
            Err(LaurentError::ContextMismatch(self.genus, other.genus))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_ctx(other)?;
        Ok(self.add(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_ctx(other)?;
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.genus, other.genus, "ring context mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            genus: self.genus,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.genus, other.genus, "ring context mismatch");
        let mut out = LaurentPoly::zero(self.genus);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_unit(&self, u: &UnitMonomial) -> Self {
        let s = BigInt::from(u.sign);
        LaurentPoly {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(&u.exps), c * &s))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero(self.genus);
        }
        LaurentPoly {
            genus: self.genus,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = LaurentPoly::one(self.genus);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// The bar involution: inverts every variable, `t -> t^-1`, `x_l -> x_l^-1`.
    pub fn conj(&self) -> Self {
        LaurentPoly {
            genus: self.genus,
            terms: self.terms.iter().map(|(e, c)| (e.neg(), c.clone())).collect(),
        }
    }

    /// Exact evaluation at rational values. All values must be nonzero since
    /// negative exponents may occur.
    pub fn evaluate(
        &self,
        t_val: &BigRational,
        x_vals: &[BigRational],
    ) -> Result<BigRational, LaurentError> {
        assert_eq!(x_vals.len(), 2 * self.genus, "x value count");
        if t_val.is_zero() || x_vals.iter().any(|v| v.is_zero()) {
            return Err(LaurentError::ZeroSubstitution);
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = BigRational::from(c.clone());
            term *= rat_pow(t_val, e.t_exp);
            for (v, &k) in x_vals.iter().zip(&e.x_exps) {
                term *= rat_pow(v, k);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Max exponent of `var` over all terms (0 for the zero polynomial).
    pub fn max_exp(&self, var: usize) -> i64 {
        self.terms.keys().map(|e| e.get(var)).max().unwrap_or(0)
    }

    /// Min exponent of `var` over all terms (0 for the zero polynomial).
    pub fn min_exp(&self, var: usize) -> i64 {
        self.terms.keys().map(|e| e.get(var)).min().unwrap_or(0)
    }

    /// Degree span (max - min exponent) in `var`.
    pub fn span(&self, var: usize) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.max_exp(var) - self.min_exp(var)
        }
    }

    /// Canonical associate representative together with the extracted unit:
    /// `p = u * p0` where `p0` has minimal exponent 0 in every variable and a
    /// positive coefficient on its lexicographically largest term.
    pub fn normalize_unit(&self) -> Result<(Self, UnitMonomial), LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroInput);
        }
        let mut shift = ExponentVector::zero(self.genus);
        for var in 0..self.nvars() {
            shift.set(var, self.min_exp(var));
        }
        let mut shifted = LaurentPoly {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(&shift.neg()), c.clone()))
                .collect(),
        };
        let lead_neg = shifted
            .terms
            .iter()
            .next_back()
            .map(|(_, c)| c.is_negative())
            .unwrap();
        let sign = if lead_neg {
            shifted = shifted.neg();
            -1
        } else {
            1
        };
        Ok((shifted, UnitMonomial { sign, exps: shift }))
    }

    /// `normalize_unit` with the unit discarded; maps 0 to 0.
    pub fn unit_normal(&self) -> Self {
        match self.normalize_unit() {
            Ok((p, _)) => p,
            Err(_) => self.clone(),
        }
    }

    pub fn is_associate(&self, other: &Self) -> bool {
        if self.genus != other.genus {
            return false;
        }
        self.unit_normal() == other.unit_normal()
    }

    /// Positive integer content and primitive part; `p = content * primitive`.
    pub fn content_and_primitive(&self) -> Result<(BigInt, Self), LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroInput);
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        let prim = LaurentPoly {
            genus: self.genus,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / &g)).collect(),
        };
        Ok((g, prim))
    }

    /// Partial derivative with respect to a variable (0 = t, 1..=2g = x_l).
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = LaurentPoly::zero(self.genus);
        for (e, c) in &self.terms {
            let k = e.get(var);
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2.set(var, k - 1);
            out.add_term(e2, c * BigInt::from(k));
        }
        out
    }

    /// Shift minimal exponents to 0: the ordinary-polynomial associate.
    pub fn poly_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut shift = ExponentVector::zero(self.genus);
        for var in 0..self.nvars() {
            shift.set(var, -self.min_exp(var));
        }
        LaurentPoly {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(&shift), c.clone()))
                .collect(),
        }
    }

    /// Exact division in the Laurent ring: `Some(q)` with `self = q * d` iff
    /// `d` divides `self`. Monomials are units, so only the polynomial parts
    /// matter; the unit discrepancy is folded into the quotient.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.genus, d.genus, "ring context mismatch");
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero(self.genus));
        }
        // p = u_p P, d = u_d D with P, D in polynomial form.
        let (pn, up) = self.normalize_unit().unwrap();
        let (dn, ud) = d.normalize_unit().unwrap();
        let q = poly_div_exact(&pn, &dn)?;
        Some(q.mul_unit(&up.mul(&ud.inv())))
    }

    /// True iff `d` divides `self` in the Laurent ring.
    pub fn divisible_by(&self, d: &Self) -> bool {
        self.div_exact(d).is_some()
    }

    /// Greatest common divisor, returned unit-normalized. `gcd(p, 0) = p`
    /// normalized; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        assert_eq!(self.genus, other.genus, "ring context mismatch");
        if self.is_zero() {
            return other.unit_normal();
        }
        if other.is_zero() {
            return self.unit_normal();
        }
        let a = self.poly_part();
        let b = other.poly_part();
        gcd_poly(&a, &b).unit_normal()
    }

    /// Extract the coefficient of `var^k` as a polynomial not involving `var`.
    pub fn coeff_wrt(&self, var: usize, k: i64) -> Self {
        let mut out = LaurentPoly::zero(self.genus);
        for (e, c) in &self.terms {
            if e.get(var) == k {
                let mut e2 = e.clone();
                e2.set(var, 0);
                out.add_term(e2, c.clone());
            }
        }
        out
    }
}

fn rat_pow(base: &BigRational, exp: i64) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    let mag = exp.unsigned_abs() as u32;
    let mut acc = BigRational::one();
    for _ in 0..mag {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Exact division of ordinary (nonnegative-exponent) polynomials by repeated
/// cancellation of the lexicographically leading term. Succeeds iff the
/// division is exact.
fn poly_div_exact(p: &LaurentPoly, d: &LaurentPoly) -> Option<LaurentPoly> {
    let genus = p.genus();
    let (de, dc) = d.terms.iter().next_back().unwrap();
    let mut rem = p.clone();
    let mut quot = LaurentPoly::zero(genus);
    while !rem.is_zero() {
        let (re, rc) = rem.terms.iter().next_back().unwrap();
        let qe = re.add(&de.neg());
        if qe.t_exp < 0 || qe.x_exps.iter().any(|&e| e < 0) {
            return None;
        }
        let (qc, r) = rc.div_rem(dc);
        if !r.is_zero() {
            return None;
        }
        let m = LaurentPoly::monomial(genus, qe, qc);
        rem = rem.sub(&m.mul(d));
        quot = quot.add(&m);
    }
    Some(quot)
}

/// Highest variable index in which either polynomial has positive span, if any.
fn main_var(a: &LaurentPoly, b: &LaurentPoly) -> Option<usize> {
    (0..a.nvars())
        .rev()
        .find(|&v| a.span(v) > 0 || b.span(v) > 0)
}

/// Content of `p` with respect to `var`: gcd of its `var`-coefficients.
fn content_wrt(p: &LaurentPoly, var: usize) -> LaurentPoly {
    let mut g = LaurentPoly::zero(p.genus());
    for k in p.min_exp(var)..=p.max_exp(var) {
        let c = p.coeff_wrt(var, k);
        if !c.is_zero() {
            g = g.gcd(&c);
            if g.is_one() {
                return g;
            }
        }
    }
    g
}

fn primitive_wrt(p: &LaurentPoly, var: usize) -> LaurentPoly {
    let c = content_wrt(p, var);
    p.div_exact(&c).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` in `var` (multiply-as-you-go variant;
/// returns `lc(b)^k * a mod b` for some `k >= 0`).
fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly, var: usize) -> LaurentPoly {
    let db = b.max_exp(var);
    let lb = b.coeff_wrt(var, db);
    let mut r = a.clone();
    while !r.is_zero() && r.max_exp(var) >= db {
        let dr = r.max_exp(var);
        let lr = r.coeff_wrt(var, dr);
        let shift = LaurentPoly::var(a.genus(), var).pow((dr - db) as u32);
        r = r.mul(&lb).sub(&b.mul(&lr).mul(&shift));
    }
    r
}

/// Multivariate gcd over Z via recursion on the main variable with a
/// primitive pseudo-remainder sequence.
fn gcd_poly(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let var = match main_var(a, b) {
        None => {
            // Both constants.
            let ca = a.as_constant().unwrap();
            let cb = b.as_constant().unwrap();
            return LaurentPoly::constant(a.genus(), ca.gcd(&cb));
        }
        Some(v) => v,
    };
    let ca = content_wrt(a, var);
    let cb = content_wrt(b, var);
    let cont = ca.gcd(&cb);
    if a.span(var) == 0 {
        // `a` is free of `var`: gcd(a, b) = gcd(a, content_var(b)).
        return a.gcd(&cb);
    }
    if b.span(var) == 0 {
        return b.gcd(&ca);
    }
    let mut u = primitive_wrt(a, var).poly_part();
    let mut v = primitive_wrt(b, var).poly_part();
    if u.max_exp(var) < v.max_exp(var) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let r = pseudo_rem(&u, &v, var);
        if r.is_zero() {
            break;
        }
        let r = primitive_wrt(&r, var).poly_part();
        u = v;
        v = r;
        if v.span(var) == 0 {
            // Coprime in `var`; only the contents contribute.
            return cont.unit_normal();
        }
    }
    cont.mul(&primitive_wrt(&v, var)).unit_normal()
}

// ---------------------------------------------------------------------------
// Text grammar
// ---------------------------------------------------------------------------

/// Parse a polynomial in the text grammar, e.g. `3*t^2*x1^-1 - 2 + t*x2`.
/// The genus fixes the ring context; x indices above `2g` are rejected.
pub fn parse_poly(input: &str, genus: usize) -> Result<LaurentPoly, LaurentError> {
    Parser::new(input, Some(genus)).parse()
}

/// Parse with the genus inferred from the largest x index present
/// (`g = ceil(max_index / 2)`, and 0 when no x occurs).
pub fn parse_poly_infer(input: &str) -> Result<LaurentPoly, LaurentError> {
    let mut max_idx = 0usize;
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let mut j = i + 1;
            let mut idx = 0usize;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                idx = idx * 10 + (bytes[j] - b'0') as usize;
                j += 1;
            }
            max_idx = max_idx.max(idx);
            i = j;
        } else {
            i += 1;
        }
    }
    let genus = max_idx.div_ceil(2);
    parse_poly(input, genus)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    genus: Option<usize>,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, genus: Option<usize>) -> Self {
        Parser {
            bytes: input.as_bytes(),
            pos: 0,
            genus,
        }
    }

    fn err(&self, msg: &str) -> LaurentError {
        LaurentError::Parse {
            offset: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<LaurentPoly, LaurentError> {
        let genus = self.genus.expect("genus required");
        let acc = self.parse_expr(genus)?;
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(acc)
    }

    /// expr := ['+'|'-'] product (('+'|'-') product)*
    fn parse_expr(&mut self, genus: usize) -> Result<LaurentPoly, LaurentError> {
        let mut acc = LaurentPoly::zero(genus);
        let mut sign = BigInt::one();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -sign;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            Some(_) => {}
            None => return Err(self.err("empty input")),
        }
        loop {
            let term = self.parse_product(genus)?;
            acc = acc.add(&term.scale(&sign));
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = BigInt::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -BigInt::one();
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// product := factor (['*'] factor)*
    fn parse_product(&mut self, genus: usize) -> Result<LaurentPoly, LaurentError> {
        let mut acc = self.parse_factor(genus)?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.parse_factor(genus)?;
                    acc = acc.mul(&f);
                }
                // Juxtaposed factors without '*', e.g. "2t" or "(t-1)(t+1)".
                Some(c) if c == b'(' || c == b't' || c == b'x' || c.is_ascii_digit() => {
                    let f = self.parse_factor(genus)?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// factor := (uint | 't' | 'x'idx | '(' expr ')') ['^' int]
    fn parse_factor(&mut self, genus: usize) -> Result<LaurentPoly, LaurentError> {
        let base = match self.peek() {
            Some(c) if c.is_ascii_digit() => LaurentPoly::constant(genus, self.parse_uint()?),
            Some(b't') => {
                self.pos += 1;
                LaurentPoly::t(genus)
            }
            Some(b'x') => {
                self.pos += 1;
                let idx = self.parse_uint()?;
                let idx: usize = idx
                    .try_into()
                    .map_err(|_| self.err("x index out of range"))?;
                if idx < 1 || idx > 2 * genus {
                    return Err(self.err(&format!(
                        "x index {idx} out of range for genus {genus}"
                    )));
                }
                LaurentPoly::x(genus, idx)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr(genus)?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                inner
            }
            _ => return Err(self.err("expected a term")),
        };
        let e = self.parse_exp()?;
        if e >= 0 {
            Ok(base.pow(e as u32))
        } else if let Some(u) = base.as_unit() {
            // Negative exponents only for invertible (unit monomial) bases.
            let mut acc = LaurentPoly::one(genus);
            let inv = u.inv().to_poly();
            for _ in 0..(-e) {
                acc = acc.mul(&inv);
            }
            Ok(acc)
        } else {
            Err(self.err("negative exponent on a non-unit"))
        }
    }

    fn parse_exp(&mut self) -> Result<i64, LaurentError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.parse_int()
        } else {
            Ok(1)
        }
    }

    fn parse_int(&mut self) -> Result<i64, LaurentError> {
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                neg = true;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        let v: i64 = self
            .parse_uint()?
            .try_into()
            .map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn parse_uint(&mut self) -> Result<BigInt, LaurentError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Canonical order, highest term first.
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.magnitude();
            let mut atoms: Vec<String> = Vec::new();
            if e.t_exp != 0 {
                atoms.push(if e.t_exp == 1 {
                    "t".to_string()
                } else {
                    format!("t^{}", e.t_exp)
                });
            }
            for (idx, &k) in e.x_exps.iter().enumerate() {
                if k != 0 {
                    atoms.push(if k == 1 {
                        format!("x{}", idx + 1)
                    } else {
                        format!("x{}^{}", idx + 1, k)
                    });
                }
            }
            if atoms.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", atoms.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for UnitMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, g: usize) -> LaurentPoly {
        parse_poly(s, g).unwrap()
    }

    #[test]
    fn add_cancellation_and_identity() {
        let g = 1;
        assert_eq!(p("t-1", g).add(&p("1", g)), p("t", g));
        let q = p("3*t^2*x1^-1 - 2 + t*x2", g);
        assert_eq!(q.add(&LaurentPoly::zero(g)), q);
        assert_eq!(p("2*t*x1", g).add(&p("3*t*x1", g)), p("5*t*x1", g));
    }

    #[test]
    fn mul_basic() {
        let g = 1;
        assert_eq!(p("t-1", g).mul(&p("t+1", g)), p("t^2-1", g));
        let q = p("3*t^2*x1^-1 - 2 + t*x2", g);
        assert_eq!(q.mul(&LaurentPoly::one(g)), q);
        assert_eq!(p("t*x1^-1", g).mul(&p("t^-1*x1", g)), p("1", g));
    }

    #[test]
    fn context_mismatch_rejected() {
        let a = p("t", 1);
        let b = p("t", 2);
        assert!(matches!(
            a.checked_add(&b),
            Err(LaurentError::ContextMismatch(1, 2))
        ));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn conj_examples() {
        let g = 1;
        assert_eq!(p("t", g).conj(), p("t^-1", g));
        assert_eq!(p("2*t*x1 - 3", g).conj(), p("2*t^-1*x1^-1 - 3", g));
        let q = p("t^2*x2 - x1", g);
        assert_eq!(q.conj().conj(), q);
    }

    #[test]
    fn evaluate_examples() {
        use num_traits::FromPrimitive;
        let g = 1;
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let one = r(1, 1);
        assert_eq!(
            p("t^2-t+1", g).evaluate(&r(-1, 1), &[one.clone(), one.clone()]).unwrap(),
            BigRational::from_i64(3).unwrap()
        );
        assert_eq!(
            p("x1-1", g).evaluate(&r(5, 1), &[one.clone(), one.clone()]).unwrap(),
            BigRational::zero()
        );
        assert_eq!(
            p("t*x1 - t^-1", g).evaluate(&r(2, 1), &[one.clone(), one]).unwrap(),
            r(3, 2)
        );
        assert!(matches!(
            p("t", g).evaluate(&BigRational::zero(), &[r(1, 1), r(1, 1)]),
            Err(LaurentError::ZeroSubstitution)
        ));
    }

    #[test]
    fn normalize_unit_examples() {
        let g = 1;
        // -t^2 x1^-1 (t-1) = -t^3 x1^-1 + t^2 x1^-1
        let q = p("t^2*x1^-1 - t^3*x1^-1", g);
        let (n, u) = q.normalize_unit().unwrap();
        assert_eq!(n, p("t-1", g));
        assert_eq!(n.mul_unit(&u), q);

        let (n, u) = p("5", g).normalize_unit().unwrap();
        assert_eq!(n, p("5", g));
        assert_eq!(u, UnitMonomial::one(g));

        let (n, u) = p("t^-3 - t^-4", g).normalize_unit().unwrap();
        assert_eq!(n, p("t-1", g));
        assert_eq!(u.sign, 1);
        assert_eq!(u.exps.t_exp, -4);

        assert!(LaurentPoly::zero(g).normalize_unit().is_err());
        // Idempotence: normalizing a normalized polynomial gives unit 1.
        let (n2, u2) = n.normalize_unit().unwrap();
        assert_eq!(n2, n);
        assert_eq!(u2, UnitMonomial::one(g));
    }

    #[test]
    fn content_primitive_examples() {
        let g = 0;
        let (c, q) = p("6*t-4", g).content_and_primitive().unwrap();
        assert_eq!(c, BigInt::from(2));
        assert_eq!(q, p("3*t-2", g));
        let (c, q) = p("t-1", g).content_and_primitive().unwrap();
        assert_eq!(c, BigInt::one());
        assert_eq!(q, p("t-1", g));
        let (c, q) = p("-9", g).content_and_primitive().unwrap();
        assert_eq!(c, BigInt::from(9));
        assert_eq!(q, p("-1", g));
    }

    #[test]
    fn div_exact_basic() {
        let g = 1;
        let a = p("t^2-1", g);
        let b = p("t-1", g);
        assert_eq!(a.div_exact(&b).unwrap(), p("t+1", g));
        assert!(a.div_exact(&p("t-2", g)).is_none());
        // Units divide anything.
        let q = a.div_exact(&p("t^-2*x1", g)).unwrap();
        assert_eq!(q.mul(&p("t^-2*x1", g)), a);
    }

    #[test]
    fn gcd_examples() {
        let g = 1;
        assert_eq!(p("t-1", g).gcd(&p("t^2-1", g)), p("t-1", g));
        let q = p("t^-3 - t^-4", g);
        assert_eq!(q.gcd(&LaurentPoly::zero(g)), p("t-1", g));
        assert_eq!(
            p("t*x1 - x1", g).gcd(&p("t*x2^2 - x2^2", g)),
            p("t-1", g)
        );
    }

    #[test]
    fn gcd_multivariate_mixed() {
        let g = 1;
        let a = p("t-1", g).mul(&p("x1+1", g)).mul(&p("t*x2-1", g));
        let b = p("t-1", g).mul(&p("x1+1", g)).mul(&p("x2+3", g));
        let d = a.gcd(&b);
        assert!(d.is_associate(&p("t-1", g).mul(&p("x1+1", g))));
        assert!(a.divisible_by(&d));
        assert!(b.divisible_by(&d));
    }

    #[test]
    fn grammar_round_trip() {
        let g = 1;
        for s in [
            "3*t^2*x1^-1 - 2 + t*x2",
            "0",
            "-t + 1",
            "x1^-2*x2^3 + 7",
            "t^-5",
        ] {
            let q = p(s, g);
            let printed = q.to_string();
            assert_eq!(p(&printed, g), q, "round trip through {printed}");
        }
    }

    #[test]
    fn parse_rejects_bad_index() {
        assert!(parse_poly("x3", 1).is_err());
        assert!(parse_poly("t +", 1).is_err());
        assert!(parse_poly("", 1).is_err());
    }

    #[test]
    fn infer_genus() {
        assert_eq!(parse_poly_infer("t^2-1").unwrap().genus(), 0);
        assert_eq!(parse_poly_infer("t*x1").unwrap().genus(), 1);
        assert_eq!(parse_poly_infer("x3-x4").unwrap().genus(), 2);
    }
}
