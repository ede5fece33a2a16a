//! Factorization of Laurent-ring elements into irreducibles.
//!
//! The univariate core is Zassenhaus: squarefree split, factorization modulo
//! a suitable odd prime (distinct-degree then equal-degree splitting), Hensel
//! lifting past twice the Landau-Mignotte bound, and subset recombination
//! with trial division. Multivariate inputs are reduced to one variable by
//! Kronecker substitution and recombined by exact trial division.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::laurent::{LaurentError, LaurentPoly, UnitMonomial};

/// Complete factorization: `input = unit * prod factors[i].0 ^ factors[i].1`.
/// Integer prime contents appear as degree-0 irreducible factors. Factors are
/// unit-normalized, pairwise non-associate, and sorted canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: UnitMonomial,
    pub factors: Vec<(LaurentPoly, u32)>,
}

impl Factorization {
    pub fn product(&self) -> LaurentPoly {
        let mut acc = self.unit.to_poly();
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }

    /// Multiplicity of the associate class of `q` among the factors.
    pub fn multiplicity_of(&self, q: &LaurentPoly) -> u32 {
        self.factors
            .iter()
            .find(|(f, _)| f.is_associate(q))
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for (p, m) in &self.factors {
            write!(f, " * ({p})^{m}")?;
        }
        Ok(())
    }
}

/// Deterministic total order on polynomials for canonical factor lists.
pub fn poly_cmp(a: &LaurentPoly, b: &LaurentPoly) -> Ordering {
    let mut ia = a.terms();
    let mut ib = b.terms();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ea, ca)), Some((eb, cb))) => {
                let o = ea.cmp(eb).then_with(|| ca.cmp(cb));
                if o != Ordering::Equal {
                    return o;
                }
            }
        }
    }
}

/// True iff `p = u * q` for a unit monomial `u`. Both-zero counts as true.
pub fn is_associate(p: &LaurentPoly, q: &LaurentPoly) -> bool {
    if p.is_zero() || q.is_zero() {
        return p.is_zero() && q.is_zero();
    }
    p.is_associate(q)
}

/// Product of the distinct irreducible factors of `p`, up to unit; computed
/// as `p / gcd(p, dp/dv1, ..., dp/dvn)`. Integer content is dropped.
pub fn squarefree_part(p: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
    if p.is_zero() {
        return Err(LaurentError::ZeroInput);
    }
    let (_, prim) = p.content_and_primitive()?;
    let prim = prim.unit_normal();
    let mut g = prim.clone();
    for var in 0..p.nvars() {
        if prim.span(var) > 0 {
            g = g.gcd(&prim.derivative(var));
        }
    }
    Ok(prim.div_exact(&g).expect("gcd divides").unit_normal())
}

/// Full factorization of a nonzero Laurent polynomial.
pub fn factor(p: &LaurentPoly) -> Result<Factorization, LaurentError> {
    let genus = p.genus();
    if p.is_zero() {
        return Err(LaurentError::ZeroInput);
    }
    let (pn, mut unit) = p.normalize_unit()?;
    let (content, prim) = pn.content_and_primitive()?;
    let mut factors: Vec<(LaurentPoly, u32)> = Vec::new();
    for (q, m) in factor_bigint(&content) {
        factors.push((LaurentPoly::constant(genus, q), m));
    }
    if !prim.is_one() {
        for (f, m) in factor_primitive(&prim) {
            let (fn_, fu) = f.normalize_unit().expect("nonzero factor");
            // Fold the factor's unit (to the m-th power) into the global unit.
            for _ in 0..m {
                unit = unit.mul(&fu);
            }
            merge_factor(&mut factors, fn_, m);
        }
    }
    factors.sort_by(|(a, _), (b, _)| poly_cmp(a, b));
    let result = Factorization { unit, factors };
    debug_assert_eq!(result.product(), *p);
    Ok(result)
}

/// Factorization restricted to polynomials in at most one variable.
pub fn factor_univariate(p: &LaurentPoly) -> Result<Factorization, LaurentError> {
    let active: Vec<usize> = (0..p.nvars()).filter(|&v| p.span(v) > 0).collect();
    assert!(active.len() <= 1, "factor_univariate requires one variable");
    factor(p)
}

fn merge_factor(factors: &mut Vec<(LaurentPoly, u32)>, f: LaurentPoly, m: u32) {
    for (g, k) in factors.iter_mut() {
        if *g == f {
            *k += m;
            return;
        }
    }
    factors.push((f, m));
}

/// Trial-division factorization of a positive integer.
fn factor_bigint(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.clone();
    assert!(n.is_positive());
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut m = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            m += 1;
        }
        if m > 0 {
            out.push((d.clone(), m));
        }
        d += 1;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

/// Factor a primitive polynomial (positive canonical lead, min exps 0) into
/// irreducibles with multiplicity. Units are not produced here.
fn factor_primitive(p: &LaurentPoly) -> Vec<(LaurentPoly, u32)> {
    let active: Vec<usize> = (0..p.nvars()).filter(|&v| p.span(v) > 0).collect();
    match active.len() {
        0 => Vec::new(),
        1 => factor_one_var(p, active[0]),
        _ => factor_kronecker(p, &active),
    }
}

/// Univariate case: Yun squarefree decomposition, then Zassenhaus per part.
fn factor_one_var(p: &LaurentPoly, var: usize) -> Vec<(LaurentPoly, u32)> {
    let genus = p.genus();
    let mut out = Vec::new();
    for (part, mult) in yun_squarefree(p, var) {
        let f = to_vec(&part, var);
        for g in zassenhaus(&f) {
            out.push((from_vec(genus, var, &g).unit_normal(), mult));
        }
    }
    out
}

/// Yun's squarefree decomposition in one variable, characteristic 0.
fn yun_squarefree(p: &LaurentPoly, var: usize) -> Vec<(LaurentPoly, u32)> {
    let f = p.poly_part();
    let df = f.derivative(var);
    let g = f.gcd(&df);
    if g.span(var) == 0 {
        return vec![(f.unit_normal(), 1)];
    }
    let mut out = Vec::new();
    let mut w = f.div_exact(&g).unwrap();
    let mut y = df.div_exact(&g).unwrap();
    let mut i = 1u32;
    while w.span(var) > 0 {
        let z = y.sub(&w.derivative(var));
        let h = w.gcd(&z);
        if h.span(var) > 0 {
            out.push((h.unit_normal(), i));
        }
        w = w.div_exact(&h).unwrap();
        y = z.div_exact(&h).unwrap();
        i += 1;
    }
    out
}

/// Kronecker substitution: collapse the active variables into one, factor the
/// univariate image, and recover multivariate factors by minimal-subset
/// recombination with exact trial division.
fn factor_kronecker(p: &LaurentPoly, active: &[usize]) -> Vec<(LaurentPoly, u32)> {
    let genus = p.genus();
    let max_span = active.iter().map(|&v| p.span(v)).max().unwrap();
    let d_base = 2 * (max_span + 1) + 1;

    // Encode into a polynomial in t over genus 0.
    let mut image = LaurentPoly::zero(0);
    {
        let mut terms = Vec::new();
        for (e, c) in p.terms() {
            let mut exp: i64 = 0;
            let mut weight: i64 = 1;
            for &v in active {
                exp += e.get(v) * weight;
                weight *= d_base;
            }
            let mut ev = crate::laurent::ExponentVector::zero(0);
            ev.t_exp = exp;
            terms.push((ev, c.clone()));
        }
        image = image.add(&LaurentPoly::from_terms(0, terms));
    }

    // The weighted minimum exponent of the image need not be attained by a
    // single term of `p`, so the image can carry a pure power of y that the
    // univariate factorization strips as a unit.  Candidate factors must be
    // re-tried with every shift y^s, 0 <= s <= kmin, to recover the digits
    // that the lost monomial would have carried.
    let kmin = image.min_exp(0);

    let decode = |u: &[BigInt], shift: i64| -> LaurentPoly {
        let mut terms = Vec::new();
        for (i, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = crate::laurent::ExponentVector::zero(genus);
            let mut rem = i as i64 + shift;
            for &v in active {
                e.set(v, rem % d_base);
                rem /= d_base;
            }
            terms.push((e, c.clone()));
        }
        LaurentPoly::from_terms(genus, terms)
    };

    // Univariate irreducibles of the image, flattened with multiplicity.
    let mut pieces: Vec<Vec<BigInt>> = Vec::new();
    for (part, mult) in yun_squarefree(&image, 0) {
        let f = to_vec(&part, 0);
        for g in zassenhaus(&f) {
            for _ in 0..mult {
                pieces.push(g.clone());
            }
        }
    }
    // Integer content of the image can appear if p's terms collide under no
    // collision... they do not; the image is primitive because p is.

    let mut out: Vec<(LaurentPoly, u32)> = Vec::new();
    let mut remaining = p.clone();
    'outer: loop {
        if pieces.is_empty() {
            break;
        }
        let n = pieces.len();
        for size in 1..=n {
            let mut sel: Vec<usize> = (0..size).collect();
            loop {
                let mut prod = vec![BigInt::one()];
                for &i in &sel {
                    prod = uni_mul(&prod, &pieces[i]);
                }
                for shift in 0..=kmin {
                    let cand = decode(&prod, shift);
                    if cand.is_zero() {
                        continue;
                    }
                    if let Ok((_, cand_prim)) = cand.content_and_primitive() {
                        let cand_n = cand_prim.unit_normal();
                        if !cand_n.is_one() && remaining.divisible_by(&cand_n) {
                            remaining = remaining.div_exact(&cand_n).unwrap();
                            merge_factor(&mut out, cand_n, 1);
                            for &i in sel.iter().rev() {
                                pieces.remove(i);
                            }
                            continue 'outer;
                        }
                    }
                }
                if !next_subset(&mut sel, n) {
                    break;
                }
            }
        }
        // No subset divides: the remainder is irreducible (or a unit).
        break;
    }
    if !remaining.unit_normal().is_one() {
        merge_factor(&mut out, remaining.unit_normal(), 1);
    }
    out
}

// ---------------------------------------------------------------------------
// Univariate helpers over Z (dense Vec<BigInt>, index = exponent)
// ---------------------------------------------------------------------------

fn to_vec(p: &LaurentPoly, var: usize) -> Vec<BigInt> {
    let q = p.poly_part();
    let deg = q.max_exp(var) as usize;
    let mut out = vec![BigInt::zero(); deg + 1];
    for (e, c) in q.terms() {
        out[e.get(var) as usize] += c;
    }
    trim(&mut out);
    out
}

fn from_vec(genus: usize, var: usize, v: &[BigInt]) -> LaurentPoly {
    let mut terms = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if !c.is_zero() {
            let mut e = crate::laurent::ExponentVector::zero(genus);
            e.set(var, i as i64);
            terms.push((e, c.clone()));
        }
    }
    LaurentPoly::from_terms(genus, terms)
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn uni_deg(v: &[BigInt]) -> usize {
    debug_assert!(!v.is_empty());
    v.len() - 1
}

fn uni_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    trim(&mut out);
    out
}

/// Exact division over Z assuming it divides; returns None otherwise.
fn uni_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if b.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - b.len() + 1];
    let lb = b.last().unwrap();
    while rem.len() >= b.len() {
        let lr = rem.last().unwrap();
        let (q, r) = lr.div_rem(lb);
        if !r.is_zero() {
            return None;
        }
        let shift = rem.len() - b.len();
        quot[shift] = q.clone();
        for (j, cb) in b.iter().enumerate() {
            let prod = cb * &q;
            rem[shift + j] -= prod;
        }
        trim(&mut rem);
        if rem.is_empty() {
            trim(&mut quot);
            return Some(quot);
        }
        if rem.len() < b.len() {
            return None;
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Arithmetic of polynomials over a small prime field
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Fp {
    p: u64,
}

type FpPoly = Vec<u64>;

impl Fp {
    fn reduce_int(&self, c: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = c.mod_floor(&m);
        r.to_u64().unwrap()
    }

    fn from_bigint_poly(&self, v: &[BigInt]) -> FpPoly {
        let mut out: FpPoly = v.iter().map(|c| self.reduce_int(c)).collect();
        self.trim(&mut out);
        out
    }

    fn trim(&self, v: &mut FpPoly) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn add_poly(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let mut out = vec![0u64; a.len().max(b.len())];
        for (i, &c) in a.iter().enumerate() {
            out[i] = c;
        }
        for (i, &c) in b.iter().enumerate() {
            out[i] = self.add(out[i], c);
        }
        self.trim(&mut out);
        out
    }

    fn sub_poly(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let mut out = vec![0u64; a.len().max(b.len())];
        for (i, &c) in a.iter().enumerate() {
            out[i] = c;
        }
        for (i, &c) in b.iter().enumerate() {
            out[i] = self.sub(out[i], c);
        }
        self.trim(&mut out);
        out
    }

    fn mul_poly(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ca) in a.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (j, &cb) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(ca, cb));
            }
        }
        self.trim(&mut out);
        out
    }

    fn divrem(&self, a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut rem = a.clone();
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![0u64; rem.len() - b.len() + 1];
        let lb_inv = self.inv(*b.last().unwrap());
        while rem.len() >= b.len() {
            let q = self.mul(*rem.last().unwrap(), lb_inv);
            let shift = rem.len() - b.len();
            quot[shift] = q;
            for (j, &cb) in b.iter().enumerate() {
                rem[shift + j] = self.sub(rem[shift + j], self.mul(q, cb));
            }
            self.trim(&mut rem);
            if rem.is_empty() {
                break;
            }
        }
        self.trim(&mut quot);
        (quot, rem)
    }

    fn monic(&self, a: &FpPoly) -> FpPoly {
        if a.is_empty() {
            return Vec::new();
        }
        let inv = self.inv(*a.last().unwrap());
        a.iter().map(|&c| self.mul(c, inv)).collect()
    }

    fn gcd(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_empty() {
            let (_, r) = self.divrem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Extended gcd for coprime a, b: returns (s, t) with s a + t b = 1,
    /// deg s < deg b, deg t < deg a.
    fn bezout_coprime(&self, a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let ns = self.sub_poly(&s0, &self.mul_poly(&q, &s1));
            let nt = self.sub_poly(&t0, &self.mul_poly(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, ns);
            t0 = std::mem::replace(&mut t1, nt);
        }
        assert_eq!(r0.len(), 1, "inputs not coprime");
        let inv = self.inv(r0[0]);
        let scale = |v: &FpPoly| v.iter().map(|&c| self.mul(c, inv)).collect::<FpPoly>();
        let mut s = scale(&s0);
        let mut t = scale(&t0);
        // Normalize degrees: s mod b, fold quotient into t.
        if s.len() >= b.len() && b.len() > 1 {
            let (q, r) = self.divrem(&s, b);
            s = r;
            t = self.add_poly(&t, &self.mul_poly(&q, a));
        }
        (s, t)
    }

    fn derivative(&self, a: &FpPoly) -> FpPoly {
        if a.len() <= 1 {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() - 1];
        for (i, &c) in a.iter().enumerate().skip(1) {
            out[i - 1] = self.mul(c, (i as u64) % self.p);
        }
        self.trim(&mut out);
        out
    }

    fn powmod(&self, base: &FpPoly, exp: &BigUint, modulus: &FpPoly) -> FpPoly {
        let mut acc = vec![1u64];
        let b = self.divrem(base, modulus).1;
        for bit in (0..exp.bits()).rev() {
            acc = self.divrem(&self.mul_poly(&acc, &acc), modulus).1;
            if exp.bit(bit) {
                acc = self.divrem(&self.mul_poly(&acc, &b), modulus).1;
            }
        }
        acc
    }

    fn powmod_u64(&self, base: &FpPoly, exp: u64, modulus: &FpPoly) -> FpPoly {
        self.powmod(base, &BigUint::from(exp), modulus)
    }
}

// ---------------------------------------------------------------------------
// Zassenhaus core: primitive squarefree univariate factorization over Z
// ---------------------------------------------------------------------------

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Factor a primitive squarefree polynomial with positive leading coefficient
/// into irreducibles over Z. Degree-0 inputs yield an empty list.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    assert!(!f.is_empty());
    if uni_deg(f) == 0 {
        return Vec::new();
    }
    if uni_deg(f) == 1 {
        return vec![f.to_vec()];
    }
    let n = uni_deg(f);
    let lc = f.last().unwrap().clone();

    // Monicize: F(y) = lc^(n-1) * f(y/lc).
    let monic_input = lc.is_one();
    let big_f: Vec<BigInt> = if monic_input {
        f.to_vec()
    } else {
        let mut out = Vec::with_capacity(n + 1);
        for (i, c) in f.iter().enumerate().take(n) {
            out.push(c * lc.pow((n - 1 - i) as u32));
        }
        out.push(BigInt::one());
        out
    };

    let monic_factors = zassenhaus_monic(&big_f);

    if monic_input {
        return monic_factors;
    }
    // Map back: g(y) = primitive part of G(lc * y), with positive lead.
    let mut out = Vec::new();
    for g in monic_factors {
        let mut back: Vec<BigInt> = g
            .iter()
            .enumerate()
            .map(|(i, c)| c * lc.pow(i as u32))
            .collect();
        trim(&mut back);
        let mut content = BigInt::zero();
        for c in &back {
            content = content.gcd(c);
        }
        if back.last().unwrap().is_negative() {
            content = -content;
        }
        for c in back.iter_mut() {
            *c = &*c / &content;
        }
        out.push(back);
    }
    out
}

fn zassenhaus_monic(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = uni_deg(f);
    debug_assert!(f[n].is_one());

    // Smallest odd prime keeping f squarefree mod p.
    let mut p = 3u64;
    let field = loop {
        if is_prime_u64(p) {
            let field = Fp { p };
            let fp = field.from_bigint_poly(f);
            if fp.len() == n + 1 {
                let d = field.derivative(&fp);
                if !d.is_empty() && field.gcd(&fp, &d).len() == 1 {
                    break field;
                }
            }
        }
        p += 2;
    };
    let fp = field.from_bigint_poly(f);
    let modular = factor_mod_p(field, &fp);
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }

    // Landau-Mignotte: |coeff of any monic factor| <= 2^n * ||f||_2.
    let norm2_sq: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << n) * (norm2_sq.sqrt() + 1);
    let target = BigInt::from(2) * &bound + 1;

    let lifted = hensel_lift_tree(field, f, &modular, &target);
    let modulus = lifted.modulus;

    recombine(f, lifted.factors, &modulus)
}

/// Distinct-degree then equal-degree splitting of a squarefree monic
/// polynomial mod p. Returns monic irreducible factors, sorted.
fn factor_mod_p(field: Fp, f: &FpPoly) -> Vec<FpPoly> {
    let mut out = Vec::new();
    let mut rest = field.monic(f);
    let mut h: FpPoly = vec![0, 1]; // y
    let mut d = 0usize;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > uni_deg_fp(&rest) {
            out.push(rest.clone());
            break;
        }
        h = field.powmod_u64(&h, field.p, &rest);
        let hy = field.sub_poly(&h, &vec![0, 1]);
        let g = field.gcd(&hy, &rest);
        if g.len() > 1 {
            equal_degree_split(field, &g, d, &mut out);
            rest = field.divrem(&rest, &g).0;
            rest = field.monic(&rest);
            h = field.divrem(&h, &rest).1;
        }
    }
    out.sort();
    out
}

fn uni_deg_fp(v: &FpPoly) -> usize {
    v.len() - 1
}

/// Cantor-Zassenhaus equal-degree splitting (odd p), deterministic seed.
fn equal_degree_split(field: Fp, f: &FpPoly, d: usize, out: &mut Vec<FpPoly>) {
    if uni_deg_fp(f) == d {
        out.push(field.monic(f));
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x746b_6100 ^ field.p ^ (d as u64) << 32);
    let exp = (BigUint::from(field.p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: FpPoly = {
            let mut v: FpPoly = (0..uni_deg_fp(f)).map(|_| rng.gen_range(0..field.p)).collect();
            field.trim(&mut v);
            v
        };
        if a.len() <= 1 {
            continue;
        }
        let g1 = field.gcd(&a, f);
        if g1.len() > 1 && g1.len() < f.len() {
            equal_degree_split(field, &g1, d, out);
            let q = field.monic(&field.divrem(f, &g1).0);
            equal_degree_split(field, &q, d, out);
            return;
        }
        let b = field.powmod(&a, &exp, f);
        let b1 = field.sub_poly(&b, &vec![1]);
        let g = field.gcd(&b1, f);
        if g.len() > 1 && g.len() < f.len() {
            equal_degree_split(field, &g, d, out);
            let q = field.monic(&field.divrem(f, &g).0);
            equal_degree_split(field, &q, d, out);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Hensel lifting (quadratic, factor tree)
// ---------------------------------------------------------------------------

struct Lifted {
    factors: Vec<Vec<BigInt>>,
    modulus: BigInt,
}

struct HenselNode {
    poly: Vec<BigInt>,
    // Internal nodes carry children and a Bezout pair s*left + t*right = 1.
    children: Option<(Box<HenselNode>, Box<HenselNode>, Vec<BigInt>, Vec<BigInt>)>,
}

fn build_tree(field: Fp, pieces: &[FpPoly]) -> HenselNode {
    if pieces.len() == 1 {
        return HenselNode {
            poly: pieces[0].iter().map(|&c| BigInt::from(c)).collect(),
            children: None,
        };
    }
    let mid = pieces.len() / 2;
    let left = build_tree(field, &pieces[..mid]);
    let right = build_tree(field, &pieces[mid..]);
    let lp = pieces[..mid]
        .iter()
        .fold(vec![1u64], |acc, q| field.mul_poly(&acc, q));
    let rp = pieces[mid..]
        .iter()
        .fold(vec![1u64], |acc, q| field.mul_poly(&acc, q));
    let (s, t) = field.bezout_coprime(&lp, &rp);
    let to_big = |v: &FpPoly| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
    HenselNode {
        poly: to_big(&field.mul_poly(&lp, &rp)),
        children: Some((Box::new(left), Box::new(right), to_big(&s), to_big(&t))),
    }
}

fn sym_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn sym_mod_poly(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = v.iter().map(|c| sym_mod(c, m)).collect();
    trim(&mut out);
    out
}

/// Division with remainder by a monic polynomial over Z/m (coefficients kept
/// in the symmetric range).
fn divrem_monic_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    debug_assert!(b.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let q = rem.last().unwrap().clone();
        let shift = rem.len() - b.len();
        quot[shift] = q.clone();
        for (j, cb) in b.iter().enumerate() {
            let prod = cb * &q;
            rem[shift + j] = sym_mod(&(&rem[shift + j] - prod), m);
        }
        trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    trim(&mut quot);
    (sym_mod_poly(&quot, m), sym_mod_poly(&rem, m))
}

fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    sym_mod_poly(&uni_mul(a, b), m)
}

fn add_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    sym_mod_poly(&out, m)
}

fn sub_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    sym_mod_poly(&out, m)
}

/// One quadratic Hensel step at a node: given node-level `f == g*h (mod m)`
/// with Bezout `s*g + t*h == 1 (mod m)`, refresh everything mod m^2, then
/// push the lifted child products down the tree.
fn hensel_step_node(node: &mut HenselNode, f: &[BigInt], m: &BigInt) {
    let m2 = m * m;
    node.poly = sym_mod_poly(f, &m2);
    let Some((left, right, s, t)) = node.children.as_mut() else {
        return;
    };
    let g = sym_mod_poly(&left.poly, &m2);
    let h = sym_mod_poly(&right.poly, &m2);
    // h is monic by construction (product of monic modular factors).
    let e = sub_mod(f, &uni_mul(&g, &h), &m2);
    let se = mul_mod(s, &e, &m2);
    let (q, r) = divrem_monic_mod(&se, &h, &m2);
    let g_new = add_mod(&g, &add_mod(&mul_mod(t, &e, &m2), &mul_mod(&q, &g, &m2), &m2), &m2);
    let h_new = add_mod(&h, &r, &m2);

    // Lift the Bezout pair.
    let b = sub_mod(
        &add_mod(&mul_mod(s, &g_new, &m2), &mul_mod(t, &h_new, &m2), &m2),
        &[BigInt::one()],
        &m2,
    );
    let sb = mul_mod(s, &b, &m2);
    let (c, d) = divrem_monic_mod(&sb, &h_new, &m2);
    let s_new = sub_mod(s, &d, &m2);
    let t_new = sub_mod(
        t,
        &add_mod(&mul_mod(t, &b, &m2), &mul_mod(&c, &g_new, &m2), &m2),
        &m2,
    );
    *s = s_new;
    *t = t_new;
    hensel_step_node(left, &g_new, m);
    hensel_step_node(right, &h_new, m);
}

fn collect_leaves(node: &HenselNode, out: &mut Vec<Vec<BigInt>>) {
    match &node.children {
        None => out.push(node.poly.clone()),
        Some((l, r, _, _)) => {
            collect_leaves(l, out);
            collect_leaves(r, out);
        }
    }
}

fn hensel_lift_tree(field: Fp, f: &[BigInt], modular: &[FpPoly], target: &BigInt) -> Lifted {
    let mut tree = build_tree(field, modular);
    let mut m = BigInt::from(field.p);
    while m < *target {
        let f_red = sym_mod_poly(f, &(&m * &m));
        hensel_step_node(&mut tree, &f_red, &m);
        m = &m * &m;
    }
    let mut factors = Vec::new();
    collect_leaves(&tree, &mut factors);
    Lifted {
        factors: factors.into_iter().map(|v| sym_mod_poly(&v, &m)).collect(),
        modulus: m,
    }
}

/// Subset recombination with trial division over Z. `f` monic.
fn recombine(f: &[BigInt], mut pieces: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    'outer: loop {
        let n = pieces.len();
        if n == 0 {
            break;
        }
        let max_size = n / 2;
        for size in 1..=max_size {
            let mut sel: Vec<usize> = (0..size).collect();
            loop {
                let mut prod = vec![BigInt::one()];
                for &i in &sel {
                    prod = mul_mod(&prod, &pieces[i], modulus);
                }
                if let Some(q) = uni_div_exact(&rest, &prod) {
                    out.push(prod);
                    rest = q;
                    for &i in sel.iter().rev() {
                        pieces.remove(i);
                    }
                    continue 'outer;
                }
                if !next_subset(&mut sel, n) {
                    break;
                }
            }
        }
        break;
    }
    if !rest.is_empty() && uni_deg(&rest) > 0 {
        out.push(rest);
    }
    out
}

fn next_subset(sel: &mut [usize], n: usize) -> bool {
    let size = sel.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if sel[i] != i + n - size {
            sel[i] += 1;
            for j in i + 1..size {
                sel[j] = sel[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_poly;

    fn p(s: &str, g: usize) -> LaurentPoly {
        parse_poly(s, g).unwrap()
    }

    #[test]
    fn squarefree_examples() {
        let g = 1;
        let sq = p("t-1", g).mul(&p("t-1", g));
        assert!(squarefree_part(&sq).unwrap().is_associate(&p("t-1", g)));
        assert!(squarefree_part(&p("t-1", g))
            .unwrap()
            .is_associate(&p("t-1", g)));
        let m = p("t-1", g).pow(2).mul(&p("x1+1", g));
        let sf = squarefree_part(&m).unwrap();
        assert!(sf.is_associate(&p("t-1", g).mul(&p("x1+1", g))));
        assert!(squarefree_part(&LaurentPoly::zero(g)).is_err());
    }

    #[test]
    fn factor_univariate_examples() {
        let g = 0;
        let f = factor_univariate(&p("t^2-1", g)).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.product(), p("t^2-1", g));

        let f = factor_univariate(&p("t^2-t+1", g)).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].1, 1);
        assert!(f.factors[0].0.is_associate(&p("t^2-t+1", g)));

        let f = factor_univariate(&p("6*t^2-6", g)).unwrap();
        assert_eq!(f.product(), p("6*t^2-6", g));
        assert_eq!(f.factors.len(), 4); // 2, 3, t-1, t+1
    }

    #[test]
    fn factor_multivariate_examples() {
        let g = 1;
        let a = p("t-1", g).mul(&p("t*x1-1", g));
        let f = factor(&a).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.product(), a);
        for (q, _) in &f.factors {
            assert!(a.divisible_by(q));
        }

        let u = p("t^5*x2^-3", g);
        let f = factor(&u).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.product(), u);

        let a = p("t^2-t+1", g).pow(2).scale(&BigInt::from(3));
        let f = factor(&a).unwrap();
        assert_eq!(f.product(), a);
        assert_eq!(f.multiplicity_of(&p("3", g)), 1);
        assert_eq!(f.multiplicity_of(&p("t^2-t+1", g)), 2);
    }

    #[test]
    fn is_associate_examples() {
        let g = 1;
        assert!(is_associate(&p("t-1", g), &p("t^-1-1", g)));
        assert!(!is_associate(&p("t-1", g), &p("t+1", g)));
        assert!(is_associate(&LaurentPoly::zero(g), &LaurentPoly::zero(g)));
        assert!(!is_associate(&LaurentPoly::zero(g), &p("t", g)));
    }

    #[test]
    fn factor_nonmonic_univariate() {
        let g = 0;
        // 2t+1 times 3t-1, non-trivial leading coefficient handling.
        let a = p("2*t+1", g).mul(&p("3*t-1", g));
        let f = factor(&a).unwrap();
        assert_eq!(f.product(), a);
        assert_eq!(f.factors.len(), 2);
    }

    #[test]
    fn factor_higher_degree() {
        let g = 0;
        // (t^2+t+1)(t^3-t-1), both irreducible.
        let a = p("t^2+t+1", g).mul(&p("t^3-t-1", g));
        let f = factor(&a).unwrap();
        assert_eq!(f.product(), a);
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.multiplicity_of(&p("t^2+t+1", g)), 1);
        assert_eq!(f.multiplicity_of(&p("t^3-t-1", g)), 1);
    }

    #[test]
    fn factor_repeated_and_mixed() {
        let g = 2;
        let a = p("t*x3-x4", g).pow(2).mul(&p("t+x3", g));
        let f = factor(&a).unwrap();
        assert_eq!(f.product(), a);
        assert_eq!(f.multiplicity_of(&p("t*x3-x4", g)), 2);
        assert_eq!(f.multiplicity_of(&p("t+x3", g)), 1);
    }

    #[test]
    fn factor_product_is_multiset_union() {
        let g = 1;
        let a = p("t-1", g).mul(&p("x1+1", g));
        let b = p("t-1", g).mul(&p("t*x2+1", g));
        let fa = factor(&a).unwrap();
        let fb = factor(&b).unwrap();
        let fab = factor(&a.mul(&b)).unwrap();
        for (q, m) in &fab.factors {
            assert_eq!(*m, fa.multiplicity_of(q) + fb.multiplicity_of(q));
        }
    }
}
