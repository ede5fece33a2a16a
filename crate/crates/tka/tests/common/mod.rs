//! Shared helpers for the integration suites: a brute-force divisor-search
//! irreducibility oracle and random generators for based chain complexes.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::rngs::StdRng;
use rand::Rng;

use tka::diagram::AlexMatrix;
use tka::laurent::parse_poly;
use tka::torsion::BasedComplex;
use tka::LaurentPoly;

/// Brute-force irreducibility: search every polynomial supported on the
/// factor's exponent box with coefficients up to a Mignotte-style bound for a
/// proper divisor. Returns `None` when the search space is too large to
/// enumerate; `Some(true)` means no proper divisor exists.
pub fn brute_force_irreducible(f: &LaurentPoly) -> Option<bool> {
    assert!(!f.is_zero());
    let f = f.unit_normal();
    if f.as_unit().is_some() {
        return Some(false); // units are not irreducible
    }
    if let Some(c) = f.as_constant() {
        return Some(is_prime_int(&c));
    }
    let nvars = f.nvars();
    let spans: Vec<i64> = (0..nvars).map(|v| f.span(v)).collect();
    let total_span: i64 = spans.iter().sum();
    // Lattice points of the exponent box.
    let mut points: Vec<Vec<i64>> = vec![vec![]];
    for &s in &spans {
        let mut next = Vec::new();
        for p in &points {
            for e in 0..=s {
                let mut q = p.clone();
                q.push(e);
                next.push(q);
            }
        }
        points = next;
    }
    let height = f
        .terms()
        .map(|(_, c)| c.abs())
        .max()
        .unwrap_or_else(|| BigInt::from(0));
    let bound: i64 = (BigInt::from(2).pow(total_span as u32) * height)
        .to_i64()
        .unwrap_or(i64::MAX);
    let k = points.len() as u32;
    let radix = (2 * bound + 1) as f64;
    if radix.powi(k as i32) > 2.0e5 {
        return None;
    }
    // Odometer over all coefficient assignments.
    let mut coeffs = vec![-bound; k as usize];
    loop {
        if let Some(cand) = build_candidate(&f, &points, &coeffs) {
            if let Some(q) = f.div_exact(&cand) {
                if cand.as_unit().is_none() && q.as_unit().is_none() {
                    return Some(false);
                }
            }
        }
        // Advance.
        let mut i = 0usize;
        loop {
            if i == coeffs.len() {
                return Some(true);
            }
            if coeffs[i] < bound {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

fn build_candidate(
    f: &LaurentPoly,
    points: &[Vec<i64>],
    coeffs: &[i64],
) -> Option<LaurentPoly> {
    if coeffs.iter().all(|&c| c == 0) {
        return None;
    }
    let genus = f.genus();
    let mut acc = LaurentPoly::zero(genus);
    for (p, &c) in points.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let mut mono = LaurentPoly::constant(genus, BigInt::from(c));
        if p[0] != 0 {
            mono = mono.mul(&monomial_pow(genus, 0, p[0]));
        }
        for (v, &e) in p.iter().enumerate().skip(1) {
            if e != 0 {
                mono = mono.mul(&monomial_pow(genus, v, e));
            }
        }
        acc = acc.add(&mono);
    }
    Some(acc)
}

fn monomial_pow(genus: usize, var: usize, e: i64) -> LaurentPoly {
    let base = if var == 0 {
        "t".to_string()
    } else {
        format!("x{}", var)
    };
    parse_poly(&format!("{}^{}", base, e), genus).unwrap()
}

pub fn is_prime_int(n: &BigInt) -> bool {
    let n = n.abs().to_i64().expect("small integer");
    if n < 2 {
        return false;
    }
    let mut d = 2i64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// Random based complexes for the torsion suites
// ---------------------------------------------------------------------------

/// Random three-degree acyclic complex with polynomial boundaries: a diagonal
/// base twisted by unimodular coherent moves.
pub fn random_acyclic(rng: &mut StdRng, genus: usize) -> BasedComplex {
    let b2 = rng.gen_range(0..=2usize);
    let b1 = rng.gen_range(0..=2usize);
    let dims = [b2, b2 + b1, b1]; // C2, C1, C0
    let pool = ["1", "t-1", "x1+1", "t", "t+x1", "2"];
    let pick =
        |rng: &mut StdRng| parse_poly(pool[rng.gen_range(0..pool.len())], genus).unwrap();
    let mut d2 = vec![vec![LaurentPoly::zero(genus); dims[0]]; dims[1]];
    for (j, row) in d2.iter_mut().enumerate().take(b2) {
        row[j] = pick(rng);
    }
    let mut d1 = vec![vec![LaurentPoly::zero(genus); dims[1]]; dims[2]];
    for (i, row) in d1.iter_mut().enumerate().take(b1) {
        row[b2 + i] = pick(rng);
    }
    let mut d2 = AlexMatrix {
        genus,
        rows: dims[1],
        cols: dims[0],
        entries: d2,
    };
    let mut d1 = AlexMatrix {
        genus,
        rows: dims[2],
        cols: dims[1],
        entries: d1,
    };
    // Coherent move: a column operation on ∂1 paired with the inverse row
    // operation on ∂2 keeps the composite zero.
    for _ in 0..8 {
        if dims[1] < 2 {
            break;
        }
        let a = rng.gen_range(0..dims[1]);
        let b = rng.gen_range(0..dims[1]);
        if a == b {
            continue;
        }
        let lam = pick(rng);
        for i in 0..dims[2] {
            let add = d1.entries[i][b].mul(&lam);
            d1.entries[i][a] = d1.entries[i][a].add(&add);
        }
        for j in 0..dims[0] {
            let sub = d2.entries[a][j].mul(&lam);
            d2.entries[b][j] = d2.entries[b][j].sub(&sub);
        }
    }
    BasedComplex::new(genus, vec![dims[0], dims[1], dims[2]], vec![d2, d1]).unwrap()
}

/// Random degreewise twisting matrices for `twisted_sum`.
pub fn random_twist(
    rng: &mut StdRng,
    sub: &BasedComplex,
    quotient: &BasedComplex,
) -> Vec<AlexMatrix> {
    let genus = sub.genus;
    let pool = ["0", "1", "t", "x1-1", "t+1"];
    (0..=sub.top_degree())
        .map(|k| {
            let (r, c) = (sub.ranks[k], quotient.ranks[k]);
            let entries: Vec<Vec<LaurentPoly>> = (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| parse_poly(pool[rng.gen_range(0..pool.len())], genus).unwrap())
                        .collect()
                })
                .collect();
            AlexMatrix {
                genus,
                rows: r,
                cols: c,
                entries,
            }
        })
        .collect()
}

/// A random unit monomial ± t^a x1^b ... as a polynomial.
pub fn random_unit(rng: &mut StdRng, genus: usize) -> LaurentPoly {
    let sign = if rng.gen_bool(0.5) { "-" } else { "" };
    let mut s = format!("{}t^{}", sign, rng.gen_range(-2i32..=2));
    for v in 1..=2 * genus {
        let e = rng.gen_range(-2i32..=2);
        if e != 0 {
            s.push_str(&format!("*x{}^{}", v, e));
        }
    }
    parse_poly(&s, genus).unwrap()
}
