//! The Fox–Milnor concordance obstruction: decide whether
//! Δ₀ ≐ α·ᾱ·Δ₁ for some nonzero α in the fraction field.
//!
//! Writing α·ᾱ = ∏ π^{m_π} ∏ π̄^{m_π} over irreducible classes, the relation
//! holds iff for every class the net exponent n_π = mult(Δ₀) − mult(Δ₁)
//! matches n_{π̄}, and every self-conjugate class has even net exponent.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::alexander::alexander_poly;
use crate::diagram::{DiagramError, MarkedDiagram};
use crate::factorize::{factor, poly_cmp};
use crate::laurent::LaurentPoly;

/// Why a pair fails the obstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailReason {
    /// A self-conjugate irreducible class carries an odd net exponent.
    OddSelfConjugate,
    /// A non-self-conjugate class and its conjugate have different net exponents.
    ConjugateMismatch,
    /// The t = −1, x = 1 square pretest fails (reported by the CLI layer).
    SquareTest,
    /// Exactly one of the two polynomials is zero.
    ZeroMismatch,
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FailReason::OddSelfConjugate => "odd-self-conjugate",
            FailReason::ConjugateMismatch => "conjugate-mismatch",
            FailReason::SquareTest => "square-test",
            FailReason::ZeroMismatch => "zero-mismatch",
        };
        f.write_str(s)
    }
}

/// A checkable witness of failure: an offending irreducible class with its
/// net exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub factor: LaurentPoly,
    pub net_exponent: i64,
    pub reason: FailReason,
}

/// Verdict status; `Vacuous` is the both-zero pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FMStatus {
    Pass,
    Fail,
    Vacuous,
}

/// Outcome of the obstruction check. A `Pass` carries a witness (p, q) with
/// α = p/q whose defining identity Δ₀·q·q̄ ≐ Δ₁·p·p̄ has been re-verified by
/// exact multiplication; a `Fail` carries a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FMVerdict {
    pub status: FMStatus,
    pub witness: Option<(LaurentPoly, LaurentPoly)>,
    pub certificate: Option<Certificate>,
}

impl FMVerdict {
    pub fn passes(&self) -> bool {
        matches!(self.status, FMStatus::Pass | FMStatus::Vacuous)
    }
}

/// Necessary condition from evaluating the relation at the conjugation-fixed
/// point t = −1, x = 1: there α·ᾱ becomes a rational square and units become
/// ±1, so |Δ₀·Δ₁| at that point must be a perfect square. Returns true on
/// pass. Both inputs must be nonzero.
pub fn square_pretest(d0: &LaurentPoly, d1: &LaurentPoly) -> bool {
    assert!(
        !d0.is_zero() && !d1.is_zero(),
        "square_pretest needs nonzero inputs"
    );
    let v0 = eval_minus_one(d0);
    let v1 = eval_minus_one(d1);
    let prod = (v0 * v1).abs();
    let sqrt = prod.sqrt();
    &sqrt * &sqrt == prod
}

/// Value at t = −1, all x_l = 1; integral because the coefficients are.
fn eval_minus_one(p: &LaurentPoly) -> BigInt {
    let minus_one = BigRational::from(BigInt::from(-1));
    let ones = vec![BigRational::one(); 2 * p.genus()];
    let v = p
        .evaluate(&minus_one, &ones)
        .expect("evaluation at units is defined");
    debug_assert!(v.is_integer());
    v.to_integer()
}

/// Net exponents n_π = mult(Δ₀) − mult(Δ₁) per irreducible associate class,
/// zeros omitted, in canonical factor order. Inputs must be nonzero.
pub fn net_exponents(d0: &LaurentPoly, d1: &LaurentPoly) -> Vec<(LaurentPoly, i64)> {
    assert!(
        !d0.is_zero() && !d1.is_zero(),
        "net_exponents needs nonzero inputs"
    );
    let f0 = factor(d0).expect("nonzero");
    let f1 = factor(d1).expect("nonzero");
    let mut classes: Vec<(LaurentPoly, i64)> = Vec::new();
    for (p, m) in &f0.factors {
        bump(&mut classes, p, *m as i64);
    }
    for (p, m) in &f1.factors {
        bump(&mut classes, p, -(*m as i64));
    }
    classes.retain(|(_, n)| *n != 0);
    classes.sort_by(|(a, _), (b, _)| poly_cmp(a, b));
    classes
}

fn bump(classes: &mut Vec<(LaurentPoly, i64)>, p: &LaurentPoly, delta: i64) {
    if let Some(entry) = classes.iter_mut().find(|(q, _)| q.is_associate(p)) {
        entry.1 += delta;
    } else {
        classes.push((p.unit_normal(), delta));
    }
}

/// Decide the obstruction for a pair of Alexander polynomials.
pub fn fm_check(d0: &LaurentPoly, d1: &LaurentPoly) -> FMVerdict {
    let genus = d0.genus();
    assert_eq!(genus, d1.genus(), "context mismatch");
    // α is an inverse torsion, hence nonzero: zero on one side forces zero on
    // the other.
    match (d0.is_zero(), d1.is_zero()) {
        (true, true) => {
            return FMVerdict {
                status: FMStatus::Vacuous,
                witness: Some((LaurentPoly::one(genus), LaurentPoly::one(genus))),
                certificate: None,
            };
        }
        (true, false) | (false, true) => {
            let nonzero = if d0.is_zero() { d1 } else { d0 };
            return FMVerdict {
                status: FMStatus::Fail,
                witness: None,
                certificate: Some(Certificate {
                    factor: nonzero.unit_normal(),
                    net_exponent: 0,
                    reason: FailReason::ZeroMismatch,
                }),
            };
        }
        (false, false) => {}
    }

    let classes = net_exponents(d0, d1);
    let mut p = LaurentPoly::one(genus);
    let mut q = LaurentPoly::one(genus);
    let mut visited: Vec<usize> = Vec::new();
    for (i, (pi, n)) in classes.iter().enumerate() {
        if visited.contains(&i) {
            continue;
        }
        let bar = pi.conj().unit_normal();
        if pi.is_associate(&bar) {
            if n % 2 != 0 {
                return fail(pi, *n, FailReason::OddSelfConjugate);
            }
            mul_power(&mut p, &mut q, pi, n / 2);
        } else {
            let partner = classes
                .iter()
                .position(|(rho, _)| rho.is_associate(&bar));
            let n_bar = match partner {
                Some(j) => {
                    visited.push(j);
                    classes[j].1
                }
                None => 0,
            };
            if *n != n_bar {
                return fail(pi, *n, FailReason::ConjugateMismatch);
            }
            // α picks up π^n; ᾱ then supplies π̄^n automatically.
            mul_power(&mut p, &mut q, pi, *n);
        }
    }

    // Soundness gate: re-verify Δ₀·q·q̄ ≐ Δ₁·p·p̄ by exact multiplication.
    let lhs = d0.mul(&q).mul(&q.conj());
    let rhs = d1.mul(&p).mul(&p.conj());
    assert!(
        lhs.is_associate(&rhs),
        "internal error: witness fails its defining identity"
    );
    FMVerdict {
        status: FMStatus::Pass,
        witness: Some((p, q)),
        certificate: None,
    }
}

fn fail(pi: &LaurentPoly, n: i64, reason: FailReason) -> FMVerdict {
    FMVerdict {
        status: FMStatus::Fail,
        witness: None,
        certificate: Some(Certificate {
            factor: pi.clone(),
            net_exponent: n,
            reason,
        }),
    }
}

fn mul_power(p: &mut LaurentPoly, q: &mut LaurentPoly, pi: &LaurentPoly, n: i64) {
    let e = n.unsigned_abs().to_u32().expect("tiny exponent");
    if n > 0 {
        *p = p.mul(&pi.pow(e));
    } else if n < 0 {
        *q = q.mul(&pi.pow(e));
    }
}

/// End-to-end check on two diagrams: validate, require equal genus (a
/// concordance lives in a fixed Σ × I × I), compute both Alexander
/// polynomials, and decide.
pub fn fm_check_diagrams(
    da: &MarkedDiagram,
    db: &MarkedDiagram,
) -> Result<FMVerdict, DiagramError> {
    if da.genus != db.genus {
        return Err(DiagramError {
            line: None,
            msg: format!(
                "genus mismatch: {} vs {} (concordance fixes the surface)",
                da.genus, db.genus
            ),
        });
    }
    let d0 = alexander_poly(da)?;
    let d1 = alexander_poly(db)?;
    Ok(fm_check(&d0, &d1))
}
