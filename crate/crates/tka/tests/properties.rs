//! Property-based invariants: ring axioms, the bar involution, gcd contracts,
//! evaluation as a ring homomorphism, and the Fox calculus identities.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use tka::fox::{apply_phi, fox_derivative, phi_word, Generator, PhiAssignment, Word};
use tka::laurent::ExponentVector;
use tka::LaurentPoly;

const GENUS: usize = 1;

/// Random Laurent polynomial in t, x1, x2 with small support.
fn poly_strategy() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(
        ((-2i64..=2), (-2i64..=2), (-2i64..=2), (-3i64..=3)),
        0..=4,
    )
    .prop_map(|terms| {
        LaurentPoly::from_terms(
            GENUS,
            terms.into_iter().map(|(a, b, c, coeff)| {
                (
                    ExponentVector {
                        t_exp: a,
                        x_exps: vec![b, c],
                    },
                    BigInt::from(coeff),
                )
            }),
        )
    })
}

fn word_strategy() -> impl Strategy<Value = Word> {
    prop::collection::vec(((0usize..5), prop::bool::ANY), 0..=6).prop_map(|letters| {
        let mut w = Word::identity();
        for (g, inv) in letters {
            let gen = match g {
                0 => Generator::Arc(1),
                1 => Generator::Arc(2),
                2 => Generator::Arc(3),
                3 => Generator::Surface(1),
                _ => Generator::Surface(2),
            };
            w = w.concat(&Word::gen(gen, if inv { -1 } else { 1 }));
        }
        w
    })
}

fn all_generators() -> Vec<Generator> {
    vec![
        Generator::Arc(1),
        Generator::Arc(2),
        Generator::Arc(3),
        Generator::Surface(1),
        Generator::Surface(2),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.mul(&LaurentPoly::one(GENUS)), a.clone());
    }

    #[test]
    fn conj_is_a_ring_involution(a in poly_strategy(), b in poly_strategy()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        prop_assert_eq!(a.add(&b).conj(), a.conj().add(&b.conj()));
    }

    #[test]
    fn gcd_divides_and_is_symmetric(a in poly_strategy(), b in poly_strategy()) {
        if !a.is_zero() || !b.is_zero() {
            let g = a.gcd(&b);
            prop_assert!(!g.is_zero());
            if !a.is_zero() {
                prop_assert!(a.div_exact(&g).is_some());
            }
            if !b.is_zero() {
                prop_assert!(b.div_exact(&g).is_some());
            }
            prop_assert!(g.is_associate(&b.gcd(&a)) || g == b.gcd(&a));
        }
    }

    #[test]
    fn gcd_respects_common_factors(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        // gcd(ac, bc) is divisible by c whenever the inputs are nonzero.
        if !a.is_zero() && !b.is_zero() && !c.is_zero() {
            let g = a.mul(&c).gcd(&b.mul(&c));
            prop_assert!(g.div_exact(&c).is_some());
        }
    }

    #[test]
    fn evaluation_is_a_ring_hom(a in poly_strategy(), b in poly_strategy()) {
        let t = BigRational::new(BigInt::from(2), BigInt::from(3));
        let xs = vec![
            BigRational::from(BigInt::from(-1)),
            BigRational::new(BigInt::from(3), BigInt::from(2)),
        ];
        let ea = a.evaluate(&t, &xs).unwrap();
        let eb = b.evaluate(&t, &xs).unwrap();
        prop_assert_eq!(a.mul(&b).evaluate(&t, &xs).unwrap(), &ea * &eb);
        prop_assert_eq!(a.add(&b).evaluate(&t, &xs).unwrap(), &ea + &eb);
    }

    #[test]
    fn fox_product_rule(u in word_strategy(), v in word_strategy()) {
        // ∂(uv) = ∂u + u·∂v, checked under φ.
        let phi = PhiAssignment::new(GENUS);
        for g in all_generators() {
            let lhs = apply_phi(&fox_derivative(&u.concat(&v), g), &phi);
            let rhs = apply_phi(&fox_derivative(&u, g), &phi)
                .add(&phi_word(&u, &phi).mul(&apply_phi(&fox_derivative(&v, g), &phi)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn fox_fundamental_identity(w in word_strategy()) {
        // Σ_g (∂w/∂g)^φ (φ(g) − 1) = φ(w) − 1.
        let phi = PhiAssignment::new(GENUS);
        let mut sum = LaurentPoly::zero(GENUS);
        for g in all_generators() {
            let dg = apply_phi(&fox_derivative(&w, g), &phi);
            let m = phi.of_generator(g, 1).to_poly();
            sum = sum.add(&dg.mul(&m.sub(&LaurentPoly::one(GENUS))));
        }
        let expected = phi_word(&w, &phi).sub(&LaurentPoly::one(GENUS));
        prop_assert_eq!(sum, expected);
    }

    #[test]
    fn unit_normal_is_canonical(a in poly_strategy(), t_shift in -2i64..=2, sign in prop::bool::ANY) {
        if !a.is_zero() {
            // Associates share a unit normal form.
            let u = LaurentPoly::from_terms(
                GENUS,
                [(
                    ExponentVector { t_exp: t_shift, x_exps: vec![0, 0] },
                    BigInt::from(if sign { 1 } else { -1 }),
                )],
            );
            let b = a.mul(&u);
            prop_assert_eq!(a.unit_normal(), b.unit_normal());
            prop_assert!(a.is_associate(&b));
        }
    }
}
