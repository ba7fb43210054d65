use num_complex::Complex64;
use num_rational::BigRational;
use std::f64::consts::PI;
use proptest::prelude::*;
use tqmedium::cyclo::{cyclotomic_polynomial, euler_phi, Cyclo};
use tqmedium::Error;

type C = Cyclo<BigRational>;

fn golden() -> C {
    C::root_of_unity(20, 2) + C::root_of_unity(20, -2)
}

#[test]
fn cyclotomic_polynomials_match_known_values() {
    assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
    assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
    assert_eq!(*cyclotomic_polynomial(20), vec![1, 0, -1, 0, 1, 0, -1, 0, 1]);
    assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
}

#[test]
fn roots_of_unity() {
    assert!(C::root_of_unity(20, 0).is_one());
    assert_eq!(C::root_of_unity(20, 10), C::from_int(20, -1));
    let z = C::root_of_unity(20, 2).embed();
    assert!((z - Complex64::from_polar(1.0, PI / 5.0)).norm() < 1e-14);
    assert!(C::root_of_unity(20, 7) * C::root_of_unity(20, 13) == C::one(20));
}

#[test]
fn golden_ratio_identities() {
    let d = golden();
    assert_eq!(&d * &d, &d + &C::one(20));
    assert_eq!(d.inverse().unwrap(), &d - &C::one(20));
    let (c, z) = d.conjugate_embed();
    assert_eq!(c, d);
    assert!((z.re - 1.618_033_988_749_895).abs() < 1e-12 && z.im.abs() < 1e-12);
}

#[test]
fn inverse_of_zero_fails_and_zeta_inverts_to_its_conjugate() {
    assert_eq!(C::zero(20).inverse(), Err(Error::ZeroInverse));
    assert_eq!(C::root_of_unity(20, 1).inverse().unwrap(), C::root_of_unity(20, 19));
    assert!(C::one(20).inverse().unwrap().is_one());
}

#[test]
fn mixed_orders_coerce_to_lcm() {
    let a = C::root_of_unity(4, 1);
    let b = C::root_of_unity(5, 1);
    let p = &a * &b;
    assert_eq!(p.order(), 20);
    assert_eq!(p, C::root_of_unity(20, 5 + 4));
}

#[test]
fn exact_sqrt_finds_field_roots() {
    let d = golden();
    let d2 = &d * &d;
    assert_eq!(d2.exact_sqrt(1), Some(d.clone()));
    let i = C::root_of_unity(20, 5);
    let minus_one = C::from_int(20, -1);
    assert_eq!(minus_one.exact_sqrt(1), Some(i));
    assert_eq!(d.exact_sqrt(1), None);
}

#[test]
fn serde_round_trip() {
    let d = golden();
    let s = serde_json::to_string(&d).unwrap();
    assert!(s.contains("\"order\":20"));
    let back: C = serde_json::from_str(&s).unwrap();
    assert_eq!(back, d);
}

fn poly_from_roots(n: u32) -> Vec<i64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for k in (1..=n).filter(|k| num_integer::Integer::gcd(k, &n) == 1) {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * z;
        }
        p = next;
    }
    p.iter().map(|c| c.re.round() as i64).collect()
}

#[test]
fn cyclotomic_polynomials_match_root_products() {
    for n in 1..=60 {
        assert_eq!(*cyclotomic_polynomial(n), poly_from_roots(n), "n = {n}");
        assert_eq!(cyclotomic_polynomial(n).len() - 1, euler_phi(n));
    }
}

fn element(order: u32) -> impl Strategy<Value = C> {
    prop::collection::vec((0..order as i64, -6i64..=6, 1i64..=4), 0..6).prop_map(move |terms| {
        C::from_terms(
            order,
            terms
                .into_iter()
                .map(|(k, p, q)| (k, BigRational::new(p.into(), q.into()))),
        )
    })
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #[test]
    fn field_axioms(a in element(20), b in element(20), c in element(20)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, C::zero(20));
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn embedding_is_a_homomorphism(a in element(20), b in element(20)) {
        prop_assert!(close((&a + &b).embed(), a.embed() + b.embed()));
        prop_assert!(close((&a * &b).embed(), a.embed() * b.embed()));
        prop_assert!(close(a.conj().embed(), a.embed().conj()));
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in element(12), b in element(12)) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn roots_of_unity_have_unit_modulus(n in 1u32..80, k in -200i64..200) {
        let z = C::root_of_unity(n, k);
        prop_assert!((z.embed().norm() - 1.0).abs() < 1e-12);
        prop_assert!(close(z.embed(), Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)));
        prop_assert_eq!(z.coeffs().len(), euler_phi(n));
    }
}
