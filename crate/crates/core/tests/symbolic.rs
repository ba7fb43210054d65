use num_rational::BigRational;
use proptest::prelude::*;
use tqmedium::skein::{jones_wenzl, AConvention, PlanarDiagram};
use tqmedium::symbolic::{delta_polys, jones_wenzl_in_d, render_jones_wenzl, tl_words, Poly, RatFn};
use tqmedium::Level;

#[test]
fn low_projectors_render_in_d() {
    assert_eq!(render_jones_wenzl(1).unwrap(), "id");
    assert_eq!(render_jones_wenzl(2).unwrap(), "id − (1/d) e1");
    assert_eq!(
        render_jones_wenzl(3).unwrap(),
        "id − (d/(d² − 1)) e1 − (d/(d² − 1)) e2 + (1/(d² − 1)) e1e2 + (1/(d² − 1)) e2e1"
    );
}

#[test]
fn words_reach_every_diagram() {
    for k in 0..=6 {
        assert_eq!(tl_words(k).len(), PlanarDiagram::enumerate(k, k).len());
    }
    let w = tl_words(3);
    assert_eq!(w[&PlanarDiagram::cup_cap(3, 2).unwrap()], vec![2]);
}

#[test]
fn symbolic_projector_specializes_to_the_exact_one() {
    for (r, conv) in [(5, AConvention::PositiveD), (5, AConvention::Example), (7, AConvention::PositiveD)] {
        let k = Level::new(r, conv).unwrap();
        for n in 1..=4 {
            let exact = jones_wenzl(n, &k).unwrap();
            let sym = jones_wenzl_in_d(n).unwrap();
            assert_eq!(sym.len(), exact.len());
            for (d, c) in &sym {
                assert_eq!(c.eval(&k.d).unwrap(), exact.coeff(d), "r = {r}, n = {n}");
            }
        }
    }
}

#[test]
fn delta_polynomials() {
    let d = delta_polys(4);
    assert_eq!(d[2].to_string(), "d² − 1");
    assert_eq!(d[3].to_string(), "d³ − 2d");
    assert_eq!(d[4].to_string(), "d⁴ − 3d² + 1");
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-5i64..=5, 0..5)
        .prop_map(|c| Poly::new(c.into_iter().map(|x| BigRational::from_integer(x.into())).collect()))
}

proptest! {
    #[test]
    fn gcd_divides_both(a in poly(), b in poly(), c in poly()) {
        let (x, y) = (a.mul(&c), b.mul(&c));
        let g = x.gcd(&y);
        if !g.is_zero() {
            prop_assert!(x.div_rem(&g).unwrap().1.is_zero());
            prop_assert!(y.div_rem(&g).unwrap().1.is_zero());
            if !c.is_zero() {
                prop_assert!(g.div_rem(&c.monic()).unwrap().1.is_zero());
            }
        }
    }

    #[test]
    fn fractions_reduce_consistently(a in poly(), b in poly(), c in poly()) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let f = RatFn::new(a.mul(&c), b.mul(&c)).unwrap();
        prop_assert_eq!(f, RatFn::new(a, b).unwrap());
    }
}
