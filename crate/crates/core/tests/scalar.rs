use num_rational::{BigRational, Rational64};
use tqmedium::scalar::rational_approx;
use tqmedium::Coefficient;

#[test]
fn rational_approx_recovers_small_fractions() {
    assert_eq!(rational_approx(0.75, 1000), Some((3, 4)));
    assert_eq!(rational_approx(-2.0 / 7.0, 1000), Some((-2, 7)));
    assert_eq!(rational_approx(5.0, 10), Some((5, 1)));
}

#[test]
fn exact_strings_round_trip() {
    let x = BigRational::from_ratio(-6, 4);
    assert_eq!(x.to_exact_string(), "-3/2");
    assert_eq!(BigRational::parse_exact("-3/2"), Some(x));
    assert_eq!(BigRational::parse_exact("7"), Some(BigRational::from_ratio(7, 1)));
    assert_eq!(BigRational::parse_exact("1/0"), None);
    assert_eq!(Rational64::parse_exact("2/6"), Some(Rational64::new(1, 3)));
}
