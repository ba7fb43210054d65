use num_complex::Complex64;
use tqmedium::linalg::FieldElem;
use tqmedium::quad::{Quad, QuadField};
use tqmedium::CycloNum;

#[test]
fn root_squares_to_discriminant_and_inverts() {
    let d = CycloNum::root_of_unity(20, 2) + CycloNum::root_of_unity(20, -2);
    let field = QuadField::new(d.clone(), 1).unwrap();
    assert!(!field.is_degenerate());
    let s = Quad::root(&field);
    assert_eq!(s.mul(&s), Quad::from_base(d.clone(), &field));
    let x = s.add(&Quad::from_base(CycloNum::from_int(20, 3), &field));
    assert!(x.mul(&x.inv().unwrap()).sub(&x.one_like()).is_zero());
    assert!((s.embed().re - d.embed().re.sqrt()).abs() < 1e-12);
    assert_eq!(s.conj(), s);
}

#[test]
fn negative_discriminant_conjugates_root_to_minus_root() {
    let field = QuadField::new(CycloNum::from_int(20, -3), 1).unwrap();
    let s = Quad::root(&field);
    assert_eq!(s.conj(), s.neg());
    assert!((s.embed() - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-12);
}

#[test]
fn square_discriminant_folds() {
    let field = QuadField::new(CycloNum::from_int(20, 4), 1).unwrap();
    assert!(field.is_degenerate());
    assert_eq!(Quad::root(&field), Quad::from_base(CycloNum::from_int(20, 2), &field));
}
