use tqmedium::linalg::Matrix;
use tqmedium::CycloNum;

#[test]
fn rank_and_nullspace_over_cyclotomics() {
    let z = CycloNum::root_of_unity(5, 1);
    let one = CycloNum::one(5);
    let m = Matrix::from_fn(2, 3, |i, j| match (i, j) {
        (0, 0) => one.clone(),
        (0, 1) => z.clone(),
        (0, 2) => CycloNum::zero(5),
        (1, 0) => z.clone(),
        (1, 1) => &z * &z,
        _ => CycloNum::zero(5),
    });
    assert_eq!(m.rank(), 1);
    let ns = m.nullspace();
    assert_eq!(ns.len(), 2);
    for v in ns {
        let col = Matrix::from_fn(3, 1, |i, _| v[i].clone());
        assert!(m.mul(&col).is_zero());
    }
}
