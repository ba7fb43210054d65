//! Small dense matrices over exact fields, with rank and nullspace by Gaussian elimination.

use crate::cyclo::Cyclo;
use crate::scalar::Coefficient;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::fmt;

/// Field operations needed by [`Matrix`].
pub trait FieldElem: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn embed(&self) -> Complex64;
}

impl<T: Coefficient> FieldElem for Cyclo<T> {
    fn zero_like(&self) -> Self {
        Cyclo::zero(self.order())
    }
    fn one_like(&self) -> Self {
        Cyclo::one(self.order())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Cyclo::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }
    fn embed(&self) -> Complex64 {
        Cyclo::embed(self)
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: FieldElem> Matrix<S> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: S) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn identity(n: usize, proto: &S) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { proto.one_like() } else { proto.zero_like() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let zero = self.data.first().or(other.data.first()).map(|x| x.zero_like());
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = zero.clone().expect("nonempty matrix");
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(c))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn embed(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).embed())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Rank over the field.
    pub fn rank(&self) -> usize {
        row_echelon(self.clone()).1.len()
    }

    /// Basis of {x : self · x = 0}.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let Some(proto) = self.data.first() else {
            return Vec::new();
        };
        let (rref, pivots) = row_echelon(self.clone());
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![proto.zero_like(); self.cols];
            v[free] = proto.one_like();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = rref.get(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }
}

/// Reduced row echelon form and pivot columns.
fn row_echelon<S: FieldElem>(mut m: Matrix<S>) -> (Matrix<S>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, row * m.cols + j);
            }
        }
        let inv = m.get(row, col).inv().expect("nonzero pivot");
        for j in 0..m.cols {
            let v = m.get(row, j).mul(&inv);
            m.set(row, j, v);
        }
        for r in 0..m.rows {
            if r == row || m.get(r, col).is_zero() {
                continue;
            }
            let f = m.get(r, col).clone();
            for j in 0..m.cols {
                let v = m.get(r, j).sub(&f.mul(m.get(row, j)));
                m.set(r, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

impl<S: FieldElem + fmt::Display> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}; ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<S: FieldElem + Serialize> Serialize for Matrix<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        let grid: Vec<&[S]> = (0..self.rows).map(|i| self.row(i)).collect();
        grid.serialize(s)
    }
}
