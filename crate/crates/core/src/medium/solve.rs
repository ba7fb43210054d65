use super::{Relation, SparseHamiltonian};
use crate::error::{Error, Result};
use crate::CycloNum;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const DENSE_LIMIT: usize = 1200;
const FILTER_DEGREE: usize = 24;
const MAX_ROUNDS: usize = 4000;

/// Orthonormal basis of the numerical kernel.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GroundSpace {
    pub dimension: usize,
    /// Columns span the kernel.
    #[serde(skip)]
    pub vectors: DMatrix<Complex64>,
    /// Largest ‖H v‖ over the returned vectors.
    pub residual: f64,
    /// Lowest eigenvalue above the kernel, when one was resolved.
    pub gap: Option<f64>,
    pub method: &'static str,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralProbe {
    pub eigenvalues: Vec<f64>,
    pub kernel_dimension: usize,
    pub gap: Option<f64>,
    pub max_residual: f64,
}

fn kernel_cut(tol: f64) -> f64 {
    (tol * 1e3).max(1e-9)
}

fn sorted_eigen(m: DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Lowest eigenpairs of a dense Hermitian matrix in ascending order.
pub fn dense_spectrum(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    sorted_eigen(m.clone())
}

fn orthonormalize(x: DMatrix<Complex64>) -> DMatrix<Complex64> {
    x.qr().q()
}

fn residuals(h: &SparseHamiltonian, vals: &[f64], x: &DMatrix<Complex64>) -> Vec<f64> {
    let hx = h.apply(x);
    (0..x.ncols())
        .map(|c| (hx.column(c) - x.column(c) * Complex64::new(vals[c], 0.0)).norm())
        .collect()
}

fn chebyshev(h: &SparseHamiltonian, x: &DMatrix<Complex64>, lo: f64, hi: f64) -> DMatrix<Complex64> {
    let e = Complex64::new((hi - lo) / 2.0, 0.0);
    let c = Complex64::new((hi + lo) / 2.0, 0.0);
    let step = |y: &DMatrix<Complex64>| (h.apply(y) - y * c).map(|z| z / e);
    let mut prev = x.clone();
    let mut cur = step(x);
    for _ in 1..FILTER_DEGREE {
        let next = step(&cur) * Complex64::new(2.0, 0.0) - &prev;
        prev = cur;
        cur = next;
        let scale = cur.norm();
        if scale > 1e100 {
            prev /= Complex64::new(scale, 0.0);
            cur /= Complex64::new(scale, 0.0);
        }
    }
    cur
}

/// The `k` lowest eigenpairs of a sparse positive semidefinite operator by Chebyshev-filtered
/// subspace iteration, converged to residual `tol`.
fn lowest_iterative(h: &SparseHamiltonian, k: usize, tol: f64) -> Result<(Vec<f64>, DMatrix<Complex64>, Vec<f64>)> {
    let n = h.dim;
    let b = (k + 8).min(n);
    let hi = h.norm_bound() * 1.01 + 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x = orthonormalize(DMatrix::from_fn(n, b, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    }));
    for _ in 0..MAX_ROUNDS {
        let hx = h.apply(&x);
        let (vals, u) = sorted_eigen(x.adjoint() * &hx);
        x = &x * u;
        let res = residuals(h, &vals, &x);
        if res[..k].iter().all(|&r| r < tol) {
            return Ok((vals[..k].to_vec(), x.columns(0, k).into_owned(), res[..k].to_vec()));
        }
        let lo = vals[b - 1].max(vals[k.min(b - 1)]);
        x = orthonormalize(chebyshev(h, &x, lo, hi));
    }
    Err(Error::Solver(format!("subspace iteration did not converge for {k} eigenpairs")))
}

fn lowest(h: &SparseHamiltonian, k: usize, tol: f64) -> Result<(Vec<f64>, DMatrix<Complex64>, &'static str)> {
    let k = k.min(h.dim);
    if k == 0 {
        return Ok((Vec::new(), DMatrix::zeros(h.dim, 0), "empty"));
    }
    if h.dim <= DENSE_LIMIT {
        let (vals, vecs) = sorted_eigen(h.to_dense());
        return Ok((vals[..k].to_vec(), vecs.columns(0, k).into_owned(), "dense"));
    }
    let (vals, vecs, _) = lowest_iterative(h, k, tol)?;
    Ok((vals, vecs, "chebyshev"))
}

/// Orthonormal basis of {v : H v = 0} up to `tol`.
pub fn ground_space(h: &SparseHamiltonian, tol: f64) -> Result<GroundSpace> {
    let cut = kernel_cut(tol);
    let mut k = 4;
    loop {
        let (vals, vecs, method) = lowest(h, k.min(h.dim), tol)?;
        let dim = vals.iter().filter(|&&v| v < cut).count();
        if dim < vals.len() || vals.len() == h.dim {
            let v = vecs.columns(0, dim).into_owned();
            let res = if dim == 0 {
                0.0
            } else {
                let hv = h.apply(&v);
                (0..dim).map(|c| hv.column(c).norm()).fold(0.0, f64::max)
            };
            return Ok(GroundSpace {
                dimension: dim,
                vectors: v,
                residual: res,
                gap: vals.get(dim).copied(),
                method,
            });
        }
        k *= 2;
    }
}

/// The `k` lowest eigenvalues with a kernel count and the first eigenvalue above it.
pub fn spectral_probe(h: &SparseHamiltonian, k: usize, tol: f64) -> Result<SpectralProbe> {
    let (vals, vecs, _) = lowest(h, k.min(h.dim), tol)?;
    let res = residuals(h, &vals, &vecs);
    let kernel = vals.iter().filter(|&&v| v < kernel_cut(tol)).count();
    Ok(SpectralProbe {
        gap: vals.get(kernel).copied(),
        kernel_dimension: kernel,
        max_residual: res.into_iter().fold(0.0, f64::max),
        eigenvalues: vals,
    })
}

/// Exact dimension of the space of functionals respecting the relations: classes of the
/// single-term relations (with their phases) minus the rank of the multi-term ones.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassCount {
    pub pictures: usize,
    pub classes: usize,
    /// Classes forced to vanish by an inconsistent phase around a cycle.
    pub inconsistent: usize,
    pub multi_term_rank: usize,
    pub dimension: usize,
    /// One picture index per consistent class.
    pub representatives: Vec<usize>,
    /// Position in `representatives` of each picture's class, None for vanishing classes.
    #[serde(skip)]
    pub class_of: Vec<Option<usize>>,
}

struct PhasedUnionFind {
    parent: Vec<usize>,
    /// ψ(i) = ratio[i] · ψ(parent[i]).
    ratio: Vec<CycloNum>,
    dead: Vec<bool>,
}

impl PhasedUnionFind {
    fn find(&mut self, i: usize) -> (usize, CycloNum) {
        let mut path = Vec::new();
        let mut root = i;
        while self.parent[root] != root {
            path.push(root);
            root = self.parent[root];
        }
        let mut acc = self.ratio[root].clone();
        for &j in path.iter().rev() {
            acc = &self.ratio[j] * &acc;
            self.ratio[j] = acc.clone();
            self.parent[j] = root;
        }
        (root, self.ratio[i].clone())
    }

    /// Imposes ψ(a) = c · ψ(b).
    fn relate(&mut self, a: usize, c: &CycloNum, b: usize) -> Result<()> {
        let (ra, xa) = self.find(a);
        let (rb, xb) = self.find(b);
        let rhs = c * &xb;
        if ra == rb {
            if xa != rhs {
                self.dead[ra] = true;
            }
            return Ok(());
        }
        self.parent[ra] = rb;
        self.ratio[ra] = &rhs * &xa.inverse()?;
        self.dead[rb] = self.dead[rb] || self.dead[ra];
        Ok(())
    }
}

pub fn class_count(pictures: usize, relations: &[Relation], one: &CycloNum) -> Result<ClassCount> {
    let mut uf = PhasedUnionFind {
        parent: (0..pictures).collect(),
        ratio: vec![one.clone(); pictures],
        dead: vec![false; pictures],
    };
    for rel in relations.iter().filter(|r| r.terms.len() == 1) {
        let (j, c) = &rel.terms[0];
        uf.relate(rel.source, c, *j)?;
    }
    let mut column = vec![None; pictures];
    let mut classes = 0;
    let mut inconsistent = 0;
    let mut representatives = Vec::new();
    for (i, col) in column.iter_mut().enumerate() {
        if uf.parent[i] == i {
            classes += 1;
            if uf.dead[i] {
                inconsistent += 1;
            } else {
                representatives.push(i);
                *col = Some(classes - inconsistent - 1);
            }
        }
    }
    let live = classes - inconsistent;
    let zero = CycloNum::zero(one.order());
    let mut echelon: Vec<(usize, Vec<CycloNum>)> = Vec::new();
    for rel in relations.iter().filter(|r| r.terms.len() > 1) {
        let mut row = vec![zero.clone(); live];
        let mut put = |uf: &mut PhasedUnionFind, i: usize, c: CycloNum| {
            let (root, x) = uf.find(i);
            if let Some(col) = column[root] {
                row[col] = &row[col] + &(&c * &x);
            }
        };
        put(&mut uf, rel.source, one.clone());
        for (j, c) in &rel.terms {
            put(&mut uf, *j, -c);
        }
        for (pivot, brow) in &echelon {
            if !row[*pivot].is_zero() {
                let f = row[*pivot].clone();
                for (a, b) in row.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *a = &*a - &(&f * b);
                    }
                }
            }
        }
        if let Some(pivot) = row.iter().position(|c| !c.is_zero()) {
            let inv = row[pivot].inverse()?;
            let row = row.iter().map(|c| c * &inv).collect();
            echelon.push((pivot, row));
        }
    }
    let class_of = (0..pictures).map(|i| column[uf.find(i).0]).collect();
    Ok(ClassCount {
        pictures,
        class_of,
        classes,
        inconsistent,
        multi_term_rank: echelon.len(),
        dimension: live - echelon.len(),
        representatives,
    })
}
