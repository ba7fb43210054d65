//! The vector space of the n-punctured disk with all punctures labeled 1: left-comb tree
//! basis, Hermitian pairing, reduction of skein vectors and braid-group representations.

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::linalg::{FieldElem, Matrix};
use crate::quad::{Quad, QuadField};
use crate::scalar::Coefficient;
use crate::skein::{crossing, jones_wenzl, Kauffman, PlanarDiagram, SkeinElement};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

/// Checks the triangle, parity and level conditions at a trivalent vertex.
pub fn admissible_triple(a: u32, b: u32, c: u32, r: u32) -> Result<bool> {
    let max = r.saturating_sub(2);
    for x in [a, b, c] {
        if x > max {
            return Err(Error::LabelOutOfRange { label: x, max });
        }
    }
    Ok(a <= b + c && b <= c + a && c <= a + b && (a + b + c).is_multiple_of(2) && a + b + c < 2 * (r - 1))
}

/// Internal-edge labels m_1..m_n of the left comb; m_1 = 1 (the first leaf) and m_n is the root.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TreeLabeling {
    pub labels: Vec<u32>,
}

impl TreeLabeling {
    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    pub fn root_label(&self) -> u32 {
        *self.labels.last().expect("nonempty labeling")
    }
}

impl fmt::Debug for TreeLabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.labels)
    }
}

/// All admissible left-comb labelings in lexicographic order.
pub fn enumerate_basis(n: usize, root: u32, r: u32) -> Vec<TreeLabeling> {
    let mut out = Vec::new();
    if n == 0 || r < 2 || 1 > r - 2 || root > r - 2 {
        return out;
    }
    let mut path = vec![1u32];
    fn rec(path: &mut Vec<u32>, n: usize, root: u32, r: u32, out: &mut Vec<TreeLabeling>) {
        if path.len() == n {
            if *path.last().expect("nonempty") == root {
                out.push(TreeLabeling { labels: path.clone() });
            }
            return;
        }
        let a = *path.last().expect("nonempty");
        for c in 0..=r - 2 {
            if admissible_triple(a, 1, c, r).unwrap_or(false) {
                path.push(c);
                rec(path, n, root, r, out);
                path.pop();
            }
        }
    }
    rec(&mut path, n, root, r, &mut out);
    out
}

/// Dimension by powers of the label transfer matrix.
pub fn dimension(n: usize, root: u32, r: u32) -> u128 {
    if n == 0 || r < 3 || root > r - 2 {
        return 0;
    }
    let m = (r - 1) as usize;
    let step: Vec<Vec<u128>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|c| u128::from(admissible_triple(a as u32, 1, c as u32, r).unwrap_or(false)))
                .collect()
        })
        .collect();
    let mut v = vec![0u128; m];
    v[1] = 1;
    for _ in 1..n {
        v = (0..m).map(|c| (0..m).map(|a| v[a] * step[a][c]).sum()).collect();
    }
    v[root as usize]
}

/// A braid word σ_{i1}^{±1} σ_{i2}^{±1} … on a fixed number of strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<(usize, bool)>,
}

impl BraidWord {
    /// Parses words like `"s1 s2^-1 s1"`.
    pub fn parse(word: &str, strands: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in word.split_whitespace() {
            let body = tok
                .strip_prefix('s')
                .ok_or_else(|| Error::Parse(format!("bad braid letter {tok:?}")))?;
            let (idx, positive) = match body.split_once('^') {
                Some((i, "-1")) => (i, false),
                Some((i, "1")) => (i, true),
                Some(_) => return Err(Error::Parse(format!("bad exponent in {tok:?}"))),
                None => (body, true),
            };
            let i: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad braid letter {tok:?}")))?;
            letters.push((i, positive));
        }
        let w = BraidWord { strands, letters };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        for &(i, _) in &self.letters {
            if i == 0 || i >= self.strands {
                return Err(Error::Invalid(format!(
                    "generator s{i} out of range for {} strands",
                    self.strands
                )));
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&(i, p)| (i, !p)).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().copied());
        BraidWord {
            strands: self.strands,
            letters,
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(i, p)| if p { format!("s{i}") } else { format!("s{i}^-1") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Coordinates on the (unnormalized) tree basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctorVector<T: Coefficient> {
    pub coords: Vec<Cyclo<T>>,
}

impl<T: Coefficient> FunctorVector<T> {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Cyclo::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        FunctorVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Cyclo<T>) -> Self {
        FunctorVector {
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }
}

/// √N for a basis norm N: either c·(√D)^k exactly, or a float.
#[derive(Clone, Debug)]
pub enum UnitFactor<T: Coefficient> {
    Exact { coeff: Cyclo<T>, root_power: u8 },
    Numeric(Complex64),
}

/// A generator matrix on the unit-normalized basis, exact when every norm has an exact root.
#[derive(Clone, Debug)]
pub struct UnitMatrix<T: Coefficient> {
    pub exact: Option<Matrix<Quad<T>>>,
    pub numeric: DMatrix<Complex64>,
}

impl<T: Coefficient> UnitMatrix<T> {
    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

type GeneratorKey = (usize, bool);

/// V(D, n) at level r for leaves labeled 1 and a given root label.
pub struct FunctorSpace<T: Coefficient> {
    n: usize,
    root: u32,
    kp: Kauffman<T>,
    basis: Vec<TreeLabeling>,
    vectors: Vec<SkeinElement<T>>,
    norms: Vec<Cyclo<T>>,
    field: Option<Arc<QuadField<T>>>,
    units: Vec<UnitFactor<T>>,
    generators: RwLock<HashMap<GeneratorKey, Matrix<Cyclo<T>>>>,
    spanning: RwLock<Option<Vec<SkeinElement<T>>>>,
}

impl<T: Coefficient> FunctorSpace<T> {
    pub fn new(n: usize, root: u32, kp: Kauffman<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("at least one puncture is required".into()));
        }
        if kp.r < 3 {
            return Err(Error::Invalid("level r must be at least 3 for label 1 to exist".into()));
        }
        if root > kp.r - 2 {
            return Err(Error::LabelOutOfRange {
                label: root,
                max: kp.r - 2,
            });
        }
        let jws: Vec<SkeinElement<T>> = (0..=kp.r as usize - 2)
            .map(|k| jones_wenzl(k, &kp))
            .collect::<Result<_>>()?;
        let basis = enumerate_basis(n, root, kp.r);
        let vectors = basis
            .iter()
            .map(|l| build_vector(l, &kp, &jws))
            .collect::<Result<Vec<_>>>()?;
        let mut space = FunctorSpace {
            n,
            root,
            kp,
            basis,
            vectors,
            norms: Vec::new(),
            field: None,
            units: Vec::new(),
            generators: RwLock::new(HashMap::new()),
            spanning: RwLock::new(None),
        };
        space.norms = space
            .vectors
            .iter()
            .map(|v| space.pairing(v, v))
            .collect::<Result<_>>()?;
        if space.norms.iter().any(Cyclo::is_zero) {
            return Err(Error::Invalid("a tree basis vector has zero norm".into()));
        }
        space.init_units()?;
        Ok(space)
    }

    fn init_units(&mut self) -> Result<()> {
        let sign = self.kp.unitary_galois();
        let disc = self.kp.delta(2);
        let field = if disc.is_zero() {
            None
        } else {
            Some(QuadField::new(disc.clone(), sign)?)
        };
        let disc_inv = if disc.is_zero() { None } else { Some(disc.inverse()?) };
        self.units = self
            .norms
            .iter()
            .map(|nrm| {
                if let Some(c) = nrm.exact_sqrt(sign) {
                    return UnitFactor::Exact {
                        coeff: c,
                        root_power: 0,
                    };
                }
                if let Some(di) = &disc_inv {
                    if let Some(c) = (nrm * di).exact_sqrt(sign) {
                        return UnitFactor::Exact {
                            coeff: c,
                            root_power: 1,
                        };
                    }
                }
                UnitFactor::Numeric(nrm.embed().sqrt())
            })
            .collect();
        self.field = field;
        Ok(())
    }

    pub fn leaf_count(&self) -> usize {
        self.n
    }

    pub fn root_label(&self) -> u32 {
        self.root
    }

    pub fn level(&self) -> &Kauffman<T> {
        &self.kp
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[TreeLabeling] {
        &self.basis
    }

    pub fn basis_vector(&self, l: usize) -> &SkeinElement<T> {
        &self.vectors[l]
    }

    /// <v_ℓ, v_ℓ> for each basis vector.
    pub fn norms(&self) -> &[Cyclo<T>] {
        &self.norms
    }

    pub fn unit_factors(&self) -> &[UnitFactor<T>] {
        &self.units
    }

    /// The extension K(√(d²-1)) used by unit-basis quantities, when d² ≠ 1.
    pub fn extension(&self) -> Option<&Arc<QuadField<T>>> {
        self.field.as_ref()
    }

    fn check_boundary(&self, x: &SkeinElement<T>) -> Result<()> {
        if x.bottom() != self.n || x.top() != self.root as usize {
            return Err(Error::BoundaryMismatch(format!(
                "expected {} -> {}, found {} -> {}",
                self.n,
                self.root,
                x.bottom(),
                x.top()
            )));
        }
        Ok(())
    }

    /// <x, y>: conjugate-linear in x; stacks y over the mirror image of x and closes.
    pub fn pairing(&self, x: &SkeinElement<T>, y: &SkeinElement<T>) -> Result<Cyclo<T>> {
        self.check_boundary(x)?;
        self.check_boundary(y)?;
        y.compose(&x.dagger(), &self.kp.d)?.markov_trace(&self.kp.d)
    }

    /// Gram matrix of the tree basis.
    pub fn gram(&self) -> Result<Matrix<Cyclo<T>>> {
        let mut g = Matrix::filled(self.dim(), self.dim(), self.kp.zero());
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                g.set(i, j, self.pairing(&self.vectors[i], &self.vectors[j])?);
            }
        }
        Ok(g)
    }

    fn spanning_set(&self) -> Result<Vec<SkeinElement<T>>> {
        if let Some(s) = self.spanning.read().expect("spanning lock").as_ref() {
            return Ok(s.clone());
        }
        let jw = jones_wenzl(self.root as usize, &self.kp)?;
        let set = PlanarDiagram::enumerate(self.n, self.root as usize)
            .into_iter()
            .map(|d| jw.compose(&SkeinElement::from_diagram(d, self.kp.one()), &self.kp.d))
            .collect::<Result<Vec<_>>>()?;
        *self.spanning.write().expect("spanning lock") = Some(set.clone());
        Ok(set)
    }

    /// Coordinates of x in the tree basis; fails if x differs from its projection by a
    /// vector outside the pairing radical.
    pub fn reduce_to_basis(&self, x: &SkeinElement<T>) -> Result<FunctorVector<T>> {
        self.check_boundary(x)?;
        let mut coords = Vec::with_capacity(self.dim());
        let mut residual = x.clone();
        for (v, nrm) in self.vectors.iter().zip(&self.norms) {
            let c = &self.pairing(v, x)? * &nrm.inverse()?;
            residual = residual.sub(&v.scale(&c))?;
            coords.push(c);
        }
        for m in self.spanning_set()? {
            let p = self.pairing(&m, &residual)?;
            if !p.is_zero() {
                return Err(Error::NotInSpan(format!("residual pairs to {p} with a matching")));
            }
        }
        Ok(FunctorVector { coords })
    }

    /// Coordinates without the radical self-check.
    pub fn project(&self, x: &SkeinElement<T>) -> Result<FunctorVector<T>> {
        self.check_boundary(x)?;
        let coords = self
            .vectors
            .iter()
            .zip(&self.norms)
            .map(|(v, nrm)| Ok(&self.pairing(v, x)? * &nrm.inverse()?))
            .collect::<Result<_>>()?;
        Ok(FunctorVector { coords })
    }

    /// Skein element Σ c_ℓ v_ℓ.
    pub fn lift(&self, v: &FunctorVector<T>) -> SkeinElement<T> {
        let mut out = SkeinElement::zero(self.n, self.root as usize, self.kp.order);
        for (c, b) in v.coords.iter().zip(&self.vectors) {
            out = out.add(&b.scale(c)).expect("matching boundary");
        }
        out
    }

    /// Matrix of x ↦ x ∘ σ_i^{±1} on the tree basis; column j holds the image of v_j.
    pub fn generator_matrix(&self, i: usize, positive: bool) -> Result<Matrix<Cyclo<T>>> {
        if i == 0 || i >= self.n {
            return Err(Error::Invalid(format!("generator s{i} out of range for {} strands", self.n)));
        }
        if let Some(m) = self.generators.read().expect("generator lock").get(&(i, positive)) {
            return Ok(m.clone());
        }
        let x = crossing(self.n, i, positive, &self.kp)?;
        let mut m = Matrix::filled(self.dim(), self.dim(), self.kp.zero());
        for (j, v) in self.vectors.iter().enumerate() {
            let col = self.project(&v.compose(&x, &self.kp.d)?)?;
            for (l, c) in col.coords.into_iter().enumerate() {
                m.set(l, j, c);
            }
        }
        self.generators
            .write()
            .expect("generator lock")
            .insert((i, positive), m.clone());
        Ok(m)
    }

    /// Ordered product of generator matrices along the word.
    pub fn represent(&self, word: &BraidWord) -> Result<Matrix<Cyclo<T>>> {
        if word.strands != self.n {
            return Err(Error::StrandMismatch {
                expected: self.n,
                found: word.strands,
            });
        }
        word.validate()?;
        let mut acc = Matrix::identity(self.dim(), &self.kp.one());
        for &(i, p) in &word.letters {
            acc = acc.mul(&self.generator_matrix(i, p)?);
        }
        Ok(acc)
    }

    fn exact_unit_ratio(&self, l: usize, j: usize) -> Option<Quad<T>> {
        let field = self.field.as_ref();
        match (&self.units[l], &self.units[j]) {
            (
                UnitFactor::Exact {
                    coeff: cl,
                    root_power: pl,
                },
                UnitFactor::Exact {
                    coeff: cj,
                    root_power: pj,
                },
            ) => {
                let base = cl * &cj.inverse().ok()?;
                match (pl, pj) {
                    (0, 0) | (1, 1) => match field {
                        Some(f) => Some(Quad::from_base(base, f)),
                        None => None,
                    },
                    (1, 0) => field.map(|f| Quad::new(self.kp.zero(), base, f)),
                    (0, 1) => field.map(|f| {
                        let di = f.disc().inverse().expect("nonzero discriminant");
                        Quad::new(self.kp.zero(), &base * &di, f)
                    }),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    fn unit_embed(&self, l: usize) -> Complex64 {
        match &self.units[l] {
            UnitFactor::Exact { coeff, root_power } => {
                let s = self.field.as_ref().map_or(Complex64::new(1.0, 0.0), |f| f.root_embed());
                coeff.embed() * if *root_power == 1 { s } else { Complex64::new(1.0, 0.0) }
            }
            UnitFactor::Numeric(z) => *z,
        }
    }

    /// Rescales a tree-basis matrix to the unit-normalized basis: M̂_ℓj = M_ℓj σ_ℓ / σ_j.
    pub fn to_unit(&self, m: &Matrix<Cyclo<T>>) -> UnitMatrix<T> {
        let dim = self.dim();
        let numeric = DMatrix::from_fn(dim, dim, |l, j| {
            m.get(l, j).embed() * self.unit_embed(l) / self.unit_embed(j)
        });
        let mut exact = None;
        if let Some(f) = self.field.as_ref().or(None) {
            let mut ok = true;
            let mut out = Matrix::filled(dim, dim, Quad::from_base(self.kp.zero(), f));
            'outer: for l in 0..dim {
                for j in 0..dim {
                    match self.exact_unit_ratio(l, j) {
                        Some(q) => out.set(l, j, q.mul(&Quad::from_base(m.get(l, j).clone(), f))),
                        None => {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                exact = Some(out);
            }
        }
        UnitMatrix { exact, numeric }
    }

    pub fn unit_generator_matrix(&self, i: usize, positive: bool) -> Result<UnitMatrix<T>> {
        Ok(self.to_unit(&self.generator_matrix(i, positive)?))
    }

    pub fn unit_represent(&self, word: &BraidWord) -> Result<UnitMatrix<T>> {
        Ok(self.to_unit(&self.represent(word)?))
    }

    /// Numeric Gram matrix on the unit-normalized basis.
    pub fn unit_gram_numeric(&self) -> Result<DMatrix<Complex64>> {
        let g = self.gram()?;
        let dim = self.dim();
        Ok(DMatrix::from_fn(dim, dim, |l, j| {
            g.get(l, j).embed() / (self.unit_embed(l).conj() * self.unit_embed(j))
        }))
    }

    /// Coordinates of a vector on the unit-normalized basis (c_ℓ σ_ℓ), exact when possible.
    pub fn unit_coordinates(&self, v: &FunctorVector<T>) -> (Option<Vec<Quad<T>>>, Vec<Complex64>) {
        let numeric = v
            .coords
            .iter()
            .enumerate()
            .map(|(l, c)| c.embed() * self.unit_embed(l))
            .collect();
        let exact = self.field.as_ref().and_then(|f| {
            v.coords
                .iter()
                .zip(&self.units)
                .map(|(c, u)| match u {
                    UnitFactor::Exact { coeff, root_power: 0 } => Some(Quad::from_base(c * coeff, f)),
                    UnitFactor::Exact { coeff, root_power: _ } => Some(Quad::new(self.kp.zero(), c * coeff, f)),
                    UnitFactor::Numeric(_) => None,
                })
                .collect()
        });
        (exact, numeric)
    }
}

fn build_vector<T: Coefficient>(
    l: &TreeLabeling,
    kp: &Kauffman<T>,
    jws: &[SkeinElement<T>],
) -> Result<SkeinElement<T>> {
    let mut v = SkeinElement::identity(1, kp.order);
    for w in l.labels.windows(2) {
        let (a, c) = (w[0] as usize, w[1] as usize);
        let ext = v.tensor(&SkeinElement::identity(1, kp.order));
        v = if c == a + 1 {
            jws[c].compose(&ext, &kp.d)?
        } else {
            let cap = SkeinElement::from_diagram(PlanarDiagram::cap(a + 1, a)?, kp.one());
            cap.compose(&ext, &kp.d)?
        };
    }
    Ok(v)
}

/// Rank of the pairing on crossingless matchings n → root (projected by JW_root).
pub fn gram_rank<T: Coefficient>(n: usize, root: u32, kp: &Kauffman<T>) -> Result<usize> {
    let jw = jones_wenzl(root as usize, kp)?;
    let set: Vec<SkeinElement<T>> = PlanarDiagram::enumerate(n, root as usize)
        .into_iter()
        .map(|d| jw.compose(&SkeinElement::from_diagram(d, kp.one()), &kp.d))
        .collect::<Result<_>>()?;
    if set.is_empty() {
        return Ok(0);
    }
    let mut g = Matrix::filled(set.len(), set.len(), kp.zero());
    for (i, x) in set.iter().enumerate() {
        for (j, y) in set.iter().enumerate() {
            g.set(i, j, y.compose(&x.dagger(), &kp.d)?.markov_trace(&kp.d)?);
        }
    }
    Ok(g.rank())
}
