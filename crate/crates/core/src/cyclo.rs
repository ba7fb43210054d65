//! Exact arithmetic in cyclotomic fields Q(ζ_n).
//!
//! Elements are stored in the power basis ζ^0..ζ^{φ(n)-1}, reduced modulo the
//! n-th cyclotomic polynomial, so equal field elements have equal coefficient vectors.

use crate::error::{Error, Result};
use crate::scalar::{is_negligible, rational_approx, Coefficient};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

/// Largest order accepted when coercing two elements to a common field.
pub const MAX_ORDER: u64 = 4096;

/// An element of Q(ζ_order).
#[derive(Clone, PartialEq)]
pub struct Cyclo<T> {
    order: u32,
    coeffs: Vec<T>,
}

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

fn units(n: u32) -> Vec<u32> {
    (1..=n).filter(|k| k.gcd(&n) == 1).map(|k| k % n).collect()
}

fn poly_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Integer coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    if let Some(p) = poly_cache().read().expect("poly cache").get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let div = cyclotomic_polynomial(d);
        num = exact_int_div(&num, &div);
    }
    let p = Arc::new(num);
    poly_cache().write().expect("poly cache").insert(n, p.clone());
    p
}

fn exact_int_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn];
    let mut quot = vec![0i64; rem.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn] / lead;
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quot
}

impl<T: Coefficient> Cyclo<T> {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Cyclo {
            order,
            coeffs: vec![T::zero(); euler_phi(order)],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_coeff(order, T::one())
    }

    pub fn from_int(order: u32, k: i64) -> Self {
        Self::from_coeff(order, T::from_i64(k).expect("integer coefficient"))
    }

    pub fn from_ratio(order: u32, p: i64, q: i64) -> Self {
        Self::from_coeff(order, T::from_ratio(p, q))
    }

    pub fn from_coeff(order: u32, c: T) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = c;
        z
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        Self::from_terms(n, [(k, T::one())])
    }

    /// Σ c·ζ_n^k over the given (k, c) pairs.
    pub fn from_terms<I: IntoIterator<Item = (i64, T)>>(n: u32, terms: I) -> Self {
        let mut poly = vec![T::zero(); n as usize];
        for (k, c) in terms {
            let e = k.rem_euclid(n as i64) as usize;
            poly[e] = poly[e].clone() + c;
        }
        Self::reduce(n, poly)
    }

    /// Builds an element from a coefficient vector of any length, reducing modulo Φ_n.
    pub fn from_coeffs(order: u32, coeffs: Vec<T>) -> Self {
        Self::reduce(order, coeffs)
    }

    fn reduce(order: u32, mut poly: Vec<T>) -> Self {
        let phi = euler_phi(order);
        let cp = cyclotomic_polynomial(order);
        while poly.len() > phi {
            let top = poly.pop().expect("nonempty");
            if is_negligible(&top) {
                continue;
            }
            let shift = poly.len() - phi;
            for (j, &c) in cp.iter().take(phi).enumerate() {
                if c != 0 {
                    let cj = T::from_i64(c).expect("integer");
                    poly[shift + j] = poly[shift + j].clone() - top.clone() * cj;
                }
            }
        }
        poly.resize(phi, T::zero());
        Cyclo { order, coeffs: poly }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(is_negligible)
    }

    pub fn is_one(&self) -> bool {
        is_negligible(&(self.coeffs[0].clone() - T::one())) && self.coeffs[1..].iter().all(is_negligible)
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<T> {
        self.coeffs[1..]
            .iter()
            .all(is_negligible)
            .then(|| self.coeffs[0].clone())
    }

    /// Re-expresses the element in Q(ζ_m) for a multiple m of the current order.
    pub fn coerce(&self, m: u32) -> Result<Self> {
        if !m.is_multiple_of(self.order) {
            return Err(Error::Invalid(format!(
                "order {} does not divide {}",
                self.order, m
            )));
        }
        if m == self.order {
            return Ok(self.clone());
        }
        let step = (m / self.order) as i64;
        Ok(Self::from_terms(
            m,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (k as i64 * step, c.clone())),
        ))
    }

    fn common(a: &Self, b: &Self) -> Result<(Self, Self)> {
        if a.order == b.order {
            return Ok((a.clone(), b.clone()));
        }
        let m = (a.order as u64).lcm(&(b.order as u64));
        if m > MAX_ORDER {
            return Err(Error::OrderTooLarge(m));
        }
        Ok((a.coerce(m as u32)?, b.coerce(m as u32)?))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.order == other.order {
            return Ok(self.add_same(other));
        }
        let (a, b) = Self::common(self, other)?;
        Ok(a.add_same(&b))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.order == other.order {
            return Ok(self.mul_same(other));
        }
        let (a, b) = Self::common(self, other)?;
        Ok(a.mul_same(&b))
    }

    fn add_same(&self, other: &Self) -> Self {
        Cyclo {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        }
    }

    fn mul_same(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut poly = vec![T::zero(); 2 * n - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if is_negligible(x) {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if is_negligible(y) {
                    continue;
                }
                poly[i + j] = poly[i + j].clone() + x.clone() * y.clone();
            }
        }
        Self::reduce(self.order, poly)
    }

    pub fn scale(&self, c: &T) -> Self {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Image under the Galois automorphism ζ ↦ ζ^j (j coprime to the order).
    pub fn galois(&self, j: i64) -> Self {
        Self::from_terms(
            self.order,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (k as i64 * j, c.clone())),
        )
    }

    /// Complex conjugate, ζ ↦ ζ^{n-1}.
    pub fn conj(&self) -> Self {
        self.galois(self.order as i64 - 1)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut others = Self::one(self.order);
        for j in units(self.order) {
            if j != 1 % self.order {
                others = others.mul_same(&self.galois(j as i64));
            }
        }
        let norm = self.mul_same(&others).coeffs[0].clone();
        Ok(others.scale(&(T::one() / norm)))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.order);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&b);
            }
            b = b.mul_same(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Complex value under ζ ↦ e^{2πij/n}.
    pub fn embed_at(&self, j: i64) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| {
                let theta = 2.0 * PI * ((k as i64 * j).rem_euclid(self.order as i64)) as f64 / n;
                acc + Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
    }

    /// Complex value under the standard embedding ζ ↦ e^{2πi/n}.
    pub fn embed(&self) -> Complex64 {
        self.embed_at(1)
    }

    /// Conjugate together with the standard complex embedding.
    pub fn conjugate_embed(&self) -> (Self, Complex64) {
        (self.conj(), self.embed())
    }

    /// A square root inside the field, if one exists.
    ///
    /// The sign is fixed so the root has positive real part (positive imaginary part
    /// when the real part vanishes) under the embedding ζ ↦ e^{2πi·sign_embedding/n}.
    pub fn exact_sqrt(&self, sign_embedding: i64) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let n = self.order;
        let phi = self.coeffs.len();
        let reps: Vec<u32> = units(n).into_iter().filter(|&j| 2 * j < n || n <= 2).collect();
        let all: Vec<u32> = units(n);
        let mut vander = DMatrix::<Complex64>::zeros(phi, phi);
        for (row, &j) in all.iter().enumerate() {
            for k in 0..phi {
                let theta = 2.0 * PI * ((j as u64 * k as u64) % n as u64) as f64 / n as f64;
                vander[(row, k)] = Complex64::from_polar(1.0, theta);
            }
        }
        let lu = vander.lu();
        let roots: Vec<Complex64> = all.iter().map(|&j| self.embed_at(j as i64).sqrt()).collect();
        let pairs = reps.len();
        if pairs > 20 {
            return None;
        }
        for mask in 0u64..(1u64 << pairs) {
            let mut rhs = DVector::<Complex64>::zeros(phi);
            for (row, &j) in all.iter().enumerate() {
                let (rep, conj) = if 2 * j < n || n <= 2 {
                    (j, false)
                } else {
                    (n - j, true)
                };
                let idx = reps.iter().position(|&x| x == rep).expect("representative");
                let mut z = all
                    .iter()
                    .position(|&x| x == rep)
                    .map(|p| roots[p])
                    .expect("root");
                if mask >> idx & 1 == 1 {
                    z = -z;
                }
                rhs[row] = if conj { z.conj() } else { z };
            }
            let Some(sol) = lu.solve(&rhs) else { continue };
            let mut coeffs = Vec::with_capacity(phi);
            let mut ok = true;
            for k in 0..phi {
                let v = sol[k].re;
                match rational_approx(v, 1_000_000_000) {
                    Some((p, q)) if (p as f64 / q as f64 - v).abs() < 1e-7 * v.abs().max(1.0) => {
                        coeffs.push(T::from_ratio(p, q))
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let y = Cyclo { order: n, coeffs };
            if &y.mul_same(&y) == self {
                let z = y.embed_at(sign_embedding);
                let positive = if z.re.abs() > 1e-9 { z.re > 0.0 } else { z.im > 0.0 };
                return Some(if positive { y } else { -y });
            }
        }
        None
    }
}

impl<T: Coefficient> fmt::Debug for Cyclo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<T: Coefficient> fmt::Display for Cyclo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if is_negligible(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c.to_exact_string())?,
                1 => write!(f, "({})z{}", c.to_exact_string(), self.order)?,
                _ => write!(f, "({})z{}^{}", c.to_exact_string(), self.order, k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign:ident, $body:expr) => {
        impl<T: Coefficient> $trait<&Cyclo<T>> for &Cyclo<T> {
            type Output = Cyclo<T>;
            fn $method(self, rhs: &Cyclo<T>) -> Cyclo<T> {
                let f: fn(&Cyclo<T>, &Cyclo<T>) -> Result<Cyclo<T>> = $body;
                f(self, rhs).expect("cyclotomic orders have no supported common field")
            }
        }
        impl<T: Coefficient> $trait<Cyclo<T>> for Cyclo<T> {
            type Output = Cyclo<T>;
            fn $method(self, rhs: Cyclo<T>) -> Cyclo<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Coefficient> $trait<&Cyclo<T>> for Cyclo<T> {
            type Output = Cyclo<T>;
            fn $method(self, rhs: &Cyclo<T>) -> Cyclo<T> {
                (&self).$method(rhs)
            }
        }
        impl<T: Coefficient> $trait<Cyclo<T>> for &Cyclo<T> {
            type Output = Cyclo<T>;
            fn $method(self, rhs: Cyclo<T>) -> Cyclo<T> {
                self.$method(&rhs)
            }
        }
        impl<T: Coefficient> $assign_trait<&Cyclo<T>> for Cyclo<T> {
            fn $assign(&mut self, rhs: &Cyclo<T>) {
                *self = (&*self).$method(rhs);
            }
        }
        impl<T: Coefficient> $assign_trait<Cyclo<T>> for Cyclo<T> {
            fn $assign(&mut self, rhs: Cyclo<T>) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, |a, b| a.checked_add(b));
binop!(Sub, sub, SubAssign, sub_assign, |a, b| a.checked_add(&-b));
binop!(Mul, mul, MulAssign, mul_assign, |a, b| a.checked_mul(b));

impl<T: Coefficient> Neg for Cyclo<T> {
    type Output = Cyclo<T>;
    fn neg(self) -> Cyclo<T> {
        -&self
    }
}

impl<T: Coefficient> Neg for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn neg(self) -> Cyclo<T> {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    order: u32,
    coeffs: Vec<String>,
}

impl<T: Coefficient> Serialize for Cyclo<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.to_exact_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Coefficient> Deserialize<'de> for Cyclo<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(d)?;
        if repr.order == 0 {
            return Err(D::Error::custom("order must be positive"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| T::parse_exact(s).ok_or_else(|| D::Error::custom(format!("bad coefficient {s:?}"))))
            .collect::<std::result::Result<Vec<T>, _>>()?;
        Ok(Cyclo::from_coeffs(repr.order, coeffs))
    }
}
