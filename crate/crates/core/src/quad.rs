//! Quadratic extensions K(√D) of a cyclotomic field with real D.

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::linalg::FieldElem;
use crate::scalar::Coefficient;
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

/// The extension data: D, its square root if D is already a square, and conj(√D) = ±√D
/// (the sign of D under the chosen embedding).
#[derive(Debug)]
pub struct QuadField<T: Coefficient> {
    disc: Cyclo<T>,
    fold: Option<Cyclo<T>>,
    conj_sign: bool,
    root_embed: Complex64,
}

impl<T: Coefficient> QuadField<T> {
    /// Adjoins s with s² = `disc`; `disc` must have a real embedding.
    pub fn new(disc: Cyclo<T>, sign_embedding: i64) -> Result<Arc<Self>> {
        let z = disc.embed();
        if z.im.abs() > 1e-9 * z.norm().max(1.0) {
            return Err(Error::Invalid(format!("discriminant {disc} is not real")));
        }
        let fold = disc.exact_sqrt(sign_embedding);
        let root_embed = match &fold {
            Some(r) => r.embed(),
            None if z.re >= 0.0 => Complex64::new(z.re.sqrt(), 0.0),
            None => Complex64::new(0.0, (-z.re).sqrt()),
        };
        Ok(Arc::new(QuadField {
            conj_sign: disc.embed_at(sign_embedding).re >= 0.0,
            disc,
            fold,
            root_embed,
        }))
    }

    pub fn disc(&self) -> &Cyclo<T> {
        &self.disc
    }

    /// Whether D is a square in the base field.
    pub fn is_degenerate(&self) -> bool {
        self.fold.is_some()
    }

    /// Numeric value of √D.
    pub fn root_embed(&self) -> Complex64 {
        self.root_embed
    }
}

/// a + b·√D.
#[derive(Clone)]
pub struct Quad<T: Coefficient> {
    a: Cyclo<T>,
    b: Cyclo<T>,
    field: Arc<QuadField<T>>,
}

impl<T: Coefficient> Quad<T> {
    pub fn new(a: Cyclo<T>, b: Cyclo<T>, field: &Arc<QuadField<T>>) -> Self {
        let q = Quad {
            a,
            b,
            field: field.clone(),
        };
        q.normalized()
    }

    pub fn from_base(a: Cyclo<T>, field: &Arc<QuadField<T>>) -> Self {
        let b = Cyclo::zero(a.order());
        Quad {
            a,
            b,
            field: field.clone(),
        }
    }

    /// √D itself.
    pub fn root(field: &Arc<QuadField<T>>) -> Self {
        let o = field.disc.order();
        Self::new(Cyclo::zero(o), Cyclo::one(o), field)
    }

    fn normalized(mut self) -> Self {
        if let Some(r) = &self.field.fold {
            if !self.b.is_zero() {
                self.a = &self.a + &(&self.b * r);
                self.b = Cyclo::zero(self.a.order());
            }
        }
        self
    }

    pub fn rational_part(&self) -> &Cyclo<T> {
        &self.a
    }

    pub fn root_part(&self) -> &Cyclo<T> {
        &self.b
    }

    pub fn field(&self) -> &Arc<QuadField<T>> {
        &self.field
    }
}

impl<T: Coefficient> PartialEq for Quad<T> {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl<T: Coefficient> fmt::Debug for Quad<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Coefficient> fmt::Display for Quad<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + ({})·s", self.a, self.b)
        }
    }
}

impl<T: Coefficient> FieldElem for Quad<T> {
    fn zero_like(&self) -> Self {
        Quad::from_base(Cyclo::zero(self.a.order()), &self.field)
    }

    fn one_like(&self) -> Self {
        Quad::from_base(Cyclo::one(self.a.order()), &self.field)
    }

    fn add(&self, o: &Self) -> Self {
        Quad::new(&self.a + &o.a, &self.b + &o.b, &self.field)
    }

    fn sub(&self, o: &Self) -> Self {
        Quad::new(&self.a - &o.a, &self.b - &o.b, &self.field)
    }

    fn mul(&self, o: &Self) -> Self {
        let a = &(&self.a * &o.a) + &(&(&self.b * &o.b) * &self.field.disc);
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        Quad::new(a, b, &self.field)
    }

    fn neg(&self) -> Self {
        Quad::new(-&self.a, -&self.b, &self.field)
    }

    fn conj(&self) -> Self {
        let b = if self.field.conj_sign {
            self.b.conj()
        } else {
            -self.b.conj()
        };
        Quad::new(self.a.conj(), b, &self.field)
    }

    fn inv(&self) -> Option<Self> {
        // (a + bs)^{-1} = (a - bs) / (a² - b²D)
        let norm = &(&self.a * &self.a) - &(&(&self.b * &self.b) * &self.field.disc);
        let ni = norm.inverse().ok()?;
        Some(Quad::new(&self.a * &ni, -(&self.b * &ni), &self.field))
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn embed(&self) -> Complex64 {
        self.a.embed() + self.b.embed() * self.field.root_embed
    }
}

#[derive(serde::Serialize)]
#[serde(bound = "")]
struct QuadRepr<'a, T: Coefficient> {
    rational: &'a Cyclo<T>,
    root: &'a Cyclo<T>,
}

impl<T: Coefficient> Serialize for Quad<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadRepr {
            rational: &self.a,
            root: &self.b,
        }
        .serialize(s)
    }
}
