//! Rational functions of the loop value d, and the Jones-Wenzl expansion over Q(d) with
//! diagrams named by Temperley-Lieb words.

use crate::error::{Error, Result};
use crate::skein::PlanarDiagram;
use crate::CycloNum;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

/// Polynomial in d with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    pub fn int(k: i64) -> Self {
        Poly::constant(BigRational::from_integer(k.into()))
    }

    /// The monomial d.
    pub fn d() -> Self {
        Poly::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(&self) -> Self {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// Quotient and remainder; fails on a zero divisor.
    pub fn div_rem(&self, o: &Self) -> Result<(Self, Self)> {
        let dd = o.degree().ok_or(Error::ZeroInverse)?;
        let lead = o.lead();
        let mut rem = self.clone();
        let mut q = vec![BigRational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.lead() / &lead;
            q[rd - dd] = c.clone();
            let mut shift = vec![BigRational::zero(); rd - dd];
            shift.extend(o.0.iter().map(|a| a * &c));
            rem = rem.sub(&Poly::new(shift));
        }
        Ok((Poly::new(q), rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(BigRational::one() / self.lead()))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, d: &CycloNum) -> CycloNum {
        let order = d.order();
        self.0.iter().rev().fold(CycloNum::zero(order), |acc, c| {
            &(&acc * d) + &CycloNum::from_coeff(order, c.clone())
        })
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().bytes().map(|b| DIGITS[(b - b'0') as usize]).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()) {
            let sign = if c.is_negative() { "−" } else { "+" };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "−")?,
                (true, false) => {}
                (false, _) => write!(f, " {sign} ")?,
            }
            first = false;
            let a = c.abs();
            let coeff = if a.is_one() && k > 0 { String::new() } else { a.to_string() };
            let var = match k {
                0 => String::new(),
                1 => "d".into(),
                _ => format!("d{}", superscript(k)),
            };
            write!(f, "{coeff}{var}")?;
        }
        Ok(())
    }
}

/// A reduced fraction num/den with den monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if num.is_zero() {
            return Ok(RatFn::from_poly(num));
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g)?;
        let (m, _) = den.div_rem(&g)?;
        let s = BigRational::one() / m.lead();
        Ok(RatFn {
            num: n.scale(&s),
            den: m.scale(&s),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::int(1) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn add(&self, o: &Self) -> Self {
        RatFn::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFn::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    /// Value at a specific d; fails where the denominator vanishes.
    pub fn eval(&self, d: &CycloNum) -> Result<CycloNum> {
        Ok(&self.num.eval(d) * &self.den.eval(d).inverse()?)
    }

    fn is_negative(&self) -> bool {
        self.num.lead().is_negative()
    }
}

fn wrap(p: &Poly) -> String {
    if p.0.iter().filter(|c| !c.is_zero()).count() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::int(1) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

/// Chebyshev polynomials Δ_0 … Δ_k in d.
pub fn delta_polys(k: usize) -> Vec<Poly> {
    let mut out = vec![Poly::int(1), Poly::d()];
    while out.len() <= k {
        let n = out.len();
        out.push(Poly::d().mul(&out[n - 1]).sub(&out[n - 2]));
    }
    out.truncate(k + 1);
    out
}

/// Shortest Temperley-Lieb word e_{i1} e_{i2} … for every crossingless k → k diagram,
/// with the leftmost letter on top.
pub fn tl_words(k: usize) -> BTreeMap<PlanarDiagram, Vec<usize>> {
    let id = PlanarDiagram::identity(k);
    let mut words = BTreeMap::from([(id.clone(), Vec::new())]);
    let mut queue = VecDeque::from([id]);
    while let Some(cur) = queue.pop_front() {
        for i in 1..k {
            let e = PlanarDiagram::cup_cap(k, i).expect("in range");
            let (next, _) = cur.compose(&e).expect("matching strands");
            if !words.contains_key(&next) {
                let mut w = words[&cur].clone();
                w.push(i);
                words.insert(next.clone(), w);
                queue.push_back(next);
            }
        }
    }
    words
}

/// JW_k over Q(d) by the Wenzl recursion.
pub fn jones_wenzl_in_d(k: usize) -> Result<BTreeMap<PlanarDiagram, RatFn>> {
    if k == 0 {
        return Ok(BTreeMap::from([(PlanarDiagram::identity(0), RatFn::from_poly(Poly::int(1)))]));
    }
    let delta = delta_polys(k);
    let mut jw = BTreeMap::from([(PlanarDiagram::identity(1), RatFn::from_poly(Poly::int(1)))]);
    let loops = |n: usize| (0..n).fold(Poly::int(1), |acc, _| acc.mul(&Poly::d()));
    for n in 1..k {
        let ext: BTreeMap<PlanarDiagram, RatFn> = jw
            .into_iter()
            .map(|(d, c)| (d.tensor(&PlanarDiagram::identity(1)), c))
            .collect();
        let e = PlanarDiagram::cup_cap(n + 1, n)?;
        let ratio = RatFn::new(delta[n - 1].clone(), delta[n].clone())?.neg();
        let mut next = ext.clone();
        for (x, cx) in &ext {
            let (xe, l1) = x.compose(&e)?;
            for (y, cy) in &ext {
                let (xey, l2) = xe.compose(y)?;
                let c = cx.mul(cy).mul(&ratio).mul(&RatFn::from_poly(loops(l1 + l2)));
                let slot = next.entry(xey).or_insert_with(|| RatFn::from_poly(Poly::int(0)));
                *slot = slot.add(&c);
            }
        }
        next.retain(|_, c| !c.is_zero());
        jw = next;
    }
    Ok(jw)
}

/// Human-readable JW_k such as "id − (1/d) e1".
pub fn render_jones_wenzl(k: usize) -> Result<String> {
    let words = tl_words(k);
    let mut terms: Vec<(Vec<usize>, RatFn)> = jones_wenzl_in_d(k)?
        .into_iter()
        .map(|(d, c)| (words[&d].clone(), c))
        .collect();
    terms.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    let mut out = String::new();
    for (i, (w, c)) in terms.iter().enumerate() {
        let name = if w.is_empty() {
            "id".to_string()
        } else {
            w.iter().map(|j| format!("e{j}")).collect()
        };
        let neg = c.is_negative();
        let a = if neg { c.neg() } else { c.clone() };
        match (i, neg) {
            (0, true) => out.push('−'),
            (0, false) => {}
            (_, true) => out.push_str(" − "),
            (_, false) => out.push_str(" + "),
        }
        if a.is_one() {
            out.push_str(&name);
        } else {
            out.push_str(&format!("({a}) {name}"));
        }
    }
    Ok(out)
}
