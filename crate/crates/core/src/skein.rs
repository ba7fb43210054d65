//! Temperley-Lieb diagrams, crossing resolution and Jones-Wenzl projectors.

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::scalar::Coefficient;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// Choice of the Kauffman variable A at a given level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AConvention {
    /// A = i·ζ_{4r}, so the loop value d = 2cos(π/r) is positive.
    PositiveD,
    /// A = ζ_{2r}, the value used in the worked braid example.
    Example,
}

impl std::str::FromStr for AConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive-d" | "positive" => Ok(AConvention::PositiveD),
            "example" => Ok(AConvention::Example),
            other => Err(Error::Parse(format!("unknown A convention {other:?}"))),
        }
    }
}

/// Level data: the field Q(ζ_{4r}), A, A^{-1} and the loop value d = -A² - A^{-2}.
#[derive(Clone, Debug)]
pub struct Kauffman<T: Coefficient> {
    pub r: u32,
    pub order: u32,
    pub a: Cyclo<T>,
    pub a_inv: Cyclo<T>,
    pub d: Cyclo<T>,
    a_exponent: i64,
}

impl<T: Coefficient> Kauffman<T> {
    pub fn new(r: u32, convention: AConvention) -> Result<Self> {
        if r < 2 {
            return Err(Error::Invalid(format!("level r = {r} must be at least 2")));
        }
        let k = match convention {
            AConvention::PositiveD => r as i64 + 1,
            AConvention::Example => 2,
        };
        Ok(Self::with_exponent(r, k))
    }

    /// A = ζ_{4r}^k.
    pub fn with_exponent(r: u32, k: i64) -> Self {
        let order = 4 * r;
        let a = Cyclo::root_of_unity(order, k);
        let a_inv = Cyclo::root_of_unity(order, -k);
        let d = -(&a * &a) - &a_inv * &a_inv;
        Kauffman {
            r,
            order,
            a,
            a_inv,
            d,
            a_exponent: k,
        }
    }

    /// The exponent k with A = ζ_{4r}^k.
    pub fn a_exponent(&self) -> i64 {
        self.a_exponent
    }

    pub fn zero(&self) -> Cyclo<T> {
        Cyclo::zero(self.order)
    }

    pub fn one(&self) -> Cyclo<T> {
        Cyclo::one(self.order)
    }

    pub fn int(&self, k: i64) -> Cyclo<T> {
        Cyclo::from_int(self.order, k)
    }

    /// A^k.
    pub fn a_pow(&self, k: i64) -> Cyclo<T> {
        Cyclo::root_of_unity(self.order, self.a_exponent * k)
    }

    /// Chebyshev quantum integers Δ_0 = 1, Δ_1 = d, Δ_{k+1} = dΔ_k - Δ_{k-1}.
    pub fn delta(&self, k: usize) -> Cyclo<T> {
        let (mut prev, mut cur) = (self.zero(), self.one());
        for _ in 0..k {
            let next = &self.d * &cur - &prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Galois exponent j with σ_j(A) equal to the positive-d value of A (1 if none exists).
    pub fn unitary_galois(&self) -> i64 {
        let n = self.order as i64;
        let target = self.r as i64 + 1;
        (1..n)
            .filter(|j| num_integer::Integer::gcd(j, &n) == 1)
            .find(|j| (j * self.a_exponent - target).rem_euclid(n) == 0)
            .unwrap_or(1)
    }
}

/// A crossingless planar diagram from `bottom` points to `top` points.
///
/// Points are numbered 0..bottom along the bottom edge, then bottom..bottom+top along the top
/// edge, both left to right; `partner[p]` is the point joined to `p`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanarDiagram {
    bottom: u8,
    top: u8,
    partner: Vec<u8>,
}

impl PlanarDiagram {
    pub fn new(bottom: usize, top: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let m = bottom + top;
        if m % 2 == 1 || m > 250 {
            return Err(Error::Invalid(format!("no perfect matching on {m} points")));
        }
        let mut partner = vec![u8::MAX; m];
        for &(p, q) in pairs {
            if p >= m || q >= m || p == q || partner[p] != u8::MAX || partner[q] != u8::MAX {
                return Err(Error::Invalid(format!("bad pair ({p}, {q})")));
            }
            partner[p] = q as u8;
            partner[q] = p as u8;
        }
        if partner.contains(&u8::MAX) {
            return Err(Error::Invalid("matching is not perfect".into()));
        }
        let d = PlanarDiagram {
            bottom: bottom as u8,
            top: top as u8,
            partner,
        };
        if !d.is_noncrossing() {
            return Err(Error::Invalid("matching has a crossing".into()));
        }
        Ok(d)
    }

    fn from_partner(bottom: usize, top: usize, partner: Vec<u8>) -> Self {
        PlanarDiagram {
            bottom: bottom as u8,
            top: top as u8,
            partner,
        }
    }

    pub fn bottom(&self) -> usize {
        self.bottom as usize
    }

    pub fn top(&self) -> usize {
        self.top as usize
    }

    pub fn partner(&self, p: usize) -> usize {
        self.partner[p] as usize
    }

    /// Sorted pair list (p < q).
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len())
            .filter(|&p| p < self.partner(p))
            .map(|p| (p, self.partner(p)))
            .collect()
    }

    /// Position of a point on the boundary circle, counterclockwise from the bottom-left corner.
    fn cyclic(&self, p: usize) -> usize {
        let b = self.bottom();
        if p < b {
            p
        } else {
            b + self.top() - 1 - (p - b)
        }
    }

    fn from_cyclic(bottom: usize, top: usize, c: usize) -> usize {
        if c < bottom {
            c
        } else {
            bottom + top - 1 - (c - bottom)
        }
    }

    pub fn is_noncrossing(&self) -> bool {
        let pairs: Vec<(usize, usize)> = self
            .pairs()
            .into_iter()
            .map(|(p, q)| {
                let (a, b) = (self.cyclic(p), self.cyclic(q));
                (a.min(b), a.max(b))
            })
            .collect();
        pairs.iter().all(|&(a, b)| {
            pairs
                .iter()
                .all(|&(c, e)| !((a < c && c < b && b < e) || (c < a && a < e && e < b)))
        })
    }

    pub fn identity(k: usize) -> Self {
        let mut partner = vec![0u8; 2 * k];
        for i in 0..k {
            partner[i] = (k + i) as u8;
            partner[k + i] = i as u8;
        }
        Self::from_partner(k, k, partner)
    }

    /// The cup-cap generator e_i on k strands (1-based i joins positions i, i+1).
    pub fn cup_cap(k: usize, i: usize) -> Result<Self> {
        check_position(k, i)?;
        let mut d = Self::identity(k);
        let (a, b) = (i - 1, i);
        d.partner[a] = b as u8;
        d.partner[b] = a as u8;
        d.partner[k + a] = (k + b) as u8;
        d.partner[k + b] = (k + a) as u8;
        Ok(d)
    }

    /// Cup creating new top points at positions i, i+1 (1-based): k → k+2.
    pub fn cup(k: usize, i: usize) -> Result<Self> {
        if i == 0 || i > k + 1 {
            return Err(Error::Invalid(format!("cup position {i} out of range for {k} strands")));
        }
        let top = k + 2;
        let mut pairs = Vec::new();
        for j in 0..k {
            let t = if j < i - 1 { j } else { j + 2 };
            pairs.push((j, k + t));
        }
        pairs.push((k + i - 1, k + i));
        Self::new(k, top, &pairs)
    }

    /// Cap joining bottom positions i, i+1 (1-based): k → k-2.
    pub fn cap(k: usize, i: usize) -> Result<Self> {
        check_position(k, i)?;
        Ok(Self::cup(k - 2, i)?.dagger())
    }

    /// Mirror image top to bottom.
    pub fn dagger(&self) -> Self {
        let (b, t) = (self.bottom(), self.top());
        let map = |p: usize| if p < b { t + p } else { p - b };
        let mut partner = vec![0u8; b + t];
        for p in 0..b + t {
            partner[map(p)] = map(self.partner(p)) as u8;
        }
        Self::from_partner(t, b, partner)
    }

    /// Side-by-side placement, `self` on the left.
    pub fn tensor(&self, other: &Self) -> Self {
        let (b1, t1, b2, t2) = (self.bottom(), self.top(), other.bottom(), other.top());
        let b = b1 + b2;
        let left = |p: usize| if p < b1 { p } else { b + (p - b1) };
        let right = |p: usize| if p < b2 { b1 + p } else { b + t1 + (p - b2) };
        let mut partner = vec![0u8; b + t1 + t2];
        for p in 0..b1 + t1 {
            partner[left(p)] = left(self.partner(p)) as u8;
        }
        for p in 0..b2 + t2 {
            partner[right(p)] = right(other.partner(p)) as u8;
        }
        Self::from_partner(b, t1 + t2, partner)
    }

    /// Stacks `self` on top of `below`; returns the diagram and the number of closed loops.
    pub fn compose(&self, below: &Self) -> Result<(Self, usize)> {
        if below.top() != self.bottom() {
            return Err(Error::StrandMismatch {
                expected: self.bottom(),
                found: below.top(),
            });
        }
        let (bb, m, tt) = (below.bottom(), self.bottom(), self.top());
        let mut visited = vec![false; m];
        let mut partner = vec![0u8; bb + tt];
        // Outer endpoints: below-bottom 0..bb, self-top bb..bb+tt.
        let walk = |start_in_self: bool, start: usize, visited: &mut Vec<bool>| -> usize {
            let (mut in_self, mut p) = (start_in_self, start);
            loop {
                if in_self {
                    let q = self.partner(p);
                    if q >= m {
                        return bb + (q - m);
                    }
                    visited[q] = true;
                    in_self = false;
                    p = bb + q;
                } else {
                    let q = below.partner(p);
                    if q < bb {
                        return q;
                    }
                    visited[q - bb] = true;
                    in_self = true;
                    p = q - bb;
                }
            }
        };
        for (s, slot) in partner.iter_mut().enumerate().take(bb) {
            *slot = walk(false, s, &mut visited) as u8;
        }
        for s in 0..tt {
            let e = walk(true, m + s, &mut visited);
            partner[bb + s] = e as u8;
        }
        let mut loops = 0;
        for s in 0..m {
            if visited[s] {
                continue;
            }
            loops += 1;
            let mut p = s;
            loop {
                visited[p] = true;
                let q = self.partner(p);
                let r = below.partner(bb + q) - bb;
                visited[q] = true;
                p = r;
                if p == s {
                    break;
                }
            }
        }
        Ok((Self::from_partner(bb, tt, partner), loops))
    }

    /// Number of loops formed by closing an endomorphism on the right.
    pub fn closure_loops(&self) -> Result<usize> {
        if self.bottom() != self.top() {
            return Err(Error::StrandMismatch {
                expected: self.bottom(),
                found: self.top(),
            });
        }
        let k = self.bottom();
        let mut seen = vec![false; 2 * k];
        let mut loops = 0;
        for s in 0..2 * k {
            if seen[s] {
                continue;
            }
            loops += 1;
            let mut p = s;
            loop {
                seen[p] = true;
                let q = self.partner(p);
                seen[q] = true;
                p = if q < k { q + k } else { q - k };
                if p == s {
                    break;
                }
            }
        }
        Ok(loops)
    }

    /// Number of strands joining the bottom edge to the top edge.
    pub fn through_strands(&self) -> usize {
        (0..self.bottom()).filter(|&p| self.partner(p) >= self.bottom()).count()
    }

    /// All crossingless diagrams from `bottom` to `top` points, in canonical order.
    pub fn enumerate(bottom: usize, top: usize) -> Vec<Self> {
        let m = bottom + top;
        if m % 2 == 1 {
            return Vec::new();
        }
        fn intervals(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
            if lo >= hi {
                return vec![Vec::new()];
            }
            let mut res = Vec::new();
            for j in (lo + 1..hi).step_by(2) {
                for inner in intervals(lo + 1, j) {
                    for outer in intervals(j + 1, hi) {
                        let mut v = Vec::with_capacity(inner.len() + outer.len() + 1);
                        v.push((lo, j));
                        v.extend(inner.iter().copied());
                        v.extend(outer.iter().copied());
                        res.push(v);
                    }
                }
            }
            res
        }
        let mut out: Vec<Self> = intervals(0, m)
            .into_iter()
            .map(|pairs| {
                let mut partner = vec![0u8; m];
                for (a, b) in pairs {
                    let (p, q) = (Self::from_cyclic(bottom, top, a), Self::from_cyclic(bottom, top, b));
                    partner[p] = q as u8;
                    partner[q] = p as u8;
                }
                Self::from_partner(bottom, top, partner)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

fn check_position(k: usize, i: usize) -> Result<()> {
    if i == 0 || i >= k {
        return Err(Error::Invalid(format!("position {i} out of range 1..{} for {k} strands", k.max(1) - 1)));
    }
    Ok(())
}

impl fmt::Debug for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}->{}{:?}", self.bottom, self.top, self.pairs())
    }
}

/// Formal linear combination of planar diagrams with common boundary.
#[derive(Clone, PartialEq)]
pub struct SkeinElement<T> {
    bottom: usize,
    top: usize,
    order: u32,
    terms: BTreeMap<PlanarDiagram, Cyclo<T>>,
}

impl<T: Coefficient> SkeinElement<T> {
    pub fn zero(bottom: usize, top: usize, order: u32) -> Self {
        SkeinElement {
            bottom,
            top,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_diagram(d: PlanarDiagram, coeff: Cyclo<T>) -> Self {
        let mut e = Self::zero(d.bottom(), d.top(), coeff.order());
        e.add_term(d, coeff);
        e
    }

    pub fn identity(k: usize, order: u32) -> Self {
        Self::from_diagram(PlanarDiagram::identity(k), Cyclo::one(order))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<PlanarDiagram, Cyclo<T>> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: &PlanarDiagram) -> Cyclo<T> {
        self.terms.get(d).cloned().unwrap_or_else(|| Cyclo::zero(self.order))
    }

    pub fn add_term(&mut self, d: PlanarDiagram, c: Cyclo<T>) {
        assert_eq!((d.bottom(), d.top()), (self.bottom, self.top), "diagram boundary mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&d) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&d);
                }
            }
            None => {
                self.terms.insert(d, c);
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if (self.bottom, self.top) != (other.bottom, other.top) {
            return Err(Error::StrandMismatch {
                expected: self.bottom,
                found: other.bottom,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Cyclo::from_int(self.order, -1)))
    }

    pub fn scale(&self, c: &Cyclo<T>) -> Self {
        let mut out = Self::zero(self.bottom, self.top, self.order);
        for (d, x) in &self.terms {
            out.add_term(d.clone(), x * c);
        }
        out
    }

    /// Stacks `self` on top of `below`, deleting each closed loop at factor `loop_value`.
    pub fn compose(&self, below: &Self, loop_value: &Cyclo<T>) -> Result<Self> {
        if below.top != self.bottom {
            return Err(Error::StrandMismatch {
                expected: self.bottom,
                found: below.top,
            });
        }
        let mut out = Self::zero(below.bottom, self.top, self.order);
        let mut powers: Vec<Cyclo<T>> = vec![Cyclo::one(self.order)];
        for (dx, cx) in &self.terms {
            for (dy, cy) in &below.terms {
                let (d, loops) = dx.compose(dy)?;
                while powers.len() <= loops {
                    let next = powers.last().expect("nonempty") * loop_value;
                    powers.push(next);
                }
                out.add_term(d, &(cx * cy) * &powers[loops]);
            }
        }
        Ok(out)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.bottom + other.bottom, self.top + other.top, self.order);
        for (dx, cx) in &self.terms {
            for (dy, cy) in &other.terms {
                out.add_term(dx.tensor(dy), cx * cy);
            }
        }
        out
    }

    /// Mirror image with conjugated coefficients.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zero(self.top, self.bottom, self.order);
        for (d, c) in &self.terms {
            out.add_term(d.dagger(), c.conj());
        }
        out
    }

    /// Closes an endomorphism by arcs on the right and evaluates loops at `loop_value`.
    pub fn markov_trace(&self, loop_value: &Cyclo<T>) -> Result<Cyclo<T>> {
        let mut total = Cyclo::zero(self.order);
        for (d, c) in &self.terms {
            total += c * &loop_value.pow(d.closure_loops()? as i64)?;
        }
        Ok(total)
    }

    /// Scalar value of an element with no boundary points.
    pub fn scalar(&self) -> Result<Cyclo<T>> {
        if self.bottom + self.top != 0 {
            return Err(Error::NotClosed(self.bottom + self.top));
        }
        Ok(self.coeff(&PlanarDiagram::identity(0)))
    }
}

impl<T: Coefficient> fmt::Debug for SkeinElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Skein{}->{}{{", self.bottom, self.top)?;
        for (d, c) in &self.terms {
            write!(f, " [{c}] {:?};", d.pairs())?;
        }
        write!(f, " }}")
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr<C> {
    matching: Vec<(usize, usize)>,
    coeff: C,
}

#[derive(Serialize, Deserialize)]
struct SkeinRepr<C> {
    strands: (usize, usize),
    order: u32,
    terms: Vec<TermRepr<C>>,
}

impl<T: Coefficient> Serialize for SkeinElement<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SkeinRepr {
            strands: (self.bottom, self.top),
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(d, c)| TermRepr {
                    matching: d.pairs(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Coefficient> Deserialize<'de> for SkeinElement<T> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = SkeinRepr::<Cyclo<T>>::deserialize(de)?;
        let (b, t) = repr.strands;
        let mut out = SkeinElement::zero(b, t, repr.order);
        for term in repr.terms {
            let d = PlanarDiagram::new(b, t, &term.matching).map_err(D::Error::custom)?;
            let c = term.coeff.coerce(repr.order).map_err(D::Error::custom)?;
            out.add_term(d, c);
        }
        Ok(out)
    }
}

/// One horizontal slice of a tangle word, positions 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slice {
    Identity,
    CupCap(usize),
    Positive(usize),
    Negative(usize),
    Cup(usize),
    Cap(usize),
}

/// A tangle diagram written as a word of slices read from bottom to top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingTangle {
    pub bottom: usize,
    pub slices: Vec<Slice>,
}

impl CrossingTangle {
    /// Parses words such as `"X1 E2 x1"`: `X`/`x` positive/negative crossing, `E` cup-cap,
    /// `U` cup (adds two strands), `N` cap (removes two), `I` identity.
    pub fn parse(word: &str, bottom: usize) -> Result<Self> {
        let mut slices = Vec::new();
        for tok in word.split_whitespace() {
            let (head, rest) = tok.split_at(1);
            if head == "I" && rest.is_empty() {
                slices.push(Slice::Identity);
                continue;
            }
            let i: usize = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad slice {tok:?}")))?;
            slices.push(match head {
                "X" => Slice::Positive(i),
                "x" => Slice::Negative(i),
                "E" => Slice::CupCap(i),
                "U" => Slice::Cup(i),
                "N" => Slice::Cap(i),
                _ => return Err(Error::Parse(format!("bad slice {tok:?}"))),
            });
        }
        let t = CrossingTangle { bottom, slices };
        t.top()?;
        Ok(t)
    }

    /// Strand count after all slices; fails when a slice position is out of range.
    pub fn top(&self) -> Result<usize> {
        let mut w = self.bottom;
        for s in &self.slices {
            match *s {
                Slice::Identity => {}
                Slice::CupCap(i) | Slice::Positive(i) | Slice::Negative(i) => check_position(w, i)?,
                Slice::Cup(i) => {
                    if i == 0 || i > w + 1 {
                        return Err(Error::Invalid(format!("cup position {i} out of range")));
                    }
                    w += 2;
                }
                Slice::Cap(i) => {
                    check_position(w, i)?;
                    w -= 2;
                }
            }
        }
        Ok(w)
    }

    /// Kauffman expansion into crossingless diagrams.
    pub fn resolve<T: Coefficient>(&self, k: &Kauffman<T>) -> Result<SkeinElement<T>> {
        let mut acc = SkeinElement::identity(self.bottom, k.order);
        let mut w = self.bottom;
        for s in &self.slices {
            let slice = slice_element(*s, w, k)?;
            w = slice.top();
            acc = slice.compose(&acc, &k.d)?;
        }
        Ok(acc)
    }

    /// Kauffman bracket of a closed tangle.
    pub fn bracket<T: Coefficient>(&self, k: &Kauffman<T>) -> Result<Cyclo<T>> {
        let top = self.top()?;
        if self.bottom + top != 0 {
            return Err(Error::NotClosed(self.bottom + top));
        }
        self.resolve(k)?.scalar()
    }
}

/// The skein element of a single slice on `w` strands.
pub fn slice_element<T: Coefficient>(s: Slice, w: usize, k: &Kauffman<T>) -> Result<SkeinElement<T>> {
    let mut e = SkeinElement::zero(w, w, k.order);
    match s {
        Slice::Identity => e.add_term(PlanarDiagram::identity(w), k.one()),
        Slice::CupCap(i) => e.add_term(PlanarDiagram::cup_cap(w, i)?, k.one()),
        Slice::Positive(i) => {
            e.add_term(PlanarDiagram::identity(w), k.a.clone());
            e.add_term(PlanarDiagram::cup_cap(w, i)?, k.a_inv.clone());
        }
        Slice::Negative(i) => {
            e.add_term(PlanarDiagram::identity(w), k.a_inv.clone());
            e.add_term(PlanarDiagram::cup_cap(w, i)?, k.a.clone());
        }
        Slice::Cup(i) => return Ok(SkeinElement::from_diagram(PlanarDiagram::cup(w, i)?, k.one())),
        Slice::Cap(i) => return Ok(SkeinElement::from_diagram(PlanarDiagram::cap(w, i)?, k.one())),
    }
    Ok(e)
}

/// Crossing σ_i (positive) or σ_i^{-1} on `w` strands.
pub fn crossing<T: Coefficient>(w: usize, i: usize, positive: bool, k: &Kauffman<T>) -> Result<SkeinElement<T>> {
    slice_element(if positive { Slice::Positive(i) } else { Slice::Negative(i) }, w, k)
}

/// The Jones-Wenzl idempotent on k strands by Wenzl's recursion.
pub fn jones_wenzl<T: Coefficient>(k: usize, kp: &Kauffman<T>) -> Result<SkeinElement<T>> {
    if k == 0 {
        return Ok(SkeinElement::identity(0, kp.order));
    }
    let mut jw = SkeinElement::identity(1, kp.order);
    for n in 1..k {
        let dn = kp.delta(n);
        if dn.is_zero() {
            return Err(Error::VanishingQuantumInteger { k, j: n });
        }
        let ratio = &kp.delta(n - 1) * &dn.inverse()?;
        let ext = jw.tensor(&SkeinElement::identity(1, kp.order));
        let e = SkeinElement::from_diagram(PlanarDiagram::cup_cap(n + 1, n)?, kp.one());
        let middle = ext.compose(&e, &kp.d)?.compose(&ext, &kp.d)?;
        jw = ext.sub(&middle.scale(&ratio))?;
    }
    Ok(jw)
}
