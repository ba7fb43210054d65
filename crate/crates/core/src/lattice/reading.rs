//! The smooth reading of a lattice picture: each defect is joined to the boundary by a tether
//! running diagonally down-right beneath the picture, and the resulting tangle is evaluated by
//! the Kauffman state sum into Temperley-Lieb diagrams from the defects to the root.

use super::{Board, Picture, Vertex};
use crate::error::{Error, Result};
use crate::skein::{PlanarDiagram, SkeinElement};
use crate::{CycloNum, Level, Skein};
use std::collections::HashMap;

/// Largest number of picture/tether crossings the state sum accepts.
const MAX_CROSSINGS: usize = 22;

/// The ray from a defect in direction (1, -1) to the boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tether {
    pub defect: usize,
    pub edge: usize,
    /// x + y of the doubled midpoint; orders the exit points counterclockwise.
    pub key: i32,
    /// Edges whose midpoints lie on the ray, nearest first.
    pub crossed: Vec<usize>,
}

impl Board {
    pub fn tether(&self, defect: usize) -> Result<Tether> {
        let e = self.defects()[defect];
        let (x0, y0) = self.midpoint(e);
        let (w2, _) = (2 * self.boxes_x() as i32, 2 * self.boxes_y() as i32);
        let mut crossed = Vec::new();
        let mut k = 1;
        loop {
            let pt = (x0 + k, y0 - k);
            if pt.0 > w2 || pt.1 < 0 {
                break;
            }
            let f = self
                .edge_at_midpoint(pt)
                .ok_or_else(|| Error::Invalid(format!("tether point {pt:?} is not a midpoint")))?;
            if self.defect_index(f).is_some() {
                return Err(Error::Invalid(format!("tether of defect {defect} passes through another defect")));
            }
            crossed.push(f);
            if pt.0 == w2 || pt.1 == 0 {
                break;
            }
            k += 1;
        }
        Ok(Tether {
            defect,
            edge: e,
            key: x0 + y0,
            crossed,
        })
    }

    pub fn tethers(&self) -> Result<Vec<Tether>> {
        (0..self.defects().len()).map(|d| self.tether(d)).collect()
    }

    /// Defect indices in counterclockwise order of their tether exits.
    pub fn input_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.defects().len()).collect();
        idx.sort_by_key(|&d| {
            let m = self.midpoint(self.defects()[d]);
            m.0 + m.1
        });
        idx
    }

    /// Number of occupied tether crossings in a picture.
    pub fn crossing_count(&self, p: &Picture) -> Result<usize> {
        Ok(self
            .tethers()?
            .iter()
            .flat_map(|t| t.crossed.iter())
            .filter(|&&e| p.has_edge(e))
            .count())
    }
}

type Pt = (i32, i32);

fn vpt(v: Vertex) -> Pt {
    (2 * v.0, 2 * v.1)
}

struct Tangle {
    adj: HashMap<Pt, Vec<Pt>>,
    crossings: Vec<Pt>,
    terminals: Vec<Pt>,
}

fn build_tangle(board: &Board, p: &Picture) -> Result<Tangle> {
    let mut adj: HashMap<Pt, Vec<Pt>> = HashMap::new();
    for h in p.occupied_halves() {
        let e = h / 2;
        let v = vpt(board.half_vertex(h));
        let m = board.midpoint(e);
        adj.entry(v).or_default().push(m);
        adj.entry(m).or_default().push(v);
    }
    let order = board.input_order();
    let mut terminals = vec![(0, 0); order.len() + 1];
    let mut crossings = Vec::new();
    for (rank, &d) in order.iter().enumerate() {
        let t = board.tether(d)?;
        let exit = (1_000_000 + rank as i32, -1_000_000);
        terminals[rank] = exit;
        let mut prev = board.midpoint(t.edge);
        if !p.is_endpoint(t.edge) {
            return Err(Error::Invalid(format!("defect {d} does not have valence 1")));
        }
        for &f in &t.crossed {
            if p.has_edge(f) {
                let c = board.midpoint(f);
                adj.entry(prev).or_default().push(c);
                adj.entry(c).or_default().push(prev);
                crossings.push(c);
                prev = c;
            }
        }
        adj.entry(prev).or_default().push(exit);
        adj.entry(exit).or_default().push(prev);
    }
    terminals[order.len()] = vpt(board.root());
    for (pt, nb) in adj.iter_mut() {
        if crossings.contains(pt) {
            let dir = |q: &Pt| {
                let (dx, dy) = if q.0 >= 1_000_000 { (1, -1) } else { (q.0 - pt.0, q.1 - pt.1) };
                (dy as f64).atan2(dx as f64).rem_euclid(std::f64::consts::TAU)
            };
            nb.sort_by(|a, b| dir(a).total_cmp(&dir(b)));
            let over = |q: &Pt| q.0 < 1_000_000 && (q.0 - pt.0 == 0 || q.1 - pt.1 == 0);
            let first = nb.iter().position(over).expect("crossing has picture arms");
            nb.rotate_left(first);
        } else if terminals.contains(pt) {
            if nb.len() != 1 {
                return Err(Error::Invalid(format!("terminal {pt:?} has valence {}", nb.len())));
            }
        } else if nb.len() != 2 {
            return Err(Error::Invalid(format!("point {pt:?} has valence {}", nb.len())));
        }
    }
    if adj.get(&vpt(board.root())).map_or(0, Vec::len) != 1 {
        return Err(Error::Invalid("root does not have valence 1".into()));
    }
    Ok(Tangle {
        adj,
        crossings,
        terminals,
    })
}

/// Evaluates the picture as a Temperley-Lieb element from the defects (in tether-exit order)
/// to the single root point.
pub fn read_picture(board: &Board, p: &Picture, kp: &Level) -> Result<Skein> {
    if board.r() != kp.r {
        return Err(Error::Invalid(format!("board level {} differs from {}", board.r(), kp.r)));
    }
    let t = build_tangle(board, p)?;
    let nc = t.crossings.len();
    if nc > MAX_CROSSINGS {
        return Err(Error::Invalid(format!("{nc} tether crossings exceed the state-sum limit")));
    }
    let nt = t.terminals.len();
    let cindex: HashMap<Pt, usize> = t.crossings.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let tindex: HashMap<Pt, usize> = t.terminals.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let port_of = |node: Pt, from: Pt| -> usize {
        if let Some(&i) = tindex.get(&node) {
            i
        } else {
            let j = cindex[&node];
            let a = t.adj[&node].iter().position(|&q| q == from).expect("arm");
            nt + 4 * j + a
        }
    };
    let mut visited: HashMap<Pt, bool> = HashMap::new();
    let mut walk = |start: Pt, first: Pt| -> usize {
        let (mut prev, mut cur) = (start, first);
        loop {
            if tindex.contains_key(&cur) || cindex.contains_key(&cur) {
                return port_of(cur, prev);
            }
            visited.insert(cur, true);
            let nb = &t.adj[&cur];
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
    };
    let nports = nt + 4 * nc;
    let mut seg = vec![usize::MAX; nports];
    for (i, &term) in t.terminals.iter().enumerate() {
        seg[i] = walk(term, t.adj[&term][0]);
    }
    for (j, &c) in t.crossings.iter().enumerate() {
        for a in 0..4 {
            seg[nt + 4 * j + a] = walk(c, t.adj[&c][a]);
        }
    }
    let mut free_loops = 0usize;
    let mut rest: Vec<Pt> = t
        .adj
        .keys()
        .filter(|q| !visited.contains_key(q) && !tindex.contains_key(q) && !cindex.contains_key(q))
        .copied()
        .collect();
    rest.sort();
    for start in rest {
        if visited.contains_key(&start) {
            continue;
        }
        free_loops += 1;
        let (mut prev, mut cur) = (start, t.adj[&start][0]);
        visited.insert(start, true);
        while cur != start {
            visited.insert(cur, true);
            let nb = &t.adj[&cur];
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
    }
    let max_pow = nc + free_loops + nc;
    let mut dpow = vec![kp.one()];
    for k in 1..=max_pow {
        dpow.push(&dpow[k - 1] * &kp.d);
    }
    let mut acc: HashMap<Vec<(usize, usize)>, CycloNum> = HashMap::new();
    let mut used = vec![false; nports];
    for mask in 0u64..(1u64 << nc) {
        let smooth = |q: usize| -> usize {
            let j = (q - nt) / 4;
            let a = (q - nt) % 4;
            let b = if mask >> j & 1 == 0 { [3, 2, 1, 0][a] } else { [1, 0, 3, 2][a] };
            nt + 4 * j + b
        };
        used.iter_mut().for_each(|u| *u = false);
        let mut pairs = Vec::with_capacity(nt / 2);
        for s in 0..nt {
            if used[s] {
                continue;
            }
            used[s] = true;
            let mut cur = seg[s];
            while cur >= nt {
                used[cur] = true;
                let q = smooth(cur);
                used[q] = true;
                cur = seg[q];
            }
            used[cur] = true;
            pairs.push((s.min(cur), s.max(cur)));
        }
        let mut loops = free_loops;
        for s in nt..nports {
            if used[s] {
                continue;
            }
            loops += 1;
            let mut cur = s;
            while !used[cur] {
                used[cur] = true;
                let q = smooth(cur);
                used[q] = true;
                cur = seg[q];
            }
        }
        let nb = mask.count_ones() as i64;
        let coeff = &kp.a_pow(nc as i64 - 2 * nb) * &dpow[loops];
        pairs.sort_unstable();
        let slot = acc.entry(pairs).or_insert_with(|| kp.zero());
        *slot = &*slot + &coeff;
    }
    let n = nt - 1;
    let mut out = SkeinElement::zero(n, 1, kp.order);
    let mut keys: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0));
    for (pairs, c) in keys {
        let d = PlanarDiagram::new(n, 1, &pairs)?;
        out = out.add(&SkeinElement::from_diagram(d, c))?;
    }
    Ok(out)
}
