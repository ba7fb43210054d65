//! Lattice picture calculus on a square-cellulated rectangle with defects at edge midpoints.
//!
//! Every edge carries two half-bonds, one at each endpoint. Ordinary edges are occupied on both
//! halves or neither; a defect edge has exactly one occupied half (its arm).

mod moves;
mod pull;
mod random;
mod reading;
mod routing;
mod tree;

pub use moves::{apply_move, candidate_moves, jw_sites, twist_factor, Move, MoveKind, MoveOutcome, Rules};
pub use pull::{
    pull_tight, reduce_picture, smooth_radical_generators, smooth_reading, verify_relation, MoveRecord,
    PullTight, Reduction, Verification,
};
pub use random::{add_circle, random_picture, standard_from_paths, standard_picture};
pub use reading::{read_picture, Tether};
pub use routing::{jw_routings, route_pairs, JwSite, JwSiteKind, JwTable};
pub use tree::{find_collared_tree, CollaredTree, Segment};

use crate::error::{Error, Result};
use crate::CycloNum;
use bitvec::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Lattice vertex (x, y), 0 ≤ x ≤ boxes_x, 0 ≤ y ≤ boxes_y.
pub type Vertex = (i32, i32);

/// A rectangle of boxes_x × boxes_y unit boxes with defects on edge midpoints and a root vertex
/// on the boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Board {
    boxes_x: usize,
    boxes_y: usize,
    r: u32,
    defects: Vec<usize>,
    sites: Vec<usize>,
    root: Vertex,
}

impl Board {
    /// `defects` and `extra_sites` are edge ids; every defect is also a site.
    pub fn new(
        boxes_x: usize,
        boxes_y: usize,
        r: u32,
        defects: Vec<usize>,
        root: Vertex,
        extra_sites: Vec<usize>,
    ) -> Result<Self> {
        if boxes_x == 0 || boxes_y == 0 {
            return Err(Error::Invalid("board needs at least one box".into()));
        }
        if r < 3 {
            return Err(Error::Invalid("level r must be at least 3".into()));
        }
        let mut b = Board {
            boxes_x,
            boxes_y,
            r,
            defects: Vec::new(),
            sites: Vec::new(),
            root,
        };
        let (x, y) = root;
        if !b.in_board(root) || !(x == 0 || y == 0 || x == boxes_x as i32 || y == boxes_y as i32) {
            return Err(Error::Invalid(format!("root {root:?} is not a boundary vertex")));
        }
        for &e in defects.iter().chain(&extra_sites) {
            if e >= b.edge_count() {
                return Err(Error::Invalid(format!("edge {e} outside the board")));
            }
        }
        let mut seen = defects.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != defects.len() {
            return Err(Error::Invalid("repeated defect".into()));
        }
        for &e in &defects {
            let (p, q) = b.endpoints(e);
            if p == root || q == root {
                return Err(Error::Invalid("defect edge touches the root".into()));
            }
        }
        let mut sites: Vec<usize> = defects.iter().chain(&extra_sites).copied().collect();
        sites.sort_unstable();
        sites.dedup();
        b.defects = defects;
        b.sites = sites;
        Ok(b)
    }

    /// The constructor's roomy board: `n` defects on one row spaced 9r apart, r from the
    /// boundary, with room for legs and a spine longer than 3r and the root above the last leg.
    pub fn roomy(n: usize, r: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("roomy board needs a defect".into()));
        }
        let ri = r as usize;
        let y0 = ri;
        let spine = y0 + 3 * ri + 1;
        let h = spine + 3 * ri + 1;
        let xs: Vec<usize> = (0..n).map(|k| ri + 9 * ri * k).collect();
        let w = xs[n - 1] + 1 + ri;
        let probe = Board {
            boxes_x: w,
            boxes_y: h,
            r,
            defects: Vec::new(),
            sites: Vec::new(),
            root: (0, 0),
        };
        let defects = xs.iter().map(|&x| probe.h_edge(x as i32, y0 as i32).expect("in range")).collect();
        Board::new(w, h, r, defects, (xs[n - 1] as i32, h as i32), Vec::new())
    }

    /// Same board with the defect list replaced; extra sites are kept and old defects stay sites.
    pub fn with_defects(&self, defects: Vec<usize>) -> Result<Self> {
        Board::new(self.boxes_x, self.boxes_y, self.r, defects, self.root, self.sites.clone())
    }

    pub fn boxes_x(&self) -> usize {
        self.boxes_x
    }

    pub fn boxes_y(&self) -> usize {
        self.boxes_y
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn defects(&self) -> &[usize] {
        &self.defects
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn is_site(&self, e: usize) -> bool {
        self.sites.binary_search(&e).is_ok()
    }

    pub fn defect_index(&self, e: usize) -> Option<usize> {
        self.defects.iter().position(|&d| d == e)
    }

    fn h_count(&self) -> usize {
        self.boxes_x * (self.boxes_y + 1)
    }

    pub fn edge_count(&self) -> usize {
        self.h_count() + (self.boxes_x + 1) * self.boxes_y
    }

    pub fn vertex_count(&self) -> usize {
        (self.boxes_x + 1) * (self.boxes_y + 1)
    }

    pub fn vertex_index(&self, v: Vertex) -> usize {
        v.1 as usize * (self.boxes_x + 1) + v.0 as usize
    }

    pub fn vertex_at(&self, i: usize) -> Vertex {
        ((i % (self.boxes_x + 1)) as i32, (i / (self.boxes_x + 1)) as i32)
    }

    pub fn in_board(&self, v: Vertex) -> bool {
        v.0 >= 0 && v.1 >= 0 && v.0 <= self.boxes_x as i32 && v.1 <= self.boxes_y as i32
    }

    pub fn is_boundary_vertex(&self, v: Vertex) -> bool {
        v.0 == 0 || v.1 == 0 || v.0 == self.boxes_x as i32 || v.1 == self.boxes_y as i32
    }

    /// Edge (x, y)–(x+1, y).
    pub fn h_edge(&self, x: i32, y: i32) -> Option<usize> {
        (x >= 0 && y >= 0 && (x as usize) < self.boxes_x && y as usize <= self.boxes_y)
            .then(|| y as usize * self.boxes_x + x as usize)
    }

    /// Edge (x, y)–(x, y+1).
    pub fn v_edge(&self, x: i32, y: i32) -> Option<usize> {
        (x >= 0 && y >= 0 && x as usize <= self.boxes_x && (y as usize) < self.boxes_y)
            .then(|| self.h_count() + y as usize * (self.boxes_x + 1) + x as usize)
    }

    pub fn edge_between(&self, a: Vertex, b: Vertex) -> Option<usize> {
        let (p, q) = if a <= b { (a, b) } else { (b, a) };
        match (q.0 - p.0, q.1 - p.1) {
            (1, 0) => self.h_edge(p.0, p.1),
            (0, 1) => self.v_edge(p.0, p.1),
            _ => None,
        }
    }

    pub fn is_horizontal(&self, e: usize) -> bool {
        e < self.h_count()
    }

    /// Endpoints with the left/bottom one first.
    pub fn endpoints(&self, e: usize) -> (Vertex, Vertex) {
        if e < self.h_count() {
            let (x, y) = ((e % self.boxes_x) as i32, (e / self.boxes_x) as i32);
            ((x, y), (x + 1, y))
        } else {
            let k = e - self.h_count();
            let (x, y) = ((k % (self.boxes_x + 1)) as i32, (k / (self.boxes_x + 1)) as i32);
            ((x, y), (x, y + 1))
        }
    }

    /// Midpoint in doubled coordinates.
    pub fn midpoint(&self, e: usize) -> (i32, i32) {
        let (p, q) = self.endpoints(e);
        (p.0 + q.0, p.1 + q.1)
    }

    /// Edge whose midpoint has the given doubled coordinates.
    pub fn edge_at_midpoint(&self, m: (i32, i32)) -> Option<usize> {
        match (m.0.rem_euclid(2), m.1.rem_euclid(2)) {
            (1, 0) => self.h_edge((m.0 - 1) / 2, m.1 / 2),
            (0, 1) => self.v_edge(m.0 / 2, (m.1 - 1) / 2),
            _ => None,
        }
    }

    pub fn incident(&self, v: Vertex) -> impl Iterator<Item = usize> + '_ {
        let (x, y) = v;
        [self.h_edge(x - 1, y), self.h_edge(x, y), self.v_edge(x, y - 1), self.v_edge(x, y)]
            .into_iter()
            .flatten()
    }

    /// Half-bond of `e` at its endpoint `v`.
    pub fn half_at(&self, e: usize, v: Vertex) -> usize {
        let (p, _) = self.endpoints(e);
        2 * e + usize::from(p != v)
    }

    /// Vertex touched by a half-bond.
    pub fn half_vertex(&self, h: usize) -> Vertex {
        let (p, q) = self.endpoints(h / 2);
        if h.is_multiple_of(2) {
            p
        } else {
            q
        }
    }

    /// Box with lower-left corner (x, y).
    pub fn has_box(&self, x: i32, y: i32) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.boxes_x && (y as usize) < self.boxes_y
    }

    /// Edges of box (x, y): bottom, right, top, left.
    pub fn box_edges(&self, x: i32, y: i32) -> Option<[usize; 4]> {
        if !self.has_box(x, y) {
            return None;
        }
        Some([
            self.h_edge(x, y)?,
            self.v_edge(x + 1, y)?,
            self.h_edge(x, y + 1)?,
            self.v_edge(x, y)?,
        ])
    }

    /// The eight half-bonds around box (x, y) in counterclockwise order from (x, y).
    pub fn box_loop(&self, x: i32, y: i32) -> Option<[usize; 8]> {
        let [b, r, t, l] = self.box_edges(x, y)?;
        Some([2 * b, 2 * b + 1, 2 * r, 2 * r + 1, 2 * t + 1, 2 * t, 2 * l + 1, 2 * l])
    }

    /// Boxes having `e` on their boundary.
    pub fn boxes_of_edge(&self, e: usize) -> Vec<(i32, i32)> {
        let ((x, y), _) = self.endpoints(e);
        let cand = if self.is_horizontal(e) { [(x, y - 1), (x, y)] } else { [(x - 1, y), (x, y)] };
        cand.into_iter().filter(|&(a, b)| self.has_box(a, b)).collect()
    }

    /// Serializable description.
    pub fn to_file(&self) -> BoardFile {
        let coord = |e: usize| {
            let m = self.midpoint(e);
            [m.0 as f64 / 2.0, m.1 as f64 / 2.0]
        };
        BoardFile {
            boxes_x: self.boxes_x,
            boxes_y: self.boxes_y,
            r: self.r,
            defects: self.defects.iter().map(|&e| coord(e)).collect(),
            root: [self.root.0, self.root.1],
            sites: self.sites.iter().filter(|e| !self.defects.contains(e)).map(|&e| coord(e)).collect(),
        }
    }

    pub fn from_file(f: &BoardFile) -> Result<Self> {
        let probe = Board {
            boxes_x: f.boxes_x.max(1),
            boxes_y: f.boxes_y.max(1),
            r: f.r,
            defects: Vec::new(),
            sites: Vec::new(),
            root: (0, 0),
        };
        let edge = |c: &[f64; 2]| -> Result<usize> {
            let m = ((c[0] * 2.0).round() as i32, (c[1] * 2.0).round() as i32);
            if ((m.0 as f64) / 2.0 - c[0]).abs() > 1e-9 || ((m.1 as f64) / 2.0 - c[1]).abs() > 1e-9 {
                return Err(Error::Parse(format!("{c:?} is not on the midpoint lattice")));
            }
            probe
                .edge_at_midpoint(m)
                .ok_or_else(|| Error::Parse(format!("{c:?} is not an edge midpoint of the board")))
        };
        let defects = f.defects.iter().map(edge).collect::<Result<_>>()?;
        let sites = f.sites.iter().map(edge).collect::<Result<_>>()?;
        Board::new(f.boxes_x, f.boxes_y, f.r, defects, (f.root[0], f.root[1]), sites)
    }
}

/// JSON form of a board; defects and extra sites are midpoints with one half-integer coordinate.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoardFile {
    pub boxes_x: usize,
    pub boxes_y: usize,
    pub r: u32,
    pub defects: Vec<[f64; 2]>,
    pub root: [i32; 2],
    #[serde(default)]
    pub sites: Vec<[f64; 2]>,
}

/// JSON form of a picture: fully occupied edge ids plus half-occupied `[edge, side]` pairs,
/// side 0 being the half at the left/bottom endpoint.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PictureFile {
    #[serde(flatten)]
    pub board: BoardFile,
    pub occupied: Vec<usize>,
    #[serde(default)]
    pub half_edges: Vec<[usize; 2]>,
}

/// A set of occupied half-bonds.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Picture {
    bits: BitVec<u64, Lsb0>,
}

impl Picture {
    pub fn empty(board: &Board) -> Self {
        Picture {
            bits: bitvec![u64, Lsb0; 0; 2 * board.edge_count()],
        }
    }

    pub fn from_edges(board: &Board, full: &[usize], halves: &[(usize, usize)]) -> Result<Self> {
        let mut p = Self::empty(board);
        for &e in full {
            if e >= board.edge_count() {
                return Err(Error::Invalid(format!("edge {e} outside the board")));
            }
            p.bits.set(2 * e, true);
            p.bits.set(2 * e + 1, true);
        }
        for &(e, s) in halves {
            if e >= board.edge_count() || s > 1 {
                return Err(Error::Invalid(format!("bad half-edge ({e}, {s})")));
            }
            p.bits.set(2 * e + s, true);
        }
        Ok(p)
    }

    pub fn from_file(f: &PictureFile) -> Result<(Board, Self)> {
        let board = Board::from_file(&f.board)?;
        let halves: Vec<(usize, usize)> = f.half_edges.iter().map(|h| (h[0], h[1])).collect();
        let p = Self::from_edges(&board, &f.occupied, &halves)?;
        Ok((board, p))
    }

    pub fn to_file(&self, board: &Board) -> PictureFile {
        let mut occupied = Vec::new();
        let mut half_edges = Vec::new();
        for e in 0..board.edge_count() {
            match self.edge_state(e) {
                (true, true) => occupied.push(e),
                (true, false) => half_edges.push([e, 0]),
                (false, true) => half_edges.push([e, 1]),
                _ => {}
            }
        }
        PictureFile {
            board: board.to_file(),
            occupied,
            half_edges,
        }
    }

    pub fn half(&self, h: usize) -> bool {
        self.bits[h]
    }

    pub fn set_half(&mut self, h: usize, v: bool) {
        self.bits.set(h, v);
    }

    pub fn toggle_half(&mut self, h: usize) {
        let v = self.bits[h];
        self.bits.set(h, !v);
    }

    pub fn set_edge(&mut self, e: usize, v: bool) {
        self.bits.set(2 * e, v);
        self.bits.set(2 * e + 1, v);
    }

    pub fn toggle_edge(&mut self, e: usize) {
        self.toggle_half(2 * e);
        self.toggle_half(2 * e + 1);
    }

    pub fn edge_state(&self, e: usize) -> (bool, bool) {
        (self.bits[2 * e], self.bits[2 * e + 1])
    }

    /// Both halves occupied.
    pub fn has_edge(&self, e: usize) -> bool {
        self.bits[2 * e] && self.bits[2 * e + 1]
    }

    /// Exactly one half occupied.
    pub fn is_endpoint(&self, e: usize) -> bool {
        self.bits[2 * e] != self.bits[2 * e + 1]
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    pub fn occupied_halves(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    /// Edges with at least one occupied half.
    pub fn touched_edges(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.bits.iter_ones().map(|h| h / 2).collect();
        v.dedup();
        v
    }

    pub fn half_count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn valence(&self, board: &Board, v: Vertex) -> usize {
        board.incident(v).filter(|&e| self.bits[board.half_at(e, v)]).count()
    }

    /// Manifold and boundary conditions: interior vertices of valence 0 or 2, root of valence 1,
    /// defect edges with exactly one occupied half, every other edge fully occupied or empty.
    pub fn check_admissible(&self, board: &Board) -> bool {
        for i in 0..board.vertex_count() {
            let v = board.vertex_at(i);
            let val = self.valence(board, v);
            let ok = if v == board.root { val == 1 } else { val == 0 || val == 2 };
            if !ok {
                return false;
            }
        }
        (0..board.edge_count()).all(|e| {
            let endpoint = self.is_endpoint(e);
            if board.defect_index(e).is_some() {
                endpoint
            } else {
                !endpoint
            }
        })
    }

    /// Neighbors of a vertex along occupied half-bonds, as (edge, other end) where the other end
    /// is a vertex for full edges and `None` for an arm ending at a midpoint.
    pub fn neighbors(&self, board: &Board, v: Vertex) -> Vec<(usize, Option<Vertex>)> {
        board
            .incident(v)
            .filter(|&e| self.bits[board.half_at(e, v)])
            .map(|e| {
                let (p, q) = board.endpoints(e);
                let other = if p == v { q } else { p };
                (e, self.has_edge(e).then_some(other))
            })
            .collect()
    }

    pub fn render(&self, board: &Board) -> String {
        let mut out = String::new();
        for y in (0..=board.boxes_y as i32).rev() {
            for x in 0..=board.boxes_x as i32 {
                out.push(if (x, y) == board.root { 'R' } else { '+' });
                if let Some(e) = board.h_edge(x, y) {
                    let c = match self.edge_state(e) {
                        (true, true) => "---",
                        (true, false) => "-* ",
                        (false, true) => " *-",
                        _ if board.defect_index(e).is_some() => " * ",
                        _ => "   ",
                    };
                    out.push_str(c);
                }
            }
            out.push('\n');
            if y > 0 {
                for x in 0..=board.boxes_x as i32 {
                    let e = board.v_edge(x, y - 1).expect("in range");
                    let c = match self.edge_state(e) {
                        (true, true) => '|',
                        (true, false) | (false, true) => '*',
                        _ if board.defect_index(e).is_some() => '.',
                        _ => ' ',
                    };
                    out.push(c);
                    out.push_str("   ");
                }
                out.push('\n');
            }
        }
        out
    }
}

impl fmt::Debug for Picture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ones: Vec<usize> = self.bits.iter_ones().collect();
        write!(f, "Picture{ones:?}")
    }
}

/// Formal combination of pictures on one board.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PictureVector {
    pub terms: BTreeMap<Picture, CycloNum>,
}

impl PictureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(p: Picture, c: CycloNum) -> Self {
        let mut v = Self::new();
        v.add_term(p, c);
        v
    }

    pub fn add_term(&mut self, p: Picture, c: CycloNum) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(p);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        let mut out = Self::new();
        for (p, a) in &self.terms {
            out.add_term(p.clone(), a * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}
