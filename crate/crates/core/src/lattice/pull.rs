//! Pull-tight reduction of picture combinations to crossing-free, loop-free standard form and
//! from there to coordinates in the tree basis.

use super::moves::{apply_move, candidate_moves, Move, MoveKind, Rules};
use super::reading::read_picture;
use super::tree::{find_collared_tree, CollaredTree};
use super::{Board, Picture, PictureVector};
use crate::error::{Error, Result};
use crate::functor::{FunctorSpace, FunctorVector};
use crate::linalg::Matrix;
use crate::skein::PlanarDiagram;
use crate::{CycloNum, Level};
use num_rational::BigRational;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

/// Largest number of single-term moves explored while searching for a way to make progress.
const SEARCH_NODES: usize = 20_000;
const SEARCH_DEPTH: usize = 12;

/// One entry of a witness log.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MoveRecord {
    pub step: usize,
    #[serde(rename = "move")]
    pub mv: Option<Move>,
    pub kind: MoveKind,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct PullTight {
    /// Combination of crossing-free, loop-free pictures.
    pub vector: PictureVector,
    pub log: Vec<MoveRecord>,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub coords: FunctorVector<BigRational>,
    /// Total coefficient per arc-pairing type of the standard pictures.
    pub type_sums: Vec<(PlanarDiagram, CycloNum)>,
    pub log: Vec<MoveRecord>,
}

#[derive(Clone, Debug)]
pub struct Verification {
    pub holds: bool,
    pub reduction: Reduction,
}

/// Lexicographic change in (crossings, crossing depth, weight, proximity).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Delta {
    cross: i64,
    depth: i64,
    weight: BTreeMap<u32, i64>,
    prox: i64,
}

fn weight_cmp(a: &BTreeMap<u32, i64>, b: &BTreeMap<u32, i64>) -> Ordering {
    let keys: BTreeSet<u32> = a.keys().chain(b.keys()).copied().collect();
    for k in keys.into_iter().rev() {
        let (x, y) = (a.get(&k).copied().unwrap_or(0), b.get(&k).copied().unwrap_or(0));
        if x != y {
            return x.cmp(&y);
        }
    }
    Ordering::Equal
}

impl Delta {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cross
            .cmp(&other.cross)
            .then(self.depth.cmp(&other.depth))
            .then_with(|| weight_cmp(&self.weight, &other.weight))
            .then(self.prox.cmp(&other.prox))
    }

    fn is_decrease(&self) -> bool {
        self.cmp(&Delta::default()) == Ordering::Less
    }
}

struct Ctx<'a> {
    board: &'a Board,
    tree: &'a CollaredTree,
    kp: &'a Level,
    rules: Rules,
    /// Edge on a tether → depth along it (1 = nearest the defect).
    tether: HashMap<usize, u32>,
}

struct Step {
    records: Vec<(Option<Move>, MoveKind, String)>,
    terms: Vec<(Picture, CycloNum)>,
}

impl<'a> Ctx<'a> {
    fn new(board: &'a Board, tree: &'a CollaredTree, kp: &'a Level) -> Result<Self> {
        let mut tether = HashMap::new();
        for t in board.tethers()? {
            for (i, &e) in t.crossed.iter().enumerate() {
                tether.insert(e, i as u32 + 1);
            }
        }
        Ok(Ctx {
            board,
            tree,
            kp,
            rules: Rules::strict(),
            tether,
        })
    }

    fn crossings(&self, p: &Picture) -> (usize, u64) {
        let mut n = 0;
        let mut depth = 0;
        for (&e, &k) in &self.tether {
            if p.has_edge(e) {
                n += 1;
                depth += k as u64;
            }
        }
        (n, depth)
    }

    fn box_delta(&self, p: &Picture, x: i32, y: i32) -> Option<Delta> {
        let lp = self.board.box_loop(x, y)?;
        let occ: Vec<bool> = lp.iter().map(|&h| p.half(h)).collect();
        let count = occ.iter().filter(|&&b| b).count();
        let runs = (0..8).filter(|&i| occ[i] && !occ[(i + 7) % 8]).count();
        if count == 0 || count == 8 || runs != 1 {
            return None;
        }
        let mut d = Delta::default();
        for (i, &h) in lp.iter().enumerate() {
            let s = if occ[i] { -1 } else { 1 };
            *d.weight.entry(self.tree.edge_distance(self.board, h / 2)).or_default() += s;
            d.prox += s * self.tree.proximity_raw(self.board, h);
        }
        d.weight.retain(|_, v| *v != 0);
        for e in self.board.box_edges(x, y)? {
            if let Some(&k) = self.tether.get(&e) {
                let before = p.has_edge(e);
                let (a, b) = (p.half(2 * e), p.half(2 * e + 1));
                let after = !a && !b;
                if before != after {
                    let s = if after { 1 } else { -1 };
                    d.cross += s;
                    d.depth += s * k as i64;
                }
            }
        }
        Some(d)
    }

    fn is_standard(&self, p: &Picture) -> bool {
        self.crossings(p).0 == 0 && closed_loops(self.board, p).is_empty()
    }

    fn step(&self, p: &Picture) -> Result<Step> {
        let board = self.board;
        let mut boxes = BTreeSet::new();
        for e in p.touched_edges() {
            boxes.extend(board.boxes_of_edge(e));
        }
        for &(x, y) in &boxes {
            let m = Move::Circle { x, y };
            if let Ok(out) = apply_move(board, &self.rules, p, &m, self.kp) {
                return Ok(Step {
                    records: vec![(Some(m), out.kind, String::new())],
                    terms: out.terms,
                });
            }
        }
        for lp in closed_loops(board, p) {
            if let Some(q) = strip_innermost(board, p, &lp) {
                let v = board.endpoints(lp[0]).0;
                return Ok(Step {
                    records: vec![(None, MoveKind::Circle, format!("shrink loop of {} bonds through {v:?}", lp.len()))],
                    terms: vec![(q, self.kp.d.clone())],
                });
            }
        }
        let (cross, depth) = self.crossings(p);
        if let Some(s) = self.reducing_undercrossing(p, cross) {
            return Ok(s);
        }
        let mut cands: Vec<(Delta, (i32, i32))> = boxes
            .iter()
            .filter_map(|&(x, y)| self.box_delta(p, x, y).filter(Delta::is_decrease).map(|d| (d, (x, y))))
            .collect();
        cands.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, (x, y)) in cands {
            let m = Move::Box { x, y };
            if let Ok(out) = apply_move(board, &self.rules, p, &m, self.kp) {
                return Ok(Step {
                    records: vec![(Some(m), out.kind, String::new())],
                    terms: out.terms,
                });
            }
        }
        self.search(p, cross, depth)
    }

    fn reducing_undercrossing(&self, p: &Picture, cross: usize) -> Option<Step> {
        for &e in self.board.defects() {
            let m = Move::Undercrossing { edge: e };
            if let Ok(out) = apply_move(self.board, &self.rules, p, &m, self.kp) {
                if out.terms.iter().all(|(q, _)| self.crossings(q).0 < cross) {
                    return Some(Step {
                        records: vec![(Some(m), out.kind, String::new())],
                        terms: out.terms,
                    });
                }
            }
        }
        None
    }

    /// Breadth-first search over single-term box moves that never add crossings, for a picture
    /// with fewer or shallower crossings or with a crossing-reducing undercrossing.
    fn search(&self, p: &Picture, cross: usize, depth: u64) -> Result<Step> {
        let mut seen: HashSet<Picture> = HashSet::from([p.clone()]);
        let mut queue: VecDeque<(Picture, CycloNum, Vec<Move>, usize)> = VecDeque::new();
        queue.push_back((p.clone(), self.kp.one(), Vec::new(), 0));
        while let Some((q, c, path, level)) = queue.pop_front() {
            if level >= SEARCH_DEPTH {
                continue;
            }
            for m in candidate_moves(self.board, &q) {
                let Move::Box { .. } = m else { continue };
                let Ok(out) = apply_move(self.board, &self.rules, &q, &m, self.kp) else {
                    continue;
                };
                let (next, k) = out.terms[0].clone();
                let (nc, nd) = self.crossings(&next);
                if nc > cross || seen.contains(&next) {
                    continue;
                }
                let coeff = &c * &k;
                let mut moves = path.clone();
                moves.push(m);
                let goal = nc < cross || (nc == cross && nd < depth) || self.reducing_undercrossing(&next, nc).is_some();
                if goal {
                    let records = moves
                        .iter()
                        .map(|&m| (Some(m), MoveKind::Isotopy, "search".to_string()))
                        .collect();
                    return Ok(Step {
                        records,
                        terms: vec![(next, coeff)],
                    });
                }
                if seen.len() >= SEARCH_NODES {
                    break;
                }
                seen.insert(next.clone());
                queue.push_back((next, coeff, moves, level + 1));
            }
            if seen.len() >= SEARCH_NODES {
                break;
            }
        }
        Err(Error::PullTightExhausted(format!(
            "{cross} crossings remain after searching {} pictures:\n{}",
            seen.len(),
            p.render(self.board)
        )))
    }
}

/// Edge sets of closed components, each as a cyclic edge sequence.
fn closed_loops(board: &Board, p: &Picture) -> Vec<Vec<usize>> {
    let mut seen: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    for e in p.touched_edges() {
        if seen.contains(&e) || !p.has_edge(e) {
            continue;
        }
        let mut comp = vec![e];
        seen.insert(e);
        let mut closed = true;
        for start in [board.endpoints(e).0, board.endpoints(e).1] {
            let mut prev = e;
            let mut v = start;
            loop {
                let next: Vec<(usize, Option<_>)> =
                    p.neighbors(board, v).into_iter().filter(|&(f, _)| f != prev).collect();
                if next.len() != 1 || v == board.root() {
                    closed = false;
                    break;
                }
                let (f, w) = next[0];
                if f == e {
                    break;
                }
                let Some(w) = w else {
                    closed = false;
                    break;
                };
                if !seen.insert(f) {
                    break;
                }
                comp.push(f);
                prev = f;
                v = w;
            }
            if closed {
                break;
            }
        }
        if closed {
            out.push(comp);
        }
    }
    out
}

/// Removes a closed loop whose interior holds no picture; tethers may pass beneath it.
fn strip_innermost(board: &Board, p: &Picture, lp: &[usize]) -> Option<Picture> {
    let on: HashSet<usize> = lp.iter().copied().collect();
    let inside = |x: i32, y: i32| -> bool {
        let mut k = 0;
        for xx in 0..=x {
            if let Some(v) = board.v_edge(xx, y) {
                if on.contains(&v) {
                    k += 1;
                }
            }
        }
        k % 2 == 1
    };
    for h in p.occupied_halves() {
        let f = h / 2;
        if on.contains(&f) {
            continue;
        }
        if board.boxes_of_edge(f).iter().any(|&(x, y)| inside(x, y)) {
            return None;
        }
    }
    let mut q = p.clone();
    for &f in lp {
        q.set_edge(f, false);
    }
    Some(q)
}

fn tree_for(board: &Board) -> Result<CollaredTree> {
    find_collared_tree(board).ok_or_else(|| Error::NotRoomy("no collared tree fits the board".into()))
}

/// Drives every term to standard form, merging equal pictures as they appear.
pub fn pull_tight(board: &Board, v: &PictureVector, kp: &Level) -> Result<PullTight> {
    let tree = tree_for(board)?;
    let ctx = Ctx::new(board, &tree, kp)?;
    for p in v.terms.keys() {
        if !p.check_admissible(board) {
            return Err(Error::Invalid("pull-tight input has an inadmissible picture".into()));
        }
    }
    let mut done = PictureVector::new();
    let mut work = v.clone();
    let mut log = Vec::new();
    let mut step = 0;
    while let Some((p, c)) = work.terms.pop_first() {
        if ctx.is_standard(&p) {
            done.add_term(p, c);
            continue;
        }
        let s = ctx.step(&p)?;
        for (mv, kind, detail) in s.records {
            log.push(MoveRecord { step, mv, kind, detail });
        }
        step += 1;
        for (q, k) in s.terms {
            work.add_term(q, &c * &k);
        }
    }
    Ok(PullTight { vector: done, log })
}

/// The smooth reading of one picture in tree-basis coordinates.
pub fn smooth_reading(board: &Board, p: &Picture, space: &FunctorSpace<BigRational>) -> Result<FunctorVector<BigRational>> {
    space.project(&read_picture(board, p, space.level())?)
}

/// Pull tight, classify standard pictures by arc-pairing type and expand each type in the
/// tree basis.
pub fn reduce_picture(board: &Board, v: &PictureVector, space: &FunctorSpace<BigRational>) -> Result<Reduction> {
    let kp = space.level();
    let pt = pull_tight(board, v, kp)?;
    let mut types: BTreeMap<PlanarDiagram, CycloNum> = BTreeMap::new();
    for (p, c) in &pt.vector.terms {
        let s = read_picture(board, p, kp)?;
        for (d, a) in s.terms() {
            let slot = types.entry(d.clone()).or_insert_with(|| kp.zero());
            *slot = &*slot + &(a * c);
        }
    }
    types.retain(|_, c| !c.is_zero());
    let mut coords = FunctorVector {
        coords: vec![kp.zero(); space.dim()],
    };
    for (d, c) in &types {
        let x = crate::skein::SkeinElement::from_diagram(d.clone(), c.clone());
        coords = coords.add(&space.project(&x)?);
    }
    Ok(Reduction {
        coords,
        type_sums: types.into_iter().collect(),
        log: pt.log,
    })
}

/// True iff the relation reduces to zero; the reduction's move log is the witness.
pub fn verify_relation(board: &Board, rel: &PictureVector, space: &FunctorSpace<BigRational>) -> Result<Verification> {
    let reduction = reduce_picture(board, rel, space)?;
    Ok(Verification {
        holds: reduction.coords.is_zero(),
        reduction,
    })
}

/// A basis of the relations among `samples` that hold in the smooth reading.
pub fn smooth_radical_generators(
    board: &Board,
    samples: &[Picture],
    space: &FunctorSpace<BigRational>,
) -> Result<Vec<PictureVector>> {
    let cols: Vec<FunctorVector<BigRational>> =
        samples.iter().map(|p| smooth_reading(board, p, space)).collect::<Result<_>>()?;
    let m = Matrix::from_fn(space.dim(), samples.len(), |i, j| cols[j].coords[i].clone());
    Ok(m.nullspace()
        .into_iter()
        .map(|null| {
            let mut v = PictureVector::new();
            for (p, c) in samples.iter().zip(null) {
                v.add_term(p.clone(), c);
            }
            v
        })
        .collect())
}
