//! Local moves p = Σ cᵢ pᵢ. Every move reads and writes only a bounded patch of half-bonds and
//! checks only local conditions there, so the same functions drive both picture reductions and
//! the Hamiltonian terms.

use super::routing::{jw_routings, JwSite, JwSiteKind};
use super::{Board, Picture, Vertex};
use crate::error::{Error, Result};
use crate::{CycloNum, Level};
use serde::Serialize;
use std::collections::BTreeSet;

/// Which edges may carry any half-bond pattern (used for sites a defect is moving between).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rules {
    relaxed: Vec<usize>,
}

impl Rules {
    pub fn strict() -> Self {
        Rules::default()
    }

    pub fn relaxed(mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Rules { relaxed: edges }
    }

    pub fn is_relaxed(&self, e: usize) -> bool {
        self.relaxed.binary_search(&e).is_ok()
    }

    pub fn relaxed_edges(&self) -> &[usize] {
        &self.relaxed
    }

    pub fn edge_ok(&self, board: &Board, p: &Picture, e: usize) -> bool {
        if self.is_relaxed(e) {
            true
        } else if board.defect_index(e).is_some() {
            p.is_endpoint(e)
        } else {
            !p.is_endpoint(e)
        }
    }

    pub fn vertex_ok(&self, board: &Board, p: &Picture, v: Vertex) -> bool {
        let val = p.valence(board, v);
        if v == board.root() {
            val == 1
        } else {
            val == 0 || val == 2
        }
    }

    /// Admissibility with the relaxed edges unconstrained.
    pub fn admissible(&self, board: &Board, p: &Picture) -> bool {
        (0..board.vertex_count()).all(|i| self.vertex_ok(board, p, board.vertex_at(i)))
            && (0..board.edge_count()).all(|e| self.edge_ok(board, p, e))
    }
}

/// A move site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "move", rename_all = "camelCase")]
pub enum Move {
    /// Exchange the picture's arc on the boundary of box (x, y) for the complementary arc.
    Box { x: i32, y: i32 },
    /// Remove the unit circle around box (x, y).
    Circle { x: i32, y: i32 },
    /// Resolve the crossing of a strand with the tether next to the endpoint on `edge`.
    Undercrossing { edge: usize },
    /// Expand the identity pattern of a Jones-Wenzl site.
    Jw(JwSite),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum MoveKind {
    Isotopy,
    Endpoint,
    Circle,
    Undercrossing,
    JwBlock,
    JwKnob,
}

/// Result of a move: the source equals Σ coefficient · picture.
#[derive(Clone, Debug)]
pub struct MoveOutcome {
    pub kind: MoveKind,
    pub terms: Vec<(Picture, CycloNum)>,
    /// Edges read or written by the move.
    pub support: Vec<usize>,
}

fn mismatch(msg: impl Into<String>) -> Error {
    Error::PatternMismatch(msg.into())
}

/// Toggles `halves` and checks every vertex and edge they touch.
fn toggled(board: &Board, rules: &Rules, p: &Picture, halves: &[usize]) -> Result<Picture> {
    let mut q = p.clone();
    for &h in halves {
        q.toggle_half(h);
    }
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for &h in halves {
        verts.insert(board.half_vertex(h));
        edges.insert(h / 2);
    }
    for v in verts {
        if !rules.vertex_ok(board, &q, v) {
            return Err(mismatch(format!("vertex {v:?} would have valence {}", q.valence(board, v))));
        }
    }
    for e in edges {
        if !rules.edge_ok(board, &q, e) {
            return Err(mismatch(format!("edge {e} would have the wrong boundary data")));
        }
    }
    Ok(q)
}

fn support_of(board: &Board, halves: &[usize]) -> Vec<usize> {
    let mut s: BTreeSet<usize> = halves.iter().map(|h| h / 2).collect();
    for &h in halves {
        s.extend(board.incident(board.half_vertex(h)));
    }
    s.into_iter().collect()
}

impl Board {
    /// Base box of an endpoint edge (below a horizontal edge, right of a vertical one) and the
    /// edge of that box crossed first by the tether.
    pub fn base_box(&self, e: usize) -> Option<((i32, i32), usize)> {
        let ((i, j), _) = self.endpoints(e);
        if self.is_horizontal(e) {
            self.has_box(i, j - 1).then(|| ((i, j - 1), self.v_edge(i + 1, j - 1).expect("box edge")))
        } else {
            self.has_box(i, j).then(|| ((i, j), self.h_edge(i, j).expect("box edge")))
        }
    }
}

/// Framing factor t of a kink at an endpoint: twisted = t · untwisted. A base-box sweep gives
/// p = t⁻¹ p′ when it moves the arm from the second half-bond to the first, p = t p′ otherwise.
pub fn twist_factor(kp: &Level) -> CycloNum {
    -kp.a_pow(3)
}

/// Local frame at an endpoint edge: v_a = at(0,0), v_b = at(1,0), base box below.
struct Frame<'a> {
    board: &'a Board,
    va: Vertex,
    vertical: bool,
}

impl Frame<'_> {
    fn at(&self, a: i32, b: i32) -> Vertex {
        if self.vertical {
            (self.va.0 - b, self.va.1 - a)
        } else {
            (self.va.0 + a, self.va.1 + b)
        }
    }

    fn edge(&self, p: (i32, i32), q: (i32, i32)) -> Option<usize> {
        let (u, v) = (self.at(p.0, p.1), self.at(q.0, q.1));
        if self.board.in_board(u) && self.board.in_board(v) {
            self.board.edge_between(u, v)
        } else {
            None
        }
    }
}

pub fn apply_move(board: &Board, rules: &Rules, p: &Picture, m: &Move, kp: &Level) -> Result<MoveOutcome> {
    match *m {
        Move::Box { x, y } => box_move(board, rules, p, x, y, kp),
        Move::Circle { x, y } => circle_move(board, rules, p, x, y, kp),
        Move::Undercrossing { edge } => undercrossing(board, rules, p, edge, kp),
        Move::Jw(site) => jw_move(board, rules, p, &site, kp),
    }
}

fn box_move(board: &Board, rules: &Rules, p: &Picture, x: i32, y: i32, kp: &Level) -> Result<MoveOutcome> {
    let lp = board.box_loop(x, y).ok_or_else(|| mismatch("box outside the board"))?;
    let occ: Vec<bool> = lp.iter().map(|&h| p.half(h)).collect();
    let count = occ.iter().filter(|&&b| b).count();
    if count == 0 {
        return Err(mismatch("no arc on the box boundary"));
    }
    if count == 8 {
        return Err(mismatch("box boundary is a closed circle"));
    }
    let runs = (0..8).filter(|&i| occ[i] && !occ[(i + 7) % 8]).count();
    if runs != 1 {
        return Err(mismatch("box boundary meets the picture in more than one arc"));
    }
    let q = toggled(board, rules, p, &lp)?;
    let edges = board.box_edges(x, y).expect("box exists");
    let mut coeff = kp.one();
    let mut kind = MoveKind::Isotopy;
    for &e in &edges {
        if !p.is_endpoint(e) {
            continue;
        }
        kind = MoveKind::Endpoint;
        if let Some((bb, _)) = board.base_box(e) {
            if bb == (x, y) {
                let t = twist_factor(kp);
                coeff = if p.half(2 * e + 1) { &coeff * &t.inverse()? } else { &coeff * &t };
            }
        }
    }
    Ok(MoveOutcome {
        kind,
        terms: vec![(q, coeff)],
        support: support_of(board, &lp),
    })
}

fn circle_move(board: &Board, rules: &Rules, p: &Picture, x: i32, y: i32, kp: &Level) -> Result<MoveOutcome> {
    let lp = board.box_loop(x, y).ok_or_else(|| mismatch("box outside the board"))?;
    if !lp.iter().all(|&h| p.half(h)) {
        return Err(mismatch("box boundary is not fully occupied"));
    }
    let edges = board.box_edges(x, y).expect("box exists");
    if edges.iter().any(|&e| board.defect_index(e).is_some() || rules.is_relaxed(e)) {
        return Err(mismatch("circle passes through a defect site"));
    }
    let q = toggled(board, rules, p, &lp)?;
    Ok(MoveOutcome {
        kind: MoveKind::Circle,
        terms: vec![(q, kp.d.clone())],
        support: support_of(board, &lp),
    })
}

fn undercrossing(board: &Board, rules: &Rules, p: &Picture, e: usize, kp: &Level) -> Result<MoveOutcome> {
    if !p.is_endpoint(e) {
        return Err(mismatch("edge is not an endpoint"));
    }
    let vertical = !board.is_horizontal(e);
    let (lo, hi) = board.endpoints(e);
    let fr = Frame {
        board,
        va: if vertical { hi } else { lo },
        vertical,
    };
    let need = |a: (i32, i32), b: (i32, i32)| fr.edge(a, b).ok_or_else(|| mismatch("frame leaves the board"));
    let h_a = board.half_at(e, fr.at(0, 0));
    let h_b = board.half_at(e, fr.at(1, 0));
    if !p.half(h_a) || p.half(h_b) {
        return Err(mismatch("endpoint arm is not on the v_a side"));
    }
    let e1 = need((1, -1), (1, 0))?;
    if !p.has_edge(e1) {
        return Err(mismatch("no strand across the tether next to the endpoint"));
    }
    let bottom = need((0, -1), (1, -1))?;
    let left_below = need((0, -1), (0, 0))?;
    let up_b = fr.edge((1, 0), (1, 1));
    let right_b = fr.edge((1, 0), (2, 0));
    let g = [up_b, right_b]
        .into_iter()
        .flatten()
        .filter(|&f| p.has_edge(f))
        .collect::<Vec<_>>();
    if g.len() != 1 {
        return Err(mismatch("strand at v_b does not continue up or right"));
    }
    let g = g[0];
    let left_a = fr.edge((0, 0), (-1, 0));
    let up_a = fr.edge((0, 0), (0, 1));
    let c = [left_a, up_a]
        .into_iter()
        .flatten()
        .filter(|&f| p.has_edge(f))
        .collect::<Vec<_>>();
    if c.len() != 1 {
        return Err(mismatch("endpoint strand does not leave v_a to the left or up"));
    }
    let c = c[0];
    let full = |f: usize| [2 * f, 2 * f + 1];
    let mut xa = vec![h_a, h_b];
    for f in [e1, bottom, left_below] {
        xa.extend(full(f));
    }
    let pa = toggled(board, rules, p, &xa)?;
    let mut path: Vec<usize> = Vec::new();
    if Some(g) == right_b {
        path.push(need((2, 0), (2, 1))?);
        path.push(need((2, 1), (1, 1))?);
    }
    path.push(need((1, 1), (0, 1))?);
    if Some(c) == left_a {
        path.push(need((0, 1), (-1, 1))?);
        path.push(need((-1, 1), (-1, 0))?);
    }
    let occupied = path.iter().filter(|&&f| p.has_edge(f)).count();
    let closes_loop = occupied == path.len();
    if occupied != 0 && !closes_loop {
        return Err(mismatch("reconnection path above the endpoint is partly occupied"));
    }
    let mut xb = Vec::new();
    for f in [e1, bottom, left_below, g, c].into_iter().chain(path) {
        xb.extend(full(f));
    }
    let pb = toggled(board, rules, p, &xb)?;
    let (ca, mut cb) = if vertical {
        (kp.a_inv.clone(), kp.a.clone())
    } else {
        (kp.a.clone(), kp.a_inv.clone())
    };
    if closes_loop {
        cb = &cb * &kp.d;
    }
    let mut all = xa.clone();
    all.extend(&xb);
    Ok(MoveOutcome {
        kind: MoveKind::Undercrossing,
        terms: vec![(pa, ca), (pb, cb)],
        support: support_of(board, &all),
    })
}

fn jw_move(board: &Board, rules: &Rules, p: &Picture, site: &JwSite, kp: &Level) -> Result<MoveOutcome> {
    let k = (board.r() - 1) as usize;
    let table = jw_routings(k, site.kind, kp)?;
    let region: Vec<usize> = table
        .region_edges
        .iter()
        .map(|&(a, b)| {
            let (u, v) = ((site.x + a.0, site.y + a.1), (site.x + b.0, site.y + b.1));
            if board.in_board(u) && board.in_board(v) {
                board.edge_between(u, v).ok_or_else(|| mismatch("site edge"))
            } else {
                Err(mismatch("site leaves the board"))
            }
        })
        .collect::<Result<_>>()?;
    if region.iter().any(|&f| board.defect_index(f).is_some() || rules.is_relaxed(f) || p.is_endpoint(f)) {
        return Err(mismatch("site contains a defect"));
    }
    let state: Vec<bool> = region.iter().map(|&f| p.has_edge(f)).collect();
    if state != table.identity {
        return Err(mismatch("site does not carry the identity pattern"));
    }
    let mut terms = Vec::new();
    for (pattern, coeff) in &table.terms {
        let mut halves = Vec::new();
        for (i, &f) in region.iter().enumerate() {
            if pattern[i] != state[i] {
                halves.extend([2 * f, 2 * f + 1]);
            }
        }
        let q = toggled(board, rules, p, &halves)?;
        terms.push((q, -coeff));
    }
    let mut all = Vec::new();
    for &f in &region {
        all.extend([2 * f, 2 * f + 1]);
    }
    Ok(MoveOutcome {
        kind: if site.kind == JwSiteKind::Knob { MoveKind::JwKnob } else { MoveKind::JwBlock },
        terms,
        support: support_of(board, &all),
    })
}

/// Move sites that might apply to `p`: boxes and circles next to occupied half-bonds and
/// undercrossings at endpoints. Jones-Wenzl sites are listed separately.
pub fn candidate_moves(board: &Board, p: &Picture) -> Vec<Move> {
    let mut boxes = BTreeSet::new();
    for e in p.touched_edges() {
        for b in board.boxes_of_edge(e) {
            boxes.insert(b);
        }
    }
    let mut out: Vec<Move> = Vec::new();
    for &(x, y) in &boxes {
        out.push(Move::Box { x, y });
        out.push(Move::Circle { x, y });
    }
    for e in p.touched_edges() {
        if p.is_endpoint(e) {
            out.push(Move::Undercrossing { edge: e });
        }
    }
    out
}

/// Every Jones-Wenzl site position on the board.
pub fn jw_sites(board: &Board) -> Vec<JwSite> {
    let k = (board.r() - 1) as i32;
    let mut out = Vec::new();
    for kind in [JwSiteKind::Horizontal, JwSiteKind::Vertical, JwSiteKind::Knob] {
        let (w, h) = match kind {
            JwSiteKind::Knob if k == 4 => (5, 3),
            JwSiteKind::Knob => continue,
            _ => (k - 1, k - 1),
        };
        for x in 0..=(board.boxes_x() as i32 - w) {
            for y in 0..=(board.boxes_y() as i32 - h) {
                out.push(JwSite { kind, x, y });
            }
        }
    }
    out
}
