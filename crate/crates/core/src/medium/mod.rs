//! A local Hamiltonian on the board whose ground space is dual to the picture space modulo the
//! local relations. Diagonal penalty terms enforce admissibility; every local relation
//! p = Σ cᵢ pᵢ contributes the projector onto |p⟩ − Σ c̄ᵢ |pᵢ⟩, so a ground vector ψ satisfies
//! ψ(p) = Σ cᵢ ψ(pᵢ).

mod enumerate;
mod solve;
mod transport;

pub use enumerate::enumerate_pictures;
pub use solve::{class_count, ground_space, spectral_probe, ClassCount, GroundSpace, SpectralProbe};
pub use transport::{endpoint_slide, defect_swap_step, exchange_schedule, transport, Schedule, TransportReport};

use crate::error::{Error, Result};
use crate::lattice::{apply_move, jw_sites, Board, JwSiteKind, Move, MoveKind, Picture, Rules, Vertex};
use crate::{CycloNum, Level};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

/// Largest board, in edges, assembled over the full tensor product space by default.
pub const DEFAULT_EDGE_CAP: usize = 22;
/// Largest number of admissible pictures enumerated for the picture basis.
pub const PICTURE_LIMIT: usize = 400_000;
const TENSOR_QUBIT_LIMIT: usize = 26;
const LOCAL_QUBIT_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Mode {
    /// One qubit per ordinary edge and two per defect-capable edge.
    FullTensor,
    /// The span of admissible pictures, which contains the ground space.
    PictureBasis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum TermKind {
    Vertex,
    Defect,
    EdgePair,
    Isotopy,
    Circle,
    Undercrossing,
    /// Square Jones-Wenzl site.
    JwSquare,
    /// Knob Jones-Wenzl site.
    JwKnob,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Anchor {
    Vertex { x: i32, y: i32 },
    Edge { edge: usize },
    Site(Move),
}

/// A Hamiltonian term: its kind, where it sits and the edges it acts on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LocalTerm {
    pub kind: TermKind,
    pub anchor: Anchor,
    pub support: Vec<usize>,
}

fn incident_all(board: &Board, verts: impl IntoIterator<Item = Vertex>) -> Vec<usize> {
    let mut s = BTreeSet::new();
    for v in verts {
        if board.in_board(v) {
            s.extend(board.incident(v));
        }
    }
    s.into_iter().collect()
}

fn site_vertices(board: &Board, m: &Move) -> Vec<Vertex> {
    match *m {
        Move::Box { x, y } | Move::Circle { x, y } => vec![(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)],
        Move::Undercrossing { edge } => {
            let vertical = !board.is_horizontal(edge);
            let (lo, hi) = board.endpoints(edge);
            let va = if vertical { hi } else { lo };
            let mut out = Vec::new();
            for a in -1..=2 {
                for b in -1..=1 {
                    out.push(if vertical { (va.0 - b, va.1 - a) } else { (va.0 + a, va.1 + b) });
                }
            }
            out
        }
        Move::Jw(site) => {
            let k = board.r() as i32 - 1;
            let (w, h) = if site.kind == JwSiteKind::Knob { (6, 3) } else { (k, k) };
            let mut out: Vec<Vertex> = (0..w).flat_map(|a| (0..h).map(move |b| (site.x + a, site.y + b))).collect();
            if site.kind == JwSiteKind::Knob {
                out.extend([(site.x + 2, site.y + 3), (site.x + 3, site.y + 3)]);
            }
            out
        }
    }
}

impl LocalTerm {
    pub fn vertex(board: &Board, v: Vertex) -> Self {
        LocalTerm {
            kind: TermKind::Vertex,
            anchor: Anchor::Vertex { x: v.0, y: v.1 },
            support: incident_all(board, [v]),
        }
    }

    pub fn defect(e: usize) -> Self {
        LocalTerm {
            kind: TermKind::Defect,
            anchor: Anchor::Edge { edge: e },
            support: vec![e],
        }
    }

    pub fn edge_pair(e: usize) -> Self {
        LocalTerm {
            kind: TermKind::EdgePair,
            anchor: Anchor::Edge { edge: e },
            support: vec![e],
        }
    }

    pub fn relation(board: &Board, m: Move) -> Self {
        let kind = match m {
            Move::Box { .. } => TermKind::Isotopy,
            Move::Circle { .. } => TermKind::Circle,
            Move::Undercrossing { .. } => TermKind::Undercrossing,
            Move::Jw(s) if s.kind == JwSiteKind::Knob => TermKind::JwKnob,
            Move::Jw(_) => TermKind::JwSquare,
        };
        LocalTerm {
            kind,
            anchor: Anchor::Site(m),
            support: incident_all(board, site_vertices(board, &m)),
        }
    }

    pub fn site(&self) -> Option<Move> {
        match self.anchor {
            Anchor::Site(m) => Some(m),
            _ => None,
        }
    }

    /// Energy of a picture under a diagonal term; zero for relation terms.
    pub fn penalty(&self, board: &Board, p: &Picture) -> f64 {
        let bad = match (self.kind, self.anchor) {
            (TermKind::Vertex, Anchor::Vertex { x, y }) => !Rules::strict().vertex_ok(board, p, (x, y)),
            (TermKind::Defect, Anchor::Edge { edge }) => !p.is_endpoint(edge),
            (TermKind::EdgePair, Anchor::Edge { edge }) => p.is_endpoint(edge),
            _ => false,
        };
        if bad {
            1.0
        } else {
            0.0
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.kind, TermKind::Vertex | TermKind::Defect | TermKind::EdgePair)
    }

    /// The term as an operator on the qubits of its support.
    pub fn local_operator(&self, board: &Board, layout: &QubitLayout, kp: &Level) -> Result<LocalOperator> {
        let qubits: Vec<usize> = self.support.iter().flat_map(|&e| layout.qubits_of(e)).collect();
        if qubits.len() > LOCAL_QUBIT_LIMIT {
            return Err(Error::Invalid(format!("term acts on {} qubits", qubits.len())));
        }
        let dim = 1usize << qubits.len();
        let picture = |c: usize| {
            let mut p = Picture::empty(board);
            for (i, &q) in qubits.iter().enumerate() {
                if c >> i & 1 == 1 {
                    for &h in layout.halves(q) {
                        p.set_half(h, true);
                    }
                }
            }
            p
        };
        let code = |p: &Picture| {
            qubits
                .iter()
                .enumerate()
                .filter(|&(_, &q)| p.half(layout.halves(q)[0]))
                .map(|(i, _)| 1usize << i)
                .sum::<usize>()
        };
        let mut op = LocalOperator {
            qubits: qubits.clone(),
            diagonal: vec![0.0; dim],
            vectors: Vec::new(),
        };
        let rules = Rules::strict();
        for c in 0..dim {
            let p = picture(c);
            match self.site() {
                None => op.diagonal[c] = self.penalty(board, &p),
                Some(m) => {
                    if !locally_admissible(board, &p, &self.support) {
                        continue;
                    }
                    let Ok(out) = apply_move(board, &rules, &p, &m, kp) else { continue };
                    let terms: Vec<(usize, CycloNum)> = out.terms.iter().map(|(q, k)| (code(q), k.clone())).collect();
                    if let Some(v) = relation_vector(c, out.kind, &terms) {
                        op.vectors.push(v);
                    }
                }
            }
        }
        Ok(op)
    }
}

/// Strict admissibility on the support edges and at every vertex whose incident edges all lie
/// in the support. Relations are imposed only from such sources, so configurations that are
/// inadmissible there never mix with admissible ones.
fn locally_admissible(board: &Board, p: &Picture, support: &[usize]) -> bool {
    let rules = Rules::strict();
    support.iter().all(|&e| {
        let (a, b) = board.endpoints(e);
        let inner = |v: Vertex| board.incident(v).all(|f| support.contains(&f));
        rules.edge_ok(board, p, e)
            && (!inner(a) || rules.vertex_ok(board, p, a))
            && (!inner(b) || rules.vertex_ok(board, p, b))
    })
}

/// Normalized |source⟩ − Σ c̄ᵢ |targetᵢ⟩, or None for the reverse copy of an isotopy.
fn relation_vector(source: usize, kind: MoveKind, terms: &[(usize, CycloNum)]) -> Option<Vec<(usize, Complex64)>> {
    if matches!(kind, MoveKind::Isotopy | MoveKind::Endpoint) && terms.len() == 1 && terms[0].0 < source {
        return None;
    }
    let mut acc: Vec<(usize, Complex64)> = vec![(source, Complex64::new(1.0, 0.0))];
    for (j, c) in terms {
        let z = -c.embed().conj();
        match acc.iter_mut().find(|(i, _)| i == j) {
            Some(slot) => slot.1 += z,
            None => acc.push((*j, z)),
        }
    }
    acc.retain(|(_, z)| z.norm() > 1e-14);
    let norm = acc.iter().map(|(_, z)| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return None;
    }
    acc.sort_by_key(|&(i, _)| i);
    Some(acc.into_iter().map(|(i, z)| (i, z / norm)).collect())
}

/// A term restricted to the qubits it acts on: a diagonal part plus a sum of rank-one
/// projectors onto normalized relation vectors.
#[derive(Clone, Debug)]
pub struct LocalOperator {
    pub qubits: Vec<usize>,
    pub diagonal: Vec<f64>,
    pub vectors: Vec<Vec<(usize, Complex64)>>,
}

impl LocalOperator {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.diagonal.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        for v in &self.vectors {
            for &(i, a) in v {
                for &(j, b) in v {
                    m[(i, j)] += a * b.conj();
                }
            }
        }
        m
    }
}

/// Qubit assignment: ordinary edges carry one qubit, defect-capable and relaxed edges carry one
/// qubit per half-bond.
#[derive(Clone, Debug)]
pub struct QubitLayout {
    first: Vec<usize>,
    halves: Vec<Vec<usize>>,
}

impl QubitLayout {
    pub fn new(board: &Board, rules: &Rules) -> Self {
        let mut first = Vec::with_capacity(board.edge_count());
        let mut halves = Vec::new();
        for e in 0..board.edge_count() {
            first.push(halves.len());
            if board.is_site(e) || rules.is_relaxed(e) {
                halves.push(vec![2 * e]);
                halves.push(vec![2 * e + 1]);
            } else {
                halves.push(vec![2 * e, 2 * e + 1]);
            }
        }
        QubitLayout { first, halves }
    }

    pub fn len(&self) -> usize {
        self.halves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halves.is_empty()
    }

    pub fn halves(&self, q: usize) -> &[usize] {
        &self.halves[q]
    }

    pub fn qubits_of(&self, e: usize) -> Vec<usize> {
        let end = self.first.get(e + 1).copied().unwrap_or(self.halves.len());
        (self.first[e]..end).collect()
    }

    pub fn encode(&self, p: &Picture) -> usize {
        (0..self.len()).filter(|&q| p.half(self.halves[q][0])).map(|q| 1usize << q).sum()
    }

    pub fn decode(&self, board: &Board, x: usize) -> Picture {
        let mut p = Picture::empty(board);
        for q in 0..self.len() {
            if x >> q & 1 == 1 {
                for &h in &self.halves[q] {
                    p.set_half(h, true);
                }
            }
        }
        p
    }
}

/// Terms of the Hamiltonian on a board: a vertex term at every vertex, a defect term on every
/// defect, an edge-pair term on every other defect-capable edge and a relation term at every
/// move site.
pub fn build_terms(board: &Board) -> Vec<LocalTerm> {
    let mut terms = Vec::new();
    for i in 0..board.vertex_count() {
        terms.push(LocalTerm::vertex(board, board.vertex_at(i)));
    }
    for &e in board.sites() {
        terms.push(if board.defect_index(e).is_some() { LocalTerm::defect(e) } else { LocalTerm::edge_pair(e) });
    }
    for x in 0..board.boxes_x() as i32 {
        for y in 0..board.boxes_y() as i32 {
            terms.push(LocalTerm::relation(board, Move::Box { x, y }));
            terms.push(LocalTerm::relation(board, Move::Circle { x, y }));
        }
    }
    for &e in board.defects() {
        terms.push(LocalTerm::relation(board, Move::Undercrossing { edge: e }));
    }
    for s in jw_sites(board) {
        terms.push(LocalTerm::relation(board, Move::Jw(s)));
    }
    terms.sort();
    terms
}

/// A positive semidefinite operator: a diagonal plus a sum of rank-one terms u u†.
#[derive(Clone, Debug)]
pub struct SparseHamiltonian {
    pub dim: usize,
    pub diag: Vec<f64>,
    pub rank_one: Vec<Vec<(usize, Complex64)>>,
}

impl SparseHamiltonian {
    pub fn apply(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut y = x.clone();
        for c in 0..x.ncols() {
            for i in 0..self.dim {
                y[(i, c)] *= self.diag[i];
            }
        }
        for v in &self.rank_one {
            for c in 0..x.ncols() {
                let s: Complex64 = v.iter().map(|&(i, a)| a.conj() * x[(i, c)]).sum();
                if s != Complex64::new(0.0, 0.0) {
                    for &(i, a) in v {
                        y[(i, c)] += a * s;
                    }
                }
            }
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            m[(i, i)] = Complex64::new(self.diag[i], 0.0);
        }
        for v in &self.rank_one {
            for &(i, a) in v {
                for &(j, b) in v {
                    m[(i, j)] += a * b.conj();
                }
            }
        }
        m
    }

    /// Upper bound on the largest eigenvalue from absolute row sums.
    pub fn norm_bound(&self) -> f64 {
        let mut rows = self.diag.clone();
        for v in &self.rank_one {
            let l1: f64 = v.iter().map(|(_, a)| a.norm()).sum();
            for &(i, a) in v {
                rows[i] += a.norm() * l1;
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// wa · self + wb · other for nonnegative weights.
    pub fn mix(&self, wa: f64, other: &Self, wb: f64) -> Self {
        let scale = |v: &Vec<(usize, Complex64)>, w: f64| v.iter().map(|&(i, a)| (i, a * w.sqrt())).collect();
        let mut rank_one: Vec<_> = self.rank_one.iter().filter(|_| wa > 0.0).map(|v| scale(v, wa)).collect();
        rank_one.extend(other.rank_one.iter().filter(|_| wb > 0.0).map(|v| scale(v, wb)));
        SparseHamiltonian {
            dim: self.dim,
            diag: self.diag.iter().zip(&other.diag).map(|(a, b)| wa * a + wb * b).collect(),
            rank_one,
        }
    }
}

/// An exact relation ψ(source) = Σ c ψ(target) between basis states.
#[derive(Clone, Debug)]
pub struct Relation {
    pub kind: MoveKind,
    pub source: usize,
    pub terms: Vec<(usize, CycloNum)>,
}

#[derive(Clone, Debug)]
pub enum Basis {
    Tensor(QubitLayout),
    Pictures(Vec<Picture>),
}

impl Basis {
    pub fn len(&self) -> usize {
        match self {
            Basis::Tensor(l) => 1usize << l.len(),
            Basis::Pictures(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn picture(&self, board: &Board, i: usize) -> Picture {
        match self {
            Basis::Tensor(l) => l.decode(board, i),
            Basis::Pictures(p) => p[i].clone(),
        }
    }
}

/// An assembled Hamiltonian with its basis and, in picture mode, the exact relations.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub mode: Mode,
    pub hamiltonian: SparseHamiltonian,
    pub basis: Basis,
    pub relations: Vec<Relation>,
}

/// Assembles the terms over the chosen basis. `basis_rules` lists edges whose half-bonds are
/// left unconstrained by the picture basis (used while a defect moves); relation moves always
/// use the strict rules of `board`.
pub fn assemble(
    board: &Board,
    basis_rules: &Rules,
    terms: &[LocalTerm],
    mode: Mode,
    kp: &Level,
    edge_cap: usize,
) -> Result<Assembly> {
    let basis = match mode {
        Mode::FullTensor => {
            if board.edge_count() > edge_cap {
                return Err(Error::CapExceeded {
                    edges: board.edge_count(),
                    cap: edge_cap,
                });
            }
            let layout = QubitLayout::new(board, basis_rules);
            if layout.len() > TENSOR_QUBIT_LIMIT {
                return Err(Error::CapExceeded {
                    edges: board.edge_count(),
                    cap: edge_cap,
                });
            }
            Basis::Tensor(layout)
        }
        Mode::PictureBasis => Basis::Pictures(enumerate_pictures(board, basis_rules, PICTURE_LIMIT)?),
    };
    let index: HashMap<Picture, usize> = match &basis {
        Basis::Pictures(ps) => ps.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect(),
        Basis::Tensor(_) => HashMap::new(),
    };
    let locate = |q: &Picture| -> Result<usize> {
        match &basis {
            Basis::Tensor(l) => Ok(l.encode(q)),
            Basis::Pictures(_) => index
                .get(q)
                .copied()
                .ok_or_else(|| Error::Solver("a move left the picture basis".into())),
        }
    };
    let diagonal: Vec<&LocalTerm> = terms.iter().filter(|t| t.is_diagonal()).collect();
    let sites: Vec<(Move, &[usize])> = terms
        .iter()
        .filter_map(|t| t.site().map(|m| (m, t.support.as_slice())))
        .collect();
    let rules = Rules::strict();
    let n = basis.len();
    let mut diag = vec![0.0; n];
    let mut rank_one = Vec::new();
    let mut relations = Vec::new();
    for (i, slot) in diag.iter_mut().enumerate() {
        let p = basis.picture(board, i);
        *slot = diagonal.iter().map(|t| t.penalty(board, &p)).sum();
        if p.is_empty() {
            continue;
        }
        for (m, support) in &sites {
            if !locally_admissible(board, &p, support) {
                continue;
            }
            let Ok(out) = apply_move(board, &rules, &p, m, kp) else { continue };
            let targets = out
                .terms
                .iter()
                .map(|(q, c)| Ok((locate(q)?, c.clone())))
                .collect::<Result<Vec<_>>>()?;
            if let Some(v) = relation_vector(i, out.kind, &targets) {
                rank_one.push(v);
                if mode == Mode::PictureBasis {
                    relations.push(Relation {
                        kind: out.kind,
                        source: i,
                        terms: targets,
                    });
                }
            }
        }
    }
    Ok(Assembly {
        mode,
        hamiltonian: SparseHamiltonian { dim: n, diag, rank_one },
        basis,
        relations,
    })
}

/// A board together with its current list of Hamiltonian terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MediumState {
    pub board: Board,
    pub mode: Mode,
    pub terms: Vec<LocalTerm>,
}

impl MediumState {
    pub fn new(board: Board, mode: Mode) -> Self {
        let terms = build_terms(&board);
        MediumState { board, mode, terms }
    }

    pub fn assemble(&self, kp: &Level, edge_cap: usize) -> Result<Assembly> {
        assemble(&self.board, &Rules::strict(), &self.terms, self.mode, kp, edge_cap)
    }
}
