use super::solve::dense_spectrum;
use super::{assemble, Basis, LocalTerm, MediumState, Mode, SparseHamiltonian, TermKind};
use crate::error::{Error, Result};
use crate::lattice::{Board, Move, Picture, Rules};
use crate::{CycloNum, Level};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};

const TRANSPORT_DENSE_LIMIT: usize = 2500;
const GAP_FLOOR: f64 = 1e-10;
const SIGMA_FLOOR: f64 = 1e-6;

fn shared_vertices(board: &Board, a: usize, b: usize) -> usize {
    let (p, q) = board.endpoints(a);
    let (s, t) = board.endpoints(b);
    [p, q].iter().filter(|v| **v == s || **v == t).count()
}

/// Moves the defect on `w` to the adjacent site `w2`: the defect term on w and the edge-pair term
/// on w2 are exchanged for an edge-pair term on w and a defect term on w2, and the undercrossing
/// term follows the defect.
pub fn defect_swap_step(state: &MediumState, w: usize, w2: usize) -> Result<MediumState> {
    let board = &state.board;
    let d = board
        .defect_index(w)
        .ok_or_else(|| Error::Invalid(format!("edge {w} carries no defect")))?;
    if board.defect_index(w2).is_some() {
        return Err(Error::Invalid(format!("edge {w2} already carries a defect")));
    }
    if !board.is_site(w2) {
        return Err(Error::Invalid(format!("edge {w2} is not a defect site")));
    }
    if w == w2 || shared_vertices(board, w, w2) != 1 {
        return Err(Error::NotAdjacent(format!("edges {w} and {w2} do not share a vertex")));
    }
    let mut defects = board.defects().to_vec();
    defects[d] = w2;
    let next = board.with_defects(defects)?;
    let mut terms: Vec<LocalTerm> = state
        .terms
        .iter()
        .filter(|t| {
            !(t.kind == TermKind::Defect && t.support == [w]
                || t.kind == TermKind::EdgePair && t.support == [w2]
                || t.site() == Some(Move::Undercrossing { edge: w }))
        })
        .cloned()
        .collect();
    terms.push(LocalTerm::edge_pair(w));
    terms.push(LocalTerm::defect(w2));
    terms.push(LocalTerm::relation(&next, Move::Undercrossing { edge: w2 }));
    terms.sort();
    Ok(MediumState {
        board: next,
        mode: state.mode,
        terms,
    })
}

fn quarter(d: (i32, i32)) -> i32 {
    match (d.0.signum(), d.1.signum()) {
        (1, 0) => 0,
        (0, 1) => 1,
        (-1, 0) => 2,
        _ => 3,
    }
}

fn approach(board: &Board, p: &Picture, e: usize) -> i32 {
    let (a, b) = board.endpoints(e);
    let x = if p.half(board.half_at(e, a)) { a } else { b };
    let m = board.midpoint(e);
    quarter((2 * x.0 - m.0, 2 * x.1 - m.1))
}

/// The picture with the endpoint on `w` slid through the shared vertex onto `w2`, and the phase
/// c with ψ'(q) = c ψ(p) between ground functionals before and after the swap. The phase is a
/// twist for each quarter turn of the endpoint's approach direction across the tether direction.
/// None when the swap does not act on `p` by a slide.
pub fn endpoint_slide(board: &Board, p: &Picture, w: usize, w2: usize, kp: &Level) -> Option<(Picture, CycloNum)> {
    let (a, b) = board.endpoints(w);
    let (a2, b2) = board.endpoints(w2);
    let v = if a == a2 || a == b2 { a } else { b };
    if v == board.root() || !(a == a2 || a == b2 || b == a2 || b == b2) {
        return None;
    }
    let (h0, h1) = p.edge_state(w);
    let (g0, g1) = p.edge_state(w2);
    if h0 == h1 || g0 != g1 {
        return None;
    }
    let (hw, hw2) = (board.half_at(w, v), board.half_at(w2, v));
    if !p.half(hw) && g0 {
        return None;
    }
    let mut q = p.clone();
    q.toggle_half(hw);
    q.toggle_half(hw2);
    if !matches!(q.valence(board, v), 0 | 2) {
        return None;
    }
    let (k0, k1) = (approach(board, p, w), approach(board, &q, w2));
    let turn = (k1 - k0).rem_euclid(4);
    let ccw = match turn {
        0 => return Some((q, kp.one())),
        1 => true,
        3 => false,
        _ => {
            let e = board
                .incident(v)
                .find(|&f| f != w && f != w2 && p.half(board.half_at(f, v)))?;
            let m = board.midpoint(e);
            quarter((m.0 - 2 * v.0, m.1 - 2 * v.1)) == (k0 + 1).rem_euclid(4)
        }
    };
    let t = crate::lattice::twist_factor(kp);
    let mut c = kp.one();
    let mut k = k0;
    for _ in 0..if turn == 2 { 2 } else { 1 } {
        if ccw {
            if k == 3 {
                c = &c * &t.inverse().ok()?;
            }
            k = (k + 1).rem_euclid(4);
        } else {
            if k == 0 {
                c = &c * &t;
            }
            k = (k + 3).rem_euclid(4);
        }
    }
    Some((q, c))
}

/// Rank-one couplings |q⟩ − c̄|p⟩ between each picture and its slid image within the basis.
fn slide_coupling(board: &Board, pics: &[Picture], index: &HashMap<Picture, usize>, swaps: &[(usize, usize)], kp: &Level) -> SparseHamiltonian {
    let mut rank_one = Vec::new();
    for (i, p) in pics.iter().enumerate() {
        for &(w, w2) in swaps {
            let Some((q, c)) = endpoint_slide(board, p, w, w2, kp) else { continue };
            let Some(&j) = index.get(&q) else { continue };
            let c = c.embed();
            let norm = (1.0 + c.norm_sqr()).sqrt();
            rank_one.push(vec![(j, Complex64::new(1.0 / norm, 0.0)), (i, -c.conj() / norm)]);
        }
    }
    SparseHamiltonian {
        dim: pics.len(),
        diag: vec![0.0; pics.len()],
        rank_one,
    }
}

/// Simultaneous defect swaps, one list of (from, to) edges per time step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub steps: Vec<Vec<(usize, usize)>>,
}

impl Schedule {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every edge a defect occupies along the way.
    pub fn sites(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.steps.iter().flatten().flat_map(|&(a, b)| [a, b]).collect();
        s.into_iter().collect()
    }

    pub fn reversed(&self) -> Schedule {
        Schedule {
            steps: self.steps.iter().rev().map(|st| st.iter().map(|&(a, b)| (b, a)).collect()).collect(),
        }
    }
}

fn midpoint_path(board: &Board, from: usize, to: usize, allowed: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let mut prev: HashMap<usize, usize> = HashMap::from([(from, from)]);
    let mut queue = VecDeque::from([from]);
    while let Some(e) = queue.pop_front() {
        if e == to {
            let mut path = vec![to];
            while *path.last().expect("nonempty") != from {
                path.push(prev[path.last().expect("nonempty")]);
            }
            path.reverse();
            return Some(path);
        }
        let (p, q) = board.endpoints(e);
        let mut next: Vec<usize> = board.incident(p).chain(board.incident(q)).collect();
        next.sort_unstable();
        next.dedup();
        for f in next {
            if f != e && !prev.contains_key(&f) && (f == to || allowed(f)) {
                prev.insert(f, e);
                queue.push_back(f);
            }
        }
    }
    None
}

/// Counterclockwise exchange of the defects at positions `i` and `i + 1` of the input order:
/// the first passes below the defect row, the second above, both moving every time step by a
/// collinear or corner move between edges sharing a vertex.
pub fn exchange_schedule(board: &Board, i: usize) -> Result<Schedule> {
    let order = board.input_order();
    if i + 1 >= order.len() {
        return Err(Error::Invalid(format!("no defect pair at position {i}")));
    }
    let a = board.defects()[order[i]];
    let b = board.defects()[order[i + 1]];
    let row = board.midpoint(a).1.max(board.midpoint(b).1);
    let low = board.midpoint(a).1.min(board.midpoint(b).1);
    let others: Vec<usize> = board.defects().iter().copied().filter(|&e| e != a && e != b).collect();
    let free = |f: usize| {
        let (p, q) = board.endpoints(f);
        p != board.root() && q != board.root() && others.iter().all(|&o| shared_vertices(board, f, o) == 0)
    };
    let below = midpoint_path(board, a, b, |f| free(f) && board.midpoint(f).1 < low)
        .ok_or_else(|| Error::NoSchedule("no path below the defect row".into()))?;
    let above = midpoint_path(board, b, a, |f| free(f) && board.midpoint(f).1 > row)
        .ok_or_else(|| Error::NoSchedule("no path above the defect row".into()))?;
    let len = below.len().max(above.len());
    let at = |p: &Vec<usize>, t: usize| p[t.min(p.len() - 1)];
    let mut steps = Vec::new();
    for t in 1..len {
        let mut moves = Vec::new();
        for p in [&below, &above] {
            if at(p, t - 1) != at(p, t) {
                moves.push((at(p, t - 1), at(p, t)));
            }
        }
        let (x0, x1, y0, y1) = (at(&below, t - 1), at(&below, t), at(&above, t - 1), at(&above, t));
        if [x0, x1].iter().any(|&x| [y0, y1].iter().any(|&y| x == y || shared_vertices(board, x, y) > 0)) {
            return Err(Error::NoSchedule(format!("paths collide at time step {t}")));
        }
        steps.push(moves);
    }
    Ok(Schedule { steps })
}

/// Outcome of adiabatic transport of the ground space along a schedule.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransportReport {
    pub steps: usize,
    pub substeps: usize,
    pub ground_dimension: usize,
    pub basis_sizes: Vec<usize>,
    /// Holonomy in the initial ground basis, rows of [re, im] pairs.
    pub holonomy: Vec<Vec<[f64; 2]>>,
    /// min over global phases of ‖U − e^{iθ} I‖.
    pub identity_deviation: f64,
    pub max_unitarity_error: f64,
    pub min_singular_value: f64,
    pub min_gap: f64,
    #[serde(skip)]
    pub unitary: DMatrix<Complex64>,
}

fn polar(m: &DMatrix<Complex64>) -> (DMatrix<Complex64>, f64) {
    let svd = m.clone().svd(true, true);
    let sigma = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    (svd.u.expect("u") * svd.v_t.expect("v_t"), sigma)
}

fn unitarity_error(f: &DMatrix<Complex64>) -> f64 {
    let g = f.adjoint() * f;
    (g - DMatrix::identity(f.ncols(), f.ncols())).norm()
}

fn reindex(
    frame: &DMatrix<Complex64>,
    from: &[Picture],
    to: &HashMap<Picture, usize>,
    n: usize,
) -> Result<DMatrix<Complex64>> {
    let mut out = DMatrix::zeros(n, frame.ncols());
    for (r, p) in from.iter().enumerate() {
        match to.get(p) {
            Some(&j) => out.row_mut(j).copy_from(&frame.row(r)),
            None if frame.row(r).norm() < 1e-8 => {}
            None => return Err(Error::Solver("ground vector leaves the next picture basis".into())),
        }
    }
    Ok(out)
}

/// Transports the ground space along the schedule in picture mode. Each time step interpolates
/// linearly between the Hamiltonians before and after its swaps over a basis in which the moving
/// edges are unconstrained; at each substep the lowest-m eigenspace is taken and the frame is
/// carried by projection followed by polar re-orthonormalization.
pub fn transport(board: &Board, schedule: &Schedule, substeps: usize, kp: &Level, tol: f64) -> Result<TransportReport> {
    if substeps == 0 {
        return Err(Error::Invalid("substeps must be positive".into()));
    }
    let mut sites = board.sites().to_vec();
    sites.extend(schedule.sites());
    let board = Board::new(board.boxes_x(), board.boxes_y(), board.r(), board.defects().to_vec(), board.root(), sites)?;
    let mut state = MediumState::new(board, Mode::PictureBasis);
    let mut frame: Option<(Vec<Picture>, DMatrix<Complex64>)> = None;
    let mut initial: Option<(Vec<Picture>, DMatrix<Complex64>)> = None;
    let mut m = 0;
    let mut basis_sizes = Vec::new();
    let (mut max_unit, mut min_sigma, mut min_gap) = (0.0f64, f64::INFINITY, f64::INFINITY);
    for (step, swaps) in schedule.steps.iter().enumerate() {
        let mut next = state.clone();
        for &(w, w2) in swaps {
            next = super::defect_swap_step(&next, w, w2)?;
        }
        let rules = Rules::relaxed(swaps.iter().flat_map(|&(a, b)| [a, b]).collect());
        let a0 = assemble(&state.board, &rules, &state.terms, Mode::PictureBasis, kp, usize::MAX)?;
        let a1 = assemble(&next.board, &rules, &next.terms, Mode::PictureBasis, kp, usize::MAX)?;
        let Basis::Pictures(pics) = a0.basis else { unreachable!("picture mode") };
        let n = pics.len();
        if n > TRANSPORT_DENSE_LIMIT {
            return Err(Error::Invalid(format!("transport basis of {n} pictures is too large")));
        }
        basis_sizes.push(n);
        let index: HashMap<Picture, usize> = pics.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let slide = slide_coupling(&state.board, &pics, &index, swaps, kp);
        let cut = (tol * 1e3).max(1e-9);
        let mut f = match frame.take() {
            None => {
                let (vals, vecs) = dense_spectrum(&a0.hamiltonian.to_dense());
                m = vals.iter().filter(|&&v| v < cut).count();
                if m == 0 {
                    return Err(Error::Solver("empty ground space".into()));
                }
                let f0 = vecs.columns(0, m).into_owned();
                initial = Some((pics.clone(), f0.clone()));
                f0
            }
            Some((old, f)) => reindex(&f, &old, &index, n)?,
        };
        for j in 0..=substeps {
            let s = j as f64 / substeps as f64;
            let h = a0.hamiltonian.mix(1.0 - s, &a1.hamiltonian, s).mix(1.0, &slide, 4.0 * s * (1.0 - s));
            let (vals, vecs) = dense_spectrum(&h.to_dense());
            let gap = vals.get(m).copied().unwrap_or(f64::INFINITY) - vals[m - 1];
            min_gap = min_gap.min(gap);
            let endpoint_jump = (j == 0 || j == substeps) && (vals[m - 1] >= cut || vals.get(m).is_some_and(|&v| v < cut));
            if gap < GAP_FLOOR || endpoint_jump {
                let found = vals.iter().filter(|&&v| v < vals[m - 1].max(cut) + GAP_FLOOR).count();
                return Err(Error::DimensionJump {
                    step,
                    substep: j,
                    expected: m,
                    found,
                });
            }
            let e = vecs.columns(0, m).into_owned();
            let (u, sigma) = polar(&(e.adjoint() * &f));
            min_sigma = min_sigma.min(sigma);
            if sigma < SIGMA_FLOOR {
                return Err(Error::IllConditioned { step, sigma });
            }
            f = e * u;
            max_unit = max_unit.max(unitarity_error(&f));
        }
        frame = Some((pics, f));
        state = next;
    }
    let (pics0, f0) = initial.ok_or_else(|| Error::Invalid("empty schedule".into()))?;
    let (pics, f) = frame.expect("at least one step");
    let index0: HashMap<Picture, usize> = pics0.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let f_end = reindex(&f, &pics, &index0, pics0.len())?;
    let u = f0.adjoint() * f_end;
    let tr = u.trace();
    let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { Complex64::new(1.0, 0.0) };
    let deviation = (&u - DMatrix::identity(m, m) * phase).norm();
    Ok(TransportReport {
        steps: schedule.len(),
        substeps,
        ground_dimension: m,
        basis_sizes,
        holonomy: u.row_iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect(),
        identity_deviation: deviation,
        max_unitarity_error: max_unit,
        min_singular_value: min_sigma,
        min_gap,
        unitary: u,
    })
}
