//! The r-collared rooted tree of a roomy board and the weight function built on it.

use super::{Board, Picture, Vertex};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeSet, VecDeque};

/// A straight piece of the tree between two turning or branch points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub from: Vertex,
    pub to: Vertex,
    pub length: usize,
}

/// Left-comb tree: a leg from each defect straight up to a spine row, the spine, and a final
/// segment up to the root.
#[derive(Clone, Debug)]
pub struct CollaredTree {
    pub segments: Vec<Segment>,
    pub branch_points: Vec<Vertex>,
    pub collar: usize,
    vertices: BTreeSet<Vertex>,
    dist: Vec<u32>,
    branch_dist: Vec<u32>,
}

fn segment(from: Vertex, to: Vertex) -> Segment {
    Segment {
        from,
        to,
        length: ((to.0 - from.0).abs() + (to.1 - from.1).abs()) as usize,
    }
}

fn bfs(board: &Board, sources: impl IntoIterator<Item = Vertex>) -> Vec<u32> {
    let mut dist = vec![u32::MAX; board.vertex_count()];
    let mut queue = VecDeque::new();
    for s in sources {
        dist[board.vertex_index(s)] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        let dv = dist[board.vertex_index(v)];
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let q = (v.0 + dx, v.1 + dy);
            if board.in_board(q) && dist[board.vertex_index(q)] == u32::MAX {
                dist[board.vertex_index(q)] = dv + 1;
                queue.push_back(q);
            }
        }
    }
    dist
}

/// Builds the collared tree when the board is roomy: horizontal defects on one row, spaced at
/// least 9r apart and at least r from the boundary, with room for legs, spine and root segment
/// longer than 3r and the ⌈r/2⌉ collar inside the board.
pub fn find_collared_tree(board: &Board) -> Option<CollaredTree> {
    let r = board.r() as i32;
    let collar = (r + 1) / 2;
    let ds = board.defects();
    if ds.is_empty() || !ds.iter().all(|&e| board.is_horizontal(e)) {
        return None;
    }
    let mut arms: Vec<Vertex> = ds.iter().map(|&e| board.endpoints(e).0).collect();
    arms.sort();
    let y0 = arms[0].1;
    if arms.iter().any(|a| a.1 != y0) || arms.windows(2).any(|w| w[1].0 - w[0].0 < 9 * r) {
        return None;
    }
    let (w, h) = (board.boxes_x() as i32, board.boxes_y() as i32);
    let last = *arms.last().expect("nonempty");
    if arms[0].0 < r || last.0 + 1 > w - r || y0 < r {
        return None;
    }
    if board.root() != (last.0, h) {
        return None;
    }
    let n = arms.len();
    let spine = y0 + 3 * r + 1;
    let mut segments = Vec::new();
    let mut branch_points = Vec::new();
    let top_of_legs = if n == 1 { h } else { spine };
    for a in &arms {
        segments.push(segment(*a, (a.0, top_of_legs)));
    }
    if n > 1 {
        for k in 1..n {
            segments.push(segment((arms[k - 1].0, spine), (arms[k].0, spine)));
            branch_points.push((arms[k].0, spine));
        }
        segments.push(segment((last.0, spine), (last.0, h)));
        if spine + collar > h - 1 {
            return None;
        }
    }
    if segments.iter().any(|s| s.length as i32 <= 3 * r) {
        return None;
    }
    let mut vertices = BTreeSet::new();
    for s in &segments {
        let (dx, dy) = ((s.to.0 - s.from.0).signum(), (s.to.1 - s.from.1).signum());
        for t in 0..=s.length as i32 {
            vertices.insert((s.from.0 + t * dx, s.from.1 + t * dy));
        }
    }
    let ok = vertices
        .iter()
        .filter(|&&v| v.1 < h - collar)
        .all(|v| v.0 >= collar && v.0 <= w - collar && v.1 >= collar);
    if !ok {
        return None;
    }
    let dist = bfs(board, vertices.iter().copied());
    let branch_dist = bfs(board, branch_points.iter().copied());
    Some(CollaredTree {
        segments,
        branch_points,
        collar: collar as usize,
        vertices,
        dist,
        branch_dist,
    })
}

impl CollaredTree {
    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// Minimum number of bonds joining the edge to the tree.
    pub fn edge_distance(&self, board: &Board, e: usize) -> u32 {
        let (p, q) = board.endpoints(e);
        self.dist[board.vertex_index(p)].min(self.dist[board.vertex_index(q)])
    }

    /// Σ over occupied bonds of 10^distance, half-bonds counting one half.
    pub fn weight_length(&self, board: &Board, p: &Picture) -> BigRational {
        let mut total = BigRational::zero();
        let ten = BigInt::from(10);
        for h in p.occupied_halves() {
            let d = self.edge_distance(board, h / 2);
            total += BigRational::new(num_traits::pow(ten.clone(), d as usize), BigInt::from(2));
        }
        total
    }

    /// The small proximity correction: Σ over occupied half-bonds of max(0, r − distance to the
    /// nearest branch point), scaled by 1 / (8 |E|).
    pub fn proximity(&self, board: &Board, p: &Picture) -> BigRational {
        if self.branch_points.is_empty() {
            return BigRational::zero();
        }
        let r = board.r() as i64;
        let mut sum = 0i64;
        for h in p.occupied_halves() {
            let d = self.branch_dist[board.vertex_index(board.half_vertex(h))] as i64;
            sum += (r - d).max(0);
        }
        BigRational::new(BigInt::from(sum), BigInt::from(8 * board.edge_count()))
    }

    /// Integer proximity sum before scaling, used for fast comparisons.
    pub(crate) fn proximity_raw(&self, board: &Board, h: usize) -> i64 {
        if self.branch_points.is_empty() {
            return 0;
        }
        let d = self.branch_dist[board.vertex_index(board.half_vertex(h))] as i64;
        (board.r() as i64 - d).max(0)
    }
}
