//! Standard and randomized pictures for tests and relation generation.

use super::moves::{apply_move, Move, Rules};
use super::routing::route_pairs;
use super::{Board, Picture, Vertex};
use crate::error::{Error, Result};
use crate::Level;
use rand::seq::SliceRandom;
use rand::Rng;

/// Crossing-free picture joining defects in adjacent pairs (in input order) and the last one
/// to the root, routed on or above the defect row. Each arm leaves from the left/bottom end of
/// its defect edge.
pub fn standard_picture(board: &Board) -> Result<Picture> {
    let order = board.input_order();
    if order.len().is_multiple_of(2) {
        return Err(Error::Invalid("a picture needs an odd number of defects".into()));
    }
    let arm = |d: usize| board.endpoints(board.defects()[d]).0;
    let y0 = board.defects().iter().map(|&e| board.endpoints(e).0 .1).min().unwrap_or(0);
    let mut pairs: Vec<(Vertex, Vertex)> = order.chunks(2).filter(|c| c.len() == 2).map(|c| (arm(c[0]), arm(c[1]))).collect();
    pairs.push((arm(*order.last().expect("odd")), board.root()));
    let arms: Vec<Vertex> = order.iter().map(|&d| arm(d)).collect();
    let paths = route_pairs(board, &pairs, |v| v.1 >= y0 && !arms.contains(&v) && v != board.root())
        .ok_or_else(|| Error::Invalid("no room to route the standard picture".into()))?;
    standard_from_paths(board, &paths)
}

/// Picture with the given vertex paths plus the arm half of every defect at its path start.
pub fn standard_from_paths(board: &Board, paths: &[Vec<Vertex>]) -> Result<Picture> {
    let mut p = Picture::empty(board);
    for path in paths {
        for w in path.windows(2) {
            let e = board
                .edge_between(w[0], w[1])
                .ok_or_else(|| Error::Invalid(format!("{:?} and {:?} are not adjacent", w[0], w[1])))?;
            p.set_edge(e, true);
        }
    }
    for &e in board.defects() {
        let v = board.endpoints(e).0;
        p.set_half(board.half_at(e, v), true);
    }
    if !p.check_admissible(board) {
        return Err(Error::Invalid("routed picture is not admissible".into()));
    }
    Ok(p)
}

/// Random walk of local moves starting from the standard picture. Boxes near defects are
/// preferred, tether crossings are capped, undercrossings keep one random term and unit circles
/// are sprinkled in occasionally.
pub fn random_picture<R: Rng>(
    board: &Board,
    kp: &Level,
    rng: &mut R,
    steps: usize,
    max_crossings: usize,
) -> Result<Picture> {
    let rules = Rules::strict();
    let mut p = standard_picture(board)?;
    let arms: Vec<Vertex> = board.defects().iter().map(|&e| board.endpoints(e).0).collect();
    for _ in 0..steps {
        let roll: f64 = rng.gen();
        let m = if roll < 0.04 {
            let x = rng.gen_range(0..board.boxes_x() as i32);
            let y = rng.gen_range(0..board.boxes_y() as i32);
            if let Some(q) = add_circle(board, &p, x, y) {
                p = q;
            }
            continue;
        } else if roll < 0.5 {
            let a = arms.choose(rng).expect("defects");
            let x = a.0 + rng.gen_range(-3..=3);
            let y = a.1 + rng.gen_range(-3..=3);
            if rng.gen_bool(0.15) {
                let touched: Vec<usize> = board.incident(*a).collect();
                let e = *touched.choose(rng).expect("edges");
                Move::Undercrossing { edge: e }
            } else {
                Move::Box { x, y }
            }
        } else {
            let cand = super::moves::candidate_moves(board, &p);
            *cand.choose(rng).expect("nonempty picture")
        };
        let Ok(out) = apply_move(board, &rules, &p, &m, kp) else {
            continue;
        };
        let (q, _) = out.terms.choose(rng).expect("terms").clone();
        if board.crossing_count(&q)? <= max_crossings {
            p = q;
        }
    }
    Ok(p)
}

/// Adds the boundary of box (x, y) as a circle if it touches nothing.
pub fn add_circle(board: &Board, p: &Picture, x: i32, y: i32) -> Option<Picture> {
    let edges = board.box_edges(x, y)?;
    let corners = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)];
    if corners.iter().any(|&v| p.valence(board, v) > 0 || v == board.root())
        || edges.iter().any(|&e| board.is_site(e))
    {
        return None;
    }
    let mut q = p.clone();
    for e in edges {
        q.set_edge(e, true);
    }
    Some(q)
}
