//! Lattice routings of Temperley-Lieb diagrams inside Jones-Wenzl sites, and shortest-path
//! routing of arcs for standard pictures.

use super::{Board, Vertex};
use crate::error::{Error, Result};
use crate::skein::jones_wenzl;
use crate::{CycloNum, Level};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum JwSiteKind {
    /// k × k vertex block with strands running left to right.
    Horizontal,
    /// k × k vertex block with strands running bottom to top.
    Vertical,
    /// Four strands through a 6 × 3 vertex rectangle whose top strand bulges over a knob box.
    Knob,
}

/// A Jones-Wenzl site with lower-left vertex (x, y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JwSite {
    pub kind: JwSiteKind,
    pub x: i32,
    pub y: i32,
}

/// Edge patterns of every diagram in JW_k, routed inside a site.
#[derive(Clone, Debug)]
pub struct JwTable {
    /// Site edges as pairs of local vertices.
    pub region_edges: Vec<(Vertex, Vertex)>,
    pub identity: Vec<bool>,
    /// Non-identity diagrams with their JW coefficients.
    pub terms: Vec<(Vec<bool>, CycloNum)>,
}

struct Region {
    vertices: BTreeSet<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
    bottom: Vec<Vertex>,
    top: Vec<Vertex>,
}

fn region(k: usize, kind: JwSiteKind) -> Result<Region> {
    let k = k as i32;
    let (w, h) = match kind {
        JwSiteKind::Knob if k == 4 => (6, 3),
        JwSiteKind::Knob => return Err(Error::Invalid("knob sites need four strands".into())),
        _ => (k, k),
    };
    let mut vertices: BTreeSet<Vertex> = (0..w).flat_map(|x| (0..h).map(move |y| (x, y))).collect();
    let (bottom, top) = match kind {
        JwSiteKind::Horizontal => ((0..k).map(|i| (0, k - 1 - i)).collect(), (0..k).map(|i| (k - 1, k - 1 - i)).collect()),
        JwSiteKind::Vertical => ((0..k).map(|i| (i, 0)).collect(), (0..k).map(|i| (i, k - 1)).collect()),
        JwSiteKind::Knob => {
            vertices.insert((2, 3));
            vertices.insert((3, 3));
            (vec![(2, 3), (0, 2), (0, 1), (0, 0)], vec![(3, 3), (5, 2), (5, 1), (5, 0)])
        }
    };
    let mut edges = Vec::new();
    for &(x, y) in &vertices {
        for q in [(x + 1, y), (x, y + 1)] {
            if vertices.contains(&q) {
                edges.push(((x, y), q));
            }
        }
    }
    Ok(Region {
        vertices,
        edges,
        bottom,
        top,
    })
}

fn neighbors(reg: &Region, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
    [(1, 0), (0, 1), (-1, 0), (0, -1)]
        .into_iter()
        .map(move |(dx, dy)| (v.0 + dx, v.1 + dy))
        .filter(|q| reg.vertices.contains(q))
}

fn distances(reg: &Region, from: Vertex, blocked: &BTreeSet<Vertex>) -> HashMap<Vertex, usize> {
    let mut dist = HashMap::from([(from, 0)]);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for q in neighbors(reg, v) {
            if !blocked.contains(&q) && !dist.contains_key(&q) {
                dist.insert(q, dist[&v] + 1);
                queue.push_back(q);
            }
        }
    }
    dist
}

/// Vertex-disjoint paths realizing `pairs`; ports are used only as endpoints.
fn route_disjoint(reg: &Region, pairs: &[(Vertex, Vertex)], ports: &BTreeSet<Vertex>) -> Option<Vec<Vec<Vertex>>> {
    fn extend(
        reg: &Region,
        pairs: &[(Vertex, Vertex)],
        ports: &BTreeSet<Vertex>,
        used: &mut BTreeSet<Vertex>,
        path: &mut Vec<Vertex>,
        done: &mut Vec<Vec<Vertex>>,
    ) -> bool {
        let (_, target) = pairs[done.len()];
        let cur = *path.last().expect("path starts at a port");
        if cur == target {
            done.push(path.clone());
            if done.len() == pairs.len() {
                return true;
            }
            let (s, _) = pairs[done.len()];
            let mut next = vec![s];
            if extend(reg, pairs, ports, used, &mut next, done) {
                return true;
            }
            done.pop();
            return false;
        }
        let mut blocked = used.clone();
        blocked.extend(ports.iter().copied());
        blocked.remove(&target);
        blocked.remove(&cur);
        let dist = distances(reg, target, &blocked);
        let mut cand: Vec<(usize, Vertex)> = neighbors(reg, cur)
            .filter(|q| *q == target || (!used.contains(q) && !ports.contains(q)))
            .filter_map(|q| dist.get(&q).map(|&d| (d, q)))
            .collect();
        cand.sort();
        for (_, q) in cand {
            let fresh = used.insert(q);
            path.push(q);
            if extend(reg, pairs, ports, used, path, done) {
                return true;
            }
            path.pop();
            if fresh {
                used.remove(&q);
            }
        }
        false
    }
    let mut used: BTreeSet<Vertex> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut done = Vec::new();
    let mut first = vec![pairs[0].0];
    extend(reg, pairs, ports, &mut used, &mut first, &mut done).then_some(done)
}

fn pattern(reg: &Region, paths: &[Vec<Vertex>]) -> Vec<bool> {
    let mut on = BTreeSet::new();
    for p in paths {
        for w in p.windows(2) {
            on.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    reg.edges.iter().map(|e| on.contains(e)).collect()
}

fn build(k: usize, kind: JwSiteKind, kp: &Level) -> Result<JwTable> {
    let reg = region(k, kind)?;
    let port = |i: usize| if i < k { reg.bottom[i] } else { reg.top[i - k] };
    let ports: BTreeSet<Vertex> = reg.bottom.iter().chain(&reg.top).copied().collect();
    let ident_paths: Vec<Vec<Vertex>> = match kind {
        JwSiteKind::Horizontal => (0..k as i32).map(|y| (0..k as i32).map(|x| (x, y)).collect()).collect(),
        JwSiteKind::Vertical => (0..k as i32).map(|x| (0..k as i32).map(|y| (x, y)).collect()).collect(),
        JwSiteKind::Knob => {
            let mut v: Vec<Vec<Vertex>> = (0..3).map(|y| (0..6).map(|x| (x, y)).collect()).collect();
            v.push(vec![(2, 3), (3, 3)]);
            v
        }
    };
    let identity = pattern(&reg, &ident_paths);
    let jw = jones_wenzl(k, kp)?;
    let mut terms = Vec::new();
    for (d, c) in jw.terms() {
        if *d == crate::skein::PlanarDiagram::identity(k) {
            continue;
        }
        let mut pairs: Vec<(Vertex, Vertex)> = d.pairs().into_iter().map(|(a, b)| (port(a), port(b))).collect();
        let span = |&(a, b): &(Vertex, Vertex)| (a.0 - b.0).abs() + (a.1 - b.1).abs();
        pairs.sort_by_key(span);
        let paths = route_disjoint(&reg, &pairs, &ports)
            .ok_or_else(|| Error::Invalid(format!("diagram {d:?} does not fit a {kind:?} site")))?;
        terms.push((pattern(&reg, &paths), c.clone()));
    }
    Ok(JwTable {
        region_edges: reg.edges,
        identity,
        terms,
    })
}

type Key = (usize, JwSiteKind, u32, i64);

/// Routed JW_k table for a site kind, cached per level.
pub fn jw_routings(k: usize, kind: JwSiteKind, kp: &Level) -> Result<Arc<JwTable>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<JwTable>>>> = OnceLock::new();
    let key = (k, kind, kp.r, kp.a_exponent());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache").get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(build(k, kind, kp)?);
    cache.lock().expect("cache").insert(key, t.clone());
    Ok(t)
}

/// Routes each pair by a shortest path through allowed vertices, in order, never reusing a
/// vertex. Returns the vertex sequences.
pub fn route_pairs(
    board: &Board,
    pairs: &[(Vertex, Vertex)],
    allowed: impl Fn(Vertex) -> bool,
) -> Option<Vec<Vec<Vertex>>> {
    let mut used: BTreeSet<Vertex> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut out = Vec::new();
    for &(s, t) in pairs {
        let mut prev: HashMap<Vertex, Vertex> = HashMap::new();
        let mut queue = VecDeque::from([s]);
        let mut found = false;
        while let Some(v) = queue.pop_front() {
            if v == t {
                found = true;
                break;
            }
            for e in board.incident(v) {
                if board.defect_index(e).is_some() {
                    continue;
                }
                let (a, b) = board.endpoints(e);
                let q = if a == v { b } else { a };
                if q == s || prev.contains_key(&q) || !(q == t || (!used.contains(&q) && allowed(q))) {
                    continue;
                }
                prev.insert(q, v);
                queue.push_back(q);
            }
        }
        if !found {
            return None;
        }
        let mut path = vec![t];
        while *path.last().expect("nonempty") != s {
            let v = prev[path.last().expect("nonempty")];
            path.push(v);
        }
        path.reverse();
        used.extend(path.iter().copied());
        out.push(path);
    }
    Some(out)
}
