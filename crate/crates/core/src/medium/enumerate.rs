use crate::error::{Error, Result};
use crate::lattice::{Board, Picture, Rules};

/// Every picture admissible under `rules`, by depth-first assignment of edges in vertex order
/// with valence checks as soon as a vertex is complete.
pub fn enumerate_pictures(board: &Board, rules: &Rules, limit: usize) -> Result<Vec<Picture>> {
    let ne = board.edge_count();
    let vi = |e: usize| {
        let (a, b) = board.endpoints(e);
        (board.vertex_index(a), board.vertex_index(b))
    };
    let mut order: Vec<usize> = (0..ne).collect();
    order.sort_by_key(|&e| (vi(e).0.max(vi(e).1), e));
    let mut last = vec![0usize; board.vertex_count()];
    for (i, &e) in order.iter().enumerate() {
        let (a, b) = vi(e);
        last[a] = last[a].max(i);
        last[b] = last[b].max(i);
    }
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); ne];
    for (v, &i) in last.iter().enumerate() {
        closing[i].push(v);
    }
    let options: Vec<&[(bool, bool)]> = order
        .iter()
        .map(|&e| -> &[(bool, bool)] {
            if rules.is_relaxed(e) {
                &[(false, false), (true, false), (false, true), (true, true)]
            } else if board.defect_index(e).is_some() {
                &[(true, false), (false, true)]
            } else {
                &[(false, false), (true, true)]
            }
        })
        .collect();

    struct Search<'a> {
        board: &'a Board,
        rules: &'a Rules,
        order: Vec<usize>,
        closing: Vec<Vec<usize>>,
        options: Vec<&'a [(bool, bool)]>,
        limit: usize,
        out: Vec<Picture>,
    }

    impl Search<'_> {
        fn cap(&self, v: (i32, i32)) -> usize {
            if v == self.board.root() {
                1
            } else {
                2
            }
        }

        fn run(&mut self, i: usize, p: &mut Picture) -> Result<()> {
            if i == self.order.len() {
                if self.out.len() >= self.limit {
                    return Err(Error::Invalid(format!("more than {} admissible pictures", self.limit)));
                }
                self.out.push(p.clone());
                return Ok(());
            }
            let e = self.order[i];
            let (a, b) = self.board.endpoints(e);
            for k in 0..self.options[i].len() {
                let (h0, h1) = self.options[i][k];
                p.set_half(2 * e, h0);
                p.set_half(2 * e + 1, h1);
                let ok = p.valence(self.board, a) <= self.cap(a)
                    && p.valence(self.board, b) <= self.cap(b)
                    && self.closing[i]
                        .iter()
                        .all(|&v| self.rules.vertex_ok(self.board, p, self.board.vertex_at(v)));
                if ok {
                    self.run(i + 1, p)?;
                }
            }
            p.set_half(2 * e, false);
            p.set_half(2 * e + 1, false);
            Ok(())
        }
    }

    let mut s = Search {
        board,
        rules,
        order,
        closing,
        options,
        limit,
        out: Vec::new(),
    };
    s.run(0, &mut Picture::empty(board))?;
    Ok(s.out)
}
