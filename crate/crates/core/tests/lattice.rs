use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tqmedium::functor::{FunctorSpace, FunctorVector};
use tqmedium::lattice::{
    add_circle, apply_move, candidate_moves, find_collared_tree, jw_routings, jw_sites, pull_tight, random_picture, read_picture, reduce_picture,
    smooth_radical_generators, smooth_reading, standard_picture, twist_factor, verify_relation, Board, JwSite,
    JwSiteKind, Move, MoveKind, Picture, PictureVector, Rules,
};
use tqmedium::skein::AConvention;
use tqmedium::{CycloNum, Level, Skein};

fn level() -> Level {
    Level::new(5, AConvention::PositiveD).unwrap()
}

fn space(n: usize) -> FunctorSpace<BigRational> {
    FunctorSpace::new(n, 1, level()).unwrap()
}

fn reading_sum(board: &Board, terms: &[(Picture, CycloNum)], kp: &Level) -> Skein {
    let mut acc: Option<Skein> = None;
    for (q, c) in terms {
        let s = read_picture(board, q, kp).unwrap().scale(c);
        acc = Some(match acc {
            None => s,
            Some(a) => a.add(&s).unwrap(),
        });
    }
    acc.unwrap()
}

fn projected_sum(board: &Board, terms: &[(Picture, CycloNum)], s: &FunctorSpace<BigRational>) -> FunctorVector<BigRational> {
    let mut acc = FunctorVector { coords: vec![s.level().zero(); s.dim()] };
    for (q, c) in terms {
        acc = acc.add(&smooth_reading(board, q, s).unwrap().scale(c));
    }
    acc
}

/// Rectangle boundary with corners (x0, y0), (x1, y1).
fn rectangle(board: &Board, p: &mut Picture, x0: i32, y0: i32, x1: i32, y1: i32) {
    for x in x0..x1 {
        p.set_edge(board.h_edge(x, y0).unwrap(), true);
        p.set_edge(board.h_edge(x, y1).unwrap(), true);
    }
    for y in y0..y1 {
        p.set_edge(board.v_edge(x0, y).unwrap(), true);
        p.set_edge(board.v_edge(x1, y).unwrap(), true);
    }
}

#[test]
fn admissibility_examples() {
    let b = Board::roomy(1, 5).unwrap();
    assert!(!Picture::empty(&b).check_admissible(&b));
    let arc = standard_picture(&b).unwrap();
    assert!(arc.check_admissible(&b));
    let mut touching = arc.clone();
    rectangle(&b, &mut touching, 1, 20, 3, 22);
    assert!(touching.check_admissible(&b));
    rectangle(&b, &mut touching, 3, 22, 4, 24);
    assert_eq!(touching.valence(&b, (3, 22)), 4);
    assert!(!touching.check_admissible(&b));
}

/// Three defects on vertical, horizontal and vertical edges.
fn mixed_board() -> Board {
    let probe = Board::new(24, 16, 5, vec![], (18, 16), vec![]).unwrap();
    let defects = vec![probe.v_edge(6, 6).unwrap(), probe.h_edge(12, 6).unwrap(), probe.v_edge(18, 6).unwrap()];
    Board::new(24, 16, 5, defects, (18, 16), vec![]).unwrap()
}

#[test]
fn moves_are_sound_on_random_pictures() {
    let kp = level();
    let rules = Rules::strict();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut counts = std::collections::BTreeMap::new();
    let boards = [Board::roomy(1, 5).unwrap(), Board::roomy(3, 5).unwrap(), mixed_board()];
    for b in boards {
        let n = b.defects().len();
        let s = space(n);
        for _ in 0..30 {
            let p = random_picture(&b, &kp, &mut rng, 400, 4).unwrap();
            let mut moves = candidate_moves(&b, &p);
            for &e in b.defects() {
                let ((x, y), _) = b.endpoints(e);
                for dx in -1..=1 {
                    for dy in -1..=0 {
                        moves.push(Move::Box { x: x + dx, y: y + dy });
                    }
                }
            }
            for m in moves {
                let Ok(out) = apply_move(&b, &rules, &p, &m, &kp) else { continue };
                *counts.entry(out.kind).or_insert(0usize) += 1;
                for (q, _) in &out.terms {
                    assert!(q.check_admissible(&b), "{m:?} broke admissibility");
                }
                let lhs = read_picture(&b, &p, &kp).unwrap();
                let rhs = reading_sum(&b, &out.terms, &kp);
                assert_eq!(lhs, rhs, "{m:?} on\n{}", p.render(&b));
                assert_eq!(smooth_reading(&b, &p, &s).unwrap(), projected_sum(&b, &out.terms, &s));
            }
        }
    }
    for kind in [MoveKind::Isotopy, MoveKind::Endpoint, MoveKind::Circle] {
        assert!(counts.get(&kind).copied().unwrap_or(0) > 0, "no {kind:?} move exercised: {counts:?}");
    }
}

#[test]
fn undercrossings_are_sound() {
    let kp = level();
    let rules = Rules::strict();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for b in [Board::roomy(3, 5).unwrap(), mixed_board()] {
        let mut seen = [0usize; 2];
        for _ in 0..400 {
            let p = random_picture(&b, &kp, &mut rng, 300, 4).unwrap();
            for &e in b.defects() {
                let Ok(out) = apply_move(&b, &rules, &p, &Move::Undercrossing { edge: e }, &kp) else { continue };
                assert_eq!(out.terms.len(), 2);
                seen[usize::from(b.is_horizontal(e))] += 1;
                let lhs = read_picture(&b, &p, &kp).unwrap();
                assert_eq!(lhs, reading_sum(&b, &out.terms, &kp), "\n{}", p.render(&b));
            }
        }
        assert!(seen[1] > 0);
        if b.defects().iter().any(|&e| !b.is_horizontal(e)) {
            assert!(seen[0] > 0, "no vertical undercrossing exercised");
        }
    }
}

#[test]
fn endpoint_sweep_through_the_base_ray_twists() {
    let kp = level();
    let b = Board::roomy(1, 5).unwrap();
    let p = standard_picture(&b).unwrap();
    let e = b.defects()[0];
    let ((x, y), _) = b.endpoints(e);
    let rules = Rules::strict();
    let down = apply_move(&b, &rules, &p, &Move::Box { x, y: y - 1 }, &kp);
    let up = apply_move(&b, &rules, &p, &Move::Box { x, y }, &kp).unwrap();
    assert_eq!(up.kind, MoveKind::Endpoint);
    let (q, c) = up.terms[0].clone();
    let back = apply_move(&b, &rules, &q, &Move::Box { x, y: y - 1 }, &kp).unwrap();
    let (q2, c2) = back.terms[0].clone();
    let t = twist_factor(&kp);
    assert_eq!(&c * &c2, t.inverse().unwrap());
    assert_eq!(read_picture(&b, &p, &kp).unwrap(), read_picture(&b, &q2, &kp).unwrap().scale(&(&c * &c2)));
    assert!(down.is_err() || down.unwrap().terms.len() == 1);
    assert_eq!(t, -&kp.a_pow(3));
}

#[test]
fn jw_moves_are_sound_on_nested_loops() {
    let kp = level();
    let rules = Rules::strict();
    let b = Board::roomy(3, 5).unwrap();
    let s = space(3);
    let base = standard_picture(&b).unwrap();
    let mut block = base.clone();
    for i in 0..4 {
        rectangle(&b, &mut block, 20 + i, 10 + i, 40 - i, 30 - i);
    }
    for site in [
        JwSite { kind: JwSiteKind::Vertical, x: 20, y: 15 },
        JwSite { kind: JwSiteKind::Horizontal, x: 25, y: 10 },
    ] {
        assert!(jw_sites(&b).contains(&site));
        let out = apply_move(&b, &rules, &block, &Move::Jw(site), &kp).unwrap();
        assert_eq!(out.kind, MoveKind::JwBlock);
        assert_eq!(out.terms.len(), 13);
        for (q, _) in &out.terms {
            assert!(q.check_admissible(&b));
        }
        assert_eq!(smooth_reading(&b, &block, &s).unwrap(), projected_sum(&b, &out.terms, &s));
    }

    let mut knob = base;
    for i in 0..3 {
        rectangle(&b, &mut knob, 20 + i, 10 + i, 40 - i, 30 - i);
    }
    rectangle(&b, &mut knob, 27, 13, 28, 20);
    let site = JwSite { kind: JwSiteKind::Knob, x: 25, y: 10 };
    let out = apply_move(&b, &rules, &knob, &Move::Jw(site), &kp).unwrap();
    assert_eq!(out.kind, MoveKind::JwKnob);
    for (q, _) in &out.terms {
        assert!(q.check_admissible(&b));
    }
    assert_eq!(smooth_reading(&b, &knob, &s).unwrap(), projected_sum(&b, &out.terms, &s));
}

#[test]
fn pull_tight_examples() {
    let kp = level();
    let b = Board::roomy(1, 5).unwrap();
    let arc = standard_picture(&b).unwrap();
    let id = PictureVector::single(arc.clone(), kp.one());
    let out = pull_tight(&b, &id, &kp).unwrap();
    assert_eq!(out.vector, id);
    assert!(out.log.is_empty());

    let mut looped = arc.clone();
    rectangle(&b, &mut looped, 1, 10, 4, 16);
    let out = pull_tight(&b, &PictureVector::single(looped, kp.one()), &kp).unwrap();
    assert_eq!(out.vector, PictureVector::single(arc.clone(), kp.d.clone()));

    let mut circle = arc.clone();
    circle = add_circle(&b, &circle, 8, 30).unwrap();
    let rel = PictureVector::single(circle, kp.one()).add(&PictureVector::single(arc, -&kp.d));
    let v = verify_relation(&b, &rel, &space(1)).unwrap();
    assert!(v.holds);
    assert_eq!(v.reduction.log.len(), 1);
}

#[test]
fn reduction_matches_smooth_reading() {
    let kp = level();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [1usize, 3] {
        let b = Board::roomy(n, 5).unwrap();
        let s = space(n);
        for _ in 0..12 {
            let steps = rng.gen_range(50..400);
            let p = random_picture(&b, &kp, &mut rng, steps, 3).unwrap();
            let red = reduce_picture(&b, &PictureVector::single(p.clone(), kp.one()), &s).unwrap();
            assert_eq!(red.coords, smooth_reading(&b, &p, &s).unwrap(), "\n{}", p.render(&b));
        }
    }
}

#[test]
fn smooth_radical_relations_hold_combinatorially() {
    let kp = level();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let b = Board::roomy(3, 5).unwrap();
    let s = space(3);
    let samples: Vec<Picture> = (0..4).map(|_| random_picture(&b, &kp, &mut rng, 200, 2).unwrap()).collect();
    let gens = smooth_radical_generators(&b, &samples, &s).unwrap();
    assert!(!gens.is_empty());
    for g in gens {
        let v = verify_relation(&b, &g, &s).unwrap();
        assert!(v.holds);
    }
}

#[test]
fn every_jw4_diagram_fits_each_site() {
    let kp = level();
    for kind in [JwSiteKind::Horizontal, JwSiteKind::Vertical, JwSiteKind::Knob] {
        let t = jw_routings(4, kind, &kp).unwrap();
        assert_eq!(t.terms.len(), 13);
        assert!(t.terms.iter().all(|(p, _)| *p != t.identity));
    }
}

#[test]
fn small_blocks_route() {
    for r in 3..5 {
        let kp = Level::new(r, AConvention::PositiveD).unwrap();
        let t = jw_routings(r as usize - 1, JwSiteKind::Vertical, &kp).unwrap();
        assert_eq!(t.identity.iter().filter(|&&b| b).count(), (r as usize - 1) * (r as usize - 2));
    }
}

#[test]
fn roomy_boards_have_trees() {
    let b1 = Board::roomy(1, 5).unwrap();
    let t1 = find_collared_tree(&b1).unwrap();
    assert_eq!(t1.segments.len(), 1);
    assert!(t1.branch_points.is_empty());
    let b3 = Board::roomy(3, 5).unwrap();
    let t3 = find_collared_tree(&b3).unwrap();
    assert_eq!(t3.branch_points.len(), 2);
    assert!(t3.segments.iter().all(|s| s.length > 15));
}

#[test]
fn crowded_defects_are_not_roomy() {
    let b = Board::roomy(2, 5).unwrap();
    let e = b.h_edge(10, 5).unwrap();
    let crowded = b.with_defects(vec![b.defects()[0], e]).unwrap();
    assert!(find_collared_tree(&crowded).is_none());
}

#[test]
fn tree_weights_follow_distance() {
    let b = Board::roomy(1, 5).unwrap();
    let t = find_collared_tree(&b).unwrap();
    let (x, y) = (5, 12);
    let on = b.v_edge(x, y).unwrap();
    let far = b.v_edge(x + 2, y).unwrap();
    let mut p = Picture::empty(&b);
    p.set_edge(on, true);
    assert_eq!(t.weight_length(&b, &p), BigRational::one());
    let mut q = Picture::empty(&b);
    q.set_edge(far, true);
    assert_eq!(t.weight_length(&b, &q), BigRational::from_integer(100.into()));
    assert!(t.weight_length(&b, &Picture::empty(&b)).is_zero());
}
