use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tqmedium::functor::FunctorSpace;
use tqmedium::lattice::{apply_move, random_picture, smooth_reading, Board, Move, Picture, Rules};
use tqmedium::medium::*;
use tqmedium::skein::AConvention;
use tqmedium::{Error, Level};

const TOL: f64 = 1e-9;

fn level(r: u32) -> Level {
    Level::new(r, AConvention::PositiveD).unwrap()
}

/// Board with defects given as ('h' | 'v', x, y) lattice edges.
fn board(r: u32, bx: usize, by: usize, root: (i32, i32), defects: &[(char, i32, i32)], sites: &[(char, i32, i32)]) -> Board {
    let probe = Board::new(bx, by, r, vec![], root, vec![]).unwrap();
    let edge = |&(k, x, y): &(char, i32, i32)| if k == 'h' { probe.h_edge(x, y).unwrap() } else { probe.v_edge(x, y).unwrap() };
    Board::new(bx, by, r, defects.iter().map(edge).collect(), root, sites.iter().map(edge).collect()).unwrap()
}

fn functor_dim(n: usize, kp: &Level) -> usize {
    FunctorSpace::<BigRational>::new(n, 1, kp.clone()).unwrap().dim()
}

fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn zero_count(m: &DMatrix<Complex64>) -> usize {
    eigenvalues(m).iter().filter(|&&x| x.abs() < TOL).count()
}

/// Local configuration code of a picture on the qubits of an operator.
fn local_code(op: &LocalOperator, layout: &QubitLayout, p: &Picture) -> usize {
    op.qubits
        .iter()
        .enumerate()
        .filter(|&(_, &q)| p.half(layout.halves(q)[0]))
        .map(|(i, _)| 1 << i)
        .sum()
}

#[test]
fn vertex_term_on_a_four_star() {
    let kp = level(3);
    let b = board(3, 2, 2, (0, 2), &[], &[]);
    let layout = QubitLayout::new(&b, &Rules::strict());
    let term = LocalTerm::vertex(&b, (1, 1));
    let op = term.local_operator(&b, &layout, &kp).unwrap();
    assert_eq!(op.dim(), 16);
    assert_eq!(zero_count(&op.matrix()), 7);

    let a = assemble(&b, &Rules::strict(), &[term], Mode::FullTensor, &kp, DEFAULT_EDGE_CAP).unwrap();
    assert!(a.hamiltonian.rank_one.is_empty());
    let zeros = a.hamiltonian.diag.iter().filter(|&&x| x == 0.0).count();
    assert_eq!(zeros, 7 << (b.edge_count() - 4));
}

#[test]
fn defect_and_edge_pair_terms_have_two_ground_states() {
    let kp = level(3);
    let b = board(3, 2, 2, (1, 2), &[('h', 0, 1)], &[('v', 0, 0)]);
    let layout = QubitLayout::new(&b, &Rules::strict());
    let d = b.defects()[0];
    let s = b.v_edge(0, 0).unwrap();
    let defect = LocalTerm::defect(d).local_operator(&b, &layout, &kp).unwrap();
    let pair = LocalTerm::edge_pair(s).local_operator(&b, &layout, &kp).unwrap();
    assert_eq!(defect.diagonal, vec![1.0, 0.0, 0.0, 1.0]);
    assert_eq!(pair.diagonal, vec![0.0, 1.0, 1.0, 0.0]);
}

#[test]
fn circle_term_vector() {
    let kp = level(3);
    let b = board(3, 2, 2, (0, 2), &[], &[]);
    let layout = QubitLayout::new(&b, &Rules::strict());
    let op = LocalTerm::relation(&b, Move::Circle { x: 0, y: 0 }).local_operator(&b, &layout, &kp).unwrap();
    let mut square = Picture::empty(&b);
    for e in b.box_edges(0, 0).unwrap() {
        square.set_edge(e, true);
    }
    let code = local_code(&op, &layout, &square);
    assert_eq!(op.vectors.len(), 1);
    let v = &op.vectors[0];
    assert_eq!(v.len(), 2);
    let at = |c: usize| v.iter().find(|(i, _)| *i == c).unwrap().1;
    let ratio = at(0) / at(code);
    assert!((ratio + kp.d.embed()).norm() < 1e-12, "{ratio}");
}

#[test]
fn single_term_spectrum_is_padded_local_spectrum() {
    let kp = level(3);
    let b = board(3, 2, 1, (2, 1), &[], &[]);
    let layout = QubitLayout::new(&b, &Rules::strict());
    let term = LocalTerm::relation(&b, Move::Box { x: 0, y: 0 });
    let op = term.local_operator(&b, &layout, &kp).unwrap();
    let pad = 1 << (layout.len() - op.qubits.len());
    let mut expected: Vec<f64> = eigenvalues(&op.matrix()).into_iter().flat_map(|x| std::iter::repeat_n(x, pad)).collect();
    expected.sort_by(f64::total_cmp);
    let a = assemble(&b, &Rules::strict(), &[term], Mode::FullTensor, &kp, DEFAULT_EDGE_CAP).unwrap();
    let probe = spectral_probe(&a.hamiltonian, a.hamiltonian.dim, TOL).unwrap();
    for (x, y) in probe.eigenvalues.iter().zip(&expected) {
        assert!((x - y).abs() < 1e-9);
    }
    assert_eq!(probe.kernel_dimension, expected.iter().filter(|&&x| x < 1e-6).count());
}

#[test]
fn zero_operator_has_full_kernel() {
    let h = SparseHamiltonian {
        dim: 6,
        diag: vec![0.0; 6],
        rank_one: vec![],
    };
    assert_eq!(ground_space(&h, TOL).unwrap().dimension, 6);
    let probe = spectral_probe(&h, 3, TOL).unwrap();
    assert_eq!(probe.eigenvalues, vec![0.0; 3]);
}

#[test]
fn full_tensor_cap_is_enforced() {
    let kp = level(3);
    let b = board(3, 3, 3, (2, 3), &[('h', 1, 1)], &[]);
    let err = MediumState::new(b, Mode::FullTensor).assemble(&kp, DEFAULT_EDGE_CAP).unwrap_err();
    assert_eq!(err, Error::CapExceeded { edges: 24, cap: 22 });
}

fn r3_single() -> Board {
    board(3, 2, 2, (1, 2), &[('h', 0, 1)], &[])
}

#[test]
fn full_tensor_and_picture_basis_agree() {
    let kp = level(3);
    let b = r3_single();
    let full = MediumState::new(b.clone(), Mode::FullTensor).assemble(&kp, DEFAULT_EDGE_CAP).unwrap();
    let pics = MediumState::new(b.clone(), Mode::PictureBasis).assemble(&kp, DEFAULT_EDGE_CAP).unwrap();
    let gf = ground_space(&full.hamiltonian, TOL).unwrap();
    let gp = ground_space(&pics.hamiltonian, TOL).unwrap();
    let cc = class_count(pics.basis.len(), &pics.relations, &kp.one()).unwrap();
    assert_eq!(gf.dimension, 1);
    assert_eq!(gp.dimension, 1);
    assert_eq!(cc.dimension, 1);
    assert_eq!(functor_dim(1, &kp), 1);
    assert!(gf.residual < TOL && gp.residual < TOL);
    assert!((gf.gap.unwrap() - gp.gap.unwrap()).abs() < 1e-8);

    let Basis::Tensor(layout) = &full.basis else { panic!("tensor basis") };
    let overlap: Complex64 = (0..pics.basis.len())
        .map(|i| gf.vectors[(layout.encode(&pics.basis.picture(&b, i)), 0)].conj() * gp.vectors[(i, 0)])
        .sum();
    assert!((overlap.norm() - 1.0).abs() < 1e-9);
}

#[test]
fn ground_space_is_the_span_of_readings() {
    let kp = level(3);
    let b = board(3, 5, 3, (2, 3), &[('h', 0, 1), ('h', 2, 1), ('h', 4, 1)], &[]);
    let a = MediumState::new(b.clone(), Mode::PictureBasis).assemble(&kp, DEFAULT_EDGE_CAP).unwrap();
    let g = ground_space(&a.hamiltonian, TOL).unwrap();
    let cc = class_count(a.basis.len(), &a.relations, &kp.one()).unwrap();
    let f = functor_dim(3, &kp);
    assert_eq!((g.dimension, cc.dimension), (f, f));
    assert!(g.residual < TOL);

    for rel in &a.relations {
        for c in 0..g.dimension {
            let mut z = g.vectors[(rel.source, c)];
            for (j, k) in &rel.terms {
                z -= k.embed() * g.vectors[(*j, c)];
            }
            assert!(z.norm() < 1e-8);
        }
    }

    let space = FunctorSpace::<BigRational>::new(3, 1, kp.clone()).unwrap();
    let mut readings = DMatrix::zeros(a.basis.len(), f);
    for i in 0..a.basis.len() {
        let v = smooth_reading(&b, &a.basis.picture(&b, i), &space).unwrap();
        for j in 0..f {
            readings[(i, j)] = v.coords[j].embed();
        }
    }
    let k = &g.vectors;
    let outside = &readings - k * (k.adjoint() * &readings);
    assert!(outside.norm() < 1e-8 * readings.norm());
    let rank = readings.svd(false, false).singular_values.iter().filter(|&&s| s > 1e-6).count();
    assert_eq!(rank, f);
}

#[test]
fn even_defect_count_has_no_ground_state() {
    let kp = level(3);
    let b = board(3, 4, 2, (2, 2), &[('h', 0, 1), ('h', 3, 1)], &[]);
    let a = MediumState::new(b, Mode::PictureBasis).assemble(&kp, DEFAULT_EDGE_CAP).unwrap();
    assert_eq!(ground_space(&a.hamiltonian, TOL).unwrap().dimension, 0);
    assert_eq!(class_count(a.basis.len(), &a.relations, &kp.one()).unwrap().dimension, 0);
    assert_eq!(functor_dim(2, &kp), 0);
}

#[test]
fn swap_and_reverse_restore_terms() {
    let kp = level(3);
    let b = board(3, 2, 2, (1, 2), &[('h', 0, 1)], &[('h', 1, 1), ('v', 0, 0)]);
    let w = b.defects()[0];
    let s0 = MediumState::new(b.clone(), Mode::PictureBasis);
    for w2 in [b.h_edge(1, 1).unwrap(), b.v_edge(0, 0).unwrap()] {
        let s1 = defect_swap_step(&s0, w, w2).unwrap();
        assert_eq!(s1.board.defects(), [w2]);
        assert_eq!(s1.terms, build_terms(&s1.board));
        assert!(s1.terms.contains(&LocalTerm::edge_pair(w)));
        assert!(s1.terms.contains(&LocalTerm::defect(w2)));
        let s2 = defect_swap_step(&s1, w2, w).unwrap();
        assert_eq!(s2.terms, s0.terms);
        let g = ground_space(&s1.assemble(&kp, DEFAULT_EDGE_CAP).unwrap().hamiltonian, TOL).unwrap();
        assert_eq!(g.dimension, 1);
    }
    let far = b.h_edge(1, 0).unwrap();
    let b2 = board(3, 2, 2, (1, 2), &[('h', 0, 1)], &[('h', 1, 0)]);
    let err = defect_swap_step(&MediumState::new(b2, Mode::PictureBasis), w, far).unwrap_err();
    assert!(matches!(err, Error::NotAdjacent(_)));
    assert!(matches!(defect_swap_step(&s0, b.v_edge(0, 0).unwrap(), w), Err(Error::Invalid(_))));
}

#[test]
fn exchange_schedule_is_collision_free() {
    let b = Board::roomy(2, 5).unwrap();
    let s = exchange_schedule(&b, 0).unwrap();
    assert_eq!(s.len(), 47);
    assert!(s.len() <= 2 * 4 * (5 + 1));
    let mut pos = b.defects().to_vec();
    let touch = |a: usize, c: usize| {
        let (p, q) = b.endpoints(a);
        let (u, v) = b.endpoints(c);
        a == c || p == u || p == v || q == u || q == v
    };
    for step in &s.steps {
        for &(from, to) in step {
            assert!(touch(from, to) && from != to);
            let k = pos.iter().position(|&e| e == from).unwrap();
            pos[k] = to;
        }
        assert!(!touch(pos[0], pos[1]));
    }
    assert_eq!(pos, [b.defects()[1], b.defects()[0]]);
    for step in &s.reversed().steps {
        for &(from, to) in step {
            let k = pos.iter().position(|&e| e == from).unwrap();
            pos[k] = to;
        }
    }
    assert_eq!(pos, b.defects());
}

#[test]
fn exchange_on_a_tight_board_has_no_schedule() {
    let b = board(3, 4, 1, (0, 1), &[('h', 0, 0), ('h', 2, 0)], &[]);
    assert!(matches!(exchange_schedule(&b, 0), Err(Error::NoSchedule(_))));
}

#[test]
fn null_cycles_transport_to_the_identity() {
    let kp = level(3);
    let b = r3_single();
    let w = b.defects()[0];
    let still = transport(&b, &Schedule { steps: vec![vec![]] }, 10, &kp, TOL).unwrap();
    assert!(still.identity_deviation < 1e-12);
    for w2 in [b.h_edge(1, 1).unwrap(), b.v_edge(0, 0).unwrap()] {
        let forward = Schedule { steps: vec![vec![(w, w2)]] };
        let cycle = Schedule {
            steps: [forward.steps.clone(), forward.reversed().steps].concat(),
        };
        let rep = transport(&b, &cycle, 200, &kp, TOL).unwrap();
        assert_eq!(rep.ground_dimension, 1);
        assert!(rep.identity_deviation < 1e-6, "{}", rep.identity_deviation);
        assert!(rep.max_unitarity_error < 1e-9);
        assert!(rep.min_singular_value > 1e-6);
    }
}

#[test]
fn endpoint_slides_agree_with_readings() {
    let kp = level(5);
    let probe = Board::new(24, 16, 5, vec![], (18, 16), vec![]).unwrap();
    let mixed = vec![probe.v_edge(6, 6).unwrap(), probe.h_edge(12, 6).unwrap(), probe.v_edge(18, 6).unwrap()];
    let boards = [Board::roomy(1, 5).unwrap(), Board::new(24, 16, 5, mixed, (18, 16), vec![]).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for b0 in boards {
        let space = FunctorSpace::<BigRational>::new(b0.defects().len(), 1, kp.clone()).unwrap();
        for _ in 0..25 {
            let p = random_picture(&b0, &kp, &mut rng, 300, 3).unwrap();
            for (d, &w) in b0.defects().iter().enumerate() {
                let (a, c) = b0.endpoints(w);
                let near: Vec<usize> = b0.incident(a).chain(b0.incident(c)).filter(|&f| f != w).collect();
                for w2 in near {
                    let mut defects = b0.defects().to_vec();
                    defects[d] = w2;
                    let b1 = b0.with_defects(defects).unwrap();
                    if b1.input_order() != b0.input_order() {
                        continue;
                    }
                    let Some((q, c)) = endpoint_slide(&b0, &p, w, w2, &kp) else { continue };
                    if !q.check_admissible(&b1) {
                        continue;
                    }
                    let Ok(after) = smooth_reading(&b1, &q, &space) else { continue };
                    assert_eq!(after, smooth_reading(&b0, &p, &space).unwrap().scale(&c));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn moves_act_inside_their_support() {
    for (r, b) in [(3, board(3, 3, 3, (2, 3), &[('h', 1, 1)], &[])), (5, board(5, 4, 4, (0, 0), &[('h', 1, 3), ('v', 3, 2), ('h', 1, 1)], &[]))] {
        let kp = level(r);
        let pics = enumerate_pictures(&b, &Rules::strict(), PICTURE_LIMIT).unwrap();
        let terms: Vec<LocalTerm> = build_terms(&b).into_iter().filter(|t| t.site().is_some()).collect();
        let mut moved = 0;
        for p in pics.iter().take(3000) {
            for t in &terms {
                let inner = |v| b.incident(v).all(|f| t.support.contains(&f));
                let Ok(out) = apply_move(&b, &Rules::strict(), p, &t.site().unwrap(), &kp) else { continue };
                for (q, _) in &out.terms {
                    for e in 0..b.edge_count() {
                        if p.edge_state(e) != q.edge_state(e) {
                            let (u, v) = b.endpoints(e);
                            assert!(inner(u) && inner(v), "{:?} changes edge {e}", t.anchor);
                            moved += 1;
                        }
                    }
                }
            }
        }
        assert!(moved > 0);
    }
}

fn tiny_terms() -> (Board, Vec<LocalTerm>) {
    let b = board(3, 3, 3, (2, 3), &[('h', 1, 1)], &[('h', 2, 1)]);
    let terms = build_terms(&b);
    (b, terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn local_terms_are_hermitian_and_positive(i in 0usize..1000) {
        let kp = level(3);
        let (b, terms) = tiny_terms();
        let layout = QubitLayout::new(&b, &Rules::strict());
        let term = &terms[i % terms.len()];
        prop_assume!(term.support.iter().map(|&e| layout.qubits_of(e).len()).sum::<usize>() <= 10);
        let op = term.local_operator(&b, &layout, &kp).unwrap();
        for v in &op.vectors {
            let norm: f64 = v.iter().map(|(_, z)| z.norm_sqr()).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }
        let m = op.matrix();
        prop_assert!((&m - m.adjoint()).norm() < 1e-12);
        prop_assert!(eigenvalues(&m)[0] > -1e-10);
    }
}
