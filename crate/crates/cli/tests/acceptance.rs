use clap::Parser;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::path::PathBuf;
use std::time::{Duration, Instant};
use tqmedium::functor::{BraidWord, FunctorSpace};
use tqmedium::lattice::{
    apply_move, candidate_moves, find_collared_tree, random_picture, read_picture, smooth_radical_generators,
    verify_relation, Board, BoardFile, Move, MoveKind, Picture, Rules,
};
use tqmedium::linalg::Matrix;
use tqmedium::skein::{jones_wenzl, AConvention, PlanarDiagram, SkeinElement};
use tqmedium::symbolic::delta_polys;
use tqmedium::{CycloNum, Level};
use tqmedium_cli::{run, RunConfig};

const CONVENTIONS: [AConvention; 2] = [AConvention::PositiveD, AConvention::Example];

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn cli(args: &[&str]) -> Value {
    let cfg = RunConfig::try_parse_from(std::iter::once("tqmedium").chain(args.iter().copied())).unwrap();
    run(&cfg).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

fn cyclo(v: &Value) -> CycloNum {
    serde_json::from_value(v.clone()).unwrap()
}

fn conv_flag(c: AConvention) -> &'static str {
    match c {
        AConvention::PositiveD => "positive-d",
        AConvention::Example => "example",
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(cond: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: cond,
        detail: detail.into(),
    }
}

fn worked_example() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for conv in CONVENTIONS {
        let k = Level::new(5, conv).unwrap();
        let out = cli(&["braid", "--n", "3", "--word", "s2", "--A", conv_flag(conv)]);
        let dinv = k.d.inverse().unwrap();
        let top = &k.a + &(&k.a_inv * &dinv);
        let root_coeff = &k.a_inv * &dinv;
        let disc = &(&k.d * &k.d) - &k.one();
        let col = [&out["unit"][0][0], &out["unit"][1][0]];
        let got = [
            (cyclo(&col[0]["rational"]), cyclo(&col[0]["root"])),
            (cyclo(&col[1]["rational"]), cyclo(&col[1]["root"])),
        ];
        let column_ok = got[0] == (top.clone(), k.zero())
            && got[1] == (k.zero(), root_coeff.clone())
            && cyclo(&out["sqrtOf"]) == disc;
        let a2 = &(&k.a * &k.a) + &(&k.a_inv * &k.a_inv);
        let identity = &(&(&k.one() + &(&a2 * &dinv)) + &(&dinv * &dinv)) + &(&disc * &(&dinv * &dinv));
        let norm = &(&top.conj() * &top) + &(&(&root_coeff.conj() * &root_coeff) * &disc);
        ok &= column_ok && identity.is_one() && norm.is_one();
        notes.push(format!(
            "{}: column {} identity {} norm {}",
            conv_flag(conv),
            column_ok,
            identity.is_one(),
            norm.is_one()
        ));
    }
    check(ok, notes.join("; "))
}

fn orthogonality() -> Outcome {
    let s = FunctorSpace::<BigRational>::new(3, 1, Level::new(5, AConvention::PositiveD).unwrap()).unwrap();
    let k = s.level();
    let cup = s.basis_vector(0).scale(&k.d.inverse().unwrap());
    let first = s.pairing(&cup, &cup).unwrap();
    let jw_norm = s.pairing(s.basis_vector(1), s.basis_vector(1)).unwrap();
    let second = &jw_norm * &s.norms()[1].inverse().unwrap();
    let cross = s.pairing(s.basis_vector(1), &cup).unwrap();
    check(
        first.is_one() && second.is_one() && cross.is_zero(),
        format!("values {}, {}, {}", first.embed().re, second.embed().re, cross.embed().norm()),
    )
}

fn jones_wenzl_suite() -> Outcome {
    let mut ok = true;
    let mut traces = Vec::new();
    for conv in CONVENTIONS {
        let k = Level::new(5, conv).unwrap();
        let delta = delta_polys(4);
        for (n, dn) in delta.iter().enumerate().skip(1) {
            let jw = jones_wenzl(n, &k).unwrap();
            ok &= jw.compose(&jw, &k.d).unwrap() == jw;
            for i in 1..n {
                let e = SkeinElement::from_diagram(PlanarDiagram::cup_cap(n, i).unwrap(), k.one());
                ok &= e.compose(&jw, &k.d).unwrap().is_zero() && jw.compose(&e, &k.d).unwrap().is_zero();
            }
            let tr = jw.markov_trace(&k.d).unwrap();
            ok &= tr == dn.eval(&k.d);
            if n == 4 {
                ok &= tr.is_zero() && jw.len() == 14;
                traces.push(format!("{}: trace(JW4) = {:.1e}, {} terms", conv_flag(conv), tr.embed().norm(), jw.len()));
            }
        }
    }
    check(ok, traces.join("; "))
}

fn representation_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut spaces = Vec::new();
    for conv in CONVENTIONS {
        for n in 2..=6usize {
            for root in (n % 2..=3).step_by(2) {
                let s = FunctorSpace::<BigRational>::new(n, root as u32, Level::new(5, conv).unwrap()).unwrap();
                if s.dim() > 0 {
                    spaces.push((conv, s));
                }
            }
        }
    }
    let mut ok = true;
    let mut pairs = 0;
    while pairs < 100 {
        let (_, s) = &spaces[rng.gen_range(0..spaces.len())];
        let n = s.leaf_count();
        let pre = BraidWord {
            strands: n,
            letters: (0..rng.gen_range(0..5)).map(|_| (rng.gen_range(1..n), rng.gen())).collect(),
        };
        let (i, j) = (rng.gen_range(1..n), rng.gen_range(1..n));
        if i == j {
            continue;
        }
        let (lhs, rhs) = if i.abs_diff(j) == 1 {
            (vec![(i, true), (j, true), (i, true)], vec![(j, true), (i, true), (j, true)])
        } else {
            (vec![(i, true), (j, true)], vec![(j, true), (i, true)])
        };
        let l = pre.concat(&BraidWord { strands: n, letters: lhs });
        let r = pre.concat(&BraidWord { strands: n, letters: rhs });
        let ml = s.represent(&l).unwrap();
        let g = s.gram().unwrap();
        ok &= ml == s.represent(&r).unwrap() && ml.adjoint().mul(&g).mul(&ml) == g;
        pairs += 1;
    }
    let mut min_eig = f64::INFINITY;
    for (conv, s) in &spaces {
        let k = s.level();
        let id = Matrix::identity(s.dim(), &k.one());
        for i in 1..s.leaf_count() {
            let m = s.generator_matrix(i, true).unwrap();
            let x = m.add(&id.scale(&-&k.a));
            let y = m.add(&id.scale(&k.a_pow(-3)));
            ok &= x.mul(&y).is_zero();
        }
        if *conv == AConvention::PositiveD {
            let e = s.unit_gram_numeric().unwrap().symmetric_eigenvalues();
            min_eig = min_eig.min(e.min());
        }
    }
    ok &= min_eig > 1.0 - 1e-9;
    check(ok, format!("{pairs} word pairs over {} spaces, min unit Gram eigenvalue {min_eig:.12}", spaces.len()))
}

fn transfer_oracle(n: usize, root: usize, r: usize) -> u64 {
    let top = r - 2;
    let mut v = vec![0u64; top + 1];
    v[0] = 1;
    for _ in 0..n {
        let mut w = vec![0u64; top + 1];
        for (m, &c) in v.iter().enumerate() {
            if m > 0 {
                w[m - 1] += c;
            }
            if m < top {
                w[m + 1] += c;
            }
        }
        v = w;
    }
    v[root]
}

fn dimension_triple_check() -> Outcome {
    let mut ok = true;
    let mut seen = Vec::new();
    for (n, want) in [(1usize, 1u64), (3, 2), (5, 5), (7, 13)] {
        let out = cli(&["dim", "--n", &n.to_string(), "--r", "5", "--root", "1"]);
        let oracle = transfer_oracle(n, 1, 5);
        let three = [&out["dimension"], &out["enumeration"], &out["gramRank"]].map(|v| v.as_u64().unwrap());
        ok &= oracle == want && three.iter().all(|&x| x == want);
        seen.push(format!("n={n}: {three:?}"));
    }
    check(ok, seen.join(", "))
}

fn lattice_soundness() -> Outcome {
    let kp = Level::new(5, AConvention::PositiveD).unwrap();
    let rules = Rules::strict();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut ok = true;
    let mut moves = std::collections::BTreeMap::<MoveKind, usize>::new();
    let mut generators = 0;
    for n in [1usize, 3] {
        let b = Board::roomy(n, 5).unwrap();
        for _ in 0..50 {
            let p = random_picture(&b, &kp, &mut rng, 300, 3).unwrap();
            let before = read_picture(&b, &p, &kp).unwrap();
            let mut cands = candidate_moves(&b, &p);
            cands.extend(b.defects().iter().map(|&e| Move::Undercrossing { edge: e }));
            for m in cands {
                let Ok(out) = apply_move(&b, &rules, &p, &m, &kp) else { continue };
                *moves.entry(out.kind).or_default() += 1;
                let mut after: Option<tqmedium::Skein> = None;
                for (q, c) in &out.terms {
                    ok &= q.check_admissible(&b);
                    let s = read_picture(&b, q, &kp).unwrap().scale(c);
                    after = Some(match after {
                        None => s,
                        Some(a) => a.add(&s).unwrap(),
                    });
                }
                ok &= after.is_some_and(|a| a == before);
            }
        }
        let space = FunctorSpace::new(n, 1, kp.clone()).unwrap();
        let samples: Vec<Picture> = (0..5).map(|_| random_picture(&b, &kp, &mut rng, 200, 2).unwrap()).collect();
        for g in smooth_radical_generators(&b, &samples, &space).unwrap() {
            let v = verify_relation(&b, &g, &space).unwrap();
            ok &= v.holds && !v.reduction.log.is_empty();
            generators += 1;
        }
    }
    ok &= generators > 0 && moves.len() >= 4;
    check(ok, format!("moves {moves:?}; {generators} radical generators verified with witnesses"))
}

fn ground_space_correspondence() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (file, modes) in [
        ("r3-single.json", &["picture-basis", "full-tensor"][..]),
        ("r3-triple.json", &["picture-basis"][..]),
        ("r5-triple.json", &["picture-basis"][..]),
    ] {
        let mut classes = None;
        for mode in modes {
            let out = cli(&["hamiltonian", "--input", &data(file), "--mode", mode]);
            let gs = &out["groundSpace"];
            let dim = gs["dimension"].as_u64().unwrap();
            let functor = out["functorDimension"].as_u64().unwrap();
            if let Some(c) = out["classCount"]["dimension"].as_u64() {
                classes = Some(c);
            }
            let residual = gs["residual"].as_f64().unwrap();
            ok &= Some(dim) == classes && dim == functor && residual < 1e-9;
            notes.push(format!(
                "{file} {mode}: basis {} ground {dim} classes {classes:?} functor {functor} residual {residual:.1e} gap {:.4}",
                out["basisSize"],
                gs["gap"].as_f64().unwrap_or(f64::NAN)
            ));
        }
    }
    check(ok, notes.join("; "))
}

fn write_temp(name: &str, v: &Value) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.display().to_string()
}

fn transport_properties() -> Outcome {
    let file: BoardFile = serde_json::from_str(&std::fs::read_to_string(data("r3-single.json")).unwrap()).unwrap();
    let b = Board::from_file(&file).unwrap();
    let w = b.defects()[0];
    let mut ok = true;
    let mut notes = Vec::new();
    for (label, w2) in [("collinear", b.h_edge(1, 1).unwrap()), ("corner", b.v_edge(0, 0).unwrap())] {
        let sched = write_temp(&format!("null-{label}.json"), &serde_json::json!({ "steps": [[[w, w2]]] }));
        let out = cli(&["transport", "--input", &data("r3-single.json"), "--schedule", &sched, "--close", "--substeps", "200"]);
        let rep = &out["report"];
        let dev = rep["identityDeviation"].as_f64().unwrap();
        let unit = rep["maxUnitarityError"].as_f64().unwrap();
        ok &= dev < 1e-6 && unit < 1e-9;
        notes.push(format!(
            "{label}: deviation {dev:.1e} unitarity {unit:.1e} min gap {:.3}",
            rep["minGap"].as_f64().unwrap()
        ));
    }
    check(ok, notes.join("; "))
}

fn exchange_stretch() -> String {
    let file: BoardFile = serde_json::from_str(&std::fs::read_to_string(data("r3-triple.json")).unwrap()).unwrap();
    let b = Board::from_file(&file).unwrap();
    let tree = find_collared_tree(&b).is_some();
    let sched = cli(&["schedule", "--input", &data("r3-triple.json"), "--defect", "0"]);
    let cfg = RunConfig::try_parse_from(["tqmedium", "transport", "--input", &data("r3-triple.json"), "--exchange", "0"]).unwrap();
    let result = match run(&cfg) {
        Ok(out) => format!(
            "eigenphase deviation {:.3e}, holonomy {:?}",
            out["comparison"]["eigenphaseDeviation"].as_f64().unwrap_or(f64::NAN),
            out["report"]["holonomy"]
        ),
        Err(e) => format!("not completed ({e})"),
    };
    format!(
        "r3-triple exchange: schedule {} steps, collared tree {tree}, defect spacing 2 vs roomy 9r = 27; {result}",
        sched["length"]
    )
}

fn schedule_claim() -> Outcome {
    let out = cli(&["schedule", "--input", &data("r5-roomy-pair.json"), "--defect", "0"]);
    let len = out["length"].as_u64().unwrap();
    let bound = out["bound"].as_u64().unwrap();
    check(len <= 2 * bound, format!("length {len}, claimed {bound}, asserted ≤ {}", 2 * bound))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 worked example", Duration::from_secs(1), worked_example),
        ("2 orthogonality", Duration::from_secs(5), orthogonality),
        ("3 Jones-Wenzl suite", Duration::from_secs(5), jones_wenzl_suite),
        ("4 representation suite", Duration::from_secs(120), representation_suite),
        ("5 dimension triple-check", Duration::from_secs(30), dimension_triple_check),
        ("6 lattice soundness", Duration::from_secs(300), lattice_soundness),
        ("7 ground-space correspondence", Duration::from_secs(300), ground_space_correspondence),
        ("8 transport properties", Duration::from_secs(300), transport_properties),
        ("9 schedule claim", Duration::from_secs(60), schedule_claim),
    ];
    let mut failed = Vec::new();
    for (name, limit, f) in criteria {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let pass = out.pass && took <= limit;
        println!(
            "{} criterion {name}: {} [{:.2} s, limit {} s]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
        if !pass {
            failed.push(name);
        }
        if name.starts_with('8') {
            println!("INFO criterion 8 stretch: {}", exchange_stretch());
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failed {failed:?}");
        std::process::exit(1);
    }
}
