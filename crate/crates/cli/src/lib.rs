//! Batch front end: one command per run, JSON report out.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use tqmedium::functor::{dimension, enumerate_basis, gram_rank, BraidWord, FunctorSpace, FunctorVector};
use tqmedium::lattice::{
    random_picture, reduce_picture, verify_relation, Board, BoardFile, MoveRecord, Picture, PictureFile,
    PictureVector,
};
use tqmedium::linalg::Matrix;
use tqmedium::medium::{
    build_terms, class_count, exchange_schedule, ground_space, spectral_probe, transport, Basis, MediumState, Mode,
    Schedule, DEFAULT_EDGE_CAP,
};
use tqmedium::quad::Quad;
use tqmedium::skein::{jones_wenzl, AConvention, PlanarDiagram};
use tqmedium::symbolic::{jones_wenzl_in_d, render_jones_wenzl, tl_words};
use tqmedium::{CycloNum, Error, Level};

/// Exit status classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Failure {
    Parse,
    Precondition,
    Solver,
}

impl Failure {
    pub fn exit_code(self) -> i32 {
        match self {
            Failure::Parse => 2,
            Failure::Precondition => 3,
            Failure::Solver => 4,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Failure,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::Parse(_) => Failure::Parse,
            Error::Solver(_)
            | Error::DimensionJump { .. }
            | Error::IllConditioned { .. }
            | Error::PullTightExhausted(_) => Failure::Solver,
            _ => Failure::Precondition,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

fn fail(kind: Failure, message: impl Into<String>) -> CliError {
    CliError {
        kind,
        message: message.into(),
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "picture-basis", alias = "pictureBasis")]
    PictureBasis,
    #[value(name = "full-tensor", alias = "fullTensor")]
    FullTensor,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::PictureBasis => Mode::PictureBasis,
            ModeArg::FullTensor => Mode::FullTensor,
        }
    }
}

/// Run configuration.
#[derive(Debug, Parser)]
#[command(name = "tqmedium", version, about = "Temperley-Lieb and lattice-medium workbench")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Level r (at least 2; lattice commands take it from the board file when omitted).
    #[arg(long, global = true)]
    pub r: Option<u32>,
    /// Choice of A: `example` or `positive-d`.
    #[arg(long = "A", global = true, default_value = "positive-d", value_name = "CONVENTION")]
    pub convention: AConvention,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::PictureBasis)]
    pub mode: ModeArg,
    /// Numerical tolerance for kernels and residuals.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 200)]
    pub substeps: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report path (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Add complex-float renderings next to exact values.
    #[arg(long, global = true)]
    pub embed: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Functor dimensions for one leaf count, or a table.
    Dim {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        root: u32,
        /// Largest leaf count in the table.
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// Jones-Wenzl projector expansion.
    Jw {
        #[arg(long)]
        k: usize,
    },
    /// Representation matrix of a braid word such as "s1 s2^-1".
    Braid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
        /// Root label (n mod 2 when omitted).
        #[arg(long)]
        root: Option<u32>,
    },
    /// Pull a picture tight and read its tree coordinates with the move log as witness.
    Reduce {
        /// Picture file; a random picture on a roomy board is drawn from the seed otherwise.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Defect count of the roomy board used without an input file.
        #[arg(long, default_value_t = 1)]
        defects: usize,
    },
    /// Check that a relation file reduces to zero.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Term list, ground space and low spectrum of a board.
    Hamiltonian {
        #[arg(long)]
        input: PathBuf,
        /// Number of low eigenvalues to report.
        #[arg(long, default_value_t = 8)]
        lowest: usize,
    },
    /// Exchange schedule for the defects at input-order positions i and i + 1.
    Schedule {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        defect: usize,
    },
    /// Transport the ground space along a schedule.
    Transport {
        #[arg(long)]
        input: PathBuf,
        /// Schedule file; the exchange of `--exchange` is used otherwise.
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long)]
        exchange: Option<usize>,
        /// Append the reversed schedule to make a null cycle.
        #[arg(long)]
        close: bool,
    },
}

/// Relation file: a board and a list of weighted pictures on it.
#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RelationFile {
    #[serde(flatten)]
    pub board: BoardFile,
    pub terms: Vec<RelationTerm>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RelationTerm {
    #[serde(default)]
    pub occupied: Vec<usize>,
    #[serde(default)]
    pub half_edges: Vec<[usize; 2]>,
    pub coeff: CycloNum,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(Failure::Parse, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| fail(Failure::Parse, format!("{}: {e}", path.display())))
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

impl RunConfig {
    fn level(&self, board_r: Option<u32>) -> CliResult<Level> {
        let r = match (self.r, board_r) {
            (Some(a), Some(b)) if a != b => {
                return Err(fail(Failure::Precondition, format!("--r {a} differs from the board level {b}")))
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => 5,
        };
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(fail(Failure::Precondition, "tolerance must be positive"));
        }
        Ok(Level::new(r, self.convention)?)
    }

    fn cyclo(&self, c: &CycloNum) -> Value {
        let mut v = serde_json::to_value(c).expect("serializable");
        if self.embed {
            v["embed"] = complex(c.embed());
        }
        v
    }

    fn quad(&self, q: &Quad<BigRational>) -> Value {
        let mut v = json!({ "rational": self.cyclo(q.rational_part()), "root": self.cyclo(q.root_part()) });
        if self.embed {
            v["embed"] = complex(tqmedium::linalg::FieldElem::embed(q));
        }
        v
    }

    fn cyclo_grid(&self, m: &Matrix<CycloNum>) -> Value {
        Value::Array(
            (0..m.rows())
                .map(|i| Value::Array((0..m.cols()).map(|j| self.cyclo(m.get(i, j))).collect()))
                .collect(),
        )
    }

    fn coords(&self, space: &FunctorSpace<BigRational>, v: &FunctorVector<BigRational>) -> Value {
        let (exact, numeric) = space.unit_coordinates(v);
        let mut out = json!({
            "basis": space.basis().iter().map(|l| l.labels.clone()).collect::<Vec<_>>(),
            "tree": v.coords.iter().map(|c| self.cyclo(c)).collect::<Vec<_>>(),
            "unit": exact.map(|u| u.iter().map(|q| self.quad(q)).collect::<Vec<_>>()),
        });
        if self.embed {
            out["unitEmbed"] = Value::Array(numeric.into_iter().map(complex).collect());
        }
        out
    }
}

fn load_board(path: &Path) -> CliResult<Board> {
    let f: BoardFile = read_json(path)?;
    Ok(Board::from_file(&f)?)
}

fn witness(log: &[MoveRecord]) -> Value {
    serde_json::to_value(log).expect("serializable")
}

fn matching(d: &PlanarDiagram) -> Value {
    json!(d.pairs())
}

/// Executes one command and returns its JSON report.
pub fn run(cfg: &RunConfig) -> CliResult<Value> {
    match &cfg.command {
        Command::Dim { n, root, max_n } => run_dim(cfg, *n, *root, *max_n),
        Command::Jw { k } => run_jw(cfg, *k),
        Command::Braid { n, word, root } => run_braid(cfg, *n, word, root.unwrap_or(*n as u32 % 2)),
        Command::Reduce { input, defects } => run_reduce(cfg, input.as_deref(), *defects),
        Command::Verify { input } => run_verify(cfg, input),
        Command::Hamiltonian { input, lowest } => run_hamiltonian(cfg, input, *lowest),
        Command::Schedule { input, defect } => run_schedule(cfg, input, *defect),
        Command::Transport {
            input,
            schedule,
            exchange,
            close,
        } => run_transport(cfg, input, schedule.as_deref(), *exchange, *close),
    }
}

fn run_dim(cfg: &RunConfig, n: Option<usize>, root: u32, max_n: usize) -> CliResult<Value> {
    let kp = cfg.level(None)?;
    let r = kp.r;
    if root > r - 2 {
        return Err(fail(Failure::Precondition, format!("root label {root} exceeds r − 2 = {}", r - 2)));
    }
    match n {
        Some(n) => {
            let dim = dimension(n, root, r);
            let listed = enumerate_basis(n, root, r).len();
            let rank = if n <= 9 { Some(gram_rank(n, root, &kp)?) } else { None };
            Ok(json!({
                "r": r,
                "n": n,
                "root": root,
                "dimension": dim as u64,
                "enumeration": listed,
                "gramRank": rank,
            }))
        }
        None => {
            let rows: Vec<Value> = (0..=max_n)
                .map(|n| {
                    json!({
                        "n": n,
                        "dimensions": (0..=r - 2).map(|a| dimension(n, a, r) as u64).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(json!({ "r": r, "roots": (0..=r - 2).collect::<Vec<_>>(), "table": rows }))
        }
    }
}

fn run_jw(cfg: &RunConfig, k: usize) -> CliResult<Value> {
    let kp = cfg.level(None)?;
    let jw = jones_wenzl(k, &kp)?;
    let sym = jones_wenzl_in_d(k)?;
    let words = tl_words(k);
    let terms: Vec<Value> = jw
        .terms()
        .iter()
        .map(|(d, c)| {
            json!({
                "word": words[d].iter().map(|i| format!("e{i}")).collect::<Vec<_>>(),
                "matching": matching(d),
                "symbolic": sym[d].to_string(),
                "coeff": cfg.cyclo(c),
            })
        })
        .collect();
    Ok(json!({
        "r": kp.r,
        "convention": kp_convention(cfg),
        "k": k,
        "formula": render_jones_wenzl(k)?,
        "terms": terms,
        "markovTrace": cfg.cyclo(&jw.markov_trace(&kp.d)?),
    }))
}

fn kp_convention(cfg: &RunConfig) -> &'static str {
    match cfg.convention {
        AConvention::PositiveD => "positive-d",
        AConvention::Example => "example",
    }
}

fn run_braid(cfg: &RunConfig, n: usize, word: &str, root: u32) -> CliResult<Value> {
    let kp = cfg.level(None)?;
    let w = BraidWord::parse(word, n)?;
    let space = FunctorSpace::new(n, root, kp.clone())?;
    let m = space.represent(&w)?;
    let unit = space.to_unit(&m);
    let exact = unit.exact.as_ref().map(|u| {
        Value::Array(
            (0..u.rows())
                .map(|i| Value::Array((0..u.cols()).map(|j| cfg.quad(u.get(i, j))).collect()))
                .collect(),
        )
    });
    let mut out = json!({
        "r": kp.r,
        "convention": kp_convention(cfg),
        "a": cfg.cyclo(&kp.a),
        "d": cfg.cyclo(&kp.d),
        "n": n,
        "root": root,
        "word": w.to_string(),
        "basis": space.basis().iter().map(|l| l.labels.clone()).collect::<Vec<_>>(),
        "norms": space.norms().iter().map(|c| cfg.cyclo(c)).collect::<Vec<_>>(),
        "sqrtOf": space.extension().map(|f| cfg.cyclo(f.disc())),
        "tree": cfg.cyclo_grid(&m),
        "unit": exact,
    });
    if cfg.embed {
        let num = &unit.numeric;
        out["unitEmbed"] = Value::Array(
            (0..num.nrows())
                .map(|i| Value::Array((0..num.ncols()).map(|j| complex(num[(i, j)])).collect()))
                .collect(),
        );
    }
    Ok(out)
}

fn run_reduce(cfg: &RunConfig, input: Option<&Path>, defects: usize) -> CliResult<Value> {
    let (board, picture) = match input {
        Some(path) => {
            let f: PictureFile = read_json(path)?;
            Picture::from_file(&f)?
        }
        None => {
            let r = cfg.r.unwrap_or(5);
            let board = Board::roomy(defects, r)?;
            let kp = cfg.level(Some(r))?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let p = random_picture(&board, &kp, &mut rng, 300, 3)?;
            (board, p)
        }
    };
    let kp = cfg.level(Some(board.r()))?;
    if !picture.check_admissible(&board) {
        return Err(fail(Failure::Precondition, "picture is not admissible on its board"));
    }
    let space = FunctorSpace::new(board.defects().len(), 1, kp.clone())?;
    let red = reduce_picture(&board, &PictureVector::single(picture.clone(), kp.one()), &space)?;
    Ok(json!({
        "picture": picture.to_file(&board),
        "coords": cfg.coords(&space, &red.coords),
        "typeSums": red.type_sums.iter().map(|(d, c)| json!({"matching": matching(d), "coeff": cfg.cyclo(c)})).collect::<Vec<_>>(),
        "witness": witness(&red.log),
    }))
}

fn run_verify(cfg: &RunConfig, input: &Path) -> CliResult<Value> {
    let f: RelationFile = read_json(input)?;
    let board = Board::from_file(&f.board)?;
    let kp = cfg.level(Some(board.r()))?;
    let mut rel = PictureVector::new();
    for t in &f.terms {
        let halves: Vec<(usize, usize)> = t.half_edges.iter().map(|h| (h[0], h[1])).collect();
        let p = Picture::from_edges(&board, &t.occupied, &halves)?;
        if !p.check_admissible(&board) {
            return Err(fail(Failure::Precondition, "relation term is not an admissible picture"));
        }
        rel.add_term(p, t.coeff.coerce(kp.order)?);
    }
    let space = FunctorSpace::new(board.defects().len(), 1, kp.clone())?;
    let v = verify_relation(&board, &rel, &space)?;
    Ok(json!({
        "holds": v.holds,
        "terms": rel.len(),
        "coords": cfg.coords(&space, &v.reduction.coords),
        "witness": witness(&v.reduction.log),
    }))
}

fn run_hamiltonian(cfg: &RunConfig, input: &Path, lowest: usize) -> CliResult<Value> {
    let board = load_board(input)?;
    let kp = cfg.level(Some(board.r()))?;
    let state = MediumState::new(board.clone(), cfg.mode.into());
    let asm = state.assemble(&kp, DEFAULT_EDGE_CAP)?;
    let gs = ground_space(&asm.hamiltonian, cfg.tol)?;
    let probe = spectral_probe(&asm.hamiltonian, lowest.max(gs.dimension + 1), cfg.tol)?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for t in &state.terms {
        let key = serde_json::to_value(t.kind).expect("serializable");
        *counts.entry(key.as_str().unwrap_or_default().to_string()).or_default() += 1;
    }
    let classes = match &asm.basis {
        Basis::Pictures(_) => Some(serde_json::to_value(class_count(asm.basis.len(), &asm.relations, &kp.one())?).expect("serializable")),
        Basis::Tensor(_) => None,
    };
    let functor = FunctorSpace::new(board.defects().len(), 1, kp.clone())?.dim();
    Ok(json!({
        "board": board.to_file(),
        "mode": state.mode,
        "edges": board.edge_count(),
        "basisSize": asm.basis.len(),
        "termCounts": counts,
        "terms": build_terms(&board),
        "groundSpace": gs,
        "spectrum": probe,
        "classCount": classes,
        "functorDimension": functor,
    }))
}

fn schedule_json(board: &Board, s: &Schedule) -> Value {
    let mid = |e: usize| {
        let m = board.midpoint(e);
        [m.0 as f64 / 2.0, m.1 as f64 / 2.0]
    };
    Value::Array(
        s.steps
            .iter()
            .enumerate()
            .map(|(t, step)| {
                json!({
                    "step": t,
                    "swaps": step.iter().map(|&(a, b)| json!({"from": a, "to": b, "fromMidpoint": mid(a), "toMidpoint": mid(b)})).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn run_schedule(cfg: &RunConfig, input: &Path, defect: usize) -> CliResult<Value> {
    let board = load_board(input)?;
    let kp = cfg.level(Some(board.r()))?;
    let s = exchange_schedule(&board, defect)?;
    Ok(json!({
        "defect": defect,
        "length": s.len(),
        "bound": 4 * (kp.r + 1),
        "schedule": s,
        "records": schedule_json(&board, &s),
    }))
}

/// min over global phases and matchings of the distance between two eigenvalue lists.
fn eigenphase_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() || a.is_empty() {
        return f64::INFINITY;
    }
    b.iter()
        .map(|&bj| {
            let phase = bj / a[0];
            let phase = phase / phase.norm();
            let mut left: Vec<Complex64> = b.to_vec();
            a.iter()
                .map(|&x| {
                    let y = x * phase;
                    let (k, dist) = left
                        .iter()
                        .enumerate()
                        .map(|(k, z)| (k, (z - y).norm()))
                        .min_by(|p, q| p.1.total_cmp(&q.1))
                        .expect("nonempty");
                    left.swap_remove(k);
                    dist
                })
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

fn run_transport(
    cfg: &RunConfig,
    input: &Path,
    schedule: Option<&Path>,
    exchange: Option<usize>,
    close: bool,
) -> CliResult<Value> {
    let board = load_board(input)?;
    let kp = cfg.level(Some(board.r()))?;
    if cfg.mode != ModeArg::PictureBasis {
        return Err(fail(Failure::Precondition, "transport runs in picture-basis mode"));
    }
    let mut s = match (schedule, exchange) {
        (Some(path), None) => read_json::<Schedule>(path)?,
        (None, Some(i)) => exchange_schedule(&board, i)?,
        (None, None) => exchange_schedule(&board, 0)?,
        (Some(_), Some(_)) => return Err(fail(Failure::Parse, "give either --schedule or --exchange")),
    };
    if close {
        s.steps.extend(s.reversed().steps);
    }
    let rep = transport(&board, &s, cfg.substeps, &kp, cfg.tol)?;
    let comparison = match (exchange, close) {
        (Some(i), false) => {
            let n = board.defects().len();
            let space = FunctorSpace::new(n, 1, kp.clone())?;
            let w = BraidWord::parse(&format!("s{}", i + 1), n)?;
            let b = space.unit_represent(&w)?.numeric;
            let hol: Vec<Complex64> = rep.unitary.clone().eigenvalues_complex();
            let braid: Vec<Complex64> = b.eigenvalues_complex();
            Some(json!({
                "word": w.to_string(),
                "braidEigenvalues": braid.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
                "holonomyEigenvalues": hol.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
                "eigenphaseDeviation": eigenphase_deviation(&hol, &braid),
            }))
        }
        _ => None,
    };
    Ok(json!({
        "scheduleLength": s.len(),
        "report": rep,
        "comparison": comparison,
    }))
}

trait ComplexEigen {
    fn eigenvalues_complex(self) -> Vec<Complex64>;
}

impl ComplexEigen for nalgebra::DMatrix<Complex64> {
    fn eigenvalues_complex(self) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = self.schur().eigenvalues().map(|e| e.iter().copied().collect()).unwrap_or_default();
        v.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        v
    }
}

/// Renders a report deterministically.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("serializable");
    s.push('\n');
    s
}
