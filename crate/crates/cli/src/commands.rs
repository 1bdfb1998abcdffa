//! Subcommand implementations.
//!
//! Exit codes: 0 success / property holds, 1 property refuted (does not tile,
//! trace-periodic), 2 usage or parse errors, 3 contraction budget exceeded.
//! Data goes to stdout, diagnostics to stderr.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use tensortiles::classify::classify_tensor;
use tensortiles::constructions::{
    self, dimer, nilpotent_tile_default, quantum_aperiodic, weighted_dimer, CoinOperator,
};
use tensortiles::io::{tensor_from_json, tensor_to_json, TileFileError};
use tensortiles::oracle;
use tensortiles::walk::{simulate_walk, WalkError};
use tensortiles::{
    Budget, ContractionError, Tensor, TensorialDomino, TensorialTile, TileError, Verdict,
};

const EXIT_OK: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tensortiles",
    about = "Tensorial Wang dominoes and tiles: classification, line/plane tiling, \
             trace aperiodicity and quantum-walk simulation",
    version
)]
struct Cli {
    /// Worker threads for bounded searches (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Tolerance {
    /// Zero tolerance, relative to recorded coefficient scales.
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
}

#[derive(Args)]
struct BudgetArg {
    /// Maximum transfer-operator bond dimension.
    #[arg(long, default_value_t = 4096)]
    max_bond: usize,
}

impl BudgetArg {
    fn budget(&self) -> Budget {
        Budget::with_max_bond_dim(self.max_bond)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a domino or tile file and report support and norms.
    Classify {
        /// Tile file (JSON), or - for stdin.
        file: String,
        #[command(flatten)]
        tolerance: Tolerance,
    },
    /// Decide whether a domino tiles the line (exactly, via power traces).
    LineCheck {
        file: String,
        #[command(flatten)]
        tolerance: Tolerance,
    },
    /// Bounded check that a tile keeps tiling larger and larger squares.
    PlaneCheck {
        file: String,
        /// Largest square side to test.
        #[arg(long = "max")]
        max: u32,
        #[command(flatten)]
        tolerance: Tolerance,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Toroidal trace of one rectangle.
    Trace {
        file: String,
        /// Rectangle size as M N.
        #[arg(long = "rect", num_args = 2, value_names = ["M", "N"])]
        rect: Vec<u32>,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Bounded weak or strong trace-aperiodicity search.
    Aperiodic {
        file: String,
        /// Check every rectangle trace up to the bound.
        #[arg(long, conflicts_with = "strong")]
        weak: bool,
        /// Check directional traces for every direction up to the bounds.
        #[arg(long)]
        strong: bool,
        /// Bound N (weak) or bounds U N (strong).
        #[arg(long, num_args = 1..=2, required = true)]
        bound: Vec<u32>,
        #[command(flatten)]
        tolerance: Tolerance,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Simulate a coined quantum walk by contracting a grid of walk tiles.
    Walk {
        #[arg(long, value_enum, default_value_t = CoinName::Hadamard)]
        coin: CoinName,
        /// Coin entries a,b,c,d for --coin custom.
        #[arg(long, value_delimiter = ',', num_args = 4, value_names = ["A", "B", "C", "D"])]
        params: Option<Vec<f64>>,
        #[arg(long)]
        steps: usize,
        /// Grid width; must be odd and at least 2·steps+1.
        #[arg(long)]
        width: usize,
        /// CSV output path (default: stdout).
        #[arg(long)]
        out: Option<String>,
        /// Also run the state-vector reference and report the deviation.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Write a built-in tile as a tile file.
    Gen {
        #[arg(value_enum)]
        name: BuiltinTile,
        /// Output path (default: stdout).
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CoinName {
    Hadamard,
    Identity,
    Classical,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuiltinTile {
    /// Three dominoes over two colors (everything except black–black).
    ClassicDomino,
    /// Full-support quantum domino that squares to zero.
    QuantumDomino,
    /// diag(1, i)/√2: periodic at size one, no size-two periodic patterns.
    PhaseDomino,
    Dimer,
    WeightedDimer,
    /// The cancelling tile: full support, zero on every multi-cell shape.
    Nilpotent,
    /// Possibilistic lift of the aperiodic eleven-tile fixture.
    FixtureLift,
    /// Fixture lift ⊎ cancelling tile: trace-aperiodic with periodic support.
    QuantumAperiodic,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<TileFileError> for Failure {
    fn from(e: TileFileError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<TileError> for Failure {
    fn from(e: TileError) -> Self {
        let code = match &e {
            TileError::Contraction(
                ContractionError::FreeBondsOverBudget { .. }
                | ContractionError::IntermediateOverBudget { .. }
                | ContractionError::BondOverBudget { .. },
            ) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<WalkError> for Failure {
    fn from(e: WalkError) -> Self {
        match e {
            WalkError::Tile(t) => t.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // a failure here means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Classify { file, tolerance } => cmd_classify(&file, tolerance.eps),
        Command::LineCheck { file, tolerance } => cmd_line_check(&file, tolerance.eps),
        Command::PlaneCheck { file, max, tolerance, budget } => {
            cmd_plane_check(&file, max, tolerance.eps, budget.budget())
        }
        Command::Trace { file, rect, budget } => {
            cmd_trace(&file, rect[0], rect[1], budget.budget())
        }
        Command::Aperiodic { file, weak, strong, bound, tolerance, budget } => {
            cmd_aperiodic(&file, weak, strong, &bound, tolerance.eps, budget.budget())
        }
        Command::Walk { coin, params, steps, width, out, oracle, budget } => {
            cmd_walk(coin, params, steps, width, out.as_deref(), oracle, budget.budget())
        }
        Command::Gen { name, out } => cmd_gen(name, out.as_deref()),
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::usage(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("reading {path}: {e}")))
    }
}

fn load_tensor(path: &str) -> Result<Tensor, Failure> {
    Ok(tensor_from_json(&read_input(path)?)?)
}

fn load_domino(path: &str) -> Result<TensorialDomino, Failure> {
    let t = load_tensor(path)?;
    TensorialDomino::new(t).map_err(|e| Failure::usage(e.to_string()))
}

fn load_tile(path: &str) -> Result<TensorialTile, Failure> {
    let t = load_tensor(path)?;
    TensorialTile::new(t).map_err(|e| Failure::usage(e.to_string()))
}

fn write_output(path: Option<&str>, data: &str) -> Result<(), Failure> {
    match path {
        None | Some("-") => {
            print!("{data}");
            Ok(())
        }
        Some(p) => fs::write(p, data).map_err(|e| Failure::usage(format!("writing {p}: {e}"))),
    }
}

fn fmt_complex(c: Complex64) -> String {
    format!("{}{}{}i", c.re, if c.im < 0.0 { "" } else { "+" }, c.im)
}

fn cmd_classify(file: &str, eps: f64) -> Result<u8, Failure> {
    let t = load_tensor(file)?;
    let kind = classify_tensor(&t, eps);
    let support = t.coeffs().iter().filter(|c| c.norm() > eps).count();
    let sum: Complex64 = t.coeffs().iter().sum();
    println!("kind: {kind}");
    println!("dim: {}", t.dim());
    println!("arity: {}", t.arity());
    println!("support: {support}");
    println!("norm_sq: {}", t.norm_sq());
    println!("coeff_sum: {}", fmt_complex(sum));
    Ok(EXIT_OK)
}

fn cmd_line_check(file: &str, eps: f64) -> Result<u8, Failure> {
    let domino = load_domino(file)?;
    let tiles = domino.tiles_line(eps);
    let traces = domino.trace_sequence();
    if tiles {
        println!("tiles the line: yes (some power trace is nonzero)");
    } else {
        let index = domino.nilpotency_index(eps).expect("nilpotent");
        println!("tiles the line: no (nilpotent, index {index})");
    }
    for (k, (tr, _)) in traces.iter().enumerate() {
        println!("tr(T^{}) = {}", k + 1, fmt_complex(*tr));
    }
    println!("trace-aperiodic: {}", if tiles { "no" } else { "yes" });
    Ok(if tiles { EXIT_OK } else { EXIT_REFUTED })
}

fn verdict_exit<W>(v: &Verdict<W>) -> u8 {
    if v.holds() {
        EXIT_OK
    } else {
        EXIT_REFUTED
    }
}

fn cmd_plane_check(file: &str, max: u32, eps: f64, budget: Budget) -> Result<u8, Failure> {
    if max == 0 {
        return Err(Failure::usage("--max must be at least 1"));
    }
    let tile = load_tile(file)?;
    let verdict = tile.tiles_plane_up_to(max, eps, budget)?;
    println!("{}", serde_json::to_string(&verdict).expect("verdicts serialize"));
    Ok(verdict_exit(&verdict))
}

fn cmd_trace(file: &str, m: u32, n: u32, budget: Budget) -> Result<u8, Failure> {
    if m == 0 || n == 0 {
        return Err(Failure::usage("--rect sides must be at least 1"));
    }
    let tile = load_tile(file)?;
    let trace = tile.rect_trace(m, n, budget)?;
    println!(
        "{}",
        serde_json::json!({ "m": m, "n": n, "trace": { "re": trace.re, "im": trace.im } })
    );
    Ok(EXIT_OK)
}

fn cmd_aperiodic(
    file: &str,
    weak: bool,
    strong: bool,
    bound: &[u32],
    eps: f64,
    budget: Budget,
) -> Result<u8, Failure> {
    let tile = load_tile(file)?;
    if weak == strong {
        return Err(Failure::usage("pass exactly one of --weak or --strong"));
    }
    if bound.iter().any(|&b| b == 0) {
        return Err(Failure::usage("--bound values must be at least 1"));
    }
    if weak {
        if bound.len() != 1 {
            return Err(Failure::usage("--weak takes a single bound N"));
        }
        let verdict = tile.weak_aperiodic_up_to(bound[0], eps, budget)?;
        println!("{}", serde_json::to_string(&verdict).expect("verdicts serialize"));
        Ok(verdict_exit(&verdict))
    } else {
        if bound.len() != 2 {
            return Err(Failure::usage("--strong takes two bounds U N"));
        }
        let verdict = tile.strong_aperiodic_up_to(bound[0], bound[1], eps, budget)?;
        println!("{}", serde_json::to_string(&verdict).expect("verdicts serialize"));
        Ok(verdict_exit(&verdict))
    }
}

fn coin_from_args(coin: CoinName, params: Option<Vec<f64>>) -> Result<CoinOperator, Failure> {
    match (coin, params) {
        (CoinName::Hadamard, None) => Ok(CoinOperator::hadamard()),
        (CoinName::Identity, None) => Ok(CoinOperator::identity()),
        (CoinName::Classical, None) => Ok(CoinOperator::classical()),
        (CoinName::Custom, Some(p)) => Ok(CoinOperator::from_reals(p[0], p[1], p[2], p[3])),
        (CoinName::Custom, None) => {
            Err(Failure::usage("--coin custom requires --params a,b,c,d"))
        }
        _ => Err(Failure::usage("--params is only valid with --coin custom")),
    }
}

fn cmd_walk(
    coin: CoinName,
    params: Option<Vec<f64>>,
    steps: usize,
    width: usize,
    out: Option<&str>,
    with_oracle: bool,
    budget: Budget,
) -> Result<u8, Failure> {
    let coin = coin_from_args(coin, params)?;
    let distribution = simulate_walk(&coin, steps, width, budget)?;
    let tile_probs = distribution.renormalized();

    let reference = if with_oracle {
        let r = oracle::walk_reference(&coin, steps, width)
            .map_err(|e| Failure::usage(e.to_string()))?;
        Some(r.renormalized())
    } else {
        None
    };

    let mut csv = String::new();
    if reference.is_some() {
        csv.push_str("position,p_left,p_right,p_total,oracle_p_left,oracle_p_right,oracle_p_total\n");
    } else {
        csv.push_str("position,p_left,p_right,p_total\n");
    }
    let mut max_dev = 0.0f64;
    for (pos, [l, r]) in tile_probs.iter().enumerate() {
        let offset = distribution.offset(pos);
        match &reference {
            Some(probs) => {
                let [ol, or] = probs[pos];
                max_dev = max_dev.max((l - ol).abs()).max((r - or).abs());
                csv.push_str(&format!(
                    "{offset},{l},{r},{},{ol},{or},{}\n",
                    l + r,
                    ol + or
                ));
            }
            None => csv.push_str(&format!("{offset},{l},{r},{}\n", l + r)),
        }
    }
    write_output(out, &csv)?;
    if reference.is_some() {
        eprintln!("max absolute deviation from the reference: {max_dev:e}");
    }
    Ok(EXIT_OK)
}

fn built_in_tensor(name: BuiltinTile) -> Tensor {
    match name {
        BuiltinTile::ClassicDomino => {
            Tensor::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).expect("square")
        }
        BuiltinTile::QuantumDomino => constructions::cancelling_matrix(),
        BuiltinTile::PhaseDomino => {
            let s = 1.0 / 2f64.sqrt();
            Tensor::from_rows(&[
                vec![Complex64::new(s, 0.0), Complex64::new(0.0, 0.0)],
                vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, s)],
            ])
            .expect("square")
        }
        BuiltinTile::Dimer => dimer().into_tensor(),
        BuiltinTile::WeightedDimer => weighted_dimer().into_tensor(),
        BuiltinTile::Nilpotent => nilpotent_tile_default().into_tensor(),
        BuiltinTile::FixtureLift => constructions::fixture_aperiodic().to_tile().into_tensor(),
        BuiltinTile::QuantumAperiodic => {
            quantum_aperiodic(&constructions::fixture_aperiodic().to_tile()).into_tensor()
        }
    }
}

fn cmd_gen(name: BuiltinTile, out: Option<&str>) -> Result<u8, Failure> {
    let tensor = built_in_tensor(name);
    let mut json = tensor_to_json(&tensor);
    json.push('\n');
    write_output(out, &json)?;
    Ok(EXIT_OK)
}

