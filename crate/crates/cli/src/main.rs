use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use metaplectic::braid::{BraidWord, ClosureKind, LinkingMatrix};
use metaplectic::dense::{represent_braid, RMatrixKind};
use metaplectic::group::GroupSpace;
use metaplectic::heisenberg::{conjugate_by_braid, evolve_tableau, measure_monomial, QuditMonomial, StabilizerTableau};
use metaplectic::invariants::{i_xe_eval, lm_state_sum, seifert_from_braid, GaussMode, SeifertData};
use metaplectic::ising::{
    compile_link, maxcut_recover, verify_claim, verify_claim_exact, CouplingMatrix, CutStats, IsingParams,
};
use metaplectic::{CyclotomicValue, DenseOperatorF64, FusionRing, C64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "metaplectic", version, about = "Fusion data, braid simulation and link invariants for SO(m)_2")]
struct Cli {
    /// Cap on worker threads for parallel sums.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for measurement sampling and fuzz suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fusion rules, dimensions and twists.
    Fusion {
        #[arg(long)]
        m: u32,
        /// Fuse two labels, e.g. `--fuse Y1 Y1`.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        fuse: Option<Vec<String>>,
    },
    /// Closure and linking data of a braid file.
    BraidInfo {
        #[arg(long, value_enum, default_value_t = Closure::Trace)]
        closure: Closure,
        file: PathBuf,
    },
    /// Link invariants from a braid file or a JSON linking / Seifert matrix.
    Invariant {
        #[arg(long, value_enum)]
        kind: InvariantKind,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Closure::Trace)]
        closure: Closure,
        #[arg(long, value_enum, default_value_t = Mode::Fast)]
        mode: Mode,
        file: PathBuf,
    },
    /// Run a braid through one of the simulators.
    Simulate {
        #[arg(long, value_enum)]
        engine: Engine,
        #[arg(long)]
        m: u32,
        /// R-matrix for the dense engine: gaussian, potts, y1 or ising.
        #[arg(long, default_value = "gaussian")]
        rep: String,
        /// Heisenberg engine: evolve |0...0> and measure every Z_i.
        #[arg(long)]
        measure: bool,
        file: PathBuf,
    },
    /// Compile a coupling matrix to a link.
    CompileIsing {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        /// Also evaluate both sides of the partition-function identity.
        #[arg(long)]
        check: bool,
        file: PathBuf,
    },
    /// Recover the maximum cut and its multiplicity from Z.
    Maxcut {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        file: PathBuf,
    },
    /// Seeded self-checks.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Number of fuzzed instances.
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Closure {
    Trace,
    Plat,
}

impl From<Closure> for ClosureKind {
    fn from(c: Closure) -> Self {
        match c {
            Closure::Trace => ClosureKind::Trace,
            Closure::Plat => ClosureKind::Plat,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InvariantKind {
    Lm,
    Xe,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Fast,
    Brute,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Engine {
    Dense,
    Heisenberg,
    Group,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Claims,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Lib(#[from] metaplectic::Error),
    #[error("verification failed")]
    Failed(Value),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_refusal() => 3,
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

type CliResult = Result<Value, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(CliError::Failed(v)) => {
            println!("{v}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Fusion { m, fuse } => fusion(*m, fuse.as_deref()),
        Command::BraidInfo { closure, file } => braid_info(&read_braid(file)?, (*closure).into()),
        Command::Invariant { kind, m, closure, mode, file } => invariant(*kind, *m, (*closure).into(), *mode, file),
        Command::Simulate { engine, m, rep, measure, file } => {
            let b = read_braid(file)?;
            match engine {
                Engine::Dense => simulate_dense(&b, *m, rep),
                Engine::Heisenberg => simulate_heisenberg(&b, *m, *measure, cli.seed),
                Engine::Group => simulate_group(&b, *m),
            }
        }
        Command::CompileIsing { m, d, check, file } => compile(&read_coupling(file)?, IsingParams::new(*m, *d)?, *check),
        Command::Maxcut { m, d, file } => maxcut(&read_coupling(file)?, IsingParams::new(*m, *d)?),
        Command::Verify { suite: Suite::Claims, count } => verify_claims(*count, cli.seed),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_braid(path: &Path) -> Result<BraidWord, CliError> {
    Ok(read_input(path)?.parse::<BraidWord>()?)
}

fn read_coupling(path: &Path) -> Result<CouplingMatrix, CliError> {
    let j: CouplingMatrix = serde_json::from_str(&read_input(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(j.validated()?)
}

/// A float rounded to 12 significant digits.
fn approx(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    json!(if rounded == 0.0 { 0.0 } else { rounded })
}

fn complex(z: C64) -> Value {
    json!({ "re": approx(z.re), "im": approx(z.im) })
}

fn exact_value(v: &CyclotomicValue) -> Value {
    let z = v.eval();
    let mut out = json!({ "exact": v.to_json(), "approx": complex(z), "norm": approx(z.norm()) });
    if let Some(r) = v.as_rational() {
        out["rational"] = json!(r.to_string());
    }
    out
}

fn fusion(m: u32, fuse: Option<&[String]>) -> CliResult {
    let ring = FusionRing::new(m)?;
    if let Some([a, b]) = fuse {
        let (a, b) = (ring.parse_label(a)?, ring.parse_label(b)?);
        let result: Vec<String> = ring.fuse(a, b)?.iter().map(|c| c.to_string()).collect();
        return Ok(json!({ "result": result }));
    }
    let labels = ring
        .labels()
        .into_iter()
        .map(|a| {
            let datum = ring.category_data(a)?;
            let qdim = match datum.qdim {
                metaplectic::fusion::QuantumDimension::One => "1".to_string(),
                metaplectic::fusion::QuantumDimension::Two => "2".to_string(),
                metaplectic::fusion::QuantumDimension::SqrtM(m) => format!("sqrt({m})"),
            };
            let (re, im) = datum.twist().value();
            Ok(json!({
                "label": a.to_string(),
                "qdim": { "exact": qdim, "approx": approx(datum.qdim.value()) },
                "h": { "exact": datum.h.to_string(), "approx": approx(*datum.h.numer() as f64 / *datum.h.denom() as f64) },
                "twist": { "exact": format!("exp(2 pi i {})", datum.h), "approx": { "re": approx(re), "im": approx(im) } },
            }))
        })
        .collect::<Result<Vec<Value>, metaplectic::Error>>()?;
    Ok(json!({ "m": m, "rank": ring.rank(), "labels": labels }))
}

fn braid_info(b: &BraidWord, kind: ClosureKind) -> CliResult {
    let closure = b.closure(kind)?;
    let lk = b.linking_matrix(kind)?;
    Ok(json!({
        "strands": b.strands(),
        "length": b.len(),
        "closure": format!("{kind:?}").to_lowercase(),
        "components": closure.count,
        "component_of_strand": closure.component,
        "permutation": b.permutation(),
        "linking": lk,
    }))
}

fn invariant(kind: InvariantKind, m: u32, closure: ClosureKind, mode: Mode, file: &Path) -> CliResult {
    let text = read_input(file)?;
    let is_json = text.trim_start().starts_with('{');
    match kind {
        InvariantKind::Lm => {
            let lk = if is_json {
                let raw: LinkingMatrix = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
                LinkingMatrix::from_entries(raw.entries)?
            } else {
                text.parse::<BraidWord>()?.linking_matrix(closure)?
            };
            let s = lm_state_sum(&lk, m)?;
            Ok(json!({
                "kind": "lm",
                "m": m,
                "components": lk.components,
                "E": exact_value(&s.e),
                "I_Y1": exact_value(&s.i_y1),
                "histogram": s.histogram,
            }))
        }
        InvariantKind::Xe => {
            let seifert = if is_json {
                #[derive(serde::Deserialize)]
                struct Matrix {
                    v: Vec<Vec<i64>>,
                }
                let raw: Matrix = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
                SeifertData::from_matrix(raw.v)?
            } else {
                seifert_from_braid(&text.parse()?)?
            };
            let mode = match mode {
                Mode::Fast => GaussMode::Fast,
                Mode::Brute => GaussMode::Brute,
            };
            let x = i_xe_eval(&seifert, m, mode)?;
            let mut out = exact_value(&x.value);
            out["corank"] = json!(x.corank);
            Ok(json!({ "kind": "xe", "p": m, "b1": seifert.b1, "value": out }))
        }
    }
}

fn simulate_dense(b: &BraidWord, m: u32, rep: &str) -> CliResult {
    let kind: RMatrixKind = format!("{rep}:{m}").parse()?;
    let rho: DenseOperatorF64 = represent_braid(b, kind)?;
    let dim = rho.dim();
    let rows: Vec<Vec<[Value; 2]>> =
        (0..dim).map(|r| (0..dim).map(|c| [approx(rho.get(r, c).re), approx(rho.get(r, c).im)]).collect()).collect();
    Ok(json!({
        "engine": "dense",
        "kind": kind.to_string(),
        "dim": dim,
        "unitary": rho.is_unitary(1e-9),
        "trace": complex(rho.trace()),
        "matrix": rows,
    }))
}

fn monomial_json(a: &QuditMonomial) -> Value {
    json!({ "phase_exp": a.phase_exp(), "x_exp": a.x_exp(), "z_exp": a.z_exp(), "text": a.to_string() })
}

fn simulate_heisenberg(b: &BraidWord, m: u32, measure: bool, seed: u64) -> CliResult {
    let n = b.strands();
    let images = (0..n)
        .map(|i| {
            let x = conjugate_by_braid(&QuditMonomial::shift(n, m, i), b)?;
            let z = conjugate_by_braid(&QuditMonomial::clock(n, m, i), b)?;
            Ok(json!({ "site": i + 1, "X": monomial_json(&x), "Z": monomial_json(&z) }))
        })
        .collect::<Result<Vec<Value>, metaplectic::Error>>()?;
    let mut out = json!({ "engine": "heisenberg", "m": m, "strands": n, "pullbacks": images });
    if measure {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = evolve_tableau(&StabilizerTableau::all_z(n, m)?, b)?;
        let mut outcomes = Vec::with_capacity(n);
        for i in 0..n {
            let r = measure_monomial(&t, &QuditMonomial::clock(n, m, i), &mut rng)?;
            outcomes.push(json!({ "site": i + 1, "outcome_exp": r.outcome_exp, "deterministic": r.deterministic }));
            t = r.updated;
        }
        out["seed"] = json!(seed);
        out["measurements"] = json!(outcomes);
        out["tableau"] = json!(t.to_json());
    }
    Ok(out)
}

fn simulate_group(b: &BraidWord, m: u32) -> CliResult {
    let space = GroupSpace::new(b.strands() + 1, m)?;
    let g = space.braid_to_element(b)?;
    Ok(json!({ "engine": "group", "m": m, "identity": g.is_identity(), "element": g.to_json() }))
}

fn compile(j: &CouplingMatrix, params: IsingParams, check: bool) -> CliResult {
    let link = compile_link(j, &params)?;
    let mut out = json!({
        "m": params.m,
        "d": params.d,
        "y": { "exact": format!("cos(4 pi {}/{})", params.d, params.m), "approx": approx(params.y) },
        "link": link.to_json(),
    });
    if check {
        let c = verify_claim(j, &params)?;
        out["claim"] = json!({
            "lhs": complex(c.lhs),
            "rhs": complex(c.rhs),
            "residual": approx(c.residual),
            "exact": verify_claim_exact(j, &params)?,
        });
    }
    Ok(out)
}

fn cut_json(c: &CutStats) -> Value {
    json!({ "max_cut": c.max_cut, "count": c.count })
}

fn adjacency(j: &CouplingMatrix) -> Result<Vec<Vec<u8>>, CliError> {
    j.entries()
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| match v {
                    0 | 1 => Ok(v as u8),
                    _ => Err(CliError::Input(format!("graph entries must be 0 or 1, got {v}"))),
                })
                .collect()
        })
        .collect()
}

fn maxcut(j: &CouplingMatrix, params: IsingParams) -> CliResult {
    let r = maxcut_recover(&adjacency(j)?, &params)?;
    Ok(json!({
        "m": params.m,
        "d": params.d,
        "y": approx(params.y),
        "K": r.k,
        "ln_Z": approx(r.ln_z),
        "brute_force": cut_json(&r.stats),
        "recovered": [cut_json(&r.recovered[0]), cut_json(&r.recovered[1])],
        "agrees": r.recovered.iter().all(|c| *c == r.stats),
    }))
}

fn random_coupling(rng: &mut ChaCha8Rng) -> CouplingMatrix {
    loop {
        let n = rng.gen_range(1..=4);
        let mut e = vec![vec![0i64; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let v = rng.gen_range(-2..=2);
                e[a][b] = v;
                e[b][a] = v;
            }
        }
        let j = CouplingMatrix::new(e).expect("symmetric by construction");
        if j.n() + (j.a() / 2) as usize <= 20 {
            return j;
        }
    }
}

fn all_graphs(n: usize) -> Vec<Vec<Vec<u8>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0..1u32 << pairs.len())
        .map(|mask| {
            let mut g = vec![vec![0u8; n]; n];
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    g[a][b] = 1;
                    g[b][a] = 1;
                }
            }
            g
        })
        .collect()
}

fn verify_claims(count: usize, seed: u64) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut claim_failures = 0usize;
    for _ in 0..count {
        let j = random_coupling(&mut rng);
        let m = [3u32, 5, 7][rng.gen_range(0..3)];
        let params = IsingParams::new(m, rng.gen_range(1..m))?;
        let c = verify_claim(&j, &params)?;
        let rel = c.residual / c.rhs.norm().max(1.0);
        worst = worst.max(rel);
        if rel >= 1e-9 || !verify_claim_exact(&j, &params)? {
            claim_failures += 1;
        }
    }
    let regimes = [IsingParams::new(3, 1)?, IsingParams::new(5, 1)?, IsingParams::new(5, 2)?, IsingParams::new(7, 3)?];
    let mut graphs = 0usize;
    let mut approx_failures = 0usize;
    for params in &regimes {
        for n in 1..=4 {
            for g in all_graphs(n) {
                let r = maxcut_recover(&g, params)?;
                graphs += 1;
                if r.recovered.iter().any(|c| *c != r.stats) {
                    approx_failures += 1;
                }
            }
        }
    }
    let out = json!({
        "suite": "claims",
        "seed": seed,
        "claim": { "instances": count, "failures": claim_failures, "max_relative_residual": approx(worst) },
        "approx": { "instances": graphs, "failures": approx_failures },
        "pass": claim_failures == 0 && approx_failures == 0,
    });
    if claim_failures + approx_failures > 0 {
        return Err(CliError::Failed(out));
    }
    Ok(out)
}
