use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use qwit_core::bell::chsh_report;
use qwit_core::classical::{example2_demo, example3_demo, minimal_model_check, MomentDataset};
use qwit_core::collective::scaling_report;
use qwit_core::format;
use qwit_core::operator::{HermitianOperator, OperatorJson};
use qwit_core::optimal::{bloch_scan, numeric_search, optimal_pair, optimal_witness};
use qwit_core::phase_space::{check_phase_space_witness, phase_space_scan, FockTruncation, PhaseSpacePolynomial};
use qwit_core::rng::DEFAULT_SEED;
use qwit_core::states::DensityMatrix;
use qwit_core::witness::{check_generalized, construct_for_state, parse_word, GeneralizedWitnessJson, GeneralizedWitnessSpec};
use qwit_core::{QwitError, Result};

#[derive(Parser, Debug)]
#[command(name = "qwit", version, about = "Construct and verify quantumness witnesses")]
struct Cli {
    /// Master seed for every seeded computation.
    #[arg(long, global = true, env = "QWIT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form optimal qubit witness B² - A² with Tr B = 2 and its checks.
    OptimalQubit {
        /// Also run the seeded numeric search over (t, u).
        #[arg(long)]
        search: bool,
        /// Grid points per axis for the numeric search.
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
    /// Means of B - A and B² - A² over pure qubit states on a (theta, phi) grid.
    BlochScan {
        /// Operator JSON for A (defaults to the optimal pair).
        #[arg(long = "A")]
        a: Option<PathBuf>,
        /// Operator JSON for B (defaults to the optimal pair).
        #[arg(long = "B")]
        b: Option<PathBuf>,
        #[arg(long, default_value_t = 181)]
        ntheta: usize,
        #[arg(long, default_value_t = 360)]
        nphi: usize,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Anticommutator witness {X, Y} with negative mean on a given state.
    Construct {
        /// State JSON (operator schema, optional "kind": "state").
        #[arg(long)]
        state: PathBuf,
        /// Overlap <a|d>; defaults to half the state's effective Bloch radius.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Spectra of the N-site collective witness against the -mu/N bound.
    Collective {
        /// Single-site operator JSON for a (defaults to the optimal pair).
        #[arg(long)]
        a: Option<PathBuf>,
        /// Single-site operator JSON for b (defaults to the optimal pair).
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        nmax: usize,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// CHSH operators as witnesses: LHV bound, Tsirelson value, identity audit.
    Chsh {
        /// Random settings audited per dimension.
        #[arg(long, default_value_t = 100)]
        seeds: usize,
        /// Local dimension; audits 2 and 3 when omitted.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Decide whether measured moments rule out a minimal classical model.
    ClassicalCheck {
        /// Moment dataset JSON.
        #[arg(long)]
        data: PathBuf,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long, default_value_t = qwit_core::classical::DEFAULT_TOL)]
        tol: f64,
    },
    /// Worked classical examples: 2 (peaked states) or 3 (coarse-state loophole).
    ClassicalDemo {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        example: u8,
    },
    /// Coherent-state means of the truncated oscillator witness K_m.
    PhaseSpace {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 3.0)]
        zmax: f64,
        #[arg(long, default_value_t = 61)]
        nz: usize,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Ordered-polynomial witness W(R; S) checker.
    Generalized {
        /// Spec JSON {"R": op, "S": op, "coeffs": {word: c}}.
        #[arg(long, conflicts_with = "preset")]
        spec: Option<PathBuf>,
        /// Built-in spec: "optimal" (RS + SR + SS on the optimal pair).
        #[arg(long)]
        preset: Option<String>,
    },
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn load_operator(path: &Path) -> Result<HermitianOperator> {
    let j: OperatorJson = serde_json::from_str(&read(path)?)?;
    HermitianOperator::from_json(&j)
}

fn load_pair(a: &Option<PathBuf>, b: &Option<PathBuf>) -> Result<(HermitianOperator, HermitianOperator)> {
    let (da, db) = optimal_pair();
    let a = a.as_deref().map(load_operator).transpose()?.unwrap_or(da);
    let b = b.as_deref().map(load_operator).transpose()?.unwrap_or(db);
    Ok((a, b))
}

/// Fails early when the output directory does not exist.
fn check_out(path: &Path) -> Result<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    if !parent.is_dir() {
        return Err(QwitError::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("output directory {} does not exist", parent.display()),
        )));
    }
    Ok(())
}

fn write(path: &Path, content: &str) -> Result<()> {
    Ok(fs::write(path, content)?)
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("reports are JSON objects"),
    }
}

fn run(cli: &Cli) -> Result<Value> {
    if let Some(r) = &cli.report {
        check_out(r)?;
    }
    let out = match &cli.command {
        Command::OptimalQubit { search, grid } => {
            let mut m = obj(optimal_witness().to_json());
            if *search {
                let r = numeric_search(*grid, 10_000, cli.seed)?;
                let mut s = Map::new();
                s.insert("t".into(), format::num(r.t));
                s.insert("u".into(), format::num(r.u));
                s.insert("lambda".into(), format::num(r.lambda));
                s.insert("evaluations".into(), Value::from(r.evaluations));
                s.insert("seed".into(), Value::from(cli.seed));
                m.insert("numeric_search".into(), Value::Object(s));
            }
            Value::Object(m)
        }
        Command::BlochScan { a, b, ntheta, nphi, out } => {
            check_out(out)?;
            let (a, b) = load_pair(a, b)?;
            let table = bloch_scan(&a, &b, *ntheta, *nphi)?;
            write(out, &table.to_csv())?;
            table.summary().to_json()
        }
        Command::Construct { state, alpha } => {
            let j: OperatorJson = serde_json::from_str(&read(state)?)?;
            let rho = DensityMatrix::from_json(&j)?;
            construct_for_state(&rho, *alpha)?.to_json()
        }
        Command::Collective { a, b, nmax, out } => {
            check_out(out)?;
            let (a, b) = load_pair(a, b)?;
            let rep = scaling_report(&a, &b, *nmax)?;
            write(out, &rep.to_csv())?;
            rep.to_json()
        }
        Command::Chsh { seeds, dim } => {
            let dims = dim.map(|d| vec![d]).unwrap_or_else(|| vec![2, 3]);
            let mut m = obj(chsh_report(*seeds, &dims, cli.seed)?.to_json());
            m.insert("seed".into(), Value::from(cli.seed));
            Value::Object(m)
        }
        Command::ClassicalCheck { data, a, b, tol } => {
            let d: MomentDataset = serde_json::from_str(&read(data)?)?;
            d.validate()?;
            let mut m = obj(minimal_model_check(&d, a, b, *tol)?.to_json());
            m.insert("A".into(), Value::from(a.as_str()));
            m.insert("B".into(), Value::from(b.as_str()));
            m.insert("tol".into(), format::num(*tol));
            Value::Object(m)
        }
        Command::ClassicalDemo { example } => match example {
            2 => example2_demo().to_json(),
            _ => example3_demo().to_json(),
        },
        Command::PhaseSpace { m, zmax, nz, out } => {
            check_out(out)?;
            let scan = phase_space_scan(*m, *zmax, *nz)?;
            write(out, &scan.to_csv())?;
            let mut j = obj(scan.spectrum_json());
            let trunc = FockTruncation::new(scan.cutoff)?;
            let r_max = 1.5 * zmax.max((*m as f64 + 1.0).sqrt());
            let chk = check_phase_space_witness(&PhaseSpacePolynomial::k_m(*m), &trunc, r_max, 121, 16, 1e-10)?;
            let mut c = Map::new();
            c.insert("symbol_min".into(), format::num(chk.symbol_min));
            c.insert("symbol_argmin".into(), format::complex_vec(&[chk.symbol_argmin]));
            c.insert("symbol_imag_max".into(), format::num(chk.symbol_imag_max));
            c.insert("lambda_min".into(), format::num(chk.lambda_min));
            c.insert("anti_hermitian_residual".into(), format::num(chk.anti_hermitian_residual));
            c.insert("is_phase_space_qw".into(), Value::from(chk.is_phase_space_qw));
            j.insert("phase_space_check".into(), Value::Object(c));
            Value::Object(j)
        }
        Command::Generalized { spec, preset } => {
            let spec = match (spec, preset.as_deref()) {
                (Some(path), _) => {
                    let j: GeneralizedWitnessJson = serde_json::from_str(&read(path)?)?;
                    GeneralizedWitnessSpec::from_json(&j)?
                }
                (None, None | Some("optimal")) => {
                    let (a, b) = optimal_pair();
                    let coeffs = ["RS", "SR", "SS"].iter().map(|w| Ok((parse_word(w)?, 1.0))).collect::<Result<Vec<_>>>()?;
                    GeneralizedWitnessSpec::new(coeffs, a.clone(), b.sub(&a)?)?
                }
                (None, Some(other)) => return Err(QwitError::Precondition(format!("unknown preset '{other}'"))),
            };
            check_generalized(&spec).to_json()
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|v| {
        let text = format::to_json_string(&v);
        if let Some(r) = &cli.report {
            write(r, &text)?;
        }
        print!("{text}");
        Ok(())
    }) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
