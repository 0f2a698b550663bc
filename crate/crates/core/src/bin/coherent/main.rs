//! Command-line front end: decompositions, Trotter sweeps, Fock distributions,
//! ansatz training and gate counts as CSV/JSON files with optional SVG plots.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coherent::displacement::{self, DisplacementPlan};
use coherent::fock::{coherent_target, FockDim, NormalizationMode, Quadrature};
use coherent::format::{parse_complex, sig15};
use coherent::pauli::ladder_strings;
use coherent::plot::{bar_chart, line_chart, Bar, Series};
use coherent::vqa::{self, AnsatzSpec, Scheme, TrainConfig};
use coherent::Complex64;
use serde::Serialize;

const EXIT_RUNTIME: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNCONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "coherent", version, about = "Prepare bosonic coherent states on qubit registers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pauli-string decomposition of Z1 = i(a† − a) or Z2 = −(a + a†)
    Decompose {
        #[arg(long)]
        qubits: usize,
        #[arg(long, value_enum)]
        matrix: MatrixArg,
        #[command(flatten)]
        output: Output,
    },
    /// Final state and fidelity of the Trotterized displacement circuit
    Prepare {
        #[command(flatten)]
        disp: Displacement,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Fidelity against the number of Trotter steps
    Sweep {
        #[command(flatten)]
        disp: Displacement,
        /// Inclusive range `a:b` or comma list
        #[arg(long, value_parser = parse_range)]
        steps: Values,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        data: DataOutput,
    },
    /// Fock-number distribution of the prepared state with the Poisson reference
    Dist {
        #[command(flatten)]
        disp: Displacement,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        data: DataOutput,
    },
    /// Train one ansatz and write the optimization report
    Train {
        #[command(flatten)]
        ansatz: Ansatz,
        #[arg(long)]
        layers: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Final fidelity against the number of ansatz layers
    Layers {
        #[command(flatten)]
        ansatz: Ansatz,
        #[arg(long, value_parser = parse_range)]
        layers: Values,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        data: DataOutput,
    },
    /// Parameter and native gate counts of an ansatz
    Gatecount {
        #[arg(long, value_parser = parse_scheme)]
        scheme: Scheme,
        #[arg(long)]
        qubits: usize,
        #[arg(long, value_parser = parse_range)]
        layers: Values,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        data: DataOutput,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixArg {
    Z1,
    Z2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Displacement {
    /// Complex displacement written as a+bi, e.g. 1+1i, -0.5-2i, 2, 1i
    #[arg(long, allow_hyphen_values = true, value_parser = parse_alpha)]
    alpha: Complex64,
    #[arg(long)]
    qubits: usize,
}

#[derive(Args)]
struct Ansatz {
    #[arg(long, value_parser = parse_scheme)]
    scheme: Scheme,
    #[arg(long)]
    qubits: usize,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_alpha, default_value = "1+1i")]
    alpha: Complex64,
    #[arg(long, default_value_t = 10_000)]
    max_iterations: usize,
    /// Stop once 1 − F drops below this
    #[arg(long, default_value_t = 1e-5)]
    tolerance: f64,
    /// Exit with status 3 if any run stops before reaching the tolerance
    #[arg(long)]
    require_converged: bool,
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DataOutput {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Also write an SVG chart next to the output file
    #[arg(long, requires = "out")]
    plot: bool,
}

fn parse_alpha(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: coherent::Error| e.to_string())
}

/// Integer list given on the command line as `a:b` or `a,b,c`.
#[derive(Clone)]
struct Values(Vec<usize>);

fn parse_range(s: &str) -> Result<Values, String> {
    let bad = || format!("expected N, A:B or a comma list, got {s:?}");
    if let Some((a, b)) = s.split_once(':') {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok(Values((a..=b).collect()));
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>().map(Values)
}

enum Failure {
    Usage(String),
    Runtime(String),
    Unconverged(String),
}

impl From<coherent::Error> for Failure {
    fn from(e: coherent::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn emit(output: &Output, body: &str) -> CmdResult {
    match &output.out {
        Some(path) => fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn emit_plot(output: &Output, data: &DataOutput, svg: impl FnOnce() -> String) -> CmdResult {
    if data.plot {
        let path = output.out.as_deref().map(|p| p.with_extension("svg"));
        let path = path.ok_or_else(|| Failure::Usage("--plot needs --out".into()))?;
        fs::write(Path::new(&path), svg())?;
    }
    Ok(())
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn fock_dim(qubits: usize) -> Result<FockDim, Failure> {
    Ok(FockDim::new(qubits)?)
}

fn alpha_label(alpha: Complex64) -> String {
    let sign = if alpha.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", sig15(alpha.re), sig15(alpha.im.abs()))
}

#[derive(Serialize)]
struct PreparedState {
    alpha: [f64; 2],
    n_qubits: usize,
    trotter_steps: usize,
    /// Overlap with the full coherent state.
    fidelity: f64,
    /// Overlap with the coherent state renormalized inside the register.
    fidelity_truncated: f64,
    amplitudes: Vec<[f64; 2]>,
}

fn cmd_decompose(qubits: usize, matrix: MatrixArg, output: &Output) -> CmdResult {
    let q = match matrix {
        MatrixArg::Z1 => Quadrature::Z1,
        MatrixArg::Z2 => Quadrature::Z2,
    };
    let mut body = ladder_strings(q, fock_dim(qubits)?).to_json();
    body.push('\n');
    emit(output, &body)
}

fn cmd_prepare(disp: &Displacement, steps: usize, output: &Output) -> CmdResult {
    let dim = fock_dim(disp.qubits)?;
    let plan = DisplacementPlan::new(disp.alpha, dim, steps)?;
    let state = displacement::prepare(&plan);
    let full = coherent_target(disp.alpha, dim, displacement::BASELINE)?;
    let truncated = coherent_target(disp.alpha, dim, NormalizationMode::RawTruncated)?;
    let doc = PreparedState {
        alpha: [disp.alpha.re, disp.alpha.im],
        n_qubits: disp.qubits,
        trotter_steps: steps,
        fidelity: displacement::fidelity(&state, &full)?,
        fidelity_truncated: displacement::fidelity(&state, &truncated)?,
        amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
    };
    emit(output, &json(&doc))
}

fn cmd_sweep(disp: &Displacement, steps: &[usize], output: &Output, data: &DataOutput) -> CmdResult {
    let rows = displacement::trotter_sweep(disp.alpha, fock_dim(disp.qubits)?, steps)?;
    let body = match data.format {
        Format::Csv => displacement::sweep_csv(&rows),
        Format::Json => json(&rows),
    };
    emit(output, &body)?;
    emit_plot(output, data, || {
        let series = Series {
            label: format!("{} qubits", disp.qubits),
            points: rows.iter().map(|r| (r.m as f64, r.fidelity)).collect(),
        };
        line_chart(
            &format!("Fidelity of |{}⟩ vs Trotter steps", alpha_label(disp.alpha)),
            "Trotter steps M",
            "F",
            &[series],
        )
    })
}

fn cmd_dist(disp: &Displacement, steps: usize, output: &Output, data: &DataOutput) -> CmdResult {
    let dim = fock_dim(disp.qubits)?;
    let plan = DisplacementPlan::new(disp.alpha, dim, steps)?;
    let probs = displacement::fock_distribution(&displacement::prepare(&plan));
    let rows = displacement::distribution_rows(&probs, disp.alpha, dim)?;
    let body = match data.format {
        Format::Csv => displacement::distribution_csv(&rows),
        Format::Json => json(&rows),
    };
    emit(output, &body)?;
    emit_plot(output, data, || {
        let bars: Vec<Bar> = rows
            .iter()
            .map(|r| Bar {
                label: r.fock_number.to_string(),
                value: r.probability,
                reference: Some(r.poisson_reference),
            })
            .collect();
        bar_chart(
            &format!("Fock distribution of |{}⟩", alpha_label(disp.alpha)),
            "Fock number",
            "Occupation probability",
            &bars,
            "Poisson",
        )
    })
}

fn train_setup(ansatz: &Ansatz) -> Result<(coherent::fock::CoherentTarget, TrainConfig), Failure> {
    if !(ansatz.tolerance.is_finite() && ansatz.tolerance >= 0.0) {
        return Err(Failure::Usage(format!("invalid tolerance {}", ansatz.tolerance)));
    }
    let target = coherent_target(ansatz.alpha, fock_dim(ansatz.qubits)?, NormalizationMode::RawTruncated)?;
    let config =
        TrainConfig { max_iterations: ansatz.max_iterations, cost_tolerance: ansatz.tolerance, initial_params: None };
    Ok((target, config))
}

fn cmd_train(ansatz: &Ansatz, layers: usize, output: &Output) -> CmdResult {
    let spec = AnsatzSpec::new(ansatz.scheme, ansatz.qubits, layers)?;
    let (target, config) = train_setup(ansatz)?;
    let report = vqa::train(&spec, &target, &config)?;
    log::info!(
        "scheme {} layers {layers}: F = {} after {} iterations",
        spec.scheme,
        report.final_fidelity,
        report.iterations
    );
    emit(output, &json(&report))?;
    if ansatz.require_converged && !report.converged {
        return Err(Failure::Unconverged(format!("scheme {} with {layers} layers did not converge", spec.scheme)));
    }
    Ok(())
}

fn cmd_layers(ansatz: &Ansatz, layers: &[usize], output: &Output, data: &DataOutput) -> CmdResult {
    let (target, config) = train_setup(ansatz)?;
    let rows = vqa::layer_sweep(ansatz.scheme, ansatz.qubits, &target, layers, &config)?;
    for r in &rows {
        log::info!(
            "scheme {} layers {}: F = {} after {} iterations",
            ansatz.scheme,
            r.layers,
            r.fidelity,
            r.iterations
        );
    }
    let body = match data.format {
        Format::Csv => vqa::layers_csv(&rows),
        Format::Json => json(&rows),
    };
    emit(output, &body)?;
    emit_plot(output, data, || {
        let series = Series {
            label: format!("scheme {}", ansatz.scheme),
            points: rows.iter().map(|r| (r.layers as f64, r.fidelity)).collect(),
        };
        line_chart(&format!("Fidelity of |{}⟩ vs ansatz layers", alpha_label(ansatz.alpha)), "layers", "F", &[series])
    })?;
    if ansatz.require_converged {
        if let Some(r) = rows.iter().find(|r| !r.converged) {
            return Err(Failure::Unconverged(format!("{} layers did not converge (F = {})", r.layers, r.fidelity)));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct GateRow {
    scheme: Scheme,
    n_qubits: usize,
    layers: usize,
    params: usize,
    single_qubit: usize,
    cnot: usize,
}

fn cmd_gatecount(scheme: Scheme, qubits: usize, layers: &[usize], output: &Output, data: &DataOutput) -> CmdResult {
    let rows = layers
        .iter()
        .map(|&l| {
            let spec = AnsatzSpec::new(scheme, qubits, l)?;
            let r = vqa::resource_report(&spec);
            Ok(GateRow {
                scheme,
                n_qubits: qubits,
                layers: l,
                params: r.params,
                single_qubit: r.single_qubit,
                cnot: r.cnot,
            })
        })
        .collect::<Result<Vec<_>, coherent::Error>>()?;
    let body = match data.format {
        Format::Csv => {
            let mut s = String::from("scheme,n_qubits,layers,params,single_qubit,cnot\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.scheme, r.n_qubits, r.layers, r.params, r.single_qubit, r.cnot
                ));
            }
            s
        }
        Format::Json => json(&rows),
    };
    emit(output, &body)?;
    emit_plot(output, data, || {
        let bars: Vec<Bar> = rows
            .iter()
            .map(|r| Bar { label: r.layers.to_string(), value: r.single_qubit as f64, reference: Some(r.cnot as f64) })
            .collect();
        bar_chart(&format!("Scheme {scheme} gates on {qubits} qubits"), "layers", "single-qubit gates", &bars, "CNOT")
    })
}

fn configure_threads() {
    if let Some(n) = std::env::var("COHERENT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Decompose { qubits, matrix, output } => cmd_decompose(*qubits, *matrix, output),
        Command::Prepare { disp, steps, output } => cmd_prepare(disp, *steps, output),
        Command::Sweep { disp, steps, output, data } => cmd_sweep(disp, &steps.0, output, data),
        Command::Dist { disp, steps, output, data } => cmd_dist(disp, *steps, output, data),
        Command::Train { ansatz, layers, output } => cmd_train(ansatz, *layers, output),
        Command::Layers { ansatz, layers, output, data } => cmd_layers(ansatz, &layers.0, output, data),
        Command::Gatecount { scheme, qubits, layers, output, data } => {
            cmd_gatecount(*scheme, *qubits, &layers.0, output, data)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
        Err(Failure::Unconverged(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_UNCONVERGED)
        }
    }
}
