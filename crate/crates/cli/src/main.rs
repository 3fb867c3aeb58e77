//! `dfs-sense`: spectra, the Δ/L summary table, protocol reports, parameter
//! sweeps and dephasing checks from a JSON scenario.
//!
//! Exit codes: 0 success, 2 schema error, 3 infeasible protocol, 4 numeric failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use dfs_sense::bayes::{variance_reduction, Prior, ProbeState};
use dfs_sense::dfs_control::{extremal_anchor, EffectiveSpectrum, SpinConfig};
use dfs_sense::export::{self, CsvTable};
use dfs_sense::field_geometry::{dfs_condition, orthogonal_complement};
use dfs_sense::montecarlo::{dephase_coherence, mc_dephase_check, DephasingChannel, PhaseDistribution};
use dfs_sense::placement::table1;
use dfs_sense::protocols::{self, ProtocolReport};
use dfs_sense::scenario::{ProtocolKindSpec, Scenario};
use dfs_sense::Error;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "dfs-sense", version, about = "Decoherence-free probes and Bayesian precision for distributed field sensing")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Axis {
    T,
    L,
    Delta,
    N,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Levels of the decoherence-free subspace with Δ, L and the smallest gap.
    Spectrum {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Δ and L of the gradient placements, closed form and exact enumeration.
    Table1 {
        /// Even qubit counts.
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 6, 8, 10, 12, 14, 16])]
        qubits: Vec<usize>,
    },
    /// Predicted (and optionally simulated) precision of the scenario's protocol.
    Protocol {
        #[arg(long)]
        scenario: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Evaluate a curve along one parameter.
    Sweep {
        /// Required for every axis except N.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, value_enum)]
        axis: Axis,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Compare analytic and Monte-Carlo dephasing for protected and unprotected pairs.
    DfsCheck {
        #[arg(long)]
        scenario: PathBuf,
        /// Phase standard deviation of every noise source.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Draw noise phases uniformly on the circle instead.
        #[arg(long)]
        uniform: bool,
        /// Maximum number of protected pairs checked.
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[command(flatten)]
        sim: SimArgs,
    },
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct SimArgs {
    /// Run Monte-Carlo trials.
    #[arg(long)]
    simulate: bool,
    /// Overrides the scenario's trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// Overrides the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl SimArgs {
    fn trials(&self, s: &Scenario) -> usize {
        self.trials.unwrap_or(s.trials)
    }

    fn seed(&self, s: &Scenario) -> u64 {
        self.seed.unwrap_or(s.seed)
    }
}

/// Scenario file problems: unreadable, malformed or failing the schema.
#[derive(Debug)]
struct SchemaError(String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SchemaError {}

fn load(path: &Path) -> anyhow::Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|e| SchemaError(format!("{}: {e}", path.display())))?;
    Scenario::from_json(&text).map_err(|e| SchemaError(format!("{}: {e}", path.display())).into())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<SchemaError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidInput(_) | Error::LengthMismatch { .. } | Error::NonFinite { .. }) => 2,
        Some(
            Error::InsufficientTime(_)
            | Error::NoSignalComponent
            | Error::NoComplement { .. }
            | Error::Unreachable(_)
            | Error::TooLarge { .. }
            | Error::Degenerate(_),
        ) => 3,
        Some(Error::NotLinear | Error::InvalidState(_) | Error::DependentNoise { .. }) => 4,
        None => 1,
    }
}

enum Output {
    Tables(Vec<CsvTable>),
    Json(serde_json::Value),
}

fn emit(out: Output, path: Option<&Path>) -> anyhow::Result<()> {
    let text = match out {
        Output::Json(v) => serde_json::to_string_pretty(&v)? + "\n",
        Output::Tables(ts) => ts.iter().map(CsvTable::to_csv_string).collect::<Vec<_>>().join("\n"),
    };
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("DFS_SENSE_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| SchemaError(format!("DFS_SENSE_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            bail!(SchemaError("DFS_SENSE_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let json = cli.format == Format::Json;
    let out = match &cli.command {
        Command::Spectrum { scenario } => cmd_spectrum(&load(scenario)?, json)?,
        Command::Table1 { qubits } => cmd_table1(qubits, json)?,
        Command::Protocol { scenario, sim } => cmd_protocol(&load(scenario)?, sim, json)?,
        Command::Sweep { scenario, axis, from, to, steps, sim } => {
            let s = scenario.as_deref().map(load).transpose()?;
            cmd_sweep(s.as_ref(), *axis, *from, *to, *steps, sim, json)?
        }
        Command::DfsCheck { scenario, sigma, uniform, pairs, sim } => {
            cmd_dfs_check(&load(scenario)?, *sigma, *uniform, *pairs, sim, json)?
        }
    };
    emit(out, cli.out.as_deref())
}

fn config_string(c: &SpinConfig) -> String {
    c.spins().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_spectrum(s: &Scenario, json: bool) -> anyhow::Result<Output> {
    let spectrum = s.spectrum()?;
    if json {
        return Ok(Output::Json(json!({
            "levels": spectrum.levels(),
            "configs": spectrum.configs().iter().map(|c| c.spins().to_vec()).collect::<Vec<_>>(),
            "delta": if spectrum.len() > 1 { spectrum.delta() } else { 0.0 },
            "L": spectrum.len(),
            "gap": spectrum.min_gap(),
            "linear": spectrum.is_linear(),
        })));
    }
    Ok(Output::Tables(vec![export::spectrum_summary(&spectrum), export::spectrum_table(&spectrum)]))
}

fn cmd_table1(qubits: &[usize], json: bool) -> anyhow::Result<Output> {
    let rows = table1(qubits.iter().copied())?;
    Ok(if json { Output::Json(serde_json::to_value(&rows)?) } else { Output::Tables(vec![export::table1_csv(&rows)]) })
}

fn build_report(s: &Scenario, spectrum: &EffectiveSpectrum, sim: &SimArgs) -> anyhow::Result<ProtocolReport> {
    let mut report = s.report_on(spectrum)?;
    if sim.simulate {
        protocols::simulate(&mut report, spectrum, sim.trials(s), sim.seed(s))?;
    }
    Ok(report)
}

fn cmd_protocol(s: &Scenario, sim: &SimArgs, json: bool) -> anyhow::Result<Output> {
    let report = build_report(s, &s.protocol_spectrum()?, sim)?;
    if json {
        return Ok(Output::Json(serde_json::to_value(&report)?));
    }
    let mut tables = vec![export::report_table(&report)];
    if !report.schedule.is_empty() {
        tables.push(export::schedule_table(&report));
    }
    Ok(Output::Tables(tables))
}

fn grid(from: f64, to: f64, steps: usize) -> anyhow::Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) || steps == 0 || to < from {
        bail!(SchemaError(format!("invalid sweep range {from}..{to} with {steps} steps")));
    }
    Ok(if steps == 1 {
        vec![from]
    } else {
        (0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect()
    })
}

fn integer_grid(from: f64, to: f64, steps: usize, even: bool) -> anyhow::Result<Vec<usize>> {
    let mut v: Vec<usize> = grid(from, to, steps)?
        .into_iter()
        .map(|x| x.round().max(0.0) as usize)
        .map(|n| if even { n + n % 2 } else { n })
        .filter(|&n| n >= 2)
        .collect();
    v.dedup();
    Ok(v)
}

fn require(s: Option<&Scenario>) -> anyhow::Result<&Scenario> {
    s.ok_or_else(|| SchemaError("this sweep axis needs --scenario".into()).into())
}

fn cmd_sweep(
    s: Option<&Scenario>,
    axis: Axis,
    from: f64,
    to: f64,
    steps: usize,
    sim: &SimArgs,
    json: bool,
) -> anyhow::Result<Output> {
    let table = match axis {
        Axis::N => {
            let ns = integer_grid(from, to, steps, true)?;
            export::table1_csv(&table1(ns)?)
        }
        Axis::T => sweep_time(require(s)?, &grid(from, to, steps)?)?,
        Axis::L | Axis::Delta => sweep_spectrum(require(s)?, axis, from, to, steps, sim)?,
    };
    if json {
        let rows: Vec<serde_json::Value> = table
            .rows
            .iter()
            .map(|r| {
                let obj = table.header.iter().cloned().zip(r.iter().map(|v| json_value(v))).collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let provenance: serde_json::Map<_, _> =
            table.provenance.iter().map(|(c, f)| (c.clone(), json!(f))).collect();
        return Ok(Output::Json(json!({ "provenance": provenance, "rows": rows })));
    }
    Ok(Output::Tables(vec![table]))
}

fn json_value(v: &str) -> serde_json::Value {
    v.parse::<f64>().ok().filter(|x| x.is_finite()).map_or_else(|| json!(v), |x| json!(x))
}

/// Variance reduction of both probe families against interaction time.
fn sweep_time(s: &Scenario, times: &[f64]) -> anyhow::Result<CsvTable> {
    let spectrum = s.protocol_spectrum()?;
    let prior = match s.prior {
        Some(p @ Prior::Gaussian { .. }) => p,
        _ => bail!(SchemaError("time sweeps need a Gaussian prior".into())),
    };
    let thresholds = match s.protocol.as_ref().map(|p| &p.kind) {
        Some(ProtocolKindSpec::FixedTime { thresholds, .. }) => *thresholds,
        _ => Default::default(),
    };
    let l = spectrum.len();
    let ghz = ProbeState::ghz(l)?;
    let sine = ProbeState::berry_wiseman(l)?;
    let mut t = CsvTable::new(["t", "x", "x_per_gap", "regime", "reduction_ghz", "reduction_sine"])
        .formula("x", "t*W0*Delta")
        .formula("reduction_ghz", "1-W0^2*F(rho_bar[GHZ])")
        .formula("reduction_sine", "1-W0^2*F(rho_bar[sine])");
    for &time in times {
        let x = time * prior.width() * spectrum.delta();
        let regime = thresholds.classify(time, prior.width(), spectrum.delta(), l);
        t.push([
            time.to_string(),
            x.to_string(),
            (x / (l - 1) as f64).to_string(),
            serde_json::to_value(regime)?.as_str().unwrap_or_default().to_string(),
            variance_reduction(&ghz, &prior, &spectrum, time)?.to_string(),
            variance_reduction(&sine, &prior, &spectrum, time)?.to_string(),
        ]);
    }
    Ok(t)
}

/// Protocol predictions on ladders with varying `L` (at fixed `Δ/L`) or varying `Δ` (at fixed `L`).
fn sweep_spectrum(s: &Scenario, axis: Axis, from: f64, to: f64, steps: usize, sim: &SimArgs) -> anyhow::Result<CsvTable> {
    let base = s.protocol_spectrum()?;
    let (l0, delta0) = (base.len(), base.delta());
    let points: Vec<(usize, f64)> = match axis {
        Axis::L => integer_grid(from, to, steps, false)?
            .into_iter()
            .map(|l| (l, delta0 / l0 as f64 * l as f64))
            .collect(),
        _ => grid(from, to, steps)?.into_iter().map(|d| (l0, d)).collect(),
    };
    let mut table: Option<CsvTable> = None;
    for (l, delta) in points {
        let spectrum = EffectiveSpectrum::linear(l, delta)?;
        let mut scenario = s.clone();
        // at fixed time the comparison is made at constant tW0Δ/(L−1)
        if let Some(ProtocolKindSpec::FixedTime { t, .. }) = scenario.protocol.as_mut().map(|p| &mut p.kind) {
            *t *= (delta0 / (l0 - 1) as f64) / (delta / (l - 1) as f64);
        }
        let report = build_report(&scenario, &spectrum, sim)?;
        let t = table.get_or_insert_with(|| {
            let mut header = vec!["L".to_string(), "delta".to_string()];
            header.extend(report.predictions.iter().map(|p| p.name.clone()));
            if report.simulated.is_some() {
                header.extend(["simulated_mse".into(), "simulated_mse_stderr".into()]);
            }
            let mut t = CsvTable::new(header);
            t.provenance = report.predictions.iter().map(|p| (p.name.clone(), p.formula.clone())).collect();
            t
        });
        let mut row = vec![l.to_string(), delta.to_string()];
        row.extend(report.predictions.iter().map(|p| p.value.to_string()));
        if let Some(sum) = &report.simulated {
            row.extend([sum.mse.to_string(), sum.mse_stderr.to_string()]);
        }
        t.rows.push(row);
    }
    table.ok_or_else(|| SchemaError("sweep range contains no valid points".into()).into())
}

fn cmd_dfs_check(s: &Scenario, sigma: f64, uniform: bool, max_pairs: usize, sim: &SimArgs, json: bool) -> anyhow::Result<Output> {
    let r = s.resolve()?;
    let phases = if uniform {
        PhaseDistribution::Uniform
    } else {
        PhaseDistribution::Gaussian { std_devs: vec![sigma; r.noise.len()] }
    };
    let channel = DephasingChannel::new(r.noise.clone(), phases)?;
    let f_perp = orthogonal_complement(&r.signal, &r.noise)?;
    let anchor = extremal_anchor(&r.array, &f_perp);
    let spectrum = s.spectrum()?;

    let mut pairs: Vec<(SpinConfig, SpinConfig)> = spectrum
        .configs()
        .iter()
        .filter(|c| **c != anchor)
        .take(max_pairs)
        .map(|c| (anchor.clone(), c.clone()))
        .collect();
    // single-site flips of the anchor leave the subspace whenever a noise field touches that site
    for j in 0..anchor.len() {
        let mut spins = anchor.spins().to_vec();
        spins[j] = -spins[j];
        pairs.push((anchor.clone(), SpinConfig::new(spins)));
    }

    let trials = sim.trials(s).max(dfs_sense::montecarlo::MIN_DEPHASE_TRIALS);
    let mut t = CsvTable::new(["s", "r", "protected", "analytic", "mc_mean", "mc_stderr", "z"])
        .formula("analytic", "gaussian: exp(-sum sigma_k^2 (f_k.(s-r))^2/2); uniform: prod sinc(pi f_k.(s-r))");
    let mut rows = Vec::new();
    for (i, (a, b)) in pairs.iter().enumerate() {
        let analytic = dephase_coherence(a, b, &channel);
        let mc = if sim.simulate { Some(mc_dephase_check(a, b, &channel, trials, sim.seed(s).wrapping_add(i as u64))?) } else { None };
        let protected = dfs_condition(a, b, &r.noise);
        rows.push(json!({
            "s": a.spins(), "r": b.spins(), "protected": protected, "analytic": analytic,
            "mc_mean": mc.map(|m| m.mean), "mc_stderr": mc.map(|m| m.stderr), "z": mc.map(|m| m.z_score(analytic)),
        }));
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        t.push([
            config_string(a),
            config_string(b),
            protected.to_string(),
            analytic.to_string(),
            opt(mc.map(|m| m.mean)),
            opt(mc.map(|m| m.stderr)),
            opt(mc.map(|m| m.z_score(analytic))),
        ]);
    }
    Ok(if json { Output::Json(json!(rows)) } else { Output::Tables(vec![t]) })
}
