use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use changuard::budget::{calibrate_tolerance, shot_budget, BudgetParams, ReferenceMode};
use changuard::channels::{
    family_labels, kernel_circuit, observable_family, ChannelKind, DriftParams, FamilyTier,
    REFERENCE_PAIR,
};
use changuard::contract::{
    compute_fingerprint, Fingerprint, MeasurementMode, ReferenceSource, StageSpec, Verdict,
    VerifierConfig,
};
use changuard::expcli::{emit_report, run_experiment, ExperimentConfig, ExperimentKind, ReportFormat};
use changuard::framebound::{frame_bound_analytic_local, frame_bound_numeric, FrameBoundOptions};
use changuard::rng::{seeded, substream};
use changuard::simcore::NoiseModel;
use changuard::{Error, Result};

#[derive(Parser)]
#[command(name = "changuard", version, about = "Observable-contract verification for quantum kernel channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Shots per observable.
    #[arg(long, global = true)]
    shots: Option<u64>,
    /// Exact expectation values instead of sampling.
    #[arg(long, global = true)]
    exact: bool,
    #[arg(long, global = true, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, global = true, value_enum)]
    channel: Option<ChannelArg>,
    /// Drift over-rotation angles `alpha0,alpha1` (with `--channel drift`).
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    drift_alpha: Option<Vec<f64>>,
    /// Drift phase angles `beta0,beta1` (with `--channel drift`).
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    drift_beta: Option<Vec<f64>>,
    /// Depolarizing strength λ.
    #[arg(long, global = true)]
    noise_lambda: Option<f64>,
    /// Per-bit readout flip probability.
    #[arg(long, global = true)]
    noise_readout: Option<f64>,
    /// Output directory for artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Weak,
    Complete,
    Tier2,
    Tier3,
}

impl From<FamilyArg> for FamilyTier {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Weak => FamilyTier::Weak,
            FamilyArg::Complete => FamilyTier::Complete,
            FamilyArg::Tier2 => FamilyTier::Tier2,
            FamilyArg::Tier3 => FamilyTier::Tier3,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    Honest,
    Sneaky,
    WeakSneaky,
    Drift,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Precomputed,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Measure a channel's fingerprint at the reference input pair.
    Fingerprint,
    /// Stream randomized verification rounds against a reference fingerprint.
    Verify {
        /// Reference fingerprint JSON; computed from the honest channel if absent.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, default_value_t = 0.15)]
        epsilon: f64,
        #[arg(long, default_value_t = 20)]
        rounds: u64,
        /// Shots per observable of a computed (non-exact) reference.
        #[arg(long, default_value_t = 100_000)]
        reference_shots: u64,
    },
    /// Shot budget for a detection margin.
    Budget {
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 0.15)]
        epsilon: f64,
        /// Frame-bound constant C (default √3).
        #[arg(long)]
        frame_bound: Option<f64>,
        #[arg(long, default_value_t = 6)]
        k: usize,
        #[arg(long, default_value_t = 0.05)]
        eta: f64,
        #[arg(long, value_enum, default_value = "sampled")]
        mode: ModeArg,
    },
    /// Tolerance interval from fingerprints taken at different times.
    Calibrate {
        /// Fingerprint JSON files, one per timepoint.
        #[arg(required = true, num_args = 2..)]
        fingerprints: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        delta_min: f64,
        #[arg(long)]
        frame_bound: Option<f64>,
    },
    /// Numerical frame-bound constant of an observable family.
    Framebound {
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        iters: usize,
    },
    /// Run one of the experiments and write its artifacts.
    Experiment {
        #[arg(value_enum)]
        which: ExperimentArg,
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Detection,
    Sample,
    Drift,
}

const DEFAULT_SEED: u64 = 0;

impl Global {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn noise(&self) -> Result<NoiseModel> {
        let d = NoiseModel::default();
        NoiseModel::new(
            self.noise_lambda.unwrap_or(d.depolarize),
            self.noise_readout.unwrap_or(d.readout_flip),
        )
    }

    fn family(&self, default: FamilyTier) -> FamilyTier {
        self.family.map(Into::into).unwrap_or(default)
    }

    fn channel(&self) -> Result<Option<ChannelKind>> {
        let pair = |v: &Option<Vec<f64>>| match v.as_deref() {
            None => Ok([0.0, 0.0]),
            Some([a, b]) => Ok([*a, *b]),
            Some(_) => Err(Error::Config("drift angles take two values".into())),
        };
        self.channel.map(|c| match c {
            ChannelArg::Honest => Ok(ChannelKind::Honest),
            ChannelArg::Sneaky => Ok(ChannelKind::Sneaky),
            ChannelArg::WeakSneaky => Ok(ChannelKind::WeakenedSneaky),
            ChannelArg::Drift => {
                let d = DriftParams {
                    alpha: pair(&self.drift_alpha)?,
                    beta: pair(&self.drift_beta)?,
                    depolarize: None,
                };
                d.validate()?;
                Ok(ChannelKind::Drifted(d))
            }
        })
        .transpose()
    }

    fn mode(&self, kind: &ChannelKind, shots: u64) -> Result<MeasurementMode> {
        if self.exact {
            return Ok(MeasurementMode::Exact);
        }
        Ok(MeasurementMode::Shots {
            shots,
            noise: kind.effective_noise(&self.noise()?),
        })
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| Error::Io {
        path: path.clone(),
        source: e,
    })?;
    Ok(path)
}

fn emit<T: Serialize>(g: &Global, name: &str, value: &T) -> Result<()> {
    match &g.out {
        Some(dir) => {
            let path = write_json(dir, name, value)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => print_json(value),
    }
}

fn cmd_fingerprint(g: &Global) -> Result<ExitCode> {
    let kind = g.channel()?.unwrap_or(ChannelKind::Honest);
    let family = observable_family(g.family(FamilyTier::Complete));
    let circuit = kernel_circuit(&kind, &REFERENCE_PAIR.0, &REFERENCE_PAIR.1)?;
    let mode = g.mode(&kind, g.shots.unwrap_or(2280))?;
    let mut fp = compute_fingerprint(&circuit, &family, &mode, &mut seeded(g.seed()))?;
    fp.provenance.channel = kind.descriptor();
    fp.provenance.seed = Some(g.seed());
    emit(g, "fingerprint.json", &fp)?;
    Ok(ExitCode::SUCCESS)
}

fn load_fingerprint(path: &Path) -> Result<Fingerprint> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Fingerprint::from_json(&text)
}

fn cmd_verify(
    g: &Global,
    reference: &Option<PathBuf>,
    epsilon: f64,
    rounds: u64,
    reference_shots: u64,
) -> Result<ExitCode> {
    let family = observable_family(g.family(FamilyTier::Complete));
    let spec = StageSpec::new(&family, epsilon, "honest")?;
    let reference = match reference {
        Some(path) => {
            let mut fp = load_fingerprint(path)?;
            fp.provenance.source = ReferenceSource::File;
            fp
        }
        None => {
            let honest = kernel_circuit(&ChannelKind::Honest, &REFERENCE_PAIR.0, &REFERENCE_PAIR.1)?;
            let mode = g.mode(&ChannelKind::Honest, reference_shots)?;
            compute_fingerprint(&honest, &family, &mode, &mut substream(g.seed(), &[0]))?
        }
    };
    let kind = g.channel()?.unwrap_or(ChannelKind::Honest);
    let channel = kernel_circuit(&kind, &REFERENCE_PAIR.0, &REFERENCE_PAIR.1)?;
    let noise = if g.exact {
        NoiseModel::IDEAL
    } else {
        kind.effective_noise(&g.noise()?)
    };
    let config = VerifierConfig {
        rounds,
        shots_per_round: g.shots.unwrap_or(2280),
        noise,
    };
    let report = changuard::contract::run_verifier(
        &spec,
        &reference,
        &channel,
        &config,
        &mut substream(g.seed(), &[1]),
    )?;
    emit(g, "verdict.json", &report)?;
    eprintln!(
        "verdict: {} ({} rounds, family {:?})",
        report.verdict.as_str(),
        report.trail.len(),
        family_labels(&family)
    );
    Ok(match report.verdict {
        Verdict::Accept => ExitCode::SUCCESS,
        Verdict::Halt => ExitCode::from(2),
    })
}

fn cmd_experiment(g: &Global, which: ExperimentArg, trials: Option<usize>) -> Result<ExitCode> {
    let kind = match which {
        ExperimentArg::Detection => ExperimentKind::Detection,
        ExperimentArg::Sample => ExperimentKind::Sample,
        ExperimentArg::Drift => ExperimentKind::Drift,
    };
    let mut cfg = match &g.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            let mut cfg: ExperimentConfig =
                serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            cfg.experiment = kind;
            cfg
        }
        None => ExperimentConfig::new(kind, DEFAULT_SEED),
    };
    if let Some(s) = g.seed {
        cfg.seed = Some(s);
    }
    if let Some(s) = g.shots {
        cfg.shots = s;
    }
    cfg.exact |= g.exact;
    if let Some(f) = g.family {
        cfg.family = Some(f.into());
    }
    if let Some(c) = g.channel()? {
        cfg.adversary = Some(c);
    }
    if let Some(l) = g.noise_lambda {
        cfg.noise.depolarize = l;
    }
    if let Some(r) = g.noise_readout {
        cfg.noise.readout_flip = r;
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(o) = &g.out {
        cfg.out = Some(o.clone());
    }
    cfg.validate()?;

    let artifact = run_experiment(&cfg)?;
    match &cfg.out {
        Some(dir) => {
            for p in emit_report(&artifact, dir, ReportFormat::Both)? {
                eprintln!("wrote {}", p.display());
            }
        }
        None => print_json(&artifact)?,
    }
    for note in &artifact.notes {
        eprintln!("note: {note}");
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match &cli.command {
        Command::Fingerprint => cmd_fingerprint(g),
        Command::Verify {
            reference,
            epsilon,
            rounds,
            reference_shots,
        } => cmd_verify(g, reference, *epsilon, *rounds, *reference_shots),
        Command::Budget {
            delta,
            epsilon,
            frame_bound,
            k,
            eta,
            mode,
        } => {
            let params = BudgetParams {
                delta: *delta,
                epsilon: *epsilon,
                frame_bound: frame_bound.unwrap_or_else(|| 3f64.sqrt()),
                k: *k,
                op_norm: 1.0,
                eta: *eta,
                mode: match mode {
                    ModeArg::Precomputed => ReferenceMode::Precomputed,
                    ModeArg::Sampled => ReferenceMode::Sampled,
                },
            };
            emit(g, "budget.json", &shot_budget(&params)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Calibrate {
            fingerprints,
            delta_min,
            frame_bound,
        } => {
            let fps = fingerprints
                .iter()
                .map(|p| load_fingerprint(p))
                .collect::<Result<Vec<_>>>()?;
            let iv = calibrate_tolerance(&fps, *delta_min, frame_bound.unwrap_or_else(|| 3f64.sqrt()))?;
            emit(g, "calibration.json", &iv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Framebound { restarts, iters } => {
            let tier = g.family(FamilyTier::Complete);
            let opts = FrameBoundOptions {
                restarts: *restarts,
                iters: *iters,
                ..Default::default()
            };
            let result = frame_bound_numeric(&observable_family(tier), &opts, &mut seeded(g.seed()))?;
            if matches!(tier, FamilyTier::Complete) {
                eprintln!("analytic local bound: {:.7}", frame_bound_analytic_local(2)?);
            }
            emit(g, "framebound.json", &result)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment { which, trials } => cmd_experiment(g, *which, *trials),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
