//! The `psc-smm` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use psc_core::multiclass::{assemble, check_classes, one_vs_rest};
use psc_core::synth::{DEFAULT_SIGMA, FLEVOLAND_CLASSES};
use psc_core::{
    confusion, default_flevoland_shape, encode_dataset, generate, predict, train_binary, Dataset, ModelError,
    ObjectiveSpec, SolverConfig, SynthConfig, Variant,
};

use crate::config::{config_args, parse_config};
use crate::dataset::{parse_dataset, write_dataset, write_encoded};
use crate::labels::{parse_labels, write_labels, Labels};
use crate::map::{render_map, DEFAULT_PALETTE};
use crate::model::{parse_multiclass_model, write_multiclass_model};
use crate::report::Report;

pub const TRAIN_FILE: &str = "train.txt";
pub const TEST_FILE: &str = "test.txt";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    NotConverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::NotConverged(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "psc-smm", version, about = "PolSAR classification with scattering coding and support matrix machines")]
pub struct Cli {
    /// File of `key = value` defaults for the subcommand's flags
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Generate synthetic train/test datasets
    Synth(SynthArgs),
    /// Write the coded 4x4 matrix of every sample
    Encode(EncodeArgs),
    /// Train a one-vs-rest model
    Train(TrainArgs),
    /// Predict labels, optionally rendering a classification map
    Predict(PredictArgs),
    /// Score predicted labels against a labeled dataset
    Eval(EvalArgs),
}

#[derive(Debug, clap::Args)]
pub struct SynthArgs {
    /// Output directory; receives train.txt and test.txt
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Noise standard deviation per real component
    #[arg(long)]
    pub sigma: Option<f64>,
    /// 15 classes, 500 training samples each and the full test counts
    #[arg(long)]
    pub flevoland_shape: bool,
}

#[derive(Debug, clap::Args)]
pub struct EncodeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub variant: Variant,
    #[arg(long, default_value_t = ObjectiveSpec::DEFAULT_GAMMA)]
    pub gamma: f64,
    #[arg(long, default_value_t = ObjectiveSpec::DEFAULT_TAU)]
    pub tau: f64,
    #[arg(long = "C", default_value_t = ObjectiveSpec::DEFAULT_C)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    /// Primal and dual residual tolerance
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exit with status 3 if any class fails to converge
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, clap::Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Write a PPM classification map of the dataset's pixels
    #[arg(long)]
    pub map: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    #[arg(long = "true")]
    pub truth: PathBuf,
    #[arg(long)]
    pub pred: PathBuf,
}

/// Small 15-class configuration used by `synth` without `--flevoland-shape`.
pub fn demo_shape() -> SynthConfig {
    let mut cfg = default_flevoland_shape();
    cfg.train_per_class = 40;
    cfg.test_counts = vec![80; FLEVOLAND_CLASSES.len()];
    cfg.image_dims = Some((30, 60));
    cfg
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match splice_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn splice_config(mut args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let strings: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut path = None;
    let mut skip = None;
    for (i, a) in strings.iter().enumerate().skip(1) {
        if a == "--config" {
            path = strings.get(i + 1).cloned();
            skip = Some(i + 1);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let Some(sub_at) = (1..strings.len()).find(|&i| !strings[i].starts_with('-') && Some(i) != skip) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let entries = parse_config(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let given: Vec<String> = strings[sub_at + 1..]
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    let extra = config_args(&Cli::command(), &strings[sub_at], &entries, &given)
        .map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let at = sub_at + 1;
    args.splice(at..at, extra.into_iter().map(OsString::from));
    Ok(args)
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Cmd::Synth(a) => synth(a, out),
        Cmd::Encode(a) => encode(a),
        Cmd::Train(a) => train(a, out),
        Cmd::Predict(a) => predict_cmd(a),
        Cmd::Eval(a) => eval(a, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn read_dataset(path: &Path) -> Result<Dataset, CliError> {
    parse_dataset(&read(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn synth(a: SynthArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = if a.flevoland_shape { default_flevoland_shape() } else { demo_shape() };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    cfg = cfg.with_sigma(a.sigma.unwrap_or(DEFAULT_SIGMA));
    let (train, test) = generate(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    fs::create_dir_all(&a.out).map_err(|e| CliError::Data(format!("{}: {e}", a.out.display())))?;
    write(&a.out.join(TRAIN_FILE), write_dataset(&train))?;
    write(&a.out.join(TEST_FILE), write_dataset(&test))?;
    let _ = writeln!(
        out,
        "wrote {} training and {} test samples of {} classes to {}",
        train.len(),
        test.len(),
        train.num_classes(),
        a.out.display()
    );
    Ok(())
}

fn encode(a: EncodeArgs) -> Result<(), CliError> {
    let d = read_dataset(&a.input)?;
    let encoded = encode_dataset(&d).map_err(|e| CliError::Data(format!("{}: {e}", a.input.display())))?;
    write(&a.out, write_encoded(&encoded))
}

fn describe(e: ModelError, names: &[String]) -> CliError {
    match e {
        ModelError::EmptyClass(k) => CliError::Data(format!("class {} ({}) has no training samples", k + 1, names[k])),
        ModelError::TooFewClasses(k) => CliError::Data(format!("training needs at least 2 classes, the file declares {k}")),
        ModelError::InvalidSpec(_) | ModelError::InvalidConfig(_) => CliError::Usage(e.to_string()),
        e => CliError::Data(e.to_string()),
    }
}

fn train(a: TrainArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = ObjectiveSpec::for_variant(a.variant, a.gamma, a.tau, a.c);
    let cfg = SolverConfig {
        rho: a.rho,
        max_iters: a.max_iters,
        tol_primal: a.tol,
        tol_dual: a.tol,
        seed: a.seed,
        ..SolverConfig::default()
    };
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let d = read_dataset(&a.train)?;
    let k = d.num_classes();
    let encoded = encode_dataset(&d).map_err(|e| CliError::Data(format!("{}: {e}", a.train.display())))?;
    check_classes(&encoded, k).map_err(|e| describe(e, &d.class_names))?;

    let shape = spec.variant.input_shape();
    let results: Vec<_> = (0..k)
        .into_par_iter()
        .map(|class| {
            let data = one_vs_rest(&encoded, class, shape)?;
            train_binary(&data, &spec, &cfg)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| describe(e, &d.class_names))?;
    let (models, reports): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let model = assemble(models, &d.class_names, k, &spec, shape).map_err(|e| describe(e, &d.class_names))?;
    write(&a.model, write_multiclass_model(&model))?;

    let mut stalled = Vec::new();
    for (class, r) in reports.iter().enumerate() {
        let _ = writeln!(
            out,
            "c{} {}: {} iterations, objective {:.6}, {}",
            class + 1,
            d.class_names[class],
            r.iterations,
            r.objective,
            if r.converged { "converged" } else { "not converged" }
        );
        if !r.converged {
            stalled.push(format!("c{}", class + 1));
        }
    }
    if a.strict && !stalled.is_empty() {
        return Err(CliError::NotConverged(format!(
            "no convergence within {} iterations for {}",
            a.max_iters,
            stalled.join(", ")
        )));
    }
    Ok(())
}

fn predict_cmd(a: PredictArgs) -> Result<(), CliError> {
    let model = parse_multiclass_model(&read(&a.model)?).map_err(|e| CliError::Data(format!("{}: {e}", a.model.display())))?;
    let d = read_dataset(&a.input)?;
    let encoded = encode_dataset(&d).map_err(|e| CliError::Data(format!("{}: {e}", a.input.display())))?;
    let labels: Vec<usize> = encoded
        .par_iter()
        .map(|(x, _)| predict(&model, x).map(|(class, _)| class))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Data(e.to_string()))?;
    write(
        &a.out,
        write_labels(&Labels {
            labels: labels.clone(),
            num_classes: model.num_classes(),
            method: model.spec.variant.method_name().to_string(),
        }),
    )?;

    if let Some(path) = a.map {
        let (h, w) = d.image_dims.ok_or_else(|| {
            CliError::Data(format!("{}: dataset has no image dimensions to draw a map", a.input.display()))
        })?;
        let mut grid = vec![vec![None; w]; h];
        for (s, &label) in d.samples.iter().zip(&labels) {
            if let Some((r, c)) = s.pixel {
                grid[r][c] = Some(label);
            }
        }
        let ppm = render_map(&grid, &DEFAULT_PALETTE).map_err(|e| CliError::Data(e.to_string()))?;
        write(&path, ppm)?;
    }
    Ok(())
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let d = read_dataset(&a.truth)?;
    let pred = parse_labels(&read(&a.pred)?).map_err(|e| CliError::Data(format!("{}: {e}", a.pred.display())))?;
    if pred.num_classes != d.num_classes() {
        return Err(CliError::Data(format!(
            "predictions use {} classes but the dataset has {}",
            pred.num_classes,
            d.num_classes()
        )));
    }
    let cm = confusion(&d.labels(), &pred.labels, d.num_classes()).map_err(|e| CliError::Data(e.to_string()))?;
    let report = Report::new(&pred.method, &cm).map_err(|e| CliError::Data(e.to_string()))?;
    let _ = write!(out, "{}", report.render());
    Ok(())
}
