//! The `gbrs` command-line tool: attribute reduction, kNN benchmarking,
//! parameter sweeps, and concept-tree export.
//!
//! Precedence for every option is CLI flag, then JSON config file, then
//! the built-in default. All file outputs are written to a sibling temp
//! file and renamed, so an interrupted run never leaves a partial file
//! under the requested name.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::dataset::{DecisionSystem, LabelColumn, LoadOptions};
use crate::eval::{
    compare, delta_sweep, evaluate_method, lbs_sweep, EvalConfig, Method,
    ReductionProtocol,
};
use crate::gbrct::{build_tree, BallGen, Gbrct};
use crate::granular_ball::RadiusMode;
use crate::roughset::{forward_reduction, Oracle, Reduct};
use crate::{GbrsError, Result};

#[derive(Debug, Parser)]
#[command(name = "gbrs", about = "Granular-ball rough set feature selection", version)]
pub struct CliArgs {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run forward attribute reduction and write the reduct as JSON.
    Reduce(CommonOpts),
    /// Cross-validate one method, or compare several when none is given.
    Evaluate(EvaluateOpts),
    /// Sweep lbs (method gbnrs) or delta (method nrs) and report the best.
    Sweep(CommonOpts),
    /// Build a concept tree and export DOT + JSON.
    Tree(TreeOpts),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Prs,
    Nrs,
    Gbnrs,
    Gbprs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RadiusArg {
    Avg,
    Max,
}

#[derive(Debug, Args)]
pub struct CommonOpts {
    /// Input CSV; last column is the label unless --label-col is given.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Zero-based label column index.
    #[arg(long)]
    pub label_col: Option<usize>,
    /// Treat the first CSV row as data, not a header.
    #[arg(long)]
    pub no_header: bool,
    /// JSON config file; CLI flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Neighborhood radius for the nrs method.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Ball-size lower bound for the gbnrs method.
    #[arg(long)]
    pub lbs: Option<usize>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub knn_k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Minimum significance gain to keep adding attributes.
    #[arg(long)]
    pub stop_eps: Option<f64>,
    #[arg(long, value_enum)]
    pub radius: Option<RadiusArg>,
    /// Output path (commands with several outputs derive names from it).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker thread cap; 0 or absent means the rayon default.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvaluateOpts {
    #[command(flatten)]
    pub common: CommonOpts,
    /// Reduce on the whole dataset instead of inside each training fold.
    #[arg(long)]
    pub whole_dataset: bool,
}

#[derive(Debug, Args)]
pub struct TreeOpts {
    #[command(flatten)]
    pub common: CommonOpts,
    /// Reuse a reduct written by `gbrs reduce` instead of recomputing.
    #[arg(long)]
    pub reduct: Option<PathBuf>,
    /// CSV of unlabeled-or-labeled rows to classify with the tree.
    #[arg(long)]
    pub classify: Option<PathBuf>,
}

/// Optional entries mirrored from `CommonOpts`, loaded from --config.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub data: Option<PathBuf>,
    pub label_col: Option<usize>,
    pub has_header: Option<bool>,
    pub method: Option<String>,
    pub delta: Option<f64>,
    pub lbs: Option<usize>,
    pub folds: Option<usize>,
    pub knn_k: Option<usize>,
    pub seed: Option<u64>,
    pub stop_eps: Option<f64>,
    pub radius: Option<String>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

/// Everything a command needs after merging flags, file, and defaults.
#[derive(Debug)]
pub struct RunConfig {
    pub data: PathBuf,
    pub load: LoadOptions,
    pub method: Option<MethodArg>,
    pub delta: Option<f64>,
    pub lbs: Option<usize>,
    pub eval: EvalConfig,
    pub out: Option<PathBuf>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn resolve(opts: &CommonOpts) -> Result<Self> {
        let file: FileConfig = match &opts.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| GbrsError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                serde_json::from_str(&text)?
            }
            None => FileConfig::default(),
        };

        let data = opts
            .data
            .clone()
            .or(file.data)
            .ok_or_else(|| GbrsError::Config("no dataset: pass --data".into()))?;
        let label_column = match opts.label_col.or(file.label_col) {
            Some(i) => LabelColumn::Index(i),
            None => LabelColumn::Last,
        };
        let has_header = if opts.no_header {
            false
        } else {
            file.has_header.unwrap_or(true)
        };

        let method = match opts.method {
            Some(m) => Some(m),
            None => file.method.as_deref().map(parse_method).transpose()?,
        };
        let radius_mode = match opts.radius {
            Some(RadiusArg::Avg) => RadiusMode::Average,
            Some(RadiusArg::Max) => RadiusMode::Maximum,
            None => match file.radius.as_deref() {
                Some("avg") | None => RadiusMode::Average,
                Some("max") => RadiusMode::Maximum,
                Some(other) => {
                    return Err(GbrsError::Config(format!(
                        "unknown radius mode {other:?} (expected avg or max)"
                    )))
                }
            },
        };

        let folds = opts.folds.or(file.folds).unwrap_or(5);
        if folds < 2 {
            return Err(GbrsError::Config("folds must be at least 2".into()));
        }
        let knn_k = opts.knn_k.or(file.knn_k).unwrap_or(1);
        if knn_k == 0 {
            return Err(GbrsError::Config("knn_k must be at least 1".into()));
        }
        let delta = opts.delta.or(file.delta);
        if let Some(d) = delta {
            if !(d > 0.0) || d > 1.0 {
                return Err(GbrsError::Config("delta must be in (0, 1]".into()));
            }
        }
        let lbs = opts.lbs.or(file.lbs);
        if let Some(l) = lbs {
            if l < 2 {
                return Err(GbrsError::Config("lbs must be at least 2".into()));
            }
        }
        let stop_eps = opts.stop_eps.or(file.stop_eps).unwrap_or(0.0);
        if stop_eps < 0.0 {
            return Err(GbrsError::Config("stop_eps must be non-negative".into()));
        }

        Ok(Self {
            data,
            load: LoadOptions {
                has_header,
                label_column,
                declared_kinds: Default::default(),
            },
            method,
            delta,
            lbs,
            eval: EvalConfig {
                folds,
                knn_k,
                seed: opts.seed.or(file.seed).unwrap_or(0),
                stop_eps,
                reduction: ReductionProtocol::PerFold,
                radius_mode,
            },
            out: opts.out.clone().or(file.out),
            jobs: opts.jobs.or(file.jobs).unwrap_or(0),
        })
    }

    fn load_dataset(&self) -> Result<DecisionSystem> {
        Ok(DecisionSystem::load_csv(&self.data, &self.load)?.normalize())
    }

    fn dataset_name(&self) -> String {
        self.data
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.data.display().to_string())
    }

    /// The oracle for the configured method; gbnrs defaults lbs to 2d.
    fn oracle(&self, d: usize) -> Result<Oracle> {
        match self.method {
            Some(MethodArg::Prs) => Ok(Oracle::Prs),
            Some(MethodArg::Nrs) => {
                let delta = self
                    .delta
                    .ok_or_else(|| GbrsError::Config("nrs needs --delta".into()))?;
                Ok(Oracle::Nrs { delta })
            }
            Some(MethodArg::Gbnrs) => Ok(Oracle::Gbnrs {
                lbs: self.lbs.unwrap_or(2 * d),
                radius_mode: self.eval.radius_mode,
            }),
            Some(MethodArg::Gbprs) => Ok(Oracle::Gbprs),
            None => Err(GbrsError::Config("no method: pass --method".into())),
        }
    }

    fn eval_method(&self, d: usize) -> Result<Option<Method>> {
        Ok(match self.method {
            None => None,
            Some(MethodArg::Prs) => Some(Method::Prs),
            Some(MethodArg::Nrs) => Some(Method::Nrs {
                delta: self
                    .delta
                    .ok_or_else(|| GbrsError::Config("nrs needs --delta".into()))?,
            }),
            Some(MethodArg::Gbnrs) => Some(Method::Gbnrs {
                lbs: self.lbs.unwrap_or(2 * d),
            }),
            Some(MethodArg::Gbprs) => Some(Method::Gbprs),
        })
    }
}

fn parse_method(name: &str) -> Result<MethodArg> {
    match name {
        "prs" => Ok(MethodArg::Prs),
        "nrs" => Ok(MethodArg::Nrs),
        "gbnrs" => Ok(MethodArg::Gbnrs),
        "gbprs" => Ok(MethodArg::Gbprs),
        other => Err(GbrsError::Config(format!("unknown method {other:?}"))),
    }
}

/// Writes `contents` via a sibling temp file plus rename.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".to_string(),
    });
    let io_err = |source| GbrsError::Io {
        path: path.display().to_string(),
        source,
    };
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)?;
    Ok(())
}

fn configure_threads(jobs: usize) {
    if jobs > 0 {
        // fails harmlessly if a pool was already built in this process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}

pub fn run(args: CliArgs) -> Result<()> {
    match args.command {
        Command::Reduce(opts) => cmd_reduce(&RunConfig::resolve(&opts)?),
        Command::Evaluate(opts) => {
            let mut config = RunConfig::resolve(&opts.common)?;
            if opts.whole_dataset {
                config.eval.reduction = ReductionProtocol::WholeDataset;
            }
            cmd_evaluate(&config)
        }
        Command::Sweep(opts) => cmd_sweep(&RunConfig::resolve(&opts)?),
        Command::Tree(opts) => {
            let config = RunConfig::resolve(&opts.common)?;
            cmd_tree(&config, opts.reduct.as_deref(), opts.classify.as_deref())
        }
    }
}

pub fn cmd_reduce(config: &RunConfig) -> Result<()> {
    configure_threads(config.jobs);
    let ds = config.load_dataset()?;
    let oracle = config.oracle(ds.d())?;
    let reduct = forward_reduction(&ds, &oracle, config.eval.stop_eps);

    println!("selected attributes: {}", reduct.selected_names.join(", "));
    let trace: Vec<String> = reduct.gamma_trace.iter().map(|g| format!("{g:.6}")).collect();
    println!("gamma trace: [{}]", trace.join(", "));

    if let Some(out) = &config.out {
        atomic_write(out, &serde_json::to_string_pretty(&reduct)?)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

pub fn cmd_evaluate(config: &RunConfig) -> Result<()> {
    configure_threads(config.jobs);
    let ds = config.load_dataset()?;
    let name = config.dataset_name();

    let table = match config.eval_method(ds.d())? {
        Some(method) => {
            let report = evaluate_method(&ds, &name, method, &config.eval);
            crate::eval::ComparisonTable {
                dataset: name,
                reports: vec![report],
                winner: 0,
                warnings: Vec::new(),
            }
        }
        None => {
            let methods = [
                Method::Original,
                Method::Prs,
                Method::Gbnrs {
                    lbs: config.lbs.unwrap_or(2 * ds.d()),
                },
            ];
            compare(&ds, &name, &methods, &config.eval)
        }
    };

    print!("{}", table.to_text());
    if let Some(out) = &config.out {
        atomic_write(out, &serde_json::to_string_pretty(&table)?)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

pub fn cmd_sweep(config: &RunConfig) -> Result<()> {
    configure_threads(config.jobs);
    let ds = config.load_dataset()?;
    let name = config.dataset_name();

    let sweep = match config.method {
        Some(MethodArg::Gbnrs) => lbs_sweep(&ds, &name, &config.eval),
        Some(MethodArg::Nrs) => delta_sweep(&ds, &name, &config.eval),
        Some(_) => {
            return Err(GbrsError::Config(
                "sweep supports --method gbnrs (lbs) or nrs (delta)".into(),
            ))
        }
        None => return Err(GbrsError::Config("no method: pass --method".into())),
    };

    let best = sweep.best();
    println!(
        "best {} = {} ({})",
        sweep.parameter_name,
        best.parameter,
        best.report.summary_cell()
    );

    if let Some(out) = &config.out {
        atomic_write(out, &sweep.to_csv())?;
        let best_path = derived_path(out, "_best", "json");
        atomic_write(&best_path, &serde_json::to_string_pretty(best)?)?;
        println!("wrote {} and {}", out.display(), best_path.display());
    }
    Ok(())
}

pub fn cmd_tree(
    config: &RunConfig,
    reduct_path: Option<&Path>,
    classify_path: Option<&Path>,
) -> Result<()> {
    configure_threads(config.jobs);
    let ds = config.load_dataset()?;

    let reduct: Reduct = match reduct_path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| GbrsError::Io {
                path: path.display().to_string(),
                source,
            })?;
            serde_json::from_str(&text)?
        }
        None => forward_reduction(&ds, &config.oracle(ds.d())?, config.eval.stop_eps),
    };

    let ball_gen = match config.method {
        Some(MethodArg::Gbprs) | Some(MethodArg::Prs) => BallGen::Degenerate,
        _ => BallGen::Gbnrs {
            lbs: config.lbs.unwrap_or(2 * ds.d()),
            radius_mode: config.eval.radius_mode,
        },
    };
    let tree = build_tree(&ds, &reduct, ball_gen);
    println!(
        "tree over [{}]: depth {}",
        reduct.selected_names.join(", "),
        tree.depth()
    );

    if let Some(path) = classify_path {
        classify_rows(config, &ds, &tree, path)?;
    }

    if let Some(out) = &config.out {
        let dot_path = derived_path(out, "", "dot");
        let json_path = derived_path(out, "", "json");
        atomic_write(&dot_path, &tree.export_dot())?;
        atomic_write(&json_path, &tree.export_json()?)?;
        println!("wrote {} and {}", dot_path.display(), json_path.display());
    }
    Ok(())
}

fn classify_rows(
    config: &RunConfig,
    train: &DecisionSystem,
    tree: &Gbrct,
    path: &Path,
) -> Result<()> {
    let queries = DecisionSystem::load_csv(path, &config.load)?;
    for i in 0..queries.n() {
        let row = train.normalize_raw_row(queries.raw_row(i));
        let result = tree.classify(&row);
        let label = &tree.label_names[result.label];
        let confidence = if result.confident { "" } else { " (low confidence)" };
        println!("row {i}: {label}{confidence}");
    }
    Ok(())
}

fn derived_path(base: &Path, suffix: &str, extension: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    base.with_file_name(format!("{stem}{suffix}.{extension}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_csv(dir: &Path, name: &str, text: &str) -> PathBuf {
        let path = dir.join(name);
        let mut file = fs::File::create(&path).unwrap();
        file.write_all(text.as_bytes()).unwrap();
        path
    }

    fn toy_csv(dir: &Path) -> PathBuf {
        write_csv(
            dir,
            "toy.csv",
            "a,b,class\n0.1,0.9,x\n0.2,0.8,x\n0.9,0.1,y\n0.8,0.2,y\n\
             0.15,0.85,x\n0.85,0.15,y\n0.12,0.88,x\n0.88,0.12,y\n\
             0.18,0.82,x\n0.82,0.18,y\n",
        )
    }

    fn common(data: PathBuf) -> CommonOpts {
        CommonOpts {
            data: Some(data),
            label_col: None,
            no_header: false,
            config: None,
            method: Some(MethodArg::Gbnrs),
            delta: None,
            lbs: Some(2),
            folds: None,
            knn_k: None,
            seed: None,
            stop_eps: None,
            radius: None,
            out: None,
            jobs: None,
        }
    }

    #[test]
    fn config_precedence_flag_beats_file() {
        let dir = tempfile::tempdir().unwrap();
        let data = toy_csv(dir.path());
        let config_path = dir.path().join("config.json");
        fs::write(&config_path, r#"{"folds": 3, "seed": 42}"#).unwrap();
        let mut opts = common(data);
        opts.config = Some(config_path);
        opts.folds = Some(4);
        let resolved = RunConfig::resolve(&opts).unwrap();
        assert_eq!(resolved.eval.folds, 4); // flag wins
        assert_eq!(resolved.eval.seed, 42); // file beats default
    }

    #[test]
    fn folds_below_two_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut opts = common(toy_csv(dir.path()));
        opts.folds = Some(1);
        assert!(matches!(
            RunConfig::resolve(&opts),
            Err(GbrsError::Config(_))
        ));
    }

    #[test]
    fn reduce_writes_reduct_json() {
        let dir = tempfile::tempdir().unwrap();
        let mut opts = common(toy_csv(dir.path()));
        let out = dir.path().join("reduct.json");
        opts.out = Some(out.clone());
        cmd_reduce(&RunConfig::resolve(&opts).unwrap()).unwrap();
        let reduct: Reduct = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert!(!reduct.selected.is_empty());
        for pair in reduct.gamma_trace.windows(2) {
            assert!(pair[1] > pair[0]);
        }
    }

    #[test]
    fn evaluate_repeats_byte_identically() {
        let dir = tempfile::tempdir().unwrap();
        let mut opts = common(toy_csv(dir.path()));
        let out = dir.path().join("report.json");
        opts.out = Some(out.clone());
        let config = RunConfig::resolve(&opts).unwrap();
        cmd_evaluate(&config).unwrap();
        let first = fs::read(&out).unwrap();
        cmd_evaluate(&config).unwrap();
        assert_eq!(first, fs::read(&out).unwrap());
    }

    #[test]
    fn missing_dataset_names_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let mut opts = common(dir.path().join("absent.csv"));
        opts.out = None;
        let err = cmd_reduce(&RunConfig::resolve(&opts).unwrap()).unwrap_err();
        assert!(err.to_string().contains("absent.csv"));
    }

    #[test]
    fn tree_roundtrip_reproduces_identical_tree() {
        let dir = tempfile::tempdir().unwrap();
        let data = toy_csv(dir.path());
        let mut opts = common(data);
        let reduct_out = dir.path().join("reduct.json");
        opts.out = Some(reduct_out.clone());
        cmd_reduce(&RunConfig::resolve(&opts).unwrap()).unwrap();

        let mut tree_opts = common(toy_csv(dir.path()));
        let out = dir.path().join("tree");
        tree_opts.out = Some(out.clone());
        let config = RunConfig::resolve(&tree_opts).unwrap();
        cmd_tree(&config, None, None).unwrap();
        let direct = fs::read(dir.path().join("tree.json")).unwrap();
        cmd_tree(&config, Some(&reduct_out), None).unwrap();
        assert_eq!(direct, fs::read(dir.path().join("tree.json")).unwrap());
    }

    #[test]
    fn sweep_outputs_csv_and_best_summary() {
        let dir = tempfile::tempdir().unwrap();
        let mut opts = common(toy_csv(dir.path()));
        let out = dir.path().join("sweep.csv");
        opts.out = Some(out.clone());
        cmd_sweep(&RunConfig::resolve(&opts).unwrap()).unwrap();
        let csv = fs::read_to_string(&out).unwrap();
        assert_eq!(csv.lines().count(), 1 + 3); // header + lbs in {4, 3, 2}
        assert!(dir.path().join("sweep_best.json").exists());
    }
}
