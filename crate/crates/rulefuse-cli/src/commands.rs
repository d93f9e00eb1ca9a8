//! Command implementations behind the CLI surface; each takes a plain
//! argument struct so tests can drive them directly.

use std::path::{Path, PathBuf};

use serde::Serialize;

use rulefuse::bootstrap::{induce_rule_set, uniform_partitions};
use rulefuse::evolution::{run_baseline_ga, run_integration_with};
use rulefuse::inference::classification_counts;
use rulefuse::ingest::{self, DatasetFormat, ImputePolicy, LoadOptions};
use rulefuse::{EvolutionConfig, GaConfig, GenerationStats, KnowledgeBase, LabeledDataset};

use crate::error::{CliError, Result};
use crate::manifest::{Manifest, SourceEntry};
use crate::util::{csv_line, tmp_path, write_atomic};

pub const RUN_CSV_HEADER: &str =
    "generation,best_fitness,best_accuracy,best_complexity,best_rule_count,mean_fitness";
pub const MF_PLOT_HEADER: &str = "feature,linguistic,left,apex,right";
pub const COMPARISON_HEADER: &str =
    "seed,method,final_accuracy,final_fitness,generations_to_reach_target";

#[derive(Debug, Clone)]
pub struct BootstrapArgs {
    pub data: PathBuf,
    pub format: DatasetFormat,
    pub sources: usize,
    pub linguistic: usize,
    pub seed: u64,
    pub margin: f64,
    pub impute: ImputePolicy,
    pub out: PathBuf,
}

/// Loads the dataset, splits it into `sources` stratified shares, induces
/// one knowledge base per share over shared uniform partitions, and writes
/// the source files plus `manifest.json`.
pub fn cmd_bootstrap(args: &BootstrapArgs) -> Result<Manifest> {
    if args.sources < 1 {
        return Err(CliError::Usage("sources must be >= 1".into()));
    }
    if args.linguistic < 1 {
        return Err(CliError::Usage("linguistic must be >= 1".into()));
    }
    let load_options = LoadOptions {
        num_linguistic: args.linguistic,
        bounds_margin: args.margin,
        ..Default::default()
    };
    let data = ingest::load_dataset(args.format, &args.data, &load_options)?;
    let data = ingest::impute_policy(&data, args.impute);
    let shares = ingest::split_sources(&data, args.sources, args.seed)?;
    let partitions = uniform_partitions(&data.schema.features)?;

    std::fs::create_dir_all(&args.out)?;
    let mut sources = Vec::with_capacity(shares.len());
    for (i, share) in shares.iter().enumerate() {
        let kb = induce_rule_set(share, &partitions)?;
        let file = PathBuf::from(format!("source_{i}.json"));
        write_atomic(&args.out.join(&file), &kb.to_json())?;
        sources.push(SourceEntry {
            path: file,
            rules: kb.rules.len(),
        });
    }

    let bounds = data.schema.features.iter().map(|f| f.range()).collect();
    let manifest = Manifest {
        data_path: args.data.clone(),
        format: args.format,
        load_options,
        impute: args.impute,
        seed: args.seed,
        features: data.schema.features.clone(),
        classes: data.schema.classes.clone(),
        bounds,
        sources,
    };
    manifest.save(&args.out.join("manifest.json"))?;
    Ok(manifest)
}

#[derive(Debug, Clone, Default)]
pub struct IntegrateArgs {
    pub manifest: PathBuf,
    pub out: PathBuf,
    /// Optional JSON config file; flag overrides are applied on top.
    pub config: Option<PathBuf>,
    /// Overrides the manifest's data path.
    pub data: Option<PathBuf>,
    pub overrides: CfgOverrides,
}

/// Field-by-field overrides layered over the config file and defaults.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct CfgOverrides {
    #[arg(long)]
    pub mu: Option<usize>,
    #[arg(long)]
    pub subpops: Option<usize>,
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub p_mf_mutation: Option<f64>,
    #[arg(long)]
    pub tvm_degree: Option<f64>,
    #[arg(long)]
    pub p_insert: Option<f64>,
    #[arg(long)]
    pub p_delete: Option<f64>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub max_rules: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl CfgOverrides {
    pub fn apply(&self, cfg: &mut EvolutionConfig) {
        if let Some(v) = self.mu {
            cfg.mu = v;
        }
        if let Some(v) = self.subpops {
            cfg.subpops = v;
        }
        if let Some(v) = self.generations {
            cfg.generations = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.p_mf_mutation {
            cfg.p_mf_mutation = v;
        }
        if let Some(v) = self.tvm_degree {
            cfg.tvm_degree = v;
        }
        if let Some(v) = self.p_insert {
            cfg.p_insert = v;
        }
        if let Some(v) = self.p_delete {
            cfg.p_delete = v;
        }
        if let Some(v) = self.lambda_min {
            cfg.lambda_range.0 = v;
        }
        if let Some(v) = self.lambda_max {
            cfg.lambda_range.1 = v;
        }
        if let Some(v) = self.max_rules {
            cfg.max_rules = Some(v);
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
    }
}

pub struct IntegrateOutcome {
    pub best_kb: KnowledgeBase,
    pub history: Vec<GenerationStats>,
    pub run_csv: PathBuf,
    pub best_kb_path: PathBuf,
    pub mf_plot_path: PathBuf,
}

/// Builds the effective config: defaults, then the JSON file, then flags.
pub fn resolve_config(path: Option<&Path>, overrides: &CfgOverrides) -> Result<EvolutionConfig> {
    let mut cfg = match path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Data(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))?
        }
        None => EvolutionConfig::default(),
    };
    overrides.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

/// Loads everything a run needs from a manifest: the source knowledge bases
/// and the (imputed) evaluation dataset.
pub fn load_run_inputs(
    manifest_path: &Path,
    data_override: Option<&Path>,
) -> Result<(Manifest, Vec<KnowledgeBase>, LabeledDataset)> {
    let manifest = Manifest::load(manifest_path)?;
    let mut sources = Vec::with_capacity(manifest.sources.len());
    for path in manifest.source_paths(manifest_path) {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Data(format!("cannot read source {}: {e}", path.display())))?;
        sources.push(KnowledgeBase::from_json(&text)?);
    }
    let data_path = data_override.unwrap_or(&manifest.data_path);
    let data = ingest::load_dataset(manifest.format, data_path, &manifest.load_options)?;
    let data = ingest::impute_policy(&data, manifest.impute);
    Ok((manifest, sources, data))
}

/// Runs the integration and writes `run.csv` (streamed per generation),
/// `best_kb.json`, `mf_plot.csv`, and `run_meta.json`.
pub fn cmd_integrate(args: &IntegrateArgs) -> Result<IntegrateOutcome> {
    let cfg = resolve_config(args.config.as_deref(), &args.overrides)?;
    let (manifest, sources, data) = load_run_inputs(&args.manifest, args.data.as_deref())?;
    std::fs::create_dir_all(&args.out)?;

    let run_csv = args.out.join("run.csv");
    let tmp = tmp_path(&run_csv);
    let mut csv = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
    {
        use std::io::Write;
        writeln!(csv, "{RUN_CSV_HEADER}").map_err(CliError::from)?;
    }
    let mut write_err: Option<std::io::Error> = None;
    let (best_kb, history) = run_integration_with(&sources, &data, &cfg, |stats| {
        use std::io::Write;
        if write_err.is_none() {
            if let Err(e) = write!(csv, "{}", stats_line(stats)) {
                write_err = Some(e);
            }
        }
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    {
        use std::io::Write;
        csv.flush().map_err(CliError::from)?;
    }
    drop(csv);
    std::fs::rename(&tmp, &run_csv)?;

    let best_kb_path = args.out.join("best_kb.json");
    write_atomic(&best_kb_path, &best_kb.to_json())?;

    let mf_plot_path = args.out.join("mf_plot.csv");
    write_atomic(&mf_plot_path, &mf_plot_csv(&best_kb))?;

    let source_counts: Vec<usize> = sources.iter().map(|kb| kb.rules.len()).collect();
    let meta = RunMeta {
        config: cfg.clone(),
        effective_max_rules: cfg.effective_max_rules(&source_counts),
        source_rule_counts: source_counts,
        data_path: args.data.clone().unwrap_or(manifest.data_path),
        format: manifest.format,
    };
    write_atomic(
        &args.out.join("run_meta.json"),
        &serde_json::to_string_pretty(&meta)?,
    )?;

    Ok(IntegrateOutcome {
        best_kb,
        history,
        run_csv,
        best_kb_path,
        mf_plot_path,
    })
}

#[derive(Serialize)]
struct RunMeta {
    config: EvolutionConfig,
    effective_max_rules: usize,
    source_rule_counts: Vec<usize>,
    data_path: PathBuf,
    format: DatasetFormat,
}

fn stats_line(stats: &GenerationStats) -> String {
    csv_line(&[
        stats.generation.to_string(),
        stats.best_fitness.to_string(),
        stats.best_accuracy.to_string(),
        stats.best_complexity.to_string(),
        stats.best_rule_count.to_string(),
        stats.mean_fitness.to_string(),
    ])
}

/// Triangle geometry of each membership function of the best knowledge
/// base: support endpoints and apex abscissa per linguistic value.
fn mf_plot_csv(kb: &KnowledgeBase) -> String {
    let mut out = String::from(MF_PLOT_HEADER);
    out.push('\n');
    for (slot, &feat_idx) in kb.schema.numeric_positions().iter().enumerate() {
        let name = &kb.schema.features[feat_idx].name;
        for (j, mf) in kb.partitions[slot].mfs.iter().enumerate() {
            out.push_str(&csv_line(&[
                name.clone(),
                j.to_string(),
                (mf.center - mf.half_width).to_string(),
                mf.center.to_string(),
                (mf.center + mf.half_width).to_string(),
            ]));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct EvaluateArgs {
    pub kb: PathBuf,
    pub data: PathBuf,
    pub format: DatasetFormat,
    pub impute: ImputePolicy,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub matched: usize,
    pub total: usize,
}

/// Scores a stored knowledge base against a dataset.
pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<EvalReport> {
    let text = std::fs::read_to_string(&args.kb)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.kb.display())))?;
    let kb = KnowledgeBase::from_json(&text)?;
    let data = ingest::load_dataset(args.format, &args.data, &LoadOptions::default())?;
    let data = ingest::impute_policy(&data, args.impute);
    let (matched, total) = classification_counts(&kb, &data)?;
    Ok(EvalReport {
        accuracy: matched as f64 / total as f64,
        matched,
        total,
    })
}

#[derive(Debug, Clone, Default)]
pub struct CompareArgs {
    pub manifest: PathBuf,
    pub out: PathBuf,
    pub seeds: Vec<u64>,
    /// Fitness level for generations-to-target; defaults to the baseline
    /// GA's median final fitness over the seeds.
    pub target: Option<f64>,
    pub config: Option<PathBuf>,
    pub overrides: CfgOverrides,
    pub ga: GaConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub seed: u64,
    pub method: &'static str,
    pub final_accuracy: f64,
    pub final_fitness: f64,
    /// First generation whose best fitness reaches the target;
    /// `generations + 1` when never reached.
    pub generations_to_reach_target: usize,
}

/// Runs the evolution strategy and the baseline GA on the same sources,
/// data, seeds, and budget, and writes `comparison.csv`.
pub fn cmd_compare(args: &CompareArgs) -> Result<Vec<CompareRow>> {
    if args.seeds.is_empty() {
        return Err(CliError::Usage("at least one seed is required".into()));
    }
    let base_cfg = resolve_config(args.config.as_deref(), &args.overrides)?;
    let (_, sources, data) = load_run_inputs(&args.manifest, None)?;
    std::fs::create_dir_all(&args.out)?;

    let mut es_histories = Vec::with_capacity(args.seeds.len());
    let mut ga_histories = Vec::with_capacity(args.seeds.len());
    for &seed in &args.seeds {
        let cfg = EvolutionConfig {
            seed,
            ..base_cfg.clone()
        };
        let (_, es_hist) = rulefuse::evolution::run_integration(&sources, &data, &cfg)?;
        let (_, ga_hist) = run_baseline_ga(&sources, &data, &cfg, &args.ga)?;
        es_histories.push(es_hist);
        ga_histories.push(ga_hist);
    }

    let target = args
        .target
        .unwrap_or_else(|| median(ga_histories.iter().map(|h| h.last().unwrap().best_fitness)));

    let mut rows = Vec::with_capacity(2 * args.seeds.len());
    for (i, &seed) in args.seeds.iter().enumerate() {
        rows.push(compare_row(seed, "es", &es_histories[i], target));
        rows.push(compare_row(seed, "ga", &ga_histories[i], target));
    }

    let mut csv = String::from(COMPARISON_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(&csv_line(&[
            row.seed.to_string(),
            row.method.to_string(),
            row.final_accuracy.to_string(),
            row.final_fitness.to_string(),
            row.generations_to_reach_target.to_string(),
        ]));
    }
    write_atomic(&args.out.join("comparison.csv"), &csv)?;
    Ok(rows)
}

fn compare_row(
    seed: u64,
    method: &'static str,
    history: &[GenerationStats],
    target: f64,
) -> CompareRow {
    let last = history.last().unwrap();
    let reached = history
        .iter()
        .find(|stats| stats.best_fitness >= target)
        .map(|stats| stats.generation)
        .unwrap_or(history.len() + 1);
    CompareRow {
        seed,
        method,
        final_accuracy: last.best_accuracy,
        final_fitness: last.best_fitness,
        generations_to_reach_target: reached,
    }
}

/// Median of an odd or even sample: middle element, or the lower of the two
/// middles (order statistics only, no interpolation).
pub fn median(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v[(v.len() - 1) / 2]
}
