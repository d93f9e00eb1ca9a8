//! Synthetic benchmark data: one Gaussian cluster per class on the diagonal
//! of feature space, written as a generic CSV plus its schema sidecar.

use std::path::PathBuf;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use rulefuse::ingest::{GenericFeature, GenericSchema};

use crate::error::{CliError, Result};
use crate::util::{csv_line, write_atomic};

#[derive(Debug, Clone)]
pub struct SynthArgs {
    pub rows: usize,
    pub features: usize,
    pub classes: usize,
    pub seed: u64,
    /// Distance between adjacent class centers, in noise standard
    /// deviations.
    pub separation: f64,
    pub out: PathBuf,
    pub name: String,
}

pub struct SynthOutcome {
    pub csv_path: PathBuf,
    pub schema_path: PathBuf,
}

/// Generates `rows` instances (classes assigned round-robin), each a unit
/// Gaussian sample around its class center `(c*sep, ..., c*sep)`.
/// Deterministic per seed.
pub fn synth_dataset(args: &SynthArgs) -> Result<SynthOutcome> {
    if args.classes < 2 {
        return Err(CliError::Usage("classes must be >= 2".into()));
    }
    if args.rows < args.classes {
        return Err(CliError::Usage("rows must be >= classes".into()));
    }
    if args.features < 1 {
        return Err(CliError::Usage("features must be >= 1".into()));
    }
    std::fs::create_dir_all(&args.out)?;

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut csv = String::new();
    for row in 0..args.rows {
        let class = row % args.classes;
        let center = class as f64 * args.separation;
        let mut fields: Vec<String> = (0..args.features)
            .map(|_| {
                let noise: f64 = rng.sample(StandardNormal);
                format!("{}", center + noise)
            })
            .collect();
        fields.push(format!("c{class}"));
        csv.push_str(&csv_line(&fields));
    }

    let schema = GenericSchema {
        features: (0..args.features)
            .map(|i| GenericFeature {
                name: format!("f{i}"),
                kind: "numeric".into(),
                categories: None,
            })
            .collect(),
        class_column: args.features,
        classes: Some((0..args.classes).map(|c| format!("c{c}")).collect()),
    };

    let csv_path = args.out.join(format!("{}.csv", args.name));
    let schema_path = args.out.join(format!("{}.schema.json", args.name));
    write_atomic(&csv_path, &csv)?;
    write_atomic(&schema_path, &serde_json::to_string_pretty(&schema)?)?;
    Ok(SynthOutcome {
        csv_path,
        schema_path,
    })
}
