//! Dataset loading and preparation: UCI-style comma-separated files with
//! `?` as the missing marker, derived feature bounds, missing-value
//! policies, and stratified splitting into virtual sources.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{FeatureValue, Instance, LabeledDataset};
use crate::error::{Error, Result};
use crate::kb::{FeatureKind, FeatureSpec, Schema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetFormat {
    Hepatitis,
    Iris,
    TicTacToe,
    GenericCsv,
}

impl FromStr for DatasetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hepatitis" => Ok(DatasetFormat::Hepatitis),
            "iris" => Ok(DatasetFormat::Iris),
            "tictactoe" => Ok(DatasetFormat::TicTacToe),
            "generic" => Ok(DatasetFormat::GenericCsv),
            other => Err(Error::InvalidValue(format!(
                "unknown format `{other}` (expected hepatitis, iris, tictactoe, or generic)"
            ))),
        }
    }
}

impl std::fmt::Display for DatasetFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DatasetFormat::Hepatitis => "hepatitis",
            DatasetFormat::Iris => "iris",
            DatasetFormat::TicTacToe => "tictactoe",
            DatasetFormat::GenericCsv => "generic",
        })
    }
}

/// The six numeric attributes of the hepatitis file, as
/// `(name, 0-based column)`; the class sits in column 0.
pub const HEPATITIS_NUMERIC_COLUMNS: [(&str, usize); 6] = [
    ("Age", 1),
    ("Bilirubin", 14),
    ("Alk Phosphate", 15),
    ("SGOT", 16),
    ("Albumin", 17),
    ("Protime", 18),
];

/// The default five-feature hepatitis subset.
pub const HEPATITIS_DEFAULT_FEATURES: [&str; 5] =
    ["Bilirubin", "Alk Phosphate", "SGOT", "Albumin", "Protime"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoadOptions {
    /// Linguistic values per numeric feature.
    pub num_linguistic: usize,
    /// Padding applied to derived feature bounds, as a fraction of the
    /// observed range.
    pub bounds_margin: f64,
    /// Hepatitis feature subset, drawn from the six numeric attributes.
    pub hepatitis_features: Option<Vec<String>>,
    /// Sidecar schema path for generic CSV; defaults to the data path with
    /// a `.schema.json` extension.
    pub schema_path: Option<PathBuf>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            num_linguistic: 3,
            bounds_margin: 0.0,
            hepatitis_features: None,
            schema_path: None,
        }
    }
}

/// Sidecar schema for generic CSV files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenericSchema {
    pub features: Vec<GenericFeature>,
    /// 0-based column holding the class label.
    pub class_column: usize,
    /// Class label order; discovered first-seen when omitted.
    #[serde(default)]
    pub classes: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenericFeature {
    pub name: String,
    pub kind: String,
    /// Category order for categorical features; discovered first-seen when
    /// omitted.
    #[serde(default)]
    pub categories: Option<Vec<String>>,
}

/// Parses a dataset file, deriving numeric feature bounds from the observed
/// values (padded by `options.bounds_margin`).
pub fn load_dataset(
    format: DatasetFormat,
    path: &Path,
    options: &LoadOptions,
) -> Result<LabeledDataset> {
    let text = std::fs::read_to_string(path)?;
    match format {
        DatasetFormat::Hepatitis => parse_hepatitis(&text, options),
        DatasetFormat::Iris => parse_iris(&text, options),
        DatasetFormat::TicTacToe => parse_tictactoe(&text),
        DatasetFormat::GenericCsv => {
            let schema_path = options
                .schema_path
                .clone()
                .unwrap_or_else(|| path.with_extension("schema.json"));
            let sidecar: GenericSchema =
                serde_json::from_str(&std::fs::read_to_string(&schema_path)?)?;
            parse_generic(&text, &sidecar, options)
        }
    }
}

/// Derived `(lower, upper)` per feature (`None` for categorical):
/// the observed extrema padded by `margin * range`; a degenerate range is
/// widened by `±max(1, |value|) * max(margin, 0.05)`.
pub fn feature_bounds(data: &LabeledDataset, margin: f64) -> Result<Vec<Option<(f64, f64)>>> {
    data.schema
        .features
        .iter()
        .enumerate()
        .map(|(idx, feature)| {
            if !feature.is_numeric() {
                return Ok(None);
            }
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for (inst, _) in &data.rows {
                if let Some(FeatureValue::Numeric(v)) = inst.values[idx] {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            if lo > hi {
                return Err(Error::InvalidValue(format!(
                    "feature `{}` has no observed values",
                    feature.name
                )));
            }
            Ok(Some(pad_bounds(lo, hi, margin)))
        })
        .collect()
}

fn pad_bounds(min: f64, max: f64, margin: f64) -> (f64, f64) {
    if min == max {
        let m = margin.max(0.05);
        let pad = min.abs().max(1.0) * m;
        (min - pad, max + pad)
    } else {
        let range = max - min;
        (min - margin * range, max + margin * range)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImputePolicy {
    KeepMissing,
    MeanImpute,
}

impl FromStr for ImputePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "keep" | "keep_missing" => Ok(ImputePolicy::KeepMissing),
            "mean" | "mean_impute" => Ok(ImputePolicy::MeanImpute),
            other => Err(Error::InvalidValue(format!(
                "unknown impute policy `{other}`"
            ))),
        }
    }
}

/// Applies a missing-value policy: `KeepMissing` is the identity,
/// `MeanImpute` fills numeric gaps with the feature mean and categorical
/// gaps with the modal category (lowest index on ties).
pub fn impute_policy(data: &LabeledDataset, policy: ImputePolicy) -> LabeledDataset {
    if policy == ImputePolicy::KeepMissing {
        return data.clone();
    }
    let n_features = data.schema.features.len();
    let mut fill: Vec<Option<FeatureValue>> = vec![None; n_features];
    for (idx, feature) in data.schema.features.iter().enumerate() {
        match &feature.kind {
            FeatureKind::Numeric { .. } => {
                let mut sum = 0.0;
                let mut count = 0usize;
                for (inst, _) in &data.rows {
                    if let Some(FeatureValue::Numeric(v)) = inst.values[idx] {
                        sum += v;
                        count += 1;
                    }
                }
                if count > 0 {
                    fill[idx] = Some(FeatureValue::Numeric(sum / count as f64));
                }
            }
            FeatureKind::Categorical { categories } => {
                let mut counts = vec![0usize; categories.len()];
                for (inst, _) in &data.rows {
                    if let Some(FeatureValue::Category(k)) = inst.values[idx] {
                        counts[k] += 1;
                    }
                }
                if let Some(max) = counts.iter().max().copied() {
                    if max > 0 {
                        let modal = counts.iter().position(|&c| c == max).unwrap();
                        fill[idx] = Some(FeatureValue::Category(modal));
                    }
                }
            }
        }
    }
    let rows = data
        .rows
        .iter()
        .map(|(inst, class)| {
            let values = inst
                .values
                .iter()
                .enumerate()
                .map(|(idx, v)| v.or(fill[idx]))
                .collect();
            (Instance::new(values), *class)
        })
        .collect();
    LabeledDataset {
        schema: data.schema.clone(),
        rows,
    }
}

/// Shuffles the rows by `seed` and deals them class-stratified round-robin
/// into `P` disjoint, exhaustive partitions sharing the input schema.
pub fn split_sources(data: &LabeledDataset, p: usize, seed: u64) -> Result<Vec<LabeledDataset>> {
    if p < 1 {
        return Err(Error::InvalidValue("source count must be >= 1".into()));
    }
    if data.rows.len() < p {
        return Err(Error::InvalidValue(format!(
            "cannot split {} rows into {p} sources",
            data.rows.len()
        )));
    }
    let mut order: Vec<usize> = (0..data.rows.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let mut partitions: Vec<Vec<(Instance, usize)>> = vec![Vec::new(); p];
    let mut dealt = 0usize;
    for class in 0..data.schema.classes.len() {
        for &row_idx in order.iter().filter(|&&i| data.rows[i].1 == class) {
            partitions[dealt % p].push(data.rows[row_idx].clone());
            dealt += 1;
        }
    }
    Ok(partitions
        .into_iter()
        .map(|rows| LabeledDataset {
            schema: data.schema.clone(),
            rows,
        })
        .collect())
}

// --- format parsers ---

struct RawLine<'a> {
    number: usize,
    fields: Vec<&'a str>,
}

fn split_lines(text: &str) -> impl Iterator<Item = RawLine<'_>> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r').trim();
        if line.is_empty() {
            return None;
        }
        Some(RawLine {
            number: i + 1,
            fields: line.split(',').map(str::trim).collect(),
        })
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn expect_fields(line: &RawLine<'_>, want: usize) -> Result<()> {
    if line.fields.len() != want {
        return Err(parse_err(
            line.number,
            format!("expected {want} fields, found {}", line.fields.len()),
        ));
    }
    Ok(())
}

fn numeric_field(line: &RawLine<'_>, idx: usize) -> Result<Option<f64>> {
    let field = line.fields[idx];
    if field == "?" {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|_| parse_err(line.number, format!("bad numeric value `{field}`")))
}

/// Builds the final dataset once raw rows are known: derives padded bounds
/// per numeric feature and attaches them to the schema.
fn finish_numeric_schema(
    names: &[String],
    num_linguistic: usize,
    margin: f64,
    classes: Vec<String>,
    rows: Vec<(Instance, usize)>,
) -> Result<LabeledDataset> {
    let mut features = Vec::with_capacity(names.len());
    for (idx, name) in names.iter().enumerate() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (inst, _) in &rows {
            if let Some(FeatureValue::Numeric(v)) = inst.values[idx] {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if lo > hi {
            return Err(Error::InvalidValue(format!(
                "feature `{name}` has no observed values"
            )));
        }
        let (lower, upper) = pad_bounds(lo, hi, margin);
        features.push(FeatureSpec::numeric(
            name.clone(),
            lower,
            upper,
            num_linguistic,
        )?);
    }
    LabeledDataset::new(Schema::new(features, classes)?, rows)
}

fn parse_hepatitis(text: &str, options: &LoadOptions) -> Result<LabeledDataset> {
    let default_names: Vec<String> = HEPATITIS_DEFAULT_FEATURES
        .iter()
        .map(|s| s.to_string())
        .collect();
    let names = options
        .hepatitis_features
        .as_ref()
        .unwrap_or(&default_names);
    let columns: Vec<usize> = names
        .iter()
        .map(|name| {
            HEPATITIS_NUMERIC_COLUMNS
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, col)| *col)
                .ok_or_else(|| Error::InvalidValue(format!("unknown hepatitis feature `{name}`")))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for line in split_lines(text) {
        expect_fields(&line, 20)?;
        let class = match line.fields[0] {
            "1" => 0, // Die
            "2" => 1, // Live
            other => {
                return Err(parse_err(
                    line.number,
                    format!("unknown class label `{other}`"),
                ))
            }
        };
        let values = columns
            .iter()
            .map(|&col| Ok(numeric_field(&line, col)?.map(FeatureValue::Numeric)))
            .collect::<Result<_>>()?;
        rows.push((Instance::new(values), class));
    }
    finish_numeric_schema(
        names,
        options.num_linguistic,
        options.bounds_margin,
        vec!["Die".into(), "Live".into()],
        rows,
    )
}

fn parse_iris(text: &str, options: &LoadOptions) -> Result<LabeledDataset> {
    let names: Vec<String> = ["sepal_length", "sepal_width", "petal_length", "petal_width"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let classes = ["Iris-setosa", "Iris-versicolor", "Iris-virginica"];
    let mut rows = Vec::new();
    for line in split_lines(text) {
        expect_fields(&line, 5)?;
        let class = classes
            .iter()
            .position(|c| *c == line.fields[4])
            .ok_or_else(|| {
                parse_err(
                    line.number,
                    format!("unknown class label `{}`", line.fields[4]),
                )
            })?;
        let values = (0..4)
            .map(|idx| Ok(numeric_field(&line, idx)?.map(FeatureValue::Numeric)))
            .collect::<Result<_>>()?;
        rows.push((Instance::new(values), class));
    }
    finish_numeric_schema(
        &names,
        options.num_linguistic,
        options.bounds_margin,
        classes.iter().map(|s| s.to_string()).collect(),
        rows,
    )
}

fn parse_tictactoe(text: &str) -> Result<LabeledDataset> {
    let squares = [
        "top-left",
        "top-middle",
        "top-right",
        "middle-left",
        "middle-middle",
        "middle-right",
        "bottom-left",
        "bottom-middle",
        "bottom-right",
    ];
    let categories = ["x", "o", "b"];
    let features = squares
        .iter()
        .map(|name| {
            FeatureSpec::categorical(*name, categories.iter().map(|s| s.to_string()).collect())
        })
        .collect::<Result<_>>()?;
    let schema = Schema::new(features, vec!["positive".into(), "negative".into()])?;

    let mut rows = Vec::new();
    for line in split_lines(text) {
        expect_fields(&line, 10)?;
        let class = match line.fields[9] {
            "positive" => 0,
            "negative" => 1,
            other => {
                return Err(parse_err(
                    line.number,
                    format!("unknown class label `{other}`"),
                ))
            }
        };
        let values = (0..9)
            .map(|idx| {
                let field = line.fields[idx];
                if field == "?" {
                    return Ok(None);
                }
                categories
                    .iter()
                    .position(|c| *c == field)
                    .map(|k| Some(FeatureValue::Category(k)))
                    .ok_or_else(|| parse_err(line.number, format!("bad square value `{field}`")))
            })
            .collect::<Result<_>>()?;
        rows.push((Instance::new(values), class));
    }
    LabeledDataset::new(schema, rows)
}

fn parse_generic(
    text: &str,
    sidecar: &GenericSchema,
    options: &LoadOptions,
) -> Result<LabeledDataset> {
    let n_features = sidecar.features.len();
    let n_fields = n_features + 1;
    // feature column positions: all columns except the class column, in order
    let feature_columns: Vec<usize> = (0..n_fields)
        .filter(|&c| c != sidecar.class_column)
        .collect();
    if sidecar.class_column >= n_fields {
        return Err(Error::InvalidValue(format!(
            "class_column {} out of range for {n_fields} columns",
            sidecar.class_column
        )));
    }

    let mut classes: Vec<String> = sidecar.classes.clone().unwrap_or_default();
    let classes_fixed = sidecar.classes.is_some();
    let mut categories: Vec<Vec<String>> = sidecar
        .features
        .iter()
        .map(|f| f.categories.clone().unwrap_or_default())
        .collect();

    struct RawRow {
        values: Vec<Option<RawValue>>,
        class: usize,
    }
    enum RawValue {
        Num(f64),
        Cat(usize),
    }

    let mut raw_rows = Vec::new();
    for line in split_lines(text) {
        expect_fields(&line, n_fields)?;
        let label = line.fields[sidecar.class_column];
        let class = match classes.iter().position(|c| c == label) {
            Some(i) => i,
            None if !classes_fixed => {
                classes.push(label.to_string());
                classes.len() - 1
            }
            None => {
                return Err(parse_err(
                    line.number,
                    format!("unknown class label `{label}`"),
                ))
            }
        };
        let mut values = Vec::with_capacity(n_features);
        for (feat_idx, feature) in sidecar.features.iter().enumerate() {
            let field = line.fields[feature_columns[feat_idx]];
            if field == "?" {
                values.push(None);
                continue;
            }
            match feature.kind.as_str() {
                "numeric" => {
                    let v = field.parse::<f64>().map_err(|_| {
                        parse_err(line.number, format!("bad numeric value `{field}`"))
                    })?;
                    values.push(Some(RawValue::Num(v)));
                }
                "categorical" => {
                    let fixed = sidecar.features[feat_idx].categories.is_some();
                    let k = match categories[feat_idx].iter().position(|c| c == field) {
                        Some(k) => k,
                        None if !fixed => {
                            categories[feat_idx].push(field.to_string());
                            categories[feat_idx].len() - 1
                        }
                        None => {
                            return Err(parse_err(
                                line.number,
                                format!("unknown category `{field}` for `{}`", feature.name),
                            ))
                        }
                    };
                    values.push(Some(RawValue::Cat(k)));
                }
                other => {
                    return Err(Error::InvalidValue(format!(
                        "feature `{}`: unknown kind `{other}`",
                        feature.name
                    )))
                }
            }
        }
        raw_rows.push(RawRow { values, class });
    }

    if classes.is_empty() {
        return Err(Error::InvalidValue(
            "generic dataset declares no classes".into(),
        ));
    }
    let rows: Vec<(Instance, usize)> = raw_rows
        .into_iter()
        .map(|raw| {
            let values = raw
                .values
                .into_iter()
                .map(|v| {
                    v.map(|v| match v {
                        RawValue::Num(x) => FeatureValue::Numeric(x),
                        RawValue::Cat(k) => FeatureValue::Category(k),
                    })
                })
                .collect();
            (Instance::new(values), raw.class)
        })
        .collect();

    let mut features = Vec::with_capacity(n_features);
    for (feat_idx, feature) in sidecar.features.iter().enumerate() {
        match feature.kind.as_str() {
            "numeric" => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for (inst, _) in &rows {
                    if let Some(FeatureValue::Numeric(v)) = inst.values[feat_idx] {
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                }
                if lo > hi {
                    return Err(Error::InvalidValue(format!(
                        "feature `{}` has no observed values",
                        feature.name
                    )));
                }
                let (lower, upper) = pad_bounds(lo, hi, options.bounds_margin);
                features.push(FeatureSpec::numeric(
                    feature.name.clone(),
                    lower,
                    upper,
                    options.num_linguistic,
                )?);
            }
            _ => {
                features.push(FeatureSpec::categorical(
                    feature.name.clone(),
                    categories[feat_idx].clone(),
                )?);
            }
        }
    }
    LabeledDataset::new(Schema::new(features, classes)?, rows)
}
