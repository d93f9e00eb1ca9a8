//! Seeded random problem generators shared by the integration tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rulefuse::{
    AntecedentToken, FeatureSpec, FeatureValue, FuzzyRule, Instance, KnowledgeBase, LabeledDataset,
    LinguisticPartition, Schema, TriangularMF,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random schema with up to `max_features` features (at least one), mixing
/// numeric and categorical kinds, and 2-3 classes.
pub fn random_schema(rng: &mut ChaCha8Rng, max_features: usize) -> Schema {
    let n_features = rng.gen_range(1..=max_features);
    let features = (0..n_features)
        .map(|i| {
            if rng.gen_bool(0.6) {
                let lower = rng.gen_range(-10.0..10.0);
                let upper = lower + rng.gen_range(1.0..20.0);
                let l = rng.gen_range(1..=4);
                FeatureSpec::numeric(format!("f{i}"), lower, upper, l).unwrap()
            } else {
                let n_cats = rng.gen_range(2..=4);
                let cats = (0..n_cats).map(|k| format!("c{k}")).collect();
                FeatureSpec::categorical(format!("f{i}"), cats).unwrap()
            }
        })
        .collect();
    let n_classes = rng.gen_range(2..=3);
    let classes = (0..n_classes).map(|c| format!("class{c}")).collect();
    Schema::new(features, classes).unwrap()
}

/// Random partitions already in repair-normal form: centers sorted within
/// the range, widths within `[1% range, range]`.
pub fn random_partitions(rng: &mut ChaCha8Rng, schema: &Schema) -> Vec<LinguisticPartition> {
    schema
        .features
        .iter()
        .filter(|f| f.is_numeric())
        .map(|f| {
            let (lower, upper) = f.range().unwrap();
            let range = upper - lower;
            let mut centers: Vec<f64> = (0..f.num_linguistic().unwrap())
                .map(|_| rng.gen_range(lower..=upper))
                .collect();
            centers.sort_by(f64::total_cmp);
            let mfs = centers
                .into_iter()
                .map(|c| TriangularMF::new(c, rng.gen_range(0.011 * range..=range)))
                .collect();
            LinguisticPartition::new(mfs)
        })
        .collect()
}

pub fn random_rule(rng: &mut ChaCha8Rng, schema: &Schema) -> FuzzyRule {
    let antecedents = schema
        .features
        .iter()
        .map(|f| {
            if rng.gen_bool(0.2) {
                AntecedentToken::DontCare
            } else if f.is_numeric() {
                AntecedentToken::Linguistic(rng.gen_range(0..f.num_linguistic().unwrap()))
            } else {
                AntecedentToken::Category(rng.gen_range(0..f.categories().unwrap().len()))
            }
        })
        .collect();
    FuzzyRule::new(antecedents, rng.gen_range(0..schema.classes.len()))
}

/// Random valid knowledge base with `1..=max_rules` rules.
pub fn random_kb(rng: &mut ChaCha8Rng, schema: &Schema, max_rules: usize) -> KnowledgeBase {
    let n_rules = rng.gen_range(1..=max_rules);
    let rules = (0..n_rules).map(|_| random_rule(rng, schema)).collect();
    KnowledgeBase::new(schema.clone(), random_partitions(rng, schema), rules).unwrap()
}

/// Random dataset over `schema` with `1..=max_rows` rows and ~10% missing
/// values.
pub fn random_dataset(rng: &mut ChaCha8Rng, schema: &Schema, max_rows: usize) -> LabeledDataset {
    let n_rows = rng.gen_range(1..=max_rows);
    let rows = (0..n_rows)
        .map(|_| {
            let values = schema
                .features
                .iter()
                .map(|f| {
                    if rng.gen_bool(0.1) {
                        return None;
                    }
                    Some(if f.is_numeric() {
                        let (lower, upper) = f.range().unwrap();
                        let slack = 0.2 * (upper - lower);
                        FeatureValue::Numeric(rng.gen_range(lower - slack..=upper + slack))
                    } else {
                        FeatureValue::Category(rng.gen_range(0..f.categories().unwrap().len()))
                    })
                })
                .collect();
            (
                Instance::new(values),
                rng.gen_range(0..schema.classes.len()),
            )
        })
        .collect();
    LabeledDataset::new(schema.clone(), rows).unwrap()
}
