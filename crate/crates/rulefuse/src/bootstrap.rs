//! Fabricates the initial knowledge bases the integration consumes: evenly
//! spaced triangular partitions plus single-pass rule induction from each
//! source's data share (one candidate rule per row, keyed by its max-
//! membership cell; conflicts resolved toward the strongest generating row).

use std::collections::HashMap;

use crate::dataset::{FeatureValue, LabeledDataset};
use crate::error::{Error, Result};
use crate::kb::{
    AntecedentToken, FeatureSpec, FuzzyRule, KnowledgeBase, LinguisticPartition, TriangularMF,
};

/// Evenly spaced isosceles triangles over a numeric feature's range: for
/// `L >= 2`, centers run from `lower` to `upper` inclusive with half-width
/// equal to the spacing; for `L = 1`, a single triangle centered on the
/// midpoint spanning the whole range.
pub fn uniform_partition(feature: &FeatureSpec) -> Result<LinguisticPartition> {
    let (lower, upper) = feature
        .range()
        .ok_or_else(|| Error::InvalidValue(format!("feature `{}` is not numeric", feature.name)))?;
    let l = feature.num_linguistic().unwrap();
    let mfs = if l == 1 {
        vec![TriangularMF::new(
            (lower + upper) / 2.0,
            (upper - lower) / 2.0,
        )]
    } else {
        let spacing = (upper - lower) / (l - 1) as f64;
        (0..l)
            .map(|j| TriangularMF::new(lower + j as f64 * spacing, spacing))
            .collect()
    };
    Ok(LinguisticPartition::new(mfs))
}

/// One uniform partition per numeric feature of the schema, in order.
pub fn uniform_partitions(features: &[FeatureSpec]) -> Result<Vec<LinguisticPartition>> {
    features
        .iter()
        .filter(|f| f.is_numeric())
        .map(uniform_partition)
        .collect()
}

/// Single-pass rule induction over `share`: each row proposes a rule whose
/// numeric antecedents pick the max-membership linguistic value (lowest
/// index on ties), categorical antecedents match the row's category, and
/// missing values become don't-care. Duplicate cells collapse; when the
/// same cell is proposed with different classes, the class whose generating
/// row fires strongest under its own rule wins (lowest class index on
/// strength ties).
pub fn induce_rule_set(
    share: &LabeledDataset,
    partitions: &[LinguisticPartition],
) -> Result<KnowledgeBase> {
    if share.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let schema = &share.schema;
    let numeric = schema.numeric_positions();
    if partitions.len() != numeric.len() {
        return Err(Error::LengthMismatch(format!(
            "{} partitions for {} numeric features",
            partitions.len(),
            numeric.len()
        )));
    }

    struct Candidate {
        rule_idx: usize,
        strength: f64,
        class: usize,
    }
    let mut rules: Vec<FuzzyRule> = Vec::new();
    let mut by_cell: HashMap<Vec<AntecedentToken>, Candidate> = HashMap::new();

    for (inst, class) in &share.rows {
        let mut antecedents = Vec::with_capacity(schema.features.len());
        let mut strength = 1.0;
        for (feat_idx, value) in inst.values.iter().enumerate() {
            let token = match value {
                None => AntecedentToken::DontCare,
                Some(FeatureValue::Category(k)) => AntecedentToken::Category(*k),
                Some(FeatureValue::Numeric(x)) => {
                    let slot = schema.partition_slot(feat_idx).expect("numeric feature");
                    let mfs = &partitions[slot].mfs;
                    let mut best = 0;
                    for j in 1..mfs.len() {
                        if mfs[j].membership(*x) > mfs[best].membership(*x) {
                            best = j;
                        }
                    }
                    strength *= mfs[best].membership(*x);
                    AntecedentToken::Linguistic(best)
                }
            };
            antecedents.push(token);
        }

        match by_cell.get_mut(&antecedents) {
            None => {
                rules.push(FuzzyRule::new(antecedents.clone(), *class));
                by_cell.insert(
                    antecedents,
                    Candidate {
                        rule_idx: rules.len() - 1,
                        strength,
                        class: *class,
                    },
                );
            }
            Some(existing) => {
                let stronger = strength > existing.strength
                    || (strength == existing.strength && *class < existing.class);
                if stronger {
                    existing.strength = strength.max(existing.strength);
                    existing.class = *class;
                    rules[existing.rule_idx].consequent = *class;
                }
            }
        }
    }

    KnowledgeBase::new(schema.clone(), partitions.to_vec(), rules)
}
