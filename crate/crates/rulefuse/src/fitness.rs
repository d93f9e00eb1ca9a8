//! Fitness of an integrated rule set: accuracy over test objects, divided by
//! a complexity penalty raised to a control exponent.

use serde::{Deserialize, Serialize};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::inference;
use crate::kb::KnowledgeBase;

/// Evaluation of one knowledge base against a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessReport {
    pub accuracy: f64,
    pub complexity: f64,
    pub fitness: f64,
}

/// Ratio of rule increase: integrated rule count over the mean source rule
/// count.
pub fn complexity(rule_count: usize, source_rule_counts: &[usize]) -> Result<f64> {
    if source_rule_counts.is_empty() {
        return Err(Error::EmptySources);
    }
    if rule_count == 0 || source_rule_counts.iter().any(|&c| c == 0) {
        return Err(Error::InvalidValue("rule counts must be >= 1".into()));
    }
    let mean = source_rule_counts.iter().sum::<usize>() as f64 / source_rule_counts.len() as f64;
    Ok(rule_count as f64 / mean)
}

/// `accuracy / complexity^alpha`.
pub fn fitness(accuracy: f64, complexity: f64, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&accuracy) {
        return Err(Error::InvalidValue(format!(
            "accuracy {accuracy} outside [0, 1]"
        )));
    }
    if !(complexity > 0.0) {
        return Err(Error::InvalidValue(format!(
            "complexity {complexity} must be > 0"
        )));
    }
    Ok(accuracy / complexity.powf(alpha))
}

/// Full evaluation of `kb`: accuracy on `data`, complexity relative to the
/// source rule counts, and the combined fitness.
pub fn evaluate_kb(
    kb: &KnowledgeBase,
    data: &LabeledDataset,
    source_rule_counts: &[usize],
    alpha: f64,
) -> Result<FitnessReport> {
    let accuracy = inference::accuracy(kb, data)?;
    let complexity = complexity(kb.rules.len(), source_rule_counts)?;
    let fitness = fitness(accuracy, complexity, alpha)?;
    Ok(FitnessReport {
        accuracy,
        complexity,
        fitness,
    })
}
