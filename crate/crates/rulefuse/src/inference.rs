//! Fuzzy classification: firing strengths, winner-take-all labeling, and
//! dataset accuracy.
//!
//! Semantics: product t-norm over non-don't-care antecedents, categorical
//! antecedents match crisply (factor 1 or 0), missing feature values
//! contribute factor 1, ties broken by lowest rule index, and an instance
//! on which every rule fires at 0 is left unlabeled.

use crate::dataset::{FeatureValue, Instance, LabeledDataset};
use crate::error::{Error, Result};
use crate::kb::{AntecedentToken, KnowledgeBase, TriangularMF};

/// Degree to which `inst` satisfies the antecedents of `rule`.
pub fn firing_strength(rule_idx: usize, kb: &KnowledgeBase, inst: &Instance) -> f64 {
    let rule = &kb.rules[rule_idx];
    let mut strength = 1.0;
    for (feat_idx, token) in rule.antecedents.iter().enumerate() {
        let value = match inst.values[feat_idx] {
            Some(v) => v,
            None => continue,
        };
        match (token, value) {
            (AntecedentToken::DontCare, _) => {}
            (AntecedentToken::Linguistic(j), FeatureValue::Numeric(x)) => {
                let mf = &kb
                    .partition_for_feature(feat_idx)
                    .expect("numeric feature")
                    .mfs[*j];
                strength *= mf.membership(x);
            }
            (AntecedentToken::Category(k), FeatureValue::Category(c)) => {
                if *k != c {
                    return 0.0;
                }
            }
            _ => unreachable!("rule validated against schema"),
        }
        if strength == 0.0 {
            return 0.0;
        }
    }
    strength
}

/// Label for `inst`: consequent of the max-strength rule, lowest rule index
/// on ties, `None` when every rule fires at 0.
pub fn classify_instance(kb: &KnowledgeBase, inst: &Instance) -> Option<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (rule_idx, rule) in kb.rules.iter().enumerate() {
        let strength = firing_strength(rule_idx, kb, inst);
        if strength > 0.0 && best.map_or(true, |(s, _)| strength > s) {
            best = Some((strength, rule.consequent));
        }
    }
    best.map(|(_, class)| class)
}

/// Fraction of rows whose predicted class equals the labeled class;
/// unlabeled rows count as incorrect.
pub fn accuracy(kb: &KnowledgeBase, data: &LabeledDataset) -> Result<f64> {
    let (correct, total) = classification_counts(kb, data)?;
    Ok(correct as f64 / total as f64)
}

/// `(correctly classified, total)` row counts for `kb` over `data`.
pub fn classification_counts(kb: &KnowledgeBase, data: &LabeledDataset) -> Result<(usize, usize)> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    kb.schema.compatible_with(&data.schema)?;
    let compiled = CompiledKb::new(kb);
    let mut row = CompiledRow::zeroed(kb.schema.features.len());
    let mut correct = 0;
    for (inst, class) in &data.rows {
        row.fill(inst);
        if compiled.classify(&row) == Some(*class) {
            correct += 1;
        }
    }
    Ok((correct, data.rows.len()))
}

enum Test {
    Mf(TriangularMF),
    Cat(usize),
}

struct CompiledRule {
    /// Non-don't-care antecedents as `(feature index, test)`, feature order.
    tests: Vec<(usize, Test)>,
    consequent: usize,
}

/// Flat-array view of a knowledge base for tight classification loops.
/// Produces bit-identical strengths to [`firing_strength`]: same factors,
/// multiplied in the same feature order.
pub(crate) struct CompiledKb {
    rules: Vec<CompiledRule>,
}

pub(crate) struct CompiledRow {
    /// Numeric value per feature; NaN when missing or categorical.
    num: Vec<f64>,
    /// Category index per feature; usize::MAX when missing or numeric.
    cat: Vec<usize>,
}

impl CompiledKb {
    pub(crate) fn new(kb: &KnowledgeBase) -> Self {
        let rules = kb
            .rules
            .iter()
            .map(|rule| {
                let tests = rule
                    .antecedents
                    .iter()
                    .enumerate()
                    .filter_map(|(feat_idx, token)| match token {
                        AntecedentToken::DontCare => None,
                        AntecedentToken::Linguistic(j) => {
                            let mf = kb.partition_for_feature(feat_idx).expect("numeric").mfs[*j];
                            Some((feat_idx, Test::Mf(mf)))
                        }
                        AntecedentToken::Category(k) => Some((feat_idx, Test::Cat(*k))),
                    })
                    .collect();
                CompiledRule {
                    tests,
                    consequent: rule.consequent,
                }
            })
            .collect();
        CompiledKb { rules }
    }

    fn strength(&self, rule: &CompiledRule, row: &CompiledRow) -> f64 {
        let mut strength = 1.0;
        for (feat_idx, test) in &rule.tests {
            match test {
                Test::Cat(k) => {
                    let c = row.cat[*feat_idx];
                    if c == usize::MAX {
                        continue;
                    }
                    if c != *k {
                        return 0.0;
                    }
                }
                Test::Mf(mf) => {
                    let x = row.num[*feat_idx];
                    if x.is_nan() {
                        continue;
                    }
                    strength *= mf.membership(x);
                    if strength == 0.0 {
                        return 0.0;
                    }
                }
            }
        }
        strength
    }

    pub(crate) fn classify(&self, row: &CompiledRow) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for rule in &self.rules {
            let strength = self.strength(rule, row);
            if strength > 0.0 && best.map_or(true, |(s, _)| strength > s) {
                best = Some((strength, rule.consequent));
            }
        }
        best.map(|(_, class)| class)
    }
}

impl CompiledRow {
    pub(crate) fn zeroed(n_features: usize) -> Self {
        CompiledRow {
            num: vec![f64::NAN; n_features],
            cat: vec![usize::MAX; n_features],
        }
    }

    pub(crate) fn fill(&mut self, inst: &Instance) {
        for (i, value) in inst.values.iter().enumerate() {
            match value {
                Some(FeatureValue::Numeric(v)) => {
                    self.num[i] = *v;
                    self.cat[i] = usize::MAX;
                }
                Some(FeatureValue::Category(c)) => {
                    self.num[i] = f64::NAN;
                    self.cat[i] = *c;
                }
                None => {
                    self.num[i] = f64::NAN;
                    self.cat[i] = usize::MAX;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{FeatureSpec, FuzzyRule, LinguisticPartition, Schema};

    fn kb_two_numeric() -> KnowledgeBase {
        let schema = Schema::new(
            vec![
                FeatureSpec::numeric("x", 0.0, 10.0, 1).unwrap(),
                FeatureSpec::numeric("y", 0.0, 10.0, 1).unwrap(),
            ],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        KnowledgeBase::new(
            schema,
            vec![
                LinguisticPartition::new(vec![TriangularMF::new(5.0, 2.0)]),
                LinguisticPartition::new(vec![TriangularMF::new(5.0, 5.0)]),
            ],
            vec![FuzzyRule::new(
                vec![
                    AntecedentToken::Linguistic(0),
                    AntecedentToken::Linguistic(0),
                ],
                1,
            )],
        )
        .unwrap()
    }

    #[test]
    fn firing_is_product_of_degrees() {
        let kb = kb_two_numeric();
        // degrees: 1 - 1/2 = 0.5 and 1 - 1/5 = 0.8
        let inst = Instance::new(vec![
            Some(FeatureValue::Numeric(6.0)),
            Some(FeatureValue::Numeric(4.0)),
        ]);
        assert!((firing_strength(0, &kb, &inst) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn all_dont_care_fires_at_one() {
        let mut kb = kb_two_numeric();
        kb.rules[0].antecedents = vec![AntecedentToken::DontCare, AntecedentToken::DontCare];
        let inst = Instance::new(vec![Some(FeatureValue::Numeric(0.0)), None]);
        assert_eq!(firing_strength(0, &kb, &inst), 1.0);
    }

    #[test]
    fn categorical_mismatch_annihilates() {
        let schema = Schema::new(
            vec![FeatureSpec::categorical("c", vec!["x".into(), "o".into()]).unwrap()],
            vec!["a".into()],
        )
        .unwrap();
        let kb = KnowledgeBase::new(
            schema,
            vec![],
            vec![FuzzyRule::new(vec![AntecedentToken::Category(0)], 0)],
        )
        .unwrap();
        let inst = Instance::new(vec![Some(FeatureValue::Category(1))]);
        assert_eq!(firing_strength(0, &kb, &inst), 0.0);
    }

    #[test]
    fn missing_value_contributes_factor_one() {
        let kb = kb_two_numeric();
        let inst = Instance::new(vec![Some(FeatureValue::Numeric(6.0)), None]);
        assert_eq!(firing_strength(0, &kb, &inst), 0.5);
    }

    #[test]
    fn classify_single_candidate() {
        let kb = kb_two_numeric();
        let inst = Instance::new(vec![
            Some(FeatureValue::Numeric(6.0)),
            Some(FeatureValue::Numeric(5.0)),
        ]);
        assert_eq!(classify_instance(&kb, &inst), Some(1));
    }

    #[test]
    fn classify_no_coverage_is_none() {
        let kb = kb_two_numeric();
        let inst = Instance::new(vec![
            Some(FeatureValue::Numeric(9.9)),
            Some(FeatureValue::Numeric(5.0)),
        ]);
        assert_eq!(classify_instance(&kb, &inst), None);
    }

    #[test]
    fn classify_tie_breaks_to_lowest_rule_index() {
        let mut kb = kb_two_numeric();
        let rule = kb.rules[0].clone();
        kb.rules = vec![
            FuzzyRule::new(rule.antecedents.clone(), 0),
            FuzzyRule::new(
                vec![AntecedentToken::DontCare, AntecedentToken::DontCare],
                1,
            ),
            FuzzyRule::new(rule.antecedents.clone(), 1),
        ];
        // rules 0 and 2 both fire at 1.0 at the apex; rule 1 also fires at 1.0
        let inst = Instance::new(vec![
            Some(FeatureValue::Numeric(5.0)),
            Some(FeatureValue::Numeric(5.0)),
        ]);
        assert_eq!(classify_instance(&kb, &inst), Some(0));
    }

    #[test]
    fn accuracy_counts_unmatched_as_incorrect() {
        let kb = kb_two_numeric();
        let rows = vec![
            // correct: classified as 1
            (
                Instance::new(vec![
                    Some(FeatureValue::Numeric(5.0)),
                    Some(FeatureValue::Numeric(5.0)),
                ]),
                1,
            ),
            // fires but label is 0: incorrect
            (
                Instance::new(vec![
                    Some(FeatureValue::Numeric(5.0)),
                    Some(FeatureValue::Numeric(5.0)),
                ]),
                0,
            ),
            // no rule fires: incorrect
            (
                Instance::new(vec![
                    Some(FeatureValue::Numeric(0.0)),
                    Some(FeatureValue::Numeric(5.0)),
                ]),
                1,
            ),
            (
                Instance::new(vec![
                    Some(FeatureValue::Numeric(4.0)),
                    Some(FeatureValue::Numeric(6.0)),
                ]),
                1,
            ),
        ];
        let data = LabeledDataset::new(kb.schema.clone(), rows).unwrap();
        assert_eq!(accuracy(&kb, &data).unwrap(), 0.5);
    }

    #[test]
    fn accuracy_rejects_empty_dataset() {
        let kb = kb_two_numeric();
        let data = LabeledDataset {
            schema: kb.schema.clone(),
            rows: vec![],
        };
        assert!(matches!(accuracy(&kb, &data), Err(Error::EmptyDataset)));
    }

    #[test]
    fn accuracy_rejects_schema_mismatch() {
        let kb = kb_two_numeric();
        let other = Schema::new(
            vec![FeatureSpec::numeric("x", 0.0, 10.0, 1).unwrap()],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let data = LabeledDataset::new(
            other,
            vec![(Instance::new(vec![Some(FeatureValue::Numeric(1.0))]), 0)],
        )
        .unwrap();
        assert!(matches!(
            accuracy(&kb, &data),
            Err(Error::SchemaMismatch(_))
        ));
    }

    #[test]
    fn compiled_path_matches_simple_path() {
        let kb = kb_two_numeric();
        let compiled = CompiledKb::new(&kb);
        let mut row = CompiledRow::zeroed(2);
        for x in [0.0, 3.4, 5.0, 6.9, 7.0, 10.0] {
            for y in [0.0, 5.0, 9.0] {
                let inst = Instance::new(vec![
                    Some(FeatureValue::Numeric(x)),
                    Some(FeatureValue::Numeric(y)),
                ]);
                row.fill(&inst);
                assert_eq!(compiled.classify(&row), classify_instance(&kb, &inst));
            }
        }
    }
}
