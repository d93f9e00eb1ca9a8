//! Labeled instance data evaluated against knowledge bases.

use crate::error::{Error, Result};
use crate::kb::{FeatureKind, Schema};

/// One observed feature value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureValue {
    Numeric(f64),
    Category(usize),
}

/// A single case: one optional value per feature, `None` meaning missing.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub values: Vec<Option<FeatureValue>>,
}

impl Instance {
    pub fn new(values: Vec<Option<FeatureValue>>) -> Self {
        Instance { values }
    }
}

/// Instances with class labels, tied to the schema they were read under.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub schema: Schema,
    /// `(instance, class index)` pairs.
    pub rows: Vec<(Instance, usize)>,
}

impl LabeledDataset {
    pub fn new(schema: Schema, rows: Vec<(Instance, usize)>) -> Result<Self> {
        let data = LabeledDataset { schema, rows };
        data.validate()?;
        Ok(data)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        self.schema.validate()?;
        for (i, (inst, class)) in self.rows.iter().enumerate() {
            if inst.values.len() != self.schema.features.len() {
                return Err(Error::LengthMismatch(format!(
                    "row {i}: {} values for {} features",
                    inst.values.len(),
                    self.schema.features.len()
                )));
            }
            if *class >= self.schema.classes.len() {
                return Err(Error::InvalidValue(format!(
                    "row {i}: class index {class} out of range"
                )));
            }
            for (value, feature) in inst.values.iter().zip(&self.schema.features) {
                match (value, &feature.kind) {
                    (None, _) => {}
                    (Some(FeatureValue::Numeric(v)), FeatureKind::Numeric { .. }) => {
                        if !v.is_finite() {
                            return Err(Error::InvalidValue(format!(
                                "row {i}: non-finite value for `{}`",
                                feature.name
                            )));
                        }
                    }
                    (Some(FeatureValue::Category(k)), FeatureKind::Categorical { categories }) => {
                        if *k >= categories.len() {
                            return Err(Error::InvalidValue(format!(
                                "row {i}: category index {k} out of range for `{}`",
                                feature.name
                            )));
                        }
                    }
                    _ => {
                        return Err(Error::InvalidValue(format!(
                            "row {i}: value kind does not match feature `{}`",
                            feature.name
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    /// Per-class row counts, indexed by class.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.schema.classes.len()];
        for (_, class) in &self.rows {
            counts[*class] += 1;
        }
        counts
    }
}
