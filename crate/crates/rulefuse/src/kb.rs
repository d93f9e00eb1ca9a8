//! Fuzzy knowledge-base types: features, triangular membership functions,
//! linguistic partitions, and rules.
//!
//! A [`KnowledgeBase`] pairs a [`Schema`] (feature and class declarations)
//! with one [`LinguisticPartition`] per numeric feature and a non-empty rule
//! list. It serializes to a fixed JSON layout so externally supplied rule
//! sets can be swapped in for bootstrapped ones.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fraction of a feature's range used as the minimum membership half-width.
pub const WIDTH_FLOOR_FRACTION: f64 = 0.01;

/// What a feature is: a bounded numeric axis or a closed category set.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureKind {
    Numeric {
        lower: f64,
        upper: f64,
        /// Number of linguistic values partitioning the axis.
        num_linguistic: usize,
    },
    Categorical {
        categories: Vec<String>,
    },
}

/// Declaration of a single input feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FeatureSpecWire", into = "FeatureSpecWire")]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
}

impl FeatureSpec {
    pub fn numeric(
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        num_linguistic: usize,
    ) -> Result<Self> {
        let spec = FeatureSpec {
            name: name.into(),
            kind: FeatureKind::Numeric {
                lower,
                upper,
                num_linguistic,
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn categorical(name: impl Into<String>, categories: Vec<String>) -> Result<Self> {
        let spec = FeatureSpec {
            name: name.into(),
            kind: FeatureKind::Categorical { categories },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, FeatureKind::Numeric { .. })
    }

    /// `(lower, upper)` for numeric features.
    pub fn range(&self) -> Option<(f64, f64)> {
        match self.kind {
            FeatureKind::Numeric { lower, upper, .. } => Some((lower, upper)),
            FeatureKind::Categorical { .. } => None,
        }
    }

    pub fn num_linguistic(&self) -> Option<usize> {
        match self.kind {
            FeatureKind::Numeric { num_linguistic, .. } => Some(num_linguistic),
            FeatureKind::Categorical { .. } => None,
        }
    }

    pub fn categories(&self) -> Option<&[String]> {
        match &self.kind {
            FeatureKind::Numeric { .. } => None,
            FeatureKind::Categorical { categories } => Some(categories),
        }
    }

    /// Highest antecedent code for this feature; the code itself means don't-care.
    pub fn dont_care_code(&self) -> usize {
        match &self.kind {
            FeatureKind::Numeric { num_linguistic, .. } => *num_linguistic,
            FeatureKind::Categorical { categories } => categories.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            FeatureKind::Numeric {
                lower,
                upper,
                num_linguistic,
            } => {
                if !(lower.is_finite() && upper.is_finite() && lower < upper) {
                    return Err(Error::InvalidValue(format!(
                        "feature `{}`: numeric range must satisfy lower < upper, got [{lower}, {upper}]",
                        self.name
                    )));
                }
                if *num_linguistic < 1 {
                    return Err(Error::InvalidValue(format!(
                        "feature `{}`: num_linguistic must be >= 1",
                        self.name
                    )));
                }
            }
            FeatureKind::Categorical { categories } => {
                if categories.is_empty() {
                    return Err(Error::InvalidValue(format!(
                        "feature `{}`: categorical feature needs at least one category",
                        self.name
                    )));
                }
                for (i, c) in categories.iter().enumerate() {
                    if categories[..i].contains(c) {
                        return Err(Error::InvalidValue(format!(
                            "feature `{}`: duplicate category `{c}`",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct FeatureSpecWire {
    name: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    categories: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    num_linguistic: Option<usize>,
}

impl TryFrom<FeatureSpecWire> for FeatureSpec {
    type Error = Error;

    fn try_from(w: FeatureSpecWire) -> Result<Self> {
        let kind = match w.kind.as_str() {
            "numeric" => FeatureKind::Numeric {
                lower: w.lower.ok_or_else(|| missing_field(&w.name, "lower"))?,
                upper: w.upper.ok_or_else(|| missing_field(&w.name, "upper"))?,
                num_linguistic: w
                    .num_linguistic
                    .ok_or_else(|| missing_field(&w.name, "num_linguistic"))?,
            },
            "categorical" => FeatureKind::Categorical {
                categories: w
                    .categories
                    .ok_or_else(|| missing_field(&w.name, "categories"))?,
            },
            other => {
                return Err(Error::InvalidValue(format!(
                    "feature `{}`: unknown kind `{other}`",
                    w.name
                )))
            }
        };
        let spec = FeatureSpec { name: w.name, kind };
        spec.validate()?;
        Ok(spec)
    }
}

fn missing_field(feature: &str, field: &str) -> Error {
    Error::InvalidValue(format!("feature `{feature}`: missing field `{field}`"))
}

impl From<FeatureSpec> for FeatureSpecWire {
    fn from(spec: FeatureSpec) -> Self {
        match spec.kind {
            FeatureKind::Numeric {
                lower,
                upper,
                num_linguistic,
            } => FeatureSpecWire {
                name: spec.name,
                kind: "numeric".into(),
                lower: Some(lower),
                upper: Some(upper),
                categories: None,
                num_linguistic: Some(num_linguistic),
            },
            FeatureKind::Categorical { categories } => FeatureSpecWire {
                name: spec.name,
                kind: "categorical".into(),
                lower: None,
                upper: None,
                categories: Some(categories),
                num_linguistic: None,
            },
        }
    }
}

/// Isosceles triangular membership function with apex at `center` and
/// support `[center - half_width, center + half_width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangularMF {
    pub center: f64,
    pub half_width: f64,
}

impl TriangularMF {
    pub fn new(center: f64, half_width: f64) -> Self {
        TriangularMF { center, half_width }
    }

    /// Membership degree of `x`: `max(0, 1 - |x - center| / half_width)`.
    pub fn membership(&self, x: f64) -> f64 {
        (1.0 - (x - self.center).abs() / self.half_width).max(0.0)
    }
}

/// The ordered membership functions for one numeric feature, one per
/// linguistic value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinguisticPartition {
    pub mfs: Vec<TriangularMF>,
}

impl LinguisticPartition {
    pub fn new(mfs: Vec<TriangularMF>) -> Self {
        LinguisticPartition { mfs }
    }

    pub fn len(&self) -> usize {
        self.mfs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mfs.is_empty()
    }
}

/// Normalizes a partition against its feature's range: half-widths clamped
/// to `[WIDTH_FLOOR_FRACTION * range, range]`, centers clamped to the range,
/// and membership functions reordered so centers are non-decreasing.
///
/// Idempotent; panics if `feature` is not numeric.
pub fn repair_partition(p: &LinguisticPartition, feature: &FeatureSpec) -> LinguisticPartition {
    let (lower, upper) = feature
        .range()
        .expect("repair_partition needs a numeric feature");
    let range = upper - lower;
    let w_min = WIDTH_FLOOR_FRACTION * range;
    let mut mfs: Vec<TriangularMF> = p
        .mfs
        .iter()
        .map(|mf| TriangularMF {
            center: mf.center.clamp(lower, upper),
            half_width: mf.half_width.clamp(w_min, range),
        })
        .collect();
    mfs.sort_by(|a, b| a.center.total_cmp(&b.center));
    LinguisticPartition { mfs }
}

/// One antecedent slot of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TokenWire", into = "TokenWire")]
pub enum AntecedentToken {
    /// Linguistic value index `j` of a numeric feature.
    Linguistic(usize),
    /// Category index `k` of a categorical feature.
    Category(usize),
    /// Matches anything (degree 1).
    DontCare,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TokenWire {
    Lv { lv: usize },
    Cat { cat: usize },
    Dc(DcWire),
}

#[derive(Serialize, Deserialize)]
enum DcWire {
    #[serde(rename = "dc")]
    Dc,
}

impl TryFrom<TokenWire> for AntecedentToken {
    type Error = Error;

    fn try_from(w: TokenWire) -> Result<Self> {
        Ok(match w {
            TokenWire::Lv { lv } => AntecedentToken::Linguistic(lv),
            TokenWire::Cat { cat } => AntecedentToken::Category(cat),
            TokenWire::Dc(_) => AntecedentToken::DontCare,
        })
    }
}

impl From<AntecedentToken> for TokenWire {
    fn from(t: AntecedentToken) -> Self {
        match t {
            AntecedentToken::Linguistic(lv) => TokenWire::Lv { lv },
            AntecedentToken::Category(cat) => TokenWire::Cat { cat },
            AntecedentToken::DontCare => TokenWire::Dc(DcWire::Dc),
        }
    }
}

/// An IF-THEN classification rule: one antecedent token per feature plus a
/// class index consequent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FuzzyRule {
    pub antecedents: Vec<AntecedentToken>,
    #[serde(rename = "class")]
    pub consequent: usize,
}

impl FuzzyRule {
    pub fn new(antecedents: Vec<AntecedentToken>, consequent: usize) -> Self {
        FuzzyRule {
            antecedents,
            consequent,
        }
    }
}

/// Feature and class declarations shared by knowledge bases and datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub features: Vec<FeatureSpec>,
    pub classes: Vec<String>,
}

impl Schema {
    pub fn new(features: Vec<FeatureSpec>, classes: Vec<String>) -> Result<Self> {
        let schema = Schema { features, classes };
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<()> {
        for f in &self.features {
            f.validate()?;
        }
        if self.classes.is_empty() {
            return Err(Error::InvalidValue(
                "schema needs at least one class".into(),
            ));
        }
        Ok(())
    }

    /// Indices of the numeric features, in feature order.
    pub fn numeric_positions(&self) -> Vec<usize> {
        self.features
            .iter()
            .enumerate()
            .filter(|(_, f)| f.is_numeric())
            .map(|(i, _)| i)
            .collect()
    }

    /// Index into the partition list for a numeric feature, by feature index.
    pub fn partition_slot(&self, feature_idx: usize) -> Option<usize> {
        if !self.features.get(feature_idx)?.is_numeric() {
            return None;
        }
        Some(
            self.features[..feature_idx]
                .iter()
                .filter(|f| f.is_numeric())
                .count(),
        )
    }

    /// Length of the flattened membership gene segment: `2 * sum(L_i)`.
    pub fn mf_gene_len(&self) -> usize {
        2 * self
            .features
            .iter()
            .filter_map(|f| f.num_linguistic())
            .sum::<usize>()
    }

    /// Checks that `other` describes the same inputs and outputs for
    /// inference purposes: equal feature names and kinds (category lists
    /// must match exactly; numeric bounds and partition sizes may differ)
    /// and an identical class list.
    pub fn compatible_with(&self, other: &Schema) -> Result<()> {
        if self.features.len() != other.features.len() {
            return Err(Error::SchemaMismatch(format!(
                "feature count {} vs {}",
                self.features.len(),
                other.features.len()
            )));
        }
        for (a, b) in self.features.iter().zip(&other.features) {
            if a.name != b.name {
                return Err(Error::SchemaMismatch(format!(
                    "feature `{}` vs `{}`",
                    a.name, b.name
                )));
            }
            match (&a.kind, &b.kind) {
                (FeatureKind::Numeric { .. }, FeatureKind::Numeric { .. }) => {}
                (
                    FeatureKind::Categorical { categories: ca },
                    FeatureKind::Categorical { categories: cb },
                ) => {
                    if ca != cb {
                        return Err(Error::SchemaMismatch(format!(
                            "feature `{}`: category lists differ",
                            a.name
                        )));
                    }
                }
                _ => {
                    return Err(Error::SchemaMismatch(format!(
                        "feature `{}`: numeric vs categorical",
                        a.name
                    )))
                }
            }
        }
        if self.classes != other.classes {
            return Err(Error::SchemaMismatch("class lists differ".into()));
        }
        Ok(())
    }
}

/// A complete fuzzy knowledge base: schema, per-numeric-feature partitions,
/// and a non-empty rule list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KbWire", into = "KbWire")]
pub struct KnowledgeBase {
    pub schema: Schema,
    pub partitions: Vec<LinguisticPartition>,
    pub rules: Vec<FuzzyRule>,
}

#[derive(Serialize, Deserialize)]
struct KbWire {
    features: Vec<FeatureSpec>,
    classes: Vec<String>,
    partitions: Vec<LinguisticPartition>,
    rules: Vec<FuzzyRule>,
}

impl TryFrom<KbWire> for KnowledgeBase {
    type Error = Error;

    fn try_from(w: KbWire) -> Result<Self> {
        let kb = KnowledgeBase {
            schema: Schema {
                features: w.features,
                classes: w.classes,
            },
            partitions: w.partitions,
            rules: w.rules,
        };
        kb.validate()?;
        Ok(kb)
    }
}

impl From<KnowledgeBase> for KbWire {
    fn from(kb: KnowledgeBase) -> Self {
        KbWire {
            features: kb.schema.features,
            classes: kb.schema.classes,
            partitions: kb.partitions,
            rules: kb.rules,
        }
    }
}

impl KnowledgeBase {
    pub fn new(
        schema: Schema,
        partitions: Vec<LinguisticPartition>,
        rules: Vec<FuzzyRule>,
    ) -> Result<Self> {
        let kb = KnowledgeBase {
            schema,
            partitions,
            rules,
        };
        kb.validate()?;
        Ok(kb)
    }

    pub fn validate(&self) -> Result<()> {
        self.schema.validate()?;
        let numeric = self.schema.numeric_positions();
        if self.partitions.len() != numeric.len() {
            return Err(Error::LengthMismatch(format!(
                "{} partitions for {} numeric features",
                self.partitions.len(),
                numeric.len()
            )));
        }
        for (slot, &feat_idx) in numeric.iter().enumerate() {
            let feature = &self.schema.features[feat_idx];
            let want = feature.num_linguistic().unwrap();
            let p = &self.partitions[slot];
            if p.len() != want {
                return Err(Error::LengthMismatch(format!(
                    "feature `{}`: partition has {} membership functions, expected {want}",
                    feature.name,
                    p.len()
                )));
            }
            for mf in &p.mfs {
                if !(mf.half_width > 0.0) {
                    return Err(Error::InvalidValue(format!(
                        "feature `{}`: half_width must be > 0",
                        feature.name
                    )));
                }
            }
            for pair in p.mfs.windows(2) {
                if pair[0].center > pair[1].center {
                    return Err(Error::InvalidValue(format!(
                        "feature `{}`: partition centers must be non-decreasing",
                        feature.name
                    )));
                }
            }
        }
        if self.rules.is_empty() {
            return Err(Error::InvalidValue("rule list must be non-empty".into()));
        }
        for (i, rule) in self.rules.iter().enumerate() {
            if rule.antecedents.len() != self.schema.features.len() {
                return Err(Error::LengthMismatch(format!(
                    "rule {i}: {} antecedents for {} features",
                    rule.antecedents.len(),
                    self.schema.features.len()
                )));
            }
            for (token, feature) in rule.antecedents.iter().zip(&self.schema.features) {
                match (token, &feature.kind) {
                    (AntecedentToken::DontCare, _) => {}
                    (
                        AntecedentToken::Linguistic(j),
                        FeatureKind::Numeric { num_linguistic, .. },
                    ) => {
                        if j >= num_linguistic {
                            return Err(Error::InvalidValue(format!(
                                "rule {i}: linguistic index {j} out of range for `{}`",
                                feature.name
                            )));
                        }
                    }
                    (AntecedentToken::Category(k), FeatureKind::Categorical { categories }) => {
                        if *k >= categories.len() {
                            return Err(Error::InvalidValue(format!(
                                "rule {i}: category index {k} out of range for `{}`",
                                feature.name
                            )));
                        }
                    }
                    _ => {
                        return Err(Error::InvalidValue(format!(
                            "rule {i}: token kind does not match feature `{}`",
                            feature.name
                        )))
                    }
                }
            }
            if rule.consequent >= self.schema.classes.len() {
                return Err(Error::InvalidValue(format!(
                    "rule {i}: class index {} out of range",
                    rule.consequent
                )));
            }
        }
        Ok(())
    }

    /// The partition attached to the numeric feature at `feature_idx`.
    pub fn partition_for_feature(&self, feature_idx: usize) -> Option<&LinguisticPartition> {
        self.schema
            .partition_slot(feature_idx)
            .map(|slot| &self.partitions[slot])
    }

    /// Parses and validates a knowledge base from its JSON document form.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("knowledge base serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_feature_schema() -> Schema {
        Schema::new(
            vec![
                FeatureSpec::numeric("x", 0.0, 10.0, 3).unwrap(),
                FeatureSpec::categorical("color", vec!["r".into(), "g".into()]).unwrap(),
            ],
            vec!["a".into(), "b".into()],
        )
        .unwrap()
    }

    fn small_kb() -> KnowledgeBase {
        let schema = two_feature_schema();
        let partition = LinguisticPartition::new(vec![
            TriangularMF::new(0.0, 5.0),
            TriangularMF::new(5.0, 5.0),
            TriangularMF::new(10.0, 5.0),
        ]);
        KnowledgeBase::new(
            schema,
            vec![partition],
            vec![FuzzyRule::new(
                vec![AntecedentToken::Linguistic(1), AntecedentToken::Category(0)],
                0,
            )],
        )
        .unwrap()
    }

    #[test]
    fn membership_apex_boundary_midpoint() {
        let mf = TriangularMF::new(5.0, 2.0);
        assert_eq!(mf.membership(5.0), 1.0);
        assert_eq!(mf.membership(7.0), 0.0);
        assert_eq!(mf.membership(6.0), 0.5);
    }

    #[test]
    fn membership_outside_support_is_zero() {
        let mf = TriangularMF::new(5.0, 2.0);
        assert_eq!(mf.membership(100.0), 0.0);
        assert_eq!(mf.membership(-100.0), 0.0);
    }

    #[test]
    fn numeric_spec_rejects_bad_range() {
        assert!(FeatureSpec::numeric("x", 1.0, 1.0, 3).is_err());
        assert!(FeatureSpec::numeric("x", 2.0, 1.0, 3).is_err());
        assert!(FeatureSpec::numeric("x", 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn categorical_spec_rejects_duplicates() {
        assert!(FeatureSpec::categorical("c", vec!["x".into(), "x".into()]).is_err());
        assert!(FeatureSpec::categorical("c", vec![]).is_err());
    }

    #[test]
    fn repair_sorts_centers() {
        let feature = FeatureSpec::numeric("x", 0.0, 10.0, 3).unwrap();
        let p = LinguisticPartition::new(vec![
            TriangularMF::new(5.0, 1.0),
            TriangularMF::new(2.0, 1.0),
            TriangularMF::new(8.0, 1.0),
        ]);
        let fixed = repair_partition(&p, &feature);
        let centers: Vec<f64> = fixed.mfs.iter().map(|m| m.center).collect();
        assert_eq!(centers, vec![2.0, 5.0, 8.0]);
    }

    #[test]
    fn repair_clamps_width_to_floor() {
        let feature = FeatureSpec::numeric("x", 0.0, 10.0, 1).unwrap();
        let p = LinguisticPartition::new(vec![TriangularMF::new(5.0, -1.0)]);
        let fixed = repair_partition(&p, &feature);
        assert_eq!(fixed.mfs[0].half_width, 0.1);
    }

    #[test]
    fn repair_is_identity_on_valid_partition() {
        let feature = FeatureSpec::numeric("x", 0.0, 10.0, 3).unwrap();
        let p = LinguisticPartition::new(vec![
            TriangularMF::new(0.0, 5.0),
            TriangularMF::new(5.0, 5.0),
            TriangularMF::new(10.0, 5.0),
        ]);
        assert_eq!(repair_partition(&p, &feature), p);
    }

    #[test]
    fn kb_validation_catches_bad_rule() {
        let mut kb = small_kb();
        kb.rules[0].consequent = 9;
        assert!(kb.validate().is_err());
        let mut kb = small_kb();
        kb.rules[0].antecedents[0] = AntecedentToken::Linguistic(3);
        assert!(kb.validate().is_err());
        let mut kb = small_kb();
        kb.rules.clear();
        assert!(kb.validate().is_err());
    }

    #[test]
    fn kb_json_round_trip() {
        let mut kb = small_kb();
        // full round-trip precision, including awkward shortest-form floats
        kb.partitions[0].mfs[1].center = 0.966_666_666_666_666_7;
        kb.partitions[0].mfs[1].half_width = 5.000_000_000_000_001;
        let text = kb.to_json();
        let back = KnowledgeBase::from_json(&text).unwrap();
        assert_eq!(back, kb);
        assert_eq!(
            back.partitions[0].mfs[1].center.to_bits(),
            kb.partitions[0].mfs[1].center.to_bits()
        );
    }

    #[test]
    fn kb_json_token_encoding() {
        let mut kb = small_kb();
        kb.rules[0].antecedents[1] = AntecedentToken::DontCare;
        let text = kb.to_json();
        assert!(text.contains("\"lv\": 1"));
        assert!(text.contains("\"dc\""));
        assert!(text.contains("\"class\": 0"));
    }

    #[test]
    fn kb_json_rejects_invalid_document() {
        let kb = small_kb();
        let text = kb.to_json().replace("\"class\": 0", "\"class\": 7");
        assert!(KnowledgeBase::from_json(&text).is_err());
    }

    #[test]
    fn schema_compatibility() {
        let a = two_feature_schema();
        let mut b = a.clone();
        assert!(a.compatible_with(&b).is_ok());
        // numeric bounds may differ
        b.features[0] = FeatureSpec::numeric("x", -5.0, 20.0, 5).unwrap();
        assert!(a.compatible_with(&b).is_ok());
        // class lists may not
        b.classes = vec!["a".into()];
        assert!(a.compatible_with(&b).is_err());
        let mut c = a.clone();
        c.features[1] = FeatureSpec::categorical("color", vec!["r".into()]).unwrap();
        assert!(a.compatible_with(&c).is_err());
    }

    #[test]
    fn partition_slot_maps_numeric_features() {
        let schema = Schema::new(
            vec![
                FeatureSpec::categorical("c", vec!["x".into()]).unwrap(),
                FeatureSpec::numeric("n1", 0.0, 1.0, 3).unwrap(),
                FeatureSpec::numeric("n2", 0.0, 1.0, 2).unwrap(),
            ],
            vec!["a".into()],
        )
        .unwrap();
        assert_eq!(schema.partition_slot(0), None);
        assert_eq!(schema.partition_slot(1), Some(0));
        assert_eq!(schema.partition_slot(2), Some(1));
        assert_eq!(schema.mf_gene_len(), 10);
    }
}
