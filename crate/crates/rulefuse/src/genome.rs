//! Real-coded string form of a knowledge base.
//!
//! Each individual is a variable-length list of rule genes plus a
//! fixed-length membership segment laid out `(c_11, w_11, c_12, w_12, ...)`
//! over the numeric features. Antecedent and class codes are stored as
//! reals so arithmetic blending applies uniformly to both segments;
//! rounding to discrete tokens happens only at decode time. The code value
//! one past the last index (`L_i` for numeric, `|categories|` for
//! categorical) decodes to don't-care.

use rand::Rng;

use crate::error::{Error, Result};
use crate::kb::{
    repair_partition, AntecedentToken, FeatureKind, FuzzyRule, KnowledgeBase, LinguisticPartition,
    Schema, TriangularMF, WIDTH_FLOOR_FRACTION,
};

/// One rule as reals: one antecedent code per feature, then the class code.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleGene {
    pub codes: Vec<f64>,
}

impl RuleGene {
    pub fn class_code(&self) -> f64 {
        *self.codes.last().expect("rule gene has a class code")
    }

    pub fn antecedent_codes(&self) -> &[f64] {
        &self.codes[..self.codes.len() - 1]
    }
}

/// The evolutionary representation of one knowledge base.
#[derive(Debug, Clone, PartialEq)]
pub struct Genome {
    pub rule_genes: Vec<RuleGene>,
    pub mf_genes: Vec<f64>,
}

impl Genome {
    pub fn rule_count(&self) -> usize {
        self.rule_genes.len()
    }
}

/// Per-gene intervals: membership genes bounded by their feature's range
/// (centers) and `[w_min, range]` (widths); rule codes by `[0, L_i]`,
/// `[0, |categories|]`, or `[0, |classes| - 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneBounds {
    pub mf: Vec<(f64, f64)>,
    /// One interval per antecedent code plus one for the class code.
    pub rule_codes: Vec<(f64, f64)>,
    pub max_rules: usize,
}

impl GeneBounds {
    pub fn from_schema(schema: &Schema, max_rules: usize) -> Result<Self> {
        if max_rules < 1 {
            return Err(Error::InvalidValue("max_rules must be >= 1".into()));
        }
        let mut mf = Vec::with_capacity(schema.mf_gene_len());
        let mut rule_codes = Vec::with_capacity(schema.features.len() + 1);
        for feature in &schema.features {
            match &feature.kind {
                FeatureKind::Numeric {
                    lower,
                    upper,
                    num_linguistic,
                } => {
                    let range = upper - lower;
                    let w_min = WIDTH_FLOOR_FRACTION * range;
                    for _ in 0..*num_linguistic {
                        mf.push((*lower, *upper));
                        mf.push((w_min, range));
                    }
                    rule_codes.push((0.0, *num_linguistic as f64));
                }
                FeatureKind::Categorical { categories } => {
                    rule_codes.push((0.0, categories.len() as f64));
                }
            }
        }
        if schema.classes.len() < 2 {
            return Err(Error::InvalidValue(
                "class code needs at least two classes".into(),
            ));
        }
        rule_codes.push((0.0, (schema.classes.len() - 1) as f64));
        let bounds = GeneBounds {
            mf,
            rule_codes,
            max_rules,
        };
        for &(lo, hi) in bounds.mf.iter().chain(&bounds.rule_codes) {
            if !(lo < hi) {
                return Err(Error::InvalidValue(format!(
                    "degenerate gene interval [{lo}, {hi}]"
                )));
            }
        }
        Ok(bounds)
    }
}

/// Mirrors a knowledge base into its genome form; lossless up to
/// repair-normalization.
pub fn encode(kb: &KnowledgeBase) -> Genome {
    let n_features = kb.schema.features.len();
    let rule_genes = kb
        .rules
        .iter()
        .map(|rule| {
            let mut codes = Vec::with_capacity(n_features + 1);
            for (token, feature) in rule.antecedents.iter().zip(&kb.schema.features) {
                codes.push(match token {
                    AntecedentToken::Linguistic(j) => *j as f64,
                    AntecedentToken::Category(k) => *k as f64,
                    AntecedentToken::DontCare => feature.dont_care_code() as f64,
                });
            }
            codes.push(rule.consequent as f64);
            RuleGene { codes }
        })
        .collect();
    let mut mf_genes = Vec::with_capacity(kb.schema.mf_gene_len());
    for partition in &kb.partitions {
        for mf in &partition.mfs {
            mf_genes.push(mf.center);
            mf_genes.push(mf.half_width);
        }
    }
    Genome {
        rule_genes,
        mf_genes,
    }
}

/// Rebuilds a knowledge base from a genome: codes rounded to the nearest
/// integer then clamped into range, partitions passed through
/// [`repair_partition`]. Total for any finite gene values.
pub fn decode(genome: &Genome, schema: &Schema) -> Result<KnowledgeBase> {
    let n_features = schema.features.len();
    if genome.mf_genes.len() != schema.mf_gene_len() {
        return Err(Error::LengthMismatch(format!(
            "{} membership genes, schema expects {}",
            genome.mf_genes.len(),
            schema.mf_gene_len()
        )));
    }
    if genome.rule_genes.is_empty() {
        return Err(Error::LengthMismatch("genome has no rule genes".into()));
    }

    let mut rules = Vec::with_capacity(genome.rule_genes.len());
    for gene in &genome.rule_genes {
        if gene.codes.len() != n_features + 1 {
            return Err(Error::LengthMismatch(format!(
                "rule gene has {} codes, schema expects {}",
                gene.codes.len(),
                n_features + 1
            )));
        }
        let antecedents = gene
            .antecedent_codes()
            .iter()
            .zip(&schema.features)
            .map(|(code, feature)| {
                let sentinel = feature.dont_care_code();
                let idx = round_clamp(*code, sentinel);
                if idx == sentinel {
                    AntecedentToken::DontCare
                } else if feature.is_numeric() {
                    AntecedentToken::Linguistic(idx)
                } else {
                    AntecedentToken::Category(idx)
                }
            })
            .collect();
        let consequent = round_clamp(gene.class_code(), schema.classes.len() - 1);
        rules.push(FuzzyRule::new(antecedents, consequent));
    }

    let mut partitions = Vec::new();
    let mut offset = 0;
    for &feat_idx in &schema.numeric_positions() {
        let feature = &schema.features[feat_idx];
        let l = feature.num_linguistic().unwrap();
        let mfs = genome.mf_genes[offset..offset + 2 * l]
            .chunks_exact(2)
            .map(|cw| TriangularMF::new(cw[0], cw[1]))
            .collect();
        offset += 2 * l;
        partitions.push(repair_partition(&LinguisticPartition::new(mfs), feature));
    }

    KnowledgeBase::new(schema.clone(), partitions, rules)
}

fn round_clamp(code: f64, max: usize) -> usize {
    let rounded = code.round();
    if rounded <= 0.0 {
        0
    } else if rounded >= max as f64 {
        max
    } else {
        rounded as usize
    }
}

/// Draws every gene uniformly from its bounds interval.
pub fn random_genome<R: Rng>(
    bounds: &GeneBounds,
    rule_count: usize,
    rng: &mut R,
) -> Result<Genome> {
    if rule_count < 1 || rule_count > bounds.max_rules {
        return Err(Error::InvalidValue(format!(
            "rule_count {rule_count} outside [1, {}]",
            bounds.max_rules
        )));
    }
    let rule_genes = (0..rule_count)
        .map(|_| random_rule_gene(bounds, rng))
        .collect();
    let mf_genes = bounds
        .mf
        .iter()
        .map(|&(lo, hi)| rng.gen_range(lo..=hi))
        .collect();
    Ok(Genome {
        rule_genes,
        mf_genes,
    })
}

/// A single uniformly random rule gene.
pub fn random_rule_gene<R: Rng>(bounds: &GeneBounds, rng: &mut R) -> RuleGene {
    RuleGene {
        codes: bounds
            .rule_codes
            .iter()
            .map(|&(lo, hi)| rng.gen_range(lo..=hi))
            .collect(),
    }
}

/// Clamps every gene into its bounds interval and caps the rule list at
/// `max_rules` by truncation. Idempotent.
pub fn repair_genome(genome: &Genome, bounds: &GeneBounds) -> Genome {
    let mut rule_genes: Vec<RuleGene> = genome
        .rule_genes
        .iter()
        .map(|gene| RuleGene {
            codes: gene
                .codes
                .iter()
                .zip(&bounds.rule_codes)
                .map(|(c, &(lo, hi))| c.clamp(lo, hi))
                .collect(),
        })
        .collect();
    rule_genes.truncate(bounds.max_rules);
    let mf_genes = genome
        .mf_genes
        .iter()
        .zip(&bounds.mf)
        .map(|(g, &(lo, hi))| g.clamp(lo, hi))
        .collect();
    Genome {
        rule_genes,
        mf_genes,
    }
}
