//! The integration engine: a (μ + offspring) evolution strategy over
//! subpopulations with arithmetical elite/mean crossover, time-variant
//! membership mutation, and insertion/deletion mutation of the rule list.
//!
//! Every generation, individuals are reassigned to `S` contiguous
//! subpopulations in fitness-sorted order. Each subpopulation contributes
//! one offspring per non-elite slot: the slot's individual donates the rule
//! tail, the subpopulation elite and the mean of its non-elites donate the
//! blended head and membership segment. Survivors are the best μ of parents
//! and offspring combined, so best fitness never decreases.

mod ga;

pub use ga::{baseline_ga_step, run_baseline_ga, GaConfig};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::fitness::{evaluate_kb, FitnessReport};
use crate::genome::{
    decode, encode, random_genome, random_rule_gene, repair_genome, GeneBounds, Genome, RuleGene,
};
use crate::kb::{KnowledgeBase, Schema};

/// A genome with its cached evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    pub report: Option<FitnessReport>,
}

impl Individual {
    pub fn unevaluated(genome: Genome) -> Self {
        Individual {
            genome,
            report: None,
        }
    }

    fn fitness(&self) -> f64 {
        self.report.expect("fitness cache present").fitness
    }
}

/// μ individuals partitioned contiguously into `subpop_count` groups.
#[derive(Debug, Clone)]
pub struct Population {
    pub individuals: Vec<Individual>,
    pub subpop_count: usize,
}

impl Population {
    /// Contiguous index ranges of the subpopulations; sizes differ by at
    /// most one, larger groups first.
    pub fn subpop_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mu = self.individuals.len();
        let s = self.subpop_count;
        let base = mu / s;
        let extra = mu % s;
        let mut ranges = Vec::with_capacity(s);
        let mut start = 0;
        for k in 0..s {
            let size = base + usize::from(k < extra);
            ranges.push(start..start + size);
            start += size;
        }
        ranges
    }

    /// Index of the best-fitness individual, lowest index on ties.
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.individuals.len() {
            if self.individuals[i].fitness() > self.individuals[best].fitness() {
                best = i;
            }
        }
        best
    }
}

/// Engine parameters. Missing fields in a JSON config document take these
/// defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionConfig {
    /// Population size μ.
    pub mu: usize,
    /// Subpopulation count S.
    pub subpops: usize,
    /// Generation count T.
    pub generations: usize,
    /// Complexity exponent α in the fitness.
    pub alpha: f64,
    /// Per-gene mutation probability for the membership segment.
    pub p_mf_mutation: f64,
    /// Decay degree b of the time-variant mutation step.
    pub tvm_degree: f64,
    /// Rule insertion probability per offspring.
    pub p_insert: f64,
    /// Rule deletion probability per offspring.
    pub p_delete: f64,
    /// Interval the crossover blend weight λ is drawn from.
    pub lambda_range: (f64, f64),
    /// Rule-list cap; `None` derives 3x the mean source rule count.
    pub max_rules: Option<usize>,
    pub seed: u64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            mu: 100,
            subpops: 10,
            generations: 300,
            alpha: 0.01,
            p_mf_mutation: 0.1,
            tvm_degree: 5.0,
            p_insert: 0.05,
            p_delete: 0.05,
            lambda_range: (0.0, 1.0),
            max_rules: None,
            seed: 42,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        fn field(field: &'static str, why: impl Into<String>) -> Error {
            Error::InvalidConfig {
                field,
                why: why.into(),
            }
        }
        if self.subpops < 1 {
            return Err(field("subpops", "must be >= 1"));
        }
        if self.mu < 2 * self.subpops {
            return Err(field(
                "mu",
                format!("must be >= 2 * subpops = {}", 2 * self.subpops),
            ));
        }
        if self.generations < 1 {
            return Err(field("generations", "must be >= 1"));
        }
        for (name, p) in [
            ("p_mf_mutation", self.p_mf_mutation),
            ("p_insert", self.p_insert),
            ("p_delete", self.p_delete),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(field(name, "must lie in [0, 1]"));
            }
        }
        if !(self.tvm_degree > 0.0) {
            return Err(field("tvm_degree", "must be > 0"));
        }
        if !(self.lambda_range.0 < self.lambda_range.1) {
            return Err(field(
                "lambda_range",
                "lower bound must be below upper bound",
            ));
        }
        if !self.alpha.is_finite() {
            return Err(field("alpha", "must be finite"));
        }
        if let Some(m) = self.max_rules {
            if m < 1 {
                return Err(field("max_rules", "must be >= 1"));
            }
        }
        Ok(())
    }

    /// Effective rule cap: configured value, or 3x the mean source count.
    pub fn effective_max_rules(&self, source_rule_counts: &[usize]) -> usize {
        self.max_rules.unwrap_or_else(|| {
            let mean = source_rule_counts.iter().sum::<usize>() as f64
                / source_rule_counts.len().max(1) as f64;
            ((3.0 * mean).round() as usize).max(1)
        })
    }
}

/// Per-generation summary of the population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_fitness: f64,
    pub best_accuracy: f64,
    pub best_complexity: f64,
    pub best_rule_count: usize,
    pub mean_fitness: f64,
}

/// Everything a fitness evaluation needs besides the genome.
pub struct EvalContext<'a> {
    pub schema: &'a Schema,
    pub data: &'a LabeledDataset,
    pub source_rule_counts: &'a [usize],
    pub alpha: f64,
}

/// Seeds the population: the P sources first, then their union-merge, then
/// random genomes with rule counts drawn uniformly in `[1, mean source
/// count]`.
pub fn init_population<R: Rng>(
    sources: &[KnowledgeBase],
    bounds: &GeneBounds,
    cfg: &EvolutionConfig,
    rng: &mut R,
) -> Result<Population> {
    if sources.is_empty() {
        return Err(Error::EmptySources);
    }
    if cfg.mu < sources.len() + 1 {
        return Err(Error::InvalidConfig {
            field: "mu",
            why: format!("must be >= source count + 1 = {}", sources.len() + 1),
        });
    }
    let mut individuals = Vec::with_capacity(cfg.mu);
    for kb in sources {
        individuals.push(Individual::unevaluated(repair_genome(&encode(kb), bounds)));
    }
    individuals.push(Individual::unevaluated(repair_genome(
        &merged_genome(sources),
        bounds,
    )));

    let mean = sources.iter().map(|kb| kb.rules.len()).sum::<usize>() as f64 / sources.len() as f64;
    let rule_cap = (mean.round() as usize).clamp(1, bounds.max_rules);
    while individuals.len() < cfg.mu {
        let rule_count = rng.gen_range(1..=rule_cap);
        individuals.push(Individual::unevaluated(random_genome(
            bounds, rule_count, rng,
        )?));
    }
    Ok(Population {
        individuals,
        subpop_count: cfg.subpops,
    })
}

/// Union of all source rules (exact duplicates dropped) over partitions
/// averaged componentwise across the sources.
fn merged_genome(sources: &[KnowledgeBase]) -> Genome {
    let mut rules = Vec::new();
    for kb in sources {
        for rule in &kb.rules {
            if !rules.contains(rule) {
                rules.push(rule.clone());
            }
        }
    }
    let merged = KnowledgeBase {
        schema: sources[0].schema.clone(),
        partitions: sources[0].partitions.clone(),
        rules,
    };
    let mut genome = encode(&merged);
    let n = sources.len() as f64;
    for (i, gene) in genome.mf_genes.iter_mut().enumerate() {
        *gene = sources.iter().map(|kb| encode_mf_gene(kb, i)).sum::<f64>() / n;
    }
    genome
}

fn encode_mf_gene(kb: &KnowledgeBase, flat_idx: usize) -> f64 {
    let mut i = flat_idx;
    for partition in &kb.partitions {
        if i < 2 * partition.len() {
            let mf = &partition.mfs[i / 2];
            return if i % 2 == 0 { mf.center } else { mf.half_width };
        }
        i -= 2 * partition.len();
    }
    unreachable!("flat membership index out of range")
}

/// Elite index within `sub`, plus the virtual parent built from the
/// non-elites: componentwise mean of their membership segments, and of
/// their rule genes truncated to the shortest non-elite rule list.
pub fn subpop_elite_and_mean(sub: &[Individual]) -> Result<(usize, Vec<f64>, Vec<RuleGene>)> {
    if sub.len() < 2 {
        return Err(Error::InvalidValue(
            "subpopulation needs at least two members".into(),
        ));
    }
    let mut elite = 0;
    for i in 1..sub.len() {
        if sub[i].fitness() > sub[elite].fitness() {
            elite = i;
        }
    }
    let others: Vec<&Individual> = sub
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != elite)
        .map(|(_, ind)| ind)
        .collect();
    let n = others.len() as f64;

    let mf_len = others[0].genome.mf_genes.len();
    let mut mean_mf = vec![0.0; mf_len];
    for ind in &others {
        for (acc, g) in mean_mf.iter_mut().zip(&ind.genome.mf_genes) {
            *acc += g;
        }
    }
    for acc in &mut mean_mf {
        *acc /= n;
    }

    let min_rules = others
        .iter()
        .map(|ind| ind.genome.rule_count())
        .min()
        .unwrap();
    let code_len = others[0].genome.rule_genes[0].codes.len();
    let mut mean_rules = Vec::with_capacity(min_rules);
    for r in 0..min_rules {
        let mut codes = vec![0.0; code_len];
        for ind in &others {
            for (acc, c) in codes.iter_mut().zip(&ind.genome.rule_genes[r].codes) {
                *acc += c;
            }
        }
        for acc in &mut codes {
            *acc /= n;
        }
        mean_rules.push(RuleGene { codes });
    }
    Ok((elite, mean_mf, mean_rules))
}

/// Arithmetical crossover of the elite against the virtual parent, keeping
/// the crossed-over slot's rule-list length: the first
/// `min(|elite|, |mean|, |parent|)` rule genes and the whole membership
/// segment are `λ·elite + (1-λ)·mean` blends, the remaining rule genes are
/// copied verbatim from `parent`.
pub fn sbmac_offspring(
    elite: &Genome,
    mean_mf: &[f64],
    mean_rules: &[RuleGene],
    parent: &Genome,
    lambda: f64,
    bounds: &GeneBounds,
) -> Genome {
    let blend = |e: f64, m: f64| lambda * e + (1.0 - lambda) * m;
    let mf_genes: Vec<f64> = elite
        .mf_genes
        .iter()
        .zip(mean_mf)
        .map(|(&e, &m)| blend(e, m))
        .collect();

    let blended_len = elite
        .rule_count()
        .min(mean_rules.len())
        .min(parent.rule_count());
    let mut rule_genes = Vec::with_capacity(parent.rule_count());
    for i in 0..parent.rule_count() {
        if i < blended_len {
            let codes = elite.rule_genes[i]
                .codes
                .iter()
                .zip(&mean_rules[i].codes)
                .map(|(&e, &m)| blend(e, m))
                .collect();
            rule_genes.push(RuleGene { codes });
        } else {
            rule_genes.push(parent.rule_genes[i].clone());
        }
    }
    repair_genome(
        &Genome {
            rule_genes,
            mf_genes,
        },
        bounds,
    )
}

/// Decaying mutation step: `y * (1 - r^((1 - t/T)^b))`. Full steps up to
/// `y` are possible early on; the step is exactly 0 at `t = T`.
pub fn tvm_delta(t: usize, total: usize, y: f64, b: f64, r: f64) -> f64 {
    let exponent = (1.0 - t as f64 / total as f64).powf(b);
    y * (1.0 - r.powf(exponent))
}

/// Mutates each membership gene with probability `p_mf_mutation`, stepping
/// toward a bound by a fresh [`tvm_delta`]; rule genes are untouched and
/// the result stays in bounds by construction.
pub fn apply_tvm<R: Rng>(
    genome: &Genome,
    bounds: &GeneBounds,
    t: usize,
    total: usize,
    cfg: &EvolutionConfig,
    rng: &mut R,
) -> Genome {
    let mut out = genome.clone();
    for (gene, &(lo, hi)) in out.mf_genes.iter_mut().zip(&bounds.mf) {
        if rng.gen::<f64>() >= cfg.p_mf_mutation {
            continue;
        }
        let upward: bool = rng.gen();
        let r: f64 = rng.gen();
        if upward {
            *gene += tvm_delta(t, total, hi - *gene, cfg.tvm_degree, r);
        } else {
            *gene -= tvm_delta(t, total, *gene - lo, cfg.tvm_degree, r);
        }
    }
    out
}

/// With probability `p_insert`, splices a uniformly random rule gene into a
/// uniformly random position (skipped at the rule cap); independently with
/// probability `p_delete`, removes a uniformly random rule gene (skipped at
/// a single rule). The membership segment is untouched.
pub fn insertion_deletion_mutate<R: Rng>(
    genome: &Genome,
    bounds: &GeneBounds,
    cfg: &EvolutionConfig,
    rng: &mut R,
) -> Genome {
    let mut out = genome.clone();
    if rng.gen::<f64>() < cfg.p_insert && out.rule_count() < bounds.max_rules {
        let pos = rng.gen_range(0..=out.rule_count());
        out.rule_genes.insert(pos, random_rule_gene(bounds, rng));
    }
    if rng.gen::<f64>() < cfg.p_delete && out.rule_count() > 1 {
        let pos = rng.gen_range(0..out.rule_count());
        out.rule_genes.remove(pos);
    }
    out
}

/// Fills every missing fitness cache. Evaluations run in parallel but each
/// report is a pure function of its genome, so results match sequential
/// evaluation exactly.
pub fn evaluate_individuals(individuals: &mut [Individual], ctx: &EvalContext) -> Result<()> {
    individuals
        .par_iter_mut()
        .filter(|ind| ind.report.is_none())
        .try_for_each(|ind| {
            let kb = decode(&ind.genome, ctx.schema)?;
            ind.report = Some(evaluate_kb(
                &kb,
                ctx.data,
                ctx.source_rule_counts,
                ctx.alpha,
            )?);
            Ok(())
        })
}

pub fn evaluate_population(pop: &mut Population, ctx: &EvalContext) -> Result<()> {
    evaluate_individuals(&mut pop.individuals, ctx)
}

/// One subpopulation's contribution to a generation: exactly one offspring
/// per non-elite slot. The slot's individual is the tail-donating parent;
/// each offspring draws a fresh blend weight λ, then passes through the
/// time-variant and insertion/deletion mutations.
pub fn subpop_offspring<R: Rng>(
    sub: &[Individual],
    bounds: &GeneBounds,
    t: usize,
    cfg: &EvolutionConfig,
    rng: &mut R,
) -> Result<Vec<Individual>> {
    let (elite, mean_mf, mean_rules) = subpop_elite_and_mean(sub)?;
    let mut offspring = Vec::with_capacity(sub.len() - 1);
    for (slot, parent) in sub.iter().enumerate() {
        if slot == elite {
            continue;
        }
        let lambda = rng.gen_range(cfg.lambda_range.0..=cfg.lambda_range.1);
        let child = sbmac_offspring(
            &sub[elite].genome,
            &mean_mf,
            &mean_rules,
            &parent.genome,
            lambda,
            bounds,
        );
        let child = apply_tvm(&child, bounds, t, cfg.generations, cfg, rng);
        let child = insertion_deletion_mutate(&child, bounds, cfg, rng);
        offspring.push(Individual::unevaluated(child));
    }
    Ok(offspring)
}

/// Elitist plus-selection: the best μ of parents and offspring survive,
/// ties resolved older-first then lower index.
pub fn survivor_selection(parents: Population, offspring: Vec<Individual>) -> Population {
    let mu = parents.individuals.len();
    let mut pool = parents.individuals;
    pool.extend(offspring);
    pool.sort_by(|a, b| b.fitness().total_cmp(&a.fitness()));
    pool.truncate(mu);
    Population {
        individuals: pool,
        subpop_count: parents.subpop_count,
    }
}

fn collect_stats(pop: &Population, generation: usize) -> GenerationStats {
    let best = &pop.individuals[pop.best_index()];
    let report = best.report.expect("evaluated");
    let mean_fitness =
        pop.individuals.iter().map(Individual::fitness).sum::<f64>() / pop.individuals.len() as f64;
    GenerationStats {
        generation,
        best_fitness: report.fitness,
        best_accuracy: report.accuracy,
        best_complexity: report.complexity,
        best_rule_count: best.genome.rule_count(),
        mean_fitness,
    }
}

/// Runs the full integration loop and returns the decoded best individual
/// with one stats record per generation. Deterministic given `cfg.seed`.
pub fn run_integration(
    sources: &[KnowledgeBase],
    data: &LabeledDataset,
    cfg: &EvolutionConfig,
) -> Result<(KnowledgeBase, Vec<GenerationStats>)> {
    run_integration_with(sources, data, cfg, |_| {})
}

/// [`run_integration`] with an observer invoked once per generation, in
/// order.
pub fn run_integration_with<F: FnMut(&GenerationStats)>(
    sources: &[KnowledgeBase],
    data: &LabeledDataset,
    cfg: &EvolutionConfig,
    mut observer: F,
) -> Result<(KnowledgeBase, Vec<GenerationStats>)> {
    cfg.validate()?;
    let (schema, source_counts, bounds) = integration_setup(sources, data, cfg)?;
    let ctx = EvalContext {
        schema,
        data,
        source_rule_counts: &source_counts,
        alpha: cfg.alpha,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop = init_population(sources, &bounds, cfg, &mut rng)?;
    evaluate_population(&mut pop, &ctx)?;

    let mut best_ever = pop.individuals[pop.best_index()].clone();
    let mut history = Vec::with_capacity(cfg.generations);
    for t in 1..=cfg.generations {
        // reassign subpopulations in fitness-sorted order
        pop.individuals
            .sort_by(|a, b| b.fitness().total_cmp(&a.fitness()));

        let mut offspring = Vec::with_capacity(pop.individuals.len() - pop.subpop_count);
        for range in pop.subpop_ranges() {
            offspring.extend(subpop_offspring(
                &pop.individuals[range],
                &bounds,
                t,
                cfg,
                &mut rng,
            )?);
        }
        evaluate_individuals(&mut offspring, &ctx)?;
        pop = survivor_selection(pop, offspring);

        let best = &pop.individuals[pop.best_index()];
        if best.fitness() > best_ever.fitness() {
            best_ever = best.clone();
        }
        let stats = collect_stats(&pop, t);
        observer(&stats);
        history.push(stats);
    }
    Ok((decode(&best_ever.genome, schema)?, history))
}

/// Shared validation and derivation for the engine entry points: the common
/// schema, the source rule counts, and the gene bounds under the effective
/// rule cap.
pub(crate) fn integration_setup<'a>(
    sources: &'a [KnowledgeBase],
    data: &LabeledDataset,
    cfg: &EvolutionConfig,
) -> Result<(&'a Schema, Vec<usize>, GeneBounds)> {
    if sources.is_empty() {
        return Err(Error::EmptySources);
    }
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let schema = &sources[0].schema;
    for kb in &sources[1..] {
        if kb.schema != *schema {
            return Err(Error::SchemaMismatch(
                "source knowledge bases disagree on schema".into(),
            ));
        }
    }
    schema.compatible_with(&data.schema)?;
    let source_counts: Vec<usize> = sources.iter().map(|kb| kb.rules.len()).collect();
    let bounds = GeneBounds::from_schema(schema, cfg.effective_max_rules(&source_counts))?;
    Ok((schema, source_counts, bounds))
}
