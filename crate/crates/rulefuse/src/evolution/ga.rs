//! A canonical simple genetic algorithm over the same genome and fitness,
//! kept around as the comparison baseline: fitness-proportionate selection,
//! one-point crossover at a rule-gene boundary with the membership segment
//! swapped as a block, per-gene uniform-reset mutation, and elitism of one.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::LabeledDataset;
use crate::error::Result;
use crate::genome::{repair_genome, GeneBounds, Genome};
use crate::kb::KnowledgeBase;

use super::{
    collect_stats, decode, evaluate_population, init_population, integration_setup, EvalContext,
    EvolutionConfig, GenerationStats, Individual, Population,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub crossover_rate: f64,
    /// Per-gene probability of a uniform reset within the gene's bounds.
    pub mutation_rate: f64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            crossover_rate: 0.9,
            mutation_rate: 0.02,
        }
    }
}

/// One generational step: keeps the best parent, refills the rest of the
/// population with crossed-over, mutated children of roulette-selected
/// parents. Children come back unevaluated.
pub fn baseline_ga_step<R: Rng>(
    pop: &Population,
    ga: &GaConfig,
    bounds: &GeneBounds,
    rng: &mut R,
) -> Population {
    let mu = pop.individuals.len();
    let elite = pop.individuals[pop.best_index()].clone();

    let mut next = Vec::with_capacity(mu);
    next.push(elite);
    while next.len() < mu {
        let a = &pop.individuals[roulette(pop, rng)].genome;
        let b = &pop.individuals[roulette(pop, rng)].genome;
        let (mut c1, mut c2) = if rng.gen::<f64>() < ga.crossover_rate {
            one_point_crossover(a, b, rng)
        } else {
            (a.clone(), b.clone())
        };
        uniform_reset_mutation(&mut c1, bounds, ga.mutation_rate, rng);
        uniform_reset_mutation(&mut c2, bounds, ga.mutation_rate, rng);
        next.push(Individual::unevaluated(repair_genome(&c1, bounds)));
        if next.len() < mu {
            next.push(Individual::unevaluated(repair_genome(&c2, bounds)));
        }
    }
    Population {
        individuals: next,
        subpop_count: pop.subpop_count,
    }
}

/// Fitness-proportionate parent pick; uniform fallback when total fitness
/// is zero.
fn roulette<R: Rng>(pop: &Population, rng: &mut R) -> usize {
    let total: f64 = pop.individuals.iter().map(|ind| ind.fitness()).sum();
    if total <= 0.0 {
        return rng.gen_range(0..pop.individuals.len());
    }
    let mut ticket = rng.gen::<f64>() * total;
    for (i, ind) in pop.individuals.iter().enumerate() {
        ticket -= ind.fitness();
        if ticket < 0.0 {
            return i;
        }
    }
    pop.individuals.len() - 1
}

/// Cuts both rule lists at the same boundary `k <= min(|a|, |b|)` and swaps
/// the tails; the membership segment travels with the tail.
fn one_point_crossover<R: Rng>(a: &Genome, b: &Genome, rng: &mut R) -> (Genome, Genome) {
    let k = rng.gen_range(0..=a.rule_count().min(b.rule_count()));
    let c1 = Genome {
        rule_genes: a.rule_genes[..k]
            .iter()
            .chain(&b.rule_genes[k..])
            .cloned()
            .collect(),
        mf_genes: b.mf_genes.clone(),
    };
    let c2 = Genome {
        rule_genes: b.rule_genes[..k]
            .iter()
            .chain(&a.rule_genes[k..])
            .cloned()
            .collect(),
        mf_genes: a.mf_genes.clone(),
    };
    (c1, c2)
}

fn uniform_reset_mutation<R: Rng>(g: &mut Genome, bounds: &GeneBounds, rate: f64, rng: &mut R) {
    for gene in &mut g.rule_genes {
        for (code, &(lo, hi)) in gene.codes.iter_mut().zip(&bounds.rule_codes) {
            if rng.gen::<f64>() < rate {
                *code = rng.gen_range(lo..=hi);
            }
        }
    }
    for (gene, &(lo, hi)) in g.mf_genes.iter_mut().zip(&bounds.mf) {
        if rng.gen::<f64>() < rate {
            *gene = rng.gen_range(lo..=hi);
        }
    }
}

/// Runs the baseline GA with the same seeding, fitness, and generation
/// budget as the integration engine.
pub fn run_baseline_ga(
    sources: &[KnowledgeBase],
    data: &LabeledDataset,
    cfg: &EvolutionConfig,
    ga: &GaConfig,
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

    let mut history = Vec::with_capacity(cfg.generations);
    for t in 1..=cfg.generations {
        pop = baseline_ga_step(&pop, ga, &bounds, &mut rng);
        evaluate_population(&mut pop, &ctx)?;
        history.push(collect_stats(&pop, t));
    }
    let best = &pop.individuals[pop.best_index()];
    Ok((decode(&best.genome, schema)?, history))
}
