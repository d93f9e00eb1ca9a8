//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible with `--nocapture`). Every threshold is pinned
//! here; run with `cargo test -p rulefuse-cli --test acceptance`.

use std::path::PathBuf;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rulefuse::bootstrap::{induce_rule_set, uniform_partitions};
use rulefuse::evolution::{
    apply_tvm, evaluate_individuals, insertion_deletion_mutate, run_baseline_ga, run_integration,
    EvalContext, EvolutionConfig, Individual,
};
use rulefuse::genome::{decode, encode, random_genome, GeneBounds};
use rulefuse::inference::{accuracy, classify_instance, firing_strength};
use rulefuse::ingest::{load_dataset, split_sources, DatasetFormat, LoadOptions};
use rulefuse::kb::repair_partition;
use rulefuse::{
    fitness, AntecedentToken, FeatureSpec, FeatureValue, FuzzyRule, GaConfig, Instance,
    KnowledgeBase, LabeledDataset, LinguisticPartition, Schema, TriangularMF,
};
use rulefuse_cli::commands::median;
use rulefuse_cli::synth::{synth_dataset, SynthArgs};

fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

/// Bootstraps P stratified sources from a dataset, the way the CLI does.
fn bootstrap_sources(data: &LabeledDataset, p: usize, seed: u64) -> Vec<KnowledgeBase> {
    let partitions = uniform_partitions(&data.schema.features).unwrap();
    split_sources(data, p, seed)
        .unwrap()
        .iter()
        .map(|share| induce_rule_set(share, &partitions).unwrap())
        .collect()
}

fn median_accuracy_over_seeds(
    data: &LabeledDataset,
    sources: &[KnowledgeBase],
    cfg: &EvolutionConfig,
    seeds: &[u64],
) -> f64 {
    let finals: Vec<f64> = seeds
        .iter()
        .map(|&seed| {
            let cfg = EvolutionConfig {
                seed,
                ..cfg.clone()
            };
            let (best, _) = run_integration(sources, data, &cfg).unwrap();
            accuracy(&best, data).unwrap()
        })
        .collect();
    median(finals.into_iter())
}

// --- criterion 1: the equation examples, exact to 1e-12 ---

#[test]
fn criterion_1_equation_unit_suite() {
    let tol = 1e-12;

    // membership: apex, support boundary, half-spread interpolation
    let mf = TriangularMF::new(5.0, 2.0);
    let membership_ok =
        mf.membership(5.0) == 1.0 && mf.membership(7.0) == 0.0 && mf.membership(6.0) == 0.5;

    // firing strength: product t-norm, empty product, categorical annihilator
    let schema = Schema::new(
        vec![
            FeatureSpec::numeric("x", 0.0, 10.0, 1).unwrap(),
            FeatureSpec::numeric("y", 0.0, 10.0, 1).unwrap(),
            FeatureSpec::categorical("c", vec!["a".into(), "b".into()]).unwrap(),
        ],
        vec!["p".into(), "q".into()],
    )
    .unwrap();
    let kb = KnowledgeBase::new(
        schema.clone(),
        vec![
            LinguisticPartition::new(vec![TriangularMF::new(5.0, 2.0)]),
            LinguisticPartition::new(vec![TriangularMF::new(5.0, 5.0)]),
        ],
        vec![
            FuzzyRule::new(
                vec![
                    AntecedentToken::Linguistic(0),
                    AntecedentToken::Linguistic(0),
                    AntecedentToken::DontCare,
                ],
                0,
            ),
            FuzzyRule::new(
                vec![
                    AntecedentToken::DontCare,
                    AntecedentToken::DontCare,
                    AntecedentToken::DontCare,
                ],
                1,
            ),
            FuzzyRule::new(
                vec![
                    AntecedentToken::DontCare,
                    AntecedentToken::DontCare,
                    AntecedentToken::Category(0),
                ],
                0,
            ),
        ],
    )
    .unwrap();
    // degrees 0.5 and 0.8 -> 0.4
    let inst = Instance::new(vec![
        Some(FeatureValue::Numeric(6.0)),
        Some(FeatureValue::Numeric(4.0)),
        Some(FeatureValue::Category(1)),
    ]);
    let firing_ok = (firing_strength(0, &kb, &inst) - 0.4).abs() < tol
        && firing_strength(1, &kb, &inst) == 1.0
        && firing_strength(2, &kb, &inst) == 0.0;

    // classification: single candidate, no coverage, lowest-index tie-break
    let single = KnowledgeBase::new(
        schema.clone(),
        kb.partitions.clone(),
        vec![FuzzyRule::new(
            vec![
                AntecedentToken::Linguistic(0),
                AntecedentToken::DontCare,
                AntecedentToken::DontCare,
            ],
            1,
        )],
    )
    .unwrap();
    let weak = Instance::new(vec![Some(FeatureValue::Numeric(6.4)), None, None]);
    let nothing = Instance::new(vec![Some(FeatureValue::Numeric(0.0)), None, None]);
    let tie_kb = KnowledgeBase::new(
        schema.clone(),
        kb.partitions.clone(),
        vec![
            FuzzyRule::new(
                vec![
                    AntecedentToken::Linguistic(0),
                    AntecedentToken::DontCare,
                    AntecedentToken::DontCare,
                ],
                0,
            ),
            FuzzyRule::new(
                vec![
                    AntecedentToken::DontCare,
                    AntecedentToken::DontCare,
                    AntecedentToken::DontCare,
                ],
                1,
            ),
            FuzzyRule::new(
                vec![
                    AntecedentToken::Linguistic(0),
                    AntecedentToken::DontCare,
                    AntecedentToken::DontCare,
                ],
                1,
            ),
        ],
    )
    .unwrap();
    let apex = Instance::new(vec![Some(FeatureValue::Numeric(5.0)), None, None]);
    let classify_ok = classify_instance(&single, &weak) == Some(1)
        && classify_instance(&single, &nothing).is_none()
        && classify_instance(&tie_kb, &apex) == Some(0);

    // accuracy: 3 of 4, all matched, none matched
    let cat1 = Some(FeatureValue::Category(1));
    let rows = vec![
        (
            Instance::new(vec![Some(FeatureValue::Numeric(5.0)), None, cat1]),
            1,
        ),
        (
            Instance::new(vec![Some(FeatureValue::Numeric(5.5)), None, cat1]),
            1,
        ),
        (
            Instance::new(vec![Some(FeatureValue::Numeric(4.5)), None, cat1]),
            1,
        ),
        (
            Instance::new(vec![Some(FeatureValue::Numeric(5.0)), None, cat1]),
            0,
        ),
    ];
    let data = LabeledDataset::new(schema.clone(), rows).unwrap();
    let catch_all = KnowledgeBase::new(
        schema.clone(),
        kb.partitions.clone(),
        vec![FuzzyRule::new(
            vec![
                AntecedentToken::DontCare,
                AntecedentToken::DontCare,
                AntecedentToken::DontCare,
            ],
            1,
        )],
    )
    .unwrap();
    let fires_nothing = KnowledgeBase::new(
        schema.clone(),
        kb.partitions.clone(),
        vec![FuzzyRule::new(
            vec![
                AntecedentToken::DontCare,
                AntecedentToken::DontCare,
                AntecedentToken::Category(0),
            ],
            1,
        )],
    )
    .unwrap();
    let all_live = LabeledDataset::new(
        schema.clone(),
        data.rows
            .iter()
            .map(|(inst, _)| (inst.clone(), 1))
            .collect(),
    )
    .unwrap();
    let accuracy_ok = (accuracy(&catch_all, &data).unwrap() - 0.75).abs() < tol
        && accuracy(&catch_all, &all_live).unwrap() == 1.0
        && accuracy(&fires_nothing, &data).unwrap() == 0.0;

    // complexity: the three ratio examples
    let complexity_ok = (fitness::complexity(10, &[8, 12]).unwrap() - 1.0).abs() < tol
        && (fitness::complexity(10, &[5]).unwrap() - 2.0).abs() < tol
        && (fitness::complexity(5, &[5, 5, 5]).unwrap() - 1.0).abs() < tol;

    // fitness: direct division, alpha = 0, and the frozen high-precision value
    let fitness_ok = (fitness::fitness(0.9, 2.0, 1.0).unwrap() - 0.45).abs() < tol
        && (fitness::fitness(0.9, 2.0, 0.0).unwrap() - 0.9).abs() < tol
        && (fitness::fitness(0.9, 2.0, 0.01).unwrap() - 0.8937832458933323).abs() < tol;

    let pass =
        membership_ok && firing_ok && classify_ok && accuracy_ok && complexity_ok && fitness_ok;
    report(
        "1 equation unit suite",
        pass,
        &format!(
            "membership {membership_ok}, firing {firing_ok}, classify {classify_ok}, \
             accuracy {accuracy_ok}, complexity {complexity_ok}, fitness {fitness_ok}"
        ),
    );
}

// --- criterion 2: brute-force oracle equivalence, exact ---

mod reference {
    use super::*;

    fn slot(kb: &KnowledgeBase, feature_idx: usize) -> usize {
        kb.schema.features[..feature_idx]
            .iter()
            .filter(|f| f.is_numeric())
            .count()
    }

    fn strength(kb: &KnowledgeBase, rule_idx: usize, inst: &Instance) -> f64 {
        let rule = &kb.rules[rule_idx];
        let mut product = 1.0;
        for i in 0..kb.schema.features.len() {
            let factor = match (rule.antecedents[i], inst.values[i]) {
                (AntecedentToken::DontCare, _) | (_, None) => 1.0,
                (AntecedentToken::Linguistic(j), Some(FeatureValue::Numeric(x))) => {
                    let mf = kb.partitions[slot(kb, i)].mfs[j];
                    let m = 1.0 - (x - mf.center).abs() / mf.half_width;
                    if m < 0.0 {
                        0.0
                    } else {
                        m
                    }
                }
                (AntecedentToken::Category(k), Some(FeatureValue::Category(c))) => {
                    if k == c {
                        1.0
                    } else {
                        0.0
                    }
                }
                _ => panic!("kind mismatch"),
            };
            product *= factor;
        }
        product
    }

    pub fn evaluate(
        kb: &KnowledgeBase,
        data: &LabeledDataset,
        source_counts: &[usize],
        alpha: f64,
    ) -> (f64, f64, f64) {
        let mut correct = 0usize;
        for (inst, label) in &data.rows {
            let mut best_strength = 0.0;
            let mut best_class = None;
            for rule_idx in 0..kb.rules.len() {
                let s = strength(kb, rule_idx, inst);
                if s > best_strength {
                    best_strength = s;
                    best_class = Some(kb.rules[rule_idx].consequent);
                }
            }
            if best_class == Some(*label) {
                correct += 1;
            }
        }
        let acc = correct as f64 / data.rows.len() as f64;
        let mut sum = 0usize;
        for c in source_counts {
            sum += c;
        }
        let comp = kb.rules.len() as f64 / (sum as f64 / source_counts.len() as f64);
        (acc, comp, acc / comp.powf(alpha))
    }
}

/// Random already-normalized problem fixtures for the oracle check.
mod gen {
    use super::*;

    pub fn schema(rng: &mut ChaCha8Rng) -> Schema {
        let n_features = rng.gen_range(1..=3);
        let features = (0..n_features)
            .map(|i| {
                if rng.gen_bool(0.6) {
                    let lower = rng.gen_range(-5.0..5.0);
                    let upper = lower + rng.gen_range(1.0..10.0);
                    FeatureSpec::numeric(format!("f{i}"), lower, upper, rng.gen_range(1..=3))
                        .unwrap()
                } else {
                    let cats = (0..rng.gen_range(2..=3)).map(|k| format!("c{k}")).collect();
                    FeatureSpec::categorical(format!("f{i}"), cats).unwrap()
                }
            })
            .collect();
        let classes = (0..rng.gen_range(2..=3))
            .map(|c| format!("class{c}"))
            .collect();
        Schema::new(features, classes).unwrap()
    }

    pub fn kb(rng: &mut ChaCha8Rng, schema: &Schema) -> KnowledgeBase {
        let partitions = schema
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
                LinguisticPartition::new(
                    centers
                        .into_iter()
                        .map(|c| TriangularMF::new(c, rng.gen_range(0.02 * range..=range)))
                        .collect(),
                )
            })
            .collect();
        let rules = (0..rng.gen_range(1..=4))
            .map(|_| {
                let antecedents = schema
                    .features
                    .iter()
                    .map(|f| {
                        if rng.gen_bool(0.2) {
                            AntecedentToken::DontCare
                        } else if f.is_numeric() {
                            AntecedentToken::Linguistic(
                                rng.gen_range(0..f.num_linguistic().unwrap()),
                            )
                        } else {
                            AntecedentToken::Category(
                                rng.gen_range(0..f.categories().unwrap().len()),
                            )
                        }
                    })
                    .collect();
                FuzzyRule::new(antecedents, rng.gen_range(0..schema.classes.len()))
            })
            .collect();
        KnowledgeBase::new(schema.clone(), partitions, rules).unwrap()
    }

    pub fn dataset(rng: &mut ChaCha8Rng, schema: &Schema) -> LabeledDataset {
        let rows = (0..rng.gen_range(1..=20))
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
                            FeatureValue::Numeric(rng.gen_range(lower..=upper))
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
}

#[test]
fn criterion_2_oracle_equivalence() {
    let mut checked = 0;
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(40_000 + seed);
        let schema = gen::schema(&mut rng);
        let kb = gen::kb(&mut rng, &schema);
        let data = gen::dataset(&mut rng, &schema);
        let n_sources = rng.gen_range(1..=3usize);
        let source_counts: Vec<usize> = (0..n_sources).map(|_| rng.gen_range(1..=9)).collect();
        let alpha = rng.gen_range(0.0..0.5);

        let mut individuals = vec![Individual::unevaluated(encode(&kb))];
        let ctx = EvalContext {
            schema: &schema,
            data: &data,
            source_rule_counts: &source_counts,
            alpha,
        };
        evaluate_individuals(&mut individuals, &ctx).unwrap();
        let got = individuals[0].report.unwrap();
        let (acc, comp, fit) = reference::evaluate(&kb, &data, &source_counts, alpha);
        assert_eq!(
            got.accuracy, acc,
            "seed {seed}: accuracy differs from reference"
        );
        assert_eq!(
            got.complexity, comp,
            "seed {seed}: complexity differs from reference"
        );
        assert_eq!(
            got.fitness, fit,
            "seed {seed}: fitness differs from reference"
        );
        checked += 1;
    }
    report(
        "2 oracle equivalence",
        checked == 10,
        &format!("{checked}/10 problems exact"),
    );
}

// --- criterion 3: elitist monotonicity on iris ---

#[test]
fn criterion_3_elitist_monotonicity() {
    let data = load_dataset(
        DatasetFormat::Iris,
        &data_path("iris.data"),
        &LoadOptions::default(),
    )
    .unwrap();
    let sources = bootstrap_sources(&data, 3, 7);
    let mut violations = 0usize;
    for seed in 1..=20u64 {
        let cfg = EvolutionConfig {
            mu: 40,
            generations: 50,
            seed,
            ..Default::default()
        };
        let (_, history) = run_integration(&sources, &data, &cfg).unwrap();
        assert_eq!(history.len(), 50);
        violations += history
            .windows(2)
            .filter(|pair| pair[1].best_fitness < pair[0].best_fitness)
            .count();
    }
    report(
        "3 elitist monotonicity",
        violations == 0,
        &format!("{violations} violations over 20 runs x 50 generations"),
    );
}

// --- criteria 4-6: dataset reproductions ---

#[test]
fn criterion_4_hepatitis_reproduction() {
    let data = load_dataset(
        DatasetFormat::Hepatitis,
        &data_path("hepatitis.data"),
        &LoadOptions::default(),
    )
    .unwrap();
    assert_eq!(data.len(), 155);
    let sources = bootstrap_sources(&data, 3, 7);
    let cfg = EvolutionConfig::default(); // mu=100, subpops=10, T=300, alpha=0.01
    let med = median_accuracy_over_seeds(&data, &sources, &cfg, &[1, 2, 3, 4, 5]);
    report(
        "4 hepatitis reproduction",
        med >= 0.85,
        &format!("median accuracy {med:.4} >= 0.85"),
    );
}

#[test]
fn criterion_5_iris_reproduction() {
    let data = load_dataset(
        DatasetFormat::Iris,
        &data_path("iris.data"),
        &LoadOptions::default(),
    )
    .unwrap();
    assert_eq!(data.len(), 150);
    let sources = bootstrap_sources(&data, 3, 7);
    let cfg = EvolutionConfig {
        generations: 200,
        ..Default::default()
    };
    let med = median_accuracy_over_seeds(&data, &sources, &cfg, &[1, 2, 3, 4, 5]);
    report(
        "5 iris reproduction",
        med >= 0.70,
        &format!("median accuracy {med:.4} >= 0.70"),
    );
}

#[test]
fn criterion_6_tictactoe_reproduction() {
    let data = load_dataset(
        DatasetFormat::TicTacToe,
        &data_path("tic-tac-toe.data"),
        &LoadOptions::default(),
    )
    .unwrap();
    assert_eq!(data.len(), 958);
    let sources = bootstrap_sources(&data, 3, 7);
    let cfg = EvolutionConfig {
        generations: 400,
        ..Default::default()
    };
    let med = median_accuracy_over_seeds(&data, &sources, &cfg, &[1, 2, 3, 4, 5]);
    report(
        "6 tictactoe reproduction",
        med >= 0.60,
        &format!("median accuracy {med:.4} >= 0.60"),
    );
}

// --- criterion 7: convergence comparison against the baseline GA ---

#[test]
fn criterion_7_convergence_comparison() {
    let data = load_dataset(
        DatasetFormat::Hepatitis,
        &data_path("hepatitis.data"),
        &LoadOptions::default(),
    )
    .unwrap();
    let sources = bootstrap_sources(&data, 3, 7);
    let seeds = [1u64, 2, 3, 4, 5];
    let cfg = EvolutionConfig::default(); // T=300

    let mut es_histories = Vec::new();
    let mut ga_histories = Vec::new();
    for &seed in &seeds {
        let cfg = EvolutionConfig {
            seed,
            ..cfg.clone()
        };
        es_histories.push(run_integration(&sources, &data, &cfg).unwrap().1);
        ga_histories.push(
            run_baseline_ga(&sources, &data, &cfg, &GaConfig::default())
                .unwrap()
                .1,
        );
    }
    // target: the GA's median final fitness across the shared seeds
    let target = median(ga_histories.iter().map(|h| h.last().unwrap().best_fitness));
    let gens_to_target = |h: &[rulefuse::GenerationStats]| {
        h.iter()
            .find(|s| s.best_fitness >= target)
            .map(|s| s.generation as f64)
            .unwrap_or((h.len() + 1) as f64)
    };
    let es_median = median(es_histories.iter().map(|h| gens_to_target(h)));
    let ga_median = median(ga_histories.iter().map(|h| gens_to_target(h)));
    report(
        "7 convergence comparison",
        es_median <= ga_median,
        &format!("ES median {es_median} generations <= GA median {ga_median} (target {target:.4})"),
    );
}

// --- criterion 8: property suite at pinned sample counts ---

#[test]
fn criterion_8_property_suite() {
    // encode/decode roundtrip, exact, 100 random knowledge bases
    let mut roundtrip_ok = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(50_000 + seed);
        let schema = gen::schema(&mut rng);
        let kb = gen::kb(&mut rng, &schema);
        if decode(&encode(&kb), &schema).unwrap() == kb {
            roundtrip_ok += 1;
        }
    }

    // time-variant mutation bounds closure, 10^4 mutations
    let mut rng = ChaCha8Rng::seed_from_u64(60_000);
    let mut tvm_ok = 0usize;
    let mut tvm_total = 0usize;
    while tvm_total < 10_000 {
        let schema = gen::schema(&mut rng);
        if schema.mf_gene_len() == 0 {
            continue;
        }
        let bounds = GeneBounds::from_schema(&schema, 6).unwrap();
        let cfg = EvolutionConfig {
            p_mf_mutation: 1.0,
            ..Default::default()
        };
        let genome = random_genome(&bounds, rng.gen_range(1..=6), &mut rng).unwrap();
        let t = rng.gen_range(0..=30usize);
        let out = apply_tvm(&genome, &bounds, t, 30, &cfg, &mut rng);
        for (gene, &(lo, hi)) in out.mf_genes.iter().zip(&bounds.mf) {
            tvm_total += 1;
            if *gene >= lo && *gene <= hi {
                tvm_ok += 1;
            }
        }
    }

    // insertion/deletion rule-count bounds, 10^4 applications
    let mut ins_del_ok = 0usize;
    let schema = Schema::new(
        vec![FeatureSpec::numeric("x", 0.0, 10.0, 3).unwrap()],
        vec!["a".into(), "b".into()],
    )
    .unwrap();
    let max_rules = 5;
    let bounds = GeneBounds::from_schema(&schema, max_rules).unwrap();
    let cfg = EvolutionConfig {
        p_insert: 0.5,
        p_delete: 0.5,
        ..Default::default()
    };
    let mut genome = random_genome(&bounds, 3, &mut rng).unwrap();
    for _ in 0..10_000 {
        genome = insertion_deletion_mutate(&genome, &bounds, &cfg, &mut rng);
        if (1..=max_rules).contains(&genome.rule_count()) {
            ins_del_ok += 1;
        }
    }

    // repair idempotence, 100 random partitions
    let mut repair_ok = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(70_000 + seed);
        let lower = rng.gen_range(-5.0..5.0);
        let upper = lower + rng.gen_range(0.5..10.0);
        let l = rng.gen_range(1..=5);
        let feature = FeatureSpec::numeric("x", lower, upper, l).unwrap();
        let range = upper - lower;
        let p = LinguisticPartition::new(
            (0..l)
                .map(|_| {
                    TriangularMF::new(
                        rng.gen_range(lower - range..upper + range),
                        rng.gen_range(-range..2.0 * range),
                    )
                })
                .collect(),
        );
        let once = repair_partition(&p, &feature);
        if repair_partition(&once, &feature) == once {
            repair_ok += 1;
        }
    }

    let pass =
        roundtrip_ok == 100 && tvm_ok == tvm_total && ins_del_ok == 10_000 && repair_ok == 100;
    report(
        "8 property suite",
        pass,
        &format!(
            "roundtrip {roundtrip_ok}/100, tvm bounds {tvm_ok}/{tvm_total}, \
             insert/delete {ins_del_ok}/10000, repair idempotence {repair_ok}/100"
        ),
    );
}

// --- criterion 9: separable synthetic clusters stand in for the withheld
// --- fourth domain ---

#[test]
fn criterion_9_synthetic_clusters() {
    let dir = tempfile::tempdir().unwrap();
    let mut finals = Vec::new();
    for seed in [1u64, 2, 3] {
        let out = synth_dataset(&SynthArgs {
            rows: 150,
            features: 2,
            classes: 3,
            seed,
            separation: 6.0,
            out: dir.path().to_path_buf(),
            name: format!("synth{seed}"),
        })
        .unwrap();
        let data = load_dataset(
            DatasetFormat::GenericCsv,
            &out.csv_path,
            &LoadOptions::default(),
        )
        .unwrap();
        let sources = bootstrap_sources(&data, 3, 7);
        let cfg = EvolutionConfig {
            generations: 200,
            seed,
            ..Default::default()
        };
        let (best, _) = run_integration(&sources, &data, &cfg).unwrap();
        finals.push(accuracy(&best, &data).unwrap());
    }
    let med = median(finals.into_iter());
    report(
        "9 synthetic clusters",
        med >= 0.9,
        &format!("median accuracy {med:.4} >= 0.9 within 200 generations"),
    );
}
