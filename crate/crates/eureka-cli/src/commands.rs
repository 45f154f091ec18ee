//! The five subcommands: rank, sweep, baselines, rankbench, stability.

use crate::config::{JudgeMode, RankingMethod, RunConfig, TruthKind};
use crate::error::CliError;
use crate::output::RunDir;
use eureka::data::{
    fit_preprocessor, load_csv_with, stratified_split, Dataset, DesignMatrix, FeatureSchema,
    LoadOptions,
};
use eureka::glm::fit_logistic;
use eureka::judge::{DirectRankQuery, FeatureRef, PreferenceMatrix};
use eureka::ranking::{
    active_rank, borda_count, rankbench, stability_experiment, ComparisonRecord, RankMethod,
    RankTask, Ranking, TruthSpec,
};
use eureka::selection::{
    eureka_sweep_with, rank_by_group_lasso, rank_by_lr_weights, rank_by_validation, KSweepReport,
    SweepConfig,
};
use serde::Serialize;
use std::path::Path;

fn load_dataset(config: &RunConfig) -> Result<Dataset, CliError> {
    let schema = match &config.dataset.schema {
        Some(path) => Some(FeatureSchema::from_json_file(path)?),
        None => None,
    };
    let mut options = LoadOptions::default();
    if let Some(sentinels) = &config.dataset.missing_sentinels {
        options.missing_sentinels = sentinels.clone();
        if !options.missing_sentinels.iter().any(String::is_empty) {
            options.missing_sentinels.push(String::new());
        }
    }
    Ok(load_csv_with(
        &config.dataset.path,
        schema.as_ref(),
        &options,
    )?)
}

fn feature_refs(schema: &FeatureSchema) -> Vec<FeatureRef> {
    schema
        .features
        .iter()
        .map(|f| FeatureRef {
            name: f.name.clone(),
            description: f.description.clone(),
        })
        .collect()
}

fn rank_task(config: &RunConfig, schema: &FeatureSchema) -> RankTask {
    RankTask::new(config.task_description.clone(), schema.label.clone())
}

fn transcript_csv(records: &[ComparisonRecord]) -> String {
    let mut out = String::from("draw,feature_a,feature_b,winner,source,latency_ms\n");
    for r in records {
        let source = match r.source {
            eureka::judge::Source::Live => "live",
            eureka::judge::Source::Mock => "mock",
            eureka::judge::Source::Cache => "cache",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.draw, r.feature_a, r.feature_b, r.winner, source, r.latency_ms
        ));
    }
    out
}

fn prepared_split(config: &RunConfig) -> Result<(Dataset, DesignMatrix, DesignMatrix), CliError> {
    let ds = load_dataset(config)?;
    let (train, test) = stratified_split(&ds, config.dataset.test_fraction, config.seed)?;
    let pp = fit_preprocessor(&train)?;
    let train_dm = pp.transform(&train)?;
    let test_dm = pp.transform(&test)?;
    Ok((ds, train_dm, test_dm))
}

pub fn cmd_rank(
    config: &RunConfig,
    method_override: Option<RankingMethod>,
) -> Result<(), CliError> {
    let ds = load_dataset(config)?;
    let features = feature_refs(&ds.schema);
    let names: Vec<String> = features.iter().map(|f| f.name.clone()).collect();
    let judge = config.build_judge(&names)?;
    let task = rank_task(config, &ds.schema);
    let method = method_override.unwrap_or(config.ranking.method);

    let run = RunDir::create(&config.output.dir, "rank")?;
    run.write_json("config.json", config)?;

    let ranking = match method {
        RankingMethod::Pairwise | RankingMethod::Active => {
            let outcome = if method == RankingMethod::Pairwise {
                borda_count(
                    &features,
                    &judge,
                    &task,
                    config.ranking.n_comparisons,
                    config.seed,
                )?
            } else {
                active_rank(
                    &features,
                    &judge,
                    &task,
                    config
                        .ranking
                        .budget
                        .unwrap_or(config.ranking.n_comparisons),
                    config.ranking.delta,
                    config.seed,
                )?
            };
            run.write_json("borda.json", &outcome.estimate)?;
            run.write_text("transcript.csv", &transcript_csv(&outcome.transcript))?;
            outcome.estimate.ranking()
        }
        RankingMethod::Direct => {
            let query = DirectRankQuery {
                task_description: task.description.clone(),
                label_name: task.label_name.clone(),
                features: features.clone(),
            };
            Ranking::new(judge.direct_rank(&query, config.seed)?)
        }
    };
    run.write_json("ranking.json", &ranking)?;

    println!("run directory: {}", run.path.display());
    println!("ranking (most interesting first):");
    for (i, name) in ranking.order.iter().enumerate() {
        println!("  {}. {name}", i + 1);
    }
    Ok(())
}

pub fn cmd_sweep(config: &RunConfig, ranking_path: &Path) -> Result<(), CliError> {
    let ranking = Ranking::from_json_file(ranking_path).map_err(|e| {
        CliError::Data(eureka::data::DataError::Io {
            path: ranking_path.display().to_string(),
            source: e,
        })
    })?;
    let (_, train_dm, test_dm) = prepared_split(config)?;

    let k_max = config.sweep.k_max.unwrap_or(train_dm.groups.len());
    let mut sweep_config = SweepConfig::new(k_max);
    sweep_config.alpha = config.sweep.alpha;
    sweep_config.lambda = config.sweep.lambda;

    let report = eureka_sweep_with(&train_dm, &test_dm, &ranking, &sweep_config)?;

    let run = RunDir::create(&config.output.dir, "sweep")?;
    run.write_json("config.json", config)?;
    run.write_json("sweep.json", &report)?;
    run.write_text("sweep.csv", &report.to_csv())?;
    let (rules, model) = selected_model(config, &report, &train_dm)?;
    run.write_text("rules.txt", &rules)?;
    if let Some(model) = model {
        run.write_json("model.json", &model)?;
    }

    println!("run directory: {}", run.path.display());
    println!(
        "chance rate {:.4}; K' = {}",
        report.chance_rate,
        report.k_prime.map_or("none".to_string(), |k| k.to_string())
    );
    for r in &report.records {
        println!(
            "  K={} +{} test_acc={:.4} p={:.3e}{}",
            r.k,
            r.feature_added,
            r.test_accuracy,
            r.p_value,
            if r.significant { " *" } else { "" }
        );
    }
    Ok(())
}

/// Refits the K' model and renders its plain-text rule summary (or a note
/// when no K qualifies).
fn selected_model(
    config: &RunConfig,
    report: &KSweepReport,
    train: &DesignMatrix,
) -> Result<(String, Option<eureka::glm::LogisticModel>), CliError> {
    let Some(k_prime) = report.k_prime else {
        return Ok((
            format!(
                "No K in 1..={} was both above the chance rate ({:.4}) and significant.\n",
                report.records.len(),
                report.chance_rate
            ),
            None,
        ));
    };
    let subset: Vec<String> = report.ranking.order[..k_prime].to_vec();
    let sub_train = train.select_features(&subset)?;
    let model = fit_logistic(&sub_train, config.sweep.lambda, 1e-8, 200)?;

    let ds_schema = match &config.dataset.schema {
        Some(path) => Some(FeatureSchema::from_json_file(path)?),
        None => None,
    };
    let (positive, negative) = match &ds_schema {
        Some(s) if s.classes.len() == 2 => (s.classes[1].clone(), s.classes[0].clone()),
        _ => ("1".to_string(), "0".to_string()),
    };
    let mut text = format!(
        "Top-{k_prime} interestingness-first classifier: {}\n\
         test accuracy {:.4}, chance rate {:.4}\n\n",
        subset.join(", "),
        report.records[k_prime - 1].test_accuracy,
        report.chance_rate
    );
    text.push_str(&model.rule_summary(&positive, &negative));
    text.push('\n');
    Ok((text, Some(model)))
}

#[derive(Serialize)]
struct BaselinesReport {
    group_lasso: Vec<String>,
    logistic_regression: Vec<String>,
    validation_selection: Vec<String>,
    eureka: Option<Vec<String>>,
}

pub fn cmd_baselines(config: &RunConfig, ranking_path: Option<&Path>) -> Result<(), CliError> {
    let (_, train_dm, _) = prepared_split(config)?;

    let group_lasso = rank_by_group_lasso(&train_dm, None)?;
    let logistic = rank_by_lr_weights(&train_dm, config.baselines.lr_lambda)?;
    let validation = rank_by_validation(
        &train_dm,
        config.baselines.validation_fraction,
        config.seed,
        config.baselines.lambda,
    )?;
    let eureka_ranking = match ranking_path {
        Some(path) => match Ranking::from_json_file(path) {
            Ok(r) => Some(r.order),
            Err(e) => {
                eprintln!(
                    "warning: could not read ranking file {} ({e}); writing a baselines-only table",
                    path.display()
                );
                None
            }
        },
        None => {
            eprintln!("warning: no ranking file supplied; writing a baselines-only table");
            None
        }
    };

    let report = BaselinesReport {
        group_lasso: group_lasso.order,
        logistic_regression: logistic.order,
        validation_selection: validation.order,
        eureka: eureka_ranking,
    };

    let mut csv = String::from("group_lasso,logistic_regression,validation_selection,eureka\n");
    csv.push_str(&format!(
        "{},{},{},{}\n",
        report.group_lasso[0],
        report.logistic_regression[0],
        report.validation_selection[0],
        report
            .eureka
            .as_ref()
            .map_or(String::new(), |order| order[0].clone())
    ));

    let run = RunDir::create(&config.output.dir, "baselines")?;
    run.write_json("config.json", config)?;
    run.write_json("baselines.json", &report)?;
    run.write_text("top_features.csv", &csv)?;

    println!("run directory: {}", run.path.display());
    println!("top features:");
    println!("  group lasso:          {}", report.group_lasso[0]);
    println!("  logistic regression:  {}", report.logistic_regression[0]);
    println!("  validation selection: {}", report.validation_selection[0]);
    match &report.eureka {
        Some(order) => println!("  interestingness:      {}", order[0]),
        None => println!("  interestingness:      (no ranking file)"),
    }
    Ok(())
}

pub fn cmd_rankbench(config: &RunConfig) -> Result<(), CliError> {
    let ds = load_dataset(config)?;
    let features = feature_refs(&ds.schema);
    let names: Vec<String> = features.iter().map(|f| f.name.clone()).collect();
    let judge = config.build_judge(&names)?;
    let task = rank_task(config, &ds.schema);

    let truth = match config.rankbench.truth {
        TruthKind::Sampled => TruthSpec::Sampled {
            n0: config.rankbench.truth_n,
        },
        TruthKind::Analytic => {
            if config.judge.mode != JudgeMode::Mock {
                return Err(CliError::Config(
                    "rankbench.truth = \"analytic\" requires the mock judge".into(),
                ));
            }
            let matrix = match (&config.judge.preference_matrix, &config.judge.dominance) {
                (Some(path), None) => PreferenceMatrix::from_json_file(path)
                    .map_err(|e| CliError::Config(e.to_string()))?,
                (None, Some(order)) => PreferenceMatrix::from_dominance(order.clone())
                    .map_err(|e| CliError::Config(e.to_string()))?,
                _ => unreachable!("checked by validate"),
            };
            TruthSpec::Analytic(matrix)
        }
    };

    let report = rankbench(
        &features,
        &judge,
        &task,
        &truth,
        &config.rankbench.ns,
        config.rankbench.repeats,
        config.ranking.delta,
        config.seed,
    )?;

    let run = RunDir::create(&config.output.dir, "rankbench")?;
    run.write_json("config.json", config)?;
    run.write_json("rankbench.json", &report)?;
    run.write_text("rankbench.csv", &report.to_csv())?;

    println!("run directory: {}", run.path.display());
    for (method, n, value) in &report.curves {
        println!("  {method} N={n}: mean MAE {value:.4}");
    }
    if !report.failures.is_empty() {
        eprintln!("warning: {} cells failed", report.failures.len());
    }
    Ok(())
}

#[derive(Serialize)]
struct StabilityBundle {
    pairwise: eureka::ranking::StabilityReport,
    direct: eureka::ranking::StabilityReport,
}

pub fn cmd_stability(config: &RunConfig) -> Result<(), CliError> {
    let ds = load_dataset(config)?;
    let features = feature_refs(&ds.schema);
    let names: Vec<String> = features.iter().map(|f| f.name.clone()).collect();
    let judge = config.build_judge(&names)?;
    let task = rank_task(config, &ds.schema);
    let runs = config.stability.runs;
    let n = config
        .stability
        .n_comparisons
        .unwrap_or(config.ranking.n_comparisons);

    let pairwise = stability_experiment(
        &features,
        &judge,
        &task,
        RankMethod::Pairwise { n_comparisons: n },
        runs,
        config.seed,
    )?;
    let direct = stability_experiment(
        &features,
        &judge,
        &task,
        RankMethod::Direct,
        runs,
        config.seed,
    )?;

    let mut csv = pairwise.to_csv();
    // Both reports share the header; keep one.
    csv.push_str(direct.to_csv().split_once('\n').map_or("", |x| x.1));

    let run = RunDir::create(&config.output.dir, "stability")?;
    run.write_json("config.json", config)?;
    run.write_json("stability.json", &StabilityBundle { pairwise, direct })?;
    run.write_text("stability.csv", &csv)?;

    println!("run directory: {}", run.path.display());
    Ok(())
}
