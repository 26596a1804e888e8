//! kNN benchmarking: stratified cross-validation, parameter sweeps over
//! the ball-size lower bound and the neighborhood radius, and multi-method
//! comparison tables.
//!
//! All randomness flows from one seed through a counter-based generator,
//! so reports are deterministic in (dataset, config, seed) regardless of
//! how work is scheduled.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{AttributeSubset, DecisionSystem};
use crate::gbrct::{build_tree, BallGen};
use crate::granular_ball::RadiusMode;
use crate::roughset::{forward_reduction, Oracle, Reduct};

/// Which pipeline a benchmark run evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Method {
    /// Full attribute set, no reduction.
    Original,
    Prs,
    Nrs { delta: f64 },
    Gbnrs { lbs: usize },
    Gbprs,
    /// GBNRS reduction plus concept-tree classification.
    Gbrct { lbs: usize },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Original => "Original",
            Method::Prs => "PRS",
            Method::Nrs { .. } => "NRS",
            Method::Gbnrs { .. } => "GBNRS",
            Method::Gbprs => "GBPRS",
            Method::Gbrct { .. } => "GBRCT",
        }
    }

    fn oracle(&self, radius_mode: RadiusMode) -> Option<Oracle> {
        match *self {
            Method::Original => None,
            Method::Prs => Some(Oracle::Prs),
            Method::Nrs { delta } => Some(Oracle::Nrs { delta }),
            Method::Gbnrs { lbs } | Method::Gbrct { lbs } => {
                Some(Oracle::Gbnrs { lbs, radius_mode })
            }
            Method::Gbprs => Some(Oracle::Gbprs),
        }
    }
}

/// Whether reduction runs inside each training fold or once up front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionProtocol {
    /// The stricter default: the reduct is recomputed per training fold.
    PerFold,
    /// One reduct from the whole dataset, then plain cross-validation.
    WholeDataset,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub folds: usize,
    pub knn_k: usize,
    pub seed: u64,
    pub stop_eps: f64,
    pub reduction: ReductionProtocol,
    pub radius_mode: RadiusMode,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            folds: 5,
            knn_k: 1,
            seed: 0,
            stop_eps: 0.0,
            reduction: ReductionProtocol::PerFold,
            radius_mode: RadiusMode::Average,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParameters {
    pub folds: usize,
    pub knn_k: usize,
    pub seed: u64,
    pub stop_eps: f64,
    pub reduction: ReductionProtocol,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lbs: Option<usize>,
}

/// One benchmark run: per-fold accuracies plus summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub dataset: String,
    pub method: String,
    pub parameters: ReportParameters,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// Population standard deviation of the fold accuracies.
    pub std_accuracy: f64,
    /// Selected attribute indexes, one entry per fold (a single entry for
    /// whole-dataset reduction or the unreduced baseline).
    pub selected_attributes: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub flags: Vec<String>,
    /// Timing is kept out of the serialized report so repeated runs with
    /// the same seed produce byte-identical files.
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

impl EvaluationReport {
    pub fn summary_cell(&self) -> String {
        format!("{:.4}\u{b1}{:.4}", self.mean_accuracy, self.std_accuracy)
    }
}

/// Majority label among the `k` nearest training rows on `subset`.
/// Distance ties prefer the smaller row id; vote ties the smaller class.
pub fn knn_classify(
    train: &DecisionSystem,
    subset: &AttributeSubset,
    query: &[f64],
    k: usize,
) -> usize {
    assert!(k >= 1 && k <= train.n(), "k must be in 1..=train size");
    let point: Vec<f64> = subset.indexes().iter().map(|&j| query[j]).collect();
    let mut dists: Vec<(f64, usize)> = (0..train.n())
        .map(|i| (train.project_distance(subset, i, &point), i))
        .collect();
    dists.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let mut votes = vec![0usize; train.num_classes()];
    for &(_, i) in dists.iter().take(k) {
        votes[train.label(i)] += 1;
    }
    votes
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
        .map(|(i, _)| i)
        .unwrap()
}

/// Seeded stratified fold assignment; per-class counts per fold differ by
/// at most one. Classes with fewer members than folds fall back to a plain
/// shuffled split.
pub fn fold_assignment(labels: &[usize], folds: usize, seed: u64) -> Vec<usize> {
    assert!(folds >= 2, "folds must be at least 2");
    assert!(folds <= labels.len(), "more folds than samples");
    let num_classes = labels.iter().copied().max().unwrap_or(0) + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0usize; labels.len()];

    let class_ids: Vec<Vec<usize>> = (0..num_classes)
        .map(|c| (0..labels.len()).filter(|&i| labels[i] == c).collect())
        .collect();
    let stratify = class_ids.iter().all(|ids| ids.is_empty() || ids.len() >= folds);

    if stratify {
        for mut ids in class_ids {
            ids.shuffle(&mut rng);
            for (pos, id) in ids.into_iter().enumerate() {
                assignment[id] = pos % folds;
            }
        }
    } else {
        let mut ids: Vec<usize> = (0..labels.len()).collect();
        ids.shuffle(&mut rng);
        for (pos, id) in ids.into_iter().enumerate() {
            assignment[id] = pos % folds;
        }
    }
    assignment
}

fn population_std(values: &[f64], mean: f64) -> f64 {
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
    var.sqrt()
}

fn majority_label(ds: &DecisionSystem) -> usize {
    let mut counts = vec![0usize; ds.num_classes()];
    for i in 0..ds.n() {
        counts[ds.label(i)] += 1;
    }
    counts
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
        .map(|(i, _)| i)
        .unwrap()
}

struct FoldOutcome {
    accuracy: f64,
    selected: Option<Vec<usize>>,
    flags: Vec<usize>, // indexes into FLAG_TEXTS
}

const FLAG_EMPTY_REDUCT: usize = 0;
const FLAG_TEXTS: [&str; 1] = ["empty reduct: majority-class fallback"];

/// Evaluates a fixed attribute subset with stratified k-fold kNN.
/// Normalization inside each fold uses the training rows' min/max only.
pub fn cross_validate(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    folds: usize,
    knn_k: usize,
    seed: u64,
) -> EvaluationReport {
    let start = std::time::Instant::now();
    let assignment = fold_assignment(ds.labels(), folds, seed);
    let outcomes: Vec<FoldOutcome> = (0..folds)
        .into_par_iter()
        .map(|fold| evaluate_fold(ds, subset, &assignment, fold, knn_k))
        .collect();
    finish_report(ds, "fixed-subset", outcomes, folds, knn_k, seed, 0.0,
        ReductionProtocol::WholeDataset, None, None, start.elapsed().as_secs_f64(),
        Some(subset.indexes().to_vec()))
}

fn evaluate_fold(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    assignment: &[usize],
    fold: usize,
    knn_k: usize,
) -> FoldOutcome {
    let train_ids: Vec<usize> = (0..ds.n()).filter(|&i| assignment[i] != fold).collect();
    let test_ids: Vec<usize> = (0..ds.n()).filter(|&i| assignment[i] == fold).collect();
    let train = ds.restrict_rows(&train_ids);
    let mut flags = Vec::new();
    let k = knn_k.min(train.n());

    let correct = test_ids
        .iter()
        .filter(|&&i| {
            let predicted = if subset.is_empty() {
                majority_label(&train)
            } else {
                let query = train.normalize_raw_row(ds.raw_row(i));
                knn_classify(&train, subset, &query, k)
            };
            predicted == ds.label(i)
        })
        .count();
    if subset.is_empty() && !flags.contains(&FLAG_EMPTY_REDUCT) {
        flags.push(FLAG_EMPTY_REDUCT);
    }
    FoldOutcome {
        accuracy: correct as f64 / test_ids.len().max(1) as f64,
        selected: None,
        flags,
    }
}

#[allow(clippy::too_many_arguments)]
fn finish_report(
    ds: &DecisionSystem,
    method: &str,
    outcomes: Vec<FoldOutcome>,
    folds: usize,
    knn_k: usize,
    seed: u64,
    stop_eps: f64,
    reduction: ReductionProtocol,
    delta: Option<f64>,
    lbs: Option<usize>,
    wall_clock_seconds: f64,
    shared_selection: Option<Vec<usize>>,
) -> EvaluationReport {
    let fold_accuracies: Vec<f64> = outcomes.iter().map(|o| o.accuracy).collect();
    let mean = fold_accuracies.iter().sum::<f64>() / fold_accuracies.len() as f64;
    let std = population_std(&fold_accuracies, mean);
    let selected_attributes = match shared_selection {
        Some(sel) => vec![sel],
        None => outcomes
            .iter()
            .map(|o| o.selected.clone().unwrap_or_default())
            .collect(),
    };
    let mut flag_ids: Vec<usize> = outcomes.iter().flat_map(|o| o.flags.iter().copied()).collect();
    flag_ids.sort_unstable();
    flag_ids.dedup();
    EvaluationReport {
        dataset: String::new(),
        method: method.to_string(),
        parameters: ReportParameters {
            folds,
            knn_k,
            seed,
            stop_eps,
            reduction,
            delta,
            lbs,
        },
        fold_accuracies,
        mean_accuracy: mean,
        std_accuracy: std,
        selected_attributes,
        flags: flag_ids.into_iter().map(|i| FLAG_TEXTS[i].to_string()).collect(),
        wall_clock_seconds: {
            let _ = ds;
            wall_clock_seconds
        },
    }
}

/// Runs one method end to end under the configured reduction protocol.
pub fn evaluate_method(
    ds: &DecisionSystem,
    dataset_name: &str,
    method: Method,
    config: &EvalConfig,
) -> EvaluationReport {
    let start = std::time::Instant::now();
    let assignment = fold_assignment(ds.labels(), config.folds, config.seed);
    let oracle = method.oracle(config.radius_mode);

    let mut report = match (method, oracle, config.reduction) {
        (Method::Original, _, _) => {
            let outcomes: Vec<FoldOutcome> = (0..config.folds)
                .into_par_iter()
                .map(|fold| {
                    evaluate_fold(ds, &AttributeSubset::full(ds.d()), &assignment, fold, config.knn_k)
                })
                .collect();
            finish_report(ds, method.name(), outcomes, config.folds, config.knn_k,
                config.seed, config.stop_eps, config.reduction, None, None, 0.0,
                Some((0..ds.d()).collect()))
        }
        (Method::Gbrct { lbs }, Some(oracle), _) => {
            let outcomes: Vec<FoldOutcome> = (0..config.folds)
                .into_par_iter()
                .map(|fold| evaluate_tree_fold(ds, &oracle, lbs, &assignment, fold, config))
                .collect();
            finish_report(ds, method.name(), outcomes, config.folds, config.knn_k,
                config.seed, config.stop_eps, config.reduction, None, Some(lbs), 0.0, None)
        }
        (_, Some(oracle), ReductionProtocol::PerFold) => {
            let outcomes: Vec<FoldOutcome> = (0..config.folds)
                .into_par_iter()
                .map(|fold| {
                    let train_ids: Vec<usize> =
                        (0..ds.n()).filter(|&i| assignment[i] != fold).collect();
                    let train = ds.restrict_rows(&train_ids);
                    let reduct = forward_reduction(&train, &oracle, config.stop_eps);
                    let subset = reduct.subset(ds.d());
                    let mut outcome =
                        evaluate_fold(ds, &subset, &assignment, fold, config.knn_k);
                    outcome.selected = Some(reduct.selected);
                    outcome
                })
                .collect();
            let params = oracle.params();
            finish_report(ds, method.name(), outcomes, config.folds, config.knn_k,
                config.seed, config.stop_eps, config.reduction, params.delta, params.lbs,
                0.0, None)
        }
        (_, Some(oracle), ReductionProtocol::WholeDataset) => {
            let reduct = forward_reduction(ds, &oracle, config.stop_eps);
            let subset = reduct.subset(ds.d());
            let outcomes: Vec<FoldOutcome> = (0..config.folds)
                .into_par_iter()
                .map(|fold| evaluate_fold(ds, &subset, &assignment, fold, config.knn_k))
                .collect();
            let params = oracle.params();
            finish_report(ds, method.name(), outcomes, config.folds, config.knn_k,
                config.seed, config.stop_eps, config.reduction, params.delta, params.lbs,
                0.0, Some(reduct.selected))
        }
        (_, None, _) => unreachable!("every non-Original method has an oracle"),
    };
    report.dataset = dataset_name.to_string();
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    report
}

fn evaluate_tree_fold(
    ds: &DecisionSystem,
    oracle: &Oracle,
    lbs: usize,
    assignment: &[usize],
    fold: usize,
    config: &EvalConfig,
) -> FoldOutcome {
    let train_ids: Vec<usize> = (0..ds.n()).filter(|&i| assignment[i] != fold).collect();
    let test_ids: Vec<usize> = (0..ds.n()).filter(|&i| assignment[i] == fold).collect();
    let train = ds.restrict_rows(&train_ids);
    let reduct = forward_reduction(&train, oracle, config.stop_eps);
    if reduct.selected.is_empty() {
        let fallback = majority_label(&train);
        let correct = test_ids.iter().filter(|&&i| ds.label(i) == fallback).count();
        return FoldOutcome {
            accuracy: correct as f64 / test_ids.len().max(1) as f64,
            selected: Some(Vec::new()),
            flags: vec![FLAG_EMPTY_REDUCT],
        };
    }
    let tree = build_tree(
        &train,
        &reduct,
        BallGen::Gbnrs {
            lbs,
            radius_mode: config.radius_mode,
        },
    );
    let correct = test_ids
        .iter()
        .filter(|&&i| {
            let query = train.normalize_raw_row(ds.raw_row(i));
            tree.classify(&query).label == ds.label(i)
        })
        .count();
    FoldOutcome {
        accuracy: correct as f64 / test_ids.len().max(1) as f64,
        selected: Some(reduct.selected),
        flags: Vec::new(),
    }
}

/// One parameter point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub reduct: Reduct,
    pub report: EvaluationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub parameter_name: String,
    pub rows: Vec<SweepRow>,
    pub best_index: usize,
}

impl SweepResult {
    pub fn best(&self) -> &SweepRow {
        &self.rows[self.best_index]
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{},selected,mean_accuracy,std_accuracy\n", self.parameter_name);
        for row in &self.rows {
            let selected = row
                .reduct
                .selected
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!(
                "{},{},{:.6},{:.6}\n",
                row.parameter, selected, row.report.mean_accuracy, row.report.std_accuracy
            ));
        }
        out
    }
}

/// Sweeps the ball-size lower bound from `2d` down to 2: reduce on the
/// whole dataset, cross-validate the reduct, keep the best mean accuracy
/// (ties go to the larger bound, i.e. coarser balls).
pub fn lbs_sweep(ds: &DecisionSystem, dataset_name: &str, config: &EvalConfig) -> SweepResult {
    let upper = (2 * ds.d()).max(2);
    let values: Vec<usize> = (2..=upper).rev().collect();
    let rows: Vec<SweepRow> = values
        .par_iter()
        .map(|&lbs| {
            let oracle = Oracle::Gbnrs {
                lbs,
                radius_mode: config.radius_mode,
            };
            sweep_point(ds, dataset_name, &oracle, lbs as f64, config)
        })
        .collect();
    let best_index = best_row(&rows);
    SweepResult {
        parameter_name: "lbs".into(),
        rows,
        best_index,
    }
}

/// Sweeps the neighborhood radius over 0.01..=0.50 in steps of 0.01
/// (ties go to the smaller radius).
pub fn delta_sweep(ds: &DecisionSystem, dataset_name: &str, config: &EvalConfig) -> SweepResult {
    assert!(ds.is_normalized(), "delta sweep requires a normalized system");
    let rows: Vec<SweepRow> = (1..=50)
        .into_par_iter()
        .map(|i| {
            let delta = i as f64 / 100.0;
            let oracle = Oracle::Nrs { delta };
            sweep_point(ds, dataset_name, &oracle, delta, config)
        })
        .collect();
    let best_index = best_row(&rows);
    SweepResult {
        parameter_name: "delta".into(),
        rows,
        best_index,
    }
}

fn sweep_point(
    ds: &DecisionSystem,
    dataset_name: &str,
    oracle: &Oracle,
    parameter: f64,
    config: &EvalConfig,
) -> SweepRow {
    let reduct = forward_reduction(ds, oracle, config.stop_eps);
    let subset = reduct.subset(ds.d());
    let mut report = cross_validate(ds, &subset, config.folds, config.knn_k, config.seed);
    report.dataset = dataset_name.to_string();
    report.method = format!("{}", oracle.kind());
    let params = oracle.params();
    report.parameters.delta = params.delta;
    report.parameters.lbs = params.lbs;
    report.parameters.stop_eps = config.stop_eps;
    if reduct.selected.is_empty() {
        report.flags.push(FLAG_TEXTS[FLAG_EMPTY_REDUCT].to_string());
    }
    SweepRow {
        parameter,
        reduct,
        report,
    }
}

/// First index with the strictly highest mean accuracy; rows are already
/// ordered so that earlier means the preferred tie-break.
fn best_row(rows: &[SweepRow]) -> usize {
    let mut best = 0;
    for (i, row) in rows.iter().enumerate() {
        if row.report.mean_accuracy > rows[best].report.mean_accuracy {
            best = i;
        }
    }
    let _ = rows[best].parameter;
    best
}

/// A side-by-side comparison of methods on one dataset with shared folds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub dataset: String,
    pub reports: Vec<EvaluationReport>,
    /// Index of the winning report (highest mean, earliest on ties).
    pub winner: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl ComparisonTable {
    pub fn to_text(&self) -> String {
        let mut out = format!("dataset: {}\n", self.dataset);
        let width = self
            .reports
            .iter()
            .map(|r| r.method.len())
            .max()
            .unwrap_or(6)
            .max(6);
        for (i, report) in self.reports.iter().enumerate() {
            let marker = if i == self.winner { " *" } else { "" };
            let flags = if report.flags.is_empty() {
                String::new()
            } else {
                format!("  [{}]", report.flags.join("; "))
            };
            out.push_str(&format!(
                "  {:width$}  {}{}{}\n",
                report.method,
                report.summary_cell(),
                marker,
                flags,
            ));
        }
        for warning in &self.warnings {
            out.push_str(&format!("  warning: {warning}\n"));
        }
        out
    }
}

/// Runs every requested method with the identical fold assignment.
pub fn compare(
    ds: &DecisionSystem,
    dataset_name: &str,
    methods: &[Method],
    config: &EvalConfig,
) -> ComparisonTable {
    let mut warnings = Vec::new();
    if methods.iter().any(|m| matches!(m, Method::Prs | Method::Gbprs)) && looks_continuous(ds) {
        warnings.push(
            "exact-equality oracle on continuous-looking data: distinct floats are \
             distinct values; results reported but likely degenerate"
                .to_string(),
        );
    }
    let reports: Vec<EvaluationReport> = methods
        .iter()
        .map(|&m| evaluate_method(ds, dataset_name, m, config))
        .collect();
    let mut winner = 0;
    for (i, r) in reports.iter().enumerate() {
        if r.mean_accuracy > reports[winner].mean_accuracy {
            winner = i;
        }
    }
    ComparisonTable {
        dataset: dataset_name.to_string(),
        reports,
        winner,
        warnings,
    }
}

/// Heuristic: any numeric column holding non-integral raw values.
pub fn looks_continuous(ds: &DecisionSystem) -> bool {
    (0..ds.d()).any(|j| {
        ds.attribute_meta()[j].kind == crate::dataset::AttributeKind::Numeric
            && (0..ds.n()).any(|i| ds.raw_row(i)[j].fract() != 0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds_2d(points: &[(f64, f64, usize)]) -> DecisionSystem {
        DecisionSystem::from_normalized(
            points.iter().map(|&(x, y, _)| vec![x, y]).collect(),
            points.iter().map(|&(_, _, l)| l).collect(),
        )
    }

    fn separable() -> DecisionSystem {
        let points: Vec<(f64, f64, usize)> = (0..20)
            .map(|i| {
                let t = i as f64 / 20.0;
                if i % 2 == 0 {
                    (t * 0.3, t * 0.25, 0)
                } else {
                    (0.7 + t * 0.3, 0.8 + t * 0.1, 1)
                }
            })
            .collect();
        ds_2d(&points)
    }

    #[test]
    fn knn_exact_match_with_k1() {
        let ds = separable();
        let b = AttributeSubset::full(2);
        for i in 0..ds.n() {
            assert_eq!(knn_classify(&ds, &b, ds.row(i), 1), ds.label(i));
        }
    }

    #[test]
    fn knn_majority_vote() {
        let ds = ds_2d(&[(0.0, 0.0, 0), (0.1, 0.0, 0), (0.2, 0.0, 1), (1.0, 1.0, 1)]);
        let b = AttributeSubset::full(2);
        assert_eq!(knn_classify(&ds, &b, &[0.05, 0.0], 3), 0);
    }

    #[test]
    fn knn_vote_tie_prefers_smaller_class() {
        let ds = ds_2d(&[(0.0, 0.0, 1), (0.2, 0.0, 0), (1.0, 1.0, 0), (1.0, 0.9, 1)]);
        let b = AttributeSubset::full(2);
        // neighbors of (0.1, 0) at k=2: labels {1, 0} -> tie -> class 0
        assert_eq!(knn_classify(&ds, &b, &[0.1, 0.0], 2), 0);
    }

    #[test]
    #[should_panic]
    fn knn_rejects_k_above_train_size() {
        let ds = ds_2d(&[(0.0, 0.0, 0), (1.0, 1.0, 1)]);
        knn_classify(&ds, &AttributeSubset::full(2), &[0.0, 0.0], 3);
    }

    #[test]
    fn folds_partition_and_stratify() {
        let labels: Vec<usize> = (0..50).map(|i| i % 2).collect();
        let assignment = fold_assignment(&labels, 5, 7);
        assert_eq!(assignment.len(), 50);
        for fold in 0..5 {
            for class in 0..2 {
                let count = (0..50)
                    .filter(|&i| assignment[i] == fold && labels[i] == class)
                    .count();
                assert_eq!(count, 5); // 25 per class over 5 folds
            }
        }
    }

    #[test]
    fn small_class_falls_back_to_plain_split() {
        let mut labels = vec![0usize; 20];
        labels[0] = 1; // class 1 has a single member, fewer than folds
        let assignment = fold_assignment(&labels, 5, 0);
        for fold in 0..5 {
            assert!(assignment.iter().any(|&f| f == fold));
        }
    }

    #[test]
    fn perfect_dataset_scores_one() {
        let ds = separable();
        let report = cross_validate(&ds, &AttributeSubset::full(2), 5, 1, 0);
        assert_eq!(report.mean_accuracy, 1.0);
        assert_eq!(report.std_accuracy, 0.0);
    }

    #[test]
    fn reports_are_deterministic() {
        let ds = separable();
        let config = EvalConfig::default();
        let a = evaluate_method(&ds, "toy", Method::Gbnrs { lbs: 3 }, &config);
        let b = evaluate_method(&ds, "toy", Method::Gbnrs { lbs: 3 }, &config);
        assert_eq!(
            serde_json::to_vec(&a).unwrap(),
            serde_json::to_vec(&b).unwrap()
        );
    }

    #[test]
    fn mean_and_std_match_recomputation() {
        let ds = separable();
        let report = evaluate_method(&ds, "toy", Method::Original, &EvalConfig::default());
        let mean = report.fold_accuracies.iter().sum::<f64>() / report.fold_accuracies.len() as f64;
        assert_eq!(report.mean_accuracy, mean);
        assert_eq!(report.std_accuracy, population_std(&report.fold_accuracies, mean));
        assert!(report.fold_accuracies.iter().all(|&a| (0.0..=1.0).contains(&a)));
    }

    #[test]
    fn empty_reduct_falls_back_to_majority() {
        // fully coincident points with mixed labels: every neighborhood is
        // impure, so each fold's reduct is empty and the fallback predicts
        // the training majority
        let ds = ds_2d(&[
            (0.5, 0.5, 0),
            (0.5, 0.5, 1),
            (0.5, 0.5, 0),
            (0.5, 0.5, 1),
            (0.5, 0.5, 0),
            (0.5, 0.5, 1),
            (0.5, 0.5, 0),
            (0.5, 0.5, 1),
        ]);
        let config = EvalConfig {
            folds: 2,
            ..Default::default()
        };
        let report = evaluate_method(&ds, "noise", Method::Nrs { delta: 0.1 }, &config);
        assert!(report.flags.iter().any(|f| f.contains("empty reduct")));
        assert!(report.selected_attributes.iter().all(|s| s.is_empty()));
    }

    #[test]
    fn empty_subset_uses_majority_vote() {
        let ds = ds_2d(&[
            (0.1, 0.1, 0),
            (0.2, 0.2, 0),
            (0.3, 0.3, 0),
            (0.4, 0.4, 0),
            (0.5, 0.5, 0),
            (0.6, 0.6, 0),
            (0.7, 0.7, 1),
            (0.8, 0.8, 1),
        ]);
        let report = cross_validate(&ds, &AttributeSubset::empty(), 2, 1, 0);
        assert!(report.flags.iter().any(|f| f.contains("empty reduct")));
        // train majority is class 0; each test fold holds 3 of 4 class-0 rows
        assert_eq!(report.mean_accuracy, 0.75);
    }

    #[test]
    fn lbs_sweep_covers_expected_range() {
        let ds = separable();
        let config = EvalConfig::default();
        let sweep = lbs_sweep(&ds, "toy", &config);
        assert_eq!(sweep.rows.len(), 3); // d = 2: lbs in {4, 3, 2}
        assert_eq!(sweep.rows[0].parameter, 4.0);
        assert_eq!(sweep.rows.last().unwrap().parameter, 2.0);
        // ties resolve to the larger (earlier) bound
        if sweep
            .rows
            .iter()
            .all(|r| r.report.mean_accuracy == sweep.rows[0].report.mean_accuracy)
        {
            assert_eq!(sweep.best_index, 0);
        }
    }

    #[test]
    fn delta_sweep_has_fifty_rows_and_is_deterministic() {
        let ds = separable();
        let config = EvalConfig::default();
        let a = delta_sweep(&ds, "toy", &config);
        assert_eq!(a.rows.len(), 50);
        assert_eq!(a.rows[0].parameter, 0.01);
        assert_eq!(a.rows[49].parameter, 0.5);
        let b = delta_sweep(&ds, "toy", &config);
        assert_eq!(
            serde_json::to_vec(&a).unwrap(),
            serde_json::to_vec(&b).unwrap()
        );
    }

    #[test]
    fn comparison_shares_folds_and_marks_winner() {
        let ds = separable();
        let config = EvalConfig::default();
        let table = compare(
            &ds,
            "toy",
            &[Method::Original, Method::Gbnrs { lbs: 2 }],
            &config,
        );
        assert_eq!(table.reports.len(), 2);
        assert!(table.winner < 2);
        let text = table.to_text();
        assert!(text.contains("Original"));
        assert!(text.contains("GBNRS"));
    }

    #[test]
    fn continuous_data_with_prs_warns() {
        let ds = separable();
        let table = compare(&ds, "toy", &[Method::Prs], &EvalConfig::default());
        assert!(!table.warnings.is_empty());
    }
}
