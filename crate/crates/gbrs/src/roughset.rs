//! Positive-region oracles (Pawlak, neighborhood, granular-ball), the
//! dependence and significance measures, and the shared forward
//! attribute-reduction engine.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{AttributeSubset, DecisionSystem};
use crate::granular_ball::{
    gbnrs_pipeline_on, generate_balls_degenerate_on, BallSet, RadiusMode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Prs,
    Nrs,
    Gbnrs,
    Gbprs,
}

impl std::fmt::Display for OracleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            OracleKind::Prs => "prs",
            OracleKind::Nrs => "nrs",
            OracleKind::Gbnrs => "gbnrs",
            OracleKind::Gbprs => "gbprs",
        };
        f.write_str(s)
    }
}

/// Oracle parameters carried alongside results.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OracleParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lbs: Option<usize>,
}

/// A positive-region oracle: a pure function of (system, subset).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Oracle {
    Prs,
    Nrs { delta: f64 },
    Gbnrs { lbs: usize, radius_mode: RadiusMode },
    Gbprs,
}

impl Oracle {
    pub fn kind(&self) -> OracleKind {
        match self {
            Oracle::Prs => OracleKind::Prs,
            Oracle::Nrs { .. } => OracleKind::Nrs,
            Oracle::Gbnrs { .. } => OracleKind::Gbnrs,
            Oracle::Gbprs => OracleKind::Gbprs,
        }
    }

    pub fn params(&self) -> OracleParams {
        match *self {
            Oracle::Nrs { delta } => OracleParams {
                delta: Some(delta),
                ..Default::default()
            },
            Oracle::Gbnrs { lbs, .. } => OracleParams {
                lbs: Some(lbs),
                ..Default::default()
            },
            _ => OracleParams::default(),
        }
    }

    /// Positive/boundary split of the universe for the given subset.
    pub fn region(&self, ds: &DecisionSystem, subset: &AttributeSubset) -> RegionAssignment {
        self.region_on(ds, subset, &(0..ds.n()).collect::<Vec<_>>())
    }

    /// As [`Oracle::region`], restricted to the given sample ids.
    pub fn region_on(
        &self,
        ds: &DecisionSystem,
        subset: &AttributeSubset,
        members: &[usize],
    ) -> RegionAssignment {
        match *self {
            Oracle::Prs => prs_positive_region_on(ds, subset, members),
            Oracle::Nrs { delta } => nrs_positive_region_on(ds, subset, delta, members),
            Oracle::Gbnrs { lbs, radius_mode } => {
                let bs = gbnrs_pipeline_on(ds, subset, lbs, members, radius_mode);
                gbrs_positive_region(&bs, ds)
            }
            Oracle::Gbprs => {
                let bs = generate_balls_degenerate_on(ds, subset, members);
                gbrs_positive_region(&bs, ds)
            }
        }
    }
}

/// A positive/boundary split of the universe under one oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionAssignment {
    pub oracle: OracleKind,
    pub parameters: OracleParams,
    /// Sorted sample ids certainly classifiable from the subset.
    pub positive: Vec<usize>,
    /// Sorted sample ids in the uncertain remainder.
    pub boundary: Vec<usize>,
}

impl RegionAssignment {
    fn new(
        oracle: OracleKind,
        parameters: OracleParams,
        mut positive: Vec<usize>,
        mut boundary: Vec<usize>,
    ) -> Self {
        positive.sort_unstable();
        boundary.sort_unstable();
        Self {
            oracle,
            parameters,
            positive,
            boundary,
        }
    }
}

/// Equivalence classes of exact raw-value equality on the subset,
/// ordered by smallest member id.
pub fn prs_partition(ds: &DecisionSystem, subset: &AttributeSubset) -> Vec<Vec<usize>> {
    prs_partition_on(ds, subset, &(0..ds.n()).collect::<Vec<_>>())
}

pub fn prs_partition_on(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    members: &[usize],
) -> Vec<Vec<usize>> {
    assert!(!subset.is_empty(), "attribute subset must be non-empty");
    use std::collections::HashMap;
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in members {
        let key: Vec<u64> = subset
            .indexes()
            .iter()
            .map(|&j| ds.raw_row(i)[j].to_bits())
            .collect();
        match index.get(&key) {
            Some(&c) => classes[c].push(i),
            None => {
                index.insert(key, classes.len());
                classes.push(vec![i]);
            }
        }
    }
    classes
}

/// Pawlak positive region: the union of equivalence classes wholly inside
/// one decision class.
pub fn prs_positive_region(ds: &DecisionSystem, subset: &AttributeSubset) -> RegionAssignment {
    prs_positive_region_on(ds, subset, &(0..ds.n()).collect::<Vec<_>>())
}

pub fn prs_positive_region_on(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    members: &[usize],
) -> RegionAssignment {
    let mut positive = Vec::new();
    let mut boundary = Vec::new();
    for class in prs_partition_on(ds, subset, members) {
        let label = ds.label(class[0]);
        if class.iter().all(|&i| ds.label(i) == label) {
            positive.extend(class);
        } else {
            boundary.extend(class);
        }
    }
    RegionAssignment::new(OracleKind::Prs, OracleParams::default(), positive, boundary)
}

/// Neighborhood positive region: a sample is positive iff every sample
/// within distance `delta` of it (inclusive, itself included) shares its
/// label.
pub fn nrs_positive_region(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    delta: f64,
) -> RegionAssignment {
    nrs_positive_region_on(ds, subset, delta, &(0..ds.n()).collect::<Vec<_>>())
}

pub fn nrs_positive_region_on(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    delta: f64,
    members: &[usize],
) -> RegionAssignment {
    assert!(delta >= 0.0, "delta must be non-negative");
    let mut positive = Vec::new();
    let mut boundary = Vec::new();
    for &k in members {
        let pure = members.iter().all(|&i| {
            ds.row_distance(subset, k, i) > delta || ds.label(i) == ds.label(k)
        });
        if pure {
            positive.push(k);
        } else {
            boundary.push(k);
        }
    }
    RegionAssignment::new(
        OracleKind::Nrs,
        OracleParams {
            delta: Some(delta),
            ..Default::default()
        },
        positive,
        boundary,
    )
}

/// Granular-ball positive region: members of purity-1 balls, excluding
/// contradictory duplicates (coincident single-member balls carrying
/// different labels).
pub fn gbrs_positive_region(bs: &BallSet, ds: &DecisionSystem) -> RegionAssignment {
    let offenders = offender_balls(bs);
    let mut positive = Vec::new();
    let mut boundary = Vec::new();
    for (idx, ball) in bs.balls.iter().enumerate() {
        if ball.is_pure() && !offenders.contains(&idx) {
            positive.extend(ball.members.iter().copied());
        } else {
            boundary.extend(ball.members.iter().copied());
        }
    }
    let kind = if bs.lbs == 0 {
        OracleKind::Gbprs
    } else {
        OracleKind::Gbnrs
    };
    let params = OracleParams {
        lbs: (bs.lbs > 0).then_some(bs.lbs),
        ..Default::default()
    };
    debug_assert!(bs.covered_ids().iter().all(|&i| i < ds.n()));
    RegionAssignment::new(kind, params, positive, boundary)
}

/// Indexes of single-member balls coinciding exactly with a
/// different-label single-member ball. Such pairs cannot be separated by
/// splitting and are kept out of the positive region.
pub fn offender_balls(bs: &BallSet) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..bs.balls.len() {
        let a = &bs.balls[i];
        if a.size() != 1 {
            continue;
        }
        let clash = bs.balls.iter().any(|b| {
            b.size() == 1 && b.label != a.label && b.center == a.center
        });
        if clash {
            out.push(i);
        }
    }
    out
}

/// Dependence of the decision on the subset: `|positive| / n`.
pub fn dependence(region: &RegionAssignment, n: usize) -> f64 {
    assert!(n > 0);
    region.positive.len() as f64 / n as f64
}

/// Dependence computed directly from an oracle; the empty subset has
/// dependence 0.
pub fn gamma(ds: &DecisionSystem, subset: &AttributeSubset, oracle: &Oracle) -> f64 {
    if subset.is_empty() {
        return 0.0;
    }
    dependence(&oracle.region(ds, subset), ds.n())
}

/// Significance of attribute `a` relative to `subset`:
/// the dependence gain from adding it.
pub fn significance(
    ds: &DecisionSystem,
    a: usize,
    subset: &AttributeSubset,
    oracle: &Oracle,
) -> f64 {
    assert!(!subset.contains(a), "attribute already selected");
    gamma(ds, &subset.with(a), oracle) - gamma(ds, subset, oracle)
}

/// An ordered attribute selection with its dependence trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reduct {
    pub oracle: OracleKind,
    pub parameters: OracleParams,
    /// Attribute indexes in selection order.
    pub selected: Vec<usize>,
    pub selected_names: Vec<String>,
    /// Dependence after each accepted attribute; strictly increasing.
    pub gamma_trace: Vec<f64>,
}

impl Reduct {
    pub fn subset(&self, d: usize) -> AttributeSubset {
        AttributeSubset::new(self.selected.clone(), d).expect("reduct indexes valid")
    }

    /// The first `k` selected attributes.
    pub fn prefix(&self, k: usize, d: usize) -> AttributeSubset {
        AttributeSubset::new(self.selected[..k].to_vec(), d).expect("reduct indexes valid")
    }
}

/// Greedy forward selection: each round adds the attribute with the
/// largest significance (ties to the smallest index) while that gain
/// exceeds `stop_eps`.
pub fn forward_reduction(ds: &DecisionSystem, oracle: &Oracle, stop_eps: f64) -> Reduct {
    assert!(ds.d() >= 1);
    let mut selected = AttributeSubset::empty();
    let mut gamma_trace = Vec::new();
    let mut current_gamma = 0.0;

    loop {
        let candidates: Vec<usize> =
            (0..ds.d()).filter(|&a| !selected.contains(a)).collect();
        if candidates.is_empty() {
            break;
        }
        // candidate evaluations are independent; the reduce order is fixed
        // by (gamma desc, index asc) so scheduling cannot change the result
        let gains: Vec<(usize, f64)> = candidates
            .par_iter()
            .map(|&a| (a, gamma(ds, &selected.with(a), oracle)))
            .collect();
        let (best_attr, best_gamma) = gains
            .into_iter()
            .fold((usize::MAX, f64::NEG_INFINITY), |acc, (a, g)| {
                if g > acc.1 || (g == acc.1 && a < acc.0) {
                    (a, g)
                } else {
                    acc
                }
            });
        if best_gamma - current_gamma <= stop_eps {
            break;
        }
        selected = selected.with(best_attr);
        current_gamma = best_gamma;
        gamma_trace.push(best_gamma);
    }

    Reduct {
        oracle: oracle.kind(),
        parameters: oracle.params(),
        selected: selected.indexes().to_vec(),
        selected_names: ds.attribute_names(&selected),
        gamma_trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::DecisionSystem;
    use proptest::prelude::*;

    fn discrete(rows: &[&[f64]], labels: &[usize]) -> DecisionSystem {
        DecisionSystem::from_normalized(
            rows.iter().map(|r| r.to_vec()).collect(),
            labels.to_vec(),
        )
    }

    #[test]
    fn partition_constant_column_is_one_class() {
        let ds = discrete(&[&[1.0], &[1.0], &[1.0]], &[0, 1, 0]);
        let classes = prs_partition(&ds, &AttributeSubset::full(1));
        assert_eq!(classes, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn partition_distinct_rows_are_singletons() {
        let ds = discrete(&[&[1.0], &[2.0], &[3.0]], &[0, 1, 0]);
        let classes = prs_partition(&ds, &AttributeSubset::full(1));
        assert_eq!(classes.len(), 3);
    }

    #[test]
    fn partition_matches_brute_force_pairwise_equality() {
        let ds = discrete(&[&[0.0], &[0.0], &[1.0], &[1.0]], &[0, 0, 0, 1]);
        let classes = prs_partition(&ds, &AttributeSubset::full(1));
        assert_eq!(classes, vec![vec![0, 1], vec![2, 3]]);
        // brute force: i ~ j iff raw rows equal on B
        for (i, a) in classes.iter().enumerate() {
            for (j, b) in classes.iter().enumerate() {
                for &x in a {
                    for &y in b {
                        let same = ds.raw_row(x)[0] == ds.raw_row(y)[0];
                        assert_eq!(same, i == j);
                    }
                }
            }
        }
    }

    #[test]
    fn prs_positive_region_cases() {
        let ds = discrete(&[&[0.0], &[0.0], &[1.0], &[1.0]], &[0, 0, 0, 1]);
        let r = prs_positive_region(&ds, &AttributeSubset::full(1));
        assert_eq!(r.positive, vec![0, 1]);
        assert_eq!(r.boundary, vec![2, 3]);

        let same = discrete(&[&[0.0], &[1.0]], &[0, 0]);
        let r = prs_positive_region(&same, &AttributeSubset::full(1));
        assert_eq!(r.positive, vec![0, 1]);

        let distinct = discrete(&[&[0.0], &[1.0], &[2.0]], &[0, 1, 0]);
        let r = prs_positive_region(&distinct, &AttributeSubset::full(1));
        assert_eq!(r.positive, vec![0, 1, 2]);
    }

    #[test]
    fn nrs_positive_region_cases() {
        let ds = discrete(&[&[0.0], &[1.0]], &[0, 1]);
        let b = AttributeSubset::full(1);
        let r = nrs_positive_region(&ds, &b, 0.5);
        assert_eq!(r.positive, vec![0, 1]);
        let r = nrs_positive_region(&ds, &b, 1.0);
        assert_eq!(r.boundary, vec![0, 1]);

        // delta = 0: only exact duplicates interact
        let dup = discrete(&[&[0.5], &[0.5], &[0.9]], &[0, 1, 0]);
        let r = nrs_positive_region(&dup, &b, 0.0);
        assert_eq!(r.positive, vec![2]);
        assert_eq!(r.boundary, vec![0, 1]);
    }

    #[test]
    fn gbrs_region_all_pure_and_mixed() {
        let ds = discrete(
            &[&[0.0], &[0.05], &[1.0], &[0.95]],
            &[0, 0, 1, 1],
        );
        let b = AttributeSubset::full(1);
        let bs = crate::granular_ball::gbnrs_pipeline(&ds, &b, 2);
        let r = gbrs_positive_region(&bs, &ds);
        assert_eq!(r.positive, vec![0, 1, 2, 3]);

        let mixed = discrete(&[&[0.0], &[0.1], &[0.2]], &[0, 1, 0]);
        let bs = crate::granular_ball::generate_balls(&mixed, &b, 5);
        let r = gbrs_positive_region(&bs, &mixed);
        assert_eq!(r.boundary, vec![0, 1, 2]);
    }

    #[test]
    fn coincident_duplicate_singletons_are_boundary() {
        use crate::granular_ball::{make_ball, BallSet};
        let ds = discrete(&[&[0.5], &[0.5], &[0.0]], &[0, 1, 0]);
        let b = AttributeSubset::full(1);
        let bs = BallSet {
            subset: b.clone(),
            lbs: 2,
            balls: vec![
                make_ball(&ds, &b, &[0]),
                make_ball(&ds, &b, &[1]),
                make_ball(&ds, &b, &[2]),
            ],
        };
        let r = gbrs_positive_region(&bs, &ds);
        assert_eq!(r.positive, vec![2]);
        assert_eq!(r.boundary, vec![0, 1]);
    }

    #[test]
    fn dependence_ratio() {
        let region = RegionAssignment::new(
            OracleKind::Prs,
            OracleParams::default(),
            (0..384).collect(),
            (384..768).collect(),
        );
        assert_eq!(dependence(&region, 768), 0.5);
        let empty = RegionAssignment::new(
            OracleKind::Prs,
            OracleParams::default(),
            vec![],
            (0..4).collect(),
        );
        assert_eq!(dependence(&empty, 4), 0.0);
        let full = RegionAssignment::new(
            OracleKind::Prs,
            OracleParams::default(),
            (0..4).collect(),
            vec![],
        );
        assert_eq!(dependence(&full, 4), 1.0);
    }

    #[test]
    fn significance_from_empty_set() {
        // a alone makes 2 of 4 samples positive; gamma_empty = 0
        let ds = discrete(&[&[0.0], &[0.0], &[1.0], &[1.0]], &[0, 0, 0, 1]);
        let sig = significance(&ds, 0, &AttributeSubset::empty(), &Oracle::Prs);
        assert_eq!(sig, 0.5);
    }

    #[test]
    fn single_perfect_attribute_reduct() {
        let ds = discrete(
            &[&[0.0, 7.0], &[0.0, 7.0], &[1.0, 7.0], &[1.0, 7.0]],
            &[0, 0, 1, 1],
        );
        let r = forward_reduction(&ds, &Oracle::Prs, 0.0);
        assert_eq!(r.selected, vec![0]);
        assert_eq!(r.gamma_trace, vec![1.0]);
    }

    #[test]
    fn all_noise_gives_empty_reduct() {
        // every attribute constant, labels mixed: gamma stays 0
        let ds = discrete(&[&[1.0, 2.0], &[1.0, 2.0]], &[0, 1]);
        let r = forward_reduction(&ds, &Oracle::Prs, 0.0);
        assert!(r.selected.is_empty());
        assert!(r.gamma_trace.is_empty());
    }

    /// Independent brute-force PRS gamma: pairwise raw equality.
    fn brute_gamma(ds: &DecisionSystem, attrs: &[usize]) -> f64 {
        if attrs.is_empty() {
            return 0.0;
        }
        let n = ds.n();
        let mut positive = 0;
        for i in 0..n {
            let mut consistent = true;
            for j in 0..n {
                let equal = attrs.iter().all(|&a| ds.raw_row(i)[a] == ds.raw_row(j)[a]);
                if equal && ds.label(i) != ds.label(j) {
                    consistent = false;
                    break;
                }
            }
            if consistent {
                positive += 1;
            }
        }
        positive as f64 / n as f64
    }

    #[test]
    fn greedy_path_matches_exhaustive_evaluation() {
        let ds = discrete(
            &[
                &[0.0, 0.0, 0.0],
                &[1.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0],
                &[1.0, 1.0, 0.0],
                &[0.0, 0.0, 1.0],
                &[1.0, 0.0, 1.0],
            ],
            &[0, 0, 0, 0, 0, 1],
        );
        let r = forward_reduction(&ds, &Oracle::Prs, 0.0);
        assert_eq!(r.selected, vec![2, 0]);
        assert!(r.gamma_trace.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*r.gamma_trace.last().unwrap(), 1.0);

        // replay the greedy loop against the independent oracle
        let mut chosen: Vec<usize> = Vec::new();
        let mut g = 0.0;
        for step in 0.. {
            let mut best = (usize::MAX, f64::NEG_INFINITY);
            for a in 0..3 {
                if chosen.contains(&a) {
                    continue;
                }
                let mut trial = chosen.clone();
                trial.push(a);
                let bg = brute_gamma(&ds, &trial);
                if bg > best.1 || (bg == best.1 && a < best.0) {
                    best = (a, bg);
                }
            }
            if best.0 == usize::MAX || best.1 - g <= 0.0 {
                break;
            }
            chosen.push(best.0);
            g = best.1;
            assert!((r.gamma_trace[step] - g).abs() < 1e-12);
        }
        assert_eq!(chosen, r.selected);
    }

    #[test]
    fn gbprs_equals_prs_on_exhaustive_subsets() {
        // 4-attribute toy tables, all 15 non-empty subsets, exact equality
        let tables: Vec<(Vec<Vec<f64>>, Vec<usize>)> = vec![
            (
                vec![
                    vec![0.0, 1.0, 0.0, 2.0],
                    vec![0.0, 1.0, 0.0, 2.0],
                    vec![1.0, 0.0, 1.0, 0.0],
                    vec![1.0, 1.0, 0.0, 1.0],
                    vec![0.0, 0.0, 1.0, 1.0],
                ],
                vec![0, 1, 0, 1, 0],
            ),
            (
                vec![
                    vec![2.0, 2.0, 2.0, 2.0],
                    vec![2.0, 2.0, 2.0, 2.0],
                    vec![2.0, 2.0, 2.0, 2.0],
                ],
                vec![0, 0, 1],
            ),
        ];
        for (rows, labels) in tables {
            let ds = DecisionSystem::from_normalized(rows, labels);
            for mask in 1u32..(1 << 4) {
                let attrs: Vec<usize> = (0..4).filter(|a| mask & (1 << a) != 0).collect();
                let b = AttributeSubset::new(attrs, 4).unwrap();
                let prs = prs_positive_region(&ds, &b);
                let gbprs = Oracle::Gbprs.region(&ds, &b);
                assert_eq!(prs.positive, gbprs.positive);
                assert_eq!(prs.boundary, gbprs.boundary);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn nrs_monotone_in_delta(
            rows in proptest::collection::vec(
                (0.0f64..1.0, 0.0f64..1.0, 0usize..2), 2..20),
            d1 in 0.0f64..0.5,
            d2 in 0.0f64..0.5,
        ) {
            let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            let ds = DecisionSystem::from_normalized(
                rows.iter().map(|&(x, y, _)| vec![x, y]).collect(),
                rows.iter().map(|&(_, _, l)| l).collect(),
            );
            let b = AttributeSubset::full(2);
            let big = nrs_positive_region(&ds, &b, hi).positive;
            let small = nrs_positive_region(&ds, &b, lo).positive;
            for id in &big {
                prop_assert!(small.contains(id));
            }
        }

        #[test]
        fn prs_monotone_in_subset(
            rows in proptest::collection::vec(
                (0u8..3, 0u8..3, 0u8..3, 0usize..2), 2..20),
            mask in 1u32..8,
        ) {
            let ds = DecisionSystem::from_normalized(
                rows.iter().map(|&(a, b, c, _)| vec![a as f64, b as f64, c as f64]).collect(),
                rows.iter().map(|&(_, _, _, l)| l).collect(),
            );
            let small_attrs: Vec<usize> = (0..3).filter(|a| mask & (1 << a) != 0).collect();
            let b1 = AttributeSubset::new(small_attrs, 3).unwrap();
            let b2 = AttributeSubset::full(3);
            let p1 = prs_positive_region(&ds, &b1).positive;
            let p2 = prs_positive_region(&ds, &b2).positive;
            for id in &p1 {
                prop_assert!(p2.contains(id));
            }
        }

        #[test]
        fn regions_partition_the_universe(
            rows in proptest::collection::vec(
                (0.0f64..1.0, 0.0f64..1.0, 0usize..2), 2..16),
            delta in 0.0f64..0.5,
            lbs in 2usize..6,
        ) {
            let ds = DecisionSystem::from_normalized(
                rows.iter().map(|&(x, y, _)| vec![x, y]).collect(),
                rows.iter().map(|&(_, _, l)| l).collect(),
            );
            let b = AttributeSubset::full(2);
            let radius_mode = RadiusMode::Average;
            for oracle in [
                Oracle::Prs,
                Oracle::Nrs { delta },
                Oracle::Gbnrs { lbs, radius_mode },
                Oracle::Gbprs,
            ] {
                let r = oracle.region(&ds, &b);
                let mut all: Vec<usize> =
                    r.positive.iter().chain(&r.boundary).copied().collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..rows.len()).collect::<Vec<_>>());
                let g = dependence(&r, rows.len());
                prop_assert!((0.0..=1.0).contains(&g));
            }
        }

        #[test]
        fn reduct_trace_strictly_increasing(
            rows in proptest::collection::vec(
                (0u8..3, 0u8..3, 0u8..3, 0usize..2), 3..20),
        ) {
            let ds = DecisionSystem::from_normalized(
                rows.iter().map(|&(a, b, c, _)| vec![a as f64, b as f64, c as f64]).collect(),
                rows.iter().map(|&(_, _, _, l)| l).collect(),
            );
            let r = forward_reduction(&ds, &Oracle::Prs, 0.0);
            prop_assert_eq!(r.gamma_trace.len(), r.selected.len());
            prop_assert!(r.gamma_trace.windows(2).all(|w| w[1] > w[0]));
            // each increment equals the accepted attribute's significance
            let mut prefix = AttributeSubset::empty();
            let mut prev = 0.0;
            for (&a, &g) in r.selected.iter().zip(&r.gamma_trace) {
                let sig = significance(&ds, a, &prefix, &Oracle::Prs);
                prop_assert!(((g - prev) - sig).abs() < 1e-12);
                prefix = prefix.with(a);
                prev = g;
            }
        }
    }
}
