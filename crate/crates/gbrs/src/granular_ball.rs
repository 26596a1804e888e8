//! Ball geometry and the two-phase ball-generation pipeline:
//! purity-driven splitting followed by heterogeneous-overlap removal.
//!
//! All randomness-free: k-means is seeded from the smallest sample id per
//! label and every tie is broken deterministically, so the same inputs
//! always produce byte-identical ball sets.

use serde::{Deserialize, Serialize};

use crate::dataset::{AttributeSubset, DecisionSystem};

/// How a ball's radius is derived from member-to-center distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiusMode {
    /// Mean member-to-center distance (the default).
    Average,
    /// Maximum member-to-center distance.
    Maximum,
}

impl Default for RadiusMode {
    fn default() -> Self {
        RadiusMode::Average
    }
}

/// A ball: a set of samples summarized by its mean center, radius,
/// purity, and majority label, on a shared attribute subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GranularBall {
    /// Member sample ids, sorted ascending.
    pub members: Vec<usize>,
    pub center: Vec<f64>,
    pub radius: f64,
    pub purity: f64,
    /// Majority class id; ties go to the smallest class id.
    pub label: usize,
}

impl GranularBall {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_pure(&self) -> bool {
        self.purity == 1.0
    }

    pub fn smallest_member(&self) -> usize {
        self.members[0]
    }

    /// Center distance minus the radius sum; the pair overlaps iff this is
    /// strictly negative.
    pub fn boundary_distance(&self, other: &GranularBall) -> f64 {
        assert_eq!(
            self.center.len(),
            other.center.len(),
            "balls built on different attribute subsets"
        );
        let dist = self
            .center
            .iter()
            .zip(&other.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        dist - (self.radius + other.radius)
    }
}

/// A partition of the universe into balls on one attribute subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallSet {
    pub subset: AttributeSubset,
    /// Lower bound of ball size used during generation; 0 for the
    /// degenerate (exact-value-equality) mode.
    pub lbs: usize,
    pub balls: Vec<GranularBall>,
}

impl BallSet {
    /// All member ids across balls, sorted. Equals the generating id set
    /// whenever the partition invariant holds.
    pub fn covered_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.balls.iter().flat_map(|b| b.members.iter().copied()).collect();
        ids.sort_unstable();
        ids
    }
}

/// Computes center, radius, purity, and majority label for a member set.
pub fn make_ball(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    members: &[usize],
) -> GranularBall {
    make_ball_with(ds, subset, members, RadiusMode::Average)
}

pub fn make_ball_with(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    members: &[usize],
    radius_mode: RadiusMode,
) -> GranularBall {
    assert!(!members.is_empty(), "a granular-ball must be non-empty");
    let mut members: Vec<usize> = members.to_vec();
    members.sort_unstable();

    let dim = subset.len();
    let mut center = vec![0.0; dim];
    for &i in &members {
        for (c, &j) in center.iter_mut().zip(subset.indexes()) {
            *c += ds.row(i)[j];
        }
    }
    let n = members.len() as f64;
    for c in &mut center {
        *c /= n;
    }

    let dists = members.iter().map(|&i| ds.project_distance(subset, i, &center));
    let radius = match radius_mode {
        RadiusMode::Average => dists.sum::<f64>() / n,
        RadiusMode::Maximum => dists.fold(0.0, f64::max),
    };

    let mut counts = vec![0usize; ds.num_classes()];
    for &i in &members {
        counts[ds.label(i)] += 1;
    }
    // argmax with smallest-class-id tie-break
    let (label, majority) = counts
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
        .map(|(i, &c)| (i, c))
        .unwrap();
    let purity = majority as f64 / n;

    GranularBall {
        members,
        center,
        radius,
        purity,
        label,
    }
}

/// Splits an impure ball into one child per distinct label via k-means.
///
/// The initial centroid for each label present is the member with that
/// label having the smallest sample id. Equidistant points go to the
/// cluster whose seed has the smallest sample id.
pub fn split_ball(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    ball: &GranularBall,
    radius_mode: RadiusMode,
) -> Vec<GranularBall> {
    assert!(ball.purity < 1.0, "split_ball called on a pure ball");
    let mut seed_labels: Vec<usize> = ball.members.iter().map(|&i| ds.label(i)).collect();
    seed_labels.sort_unstable();
    seed_labels.dedup();
    // members are sorted, so the first member with a label is its smallest id
    let seeds: Vec<usize> = seed_labels
        .iter()
        .map(|&l| *ball.members.iter().find(|&&i| ds.label(i) == l).unwrap())
        .collect();
    kmeans_partition(ds, subset, &ball.members, &seeds)
        .into_iter()
        .map(|cluster| make_ball_with(ds, subset, &cluster, radius_mode))
        .collect()
}

/// Splits a pure ball in two via 2-means seeded with the two members
/// farthest apart (smallest-id pair among maximal-distance pairs).
/// Used during overlap removal, where label-count splitting degenerates.
fn split_pure_ball(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    ball: &GranularBall,
    radius_mode: RadiusMode,
) -> Vec<GranularBall> {
    assert!(ball.size() >= 2, "cannot split a singleton ball");
    let m = &ball.members;
    let mut best = (m[0], m[1]);
    let mut best_dist = -1.0;
    for (a, &i) in m.iter().enumerate() {
        for &j in &m[a + 1..] {
            let dist = ds.row_distance(subset, i, j);
            if dist > best_dist {
                best_dist = dist;
                best = (i, j);
            }
        }
    }
    kmeans_partition(ds, subset, m, &[best.0, best.1])
        .into_iter()
        .map(|cluster| make_ball_with(ds, subset, &cluster, radius_mode))
        .collect()
}

/// Deterministic k-means over `members` projected onto `subset`, seeded at
/// the rows named in `seeds`. Returns non-empty clusters, one per seed, in
/// seed order. Converges when no assignment changes; capped at 100 rounds.
fn kmeans_partition(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    members: &[usize],
    seeds: &[usize],
) -> Vec<Vec<usize>> {
    let k = seeds.len();
    debug_assert!(k >= 2);
    let points: Vec<Vec<f64>> = members.iter().map(|&i| ds.project(subset, i)).collect();
    let mut centers: Vec<Vec<f64>> = seeds.iter().map(|&i| ds.project(subset, i)).collect();
    let owners: Vec<usize> = seeds.to_vec();
    let mut assignment = vec![usize::MAX; members.len()];

    for _ in 0..100 {
        let mut changed = false;
        for (p, point) in points.iter().enumerate() {
            let mut best = 0;
            let mut best_dist = f64::INFINITY;
            for (c, center) in centers.iter().enumerate() {
                let dist = sq_dist(point, center);
                if dist < best_dist || (dist == best_dist && owners[c] < owners[best]) {
                    best = c;
                    best_dist = dist;
                }
            }
            if assignment[p] != best {
                assignment[p] = best;
                changed = true;
            }
        }

        // repair empty clusters by stealing the farthest point from the
        // largest cluster (ties: smallest cluster index, smallest sample id)
        loop {
            let mut sizes = vec![0usize; k];
            for &a in &assignment {
                sizes[a] += 1;
            }
            let Some(empty) = sizes.iter().position(|&s| s == 0) else {
                break;
            };
            let donor = (0..k)
                .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
                .unwrap();
            let victim = (0..members.len())
                .filter(|&p| assignment[p] == donor)
                .max_by(|&a, &b| {
                    let da = sq_dist(&points[a], &centers[donor]);
                    let db = sq_dist(&points[b], &centers[donor]);
                    da.partial_cmp(&db)
                        .unwrap()
                        .then(members[b].cmp(&members[a]))
                })
                .unwrap();
            assignment[victim] = empty;
            changed = true;
        }

        if !changed {
            break;
        }

        for (c, center) in centers.iter_mut().enumerate() {
            let assigned: Vec<usize> =
                (0..members.len()).filter(|&p| assignment[p] == c).collect();
            let n = assigned.len() as f64;
            for (dim, v) in center.iter_mut().enumerate() {
                *v = assigned.iter().map(|&p| points[p][dim]).sum::<f64>() / n;
            }
        }
    }

    let mut clusters = vec![Vec::new(); k];
    for (p, &a) in assignment.iter().enumerate() {
        clusters[a].push(members[p]);
    }
    debug_assert!(clusters.iter().all(|c| !c.is_empty()));
    clusters
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Phase one: split every ball with purity < 1 and size > `lbs` until the
/// ball count stops changing. Starts from all of `U`.
pub fn generate_balls(ds: &DecisionSystem, subset: &AttributeSubset, lbs: usize) -> BallSet {
    generate_balls_on(ds, subset, lbs, &(0..ds.n()).collect::<Vec<_>>(), RadiusMode::Average)
}

/// As [`generate_balls`], but over a restricted member set and with an
/// explicit radius mode.
pub fn generate_balls_on(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    lbs: usize,
    members: &[usize],
    radius_mode: RadiusMode,
) -> BallSet {
    assert!(lbs >= 2, "lbs must be at least 2");
    assert!(!members.is_empty());
    let mut balls = vec![make_ball_with(ds, subset, members, radius_mode)];
    loop {
        let mut next = Vec::with_capacity(balls.len());
        for ball in &balls {
            if ball.purity < 1.0 && ball.size() > lbs {
                next.extend(split_ball(ds, subset, ball, radius_mode));
            } else {
                next.push(ball.clone());
            }
        }
        let done = next.len() == balls.len();
        balls = next;
        if done {
            break;
        }
    }
    BallSet {
        subset: subset.clone(),
        lbs,
        balls,
    }
}

/// Phase two: while any two balls with different majority labels overlap
/// (boundary distance strictly negative), split the larger of the pair.
///
/// "Larger" means larger radius, then larger size, then smaller smallest
/// member id. Pure offenders are bisected by farthest-pair 2-means. The
/// size gate does not apply here; only singletons are unsplittable.
pub fn remove_heterogeneous_overlap(
    ds: &DecisionSystem,
    bs: BallSet,
    radius_mode: RadiusMode,
) -> BallSet {
    let subset = bs.subset.clone();
    let mut balls = bs.balls;
    'outer: loop {
        for i in 0..balls.len() {
            for j in (i + 1)..balls.len() {
                if balls[i].label == balls[j].label {
                    continue;
                }
                if balls[i].boundary_distance(&balls[j]) >= 0.0 {
                    continue;
                }
                let larger = pick_larger(&balls[i], &balls[j], i, j);
                if balls[larger].size() == 1 {
                    // contradictory duplicates; leave for downstream flagging
                    continue;
                }
                let target = balls.remove(larger);
                let children = if target.purity < 1.0 {
                    split_ball(ds, &subset, &target, radius_mode)
                } else {
                    split_pure_ball(ds, &subset, &target, radius_mode)
                };
                for (offset, child) in children.into_iter().enumerate() {
                    balls.insert(larger + offset, child);
                }
                continue 'outer;
            }
        }
        break;
    }
    BallSet {
        subset,
        lbs: bs.lbs,
        balls,
    }
}

fn pick_larger(a: &GranularBall, b: &GranularBall, ia: usize, ib: usize) -> usize {
    if a.radius != b.radius {
        return if a.radius > b.radius { ia } else { ib };
    }
    if a.size() != b.size() {
        return if a.size() > b.size() { ia } else { ib };
    }
    if a.smallest_member() < b.smallest_member() {
        ia
    } else {
        ib
    }
}

/// The full pipeline: generation followed by overlap removal.
pub fn gbnrs_pipeline(ds: &DecisionSystem, subset: &AttributeSubset, lbs: usize) -> BallSet {
    gbnrs_pipeline_on(
        ds,
        subset,
        lbs,
        &(0..ds.n()).collect::<Vec<_>>(),
        RadiusMode::Average,
    )
}

pub fn gbnrs_pipeline_on(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    lbs: usize,
    members: &[usize],
    radius_mode: RadiusMode,
) -> BallSet {
    let bs = generate_balls_on(ds, subset, lbs, members, radius_mode);
    remove_heterogeneous_overlap(ds, bs, radius_mode)
}

/// Degenerate (radius-to-zero) mode: one ball per class of exact raw-value
/// equality on the subset. Realizes the Pawlak limit of the ball model.
pub fn generate_balls_degenerate(ds: &DecisionSystem, subset: &AttributeSubset) -> BallSet {
    generate_balls_degenerate_on(ds, subset, &(0..ds.n()).collect::<Vec<_>>())
}

pub fn generate_balls_degenerate_on(
    ds: &DecisionSystem,
    subset: &AttributeSubset,
    members: &[usize],
) -> BallSet {
    let mut groups: Vec<(Vec<u64>, Vec<usize>)> = Vec::new();
    for &i in members {
        let key: Vec<u64> = subset
            .indexes()
            .iter()
            .map(|&j| ds.raw_row(i)[j].to_bits())
            .collect();
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, ids)) => ids.push(i),
            None => groups.push((key, vec![i])),
        }
    }
    let balls = groups
        .iter()
        .map(|(_, ids)| make_ball(ds, subset, ids))
        .collect();
    BallSet {
        subset: subset.clone(),
        lbs: 0,
        balls,
    }
}
