//! Lloyd's k-means over individuals, used to group the population before
//! the strategy dynamics.

use rand::seq::index::sample;
use rand::Rng;

const MAX_ITERATIONS: usize = 50;
const SHIFT_TOLERANCE: f64 = 1e-6;

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = dist_sq(point, centroid);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

/// Partitions `features` (one equal-length vector per individual) into `k`
/// non-empty groups of indices. Initial centroids are `k` distinct
/// individuals chosen at random; a cluster that empties is reseeded with
/// the individual farthest from its own centroid.
pub fn cluster_population(features: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let n = features.len();
    assert!(k >= 1 && k <= n, "need 1 <= k <= population");
    let mut centroids: Vec<Vec<f64>> = sample(rng, n, k)
        .into_iter()
        .map(|i| features[i].clone())
        .collect();
    let mut labels = vec![0usize; n];

    for _ in 0..MAX_ITERATIONS {
        for (label, point) in labels.iter_mut().zip(features) {
            *label = nearest(point, &centroids);
        }
        reseed_empty(features, &mut labels, &mut centroids);

        let mut shift: f64 = 0.0;
        for (c, centroid) in centroids.iter_mut().enumerate() {
            let members: Vec<&Vec<f64>> = features
                .iter()
                .zip(&labels)
                .filter(|(_, &l)| l == c)
                .map(|(f, _)| f)
                .collect();
            let mut mean = vec![0.0; centroid.len()];
            for m in &members {
                for (acc, v) in mean.iter_mut().zip(m.iter()) {
                    *acc += v;
                }
            }
            for v in &mut mean {
                *v /= members.len() as f64;
            }
            shift = shift.max(dist_sq(centroid, &mean).sqrt());
            *centroid = mean;
        }
        if shift < SHIFT_TOLERANCE {
            break;
        }
    }

    // Final assignment against the settled centroids; duplicates can still
    // leave a cluster empty, which the reseed repairs.
    for (label, point) in labels.iter_mut().zip(features) {
        *label = nearest(point, &centroids);
    }
    reseed_empty(features, &mut labels, &mut centroids);

    let mut clusters = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        clusters[l].push(i);
    }
    clusters
}

/// Moves, for each empty cluster, the individual farthest from its
/// centroid (taken from a cluster with at least two members) into it.
fn reseed_empty(features: &[Vec<f64>], labels: &mut [usize], centroids: &mut [Vec<f64>]) {
    let k = centroids.len();
    for c in 0..k {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        if sizes[c] > 0 {
            continue;
        }
        let far = (0..features.len())
            .filter(|&i| sizes[labels[i]] > 1)
            .max_by(|&a, &b| {
                dist_sq(&features[a], &centroids[labels[a]])
                    .total_cmp(&dist_sq(&features[b], &centroids[labels[b]]))
                    .then(b.cmp(&a))
            })
            .expect("k <= n leaves a donor cluster");
        labels[far] = c;
        centroids[c] = features[far].clone();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::rng_stream;
    use proptest::prelude::*;

    fn sorted(mut clusters: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        clusters.sort();
        clusters
    }

    #[test]
    fn identical_pairs_form_the_clusters() {
        let features = vec![vec![0.0, 0.0], vec![5.0, 5.0], vec![0.0, 0.0], vec![5.0, 5.0]];
        for seed in 0..50 {
            let mut rng = rng_stream(seed, 0);
            let c = sorted(cluster_population(&features, 2, &mut rng));
            assert_eq!(c, vec![vec![0, 2], vec![1, 3]], "seed {seed}");
        }
    }

    #[test]
    fn single_cluster_holds_everyone() {
        let features: Vec<Vec<f64>> = (0..7).map(|i| vec![i as f64]).collect();
        let mut rng = rng_stream(1, 0);
        assert_eq!(cluster_population(&features, 1, &mut rng), vec![(0..7).collect::<Vec<_>>()]);
    }

    #[test]
    fn k_equal_to_population_gives_singletons() {
        let features: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, -(i as f64)]).collect();
        let mut rng = rng_stream(2, 0);
        let c = sorted(cluster_population(&features, 6, &mut rng));
        assert_eq!(c, (0..6).map(|i| vec![i]).collect::<Vec<_>>());
    }

    #[test]
    fn duplicates_still_fill_every_cluster() {
        let features = vec![vec![1.0]; 5];
        let mut rng = rng_stream(3, 0);
        let c = cluster_population(&features, 5, &mut rng);
        assert!(c.iter().all(|m| m.len() == 1));
    }

    proptest! {
        #[test]
        fn partition_is_complete_and_nonempty(
            points in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 1..30),
            k_frac in 0.0f64..1.0,
            seed in any::<u64>(),
        ) {
            let n = points.len();
            let k = 1 + ((n - 1) as f64 * k_frac) as usize;
            let mut rng = rng_stream(seed, 0);
            let clusters = cluster_population(&points, k, &mut rng);
            prop_assert_eq!(clusters.len(), k);
            prop_assert!(clusters.iter().all(|c| !c.is_empty()));
            let mut all: Vec<usize> = clusters.into_iter().flatten().collect();
            all.sort();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        }
    }
}
