//! Independent oracles for the decoder: Bellman–Ford distances, exhaustive
//! pairing enumeration, and region-level closure of the corrected chain.

mod common;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_loss::lattice::{plaquettes_of_edge, EdgeId, TorusSize};
use toric_loss::loss::{build_degraded_graph, build_partition, build_restored_lattice};
use toric_loss::noise::NoiseParams;
use toric_loss::syndrome::compute_syndrome;
use toric_loss::{decoder, TrialOutcome};

/// Bellman–Ford over the restored lattice; exact because all weights are
/// dyadic rationals on the 2⁻²⁰ grid.
fn bellman_ford(
    restored: &toric_loss::loss::RestoredLattice,
    size: TorusSize,
    source: usize,
) -> Vec<f64> {
    let n = size.plaquette_count();
    let edges: Vec<(usize, usize, f64)> = (0..size.edge_count())
        .map(|i| {
            let e = EdgeId::from_index(i, size);
            let [p, q] = plaquettes_of_edge(e, size);
            (p.index(size), q.index(size), restored.weight_at(i))
        })
        .collect();
    let mut dist = vec![f64::INFINITY; n];
    dist[source] = 0.0;
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w) in &edges {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                changed = true;
            }
            if dist[v] + w < dist[u] {
                dist[u] = dist[v] + w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

#[test]
fn defect_distances_match_bellman_ford_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(2001);
    for instance in 0..40 {
        let size = TorusSize::new(6);
        let params = NoiseParams::new(rng.gen_range(0.05..0.4), rng.gen_range(0.03..0.25))
            .unwrap();
        let sample = common::random_sample(params, size, 3000, instance);
        let partition = build_partition(&sample.lost, size);
        let syndrome = compute_syndrome(&sample, &partition, size);
        if syndrome.defects.is_empty() {
            continue;
        }
        let superedges =
            build_degraded_graph(&partition, &sample.lost, params, size).unwrap();
        let restored = build_restored_lattice(&partition, &superedges, size);
        let graph = decoder::defect_distances(&syndrome, &partition, &restored, size);

        for (i, &region) in syndrome.defects.iter().enumerate() {
            let rep = partition.regions()[region as usize].rep.index(size);
            let oracle = bellman_ford(&restored, size, rep);
            for (j, &other) in syndrome.defects.iter().enumerate() {
                let target = partition.regions()[other as usize].rep.index(size);
                assert_eq!(
                    graph.distance(i, j),
                    oracle[target],
                    "instance {instance}, defects {i}->{j}"
                );
            }
        }
    }
}

#[test]
fn realized_paths_are_consistent_with_distances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    for instance in 0..40 {
        let size = TorusSize::new(6);
        let params = NoiseParams::new(rng.gen_range(0.0..0.35), rng.gen_range(0.05..0.25))
            .unwrap();
        let sample = common::random_sample(params, size, 3100, instance);
        let partition = build_partition(&sample.lost, size);
        let syndrome = compute_syndrome(&sample, &partition, size);
        let superedges =
            build_degraded_graph(&partition, &sample.lost, params, size).unwrap();
        let restored = build_restored_lattice(&partition, &superedges, size);
        let graph = decoder::defect_distances(&syndrome, &partition, &restored, size);
        for i in 0..graph.node_count() {
            for j in (i + 1)..graph.node_count() {
                let path = graph.path(i, j);
                let total: f64 = path.iter().map(|&e| restored.weight(e)).sum();
                assert_eq!(total, graph.distance(i, j));
            }
        }
    }
}

/// Minimum pairing weight by exhaustive enumeration of all (n−1)!! pairings.
fn brute_force_minimum(graph: &decoder::DefectGraph) -> f64 {
    fn go(remaining: &mut Vec<usize>, graph: &decoder::DefectGraph) -> f64 {
        if remaining.is_empty() {
            return 0.0;
        }
        let first = remaining[0];
        let mut best = f64::INFINITY;
        for k in 1..remaining.len() {
            let partner = remaining[k];
            let mut rest: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&v| v != first && v != partner)
                .collect();
            let total = graph.distance(first, partner) + go(&mut rest, graph);
            if total < best {
                best = total;
            }
        }
        best
    }
    let mut nodes: Vec<usize> = (0..graph.node_count()).collect();
    go(&mut nodes, graph)
}

#[test]
fn matching_weight_equals_exhaustive_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2003);
    let mut checked = 0;
    let mut trial = 0u64;
    while checked < 300 {
        trial += 1;
        let l = rng.gen_range(4..=8);
        let size = TorusSize::new(l);
        let params = NoiseParams::new(rng.gen_range(0.0..0.3), rng.gen_range(0.02..0.2))
            .unwrap();
        let sample = common::random_sample(params, size, 3200, trial);
        let partition = build_partition(&sample.lost, size);
        if partition.any_region_wraps() {
            continue;
        }
        let syndrome = compute_syndrome(&sample, &partition, size);
        if syndrome.defects.is_empty() || syndrome.defects.len() > 10 {
            continue;
        }
        let superedges =
            build_degraded_graph(&partition, &sample.lost, params, size).unwrap();
        let restored = build_restored_lattice(&partition, &superedges, size);
        let graph = decoder::defect_distances(&syndrome, &partition, &restored, size);
        let pairs = decoder::min_weight_matching(&graph);
        let chain = decoder::correction_chain(&pairs, &graph);
        assert_eq!(chain.total_weight, brute_force_minimum(&graph), "trial {trial}");
        checked += 1;
    }
}

#[test]
fn decoding_closes_all_defects() {
    // Region-level boundary of E Δ E′ must vanish; checked with the
    // from-scratch parity fold in `common`.
    let mut rng = ChaCha8Rng::seed_from_u64(2004);
    for trial in 0..1500 {
        let l = rng.gen_range(4..=8);
        let size = TorusSize::new(l);
        let params = NoiseParams::new(rng.gen_range(0.0..0.4), rng.gen_range(0.02..0.25))
            .unwrap();
        let record = toric_loss::trial::run_trial_detailed(
            params,
            size,
            toric_loss::TrialSeed {
                master_seed: 3300,
                trial_index: trial,
            },
        );
        if record.outcome == TrialOutcome::LossFailure {
            continue;
        }
        let correction = record.correction.as_ref().unwrap();
        let residual = record.sample.flipped.symmetric_difference(&correction.edges);
        assert!(
            common::region_boundary_is_empty(&residual, &record.partition, size),
            "trial {trial}"
        );
    }
}

#[test]
fn loss_free_decoding_reduces_to_uniform_matching() {
    // With no losses every superedge is a single qubit with weight J(p_com),
    // so matched distance equals J times the torus Manhattan metric.
    let size = TorusSize::new(8);
    let params = NoiseParams::new(0.0, 0.08).unwrap();
    for trial in 0..50 {
        let record = toric_loss::trial::run_trial_detailed(
            params,
            size,
            toric_loss::TrialSeed {
                master_seed: 3400,
                trial_index: trial,
            },
        );
        let Some(restored) = record.restored.as_ref() else {
            continue;
        };
        let j = restored.weight(EdgeId::from_index(0, size));
        for i in 0..size.edge_count() {
            assert_eq!(restored.weight_at(i), j);
        }
        let correction = record.correction.unwrap();
        let steps = correction.total_weight / j;
        assert_eq!(steps, steps.round());
    }
}
