//! The layered-graph path-count lemma.
//!
//! Hypotheses on a graph with vertex layers `V_1, ..., V_k` (indices mod `k`)
//! and out-degree cap `D`:
//!
//! 1. every out-degree (with multiplicity) is at most `D`;
//! 2. `v ∈ V_i` sends edges only into `V_{i+1}`, except for `i = 1, 3`;
//! 3. `v ∈ V_1` sends edges only into `V_2 ∪ V_3`;
//! 4. `v ∈ V_3` sends edges only into `V_3 ∪ V_4`, and if `u ∈ v⁺ ∩ V_3`
//!    then `u⁺ ⊂ V_4`;
//! 5. `v ∈ V_j` for `3 < j <= k` has exactly one outgoing edge.
//!
//! Under these, every vertex starts at most `4 D^4` paths of length `k - 1`,
//! hence `ρ(A)^(k-1) <= 4 D^4`.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::digraph::{path_counts, DiGraph};
use crate::matrix::mat_pow;
use crate::scalar::{big_to_real, Real};
use crate::spectral::{bracket_from_power, SpectralBracket};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredPartition {
    /// Layer of each vertex, in `1..=k`.
    pub layer: Vec<usize>,
    pub k: usize,
    /// Out-degree cap.
    pub d: u64,
}

impl LayeredPartition {
    fn next(&self, i: usize) -> usize {
        i % self.k + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerViolation {
    PartitionSize { expected: usize, got: usize },
    LayerOutOfRange { vertex: usize, layer: usize },
    /// Hypothesis 1.
    DegreeExceeded { vertex: usize, degree: u64 },
    /// Hypotheses 2-4: edge `vertex -> successor` leaves the allowed layers.
    BadSuccessor { condition: u8, vertex: usize, successor: usize },
    /// Hypothesis 4, second part: `vertex -> via` inside `V_3`, then
    /// `via -> successor` outside `V_4`.
    ThirdLayerChain { vertex: usize, via: usize, successor: usize },
    /// Hypothesis 5.
    NotSingleSuccessor { vertex: usize, out_degree: u64 },
}

impl LayerViolation {
    /// Number of the hypothesis that fails, `0` for malformed partitions.
    pub fn condition(&self) -> u8 {
        match self {
            LayerViolation::PartitionSize { .. } | LayerViolation::LayerOutOfRange { .. } => 0,
            LayerViolation::DegreeExceeded { .. } => 1,
            LayerViolation::BadSuccessor { condition, .. } => *condition,
            LayerViolation::ThirdLayerChain { .. } => 4,
            LayerViolation::NotSingleSuccessor { .. } => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LayeredReport {
    pub violations: Vec<LayerViolation>,
}

impl LayeredReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_layered(g: &DiGraph, p: &LayeredPartition) -> LayeredReport {
    let mut violations = Vec::new();
    if p.layer.len() != g.vertex_count() {
        violations.push(LayerViolation::PartitionSize { expected: g.vertex_count(), got: p.layer.len() });
        return LayeredReport { violations };
    }
    for (vertex, &layer) in p.layer.iter().enumerate() {
        if layer == 0 || layer > p.k {
            violations.push(LayerViolation::LayerOutOfRange { vertex, layer });
        }
    }
    if !violations.is_empty() {
        return LayeredReport { violations };
    }

    for v in 0..g.vertex_count() {
        let i = p.layer[v];
        let degree = g.out_degree(v);
        if degree > p.d {
            violations.push(LayerViolation::DegreeExceeded { vertex: v, degree });
        }
        let (condition, allowed): (u8, Vec<usize>) = match i {
            1 => (3, vec![2, 3]),
            3 => (4, vec![3, p.next(3)]),
            _ => (2, vec![p.next(i)]),
        };
        for &(u, _) in g.successors(v) {
            if !allowed.contains(&p.layer[u]) {
                violations.push(LayerViolation::BadSuccessor { condition, vertex: v, successor: u });
            }
            if i == 3 && p.layer[u] == 3 {
                for &(w, _) in g.successors(u) {
                    if p.layer[w] != p.next(3) {
                        violations.push(LayerViolation::ThirdLayerChain { vertex: v, via: u, successor: w });
                    }
                }
            }
        }
        if i > 3 && degree != 1 {
            violations.push(LayerViolation::NotSingleSuccessor { vertex: v, out_degree: degree });
        }
    }
    LayeredReport { violations }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayeredBound<F> {
    /// Largest number of paths of length `k - 1` from a single vertex.
    pub max_count: BigUint,
    /// `4 D^4`.
    pub bound: BigUint,
    pub bound_holds: bool,
    /// Path counts equal the exact row sums of `A^(k-1)`.
    pub row_sums_agree: bool,
    /// Row-sum bracket of `A^(k-1)`.
    pub bracket: SpectralBracket<F>,
    /// `ρ(A)^(k-1) <= max_count`, via the certified bracket.
    pub spectral_certified: bool,
}

/// Counts paths of length `k - 1` exactly and compares with `4 D^4`.
/// Fails with the hypothesis report if the partition does not qualify.
pub fn layered_path_bound<F: Real>(g: &DiGraph, p: &LayeredPartition) -> Result<LayeredBound<F>, LayeredReport> {
    let report = check_layered(g, p);
    if !report.passed() {
        return Err(report);
    }
    let len = p.k - 1;
    let counts = path_counts(g, len);
    let max_count = counts.iter().max().cloned().unwrap_or_default();
    let bound = BigUint::from(4u8) * BigUint::from(p.d).pow(4);

    let power = mat_pow(&g.to_matrix(), len as u64);
    let row_sums_agree = power.row_sums() == counts;
    let bracket = bracket_from_power::<F>(&power, len as u64);
    let slack = F::one() + F::lit(8.0) * F::from_usize_lossy(len) * F::epsilon();
    let rho_pow = bracket.upper.powi(len as i32);
    let spectral_certified = row_sums_agree && rho_pow <= big_to_real::<F>(&max_count) * slack;
    Ok(LayeredBound {
        bound_holds: max_count <= bound,
        max_count,
        bound,
        row_sums_agree,
        bracket,
        spectral_certified,
    })
}

/// Random graph satisfying all five hypotheses, layer sizes in `1..=2D`.
pub fn make_layered_graph(k: usize, d: u64, seed: u64) -> (DiGraph, LayeredPartition) {
    make_layered_graph_sized(k, d, (2 * d) as usize, seed)
}

/// As [`make_layered_graph`] with layer sizes in `1..=max_layer_size`.
/// Deterministic per seed.
pub fn make_layered_graph_sized(k: usize, d: u64, max_layer_size: usize, seed: u64) -> (DiGraph, LayeredPartition) {
    assert!(k >= 5, "layered graphs need k >= 5");
    assert!(d >= 1 && max_layer_size >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=max_layer_size)).collect();
    let mut layers: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut layer_of = Vec::new();
    for (i, &s) in sizes.iter().enumerate() {
        layers.push((layer_of.len()..layer_of.len() + s).collect());
        layer_of.extend(std::iter::repeat_n(i + 1, s));
    }
    let layer = |i: usize| &layers[i - 1];

    // V_3 splits into receivers (may be hit from V_3, exit to V_4 only)
    // and senders (exit to V_4 or to receivers).
    let receivers: Vec<usize> = layer(3).iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    let mut g = DiGraph::new(layer_of.len());
    for v in 0..layer_of.len() {
        let i = layer_of[v];
        let targets: Vec<usize> = match i {
            1 => layer(2).iter().chain(layer(3)).copied().collect(),
            2 => layer(3).clone(),
            3 if receivers.contains(&v) => layer(4).clone(),
            3 => layer(4).iter().chain(&receivers).copied().collect(),
            _ => {
                let next = layer(i % k + 1);
                let t = *next.choose(&mut rng).unwrap();
                g.add_edge(v, t, 1).unwrap();
                continue;
            }
        };
        let edges = rng.gen_range(1..=d);
        for _ in 0..edges {
            let t = *targets.choose(&mut rng).unwrap();
            g.add_edge(v, t, 1).unwrap();
        }
    }
    (g, LayeredPartition { layer: layer_of, k, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn cycle_with_layers(k: usize) -> (DiGraph, LayeredPartition) {
        let mut g = DiGraph::new(k);
        for i in 0..k {
            g.add_edge(i, (i + 1) % k, 1).unwrap();
        }
        (g, LayeredPartition { layer: (1..=k).collect(), k, d: 1 })
    }

    /// Exhaustive depth-first enumeration of paths, independent of the DP.
    fn enumerate_paths(g: &DiGraph, v: usize, len: usize) -> u64 {
        if len == 0 {
            return 1;
        }
        g.successors(v).iter().map(|&(u, m)| m * enumerate_paths(g, u, len - 1)).sum()
    }

    #[test]
    fn cycle_passes_with_unit_degree() {
        let (g, p) = cycle_with_layers(7);
        assert!(check_layered(&g, &p).passed());
        let b = layered_path_bound::<f64>(&g, &p).unwrap();
        assert!(b.max_count.is_one());
        assert_eq!(b.bound, BigUint::from(4u8));
        assert!(b.bound_holds && b.row_sums_agree && b.spectral_certified);
        assert_eq!((b.bracket.lower, b.bracket.upper), (1.0, 1.0));
    }

    #[test]
    fn second_layer_self_edge_fails_condition_two() {
        let (mut g, p) = cycle_with_layers(6);
        let mut p2 = p.clone();
        p2.layer = vec![1, 2, 2, 3, 4, 5];
        p2.k = 5;
        // vertex 1 (V_2) -> vertex 2 (V_2)
        let report = check_layered(&g, &p2);
        assert!(report
            .violations
            .contains(&LayerViolation::BadSuccessor { condition: 2, vertex: 1, successor: 2 }));
        g.add_edge(5, 5, 1).unwrap();
        let report = check_layered(&g, &p);
        assert!(report.violations.iter().any(|v| v.condition() == 5));
        assert!(report.violations.iter().any(|v| v.condition() == 2));
    }

    #[test]
    fn third_layer_chain_detected() {
        // layers: 0:V1 1:V2 2,3:V3 4:V4 5:V5 ; 2 -> 3 -> 3 is illegal
        let mut g = DiGraph::new(6);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 3), (4, 5), (5, 0)] {
            g.add_edge(u, v, 1).unwrap();
        }
        let p = LayeredPartition { layer: vec![1, 2, 3, 3, 4, 5], k: 5, d: 2 };
        let r = check_layered(&g, &p);
        assert!(r.violations.contains(&LayerViolation::ThirdLayerChain { vertex: 2, via: 3, successor: 3 }));
        assert!(layered_path_bound::<f64>(&g, &p).is_err());
    }

    #[test]
    fn degree_and_partition_errors() {
        let (mut g, p) = cycle_with_layers(5);
        g.add_edge(0, 2, 1).unwrap();
        let r = check_layered(&g, &p);
        assert_eq!(r.violations, vec![LayerViolation::DegreeExceeded { vertex: 0, degree: 2 }]);
        let bad = LayeredPartition { layer: vec![1, 2, 3], k: 5, d: 1 };
        assert_eq!(check_layered(&g, &bad).violations[0].condition(), 0);
        let out = LayeredPartition { layer: vec![1, 2, 3, 4, 6], k: 5, d: 1 };
        assert_eq!(check_layered(&g, &out).violations, vec![LayerViolation::LayerOutOfRange { vertex: 4, layer: 6 }]);
    }

    #[test]
    fn generator_satisfies_hypotheses() {
        let (g, p) = make_layered_graph(5, 1, 0);
        assert!(check_layered(&g, &p).passed());
        let (g, p) = make_layered_graph(6, 2, 1);
        assert!(check_layered(&g, &p).passed());
        let b = layered_path_bound::<f64>(&g, &p).unwrap();
        assert!(b.bound_holds);
        assert!(b.max_count <= BigUint::from(64u8));
        let exhaustive = (0..g.vertex_count()).map(|v| enumerate_paths(&g, v, 5)).max().unwrap();
        assert_eq!(b.max_count, BigUint::from(exhaustive));
    }

    #[test]
    fn generator_is_deterministic() {
        assert_eq!(make_layered_graph(8, 3, 42), make_layered_graph(8, 3, 42));
        assert_ne!(make_layered_graph(8, 3, 42).0, make_layered_graph(8, 3, 43).0);
    }

    #[test]
    fn singleton_layers_give_decorated_cycle() {
        for seed in 0..20 {
            let (g, p) = make_layered_graph_sized(5, 1, 1, seed);
            assert_eq!(g.vertex_count(), 5);
            assert!(check_layered(&g, &p).passed());
            assert!((0..5).all(|v| g.out_degree(v) == 1));
            assert_eq!(g.edge_count(), 5);
        }
    }

    #[test]
    fn exhaustive_counts_within_bound() {
        for (k, d, cap) in [(6u64, 2u64, 64u64), (8, 3, 324)] {
            for seed in 0..50 {
                let (g, p) = make_layered_graph(k as usize, d, seed);
                let m = (0..g.vertex_count()).map(|v| enumerate_paths(&g, v, k as usize - 1)).max().unwrap();
                assert!(m <= cap, "k={k} d={d} seed={seed}: {m}");
                let b = layered_path_bound::<f64>(&g, &p).unwrap();
                assert_eq!(b.max_count, BigUint::from(m));
            }
        }
    }
}
