//! Workloads shared by the benchmarks.

use storient::random::{connected_gnm, random_ktree, rng};
use storient::{heuristic_decompose, make_nice, Instance, NiceTreeDecomposition};

/// A random 3-tree on `n` vertices with its min-fill nice decomposition.
pub fn ktree_workload(n: usize, seed: u64) -> (Instance, NiceTreeDecomposition) {
    let g = random_ktree(n, 3, &mut rng(seed));
    let ntd = make_nice(&heuristic_decompose(&g));
    (Instance::free(g, 0), ntd)
}

/// A random connected `G(n, m)` instance small enough for the oracle.
pub fn small_workload(n: usize, m: usize, seed: u64) -> Instance {
    Instance::free(
        connected_gnm(n, m, &mut rng(seed)).expect("feasible n, m"),
        0,
    )
}
