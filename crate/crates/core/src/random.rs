//! Seeded instance generators. All randomness goes through ChaCha so that a
//! seed reproduces the same instance on every platform.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::graph::{Digraph, UndirectedGraph, VertexId};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform `G(n, m)` conditioned on connectivity (rejection sampling).
/// Returns `None` if `m` cannot give a connected simple graph.
pub fn connected_gnm<R: Rng>(n: usize, m: usize, rng: &mut R) -> Option<UndirectedGraph> {
    let all: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    if n == 0 || m > all.len() || m + 1 < n {
        return None;
    }
    loop {
        let edges: Vec<_> = all.choose_multiple(rng, m).copied().collect();
        let g = UndirectedGraph::new(n, edges).expect("distinct pairs");
        if g.is_connected() {
            return Some(g);
        }
    }
}

/// Random `k`-tree on `n >= k + 1` vertices: a `(k+1)`-clique, then each new
/// vertex is joined to a uniformly chosen existing `k`-clique. Vertex ids
/// are shuffled so the construction order is not visible.
pub fn random_ktree<R: Rng>(n: usize, k: usize, rng: &mut R) -> UndirectedGraph {
    assert!(n > k, "a {k}-tree needs at least {} vertices", k + 1);
    let mut perm: Vec<VertexId> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    let mut cliques: Vec<Vec<VertexId>> = Vec::new();
    let base: Vec<VertexId> = (0..=k).collect();
    for (i, &a) in base.iter().enumerate() {
        for &b in &base[i + 1..] {
            edges.push((a, b));
        }
    }
    for skip in 0..=k {
        cliques.push(base.iter().copied().filter(|&v| v != skip).collect());
    }
    for v in k + 1..n {
        let c = cliques[rng.gen_range(0..cliques.len())].clone();
        for &u in &c {
            edges.push((u, v));
        }
        for skip in 0..k {
            let mut nc: Vec<VertexId> = c
                .iter()
                .copied()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, u)| u)
                .collect();
            nc.push(v);
            cliques.push(nc);
        }
    }
    let edges = edges.into_iter().map(|(a, b)| (perm[a], perm[b]));
    UndirectedGraph::new(n, edges).expect("k-tree is simple")
}

/// Random simple digraph: each ordered pair independently with probability
/// `p`, never both directions of a pair.
pub fn random_digraph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut arcs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                arcs.push(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
            }
        }
    }
    Digraph::new(n, arcs).expect("one arc per pair")
}

/// Random acyclic digraph: arcs only go forward in a random vertex order.
pub fn random_dag<R: Rng>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                arcs.push((order[i], order[j]));
            }
        }
    }
    Digraph::new(n, arcs).expect("one arc per pair")
}

/// Clauses of three distinct variables with random signs, as signed
/// 1-based literals.
pub fn random_clauses<R: Rng>(vars: usize, clauses: usize, rng: &mut R) -> Vec<[i64; 3]> {
    assert!(vars >= 3, "clauses need three distinct variables");
    let pool: Vec<i64> = (1..=vars as i64).collect();
    (0..clauses)
        .map(|_| {
            let pick: Vec<i64> = pool.choose_multiple(rng, 3).copied().collect();
            let lit = |v: i64, rng: &mut R| if rng.gen_bool(0.5) { v } else { -v };
            [lit(pick[0], rng), lit(pick[1], rng), lit(pick[2], rng)]
        })
        .collect()
}
