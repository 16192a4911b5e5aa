mod common;

use std::collections::HashSet;

use storient::dp::record_tables;
use storient::graph::{Digraph, Orientation};
use storient::oracle::{self, DEFAULT_EDGE_CAP};
use storient::random::{connected_gnm, rng};
use storient::treedecomp::edges_seen_at_introduce;
use storient::verify::{is_acyclic, transitive_edges};
use storient::{
    check_st_orientation, heuristic_decompose, make_nice, nice_decomposition, solve, Instance,
    Outcome,
};

/// Looks for a directed cycle by trying every ordering of every vertex
/// subset of size >= 2.
fn has_cycle_by_enumeration(d: &Digraph) -> bool {
    let n = d.vertex_count();
    let arc = |a: usize, b: usize| d.out_neighbors(a).contains(&b);
    fn extend(path: &mut Vec<usize>, n: usize, arc: &dyn Fn(usize, usize) -> bool) -> bool {
        let last = *path.last().unwrap();
        if path.len() >= 2 && arc(last, path[0]) {
            return true;
        }
        for v in 0..n {
            if !path.contains(&v) && arc(last, v) {
                path.push(v);
                if extend(path, n, arc) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    (0..n).any(|s| extend(&mut vec![s], n, &arc))
}

#[test]
fn acyclicity_matches_cycle_enumeration() {
    for n in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        for code in 0..3usize.pow(pairs.len() as u32) {
            let mut c = code;
            let mut arcs = Vec::new();
            for &(a, b) in &pairs {
                match c % 3 {
                    1 => arcs.push((a, b)),
                    2 => arcs.push((b, a)),
                    _ => {}
                }
                c /= 3;
            }
            let d = Digraph::new(n, arcs).unwrap();
            assert_eq!(
                is_acyclic(&d),
                !has_cycle_by_enumeration(&d),
                "{:?}",
                d.arcs()
            );
        }
    }
}

/// Every orientation of a graph, checked one by one.
fn all_orientations(m: usize) -> impl Iterator<Item = Orientation> {
    (0u32..1 << m)
        .map(move |bits| Orientation::from_bits((0..m).map(|i| bits >> i & 1 == 1).collect()))
}

#[test]
fn census_counts_verified_orientations_and_duality_holds() {
    let mut r = rng(31);
    for _ in 0..40 {
        let g = connected_gnm(6, 8, &mut r).unwrap();
        let free = Instance::free(g.clone(), usize::MAX);
        let mut passing = 0;
        for o in all_orientations(g.edge_count()) {
            let v = check_st_orientation(&free, &o).unwrap();
            if !v.pass {
                continue;
            }
            passing += 1;
            let (s, t) = (v.sources[0], v.sinks[0]);
            let swapped = Instance::new(g.clone(), Some(t), Some(s), usize::MAX).unwrap();
            let back = check_st_orientation(&swapped, &o.reversed()).unwrap();
            assert!(back.pass);
            assert_eq!(back.transitive_count, v.transitive_count);
        }
        let total = oracle::min_transitive(&free, DEFAULT_EDGE_CAP)
            .unwrap()
            .map_or(0, |a| a.total());
        assert_eq!(total, passing);
    }
}

#[test]
fn transitive_count_is_invariant_under_relabelling() {
    let mut r = rng(32);
    for i in 0..200 {
        let n = 3 + i % 8;
        let d = storient::random::random_dag(n, 0.4, &mut r);
        let perm: Vec<usize> = (0..n).map(|v| (v * 3 + i) % n).collect();
        if perm.iter().collect::<HashSet<_>>().len() != n {
            continue;
        }
        let moved = Digraph::new(n, d.arcs().iter().map(|&(a, b)| (perm[a], perm[b]))).unwrap();
        assert_eq!(transitive_edges(&d).len(), transitive_edges(&moved).len());
    }
}

#[test]
fn nice_decompositions_are_valid_and_width_preserving() {
    let mut graphs = Vec::new();
    for n in 1..=6 {
        graphs.extend(common::connected_representatives(n));
    }
    let mut r = rng(33);
    for i in 0..300 {
        let n = 7 + i % 3;
        graphs.push(connected_gnm(n, n - 1 + i % (n * (n - 3) / 2 + 2), &mut r).unwrap());
    }
    for i in 0..500 {
        // Rejection sampling needs some density to hit connected graphs.
        let n = 10 + i % 20;
        let m = 2 * n + i % (2 * n);
        graphs.push(connected_gnm(n, m, &mut r).unwrap());
    }
    for g in graphs {
        let td = heuristic_decompose(&g);
        assert_eq!(td.validate(&g), Ok(()));
        let ntd = make_nice(&td);
        assert_eq!(ntd.validate(&g), Ok(()), "{:?}", g.edges());
        assert_eq!(ntd.width(), td.width());
        let seen = edges_seen_at_introduce(&ntd, &g);
        for &(u, v) in g.edges() {
            assert!(seen.contains(&(u, v)) || seen.contains(&(v, u)));
        }
    }
}

#[test]
fn stored_records_satisfy_invariants() {
    let mut r = rng(34);
    for i in 0..60 {
        let n = 4 + i % 5;
        let g = connected_gnm(n, n - 1 + i % n, &mut r).unwrap();
        let ntd = nice_decomposition(&g);
        let k = i % 3;
        let inst = Instance::new(g, Some(0), None, k).unwrap();
        let sets = record_tables(&inst, &ntd).unwrap();
        for (set, node) in sets.iter().zip(ntd.nodes()) {
            let size = node.bag.len();
            let keys: HashSet<_> = set.records().iter().map(|r| r.key).collect();
            assert_eq!(keys.len(), set.len());
            for rec in set.records() {
                assert!(rec.cost <= k);
                let paths: Vec<_> = rec.key.paths.pairs(size).collect();
                for &(a, b) in &paths {
                    assert_ne!(a, b);
                    for &(c, d) in &paths {
                        if b == c {
                            assert!(rec.key.paths.get(a, d), "paths not closed");
                        }
                    }
                }
                assert!(rec.key.forbidden.pairs(size).all(|(a, b)| a != b));
            }
        }
    }
}

/// With endpoints prescribed, the solver's answers are exactly the free
/// solutions whose source and sink match.
#[test]
fn prescribed_endpoints_filter_free_solutions() {
    let mut r = rng(35);
    for _ in 0..30 {
        let g = connected_gnm(6, 8, &mut r).unwrap();
        let ntd = nice_decomposition(&g);
        for (s, t) in [(0, 5), (2, 3)] {
            let inst = Instance::new(g.clone(), Some(s), Some(t), 1).unwrap();
            let free = Instance::free(g.clone(), 1);
            let exists = all_orientations(g.edge_count()).any(|o| {
                let v = check_st_orientation(&free, &o).unwrap();
                v.pass && v.sources == [s] && v.sinks == [t]
            });
            let rep = solve(&inst, &ntd).unwrap();
            assert_eq!(rep.is_yes(), exists);
            if let Outcome::Yes { orientation, .. } = &rep.outcome {
                let v = check_st_orientation(&free, orientation).unwrap();
                assert!(v.pass && v.sources == [s] && v.sinks == [t]);
            }
        }
    }
}
