//! The independent answer checker: acyclicity, source/sink census and
//! transitive-edge counting on a concrete digraph.

use std::fmt;

use crate::error::GraphError;
use crate::graph::{Digraph, Instance, Orientation, VertexId};

/// True iff `d` has no directed cycle (Kahn's algorithm).
pub fn is_acyclic(d: &Digraph) -> bool {
    let n = d.vertex_count();
    let mut indeg: Vec<usize> = (0..n).map(|v| d.in_neighbors(v).len()).collect();
    let mut stack: Vec<VertexId> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(u) = stack.pop() {
        removed += 1;
        for &w in d.out_neighbors(u) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    removed == n
}

/// `(sources, sinks)`: vertices of in-degree 0 and of out-degree 0. An
/// isolated vertex is in both.
pub fn sources_and_sinks(d: &Digraph) -> (Vec<VertexId>, Vec<VertexId>) {
    let n = d.vertex_count();
    let sources = (0..n).filter(|&v| d.in_neighbors(v).is_empty()).collect();
    let sinks = (0..n).filter(|&v| d.out_neighbors(v).is_empty()).collect();
    (sources, sinks)
}

/// Arcs `u -> v` such that `v` stays reachable from `u` once the arc itself
/// is removed. Returns the sorted witness list; its length is the count.
pub fn transitive_edges(d: &Digraph) -> Vec<(VertexId, VertexId)> {
    let n = d.vertex_count();
    let mut mark = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut witness = Vec::new();
    for (idx, &(u, v)) in d.arcs().iter().enumerate() {
        // DFS from u's other out-neighbours; `mark` is stamped per arc.
        stack.clear();
        mark[u] = idx;
        for &w in d.out_neighbors(u) {
            if w != v && mark[w] != idx {
                mark[w] = idx;
                stack.push(w);
            }
        }
        let mut found = false;
        while let Some(x) = stack.pop() {
            if x == v {
                found = true;
                break;
            }
            for &w in d.out_neighbors(x) {
                if mark[w] != idx {
                    mark[w] = idx;
                    stack.push(w);
                }
            }
        }
        if found {
            witness.push((u, v));
        }
    }
    witness
}

pub fn count_transitive_edges(d: &Digraph) -> (usize, Vec<(VertexId, VertexId)>) {
    let w = transitive_edges(d);
    (w.len(), w)
}

/// Outcome of checking an orientation against an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub acyclic: bool,
    pub sources: Vec<VertexId>,
    pub sinks: Vec<VertexId>,
    pub transitive_count: usize,
    pub transitive: Vec<(VertexId, VertexId)>,
    pub pass: bool,
}

impl fmt::Display for Verdict {
    /// `PASS|FAIL acyclic=<0|1> sources=<list> sinks=<list> transitive=<count>`
    /// with 1-based, comma-separated vertex lists.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |vs: &[VertexId]| {
            vs.iter()
                .map(|v| (v + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "{} acyclic={} sources={} sinks={} transitive={}",
            if self.pass { "PASS" } else { "FAIL" },
            u8::from(self.acyclic),
            list(&self.sources),
            list(&self.sinks),
            self.transitive_count
        )
    }
}

/// Checks that `o` is an st-orientation of `inst.graph` with at most
/// `inst.k` transitive edges, honouring prescribed endpoints.
pub fn check_st_orientation(inst: &Instance, o: &Orientation) -> Result<Verdict, GraphError> {
    let d = Digraph::from_orientation(&inst.graph, o)?;
    Ok(check_digraph(inst, &d))
}

/// Same as [`check_st_orientation`] for an already materialised digraph.
pub fn check_digraph(inst: &Instance, d: &Digraph) -> Verdict {
    let acyclic = is_acyclic(d);
    let (sources, sinks) = sources_and_sinks(d);
    let transitive = transitive_edges(d);
    let endpoints_ok = sources.len() == 1
        && sinks.len() == 1
        && inst.s.is_none_or(|s| sources[0] == s)
        && inst.t.is_none_or(|t| sinks[0] == t);
    let pass = acyclic && endpoints_ok && transitive.len() <= inst.k;
    Verdict {
        acyclic,
        sources,
        sinks,
        transitive_count: transitive.len(),
        transitive,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::UndirectedGraph;

    fn dg(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::new(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn acyclicity_examples() {
        assert!(is_acyclic(&dg(3, &[(0, 1), (1, 2)])));
        assert!(!is_acyclic(&dg(3, &[(0, 1), (1, 2), (2, 0)])));
        assert!(is_acyclic(&dg(0, &[])));
    }

    #[test]
    fn sources_sinks_examples() {
        assert_eq!(
            sources_and_sinks(&dg(3, &[(0, 1), (1, 2)])),
            (vec![0], vec![2])
        );
        let c4 = dg(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(sources_and_sinks(&c4), (vec![0], vec![3]));
        assert_eq!(sources_and_sinks(&dg(2, &[])), (vec![0, 1], vec![0, 1]));
    }

    #[test]
    fn transitive_examples() {
        // s=0, a=1, t=2
        assert_eq!(
            count_transitive_edges(&dg(3, &[(0, 1), (1, 2), (0, 2)])),
            (1, vec![(0, 2)])
        );
        assert_eq!(
            count_transitive_edges(&dg(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])).0,
            0
        );
        // K4 ordered s=0 < a=1 < b=2 < t=3
        let k4 = dg(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(
            count_transitive_edges(&k4),
            (3, vec![(0, 2), (0, 3), (1, 3)])
        );
    }

    #[test]
    fn check_examples() {
        let p3 = UndirectedGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let inst = Instance::new(p3.clone(), Some(0), Some(2), 0).unwrap();
        let o = Orientation::from_arcs(&p3, [(0, 1), (1, 2)]).unwrap();
        let v = check_st_orientation(&inst, &o).unwrap();
        assert!(v.pass);
        assert_eq!(
            v.to_string(),
            "PASS acyclic=1 sources=1 sinks=3 transitive=0"
        );

        let k3 = UndirectedGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let o = Orientation::from_arcs(&k3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let v0 = check_st_orientation(&Instance::free(k3.clone(), 0), &o).unwrap();
        assert!(!v0.pass);
        assert_eq!(v0.transitive_count, 1);
        assert!(
            check_st_orientation(&Instance::free(k3, 1), &o)
                .unwrap()
                .pass
        );

        let c4 = UndirectedGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let cyc = Orientation::from_arcs(&c4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let v = check_st_orientation(&Instance::free(c4, 4), &cyc).unwrap();
        assert!(!v.acyclic && !v.pass);
    }

    #[test]
    fn prescribed_endpoints_must_match() {
        let p3 = UndirectedGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let o = Orientation::from_arcs(&p3, [(0, 1), (1, 2)]).unwrap();
        let swapped = Instance::new(p3, Some(2), Some(0), 0).unwrap();
        assert!(!check_st_orientation(&swapped, &o).unwrap().pass);
    }

    #[test]
    fn partial_orientation_is_an_error() {
        let p3 = UndirectedGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            Orientation::from_arcs(&p3, [(0, 1)]),
            Err(GraphError::PartialOrientation { missing: 1, .. })
        ));
        let short = Orientation::from_bits(vec![true]);
        assert!(check_st_orientation(&Instance::free(p3, 0), &short).is_err());
    }

    #[test]
    fn isolated_vertex_fails() {
        let g = UndirectedGraph::new(3, [(0, 1)]).unwrap();
        let o = Orientation::from_arcs(&g, [(0, 1)]).unwrap();
        assert!(
            !check_st_orientation(&Instance::free(g, 0), &o)
                .unwrap()
                .pass
        );
    }
}
