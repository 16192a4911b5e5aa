//! Undirected graphs, orientations and the induced digraphs.
//!
//! Vertices are dense ids `0..n`. Edges are stored canonically as `(u, v)`
//! with `u < v`, sorted, so an edge index is stable for a given graph and
//! orientations can be stored as one bit per edge.

use std::collections::VecDeque;
use std::fmt;

use crate::error::GraphError;

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<VertexId>>,
    labels: Option<Vec<String>>,
}

impl UndirectedGraph {
    /// Builds a simple graph, rejecting self-loops, parallel edges and
    /// out-of-range endpoints.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &canon {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(UndirectedGraph {
            n,
            edges: canon,
            adj,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount {
                got: labels.len(),
                n: self.n,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list, `u < v`, lexicographically sorted.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn edge_index(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// BFS distances from `src`; `usize::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, src: VertexId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Returns the same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[VertexId]) -> Result<Self, GraphError> {
        let g = UndirectedGraph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))?;
        match &self.labels {
            Some(labels) => {
                let mut moved = vec![String::new(); self.n];
                for (v, l) in labels.iter().enumerate() {
                    moved[perm[v]] = l.clone();
                }
                g.with_labels(moved)
            }
            None => Ok(g),
        }
    }
}

/// A direction for every edge of a particular graph, indexed by the graph's
/// canonical edge order. `true` means the edge `(u, v)` with `u < v` is
/// oriented `u -> v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    forward: Vec<bool>,
}

impl Orientation {
    pub fn from_bits(forward: Vec<bool>) -> Self {
        Orientation { forward }
    }

    /// Builds an orientation from `(tail, head)` pairs. Every edge of `g` must
    /// be covered exactly once.
    pub fn from_arcs(
        g: &UndirectedGraph,
        arcs: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut dir: Vec<Option<bool>> = vec![None; g.edge_count()];
        for (tail, head) in arcs {
            let idx = g
                .edge_index(tail, head)
                .ok_or(GraphError::NotAnEdge(tail, head))?;
            if dir[idx].is_some() {
                return Err(GraphError::DuplicateArc(tail, head));
            }
            dir[idx] = Some(tail < head);
        }
        let missing = dir.iter().filter(|d| d.is_none()).count();
        if missing > 0 {
            return Err(GraphError::PartialOrientation {
                missing,
                total: g.edge_count(),
            });
        }
        Ok(Orientation {
            forward: dir.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.forward
    }

    /// `(tail, head)` for every edge in canonical edge order.
    pub fn arcs<'a>(
        &'a self,
        g: &'a UndirectedGraph,
    ) -> impl Iterator<Item = (VertexId, VertexId)> + 'a {
        g.edges()
            .iter()
            .zip(&self.forward)
            .map(|(&(u, v), &fwd)| if fwd { (u, v) } else { (v, u) })
    }

    /// Every arc flipped.
    pub fn reversed(&self) -> Self {
        Orientation {
            forward: self.forward.iter().map(|b| !b).collect(),
        }
    }
}

/// A simple directed graph with adjacency lists in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(VertexId, VertexId)>,
    out: Vec<Vec<VertexId>>,
    inc: Vec<Vec<VertexId>>,
}

impl Digraph {
    pub fn new(
        n: usize,
        arcs: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut list: Vec<_> = arcs.into_iter().collect();
        for &(u, v) in &list {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateArc(w[0].0, w[0].1));
        }
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for &(u, v) in &list {
            out[u].push(v);
            inc[v].push(u);
        }
        Ok(Digraph {
            n,
            arcs: list,
            out,
            inc,
        })
    }

    /// The digraph `g` becomes under orientation `o`.
    pub fn from_orientation(g: &UndirectedGraph, o: &Orientation) -> Result<Self, GraphError> {
        if o.len() != g.edge_count() {
            return Err(GraphError::PartialOrientation {
                missing: g.edge_count().saturating_sub(o.len()),
                total: g.edge_count(),
            });
        }
        Digraph::new(g.vertex_count(), o.arcs(g))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Sorted arc list.
    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.inc[v]
    }

    pub fn reversed(&self) -> Self {
        Digraph::new(self.n, self.arcs.iter().map(|&(u, v)| (v, u)))
            .expect("reversal of a simple digraph is simple")
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.arcs.iter().map(|(u, v)| format!("{u}->{v}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A problem instance: graph, optional prescribed source/sink, and the
/// transitive-edge budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: UndirectedGraph,
    pub s: Option<VertexId>,
    pub t: Option<VertexId>,
    pub k: usize,
}

impl Instance {
    pub fn new(
        graph: UndirectedGraph,
        s: Option<VertexId>,
        t: Option<VertexId>,
        k: usize,
    ) -> Result<Self, GraphError> {
        let n = graph.vertex_count();
        for v in [s, t].into_iter().flatten() {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
        }
        if let (Some(a), Some(b)) = (s, t) {
            if a == b {
                return Err(GraphError::SourceEqualsSink(a));
            }
        }
        Ok(Instance { graph, s, t, k })
    }

    /// Instance without prescribed endpoints.
    pub fn free(graph: UndirectedGraph, k: usize) -> Self {
        Instance {
            graph,
            s: None,
            t: None,
            k,
        }
    }

    pub fn with_budget(&self, k: usize) -> Self {
        Instance { k, ..self.clone() }
    }
}
