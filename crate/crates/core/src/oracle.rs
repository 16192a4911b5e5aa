//! Exhaustive reference search over all orientations.
//!
//! Deliberately naive: edges are fixed one at a time (in BFS order so that
//! vertices become complete early) and a branch is cut only by rules that
//! can never exclude a valid answer — a directed cycle, a second completed
//! source or sink, a completed source/sink other than the prescribed one,
//! or (when bounded) a partial transitive count already over the limit,
//! which is sound because adding arcs never removes a path.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;

use crate::error::OracleError;
use crate::graph::{Instance, Orientation, UndirectedGraph, VertexId};

/// Default refusal threshold on the number of edges.
pub const DEFAULT_EDGE_CAP: usize = 24;

fn bfs_edge_order(g: &UndirectedGraph, start: VertexId) -> Vec<usize> {
    let n = g.vertex_count();
    let mut seen_v = vec![false; n];
    let mut seen_e = vec![false; g.edge_count()];
    let mut order = Vec::with_capacity(g.edge_count());
    for root in std::iter::once(start).chain(0..n) {
        if seen_v[root] {
            continue;
        }
        seen_v[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                let e = g.edge_index(u, w).unwrap();
                if !seen_e[e] {
                    seen_e[e] = true;
                    order.push(e);
                }
                if !seen_v[w] {
                    seen_v[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// What a leaf visitor wants next.
enum Control {
    Continue,
    Stop,
}

struct Search<'a, F> {
    g: &'a UndirectedGraph,
    s: Option<VertexId>,
    t: Option<VertexId>,
    order: Vec<usize>,
    forward: Vec<bool>,
    out: Vec<Vec<VertexId>>,
    indeg: Vec<usize>,
    remaining: Vec<usize>,
    sources: usize,
    sinks: usize,
    /// Branches whose partial transitive count exceeds this are cut.
    limit: Option<usize>,
    on_leaf: F,
    stopped: bool,
    /// Forced directions for the first edges of `order`.
    prefix: Vec<bool>,
    stamp: Vec<usize>,
    epoch: usize,
}

impl<'a, F> Search<'a, F>
where
    F: FnMut(&[bool], usize) -> Control,
{
    fn new(inst: &'a Instance, limit: Option<usize>, on_leaf: F) -> Self {
        let g = &inst.graph;
        let n = g.vertex_count();
        Search {
            g,
            s: inst.s,
            t: inst.t,
            order: bfs_edge_order(g, inst.s.unwrap_or(0)),
            forward: vec![false; g.edge_count()],
            out: vec![Vec::new(); n],
            indeg: vec![0; n],
            remaining: (0..n).map(|v| g.degree(v)).collect(),
            sources: 0,
            sinks: 0,
            limit,
            on_leaf,
            stopped: false,
            prefix: Vec::new(),
            stamp: vec![0; n],
            epoch: 0,
        }
    }

    fn reaches(
        &mut self,
        from: VertexId,
        to: VertexId,
        skip: Option<(VertexId, VertexId)>,
    ) -> bool {
        self.epoch += 1;
        let ep = self.epoch;
        let mut stack = vec![from];
        self.stamp[from] = ep;
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            for &w in &self.out[x] {
                if skip == Some((x, w)) || self.stamp[w] == ep {
                    continue;
                }
                self.stamp[w] = ep;
                stack.push(w);
            }
        }
        false
    }

    /// Transitive arcs of the partial digraph, stopping once `stop` are found.
    fn transitive_count(&mut self, stop: usize) -> usize {
        let mut count = 0;
        for u in 0..self.out.len() {
            for i in 0..self.out[u].len() {
                let v = self.out[u][i];
                if self.reaches(u, v, Some((u, v))) {
                    count += 1;
                    if count >= stop {
                        return count;
                    }
                }
            }
        }
        count
    }

    /// Registers `v` as complete; false if that breaks an endpoint rule.
    fn complete(&mut self, v: VertexId) -> bool {
        let is_source = self.indeg[v] == 0;
        let is_sink = self.out[v].is_empty();
        self.sources += usize::from(is_source);
        self.sinks += usize::from(is_sink);
        !(is_source && (self.sources > 1 || self.s.is_some_and(|s| s != v))
            || is_sink && (self.sinks > 1 || self.t.is_some_and(|t| t != v)))
    }

    fn uncomplete(&mut self, v: VertexId) {
        if self.indeg[v] == 0 {
            self.sources -= 1;
        }
        if self.out[v].is_empty() {
            self.sinks -= 1;
        }
    }

    fn run(&mut self) {
        // Isolated vertices are complete from the start.
        let mut ok = true;
        for v in 0..self.g.vertex_count() {
            if self.remaining[v] == 0 {
                ok &= self.complete(v);
            }
        }
        if ok {
            self.step(0);
        }
    }

    fn step(&mut self, depth: usize) {
        if depth == self.order.len() {
            let count = self.transitive_count(usize::MAX);
            if self.limit.is_none_or(|l| count <= l) {
                match (self.on_leaf)(&self.forward, count) {
                    Control::Continue => {}
                    Control::Stop => self.stopped = true,
                }
            }
            return;
        }
        let e = self.order[depth];
        let (a, b) = self.g.edges()[e];
        for fwd in [true, false] {
            if self.prefix.get(depth).is_some_and(|&p| p != fwd) {
                continue;
            }
            let (u, v) = if fwd { (a, b) } else { (b, a) };
            if self.reaches(v, u, None) {
                continue;
            }
            self.forward[e] = fwd;
            self.out[u].push(v);
            self.indeg[v] += 1;
            self.remaining[u] -= 1;
            self.remaining[v] -= 1;
            let mut done = Vec::with_capacity(2);
            let mut ok = true;
            for x in [u, v] {
                if self.remaining[x] == 0 {
                    done.push(x);
                    ok &= self.complete(x);
                }
            }
            if ok {
                if let Some(l) = self.limit {
                    ok = self.transitive_count(l + 1) <= l;
                }
            }
            if ok && !self.stopped {
                self.step(depth + 1);
            }
            for &x in done.iter().rev() {
                self.uncomplete(x);
            }
            self.remaining[u] += 1;
            self.remaining[v] += 1;
            self.indeg[v] -= 1;
            self.out[u].pop();
        }
    }
}

fn check_cap(g: &UndirectedGraph, cap: usize) -> Result<(), OracleError> {
    if g.edge_count() > cap {
        return Err(OracleError::TooManyEdges {
            got: g.edge_count(),
            cap,
        });
    }
    Ok(())
}

/// Exhaustive answer: the minimum, the first minimiser in enumeration
/// order, and the number of st-orientations per transitive count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer {
    pub min: usize,
    pub witness: Orientation,
    pub census: BTreeMap<usize, usize>,
}

impl OracleAnswer {
    /// Number of valid st-orientations (any transitive count).
    pub fn total(&self) -> usize {
        self.census.values().sum()
    }
}

/// Census and best `(count, bits)` of one parallel task.
type Part = (BTreeMap<usize, usize>, Option<(usize, Vec<bool>)>);

/// Edges whose directions are fixed per parallel task.
const SPLIT_BITS: usize = 4;

/// Minimum transitive count over all st-orientations honouring the
/// prescribed endpoints (`inst.k` is ignored), with witness and census.
/// `None` if no st-orientation exists. The search space is split on the
/// first few edges and the parts run in parallel; results are merged in
/// enumeration order, so the answer does not depend on scheduling.
pub fn min_transitive(inst: &Instance, cap: usize) -> Result<Option<OracleAnswer>, OracleError> {
    check_cap(&inst.graph, cap)?;
    let bits = SPLIT_BITS.min(inst.graph.edge_count());
    let parts: Vec<Part> = (0..1usize << bits)
        .into_par_iter()
        .map(|i| {
            let prefix: Vec<bool> = (0..bits).map(|j| i >> (bits - 1 - j) & 1 == 0).collect();
            let mut census = BTreeMap::new();
            let mut best: Option<(usize, Vec<bool>)> = None;
            let mut search = Search::new(inst, None, |bits: &[bool], count| {
                *census.entry(count).or_insert(0) += 1;
                if best.as_ref().is_none_or(|(b, _)| count < *b) {
                    best = Some((count, bits.to_vec()));
                }
                Control::Continue
            });
            search.prefix = prefix;
            search.run();
            drop(search);
            (census, best)
        })
        .collect();
    let mut census = BTreeMap::new();
    let mut best: Option<(usize, Vec<bool>)> = None;
    for (c, b) in parts {
        for (k, v) in c {
            *census.entry(k).or_insert(0) += v;
        }
        if let Some((count, bits)) = b {
            if best.as_ref().is_none_or(|(m, _)| count < *m) {
                best = Some((count, bits));
            }
        }
    }
    Ok(best.map(|(min, bits)| OracleAnswer {
        min,
        witness: Orientation::from_bits(bits),
        census,
    }))
}

/// Whether a non-transitive st-orientation exists (budget 0, prescribed
/// endpoints as given).
pub fn exists_nontransitive(inst: &Instance, cap: usize) -> Result<bool, OracleError> {
    Ok(decide(&inst.with_budget(0), cap)?.is_some())
}

/// Some st-orientation with at most `inst.k` transitive edges, if any.
pub fn decide(inst: &Instance, cap: usize) -> Result<Option<Orientation>, OracleError> {
    check_cap(&inst.graph, cap)?;
    let mut found: Option<Vec<bool>> = None;
    let mut search = Search::new(inst, Some(inst.k), |bits: &[bool], _| {
        found = Some(bits.to_vec());
        Control::Stop
    });
    search.run();
    drop(search);
    Ok(found.map(Orientation::from_bits))
}

/// Direction patterns (`true` = canonical forward) of the given edges over
/// every st-orientation with at most `inst.k` transitive edges.
pub fn boundary_classes(
    inst: &Instance,
    boundary: &[usize],
    cap: usize,
) -> Result<BTreeSet<Vec<bool>>, OracleError> {
    check_cap(&inst.graph, cap)?;
    let mut classes = BTreeSet::new();
    let mut search = Search::new(inst, Some(inst.k), |bits: &[bool], _| {
        classes.insert(boundary.iter().map(|&e| bits[e]).collect());
        Control::Continue
    });
    search.run();
    drop(search);
    Ok(classes)
}
