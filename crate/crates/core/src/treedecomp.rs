//! Tree decompositions: validation, a min-fill heuristic, and conversion to
//! the rooted nice form consumed by the solver.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::graph::{UndirectedGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    n: usize,
    bags: Vec<Vec<VertexId>>,
    tree_edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A bag names a vertex outside the graph.
    BagVertexOutOfRange { bag: usize, vertex: VertexId },
    /// A tree edge names a bag index that does not exist.
    TreeEdgeOutOfRange { edge: (usize, usize) },
    /// The tree edges contain a cycle.
    TreeHasCycle,
    /// The tree edges do not connect all bags.
    TreeDisconnected { components: usize },
    /// Condition 1: some vertex appears in no bag.
    VertexUncovered(VertexId),
    /// Condition 2: no bag holds both endpoints of an edge.
    EdgeUncovered(VertexId, VertexId),
    /// Condition 3: bags containing the vertex are not a connected subtree.
    VertexNotConnected(VertexId),
    /// Decomposition was built for a different vertex count.
    VertexCountMismatch { td: usize, graph: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BagVertexOutOfRange { bag, vertex } => {
                write!(
                    f,
                    "bag {} holds out-of-range vertex {}",
                    bag + 1,
                    vertex + 1
                )
            }
            Violation::TreeEdgeOutOfRange { edge } => {
                write!(
                    f,
                    "tree edge {}-{} names a missing bag",
                    edge.0 + 1,
                    edge.1 + 1
                )
            }
            Violation::TreeHasCycle => write!(f, "tree edges contain a cycle"),
            Violation::TreeDisconnected { components } => {
                write!(f, "tree edges leave {components} components")
            }
            Violation::VertexUncovered(v) => write!(f, "vertex {} is in no bag", v + 1),
            Violation::EdgeUncovered(u, v) => {
                write!(f, "edge {}-{} is in no bag", u + 1, v + 1)
            }
            Violation::VertexNotConnected(v) => {
                write!(f, "bags containing vertex {} are not connected", v + 1)
            }
            Violation::VertexCountMismatch { td, graph } => {
                write!(f, "decomposition has {td} vertices, graph has {graph}")
            }
        }
    }
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

impl TreeDecomposition {
    /// Bags are normalised to sorted, duplicate-free vertex lists.
    pub fn new(n: usize, bags: Vec<Vec<VertexId>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition {
            n,
            bags,
            tree_edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn bags(&self) -> &[Vec<VertexId>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    /// Largest bag size minus one. Decompositions whose bags hold at most one
    /// vertex (including the empty graph) report 0 rather than -1.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks the three decomposition conditions plus tree shape. Returns
    /// every violation found, not just the first.
    pub fn validate(&self, g: &UndirectedGraph) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let nb = self.bags.len();
        if self.n != g.vertex_count() {
            out.push(Violation::VertexCountMismatch {
                td: self.n,
                graph: g.vertex_count(),
            });
            return Err(out);
        }
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= self.n {
                    out.push(Violation::BagVertexOutOfRange { bag: i, vertex: v });
                }
            }
        }
        let mut edges_ok = true;
        for &(a, b) in &self.tree_edges {
            if a >= nb || b >= nb {
                out.push(Violation::TreeEdgeOutOfRange { edge: (a, b) });
                edges_ok = false;
            }
        }
        if !out.is_empty() {
            return Err(out);
        }
        if edges_ok {
            let mut dsu = DisjointSets::new(nb);
            let mut cyclic = false;
            for &(a, b) in &self.tree_edges {
                if !dsu.union(a, b) {
                    cyclic = true;
                }
            }
            if cyclic {
                out.push(Violation::TreeHasCycle);
            }
            let components = (0..nb).filter(|&i| dsu.find(i) == i).count();
            if components > 1 {
                out.push(Violation::TreeDisconnected { components });
            }
        }

        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                holders[v].push(i);
            }
        }
        for (v, hs) in holders.iter().enumerate() {
            if hs.is_empty() {
                out.push(Violation::VertexUncovered(v));
            }
        }
        for &(u, v) in g.edges() {
            let covered = holders[u]
                .iter()
                .any(|&i| self.bags[i].binary_search(&v).is_ok());
            if !covered {
                out.push(Violation::EdgeUncovered(u, v));
            }
        }
        let adj = self.tree_adjacency();
        let mut mark = vec![usize::MAX; nb];
        for (v, hs) in holders.iter().enumerate() {
            if hs.len() < 2 {
                continue;
            }
            let mut stack = vec![hs[0]];
            mark[hs[0]] = v;
            let mut reached = 1;
            while let Some(b) = stack.pop() {
                for &c in &adj[b] {
                    if mark[c] != v && self.bags[c].binary_search(&v).is_ok() {
                        mark[c] = v;
                        reached += 1;
                        stack.push(c);
                    }
                }
            }
            if reached != hs.len() {
                out.push(Violation::VertexNotConnected(v));
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }
}

/// Min-fill elimination ordering, ties broken by minimum degree and then by
/// smallest vertex id. Valid for any graph; disconnected pieces are chained.
pub fn heuristic_decompose(g: &UndirectedGraph) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::new(0, vec![Vec::new()], Vec::new());
    }
    let mut adj: Vec<BTreeSet<VertexId>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive: BTreeSet<VertexId> = (0..n).collect();
    let mut position = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut bags = Vec::with_capacity(n);

    let fill_in = |adj: &[BTreeSet<VertexId>], v: VertexId| -> usize {
        let nb: Vec<_> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };

    while !alive.is_empty() {
        let v = *alive
            .iter()
            .min_by_key(|&&v| (fill_in(&adj, v), adj[v].len(), v))
            .unwrap();
        let nb: Vec<_> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &nb {
            adj[a].remove(&v);
        }
        alive.remove(&v);
        position[v] = order.len();
        order.push(v);
        let mut bag = nb;
        bag.push(v);
        bags.push(bag);
    }

    // Bag of v hangs below the bag of its earliest-eliminated later neighbour.
    let mut tree_edges = Vec::new();
    let mut roots = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        let v = order[i];
        let parent = bag.iter().filter(|&&w| w != v).map(|&w| position[w]).min();
        match parent {
            Some(p) => tree_edges.push((i, p)),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        tree_edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(n, bags, tree_edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    Introduce(VertexId),
    Forget(VertexId),
    Join,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Leaf => write!(f, "leaf"),
            NodeKind::Introduce(v) => write!(f, "introduce({})", v + 1),
            NodeKind::Forget(v) => write!(f, "forget({})", v + 1),
            NodeKind::Join => write!(f, "join"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub bag: Vec<VertexId>,
    pub kind: NodeKind,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
}

/// Rooted binary decomposition. Node indices are a post-order: every child
/// index is smaller than its parent's, so a forward scan is bottom-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    n: usize,
    nodes: Vec<NiceNode>,
    root: usize,
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, bag: Vec<VertexId>, kind: NodeKind, children: Vec<usize>) -> usize {
        let id = self.nodes.len();
        for &c in &children {
            self.nodes[c].parent = Some(id);
        }
        self.nodes.push(NiceNode {
            bag,
            kind,
            children,
            parent: None,
        });
        id
    }

    /// Walks from `node` (holding bag `from`) to bag `to`: forget the
    /// vertices leaving in descending order, then introduce newcomers
    /// ascending.
    fn transition(&mut self, mut node: usize, from: &[VertexId], to: &[VertexId]) -> usize {
        let mut bag = from.to_vec();
        let leaving: Vec<_> = from
            .iter()
            .rev()
            .filter(|v| !to.contains(v))
            .copied()
            .collect();
        for v in leaving {
            bag.retain(|&x| x != v);
            node = self.push(bag.clone(), NodeKind::Forget(v), vec![node]);
        }
        for &v in to.iter().filter(|v| !from.contains(v)) {
            let pos = bag.binary_search(&v).unwrap_err();
            bag.insert(pos, v);
            node = self.push(bag.clone(), NodeKind::Introduce(v), vec![node]);
        }
        node
    }
}

impl NiceTreeDecomposition {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// The underlying plain decomposition (one bag per node).
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.parent.map(|p| (i, p)))
            .collect();
        TreeDecomposition::new(self.n, bags, edges)
    }

    /// Structural checks of the nice form plus validity of the underlying
    /// decomposition for `g`.
    pub fn validate(&self, g: &UndirectedGraph) -> Result<(), Vec<String>> {
        let mut errs = Vec::new();
        if !self.nodes[self.root].bag.is_empty() {
            errs.push("root bag is not empty".to_string());
        }
        if self.nodes[self.root].parent.is_some() {
            errs.push("root has a parent".to_string());
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let child_bag = |j: usize| &self.nodes[node.children[j]].bag;
            for &c in &node.children {
                if c >= i || self.nodes[c].parent != Some(i) {
                    errs.push(format!("node {i}: child {c} is not linked bottom-up"));
                }
            }
            let ok = match (node.kind, node.children.len()) {
                (NodeKind::Leaf, 0) => node.bag.is_empty(),
                (NodeKind::Introduce(v), 1) => {
                    let cb = child_bag(0);
                    !cb.contains(&v)
                        && node.bag.contains(&v)
                        && node.bag.len() == cb.len() + 1
                        && cb.iter().all(|x| node.bag.contains(x))
                }
                (NodeKind::Forget(v), 1) => {
                    let cb = child_bag(0);
                    cb.contains(&v)
                        && !node.bag.contains(&v)
                        && cb.len() == node.bag.len() + 1
                        && node.bag.iter().all(|x| cb.contains(x))
                }
                (NodeKind::Join, 2) => *child_bag(0) == node.bag && *child_bag(1) == node.bag,
                _ => false,
            };
            if !ok {
                errs.push(format!("node {i}: malformed {} node", node.kind));
            }
        }
        if let Err(vs) = self.to_tree_decomposition().validate(g) {
            errs.extend(vs.iter().map(ToString::to_string));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }
}

/// Converts a valid decomposition into nice form of the same width.
///
/// Rooted at bag 0. Each tree edge becomes a forget chain followed by an
/// introduce chain; nodes with several children become a left-deep cascade
/// of joins over copies of the bag; the root bag is forgotten down to the
/// empty set.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let nb = td.bags().len();
    let mut b = NiceBuilder { nodes: Vec::new() };
    if nb == 0 {
        let leaf = b.push(Vec::new(), NodeKind::Leaf, Vec::new());
        return NiceTreeDecomposition {
            n: td.vertex_count(),
            nodes: b.nodes,
            root: leaf,
        };
    }
    let adj = td.tree_adjacency();
    // Iterative DFS order from bag 0.
    let mut parent = vec![usize::MAX; nb];
    let mut order = Vec::with_capacity(nb);
    let mut seen = vec![false; nb];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in adj[x].iter().rev() {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for &x in &order[1..] {
        children[parent[x]].push(x);
    }
    for c in &mut children {
        c.sort_unstable();
    }
    let bags = td.bags();
    let mut top: Vec<usize> = vec![usize::MAX; nb];
    for &x in order.iter().rev() {
        let mut subs: Vec<usize> = children[x]
            .iter()
            .map(|&c| b.transition(top[c], &bags[c], &bags[x]))
            .collect();
        let node = match subs.len() {
            0 => {
                let leaf = b.push(Vec::new(), NodeKind::Leaf, Vec::new());
                b.transition(leaf, &[], &bags[x])
            }
            1 => subs.pop().unwrap(),
            _ => {
                let mut acc = subs[0];
                for &s in &subs[1..] {
                    acc = b.push(bags[x].clone(), NodeKind::Join, vec![acc, s]);
                }
                acc
            }
        };
        top[x] = node;
    }
    let root = b.transition(top[0], &bags[0], &[]);
    NiceTreeDecomposition {
        n: td.vertex_count(),
        nodes: b.nodes,
        root,
    }
}

/// Convenience: min-fill decomposition made nice.
pub fn nice_decomposition(g: &UndirectedGraph) -> NiceTreeDecomposition {
    make_nice(&heuristic_decompose(g))
}

/// Edges of `g` that every introduce node can see: for each edge, whether
/// some `Introduce(x)` node with `x` one endpoint has the other endpoint in
/// its bag.
pub fn edges_seen_at_introduce(
    ntd: &NiceTreeDecomposition,
    g: &UndirectedGraph,
) -> HashSet<(VertexId, VertexId)> {
    let mut seen = HashSet::new();
    for node in ntd.nodes() {
        if let NodeKind::Introduce(v) = node.kind {
            for &w in &node.bag {
                if w != v && g.has_edge(v, w) {
                    seen.insert((v.min(w), v.max(w)));
                }
            }
        }
    }
    seen
}
