//! Structural checks for generated instances: diameter, maximum degree and
//! "subdivision of a triconnected graph".

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::graph::{UndirectedGraph, VertexId};

/// Which properties to check; `None` / `false` skips a check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Claims {
    pub max_degree: Option<usize>,
    pub max_diameter: Option<usize>,
    pub triconnected_subdivision: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureViolation {
    Degree {
        vertex: VertexId,
        degree: usize,
        max: usize,
    },
    /// `None` when the graph is disconnected.
    Diameter {
        diameter: Option<usize>,
        max: usize,
    },
    /// Suppressing a degree-2 vertex would create a parallel edge or loop.
    SuppressionMultiEdge {
        vertex: VertexId,
    },
    LowDegree {
        vertex: VertexId,
        degree: usize,
    },
    TooSmall {
        vertices: usize,
    },
    /// Removing these (at most two) vertices of the suppressed graph
    /// disconnects it.
    Separator {
        vertices: Vec<VertexId>,
    },
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Degree {
                vertex,
                degree,
                max,
            } => {
                write!(f, "vertex {} has degree {degree} > {max}", vertex + 1)
            }
            Self::Diameter {
                diameter: Some(d),
                max,
            } => write!(f, "diameter {d} > {max}"),
            Self::Diameter { diameter: None, .. } => write!(f, "graph is disconnected"),
            Self::SuppressionMultiEdge { vertex } => write!(
                f,
                "suppressing degree-2 vertex {} creates a parallel edge",
                vertex + 1
            ),
            Self::LowDegree { vertex, degree } => {
                write!(f, "vertex {} has degree {degree} < 2", vertex + 1)
            }
            Self::TooSmall { vertices } => {
                write!(f, "suppressed graph has only {vertices} vertices")
            }
            Self::Separator { vertices } => {
                let ids: Vec<String> = vertices.iter().map(|v| (v + 1).to_string()).collect();
                write!(f, "separating set {{{}}}", ids.join(","))
            }
        }
    }
}

/// Exact diameter by BFS from every vertex; `None` if disconnected.
pub fn diameter(g: &UndirectedGraph) -> Option<usize> {
    let mut best = 0;
    for v in 0..g.vertex_count() {
        for d in g.bfs_distances(v) {
            if d == usize::MAX {
                return None;
            }
            best = best.max(d);
        }
    }
    Some(best)
}

/// Result of repeatedly replacing a degree-2 vertex by an edge between its
/// neighbours. Vertex ids are those of the original graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suppressed {
    pub adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

pub fn suppress_degree_two(g: &UndirectedGraph) -> Result<Suppressed, StructureViolation> {
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = (0..g.vertex_count())
        .map(|v| (v, g.neighbors(v).iter().copied().collect()))
        .collect();
    let mut queue: VecDeque<VertexId> = (0..g.vertex_count())
        .filter(|&v| g.degree(v) == 2)
        .collect();
    while let Some(y) = queue.pop_front() {
        let Some(nb) = adj.get(&y) else { continue };
        if nb.len() != 2 {
            continue;
        }
        let (x, z) = {
            let mut it = nb.iter();
            (*it.next().unwrap(), *it.next().unwrap())
        };
        if adj[&x].contains(&z) {
            return Err(StructureViolation::SuppressionMultiEdge { vertex: y });
        }
        adj.remove(&y);
        for (a, b) in [(x, z), (z, x)] {
            let set = adj.get_mut(&a).unwrap();
            set.remove(&y);
            set.insert(b);
        }
    }
    Ok(Suppressed { adj })
}

/// Split-vertex flow network of a suppressed graph: node `2i` is `in(i)`,
/// `2i + 1` is `out(i)`, with a unit arc `in(i) -> out(i)` and a unit arc
/// `out(i) -> in(j)` per adjacency. Arcs are stored in pairs (`a ^ 1` is
/// the reverse of `a`).
struct FlowNet {
    head: Vec<usize>,
    cap: Vec<i32>,
    base: Vec<i32>,
    out: Vec<Vec<usize>>,
}

impl FlowNet {
    fn new(s: &Suppressed, idx: &BTreeMap<VertexId, usize>) -> Self {
        let n = idx.len();
        let mut net = FlowNet {
            head: Vec::new(),
            cap: Vec::new(),
            base: Vec::new(),
            out: vec![Vec::new(); 2 * n],
        };
        for (&x, &i) in idx {
            net.arc(2 * i, 2 * i + 1);
            for y in &s.adj[&x] {
                net.arc(2 * i + 1, 2 * idx[y]);
            }
        }
        net.cap = net.base.clone();
        net
    }

    fn arc(&mut self, a: usize, b: usize) {
        for (from, to, c) in [(a, b, 1), (b, a, 0)] {
            self.out[from].push(self.head.len());
            self.head.push(to);
            self.base.push(c);
        }
    }

    /// Internally vertex-disjoint `u`-`v` paths, counted up to `limit`.
    fn disjoint_paths(&mut self, u: usize, v: usize, limit: usize) -> usize {
        self.cap.copy_from_slice(&self.base);
        let (src, dst) = (2 * u + 1, 2 * v);
        let mut flow = 0;
        let mut via = vec![usize::MAX; self.out.len()];
        while flow < limit {
            via.fill(usize::MAX);
            let mut queue = VecDeque::from([src]);
            let mut reached = false;
            while let Some(x) = queue.pop_front() {
                if x == dst {
                    reached = true;
                    break;
                }
                for &a in &self.out[x] {
                    let y = self.head[a];
                    if self.cap[a] > 0 && y != src && via[y] == usize::MAX {
                        via[y] = a;
                        queue.push_back(y);
                    }
                }
            }
            if !reached {
                break;
            }
            let mut x = dst;
            while x != src {
                let a = via[x];
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                x = self.head[a ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

/// Checks that suppressing degree-2 vertices leaves a simple 3-connected
/// graph: at least 4 vertices and 3 internally disjoint paths between
/// every non-adjacent pair. By Even's argument it suffices to test pairs
/// containing one of three fixed vertices: a separator of size two misses
/// one of them. Reports the first violation found.
pub fn check_triconnected_subdivision(g: &UndirectedGraph) -> Result<(), StructureViolation> {
    for v in 0..g.vertex_count() {
        if g.degree(v) < 2 {
            return Err(StructureViolation::LowDegree {
                vertex: v,
                degree: g.degree(v),
            });
        }
    }
    let s = suppress_degree_two(g)?;
    let n = s.adj.len();
    if n < 4 {
        return Err(StructureViolation::TooSmall { vertices: n });
    }
    let idx: BTreeMap<VertexId, usize> = s.adj.keys().enumerate().map(|(i, &v)| (v, i)).collect();
    let verts: Vec<VertexId> = idx.keys().copied().collect();
    let mut net = FlowNet::new(&s, &idx);
    for i in 0..3 {
        for j in i + 1..n {
            if s.adj[&verts[i]].contains(&verts[j]) {
                continue;
            }
            if net.disjoint_paths(i, j, 3) < 3 {
                return Err(StructureViolation::Separator {
                    vertices: find_separator(&s, verts[i], verts[j]),
                });
            }
        }
    }
    Ok(())
}

/// A set of at most two vertices separating `a` from `b` (for reporting).
fn find_separator(s: &Suppressed, a: VertexId, b: VertexId) -> Vec<VertexId> {
    let others: Vec<VertexId> = s
        .adj
        .keys()
        .copied()
        .filter(|&v| v != a && v != b)
        .collect();
    let separates = |cut: &[VertexId]| {
        let mut seen: BTreeSet<VertexId> = cut.iter().copied().collect();
        seen.insert(a);
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &y in &s.adj[&x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        !seen.contains(&b)
    };
    for (i, &x) in others.iter().enumerate() {
        if separates(&[x]) {
            return vec![x];
        }
        for &y in &others[i + 1..] {
            if separates(&[x, y]) {
                return vec![x, y];
            }
        }
    }
    Vec::new()
}

/// Runs the requested checks; `Err` lists every failed claim.
pub fn validate_structure(
    g: &UndirectedGraph,
    claims: &Claims,
) -> Result<(), Vec<StructureViolation>> {
    let mut out = Vec::new();
    if let Some(max) = claims.max_degree {
        for v in 0..g.vertex_count() {
            if g.degree(v) > max {
                out.push(StructureViolation::Degree {
                    vertex: v,
                    degree: g.degree(v),
                    max,
                });
            }
        }
    }
    if let Some(max) = claims.max_diameter {
        match diameter(g) {
            Some(d) if d <= max => {}
            d => out.push(StructureViolation::Diameter { diameter: d, max }),
        }
    }
    if claims.triconnected_subdivision {
        if let Err(v) = check_triconnected_subdivision(g) {
            out.push(v);
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
