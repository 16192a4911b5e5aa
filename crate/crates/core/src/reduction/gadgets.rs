//! Gadget templates, loaded from the checked-in library file, and a small
//! labelled-graph builder used to wire them together.

use std::collections::{BTreeSet, HashMap};

use crate::error::{OracleError, ReductionError};
use crate::graph::{Instance, UndirectedGraph, VertexId};
use crate::oracle;

const LIBRARY: &str = include_str!("../../data/gadgets.txt");

/// One end of a template edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Vertex(usize),
    /// Open end of a boundary edge, glued when instantiated.
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateEdge {
    pub name: Option<String>,
    pub a: End,
    pub b: End,
}

impl TemplateEdge {
    /// The closed end of a boundary edge.
    fn inner(&self) -> Option<usize> {
        match (self.a, self.b) {
            (End::Vertex(v), End::Open) | (End::Open, End::Vertex(v)) => Some(v),
            _ => None,
        }
    }
}

/// A gadget: named vertices, internal and boundary edges, designated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub name: String,
    pub vertices: Vec<String>,
    pub edges: Vec<TemplateEdge>,
    pub marks: Vec<(String, usize)>,
}

impl Template {
    fn new(name: &str) -> Self {
        Template {
            name: name.to_string(),
            vertices: Vec::new(),
            edges: Vec::new(),
            marks: Vec::new(),
        }
    }

    fn vertex(&mut self, name: &str) -> usize {
        match self.vertices.iter().position(|v| v == name) {
            Some(i) => i,
            None => {
                self.vertices.push(name.to_string());
                self.vertices.len() - 1
            }
        }
    }

    fn end(&mut self, tok: &str) -> End {
        if tok == "*" {
            End::Open
        } else {
            End::Vertex(self.vertex(tok))
        }
    }

    fn add_edge(&mut self, name: Option<&str>, a: &str, b: &str) {
        let (a, b) = (self.end(a), self.end(b));
        self.edges.push(TemplateEdge {
            name: name.map(str::to_string),
            a,
            b,
        });
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge(&self, name: &str) -> Option<&TemplateEdge> {
        self.edges.iter().find(|e| e.name.as_deref() == Some(name))
    }

    /// Names of the boundary edges, in file order.
    pub fn ports(&self) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|e| e.inner().is_some())
            .map(|e| e.name.as_deref().unwrap_or("-"))
            .collect()
    }

    /// Vertices carrying the given role.
    pub fn marked(&self, role: &str) -> Vec<usize> {
        self.marks
            .iter()
            .filter(|(r, _)| r == role)
            .map(|&(_, v)| v)
            .collect()
    }

    /// Vertices other than those marked `s` / `t`, which are shared with
    /// the host rather than owned by the gadget.
    pub fn own_vertex_count(&self) -> usize {
        let shared = self
            .marks
            .iter()
            .filter(|(r, _)| r == "s" || r == "t")
            .count();
        self.vertices.len() - shared
    }

    fn validate(&self) -> Result<(), ReductionError> {
        let err = |msg: String| Err(ReductionError::Library(format!("{}: {msg}", self.name)));
        let mut names = std::collections::HashSet::new();
        for e in &self.edges {
            if matches!((e.a, e.b), (End::Open, End::Open)) {
                return err("edge with two open ends".into());
            }
            if e.inner().is_some() && e.name.is_none() {
                return err("boundary edges must be named".into());
            }
            if let Some(n) = &e.name {
                if !names.insert(n.clone()) {
                    return err(format!("edge name `{n}` used twice"));
                }
            }
        }
        let mut pairs = std::collections::HashSet::new();
        for e in &self.edges {
            if let (End::Vertex(a), End::Vertex(b)) = (e.a, e.b) {
                if a == b || !pairs.insert((a.min(b), a.max(b))) {
                    return err(format!(
                        "edge {}-{} is a loop or repeated",
                        self.vertices[a], self.vertices[b]
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The parsed library plus the split-gadget assembler.
#[derive(Clone, Debug)]
pub struct GadgetLibrary {
    pub fork: Template,
    pub extended_fork: Template,
    pub variable: Template,
}

impl GadgetLibrary {
    /// The library compiled into the crate.
    pub fn builtin() -> Self {
        Self::parse(LIBRARY).expect("built-in gadget library is well formed")
    }

    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let mut found: HashMap<String, Template> = HashMap::new();
        let mut current: Option<Template> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| ReductionError::Library(format!("line {}: {msg}", i + 1));
            match (toks.as_slice(), current.as_mut()) {
                ([], _) => {}
                (["gadget", name], None) => current = Some(Template::new(name)),
                (["edge", name, a, b], Some(t)) => {
                    let name = (*name != "-").then_some(*name);
                    t.add_edge(name, a, b);
                }
                (["mark", role, v], Some(t)) => {
                    let v = t.vertex(v);
                    t.marks.push((role.to_string(), v));
                }
                (["end"], Some(_)) => {
                    let t = current.take().unwrap();
                    t.validate()?;
                    found.insert(t.name.clone(), t);
                }
                _ => return Err(bad(&format!("unexpected `{line}`"))),
            }
        }
        if current.is_some() {
            return Err(ReductionError::Library("unterminated gadget block".into()));
        }
        let mut take = |name: &str| {
            found
                .remove(name)
                .ok_or_else(|| ReductionError::Library(format!("missing gadget `{name}`")))
        };
        let lib = GadgetLibrary {
            fork: take("fork")?,
            extended_fork: take("extended_fork")?,
            variable: take("variable")?,
        };
        for (t, ports) in [
            (&lib.fork, &["e1", "e9", "e10"][..]),
            (&lib.extended_fork, &["e1", "e9", "e10", "e11"][..]),
            (&lib.variable, &["x", "xbar"][..]),
        ] {
            if t.ports() != ports {
                return Err(ReductionError::Library(format!(
                    "{}: boundary edges {:?}, expected {:?}",
                    t.name,
                    t.ports(),
                    ports
                )));
            }
            if t.name != "variable" && t.marked("f").len() != 1 {
                return Err(ReductionError::Library(format!(
                    "{}: needs one `f` mark",
                    t.name
                )));
            }
        }
        if lib.variable.marked("s").len() != 1 || lib.variable.marked("t").len() != 1 {
            return Err(ReductionError::Library(
                "variable: needs `s` and `t` marks".into(),
            ));
        }
        Ok(lib)
    }

    /// Split gadget `S_k` for `k >= 2`: forks `f1 .. f{k-1}`, each one's
    /// `e9` end feeding the next one's `e1`. Boundary edges: `in`, then
    /// `out1 .. outk` (the `e10` of every fork, then the last `e9`).
    pub fn split(&self, k: usize) -> Template {
        assert!(k >= 2, "S_{k} has no fork; handled by the caller");
        let fork = &self.fork;
        let (e1, e9, e10) = (
            fork.edge("e1").unwrap(),
            fork.edge("e9").unwrap(),
            fork.edge("e10").unwrap(),
        );
        let local = |i: usize, v: usize| format!("f{i}.{}", fork.vertices[v]);
        let mut t = Template::new(&format!("split{k}"));
        let forks = k - 1;
        for i in 1..=forks {
            for e in &fork.edges {
                if let (End::Vertex(a), End::Vertex(b)) = (e.a, e.b) {
                    let name = e.name.as_ref().map(|n| format!("f{i}.{n}"));
                    t.add_edge(name.as_deref(), &local(i, a), &local(i, b));
                }
            }
            if i == 1 {
                t.add_edge(Some("in"), "*", &local(1, e1.inner().unwrap()));
            } else {
                t.add_edge(
                    Some(&format!("f{i}.e1")),
                    &local(i - 1, e9.inner().unwrap()),
                    &local(i, e1.inner().unwrap()),
                );
            }
            for &m in &fork.marked("f") {
                let v = t.vertex(&local(i, m));
                t.marks.push(("f".into(), v));
            }
        }
        for i in 1..=forks {
            t.add_edge(
                Some(&format!("out{i}")),
                &local(i, e10.inner().unwrap()),
                "*",
            );
        }
        t.add_edge(
            Some(&format!("out{k}")),
            &local(forks, e9.inner().unwrap()),
            "*",
        );
        t
    }
}

/// Labelled graph under construction. Labels are unique; asking for an
/// existing label returns its id.
#[derive(Clone, Debug, Default)]
pub struct Builder {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<(VertexId, VertexId)>,
}

/// Ids of an instantiated template.
#[derive(Clone, Debug)]
pub struct Placed {
    pub vertices: Vec<VertexId>,
    /// Boundary edge name -> its closed (inner) end.
    pub ports: HashMap<String, VertexId>,
    pub marks: Vec<(String, VertexId)>,
}

impl Placed {
    pub fn port(&self, name: &str) -> VertexId {
        self.ports[name]
    }

    pub fn marked<'a>(&'a self, role: &'a str) -> impl Iterator<Item = VertexId> + 'a {
        self.marks
            .iter()
            .filter(move |(r, _)| r == role)
            .map(|&(_, v)| v)
    }
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, label: &str) -> VertexId {
        if let Some(&v) = self.index.get(label) {
            return v;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    pub fn edge(&mut self, a: VertexId, b: VertexId) {
        self.edges.push((a, b));
    }

    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) -> bool {
        match self
            .edges
            .iter()
            .position(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
        {
            Some(i) => {
                self.edges.remove(i);
                true
            }
            None => false,
        }
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Adds a copy of `t` with labels `<kind>:<index>:<local>`. Vertices
    /// listed in `shared` (local name -> existing id) are reused instead.
    pub fn place(
        &mut self,
        t: &Template,
        kind: &str,
        index: &str,
        shared: &[(&str, VertexId)],
    ) -> Placed {
        let vertices: Vec<VertexId> = t
            .vertices
            .iter()
            .map(|name| match shared.iter().find(|(n, _)| n == name) {
                Some(&(_, id)) => id,
                None => self.vertex(&format!("{kind}:{index}:{name}")),
            })
            .collect();
        let mut ports = HashMap::new();
        for e in &t.edges {
            match (e.a, e.b) {
                (End::Vertex(a), End::Vertex(b)) => self.edge(vertices[a], vertices[b]),
                _ => {
                    let name = e.name.clone().expect("validated: boundary edges are named");
                    ports.insert(name, vertices[e.inner().unwrap()]);
                }
            }
        }
        let marks = t
            .marks
            .iter()
            .map(|(r, v)| (r.clone(), vertices[*v]))
            .collect();
        Placed {
            vertices,
            ports,
            marks,
        }
    }

    pub fn finish(self) -> Result<UndirectedGraph, ReductionError> {
        Ok(UndirectedGraph::new(self.labels.len(), self.edges)?.with_labels(self.labels)?)
    }
}

/// A template embedded for oracle checks: shared `s`/`t`, and every open
/// end closed by a pendant `p` on its own `s - h - p - h' - t` path, so
/// the pendant may pass flow in either direction. `boundary[i]` is the
/// graph edge of the `i`-th boundary edge (in `ports()` order) and
/// `inner[i]` / `pendant[i]` its gadget-side / host-side endpoint.
#[derive(Clone, Debug)]
pub struct NeutralHost {
    pub graph: UndirectedGraph,
    pub s: VertexId,
    pub t: VertexId,
    pub boundary: Vec<usize>,
    pub inner: Vec<VertexId>,
    pub pendant: Vec<VertexId>,
    pub placed: Placed,
}

/// Edge-count cap for gadget enumeration; the largest host has 35 edges.
pub const GADGET_CAP: usize = 40;

impl NeutralHost {
    /// `(pendant, inner)` per boundary edge: the arc that enters the gadget.
    pub fn entering_arcs(&self) -> Vec<(VertexId, VertexId)> {
        self.pendant
            .iter()
            .copied()
            .zip(self.inner.iter().copied())
            .collect()
    }

    /// For every non-transitive st-orientation of the host (`s`, `t`
    /// prescribed), whether each watched pair `(a, b)` is oriented `a -> b`.
    /// Returns the distinct patterns.
    pub fn classes(
        &self,
        watched: &[(VertexId, VertexId)],
    ) -> Result<BTreeSet<Vec<bool>>, OracleError> {
        let inst = Instance::new(self.graph.clone(), Some(self.s), Some(self.t), 0)
            .expect("host terminals are distinct");
        let edges: Vec<usize> = watched
            .iter()
            .map(|&(a, b)| {
                self.graph
                    .edge_index(a, b)
                    .expect("watched pair is an edge")
            })
            .collect();
        let raw = oracle::boundary_classes(&inst, &edges, GADGET_CAP)?;
        Ok(raw
            .into_iter()
            .map(|bits| {
                bits.iter()
                    .zip(watched)
                    .map(|(&fwd, &(a, b))| fwd == (a < b))
                    .collect()
            })
            .collect())
    }
}

pub fn neutral_host(t: &Template) -> NeutralHost {
    let mut b = Builder::new();
    let s = b.vertex("host:0:s");
    let tt = b.vertex("host:0:t");
    let mut shared = Vec::new();
    for (role, v) in &t.marks {
        if role == "s" {
            shared.push((t.vertices[*v].as_str(), s));
        } else if role == "t" {
            shared.push((t.vertices[*v].as_str(), tt));
        }
    }
    let placed = b.place(t, "gadget", "0", &shared);
    let mut pairs = Vec::new();
    for (i, port) in t.ports().into_iter().enumerate() {
        let inner = placed.port(port);
        let p = b.vertex(&format!("host:{i}:p"));
        let h1 = b.vertex(&format!("host:{i}:h1"));
        let h2 = b.vertex(&format!("host:{i}:h2"));
        b.edge(inner, p);
        b.edge(s, h1);
        b.edge(h1, p);
        b.edge(p, h2);
        b.edge(h2, tt);
        pairs.push((inner, p));
    }
    let graph = b.finish().expect("host is simple");
    let boundary = pairs
        .iter()
        .map(|&(a, p)| graph.edge_index(a, p).unwrap())
        .collect();
    NeutralHost {
        graph,
        s,
        t: tt,
        boundary,
        inner: pairs.iter().map(|&(a, _)| a).collect(),
        pendant: pairs.iter().map(|&(_, p)| p).collect(),
        placed,
    }
}
