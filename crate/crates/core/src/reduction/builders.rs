//! The three instance constructions: `G`, its bounded-diameter variant `H`
//! (a hub joined to every fork) and its degree-4 variant `J` (one local
//! source/sink pair per component, chained, with high-degree terminals
//! fanned out through split gadgets).

use std::collections::{HashMap, VecDeque};

use crate::error::ReductionError;
use crate::graph::{UndirectedGraph, VertexId};

use super::formula::Nae3SatFormula;
use super::gadgets::{Builder, GadgetLibrary};

/// A generated instance: the graph (with gadget labels), its prescribed
/// endpoints, and the `f` vertex of every fork it contains.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub graph: UndirectedGraph,
    pub s: VertexId,
    pub t: VertexId,
    pub forks: Vec<VertexId>,
}

impl Reduced {
    /// `label<TAB>id` lines, ids 1-based.
    pub fn label_file(&self) -> String {
        let labels = self.graph.labels().expect("reduction graphs are labelled");
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("{}\t{l}\n", i + 1))
            .collect()
    }
}

struct Skeleton {
    b: Builder,
    s: VertexId,
    t: VertexId,
    forks: Vec<VertexId>,
}

fn neutral_terminal(
    b: &mut Builder,
    s: VertexId,
    t: VertexId,
    kind: &str,
    index: &str,
    to: VertexId,
) {
    let p = b.vertex(&format!("{kind}:{index}:p"));
    let h1 = b.vertex(&format!("{kind}:{index}:h1"));
    let h2 = b.vertex(&format!("{kind}:{index}:h2"));
    b.edge(to, p);
    b.edge(s, h1);
    b.edge(h1, p);
    b.edge(p, h2);
    b.edge(h2, t);
}

fn assemble(f: &Nae3SatFormula, lib: &GadgetLibrary) -> Skeleton {
    let mut b = Builder::new();
    let s = b.vertex("terminal:0:s");
    let t = b.vertex("terminal:0:t");
    let mut forks = Vec::new();
    let mut outputs: HashMap<i64, VecDeque<VertexId>> = HashMap::new();
    for x in 1..=f.variable_count() as i64 {
        let g = b.place(&lib.variable, "var", &x.to_string(), &[("s", s), ("t", t)]);
        forks.extend(g.marked("f"));
        for (lit, port) in [(x, "x"), (-x, "xbar")] {
            let end = g.port(port);
            let k = f.occurrences(lit);
            let outs = match k {
                // An unused literal still needs its edge closed off.
                0 => {
                    neutral_terminal(&mut b, s, t, "neutral", &lit.to_string(), end);
                    VecDeque::new()
                }
                1 => VecDeque::from([end]),
                _ => {
                    let sp = b.place(&lib.split(k), "split", &lit.to_string(), &[]);
                    b.edge(end, sp.port("in"));
                    forks.extend(sp.marked("f"));
                    (1..=k).map(|i| sp.port(&format!("out{i}"))).collect()
                }
            };
            outputs.insert(lit, outs);
        }
    }
    for (j, clause) in f.clauses().iter().enumerate() {
        let c = b.vertex(&format!("clause:{}:c", j + 1));
        for lit in clause {
            let out = outputs
                .get_mut(lit)
                .and_then(VecDeque::pop_front)
                .expect("one split output per occurrence");
            b.edge(c, out);
        }
    }
    Skeleton { b, s, t, forks }
}

fn finish(sk: Skeleton) -> Result<Reduced, ReductionError> {
    Ok(Reduced {
        graph: sk.b.finish()?,
        s: sk.s,
        t: sk.t,
        forks: sk.forks,
    })
}

/// One variable gadget per variable on the shared `s`, `t`; a split gadget
/// per literal sized by its occurrence count (bare edge for one occurrence,
/// a pendant on its own `s`-`t` path for none); one vertex per clause.
pub fn build_g_phi(f: &Nae3SatFormula, lib: &GadgetLibrary) -> Result<Reduced, ReductionError> {
    finish(assemble(f, lib))
}

/// `G` plus a hub `g` adjacent to every fork's `f`, and the paths
/// `s - g1 - g` and `g - g2 - t`.
pub fn build_h_phi(f: &Nae3SatFormula, lib: &GadgetLibrary) -> Result<Reduced, ReductionError> {
    let mut sk = assemble(f, lib);
    let b = &mut sk.b;
    let g = b.vertex("hub:0:g");
    let g1 = b.vertex("hub:0:g1");
    let g2 = b.vertex("hub:0:g2");
    b.edge(sk.s, g1);
    b.edge(g1, g);
    b.edge(g, g2);
    b.edge(g2, sk.t);
    for &fv in &sk.forks {
        b.edge(g, fv);
    }
    finish(sk)
}

/// Components of `g` minus `s` and `t`, each as a sorted vertex list, in
/// order of smallest member.
fn components_without(g: &UndirectedGraph, s: VertexId, t: VertexId) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if start == s || start == t || comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut i = 0;
        while i < members.len() {
            for &w in g.neighbors(members[i]) {
                if w != s && w != t && comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Splits `s` and `t` per component of `G - {s, t}`, chains the copies
/// (`s_i - s_{i+1}`, `t_i - t_{i+1}`, and an edge between fork `f`
/// vertices of consecutive components), then fans out any terminal of
/// degree 5 or more: all but one of its component edges are moved behind
/// a split gadget whose input edge ends at the terminal. The moved edges
/// are those to the smallest neighbour ids.
pub fn build_j_phi(f: &Nae3SatFormula, lib: &GadgetLibrary) -> Result<Reduced, ReductionError> {
    let base = build_g_phi(f, lib)?;
    let g = &base.graph;
    let labels = g.labels().expect("labelled");
    let comps = components_without(g, base.s, base.t);

    let mut b = Builder::new();
    // Keep the old numbering for the surviving vertices.
    let mut map = vec![usize::MAX; g.vertex_count()];
    for v in 0..g.vertex_count() {
        if v != base.s && v != base.t {
            map[v] = b.vertex(&labels[v]);
        }
    }
    for &(u, v) in g.edges() {
        if map[u] != usize::MAX && map[v] != usize::MAX {
            b.edge(map[u], map[v]);
        }
    }
    let mut terminals = Vec::with_capacity(comps.len());
    for (i, members) in comps.iter().enumerate() {
        let si = b.vertex(&format!("local:{}:s", i + 1));
        let ti = b.vertex(&format!("local:{}:t", i + 1));
        for &v in members {
            if g.has_edge(v, base.s) {
                b.edge(si, map[v]);
            }
            if g.has_edge(v, base.t) {
                b.edge(ti, map[v]);
            }
        }
        terminals.push((si, ti));
    }
    let comp_forks: Vec<Vec<VertexId>> = comps
        .iter()
        .map(|members| {
            base.forks
                .iter()
                .filter(|fv| members.binary_search(fv).is_ok())
                .map(|&fv| map[fv])
                .collect()
        })
        .collect();
    for i in 0..comps.len().saturating_sub(1) {
        let (si, ti) = terminals[i];
        let (sj, tj) = terminals[i + 1];
        b.edge(si, sj);
        b.edge(ti, tj);
        // Leave component i by its last fork, enter i+1 by its first, so
        // no fork gets two chain edges.
        let left = *comp_forks[i].last().ok_or_else(no_fork)?;
        let right = *comp_forks[i + 1].first().ok_or_else(no_fork)?;
        b.edge(left, right);
    }
    let mut forks: Vec<VertexId> = comp_forks.into_iter().flatten().collect();
    let is_terminal =
        |v: VertexId, terms: &[(VertexId, VertexId)]| terms.iter().any(|&(a, c)| a == v || c == v);
    for (i, &(si, ti)) in terminals.iter().enumerate() {
        for (term, side) in [(ti, "t"), (si, "s")] {
            let nbrs = b.neighbors(term);
            if nbrs.len() <= 4 {
                continue;
            }
            let inside: Vec<VertexId> = nbrs
                .into_iter()
                .filter(|&v| !is_terminal(v, &terminals))
                .collect();
            let moved = &inside[..inside.len() - 1];
            let sp = b.place(
                &lib.split(moved.len()),
                "fan",
                &format!("{}{side}", i + 1),
                &[],
            );
            for (j, &v) in moved.iter().enumerate() {
                b.remove_edge(term, v);
                b.edge(sp.port(&format!("out{}", j + 1)), v);
            }
            b.edge(term, sp.port("in"));
            forks.extend(sp.marked("f"));
        }
    }
    let (s, t) = (terminals[0].0, terminals[terminals.len() - 1].1);
    Ok(Reduced {
        graph: b.finish()?,
        s,
        t,
        forks,
    })
}

fn no_fork() -> ReductionError {
    ReductionError::Library("component without a fork gadget".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_clause() -> Nae3SatFormula {
        Nae3SatFormula::new(3, vec![vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn g_counts_match_hand_count() {
        let lib = GadgetLibrary::builtin();
        let r = build_g_phi(&one_clause(), &lib).unwrap();
        // per variable: 18 own gadget vertices and a 3-vertex pendant for the
        // unused negation; the positive literal is a bare edge.
        assert_eq!(r.graph.vertex_count(), 2 + 3 * (18 + 3) + 1);
        // per variable: 25 gadget edges, 5 pendant edges; plus 3 clause edges
        assert_eq!(r.graph.edge_count(), 3 * (25 + 5) + 3);
        assert!(r.graph.is_connected());
        assert_eq!(r.forks.len(), 6);
    }

    #[test]
    fn labels_follow_scheme() {
        let lib = GadgetLibrary::builtin();
        let r = build_g_phi(&one_clause(), &lib).unwrap();
        assert_eq!(r.graph.label(r.s), Some("terminal:0:s"));
        for l in r.graph.labels().unwrap() {
            assert_eq!(l.split(':').count(), 3, "{l}");
        }
        assert!(r.label_file().starts_with("1\tterminal:0:s\n"));
    }

    #[test]
    fn h_hub_degree() {
        let lib = GadgetLibrary::builtin();
        let f = Nae3SatFormula::new(3, vec![vec![1, 2, 3], vec![1, 2, -3]]).unwrap();
        let r = build_h_phi(&f, &lib).unwrap();
        let g = r
            .graph
            .labels()
            .unwrap()
            .iter()
            .position(|l| l == "hub:0:g")
            .unwrap();
        assert_eq!(r.graph.degree(g), r.forks.len() + 2);
    }

    #[test]
    fn j_is_connected_with_chain() {
        let lib = GadgetLibrary::builtin();
        let f = Nae3SatFormula::new(6, vec![vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let r = build_j_phi(&f, &lib).unwrap();
        assert!(r.graph.is_connected());
        assert_eq!(r.graph.label(r.s), Some("local:1:s"));
        assert_eq!(r.graph.label(r.t), Some("local:2:t"));
    }
}
