//! Test-side oracles and corpora shared by the integration targets.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use storient::graph::{Digraph, UndirectedGraph};
use storient::reduction::gadgets::{neutral_host, NeutralHost, Template};
use storient::reduction::{GadgetLibrary, Nae3SatFormula};

#[allow(clippy::needless_range_loop)]
fn closure(n: usize, arcs: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (a, b) in arcs {
        r[a][b] = true;
    }
    for m in 0..n {
        for a in 0..n {
            if r[a][m] {
                for b in 0..n {
                    if r[m][b] {
                        r[a][b] = true;
                    }
                }
            }
        }
    }
    r
}

/// Transitive arcs of an acyclic digraph from one closure matrix: `u -> v`
/// is transitive iff some `w` other than `u`, `v` has `u ~> w ~> v`.
pub fn dag_closure_count(d: &Digraph) -> usize {
    let n = d.vertex_count();
    let r = closure(n, d.arcs().iter().copied());
    d.arcs()
        .iter()
        .filter(|&&(u, v)| (0..n).any(|w| w != u && w != v && r[u][w] && r[w][v]))
        .count()
}

/// Transitive arcs by reachability matrices: `u -> v` is transitive iff `v`
/// is reachable from `u` in the digraph with that one arc removed
/// (Floyd-Warshall closure per arc).
pub fn closure_matrix_count(d: &Digraph) -> usize {
    let n = d.vertex_count();
    let arcs = d.arcs();
    let mut count = 0;
    for skip in 0..arcs.len() {
        let r = closure(
            n,
            arcs.iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &a)| a),
        );
        let (u, v) = arcs[skip];
        count += usize::from(r[u][v]);
    }
    count
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices (smallest edge bitmask under all relabellings).
pub fn connected_representatives(n: usize) -> Vec<UndirectedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let index = |a: usize, b: usize| {
        pairs
            .iter()
            .position(|&p| p == (a.min(b), a.max(b)))
            .unwrap()
    };
    // moved[p][i]: position of pair i after relabelling by permutation p.
    let moved: Vec<Vec<u32>> = permutations(n)
        .iter()
        .map(|p| {
            pairs
                .iter()
                .map(|&(a, b)| index(p[a], p[b]) as u32)
                .collect()
        })
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let canon = moved
            .iter()
            .map(|m| {
                (0..pairs.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| 1u32 << m[i])
                    .sum::<u32>()
            })
            .min()
            .unwrap();
        if canon != mask || !seen.insert(canon) {
            continue;
        }
        let edges: Vec<_> = (0..pairs.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        let g = UndirectedGraph::new(n, edges).unwrap();
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every formula with one or two clauses over exactly `1..=max_vars`
/// variables, all of them used; clauses are sorted literal multisets and
/// the clause list is sorted.
pub fn small_formulas(max_vars: i64) -> Vec<Nae3SatFormula> {
    let mut out = Vec::new();
    for v in 1..=max_vars {
        let lits: Vec<i64> = (1..=v).flat_map(|x| [x, -x]).collect();
        let mut clauses = Vec::new();
        for a in 0..lits.len() {
            for b in a..lits.len() {
                for c in b..lits.len() {
                    clauses.push(vec![lits[a], lits[b], lits[c]]);
                }
            }
        }
        let mut lists = Vec::new();
        for i in 0..clauses.len() {
            lists.push(vec![clauses[i].clone()]);
            for j in i..clauses.len() {
                lists.push(vec![clauses[i].clone(), clauses[j].clone()]);
            }
        }
        for cl in lists {
            let used: BTreeSet<u64> = cl.iter().flatten().map(|l| l.unsigned_abs()).collect();
            if used.len() == v as usize {
                out.push(Nae3SatFormula::new(v as usize, cl).unwrap());
            }
        }
    }
    out
}

/// Outcome of one gadget gate.
pub struct Gate {
    pub name: String,
    pub expected: BTreeSet<Vec<bool>>,
    pub observed: BTreeSet<Vec<bool>>,
}

impl Gate {
    pub fn pass(&self) -> bool {
        self.expected == self.observed
    }
}

fn classes(rows: &[&[bool]]) -> BTreeSet<Vec<bool>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

fn vertex(host: &NeutralHost, t: &Template, name: &str) -> usize {
    host.placed.vertices[t.vertex_index(name).unwrap()]
}

/// The behavioural contracts: boundary edges are read as "enters the
/// gadget"; the extended fork is read on its three edges at `f`
/// (`u -> f`, `f -> w`, `f -> z`).
pub fn gadget_gates(lib: &GadgetLibrary) -> Vec<Gate> {
    let mut gates = Vec::new();
    let fork = neutral_host(&lib.fork);
    gates.push(Gate {
        name: "fork".into(),
        expected: classes(&[&[true, false, false], &[false, true, true]]),
        observed: fork.classes(&fork.entering_arcs()).unwrap(),
    });
    let ext = neutral_host(&lib.extended_fork);
    let t = &lib.extended_fork;
    let (u, f, w, z) = (
        vertex(&ext, t, "u"),
        vertex(&ext, t, "f"),
        vertex(&ext, t, "w"),
        vertex(&ext, t, "z"),
    );
    gates.push(Gate {
        name: "extended fork".into(),
        expected: classes(&[&[true, true, true], &[false, false, false]]),
        observed: ext.classes(&[(u, f), (f, w), (f, z)]).unwrap(),
    });
    let var = neutral_host(&lib.variable);
    gates.push(Gate {
        name: "variable".into(),
        expected: classes(&[&[true, false], &[false, true]]),
        observed: var.classes(&var.entering_arcs()).unwrap(),
    });
    for k in 2..=3 {
        let sp = neutral_host(&lib.split(k));
        let mut a = vec![true];
        a.extend(std::iter::repeat_n(false, k));
        let b: Vec<bool> = a.iter().map(|x| !x).collect();
        gates.push(Gate {
            name: format!("split {k}"),
            expected: classes(&[&a, &b]),
            observed: sp.classes(&sp.entering_arcs()).unwrap(),
        });
    }
    gates
}
