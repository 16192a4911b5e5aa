//! Dynamic programming over a nice tree decomposition.
//!
//! Every node keeps a set of records. A record summarises a family of
//! partial orientations of the graph induced by the vertices introduced in
//! the node's subtree, as seen from the node's bag:
//!
//! * the orientation of the bag edges and the subset of them guessed to be
//!   transitive in the final answer (admissible);
//! * `paths`: ordered bag pairs joined by a directed path (transitively
//!   closed, irreflexive);
//! * `forbidden`: ordered bag pairs `(a, b)` such that any new path `a ~> b`
//!   would make a non-admissible arc with a forgotten endpoint transitive;
//! * per-vertex source / sink flags and the flags recording that a forgotten
//!   vertex already is the source / sink;
//! * the cost, i.e. the number of admissible guesses made in the subtree.
//!
//! Non-admissible bag arcs are protected directly: a record is dropped as
//! soon as the closed path relation routes a non-admissible arc `u -> w`
//! through a third bag vertex. Arcs with a forgotten endpoint are protected
//! through `forbidden`, which is kept closed under reachability so that no
//! information is lost when vertices are forgotten.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::SolveError;
use crate::graph::{Instance, Orientation, UndirectedGraph, VertexId};
use crate::treedecomp::{NiceNode, NiceTreeDecomposition, NodeKind};
use crate::verify::{check_st_orientation, Verdict};

/// Largest bag the bit-matrix records can hold.
pub const MAX_BAG: usize = 16;

type Row = u16;

/// Square bit matrix over bag positions; row `i` bit `j` is the pair `(i, j)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Relation([Row; MAX_BAG]);

fn insert_bit(row: Row, p: usize) -> Row {
    let low = row & ((1 << p) - 1);
    let high = (row as u32 >> p) << (p + 1);
    low | high as Row
}

fn remove_bit(row: Row, p: usize) -> Row {
    let low = row & ((1 << p) - 1);
    let high = ((row as u32) >> (p + 1)) << p;
    low | high as Row
}

impl Relation {
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.0[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.0[i] |= 1 << j;
    }

    pub fn row(&self, i: usize) -> Row {
        self.0[i]
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn pairs(&self, size: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..size).flat_map(move |i| {
            (0..size)
                .filter(move |&j| self.get(i, j))
                .map(move |j| (i, j))
        })
    }

    fn union(&self, other: &Relation) -> Relation {
        let mut r = *self;
        for i in 0..MAX_BAG {
            r.0[i] |= other.0[i];
        }
        r
    }

    fn intersects(&self, other: &Relation) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    fn contains_all(&self, other: &Relation) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| b & !a == 0)
    }

    fn has_diagonal(&self, size: usize) -> bool {
        (0..size).any(|i| self.get(i, i))
    }

    /// Transitive closure (Warshall) over the first `size` positions.
    fn closure(&self, size: usize) -> Relation {
        let mut r = *self;
        for k in 0..size {
            let rk = r.0[k];
            for i in 0..size {
                if r.0[i] >> k & 1 == 1 {
                    r.0[i] |= rk;
                }
            }
        }
        r
    }

    /// Opens an empty row and column at position `p`.
    fn insert_index(&self, p: usize, size: usize) -> Relation {
        let mut r = Relation::default();
        for i in 0..size {
            let target = if i < p { i } else { i + 1 };
            r.0[target] = insert_bit(self.0[i], p);
        }
        r
    }

    /// Deletes row and column `p`.
    fn remove_index(&self, p: usize, size: usize) -> Relation {
        let mut r = Relation::default();
        for i in 0..size {
            if i == p {
                continue;
            }
            let target = if i < p { i } else { i - 1 };
            r.0[target] = remove_bit(self.0[i], p);
        }
        r
    }

    /// Pairs `(c, d)`, `c != d`, with some `(a, b)` in `self` such that
    /// `a ~>* c` and `d ~>* b` in the reflexive closure of `reach`.
    #[allow(clippy::needless_range_loop)] // index loops mirror the matrix algebra
    fn extend_through(&self, reach: &Relation, size: usize) -> Relation {
        let mut refl = *reach;
        for i in 0..size {
            refl.set(i, i);
        }
        // pred[b] = { d : d ~>* b }
        let mut pred = [0 as Row; MAX_BAG];
        for d in 0..size {
            for b in 0..size {
                if refl.get(d, b) {
                    pred[b] |= 1 << d;
                }
            }
        }
        // mid[c] = { b : exists a, a ~>* c and (a, b) in self }
        let mut mid = [0 as Row; MAX_BAG];
        for a in 0..size {
            if self.0[a] == 0 {
                continue;
            }
            for c in 0..size {
                if refl.get(a, c) {
                    mid[c] |= self.0[a];
                }
            }
        }
        let mut out = Relation::default();
        for c in 0..size {
            let mut row = 0;
            for b in 0..size {
                if mid[c] >> b & 1 == 1 {
                    row |= pred[b];
                }
            }
            out.0[c] = row & !(1 << c);
        }
        out
    }

    /// Arcs `(u, w)` of `arcs` that `reach` also connects through some third
    /// bag vertex.
    fn routed_arcs(arcs: &Relation, reach: &Relation, size: usize) -> Relation {
        let mut out = Relation::default();
        for u in 0..size {
            let mut row = arcs.0[u];
            while row != 0 {
                let w = row.trailing_zeros() as usize;
                row &= row - 1;
                let via = reach.0[u] & !(1 << w) & !(1 << u);
                let mut vias = via;
                while vias != 0 {
                    let x = vias.trailing_zeros() as usize;
                    vias &= vias - 1;
                    if reach.get(x, w) {
                        out.set(u, w);
                        break;
                    }
                }
            }
        }
        out
    }
}

/// Everything in a record except cost and provenance. Two records with equal
/// keys are interchangeable for the rest of the computation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RecordKey {
    pub arcs: Relation,
    pub admissible: Relation,
    pub paths: Relation,
    pub forbidden: Relation,
    pub source: Row,
    pub sink: Row,
    pub forgotten_source: bool,
    pub forgotten_sink: bool,
}

/// Back-pointer to the child record(s) a record was derived from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Leaf,
    /// `out_mask` / `admissible_mask` are bag positions `w` with the arc
    /// `v -> w` / the edge `vw` admissible, for the introduced vertex `v`.
    Introduce {
        child: usize,
        out_mask: Row,
        admissible_mask: Row,
    },
    Forget {
        child: usize,
    },
    Join {
        left: usize,
        right: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub key: RecordKey,
    pub cost: usize,
    pub provenance: Provenance,
}

fn position(bag: &[VertexId], v: VertexId) -> usize {
    bag.binary_search(&v).expect("vertex not in bag")
}

impl Record {
    pub fn empty() -> Self {
        Record {
            key: RecordKey::default(),
            cost: 0,
            provenance: Provenance::Leaf,
        }
    }

    pub fn has_arc(&self, bag: &[VertexId], u: VertexId, v: VertexId) -> bool {
        self.key.arcs.get(position(bag, u), position(bag, v))
    }

    pub fn is_admissible(&self, bag: &[VertexId], u: VertexId, v: VertexId) -> bool {
        let (i, j) = (position(bag, u), position(bag, v));
        self.key.admissible.get(i, j) || self.key.admissible.get(j, i)
    }

    pub fn has_path(&self, bag: &[VertexId], a: VertexId, b: VertexId) -> bool {
        self.key.paths.get(position(bag, a), position(bag, b))
    }

    pub fn is_forbidden(&self, bag: &[VertexId], a: VertexId, b: VertexId) -> bool {
        self.key.forbidden.get(position(bag, a), position(bag, b))
    }

    pub fn is_source(&self, bag: &[VertexId], v: VertexId) -> bool {
        self.key.source >> position(bag, v) & 1 == 1
    }

    pub fn is_sink(&self, bag: &[VertexId], v: VertexId) -> bool {
        self.key.sink >> position(bag, v) & 1 == 1
    }
}

/// Records of one node, at most one per key, each with the minimum cost seen
/// for its key. Ties keep the earliest insertion.
#[derive(Clone, Debug, Default)]
pub struct RecordSet {
    records: Vec<Record>,
    index: HashMap<RecordKey, usize>,
}

/// What happened to a candidate on insertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inserted {
    New,
    Improved,
    Dominated,
}

impl RecordSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, rec: Record) -> Inserted {
        match self.index.get(&rec.key) {
            Some(&i) => {
                if rec.cost < self.records[i].cost {
                    self.records[i] = rec;
                    Inserted::Improved
                } else {
                    Inserted::Dominated
                }
            }
            None => {
                self.index.insert(rec.key, self.records.len());
                self.records.push(rec);
                Inserted::New
            }
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn get(&self, key: &RecordKey) -> Option<&Record> {
        self.index.get(key).map(|&i| &self.records[i])
    }
}

/// Per-node counters. `generated` counts candidates built, `pruned_validity`
/// those rejected by a validity, mergeability or source/sink rule,
/// `pruned_merge` those absorbed by an equal-key record of no higher cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeStats {
    pub node: usize,
    pub kind: NodeKind,
    pub generated: usize,
    pub pruned_validity: usize,
    pub pruned_merge: usize,
    pub stored: usize,
}

impl fmt::Display for NodeStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {}",
            self.node,
            self.kind,
            self.generated,
            self.pruned_validity,
            self.pruned_merge,
            self.stored
        )
    }
}

/// Graph plus the constraints the transitions consult.
#[derive(Clone, Copy, Debug)]
pub struct Context<'a> {
    pub graph: &'a UndirectedGraph,
    pub s: Option<VertexId>,
    pub t: Option<VertexId>,
    pub k: usize,
}

impl<'a> Context<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        Context {
            graph: &inst.graph,
            s: inst.s,
            t: inst.t,
            k: inst.k,
        }
    }
}

fn collect_into(
    k: usize,
    node: usize,
    kind: NodeKind,
    candidates: Vec<Option<Record>>,
) -> (RecordSet, NodeStats) {
    let mut set = RecordSet::new();
    let mut stats = NodeStats {
        node,
        kind,
        generated: candidates.len(),
        pruned_validity: 0,
        pruned_merge: 0,
        stored: 0,
    };
    for cand in candidates {
        let Some(rec) = cand else {
            stats.pruned_validity += 1;
            continue;
        };
        assert!(rec.cost <= k, "record cost {} over budget {k}", rec.cost);
        if set.insert(rec) != Inserted::New {
            stats.pruned_merge += 1;
        }
    }
    stats.stored = set.len();
    (set, stats)
}

pub fn process_leaf() -> RecordSet {
    let mut set = RecordSet::new();
    set.insert(Record::empty());
    set
}

/// Introduces `v` into `bag` (which contains it); `child` holds the records
/// of `bag \ {v}`.
pub fn process_introduce(
    ctx: &Context<'_>,
    node: usize,
    bag: &[VertexId],
    v: VertexId,
    child: &RecordSet,
) -> (RecordSet, NodeStats) {
    let size = bag.len();
    let p = position(bag, v);
    let nbrs: Vec<usize> = (0..size)
        .filter(|&j| j != p && ctx.graph.has_edge(v, bag[j]))
        .collect();
    let d = nbrs.len();
    let spread = |bits: u32| -> Row {
        let mut m = 0;
        for (i, &j) in nbrs.iter().enumerate() {
            if bits >> i & 1 == 1 {
                m |= 1 << j;
            }
        }
        m
    };

    let per_child: Vec<Vec<Option<Record>>> = child
        .records()
        .par_iter()
        .enumerate()
        .map(|(ci, rec)| {
            let base = &rec.key;
            let arcs0 = base.arcs.insert_index(p, size - 1);
            let adm0 = base.admissible.insert_index(p, size - 1);
            let paths0 = base.paths.insert_index(p, size - 1);
            let forb0 = base.forbidden.insert_index(p, size - 1);
            let src0 = insert_bit(base.source, p);
            let snk0 = insert_bit(base.sink, p);
            let nbr_mask = spread((1u32 << d) - 1);
            let mut out = Vec::with_capacity(1 << (2 * d));
            for o in 0..(1u32 << d) {
                let out_mask = spread(o);
                let in_mask = nbr_mask & !out_mask;
                let pairs = 1usize << d;
                // Cycle through v: v -> a ~> b -> v.
                let cyclic =
                    (0..size).any(|a| out_mask >> a & 1 == 1 && paths0.row(a) & in_mask != 0);
                if cyclic {
                    out.extend(std::iter::repeat_n(None, pairs));
                    continue;
                }
                let mut arcs = arcs0;
                arcs.0[p] |= out_mask;
                for j in 0..size {
                    if in_mask >> j & 1 == 1 {
                        arcs.set(j, p);
                    }
                }
                let paths = paths0.union(&arcs).closure(size);
                // New paths may not realise an inherited forbidden pair, and
                // the old bag arcs (all non-admissible ones) may not be
                // rerouted through v.
                let routed = Relation::routed_arcs(&arcs, &paths, size);
                let old_routed = {
                    let mut r = routed;
                    r.0[p] = 0;
                    for j in 0..size {
                        r.0[j] &= !(1 << p);
                    }
                    r
                };
                if paths.has_diagonal(size)
                    || paths.intersects(&forb0)
                    || !adm0.contains_all(&old_routed)
                {
                    out.extend(std::iter::repeat_n(None, pairs));
                    continue;
                }
                // v's arcs that must be admissible because they are routed.
                let mut forced: Row = 0;
                for &j in &nbrs {
                    if routed.get(p, j) || routed.get(j, p) {
                        forced |= 1 << j;
                    }
                }
                let forbidden = forb0.extend_through(&paths, size);
                let mut source = src0 & !out_mask;
                let mut sink = snk0 & !in_mask;
                if in_mask == 0 {
                    source |= 1 << p;
                }
                if out_mask == 0 {
                    sink |= 1 << p;
                }
                for t in 0..(1u32 << d) {
                    let adm_mask = spread(t);
                    let cost = rec.cost + t.count_ones() as usize;
                    if cost > ctx.k || forced & !adm_mask != 0 {
                        out.push(None);
                        continue;
                    }
                    let mut admissible = adm0;
                    for &j in &nbrs {
                        if adm_mask >> j & 1 == 1 {
                            if out_mask >> j & 1 == 1 {
                                admissible.set(p, j);
                            } else {
                                admissible.set(j, p);
                            }
                        }
                    }
                    out.push(Some(Record {
                        key: RecordKey {
                            arcs,
                            admissible,
                            paths,
                            forbidden,
                            source,
                            sink,
                            forgotten_source: base.forgotten_source,
                            forgotten_sink: base.forgotten_sink,
                        },
                        cost,
                        provenance: Provenance::Introduce {
                            child: ci,
                            out_mask,
                            admissible_mask: adm_mask,
                        },
                    }));
                }
            }
            out
        })
        .collect();
    collect_into(
        ctx.k,
        node,
        NodeKind::Introduce(v),
        per_child.into_iter().flatten().collect(),
    )
}

/// Forgets `v`; `child_bag` is the bag that still contains it.
pub fn process_forget(
    ctx: &Context<'_>,
    node: usize,
    child_bag: &[VertexId],
    v: VertexId,
    child: &RecordSet,
) -> (RecordSet, NodeStats) {
    let size = child_bag.len();
    let p = position(child_bag, v);
    let candidates: Vec<Option<Record>> = child
        .records()
        .iter()
        .enumerate()
        .map(|(ci, rec)| {
            let key = &rec.key;
            let mut forgotten_source = key.forgotten_source;
            let mut forgotten_sink = key.forgotten_sink;
            if key.source >> p & 1 == 1 {
                if forgotten_source || ctx.s.is_some_and(|s| s != v) {
                    return None;
                }
                forgotten_source = true;
            }
            if key.sink >> p & 1 == 1 {
                if forgotten_sink || ctx.t.is_some_and(|t| t != v) {
                    return None;
                }
                forgotten_sink = true;
            }
            // v's non-admissible arcs now have a forgotten endpoint: seed the
            // forbidden pairs they induce.
            let mut forbidden = key.forbidden;
            let reach = key.paths;
            for w in 0..size {
                if w == p {
                    continue;
                }
                let seed = if key.arcs.get(p, w) && !key.admissible.get(p, w) {
                    Some((p, w))
                } else if key.arcs.get(w, p) && !key.admissible.get(w, p) {
                    Some((w, p))
                } else {
                    None
                };
                if let Some((tail, head)) = seed {
                    let mut single = Relation::default();
                    single.set(tail, head);
                    forbidden = forbidden.union(&single.extend_through(&reach, size));
                }
            }
            Some(Record {
                key: RecordKey {
                    arcs: key.arcs.remove_index(p, size),
                    admissible: key.admissible.remove_index(p, size),
                    paths: key.paths.remove_index(p, size),
                    forbidden: forbidden.remove_index(p, size),
                    source: remove_bit(key.source, p),
                    sink: remove_bit(key.sink, p),
                    forgotten_source,
                    forgotten_sink,
                },
                cost: rec.cost,
                provenance: Provenance::Forget { child: ci },
            })
        })
        .collect();
    collect_into(ctx.k, node, NodeKind::Forget(v), candidates)
}

fn try_merge(ctx: &Context<'_>, size: usize, l: &Record, r: &Record) -> Option<RecordKey> {
    let (a, b) = (&l.key, &r.key);
    if a.forgotten_source && b.forgotten_source || a.forgotten_sink && b.forgotten_sink {
        return None;
    }
    let shared = a.admissible.count();
    if l.cost + r.cost - shared > ctx.k {
        return None;
    }
    let paths = a.paths.union(&b.paths).closure(size);
    if paths.has_diagonal(size) {
        return None;
    }
    let inherited = a.forbidden.union(&b.forbidden);
    if paths.intersects(&inherited) {
        return None;
    }
    let routed = Relation::routed_arcs(&a.arcs, &paths, size);
    if !a.admissible.contains_all(&routed) {
        return None;
    }
    Some(RecordKey {
        arcs: a.arcs,
        admissible: a.admissible,
        paths,
        forbidden: inherited.extend_through(&paths, size),
        source: a.source & b.source,
        sink: a.sink & b.sink,
        forgotten_source: a.forgotten_source || b.forgotten_source,
        forgotten_sink: a.forgotten_sink || b.forgotten_sink,
    })
}

pub fn process_join(
    ctx: &Context<'_>,
    node: usize,
    bag: &[VertexId],
    left: &RecordSet,
    right: &RecordSet,
) -> (RecordSet, NodeStats) {
    let size = bag.len();
    // Only records with equal orientation and admissible set can merge.
    let mut groups: HashMap<(Relation, Relation), Vec<usize>> = HashMap::new();
    for (i, r) in right.records().iter().enumerate() {
        groups
            .entry((r.key.arcs, r.key.admissible))
            .or_default()
            .push(i);
    }
    let per_left: Vec<(usize, Vec<Option<Record>>)> = left
        .records()
        .par_iter()
        .enumerate()
        .map(|(li, l)| {
            let Some(partners) = groups.get(&(l.key.arcs, l.key.admissible)) else {
                return (right.len(), Vec::new());
            };
            let cands = partners
                .iter()
                .map(|&ri| {
                    let r = &right.records()[ri];
                    try_merge(ctx, size, l, r).map(|key| Record {
                        key,
                        cost: l.cost + r.cost - l.key.admissible.count(),
                        provenance: Provenance::Join {
                            left: li,
                            right: ri,
                        },
                    })
                })
                .collect::<Vec<_>>();
            (right.len() - partners.len(), cands)
        })
        .collect();
    let incompatible: usize = per_left.iter().map(|(n, _)| n).sum();
    let (set, mut stats) = collect_into(
        ctx.k,
        node,
        NodeKind::Join,
        per_left.into_iter().flat_map(|(_, c)| c).collect(),
    );
    stats.generated += incompatible;
    stats.pruned_validity += incompatible;
    (set, stats)
}

/// Result of running the dynamic program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// No st-orientation within budget. `halted_at` names the first node
    /// whose record set came out empty, if any.
    No { halted_at: Option<usize> },
    Yes {
        orientation: Orientation,
        /// Transitive edges of the returned orientation, as counted by the
        /// verifier.
        transitive_count: usize,
        /// Cost of the root record the orientation was rebuilt from.
        cost: usize,
    },
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub stats: Vec<NodeStats>,
    /// Verdict of the independent checker on the returned orientation.
    pub verdict: Option<Verdict>,
}

impl SolveReport {
    pub fn is_yes(&self) -> bool {
        matches!(self.outcome, Outcome::Yes { .. })
    }

    pub fn min_cost(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Yes { cost, .. } => Some(cost),
            Outcome::No { .. } => None,
        }
    }

    pub fn max_stored(&self) -> usize {
        self.stats.iter().map(|s| s.stored).max().unwrap_or(0)
    }

    /// One line per node: `node kind generated pruned_validity pruned_merge stored`.
    pub fn stats_report(&self) -> String {
        let mut out = String::from("# node kind generated pruned_validity pruned_merge stored\n");
        for s in &self.stats {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }
}

fn check_preconditions(inst: &Instance, ntd: &NiceTreeDecomposition) -> Result<(), SolveError> {
    let g = &inst.graph;
    if g.vertex_count() < 2 {
        return Err(SolveError::TooFewVertices(g.vertex_count()));
    }
    if !g.is_connected() {
        return Err(SolveError::Disconnected);
    }
    if ntd.vertex_count() != g.vertex_count() {
        return Err(SolveError::DecompositionMismatch(format!(
            "decomposition covers {} vertices, graph has {}",
            ntd.vertex_count(),
            g.vertex_count()
        )));
    }
    if let Err(errs) = ntd.validate(g) {
        return Err(SolveError::DecompositionMismatch(errs.join("; ")));
    }
    let widest = ntd.nodes().iter().map(|n| n.bag.len()).max().unwrap_or(0);
    if widest > MAX_BAG {
        return Err(SolveError::BagTooLarge {
            size: widest,
            max: MAX_BAG,
        });
    }
    Ok(())
}

/// Decides the instance: an st-orientation with at most `inst.k` transitive
/// edges (and the prescribed endpoints, if any). On success the orientation
/// is rebuilt from a minimum-cost root record and re-checked.
pub fn solve(inst: &Instance, ntd: &NiceTreeDecomposition) -> Result<SolveReport, SolveError> {
    check_preconditions(inst, ntd)?;
    let ctx = Context::new(inst);
    let nodes = ntd.nodes();
    let mut sets: Vec<RecordSet> = Vec::with_capacity(nodes.len());
    let mut stats = Vec::with_capacity(nodes.len());
    for (i, node) in nodes.iter().enumerate() {
        let (set, st) = run_node(&ctx, ntd, i, node, &sets);
        let empty = set.is_empty();
        sets.push(set);
        stats.push(st);
        if empty {
            return Ok(SolveReport {
                outcome: Outcome::No { halted_at: Some(i) },
                stats,
                verdict: None,
            });
        }
    }
    let root = ntd.root();
    let best = sets[root]
        .records()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.key.forgotten_source && r.key.forgotten_sink)
        .min_by_key(|(i, r)| (r.cost, *i))
        .map(|(i, r)| (i, r.cost));
    let Some((best, cost)) = best else {
        return Ok(SolveReport {
            outcome: Outcome::No { halted_at: None },
            stats,
            verdict: None,
        });
    };
    let orientation = reconstruct(ntd, &inst.graph, &sets, best);
    let verdict =
        check_st_orientation(inst, &orientation).expect("reconstruction orients every edge");
    Ok(SolveReport {
        outcome: Outcome::Yes {
            transitive_count: verdict.transitive_count,
            orientation,
            cost,
        },
        stats,
        verdict: Some(verdict),
    })
}

/// Record set of every node (indexed like `ntd.nodes()`), without stopping
/// at an empty set. For inspection and testing.
pub fn record_tables(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
) -> Result<Vec<RecordSet>, SolveError> {
    check_preconditions(inst, ntd)?;
    let ctx = Context::new(inst);
    let mut sets = Vec::with_capacity(ntd.len());
    for (i, node) in ntd.nodes().iter().enumerate() {
        let (set, _) = run_node(&ctx, ntd, i, node, &sets);
        sets.push(set);
    }
    Ok(sets)
}

/// Minimum number of transitive edges over all st-orientations (respecting
/// prescribed endpoints): the decision procedure run with budget `|E|`.
pub fn solve_min(inst: &Instance, ntd: &NiceTreeDecomposition) -> Result<SolveReport, SolveError> {
    solve(&inst.with_budget(inst.graph.edge_count()), ntd)
}

fn run_node(
    ctx: &Context<'_>,
    ntd: &NiceTreeDecomposition,
    i: usize,
    node: &NiceNode,
    sets: &[RecordSet],
) -> (RecordSet, NodeStats) {
    match node.kind {
        NodeKind::Leaf => {
            let set = process_leaf();
            let stats = NodeStats {
                node: i,
                kind: NodeKind::Leaf,
                generated: 1,
                pruned_validity: 0,
                pruned_merge: 0,
                stored: 1,
            };
            (set, stats)
        }
        NodeKind::Introduce(v) => process_introduce(ctx, i, &node.bag, v, &sets[node.children[0]]),
        NodeKind::Forget(v) => {
            let c = node.children[0];
            process_forget(ctx, i, &ntd.nodes()[c].bag, v, &sets[c])
        }
        NodeKind::Join => process_join(
            ctx,
            i,
            &node.bag,
            &sets[node.children[0]],
            &sets[node.children[1]],
        ),
    }
}

/// Top-down pointer walk from the chosen root record.
fn reconstruct(
    ntd: &NiceTreeDecomposition,
    g: &UndirectedGraph,
    sets: &[RecordSet],
    root_record: usize,
) -> Orientation {
    let nodes = ntd.nodes();
    let mut chosen = vec![usize::MAX; nodes.len()];
    chosen[ntd.root()] = root_record;
    let mut forward = vec![false; g.edge_count()];
    for i in (0..nodes.len()).rev() {
        if chosen[i] == usize::MAX {
            continue;
        }
        let rec = &sets[i].records()[chosen[i]];
        let node = &nodes[i];
        match rec.provenance {
            Provenance::Leaf => {}
            Provenance::Forget { child } => chosen[node.children[0]] = child,
            Provenance::Join { left, right } => {
                chosen[node.children[0]] = left;
                chosen[node.children[1]] = right;
            }
            Provenance::Introduce {
                child, out_mask, ..
            } => {
                chosen[node.children[0]] = child;
                let NodeKind::Introduce(v) = node.kind else {
                    unreachable!("introduce provenance on a non-introduce node")
                };
                for (j, &w) in node.bag.iter().enumerate() {
                    if let Some(e) = g.edge_index(v, w) {
                        let v_to_w = out_mask >> j & 1 == 1;
                        forward[e] = if v < w { v_to_w } else { !v_to_w };
                    }
                }
            }
        }
    }
    Orientation::from_bits(forward)
}
