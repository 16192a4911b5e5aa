//! Acceptance driver: one `PASS` / `FAIL` line per criterion. Every driver
//! also writes a transcript of everything it computed (no timings), and
//! criterion 9 reruns drivers 1-8 and compares transcripts byte for byte.

mod common;

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use storient::graph::Digraph;
use storient::oracle::{self, DEFAULT_EDGE_CAP};
use storient::random::{
    connected_gnm, random_clauses, random_dag, random_digraph, random_ktree, rng,
};
use storient::reduction::structure::diameter;
use storient::reduction::*;
use storient::verify::transitive_edges;
use storient::{
    heuristic_decompose, make_nice, nice_decomposition, solve, solve_min, Instance,
    NiceTreeDecomposition, UndirectedGraph,
};

struct Report {
    pass: bool,
    detail: String,
    transcript: String,
}

/// DP minimum vs oracle minimum, plus the DP decision for every budget.
fn compare(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
    all_budgets: bool,
    log: &mut String,
) -> bool {
    let dp = solve_min(inst, ntd).unwrap();
    let brute = oracle::min_transitive(inst, DEFAULT_EDGE_CAP)
        .unwrap()
        .map(|a| a.min);
    let mut ok = dp.min_cost() == brute && dp.verdict.as_ref().is_none_or(|v| v.pass);
    write!(
        log,
        "{:?} {:?} {:?} {:?}",
        inst.graph.edges(),
        inst.s,
        inst.t,
        dp.min_cost()
    )
    .unwrap();
    if all_budgets {
        for k in 0..=inst.graph.edge_count() {
            let yes = solve(&inst.with_budget(k), ntd).unwrap().is_yes();
            ok &= yes == brute.is_some_and(|m| m <= k);
            log.push(if yes { 'Y' } else { 'N' });
        }
    }
    log.push('\n');
    ok
}

fn c1() -> Report {
    let mut log = String::new();
    let (mut graphs, mut cases, mut bad) = (0, 0, 0);
    for n in 2..=6 {
        for g in common::connected_representatives(n) {
            graphs += 1;
            let ntd = nice_decomposition(&g);
            cases += 1;
            bad += usize::from(!compare(
                &Instance::free(g.clone(), 0),
                &ntd,
                true,
                &mut log,
            ));
            for s in 0..n {
                for t in (0..n).filter(|&t| t != s) {
                    cases += 1;
                    let inst = Instance::new(g.clone(), Some(s), Some(t), 0).unwrap();
                    bad += usize::from(!compare(&inst, &ntd, false, &mut log));
                }
            }
        }
    }
    Report {
        pass: bad == 0,
        detail: format!("{graphs} connected graphs on 2..6 vertices (isomorphism classes), {cases} instances, {bad} disagreements"),
        transcript: log,
    }
}

fn c2() -> Report {
    let mut log = String::new();
    let mut r = rng(2024);
    let mut bad = 0;
    for i in 0..500 {
        let n = 2 + i % 8;
        let m_max = (n * (n - 1) / 2).min(14);
        let m = n - 1 + (i / 8) % (m_max + 2 - n);
        let g = connected_gnm(n, m, &mut r).unwrap();
        let ntd = nice_decomposition(&g);
        let (s, t) = (i % n, (i / n + 1 + i % n) % n);
        let t = if s == t { (t + 1) % n } else { t };
        bad += usize::from(!compare(
            &Instance::free(g.clone(), 0),
            &ntd,
            false,
            &mut log,
        ));
        let inst = Instance::new(g, Some(s), Some(t), 0).unwrap();
        bad += usize::from(!compare(&inst, &ntd, false, &mut log));
    }
    Report {
        pass: bad == 0,
        detail: format!(
            "500 random graphs (n <= 9, m <= 14), free and with (s,t): {bad} disagreements"
        ),
        transcript: log,
    }
}

fn c3() -> Report {
    let g = |n: usize, e: &[(usize, usize)]| UndirectedGraph::new(n, e.iter().copied()).unwrap();
    let anchors = [
        ("K3", g(3, &[(0, 1), (1, 2), (0, 2)]), Some(1)),
        ("C4", g(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]), Some(0)),
        (
            "K4",
            g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            Some(3),
        ),
        ("K1,3", g(4, &[(0, 1), (0, 2), (0, 3)]), None),
    ];
    let mut log = String::new();
    let mut pass = true;
    for (name, graph, want) in anchors {
        let inst = Instance::free(graph.clone(), 0);
        let brute = oracle::min_transitive(&inst, DEFAULT_EDGE_CAP)
            .unwrap()
            .map(|a| a.min);
        let dp = solve_min(&inst, &nice_decomposition(&graph))
            .unwrap()
            .min_cost();
        pass &= brute == want && dp == want;
        writeln!(log, "{name} oracle={brute:?} dp={dp:?}").unwrap();
    }
    Report {
        pass,
        detail: "K3 = 1, C4 = 0, K4 = 3, K1,3 = NO (oracle and DP)".into(),
        transcript: log,
    }
}

fn c4() -> Report {
    let mut log = String::new();
    let mut r = rng(4004);
    let mut bad = 0;
    let mut check = |d: &Digraph, log: &mut String| {
        let a = transitive_edges(d).len();
        let b = common::closure_matrix_count(d);
        if storient::verify::is_acyclic(d) {
            bad += usize::from(a != common::dag_closure_count(d));
        }
        bad += usize::from(a != b);
        writeln!(log, "{a}").unwrap();
    };
    for i in 0..1000 {
        let n = 1 + i % 10;
        let p = 0.1 + 0.08 * (i % 10) as f64;
        check(&random_dag(n, p, &mut r), &mut log);
        check(&random_digraph(n, p, &mut r), &mut log);
    }
    Report {
        pass: bad == 0,
        detail: format!("1000 random DAGs + 1000 random digraphs (n <= 10), per-arc and single closure matrices: {bad} mismatches"),
        transcript: log,
    }
}

fn c5() -> Report {
    let gates = common::gadget_gates(&GadgetLibrary::builtin());
    let mut log = String::new();
    for g in &gates {
        writeln!(log, "{} {:?}", g.name, g.observed).unwrap();
    }
    let failed: Vec<&str> = gates
        .iter()
        .filter(|g| !g.pass())
        .map(|g| g.name.as_str())
        .collect();
    let names: Vec<&str> = gates.iter().map(|g| g.name.as_str()).collect();
    Report {
        pass: failed.is_empty(),
        detail: format!(
            "two orientation classes each for {}; failed: {failed:?}",
            names.join(", ")
        ),
        transcript: log,
    }
}

fn g_nontransitive(f: &Nae3SatFormula, lib: &GadgetLibrary) -> bool {
    let red = build_g_phi(f, lib).unwrap();
    let inst = Instance::new(red.graph.clone(), Some(red.s), Some(red.t), 0).unwrap();
    let rep = solve(&inst, &nice_decomposition(&red.graph)).unwrap();
    rep.is_yes() && rep.verdict.is_some_and(|v| v.pass)
}

fn c6() -> Report {
    let lib = GadgetLibrary::builtin();
    let mut formulas = common::small_formulas(4);
    let exhaustive = formulas.len();
    let mut r = rng(606);
    for i in 0..50 {
        let vars = 3 + i % 4;
        let cl = random_clauses(vars, 3, &mut r)
            .iter()
            .map(|c| c.to_vec())
            .collect();
        formulas.push(Nae3SatFormula::new(vars, cl).unwrap());
    }
    let mut log = String::new();
    let (mut bad, mut sat_count) = (0, 0);
    for f in &formulas {
        let sat = nae_satisfiable(f).unwrap().is_some();
        let yes = g_nontransitive(f, &lib);
        sat_count += usize::from(sat);
        bad += usize::from(sat != yes);
        writeln!(log, "{:?} {sat} {yes}", f.clauses()).unwrap();
    }
    Report {
        pass: bad == 0,
        detail: format!(
            "{exhaustive} formulas (<= 2 clauses, <= 4 variables) + 50 random 3-clause formulas, {sat_count} satisfiable: {bad} mismatches"
        ),
        transcript: log,
    }
}

fn c7() -> Report {
    let lib = GadgetLibrary::builtin();
    let mut r = rng(707);
    let mut log = String::new();
    let (mut h_bad, mut j_bad) = (0, 0);
    let j_claims = Claims {
        max_degree: Some(4),
        max_diameter: None,
        triconnected_subdivision: true,
    };
    for i in 0..50 {
        let vars = 3 + i % 5;
        let cl = random_clauses(vars, 1 + i % 5, &mut r)
            .iter()
            .map(|c| c.to_vec())
            .collect();
        let f = Nae3SatFormula::new(vars, cl).unwrap();
        let h = build_h_phi(&f, &lib).unwrap();
        let d = diameter(&h.graph);
        h_bad += usize::from(!d.is_some_and(|d| d <= 6));
        let j = build_j_phi(&f, &lib).unwrap();
        let res = validate_structure(&j.graph, &j_claims);
        j_bad += usize::from(res.is_err());
        writeln!(log, "{:?} diam={d:?} j={res:?}", f.clauses()).unwrap();
    }
    Report {
        pass: h_bad == 0 && j_bad == 0,
        detail: format!(
            "50 random formulas: hub variant diameter > 6 in {h_bad}; degree-4 variant degree/3-connectivity failures in {j_bad}"
        ),
        transcript: log,
    }
}

/// Records stored at any node must stay below this.
const STORED_CAP: usize = 100_000;
const TIME_LIMIT: Duration = Duration::from_secs(120);

fn c8() -> Report {
    let mut log = String::new();
    let mut medians = [Vec::new(), Vec::new()];
    let (mut slowest, mut max_stored) = (Duration::ZERO, 0);
    for (slot, n) in [50, 200].into_iter().enumerate() {
        for seed in 0..3 {
            let g = random_ktree(n, 3, &mut rng(800 + seed));
            let ntd = make_nice(&heuristic_decompose(&g));
            let start = Instant::now();
            let rep = solve_min(&Instance::free(g, 0), &ntd).unwrap();
            slowest = slowest.max(start.elapsed());
            let mut stored: Vec<usize> = rep.stats.iter().map(|s| s.stored).collect();
            stored.sort_unstable();
            medians[slot].push(stored[stored.len() / 2]);
            max_stored = max_stored.max(rep.max_stored());
            writeln!(
                log,
                "n={n} seed={seed} width={} min={:?}",
                ntd.width(),
                rep.min_cost()
            )
            .unwrap();
            log.push_str(&rep.stats_report());
        }
    }
    let mean = |v: &[usize]| v.iter().sum::<usize>() as f64 / v.len() as f64;
    let ratio = mean(&medians[1]) / mean(&medians[0]);
    Report {
        pass: slowest < TIME_LIMIT && max_stored < STORED_CAP && ratio < 2.0,
        detail: format!(
            "random 3-trees n = 50, 200: slowest solve {:.1}s (< 120s), max stored {max_stored} (< {STORED_CAP}), median stored n=200/n=50 = {ratio:.2} (< 2)",
            slowest.as_secs_f64()
        ),
        transcript: log,
    }
}

type Driver = fn() -> Report;

const DRIVERS: [(&str, Driver); 8] = [
    ("oracle equivalence, exhaustive", c1),
    ("oracle equivalence, randomized", c2),
    ("anchor values", c3),
    ("verifier cross-check", c4),
    ("gadget behavioural gates", c5),
    ("reduction round trip", c6),
    ("structural claims", c7),
    ("scaling smoke test", c8),
];

fn main() -> ExitCode {
    let mut all = true;
    let mut transcripts = Vec::new();
    for (i, (name, driver)) in DRIVERS.iter().enumerate() {
        let start = Instant::now();
        let rep = driver();
        println!(
            "{} criterion {}: {name} -- {} [{:.1}s]",
            if rep.pass { "PASS" } else { "FAIL" },
            i + 1,
            rep.detail,
            start.elapsed().as_secs_f64()
        );
        all &= rep.pass;
        transcripts.push(rep.transcript);
    }
    let start = Instant::now();
    let differing: Vec<usize> = DRIVERS
        .iter()
        .zip(&transcripts)
        .enumerate()
        .filter(|(_, ((_, driver), first))| driver().transcript != **first)
        .map(|(i, _)| i + 1)
        .collect();
    let bytes: usize = transcripts.iter().map(String::len).sum();
    println!(
        "{} criterion 9: determinism -- reran drivers 1-8, {bytes} transcript bytes, differing: {differing:?} [{:.1}s]",
        if differing.is_empty() { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    all &= differing.is_empty();
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
