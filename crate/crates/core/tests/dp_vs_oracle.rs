use storient::oracle::{self, DEFAULT_EDGE_CAP};
use storient::random::{connected_gnm, rng};
use storient::{nice_decomposition, solve, solve_min, Instance, Outcome};

fn agree(inst: &Instance) {
    let ntd = nice_decomposition(&inst.graph);
    let dp = solve_min(inst, &ntd).unwrap();
    let brute = oracle::min_transitive(inst, DEFAULT_EDGE_CAP).unwrap();
    let brute = brute.map(|a| (a.min, a.witness));
    assert_eq!(
        dp.min_cost(),
        brute.as_ref().map(|b| b.0),
        "graph {:?} s={:?} t={:?}",
        inst.graph.edges(),
        inst.s,
        inst.t
    );
    if let Outcome::Yes {
        transitive_count,
        cost,
        ..
    } = dp.outcome
    {
        assert_eq!(transitive_count, cost);
        assert!(dp.verdict.unwrap().pass);
    }
}

#[test]
fn random_graphs_agree() {
    let mut r = rng(11);
    for n in 2..=8 {
        for m in n - 1..=(n * (n - 1) / 2).min(13) {
            for _ in 0..4 {
                let g = connected_gnm(n, m, &mut r).unwrap();
                agree(&Instance::free(g.clone(), 0));
                agree(&Instance::new(g, Some(0), Some(n - 1), 0).unwrap());
            }
        }
    }
}

#[test]
fn decision_matches_min() {
    let mut r = rng(12);
    for _ in 0..60 {
        let g = connected_gnm(7, 11, &mut r).unwrap();
        let ntd = nice_decomposition(&g);
        let min = oracle::min_transitive(&Instance::free(g.clone(), 0), DEFAULT_EDGE_CAP)
            .unwrap()
            .map(|b| b.min);
        for k in 0..5 {
            let yes = solve(&Instance::free(g.clone(), k), &ntd).unwrap().is_yes();
            assert_eq!(yes, min.is_some_and(|m| m <= k));
        }
    }
}
