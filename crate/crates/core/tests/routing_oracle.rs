//! Dijkstra against exhaustive search over simple paths.

use fsosn::topology::{dijkstra, SlotGraph};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Cheapest simple path cost by depth-first enumeration.
fn brute_force(adj: &[Vec<(usize, f64)>], from: usize, to: usize) -> Option<f64> {
    fn walk(adj: &[Vec<(usize, f64)>], u: usize, to: usize, cost: f64, seen: &mut [bool], best: &mut Option<f64>) {
        if u == to {
            if best.is_none_or(|b| cost < b) {
                *best = Some(cost);
            }
            return;
        }
        for &(v, w) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                walk(adj, v, to, cost + w, seen, best);
                seen[v] = false;
            }
        }
    }
    let mut seen = vec![false; adj.len()];
    seen[from] = true;
    let mut best = None;
    walk(adj, from, to, 0.0, &mut seen, &mut best);
    best
}

#[test]
fn dijkstra_matches_exhaustive_search() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut reachable = 0;
    for case in 0..50 {
        let n = rng.gen_range(4..=30);
        // sparse enough that enumeration of simple paths stays cheap
        let p = rng.gen_range(1.5..3.0) / n as f64;
        let mut edges = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.gen_bool(p.min(1.0)) {
                    // integer weights keep sums exact, so costs compare with ==
                    let w = rng.gen_range(1..100) as f64;
                    edges.push((a, b, w));
                    adj[a].push((b, w));
                    adj[b].push((a, w));
                }
            }
        }
        let g = SlotGraph::from_edges(n, &edges);
        let expected = brute_force(&adj, g.source(), g.destination());
        let got = dijkstra(&g, g.source(), g.destination());
        assert_eq!(got.as_ref().map(|p| p.total_km()), expected, "case {case}: n={n}");
        if let Some(path) = got {
            reachable += 1;
            assert_eq!(path.nodes.first(), Some(&g.source()));
            assert_eq!(path.nodes.last(), Some(&g.destination()));
            for (w, hop) in path.nodes.windows(2).zip(&path.edge_km) {
                assert_eq!(g.edge_weight(w[0], w[1]), Some(*hop));
            }
        }
    }
    assert!(reachable >= 10, "only {reachable} of 50 random graphs were connected");
}
