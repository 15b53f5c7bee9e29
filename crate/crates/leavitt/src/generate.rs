//! Exhaustive and randomized generators for the graph families the test
//! suites sweep: labeled trees of out-degree ≤ 1, loop-rooted graphs, and
//! small connected acyclic digraphs.

use rand::Rng;

use crate::graph::Graph;

fn build(n: usize, targets: &[(usize, usize)]) -> Graph {
    let vertices = (1..=n).map(|i| format!("v{i}")).collect();
    let edges = targets
        .iter()
        .enumerate()
        .map(|(k, &(src, dst))| (format!("e{}", k + 1), format!("v{}", src + 1), format!("v{}", dst + 1)))
        .collect();
    Graph::new(vertices, edges).expect("generated graph is well-formed")
}

/// Does following `f` from every vertex reach `root` without revisiting?
fn flows_to_root(n: usize, root: usize, f: &[Option<usize>]) -> bool {
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut at = start;
        loop {
            if at == root {
                break;
            }
            if seen[at] {
                return false;
            }
            seen[at] = true;
            match f[at] {
                Some(next) => at = next,
                None => return false,
            }
        }
    }
    true
}

/// All connected out-degree-≤1 acyclic graphs on exactly `n` labeled
/// vertices: every choice of sink and of one out-edge per remaining vertex
/// that flows to the sink. Deterministic order.
pub fn all_rooted_trees(n: usize) -> Vec<Graph> {
    assert!(n >= 1);
    let mut out = Vec::new();
    for root in 0..n {
        let movable: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        let choices: Vec<Vec<usize>> = movable
            .iter()
            .map(|&v| (0..n).filter(|&t| t != v).collect())
            .collect();
        let mut counter = vec![0usize; movable.len()];
        loop {
            let mut f: Vec<Option<usize>> = vec![None; n];
            for (slot, &v) in movable.iter().enumerate() {
                f[v] = Some(choices[slot][counter[slot]]);
            }
            if flows_to_root(n, root, &f) {
                let targets: Vec<(usize, usize)> =
                    movable.iter().map(|&v| (v, f[v].unwrap())).collect();
                out.push(build(n, &targets));
            }
            // Mixed-radix increment.
            let mut pos = 0;
            loop {
                if pos == counter.len() {
                    break;
                }
                counter[pos] += 1;
                if counter[pos] < choices[pos].len() {
                    break;
                }
                counter[pos] = 0;
                pos += 1;
            }
            if pos == counter.len() {
                break;
            }
        }
    }
    out
}

/// All trees with 1..=n vertices, concatenated in size order.
pub fn all_rooted_trees_up_to(n: usize) -> Vec<Graph> {
    (1..=n).flat_map(all_rooted_trees).collect()
}

/// Random connected out-degree-≤1 graph on `n` vertices whose cycle is a
/// single loop (at v1); every other vertex flows into it.
pub fn random_loop_graph<R: Rng>(rng: &mut R, n: usize) -> Graph {
    assert!(n >= 1);
    loop {
        let mut f: Vec<Option<usize>> = vec![None; n];
        for v in 1..n {
            let mut t = rng.gen_range(0..n - 1);
            if t >= v {
                t += 1;
            }
            f[v] = Some(t);
        }
        if flows_to_root(n, 0, &f) {
            let mut targets = vec![(0, 0)];
            targets.extend((1..n).map(|v| (v, f[v].unwrap())));
            return build(n, &targets);
        }
    }
}

/// All weakly connected acyclic simple digraphs on exactly `n` labeled
/// vertices (no loops, no parallel edges). Exponential in n²; intended for
/// n ≤ 4.
pub fn all_acyclic_connected(n: usize) -> Vec<Graph> {
    assert!(n >= 1);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let targets: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(k, _)| mask & (1 << k) != 0)
            .map(|(_, &p)| p)
            .collect();
        let g = build(n, &targets);
        if g.is_acyclic() && g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Random weakly connected acyclic simple digraph on `n` labeled vertices
/// with out-degree capped at `max_out`.
pub fn random_acyclic_connected<R: Rng>(rng: &mut R, n: usize, max_out: usize) -> Graph {
    assert!(n >= 1);
    loop {
        // A random topological order keeps the edge set acyclic by
        // construction.
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut targets = Vec::new();
        let mut out_deg = vec![0usize; n];
        for a in 0..n {
            for b in (a + 1)..n {
                let (src, dst) = (order[a], order[b]);
                if out_deg[src] < max_out && rng.gen_bool(0.4) {
                    out_deg[src] += 1;
                    targets.push((src, dst));
                }
            }
        }
        targets.sort_unstable();
        let g = build(n, &targets);
        if g.is_connected() {
            return g;
        }
    }
}
