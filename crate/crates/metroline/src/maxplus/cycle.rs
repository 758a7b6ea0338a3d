//! Maximum cycle ratio of a directed multigraph whose edges carry a weight
//! and a nonnegative integer shift (event count).
//!
//! The quantity computed is `max over cycles of Σweight / Σshift`, which is
//! the asymptotic growth rate per event of the induced max-plus dynamics.
//! Three independent routes are provided:
//!
//! - [`howard`] — policy iteration. The production path; also yields node
//!   potentials that solve the spectral equation, used for stationary seeds.
//! - [`karp`]   — shift-normalization followed by Karp's maximum cycle mean.
//!   Fallback route; Karp alone assumes unit shifts, so edges are first
//!   rewritten so that every edge carries exactly zero or one shift and the
//!   zero-shift structure is folded into the token edges.
//! - [`enumerate_cycle_ratios`] — brute force over simple cycles; the oracle
//!   for small graphs.
//!
//! All three are generic over [`CycleScalar`]; run them over exact rationals
//! when the answer must be free of rounding.

use num_traits::Zero;

use super::graph::GraphError;
use crate::scalar::CycleScalar;

/// One edge of the ratio problem: `to` happens `weight` after `from`,
/// `shift` events earlier.
#[derive(Debug, Clone)]
pub struct RatioEdge<S> {
    pub from: usize,
    pub to: usize,
    pub weight: S,
    pub shift: u32,
}

/// Result of policy iteration: the maximum cycle ratio plus per-node
/// potentials satisfying `v[u] = max over out-edges (w − rate·shift + v[to])`.
#[derive(Debug, Clone)]
pub struct HowardSolution<S> {
    pub rate: S,
    pub potential: Vec<S>,
}

const MAX_POLICY_ROUNDS: usize = 100_000;

/// Maximum cycle ratio by policy iteration.
///
/// Requires every node to have at least one outgoing edge and every cycle to
/// carry at least one shift. On a strongly connected graph the returned
/// potentials solve the spectral equation exactly (for exact scalar types).
pub fn howard<S: CycleScalar>(
    node_count: usize,
    edges: &[RatioEdge<S>],
) -> Result<HowardSolution<S>, GraphError> {
    if node_count == 0 || edges.is_empty() {
        return Err(GraphError::NoCycles);
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (ei, e) in edges.iter().enumerate() {
        out[e.from].push(ei);
    }
    if out.iter().any(Vec::is_empty) {
        return Err(GraphError::Disconnected);
    }

    let mut policy: Vec<usize> = out.iter().map(|o| o[0]).collect();
    let mut ratio: Vec<S> = vec![S::zero(); node_count];
    let mut potential: Vec<S> = vec![S::zero(); node_count];

    for _ in 0..MAX_POLICY_ROUNDS {
        evaluate_policy(node_count, edges, &policy, &mut ratio, &mut potential)?;

        // Improvement phase one: steer nodes toward higher-ratio components.
        let mut improved = false;
        for u in 0..node_count {
            let mut best_edge = policy[u];
            let mut best = ratio[edges[policy[u]].to].clone();
            for &ei in &out[u] {
                let cand = &ratio[edges[ei].to];
                if *cand > best {
                    best = cand.clone();
                    best_edge = ei;
                }
            }
            if best > ratio[u] && best_edge != policy[u] {
                policy[u] = best_edge;
                improved = true;
            }
        }
        if improved {
            continue;
        }

        // Improvement phase two: raise potentials at fixed ratio. Potentials
        // of different ratio classes share no anchor, so only edges staying
        // within the node's class are comparable.
        for u in 0..node_count {
            let mut best_edge = policy[u];
            let mut best = potential[u].clone();
            for &ei in &out[u] {
                let e = &edges[ei];
                if ratio[e.to] != ratio[u] {
                    continue;
                }
                let cand = e.weight.clone() - ratio[u].clone() * S::from_shift(e.shift)
                    + potential[e.to].clone();
                if cand > best {
                    best = cand;
                    best_edge = ei;
                }
            }
            if best_edge != policy[u] {
                policy[u] = best_edge;
                improved = true;
            }
        }
        if !improved {
            let rate = ratio
                .iter()
                .cloned()
                .reduce(|a, b| if b > a { b } else { a })
                .expect("nonempty");
            return Ok(HowardSolution { rate, potential });
        }
    }
    Err(GraphError::IterationLimit)
}

/// Evaluates a policy: finds the cycle each node drains into, its ratio, and
/// potentials consistent with that ratio along policy edges.
fn evaluate_policy<S: CycleScalar>(
    node_count: usize,
    edges: &[RatioEdge<S>],
    policy: &[usize],
    ratio: &mut [S],
    potential: &mut [S],
) -> Result<(), GraphError> {
    let mut resolved = vec![false; node_count];
    let mut stamp = vec![usize::MAX; node_count];

    for start in 0..node_count {
        if resolved[start] {
            continue;
        }
        // Walk the functional graph until an already-resolved node or a node
        // from this very walk reappears (a fresh cycle).
        let mut path = Vec::new();
        let mut u = start;
        while !resolved[u] && stamp[u] != start {
            stamp[u] = start;
            path.push(u);
            u = edges[policy[u]].to;
        }

        let tree_end = if resolved[u] {
            path.len()
        } else {
            // Fresh cycle: path[pos..] closes on u.
            let pos = path.iter().position(|&x| x == u).expect("cycle entry");
            let cycle = &path[pos..];
            let mut weight_sum = S::zero();
            let mut shift_sum: u64 = 0;
            for &c in cycle {
                let e = &edges[policy[c]];
                weight_sum = weight_sum + e.weight.clone();
                shift_sum += u64::from(e.shift);
            }
            if shift_sum == 0 {
                return Err(GraphError::ZeroShiftCycle);
            }
            let rho = weight_sum
                / S::from_u64(shift_sum).expect("shift sum representable in cycle scalar");
            // Anchor the cycle at its entry node and unwind backwards so the
            // potential equation holds along every cycle edge.
            potential[u] = S::zero();
            ratio[u] = rho.clone();
            resolved[u] = true;
            for i in (pos + 1..path.len()).rev() {
                let x = path[i];
                let e = &edges[policy[x]];
                potential[x] = e.weight.clone() - rho.clone() * S::from_shift(e.shift)
                    + potential[e.to].clone();
                ratio[x] = rho.clone();
                resolved[x] = true;
            }
            pos
        };

        // Unwind the tree part of the walk against resolved successors.
        for i in (0..tree_end).rev() {
            let x = path[i];
            if resolved[x] {
                continue;
            }
            let e = &edges[policy[x]];
            let r = ratio[e.to].clone();
            potential[x] =
                e.weight.clone() - r.clone() * S::from_shift(e.shift) + potential[e.to].clone();
            ratio[x] = r;
            resolved[x] = true;
        }
    }
    Ok(())
}

/// Maximum cycle ratio via Karp's maximum cycle mean on a shift-normalized
/// graph.
///
/// Edges with shift `s ≥ 2` are split into unit-shift chains; the zero-shift
/// subgraph (acyclic by precondition) is folded into composite "token" edges
/// so every remaining edge carries exactly one shift, at which point cycle
/// ratio equals cycle mean and Karp's dynamic program applies.
pub fn karp<S: CycleScalar>(node_count: usize, edges: &[RatioEdge<S>]) -> Result<S, GraphError> {
    if node_count == 0 || edges.is_empty() {
        return Err(GraphError::NoCycles);
    }

    // Split multi-shift edges through auxiliary nodes.
    let mut n = node_count;
    let mut zero_edges: Vec<(usize, usize, S)> = Vec::new();
    let mut token_edges: Vec<(usize, usize, S)> = Vec::new();
    for e in edges {
        match e.shift {
            0 => zero_edges.push((e.from, e.to, e.weight.clone())),
            1 => token_edges.push((e.from, e.to, e.weight.clone())),
            s => {
                let mut prev = e.from;
                for step in 0..s {
                    let next = if step == s - 1 {
                        e.to
                    } else {
                        n += 1;
                        n - 1
                    };
                    let w = if step == 0 { e.weight.clone() } else { S::zero() };
                    token_edges.push((prev, next, w));
                    prev = next;
                }
            }
        }
    }

    // Longest zero-shift path between every ordered pair, by DP over a
    // topological order of the zero-shift subgraph.
    let topo = zero_topo_order(n, &zero_edges)?;
    let mut reach: Vec<Vec<Option<S>>> = vec![vec![None; n]; n];
    for a in 0..n {
        reach[a][a] = Some(S::zero());
        for &u in &topo {
            let Some(du) = reach[a][u].clone() else {
                continue;
            };
            for &(from, to, ref w) in &zero_edges {
                if from != u {
                    continue;
                }
                let cand = du.clone() + w.clone();
                if reach[a][to].as_ref().map_or(true, |cur| cand > *cur) {
                    reach[a][to] = Some(cand);
                }
            }
        }
    }

    // Composite graph: zero-shift prefix followed by one token edge.
    let mut unit: Vec<(usize, usize, S)> = Vec::new();
    for &(u, v, ref w) in &token_edges {
        for a in 0..n {
            if let Some(prefix) = &reach[a][u] {
                unit.push((a, v, prefix.clone() + w.clone()));
            }
        }
    }
    if unit.is_empty() {
        return Err(GraphError::NoCycles);
    }

    // Karp: D[k][v] = best weight of a k-edge walk from the source.
    let source = 0;
    let mut table: Vec<Vec<Option<S>>> = vec![vec![None; n]; n + 1];
    table[0][source] = Some(S::zero());
    for k in 1..=n {
        for &(u, v, ref w) in &unit {
            if let Some(du) = table[k - 1][u].clone() {
                let cand = du + w.clone();
                if table[k][v].as_ref().map_or(true, |cur| cand > *cur) {
                    table[k][v] = Some(cand);
                }
            }
        }
    }

    let mut best: Option<S> = None;
    for v in 0..n {
        let Some(dn) = table[n][v].clone() else {
            continue;
        };
        let mut v_min: Option<S> = None;
        for (k, row) in table.iter().enumerate().take(n) {
            if let Some(dk) = row[v].clone() {
                let gap = n - k;
                let cand = (dn.clone() - dk)
                    / S::from_usize(gap).expect("walk length representable in cycle scalar");
                if v_min.as_ref().map_or(true, |cur| cand < *cur) {
                    v_min = Some(cand);
                }
            }
        }
        if let Some(m) = v_min {
            if best.as_ref().map_or(true, |cur| m > *cur) {
                best = Some(m);
            }
        }
    }
    best.ok_or(GraphError::NoCycles)
}

fn zero_topo_order<S>(n: usize, zero_edges: &[(usize, usize, S)]) -> Result<Vec<usize>, GraphError> {
    let mut indeg = vec![0usize; n];
    for &(_, to, _) in zero_edges {
        indeg[to] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&u| indeg[u] == 0).collect();
    let mut order = Vec::with_capacity(n);
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        order.push(u);
        for &(from, to, _) in zero_edges {
            if from == u {
                indeg[to] -= 1;
                if indeg[to] == 0 {
                    queue.push(to);
                }
            }
        }
    }
    if order.len() != n {
        return Err(GraphError::ZeroShiftCycle);
    }
    Ok(order)
}

/// Every simple-cycle ratio of the graph, sorted ascending and deduplicated.
///
/// Brute force by DFS: a cycle is enumerated once, rooted at its
/// smallest-index node. Parallel edges yield distinct cycles. Intended as
/// the oracle for [`howard`]/[`karp`] on small graphs.
pub fn enumerate_cycle_ratios<S: CycleScalar>(
    node_count: usize,
    edges: &[RatioEdge<S>],
    max_nodes: usize,
) -> Result<Vec<S>, GraphError> {
    if node_count > max_nodes {
        return Err(GraphError::TooLarge {
            nodes: node_count,
            limit: max_nodes,
        });
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (ei, e) in edges.iter().enumerate() {
        out[e.from].push(ei);
    }

    let mut ratios: Vec<S> = Vec::new();
    let mut on_path = vec![false; node_count];

    fn dfs<S: CycleScalar>(
        root: usize,
        u: usize,
        weight: S,
        shift: u64,
        edges: &[RatioEdge<S>],
        out: &[Vec<usize>],
        on_path: &mut [bool],
        ratios: &mut Vec<S>,
    ) -> Result<(), GraphError> {
        for &ei in &out[u] {
            let e = &edges[ei];
            let w = weight.clone() + e.weight.clone();
            let s = shift + u64::from(e.shift);
            if e.to == root {
                if s == 0 {
                    return Err(GraphError::ZeroShiftCycle);
                }
                ratios.push(
                    w / S::from_u64(s).expect("shift sum representable in cycle scalar"),
                );
            } else if e.to > root && !on_path[e.to] {
                on_path[e.to] = true;
                dfs(root, e.to, w, s, edges, out, on_path, ratios)?;
                on_path[e.to] = false;
            }
        }
        Ok(())
    }

    for root in 0..node_count {
        on_path[root] = true;
        dfs(
            root,
            root,
            S::zero(),
            0,
            edges,
            &out,
            &mut on_path,
            &mut ratios,
        )?;
        on_path[root] = false;
    }

    if ratios.is_empty() {
        return Err(GraphError::NoCycles);
    }
    ratios.sort_by(|a, b| a.partial_cmp(b).expect("cycle ratios are ordered"));
    ratios.dedup();
    Ok(ratios)
}
