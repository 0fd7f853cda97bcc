//! Bottleneck assignment internals.
//!
//! The minimum over all permutations of the maximum pairwise cost is always
//! one of the `n^2` matrix entries, so the solver binary-searches the sorted
//! entry set and tests each threshold for a perfect matching in the graph of
//! edges at or below it (Hopcroft-Karp). No epsilon enters the search; the
//! returned value is bit-identical to an entry of the cost matrix.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Square cost matrix in row-major order.
pub(crate) struct Costs<'a> {
    entries: &'a [f64],
    n: usize,
}

impl<'a> Costs<'a> {
    pub(crate) fn new(entries: &'a [f64], n: usize) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Self { entries, n }
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }
}

/// Maximum bipartite matching size, Hopcroft-Karp.
pub(crate) fn max_bipartite_matching(adj: &[Vec<usize>], right_count: usize) -> usize {
    let left_count = adj.len();
    let mut match_left = vec![usize::MAX; left_count];
    let mut match_right = vec![usize::MAX; right_count];
    let mut dist = vec![usize::MAX; left_count];
    let mut size = 0;
    loop {
        // BFS layering from free left vertices.
        for u in 0..left_count {
            dist[u] = if match_left[u] == usize::MAX { 0 } else { usize::MAX };
        }
        let mut queue: VecDeque<usize> = (0..left_count).filter(|&u| dist[u] == 0).collect();
        let mut reachable_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match match_right[v] {
                    usize::MAX => reachable_free = true,
                    w if dist[w] == usize::MAX => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !reachable_free {
            return size;
        }
        for u in 0..left_count {
            if match_left[u] == usize::MAX
                && augment(u, adj, &mut dist, &mut match_left, &mut match_right)
            {
                size += 1;
            }
        }
    }
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    dist: &mut [usize],
    match_left: &mut [usize],
    match_right: &mut [usize],
) -> bool {
    let d = dist[u];
    dist[u] = usize::MAX;
    for &v in &adj[u] {
        let w = match_right[v];
        if w == usize::MAX || (dist[w] == d + 1 && augment(w, adj, dist, match_left, match_right))
        {
            match_left[u] = v;
            match_right[v] = u;
            return true;
        }
    }
    false
}

fn threshold_adjacency(costs: &Costs, threshold: f64, forbidden: Option<(usize, usize)>) -> Vec<Vec<usize>> {
    let n = costs.n();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| costs.at(i, j) <= threshold && forbidden != Some((i, j)))
                .collect()
        })
        .collect()
}

fn feasible(costs: &Costs, threshold: f64, forbidden: Option<(usize, usize)>) -> bool {
    let adj = threshold_adjacency(costs, threshold, forbidden);
    max_bipartite_matching(&adj, costs.n()) == costs.n()
}

fn candidate_values(costs: &Costs) -> Vec<f64> {
    let mut values: Vec<f64> = costs.entries.to_vec();
    values.sort_unstable_by(f64::total_cmp);
    values.dedup();
    values
}

/// Exact min-max assignment value.
pub(crate) fn bottleneck_value(costs: &Costs) -> f64 {
    search(costs, None).expect("full cost matrix always admits a permutation")
}

/// Exact min-max assignment value among permutations avoiding one edge.
/// `None` when no such permutation exists (only for n = 1).
pub(crate) fn bottleneck_value_excluding(costs: &Costs, forbidden: (usize, usize)) -> Option<f64> {
    search(costs, Some(forbidden))
}

fn search(costs: &Costs, forbidden: Option<(usize, usize)>) -> Option<f64> {
    let values = candidate_values(costs);
    if !feasible(costs, values[values.len() - 1], forbidden) {
        return None;
    }
    let (mut lo, mut hi) = (0, values.len() - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(costs, values[mid], forbidden) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(values[lo])
}

/// Lexicographically smallest permutation whose maximum cost is at most
/// `value`. `value` must be feasible (e.g. the bottleneck optimum).
pub(crate) fn lexicographic_matching(costs: &Costs, value: f64) -> Vec<usize> {
    let n = costs.n();
    let mut used = vec![false; n];
    let mut sigma = Vec::with_capacity(n);
    for i in 0..n {
        let mut fixed = None;
        for j in 0..n {
            if used[j] || costs.at(i, j) > value {
                continue;
            }
            // Rows below i must still match the remaining columns.
            let adj: Vec<Vec<usize>> = (i + 1..n)
                .map(|r| {
                    (0..n)
                        .filter(|&c| !used[c] && c != j && costs.at(r, c) <= value)
                        .collect()
                })
                .collect();
            if max_bipartite_matching(&adj, n) == n - i - 1 {
                fixed = Some(j);
                break;
            }
        }
        let j = fixed.expect("value is feasible, so every prefix extends");
        used[j] = true;
        sigma.push(j);
    }
    sigma
}
