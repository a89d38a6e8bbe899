//! Maximum cardinality search and perfect orderings.

use crate::error::GraphError;
use crate::graph::{MixedGraph, VertexId};

/// A vertex ordering such that directing every line from the earlier to the
/// later endpoint gives a DAG without v-structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectOrdering(Vec<VertexId>);

impl PerfectOrdering {
    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }

    /// `rank[v]` is the position of `v` in the ordering.
    pub fn ranks(&self) -> Vec<usize> {
        ranks_of(&self.0)
    }
}

fn ranks_of(order: &[VertexId]) -> Vec<usize> {
    let mut rank = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    rank
}

/// Maximum cardinality search seeded with `prefix`.
///
/// The prefix vertices are visited first, in the given order; afterwards the
/// unvisited vertex with the most visited neighbours is taken next, ties going
/// to the smallest id. On a chordal graph the visit order is a perfect
/// ordering starting with `prefix`. Returns `None` if `u` is not chordal.
pub fn mcs_ordering(u: &MixedGraph, prefix: &[VertexId]) -> Result<Option<PerfectOrdering>, GraphError> {
    if !u.is_undirected() {
        return Err(GraphError::NotUndirected);
    }
    let n = u.n();
    for &v in prefix {
        u.check_vertex(v)?;
    }
    let mut seen = vec![false; n];
    for &v in prefix {
        if std::mem::replace(&mut seen[v], true) {
            return Err(GraphError::PrefixNotComplete);
        }
    }
    if !u.is_complete_set(prefix) {
        return Err(GraphError::PrefixNotComplete);
    }

    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let visit = |v: VertexId, order: &mut Vec<VertexId>, visited: &mut [bool], weight: &mut [usize]| {
        visited[v] = true;
        order.push(v);
        for &w in u.line_neighbours(v) {
            weight[w] += 1;
        }
    };
    for &v in prefix {
        visit(v, &mut order, &mut visited, &mut weight);
    }
    while order.len() < n {
        let mut best: Option<VertexId> = None;
        for v in (0..n).filter(|&v| !visited[v]) {
            if best.is_none_or(|b| weight[v] > weight[b]) {
                best = Some(v);
            }
        }
        let v = best.expect("an unvisited vertex remains");
        visit(v, &mut order, &mut visited, &mut weight);
    }

    Ok(is_perfect_ordering(u, &order).then_some(PerfectOrdering(order)))
}

/// Whether `u` is chordal (every cycle of length at least four has a chord).
pub fn is_chordal(u: &MixedGraph) -> Result<bool, GraphError> {
    Ok(mcs_ordering(u, &[])?.is_some())
}

/// True iff every vertex's earlier line neighbours are pairwise adjacent.
pub fn is_perfect_ordering(u: &MixedGraph, order: &[VertexId]) -> bool {
    if !is_permutation(order, u.n()) {
        return false;
    }
    let rank = ranks_of(order);
    order.iter().all(|&v| {
        let earlier: Vec<VertexId> = u
            .line_neighbours(v)
            .iter()
            .copied()
            .filter(|&w| rank[w] < rank[v])
            .collect();
        u.is_complete_set(&earlier)
    })
}

fn is_permutation(order: &[VertexId], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    order.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
}

/// Directs every line `a -- b` as `a -> b` when `a` precedes `b` in `order`.
pub fn orient_by_ordering(u: &MixedGraph, order: &[VertexId]) -> Result<MixedGraph, GraphError> {
    if !u.is_undirected() {
        return Err(GraphError::NotUndirected);
    }
    if !is_permutation(order, u.n()) {
        return Err(GraphError::NotPermutation);
    }
    let mut g = u.clone();
    orient_lines_by_rank(&mut g, &ranks_of(order), |_| true);
    Ok(g)
}

/// Orients, in place, each line of `g` whose endpoints both satisfy `keep`,
/// from lower to higher rank.
pub(crate) fn orient_lines_by_rank(g: &mut MixedGraph, rank: &[usize], keep: impl Fn(VertexId) -> bool) {
    let lines: Vec<_> = g.lines().filter(|&(a, b)| keep(a) && keep(b)).collect();
    for (a, b) in lines {
        let (tail, head) = if rank[a] < rank[b] { (a, b) } else { (b, a) };
        g.orient_line(tail, head).expect("line listed above");
    }
}
