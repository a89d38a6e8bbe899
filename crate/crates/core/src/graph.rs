//! Mixed graphs with lines and arrows, and the structural predicates the
//! rest of the crate is built on.
//!
//! A graph is stored as three adjacency tables per vertex (parents, children
//! and line neighbours). An ordered pair `(a, b)` is an edge of the graph when
//! `a -> b` or `a -- b`, so a line is the presence of both `(a, b)` and
//! `(b, a)`.

use std::collections::{BTreeSet, VecDeque};

use crate::error::GraphError;

/// Index of a vertex in a graph's vertex table.
pub type VertexId = usize;

/// A set of vertices, kept sorted.
pub type VertexSet = BTreeSet<VertexId>;

/// The kind of connection between two vertices, seen from the first one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeState {
    None,
    /// `a -> b`
    Out,
    /// `a <- b`
    In,
    /// `a -- b`
    Line,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedGraph {
    parents: Vec<VertexSet>,
    children: Vec<VertexSet>,
    lines: Vec<VertexSet>,
}

/// A v-structure `t1 -> head <- t2` with `t1`, `t2` non-adjacent.
///
/// Tails are stored sorted, so each v-structure has a single representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VStructure {
    pub head: VertexId,
    pub tails: (VertexId, VertexId),
}

impl VStructure {
    pub fn new(head: VertexId, t1: VertexId, t2: VertexId) -> Self {
        debug_assert!(t1 != t2 && head != t1 && head != t2);
        let tails = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        VStructure { head, tails }
    }

    pub fn has_tails(&self, a: VertexId, b: VertexId) -> bool {
        self.tails == if a < b { (a, b) } else { (b, a) }
    }
}

impl MixedGraph {
    /// Graph on `n` vertices with no edges.
    pub fn new(n: usize) -> Self {
        MixedGraph {
            parents: vec![VertexSet::new(); n],
            children: vec![VertexSet::new(); n],
            lines: vec![VertexSet::new(); n],
        }
    }

    /// Undirected complete graph on `n` vertices.
    pub fn complete_undirected(n: usize) -> Self {
        let mut g = MixedGraph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                g.lines[a].insert(b);
                g.lines[b].insert(a);
            }
        }
        g
    }

    pub fn from_arrows(n: usize, arrows: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut g = MixedGraph::new(n);
        for &(a, b) in arrows {
            g.add_arrow(a, b)?;
        }
        Ok(g)
    }

    pub fn from_edges(
        n: usize,
        arrows: &[(VertexId, VertexId)],
        lines: &[(VertexId, VertexId)],
    ) -> Result<Self, GraphError> {
        let mut g = MixedGraph::from_arrows(n, arrows)?;
        for &(a, b) in lines {
            g.add_line(a, b)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.parents.len()
    }

    fn check_pair(&self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        Ok(())
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v >= self.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() });
        }
        Ok(())
    }

    pub fn add_arrow(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        self.check_pair(a, b)?;
        if self.is_adjacent(a, b) {
            return Err(GraphError::EdgePresent { a, b });
        }
        self.children[a].insert(b);
        self.parents[b].insert(a);
        Ok(())
    }

    pub fn add_line(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        self.check_pair(a, b)?;
        if self.is_adjacent(a, b) {
            return Err(GraphError::EdgePresent { a, b });
        }
        self.lines[a].insert(b);
        self.lines[b].insert(a);
        Ok(())
    }

    /// Removes whatever edge joins `a` and `b`. Returns whether one existed.
    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) -> bool {
        if a >= self.n() || b >= self.n() {
            return false;
        }
        let removed = self.lines[a].remove(&b) | self.children[a].remove(&b) | self.children[b].remove(&a);
        self.lines[b].remove(&a);
        self.parents[b].remove(&a);
        self.parents[a].remove(&b);
        removed
    }

    /// Replaces the line `a -- b` by the arrow `a -> b`.
    pub fn orient_line(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        if !self.is_line(a, b) {
            return Err(GraphError::NoLine { a, b });
        }
        self.lines[a].remove(&b);
        self.lines[b].remove(&a);
        self.children[a].insert(b);
        self.parents[b].insert(a);
        Ok(())
    }

    /// Replaces the arrow `a -> b` by the line `a -- b`.
    pub fn undirect_arrow(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        if !self.is_arrow(a, b) {
            return Err(GraphError::NoArrow { a, b });
        }
        self.children[a].remove(&b);
        self.parents[b].remove(&a);
        self.lines[a].insert(b);
        self.lines[b].insert(a);
        Ok(())
    }

    pub fn is_line(&self, a: VertexId, b: VertexId) -> bool {
        a < self.n() && self.lines[a].contains(&b)
    }

    pub fn is_arrow(&self, a: VertexId, b: VertexId) -> bool {
        a < self.n() && self.children[a].contains(&b)
    }

    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.is_line(a, b) || self.is_arrow(a, b) || self.is_arrow(b, a)
    }

    pub fn edge_state(&self, a: VertexId, b: VertexId) -> EdgeState {
        if self.is_line(a, b) {
            EdgeState::Line
        } else if self.is_arrow(a, b) {
            EdgeState::Out
        } else if self.is_arrow(b, a) {
            EdgeState::In
        } else {
            EdgeState::None
        }
    }

    /// `pa(x)`: vertices `y` with `y -> x`.
    pub fn parents(&self, x: VertexId) -> &VertexSet {
        &self.parents[x]
    }

    pub fn children(&self, x: VertexId) -> &VertexSet {
        &self.children[x]
    }

    /// Vertices joined to `x` by a line.
    pub fn line_neighbours(&self, x: VertexId) -> &VertexSet {
        &self.lines[x]
    }

    /// Every vertex adjacent to `x`, in ascending order.
    pub fn adjacent(&self, x: VertexId) -> VertexSet {
        self.parents[x]
            .iter()
            .chain(&self.children[x])
            .chain(&self.lines[x])
            .copied()
            .collect()
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.parents[x].len() + self.children[x].len() + self.lines[x].len()
    }

    /// All arrows `(tail, head)` in ascending order of tail then head.
    pub fn arrows(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(a, ch)| ch.iter().map(move |&b| (a, b)))
    }

    /// All lines `(a, b)` with `a < b`, in ascending order.
    pub fn lines(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.lines
            .iter()
            .enumerate()
            .flat_map(|(a, ne)| ne.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// The edge set as ordered pairs, a line contributing both orders.
    pub fn edge_pairs(&self) -> BTreeSet<(VertexId, VertexId)> {
        let mut pairs: BTreeSet<_> = self.arrows().collect();
        for (a, b) in self.lines() {
            pairs.insert((a, b));
            pairs.insert((b, a));
        }
        pairs
    }

    pub fn num_arrows(&self) -> usize {
        self.children.iter().map(BTreeSet::len).sum()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn num_edges(&self) -> usize {
        self.num_arrows() + self.num_lines()
    }

    pub fn is_undirected(&self) -> bool {
        self.children.iter().all(BTreeSet::is_empty)
    }

    pub fn is_directed(&self) -> bool {
        self.lines.iter().all(BTreeSet::is_empty)
    }

    pub fn is_dag(&self) -> bool {
        self.is_directed() && self.is_chain_graph()
    }

    /// Whether every two distinct vertices of `vs` are adjacent.
    pub fn is_complete_set<'a>(&self, vs: impl IntoIterator<Item = &'a VertexId>) -> bool {
        let vs: Vec<VertexId> = vs.into_iter().copied().collect();
        vs.iter()
            .enumerate()
            .all(|(i, &x)| vs[i + 1..].iter().all(|&y| self.is_adjacent(x, y)))
    }

    /// Undirected graph with `a -- b` wherever `a` and `b` are adjacent here.
    pub fn skeleton(&self) -> MixedGraph {
        let mut s = MixedGraph::new(self.n());
        for x in 0..self.n() {
            s.lines[x] = self.adjacent(x);
        }
        s
    }

    /// The graph with every arrow dropped.
    pub fn undirected_part(&self) -> MixedGraph {
        MixedGraph {
            parents: vec![VertexSet::new(); self.n()],
            children: vec![VertexSet::new(); self.n()],
            lines: self.lines.clone(),
        }
    }

    pub fn v_structures(&self) -> BTreeSet<VStructure> {
        let mut out = BTreeSet::new();
        for h in 0..self.n() {
            let pa: Vec<_> = self.parents[h].iter().copied().collect();
            for (i, &t1) in pa.iter().enumerate() {
                for &t2 in &pa[i + 1..] {
                    if !self.is_adjacent(t1, t2) {
                        out.insert(VStructure::new(h, t1, t2));
                    }
                }
            }
        }
        out
    }

    /// Classes of the "joined by an undirected path" relation, each sorted,
    /// listed by smallest member.
    pub fn chain_components(&self) -> Vec<Vec<VertexId>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.lines[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Component index of every vertex, consistent with [`chain_components`](Self::chain_components).
    pub fn component_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.n()];
        for (i, comp) in self.chain_components().iter().enumerate() {
            for &v in comp {
                idx[v] = i;
            }
        }
        idx
    }

    /// True iff no cycle of the graph takes an arrow step.
    ///
    /// Chain components are collapsed to single nodes and the quotient is
    /// topologically sorted; the sort fails exactly when a directed cycle
    /// exists (an arrow inside one component counts as a self-loop of the
    /// quotient).
    pub fn is_chain_graph(&self) -> bool {
        let comp = self.component_index();
        let k = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
        for (a, b) in self.arrows() {
            if comp[a] == comp[b] {
                return false;
            }
            succ[comp[a]].insert(comp[b]);
        }
        let mut indeg = vec![0usize; k];
        for s in &succ {
            for &t in s {
                indeg[t] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..k).filter(|&c| indeg[c] == 0).collect();
        let mut visited = 0;
        while let Some(c) = stack.pop() {
            visited += 1;
            for &t in &succ[c] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
        visited == k
    }

    /// A topological order of a DAG, smallest available vertex first.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        if !self.is_directed() {
            return None;
        }
        let mut indeg: Vec<usize> = self.parents.iter().map(BTreeSet::len).collect();
        let mut ready: BTreeSet<VertexId> = (0..self.n()).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n());
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &c in &self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        (order.len() == self.n()).then_some(order)
    }

    /// Whether `to` can be reached from `from` along arrows only.
    pub fn has_directed_path(&self, from: VertexId, to: VertexId) -> bool {
        let mut seen = vec![false; self.n()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            for &c in &self.children[x] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    /// `pa(a) != pa(b) \ {a}` for the arrow `a -> b`.
    pub fn is_protected(&self, a: VertexId, b: VertexId) -> Result<bool, GraphError> {
        if !self.is_arrow(a, b) {
            return Err(GraphError::NoArrow { a, b });
        }
        let pa_b: VertexSet = self.parents[b].iter().copied().filter(|&v| v != a).collect();
        Ok(self.parents[a] != pa_b)
    }

    /// Whether the arrow `a -> b` is strongly protected, i.e. the graph
    /// induces one of the four configurations
    ///
    /// * `c -> a -> b` with `c`, `b` non-adjacent,
    /// * `a -> b <- c` with `a`, `c` non-adjacent,
    /// * `a -> c -> b` together with `a -> b`,
    /// * `c -- a -- d`, `c -> b <- d`, `a -> b` with `c`, `d` non-adjacent.
    pub fn is_strongly_protected(&self, a: VertexId, b: VertexId) -> Result<bool, GraphError> {
        if !self.is_arrow(a, b) {
            return Err(GraphError::NoArrow { a, b });
        }
        Ok(self.strong_protection(a, b).is_some())
    }

    /// The first configuration (0..=3 for the four cases above) that
    /// strongly protects `a -> b`, if any. Assumes the arrow is present.
    pub(crate) fn strong_protection(&self, a: VertexId, b: VertexId) -> Option<usize> {
        if self.parents[a].iter().any(|&c| !self.is_adjacent(c, b)) {
            return Some(0);
        }
        if self.parents[b].iter().any(|&c| c != a && !self.is_adjacent(c, a)) {
            return Some(1);
        }
        if self.children[a].iter().any(|&c| self.is_arrow(c, b)) {
            return Some(2);
        }
        let both: Vec<_> = self.lines[a].iter().copied().filter(|&c| self.is_arrow(c, b)).collect();
        for (i, &c) in both.iter().enumerate() {
            if both[i + 1..].iter().any(|&d| !self.is_adjacent(c, d)) {
                return Some(3);
            }
        }
        None
    }

    /// Subgraph induced by `vs`, on the same vertex table: edges with both
    /// endpoints in `vs` are kept with their kind, vertices outside `vs` are
    /// left isolated.
    pub fn induced_subgraph(&self, vs: &VertexSet) -> Result<MixedGraph, GraphError> {
        for &v in vs {
            self.check_vertex(v)?;
        }
        let keep = |set: &VertexSet| -> VertexSet { set.intersection(vs).copied().collect() };
        let mut g = MixedGraph::new(self.n());
        for &v in vs {
            g.parents[v] = keep(&self.parents[v]);
            g.children[v] = keep(&self.children[v]);
            g.lines[v] = keep(&self.lines[v]);
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;
    const D: usize = 3;

    #[test]
    fn skeleton_examples() {
        assert_eq!(MixedGraph::new(3).skeleton(), MixedGraph::new(3));

        let chain = MixedGraph::from_arrows(3, &[(A, B), (B, C)]).unwrap();
        let path = MixedGraph::from_edges(3, &[], &[(A, B), (B, C)]).unwrap();
        assert_eq!(chain.skeleton(), path);

        let g = MixedGraph::from_edges(3, &[(A, C), (B, C)], &[(A, B)]).unwrap();
        assert_eq!(g.skeleton(), MixedGraph::complete_undirected(3));
        assert_eq!(g.skeleton().skeleton(), g.skeleton());
    }

    #[test]
    fn v_structure_examples() {
        let collider = MixedGraph::from_arrows(3, &[(A, C), (B, C)]).unwrap();
        assert_eq!(
            collider.v_structures().into_iter().collect::<Vec<_>>(),
            vec![VStructure::new(C, A, B)]
        );

        let shielded = MixedGraph::from_edges(3, &[(A, C), (B, C)], &[(A, B)]).unwrap();
        assert!(shielded.v_structures().is_empty());

        // p1, p2, p3 -> h: one v-structure per unordered tail pair
        let star = MixedGraph::from_arrows(4, &[(1, 0), (2, 0), (3, 0)]).unwrap();
        let vs = star.v_structures();
        assert_eq!(vs.len(), 3);
        assert!(vs.contains(&VStructure::new(0, 1, 2)));
        assert!(vs.contains(&VStructure::new(0, 1, 3)));
        assert!(vs.contains(&VStructure::new(0, 2, 3)));
    }

    #[test]
    fn chain_component_examples() {
        let path = MixedGraph::from_edges(3, &[], &[(A, B), (B, C)]).unwrap();
        assert_eq!(path.chain_components(), vec![vec![A, B, C]]);

        let arrow = MixedGraph::from_arrows(3, &[(A, B)]).unwrap();
        assert_eq!(arrow.chain_components(), vec![vec![A], vec![B], vec![C]]);

        let mixed = MixedGraph::from_edges(4, &[(B, C)], &[(A, B), (C, D)]).unwrap();
        assert_eq!(mixed.chain_components(), vec![vec![A, B], vec![C, D]]);
    }

    #[test]
    fn chain_graph_examples() {
        let dag = MixedGraph::from_arrows(4, &[(A, B), (A, C), (B, D), (C, D)]).unwrap();
        assert!(dag.is_chain_graph());
        assert!(dag.is_dag());

        // a -> b -- c -- a
        let cyclic = MixedGraph::from_edges(3, &[(A, B)], &[(B, C), (C, A)]).unwrap();
        assert!(!cyclic.is_chain_graph());

        assert!(MixedGraph::complete_undirected(3).is_chain_graph());

        let cycle = MixedGraph::from_arrows(3, &[(A, B), (B, C), (C, A)]).unwrap();
        assert!(!cycle.is_chain_graph());
        assert!(cycle.topological_order().is_none());
    }

    #[test]
    fn protection_examples() {
        let single = MixedGraph::from_arrows(2, &[(A, B)]).unwrap();
        assert!(!single.is_protected(A, B).unwrap());
        assert!(!single.is_strongly_protected(A, B).unwrap());

        // c -> a -> b
        let chain = MixedGraph::from_arrows(3, &[(C, A), (A, B)]).unwrap();
        assert!(chain.is_protected(A, B).unwrap());
        assert!(chain.is_strongly_protected(A, B).unwrap());

        let collider = MixedGraph::from_arrows(3, &[(A, B), (C, B)]).unwrap();
        assert!(collider.is_protected(A, B).unwrap());

        // a -> b inside an otherwise undirected triangle
        let tri = MixedGraph::from_edges(3, &[(A, B)], &[(A, C), (B, C)]).unwrap();
        assert!(!tri.is_strongly_protected(A, B).unwrap());

        assert_eq!(single.is_protected(B, A), Err(GraphError::NoArrow { a: B, b: A }));
        assert!(single.is_strongly_protected(B, A).is_err());
    }

    #[test]
    fn fourth_configuration_protects() {
        // c -- a -- d, c -> b <- d, a -> b, c and d non-adjacent
        let g = MixedGraph::from_edges(4, &[(A, B), (C, B), (D, B)], &[(C, A), (A, D)]).unwrap();
        assert_eq!(g.strong_protection(A, B), Some(3));
        // adding c -- d removes the witness
        let mut h = g.clone();
        h.add_line(C, D).unwrap();
        assert_eq!(h.strong_protection(A, B), None);
    }

    #[test]
    fn induced_subgraph_examples() {
        let g = MixedGraph::from_edges(3, &[(A, B)], &[(B, C)]).unwrap();
        let all: VertexSet = (0..3).collect();
        assert_eq!(g.induced_subgraph(&all).unwrap(), g);
        assert_eq!(
            g.induced_subgraph(&[A, B].into()).unwrap(),
            MixedGraph::from_arrows(3, &[(A, B)]).unwrap()
        );
        assert_eq!(g.induced_subgraph(&[A, C].into()).unwrap(), MixedGraph::new(3));
        assert!(g.induced_subgraph(&[7].into()).is_err());
    }

    #[test]
    fn edge_queries_are_consistent() {
        let mut g = MixedGraph::new(3);
        assert_eq!(g.add_arrow(A, A), Err(GraphError::SelfLoop(A)));
        g.add_arrow(A, B).unwrap();
        g.add_line(B, C).unwrap();
        assert!(g.add_line(B, A).is_err());
        assert_eq!(g.edge_state(A, B), EdgeState::Out);
        assert_eq!(g.edge_state(B, A), EdgeState::In);
        assert_eq!(g.edge_state(C, B), EdgeState::Line);
        assert_eq!(g.edge_state(A, C), EdgeState::None);
        assert_eq!(
            g.edge_pairs().into_iter().collect::<Vec<_>>(),
            vec![(A, B), (B, C), (C, B)]
        );
        assert!(g.remove_edge(C, B));
        assert!(!g.remove_edge(C, B));
        g.undirect_arrow(A, B).unwrap();
        assert!(g.is_line(B, A));
        g.orient_line(B, A).unwrap();
        assert!(g.is_arrow(B, A));
    }
}
