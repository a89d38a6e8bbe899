//! The inclusion boundary neighbourhood of an essential graph.
//!
//! Neighbours are grouped by the vertex pair `{a, b}` whose adjacency they
//! change. For each pair one of three pseudo-operators applies, depending on
//! whether `E` holds an arrow, a line or nothing between `a` and `b`:
//!
//! * removing an arrow or a line yields one neighbour per complete subset `C`
//!   of the heads `h` of the v-structures `(h, {a, b})` that the removal
//!   creates in some but not all DAGs of the class;
//! * adding an edge yields one neighbour per set `O` of created v-structures
//!   for which the graph `G(O)` has a consistent extension that, minus the
//!   new edge, is still a member of the class of `E`.
//!
//! Every neighbour comes with a [`DeltaSpec`], a single local-score change
//! that turns the score of `E` into the score of the neighbour.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::chordal::{mcs_ordering, orient_lines_by_rank};
use crate::error::GraphError;
use crate::essential::{essentialize, extend_avoiding, remove_line_fast, EssentialGraph};
use crate::graph::{EdgeState, MixedGraph, VStructure, VertexId, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    RemoveArrow,
    RemoveLine,
    AddEdge,
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpKind::RemoveArrow => "remove-arrow",
            OpKind::RemoveLine => "remove-line",
            OpKind::AddEdge => "add-edge",
        })
    }
}

/// Which half of the boundary a neighbour lies in. Removals gain
/// independences (`N+`), additions lose them (`N-`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Plus,
    Minus,
}

/// The pair a pseudo-operator acts on. For [`OpKind::RemoveArrow`] `a -> b`
/// is the arrow; otherwise `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PairOp {
    pub a: VertexId,
    pub b: VertexId,
    pub kind: OpKind,
}

impl PairOp {
    pub fn side(&self) -> Side {
        match self.kind {
            OpKind::RemoveArrow | OpKind::RemoveLine => Side::Plus,
            OpKind::AddEdge => Side::Minus,
        }
    }

    /// The unordered pair, smaller id first.
    pub fn pair(&self) -> (VertexId, VertexId) {
        (self.a.min(self.b), self.a.max(self.b))
    }
}

/// Identifies one neighbour among those of its pair.
///
/// For removals `created` holds the v-structures `(h, {a, b})` that are
/// created by the removal in some but not all DAGs of the class and that the
/// neighbour has. For additions it is the full set of v-structures created
/// by the added edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Characterization {
    pub op: PairOp,
    pub created: BTreeSet<VStructure>,
}

/// Sort key of a [`Characterization`].
pub type OrderKey = ((VertexId, VertexId), OpKind, Vec<(VertexId, VertexId, VertexId)>);

impl Characterization {
    /// Key for deterministic ordering: pair, kind, then the sorted
    /// v-structures as `(head, tail, tail)` triples.
    pub fn order_key(&self) -> OrderKey {
        let o = self.created.iter().map(|v| (v.head, v.tails.0, v.tails.1)).collect();
        (self.op.pair(), self.op.kind, o)
    }
}

/// `score(neighbour) - score(E) = f(vertex, new_parents) - f(vertex, old_parents)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DeltaSpec {
    pub vertex: VertexId,
    pub old_parents: VertexSet,
    pub new_parents: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Construction {
    /// Removal with the given complete subset `C` of W-heads.
    Removal(Vec<VertexId>),
    /// Addition realised by a DAG `M` from which the neighbour is obtained.
    Extension(MixedGraph),
}

/// A neighbour that has been identified and scored but not yet built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub characterization: Characterization,
    pub delta: DeltaSpec,
    construction: Construction,
}

impl Candidate {
    /// Builds the neighbouring essential graph of `e`.
    pub fn build(&self, e: &EssentialGraph) -> Result<EssentialGraph, GraphError> {
        let PairOp { a, b, kind } = self.characterization.op;
        match (&self.construction, kind) {
            (Construction::Extension(m), _) => essentialize(m.clone()),
            (Construction::Removal(c), OpKind::RemoveArrow) => {
                let mut prefix = c.clone();
                prefix.push(b);
                warm_start_removal(e, a, b, c, &prefix)
            }
            (Construction::Removal(c), _) => {
                if !e.line_neighbours(a).iter().any(|h| e.line_neighbours(b).contains(h)) {
                    return remove_line_fast(e, a, b);
                }
                let mut prefix = c.clone();
                prefix.extend([a, b]);
                warm_start_removal(e, a, b, c, &prefix)
            }
        }
    }

    /// The DAG realising an addition, if this is one.
    pub fn extension(&self) -> Option<&MixedGraph> {
        match &self.construction {
            Construction::Extension(m) => Some(m),
            Construction::Removal(_) => None,
        }
    }

    /// The complete subset `C` behind a removal.
    pub fn complete_subset(&self) -> Option<&[VertexId]> {
        match &self.construction {
            Construction::Removal(c) => Some(c),
            Construction::Extension(_) => None,
        }
    }
}

/// Removes the edge, orients the chain component of `prefix` by a perfect
/// ordering starting with `prefix`, turns the arrows inside `c` back into
/// lines and runs the essential graph construction from there.
fn warm_start_removal(
    e: &EssentialGraph,
    a: VertexId,
    b: VertexId,
    c: &[VertexId],
    prefix: &[VertexId],
) -> Result<EssentialGraph, GraphError> {
    let comp = e.component_index();
    let tau = comp[*prefix.last().expect("prefix ends with an endpoint")];
    let order = mcs_ordering(&e.undirected_part(), prefix)?.ok_or(GraphError::NotChordal)?;
    let mut g = e.graph().clone();
    g.remove_edge(a, b);
    orient_lines_by_rank(&mut g, &order.ranks(), |v| comp[v] == tau);
    for &x in c {
        for &y in c {
            if g.is_arrow(x, y) {
                g.undirect_arrow(x, y)?;
            }
        }
    }
    essentialize(g)
}

/// A fully built neighbour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbour {
    pub characterization: Characterization,
    pub result: EssentialGraph,
    pub delta: DeltaSpec,
}

impl Neighbour {
    pub fn side(&self) -> Side {
        self.characterization.op.side()
    }
}

/// Cap on the number of complete subsets enumerated for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubsetCap {
    /// Unlimited when at most 12 vertices are involved, 4096 otherwise.
    #[default]
    Auto,
    Unlimited,
    AtMost(usize),
}

impl SubsetCap {
    fn limit(self, heads: usize) -> usize {
        match self {
            SubsetCap::Auto if heads <= 12 => usize::MAX,
            SubsetCap::Auto => 4096,
            SubsetCap::Unlimited => usize::MAX,
            SubsetCap::AtMost(k) => k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EnumerationLimits {
    pub max_subsets_per_pair: SubsetCap,
}

impl EnumerationLimits {
    pub fn unlimited() -> Self {
        EnumerationLimits {
            max_subsets_per_pair: SubsetCap::Unlimited,
        }
    }
}

/// Candidates for one pair; `truncated` is set when the subset cap cut the
/// enumeration short.
#[derive(Debug, Clone, Default)]
pub struct PairCandidates {
    pub candidates: Vec<Candidate>,
    pub truncated: bool,
}

/// Complete subsets of `vs` in `g`, the empty set first, each listed in the
/// order of `vs`. Only complete sets are ever visited: a set is extended by
/// later vertices adjacent to all its members.
pub fn complete_subsets(g: &MixedGraph, vs: &[VertexId], cap: SubsetCap) -> (Vec<Vec<VertexId>>, bool) {
    fn descend(
        g: &MixedGraph,
        current: &mut Vec<VertexId>,
        candidates: &[VertexId],
        out: &mut Vec<Vec<VertexId>>,
        limit: usize,
    ) -> bool {
        if out.len() >= limit {
            return true;
        }
        out.push(current.clone());
        for (i, &v) in candidates.iter().enumerate() {
            let rest: Vec<VertexId> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&w| g.is_adjacent(v, w))
                .collect();
            current.push(v);
            if descend(g, current, &rest, out, limit) {
                return true;
            }
            current.pop();
        }
        false
    }

    let mut out = Vec::new();
    let truncated = descend(g, &mut Vec::new(), vs, &mut out, cap.limit(vs.len()));
    (out, truncated)
}

/// Heads `h` with `a -> h` and `b -- h`, for the arrow `a -> b`.
pub fn w_set_arrow(e: &EssentialGraph, a: VertexId, b: VertexId) -> Result<VertexSet, GraphError> {
    if !e.is_arrow(a, b) {
        return Err(GraphError::NoArrow { a, b });
    }
    Ok(e.children(a).intersection(e.line_neighbours(b)).copied().collect())
}

/// Heads `h` with `a -- h` and `b -- h`, for the line `a -- b`.
pub fn w_set_line(e: &EssentialGraph, a: VertexId, b: VertexId) -> Result<VertexSet, GraphError> {
    if !e.is_line(a, b) {
        return Err(GraphError::NoLine { a, b });
    }
    Ok(e.line_neighbours(a)
        .intersection(e.line_neighbours(b))
        .copied()
        .collect())
}

fn removal_candidates(e: &EssentialGraph, op: PairOp, heads: &VertexSet, cap: SubsetCap) -> PairCandidates {
    let PairOp { a, b, .. } = op;
    let heads_vec: Vec<VertexId> = heads.iter().copied().collect();
    let (subsets, truncated) = complete_subsets(e, &heads_vec, cap);
    let candidates = subsets
        .into_iter()
        .map(|c| {
            let created = heads
                .iter()
                .filter(|h| !c.contains(h))
                .map(|&h| VStructure::new(h, a, b))
                .collect();
            let mut with_c: VertexSet = e.parents(b).clone();
            with_c.extend(c.iter().copied());
            let (old_parents, new_parents) = match op.kind {
                OpKind::RemoveArrow => {
                    let mut new = with_c.clone();
                    new.remove(&a);
                    (with_c, new)
                }
                _ => {
                    let mut old = with_c.clone();
                    old.insert(a);
                    (old, with_c)
                }
            };
            Candidate {
                characterization: Characterization { op, created },
                delta: DeltaSpec {
                    vertex: b,
                    old_parents,
                    new_parents,
                },
                construction: Construction::Removal(c),
            }
        })
        .collect();
    PairCandidates { candidates, truncated }
}

pub fn remove_arrow_candidates(
    e: &EssentialGraph,
    a: VertexId,
    b: VertexId,
    limits: EnumerationLimits,
) -> Result<PairCandidates, GraphError> {
    let heads = w_set_arrow(e, a, b)?;
    let op = PairOp {
        a,
        b,
        kind: OpKind::RemoveArrow,
    };
    Ok(removal_candidates(e, op, &heads, limits.max_subsets_per_pair))
}

pub fn remove_line_candidates(
    e: &EssentialGraph,
    a: VertexId,
    b: VertexId,
    limits: EnumerationLimits,
) -> Result<PairCandidates, GraphError> {
    let heads = w_set_line(e, a, b)?;
    let (a, b) = (a.min(b), a.max(b));
    let op = PairOp {
        a,
        b,
        kind: OpKind::RemoveLine,
    };
    Ok(removal_candidates(e, op, &heads, limits.max_subsets_per_pair))
}

/// The v-structures an added edge between `a` and `b` could create, split
/// by the local configuration they come from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PPartition {
    /// `(b, {a, t})` with `t -- b` and `t`, `a` non-adjacent.
    pub p1: BTreeSet<VStructure>,
    /// `(b, {a, t})` with `t -> b` and `t`, `a` non-adjacent.
    pub p2: BTreeSet<VStructure>,
    /// `(a, {b, t})` with `t -- a` and `t`, `b` non-adjacent.
    pub p3: BTreeSet<VStructure>,
    /// `(a, {b, t})` with `t -> a` and `t`, `b` non-adjacent.
    pub p4: BTreeSet<VStructure>,
}

pub fn p_partition(e: &EssentialGraph, a: VertexId, b: VertexId) -> Result<PPartition, GraphError> {
    e.check_vertex(a)?;
    e.check_vertex(b)?;
    if a == b {
        return Err(GraphError::SelfLoop(a));
    }
    if e.is_adjacent(a, b) {
        return Err(GraphError::EdgePresent { a, b });
    }
    let collect = |head: VertexId, other: VertexId, from: &VertexSet| -> BTreeSet<VStructure> {
        from.iter()
            .filter(|&&t| !e.is_adjacent(t, other))
            .map(|&t| VStructure::new(head, other, t))
            .collect()
    };
    Ok(PPartition {
        p1: collect(b, a, e.line_neighbours(b)),
        p2: collect(b, a, e.parents(b)),
        p3: collect(a, b, e.line_neighbours(a)),
        p4: collect(a, b, e.parents(a)),
    })
}

/// The graph `G(O)`: `E` plus the line `a -- b` when `O` is empty, else `E`
/// plus the arrow `tail -> head` with every line `t -- head`, `t` in
/// `pulled`, directed towards `head`.
fn graph_of(
    e: &EssentialGraph,
    tail: VertexId,
    head: VertexId,
    pulled: &[VertexId],
    empty: bool,
) -> Result<MixedGraph, GraphError> {
    let mut g = e.graph().clone();
    if empty {
        g.add_line(tail, head)?;
    } else {
        g.add_arrow(tail, head)?;
        for &t in pulled {
            g.orient_line(t, head)?;
        }
    }
    Ok(g)
}

pub fn add_edge_candidates(
    e: &EssentialGraph,
    a: VertexId,
    b: VertexId,
    limits: EnumerationLimits,
) -> Result<PairCandidates, GraphError> {
    let (a, b) = (a.min(b), a.max(b));
    let p = p_partition(e, a, b)?;
    let op = PairOp {
        a,
        b,
        kind: OpKind::AddEdge,
    };
    let mut out = PairCandidates::default();
    let mut tried: HashSet<BTreeSet<VStructure>> = HashSet::new();
    let mut results: HashSet<BTreeSet<VStructure>> = HashSet::new();

    // A DAG M whose removal of the new edge leaves a member of E's class:
    // no vertex may become a common child of a and b unless it already is
    // one in E.
    let forbid = |alive: &[bool], x: VertexId| {
        alive[a] && alive[b] && e.is_adjacent(x, a) && e.is_adjacent(x, b) && !(e.is_arrow(a, x) && e.is_arrow(b, x))
    };

    for (tail, head, forced, optional) in [(a, b, &p.p2, &p.p1), (b, a, &p.p4, &p.p3)] {
        let free: Vec<VertexId> = optional
            .iter()
            .map(|v| if v.tails.0 == tail { v.tails.1 } else { v.tails.0 })
            .collect();
        let (subsets, truncated) = complete_subsets(e, &free, limits.max_subsets_per_pair);
        out.truncated |= truncated;
        for f in subsets {
            let created: BTreeSet<VStructure> = forced
                .iter()
                .copied()
                .chain(f.iter().map(|&t| VStructure::new(head, tail, t)))
                .collect();
            if !tried.insert(created.clone()) {
                continue;
            }
            let g = graph_of(e, tail, head, &f, created.is_empty())?;
            // An extension of G(O) alone is not enough: it may only exist by
            // making some x a new common child of a and b.
            let Some(m) = extend_avoiding(&g, forbid) else { continue };
            if !results.insert(m.v_structures()) {
                continue;
            }
            let (x, from) = if m.is_arrow(a, b) { (b, a) } else { (a, b) };
            let new_parents = m.parents(x).clone();
            let mut old_parents = new_parents.clone();
            old_parents.remove(&from);
            out.candidates.push(Candidate {
                characterization: Characterization { op, created },
                delta: DeltaSpec {
                    vertex: x,
                    old_parents,
                    new_parents,
                },
                construction: Construction::Extension(m),
            });
        }
    }
    Ok(out)
}

/// Candidates of the pseudo-operator that applies to `{a, b}`.
pub fn pair_candidates(
    e: &EssentialGraph,
    a: VertexId,
    b: VertexId,
    limits: EnumerationLimits,
) -> Result<PairCandidates, GraphError> {
    match e.edge_state(a, b) {
        EdgeState::Out => remove_arrow_candidates(e, a, b, limits),
        EdgeState::In => remove_arrow_candidates(e, b, a, limits),
        EdgeState::Line => remove_line_candidates(e, a, b, limits),
        EdgeState::None => add_edge_candidates(e, a, b, limits),
    }
}

fn build_all(e: &EssentialGraph, pc: PairCandidates) -> Result<Vec<Neighbour>, GraphError> {
    pc.candidates
        .into_iter()
        .map(|c| {
            let result = c.build(e)?;
            Ok(Neighbour {
                characterization: c.characterization,
                result,
                delta: c.delta,
            })
        })
        .collect()
}

pub fn remove_arrow_neighbours(e: &EssentialGraph, a: VertexId, b: VertexId) -> Result<Vec<Neighbour>, GraphError> {
    build_all(e, remove_arrow_candidates(e, a, b, EnumerationLimits::unlimited())?)
}

pub fn remove_line_neighbours(e: &EssentialGraph, a: VertexId, b: VertexId) -> Result<Vec<Neighbour>, GraphError> {
    build_all(e, remove_line_candidates(e, a, b, EnumerationLimits::unlimited())?)
}

pub fn add_edge_neighbours(e: &EssentialGraph, a: VertexId, b: VertexId) -> Result<Vec<Neighbour>, GraphError> {
    build_all(e, add_edge_candidates(e, a, b, EnumerationLimits::unlimited())?)
}

/// Every candidate over all unordered pairs, in pair order.
#[derive(Debug, Clone, Default)]
pub struct CandidateSet {
    pub candidates: Vec<Candidate>,
    /// Set when some pair's enumeration was truncated.
    pub partial: bool,
}

pub fn all_candidates(e: &EssentialGraph, limits: EnumerationLimits) -> Result<CandidateSet, GraphError> {
    let n = e.n();
    let pairs: Vec<(VertexId, VertexId)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let per_pair: Vec<PairCandidates> = pairs
        .par_iter()
        .map(|&(a, b)| pair_candidates(e, a, b, limits))
        .collect::<Result<_, _>>()?;
    let mut set = CandidateSet::default();
    for pc in per_pair {
        set.partial |= pc.truncated;
        set.candidates.extend(pc.candidates);
    }
    Ok(set)
}

/// `N(E)` with its `N+`/`N-` labels carried by each neighbour's operator.
#[derive(Debug, Clone, Default)]
pub struct Neighbourhood {
    pub neighbours: Vec<Neighbour>,
    pub partial: bool,
}

impl Neighbourhood {
    pub fn side(&self, side: Side) -> impl Iterator<Item = &Neighbour> {
        self.neighbours.iter().filter(move |nb| nb.side() == side)
    }
}

pub fn inclusion_boundary(e: &EssentialGraph, limits: EnumerationLimits) -> Result<Neighbourhood, GraphError> {
    let set = all_candidates(e, limits)?;
    let neighbours = set
        .candidates
        .into_par_iter()
        .map(|c| {
            let result = c.build(e)?;
            Ok(Neighbour {
                characterization: c.characterization,
                result,
                delta: c.delta,
            })
        })
        .collect::<Result<Vec<_>, GraphError>>()?;
    Ok(Neighbourhood {
        neighbours,
        partial: set.partial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ess(n: usize, arrows: &[(usize, usize)], lines: &[(usize, usize)]) -> EssentialGraph {
        EssentialGraph::new(MixedGraph::from_edges(n, arrows, lines).unwrap()).unwrap()
    }

    fn results(nbs: &[Neighbour]) -> BTreeSet<MixedGraph> {
        nbs.iter().map(|nb| nb.result.graph().clone()).collect()
    }

    #[test]
    fn w_sets() {
        // 0 -> 2 <- 1
        let collider = ess(3, &[(0, 2), (1, 2)], &[]);
        assert!(w_set_arrow(&collider, 0, 2).unwrap().is_empty());

        // 3 -> 0 <- 4 protects 0 -> 1 and 0 -> 2; 1 -- 2
        let g = ess(5, &[(3, 0), (4, 0), (0, 1), (0, 2)], &[(1, 2)]);
        assert_eq!(w_set_arrow(&g, 0, 1).unwrap(), VertexSet::from([2]));
        assert!(w_set_arrow(&g, 1, 0).is_err());

        assert!(w_set_line(&ess(2, &[], &[(0, 1)]), 0, 1).unwrap().is_empty());
        assert_eq!(
            w_set_line(&EssentialGraph::complete(3), 0, 1).unwrap(),
            VertexSet::from([2])
        );
        assert!(w_set_line(&ess(3, &[], &[(0, 1), (0, 2)]), 0, 1).unwrap().is_empty());
    }

    #[test]
    fn removing_a_collider_arm() {
        let collider = ess(3, &[(0, 2), (1, 2)], &[]);
        let nbs = remove_arrow_neighbours(&collider, 0, 2).unwrap();
        assert_eq!(nbs.len(), 1);
        assert_eq!(
            nbs[0].result.graph(),
            &MixedGraph::from_edges(3, &[], &[(1, 2)]).unwrap()
        );
        assert_eq!(nbs[0].delta.vertex, 2);
        assert_eq!(nbs[0].delta.old_parents, VertexSet::from([0, 1]));
        assert_eq!(nbs[0].delta.new_parents, VertexSet::from([1]));
    }

    #[test]
    fn line_removal_examples() {
        let ab = ess(2, &[], &[(0, 1)]);
        let nbs = remove_line_neighbours(&ab, 0, 1).unwrap();
        assert_eq!(results(&nbs), BTreeSet::from([MixedGraph::new(2)]));

        let tri = EssentialGraph::complete(3);
        let nbs = remove_line_neighbours(&tri, 0, 1).unwrap();
        assert_eq!(
            results(&nbs),
            BTreeSet::from([
                MixedGraph::from_edges(3, &[], &[(0, 2), (1, 2)]).unwrap(),
                MixedGraph::from_arrows(3, &[(0, 2), (1, 2)]).unwrap(),
            ])
        );

        let path = ess(3, &[], &[(0, 1), (1, 2)]);
        let nbs = remove_line_neighbours(&path, 1, 2).unwrap();
        assert_eq!(
            results(&nbs),
            BTreeSet::from([MixedGraph::from_edges(3, &[], &[(0, 1)]).unwrap()])
        );
    }

    #[test]
    fn p_partition_examples() {
        let empty = EssentialGraph::empty(3);
        assert_eq!(p_partition(&empty, 0, 1).unwrap(), PPartition::default());

        // an arrow into b needs protection, so use the collider 2 -> 1 <- 3
        let g = ess(4, &[(2, 1), (3, 1)], &[]);
        let p = p_partition(&g, 0, 1).unwrap();
        assert_eq!(
            p.p2,
            BTreeSet::from([VStructure::new(1, 0, 2), VStructure::new(1, 0, 3)])
        );
        assert!(p.p1.is_empty() && p.p3.is_empty() && p.p4.is_empty());

        let line = ess(3, &[], &[(2, 1)]);
        let p = p_partition(&line, 0, 1).unwrap();
        assert_eq!(p.p1, BTreeSet::from([VStructure::new(1, 0, 2)]));
        assert!(p.p2.is_empty() && p.p3.is_empty() && p.p4.is_empty());

        assert_eq!(p_partition(&line, 1, 2), Err(GraphError::EdgePresent { a: 1, b: 2 }));
    }

    #[test]
    fn additions_on_small_graphs() {
        let nbs = add_edge_neighbours(&EssentialGraph::empty(2), 0, 1).unwrap();
        assert_eq!(
            results(&nbs),
            BTreeSet::from([MixedGraph::from_edges(2, &[], &[(0, 1)]).unwrap()])
        );

        // a and b with common child c: the only neighbour shields the collider
        let collider = ess(3, &[(0, 2), (1, 2)], &[]);
        let nbs = add_edge_neighbours(&collider, 0, 1).unwrap();
        assert_eq!(results(&nbs), BTreeSet::from([MixedGraph::complete_undirected(3)]));

        // path 0 -- 2 -- 1: every DAG on a triangle is complete
        let path = ess(3, &[], &[(0, 2), (2, 1)]);
        let nbs = add_edge_neighbours(&path, 0, 1).unwrap();
        assert_eq!(results(&nbs), BTreeSet::from([MixedGraph::complete_undirected(3)]));

        // path 0 -- 1 -- 2 plus an isolated 3: joining 3 to 0 either extends
        // the tree or makes 0 a collider 3 -> 0 <- 1
        let path = ess(4, &[], &[(0, 1), (1, 2)]);
        let nbs = add_edge_neighbours(&path, 0, 3).unwrap();
        assert_eq!(
            results(&nbs),
            BTreeSet::from([
                MixedGraph::from_edges(4, &[], &[(0, 1), (1, 2), (0, 3)]).unwrap(),
                MixedGraph::from_edges(4, &[(3, 0), (1, 0)], &[(1, 2)]).unwrap(),
            ])
        );
    }

    #[test]
    fn boundary_of_empty_graph() {
        for n in 1..=5 {
            let nb = inclusion_boundary(&EssentialGraph::empty(n), EnumerationLimits::default()).unwrap();
            assert_eq!(nb.neighbours.len(), n * (n - 1) / 2);
            assert!(!nb.partial);
            for x in &nb.neighbours {
                assert_eq!(x.result.num_lines(), 1);
                assert_eq!(x.side(), Side::Minus);
            }
        }
    }

    #[test]
    fn complete_subset_enumeration() {
        // 0 -- 1, 2 isolated
        let g = MixedGraph::from_edges(3, &[], &[(0, 1)]).unwrap();
        let (s, t) = complete_subsets(&g, &[0, 1, 2], SubsetCap::Unlimited);
        assert!(!t);
        assert_eq!(s, vec![vec![], vec![0], vec![0, 1], vec![1], vec![2]]);
        let (s, t) = complete_subsets(&g, &[0, 1, 2], SubsetCap::AtMost(3));
        assert!(t);
        assert_eq!(s.len(), 3);
        let (_, t) = complete_subsets(&g, &[0, 1, 2], SubsetCap::AtMost(5));
        assert!(!t);
    }

    #[test]
    fn truncation_is_flagged() {
        let e = EssentialGraph::complete(5);
        let limits = EnumerationLimits {
            max_subsets_per_pair: SubsetCap::AtMost(2),
        };
        let nb = inclusion_boundary(&e, limits).unwrap();
        assert!(nb.partial);
        let full = inclusion_boundary(&e, EnumerationLimits::default()).unwrap();
        assert!(!full.partial);
        // each line of K5 sits in 3 triangles: 2^3 complete subsets
        assert_eq!(full.neighbours.len(), 10 * 8);
    }
}
