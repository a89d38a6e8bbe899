//! Essential graphs: validation, construction from a DAG, consistent
//! extensions and enumeration of the DAGs they represent.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Deref;

use crate::chordal;
use crate::error::GraphError;
use crate::graph::{MixedGraph, VertexId, VertexSet};

/// The four conditions a graph must meet to be an essential graph, in the
/// order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    ChainGraph,
    ChordalComponents,
    NoArrowLine,
    StronglyProtected,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::ChainGraph => "chain graph",
            Condition::ChordalComponents => "chordal chain components",
            Condition::NoArrowLine => "no induced arrow-line",
            Condition::StronglyProtected => "strongly protected arrows",
        })
    }
}

/// The first essential-graph condition a graph breaks, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A cycle `cycle[0], cycle[1], ..., cycle[0]` whose first step is an arrow.
    DirectedCycle {
        cycle: Vec<VertexId>,
    },
    NonChordalComponent {
        component: Vec<VertexId>,
    },
    /// The induced subgraph `a -> b -- c`.
    ArrowLine {
        a: VertexId,
        b: VertexId,
        c: VertexId,
    },
    UnprotectedArrow {
        a: VertexId,
        b: VertexId,
    },
}

impl Violation {
    pub fn condition(&self) -> Condition {
        match self {
            Violation::DirectedCycle { .. } => Condition::ChainGraph,
            Violation::NonChordalComponent { .. } => Condition::ChordalComponents,
            Violation::ArrowLine { .. } => Condition::NoArrowLine,
            Violation::UnprotectedArrow { .. } => Condition::StronglyProtected,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DirectedCycle { cycle } => write!(f, "directed cycle through {cycle:?}"),
            Violation::NonChordalComponent { component } => {
                write!(f, "chain component {component:?} is not chordal")
            }
            Violation::ArrowLine { a, b, c } => write!(f, "induces {a} -> {b} -- {c}"),
            Violation::UnprotectedArrow { a, b } => {
                write!(f, "arrow {a} -> {b} is not strongly protected")
            }
        }
    }
}

/// Checks the four essential-graph conditions in order and reports the
/// first one that fails.
pub fn validate_essential(g: &MixedGraph) -> Result<(), Violation> {
    if !g.is_chain_graph() {
        return Err(Violation::DirectedCycle {
            cycle: directed_cycle(g).expect("a non-chain graph has a directed cycle"),
        });
    }
    let lines = g.undirected_part();
    for comp in g.chain_components() {
        if comp.len() < 4 {
            continue;
        }
        let sub = lines
            .induced_subgraph(&comp.iter().copied().collect())
            .expect("vertices in range");
        if !chordal::is_chordal(&sub).expect("undirected") {
            return Err(Violation::NonChordalComponent { component: comp });
        }
    }
    for (a, b) in g.arrows() {
        if let Some(&c) = g.line_neighbours(b).iter().find(|&&c| !g.is_adjacent(a, c)) {
            return Err(Violation::ArrowLine { a, b, c });
        }
    }
    for (a, b) in g.arrows() {
        if g.strong_protection(a, b).is_none() {
            return Err(Violation::UnprotectedArrow { a, b });
        }
    }
    Ok(())
}

pub fn is_essential(g: &MixedGraph) -> bool {
    validate_essential(g).is_ok()
}

/// Finds an arrow `a -> b` and a path back from `b` to `a`.
fn directed_cycle(g: &MixedGraph) -> Option<Vec<VertexId>> {
    for (a, b) in g.arrows() {
        let mut prev = vec![usize::MAX; g.n()];
        prev[b] = b;
        let mut queue = VecDeque::from([b]);
        while let Some(x) = queue.pop_front() {
            if x == a {
                let mut path = vec![a];
                let mut cur = a;
                while cur != b {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                // path runs b .. a; the cycle starts with the arrow a -> b
                let mut cycle = vec![a];
                cycle.extend(path.iter().copied().take(path.len() - 1));
                cycle.push(a);
                return Some(cycle);
            }
            for y in g.children(x).iter().chain(g.line_neighbours(x)) {
                if prev[*y] == usize::MAX {
                    prev[*y] = x;
                    queue.push_back(*y);
                }
            }
        }
    }
    None
}

/// A graph known to satisfy the essential-graph conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EssentialGraph(MixedGraph);

impl EssentialGraph {
    pub fn new(g: MixedGraph) -> Result<Self, Violation> {
        validate_essential(&g)?;
        Ok(EssentialGraph(g))
    }

    pub(crate) fn new_unchecked(g: MixedGraph) -> Self {
        debug_assert_eq!(validate_essential(&g), Ok(()));
        EssentialGraph(g)
    }

    /// The class of the empty DAG.
    pub fn empty(n: usize) -> Self {
        EssentialGraph(MixedGraph::new(n))
    }

    /// The class of the complete DAGs.
    pub fn complete(n: usize) -> Self {
        EssentialGraph(MixedGraph::complete_undirected(n))
    }

    pub fn from_dag(d: &MixedGraph) -> Result<Self, GraphError> {
        if !d.is_dag() {
            return Err(GraphError::NotDag);
        }
        essentialize(d.clone())
    }

    pub fn graph(&self) -> &MixedGraph {
        &self.0
    }

    pub fn into_graph(self) -> MixedGraph {
        self.0
    }

    /// Some DAG of the class.
    pub fn representative(&self) -> MixedGraph {
        consistent_extension(&self.0).expect("an essential graph extends to a member of its class")
    }
}

impl Deref for EssentialGraph {
    type Target = MixedGraph;

    fn deref(&self) -> &MixedGraph {
        &self.0
    }
}

/// Repeatedly converts every arrow that is not strongly protected into a
/// line, all at once per round, until nothing changes.
///
/// Started from a DAG this yields the DAG's essential graph. It may also be
/// started from a partially undirected graph; the result is validated either
/// way and a failure is reported as [`GraphError::NotEssential`].
pub fn essentialize(mut g: MixedGraph) -> Result<EssentialGraph, GraphError> {
    loop {
        let weak: Vec<_> = g
            .arrows()
            .filter(|&(a, b)| g.strong_protection(a, b).is_none())
            .collect();
        if weak.is_empty() {
            break;
        }
        for (a, b) in weak {
            g.undirect_arrow(a, b).expect("arrow listed above");
        }
    }
    validate_essential(&g).map_err(GraphError::NotEssential)?;
    Ok(EssentialGraph(g))
}

/// Markov equivalence of two DAGs: equal skeletons and v-structures.
pub fn same_class(d1: &MixedGraph, d2: &MixedGraph) -> Result<bool, GraphError> {
    if !d1.is_dag() || !d2.is_dag() {
        return Err(GraphError::NotDag);
    }
    if d1.n() != d2.n() {
        return Err(GraphError::VertexCountMismatch(d1.n(), d2.n()));
    }
    Ok(d1.skeleton() == d2.skeleton() && d1.v_structures() == d2.v_structures())
}

/// A DAG with the skeleton and v-structures of `g` that keeps every arrow of
/// `g`, found by the Dor–Tarsi peeling procedure.
pub fn consistent_extension(g: &MixedGraph) -> Option<MixedGraph> {
    extend_avoiding(g, |_, _| false)
}

/// Dor–Tarsi peeling with backtracking: `forbid(remaining, x)` vetoes taking
/// `x` as the next sink. With a veto that never fires the first choice always
/// succeeds, so no backtracking takes place.
pub(crate) fn extend_avoiding(g: &MixedGraph, forbid: impl Fn(&[bool], VertexId) -> bool) -> Option<MixedGraph> {
    struct Peel<'a, F> {
        g: &'a MixedGraph,
        forbid: F,
        dead: HashSet<Vec<bool>>,
    }

    impl<F: Fn(&[bool], VertexId) -> bool> Peel<'_, F> {
        fn sink_ok(&self, alive: &[bool], x: VertexId) -> bool {
            let g = self.g;
            if g.children(x).iter().any(|&y| alive[y]) {
                return false;
            }
            let around: Vec<VertexId> = g.adjacent(x).into_iter().filter(|&y| alive[y]).collect();
            g.line_neighbours(x)
                .iter()
                .filter(|&&y| alive[y])
                .all(|&y| around.iter().all(|&z| z == y || g.is_adjacent(y, z)))
        }

        fn run(&mut self, alive: &mut Vec<bool>, out: &mut MixedGraph, left: usize) -> bool {
            if left == 0 {
                return true;
            }
            if self.dead.contains(alive) {
                return false;
            }
            for x in 0..alive.len() {
                if !alive[x] || !self.sink_ok(alive, x) || (self.forbid)(alive, x) {
                    continue;
                }
                let oriented: Vec<VertexId> = self
                    .g
                    .line_neighbours(x)
                    .iter()
                    .copied()
                    .filter(|&y| alive[y])
                    .collect();
                for &y in &oriented {
                    out.orient_line(y, x).expect("line still unoriented");
                }
                alive[x] = false;
                if self.run(alive, out, left - 1) {
                    return true;
                }
                alive[x] = true;
                for &y in &oriented {
                    out.undirect_arrow(y, x).expect("oriented above");
                }
            }
            self.dead.insert(alive.clone());
            false
        }
    }

    let mut peel = Peel {
        g,
        forbid,
        dead: HashSet::new(),
    };
    let mut out = g.clone();
    let mut alive = vec![true; g.n()];
    if !peel.run(&mut alive, &mut out, g.n()) {
        return None;
    }
    debug_assert!(out.is_dag());
    debug_assert_eq!(out.skeleton(), g.skeleton());
    debug_assert_eq!(out.v_structures(), g.v_structures());
    Some(out)
}

/// Iterator over the DAGs of an equivalence class.
///
/// Each chain component's lines are oriented by every perfect ordering of
/// the component (lexicographic order, duplicates dropped) and the
/// orientations of different components are combined in all ways.
pub struct ClassMembers {
    base: MixedGraph,
    choices: Vec<Vec<Vec<(VertexId, VertexId)>>>,
    cursor: Vec<usize>,
    done: bool,
}

impl Iterator for ClassMembers {
    type Item = MixedGraph;

    fn next(&mut self) -> Option<MixedGraph> {
        if self.done {
            return None;
        }
        let mut d = self.base.clone();
        for (comp, &i) in self.choices.iter().zip(&self.cursor) {
            for &(t, h) in &comp[i] {
                d.orient_line(t, h).expect("component line");
            }
        }
        // advance the odometer, last component fastest
        self.done = true;
        for k in (0..self.cursor.len()).rev() {
            self.cursor[k] += 1;
            if self.cursor[k] < self.choices[k].len() {
                self.done = false;
                break;
            }
            self.cursor[k] = 0;
        }
        Some(d)
    }
}

pub fn class_members(e: &EssentialGraph) -> ClassMembers {
    let g = e.graph();
    let choices: Vec<_> = g
        .chain_components()
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| component_orientations(g, &c))
        .collect();
    let cursor = vec![0; choices.len()];
    ClassMembers {
        base: g.clone(),
        choices,
        cursor,
        done: false,
    }
}

/// All distinct perfect orientations of the lines inside one component.
fn component_orientations(g: &MixedGraph, comp: &[VertexId]) -> Vec<Vec<(VertexId, VertexId)>> {
    fn extend(
        g: &MixedGraph,
        comp: &[VertexId],
        order: &mut Vec<VertexId>,
        placed: &mut VertexSet,
        seen: &mut HashSet<Vec<(VertexId, VertexId)>>,
        out: &mut Vec<Vec<(VertexId, VertexId)>>,
    ) {
        if order.len() == comp.len() {
            let mut rank = vec![0; g.n()];
            for (i, &v) in order.iter().enumerate() {
                rank[v] = i;
            }
            let arrows: Vec<_> = comp
                .iter()
                .flat_map(|&a| {
                    g.line_neighbours(a)
                        .iter()
                        .filter(move |&&b| a < b)
                        .map(move |&b| (a, b))
                })
                .map(|(a, b)| if rank[a] < rank[b] { (a, b) } else { (b, a) })
                .collect();
            if seen.insert(arrows.clone()) {
                out.push(arrows);
            }
            return;
        }
        for &v in comp {
            if placed.contains(&v) {
                continue;
            }
            let earlier: Vec<_> = g.line_neighbours(v).intersection(placed).copied().collect();
            if !g.is_complete_set(&earlier) {
                continue;
            }
            placed.insert(v);
            order.push(v);
            extend(g, comp, order, placed, seen, out);
            order.pop();
            placed.remove(&v);
        }
    }

    let mut out = Vec::new();
    extend(
        g,
        comp,
        &mut Vec::new(),
        &mut VertexSet::new(),
        &mut HashSet::new(),
        &mut out,
    );
    out
}

/// Removes the line `a -- b` from `e` without re-running the essential graph
/// construction. Requires that no `h` has both `a -- h` and `b -- h`, in
/// which case the result is again essential.
pub fn remove_line_fast(e: &EssentialGraph, a: VertexId, b: VertexId) -> Result<EssentialGraph, GraphError> {
    if !e.is_line(a, b) {
        return Err(GraphError::NoLine { a, b });
    }
    if let Some(&h) = e.line_neighbours(a).intersection(e.line_neighbours(b)).next() {
        return Err(GraphError::TriangleOfLines { a, b, h });
    }
    let mut g = e.graph().clone();
    g.remove_edge(a, b);
    Ok(EssentialGraph::new_unchecked(g))
}
