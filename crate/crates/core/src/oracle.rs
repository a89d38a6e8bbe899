//! Brute-force ground truth for small graphs.
//!
//! Everything here works from definitions: DAGs are enumerated outright,
//! classes are formed by comparing d-separation statements, and the
//! boundary of a class is read off the inclusion order of those statements.
//! The functions are exponential and capped at [`MAX_N`] vertices.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::GraphError;
use crate::essential::{class_members, Condition, EssentialGraph};
use crate::graph::{MixedGraph, VertexId, VertexSet};

/// Largest vertex count accepted by the enumerating oracles.
pub const MAX_N: usize = 5;

fn check_n(n: usize, max: usize) -> Result<(), GraphError> {
    if n > max {
        return Err(GraphError::TooManyVertices { n, max });
    }
    Ok(())
}

/// Every labeled DAG on `n` vertices, each exactly once.
pub fn enumerate_dags(n: usize) -> Result<Vec<MixedGraph>, GraphError> {
    check_n(n, MAX_N)?;
    let pairs: Vec<(VertexId, VertexId)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let states = 3usize.pow(pairs.len() as u32);
    let dags = (0..states)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut g = MixedGraph::new(n);
            for &(a, b) in &pairs {
                match code % 3 {
                    1 => g.add_arrow(a, b).expect("fresh pair"),
                    2 => g.add_arrow(b, a).expect("fresh pair"),
                    _ => {}
                }
                code /= 3;
            }
            g.is_dag().then_some(g)
        })
        .collect();
    Ok(dags)
}

/// Number of labeled DAGs on `n` vertices, from the inclusion-exclusion
/// recurrence over the set of sinks.
pub fn labeled_dag_count(n: usize) -> u128 {
    let mut a = vec![1u128];
    for m in 1..=n {
        let mut total: i128 = 0;
        let mut binom: i128 = 1;
        for k in 1..=m {
            binom = binom * (m - k + 1) as i128 / k as i128;
            let term = binom * (1i128 << (k * (m - k))) * a[m - k] as i128;
            total += if k % 2 == 1 { term } else { -term };
        }
        a.push(total as u128);
    }
    a[n]
}

fn mask_of(vs: &VertexSet) -> u32 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

/// Parent bitmasks of a DAG, for the reachability below.
struct Masks {
    parents: Vec<u32>,
    children: Vec<u32>,
}

impl Masks {
    fn new(d: &MixedGraph) -> Self {
        Masks {
            parents: (0..d.n()).map(|v| mask_of(d.parents(v))).collect(),
            children: (0..d.n()).map(|v| mask_of(d.children(v))).collect(),
        }
    }

    /// Vertices outside `z` joined to some source by a trail that is active
    /// given `z`. Sources themselves count as reachable unless in `z`.
    fn reachable(&self, sources: u32, z: u32) -> u32 {
        let n = self.parents.len();
        // ancestors of z, z included
        let mut anc = z;
        let mut frontier = z;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.parents[v] & !anc;
            anc |= new;
            frontier |= new;
        }
        // visited[dir] holds vertices reached moving up (from a child) or down
        let mut visited = [0u32; 2];
        let mut stack: Vec<(usize, usize)> = (0..n).filter(|&v| sources >> v & 1 == 1).map(|v| (v, 0)).collect();
        let mut reach = 0u32;
        while let Some((y, dir)) = stack.pop() {
            if visited[dir] >> y & 1 == 1 {
                continue;
            }
            visited[dir] |= 1 << y;
            let observed = z >> y & 1 == 1;
            if !observed {
                reach |= 1 << y;
            }
            let push = |mask: u32, dir: usize, stack: &mut Vec<(usize, usize)>| {
                let mut m = mask;
                while m != 0 {
                    stack.push((m.trailing_zeros() as usize, dir));
                    m &= m - 1;
                }
            };
            if dir == 0 && !observed {
                push(self.parents[y], 0, &mut stack);
                push(self.children[y], 1, &mut stack);
            } else if dir == 1 {
                if !observed {
                    push(self.children[y], 1, &mut stack);
                }
                if anc >> y & 1 == 1 {
                    push(self.parents[y], 0, &mut stack);
                }
            }
        }
        reach
    }
}

/// Whether `zs` d-separates `xs` and `ys` in the DAG `d`.
pub fn d_separated(d: &MixedGraph, xs: &VertexSet, ys: &VertexSet, zs: &VertexSet) -> Result<bool, GraphError> {
    if !d.is_dag() {
        return Err(GraphError::NotDag);
    }
    check_n(d.n(), 32)?;
    for &v in xs.iter().chain(ys).chain(zs) {
        d.check_vertex(v)?;
    }
    let reach = Masks::new(d).reachable(mask_of(xs), mask_of(zs));
    Ok(reach & mask_of(ys) == 0)
}

/// The pairwise d-separation statements `x ⊥ y | W` of a DAG, as a bitset
/// indexed by the pair and the conditioning set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndependenceFingerprint {
    n: usize,
    bits: Vec<u64>,
}

fn pair_index(n: usize, x: usize, y: usize) -> usize {
    let (x, y) = (x.min(y), x.max(y));
    x * (2 * n - x - 1) / 2 + (y - x - 1)
}

impl IndependenceFingerprint {
    fn empty(n: usize) -> Self {
        let total = n * n.saturating_sub(1) / 2 * (1 << n);
        IndependenceFingerprint {
            n,
            bits: vec![0; total.div_ceil(64)],
        }
    }

    fn bit(&self, x: usize, y: usize, w: u32) -> usize {
        (pair_index(self.n, x, y) << self.n) | w as usize
    }

    /// Whether `x ⊥ y | w` is in the set. `x`, `y` and `w` must be disjoint.
    pub fn contains(&self, x: VertexId, y: VertexId, w: &VertexSet) -> bool {
        let i = self.bit(x, y, mask_of(w));
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_strict_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self != other
    }
}

/// Every statement `x ⊥ y | W` holding in the DAG `d`.
pub fn independences(d: &MixedGraph) -> Result<IndependenceFingerprint, GraphError> {
    if !d.is_dag() {
        return Err(GraphError::NotDag);
    }
    let n = d.n();
    check_n(n, 16)?;
    let masks = Masks::new(d);
    let mut fp = IndependenceFingerprint::empty(n);
    for x in 0..n {
        for w in 0u32..(1 << n) {
            if w >> x & 1 == 1 {
                continue;
            }
            let reach = masks.reachable(1 << x, w);
            for y in x + 1..n {
                if (w | reach) >> y & 1 == 0 {
                    let i = fp.bit(x, y, w);
                    fp.bits[i / 64] |= 1 << (i % 64);
                }
            }
        }
    }
    Ok(fp)
}

/// Largest vertex count for [`full_independences`].
pub const MAX_FULL_N: usize = 4;

/// Every statement `U ⊥ V | W` over disjoint sets with `U`, `V` non-empty,
/// as bitmask triples with `U < V`.
pub fn full_independences(d: &MixedGraph) -> Result<BTreeSet<(u32, u32, u32)>, GraphError> {
    if !d.is_dag() {
        return Err(GraphError::NotDag);
    }
    let n = d.n();
    check_n(n, MAX_FULL_N)?;
    let masks = Masks::new(d);
    let all = (1u32 << n) - 1;
    let mut out = BTreeSet::new();
    for w in 0..=all {
        for u in 1..=all {
            if u & w != 0 {
                continue;
            }
            let reach = masks.reachable(u, w);
            let rest = all & !u & !w;
            // every non-empty subset v of rest above u
            let mut v = rest;
            while v != 0 {
                if u < v && reach & v == 0 {
                    out.insert((u, v, w));
                }
                v = (v - 1) & rest;
            }
        }
    }
    Ok(out)
}

/// The classes of all DAGs on `n` vertices, grouped by their d-separation
/// statements, with each class drawn as the union of its members' edges.
#[derive(Debug, Clone)]
pub struct ClassCatalogue {
    n: usize,
    dags: Vec<MixedGraph>,
    dag_class: Vec<usize>,
    classes: Vec<MixedGraph>,
    fingerprints: Vec<IndependenceFingerprint>,
    members: Vec<Vec<usize>>,
    index: HashMap<MixedGraph, usize>,
}

/// A line where members disagree, an arrow where they all agree.
pub fn edge_union(n: usize, dags: &[&MixedGraph]) -> MixedGraph {
    let mut g = MixedGraph::new(n);
    for d in dags {
        for (a, b) in d.arrows() {
            if g.is_arrow(b, a) {
                g.undirect_arrow(b, a).expect("arrow present");
            } else if !g.is_adjacent(a, b) {
                g.add_arrow(a, b).expect("fresh pair");
            }
        }
    }
    g
}

impl ClassCatalogue {
    pub fn build(n: usize) -> Result<Self, GraphError> {
        let dags = enumerate_dags(n)?;
        let fps: Vec<IndependenceFingerprint> = dags.par_iter().map(independences).collect::<Result<_, _>>()?;
        let mut by_fp: HashMap<&IndependenceFingerprint, usize> = HashMap::new();
        let mut fingerprints = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut dag_class = Vec::with_capacity(dags.len());
        for (i, fp) in fps.iter().enumerate() {
            let c = *by_fp.entry(fp).or_insert_with(|| {
                fingerprints.push(fp.clone());
                members.push(Vec::new());
                members.len() - 1
            });
            members[c].push(i);
            dag_class.push(c);
        }
        let mut classes = Vec::with_capacity(members.len());
        let mut index = HashMap::new();
        for (c, ms) in members.iter().enumerate() {
            let refs: Vec<&MixedGraph> = ms.iter().map(|&i| &dags[i]).collect();
            let union = edge_union(n, &refs);
            index.insert(union.clone(), c);
            classes.push(union);
        }
        Ok(ClassCatalogue {
            n,
            dags,
            dag_class,
            classes,
            fingerprints,
            members,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dags(&self) -> &[MixedGraph] {
        &self.dags
    }

    /// Class id of the `i`-th DAG of [`Self::dags`].
    pub fn class_of_dag(&self, i: usize) -> usize {
        self.dag_class[i]
    }

    /// Each class as the union of its members' edges.
    pub fn classes(&self) -> &[MixedGraph] {
        &self.classes
    }

    pub fn fingerprint(&self, class: usize) -> &IndependenceFingerprint {
        &self.fingerprints[class]
    }

    /// Indices into [`Self::dags`] of the members of a class.
    pub fn members(&self, class: usize) -> &[usize] {
        &self.members[class]
    }

    pub fn class_of(&self, e: &MixedGraph) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Covers of `class` in the inclusion order of independence sets.
    pub fn boundary(&self, class: usize) -> Boundary {
        let me = &self.fingerprints[class];
        let above: Vec<usize> = (0..self.len())
            .filter(|&j| me.is_strict_subset(&self.fingerprints[j]))
            .collect();
        let below: Vec<usize> = (0..self.len())
            .filter(|&j| self.fingerprints[j].is_strict_subset(me))
            .collect();
        let fp = |j: usize| &self.fingerprints[j];
        let plus = above
            .iter()
            .filter(|&&j| !above.iter().any(|&k| fp(k).is_strict_subset(fp(j))))
            .map(|&j| self.classes[j].clone())
            .collect();
        let minus = below
            .iter()
            .filter(|&&j| !below.iter().any(|&k| fp(j).is_strict_subset(fp(k))))
            .map(|&j| self.classes[j].clone())
            .collect();
        Boundary { plus, minus }
    }
}

/// The two halves of an inclusion boundary: classes with more
/// independences (`plus`) and with fewer (`minus`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Boundary {
    pub plus: BTreeSet<MixedGraph>,
    pub minus: BTreeSet<MixedGraph>,
}

impl Boundary {
    pub fn len(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The boundary of `e` read directly off the inclusion order of the
/// independence sets of all classes on the same vertices.
pub fn boundary_by_definition(e: &EssentialGraph) -> Result<Boundary, GraphError> {
    let cat = ClassCatalogue::build(e.n())?;
    let class = cat.class_of(e.graph()).ok_or(GraphError::UnknownClass)?;
    Ok(cat.boundary(class))
}

/// The boundary of `e` from single-arrow changes to its members: removing
/// any arrow of any member gives a class in `plus`, adding any arrow that
/// keeps a member acyclic gives a class in `minus`.
pub fn boundary_by_arrow_changes(e: &EssentialGraph) -> Result<Boundary, GraphError> {
    let n = e.n();
    let mut out = Boundary::default();
    for d in class_members(e) {
        for (a, b) in d.arrows().collect::<Vec<_>>() {
            let mut k = d.clone();
            k.remove_edge(a, b);
            out.plus.insert(EssentialGraph::from_dag(&k)?.into_graph());
        }
        for a in 0..n {
            for b in 0..n {
                if a == b || d.is_adjacent(a, b) {
                    continue;
                }
                let mut k = d.clone();
                k.add_arrow(a, b)?;
                if k.is_dag() {
                    out.minus.insert(EssentialGraph::from_dag(&k)?.into_graph());
                }
            }
        }
    }
    Ok(out)
}

/// Chordality by looking for an induced chordless cycle of length at least
/// four among all vertex subsets. Exponential; intended for `n ≤ 10`.
pub fn naive_is_chordal(u: &MixedGraph) -> bool {
    let n = u.n();
    assert!(n <= 16, "naive chordality check is exponential");
    let adj: Vec<u32> = (0..n).map(|v| mask_of(&u.adjacent(v))).collect();
    (0u32..1 << n)
        .filter(|s| s.count_ones() >= 4)
        .all(|s| !induces_cycle(&adj, s))
}

/// A vertex set induces a cycle iff it is connected and 2-regular.
fn induces_cycle(adj: &[u32], s: u32) -> bool {
    let mut m = s;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        if (adj[v] & s).count_ones() != 2 {
            return false;
        }
    }
    let start = s.trailing_zeros() as usize;
    let mut seen = 1u32 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & s & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == s
}

/// The essential-graph conditions `g` violates, checked one by one from
/// their definitions.
pub fn naive_violations(g: &MixedGraph) -> BTreeSet<Condition> {
    let mut out = BTreeSet::new();
    if has_partially_directed_cycle(g) {
        out.insert(Condition::ChainGraph);
    }
    if !components_chordal(g) {
        out.insert(Condition::ChordalComponents);
    }
    if has_arrow_line(g) {
        out.insert(Condition::NoArrowLine);
    }
    if g.arrows().any(|(a, b)| !naive_strongly_protected(g, a, b)) {
        out.insert(Condition::StronglyProtected);
    }
    out
}

/// A cycle following lines either way and arrows forwards, with at least
/// one arrow. Searches all simple paths.
fn has_partially_directed_cycle(g: &MixedGraph) -> bool {
    fn walk(g: &MixedGraph, start: VertexId, v: VertexId, used_arrow: bool, on_path: &mut Vec<bool>) -> bool {
        let steps = g
            .children(v)
            .iter()
            .map(|&w| (w, true))
            .chain(g.line_neighbours(v).iter().map(|&w| (w, false)));
        for (w, arrow) in steps.collect::<Vec<_>>() {
            let with_arrow = used_arrow || arrow;
            if w == start && with_arrow {
                return true;
            }
            if !on_path[w] {
                on_path[w] = true;
                if walk(g, start, w, with_arrow, on_path) {
                    return true;
                }
                on_path[w] = false;
            }
        }
        false
    }
    (0..g.n()).any(|s| {
        let mut on_path = vec![false; g.n()];
        on_path[s] = true;
        walk(g, s, s, false, &mut on_path)
    })
}

fn components_chordal(g: &MixedGraph) -> bool {
    let n = g.n();
    let mut comp: Vec<usize> = (0..n).collect();
    // propagate the minimum label along lines until stable
    loop {
        let mut changed = false;
        for (a, b) in g.lines().collect::<Vec<_>>() {
            let m = comp[a].min(comp[b]);
            if comp[a] != m || comp[b] != m {
                comp[a] = m;
                comp[b] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut labels: Vec<usize> = comp.clone();
    labels.sort_unstable();
    labels.dedup();
    labels.into_iter().all(|l| {
        let vs: VertexSet = (0..n).filter(|&v| comp[v] == l).collect();
        let mut u = MixedGraph::new(n);
        for (a, b) in g.lines() {
            if vs.contains(&a) {
                u.add_line(a, b).expect("fresh pair");
            }
        }
        naive_is_chordal(&u)
    })
}

fn has_arrow_line(g: &MixedGraph) -> bool {
    g.arrows()
        .any(|(a, b)| g.line_neighbours(b).iter().any(|&c| c != a && !g.is_adjacent(a, c)))
}

/// Strong protection of `a -> b` by matching the four configurations
/// against every choice of the extra vertices.
pub fn naive_strongly_protected(g: &MixedGraph, a: VertexId, b: VertexId) -> bool {
    let n = g.n();
    let others = || (0..n).filter(move |&v| v != a && v != b);
    // c -> a -> b, c not adjacent to b
    let config_a = || others().any(|c| g.is_arrow(c, a) && !g.is_adjacent(c, b));
    // a -> b <- c, c not adjacent to a
    let config_b = || others().any(|c| g.is_arrow(c, b) && !g.is_adjacent(c, a));
    // a -> c -> b
    let config_c = || others().any(|c| g.is_arrow(a, c) && g.is_arrow(c, b));
    // c -- a -- d, c -> b <- d, c and d not adjacent
    let config_d = || {
        others().any(|c| {
            others().any(|d| {
                c != d
                    && g.is_line(a, c)
                    && g.is_line(a, d)
                    && g.is_arrow(c, b)
                    && g.is_arrow(d, b)
                    && !g.is_adjacent(c, d)
            })
        })
    };
    g.is_arrow(a, b) && (config_a() || config_b() || config_c() || config_d())
}
