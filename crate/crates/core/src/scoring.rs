//! Decomposable, score-equivalent metrics over categorical data.
//!
//! All scores are log scores. A graph's score is the sum over its vertices
//! of `f(x, pa(x))`; [`Scorer`] memoizes `f` so neighbour deltas cost two
//! lookups once the relevant families have been seen.

use std::collections::{BTreeMap, HashMap};
use std::io::Read;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use statrs::function::gamma::ln_gamma;

use crate::error::{DataError, GraphError};
use crate::essential::consistent_extension;
use crate::graph::{MixedGraph, VertexId, VertexSet};
use crate::neighbourhood::DeltaSpec;

/// Categorical data, one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    arities: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

impl Dataset {
    pub fn new(names: Vec<String>, arities: Vec<usize>, rows: Vec<Vec<u32>>) -> Result<Self, DataError> {
        if arities.len() != names.len() {
            return Err(DataError::ArityCount {
                declared: arities.len(),
                variables: names.len(),
            });
        }
        if let Some(i) = arities.iter().position(|&r| r == 0) {
            return Err(DataError::ZeroArity(names[i].clone()));
        }
        for (row, cells) in rows.iter().enumerate() {
            if cells.len() != names.len() {
                return Err(DataError::RowLength {
                    row,
                    found: cells.len(),
                    expected: names.len(),
                });
            }
            for (x, &value) in cells.iter().enumerate() {
                if value as usize >= arities[x] {
                    return Err(DataError::ValueOutOfRange {
                        row,
                        variable: names[x].clone(),
                        value,
                        arity: arities[x],
                    });
                }
            }
        }
        Ok(Dataset { names, arities, rows })
    }

    /// Reads a CSV file whose first row names the variables.
    ///
    /// A column made only of non-negative integers is taken as category
    /// indices with arity `max + 1`; any other column maps its distinct
    /// strings to categories in order of first appearance. `arities`, when
    /// given, overrides the inferred arities and must cover every value.
    pub fn from_csv<R: Read>(reader: R, arities: Option<&[usize]>) -> Result<Self, DataError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let names: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        let mut raw: Vec<Vec<String>> = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != names.len() {
                return Err(DataError::RowLength {
                    row,
                    found: record.len(),
                    expected: names.len(),
                });
            }
            raw.push(record.iter().map(str::to_owned).collect());
        }

        let k = names.len();
        let mut rows = vec![vec![0u32; k]; raw.len()];
        let mut inferred = vec![0usize; k];
        for x in 0..k {
            let numeric: Option<Vec<u32>> = raw.iter().map(|r| r[x].parse::<u32>().ok()).collect();
            match numeric {
                Some(values) => {
                    for (row, v) in values.into_iter().enumerate() {
                        rows[row][x] = v;
                        inferred[x] = inferred[x].max(v as usize + 1);
                    }
                }
                None => {
                    let mut codes: HashMap<&str, u32> = HashMap::new();
                    for (row, r) in raw.iter().enumerate() {
                        let next = codes.len() as u32;
                        rows[row][x] = *codes.entry(r[x].as_str()).or_insert(next);
                    }
                    inferred[x] = codes.len();
                }
            }
        }
        let arities = match arities {
            Some(a) => a.to_vec(),
            None => inferred,
        };
        Dataset::new(names, arities, rows)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    /// Maximized log-likelihood minus `(ln N / 2)` per free parameter.
    Bic,
    /// Bayesian Dirichlet equivalent-uniform marginal likelihood.
    Bdeu { ess: f64 },
}

impl Metric {
    pub fn bdeu(ess: f64) -> Result<Self, DataError> {
        if !(ess.is_finite() && ess > 0.0) {
            return Err(DataError::InvalidEss(ess));
        }
        Ok(Metric::Bdeu { ess })
    }
}

impl Default for Metric {
    fn default() -> Self {
        Metric::Bdeu { ess: 1.0 }
    }
}

/// A vertex and a parent set, the argument of the local score `f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalKey {
    x: VertexId,
    parents: Vec<VertexId>,
}

impl LocalKey {
    pub fn new(x: VertexId, parents: impl IntoIterator<Item = VertexId>) -> Result<Self, DataError> {
        let mut parents: Vec<VertexId> = parents.into_iter().collect();
        parents.sort_unstable();
        parents.dedup();
        if parents.contains(&x) {
            return Err(DataError::InvalidKey(format!("vertex {x} listed as its own parent")));
        }
        Ok(LocalKey { x, parents })
    }

    pub fn x(&self) -> VertexId {
        self.x
    }

    pub fn parents(&self) -> &[VertexId] {
        &self.parents
    }
}

/// Counts `N_jk` of child state `k` under parent configuration `j`, over
/// observed configurations only, plus the total number of configurations.
fn family_counts(key: &LocalKey, data: &Dataset) -> Result<(BTreeMap<u64, Vec<u64>>, f64), DataError> {
    let n = data.n_vars();
    for &v in std::iter::once(&key.x).chain(&key.parents) {
        if v >= n {
            return Err(DataError::InvalidKey(format!(
                "vertex {v} out of range for {n} variables"
            )));
        }
    }
    let mut q: u64 = 1;
    for &p in &key.parents {
        q = q
            .checked_mul(data.arities[p] as u64)
            .ok_or(DataError::ConfigurationOverflow(key.x))?;
    }
    let r = data.arities[key.x];
    let mut counts: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for row in &data.rows {
        let j = key
            .parents
            .iter()
            .fold(0u64, |acc, &p| acc * data.arities[p] as u64 + row[p] as u64);
        counts.entry(j).or_insert_with(|| vec![0; r])[row[key.x] as usize] += 1;
    }
    Ok((counts, q as f64))
}

/// `f(x, parents)` under `metric`.
pub fn local_score(key: &LocalKey, data: &Dataset, metric: Metric) -> Result<f64, DataError> {
    if data.n_rows() == 0 {
        return Err(DataError::Empty);
    }
    let (counts, q) = family_counts(key, data)?;
    let r = data.arities[key.x] as f64;
    match metric {
        Metric::Bic => {
            let mut ll = 0.0;
            for nk in counts.values() {
                let nj: u64 = nk.iter().sum();
                for &c in nk.iter().filter(|&&c| c > 0) {
                    ll += c as f64 * (c as f64 / nj as f64).ln();
                }
            }
            let params = (r - 1.0) * q;
            Ok(ll - 0.5 * (data.n_rows() as f64).ln() * params)
        }
        Metric::Bdeu { ess } => {
            if !(ess.is_finite() && ess > 0.0) {
                return Err(DataError::InvalidEss(ess));
            }
            let alpha_j = ess / q;
            let alpha_jk = ess / (r * q);
            let mut s = 0.0;
            for nk in counts.values() {
                let nj: u64 = nk.iter().sum();
                s += ln_gamma(alpha_j) - ln_gamma(alpha_j + nj as f64);
                for &c in nk.iter().filter(|&&c| c > 0) {
                    s += ln_gamma(alpha_jk + c as f64) - ln_gamma(alpha_jk);
                }
            }
            Ok(s)
        }
    }
}

/// Memo table for local scores, safe to share between threads.
#[derive(Debug, Default)]
pub struct LocalScoreCache {
    map: RwLock<HashMap<LocalKey, f64>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl LocalScoreCache {
    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get_or_compute(
        &self,
        key: LocalKey,
        compute: impl FnOnce(&LocalKey) -> Result<f64, DataError>,
    ) -> Result<f64, DataError> {
        if let Some(&v) = self.map.read().expect("cache lock").get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let v = compute(&key)?;
        self.map.write().expect("cache lock").insert(key, v);
        Ok(v)
    }
}

/// A dataset and metric with an optional local score cache.
#[derive(Debug)]
pub struct Scorer<'d> {
    data: &'d Dataset,
    metric: Metric,
    cache: Option<LocalScoreCache>,
}

impl<'d> Scorer<'d> {
    pub fn new(data: &'d Dataset, metric: Metric) -> Self {
        Scorer {
            data,
            metric,
            cache: Some(LocalScoreCache::default()),
        }
    }

    pub fn without_cache(data: &'d Dataset, metric: Metric) -> Self {
        Scorer {
            data,
            metric,
            cache: None,
        }
    }

    pub fn data(&self) -> &'d Dataset {
        self.data
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn cache(&self) -> Option<&LocalScoreCache> {
        self.cache.as_ref()
    }

    pub fn local(&self, x: VertexId, parents: &VertexSet) -> Result<f64, DataError> {
        let key = LocalKey::new(x, parents.iter().copied())?;
        match &self.cache {
            Some(cache) => cache.get_or_compute(key, |k| local_score(k, self.data, self.metric)),
            None => local_score(&key, self.data, self.metric),
        }
    }

    /// Score of a DAG, or of any graph through one of its consistent
    /// extensions (an essential graph is scored through a member of its
    /// class).
    pub fn score_graph(&self, g: &MixedGraph) -> Result<f64, DataError> {
        if g.n() != self.data.n_vars() {
            return Err(DataError::VariableCount {
                graph: g.n(),
                data: self.data.n_vars(),
            });
        }
        let extended;
        let dag = if g.is_dag() {
            g
        } else {
            extended = consistent_extension(g).ok_or(GraphError::NoExtension)?;
            &extended
        };
        (0..dag.n()).try_fold(0.0, |acc, x| Ok(acc + self.local(x, dag.parents(x))?))
    }

    /// `base + f(x, new) - f(x, old)`.
    pub fn apply_delta(&self, base: f64, delta: &DeltaSpec) -> Result<f64, DataError> {
        Ok(base + self.delta(delta)?)
    }

    pub fn delta(&self, delta: &DeltaSpec) -> Result<f64, DataError> {
        if delta.old_parents == delta.new_parents {
            return Ok(0.0);
        }
        Ok(self.local(delta.vertex, &delta.new_parents)? - self.local(delta.vertex, &delta.old_parents)?)
    }
}

pub fn score_graph(g: &MixedGraph, data: &Dataset, metric: Metric) -> Result<f64, DataError> {
    Scorer::without_cache(data, metric).score_graph(g)
}

pub fn apply_delta(base: f64, delta: &DeltaSpec, data: &Dataset, metric: Metric) -> Result<f64, DataError> {
    Scorer::without_cache(data, metric).apply_delta(base, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary(rows: &[[u32; 2]]) -> Dataset {
        Dataset::new(
            vec!["a".into(), "b".into()],
            vec![2, 2],
            rows.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn bic_of_a_balanced_binary_variable() {
        let rows: Vec<[u32; 2]> = (0..10).map(|i| [(i % 2) as u32, 0]).collect();
        let data = binary(&rows);
        let got = local_score(&LocalKey::new(0, []).unwrap(), &data, Metric::Bic).unwrap();
        let want = 10.0 * 0.5f64.ln() - 10f64.ln() / 2.0;
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn bdeu_matches_hand_computation() {
        // three rows: 0, 0, 1; ess = 2 so alpha_j = 2 and alpha_jk = 1
        let data = binary(&[[0, 0], [0, 0], [1, 0]]);
        let got = local_score(&LocalKey::new(0, []).unwrap(), &data, Metric::Bdeu { ess: 2.0 }).unwrap();
        // Gamma(2)/Gamma(5) * Gamma(3)/Gamma(1) * Gamma(2)/Gamma(1) = 1/24 * 2 * 1
        let want = (2.0f64 / 24.0).ln();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn repeated_calls_agree_and_hit_the_cache() {
        let data = binary(&[[0, 1], [1, 1], [1, 0]]);
        let scorer = Scorer::new(&data, Metric::default());
        let first = scorer.local(0, &VertexSet::new()).unwrap();
        let second = scorer.local(0, &VertexSet::new()).unwrap();
        assert_eq!(first.to_bits(), second.to_bits());
        let cache = scorer.cache().unwrap();
        assert_eq!((cache.hits(), cache.misses(), cache.len()), (1, 1, 1));
    }

    #[test]
    fn line_scores_like_either_orientation() {
        let data = binary(&[[0, 0], [0, 0], [1, 1], [1, 0], [0, 1], [1, 1]]);
        for metric in [Metric::Bic, Metric::Bdeu { ess: 1.0 }] {
            let s = Scorer::new(&data, metric);
            let line = s
                .score_graph(&MixedGraph::from_edges(2, &[], &[(0, 1)]).unwrap())
                .unwrap();
            let ab = s.score_graph(&MixedGraph::from_arrows(2, &[(0, 1)]).unwrap()).unwrap();
            let ba = s.score_graph(&MixedGraph::from_arrows(2, &[(1, 0)]).unwrap()).unwrap();
            assert!((line - ab).abs() < 1e-9 && (ab - ba).abs() < 1e-9);
            let empty = s.score_graph(&MixedGraph::new(2)).unwrap();
            let sum = s.local(0, &VertexSet::new()).unwrap() + s.local(1, &VertexSet::new()).unwrap();
            assert_eq!(empty, sum);
        }
    }

    #[test]
    fn unchanged_parents_give_zero_delta() {
        let data = binary(&[[0, 1]]);
        let d = DeltaSpec {
            vertex: 0,
            old_parents: [1].into(),
            new_parents: [1].into(),
        };
        assert_eq!(apply_delta(-3.5, &d, &data, Metric::Bic).unwrap(), -3.5);
    }

    #[test]
    fn rejects_bad_inputs() {
        let empty = Dataset::new(vec!["a".into()], vec![2], vec![]).unwrap();
        assert!(matches!(
            local_score(&LocalKey::new(0, []).unwrap(), &empty, Metric::Bic),
            Err(DataError::Empty)
        ));
        assert!(matches!(
            Dataset::new(vec!["a".into()], vec![0], vec![]),
            Err(DataError::ZeroArity(_))
        ));
        assert!(matches!(
            Dataset::new(vec!["a".into()], vec![2], vec![vec![2]]),
            Err(DataError::ValueOutOfRange { .. })
        ));
        assert!(LocalKey::new(0, [0]).is_err());
        assert!(Metric::bdeu(0.0).is_err());
        let data = binary(&[[0, 1]]);
        assert!(matches!(
            score_graph(&MixedGraph::new(3), &data, Metric::Bic),
            Err(DataError::VariableCount { graph: 3, data: 2 })
        ));
    }

    #[test]
    fn csv_ingestion() {
        let text = "x,y,z\n0,red,1\n2,blue,1\n1,red,0\n";
        let d = Dataset::from_csv(text.as_bytes(), None).unwrap();
        assert_eq!(d.names(), &["x", "y", "z"]);
        assert_eq!(d.arities(), &[3, 2, 2]);
        assert_eq!(d.rows(), &[vec![0, 0, 1], vec![2, 1, 1], vec![1, 0, 0]]);

        let d = Dataset::from_csv(text.as_bytes(), Some(&[4, 2, 3])).unwrap();
        assert_eq!(d.arities(), &[4, 2, 3]);
        assert!(Dataset::from_csv(text.as_bytes(), Some(&[2, 2, 2])).is_err());
        assert!(Dataset::from_csv("a,b\n1\n".as_bytes(), None).is_err());
    }
}
