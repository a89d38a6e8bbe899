#![allow(dead_code)]

use ecsearch::{Dataset, MixedGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// A DAG whose arrows follow a random vertex order, each present with
/// probability `p`.
pub fn random_dag<R: Rng>(rng: &mut R, n: usize, p: f64) -> MixedGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = MixedGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_arrow(order[i], order[j]).unwrap();
            }
        }
    }
    g
}

/// Uniform categorical data with the given arities.
pub fn random_data<R: Rng>(rng: &mut R, arities: &[usize], rows: usize) -> Dataset {
    let names = (0..arities.len()).map(|i| format!("x{i}")).collect();
    let data = (0..rows)
        .map(|_| arities.iter().map(|&r| rng.gen_range(0..r as u32)).collect())
        .collect();
    Dataset::new(names, arities.to_vec(), data).unwrap()
}

/// Data sampled from a random Dirichlet-ish conditional table per vertex of
/// `dag`, so that dependencies are present.
pub fn sampled_data<R: Rng>(rng: &mut R, dag: &MixedGraph, arities: &[usize], rows: usize) -> Dataset {
    let n = dag.n();
    let order = dag.topological_order().unwrap();
    let tables: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|x| {
            let q: usize = dag.parents(x).iter().map(|&p| arities[p]).product();
            (0..q)
                .map(|_| {
                    let w: Vec<f64> = (0..arities[x]).map(|_| rng.gen::<f64>().powi(2) + 0.01).collect();
                    let s: f64 = w.iter().sum();
                    w.into_iter().map(|v| v / s).collect()
                })
                .collect()
        })
        .collect();
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let mut row = vec![0u32; n];
        for &x in &order {
            let j = dag
                .parents(x)
                .iter()
                .fold(0, |acc, &p| acc * arities[p] + row[p] as usize);
            row[x] = draw(rng, &tables[x][j]);
        }
        data.push(row);
    }
    Dataset::new(names, arities.to_vec(), data).unwrap()
}

pub fn draw<R: Rng>(rng: &mut R, probs: &[f64]) -> u32 {
    let mut u: f64 = rng.gen();
    for (k, &p) in probs.iter().enumerate() {
        if u < p {
            return k as u32;
        }
        u -= p;
    }
    (probs.len() - 1) as u32
}

/// Every mixed graph on `n` vertices: each pair is absent, an arrow either
/// way, or a line.
pub fn all_mixed_graphs(n: usize) -> Vec<MixedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0..4usize.pow(pairs.len() as u32))
        .map(|mut code| {
            let mut g = MixedGraph::new(n);
            for &(a, b) in &pairs {
                match code % 4 {
                    1 => g.add_arrow(a, b).unwrap(),
                    2 => g.add_arrow(b, a).unwrap(),
                    3 => g.add_line(a, b).unwrap(),
                    _ => {}
                }
                code /= 4;
            }
            g
        })
        .collect()
}

/// Every undirected graph on `n` vertices.
pub fn all_undirected(n: usize) -> Vec<MixedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let ls: Vec<_> = (0..pairs.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            MixedGraph::from_edges(n, &[], &ls).unwrap()
        })
        .collect()
}

/// Subsets of `vs` that are pairwise adjacent in `g`, the empty set included.
pub fn count_complete_subsets(g: &MixedGraph, vs: &[usize]) -> usize {
    (0u32..1 << vs.len())
        .filter(|mask| {
            let s: Vec<usize> = (0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
            s.iter().all(|&x| s.iter().all(|&y| x == y || g.is_adjacent(x, y)))
        })
        .count()
}
