mod common;

use ecsearch::essential::class_members;
use ecsearch::neighbourhood::{inclusion_boundary, EnumerationLimits};
use ecsearch::scoring::{local_score, LocalKey};
use ecsearch::{essentialize, Dataset, EssentialGraph, Metric, MixedGraph, Scorer};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn relabel(g: &MixedGraph, perm: &[usize]) -> MixedGraph {
    let arrows: Vec<_> = g.arrows().map(|(a, b)| (perm[a], perm[b])).collect();
    let lines: Vec<_> = g.lines().map(|(a, b)| (perm[a], perm[b])).collect();
    MixedGraph::from_edges(g.n(), &arrows, &lines).unwrap()
}

fn permute_columns(d: &Dataset, perm: &[usize]) -> Dataset {
    let n = d.n_vars();
    let mut names = vec![String::new(); n];
    let mut arities = vec![0; n];
    for x in 0..n {
        names[perm[x]] = d.names()[x].clone();
        arities[perm[x]] = d.arities()[x];
    }
    let rows = d
        .rows()
        .iter()
        .map(|r| {
            let mut out = vec![0; n];
            for x in 0..n {
                out[perm[x]] = r[x];
            }
            out
        })
        .collect();
    Dataset::new(names, arities, rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn score_does_not_depend_on_vertex_labels(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_dag(&mut rng, n, 0.5);
        let arities: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
        let data = sampled_data(&mut rng, &d, &arities, 200);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let pd = permute_columns(&data, &perm);
        for metric in [Metric::Bic, Metric::Bdeu { ess: 1.0 }] {
            let a = Scorer::new(&data, metric).score_graph(&d).unwrap();
            let b = Scorer::new(&pd, metric).score_graph(&relabel(&d, &perm)).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
            let sum: f64 = (0..n)
                .map(|x| local_score(&LocalKey::new(x, d.parents(x).iter().copied()).unwrap(), &data, metric).unwrap())
                .sum();
            prop_assert!((a - sum).abs() < 1e-9);
        }
    }

    #[test]
    fn cache_is_transparent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_dag(&mut rng, 5, 0.4);
        let data = random_data(&mut rng, &[2, 3, 2, 3, 2], 150);
        for metric in [Metric::Bic, Metric::Bdeu { ess: 3.0 }] {
            let cached = Scorer::new(&data, metric);
            let plain = Scorer::without_cache(&data, metric);
            for _ in 0..2 {
                prop_assert_eq!(
                    cached.score_graph(&d).unwrap().to_bits(),
                    plain.score_graph(&d).unwrap().to_bits()
                );
            }
            prop_assert!(cached.cache().unwrap().hits() >= 5);
        }
    }

    #[test]
    fn deltas_telescope_along_a_walk(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_data(&mut rng, &[2, 3, 2, 2, 3], 300);
        for metric in [Metric::Bic, Metric::Bdeu { ess: 1.0 }] {
            let scorer = Scorer::new(&data, metric);
            let mut e = EssentialGraph::empty(5);
            let mut running = scorer.score_graph(&e).unwrap();
            for _ in 0..12 {
                let nb = inclusion_boundary(&e, EnumerationLimits::unlimited()).unwrap();
                let step = nb.neighbours.choose(&mut rng).unwrap().clone();
                running = scorer.apply_delta(running, &step.delta).unwrap();
                e = step.result;
            }
            prop_assert!((running - scorer.score_graph(&e).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn members_of_a_class_score_alike(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = essentialize(random_dag(&mut rng, 5, 0.5)).unwrap();
        let data = random_data(&mut rng, &[3, 2, 3, 2, 2], 250);
        for metric in [Metric::Bic, Metric::Bdeu { ess: 0.5 }] {
            let scorer = Scorer::new(&data, metric);
            let target = scorer.score_graph(&e).unwrap();
            for m in class_members(&e) {
                prop_assert!((scorer.score_graph(&m).unwrap() - target).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn bdeu_counts_only_observed_configurations() {
    // two parents with 3 * 3 configurations of which only two appear
    let rows = vec![vec![0, 0, 0], vec![1, 1, 1], vec![0, 1, 1]];
    let data = Dataset::new(vec!["y".into(), "p".into(), "q".into()], vec![2, 3, 3], rows).unwrap();
    let key = LocalKey::new(0, [1, 2]).unwrap();
    let got = local_score(&key, &data, Metric::Bdeu { ess: 9.0 }).unwrap();
    // alpha_j = 1, alpha_jk = 1/2
    let lg = |x: f64| ln_gamma_small(x);
    let j0 = lg(1.0) - lg(2.0) + lg(1.5) - lg(0.5);
    let j4 = lg(1.0) - lg(3.0) + 2.0 * (lg(1.5) - lg(0.5));
    assert!((got - (j0 + j4)).abs() < 1e-12, "{got} vs {}", j0 + j4);
}

/// `ln Γ(x)` for positive integers and half-integers, by the recurrence.
fn ln_gamma_small(x: f64) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let mut v = if x.fract() == 0.0 { 1.0 } else { sqrt_pi };
    let mut t = if x.fract() == 0.0 { 1.0 } else { 0.5 };
    while t < x {
        v *= t;
        t += 1.0;
    }
    v.ln()
}
