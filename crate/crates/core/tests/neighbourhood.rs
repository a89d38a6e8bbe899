mod common;

use std::collections::BTreeSet;

use ecsearch::neighbourhood::{all_candidates, inclusion_boundary, EnumerationLimits, Side, SubsetCap};
use ecsearch::oracle::{boundary_by_arrow_changes, ClassCatalogue};
use ecsearch::scoring::{apply_delta, score_graph};
use ecsearch::{essentialize, EssentialGraph, Metric, MixedGraph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn sides(e: &EssentialGraph) -> (BTreeSet<MixedGraph>, BTreeSet<MixedGraph>) {
    let nb = inclusion_boundary(e, EnumerationLimits::unlimited()).unwrap();
    let collect = |s| nb.side(s).map(|x| x.result.graph().clone()).collect();
    (collect(Side::Plus), collect(Side::Minus))
}

#[test]
fn five_vertex_classes_match_the_definition() {
    let cat = ClassCatalogue::build(5).unwrap();
    assert_eq!(cat.len(), 8782);
    // every 5th class keeps the debug-build runtime reasonable; the CLI
    // `oracle check-boundary --n 5` covers all of them
    for c in (0..cat.len()).step_by(5) {
        let e = EssentialGraph::new(cat.classes()[c].clone()).unwrap();
        let (plus, minus) = sides(&e);
        let def = cat.boundary(c);
        assert_eq!(plus, def.plus, "N+ of class {c}");
        assert_eq!(minus, def.minus, "N- of class {c}");
    }
}

fn arb_dag(max_n: usize) -> impl Strategy<Value = MixedGraph> {
    (2..=max_n, any::<u64>(), 0.1f64..0.9).prop_map(|(n, seed, p)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_dag(&mut rng, n, p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_matches_single_arrow_changes(d in arb_dag(6)) {
        let e = essentialize(d).unwrap();
        let (plus, minus) = sides(&e);
        let by_arrows = boundary_by_arrow_changes(&e).unwrap();
        prop_assert_eq!(plus, by_arrows.plus);
        prop_assert_eq!(minus, by_arrows.minus);
    }

    #[test]
    fn deltas_match_rescoring(d in arb_dag(6), seed in any::<u64>()) {
        let e = essentialize(d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arities: Vec<usize> = (0..e.n()).map(|i| 2 + i % 2).collect();
        let data = random_data(&mut rng, &arities, 300);
        for metric in [Metric::Bic, Metric::Bdeu { ess: 2.5 }] {
            let base = score_graph(&e, &data, metric).unwrap();
            for nb in inclusion_boundary(&e, EnumerationLimits::unlimited()).unwrap().neighbours {
                let fast = apply_delta(base, &nb.delta, &data, metric).unwrap();
                let full = score_graph(&nb.result, &data, metric).unwrap();
                prop_assert!((fast - full).abs() < 1e-9, "{:?}: {} vs {}", nb.characterization, fast, full);
            }
        }
    }

    #[test]
    fn neighbours_are_essential_and_distinct(d in arb_dag(6)) {
        let e = essentialize(d).unwrap();
        let nb = inclusion_boundary(&e, EnumerationLimits::unlimited()).unwrap();
        let set: BTreeSet<_> = nb.neighbours.iter().map(|x| x.result.clone()).collect();
        prop_assert_eq!(set.len(), nb.neighbours.len());
        for x in &nb.neighbours {
            prop_assert!(ecsearch::validate_essential(x.result.graph()).is_ok());
            prop_assert!(x.result.graph() != e.graph());
        }
    }

    #[test]
    fn capped_enumeration_is_a_prefix(d in arb_dag(6), cap in 1usize..4) {
        let e = essentialize(d).unwrap();
        let full = all_candidates(&e, EnumerationLimits::unlimited()).unwrap();
        let capped = all_candidates(&e, EnumerationLimits { max_subsets_per_pair: SubsetCap::AtMost(cap) }).unwrap();
        prop_assert!(!full.partial);
        let full_keys: BTreeSet<_> = full.candidates.iter().map(|c| c.characterization.clone()).collect();
        for c in &capped.candidates {
            prop_assert!(full_keys.contains(&c.characterization));
        }
        prop_assert_eq!(capped.partial, capped.candidates.len() < full.candidates.len());
    }
}
