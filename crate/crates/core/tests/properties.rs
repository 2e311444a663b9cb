mod common;

use std::sync::Arc;

use proptest::prelude::*;

use outerlip::format::{parse_path, parse_point, write_path, write_point};
use outerlip::harness::sampling::{random_automorphism, random_graph, random_metric, random_path, random_point, random_tangent, rng_for};
use outerlip::homology::class_lengths;
use outerlip::lipschitz::{norm_value, stretch_factor};
use outerlip::potential::{psi, RealizerTable, Convention};
use outerlip::rational::{q, qi, Q};
use outerlip::{enumerate_candidates, Graph};

use common::{bounded_loops, class_minima, is_candidate_shape};

fn sorted_lengths(x: &outerlip::MarkedPoint) -> Vec<Q> {
    let mut v: Vec<Q> = psi(x).terms.into_iter().map(|t| t.length).collect();
    v.sort();
    v
}

#[test]
fn shape_oracle_on_named_graphs() {
    let theta = Graph::from_names(&["p", "q"], &[("x", "p", "q"), ("y", "p", "q"), ("z", "p", "q")]).unwrap();
    let barbell = Graph::from_names(&["p", "q"], &[("u", "p", "p"), ("w", "p", "q"), ("v", "q", "q")]).unwrap();
    // petals, and both orientations of each pair of petals
    for (g, expected) in [(Graph::rose(2), 4), (Graph::rose(3), 9), (theta, 3), (barbell, 4)] {
        let n = bounded_loops(&g, 2).iter().filter(|lp| is_candidate_shape(&g, lp)).count();
        assert_eq!(n, expected);
        assert_eq!(enumerate_candidates(&g).len(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn third_crossings_never_shorten_a_class(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 2);
        let g = random_graph(2, &mut rng);
        let m = random_metric(&g, &mut rng);
        let two = class_minima(&g, m.lengths(), &bounded_loops(&g, 2));
        let three = class_minima(&g, m.lengths(), &bounded_loops(&g, 3));
        let fast = class_lengths(&g, m.lengths()).unwrap();
        for c in 1..4 {
            prop_assert_eq!(&two[c].as_ref().unwrap().0, &three[c].as_ref().unwrap().0);
            prop_assert_eq!(&two[c].as_ref().unwrap().0, &fast[c]);
        }
    }

    #[test]
    fn norms_are_positively_homogeneous(seed in any::<u64>(), rank in 2usize..=3, k in 1i64..50) {
        let mut rng = rng_for(seed, 3);
        let x = random_point(rank, &mut rng);
        let tau = random_tangent(x.graph(), &mut rng, x.metric());
        let c = q(k, 7);
        let scaled = tau.scaled(&c);
        prop_assert_eq!(norm_value(x.graph(), x.metric(), &scaled), &c * norm_value(x.graph(), x.metric(), &tau));
        let table = RealizerTable::new(x.graph(), x.metric()).unwrap();
        prop_assert_eq!(table.correction_value(&scaled, Convention::Max), &c * table.correction_value(&tau, Convention::Max));
    }

    #[test]
    fn stretch_to_self_is_one(seed in any::<u64>(), rank in 2usize..=3) {
        let x = random_point(rank, &mut rng_for(seed, 4));
        prop_assert_eq!(stretch_factor(&x, &x).unwrap(), qi(1));
    }

    #[test]
    fn potential_is_invariant_under_automorphisms(seed in any::<u64>(), rank in 2usize..=3) {
        let mut rng = rng_for(seed, 5);
        let x = random_point(rank, &mut rng);
        let rose = Arc::new(Graph::rose(rank));
        let (phi, phi_inv) = random_automorphism(&rose, &mut rng, 4);
        let y = x.act_by_automorphism(&phi, &phi_inv).unwrap();
        prop_assert_eq!(sorted_lengths(&x), sorted_lengths(&y));
    }

    #[test]
    fn text_formats_round_trip(seed in any::<u64>(), rank in 2usize..=3) {
        let mut rng = rng_for(seed, 6);
        let x = random_point(rank, &mut rng);
        prop_assert_eq!(&parse_point(&write_point(&x)).unwrap(), &x);
        let p = random_path(x, &mut rng, 3, true).unwrap();
        let back = parse_path(&write_path(&p)).unwrap();
        prop_assert_eq!(back.end(), p.end());
        prop_assert_eq!(back.steps().len(), p.steps().len());
    }
}
