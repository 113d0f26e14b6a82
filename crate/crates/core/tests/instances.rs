use dualvc::graph::{Variant, WeightedGraph};
use dualvc::instances::{
    greedy_values, hard_instance, make_gs, make_gs_prime, random_dynamic, random_dynamic_nontrivial, random_edit,
    random_instance,
};
use dualvc::numeric::Alpha;
use dualvc::oracle;

const HARD: [Variant; 4] = [Variant::EdgesAdded, Variant::EdgesRemoved, Variant::WeightsRaised, Variant::WeightsLowered];

fn alpha(a: u64) -> Alpha {
    Alpha::new(a).unwrap()
}

#[test]
fn adversarial_family_shapes() {
    let g = make_gs(4, 16).unwrap();
    assert_eq!(g.vertex_count(), 8);
    assert_eq!(g.edge_pairs(), vec![(0, 1), (2, 3), (4, 5), (6, 7)]);
    assert_eq!(g.weights(), &[16, 16, 1, 1, 1, 1, 1, 1]);
    let gp = make_gs_prime(4, 16).unwrap();
    assert_eq!(gp.vertex_count(), 9);
    assert_eq!(gp.edge_pairs().last(), Some(&(1, 8)));
    assert_eq!(gp.weight(dualvc::graph::VertexId(8)), 16);
    assert!(make_gs(1, 4).is_err());
}

#[test]
fn hard_instances_carry_their_variant() {
    for variant in HARD {
        for m in [3, 6, 10] {
            let inst = hard_instance(variant, m, alpha(2)).unwrap();
            assert_eq!(inst.variant, variant, "m={m}");
            assert_eq!(inst.w_max, 1u128 << m);
            assert_eq!(inst.scale(), if variant == Variant::WeightsRaised { 2 } else { 1 });
            assert!(oracle::validate_mfds_integer(&inst.original, &inst.y_orig));
            assert!(!inst.initial_exact().is_mfds(), "{variant} m={m} starts maximal");
        }
    }
    for variant in [Variant::EdgesMixed, Variant::WeightsMixed] {
        assert!(hard_instance(variant, 4, alpha(2)).is_err());
    }
}

#[test]
fn hard_targets_have_few_maximal_duals() {
    for variant in HARD {
        let inst = hard_instance(variant, 3, alpha(2)).unwrap();
        let all = oracle::enumerate_mfds(&inst.target).unwrap();
        assert!(!all.is_empty(), "{variant}");
        for y in &all {
            assert!(oracle::validate_mfds_integer(&inst.target, y));
        }
    }
}

#[test]
fn random_edits_have_the_requested_kind_and_scale() {
    let g = random_instance(30, 60, 1 << 10, 4).unwrap();
    for variant in Variant::ALL {
        for d in [1, 3, 8] {
            let edit = random_edit(&g, variant, d, 1 << 10, 11).unwrap();
            let out = dualvc::graph::apply_edit(&g, &edit).unwrap();
            assert_eq!(out.scale, d, "{variant} D={d}");
            let got = out.diff.variant();
            if d == 1 && matches!(variant, Variant::EdgesMixed | Variant::WeightsMixed) {
                assert_eq!(got.is_edge_edit(), variant.is_edge_edit());
            } else {
                assert_eq!(got, variant, "D={d}");
            }
            assert!(out.graph.max_weight() <= 1 << 10);
        }
    }
}

#[test]
fn random_instances_are_simple_and_reproducible() {
    let a = random_instance(20, 50, 99, 7).unwrap();
    let b = random_instance(20, 50, 99, 7).unwrap();
    assert_eq!(a.edge_pairs(), b.edge_pairs());
    assert_eq!(a.weights(), b.weights());
    let mut pairs = a.edge_pairs();
    pairs.dedup();
    assert_eq!(pairs.len(), 50);
    assert!(a.weights().iter().all(|&w| (1..=99).contains(&w)));
    assert!(random_instance(4, 7, 10, 0).is_err());
    let complete = random_instance(6, 15, 3, 0).unwrap();
    assert_eq!(complete.edge_count(), 15);
}

#[test]
fn dynamic_starts_come_from_a_maximal_original() {
    for seed in 0..20 {
        let inst = random_dynamic(16, 30, 256, Variant::ALL[seed as usize % 6], 3, alpha(2), seed).unwrap();
        assert_eq!(inst.y_orig, greedy_values(&inst.original));
        let start = inst.initial_values();
        assert_eq!(start.len(), inst.target.edge_count());
        let nontrivial = random_dynamic_nontrivial(16, 30, 256, Variant::WeightsMixed, 1, alpha(2), seed).unwrap();
        assert!(!nontrivial.initial_exact().is_mfds());
    }
}

#[test]
fn single_edge_graphs_are_accepted() {
    let g = WeightedGraph::new(vec![1, 1], [(0, 1)]).unwrap();
    assert_eq!(greedy_values(&g), vec![1]);
    assert!(WeightedGraph::new(vec![1, 0], [(0, 1)]).is_err());
    assert!(WeightedGraph::new(vec![1, 1], [(0, 0)]).is_err());
    assert!(WeightedGraph::new(vec![1, 1], [(0, 1), (1, 0)]).is_err());
}
