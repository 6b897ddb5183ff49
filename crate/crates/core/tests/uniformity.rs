use khop_core::algorithms::{fastgcn_spec, khop_spec, ladies_spec, LayerQuota};
use khop_core::engine::{run_sampling, CollectiveScope, Strategy as Exec};
use khop_core::{generators, Graph};

#[test]
fn single_draw_from_degree_ten_is_uniform() {
    let g = generators::star(10);
    let spec = khop_spec(&[1]).unwrap();
    let roots = vec![0; 100_000];
    let (set, _) = run_sampling(&g, &spec, &roots, 42, Exec::TransitParallel, 4).unwrap();
    let mut counts = [0u32; 11];
    for s in &set.samples {
        counts[s.steps[0].vertices[0] as usize] += 1;
    }
    assert_eq!(counts[0], 0);
    for &c in &counts[1..] {
        assert!((9_500..=10_500).contains(&c), "{counts:?}");
    }
}

#[test]
fn fastgcn_prefers_the_star_center() {
    // degrees 4,1,1,1,1 -> squared weights 16:1:1:1:1
    let g = generators::star(4);
    let spec = fastgcn_spec(LayerQuota::new(vec![1]).unwrap(), &g).unwrap();
    assert_eq!(spec.weights(), &[16, 1, 1, 1, 1]);
    let trials = 20_000;
    let mut center = 0;
    for seed in 0..trials {
        let (set, _) = run_sampling(&g, &spec, &[1], seed, Exec::SampleParallel, 1).unwrap();
        if set.samples[0].steps[0].vertices == [0] {
            center += 1;
        }
    }
    let freq = center as f64 / trials as f64;
    assert!((freq - 0.8).abs() <= 0.05, "{freq}");
}

#[test]
fn ladies_weights_shared_neighbors_by_arc_count() {
    // targets 0 and 1 share neighbor 2; 3 and 4 are private -> arc counts 2:1:1
    let g = Graph::from_arcs(5, &[(0, 2), (0, 3), (1, 2), (1, 4)], false).unwrap();
    for scope in [CollectiveScope::Batch(2), CollectiveScope::Run] {
        let spec = ladies_spec(LayerQuota::new(vec![1]).unwrap()).with_scope(scope);
        let trials = 20_000;
        let mut shared = 0;
        for seed in 0..trials {
            let (set, _) = run_sampling(&g, &spec, &[0, 1], seed, Exec::SampleParallel, 1).unwrap();
            assert_eq!(set.samples[0].steps[0], set.samples[1].steps[0]);
            if set.samples[0].steps[0].vertices == [2] {
                shared += 1;
            }
        }
        let freq = shared as f64 / trials as f64;
        assert!((freq - 0.5).abs() <= 0.05, "{scope:?}: {freq}");
    }
}
