use batchcover::generators::{gen_batched_worst, gen_online_worst};
use batchcover::harmonic::harmonic;
use batchcover::instance::{Batch, Instance, SetSystem};
use batchcover::solvers::{
    run, run_dedicated, run_trivial, x_value, Algorithm, DPolicy, ElementOrder, PrimalDualSolver,
    SolverConfig,
};

const EPS: f64 = 0.001;

#[test]
fn online_worst_ratio_tracks_harmonic() {
    let inst = gen_online_worst(10).unwrap();
    let r = run_trivial(&inst, EPS, DPolicy::NumSets, ElementOrder::Position).unwrap();
    assert_eq!(r.opt_cost, 1.0);
    let rel = (r.ratio - harmonic(10)).abs() / harmonic(10);
    assert!(rel < 0.03, "ratio {} vs H_10 {}", r.ratio, harmonic(10));
}

#[test]
fn batched_worst_ratio_exceeds_shifted_harmonic() {
    for m in [8, 12, 20] {
        let inst = gen_batched_worst(m, 2).unwrap();
        let r = run_dedicated(&inst, EPS, DPolicy::NumSets).unwrap();
        assert!(r.ratio > harmonic(m - 3), "m={m} ratio {}", r.ratio);
    }
}

#[test]
fn singleton_batches_make_algorithms_identical() {
    for m in [1, 5, 13] {
        let inst = gen_online_worst(m).unwrap();
        let t = run(&inst, &SolverConfig::new(Algorithm::Trivial, EPS)).unwrap();
        let d = run(&inst, &SolverConfig::new(Algorithm::Dedicated, EPS)).unwrap();
        assert_eq!(t.primal_cost.to_bits(), d.primal_cost.to_bits(), "m={m}");
        assert_eq!(t.dual_value.to_bits(), d.dual_value.to_bits(), "m={m}");
    }
}

#[test]
fn dedicated_gains_grow_with_z() {
    let m = 24;
    let gap = |z| {
        let inst = gen_batched_worst(m, z).unwrap();
        let t = run(&inst, &SolverConfig::new(Algorithm::Trivial, EPS)).unwrap();
        let d = run(&inst, &SolverConfig::new(Algorithm::Dedicated, EPS)).unwrap();
        assert!(d.primal_cost <= t.primal_cost + 1e-9, "z={z}");
        t.primal_cost - d.primal_cost
    };
    let (g2, g4) = (gap(2), gap(4));
    assert!(g4 > g2, "gap z=2 {g2} z=4 {g4}");
}

#[test]
fn primal_monotone_and_duals_on_grid() {
    let inst = gen_batched_worst(12, 2).unwrap();
    for alg in Algorithm::ALL {
        let mut solver =
            PrimalDualSolver::new(&inst.system, alg, EPS, 12, ElementOrder::Position).unwrap();
        let mut prev = vec![0.0; 12];
        for batch in &inst.batches {
            solver.process_batch(batch).unwrap();
            let state = solver.state();
            for (j, (&a, &b)) in prev.iter().zip(state.x()).enumerate() {
                assert!(b >= a, "{alg} set {j}");
            }
            prev = state.x().to_vec();
            for e in batch.elements.iter() {
                assert!(state.coverage(e) >= 1.0 - 1e-12);
                let y = state.y(e.id());
                assert_eq!(y, state.y_steps(e.id()) as f64 * EPS);
            }
            for j in 0..12 {
                let closed = x_value(1.0, 12, state.dual_mass(j));
                assert!((closed - state.x()[j]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn x_value_examples() {
    assert_eq!(x_value(1.0, 1, 0.0), 0.0);
    assert!((x_value(1.0, 1, 0.5) - 0.41421356237309503).abs() < 1e-15);
    assert!((x_value(2.0, 3, 2.0) - 1.0).abs() < 1e-12);
}

#[test]
fn d_policy_resolution() {
    let inst = gen_batched_worst(10, 2).unwrap();
    assert_eq!(DPolicy::NumSets.resolve(&inst).unwrap(), 10);
    assert_eq!(
        DPolicy::MaxRowSparsity.resolve(&inst).unwrap(),
        inst.max_row_sparsity()
    );
    assert_eq!(DPolicy::Fixed(4).resolve(&inst).unwrap(), 4);
    assert!(DPolicy::Fixed(0).resolve(&inst).is_err());
    assert_eq!("auto".parse::<DPolicy>().unwrap(), DPolicy::MaxRowSparsity);
    assert_eq!("m".parse::<DPolicy>().unwrap(), DPolicy::NumSets);
    assert_eq!("7".parse::<DPolicy>().unwrap(), DPolicy::Fixed(7));
    assert!("0".parse::<DPolicy>().is_err());

    let cfg = SolverConfig {
        d_policy: DPolicy::MaxRowSparsity,
        ..SolverConfig::new(Algorithm::Dedicated, EPS)
    };
    let r = run(&inst, &cfg).unwrap();
    assert_eq!(r.d, inst.max_row_sparsity());
    assert!(r.primal_cost >= r.opt_cost);
}

#[test]
fn weighted_run_is_feasible() {
    let inst = Instance::new(
        SetSystem::new(vec![3.0, 1.0, 0.5]),
        vec![
            Batch::from_memberships(1, [vec![0, 1], vec![0, 2]]),
            Batch::from_memberships(2, [vec![1]]),
        ],
    );
    for alg in Algorithm::ALL {
        let r = run(&inst, &SolverConfig::new(alg, EPS)).unwrap();
        assert!((r.opt_cost - 1.5).abs() < 1e-12);
        assert!(r.primal_cost >= r.opt_cost - 1e-9);
        assert_eq!(r.per_batch_trace.len(), 2);
    }
}

#[test]
fn shuffled_order_is_deterministic() {
    let inst = gen_batched_worst(9, 3).unwrap();
    let a = run_trivial(
        &inst,
        EPS,
        DPolicy::NumSets,
        ElementOrder::Shuffled { seed: 7 },
    )
    .unwrap();
    let b = run_trivial(
        &inst,
        EPS,
        DPolicy::NumSets,
        ElementOrder::Shuffled { seed: 7 },
    )
    .unwrap();
    assert_eq!(a, b);
}

#[test]
fn rejects_bad_inputs() {
    let inst = Instance::new(
        SetSystem::unweighted(2),
        vec![Batch::from_memberships(1, [Vec::<usize>::new()])],
    );
    assert!(run(&inst, &SolverConfig::new(Algorithm::Trivial, EPS)).is_err());
    let ok = gen_online_worst(3).unwrap();
    assert!(run(&ok, &SolverConfig::new(Algorithm::Trivial, 0.0)).is_err());
    assert!(run(&ok, &SolverConfig::new(Algorithm::Trivial, f64::NAN)).is_err());
}
