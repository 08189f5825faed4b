use std::collections::BTreeSet;

use batchcover::harmonic::{harmonic, lower_bound};
use batchcover::instance::{covering_sets_of, Batch, Element, Instance, SetSystem};
use batchcover::solvers::offline_opt;
use batchcover::vc::{is_shattered, trace_patterns, vc_dimension};
use proptest::prelude::*;

/// Shattering from first principles, without bitmasks.
fn naive_shattered(subset: &[&Element], num_sets: usize) -> bool {
    let n = subset.len();
    let mut realized: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for j in 0..num_sets {
        let trace: BTreeSet<usize> = (0..n)
            .filter(|&i| subset[i].member_of.contains(&j))
            .collect();
        realized.insert(trace);
    }
    // every subset of positions must appear
    let mut all = vec![BTreeSet::new()];
    for i in 0..n {
        let with: Vec<BTreeSet<usize>> = all
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.insert(i);
                s
            })
            .collect();
        all.extend(with);
    }
    all.iter().all(|a| realized.contains(a))
}

fn naive_vc(batch: &Batch, num_sets: usize) -> usize {
    let elems: Vec<&Element> = batch.elements.iter().collect();
    let n = elems.len();
    let mut best = 0;
    for choice in 0u32..1 << n {
        let subset: Vec<&Element> = (0..n)
            .filter(|i| choice >> i & 1 == 1)
            .map(|i| elems[i])
            .collect();
        if subset.len() > best && naive_shattered(&subset, num_sets) {
            best = subset.len();
        }
    }
    best
}

fn brute_opt(inst: &Instance) -> f64 {
    let m = inst.num_sets();
    (0u32..1 << m)
        .filter(|mask| {
            inst.elements()
                .all(|e| e.member_of.iter().any(|&j| mask >> j & 1 == 1))
        })
        .map(|mask| {
            (0..m)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| inst.system.costs[j])
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

fn memberships(m: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(
        prop::collection::btree_set(0..m, 1..=m).prop_map(|s| s.into_iter().collect()),
        0..=max_len,
    )
}

fn batch_with_sets(max_sets: usize, max_len: usize) -> impl Strategy<Value = (usize, Batch)> {
    (1..=max_sets).prop_flat_map(move |m| {
        memberships(m, max_len).prop_map(move |rows| (m, Batch::from_memberships(1, rows)))
    })
}

fn instance(max_sets: usize) -> impl Strategy<Value = Instance> {
    (1..=max_sets).prop_flat_map(|m| {
        (
            prop::collection::vec(0.25f64..4.0, m),
            prop::collection::vec(
                memberships(m, 4).prop_filter("non-empty", |r| !r.is_empty()),
                1..5,
            ),
        )
            .prop_map(|(costs, batches)| {
                Instance::new(
                    SetSystem::new(costs),
                    batches
                        .into_iter()
                        .enumerate()
                        .map(|(i, rows)| Batch::from_memberships(i + 1, rows))
                        .collect(),
                )
            })
    })
}

proptest! {
    #[test]
    fn harmonic_strictly_increasing(r in 0usize..200_000) {
        prop_assert!(harmonic(r + 1) > harmonic(r));
    }

    #[test]
    fn online_bound_is_harmonic(m in 1usize..5_000) {
        prop_assert_eq!(lower_bound(m, 0).unwrap(), harmonic(m));
    }

    #[test]
    fn covering_sets_brute_force((_, batch) in batch_with_sets(12, 6)) {
        let mut expected = BTreeSet::new();
        for e in &batch.elements {
            for &j in &e.member_of {
                expected.insert(j);
            }
        }
        prop_assert_eq!(covering_sets_of(&batch), expected);
    }

    #[test]
    fn vc_matches_naive_oracle((m, batch) in batch_with_sets(10, 6)) {
        let vc = vc_dimension(&batch, m).unwrap();
        prop_assert_eq!(vc, naive_vc(&batch, m));
        let elems: Vec<&Element> = batch.elements.iter().collect();
        let traces = trace_patterns(&elems, m).unwrap().len();
        prop_assert!(1usize << vc <= traces);
        prop_assert!(vc <= batch.len());
    }

    #[test]
    fn shattering_is_downward_closed((m, batch) in batch_with_sets(10, 5)) {
        let elems: Vec<&Element> = batch.elements.iter().collect();
        if is_shattered(&elems, m).unwrap() {
            for drop in 0..elems.len() {
                let sub: Vec<&Element> = elems
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, e)| *e)
                    .collect();
                prop_assert!(is_shattered(&sub, m).unwrap());
            }
        }
        prop_assert_eq!(is_shattered(&elems, m).unwrap(), naive_shattered(&elems, m));
    }

    #[test]
    fn offline_opt_matches_enumeration(inst in instance(8)) {
        let sol = offline_opt(&inst).unwrap();
        let brute = brute_opt(&inst);
        prop_assert!((sol.cost - brute).abs() < 1e-9, "{} vs {}", sol.cost, brute);
        let chosen_cost: f64 = sol.chosen_sets.iter().map(|&j| inst.system.costs[j]).sum();
        prop_assert!((chosen_cost - sol.cost).abs() < 1e-9);
        for e in inst.elements() {
            prop_assert!(e.member_of.iter().any(|j| sol.chosen_sets.contains(j)));
        }
    }

    #[test]
    fn json_roundtrip(inst in instance(12)) {
        let back = Instance::from_json(&inst.to_json()).unwrap();
        prop_assert_eq!(back, inst);
    }
}
