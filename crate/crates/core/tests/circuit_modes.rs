use hsh_core::bitmath::hamming_weight;
use hsh_core::circuit::{predicted_solution_probability, run_fast, run_full, run_full_traced};
use hsh_core::partition::PartitionInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random instance with exactly two solutions: pick weights for all but the
/// last element and a random side assignment, then choose the last weight
/// that balances it. Retries until the partition is unique.
fn two_solution_instance(rng: &mut impl Rng, n: usize, max_weight: u64) -> PartitionInstance {
    loop {
        let mut weights: Vec<u64> = (0..n - 1)
            .map(|_| rng.random_range(1..=max_weight))
            .collect();
        let (mut left, mut right) = (0u64, 0u64);
        for &w in &weights {
            if rng.random_bool(0.5) {
                left += w;
            } else {
                right += w;
            }
        }
        if left == right {
            continue;
        }
        weights.push(left.abs_diff(right));
        let instance = PartitionInstance::new(weights).unwrap();
        if instance.enumerate_solutions().unwrap().len() == 2 {
            return instance;
        }
    }
}

fn assert_modes_agree(instance: &PartitionInstance) {
    let fast = run_fast(instance).unwrap();
    let full = run_full_traced(instance).unwrap();
    for (x, (a, b)) in fast
        .probabilities
        .iter()
        .zip(&full.result.probabilities)
        .enumerate()
    {
        assert!((a - b).abs() <= 1e-12, "{instance} x={x}: {a} vs {b}");
    }
    for (f, g) in fast.solutions.iter().zip(&full.result.solutions) {
        assert_eq!(f.state, g.state);
        assert!((f.solved_branch - g.solved_branch).norm() <= 1e-12);
        assert!((f.unsolved_branch - g.unsolved_branch).norm() <= 1e-12);
    }
    assert!(full.sigma_leakage() <= 1e-12, "{instance}");
    assert!((full.result.total_probability() - 1.0).abs() <= 1e-12);
}

#[test]
fn fast_and_full_agree_on_random_two_solution_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    while checked < 24 {
        let n = rng.random_range(2..=9);
        let instance = two_solution_instance(&mut rng, n, 12);
        if instance.layout().unwrap().total() > 20 {
            continue;
        }
        assert_modes_agree(&instance);
        checked += 1;
    }
}

#[test]
fn fast_and_full_agree_beyond_two_solutions() {
    for weights in [
        vec![1, 1],
        vec![1, 1, 1, 1],
        vec![1, 2, 3, 4],
        vec![2, 2, 2, 2, 2, 2],
        vec![1, 2, 5],
        vec![3, 1, 1, 2, 2, 1],
        vec![7, 7],
    ] {
        assert_modes_agree(&PartitionInstance::new(weights).unwrap());
    }
}

#[test]
fn solution_probabilities_match_prediction() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for n in 2..=16 {
        let instance = two_solution_instance(&mut rng, n, 1 << 20);
        let result = run_fast(&instance).unwrap();
        assert!(result.has_solution_pair());
        let scale = (n as f64).exp2();
        for diag in &result.solutions {
            let w = hamming_weight(diag.state);
            let predicted = predicted_solution_probability(n as u32, w).unwrap();
            assert!((diag.probability - predicted).abs() <= 1e-10, "{instance}");
            assert_eq!(diag.predicted_probability, Some(predicted));
            // |y⟩|σ⟩|0⟩ carries exactly i^{w(y)}/√(2^n).
            assert!((diag.solved_branch.norm() - scale.sqrt().recip()).abs() <= 1e-12);
            assert!(
                (diag.solved_branch * scale.sqrt() - diag.solved_branch_exact.to_complex()).norm()
                    <= 1e-12
            );
            // |y⟩|σ⟩|1⟩ carries b_y/2^n.
            let b = diag.residual_exact.unwrap();
            assert!((diag.unsolved_branch * scale - b.to_complex()).norm() <= 1e-9);
        }
    }
}

#[test]
fn no_solution_instances_are_uniform() {
    for weights in [
        vec![1, 2, 5],
        vec![2, 4, 6, 10],
        vec![1, 1, 4],
        vec![3, 5, 9, 11, 2],
    ] {
        let instance = PartitionInstance::new(weights).unwrap();
        assert!(instance.enumerate_solutions().unwrap().is_empty());
        for result in [run_fast(&instance).unwrap(), run_full(&instance).unwrap()] {
            let uniform = (result.n() as f64).exp2().recip();
            for p in &result.probabilities {
                assert!((p - uniform).abs() <= 1e-12, "{instance}");
            }
            assert!(result.solutions.is_empty());
        }
    }
}

#[test]
fn many_solution_instances_report_without_closed_forms() {
    let instance = PartitionInstance::new(vec![1, 1, 1, 1]).unwrap();
    let result = run_fast(&instance).unwrap();
    assert_eq!(result.solutions.len(), 6);
    assert!(result.solutions.iter().all(|d| d.residual_exact.is_none()));
    assert!((result.total_probability() - 1.0).abs() <= 1e-12);
}
