//! The amplitude-doubling circuit for a Partition Problem instance.
//!
//! Stages, in order:
//!
//! 1. `|0…0⟩_x |−𝒮⟩_σ |1⟩_c`
//! 2. `H` on `x`
//! 3. conditional adds `σ += s(e)` controlled by `x_e`, for every `e`
//! 4. flip `c` where `σ = 0` (solutions end with `c = 0`)
//! 5. uncompute the adds, restoring `σ = −𝒮`
//! 6. `S` on `x`
//! 7. `H` on `x`, controlled on `c = 1` (non-solutions only)
//!
//! [`run_full`] simulates every qubit. [`run_fast`] uses the fact that after
//! stage 5 `σ` is constant and `c` is a function of `x`, so the state is two
//! length-`2^n` branches; the two modes are tested against each other.

use num_complex::Complex64;

use crate::bitmath::{hamming_weight, i_pow, BitString, GaussianInt};
use crate::closedform::{self, CLOSED_FORM_MAX_QUBITS};
use crate::error::{Error, Result};
use crate::partition::{PartitionInstance, RegisterLayout};
use crate::statevector::StateVector;

/// Register limit for [`run_full`] (`n + m + 1` qubits).
pub const FULL_MAX_QUBITS: u32 = 22;

/// Element limit for [`run_fast`].
pub const FAST_MAX_ELEMENTS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Fast,
    Full,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Fast => "fast",
            Self::Full => "full",
        }
    }
}

/// Final-state readout for one solution `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionDiagnostics {
    pub state: BitString,
    /// Amplitude of `|y⟩|−𝒮⟩|0⟩`, normalized.
    pub solved_branch: Complex64,
    /// Amplitude of `|y⟩|−𝒮⟩|1⟩`, normalized.
    pub unsolved_branch: Complex64,
    /// `solved_branch · √(2^n)`, which is exactly `i^{w(y)}`.
    pub solved_branch_exact: GaussianInt,
    /// `P(y) = |solved_branch|² + |unsolved_branch|²`.
    pub probability: f64,
    /// `P(y) · 2^n`.
    pub doubling_ratio: f64,
    /// `unsolved_branch · 2^n` in closed form (`b_y`). Only set when the
    /// instance has exactly the two solutions `y`, `ȳ`.
    pub residual_exact: Option<GaussianInt>,
    /// Closed-form `P(y)`, under the same condition.
    pub predicted_probability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitResult {
    pub mode: Mode,
    pub layout: RegisterLayout,
    /// `P(x)` for every value of the `x` register.
    pub probabilities: Vec<f64>,
    pub solutions: Vec<SolutionDiagnostics>,
}

impl CircuitResult {
    pub fn n(&self) -> u32 {
        self.layout.n()
    }

    pub fn probability(&self, x: u64) -> f64 {
        self.probabilities[x as usize]
    }

    pub fn total_probability(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Whether the closed-form amplitude results apply (exactly two
    /// complementary solutions).
    pub fn has_solution_pair(&self) -> bool {
        self.solutions.len() == 2
    }
}

/// A [`run_full`] result plus the accumulator readouts used to confirm that
/// the uncompute step disentangled `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullRun {
    pub result: CircuitResult,
    /// Marginal distribution of `σ` right after the uncompute stage.
    pub sigma_after_uncompute: Vec<f64>,
    /// Marginal distribution of `σ` at the end of the circuit.
    pub sigma_final: Vec<f64>,
}

impl FullRun {
    /// Probability mass of `σ` on values other than `−𝒮` after uncompute.
    pub fn sigma_leakage(&self) -> f64 {
        let start = self.result.layout.initial_sigma().value() as usize;
        self.sigma_after_uncompute
            .iter()
            .enumerate()
            .filter(|&(v, _)| v != start)
            .map(|(_, p)| p)
            .sum()
    }
}

pub fn run_full(instance: &PartitionInstance) -> Result<CircuitResult> {
    run_full_traced(instance).map(|run| run.result)
}

/// Simulates all `n + m + 1` qubits.
pub fn run_full_traced(instance: &PartitionInstance) -> Result<FullRun> {
    let layout = instance.layout()?;
    if layout.total() > FULL_MAX_QUBITS {
        return Err(Error::RegisterTooLarge {
            qubits: layout.total(),
            max: FULL_MAX_QUBITS,
        });
    }
    let x_qubits = layout.x_qubits();
    let sigma_qubits = layout.sigma_qubits();
    let adders = instance.adders(&layout)?;
    let start = layout.compose(BitString::zero(layout.n())?, layout.initial_sigma(), true);

    let mut state = StateVector::init_basis(
        layout.total(),
        BitString::new(start as u64, layout.total())?,
    )?;
    state.hadamard(&x_qubits)?;
    for add in &adders {
        state.permute(add)?;
    }
    state.permute(&layout.zero_flip())?;
    for add in adders.iter().rev() {
        state.permute(&add.inverse())?;
    }
    let sigma_after_uncompute = state.probabilities_marginal(&sigma_qubits)?;
    state.s_phase(&x_qubits)?;
    state.controlled_hadamard(&x_qubits, layout.control_qubit(), true)?;

    let probabilities = state.probabilities_marginal(&x_qubits)?;
    let sigma_final = state.probabilities_marginal(&sigma_qubits)?;
    let solutions = instance.enumerate_solutions()?;
    let branch =
        |y: BitString, c: bool| state.amplitude(layout.compose(y, layout.initial_sigma(), c));
    let result = assemble(Mode::Full, layout, probabilities, &solutions, branch)?;
    Ok(FullRun {
        result,
        sigma_after_uncompute,
        sigma_final,
    })
}

/// Two-branch simulation over the `x` register only.
pub fn run_fast(instance: &PartitionInstance) -> Result<CircuitResult> {
    let n = instance.len() as u32;
    if n > FAST_MAX_ELEMENTS {
        return Err(Error::QubitCountOutOfRange {
            n,
            min: 1,
            max: FAST_MAX_ELEMENTS,
        });
    }
    let layout = instance.layout()?;
    let solutions = instance.enumerate_solutions()?;
    let scale = (n as f64 / -2.0).exp2();

    let zero = Complex64::new(0.0, 0.0);
    let mut solved = vec![zero; 1 << n];
    let mut unsolved: Vec<Complex64> = (0..1u64 << n)
        .map(|x| i_pow(x.count_ones().into()).scaled(1.0) * scale)
        .collect();
    for y in &solutions {
        let y = y.value() as usize;
        solved[y] = unsolved[y];
        unsolved[y] = zero;
    }
    let mut unsolved = StateVector::from_amplitudes(unsolved)?;
    unsolved.hadamard(&layout.x_qubits())?;

    let probabilities = solved
        .iter()
        .zip(unsolved.amplitudes())
        .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
        .collect();
    let branch = |y: BitString, c: bool| {
        let y = y.value() as usize;
        if c {
            unsolved.amplitude(y)
        } else {
            solved[y]
        }
    };
    assemble(Mode::Fast, layout, probabilities, &solutions, branch)
}

fn assemble(
    mode: Mode,
    layout: RegisterLayout,
    probabilities: Vec<f64>,
    solutions: &[BitString],
    branch: impl Fn(BitString, bool) -> Complex64,
) -> Result<CircuitResult> {
    let n = layout.n();
    let pair = solutions.len() == 2;
    let solutions = solutions
        .iter()
        .map(|&y| {
            let solved_branch = branch(y, false);
            let unsolved_branch = branch(y, true);
            let probability = probabilities[y.value() as usize];
            let weight = hamming_weight(y);
            Ok(SolutionDiagnostics {
                state: y,
                solved_branch,
                unsolved_branch,
                solved_branch_exact: i_pow(weight.into()),
                probability,
                doubling_ratio: probability * (n as f64).exp2(),
                residual_exact: pair
                    .then(|| closedform::residual_amplitude_b(n, weight))
                    .transpose()?,
                predicted_probability: pair
                    .then(|| predicted_solution_probability(n, weight))
                    .transpose()?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CircuitResult {
        mode,
        layout,
        probabilities,
        solutions,
    })
}

/// `P(y) = (2^n + |b_y|²) / 4^n` for a two-solution instance.
pub fn predicted_solution_probability(n: u32, weight_y: u32) -> Result<f64> {
    let b = closedform::residual_amplitude_b(n, weight_y)?;
    let numerator = (1i64 << n) + b.norm_sqr();
    Ok(numerator as f64 / (2.0 * n as f64).exp2())
}

/// `|i^{w}(1+i^n)|²`: the squared size of the solution-pair correction.
/// Always 0, 2 or 4.
pub fn correction_norm_sqr(n: u32, weight_y: u32) -> Result<i64> {
    Ok(closedform::solution_pair_term(n, weight_y)?.norm_sqr())
}

/// Which solution weight a ratio sweep evaluates at each `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightRule {
    Fixed(u32),
    /// `⌊n/2⌋`.
    Half,
}

impl WeightRule {
    pub fn weight_for(self, n: u32) -> u32 {
        match self {
            Self::Fixed(w) => w,
            Self::Half => n / 2,
        }
    }
}

/// One row of a doubling-ratio sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub n: u32,
    pub weight: u32,
    pub residual_norm_sqr: i64,
    pub probability: f64,
    /// `P(y) · 2^n = 1 + |b_y|² / 2^n`.
    pub ratio: f64,
    /// `|ratio − 2| · 2^n = ||b_y|² − 2^n|`, exact.
    pub deviation_scaled: i64,
    /// `4·2^{⌊n/2⌋} + 4`; the bound on `deviation_scaled`.
    pub bound_scaled: i64,
}

impl RatioRow {
    pub fn deviation(&self) -> f64 {
        self.deviation_scaled as f64 / (self.n as f64).exp2()
    }

    pub fn bound(&self) -> f64 {
        self.bound_scaled as f64 / (self.n as f64).exp2()
    }

    pub fn within_bound(&self) -> bool {
        self.deviation_scaled <= self.bound_scaled
    }
}

pub fn ratio_row(n: u32, weight: u32) -> Result<RatioRow> {
    if n > CLOSED_FORM_MAX_QUBITS {
        return Err(Error::QubitCountOutOfRange {
            n,
            min: 1,
            max: CLOSED_FORM_MAX_QUBITS,
        });
    }
    let b = closedform::residual_amplitude_b(n, weight)?;
    let full = 1i64 << n;
    let residual_norm_sqr = b.norm_sqr();
    let probability = predicted_solution_probability(n, weight)?;
    Ok(RatioRow {
        n,
        weight,
        residual_norm_sqr,
        probability,
        ratio: 1.0 + residual_norm_sqr as f64 / full as f64,
        deviation_scaled: (residual_norm_sqr - full).abs(),
        bound_scaled: 4 * (1i64 << (n / 2)) + 4,
    })
}

/// Ratio rows for each `n`, with the weight chosen by `weight_rule`.
pub fn doubling_ratio_sweep(
    ns: impl IntoIterator<Item = u32>,
    weight_rule: impl Fn(u32) -> u32,
) -> Result<Vec<RatioRow>> {
    ns.into_iter()
        .map(|n| ratio_row(n, weight_rule(n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(weights: &[u64]) -> PartitionInstance {
        PartitionInstance::new(weights.to_vec()).unwrap()
    }

    #[test]
    fn worked_example_probability() {
        let result = run_fast(&inst(&[1, 2, 3])).unwrap();
        assert!((result.probability(0b011) - 26.0 / 64.0).abs() < 1e-12);
        assert!((result.probability(0b100) - 26.0 / 64.0).abs() < 1e-12);
        assert!((result.total_probability() - 1.0).abs() < 1e-12);
        let y = &result.solutions[0];
        assert_eq!(y.state.value(), 0b011);
        assert_eq!(y.residual_exact, Some(GaussianInt::new(3, -3)));
        assert_eq!(y.solved_branch_exact, GaussianInt::new(-1, 0));
        let scaled = y.unsolved_branch * 8.0;
        assert!((scaled - Complex64::new(3.0, -3.0)).norm() < 1e-12);
    }

    #[test]
    fn full_matches_fast_on_worked_example() {
        let instance = inst(&[1, 2, 3]);
        let full = run_full_traced(&instance).unwrap();
        let fast = run_fast(&instance).unwrap();
        assert_eq!(full.result.mode, Mode::Full);
        for (a, b) in full.result.probabilities.iter().zip(&fast.probabilities) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(full.sigma_leakage() < 1e-12);
        let start = full.result.layout.initial_sigma().value() as usize;
        assert!((full.sigma_final[start] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn predicted_probability_examples() {
        assert!((predicted_solution_probability(3, 2).unwrap() - 0.40625).abs() < 1e-15);
        assert!((predicted_solution_probability(3, 1).unwrap() - 0.40625).abs() < 1e-15);
        assert!((predicted_solution_probability(1, 0).unwrap() - 0.5).abs() < 1e-15);
        assert!(predicted_solution_probability(3, 4).is_err());
    }

    #[test]
    fn ratio_examples() {
        let row = ratio_row(3, 2).unwrap();
        assert!((row.ratio - 3.25).abs() < 1e-15);
        assert!(row.within_bound());
        let row = ratio_row(11, 5).unwrap();
        assert!(row.within_bound());
        assert!((row.bound() - 132.0 / 2048.0).abs() < 1e-15);
        let rows = doubling_ratio_sweep(1..=30, |n| WeightRule::Half.weight_for(n)).unwrap();
        assert_eq!(rows.len(), 30);
        assert!(rows.iter().all(RatioRow::within_bound));
        assert!((rows[29].ratio - 2.0).abs() < 1e-4);
        assert!(doubling_ratio_sweep([4], |_| 5).is_err());
    }

    #[test]
    fn correction_sizes() {
        for n in 1..=12 {
            for w in 0..=n {
                let expected = match n % 4 {
                    0 => 4,
                    2 => 0,
                    _ => 2,
                };
                assert_eq!(correction_norm_sqr(n, w), Ok(expected));
            }
        }
    }

    #[test]
    fn rejects_oversized_and_odd_instances() {
        assert_eq!(run_fast(&inst(&[1, 2])), Err(Error::OddTotal { total: 3 }));
        assert_eq!(
            run_full(&inst(&[1, 2])).unwrap_err(),
            Error::OddTotal { total: 3 }
        );
        let big = inst(&[1; 20]);
        assert!(matches!(
            run_full(&big),
            Err(Error::RegisterTooLarge { .. })
        ));
        assert!(run_fast(&inst(&[1; 26])).is_err());
    }
}
