//! Cross-checks between the closed forms, the brute-force oracles and the
//! statevector simulator for every `n ≤ max_n`.
//!
//! Exhaustive checks over all `z` cost `4^n`; above [`EXHAUSTIVE_MAX_QUBITS`]
//! the literal sums are evaluated for one representative `z` per weight
//! (low-aligned and high-aligned runs of ones) and every `z` is covered by
//! the exact integer Walsh–Hadamard route instead.

use std::fmt;

use hsh_core::bitmath::{hamming_weight, BitString, GaussianInt};
use hsh_core::closedform::{self, brute_force_residual, brute_force_sum};
use hsh_core::statevector::{hsh_state, AMPLITUDE_TOLERANCE, NORM_TOLERANCE};
use hsh_core::Result;

pub const MAX_N: u32 = 16;
pub const EXHAUSTIVE_MAX_QUBITS: u32 = 12;
pub const HALF_RANGE_EXHAUSTIVE_MAX_QUBITS: u32 = 13;

/// The implementations under test. Swapping one out lets the suite be
/// pointed at a deliberately broken formula.
#[derive(Clone, Copy)]
pub struct Sources {
    pub closed_form: fn(u32, u32) -> Result<GaussianInt>,
    pub residual: fn(u32, u32) -> Result<GaussianInt>,
}

impl Default for Sources {
    fn default() -> Self {
        Self {
            closed_form: closedform::closed_form_sum,
            residual: closedform::residual_amplitude_b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub max_n: u32,
    pub cases: u64,
    pub counterexample: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

struct Check {
    name: &'static str,
    max_n: u32,
    cases: u64,
    counterexample: Option<String>,
}

impl Check {
    fn new(name: &'static str, max_n: u32) -> Self {
        Self {
            name,
            max_n,
            cases: 0,
            counterexample: None,
        }
    }

    /// Records one case; keeps only the first failure.
    fn expect(&mut self, ok: bool, describe: impl FnOnce() -> String) -> bool {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
        ok
    }

    fn expect_eq<T: PartialEq + fmt::Display>(
        &mut self,
        got: Result<T>,
        want: Result<T>,
        context: impl fmt::Display,
    ) -> bool {
        let ok = matches!((&got, &want), (Ok(a), Ok(b)) if a == b);
        self.expect(ok, || {
            format!("{context}: got {}, expected {}", show(&got), show(&want))
        })
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            name: self.name,
            max_n: self.max_n,
            cases: self.cases,
            counterexample: self.counterexample,
        }
    }
}

fn show<T: fmt::Display>(value: &Result<T>) -> String {
    match value {
        Ok(v) => v.to_string(),
        Err(e) => format!("error ({e})"),
    }
}

/// `z = 0…01…1` and `z = 1…10…0` for every weight.
fn representatives(n: u32) -> Vec<BitString> {
    let mut reps: Vec<BitString> = (0..=n)
        .flat_map(|w| {
            let ones = (1u64 << w) - 1;
            [ones, ones << (n - w)]
        })
        .map(|v| BitString::new(v, n).expect("fits"))
        .collect();
    reps.sort();
    reps.dedup();
    reps
}

fn cases_for(n: u32, exhaustive_max: u32) -> Vec<BitString> {
    if n <= exhaustive_max {
        BitString::iter_all(n).expect("width").collect()
    } else {
        representatives(n)
    }
}

fn oracle_equivalence(max_n: u32, src: &Sources) -> CheckReport {
    let mut check = Check::new("oracle_equivalence", max_n);
    'outer: for n in 1..=max_n {
        for z in cases_for(n, EXHAUSTIVE_MAX_QUBITS) {
            let closed = (src.closed_form)(n, hamming_weight(z));
            if !check.expect_eq(closed, brute_force_sum(n, z), format_args!("n={n} z={z}")) {
                break 'outer;
            }
        }
        if n > EXHAUSTIVE_MAX_QUBITS {
            let walsh = closedform::exact_walsh_sums(n);
            for z in BitString::iter_all(n).expect("width") {
                let exact = walsh
                    .as_ref()
                    .map(|w| w[z.value() as usize])
                    .map_err(Clone::clone);
                let closed = (src.closed_form)(n, hamming_weight(z));
                if !check.expect_eq(closed, exact, format_args!("n={n} z={z} (Walsh route)")) {
                    break 'outer;
                }
            }
        }
    }
    check.finish()
}

fn half_range_identity(max_n: u32) -> CheckReport {
    let mut check = Check::new("half_range_identity", max_n);
    'outer: for n in (1..=max_n).step_by(2) {
        for z in cases_for(n, HALF_RANGE_EXHAUSTIVE_MAX_QUBITS) {
            let lhs = closedform::upper_half_sum(n, z);
            let rhs = closedform::upper_half_via_lower(n, z);
            if !check.expect_eq(lhs, rhs, format_args!("n={n} z={z}")) {
                break 'outer;
            }
        }
    }
    check.finish()
}

fn magnitude(max_n: u32, src: &Sources) -> CheckReport {
    let mut check = Check::new("magnitude", max_n);
    for n in 1..=max_n {
        for w in 0..=n {
            let value = (src.closed_form)(n, w);
            let norm = value.as_ref().map(|v| v.norm_sqr()).map_err(Clone::clone);
            check.expect_eq(norm, Ok(1i64 << n), format_args!("|a(n={n}, w={w})|²"));
        }
    }
    check.finish()
}

fn residual_consistency(max_n: u32, src: &Sources) -> CheckReport {
    let mut check = Check::new("residual_consistency", max_n);
    'outer: for n in 1..=max_n {
        for y in cases_for(n, EXHAUSTIVE_MAX_QUBITS) {
            let b = (src.residual)(n, hamming_weight(y));
            if !check.expect_eq(
                b,
                brute_force_residual(n, y),
                format_args!("b_y n={n} y={y}"),
            ) {
                break 'outer;
            }
        }
    }
    check.finish()
}

fn residual_case_split(max_n: u32, src: &Sources) -> CheckReport {
    let mut check = Check::new("residual_case_split", max_n);
    for n in 1..=max_n {
        for w in 0..=n {
            check.expect_eq(
                closedform::solution_pair_term(n, w),
                closedform::solution_pair_term_factored(n, w),
                format_args!("pair term n={n} w={w}"),
            );
            check.expect_eq(
                (src.residual)(n, w),
                closedform::residual_amplitude_b_by_parity(n, w),
                format_args!("b parity branches n={n} w={w}"),
            );
        }
    }
    check.finish()
}

fn residual_gap(max_n: u32, src: &Sources) -> CheckReport {
    let mut check = Check::new("residual_gap", max_n);
    for n in 1..=max_n {
        for w in 0..=n {
            let (a, b) = match ((src.closed_form)(n, w), (src.residual)(n, w)) {
                (Ok(a), Ok(b)) => (a, b),
                (a, b) => {
                    check.expect(false, || {
                        format!("n={n} w={w}: {} / {}", show(&a), show(&b))
                    });
                    continue;
                }
            };
            check.expect(
                closedform::sqrt_gap_at_most(a.norm_sqr(), b.norm_sqr(), 2),
                || format!("||b|-|a|| > 2 at n={n} w={w}: a={a} b={b}"),
            );
        }
    }
    check.finish()
}

fn hsh_oracle(max_n: u32, src: &Sources) -> CheckReport {
    let mut check = Check::new("hsh_oracle", max_n);
    'outer: for n in 1..=max_n {
        let state = match hsh_state(n) {
            Ok(s) => s,
            Err(e) => {
                check.expect(false, || format!("n={n}: {e}"));
                break;
            }
        };
        let norm = state.norm_sqr();
        if !check.expect((norm - 1.0).abs() <= NORM_TOLERANCE, || {
            format!("n={n}: norm {norm}")
        }) {
            break;
        }
        let scale = (n as f64).exp2();
        for (z, amp) in state.amplitudes().iter().enumerate() {
            let weight = (z as u64).count_ones();
            let ok = match (src.closed_form)(n, weight) {
                Ok(exact) => (amp - exact.scaled(scale)).norm() <= AMPLITUDE_TOLERANCE,
                Err(_) => false,
            };
            if !check.expect(ok, || format!("n={n} z={z}: simulated {amp}")) {
                break 'outer;
            }
        }
    }
    check.finish()
}

/// Runs every check; each stops at its first counterexample.
pub fn run_checks(max_n: u32, sources: &Sources) -> Vec<CheckReport> {
    vec![
        oracle_equivalence(max_n, sources),
        half_range_identity(max_n),
        magnitude(max_n, sources),
        residual_consistency(max_n, sources),
        residual_case_split(max_n, sources),
        residual_gap(max_n, sources),
        hsh_oracle(max_n, sources),
    ]
}
