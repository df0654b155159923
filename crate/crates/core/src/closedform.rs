//! Exact amplitudes of `H^n S^n H^n |0…0⟩` and of the residual solution
//! amplitude left by the controlled Hadamard of the doubling circuit.
//!
//! Up to the `1/2^n` normalization, the amplitude on `|z⟩` is
//!
//! ```text
//! a_z = Σ_x i^{w(x)} (−1)^{x·z}
//! ```
//!
//! which depends only on `w(z)`:
//!
//! ```text
//! n = 2m     a_z = (−1)^{w(z)} i^{m+w(z)} 2^m
//! n = 2m+1   a_z = (−1)^{w(z)} i^{m+w(z)} 2^m (1+i)
//! ```
//!
//! Every value here is a [`GaussianInt`]. [`brute_force_sum`] evaluates the
//! defining sum term by term and is the oracle the closed forms are checked
//! against.

use rayon::prelude::*;

use crate::bitmath::{self, hamming_weight, i_pow, parity, sign_pow, BitString, GaussianInt};
use crate::error::{Error, Result};

/// Largest `n` accepted by the `O(2^n)` summation oracles.
pub const BRUTE_FORCE_MAX_QUBITS: u32 = 24;

/// Largest `n` accepted by the closed forms; `2^n` must fit an `i64`.
pub const CLOSED_FORM_MAX_QUBITS: u32 = 60;

const PARALLEL_CHUNK: u64 = 1 << 16;

/// An amplitude scaled up by `2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnnormalizedAmplitude {
    pub value: GaussianInt,
    pub n: u32,
}

impl UnnormalizedAmplitude {
    pub fn normalization(&self) -> f64 {
        (self.n as f64).exp2()
    }

    pub fn normalized(&self) -> num_complex::Complex64 {
        self.value.scaled(self.normalization())
    }

    pub fn probability(&self) -> f64 {
        self.value.norm_sqr() as f64 / (2.0 * self.n as f64).exp2()
    }
}

/// Exponent `k` such that `S^{⊗n}|x⟩ = i^k |x⟩`.
pub fn s_phase_exponent(x: BitString) -> u32 {
    hamming_weight(x)
}

/// The phase `i^{w(x)}` applied by `S^{⊗n}`.
pub fn s_phase(x: BitString) -> GaussianInt {
    i_pow(s_phase_exponent(x) as i64)
}

/// `Σ_{x=lo}^{hi−1} i^{w(x)} (−1)^{x·z}`, one term per `x`.
///
/// Terms are tallied by their power of `i` and combined at the end, which
/// is exact and independent of reduction order.
fn range_sum(lo: u64, hi: u64, z: u64) -> GaussianInt {
    let tally = |lo: u64, hi: u64| {
        let mut counts = [0i64; 4];
        for x in lo..hi {
            let exponent = x.count_ones() + 2 * u32::from(parity(x & z));
            counts[(exponent & 3) as usize] += 1;
        }
        counts
    };
    let counts = if hi - lo <= PARALLEL_CHUNK {
        tally(lo, hi)
    } else {
        let chunks = (hi - lo).div_ceil(PARALLEL_CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = lo + c * PARALLEL_CHUNK;
                tally(start, (start + PARALLEL_CHUNK).min(hi))
            })
            .reduce(
                || [0; 4],
                |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]],
            )
    };
    GaussianInt::new(counts[0] - counts[2], counts[1] - counts[3])
}

fn check_brute_force_n(n: u32, min: u32) -> Result<()> {
    if !(min..=BRUTE_FORCE_MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCountOutOfRange {
            n,
            min,
            max: BRUTE_FORCE_MAX_QUBITS,
        });
    }
    Ok(())
}

fn check_width(z: BitString, n: u32) -> Result<()> {
    if z.width() != n {
        return Err(Error::WidthMismatch {
            left: n,
            right: z.width(),
        });
    }
    Ok(())
}

fn check_weight(n: u32, weight: u32) -> Result<()> {
    if !(1..=CLOSED_FORM_MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCountOutOfRange {
            n,
            min: 1,
            max: CLOSED_FORM_MAX_QUBITS,
        });
    }
    if weight > n {
        return Err(Error::WeightOutOfRange { weight, n });
    }
    Ok(())
}

/// `Σ_{x=0}^{2^n−1} i^{w(x)} (−1)^{x·z}` by direct summation. Cost `2^n`.
pub fn brute_force_sum(n: u32, z: BitString) -> Result<GaussianInt> {
    check_brute_force_n(n, 1)?;
    check_width(z, n)?;
    Ok(range_sum(0, 1 << n, z.value()))
}

/// The closed form of the full sum for any `z` with `w(z) = weight`.
pub fn closed_form_sum(n: u32, weight: u32) -> Result<GaussianInt> {
    check_weight(n, weight)?;
    let m = n / 2;
    let w = i64::from(weight);
    let base = i_pow(i64::from(m) + w) * (sign_pow(weight.into()) << m);
    Ok(if n.is_multiple_of(2) {
        base
    } else {
        base * GaussianInt::new(1, 1)
    })
}

fn split_odd(n_odd: u32) -> Result<u32> {
    if n_odd.is_multiple_of(2) {
        return Err(Error::NotOdd(n_odd));
    }
    Ok(n_odd / 2)
}

/// Upper half of the sum for odd `n = 2m+1`: only `x` with `x_{2m} = 1`.
pub fn upper_half_sum(n_odd: u32, z: BitString) -> Result<GaussianInt> {
    let m = split_odd(n_odd)?;
    check_brute_force_n(n_odd, 1)?;
    check_width(z, n_odd)?;
    Ok(range_sum(1 << (2 * m), 1 << (2 * m + 1), z.value()))
}

/// `i (−1)^{z_{2m}}` times the lower half `Σ_{x<2^{2m}} i^{w(x)} (−1)^{x·z_{-1}}`,
/// both by direct summation. For `m = 0` the lower half is the single term 1.
pub fn upper_half_via_lower(n_odd: u32, z: BitString) -> Result<GaussianInt> {
    let m = split_odd(n_odd)?;
    check_brute_force_n(n_odd, 1)?;
    check_width(z, n_odd)?;
    let low = bitmath::low_bits(z, 1)?;
    let lower = range_sum(0, 1 << (2 * m), low.value());
    Ok(lower.mul_i() * sign_pow(u64::from(z.bit(2 * m))))
}

/// Contribution of the two solution states `y`, `ȳ` to the full sum at
/// `z = y`: `i^{w}(−1)^{w} + i^{n−w}`.
pub fn solution_pair_term(n: u32, weight_y: u32) -> Result<GaussianInt> {
    check_weight(n, weight_y)?;
    let w = i64::from(weight_y);
    Ok(i_pow(w) * sign_pow(weight_y.into()) + i_pow(i64::from(n) - w))
}

/// The same contribution in factored form: `+i^{w}(1+i^n)` for even `w`,
/// `−i^{w}(1+i^n)` for odd `w`.
pub fn solution_pair_term_factored(n: u32, weight_y: u32) -> Result<GaussianInt> {
    check_weight(n, weight_y)?;
    let factor = i_pow(weight_y.into()) * (GaussianInt::ONE + i_pow(n.into()));
    Ok(factor * sign_pow(weight_y.into()))
}

/// `b_y = Σ_{x∉{y,ȳ}} i^{w(x)} (−1)^{x·y}` for a solution `y` of weight
/// `weight_y`, as the full closed-form sum minus the solution pair.
pub fn residual_amplitude_b(n: u32, weight_y: u32) -> Result<GaussianInt> {
    let b = closed_form_sum(n, weight_y)? - solution_pair_term(n, weight_y)?;
    debug_assert_eq!(Ok(b), residual_amplitude_b_by_parity(n, weight_y));
    Ok(b)
}

/// `b_y` written out per parity of `w = w(y)`:
///
/// ```text
/// w even   b_y = a(n, w) − i^{w}(1+i^n)
/// w odd    b_y = a(n, w) + i^{w}(1+i^n)
/// ```
///
/// where `a(n, w)` is the even-`n` or odd-`n` closed form.
pub fn residual_amplitude_b_by_parity(n: u32, weight_y: u32) -> Result<GaussianInt> {
    check_weight(n, weight_y)?;
    let m = n / 2;
    let w = i64::from(weight_y);
    let mut full = i_pow(i64::from(m) + w) * (sign_pow(weight_y.into()) << m);
    if n % 2 == 1 {
        full = full + full.mul_i();
    }
    let correction = i_pow(w) * (GaussianInt::ONE + i_pow(n.into()));
    Ok(if weight_y.is_multiple_of(2) {
        full - correction
    } else {
        full + correction
    })
}

/// `b_y` by direct summation over `x ∉ {y, ȳ}`. Cost `2^n`.
pub fn brute_force_residual(n: u32, y: BitString) -> Result<GaussianInt> {
    check_brute_force_n(n, 1)?;
    check_width(y, n)?;
    let full = range_sum(0, 1 << n, y.value());
    let excluded = |x: BitString| s_phase(x) * sign_pow(parity(x.value() & y.value()).into());
    // n ≥ 1, so y and ȳ are distinct.
    Ok(full - excluded(y) - excluded(y.complement()))
}

/// One row of the amplitude table for `|z⟩`.
pub fn table_row(n: u32, z: BitString) -> Result<UnnormalizedAmplitude> {
    check_width(z, n)?;
    Ok(UnnormalizedAmplitude {
        value: closed_form_sum(n, hamming_weight(z))?,
        n,
    })
}

/// All `2^n` sums at once via an exact integer Walsh–Hadamard transform of
/// the vector `x ↦ i^{w(x)}`. Cost `n·2^n`; independent of both the closed
/// form and the floating-point simulator.
pub fn exact_walsh_sums(n: u32) -> Result<Vec<GaussianInt>> {
    check_brute_force_n(n, 1)?;
    let mut data: Vec<GaussianInt> = (0..1u64 << n)
        .map(|x| i_pow(x.count_ones().into()))
        .collect();
    let mut half = 1;
    while half < data.len() {
        for block in data.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        half *= 2;
    }
    Ok(data)
}

/// Exact test of `|√a − √b| ≤ d` for non-negative integers `a`, `b`, `d`.
pub fn sqrt_gap_at_most(a: i64, b: i64, d: i64) -> bool {
    // √a ≤ √b + d  ⇔  a − b − d² ≤ 2d√b
    let one_side = |a: i128, b: i128| {
        let d = i128::from(d);
        let lhs = a - b - d * d;
        lhs <= 0 || lhs * lhs <= 4 * d * d * b
    };
    one_side(a.into(), b.into()) && one_side(b.into(), a.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(value: u64, width: u32) -> BitString {
        BitString::new(value, width).unwrap()
    }

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    /// Reference sum built from the public bitmath primitives only.
    fn naive_sum(n: u32, z: BitString, keep: impl Fn(u64) -> bool) -> GaussianInt {
        BitString::iter_all(n)
            .unwrap()
            .filter(|x| keep(x.value()))
            .map(|x| {
                let sign = if bitmath::dot_mod2(z, x).unwrap() == 1 {
                    -1
                } else {
                    1
                };
                i_pow(hamming_weight(x).into()) * sign
            })
            .sum()
    }

    #[test]
    fn s_phase_examples() {
        assert_eq!(s_phase_exponent(bs(0, 3)), 0);
        assert_eq!(s_phase(bs(0, 3)), g(1, 0));
        assert_eq!(s_phase_exponent(bs(0b11, 2)), 2);
        assert_eq!(s_phase(bs(0b11, 2)), g(-1, 0));
        assert_eq!(s_phase(bs(0b101, 3)), g(-1, 0));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_sum(1, bs(0, 1)), Ok(g(1, 1)));
        assert_eq!(brute_force_sum(2, bs(0, 2)), Ok(g(0, 2)));
        assert_eq!(brute_force_sum(3, bs(0, 3)), Ok(g(-2, 2)));
        assert!(brute_force_sum(0, bs(0, 0)).is_err());
        assert!(brute_force_sum(25, bs(0, 25)).is_err());
        assert!(brute_force_sum(3, bs(0, 4)).is_err());
    }

    #[test]
    fn brute_force_matches_naive_reference() {
        for n in 1..=8 {
            for z in BitString::iter_all(n).unwrap() {
                assert_eq!(brute_force_sum(n, z).unwrap(), naive_sum(n, z, |_| true));
            }
        }
    }

    #[test]
    fn parallel_reduction_matches_serial() {
        let n = 18;
        let z = bs(0b10_1100_0111_0001_0110, n);
        assert_eq!(brute_force_sum(n, z).unwrap(), naive_sum(n, z, |_| true));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_sum(4, 0), Ok(g(-4, 0)));
        assert_eq!(closed_form_sum(4, 1), Ok(g(0, 4)));
        assert_eq!(closed_form_sum(3, 2), Ok(g(2, -2)));
        assert_eq!(closed_form_sum(2, 0), Ok(g(0, 2)));
        assert_eq!(
            closed_form_sum(3, 4),
            Err(Error::WeightOutOfRange { weight: 4, n: 3 })
        );
        assert!(closed_form_sum(0, 0).is_err());
    }

    #[test]
    fn half_range_examples() {
        assert_eq!(upper_half_sum(1, bs(0, 1)), Ok(g(0, 1)));
        assert_eq!(upper_half_sum(1, bs(1, 1)), Ok(g(0, -1)));
        assert_eq!(upper_half_sum(3, bs(0, 3)), Ok(g(-2, 0)));
        assert_eq!(upper_half_via_lower(3, bs(0, 3)), Ok(g(-2, 0)));
        assert_eq!(upper_half_sum(4, bs(0, 4)), Err(Error::NotOdd(4)));
    }

    #[test]
    fn upper_half_sum_matches_naive() {
        for n in [1, 3, 5, 7] {
            let top = 1u64 << (n - 1);
            for z in BitString::iter_all(n).unwrap() {
                assert_eq!(upper_half_sum(n, z).unwrap(), naive_sum(n, z, |x| x >= top));
            }
        }
    }

    #[test]
    fn residual_examples() {
        assert_eq!(residual_amplitude_b(3, 2), Ok(g(3, -3)));
        assert_eq!(residual_amplitude_b(3, 1), Ok(g(3, 3)));
        assert_eq!(residual_amplitude_b(1, 0), Ok(g(0, 0)));
        assert_eq!(residual_amplitude_b(4, 1), Ok(g(0, 6)));
        assert!(residual_amplitude_b(2, 3).is_err());
    }

    #[test]
    fn residual_matches_naive_exclusion() {
        for n in 1..=8 {
            for y in BitString::iter_all(n).unwrap() {
                let ybar = y.complement().value();
                let expected = naive_sum(n, y, |x| x != y.value() && x != ybar);
                assert_eq!(brute_force_residual(n, y).unwrap(), expected);
                assert_eq!(
                    residual_amplitude_b(n, hamming_weight(y)).unwrap(),
                    expected,
                    "n={n} y={y}"
                );
            }
        }
    }

    #[test]
    fn table_rows_for_three_and_four_qubits() {
        let three = [
            "-2+2i", "2+2i", "2+2i", "2-2i", "2+2i", "2-2i", "2-2i", "-2-2i",
        ];
        for (z, text) in three.iter().enumerate() {
            let row = table_row(3, bs(z as u64, 3)).unwrap();
            assert_eq!(row.value, text.parse().unwrap());
        }
        assert_eq!(table_row(4, bs(0b1111, 4)).unwrap().value, g(-4, 0));
        assert_eq!(table_row(4, bs(0b0111, 4)).unwrap().value, g(0, -4));
        assert_eq!(table_row(3, bs(0b111, 3)).unwrap().value, g(-2, -2));
        assert!(table_row(3, bs(0, 4)).is_err());
    }

    #[test]
    fn normalized_row_has_probability_two_to_minus_n() {
        let row = table_row(5, bs(0b10110, 5)).unwrap();
        assert!((row.probability() - 1.0 / 32.0).abs() < 1e-15);
        let amp = row.normalized();
        assert!((amp.norm_sqr() - 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn exact_walsh_matches_brute_force() {
        for n in 1..=9 {
            let sums = exact_walsh_sums(n).unwrap();
            for z in BitString::iter_all(n).unwrap() {
                assert_eq!(sums[z.value() as usize], brute_force_sum(n, z).unwrap());
            }
        }
    }

    #[test]
    fn sqrt_gap_is_exact() {
        assert!(sqrt_gap_at_most(16, 4, 2));
        assert!(!sqrt_gap_at_most(16, 3, 2));
        assert!(sqrt_gap_at_most(18, 8, 2));
        assert!(sqrt_gap_at_most(0, 4, 2));
        assert!(!sqrt_gap_at_most(0, 5, 2));
    }
}
