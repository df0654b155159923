//! Dense statevector with the handful of kernels the doubling circuit needs:
//! Walsh–Hadamard on a qubit subset (optionally restricted to a control
//! subspace), the diagonal `S` phase, basis permutations and marginal
//! probabilities.
//!
//! Hadamard kernels run unnormalized `(a+b, a−b)` butterflies and apply a
//! single `2^{−k/2}` scale per call. Qubits below [`BLOCK_QUBITS`] are
//! processed together inside cache-sized blocks; the remaining qubits are
//! handled two at a time with radix-4 butterflies.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bitmath::BitString;
use crate::error::{Error, Result};

/// Largest register the simulator will allocate (`2^28` amplitudes, 4 GiB).
pub const MAX_QUBITS: u32 = 28;

/// Amplitude tolerance used when comparing simulated and exact values.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-10;

/// Tolerance for norms and probability sums.
pub const NORM_TOLERANCE: f64 = 1e-12;

const BLOCK_QUBITS: u32 = 12;

/// A bijection on basis indices, applied by [`StateVector::permute`].
pub trait BasisMap: Sync {
    fn map_index(&self, index: usize) -> usize;
}

impl<F> BasisMap for F
where
    F: Fn(usize) -> usize + Sync,
{
    fn map_index(&self, index: usize) -> usize {
        self(index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    qubits: u32,
}

impl StateVector {
    /// `|x⟩` on `q` qubits.
    pub fn init_basis(q: u32, x: BitString) -> Result<Self> {
        check_qubits(q)?;
        if x.width() != q {
            return Err(Error::WidthMismatch {
                left: q,
                right: x.width(),
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << q];
        amplitudes[x.value() as usize] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            qubits: q,
        })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::LengthMismatch {
                len,
                qubits: len.max(1).ilog2(),
            });
        }
        let qubits = len.ilog2();
        check_qubits(qubits)?;
        Ok(Self { amplitudes, qubits })
    }

    pub fn qubit_count(&self) -> u32 {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.par_iter().map(|a| a.norm_sqr()).sum()
    }

    /// `H` on every qubit in `targets`.
    pub fn hadamard(&mut self, targets: &[usize]) -> Result<()> {
        let mask = self.target_mask(targets)?;
        walsh_hadamard(&mut self.amplitudes, mask, |_| true);
        Ok(())
    }

    /// `H^{⊗k}` on `targets`, applied only where qubit `control` equals
    /// `control_value`; identity on the rest of the space.
    pub fn controlled_hadamard(
        &mut self,
        targets: &[usize],
        control: usize,
        control_value: bool,
    ) -> Result<()> {
        let mask = self.target_mask(targets)?;
        self.check_qubit(control)?;
        if mask >> control & 1 == 1 {
            return Err(Error::ControlIsTarget(control));
        }
        let want = usize::from(control_value);
        walsh_hadamard(&mut self.amplitudes, mask, move |i| {
            (i >> control) & 1 == want
        });
        Ok(())
    }

    /// Multiplies the amplitude of `|x⟩` by `i^k`, where `k` counts the
    /// target qubits set in `x`.
    pub fn s_phase(&mut self, targets: &[usize]) -> Result<()> {
        let mask = self.target_mask(targets)? as usize;
        self.amplitudes
            .par_iter_mut()
            .enumerate()
            .for_each(|(x, amp)| *amp = mul_i_pow(*amp, (x & mask).count_ones()));
        Ok(())
    }

    /// Moves the amplitude of `|x⟩` to `|map(x)⟩`.
    ///
    /// Indices mapped outside the register are always rejected. Collisions
    /// (a non-bijective map) are detected in builds with debug assertions;
    /// release builds trust the caller.
    pub fn permute(&mut self, map: &impl BasisMap) -> Result<()> {
        let len = self.amplitudes.len();
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        #[cfg(debug_assertions)]
        let mut hit = vec![false; len];
        for (x, amp) in self.amplitudes.iter().enumerate() {
            let y = map.map_index(x);
            if y >= len {
                return Err(Error::QubitOutOfRange {
                    qubit: y,
                    qubits: self.qubits,
                });
            }
            #[cfg(debug_assertions)]
            {
                if std::mem::replace(&mut hit[y], true) {
                    return Err(Error::NotBijective(y));
                }
            }
            out[y] = *amp;
        }
        self.amplitudes = out;
        Ok(())
    }

    /// Probability of each outcome of the `kept` qubits, summed over the
    /// rest. Entry `k` has bit `j` equal to the state of `kept[j]`.
    pub fn probabilities_marginal(&self, kept: &[usize]) -> Result<Vec<f64>> {
        self.target_mask(kept)?;
        let mut table = vec![0.0; 1 << kept.len()];
        let contiguous = kept.iter().enumerate().all(|(j, &q)| j == q);
        if contiguous {
            let width = 1usize << kept.len();
            for chunk in self.amplitudes.chunks(width) {
                for (slot, amp) in table.iter_mut().zip(chunk) {
                    *slot += amp.norm_sqr();
                }
            }
        } else {
            for (x, amp) in self.amplitudes.iter().enumerate() {
                let key = kept
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (j, &q)| acc | ((x >> q) & 1) << j);
                table[key] += amp.norm_sqr();
            }
        }
        Ok(table)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.qubits as usize {
            return Err(Error::QubitOutOfRange {
                qubit,
                qubits: self.qubits,
            });
        }
        Ok(())
    }

    fn target_mask(&self, targets: &[usize]) -> Result<u64> {
        let mut mask = 0u64;
        for &t in targets {
            self.check_qubit(t)?;
            if mask >> t & 1 == 1 {
                return Err(Error::DuplicateQubit(t));
            }
            mask |= 1 << t;
        }
        Ok(mask)
    }
}

/// `H^{⊗n}|0…0⟩ → S^{⊗n} → H^{⊗n}`: the state whose amplitudes are the
/// closed-form sums divided by `2^n`.
pub fn hsh_state(n: u32) -> Result<StateVector> {
    let mut state = StateVector::init_basis(n, BitString::zero(n)?)?;
    let all: Vec<usize> = (0..n as usize).collect();
    state.hadamard(&all)?;
    state.s_phase(&all)?;
    state.hadamard(&all)?;
    Ok(state)
}

/// Unnormalized fast Walsh–Hadamard transform over the qubits in `mask`,
/// touching only pairs whose base index is `active`.
fn walsh_hadamard_unscaled<F>(amps: &mut [Complex64], mask: u64, active: &F)
where
    F: Fn(usize) -> bool + Sync,
{
    let len = amps.len();
    let block = len.min(1 << BLOCK_QUBITS);
    let low: Vec<usize> = (0..block.trailing_zeros() as usize)
        .filter(|&t| mask >> t & 1 == 1)
        .collect();
    let high: Vec<usize> = (block.trailing_zeros() as usize..len.trailing_zeros() as usize)
        .filter(|&t| mask >> t & 1 == 1)
        .collect();

    for pair in high.chunks(2) {
        match *pair {
            [t1, t2] => radix4_pass(amps, t1, t2, active),
            [t] => radix2_pass(amps, t, active),
            _ => unreachable!(),
        }
    }

    if !low.is_empty() {
        amps.par_chunks_mut(block)
            .enumerate()
            .for_each(|(b, chunk)| {
                let base = b * block;
                for &t in &low {
                    let stride = 1 << t;
                    for group in (0..chunk.len()).step_by(2 * stride) {
                        for i in group..group + stride {
                            if active(base + i) {
                                let (a, c) = (chunk[i], chunk[i + stride]);
                                chunk[i] = a + c;
                                chunk[i + stride] = a - c;
                            }
                        }
                    }
                }
            });
    }
}

fn walsh_hadamard<F>(amps: &mut [Complex64], mask: u64, active: F)
where
    F: Fn(usize) -> bool + Sync,
{
    if mask == 0 {
        return;
    }
    walsh_hadamard_unscaled(amps, mask, &active);
    let scale = (-(mask.count_ones() as f64) / 2.0).exp2();
    amps.par_iter_mut().enumerate().for_each(|(i, a)| {
        if active(i) {
            *a *= scale;
        }
    });
}

fn radix2_pass<F>(amps: &mut [Complex64], t: usize, active: &F)
where
    F: Fn(usize) -> bool + Sync,
{
    let stride = 1 << t;
    amps.par_chunks_mut(2 * stride)
        .enumerate()
        .for_each(|(c, chunk)| {
            let base = c * 2 * stride;
            let (lo, hi) = chunk.split_at_mut(stride);
            for (i, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if active(base + i) {
                    let (x, y) = (*a, *b);
                    *a = x + y;
                    *b = x - y;
                }
            }
        });
}

/// `H ⊗ H` on qubits `t1 < t2` in one sweep.
fn radix4_pass<F>(amps: &mut [Complex64], t1: usize, t2: usize, active: &F)
where
    F: Fn(usize) -> bool + Sync,
{
    let (s1, s2) = (1usize << t1, 1usize << t2);
    amps.par_chunks_mut(2 * s2)
        .enumerate()
        .for_each(|(c, chunk)| {
            let base = c * 2 * s2;
            let (lo, hi) = chunk.split_at_mut(s2);
            for (j, (lo_blk, hi_blk)) in
                lo.chunks_mut(2 * s1).zip(hi.chunks_mut(2 * s1)).enumerate()
            {
                let (q0, q1) = lo_blk.split_at_mut(s1);
                let (q2, q3) = hi_blk.split_at_mut(s1);
                let offset = base + j * 2 * s1;
                for (i, (((a0, a1), a2), a3)) in q0
                    .iter_mut()
                    .zip(q1.iter_mut())
                    .zip(q2.iter_mut())
                    .zip(q3.iter_mut())
                    .enumerate()
                {
                    if !active(offset + i) {
                        continue;
                    }
                    let (b0, b1) = (*a0 + *a1, *a0 - *a1);
                    let (b2, b3) = (*a2 + *a3, *a2 - *a3);
                    *a0 = b0 + b2;
                    *a1 = b1 + b3;
                    *a2 = b0 - b2;
                    *a3 = b1 - b3;
                }
            }
        });
}

/// `a · i^k`, exact (swaps and sign flips only).
#[inline]
fn mul_i_pow(a: Complex64, k: u32) -> Complex64 {
    match k & 3 {
        0 => a,
        1 => Complex64::new(-a.im, a.re),
        2 => -a,
        _ => Complex64::new(a.im, -a.re),
    }
}

fn check_qubits(q: u32) -> Result<()> {
    if q > MAX_QUBITS {
        return Err(Error::RegisterTooLarge {
            qubits: q,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis(q: u32, x: u64) -> StateVector {
        StateVector::init_basis(q, BitString::new(x, q).unwrap()).unwrap()
    }

    fn assert_close(a: &[Complex64], b: &[Complex64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            assert!((x - y).norm() <= tol, "index {i}: {x} vs {y}");
        }
    }

    #[test]
    fn init_basis_examples() {
        assert_eq!(
            basis(2, 0).amplitudes(),
            &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]
        );
        assert_eq!(basis(1, 1).amplitudes(), &[c(0., 0.), c(1., 0.)]);
        let s = basis(3, 5);
        for (i, a) in s.amplitudes().iter().enumerate() {
            assert_eq!(*a, if i == 5 { c(1., 0.) } else { c(0., 0.) });
        }
        assert!(StateVector::init_basis(3, BitString::new(1, 2).unwrap()).is_err());
    }

    #[test]
    fn hadamard_on_zero_is_uniform() {
        for n in [1u32, 5, 13, 15] {
            let mut s = basis(n, 0);
            s.hadamard(&(0..n as usize).collect::<Vec<_>>()).unwrap();
            let expected = (n as f64 / -2.0).exp2();
            for a in s.amplitudes() {
                assert!((a - c(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn hadamard_of_one() {
        let mut s = basis(1, 1);
        s.hadamard(&[0]).unwrap();
        assert_close(
            s.amplitudes(),
            &[c(FRAC_1_SQRT_2, 0.), c(-FRAC_1_SQRT_2, 0.)],
            1e-15,
        );
    }

    #[test]
    fn hadamard_twice_is_identity() {
        let amps: Vec<Complex64> = (0..1 << 14)
            .map(|i| c((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<_> = amps.into_iter().map(|a| a / norm).collect();
        let mut s = StateVector::from_amplitudes(amps.clone()).unwrap();
        let targets = [0, 3, 4, 11, 12, 13];
        s.hadamard(&targets).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        s.hadamard(&targets).unwrap();
        assert_close(s.amplitudes(), &amps, 1e-12);
    }

    #[test]
    fn s_phase_examples() {
        let mut zero = basis(3, 0);
        zero.s_phase(&[0, 1, 2]).unwrap();
        assert_eq!(zero, basis(3, 0));

        let mut uniform = basis(2, 0);
        uniform.hadamard(&[0, 1]).unwrap();
        uniform.s_phase(&[0, 1]).unwrap();
        assert_close(
            uniform.amplitudes(),
            &[c(0.5, 0.), c(0., 0.5), c(0., 0.5), c(-0.5, 0.)],
            1e-15,
        );

        let mut one = basis(1, 1);
        one.s_phase(&[0]).unwrap();
        assert_eq!(one.amplitudes(), &[c(0., 0.), c(0., 1.)]);
    }

    #[test]
    fn target_validation() {
        let mut s = basis(3, 0);
        assert_eq!(
            s.hadamard(&[3]),
            Err(Error::QubitOutOfRange {
                qubit: 3,
                qubits: 3
            })
        );
        assert_eq!(s.s_phase(&[1, 1]), Err(Error::DuplicateQubit(1)));
        assert_eq!(
            s.controlled_hadamard(&[0, 1], 1, true),
            Err(Error::ControlIsTarget(1))
        );
    }

    #[test]
    fn controlled_hadamard_trivial_subspaces() {
        // Control qubit 2 is |0⟩ everywhere: nothing happens.
        let mut s = basis(3, 0b011);
        let before = s.clone();
        s.controlled_hadamard(&[0, 1], 2, true).unwrap();
        assert_eq!(s, before);

        // Control qubit 2 is |1⟩ everywhere: plain Hadamard.
        let mut s = basis(3, 0b110);
        let mut plain = s.clone();
        s.controlled_hadamard(&[0, 1], 2, true).unwrap();
        plain.hadamard(&[0, 1]).unwrap();
        assert_close(s.amplitudes(), plain.amplitudes(), 1e-15);
    }

    #[test]
    fn permute_examples() {
        let mut s = basis(1, 0);
        s.permute(&|x: usize| x ^ 1).unwrap();
        assert_eq!(s, basis(1, 1));

        let mut s = basis(3, 6);
        s.permute(&|x: usize| x).unwrap();
        assert_eq!(s, basis(3, 6));

        let mut s = basis(3, 6);
        s.permute(&|x: usize| (x + 3) % 8).unwrap();
        s.permute(&|x: usize| (x + 5) % 8).unwrap();
        assert_eq!(s, basis(3, 6));
    }

    #[test]
    fn permute_rejects_bad_maps() {
        let mut s = basis(2, 0);
        assert!(matches!(
            s.permute(&|x: usize| x + 1),
            Err(Error::QubitOutOfRange { .. })
        ));
        #[cfg(debug_assertions)]
        assert_eq!(s.permute(&|x: usize| x / 2), Err(Error::NotBijective(0)));
    }

    #[test]
    fn marginal_examples() {
        let mut s = basis(3, 0);
        s.hadamard(&[0, 1, 2]).unwrap();
        let p = s.probabilities_marginal(&[1]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);

        let s = StateVector::from_amplitudes(vec![c(0.6, 0.), c(0., 0.), c(0., 0.8), c(0., 0.)])
            .unwrap();
        let all = s.probabilities_marginal(&[0, 1]).unwrap();
        assert_eq!(all.len(), 4);
        assert!((all[0] - 0.36).abs() < 1e-15 && (all[2] - 0.64).abs() < 1e-15);
        let swapped = s.probabilities_marginal(&[1, 0]).unwrap();
        assert!((swapped[1] - 0.64).abs() < 1e-15);
        let empty = s.probabilities_marginal(&[]).unwrap();
        assert!((empty[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn from_amplitudes_requires_power_of_two() {
        assert!(StateVector::from_amplitudes(vec![c(1., 0.); 3]).is_err());
        assert!(StateVector::from_amplitudes(vec![]).is_err());
        assert_eq!(
            StateVector::from_amplitudes(vec![c(1., 0.)])
                .unwrap()
                .qubit_count(),
            0
        );
    }
}
