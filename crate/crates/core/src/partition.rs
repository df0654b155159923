//! Partition Problem instances and the reversible oracle used by the
//! circuit.
//!
//! The register is laid out as `x` (bits `0..n`), the accumulator `σ`
//! (bits `n..n+m`) and the control qubit `c` (bit `n+m`). The constant
//! registers holding the weights never change and are not simulated; each
//! conditional adder carries its weight as a classical constant.

use std::fmt;

use serde::Deserialize;

use crate::bitmath::{self, mask, twos_complement_encode, BitString, MAX_WIDTH};
use crate::error::{Error, Result};
use crate::statevector::BasisMap;

/// Largest instance accepted by [`PartitionInstance::enumerate_solutions`].
pub const ENUMERATION_MAX_ELEMENTS: usize = 24;

/// Element weights `s(e) ≥ 1`, indexed `e = 0, 1, …, n−1`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(try_from = "InstanceFile")]
pub struct PartitionInstance {
    weights: Vec<u64>,
}

/// On-disk form: `{"weights": [1, 2, 3]}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    weights: Vec<u64>,
}

impl TryFrom<InstanceFile> for PartitionInstance {
    type Error = Error;

    fn try_from(file: InstanceFile) -> Result<Self> {
        Self::new(file.weights)
    }
}

impl PartitionInstance {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if weights.len() > MAX_WIDTH as usize {
            return Err(Error::WidthTooLarge(weights.len() as u32));
        }
        if let Some(index) = weights.iter().position(|&w| w == 0) {
            return Err(Error::NonPositiveWeight { index });
        }
        let total = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .filter(|&t| t < 1 << 61)
            .ok_or(Error::WeightOverflow)?;
        debug_assert!(total > 0);
        Ok(Self { weights })
    }

    /// Parses the JSON instance format.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInstance(e.to_string()))
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Number of elements, which is also the `x`-register width.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// `𝒮 = Σ s(e) / 2`. Odd totals have no partition and are rejected.
    pub fn half_sum(&self) -> Result<u64> {
        let total = self.total();
        if total % 2 == 1 {
            return Err(Error::OddTotal { total });
        }
        Ok(total / 2)
    }

    pub fn layout(&self) -> Result<RegisterLayout> {
        RegisterLayout::new(self.len() as u32, self.half_sum()?)
    }

    fn check_subset(&self, x: BitString) -> Result<()> {
        if x.width() as usize != self.len() {
            return Err(Error::WidthMismatch {
                left: self.len() as u32,
                right: x.width(),
            });
        }
        Ok(())
    }

    fn subset_sum(&self, x: u64) -> u64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|&(e, _)| x >> e & 1 == 1)
            .map(|(_, w)| w)
            .sum()
    }

    /// `σ = −𝒮 + Σ_{e: x_e = 1} s(e)`.
    pub fn sigma_of(&self, x: BitString) -> Result<i64> {
        self.check_subset(x)?;
        let half = self.half_sum()?;
        Ok(self.subset_sum(x.value()) as i64 - half as i64)
    }

    pub fn is_solution(&self, x: BitString) -> Result<bool> {
        Ok(self.sigma_of(x)? == 0)
    }

    /// Every solution subset, ascending. The set is closed under complement.
    pub fn enumerate_solutions(&self) -> Result<Vec<BitString>> {
        if self.len() > ENUMERATION_MAX_ELEMENTS {
            return Err(Error::QubitCountOutOfRange {
                n: self.len() as u32,
                min: 1,
                max: ENUMERATION_MAX_ELEMENTS as u32,
            });
        }
        let half = self.half_sum()?;
        let width = self.len() as u32;
        Ok(BitString::iter_all(width)?
            .filter(|x| self.subset_sum(x.value()) == half)
            .collect())
    }

    /// Adder for element `e`: `σ ← σ + s(e) mod 2^m` when `x_e = 1`.
    pub fn conditional_add(&self, e: usize, layout: &RegisterLayout) -> Result<ConditionalAdd> {
        if e >= self.len() || layout.n as usize != self.len() {
            return Err(Error::ElementOutOfRange {
                index: e,
                n: self.len(),
            });
        }
        Ok(ConditionalAdd {
            layout: *layout,
            element: e,
            addend: self.weights[e] & mask(layout.m),
        })
    }

    /// The `n` adders in element order.
    pub fn adders(&self, layout: &RegisterLayout) -> Result<Vec<ConditionalAdd>> {
        (0..self.len())
            .map(|e| self.conditional_add(e, layout))
            .collect()
    }
}

impl fmt::Display for PartitionInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.weights)
    }
}

/// Register widths for an instance: `n` subset qubits, `m = ⌈log₂ 𝒮⌉ + 1`
/// accumulator qubits and one control qubit.
///
/// `2^m ≥ 2𝒮 > 𝒮 ≥ |σ|`, so `σ ≡ 0 (mod 2^m)` exactly when `σ = 0`. When
/// `𝒮` is a power of two, `σ = +𝒮` does not fit the signed `m`-bit range
/// and wraps to the pattern of `−𝒮`; that is harmless because only the
/// zero pattern is ever tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterLayout {
    n: u32,
    m: u32,
    half_sum: u64,
}

impl RegisterLayout {
    pub fn new(n: u32, half_sum: u64) -> Result<Self> {
        if half_sum == 0 {
            return Err(Error::EmptyInstance);
        }
        let m = half_sum.next_power_of_two().trailing_zeros() + 1;
        let layout = Self { n, m, half_sum };
        if layout.total() > MAX_WIDTH {
            return Err(Error::RegisterTooLarge {
                qubits: layout.total(),
                max: MAX_WIDTH,
            });
        }
        Ok(layout)
    }

    /// Width of the `x` register.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Width of the `σ` register.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn half_sum(&self) -> u64 {
        self.half_sum
    }

    /// `n + m + 1`.
    pub fn total(&self) -> u32 {
        self.n + self.m + 1
    }

    pub fn x_qubits(&self) -> Vec<usize> {
        (0..self.n as usize).collect()
    }

    pub fn sigma_qubits(&self) -> Vec<usize> {
        (self.n as usize..(self.n + self.m) as usize).collect()
    }

    pub fn control_qubit(&self) -> usize {
        (self.n + self.m) as usize
    }

    /// The accumulator's starting value, `−𝒮` in two's complement.
    pub fn initial_sigma(&self) -> BitString {
        twos_complement_encode(-(self.half_sum as i64), self.m)
    }

    pub fn x_field(&self, index: usize) -> BitString {
        BitString::truncating(index as u64, self.n)
    }

    pub fn sigma_field(&self, index: usize) -> BitString {
        BitString::truncating((index >> self.n) as u64, self.m)
    }

    pub fn control_bit(&self, index: usize) -> bool {
        index >> self.control_qubit() & 1 == 1
    }

    /// Basis index of `|x⟩|σ⟩|c⟩`.
    pub fn compose(&self, x: BitString, sigma: BitString, control: bool) -> usize {
        debug_assert_eq!(x.width(), self.n);
        debug_assert_eq!(sigma.width(), self.m);
        x.value() as usize
            | (sigma.value() as usize) << self.n
            | usize::from(control) << self.control_qubit()
    }

    /// Flips `c` on exactly the states whose accumulator reads zero.
    pub fn zero_flip(&self) -> ZeroFlip {
        ZeroFlip { layout: *self }
    }
}

/// `|x⟩|σ⟩|c⟩ ↦ |x⟩|σ + s(e)·x_e mod 2^m⟩|c⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionalAdd {
    layout: RegisterLayout,
    element: usize,
    addend: u64,
}

impl ConditionalAdd {
    pub fn element(&self) -> usize {
        self.element
    }

    /// The matching subtractor, used for the uncompute step.
    pub fn inverse(&self) -> Self {
        Self {
            addend: self.addend.wrapping_neg() & mask(self.layout.m),
            ..*self
        }
    }
}

impl BasisMap for ConditionalAdd {
    fn map_index(&self, index: usize) -> usize {
        if index >> self.element & 1 == 0 {
            return index;
        }
        let n = self.layout.n;
        let field = mask(self.layout.m) as usize;
        let sigma = (index >> n) & field;
        let shifted = (sigma + self.addend as usize) & field;
        index & !(field << n) | shifted << n
    }
}

/// Multi-controlled flip of `c` on the all-zeros `σ` pattern. An involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroFlip {
    layout: RegisterLayout,
}

impl BasisMap for ZeroFlip {
    fn map_index(&self, index: usize) -> usize {
        if self.layout.sigma_field(index).value() == 0 {
            index ^ 1 << self.layout.control_qubit()
        } else {
            index
        }
    }
}

/// `σ` as read back from an `m`-bit accumulator pattern.
pub fn decode_sigma(bits: BitString) -> i64 {
    bitmath::twos_complement_decode(bits)
}
