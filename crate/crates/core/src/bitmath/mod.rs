//! Bit-level primitives: basis-state indices, Hamming weight, mod-2 inner
//! product, truncation, powers of `i`, and two's-complement encoding.
//!
//! Everything is 64-bit. Bit strings are limited to [`MAX_WIDTH`] bits so
//! that `2^width` fits a signed 64-bit integer; the simulator and the
//! brute-force oracles never go past 30 bits.

mod gaussian;

pub use gaussian::{GaussianInt, ParseGaussianIntError};

use std::fmt;

use crate::error::{Error, Result};

/// Widest supported bit string.
pub const MAX_WIDTH: u32 = 62;

/// A basis-state index together with its register width.
///
/// Bit `j` of `value` is qubit `x_j`; `x_0` is the least significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    value: u64,
    width: u32,
}

impl BitString {
    pub fn new(value: u64, width: u32) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::WidthTooLarge(width));
        }
        if value >> width != 0 {
            return Err(Error::ValueOutOfRange { value, width });
        }
        Ok(Self { value, width })
    }

    pub fn zero(width: u32) -> Result<Self> {
        Self::new(0, width)
    }

    /// Builds a bit string from `value` reduced mod `2^width`.
    pub(crate) fn truncating(value: u64, width: u32) -> Self {
        debug_assert!(width <= MAX_WIDTH);
        Self {
            value: value & mask(width),
            width,
        }
    }

    pub const fn value(self) -> u64 {
        self.value
    }

    pub const fn width(self) -> u32 {
        self.width
    }

    /// Bit `j`, i.e. the state of qubit `x_j`. Bits past the width read 0.
    pub const fn bit(self, j: u32) -> bool {
        j < self.width && (self.value >> j) & 1 == 1
    }

    /// Bitwise complement within the width (`x̄`).
    pub const fn complement(self) -> Self {
        Self {
            value: !self.value & mask(self.width),
            width: self.width,
        }
    }

    pub fn iter_all(width: u32) -> Result<impl Iterator<Item = BitString>> {
        Self::zero(width)?;
        Ok((0..1u64 << width).map(move |value| Self { value, width }))
    }
}

/// `|x_{n-1} … x_0⟩`, most significant bit first.
impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.width == 0 {
            return Ok(());
        }
        write!(f, "{:0width$b}", self.value, width = self.width as usize)
    }
}

pub(crate) const fn mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Number of set bits, `w(x)`.
pub fn hamming_weight(x: BitString) -> u32 {
    x.value.count_ones()
}

/// `(Σ_j z_j x_j) mod 2`.
pub fn dot_mod2(z: BitString, x: BitString) -> Result<u8> {
    if z.width != x.width {
        return Err(Error::WidthMismatch {
            left: z.width,
            right: x.width,
        });
    }
    Ok(parity(z.value & x.value))
}

/// Parity of the raw word; the hot-loop form of [`dot_mod2`].
#[inline]
pub const fn parity(word: u64) -> u8 {
    (word.count_ones() & 1) as u8
}

/// `z_{-k}`: keeps the `width − k` least significant bits.
pub fn low_bits(z: BitString, k: u32) -> Result<BitString> {
    if k > z.width {
        return Err(Error::TruncationOutOfRange { k, width: z.width });
    }
    Ok(BitString::truncating(z.value, z.width - k))
}

/// `i^k` for any signed `k`.
pub const fn i_pow(k: i64) -> GaussianInt {
    match k.rem_euclid(4) {
        0 => GaussianInt::new(1, 0),
        1 => GaussianInt::new(0, 1),
        2 => GaussianInt::new(-1, 0),
        _ => GaussianInt::new(0, -1),
    }
}

/// `(−1)^k` for a non-negative exponent.
#[inline]
pub const fn sign_pow(k: u64) -> i64 {
    if k & 1 == 0 {
        1
    } else {
        -1
    }
}

/// `v mod 2^m` as an `m`-bit pattern.
///
/// Never fails: accumulator arithmetic is modular and values outside the
/// signed `m`-bit range simply wrap.
///
/// # Panics
///
/// If `m` is 0 or exceeds [`MAX_WIDTH`].
pub fn twos_complement_encode(v: i64, m: u32) -> BitString {
    assert!((1..=MAX_WIDTH).contains(&m), "accumulator width {m}");
    BitString::truncating(v.rem_euclid(1i64 << m) as u64, m)
}

/// Inverse of [`twos_complement_encode`] on the signed range
/// `[−2^(m−1), 2^(m−1))`: patterns with the top bit set decode negative.
pub fn twos_complement_decode(bits: BitString) -> i64 {
    let m = bits.width;
    if m == 0 {
        return 0;
    }
    let value = bits.value as i64;
    if bits.bit(m - 1) {
        value - (1i64 << m)
    } else {
        value
    }
}
