use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_complex::Complex64;

/// A complex number `re + im·i` with integer parts.
///
/// Both parts are `i64`. Every amplitude handled by this crate is bounded in
/// magnitude by `2^n` for `n ≤ 30`, so overflow is not reachable from the
/// public operations; arithmetic overflow panics in debug builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: Self = Self::new(0, 0);
    pub const ONE: Self = Self::new(1, 0);
    pub const I: Self = Self::new(0, 1);

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    /// `|self|²`, exact.
    pub const fn norm_sqr(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub const fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// Multiplication by `i`.
    pub const fn mul_i(self) -> Self {
        Self::new(-self.im, self.re)
    }

    pub const fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    /// `self / scale` as a floating complex number.
    pub fn scaled(self, scale: f64) -> Complex64 {
        Complex64::new(self.re as f64 / scale, self.im as f64 / scale)
    }
}

impl From<i64> for GaussianInt {
    fn from(re: i64) -> Self {
        Self::new(re, 0)
    }
}

impl Add for GaussianInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussianInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for GaussianInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<i64> for GaussianInt {
    type Output = Self;
    fn mul(self, rhs: i64) -> Self {
        Self::new(self.re * rhs, self.im * rhs)
    }
}

impl AddAssign for GaussianInt {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for GaussianInt {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for GaussianInt {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Sum for GaussianInt {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

/// Renders as `a+bi`, dropping zero parts and unit coefficients:
/// `-2+2i`, `4i`, `-4`, `-i`, `0`.
impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Self { re, im } = *self;
        if im == 0 {
            return write!(f, "{re}");
        }
        if re != 0 {
            write!(f, "{re}")?;
            if im > 0 {
                f.write_str("+")?;
            }
        }
        match im {
            1 => f.write_str("i"),
            -1 => f.write_str("-i"),
            _ => write!(f, "{im}i"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseGaussianIntError(String);

impl fmt::Display for ParseGaussianIntError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid Gaussian integer {:?}", self.0)
    }
}

impl std::error::Error for ParseGaussianIntError {}

impl FromStr for GaussianInt {
    type Err = ParseGaussianIntError;

    /// Accepts the [`Display`](fmt::Display) form, plus the Unicode minus
    /// sign and surrounding whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGaussianIntError(s.to_owned());
        let text: String = s
            .trim()
            .chars()
            .map(|c| if c == '\u{2212}' { '-' } else { c })
            .filter(|c| !c.is_whitespace())
            .collect();
        if text.is_empty() {
            return Err(err());
        }
        let Some(body) = text.strip_suffix('i') else {
            return text.parse::<i64>().map(Self::from).map_err(|_| err());
        };
        // Split between the real part and the imaginary coefficient at the
        // last sign that is not the leading one.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(idx, _)| idx)
            .last();
        let (re, coeff) = match split {
            Some(idx) => (body[..idx].parse().map_err(|_| err())?, &body[idx..]),
            None => (0, body),
        };
        let im = match coeff {
            "" | "+" => 1,
            "-" => -1,
            c => c.parse().map_err(|_| err())?,
        };
        Ok(Self::new(re, im))
    }
}
