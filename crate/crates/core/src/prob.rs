//! Retention probabilities as exact decimal rationals.
//!
//! `p` is always carried as `numerator / 10^k`, so every peeling threshold
//! (`4pd/5`, `6pd/5`, `3pd/5`, `pd/5`, `pd/13`) compares integers.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbabilityError {
    #[error("malformed probability {0:?}: expected a decimal such as 0.625")]
    Malformed(String),
    #[error("probability {0} exceeds 1")]
    AboveOne(String),
    #[error("probability {0:?} has more than {MAX_DIGITS} fractional digits")]
    TooPrecise(String),
}

const MAX_DIGITS: u32 = 18;

/// A probability in `[0, 1]` equal to `numerator / 10^scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Probability {
    numerator: u64,
    scale: u32,
}

impl Probability {
    pub const ONE: Probability = Probability { numerator: 1, scale: 0 };
    pub const ZERO: Probability = Probability { numerator: 0, scale: 0 };

    /// `numerator / 10^scale`, normalised to the shortest decimal.
    pub fn from_decimal(numerator: u64, scale: u32) -> Result<Self, ProbabilityError> {
        if scale > MAX_DIGITS {
            return Err(ProbabilityError::TooPrecise(format!("{numerator}e-{scale}")));
        }
        let mut p = Probability { numerator, scale };
        if u128::from(numerator) > p.denominator() {
            return Err(ProbabilityError::AboveOne(p.to_string()));
        }
        while p.scale > 0 && p.numerator.is_multiple_of(10) {
            p.numerator /= 10;
            p.scale -= 1;
        }
        Ok(p)
    }

    /// Rounds `x` to `digits` decimal places and clamps into `[0, 1]`.
    pub fn rounded(x: f64, digits: u32) -> Self {
        let digits = digits.min(MAX_DIGITS);
        let den = 10u64.pow(digits);
        let num = (x.clamp(0.0, 1.0) * den as f64).round() as u64;
        Self::from_decimal(num.min(den), digits).expect("clamped into range")
    }

    /// Smallest multiple of `10^-digits` at or above `x`, capped at 1.
    pub fn rounded_up(x: f64, digits: u32) -> Self {
        let digits = digits.min(MAX_DIGITS);
        let den = 10u64.pow(digits);
        let scaled = x.clamp(0.0, 1.0) * den as f64;
        // absorb representation noise in values that are already exact
        let num = if (scaled - scaled.round()).abs() < 1e-9 { scaled.round() } else { scaled.ceil() } as u64;
        Self::from_decimal(num.min(den), digits).expect("clamped into range")
    }

    pub fn numerator(&self) -> u128 {
        u128::from(self.numerator)
    }

    pub fn denominator(&self) -> u128 {
        10u128.pow(self.scale)
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator() as f64
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    /// `floor(p * 2^64)` as a keep threshold for a uniform 64-bit draw.
    pub fn keep_threshold(&self) -> u128 {
        (self.numerator() << 64) / self.denominator()
    }

    /// Compares `value` with `(num/den) * p * d`, exactly.
    ///
    /// Returns the ordering of `value` relative to the scaled threshold.
    pub fn cmp_scaled(&self, value: u64, num: u64, den: u64, d: u64) -> std::cmp::Ordering {
        let lhs = u128::from(value) * u128::from(den) * self.denominator();
        let rhs = u128::from(num) * self.numerator() * u128::from(d);
        lhs.cmp(&rhs)
    }
}

impl Ord for Probability {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.numerator() * other.denominator()).cmp(&(other.numerator() * self.denominator()))
    }
}

impl PartialOrd for Probability {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for Probability {
    type Err = ProbabilityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let malformed = || ProbabilityError::Malformed(s.to_string());
        let (int, frac) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if (int.is_empty() && frac.is_empty())
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(malformed());
        }
        let frac = frac.trim_end_matches('0');
        if frac.len() > MAX_DIGITS as usize {
            return Err(ProbabilityError::TooPrecise(s.to_string()));
        }
        let int_value: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| ProbabilityError::AboveOne(s.to_string()))? };
        if int_value > 1 {
            return Err(ProbabilityError::AboveOne(s.to_string()));
        }
        let scale = frac.len() as u32;
        let frac_value: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| malformed())? };
        let numerator = int_value
            .checked_mul(10u64.pow(scale))
            .and_then(|x| x.checked_add(frac_value))
            .ok_or_else(|| ProbabilityError::AboveOne(s.to_string()))?;
        Self::from_decimal(numerator, scale).map_err(|_| ProbabilityError::AboveOne(s.to_string()))
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.numerator);
        }
        let den = 10u64.pow(self.scale);
        write!(
            f,
            "{}.{:0width$}",
            self.numerator / den,
            self.numerator % den,
            width = self.scale as usize
        )
    }
}
