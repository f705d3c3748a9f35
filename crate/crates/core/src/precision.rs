//! Extended-precision decimal helpers used for final inequality verdicts.
//!
//! Scans run in `f64`; anything reported as verified is recomputed here with
//! at least [`WORKING_DIGITS`] significant digits.

use std::str::FromStr;

use bigdecimal::{BigDecimal, RoundingMode};
use num_traits::{Signed, ToPrimitive, Zero};

/// Significant digits kept after every multiplication.
pub const WORKING_DIGITS: u64 = 60;

const PI_60: &str = "3.14159265358979323846264338327950288419716939937510582097494";
const E_60: &str = "2.71828182845904523536028747135266249775724709369995957496697";

pub fn pi() -> BigDecimal {
    BigDecimal::from_str(PI_60).expect("constant")
}

pub fn e() -> BigDecimal {
    BigDecimal::from_str(E_60).expect("constant")
}

/// Parses a decimal literal; `"pi"` and `"e"` are accepted as named constants.
pub fn parse(s: &str) -> Option<BigDecimal> {
    match s.trim() {
        "pi" => Some(pi()),
        "e" => Some(e()),
        "-pi" => Some(-pi()),
        "-e" => Some(-e()),
        t => BigDecimal::from_str(t).ok(),
    }
}

pub fn from_f64(x: f64) -> BigDecimal {
    // shortest round-trip representation, not the binary expansion
    BigDecimal::from_str(&format!("{x:e}")).unwrap_or_else(|_| BigDecimal::zero())
}

pub fn to_f64(x: &BigDecimal) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn trim(x: BigDecimal) -> BigDecimal {
    x.with_prec(WORKING_DIGITS)
}

/// Square root of a non-negative integer to roughly 100 digits.
pub fn sqrt_int(n: i64) -> BigDecimal {
    BigDecimal::from(n)
        .sqrt()
        .expect("square root of a non-negative integer")
}

/// Distance to the nearest integer.
pub fn dist_to_int(x: &BigDecimal) -> BigDecimal {
    let nearest = x.with_scale_round(0, RoundingMode::HalfEven);
    (x - nearest).abs()
}

pub fn nearest_int(x: &BigDecimal) -> i64 {
    x.with_scale_round(0, RoundingMode::HalfEven)
        .to_i64()
        .unwrap_or(0)
}

/// Exact test of `value^den * base^num <= 1` for a positive `value`,
/// i.e. `value <= base^(-num/den)`, evaluated with bounded-precision products.
pub fn le_power(value: &BigDecimal, base: u64, num: u32, den: u32) -> bool {
    if !value.is_positive() {
        return true;
    }
    let lhs = trim(pow(value, den) * pow(&BigDecimal::from(base), num));
    lhs <= BigDecimal::from(1)
}

/// `x^k` by repeated squaring, trimmed to [`WORKING_DIGITS`] after each step.
pub fn pow(x: &BigDecimal, mut k: u32) -> BigDecimal {
    let mut acc = BigDecimal::from(1);
    let mut base = x.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = trim(acc * &base);
        }
        k >>= 1;
        if k > 0 {
            base = trim(&base * &base);
        }
    }
    acc
}

/// `ln(x)` for a positive extended value, accurate to double precision.
///
/// Used only to report exponents; verdicts go through [`le_power`].
pub fn ln(x: &BigDecimal) -> f64 {
    let (digits, scale) = x.as_bigint_and_exponent();
    let s = digits.to_string();
    let lead: String = s.chars().take(17).collect();
    let mant: f64 = lead.parse().unwrap_or(f64::NAN);
    let exp10 = s.len() as i64 - lead.len() as i64 - scale;
    mant.ln() + exp10 as f64 * std::f64::consts::LN_10
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_agree_with_f64() {
        assert!((to_f64(&pi()) - std::f64::consts::PI).abs() < 1e-15);
        assert!((to_f64(&e()) - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn distance_and_rounding() {
        let x = BigDecimal::from_str("-2.75").unwrap();
        assert_eq!(dist_to_int(&x), BigDecimal::from_str("0.25").unwrap());
        assert_eq!(nearest_int(&x), -3);
    }

    #[test]
    fn power_comparison() {
        // 0.5 <= 4^(-1/2) holds with equality, 0.51 does not
        assert!(le_power(&BigDecimal::from_str("0.5").unwrap(), 4, 1, 2));
        assert!(!le_power(&BigDecimal::from_str("0.51").unwrap(), 4, 1, 2));
    }

    #[test]
    fn ln_of_small_values() {
        let x = BigDecimal::from_str("1.234e-40").unwrap();
        assert!((ln(&x) - (1.234e-40f64).ln()).abs() < 1e-12);
        let s = sqrt_int(3);
        assert!((to_f64(&s) - 3f64.sqrt()).abs() < 1e-15);
    }
}
