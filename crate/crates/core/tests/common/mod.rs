#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Float, ToPrimitive, Zero};

const FRACTION_BITS: i64 = 320;

/// J₁(x) from its power series, summed to convergence in fixed-point big
/// integer arithmetic so that cancellation between the large alternating
/// terms (≈1e20 at x = 50) costs nothing.
pub fn j1_series_oracle(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let (mantissa, exponent, sign) = Float::integer_decode(x);
    let mantissa = BigInt::from(mantissa);
    let exponent = exponent as i64;
    let mant_sq = &mantissa * &mantissa;

    // term₀ = x / 2
    let mut term = shift(&mantissa, FRACTION_BITS + exponent - 1);
    let mut sum = term.clone();
    let mut m: u64 = 1;
    let mut terms = 1;
    loop {
        // termₘ = −termₘ₋₁ · x² / (4 m (m + 1))
        term = -shift(&(&term * &mant_sq), 2 * exponent) / BigInt::from(4 * m * (m + 1));
        sum += &term;
        terms += 1;
        m += 1;
        if term.is_zero() && terms >= 40 {
            break;
        }
    }
    let value = sum.to_f64().unwrap() * 2f64.powi(-(FRACTION_BITS as i32));
    if sign < 0 {
        -value
    } else {
        value
    }
}

fn shift(v: &BigInt, bits: i64) -> BigInt {
    if bits >= 0 {
        v << (bits as usize)
    } else {
        v >> ((-bits) as usize)
    }
}

/// Independent normalized-pattern oracle built on [`j1_series_oracle`].
pub fn gain_oracle(theta_deg: f64, ka: f64) -> f64 {
    let x = ka * theta_deg.to_radians().sin();
    if x == 0.0 {
        return 1.0;
    }
    4.0 * (j1_series_oracle(x) / x).powi(2)
}

/// Relative difference, guarded against zero denominators.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
