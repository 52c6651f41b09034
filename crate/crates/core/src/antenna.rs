//! Normalized circular-aperture gain pattern.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// First positive zero of J₁.
pub const J1_FIRST_ZERO: f64 = 3.831_705_970_207_512;

/// Floor applied to `gain_db`; exact nulls would otherwise be −∞.
pub const GAIN_FLOOR_DB: f64 = -100.0;

/// Below this `ka·sin θ` the pattern uses its Taylor expansion.
const SMALL_ARGUMENT: f64 = 1e-6;

/// Bessel function of the first kind, order one.
///
/// Piecewise polynomial approximation: a polynomial in `(x/3)²` for
/// `|x| ≤ 3` and the modulus/phase asymptotic form beyond. Absolute error
/// is below 1e-7 everywhere (about 4e-8 in practice).
pub fn bessel_j1(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("x", "bessel_j1 argument not finite"));
    }
    if x.abs() <= 3.0 {
        return Ok(x * j1_over_x_poly(x));
    }
    let ax = x.abs();
    let z = 3.0 / ax;
    let modulus = 0.797_884_56
        + z * (0.000_001_56
            + z * (0.016_596_67
                + z * (0.000_171_05
                    + z * (-0.002_495_11 + z * (0.001_136_53 - z * 0.000_200_33)))));
    let phase = ax - 2.356_194_49
        + z * (0.124_996_12
            + z * (0.000_056_50
                + z * (-0.006_378_79
                    + z * (0.000_743_48 + z * (0.000_798_24 - z * 0.000_291_66)))));
    Ok(x.signum() * modulus * phase.cos() / ax.sqrt())
}

/// `J₁(x)/x` for `|x| ≤ 3`, evaluated without the division.
fn j1_over_x_poly(x: f64) -> f64 {
    let y = (x / 3.0) * (x / 3.0);
    0.5 + y
        * (-0.562_499_85
            + y * (0.210_935_73
                + y * (-0.039_542_89
                    + y * (0.004_433_19 + y * (-0.000_317_61 + y * 0.000_011_09)))))
}

/// Satellite antenna: circular aperture of radius `a` at frequency `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaPattern {
    pub aperture_radius_m: f64,
    pub frequency_hz: f64,
    pub wave_number_per_m: f64,
    /// Carried for reporting only; the link budget starts from peak EIRP.
    pub max_gain_dbi: f64,
}

impl Default for AntennaPattern {
    fn default() -> Self {
        Self::new(0.22, 2.17e9, 40.4).expect("default pattern is valid")
    }
}

impl AntennaPattern {
    pub fn new(aperture_radius_m: f64, frequency_hz: f64, max_gain_dbi: f64) -> Result<Self> {
        if !(aperture_radius_m.is_finite() && aperture_radius_m > 0.0) {
            return Err(Error::domain("aperture_radius_m", "must be positive"));
        }
        if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
            return Err(Error::domain("frequency_hz", "must be positive"));
        }
        Ok(Self {
            aperture_radius_m,
            frequency_hz,
            wave_number_per_m: 2.0 * PI * frequency_hz / SPEED_OF_LIGHT_M_S,
            max_gain_dbi,
        })
    }

    /// `k·a`, the dimensionless aperture size.
    pub fn ka(&self) -> f64 {
        self.wave_number_per_m * self.aperture_radius_m
    }

    /// Off-boresight angle (degrees) of the first pattern null, if the
    /// aperture is large enough to have one within 90°.
    pub fn first_null_deg(&self) -> Option<f64> {
        let s = J1_FIRST_ZERO / self.ka();
        (s <= 1.0).then(|| s.asin().to_degrees())
    }
}

/// Normalized linear gain `4 |J₁(x)/x|²` with `x = ka sin θ`, in `[0, 1]`.
pub fn gain_linear(theta_deg: f64, pattern: &AntennaPattern) -> Result<f64> {
    if !theta_deg.is_finite() || theta_deg.abs() > 90.0 {
        return Err(Error::domain(
            "theta_deg",
            format!("{theta_deg}° outside the pattern range [-90°, 90°]"),
        ));
    }
    if theta_deg == 0.0 {
        return Ok(1.0);
    }
    let x = pattern.ka() * theta_deg.to_radians().sin();
    if x.abs() < SMALL_ARGUMENT {
        return Ok(1.0 - x * x / 4.0);
    }
    let ratio = if x.abs() <= 3.0 {
        j1_over_x_poly(x)
    } else {
        bessel_j1(x)? / x
    };
    Ok((4.0 * ratio * ratio).min(1.0))
}

/// Normalized gain in dB, floored at [`GAIN_FLOOR_DB`].
pub fn gain_db(theta_deg: f64, pattern: &AntennaPattern) -> Result<f64> {
    let g = gain_linear(theta_deg, pattern)?;
    if g <= 0.0 {
        return Ok(GAIN_FLOOR_DB);
    }
    Ok((10.0 * g.log10()).max(GAIN_FLOOR_DB))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// J₁ power series summed until terms vanish; fine in f64 for small x.
    fn series_j1(x: f64) -> f64 {
        let q = -(x * x) / 4.0;
        let mut term = x / 2.0;
        let mut sum = term;
        for m in 1..60 {
            term *= q / (m as f64 * (m + 1) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn j1_spot_values() {
        assert_eq!(bessel_j1(0.0).unwrap(), 0.0);
        let peak = bessel_j1(1.8412).unwrap();
        assert!((peak - series_j1(1.8412)).abs() < 1e-7);
        assert!((peak - 0.5819).abs() < 1e-4);
        assert!(bessel_j1(J1_FIRST_ZERO).unwrap().abs() < 1e-7);
        // 3.83171 sits 4e-6 past the zero, where |J₁'| ≈ 0.40.
        assert!(bessel_j1(3.83171).unwrap().abs() < 2e-6);
    }

    #[test]
    fn j1_is_odd() {
        for x in [0.3, 2.9, 3.1, 7.7, 42.0] {
            assert_eq!(bessel_j1(-x).unwrap(), -bessel_j1(x).unwrap());
        }
    }

    #[test]
    fn j1_rejects_non_finite() {
        assert!(bessel_j1(f64::NAN).is_err());
        assert!(bessel_j1(f64::INFINITY).is_err());
    }

    #[test]
    fn wave_number() {
        let p = AntennaPattern::default();
        assert!((p.ka() - 10.0056).abs() < 1e-4);
    }

    #[test]
    fn boresight_gain_is_unity() {
        let p = AntennaPattern::default();
        assert_eq!(gain_linear(0.0, &p).unwrap(), 1.0);
        assert_eq!(gain_db(0.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn half_power_region() {
        let p = AntennaPattern::default();
        let x = p.ka() * 9.451_f64.to_radians().sin();
        let oracle = 4.0 * (series_j1(x) / x).powi(2);
        let g = gain_linear(9.451, &p).unwrap();
        assert!((g - oracle).abs() < 1e-7);
        assert!((g - 0.488).abs() < 1e-3);
        assert!((gain_db(9.451, &p).unwrap() + 3.1).abs() < 0.05);
    }

    #[test]
    fn null_is_clamped() {
        let p = AntennaPattern::default();
        let null = p.first_null_deg().unwrap();
        assert!(gain_linear(null, &p).unwrap() < 1e-12);
        assert_eq!(gain_db(null, &p).unwrap(), GAIN_FLOOR_DB);
    }

    #[test]
    fn small_argument_branch_matches_formula() {
        let p = AntennaPattern::default();
        // x just below and above the switch-over.
        for x in [1e-7, 5e-7, 9.99e-7, 1.01e-6, 1e-5] {
            let theta = (x / p.ka()).asin().to_degrees();
            let direct = 4.0 * (series_j1(x) / x).powi(2);
            assert!((gain_linear(theta, &p).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn out_of_range_theta() {
        let p = AntennaPattern::default();
        assert!(gain_linear(90.0, &p).is_ok());
        assert!(gain_linear(-90.0, &p).is_ok());
        assert!(gain_linear(90.01, &p).is_err());
        assert!(gain_db(-120.0, &p).is_err());
        assert!(gain_linear(f64::NAN, &p).is_err());
    }

    #[test]
    fn invalid_pattern() {
        assert!(AntennaPattern::new(0.0, 2e9, 0.0).is_err());
        assert!(AntennaPattern::new(0.2, -1.0, 0.0).is_err());
    }
}
