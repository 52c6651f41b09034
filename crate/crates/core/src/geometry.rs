//! Spherical-Earth geometry for a single steered beam.
//!
//! Frame: Earth centre at the origin, satellite on the +z axis at
//! `R + h`, sub-satellite point `S` at `(0, 0, R)`. The beam centre `B`
//! lies in the x–z plane at Earth-centre angle `γ_B` from `S`. The UE sits
//! a great-circle distance `separation` from `B`, leaving `B` along the
//! bearing `α` measured from the direction `B → S`.

use crate::error::{Error, Result};

/// Earth radius and satellite altitude, both in km.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarthModel {
    pub earth_radius_km: f64,
    pub altitude_km: f64,
}

impl Default for EarthModel {
    fn default() -> Self {
        Self {
            earth_radius_km: 6378.0,
            altitude_km: 600.0,
        }
    }
}

impl EarthModel {
    pub fn new(earth_radius_km: f64, altitude_km: f64) -> Result<Self> {
        let earth = Self {
            earth_radius_km,
            altitude_km,
        };
        earth.validate()?;
        Ok(earth)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.earth_radius_km.is_finite() && self.earth_radius_km > 0.0) {
            return Err(Error::domain("earth_radius_km", "must be positive"));
        }
        if !(self.altitude_km.is_finite() && self.altitude_km > 0.0) {
            return Err(Error::domain("altitude_km", "must be positive"));
        }
        Ok(())
    }

    /// Distance from Earth centre to the satellite.
    pub fn orbit_radius_km(&self) -> f64 {
        self.earth_radius_km + self.altitude_km
    }

    /// Slant range to a ground point with the satellite on its horizon.
    pub fn horizon_slant_km(&self) -> f64 {
        let r = self.earth_radius_km;
        let o = self.orbit_radius_km();
        (o * o - r * r).sqrt()
    }

    fn check_slant(&self, slant_km: f64) -> Result<()> {
        if !slant_km.is_finite() {
            return Err(Error::domain("slant_km", "not finite"));
        }
        if slant_km < self.altitude_km {
            return Err(Error::domain(
                "slant_km",
                format!(
                    "slant below altitude ({slant_km} km < {} km)",
                    self.altitude_km
                ),
            ));
        }
        let horizon = self.horizon_slant_km();
        if slant_km > horizon {
            return Err(Error::domain(
                "slant_km",
                format!("slant beyond horizon ({slant_km} km > {horizon} km)"),
            ));
        }
        Ok(())
    }
}

/// Slant distance (km) from a ground point to the satellite seen at `elevation_deg`.
pub fn slant_from_elevation(elevation_deg: f64, earth: &EarthModel) -> Result<f64> {
    if !(elevation_deg > 0.0 && elevation_deg <= 90.0) {
        return Err(Error::domain(
            "elevation_deg",
            format!("{elevation_deg}° outside (0°, 90°]"),
        ));
    }
    let r = earth.earth_radius_km;
    let o = earth.orbit_radius_km();
    let (sin_e, cos_e) = elevation_deg.to_radians().sin_cos();
    if elevation_deg == 90.0 {
        return Ok(earth.altitude_km);
    }
    Ok((o * o - r * r * cos_e * cos_e).sqrt() - r * sin_e)
}

/// Elevation (degrees) of the satellite from a ground point at slant range `slant_km`.
pub fn elevation_from_slant(slant_km: f64, earth: &EarthModel) -> Result<f64> {
    earth.check_slant(slant_km)?;
    let r = earth.earth_radius_km;
    let o = earth.orbit_radius_km();
    let sin_e = (o * o - r * r - slant_km * slant_km) / (2.0 * r * slant_km);
    Ok(sin_e.clamp(-1.0, 1.0).asin().to_degrees())
}

/// Earth-centre angle (radians) between the sub-satellite point and a
/// ground point at slant range `slant_km`.
pub fn central_angle_from_slant(slant_km: f64, earth: &EarthModel) -> Result<f64> {
    earth.check_slant(slant_km)?;
    let r = earth.earth_radius_km;
    let o = earth.orbit_radius_km();
    // Half-angle form of cos γ = (R² + (R+h)² − d²) / (2R(R+h)): exact zero
    // at d = h and no acos precision loss near it.
    let h = earth.altitude_km;
    let sin2_half = (slant_km * slant_km - h * h) / (4.0 * r * o);
    Ok(2.0 * sin2_half.clamp(0.0, 1.0).sqrt().asin())
}

/// Earth-centre angle between the sub-satellite point and the UE, by the
/// spherical law of cosines. `separation_angle` is the UE's great-circle
/// offset from the beam centre in radians; `alpha_rad` its bearing from
/// the direction of the sub-satellite point.
pub fn spherical_offset(central_angle_b: f64, separation_angle: f64, alpha_rad: f64) -> f64 {
    // Haversine form of the same identity; keeps precision when the
    // angles are small (the law-of-cosines form cancels near γ = 0).
    let hav = |x: f64| (0.5 * x).sin().powi(2);
    let h = hav(central_angle_b - separation_angle)
        + central_angle_b.sin() * separation_angle.sin() * hav(alpha_rad);
    2.0 * h.clamp(0.0, 1.0).sqrt().asin()
}

/// Beam-centre state for one slant range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry {
    pub slant_km: f64,
    pub elevation_deg: f64,
    pub central_angle_rad: f64,
}

impl BeamGeometry {
    pub fn from_slant(slant_km: f64, earth: &EarthModel) -> Result<Self> {
        Ok(Self {
            slant_km,
            elevation_deg: elevation_from_slant(slant_km, earth)?,
            central_angle_rad: central_angle_from_slant(slant_km, earth)?,
        })
    }
}

/// Derived geometry for one (slant, α) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoexGeometry {
    pub alpha_deg: f64,
    pub separation_km: f64,
    /// Angle at the satellite between boresight (towards `B`) and the UE.
    pub theta_deg: f64,
    pub d_u_km: f64,
    /// Satellite elevation seen from the UE.
    pub elevation_ue_deg: f64,
    pub central_angle_su_rad: f64,
}

type Vec3 = [f64; 3];

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn scale(a: Vec3, k: f64) -> Vec3 {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Angle between two vectors, stable for both tiny and near-π angles.
fn angle_between(a: Vec3, b: Vec3) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Places the UE relative to the beam centre and derives θ, `d_u` and
/// the UE elevation.
pub fn build_coex_geometry(
    beam: &BeamGeometry,
    separation_km: f64,
    alpha_deg: f64,
    earth: &EarthModel,
) -> Result<CoexGeometry> {
    if !(separation_km.is_finite() && separation_km >= 0.0) {
        return Err(Error::domain("separation_km", "must be finite and ≥ 0"));
    }
    if !alpha_deg.is_finite() {
        return Err(Error::domain("alpha_deg", "not finite"));
    }
    let r = earth.earth_radius_km;
    let o = earth.orbit_radius_km();
    let gamma_b = beam.central_angle_rad;
    let delta = separation_km / r;
    let alpha = alpha_deg.to_radians();

    let (sg, cg) = gamma_b.sin_cos();
    let sat: Vec3 = [0.0, 0.0, o];
    let u_b: Vec3 = [sg, 0.0, cg];
    // Unit tangent at B pointing along the great circle towards S.
    let t: Vec3 = [-cg, 0.0, sg];
    let p = cross(u_b, t);
    let (sa, ca) = alpha.sin_cos();
    let (sd, cd) = delta.sin_cos();
    let u_ue = add(scale(u_b, cd), scale(add(scale(t, ca), scale(p, sa)), sd));

    let to_b = sub(scale(u_b, r), sat);
    let to_ue = sub(scale(u_ue, r), sat);
    let theta = angle_between(to_b, to_ue);
    let d_u = norm(to_ue);
    let central_su = angle_between(u_ue, [0.0, 0.0, 1.0]);
    let sin_eu = (o * central_su.cos() - r) / d_u;

    Ok(CoexGeometry {
        alpha_deg,
        separation_km,
        theta_deg: theta.to_degrees(),
        d_u_km: d_u,
        elevation_ue_deg: sin_eu.clamp(-1.0, 1.0).asin().to_degrees(),
        central_angle_su_rad: central_su,
    })
}

/// Satellite–UE distance from the spherical-law-of-cosines route: the
/// Earth-centre angle `γ_SU` closes the triangle (centre, UE, satellite).
pub fn d_u_from_central_angle(central_angle_su_rad: f64, earth: &EarthModel) -> f64 {
    let r = earth.earth_radius_km;
    let o = earth.orbit_radius_km();
    // (o - r)² + 4 o r sin²(γ/2) avoids cancellation near γ = 0.
    let half = (0.5 * central_angle_su_rad).sin();
    ((o - r).powi(2) + 4.0 * o * r * half * half).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn earth() -> EarthModel {
        EarthModel::default()
    }

    #[test]
    fn zenith_slant_is_altitude() {
        assert_eq!(slant_from_elevation(90.0, &earth()).unwrap(), 600.0);
        assert_eq!(elevation_from_slant(600.0, &earth()).unwrap(), 90.0);
        assert_eq!(central_angle_from_slant(600.0, &earth()).unwrap(), 0.0);
    }

    #[test]
    fn thirty_degree_slant_matches_table_bound() {
        let d = slant_from_elevation(30.0, &earth()).unwrap();
        assert!((d - 1075.19).abs() < 0.01, "{d}");
    }

    #[test]
    fn twenty_degree_slant() {
        // Law of cosines on (centre, ground, satellite), solved for the
        // slant side by the quadratic formula.
        let (r, o) = (6378.0_f64, 6978.0_f64);
        let e = 20.0_f64.to_radians();
        let b = 2.0 * r * e.sin();
        let c = r * r - o * o;
        let oracle = (-b + (b * b - 4.0 * c).sqrt()) / 2.0;
        let d = slant_from_elevation(20.0, &earth()).unwrap();
        assert!((d - oracle).abs() < 1e-9);
        assert!((d - 1392.4).abs() < 0.1);
    }

    #[test]
    fn inverse_at_table_bound_is_thirty_degrees() {
        let e = elevation_from_slant(1075.19, &earth()).unwrap();
        assert!((e - 30.0).abs() < 1e-3, "{e}");
        let g = central_angle_from_slant(1075.19, &earth()).unwrap();
        assert!((g - 0.13387).abs() < 5e-5, "{g}");
    }

    #[test]
    fn domain_errors() {
        assert!(slant_from_elevation(0.0, &earth()).is_err());
        assert!(slant_from_elevation(90.5, &earth()).is_err());
        assert!(slant_from_elevation(f64::NAN, &earth()).is_err());
        let err = elevation_from_slant(599.0, &earth()).unwrap_err();
        assert!(err.to_string().contains("slant below altitude"));
        assert!(central_angle_from_slant(5000.0, &earth()).is_err());
        assert!(EarthModel::new(0.0, 600.0).is_err());
        assert!(EarthModel::new(6378.0, -1.0).is_err());
    }

    #[test]
    fn central_angle_is_monotone() {
        let mut prev = -1.0;
        for i in 0..200 {
            let d = 600.0 + i as f64 * 10.0;
            let g = central_angle_from_slant(d, &earth()).unwrap();
            assert!(g > prev);
            prev = g;
        }
    }

    #[test]
    fn spherical_offset_special_cases() {
        let gb = 0.1;
        let delta = 100.0 / 6378.0;
        for alpha in [0.0_f64, 1.0, 2.5, 4.0] {
            assert!((spherical_offset(gb, 0.0, alpha) - gb).abs() < 1e-15);
            assert!((spherical_offset(0.0, delta, alpha) - delta).abs() < 1e-15);
        }
        assert!((spherical_offset(gb, delta, 0.0) - (gb - delta).abs()).abs() < 1e-15);
        assert!((spherical_offset(gb, delta, std::f64::consts::PI) - (gb + delta)).abs() < 1e-12);
    }

    #[test]
    fn zenith_beam_geometry() {
        let beam = BeamGeometry::from_slant(600.0, &earth()).unwrap();
        let reference = build_coex_geometry(&beam, 100.0, 0.0, &earth()).unwrap();
        assert!((reference.theta_deg - 9.45).abs() < 0.01);
        assert!((reference.d_u_km - 609.0).abs() < 0.1);
        for alpha in [45.0, 90.0, 135.0, 180.0, 271.0] {
            let g = build_coex_geometry(&beam, 100.0, alpha, &earth()).unwrap();
            assert!((g.theta_deg - reference.theta_deg).abs() < 1e-12);
            assert!((g.d_u_km - reference.d_u_km).abs() < 1e-12);
            assert!((g.elevation_ue_deg - reference.elevation_ue_deg).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_separation_puts_ue_on_boresight() {
        for slant in [600.0, 800.0, 1075.19] {
            let beam = BeamGeometry::from_slant(slant, &earth()).unwrap();
            let g = build_coex_geometry(&beam, 0.0, 33.0, &earth()).unwrap();
            assert!(g.theta_deg.abs() < 1e-9);
            assert!((g.d_u_km - slant).abs() < 1e-9 * slant);
            assert!((g.elevation_ue_deg - beam.elevation_deg).abs() < 1e-9);
        }
    }

    #[test]
    fn near_side_ue_is_closer_and_higher() {
        let beam = BeamGeometry::from_slant(1075.19, &earth()).unwrap();
        let near = build_coex_geometry(&beam, 100.0, 0.0, &earth()).unwrap();
        let far = build_coex_geometry(&beam, 100.0, 180.0, &earth()).unwrap();
        assert!(near.d_u_km < far.d_u_km);
        assert!(near.elevation_ue_deg > far.elevation_ue_deg);
    }

    #[test]
    fn negative_separation_rejected() {
        let beam = BeamGeometry::from_slant(700.0, &earth()).unwrap();
        assert!(build_coex_geometry(&beam, -1.0, 0.0, &earth()).is_err());
    }
}
