//! Path-loss stack: basic (free-space) loss plus gas, rain/cloud,
//! scintillation and building-entry attenuation, all in dB.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationConfig {
    pub frequency_hz: f64,
    /// Gas attenuation along a zenith path; scaled by cosec(elevation).
    pub zenith_gas_att_db: f64,
    pub rain_cloud_att_db: f64,
    pub scintillation_att_db: f64,
    /// Always 0: only outdoor UEs are modelled.
    pub entry_loss_db: f64,
    /// Shadow-fading standard deviation. 0 gives the deterministic median.
    pub shadow_sigma_db: f64,
    pub min_elevation_deg: f64,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            frequency_hz: 2.17e9,
            zenith_gas_att_db: 0.035,
            rain_cloud_att_db: 0.0,
            scintillation_att_db: 0.0,
            entry_loss_db: 0.0,
            shadow_sigma_db: 0.0,
            min_elevation_deg: 5.0,
        }
    }
}

impl PropagationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.frequency_hz.is_finite() && self.frequency_hz > 0.0) {
            return Err(Error::domain("frequency_hz", "must be positive"));
        }
        let non_negative = [
            ("zenith_gas_att_db", self.zenith_gas_att_db),
            ("rain_cloud_att_db", self.rain_cloud_att_db),
            ("scintillation_att_db", self.scintillation_att_db),
            ("shadow_sigma_db", self.shadow_sigma_db),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain(name, format!("must be ≥ 0 (got {v})")));
            }
        }
        if self.entry_loss_db != 0.0 {
            return Err(Error::domain(
                "entry_loss_db",
                "outdoor scenario: must be 0",
            ));
        }
        if !(self.min_elevation_deg > 0.0 && self.min_elevation_deg < 90.0) {
            return Err(Error::domain("min_elevation_deg", "must lie in (0°, 90°)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossBreakdown {
    pub fspl_db: f64,
    /// Zero-mean shadow-fading draw; 0 in deterministic mode.
    pub shadow_db: f64,
    pub gas_db: f64,
    pub rain_cloud_db: f64,
    pub scintillation_db: f64,
    pub entry_db: f64,
    pub total_db: f64,
}

/// Free-space loss: `32.45 + 20 log10(f / GHz) + 20 log10(d / m)`.
pub fn fspl_db(distance_km: f64, frequency_hz: f64) -> Result<f64> {
    if !(distance_km.is_finite() && distance_km > 0.0) {
        return Err(Error::domain("distance_km", "must be positive"));
    }
    if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
        return Err(Error::domain("frequency_hz", "must be positive"));
    }
    Ok(32.45 + 20.0 * (frequency_hz / 1e9).log10() + 20.0 * (distance_km * 1e3).log10())
}

pub fn gas_attenuation_db(elevation_ue_deg: f64, config: &PropagationConfig) -> Result<f64> {
    if !(elevation_ue_deg >= config.min_elevation_deg && elevation_ue_deg <= 90.0) {
        return Err(Error::domain(
            "elevation_ue_deg",
            format!(
                "{elevation_ue_deg}° below the {}° elevation guard",
                config.min_elevation_deg
            ),
        ));
    }
    Ok(config.zenith_gas_att_db / elevation_ue_deg.to_radians().sin())
}

/// Deterministic (median) path loss.
pub fn path_loss(
    d_u_km: f64,
    elevation_ue_deg: f64,
    config: &PropagationConfig,
) -> Result<PathLossBreakdown> {
    assemble(d_u_km, elevation_ue_deg, config, 0.0)
}

/// Path loss with a log-normal shadow-fading draw taken from `rng`.
pub fn path_loss_shadowed<R: Rng + ?Sized>(
    d_u_km: f64,
    elevation_ue_deg: f64,
    config: &PropagationConfig,
    rng: &mut R,
) -> Result<PathLossBreakdown> {
    let shadow = if config.shadow_sigma_db > 0.0 {
        Normal::new(0.0, config.shadow_sigma_db)
            .map_err(|e| Error::domain("shadow_sigma_db", e.to_string()))?
            .sample(rng)
    } else {
        0.0
    };
    assemble(d_u_km, elevation_ue_deg, config, shadow)
}

fn assemble(
    d_u_km: f64,
    elevation_ue_deg: f64,
    config: &PropagationConfig,
    shadow_db: f64,
) -> Result<PathLossBreakdown> {
    let fspl = fspl_db(d_u_km, config.frequency_hz)?;
    let gas = gas_attenuation_db(elevation_ue_deg, config)?;
    let rain_cloud = config.rain_cloud_att_db;
    let scintillation = config.scintillation_att_db;
    let entry = 0.0;
    Ok(PathLossBreakdown {
        fspl_db: fspl,
        shadow_db,
        gas_db: gas,
        rain_cloud_db: rain_cloud,
        scintillation_db: scintillation,
        entry_db: entry,
        total_db: fspl + shadow_db + gas + rain_cloud + scintillation + entry,
    })
}
