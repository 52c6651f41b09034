//! Per-PRB received interference power, noise floor and SINR.

use crate::antenna::{gain_db, AntennaPattern};
use crate::error::{Error, Result};
use crate::propagation::PathLossBreakdown;

pub const BOLTZMANN_J_PER_K: f64 = 1.380_649e-23;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxConfig {
    pub eirp_peak_dbw_per_prb: f64,
    /// Small-scale channel gain `g`, held at its good-state value.
    pub channel_gain_db: f64,
    /// UE antenna gain; omnidirectional, 0 dBi.
    pub ue_rx_gain_dbi: f64,
}

impl Default for TxConfig {
    fn default() -> Self {
        Self {
            eirp_peak_dbw_per_prb: 19.24,
            channel_gain_db: -0.4,
            ue_rx_gain_dbi: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub prb_bandwidth_hz: f64,
    pub noise_figure_db: f64,
    pub reference_temp_k: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            prb_bandwidth_hz: 180e3,
            noise_figure_db: 7.0,
            reference_temp_k: 290.0,
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.prb_bandwidth_hz.is_finite() && self.prb_bandwidth_hz > 0.0) {
            return Err(Error::domain("prb_bandwidth_hz", "must be positive"));
        }
        if !(self.reference_temp_k.is_finite() && self.reference_temp_k > 0.0) {
            return Err(Error::domain("reference_temp_k", "must be positive"));
        }
        if !self.noise_figure_db.is_finite() {
            return Err(Error::domain("noise_figure_db", "not finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrResult {
    pub rx_interference_dbw: f64,
    pub noise_dbw: f64,
    pub inr_db: f64,
    pub snr_db: f64,
    pub sinr_db: f64,
    /// `snr − sinr = 10 log10(1 + I/N)`.
    pub degradation_db: f64,
}

/// EIRP radiated towards a direction `theta_deg` off boresight.
pub fn tx_eirp_toward(theta_deg: f64, tx: &TxConfig, pattern: &AntennaPattern) -> Result<f64> {
    Ok(tx.eirp_peak_dbw_per_prb + gain_db(theta_deg, pattern)?)
}

/// Received interference power per PRB. Path loss is a positive loss and
/// is subtracted.
pub fn rx_power_dbw(
    theta_deg: f64,
    pl: &PathLossBreakdown,
    tx: &TxConfig,
    pattern: &AntennaPattern,
) -> Result<f64> {
    Ok(tx_eirp_toward(theta_deg, tx, pattern)? - pl.total_db
        + tx.channel_gain_db
        + tx.ue_rx_gain_dbi)
}

/// Thermal noise `kTB` plus noise figure, in dBW.
pub fn noise_power_dbw(noise: &NoiseModel) -> f64 {
    10.0 * (BOLTZMANN_J_PER_K * noise.reference_temp_k * noise.prb_bandwidth_hz).log10()
        + noise.noise_figure_db
}

/// Folds interference into a TN link with the given SNR. An interference
/// power of `-inf` dBW is the interference-free limit.
pub fn sinr_db(snr_db: f64, rx_interference_dbw: f64, noise_dbw: f64) -> SinrResult {
    let inr_db = rx_interference_dbw - noise_dbw;
    let degradation_db = 10.0 * (10f64.powf(inr_db / 10.0)).ln_1p() / std::f64::consts::LN_10;
    SinrResult {
        rx_interference_dbw,
        noise_dbw,
        inr_db,
        snr_db,
        sinr_db: snr_db - degradation_db,
        degradation_db,
    }
}
