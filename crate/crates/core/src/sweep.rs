//! Scenario configuration and the slant-range × α sweep.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::antenna::{gain_db, gain_linear, AntennaPattern};
use crate::error::{Error, Result};
use crate::geometry::{build_coex_geometry, BeamGeometry, CoexGeometry, EarthModel};
use crate::linkbudget::{noise_power_dbw, rx_power_dbw, sinr_db, NoiseModel, SinrResult, TxConfig};
use crate::propagation::{path_loss, path_loss_shadowed, PathLossBreakdown, PropagationConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub earth: EarthModel,
    pub pattern: AntennaPattern,
    pub propagation: PropagationConfig,
    pub tx: TxConfig,
    pub noise: NoiseModel,
    pub snr_db: f64,
    pub separation_km: f64,
    pub alpha_list_deg: Vec<f64>,
    pub slant_min_km: f64,
    pub slant_max_km: f64,
    pub n_points: usize,
    /// Seed for shadow-fading draws; unused while `shadow_sigma_db` is 0.
    pub shadow_seed: u64,
    pub latitude_band_deg: [f64; 2],
    pub ntn_cell_diameter_km: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            earth: EarthModel::default(),
            pattern: AntennaPattern::default(),
            propagation: PropagationConfig::default(),
            tx: TxConfig::default(),
            noise: NoiseModel::default(),
            snr_db: 5.25,
            separation_km: 100.0,
            alpha_list_deg: vec![0.0, 45.0, 90.0, 135.0, 180.0],
            slant_min_km: 600.0,
            slant_max_km: 1075.19,
            n_points: 100,
            shadow_seed: 0,
            latitude_band_deg: [-20.0, 20.0],
            ntn_cell_diameter_km: 45.0,
        }
    }
}

macro_rules! raw_config {
    ($($key:ident : $ty:ty),* $(,)?) => {
        /// One optional field per accepted key.
        #[derive(Debug, Default, Deserialize)]
        #[serde(deny_unknown_fields)]
        struct RawConfig {
            $($key: Option<$ty>,)*
        }

        impl RawConfig {
            fn merge(&mut self, other: RawConfig) {
                $(if other.$key.is_some() { self.$key = other.$key; })*
            }
        }

        /// Keys accepted in a configuration document.
        pub const CONFIG_KEYS: &[&str] = &[$(stringify!($key)),*];
    };
}

raw_config! {
    earth_radius_km: f64,
    altitude_km: f64,
    aperture_radius_m: f64,
    frequency_hz: f64,
    max_gain_dbi: f64,
    zenith_gas_att_db: f64,
    rain_cloud_att_db: f64,
    scintillation_att_db: f64,
    shadow_sigma_db: f64,
    shadow_seed: u64,
    min_elevation_deg: f64,
    eirp_peak_dbw_per_prb: f64,
    channel_gain_db: f64,
    prb_bandwidth_hz: f64,
    noise_figure_db: f64,
    reference_temp_k: f64,
    snr_db: f64,
    separation_km: f64,
    alpha_list_deg: Vec<f64>,
    slant_min_km: f64,
    slant_max_km: f64,
    n_points: usize,
    latitude_band_deg: [f64; 2],
    ntn_cell_diameter_km: f64,
}

fn parse_raw(text: &str) -> Result<RawConfig> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_owned()))
}

/// Parses a `key = value` document; missing keys keep their defaults.
pub fn load_config(text: &str) -> Result<ScenarioConfig> {
    load_config_with_overrides(text, &[])
}

/// As [`load_config`], then applies `key=value` overrides in order.
pub fn load_config_with_overrides(text: &str, overrides: &[String]) -> Result<ScenarioConfig> {
    let mut raw = parse_raw(text)?;
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{item}` is not key=value")))?;
        let line = format!("{} = {}", key.trim(), value.trim());
        let parsed =
            parse_raw(&line).map_err(|e| Error::Config(format!("override `{item}`: {e}")))?;
        raw.merge(parsed);
    }
    raw.into_config()
}

impl RawConfig {
    fn into_config(self) -> Result<ScenarioConfig> {
        let d = ScenarioConfig::default();
        let frequency_hz = self.frequency_hz.unwrap_or(d.pattern.frequency_hz);
        let pattern = AntennaPattern::new(
            self.aperture_radius_m
                .unwrap_or(d.pattern.aperture_radius_m),
            frequency_hz,
            self.max_gain_dbi.unwrap_or(d.pattern.max_gain_dbi),
        )?;
        let config = ScenarioConfig {
            earth: EarthModel {
                earth_radius_km: self.earth_radius_km.unwrap_or(d.earth.earth_radius_km),
                altitude_km: self.altitude_km.unwrap_or(d.earth.altitude_km),
            },
            pattern,
            propagation: PropagationConfig {
                frequency_hz,
                zenith_gas_att_db: self
                    .zenith_gas_att_db
                    .unwrap_or(d.propagation.zenith_gas_att_db),
                rain_cloud_att_db: self
                    .rain_cloud_att_db
                    .unwrap_or(d.propagation.rain_cloud_att_db),
                scintillation_att_db: self
                    .scintillation_att_db
                    .unwrap_or(d.propagation.scintillation_att_db),
                entry_loss_db: 0.0,
                shadow_sigma_db: self
                    .shadow_sigma_db
                    .unwrap_or(d.propagation.shadow_sigma_db),
                min_elevation_deg: self
                    .min_elevation_deg
                    .unwrap_or(d.propagation.min_elevation_deg),
            },
            tx: TxConfig {
                eirp_peak_dbw_per_prb: self
                    .eirp_peak_dbw_per_prb
                    .unwrap_or(d.tx.eirp_peak_dbw_per_prb),
                channel_gain_db: self.channel_gain_db.unwrap_or(d.tx.channel_gain_db),
                ue_rx_gain_dbi: 0.0,
            },
            noise: NoiseModel {
                prb_bandwidth_hz: self.prb_bandwidth_hz.unwrap_or(d.noise.prb_bandwidth_hz),
                noise_figure_db: self.noise_figure_db.unwrap_or(d.noise.noise_figure_db),
                reference_temp_k: self.reference_temp_k.unwrap_or(d.noise.reference_temp_k),
            },
            snr_db: self.snr_db.unwrap_or(d.snr_db),
            separation_km: self.separation_km.unwrap_or(d.separation_km),
            alpha_list_deg: self.alpha_list_deg.unwrap_or(d.alpha_list_deg),
            slant_min_km: self.slant_min_km.unwrap_or(d.slant_min_km),
            slant_max_km: self.slant_max_km.unwrap_or(d.slant_max_km),
            n_points: self.n_points.unwrap_or(d.n_points),
            shadow_seed: self.shadow_seed.unwrap_or(d.shadow_seed),
            latitude_band_deg: self.latitude_band_deg.unwrap_or(d.latitude_band_deg),
            ntn_cell_diameter_km: self.ntn_cell_diameter_km.unwrap_or(d.ntn_cell_diameter_km),
        };
        config.validate()?;
        Ok(config)
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.earth.validate()?;
        self.propagation.validate()?;
        self.noise.validate()?;
        for (key, v) in [
            ("eirp_peak_dbw_per_prb", self.tx.eirp_peak_dbw_per_prb),
            ("channel_gain_db", self.tx.channel_gain_db),
            ("snr_db", self.snr_db),
        ] {
            if !v.is_finite() {
                return Err(Error::domain(key, "not finite"));
            }
        }
        if !(self.separation_km.is_finite() && self.separation_km >= 0.0) {
            return Err(Error::domain("separation_km", "must be ≥ 0"));
        }
        if self.alpha_list_deg.is_empty() {
            return Err(Error::domain(
                "alpha_list_deg",
                "must list at least one angle",
            ));
        }
        if let Some(a) = self
            .alpha_list_deg
            .iter()
            .find(|a| !(**a >= 0.0 && **a < 360.0))
        {
            return Err(Error::domain(
                "alpha_list_deg",
                format!("{a}° outside [0°, 360°)"),
            ));
        }
        if self.slant_min_km.is_nan() || self.slant_min_km < self.earth.altitude_km {
            return Err(Error::domain(
                "slant_min_km",
                format!(
                    "slant below altitude ({} km < {} km)",
                    self.slant_min_km, self.earth.altitude_km
                ),
            ));
        }
        if self.slant_max_km.is_nan() || self.slant_max_km < self.slant_min_km {
            return Err(Error::domain("slant_max_km", "must be ≥ slant_min_km"));
        }
        if self.slant_max_km > self.earth.horizon_slant_km() {
            return Err(Error::domain(
                "slant_max_km",
                "beam centre beyond the horizon",
            ));
        }
        if self.n_points < 2 {
            return Err(Error::domain("n_points", "need at least 2 grid points"));
        }
        let [lo, hi] = self.latitude_band_deg;
        if !(-90.0 <= lo && lo <= hi && hi <= 90.0) {
            return Err(Error::domain(
                "latitude_band_deg",
                "expected [lo, hi] within ±90°",
            ));
        }
        if !(self.ntn_cell_diameter_km.is_finite() && self.ntn_cell_diameter_km > 0.0) {
            return Err(Error::domain("ntn_cell_diameter_km", "must be positive"));
        }
        Ok(())
    }

    /// Uniform slant grid, both endpoints included.
    pub fn slant_grid(&self) -> Vec<f64> {
        let n = self.n_points;
        let span = self.slant_max_km - self.slant_min_km;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.slant_max_km
                } else {
                    self.slant_min_km + span * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    /// The α list after folding into `[0°, 180°]`, in ascending order.
    pub fn folded_alphas(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.alpha_list_deg.iter().map(|&a| fold_alpha(a)).collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Maps α onto `[0°, 180°]` using the mirror symmetry about the
/// beam-centre/sub-satellite plane.
pub fn fold_alpha(alpha_deg: f64) -> f64 {
    let a = alpha_deg.rem_euclid(360.0);
    if a > 180.0 {
        log::warn!(
            "alpha {alpha_deg}° folded to {}° by mirror symmetry",
            360.0 - a
        );
        360.0 - a
    } else {
        a
    }
}

/// Everything computed for one (slant, α) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointReport {
    pub beam: BeamGeometry,
    pub geometry: CoexGeometry,
    pub gain_linear: f64,
    pub gain_db: f64,
    pub tx_eirp_dbw: f64,
    pub path_loss: PathLossBreakdown,
    pub sinr: SinrResult,
}

/// Shadow-fading RNG stream keyed on the point itself, so a point yields
/// the same draw regardless of which command or row order produced it.
fn point_stream(slant_km: f64, alpha_deg: f64) -> u64 {
    slant_km.to_bits() ^ alpha_deg.to_bits().rotate_left(29)
}

/// Runs the full chain for one point. `alpha_deg` is used as given; fold
/// it first if it may exceed 180°.
pub fn evaluate_point(
    config: &ScenarioConfig,
    slant_km: f64,
    alpha_deg: f64,
) -> Result<PointReport> {
    let beam = BeamGeometry::from_slant(slant_km, &config.earth)?;
    let geometry = build_coex_geometry(&beam, config.separation_km, alpha_deg, &config.earth)?;
    let path_loss = if config.propagation.shadow_sigma_db > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.shadow_seed);
        rng.set_stream(point_stream(slant_km, alpha_deg));
        path_loss_shadowed(
            geometry.d_u_km,
            geometry.elevation_ue_deg,
            &config.propagation,
            &mut rng,
        )?
    } else {
        path_loss(
            geometry.d_u_km,
            geometry.elevation_ue_deg,
            &config.propagation,
        )?
    };
    let theta = geometry.theta_deg;
    let rx = rx_power_dbw(theta, &path_loss, &config.tx, &config.pattern)?;
    Ok(PointReport {
        beam,
        geometry,
        gain_linear: gain_linear(theta, &config.pattern)?,
        gain_db: gain_db(theta, &config.pattern)?,
        tx_eirp_dbw: config.tx.eirp_peak_dbw_per_prb + gain_db(theta, &config.pattern)?,
        path_loss,
        sinr: sinr_db(config.snr_db, rx, noise_power_dbw(&config.noise)),
    })
}

/// One CSV record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha_deg: f64,
    pub slant_km: f64,
    pub elevation_beam_deg: f64,
    pub theta_deg: f64,
    pub d_u_km: f64,
    pub elevation_ue_deg: f64,
    pub tx_eirp_dbw: f64,
    pub pl_fspl_db: f64,
    pub pl_gas_db: f64,
    pub pl_scint_db: f64,
    pub pl_total_db: f64,
    pub rx_power_dbw: f64,
    pub inr_db: f64,
    pub sinr_db: f64,
    pub degradation_db: f64,
}

impl SweepRow {
    pub const FIELDS: [&'static str; 15] = [
        "alpha_deg",
        "slant_km",
        "elevation_beam_deg",
        "theta_deg",
        "d_u_km",
        "elevation_ue_deg",
        "tx_eirp_dbw",
        "pl_fspl_db",
        "pl_gas_db",
        "pl_scint_db",
        "pl_total_db",
        "rx_power_dbw",
        "inr_db",
        "sinr_db",
        "degradation_db",
    ];

    pub fn values(&self) -> [f64; 15] {
        [
            self.alpha_deg,
            self.slant_km,
            self.elevation_beam_deg,
            self.theta_deg,
            self.d_u_km,
            self.elevation_ue_deg,
            self.tx_eirp_dbw,
            self.pl_fspl_db,
            self.pl_gas_db,
            self.pl_scint_db,
            self.pl_total_db,
            self.rx_power_dbw,
            self.inr_db,
            self.sinr_db,
            self.degradation_db,
        ]
    }

    pub fn from_values(v: [f64; 15]) -> Self {
        Self {
            alpha_deg: v[0],
            slant_km: v[1],
            elevation_beam_deg: v[2],
            theta_deg: v[3],
            d_u_km: v[4],
            elevation_ue_deg: v[5],
            tx_eirp_dbw: v[6],
            pl_fspl_db: v[7],
            pl_gas_db: v[8],
            pl_scint_db: v[9],
            pl_total_db: v[10],
            rx_power_dbw: v[11],
            inr_db: v[12],
            sinr_db: v[13],
            degradation_db: v[14],
        }
    }

    /// Looks a field up by its CSV column name.
    pub fn field(&self, name: &str) -> Option<f64> {
        Self::FIELDS
            .iter()
            .position(|f| *f == name)
            .map(|i| self.values()[i])
    }
}

impl From<&PointReport> for SweepRow {
    fn from(p: &PointReport) -> Self {
        Self {
            alpha_deg: p.geometry.alpha_deg,
            slant_km: p.beam.slant_km,
            elevation_beam_deg: p.beam.elevation_deg,
            theta_deg: p.geometry.theta_deg,
            d_u_km: p.geometry.d_u_km,
            elevation_ue_deg: p.geometry.elevation_ue_deg,
            tx_eirp_dbw: p.tx_eirp_dbw,
            pl_fspl_db: p.path_loss.fspl_db,
            pl_gas_db: p.path_loss.gas_db,
            pl_scint_db: p.path_loss.scintillation_db,
            pl_total_db: p.path_loss.total_db,
            rx_power_dbw: p.sinr.rx_interference_dbw,
            inr_db: p.sinr.inr_db,
            sinr_db: p.sinr.sinr_db,
            degradation_db: p.sinr.degradation_db,
        }
    }
}

/// Evaluates every (α, slant) pair, ordered by α then slant.
pub fn run_sweep(config: &ScenarioConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let grid = config.slant_grid();
    let points: Vec<(f64, f64)> = config
        .folded_alphas()
        .into_iter()
        .flat_map(|a| grid.iter().map(move |&s| (a, s)))
        .collect();
    points
        .par_iter()
        .map(|&(alpha, slant)| evaluate_point(config, slant, alpha).map(|p| SweepRow::from(&p)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakRecord {
    pub alpha_deg: f64,
    pub peak_rx_power_dbw: f64,
    pub slant_km: f64,
    /// True when the maximum lies strictly inside the slant range.
    pub interior: bool,
}

/// Largest received power and where it occurs, per α, in order of first
/// appearance. Ties keep the smaller slant.
pub fn peak_summary(rows: &[SweepRow]) -> Result<Vec<PeakRecord>> {
    if rows.is_empty() {
        return Err(Error::Empty("peak_summary: no rows"));
    }
    let mut out: Vec<(PeakRecord, f64, f64)> = Vec::new();
    for row in rows {
        match out
            .iter_mut()
            .find(|(p, _, _)| p.alpha_deg == row.alpha_deg)
        {
            Some((peak, lo, hi)) => {
                *lo = lo.min(row.slant_km);
                *hi = hi.max(row.slant_km);
                if row.rx_power_dbw > peak.peak_rx_power_dbw
                    || (row.rx_power_dbw == peak.peak_rx_power_dbw && row.slant_km < peak.slant_km)
                {
                    peak.peak_rx_power_dbw = row.rx_power_dbw;
                    peak.slant_km = row.slant_km;
                }
            }
            None => out.push((
                PeakRecord {
                    alpha_deg: row.alpha_deg,
                    peak_rx_power_dbw: row.rx_power_dbw,
                    slant_km: row.slant_km,
                    interior: false,
                },
                row.slant_km,
                row.slant_km,
            )),
        }
    }
    Ok(out
        .into_iter()
        .map(|(mut p, lo, hi)| {
            p.interior = p.slant_km > lo && p.slant_km < hi;
            p
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_default() {
        assert_eq!(load_config("").unwrap(), ScenarioConfig::default());
        assert_eq!(
            load_config("# just a comment\n").unwrap(),
            ScenarioConfig::default()
        );
    }

    #[test]
    fn slant_below_altitude_rejected() {
        let err = load_config("slant_min_km = 500").unwrap_err();
        assert!(err.to_string().contains("slant_min_km"), "{err}");
    }

    #[test]
    fn single_alpha() {
        let c = load_config("alpha_list_deg = [0]").unwrap();
        assert_eq!(c.alpha_list_deg, vec![0.0]);
        assert_eq!(run_sweep(&c).unwrap().len(), 100);
    }

    #[test]
    fn unknown_key_is_error() {
        let err = load_config("slant_mx_km = 900").unwrap_err();
        assert!(err.to_string().contains("slant_mx_km"), "{err}");
    }

    #[test]
    fn parse_error_reports_line() {
        let err = load_config("snr_db = 5\nn_points = \"many\"\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn overrides_apply_in_order() {
        let c = load_config_with_overrides(
            "noise_figure_db = 5",
            &[
                "noise_figure_db=9".into(),
                "alpha_list_deg = [10, 20]".into(),
            ],
        )
        .unwrap();
        assert_eq!(c.noise.noise_figure_db, 9.0);
        assert_eq!(c.alpha_list_deg, vec![10.0, 20.0]);
        assert!(load_config_with_overrides("", &["bogus=1".into()]).is_err());
        assert!(load_config_with_overrides("", &["novalue".into()]).is_err());
    }

    #[test]
    fn frequency_feeds_pattern_and_propagation() {
        let c = load_config("frequency_hz = 2.0e9").unwrap();
        assert_eq!(c.pattern.frequency_hz, 2.0e9);
        assert_eq!(c.propagation.frequency_hz, 2.0e9);
    }

    #[test]
    fn constraint_errors() {
        for doc in [
            "n_points = 1",
            "alpha_list_deg = []",
            "alpha_list_deg = [360]",
            "slant_max_km = 599.0\nslant_min_km = 600",
            "zenith_gas_att_db = -1",
            "latitude_band_deg = [30, -30]",
        ] {
            assert!(load_config(doc).is_err(), "{doc}");
        }
    }

    #[test]
    fn default_cardinality_and_order() {
        let rows = run_sweep(&ScenarioConfig::default()).unwrap();
        assert_eq!(rows.len(), 500);
        for pair in rows.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert!(
                a.alpha_deg < b.alpha_deg
                    || (a.alpha_deg == b.alpha_deg && a.slant_km < b.slant_km)
            );
        }
        assert_eq!(rows[0].slant_km, 600.0);
        assert_eq!(rows[99].slant_km, 1075.19);
    }

    #[test]
    fn alpha_fold() {
        assert_eq!(fold_alpha(270.0), 90.0);
        assert_eq!(fold_alpha(180.0), 180.0);
        assert_eq!(fold_alpha(359.0), 1.0);
        let c = load_config("alpha_list_deg = [270, 10]").unwrap();
        assert_eq!(c.folded_alphas(), vec![10.0, 90.0]);
    }

    #[test]
    fn zenith_rows_coincide() {
        let rows = run_sweep(&ScenarioConfig::default()).unwrap();
        let zenith: Vec<_> = rows.iter().filter(|r| r.slant_km == 600.0).collect();
        assert_eq!(zenith.len(), 5);
        for r in &zenith {
            assert!((r.rx_power_dbw - zenith[0].rx_power_dbw).abs() < 1e-9);
            assert!((r.theta_deg - zenith[0].theta_deg).abs() < 1e-9);
            assert!((r.d_u_km - zenith[0].d_u_km).abs() < 1e-9);
        }
    }

    #[test]
    fn zenith_chain() {
        let p = evaluate_point(&ScenarioConfig::default(), 600.0, 0.0).unwrap();
        assert!((p.geometry.theta_deg - 9.45).abs() < 0.01);
        assert!((p.geometry.elevation_ue_deg - 79.7).abs() < 0.05);
        assert!((p.sinr.rx_interference_dbw + 139.2).abs() < 0.05);
    }

    #[test]
    fn peaks() {
        assert!(peak_summary(&[]).is_err());
        let rows = run_sweep(&ScenarioConfig::default()).unwrap();
        let one = peak_summary(&rows[3..4]).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].peak_rx_power_dbw, rows[3].rx_power_dbw);
        assert!(!one[0].interior);
        let peaks = peak_summary(&rows).unwrap();
        assert_eq!(peaks.len(), 5);
        let zero = peaks.iter().find(|p| p.alpha_deg == 0.0).unwrap();
        assert!(zero.interior);
        let forty_five = peaks.iter().find(|p| p.alpha_deg == 45.0).unwrap();
        assert!(zero.peak_rx_power_dbw > forty_five.peak_rx_power_dbw);
    }

    #[test]
    fn shadowing_is_point_keyed() {
        let c = load_config("shadow_sigma_db = 3\nshadow_seed = 11").unwrap();
        let rows = run_sweep(&c).unwrap();
        let row = rows[42];
        let p = evaluate_point(&c, row.slant_km, row.alpha_deg).unwrap();
        assert_eq!(SweepRow::from(&p), row);
        let median = run_sweep(&ScenarioConfig::default()).unwrap();
        assert_ne!(rows[42].pl_total_db, median[42].pl_total_db);
    }
}
