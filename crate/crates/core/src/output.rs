//! CSV emission/parsing and the plain-text point report.

use std::fmt::Write as _;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::sweep::{PointReport, SweepRow};

/// Formats `v` with `digits` significant digits in the style of C's `%g`:
/// fixed notation for moderate exponents, scientific otherwise, trailing
/// zeros trimmed.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = digits.max(1);
    // Round once in scientific form, then read the exponent off the result
    // so that e.g. 999999.5 becomes 1e+06 rather than 1000000.
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_DIGITS: usize = 6;

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Csv {
        row: 0,
        reason: e.to_string(),
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(SweepRow::FIELDS).map_err(io)?;
    for row in rows {
        w.write_record(row.values().iter().map(|v| format_sig(*v, CSV_DIGITS)))
            .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Csv {
        row: 0,
        reason: e.to_string(),
    })
}

pub fn rows_to_csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is ascii")
}

/// Reads a sweep CSV. Columns are matched by header name, so extra
/// columns are ignored. Row numbers in errors count the header as row 1.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let headers = r
        .headers()
        .map_err(|e| Error::Csv {
            row: 1,
            reason: e.to_string(),
        })?
        .clone();
    let mut columns = [0usize; 15];
    for (slot, name) in columns.iter_mut().zip(SweepRow::FIELDS) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Csv {
                row: 1,
                reason: format!("missing column `{name}`"),
            })?;
    }
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let row_no = i + 2;
        let record = record.map_err(|e| Error::Csv {
            row: row_no,
            reason: e.to_string(),
        })?;
        let mut values = [0.0; 15];
        for ((v, &col), name) in values.iter_mut().zip(&columns).zip(SweepRow::FIELDS) {
            let cell = record.get(col).ok_or_else(|| Error::Csv {
                row: row_no,
                reason: format!("missing `{name}`"),
            })?;
            *v = cell.trim().parse().map_err(|_| Error::Csv {
                row: row_no,
                reason: format!("`{name}` is not a number: {cell:?}"),
            })?;
        }
        rows.push(SweepRow::from_values(values));
    }
    if rows.is_empty() {
        return Err(Error::Csv {
            row: 2,
            reason: "no data rows".into(),
        });
    }
    Ok(rows)
}

/// Human-readable breakdown of one point. Lines that mirror a CSV column
/// start with the column name, followed by the value at CSV precision.
pub fn point_report(p: &PointReport, folded_from: Option<f64>) -> String {
    let row = SweepRow::from(p);
    let f = |v: f64| format_sig(v, CSV_DIGITS);
    let mut s = String::new();
    let mut line = |key: &str, v: f64, unit: &str, note: &str| {
        let _ = writeln!(s, "{key:<22} {:>12} {unit:<4} {note}", f(v));
    };
    let alpha_note = folded_from
        .map(|a| format!("(folded from {a}°)"))
        .unwrap_or_default();
    line("alpha_deg", row.alpha_deg, "deg", &alpha_note);
    line("slant_km", row.slant_km, "km", "beam-centre slant range");
    line(
        "elevation_beam_deg",
        row.elevation_beam_deg,
        "deg",
        "elevation at beam centre",
    );
    line(
        "central_angle_b_rad",
        p.beam.central_angle_rad,
        "rad",
        "sub-satellite point to beam centre",
    );
    line(
        "separation_km",
        p.geometry.separation_km,
        "km",
        "beam centre to UE (great circle)",
    );
    line("theta_deg", row.theta_deg, "deg", "misalignment angle");
    line("d_u_km", row.d_u_km, "km", "satellite to UE");
    line(
        "elevation_ue_deg",
        row.elevation_ue_deg,
        "deg",
        "elevation at UE",
    );
    line("gain_linear", p.gain_linear, "", "normalized antenna gain");
    line("gain_db", p.gain_db, "dB", "");
    line(
        "tx_eirp_dbw",
        row.tx_eirp_dbw,
        "dBW",
        "EIRP towards UE per PRB",
    );
    line("pl_fspl_db", row.pl_fspl_db, "dB", "free-space loss");
    line("pl_shadow_db", p.path_loss.shadow_db, "dB", "shadow fading");
    line("pl_gas_db", row.pl_gas_db, "dB", "atmospheric gases");
    line(
        "pl_rain_cloud_db",
        p.path_loss.rain_cloud_db,
        "dB",
        "rain and cloud",
    );
    line("pl_scint_db", row.pl_scint_db, "dB", "scintillation");
    line(
        "pl_entry_db",
        p.path_loss.entry_db,
        "dB",
        "building entry (outdoor)",
    );
    line("pl_total_db", row.pl_total_db, "dB", "");
    line(
        "rx_power_dbw",
        row.rx_power_dbw,
        "dBW",
        "interference per PRB",
    );
    line("noise_dbw", p.sinr.noise_dbw, "dBW", "noise per PRB");
    line("inr_db", row.inr_db, "dB", "");
    line("snr_db", p.sinr.snr_db, "dB", "TN SNR");
    line("sinr_db", row.sinr_db, "dB", "");
    line("degradation_db", row.degradation_db, "dB", "SNR − SINR");
    s
}
