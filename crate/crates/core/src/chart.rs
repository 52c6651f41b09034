//! Self-contained SVG line charts of sweep output, one polyline per α.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::output::format_sig;
use crate::sweep::SweepRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    TxEirp,
    PathLoss,
    RxPower,
    Sinr,
    Degradation,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::TxEirp,
        Metric::PathLoss,
        Metric::RxPower,
        Metric::Sinr,
        Metric::Degradation,
    ];

    /// CSV column this metric plots.
    pub fn column(self) -> &'static str {
        match self {
            Metric::TxEirp => "tx_eirp_dbw",
            Metric::PathLoss => "pl_total_db",
            Metric::RxPower => "rx_power_dbw",
            Metric::Sinr => "sinr_db",
            Metric::Degradation => "degradation_db",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Metric::TxEirp => "Tx interference EIRP towards the UE per PRB",
            Metric::PathLoss => "Path loss",
            Metric::RxPower => "Received interference power per PRB",
            Metric::Sinr => "TN SINR",
            Metric::Degradation => "SINR degradation",
        }
    }

    fn y_label(self) -> &'static str {
        match self {
            Metric::TxEirp => "tx_eirp_dbw (dBW)",
            Metric::PathLoss => "pl_total_db (dB)",
            Metric::RxPower => "rx_power_dbw (dBW)",
            Metric::Sinr => "sinr_db (dB)",
            Metric::Degradation => "degradation_db (dB)",
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.column() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Metric::ALL.iter().map(|m| m.column()).collect();
                Error::Config(format!(
                    "unknown metric `{s}`; valid metrics: {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub alpha_deg: f64,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub metric: Metric,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Horizontal dashed line, e.g. the interference-free SNR on SINR charts.
    pub reference: Option<(f64, String)>,
}

impl ChartSpec {
    pub fn from_rows(metric: Metric, rows: &[SweepRow]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("chart: no rows"));
        }
        let mut series: Vec<Series> = Vec::new();
        for row in rows {
            let y = row
                .field(metric.column())
                .expect("metric names a row field");
            match series.iter_mut().find(|s| s.alpha_deg == row.alpha_deg) {
                Some(s) => s.points.push((row.slant_km, y)),
                None => series.push(Series {
                    alpha_deg: row.alpha_deg,
                    points: vec![(row.slant_km, y)],
                }),
            }
        }
        // SNR is not a CSV column but every row carries it as sinr + degradation.
        let reference = (metric == Metric::Sinr).then(|| {
            let snr = rows[0].sinr_db + rows[0].degradation_db;
            (snr, format!("SNR = {} dB", format_sig(snr, 3)))
        });
        Ok(Self {
            metric,
            title: metric.title().to_owned(),
            x_label: "slant range (km)".to_owned(),
            y_label: metric.y_label().to_owned(),
            series,
            reference,
        })
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Step of roughly `span / 6` rounded to 1, 2 or 5 × 10ⁿ.
fn tick_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> (f64, f64, Vec<f64>) {
    let step = tick_step(hi - lo);
    let start = (lo / step).floor() * step;
    let end = (hi / step).ceil() * step;
    let n = ((end - start) / step).round() as usize;
    (
        start,
        end,
        (0..=n).map(|i| start + step * i as f64).collect(),
    )
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if hi - lo < 1e-9 {
        let pad = lo.abs().max(1.0) * 0.05;
        (lo - pad, hi + pad)
    } else {
        (lo, hi)
    }
}

pub fn render_svg(spec: &ChartSpec) -> String {
    let all = || spec.series.iter().flat_map(|s| s.points.iter());
    let (x_lo, x_hi) = padded_range(all().map(|p| p.0));
    let (y_lo, y_hi) = padded_range(all().map(|p| p.1).chain(spec.reference.iter().map(|r| r.0)));
    let (x0, x1, x_ticks) = ticks(x_lo, x_hi);
    let (y0, y1, y_ticks) = ticks(y_lo, y_hi);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(&spec.title)
    );

    let _ = writeln!(s, r##"<g class="grid" stroke="#dddddd" stroke-width="1">"##);
    for &t in &x_ticks {
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{TOP}" x2="{0:.2}" y2="{1:.2}"/>"#,
            sx(t),
            TOP + plot_h
        );
    }
    for &t in &y_ticks {
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}"/>"#,
            sy(t),
            LEFT + plot_w
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(s, r#"<g class="ticks" fill="black">"#);
    for &t in &x_ticks {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(t),
            TOP + plot_h + 18.0,
            format_sig(t, 6)
        );
    }
    for &t in &y_ticks {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            sy(t) + 4.0,
            format_sig(t, 6)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text class="x-label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text class="y-label" x="20" y="{0:.2}" text-anchor="middle" transform="rotate(-90 20 {0:.2})">{1}</text>"#,
        TOP + plot_h / 2.0,
        escape(&spec.y_label)
    );

    if let Some((value, label)) = &spec.reference {
        let y = sy(*value);
        let _ = writeln!(
            s,
            r#"<line class="reference" x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black" stroke-dasharray="6 4"/>"#,
            LEFT + plot_w
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT + plot_w - 4.0,
            y - 4.0,
            escape(label)
        );
    }

    for (i, series) in spec.series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = series
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" data-alpha="{}" fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#,
            format_sig(series.alpha_deg, 6),
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = LEFT + plot_w + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 25.0
        );
        let _ = writeln!(
            s,
            r#"<text class="legend" x="{}" y="{}">α = {}°</text>"#,
            lx + 32.0,
            ly + 4.0,
            format_sig(series.alpha_deg, 6)
        );
    }
    s.push_str("</svg>\n");
    s
}
