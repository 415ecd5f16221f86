//! Statistics, rainflow counting, damage-equivalent loads and controller
//! comparison reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dynamics::rad_s_to_rpm;
use crate::error::AnalysisError;
use crate::trajectory::Trajectory;

/// Leading transient excluded from statistics (s).
pub const DEFAULT_TRIM: f64 = 100.0;

/// A named, uniformly sampled signal.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSeries {
    pub name: String,
    pub unit: String,
    pub dt: f64,
    pub values: Vec<f64>,
}

impl ChannelSeries {
    pub fn new(name: &str, unit: &str, dt: f64, values: Vec<f64>) -> Result<Self, AnalysisError> {
        if values.is_empty() {
            return Err(AnalysisError::EmptySeries(name.into()));
        }
        Ok(Self {
            name: name.into(),
            unit: unit.into(),
            dt,
            values,
        })
    }

    pub fn duration(&self) -> f64 {
        self.values.len() as f64 * self.dt
    }
}

fn non_empty<'a>(name: &str, v: &'a [f64]) -> Result<&'a [f64], AnalysisError> {
    if v.is_empty() {
        Err(AnalysisError::EmptySeries(name.into()))
    } else {
        Ok(v)
    }
}

/// Arithmetic mean.
pub fn av(values: &[f64]) -> Result<f64, AnalysisError> {
    let v = non_empty("series", values)?;
    Ok(v.iter().sum::<f64>() / v.len() as f64)
}

/// Root mean square.
pub fn rms(values: &[f64]) -> Result<f64, AnalysisError> {
    let v = non_empty("series", values)?;
    Ok((v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt())
}

pub fn normalized_rms(series: &[f64], baseline: &[f64]) -> Result<f64, AnalysisError> {
    let b = rms(baseline)?;
    if b == 0.0 {
        return Err(AnalysisError::ZeroBaseline("baseline".into()));
    }
    Ok(rms(series)? / b)
}

/// A counted load range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cycle {
    pub range: f64,
    /// 1.0 for a closed cycle, 0.5 for a residual half cycle.
    pub count: f64,
}

/// Local extrema with plateaus collapsed; endpoints are kept.
pub fn turning_points(values: &[f64]) -> Vec<f64> {
    let mut tp: Vec<f64> = Vec::new();
    for &v in values {
        match tp.len() {
            0 => tp.push(v),
            1 => {
                if v != tp[0] {
                    tp.push(v);
                }
            }
            n => {
                let (a, b) = (tp[n - 2], tp[n - 1]);
                if v == b {
                    continue;
                }
                if (b - a) * (v - b) > 0.0 {
                    tp[n - 1] = v;
                } else {
                    tp.push(v);
                }
            }
        }
    }
    tp
}

/// Four-point rainflow count. Closed cycles count 1.0; what remains on the
/// stack is counted as half cycles.
pub fn rainflow_count(values: &[f64]) -> Vec<Cycle> {
    let mut cycles = Vec::new();
    let mut stack: Vec<f64> = Vec::new();
    for p in turning_points(values) {
        stack.push(p);
        while stack.len() >= 4 {
            let n = stack.len();
            let (s1, s2, s3, s4) = (stack[n - 4], stack[n - 3], stack[n - 2], stack[n - 1]);
            let inner = (s3 - s2).abs();
            if inner <= (s2 - s1).abs() && inner <= (s4 - s3).abs() {
                cycles.push(Cycle {
                    range: inner,
                    count: 1.0,
                });
                stack.drain(n - 3..n - 1);
            } else {
                break;
            }
        }
    }
    for w in stack.windows(2) {
        cycles.push(Cycle {
            range: (w[1] - w[0]).abs(),
            count: 0.5,
        });
    }
    cycles
}

/// Damage-equivalent load settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DelConfig {
    pub woehler_exponent: f64,
    /// Explicit reference cycle count; otherwise `reference_frequency` times
    /// the series duration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_cycles: Option<f64>,
    pub reference_frequency: f64,
}

impl Default for DelConfig {
    fn default() -> Self {
        Self {
            woehler_exponent: 4.0,
            reference_cycles: None,
            reference_frequency: 1.0,
        }
    }
}

impl DelConfig {
    pub fn with_exponent(m: f64) -> Self {
        Self {
            woehler_exponent: m,
            ..Self::default()
        }
    }

    pub fn reference_count(&self, duration: f64) -> f64 {
        self.reference_cycles.unwrap_or(self.reference_frequency * duration)
    }
}

/// `(sum n R^m / N_ref)^(1/m)` over the rainflow ranges of `series`.
pub fn del_compute(series: &ChannelSeries, cfg: &DelConfig) -> f64 {
    let m = cfg.woehler_exponent;
    let n_ref = cfg.reference_count(series.duration());
    let damage: f64 = rainflow_count(&series.values)
        .iter()
        .map(|c| c.count * c.range.powf(m))
        .sum();
    (damage / n_ref).powf(1.0 / m)
}

/// Open-loop statistics in reporting units (m, deg, rpm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseStats {
    pub av_surge: f64,
    pub rms_surge: f64,
    pub av_pitch_deg: f64,
    pub rms_pitch_deg: f64,
    pub av_rotor_rpm: f64,
    pub rms_rotor_rpm: f64,
}

fn channel_after(t: &Trajectory, name: &str, start: f64) -> Result<Vec<f64>, AnalysisError> {
    let v = t
        .after(name, start)
        .ok_or_else(|| AnalysisError::EmptySeries(name.into()))?;
    non_empty(name, &v)?;
    Ok(v)
}

pub fn response_stats(t: &Trajectory, trim: f64) -> Result<ResponseStats, AnalysisError> {
    let surge = channel_after(t, "surge", trim)?;
    let pitch: Vec<f64> = channel_after(t, "pitch", trim)?.iter().map(|p| p.to_degrees()).collect();
    let rotor: Vec<f64> = channel_after(t, "rotor_speed", trim)?.iter().map(|w| rad_s_to_rpm(*w)).collect();
    Ok(ResponseStats {
        av_surge: av(&surge)?,
        rms_surge: rms(&surge)?,
        av_pitch_deg: av(&pitch)?,
        rms_pitch_deg: rms(&pitch)?,
        av_rotor_rpm: av(&rotor)?,
        rms_rotor_rpm: rms(&rotor)?,
    })
}

impl ResponseStats {
    pub fn rows(&self) -> [(&'static str, f64); 6] {
        [
            ("AV(r_x) [m]", self.av_surge),
            ("RMS(r_x) [m]", self.rms_surge),
            ("AV(theta_y) [deg]", self.av_pitch_deg),
            ("RMS(theta_y) [deg]", self.rms_pitch_deg),
            ("AV(Omega_r) [rpm]", self.av_rotor_rpm),
            ("RMS(Omega_r) [rpm]", self.rms_rotor_rpm),
        ]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (label, v) in self.rows() {
            writeln!(out, "{label:<20} {v:>10.4}").ok();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Rms,
    Del,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Metric::Rms => "rms",
            Metric::Del => "del",
        }
    }
}

/// Report rows: name, metric, source column, Woehler exponent for DELs.
pub const REPORT_CHANNELS: [(&str, Metric, &str, f64); 11] = [
    ("rotor_speed_error", Metric::Rms, "rotor_speed", 0.0),
    ("roll_rate", Metric::Rms, "p", 0.0),
    ("pitch_rate", Metric::Rms, "q", 0.0),
    ("yaw_rate", Metric::Rms, "r", 0.0),
    ("tower_base_proxy", Metric::Del, "tower_base_proxy", 4.0),
    ("fairlead_1", Metric::Del, "fairlead_1", 4.0),
    ("fairlead_2", Metric::Del, "fairlead_2", 4.0),
    ("fairlead_3", Metric::Del, "fairlead_3", 4.0),
    ("anchor_1", Metric::Del, "anchor_1", 4.0),
    ("anchor_2", Metric::Del, "anchor_2", 4.0),
    ("anchor_3", Metric::Del, "anchor_3", 4.0),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub channel: String,
    pub metric: Metric,
    /// Raw value per controller, in input order.
    pub values: Vec<f64>,
    /// Values divided by the first (baseline) controller's.
    pub ratios: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub controllers: Vec<String>,
    pub rows: Vec<ReportRow>,
}

impl CompareReport {
    pub fn row(&self, channel: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.channel == channel)
    }

    /// Ratio of `controller` to the baseline on `channel`.
    pub fn ratio(&self, channel: &str, controller: &str) -> Option<f64> {
        let i = self.controllers.iter().position(|c| c == controller)?;
        self.row(channel).map(|r| r.ratios[i])
    }

    /// Comma-separated form: channel, metric, raw values, then ratios.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("channel,metric");
        for c in &self.controllers {
            write!(out, ",{c}_value").ok();
        }
        for c in &self.controllers {
            write!(out, ",{c}_ratio").ok();
        }
        out.push('\n');
        for r in &self.rows {
            write!(out, "{},{}", r.channel, r.metric.label()).ok();
            for v in r.values.iter().chain(&r.ratios) {
                write!(out, ",{v}").ok();
            }
            out.push('\n');
        }
        out
    }

    /// Aligned table of normalized values.
    pub fn to_table(&self) -> String {
        let mut out = format!("{:<20} {:<6}", "channel", "metric");
        for c in &self.controllers {
            write!(out, " {c:>12}").ok();
        }
        out.push('\n');
        for r in &self.rows {
            write!(out, "{:<20} {:<6}", r.channel, r.metric.label()).ok();
            for v in &r.ratios {
                write!(out, " {v:>12.4}").ok();
            }
            out.push('\n');
        }
        out
    }
}

/// Normalized RMS and DEL rows for trajectories of one scenario. The first
/// entry is the baseline.
pub fn compare_report(runs: &[(String, &Trajectory)], trim: f64) -> Result<CompareReport, AnalysisError> {
    let Some((_, base)) = runs.first() else {
        return Err(AnalysisError::EmptySeries("no trajectories".into()));
    };
    for (name, t) in runs {
        if t.header.scenario_hash != base.header.scenario_hash || t.header.seed != base.header.seed {
            return Err(AnalysisError::ScenarioMismatch(format!(
                "`{name}` differs from the baseline in scenario or seed"
            )));
        }
    }
    let mut rows = Vec::with_capacity(REPORT_CHANNELS.len());
    for (channel, metric, column, m) in REPORT_CHANNELS {
        let mut values = Vec::with_capacity(runs.len());
        for (_, t) in runs {
            let mut v = channel_after(t, column, trim)?;
            let value = match metric {
                Metric::Rms => {
                    if column == "rotor_speed" {
                        v.iter_mut().for_each(|w| *w -= t.rated_speed);
                    }
                    rms(&v)?
                }
                Metric::Del => del_compute(
                    &ChannelSeries::new(channel, "", t.dt, v)?,
                    &DelConfig::with_exponent(m),
                ),
            };
            values.push(value);
        }
        let base_value = values[0];
        if base_value == 0.0 {
            return Err(AnalysisError::ZeroBaseline(channel.into()));
        }
        let ratios = values.iter().map(|v| v / base_value).collect();
        rows.push(ReportRow {
            channel: channel.into(),
            metric,
            values,
            ratios,
        });
    }
    Ok(CompareReport {
        controllers: runs.iter().map(|(n, _)| n.clone()).collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series() {
        assert_eq!(av(&[5.0; 8]).unwrap(), 5.0);
        assert_eq!(rms(&[5.0; 8]).unwrap(), 5.0);
        assert!(rainflow_count(&[2.0; 10]).is_empty());
        assert!(matches!(av(&[]), Err(AnalysisError::EmptySeries(_))));
    }

    #[test]
    fn plateaus_collapse() {
        assert_eq!(turning_points(&[0.0, 1.0, 1.0, 2.0, 2.0, -1.0, 0.0]), vec![0.0, 2.0, -1.0, 0.0]);
    }

    #[test]
    fn zero_baseline_is_rejected() {
        assert!(matches!(
            normalized_rms(&[1.0], &[0.0]),
            Err(AnalysisError::ZeroBaseline(_))
        ));
    }
}
