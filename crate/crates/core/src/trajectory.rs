//! Sampled simulation output and its delimited-text form.
//!
//! A file starts with `#`-prefixed `key: value` header lines, then a single
//! comma-separated column row, then one row per sample. Values use the
//! shortest representation that round-trips.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::Error;

/// Column names in file order.
pub const COLUMNS: [&str; 56] = [
    "t",
    "surge",
    "sway",
    "heave",
    "roll",
    "pitch",
    "yaw",
    "u",
    "v",
    "w",
    "p",
    "q",
    "r",
    "rotor_speed",
    "beta",
    "beta_rate_raw",
    "beta_rate",
    "rate_saturated",
    "generator_torque",
    "aero_torque",
    "thrust",
    "xi",
    "xi_bar",
    "gamma",
    "gamma_closed_form",
    "weight_norm",
    "buoyancy_fx",
    "buoyancy_fy",
    "buoyancy_fz",
    "buoyancy_mx",
    "buoyancy_my",
    "buoyancy_mz",
    "hydro_fx",
    "hydro_fy",
    "hydro_fz",
    "hydro_mx",
    "hydro_my",
    "hydro_mz",
    "aero_fx",
    "aero_fy",
    "aero_fz",
    "aero_mx",
    "aero_my",
    "aero_mz",
    "mooring_fx",
    "mooring_fy",
    "mooring_fz",
    "mooring_mx",
    "mooring_my",
    "mooring_mz",
    "fairlead_1",
    "fairlead_2",
    "fairlead_3",
    "anchor_1",
    "anchor_2",
    "anchor_3",
];

/// Columns appended after the load channels.
pub const TAIL_COLUMNS: [&str; 4] = ["wind_speed", "inflow", "eta", "tower_base_proxy"];

pub const WIDTH: usize = COLUMNS.len() + TAIL_COLUMNS.len();

pub fn column_names() -> impl Iterator<Item = &'static str> {
    COLUMNS.iter().chain(TAIL_COLUMNS.iter()).copied()
}

pub fn column_index(name: &str) -> Option<usize> {
    column_names().position(|c| c == name)
}

/// Run identification written at the top of every output file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrajectoryHeader {
    pub scenario: String,
    pub controller: String,
    pub config_hash: String,
    pub scenario_hash: String,
    pub seed: u64,
}

impl TrajectoryHeader {
    pub fn lines(&self) -> String {
        format!(
            "# scenario: {}\n# controller: {}\n# config_hash: {}\n# scenario_hash: {}\n# seed: {}\n",
            self.scenario, self.controller, self.config_hash, self.scenario_hash, self.seed
        )
    }
}

/// Uniformly sampled run, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub header: TrajectoryHeader,
    pub dt: f64,
    pub rated_speed: f64,
    data: Vec<f64>,
    /// Columns carried by the source file; all for simulated runs.
    present: Vec<bool>,
}

impl Trajectory {
    pub fn new(header: TrajectoryHeader, dt: f64, rated_speed: f64) -> Self {
        Self {
            header,
            dt,
            rated_speed,
            data: Vec::new(),
            present: vec![true; WIDTH],
        }
    }

    pub fn with_capacity(header: TrajectoryHeader, dt: f64, rated_speed: f64, rows: usize) -> Self {
        let mut t = Self::new(header, dt, rated_speed);
        t.data.reserve(rows * WIDTH);
        t
    }

    pub fn push(&mut self, row: &[f64; WIDTH]) {
        self.data.extend_from_slice(row);
    }

    pub fn len(&self) -> usize {
        self.data.len() / WIDTH
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * WIDTH..(i + 1) * WIDTH]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(WIDTH)
    }

    pub fn times(&self) -> Vec<f64> {
        self.column_at(0)
    }

    pub fn column_at(&self, idx: usize) -> Vec<f64> {
        self.rows().map(|r| r[idx]).collect()
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        column_index(name).filter(|i| self.present[*i])
    }

    /// Values of a named column; `None` for an unknown or absent column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        self.index_of(name).map(|i| self.column_at(i))
    }

    /// Samples with `t >= start`.
    pub fn after(&self, name: &str, start: f64) -> Option<Vec<f64>> {
        let idx = self.index_of(name)?;
        Some(self.rows().filter(|r| r[0] >= start).map(|r| r[idx]).collect())
    }

    pub fn to_text(&self) -> String {
        self.to_text_selected(None)
    }

    /// Text form restricted to `selection` (plus time, always first).
    pub fn to_text_selected(&self, selection: Option<&[String]>) -> String {
        let keep: Vec<usize> = (0..WIDTH)
            .filter(|&i| {
                self.present[i]
                    && (i == 0
                        || selection.is_none_or(|s| s.iter().any(|n| column_index(n) == Some(i))))
            })
            .collect();
        let names: Vec<&str> = column_names().collect();
        let mut out = self.header.lines();
        writeln!(out, "# dt: {}", self.dt).ok();
        writeln!(out, "# rated_speed: {}", self.rated_speed).ok();
        out.push_str(&keep.iter().map(|i| names[*i]).collect::<Vec<_>>().join(","));
        out.push('\n');
        for row in self.rows() {
            for (k, i) in keep.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write!(out, "{}", row[*i]).ok();
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), Error> {
        self.write_selected(path, None)
    }

    pub fn write_selected(&self, path: &Path, selection: Option<&[String]>) -> Result<(), Error> {
        let io = |source| Error::Output {
            path: path.to_path_buf(),
            source,
        };
        let mut f = fs::File::create(path).map_err(io)?;
        f.write_all(self.to_text_selected(selection).as_bytes()).map_err(io)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut header = TrajectoryHeader::default();
        let mut dt = None;
        let mut rated = None;
        let mut data = Vec::new();
        let mut layout: Option<Vec<usize>> = None;
        for (n, line) in text.lines().enumerate() {
            if let Some(rest) = line.strip_prefix('#') {
                let Some((key, value)) = rest.split_once(':') else { continue };
                let value = value.trim();
                let num = |v: &str| v.parse::<f64>().map_err(|e| format!("line {}: {e}", n + 1));
                match key.trim() {
                    "scenario" => header.scenario = value.into(),
                    "controller" => header.controller = value.into(),
                    "config_hash" => header.config_hash = value.into(),
                    "scenario_hash" => header.scenario_hash = value.into(),
                    "seed" => header.seed = value.parse().map_err(|e| format!("line {}: {e}", n + 1))?,
                    "dt" => dt = Some(num(value)?),
                    "rated_speed" => rated = Some(num(value)?),
                    _ => {}
                }
                continue;
            }
            let Some(cols) = &layout else {
                let cols = line
                    .split(',')
                    .map(|name| column_index(name.trim()).ok_or(format!("line {}: unknown column `{name}`", n + 1)))
                    .collect::<Result<Vec<_>, _>>()?;
                if cols.first() != Some(&0) {
                    return Err(format!("line {}: the first column must be t", n + 1));
                }
                layout = Some(cols);
                continue;
            };
            let mut row = [f64::NAN; WIDTH];
            let mut count = 0;
            for (k, field) in line.split(',').enumerate() {
                let i = *cols.get(k).ok_or(format!("line {}: too many values", n + 1))?;
                row[i] = field.parse::<f64>().map_err(|e| format!("line {}: {e}", n + 1))?;
                count += 1;
            }
            if count != cols.len() {
                return Err(format!("line {}: expected {} values", n + 1, cols.len()));
            }
            data.extend_from_slice(&row);
        }
        let cols = layout.ok_or("missing column row")?;
        let mut present = vec![false; WIDTH];
        cols.iter().for_each(|i| present[*i] = true);
        Ok(Self {
            header,
            dt: dt.ok_or("missing dt header")?,
            rated_speed: rated.ok_or("missing rated_speed header")?,
            data,
            present,
        })
    }

    pub fn read(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|source| Error::Output {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|message| {
            Error::Config(crate::error::ConfigError::Parse {
                path: path.to_path_buf(),
                message,
            })
        })
    }
}
