//! Rotor thrust and shaft torque from power/thrust coefficient surfaces.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::ParamError;
use crate::frames::Vec3;
use crate::loads::{LoadSource, LoadWrench};
use crate::params::{RotorSpec, SurrogateCoefficients, TableGrid};
use crate::state::StateVector;

/// Betz limit on the power coefficient.
pub const BETZ_LIMIT: f64 = 16.0 / 27.0;
/// Inflow below which the rotor is treated as unloaded.
pub const MIN_INFLOW: f64 = 0.1;

/// Cp and Ct tabulated over tip-speed ratio (rows) and pitch (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct RotorAeroTable {
    lambda: Vec<f64>,
    beta: Vec<f64>,
    cp: Vec<f64>,
    ct: Vec<f64>,
}

impl RotorAeroTable {
    /// `cp` and `ct` are row-major with one row per tip-speed ratio; pitch in
    /// radians.
    pub fn new(lambda: Vec<f64>, beta: Vec<f64>, cp: Vec<f64>, ct: Vec<f64>) -> Result<Self, ParamError> {
        let invalid = |m: &str| Err(ParamError::InvalidParameters(format!("rotor table: {m}")));
        if lambda.len() < 2 || beta.len() < 2 {
            return invalid("need at least two breakpoints per axis");
        }
        if lambda.windows(2).any(|w| !(w[1] > w[0])) || beta.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("breakpoints must be strictly ascending");
        }
        let n = lambda.len() * beta.len();
        if cp.len() != n || ct.len() != n {
            return invalid("grid is not rectangular");
        }
        if cp.iter().chain(&ct).any(|v| !v.is_finite()) {
            return invalid("non-finite coefficient");
        }
        if cp.iter().any(|v| *v < 0.0 || *v > BETZ_LIMIT) {
            return invalid("Cp outside [0, 16/27]");
        }
        if ct.iter().any(|v| *v < 0.0) {
            return invalid("negative Ct");
        }
        Ok(Self { lambda, beta, cp, ct })
    }

    /// Tabulates the analytic surface on `grid`.
    pub fn from_surrogate(s: &SurrogateCoefficients, grid: &TableGrid) -> Result<Self, ParamError> {
        let lambda = breakpoints(grid.lambda_min, grid.lambda_max, grid.lambda_step);
        let beta_deg = breakpoints(0.0, grid.beta_max_deg, grid.beta_step_deg);
        let mut cp = Vec::with_capacity(lambda.len() * beta_deg.len());
        let mut ct = Vec::with_capacity(cp.capacity());
        for &l in &lambda {
            for &b in &beta_deg {
                let p = surrogate_cp(s, l, b);
                cp.push(p);
                ct.push(momentum_thrust_coefficient(p));
            }
        }
        let beta = beta_deg.iter().map(|b| b.to_radians()).collect();
        Self::new(lambda, beta, cp, ct)
    }

    /// Reads the text layout written by [`RotorAeroTable::to_text`].
    ///
    /// Two blocks introduced by lines `cp` and `ct`. In each block the first
    /// row holds a label followed by the pitch breakpoints in degrees; every
    /// further row holds a tip-speed ratio followed by the coefficients.
    /// Fields are separated by commas, tabs or spaces and `#` starts a
    /// comment line.
    pub fn load(path: &Path) -> Result<Self, ParamError> {
        let text = fs::read_to_string(path).map_err(|source| ParamError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|message| ParamError::Parse {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        #[derive(Default)]
        struct Block {
            beta: Vec<f64>,
            lambda: Vec<f64>,
            values: Vec<f64>,
        }
        let mut blocks: [Option<Block>; 2] = [None, None];
        let mut current: Option<usize> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line.to_ascii_lowercase().as_str() {
                "cp" => {
                    current = Some(0);
                    blocks[0] = Some(Block::default());
                    continue;
                }
                "ct" => {
                    current = Some(1);
                    blocks[1] = Some(Block::default());
                    continue;
                }
                _ => {}
            }
            let idx = current.ok_or_else(|| format!("line {}: data before a `cp`/`ct` marker", lineno + 1))?;
            let block = blocks[idx].as_mut().expect("block opened by marker");
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| format!("line {}: `{s}` is not a number", lineno + 1))
            };
            if block.beta.is_empty() {
                for f in &fields[1..] {
                    block.beta.push(parse(f)?);
                }
                continue;
            }
            if fields.len() != block.beta.len() + 1 {
                return Err(format!(
                    "line {}: expected {} columns, found {}",
                    lineno + 1,
                    block.beta.len() + 1,
                    fields.len()
                ));
            }
            block.lambda.push(parse(fields[0])?);
            for f in &fields[1..] {
                block.values.push(parse(f)?);
            }
        }
        let [Some(cp), Some(ct)] = blocks else {
            return Err("both `cp` and `ct` blocks are required".into());
        };
        if cp.beta != ct.beta || cp.lambda != ct.lambda {
            return Err("cp and ct blocks use different breakpoints".into());
        }
        let beta = cp.beta.iter().map(|b| b.to_radians()).collect();
        Self::new(cp.lambda, beta, cp.values, ct.values).map_err(|e| e.to_string())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, values) in [("cp", &self.cp), ("ct", &self.ct)] {
            let _ = writeln!(out, "{name}");
            let _ = write!(out, "lambda\\beta_deg");
            for b in &self.beta {
                let _ = write!(out, ",{}", b.to_degrees());
            }
            out.push('\n');
            for (i, l) in self.lambda.iter().enumerate() {
                let _ = write!(out, "{l}");
                for j in 0..self.beta.len() {
                    let _ = write!(out, ",{}", values[i * self.beta.len() + j]);
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn lambda_grid(&self) -> &[f64] {
        &self.lambda
    }

    pub fn beta_grid(&self) -> &[f64] {
        &self.beta
    }

    /// Stored values at node `(i, j)`.
    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        let k = i * self.beta.len() + j;
        (self.cp[k], self.ct[k])
    }

    /// Bilinear interpolation, clamped to the grid boundary.
    pub fn lookup(&self, lambda: f64, beta: f64) -> (f64, f64) {
        let (i, u) = locate(&self.lambda, lambda);
        let (j, w) = locate(&self.beta, beta);
        let nb = self.beta.len();
        let blend = |v: &[f64]| {
            let a = v[i * nb + j];
            let b = v[i * nb + j + 1];
            let c = v[(i + 1) * nb + j];
            let d = v[(i + 1) * nb + j + 1];
            (1.0 - u) * ((1.0 - w) * a + w * b) + u * ((1.0 - w) * c + w * d)
        };
        (blend(&self.cp), blend(&self.ct))
    }

    /// Torque coefficient `Cp / lambda`, held constant below the smallest
    /// tabulated tip-speed ratio.
    pub fn torque_coefficient(&self, lambda: f64, beta: f64) -> f64 {
        let l = lambda.max(self.lambda[0]);
        self.lookup(l, beta).0 / l
    }
}

fn breakpoints(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step).round() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

/// Segment index and fractional position of `x`, clamped to the grid.
fn locate(grid: &[f64], x: f64) -> (usize, f64) {
    let last = grid.len() - 1;
    if !(x > grid[0]) {
        return (0, 0.0);
    }
    if x >= grid[last] {
        return (last - 1, 1.0);
    }
    let i = grid.partition_point(|g| *g <= x) - 1;
    (i, (x - grid[i]) / (grid[i + 1] - grid[i]))
}

/// Analytic power coefficient; pitch in degrees.
pub fn surrogate_cp(s: &SurrogateCoefficients, lambda: f64, beta_deg: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    let x = lambda / s.peak_tip_speed_ratio;
    let p = s.shape_exponent;
    let shape = (p * (x.ln() + 1.0 - x)).exp();
    let b = beta_deg.max(0.0);
    let pitch = (-s.pitch_linear_per_deg * b - s.pitch_quadratic_per_deg2 * b * b).exp();
    (s.peak_cp * shape * pitch).min(BETZ_LIMIT)
}

/// Thrust coefficient of an actuator disc extracting power coefficient `cp`.
pub fn momentum_thrust_coefficient(cp: f64) -> f64 {
    let cp = cp.clamp(0.0, BETZ_LIMIT);
    if cp == 0.0 {
        return 0.0;
    }
    // 4a(1-a)^2 is increasing on [0, 1/3].
    let (mut lo, mut hi) = (0.0_f64, 1.0 / 3.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if 4.0 * mid * (1.0 - mid) * (1.0 - mid) < cp {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = 0.5 * (lo + hi);
    4.0 * a * (1.0 - a)
}

/// Rotor loads at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AeroLoads {
    pub thrust: f64,
    pub torque: f64,
    pub wrench: LoadWrench,
    pub inflow: f64,
    pub tip_speed_ratio: f64,
    pub cp: f64,
    pub ct: f64,
}

impl AeroLoads {
    /// No load, with the given inflow recorded.
    pub fn idle(inflow: f64) -> Self {
        Self {
            thrust: 0.0,
            torque: 0.0,
            wrench: LoadWrench::zero(LoadSource::Aerodynamic),
            inflow,
            tip_speed_ratio: 0.0,
            cp: 0.0,
            ct: 0.0,
        }
    }
}

/// Axial wind relative to the moving hub, clamped at zero.
pub fn relative_axial_wind(state: &StateVector, wind: &Vec3, hub: &Vec3) -> f64 {
    let wind_body = state.rotation().transpose() * wind;
    let hub_vel = state.v + state.omega.cross(hub);
    (wind_body - hub_vel)[0].max(0.0)
}

/// Thrust, shaft torque and the platform-frame wrench of the rotor.
pub fn aero_loads(
    rotor: &RotorSpec,
    table: &RotorAeroTable,
    state: &StateVector,
    wind: &Vec3,
    hub: &Vec3,
    beta: f64,
) -> AeroLoads {
    let u = relative_axial_wind(state, wind, hub);
    if u < MIN_INFLOW {
        return AeroLoads::idle(u);
    }
    let r = rotor.radius;
    let lambda = state.rotor_speed.max(0.0) * r / u;
    let (cp, ct) = table.lookup(lambda, beta);
    let cq = table.torque_coefficient(lambda, beta);
    let q = 0.5 * rotor.air_density * std::f64::consts::PI * r * r * u * u;
    let thrust = q * ct;
    let torque = q * r * cq;
    let force = Vec3::new(thrust, 0.0, 0.0);
    let wrench = LoadWrench::new(
        force,
        Vec3::new(torque, 0.0, 0.0) + hub.cross(&force),
        LoadSource::Aerodynamic,
    );
    AeroLoads {
        thrust,
        torque,
        wrench,
        inflow: u,
        tip_speed_ratio: lambda,
        cp,
        ct,
    }
}

/// Generator reaction torque at the rotor side: zero below cut-in, a linear
/// ramp up to rated, then constant.
pub fn generator_torque(rotor: &RotorSpec, rotor_speed: f64) -> f64 {
    if rotor_speed <= rotor.cut_in_speed {
        return 0.0;
    }
    if rotor_speed >= rotor.ramp_end_speed {
        return rotor.rated_torque;
    }
    rotor.rated_torque * (rotor_speed - rotor.cut_in_speed) / (rotor.ramp_end_speed - rotor.cut_in_speed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::TurbineParams;

    fn table() -> RotorAeroTable {
        RotorAeroTable::new(
            vec![1.0, 2.0],
            vec![0.0, 0.1],
            vec![0.1, 0.2, 0.3, 0.4],
            vec![0.5, 0.6, 0.7, 0.8],
        )
        .unwrap()
    }

    #[test]
    fn node_and_cell_center() {
        let t = table();
        assert_eq!(t.lookup(2.0, 0.0), (0.3, 0.7));
        let (cp, ct) = t.lookup(1.5, 0.05);
        assert!((cp - 0.25).abs() < 1e-15 && (ct - 0.65).abs() < 1e-15);
    }

    #[test]
    fn clamps_outside_grid() {
        let t = table();
        assert_eq!(t.lookup(1.0, 0.5), t.lookup(1.0, 0.1));
        assert_eq!(t.lookup(-3.0, -1.0), (0.1, 0.5));
    }

    #[test]
    fn rejects_super_betz() {
        assert!(RotorAeroTable::new(vec![1.0, 2.0], vec![0.0, 1.0], vec![0.6; 4], vec![0.5; 4]).is_err());
    }

    #[test]
    fn zero_inflow_gives_no_load() {
        let p = TurbineParams::reference();
        let t = table();
        let mut s = StateVector::default();
        s.rotor_speed = 1.0;
        let l = aero_loads(&p.rotor, &t, &s, &Vec3::zeros(), &p.body.hub_position(), 0.0);
        assert_eq!((l.thrust, l.torque), (0.0, 0.0));
    }

    #[test]
    fn surging_platform_in_still_air_clamps() {
        let mut s = StateVector::default();
        s.v[0] = 2.0;
        assert_eq!(relative_axial_wind(&s, &Vec3::zeros(), &Vec3::new(-5.0, 0.0, 100.0)), 0.0);
    }

    #[test]
    fn generator_law() {
        let r = TurbineParams::reference().rotor;
        assert_eq!(generator_torque(&r, 0.0), 0.0);
        assert_eq!(generator_torque(&r, 1.4), r.rated_torque);
        assert!((r.rated_torque * r.rated_speed / r.rated_power - 1.0).abs() < 1e-3);
    }

    #[test]
    fn momentum_thrust_inverts_power() {
        // Cp is flat in the induction factor at the Betz point, so the
        // inverse is only accurate to about sqrt(machine epsilon) there.
        let ct = momentum_thrust_coefficient(16.0 / 27.0);
        assert!((ct - 8.0 / 9.0).abs() < 1e-6);
        let a: f64 = 0.2;
        let ct = momentum_thrust_coefficient(4.0 * a * (1.0 - a).powi(2));
        assert!((ct - 4.0 * a * (1.0 - a)).abs() < 1e-12);
        assert_eq!(momentum_thrust_coefficient(0.0), 0.0);
    }
}
