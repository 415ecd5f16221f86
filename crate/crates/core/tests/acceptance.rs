//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Exits zero after reporting so the workspace test run completes; set
//! `ACCEPTANCE_STRICT=1` to turn any FAIL into a nonzero exit status.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use fowt_core::analysis::{av, del_compute, rainflow_count, rms, ChannelSeries, DelConfig};
use fowt_core::config::{load_config, RunConfig};
use fowt_core::control::{ActuatorLimits, ControllerSpec, RiseConfig};
use fowt_core::dynamics::{
    rad_s_to_rpm, simulate, solve_equilibrium, solve_trim, static_residual, step_rk4, EquilibriumSpec,
    InitialReference, InitialSpec, LoadSwitches, Plant, Scenario,
};
use fowt_core::environment::{solve_wavenumber, EnvironmentSample, WaveField, WaveSpec, WindSource};
use fowt_core::frames::{euler_rate_map, rotation_matrix, EulerTriad, Mat3, Vec3};
use fowt_core::hydro::{BuoyancyModel, Platform};
use fowt_core::params::TurbineParams;
use fowt_core::rigid_body::Vector13;
use fowt_core::runner::{run_closedloop, run_openloop, Overrides};
use fowt_core::state::StateVector;
use fowt_core::trajectory::{Trajectory, TrajectoryHeader};
use tempfile::TempDir;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn config(name: &str, out: &Path) -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    let cfg = load_config(&path).expect("shipped config loads").config;
    cfg.with_overrides(&Overrides {
        output_dir: Some(out.to_path_buf()),
        ..Default::default()
    })
    .expect("override is valid")
}

fn open_loop(tmp: &Path) -> Outcome {
    let cfg = config("openloop_table1.toml", &tmp.join("openloop"));
    let start = Instant::now();
    let out = match run_openloop(&cfg) {
        Ok(o) => o,
        Err(e) => return Outcome::new(false, format!("run failed: {e}")),
    };
    let secs = start.elapsed().as_secs_f64();
    let s = out.stats;
    let checks = [
        (s.av_rotor_rpm - 14.57).abs() <= 0.2 * 14.57,
        (s.av_pitch_deg - 1.99).abs() <= 1.0,
        (s.av_surge - 5.42).abs() <= 2.5,
        secs < 60.0,
    ];
    Outcome::new(
        checks.iter().all(|c| *c),
        format!(
            "AV(Omega_r) {:.3} rpm [14.57 +-20%], AV(theta_y) {:.3} deg [1.99 +-1.0], AV(r_x) {:.3} m [5.42 +-2.5], {secs:.1} s [< 60]",
            s.av_rotor_rpm, s.av_pitch_deg, s.av_surge
        ),
    )
}

struct ClosedLoop {
    speed_ratio: f64,
    pitch_rate_ratio: f64,
    tower_ratio: f64,
    fairlead_ratio: f64,
    seconds: f64,
    rise: Trajectory,
    rise_cfg: RiseConfig,
    limits: ActuatorLimits,
    dir: PathBuf,
}

fn closed_loop(tmp: &Path) -> Result<ClosedLoop, String> {
    let cfg = config("closedloop_fig5.toml", &tmp.join("closedloop"));
    let start = Instant::now();
    let out = run_closedloop(&cfg, 2).map_err(|e| e.to_string())?;
    let seconds = start.elapsed().as_secs_f64();
    let ratio = |ch: &str| out.report.ratio(ch, "rise").ok_or(format!("no rise ratio for {ch}"));
    let i = out.labels.iter().position(|l| l == "rise").ok_or("no rise run")?;
    let rise_cfg = match &cfg.controllers[i] {
        ControllerSpec::Rise(c) => c.clone(),
        _ => return Err("rise label on another controller".into()),
    };
    Ok(ClosedLoop {
        speed_ratio: ratio("rotor_speed_error")?,
        pitch_rate_ratio: ratio("pitch_rate")?,
        tower_ratio: ratio("tower_base_proxy")?,
        fairlead_ratio: ratio("fairlead_1")?,
        seconds,
        rise: out.trajectories[i].clone(),
        rise_cfg,
        limits: cfg.limits.clone(),
        dir: out.output_dir,
    })
}

fn comparison(cl: &ClosedLoop) -> Outcome {
    Outcome::new(
        cl.speed_ratio <= 0.70 && cl.pitch_rate_ratio <= 1.05 && cl.seconds < 180.0,
        format!(
            "RMS(dOmega_r) ratio {:.4} [<= 0.70], RMS(pitch rate) ratio {:.4} [<= 1.05], pair {:.1} s [< 180]",
            cl.speed_ratio, cl.pitch_rate_ratio, cl.seconds
        ),
    )
}

fn damage(cl: &ClosedLoop) -> Outcome {
    Outcome::new(
        cl.tower_ratio <= 1.0 && cl.fairlead_ratio <= 1.0,
        format!(
            "DEL ratio tower-base proxy {:.4} [<= 1.00], fairlead 1 {:.4} [<= 1.00]",
            cl.tower_ratio, cl.fairlead_ratio
        ),
    )
}

fn reference() -> Plant {
    Plant::new(TurbineParams::reference()).unwrap()
}

fn frames_check() -> bool {
    let mut ok = true;
    for i in 0..200 {
        let a = i as f64;
        let theta = EulerTriad::new((0.37 * a).sin() * 3.0, (0.23 * a).cos() * 1.5, (0.11 * a).sin() * 3.1);
        let r = rotation_matrix(theta);
        ok &= (r.transpose() * r - Mat3::identity()).abs().max() < 1e-12;
        ok &= (r.determinant() - 1.0).abs() < 1e-12;
        ok &= euler_rate_map(EulerTriad::new(0.0, 0.0, theta.yaw)).unwrap() == Mat3::identity();
    }
    ok
}

fn matrices_check() -> bool {
    let plant = reference();
    let m = &plant.matrices;
    let s1 = m.coefficients.m_s1();
    let sym6 = |a: &nalgebra::Matrix6<f64>| (0..6).all(|i| (0..6).all(|j| a[(i, j)] == a[(j, i)]));
    let sym7 = (0..7).all(|i| (0..7).all(|j| m.m_bar_s[(i, j)] == m.m_bar_s[(j, i)]));
    sym6(&s1) && sym6(&m.m_a) && sym7 && m.m_bar_s.symmetric_eigenvalues().min() > 0.0 && plant.control_input_gains().1 > 0.0
}

fn controller_run_check(cl: &ClosedLoop) -> (bool, bool, bool) {
    let t = &cl.rise;
    let gamma = t.column("gamma").unwrap();
    let closed = t.column("gamma_closed_form").unwrap();
    let gamma_ok = gamma.iter().zip(&closed).all(|(g, c)| (g - c).abs() <= 1e-9);
    let bound = cl.rise_cfg.weight_bound();
    let weights_ok = t.column("weight_norm").unwrap().iter().all(|w| *w <= bound);
    let step = cl.limits.rate_max() * t.dt * (1.0 + 1e-12);
    let beta = t.column("beta").unwrap();
    let beta_ok = beta.windows(2).all(|w| (w[1] - w[0]).abs() <= step);
    (gamma_ok, weights_ok, beta_ok)
}

fn conservative_plant() -> Plant {
    let mut p = TurbineParams::reference();
    for c in &mut p.cylinders {
        c.drag_coefficient = 0.0;
        c.heave_drag_coefficient = 0.0;
    }
    p.body.tower_mass *= 0.05;
    p.body.nacelle_mass *= 0.05;
    p.body.rotor_mass *= 0.05;
    let volume: f64 = p
        .cylinders
        .iter()
        .map(|c| std::f64::consts::PI * c.diameter * c.diameter / 4.0 * c.submerged_length)
        .sum();
    p.body.platform_mass = p.hydro.water_density * volume - p.body.tower_mass - p.body.nacelle_mass - p.body.rotor_mass;
    Plant::new(p)
        .unwrap()
        .with_switches(LoadSwitches {
            hydro: true,
            mooring: false,
            aero: false,
        })
        .with_buoyancy_model(BuoyancyModel::FrozenVolume)
}

fn integrate(plant: &Plant, x0: &StateVector, dt: f64, steps: usize, mut each: impl FnMut(&StateVector)) -> Vector13 {
    let waves = WaveField::calm(plant.gravity(), plant.params.hydro.water_density);
    let mut x = x0.to_vector();
    for n in 0..steps {
        x = step_rk4(&x, n as f64 * dt, dt, |t, x: &Vector13| {
            let env = EnvironmentSample {
                t,
                wind: Vec3::zeros(),
                waves: &waves,
            };
            plant.state_derivative(&StateVector::from_vector(x), &env, 0.0, 0.0)
        })
        .unwrap();
        each(&StateVector::from_vector(&x));
    }
    x
}

fn integrator_checks() -> (f64, f64) {
    let plant = conservative_plant();
    let x0 = StateVector {
        r: Vec3::new(0.5, -0.3, 0.2),
        theta: EulerTriad::new(0.03, 0.06, 0.02),
        v: Vec3::new(0.2, 0.1, -0.05),
        omega: Vec3::new(0.01, -0.015, 0.005),
        rotor_speed: 0.0,
    };
    let e0 = plant.mechanical_energy(&x0);
    let excess = e0 - plant.mechanical_energy(&StateVector::default());
    let mut worst = 0.0f64;
    integrate(&plant, &x0, 0.0125, 8000, |s| worst = worst.max((plant.mechanical_energy(s) - e0).abs()));
    let run = |dt: f64| integrate(&plant, &x0, dt, (20.0 / dt).round() as usize, |_| {});
    let (a, b, c) = (run(0.2), run(0.1), run(0.05));
    (worst / excess, (a - b).norm() / (b - c).norm())
}

fn hydro_checks() -> (f64, f64) {
    let params = TurbineParams::reference();
    let platform = Platform::new(&params);
    let waves = WaveField::new(
        &WaveSpec {
            height: 3.0,
            period: 10.0,
            ..WaveSpec::calm()
        },
        9.81,
        1025.0,
    )
    .unwrap();
    let state = StateVector {
        r: Vec3::new(4.0, 0.5, -0.8),
        theta: EulerTriad::new(0.01, 0.05, -0.02),
        v: Vec3::new(0.4, -0.1, 0.2),
        omega: Vec3::new(0.005, 0.02, -0.003),
        rotor_speed: 1.2,
    };
    let mut worst = 0.0f64;
    for t in [0.0, 1.7, 3.3, 6.1, 8.9] {
        let eta = platform.member_elevations(&state, &waves, t);
        for i in 0..platform.cylinders().len() {
            let (len, _) = platform.submerged_length(i, &state, eta[i]).unwrap();
            let coarse = platform.morison_with_points(i, &state, len, &waves, t, 32);
            let fine = platform.morison_with_points(i, &state, len, &waves, t, 64);
            worst = worst.max((coarse.force - fine.force).norm() / fine.force.norm().max(1.0));
        }
    }
    let mut residual = 0.0f64;
    for period in [3.0, 6.0, 10.0, 15.0, 25.0] {
        for depth in [None, Some(20.0), Some(200.0)] {
            let omega = 2.0 * std::f64::consts::PI / period;
            let k = solve_wavenumber(omega, 9.81, depth);
            let rhs = depth.map_or(9.81 * k, |h| 9.81 * k * (k * h).tanh());
            residual = residual.max(((omega * omega - rhs) / (omega * omega)).abs());
        }
    }
    (worst, residual)
}

fn pitch_sensitivity_negative() -> bool {
    let p = reference();
    let rated = p.rated_speed();
    let h = 0.25f64.to_radians();
    let mut ok = true;
    for iu in 0..=27 {
        let u = 11.4 + iu as f64 * 0.5;
        for w in [0.9 * rated, rated, 1.1 * rated] {
            let s = StateVector {
                rotor_speed: w,
                ..Default::default()
            };
            for ib in 0..=60 {
                let beta = (0.5 * ib as f64).to_radians() + h;
                let at = |b: f64| fowt_core::aero::aero_loads(&p.params.rotor, &p.table, &s, &Vec3::new(u, 0.0, 0.0), &p.hub, b);
                let (hi, lo) = (at(beta + h), at(beta - h));
                ok &= hi.torque < lo.torque && hi.thrust < lo.thrust;
            }
        }
    }
    ok
}

fn balance_checks() -> (f64, f64) {
    let plant = reference();
    let waves = WaveField::calm(plant.gravity(), plant.params.hydro.water_density);
    let calm = solve_equilibrium(&plant, &EquilibriumSpec::calm()).unwrap();
    let trim = solve_trim(&plant, 18.0, plant.rated_speed()).unwrap();
    let r1 = static_residual(&plant, &calm.state, 0.0, calm.beta, 0.0, &waves).unwrap().rows(0, 6).amax();
    let tau = plant.generator_torque(plant.rated_speed());
    let r2 = static_residual(&plant, &trim.state, 18.0, trim.beta, tau, &waves).unwrap().amax();
    let scenario = Scenario {
        name: "hold".into(),
        wind: WindSource::Constant { mean_speed: 0.0 },
        wave: WaveSpec::calm(),
        duration: 100.0,
        dt: 0.0125,
        seed: 0,
        initial: InitialSpec {
            reference: InitialReference::Calm,
            rotor_speed_rpm: Some(0.0),
            beta_deg: Some(90.0),
            ..Default::default()
        },
    };
    let t = simulate(
        &plant,
        &scenario,
        &ControllerSpec::FixedPitch { beta_deg: 90.0 },
        &ActuatorLimits::default(),
        TrajectoryHeader::default(),
    )
    .unwrap();
    let x0 = calm.state.to_vector();
    let drift = t
        .rows()
        .flat_map(|row| (0..13).map(move |i| (row[1 + i] - x0[i]).abs()))
        .fold(0.0, f64::max);
    (r1.max(r2), drift)
}

fn metric_checks() -> (bool, bool, bool) {
    let x: Vec<f64> = (0..2000).map(|i| (0.031 * i as f64).sin() * 3.0 + (0.173 * i as f64).cos()).collect();
    let cfg = DelConfig::default();
    let series = |v: Vec<f64>| ChannelSeries::new("x", "", 0.05, v).unwrap();
    let base_del = del_compute(&series(x.clone()), &cfg);
    let base_rms = rms(&x).unwrap();
    let mut homogeneous = true;
    let mut scaling = true;
    for alpha in [-3.0, 0.5, 2.0, 7.0] {
        let y: Vec<f64> = x.iter().map(|v| alpha * v).collect();
        homogeneous &= (del_compute(&series(y.clone()), &cfg) - alpha.abs() * base_del).abs() <= 1e-12 * alpha.abs() * base_del;
        scaling &= (rms(&y).unwrap() - alpha.abs() * base_rms).abs() <= 1e-12 * alpha.abs() * base_rms;
        let shifted: Vec<f64> = x.iter().map(|v| v + alpha).collect();
        scaling &= (av(&shifted).unwrap() - (av(&x).unwrap() + alpha)).abs() <= 1e-12;
    }
    let mut hist = std::collections::BTreeMap::new();
    for c in rainflow_count(&[-2.0, 1.0, -3.0, 5.0, -1.0, 3.0, -4.0, 4.0, -2.0]) {
        *hist.entry(c.range as i64).or_insert(0.0) += c.count;
    }
    let canonical: std::collections::BTreeMap<i64, f64> =
        [(3, 0.5), (4, 1.5), (6, 0.5), (8, 1.0), (9, 0.5)].into_iter().collect();
    (homogeneous, scaling, hist == canonical)
}

fn directory_bytes(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn determinism(cl: &ClosedLoop, tmp: &Path) -> bool {
    let cfg = config("closedloop_fig5.toml", &tmp.join("closedloop_repeat"));
    let Ok(again) = run_closedloop(&cfg, 1) else { return false };
    directory_bytes(&cl.dir) == directory_bytes(&again.output_dir)
}

fn properties(cl: Option<&ClosedLoop>, tmp: &Path) -> Outcome {
    let mut items: Vec<(&str, bool)> = Vec::new();
    items.push(("rotation/rate map", frames_check()));
    items.push(("mass matrices/b2", matrices_check()));
    match cl {
        Some(cl) => {
            let (g, w, b) = controller_run_check(cl);
            items.push(("gain closed form", g));
            items.push(("weight bound", w));
            items.push(("pitch continuity", b));
        }
        None => items.push(("closed-loop run", false)),
    }
    let (drift, order) = integrator_checks();
    items.push(("energy drift", drift < 1e-3));
    items.push(("rk4 order", (12.0..=20.0).contains(&order)));
    let (morison, dispersion) = hydro_checks();
    items.push(("morison doubling", morison < 1e-3));
    items.push(("dispersion", dispersion < 1e-10));
    items.push(("pitch sensitivity", pitch_sensitivity_negative()));
    let (residual, hold) = balance_checks();
    items.push(("static residual", residual < 1e-8));
    items.push(("zero-environment hold", hold < 1e-4));
    let (del, scaling, rainflow) = metric_checks();
    items.push(("del homogeneity", del));
    items.push(("rms/av scaling", scaling));
    items.push(("rainflow canonical", rainflow));
    items.push(("determinism", cl.is_some_and(|cl| determinism(cl, tmp))));
    let failed: Vec<&str> = items.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    Outcome::new(
        failed.is_empty(),
        if failed.is_empty() {
            format!(
                "{} checks; energy drift {drift:.2e}, order ratio {order:.2}, morison {morison:.2e}, dispersion {dispersion:.1e}, residual {residual:.1e}, hold {hold:.1e}",
                items.len()
            )
        } else {
            format!("failed: {}", failed.join(", "))
        },
    )
}

fn regulation() -> Outcome {
    let plant = reference();
    let limits = ActuatorLimits::default();
    let trim = solve_trim(&plant, 18.0, plant.rated_speed()).unwrap();
    let scenario = Scenario {
        name: "regulation".into(),
        wind: WindSource::Constant { mean_speed: 18.0 },
        wave: WaveSpec::calm(),
        duration: 400.0,
        dt: 0.0125,
        seed: 0,
        initial: InitialSpec {
            reference: InitialReference::Calm,
            surge: 5.0,
            pitch_deg: 9.0,
            beta_deg: Some(trim.beta.to_degrees()),
            ..Default::default()
        },
    };
    let t = match simulate(
        &plant,
        &scenario,
        &ControllerSpec::Rise(RiseConfig::default()),
        &limits,
        TrajectoryHeader::default(),
    ) {
        Ok(t) => t,
        Err(e) => return Outcome::new(false, format!("run failed: {e}")),
    };
    let late = t.after("xi", 200.0 + 0.5 * t.dt).unwrap();
    let worst = late.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let beta = t.column("beta").unwrap();
    let inside = beta.iter().all(|b| (limits.beta_min()..=limits.beta_max()).contains(b));
    let sat = t.column("rate_saturated").unwrap();
    let fraction = sat.iter().sum::<f64>() / sat.len() as f64;
    let speed = t.after("rotor_speed", 200.0).unwrap();
    Outcome::new(
        worst < 0.02 && inside && fraction < 0.05,
        format!(
            "max |xi| after 200 s {worst:.2e} rad/s [< 0.02], pitch inside limits {inside}, saturated steps {:.2}% [< 5%], mean speed {:.3} rpm",
            100.0 * fraction,
            rad_s_to_rpm(av(&speed).unwrap())
        ),
    )
}

fn main() {
    let tmp = TempDir::new().expect("temporary directory");
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "open-loop response", open_loop(tmp.path())));
    let cl = closed_loop(tmp.path());
    match &cl {
        Ok(cl) => {
            results.push((2, "closed-loop comparison", comparison(cl)));
            results.push((3, "damage-equivalent load direction", damage(cl)));
        }
        Err(e) => {
            results.push((2, "closed-loop comparison", Outcome::new(false, format!("run failed: {e}"))));
            results.push((3, "damage-equivalent load direction", Outcome::new(false, "no closed-loop run")));
        }
    }
    results.push((4, "property suite", properties(cl.as_ref().ok(), tmp.path())));
    results.push((5, "regulation", regulation()));

    let mut failures = 0;
    for (n, name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failures += usize::from(!o.pass);
        println!("criterion {n} {tag}: {name}: {}", o.detail);
    }
    println!("{} of {} criteria passed", results.len() - failures, results.len());
    if failures > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
