use approx::assert_relative_eq;
use fowt_core::environment::{solve_wavenumber, WaveField, WaveSpec};
use fowt_core::frames::{EulerTriad, Vec3};
use fowt_core::hydro::{MooringModel, Platform};
use fowt_core::params::TurbineParams;
use fowt_core::state::StateVector;
use proptest::prelude::*;

const G: f64 = 9.81;
const RHO: f64 = 1025.0;

fn waves() -> WaveField {
    let spec = WaveSpec {
        height: 3.0,
        period: 10.0,
        ..WaveSpec::calm()
    };
    WaveField::new(&spec, G, RHO).unwrap()
}

fn moving_state() -> StateVector {
    StateVector {
        r: Vec3::new(4.0, 0.5, -0.8),
        theta: EulerTriad::new(0.01, 0.05, -0.02),
        v: Vec3::new(0.4, -0.1, 0.2),
        omega: Vec3::new(0.005, 0.02, -0.003),
        rotor_speed: 1.2,
    }
}

#[test]
fn morison_quadrature_converges_on_point_doubling() {
    let params = TurbineParams::reference();
    let platform = Platform::new(&params);
    let w = waves();
    let state = moving_state();
    for t in [0.0, 1.7, 3.3, 6.1, 8.9] {
        let eta = platform.member_elevations(&state, &w, t);
        for i in 0..platform.cylinders().len() {
            let (len, _) = platform.submerged_length(i, &state, eta[i]).unwrap();
            let coarse = platform.morison_with_points(i, &state, len, &w, t, 32);
            let fine = platform.morison_with_points(i, &state, len, &w, t, 64);
            let scale = fine.force.norm().max(1.0);
            let rel = (coarse.force - fine.force).norm() / scale;
            assert!(rel < 1e-3, "member {i} t {t}: force change {rel}");
            let mscale = fine.moment.norm().max(1.0);
            let mrel = (coarse.moment - fine.moment).norm() / mscale;
            assert!(mrel < 1e-3, "member {i} t {t}: moment change {mrel}");
        }
    }
}

proptest! {
    #[test]
    fn dispersion_relation_residual(period in 2.0..25.0f64, depth in prop::option::of(10.0..500.0f64)) {
        let omega = 2.0 * std::f64::consts::PI / period;
        let k = solve_wavenumber(omega, G, depth);
        let rhs = match depth {
            Some(h) => G * k * (k * h).tanh(),
            None => G * k,
        };
        prop_assert!(((omega * omega - rhs) / (omega * omega)).abs() < 1e-10);
    }
}

#[test]
fn rest_buoyancy_equals_displaced_weight() {
    let params = TurbineParams::reference();
    let platform = Platform::new(&params);
    let calm = WaveField::calm(G, RHO);
    let loads = platform.loads(&StateVector::default(), &calm, 0.0).unwrap();
    let expected = RHO * G * platform.rest_volume();
    assert_relative_eq!(loads.buoyancy.force[2], expected, max_relative = 1e-12);
    assert!(loads.buoyancy.force[0].abs() < 1e-6 * expected);
    assert!(loads.hydrodynamic.force.norm() == 0.0);
}

#[test]
fn airy_surface_particle_orbit() {
    let w = waves();
    let a = w.amplitude();
    let om = w.angular_frequency();
    // Deep water: circular orbits of radius a at the surface, decaying as e^{kz}.
    for t in [0.0, 2.5, 5.0, 7.5] {
        let k0 = w.kinematics(0.0, 0.0, 0.0, t);
        let speed = (k0.vel[0].powi(2) + k0.vel[2].powi(2)).sqrt();
        assert_relative_eq!(speed, a * om, max_relative = 1e-12);
        let deep = w.kinematics(0.0, 0.0, -20.0, t);
        let ratio = (deep.vel[0].powi(2) + deep.vel[2].powi(2)).sqrt() / speed;
        assert_relative_eq!(ratio, (-20.0 * w.wavenumber()).exp(), max_relative = 1e-12);
    }
}

#[test]
fn mooring_pretension_and_restoring_sign() {
    let params = TurbineParams::reference();
    let mooring = MooringModel::new(&params.mooring).without_damping();
    let rest = mooring.loads(&StateVector::default()).unwrap();
    assert_relative_eq!(rest.wrench.force[2], -1.84e6, max_relative = 1e-12);
    let offset = StateVector {
        r: Vec3::new(5.0, 0.0, 0.0),
        ..Default::default()
    };
    let displaced = mooring.loads(&offset).unwrap();
    assert!(displaced.wrench.force[0] < 0.0);
    // The downwind fairlead line slackens, the upwind one tightens.
    assert!(displaced.fairlead_tension[1] > rest.fairlead_tension[1]);
    assert!(displaced.fairlead_tension[0] < rest.fairlead_tension[0]);
}
