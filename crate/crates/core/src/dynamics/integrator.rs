use nalgebra::SVector;

/// One classical fourth-order Runge-Kutta step of `x' = f(t, x)`.
pub fn step_rk4<const N: usize, E>(
    x: &SVector<f64, N>,
    t: f64,
    dt: f64,
    mut f: impl FnMut(f64, &SVector<f64, N>) -> Result<SVector<f64, N>, E>,
) -> Result<SVector<f64, N>, E> {
    let h2 = 0.5 * dt;
    let k1 = f(t, x)?;
    let k2 = f(t + h2, &(x + k1 * h2))?;
    let k3 = f(t + h2, &(x + k2 * h2))?;
    let k4 = f(t + dt, &(x + k3 * dt))?;
    Ok(x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0))
}
