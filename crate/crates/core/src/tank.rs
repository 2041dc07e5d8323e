//! Boil-off of a liquid-hydrogen tank driven by ortho to para conversion.
//!
//! State: liquid amount `N` (mol), ortho fraction `x`, time `t` (h).
//!
//! ```text
//! dx/dt = -gamma k x^n
//! dN/dt = -(N gamma k x^n dE + Q) / L
//! ```
//!
//! Vapor leaves at the liquid's composition, so `x(t)` does not depend on
//! `N(t)`. Integration is fixed-step classical RK4.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::format::sig6;
use crate::scalar::Scalar;
use crate::thermo::{RotationalModel, NORMAL_ORTHO_FRACTION};

/// Latent heat of vaporization of liquid hydrogen (kJ/mol), literature value.
pub const DEFAULT_LATENT_HEAT: f64 = 0.899;
/// Default integration step (h) used by calibration.
pub const DEFAULT_DT: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KineticOrder {
    First,
    Second,
}

impl KineticOrder {
    pub fn from_int(n: u8) -> Result<Self> {
        match n {
            1 => Ok(KineticOrder::First),
            2 => Ok(KineticOrder::Second),
            other => Err(invalid(format!("kinetic order must be 1 or 2, got {other}"))),
        }
    }

    pub fn as_int(self) -> u8 {
        match self {
            KineticOrder::First => 1,
            KineticOrder::Second => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TankParams<T> {
    pub order: KineticOrder,
    /// Natural conversion rate constant (1/h, or 1/h per unit fraction for
    /// second order).
    pub rate: T,
    /// Latent heat of vaporization (kJ/mol).
    pub latent: T,
    /// Heat released by converting one mole of pure ortho (kJ/mol).
    pub conversion_heat: T,
    /// External heat leak (kJ/h).
    pub heat_leak: T,
    /// Catalyst multiplier on the rate constant.
    pub catalyst_gamma: T,
}

impl<T: Scalar> Default for TankParams<T> {
    fn default() -> Self {
        let full = RotationalModel::<T>::default()
            .conversion_heat(T::one(), T::zero())
            .expect("default conversion heat");
        Self {
            order: KineticOrder::Second,
            rate: T::zero(),
            latent: T::lit(DEFAULT_LATENT_HEAT),
            conversion_heat: full,
            heat_leak: T::zero(),
            catalyst_gamma: T::one(),
        }
    }
}

impl<T: Scalar> TankParams<T> {
    pub fn with_rate(mut self, rate: T) -> Self {
        self.rate = rate;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |v: T| v >= T::zero() && v.is_finite();
        if !finite_nonneg(self.rate) {
            return Err(invalid(format!("rate constant must be >= 0, got {}", self.rate)));
        }
        if !(self.latent > T::zero()) || !self.latent.is_finite() {
            return Err(invalid(format!("latent heat must be positive, got {}", self.latent)));
        }
        if !finite_nonneg(self.conversion_heat) {
            return Err(invalid(format!(
                "conversion heat must be >= 0, got {}",
                self.conversion_heat
            )));
        }
        if !finite_nonneg(self.heat_leak) {
            return Err(invalid(format!("heat leak must be >= 0, got {}", self.heat_leak)));
        }
        if !finite_nonneg(self.catalyst_gamma) {
            return Err(invalid(format!(
                "catalyst multiplier must be >= 0, got {}",
                self.catalyst_gamma
            )));
        }
        Ok(())
    }

    /// Conversion rate `gamma k x^n` (fraction per hour).
    fn conversion_rate(&self, x: T) -> T {
        let x = x.max(T::zero()).min(T::one());
        let xn = match self.order {
            KineticOrder::First => x,
            KineticOrder::Second => x * x,
        };
        self.catalyst_gamma * self.rate * xn
    }

    fn derivatives(&self, x: T, n: T) -> (T, T) {
        let r = self.conversion_rate(x);
        let dn = if n > T::zero() {
            -(n * r * self.conversion_heat + self.heat_leak) / self.latent
        } else {
            T::zero()
        };
        (-r, dn)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TankState<T> {
    /// Liquid amount (mol).
    pub n_mol: T,
    /// Ortho fraction of the liquid.
    pub x_ortho: T,
    /// Elapsed time (h).
    pub t_h: T,
}

impl<T: Scalar> TankState<T> {
    pub fn new(n_mol: T, x_ortho: T) -> Result<Self> {
        let s = Self {
            n_mol,
            x_ortho,
            t_h: T::zero(),
        };
        s.validate()?;
        Ok(s)
    }

    /// One mole of freshly liquefied normal hydrogen.
    pub fn normal() -> Self {
        Self {
            n_mol: T::one(),
            x_ortho: T::lit(NORMAL_ORTHO_FRACTION),
            t_h: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_ortho >= T::zero() && self.x_ortho <= T::one()) {
            return Err(invalid(format!("x0 must be in [0,1], got {}", self.x_ortho)));
        }
        if !(self.n_mol >= T::zero()) || !self.n_mol.is_finite() {
            return Err(invalid(format!("liquid amount must be >= 0, got {}", self.n_mol)));
        }
        if !self.t_h.is_finite() {
            return Err(invalid("time must be finite"));
        }
        Ok(())
    }
}

fn rk4<T: Scalar>(state: &TankState<T>, params: &TankParams<T>, dt: T) -> TankState<T> {
    let two = T::lit(2.0);
    let half = dt / two;
    let (x, n) = (state.x_ortho, state.n_mol);
    let (k1x, k1n) = params.derivatives(x, n);
    let (k2x, k2n) = params.derivatives(x + half * k1x, n + half * k1n);
    let (k3x, k3n) = params.derivatives(x + half * k2x, n + half * k2n);
    let (k4x, k4n) = params.derivatives(x + dt * k3x, n + dt * k3n);
    let sixth = dt / T::lit(6.0);
    let x = x + sixth * (k1x + two * k2x + two * k3x + k4x);
    let n = n + sixth * (k1n + two * k2n + two * k3n + k4n);
    TankState {
        n_mol: n.max(T::zero()),
        x_ortho: x.max(T::zero()).min(T::one()),
        t_h: state.t_h + dt,
    }
}

/// Advances the tank by one RK4 step of length `dt` hours.
pub fn step<T: Scalar>(state: &TankState<T>, params: &TankParams<T>, dt: T) -> Result<TankState<T>> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(invalid(format!("dt must be positive, got {dt}")));
    }
    state.validate()?;
    params.validate()?;
    Ok(rk4(state, params, dt))
}

/// Visits every state from `state0` to `horizon`, the final step shortened
/// so the last sample lands exactly on the horizon.
fn integrate<T: Scalar>(
    state0: &TankState<T>,
    params: &TankParams<T>,
    horizon: T,
    dt: T,
    mut visit: impl FnMut(&TankState<T>),
) -> Result<TankState<T>> {
    if !(horizon > T::zero()) || !horizon.is_finite() {
        return Err(invalid(format!("horizon must be positive, got {horizon}")));
    }
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(invalid(format!("dt must be positive, got {dt}")));
    }
    state0.validate()?;
    params.validate()?;
    let t0 = state0.t_h;
    let mut steps = (horizon / dt).ceil().to_usize().unwrap_or(1).max(1);
    if steps > 1 && T::from_usize_exact(steps - 1) * dt >= horizon * (T::one() - T::lit(1e-12)) {
        steps -= 1;
    }
    let mut state = *state0;
    visit(&state);
    for i in 1..=steps {
        let target = if i == steps {
            horizon
        } else {
            T::from_usize_exact(i) * dt
        };
        let h = t0 + target - state.t_h;
        state = rk4(&state, params, h);
        state.t_h = t0 + target;
        visit(&state);
    }
    Ok(state)
}

/// Trajectory including the initial state.
pub fn simulate<T: Scalar>(
    state0: &TankState<T>,
    params: &TankParams<T>,
    horizon: T,
    dt: T,
) -> Result<Vec<TankState<T>>> {
    let mut out = Vec::new();
    integrate(state0, params, horizon, dt, |s| out.push(*s))?;
    Ok(out)
}

/// Final state only.
pub fn simulate_final<T: Scalar>(
    state0: &TankState<T>,
    params: &TankParams<T>,
    horizon: T,
    dt: T,
) -> Result<TankState<T>> {
    integrate(state0, params, horizon, dt, |_| {})
}

/// Fraction of the initial liquid lost by the end of the trajectory.
pub fn boiloff_fraction<T: Scalar>(trajectory: &[TankState<T>]) -> Result<T> {
    let (first, last) = match (trajectory.first(), trajectory.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::EmptyTrajectory),
    };
    if !(first.n_mol > T::zero()) {
        return Err(invalid("initial liquid amount must be positive"));
    }
    Ok(T::one() - last.n_mol / first.n_mol)
}

/// First time the ortho fraction falls to `threshold`, linearly
/// interpolated between steps; `None` if not reached within `horizon`.
pub fn time_to_ortho_fraction<T: Scalar>(
    state0: &TankState<T>,
    params: &TankParams<T>,
    threshold: T,
    horizon: T,
    dt: T,
) -> Result<Option<T>> {
    if state0.x_ortho <= threshold {
        return Ok(Some(state0.t_h));
    }
    let mut prev = *state0;
    let mut hit = None;
    integrate(state0, params, horizon, dt, |s| {
        if hit.is_none() && s.x_ortho <= threshold && prev.x_ortho > threshold {
            let frac = (prev.x_ortho - threshold) / (prev.x_ortho - s.x_ortho);
            hit = Some(prev.t_h + frac * (s.t_h - prev.t_h));
        }
        prev = *s;
    })?;
    Ok(hit)
}

/// Supremum of the boil-off reachable by any rate constant: instantaneous
/// conversion followed by the heat leak alone.
pub fn max_boiloff<T: Scalar>(x0: T, n0: T, params: &TankParams<T>, at_hours: T) -> T {
    let instant = (-(params.conversion_heat / params.latent) * x0).exp();
    let leak = params.heat_leak * at_hours / (params.latent * n0);
    (T::one() - instant + leak).min(T::one())
}

/// Tolerance on the reproduced boil-off after calibration.
pub const CALIBRATION_TOL: f64 = 1e-6;

/// Rate constant `k` for which a tank starting at ortho fraction `x0` has
/// lost `target` of its liquid after `at_hours`. The remaining parameters
/// are taken from `params`; its `rate` field is ignored.
pub fn calibrate_rate<T: Scalar>(x0: T, target: T, at_hours: T, params: &TankParams<T>, dt: T) -> Result<T> {
    if !(target >= T::zero() && target < T::one()) {
        return Err(invalid(format!("target boil-off must lie in [0, 1), got {target}")));
    }
    if !(at_hours > T::zero()) {
        return Err(invalid(format!("calibration time must be positive, got {at_hours}")));
    }
    let state0 = TankState::new(T::one(), x0)?;
    params.with_rate(T::zero()).validate()?;
    let boiloff = |k: T| -> Result<T> {
        let end = simulate_final(&state0, &params.with_rate(k), at_hours, dt)?;
        Ok(T::one() - end.n_mol)
    };
    let floor = boiloff(T::zero())?;
    if (target - floor).abs().as_f64() <= CALIBRATION_TOL {
        return Ok(T::zero());
    }
    let ceiling = max_boiloff(x0, T::one(), params, at_hours);
    let unreachable = || Error::Unreachable {
        target: target.as_f64(),
        max: ceiling.as_f64(),
    };
    if target < floor || target >= ceiling || params.catalyst_gamma == T::zero() {
        return Err(unreachable());
    }

    let mut lo = T::zero();
    let mut hi = T::lit(1e-3);
    while boiloff(hi)? < target {
        lo = hi;
        hi = hi * T::lit(2.0);
        if hi.as_f64() > 1e6 {
            return Err(unreachable());
        }
    }
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if boiloff(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= hi * T::epsilon() * T::lit(4.0) {
            break;
        }
    }
    let k = (lo + hi) / T::lit(2.0);
    let achieved = boiloff(k)?;
    if (achieved - target).abs().as_f64() > CALIBRATION_TOL.max(T::epsilon().as_f64() * 100.0) {
        return Err(unreachable());
    }
    Ok(k)
}

/// `t_h,n_mol,x_ortho` table, six significant digits.
pub fn trajectory_to_csv<T: Scalar>(trajectory: &[TankState<T>]) -> String {
    let mut out = String::from("t_h,n_mol,x_ortho\n");
    for s in trajectory {
        out.push_str(&format!(
            "{},{},{}\n",
            sig6(s.t_h.as_f64()),
            sig6(s.n_mol.as_f64()),
            sig6(s.x_ortho.as_f64())
        ));
    }
    out
}
