//! Hyperfine-contact matrix element and conversion yield.
//!
//! The contact term reduces the electronic expectation value to the net spin
//! density at the two proton sites, so
//! `xi(Z, theta) = lambda_C * kappa * (rho(r_a) - rho(r_b))`, where `kappa`
//! is the modulus of the nuclear transition vector. Yields are relative:
//! `W = |xi|^2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{check_probe_args, probe_pair, ProbeGeometry, SpinDensityField};
use crate::error::{invalid, Error, Result};
use crate::format::sig6;
use crate::scalar::Scalar;
use crate::spin::{ensemble_coupling_strength, transition_vector, OrthoSublevel};

/// Denominator floor for [`steric_ratio`].
pub const HLR_YIELD_FLOOR: f64 = 1e-30;

/// Which ortho sublevel enters the transition amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrthoPolicy {
    /// Equal-weight average over `m = +1, 0, -1`.
    Unpolarized,
    Single(OrthoSublevel),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperfineParams<T> {
    pub lambda_c: T,
    pub policy: OrthoPolicy,
}

impl<T: Scalar> Default for HyperfineParams<T> {
    fn default() -> Self {
        Self {
            lambda_c: T::one(),
            policy: OrthoPolicy::Unpolarized,
        }
    }
}

impl<T: Scalar> HyperfineParams<T> {
    pub fn new(lambda_c: T, policy: OrthoPolicy) -> Result<Self> {
        if !lambda_c.is_finite() || lambda_c == T::zero() {
            return Err(invalid(format!("lambda_C must be finite and nonzero, got {lambda_c}")));
        }
        Ok(Self { lambda_c, policy })
    }

    /// Nuclear-spin factor `kappa`.
    pub fn kappa(&self) -> T {
        match self.policy {
            OrthoPolicy::Unpolarized => ensemble_coupling_strength::<T>().sqrt(),
            OrthoPolicy::Single(m) => transition_vector::<T>(m).norm(),
        }
    }
}

/// Contact matrix element at center-of-mass height `z` and tilt `theta_deg`.
pub fn xi<T: Scalar>(
    field: &SpinDensityField<T>,
    geom: &ProbeGeometry<T>,
    params: &HyperfineParams<T>,
    z: T,
    theta_deg: T,
) -> Result<T> {
    let probe = probe_pair(field, geom, z, theta_deg)?;
    Ok(params.lambda_c * params.kappa() * probe.delta)
}

/// Relative conversion yield `|xi|^2`.
pub fn yield_w<T: Scalar>(
    field: &SpinDensityField<T>,
    geom: &ProbeGeometry<T>,
    params: &HyperfineParams<T>,
    z: T,
    theta_deg: T,
) -> Result<T> {
    let x = xi(field, geom, params, z, theta_deg)?;
    Ok(x * x)
}

/// Dense `(theta, Z)` evaluation of `xi` and `W`. Rows are indexed by theta.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YieldCurve<T> {
    pub z: Vec<T>,
    pub theta_deg: Vec<T>,
    pub xi: Vec<Vec<T>>,
    pub w: Vec<Vec<T>>,
}

impl<T: Scalar> YieldCurve<T> {
    pub fn theta_index(&self, theta_deg: T) -> Option<usize> {
        self.theta_deg.iter().position(|&t| t == theta_deg)
    }

    pub fn xi_row(&self, theta_deg: T) -> Result<&[T]> {
        self.theta_index(theta_deg)
            .map(|i| self.xi[i].as_slice())
            .ok_or(Error::ThetaNotInCurve(theta_deg.as_f64()))
    }

    pub fn w_row(&self, theta_deg: T) -> Result<&[T]> {
        self.theta_index(theta_deg)
            .map(|i| self.w[i].as_slice())
            .ok_or(Error::ThetaNotInCurve(theta_deg.as_f64()))
    }

    /// CSV with one `xi` and one `W` column per angle, six significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z_angstrom");
        for t in &self.theta_deg {
            let label = sig6(t.as_f64());
            out.push_str(&format!(",xi_theta{label},w_theta{label}"));
        }
        out.push('\n');
        for (iz, z) in self.z.iter().enumerate() {
            out.push_str(&sig6(z.as_f64()));
            for it in 0..self.theta_deg.len() {
                out.push(',');
                out.push_str(&sig6(self.xi[it][iz].as_f64()));
                out.push(',');
                out.push_str(&sig6(self.w[it][iz].as_f64()));
            }
            out.push('\n');
        }
        out
    }
}

/// Evaluates `xi` and `W` on every `(theta, Z)` cell. Cells are computed in
/// parallel; the output order is independent of scheduling.
pub fn sweep<T: Scalar>(
    field: &SpinDensityField<T>,
    geom: &ProbeGeometry<T>,
    params: &HyperfineParams<T>,
    z: &[T],
    theta_deg: &[T],
) -> Result<YieldCurve<T>> {
    if z.len() < 2 {
        return Err(invalid("Z range needs at least 2 samples"));
    }
    if z.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("Z samples must be strictly increasing"));
    }
    if theta_deg.is_empty() {
        return Err(invalid("theta list is empty"));
    }
    for &t in theta_deg {
        check_probe_args(z[0], t)?;
    }
    let rows: Vec<Vec<T>> = theta_deg
        .par_iter()
        .map(|&t| {
            z.par_iter()
                .map(|&zz| xi(field, geom, params, zz, t))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;
    let w = rows.iter().map(|row| row.iter().map(|&x| x * x).collect()).collect();
    Ok(YieldCurve {
        z: z.to_vec(),
        theta_deg: theta_deg.to_vec(),
        xi: rows,
        w,
    })
}

/// `n` evenly spaced samples from `lo` to `hi` inclusive.
pub fn linspace<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![lo];
    }
    let span = hi - lo;
    let last = T::from_usize_exact(n - 1);
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + span * T::from_usize_exact(i) / last
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum<T> {
    pub z: T,
    pub value: T,
    pub kind: ExtremumKind,
}

/// Interior extrema of a sampled sequence, located where the sign of the
/// first difference flips. A plateau at the turning point reports its
/// leftmost sample; endpoints never qualify.
pub fn extrema_of<T: Scalar>(z: &[T], values: &[T]) -> Vec<Extremum<T>> {
    let mut out = Vec::new();
    let mut last_sign = 0i8;
    let mut candidate = 0usize;
    for i in 0..values.len().saturating_sub(1) {
        let d = values[i + 1] - values[i];
        let sign = if d > T::zero() {
            1
        } else if d < T::zero() {
            -1
        } else {
            0
        };
        if sign == 0 {
            continue;
        }
        if last_sign != 0 && sign != last_sign {
            let kind = if last_sign > 0 {
                ExtremumKind::Max
            } else {
                ExtremumKind::Min
            };
            out.push(Extremum {
                z: z[candidate],
                value: values[candidate],
                kind,
            });
        }
        last_sign = sign;
        candidate = i + 1;
    }
    out
}

/// Interior extrema of `xi(Z)` at one angle of a curve.
pub fn find_extrema<T: Scalar>(curve: &YieldCurve<T>, theta_deg: T) -> Result<Vec<Extremum<T>>> {
    let row = curve.xi_row(theta_deg)?;
    Ok(extrema_of(&curve.z, row))
}

/// Representative cartwheel and helicopter tilts in degrees.
pub const THETA_CLR_DEFAULT: f64 = 10.0;
pub const THETA_HLR_DEFAULT: f64 = 70.0;

/// `W(Z, theta_clr) / W(Z, theta_hlr)`.
pub fn steric_ratio<T: Scalar>(
    field: &SpinDensityField<T>,
    geom: &ProbeGeometry<T>,
    params: &HyperfineParams<T>,
    z: T,
    theta_clr: T,
    theta_hlr: T,
) -> Result<T> {
    let hlr = yield_w(field, geom, params, z, theta_hlr)?;
    if !(hlr.abs().as_f64() >= HLR_YIELD_FLOOR) {
        return Err(Error::VanishingHlrYield);
    }
    let clr = yield_w(field, geom, params, z, theta_clr)?;
    Ok(clr / hlr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{synthetic_field, ProfileKind};

    fn exp_field() -> SpinDensityField<f64> {
        synthetic_field(ProfileKind::Exponential, 1.0, 0.5, [0.0; 3]).unwrap()
    }

    #[test]
    fn xi_matches_probe_oracle() {
        let f = exp_field();
        let g = ProbeGeometry::along_z();
        let p = HyperfineParams::default();
        let oracle = (-1.37_f64 / 0.5).exp() - (-0.63_f64 / 0.5).exp();
        let x = xi(&f, &g, &p, 1.0, 0.0).unwrap();
        assert!((x - oracle).abs() < 1e-12);
        assert!((x + 0.2191).abs() < 1e-3);
        let p2 = HyperfineParams::new(2.0, OrthoPolicy::Unpolarized).unwrap();
        assert!((xi(&f, &g, &p2, 1.0, 0.0).unwrap() + 0.4383).abs() < 2e-3);
        let w = yield_w(&f, &g, &p, 1.0, 0.0).unwrap();
        assert!((w - oracle * oracle).abs() < 1e-12);
        assert!((w - 0.048).abs() < 5e-4);
        assert_eq!(xi(&f, &g, &p, 1.0, 90.0).unwrap(), 0.0);
    }

    #[test]
    fn single_sublevel_policies_agree_with_unpolarized() {
        let f = exp_field();
        let g = ProbeGeometry::along_z();
        let base = xi(&f, &g, &HyperfineParams::default(), 0.8, 25.0).unwrap();
        for m in OrthoSublevel::ALL {
            let p = HyperfineParams::new(1.0, OrthoPolicy::Single(m)).unwrap();
            assert!((xi(&f, &g, &p, 0.8, 25.0).unwrap() - base).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_degenerate_coupling() {
        assert!(HyperfineParams::new(0.0, OrthoPolicy::Unpolarized).is_err());
        assert!(HyperfineParams::new(f64::NAN, OrthoPolicy::Unpolarized).is_err());
    }

    #[test]
    fn sweep_preconditions() {
        let f = exp_field();
        let g = ProbeGeometry::along_z();
        let p = HyperfineParams::default();
        assert!(sweep(&f, &g, &p, &[1.0], &[10.0]).is_err());
        assert!(sweep(&f, &g, &p, &[1.0, 1.0], &[10.0]).is_err());
        assert!(sweep(&f, &g, &p, &[1.0, 2.0], &[]).is_err());
        assert!(sweep(&f, &g, &p, &[1.0, 2.0], &[200.0]).is_err());
    }

    #[test]
    fn constant_field_gives_zero_curve() {
        let f = synthetic_field(ProfileKind::Exponential, 0.3, 1e300, [0.0; 3]).unwrap();
        let g = ProbeGeometry::along_z();
        let c = sweep(
            &f,
            &g,
            &HyperfineParams::default(),
            &linspace(0.2, 3.0, 15),
            &[10.0, 70.0],
        )
        .unwrap();
        assert!(c.w.iter().flatten().all(|&w| w == 0.0));
    }

    #[test]
    fn sine_extrema() {
        let n = (2.0 * std::f64::consts::PI / 0.01).floor() as usize + 1;
        let z: Vec<f64> = (0..n).map(|i| i as f64 * 0.01).collect();
        let v: Vec<f64> = z.iter().map(|x| x.sin()).collect();
        let ex = extrema_of(&z, &v);
        assert_eq!(ex.len(), 2);
        assert_eq!(ex[0].kind, ExtremumKind::Max);
        assert!((ex[0].z - std::f64::consts::FRAC_PI_2).abs() < 0.02);
        assert_eq!(ex[1].kind, ExtremumKind::Min);
        assert!((ex[1].z - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 0.02);
    }

    #[test]
    fn monotone_and_plateau_extrema() {
        let z: Vec<f64> = (0..6).map(f64::from).collect();
        assert!(extrema_of(&z, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).is_empty());
        assert!(extrema_of(&z, &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0]).is_empty());
        let ex = extrema_of(&z, &[0.0, 1.0, 2.0, 2.0, 2.0, 1.0]);
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0].z, 2.0);
        // a peak on the last sample is an endpoint
        assert!(extrema_of(&z, &[0.0, 1.0, 2.0, 3.0, 4.0, 4.0]).is_empty());
    }

    #[test]
    fn find_extrema_requires_known_theta() {
        let f = exp_field();
        let g = ProbeGeometry::along_z();
        let c = sweep(&f, &g, &HyperfineParams::default(), &linspace(0.2, 3.0, 8), &[10.0]).unwrap();
        assert!(matches!(find_extrema(&c, 20.0), Err(Error::ThetaNotInCurve(_))));
        assert!(find_extrema(&c, 10.0).is_ok());
    }

    #[test]
    fn steric_ratio_cases() {
        let f = exp_field();
        let g = ProbeGeometry::along_z();
        let p = HyperfineParams::default();
        let r = steric_ratio(&f, &g, &p, 1.0, 10.0, 70.0).unwrap();
        assert!(r > 1.0);
        let oracle = {
            let w = |t: f64| {
                let h = 0.37;
                let c = t.to_radians().cos();
                let s = t.to_radians().sin();
                let da = ((1.0 + h * c).powi(2) + (h * s).powi(2)).sqrt();
                let db = ((1.0 - h * c).powi(2) + (h * s).powi(2)).sqrt();
                ((-da / 0.5).exp() - (-db / 0.5).exp()).powi(2)
            };
            w(10.0) / w(70.0)
        };
        assert!((r - oracle).abs() < 1e-10 * oracle);
        assert_eq!(steric_ratio(&f, &g, &p, 1.0, 40.0, 40.0).unwrap(), 1.0);
        assert!(matches!(
            steric_ratio(&f, &g, &p, 1.0, 10.0, 90.0),
            Err(Error::VanishingHlrYield)
        ));
    }

    #[test]
    fn csv_layout() {
        let f = exp_field();
        let g = ProbeGeometry::along_z();
        let c = sweep(&f, &g, &HyperfineParams::default(), &[0.5, 1.0], &[10.0, 70.0]).unwrap();
        let csv = c.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "z_angstrom,xi_theta10,w_theta10,xi_theta70,w_theta70"
        );
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.2_f64, 3.0, 29);
        assert_eq!(v.len(), 29);
        assert_eq!(v[0], 0.2);
        assert_eq!(v[28], 3.0);
        assert!((v[1] - 0.3).abs() < 1e-12);
    }
}
