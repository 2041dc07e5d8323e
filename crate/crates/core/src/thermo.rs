//! Rigid-rotor statistics of H2 with nuclear-spin weights.
//!
//! Para levels are the even `j` (spin weight 1), ortho levels the odd `j`
//! (spin weight 3), with energies `B j(j+1)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Boltzmann constant in meV/K.
pub const K_B_MEV_PER_K: f64 = 0.0861733;
/// One meV per molecule expressed in kJ/mol.
pub const MEV_TO_KJ_PER_MOL: f64 = 0.0964853;
/// Lowest ortho-para level splitting, `E(j=1) - E(j=0)`, in meV.
pub const ORTHO_PARA_SPLITTING_MEV: f64 = 15.08;
/// High-temperature ortho fraction of normal hydrogen.
pub const NORMAL_ORTHO_FRACTION: f64 = 0.75;

/// Relative size of the last retained level below which a sum counts as
/// converged.
const TRUNCATION_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Para,
    Ortho,
    /// Frozen 3:1 ortho/para mixture.
    Normal,
    /// Mixture that re-equilibrates its ortho fraction with temperature.
    Equilibrium,
}

impl std::str::FromStr for Species {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "para" => Ok(Species::Para),
            "ortho" => Ok(Species::Ortho),
            "normal" => Ok(Species::Normal),
            "equilibrium" => Ok(Species::Equilibrium),
            other => Err(invalid(format!("unknown species '{other}'"))),
        }
    }
}

impl std::fmt::Display for Species {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Species::Para => "para",
            Species::Ortho => "ortho",
            Species::Normal => "normal",
            Species::Equilibrium => "equilibrium",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationalModel<T> {
    /// Rotational constant in meV.
    pub b_mev: T,
    /// Highest `j` kept in partition sums.
    pub j_max: u32,
}

impl<T: Scalar> Default for RotationalModel<T> {
    fn default() -> Self {
        Self {
            b_mev: T::lit(ORTHO_PARA_SPLITTING_MEV / 2.0),
            j_max: 20,
        }
    }
}

/// Boltzmann-weighted sums over one set of levels, energies measured from
/// the set's lowest level.
#[derive(Clone, Copy, Debug)]
struct Moments<T> {
    z: T,
    e1: T,
    e2: T,
    offset: T,
}

impl<T: Scalar> Moments<T> {
    fn mean(&self) -> T {
        self.e1 / self.z
    }

    fn variance(&self) -> T {
        let m = self.mean();
        (self.e2 / self.z - m * m).max(T::zero())
    }
}

impl<T: Scalar> RotationalModel<T> {
    pub fn new(b_mev: T, j_max: u32) -> Result<Self> {
        if !(b_mev > T::zero()) || !b_mev.is_finite() {
            return Err(invalid(format!("rotational constant must be positive, got {b_mev}")));
        }
        if j_max < 5 {
            return Err(invalid(format!("j_max must be at least 5, got {j_max}")));
        }
        Ok(Self { b_mev, j_max })
    }

    /// `B j(j+1)` in meV.
    pub fn rot_energy(&self, j: u32) -> T {
        let jf = T::from_u32(j).expect("j representable");
        self.b_mev * jf * (jf + T::one())
    }

    fn kt(temperature: T) -> Result<T> {
        if !(temperature > T::zero()) || !temperature.is_finite() {
            return Err(invalid(format!("temperature must be positive, got {temperature}")));
        }
        Ok(T::lit(K_B_MEV_PER_K) * temperature)
    }

    /// Sums over levels of one parity (`first` = 0 for para, 1 for ortho).
    fn moments(&self, first: u32, temperature: T) -> Result<Moments<T>> {
        let kt = Self::kt(temperature)?;
        let offset = self.rot_energy(first);
        let mut m = Moments {
            z: T::zero(),
            e1: T::zero(),
            e2: T::zero(),
            offset,
        };
        let mut last = T::zero();
        let mut j = first;
        while j <= self.j_max {
            let e = self.rot_energy(j) - offset;
            let g = T::from_u32(2 * j + 1).expect("degeneracy representable");
            let w = g * (-e / kt).exp();
            m.z = m.z + w;
            m.e1 = m.e1 + w * e;
            m.e2 = m.e2 + w * e * e;
            last = w;
            j += 2;
        }
        if !((last / m.z).as_f64() < TRUNCATION_TOL) {
            return Err(Error::NotConverged {
                j_max: self.j_max,
                temperature: temperature.as_f64(),
            });
        }
        Ok(m)
    }

    /// Equilibrium ortho fraction `3 Z_odd / (Z_even + 3 Z_odd)`.
    pub fn equilibrium_ortho_fraction(&self, temperature: T) -> Result<T> {
        let kt = Self::kt(temperature)?;
        let para = self.moments(0, temperature)?;
        let ortho = self.moments(1, temperature)?;
        let three_odd = T::lit(3.0) * ortho.z * (-ortho.offset / kt).exp();
        Ok(three_odd / (para.z + three_odd))
    }

    /// Rotational heat capacity per molecule in units of `k_B`.
    pub fn rotational_heat_capacity(&self, species: Species, temperature: T) -> Result<T> {
        let kt = Self::kt(temperature)?;
        let c = |m: &Moments<T>| m.variance() / (kt * kt);
        match species {
            Species::Para => Ok(c(&self.moments(0, temperature)?)),
            Species::Ortho => Ok(c(&self.moments(1, temperature)?)),
            Species::Normal => {
                let x = T::lit(NORMAL_ORTHO_FRACTION);
                let para = c(&self.moments(0, temperature)?);
                let ortho = c(&self.moments(1, temperature)?);
                Ok(x * ortho + (T::one() - x) * para)
            }
            Species::Equilibrium => {
                let para = self.moments(0, temperature)?;
                let ortho = self.moments(1, temperature)?;
                let x = self.equilibrium_ortho_fraction(temperature)?;
                let mean_p = para.mean();
                let mean_o = ortho.mean() + ortho.offset;
                let var_p = para.variance();
                let var_o = ortho.variance();
                let mean = x * mean_o + (T::one() - x) * mean_p;
                let second = x * (var_o + mean_o * mean_o) + (T::one() - x) * (var_p + mean_p * mean_p);
                Ok((second - mean * mean).max(T::zero()) / (kt * kt))
            }
        }
    }

    /// Mean rotational energy (meV) of a species at `temperature`.
    pub fn mean_energy(&self, species: Species, temperature: T) -> Result<T> {
        let para = self.moments(0, temperature)?;
        let ortho = self.moments(1, temperature)?;
        let mean_p = para.mean();
        let mean_o = ortho.mean() + ortho.offset;
        let x = match species {
            Species::Para => return Ok(mean_p),
            Species::Ortho => return Ok(mean_o),
            Species::Normal => T::lit(NORMAL_ORTHO_FRACTION),
            Species::Equilibrium => self.equilibrium_ortho_fraction(temperature)?,
        };
        Ok(x * mean_o + (T::one() - x) * mean_p)
    }

    /// Heat (kJ/mol) released when the ortho fraction drops from `x_from`
    /// to `x_to`, counting only the `j = 1 -> 0` step.
    pub fn conversion_heat(&self, x_from: T, x_to: T) -> Result<T> {
        if !(T::zero() <= x_to && x_to <= x_from && x_from <= T::one()) {
            return Err(invalid(format!(
                "conversion requires 0 <= x_to <= x_from <= 1, got x_from={x_from}, x_to={x_to}"
            )));
        }
        Ok((x_from - x_to) * self.rot_energy(1) * T::lit(MEV_TO_KJ_PER_MOL))
    }
}
