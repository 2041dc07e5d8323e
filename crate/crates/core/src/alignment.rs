//! Rotational alignment of desorbing molecules.
//!
//! The quadrupole alignment factor of a rotational level `j` is the moment
//! `sum_m (3m^2 - j(j+1)) D_m / sum_m j(j+1) D_m` of its `m_j` population.
//! Desorption weights are stored already summed over the surface-parallel
//! translational channels.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Half-width of the band around zero classified as isotropic.
pub const ISOTROPIC_BAND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RotationalCharacter {
    /// Cartwheel-like rotation, `m_j ~ 0`, negative alignment.
    #[serde(rename = "CLR")]
    Clr,
    /// Helicopter-like rotation, `|m_j| ~ j`, positive alignment.
    #[serde(rename = "HLR")]
    Hlr,
    #[serde(rename = "isotropic")]
    Isotropic,
}

impl std::fmt::Display for RotationalCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RotationalCharacter::Clr => "CLR",
            RotationalCharacter::Hlr => "HLR",
            RotationalCharacter::Isotropic => "isotropic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlignmentRow<T> {
    pub j: u32,
    pub mj: i32,
    pub etot_ev: T,
    pub d: T,
}

/// Desorption weights indexed by `(j, m_j, E_tot)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AlignmentTable<T> {
    rows: Vec<AlignmentRow<T>>,
}

fn check_row<T: Scalar>(row: &AlignmentRow<T>) -> std::result::Result<(), String> {
    if row.mj.unsigned_abs() > row.j {
        return Err(format!("|m_j| = {} exceeds j = {}", row.mj.abs(), row.j));
    }
    if !(row.d >= T::zero()) || !row.d.is_finite() {
        return Err(format!("desorption weight must be finite and >= 0, got {}", row.d));
    }
    if !row.etot_ev.is_finite() {
        return Err("E_tot must be finite".into());
    }
    Ok(())
}

impl<T: Scalar> AlignmentTable<T> {
    pub fn new() -> Self {
        Self { rows: Vec::new() }
    }

    /// Adds a row; a repeated `(j, m_j, E_tot)` key accumulates its weight.
    pub fn push(&mut self, row: AlignmentRow<T>) -> Result<()> {
        check_row(&row).map_err(invalid)?;
        match self
            .rows
            .iter_mut()
            .find(|r| r.j == row.j && r.mj == row.mj && r.etot_ev == row.etot_ev)
        {
            Some(existing) => existing.d = existing.d + row.d,
            None => self.rows.push(row),
        }
        Ok(())
    }

    pub fn from_rows(rows: impl IntoIterator<Item = AlignmentRow<T>>) -> Result<Self> {
        let mut table = Self::new();
        for row in rows {
            table.push(row)?;
        }
        Ok(table)
    }

    pub fn rows(&self) -> &[AlignmentRow<T>] {
        &self.rows
    }

    /// Reads the `j,mj,etot_ev,d` CSV layout. Blank lines and `#` comments
    /// are skipped.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Record {
            j: u32,
            mj: i32,
            etot_ev: f64,
            d: f64,
        }
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["j", "mj", "etot_ev", "d"] {
            return Err(Error::Table {
                line: 1,
                msg: format!(
                    "expected header 'j,mj,etot_ev,d', found '{}'",
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }
        let mut table = Self::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let parsed: Record = record.deserialize(Some(&headers)).map_err(|e| Error::Table {
                line,
                msg: e.to_string(),
            })?;
            let row = AlignmentRow {
                j: parsed.j,
                mj: parsed.mj,
                etot_ev: T::lit(parsed.etot_ev),
                d: T::lit(parsed.d),
            };
            table.push(row).map_err(|e| Error::Table {
                line,
                msg: e.to_string(),
            })?;
        }
        Ok(table)
    }

    /// `(m_j, D)` pairs of one `(j, E_tot)` group.
    pub fn group(&self, j: u32, etot_ev: T) -> impl Iterator<Item = (i32, T)> + '_ {
        self.rows
            .iter()
            .filter(move |r| r.j == j && r.etot_ev == etot_ev)
            .map(|r| (r.mj, r.d))
    }

    /// Scales every weight in a `(j, E_tot)` group.
    pub fn scale_group(&mut self, j: u32, etot_ev: T, factor: T) {
        for r in self.rows.iter_mut().filter(|r| r.j == j && r.etot_ev == etot_ev) {
            r.d = r.d * factor;
        }
    }
}

/// Alignment factor of an `m_j` distribution within level `j`.
pub fn alignment_of<T: Scalar>(j: u32, weights: impl IntoIterator<Item = (i32, T)>) -> Result<T> {
    if j == 0 {
        return Err(Error::AlignmentUndefined);
    }
    let jj = T::from_u32(j * (j + 1)).expect("j(j+1) representable");
    let mut num = T::zero();
    let mut total = T::zero();
    for (mj, d) in weights {
        let m2 = T::from_i64(i64::from(mj) * i64::from(mj)).expect("m_j^2 representable");
        num = num + (T::lit(3.0) * m2 - jj) * d;
        total = total + d;
    }
    if !(total > T::zero()) {
        return Err(Error::ZeroWeight { j, etot: f64::NAN });
    }
    Ok(num / (jj * total))
}

/// Quadrupole alignment factor of the `(j, E_tot)` group of a table.
pub fn quadrupole_alignment<T: Scalar>(table: &AlignmentTable<T>, j: u32, etot_ev: T) -> Result<T> {
    alignment_of(j, table.group(j, etot_ev)).map_err(|e| match e {
        Error::ZeroWeight { j, .. } => Error::ZeroWeight {
            j,
            etot: etot_ev.as_f64(),
        },
        other => other,
    })
}

/// Attainable range `[-1, 3j/(j+1) - 1]` of the alignment factor.
pub fn alignment_bounds<T: Scalar>(j: u32) -> Result<(T, T)> {
    if j == 0 {
        return Err(Error::AlignmentUndefined);
    }
    let jf = T::from_u32(j).expect("j representable");
    Ok((-T::one(), T::lit(3.0) * jf / (jf + T::one()) - T::one()))
}

pub fn classify<T: Scalar>(a: T) -> RotationalCharacter {
    let band = T::lit(ISOTROPIC_BAND);
    if a < -band {
        RotationalCharacter::Clr
    } else if a > band {
        RotationalCharacter::Hlr
    } else {
        RotationalCharacter::Isotropic
    }
}

/// Parameters of the translational-energy alignment model. The defaults are
/// placeholders apart from the 0.5 eV barrier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterParams<T> {
    /// Minimum dissociation barrier (eV).
    pub v_min: T,
    pub a_slow: T,
    pub a_fast: T,
    /// Crossover width (eV).
    pub width: T,
}

impl<T: Scalar> Default for FilterParams<T> {
    fn default() -> Self {
        Self {
            v_min: T::lit(0.5),
            a_slow: T::lit(-0.5),
            a_fast: T::lit(0.5),
            width: T::lit(0.1),
        }
    }
}

impl<T: Scalar> FilterParams<T> {
    pub fn new(v_min: T, a_slow: T, a_fast: T, width: T) -> Result<Self> {
        let p = Self {
            v_min,
            a_slow,
            a_fast,
            width,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_min > T::zero()) {
            return Err(invalid(format!("V_min must be positive, got {}", self.v_min)));
        }
        if !(self.width > T::zero()) {
            return Err(invalid(format!("crossover width must be positive, got {}", self.width)));
        }
        if !(self.a_slow < T::zero() && T::zero() < self.a_fast) {
            return Err(invalid("alignment limits must satisfy A_slow < 0 < A_fast"));
        }
        Ok(())
    }
}

/// Logistic alignment versus final translational energy: cartwheel-like
/// well below the barrier, helicopter-like well above it.
pub fn dqf_alignment_model<T: Scalar>(e_t: T, params: &FilterParams<T>) -> T {
    let x = (e_t - params.v_min) / params.width;
    params.a_slow + (params.a_fast - params.a_slow) / (T::one() + (-x).exp())
}
