//! Two-stage conversion design: a desorption filter that selects molecules
//! by final translational energy (and with it their rotational alignment),
//! followed by a conversion stage whose rate depends on rotational
//! character.
//!
//! Bins sharing `(j, E_t)` form a group; the group's `m_j` pattern is what
//! gets an alignment factor and a CLR/HLR label.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::alignment::{alignment_of, classify, dqf_alignment_model, FilterParams, RotationalCharacter};
use crate::error::{invalid, Error, Result};
use crate::format::sig6;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PopulationBin<T> {
    pub j: u32,
    pub mj: i32,
    pub et_ev: T,
    pub weight: T,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MoleculePopulation<T> {
    pub bins: Vec<PopulationBin<T>>,
}

/// Bins of one `(j, E_t)` group.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationalGroup<T> {
    pub j: u32,
    pub et_ev: T,
    pub weights: Vec<(i32, T)>,
}

impl<T: Scalar> RotationalGroup<T> {
    pub fn total(&self) -> T {
        self.weights.iter().map(|&(_, w)| w).sum()
    }

    pub fn alignment(&self) -> Result<T> {
        alignment_of(self.j, self.weights.iter().copied())
    }
}

fn check_bin<T: Scalar>(b: &PopulationBin<T>) -> std::result::Result<(), String> {
    if b.j == 0 {
        return Err("population bins need j >= 1".into());
    }
    if b.mj.unsigned_abs() > b.j {
        return Err(format!("|m_j| = {} exceeds j = {}", b.mj.abs(), b.j));
    }
    if !(b.et_ev >= T::zero()) || !b.et_ev.is_finite() {
        return Err(format!("translational energy must be >= 0, got {}", b.et_ev));
    }
    if !(b.weight >= T::zero()) || !b.weight.is_finite() {
        return Err(format!("weight must be >= 0, got {}", b.weight));
    }
    Ok(())
}

impl<T: Scalar> MoleculePopulation<T> {
    pub fn new(bins: Vec<PopulationBin<T>>) -> Result<Self> {
        for b in &bins {
            check_bin(b).map_err(invalid)?;
        }
        Ok(Self { bins })
    }

    pub fn total_weight(&self) -> T {
        self.bins.iter().map(|b| b.weight).sum()
    }

    pub fn validate(&self) -> Result<()> {
        for b in &self.bins {
            check_bin(b).map_err(invalid)?;
        }
        if !(self.total_weight() > T::zero()) {
            return Err(invalid("population has no weight"));
        }
        Ok(())
    }

    /// Groups ordered by `(j, E_t)`; bins keep their input order inside a
    /// group.
    pub fn groups(&self) -> Vec<RotationalGroup<T>> {
        let mut groups: Vec<RotationalGroup<T>> = Vec::new();
        for b in &self.bins {
            match groups.iter_mut().find(|g| g.j == b.j && g.et_ev == b.et_ev) {
                Some(g) => g.weights.push((b.mj, b.weight)),
                None => groups.push(RotationalGroup {
                    j: b.j,
                    et_ev: b.et_ev,
                    weights: vec![(b.mj, b.weight)],
                }),
            }
        }
        groups.sort_by(|a, b| {
            a.j.cmp(&b.j)
                .then(a.et_ev.partial_cmp(&b.et_ev).unwrap_or(std::cmp::Ordering::Equal))
        });
        groups
    }

    /// Weight-averaged alignment factor over groups with positive weight.
    pub fn mean_alignment(&self) -> Result<T> {
        let mut num = T::zero();
        let mut den = T::zero();
        for g in self.groups() {
            let w = g.total();
            if w > T::zero() {
                num = num + w * g.alignment()?;
                den = den + w;
            }
        }
        if !(den > T::zero()) {
            return Err(invalid("population has no weight"));
        }
        Ok(num / den)
    }

    /// Reads the `j,mj,et_ev,weight` CSV layout.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Record {
            j: u32,
            mj: i32,
            et_ev: f64,
            weight: f64,
        }
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["j", "mj", "et_ev", "weight"] {
            return Err(Error::Table {
                line: 1,
                msg: format!(
                    "expected header 'j,mj,et_ev,weight', found '{}'",
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }
        let mut bins = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let r: Record = record.deserialize(Some(&headers)).map_err(|e| Error::Table {
                line,
                msg: e.to_string(),
            })?;
            let bin = PopulationBin {
                j: r.j,
                mj: r.mj,
                et_ev: T::lit(r.et_ev),
                weight: T::lit(r.weight),
            };
            check_bin(&bin).map_err(|msg| Error::Table { line, msg })?;
            bins.push(bin);
        }
        Ok(Self { bins })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,mj,et_ev,weight\n");
        for b in &self.bins {
            out.push_str(&format!(
                "{},{},{},{}\n",
                b.j,
                b.mj,
                sig6(b.et_ev.as_f64()),
                sig6(b.weight.as_f64())
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterMode {
    /// Keep `E_t < V_min` (cartwheel-like).
    Slow,
    /// Keep `E_t > V_min` (helicopter-like).
    Fast,
    None,
}

impl std::str::FromStr for FilterMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "slow" => Ok(FilterMode::Slow),
            "fast" => Ok(FilterMode::Fast),
            "none" => Ok(FilterMode::None),
            other => Err(invalid(format!("unknown filter mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for FilterMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FilterMode::Slow => "slow",
            FilterMode::Fast => "fast",
            FilterMode::None => "none",
        })
    }
}

/// Alignment of a level with all weight in `|m_j| = j`.
fn helicopter_alignment<T: Scalar>(j: u32) -> T {
    let jf = T::from_u32(j).expect("j representable");
    (T::lit(2.0) * jf - T::one()) / (jf + T::one())
}

/// Energy-selective filter. Surviving groups have their `m_j` weights
/// replaced by a mix of the `m_j = 0` and `|m_j| = j` extremes whose
/// alignment equals the model alignment at the group's energy; the group's
/// total weight is kept.
pub fn dqf_filter<T: Scalar>(
    pop: &MoleculePopulation<T>,
    mode: FilterMode,
    params: &FilterParams<T>,
) -> Result<MoleculePopulation<T>> {
    pop.validate()?;
    params.validate()?;
    if mode == FilterMode::None {
        return Ok(pop.clone());
    }
    let mut bins = Vec::new();
    for g in pop.groups() {
        let keep = match mode {
            FilterMode::Slow => g.et_ev < params.v_min,
            FilterMode::Fast => g.et_ev > params.v_min,
            FilterMode::None => unreachable!(),
        };
        let total = g.total();
        if !keep || !(total > T::zero()) {
            continue;
        }
        let target = dqf_alignment_model(g.et_ev, params);
        let high = helicopter_alignment::<T>(g.j);
        let share = ((target + T::one()) / (high + T::one())).max(T::zero()).min(T::one());
        let cartwheel = total * (T::one() - share);
        let helicopter = total * share / T::lit(2.0);
        let j = g.j as i32;
        for (mj, weight) in [(0, cartwheel), (-j, helicopter), (j, helicopter)] {
            if weight > T::zero() {
                bins.push(PopulationBin {
                    j: g.j,
                    mj,
                    et_ev: g.et_ev,
                    weight,
                });
            }
        }
    }
    let out = MoleculePopulation { bins };
    if !(out.total_weight() > T::zero()) {
        return Err(Error::EmptySelection);
    }
    Ok(out)
}

/// Conversion stage parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConversionParams<T> {
    /// Rate advantage of cartwheel-like over helicopter-like rotors.
    pub steric_ratio: T,
    /// Conversion rate of helicopter-like rotors (1/h).
    pub base_rate: T,
    /// Residence time in the stage (h).
    pub dwell: T,
}

impl<T: Scalar> ConversionParams<T> {
    pub fn new(steric_ratio: T, base_rate: T, dwell: T) -> Result<Self> {
        let p = Self {
            steric_ratio,
            base_rate,
            dwell,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: T| v > T::zero() && v.is_finite();
        if !positive(self.steric_ratio) {
            return Err(invalid(format!(
                "steric ratio must be positive, got {}",
                self.steric_ratio
            )));
        }
        if !positive(self.base_rate) {
            return Err(invalid(format!("base rate must be positive, got {}", self.base_rate)));
        }
        if !positive(self.dwell) {
            return Err(invalid(format!("dwell time must be positive, got {}", self.dwell)));
        }
        Ok(())
    }

    pub fn rate_for(&self, character: RotationalCharacter) -> T {
        match character {
            RotationalCharacter::Clr => self.base_rate * self.steric_ratio,
            RotationalCharacter::Hlr => self.base_rate,
            RotationalCharacter::Isotropic => self.base_rate * (T::one() + self.steric_ratio) / T::lit(2.0),
        }
    }

    /// `1 - exp(-rate * dwell)`.
    pub fn probability(&self, rate: T) -> T {
        -(-rate * self.dwell).exp_m1()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport<T> {
    pub input_weight: T,
    /// Converted (para) weight leaving the stage.
    pub output_weight: T,
    pub unconverted_weight: T,
    pub mean_alignment: T,
    pub conversion_probability: T,
    /// Conversion probability relative to a baseline: the steric-free rate
    /// for [`se_convert`], the unfiltered stream for [`run_pipeline`].
    pub enhancement: T,
}

/// Converts each group with probability `1 - exp(-r_g dwell)`, where `r_g`
/// depends on the group's rotational character.
pub fn se_convert<T: Scalar>(pop: &MoleculePopulation<T>, conv: &ConversionParams<T>) -> Result<StageReport<T>> {
    conv.validate()?;
    pop.validate()?;
    let mut input = T::zero();
    let mut converted = T::zero();
    let mut aligned = T::zero();
    for g in pop.groups() {
        let w = g.total();
        if !(w > T::zero()) {
            continue;
        }
        let a = g.alignment()?;
        let p = conv.probability(conv.rate_for(classify(a)));
        input = input + w;
        converted = converted + w * p;
        aligned = aligned + w * a;
    }
    let probability = converted / input;
    let baseline = conv.probability(conv.base_rate);
    Ok(StageReport {
        input_weight: input,
        output_weight: converted,
        unconverted_weight: input - converted,
        mean_alignment: aligned / input,
        conversion_probability: probability,
        enhancement: probability / baseline,
    })
}

/// Conversion probability of the slow-filtered stream over that of the
/// unfiltered stream.
pub fn enhancement<T: Scalar>(
    pop: &MoleculePopulation<T>,
    params: &FilterParams<T>,
    conv: &ConversionParams<T>,
) -> Result<T> {
    let report = run_pipeline(pop, FilterMode::Slow, params, conv)?;
    Ok(report.filtered.enhancement)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport<T> {
    pub filter: FilterMode,
    pub unfiltered: StageReport<T>,
    pub filtered: StageReport<T>,
}

/// Filter then convert; the filtered report's enhancement is relative to
/// converting the unfiltered population.
pub fn run_pipeline<T: Scalar>(
    pop: &MoleculePopulation<T>,
    mode: FilterMode,
    params: &FilterParams<T>,
    conv: &ConversionParams<T>,
) -> Result<PipelineReport<T>> {
    let unfiltered = se_convert(pop, conv)?;
    let selected = dqf_filter(pop, mode, params)?;
    let mut filtered = se_convert(&selected, conv)?;
    filtered.enhancement = filtered.conversion_probability / unfiltered.conversion_probability;
    Ok(PipelineReport {
        filter: mode,
        unfiltered,
        filtered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(j: u32, mj: i32, et: f64, w: f64) -> PopulationBin<f64> {
        PopulationBin {
            j,
            mj,
            et_ev: et,
            weight: w,
        }
    }

    fn mixed() -> MoleculePopulation<f64> {
        MoleculePopulation::new(vec![bin(1, 0, 0.01, 1.0), bin(1, 1, 0.02, 0.5), bin(1, -1, 0.02, 0.5)]).unwrap()
    }

    #[test]
    fn none_is_identity() {
        let p = mixed();
        assert_eq!(dqf_filter(&p, FilterMode::None, &FilterParams::default()).unwrap(), p);
    }

    #[test]
    fn slow_filter_gives_cartwheel_alignment() {
        let p =
            MoleculePopulation::new(vec![bin(1, 1, 0.01, 1.0), bin(2, 2, 0.01, 2.0), bin(3, 0, 0.01, 1.0)]).unwrap();
        let params = FilterParams::default();
        let out = dqf_filter(&p, FilterMode::Slow, &params).unwrap();
        assert!(out.mean_alignment().unwrap() < 0.0);
        let target = dqf_alignment_model(0.01, &params);
        for g in out.groups() {
            assert!((g.alignment().unwrap() - target).abs() < 1e-12);
        }
        assert!((out.total_weight() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn fast_filter_on_slow_population_is_empty() {
        let p = mixed();
        assert!(matches!(
            dqf_filter(&p, FilterMode::Fast, &FilterParams::default()),
            Err(Error::EmptySelection)
        ));
    }

    #[test]
    fn rejects_bad_bins() {
        assert!(MoleculePopulation::new(vec![bin(0, 0, 0.1, 1.0)]).is_err());
        assert!(MoleculePopulation::new(vec![bin(1, 2, 0.1, 1.0)]).is_err());
        assert!(MoleculePopulation::new(vec![bin(1, 0, -0.1, 1.0)]).is_err());
        assert!(MoleculePopulation::new(vec![bin(1, 0, 0.1, -1.0)]).is_err());
        let empty = MoleculePopulation::new(vec![bin(1, 0, 0.1, 0.0)]).unwrap();
        assert!(se_convert(&empty, &ConversionParams::new(2.0, 1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn conversion_params_validation() {
        assert!(ConversionParams::new(0.0, 1.0, 1.0).is_err());
        assert!(ConversionParams::new(2.0, 0.0, 1.0).is_err());
        assert!(ConversionParams::new(2.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn no_steric_effect_means_uniform_probability() {
        let conv = ConversionParams::new(1.0, 0.3, 2.0).unwrap();
        let r = se_convert(&mixed(), &conv).unwrap();
        assert!((r.conversion_probability - (1.0 - (-0.6_f64).exp())).abs() < 1e-15);
        assert_eq!(r.enhancement, 1.0);
        assert_eq!(enhancement(&mixed(), &FilterParams::default(), &conv).unwrap(), 1.0);
    }

    #[test]
    fn saturation() {
        let conv = ConversionParams::new(3.0, 1.0, 1e3).unwrap();
        let r = se_convert(&mixed(), &conv).unwrap();
        assert_eq!(r.conversion_probability, 1.0);
    }

    #[test]
    fn weight_is_conserved() {
        let conv = ConversionParams::new(2.5, 0.7, 0.9).unwrap();
        let r = se_convert(&mixed(), &conv).unwrap();
        assert!((r.output_weight + r.unconverted_weight - r.input_weight).abs() < 1e-12);
        assert!((r.input_weight - 2.0).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip() {
        let text = "j,mj,et_ev,weight\n1,0,0.01,1\n\n1,1,0.02,0.5\n";
        let p = MoleculePopulation::<f64>::from_csv(text.as_bytes()).unwrap();
        assert_eq!(p.bins.len(), 2);
        assert_eq!(p.to_csv(), "j,mj,et_ev,weight\n1,0,0.01,1\n1,1,0.02,0.5\n");
        assert!(MoleculePopulation::<f64>::from_csv("j,mj,et_ev,weight\n1,2,0.01,1\n".as_bytes()).is_err());
        assert!(MoleculePopulation::<f64>::from_csv("j,mj,e,weight\n".as_bytes()).is_err());
    }
}
