//! Numerical toolkit for ortho-para hydrogen conversion.
//!
//! The modules follow the chain from nuclear spin to storage tank:
//!
//! - [`spin`]: two-proton nuclear spin space and the ortho to para transition
//!   matrix elements of the antisymmetric operator `I_a - I_b`.
//! - [`density`]: electron spin-density fields (cube grids or analytic
//!   profiles) and the paired-proton probe.
//! - [`hyperfine`]: contact matrix element `xi(Z, theta)`, yield `W = |xi|^2`,
//!   sweeps, extrema and the steric ratio.
//! - [`alignment`]: quadrupole alignment factor of desorbing molecules and the
//!   translational-energy filter model.
//! - [`thermo`]: rigid-rotor level statistics, ortho fraction, heat capacity.
//! - [`tank`]: boil-off kinetics of stored liquid hydrogen.
//! - [`pipeline`]: filter stage followed by the steric conversion stage.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alignment;
pub mod density;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod hyperfine;
pub mod pipeline;
pub mod scalar;
pub mod spin;
pub mod tank;
pub mod thermo;

pub use alignment::{AlignmentTable, FilterParams, RotationalCharacter};
pub use density::{ProbeGeometry, ProfileKind, SpinDensityField};
pub use error::{Error, Result};
pub use hyperfine::{HyperfineParams, OrthoPolicy, YieldCurve};
pub use pipeline::{FilterMode, MoleculePopulation, StageReport};
pub use scalar::Scalar;
pub use spin::{NuclearSpinVector, SpinOperatorMatrix, TransitionVector};
pub use tank::{TankParams, TankState};
pub use thermo::{RotationalModel, Species};

pub type SpinVector64 = NuclearSpinVector<f64>;
pub type SpinOperator64 = SpinOperatorMatrix<f64>;
pub type Transition64 = TransitionVector<f64>;
pub type Field64 = SpinDensityField<f64>;
pub type Geometry64 = ProbeGeometry<f64>;
pub type Hyperfine64 = HyperfineParams<f64>;
pub type Curve64 = YieldCurve<f64>;
pub type Table64 = AlignmentTable<f64>;
pub type Filter64 = FilterParams<f64>;
pub type Rotor64 = RotationalModel<f64>;
pub type Tank64 = TankParams<f64>;
pub type TankState64 = TankState<f64>;
pub type Population64 = MoleculePopulation<f64>;
pub type Report64 = StageReport<f64>;

pub type SpinVector32 = NuclearSpinVector<f32>;
pub type Field32 = SpinDensityField<f32>;
pub type Rotor32 = RotationalModel<f32>;
pub type Tank32 = TankParams<f32>;
