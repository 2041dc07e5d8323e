//! Two-proton nuclear spin space.
//!
//! Basis ordering is fixed as `|uu>, |ud>, |du>, |dd>` (first arrow is proton
//! a). Spin operators carry units of hbar with hbar = 1.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Nuclear spin configurations of H2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpinLabel {
    OrthoPlus,
    OrthoZero,
    OrthoMinus,
    Para,
}

/// Magnetic sublevel of the ortho triplet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrthoSublevel {
    Plus,
    Zero,
    Minus,
}

impl OrthoSublevel {
    pub const ALL: [OrthoSublevel; 3] = [OrthoSublevel::Plus, OrthoSublevel::Zero, OrthoSublevel::Minus];

    pub fn m(self) -> i8 {
        match self {
            OrthoSublevel::Plus => 1,
            OrthoSublevel::Zero => 0,
            OrthoSublevel::Minus => -1,
        }
    }

    pub fn from_m(m: i8) -> Option<Self> {
        match m {
            1 => Some(OrthoSublevel::Plus),
            0 => Some(OrthoSublevel::Zero),
            -1 => Some(OrthoSublevel::Minus),
            _ => None,
        }
    }

    pub fn label(self) -> SpinLabel {
        match self {
            OrthoSublevel::Plus => SpinLabel::OrthoPlus,
            OrthoSublevel::Zero => SpinLabel::OrthoZero,
            OrthoSublevel::Minus => SpinLabel::OrthoMinus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Proton {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// State vector in the 4-dimensional two-proton spin space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NuclearSpinVector<T> {
    pub amplitudes: [Complex<T>; 4],
}

impl<T: Scalar> NuclearSpinVector<T> {
    pub fn new(amplitudes: [Complex<T>; 4]) -> Self {
        Self { amplitudes }
    }

    pub fn from_real(re: [T; 4]) -> Self {
        Self::new(re.map(|r| Complex::new(r, T::zero())))
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
    }

    /// Proton exchange `P_ab`: swaps the `|ud>` and `|du>` amplitudes.
    pub fn exchanged(&self) -> Self {
        let [uu, ud, du, dd] = self.amplitudes;
        Self::new([uu, du, ud, dd])
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.amplitudes.map(|a| a * c))
    }
}

/// Normalized spin state for a labelled configuration.
pub fn spin_state<T: Scalar>(label: SpinLabel) -> NuclearSpinVector<T> {
    let h = T::FRAC_1_SQRT_2();
    let o = T::zero();
    let l = T::one();
    match label {
        SpinLabel::OrthoPlus => NuclearSpinVector::from_real([l, o, o, o]),
        SpinLabel::OrthoZero => NuclearSpinVector::from_real([o, h, h, o]),
        SpinLabel::OrthoMinus => NuclearSpinVector::from_real([o, o, o, l]),
        SpinLabel::Para => NuclearSpinVector::from_real([o, h, -h, o]),
    }
}

/// 4x4 complex operator on the two-proton space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinOperatorMatrix<T> {
    pub entries: [[Complex<T>; 4]; 4],
}

impl<T: Scalar> SpinOperatorMatrix<T> {
    pub fn zero() -> Self {
        Self {
            entries: [[Complex::new(T::zero(), T::zero()); 4]; 4],
        }
    }

    pub fn apply(&self, v: &NuclearSpinVector<T>) -> NuclearSpinVector<T> {
        let mut out = [Complex::new(T::zero(), T::zero()); 4];
        for (row, o) in self.entries.iter().zip(out.iter_mut()) {
            *o = row
                .iter()
                .zip(v.amplitudes.iter())
                .fold(Complex::new(T::zero(), T::zero()), |acc, (m, a)| acc + m * a);
        }
        NuclearSpinVector::new(out)
    }

    /// `<bra|self|ket>`.
    pub fn element(&self, bra: &NuclearSpinVector<T>, ket: &NuclearSpinVector<T>) -> Complex<T> {
        bra.inner(&self.apply(ket))
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] = self.entries[j][i].conj();
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let mut out = *self;
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                *e = *e * c;
            }
        }
        out
    }
}

impl<T: Scalar> Add for SpinOperatorMatrix<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] = self.entries[i][j] + rhs.entries[i][j];
            }
        }
        out
    }
}

impl<T: Scalar> Sub for SpinOperatorMatrix<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] = self.entries[i][j] - rhs.entries[i][j];
            }
        }
        out
    }
}

impl<T: Scalar> Mul for SpinOperatorMatrix<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    out.entries[i][j] = out.entries[i][j] + self.entries[i][k] * rhs.entries[k][j];
                }
            }
        }
        out
    }
}

fn half_pauli<T: Scalar>(axis: Axis) -> [[Complex<T>; 2]; 2] {
    let z = Complex::new(T::zero(), T::zero());
    let h = T::lit(0.5);
    match axis {
        Axis::X => [[z, Complex::new(h, T::zero())], [Complex::new(h, T::zero()), z]],
        Axis::Y => [[z, Complex::new(T::zero(), -h)], [Complex::new(T::zero(), h), z]],
        Axis::Z => [[Complex::new(h, T::zero()), z], [z, Complex::new(-h, T::zero())]],
    }
}

fn kron<T: Scalar>(a: &[[Complex<T>; 2]; 2], b: &[[Complex<T>; 2]; 2]) -> SpinOperatorMatrix<T> {
    let mut out = SpinOperatorMatrix::zero();
    for (r, row) in out.entries.iter_mut().enumerate() {
        for (c, e) in row.iter_mut().enumerate() {
            *e = a[r / 2][c / 2] * b[r % 2][c % 2];
        }
    }
    out
}

/// Single-proton spin component embedded in the pair space:
/// `(sigma/2) (x) 1` for proton a, `1 (x) (sigma/2)` for proton b.
pub fn spin_operator<T: Scalar>(proton: Proton, axis: Axis) -> SpinOperatorMatrix<T> {
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let identity = [[one, zero], [zero, one]];
    let s = half_pauli::<T>(axis);
    match proton {
        Proton::A => kron(&s, &identity),
        Proton::B => kron(&identity, &s),
    }
}

/// Cartesian vector of transition amplitudes `<para|I_a^k - I_b^k|ortho, m>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionVector<T> {
    pub components: [Complex<T>; 3],
}

impl<T: Scalar> TransitionVector<T> {
    pub fn norm_sqr(&self) -> T {
        self.components.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }
}

/// Transition vector for ortho sublevel `m`, in closed form.
///
/// Only the antisymmetric combination connects the triplet to the singlet;
/// each sublevel couples through exactly one hbar of amplitude.
pub fn transition_vector<T: Scalar>(sublevel: OrthoSublevel) -> TransitionVector<T> {
    let h = T::FRAC_1_SQRT_2();
    let o = T::zero();
    let c = Complex::new;
    let components = match sublevel {
        OrthoSublevel::Plus => [c(-h, o), c(o, -h), c(o, o)],
        OrthoSublevel::Zero => [c(o, o), c(o, o), c(T::one(), o)],
        OrthoSublevel::Minus => [c(h, o), c(o, -h), c(o, o)],
    };
    TransitionVector { components }
}

/// Unpolarized ortho average `(1/3) sum_m |t(m)|^2` (hbar^2 units).
pub fn ensemble_coupling_strength<T: Scalar>() -> T {
    let total: T = OrthoSublevel::ALL
        .iter()
        .map(|&m| transition_vector::<T>(m).norm_sqr())
        .sum();
    total / T::lit(3.0)
}
