//! Electron spin-density fields and the paired-proton probe.
//!
//! Lengths are in angstrom throughout. A field is either a volumetric grid
//! (usually read from a cube file, see [`cube`]) or an analytic radial
//! profile around a center.

pub mod cube;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::{sin_cos_deg, Scalar};

pub type Vec3<T> = [T; 3];

/// Bohr radius in angstrom.
pub const BOHR_TO_ANGSTROM: f64 = 0.529177;

/// Default H-H bond length in angstrom.
pub const DEFAULT_BOND_LENGTH: f64 = 0.74;

/// Grid hull tolerance in fractional (index) units.
const HULL_TOL: f64 = 1e-9;

fn sub<T: Scalar>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add<T: Scalar>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale<T: Scalar>(a: Vec3<T>, s: T) -> Vec3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn dot<T: Scalar>(a: Vec3<T>, b: Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross<T: Scalar>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm<T: Scalar>(a: Vec3<T>) -> T {
    dot(a, a).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    /// `A exp(-|r - c| / r0)`
    Exponential,
    /// `A exp(-|r - c|^2 / r0^2)`
    Gaussian,
}

impl std::str::FromStr for ProfileKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exponential" | "exp" => Ok(ProfileKind::Exponential),
            "gaussian" | "gauss" => Ok(ProfileKind::Gaussian),
            other => Err(invalid(format!("unknown profile kind '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom<T> {
    pub atomic_number: i32,
    pub charge: T,
    pub position: Vec3<T>,
}

/// Volumetric grid with general (possibly skewed) voxel steps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridField<T> {
    pub origin: Vec3<T>,
    /// Row `i` is the step vector along grid index `i`.
    pub steps: [Vec3<T>; 3],
    pub dims: [usize; 3],
    /// Row-major, third index fastest.
    pub values: Vec<T>,
    pub atoms: Vec<Atom<T>>,
    #[serde(skip)]
    inverse: [Vec3<T>; 3],
}

impl<T: Scalar> GridField<T> {
    pub fn new(
        origin: Vec3<T>,
        steps: [Vec3<T>; 3],
        dims: [usize; 3],
        values: Vec<T>,
        atoms: Vec<Atom<T>>,
    ) -> Result<Self> {
        if dims.iter().any(|&n| n < 2) {
            return Err(invalid(format!(
                "grid dimensions must be >= 2 along each axis, got {dims:?}"
            )));
        }
        let expected = dims[0] * dims[1] * dims[2];
        if values.len() != expected {
            return Err(invalid(format!("grid expects {expected} values, got {}", values.len())));
        }
        let det = dot(steps[0], cross(steps[1], steps[2]));
        let vol = norm(steps[0]) * norm(steps[1]) * norm(steps[2]);
        if !(vol > T::zero()) || !((det / vol).abs() > T::lit(1e-12)) {
            return Err(invalid("voxel step vectors are linearly dependent"));
        }
        // inverse of the matrix whose columns are the step vectors
        let inv_det = T::one() / det;
        let inverse = [
            scale(cross(steps[1], steps[2]), inv_det),
            scale(cross(steps[2], steps[0]), inv_det),
            scale(cross(steps[0], steps[1]), inv_det),
        ];
        Ok(Self {
            origin,
            steps,
            dims,
            values,
            atoms,
            inverse,
        })
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn value_at(&self, i: usize, j: usize, k: usize) -> T {
        self.values[self.index(i, j, k)]
    }

    pub fn node_position(&self, i: usize, j: usize, k: usize) -> Vec3<T> {
        let mut p = self.origin;
        for (n, step) in [i, j, k].into_iter().zip(self.steps.iter()) {
            p = add(p, scale(*step, T::from_usize_exact(n)));
        }
        p
    }

    /// Fractional grid coordinates of a point.
    pub fn fractional(&self, point: Vec3<T>) -> Vec3<T> {
        let d = sub(point, self.origin);
        [
            dot(self.inverse[0], d),
            dot(self.inverse[1], d),
            dot(self.inverse[2], d),
        ]
    }

    fn sample(&self, point: Vec3<T>) -> Result<T> {
        let f = self.fractional(point);
        let tol = T::lit(HULL_TOL);
        let mut base = [0usize; 3];
        let mut t = [T::zero(); 3];
        for axis in 0..3 {
            let upper = T::from_usize_exact(self.dims[axis] - 1);
            let fa = f[axis];
            if !(fa >= -tol && fa <= upper + tol) {
                return Err(Error::OutOfHull {
                    x: point[0].as_f64(),
                    y: point[1].as_f64(),
                    z: point[2].as_f64(),
                });
            }
            let fa = fa.max(T::zero()).min(upper);
            let cell = fa.floor().to_usize().unwrap_or(0).min(self.dims[axis] - 2);
            base[axis] = cell;
            t[axis] = (fa - T::from_usize_exact(cell)).max(T::zero()).min(T::one());
        }
        let [i, j, k] = base;
        let lerp = |a: T, b: T, s: T| a * (T::one() - s) + b * s;
        let c00 = lerp(self.value_at(i, j, k), self.value_at(i + 1, j, k), t[0]);
        let c01 = lerp(self.value_at(i, j, k + 1), self.value_at(i + 1, j, k + 1), t[0]);
        let c10 = lerp(self.value_at(i, j + 1, k), self.value_at(i + 1, j + 1, k), t[0]);
        let c11 = lerp(self.value_at(i, j + 1, k + 1), self.value_at(i + 1, j + 1, k + 1), t[0]);
        let c0 = lerp(c00, c10, t[1]);
        let c1 = lerp(c01, c11, t[1]);
        Ok(lerp(c0, c1, t[2]))
    }
}

/// Radially symmetric analytic density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticProfile<T> {
    pub kind: ProfileKind,
    pub center: Vec3<T>,
    pub amplitude: T,
    pub decay_length: T,
}

impl<T: Scalar> AnalyticProfile<T> {
    fn sample(&self, point: Vec3<T>) -> T {
        let r = norm(sub(point, self.center));
        let x = r / self.decay_length;
        match self.kind {
            ProfileKind::Exponential => self.amplitude * (-x).exp(),
            ProfileKind::Gaussian => self.amplitude * (-x * x).exp(),
        }
    }
}

/// Net spin density `rho_alpha - rho_beta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum SpinDensityField<T> {
    Grid(GridField<T>),
    Analytic(AnalyticProfile<T>),
}

impl<T: Scalar> SpinDensityField<T> {
    /// Density at `point`: trilinear interpolation on grids, direct
    /// evaluation for analytic profiles. Grid points outside the hull are
    /// an error.
    pub fn sample(&self, point: Vec3<T>) -> Result<T> {
        match self {
            SpinDensityField::Grid(g) => g.sample(point),
            SpinDensityField::Analytic(a) => Ok(a.sample(point)),
        }
    }

    pub fn as_grid(&self) -> Option<&GridField<T>> {
        match self {
            SpinDensityField::Grid(g) => Some(g),
            SpinDensityField::Analytic(_) => None,
        }
    }
}

/// Analytic stand-in field.
pub fn synthetic_field<T: Scalar>(
    kind: ProfileKind,
    amplitude: T,
    decay_length: T,
    center: Vec3<T>,
) -> Result<SpinDensityField<T>> {
    if !(decay_length > T::zero()) || !decay_length.is_finite() {
        return Err(invalid(format!("decay length must be positive, got {decay_length}")));
    }
    if !amplitude.is_finite() {
        return Err(invalid("amplitude must be finite"));
    }
    Ok(SpinDensityField::Analytic(AnalyticProfile {
        kind,
        center,
        amplitude,
        decay_length,
    }))
}

/// Placement of H2 relative to the spin center: the molecule's center of
/// mass sits at `center + Z * axis`, the bond tilted by `theta` from `axis`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeGeometry<T> {
    pub axis: Vec3<T>,
    pub center: Vec3<T>,
    pub bond_length: T,
    pub azimuth_deg: T,
}

impl<T: Scalar> ProbeGeometry<T> {
    pub fn new(axis: Vec3<T>, center: Vec3<T>, bond_length: T, azimuth_deg: T) -> Result<Self> {
        if ((norm(axis) - T::one()).abs()).as_f64() > 1e-12 {
            return Err(invalid("probe axis must have unit norm"));
        }
        if !(bond_length > T::zero()) {
            return Err(invalid(format!("bond length must be positive, got {bond_length}")));
        }
        Ok(Self {
            axis,
            center,
            bond_length,
            azimuth_deg,
        })
    }

    /// Surface normal along `z`, ion at the origin, 0.74 A bond, zero azimuth.
    pub fn along_z() -> Self {
        Self::along([T::zero(), T::zero(), T::one()])
    }

    /// Unit axis `axis` through the origin with default bond length.
    pub fn along(axis: Vec3<T>) -> Self {
        Self {
            axis,
            center: [T::zero(); 3],
            bond_length: T::lit(DEFAULT_BOND_LENGTH),
            azimuth_deg: T::zero(),
        }
    }

    pub fn with_bond_length(mut self, d: T) -> Result<Self> {
        if !(d > T::zero()) {
            return Err(invalid(format!("bond length must be positive, got {d}")));
        }
        self.bond_length = d;
        Ok(self)
    }

    /// Orthonormal pair spanning the plane perpendicular to the axis.
    /// Coordinate axes map cyclically (z -> x, y; x -> y, z; y -> z, x).
    fn transverse_frame(&self) -> (Vec3<T>, Vec3<T>) {
        let o = T::zero();
        let l = T::one();
        let a = self.axis;
        if a == [o, o, l] {
            return ([l, o, o], [o, l, o]);
        }
        if a == [l, o, o] {
            return ([o, l, o], [o, o, l]);
        }
        if a == [o, l, o] {
            return ([o, o, l], [l, o, o]);
        }
        // least-aligned coordinate direction as the seed
        let abs = a.map(|c| c.abs());
        let seed = if abs[0] <= abs[1] && abs[0] <= abs[2] {
            [l, o, o]
        } else if abs[1] <= abs[2] {
            [o, l, o]
        } else {
            [o, o, l]
        };
        let e1 = sub(seed, scale(a, dot(seed, a)));
        let e1 = scale(e1, l / norm(e1));
        let e2 = cross(a, e1);
        (e1, e2)
    }

    /// Unit bond direction at polar angle `theta` and the configured azimuth.
    pub fn bond_direction(&self, theta_deg: T) -> Vec3<T> {
        let (e1, e2) = self.transverse_frame();
        let (st, ct) = sin_cos_deg(theta_deg);
        let (sp, cp) = sin_cos_deg(self.azimuth_deg);
        let transverse = add(scale(e1, cp), scale(e2, sp));
        add(scale(transverse, st), scale(self.axis, ct))
    }

    /// Proton positions `(r_a, r_b)`; proton a is displaced along `+u`.
    pub fn proton_positions(&self, z: T, theta_deg: T) -> (Vec3<T>, Vec3<T>) {
        let u = self.bond_direction(theta_deg);
        let half = self.bond_length / T::lit(2.0);
        let cm = scale(self.axis, z);
        let ra = add(self.center, add(cm, scale(u, half)));
        let rb = add(self.center, sub(cm, scale(u, half)));
        (ra, rb)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample<T> {
    pub rho_a: T,
    pub rho_b: T,
    /// `rho_a - rho_b`
    pub delta: T,
}

pub(crate) fn check_probe_args<T: Scalar>(z: T, theta_deg: T) -> Result<()> {
    if !(z >= T::zero()) {
        return Err(invalid(format!("Z must be >= 0, got {z}")));
    }
    if !(theta_deg >= T::zero() && theta_deg <= T::lit(180.0)) {
        return Err(invalid(format!("theta must lie in [0, 180] deg, got {theta_deg}")));
    }
    Ok(())
}

/// Spin density at both proton sites and their difference.
pub fn probe_pair<T: Scalar>(
    field: &SpinDensityField<T>,
    geom: &ProbeGeometry<T>,
    z: T,
    theta_deg: T,
) -> Result<ProbeSample<T>> {
    check_probe_args(z, theta_deg)?;
    let (ra, rb) = geom.proton_positions(z, theta_deg);
    let rho_a = field.sample(ra)?;
    let rho_b = field.sample(rb)?;
    Ok(ProbeSample {
        rho_a,
        rho_b,
        delta: rho_a - rho_b,
    })
}
