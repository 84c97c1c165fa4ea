//! Ground spaces, points and the kernel abstraction.
//!
//! A [`Kernel`] is an immutable, cheaply clonable evaluator `K(u, v)` over one
//! of three concrete ground spaces (finite sets with counting measure,
//! Euclidean space with Lebesgue measure, spheres with surface measure),
//! together with a [`Descriptor`] carrying model metadata and the symmetry
//! the kernel declares about itself.

mod palm;
mod repulsion;

pub use palm::{
    displacement_intensity, joint_intensity, pair_correlation, palm_intensity_dominated, palm_kernel,
};
pub use repulsion::{repulsiveness_p, ProfileCoord, RepulsivenessReport};

use crate::error::{Error, Result};
use crate::numerics::sphere_area;
use crate::numerics::CMatrix;
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroundSpace {
    /// `{1, ..., n}` with counting measure.
    Finite(usize),
    /// `R^d` with Lebesgue measure.
    Euclidean(usize),
    /// `S^d` in `R^(d+1)` with surface measure.
    Sphere(usize),
}

impl GroundSpace {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GroundSpace::Finite(0) => Err(Error::InvalidInput("finite space needs n >= 1".into())),
            GroundSpace::Euclidean(0) | GroundSpace::Sphere(0) => Err(Error::UnsupportedDimension(0)),
            _ => Ok(()),
        }
    }

    /// Total reference measure, when finite.
    pub fn total_measure(&self) -> Option<f64> {
        match *self {
            GroundSpace::Finite(n) => Some(n as f64),
            GroundSpace::Euclidean(_) => None,
            GroundSpace::Sphere(d) => Some(sphere_area(d)),
        }
    }

    /// Checks that `p` is a point of this space.
    pub fn check(&self, p: &Point) -> Result<()> {
        match (self, p) {
            (GroundSpace::Finite(n), Point::Site(i)) if (1..=*n).contains(i) => Ok(()),
            (GroundSpace::Euclidean(d), Point::Euclidean(x)) if x.len() == *d => Ok(()),
            (GroundSpace::Sphere(d), Point::Sphere(x)) if x.len() == *d + 1 => {
                let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                if (norm - 1.0).abs() <= 1e-12 {
                    Ok(())
                } else {
                    Err(Error::PointMismatch(format!("sphere point has norm {norm}")))
                }
            }
            _ => Err(Error::PointMismatch(format!("{p} is not a point of {self:?}"))),
        }
    }

    /// A canonical base point: site 1, the origin, or the north pole.
    pub fn origin(&self) -> Point {
        match *self {
            GroundSpace::Finite(_) => Point::Site(1),
            GroundSpace::Euclidean(d) => Point::Euclidean(vec![0.0; d]),
            GroundSpace::Sphere(d) => {
                let mut x = vec![0.0; d + 1];
                x[d] = 1.0;
                Point::Sphere(x)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    /// 1-based site index.
    Site(usize),
    Euclidean(Vec<f64>),
    /// Unit vector in `R^(d+1)`.
    Sphere(Vec<f64>),
}

impl Point {
    /// Sphere point from any nonzero vector (normalised).
    pub fn on_sphere(coords: Vec<f64>) -> Result<Point> {
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::PointMismatch("cannot normalise a zero vector".into()));
        }
        Ok(Point::Sphere(coords.into_iter().map(|c| c / norm).collect()))
    }

    pub fn coords(&self) -> &[f64] {
        match self {
            Point::Site(_) => &[],
            Point::Euclidean(x) | Point::Sphere(x) => x,
        }
    }

    pub fn site(&self) -> Option<usize> {
        match self {
            Point::Site(i) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Site(i) => write!(f, "site {i}"),
            Point::Euclidean(x) | Point::Sphere(x) => {
                let parts: Vec<String> = x.iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Symmetry a kernel declares about itself; enables the isotropic fast paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    /// Euclidean: `|K(u, v)|` depends only on `|u - v|` and `K(u, u)` is constant.
    RadialModulus,
    /// Sphere: `K(u, v) = K0(u . v)`.
    SphereIsotropic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Descriptor {
    pub family: String,
    pub params: Vec<(String, f64)>,
    pub symmetry: Symmetry,
    /// Constant intensity `K(u, u)` for stationary models.
    pub intensity: Option<f64>,
    /// The kernel is a projection (`p_u = 1` everywhere).
    pub projection: bool,
    /// Set on reduced Palm kernels.
    pub anchor: Option<Point>,
}

impl Descriptor {
    pub fn new(family: impl Into<String>) -> Self {
        Self {
            family: family.into(),
            params: Vec::new(),
            symmetry: Symmetry::General,
            intensity: None,
            projection: false,
            anchor: None,
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.push((name.to_string(), value));
        self
    }

    pub fn symmetry(mut self, s: Symmetry) -> Self {
        self.symmetry = s;
        self
    }

    pub fn intensity(mut self, rho: f64) -> Self {
        self.intensity = Some(rho);
        self
    }

    pub fn projection(mut self, yes: bool) -> Self {
        self.projection = yes;
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

type EvalFn = dyn Fn(&Point, &Point) -> Complex64 + Send + Sync;

/// Hermitian kernel over a ground space.
#[derive(Clone)]
pub struct Kernel {
    space: GroundSpace,
    eval: Arc<EvalFn>,
    descriptor: Descriptor,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("space", &self.space)
            .field("descriptor", &self.descriptor)
            .finish_non_exhaustive()
    }
}

impl Kernel {
    pub fn new(
        space: GroundSpace,
        descriptor: Descriptor,
        eval: impl Fn(&Point, &Point) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            space,
            eval: Arc::new(eval),
            descriptor,
        }
    }

    /// Kernel on `{1, ..., n}` backed by a square matrix.
    pub fn from_matrix(matrix: CMatrix, family: &str) -> Result<Kernel> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let n = matrix.nrows();
        let space = GroundSpace::Finite(n);
        space.validate()?;
        Ok(Kernel::new(space, Descriptor::new(family), move |u, v| {
            matrix[(site_index(u), site_index(v))]
        }))
    }

    pub fn space(&self) -> GroundSpace {
        self.space
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn with_descriptor(mut self, descriptor: Descriptor) -> Self {
        self.descriptor = descriptor;
        self
    }

    #[inline]
    pub fn eval(&self, u: &Point, v: &Point) -> Complex64 {
        (self.eval)(u, v)
    }

    /// Intensity `rho(u) = K(u, u)`.
    pub fn intensity_at(&self, u: &Point) -> f64 {
        self.eval(u, u).re
    }

    /// Dense matrix `K(u_i, u_j)`.
    pub fn gram(&self, points: &[Point]) -> CMatrix {
        let n = points.len();
        CMatrix::from_fn(n, n, |i, j| self.eval(&points[i], &points[j]))
    }

    /// The full matrix of a kernel on a finite space.
    pub fn to_matrix(&self) -> Option<CMatrix> {
        match self.space {
            GroundSpace::Finite(n) => {
                let sites: Vec<Point> = (1..=n).map(Point::Site).collect();
                Some(self.gram(&sites))
            }
            _ => None,
        }
    }

    /// Spot-checks Hermitian symmetry and the diagonal on the given pairs.
    pub fn spot_check(&self, pairs: &[(Point, Point)]) -> Result<()> {
        for (u, v) in pairs {
            let dev = (self.eval(u, v) - self.eval(v, u).conj()).norm();
            if dev > 1e-10 {
                return Err(Error::NonHermitian { deviation: dev });
            }
            for p in [u, v] {
                let d = self.eval(p, p);
                if d.im.abs() > 1e-10 || d.re < -1e-12 {
                    return Err(Error::InvalidInput(format!("diagonal K({p},{p}) = {d} is not a nonnegative real")));
                }
            }
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn site_index(p: &Point) -> usize {
    match p {
        Point::Site(i) => i - 1,
        other => panic!("finite kernel evaluated at non-site point {other}"),
    }
}
