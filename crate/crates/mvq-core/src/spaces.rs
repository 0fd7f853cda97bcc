//! Finite-dimensional normed spaces and geodesic bicombings.
//!
//! A [`Space`] is `R^n` with one of three norms. A [`Bicombing`] assigns to
//! every ordered pair `(x, y)` a unit-speed geodesic from `x` to `y`; the
//! only rule implemented is the linear one, `c(t) = x + (t / d(x, y))(y - x)`,
//! which is weakly convex with constant 1 on every normed space.
//! [`verify_weak_convexity`] is a sampled falsifier search for that
//! inequality; acceptance thresholds belong to the caller, not to the search.

use alloc::vec::Vec;
use thiserror::Error;

use crate::math;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("spaces must have dimension at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("geodesic parameter out of range: t must lie in [0, d(x, y)]")]
    ParamOutOfRange,
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

/// Norm selector for `R^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    /// `sqrt(sum x_i^2)`
    Euclidean,
    /// `max |x_i|`
    Sup,
    /// `sum |x_i|`
    One,
}

impl Norm {
    pub fn name(&self) -> &'static str {
        match self {
            Norm::Euclidean => "euclidean",
            Norm::Sup => "sup",
            Norm::One => "one",
        }
    }
}

/// `R^n` with a chosen norm; points are `&[f64]` of length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Space {
    dim: usize,
    norm: Norm,
}

impl Space {
    pub fn new(dim: usize, norm: Norm) -> Result<Self, SpaceError> {
        if dim == 0 {
            return Err(SpaceError::ZeroDimension);
        }
        Ok(Self { dim, norm })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(dim, Norm::Euclidean).expect("dim >= 1")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn check_point(&self, x: &[f64]) -> Result<(), SpaceError> {
        if x.len() != self.dim {
            return Err(SpaceError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Distance induced by the selected norm.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64, SpaceError> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.dist(x, y))
    }

    /// Norm of a single point, `d(x, 0)`.
    pub fn norm_of(&self, x: &[f64]) -> Result<f64, SpaceError> {
        self.check_point(x)?;
        Ok(norm_nd(self.norm, x.iter().copied()))
    }

    /// Distance without dimension checks; callers guarantee valid points.
    pub(crate) fn dist(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        norm_nd(self.norm, x.iter().zip(y).map(|(a, b)| a - b))
    }
}

fn norm_nd(norm: Norm, diffs: impl Iterator<Item = f64>) -> f64 {
    match norm {
        Norm::Euclidean => math::sqrt(diffs.map(|d| d * d).sum()),
        Norm::Sup => diffs.fold(0.0, |m, d| if d.abs() > m { d.abs() } else { m }),
        Norm::One => diffs.map(|d| d.abs()).sum(),
    }
}

/// An assignment of a unit-speed geodesic `c_{xy} : [0, d(x, y)] -> Y` to
/// every ordered pair of points, carrying its weak-convexity constant.
///
/// Only the linear rule on normed spaces is provided; the degenerate pair
/// `x = y` gets the constant curve on the single parameter value 0.
#[derive(Debug, Clone, Copy)]
pub struct Bicombing {
    space: Space,
    gamma: f64,
}

/// The linear geodesic bicombing `c(t) = x + (t / d(x, y))(y - x)`, weakly
/// convex with constant 1.
pub fn linear_bicombing(space: Space) -> Bicombing {
    Bicombing { space, gamma: 1.0 }
}

impl Bicombing {
    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Evaluates the geodesic from `x` to `y` at arc length `t in [0, d(x, y)]`.
    ///
    /// The endpoints are returned exactly; parameters beyond `d(x, y)` by
    /// more than a relative 1e-9 are rejected rather than extrapolated.
    pub fn geodesic_point(&self, x: &[f64], y: &[f64], t: f64) -> Result<Vec<f64>, SpaceError> {
        let len = self.space.distance(x, y)?;
        if t < 0.0 {
            return Err(SpaceError::ParamOutOfRange);
        }
        if len == 0.0 {
            // Constant curve: the interval [0, l] collapses to {0}.
            if t > 1e-12 {
                return Err(SpaceError::ParamOutOfRange);
            }
            return Ok(x.to_vec());
        }
        let mut s = t / len;
        if s > 1.0 {
            if s > 1.0 + 1e-9 {
                return Err(SpaceError::ParamOutOfRange);
            }
            s = 1.0;
        }
        if s == 0.0 {
            return Ok(x.to_vec());
        }
        if s == 1.0 {
            return Ok(y.to_vec());
        }
        Ok(x.iter().zip(y).map(|(a, b)| a + s * (b - a)).collect())
    }
}

/// Outcome of a weak-convexity falsifier search.
///
/// For each triple `(x, y, z)` and each `t`, the slack is
/// `gamma * t * d(y, z) - d(c_xy(t d(x, y)), c_xz(t d(x, z)))`; the
/// inequality holds on the sample iff the minimum slack is above the
/// caller's tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub min_slack: f64,
    pub worst_triple: usize,
    pub worst_t: f64,
    pub samples: usize,
}

impl ConvexityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.min_slack >= -tol
    }
}

/// Searches sampled triples and parameters for violations of the
/// weak-convexity inequality with the given `gamma`.
pub fn verify_weak_convexity(
    b: &Bicombing,
    gamma: f64,
    triples: &[[Vec<f64>; 3]],
    ts: &[f64],
) -> Result<ConvexityReport, SpaceError> {
    if triples.is_empty() {
        return Err(SpaceError::EmptyInput("triples"));
    }
    if ts.is_empty() {
        return Err(SpaceError::EmptyInput("ts"));
    }
    let space = b.space();
    let mut report = ConvexityReport {
        min_slack: f64::INFINITY,
        worst_triple: 0,
        worst_t: ts[0],
        samples: 0,
    };
    for (idx, [x, y, z]) in triples.iter().enumerate() {
        let dxy = space.distance(x, y)?;
        let dxz = space.distance(x, z)?;
        let dyz = space.dist(y, z);
        for &t in ts {
            let p = b.geodesic_point(x, y, t * dxy)?;
            let q = b.geodesic_point(x, z, t * dxz)?;
            let slack = gamma * t * dyz - space.dist(&p, &q);
            report.samples += 1;
            if slack < report.min_slack {
                report.min_slack = slack;
                report.worst_triple = idx;
                report.worst_t = t;
            }
        }
    }
    Ok(report)
}
