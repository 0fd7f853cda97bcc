//! Computation with unordered multisets of `Q` points in finite-dimensional
//! normed spaces.
//!
//! The crate is organized around the metric space of `Q`-point multisets: the
//! distance between two multisets is the smallest bottleneck over all
//! pairings, a min-max assignment value. On top of that metric it provides
//!
//! - [`spaces`]: norms on `R^n`, the linear geodesic bicombing, and a sampled
//!   falsifier search for weak convexity of bicombings;
//! - [`qspace`]: [`qspace::QPoint`] multisets, exhaustive and matching-based
//!   bottleneck solvers, optimal pairings, and multiset algebra;
//! - [`mvf`]: multiple-valued maps `X -> Q_Q(Y)` as evaluators or sample
//!   tables, sphere/ball meshes, Lipschitz-constant estimation, and branch
//!   monodromy around loops;
//! - [`extension`]: the radial extension of a multiple-valued map from the
//!   unit sphere to the unit ball along a bicombing, with cluster
//!   decomposition of the base value and verification of the quantitative
//!   Lipschitz bounds;
//! - [`nagata`]: bounded covers, `s`-multiplicity, and product covers of the
//!   multiset space with their multiplicity bound.
//!
//! Everything is deterministic: all randomness flows from explicit seeds
//! (see [`rng::SplitMix64`]), and all operations are pure functions of their
//! inputs. The crate is `no_std`-compatible with `alloc`; enable the `libm`
//! feature when building without `std`.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("mvq-core requires either the `std` or the `libm` feature");

extern crate alloc;

mod assignment;
mod math;

pub mod extension;
pub mod mvf;
pub mod nagata;
pub mod qspace;
pub mod rng;
pub mod spaces;

pub use extension::{ClusterDecomposition, Extension, ExtensionParams, ExtensionReport};
pub use mvf::{Mesh, SampledMvf};
pub use qspace::{Matching, QPoint};
pub use spaces::{Bicombing, Norm, Space};

/// Absolute tolerance for geometric identity checks (endpoint conditions,
/// isometric parametrization, boundary restriction). Double-precision
/// roundoff across a handful of arithmetic operations stays well below this.
pub const GEOMETRIC_TOL: f64 = 1e-9;
