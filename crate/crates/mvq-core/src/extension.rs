//! Radial Lipschitz extension of multiple-valued maps from the unit sphere
//! to the closed unit ball.
//!
//! Given `f : S^m -> Q_Q(Y)` with Lipschitz constant `L` and a weakly convex
//! geodesic bicombing on `Y`, the construction
//!
//! 1. clusters the support of the base value `f(base)` by single linkage at
//!    threshold `4D` with `D = 2L`, which makes distinct clusters more than
//!    `4D` apart and chains cluster members in steps of at most `4D`;
//! 2. splits `f(x)` at every sphere point into per-cluster parts by closed
//!    `D`-ball membership around the cluster members ([`decompose_at`]);
//! 3. maps `x` in the ball to the multiset of geodesic points
//!    `c(base_i, q)(|x| * d(base_i, q))` over the part points `q`, and `0`
//!    to `Q_i` copies of each cluster base.
//!
//! The result restricts to `f` on the sphere and is Lipschitz with constant
//! at most `(gamma + 8Q - 6) L`; near the origin it moves at most
//! `(8Q - 6) L |x|` away from `F(0)`. [`verify_extension`] measures both
//! bounds empirically over meshes.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::mvf::{Mesh, MvfError, SampledMvf, ALL_PAIRS_CUTOFF};
use crate::qspace::{self, lex_point_cmp, QPoint, QSpaceError};
use crate::rng::SplitMix64;
use crate::spaces::{Bicombing, Space, SpaceError};

/// Relative slack applied to the two Lipschitz bounds when setting pass
/// flags; covers roundoff in the measured suprema.
pub const REL_BOUND_TOL: f64 = 1e-6;

/// Points with norm below this are routed to the `F(0)` branch instead of
/// being normalized.
pub const ORIGIN_EPS: f64 = 1e-12;

/// Smallest admissible cluster-scale budget; keeps `D` positive even for
/// maps whose estimated Lipschitz constant is zero (constant maps).
pub const MIN_D_BUDGET: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtensionError {
    #[error("invalid extension parameters: {0}")]
    InvalidParams(&'static str),
    #[error("point lies outside the closed unit ball (norm {norm})")]
    OutsideBall { norm: f64 },
    #[error(
        "Lipschitz budget violated: {detail}; the map is not Lipschitz with the assumed \
         constant at this scale — inflate Lip(f) (default factor 1.05) and rebuild"
    )]
    BudgetViolation { detail: String },
    #[error("cluster decomposition is inconsistent: {0}")]
    BadClusters(&'static str),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    QSpace(#[from] QSpaceError),
    #[error(transparent)]
    Mvf(#[from] MvfError),
}

/// Parameters of the extension operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionParams {
    /// Lipschitz constant of `f` (estimated or supplied).
    pub lip_f: f64,
    /// Cluster-scale budget `D`; the construction assumes
    /// `S(f(x), f(base)) <= D` for every sphere point `x`.
    pub d_budget: f64,
    /// Weak-convexity constant of the bicombing.
    pub gamma: f64,
    /// Sphere point whose value seeds the clustering.
    pub base_point: Vec<f64>,
}

impl ExtensionParams {
    /// Default budget `D = 2 * lip_f` (the sphere diameter times the
    /// constant), floored at [`MIN_D_BUDGET`] so constant maps stay valid.
    pub fn from_lip(lip_f: f64, gamma: f64, base_point: Vec<f64>) -> Self {
        Self {
            lip_f,
            d_budget: (2.0 * lip_f).max(MIN_D_BUDGET),
            gamma,
            base_point,
        }
    }

    fn validate(&self) -> Result<(), ExtensionError> {
        if !self.lip_f.is_finite() || self.lip_f < 0.0 {
            return Err(ExtensionError::InvalidParams("lip_f must be >= 0"));
        }
        if !self.d_budget.is_finite() || self.d_budget <= 0.0 {
            return Err(ExtensionError::InvalidParams("d_budget must be > 0"));
        }
        if !self.gamma.is_finite() || self.gamma < 1.0 {
            return Err(ExtensionError::InvalidParams("gamma must be >= 1"));
        }
        Ok(())
    }
}

/// One cluster of the base-value support: its members (with multiplicity)
/// and the distinguished base `p(i, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub base: Vec<f64>,
    pub members: Vec<Vec<f64>>,
}

impl Cluster {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Partition of the base value into clusters separated by more than `4D`
/// and internally chained in steps of at most `4D`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterDecomposition {
    pub clusters: Vec<Cluster>,
}

impl ClusterDecomposition {
    /// Number of clusters `s`.
    pub fn s(&self) -> usize {
        self.clusters.len()
    }

    /// Total point count `sum Q_i = Q`.
    pub fn q(&self) -> usize {
        self.clusters.iter().map(Cluster::size).sum()
    }

    /// Checks the construction conditions: bases are members, cluster sizes
    /// sum to the multiset size, inter-cluster separation exceeds `4D`, and
    /// every cluster is chained by steps of at most `4D`.
    pub fn validate(&self, space: &Space, d_budget: f64) -> Result<(), ExtensionError> {
        if self.clusters.is_empty() {
            return Err(ExtensionError::BadClusters("no clusters"));
        }
        let threshold = 4.0 * d_budget;
        for cluster in &self.clusters {
            if cluster.members.is_empty() {
                return Err(ExtensionError::BadClusters("empty cluster"));
            }
            if !cluster.members.iter().any(|m| m == &cluster.base) {
                return Err(ExtensionError::BadClusters("base is not a member"));
            }
            if !chained(space, &cluster.members, threshold) {
                return Err(ExtensionError::BadClusters(
                    "cluster not chained in steps of 4D",
                ));
            }
        }
        for i in 0..self.clusters.len() {
            for j in i + 1..self.clusters.len() {
                for p in &self.clusters[i].members {
                    for r in &self.clusters[j].members {
                        if space.dist(p, r) <= threshold {
                            return Err(ExtensionError::BadClusters(
                                "clusters separated by at most 4D",
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn chained(space: &Space, members: &[Vec<f64>], threshold: f64) -> bool {
    let n = members.len();
    let mut reached = vec![false; n];
    let mut stack = vec![0usize];
    reached[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !reached[j] && space.dist(&members[i], &members[j]) <= threshold {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

/// Clusters the base value by single linkage at threshold `4D`. Components
/// of the graph with edges `d <= 4D` become clusters; members are sorted
/// lexicographically and the smallest one is the cluster base. Clusters are
/// ordered by their base.
pub fn cluster_support(
    space: &Space,
    base_value: &QPoint,
    d_budget: f64,
) -> Result<ClusterDecomposition, ExtensionError> {
    if !d_budget.is_finite() || d_budget <= 0.0 {
        return Err(ExtensionError::InvalidParams("d_budget must be > 0"));
    }
    space.check_point(&base_value.points()[0])?;
    let points = base_value.points();
    let threshold = 4.0 * d_budget;
    let n = points.len();
    let mut component = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = next;
        next += 1;
        let mut stack = vec![start];
        component[start] = id;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if component[j] == usize::MAX && space.dist(&points[i], &points[j]) <= threshold {
                    component[j] = id;
                    stack.push(j);
                }
            }
        }
    }
    let mut clusters: Vec<Cluster> = (0..next)
        .map(|id| {
            let mut members: Vec<Vec<f64>> = points
                .iter()
                .enumerate()
                .filter(|(i, _)| component[*i] == id)
                .map(|(_, p)| p.clone())
                .collect();
            members.sort_by(|a, b| lex_point_cmp(a, b));
            Cluster {
                base: members[0].clone(),
                members,
            }
        })
        .collect();
    clusters.sort_by(|a, b| lex_point_cmp(&a.base, &b.base));
    Ok(ClusterDecomposition { clusters })
}

/// Splits `f(x)` into per-cluster parts by closed `D`-ball membership
/// around the cluster members. Errors mean the value strayed farther from
/// the base support than the budget `D` allows.
pub fn decompose_at(
    f: &SampledMvf,
    clusters: &ClusterDecomposition,
    d_budget: f64,
    x: &[f64],
) -> Result<Vec<QPoint>, ExtensionError> {
    let value = f.eval(x)?;
    decompose_value(f.target(), &value, clusters, d_budget)
}

pub(crate) fn decompose_value(
    space: &Space,
    value: &QPoint,
    clusters: &ClusterDecomposition,
    d_budget: f64,
) -> Result<Vec<QPoint>, ExtensionError> {
    let mut parts: Vec<Vec<Vec<f64>>> = vec![Vec::new(); clusters.s()];
    for (pi, point) in value.points().iter().enumerate() {
        let mut owner = None;
        for (ci, cluster) in clusters.clusters.iter().enumerate() {
            let near = cluster
                .members
                .iter()
                .any(|m| space.dist(m, point) <= d_budget);
            if near {
                if owner.is_some() {
                    return Err(ExtensionError::BudgetViolation {
                        detail: format!(
                            "value point {pi} lies within D of two clusters (corrupted input)"
                        ),
                    });
                }
                owner = Some(ci);
            }
        }
        match owner {
            Some(ci) => parts[ci].push(point.clone()),
            None => {
                return Err(ExtensionError::BudgetViolation {
                    detail: format!("value point {pi} lies in no cluster's D-neighborhood"),
                })
            }
        }
    }
    for (ci, part) in parts.iter().enumerate() {
        let expected = clusters.clusters[ci].size();
        if part.len() != expected {
            return Err(ExtensionError::BudgetViolation {
                detail: format!(
                    "cluster {ci} received {} points, expected {expected}",
                    part.len()
                ),
            });
        }
    }
    Ok(parts
        .into_iter()
        .map(|pts| QPoint::new(pts).expect("sizes checked nonzero"))
        .collect())
}

/// The extension operator, holding the map, the bicombing, the parameters,
/// and the cluster decomposition of the base value.
#[derive(Debug)]
pub struct Extension<'a> {
    f: &'a SampledMvf,
    bicombing: &'a Bicombing,
    params: ExtensionParams,
    clusters: ClusterDecomposition,
}

impl<'a> Extension<'a> {
    /// Clusters `f(base_point)` with the params' budget and wires up the
    /// operator.
    pub fn build(
        f: &'a SampledMvf,
        bicombing: &'a Bicombing,
        params: ExtensionParams,
    ) -> Result<Self, ExtensionError> {
        params.validate()?;
        let base_value = f.eval(&params.base_point)?;
        let clusters = cluster_support(f.target(), &base_value, params.d_budget)?;
        Ok(Self {
            f,
            bicombing,
            params,
            clusters,
        })
    }

    /// Uses a caller-supplied decomposition (validated) instead of
    /// clustering the base value; the base of each cluster is free as long
    /// as it is a member.
    pub fn with_clusters(
        f: &'a SampledMvf,
        bicombing: &'a Bicombing,
        params: ExtensionParams,
        clusters: ClusterDecomposition,
    ) -> Result<Self, ExtensionError> {
        params.validate()?;
        clusters.validate(f.target(), params.d_budget)?;
        if clusters.q() != f.q() {
            return Err(ExtensionError::BadClusters("cluster sizes do not sum to Q"));
        }
        Ok(Self {
            f,
            bicombing,
            params,
            clusters,
        })
    }

    pub fn params(&self) -> &ExtensionParams {
        &self.params
    }

    pub fn clusters(&self) -> &ClusterDecomposition {
        &self.clusters
    }

    pub fn map(&self) -> &SampledMvf {
        self.f
    }

    /// Evaluates the extension at a point of the closed unit ball.
    ///
    /// The origin (and anything within [`ORIGIN_EPS`] of it) maps to `Q_i`
    /// copies of each cluster base; other points are normalized to the
    /// sphere, decomposed, and pushed along geodesics from the cluster
    /// bases by the fraction `|x|` of each geodesic's length.
    pub fn eval(&self, x: &[f64]) -> Result<QPoint, ExtensionError> {
        let norm = self.f.domain().norm_of(x)?;
        if norm > 1.0 + 1e-9 {
            return Err(ExtensionError::OutsideBall { norm });
        }
        if norm <= ORIGIN_EPS {
            let mut points = Vec::with_capacity(self.f.q());
            for cluster in &self.clusters.clusters {
                for _ in 0..cluster.size() {
                    points.push(cluster.base.clone());
                }
            }
            return Ok(QPoint::new(points).expect("Q >= 1"));
        }
        let theta: Vec<f64> = x.iter().map(|c| c / norm).collect();
        let parts = decompose_at(self.f, &self.clusters, self.params.d_budget, &theta)?;
        let target = self.f.target();
        let mut points = Vec::with_capacity(self.f.q());
        for (cluster, part) in self.clusters.clusters.iter().zip(&parts) {
            for q in part.points() {
                let len = target.dist(&cluster.base, q);
                points.push(self.bicombing.geodesic_point(&cluster.base, q, norm * len)?);
            }
        }
        Ok(QPoint::new(points).expect("Q >= 1"))
    }
}

/// Measured quantities and pass flags for one extension build.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionReport {
    pub q: usize,
    pub gamma: f64,
    /// The Lipschitz constant the bounds are stated against.
    pub lip_f: f64,
    /// `max over the sphere mesh of S(F(x), f(x))`.
    pub boundary_error: f64,
    pub boundary_tol: f64,
    pub boundary_pass: bool,
    /// Largest sampled ratio `S(F(x), F(y)) / d(x, y)` over ball pairs.
    pub empirical_lip: f64,
    /// `(gamma + 8Q - 6) * lip_f`.
    pub lip_bound: f64,
    pub lip_pass: bool,
    /// Largest ratio `S(F(x), F(0)) / |x|` over nonzero ball points.
    pub origin_worst: f64,
    /// `(8Q - 6) * lip_f`.
    pub origin_bound: f64,
    pub origin_pass: bool,
}

impl ExtensionReport {
    pub fn all_pass(&self) -> bool {
        self.boundary_pass && self.lip_pass && self.origin_pass
    }
}

/// One sampled ball pair from the Lipschitz sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSample {
    pub i: usize,
    pub j: usize,
    pub dist: f64,
    pub s_value: f64,
    pub ratio: f64,
}

/// Report plus the raw per-pair ratios for external plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionSweep {
    pub report: ExtensionReport,
    pub pair_samples: Vec<PairSample>,
}

/// Sweeps the extension: boundary restriction over the sphere mesh,
/// empirical Lipschitz constant over ball pairs (all pairs below
/// [`ALL_PAIRS_CUTOFF`], seeded random pairs otherwise), and the
/// near-origin ratio over nonzero ball points.
pub fn verify_extension(
    ext: &Extension,
    sphere_mesh: &Mesh,
    ball_mesh: &Mesh,
    pairs: usize,
    seed: u64,
    boundary_tol: f64,
) -> Result<ExtensionSweep, ExtensionError> {
    let domain = ext.f.domain();
    let target = ext.f.target();

    let mut boundary_error = 0.0f64;
    for x in sphere_mesh.points() {
        let fx = ext.f.eval(x)?;
        let ext_x = ext.eval(x)?;
        let s = qspace::s_metric_bottleneck(target, &ext_x, &fx)?;
        boundary_error = boundary_error.max(s);
    }

    let ball_values: Vec<QPoint> = ball_mesh
        .points()
        .iter()
        .map(|x| ext.eval(x))
        .collect::<Result<_, _>>()?;
    let mut empirical_lip = 0.0f64;
    let mut pair_samples = Vec::new();
    let consider = |i: usize, j: usize,
                    empirical_lip: &mut f64,
                    pair_samples: &mut Vec<PairSample>|
     -> Result<(), ExtensionError> {
        let dist = domain.dist(&ball_mesh.points()[i], &ball_mesh.points()[j]);
        if dist == 0.0 {
            return Ok(());
        }
        let s_value = qspace::s_metric_bottleneck(target, &ball_values[i], &ball_values[j])?;
        let ratio = s_value / dist;
        *empirical_lip = empirical_lip.max(ratio);
        pair_samples.push(PairSample {
            i,
            j,
            dist,
            s_value,
            ratio,
        });
        Ok(())
    };
    if ball_mesh.len() < ALL_PAIRS_CUTOFF {
        for i in 0..ball_mesh.len() {
            for j in i + 1..ball_mesh.len() {
                consider(i, j, &mut empirical_lip, &mut pair_samples)?;
            }
        }
    } else {
        let mut rng = SplitMix64::new(seed);
        for _ in 0..pairs {
            let i = rng.index(ball_mesh.len());
            let j = rng.index(ball_mesh.len());
            if i != j {
                consider(i, j, &mut empirical_lip, &mut pair_samples)?;
            }
        }
    }

    let origin = vec![0.0; domain.dim()];
    let f_origin = ext.eval(&origin)?;
    let mut origin_worst = 0.0f64;
    for (i, x) in ball_mesh.points().iter().enumerate() {
        let norm = domain.norm_of(x)?;
        if norm <= ORIGIN_EPS {
            continue;
        }
        let s = qspace::s_metric_bottleneck(target, &ball_values[i], &f_origin)?;
        origin_worst = origin_worst.max(s / norm);
    }

    let q = ext.f.q();
    let gamma = ext.params.gamma;
    let lip_f = ext.params.lip_f;
    let lip_bound = (gamma + 8.0 * q as f64 - 6.0) * lip_f;
    let origin_bound = (8.0 * q as f64 - 6.0) * lip_f;
    let report = ExtensionReport {
        q,
        gamma,
        lip_f,
        boundary_error,
        boundary_tol,
        boundary_pass: boundary_error <= boundary_tol,
        empirical_lip,
        lip_bound,
        lip_pass: empirical_lip <= lip_bound * (1.0 + REL_BOUND_TOL),
        origin_worst,
        origin_bound,
        origin_pass: origin_worst <= origin_bound * (1.0 + REL_BOUND_TOL),
    };
    Ok(ExtensionSweep {
        report,
        pair_samples,
    })
}

/// Per-cluster radius check against the chain bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainRadiusEntry {
    pub size: usize,
    pub radius: f64,
    /// `4D(Q_i - 1) + D`.
    pub chain_bound: f64,
    /// `D(4Q - 3)`.
    pub global_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainRadiusReport {
    pub entries: Vec<ChainRadiusEntry>,
    pub worst_ratio: f64,
    pub pass: bool,
}

/// Verifies that every cluster's radius from its base is within
/// `4D(Q_i - 1) + D`, itself within `D(4Q - 3)`.
pub fn chain_radius_check(
    space: &Space,
    clusters: &ClusterDecomposition,
    d_budget: f64,
) -> ChainRadiusReport {
    let q_total = clusters.q();
    let global_bound = d_budget * (4.0 * q_total as f64 - 3.0);
    let mut entries = Vec::with_capacity(clusters.s());
    let mut worst_ratio = 0.0f64;
    let mut pass = true;
    for cluster in &clusters.clusters {
        let radius = cluster
            .members
            .iter()
            .map(|m| space.dist(&cluster.base, m))
            .fold(0.0f64, f64::max);
        // 4D(Q_i - 1) + D, factored the same way as the global bound so the
        // comparison chain_bound <= global_bound is monotone in floats.
        let chain_bound = d_budget * (4.0 * cluster.size() as f64 - 3.0);
        pass &= radius <= chain_bound && chain_bound <= global_bound;
        worst_ratio = worst_ratio.max(radius / chain_bound);
        entries.push(ChainRadiusEntry {
            size: cluster.size(),
            radius,
            chain_bound,
            global_bound,
        });
    }
    ChainRadiusReport {
        entries,
        worst_ratio,
        pass,
    }
}
