//! Multiple-valued functions: maps from a domain into `Q`-point multisets.
//!
//! A [`SampledMvf`] is either a closed-form evaluator or a finite sample
//! table over a mesh (table lookups resolve to the nearest mesh point).
//! The module also provides sphere and ball meshes, an empirical
//! Lipschitz-constant estimator (a lower bound of the true constant), and
//! [`branch_monodromy`]: the permutation of branches induced by chaining
//! optimal pairings around a loop. A nontrivial monodromy permutation
//! certifies that the map does not split into continuous single-valued
//! branches along that loop.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::math;
use crate::qspace::{self, QPoint, QSpaceError};
use crate::rng::SplitMix64;
use crate::spaces::{Space, SpaceError};

/// Meshes below this point count are swept with all pairs; larger meshes
/// fall back to seeded random pair sampling.
pub const ALL_PAIRS_CUTOFF: usize = 1500;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MvfError {
    #[error("sphere sampling requires m >= 1")]
    SphereDimension,
    #[error("need at least {need} mesh points, got {got}")]
    MeshTooSmall { need: usize, got: usize },
    #[error("evaluator returned Q = {got}, declared Q = {declared}")]
    WrongQ { declared: usize, got: usize },
    #[error("sample table has {values} values for {mesh} mesh points")]
    TableShape { mesh: usize, values: usize },
    #[error("all mesh points coincide; no pair separates them")]
    AllPointsEqual,
    #[error("branch monodromy requires an S^1 domain in R^2")]
    NotCircle,
    #[error("branch monodromy needs at least 3 steps")]
    TooFewSteps,
    #[error(
        "branch continuation ambiguous at step {step}: second-best pairing cost {second_best} \
         does not exceed twice the largest displacement {max_displacement}; increase steps"
    )]
    ContinuationAmbiguity {
        step: usize,
        second_best: f64,
        max_displacement: f64,
    },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    QSpace(#[from] QSpaceError),
}

/// How a mesh was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    /// Unit sphere `S^m` in `R^{m+1}`.
    Sphere { m: usize },
    /// Closed unit ball `B^{m+1}` in `R^{m+1}`.
    Ball { m: usize },
    /// Caller-supplied points.
    Explicit,
}

/// A finite list of domain points together with its generation descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    points: Vec<Vec<f64>>,
    kind: MeshKind,
    seed: u64,
}

impl Mesh {
    pub fn explicit(points: Vec<Vec<f64>>) -> Self {
        Self {
            points,
            kind: MeshKind::Explicit,
            seed: 0,
        }
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn kind(&self) -> MeshKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Mesh on the unit sphere `S^m`.
///
/// For `m = 1` the points are `n` equally spaced angles (deterministic, seed
/// ignored); for `m >= 2` they are `n` seeded Gaussian draws normalized to
/// unit norm. Coverage, not uniformity, is what downstream sweeps need.
pub fn sample_sphere(m: usize, n: usize, seed: u64) -> Result<Mesh, MvfError> {
    if m < 1 {
        return Err(MvfError::SphereDimension);
    }
    if n < 2 {
        return Err(MvfError::MeshTooSmall { need: 2, got: n });
    }
    let points = if m == 1 {
        (0..n)
            .map(|k| {
                let theta = 2.0 * core::f64::consts::PI * k as f64 / n as f64;
                vec![math::cos(theta), math::sin(theta)]
            })
            .collect()
    } else {
        let mut rng = SplitMix64::new(seed);
        (0..n).map(|_| unit_vector(m + 1, &mut rng)).collect()
    };
    Ok(Mesh {
        points,
        kind: MeshKind::Sphere { m },
        seed,
    })
}

/// Mesh on the closed unit ball `B^{m+1}`: the origin, a boundary shell
/// (about a quarter of the budget), and seeded interior points.
pub fn sample_ball(m: usize, n: usize, seed: u64) -> Result<Mesh, MvfError> {
    if m < 1 {
        return Err(MvfError::SphereDimension);
    }
    if n < 1 {
        return Err(MvfError::MeshTooSmall { need: 1, got: n });
    }
    let dim = m + 1;
    let mut points = Vec::with_capacity(n);
    points.push(vec![0.0; dim]);
    let shell = if n >= 2 { 1 + (n - 1) / 4 } else { 0 };
    if shell > 0 {
        let boundary = sample_sphere(m, shell.max(2), seed)?;
        points.extend(boundary.points[..shell.min(boundary.points.len())].iter().cloned());
    }
    let mut rng = SplitMix64::new(seed ^ 0xB0D1);
    while points.len() < n {
        let dir = unit_vector(dim, &mut rng);
        let r = math::powf(rng.next_f64(), 1.0 / dim as f64);
        points.push(dir.iter().map(|c| c * r).collect());
    }
    Ok(Mesh {
        points,
        kind: MeshKind::Ball { m },
        seed,
    })
}

fn unit_vector(dim: usize, rng: &mut SplitMix64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gaussian()).collect();
        let norm = math::sqrt(v.iter().map(|c| c * c).sum());
        if norm > 1e-9 {
            return v.iter().map(|c| c / norm).collect();
        }
    }
}

type EvalRule = Box<dyn Fn(&[f64]) -> QPoint + Send + Sync>;

enum MvfKind {
    Analytic(EvalRule),
    Table { mesh: Mesh, values: Vec<QPoint> },
}

/// A multiple-valued function `f : X -> Q_Q(Y)`.
pub struct SampledMvf {
    domain: Space,
    target: Space,
    q: usize,
    kind: MvfKind,
    tag: Option<String>,
}

impl core::fmt::Debug for SampledMvf {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SampledMvf")
            .field("domain", &self.domain)
            .field("target", &self.target)
            .field("q", &self.q)
            .field("tag", &self.tag)
            .field(
                "kind",
                &match self.kind {
                    MvfKind::Analytic(_) => "analytic",
                    MvfKind::Table { .. } => "table",
                },
            )
            .finish()
    }
}

impl SampledMvf {
    pub fn analytic(
        domain: Space,
        target: Space,
        q: usize,
        rule: impl Fn(&[f64]) -> QPoint + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            target,
            q,
            kind: MvfKind::Analytic(Box::new(rule)),
            tag: None,
        }
    }

    pub fn from_table(
        domain: Space,
        target: Space,
        q: usize,
        mesh: Mesh,
        values: Vec<QPoint>,
    ) -> Result<Self, MvfError> {
        if values.len() != mesh.len() || mesh.is_empty() {
            return Err(MvfError::TableShape {
                mesh: mesh.len(),
                values: values.len(),
            });
        }
        for p in mesh.points() {
            domain.check_point(p)?;
        }
        for v in &values {
            if v.q() != q {
                return Err(MvfError::WrongQ {
                    declared: q,
                    got: v.q(),
                });
            }
            target.check_point(&v.points()[0])?;
        }
        Ok(Self {
            domain,
            target,
            q,
            kind: MvfKind::Table { mesh, values },
            tag: None,
        })
    }

    pub fn with_tag(mut self, tag: &str) -> Self {
        self.tag = Some(String::from(tag));
        self
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Evaluates the map. Analytic rules are called directly; sample tables
    /// resolve to the value at the nearest mesh point (ties to the lowest
    /// index).
    pub fn eval(&self, x: &[f64]) -> Result<QPoint, MvfError> {
        self.domain.check_point(x)?;
        let value = match &self.kind {
            MvfKind::Analytic(rule) => rule(x),
            MvfKind::Table { mesh, values } => {
                let mut best = 0;
                let mut best_d = f64::INFINITY;
                for (i, p) in mesh.points().iter().enumerate() {
                    let d = self.domain.dist(p, x);
                    if d < best_d {
                        best_d = d;
                        best = i;
                    }
                }
                values[best].clone()
            }
        };
        if value.q() != self.q {
            return Err(MvfError::WrongQ {
                declared: self.q,
                got: value.q(),
            });
        }
        self.target.check_point(&value.points()[0])?;
        Ok(value)
    }
}

/// Empirical Lipschitz constant: the largest sampled ratio
/// `S(f(x), f(y)) / d(x, y)` over mesh pairs. A lower bound of the true
/// constant, nondecreasing in the pair budget.
///
/// Meshes below [`ALL_PAIRS_CUTOFF`] are enumerated exhaustively; larger
/// meshes draw `pairs` seeded random pairs.
pub fn lipschitz_estimate(
    f: &SampledMvf,
    mesh: &Mesh,
    pairs: usize,
    seed: u64,
) -> Result<f64, MvfError> {
    if mesh.len() < 2 {
        return Err(MvfError::MeshTooSmall {
            need: 2,
            got: mesh.len(),
        });
    }
    let values: Vec<QPoint> = mesh
        .points()
        .iter()
        .map(|p| f.eval(p))
        .collect::<Result<_, _>>()?;
    let mut best = 0.0f64;
    let mut saw_pair = false;
    let mut consider = |i: usize, j: usize| -> Result<(), MvfError> {
        let dx = f.domain.dist(&mesh.points()[i], &mesh.points()[j]);
        if dx == 0.0 {
            return Ok(());
        }
        saw_pair = true;
        let s = qspace::s_metric_bottleneck(&f.target, &values[i], &values[j])?;
        let ratio = s / dx;
        if ratio > best {
            best = ratio;
        }
        Ok(())
    };
    if mesh.len() < ALL_PAIRS_CUTOFF {
        for i in 0..mesh.len() {
            for j in i + 1..mesh.len() {
                consider(i, j)?;
            }
        }
    } else {
        let mut rng = SplitMix64::new(seed);
        for _ in 0..pairs {
            let i = rng.index(mesh.len());
            let j = rng.index(mesh.len());
            if i != j {
                consider(i, j)?;
            }
        }
    }
    if !saw_pair {
        return Err(MvfError::AllPointsEqual);
    }
    Ok(best)
}

/// Walks the unit circle in `steps` increments, chains the optimal pairing
/// between consecutive values, and returns the composed branch permutation.
///
/// The identity means a continuous selection of branches exists along the
/// loop; a nontrivial permutation certifies that no such selection exists.
/// Continuation is rejected as ambiguous unless, at every step, the
/// second-best pairing cost exceeds twice the largest consecutive
/// displacement.
pub fn branch_monodromy(f: &SampledMvf, steps: usize) -> Result<Vec<usize>, MvfError> {
    if f.domain.dim() != 2 {
        return Err(MvfError::NotCircle);
    }
    if steps < 3 {
        return Err(MvfError::TooFewSteps);
    }
    let values: Vec<QPoint> = (0..steps)
        .map(|k| {
            let theta = 2.0 * core::f64::consts::PI * k as f64 / steps as f64;
            f.eval(&[math::cos(theta), math::sin(theta)])
        })
        .collect::<Result<_, _>>()?;
    let q = f.q;
    let mut total: Vec<usize> = (0..q).collect();
    let mut max_displacement = 0.0f64;
    let mut second_bests: Vec<(usize, f64)> = Vec::with_capacity(steps);
    for k in 0..steps {
        let a = &values[k];
        let b = &values[(k + 1) % steps];
        let matching = qspace::optimal_permutation(&f.target, a, b)?;
        max_displacement = max_displacement.max(matching.value);
        let mut second = f64::INFINITY;
        for (i, &j) in matching.sigma.iter().enumerate() {
            if let Some(v) = qspace::bottleneck_excluding(&f.target, a, b, (i, j))? {
                second = second.min(v);
            }
        }
        second_bests.push((k, second));
        total = total.iter().map(|&i| matching.sigma[i]).collect();
    }
    for (step, second) in second_bests {
        if second <= 2.0 * max_displacement {
            return Err(MvfError::ContinuationAmbiguity {
                step,
                second_best: second,
                max_displacement,
            });
        }
    }
    Ok(total)
}

/// Named closed-form fixtures addressable from the command line.
pub mod fixtures {
    use super::*;

    pub const NAMES: &[&str] = &["constant-3", "half-angle", "identity-circle", "split-pair"];

    /// The two-valued map on the circle whose branches swap after one loop:
    /// `(cos t, sin t) -> {(cos t/2, sin t/2), (-cos t/2, -sin t/2)}`.
    /// It is Lipschitz but does not split into two continuous branches.
    pub fn half_angle() -> SampledMvf {
        SampledMvf::analytic(Space::euclidean(2), Space::euclidean(2), 2, |x| {
            let half = math::atan2(x[1], x[0]) / 2.0;
            let (c, s) = (math::cos(half), math::sin(half));
            QPoint::new(vec![vec![c, s], vec![-c, -s]]).expect("two branches")
        })
        .with_tag("half-angle")
    }

    /// `x -> {x, -x}`: two branches, each globally continuous.
    pub fn split_pair() -> SampledMvf {
        SampledMvf::analytic(Space::euclidean(2), Space::euclidean(2), 2, |x| {
            QPoint::new(vec![x.to_vec(), x.iter().map(|c| -c).collect()]).expect("two branches")
        })
        .with_tag("split-pair")
    }

    /// The inclusion of the circle into the plane, `Q = 1`.
    pub fn identity_circle() -> SampledMvf {
        SampledMvf::analytic(Space::euclidean(2), Space::euclidean(2), 1, |x| {
            QPoint::new(vec![x.to_vec()]).expect("one branch")
        })
        .with_tag("identity-circle")
    }

    /// A constant map with three distinct branches; Lipschitz constant 0.
    pub fn constant_three() -> SampledMvf {
        SampledMvf::analytic(Space::euclidean(2), Space::euclidean(2), 3, |_| {
            QPoint::new(vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 4.0]])
                .expect("three branches")
        })
        .with_tag("constant-3")
    }

    pub fn by_name(name: &str) -> Option<SampledMvf> {
        match name {
            "constant-3" => Some(constant_three()),
            "half-angle" => Some(half_angle()),
            "identity-circle" => Some(identity_circle()),
            "split-pair" => Some(split_pair()),
            _ => None,
        }
    }

    pub fn describe(name: &str) -> Option<&'static str> {
        match name {
            "constant-3" => Some("constant map with three distinct branches (Lipschitz constant 0)"),
            "half-angle" => Some(
                "two-valued half-angle map on the circle; branches swap after one loop, so the \
                 map does not split into continuous branches",
            ),
            "identity-circle" => Some("inclusion of the unit circle into the plane (Q = 1)"),
            "split-pair" => Some("x -> {x, -x}; splits into two continuous branches"),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_mesh_four_points_on_axes() {
        let mesh = sample_sphere(1, 4, 0).unwrap();
        let expected = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        assert_eq!(mesh.len(), 4);
        for (p, e) in mesh.points().iter().zip(expected.iter()) {
            assert!(p.iter().zip(e).all(|(a, b)| (a - b).abs() <= 1e-12));
        }
    }

    #[test]
    fn sphere_mesh_points_have_unit_norm() {
        for m in [1, 2, 3] {
            let mesh = sample_sphere(m, 200, 5).unwrap();
            let space = Space::euclidean(m + 1);
            for p in mesh.points() {
                assert!((space.norm_of(p).unwrap() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn sphere_mesh_is_deterministic() {
        let a = sample_sphere(2, 100, 42).unwrap();
        let b = sample_sphere(2, 100, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sphere_rejects_degenerate_requests() {
        assert!(sample_sphere(0, 4, 0).is_err());
        assert!(sample_sphere(1, 1, 0).is_err());
    }

    #[test]
    fn ball_mesh_contains_origin_and_shell() {
        let mesh = sample_ball(1, 100, 3).unwrap();
        let space = Space::euclidean(2);
        assert_eq!(mesh.points()[0], vec![0.0, 0.0]);
        let mut shell = 0;
        for p in mesh.points() {
            let norm = space.norm_of(p).unwrap();
            assert!(norm <= 1.0 + 1e-12);
            if (norm - 1.0).abs() <= 1e-12 {
                shell += 1;
            }
        }
        assert!(shell >= 100 / 4);
    }

    #[test]
    fn half_angle_fixture_at_zero_and_pi() {
        let f = fixtures::half_angle();
        let v0 = f.eval(&[1.0, 0.0]).unwrap();
        assert_eq!(v0.points(), &[vec![1.0, 0.0], vec![-1.0, 0.0]]);
        let vpi = f.eval(&[-1.0, 0.0]).unwrap();
        let target = Space::euclidean(2);
        let expected = QPoint::new(vec![vec![0.0, 1.0], vec![0.0, -1.0]]).unwrap();
        let s = qspace::s_metric_bottleneck(&target, &vpi, &expected).unwrap();
        assert!(s <= 1e-9);
    }

    #[test]
    fn half_angle_full_turn_returns_same_multiset() {
        let f = fixtures::half_angle();
        let target = Space::euclidean(2);
        for &theta in &[0.4, 2.0, 3.9] {
            let x = [math::cos(theta), math::sin(theta)];
            let x2 = [
                math::cos(theta + 2.0 * core::f64::consts::PI),
                math::sin(theta + 2.0 * core::f64::consts::PI),
            ];
            let s =
                qspace::s_metric_bottleneck(&target, &f.eval(&x).unwrap(), &f.eval(&x2).unwrap())
                    .unwrap();
            assert!(s <= 1e-9, "theta {theta}: s = {s}");
        }
    }

    #[test]
    fn evaluator_is_deterministic() {
        let f = fixtures::half_angle();
        let x = [0.6, 0.8];
        let s = qspace::s_metric_bottleneck(
            &Space::euclidean(2),
            &f.eval(&x).unwrap(),
            &f.eval(&x).unwrap(),
        )
        .unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn lipschitz_of_constant_map_is_zero() {
        let f = fixtures::constant_three();
        let mesh = sample_sphere(1, 64, 0).unwrap();
        assert_eq!(lipschitz_estimate(&f, &mesh, 0, 0).unwrap(), 0.0);
    }

    #[test]
    fn lipschitz_of_identity_circle_is_one() {
        let f = fixtures::identity_circle();
        let mesh = sample_sphere(1, 512, 0).unwrap();
        let est = lipschitz_estimate(&f, &mesh, 0, 0).unwrap();
        assert!((0.99..=1.0).contains(&est), "estimate {est}");
    }

    #[test]
    fn lipschitz_estimate_is_monotone_in_pair_budget() {
        let f = fixtures::half_angle();
        let mesh = sample_sphere(1, 2000, 0).unwrap();
        let small = lipschitz_estimate(&f, &mesh, 500, 7).unwrap();
        let large = lipschitz_estimate(&f, &mesh, 5000, 7).unwrap();
        assert!(large >= small);
    }

    #[test]
    fn lipschitz_rejects_degenerate_meshes() {
        let f = fixtures::identity_circle();
        let one = Mesh::explicit(vec![vec![1.0, 0.0]]);
        assert!(matches!(
            lipschitz_estimate(&f, &one, 0, 0),
            Err(MvfError::MeshTooSmall { .. })
        ));
        let same = Mesh::explicit(vec![vec![1.0, 0.0], vec![1.0, 0.0]]);
        assert!(matches!(
            lipschitz_estimate(&f, &same, 0, 0),
            Err(MvfError::AllPointsEqual)
        ));
    }

    #[test]
    fn table_lookup_resolves_nearest_point() {
        let mesh = sample_sphere(1, 8, 0).unwrap();
        let values: Vec<QPoint> = (0..8)
            .map(|k| QPoint::new(vec![vec![k as f64, 0.0]]).unwrap())
            .collect();
        let f = SampledMvf::from_table(
            Space::euclidean(2),
            Space::euclidean(2),
            1,
            mesh,
            values,
        )
        .unwrap();
        // Slightly off the k = 2 mesh point (angle pi/2).
        let v = f.eval(&[0.01, 0.999]).unwrap();
        assert_eq!(v.points(), &[vec![2.0, 0.0]]);
    }

    #[test]
    fn monodromy_of_half_angle_is_the_swap() {
        let f = fixtures::half_angle();
        assert_eq!(branch_monodromy(&f, 360).unwrap(), vec![1, 0]);
    }

    #[test]
    fn monodromy_of_split_pair_is_identity() {
        let f = fixtures::split_pair();
        assert_eq!(branch_monodromy(&f, 360).unwrap(), vec![0, 1]);
    }

    #[test]
    fn monodromy_of_constant_with_distinct_branches_is_identity() {
        let f = fixtures::constant_three();
        assert_eq!(branch_monodromy(&f, 16).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn monodromy_squares_to_identity_for_half_angle() {
        let f = fixtures::half_angle();
        let once = branch_monodromy(&f, 360).unwrap();
        let twice: Vec<usize> = once.iter().map(|&i| once[i]).collect();
        assert_eq!(twice, vec![0, 1]);
    }

    #[test]
    fn monodromy_rejects_coincident_branches() {
        let f = SampledMvf::analytic(Space::euclidean(2), Space::euclidean(2), 2, |_| {
            QPoint::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap()
        });
        assert!(matches!(
            branch_monodromy(&f, 16),
            Err(MvfError::ContinuationAmbiguity { .. })
        ));
    }

    #[test]
    fn monodromy_rejects_too_few_steps() {
        let f = fixtures::split_pair();
        assert!(matches!(
            branch_monodromy(&f, 2),
            Err(MvfError::TooFewSteps)
        ));
    }
}
