//! The space of unordered `Q`-point multisets over a normed space.
//!
//! A [`QPoint`] stores a representative ordering of its points; all semantics
//! are permutation-invariant. The distance between two multisets of equal
//! size is the smallest achievable bottleneck,
//! `min over permutations sigma of max_i d(a_i, b_sigma(i))`,
//! computed either by exhaustive enumeration ([`s_metric_exact`], capped at
//! `Q = 8`) or by threshold search with bipartite matching
//! ([`s_metric_bottleneck`], exact at every `Q`). The two routes agree
//! bit-for-bit because both select an element of the same set of pairwise
//! distances.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::assignment::{self, Costs};
use crate::spaces::{Space, SpaceError};

/// Largest `Q` the exhaustive solver will enumerate (8! = 40320 permutations).
pub const EXHAUSTIVE_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QSpaceError {
    #[error("a QPoint needs at least one point")]
    Empty,
    #[error("points in a QPoint must share one dimension")]
    RaggedPoints,
    #[error("Q mismatch: {left} vs {right}")]
    QMismatch { left: usize, right: usize },
    #[error("Q = {q} exceeds the exhaustive cap {cap}; use s_metric_bottleneck")]
    AboveExhaustiveCap { q: usize, cap: usize },
    #[error("negative tolerance")]
    NegativeTolerance,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// An unordered multiset of `Q` points, stored in a representative order.
#[derive(Debug, Clone)]
pub struct QPoint {
    points: Vec<Vec<f64>>,
}

/// Equality is permutation-invariant: two multisets are equal exactly when
/// their bottleneck distance is zero, i.e. the canonical orders coincide.
impl PartialEq for QPoint {
    fn eq(&self, other: &Self) -> bool {
        if self.q() != other.q() || self.dim() != other.dim() {
            return false;
        }
        let a = self.canonical();
        let b = other.canonical();
        a.points == b.points
    }
}

impl QPoint {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self, QSpaceError> {
        if points.is_empty() {
            return Err(QSpaceError::Empty);
        }
        let dim = points[0].len();
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(QSpaceError::RaggedPoints);
        }
        Ok(Self { points })
    }

    /// Convenience constructor for one-dimensional multisets.
    pub fn scalars(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| vec![v]).collect()).expect("nonempty scalar list")
    }

    pub fn q(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Canonical representative order: points sorted lexicographically by
    /// coordinates (total order on floats).
    pub fn canonical(&self) -> QPoint {
        let mut points = self.points.clone();
        points.sort_by(|a, b| lex_cmp(a, b));
        QPoint { points }
    }

    /// Multiset sum: the points of `self` followed by the points of `other`.
    pub fn concat(&self, other: &QPoint) -> Result<QPoint, QSpaceError> {
        if self.dim() != other.dim() {
            return Err(QSpaceError::RaggedPoints);
        }
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        Ok(QPoint { points })
    }

    /// Distinct points with multiplicities, merging points at pairwise
    /// distance at most `tol` (transitively). Groups are reported in order
    /// of first appearance and represented by their first member;
    /// multiplicities sum to `Q`.
    pub fn support(&self, space: &Space, tol: f64) -> Result<Vec<(Vec<f64>, usize)>, QSpaceError> {
        if tol < 0.0 {
            return Err(QSpaceError::NegativeTolerance);
        }
        space.check_point(&self.points[0])?;
        let mut groups: Vec<(Vec<f64>, usize)> = Vec::new();
        let mut group_of = vec![usize::MAX; self.q()];
        for (i, p) in self.points.iter().enumerate() {
            for (g, (rep, count)) in groups.iter_mut().enumerate() {
                if space.dist(rep, p) <= tol {
                    *count += 1;
                    group_of[i] = g;
                    break;
                }
            }
            if group_of[i] == usize::MAX {
                group_of[i] = groups.len();
                groups.push((p.clone(), 1));
            }
        }
        // Transitive closure: a later point may bridge two earlier groups.
        loop {
            let mut merge = None;
            'outer: for a in 0..groups.len() {
                for b in a + 1..groups.len() {
                    let bridged = self.points.iter().enumerate().any(|(i, p)| {
                        group_of[i] == a
                            && self
                                .points
                                .iter()
                                .enumerate()
                                .any(|(j, q)| group_of[j] == b && space.dist(p, q) <= tol)
                    });
                    if bridged {
                        merge = Some((a, b));
                        break 'outer;
                    }
                }
            }
            match merge {
                Some((a, b)) => {
                    let (_, count) = groups.remove(b);
                    groups[a].1 += count;
                    for g in group_of.iter_mut() {
                        if *g == b {
                            *g = a;
                        } else if *g > b {
                            *g -= 1;
                        }
                    }
                }
                None => break,
            }
        }
        Ok(groups)
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            core::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    core::cmp::Ordering::Equal
}

/// Compares points lexicographically by coordinates.
pub fn lex_point_cmp(a: &[f64], b: &[f64]) -> core::cmp::Ordering {
    lex_cmp(a, b)
}

/// A permutation achieving a bottleneck value: `sigma[i]` is the index in
/// `b` matched to point `i` of `a`, and `value = max_i d(a_i, b_sigma(i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub sigma: Vec<usize>,
    pub value: f64,
}

impl Matching {
    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &j)| i == j)
    }
}

fn check_compatible(a: &QPoint, b: &QPoint) -> Result<(), QSpaceError> {
    if a.q() != b.q() {
        return Err(QSpaceError::QMismatch {
            left: a.q(),
            right: b.q(),
        });
    }
    if a.dim() != b.dim() {
        return Err(QSpaceError::RaggedPoints);
    }
    Ok(())
}

pub(crate) fn pairwise_costs(space: &Space, a: &QPoint, b: &QPoint) -> Result<Vec<f64>, QSpaceError> {
    check_compatible(a, b)?;
    space.check_point(&a.points[0])?;
    let q = a.q();
    let mut costs = Vec::with_capacity(q * q);
    for p in a.points() {
        for r in b.points() {
            costs.push(space.dist(p, r));
        }
    }
    Ok(costs)
}

/// Bottleneck distance by exhaustive enumeration of all `Q!` permutations.
///
/// Serves as the independent oracle for [`s_metric_bottleneck`]; refuses
/// `Q` above [`EXHAUSTIVE_CAP`].
pub fn s_metric_exact(space: &Space, a: &QPoint, b: &QPoint) -> Result<f64, QSpaceError> {
    check_compatible(a, b)?;
    let q = a.q();
    if q > EXHAUSTIVE_CAP {
        return Err(QSpaceError::AboveExhaustiveCap {
            q,
            cap: EXHAUSTIVE_CAP,
        });
    }
    let costs = pairwise_costs(space, a, b)?;
    let mut best = f64::INFINITY;
    let mut sigma: Vec<usize> = (0..q).collect();
    permute(&mut sigma, 0, &mut |perm| {
        let mut worst = 0.0f64;
        for (i, &j) in perm.iter().enumerate() {
            let c = costs[i * q + j];
            if c > worst {
                worst = c;
            }
        }
        if worst < best {
            best = worst;
        }
    });
    Ok(best)
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Exact bottleneck distance at any `Q`: threshold search over the `Q^2`
/// pairwise distances with matching-based feasibility tests.
pub fn s_metric_bottleneck(space: &Space, a: &QPoint, b: &QPoint) -> Result<f64, QSpaceError> {
    let costs = pairwise_costs(space, a, b)?;
    Ok(assignment::bottleneck_value(&Costs::new(&costs, a.q())))
}

/// An optimal pairing: achieves the bottleneck value, ties broken by the
/// lexicographically smallest permutation.
pub fn optimal_permutation(space: &Space, a: &QPoint, b: &QPoint) -> Result<Matching, QSpaceError> {
    let costs = pairwise_costs(space, a, b)?;
    let matrix = Costs::new(&costs, a.q());
    let value = assignment::bottleneck_value(&matrix);
    let sigma = assignment::lexicographic_matching(&matrix, value);
    Ok(Matching { sigma, value })
}

/// Best bottleneck value over permutations that avoid matching `a`'s point
/// `forbidden.0` to `b`'s point `forbidden.1`; `None` when `Q = 1`.
pub(crate) fn bottleneck_excluding(
    space: &Space,
    a: &QPoint,
    b: &QPoint,
    forbidden: (usize, usize),
) -> Result<Option<f64>, QSpaceError> {
    let costs = pairwise_costs(space, a, b)?;
    Ok(assignment::bottleneck_value_excluding(
        &Costs::new(&costs, a.q()),
        forbidden,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn line() -> Space {
        Space::euclidean(1)
    }

    #[test]
    fn exact_two_point_example() {
        // Identity: max(1, 2) = 2; swap: max(12, 9) = 12.
        let a = QPoint::scalars(&[0.0, 10.0]);
        let b = QPoint::scalars(&[1.0, 12.0]);
        assert_eq!(s_metric_exact(&line(), &a, &b).unwrap(), 2.0);
    }

    #[test]
    fn exact_zero_on_equal_multisets() {
        let a = QPoint::scalars(&[3.0, -1.0, 3.0]);
        assert_eq!(s_metric_exact(&line(), &a, &a).unwrap(), 0.0);
    }

    #[test]
    fn exact_single_point_is_plain_distance() {
        let a = QPoint::scalars(&[0.0]);
        let b = QPoint::scalars(&[5.0]);
        assert_eq!(s_metric_exact(&line(), &a, &b).unwrap(), 5.0);
    }

    #[test]
    fn exact_rejects_above_cap() {
        let a = QPoint::scalars(&[0.0; 9]);
        assert!(matches!(
            s_metric_exact(&line(), &a, &a),
            Err(QSpaceError::AboveExhaustiveCap { q: 9, cap: 8 })
        ));
    }

    #[test]
    fn q_mismatch_is_rejected() {
        let a = QPoint::scalars(&[0.0, 1.0]);
        let b = QPoint::scalars(&[0.0]);
        assert!(matches!(
            s_metric_bottleneck(&line(), &a, &b),
            Err(QSpaceError::QMismatch { left: 2, right: 1 })
        ));
    }

    #[test]
    fn bottleneck_three_point_example() {
        // Exhaustive oracle over all 6 permutations gives 4.
        let a = QPoint::scalars(&[0.0, 4.0, 9.0]);
        let b = QPoint::scalars(&[1.0, 5.0, 13.0]);
        assert_eq!(s_metric_exact(&line(), &a, &b).unwrap(), 4.0);
        assert_eq!(s_metric_bottleneck(&line(), &a, &b).unwrap(), 4.0);
    }

    #[test]
    fn bottleneck_identity_at_q_fifty() {
        let mut rng = SplitMix64::new(9);
        let pts: Vec<Vec<f64>> = (0..50).map(|_| vec![rng.uniform(-5.0, 5.0)]).collect();
        let a = QPoint::new(pts).unwrap();
        assert_eq!(s_metric_bottleneck(&line(), &a, &a.clone()).unwrap(), 0.0);
    }

    #[test]
    fn bottleneck_matches_exhaustive_on_random_instances() {
        let mut rng = SplitMix64::new(1);
        let space = Space::euclidean(2);
        for _ in 0..200 {
            let q = 2 + rng.index(5);
            let draw = |rng: &mut SplitMix64| {
                QPoint::new(
                    (0..q)
                        .map(|_| vec![rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)])
                        .collect(),
                )
                .unwrap()
            };
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            let exact = s_metric_exact(&space, &a, &b).unwrap();
            let fast = s_metric_bottleneck(&space, &a, &b).unwrap();
            assert_eq!(exact, fast);
        }
    }

    #[test]
    fn optimal_permutation_examples() {
        let a = QPoint::scalars(&[0.0, 10.0]);
        let b = QPoint::scalars(&[1.0, 12.0]);
        let m = optimal_permutation(&line(), &a, &b).unwrap();
        assert_eq!(m.sigma, vec![0, 1]);
        assert_eq!(m.value, 2.0);

        let z = QPoint::scalars(&[0.0, 0.0]);
        let m = optimal_permutation(&line(), &z, &z.clone()).unwrap();
        assert_eq!(m.sigma, vec![0, 1]);
        assert_eq!(m.value, 0.0);
        assert!(m.is_identity());

        let m = optimal_permutation(&line(), &QPoint::scalars(&[0.0]), &QPoint::scalars(&[5.0]))
            .unwrap();
        assert_eq!(m.sigma, vec![0]);
        assert_eq!(m.value, 5.0);
    }

    #[test]
    fn optimal_permutation_value_is_achieved() {
        let mut rng = SplitMix64::new(17);
        let space = Space::euclidean(3);
        for _ in 0..100 {
            let q = 2 + rng.index(4);
            let draw = |rng: &mut SplitMix64| {
                QPoint::new(
                    (0..q)
                        .map(|_| (0..3).map(|_| rng.uniform(-2.0, 2.0)).collect())
                        .collect(),
                )
                .unwrap()
            };
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            let m = optimal_permutation(&space, &a, &b).unwrap();
            let achieved = m
                .sigma
                .iter()
                .enumerate()
                .map(|(i, &j)| space.dist(&a.points()[i], &b.points()[j]))
                .fold(0.0f64, f64::max);
            assert_eq!(achieved, m.value);
            assert_eq!(m.value, s_metric_bottleneck(&space, &a, &b).unwrap());
        }
    }

    #[test]
    fn concat_preserves_multiplicity() {
        let a = QPoint::scalars(&[0.0, 1.0]);
        let b = QPoint::scalars(&[0.0]);
        let c = a.concat(&b).unwrap();
        assert_eq!(c.q(), 3);
        let support = c.support(&line(), 0.0).unwrap();
        assert_eq!(support, vec![(vec![0.0], 2), (vec![1.0], 1)]);
    }

    #[test]
    fn concat_bound_on_random_inputs() {
        // S(a1 + a2, b1 + b2) <= max(S(a1, b1), S(a2, b2)): combine matchings.
        let mut rng = SplitMix64::new(5);
        let space = Space::euclidean(2);
        for _ in 0..100 {
            let draw = |rng: &mut SplitMix64, q: usize| {
                QPoint::new(
                    (0..q)
                        .map(|_| vec![rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)])
                        .collect(),
                )
                .unwrap()
            };
            let q1 = 1 + rng.index(3);
            let q2 = 1 + rng.index(3);
            let (a1, b1) = (draw(&mut rng, q1), draw(&mut rng, q1));
            let (a2, b2) = (draw(&mut rng, q2), draw(&mut rng, q2));
            let s1 = s_metric_bottleneck(&space, &a1, &b1).unwrap();
            let s2 = s_metric_bottleneck(&space, &a2, &b2).unwrap();
            let s = s_metric_bottleneck(
                &space,
                &a1.concat(&a2).unwrap(),
                &b1.concat(&b2).unwrap(),
            )
            .unwrap();
            assert!(s <= s1.max(s2) + 1e-12);
        }
    }

    #[test]
    fn support_merges_below_tolerance() {
        let a = QPoint::scalars(&[0.0, 1e-12, 5.0]);
        let support = a.support(&line(), 1e-9).unwrap();
        assert_eq!(support.len(), 2);
        assert_eq!(support[0].1, 2);
        assert_eq!(support[1], (vec![5.0], 1));
    }

    #[test]
    fn support_multiplicities_sum_to_q() {
        let mut rng = SplitMix64::new(2);
        for _ in 0..50 {
            let q = 1 + rng.index(6);
            let a = QPoint::new((0..q).map(|_| vec![rng.uniform(0.0, 1.0)]).collect()).unwrap();
            let support = a.support(&line(), 0.3).unwrap();
            let total: usize = support.iter().map(|(_, m)| m).sum();
            assert_eq!(total, q);
        }
    }

    #[test]
    fn canonical_sorts_lexicographically() {
        let a = QPoint::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![1.0, -2.0]]).unwrap();
        let c = a.canonical();
        assert_eq!(
            c.points(),
            &[vec![-1.0, 0.0], vec![1.0, -2.0], vec![1.0, 0.0]]
        );
    }

    #[test]
    fn equality_is_permutation_invariant() {
        let space = Space::euclidean(2);
        let a = QPoint::new(vec![vec![1.0, 2.0], vec![-3.0, 0.5]]).unwrap();
        let b = QPoint::new(vec![vec![-3.0, 0.5], vec![1.0, 2.0]]).unwrap();
        assert_eq!(s_metric_bottleneck(&space, &a, &b).unwrap(), 0.0);
        assert_eq!(a, b);
        let c = QPoint::new(vec![vec![1.0, 2.0], vec![-3.0, 0.6]]).unwrap();
        assert_ne!(a, c);
    }
}
