//! Bounded covers, `s`-multiplicity, and product covers of the multiset
//! space.
//!
//! A [`Cover`] is an indexed family of subsets with a declared bound
//! constant `c` and scale `s`; every member must have diameter at most
//! `c * s`. The `s`-multiplicity is the largest number of members met by
//! any set of diameter at most `s`. For interval covers on the line (and
//! box covers under the sup norm) the multiplicity is computed exactly by
//! sweeping critical probe positions; for everything else the reported
//! value is a probe-based lower bound and is labeled as such.
//!
//! [`product_cover`] indexes subsets of the `Q`-multiset space by
//! `Q`-multisets of base indices; a set of `S`-diameter at most `s`
//! projects to per-coordinate sets of diameter at most `s`, so the product
//! multiplicity never exceeds the base multiplicity to the power `Q`.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::qspace::QPoint;
use crate::rng::SplitMix64;
use crate::spaces::{Norm, Space, SpaceError};

/// Largest product-cover member count that will be materialized.
pub const PRODUCT_MEMBER_CAP: usize = 1_000_000;

/// Cap on exhaustive probe positions for the exact box sweep.
const BOX_SWEEP_CAP: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NagataError {
    #[error("interval and grid covers need c >= 3, got {0}; the tiling multiplicity guarantee fails below that")]
    SmallC(f64),
    #[error("scale must be positive")]
    BadScale,
    #[error("range must satisfy lo < hi on every axis")]
    BadRange,
    #[error("cover has no members")]
    EmptyCover,
    #[error("member {0} is empty")]
    EmptyMember(usize),
    #[error("member diameter {diameter} exceeds the declared bound c*s = {bound}")]
    NotBounded { diameter: f64, bound: f64 },
    #[error("product cover would have {count} members, above the cap {cap}; coarsen the base cover")]
    IndexCap { count: u128, cap: usize },
    #[error("no probes requested")]
    NoProbes,
    #[error("multiplicity bound overflows usize")]
    Overflow,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// One cover member: a geometric descriptor or an explicit point set.
/// Intervals and boxes are half-open (closed below, open above) so that
/// tilings partition.
#[derive(Debug, Clone, PartialEq)]
pub enum Member {
    Interval { lo: f64, hi: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Points(Vec<Vec<f64>>),
}

/// An indexed family of subsets with declared bound constant and scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub space: Space,
    pub members: Vec<Member>,
    pub c: f64,
    pub scale: f64,
}

/// Half-open intervals of length `c * s` tiling `[lo, hi)`. Requires
/// `c >= 3`: length-`c*s` tiles meet at most two per length-`s` probe only
/// from that ratio on.
pub fn interval_cover(c: f64, s: f64, lo: f64, hi: f64) -> Result<Cover, NagataError> {
    if c < 3.0 {
        return Err(NagataError::SmallC(c));
    }
    if !s.is_finite() || s <= 0.0 {
        return Err(NagataError::BadScale);
    }
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(NagataError::BadRange);
    }
    let width = c * s;
    let mut members = Vec::new();
    let mut left = lo;
    while left < hi {
        members.push(Member::Interval {
            lo: left,
            hi: left + width,
        });
        left += width;
    }
    Ok(Cover {
        space: Space::euclidean(1),
        members,
        c,
        scale: s,
    })
}

/// Axis-aligned grid of half-open boxes with side `c * s` tiling the box
/// `[lo, hi)` in the sup norm.
pub fn grid_cover(c: f64, s: f64, lo: &[f64], hi: &[f64]) -> Result<Cover, NagataError> {
    if c < 3.0 {
        return Err(NagataError::SmallC(c));
    }
    if !s.is_finite() || s <= 0.0 {
        return Err(NagataError::BadScale);
    }
    let axis_ok = |(a, b): (&f64, &f64)| a.is_finite() && b.is_finite() && a < b;
    if lo.len() != hi.len() || lo.is_empty() || !lo.iter().zip(hi).all(axis_ok) {
        return Err(NagataError::BadRange);
    }
    let dim = lo.len();
    let width = c * s;
    let mut axis_offsets: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for a in 0..dim {
        let mut offsets = Vec::new();
        let mut left = lo[a];
        while left < hi[a] {
            offsets.push(left);
            left += width;
        }
        axis_offsets.push(offsets);
    }
    let mut members = Vec::new();
    let mut index = vec![0usize; dim];
    'outer: loop {
        let corner: Vec<f64> = (0..dim).map(|a| axis_offsets[a][index[a]]).collect();
        members.push(Member::Box {
            lo: corner.clone(),
            hi: corner.iter().map(|v| v + width).collect(),
        });
        for a in (0..dim).rev() {
            index[a] += 1;
            if index[a] < axis_offsets[a].len() {
                continue 'outer;
            }
            index[a] = 0;
            if a == 0 {
                break 'outer;
            }
        }
    }
    Ok(Cover {
        space: Space::new(dim, Norm::Sup)?,
        members,
        c,
        scale: s,
    })
}

fn member_diameter(space: &Space, member: &Member, index: usize) -> Result<f64, NagataError> {
    match member {
        Member::Interval { lo, hi } => Ok(hi - lo),
        Member::Box { lo, hi } => {
            let diff: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| b - a).collect();
            Ok(space.norm_of(&diff)?)
        }
        Member::Ball { radius, .. } => Ok(2.0 * radius),
        Member::Points(points) => {
            if points.is_empty() {
                return Err(NagataError::EmptyMember(index));
            }
            let mut diameter = 0.0f64;
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    diameter = diameter.max(space.distance(&points[i], &points[j])?);
                }
            }
            Ok(diameter)
        }
    }
}

/// Largest member diameter. Half-open descriptors report the diameter of
/// their closure (the supremum over the member).
pub fn cover_diameter(cover: &Cover) -> Result<f64, NagataError> {
    if cover.members.is_empty() {
        return Err(NagataError::EmptyCover);
    }
    let mut diameter = 0.0f64;
    for (i, member) in cover.members.iter().enumerate() {
        diameter = diameter.max(member_diameter(&cover.space, member, i)?);
    }
    Ok(diameter)
}

/// Distance from a point to the closure of a member.
pub fn member_distance(space: &Space, member: &Member, point: &[f64]) -> Result<f64, SpaceError> {
    match member {
        Member::Interval { lo, hi } => {
            space.check_point(point)?;
            let x = point[0];
            Ok((lo - x).max(x - hi).max(0.0))
        }
        Member::Box { lo, hi } => {
            space.check_point(point)?;
            let nearest: Vec<f64> = point
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(&x, (&l, &h))| x.clamp(l, h))
                .collect();
            space.distance(point, &nearest)
        }
        Member::Ball { center, radius } => {
            Ok((space.distance(center, point)? - radius).max(0.0))
        }
        Member::Points(points) => {
            let mut best = f64::INFINITY;
            for p in points {
                best = best.min(space.distance(p, point)?);
            }
            Ok(best)
        }
    }
}

/// Whether the point lies in the member (half-open semantics for intervals
/// and boxes).
pub fn member_contains(space: &Space, member: &Member, point: &[f64]) -> Result<bool, SpaceError> {
    match member {
        Member::Interval { lo, hi } => {
            space.check_point(point)?;
            Ok(*lo <= point[0] && point[0] < *hi)
        }
        Member::Box { lo, hi } => {
            space.check_point(point)?;
            Ok(point
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(&x, (&l, &h))| l <= x && x < h))
        }
        Member::Ball { center, radius } => Ok(space.distance(center, point)? <= *radius),
        Member::Points(points) => Ok(points.iter().any(|p| p == point)),
    }
}

/// Seeded probe budget for sampled multiplicity estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeStrategy {
    pub count: usize,
    pub seed: u64,
}

/// An `s`-multiplicity figure: exact when computed by a critical-position
/// sweep, otherwise a probe-based lower bound of the true multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub value: usize,
    pub exact: bool,
}

/// Maximum number of members met by a set of diameter at most `s`.
///
/// Interval covers on the line and box covers under the sup norm are swept
/// exactly; other covers are probed (balls of radius `s/2` around seeded
/// points plus seeded point sets of diameter at most `s`) and the result is
/// a lower bound.
pub fn s_multiplicity(
    cover: &Cover,
    s: f64,
    probes: &ProbeStrategy,
) -> Result<MultiplicityReport, NagataError> {
    if cover.members.is_empty() {
        return Err(NagataError::EmptyCover);
    }
    if !s.is_finite() || s <= 0.0 {
        return Err(NagataError::BadScale);
    }
    let all_intervals = cover
        .members
        .iter()
        .all(|m| matches!(m, Member::Interval { .. }));
    if all_intervals && cover.space.dim() == 1 {
        return Ok(MultiplicityReport {
            value: interval_sweep(&cover.members, s),
            exact: true,
        });
    }
    let all_boxes = cover.members.iter().all(|m| matches!(m, Member::Box { .. }));
    if all_boxes && cover.space.norm() == Norm::Sup {
        if let Some(value) = box_sweep(&cover.members, cover.space.dim(), s) {
            return Ok(MultiplicityReport { value, exact: true });
        }
    }
    probe_multiplicity(cover, s, probes)
}

/// A probe interval `[t, t + s]` meets `[lo, hi)` iff `lo - s <= t < hi`,
/// so the met count is piecewise constant with maxima at entry events.
fn interval_sweep(members: &[Member], s: f64) -> usize {
    let spans: Vec<(f64, f64)> = members
        .iter()
        .map(|m| match m {
            Member::Interval { lo, hi } => (*lo, *hi),
            _ => unreachable!("caller checked"),
        })
        .collect();
    let mut best = 0;
    for &(lo, _) in &spans {
        let t = lo - s;
        let met = spans.iter().filter(|&&(l, h)| l - s <= t && t < h).count();
        best = best.max(met);
    }
    best
}

/// Exact sweep for sup-norm box covers: a diameter-`s` set sits inside a
/// closed box of side `s`, and the met count peaks at per-axis entry
/// positions. Returns `None` when the position grid is too large.
fn box_sweep(members: &[Member], dim: usize, s: f64) -> Option<usize> {
    let boxes: Vec<(&Vec<f64>, &Vec<f64>)> = members
        .iter()
        .map(|m| match m {
            Member::Box { lo, hi } => (lo, hi),
            _ => unreachable!("caller checked"),
        })
        .collect();
    let mut axis_positions: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut combos: usize = 1;
    for a in 0..dim {
        let mut positions: Vec<f64> = boxes.iter().map(|(lo, _)| lo[a] - s).collect();
        positions.sort_unstable_by(f64::total_cmp);
        positions.dedup();
        combos = combos.checked_mul(positions.len())?;
        if combos > BOX_SWEEP_CAP {
            return None;
        }
        axis_positions.push(positions);
    }
    let mut best = 0;
    let mut index = vec![0usize; dim];
    loop {
        let met = boxes
            .iter()
            .filter(|(lo, hi)| {
                (0..dim).all(|a| {
                    let t = axis_positions[a][index[a]];
                    lo[a] - s <= t && t < hi[a]
                })
            })
            .count();
        best = best.max(met);
        let mut a = dim;
        loop {
            if a == 0 {
                return Some(best);
            }
            a -= 1;
            index[a] += 1;
            if index[a] < axis_positions[a].len() {
                break;
            }
            index[a] = 0;
        }
    }
}

fn bounding_box(space: &Space, members: &[Member]) -> (Vec<f64>, Vec<f64>) {
    let dim = space.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    let mut take = |p: &[f64]| {
        for a in 0..dim {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    };
    for member in members {
        match member {
            Member::Interval { lo: l, hi: h } => {
                take(&[*l]);
                take(&[*h]);
            }
            Member::Box { lo: l, hi: h } => {
                take(l);
                take(h);
            }
            Member::Ball { center, radius } => {
                take(&center.iter().map(|c| c - radius).collect::<Vec<_>>());
                take(&center.iter().map(|c| c + radius).collect::<Vec<_>>());
            }
            Member::Points(points) => {
                for p in points {
                    take(p);
                }
            }
        }
    }
    (lo, hi)
}

fn probe_multiplicity(
    cover: &Cover,
    s: f64,
    probes: &ProbeStrategy,
) -> Result<MultiplicityReport, NagataError> {
    if probes.count == 0 {
        return Err(NagataError::NoProbes);
    }
    let space = &cover.space;
    let (lo, hi) = bounding_box(space, &cover.members);
    let mut rng = SplitMix64::new(probes.seed);
    let mut best = 0;
    for trial in 0..probes.count {
        let center: Vec<f64> = (0..space.dim())
            .map(|a| rng.uniform(lo[a], hi[a]))
            .collect();
        let met = if trial % 2 == 0 {
            // Ball of radius s/2 around the center.
            let mut met = 0;
            for member in &cover.members {
                if member_distance(space, member, &center)? <= s / 2.0 {
                    met += 1;
                }
            }
            met
        } else {
            // Finite point set of diameter at most s.
            let k = 2 + rng.index(3);
            let cloud: Vec<Vec<f64>> = (0..k)
                .map(|_| {
                    center
                        .iter()
                        .map(|c| c + rng.uniform(-s / 2.0, s / 2.0) / space.dim() as f64)
                        .collect()
                })
                .collect();
            let mut met = 0;
            for member in &cover.members {
                let mut hit = false;
                for p in &cloud {
                    if member_contains(space, member, p)? {
                        hit = true;
                        break;
                    }
                }
                if hit {
                    met += 1;
                }
            }
            met
        };
        best = best.max(met);
    }
    Ok(MultiplicityReport {
        value: best,
        exact: false,
    })
}

/// The cover of the `Q`-multiset space induced by a base cover: one member
/// per `Q`-multiset of base indices, containing the multisets whose points
/// distribute into the indexed base members.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCover {
    pub base: Cover,
    pub q: usize,
    /// Sorted index multisets, in lexicographic order.
    pub index_multisets: Vec<Vec<usize>>,
}

fn multiset_count(n: usize, q: usize) -> Option<u128> {
    // C(n + q - 1, q)
    let mut value: u128 = 1;
    for k in 0..q {
        value = value.checked_mul((n + k) as u128)?;
        value /= (k + 1) as u128;
    }
    Some(value)
}

/// Builds the product cover, materializing all `Q`-multisets of the base
/// index set. The base must be `c*s`-bounded; member counts above
/// [`PRODUCT_MEMBER_CAP`] are refused.
pub fn product_cover(base: &Cover, q: usize) -> Result<ProductCover, NagataError> {
    if base.members.is_empty() {
        return Err(NagataError::EmptyCover);
    }
    if q == 0 {
        return Err(NagataError::BadScale);
    }
    let diameter = cover_diameter(base)?;
    let bound = base.c * base.scale;
    if diameter > bound + 1e-12 {
        return Err(NagataError::NotBounded { diameter, bound });
    }
    let count = multiset_count(base.members.len(), q).ok_or(NagataError::Overflow)?;
    if count > PRODUCT_MEMBER_CAP as u128 {
        return Err(NagataError::IndexCap {
            count,
            cap: PRODUCT_MEMBER_CAP,
        });
    }
    let mut index_multisets = Vec::with_capacity(count as usize);
    let mut current = vec![0usize; q];
    loop {
        index_multisets.push(current.clone());
        // Next nondecreasing tuple.
        let mut pos = q;
        loop {
            if pos == 0 {
                return Ok(ProductCover {
                    base: base.clone(),
                    q,
                    index_multisets,
                });
            }
            pos -= 1;
            if current[pos] + 1 < base.members.len() {
                let v = current[pos] + 1;
                for slot in current.iter_mut().skip(pos) {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// `S`-diameter of the product cover: under the identity pairing the
/// distance between two member multisets is at most the largest coordinate
/// diameter, and single-coordinate variation attains it.
pub fn product_cover_diameter(product: &ProductCover) -> Result<f64, NagataError> {
    cover_diameter(&product.base)
}

/// Distinct product members met by the `S`-ball of radius `radius` around
/// `center`: every choice of a candidate base member per center point
/// (those within `radius`) yields exactly one met index multiset.
pub fn members_met_by_ball(
    product: &ProductCover,
    center: &QPoint,
    radius: f64,
) -> Result<usize, NagataError> {
    let space = &product.base.space;
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(center.q());
    for point in center.points() {
        let mut near = Vec::new();
        for (i, member) in product.base.members.iter().enumerate() {
            if member_distance(space, member, point)? <= radius {
                near.push(i);
            }
        }
        if near.is_empty() {
            return Ok(0);
        }
        candidates.push(near);
    }
    let mut met: Vec<Vec<usize>> = Vec::new();
    let mut selection = vec![0usize; candidates.len()];
    loop {
        let mut multiset: Vec<usize> = selection
            .iter()
            .zip(&candidates)
            .map(|(&which, options)| options[which])
            .collect();
        multiset.sort_unstable();
        if !met.contains(&multiset) {
            met.push(multiset);
        }
        let mut pos = candidates.len();
        loop {
            if pos == 0 {
                return Ok(met.len());
            }
            pos -= 1;
            selection[pos] += 1;
            if selection[pos] < candidates[pos].len() {
                break;
            }
            selection[pos] = 0;
        }
    }
}

/// Probe-based `s`-multiplicity of a product cover over seeded `QPoint`
/// centers with `S`-balls of radius `s/2`; a lower bound of the true
/// multiplicity.
pub fn product_s_multiplicity(
    product: &ProductCover,
    s: f64,
    probes: &ProbeStrategy,
) -> Result<(MultiplicityReport, Vec<usize>), NagataError> {
    if probes.count == 0 {
        return Err(NagataError::NoProbes);
    }
    if !s.is_finite() || s <= 0.0 {
        return Err(NagataError::BadScale);
    }
    let space = &product.base.space;
    let (lo, hi) = bounding_box(space, &product.base.members);
    let mut rng = SplitMix64::new(probes.seed);
    let mut per_probe = Vec::with_capacity(probes.count);
    let mut best = 0;
    for _ in 0..probes.count {
        let center = QPoint::new(
            (0..product.q)
                .map(|_| {
                    (0..space.dim())
                        .map(|a| rng.uniform(lo[a], hi[a]))
                        .collect()
                })
                .collect(),
        )
        .expect("q >= 1");
        let met = members_met_by_ball(product, &center, s / 2.0)?;
        best = best.max(met);
        per_probe.push(met);
    }
    Ok((
        MultiplicityReport {
            value: best,
            exact: false,
        },
        per_probe,
    ))
}

/// Outcome of a product-cover multiplicity experiment against the
/// `(base multiplicity)^Q` bound.
#[derive(Debug, Clone, PartialEq)]
pub struct NagataReport {
    pub base_multiplicity: usize,
    pub base_exact: bool,
    pub product_multiplicity: usize,
    /// `(base multiplicity)^Q`.
    pub bound: usize,
    pub pass: bool,
    /// Some probe met at least two members.
    pub non_vacuous: bool,
    pub probes: usize,
    /// Every probe center lay in at least one member.
    pub coverage_ok: bool,
}

/// Builds the product cover, probes its multiplicity at scale `s`, and
/// compares against `base_multiplicity^Q`. Also checks constructive
/// coverage: each probe center's points select containing base members.
pub fn verify_nagata_bound(
    base: &Cover,
    base_multiplicity: MultiplicityReport,
    q: usize,
    s: f64,
    probes: &ProbeStrategy,
) -> Result<(NagataReport, Vec<usize>), NagataError> {
    let product = product_cover(base, q)?;
    let (product_multiplicity, per_probe) = product_s_multiplicity(&product, s, probes)?;
    let bound = base_multiplicity
        .value
        .checked_pow(q as u32)
        .ok_or(NagataError::Overflow)?;
    let coverage_ok = {
        let space = &base.space;
        let (lo, hi) = bounding_box(space, &base.members);
        let mut rng = SplitMix64::new(probes.seed ^ 0xC0);
        let mut ok = true;
        'probe: for _ in 0..probes.count.min(1000) {
            for _ in 0..q {
                let point: Vec<f64> = (0..space.dim())
                    .map(|a| rng.uniform(lo[a], hi[a]))
                    .collect();
                let contained = base
                    .members
                    .iter()
                    .map(|m| member_contains(space, m, &point))
                    .collect::<Result<Vec<bool>, _>>()?
                    .into_iter()
                    .any(|c| c);
                if !contained {
                    ok = false;
                    break 'probe;
                }
            }
        }
        ok
    };
    let report = NagataReport {
        base_multiplicity: base_multiplicity.value,
        base_exact: base_multiplicity.exact,
        product_multiplicity: product_multiplicity.value,
        bound,
        pass: product_multiplicity.value <= bound,
        non_vacuous: per_probe.iter().any(|&met| met >= 2),
        probes: probes.count,
        coverage_ok,
    };
    Ok((report, per_probe))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probes(count: usize) -> ProbeStrategy {
        ProbeStrategy { count, seed: 0 }
    }

    #[test]
    fn interval_cover_tiles_the_range() {
        let cover = interval_cover(3.0, 1.0, 0.0, 10.0).unwrap();
        let spans: Vec<(f64, f64)> = cover
            .members
            .iter()
            .map(|m| match m {
                Member::Interval { lo, hi } => (*lo, *hi),
                _ => panic!("interval expected"),
            })
            .collect();
        assert_eq!(spans, vec![(0.0, 3.0), (3.0, 6.0), (6.0, 9.0), (9.0, 12.0)]);
    }

    #[test]
    fn interval_cover_rejects_small_c() {
        assert!(matches!(
            interval_cover(2.0, 1.0, 0.0, 10.0),
            Err(NagataError::SmallC(_))
        ));
    }

    #[test]
    fn cover_diameter_of_tiling_is_cs() {
        let cover = interval_cover(3.0, 1.0, 0.0, 10.0).unwrap();
        assert_eq!(cover_diameter(&cover).unwrap(), 3.0);
    }

    #[test]
    fn cover_diameter_of_singletons_is_zero() {
        let cover = Cover {
            space: Space::euclidean(1),
            members: vec![
                Member::Points(vec![vec![0.0]]),
                Member::Points(vec![vec![5.0]]),
            ],
            c: 3.0,
            scale: 1.0,
        };
        assert_eq!(cover_diameter(&cover).unwrap(), 0.0);
    }

    #[test]
    fn interval_multiplicity_is_exactly_two_at_scale_one() {
        let cover = interval_cover(3.0, 1.0, 0.0, 10.0).unwrap();
        let report = s_multiplicity(&cover, 1.0, &probes(10)).unwrap();
        assert_eq!(report.value, 2);
        assert!(report.exact);
    }

    #[test]
    fn interval_multiplicity_at_scale_four_is_three() {
        let cover = interval_cover(3.0, 1.0, 0.0, 10.0).unwrap();
        let report = s_multiplicity(&cover, 4.0, &probes(10)).unwrap();
        assert_eq!(report.value, 3);
        assert!(report.exact);
    }

    #[test]
    fn whole_space_single_member_has_multiplicity_one() {
        let cover = Cover {
            space: Space::euclidean(1),
            members: vec![Member::Interval {
                lo: -100.0,
                hi: 100.0,
            }],
            c: 3.0,
            scale: 100.0,
        };
        let report = s_multiplicity(&cover, 1.0, &probes(10)).unwrap();
        assert_eq!(report.value, 1);
    }

    #[test]
    fn grid_cover_multiplicity_is_four_in_two_dimensions() {
        let cover = grid_cover(3.0, 1.0, &[0.0, 0.0], &[10.0, 10.0]).unwrap();
        assert_eq!(cover.members.len(), 16);
        let report = s_multiplicity(&cover, 1.0, &probes(10)).unwrap();
        assert_eq!(report.value, 4);
        assert!(report.exact);
    }

    #[test]
    fn exact_sweep_is_seed_independent() {
        let cover = interval_cover(3.0, 1.0, 0.0, 10.0).unwrap();
        let a = s_multiplicity(&cover, 1.0, &ProbeStrategy { count: 10, seed: 1 }).unwrap();
        let b = s_multiplicity(&cover, 1.0, &ProbeStrategy { count: 10, seed: 2 }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn multiplicity_is_monotone_in_scale() {
        let cover = interval_cover(3.0, 1.0, 0.0, 10.0).unwrap();
        let mut last = 0;
        for s in [0.5, 1.0, 2.0, 4.0, 7.0] {
            let report = s_multiplicity(&cover, s, &probes(10)).unwrap();
            assert!(report.value >= last);
            last = report.value;
        }
    }

    #[test]
    fn product_cover_counts_multisets() {
        let base = Cover {
            space: Space::euclidean(1),
            members: vec![
                Member::Interval { lo: 0.0, hi: 3.0 },
                Member::Interval { lo: 3.0, hi: 6.0 },
            ],
            c: 3.0,
            scale: 1.0,
        };
        let product = product_cover(&base, 2).unwrap();
        assert_eq!(
            product.index_multisets,
            vec![vec![0, 0], vec![0, 1], vec![1, 1]]
        );
    }

    #[test]
    fn product_cover_at_q_one_is_the_base() {
        let base = interval_cover(3.0, 1.0, 0.0, 10.0).unwrap();
        let product = product_cover(&base, 1).unwrap();
        assert_eq!(product.index_multisets.len(), base.members.len());
        assert_eq!(product_cover_diameter(&product).unwrap(), 3.0);
    }

    #[test]
    fn product_cover_respects_member_cap() {
        let members: Vec<Member> = (0..2000)
            .map(|k| Member::Interval {
                lo: 3.0 * k as f64,
                hi: 3.0 * (k + 1) as f64,
            })
            .collect();
        let base = Cover {
            space: Space::euclidean(1),
            members,
            c: 3.0,
            scale: 1.0,
        };
        assert!(matches!(
            product_cover(&base, 5),
            Err(NagataError::IndexCap { .. })
        ));
    }

    #[test]
    fn ball_probe_near_tile_boundaries_meets_four_members() {
        let base = interval_cover(3.0, 1.0, 0.0, 10.0).unwrap();
        let product = product_cover(&base, 2).unwrap();
        let center = QPoint::scalars(&[2.9, 5.9]);
        let met = members_met_by_ball(&product, &center, 0.5).unwrap();
        assert_eq!(met, 4);
    }

    #[test]
    fn nagata_bound_holds_for_q_two() {
        let base = interval_cover(3.0, 1.0, 0.0, 10.0).unwrap();
        let base_mult = s_multiplicity(&base, 1.0, &probes(10)).unwrap();
        let (report, per_probe) =
            verify_nagata_bound(&base, base_mult, 2, 1.0, &probes(2000)).unwrap();
        assert_eq!(report.base_multiplicity, 2);
        assert_eq!(report.bound, 4);
        assert!(report.pass);
        assert!(report.non_vacuous);
        assert!(report.coverage_ok);
        assert_eq!(per_probe.len(), 2000);
    }

    #[test]
    fn nagata_bound_at_q_one_matches_base() {
        let base = interval_cover(3.0, 1.0, 0.0, 10.0).unwrap();
        let base_mult = s_multiplicity(&base, 1.0, &probes(10)).unwrap();
        let (report, _) = verify_nagata_bound(&base, base_mult, 1, 1.0, &probes(2000)).unwrap();
        assert_eq!(report.bound, 2);
        assert!(report.product_multiplicity <= 2);
        assert!(report.pass);
    }
}
