//! Points, polygonal chains, segments, axis-aligned boxes and the low-level
//! interval and crossing computations the free-space machinery is built on.
//!
//! Chains use the parameter convention `[1, n]`: parameter `k` (integer) is
//! vertex `k`, and parameters between two integers interpolate linearly along
//! the edge joining them. Vertex indices are therefore 1-based throughout the
//! crate.

use crate::error::{FrechetError, Result};

/// Relative factor for the comparison tolerance applied to geometric predicates.
pub const TOLERANCE_FACTOR: f64 = 1e-9;

/// A point in `d`-dimensional Euclidean space.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

/// Euclidean distance between two coordinate slices of equal length.
#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Distance from `p` to the segment `a`-`b`.
pub fn dist_to_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let len_sq = dist_sq(a, b);
    if len_sq == 0.0 {
        return dist(p, a);
    }
    let dot: f64 = p
        .iter()
        .zip(a)
        .zip(b)
        .map(|((p, a), b)| (p - a) * (b - a))
        .sum();
    let u = (dot / len_sq).clamp(0.0, 1.0);
    p.iter()
        .zip(a)
        .zip(b)
        .map(|((p, a), b)| {
            let d = p - (a + u * (b - a));
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Closed parameter range `[lo, hi]` on a chain or a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
}

impl ParamRange {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted range [{lo}, {hi}]");
        ParamRange { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        ParamRange { lo: x, hi: x }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    /// Intersection with `[lo, hi]`, `None` when empty.
    pub fn clip(&self, lo: f64, hi: f64) -> Option<ParamRange> {
        let a = self.lo.max(lo);
        let b = self.hi.min(hi);
        (a <= b).then(|| ParamRange { lo: a, hi: b })
    }

    /// Affine image under `x -> offset + scale * x` (`scale > 0`).
    pub fn map(&self, offset: f64, scale: f64) -> ParamRange {
        ParamRange {
            lo: offset + scale * self.lo,
            hi: offset + scale * self.hi,
        }
    }

    /// Smallest range containing both.
    pub fn hull(&self, other: &ParamRange) -> ParamRange {
        ParamRange {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

/// A straight segment parameterized by `u in [0, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct Segment<'a> {
    pub a: &'a [f64],
    pub b: &'a [f64],
}

impl<'a> Segment<'a> {
    pub fn new(a: &'a [f64], b: &'a [f64]) -> Self {
        debug_assert_eq!(a.len(), b.len());
        Segment { a, b }
    }

    pub fn point_at(&self, u: f64) -> Vec<f64> {
        lerp(self.a, self.b, u)
    }

    pub fn length(&self) -> f64 {
        dist(self.a, self.b)
    }
}

#[inline]
pub fn lerp(a: &[f64], b: &[f64], u: f64) -> Vec<f64> {
    if u == 0.0 {
        return a.to_vec();
    }
    if u == 1.0 {
        return b.to_vec();
    }
    a.iter().zip(b).map(|(a, b)| a + u * (b - a)).collect()
}

/// A polygonal chain `R : [1, n] -> R^d` stored as a flat coordinate buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    dim: usize,
    coords: Vec<f64>,
}

impl Chain {
    /// Builds a chain from vertex rows, collapsing consecutive duplicates.
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Chain> {
        let first = vertices.first().ok_or(FrechetError::EmptyChain)?;
        let dim = first.len();
        if dim == 0 {
            return Err(FrechetError::ZeroDimension);
        }
        let mut coords = Vec::with_capacity(vertices.len() * dim);
        let mut last: Option<&[f64]> = None;
        for (k, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(FrechetError::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                    vertex: k + 1,
                });
            }
            if let Some(bad) = v.iter().position(|x| !x.is_finite()) {
                return Err(FrechetError::NonFinite {
                    vertex: k + 1,
                    coord: bad,
                });
            }
            if last.is_some_and(|l| l == v.as_slice()) {
                continue;
            }
            coords.extend_from_slice(v);
            last = Some(v);
        }
        Ok(Chain { dim, coords })
    }

    /// Builds a chain from a flat buffer, collapsing consecutive duplicates.
    pub fn from_flat(dim: usize, flat: &[f64]) -> Result<Chain> {
        if dim == 0 {
            return Err(FrechetError::ZeroDimension);
        }
        if flat.len() % dim != 0 {
            return Err(FrechetError::DimensionMismatch {
                expected: dim,
                found: flat.len() % dim,
                vertex: flat.len() / dim + 1,
            });
        }
        Chain::new(flat.chunks(dim).map(<[f64]>::to_vec).collect())
    }

    pub fn from_points(points: &[Point]) -> Result<Chain> {
        Chain::new(points.iter().map(|p| p.0.clone()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vertices `n`; the parameter domain is `[1, n]`.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Vertex `k`, 1-based.
    #[inline]
    pub fn vertex(&self, k: usize) -> &[f64] {
        debug_assert!(k >= 1 && k <= self.len(), "vertex {k} out of 1..={}", self.len());
        &self.coords[(k - 1) * self.dim..k * self.dim]
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = &[f64]> + Clone + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// The chain through the given 1-based vertices, in order.
    pub fn select(&self, indices: &[usize]) -> Chain {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &k in indices {
            coords.extend_from_slice(self.vertex(k));
        }
        Chain { dim: self.dim, coords }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.vertices().map(<[f64]>::to_vec).collect()
    }

    /// Edge `j` joins vertices `j - 1` and `j` (so `2 <= j <= n`).
    #[inline]
    pub fn edge(&self, j: usize) -> Segment<'_> {
        Segment::new(self.vertex(j - 1), self.vertex(j))
    }

    /// Index of the edge carrying parameter `s`; integer parameters map to the
    /// edge they start, except the final vertex which maps to the last edge.
    #[inline]
    pub fn edge_of(&self, s: f64) -> usize {
        ((s.floor() as usize) + 1).min(self.len()).max(2)
    }

    pub fn point_at(&self, s: f64) -> Result<Vec<f64>> {
        let n = self.len() as f64;
        if !(1.0..=n).contains(&s) {
            return Err(FrechetError::ParameterOutOfDomain { param: s, len: self.len() });
        }
        Ok(self.eval(s))
    }

    /// Unchecked evaluation; `s` must lie in `[1, n]`.
    #[inline]
    pub fn eval(&self, s: f64) -> Vec<f64> {
        if self.len() == 1 {
            return self.vertex(1).to_vec();
        }
        let j = self.edge_of(s);
        let u = (s - (j - 1) as f64).clamp(0.0, 1.0);
        lerp(self.vertex(j - 1), self.vertex(j), u)
    }

    /// Largest absolute coordinate, used to scale tolerances.
    pub fn coord_scale(&self) -> f64 {
        self.coords.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Sub-chain `R[lo, hi]` together with the original parameter of each of
    /// its vertices.
    pub fn subchain(&self, range: ParamRange) -> SubChain {
        let mut rows: Vec<Vec<f64>> = vec![self.eval(range.lo)];
        let mut params = vec![range.lo];
        let first_int = range.lo.floor() as usize + 1;
        for k in first_int..=self.len() {
            if (k as f64) >= range.hi {
                break;
            }
            rows.push(self.vertex(k).to_vec());
            params.push(k as f64);
        }
        if range.hi > range.lo {
            rows.push(self.eval(range.hi));
            params.push(range.hi);
        }
        // drop coincident neighbours but keep parameters aligned
        let mut kept_rows: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
        let mut kept_params = Vec::with_capacity(params.len());
        for (r, p) in rows.into_iter().zip(params) {
            if kept_rows.last().is_some_and(|l| *l == r) {
                *kept_params.last_mut().unwrap() = p;
                continue;
            }
            kept_rows.push(r);
            kept_params.push(p);
        }
        SubChain {
            chain: Chain::new(kept_rows).expect("sub-chain of a valid chain"),
            params: kept_params,
        }
    }
}

/// A sub-chain with the map from its own parameters back to the parent's.
#[derive(Debug, Clone)]
pub struct SubChain {
    pub chain: Chain,
    /// `params[k - 1]` is the parent parameter of sub-chain vertex `k`.
    pub params: Vec<f64>,
}

impl SubChain {
    /// Parent parameter for a sub-chain parameter `u in [1, len]`.
    pub fn to_parent(&self, u: f64) -> f64 {
        if self.params.len() == 1 {
            return self.params[0];
        }
        let j = self.chain.edge_of(u);
        let f = (u - (j - 1) as f64).clamp(0.0, 1.0);
        let (a, b) = (self.params[j - 2], self.params[j - 1]);
        if f == 1.0 {
            b
        } else {
            a + f * (b - a)
        }
    }
}

/// Comparison tolerance for one computation: `1e-9 * max(1, coordinate scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

impl Tolerance {
    pub fn for_chains(p: &Chain, q: &Chain) -> Tolerance {
        Tolerance(TOLERANCE_FACTOR * p.coord_scale().max(q.coord_scale()).max(1.0))
    }

    pub fn for_scale(scale: f64) -> Tolerance {
        Tolerance(TOLERANCE_FACTOR * scale.abs().max(1.0))
    }

    /// Radius used for the closed test `d <= delta`.
    #[inline]
    pub fn radius(&self, delta: f64) -> f64 {
        delta + self.0
    }
}

/// Axis-aligned box `[lo_k, lo_k + side)` in every dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    pub lo: Vec<f64>,
    pub side: f64,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, side: f64) -> Result<AxisBox> {
        if !(side > 0.0) || !side.is_finite() {
            return Err(FrechetError::InvalidParameter(format!("box side must be positive, got {side}")));
        }
        Ok(AxisBox { lo, side })
    }

    /// Euclidean distance from `p` to the closed box (0 inside).
    pub fn distance(&self, p: &[f64]) -> f64 {
        self.lo
            .iter()
            .zip(p)
            .map(|(lo, x)| {
                let hi = lo + self.side;
                let d = if *x < *lo {
                    lo - x
                } else if *x > hi {
                    x - hi
                } else {
                    0.0
                };
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Parameter in `[0, 1]` of the point of `seg` closest to `center`.
pub fn closest_param(center: &[f64], seg: Segment<'_>) -> f64 {
    let len_sq = dist_sq(seg.a, seg.b);
    if len_sq == 0.0 {
        return 0.0;
    }
    let proj: f64 = center
        .iter()
        .zip(seg.a)
        .zip(seg.b)
        .map(|((c, a), b)| (c - a) * (b - a))
        .sum::<f64>()
        / len_sq;
    proj.clamp(0.0, 1.0)
}

/// Sub-interval of `[0, 1]` where `seg(u)` lies within `radius` of `center`.
///
/// Solves `|a + u(b - a) - c|^2 <= r^2`. Endpoints that pass the direct
/// distance test are always included, so the interval agrees with the point
/// predicate at `u = 0` and `u = 1` even when the quadratic is ill-conditioned.
pub fn ball_segment_intersection(center: &[f64], radius: f64, seg: Segment<'_>) -> Option<ParamRange> {
    debug_assert!(radius >= 0.0);
    let r_sq = radius * radius;
    let start_in = dist_sq(seg.a, center) <= r_sq;
    let end_in = dist_sq(seg.b, center) <= r_sq;
    let len_sq = dist_sq(seg.a, seg.b);
    if len_sq == 0.0 {
        return start_in.then(|| ParamRange::new(0.0, 1.0));
    }
    let proj: f64 = center
        .iter()
        .zip(seg.a)
        .zip(seg.b)
        .map(|((c, a), b)| (c - a) * (b - a))
        .sum::<f64>()
        / len_sq;
    let foot_sq: f64 = center
        .iter()
        .zip(seg.a)
        .zip(seg.b)
        .map(|((c, a), b)| {
            let d = a + proj * (b - a) - c;
            d * d
        })
        .sum();
    let mut range = if foot_sq <= r_sq {
        let w = ((r_sq - foot_sq) / len_sq).sqrt();
        ParamRange { lo: proj - w, hi: proj + w }.clip(0.0, 1.0)
    } else {
        None
    };
    if start_in || end_in {
        let mut r = range.unwrap_or(if start_in { ParamRange::point(0.0) } else { ParamRange::point(1.0) });
        if start_in {
            r.lo = 0.0;
        }
        if end_in {
            r.hi = 1.0;
        }
        if r.lo > r.hi {
            // both endpoints inside: the segment is inside by convexity
            r = ParamRange::new(0.0, 1.0);
        }
        range = Some(r);
    }
    range
}

/// Free interval of `center` against edge `j` of `chain`, in chain parameters.
#[inline]
pub fn free_on_edge(center: &[f64], radius: f64, chain: &Chain, j: usize) -> Option<ParamRange> {
    ball_segment_intersection(center, radius, chain.edge(j)).map(|r| r.map((j - 1) as f64, 1.0))
}

/// First parameter `s > s_start` at which `chain` touches the boundary of
/// `bx`, or `None` if it stays strictly inside after `s_start`.
///
/// Assumes `chain(s_start)` lies in the closed box.
pub fn first_boundary_crossing(chain: &Chain, s_start: f64, bx: &AxisBox) -> Option<f64> {
    let n = chain.len();
    if n < 2 || s_start >= n as f64 {
        return None;
    }
    let first_edge = chain.edge_of(s_start);
    for j in first_edge..=n {
        let seg = chain.edge(j);
        let u0 = if j == first_edge { s_start - (j - 1) as f64 } else { -1.0 };
        let mut best: Option<f64> = None;
        for (k, lo) in bx.lo.iter().enumerate() {
            let (a, b) = (seg.a[k], seg.b[k]);
            if a == b {
                continue;
            }
            for plane in [*lo, lo + bx.side] {
                let u = (plane - a) / (b - a);
                if u > u0 && (0.0..=1.0).contains(&u) && best.is_none_or(|x| u < x) {
                    best = Some(u);
                }
            }
        }
        if let Some(u) = best {
            return Some(((j - 1) as f64 + u).min(j as f64));
        }
    }
    None
}

/// Whether every point of `chain[range]` lies within `margin` of `bx`.
///
/// Distance to a convex set is convex along a segment, so checking the range
/// endpoints and the vertices strictly inside suffices.
pub fn within_expanded_box(chain: &Chain, range: ParamRange, bx: &AxisBox, margin: f64) -> bool {
    if bx.distance(&chain.eval(range.lo)) > margin || bx.distance(&chain.eval(range.hi)) > margin {
        return false;
    }
    let first = range.lo.floor() as usize + 1;
    let last = range.hi.ceil() as usize;
    (first..last.min(chain.len() + 1))
        .filter(|&k| (k as f64) > range.lo && (k as f64) < range.hi)
        .all(|k| bx.distance(chain.vertex(k)) <= margin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(rows: &[&[f64]]) -> Chain {
        Chain::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn point_at_examples() {
        let c = chain(&[&[0.0, 0.0], &[2.0, 0.0]]);
        assert_eq!(c.point_at(1.0).unwrap(), vec![0.0, 0.0]);
        assert_eq!(c.point_at(1.5).unwrap(), vec![1.0, 0.0]);
        let c = chain(&[&[0.0, 0.0], &[2.0, 0.0], &[2.0, 4.0]]);
        assert_eq!(c.point_at(2.25).unwrap(), vec![2.0, 1.0]);
        assert_eq!(c.point_at(3.0).unwrap(), vec![2.0, 4.0]);
    }

    #[test]
    fn point_at_out_of_domain() {
        let c = chain(&[&[0.0, 0.0], &[2.0, 0.0]]);
        assert!(matches!(c.point_at(0.5), Err(FrechetError::ParameterOutOfDomain { .. })));
        assert!(c.point_at(2.0001).is_err());
    }

    #[test]
    fn ingestion_collapses_duplicates() {
        let c = chain(&[&[0.0], &[0.0], &[1.0], &[1.0], &[0.0]]);
        assert_eq!(c.len(), 3);
        assert!(Chain::new(vec![]).is_err());
        assert!(Chain::new(vec![vec![0.0], vec![1.0, 2.0]]).is_err());
        assert!(Chain::new(vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn ball_segment_examples() {
        let a = [-2.0, 1.0];
        let b = [2.0, 1.0];
        let r = ball_segment_intersection(&[0.0, 0.0], 1.0, Segment::new(&a, &b)).unwrap();
        assert_eq!((r.lo, r.hi), (0.5, 0.5));
        let a2 = [-2.0, 0.0];
        let b2 = [2.0, 0.0];
        let r = ball_segment_intersection(&[0.0, 0.0], 2.0, Segment::new(&a2, &b2)).unwrap();
        assert_eq!((r.lo, r.hi), (0.0, 1.0));
        let r = ball_segment_intersection(&[0.0, 0.0], 2f64.sqrt(), Segment::new(&a, &b)).unwrap();
        assert!((r.lo - 0.25).abs() < 1e-12 && (r.hi - 0.75).abs() < 1e-12);
        assert!(ball_segment_intersection(&[0.0, 0.0], 0.5, Segment::new(&a, &b)).is_none());
    }

    #[test]
    fn boundary_crossing_examples() {
        let bx = AxisBox::new(vec![0.0, 0.0], 4.0).unwrap();
        let c = chain(&[&[1.0, 1.0], &[5.0, 1.0]]);
        assert_eq!(first_boundary_crossing(&c, 1.0, &bx), Some(1.75));
        let c = chain(&[&[1.0, 1.0], &[2.0, 2.0]]);
        assert_eq!(first_boundary_crossing(&c, 1.0, &bx), None);
        let c = chain(&[&[1.0, 1.0], &[1.0, -1.0], &[3.0, 1.0]]);
        assert_eq!(first_boundary_crossing(&c, 1.0, &bx), Some(1.5));
    }

    #[test]
    fn boundary_crossing_from_mid_edge() {
        let bx = AxisBox::new(vec![0.0, 0.0], 4.0).unwrap();
        let c = chain(&[&[1.0, 1.0], &[3.0, 1.0], &[3.0, 9.0]]);
        // second edge reaches y = 4 three eighths of the way along
        assert_eq!(first_boundary_crossing(&c, 1.5, &bx), Some(2.375));
    }

    #[test]
    fn expanded_box_examples() {
        let bx = AxisBox::new(vec![0.0, 0.0], 4.0).unwrap();
        let c = chain(&[&[1.0, 1.0], &[3.0, 3.0]]);
        assert!(within_expanded_box(&c, ParamRange::new(1.0, 2.0), &bx, 0.0));
        let c = chain(&[&[1.0, 1.0], &[6.0, 1.0]]);
        assert!(!within_expanded_box(&c, ParamRange::new(1.0, 2.0), &bx, 1.0));
        let c = chain(&[&[1.0, 1.0], &[4.5, 1.0]]);
        assert!(within_expanded_box(&c, ParamRange::new(1.0, 2.0), &bx, 1.0));
    }

    #[test]
    fn subchain_maps_back_to_parent() {
        let c = chain(&[&[0.0], &[1.0], &[3.0], &[6.0]]);
        let sub = c.subchain(ParamRange::new(1.5, 3.25));
        assert_eq!(sub.chain.to_rows(), vec![vec![0.5], vec![1.0], vec![3.0], vec![3.75]]);
        assert_eq!(sub.to_parent(1.0), 1.5);
        assert_eq!(sub.to_parent(2.5), 2.5);
        assert_eq!(sub.to_parent(4.0), 3.25);
        let single = c.subchain(ParamRange::point(2.0));
        assert_eq!(single.chain.len(), 1);
        assert_eq!(single.to_parent(1.0), 2.0);
    }
}
