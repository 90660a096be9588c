//! Convex rate regions in the `(R1, R2)` plane.
//!
//! A [`RateRegion`] stores the vertices of a convex polygon in
//! counterclockwise order, starting at the origin, then walking along the
//! `R1` axis, over the Pareto boundary and back down the `R2` axis. The
//! final vertex is the `R2`-axis intercept. Degenerate regions (a point or
//! a segment) keep the same ordering.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{RateConstraintSet, RatePair, GEOM_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct RateRegion {
    vertices: Vec<RatePair>,
}

impl RateRegion {
    /// Validates a vertex list against the ordering and convexity invariants.
    pub fn from_vertices(vertices: Vec<RatePair>) -> Result<Self> {
        match vertices.first() {
            Some(v) if *v == RatePair::ORIGIN => {}
            _ => return Err(Error::domain("region vertices must start at the origin")),
        }
        let n = vertices.len();
        if n >= 3 {
            for i in 0..n {
                let (o, p, q) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
                if cross(o, p, q) < -GEOM_TOL {
                    return Err(Error::domain("region vertices are not convex counterclockwise"));
                }
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[RatePair] {
        &self.vertices
    }

    /// Convex hull of `points` together with the origin.
    pub fn hull_of<I: IntoIterator<Item = RatePair>>(points: I) -> Self {
        let mut pts: Vec<RatePair> = points.into_iter().collect();
        pts.push(RatePair::ORIGIN);
        pts.sort_by(|p, q| p.r1().partial_cmp(&q.r1()).unwrap().then(p.r2().partial_cmp(&q.r2()).unwrap()));
        pts.dedup();
        if pts.len() < 3 {
            return Self { vertices: pts };
        }
        let mut lower: Vec<RatePair> = Vec::with_capacity(pts.len());
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= GEOM_TOL {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<RatePair> = Vec::with_capacity(pts.len());
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= GEOM_TOL {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.is_empty() {
            lower.push(RatePair::ORIGIN);
        }
        Self { vertices: lower }
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let mut twice = 0.0;
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            twice += p.r1() * q.r2() - q.r1() * p.r2();
        }
        0.5 * twice
    }

    /// Support function `max_v <d, v>`.
    pub fn support(&self, d1: f64, d2: f64) -> f64 {
        self.vertices.iter().map(|v| d1 * v.r1() + d2 * v.r2()).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_r1(&self) -> f64 {
        self.support(1.0, 0.0)
    }

    pub fn max_r2(&self) -> f64 {
        self.support(0.0, 1.0)
    }

    pub fn max_sum(&self) -> f64 {
        self.support(1.0, 1.0)
    }

    /// Euclidean distance from `p` to the region; zero inside.
    pub fn distance_to(&self, p: &RatePair) -> f64 {
        let v = &self.vertices;
        match v.len() {
            1 => v[0].distance(p),
            2 => segment_distance(v[0], v[1], *p),
            n => {
                let inside = (0..n).all(|i| cross(v[i], v[(i + 1) % n], *p) >= 0.0);
                if inside {
                    return 0.0;
                }
                (0..n).map(|i| segment_distance(v[i], v[(i + 1) % n], *p)).fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn contains_point(&self, p: &RatePair, tol: f64) -> bool {
        self.distance_to(p) <= tol
    }

    /// Largest distance from a vertex of `inner` to `self`.
    ///
    /// For convex sets this equals `sup_d (h_inner(d) - h_self(d))` over unit
    /// directions, clipped at zero: the support-function slack needed for
    /// `inner` to fit inside `self`.
    pub fn containment_slack(&self, inner: &RateRegion) -> f64 {
        inner.vertices.iter().map(|v| self.distance_to(v)).fold(0.0, f64::max)
    }

    pub fn contains_region(&self, inner: &RateRegion, tol: f64) -> bool {
        self.containment_slack(inner) <= tol
    }

    /// Symmetric Hausdorff distance between two regions.
    pub fn hausdorff(&self, other: &RateRegion) -> f64 {
        self.containment_slack(other).max(other.containment_slack(self))
    }

    /// Largest `R2` in the region at the given `R1`, or `None` when `r1` is
    /// outside the region's `R1` range.
    pub fn upper_r2_at(&self, r1: f64) -> Option<f64> {
        let v = &self.vertices;
        if r1 < 0.0 || r1 > self.max_r1() + GEOM_TOL {
            return None;
        }
        let mut best: Option<f64> = None;
        let n = v.len();
        let edges = if n == 1 { 1 } else { n };
        for i in 0..edges {
            let (p, q) = (v[i], v[(i + 1) % n]);
            let (lo, hi) = if p.r1() <= q.r1() { (p, q) } else { (q, p) };
            if r1 < lo.r1() - GEOM_TOL || r1 > hi.r1() + GEOM_TOL {
                continue;
            }
            let y = if (hi.r1() - lo.r1()).abs() <= GEOM_TOL {
                lo.r2().max(hi.r2())
            } else {
                let t = ((r1 - lo.r1()) / (hi.r1() - lo.r1())).clamp(0.0, 1.0);
                lo.r2() + t * (hi.r2() - lo.r2())
            };
            best = Some(best.map_or(y, |b: f64| b.max(y)));
        }
        best
    }
}

impl TryFrom<Vec<[f64; 2]>> for RateRegion {
    type Error = Error;

    fn try_from(raw: Vec<[f64; 2]>) -> Result<Self> {
        let vertices = raw.into_iter().map(|[r1, r2]| RatePair::new(r1, r2)).collect::<Result<_>>()?;
        RateRegion::from_vertices(vertices)
    }
}

impl From<RateRegion> for Vec<[f64; 2]> {
    fn from(r: RateRegion) -> Self {
        r.vertices.iter().map(|v| [v.r1(), v.r2()]).collect()
    }
}

fn cross(o: RatePair, a: RatePair, b: RatePair) -> f64 {
    (a.r1() - o.r1()) * (b.r2() - o.r2()) - (a.r2() - o.r2()) * (b.r1() - o.r1())
}

fn segment_distance(a: RatePair, b: RatePair, p: RatePair) -> f64 {
    let (dx, dy) = (b.r1() - a.r1(), b.r2() - a.r2());
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return a.distance(&p);
    }
    let t = (((p.r1() - a.r1()) * dx + (p.r2() - a.r2()) * dy) / len2).clamp(0.0, 1.0);
    (p.r1() - (a.r1() + t * dx)).hypot(p.r2() - (a.r2() + t * dy))
}

/// The polygon `{R1, R2 >= 0, R1 <= r1_max, R2 <= r2_max, R1 + R2 <= sum_max}`.
pub fn pentagon_to_polygon(c: &RateConstraintSet) -> RateRegion {
    RateRegion::hull_of(pentagon_vertices(c))
}

pub(crate) fn pentagon_vertices(c: &RateConstraintSet) -> [RatePair; 4] {
    let x1 = c.r1_max().min(c.sum_max());
    let y2 = c.r2_max().min(c.sum_max());
    [RatePair::clamped(x1, 0.0), c.max_r1_corner(), c.max_r2_corner(), RatePair::clamped(0.0, y2)]
}

/// Convex hull of the union of `polygons` and the origin.
pub fn convex_closure(polygons: &[RateRegion]) -> Result<RateRegion> {
    if polygons.is_empty() {
        return Err(Error::domain("convex closure of an empty list"));
    }
    Ok(RateRegion::hull_of(polygons.iter().flat_map(|p| p.vertices.iter().copied())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(r1: f64, r2: f64) -> RatePair {
        RatePair::new(r1, r2).unwrap()
    }

    fn verts(r: &RateRegion) -> Vec<(f64, f64)> {
        r.vertices().iter().map(|v| (v.r1(), v.r2())).collect()
    }

    fn pent(a: f64, b: f64, s: f64) -> RateRegion {
        pentagon_to_polygon(&RateConstraintSet::new(a, b, s).unwrap())
    }

    #[test]
    fn pentagon_inactive_sum_is_square() {
        assert_eq!(verts(&pent(1.0, 1.0, 2.0)), vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
    }

    #[test]
    fn pentagon_clipped_corner() {
        assert_eq!(verts(&pent(1.0, 1.0, 1.5)), vec![(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.5, 1.0), (0.0, 1.0)]);
    }

    #[test]
    fn pentagon_inactive_r2() {
        assert_eq!(verts(&pent(2.0, 3.0, 3.0)), vec![(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 3.0)]);
    }

    #[test]
    fn pentagon_degenerate_cases() {
        assert_eq!(verts(&pent(0.0, 2.0, 5.0)), vec![(0.0, 0.0), (0.0, 2.0)]);
        assert_eq!(verts(&pent(3.0, 0.0, 1.0)), vec![(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(verts(&pent(0.0, 0.0, 0.0)), vec![(0.0, 0.0)]);
        assert_eq!(verts(&pent(1.0, 1.0, 0.0)), vec![(0.0, 0.0)]);
    }

    #[test]
    fn pentagon_area_closed_form() {
        for &(a, b, s) in &[(1.0, 1.0, 1.5), (2.0, 3.0, 3.0), (1.0, 1.0, 2.0), (0.7, 2.2, 2.5), (3.0, 1.0, 0.5)] {
            let x = f64::min(a, s);
            let y = f64::min(b, s);
            let cut = (x + y - s).max(0.0);
            let analytic = x * y - 0.5 * cut * cut;
            assert!((pent(a, b, s).area() - analytic).abs() < 1e-12);
        }
    }

    #[test]
    fn closure_of_single_square_is_itself() {
        let sq = pent(1.0, 1.0, 2.0);
        assert_eq!(convex_closure(std::slice::from_ref(&sq)).unwrap(), sq);
    }

    #[test]
    fn closure_of_square_and_triangle() {
        let sq = pent(1.0, 1.0, 2.0);
        let tri = RateRegion::hull_of([rp(2.0, 0.0), rp(0.0, 0.5)]);
        let h = convex_closure(&[sq, tri]).unwrap();
        assert_eq!(verts(&h), vec![(0.0, 0.0), (2.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert!(h.contains_point(&rp(2.0, 0.0), 0.0));
        assert!(h.contains_point(&rp(0.0, 1.0), 0.0));
    }

    #[test]
    fn closure_rejects_empty() {
        assert!(convex_closure(&[]).is_err());
    }

    #[test]
    fn closure_removes_collinear_points() {
        let h = RateRegion::hull_of([rp(1.0, 0.0), rp(2.0, 0.0), rp(1.0, 1.0), rp(0.0, 2.0)]);
        assert_eq!(verts(&h), vec![(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]);
    }

    #[test]
    fn distance_and_containment() {
        let sq = pent(1.0, 1.0, 2.0);
        assert_eq!(sq.distance_to(&rp(0.5, 0.5)), 0.0);
        assert!((sq.distance_to(&rp(2.0, 0.5)) - 1.0).abs() < 1e-15);
        let small = pent(0.5, 0.5, 1.0);
        assert!(sq.contains_region(&small, 0.0));
        assert!(!small.contains_region(&sq, 0.1));
        assert!((small.containment_slack(&sq) - (0.5f64).hypot(0.5)).abs() < 1e-12);
    }

    #[test]
    fn upper_boundary() {
        let p = pent(1.0, 1.0, 1.5);
        assert_eq!(p.upper_r2_at(0.0), Some(1.0));
        assert!((p.upper_r2_at(0.75).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(p.upper_r2_at(1.0), Some(0.5));
        assert_eq!(p.upper_r2_at(1.5), None);
        let seg = pent(0.0, 2.0, 5.0);
        assert_eq!(seg.upper_r2_at(0.0), Some(2.0));
    }

    #[test]
    fn serde_as_pairs() {
        let p = pent(1.0, 1.0, 1.5);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[0.0,0.0],[1.0,0.0],[1.0,0.5],[0.5,1.0],[0.0,1.0]]");
        let back: RateRegion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<RateRegion>("[[1.0,0.0],[0.0,0.0]]").is_err());
        assert!(serde_json::from_str::<RateRegion>("[[0.0,0.0],[0.0,1.0],[1.0,0.0]]").is_err());
    }
}
