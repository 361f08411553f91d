//! Planar kernel: points, segments, lines in normal form, convex polygons,
//! projections, widths, clipping and angle classification.
//!
//! All types are immutable values and every operation is pure.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for geometric predicates. Inputs at unit-square scale
/// are rationals or quadratic irrationals well above this noise floor.
pub const EPS_GEO: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Dot product treating the point as a vector from the origin.
    pub fn dot(self, nx: f64, ny: f64) -> f64 {
        self.x * nx + self.y * ny
    }
}

/// Cross product (a - o) × (b - o); positive when o→a→b turns left.
pub fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    /// Segments shorter than `EPS_GEO` are rejected: they contribute nothing
    /// to blocking but break direction classification.
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if !(a.x.is_finite() && a.y.is_finite() && b.x.is_finite() && b.y.is_finite()) {
            return Err(Error::DegenerateSegment);
        }
        if a.dist(b) < EPS_GEO {
            return Err(Error::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Direction angle in [0, π); unoriented, so swapping endpoints is a no-op.
    pub fn direction_angle(&self) -> f64 {
        let mut t = (self.b.y - self.a.y).atan2(self.b.x - self.a.x);
        if t < 0.0 {
            t += PI;
        }
        if t >= PI {
            t -= PI;
        }
        t
    }

    pub fn point_at(&self, t: f64) -> Point {
        Point::new(
            self.a.x + t * (self.b.x - self.a.x),
            self.a.y + t * (self.b.y - self.a.y),
        )
    }

    /// Sub-segment for a parameter range; `None` when too short to represent.
    pub fn sub(&self, t0: f64, t1: f64) -> Option<Segment> {
        Segment::new(self.point_at(t0), self.point_at(t1)).ok()
    }
}

/// A candidate opaque set: a finite list of closed segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Barrier {
    segments: Vec<Segment>,
}

impl Barrier {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyBarrier);
        }
        Ok(Barrier { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    /// New barrier with segment `i` removed; error if that empties it.
    pub fn without_segment(&self, i: usize) -> Result<Barrier> {
        let mut segs = self.segments.clone();
        segs.remove(i);
        Barrier::new(segs)
    }
}

/// An unoriented line in normal form: `theta` in [0, π) is the direction of
/// the line and `p` the signed offset along the normal direction theta + π/2,
/// i.e. the line is { q : q · n = p } with n = (-sin theta, cos theta).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    theta: f64,
    p: f64,
}

impl Line {
    pub fn new(theta: f64, p: f64) -> Self {
        let mut t = theta.rem_euclid(PI);
        let mut flips = ((theta - t) / PI).round() as i64;
        if t >= PI {
            t -= PI;
            flips += 1;
        }
        let p = if flips % 2 == 0 { p } else { -p };
        Line { theta: t, p }
    }

    /// Line through two distinct points.
    pub fn through(a: Point, b: Point) -> Option<Self> {
        if a.dist(b) < EPS_GEO {
            return None;
        }
        let mut theta = (b.y - a.y).atan2(b.x - a.x);
        if theta < 0.0 {
            theta += PI;
        }
        if theta >= PI {
            theta -= PI;
        }
        let (nx, ny) = normal_of(theta);
        Some(Line {
            theta,
            p: a.dot(nx, ny),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn normal(&self) -> (f64, f64) {
        normal_of(self.theta)
    }

    pub fn direction(&self) -> (f64, f64) {
        (self.theta.cos(), self.theta.sin())
    }

    /// A point on the line (the foot of the normal from the origin).
    pub fn base_point(&self) -> Point {
        let (nx, ny) = self.normal();
        Point::new(self.p * nx, self.p * ny)
    }

    pub fn signed_offset(&self, q: Point) -> f64 {
        let (nx, ny) = self.normal();
        q.dot(nx, ny) - self.p
    }

    pub fn distance_to_point(&self, q: Point) -> f64 {
        self.signed_offset(q).abs()
    }

    /// Distance from the (infinite) line to a segment: zero when they cross,
    /// otherwise the smaller endpoint offset.
    pub fn distance_to_segment(&self, s: &Segment) -> f64 {
        let da = self.signed_offset(s.a);
        let db = self.signed_offset(s.b);
        if (da <= 0.0 && db >= 0.0) || (da >= 0.0 && db <= 0.0) {
            0.0
        } else {
            da.abs().min(db.abs())
        }
    }

    /// Length of the chord cut from a convex polygon.
    pub fn chord_length(&self, poly: &ConvexPolygon) -> f64 {
        let base = self.base_point();
        let (dx, dy) = self.direction();
        let mut t0 = f64::NEG_INFINITY;
        let mut t1 = f64::INFINITY;
        let vs = poly.vertices();
        for i in 0..vs.len() {
            let v = vs[i];
            let w = vs[(i + 1) % vs.len()];
            let ex = w.x - v.x;
            let ey = w.y - v.y;
            // interior of a CCW polygon: cross(v, w, q) ≥ 0, linear in t
            let f0 = ex * (base.y - v.y) - ey * (base.x - v.x);
            let fd = ex * dy - ey * dx;
            if fd.abs() < 1e-15 {
                if f0 < -EPS_GEO {
                    return 0.0;
                }
                continue;
            }
            let tb = -f0 / fd;
            if fd > 0.0 {
                t0 = t0.max(tb);
            } else {
                t1 = t1.min(tb);
            }
        }
        (t1 - t0).max(0.0)
    }
}

fn normal_of(theta: f64) -> (f64, f64) {
    (-theta.sin(), theta.cos())
}

/// Strictly convex polygon with CCW vertex order (enforced at construction;
/// collinear vertices are merged).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegeneratePolygon);
        }
        let mut vs = vertices;
        // signed area: positive for CCW
        let area2: f64 = (0..vs.len())
            .map(|i| {
                let a = vs[i];
                let b = vs[(i + 1) % vs.len()];
                a.x * b.y - b.x * a.y
            })
            .sum();
        if area2 < 0.0 {
            vs.reverse();
        }
        // merge collinear / repeated vertices
        let mut merged: Vec<Point> = Vec::with_capacity(vs.len());
        let n = vs.len();
        for i in 0..n {
            let prev = vs[(i + n - 1) % n];
            let cur = vs[i];
            let next = vs[(i + 1) % n];
            if cur.dist(next) < EPS_GEO {
                continue;
            }
            if cross(prev, cur, next).abs() < EPS_GEO {
                continue;
            }
            merged.push(cur);
        }
        if merged.len() < 3 {
            return Err(Error::DegeneratePolygon);
        }
        let m = merged.len();
        for i in 0..m {
            let a = merged[i];
            let b = merged[(i + 1) % m];
            let c = merged[(i + 2) % m];
            if cross(a, b, c) <= 0.0 {
                return Err(Error::NotConvex);
            }
        }
        Ok(ConvexPolygon { vertices: merged })
    }

    pub fn unit_square() -> Self {
        Self::rect(0.0, 0.0, 1.0, 1.0)
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        ConvexPolygon::new(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
        .expect("axis-aligned rectangle is convex")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].dist(self.vertices[(i + 1) % n]))
            .sum()
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        let s: f64 = (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                a.x * b.y - b.x * a.y
            })
            .sum();
        s / 2.0
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len() as f64;
        let (sx, sy) = self
            .vertices
            .iter()
            .fold((0.0, 0.0), |(sx, sy), v| (sx + v.x, sy + v.y));
        Point::new(sx / n, sy / n)
    }

    /// Interval of projections of the polygon onto the unit vector `n`.
    pub fn projection_interval(&self, nx: f64, ny: f64) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in &self.vertices {
            let d = v.dot(nx, ny);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        (lo, hi)
    }

    pub fn contains(&self, q: Point, eps: f64) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let v = self.vertices[i];
            let w = self.vertices[(i + 1) % n];
            let len = v.dist(w);
            cross(v, w, q) >= -eps * len
        })
    }

    /// True when every vertex of `inner` lies inside or on this polygon.
    pub fn contains_polygon(&self, inner: &ConvexPolygon, eps: f64) -> bool {
        inner.vertices.iter().all(|&v| self.contains(v, eps))
    }
}

/// Intersection of closed half-planes { q : q·n ≤ c } with unit normals.
/// Represents polygons, strips and unbounded regions uniformly; the workhorse
/// for splitting barrier segments across regions.
#[derive(Clone, Debug)]
pub struct ConvexRegion {
    halves: Vec<(f64, f64, f64)>,
}

impl ConvexRegion {
    pub fn from_halves(halves: Vec<(f64, f64, f64)>) -> Self {
        ConvexRegion { halves }
    }

    pub fn from_polygon(poly: &ConvexPolygon) -> Self {
        let vs = poly.vertices();
        let n = vs.len();
        let mut halves = Vec::with_capacity(n);
        for i in 0..n {
            let v = vs[i];
            let w = vs[(i + 1) % n];
            let ex = w.x - v.x;
            let ey = w.y - v.y;
            let len = (ex * ex + ey * ey).sqrt();
            // outward normal of a CCW edge
            let nx = ey / len;
            let ny = -ex / len;
            halves.push((nx, ny, v.dot(nx, ny)));
        }
        ConvexRegion { halves }
    }

    /// The slab lo ≤ q·n ≤ hi (either bound may be infinite).
    pub fn strip(nx: f64, ny: f64, lo: f64, hi: f64) -> Self {
        let mut halves = Vec::new();
        if hi.is_finite() {
            halves.push((nx, ny, hi));
        }
        if lo.is_finite() {
            halves.push((-nx, -ny, -lo));
        }
        ConvexRegion { halves }
    }

    pub fn intersect(mut self, other: &ConvexRegion) -> Self {
        self.halves.extend_from_slice(&other.halves);
        self
    }

    pub fn contains(&self, q: Point, eps: f64) -> bool {
        self.halves.iter().all(|&(nx, ny, c)| q.dot(nx, ny) <= c + eps)
    }

    /// Parameter range of `s` inside the region, or `None` when they miss.
    /// Boundaries are sharp (no tolerance) so that partition sums stay exact.
    pub fn clip_param(&self, s: &Segment) -> Option<(f64, f64)> {
        let mut t0 = 0.0f64;
        let mut t1 = 1.0f64;
        let dx = s.b.x - s.a.x;
        let dy = s.b.y - s.a.y;
        for &(nx, ny, c) in &self.halves {
            let f0 = s.a.dot(nx, ny) - c;
            let fd = dx * nx + dy * ny;
            if fd.abs() < 1e-15 {
                if f0 > 0.0 {
                    return None;
                }
                continue;
            }
            let tb = -f0 / fd;
            if fd > 0.0 {
                t1 = t1.min(tb);
            } else {
                t0 = t0.max(tb);
            }
            if t0 > t1 {
                return None;
            }
        }
        Some((t0, t1))
    }

    /// Length of `s ∩ region`.
    pub fn clipped_length(&self, s: &Segment) -> f64 {
        match self.clip_param(s) {
            Some((t0, t1)) => (t1 - t0).max(0.0) * s.length(),
            None => 0.0,
        }
    }
}

/// Near-horizontal (X), near-vertical (Y) or other (Z), together with the
/// smallest rotation to an axis and its complement to π/4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngleTag {
    X,
    Y,
    Z,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AngleClass {
    pub tag: AngleTag,
    /// Smallest rotation bringing the segment to horizontal or vertical, in [0, π/4].
    pub alpha_s: f64,
    /// Smallest angle to a diagonal of the square: π/4 - alpha_s.
    pub beta_s: f64,
}

/// Classify a segment against the near-axis threshold `phi` (0 < phi < π/4).
pub fn classify(s: &Segment, phi: f64) -> AngleClass {
    let a = s.direction_angle();
    let horiz = a.min(PI - a);
    let vert = (a - FRAC_PI_2).abs();
    let alpha_s = horiz.min(vert);
    let tag = if horiz <= phi {
        AngleTag::X
    } else if vert <= phi {
        AngleTag::Y
    } else {
        AngleTag::Z
    };
    AngleClass {
        tag,
        alpha_s,
        beta_s: FRAC_PI_4 - alpha_s,
    }
}

/// Width of the offset interval of direction-`alpha` lines meeting the
/// polygon, i.e. the extent of its projection onto the normal alpha + π/2.
/// Continuous and π-periodic in `alpha`.
pub fn width(poly: &ConvexPolygon, alpha: f64) -> f64 {
    let (nx, ny) = normal_of(alpha);
    let (lo, hi) = poly.projection_interval(nx, ny);
    hi - lo
}

/// Closed interval of offsets p such that Line(alpha, p) meets `s`.
pub fn project_normal(s: &Segment, alpha: f64) -> (f64, f64) {
    let (nx, ny) = normal_of(alpha);
    let da = s.a.dot(nx, ny);
    let db = s.b.dot(nx, ny);
    (da.min(db), da.max(db))
}

/// Intersection s ∩ poly as a segment; degenerate-to-point results are dropped.
pub fn clip(s: &Segment, poly: &ConvexPolygon) -> Option<Segment> {
    let region = ConvexRegion::from_polygon(poly);
    let (t0, t1) = region.clip_param(s)?;
    if t1 <= t0 {
        return None;
    }
    s.sub(t0, t1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point::new(ax, ay), Point::new(bx, by)).unwrap()
    }

    #[test]
    fn width_unit_square_examples() {
        let u = ConvexPolygon::unit_square();
        assert!((width(&u, 0.0) - 1.0).abs() < 1e-12);
        assert!((width(&u, FRAC_PI_4) - 2.0f64.sqrt()).abs() < 1e-12);
        // support-function evaluation over the 4 vertices at π/6
        assert!((width(&u, PI / 6.0) - (3.0f64.sqrt() + 1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn width_matches_closed_form_on_grid() {
        let u = ConvexPolygon::unit_square();
        for k in 0..1000 {
            let alpha = PI * (k as f64) / 1000.0;
            let expect = alpha.cos().abs() + alpha.sin().abs();
            assert!(
                (width(&u, alpha) - expect).abs() < 1e-12,
                "alpha = {alpha}"
            );
        }
    }

    #[test]
    fn project_normal_examples() {
        // vertical lines hitting a horizontal segment: x-offsets
        let s = seg(0.0, 0.0, 0.5, 0.0);
        let (lo, hi) = project_normal(&s, FRAC_PI_2);
        assert!((hi - lo - 0.5).abs() < 1e-12);

        // lines parallel to the diagonal: degenerate interval
        let d1 = seg(0.0, 0.0, 1.0, 1.0);
        let (lo, hi) = project_normal(&d1, FRAC_PI_4);
        assert!(hi - lo < 1e-12);

        // |s|·cos(π/4) for the unit horizontal segment
        let s = seg(0.0, 0.0, 1.0, 0.0);
        let (lo, hi) = project_normal(&s, FRAC_PI_4);
        assert!((hi - lo - (2.0f64.sqrt() / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn projection_never_exceeds_length() {
        let s = seg(0.3, -0.2, 1.7, 2.2);
        for k in 0..500 {
            let alpha = PI * (k as f64) / 500.0;
            let (lo, hi) = project_normal(&s, alpha);
            assert!(hi - lo <= s.length() + 1e-12);
        }
    }

    #[test]
    fn clip_examples() {
        let u = ConvexPolygon::unit_square();
        let c = clip(&seg(-1.0, 0.5, 2.0, 0.5), &u).unwrap();
        assert!(c.a.dist(Point::new(0.0, 0.5)) < 1e-12 || c.a.dist(Point::new(1.0, 0.5)) < 1e-12);
        assert!((c.length() - 1.0).abs() < 1e-12);

        let inside = seg(0.2, 0.2, 0.8, 0.9);
        let c = clip(&inside, &u).unwrap();
        assert!((c.length() - inside.length()).abs() < 1e-12);

        assert!(clip(&seg(-1.0, -1.0, -2.0, -2.0), &u).is_none());
    }

    #[test]
    fn classify_examples() {
        let phi = 1.5589f64.to_radians();
        let h = seg(0.0, 0.0, 1.0, 0.0);
        let c = classify(&h, phi);
        assert_eq!(c.tag, AngleTag::X);
        assert!(c.alpha_s.abs() < 1e-12);

        let d = seg(0.0, 0.0, 1.0, 1.0);
        let c = classify(&d, phi);
        assert_eq!(c.tag, AngleTag::Z);
        assert!((c.alpha_s - FRAC_PI_4).abs() < 1e-12);
        assert!(c.beta_s.abs() < 1e-12);

        let one_deg = seg(0.0, 0.0, 1.0f64.to_radians().cos(), 1.0f64.to_radians().sin());
        assert_eq!(classify(&one_deg, phi).tag, AngleTag::X);
    }

    #[test]
    fn classify_invariant_under_swap_and_translation() {
        let s = seg(0.1, 0.2, 0.9, 0.7);
        let swapped = Segment::new(s.b, s.a).unwrap();
        let moved = seg(0.1 + 3.0, 0.2 - 2.0, 0.9 + 3.0, 0.7 - 2.0);
        let phi = 0.02;
        let c0 = classify(&s, phi);
        for other in [swapped, moved] {
            let c = classify(&other, phi);
            assert_eq!(c0.tag, c.tag);
            assert!((c0.alpha_s - c.alpha_s).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert!(Segment::new(Point::new(0.0, 0.0), Point::new(0.0, 0.0)).is_err());
        assert!(Segment::new(Point::new(0.0, 0.0), Point::new(1e-12, 0.0)).is_err());
    }

    #[test]
    fn line_normal_form_roundtrip() {
        let l = Line::new(FRAC_PI_4 + PI, 0.3);
        assert!((l.theta() - FRAC_PI_4).abs() < 1e-12);
        assert!((l.p() + 0.3).abs() < 1e-12);

        let a = Point::new(0.2, 0.7);
        let b = Point::new(0.9, 0.1);
        let l = Line::through(a, b).unwrap();
        assert!(l.distance_to_point(a) < 1e-12);
        assert!(l.distance_to_point(b) < 1e-12);
    }

    #[test]
    fn chord_of_unit_square() {
        let u = ConvexPolygon::unit_square();
        let vertical = Line::new(FRAC_PI_2, -0.5); // x = 0.5 (normal (-1, 0))
        assert!((vertical.chord_length(&u) - 1.0).abs() < 1e-12);
        let diag = Line::through(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        assert!((diag.chord_length(&u) - 2.0f64.sqrt()).abs() < 1e-12);
        let outside = Line::new(0.0, 2.5);
        assert!(outside.chord_length(&u) < 1e-12);
    }
}
