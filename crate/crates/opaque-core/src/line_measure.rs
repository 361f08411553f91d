//! Integral geometry of lines: the measure of lines meeting one convex body
//! (its perimeter; 2|s| for a segment), the measure of lines meeting two
//! disjoint bodies (internal cover minus external cover), the subtended-cone
//! bound for segment-vs-body measures, and a Monte-Carlo oracle.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cross, ConvexPolygon, Point, Segment, EPS_GEO};

/// A convex body: a polygon or a (degenerate) segment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Body {
    Polygon(ConvexPolygon),
    Segment(Segment),
}

impl Body {
    pub fn vertices(&self) -> Vec<Point> {
        match self {
            Body::Polygon(p) => p.vertices().to_vec(),
            Body::Segment(s) => vec![s.a, s.b],
        }
    }

    /// Boundary length: perimeter for polygons, 2|s| for a segment (a closed
    /// string around a segment traverses it twice).
    pub fn boundary_length(&self) -> f64 {
        match self {
            Body::Polygon(p) => p.perimeter(),
            Body::Segment(s) => 2.0 * s.length(),
        }
    }

    pub fn projection_interval(&self, nx: f64, ny: f64) -> (f64, f64) {
        match self {
            Body::Polygon(p) => p.projection_interval(nx, ny),
            Body::Segment(s) => {
                let da = s.a.dot(nx, ny);
                let db = s.b.dot(nx, ny);
                (da.min(db), da.max(db))
            }
        }
    }

    fn edges(&self) -> Vec<(Point, Point)> {
        match self {
            Body::Polygon(p) => {
                let vs = p.vertices();
                (0..vs.len())
                    .map(|i| (vs[i], vs[(i + 1) % vs.len()]))
                    .collect()
            }
            Body::Segment(s) => vec![(s.a, s.b)],
        }
    }

    fn contains(&self, q: Point, eps: f64) -> bool {
        match self {
            Body::Polygon(p) => p.contains(q, eps),
            Body::Segment(_) => false,
        }
    }
}

/// Measure of all lines meeting a single convex body.
pub fn line_measure_single(body: &Body) -> f64 {
    body.boundary_length()
}

/// Lengths of the external cover (boundary of the convex hull of the union)
/// and the internal cover (the crossed closed string).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CoverLengths {
    pub l_ext: f64,
    pub l_int: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeetingMeasure {
    pub covers: CoverLengths,
    /// l_int − l_ext: the measure of lines meeting both bodies.
    pub measure: f64,
}

fn seg_seg_distance(a: (Point, Point), b: (Point, Point)) -> f64 {
    fn point_seg(q: Point, p0: Point, p1: Point) -> f64 {
        let dx = p1.x - p0.x;
        let dy = p1.y - p0.y;
        let l2 = dx * dx + dy * dy;
        if l2 < 1e-30 {
            return q.dist(p0);
        }
        let t = (((q.x - p0.x) * dx + (q.y - p0.y) * dy) / l2).clamp(0.0, 1.0);
        q.dist(Point::new(p0.x + t * dx, p0.y + t * dy))
    }
    // crossing test
    let d1 = cross(a.0, a.1, b.0);
    let d2 = cross(a.0, a.1, b.1);
    let d3 = cross(b.0, b.1, a.0);
    let d4 = cross(b.0, b.1, a.1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return 0.0;
    }
    [
        point_seg(b.0, a.0, a.1),
        point_seg(b.1, a.0, a.1),
        point_seg(a.0, b.0, b.1),
        point_seg(a.1, b.0, b.1),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min)
}

/// Minimum distance between two convex bodies (0 when they touch or overlap).
pub fn body_distance(k1: &Body, k2: &Body) -> f64 {
    if k1.vertices().iter().any(|&v| k2.contains(v, 0.0))
        || k2.vertices().iter().any(|&v| k1.contains(v, 0.0))
    {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for e1 in k1.edges() {
        for e2 in k2.edges() {
            best = best.min(seg_seg_distance(e1, e2));
        }
    }
    best
}

fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).expect("finite"));
    pts.dedup_by(|a, b| a.dist(*b) < 1e-14);
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn hull_perimeter(points: &[Point]) -> f64 {
    let hull = convex_hull(points);
    match hull.len() {
        0 | 1 => 0.0,
        _ => {
            let n = hull.len();
            (0..n).map(|i| hull[i].dist(hull[(i + 1) % n])).sum()
        }
    }
}

/// One internal tangent: indices of touching vertices on each body. `sign`
/// selects which body lies left of the directed tangent.
fn internal_tangent(v1: &[Point], v2: &[Point], sign: f64) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for (i, &u) in v1.iter().enumerate() {
        'pair: for (j, &v) in v2.iter().enumerate() {
            let len = u.dist(v);
            if len < EPS_GEO {
                continue;
            }
            for &q in v1 {
                if sign * cross(u, v, q) < -EPS_GEO * len {
                    continue 'pair;
                }
            }
            for &q in v2 {
                if sign * cross(u, v, q) > EPS_GEO * len {
                    continue 'pair;
                }
            }
            // taut string: among collinear candidates keep the short bridge
            if best.map_or(true, |(_, _, l)| len < l) {
                best = Some((i, j, len));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn line_intersection(a0: Point, a1: Point, b0: Point, b1: Point) -> Option<Point> {
    let d1x = a1.x - a0.x;
    let d1y = a1.y - a0.y;
    let d2x = b1.x - b0.x;
    let d2y = b1.y - b0.y;
    let det = d1x * d2y - d1y * d2x;
    if det.abs() < 1e-14 {
        return None;
    }
    let t = ((b0.x - a0.x) * d2y - (b0.y - a0.y) * d2x) / det;
    Some(Point::new(a0.x + t * d1x, a0.y + t * d1y))
}

/// Boundary length of `body` between its two tangent vertices, along the
/// side facing away from the crossing point `c` of the internal tangents.
fn far_arc(body: &Body, ia: usize, ib: usize, c: Point) -> f64 {
    match body {
        Body::Segment(s) => {
            if ia == ib {
                2.0 * s.length()
            } else {
                s.length()
            }
        }
        Body::Polygon(poly) => {
            if ia == ib {
                return poly.perimeter();
            }
            let vs = poly.vertices();
            let n = vs.len();
            let va = vs[ia];
            let vb = vs[ib];
            let sc = cross(va, vb, c);
            let mut len_fwd = 0.0;
            let mut fwd_side: Option<f64> = None;
            let mut i = ia;
            while i != ib {
                let j = (i + 1) % n;
                len_fwd += vs[i].dist(vs[j]);
                if j != ib {
                    let s = cross(va, vb, vs[j]);
                    if s.abs() > 1e-12 {
                        fwd_side = Some(s);
                    }
                }
                i = j;
            }
            let perim = poly.perimeter();
            match fwd_side {
                // interior of the forward chain opposite the crossing point:
                // the forward chain is the far side
                Some(s) if s * sc < 0.0 => len_fwd,
                Some(_) => perim - len_fwd,
                None => {
                    // forward chain has no interior vertices; classify by the
                    // backward chain instead
                    let mut i = ib;
                    let mut back_side: Option<f64> = None;
                    while i != ia {
                        let j = (i + 1) % n;
                        if j != ia {
                            let s = cross(va, vb, vs[j]);
                            if s.abs() > 1e-12 {
                                back_side = Some(s);
                                break;
                            }
                        }
                        i = j;
                    }
                    match back_side {
                        Some(s) if s * sc > 0.0 => len_fwd,
                        Some(_) => perim - len_fwd,
                        None => len_fwd.min(perim - len_fwd),
                    }
                }
            }
        }
    }
}

/// Measure of all lines meeting both bodies: L_int − L_ext, where the
/// external cover is the convex hull boundary and the internal cover is the
/// crossed string through the two internal tangents.
pub fn meeting_measure(k1: &Body, k2: &Body) -> Result<MeetingMeasure> {
    if body_distance(k1, k2) <= EPS_GEO {
        return Err(Error::BodiesOverlap);
    }
    let v1 = k1.vertices();
    let v2 = k2.vertices();

    let mut all = v1.clone();
    all.extend_from_slice(&v2);
    let l_ext = hull_perimeter(&all);

    let (i_plus, j_plus) =
        internal_tangent(&v1, &v2, 1.0).ok_or(Error::BodiesOverlap)?;
    let (i_minus, j_minus) =
        internal_tangent(&v1, &v2, -1.0).ok_or(Error::BodiesOverlap)?;

    let a1 = v1[i_plus];
    let b1 = v2[j_plus];
    let a2 = v1[i_minus];
    let b2 = v2[j_minus];
    let c = line_intersection(a1, b1, a2, b2).unwrap_or(Point::new(
        0.5 * (0.5 * (a1.x + a2.x) + 0.5 * (b1.x + b2.x)),
        0.5 * (0.5 * (a1.y + a2.y) + 0.5 * (b1.y + b2.y)),
    ));

    let l_int = a1.dist(b1)
        + a2.dist(b2)
        + far_arc(k1, i_plus, i_minus, c)
        + far_arc(k2, j_plus, j_minus, c);

    Ok(MeetingMeasure {
        covers: CoverLengths { l_ext, l_int },
        measure: (l_int - l_ext).max(0.0),
    })
}

/// The subtended-cone bound: theta_max is the largest angle, over apexes on
/// the segment, of the minimum cone containing the body; the measure of lines
/// meeting both is at most 2·sin(theta_max/2)·|s|.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ConeBound {
    pub theta_max: f64,
    pub bound: f64,
}

/// Angle subtended by the vertex set of `b` at an exterior point `c`: the
/// extent of the smallest angular arc containing all directions to vertices.
fn subtended_angle(c: Point, b: &ConvexPolygon) -> f64 {
    let mut angles: Vec<f64> = b
        .vertices()
        .iter()
        .map(|v| (v.y - c.y).atan2(v.x - c.x))
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = angles.len();
    let mut max_gap = angles[0] + 2.0 * PI - angles[n - 1];
    for i in 1..n {
        max_gap = max_gap.max(angles[i] - angles[i - 1]);
    }
    2.0 * PI - max_gap
}

pub fn cone_angle_bound(s: &Segment, b: &ConvexPolygon) -> Result<ConeBound> {
    if body_distance(&Body::Segment(*s), &Body::Polygon(b.clone())) <= EPS_GEO {
        return Err(Error::BodiesOverlap);
    }
    let eval = |t: f64| subtended_angle(s.point_at(t), b);

    // coarse scan to bracket the max, then golden-section refinement
    // (the subtended angle along a segment disjoint from a convex body is
    // unimodal; cross-checked by dense sampling in tests)
    let grid = 64usize;
    let mut best_k = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for k in 0..=grid {
        let v = eval(k as f64 / grid as f64);
        if v > best_v {
            best_v = v;
            best_k = k;
        }
    }
    let mut lo = if best_k == 0 { 0.0 } else { (best_k - 1) as f64 / grid as f64 };
    let mut hi = if best_k == grid { 1.0 } else { (best_k + 1) as f64 / grid as f64 };
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..120 {
        if hi - lo < 1e-13 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1);
        }
    }
    let theta_max = best_v.max(f1).max(f2).max(eval(0.0)).max(eval(1.0));
    Ok(ConeBound {
        theta_max,
        bound: 2.0 * (theta_max / 2.0).sin() * s.length(),
    })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub samples: u64,
}

/// Monte-Carlo estimate of the measure of lines meeting `k1` (and `k2` when
/// given). Lines are sampled uniformly in (θ, p) over a band covering the
/// inflated bounding square of the bodies; deterministic for a fixed seed.
pub fn mc_meeting_measure(
    k1: &Body,
    k2: Option<&Body>,
    samples: u64,
    seed: u64,
) -> McEstimate {
    assert!(samples >= 1);
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut scan = |b: &Body| {
        for v in b.vertices() {
            lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
        }
    };
    scan(k1);
    if let Some(k2) = k2 {
        scan(k2);
    }
    let center = Point::new(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y));
    let side = (hi.x - lo.x).max(hi.y - lo.y).max(1e-6) * 2.0;
    let radius = side * std::f64::consts::FRAC_1_SQRT_2;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let theta = rng.random::<f64>() * PI;
        let nx = -theta.sin();
        let ny = theta.cos();
        let p = center.dot(nx, ny) + (2.0 * rng.random::<f64>() - 1.0) * radius;
        let (lo1, hi1) = k1.projection_interval(nx, ny);
        let mut hit = lo1 <= p && p <= hi1;
        if hit {
            if let Some(k2) = k2 {
                let (lo2, hi2) = k2.projection_interval(nx, ny);
                hit = lo2 <= p && p <= hi2;
            }
        }
        if hit {
            hits += 1;
        }
    }
    let band_measure = PI * 2.0 * radius;
    let f = hits as f64 / samples as f64;
    McEstimate {
        estimate: band_measure * f,
        standard_error: band_measure * (f * (1.0 - f) / samples as f64).sqrt(),
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square_at(x: f64, y: f64) -> ConvexPolygon {
        ConvexPolygon::rect(x, y, x + 1.0, y + 1.0)
    }

    #[test]
    fn single_body_measures() {
        let u = Body::Polygon(ConvexPolygon::unit_square());
        assert_eq!(line_measure_single(&u), 4.0);

        let s = Body::Segment(
            Segment::new(Point::new(0.0, 0.0), Point::new(0.7, 0.0)).unwrap(),
        );
        assert!((line_measure_single(&s) - 1.4).abs() < 1e-12);

        let u3 = Body::Polygon(ConvexPolygon::rect(-0.5, -0.5, 1.5, 1.5));
        assert!((line_measure_single(&u3) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn meeting_measure_two_squares_against_monte_carlo() {
        let k1 = Body::Polygon(unit_square_at(0.0, 0.0));
        let k2 = Body::Polygon(unit_square_at(10.0, 0.0));
        let mm = meeting_measure(&k1, &k2).unwrap();
        assert!(mm.covers.l_int >= mm.covers.l_ext);
        assert!(mm.covers.l_ext >= 4.0);
        let mc = mc_meeting_measure(&k1, Some(&k2), 400_000, 7);
        assert!(
            (mm.measure - mc.estimate).abs() <= 3.0 * mc.standard_error,
            "exact {} vs mc {} ± {}",
            mm.measure,
            mc.estimate,
            mc.standard_error
        );
    }

    #[test]
    fn mc_single_body_self_check() {
        let u = Body::Polygon(ConvexPolygon::unit_square());
        let mc = mc_meeting_measure(&u, None, 400_000, 42);
        assert!((mc.estimate - 4.0).abs() <= 3.0 * mc.standard_error);

        let s = Body::Segment(
            Segment::new(Point::new(0.2, 0.1), Point::new(0.9, 0.8)).unwrap(),
        );
        let mc = mc_meeting_measure(&s, None, 400_000, 43);
        assert!((mc.estimate - line_measure_single(&s)).abs() <= 3.0 * mc.standard_error);
    }

    #[test]
    fn mc_is_deterministic_per_seed() {
        let u = Body::Polygon(ConvexPolygon::unit_square());
        let a = mc_meeting_measure(&u, None, 10_000, 5);
        let b = mc_meeting_measure(&u, None, 10_000, 5);
        assert_eq!(a.estimate, b.estimate);
    }

    #[test]
    fn measure_monotone_in_first_body() {
        let small = Body::Polygon(ConvexPolygon::rect(0.2, 0.2, 0.8, 0.8));
        let big = Body::Polygon(ConvexPolygon::rect(0.0, 0.0, 1.0, 1.0));
        let far = Body::Polygon(unit_square_at(5.0, 3.0));
        let m_small = meeting_measure(&small, &far).unwrap().measure;
        let m_big = meeting_measure(&big, &far).unwrap().measure;
        assert!(m_small <= m_big + 1e-12);
    }

    #[test]
    fn overlap_is_rejected() {
        let a = Body::Polygon(ConvexPolygon::rect(0.0, 0.0, 2.0, 2.0));
        let b = Body::Polygon(ConvexPolygon::rect(1.0, 1.0, 3.0, 3.0));
        assert!(meeting_measure(&a, &b).is_err());
        let inner = Body::Polygon(ConvexPolygon::rect(0.5, 0.5, 1.0, 1.0));
        assert!(meeting_measure(&a, &inner).is_err());
    }

    #[test]
    fn cone_bound_midpoint_configuration() {
        // apex at the midpoint of a side of the square [−w2, 1+w2]²
        let w2 = 1e-3;
        let u = ConvexPolygon::unit_square();
        let s = Segment::new(
            Point::new(1.0 + w2, 0.5 - 0.01),
            Point::new(1.0 + w2, 0.5 + 0.01),
        )
        .unwrap();
        let cb = cone_angle_bound(&s, &u).unwrap();
        let expected = (0.25f64 + 1e-6).powf(-0.5);
        assert!(
            (2.0 * (cb.theta_max / 2.0).sin() - expected).abs() < 1e-10,
            "got {}, expected {}",
            2.0 * (cb.theta_max / 2.0).sin(),
            expected
        );
    }

    #[test]
    fn cone_vanishes_far_away() {
        let u = ConvexPolygon::unit_square();
        let s = Segment::new(Point::new(1e6, 0.0), Point::new(1e6, 1.0)).unwrap();
        let cb = cone_angle_bound(&s, &u).unwrap();
        assert!(cb.theta_max < 1e-5);
        assert!(cb.bound < 1e-4);
    }

    #[test]
    fn cone_bound_dominates_meeting_measure_far_segment() {
        let u = ConvexPolygon::unit_square();
        let s = Segment::new(Point::new(2.5, -0.3), Point::new(3.1, 1.4)).unwrap();
        let cb = cone_angle_bound(&s, &u).unwrap();
        let mm = meeting_measure(&Body::Segment(s), &Body::Polygon(u)).unwrap();
        assert!(mm.measure <= cb.bound + 1e-9);
    }

    #[test]
    fn unimodality_spot_check() {
        // dense sampling agrees with the golden-section result
        let u = ConvexPolygon::unit_square();
        let s = Segment::new(Point::new(1.7, -0.9), Point::new(2.4, 2.2)).unwrap();
        let cb = cone_angle_bound(&s, &u).unwrap();
        let dense = (0..=20_000)
            .map(|k| subtended_angle(s.point_at(k as f64 / 20_000.0), &u))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(cb.theta_max + 1e-9 >= dense);
    }
}
