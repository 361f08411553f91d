//! Shared generators for the randomized suites.

use rand::Rng;

use opaque_core::geometry::{Barrier, ConvexPolygon, Point, Segment};
use opaque_core::line_measure::{body_distance, Body};

pub fn random_segment<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Segment {
    loop {
        let a = Point::new(rng.random_range(lo..hi), rng.random_range(lo..hi));
        let b = Point::new(rng.random_range(lo..hi), rng.random_range(lo..hi));
        if let Ok(s) = Segment::new(a, b) {
            return s;
        }
    }
}

pub fn random_barrier<R: Rng>(rng: &mut R, max_segments: usize, lo: f64, hi: f64) -> Barrier {
    let n = rng.random_range(1..=max_segments);
    Barrier::new((0..n).map(|_| random_segment(rng, lo, hi)).collect()).expect("non-empty")
}

pub fn random_convex_polygon<R: Rng>(rng: &mut R, cx: f64, cy: f64, radius: f64) -> ConvexPolygon {
    loop {
        let k = rng.random_range(3..10usize);
        let pts: Vec<Point> = (0..k)
            .map(|_| {
                let ang = rng.random_range(0.0..std::f64::consts::TAU);
                let r = radius * rng.random_range(0.3..1.0f64);
                Point::new(cx + r * ang.cos(), cy + r * ang.sin())
            })
            .collect();
        // the constructor rejects degenerate hulls; brute-force the hull by
        // trying the points directly and retrying on failure
        if let Ok(p) = ConvexPolygon::new(hull(&pts)) {
            return p;
        }
    }
}

fn hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).expect("finite"));
    pts.dedup_by(|a, b| a.dist(*b) < 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Point, a: Point, b: Point| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
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

/// Two random disjoint bodies: a polygon or segment each, centers far enough
/// apart that disjointness is certain, then double-checked.
pub fn random_disjoint_pair<R: Rng>(rng: &mut R) -> (Body, Body) {
    loop {
        let gap = rng.random_range(0.5..6.0);
        let c2x = 1.0 + gap;
        let k1 = if rng.random_bool(0.5) {
            Body::Polygon(random_convex_polygon(rng, 0.0, 0.0, 0.5))
        } else {
            Body::Segment(random_segment(rng, -0.5, 0.5))
        };
        let k2 = if rng.random_bool(0.5) {
            Body::Polygon(random_convex_polygon(rng, c2x, 0.0, 0.5))
        } else {
            let s = random_segment(rng, -0.5, 0.5);
            let shift = |p: Point| Point::new(p.x + c2x, p.y);
            Body::Segment(Segment::new(shift(s.a), shift(s.b)).expect("shifted"))
        };
        if body_distance(&k1, &k2) > 1e-6 {
            return (k1, k2);
        }
    }
}
