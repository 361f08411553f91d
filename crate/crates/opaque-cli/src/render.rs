//! Deterministic SVG rendering: unit square outline, barrier segments,
//! optional partition overlay and witness line. Identical inputs produce
//! byte-identical documents.

use opaque_core::audit::RegionPartition13;
use opaque_core::geometry::{Barrier, Line, Point};
use opaque_core::opacity::WitnessLine;

const VIEW_MIN: f64 = -0.15;
const VIEW_MAX: f64 = 1.15;

fn fmt(v: f64) -> String {
    // fixed notation keeps output stable across values
    format!("{:.6}", v)
}

fn svg_y(y: f64) -> f64 {
    // SVG y grows downward
    1.0 - y
}

fn line_elem(a: Point, b: Point, class: &str) -> String {
    format!(
        "  <line class=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
        class,
        fmt(a.x),
        fmt(svg_y(a.y)),
        fmt(b.x),
        fmt(svg_y(b.y))
    )
}

/// Clip an infinite line to the viewport for drawing.
fn viewport_chord(line: &Line) -> Option<(Point, Point)> {
    let base = line.base_point();
    let (dx, dy) = line.direction();
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for (p0, d, lo, hi) in [
        (base.x, dx, VIEW_MIN, VIEW_MAX),
        (base.y, dy, VIEW_MIN, VIEW_MAX),
    ] {
        if d.abs() < 1e-15 {
            if p0 < lo || p0 > hi {
                return None;
            }
            continue;
        }
        let (a, b) = ((lo - p0) / d, (hi - p0) / d);
        t0 = t0.max(a.min(b));
        t1 = t1.min(a.max(b));
    }
    (t1 > t0).then(|| {
        (
            Point::new(base.x + t0 * dx, base.y + t0 * dy),
            Point::new(base.x + t1 * dx, base.y + t1 * dy),
        )
    })
}

pub struct RenderOptions<'a> {
    pub partition: Option<&'a RegionPartition13>,
    pub witness: Option<&'a WitnessLine>,
}

pub fn render_svg(barrier: &Barrier, options: &RenderOptions) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"640\" height=\"640\">\n",
        fmt(VIEW_MIN),
        fmt(VIEW_MIN),
        fmt(VIEW_MAX - VIEW_MIN),
        fmt(VIEW_MAX - VIEW_MIN)
    ));
    out.push_str("  <style>\n");
    out.push_str("    .square { fill: none; stroke: #888; stroke-width: 0.004 }\n");
    out.push_str("    .cut { stroke: #b8cbe0; stroke-width: 0.003 }\n");
    out.push_str("    .barrier { stroke: #111; stroke-width: 0.008; stroke-linecap: round }\n");
    out.push_str(
        "    .witness { stroke: #d22; stroke-width: 0.005; stroke-dasharray: 0.02 0.012 }\n",
    );
    out.push_str("  </style>\n");
    out.push_str(&format!(
        "  <rect class=\"square\" x=\"0\" y=\"0\" width=\"1\" height=\"1\"/>\n"
    ));
    if let Some(partition) = options.partition {
        for cut in partition.cut_segments() {
            out.push_str(&line_elem(cut.a, cut.b, "cut"));
        }
    }
    for seg in barrier.segments() {
        out.push_str(&line_elem(seg.a, seg.b, "barrier"));
    }
    if let Some(w) = options.witness {
        if let Some((a, b)) = viewport_chord(&w.line) {
            out.push_str(&line_elem(a, b, "witness"));
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use opaque_core::audit::build_partition;
    use opaque_core::constructions::{known_barrier, BarrierKind};

    #[test]
    fn rendering_is_deterministic() {
        let nb = known_barrier(BarrierKind::TwoDiagonals);
        let opts = RenderOptions {
            partition: None,
            witness: None,
        };
        let a = render_svg(&nb.barrier, &opts);
        let b = render_svg(&nb.barrier, &opts);
        assert_eq!(a, b);
        assert_eq!(a.matches("class=\"barrier\"").count(), 2);
        assert!(a.contains("<rect"));
    }

    #[test]
    fn partition_overlay_has_eight_cuts() {
        let nb = known_barrier(BarrierKind::ConjecturedOptimal);
        let p = build_partition(0.1793).unwrap();
        let opts = RenderOptions {
            partition: Some(&p),
            witness: None,
        };
        let svg = render_svg(&nb.barrier, &opts);
        assert_eq!(svg.matches("class=\"barrier\"").count(), 4);
        assert_eq!(svg.matches("class=\"cut\"").count(), 8);
    }

    #[test]
    fn witness_overlay_is_dashed() {
        use opaque_core::geometry::Line;
        let nb = known_barrier(BarrierKind::TwoDiagonals);
        let w = WitnessLine {
            line: Line::new(0.3, 0.2),
            clearance: 0.01,
            penetration: 0.5,
        };
        let svg = render_svg(
            &nb.barrier,
            &RenderOptions {
                partition: None,
                witness: Some(&w),
            },
        );
        assert_eq!(svg.matches("class=\"witness\"").count(), 1);
        assert!(svg.contains("stroke-dasharray"));
    }
}
