//! Canonical barriers and the imperfect four-direction structure, used as
//! test fixtures and CLI outputs.

use serde::{Deserialize, Serialize};

use crate::geometry::{Barrier, Point, Segment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BarrierKind {
    /// Three sides of the square (the connected boundary barrier of length 3).
    ThreeSides,
    /// Both diagonals, length 2√2.
    TwoDiagonals,
    /// Steiner tree of the four corners, length 1 + √3.
    SteinerCorners,
    /// Half diagonal plus a three-edge Steiner star, length √2 + √6/2.
    ConjecturedOptimal,
    /// Four axis-parallel segments of total length 2 that perfectly block the
    /// four main directions yet fail to be opaque.
    ImperfectFourDirection,
}

impl BarrierKind {
    pub const ALL: [BarrierKind; 5] = [
        BarrierKind::ThreeSides,
        BarrierKind::TwoDiagonals,
        BarrierKind::SteinerCorners,
        BarrierKind::ConjecturedOptimal,
        BarrierKind::ImperfectFourDirection,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BarrierKind::ThreeSides => "three-sides",
            BarrierKind::TwoDiagonals => "two-diagonals",
            BarrierKind::SteinerCorners => "steiner-corners",
            BarrierKind::ConjecturedOptimal => "conjectured-optimal",
            BarrierKind::ImperfectFourDirection => "imperfect-four-direction",
        }
    }

    pub fn parse(s: &str) -> Option<BarrierKind> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        BarrierKind::ALL.iter().copied().find(|k| k.name() == norm)
    }

    /// True for the kinds that actually block every line through the square.
    pub fn is_opaque(&self) -> bool {
        !matches!(self, BarrierKind::ImperfectFourDirection)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedBarrier {
    pub kind: BarrierKind,
    pub barrier: Barrier,
    /// Exact value of the closed-form total length.
    pub closed_form_length: f64,
}

fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
    Segment::new(Point::new(ax, ay), Point::new(bx, by)).expect("construction segments are valid")
}

/// Fixed barrier constructions. `ImperfectFourDirection` is also reachable
/// here for convenience and delegates to [`imperfect_four_direction`].
pub fn known_barrier(kind: BarrierKind) -> NamedBarrier {
    let sqrt2 = 2.0f64.sqrt();
    let sqrt3 = 3.0f64.sqrt();
    let sqrt6 = 6.0f64.sqrt();
    match kind {
        BarrierKind::ThreeSides => NamedBarrier {
            kind,
            barrier: Barrier::new(vec![
                seg(0.0, 0.0, 1.0, 0.0),
                seg(0.0, 0.0, 0.0, 1.0),
                seg(0.0, 1.0, 1.0, 1.0),
            ])
            .expect("non-empty"),
            closed_form_length: 3.0,
        },
        BarrierKind::TwoDiagonals => NamedBarrier {
            kind,
            barrier: Barrier::new(vec![seg(0.0, 0.0, 1.0, 1.0), seg(0.0, 1.0, 1.0, 0.0)])
                .expect("non-empty"),
            closed_form_length: 2.0 * sqrt2,
        },
        BarrierKind::SteinerCorners => {
            // Steiner points on the vertical center line; the 120° meeting
            // condition puts them at heights √3/6 and 1 - √3/6.
            let lo = sqrt3 / 6.0;
            let hi = 1.0 - sqrt3 / 6.0;
            NamedBarrier {
                kind,
                barrier: Barrier::new(vec![
                    seg(0.0, 0.0, 0.5, lo),
                    seg(1.0, 0.0, 0.5, lo),
                    seg(0.5, lo, 0.5, hi),
                    seg(0.0, 1.0, 0.5, hi),
                    seg(1.0, 1.0, 0.5, hi),
                ])
                .expect("non-empty"),
                closed_form_length: 1.0 + sqrt3,
            }
        }
        BarrierKind::ConjecturedOptimal => {
            // half diagonal plus three segments meeting at 120° at
            // p = (1/2 - √3/6)(1, 1)
            let p = 0.5 - sqrt3 / 6.0;
            NamedBarrier {
                kind,
                barrier: Barrier::new(vec![
                    seg(0.5, 0.5, 1.0, 1.0),
                    seg(0.0, 1.0, p, p),
                    seg(0.0, 0.0, p, p),
                    seg(1.0, 0.0, p, p),
                ])
                .expect("non-empty"),
                closed_form_length: sqrt2 + sqrt6 / 2.0,
            }
        }
        BarrierKind::ImperfectFourDirection => imperfect_four_direction(),
    }
}

/// Four axis-parallel half-sides arranged as a pinwheel. The x-projections of
/// the horizontal members tile [0, 1], the y-projections of the vertical
/// members tile [0, 1], and the projections onto each diagonal tile that
/// diagonal, all without overlap — yet the structure is not opaque.
pub fn imperfect_four_direction() -> NamedBarrier {
    NamedBarrier {
        kind: BarrierKind::ImperfectFourDirection,
        barrier: Barrier::new(vec![
            seg(0.0, 0.0, 0.5, 0.0),
            seg(1.0, 0.0, 1.0, 0.5),
            seg(0.5, 1.0, 1.0, 1.0),
            seg(0.0, 0.5, 0.0, 1.0),
        ])
        .expect("non-empty"),
        closed_form_length: 2.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::project_normal;
    use crate::opacity::main_direction_slack;

    #[test]
    fn lengths_match_closed_forms() {
        for kind in BarrierKind::ALL {
            let nb = known_barrier(kind);
            assert!(
                (nb.barrier.total_length() - nb.closed_form_length).abs() < 1e-12,
                "{:?}",
                kind
            );
        }
    }

    #[test]
    fn steiner_edges_meet_at_120_degrees() {
        let nb = known_barrier(BarrierKind::SteinerCorners);
        let segs = nb.barrier.segments();
        let lo = Point::new(0.5, 3.0f64.sqrt() / 6.0);
        let hi = Point::new(0.5, 1.0 - 3.0f64.sqrt() / 6.0);
        for sp in [lo, hi] {
            let mut dirs: Vec<f64> = segs
                .iter()
                .filter_map(|s| {
                    let (far, near) = if s.a.dist(sp) < 1e-12 {
                        (s.b, s.a)
                    } else if s.b.dist(sp) < 1e-12 {
                        (s.a, s.b)
                    } else {
                        return None;
                    };
                    Some((far.y - near.y).atan2(far.x - near.x))
                })
                .collect();
            assert_eq!(dirs.len(), 3);
            dirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for i in 0..3 {
                let a = dirs[i];
                let b = dirs[(i + 1) % 3];
                let mut diff = b - a;
                if diff < 0.0 {
                    diff += 2.0 * std::f64::consts::PI;
                }
                assert!((diff - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-9);
            }
        }
    }

    fn assert_tiles(mut ivs: Vec<(f64, f64)>, lo: f64, hi: f64) {
        ivs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ivs[0].0 - lo).abs() < 1e-12);
        for w in ivs.windows(2) {
            assert!(
                (w[0].1 - w[1].0).abs() < 1e-12,
                "overlap or gap between {:?} and {:?}",
                w[0],
                w[1]
            );
        }
        assert!((ivs.last().unwrap().1 - hi).abs() < 1e-12);
    }

    #[test]
    fn imperfect_structure_tiling_conditions() {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        let nb = imperfect_four_direction();
        let segs = nb.barrier.segments();
        assert!((nb.barrier.total_length() - 2.0).abs() < 1e-12);

        // x-projections of horizontal members tile [0, 1]
        let horiz: Vec<(f64, f64)> = segs
            .iter()
            .filter(|s| (s.a.y - s.b.y).abs() < 1e-12)
            .map(|s| project_normal(s, FRAC_PI_2))
            .map(|(lo, hi)| (-hi, -lo)) // normal of θ=π/2 is (-1, 0)
            .collect();
        assert_eq!(horiz.len(), 2);
        assert_tiles(horiz, 0.0, 1.0);

        // y-projections of vertical members tile [0, 1]
        let vert: Vec<(f64, f64)> = segs
            .iter()
            .filter(|s| (s.a.x - s.b.x).abs() < 1e-12)
            .map(|s| project_normal(s, 0.0))
            .collect();
        assert_eq!(vert.len(), 2);
        assert_tiles(vert, 0.0, 1.0);

        // projections onto each diagonal tile that diagonal. The projection
        // onto the d1 direction is the offset interval of lines othogonal to
        // it, i.e. at line direction 3π/4.
        let d1: Vec<(f64, f64)> = segs
            .iter()
            .map(|s| project_normal(s, 3.0 * FRAC_PI_4))
            .collect();
        let lo = d1.iter().map(|iv| iv.0).fold(f64::INFINITY, f64::min);
        let hi = d1.iter().map(|iv| iv.1).fold(f64::NEG_INFINITY, f64::max);
        assert!((hi - lo - 2.0f64.sqrt()).abs() < 1e-12);
        assert_tiles(d1, lo, hi);

        let d2: Vec<(f64, f64)> = segs
            .iter()
            .map(|s| project_normal(s, FRAC_PI_4))
            .collect();
        let lo = d2.iter().map(|iv| iv.0).fold(f64::INFINITY, f64::min);
        let hi = d2.iter().map(|iv| iv.1).fold(f64::NEG_INFINITY, f64::max);
        assert!((hi - lo - 2.0f64.sqrt()).abs() < 1e-12);
        assert_tiles(d2, lo, hi);

        // and therefore zero slack in all four main directions
        let slack = main_direction_slack(&nb.barrier);
        for v in [slack.diag1, slack.diag2, slack.axis_x, slack.axis_y] {
            assert!(v.abs() < 1e-12);
        }
    }
}
