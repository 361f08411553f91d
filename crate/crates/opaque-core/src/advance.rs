//! The anchored sweep procedure: a near-vertical line anchored on the top and
//! bottom sides of a bounding square rotates around one anchor or translates
//! rightward until it either finds an unblocked position (a witness) or an
//! anchor runs out of range. Also the per-anchor advance-budget calculus that
//! bounds how far the anchors can travel.

use serde::{Deserialize, Serialize};

use crate::audit::{build_partition, AdvanceStats, IDX_A1, IDX_A2, IDX_A3, IDX_A4};
use crate::error::{Error, Result};
use crate::geometry::{
    classify, AngleTag, Barrier, ConvexPolygon, ConvexRegion, Line, Point, EPS_GEO,
};
use crate::opacity::{witness_quality, WitnessLine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundingMode {
    /// Anchors on the concentric square of side 2.
    U3,
    /// Anchors on the unit square itself.
    U,
}

#[derive(Clone, Copy, Debug)]
pub struct AdvanceConfig {
    /// Near-axis threshold for the X/Y/Z classification.
    pub phi: f64,
    /// Margin: initial line x = w1, anchors exhausted at x = 1 − w1. In U
    /// mode this is the cut parameter of the partition.
    pub w1: f64,
    /// Outward margin of the rotation-trigger bands (U3 mode).
    pub w2: f64,
    pub mode: BoundingMode,
    pub min_clearance: f64,
    /// Event cap; exceeding it signals suspected cycling.
    pub max_events: usize,
}

impl AdvanceConfig {
    /// Parameters of the local argument: φ = arcsin 10⁻⁴, w₁ = 1/20, w₂ = 1/1000.
    pub fn thm1() -> Self {
        AdvanceConfig {
            phi: (1e-4f64).asin(),
            w1: 1.0 / 20.0,
            w2: 1.0 / 1000.0,
            mode: BoundingMode::U3,
            min_clearance: 1e-6,
            max_events: 100_000,
        }
    }

    /// Interior mode over the unit square with cut parameter `w`.
    pub fn interior(w: f64, phi: f64) -> Self {
        AdvanceConfig {
            phi,
            w1: w,
            w2: 0.0,
            mode: BoundingMode::U,
            min_clearance: 1e-6,
            max_events: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    /// Rotation around the low anchor (clears near-horizontal mass in the
    /// high band); the high anchor advances.
    RotateCw,
    /// Rotation around the high anchor; the low anchor advances.
    RotateCcw,
    /// Parallel translation to the right; both anchors advance equally.
    Translate,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SweepEvent {
    pub kind: EventKind,
    /// Index of the segment that drove the motion; `None` for a clearance
    /// probe advancing through empty space.
    pub segment: Option<usize>,
    pub dx_low: f64,
    pub dx_high: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepState {
    pub anchor_low: Point,
    pub anchor_high: Point,
    pub start_x: f64,
    pub end_x: f64,
    pub events: Vec<SweepEvent>,
    /// Number of endpoint sweeps beyond the first per endpoint; nonzero means
    /// some mass was swept more than once (possible for mass outside the
    /// bounding square).
    pub resweeps: usize,
}

impl SweepState {
    pub fn advance_low(&self) -> f64 {
        self.anchor_low.x - self.start_x
    }

    pub fn advance_high(&self) -> f64 {
        self.anchor_high.x - self.start_x
    }

    pub fn max_advance(&self) -> f64 {
        self.advance_low().max(self.advance_high())
    }

    /// Anchors never move left.
    pub fn monotone(&self) -> bool {
        self.events
            .iter()
            .all(|e| e.dx_low >= -1e-12 && e.dx_high >= -1e-12)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum AdvanceOutcome {
    /// A verified witness line: the barrier is invalid.
    Success {
        witness: WitnessLine,
        state: SweepState,
    },
    /// An anchor reached x = 1 − w1 without finding a witness.
    Exhausted(SweepState),
    /// The event cap was hit.
    BudgetExceeded(SweepState),
}

impl AdvanceOutcome {
    pub fn state(&self) -> &SweepState {
        match self {
            AdvanceOutcome::Success { state, .. } => state,
            AdvanceOutcome::Exhausted(state) => state,
            AdvanceOutcome::BudgetExceeded(state) => state,
        }
    }

    pub fn witness(&self) -> Option<&WitnessLine> {
        match self {
            AdvanceOutcome::Success { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

struct SweepGeometry {
    y_bot: f64,
    y_top: f64,
    start_x: f64,
    end_x: f64,
    /// X-hits here rotate around the high anchor (low anchor advances).
    low_zones: Vec<ConvexRegion>,
    /// X-hits here rotate around the low anchor (high anchor advances).
    high_zones: Vec<ConvexRegion>,
}

fn sweep_geometry(config: &AdvanceConfig) -> Result<SweepGeometry> {
    match config.mode {
        BoundingMode::U3 => {
            if !(config.w1 > 0.0 && config.w1 < 0.5) {
                return Err(Error::ParameterRange(format!(
                    "w1 must lie in (0, 1/2), got {}",
                    config.w1
                )));
            }
            let low = ConvexPolygon::rect(0.0, -config.w2, 1.0, config.w1);
            let high = ConvexPolygon::rect(0.0, 1.0 - config.w1, 1.0, 1.0 + config.w2);
            Ok(SweepGeometry {
                y_bot: -0.5,
                y_top: 1.5,
                start_x: config.w1,
                end_x: 1.0 - config.w1,
                low_zones: vec![ConvexRegion::from_polygon(&low)],
                high_zones: vec![ConvexRegion::from_polygon(&high)],
            })
        }
        BoundingMode::U => {
            let partition = build_partition(config.w1)?;
            let zone = |idx: usize| ConvexRegion::from_polygon(partition.region(idx));
            Ok(SweepGeometry {
                y_bot: 0.0,
                y_top: 1.0,
                start_x: config.w1,
                end_x: 1.0 - config.w1,
                low_zones: vec![zone(IDX_A1), zone(IDX_A2)],
                high_zones: vec![zone(IDX_A3), zone(IDX_A4)],
            })
        }
    }
}

/// Where the line meets the segment: the crossing point when it crosses,
/// otherwise the endpoint nearest the line.
fn hit_point(line: &Line, s: &crate::geometry::Segment) -> Point {
    let da = line.signed_offset(s.a);
    let db = line.signed_offset(s.b);
    if (da <= 0.0 && db >= 0.0) || (da >= 0.0 && db <= 0.0) {
        let denom = da - db;
        if denom.abs() < 1e-18 {
            return s.a;
        }
        let t = da / denom;
        s.point_at(t.clamp(0.0, 1.0))
    } else if da.abs() <= db.abs() {
        s.a
    } else {
        s.b
    }
}

/// Run the sweep. Every segment participates in the motion rules (segments
/// outside the bounding square may be swept more than once; this is counted
/// in `resweeps` rather than assumed away), and a success line is verified
/// against the full barrier.
pub fn run_advance(barrier: &Barrier, config: &AdvanceConfig) -> Result<AdvanceOutcome> {
    let geo = sweep_geometry(config)?;
    let u = ConvexPolygon::unit_square();
    let classes: Vec<AngleTag> = barrier
        .segments()
        .iter()
        .map(|s| classify(s, config.phi).tag)
        .collect();
    let endpoints: Vec<Point> = barrier
        .segments()
        .iter()
        .flat_map(|s| [s.a, s.b])
        .collect();
    let mut sweep_counts = vec![0usize; endpoints.len()];

    let soft = (config.min_clearance * 0.5).min(1e-6);
    let step_tol = 1e-12;
    // move slightly past each event so a cleared endpoint leaves the soft
    // band and cannot re-trigger the same rule; merges events closer than
    // this, which is below any tolerance the sweep certifies
    let nudge = 8.0 * soft;

    let mut xl = geo.start_x;
    let mut xh = geo.start_x;
    let mut events: Vec<SweepEvent> = Vec::new();
    let mut resweeps = 0usize;

    let state = |xl: f64, xh: f64, events: Vec<SweepEvent>, resweeps: usize| SweepState {
        anchor_low: Point::new(xl, geo.y_bot),
        anchor_high: Point::new(xh, geo.y_top),
        start_x: geo.start_x,
        end_x: geo.end_x,
        events,
        resweeps,
    };

    loop {
        if xl >= geo.end_x - step_tol || xh >= geo.end_x - step_tol {
            return Ok(AdvanceOutcome::Exhausted(state(xl, xh, events, resweeps)));
        }
        if events.len() >= config.max_events {
            return Ok(AdvanceOutcome::BudgetExceeded(state(
                xl, xh, events, resweeps,
            )));
        }
        let line = Line::through(Point::new(xl, geo.y_bot), Point::new(xh, geo.y_top))
            .expect("anchors on distinct horizontal lines");

        let hits: Vec<(usize, Point)> = barrier
            .segments()
            .iter()
            .enumerate()
            .filter(|(_, s)| line.distance_to_segment(s) <= soft)
            .map(|(i, s)| (i, hit_point(&line, s)))
            .collect();

        let in_zones = |zones: &[ConvexRegion], p: Point| zones.iter().any(|z| z.contains(p, EPS_GEO));
        let high_trigger = hits
            .iter()
            .find(|(i, p)| classes[*i] == AngleTag::X && in_zones(&geo.high_zones, *p));
        let low_trigger = hits
            .iter()
            .find(|(i, p)| classes[*i] == AngleTag::X && in_zones(&geo.low_zones, *p));

        if let Some(&(seg_idx, _)) = high_trigger {
            // rotate clockwise around the low anchor until the high band clears
            let pivot = Point::new(xl, geo.y_bot);
            let t = nudge
                + next_rotation_event(&endpoints, pivot, geo.y_top, xh, geo.end_x, step_tol);
            count_rotation_sweeps(
                &endpoints,
                pivot,
                geo.y_top,
                xh,
                t,
                &mut sweep_counts,
                &mut resweeps,
            );
            events.push(SweepEvent {
                kind: EventKind::RotateCw,
                segment: Some(seg_idx),
                dx_low: 0.0,
                dx_high: t - xh,
            });
            xh = t;
            continue;
        }
        if let Some(&(seg_idx, _)) = low_trigger {
            // rotate counterclockwise around the high anchor
            let pivot = Point::new(xh, geo.y_top);
            let t = nudge
                + next_rotation_event(&endpoints, pivot, geo.y_bot, xl, geo.end_x, step_tol);
            count_rotation_sweeps(
                &endpoints,
                pivot,
                geo.y_bot,
                xl,
                t,
                &mut sweep_counts,
                &mut resweeps,
            );
            events.push(SweepEvent {
                kind: EventKind::RotateCcw,
                segment: Some(seg_idx),
                dx_low: t - xl,
                dx_high: 0.0,
            });
            xl = t;
            continue;
        }

        // translation distance to the next endpoint event
        let x_at = |y: f64| xl + (xh - xl) * (y - geo.y_bot) / (geo.y_top - geo.y_bot);
        let mut dt_next = f64::INFINITY;
        for q in &endpoints {
            let d = q.x - x_at(q.y);
            if d > step_tol {
                dt_next = dt_next.min(d);
            }
        }
        let dt_end = geo.end_x - xl.max(xh);
        let dt_next = (dt_next + nudge).min((dt_end + nudge).max(step_tol));

        if let Some(&(seg_idx, _)) = hits.first() {
            // blocked by mass outside the rotation bands: translate right
            for (e, q) in endpoints.iter().enumerate() {
                let d = q.x - x_at(q.y);
                if d > step_tol && d <= dt_next + step_tol {
                    sweep_counts[e] += 1;
                    if sweep_counts[e] > 1 {
                        resweeps += 1;
                    }
                }
            }
            events.push(SweepEvent {
                kind: EventKind::Translate,
                segment: Some(seg_idx),
                dx_low: dt_next,
                dx_high: dt_next,
            });
            xl += dt_next;
            xh += dt_next;
            continue;
        }

        // the line misses everything: try to certify a witness here or just
        // ahead of the touching position
        let mut probe_offsets = vec![0.0, 4.0 * config.min_clearance];
        if dt_next.is_finite() {
            probe_offsets.push(0.25 * dt_next);
            probe_offsets.push(0.5 * dt_next);
        }
        for dt in probe_offsets {
            if dt >= dt_next {
                continue;
            }
            let cand = Line::through(
                Point::new(xl + dt, geo.y_bot),
                Point::new(xh + dt, geo.y_top),
            )
            .expect("anchors distinct");
            let (clearance, penetration) = witness_quality(&cand, barrier, &u);
            if clearance >= config.min_clearance && penetration >= config.min_clearance {
                if dt > 0.0 {
                    events.push(SweepEvent {
                        kind: EventKind::Translate,
                        segment: None,
                        dx_low: dt,
                        dx_high: dt,
                    });
                }
                let final_state = state(xl + dt, xh + dt, events, resweeps);
                return Ok(AdvanceOutcome::Success {
                    witness: WitnessLine {
                        line: cand,
                        clearance,
                        penetration,
                    },
                    state: final_state,
                });
            }
        }
        // nothing certifiable in this free stretch; move to the next event
        events.push(SweepEvent {
            kind: EventKind::Translate,
            segment: None,
            dx_low: dt_next,
            dx_high: dt_next,
        });
        xl += dt_next;
        xh += dt_next;
    }
}

/// Anchor position at which the line rotating about `pivot` next passes a
/// segment endpoint, clamped to the exhaustion boundary.
fn next_rotation_event(
    endpoints: &[Point],
    pivot: Point,
    y_other: f64,
    cur: f64,
    end_x: f64,
    tol: f64,
) -> f64 {
    let mut best = f64::INFINITY;
    for q in endpoints {
        if (q.y - pivot.y).abs() < 1e-9 {
            continue;
        }
        let t = pivot.x + (q.x - pivot.x) * (y_other - pivot.y) / (q.y - pivot.y);
        if t > cur + tol {
            best = best.min(t);
        }
    }
    best.min(end_x + 1e-9)
}

fn count_rotation_sweeps(
    endpoints: &[Point],
    pivot: Point,
    y_other: f64,
    from: f64,
    to: f64,
    counts: &mut [usize],
    resweeps: &mut usize,
) {
    for (e, q) in endpoints.iter().enumerate() {
        if (q.y - pivot.y).abs() < 1e-9 {
            continue;
        }
        let t = pivot.x + (q.x - pivot.x) * (y_other - pivot.y) / (q.y - pivot.y);
        if t > from + 1e-12 && t <= to + 1e-12 {
            counts[e] += 1;
            if counts[e] > 1 {
                *resweeps += 1;
            }
        }
    }
}

/// Per-anchor advance budget. With the band weights of the local argument the
/// total stays strictly below the 1 − 2w₁ gap between the side bands, which
/// is what forces the sweep to succeed.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AdvanceBudget {
    /// Lower bound on the absolute slope of the sweep line.
    pub tan_beta: f64,
    /// x1 = |X| − 0.45, the near-horizontal mass available to one band.
    pub x1: f64,
    /// Rotation advance bound 2 / tan β.
    pub x3: f64,
    /// Near-horizontal mass outside both bands.
    pub x4: f64,
    /// Near-vertical mass outside both side bands.
    pub y1: f64,
    /// Translation advance caused by that near-vertical mass.
    pub y2: f64,
    pub total_advance: f64,
}

pub fn advance_budget(stats: &AdvanceStats, w1: f64, phi: f64) -> Result<AdvanceBudget> {
    let x1 = stats.x_total - 0.45;
    if x1 <= 0.0 {
        return Err(Error::BudgetHypothesis(x1));
    }
    let (sin_phi, cos_phi) = (phi.sin(), phi.cos());
    let tan_beta = (1.5 - w1 - x1 * sin_phi) / (x1 * cos_phi);
    let sin_beta = tan_beta / (1.0 + tan_beta * tan_beta).sqrt();
    let x3 = 2.0 / tan_beta;
    let x4 = stats.x_total - stats.x_low_band - stats.x_high_band;
    let y1 = stats.y_total - stats.y_left_band - stats.y_right_band;
    let x_translation_factor = cos_phi + sin_phi / tan_beta; // sin(β+φ)/sin β
    let y_translation_factor = cos_phi / tan_beta + sin_phi; // cos(β−φ)/sin β
    let y2 = y_translation_factor * y1;
    let total_advance = x3 + x_translation_factor * x4 + y2 + stats.z_total / sin_beta;
    Ok(AdvanceBudget {
        tan_beta,
        x1,
        x3,
        x4,
        y1,
        y2,
        total_advance,
    })
}
