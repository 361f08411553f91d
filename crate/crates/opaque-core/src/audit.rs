//! Region geometry for both proofs: the global regions used by the local
//! lower bound (concentric squares, rotated squares, strips, margin bands),
//! the 13-region partition of the unit square, decomposition of a barrier
//! into the 39 class-region lengths, square symmetries, and evaluators for
//! the structural inequalities of the local argument.


use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    classify, AngleTag, Barrier, ConvexPolygon, ConvexRegion, Point, Segment,
};

pub const REGION_COUNT: usize = 13;

/// Canonical region order (also the LP variable order within a class):
/// corner triangles along horizontal sides, along vertical sides, corner
/// quadrilaterals, central octagon. Corners are numbered 1 = bottom-left,
/// 2 = bottom-right, 3 = top-right, 4 = top-left.
pub const REGION_NAMES: [&str; REGION_COUNT] = [
    "A1", "A2", "A3", "A4", "B1", "B2", "B3", "B4", "C1", "C2", "C3", "C4", "C0",
];

/// Region indices in lexicographic label order; portions of a segment lying
/// exactly on a shared boundary are assigned to the earliest region here, so
/// decomposition sums are exact and deterministic.
const TIE_BREAK_ORDER: [usize; REGION_COUNT] = [0, 1, 2, 3, 4, 5, 6, 7, 12, 8, 9, 10, 11];

pub const IDX_A1: usize = 0;
pub const IDX_A2: usize = 1;
pub const IDX_A3: usize = 2;
pub const IDX_A4: usize = 3;
pub const IDX_B1: usize = 4;
pub const IDX_B2: usize = 5;
pub const IDX_B3: usize = 6;
pub const IDX_B4: usize = 7;
pub const IDX_C1: usize = 8;
pub const IDX_C4: usize = 11;
pub const IDX_C0: usize = 12;

/// The 13-region partition of the unit square for a cut parameter `w`:
/// 8 cut segments, each cutting off a right triangle with legs w and 1/2.
#[derive(Clone, Debug)]
pub struct RegionPartition13 {
    pub w: f64,
    /// arctan 2w, the angle of the shallow cuts.
    pub psi: f64,
    /// Height of each cut triangle to its hypotenuse: 1/√(4 + w⁻²).
    pub h: f64,
    regions: Vec<ConvexPolygon>,
    clip_regions: Vec<ConvexRegion>,
    cuts: Vec<Segment>,
}

fn transform_poly(points: &[Point], f: impl Fn(Point) -> Point) -> ConvexPolygon {
    ConvexPolygon::new(points.iter().map(|&p| f(p)).collect()).expect("transformed region")
}

pub fn build_partition(w: f64) -> Result<RegionPartition13> {
    if !(w > 0.0 && w < 0.5) {
        return Err(Error::ParameterRange(format!(
            "cut parameter w must lie in (0, 1/2), got {w}"
        )));
    }
    // the two hypotenuses at a corner cross on the diagonal at distance g
    let g = w / (1.0 + 2.0 * w);

    let id = |p: Point| p;
    let mx = |p: Point| Point::new(1.0 - p.x, p.y);
    let r180 = |p: Point| Point::new(1.0 - p.x, 1.0 - p.y);
    let my = |p: Point| Point::new(p.x, 1.0 - p.y);

    // corner-1 primitives; A has its long cut leg along the horizontal side,
    // B along the vertical side, C is the quadrilateral where the two cut
    // triangles overlap
    let a1 = [Point::new(w, 0.0), Point::new(0.5, 0.0), Point::new(g, g)];
    let b1 = [Point::new(0.0, w), Point::new(g, g), Point::new(0.0, 0.5)];
    let c1 = [
        Point::new(0.0, 0.0),
        Point::new(w, 0.0),
        Point::new(g, g),
        Point::new(0.0, w),
    ];

    let mut regions = vec![
        transform_poly(&a1, id),
        transform_poly(&a1, mx),
        transform_poly(&a1, r180),
        transform_poly(&a1, my),
        transform_poly(&b1, id),
        transform_poly(&b1, mx),
        transform_poly(&b1, r180),
        transform_poly(&b1, my),
        transform_poly(&c1, id),
        transform_poly(&c1, mx),
        transform_poly(&c1, r180),
        transform_poly(&c1, my),
    ];
    regions.push(
        ConvexPolygon::new(vec![
            Point::new(0.5, 0.0),
            Point::new(1.0 - g, g),
            Point::new(1.0, 0.5),
            Point::new(1.0 - g, 1.0 - g),
            Point::new(0.5, 1.0),
            Point::new(g, 1.0 - g),
            Point::new(0.0, 0.5),
            Point::new(g, g),
        ])
        .expect("central octagon"),
    );

    let cut_a = Segment::new(Point::new(0.5, 0.0), Point::new(0.0, w)).expect("cut");
    let cut_b = Segment::new(Point::new(w, 0.0), Point::new(0.0, 0.5)).expect("cut");
    let mut cuts = Vec::with_capacity(8);
    for f in [&id as &dyn Fn(Point) -> Point, &mx, &r180, &my] {
        for c in [&cut_a, &cut_b] {
            cuts.push(Segment::new(f(c.a), f(c.b)).expect("cut"));
        }
    }

    let clip_regions = regions.iter().map(ConvexRegion::from_polygon).collect();
    Ok(RegionPartition13 {
        w,
        psi: (2.0 * w).atan(),
        h: 1.0 / (4.0 + w.powi(-2)).sqrt(),
        regions,
        clip_regions,
        cuts,
    })
}

impl RegionPartition13 {
    pub fn regions(&self) -> &[ConvexPolygon] {
        &self.regions
    }

    pub fn region(&self, idx: usize) -> &ConvexPolygon {
        &self.regions[idx]
    }

    pub fn cut_segments(&self) -> &[Segment] {
        &self.cuts
    }

    pub fn total_area(&self) -> f64 {
        self.regions.iter().map(ConvexPolygon::area).sum()
    }
}

/// The 39 class-region lengths of a decomposed barrier, plus any mass found
/// outside the unit square (lenient mode only).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionVector {
    /// entries[class][region] with class 0 = X, 1 = Y, 2 = Z and regions in
    /// canonical order.
    pub entries: [[f64; REGION_COUNT]; 3],
    pub outside: f64,
}

pub const CLASS_NAMES: [&str; 3] = ["X", "Y", "Z"];

impl DecompositionVector {
    pub fn zero() -> Self {
        DecompositionVector {
            entries: [[0.0; REGION_COUNT]; 3],
            outside: 0.0,
        }
    }

    /// Total in-square length.
    pub fn sum(&self) -> f64 {
        self.entries.iter().flatten().sum()
    }

    /// Variables in LP order: XA1..XA4, XB1..XB4, XC1..XC4, XC0, then Y, Z.
    pub fn flat39(&self) -> Vec<f64> {
        self.entries.iter().flatten().copied().collect()
    }

    pub fn variable_names() -> Vec<String> {
        CLASS_NAMES
            .iter()
            .flat_map(|c| REGION_NAMES.iter().map(move |r| format!("{c}{r}")))
            .collect()
    }

    pub fn class_total(&self, class: usize) -> f64 {
        self.entries[class].iter().sum()
    }

    pub fn get(&self, class: usize, region: usize) -> f64 {
        self.entries[class][region]
    }
}

fn class_index(tag: AngleTag) -> usize {
    match tag {
        AngleTag::X => 0,
        AngleTag::Y => 1,
        AngleTag::Z => 2,
    }
}

/// Subtract a sorted disjoint interval list from [t0, t1].
fn subtract_intervals(t0: f64, t1: f64, assigned: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut cursor = t0;
    for &(a, b) in assigned {
        if b <= cursor {
            continue;
        }
        if a >= t1 {
            break;
        }
        if a > cursor {
            out.push((cursor, a.min(t1)));
        }
        cursor = cursor.max(b);
        if cursor >= t1 {
            break;
        }
    }
    if cursor < t1 {
        out.push((cursor, t1));
    }
    out
}

fn merge_into(assigned: &mut Vec<(f64, f64)>, pieces: &[(f64, f64)]) {
    assigned.extend_from_slice(pieces);
    assigned.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(assigned.len());
    for &(a, b) in assigned.iter() {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    *assigned = merged;
}

/// Split every segment across the 13 regions (boundary portions go to the
/// lexicographically smallest region label) and accumulate lengths per
/// (angle class, region). In strict mode any mass outside the unit square is
/// an error; in lenient mode it is reported in `outside`.
pub fn decompose(
    barrier: &Barrier,
    partition: &RegionPartition13,
    phi: f64,
    strict: bool,
) -> Result<DecompositionVector> {
    let mut vec = DecompositionVector::zero();
    for seg in barrier.segments() {
        let class = class_index(classify(seg, phi).tag);
        let len = seg.length();
        let mut assigned: Vec<(f64, f64)> = Vec::new();
        for &ri in TIE_BREAK_ORDER.iter() {
            if let Some((t0, t1)) = partition.clip_regions[ri].clip_param(seg) {
                if t1 <= t0 {
                    continue;
                }
                let pieces = subtract_intervals(t0, t1, &assigned);
                let piece_total: f64 = pieces.iter().map(|(a, b)| b - a).sum();
                if piece_total > 0.0 {
                    vec.entries[class][ri] += piece_total * len;
                    merge_into(&mut assigned, &pieces);
                }
            }
        }
        let covered: f64 = assigned.iter().map(|(a, b)| b - a).sum();
        vec.outside += (1.0 - covered).max(0.0) * len;
    }
    if strict && vec.outside > 1e-9 * (1.0 + barrier.total_length()) {
        return Err(Error::NotInterior {
            outside: vec.outside,
        });
    }
    Ok(vec)
}

/// The dihedral symmetry group of the unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SquareSymmetry {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    /// x → 1 − x
    FlipX,
    /// y → 1 − y
    FlipY,
    /// reflection across the main diagonal: (x, y) → (y, x)
    FlipD1,
    /// reflection across the anti-diagonal: (x, y) → (1 − y, 1 − x)
    FlipD2,
}

impl SquareSymmetry {
    pub const ALL: [SquareSymmetry; 8] = [
        SquareSymmetry::Identity,
        SquareSymmetry::Rot90,
        SquareSymmetry::Rot180,
        SquareSymmetry::Rot270,
        SquareSymmetry::FlipX,
        SquareSymmetry::FlipY,
        SquareSymmetry::FlipD1,
        SquareSymmetry::FlipD2,
    ];

    pub fn apply(&self, p: Point) -> Point {
        match self {
            SquareSymmetry::Identity => p,
            SquareSymmetry::Rot90 => Point::new(1.0 - p.y, p.x),
            SquareSymmetry::Rot180 => Point::new(1.0 - p.x, 1.0 - p.y),
            SquareSymmetry::Rot270 => Point::new(p.y, 1.0 - p.x),
            SquareSymmetry::FlipX => Point::new(1.0 - p.x, p.y),
            SquareSymmetry::FlipY => Point::new(p.x, 1.0 - p.y),
            SquareSymmetry::FlipD1 => Point::new(p.y, p.x),
            SquareSymmetry::FlipD2 => Point::new(1.0 - p.y, 1.0 - p.x),
        }
    }

    /// True when the symmetry exchanges near-horizontal and near-vertical.
    pub fn swaps_classes(&self) -> bool {
        matches!(
            self,
            SquareSymmetry::Rot90
                | SquareSymmetry::Rot270
                | SquareSymmetry::FlipD1
                | SquareSymmetry::FlipD2
        )
    }
}

pub fn apply_symmetry(barrier: &Barrier, g: SquareSymmetry) -> Barrier {
    Barrier::new(
        barrier
            .segments()
            .iter()
            .map(|s| Segment::new(g.apply(s.a), g.apply(s.b)).expect("isometry preserves length"))
            .collect(),
    )
    .expect("same number of segments")
}

/// Permutation induced on the 13 regions: region i maps onto
/// `permutation[i]` under `g`.
pub fn region_permutation(partition: &RegionPartition13, g: SquareSymmetry) -> [usize; REGION_COUNT] {
    let mut perm = [0usize; REGION_COUNT];
    for (i, poly) in partition.regions().iter().enumerate() {
        let c = g.apply(poly.centroid());
        perm[i] = partition
            .regions()
            .iter()
            .position(|r| r.contains(c, 1e-9))
            .expect("centroid of a region maps into the partition");
    }
    perm
}

/// Pick a square symmetry (among the axis flips and their composition) whose
/// image satisfies both normalization orderings
/// |X ∩ (A1 ∪ A2)| ≥ |X ∩ (A3 ∪ A4)| and |Y ∩ (B1 ∪ B4)| ≥ |Y ∩ (B2 ∪ B3)|.
pub fn normalize_wlog(
    barrier: &Barrier,
    partition: &RegionPartition13,
    phi: f64,
) -> Result<(Barrier, SquareSymmetry)> {
    for g in [
        SquareSymmetry::Identity,
        SquareSymmetry::FlipY,
        SquareSymmetry::FlipX,
        SquareSymmetry::Rot180,
    ] {
        let cand = apply_symmetry(barrier, g);
        let v = decompose(&cand, partition, phi, false)?;
        let xa12 = v.get(0, IDX_A1) + v.get(0, IDX_A2);
        let xa34 = v.get(0, IDX_A3) + v.get(0, IDX_A4);
        let yb14 = v.get(1, IDX_B1) + v.get(1, IDX_B4);
        let yb23 = v.get(1, IDX_B2) + v.get(1, IDX_B3);
        if xa12 >= xa34 - 1e-12 && yb14 >= yb23 - 1e-12 {
            return Ok((cand, g));
        }
    }
    unreachable!("flipping top-bottom and left-right can always order both pairs")
}

/// Parameters and regions for the local (side-length-2 square) argument.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RegionsThm1 {
    pub delta: f64,
    /// Near-axis threshold: arcsin 10⁻⁴, so that 10⁸ δ = sin φ.
    pub phi: f64,
    pub w1: f64,
    pub w2: f64,
}

impl Default for RegionsThm1 {
    fn default() -> Self {
        RegionsThm1 {
            delta: 1e-12,
            phi: (1e-4f64).asin(),
            w1: 1.0 / 20.0,
            w2: 1.0 / 1000.0,
        }
    }
}

impl RegionsThm1 {
    pub fn u(&self) -> ConvexPolygon {
        ConvexPolygon::unit_square()
    }

    pub fn u1(&self) -> ConvexPolygon {
        ConvexPolygon::rect(self.w1, self.w1, 1.0 - self.w1, 1.0 - self.w1)
    }

    pub fn u2(&self) -> ConvexPolygon {
        ConvexPolygon::rect(-self.w2, -self.w2, 1.0 + self.w2, 1.0 + self.w2)
    }

    pub fn u3(&self) -> ConvexPolygon {
        ConvexPolygon::rect(-0.5, -0.5, 1.5, 1.5)
    }

    /// Rotated square of side √2/2 inscribed in the unit square.
    pub fn q1(&self) -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(1.0, 0.5),
            Point::new(0.5, 1.0),
            Point::new(0.0, 0.5),
            Point::new(0.5, 0.0),
        ])
        .expect("diamond")
    }

    /// Rotated square of side √2 circumscribing the unit square.
    pub fn q2(&self) -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(1.5, 0.5),
            Point::new(0.5, 1.5),
            Point::new(-0.5, 0.5),
            Point::new(0.5, -0.5),
        ])
        .expect("diamond")
    }

    /// Vertical strip of unit width containing the square.
    pub fn v_strip(&self) -> ConvexRegion {
        ConvexRegion::strip(1.0, 0.0, 0.0, 1.0)
    }

    /// Horizontal strip of unit height containing the square.
    pub fn h_strip(&self) -> ConvexRegion {
        ConvexRegion::strip(0.0, 1.0, 0.0, 1.0)
    }

    pub fn u_low(&self) -> ConvexPolygon {
        ConvexPolygon::rect(0.0, -self.w2, 1.0, self.w1)
    }

    pub fn u_high(&self) -> ConvexPolygon {
        ConvexPolygon::rect(0.0, 1.0 - self.w1, 1.0, 1.0 + self.w2)
    }

    pub fn u_left(&self) -> ConvexPolygon {
        ConvexPolygon::rect(-self.w2, 0.0, self.w1, 1.0)
    }

    pub fn u_right(&self) -> ConvexPolygon {
        ConvexPolygon::rect(1.0 - self.w1, 0.0, 1.0 + self.w2, 1.0)
    }

    /// Strip bounded by the line through (1 − w1, 0) and (1, 1/2) and its
    /// parallel through (1, 0).
    pub fn pi_plus(&self) -> ConvexRegion {
        let a = Point::new(1.0 - self.w1, 0.0);
        let b = Point::new(1.0, 0.5);
        let dx = b.x - a.x;
        let dy = b.y - a.y;
        let len = dx.hypot(dy);
        let nx = dy / len;
        let ny = -dx / len;
        let c1 = a.dot(nx, ny);
        let c2 = Point::new(1.0, 0.0).dot(nx, ny);
        ConvexRegion::strip(nx, ny, c1.min(c2), c1.max(c2))
    }

    /// `pi_plus` reflected about the horizontal center line.
    pub fn pi_minus(&self) -> ConvexRegion {
        let a = Point::new(1.0 - self.w1, 1.0);
        let b = Point::new(1.0, 0.5);
        let dx = b.x - a.x;
        let dy = b.y - a.y;
        let len = dx.hypot(dy);
        let nx = dy / len;
        let ny = -dx / len;
        let c1 = a.dot(nx, ny);
        let c2 = Point::new(1.0, 1.0).dot(nx, ny);
        ConvexRegion::strip(nx, ny, c1.min(c2), c1.max(c2))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    /// lhs ≤ rhs
    Le,
    /// lhs ≥ rhs
    Ge,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub sense: Sense,
    pub satisfied: bool,
}

fn check(name: &str, lhs: f64, rhs: f64, sense: Sense) -> LemmaCheck {
    let satisfied = match sense {
        Sense::Le => lhs <= rhs + 1e-12,
        Sense::Ge => lhs >= rhs - 1e-12,
    };
    LemmaCheck {
        name: name.to_string(),
        lhs,
        rhs,
        sense,
        satisfied,
    }
}

/// Evaluation of the structural inequalities of the local argument against a
/// concrete barrier. The inequalities are theorems only under the length
/// hypothesis; `hypothesis_applicable` records whether it holds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Thm1Report {
    pub total_length: f64,
    /// 2 ≤ L ≤ 2 + δ; the structural lemmas are vacuous outside this range.
    pub hypothesis_applicable: bool,
    pub checks: Vec<LemmaCheck>,
    /// Strip-decomposition quantities used by the band-weight argument;
    /// informational only.
    pub diagnostics: Vec<(String, f64)>,
}

impl Thm1Report {
    pub fn all_satisfied(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }
}

fn class_lengths(barrier: &Barrier, phi: f64) -> [Vec<Segment>; 3] {
    let mut by_class: [Vec<Segment>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for s in barrier.segments() {
        by_class[class_index(classify(s, phi).tag)].push(*s);
    }
    by_class
}

fn total(segs: &[Segment]) -> f64 {
    segs.iter().map(Segment::length).sum()
}

fn length_in(segs: &[Segment], region: &ConvexRegion) -> f64 {
    segs.iter().map(|s| region.clipped_length(s)).sum()
}

/// Evaluate the structural inequalities (classes at the near-axis threshold,
/// strip and band weights, exterior bounds) for the default the parameters.
/// `i_interval`/`j_interval` choose the strip intervals of the two-interval
/// lemma; the defaults are the ones used by the band-weight proof.
pub fn evaluate_thm1_lemmas(
    barrier: &Barrier,
    regions: &RegionsThm1,
    i_interval: Option<(f64, f64)>,
    j_interval: Option<(f64, f64)>,
) -> Thm1Report {
    let phi = regions.phi;
    let sin_phi = phi.sin();
    let delta = regions.delta;
    let by_class = class_lengths(barrier, phi);
    let x = total(&by_class[0]);
    let y = total(&by_class[1]);
    let z = total(&by_class[2]);
    let length = x + y + z;

    let w_low = regions.w1 + regions.w2 / 10.0;
    let (i_lo, i_hi) = i_interval.unwrap_or((1.0 - w_low, 1.0));
    let j_half = regions.w2 / (2.0 * regions.w1);
    let (j_lo, j_hi) = j_interval.unwrap_or((0.5 - j_half, 0.5 + j_half));

    let mut checks = Vec::new();
    checks.push(check("hypothesis-lower", length, 2.0, Sense::Ge));
    checks.push(check("hypothesis-upper", length, 2.0 + delta, Sense::Le));
    let hypothesis_applicable = length >= 2.0 - 1e-12 && length <= 2.0 + delta + 1e-12;

    checks.push(check("near-diagonal-mass", z, 2.0 * sin_phi, Sense::Le));

    checks.push(check("x-mass-lower", x, 1.0 - 3.5 * sin_phi, Sense::Ge));
    checks.push(check("x-mass-upper", x, 1.0 + 1.5 * sin_phi, Sense::Le));
    checks.push(check("y-mass-lower", y, 1.0 - 3.5 * sin_phi, Sense::Ge));
    checks.push(check("y-mass-upper", y, 1.0 + 1.5 * sin_phi, Sense::Le));

    let x_out_v = x - length_in(&by_class[0], &regions.v_strip());
    let y_out_h = y - length_in(&by_class[1], &regions.h_strip());
    checks.push(check("x-outside-vstrip", x_out_v, 4.5 * sin_phi, Sense::Le));
    checks.push(check("y-outside-hstrip", y_out_h, 4.5 * sin_phi, Sense::Le));

    let i_strip = ConvexRegion::strip(1.0, 0.0, i_lo, i_hi);
    let j_strip = ConvexRegion::strip(0.0, 1.0, j_lo, j_hi);
    let i_clipped = (i_hi.min(1.0) - i_lo.max(0.0)).max(0.0);
    let j_clipped = (j_hi.min(1.0) - j_lo.max(0.0)).max(0.0);
    checks.push(check(
        "x-interval-strip",
        length_in(&by_class[0], &i_strip),
        i_clipped + 5.0 * sin_phi,
        Sense::Le,
    ));
    checks.push(check(
        "y-interval-strip",
        length_in(&by_class[1], &j_strip),
        j_clipped + 5.0 * sin_phi,
        Sense::Le,
    ));

    let all: Vec<Segment> = barrier.segments().to_vec();
    let q2 = ConvexRegion::from_polygon(&regions.q2());
    let outside_q2 = length - length_in(&all, &q2);
    checks.push(check("outside-rotated-square", outside_q2, 4.0 * delta, Sense::Le));

    let u2 = ConvexRegion::from_polygon(&regions.u2());
    let outside_u2 = length - length_in(&all, &u2);
    checks.push(check(
        "outside-margin-square",
        outside_u2,
        (5e5 + 2.0) * delta,
        Sense::Le,
    ));

    let bands = [
        ("x-low-band", 0, regions.u_low()),
        ("x-high-band", 0, regions.u_high()),
        ("y-left-band", 1, regions.u_left()),
        ("y-right-band", 1, regions.u_right()),
    ];
    for (name, class, poly) in bands {
        let v = length_in(&by_class[class], &ConvexRegion::from_polygon(&poly));
        checks.push(check(name, v, 0.45, Sense::Ge));
    }

    // strip-decomposition diagnostics from the band-weight argument
    let v_strip = regions.v_strip();
    let h_strip = regions.h_strip();
    let pi_p = regions.pi_plus();
    let pi_m = regions.pi_minus();
    let x_plus = length_in(
        &by_class[0],
        &v_strip.clone().intersect(&u2).intersect(&pi_p),
    );
    let x_minus = length_in(
        &by_class[0],
        &v_strip.clone().intersect(&u2).intersect(&pi_m),
    );
    let y_pm = length_in(
        &by_class[1],
        &h_strip.clone().intersect(&u2).intersect(&pi_p).intersect(&pi_m),
    );
    let diagnostics = vec![
        ("x_plus".to_string(), x_plus),
        ("x_minus".to_string(), x_minus),
        ("x_star".to_string(), x_out_v),
        ("y_pm".to_string(), y_pm),
        ("y_star".to_string(), y_out_h),
    ];

    Thm1Report {
        total_length: length,
        hypothesis_applicable,
        checks,
        diagnostics,
    }
}

/// Class totals and band weights needed by the advance-budget calculus.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AdvanceStats {
    pub x_total: f64,
    pub x_low_band: f64,
    pub x_high_band: f64,
    pub y_total: f64,
    pub y_left_band: f64,
    pub y_right_band: f64,
    pub z_total: f64,
}

pub fn advance_stats(barrier: &Barrier, regions: &RegionsThm1) -> AdvanceStats {
    let by_class = class_lengths(barrier, regions.phi);
    AdvanceStats {
        x_total: total(&by_class[0]),
        x_low_band: length_in(&by_class[0], &ConvexRegion::from_polygon(&regions.u_low())),
        x_high_band: length_in(&by_class[0], &ConvexRegion::from_polygon(&regions.u_high())),
        y_total: total(&by_class[1]),
        y_left_band: length_in(&by_class[1], &ConvexRegion::from_polygon(&regions.u_left())),
        y_right_band: length_in(&by_class[1], &ConvexRegion::from_polygon(&regions.u_right())),
        z_total: total(&by_class[2]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{imperfect_four_direction, known_barrier, BarrierKind};
    use crate::geometry::EPS_GEO;

    const PAPER_W: f64 = 0.1793;
    const PAPER_PHI: f64 = 1.5589 * std::f64::consts::PI / 180.0;

    #[test]
    fn partition_areas_sum_to_one() {
        for w in [0.05, 0.1793, 0.33, 0.49] {
            let p = build_partition(w).unwrap();
            assert!((p.total_area() - 1.0).abs() < 1e-12, "w = {w}");
            assert_eq!(p.regions().len(), 13);
        }
        assert!(build_partition(0.0).is_err());
        assert!(build_partition(0.5).is_err());
    }

    #[test]
    fn partition_height_formula() {
        let p = build_partition(PAPER_W).unwrap();
        let expected = (PAPER_W / 2.0) / (PAPER_W * PAPER_W + 0.25).sqrt();
        assert!((p.h - expected).abs() < 1e-15);
        assert!((p.psi - (2.0 * PAPER_W).atan()).abs() < 1e-15);
    }

    #[test]
    fn two_diagonals_decompose_to_z_mass() {
        let p = build_partition(PAPER_W).unwrap();
        let b = known_barrier(BarrierKind::TwoDiagonals).barrier;
        let v = decompose(&b, &p, PAPER_PHI, true).unwrap();
        assert!((v.class_total(2) - 2.0 * 2.0f64.sqrt()).abs() < 1e-9);
        assert!(v.class_total(0) < 1e-12);
        assert!(v.class_total(1) < 1e-12);
        // diagonals only touch the A/B triangles at single points
        for r in 0..4 {
            assert!(v.get(2, IDX_A1 + r) < 1e-9);
            assert!(v.get(2, IDX_B1 + r) < 1e-9);
        }
    }

    #[test]
    fn midline_segment_lies_in_central_octagon() {
        let p = build_partition(PAPER_W).unwrap();
        let b = Barrier::new(vec![
            Segment::new(Point::new(0.0, 0.5), Point::new(1.0, 0.5)).unwrap(),
        ])
        .unwrap();
        let v = decompose(&b, &p, PAPER_PHI, true).unwrap();
        assert!((v.sum() - 1.0).abs() < 1e-9);
        assert!((v.get(0, IDX_C0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn conjectured_optimal_total_is_preserved() {
        let p = build_partition(PAPER_W).unwrap();
        let nb = known_barrier(BarrierKind::ConjecturedOptimal);
        let v = decompose(&nb.barrier, &p, PAPER_PHI, true).unwrap();
        assert!((v.sum() - nb.closed_form_length).abs() < 1e-9);
    }

    #[test]
    fn decompose_sum_matches_clipped_length_on_random_segments() {
        let p = build_partition(0.21).unwrap();
        let mut state = 88172645463325252u64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let u = ConvexRegion::from_polygon(&ConvexPolygon::unit_square());
        for _ in 0..500 {
            let a = Point::new(rnd() * 3.0 - 1.0, rnd() * 3.0 - 1.0);
            let b = Point::new(rnd() * 3.0 - 1.0, rnd() * 3.0 - 1.0);
            let Ok(s) = Segment::new(a, b) else { continue };
            let barrier = Barrier::new(vec![s]).unwrap();
            let v = decompose(&barrier, &p, 0.02, false).unwrap();
            let expect = u.clipped_length(&s);
            assert!(
                (v.sum() - expect).abs() < 1e-9,
                "sum {} vs clipped {}",
                v.sum(),
                expect
            );
        }
    }

    #[test]
    fn symmetry_equivariance() {
        let p = build_partition(PAPER_W).unwrap();
        let nb = known_barrier(BarrierKind::ConjecturedOptimal);
        let v0 = decompose(&nb.barrier, &p, PAPER_PHI, true).unwrap();
        for g in SquareSymmetry::ALL {
            let transformed = apply_symmetry(&nb.barrier, g);
            let v1 = decompose(&transformed, &p, PAPER_PHI, true).unwrap();
            let perm = region_permutation(&p, g);
            for class in 0..3 {
                let target_class = if g.swaps_classes() && class < 2 {
                    1 - class
                } else {
                    class
                };
                for r in 0..REGION_COUNT {
                    let got = v1.get(target_class, perm[r]);
                    let expect = v0.get(class, r);
                    assert!(
                        (got - expect).abs() < 1e-9,
                        "g = {g:?}, class {class}, region {}",
                        REGION_NAMES[r]
                    );
                }
            }
        }
    }

    #[test]
    fn horizontal_flip_moves_x_mass_to_y() {
        let b = Barrier::new(vec![
            Segment::new(Point::new(0.1, 0.3), Point::new(0.9, 0.3)).unwrap(),
        ])
        .unwrap();
        let p = build_partition(PAPER_W).unwrap();
        let v0 = decompose(&b, &p, PAPER_PHI, true).unwrap();
        let flipped = apply_symmetry(&b, SquareSymmetry::FlipD1);
        let v1 = decompose(&flipped, &p, PAPER_PHI, true).unwrap();
        assert!((v0.class_total(0) - 0.8).abs() < 1e-12);
        assert!(v0.class_total(1) < 1e-12);
        assert!((v1.class_total(1) - 0.8).abs() < 1e-12);
        assert!(v1.class_total(0) < 1e-12);
    }

    #[test]
    fn identity_symmetry_is_noop() {
        let nb = known_barrier(BarrierKind::SteinerCorners);
        let same = apply_symmetry(&nb.barrier, SquareSymmetry::Identity);
        assert_eq!(nb.barrier.segments(), same.segments());
    }

    #[test]
    fn thm1_region_containments() {
        let r = RegionsThm1::default();
        assert!(r.u().contains_polygon(&r.u1(), EPS_GEO));
        assert!(r.u2().contains_polygon(&r.u(), EPS_GEO));
        assert!(r.u3().contains_polygon(&r.u2(), EPS_GEO));
        assert!(r.u().contains_polygon(&r.q1(), EPS_GEO));
        assert!(r.q2().contains_polygon(&r.u(), EPS_GEO));
    }

    #[test]
    fn conjectured_optimal_fails_length_hypothesis() {
        let r = RegionsThm1::default();
        let nb = known_barrier(BarrierKind::ConjecturedOptimal);
        let report = evaluate_thm1_lemmas(&nb.barrier, &r, None, None);
        assert!(!report.hypothesis_applicable);
        assert!(report.total_length > 2.0 + r.delta);
    }

    #[test]
    fn heavy_z_barrier_violates_class_bound() {
        let r = RegionsThm1::default();
        let b = known_barrier(BarrierKind::TwoDiagonals).barrier;
        let report = evaluate_thm1_lemmas(&b, &r, None, None);
        let lemma3 = report
            .checks
            .iter()
            .find(|c| c.name == "near-diagonal-mass")
            .unwrap();
        assert!(!lemma3.satisfied);
        assert!(lemma3.lhs > 1.0);
        assert!((lemma3.rhs - 2e-4).abs() < 1e-12);
    }

    #[test]
    fn imperfect_structure_satisfies_all_lemmas() {
        // total length exactly 2, perfect band weights: every structural
        // inequality holds, so only a witness can reveal invalidity
        let r = RegionsThm1::default();
        let nb = imperfect_four_direction();
        let report = evaluate_thm1_lemmas(&nb.barrier, &r, None, None);
        assert!(report.hypothesis_applicable);
        for c in &report.checks {
            assert!(c.satisfied, "{}: {} vs {}", c.name, c.lhs, c.rhs);
        }
    }

    #[test]
    fn wlog_normalization_always_succeeds() {
        let p = build_partition(PAPER_W).unwrap();
        // X-heavy on top, Y-heavy on right: both orderings start violated
        let b = Barrier::new(vec![
            Segment::new(Point::new(0.2, 0.97), Point::new(0.45, 0.97)).unwrap(),
            Segment::new(Point::new(0.97, 0.2), Point::new(0.97, 0.45)).unwrap(),
        ])
        .unwrap();
        let (norm, g) = normalize_wlog(&b, &p, PAPER_PHI).unwrap();
        assert_ne!(g, SquareSymmetry::Identity);
        let v = decompose(&norm, &p, PAPER_PHI, true).unwrap();
        let xa12 = v.get(0, IDX_A1) + v.get(0, IDX_A2);
        let xa34 = v.get(0, IDX_A3) + v.get(0, IDX_A4);
        let yb14 = v.get(1, IDX_B1) + v.get(1, IDX_B4);
        let yb23 = v.get(1, IDX_B2) + v.get(1, IDX_B3);
        assert!(xa12 >= xa34 - 1e-12);
        assert!(yb14 >= yb23 - 1e-12);
    }
}
