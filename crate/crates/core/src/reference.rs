use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::curves::{decompose_segments, CurveError, CurveLabel, CurveSystem, Endpoint, Params, PointId, Region, SegmentRecord, Side};
use crate::geometry::{
    check_closure, check_disjoint, chord_crossings, reverse, track_ends, turn, Chord, Connector, GeometryError, Hand, Piece, Track,
    RES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SegmentRef {
    pub curve: CurveLabel,
    pub index: usize,
}

impl SegmentRef {
    pub fn new(i: usize, j: usize, index: usize) -> Self {
        SegmentRef { curve: CurveLabel::new(i, j), index }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceArc {
    pub name: String,
    pub piece: Piece,
    pub crossings: Vec<(SegmentRef, i8)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "shape")]
pub enum Shape {
    /// pushed off a strip curve onto one boundary side of its F2 region
    Parallel { strip: CurveLabel, region: usize, side: Side, orientation: i8 },
    Assembled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceCurve {
    pub label: String,
    pub shape: Shape,
    pub arcs: Vec<ReferenceArc>,
}

impl ReferenceCurve {
    pub fn pieces(&self) -> Vec<Piece> {
        self.arcs.iter().map(|a| a.piece).collect()
    }

    pub fn crossings(&self) -> impl Iterator<Item = &(SegmentRef, i8)> {
        self.arcs.iter().flat_map(|a| a.crossings.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceSystem {
    pub params: Params,
    pub curves: Vec<ReferenceCurve>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReferenceError {
    #[error("curve system is not in the expected case")]
    WrongCase,
    #[error("reference curve {0} does not close up: {1}")]
    Open(String, GeometryError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

fn finish(sys: &CurveSystem, label: String, shape: Shape, pieces: Vec<(String, Piece)>) -> Result<ReferenceCurve, ReferenceError> {
    let raw: Vec<Piece> = pieces.iter().map(|p| p.1).collect();
    check_closure(sys, &raw).map_err(|e| ReferenceError::Open(label.clone(), e))?;
    let mut arcs = Vec::new();
    for (name, piece) in pieces {
        let crossings = match &piece {
            Piece::Chord(c) => chord_crossings(sys, c)?
                .into_iter()
                .map(|(curve, index, sign)| (SegmentRef { curve, index }, sign))
                .collect(),
            Piece::Connector(_) => Vec::new(),
        };
        arcs.push(ReferenceArc { name, piece, crossings });
    }
    Ok(ReferenceCurve { label, shape, arcs })
}

/// Same curve with the opposite orientation.
pub fn reversed_curve(sys: &CurveSystem, curve: &ReferenceCurve) -> Result<ReferenceCurve, ReferenceError> {
    let names: Vec<String> = curve.arcs.iter().rev().map(|a| a.name.clone()).collect();
    let pieces = reverse(&curve.pieces());
    let shape = match curve.shape {
        Shape::Parallel { strip, region, side, orientation } => Shape::Parallel { strip, region, side, orientation: -orientation },
        s => s,
    };
    finish(sys, curve.label.clone(), shape, names.into_iter().zip(pieces).collect())
}

fn strip_index(sys: &CurveSystem, label: CurveLabel) -> usize {
    sys.index_of(label).expect("strip curve")
}

/// Curve parallel to a strip curve on side `side` (β− is on its left), oriented along the
/// strip when `orientation` is +1.
pub fn parallel_curve(
    sys: &CurveSystem,
    label: String,
    strip: CurveLabel,
    side: Side,
    band: i64,
    orientation: i8,
) -> Result<ReferenceCurve, ReferenceError> {
    let ci = strip_index(sys, strip);
    let len = sys.curves[ci].itinerary.len();
    let hand = match side {
        Side::Minus => Hand::Left,
        Side::Plus => Hand::Right,
    };
    let mut pieces = Vec::new();
    for arc in 0..len {
        let point = sys.curves[ci].itinerary[arc].point;
        let t = turn(sys, point);
        let out = crate::geometry::out_tick(sys, ci, arc);
        let inn = crate::geometry::in_tick(sys, ci, arc);
        let chord = match hand {
            Hand::Left => Chord { point, from: (inn - band).rem_euclid(t), to: (out + band).rem_euclid(t), ccw: false },
            Hand::Right => Chord { point, from: (inn + band).rem_euclid(t), to: (out - band).rem_euclid(t), ccw: true },
        };
        pieces.push((format!("{label}@{point:?}"), Piece::Chord(chord)));
        pieces.push((
            format!("{label}~{arc}"),
            Piece::Connector(Connector { track: Track::Strip { curve: strip, arc }, hand, band, forward: true }),
        ));
    }
    let region = sys.region_at(sys.curves[ci].itinerary[0].point).unwrap_or(1);
    let shape = Shape::Parallel { strip, region, side, orientation: 1 };
    let curve = finish(sys, label, shape, pieces)?;
    if orientation < 0 {
        reversed_curve(sys, &curve)
    } else {
        Ok(curve)
    }
}

fn chord(point: PointId, from: i64, to: i64, ccw: bool, t: i64) -> Piece {
    Piece::Chord(Chord { point, from: from.rem_euclid(t), to: to.rem_euclid(t), ccw })
}

fn conn(track: Track, hand: Hand, band: i64, forward: bool) -> Piece {
    Piece::Connector(Connector { track, hand, band, forward })
}

fn seg(i: usize, j: usize, index: usize) -> Track {
    Track::Segment { curve: CurveLabel::new(i, j), index }
}

/// l_i for 2 ≤ i ≤ (r+1)/2: a loop through the inner disks of sheets i and r+2−i and four
/// outer disks, following the arc chain a, b, c, d, e, f, g.
fn case1_loop(sys: &CurveSystem, i: usize, p: usize, r: usize, k: usize, n: usize) -> Result<ReferenceCurve, ReferenceError> {
    let (pp, nn) = (p as i64, (p * r) as i64);
    let h = p.div_ceil(2);
    let i2 = r + 2 - i;
    let io = i + (r - 1) / 2;
    let u = |a: usize, b: usize| ((a - 1) + r * (b - 1)) as i64;
    let (ui, u2) = (u(io, p), u(i2, p));
    let ti = 2 * pp * RES;
    let to = 2 * nn * RES;
    let tk = |pos: i64, eps: i64| pos * RES + eps;
    let inner = |s: usize, l: usize| PointId::Inner { i: s, s: l };
    let outer = |l: usize| PointId::Outer { l };
    let strip = CurveLabel::new(1, 1);
    let band = i as i64;
    let mut v: Vec<(String, Piece)> = Vec::new();
    let mut push = |name: String, piece: Piece| v.push((name, piece));

    for l in (1..=k).rev() {
        push(format!("ab[{i},{l}]"), chord(inner(i, l), tk(pp - 1, 1), tk(2 * pp - 1, 1), false, ti));
        if l >= 2 {
            push(format!("b[{i},{l}]"), conn(seg(i, h, 2 * l - 1), Hand::Left, 1, true));
            push(format!("c[{i},{}]", l - 1), chord(inner(i, l - 1), tk(pp - 1, -1), tk(pp - 3, 1), false, ti));
            push(format!("cd[{i},{l}]"), conn(seg(i, (p - 1) / 2, 2 * l - 1), Hand::Right, 1, false));
            push(format!("d[{i},{l}]"), chord(inner(i, l), tk(2 * pp - 3, -1), tk(2 * pp - 1, -1), true, ti));
            push(format!("da[{i},{l}]"), conn(seg(i, h, 2 * l - 1), Hand::Right, 1, true));
        } else {
            push(format!("b[{i},1]"), conn(seg(i, h, 1), Hand::Left, 1, true));
        }
    }
    push(format!("e[{i},{n}]"), chord(outer(n), tk(2 * ui - nn + 1, -1), tk(2 * ui - nn, -1), false, to));
    push(format!("ef[{i}]"), conn(seg(io, p, 2 * n - 1), Hand::Left, 1, false));
    push(format!("f[{i},{}]", n - 1), chord(outer(n - 1), tk(2 * ui, 1), tk(2 * nn, -(band - 1)), true, to));
    push(format!("fg[{i}]"), conn(Track::Strip { curve: strip, arc: n - 2 }, Hand::Right, band - 1, true));
    push(format!("g[{i2},{n}]"), chord(outer(n), tk(nn, band - 1), tk(2 * u2, -1), true, to));
    push(format!("ga[{i2}]"), conn(seg(i2, p, 1), Hand::Right, 1, true));
    for l in 1..=k {
        push(format!("ab[{i2},{l}]"), chord(inner(i2, l), tk(pp - 2, 1), tk(2 * pp - 2, 1), false, ti));
        if l < k {
            push(format!("b[{i2},{l}]"), conn(seg(i2, p, 2 * l + 1), Hand::Left, 1, true));
            push(format!("c[{i2},{}]", l + 1), chord(inner(i2, l + 1), tk(pp - 2, -1), tk(pp - 4, 1), false, ti));
            push(format!("cd[{i2},{l}]"), conn(seg(i2, p - 1, 2 * l + 1), Hand::Right, 1, false));
            push(format!("d[{i2},{l}]"), chord(inner(i2, l), tk(2 * pp - 4, -1), tk(2 * pp - 2, -1), true, ti));
            push(format!("da[{i2},{l}]"), conn(seg(i2, p, 2 * l + 1), Hand::Right, 1, true));
        } else {
            push(format!("b[{i2},{k}]"), conn(seg(i2, p, 2 * k + 1), Hand::Left, 1, true));
        }
    }
    push(format!("g[{i2},{}]", k + 1), chord(outer(k + 1), tk(2 * u2 - nn, -1), tk(0, band), false, to));
    push(format!("gf[{i}]"), conn(Track::Strip { curve: strip, arc: k }, Hand::Left, band, true));
    push(format!("f[{i},{}]", k + 2), chord(outer(k + 2), tk(nn, -band), tk(2 * ui - nn, 1), false, to));
    push(format!("fe[{i}]"), conn(seg(io, p, 2 * k + 3), Hand::Right, 1, false));
    push(format!("e[{i},{}]", k + 1), chord(outer(k + 1), tk(2 * ui, -1), tk(2 * ui + 1, -1), true, to));
    push(format!("ea[{i}]"), conn(seg(i, h, 2 * k + 1), Hand::Right, 1, true));
    finish(sys, format!("l{i}"), Shape::Assembled, v)
}

pub fn build_case1(sys: &CurveSystem) -> Result<ReferenceSystem, ReferenceError> {
    let Params::CaseI { p, r, k, n } = sys.params else { return Err(ReferenceError::WrongCase) };
    let mut curves = vec![parallel_curve(sys, "l1".into(), CurveLabel::new(1, 1), Side::Minus, 1, 1)?];
    for i in 2..=r.div_ceil(2) {
        curves.push(case1_loop(sys, i, p, r, k, n)?);
    }
    Ok(ReferenceSystem { params: sys.params, curves })
}

/// Two clockwise chords at the ends of a pair of parallel tracks, joined along them. The
/// chord at the start crosses every ray between the two tracks' starting rays.
fn hook(sys: &CurveSystem, label: String, tracks: [CurveLabel; 2], index: usize) -> Result<ReferenceCurve, ReferenceError> {
    let ends = tracks.map(|c| track_ends(sys, Track::Segment { curve: c, index }));
    let [(p0, a0, p1, a1), (_, b0, _, b1)] = [ends[0].clone()?, ends[1].clone()?];
    let t0 = turn(sys, p0);
    let strip = sys.strip_at(p0).ok_or(ReferenceError::WrongCase)?;
    let si = strip_index(sys, strip);
    let sidx = sys.curves[si].passage_at(p0).ok_or(ReferenceError::WrongCase)?;
    let z = [crate::geometry::out_tick(sys, si, sidx), crate::geometry::in_tick(sys, si, sidx)]
        .into_iter()
        .find(|&z| (a0 - z).rem_euclid(t0) < t0 / 2 && (b0 - z).rem_euclid(t0) < t0 / 2)
        .ok_or(ReferenceError::WrongCase)?;
    let ((lo, lo_end, lo_track), (hi, hi_end, hi_track)) = if (a0 - z).rem_euclid(t0) <= (b0 - z).rem_euclid(t0) {
        ((a0, a1, tracks[0]), (b0, b1, tracks[1]))
    } else {
        ((b0, b1, tracks[1]), (a0, a1, tracks[0]))
    };
    let t1 = turn(sys, p1);
    let pieces = vec![
        (format!("a[{label}]"), chord(p0, hi + 1, lo - 1, false, t0)),
        (format!("{label}>"), conn(Track::Segment { curve: lo_track, index }, Hand::Right, 1, true)),
        (format!("b[{label}]"), chord(p1, lo_end + 1, hi_end - 1, false, t1)),
        (format!("{label}<"), conn(Track::Segment { curve: hi_track, index }, Hand::Left, 1, false)),
    ];
    finish(sys, label, Shape::Assembled, pieces)
}

pub fn build_case2(sys: &CurveSystem) -> Result<ReferenceSystem, ReferenceError> {
    let Params::CaseII { m, n } = sys.params else { return Err(ReferenceError::WrongCase) };
    let strip = |t: usize| CurveLabel::new(2 * t - 1, 1);
    let mut curves = Vec::new();
    if n % 4 == 0 {
        for t in 1..=n / 2 {
            let (side, w) = if t % 2 == 1 { (Side::Minus, 1) } else { (Side::Plus, -1) };
            curves.push(parallel_curve(sys, format!("l{t}"), strip(t), side, 1, w)?);
        }
        return Ok(ReferenceSystem { params: sys.params, curves });
    }
    let big_i = (n + 2) / 4;
    for t in (1..=n / 2).filter(|&t| t != big_i) {
        let first = (t < big_i && t % 2 == 1) || (t > big_i && t % 2 == 0);
        let (side, w) = if first { (Side::Minus, 1) } else { (Side::Plus, -1) };
        curves.push(parallel_curve(sys, format!("l{t}"), strip(t), side, 1, w)?);
    }
    let (j3, j4) = if big_i % 2 == 0 { (big_i - 1, big_i + 1) } else { (big_i + 1, big_i - 1) };
    curves.push(parallel_curve(sys, format!("l{j3},1"), strip(j3), Side::Plus, 1, 1)?);
    curves.push(parallel_curve(sys, format!("l{j4},1"), strip(j4), Side::Minus, 1, -1)?);
    let sense = |c: usize| sys.point(PointId::Cone { c }).rotation_sense;
    let pick = |j: usize| if j <= m { j } else { 1 };
    let j1 = pick(if sense(2 * big_i - 1) > 0 { m.div_ceil(2) + 1 } else { m.div_ceil(2) });
    let j2 = pick(if sense(2 * big_i) > 0 { m.div_ceil(2) } else { m.div_ceil(2) + 1 });
    let e = 2 * big_i - 2;
    curves.push(hook(sys, format!("l{big_i}"), [CurveLabel::new(e, 1), CurveLabel::new(e, j1)], 1)?);
    curves.push(hook(sys, format!("l{big_i},1"), [CurveLabel::new(2 * big_i, 1), CurveLabel::new(2 * big_i, j2)], 3)?);
    Ok(ReferenceSystem { params: sys.params, curves })
}

pub fn build(sys: &CurveSystem) -> Result<ReferenceSystem, ReferenceError> {
    match sys.params {
        Params::CaseI { .. } => build_case1(sys),
        Params::CaseII { .. } => build_case2(sys),
    }
}

/// Signed count of crossings of one odd segment with a set of reference curves.
pub fn total_intersection(segment: SegmentRef, refsys: &ReferenceSystem) -> i64 {
    refsys
        .curves
        .iter()
        .flat_map(|c| c.crossings())
        .filter(|(s, _)| *s == segment)
        .map(|&(_, sign)| sign as i64)
        .sum()
}

/// Contribution of parallel-type curves recomputed from endpoint sides alone.
pub fn side_rule_total(record: &SegmentRecord, refsys: &ReferenceSystem) -> i64 {
    let mut total = 0;
    for c in &refsys.curves {
        let Shape::Parallel { region, side, orientation, .. } = c.shape else { continue };
        for (end, e) in [(record.tail, -1), (record.head, 1)] {
            if end == (Endpoint::Boundary { region, side }) {
                total += side.sigma() as i64 * orientation as i64 * e;
            }
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativityReport {
    pub columns: Vec<String>,
    pub rows: Vec<SegmentRef>,
    /// rows by columns
    pub matrix: Vec<Vec<i64>>,
    pub totals: Vec<i64>,
    pub verdict: bool,
}

pub fn odd_segments(sys: &CurveSystem) -> Result<Vec<SegmentRecord>, CurveError> {
    Ok(decompose_segments(sys)?.into_iter().filter(|s| s.region == Region::F1).collect())
}

pub fn verify_negativity(sys: &CurveSystem, refsys: &ReferenceSystem) -> Result<NegativityReport, ReferenceError> {
    let rows: Vec<SegmentRef> = odd_segments(sys)?.iter().map(|s| SegmentRef { curve: s.owner, index: s.index }).collect();
    let pos: BTreeMap<SegmentRef, usize> = rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let mut matrix = vec![vec![0i64; refsys.curves.len()]; rows.len()];
    for (ci, c) in refsys.curves.iter().enumerate() {
        for (s, sign) in c.crossings() {
            if let Some(&ri) = pos.get(s) {
                matrix[ri][ci] += *sign as i64;
            }
        }
    }
    let totals: Vec<i64> = matrix.iter().map(|r| r.iter().sum()).collect();
    let verdict = !totals.is_empty() && totals.iter().all(|&t| t < 0);
    Ok(NegativityReport { columns: refsys.curves.iter().map(|c| c.label.clone()).collect(), rows, matrix, totals, verdict })
}

pub fn disjointness(sys: &CurveSystem, refsys: &ReferenceSystem) -> Result<(), GeometryError> {
    let pieces: Vec<Vec<Piece>> = refsys.curves.iter().map(|c| c.pieces()).collect();
    let slices: Vec<&[Piece]> = pieces.iter().map(|v| v.as_slice()).collect();
    check_disjoint(sys, &slices)
}

pub fn check_disjointness(sys: &CurveSystem, refsys: &ReferenceSystem) -> bool {
    disjointness(sys, refsys).is_ok()
}
