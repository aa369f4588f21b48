//! Combinatorial disk model. Each marked point gets a small disk whose boundary circle is
//! divided into `grid * RES` ticks; every curve through the point leaves two rays on grid
//! ticks and offsets by a band count land strictly between them.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::curves::{passage_segments, CurveLabel, CurveSystem, PointId};

pub const RES: i64 = 1000;

/// A tick on the boundary circle of one disk.
pub type Anchor = (PointId, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RayEnd {
    Tail,
    Head,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ray {
    pub label: CurveLabel,
    /// odd segment ending on this ray; 0 for barrier rays
    pub segment: usize,
    pub end: RayEnd,
    pub tick: i64,
    pub barrier: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Hand {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind")]
pub enum Track {
    /// odd segment of a curve, in its current orientation
    Segment { curve: CurveLabel, index: usize },
    /// strip curve between passage `arc` and the next one
    Strip { curve: CurveLabel, arc: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Chord {
    pub point: PointId,
    pub from: i64,
    pub to: i64,
    pub ccw: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Connector {
    pub track: Track,
    /// side relative to the track's own direction
    pub hand: Hand,
    pub band: i64,
    pub forward: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "piece")]
pub enum Piece {
    Chord(Chord),
    Connector(Connector),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("track {0:?} does not exist")]
    UnknownTrack(Track),
    #[error("piece {0} does not meet its successor")]
    Gap(usize),
    #[error("pieces must alternate chords and connectors")]
    Alternation,
    #[error("chord at {0:?} crosses a strip curve")]
    Barrier(PointId),
    #[error("two arcs end at tick {1} of {0:?}")]
    SharedEndpoint(PointId, i64),
    #[error("two chords at {0:?} cross")]
    Interleaved(PointId),
    #[error("two connectors share track {0:?}")]
    Collision(Track),
    #[error("band {0} is out of range")]
    Band(i64),
}

pub fn turn(sys: &CurveSystem, point: PointId) -> i64 {
    sys.point(point).grid * RES
}

fn tick_of(sys: &CurveSystem, point: PointId, angle: crate::rational::Rational) -> i64 {
    let t = angle * turn(sys, point);
    assert!(t.is_integer(), "angle off grid");
    t.to_integer()
}

pub fn out_tick(sys: &CurveSystem, curve: usize, idx: usize) -> i64 {
    let c = &sys.curves[curve];
    tick_of(sys, c.itinerary[idx].point, c.current_angle(idx))
}

pub fn in_tick(sys: &CurveSystem, curve: usize, idx: usize) -> i64 {
    let point = sys.curves[curve].itinerary[idx].point;
    (out_tick(sys, curve, idx) + turn(sys, point) / 2).rem_euclid(turn(sys, point))
}

fn base_index(sys: &CurveSystem, label: CurveLabel) -> Option<usize> {
    sys.curves
        .iter()
        .position(|c| c.label == label && c.t.unwrap_or(1) == 1 && c.s.unwrap_or(1) == 1)
}

pub fn rays_at(sys: &CurveSystem, point: PointId) -> Vec<Ray> {
    let mut out = Vec::new();
    for ci in sys.curves_through(point) {
        let c = &sys.curves[ci];
        if base_index(sys, c.label) != Some(ci) {
            continue;
        }
        let idx = c.passage_at(point).expect("passes point");
        let barrier = sys.is_strip(c.label);
        let segs = passage_segments(sys, ci, idx);
        let (tail, head) = if barrier { (0, 0) } else { (segs.leaving, segs.arriving) };
        out.push(Ray { label: c.label, segment: tail, end: RayEnd::Tail, tick: out_tick(sys, ci, idx), barrier });
        out.push(Ray { label: c.label, segment: head, end: RayEnd::Head, tick: in_tick(sys, ci, idx), barrier });
    }
    out.sort_by_key(|r| r.tick);
    out
}

/// (start point, start ray tick, end point, end ray tick) of a track in its own direction.
pub fn track_ends(sys: &CurveSystem, track: Track) -> Result<(PointId, i64, PointId, i64), GeometryError> {
    let bad = GeometryError::UnknownTrack(track);
    match track {
        Track::Segment { curve, index } => {
            let ci = base_index(sys, curve).ok_or(bad.clone())?;
            let c = &sys.curves[ci];
            let mut start = None;
            let mut end = None;
            for idx in 0..c.itinerary.len() {
                let segs = passage_segments(sys, ci, idx);
                if segs.leaving == index {
                    start = Some((c.itinerary[idx].point, out_tick(sys, ci, idx)));
                }
                if segs.arriving == index {
                    end = Some((c.itinerary[idx].point, in_tick(sys, ci, idx)));
                }
            }
            let ((p0, t0), (p1, t1)) = (start.ok_or(bad.clone())?, end.ok_or(bad)?);
            Ok((p0, t0, p1, t1))
        }
        Track::Strip { curve, arc } => {
            let ci = base_index(sys, curve).ok_or(bad.clone())?;
            let len = sys.curves[ci].itinerary.len();
            if arc >= len {
                return Err(bad);
            }
            let next = (arc + 1) % len;
            Ok((
                sys.curves[ci].itinerary[arc].point,
                out_tick(sys, ci, arc),
                sys.curves[ci].itinerary[next].point,
                in_tick(sys, ci, next),
            ))
        }
    }
}

impl Connector {
    /// Departure and arrival (point, tick) in the connector's travel direction.
    pub fn ends(&self, sys: &CurveSystem) -> Result<(Anchor, Anchor), GeometryError> {
        let (p0, t0, p1, t1) = track_ends(sys, self.track)?;
        let b = match self.hand {
            Hand::Left => self.band,
            Hand::Right => -self.band,
        };
        let start = (p0, (t0 + b).rem_euclid(turn(sys, p0)));
        let end = (p1, (t1 - b).rem_euclid(turn(sys, p1)));
        Ok(if self.forward { (start, end) } else { (end, start) })
    }
}

impl Chord {
    pub fn sweeps(&self, tick: i64, turn: i64) -> bool {
        let (lo, span) = if self.ccw {
            (self.from, (self.to - self.from).rem_euclid(turn))
        } else {
            (self.to, (self.from - self.to).rem_euclid(turn))
        };
        let d = (tick - lo).rem_euclid(turn);
        d > 0 && d < span
    }

    /// Swept arc as (start, length) in counterclockwise ticks.
    pub fn arc(&self, turn: i64) -> (i64, i64) {
        if self.ccw {
            (self.from, (self.to - self.from).rem_euclid(turn))
        } else {
            (self.to, (self.from - self.to).rem_euclid(turn))
        }
    }

    pub fn reversed(&self) -> Chord {
        Chord { point: self.point, from: self.to, to: self.from, ccw: !self.ccw }
    }
}

pub fn crossing_sign(ccw: bool, end: RayEnd) -> i8 {
    match (ccw, end) {
        (true, RayEnd::Tail) | (false, RayEnd::Head) => -1,
        (true, RayEnd::Head) | (false, RayEnd::Tail) => 1,
    }
}

/// Signed crossings (curve, odd segment, sign) of a chord with the curve system.
pub fn chord_crossings(sys: &CurveSystem, chord: &Chord) -> Result<Vec<(CurveLabel, usize, i8)>, GeometryError> {
    let t = turn(sys, chord.point);
    let mut out = Vec::new();
    for ray in rays_at(sys, chord.point) {
        if chord.sweeps(ray.tick, t) {
            if ray.barrier {
                return Err(GeometryError::Barrier(chord.point));
            }
            out.push((ray.label, ray.segment, crossing_sign(chord.ccw, ray.end)));
        }
    }
    Ok(out)
}

pub fn reverse(pieces: &[Piece]) -> Vec<Piece> {
    pieces
        .iter()
        .rev()
        .map(|p| match p {
            Piece::Chord(c) => Piece::Chord(c.reversed()),
            Piece::Connector(k) => Piece::Connector(Connector { forward: !k.forward, ..*k }),
        })
        .collect()
}

/// Every chord must hand over to a connector at the same tick, cyclically.
pub fn check_closure(sys: &CurveSystem, pieces: &[Piece]) -> Result<(), GeometryError> {
    let n = pieces.len();
    if n < 2 || n % 2 == 1 {
        return Err(GeometryError::Alternation);
    }
    for w in 0..n {
        let next = (w + 1) % n;
        let meet = match (&pieces[w], &pieces[next]) {
            (Piece::Chord(c), Piece::Connector(k)) => k.ends(sys)?.0 == (c.point, c.to),
            (Piece::Connector(k), Piece::Chord(c)) => k.ends(sys)?.1 == (c.point, c.from),
            _ => return Err(GeometryError::Alternation),
        };
        if !meet {
            return Err(GeometryError::Gap(w));
        }
    }
    Ok(())
}

fn nested_or_disjoint(a: (i64, i64), b: (i64, i64), turn: i64) -> bool {
    let inside = |x: i64, (s, l): (i64, i64)| {
        let d = (x - s).rem_euclid(turn);
        d > 0 && d < l
    };
    let (a0, a1) = (a.0, (a.0 + a.1).rem_euclid(turn));
    inside(a0, b) == inside(a1, b)
}

/// Pairwise disjointness of a family of closed piece chains lying in the complement of the
/// strip curves.
pub fn check_disjoint(sys: &CurveSystem, curves: &[&[Piece]]) -> Result<(), GeometryError> {
    let mut chords: BTreeMap<PointId, Vec<Chord>> = BTreeMap::new();
    let mut connectors = BTreeSet::new();
    for pieces in curves {
        for p in pieces.iter() {
            match p {
                Piece::Chord(c) => chords.entry(c.point).or_default().push(*c),
                Piece::Connector(k) => {
                    if k.band <= 0 || k.band >= RES / 2 {
                        return Err(GeometryError::Band(k.band));
                    }
                    if !connectors.insert((k.track, k.hand, k.band)) {
                        return Err(GeometryError::Collision(k.track));
                    }
                }
            }
        }
    }
    for (&point, list) in &chords {
        let t = turn(sys, point);
        let mut ends = BTreeSet::new();
        for c in list {
            chord_crossings(sys, c)?;
            for e in [c.from, c.to] {
                if !ends.insert(e.rem_euclid(t)) {
                    return Err(GeometryError::SharedEndpoint(point, e));
                }
            }
        }
        for (a, b) in list.iter().tuple_combinations() {
            if !nested_or_disjoint(a.arc(t), b.arc(t), t) {
                return Err(GeometryError::Interleaved(point));
            }
        }
    }
    Ok(())
}
