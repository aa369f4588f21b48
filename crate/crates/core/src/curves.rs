use std::collections::BTreeMap;

use itertools::Itertools;
use num::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cover::{case2_signs, CoverTower};
use crate::rational::{mod_one, q, ser_q, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PointId {
    /// ĉ_{i,s}: lift of the s-th p-order cone point on sheet i
    Inner { i: usize, s: usize },
    /// ĉ_l for l > k
    Outer { l: usize },
    /// ĉ_c in the uniform even case
    Cone { c: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedPoint {
    pub id: PointId,
    #[serde(serialize_with = "ser_q")]
    pub rotation_unit: Rational,
    pub rotation_sense: i8,
    /// ticks per turn; every ray at this point sits on a tick
    pub grid: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CurveLabel {
    pub i: usize,
    pub j: usize,
}

impl CurveLabel {
    pub fn new(i: usize, j: usize) -> Self {
        CurveLabel { i, j }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum Params {
    CaseI { p: usize, r: usize, k: usize, n: usize },
    CaseII { m: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Passage {
    pub point: PointId,
    /// tangent direction in the original orientation, in turns
    #[serde(serialize_with = "ser_q")]
    pub angle: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftedCurve {
    pub label: CurveLabel,
    pub t: Option<u8>,
    pub s: Option<u8>,
    pub flipped: bool,
    pub itinerary: Vec<Passage>,
}

impl LiftedCurve {
    pub fn orientation_flag(&self) -> i8 {
        if self.flipped {
            -1
        } else {
            1
        }
    }

    pub fn current_angle(&self, idx: usize) -> Rational {
        let a = self.itinerary[idx].angle;
        if self.flipped {
            mod_one(a + q(1, 2))
        } else {
            a
        }
    }

    pub fn passage_at(&self, point: PointId) -> Option<usize> {
        self.itinerary.iter().position(|ps| ps.point == point)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("curves are tangent (angle 0 or 1/2 turn)")]
    Tangent,
    #[error("curve ({}, {}) needs opposite flips at two of its points", .0.i, .0.j)]
    Conflict(CurveLabel),
    #[error("labels are already doubled")]
    AlreadyDoubled,
    #[error("tower does not have the expected shape: {0}")]
    WrongTower(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveSystem {
    pub params: Params,
    pub points: Vec<MarkedPoint>,
    pub curves: Vec<LiftedCurve>,
    pub doubled: bool,
    /// K has two components: each annulus carries one singular point instead of two
    pub two_component: bool,
}

pub fn enumerate_case1(tower: &CoverTower) -> Result<CurveSystem, CurveError> {
    let (r, p) = (tower.degrees.0 as usize, tower.degrees.1 as usize);
    let orders = &tower.base.cone_orders;
    let n = orders.len();
    let k = orders.iter().take_while(|&&o| o as usize == p).count();
    if r < 3 || k == 0 || k == n || orders[k..].iter().any(|&o| o as usize != p * r) {
        return Err(CurveError::WrongTower(format!("orders {orders:?} with degrees {:?}", tower.degrees)));
    }
    Ok(case1_system(p, r, k, n))
}

pub fn case1_system(p: usize, r: usize, k: usize, n: usize) -> CurveSystem {
    let big = (p * r) as i64;
    let mut points = Vec::new();
    for i in 1..=r {
        for s in 1..=k {
            points.push(MarkedPoint {
                id: PointId::Inner { i, s },
                rotation_unit: q(1, p as i64),
                rotation_sense: 1,
                grid: 2 * p as i64,
            });
        }
    }
    for l in k + 1..=n {
        points.push(MarkedPoint {
            id: PointId::Outer { l },
            rotation_unit: q(1, big),
            rotation_sense: 1,
            grid: 2 * big,
        });
    }
    let mut curves = Vec::new();
    for i in 1..=r {
        for j in 1..=p {
            let mut itinerary = Vec::new();
            for s in 1..=k {
                itinerary.push(Passage { point: PointId::Inner { i, s }, angle: q(j as i64 - 1, p as i64) });
            }
            let u = (i - 1) + r * (j - 1);
            for l in k + 1..=n {
                itinerary.push(Passage { point: PointId::Outer { l }, angle: q(u as i64, big) });
            }
            curves.push(LiftedCurve { label: CurveLabel::new(i, j), t: None, s: None, flipped: false, itinerary });
        }
    }
    CurveSystem { params: Params::CaseI { p, r, k, n }, points, curves, doubled: false, two_component: false }
}

pub fn enumerate_case2(tower: &CoverTower) -> Result<CurveSystem, CurveError> {
    let m = tower.degrees.1 as usize;
    let n = tower.base.cone_orders.len();
    if tower.degrees.0 != 2 || tower.base.cone_orders.iter().any(|&o| o as usize != 2 * m) {
        return Err(CurveError::WrongTower(format!("degrees {:?}", tower.degrees)));
    }
    Ok(case2_system(m, n))
}

pub fn case2_system(m: usize, n: usize) -> CurveSystem {
    let signs = case2_signs(n);
    let grid = 4 * m as i64;
    let points = (1..=n)
        .map(|c| MarkedPoint {
            id: PointId::Cone { c },
            rotation_unit: q(1, m as i64),
            rotation_sense: signs[c - 1],
            grid,
        })
        .collect();
    let mut curves = Vec::new();
    for c in 1..=n {
        let next = c % n + 1;
        for j in 1..=m {
            let off = |sense: i8| q(sense as i64 * (j as i64 - 1), m as i64);
            let itinerary = vec![
                Passage { point: PointId::Cone { c }, angle: mod_one(off(signs[c - 1])) },
                Passage {
                    point: PointId::Cone { c: next },
                    angle: mod_one(q(-1, grid) + off(signs[next - 1])),
                },
            ];
            curves.push(LiftedCurve { label: CurveLabel::new(c, j), t: None, s: None, flipped: false, itinerary });
        }
    }
    CurveSystem { params: Params::CaseII { m, n }, points, curves, doubled: false, two_component: false }
}

/// +1 iff the counterclockwise angle from A to B lies in (1/2, 1) turn.
pub fn intersection_sign(angle: Rational) -> Result<i8, CurveError> {
    let a = mod_one(angle);
    let half = q(1, 2);
    if a.is_zero() || a == half {
        Err(CurveError::Tangent)
    } else if a > half {
        Ok(1)
    } else {
        Ok(-1)
    }
}

impl CurveSystem {
    pub fn with_two_component(mut self, flag: bool) -> Self {
        self.two_component = flag;
        self
    }

    pub fn singular_points_per_annulus(&self) -> usize {
        if self.two_component {
            1
        } else {
            2
        }
    }

    pub fn point(&self, id: PointId) -> &MarkedPoint {
        self.points.iter().find(|p| p.id == id).expect("known point")
    }

    pub fn index_of(&self, label: CurveLabel) -> Option<usize> {
        self.curves.iter().position(|c| c.label == label)
    }

    pub fn is_strip(&self, label: CurveLabel) -> bool {
        match self.params {
            Params::CaseI { .. } => label == CurveLabel::new(1, 1),
            Params::CaseII { .. } => label.j == 1 && label.i % 2 == 1,
        }
    }

    /// The reference curve whose neighbourhood is the F2 region at `point`, if any.
    pub fn strip_at(&self, point: PointId) -> Option<CurveLabel> {
        match point {
            PointId::Inner { i: 1, .. } | PointId::Outer { .. } => Some(CurveLabel::new(1, 1)),
            PointId::Inner { .. } => None,
            PointId::Cone { c } => Some(CurveLabel::new(if c % 2 == 1 { c } else { c - 1 }, 1)),
        }
    }

    pub fn region_at(&self, point: PointId) -> Option<usize> {
        match point {
            PointId::Cone { c } => Some(c.div_ceil(2)),
            _ => self.strip_at(point).map(|_| 1),
        }
    }

    pub fn regions(&self) -> usize {
        match self.params {
            Params::CaseI { .. } => 1,
            Params::CaseII { n, .. } => n / 2,
        }
    }

    pub fn angle_at(&self, curve: usize, point: PointId) -> Option<Rational> {
        let c = &self.curves[curve];
        c.passage_at(point).map(|idx| c.current_angle(idx))
    }

    /// Counterclockwise angle from curve `a` to curve `b` at `point`.
    pub fn angle_between(&self, a: usize, b: usize, point: PointId) -> Option<Rational> {
        Some(mod_one(self.angle_at(b, point)? - self.angle_at(a, point)?))
    }

    pub fn sign_at(&self, a: usize, b: usize, point: PointId) -> Option<Result<i8, CurveError>> {
        self.angle_between(a, b, point).map(intersection_sign)
    }

    /// Angle from the strip curve to `curve` at its `idx`-th passage.
    pub fn relative_angle(&self, curve: usize, idx: usize) -> Option<Rational> {
        let point = self.curves[curve].itinerary[idx].point;
        let strip = self.index_of(self.strip_at(point)?)?;
        self.angle_between(strip, curve, point)
    }

    pub fn curves_through(&self, point: PointId) -> Vec<usize> {
        (0..self.curves.len()).filter(|&c| self.curves[c].passage_at(point).is_some()).collect()
    }
}

fn wants_flip(sys: &CurveSystem, curve: usize, idx: usize) -> Result<Option<bool>, CurveError> {
    let Some(theta) = sys.relative_angle(curve, idx) else { return Ok(None) };
    let sign = intersection_sign(theta)?;
    let target = match sys.params {
        Params::CaseI { .. } => 1,
        Params::CaseII { .. } => sys.point(sys.curves[curve].itinerary[idx].point).rotation_sense,
    };
    Ok(Some(sign != target))
}

/// Curves whose orientation must change so every crossing of a strip runs the required way.
pub fn flip_set(sys: &CurveSystem) -> Result<Vec<CurveLabel>, CurveError> {
    let mut out = Vec::new();
    for (ci, c) in sys.curves.iter().enumerate() {
        if sys.is_strip(c.label) {
            continue;
        }
        let wants: Vec<bool> = (0..c.itinerary.len())
            .map(|idx| wants_flip(sys, ci, idx))
            .filter_map_ok(|w| w)
            .collect::<Result<_, _>>()?;
        if !wants.iter().all_equal() {
            return Err(CurveError::Conflict(c.label));
        }
        if wants.first() == Some(&true) && !out.contains(&c.label) {
            out.push(c.label);
        }
    }
    out.sort();
    Ok(out)
}

/// Toggle the orientation of every curve whose label is listed.
pub fn apply_flips(sys: &CurveSystem, labels: &[CurveLabel]) -> CurveSystem {
    let mut out = sys.clone();
    for c in &mut out.curves {
        if labels.contains(&c.label) {
            c.flipped = !c.flipped;
        }
    }
    out
}

pub fn reorient(sys: &CurveSystem) -> Result<(CurveSystem, Vec<CurveLabel>), CurveError> {
    let set = flip_set(sys)?;
    Ok((apply_flips(sys, &set), set))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }

    pub fn sigma(self) -> i8 {
        match self {
            Side::Minus => -1,
            Side::Plus => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Region {
    F1,
    F2(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Endpoint {
    Boundary { region: usize, side: Side },
    Fiber(PointId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentRecord {
    pub owner: CurveLabel,
    pub index: usize,
    pub region: Region,
    /// start under the current orientation
    pub tail: Endpoint,
    /// end under the current orientation
    pub head: Endpoint,
    pub through: Option<PointId>,
}

/// Odd segments meeting a passage: the one arriving and the one leaving under the current
/// orientation, and the even segment through the point if the point is on a strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassageSegments {
    pub arriving: usize,
    pub leaving: usize,
    pub through: Option<usize>,
}

pub fn passage_segments(sys: &CurveSystem, curve: usize, idx: usize) -> PassageSegments {
    let c = &sys.curves[curve];
    let point = c.itinerary[idx].point;
    let on_strip = sys.strip_at(point).is_some();
    match sys.params {
        Params::CaseI { n, .. } => {
            let pos = idx + 1;
            let before = 2 * pos - 1;
            let after = if pos == n { 1 } else { 2 * pos + 1 };
            let (arriving, leaving) = if c.flipped { (after, before) } else { (before, after) };
            PassageSegments { arriving, leaving, through: on_strip.then_some(2 * pos) }
        }
        Params::CaseII { .. } => {
            // seg 2 sits at ĉ_c for odd c and at ĉ_{c+1} for even c
            let second = if c.label.i % 2 == 1 { 0 } else { 1 };
            if idx == second {
                PassageSegments { arriving: 1, leaving: 3, through: Some(2) }
            } else {
                PassageSegments { arriving: 3, leaving: 1, through: Some(4) }
            }
        }
    }
}

/// Side of the strip a curve comes in from at one of its passages.
pub fn entry_side(sys: &CurveSystem, curve: usize, idx: usize) -> Option<Result<Side, CurveError>> {
    let theta = sys.relative_angle(curve, idx)?;
    Some(intersection_sign(theta).map(|s| if s > 0 { Side::Minus } else { Side::Plus }))
}

pub fn decompose_segments(sys: &CurveSystem) -> Result<Vec<SegmentRecord>, CurveError> {
    let mut out = Vec::new();
    for (ci, c) in sys.curves.iter().enumerate() {
        if sys.is_strip(c.label) || (c.t.unwrap_or(1), c.s.unwrap_or(1)) != (1, 1) {
            continue;
        }
        let mut tails: BTreeMap<usize, Endpoint> = BTreeMap::new();
        let mut heads: BTreeMap<usize, Endpoint> = BTreeMap::new();
        let mut evens = Vec::new();
        for idx in 0..c.itinerary.len() {
            let point = c.itinerary[idx].point;
            let segs = passage_segments(sys, ci, idx);
            match (entry_side(sys, ci, idx), sys.region_at(point)) {
                (Some(side), Some(region)) => {
                    let side = side?;
                    heads.insert(segs.arriving, Endpoint::Boundary { region, side });
                    tails.insert(segs.leaving, Endpoint::Boundary { region, side: side.other() });
                    if let Some(e) = segs.through {
                        evens.push(SegmentRecord {
                            owner: c.label,
                            index: e,
                            region: Region::F2(region),
                            tail: Endpoint::Boundary { region, side },
                            head: Endpoint::Boundary { region, side: side.other() },
                            through: Some(point),
                        });
                    }
                }
                _ => {
                    heads.insert(segs.arriving, Endpoint::Fiber(point));
                    tails.insert(segs.leaving, Endpoint::Fiber(point));
                }
            }
        }
        for (idx, head) in heads {
            let tail = tails[&idx];
            out.push(SegmentRecord { owner: c.label, index: idx, region: Region::F1, tail, head, through: None });
        }
        out.extend(evens);
    }
    out.sort_by_key(|s| (s.owner, s.index));
    Ok(out)
}

/// Duplicate every curve over the two sheets of the free double cover. In the uniform even
/// case each curve also has two sheets `t` upstairs, which are expanded here.
pub fn double_cover_labels(sys: &CurveSystem) -> Result<CurveSystem, CurveError> {
    if sys.doubled {
        return Err(CurveError::AlreadyDoubled);
    }
    let mut out = sys.clone();
    out.doubled = true;
    out.curves.clear();
    for c in &sys.curves {
        let ts: Vec<Option<u8>> = match sys.params {
            Params::CaseI { .. } => vec![None],
            Params::CaseII { .. } => vec![Some(1), Some(2)],
        };
        for t in ts {
            for s in 1..=2 {
                out.curves.push(LiftedCurve { t, s: Some(s), ..c.clone() });
            }
        }
    }
    Ok(out)
}

/// Number of link components the curve labels stand for.
pub fn link_component_count(sys: &CurveSystem) -> usize {
    match (sys.params, sys.doubled) {
        (Params::CaseII { .. }, false) => 2 * sys.curves.len(),
        _ => sys.curves.len(),
    }
}

/// Euler characteristic V − E + F of the ribbon graph cut out by the curves, with the
/// rotation at each point read off the tangent angles.
pub fn ribbon_euler_characteristic(sys: &CurveSystem) -> i64 {
    // dart = (curve, passage, forward?) leaving the passage's point
    type Dart = (usize, usize, bool);
    let base: Vec<usize> = (0..sys.curves.len())
        .filter(|&c| (sys.curves[c].t.unwrap_or(1), sys.curves[c].s.unwrap_or(1)) == (1, 1))
        .collect();
    let mut rotation: BTreeMap<PointId, Vec<(Rational, Dart)>> = BTreeMap::new();
    let mut edges = 0i64;
    for &c in &base {
        let curve = &sys.curves[c];
        edges += curve.itinerary.len() as i64;
        for (idx, ps) in curve.itinerary.iter().enumerate() {
            let a = ps.angle;
            rotation.entry(ps.point).or_default().push((a, (c, idx, true)));
            rotation.entry(ps.point).or_default().push((mod_one(a + q(1, 2)), (c, idx, false)));
        }
    }
    let mut next_ccw: BTreeMap<Dart, Dart> = BTreeMap::new();
    for darts in rotation.values_mut() {
        darts.sort();
        for w in 0..darts.len() {
            next_ccw.insert(darts[w].1, darts[(w + 1) % darts.len()].1);
        }
    }
    let reverse = |(c, idx, fwd): Dart| -> Dart {
        let len = sys.curves[c].itinerary.len();
        if fwd {
            (c, (idx + 1) % len, false)
        } else {
            (c, (idx + len - 1) % len, true)
        }
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut faces = 0i64;
    for &d in next_ccw.keys() {
        if seen.contains(&d) {
            continue;
        }
        faces += 1;
        let mut cur = d;
        while seen.insert(cur) {
            cur = next_ccw[&reverse(cur)];
        }
    }
    rotation.len() as i64 - edges + faces
}
