use std::collections::BTreeMap;

use serde::Serialize;

use crate::cover::{case1_tower, case2_tower, hom_validity, CoverTower, OrbifoldSurface};
use crate::curves::{
    decompose_segments, double_cover_labels, enumerate_case1, enumerate_case2, link_component_count, reorient,
    ribbon_euler_characteristic, CurveLabel, CurveSystem, Params, Region,
};
use crate::rational::{ser_q, Rational};
use crate::reference::{build, disjointness, verify_negativity, NegativityReport, ReferenceSystem};
use crate::slopes::{
    boundary_slopes, build_star, canonical_eps, case1_from_solver, case1_slope_data, case2_wrap_counts, solve_wang_yu, CaseOneSlopes,
    GluingMatrix, LambdaSolution, QChoice, SlopeTable, StarGraph,
};
use crate::tangle::{
    classify_theorem_case, cover_euler, invariants, parse_decomposition, side_conditions, CaseMatch, MontesinosInvariants, ParseError,
    SideCondition, TangleDecomposition,
};

pub const CERT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum CaseChoice {
    #[default]
    Auto,
    I,
    II,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Options {
    pub q: QChoice,
    pub case: CaseChoice,
    pub matrix: bool,
    pub two_component: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { q: QChoice::Auto, case: CaseChoice::Auto, matrix: false, two_component: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    VirtuallyFiberedCertified { case: String },
    StructurallyUnmatched { reason: String },
    ConditionFailed { stage: String, detail: String },
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::VirtuallyFiberedCertified { .. } => 0,
            Verdict::StructurallyUnmatched { .. } => 2,
            Verdict::ConditionFailed { .. } => 3,
        }
    }

    fn failed(stage: &str, detail: impl ToString) -> Self {
        Verdict::ConditionFailed { stage: stage.into(), detail: detail.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub tangles: String,
    pub normalized: String,
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceSummary {
    pub genus: u64,
    pub cone_points: usize,
    #[serde(serialize_with = "ser_q")]
    pub chi_orb: Rational,
}

impl From<&OrbifoldSurface> for SurfaceSummary {
    fn from(s: &OrbifoldSurface) -> Self {
        SurfaceSummary { genus: s.genus, cone_points: s.cone_orders.len(), chi_orb: s.chi_orb() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerSummary {
    pub degrees: (u64, u64),
    pub base: SurfaceSummary,
    pub mid: SurfaceSummary,
    pub top: SurfaceSummary,
    pub hom1_valid: bool,
    pub hom2_valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveStats {
    pub curves: usize,
    pub link_components: usize,
    pub doubled_components: usize,
    pub flip_set: Vec<CurveLabel>,
    pub odd_segments: usize,
    pub even_segments: usize,
    pub segments_per_curve: BTreeMap<String, usize>,
    pub ribbon_euler_characteristic: i64,
    pub singular_points_per_annulus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceStats {
    pub curves: usize,
    pub labels: Vec<String>,
    pub disjoint: bool,
    pub disjointness_detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativitySummary {
    pub verdict: bool,
    pub rows: usize,
    /// total → number of odd segments with that total
    pub histogram: BTreeMap<i64, usize>,
    pub matrix: Option<NegativityReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum SlopeSummary {
    CaseI { data: CaseOneSlopes, star: StarGraph, solution: LambdaSolution, table: SlopeTable, solver_agrees: bool },
    CaseII { star: StarGraph, solution: LambdaSolution, table: SlopeTable, wrap_counts: (i64, i64) },
}

impl SlopeSummary {
    fn table(&self) -> &SlopeTable {
        match self {
            SlopeSummary::CaseI { table, .. } | SlopeSummary::CaseII { table, .. } => table,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub cert_version: u32,
    pub input: InputEcho,
    pub invariants: MontesinosInvariants,
    pub case_match: Option<CaseMatch>,
    pub side_conditions: Vec<SideCondition>,
    pub tower: Option<TowerSummary>,
    pub curve_system: Option<CurveStats>,
    pub reference_system: Option<ReferenceStats>,
    pub negativity: Option<NegativitySummary>,
    pub slopes: Option<SlopeSummary>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl Certificate {
    /// The verdict every stage result implies; `verdict` must always equal this.
    pub fn implied_verdict(&self) -> bool {
        let tower_ok = self.tower.as_ref().is_some_and(|t| t.hom1_valid && t.hom2_valid);
        let disjoint = self.reference_system.as_ref().is_some_and(|r| r.disjoint);
        let negative = self.negativity.as_ref().is_some_and(|n| n.verdict);
        let slopes = self.slopes.as_ref().is_some_and(|s| s.table().horizontal && s.table().semibundle);
        let matched = self.case_match.as_ref().is_some_and(|m| m.is_match());
        self.invariants.is_sl2 && matched && tower_ok && disjoint && negative && slopes
    }
}

/// Everything a run produces; the systems are kept for rendering.
#[derive(Debug, Clone)]
pub struct Run {
    pub certificate: Certificate,
    pub decomposition: TangleDecomposition,
    pub system: Option<CurveSystem>,
    pub reference: Option<ReferenceSystem>,
}

fn summarize_tower(t: &CoverTower) -> TowerSummary {
    TowerSummary {
        degrees: t.degrees,
        base: (&t.base).into(),
        mid: (&t.mid).into(),
        top: (&t.top).into(),
        hom1_valid: hom_validity(&t.hom1, &t.base),
        hom2_valid: t.hom2.modulus == 1 || hom_validity(&t.hom2, &t.mid),
    }
}

fn curve_stats(sys: &CurveSystem, flips: Vec<CurveLabel>) -> Result<CurveStats, Verdict> {
    let segs = decompose_segments(sys).map_err(|e| Verdict::failed("segments", e))?;
    let doubled = double_cover_labels(sys).map_err(|e| Verdict::failed("segments", e))?;
    let mut per = BTreeMap::new();
    for s in &segs {
        *per.entry(format!("{},{}", s.owner.i, s.owner.j)).or_insert(0) += 1;
    }
    Ok(CurveStats {
        curves: sys.curves.len(),
        link_components: link_component_count(sys),
        doubled_components: link_component_count(&doubled),
        flip_set: flips,
        odd_segments: segs.iter().filter(|s| s.region == Region::F1).count(),
        even_segments: segs.iter().filter(|s| s.region != Region::F1).count(),
        segments_per_curve: per,
        ribbon_euler_characteristic: ribbon_euler_characteristic(sys),
        singular_points_per_annulus: sys.singular_points_per_annulus(),
    })
}

fn slopes_for(m: &CaseMatch, e: i64, q: QChoice) -> Result<SlopeSummary, Verdict> {
    let fail = |e: crate::slopes::SlopeError| Verdict::failed("slopes", e);
    match *m {
        CaseMatch::CaseI { .. } => {
            let data = case1_slope_data(e).map_err(fail)?;
            let star = build_star(e, 1, QChoice::Auto).map_err(fail)?;
            let g = GluingMatrix::case_one();
            let solution = solve_wang_yu(&star, &g);
            let table = boundary_slopes(&star, &g, &solution, &canonical_eps(1)).map_err(fail)?;
            let (g1, g2, _) = case1_from_solver(e).map_err(fail)?;
            let solver_agrees = g1 == data.gamma1 && g2 == data.gamma2;
            Ok(SlopeSummary::CaseI { data, star, solution, table, solver_agrees })
        }
        CaseMatch::CaseII { n, .. } => {
            let star = build_star(e, n / 2, q).map_err(fail)?;
            let g = GluingMatrix::table();
            let solution = solve_wang_yu(&star, &g);
            let table = boundary_slopes(&star, &g, &solution, &canonical_eps(star.leaves())).map_err(fail)?;
            let wrap_counts = case2_wrap_counts(star.q, star.e_prime());
            Ok(SlopeSummary::CaseII { star, solution, table, wrap_counts })
        }
        CaseMatch::None { .. } => Err(Verdict::failed("slopes", "no case")),
    }
}

const NOTE_Q: &str = "q_i is passed through unchanged; it is never reduced mod p_i";
const NOTE_DISJOINT: &str =
    "disjointness is a combinatorial check on a disk-and-band model (chord nesting, barrier and band collisions), not planar geometry";
const NOTE_EPS: &str = "neighbourhood widths are symbolic; bands are integer offsets";

pub fn certify(text: &str, opts: Options) -> Result<Run, ParseError> {
    let d = parse_decomposition(text)?;
    let inv = invariants(&d);
    let mut cert = Certificate {
        cert_version: CERT_VERSION,
        input: InputEcho { tangles: text.to_string(), normalized: d.to_string(), options: opts },
        invariants: inv.clone(),
        case_match: None,
        side_conditions: Vec::new(),
        tower: None,
        curve_system: None,
        reference_system: None,
        negativity: None,
        slopes: None,
        verdict: Verdict::StructurallyUnmatched { reason: String::new() },
        notes: vec![NOTE_Q.into()],
    };
    let mut run = Run { certificate: cert.clone(), decomposition: d.clone(), system: None, reference: None };
    let verdict = pipeline(&d, &inv, opts, &mut cert, &mut run);
    cert.verdict = verdict;
    debug_assert!(cert.implied_verdict() == (cert.verdict.exit_code() == 0));
    run.certificate = cert;
    Ok(run)
}

fn pipeline(d: &TangleDecomposition, inv: &MontesinosInvariants, opts: Options, cert: &mut Certificate, run: &mut Run) -> Verdict {
    use num::{Signed, Zero};
    let unmatched = |r: &str| Verdict::StructurallyUnmatched { reason: r.into() };
    if inv.euler_number.is_zero() {
        return unmatched("e(W_K)=0: not SL2~ type");
    }
    let m = classify_theorem_case(d);
    cert.case_match = Some(m.clone());
    if let CaseMatch::None { reason } = &m {
        return unmatched(reason);
    }
    if !inv.chi.is_negative() {
        return unmatched("χ^orb ≥ 0: not SL2~ type");
    }
    match (opts.case, &m) {
        (CaseChoice::I, CaseMatch::CaseII { .. }) => return unmatched("forced Case I but the denominators have the uniform even shape"),
        (CaseChoice::II, CaseMatch::CaseI { .. }) => return unmatched("forced Case II but the denominators have the two-block shape"),
        _ => {}
    }
    cert.side_conditions = side_conditions(d, &m);
    let tower = match m {
        CaseMatch::CaseI { p, r, k, n, .. } => case1_tower(p, r, k, n),
        CaseMatch::CaseII { p, m, n } => case2_tower(p, m, n),
        CaseMatch::None { .. } => unreachable!(),
    };
    let tower = match tower {
        Ok(t) => t,
        Err(e) => return Verdict::failed("tower", e),
    };
    let ts = summarize_tower(&tower);
    let homs_ok = ts.hom1_valid && ts.hom2_valid;
    cert.tower = Some(ts);
    if !homs_ok {
        return Verdict::failed("tower", "homomorphism is not a valid orbifold cover");
    }

    let sys = match m {
        CaseMatch::CaseI { .. } => enumerate_case1(&tower),
        _ => enumerate_case2(&tower),
    };
    let sys = match sys {
        Ok(s) => s.with_two_component(opts.two_component),
        Err(e) => return Verdict::failed("curves", e),
    };
    let (sys, flips) = match reorient(&sys) {
        Ok(x) => x,
        Err(e) => return Verdict::failed("reorient", e),
    };
    match curve_stats(&sys, flips) {
        Ok(s) => cert.curve_system = Some(s),
        Err(v) => return v,
    }
    run.system = Some(sys.clone());

    let refs = match build(&sys) {
        Ok(r) => r,
        Err(e) => return Verdict::failed("reference", e),
    };
    let dj = disjointness(&sys, &refs);
    cert.reference_system = Some(ReferenceStats {
        curves: refs.curves.len(),
        labels: refs.curves.iter().map(|c| c.label.clone()).collect(),
        disjoint: dj.is_ok(),
        disjointness_detail: dj.as_ref().err().map(|e| e.to_string()),
    });
    cert.notes.push(NOTE_DISJOINT.into());
    cert.notes.push(NOTE_EPS.into());
    if let Params::CaseII { n: 6, .. } = sys.params {
        cert.notes.push("n=6: negativity totals are computed here, not taken from a tabulated list".into());
    }
    if let (Params::CaseI { .. }, 2, false) = (sys.params, inv.components, opts.two_component) {
        cert.notes.push("K has two components; --two-component selects the one-singular-point annuli".into());
    }
    let report = match verify_negativity(&sys, &refs) {
        Ok(r) => r,
        Err(e) => return Verdict::failed("negativity", e),
    };
    let mut histogram = BTreeMap::new();
    for &t in &report.totals {
        *histogram.entry(t).or_insert(0) += 1;
    }
    let negative = report.verdict;
    cert.negativity = Some(NegativitySummary {
        verdict: negative,
        rows: report.rows.len(),
        histogram,
        matrix: opts.matrix.then_some(report),
    });
    run.reference = Some(refs);
    if let Err(e) = dj {
        return Verdict::failed("disjointness", e);
    }
    if !negative {
        return Verdict::failed("negativity", "some odd segment has a non-negative total");
    }

    let e = cover_euler(d, &m).expect("matched case");
    let slopes = match slopes_for(&m, e, opts.q) {
        Ok(s) => s,
        Err(v) => return v,
    };
    let (h, sb) = (slopes.table().horizontal, slopes.table().semibundle);
    cert.slopes = Some(slopes);
    if !h {
        return Verdict::failed("slopes", "horizontality residuals are not zero");
    }
    if !sb {
        return Verdict::failed("slopes", "surface is not a semi-bundle fibre");
    }
    let case = match m {
        CaseMatch::CaseI { .. } => "CaseI",
        _ => "CaseII",
    };
    Verdict::VirtuallyFiberedCertified { case: case.into() }
}
