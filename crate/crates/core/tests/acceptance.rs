//! Acceptance suite. Runs without the libtest harness so every criterion prints one
//! PASS/FAIL line; the process exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use montesinos_vf::certificate::{certify, CaseChoice, Options, Verdict};
use montesinos_vf::cover::{case1_tower, case2_tower, OrbifoldSurface};
use montesinos_vf::curves::{
    case1_system, case2_system, decompose_segments, flip_set, reorient, CurveLabel, CurveSystem, Endpoint,
    PointId, Region, Side,
};
use montesinos_vf::rational::{int, q, Rational};
use montesinos_vf::reference::{build, total_intersection, verify_negativity, SegmentRef};
use montesinos_vf::slopes::{
    boundary_slopes, build_star, canonical_eps, case1_from_solver, case2_wrap_counts, solve_wang_yu, GluingMatrix,
    QChoice, SlopePair,
};
use montesinos_vf::tangle::{classify_theorem_case, cover_euler, invariants, parse_decomposition, CaseMatch};

type Criterion = fn() -> String;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("invariants", c1_invariants),
        ("towers", c2_towers),
        ("angle/sign suite", c3_angles),
        ("reorientation", c4_reorientation),
        ("endpoint tables", c5_endpoints),
        ("negativity", c6_negativity),
        ("slopes", c7_slopes),
        ("end-to-end", c8_end_to_end),
        ("determinism", c9_determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        match catch_unwind(AssertUnwindSafe(f)) {
            Ok(detail) => println!("PASS {} {name}: {detail}", n + 1),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {} {name}: {}", n + 1, msg.replace('\n', " "));
                failed += 1;
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn repeat(parts: &[(&str, usize)]) -> String {
    parts.iter().flat_map(|&(t, n)| std::iter::repeat_n(t, n)).collect::<Vec<_>>().join(",")
}

fn fig_case1() -> String {
    repeat(&[("2/5", 5), ("1/15", 15)])
}

// ---------- 1

fn c1_invariants() -> String {
    // hand evaluation: e = −Σ q/p, χ = 2 − Σ (1 − 1/p)
    let hand = |ts: &[(i64, i64)]| -> (Rational, Rational) {
        let e = -ts.iter().map(|&(a, b)| q(a, b)).sum::<Rational>();
        let chi = int(2) - ts.iter().map(|&(_, b)| int(1) - q(1, b)).sum::<Rational>();
        (e, chi)
    };
    let mut ts = vec![(2, 5); 5];
    ts.extend(vec![(1, 15); 15]);
    let (e, chi) = hand(&ts);
    assert_eq!((e, chi), (int(-3), int(-16)));
    let d = parse_decomposition(&fig_case1()).unwrap();
    let inv = invariants(&d);
    assert_eq!(inv.euler_number, e);
    assert_eq!(inv.chi, chi);
    assert_eq!(inv.components, 1);
    let m = classify_theorem_case(&d);
    let ec = cover_euler(&d, &m).unwrap();
    // e(W_K)·pr with p=5, r=3
    assert_eq!(ec, (e * int(15)).to_integer());
    assert_eq!(ec, -45);
    assert!(ec % 2 != 0);

    let d = parse_decomposition(&repeat(&[("1/6", 6)])).unwrap();
    let inv = invariants(&d);
    let (e2, chi2) = hand(&[(1, 6); 6]);
    assert_eq!((inv.euler_number, inv.chi), (e2, chi2));
    assert_eq!(inv.components, 6);
    let m = classify_theorem_case(&d);
    let ec2 = cover_euler(&d, &m).unwrap();
    // e(W_K)·p with p=6
    assert_eq!(ec2, (e2 * int(6)).to_integer());
    assert_eq!(ec2, -6);
    assert!(ec2 % 2 == 0);
    "e(W_K)=-3 chi=-16 |K|=1 e=-45; e=-6 |K|=6 (exact, tol 0)".into()
}

// ---------- 2

fn chi_orb_hand(s: &OrbifoldSurface) -> Rational {
    int(2 - 2 * s.genus as i64) - s.cone_orders.iter().map(|&o| int(1) - q(1, o as i64)).sum::<Rational>()
}

fn c2_towers() -> String {
    let t = case1_tower(5, 3, 5, 20).unwrap();
    assert_eq!(t.mid.genus, 13);
    assert_eq!(t.mid.cone_orders.iter().filter(|&&o| o == 5).count(), 30);
    assert_eq!(t.mid.cone_orders.len(), 30);
    assert_eq!(t.top.genus, 121);
    assert!(t.top.cone_orders.is_empty());
    let t = case2_tower(6, 3, 6).unwrap();
    assert_eq!((t.mid.genus, t.top.genus), (2, 10));
    assert!(t.top.cone_orders.is_empty());

    let case1 = [
        (3, 3, 3, 6),
        (3, 3, 3, 9),
        (3, 3, 6, 9),
        (3, 3, 3, 12),
        (3, 5, 3, 18),
        (3, 5, 6, 21),
        (5, 3, 5, 20),
        (5, 3, 10, 25),
        (5, 5, 5, 10),
        (5, 5, 10, 15),
        (5, 7, 5, 40),
        (7, 3, 7, 28),
        (3, 7, 3, 24),
    ];
    let case2 = [(2, 1, 6), (2, 1, 8), (6, 3, 4), (6, 3, 6), (6, 3, 8), (6, 3, 10), (10, 5, 4), (10, 5, 6), (14, 7, 6)];
    let mut swept = 0;
    for (p, r, k, n) in case1 {
        let t = case1_tower(p, r, k, n).unwrap();
        check_tower(&t.base, &t.mid, &t.top, t.degrees, &format!("I({p},{r},{k},{n})"));
        swept += 1;
    }
    for (p, m, n) in case2 {
        let t = case2_tower(p, m, n).unwrap();
        check_tower(&t.base, &t.mid, &t.top, t.degrees, &format!("II({p},{m},{n})"));
        swept += 1;
    }
    assert!(swept >= 20);
    format!("genera 13/121 with 30 order-5 points, 2/10; Riemann-Hurwitz exact on {swept} towers (tol 0)")
}

fn check_tower(base: &OrbifoldSurface, mid: &OrbifoldSurface, top: &OrbifoldSurface, (d1, d2): (u64, u64), tag: &str) {
    let b = chi_orb_hand(base);
    assert_eq!(chi_orb_hand(mid), b * int(d1 as i64), "{tag}: mid");
    assert!(top.cone_orders.is_empty(), "{tag}: top has cone points");
    assert_eq!(int(2 - 2 * top.genus as i64), b * int((d1 * d2) as i64), "{tag}: top");
}

// ---------- 3

fn cross_oracle(a: Rational, b: Rational) -> i8 {
    let f = |x: Rational| 2.0 * std::f64::consts::PI * (*x.numer() as f64 / *x.denom() as f64);
    let (ta, tb) = (f(a), f(b));
    let cross = ta.cos() * tb.sin() - ta.sin() * tb.cos();
    assert!(cross.abs() > 1e-9, "tangent pair");
    // B clockwise of A
    if cross < 0.0 {
        1
    } else {
        -1
    }
}

fn angle_suite(sys: &CurveSystem) -> (usize, usize) {
    let (mut pairs, mut agree) = (0, 0);
    for pt in &sys.points {
        let through = sys.curves_through(pt.id);
        for &a in &through {
            for &b in &through {
                if a == b {
                    continue;
                }
                pairs += 1;
                let ab = sys.angle_between(a, b, pt.id).unwrap();
                let ba = sys.angle_between(b, a, pt.id).unwrap();
                assert_eq!(ab + ba, int(1), "complement at {:?}", pt.id);
                let s_ab = sys.sign_at(a, b, pt.id).unwrap().unwrap();
                let s_ba = sys.sign_at(b, a, pt.id).unwrap().unwrap();
                assert_eq!(s_ab, -s_ba, "antisymmetry at {:?}", pt.id);
                let (aa, bb) = (sys.angle_at(a, pt.id).unwrap(), sys.angle_at(b, pt.id).unwrap());
                if cross_oracle(aa, bb) == s_ab {
                    agree += 1;
                }
            }
        }
    }
    (pairs, agree)
}

fn c3_angles() -> String {
    let mut out = Vec::new();
    for (tag, sys) in [("(5,3,5,20)", case1_system(5, 3, 5, 20)), ("(3,6)", case2_system(3, 6))] {
        for s in [sys.clone(), reorient(&sys).unwrap().0] {
            let (pairs, agree) = angle_suite(&s);
            assert!(pairs > 0);
            assert_eq!(agree, pairs, "{tag}: cross-product oracle disagrees on {} pairs", pairs - agree);
            out.push(format!("{tag} {agree}/{pairs}"));
        }
    }
    format!("antisymmetry, complement and cross-product agreement 100% ({})", out.join(", "))
}

// ---------- 4

fn labels(v: &[(usize, usize)]) -> BTreeSet<CurveLabel> {
    v.iter().map(|&(i, j)| CurveLabel::new(i, j)).collect()
}

/// Sign of h₂(y_c) for uniform even denominators, evaluated from its defining recursion.
fn h2_sign(n: usize, c: usize) -> i8 {
    if c <= n / 2 {
        if matches!(c % 4, 1 | 2) {
            1
        } else {
            -1
        }
    } else {
        -h2_sign(n, n - c + 1)
    }
}

fn c4_reorientation() -> String {
    let sys = case1_system(5, 3, 5, 20);
    let got: BTreeSet<CurveLabel> = flip_set(&sys).unwrap().into_iter().collect();
    assert_eq!(got, labels(&[(2, 1), (3, 1), (1, 2), (2, 2), (3, 2), (1, 3), (2, 3)]));

    let got2: BTreeSet<CurveLabel> = flip_set(&case2_system(3, 6)).unwrap().into_iter().collect();
    let mut want2: Vec<(usize, usize)> = (1..=6).map(|i| (i, 2)).collect();
    want2.extend([(2, 1), (4, 1)]);
    assert_eq!(got2, labels(&want2));

    let mut checked = 0;
    for (p, r, k, n) in [(5, 3, 5, 20), (5, 5, 5, 10), (3, 3, 3, 6), (3, 5, 3, 18)] {
        let (s, _) = reorient(&case1_system(p, r, k, n)).unwrap();
        let strip = s.index_of(CurveLabel::new(1, 1)).unwrap();
        for l in k + 1..=n {
            let pt = PointId::Outer { l };
            for c in s.curves_through(pt) {
                if c == strip {
                    continue;
                }
                let a = s.angle_between(strip, c, pt).unwrap();
                assert!(a > q(1, 2) && a < int(1), "({p},{r},{k},{n}) angle {a} at c{l}");
                checked += 1;
            }
        }
    }

    let mut identities = 0;
    for n in [6, 8, 10] {
        let (s, _) = reorient(&case2_system(3, n)).unwrap();
        let wrap = |x: usize| (x + n - 1) % n + 1;
        for c in 1..=n {
            let i = c.div_ceil(2);
            let strip = CurveLabel::new(2 * i - 1, 1);
            let other = if c % 2 == 1 { wrap(2 * i + n - 2) } else { 2 * i };
            let mut want: BTreeSet<CurveLabel> = (2..=3).map(|j| CurveLabel::new(2 * i - 1, j)).collect();
            want.extend((1..=3).map(|j| CurveLabel::new(other, j)));
            let pt = PointId::Cone { c };
            let si = s.index_of(strip).unwrap();
            let through: BTreeSet<CurveLabel> =
                s.curves_through(pt).into_iter().filter(|&x| x != si).map(|x| s.curves[x].label).collect();
            assert_eq!(through, want, "(3,{n}) curves through c{c}");
            for x in s.curves_through(pt).into_iter().filter(|&x| x != si) {
                assert_eq!(s.sign_at(si, x, pt).unwrap().unwrap(), h2_sign(n, c), "(3,{n}) at c{c}");
                identities += 1;
            }
        }
    }
    format!("7-element flip set; {checked} post-condition angles in (1/2,1) turn; {identities} sign identities at (3,6),(3,8),(3,10) (exact)")
}

// ---------- 5

#[derive(Clone, Copy)]
struct CaseOne {
    hr: usize,
    hp: usize,
    p: usize,
    k: usize,
}

fn head_branches(g: CaseOne, i: usize, j: usize, l: usize, literal: bool) -> Vec<Endpoint> {
    let CaseOne { hr, hp, p, k } = g;
    let mut v = Vec::new();
    let minus = Endpoint::Boundary { region: 1, side: Side::Minus };
    let head1 = (i == 1 && j > 1)
        || (1 < i && i <= hr && ((j <= hp && (l == 1 || l >= k + 2)) || (j > hp && l > k)))
        || (i > hr && ((j < hp && (l == 1 || l >= k + 2)) || (j >= hp && l > k)));
    if head1 {
        v.push(minus);
    }
    if (2..=k + 1).contains(&l) && ((1 < i && i <= hr && j <= hp) || (i > hr && j < hp)) {
        v.push(Endpoint::Fiber(PointId::Inner { i, s: l - 1 }));
    }
    let upper = if literal { j < p } else { j <= p };
    if (1..=k).contains(&l) && ((1 < i && i <= hr && j > hp) || (i > hr && hp <= j && upper)) {
        v.push(Endpoint::Fiber(PointId::Inner { i, s: l }));
    }
    v
}

fn tail_branches(g: CaseOne, i: usize, j: usize, l: usize) -> Vec<Endpoint> {
    let CaseOne { hr, hp, k, .. } = g;
    let mut v = Vec::new();
    let tail1 = (i == 1 && j > 1)
        || (1 < i && i <= hr && ((j <= hp && l > k) || (j > hp && (l == 1 || l >= k + 2))))
        || (i > hr && ((j < hp && l > k) || (j >= hp && (l == 1 || l >= k + 2))));
    if tail1 {
        v.push(Endpoint::Boundary { region: 1, side: Side::Plus });
    }
    if (1..=k).contains(&l) && ((1 < i && i <= hr && j <= hp) || (i > hr && j < hp)) {
        v.push(Endpoint::Fiber(PointId::Inner { i, s: l }));
    }
    if (2..=k + 1).contains(&l) && ((1 < i && i <= hr && j > hp) || (i > hr && j >= hp)) {
        v.push(Endpoint::Fiber(PointId::Inner { i, s: l - 1 }));
    }
    v
}

fn c5_endpoints() -> String {
    let (p, r, k, n) = (5, 3, 5, 20);
    let (s, _) = reorient(&case1_system(p, r, k, n)).unwrap();
    let got: BTreeMap<(CurveLabel, usize), (Endpoint, Endpoint)> = decompose_segments(&s)
        .unwrap()
        .into_iter()
        .filter(|x| x.region == Region::F1)
        .map(|x| ((x.owner, x.index), (x.tail, x.head)))
        .collect();
    let g = CaseOne { hr: r.div_ceil(2), hp: p.div_ceil(2), p, k };
    let (mut compared, mut mismatches, mut gaps) = (0, Vec::new(), 0);
    for i in 1..=r {
        for j in 1..=p {
            if (i, j) == (1, 1) {
                continue;
            }
            for l in 1..=n {
                let heads = head_branches(g, i, j, l, false);
                let tails = tail_branches(g, i, j, l);
                assert_eq!(heads.len(), 1, "head of L({i},{j}) seg {} matched {} branches", 2 * l - 1, heads.len());
                assert_eq!(tails.len(), 1, "tail of L({i},{j}) seg {} matched {} branches", 2 * l - 1, tails.len());
                if head_branches(g, i, j, l, true).is_empty() {
                    assert!(i > g.hr && j == p && l <= k);
                    gaps += 1;
                }
                compared += 1;
                match got.get(&(CurveLabel::new(i, j), 2 * l - 1)) {
                    Some(&(t, h)) if t == tails[0] && h == heads[0] => {}
                    other => mismatches.push(format!("L({i},{j})^{}: {other:?}", 2 * l - 1)),
                }
            }
        }
    }
    assert_eq!(got.len(), compared, "computed odd segments not covered by the tables");
    assert!(mismatches.is_empty(), "{} mismatches: {}", mismatches.len(), mismatches.join("; "));
    // the literal j<p bound in the second head branch leaves these endpoints unassigned
    assert_eq!(gaps, (r - g.hr) * k);

    let sides = case2_side_mismatches(3, 6);
    assert!(sides.1.is_empty(), "Case II: {}", sides.1.join("; "));
    format!(
        "(5,3,5,20) {compared} odd segments head/tail, 0 mismatches ({gaps} endpoints need j<=p in the second head branch); (3,6) {} segment sides, 0 mismatches",
        sides.0
    )
}

fn case2_side_mismatches(m: usize, n: usize) -> (usize, Vec<String>) {
    let (s, _) = reorient(&case2_system(m, n)).unwrap();
    let half = n / 2;
    let rw = |x: usize| (x + half - 1) % half + 1;
    let b = |region: usize, plus: bool| Endpoint::Boundary { region: rw(region), side: if plus { Side::Plus } else { Side::Minus } };
    let h = |c: usize| h2_sign(n, (c + n - 1) % n + 1) > 0;
    let mut bad = Vec::new();
    let recs = decompose_segments(&s).unwrap();
    for rec in &recs {
        let c = rec.owner.i;
        let i = c.div_ceil(2);
        let want = match (c % 2, rec.index) {
            (1, 1 | 3) => {
                let (odd, even) = (h(c), h(c + 1));
                let first = rec.index == 1;
                match (odd, even) {
                    (true, true) => (b(i, true), b(i, false)),
                    (false, false) => (b(i, false), b(i, true)),
                    (false, true) => {
                        if first {
                            (b(i, true), b(i, true))
                        } else {
                            (b(i, false), b(i, false))
                        }
                    }
                    (true, false) => {
                        if first {
                            (b(i, false), b(i, false))
                        } else {
                            (b(i, true), b(i, true))
                        }
                    }
                }
            }
            (0, 1 | 3) => {
                let first = rec.index == 1;
                match (h(c), h(c + 1)) {
                    (true, false) if first => (b(i, true), b(i + 1, true)),
                    (true, false) => (b(i + 1, false), b(i, false)),
                    (false, true) if first => (b(i, false), b(i + 1, false)),
                    (false, true) => (b(i + 1, true), b(i, true)),
                    other => {
                        bad.push(format!("L({c},{}) unexpected signs {other:?}", rec.owner.j));
                        continue;
                    }
                }
            }
            // seg 2 of curve 2i−1 and of curve 2i−2 sits in region i and follows h₂(y_{2i−1})
            (parity, 2) => {
                let region = if parity == 1 { i } else { i + 1 };
                let plus = h(2 * rw(region) - 1);
                (b(region, !plus), b(region, plus))
            }
            // seg 4 of curve 2i−1 and of curve 2i sits in region i and follows h₂(y_{2i})
            (_, 4) => {
                let plus = h(2 * i);
                (b(i, !plus), b(i, plus))
            }
            _ => {
                bad.push(format!("unexpected segment {:?}", rec));
                continue;
            }
        };
        if (rec.tail, rec.head) != want {
            bad.push(format!("L({c},{})^{}: got {:?}->{:?}, want {:?}->{:?}", rec.owner.j, rec.index, rec.tail, rec.head, want.0, want.1));
        }
    }
    // every odd curve 2i−1 with j>1 and every even curve has four segments
    let expected = half * (m - 1) * 4 + half * m * 4;
    if recs.len() != expected {
        bad.push(format!("{} segments, want {expected}", recs.len()));
    }
    (recs.len(), bad)
}

// ---------- 6

fn c6_negativity() -> String {
    let mut summary = Vec::new();
    let systems = [
        ("(5,3,5,20)", case1_system(5, 3, 5, 20)),
        ("(5,5,5,10)", case1_system(5, 5, 5, 10)),
        ("(3,8)", case2_system(3, 8)),
        ("(3,10)", case2_system(3, 10)),
    ];
    for (tag, sys) in systems {
        let (s, _) = reorient(&sys).unwrap();
        let refs = build(&s).unwrap();
        let rep = verify_negativity(&s, &refs).unwrap();
        assert!(rep.verdict, "{tag}: verdict false");
        assert!(rep.totals.iter().all(|&t| t <= -1), "{tag}: a total exceeds -1");
        summary.push(format!("{tag} {} rows", rep.rows.len()));
    }

    // itemized totals at (3,10), I = 3
    let (m, n) = (3, 10);
    let big_i = (n + 2) / 4;
    let item = |c: usize, seg: usize| -> i64 {
        let i = c.div_ceil(2);
        // offset of i from I at which seg 1 / seg 3 pick up a second −1
        let (seg3_at, seg1_at) = if c % 2 == 1 { (big_i - 1, big_i + 1) } else { (big_i - 2, big_i + 1) };
        match (i, seg) {
            (x, 3) if x == seg3_at => -2,
            (x, 1) if x == seg1_at => -2,
            _ => -1,
        }
    };
    let (s, _) = reorient(&case2_system(m, n)).unwrap();
    let refs = build(&s).unwrap();
    let (mut want, mut got) = (Vec::new(), Vec::new());
    let mut off = Vec::new();
    for c in 1..=n {
        let js = if c % 2 == 1 { 2..=m } else { 1..=m };
        for j in js {
            for seg in [1, 3] {
                let t = total_intersection(SegmentRef::new(c, j, seg), &refs);
                let w = item(c, seg);
                if t != w {
                    off.push(format!("L({c},{j})^{seg}={t} want {w}"));
                }
                want.push(w);
                got.push(t);
            }
        }
    }
    assert!(off.is_empty(), "(3,10): {}", off.join("; "));
    want.sort();
    got.sort();
    assert_eq!(want, got);
    let twos = got.iter().filter(|&&t| t == -2).count();
    format!("verdict true, all totals <= -1 ({}); (3,10) itemized totals match, {twos} entries of -2 (exact)", summary.join(", "))
}

// ---------- 7

fn table_row(q_: i64, e_prime: i64, last: bool) -> [SlopePair; 5] {
    let sp = |t, u| SlopePair { t, u };
    if !last {
        let zero = if q_ % 2 != 0 { sp(-2, q_) } else { sp(-1, q_ / 2) };
        [sp(q_ - 1, 1), sp(1 - q_, 1), sp(1 - q_, q_), sp(1 + q_, q_), zero]
    } else {
        let h = e_prime / 2;
        let zero = if e_prime % 4 != 0 { sp(-2, h) } else { sp(-1, e_prime / 4) };
        [sp(h - 1, 1), sp(1 - h, 1), sp(1 - h, h), sp(1 + h, h), zero]
    }
}

fn c7_slopes() -> String {
    // (q, e′) realised by stars with e = e′ + 2q(v−1)
    for (q_, e_prime, e, v) in [(1, -10, -6, 3), (2, -8, -4, 2), (3, -6, 6, 3)] {
        let star = build_star(e, v, QChoice::Fixed(q_)).unwrap();
        assert_eq!(star.e_prime(), e_prime);
        let g = GluingMatrix::table();
        let sol = solve_wang_yu(&star, &g);
        assert_eq!(sol.residual(&star, &g), int(0));
        let t = boundary_slopes(&star, &g, &sol, &canonical_eps(v)).unwrap();
        assert_eq!(t.central_residual, int(0));
        assert!(t.semibundle);
        for (idx, leaf) in t.leaves.iter().enumerate() {
            let row = table_row(q_, e_prime, idx + 1 == v);
            let li = &leaf.integers;
            assert_eq!([li.minus, li.plus, li.bar_minus, li.bar_plus, li.bar_zero], row, "(q,e')=({q_},{e_prime}) leaf {idx}");
            let vals = [leaf.minus, leaf.plus, leaf.bar_minus, leaf.bar_plus, leaf.bar_zero];
            for (p, v) in row.iter().zip(vals) {
                assert_eq!(q(p.t, p.u), v);
            }
            assert_eq!(leaf.residual, int(0));
            assert_eq!(q(row[2].t, row[2].u) + q(row[3].t, row[3].u) + q(row[4].t, row[4].u), int(0));
        }
        assert_eq!(case2_wrap_counts(q_, e_prime), (q_ - 1, 1 - e_prime / 2));
    }
    let mut count = 0;
    for e in (-45..=-3).step_by(2) {
        let (g1, g2, wrap) = case1_from_solver(e).unwrap();
        assert_eq!(g1, q(1, 2 * e) - q(1, 2), "e={e}");
        assert_eq!(g2, -q(1, 2 * e) - q(1, 2), "e={e}");
        assert_eq!(wrap, int((1 - e) / 2), "e={e}");
        count += 1;
    }
    format!("boundary-slope table at (1,-10),(2,-8),(3,-6) bit-exact, residuals 0; V=1 c=2 slopes and wraps for {count} odd e (exact, tol 0)")
}

// ---------- 8, 9

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_certify")).args(args).output().expect("run certify");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn verdict_of(stdout: &[u8]) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(stdout).expect("json");
    v["verdict"].clone()
}

fn commands() -> Vec<Vec<String>> {
    let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        own(&["--tangles", &fig_case1()]),
        own(&["--tangles", "1/6,1/6,1/6,1/6,1/6,1/6", "--q", "1"]),
        own(&["--tangles", "1/3,-1/3"]),
        own(&["--tangles", "1/2,1/2,1/2,1/2"]),
    ]
}

fn c8_end_to_end() -> String {
    let cmds = commands();
    let run = |c: &Vec<String>| cli(&c.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    let (code, out) = run(&cmds[0]);
    assert_eq!(code, 0);
    let v = verdict_of(&out);
    assert_eq!(v["verdict"], "VirtuallyFiberedCertified");
    assert_eq!(v["case"], "CaseI");

    let (code, out) = run(&cmds[1]);
    assert_eq!(code, 0);
    let full: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(full["verdict"]["verdict"], "VirtuallyFiberedCertified");
    assert_eq!(full["verdict"]["case"], "CaseII");

    let (code, out) = run(&cmds[2]);
    assert_eq!(code, 2);
    assert_eq!(verdict_of(&out)["reason"], "e(W_K)=0: not SL2~ type");

    let (code, out) = run(&cmds[3]);
    assert_eq!(code, 2);
    let reason = verdict_of(&out)["reason"].as_str().unwrap_or_default().to_string();
    assert!(reason.contains("(p,n)≠(2,4)"), "reason {reason:?}");

    // library path agrees with the binary
    let r = certify(&fig_case1(), Options { q: QChoice::Auto, case: CaseChoice::Auto, matrix: false, two_component: false }).unwrap();
    assert!(matches!(r.certificate.verdict, Verdict::VirtuallyFiberedCertified { .. }));
    assert!(matches!(r.certificate.case_match, Some(CaseMatch::CaseI { .. })));
    "K(2/5x5,1/15x15) exit 0 CaseI; K(1/6x6) --q 1 exit 0 CaseII; K(1/3,-1/3) exit 2; K(1/2x4) exit 2 citing (p,n)≠(2,4)".into()
}

fn c9_determinism() -> String {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let mut n = 0;
    for (k, c) in commands().into_iter().enumerate() {
        let mut outs = Vec::new();
        for round in 0..2 {
            let prefix = dir.join(format!("det_{k}_{round}"));
            let prefix = prefix.to_string_lossy().to_string();
            let mut args: Vec<&str> = c.iter().map(|s| s.as_str()).collect();
            args.extend(["--matrix", "--emit-svg", &prefix]);
            let (code, out) = cli(&args);
            let svg = std::fs::read(format!("{prefix}.svg")).unwrap_or_default();
            outs.push((code, out, svg));
        }
        assert_eq!(outs[0], outs[1], "command {k} differs between runs");
        n += 1;
    }
    format!("{n} commands x 2 runs, stdout, exit codes and SVG byte-identical")
}
