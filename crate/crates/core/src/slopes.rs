use num::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::{int, q, ser_q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("gluing matrix ({a},{b};{c},{d}) has determinant {det}, expected 1")]
    Determinant { a: i64, b: i64, c: i64, d: i64, det: i64 },
    #[error("gluing matrix needs c ≠ 0")]
    ZeroC,
    #[error("total Euler number must be nonzero")]
    ZeroEuler,
    #[error("Euler number {e} must be even to split over {v} leaves")]
    OddEuler { e: i64, v: usize },
    #[error("q must be nonzero")]
    ZeroQ,
    #[error("e' = e - 2q(V-1) vanishes for q={q}; try q={suggest}")]
    DegenerateLeaf { q: i64, suggest: i64 },
    #[error("star needs at least one leaf")]
    NoLeaves,
    #[error("epsilon vector has {got} entries, star has {want} leaves")]
    EpsilonLength { got: usize, want: usize },
    #[error("Case I slope data needs an odd nonzero Euler number, got {0}")]
    NotCaseOne(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GluingMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GluingMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, SlopeError> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(SlopeError::Determinant { a, b, c, d, det });
        }
        if c == 0 {
            return Err(SlopeError::ZeroC);
        }
        Ok(GluingMatrix { a, b, c, d })
    }

    pub fn table() -> Self {
        GluingMatrix { a: 1, b: 0, c: 1, d: 1 }
    }

    pub fn case_one() -> Self {
        GluingMatrix { a: 1, b: 0, c: 2, d: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QChoice {
    Auto,
    Fixed(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarGraph {
    pub e: i64,
    pub q: i64,
    pub parts: Vec<i64>,
}

impl StarGraph {
    pub fn leaves(&self) -> usize {
        self.parts.len()
    }

    pub fn e_prime(&self) -> i64 {
        *self.parts.last().expect("nonempty star")
    }
}

pub fn build_star(e: i64, v: usize, choice: QChoice) -> Result<StarGraph, SlopeError> {
    if v == 0 {
        return Err(SlopeError::NoLeaves);
    }
    if e == 0 {
        return Err(SlopeError::ZeroEuler);
    }
    if v > 1 && e % 2 != 0 {
        return Err(SlopeError::OddEuler { e, v });
    }
    let span = 2 * (v as i64 - 1);
    let admissible = |q: i64| q != 0 && e - q * span != 0;
    let q = match choice {
        QChoice::Fixed(0) => return Err(SlopeError::ZeroQ),
        QChoice::Fixed(q) if !admissible(q) => {
            let suggest = (1..).flat_map(|k| [k, -k]).find(|&k| admissible(k)).unwrap();
            return Err(SlopeError::DegenerateLeaf { q, suggest });
        }
        QChoice::Fixed(q) => q,
        QChoice::Auto => (1..).flat_map(|k| [k, -k]).find(|&k| admissible(k)).unwrap(),
    };
    let mut parts = vec![2 * q; v - 1];
    parts.push(e - q * span);
    Ok(StarGraph { e, q, parts })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaSolution {
    #[serde(serialize_with = "ser_q")]
    pub lambda: Rational,
    #[serde(serialize_with = "ser_vec")]
    pub lambda_bar: Vec<Rational>,
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&crate::rational::Q(*r))?;
    }
    seq.end()
}

impl LambdaSolution {
    /// First row of the system: −eλ + (2/c)Σλ̄.
    pub fn residual(&self, star: &StarGraph, g: &GluingMatrix) -> Rational {
        -int(star.e) * self.lambda + q(2, g.c) * self.lambda_bar.iter().sum::<Rational>()
    }
}

pub fn solve_wang_yu(star: &StarGraph, g: &GluingMatrix) -> LambdaSolution {
    let v = star.leaves();
    let lambda = int(1);
    let mut lambda_bar: Vec<Rational> = (0..v - 1).map(|_| int(g.c * star.q)).collect();
    // last unknown from the first row; the others are free and fixed as cq
    let rest: Rational = lambda_bar.iter().sum();
    lambda_bar.push((int(star.e) * lambda - q(2, g.c) * rest) * q(g.c, 2));
    let sol = LambdaSolution { lambda, lambda_bar };
    assert!(sol.residual(star, g).is_zero());
    sol
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlopePair {
    pub t: i64,
    pub u: i64,
}

impl SlopePair {
    pub fn value(&self) -> Rational {
        q(self.t, self.u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafIntegers {
    pub minus: SlopePair,
    pub plus: SlopePair,
    pub bar_minus: SlopePair,
    pub bar_plus: SlopePair,
    pub bar_zero: SlopePair,
    /// true when every pair follows the table's parity branches, false for plain reduced fractions
    pub table_branch: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafSlopes {
    pub e_part: i64,
    pub eps_minus: i8,
    pub eps_plus: i8,
    #[serde(serialize_with = "ser_q")]
    pub minus: Rational,
    #[serde(serialize_with = "ser_q")]
    pub plus: Rational,
    #[serde(serialize_with = "ser_q")]
    pub bar_minus: Rational,
    #[serde(serialize_with = "ser_q")]
    pub bar_plus: Rational,
    #[serde(serialize_with = "ser_q")]
    pub bar_zero: Rational,
    #[serde(serialize_with = "ser_q")]
    pub residual: Rational,
    pub integers: LeafIntegers,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeTable {
    pub leaves: Vec<LeafSlopes>,
    #[serde(serialize_with = "ser_q")]
    pub central_residual: Rational,
    pub horizontal: bool,
    pub semibundle: bool,
}

pub fn canonical_eps(v: usize) -> Vec<(i8, i8)> {
    vec![(-1, 1); v]
}

fn reduced(r: Rational) -> SlopePair {
    SlopePair { t: *r.numer(), u: *r.denom() }
}

fn table_integers(leaf: usize, star: &StarGraph) -> [SlopePair; 5] {
    let sp = |t, u| SlopePair { t, u };
    if leaf + 1 < star.leaves() {
        let q = star.q;
        let zero = if q % 2 != 0 { sp(-2, q) } else { sp(-1, q / 2) };
        [sp(q - 1, 1), sp(1 - q, 1), sp(1 - q, q), sp(1 + q, q), zero]
    } else {
        let h = star.e_prime() / 2;
        let zero = if star.e_prime() % 4 != 0 { sp(-2, h) } else { sp(-1, h / 2) };
        [sp(h - 1, 1), sp(1 - h, 1), sp(1 - h, h), sp(1 + h, h), zero]
    }
}

pub fn boundary_slopes(
    star: &StarGraph,
    g: &GluingMatrix,
    sol: &LambdaSolution,
    eps: &[(i8, i8)],
) -> Result<SlopeTable, SlopeError> {
    if eps.len() != star.leaves() {
        return Err(SlopeError::EpsilonLength { got: eps.len(), want: star.leaves() });
    }
    let (a, c, d) = (int(g.a), int(g.c), int(g.d));
    let lam = sol.lambda;
    let mut leaves = Vec::new();
    for (i, (&e_part, &(em, ep))) in star.parts.iter().zip(eps).enumerate() {
        let lb = sol.lambda_bar[i];
        let (em_r, ep_r) = (int(em as i64), int(ep as i64));
        let minus = em_r * lb / (-lam * c) - d / c;
        let plus = ep_r * lb / (lam * c) - (c * int(e_part) - d) / c;
        let bar_minus = em_r * lam / (-lb * c) - a / c;
        let bar_plus = ep_r * lam / (lb * c) + a / c;
        let bar_zero = -(bar_minus + bar_plus);
        let residual = bar_minus + bar_plus + bar_zero;
        let values = [minus, plus, bar_minus, bar_plus, bar_zero];
        let from_table = table_integers(i, star);
        let table_branch = *g == GluingMatrix::table()
            && from_table.iter().zip(&values).all(|(p, v)| p.u != 0 && p.value() == *v);
        let ints: Vec<SlopePair> = if table_branch {
            from_table.to_vec()
        } else {
            values.iter().map(|&v| reduced(v)).collect()
        };
        leaves.push(LeafSlopes {
            e_part,
            eps_minus: em,
            eps_plus: ep,
            minus,
            plus,
            bar_minus,
            bar_plus,
            bar_zero,
            residual,
            integers: LeafIntegers {
                minus: ints[0],
                plus: ints[1],
                bar_minus: ints[2],
                bar_plus: ints[3],
                bar_zero: ints[4],
                table_branch,
            },
        });
    }
    let central_residual: Rational = leaves.iter().map(|l| l.minus + l.plus).sum();
    let horizontal = central_residual.is_zero() && leaves.iter().all(|l| l.residual.is_zero());
    let semibundle = eps.iter().all(|&(m, p)| m == -p);
    Ok(SlopeTable { leaves, central_residual, horizontal, semibundle })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseOneSlopes {
    pub e: i64,
    #[serde(serialize_with = "ser_q")]
    pub gamma1: Rational,
    #[serde(serialize_with = "ser_q")]
    pub gamma2: Rational,
    /// slope(t) = intercept + coefficient·(t/δ), t/δ ∈ [−1, 1]
    #[serde(serialize_with = "ser_q")]
    pub interpolation_intercept: Rational,
    #[serde(serialize_with = "ser_q")]
    pub interpolation_coefficient: Rational,
    pub wrap: i64,
}

impl CaseOneSlopes {
    pub fn interpolate(&self, t_over_delta: Rational) -> Rational {
        self.interpolation_intercept + self.interpolation_coefficient * t_over_delta
    }
}

pub fn case1_slope_data(e: i64) -> Result<CaseOneSlopes, SlopeError> {
    if e == 0 || e % 2 == 0 {
        return Err(SlopeError::NotCaseOne(e));
    }
    Ok(CaseOneSlopes {
        e,
        gamma1: q(1, 2 * e) - q(1, 2),
        gamma2: -q(1, 2 * e) - q(1, 2),
        interpolation_intercept: q(-1, 2),
        interpolation_coefficient: -q(1, 2 * e),
        wrap: (1 - e) / 2,
    })
}

/// γ₁, γ₂ and the wrap count read off the generic solver with one leaf and c = 2.
pub fn case1_from_solver(e: i64) -> Result<(Rational, Rational, Rational), SlopeError> {
    let star = build_star(e, 1, QChoice::Auto)?;
    let g = GluingMatrix::case_one();
    let sol = solve_wang_yu(&star, &g);
    let t = boundary_slopes(&star, &g, &sol, &canonical_eps(1))?;
    let leaf = &t.leaves[0];
    // the T₊ basis is reversed relative to T₋, so γ₂ reads the negated slope
    Ok((leaf.bar_minus, -leaf.bar_plus, leaf.plus))
}

pub fn case2_wrap_counts(q: i64, e_prime: i64) -> (i64, i64) {
    (q - 1, 1 - e_prime / 2)
}

/// |λ/u±| and |λ̄/ū±| per leaf, for the component-count check.
pub fn component_counts(table: &SlopeTable, sol: &LambdaSolution) -> Vec<(Rational, Rational)> {
    table
        .leaves
        .iter()
        .zip(&sol.lambda_bar)
        .map(|(l, lb)| {
            (
                (sol.lambda / int(l.integers.minus.u)).abs(),
                (*lb / int(l.integers.bar_minus.u)).abs(),
            )
        })
        .collect()
}
