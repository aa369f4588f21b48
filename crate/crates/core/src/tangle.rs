use std::fmt;

use num::integer::gcd;
use num::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::{int, q, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RationalTangle {
    pub q: i64,
    pub p: i64,
}

impl RationalTangle {
    pub fn value(&self) -> Rational {
        q(self.q, self.p)
    }
}

impl fmt::Display for RationalTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.q, self.p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TangleDecomposition {
    tangles: Vec<RationalTangle>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty tangle list")]
    Empty,
    #[error("malformed fraction at index {index}: {detail}")]
    Malformed { index: usize, detail: String },
    #[error("denominator {p} < 2 at index {index}")]
    SmallDenominator { index: usize, p: i64 },
    #[error("fraction {q}/{p} at index {index} is not reduced (gcd {g})")]
    NotReduced { index: usize, q: i64, p: i64, g: i64 },
}

impl TangleDecomposition {
    pub fn new(tangles: Vec<RationalTangle>) -> Result<Self, ParseError> {
        if tangles.is_empty() {
            return Err(ParseError::Empty);
        }
        for (index, t) in tangles.iter().enumerate() {
            if t.p < 2 {
                return Err(ParseError::SmallDenominator { index, p: t.p });
            }
            let g = gcd(t.q.abs(), t.p);
            if g != 1 {
                return Err(ParseError::NotReduced { index, q: t.q, p: t.p, g });
            }
        }
        Ok(TangleDecomposition { tangles })
    }

    pub fn tangles(&self) -> &[RationalTangle] {
        &self.tangles
    }

    pub fn len(&self) -> usize {
        self.tangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tangles.is_empty()
    }

    pub fn rotated(&self, offset: usize) -> TangleDecomposition {
        let mut t = self.tangles.clone();
        let len = t.len();
        t.rotate_left(offset % len);
        TangleDecomposition { tangles: t }
    }
}

impl fmt::Display for TangleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tangles.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Minus,
    Slash,
}

fn lex_fraction(index: usize, s: &str) -> Result<Vec<Tok>, ParseError> {
    let bad = |detail: String| ParseError::Malformed { index, detail };
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '-' {
            out.push(Tok::Minus);
            chars.next();
        } else if c == '/' {
            out.push(Tok::Slash);
            chars.next();
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    digits.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            let v = digits
                .parse::<i64>()
                .map_err(|_| bad(format!("integer out of range: {digits}")))?;
            out.push(Tok::Num(v));
        } else {
            return Err(bad(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// Parse `frac ("," frac)*` with `frac := ["-"] digits "/" digits`.
pub fn parse_decomposition(text: &str) -> Result<TangleDecomposition, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut tangles = Vec::new();
    for (index, piece) in text.split(',').enumerate() {
        let toks = lex_fraction(index, piece)?;
        let (neg, rest) = match toks.first() {
            Some(Tok::Minus) => (true, &toks[1..]),
            _ => (false, &toks[..]),
        };
        let (qa, pa) = match rest {
            [Tok::Num(a), Tok::Slash, Tok::Num(b)] => (*a, *b),
            _ => {
                return Err(ParseError::Malformed {
                    index,
                    detail: format!("expected [-]q/p, got {:?}", piece.trim()),
                })
            }
        };
        tangles.push(RationalTangle { q: if neg { -qa } else { qa }, p: pa });
    }
    TangleDecomposition::new(tangles)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MontesinosInvariants {
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub euler_number: Rational,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub chi: Rational,
    pub components: u32,
    pub is_sl2: bool,
}

pub fn invariants(d: &TangleDecomposition) -> MontesinosInvariants {
    let n = d.len() as i64;
    let euler_number = -d.tangles.iter().map(|t| t.value()).sum::<Rational>();
    let chi = int(2 - n) + d.tangles.iter().map(|t| q(1, t.p)).sum::<Rational>();
    let even = d.tangles.iter().filter(|t| t.p % 2 == 0).count() as u32;
    let components = if even > 0 {
        even
    } else {
        let s: i64 = d.tangles.iter().map(|t| t.q).sum();
        if s.rem_euclid(2) == 1 {
            1
        } else {
            2
        }
    };
    let is_sl2 = !euler_number.is_zero() && chi.is_negative();
    MontesinosInvariants { euler_number, chi, components, is_sl2 }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "variant")]
pub enum CaseMatch {
    CaseI { p: u64, r: u64, k: usize, n: usize, rotation_offset: usize },
    CaseII { p: u64, m: u64, n: usize },
    None { reason: String },
}

impl CaseMatch {
    pub fn is_match(&self) -> bool {
        !matches!(self, CaseMatch::None { .. })
    }
}

fn case_one_at(dens: &[i64], offset: usize) -> Option<Result<CaseMatch, String>> {
    let n = dens.len();
    let rot: Vec<i64> = (0..n).map(|i| dens[(i + offset) % n]).collect();
    let p = rot[0];
    let k = rot.iter().take_while(|&&x| x == p).count();
    if k == n {
        return None;
    }
    let big = rot[k];
    if rot[k..].iter().any(|&x| x != big) {
        return None;
    }
    // The p-block must start right after the tail block.
    if offset > 0 && dens[offset - 1] == p && k < n {
        return None;
    }
    if big % p != 0 {
        return Some(Err(format!(
            "two denominator blocks {p} and {big}: {big} is not a multiple of {p}"
        )));
    }
    let r = big / p;
    let mut fails = Vec::new();
    if p < 3 || p % 2 == 0 {
        fails.push(format!("p={p} must be odd and ≥ 3"));
    }
    if r < 3 || r % 2 == 0 {
        fails.push(format!("r={r} must be odd and ≥ 3"));
    }
    if k as i64 % p != 0 {
        fails.push(format!("k={k} must be a multiple of p={p}"));
    }
    let tail = (n - k) as i64;
    if tail % p != 0 || tail % r != 0 {
        fails.push(format!("n-k={tail} must be a multiple of p={p} and r={r}"));
    }
    if fails.is_empty() {
        Some(Ok(CaseMatch::CaseI {
            p: p as u64,
            r: r as u64,
            k,
            n,
            rotation_offset: offset,
        }))
    } else {
        Some(Err(fails.join("; ")))
    }
}

/// Match the decomposition against the two admissible shapes, trying every rotation.
pub fn classify_theorem_case(d: &TangleDecomposition) -> CaseMatch {
    let dens: Vec<i64> = d.tangles.iter().map(|t| t.p).collect();
    let n = dens.len();
    if dens.iter().all(|&x| x == dens[0]) {
        let p = dens[0];
        if p % 2 == 1 {
            return CaseMatch::None {
                reason: "uniform odd denominator; k=0 or k=n is prior work".into(),
            };
        }
        let m = p / 2;
        if m % 2 == 0 {
            return CaseMatch::None {
                reason: format!("uniform even denominator p={p} with m=p/2={m} even"),
            };
        }
        if n < 4 || n % 2 == 1 {
            return CaseMatch::None {
                reason: format!("uniform denominator p={p} needs n ≥ 4 even, got n={n}"),
            };
        }
        if p == 2 && n == 4 {
            return CaseMatch::None {
                reason: "excluded case (p,n)=(2,4): requires (p,n)≠(2,4)".into(),
            };
        }
        return CaseMatch::CaseII { p: p as u64, m: m as u64, n };
    }
    let mut first_err = None;
    for offset in 0..n {
        match case_one_at(&dens, offset) {
            Some(Ok(m)) => return m,
            Some(Err(e)) if first_err.is_none() => first_err = Some(e),
            _ => {}
        }
    }
    CaseMatch::None {
        reason: first_err
            .unwrap_or_else(|| "denominators do not form two cyclic blocks p and pr".into()),
    }
}

/// Euler number of the circle bundle over the top cover: `pr·e(W_K)` or `p·e(W_K)`.
pub fn cover_euler(d: &TangleDecomposition, m: &CaseMatch) -> Option<i64> {
    match *m {
        CaseMatch::CaseI { p, r, .. } => {
            let e = invariants(d).euler_number * int((p * r) as i64);
            Some(e.to_integer())
        }
        CaseMatch::CaseII { .. } => Some(-d.tangles.iter().map(|t| t.q).sum::<i64>()),
        CaseMatch::None { .. } => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideCondition {
    pub name: String,
    pub holds: bool,
}

/// Side conditions reported alongside a match; they never block the pipeline.
pub fn side_conditions(d: &TangleDecomposition, m: &CaseMatch) -> Vec<SideCondition> {
    match *m {
        CaseMatch::CaseI { k, rotation_offset, r, .. } => {
            let rot = d.rotated(rotation_offset);
            let head: i64 = rot.tangles[..k].iter().map(|t| t.q).sum();
            let tail: i64 = rot.tangles[k..].iter().map(|t| t.q).sum();
            let comps = invariants(d).components;
            vec![
                SideCondition {
                    name: "r(q_1+…+q_k)+q_{k+1}+…+q_n ≠ 0".into(),
                    holds: r as i64 * head + tail != 0,
                },
                SideCondition { name: "K is a knot (one component)".into(), holds: comps == 1 },
            ]
        }
        CaseMatch::CaseII { .. } => {
            let s: i64 = d.tangles.iter().map(|t| t.q).sum();
            vec![
                SideCondition { name: "q_1+…+q_n ≠ 0".into(), holds: s != 0 },
                SideCondition {
                    name: "every q_i odd".into(),
                    holds: d.tangles.iter().all(|t| t.q.rem_euclid(2) == 1),
                },
            ]
        }
        CaseMatch::None { .. } => vec![],
    }
}
