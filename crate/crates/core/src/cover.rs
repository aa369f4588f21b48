use num::integer::gcd;
use serde::Serialize;
use thiserror::Error;

use crate::rational::{int, q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbifoldSurface {
    pub genus: u64,
    pub cone_orders: Vec<u64>,
}

impl OrbifoldSurface {
    pub fn sphere(cone_orders: Vec<u64>) -> Self {
        OrbifoldSurface { genus: 0, cone_orders }
    }

    pub fn chi_orb(&self) -> Rational {
        let mut chi = int(2 - 2 * self.genus as i64);
        for &o in &self.cone_orders {
            chi -= int(1) - q(1, o as i64);
        }
        chi
    }

    pub fn is_smooth(&self) -> bool {
        self.cone_orders.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicHom {
    pub modulus: u64,
    pub cone_images: Vec<u64>,
    pub handle_images: Vec<u64>,
}

impl CyclicHom {
    pub fn new(modulus: u64, cone_images: Vec<i64>, handles: usize) -> Self {
        let d = modulus as i64;
        CyclicHom {
            modulus,
            cone_images: cone_images.into_iter().map(|x| x.rem_euclid(d) as u64).collect(),
            handle_images: vec![0; handles],
        }
    }

    /// ±1 view of a residue that is 1 or d−1; None otherwise.
    pub fn sign_view(&self, i: usize) -> Option<i8> {
        let x = self.cone_images[i];
        if self.modulus > 2 && x == 1 {
            Some(1)
        } else if self.modulus > 2 && x == self.modulus - 1 {
            Some(-1)
        } else {
            None
        }
    }

    fn order_of(&self, x: u64) -> u64 {
        self.modulus / gcd(x, self.modulus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("hom has {images} cone images but the surface has {points} cone points")]
    IndexMismatch { images: usize, points: usize },
    #[error("relator maps to {sum} mod {modulus}, not 0")]
    Relator { sum: u64, modulus: u64 },
    #[error("cone point {index} of order {order} maps to {image}, whose order does not divide it")]
    ConeOrder { index: usize, order: u64, image: u64 },
    #[error("hom is not surjective; the cover is disconnected")]
    Disconnected,
    #[error("invalid parameters: {0}")]
    Parameters(String),
}

/// A cone point upstairs, `sheet` in `0..d/h` over `base_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiftedPoint {
    pub sheet: u64,
    pub base_index: usize,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub surface: OrbifoldSurface,
    pub lifts: Vec<LiftedPoint>,
    pub degree: u64,
}

fn check(base: &OrbifoldSurface, hom: &CyclicHom) -> Result<(), CoverError> {
    let d = hom.modulus;
    if hom.cone_images.len() != base.cone_orders.len() {
        return Err(CoverError::IndexMismatch {
            images: hom.cone_images.len(),
            points: base.cone_orders.len(),
        });
    }
    let sum = hom.cone_images.iter().sum::<u64>() % d;
    if sum != 0 {
        return Err(CoverError::Relator { sum, modulus: d });
    }
    for (index, (&order, &image)) in base.cone_orders.iter().zip(&hom.cone_images).enumerate() {
        if (order * image) % d != 0 {
            return Err(CoverError::ConeOrder { index, order, image });
        }
    }
    let g = hom
        .cone_images
        .iter()
        .chain(&hom.handle_images)
        .fold(d, |acc, &x| gcd(acc, x));
    if g != 1 {
        return Err(CoverError::Disconnected);
    }
    Ok(())
}

pub fn hom_validity(hom: &CyclicHom, base: &OrbifoldSurface) -> bool {
    check(base, hom).is_ok()
}

pub fn riemann_hurwitz(base: &OrbifoldSurface, hom: &CyclicHom) -> Result<Cover, CoverError> {
    check(base, hom)?;
    let d = hom.modulus;
    let mut lifts = Vec::new();
    let max_sheets = base
        .cone_orders
        .iter()
        .zip(&hom.cone_images)
        .map(|(_, &x)| d / hom.order_of(x))
        .max()
        .unwrap_or(0);
    for sheet in 0..max_sheets {
        for (i, (&o, &x)) in base.cone_orders.iter().zip(&hom.cone_images).enumerate() {
            let h = hom.order_of(x);
            if sheet < d / h && o / h > 1 {
                lifts.push(LiftedPoint { sheet, base_index: i, order: o / h });
            }
        }
    }
    let chi_orb = base.chi_orb() * int(d as i64);
    let chi_underlying: Rational = chi_orb
        + lifts.iter().map(|l| int(1) - q(1, l.order as i64)).sum::<Rational>();
    debug_assert!(chi_underlying.is_integer());
    let genus = (2 - chi_underlying.to_integer()) / 2;
    let surface = OrbifoldSurface {
        genus: genus as u64,
        cone_orders: lifts.iter().map(|l| l.order).collect(),
    };
    Ok(Cover { surface, lifts, degree: d })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverTower {
    pub base: OrbifoldSurface,
    pub mid: OrbifoldSurface,
    pub top: OrbifoldSurface,
    pub hom1: CyclicHom,
    pub hom2: CyclicHom,
    pub degrees: (u64, u64),
    pub mid_points: Vec<LiftedPoint>,
}

impl CoverTower {
    pub fn chi_top(&self) -> i64 {
        2 - 2 * self.top.genus as i64
    }
}

pub fn case1_tower(p: u64, r: u64, k: usize, n: usize) -> Result<CoverTower, CoverError> {
    let odd3 = |x: u64| x >= 3 && x % 2 == 1;
    if !odd3(p) || !odd3(r) || k == 0 || k >= n {
        return Err(CoverError::Parameters(format!("p={p}, r={r}, k={k}, n={n}")));
    }
    let tail = (n - k) as u64;
    if !(k as u64).is_multiple_of(p) || !tail.is_multiple_of(p) || !tail.is_multiple_of(r) {
        return Err(CoverError::Parameters(format!("divisibility fails for k={k}, n={n}")));
    }
    let orders = (0..n).map(|i| if i < k { p } else { p * r }).collect();
    let base = OrbifoldSurface::sphere(orders);
    let hom1 = CyclicHom::new(r, (0..n).map(|i| i64::from(i >= k)).collect(), 0);
    let mid = riemann_hurwitz(&base, &hom1)?;
    let hom2 = CyclicHom::new(p, vec![1; mid.lifts.len()], 2 * mid.surface.genus as usize);
    let top = riemann_hurwitz(&mid.surface, &hom2)?;
    Ok(CoverTower {
        base,
        mid: mid.surface,
        top: top.surface,
        hom1,
        hom2,
        degrees: (r, p),
        mid_points: mid.lifts,
    })
}

/// Sign pattern of the second homomorphism for uniform even denominators.
pub fn case2_signs(n: usize) -> Vec<i8> {
    let mut s = vec![0i8; n];
    for i in 1..=n / 2 {
        s[i - 1] = if i % 4 == 1 || i % 4 == 2 { 1 } else { -1 };
    }
    for i in n / 2 + 1..=n {
        s[i - 1] = -s[n - i];
    }
    s
}

pub fn case2_tower(p: u64, m: u64, n: usize) -> Result<CoverTower, CoverError> {
    if p != 2 * m || m.is_multiple_of(2) || n < 4 || !n.is_multiple_of(2) || (p == 2 && n == 4) {
        return Err(CoverError::Parameters(format!("p={p}, m={m}, n={n}")));
    }
    let base = OrbifoldSurface::sphere(vec![p; n]);
    let hom1 = CyclicHom::new(2, vec![1; n], 0);
    let mid = riemann_hurwitz(&base, &hom1)?;
    let signs = case2_signs(n);
    let images = if m == 1 { vec![] } else { signs.iter().map(|&s| s as i64).collect() };
    let hom2 = CyclicHom::new(m, images, 2 * mid.surface.genus as usize);
    let top = if m == 1 {
        Cover { surface: mid.surface.clone(), lifts: vec![], degree: 1 }
    } else {
        riemann_hurwitz(&mid.surface, &hom2)?
    };
    Ok(CoverTower {
        base,
        mid: mid.surface,
        top: top.surface,
        hom1,
        hom2,
        degrees: (2, m),
        mid_points: mid.lifts,
    })
}
