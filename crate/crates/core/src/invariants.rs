//! Explicit invariant polynomials of the reflection groups, Gegenbauer
//! polynomials `C^(1)_l`, and group-averaged Gegenbauer invariants on S³.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{grid_key, random_unit_points, UnitPoint, PHI};
use crate::orthogroup::{FiniteOrthGroup, GroupName, DEDUP_TOL};
use crate::poly::{MultiPoly, SphereFunction};

fn x(n: usize, i: usize) -> MultiPoly {
    MultiPoly::var(n, i)
}

/// `Σ_i x_i^k` in `n` variables.
fn power_sum(n: usize, k: u32) -> MultiPoly {
    MultiPoly::monomial_symmetric(n, &[k])
}

/// `Δ₄ = Π_{i<j} (x_i² − x_j²)`.
pub fn delta4() -> MultiPoly {
    let mut p = MultiPoly::constant(4, 1.0);
    for i in 0..4 {
        for j in i + 1..4 {
            let f = &x(4, i).pow(2) - &x(4, j).pow(2);
            p = &p * &f;
        }
    }
    p
}

/// The degree-12 H4 invariant with `sign · 462√5 Δ₄` as its last term.
/// `sign = +1` gives the invariant; `−1` reproduces the misprinted variant.
pub fn p12_h4(sign: f64) -> MultiPoly {
    const TERMS: [(f64, &[u32]); 9] = [
        (1.0, &[12]),
        (-22.0, &[10, 2]),
        (99.0, &[8, 4]),
        (198.0, &[8, 2, 2]),
        (-176.0, &[6, 6]),
        (-66.0, &[6, 4, 2]),
        (-4752.0, &[6, 2, 2, 2]),
        (-330.0, &[4, 4, 4]),
        (3960.0, &[4, 4, 2, 2]),
    ];
    let mut p = MultiPoly::zero(4);
    for (c, lambda) in TERMS {
        p = &p + &MultiPoly::monomial_symmetric(4, lambda).scale(c);
    }
    &p + &delta4().scale(sign * 462.0 * 5f64.sqrt())
}

/// The distinguished invariant orthogonal to the constants for `group`.
pub fn invariant_poly(group: GroupName) -> Result<MultiPoly> {
    let s5 = 5f64.sqrt();
    Ok(match group {
        GroupName::A(3) => &(&x(3, 0) * &x(3, 1)) * &x(3, 2),
        GroupName::B(n) if n >= 2 => {
            &power_sum(n, 4) - &MultiPoly::constant(n, 3.0 / (n as f64 + 2.0))
        }
        GroupName::H3 => {
            let f2 = PHI * PHI;
            let sq = |i: usize| x(3, i).pow(2);
            let a = &sq(0).scale(f2) - &sq(1);
            let b = &sq(1).scale(f2) - &sq(2);
            let c = &sq(2).scale(f2) - &sq(0);
            &(&(&a * &b) * &c) + &MultiPoly::constant(3, (2.0 + s5) / 21.0)
        }
        GroupName::A(4) => {
            let m = |e: [u32; 4], c: f64| MultiPoly::monomial(e.to_vec(), c);
            let mut p = MultiPoly::zero(4);
            for term in [
                m([2, 0, 1, 0], PHI),
                m([0, 2, 0, 1], -PHI),
                m([0, 2, 1, 0], 1.0 - PHI),
                m([2, 0, 0, 1], PHI - 1.0),
                m([0, 0, 2, 1], 1.0),
                m([0, 0, 1, 2], -1.0),
            ] {
                p = &p + &term;
            }
            p
        }
        GroupName::F4 => {
            let p = &power_sum(4, 6).scale(16.0) - &power_sum(4, 4).scale(20.0);
            &p + &MultiPoly::constant(4, 5.0)
        }
        GroupName::H4 => p12_h4(1.0),
        other => return Err(Error::UnknownGroup(other.to_string())),
    })
}

/// `C^(1)_l`, the Chebyshev polynomial of the second kind `U_l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GegenbauerC1 {
    pub degree: usize,
    /// Monomial coefficients, constant term first.
    pub coeffs: Vec<f64>,
}

impl GegenbauerC1 {
    pub fn new(degree: usize) -> Self {
        let mut prev: Vec<f64> = vec![1.0];
        if degree == 0 {
            return GegenbauerC1 {
                degree,
                coeffs: prev,
            };
        }
        let mut cur = vec![0.0, 2.0];
        for _ in 1..degree {
            let mut next = vec![0.0; cur.len() + 1];
            for (k, c) in cur.iter().enumerate() {
                next[k + 1] += 2.0 * c;
            }
            for (k, c) in prev.iter().enumerate() {
                next[k] -= c;
            }
            prev = cur;
            cur = next;
        }
        GegenbauerC1 {
            degree,
            coeffs: cur,
        }
    }

    /// Three-term recurrence evaluation (stabler than the coefficients).
    pub fn eval(&self, t: f64) -> f64 {
        chebyshev_u(self.degree, t)
    }
}

pub fn chebyshev_u(l: usize, t: f64) -> f64 {
    let (mut a, mut b) = (1.0, 2.0 * t);
    if l == 0 {
        return a;
    }
    for _ in 1..l {
        let c = 2.0 * t * b - a;
        a = b;
        b = c;
    }
    b
}

pub fn gegenbauer_c1(l: usize) -> GegenbauerC1 {
    GegenbauerC1::new(l)
}

/// `x ↦ (1/|G|) Σ_g C^(1)_l(⟨a, g x⟩)`, stored as the distinct directions
/// `gᵀa` with their multiplicities.
#[derive(Debug, Clone)]
pub struct AveragedGegenbauer {
    pub degree: usize,
    directions: Vec<(Vec<f64>, f64)>,
}

impl AveragedGegenbauer {
    pub fn num_directions(&self) -> usize {
        self.directions.len()
    }
}

impl SphereFunction for AveragedGegenbauer {
    fn eval(&self, x: &[f64]) -> f64 {
        self.directions
            .iter()
            .map(|(d, w)| w * chebyshev_u(self.degree, crate::linalg::dot(d, x)))
            .sum()
    }

    fn degree(&self) -> usize {
        self.degree
    }
}

/// Seed for the 32 vanishing-test points.
const VANISHING_SEED: u64 = 0x5eed_0032;

pub fn averaged_gegenbauer(
    group: &FiniteOrthGroup,
    a: &UnitPoint,
    l: usize,
) -> Result<AveragedGegenbauer> {
    if a.ambient_dim() != group.dim() {
        return Err(Error::InvalidInput(format!(
            "direction in R^{} for a group on R^{}",
            a.ambient_dim(),
            group.dim()
        )));
    }
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut directions: Vec<(Vec<f64>, f64)> = Vec::new();
    let w = 1.0 / group.order() as f64;
    for g in group.elements() {
        let d = g.transpose().apply(a.as_slice());
        let key = grid_key(&d, DEDUP_TOL);
        match index.get(&key) {
            Some(&k) => directions[k].1 += w,
            None => {
                index.insert(key, directions.len());
                directions.push((d, w));
            }
        }
    }
    let f = AveragedGegenbauer {
        degree: l,
        directions,
    };
    let probes = random_unit_points(group.dim(), 32, VANISHING_SEED);
    if probes.iter().all(|p| f.eval(p.as_slice()).abs() < 1e-12) {
        return Err(Error::VanishingAverage);
    }
    Ok(f)
}

/// Spread of `f/p` over sample points where `|p|` is not small.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioStats {
    pub samples: usize,
    pub mean: f64,
    /// `(max − min) / |mean|`.
    pub relative_spread: f64,
}

pub fn ratio_stats(
    f: &dyn SphereFunction,
    p: &dyn SphereFunction,
    points: &[UnitPoint],
) -> RatioStats {
    let ratios: Vec<f64> = points
        .iter()
        .filter_map(|x| {
            let d = p.eval(x.as_slice());
            (d.abs() > 1e-6).then(|| f.eval(x.as_slice()) / d)
        })
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(*r), hi.max(*r))
        });
    RatioStats {
        samples: ratios.len(),
        mean,
        relative_spread: (hi - lo) / mean.abs(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignErrorReport {
    pub plus: RatioStats,
    pub minus: RatioStats,
    pub plus_proportional: bool,
    pub minus_proportional: bool,
}

impl SignErrorReport {
    /// The `+` form matches the group average and the `−` form does not.
    pub fn confirmed(&self) -> bool {
        self.plus_proportional && !self.minus_proportional
    }
}

/// Compares both signs of the Δ₄ term against the H4 Gegenbauer average
/// (`a = e₁`, `l = 12`) on 100 seeded random points.
pub fn sign_error_check(h4: &FiniteOrthGroup) -> Result<SignErrorReport> {
    if h4.name() != Some(GroupName::H4) {
        return Err(Error::InvalidInput("sign check needs the group H4".into()));
    }
    let e1 = UnitPoint::new(vec![1.0, 0.0, 0.0, 0.0])?;
    let avg = averaged_gegenbauer(h4, &e1, 12)?;
    let points = random_unit_points(4, 100, 0x5eed_0100);
    let plus = ratio_stats(&avg, &p12_h4(1.0), &points);
    let minus = ratio_stats(&avg, &p12_h4(-1.0), &points);
    Ok(SignErrorReport {
        plus_proportional: plus.relative_spread < 1e-8,
        minus_proportional: minus.relative_spread <= 1e-3,
        plus,
        minus,
    })
}
