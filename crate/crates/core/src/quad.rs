//! Exact sphere moments, path integrals along curves, and design-strength
//! certification by monomial sweeps.
//!
//! A curve contributes through a [`QuadratureRule`]: nodes on the curve with
//! weights normalized by its length. Geodesic arcs use Gauss–Legendre nodes
//! in arc length; the integrand `s ↦ p(γ(s))` is a trigonometric polynomial,
//! so convergence under node doubling is spectral and is checked explicitly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycles::GeodesicArc;
use crate::error::{Error, Result};
use crate::linalg::UnitPoint;
use crate::poly::SphereFunction;

/// Maximum change under node doubling accepted as converged.
pub const QUAD_GATE: f64 = 1e-13;

/// Default certification residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Extra nodes beyond the polynomial degree in the base rule.
const EXTRA_NODES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().sum::<u32>() as usize
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(x)
            .map(|(&k, xi)| xi.powi(k as i32))
            .product()
    }
}

/// Normalized integral of `x^α` over the unit sphere in R^{len(α)}.
///
/// Zero if any exponent is odd; otherwise `Π (α_i - 1)!! / Π_{j<K} (n + 2j)`
/// with `n` the number of variables and `K = |α|/2`.
pub fn sphere_moment(m: &Monomial) -> f64 {
    let n = m.exponents.len() as f64;
    if m.exponents.iter().any(|k| k % 2 == 1) {
        return 0.0;
    }
    let mut num = 1.0;
    for &k in &m.exponents {
        let mut j = 1;
        while j < k {
            num *= j as f64;
            j += 2;
        }
    }
    let half = m.degree() / 2;
    let den: f64 = (0..half).map(|j| n + 2.0 * j as f64).product();
    num / den
}

/// All monomials in `nvars` variables of total degree `degree`, in
/// lexicographically decreasing exponent order.
pub fn monomials_of_degree(nvars: usize, degree: usize) -> Vec<Monomial> {
    fn rec(rest: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if rest == 1 {
            prefix.push(left);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            rec(rest - 1, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, degree as u32, &mut Vec::new(), &mut out);
    out
}

/// Monomials of degree `0..=max_degree`, sorted by degree.
pub fn monomials_up_to(nvars: usize, max_degree: usize) -> Vec<Monomial> {
    (0..=max_degree)
        .flat_map(|d| monomials_of_degree(nvars, d))
        .collect()
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Neumaier-compensated sum, so long rules stay well inside the
/// convergence gate.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Nodes on the sphere with weights. For curves, weights sum to 1.
#[derive(Debug, Clone, Default)]
pub struct QuadratureRule {
    pub dim: usize,
    /// Node coordinates, flattened node-major.
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(dim: usize) -> Self {
        QuadratureRule {
            dim,
            ..Default::default()
        }
    }

    pub fn push(&mut self, x: &[f64], w: f64) {
        debug_assert_eq!(x.len(), self.dim);
        self.points.extend_from_slice(x);
        self.weights.push(w);
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn apply(&self, f: &dyn SphereFunction) -> f64 {
        compensated_sum((0..self.len()).map(|i| self.weights[i] * f.eval(self.node(i))))
    }

    fn abs_apply(&self, f: &dyn SphereFunction) -> f64 {
        (0..self.len())
            .map(|i| (self.weights[i] * f.eval(self.node(i))).abs())
            .sum()
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.weights.iter_mut().for_each(|w| *w *= s);
        self
    }
}

/// A closed, piecewise smooth curve on the sphere.
pub trait Curve: Sync {
    fn length(&self) -> f64;

    fn ambient_dim(&self) -> usize;

    /// Rule with `nodes` nodes per smooth piece, weights divided by the
    /// total length so that they sum to 1.
    fn normalized_rule(&self, nodes: usize) -> QuadratureRule;

    /// One polyline per smooth piece, `per_piece` points each, endpoints
    /// included.
    fn sample(&self, per_piece: usize) -> Vec<Vec<Vec<f64>>>;
}

fn gated<F>(degree: usize, mut integrate: F) -> Result<f64>
where
    F: FnMut(usize) -> (f64, f64),
{
    let mut n = degree + EXTRA_NODES;
    let (mut prev, _) = integrate(n);
    let mut delta = f64::NAN;
    for _ in 0..2 {
        n *= 2;
        let (next, scale) = integrate(n);
        delta = (next - prev).abs();
        if delta < QUAD_GATE * scale.max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNotConverged {
        nodes: n,
        delta,
    })
}

/// Path integral `∫_arc f` with respect to arc length.
pub fn arc_integral(arc: &GeodesicArc, f: &dyn SphereFunction) -> Result<f64> {
    gated(f.degree(), |n| {
        let rule = arc.rule(n);
        (rule.apply(f), rule.abs_apply(f))
    })
}

/// `(1/ℓ) ∫_arc f`.
pub fn arc_average(arc: &GeodesicArc, f: &dyn SphereFunction) -> Result<f64> {
    Ok(arc_integral(arc, f)? / arc.length())
}

/// `(1/ℓ(γ)) ∫_γ f`.
pub fn cycle_average(curve: &dyn Curve, f: &dyn SphereFunction) -> Result<f64> {
    gated(f.degree(), |n| {
        let rule = curve.normalized_rule(n);
        (rule.apply(f), rule.abs_apply(f))
    })
}

pub fn point_average(points: &[UnitPoint], f: &dyn SphereFunction) -> f64 {
    assert!(!points.is_empty(), "point average over an empty set");
    compensated_sum(points.iter().map(|x| f.eval(x.as_slice()))) / points.len() as f64
}

/// Outcome of a monomial sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub claimed_t: usize,
    pub tol: f64,
    /// Max residual over the monomials of each degree `0..=claimed_t + 1`.
    pub residuals_by_degree: Vec<f64>,
    pub certified: bool,
    pub first_failing_degree: Option<usize>,
}

impl CertReport {
    fn from_residuals(claimed_t: usize, tol: f64, residuals_by_degree: Vec<f64>) -> Self {
        let certified = residuals_by_degree[..=claimed_t].iter().all(|r| *r < tol);
        let first_failing_degree = residuals_by_degree.iter().position(|r| r.is_nan() || *r >= tol);
        CertReport {
            claimed_t,
            tol,
            residuals_by_degree,
            certified,
            first_failing_degree,
        }
    }

    /// Largest residual over degrees `0..=claimed_t`.
    pub fn max_residual(&self) -> f64 {
        self.residuals_by_degree[..=self.claimed_t]
            .iter()
            .fold(0.0, |a, b| a.max(*b))
    }

    /// Whether degree `claimed_t + 1` is also integrated exactly.
    pub fn next_degree_passes(&self) -> bool {
        self.residuals_by_degree[self.claimed_t + 1] < self.tol
    }
}

/// Per-node coordinate powers `x_i^k`, `k <= max_degree`, with node weights.
struct PowerTable {
    dim: usize,
    stride: usize,
    pows: Vec<f64>,
    weights: Vec<f64>,
}

impl PowerTable {
    fn new(rule: &QuadratureRule, max_degree: usize) -> Self {
        let dim = rule.dim;
        let stride = max_degree + 1;
        let mut pows = Vec::with_capacity(rule.len() * dim * stride);
        for i in 0..rule.len() {
            for &x in rule.node(i) {
                let mut p = 1.0;
                for _ in 0..stride {
                    pows.push(p);
                    p *= x;
                }
            }
        }
        PowerTable {
            dim,
            stride,
            pows,
            weights: rule.weights.clone(),
        }
    }

    fn integrate(&self, m: &Monomial) -> f64 {
        let e = m.exponents();
        let block = self.dim * self.stride;
        compensated_sum(self.pows.chunks_exact(block).zip(&self.weights).map(|(node, w)| {
            let mut v = *w;
            for (i, &k) in e.iter().enumerate() {
                v *= node[i * self.stride + k as usize];
            }
            v
        }))
    }
}

/// A curve's normalized rule at the base node count and its refinements.
struct GatedCurve<'a> {
    curve: &'a dyn Curve,
    max_degree: usize,
    base: usize,
    coarse: PowerTable,
    fine: PowerTable,
}

impl<'a> GatedCurve<'a> {
    fn new(curve: &'a dyn Curve, max_degree: usize) -> Self {
        let base = max_degree + EXTRA_NODES;
        GatedCurve {
            curve,
            max_degree,
            base,
            coarse: PowerTable::new(&curve.normalized_rule(base), max_degree),
            fine: PowerTable::new(&curve.normalized_rule(2 * base), max_degree),
        }
    }

    fn average(&self, m: &Monomial) -> Result<f64> {
        let a = self.coarse.integrate(m);
        let b = self.fine.integrate(m);
        if (a - b).abs() < QUAD_GATE {
            return Ok(b);
        }
        let finer = PowerTable::new(&self.curve.normalized_rule(4 * self.base), self.max_degree);
        let c = finer.integrate(m);
        let delta = (c - b).abs();
        if delta < QUAD_GATE {
            Ok(c)
        } else {
            Err(Error::QuadratureNotConverged {
                nodes: 4 * self.base,
                delta,
            })
        }
    }
}

fn ambient_dim_of(curve: Option<&dyn Curve>, points: Option<&[UnitPoint]>) -> Result<usize> {
    let a = curve.map(|c| c.ambient_dim());
    let b = points.and_then(|p| p.first()).map(UnitPoint::ambient_dim);
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(Error::InvalidInput(format!(
            "curve lives in R^{x} but points in R^{y}"
        ))),
        (Some(x), _) | (None, Some(x)) => Ok(x),
        (None, None) => Err(Error::InvalidInput(
            "certification needs a curve or a nonempty point set".into(),
        )),
    }
}

/// Sweeps all monomials of degree `0..=t+1` and compares
/// `β·(point average) + (1-β)·(curve average)` with the sphere moment.
///
/// With only points, β must be 1; with only a curve, β must be 0.
pub fn certify_design(
    curve: Option<&dyn Curve>,
    points: Option<&[UnitPoint]>,
    beta: f64,
    t: usize,
    tol: f64,
) -> Result<CertReport> {
    let dim = ambient_dim_of(curve, points)?;
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidInput(format!("β = {beta} is outside [0, 1]")));
    }
    let points = points.filter(|p| !p.is_empty());
    if curve.is_none() && beta != 1.0 || points.is_none() && beta != 0.0 {
        return Err(Error::InvalidInput(
            "β must be 1 without a curve and 0 without points".into(),
        ));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let max_degree = t + 1;
    let gated = curve.map(|c| GatedCurve::new(c, max_degree));
    let point_table = points.map(|pts| {
        let mut rule = QuadratureRule::new(dim);
        let w = 1.0 / pts.len() as f64;
        for p in pts {
            rule.push(p.as_slice(), w);
        }
        PowerTable::new(&rule, max_degree)
    });

    let monomials = monomials_up_to(dim, max_degree);
    let residuals: Vec<f64> = monomials
        .par_iter()
        .map(|m| {
            let mut value = 0.0;
            if let Some(pt) = &point_table {
                value += beta * pt.integrate(m);
            }
            if let Some(g) = &gated {
                value += (1.0 - beta) * g.average(m)?;
            }
            Ok((value - sphere_moment(m)).abs())
        })
        .collect::<Result<_>>()?;
    Ok(CertReport::from_residuals(
        t,
        tol,
        max_by_degree(&monomials, &residuals, max_degree),
    ))
}

fn max_by_degree(monomials: &[Monomial], residuals: &[f64], max_degree: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; max_degree + 1];
    for (m, r) in monomials.iter().zip(residuals) {
        let slot = &mut out[m.degree()];
        // NaN residuals must never look certified.
        *slot = if r.is_nan() { f64::NAN } else { slot.max(*r) };
    }
    out
}

/// Certifies `Σ w_i · mean over orbit_i` against the sphere moments.
pub fn weighted_point_cubature(
    orbits: &[(&[UnitPoint], f64)],
    t: usize,
    tol: f64,
) -> Result<CertReport> {
    let total: f64 = orbits.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::WeightsNotNormalized(total));
    }
    let dim = orbits
        .iter()
        .find_map(|(pts, _)| pts.first())
        .map(UnitPoint::ambient_dim)
        .ok_or_else(|| Error::InvalidInput("cubature needs at least one point".into()))?;
    let mut rule = QuadratureRule::new(dim);
    for (pts, w) in orbits {
        for p in *pts {
            if p.ambient_dim() != dim {
                return Err(Error::InvalidInput("orbits differ in dimension".into()));
            }
            rule.push(p.as_slice(), w / pts.len() as f64);
        }
    }
    let max_degree = t + 1;
    let table = PowerTable::new(&rule, max_degree);
    let monomials = monomials_up_to(dim, max_degree);
    let residuals: Vec<f64> = monomials
        .par_iter()
        .map(|m| (table.integrate(m) - sphere_moment(m)).abs())
        .collect();
    Ok(CertReport::from_residuals(
        t,
        tol,
        max_by_degree(&monomials, &residuals, max_degree),
    ))
}
