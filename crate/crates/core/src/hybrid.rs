//! Hybrid designs: a closed curve and a point set mixed with a balancing
//! factor β so that `β·(point average) + (1−β)·(curve average)` integrates
//! every polynomial up to the claimed degree exactly.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycles::{circle_curve, euler_cycle, triangle_curve, ClosedCurve, GeodesicArc};
use crate::error::{Error, Result};
use crate::invariants::invariant_poly;
use crate::linalg::{dot, random_unit_points, UnitPoint, PHI};
use crate::orthogroup::{named_group, GroupName};
use crate::poly::{FnFunction, SphereFunction};
use crate::polytope::{build_polytope, lookup, Polytope};
use crate::quad::{
    arc_average, certify_design, cycle_average, point_average, CertReport, Curve, DEFAULT_TOL,
};

/// Below this magnitude an integral counts as zero when balancing.
const ZERO_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub group: String,
    /// `dim Pol_{≤t}^G` from the Molien series.
    pub invariant_space_dim: usize,
    /// `|β·mean_X p + (1−β)·mean_γ p|` for the distinguished invariant `p`.
    pub residual: f64,
    pub tol: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridDesign {
    pub provenance: String,
    pub beta: f64,
    pub claimed_t: usize,
    pub cycle: ClosedCurve,
    pub points: Vec<UnitPoint>,
    /// Symmetry group whose invariants drive the fast check, if any.
    pub symmetry: Option<String>,
    pub cert_report: Option<CertReport>,
    pub invariant_check: Option<InvariantCheck>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepPolicy {
    /// Full monomial sweep up to degree 11, invariant check above.
    #[default]
    Auto,
    Full,
    InvariantOnly,
}

/// Degrees above this are certified through the invariant check unless a
/// full sweep is requested.
pub const AUTO_FULL_SWEEP_MAX_T: usize = 11;

impl HybridDesign {
    /// Runs the requested certification(s) and stores the reports.
    pub fn certify(&mut self, policy: SweepPolicy, tol: f64) -> Result<()> {
        if self.symmetry.is_some() {
            self.invariant_check = Some(self.invariant_check(tol)?);
        }
        let full = match policy {
            SweepPolicy::Full => true,
            SweepPolicy::InvariantOnly => self.symmetry.is_none(),
            SweepPolicy::Auto => {
                self.claimed_t <= AUTO_FULL_SWEEP_MAX_T || self.symmetry.is_none()
            }
        };
        if full {
            self.cert_report = Some(certify_design(
                Some(&self.cycle),
                Some(&self.points),
                self.beta,
                self.claimed_t,
                tol,
            )?);
        }
        Ok(())
    }

    /// True when every report that was run passes.
    pub fn certified(&self) -> bool {
        let full = self.cert_report.as_ref().map(|r| r.certified);
        let fast = self.invariant_check.as_ref().map(|r| r.certified);
        match (full, fast) {
            (None, None) => false,
            (a, b) => a.unwrap_or(true) && b.unwrap_or(true),
        }
    }

    /// Exactness on the invariant space; valid as a certificate of strength
    /// `t` when that space is spanned by 1 and a single invariant.
    pub fn invariant_check(&self, tol: f64) -> Result<InvariantCheck> {
        let label = self
            .symmetry
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("design has no symmetry group".into()))?;
        let name: GroupName = label.parse()?;
        let group = named_group(name)?;
        let dims = group.molien_dims(self.claimed_t)?;
        let p = invariant_poly(name)?;
        let mean_x = point_average(&self.points, &p);
        let mean_c = cycle_average(&self.cycle, &p)?;
        let residual =
            (self.beta * mean_x + (1.0 - self.beta) * mean_c - p.sphere_integral()).abs();
        let invariant_space_dim: usize = dims.dims.iter().sum();
        Ok(InvariantCheck {
            group: label.to_string(),
            invariant_space_dim,
            residual,
            tol,
            certified: invariant_space_dim == 2 && residual < tol,
        })
    }
}

/// `β = −I₁/(I₀ − I₁)` with `I₀ = p(x₀)` and `I₁` the normalized arc integral.
pub fn balance_single(p: &dyn SphereFunction, x0: &UnitPoint, arc0: &GeodesicArc) -> Result<f64> {
    let i0 = p.eval(x0.as_slice());
    let i1 = arc_average(arc0, p)?;
    balance_from(i0, i1)
}

fn balance_from(i0: f64, i1: f64) -> Result<f64> {
    if i1.abs() < ZERO_TOL {
        return Ok(0.0);
    }
    let denom = i0 - i1;
    if denom.abs() < ZERO_TOL {
        return Err(Error::DegenerateBalance(denom));
    }
    Ok(-i1 / denom)
}

/// Point orbits `(seed, |G·seed|)` and arc orbits `(arc, |G·arc|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiOrbitSpec {
    pub point_orbits: Vec<(UnitPoint, usize)>,
    pub arc_orbits: Vec<(GeodesicArc, usize)>,
}

impl MultiOrbitSpec {
    /// `(∫p dμ₀, ∫p dμ₁)`.
    pub fn integrals(&self, p: &dyn SphereFunction) -> Result<(f64, f64)> {
        let n_points: usize = self.point_orbits.iter().map(|(_, n)| n).sum();
        let i0 = self
            .point_orbits
            .iter()
            .map(|(x, n)| *n as f64 / n_points as f64 * p.eval(x.as_slice()))
            .sum();
        let total: f64 = self
            .arc_orbits
            .iter()
            .map(|(a, n)| *n as f64 * a.length())
            .sum();
        let mut i1 = 0.0;
        for (arc, n) in &self.arc_orbits {
            i1 += *n as f64 * arc.length() / total * arc_average(arc, p)?;
        }
        Ok((i0, i1))
    }
}

pub fn balance_multi(spec: &MultiOrbitSpec, p: &dyn SphereFunction) -> Result<f64> {
    if spec.point_orbits.is_empty() || spec.arc_orbits.is_empty() {
        return Err(Error::InvalidInput(
            "need at least one point orbit and one arc orbit".into(),
        ));
    }
    let (i0, i1) = spec.integrals(p)?;
    if i0.abs() < ZERO_TOL && i1.abs() >= ZERO_TOL {
        return Ok(1.0);
    }
    if i1.abs() < ZERO_TOL {
        return Ok(0.0);
    }
    if i0.signum() == i1.signum() {
        return Err(Error::IncompatibleSigns {
            point: i0,
            curve: i1,
        });
    }
    balance_from(i0, i1)
}

/// `(β_oct/cube, β_cube/oct)` in dimension `d ≥ 2`.
pub fn beta_formulas_d(d: usize) -> (f64, f64) {
    assert!(d >= 2, "the d-octahedron and d-cube need d >= 2");
    let d = d as f64;
    let oct_cube = 3.0 * d * (d - 2.0) / (3.0 * d * d + 2.0 * d - 8.0);
    let a = ((d - 2.0) / d).acos();
    let r = (d - 1.0).sqrt();
    let cube_oct = 3.0 * (d - 2.0) / (d + 2.0) * (2.0 * (d + 2.0) * r - d * (d - 4.0) * a)
        / (6.0 * (d - 2.0) * r + d * (5.0 * d - 8.0) * a);
    (oct_cube, cube_oct)
}

/// How a registered pair's point set relates to its second polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// Vertex-transitive dual: one point orbit, single-orbit balancing.
    Dual,
    /// Points from several orbits, orbit-weighted balancing.
    MultiOrbit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub primal: String,
    pub dual: String,
    pub s: usize,
    pub kind: PairKind,
    pub closed_form_beta: f64,
}

impl PairEntry {
    pub fn key(&self) -> String {
        format!("{}:{}", self.primal, self.dual)
    }
}

fn entry(primal: &str, dual: &str, s: usize, kind: PairKind, beta: f64) -> PairEntry {
    PairEntry {
        primal: primal.into(),
        dual: dual.into(),
        s,
        kind,
        closed_form_beta: beta,
    }
}

/// Every registered primal/dual pair with its strength and closed-form β.
pub fn pair_registry() -> Vec<PairEntry> {
    use PairKind::{Dual, MultiOrbit};
    let s2 = 2f64.sqrt();
    let s5 = 5f64.sqrt();
    let a = (1.0f64 / 3.0).acos();
    let b = (1.0 / 3f64.sqrt()).acos();
    let c = (s5 / 3.0).acos();
    let dd = (1.0 / s5).acos();
    let e = (1.0 / 3.0 + 2.0 / (3.0 * s5)).sqrt().acos();
    let k = 7.0 * (17.0 * s5 - 27.0);
    let s15 = 15f64.sqrt();
    let mut out = vec![
        entry(
            "tetrahedron",
            "tetrahedron-dual",
            3,
            Dual,
            4.0 / (4.0 + 3.0 * s2 * (-1.0f64 / 3.0).acos()),
        ),
        entry("octahedron", "cube", 5, Dual, 9.0 / 25.0),
        entry(
            "cube",
            "octahedron",
            5,
            Dual,
            (10.0 * s2 + 3.0 * a) / (10.0 * s2 + 35.0 * a),
        ),
        entry(
            "rhombic-dodecahedron",
            "cuboctahedron",
            5,
            Dual,
            (10.0 - 3.0 * s2 * b) / (10.0 + 5.0 * s2 * b),
        ),
        entry(
            "dodecahedron",
            "icosahedron",
            9,
            Dual,
            (1190.0 * s5 - 675.0 * c) / (1190.0 * s5 + 6237.0 * c),
        ),
        entry(
            "icosahedron",
            "dodecahedron",
            9,
            Dual,
            (126.0 + 45.0 * dd) / (126.0 + 301.0 * dd),
        ),
        entry(
            "rhombic-triacontahedron",
            "icosidodecahedron",
            9,
            Dual,
            (k + 135.0 * e) / (k + 567.0 * e),
        ),
        entry("cuboctahedron", "rhombic-dodecahedron", 5, MultiOrbit, 21.0 / 25.0),
        entry("cuboctahedron", "octahedron", 5, MultiOrbit, 1.0 / 5.0),
        entry(
            "icosidodecahedron",
            "rhombic-triacontahedron",
            9,
            MultiOrbit,
            45.0 / 49.0,
        ),
        entry("icosidodecahedron", "icosahedron", 9, MultiOrbit, 5.0 / 21.0),
    ];
    for d in 4..=6 {
        let (oc, co) = beta_formulas_d(d);
        out.push(entry(&format!("{d}-octahedron"), &format!("{d}-cube"), 5, Dual, oc));
        out.push(entry(&format!("{d}-cube"), &format!("{d}-octahedron"), 5, Dual, co));
    }
    out.push(entry("600-cell", "120-cell", 19, Dual, 176.0 / 301.0));
    out.push(entry("24-cell", "24-cell-dual", 7, Dual, 5.0 / 14.0));
    out.push(entry(
        "4-tetrahedron",
        "4-tetrahedron-dual",
        3,
        Dual,
        8.0 * s15 / (8.0 * s15 + 27.0 * (-0.25f64).acos()),
    ));
    out
}

pub fn lookup_pair(primal: &str, dual: &str) -> Result<PairEntry> {
    let p = lookup(primal, None).map(|s| s.name).unwrap_or_else(|_| primal.to_string());
    let q = lookup(dual, None).map(|s| s.name).unwrap_or_else(|_| dual.to_string());
    pair_registry()
        .into_iter()
        .find(|e| e.primal == p && e.dual == q)
        .ok_or_else(|| Error::UnknownPair(format!("{primal}:{dual}")))
}

/// The arc and dual vertex used for single-orbit balancing. For the
/// 600-cell pair these are the edge from e₁ to ½(φ, 1, 1/φ, 0) and the
/// vertex (0, 0, 1/√2, 1/√2); elsewhere the first built edge and vertex,
/// which is equivalent by transitivity.
fn reference_arc_and_point(
    entry: &PairEntry,
    primal: &Polytope,
    dual: &Polytope,
) -> Result<(GeodesicArc, UnitPoint)> {
    if entry.primal == "600-cell" {
        let a = UnitPoint::new(vec![1.0, 0.0, 0.0, 0.0])?;
        let b = UnitPoint::normalized(&[PHI, 1.0, 1.0 / PHI, 0.0]);
        let x0 = UnitPoint::normalized(&[0.0, 0.0, 1.0, 1.0]);
        return Ok((GeodesicArc::new(a, b)?, x0));
    }
    let (i, j) = primal.edges[0];
    let arc = GeodesicArc::new(primal.vertices[i].clone(), primal.vertices[j].clone())?;
    Ok((arc, dual.vertices[0].clone()))
}

/// Builds both polytopes and computes β, without certifying.
pub fn assemble_hybrid(primal: &str, dual: &str) -> Result<HybridDesign> {
    let entry = lookup_pair(primal, dual)?;
    let pspec = lookup(&entry.primal, None)?;
    let dspec = lookup(&entry.dual, None)?;
    let group = pspec.group_name()?;
    let p_inv = invariant_poly(group)?;
    let primal_poly = build_polytope(&pspec)?;
    let dual_poly = build_polytope(&dspec)?;
    let cycle = euler_cycle(&primal_poly, true)?;
    let beta = match entry.kind {
        PairKind::Dual => {
            let (arc, x0) = reference_arc_and_point(&entry, &primal_poly, &dual_poly)?;
            balance_single(&p_inv, &x0, &arc)?
        }
        PairKind::MultiOrbit => {
            let g = named_group(group)?;
            let point_orbits = dspec
                .seeds
                .iter()
                .map(|s| (s.clone(), g.orbit(s, crate::orthogroup::DEDUP_TOL).len()))
                .collect();
            let (i, j) = primal_poly.edges[0];
            let arc = GeodesicArc::new(
                primal_poly.vertices[i].clone(),
                primal_poly.vertices[j].clone(),
            )?;
            let spec = MultiOrbitSpec {
                point_orbits,
                arc_orbits: vec![(arc, primal_poly.edges.len())],
            };
            balance_multi(&spec, &p_inv)?
        }
    };
    let provenance = match entry.kind {
        PairKind::Dual => format!("dual polytope pair {}", entry.key()),
        PairKind::MultiOrbit => format!("orbit-weighted pair {}", entry.key()),
    };
    Ok(HybridDesign {
        provenance,
        beta,
        claimed_t: entry.s,
        cycle: ClosedCurve::Geodesic(cycle),
        points: dual_poly.vertices,
        symmetry: Some(pspec.group),
        cert_report: None,
        invariant_check: None,
    })
}

/// Assembles and certifies a registered pair.
pub fn build_hybrid(primal: &str, dual: &str) -> Result<HybridDesign> {
    build_hybrid_with(primal, dual, SweepPolicy::Auto, DEFAULT_TOL)
}

pub fn build_hybrid_with(
    primal: &str,
    dual: &str,
    policy: SweepPolicy,
    tol: f64,
) -> Result<HybridDesign> {
    let mut h = assemble_hybrid(primal, dual)?;
    h.certify(policy, tol)?;
    Ok(h)
}

/// β(a) for the south pole against the triangle at polar angle `a`.
pub fn triangle_beta(a: f64) -> f64 {
    let c2 = (2.0 * a).cos();
    let s2 = (2.0 * a).sin();
    let arc = 2.0 * (0.75f64.sqrt() * a.sin()).asin();
    1.0 / (1.0 + (5.0 + 3.0 * c2).sqrt() / (6f64.sqrt() * s2) * arc)
}

/// `E₁(a) − E₃(a)`: mixed averages of x² and z² for the triangle design.
fn triangle_imbalance(a: f64) -> Result<f64> {
    let tri = triangle_curve(a)?;
    let beta = triangle_beta(a);
    let x2 = FnFunction {
        f: |x: &[f64]| x[0] * x[0],
        degree: 2,
    };
    let z2 = FnFunction {
        f: |x: &[f64]| x[2] * x[2],
        degree: 2,
    };
    let e1 = (1.0 - beta) * cycle_average(&tri, &x2)?;
    let e3 = beta + (1.0 - beta) * cycle_average(&tri, &z2)?;
    Ok(e1 - e3)
}

/// Bisection for the triangle angle `â` on `(lo, hi)`, to `|E₁ − E₃| < 1e-12`.
pub fn solve_triangle_angle(lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = triangle_imbalance(lo)?;
    let fhi = triangle_imbalance(hi)?;
    if flo.signum() == fhi.signum() {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = triangle_imbalance(mid)?;
        if fm.abs() < 1e-12 || hi - lo < 1e-15 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn pole(z: f64) -> UnitPoint {
    UnitPoint::new(vec![0.0, 0.0, z]).expect("pole is a unit vector")
}

/// The three elementary hybrids on S², certified: circle at height 1/3 with
/// the south pole, the balanced triangle with the south pole, and the
/// equator with both poles.
pub fn elementary_hybrids() -> Result<Vec<HybridDesign>> {
    let circle = HybridDesign {
        provenance: "elementary: circle at height 1/3 + south pole".into(),
        beta: 0.25,
        claimed_t: 2,
        cycle: ClosedCurve::Latitude(circle_curve(1.0 / 3.0)?),
        points: vec![pole(-1.0)],
        symmetry: None,
        cert_report: None,
        invariant_check: None,
    };
    let a_hat = solve_triangle_angle(1e-3, PI / 2.0 - 1e-3)?;
    let triangle = HybridDesign {
        provenance: format!("elementary: triangle at polar angle {a_hat:.12} + south pole"),
        beta: triangle_beta(a_hat),
        claimed_t: 2,
        cycle: ClosedCurve::Geodesic(triangle_curve(a_hat)?),
        points: vec![pole(-1.0)],
        symmetry: None,
        cert_report: None,
        invariant_check: None,
    };
    let equator = HybridDesign {
        provenance: "elementary: equator + both poles".into(),
        beta: 1.0 / 3.0,
        claimed_t: 3,
        cycle: ClosedCurve::Latitude(circle_curve(0.0)?),
        points: vec![pole(1.0), pole(-1.0)],
        symmetry: None,
        cert_report: None,
        invariant_check: None,
    };
    let mut out = vec![circle, triangle, equator];
    for h in &mut out {
        h.certify(SweepPolicy::Full, DEFAULT_TOL)?;
    }
    Ok(out)
}

/// Points on the curve (`per_arc` per piece) together with `points`.
pub fn support_cloud(curve: Option<&dyn Curve>, points: &[UnitPoint], per_arc: usize) -> Vec<Vec<f64>> {
    let mut cloud: Vec<Vec<f64>> = points.iter().map(|p| p.as_slice().to_vec()).collect();
    if let Some(c) = curve {
        cloud.extend(c.sample(per_arc.max(64)).into_iter().flatten());
    }
    cloud
}

/// Test points for covering-radius estimation: a Fibonacci lattice on S²,
/// seeded uniform samples otherwise.
pub fn test_points(dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    if dim == 3 {
        let golden = PI * (3.0 - 5f64.sqrt());
        (0..n)
            .map(|i| {
                let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
                let r = (1.0 - z * z).sqrt();
                let t = golden * i as f64;
                vec![r * t.cos(), r * t.sin(), z]
            })
            .collect()
    } else {
        random_unit_points(dim, n, seed)
            .into_iter()
            .map(UnitPoint::into_vec)
            .collect()
    }
}

/// Estimate of `sup_x min_{y ∈ support} dist(x, y)` over `n_test` test
/// points. This is a lower estimate of the true covering radius, accurate to
/// roughly the test-point spacing.
pub fn covering_radius(support: &[Vec<f64>], n_test: usize, seed: u64) -> Result<f64> {
    let dim = support
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidInput("empty support".into()))?;
    let tests = test_points(dim, n_test, seed);
    let worst = tests
        .par_iter()
        .map(|x| {
            support
                .iter()
                .map(|y| dot(x, y))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(worst.clamp(-1.0, 1.0).acos())
}
