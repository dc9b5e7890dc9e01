//! Geodesic arcs and closed curves on the sphere: Euler cycles through
//! polytope edge graphs, great-circle arrangements, latitude circles and
//! spherical triangles.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cross3, dot, grid_key, norm, normalize, Mat, UnitPoint};
use crate::polytope::Polytope;
use crate::quad::{gauss_legendre, Curve, QuadratureRule};

/// Endpoint chaining tolerance for cycles.
pub const CHAIN_TOL: f64 = 1e-10;

/// Angle between unit vectors via the chord, accurate near 0 and π/2.
pub fn chord_angle(a: &[f64], b: &[f64]) -> f64 {
    let c: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    2.0 * (c.sqrt() / 2.0).min(1.0).asin()
}

#[derive(Serialize, Deserialize)]
struct ArcRepr {
    a: UnitPoint,
    b: UnitPoint,
}

/// The shortest geodesic from `a` to `b`, parametrized by arc length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArcRepr", into = "ArcRepr")]
pub struct GeodesicArc {
    a: UnitPoint,
    b: UnitPoint,
    length: f64,
    /// Unit tangent at `a`, orthogonal to `a`.
    tangent: Vec<f64>,
}

impl TryFrom<ArcRepr> for GeodesicArc {
    type Error = Error;

    fn try_from(r: ArcRepr) -> Result<Self> {
        GeodesicArc::new(r.a, r.b)
    }
}

impl From<GeodesicArc> for ArcRepr {
    fn from(arc: GeodesicArc) -> Self {
        ArcRepr { a: arc.a, b: arc.b }
    }
}

impl GeodesicArc {
    /// Errors if `b = ±a` within `1e-12`, where the geodesic is undefined.
    pub fn new(a: UnitPoint, b: UnitPoint) -> Result<Self> {
        if a.ambient_dim() != b.ambient_dim() {
            return Err(Error::InvalidInput("arc endpoints differ in dimension".into()));
        }
        let length = chord_angle(a.as_slice(), b.as_slice());
        if !(1e-12..=PI - 1e-12).contains(&length) {
            return Err(Error::InvalidInput(format!(
                "arc endpoints are equal or antipodal (distance {length})"
            )));
        }
        let c = dot(a.as_slice(), b.as_slice());
        let w: Vec<f64> = a
            .as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| y - c * x)
            .collect();
        let tangent = normalize(&w);
        Ok(GeodesicArc {
            a,
            b,
            length,
            tangent,
        })
    }

    pub fn a(&self) -> &UnitPoint {
        &self.a
    }

    pub fn b(&self) -> &UnitPoint {
        &self.b
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn ambient_dim(&self) -> usize {
        self.a.ambient_dim()
    }

    /// `γ(s) = cos(s)·a + sin(s)·τ` with `τ` the unit tangent at `a`; equal
    /// to `sin(L−s)/sin(L)·a + sin(s)/sin(L)·b` but stable for short arcs.
    pub fn point_at(&self, s: f64) -> Vec<f64> {
        let (sn, cs) = s.sin_cos();
        self.a
            .as_slice()
            .iter()
            .zip(&self.tangent)
            .map(|(x, t)| cs * x + sn * t)
            .collect()
    }

    pub fn reversed(&self) -> GeodesicArc {
        GeodesicArc::new(self.b.clone(), self.a.clone()).expect("reversal of a valid arc")
    }

    pub fn transformed(&self, m: &Mat) -> GeodesicArc {
        GeodesicArc::new(
            UnitPoint::normalized(&m.apply(self.a.as_slice())),
            UnitPoint::normalized(&m.apply(self.b.as_slice())),
        )
        .expect("orthogonal image of a valid arc")
    }

    /// Gauss–Legendre rule in arc length; weights sum to the arc length.
    pub fn rule(&self, nodes: usize) -> QuadratureRule {
        let mut rule = QuadratureRule::new(self.ambient_dim());
        self.push_nodes(&mut rule, nodes, 1.0);
        rule
    }

    fn push_nodes(&self, rule: &mut QuadratureRule, nodes: usize, scale: f64) {
        let (x, w) = gauss_legendre(nodes);
        let half = self.length / 2.0;
        for (xi, wi) in x.iter().zip(&w) {
            rule.push(&self.point_at(half * (xi + 1.0)), scale * half * wi);
        }
    }

    /// Geodesic distance from `x` to the nearest point of the arc.
    pub fn distance_to(&self, x: &[f64]) -> f64 {
        let u = dot(x, self.a.as_slice());
        let v = dot(x, &self.tangent);
        let theta = v.atan2(u);
        if (0.0..=self.length).contains(&theta) {
            let r = u.hypot(v);
            if r < 0.5 {
                return r.acos();
            }
            // Distance to the foot point on the great circle.
            let foot: Vec<f64> = self
                .a
                .as_slice()
                .iter()
                .zip(&self.tangent)
                .map(|(p, t)| (u * p + v * t) / r)
                .collect();
            chord_angle(x, &foot)
        } else {
            chord_angle(x, self.a.as_slice()).min(chord_angle(x, self.b.as_slice()))
        }
    }

    /// `n ≥ 2` points from `a` to `b` inclusive.
    pub fn sample(&self, n: usize) -> Vec<Vec<f64>> {
        let n = n.max(2);
        (0..n)
            .map(|k| self.point_at(self.length * k as f64 / (n - 1) as f64))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct CycleRepr {
    arcs: Vec<GeodesicArc>,
    total_length: f64,
}

/// A closed chain of geodesic arcs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CycleRepr", into = "CycleRepr")]
pub struct GeodesicCycle {
    arcs: Vec<GeodesicArc>,
    total_length: f64,
}

impl TryFrom<CycleRepr> for GeodesicCycle {
    type Error = Error;

    fn try_from(r: CycleRepr) -> Result<Self> {
        let c = GeodesicCycle::new(r.arcs)?;
        if (c.total_length - r.total_length).abs() > 1e-9 * c.total_length.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "stated total length {} differs from the arc sum {}",
                r.total_length, c.total_length
            )));
        }
        Ok(c)
    }
}

impl From<GeodesicCycle> for CycleRepr {
    fn from(c: GeodesicCycle) -> Self {
        CycleRepr {
            arcs: c.arcs,
            total_length: c.total_length,
        }
    }
}

impl GeodesicCycle {
    /// Checks that consecutive arcs chain and the last returns to the first.
    pub fn new(arcs: Vec<GeodesicArc>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::InvalidInput("a cycle needs at least one arc".into()));
        }
        let n = arcs.len();
        for k in 0..n {
            let next = &arcs[(k + 1) % n];
            let gap = norm(
                &arcs[k]
                    .b
                    .as_slice()
                    .iter()
                    .zip(next.a.as_slice())
                    .map(|(x, y)| x - y)
                    .collect::<Vec<_>>(),
            );
            if gap > CHAIN_TOL {
                return Err(Error::InvalidInput(format!(
                    "arc {k} ends {gap:e} away from the start of arc {}",
                    (k + 1) % n
                )));
            }
        }
        let total_length = arcs.iter().map(GeodesicArc::length).sum();
        Ok(GeodesicCycle { arcs, total_length })
    }

    /// Cycle through `vertices[walk[0]], vertices[walk[1]], …`, closing back
    /// to `walk[0]`. A trailing repeat of `walk[0]` is ignored.
    pub fn from_walk(vertices: &[UnitPoint], walk: &[usize]) -> Result<Self> {
        let mut walk = walk;
        if walk.len() > 1 && walk.first() == walk.last() {
            walk = &walk[..walk.len() - 1];
        }
        let n = walk.len();
        let arcs = (0..n)
            .map(|k| {
                GeodesicArc::new(
                    vertices[walk[k]].clone(),
                    vertices[walk[(k + 1) % n]].clone(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        GeodesicCycle::new(arcs)
    }

    pub fn arcs(&self) -> &[GeodesicArc] {
        &self.arcs
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn transformed(&self, m: &Mat) -> GeodesicCycle {
        GeodesicCycle::new(self.arcs.iter().map(|a| a.transformed(m)).collect())
            .expect("orthogonal image of a valid cycle")
    }

    /// Distance from `x` to the nearest arc.
    pub fn distance_to(&self, x: &[f64]) -> f64 {
        self.arcs
            .iter()
            .map(|a| a.distance_to(x))
            .fold(f64::INFINITY, f64::min)
    }
}

impl Curve for GeodesicCycle {
    fn length(&self) -> f64 {
        self.total_length
    }

    fn ambient_dim(&self) -> usize {
        self.arcs[0].ambient_dim()
    }

    fn normalized_rule(&self, nodes: usize) -> QuadratureRule {
        let mut rule = QuadratureRule::new(self.ambient_dim());
        let scale = 1.0 / self.total_length;
        for arc in &self.arcs {
            arc.push_nodes(&mut rule, nodes, scale);
        }
        rule
    }

    fn sample(&self, per_piece: usize) -> Vec<Vec<Vec<f64>>> {
        self.arcs.iter().map(|a| a.sample(per_piece)).collect()
    }
}

/// The circle `(cos α·√(1−r²), sin α·√(1−r²), r)` on S².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatitudeCircle {
    pub height: f64,
}

impl LatitudeCircle {
    pub fn radius(&self) -> f64 {
        (1.0 - self.height * self.height).sqrt()
    }

    pub fn point_at(&self, alpha: f64) -> Vec<f64> {
        let r = self.radius();
        vec![alpha.cos() * r, alpha.sin() * r, self.height]
    }
}

impl Curve for LatitudeCircle {
    fn length(&self) -> f64 {
        2.0 * PI * self.radius()
    }

    fn ambient_dim(&self) -> usize {
        3
    }

    /// Equispaced nodes: the trapezoid rule is exact for trigonometric
    /// polynomials of degree below the node count.
    fn normalized_rule(&self, nodes: usize) -> QuadratureRule {
        let mut rule = QuadratureRule::new(3);
        let w = 1.0 / nodes as f64;
        for k in 0..nodes {
            rule.push(&self.point_at(2.0 * PI * k as f64 / nodes as f64), w);
        }
        rule
    }

    fn sample(&self, per_piece: usize) -> Vec<Vec<Vec<f64>>> {
        let n = per_piece.max(2);
        vec![(0..n)
            .map(|k| self.point_at(2.0 * PI * k as f64 / (n - 1) as f64))
            .collect()]
    }
}

/// Any closed curve a design can use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedCurve {
    Geodesic(GeodesicCycle),
    Latitude(LatitudeCircle),
}

impl ClosedCurve {
    fn inner(&self) -> &dyn Curve {
        match self {
            ClosedCurve::Geodesic(c) => c,
            ClosedCurve::Latitude(c) => c,
        }
    }

    pub fn as_geodesic(&self) -> Option<&GeodesicCycle> {
        match self {
            ClosedCurve::Geodesic(c) => Some(c),
            ClosedCurve::Latitude(_) => None,
        }
    }
}

impl Curve for ClosedCurve {
    fn length(&self) -> f64 {
        self.inner().length()
    }

    fn ambient_dim(&self) -> usize {
        self.inner().ambient_dim()
    }

    fn normalized_rule(&self, nodes: usize) -> QuadratureRule {
        self.inner().normalized_rule(nodes)
    }

    fn sample(&self, per_piece: usize) -> Vec<Vec<Vec<f64>>> {
        self.inner().sample(per_piece)
    }
}

/// Latitude circle at `height`, which must lie in (−1, 1).
pub fn circle_curve(height: f64) -> Result<LatitudeCircle> {
    if !(height > -1.0 && height < 1.0) {
        return Err(Error::InvalidInput(format!(
            "circle height {height} is outside (-1, 1)"
        )));
    }
    Ok(LatitudeCircle { height })
}

/// Regular spherical triangle around the north pole with vertices at polar
/// angle `a ∈ (0, π/2]`.
pub fn triangle_curve(a: f64) -> Result<GeodesicCycle> {
    if !(a > 0.0 && a <= PI / 2.0) {
        return Err(Error::InvalidInput(format!(
            "triangle angle {a} is outside (0, π/2]"
        )));
    }
    let (s, c) = a.sin_cos();
    let h = 3f64.sqrt() / 2.0;
    let u = [
        vec![s, 0.0, c],
        vec![-0.5 * s, h * s, c],
        vec![-0.5 * s, -h * s, c],
    ];
    let pts: Vec<UnitPoint> = u.iter().map(|v| UnitPoint::normalized(v)).collect();
    GeodesicCycle::from_walk(&pts, &[0, 1, 2])
}

/// Closed walk through every edge of a multigraph exactly once (Hierholzer).
///
/// Ties are broken by the lowest neighbor index, then the lowest edge index,
/// so the result is deterministic. The returned walk starts and ends at the
/// lowest-index vertex that has an edge.
pub fn euler_circuit(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Vec<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_vertices];
    for (id, &(u, v)) in edges.iter().enumerate() {
        if u >= n_vertices || v >= n_vertices || u == v {
            return Err(Error::InvalidInput(format!("bad edge ({u}, {v})")));
        }
        adj[u].push((v, id));
        adj[v].push((u, id));
    }
    if adj.iter().any(|a| a.len() % 2 == 1) {
        return Err(Error::OddDegreeWithoutDoubling);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let Some(start) = adj.iter().position(|a| !a.is_empty()) else {
        return Err(Error::InvalidInput("graph has no edges".into()));
    };
    if !connected(&adj, start) {
        return Err(Error::DisconnectedGraph);
    }

    let mut used = vec![false; edges.len()];
    let mut next = vec![0usize; n_vertices];
    let mut stack = vec![start];
    let mut circuit = Vec::with_capacity(edges.len() + 1);
    while let Some(&v) = stack.last() {
        while next[v] < adj[v].len() && used[adj[v][next[v]].1] {
            next[v] += 1;
        }
        if let Some(&(u, id)) = adj[v].get(next[v]) {
            used[id] = true;
            stack.push(u);
        } else {
            circuit.push(v);
            stack.pop();
        }
    }
    circuit.reverse();
    Ok(circuit)
}

/// Whether every vertex with an edge is reachable from `start`.
fn connected(adj: &[Vec<(usize, usize)>], start: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &(u, _) in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    adj.iter().zip(&seen).all(|(a, s)| a.is_empty() || *s)
}

/// Euler cycle through the projected edges of `p`. With odd degrees present
/// and `allow_doubling`, every edge is traversed twice.
pub fn euler_cycle(p: &Polytope, allow_doubling: bool) -> Result<GeodesicCycle> {
    let odd = p.vertex_degrees().iter().any(|d| d % 2 == 1);
    let edges: Vec<(usize, usize)> = if odd {
        if !allow_doubling {
            return Err(Error::OddDegreeWithoutDoubling);
        }
        p.edges.iter().flat_map(|&e| [e, e]).collect()
    } else {
        p.edges.clone()
    };
    if p.vertices.len() > 1 && p.vertex_degrees().contains(&0) {
        return Err(Error::DisconnectedGraph);
    }
    let walk = euler_circuit(p.vertices.len(), &edges)?;
    GeodesicCycle::from_walk(&p.vertices, &walk)
}

/// Euler cycle through the arrangement of great circles whose poles are the
/// given antipodal point set on S².
pub fn great_circle_cycle(points: &[UnitPoint]) -> Result<GeodesicCycle> {
    const TOL: f64 = 1e-9;
    if points.iter().any(|p| p.ambient_dim() != 3) {
        return Err(Error::InvalidInput("great-circle arrangements live on S²".into()));
    }
    let keys: HashMap<Vec<i64>, usize> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (grid_key(p.as_slice(), TOL), i))
        .collect();
    let mut poles: Vec<&UnitPoint> = Vec::new();
    let mut taken = vec![false; points.len()];
    for (i, p) in points.iter().enumerate() {
        let Some(&j) = keys.get(&grid_key(p.neg().as_slice(), TOL)) else {
            return Err(Error::InvalidInput(format!(
                "point {i} has no antipode in the set"
            )));
        };
        if !taken[i] {
            taken[i] = true;
            taken[j] = true;
            poles.push(p);
        }
    }
    if poles.len() < 2 {
        return Err(Error::DegenerateArrangement(
            "fewer than two distinct great circles".into(),
        ));
    }

    // Intersection points, each remembering which circle pair produced it.
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut vertex_index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut on_circle: Vec<Vec<usize>> = vec![Vec::new(); poles.len()];
    for i in 0..poles.len() {
        for j in i + 1..poles.len() {
            let c = cross3(poles[i].as_slice(), poles[j].as_slice());
            if norm(&c) < TOL {
                return Err(Error::DegenerateArrangement(format!(
                    "circles {i} and {j} coincide"
                )));
            }
            let x = normalize(&c);
            for v in [x.clone(), x.iter().map(|t| -t).collect::<Vec<_>>()] {
                let key = grid_key(&v, TOL);
                if vertex_index.contains_key(&key) {
                    return Err(Error::DegenerateArrangement(
                        "three or more circles meet at one point".into(),
                    ));
                }
                vertex_index.insert(key, vertices.len());
                on_circle[i].push(vertices.len());
                on_circle[j].push(vertices.len());
                vertices.push(v);
            }
        }
    }

    let mut edges = Vec::new();
    for (i, pole) in poles.iter().enumerate() {
        let p = pole.as_slice();
        let e1 = normalize(&vertices[on_circle[i][0]]);
        let e2 = cross3(p, &e1).to_vec();
        let mut around: Vec<(f64, usize)> = on_circle[i]
            .iter()
            .map(|&v| {
                let x = &vertices[v];
                let t = dot(x, &e2).atan2(dot(x, &e1));
                (t.rem_euclid(2.0 * PI), v)
            })
            .collect();
        around.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = around.len();
        for k in 0..n {
            let (t0, v0) = around[k];
            let (mut t1, v1) = around[(k + 1) % n];
            if k + 1 == n {
                t1 += 2.0 * PI;
            }
            if t1 - t0 >= PI - TOL {
                // Split long arcs so every piece is a shortest geodesic.
                let tm = 0.5 * (t0 + t1);
                let (s, c) = tm.sin_cos();
                let mid: Vec<f64> = e1.iter().zip(&e2).map(|(a, b)| c * a + s * b).collect();
                let m = vertices.len();
                vertices.push(mid);
                edges.push((v0, m));
                edges.push((m, v1));
            } else {
                edges.push((v0, v1));
            }
        }
    }
    let pts: Vec<UnitPoint> = vertices.iter().map(|v| UnitPoint::normalized(v)).collect();
    let walk = euler_circuit(pts.len(), &edges)?;
    GeodesicCycle::from_walk(&pts, &walk)
}

/// Symmetric Hausdorff distance between the traces of two curves, with
/// `samples` points per arc of each.
pub fn hausdorff_distance(a: &GeodesicCycle, b: &GeodesicCycle, samples: usize) -> f64 {
    let one_sided = |from: &GeodesicCycle, to: &GeodesicCycle| {
        from.arcs
            .iter()
            .flat_map(|arc| arc.sample(samples))
            .map(|x| to.distance_to(&x))
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}
