//! Catalog of edge-transitive polytopes realized as group orbits on the
//! sphere, with edge detection by minimum chord length.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{grid_key, helmert_basis, UnitPoint, PHI};
use crate::orthogroup::{named_group, FiniteOrthGroup, GroupName, DEDUP_TOL};

/// Relative tolerance when comparing chord lengths against the minimum.
pub const EDGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeRule {
    /// Any two vertices at minimal distance.
    AllPairs,
    /// Only pairs taken from different seed orbits.
    CrossOrbit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeSpec {
    pub name: String,
    pub group: String,
    /// Ambient dimension.
    pub dim: usize,
    pub t: usize,
    pub seeds: Vec<UnitPoint>,
    pub expected_vertices: usize,
    pub expected_edges: usize,
    pub dual_name: Option<String>,
    pub edge_rule: EdgeRule,
    pub edge_transitive: bool,
    /// Closed-form cycle length as tabulated, including the doubling factor.
    pub closed_form_length: Option<f64>,
    pub length_formula: Option<String>,
    /// Set for rows whose group is too large to enumerate here.
    pub not_certifiable: Option<String>,
}

impl PolytopeSpec {
    pub fn group_name(&self) -> Result<GroupName> {
        self.group.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    pub spec: PolytopeSpec,
    pub vertices: Vec<UnitPoint>,
    /// Index pairs `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
}

#[allow(clippy::too_many_arguments)]
fn spec(
    name: &str,
    group: GroupName,
    seeds: Vec<Vec<f64>>,
    vertices: usize,
    edges: usize,
    dual: Option<&str>,
    length: Option<(f64, String)>,
) -> PolytopeSpec {
    let edge_rule = if seeds.len() > 1 {
        EdgeRule::CrossOrbit
    } else {
        EdgeRule::AllPairs
    };
    let (closed_form_length, length_formula) = match length {
        Some((v, f)) => (Some(v), Some(f)),
        None => (None, None),
    };
    PolytopeSpec {
        name: name.to_string(),
        group: group.to_string(),
        dim: group.dim(),
        t: group.homogeneity(),
        seeds: seeds.iter().map(|s| UnitPoint::normalized(s)).collect(),
        expected_vertices: vertices,
        expected_edges: edges,
        dual_name: dual.map(str::to_string),
        edge_rule,
        edge_transitive: true,
        closed_form_length,
        length_formula,
        not_certifiable: None,
    }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `(3 − (−1)^d)/2`: 2 for odd d, 1 for even d.
fn parity_factor(d: usize) -> f64 {
    if d % 2 == 1 {
        2.0
    } else {
        1.0
    }
}

fn family_name(d: usize, base: &str) -> String {
    if d == 3 {
        base.to_string()
    } else {
        format!("{d}-{base}")
    }
}

fn ones(d: usize) -> Vec<f64> {
    vec![1.0; d]
}

fn unit(d: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = 1.0;
    v
}

/// Vertex `u₁` of the 4-simplex in the realization of A4 used here.
pub fn simplex4_vertex() -> Vec<f64> {
    vec![0.0, 0.0, 1.0, -1.0]
}

fn tetrahedron_seed(d: usize) -> Vec<f64> {
    match d {
        3 => ones(3),
        4 => simplex4_vertex(),
        _ => helmert_basis(d).iter().map(|h| h[0]).collect(),
    }
}

pub fn d_tetrahedron(d: usize) -> PolytopeSpec {
    let edges = binom(d + 1, 2);
    let len = edges as f64 * (-1.0 / d as f64).acos() * parity_factor(d);
    let mut s = spec(
        &family_name(d, "tetrahedron"),
        GroupName::A(d),
        vec![tetrahedron_seed(d)],
        d + 1,
        edges,
        Some(&format!("{}-dual", family_name(d, "tetrahedron"))),
        Some((len, format!("C({},2)·arccos(-1/{d})·{}", d + 1, parity_factor(d)))),
    );
    s.t = 2;
    s
}

/// The simplex through the antipodes of the `d`-simplex vertices.
pub fn d_tetrahedron_dual(d: usize) -> PolytopeSpec {
    let mut s = d_tetrahedron(d);
    let base = s.name.clone();
    s.name = format!("{base}-dual");
    s.dual_name = Some(base);
    s.seeds = s.seeds.iter().map(UnitPoint::neg).collect();
    s
}

pub fn d_octahedron(d: usize) -> PolytopeSpec {
    spec(
        &family_name(d, "octahedron"),
        GroupName::B(d),
        vec![unit(d, 0)],
        2 * d,
        2 * (d - 1) * d,
        Some(&family_name(d, "cube")),
        Some((((d - 1) * d) as f64 * PI, format!("{}·{d}·π", d - 1))),
    )
}

pub fn d_cube(d: usize) -> PolytopeSpec {
    let edges = d << (d - 1);
    let len = edges as f64 * ((d as f64 - 2.0) / d as f64).acos() * parity_factor(d);
    spec(
        &family_name(d, "cube"),
        GroupName::B(d),
        vec![ones(d)],
        1 << d,
        edges,
        Some(&family_name(d, "octahedron")),
        Some((len, format!("{edges}·arccos({}/{d})·{}", d - 2, parity_factor(d)))),
    )
}

pub fn d_demicube(d: usize) -> PolytopeSpec {
    let edges = d * (d - 1) * (1 << (d - 3));
    let len = 2.0 * edges as f64 * ((d as f64 - 4.0) / d as f64).acos();
    spec(
        &format!("{d}-demicube"),
        GroupName::D(d),
        vec![ones(d)],
        1 << (d - 1),
        edges,
        None,
        Some((len, format!("2·{edges}·arccos({}/{d})", d as i64 - 4))),
    )
}

fn icosahedron_seed() -> Vec<f64> {
    vec![PHI, 1.0, 0.0]
}

/// The nine edge-transitive polyhedra plus the reversed tetrahedron.
fn three_dim() -> Vec<PolytopeSpec> {
    let s5 = 5f64.sqrt();
    vec![
        d_tetrahedron(3),
        d_tetrahedron_dual(3),
        d_octahedron(3),
        d_cube(3),
        spec(
            "cuboctahedron",
            GroupName::B(3),
            vec![vec![1.0, 1.0, 0.0]],
            12,
            24,
            Some("rhombic-dodecahedron"),
            Some((8.0 * PI, "8π".into())),
        ),
        spec(
            "rhombic-dodecahedron",
            GroupName::B(3),
            vec![ones(3), unit(3, 0)],
            14,
            24,
            Some("cuboctahedron"),
            Some((48.0 * (1.0 / 3f64.sqrt()).acos(), "2·24·arccos(1/√3)".into())),
        ),
        spec(
            "icosahedron",
            GroupName::H3,
            vec![icosahedron_seed()],
            12,
            30,
            Some("dodecahedron"),
            Some((60.0 * (1.0 / s5).acos(), "2·30·arccos(1/√5)".into())),
        ),
        spec(
            "dodecahedron",
            GroupName::H3,
            vec![ones(3)],
            20,
            30,
            Some("icosahedron"),
            Some((60.0 * (s5 / 3.0).acos(), "2·30·arccos(√5/3)".into())),
        ),
        spec(
            "icosidodecahedron",
            GroupName::H3,
            vec![unit(3, 0)],
            30,
            60,
            Some("rhombic-triacontahedron"),
            Some((12.0 * PI, "12π".into())),
        ),
        spec(
            "rhombic-triacontahedron",
            GroupName::H3,
            vec![icosahedron_seed(), ones(3)],
            32,
            60,
            Some("icosidodecahedron"),
            Some((
                120.0 * ((5.0 + 2.0 * s5) / 15.0).sqrt().acos(),
                "2·60·arccos(√((5+2√5)/15))".into(),
            )),
        ),
    ]
}

fn four_dim() -> Vec<PolytopeSpec> {
    let s5 = 5f64.sqrt();
    let mut dual24 = spec(
        "24-cell-dual",
        GroupName::F4,
        vec![unit(4, 0)],
        24,
        96,
        Some("24-cell"),
        Some((32.0 * PI, "32π".into())),
    );
    dual24.edge_rule = EdgeRule::AllPairs;
    vec![
        spec(
            "24-cell",
            GroupName::F4,
            vec![vec![1.0, 1.0, 0.0, 0.0]],
            24,
            96,
            Some("24-cell-dual"),
            Some((32.0 * PI, "32π".into())),
        ),
        dual24,
        spec(
            "120-cell",
            GroupName::H4,
            vec![vec![0.0, 0.0, 1.0, 1.0]],
            600,
            1200,
            Some("600-cell"),
            Some((
                1200.0 * ((5.0 + s5) / 8.0).acos(),
                "1200·arccos((5+√5)/8)".into(),
            )),
        ),
        spec(
            "600-cell",
            GroupName::H4,
            vec![unit(4, 0)],
            120,
            720,
            Some("120-cell"),
            Some((720.0 * ((1.0 + s5) / 4.0).acos(), "720·arccos((1+√5)/4)".into())),
        ),
    ]
}

fn rectified(base: &PolytopeSpec, edges: usize) -> Result<PolytopeSpec> {
    let p = build_polytope(base)?;
    let (i, j) = p.edges[0];
    let mid: Vec<f64> = p.vertices[i]
        .as_slice()
        .iter()
        .zip(p.vertices[j].as_slice())
        .map(|(a, b)| a + b)
        .collect();
    let mut s = spec(
        &format!("rectified-{}", base.name),
        base.group_name()?,
        vec![mid],
        base.expected_edges,
        edges,
        None,
        None,
    );
    s.t = base.t;
    Ok(s)
}

fn rectified_edges(base: &str, d: usize) -> Option<usize> {
    Some(match base {
        "tetrahedron" => binom(d + 1, 2) * (d - 1),
        "octahedron" => 2 * (d - 1) * d * (2 * d - 4),
        "cube" => (d << (d - 1)) * (d - 1),
        "icosahedron" | "dodecahedron" => 60,
        "24-cell" => 288,
        "120-cell" | "600-cell" => 3600,
        _ => return None,
    })
}

fn exceptional_rows() -> Vec<PolytopeSpec> {
    let row = |name: &str, group: &str, dim, t, v, e, len: f64, f: &str| PolytopeSpec {
        name: name.into(),
        group: group.into(),
        dim,
        t,
        seeds: Vec::new(),
        expected_vertices: v,
        expected_edges: e,
        dual_name: None,
        edge_rule: EdgeRule::AllPairs,
        edge_transitive: true,
        closed_form_length: Some(len),
        length_formula: Some(f.into()),
        not_certifiable: Some(format!(
            "not certifiable ({group} enumeration out of scope)"
        )),
    };
    vec![
        row("2_21", "E6", 6, 4, 27, 216, 216.0 * 0.25f64.acos(), "216·arccos(1/4)"),
        row(
            "3_21",
            "E7",
            7,
            5,
            56,
            756,
            1512.0 * (1.0f64 / 3.0).acos(),
            "2·756·arccos(1/3)",
        ),
        row("4_21", "E8", 8, 7, 240, 6720, 2240.0 * PI, "2240π"),
    ]
}

/// Parametric family dimensions included in the catalog listing.
pub const FAMILY_DIMS: std::ops::RangeInclusive<usize> = 3..=6;

/// Every registered polytope: the polyhedra, the parametric families for
/// d = 3..=6 (demicubes from d = 4), the regular 4-polytopes, rectified
/// variants and the arithmetic-only exceptional rows.
pub fn catalog() -> Vec<PolytopeSpec> {
    let mut out = three_dim();
    for d in 4..=*FAMILY_DIMS.end() {
        out.push(d_tetrahedron(d));
        if d == 4 {
            out.push(d_tetrahedron_dual(4));
        }
        out.push(d_octahedron(d));
        out.push(d_cube(d));
    }
    for d in 4..=*FAMILY_DIMS.end() {
        out.push(d_demicube(d));
    }
    out.extend(four_dim());
    for d in FAMILY_DIMS {
        for base in ["tetrahedron", "octahedron", "cube"] {
            out.push(rectified_stub(&family_name(d, base), rectified_edges(base, d)));
        }
    }
    for base in ["icosahedron", "dodecahedron", "24-cell", "120-cell", "600-cell"] {
        out.push(rectified_stub(base, rectified_edges(base, 0)));
    }
    out.extend(exceptional_rows());
    out
}

/// Catalog row for a rectified polytope. The midpoint seed needs the base
/// polytope's edges, so it is filled in by [`lookup`] (or on build).
fn rectified_stub(base: &str, edges: Option<usize>) -> PolytopeSpec {
    let b = lookup_concrete(base).expect("registered base polytope");
    PolytopeSpec {
        name: format!("rectified-{base}"),
        seeds: Vec::new(),
        expected_vertices: b.expected_edges,
        expected_edges: edges.expect("rectified edge count"),
        dual_name: None,
        closed_form_length: None,
        length_formula: None,
        ..b
    }
}

fn split_family(name: &str) -> Option<(usize, &str)> {
    let (head, rest) = name.split_once('-')?;
    let d = head.parse().ok()?;
    Some((d, rest))
}

fn lookup_concrete(name: &str) -> Result<PolytopeSpec> {
    let unknown = || Error::UnknownPolytope(name.to_string());
    if let Some(base) = name.strip_prefix("rectified-") {
        let base_spec = lookup_concrete(base)?;
        let d = base_spec.dim;
        let named = three_dim().iter().chain(&four_dim()).any(|s| s.name == base);
        let family = match split_family(base) {
            Some((_, rest)) if !named => rest,
            _ => base,
        };
        let edges = rectified_edges(family, d).ok_or_else(unknown)?;
        return rectified(&base_spec, edges);
    }
    if let Some(s) = three_dim().into_iter().chain(four_dim()).find(|s| s.name == name) {
        return Ok(s);
    }
    let (d, rest) = split_family(name).ok_or_else(unknown)?;
    if !FAMILY_DIMS.contains(&d) {
        return Err(unknown());
    }
    match rest {
        "tetrahedron" => Ok(d_tetrahedron(d)),
        "tetrahedron-dual" => Ok(d_tetrahedron_dual(d)),
        "octahedron" => Ok(d_octahedron(d)),
        "cube" => Ok(d_cube(d)),
        "demicube" if d >= 4 => Ok(d_demicube(d)),
        _ => Err(unknown()),
    }
}

/// Resolves a catalog name. Family names written with a literal `d-`
/// (e.g. `d-octahedron`) take their dimension from `d`; `3-cube` and `cube`
/// name the same entry.
pub fn lookup(name: &str, d: Option<usize>) -> Result<PolytopeSpec> {
    let (prefix, base) = match name.strip_prefix("rectified-") {
        Some(rest) => ("rectified-", rest),
        None => ("", name),
    };
    let base = match (base.strip_prefix("d-"), d) {
        (Some(rest), Some(d)) => format!("{d}-{rest}"),
        (Some(_), None) => {
            return Err(Error::InvalidInput(format!("`{name}` needs a dimension")));
        }
        (None, _) => base.to_string(),
    };
    let base = base.strip_prefix("3-").unwrap_or(&base);
    let resolved = format!("{prefix}{base}");
    if let Some(row) = exceptional_rows().into_iter().find(|s| s.name == resolved) {
        return Ok(row);
    }
    lookup_concrete(&resolved).map_err(|e| match e {
        Error::UnknownPolytope(_) => Error::UnknownPolytope(name.to_string()),
        other => other,
    })
}

fn chord2(a: &UnitPoint, b: &UnitPoint) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

/// Vertices from the seed orbits, edges from the minimum chord.
pub fn build_polytope(spec: &PolytopeSpec) -> Result<Polytope> {
    if let Some(reason) = &spec.not_certifiable {
        return Err(Error::InvalidInput(format!("{}: {reason}", spec.name)));
    }
    if spec.seeds.is_empty() && spec.name.starts_with("rectified-") {
        return build_polytope(&lookup(&spec.name, None)?);
    }
    if spec.seeds.is_empty() {
        return Err(Error::InvalidInput(format!("{} has no seeds", spec.name)));
    }
    let group = named_group(spec.group_name()?)?;
    build_from_group(spec, &group)
}

fn build_from_group(spec: &PolytopeSpec, group: &FiniteOrthGroup) -> Result<Polytope> {
    let mut labelled: Vec<(UnitPoint, usize)> = Vec::new();
    for (k, seed) in spec.seeds.iter().enumerate() {
        labelled.extend(group.orbit(seed, DEDUP_TOL).into_iter().map(|p| (p, k)));
    }
    labelled.sort_by(|a, b| {
        a.0.as_slice()
            .iter()
            .zip(b.0.as_slice())
            .map(|(x, y)| y.total_cmp(x))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    if labelled.len() != spec.expected_vertices {
        return Err(Error::VertexCountMismatch {
            name: spec.name.clone(),
            expected: spec.expected_vertices,
            found: labelled.len(),
        });
    }
    let admissible = |i: usize, j: usize| match spec.edge_rule {
        EdgeRule::AllPairs => true,
        EdgeRule::CrossOrbit => labelled[i].1 != labelled[j].1,
    };
    let n = labelled.len();
    let mut min = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            if admissible(i, j) {
                min = min.min(chord2(&labelled[i].0, &labelled[j].0));
            }
        }
    }
    let mut edges = Vec::new();
    let min_chord = min.sqrt();
    for i in 0..n {
        for j in i + 1..n {
            if admissible(i, j)
                && (chord2(&labelled[i].0, &labelled[j].0).sqrt() - min_chord).abs()
                    <= EDGE_TOL * min_chord.max(1.0)
            {
                edges.push((i, j));
            }
        }
    }
    if edges.len() != spec.expected_edges {
        return Err(Error::EdgeCountMismatch {
            name: spec.name.clone(),
            expected: spec.expected_edges,
            found: edges.len(),
        });
    }
    Ok(Polytope {
        spec: spec.clone(),
        vertices: labelled.into_iter().map(|(p, _)| p).collect(),
        edges,
    })
}

impl Polytope {
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    pub fn all_degrees_even(&self) -> bool {
        self.vertex_degrees().iter().all(|d| d % 2 == 0)
    }

    /// Geodesic edge lengths, in edge order.
    pub fn edge_lengths(&self) -> Vec<f64> {
        self.edges
            .iter()
            .map(|&(i, j)| crate::cycles::chord_angle(self.vertices[i].as_slice(), self.vertices[j].as_slice()))
            .collect()
    }

    /// Whether the images of the first edge under `group` cover every edge.
    pub fn is_edge_transitive(&self, group: &FiniteOrthGroup) -> bool {
        let index: HashMap<Vec<i64>, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (grid_key(v.as_slice(), DEDUP_TOL), i))
            .collect();
        let (a, b) = self.edges[0];
        let mut images = HashSet::new();
        for g in group.elements() {
            let ga = index.get(&grid_key(&g.apply(self.vertices[a].as_slice()), DEDUP_TOL));
            let gb = index.get(&grid_key(&g.apply(self.vertices[b].as_slice()), DEDUP_TOL));
            match (ga, gb) {
                (Some(&i), Some(&j)) => {
                    images.insert((i.min(j), i.max(j)));
                }
                _ => return false,
            }
        }
        images.len() == self.edges.len() && self.edges.iter().all(|e| images.contains(e))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.spec.name,
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
        })
    }

    /// Wavefront OBJ line set (`v` records, then 1-based `l` records).
    pub fn to_obj(&self) -> String {
        let mut s = format!("# {}\n", self.spec.name);
        for v in &self.vertices {
            s.push('v');
            for x in v.as_slice() {
                let _ = write!(s, " {x}");
            }
            s.push('\n');
        }
        for &(i, j) in &self.edges {
            let _ = writeln!(s, "l {} {}", i + 1, j + 1);
        }
        s
    }
}
