use std::f64::consts::PI;

use sphdesign::cycles::{euler_circuit, euler_cycle, great_circle_cycle, GeodesicCycle};
use sphdesign::polytope::{d_cube, d_demicube};
use sphdesign::{build_polytope, catalog, lookup, named_group, Error, Polytope};

fn built(name: &str) -> Polytope {
    build_polytope(&lookup(name, None).unwrap()).unwrap()
}

#[test]
fn every_buildable_row_has_exact_counts() {
    let mut n = 0;
    for spec in catalog() {
        if spec.not_certifiable.is_some() {
            assert!(matches!(build_polytope(&spec), Err(Error::InvalidInput(_)) | Err(Error::UnknownGroup(_))));
            continue;
        }
        let p = build_polytope(&spec).unwrap_or_else(|e| panic!("{}: {e}", spec.name));
        assert_eq!(p.vertices.len(), spec.expected_vertices, "{}", spec.name);
        assert_eq!(p.edges.len(), spec.expected_edges, "{}", spec.name);
        n += 1;
    }
    assert!(n >= 40);
}

#[test]
fn vertex_degrees() {
    assert!(built("octahedron").vertex_degrees().iter().all(|&d| d == 4));
    assert!(built("cube").vertex_degrees().iter().all(|&d| d == 3));
    let mut rd = built("rhombic-dodecahedron").vertex_degrees();
    rd.sort_unstable();
    assert_eq!(rd, [vec![3; 8], vec![4; 6]].concat());
}

#[test]
fn edge_transitive_entries_are_edge_transitive() {
    for spec in catalog() {
        if !spec.edge_transitive || spec.not_certifiable.is_some() || spec.dim > 4 {
            continue;
        }
        let g = named_group(spec.group_name().unwrap()).unwrap();
        let p = build_polytope(&spec).unwrap();
        assert!(p.is_edge_transitive(&g), "{}", spec.name);
    }
}

#[test]
fn edges_have_a_single_length() {
    for name in ["cube", "rhombic-triacontahedron", "600-cell", "5-demicube", "rectified-24-cell"] {
        let lengths = built(name).edge_lengths();
        let (lo, hi) = lengths
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), &l| (a.min(l), b.max(l)));
        assert!(hi - lo < 1e-12, "{name}");
    }
}

#[test]
fn cycles_traverse_every_edge_once_and_close() {
    for name in ["tetrahedron", "cube", "rhombic-dodecahedron", "24-cell", "4-cube"] {
        let p = built(name);
        let cycle = euler_cycle(&p, true).unwrap();
        let doubling = if p.all_degrees_even() { 1 } else { 2 };
        assert_eq!(cycle.arcs().len(), doubling * p.edges.len(), "{name}");
        let mut walked: Vec<(usize, usize)> = cycle
            .arcs()
            .iter()
            .map(|arc| {
                let find = |x: &[f64]| {
                    p.vertices
                        .iter()
                        .position(|v| v.as_slice().iter().zip(x).all(|(a, b)| (a - b).abs() < 1e-12))
                        .unwrap()
                };
                let (i, j) = (find(arc.a().as_slice()), find(arc.b().as_slice()));
                (i.min(j), i.max(j))
            })
            .collect();
        let mut want: Vec<(usize, usize)> = p
            .edges
            .iter()
            .flat_map(|&e| std::iter::repeat_n(e, doubling))
            .collect();
        walked.sort_unstable();
        want.sort_unstable();
        assert_eq!(walked, want, "{name}");
        let arcs = cycle.arcs();
        for k in 0..arcs.len() {
            let next = &arcs[(k + 1) % arcs.len()];
            let gap: f64 = arcs[k]
                .b()
                .as_slice()
                .iter()
                .zip(next.a().as_slice())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(gap < 1e-10);
        }
    }
}

#[test]
fn odd_degrees_need_doubling() {
    assert!(matches!(
        euler_cycle(&built("cube"), false),
        Err(Error::OddDegreeWithoutDoubling)
    ));
    assert!(matches!(
        euler_circuit(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]),
        Err(Error::DisconnectedGraph)
    ));
}

#[test]
fn euler_circuit_is_deterministic() {
    let edges = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)];
    assert_eq!(euler_circuit(5, &edges).unwrap(), vec![0, 1, 2, 0, 3, 4, 0]);
}

/// Lengths recomputed from edge counts, true edge angles and degree parity.
#[test]
fn analyzed_length_rows_follow_the_geometry() {
    let l120 = euler_cycle(&built("120-cell"), true).unwrap().total_length();
    let want = 1200.0 * ((1.0 + 3.0 * 5f64.sqrt()) / 8.0).acos();
    assert!((l120 - want).abs() < 1e-10, "{l120} vs {want}");

    for d in 4..=6 {
        let p = build_polytope(&d_demicube(d)).unwrap();
        let edges = d * (d - 1) * (1 << (d - 3));
        let degree = 2 * edges / (1 << (d - 1));
        let factor = if degree % 2 == 1 { 2.0 } else { 1.0 };
        let want = factor * edges as f64 * ((d as f64 - 4.0) / d as f64).acos();
        let got = euler_cycle(&p, true).unwrap().total_length();
        assert!((got - want).abs() < 1e-10, "{d}-demicube: {got} vs {want}");
    }
}

#[test]
fn family_lengths_match_tabulated_forms() {
    for d in 3..=6 {
        let spec = d_cube(d);
        let p = build_polytope(&spec).unwrap();
        let got = euler_cycle(&p, true).unwrap().total_length();
        let parity = if d % 2 == 1 { 2.0 } else { 1.0 };
        let want = (d * (1 << (d - 1))) as f64 * ((d as f64 - 2.0) / d as f64).acos() * parity;
        assert!((got - want).abs() < 1e-10);
    }
    let oct = euler_cycle(&built("5-octahedron"), true).unwrap().total_length();
    assert!((oct - 20.0 * PI).abs() < 1e-10);
}

#[test]
fn arrangement_lengths() {
    for (name, want) in [("octahedron", 6.0 * PI), ("cube", 8.0 * PI), ("icosahedron", 12.0 * PI)] {
        let c: GeodesicCycle = great_circle_cycle(&built(name).vertices).unwrap();
        assert!((c.total_length() - want).abs() < 1e-10, "{name}");
    }
    assert!(matches!(
        great_circle_cycle(&built("tetrahedron").vertices),
        Err(Error::DegenerateArrangement(_)) | Err(Error::InvalidInput(_))
    ));
}

#[test]
fn polytope_exports() {
    let p = built("dodecahedron");
    let v = p.to_json();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 20);
    assert_eq!(v["edges"].as_array().unwrap().len(), 30);
    let obj = p.to_obj();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 20);
    assert_eq!(obj.lines().filter(|l| l.starts_with("l ")).count(), 30);
}

#[test]
fn unknown_names() {
    assert!(matches!(lookup("hypercube-ish", None), Err(Error::UnknownPolytope(_))));
}
