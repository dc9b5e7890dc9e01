//! Plot-data writers: JSON, Wavefront OBJ line sets and CSV polylines.

use std::fmt::Write;

use serde_json::json;

use sphdesign::quad::Curve;
use sphdesign::{build_polytope, lookup};

use crate::{Built, Format};

fn polylines(built: &Built, samples: usize) -> Vec<Vec<Vec<f64>>> {
    built
        .curve
        .as_ref()
        .map(|c| c.sample(samples))
        .unwrap_or_default()
}

pub fn render(built: &Built, polytope: bool, format: Format, samples: usize) -> sphdesign::Result<String> {
    if polytope && format != Format::CsvPolyline {
        let p = build_polytope(&lookup(&built.label, None)?)?;
        return Ok(match format {
            Format::Obj => p.to_obj(),
            _ => serde_json::to_string_pretty(&p.to_json())?,
        });
    }
    let lines = polylines(built, samples);
    let points: Vec<&[f64]> = built.points.iter().map(|p| p.as_slice()).collect();
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "name": built.label,
            "polylines": lines,
            "points": points,
        }))?,
        Format::Obj => {
            let mut s = format!("# {}\n", built.label);
            let mut next = 1usize;
            let mut records = String::new();
            for line in &lines {
                records.push('l');
                for x in line {
                    push_vertex(&mut s, x);
                    let _ = write!(records, " {next}");
                    next += 1;
                }
                records.push('\n');
            }
            for x in &points {
                push_vertex(&mut s, x);
                let _ = writeln!(records, "p {next}");
                next += 1;
            }
            s.push_str(&records);
            s
        }
        Format::CsvPolyline => {
            let dim = lines
                .first()
                .and_then(|l| l.first())
                .map(Vec::len)
                .or_else(|| points.first().map(|p| p.len()))
                .unwrap_or(0);
            let mut s = String::from("kind,piece,index");
            for i in 1..=dim {
                let _ = write!(s, ",x{i}");
            }
            s.push('\n');
            for (piece, line) in lines.iter().enumerate() {
                for (k, x) in line.iter().enumerate() {
                    push_row(&mut s, "curve", piece, k, x);
                }
            }
            for (k, x) in points.iter().enumerate() {
                push_row(&mut s, "point", 0, k, x);
            }
            s
        }
    })
}

fn push_vertex(s: &mut String, x: &[f64]) {
    s.push('v');
    for c in x {
        let _ = write!(s, " {c}");
    }
    s.push('\n');
}

fn push_row(s: &mut String, kind: &str, piece: usize, index: usize, x: &[f64]) {
    let _ = write!(s, "{kind},{piece},{index}");
    for c in x {
        let _ = write!(s, ",{c}");
    }
    s.push('\n');
}
