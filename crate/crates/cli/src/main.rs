//! `sphdesign`: browse the polytope catalog, build and certify design
//! curves and hybrid designs, compute balancing factors and Molien tables,
//! and export plot data.
//!
//! Exit status is 0 when the requested certification passes, 1 when it
//! fails, and 2 on any error. Errors are written to stderr as
//! `{"error": <class>, "message": <text>}`.

mod export;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sphdesign::cycles::{euler_cycle, great_circle_cycle, ClosedCurve};
use sphdesign::hybrid::{
    assemble_hybrid, covering_radius, elementary_hybrids, lookup_pair, support_cloud,
    HybridDesign, SweepPolicy,
};
use sphdesign::quad::{certify_design, weighted_point_cubature, Curve, DEFAULT_TOL};
use sphdesign::{build_polytope, catalog, lookup, named_group, Error, GroupName, UnitPoint};

#[derive(Parser, Debug)]
#[command(name = "sphdesign", version, about = "Spherical design curves and hybrid designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List registered polytopes with group, strength, counts and cycle length.
    Catalog {
        /// Substring filter on the polytope name.
        filter: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Build a design and certify it; exit 0 iff certified.
    Certify {
        #[command(flatten)]
        target: Target,
        /// Claimed strength (defaults to the catalog or registry value).
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Run the full monomial sweep even for high-strength hybrids.
        #[arg(long)]
        full_sweep: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Balancing factor of a registered pair, e.g. `600-cell:120-cell`.
    Beta { pair: String },
    /// Dimensions of invariant harmonic spaces, e.g. `molien H4 --l-max 23`.
    Molien {
        group: String,
        #[arg(long, default_value_t = 12)]
        l_max: usize,
    },
    /// Estimate the covering radius of a design's support.
    Covering {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 10_000)]
        n_test: usize,
        #[arg(long, default_value_t = 64)]
        per_arc: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write polyline samples and point markers for plotting.
    Export {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Samples per arc, endpoints included.
        #[arg(long, default_value_t = 32)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct Target {
    /// Euler cycle of a catalog polytope.
    #[arg(long)]
    cycle: Option<String>,
    /// Registered hybrid pair `primal:dual`.
    #[arg(long)]
    hybrid: Option<String>,
    /// Great-circle arrangement from an antipodal vertex set on S².
    #[arg(long)]
    arrangement: Option<String>,
    /// Elementary hybrid on S²: circle, triangle or equator.
    #[arg(long)]
    elementary: Option<String>,
    /// Weighted orbit cubature `name=w,name=w` (weights may be fractions),
    /// or `salikhov` for the 120-cell/600-cell rule.
    #[arg(long)]
    cubature: Option<String>,
    /// Vertex set of a catalog polytope.
    #[arg(long)]
    polytope: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Obj,
    CsvPolyline,
}

/// Geometry of whatever the target flags describe.
pub struct Built {
    pub label: String,
    pub curve: Option<ClosedCurve>,
    pub points: Vec<UnitPoint>,
    pub default_t: Option<usize>,
    pub hybrid: Option<HybridDesign>,
    /// `(name, weight, points)` for weighted cubature.
    pub orbits: Vec<(String, f64, Vec<UnitPoint>)>,
}

impl Built {
    fn geometric(label: String, curve: Option<ClosedCurve>, points: Vec<UnitPoint>, t: Option<usize>) -> Self {
        Built {
            label,
            curve,
            points,
            default_t: t,
            hybrid: None,
            orbits: Vec::new(),
        }
    }
}

fn split_pair(s: &str) -> sphdesign::Result<(&str, &str)> {
    s.split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("expected `primal:dual`, got `{s}`")))
}

fn parse_weight(s: &str) -> sphdesign::Result<f64> {
    let bad = || Error::InvalidInput(format!("bad weight `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            Ok(n / d)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn polytope_vertices(name: &str) -> sphdesign::Result<(Vec<UnitPoint>, usize)> {
    let spec = lookup(name, None)?;
    let t = spec.t;
    Ok((build_polytope(&spec)?.vertices, t))
}

fn build_target(target: &Target) -> sphdesign::Result<Built> {
    if let Some(name) = &target.cycle {
        let p = build_polytope(&lookup(name, None)?)?;
        let cycle = euler_cycle(&p, true)?;
        return Ok(Built::geometric(
            p.spec.name.clone(),
            Some(ClosedCurve::Geodesic(cycle)),
            Vec::new(),
            Some(p.spec.t),
        ));
    }
    if let Some(pair) = &target.hybrid {
        let (a, b) = split_pair(pair)?;
        let h = assemble_hybrid(a, b)?;
        let mut built = Built::geometric(
            pair.clone(),
            Some(h.cycle.clone()),
            h.points.clone(),
            Some(h.claimed_t),
        );
        built.hybrid = Some(h);
        return Ok(built);
    }
    if let Some(name) = &target.arrangement {
        let (vertices, t) = polytope_vertices(name)?;
        let cycle = great_circle_cycle(&vertices)?;
        return Ok(Built::geometric(
            format!("great circles of {name}"),
            Some(ClosedCurve::Geodesic(cycle)),
            Vec::new(),
            Some(t),
        ));
    }
    if let Some(kind) = &target.elementary {
        let index = match kind.as_str() {
            "circle" => 0,
            "triangle" => 1,
            "equator" => 2,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown elementary hybrid `{other}` (circle, triangle, equator)"
                )))
            }
        };
        let h = elementary_hybrids()?.swap_remove(index);
        let mut built = Built::geometric(
            h.provenance.clone(),
            Some(h.cycle.clone()),
            h.points.clone(),
            Some(h.claimed_t),
        );
        built.hybrid = Some(h);
        return Ok(built);
    }
    if let Some(spec) = &target.cubature {
        let (spec, default_t) = if spec == "salikhov" {
            ("120-cell=16/21,600-cell=5/21", Some(19))
        } else {
            (spec.as_str(), None)
        };
        let mut orbits = Vec::new();
        for item in spec.split(',') {
            let (name, w) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("expected `name=weight`, got `{item}`")))?;
            let (vertices, _) = polytope_vertices(name.trim())?;
            orbits.push((name.trim().to_string(), parse_weight(w)?, vertices));
        }
        let points = orbits.iter().flat_map(|o| o.2.clone()).collect();
        let mut built = Built::geometric(format!("cubature {spec}"), None, points, default_t);
        built.orbits = orbits;
        return Ok(built);
    }
    if let Some(name) = &target.polytope {
        let (vertices, t) = polytope_vertices(name)?;
        return Ok(Built::geometric(name.clone(), None, vertices, Some(t)));
    }
    Err(Error::InvalidInput("no target given".into()))
}

fn write_output(text: &str, out: Option<&PathBuf>) -> sphdesign::Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn to_pretty(v: &Value) -> sphdesign::Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn cmd_catalog(filter: Option<&str>, as_json: bool) -> sphdesign::Result<bool> {
    let rows: Vec<_> = catalog()
        .into_iter()
        .filter(|s| filter.is_none_or(|f| s.name.contains(f)))
        .collect();
    if as_json {
        println!("{}", to_pretty(&serde_json::to_value(&rows)?)?);
        return Ok(true);
    }
    println!(
        "{:<28} {:<6} {:>3} {:>3} {:>8} {:>8} {:>18}  formula",
        "name", "group", "dim", "t", "vertices", "edges", "cycle length"
    );
    for s in rows {
        let length = s
            .closed_form_length
            .map_or_else(|| "-".to_string(), |l| format!("{l:.12}"));
        let mut line = format!(
            "{:<28} {:<6} {:>3} {:>3} {:>8} {:>8} {:>18}  {}",
            s.name,
            s.group,
            s.dim,
            s.t,
            s.expected_vertices,
            s.expected_edges,
            length,
            s.length_formula.as_deref().unwrap_or("-"),
        );
        if let Some(note) = &s.not_certifiable {
            line.push_str(&format!("  [{note}]"));
        }
        println!("{line}");
    }
    Ok(true)
}

fn cmd_certify(
    target: &Target,
    t: Option<usize>,
    tol: f64,
    full_sweep: bool,
    out: Option<&PathBuf>,
) -> sphdesign::Result<bool> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    let built = build_target(target)?;
    let t = t
        .or(built.default_t)
        .ok_or_else(|| Error::InvalidInput("--t is required for this target".into()))?;
    let (report, certified) = if let Some(mut h) = built.hybrid {
        h.claimed_t = t;
        let policy = if full_sweep { SweepPolicy::Full } else { SweepPolicy::Auto };
        h.certify(policy, tol)?;
        let ok = h.certified();
        (serde_json::to_value(&h)?, ok)
    } else if !built.orbits.is_empty() {
        let orbits: Vec<(&[UnitPoint], f64)> =
            built.orbits.iter().map(|(_, w, p)| (p.as_slice(), *w)).collect();
        let r = weighted_point_cubature(&orbits, t, tol)?;
        let ok = r.certified;
        let listing: Vec<Value> = built
            .orbits
            .iter()
            .map(|(n, w, p)| json!({"name": n, "weight": w, "size": p.len()}))
            .collect();
        (
            json!({"kind": "cubature", "orbits": listing, "cert_report": r}),
            ok,
        )
    } else {
        let curve = built.curve.as_ref().map(|c| c as &dyn Curve);
        let (points, beta) = if built.points.is_empty() {
            (None, 0.0)
        } else {
            (Some(built.points.as_slice()), 1.0)
        };
        let r = certify_design(curve, points, beta, t, tol)?;
        let ok = r.certified;
        let mut v = json!({"kind": if curve.is_some() { "cycle" } else { "points" }, "name": built.label});
        if let Some(c) = &built.curve {
            v["total_length"] = json!(c.length());
            if let Some(g) = c.as_geodesic() {
                v["num_arcs"] = json!(g.arcs().len());
            }
        } else {
            v["num_points"] = json!(built.points.len());
        }
        v["cert_report"] = serde_json::to_value(&r)?;
        (v, ok)
    };
    write_output(&to_pretty(&report)?, out)?;
    Ok(certified)
}

fn cmd_beta(pair: &str) -> sphdesign::Result<bool> {
    let (a, b) = split_pair(pair)?;
    let entry = lookup_pair(a, b)?;
    let h = assemble_hybrid(a, b)?;
    let v = json!({
        "pair": entry.key(),
        "s": entry.s,
        "beta": h.beta,
        "closed_form_beta": entry.closed_form_beta,
        "difference": (h.beta - entry.closed_form_beta).abs(),
    });
    println!("{}", to_pretty(&v)?);
    Ok(true)
}

fn cmd_molien(group: &str, l_max: usize) -> sphdesign::Result<bool> {
    let name: GroupName = group.parse()?;
    let table = named_group(name)?.molien_dims(l_max)?;
    println!("{}", to_pretty(&serde_json::to_value(&table)?)?);
    Ok(true)
}

fn cmd_covering(
    target: &Target,
    n_test: usize,
    per_arc: usize,
    seed: u64,
    out: Option<&PathBuf>,
) -> sphdesign::Result<bool> {
    let built = build_target(target)?;
    let curve = built.curve.as_ref().map(|c| c as &dyn Curve);
    let cloud = support_cloud(curve, &built.points, per_arc);
    let radius = covering_radius(&cloud, n_test, seed)?;
    let v = json!({
        "support": built.label,
        "n_test": n_test,
        "per_arc": per_arc.max(64),
        "seed": seed,
        "covering_radius": radius,
        "note": "maximin estimate over test points; accurate to the sampling resolution",
    });
    write_output(&to_pretty(&v)?, out)?;
    Ok(true)
}

fn run(cli: Cli) -> sphdesign::Result<bool> {
    match cli.command {
        Command::Catalog { filter, json } => cmd_catalog(filter.as_deref(), json),
        Command::Certify {
            target,
            t,
            tol,
            full_sweep,
            out,
        } => cmd_certify(&target, t, tol, full_sweep, out.as_ref()),
        Command::Beta { pair } => cmd_beta(&pair),
        Command::Molien { group, l_max } => cmd_molien(&group, l_max),
        Command::Covering {
            target,
            n_test,
            per_arc,
            seed,
            out,
        } => cmd_covering(&target, n_test, per_arc, seed, out.as_ref()),
        Command::Export {
            target,
            format,
            samples,
            out,
        } => {
            let built = build_target(&target)?;
            let text = export::render(&built, target.polytope.is_some(), format, samples)?;
            write_output(&text, out.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let v = json!({"error": e.class(), "message": e.to_string()});
            eprintln!("{v}");
            ExitCode::from(2)
        }
    }
}
