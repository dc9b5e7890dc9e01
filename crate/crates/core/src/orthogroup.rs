//! Finite reflection groups as explicit sets of orthogonal matrices.
//!
//! Groups are generated by breadth-first closure of a generator set (usually
//! the reflections in a root system), with elements deduplicated on a
//! rounding grid. The named groups follow fixed coordinate realizations so
//! that the explicit invariant polynomials in [`crate::invariants`] are
//! invariant under exactly these matrices.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{grid_key, helmert_basis, Mat, UnitPoint, PHI};
use crate::poly::SphereFunction;

pub type OrthMatrix = Mat;

/// Default rounding grid for deduplicating group elements and orbit points.
pub const DEDUP_TOL: f64 = 1e-9;

const UNLABELED_CAP: usize = 100_000;

/// Label of a finite reflection group in the realization used by this crate.
///
/// `A(3)` and `A(4)` use the tetrahedral realizations in R³ and R⁴ whose
/// invariants are `xyz` and the degree-3 polynomial of [`crate::invariants`];
/// `A(n)` for `n >= 5` acts on the sum-zero hyperplane of R^{n+1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupName {
    A(usize),
    B(usize),
    D(usize),
    H3,
    H4,
    F4,
}

impl GroupName {
    /// Euclidean dimension d+1 of the representation.
    pub fn dim(self) -> usize {
        match self {
            GroupName::A(n) | GroupName::B(n) | GroupName::D(n) => n,
            GroupName::H3 => 3,
            GroupName::H4 | GroupName::F4 => 4,
        }
    }

    pub fn expected_order(self) -> usize {
        let fact = |n: usize| (1..=n).product::<usize>();
        match self {
            GroupName::A(n) => fact(n + 1),
            GroupName::B(n) => (1 << n) * fact(n),
            GroupName::D(n) => (1 << (n - 1)) * fact(n),
            GroupName::H3 => 120,
            GroupName::H4 => 14400,
            GroupName::F4 => 1152,
        }
    }

    /// Largest t such that every orbit of the group is a spherical t-design.
    pub fn homogeneity(self) -> usize {
        match self {
            GroupName::A(_) => 2,
            GroupName::B(_) | GroupName::D(_) => 3,
            GroupName::H3 | GroupName::F4 => 5,
            GroupName::H4 => 11,
        }
    }

    fn validate(self) -> Result<Self> {
        let ok = match self {
            GroupName::A(n) | GroupName::B(n) => n >= 2,
            GroupName::D(n) => n >= 3,
            _ => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::UnknownGroup(self.to_string()))
        }
    }

    /// Generators of the realization: root reflections, or for H3 the
    /// pyritohedral generators plus one extra reflection.
    pub fn generators(self) -> Vec<OrthMatrix> {
        match self {
            GroupName::A(3) => reflections(&pm_pair_roots(3)),
            GroupName::A(4) => reflections(&[
                vec![1.0, 0.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0, 0.0],
                vec![1.0, 1.0, 1.0, 1.0],
                vec![0.0, 1.0 - PHI, PHI - 2.0, 1.0],
            ]),
            GroupName::A(n) => {
                let basis = helmert_basis(n);
                let roots: Vec<Vec<f64>> = (0..n)
                    .map(|i| {
                        let mut r = vec![0.0; n + 1];
                        r[i] = 1.0;
                        r[i + 1] = -1.0;
                        basis.iter().map(|h| crate::linalg::dot(h, &r)).collect()
                    })
                    .collect();
                reflections(&roots)
            }
            GroupName::B(n) => {
                let mut roots = unit_roots(n);
                roots.extend(pm_pair_roots(n));
                reflections(&roots)
            }
            GroupName::D(n) => reflections(&pm_pair_roots(n)),
            GroupName::H3 => vec![
                Mat::permutation(&[1, 2, 0]),
                Mat::diag(&[-1.0, 1.0, 1.0]),
                Mat::reflection(&[PHI, 1.0 / PHI, 1.0]),
            ],
            GroupName::F4 => reflections(&[
                vec![0.0, 1.0, -1.0, 0.0],
                vec![0.0, 0.0, 1.0, -1.0],
                vec![0.0, 0.0, 0.0, 1.0],
                vec![1.0, -1.0, -1.0, -1.0],
            ]),
            GroupName::H4 => reflections(&h4_roots()),
        }
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::A(n) => write!(f, "A{n}"),
            GroupName::B(n) => write!(f, "B{n}"),
            GroupName::D(n) => write!(f, "D{n}"),
            GroupName::H3 => write!(f, "H3"),
            GroupName::H4 => write!(f, "H4"),
            GroupName::F4 => write!(f, "F4"),
        }
    }
}

impl FromStr for GroupName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownGroup(s.to_string());
        let name = match s {
            "H3" => GroupName::H3,
            "H4" => GroupName::H4,
            "F4" => GroupName::F4,
            _ => {
                let (head, tail) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
                let n: usize = tail.parse().map_err(|_| unknown())?;
                match head {
                    "A" => GroupName::A(n),
                    "B" => GroupName::B(n),
                    "D" => GroupName::D(n),
                    _ => return Err(unknown()),
                }
            }
        };
        name.validate().map_err(|_| unknown())
    }
}

fn reflections(roots: &[Vec<f64>]) -> Vec<OrthMatrix> {
    roots.iter().map(|r| Mat::reflection(r)).collect()
}

fn unit_roots(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            r
        })
        .collect()
}

/// Positive roots `e_i ± e_j`, `i < j`.
fn pm_pair_roots(n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for s in [1.0, -1.0] {
                let mut r = vec![0.0; n];
                r[i] = 1.0;
                r[j] = s;
                out.push(r);
            }
        }
    }
    out
}

/// The 120 vertices of the 600-cell, which form the H4 root system:
/// ½(±1,±1,±1,±1), the permutations of (±1,0,0,0), and the even
/// permutations of ½(±φ,±1,±1/φ,0).
pub fn h4_roots() -> Vec<Vec<f64>> {
    let mut roots = Vec::with_capacity(120);
    for mask in 0..16u32 {
        roots.push(
            (0..4)
                .map(|k| if mask >> k & 1 == 1 { -0.5 } else { 0.5 })
                .collect(),
        );
    }
    for i in 0..4 {
        for s in [1.0, -1.0] {
            let mut r = vec![0.0; 4];
            r[i] = s;
            roots.push(r);
        }
    }
    let base = [PHI / 2.0, 0.5, 0.5 / PHI, 0.0];
    for perm in even_permutations(4) {
        for mask in 0..8u32 {
            let mut r = vec![0.0; 4];
            for k in 0..4 {
                let sign = if k < 3 && mask >> k & 1 == 1 { -1.0 } else { 1.0 };
                r[perm[k]] = sign * base[k];
            }
            roots.push(r);
        }
    }
    roots
}

/// All even permutations of `0..n`, as images `perm[k]` of position `k`.
pub fn even_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    permute(&mut p, 0, &mut out);
    out.retain(|p| {
        let inv = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        inv % 2 == 0
    });
    out
}

pub(crate) fn permute(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, out);
        p.swap(k, i);
    }
}

/// A finite subgroup of O(d+1), stored element by element.
#[derive(Debug, Clone)]
pub struct FiniteOrthGroup {
    name: Option<GroupName>,
    dim: usize,
    elements: Vec<OrthMatrix>,
}

/// Closure of the reflections `I - 2vvᵀ/‖v‖²` over `roots`.
pub fn generate_group(
    roots: &[Vec<f64>],
    dedup_tol: f64,
    label: Option<GroupName>,
) -> Result<FiniteOrthGroup> {
    if roots.is_empty() || roots.iter().any(|r| r.iter().all(|x| *x == 0.0)) {
        return Err(Error::InvalidInput("roots must be nonzero".into()));
    }
    generate_from_generators(reflections(roots), dedup_tol, label)
}

/// Breadth-first closure of `generators` under matrix product.
pub fn generate_from_generators(
    generators: Vec<OrthMatrix>,
    dedup_tol: f64,
    label: Option<GroupName>,
) -> Result<FiniteOrthGroup> {
    let dim = generators
        .first()
        .map(Mat::dim)
        .ok_or_else(|| Error::InvalidInput("empty generator set".into()))?;
    if generators.iter().any(|g| g.dim() != dim) {
        return Err(Error::InvalidInput("generators differ in dimension".into()));
    }
    if let Some(name) = label {
        if name.dim() != dim {
            return Err(Error::InvalidInput(format!(
                "{name} acts on R^{}, generators on R^{dim}",
                name.dim()
            )));
        }
    }
    let cap = label.map_or(UNLABELED_CAP, |n| 10 * n.expected_order());

    // Drop duplicate generators (e.g. reflections in v and -v).
    let mut seen = HashMap::new();
    let gens: Vec<Mat> = generators
        .into_iter()
        .filter(|g| seen.insert(grid_key(g.data(), dedup_tol), ()).is_none())
        .collect();

    let id = Mat::identity(dim);
    let mut index = HashMap::new();
    index.insert(grid_key(id.data(), dedup_tol), 0usize);
    let mut elements = vec![id];
    let mut next = 0;
    while next < elements.len() {
        let current = elements[next].clone();
        next += 1;
        for g in &gens {
            let m = g.mul(&current);
            let key = grid_key(m.data(), dedup_tol);
            if let Entry::Vacant(slot) = index.entry(key) {
                slot.insert(elements.len());
                elements.push(m);
                if elements.len() > cap {
                    return Err(Error::ClosureOverflow { cap });
                }
            }
        }
    }

    if let Some(name) = label {
        let expected = name.expected_order();
        if elements.len() != expected {
            return Err(Error::GroupOrderMismatch {
                name: name.to_string(),
                expected,
                found: elements.len(),
            });
        }
    }
    Ok(FiniteOrthGroup {
        name: label,
        dim,
        elements,
    })
}

/// Returns the named group, generating it on first use.
pub fn named_group(name: GroupName) -> Result<Arc<FiniteOrthGroup>> {
    static CACHE: OnceLock<Mutex<HashMap<GroupName, Arc<FiniteOrthGroup>>>> = OnceLock::new();
    let name = name.validate()?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().unwrap().get(&name) {
        return Ok(Arc::clone(g));
    }
    // Generated outside the lock; a racing thread may duplicate the work.
    let group = Arc::new(generate_from_generators(
        name.generators(),
        DEDUP_TOL,
        Some(name),
    )?);
    Ok(Arc::clone(
        cache.lock().unwrap().entry(name).or_insert(group),
    ))
}

/// Dimensions of the invariant harmonic spaces, `dims[l] = dim H_l^G`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MolienTable {
    pub group: String,
    pub dims: Vec<usize>,
    /// Unrounded series coefficients.
    pub raw: Vec<f64>,
}

impl FiniteOrthGroup {
    pub fn name(&self) -> Option<GroupName> {
        self.name
    }

    pub fn label(&self) -> String {
        self.name.map_or_else(|| "unnamed".to_string(), |n| n.to_string())
    }

    /// Ambient dimension d+1.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[OrthMatrix] {
        &self.elements
    }

    /// The orbit `{g·seed}`, deduplicated at `tol`, in first-visit order.
    pub fn orbit(&self, seed: &UnitPoint, tol: f64) -> Vec<UnitPoint> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for g in &self.elements {
            let p = g.apply(seed.as_slice());
            if seen.insert(grid_key(&p, tol)) {
                out.push(UnitPoint::normalized(&p));
            }
        }
        out
    }

    /// Reynolds average `(1/|G|) Σ_g f(g x)`.
    pub fn reynolds_eval(&self, f: &dyn SphereFunction, x: &[f64]) -> f64 {
        let sum: f64 = self.elements.iter().map(|g| f.eval(&g.apply(x))).sum();
        sum / self.order() as f64
    }

    /// Coefficients of `(1/|G|) Σ_g (1-ω²)/det(I - ωg)` up to `ω^l_max`.
    pub fn molien_dims(&self, l_max: usize) -> Result<MolienTable> {
        // Elements sharing a characteristic polynomial contribute identical
        // series; group them first.
        let mut classes: BTreeMap<Vec<i64>, (Vec<f64>, usize)> = BTreeMap::new();
        for g in &self.elements {
            let c = det_i_minus_wg(g);
            classes
                .entry(grid_key(&c, 1e-9))
                .or_insert_with(|| (c, 0))
                .1 += 1;
        }
        let mut total = vec![0.0; l_max + 1];
        for (coeffs, mult) in classes.values() {
            let recip = series_reciprocal(coeffs, l_max);
            for l in 0..=l_max {
                let shifted = if l >= 2 { recip[l - 2] } else { 0.0 };
                total[l] += *mult as f64 * (recip[l] - shifted);
            }
        }
        let order = self.order() as f64;
        let raw: Vec<f64> = total.iter().map(|x| x / order).collect();
        let mut dims = Vec::with_capacity(raw.len());
        for (degree, &value) in raw.iter().enumerate() {
            let r = value.round();
            if (value - r).abs() > 1e-6 || r < 0.0 {
                return Err(Error::NonIntegerCoefficient { degree, value });
            }
            dims.push(r as usize);
        }
        Ok(MolienTable {
            group: self.label(),
            dims,
            raw,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.label(),
            "dim": self.dim,
            "order": self.order(),
            "elements": self.elements.iter().map(|g| g.data().to_vec()).collect::<Vec<_>>(),
        })
    }
}

/// Coefficients `c_0..c_n` of `det(I - ωg) = Σ c_k ω^k`, from power traces
/// via Newton's identities.
fn det_i_minus_wg(g: &Mat) -> Vec<f64> {
    let n = g.dim();
    let mut power = g.clone();
    let mut traces = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            power = power.mul(g);
        }
        traces.push(power.trace());
    }
    // Elementary symmetric functions of the eigenvalues.
    let mut e = vec![1.0; n + 1];
    for k in 1..=n {
        let mut s = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            s += sign * e[k - i] * traces[i - 1];
        }
        e[k] = s / k as f64;
    }
    e.iter()
        .enumerate()
        .map(|(k, x)| if k % 2 == 1 { -x } else { *x })
        .collect()
}

/// Power series of `1 / Σ c_k ω^k` to order `l_max`, assuming `c_0 = 1`.
fn series_reciprocal(c: &[f64], l_max: usize) -> Vec<f64> {
    let mut r = vec![0.0; l_max + 1];
    r[0] = 1.0 / c[0];
    for m in 1..=l_max {
        let mut s = 0.0;
        for k in 1..c.len().min(m + 1) {
            s += c[k] * r[m - k];
        }
        r[m] = -s / c[0];
    }
    r
}
