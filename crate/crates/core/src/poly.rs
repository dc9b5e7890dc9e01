//! Sparse multivariate polynomials with real coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::quad::{sphere_moment, Monomial};

/// A real function on the sphere whose restriction has known polynomial
/// degree, which drives quadrature node counts.
pub trait SphereFunction: Sync {
    fn eval(&self, x: &[f64]) -> f64;

    /// Polynomial degree of the function (upper bound).
    fn degree(&self) -> usize;
}

/// Adapts a closure with a declared degree.
pub struct FnFunction<F> {
    pub f: F,
    pub degree: usize,
}

impl<F: Fn(&[f64]) -> f64 + Sync> SphereFunction for FnFunction<F> {
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn degree(&self) -> usize {
        self.degree
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiPoly {
    nvars: usize,
    #[serde(with = "term_list")]
    terms: BTreeMap<Vec<u32>, f64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1.0)
    }

    pub fn monomial(exponents: Vec<u32>, coeff: f64) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, coeff);
        p
    }

    /// Monomial symmetric polynomial `M_λ`: the sum of the distinct monomials
    /// whose exponent multiset is `λ` padded with zeros.
    pub fn monomial_symmetric(nvars: usize, partition: &[u32]) -> Self {
        assert!(partition.len() <= nvars, "partition longer than variable count");
        let mut exps: Vec<u32> = partition.to_vec();
        exps.resize(nvars, 0);
        let mut perms = Vec::new();
        crate::orthogroup::permute(&mut (0..nvars).collect(), 0, &mut perms);
        let mut p = Self::zero(nvars);
        let mut seen = std::collections::BTreeSet::new();
        for perm in perms {
            let e: Vec<u32> = perm.iter().map(|&k| exps[k]).collect();
            if seen.insert(e.clone()) {
                p.add_term(e, 1.0);
            }
        }
        p
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, coeff: f64) {
        use std::collections::btree_map::Entry;
        assert_eq!(exponents.len(), self.nvars);
        match self.terms.entry(exponents) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if coeff != 0.0 {
                    v.insert(coeff);
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, exponents: &[u32]) -> f64 {
        self.terms.get(exponents).copied().unwrap_or(0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut p = Self::zero(self.nvars);
        if s != 0.0 {
            for (e, c) in &self.terms {
                p.terms.insert(e.clone(), c * s);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, 1.0);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                c * e
                    .iter()
                    .zip(x)
                    .map(|(&k, &xi)| xi.powi(k as i32))
                    .product::<f64>()
            })
            .sum()
    }

    /// Exact normalized integral over the unit sphere in R^nvars.
    pub fn sphere_integral(&self) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * sphere_moment(&Monomial::new(e.clone())))
            .sum()
    }
}

impl SphereFunction for MultiPoly {
    fn eval(&self, x: &[f64]) -> f64 {
        self.evaluate(x)
    }

    fn degree(&self) -> usize {
        self.total_degree()
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(-1.0)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// Serializes the term map as `[{exponents, coefficient}]`.
mod term_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Term {
        exponents: Vec<u32>,
        coefficient: f64,
    }

    pub fn serialize<S: Serializer>(
        terms: &BTreeMap<Vec<u32>, f64>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let list: Vec<Term> = terms
            .iter()
            .map(|(e, c)| Term {
                exponents: e.clone(),
                coefficient: *c,
            })
            .collect();
        list.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<Vec<u32>, f64>, D::Error> {
        let list = Vec::<Term>::deserialize(d)?;
        Ok(list
            .into_iter()
            .filter(|t| t.coefficient != 0.0)
            .map(|t| (t.exponents, t.coefficient))
            .collect())
    }
}
