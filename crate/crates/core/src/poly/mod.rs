//! Sparse multivariate polynomials over [`Scalar`] with graded reverse
//! lexicographic term order.

mod monomial;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub use monomial::{Exponents, Monomial};
pub use parse::ParseError;

use crate::scalar::{CyclotomicField, Scalar};

/// Variable names plus the coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    names: Vec<String>,
    field: Option<Arc<CyclotomicField>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
    #[error("`z` is reserved for the root of unity in a cyclotomic ring")]
    ReservedName,
}

impl PolyRing {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        field: Option<Arc<CyclotomicField>>,
    ) -> Result<Self, RingError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !parse::is_identifier(n) {
                return Err(RingError::InvalidName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(RingError::DuplicateName(n.clone()));
            }
            if field.is_some() && n == "z" {
                return Err(RingError::ReservedName);
            }
        }
        Ok(PolyRing { names, field })
    }

    /// Rational ring with the given variable names; panics on invalid names.
    pub fn rational(names: &[&str]) -> Self {
        Self::new(names.iter().copied(), None).expect("valid variable names")
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> Option<&Arc<CyclotomicField>> {
        self.field.as_ref()
    }

    pub fn with_field(&self, field: Option<Arc<CyclotomicField>>) -> Self {
        PolyRing {
            names: self.names.clone(),
            field,
        }
    }

    /// The ring on the variables `x₁…x_n, x₁'…x_n'`, the primed copies playing the role of `y`.
    pub fn doubled(&self) -> Self {
        let mut names = self.names.clone();
        names.extend(self.names.iter().map(|n| format!("{n}'")));
        PolyRing {
            names,
            field: self.field.clone(),
        }
    }

    /// The ring on a subset of the variables, in the given order.
    pub fn subring(&self, indices: &[usize]) -> Self {
        PolyRing {
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
            field: self.field.clone(),
        }
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.nvars())
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.nvars(), i)
    }

    pub fn constant(&self, c: Scalar) -> Polynomial {
        Polynomial::constant(self.nvars(), c)
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial, ParseError> {
        parse::parse(self, text)
    }

    /// Parses a constant expression (numbers and `z`).
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, ParseError> {
        let p = parse::parse(
            &PolyRing {
                names: Vec::new(),
                field: self.field.clone(),
            },
            text,
        )?;
        Ok(p.constant_term())
    }

    pub fn display<'a>(&'a self, p: &'a Polynomial) -> DisplayPoly<'a> {
        DisplayPoly {
            ring: self,
            poly: p,
        }
    }

    pub fn format(&self, p: &Polynomial) -> String {
        self.display(p).to_string()
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                _ => parts.push(format!("{}^{e}", self.names[i])),
            }
        }
        parts.join("*")
    }
}

/// A polynomial in a fixed number of variables. Terms are kept sorted in
/// increasing grevlex order (leading term last) with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, Scalar)>,
}

/// Result of a weighted-degree query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuasiDegree {
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Scalar::from_int(c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i, 1), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            Polynomial {
                nvars,
                terms: Vec::new(),
            }
        } else {
            Polynomial {
                nvars,
                terms: vec![(m, c)],
            }
        }
    }

    /// Collects arbitrary terms, combining duplicates and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in increasing order.
    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.last().map(|(m, c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.last().map(|t| &t.0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        match self.terms.binary_search_by(|t| t.0.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn constant_term(&self) -> Scalar {
        match self.terms.first() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Scalar::zero(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        debug_assert_eq!(self.nvars, other.nvars, "polynomials from different rings");
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Polynomial {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplication by `c·m`; monomial multiplication preserves the order.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars, "polynomials from different rings");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial_derivative(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable index {i} out of range");
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[i] > 0)
            .map(|(m, c)| {
                let e = m.exponents()[i];
                let mut ex: Exponents = m.exponents().into();
                ex[i] -= 1;
                (
                    Monomial::from_exponents(ex),
                    c * &Scalar::from_int(e as i64),
                )
            });
        Self::from_terms(self.nvars, terms)
    }

    /// Simultaneous substitution `x_i ↦ targets[i]`; all targets live in a ring with `target_nvars` variables.
    pub fn substitute(&self, targets: &[Polynomial], target_nvars: usize) -> Self {
        assert_eq!(
            targets.len(),
            self.nvars,
            "assignment must cover every variable"
        );
        assert!(
            targets.iter().all(|t| t.nvars == target_nvars),
            "substitution targets from different rings"
        );
        let mut powers: Vec<Vec<Polynomial>> = targets
            .iter()
            .map(|t| vec![Polynomial::one(target_nvars), t.clone()])
            .collect();
        let mut out = Polynomial::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target_nvars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&targets[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Sets every variable outside `keep` to zero and renumbers the kept ones in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .all(|(i, &e)| e == 0 || keep.contains(&i))
            })
            .map(|(m, c)| {
                (
                    Monomial::from_exponents(keep.iter().map(|&i| m.exponents()[i])),
                    c.clone(),
                )
            });
        Self::from_terms(keep.len(), terms)
    }

    /// Places variable `i` at position `map[i]` of a ring with `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut ex: Exponents = smallvec::smallvec![0; nvars];
            for (i, &e) in m.exponents().iter().enumerate() {
                ex[map[i]] += e;
            }
            (Monomial::from_exponents(ex), c.clone())
        });
        Self::from_terms(nvars, terms)
    }

    /// Scales variable `i` by `factors[i]`: f(λ₁x₁, …, λ_nx_n).
    pub fn scale_variables(&self, factors: &[Scalar]) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut k = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    k = &k * &factors[i].pow(e as i64);
                }
            }
            (m.clone(), k)
        });
        Self::from_terms(self.nvars, terms)
    }

    pub fn quasi_degree(&self, weights: &[i64]) -> QuasiDegree {
        assert_eq!(weights.len(), self.nvars);
        let mut degs = self.terms.iter().map(|(m, _)| m.weighted_degree(weights));
        match degs.next() {
            None => QuasiDegree::Zero,
            Some(d) => {
                if degs.all(|e| e == d) {
                    QuasiDegree::Homogeneous(d)
                } else {
                    QuasiDegree::Inhomogeneous
                }
            }
        }
    }

    /// Δ_j f = [f(x₁…x_{j−1}, y_j…y_n) − f(x₁…x_j, y_{j+1}…y_n)] / (y_j − x_j),
    /// a polynomial in the doubled variables (x₁…x_n, y₁…y_n).
    pub fn difference_derivative(&self, j: usize) -> Self {
        let n = self.nvars;
        assert!(j < n, "variable index {j} out of range");
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponents();
            if e[j] == 0 {
                continue;
            }
            // x^{<j} · y^{>j} · (y_j^{e_j} − x_j^{e_j})/(y_j − x_j)
            for s in 0..e[j] {
                let mut ex: Exponents = smallvec::smallvec![0; 2 * n];
                ex[..j].copy_from_slice(&e[..j]);
                for i in j + 1..n {
                    ex[n + i] = e[i];
                }
                ex[n + j] = s;
                ex[j] = e[j] - 1 - s;
                terms.push((Monomial::from_exponents(ex), c.clone()));
            }
        }
        Self::from_terms(2 * n, terms)
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Self> {
        let (dm, dc) = d.leading_term()?;
        let dc_inv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading_term() {
            if !dm.divides(m) {
                return None;
            }
            let q = dm.quotient_of(m);
            let k = c * &dc_inv;
            rem = rem.sub(&d.mul_term(&q, &k));
            quot.push((q, k));
        }
        Some(Self::from_terms(self.nvars, quot))
    }
}

pub struct DisplayPoly<'a> {
    ring: &'a PolyRing,
    poly: &'a Polynomial,
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let mono = if m.is_one() {
                None
            } else {
                Some(self.ring.format_monomial(m))
            };
            if let Some(r) = c.as_rational() {
                let neg = c.is_negative_rational();
                let abs = if neg { -r } else { r.clone() };
                match (k, neg) {
                    (0, true) => write!(f, "-")?,
                    (0, false) => {}
                    (_, true) => write!(f, " - ")?,
                    (_, false) => write!(f, " + ")?,
                }
                match mono {
                    None => write!(f, "{abs}")?,
                    Some(s) if num_traits::One::is_one(&abs) => write!(f, "{s}")?,
                    Some(s) => write!(f, "{abs}*{s}")?,
                }
            } else {
                if k > 0 {
                    write!(f, " + ")?;
                }
                match mono {
                    None => write!(f, "({c})")?,
                    Some(s) => write!(f, "({c})*{s}")?,
                }
            }
        }
        Ok(())
    }
}
