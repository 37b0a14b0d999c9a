use std::cmp::Ordering;

use crate::poly::{Monomial, Polynomial};
use crate::scalar::Scalar;

/// Term order on the free module R^r.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleOrder {
    /// Compare monomials by grevlex first; ties go to the lower position index.
    TermOverPosition,
    /// Positions below `split` dominate every position at or above it;
    /// term-over-position inside each block. Used to eliminate the first block.
    Elimination { split: usize },
}

impl ModuleOrder {
    pub fn cmp(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        let top = || a.0.cmp(b.0).then_with(|| b.1.cmp(&a.1));
        match *self {
            ModuleOrder::TermOverPosition => top(),
            ModuleOrder::Elimination { split } => {
                (b.1 >= split).cmp(&(a.1 >= split)).then_with(top)
            }
        }
    }
}

pub(crate) type Term = (Monomial, usize, Scalar);

/// Sparse element of R^r with terms in increasing module order (leading term last).
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Vector {
    pub terms: Vec<Term>,
}

impl Vector {
    pub fn zero() -> Self {
        Vector { terms: Vec::new() }
    }

    pub fn unit(nvars: usize, pos: usize) -> Self {
        Vector {
            terms: vec![(Monomial::one(nvars), pos, Scalar::one())],
        }
    }

    pub fn from_components(comps: &[Polynomial], ord: ModuleOrder) -> Self {
        let mut terms: Vec<Term> = comps
            .iter()
            .enumerate()
            .flat_map(|(p, f)| {
                f.terms()
                    .iter()
                    .map(move |(m, c)| (m.clone(), p, c.clone()))
            })
            .collect();
        terms.sort_by(|a, b| ord.cmp((&a.0, a.1), (&b.0, b.1)));
        Vector { terms }
    }

    pub fn from_terms(mut terms: Vec<Term>, ord: ModuleOrder) -> Self {
        terms.sort_by(|a, b| ord.cmp((&a.0, a.1), (&b.0, b.1)));
        Vector { terms }
    }

    pub fn to_components(&self, rank: usize, nvars: usize) -> Vec<Polynomial> {
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); rank];
        for (m, p, c) in &self.terms {
            buckets[*p].push((m.clone(), c.clone()));
        }
        buckets
            .into_iter()
            .map(|b| Polynomial::from_terms(nvars, b))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.last()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Vector {
            terms: self
                .terms
                .iter()
                .map(|(m, p, a)| (m.clone(), *p, a * c))
                .collect(),
        }
    }

    /// `self − c·m·other`.
    pub fn sub_scaled(&self, c: &Scalar, m: &Monomial, other: &Vector, ord: ModuleOrder) -> Self {
        let a = &self.terms;
        let b: Vec<Term> = other
            .terms
            .iter()
            .map(|(t, p, k)| (t.mul(m), *p, k * c))
            .collect();
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match ord.cmp((&a[i].0, a[i].1), (&b[j].0, b[j].1)) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let (t, p, k) = &b[j];
                    out.push((t.clone(), *p, -k));
                    j += 1;
                }
                Ordering::Equal => {
                    let k = &a[i].2 - &b[j].2;
                    if !k.is_zero() {
                        out.push((a[i].0.clone(), a[i].1, k));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(t, p, k)| (t.clone(), *p, -k)));
        Vector { terms: out }
    }
}
