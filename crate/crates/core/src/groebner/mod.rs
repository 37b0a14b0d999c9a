//! Gröbner bases for ideals and submodules of free modules over the
//! polynomial ring, with normal forms, cofactor tracking, syzygies and
//! finite-quotient bases.

mod engine;
mod module;
mod vector;

use std::collections::{BTreeSet, HashSet};

pub use module::{
    module_kernel, module_lift, subquotient_dimension, ModuleElement, ModuleGB, Subquotient,
};
pub use vector::ModuleOrder;

use crate::poly::{Monomial, Polynomial};
use vector::Vector;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("quotient is infinite-dimensional")]
    QuotientInfinite,
    #[error("image generator {0} is not contained in the kernel submodule")]
    ImageNotInKernel(usize),
    #[error("element is not in the submodule")]
    NotInSubmodule,
}

const IDEAL_ORDER: ModuleOrder = ModuleOrder::TermOverPosition;

/// Reduced Gröbner basis of an ideal, grevlex order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    nvars: usize,
    original: Vec<Polynomial>,
    elems: Vec<Vector>,
    generators: Vec<Polynomial>,
    /// transform[k][j] is the coefficient of original generator j in basis element k.
    transform: Option<Vec<Vec<Polynomial>>>,
}

impl GroebnerBasis {
    fn compute(gens: &[Polynomial], nvars: usize, track: bool) -> Self {
        let vecs = gens
            .iter()
            .map(|g| Vector::from_components(std::slice::from_ref(g), IDEAL_ORDER))
            .collect();
        let basis = engine::buchberger(vecs, nvars, IDEAL_ORDER, true, track);
        let generators = basis
            .elems
            .iter()
            .map(|v| v.to_components(1, nvars).pop().unwrap())
            .collect();
        let transform = basis.reps.map(|reps| {
            reps.iter()
                .map(|r| r.to_components(gens.len(), nvars))
                .collect()
        });
        GroebnerBasis {
            nvars,
            original: gens.to_vec(),
            elems: basis.elems,
            generators,
            transform,
        }
    }

    /// Reduced basis without cofactor tracking.
    pub fn new(gens: &[Polynomial], nvars: usize) -> Self {
        Self::compute(gens, nvars, false)
    }

    /// Reduced basis that can express normal forms against the original generators.
    pub fn with_cofactors(gens: &[Polynomial], nvars: usize) -> Self {
        Self::compute(gens, nvars, true)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The reduced basis, increasing by leading monomial.
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn original_generators(&self) -> &[Polynomial] {
        &self.original
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .map(|g| g.leading_monomial().unwrap().clone())
            .collect()
    }

    pub fn is_reduced(&self) -> bool {
        let lms = self.leading_monomials();
        self.generators.iter().enumerate().all(|(k, g)| {
            g.leading_term().unwrap().1.is_one()
                && g.terms().iter().all(|(m, _)| {
                    lms.iter()
                        .enumerate()
                        .all(|(j, l)| !(l.divides(m) && !(j == k && l == m)))
                })
        })
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let v = Vector::from_components(std::slice::from_ref(f), IDEAL_ORDER);
        let (r, _) = engine::divide(&v, &self.elems, self.nvars, IDEAL_ORDER);
        r.to_components(1, self.nvars).pop().unwrap()
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// `(r, a)` with `f = Σ a_j·g_j + r` over the original generators `g_j`.
    pub fn normal_form_with_cofactors(&self, f: &Polynomial) -> (Polynomial, Vec<Polynomial>) {
        let transform = self
            .transform
            .as_ref()
            .expect("basis built without cofactor tracking");
        let v = Vector::from_components(std::slice::from_ref(f), IDEAL_ORDER);
        let (r, quot) = engine::divide(&v, &self.elems, self.nvars, IDEAL_ORDER);
        let r = r.to_components(1, self.nvars).pop().unwrap();
        let mut cof = vec![Polynomial::zero(self.nvars); self.original.len()];
        for (q, row) in quot.iter().zip(transform) {
            if q.is_zero() {
                continue;
            }
            for (c, t) in cof.iter_mut().zip(row) {
                *c = c.add(&q.mul(t));
            }
        }
        debug_assert_eq!(
            self.original
                .iter()
                .zip(&cof)
                .fold(r.clone(), |acc, (g, a)| acc.add(&a.mul(g))),
            *f,
            "cofactor identity"
        );
        (r, cof)
    }

    /// Standard monomials, or `None` if there are infinitely many.
    pub fn quotient_basis(&self) -> Option<Vec<Monomial>> {
        standard_monomials(&self.leading_monomials(), self.nvars)
    }

    /// Whether every variable is nilpotent modulo the ideal, so that the
    /// zero set is the origin alone.
    pub fn local_support_check(&self) -> Result<bool, GroebnerError> {
        let d = self
            .quotient_basis()
            .ok_or(GroebnerError::QuotientInfinite)?
            .len();
        Ok((0..self.nvars).all(|i| {
            self.normal_form(&Polynomial::var(self.nvars, i).pow(d as u32 + 1))
                .is_zero()
        }))
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Polynomial], nvars: usize) -> GroebnerBasis {
    GroebnerBasis::new(gens, nvars)
}

/// `(r, a)` with `f = Σ a_j·gens_j + r` and `r` the normal form.
pub fn normal_form_with_cofactors(
    f: &Polynomial,
    gens: &[Polynomial],
) -> (Polynomial, Vec<Polynomial>) {
    GroebnerBasis::with_cofactors(gens, f.nvars()).normal_form_with_cofactors(f)
}

/// Monomials outside the monomial ideal generated by `lead`, in increasing order;
/// `None` when infinite.
pub(crate) fn standard_monomials(lead: &[Monomial], nvars: usize) -> Option<Vec<Monomial>> {
    for i in 0..nvars {
        let bounded = lead.iter().any(|l| {
            l.exponents()
                .iter()
                .enumerate()
                .all(|(k, &e)| k == i || e == 0)
        });
        if !bounded {
            return None;
        }
    }
    let mut seen: HashSet<Monomial> = HashSet::new();
    let mut out = BTreeSet::new();
    let mut stack = vec![Monomial::one(nvars)];
    while let Some(m) = stack.pop() {
        if !seen.insert(m.clone()) || lead.iter().any(|l| l.divides(&m)) {
            continue;
        }
        for i in 0..nvars {
            stack.push(m.mul(&Monomial::var(nvars, i, 1)));
        }
        out.insert(m);
    }
    Some(out.into_iter().collect())
}
