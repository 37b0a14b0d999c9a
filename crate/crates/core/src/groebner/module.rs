use std::collections::BTreeSet;

use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, Polynomial};
use crate::scalar::Scalar;

use super::engine::{buchberger, divide};
use super::vector::{ModuleOrder, Vector};
use super::GroebnerError;

/// An element of R^r as its component list.
pub type ModuleElement = Vec<Polynomial>;

const TOP: ModuleOrder = ModuleOrder::TermOverPosition;

#[derive(Clone, Debug)]
enum Transform {
    /// The generators are the basis itself.
    Identity,
    Tracked(Vec<Vec<Polynomial>>),
    Untracked,
}

/// Reduced Gröbner basis of a submodule of R^r (term-over-position grevlex).
#[derive(Clone, Debug)]
pub struct ModuleGB {
    rank: usize,
    nvars: usize,
    generators: Vec<ModuleElement>,
    basis: Vec<Vector>,
    transform: Transform,
}

impl ModuleGB {
    fn compute(gens: &[ModuleElement], rank: usize, nvars: usize, track: bool) -> Self {
        assert!(
            gens.iter().all(|g| g.len() == rank),
            "generator length must equal the ambient rank"
        );
        let vecs = gens
            .iter()
            .map(|g| Vector::from_components(g, TOP))
            .collect();
        let b = buchberger(vecs, nvars, TOP, rank == 1, track);
        let transform = match b.reps {
            Some(reps) => Transform::Tracked(
                reps.iter()
                    .map(|r| r.to_components(gens.len(), nvars))
                    .collect(),
            ),
            None => Transform::Untracked,
        };
        ModuleGB {
            rank,
            nvars,
            generators: gens.to_vec(),
            basis: b.elems,
            transform,
        }
    }

    pub fn new(gens: &[ModuleElement], rank: usize, nvars: usize) -> Self {
        Self::compute(gens, rank, nvars, false)
    }

    /// Basis that can lift members to coordinates against `gens`.
    pub fn with_lifting(gens: &[ModuleElement], rank: usize, nvars: usize) -> Self {
        Self::compute(gens, rank, nvars, true)
    }

    fn from_basis(basis: Vec<Vector>, rank: usize, nvars: usize) -> Self {
        let generators = basis.iter().map(|v| v.to_components(rank, nvars)).collect();
        ModuleGB {
            rank,
            nvars,
            generators,
            basis,
            transform: Transform::Identity,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The generators that lifts are expressed against.
    pub fn generators(&self) -> &[ModuleElement] {
        &self.generators
    }

    pub fn basis_elements(&self) -> Vec<ModuleElement> {
        self.basis
            .iter()
            .map(|v| v.to_components(self.rank, self.nvars))
            .collect()
    }

    pub fn is_zero_module(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn normal_form(&self, v: &[Polynomial]) -> ModuleElement {
        let (r, _) = divide(
            &Vector::from_components(v, TOP),
            &self.basis,
            self.nvars,
            TOP,
        );
        r.to_components(self.rank, self.nvars)
    }

    pub fn contains(&self, v: &[Polynomial]) -> bool {
        self.normal_form(v).iter().all(Polynomial::is_zero)
    }

    /// Coordinates `c` with `v = Σ c_j·generators_j`, or `None` if `v` is not a member.
    pub fn lift(&self, v: &[Polynomial]) -> Option<Vec<Polynomial>> {
        let (r, quot) = divide(
            &Vector::from_components(v, TOP),
            &self.basis,
            self.nvars,
            TOP,
        );
        if !r.is_zero() {
            return None;
        }
        let coords = match &self.transform {
            Transform::Identity => quot,
            Transform::Tracked(t) => {
                let mut c = vec![Polynomial::zero(self.nvars); self.generators.len()];
                for (q, row) in quot.iter().zip(t) {
                    if q.is_zero() {
                        continue;
                    }
                    for (cj, tj) in c.iter_mut().zip(row) {
                        *cj = cj.add(&q.mul(tj));
                    }
                }
                c
            }
            Transform::Untracked => panic!("module basis built without lifting support"),
        };
        debug_assert_eq!(
            combine(&self.generators, &coords, self.rank, self.nvars),
            v.to_vec()
        );
        Some(coords)
    }

    /// Standard terms `(monomial, position)` sorted by position then monomial,
    /// or `None` if there are infinitely many.
    pub fn standard_terms(&self) -> Option<Vec<(Monomial, usize)>> {
        let mut out = Vec::new();
        for p in 0..self.rank {
            let lead: Vec<Monomial> = self
                .basis
                .iter()
                .filter_map(|v| v.leading().filter(|t| t.1 == p).map(|t| t.0.clone()))
                .collect();
            if self.nvars == 0 {
                if lead.is_empty() {
                    out.push((Monomial::one(0), p));
                }
                continue;
            }
            for m in standard_set(&lead, self.nvars)? {
                out.push((m, p));
            }
        }
        Some(out)
    }
}

fn standard_set(lead: &[Monomial], nvars: usize) -> Option<BTreeSet<Monomial>> {
    super::standard_monomials(lead, nvars).map(|v| v.into_iter().collect())
}

/// Σ c_j·g_j in R^rank.
pub(crate) fn combine(
    gens: &[ModuleElement],
    coords: &[Polynomial],
    rank: usize,
    nvars: usize,
) -> ModuleElement {
    let mut out = vec![Polynomial::zero(nvars); rank];
    for (g, c) in gens.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        for (o, gi) in out.iter_mut().zip(g) {
            *o = o.add(&c.mul(gi));
        }
    }
    out
}

/// Generators of {v ∈ R^{cols} : M·v = 0}, computed as the part of an
/// elimination Gröbner basis of the columns of `[M; I]` that vanishes on the
/// first block. The result is a reduced basis of the syzygy module.
pub fn module_kernel(m: &PolyMatrix) -> ModuleGB {
    let (r_out, r_in, nvars) = (m.rows(), m.cols(), m.nvars());
    let ord = ModuleOrder::Elimination { split: r_out };
    let gens: Vec<Vector> = (0..r_in)
        .map(|j| {
            let mut comps = m.column(j);
            comps.extend((0..r_in).map(|k| {
                if k == j {
                    Polynomial::one(nvars)
                } else {
                    Polynomial::zero(nvars)
                }
            }));
            Vector::from_components(&comps, ord)
        })
        .collect();
    let b = buchberger(gens, nvars, ord, false, false);
    let syz: Vec<Vector> = b
        .elems
        .into_iter()
        .filter(|v| v.leading().unwrap().1 >= r_out)
        .map(|v| {
            debug_assert!(v.terms.iter().all(|t| t.1 >= r_out));
            Vector::from_terms(
                v.terms
                    .into_iter()
                    .map(|(mm, p, c)| (mm, p - r_out, c))
                    .collect(),
                TOP,
            )
        })
        .collect();
    let mut syz = syz;
    syz.sort_by(|a, b| {
        let (x, y) = (a.leading().unwrap(), b.leading().unwrap());
        TOP.cmp((&x.0, x.1), (&y.0, y.1))
    });
    ModuleGB::from_basis(syz, r_in, nvars)
}

/// Coordinates of `v` against the generators of `gens`, or `None` when `v` is not in the submodule.
pub fn module_lift(v: &[Polynomial], gens: &ModuleGB) -> Option<Vec<Polynomial>> {
    gens.lift(v)
}

/// ⟨kernel⟩/⟨image⟩ presented as R^t modulo relations, t = number of kernel generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    kernel: ModuleGB,
    relations: ModuleGB,
    standard: Vec<(Monomial, usize)>,
}

impl Subquotient {
    pub fn new(kernel: ModuleGB, image: &[ModuleElement]) -> Result<Self, GroebnerError> {
        let (t, nvars) = (kernel.generators().len(), kernel.nvars());
        let mut relations = Vec::new();
        for (k, v) in image.iter().enumerate() {
            relations.push(kernel.lift(v).ok_or(GroebnerError::ImageNotInKernel(k))?);
        }
        if t > 0 {
            let cols: Vec<Vec<Polynomial>> = kernel.generators().to_vec();
            let m = PolyMatrix::from_fn(kernel.rank(), t, Polynomial::zero(nvars), |i, j| {
                cols[j][i].clone()
            });
            relations.extend(module_kernel(&m).generators().iter().cloned());
        }
        let relations = ModuleGB::new(&relations, t, nvars);
        let standard = relations
            .standard_terms()
            .ok_or(GroebnerError::QuotientInfinite)?;
        Ok(Subquotient {
            kernel,
            relations,
            standard,
        })
    }

    pub fn dimension(&self) -> usize {
        self.standard.len()
    }

    pub fn kernel(&self) -> &ModuleGB {
        &self.kernel
    }

    /// Representative cocycle of basis class `k`: monomial times a kernel generator.
    pub fn representative(&self, k: usize) -> ModuleElement {
        let (m, p) = &self.standard[k];
        let c = Polynomial::term(m.clone(), Scalar::one());
        self.kernel.generators()[*p]
            .iter()
            .map(|g| g.mul(&c))
            .collect()
    }

    /// Coordinates of the class of `v` (which must lie in the kernel) in the standard basis.
    pub fn coordinates(&self, v: &[Polynomial]) -> Result<Vec<Scalar>, GroebnerError> {
        let lift = self.kernel.lift(v).ok_or(GroebnerError::NotInSubmodule)?;
        let nf = self.relations.normal_form(&lift);
        let coords = self
            .standard
            .iter()
            .map(|(m, p)| nf[*p].coefficient(m))
            .collect();
        Ok(coords)
    }
}

/// dim_k ⟨kernel⟩/⟨image⟩.
pub fn subquotient_dimension(
    kernel: &ModuleGB,
    image: &[ModuleElement],
) -> Result<usize, GroebnerError> {
    Subquotient::new(kernel.clone(), image).map(|s| s.dimension())
}
