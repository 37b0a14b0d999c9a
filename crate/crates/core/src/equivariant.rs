//! Finite abelian groups acting diagonally on the variables: sectors,
//! equivariant Chern characters, the orbifold pairing and the graded reduction.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::homology::{HomCohomology, HomologyError};
use crate::invariants::{derivative_product, supertrace, InvariantError};
use crate::matrix::{PolyMatrix, ScalarMatrix};
use crate::mf::{is_closed, stabilized_residue_field, Exterior, MatFac, MfError, Morphism};
use crate::milnor::{MilnorError, MilnorRing};
use crate::poly::{PolyRing, Polynomial, QuasiDegree};
use crate::scalar::{CyclotomicField, Scalar};

/// Largest group [`DiagonalGroup::close`] will enumerate.
pub const DEFAULT_GROUP_BOUND: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquivariantError {
    #[error("group closure exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error("`{0}` is not a root of unity of the form z^k")]
    InvalidRoot(String),
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("potential is not invariant under {0}")]
    NotInvariant(String),
    #[error("differential is not equivariant under generator {0}")]
    NotEquivariant(usize),
    #[error("action matrix for generator {0} is not an invertible parity-preserving matrix")]
    BadAction(usize),
    #[error("action does not respect the group relations at {0}")]
    NotHomomorphism(String),
    #[error("morphism is not closed and G-invariant")]
    NotInvariantMorphism,
    #[error("factorizations carry different groups or potentials")]
    Mismatch,
    #[error("equivariant Euler characteristic {0} is not an integer")]
    NonInteger(String),
    #[error("averaging projector is not idempotent")]
    NotProjector,
    #[error("potential is not quasi-homogeneous of the given degree")]
    Inhomogeneous,
    #[error("basis degrees are incompatible with the differential at entry ({row}, {col})")]
    IncompatibleDegrees { row: usize, col: usize },
    #[error("basis vector {0} has odd degree plus parity·ℓ in a doubled grading")]
    OddDoubledDegree(usize),
    #[error(transparent)]
    Milnor(#[from] MilnorError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Mf(#[from] MfError),
}

/// diag(ζ^{k_1}, …, ζ^{k_n}) with exponents reduced mod the field order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    exps: Vec<u32>,
}

impl GroupElement {
    pub fn new(exps: Vec<u32>) -> Self {
        GroupElement { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Self, m: u32) -> Self {
        GroupElement {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| (a + b) % m)
                .collect(),
        }
    }

    fn inverse(&self, m: u32) -> Self {
        GroupElement {
            exps: self.exps.iter().map(|&a| (m - a) % m).collect(),
        }
    }

    /// Indices i with λ_i = 1.
    pub fn fixed_indices(&self) -> Vec<usize> {
        (0..self.exps.len())
            .filter(|&i| self.exps[i] == 0)
            .collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|&e| if e == 0 { "1".into() } else { format!("z^{e}") })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Parses `1`, `-1`, `z`, `z^k` or `z^-k` as an exponent of ζ_m.
pub fn parse_root(text: &str, m: u32) -> Result<u32, EquivariantError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || EquivariantError::InvalidRoot(text.to_string());
    let k: i64 = match t.as_str() {
        "1" => 0,
        "-1" if m.is_multiple_of(2) => (m / 2) as i64,
        "z" => 1,
        _ => t
            .strip_prefix("z^")
            .and_then(|e| {
                e.trim_start_matches(['(', '{'])
                    .trim_end_matches([')', '}'])
                    .parse()
                    .ok()
            })
            .ok_or_else(bad)?,
    };
    Ok(k.rem_euclid(m as i64) as u32)
}

#[derive(Clone, Debug)]
pub struct DiagonalGroup {
    field: Arc<CyclotomicField>,
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
}

impl PartialEq for DiagonalGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.elements == other.elements
    }
}

impl DiagonalGroup {
    /// Closure of the generators under multiplication, identity first.
    pub fn close(
        field: &Arc<CyclotomicField>,
        nvars: usize,
        generators: Vec<GroupElement>,
    ) -> Result<Self, EquivariantError> {
        Self::close_bounded(field, nvars, generators, DEFAULT_GROUP_BOUND)
    }

    pub fn close_bounded(
        field: &Arc<CyclotomicField>,
        nvars: usize,
        generators: Vec<GroupElement>,
        bound: usize,
    ) -> Result<Self, EquivariantError> {
        let m = field.order();
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.exps.len() != nvars {
                return Err(EquivariantError::LengthMismatch {
                    expected: nvars,
                    found: g.exps.len(),
                });
            }
            gens.push(GroupElement {
                exps: g.exps.iter().map(|e| e % m).collect(),
            });
        }
        let id = GroupElement {
            exps: vec![0; nvars],
        };
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0)]);
        let mut k = 0;
        while k < elements.len() {
            for s in &gens {
                let next = s.mul(&elements[k], m);
                if !index.contains_key(&next) {
                    if elements.len() == bound {
                        return Err(EquivariantError::GroupTooLarge(bound));
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            k += 1;
        }
        Ok(DiagonalGroup {
            field: field.clone(),
            generators: gens,
            elements,
            index,
        })
    }

    /// The cyclic group generated by x_i ↦ ζ_m^{k_i} x_i.
    pub fn cyclic(m: u32, exps: &[u32]) -> Self {
        Self::close(
            &CyclotomicField::new(m),
            exps.len(),
            vec![GroupElement::new(exps.to_vec())],
        )
        .expect("cyclic group closes")
    }

    pub fn trivial(nvars: usize) -> Self {
        Self::close(&CyclotomicField::new(1), nvars, Vec::new()).expect("trivial group closes")
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// Order m of the ambient roots of unity.
    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn nvars(&self) -> usize {
        self.elements[0].exps.len()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        a.mul(b, self.order())
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        g.inverse(self.order())
    }

    /// The eigenvalues λ_i(g).
    pub fn lambdas(&self, g: &GroupElement) -> Vec<Scalar> {
        g.exps
            .iter()
            .map(|&e| self.field.zeta_pow(e as i64))
            .collect()
    }

    /// w(g·x) = w(x) for every element.
    pub fn check_invariance(&self, w: &Polynomial) -> Result<(), EquivariantError> {
        for g in &self.elements {
            if &w.scale_variables(&self.lambdas(g)) != w {
                return Err(EquivariantError::NotInvariant(g.to_string()));
            }
        }
        Ok(())
    }

    /// Π over non-fixed indices of (1 − λ_i(g))⁻¹.
    pub fn c_weight(&self, g: &GroupElement) -> Scalar {
        let mut c = Scalar::one();
        for (i, l) in self.lambdas(g).into_iter().enumerate() {
            if g.exps[i] != 0 {
                c = &c
                    * &(Scalar::one() - l)
                        .inv()
                        .expect("λ ≠ 1 off the fixed locus");
            }
        }
        c
    }

    /// det(id − g) on the span of the variables.
    pub fn det_one_minus(&self, g: &GroupElement) -> Scalar {
        self.lambdas(g)
            .into_iter()
            .fold(Scalar::one(), |acc, l| &acc * &(Scalar::one() - l))
    }
}

/// The character g ↦ Π λ_i(g)^{c_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character(pub Vec<i64>);

impl Character {
    pub fn trivial(nvars: usize) -> Self {
        Character(vec![0; nvars])
    }

    pub fn eval(&self, group: &DiagonalGroup, g: &GroupElement) -> Scalar {
        let k: i64 = self.0.iter().zip(&g.exps).map(|(c, &e)| c * e as i64).sum();
        group.field.zeta_pow(k)
    }
}

/// The fixed locus of g with the restricted potential and its Milnor ring.
#[derive(Clone, Debug)]
pub struct Sector {
    pub element: GroupElement,
    pub fixed: Vec<usize>,
    pub ring: PolyRing,
    pub potential: Polynomial,
    pub milnor: MilnorRing,
}

impl Sector {
    pub fn new(
        ring: &PolyRing,
        w: &Polynomial,
        g: &GroupElement,
    ) -> Result<Self, EquivariantError> {
        let fixed = g.fixed_indices();
        let sub = ring.subring(&fixed);
        let wg = w.restrict(&fixed);
        let milnor = MilnorRing::new(&sub, &wg)?;
        Ok(Sector {
            element: g.clone(),
            fixed,
            ring: sub,
            potential: wg,
            milnor,
        })
    }

    pub fn nfixed(&self) -> usize {
        self.fixed.len()
    }

    pub fn parity(&self) -> u8 {
        (self.fixed.len() % 2) as u8
    }
}

pub fn sector(
    ring: &PolyRing,
    w: &Polynomial,
    g: &GroupElement,
) -> Result<Sector, EquivariantError> {
    Sector::new(ring, w, g)
}

/// A class in A_{w_g}, in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorClass {
    pub element: GroupElement,
    pub fixed: Vec<usize>,
    pub value: Polynomial,
    pub parity: u8,
}

/// A matrix factorization with a compatible action: ρ(g)·δ(λ(g)x)·ρ(g)⁻¹ = δ(x).
#[derive(Clone, Debug)]
pub struct EquivariantMF {
    base: MatFac,
    group: DiagonalGroup,
    rho: Vec<ScalarMatrix>,
}

fn is_block_diagonal(m: &ScalarMatrix, r0: usize) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| (i < r0) == (j < r0) || m.get(i, j).is_zero()))
}

impl EquivariantMF {
    /// `generator_rho[k]` is the full (even-first) action matrix of the k-th group generator.
    pub fn new(
        base: MatFac,
        group: DiagonalGroup,
        generator_rho: Vec<ScalarMatrix>,
    ) -> Result<Self, EquivariantError> {
        let r = base.rank();
        if generator_rho.len() != group.generators.len() {
            return Err(EquivariantError::LengthMismatch {
                expected: group.generators.len(),
                found: generator_rho.len(),
            });
        }
        if group.nvars() != base.nvars() {
            return Err(EquivariantError::LengthMismatch {
                expected: base.nvars(),
                found: group.nvars(),
            });
        }
        for (k, m) in generator_rho.iter().enumerate() {
            if m.rows() != r
                || m.cols() != r
                || !is_block_diagonal(m, base.r0())
                || m.det_gauss().is_zero()
            {
                return Err(EquivariantError::BadAction(k));
            }
        }
        let mut rho: Vec<Option<ScalarMatrix>> = vec![None; group.len()];
        rho[0] = Some(ScalarMatrix::scalar_identity(r));
        let m = group.order();
        for k in 0..group.len() {
            let h = rho[k]
                .clone()
                .expect("elements are enumerated in closure order");
            for (s, rs) in group.generators.iter().zip(&generator_rho) {
                let idx = group.index[&s.mul(&group.elements[k], m)];
                let prod = rs.mul(&h);
                match &rho[idx] {
                    Some(existing) if existing != &prod => {
                        return Err(EquivariantError::NotHomomorphism(
                            group.elements[idx].to_string(),
                        ));
                    }
                    Some(_) => {}
                    None => rho[idx] = Some(prod),
                }
            }
        }
        let e = EquivariantMF {
            base,
            group,
            rho: rho
                .into_iter()
                .map(|x| x.expect("closure reaches every element"))
                .collect(),
        };
        for (k, g) in e.group.generators.iter().enumerate() {
            if !e.commutes(g, &e.base.delta()) {
                return Err(EquivariantError::NotEquivariant(k));
            }
        }
        Ok(e)
    }

    /// The same action for every element given explicitly as an element-indexed family.
    fn from_family(base: MatFac, group: DiagonalGroup, rho: Vec<ScalarMatrix>) -> Self {
        EquivariantMF { base, group, rho }
    }

    /// Diagonal action ρ(g) = diag(χ_u(g)) with one character per basis vector.
    pub fn diagonal(
        base: MatFac,
        group: DiagonalGroup,
        characters: &[Character],
    ) -> Result<Self, EquivariantError> {
        if characters.len() != base.rank() {
            return Err(EquivariantError::LengthMismatch {
                expected: base.rank(),
                found: characters.len(),
            });
        }
        let gens: Vec<ScalarMatrix> = group
            .generators
            .iter()
            .map(|g| {
                ScalarMatrix::diagonal(
                    characters.iter().map(|c| c.eval(&group, g)).collect(),
                    Scalar::zero(),
                )
            })
            .collect();
        Self::new(base, group, gens)
    }

    pub fn base(&self) -> &MatFac {
        &self.base
    }

    pub fn group(&self) -> &DiagonalGroup {
        &self.group
    }

    pub fn rho(&self, g: &GroupElement) -> &ScalarMatrix {
        &self.rho[self.group.index_of(g).expect("element of the group")]
    }

    /// ρ(g)·M(λx)·ρ(g)⁻¹ = M(x) for a full endomorphism matrix.
    fn commutes(&self, g: &GroupElement, m: &PolyMatrix) -> bool {
        let n = self.base.nvars();
        let rho = self.rho(g);
        let rinv = rho.inverse().expect("ρ is invertible");
        let lhs = PolyMatrix::from_scalars(rho, n)
            .mul(&m.scale_variables(&self.group.lambdas(g)))
            .mul(&PolyMatrix::from_scalars(&rinv, n));
        &lhs == m
    }

    /// ρ_a ⊗ E: every ρ(g) multiplied by χ(g).
    pub fn twist(&self, chi: &Character) -> Self {
        let rho = self
            .group
            .elements
            .iter()
            .zip(&self.rho)
            .map(|(g, m)| m.scale(&chi.eval(&self.group, g)))
            .collect();
        Self::from_family(self.base.clone(), self.group.clone(), rho)
    }

    /// E* with the contragredient action ρ^{−T}.
    pub fn dual(&self) -> Self {
        let rho = self
            .rho
            .iter()
            .map(|m| m.inverse().expect("ρ is invertible").transpose())
            .collect();
        Self::from_family(self.base.dual(), self.group.clone(), rho)
    }

    /// E[1]: parities swapped, same action.
    pub fn shift(&self) -> Self {
        let (r0, r) = (self.base.r0(), self.base.rank());
        let perm: Vec<usize> = (r0..r).chain(0..r0).collect();
        let rho = self.rho.iter().map(|m| m.select(&perm, &perm)).collect();
        Self::from_family(self.base.shift(), self.group.clone(), rho)
    }

    pub fn tensor(&self, other: &EquivariantMF) -> Result<Self, EquivariantError> {
        if self.group != other.group {
            return Err(EquivariantError::Mismatch);
        }
        let base = self.base.tensor(&other.base)?;
        let rf = other.base.rank();
        let par = |k: usize| (self.base.parity_of(k / rf) + other.base.parity_of(k % rf)) % 2;
        let total = self.base.rank() * rf;
        let perm: Vec<usize> = (0..total)
            .filter(|&k| par(k) == 0)
            .chain((0..total).filter(|&k| par(k) == 1))
            .collect();
        let rho = self
            .rho
            .iter()
            .zip(&other.rho)
            .map(|(a, b)| a.kron(b).select(&perm, &perm))
            .collect();
        Ok(Self::from_family(base, self.group.clone(), rho))
    }

    /// Whether a closed endomorphism commutes with the action.
    pub fn is_invariant_morphism(&self, alpha: &Morphism) -> bool {
        alpha.source_ranks() == self.base.ranks()
            && alpha.target_ranks() == self.base.ranks()
            && is_closed(&self.base, &self.base, alpha)
            && self
                .group
                .generators
                .iter()
                .all(|g| self.commutes(g, alpha.matrix()))
    }
}

fn sector_value(
    e: &EquivariantMF,
    s: &Sector,
    rho_at: &GroupElement,
    alpha: &PolyMatrix,
    order: &[usize],
) -> Result<Polynomial, EquivariantError> {
    let n = e.base.nvars();
    let m = PolyMatrix::from_scalars(e.rho(rho_at), n).mul(alpha);
    let m = derivative_product(&e.base, order, &m).restrict(&s.fixed);
    Ok(s.milnor.normal_form(&supertrace(&m, e.base.r0())?))
}

/// str(∂_{i_k}δ ∘ … ∘ ∂_{i_1}δ ∘ ρ(h) ∘ α) on the fixed locus of the sector, for i_1 < … < i_k fixed.
fn sector_tau(
    e: &EquivariantMF,
    s: &Sector,
    h: &GroupElement,
    alpha: &Morphism,
) -> Result<SectorClass, EquivariantError> {
    let value = sector_value(e, s, h, alpha.matrix(), &s.fixed)?;
    Ok(SectorClass {
        element: s.element.clone(),
        fixed: s.fixed.clone(),
        value,
        parity: (s.parity() + alpha.parity) % 2,
    })
}

pub fn chern_equivariant(
    e: &EquivariantMF,
    g: &GroupElement,
) -> Result<SectorClass, EquivariantError> {
    let s = Sector::new(e.base.ring(), e.base.potential(), g)?;
    sector_tau(e, &s, g, &e.base.identity())
}

pub fn tau_equivariant(
    e: &EquivariantMF,
    alpha: &Morphism,
    g: &GroupElement,
) -> Result<SectorClass, EquivariantError> {
    if !e.is_invariant_morphism(alpha) {
        return Err(EquivariantError::NotInvariantMorphism);
    }
    let s = Sector::new(e.base.ring(), e.base.potential(), g)?;
    sector_tau(e, &s, g, alpha)
}

/// [`tau_equivariant`] with the fixed-index derivatives applied in the order `sigma`
/// (positions into the fixed list, `sigma[0]` first), corrected by sgn(σ).
pub fn tau_equivariant_permuted(
    e: &EquivariantMF,
    alpha: &Morphism,
    g: &GroupElement,
    sigma: &[usize],
) -> Result<SectorClass, EquivariantError> {
    if !e.is_invariant_morphism(alpha) {
        return Err(EquivariantError::NotInvariantMorphism);
    }
    let s = Sector::new(e.base.ring(), e.base.potential(), g)?;
    assert_eq!(sigma.len(), s.nfixed(), "permutation has the wrong length");
    let order: Vec<usize> = sigma.iter().map(|&k| s.fixed[k]).collect();
    let inversions = (0..sigma.len())
        .flat_map(|i| (i + 1..sigma.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| sigma[i] > sigma[j])
        .count();
    let v = sector_value(e, &s, g, alpha.matrix(), &order)?;
    let value = if inversions % 2 == 1 { v.neg() } else { v };
    Ok(SectorClass {
        element: g.clone(),
        fixed: s.fixed.clone(),
        value,
        parity: (s.parity() + alpha.parity) % 2,
    })
}

/// |G|⁻¹ Σ_g c_g ⟨ch_G(E)_{g⁻¹}, ch_G(F)_g⟩_{w_g}.
pub fn chi_equivariant(e: &EquivariantMF, f: &EquivariantMF) -> Result<Scalar, EquivariantError> {
    if e.group != f.group
        || e.base.potential() != f.base.potential()
        || e.base.nvars() != f.base.nvars()
    {
        return Err(EquivariantError::Mismatch);
    }
    let group = &e.group;
    let mut acc = Scalar::zero();
    for g in group.elements() {
        let s = Sector::new(e.base.ring(), e.base.potential(), g)?;
        let ce = sector_tau(e, &s, &group.inverse(g), &e.base.identity())?;
        let cf = sector_tau(f, &s, g, &f.base.identity())?;
        let pairing = s.milnor.pairing(&ce.value, &cf.value);
        acc = &acc + &(&group.c_weight(g) * &pairing);
    }
    let chi = &acc * &Scalar::from_ratio(1, group.len() as i64);
    if chi.as_integer().is_none() {
        return Err(EquivariantError::NonInteger(chi.to_string()));
    }
    Ok(chi)
}

/// Hom⁰ and Hom¹ dimensions of the χ-isotypic part of Hom(E, F) under f ↦ ρ_F f(λx) ρ_E⁻¹,
/// computed by averaging traces over the group.
pub fn hom_isotypic_dimensions(
    e: &EquivariantMF,
    f: &EquivariantMF,
    chi: &Character,
) -> Result<(usize, usize), EquivariantError> {
    let h = HomCohomology::new(&e.base, &f.base)?;
    hom_isotypic_dimensions_with(&h, e, f, chi)
}

pub fn hom_isotypic_dimensions_with(
    h: &HomCohomology,
    e: &EquivariantMF,
    f: &EquivariantMF,
    chi: &Character,
) -> Result<(usize, usize), EquivariantError> {
    if e.group != f.group {
        return Err(EquivariantError::Mismatch);
    }
    let group = &e.group;
    let n = e.base.nvars();
    let mut dims = [0usize; 2];
    for p in 0..2u8 {
        let d = h.dim(p);
        let mut proj = ScalarMatrix::scalar_zeros(d, d);
        for g in group.elements() {
            let lambdas = group.lambdas(g);
            let rf = PolyMatrix::from_scalars(f.rho(g), n);
            let re = PolyMatrix::from_scalars(&e.rho(g).inverse().expect("ρ is invertible"), n);
            let act = |m: &Morphism| {
                let mat = rf.mul(&m.matrix().scale_variables(&lambdas)).mul(&re);
                Morphism::from_matrix_ranks(m.source_ranks(), m.target_ranks(), m.parity, mat)
                    .expect("action preserves parity")
            };
            let weight = chi
                .eval(group, g)
                .inv()
                .expect("roots of unity are invertible");
            proj = proj.add(&h.induced_matrix(p, act)?.scale(&weight));
        }
        let proj = proj.scale(&Scalar::from_ratio(1, group.len() as i64));
        if proj.mul(&proj) != proj {
            return Err(EquivariantError::NotProjector);
        }
        let t = proj.trace();
        dims[p as usize] = t
            .as_integer()
            .and_then(|v| usize::try_from(v).ok())
            .ok_or(EquivariantError::NotProjector)?;
    }
    Ok((dims[0], dims[1]))
}

/// dim Hom⁰(E, F)^G − dim Hom¹(E, F)^G.
pub fn invariant_euler(e: &EquivariantMF, f: &EquivariantMF) -> Result<i64, EquivariantError> {
    let (a, b) = hom_isotypic_dimensions(e, f, &Character::trivial(e.base.nvars()))?;
    Ok(a as i64 - b as i64)
}

/// Invariant dimensions of one sector of the orbifold Hochschild space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorDimension {
    pub element: GroupElement,
    pub fixed: Vec<usize>,
    pub parity: u8,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldHH {
    pub sectors: Vec<SectorDimension>,
    pub even: usize,
    pub odd: usize,
}

/// ⊕_g (A_{w_g}·dx_{fixed})^G, where h acts by substitution and by Π_{i fixed} λ_i(h) on the form.
pub fn orbifold_hh_dimensions(
    ring: &PolyRing,
    w: &Polynomial,
    group: &DiagonalGroup,
) -> Result<OrbifoldHH, EquivariantError> {
    group.check_invariance(w)?;
    let mut sectors = Vec::new();
    let (mut even, mut odd) = (0, 0);
    for g in group.elements() {
        let s = Sector::new(ring, w, g)?;
        let basis: Vec<Polynomial> = s
            .milnor
            .basis()
            .iter()
            .map(|m| Polynomial::term(m.clone(), Scalar::one()))
            .collect();
        let mu = basis.len();
        let mut proj = ScalarMatrix::scalar_zeros(mu, mu);
        for h in group.elements() {
            let lambdas = group.lambdas(h);
            let sub: Vec<Scalar> = s.fixed.iter().map(|&i| lambdas[i].clone()).collect();
            let form = sub.iter().fold(Scalar::one(), |acc, l| &acc * l);
            for (k, b) in basis.iter().enumerate() {
                let image = s.milnor.normal_form(&b.scale_variables(&sub)).scale(&form);
                for (i, c) in s.milnor.coordinates(&image).into_iter().enumerate() {
                    let v = proj.get(i, k) + &c;
                    proj.set(i, k, v);
                }
            }
        }
        let proj = proj.scale(&Scalar::from_ratio(1, group.len() as i64));
        if proj.mul(&proj) != proj {
            return Err(EquivariantError::NotProjector);
        }
        let dimension = proj
            .trace()
            .as_integer()
            .and_then(|v| usize::try_from(v).ok())
            .ok_or(EquivariantError::NotProjector)?;
        if dimension != proj.rank() {
            return Err(EquivariantError::NotProjector);
        }
        if s.parity() == 0 {
            even += dimension;
        } else {
            odd += dimension;
        }
        sectors.push(SectorDimension {
            element: g.clone(),
            fixed: s.fixed.clone(),
            parity: s.parity(),
            dimension,
        });
    }
    Ok(OrbifoldHH { sectors, even, odd })
}

/// k^st with ρ(g)e_S = Π_{j∈S} λ_j(g)·e_S.
pub fn equivariant_kst(
    ring: &PolyRing,
    w: &Polynomial,
    group: &DiagonalGroup,
) -> Result<EquivariantMF, EquivariantError> {
    group.check_invariance(w)?;
    let kst = stabilized_residue_field(ring, w, None)?;
    let ext = Exterior::new(ring.nvars());
    let chars: Vec<Character> = ext
        .subsets()
        .iter()
        .map(|s| {
            let mut c = vec![0; ring.nvars()];
            for &j in s {
                c[j] = 1;
            }
            Character(c)
        })
        .collect();
    EquivariantMF::diagonal(kst, group.clone(), &chars)
}

/// The cyclic group attached to a quasi-homogeneous potential.
#[derive(Clone, Debug)]
pub struct GradedReduction {
    /// Weights after the optional doubling.
    pub weights: Vec<i64>,
    /// 2ℓ, the degree of w after the optional doubling.
    pub degree: i64,
    pub doubled: bool,
    pub group: DiagonalGroup,
}

/// G = ℤ/(2ℓ) acting by x_i ↦ ζ_{2ℓ}^{a_i}x_i, where 2ℓ = deg w (doubled first when odd).
pub fn graded_to_equivariant(
    w: &Polynomial,
    weights: &[i64],
    degw: i64,
) -> Result<GradedReduction, EquivariantError> {
    if weights.len() != w.nvars() {
        return Err(EquivariantError::LengthMismatch {
            expected: w.nvars(),
            found: weights.len(),
        });
    }
    if degw <= 0 || w.quasi_degree(weights) != QuasiDegree::Homogeneous(degw) {
        return Err(EquivariantError::Inhomogeneous);
    }
    let doubled = degw % 2 != 0;
    let k = if doubled { 2 } else { 1 };
    let weights: Vec<i64> = weights.iter().map(|a| a * k).collect();
    let degree = degw * k;
    let exps: Vec<u32> = weights
        .iter()
        .map(|a| a.rem_euclid(degree) as u32)
        .collect();
    let group = DiagonalGroup::cyclic(degree as u32, &exps);
    Ok(GradedReduction {
        weights,
        degree,
        doubled,
        group,
    })
}

impl GradedReduction {
    pub fn ell(&self) -> i64 {
        self.degree / 2
    }

    /// Checks that δ_{vu} has weighted degree deg u − deg v + ℓ and returns the
    /// equivariant factorization with γ acting on u by ζ^{deg u + |u|·ℓ}.
    /// Degrees are measured in the reduced grading, after any doubling.
    pub fn equivariant(
        &self,
        e: &MatFac,
        degrees: &[i64],
    ) -> Result<EquivariantMF, EquivariantError> {
        if degrees.len() != e.rank() {
            return Err(EquivariantError::LengthMismatch {
                expected: e.rank(),
                found: degrees.len(),
            });
        }
        let degs = degrees;
        let ell = self.ell();
        let delta = e.delta();
        for v in 0..e.rank() {
            for u in 0..e.rank() {
                let target = degs[u] - degs[v] + ell;
                if delta
                    .get(v, u)
                    .terms()
                    .iter()
                    .any(|(m, _)| m.weighted_degree(&self.weights) != target)
                {
                    return Err(EquivariantError::IncompatibleDegrees { row: v, col: u });
                }
            }
        }
        if self.doubled {
            if let Some(u) =
                (0..e.rank()).find(|&u| (degs[u] + e.parity_of(u) as i64 * ell) % 2 != 0)
            {
                return Err(EquivariantError::OddDoubledDegree(u));
            }
        }
        let field = self.group.field();
        let gens = vec![ScalarMatrix::diagonal(
            (0..e.rank())
                .map(|u| field.zeta_pow(degs[u] + e.parity_of(u) as i64 * ell))
                .collect(),
            Scalar::zero(),
        )];
        EquivariantMF::new(e.clone(), self.group.clone(), gens)
    }
}

/// Graded Euler characteristic of Hom(E, F) through the equivariant reduction.
pub fn graded_chi(
    red: &GradedReduction,
    e: &MatFac,
    e_degrees: &[i64],
    f: &MatFac,
    f_degrees: &[i64],
) -> Result<Scalar, EquivariantError> {
    chi_equivariant(
        &red.equivariant(e, e_degrees)?,
        &red.equivariant(f, f_degrees)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{chern, chi_hrr, tau};
    use crate::mf::clifford_generators;
    use proptest::prelude::*;

    fn p(r: &PolyRing, s: &str) -> Polynomial {
        r.parse(s).unwrap()
    }

    fn kz(r: &PolyRing, a: &[&str], b: &[&str]) -> MatFac {
        let a: Vec<_> = a.iter().map(|s| p(r, s)).collect();
        let b: Vec<_> = b.iter().map(|s| p(r, s)).collect();
        MatFac::koszul(r, &a, &b).unwrap()
    }

    fn el(e: &[u32]) -> GroupElement {
        GroupElement::new(e.to_vec())
    }

    /// E_i = {x^i, x^{n−i}} with ρ = ζ^i on E⁰ and 1 on E¹.
    fn zn_e(n: u32, i: u32) -> EquivariantMF {
        let r = PolyRing::rational(&["x"]);
        let e = kz(&r, &[&format!("x^{i}")], &[&format!("x^{}", n - i)]);
        EquivariantMF::diagonal(
            e,
            DiagonalGroup::cyclic(n, &[1]),
            &[Character(vec![i as i64]), Character(vec![0])],
        )
        .unwrap()
    }

    fn zeta(n: u32, k: i64) -> Scalar {
        CyclotomicField::new(n).zeta_pow(k)
    }

    #[test]
    fn closure_examples() {
        let f = CyclotomicField::new(2);
        assert_eq!(DiagonalGroup::cyclic(5, &[1]).len(), 5);
        assert_eq!(DiagonalGroup::trivial(2).len(), 1);
        let klein = DiagonalGroup::close(&f, 2, vec![el(&[1, 0]), el(&[0, 1])]).unwrap();
        assert_eq!(klein.len(), 4);
        assert!(klein.elements()[0].is_identity());
        let big = DiagonalGroup::close_bounded(&CyclotomicField::new(7), 1, vec![el(&[1])], 3);
        assert_eq!(big.unwrap_err(), EquivariantError::GroupTooLarge(3));
        assert_eq!(parse_root("z^3", 5).unwrap(), 3);
        assert_eq!(parse_root("z^-1", 5).unwrap(), 4);
        assert_eq!(parse_root("-1", 4).unwrap(), 2);
        assert!(parse_root("2", 4).is_err());
    }

    #[test]
    fn invariance_examples() {
        let r = PolyRing::rational(&["x", "y"]);
        let flip = DiagonalGroup::cyclic(2, &[0, 1]);
        assert!(flip.check_invariance(&p(&r, "x^3 + x*y^2")).is_ok());
        let r1 = PolyRing::rational(&["x"]);
        assert!(DiagonalGroup::cyclic(6, &[1])
            .check_invariance(&p(&r1, "x^6"))
            .is_ok());
        let err = DiagonalGroup::cyclic(2, &[1])
            .check_invariance(&p(&r1, "x^3"))
            .unwrap_err();
        assert_eq!(err, EquivariantError::NotInvariant("(z^1)".into()));
    }

    #[test]
    fn sector_examples() {
        let r1 = PolyRing::rational(&["x"]);
        let s = sector(&r1, &p(&r1, "x^5"), &el(&[0])).unwrap();
        assert_eq!(s.milnor.mu(), 4);
        let s = sector(&r1, &p(&r1, "x^5"), &el(&[2])).unwrap();
        assert!(s.fixed.is_empty());
        assert_eq!(s.milnor.mu(), 1);
        let r = PolyRing::rational(&["x", "y"]);
        let s = sector(&r, &p(&r, "x^3 + x*y^2"), &el(&[0, 1])).unwrap();
        assert_eq!(s.fixed, vec![0]);
        assert_eq!(s.potential, p(&s.ring, "x^3"));
        assert_eq!(s.milnor.mu(), 2);
    }

    #[test]
    fn c_weight_examples() {
        let g = DiagonalGroup::cyclic(5, &[1]);
        for m in 1..5 {
            let expected = (Scalar::one() - zeta(5, m)).inv().unwrap();
            assert_eq!(g.c_weight(&el(&[m as u32])), expected);
        }
        assert_eq!(g.c_weight(&el(&[0])), Scalar::one());
        let minus = DiagonalGroup::cyclic(2, &[1, 1]);
        assert_eq!(minus.c_weight(&el(&[1, 1])), Scalar::from_ratio(1, 4));
    }

    #[test]
    fn zn_chern_and_chi() {
        for n in [3u32, 4, 5] {
            for i in 1..n {
                let e = zn_e(n, i);
                for a in 0..n as i64 {
                    let f = e.twist(&Character(vec![a]));
                    for m in 1..n {
                        let c = chern_equivariant(&f, &el(&[m])).unwrap();
                        let expected =
                            &zeta(n, a * m as i64) * &(zeta(n, (m * i) as i64) - Scalar::one());
                        assert_eq!(c.value, Polynomial::constant(0, expected));
                    }
                    let delta = |b: i64| {
                        if (a - b).rem_euclid(n as i64) == 0 {
                            1
                        } else {
                            0
                        }
                    };
                    let expected: i64 = (0..i as i64).map(|j| delta(-j)).sum::<i64>()
                        - (1..=i as i64).map(delta).sum::<i64>();
                    assert_eq!(
                        chi_equivariant(&e, &f).unwrap(),
                        Scalar::from_int(expected),
                        "n={n} i={i} a={a}"
                    );
                    assert_eq!(invariant_euler(&e, &f).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn zn_hom_decomposition() {
        for n in [3u32, 4, 5] {
            for i in 1..=n / 2 {
                let e = zn_e(n, i);
                for a in 0..n as i64 {
                    let (h0, h1) = hom_isotypic_dimensions(&e, &e, &Character(vec![a])).unwrap();
                    let in_range = |lo: i64, hi: i64, s: i64| {
                        (lo..=hi).any(|j| (s * j - a).rem_euclid(n as i64) == 0)
                    };
                    assert_eq!(h0, in_range(0, i as i64 - 1, 1) as usize);
                    assert_eq!(h1, in_range(1, i as i64, -1) as usize);
                }
            }
        }
    }

    #[test]
    fn identity_sector_and_trivial_group() {
        let r = PolyRing::rational(&["x", "y"]);
        let w = p(&r, "x^3 + x*y^2");
        let a = MilnorRing::new(&r, &w).unwrap();
        let e = kz(&r, &["x"], &["x^2 + y^2"]);
        let f = kz(&r, &["x", "y"], &["x^2", "x*y"]);
        let eq = |m: &MatFac| {
            EquivariantMF::diagonal(
                m.clone(),
                DiagonalGroup::trivial(2),
                &vec![Character::trivial(2); m.rank()],
            )
            .unwrap()
        };
        let c = chern_equivariant(&eq(&e), &el(&[0, 0])).unwrap();
        assert_eq!(c.value, chern(&e, &a).unwrap().value);
        assert_eq!(
            chi_equivariant(&eq(&e), &eq(&f)).unwrap(),
            chi_hrr(&e, &f, &a).unwrap()
        );
        let triv = kz(&r, &["1"], &["x^3 + x*y^2"]);
        assert_eq!(
            chi_equivariant(&eq(&e), &eq(&triv)).unwrap(),
            Scalar::zero()
        );
        let id = e.identity();
        assert_eq!(
            tau_equivariant(&eq(&e), &id, &el(&[0, 0])).unwrap().value,
            tau(&e, &id, &a).unwrap().value
        );
    }

    #[test]
    fn d4_with_reflection() {
        let r = PolyRing::rational(&["x", "y"]);
        let e = kz(&r, &["x"], &["x^2 + y^2"]);
        let g = DiagonalGroup::cyclic(2, &[0, 1]);
        let eq = EquivariantMF::diagonal(
            e.clone(),
            g.clone(),
            &[Character::trivial(2), Character::trivial(2)],
        )
        .unwrap();
        let twisted = eq.twist(&Character(vec![0, 1]));
        let s = chern_equivariant(&eq, &el(&[0, 1])).unwrap();
        assert_eq!(s.fixed, vec![0]);
        assert_eq!(s.parity, 1);
        for f in [&eq, &twisted] {
            let chi = chi_equivariant(&eq, f).unwrap();
            assert_eq!(chi, Scalar::from_int(invariant_euler(&eq, f).unwrap()));
        }
        let bad = EquivariantMF::diagonal(e, g, &[Character(vec![0, 1]), Character::trivial(2)]);
        assert_eq!(bad.unwrap_err(), EquivariantError::NotEquivariant(0));
    }

    #[test]
    fn relations_are_checked() {
        let r = PolyRing::rational(&["x"]);
        let e = kz(&r, &["x^2"], &["x^2"]);
        let g = DiagonalGroup::cyclic(4, &[2]);
        let rho = ScalarMatrix::diagonal(vec![zeta(4, 1), zeta(4, 1)], Scalar::zero());
        assert!(matches!(
            EquivariantMF::new(e, g, vec![rho]),
            Err(EquivariantError::NotHomomorphism(_))
        ));
    }

    #[test]
    fn dual_swaps_inverse_sectors() {
        let e = zn_e(5, 2).twist(&Character(vec![3]));
        let d = e.dual();
        for g in e.group().elements() {
            let lhs = chern_equivariant(&d, g).unwrap();
            let rhs = chern_equivariant(&e, &e.group().inverse(g)).unwrap();
            assert_eq!(lhs.value, rhs.value);
        }
        let r = PolyRing::rational(&["x", "y"]);
        let base = kz(&r, &["x", "y"], &["x^2", "x*y"]);
        let g = DiagonalGroup::cyclic(2, &[0, 1]);
        let e = EquivariantMF::diagonal(base, g, &vec![Character::trivial(2); 4]);
        assert!(matches!(e, Err(EquivariantError::NotEquivariant(0))));
    }

    #[test]
    fn tensor_and_shift_are_equivariant() {
        let r = PolyRing::rational(&["x", "y"]);
        let g = DiagonalGroup::close(&CyclotomicField::new(3), 2, vec![el(&[1, 0]), el(&[0, 1])])
            .unwrap();
        let ex = EquivariantMF::diagonal(
            kz(&r, &["x"], &["x^2"]),
            g.clone(),
            &[Character(vec![1, 0]), Character::trivial(2)],
        )
        .unwrap();
        let ey = EquivariantMF::diagonal(
            kz(&r, &["y^2"], &["y"]),
            g.clone(),
            &[Character(vec![0, 2]), Character::trivial(2)],
        )
        .unwrap();
        let t = ex.tensor(&ey).unwrap();
        let rebuilt = EquivariantMF::new(
            t.base().clone(),
            g.clone(),
            g.generators().iter().map(|s| t.rho(s).clone()).collect(),
        );
        assert!(rebuilt.is_ok());
        let s = t.shift();
        for h in g.elements() {
            let a = chern_equivariant(&s, h).unwrap().value;
            assert_eq!(a, chern_equivariant(&t, h).unwrap().value.neg());
        }
    }

    #[test]
    fn tau_invariance_and_permutations() {
        let r = PolyRing::rational(&["x", "y", "z1"]);
        let w = p(&r, "x^3 + y^3 + z1^2");
        let group = DiagonalGroup::cyclic(2, &[0, 0, 1]);
        let kst = equivariant_kst(&r, &w, &group).unwrap();
        let alpha = kst.base().identity();
        let g = el(&[0, 0, 1]);
        let base = tau_equivariant(&kst, &alpha, &g).unwrap();
        for sigma in crate::invariants::permutations(2) {
            assert_eq!(
                tau_equivariant_permuted(&kst, &alpha, &g, &sigma)
                    .unwrap()
                    .value,
                base.value
            );
        }
        let c = clifford_generators(&r, &w).unwrap();
        assert_eq!(
            tau_equivariant(&kst, &c.generators[2], &g).unwrap_err(),
            EquivariantError::NotInvariantMorphism
        );
    }

    #[test]
    fn equivariant_kst_chern() {
        let r1 = PolyRing::rational(&["x"]);
        for n in 3..7u32 {
            let group = DiagonalGroup::cyclic(n, &[1]);
            let k = equivariant_kst(&r1, &p(&r1, &format!("x^{n}")), &group).unwrap();
            for g in group.elements() {
                let expected = if g.is_identity() {
                    Scalar::zero()
                } else {
                    group.det_one_minus(g)
                };
                assert_eq!(
                    chern_equivariant(&k, g).unwrap().value.constant_term(),
                    expected
                );
            }
        }
        let r = PolyRing::rational(&["x", "y"]);
        let group = DiagonalGroup::cyclic(2, &[0, 1]);
        let k = equivariant_kst(&r, &p(&r, "x^3 + x*y^2"), &group).unwrap();
        assert!(chern_equivariant(&k, &el(&[0, 1])).unwrap().value.is_zero());
        let r = PolyRing::rational(&["x", "y"]);
        let group = DiagonalGroup::cyclic(4, &[1, 3]);
        let k = equivariant_kst(&r, &p(&r, "x^4 + y^4"), &group).unwrap();
        for g in group.elements().iter().skip(1) {
            assert_eq!(
                chern_equivariant(&k, g).unwrap().value,
                Polynomial::constant(0, group.det_one_minus(g))
            );
        }
    }

    #[test]
    fn orbifold_hh_examples() {
        let r = PolyRing::rational(&["x", "y"]);
        let w = p(&r, "x^3 + x*y^2");
        let hh = orbifold_hh_dimensions(&r, &w, &DiagonalGroup::trivial(2)).unwrap();
        assert_eq!((hh.even, hh.odd), (4, 0));
        let r1 = PolyRing::rational(&["x"]);
        for n in 2..7u32 {
            let hh = orbifold_hh_dimensions(
                &r1,
                &p(&r1, &format!("x^{n}")),
                &DiagonalGroup::cyclic(n, &[1]),
            )
            .unwrap();
            assert_eq!(hh.sectors[0].dimension, 0);
            assert!(hh.sectors[1..]
                .iter()
                .all(|s| s.dimension == 1 && s.parity == 0));
            assert_eq!((hh.even, hh.odd), (n as usize - 1, 0));
        }
        let hh = orbifold_hh_dimensions(&r1, &p(&r1, "x^3"), &DiagonalGroup::trivial(1)).unwrap();
        assert_eq!((hh.even, hh.odd), (0, 2));
    }

    #[test]
    fn graded_reduction() {
        let r1 = PolyRing::rational(&["x"]);
        let red = graded_to_equivariant(&p(&r1, "x^5"), &[1], 5).unwrap();
        assert!(red.doubled);
        assert_eq!(red.degree, 10);
        assert_eq!(red.group.generators()[0], el(&[2]));
        assert_eq!(red.group.len(), 5);
        let red = graded_to_equivariant(&p(&r1, "x^4"), &[1], 4).unwrap();
        assert!(!red.doubled);
        assert_eq!(red.group.len(), 4);
        assert_eq!(
            graded_to_equivariant(&p(&r1, "x^3 + x^2"), &[1], 3).unwrap_err(),
            EquivariantError::Inhomogeneous
        );
        let e = kz(&r1, &["x^2"], &["x^2"]);
        assert!(red.equivariant(&e, &[0, 0]).is_ok());
        assert_eq!(
            red.equivariant(&e, &[0, 1]).unwrap_err(),
            EquivariantError::IncompatibleDegrees { row: 0, col: 1 }
        );
    }

    #[test]
    fn graded_chi_matches_invariants() {
        let r1 = PolyRing::rational(&["x"]);
        for n in [3i64, 4, 5] {
            let red = graded_to_equivariant(&p(&r1, &format!("x^{n}")), &[1], n).unwrap();
            let a = red.weights[0];
            for i in 1..n {
                let e = kz(&r1, &[&format!("x^{i}")], &[&format!("x^{}", n - i)]);
                let d = red.ell() - i * a;
                let ea = red.equivariant(&e, &[0, d]).unwrap();
                for t in 0..red.degree {
                    if red.doubled && t % 2 == 1 {
                        assert_eq!(
                            red.equivariant(&e, &[t, d + t]).unwrap_err(),
                            EquivariantError::OddDoubledDegree(0)
                        );
                        continue;
                    }
                    let eb = red.equivariant(&e, &[t, d + t]).unwrap();
                    let chi = graded_chi(&red, &e, &[0, d], &e, &[t, d + t]).unwrap();
                    assert_eq!(
                        chi,
                        Scalar::from_int(invariant_euler(&ea, &eb).unwrap()),
                        "n={n} i={i} t={t}"
                    );
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn chi_is_integer_and_dual_lemma_holds(n in 3u32..6, i in 1u32..5, a in 0i64..6, b in 0i64..6) {
            prop_assume!(i < n);
            let e = zn_e(n, i).twist(&Character(vec![a]));
            let f = zn_e(n, n - i).twist(&Character(vec![b]));
            let chi = chi_equivariant(&e, &f).unwrap();
            prop_assert!(chi.as_integer().is_some());
            prop_assert_eq!(chi, Scalar::from_int(invariant_euler(&e, &f).unwrap()));
            let d = f.dual();
            for g in f.group().elements() {
                prop_assert_eq!(chern_equivariant(&d, g).unwrap().value, chern_equivariant(&f, &f.group().inverse(g)).unwrap().value);
            }
        }
    }
}
