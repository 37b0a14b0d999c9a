//! Chern character, boundary-bulk map, and the Hirzebruch–Riemann–Roch and
//! Cardy pairings of matrix factorizations.

use crate::matrix::PolyMatrix;
use crate::mf::{is_closed, MatFac, Morphism};
use crate::milnor::{MilnorClass, MilnorError, MilnorRing};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("potential does not match the Milnor ring")]
    PotentialMismatch,
    #[error("morphism is not a closed endomorphism")]
    NotClosed,
    #[error("supertrace of a matrix whose diagonal blocks are not square")]
    ShapeMismatch,
    #[error(transparent)]
    Milnor(#[from] MilnorError),
}

/// tr(M_ee) − tr(M_oo) for a square matrix whose first `r0` basis vectors are even.
pub fn supertrace(m: &PolyMatrix, r0: usize) -> Result<Polynomial, InvariantError> {
    if m.rows() != m.cols() || r0 > m.rows() {
        return Err(InvariantError::ShapeMismatch);
    }
    let mut acc = Polynomial::zero(m.nvars());
    for i in 0..m.rows() {
        acc = if i < r0 {
            acc.add(m.get(i, i))
        } else {
            acc.sub(m.get(i, i))
        };
    }
    Ok(acc)
}

fn check(e: &MatFac, alpha: &Morphism, a: &MilnorRing) -> Result<(), InvariantError> {
    if e.potential() != a.potential() || e.nvars() != a.nvars() {
        return Err(InvariantError::PotentialMismatch);
    }
    if alpha.source_ranks() != e.ranks()
        || alpha.target_ranks() != e.ranks()
        || !is_closed(e, e, alpha)
    {
        return Err(InvariantError::NotClosed);
    }
    Ok(())
}

/// ∂_{order[k−1]}δ ∘ … ∘ ∂_{order[0]}δ ∘ m: `order[0]` is applied first.
pub fn derivative_product(e: &MatFac, order: &[usize], m: &PolyMatrix) -> PolyMatrix {
    let delta = e.delta();
    order
        .iter()
        .fold(m.clone(), |acc, &i| delta.partial_derivative(i).mul(&acc))
}

fn class_of(
    e: &MatFac,
    alpha: &Morphism,
    a: &MilnorRing,
    order: &[usize],
) -> Result<Polynomial, InvariantError> {
    let p = derivative_product(e, order, alpha.matrix());
    Ok(a.normal_form(&supertrace(&p, e.r0())?))
}

fn class_parity(a: &MilnorRing, alpha: &Morphism) -> u8 {
    (a.parity() + alpha.parity) % 2
}

/// τ^E(α) = str(∂_nδ ∘ … ∘ ∂_1δ ∘ α) mod J_w.
pub fn tau(e: &MatFac, alpha: &Morphism, a: &MilnorRing) -> Result<MilnorClass, InvariantError> {
    check(e, alpha, a)?;
    let order: Vec<usize> = (0..e.nvars()).collect();
    Ok(MilnorClass {
        value: class_of(e, alpha, a, &order)?,
        parity: class_parity(a, alpha),
    })
}

pub fn chern(e: &MatFac, a: &MilnorRing) -> Result<MilnorClass, InvariantError> {
    tau(e, &e.identity(), a)
}

fn permutation_sign(p: &[usize]) -> i64 {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// sgn(σ)·str(∂_{σ(n)}δ ∘ … ∘ ∂_{σ(1)}δ ∘ α) mod J_w, which equals τ^E(α) for every σ.
pub fn tau_permuted(
    e: &MatFac,
    alpha: &Morphism,
    a: &MilnorRing,
    sigma: &[usize],
) -> Result<MilnorClass, InvariantError> {
    check(e, alpha, a)?;
    assert_eq!(sigma.len(), e.nvars(), "permutation has the wrong length");
    let v = class_of(e, alpha, a, sigma)?;
    let v = if permutation_sign(sigma) < 0 {
        v.neg()
    } else {
        v
    };
    Ok(MilnorClass {
        value: v,
        parity: class_parity(a, alpha),
    })
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

/// (−1)^{C(n,2)}/n! · Σ_σ sgn(σ)·str(∂_{σ(1)}δ ∘ … ∘ ∂_{σ(n)}δ ∘ α) mod J_w.
pub fn chern_antisymmetrized(
    e: &MatFac,
    alpha: &Morphism,
    a: &MilnorRing,
) -> Result<MilnorClass, InvariantError> {
    check(e, alpha, a)?;
    let n = e.nvars();
    let mut acc = Polynomial::zero(n);
    let perms = permutations(n);
    for sigma in &perms {
        let reversed: Vec<usize> = sigma.iter().rev().copied().collect();
        let term = supertrace(&derivative_product(e, &reversed, alpha.matrix()), e.r0())?;
        acc = if permutation_sign(sigma) > 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    let c = Scalar::from_ratio(crate::milnor::orientation_sign(n), perms.len() as i64);
    Ok(MilnorClass {
        value: a.normal_form(&acc.scale(&c)),
        parity: class_parity(a, alpha),
    })
}

/// ⟨ch(E), ch(F)⟩.
pub fn chi_hrr(e: &MatFac, f: &MatFac, a: &MilnorRing) -> Result<Scalar, InvariantError> {
    let (ce, cf) = (chern(e, a)?, chern(f, a)?);
    Ok(a.canonical_pairing(&ce, &cf)?)
}

/// ⟨τ^E(α), τ^F(β)⟩.
pub fn cardy_rhs(
    e: &MatFac,
    f: &MatFac,
    alpha: &Morphism,
    beta: &Morphism,
    a: &MilnorRing,
) -> Result<Scalar, InvariantError> {
    let (ta, tb) = (tau(e, alpha, a)?, tau(f, beta, a)?);
    Ok(a.canonical_pairing(&ta, &tb)?)
}

/// The variant carrying an extra sign (−1)^{|α|}, kept for comparison with [`cardy_rhs`].
pub fn cardy_rhs_signed(
    e: &MatFac,
    f: &MatFac,
    alpha: &Morphism,
    beta: &Morphism,
    a: &MilnorRing,
) -> Result<Scalar, InvariantError> {
    let v = cardy_rhs(e, f, alpha, beta, a)?;
    Ok(if alpha.parity == 1 { -v } else { v })
}
