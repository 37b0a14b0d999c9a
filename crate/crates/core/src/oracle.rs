//! Independent checks built on the stabilized diagonal: the D-tensor solved
//! level by level from the closedness system, the Chern character of the
//! diagonal computed two ways, and the inverse-form identity.
//!
//! The D-tensor is computed in coordinates (x, t) with y = x + t, where the
//! Koszul differential ι(Σ t_j e_j*) has the complement
//! C = Σ k[x][t_{i₁}, …, t_n]·e_{i₁}∧…∧e_{i_j}. None of this goes through the
//! closed-form product of derivatives used by [`crate::invariants::tau`].

use std::collections::{BTreeMap, HashMap};

use crate::groebner::GroebnerBasis;
use crate::invariants::{chern, supertrace, InvariantError};
use crate::matrix::{Echelon, PolyMatrix, ScalarMatrix};
use crate::mf::{is_closed, MatFac, MfError, Morphism};
use crate::milnor::{orientation_sign, MilnorClass, MilnorError, MilnorRing};
use crate::poly::{Monomial, PolyRing, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("right-hand side at level {0} is not in the image of the Koszul differential")]
    NotExact(usize),
    #[error("telescoping identity for the difference derivatives fails")]
    Telescoping,
    #[error("morphism is not a closed endomorphism")]
    NotClosed,
    #[error("potential does not match the Milnor ring")]
    PotentialMismatch,
    #[error("coefficient matrix is not the inverse of the trace form")]
    InverseFormMismatch,
    #[error(transparent)]
    Mf(#[from] MfError),
    #[error(transparent)]
    Milnor(#[from] MilnorError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// Δ^st = koszul((Δ₁w, …, Δ_nw), (y₁ − x₁, …, y_n − x_n)) over the doubled ring.
#[derive(Clone, Debug)]
pub struct DiagonalData {
    pub ring: PolyRing,
    pub differences: Vec<Polynomial>,
    pub diagonal: MatFac,
}

/// w(y) in the doubled ring.
fn in_y(f: &Polynomial) -> Polynomial {
    let n = f.nvars();
    f.embed(2 * n, &(n..2 * n).collect::<Vec<_>>())
}

fn in_x(f: &Polynomial) -> Polynomial {
    let n = f.nvars();
    f.embed(2 * n, &(0..n).collect::<Vec<_>>())
}

pub fn build_diagonal(ring: &PolyRing, w: &Polynomial) -> Result<DiagonalData, OracleError> {
    let n = ring.nvars();
    let doubled = ring.doubled();
    let differences: Vec<Polynomial> = (0..n).map(|j| w.difference_derivative(j)).collect();
    let steps: Vec<Polynomial> = (0..n)
        .map(|j| Polynomial::var(2 * n, n + j).sub(&Polynomial::var(2 * n, j)))
        .collect();
    let diagonal = MatFac::koszul(&doubled, &differences, &steps)?;
    if diagonal.potential() != &in_y(w).sub(&in_x(w)) {
        return Err(OracleError::Telescoping);
    }
    Ok(DiagonalData {
        ring: doubled,
        differences,
        diagonal,
    })
}

fn subsets_of_size(n: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, j, &mut Vec::new(), &mut out);
    out
}

/// (−1)^{#{i ∈ s : i < k}}.
fn koszul_sign(s: &[usize], k: usize) -> i64 {
    if s.iter().filter(|&&i| i < k).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Monomials of degree `d` in the variables `lo..n`, as exponent vectors of length n.
fn monomials(lo: usize, n: usize, d: u32) -> Vec<Vec<u32>> {
    if lo >= n {
        return if d == 0 { vec![vec![0; n]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for e in (0..=d).rev() {
        for mut rest in monomials(lo + 1, n, d - e) {
            rest[lo] = e;
            out.push(rest);
        }
    }
    out
}

type Level = BTreeMap<Vec<usize>, PolyMatrix>;

/// The normalized solution D = Σ D_j of the closedness system, stored in (x, t) coordinates.
#[derive(Clone, Debug)]
pub struct DTensor {
    n: usize,
    r0: usize,
    levels: Vec<Level>,
    delta_x: PolyMatrix,
    delta_y: PolyMatrix,
    differences: Vec<Polynomial>,
}

/// Linear system for ι(Σ t_k e_k*) from level j+1 to level j at t-degree d.
struct KoszulSystem {
    rows: HashMap<(Vec<usize>, Vec<u32>), usize>,
    cols: Vec<(Vec<usize>, Vec<u32>)>,
    echelon: Echelon,
}

impl KoszulSystem {
    fn new(n: usize, j: usize, d: u32) -> Self {
        let mut cols = Vec::new();
        for t in subsets_of_size(n, j + 1) {
            for mu in monomials(t[0], n, d - 1) {
                cols.push((t.clone(), mu));
            }
        }
        let mut rows = HashMap::new();
        for s in subsets_of_size(n, j) {
            for mu in monomials(0, n, d) {
                let k = rows.len();
                rows.insert((s.clone(), mu), k);
            }
        }
        let mut m = ScalarMatrix::scalar_zeros(rows.len(), cols.len());
        for (c, (t, mu)) in cols.iter().enumerate() {
            for &k in t {
                let s: Vec<usize> = t.iter().copied().filter(|&i| i != k).collect();
                let mut nu = mu.clone();
                nu[k] += 1;
                m.set(rows[&(s, nu)], c, Scalar::from_int(koszul_sign(t, k)));
            }
        }
        KoszulSystem {
            rows,
            cols,
            echelon: m.echelon(),
        }
    }
}

impl DTensor {
    pub fn nvars(&self) -> usize {
        self.n
    }

    /// D_j(i₁ < … < i_j) in (x, t) coordinates, zero when absent.
    pub fn component(&self, subset: &[usize]) -> PolyMatrix {
        let r = self.delta_x.rows();
        self.levels[subset.len()]
            .get(subset)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::poly_zeros(r, r, 2 * self.n))
    }

    /// D_j(i₁ < … < i_j) over the doubled ring (x, y).
    pub fn component_xy(&self, subset: &[usize]) -> PolyMatrix {
        let n = self.n;
        let back: Vec<Polynomial> = (0..n)
            .map(|i| Polynomial::var(2 * n, i))
            .chain((0..n).map(|i| Polynomial::var(2 * n, n + i).sub(&Polynomial::var(2 * n, i))))
            .collect();
        self.component(subset).substitute(&back, 2 * n)
    }

    /// D_n with t = 0, as a matrix over k[x].
    pub fn top_on_diagonal(&self) -> PolyMatrix {
        let top: Vec<usize> = (0..self.n).collect();
        self.component(&top)
            .restrict(&(0..self.n).collect::<Vec<_>>())
    }

    /// δ̃(M) = δ(x)M − (−1)^{|M|}Mδ(y).
    fn tilde(&self, m: &PolyMatrix, parity: usize) -> PolyMatrix {
        let a = self.delta_x.mul(m);
        let b = m.mul(&self.delta_y);
        if parity.is_multiple_of(2) {
            a.sub(&b)
        } else {
            a.add(&b)
        }
    }

    fn zero(&self) -> PolyMatrix {
        let r = self.delta_x.rows();
        PolyMatrix::poly_zeros(r, r, 2 * self.n)
    }

    /// (Σ Δ_k w·e_k)∧ applied to level j − 1, landing in level j.
    fn wedge_w(&self, j: usize) -> Level {
        let mut out = Level::new();
        if j == 0 || j > self.n {
            return out;
        }
        for s in subsets_of_size(self.n, j) {
            let mut acc = self.zero();
            for &k in &s {
                let rest: Vec<usize> = s.iter().copied().filter(|&i| i != k).collect();
                if let Some(m) = self.levels[j - 1].get(&rest) {
                    let c = self.differences[k].scale(&Scalar::from_int(koszul_sign(&s, k)));
                    acc = acc.add(&m.map(Polynomial::zero(2 * self.n), |p| p.mul(&c)));
                }
            }
            out.insert(s, acc);
        }
        out
    }

    /// ι(Σ t_k e_k*) applied to level j + 1, landing in level j.
    fn contract_t(&self, j: usize) -> Level {
        let mut out = Level::new();
        if j + 1 > self.n {
            return out;
        }
        for (t, m) in &self.levels[j + 1] {
            for &k in t {
                let s: Vec<usize> = t.iter().copied().filter(|&i| i != k).collect();
                let c = Polynomial::var(2 * self.n, self.n + k)
                    .scale(&Scalar::from_int(koszul_sign(t, k)));
                let term = m.map(Polynomial::zero(2 * self.n), |p| p.mul(&c));
                let e = out.entry(s).or_insert_with(|| self.zero());
                *e = e.add(&term);
            }
        }
        out
    }

    /// δ_Δ(D_{j+1}) + δ_w(D_{j−1}) + (−1)^j δ̃(D_j) at every level; all zero for a genuine solution.
    pub fn residuals(&self) -> Vec<Level> {
        (0..=self.n)
            .map(|j| {
                let mut out = Level::new();
                let (a, b) = (self.contract_t(j), self.wedge_w(j));
                for s in subsets_of_size(self.n, j) {
                    let mut r = self.tilde(&self.component(&s), j);
                    if j % 2 == 1 {
                        r = r.neg();
                    }
                    if let Some(m) = a.get(&s) {
                        r = r.add(m);
                    }
                    if let Some(m) = b.get(&s) {
                        r = r.add(m);
                    }
                    out.insert(s, r);
                }
                out
            })
            .collect()
    }

    pub fn residual_vanishes(&self) -> bool {
        self.residuals()
            .iter()
            .all(|l| l.values().all(|m| m.is_zero()))
    }

    /// Whether every component D_j(i₁, …) is free of t_k for k < i₁.
    pub fn is_normalized(&self) -> bool {
        self.levels.iter().all(|l| {
            l.iter().all(|(s, m)| {
                let lo = s.first().copied().unwrap_or(0);
                m.entries().iter().all(|p| {
                    p.terms().iter().all(|(mono, _)| {
                        mono.exponents()[self.n..self.n + lo]
                            .iter()
                            .all(|&e| e == 0)
                    })
                })
            })
        })
    }

    /// D_j(m, …, n−1)|_{t_m = 0} = D_{j−1}(m+1, …, n−1) ∘ (∂_mδ)(x₀…x_m, y_{m+1}…y_{n−1}) with m = n − j.
    pub fn recursion_holds(&self, e: &MatFac) -> bool {
        let n = self.n;
        (1..=n).all(|j| {
            let m = n - j;
            let s: Vec<usize> = (m..n).collect();
            let mut to_zero: Vec<Polynomial> =
                (0..2 * n).map(|i| Polynomial::var(2 * n, i)).collect();
            to_zero[n + m] = Polynomial::zero(2 * n);
            let lhs = self.component(&s).substitute(&to_zero, 2 * n);
            let mixed: Vec<Polynomial> = (0..n)
                .map(|i| {
                    if i <= m {
                        Polynomial::var(2 * n, i)
                    } else {
                        Polynomial::var(2 * n, i).add(&Polynomial::var(2 * n, n + i))
                    }
                })
                .collect();
            let dd = e.partial_delta(m).substitute(&mixed, 2 * n);
            lhs == self.component(&s[1..]).mul(&dd)
        })
    }
}

/// Splits a polynomial in (x, t) into (x-exponents, t-degree) groups of t-monomials.
fn split_xt(p: &Polynomial, n: usize) -> BTreeMap<(Vec<u32>, u32), Vec<(Vec<u32>, Scalar)>> {
    let mut out: BTreeMap<(Vec<u32>, u32), Vec<(Vec<u32>, Scalar)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = m.exponents();
        let tx: Vec<u32> = e[n..].to_vec();
        let d = tx.iter().sum();
        out.entry((e[..n].to_vec(), d))
            .or_default()
            .push((tx, c.clone()));
    }
    out
}

pub fn solve_d(e: &MatFac) -> Result<DTensor, OracleError> {
    let n = e.nvars();
    let big = 2 * n;
    let shift: Vec<Polynomial> = (0..n)
        .map(|i| Polynomial::var(big, i).add(&Polynomial::var(big, n + i)))
        .collect();
    let to_t = |p: &Polynomial| {
        let subs: Vec<Polynomial> = (0..n)
            .map(|i| Polynomial::var(big, i))
            .chain(shift.iter().cloned())
            .collect();
        p.substitute(&subs, big)
    };
    let delta = e.delta();
    let r = delta.rows();
    let mut d = DTensor {
        n,
        r0: e.r0(),
        levels: vec![Level::new(); n + 1],
        delta_x: delta.embed(big, &(0..n).collect::<Vec<_>>()),
        delta_y: delta.substitute(&shift, big),
        differences: (0..n)
            .map(|k| to_t(&e.potential().difference_derivative(k)))
            .collect(),
    };
    d.levels[0].insert(Vec::new(), PolyMatrix::poly_identity(r, big));
    let mut systems: HashMap<(usize, u32), KoszulSystem> = HashMap::new();
    for j in 0..n {
        // δ_Δ(D_{j+1}) = −δ_w(D_{j−1}) − (−1)^j δ̃(D_j)
        let wedged = d.wedge_w(j);
        let mut rhs = Level::new();
        for s in subsets_of_size(n, j) {
            let mut v = d.tilde(&d.component(&s), j);
            if j % 2 == 0 {
                v = v.neg();
            }
            if let Some(m) = wedged.get(&s) {
                v = v.sub(m);
            }
            rhs.insert(s, v);
        }
        let mut next: Level = subsets_of_size(n, j + 1)
            .into_iter()
            .map(|t| (t, d.zero()))
            .collect();
        for a in 0..r {
            for b in 0..r {
                let mut groups: BTreeMap<(Vec<u32>, u32), Vec<(Vec<usize>, Vec<u32>, Scalar)>> =
                    BTreeMap::new();
                for (s, m) in &rhs {
                    for (key, terms) in split_xt(m.get(a, b), n) {
                        groups
                            .entry(key)
                            .or_default()
                            .extend(terms.into_iter().map(|(tx, c)| (s.clone(), tx, c)));
                    }
                }
                for ((xe, deg), terms) in groups {
                    if deg == 0 {
                        return Err(OracleError::NotExact(j));
                    }
                    let sys = systems
                        .entry((j, deg))
                        .or_insert_with(|| KoszulSystem::new(n, j, deg));
                    let mut bvec = vec![Scalar::zero(); sys.rows.len()];
                    for (s, tx, c) in terms {
                        bvec[sys.rows[&(s, tx)]] = c;
                    }
                    let sol = sys.echelon.solve(&bvec).ok_or(OracleError::NotExact(j))?;
                    for (k, c) in sol.into_iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let (t, mu) = &sys.cols[k];
                        let exps: Vec<u32> = xe.iter().copied().chain(mu.iter().copied()).collect();
                        let entry = next.get_mut(t).expect("subset present");
                        let v = entry
                            .get(a, b)
                            .add(&Polynomial::term(Monomial::from_exponents(exps), c));
                        entry.set(a, b, v);
                    }
                }
            }
        }
        d.levels[j + 1] = next;
    }
    if !d.residual_vanishes() {
        return Err(OracleError::NotExact(n));
    }
    Ok(d)
}

/// π(str(D_n|_{y=x} ∘ α)).
pub fn oracle_tau(
    e: &MatFac,
    alpha: &Morphism,
    a: &MilnorRing,
) -> Result<MilnorClass, OracleError> {
    let d = solve_d(e)?;
    oracle_tau_with(&d, e, alpha, a)
}

pub fn oracle_tau_with(
    d: &DTensor,
    e: &MatFac,
    alpha: &Morphism,
    a: &MilnorRing,
) -> Result<MilnorClass, OracleError> {
    if e.potential() != a.potential() {
        return Err(OracleError::PotentialMismatch);
    }
    if alpha.source_ranks() != e.ranks()
        || alpha.target_ranks() != e.ranks()
        || !is_closed(e, e, alpha)
    {
        return Err(OracleError::NotClosed);
    }
    let m = d.top_on_diagonal().mul(alpha.matrix());
    let value = a.normal_form(&supertrace(&m, d.r0)?);
    Ok(MilnorClass {
        value,
        parity: (a.parity() + alpha.parity) % 2,
    })
}

/// ch(Δ^st) computed directly, and (−1)^{C(n,2)}·det(Δ_j ∂_i w), both in A_{w̃}.
#[derive(Clone, Debug)]
pub struct DiagonalChern {
    pub direct: Polynomial,
    pub determinant: Polynomial,
    pub equal: bool,
}

pub fn chern_of_diagonal(ring: &PolyRing, w: &Polynomial) -> Result<DiagonalChern, OracleError> {
    let n = ring.nvars();
    let data = build_diagonal(ring, w)?;
    let wt = data.diagonal.potential().clone();
    let a = MilnorRing::new(&data.ring, &wt)?;
    let direct = chern(&data.diagonal, &a)?.value;
    let det = difference_jacobian(w).det();
    let det = if orientation_sign(n) < 0 {
        det.neg()
    } else {
        det
    };
    let determinant = a.normal_form(&det);
    Ok(DiagonalChern {
        equal: direct == determinant,
        direct,
        determinant,
    })
}

/// The matrix (Δ_j ∂_i w)_{ij} over the doubled ring.
fn difference_jacobian(w: &Polynomial) -> PolyMatrix {
    let n = w.nvars();
    let rows: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| w.partial_derivative(i).difference_derivative(j))
                .collect()
        })
        .collect();
    PolyMatrix::from_rows(rows, Polynomial::zero(2 * n))
}

/// Coefficients C of det(Δ_j ∂_i w) = Σ C_{αβ} b_α(x) b_β(y) in A_w ⊗ A_w, and the Gram matrix G.
#[derive(Clone, Debug)]
pub struct InverseForm {
    pub coefficients: ScalarMatrix,
    pub gram: ScalarMatrix,
}

impl InverseForm {
    pub fn holds(&self) -> bool {
        self.coefficients.mul(&self.gram) == ScalarMatrix::scalar_identity(self.gram.rows())
    }
}

pub fn inverse_form(a: &MilnorRing) -> Result<InverseForm, OracleError> {
    let w = a.potential();
    let n = w.nvars();
    let mut gens: Vec<Polynomial> = a.jacobian().iter().map(in_x).collect();
    gens.extend(a.jacobian().iter().map(in_y));
    let gb = GroebnerBasis::new(&gens, 2 * n);
    let reduced = gb.normal_form(&difference_jacobian(w).det());
    let basis = a.basis();
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mu = basis.len();
    let mut coefficients = ScalarMatrix::scalar_zeros(mu, mu);
    for (m, c) in reduced.terms() {
        let e = m.exponents();
        let bx = Monomial::from_exponents(e[..n].iter().copied());
        let by = Monomial::from_exponents(e[n..].iter().copied());
        match (index.get(&bx), index.get(&by)) {
            (Some(&i), Some(&j)) => coefficients.set(i, j, c.clone()),
            _ => return Err(OracleError::InverseFormMismatch),
        }
    }
    Ok(InverseForm {
        coefficients,
        gram: a.gram_matrix(),
    })
}

/// C·G = I.
pub fn inverse_form_check(a: &MilnorRing) -> Result<(), OracleError> {
    if inverse_form(a)?.holds() {
        Ok(())
    } else {
        Err(OracleError::InverseFormMismatch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::tau;
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

    fn single(r: &PolyRing, s: &str) -> PolyMatrix {
        PolyMatrix::from_rows(vec![vec![p(r, s)]], r.zero())
    }

    #[test]
    fn diagonal_examples() {
        let r = PolyRing::rational(&["x"]);
        let d = build_diagonal(&r, &p(&r, "x^2")).unwrap();
        assert_eq!(d.differences[0], p(&d.ring, "x' + x"));
        assert_eq!(d.diagonal.d0().get(0, 0), &p(&d.ring, "x' + x"));
        assert_eq!(d.diagonal.d1().get(0, 0), &p(&d.ring, "x' - x"));
        let r2 = PolyRing::rational(&["a", "b"]);
        let d = build_diagonal(&r2, &p(&r2, "a*b")).unwrap();
        assert_eq!(d.differences[0], p(&d.ring, "b'"));
        assert_eq!(d.differences[1], p(&d.ring, "a"));
        let d = build_diagonal(&r2, &p(&r2, "a^3 + a*b^2")).unwrap();
        let diag: Vec<Polynomial> = (0..2)
            .map(|i| Polynomial::var(2, i))
            .chain((0..2).map(|i| Polynomial::var(2, i)))
            .collect();
        for j in 0..2 {
            assert_eq!(
                d.differences[j].substitute(&diag, 2),
                p(&r2, "a^3 + a*b^2").partial_derivative(j)
            );
        }
    }

    #[test]
    fn first_level_for_x_squared() {
        let r = PolyRing::rational(&["x"]);
        let e = kz(&r, &["x"], &["x"]);
        let d = solve_d(&e).unwrap();
        assert_eq!(d.top_on_diagonal(), e.partial_delta(0));
        assert!(d.is_normalized());
        assert!(d.recursion_holds(&e));
        assert_eq!(
            d.component(&[]).restrict(&[0]),
            PolyMatrix::poly_identity(2, 1)
        );
    }

    #[test]
    fn oracle_matches_examples() {
        let r = PolyRing::rational(&["x", "y"]);
        let w = p(&r, "x^3 + x*y^2");
        let a = MilnorRing::new(&r, &w).unwrap();
        let e = kz(&r, &["x"], &["x^2 + y^2"]);
        assert_eq!(
            oracle_tau(&e, &e.identity(), &a).unwrap(),
            tau(&e, &e.identity(), &a).unwrap()
        );
        assert_eq!(
            oracle_tau(&e, &e.identity(), &a).unwrap().value,
            p(&r, "2*y")
        );
        let triv = kz(&r, &["1"], &["x^3 + x*y^2"]);
        assert!(oracle_tau(&triv, &triv.identity(), &a)
            .unwrap()
            .value
            .is_zero());
        let r1 = PolyRing::rational(&["x"]);
        for n in [2u32, 4, 6] {
            let a = MilnorRing::new(&r1, &p(&r1, &format!("x^{n}"))).unwrap();
            for i in n / 2..n {
                let e = kz(&r1, &[&format!("x^{i}")], &[&format!("x^{}", n - i)]);
                let alpha = Morphism::from_blocks(
                    &e,
                    &e,
                    1,
                    single(&r1, &format!("x^{}", 2 * i - n)),
                    single(&r1, "-1"),
                )
                .unwrap();
                let expected = a.normal_form(&p(&r1, &format!("{n}*x^{}", i - 1)));
                assert_eq!(oracle_tau(&e, &alpha, &a).unwrap().value, expected);
            }
        }
    }

    #[test]
    fn oracle_on_stabilized_residue_fields() {
        for (vars, w) in [
            (vec!["x", "y"], "x^3 + x*y^2"),
            (vec!["x", "y", "z"], "x^3 + y^3 + z^2"),
            (vec!["x", "y"], "x^2*y + y^4"),
        ] {
            let r = PolyRing::rational(&vars);
            let w = p(&r, w);
            let a = MilnorRing::new(&r, &w).unwrap();
            let c = clifford_generators(&r, &w).unwrap();
            let d = solve_d(&c.kst).unwrap();
            assert!(d.is_normalized());
            assert!(d.recursion_holds(&c.kst));
            let mut prod = c.kst.identity();
            for g in &c.generators {
                assert_eq!(
                    oracle_tau_with(&d, &c.kst, g, &a).unwrap(),
                    tau(&c.kst, g, &a).unwrap()
                );
                prod = prod.compose(g);
            }
            assert_eq!(
                oracle_tau_with(&d, &c.kst, &prod, &a).unwrap(),
                tau(&c.kst, &prod, &a).unwrap()
            );
        }
    }

    #[test]
    fn diagonal_chern_two_ways() {
        let r1 = PolyRing::rational(&["x"]);
        let c = chern_of_diagonal(&r1, &p(&r1, "x^2")).unwrap();
        assert!(c.equal);
        assert_eq!(c.direct, Polynomial::from_int(2, 2));
        assert!(chern_of_diagonal(&r1, &p(&r1, "x^3")).unwrap().equal);
        let r = PolyRing::rational(&["x", "y"]);
        assert!(chern_of_diagonal(&r, &p(&r, "x^3 + x*y^2")).unwrap().equal);
    }

    #[test]
    fn inverse_form_examples() {
        let r1 = PolyRing::rational(&["x"]);
        let a = MilnorRing::new(&r1, &p(&r1, "x^2")).unwrap();
        let f = inverse_form(&a).unwrap();
        assert_eq!(
            f.coefficients,
            ScalarMatrix::from_rows(vec![vec![Scalar::from_int(2)]], Scalar::zero())
        );
        assert_eq!(
            f.gram,
            ScalarMatrix::from_rows(vec![vec![Scalar::from_ratio(1, 2)]], Scalar::zero())
        );
        for n in 2..8 {
            assert!(
                inverse_form_check(&MilnorRing::new(&r1, &p(&r1, &format!("x^{n}"))).unwrap())
                    .is_ok()
            );
        }
        let r = PolyRing::rational(&["x", "y"]);
        for w in ["x^3 + x*y^2", "x^3 + y^4", "x^2*y + y^5"] {
            assert!(
                inverse_form_check(&MilnorRing::new(&r, &p(&r, w)).unwrap()).is_ok(),
                "{w}"
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        #[test]
        fn random_koszul_oracle(cs in proptest::collection::vec(-3i64..4, 4)) {
            let r = PolyRing::rational(&["x", "y"]);
            let w = p(&r, "x^3 + y^3");
            let a = MilnorRing::new(&r, &w).unwrap();
            let s = |k: usize, base: &str| format!("{} + ({})*{}", base, cs[k], if k.is_multiple_of(2) { "y" } else { "x" });
            let a1 = p(&r, &s(0, "x"));
            let a2 = p(&r, &s(1, "y"));
            let rest = w.sub(&a1.mul(&p(&r, "x^2")));
            let rest = rest.exact_div(&a2);
            prop_assume!(rest.is_some());
            let e = MatFac::koszul(&r, &[a1, a2], &[p(&r, "x^2"), rest.unwrap()]);
            prop_assume!(e.is_ok());
            let e = e.unwrap();
            let d = solve_d(&e).unwrap();
            prop_assert!(d.is_normalized());
            prop_assert!(d.recursion_holds(&e));
            prop_assert_eq!(d.top_on_diagonal(), e.partial_delta(1).mul(&e.partial_delta(0)));
            prop_assert_eq!(oracle_tau_with(&d, &e, &e.identity(), &a).unwrap(), tau(&e, &e.identity(), &a).unwrap());
        }
    }
}
