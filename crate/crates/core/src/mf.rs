//! Matrix factorizations: construction, validation, tensor/dual/shift, the
//! Hom complex, and the stabilized residue field with its Clifford generators.
//!
//! A factorization of rank (r0, r1) is stored by its two blocks
//! `d0: E⁰ → E¹` (r1×r0) and `d1: E¹ → E⁰` (r0×r1). The full odd operator
//! `δ = [[0, d1], [d0, 0]]` acts on E⁰ ⊕ E¹ with the even basis first.

use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, PolyRing, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MfError {
    #[error("not a factorization: entry ({row}, {col}) of d{block}·d{other} differs from w·id", other = 1 - block)]
    NotFactorization { block: u8, row: usize, col: usize },
    #[error("block shapes are inconsistent")]
    ShapeMismatch,
    #[error("sequences have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("potentials differ")]
    PotentialMismatch,
    #[error("factorizations live over different rings")]
    RingMismatch,
    #[error("decomposition does not sum to the potential")]
    InvalidDecomposition,
    #[error("potential has a linear part")]
    LinearPart,
    #[error("map is not homogeneous of parity {0}")]
    NotHomogeneous(u8),
    #[error("morphism is not closed")]
    NotClosed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatFac {
    ring: PolyRing,
    w: Polynomial,
    d0: PolyMatrix,
    d1: PolyMatrix,
}

impl MatFac {
    pub fn new(
        ring: &PolyRing,
        w: &Polynomial,
        d0: PolyMatrix,
        d1: PolyMatrix,
    ) -> Result<Self, MfError> {
        let e = MatFac {
            ring: ring.clone(),
            w: w.clone(),
            d0,
            d1,
        };
        e.validate()?;
        Ok(e)
    }

    /// Exterior-algebra factorization δ = Σ a_j e_j∧ + Σ b_j ι(e_j*) of Σ a_j b_j.
    pub fn koszul(ring: &PolyRing, a: &[Polynomial], b: &[Polynomial]) -> Result<Self, MfError> {
        if a.len() != b.len() {
            return Err(MfError::LengthMismatch(a.len(), b.len()));
        }
        let n = ring.nvars();
        let w = a
            .iter()
            .zip(b)
            .fold(Polynomial::zero(n), |acc, (x, y)| acc.add(&x.mul(y)));
        let ext = Exterior::new(a.len());
        let mut delta = PolyMatrix::poly_zeros(ext.dim(), ext.dim(), n);
        for j in 0..a.len() {
            delta = delta.add(&ext.wedge(j, &a[j])).add(&ext.contract(j, &b[j]));
        }
        let r0 = ext.even();
        let d0 = delta.submatrix(r0..ext.dim(), 0..r0);
        let d1 = delta.submatrix(0..r0, r0..ext.dim());
        Self::new(ring, &w, d0, d1)
    }

    /// {a, b}: the rank (1, 1) factorization of a·b.
    pub fn rank_one(ring: &PolyRing, a: &Polynomial, b: &Polynomial) -> Result<Self, MfError> {
        Self::koszul(ring, std::slice::from_ref(a), std::slice::from_ref(b))
    }

    pub fn validate(&self) -> Result<(), MfError> {
        let n = self.ring.nvars();
        let (r0, r1) = (self.d1.rows(), self.d0.rows());
        if self.d0.cols() != r0
            || self.d1.cols() != r1
            || self.w.nvars() != n
            || self.d0.nvars() != n
        {
            return Err(MfError::ShapeMismatch);
        }
        for (block, prod, r) in [
            (1u8, self.d1.mul(&self.d0), r0),
            (0u8, self.d0.mul(&self.d1), r1),
        ] {
            for i in 0..r {
                for j in 0..r {
                    let expect = if i == j {
                        self.w.clone()
                    } else {
                        Polynomial::zero(n)
                    };
                    if *prod.get(i, j) != expect {
                        return Err(MfError::NotFactorization {
                            block,
                            row: i,
                            col: j,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn potential(&self) -> &Polynomial {
        &self.w
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn r0(&self) -> usize {
        self.d1.rows()
    }

    pub fn r1(&self) -> usize {
        self.d0.rows()
    }

    pub fn rank(&self) -> usize {
        self.r0() + self.r1()
    }

    pub fn ranks(&self) -> (usize, usize) {
        (self.r0(), self.r1())
    }

    pub fn d0(&self) -> &PolyMatrix {
        &self.d0
    }

    pub fn d1(&self) -> &PolyMatrix {
        &self.d1
    }

    /// The full odd operator on E⁰ ⊕ E¹.
    pub fn delta(&self) -> PolyMatrix {
        let n = self.nvars();
        let (r0, r1) = self.ranks();
        PolyMatrix::from_blocks(
            &PolyMatrix::poly_zeros(r0, r0, n),
            &self.d1,
            &self.d0,
            &PolyMatrix::poly_zeros(r1, r1, n),
        )
    }

    /// ∂δ/∂x_i.
    pub fn partial_delta(&self, i: usize) -> PolyMatrix {
        self.delta().partial_derivative(i)
    }

    /// Parity of the basis vector at `index` of E⁰ ⊕ E¹.
    pub fn parity_of(&self, index: usize) -> u8 {
        u8::from(index >= self.r0())
    }

    pub fn identity(&self) -> Morphism {
        Morphism {
            parity: 0,
            matrix: PolyMatrix::poly_identity(self.rank(), self.nvars()),
            src: self.ranks(),
            tgt: self.ranks(),
        }
    }

    fn same_ring(&self, other: &MatFac) -> Result<(), MfError> {
        if self.ring != other.ring {
            return Err(MfError::RingMismatch);
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &MatFac) -> Result<MatFac, MfError> {
        self.same_ring(other)?;
        if self.w != other.w {
            return Err(MfError::PotentialMismatch);
        }
        let n = self.nvars();
        let diag = |a: &PolyMatrix, b: &PolyMatrix| {
            PolyMatrix::from_blocks(
                a,
                &PolyMatrix::poly_zeros(a.rows(), b.cols(), n),
                &PolyMatrix::poly_zeros(b.rows(), a.cols(), n),
                b,
            )
        };
        MatFac::new(
            &self.ring,
            &self.w,
            diag(&self.d0, &other.d0),
            diag(&self.d1, &other.d1),
        )
    }

    /// E⊗F with δ = δ_E⊗1 + J_E⊗δ_F, a factorization of w_E + w_F. Basis
    /// vectors e_a⊗f_b are kept in (a, b) order within each parity.
    pub fn tensor(&self, other: &MatFac) -> Result<MatFac, MfError> {
        self.same_ring(other)?;
        let n = self.nvars();
        let (re, rf) = (self.rank(), other.rank());
        let j = PolyMatrix::diagonal(
            (0..re)
                .map(|a| Polynomial::from_int(n, if self.parity_of(a) == 0 { 1 } else { -1 }))
                .collect(),
            Polynomial::zero(n),
        );
        let full = self
            .delta()
            .kron(&PolyMatrix::poly_identity(rf, n))
            .add(&j.kron(&other.delta()));
        let par = |k: usize| (self.parity_of(k / rf) + other.parity_of(k % rf)) % 2;
        let even: Vec<usize> = (0..re * rf).filter(|&k| par(k) == 0).collect();
        let odd: Vec<usize> = (0..re * rf).filter(|&k| par(k) == 1).collect();
        let w = self.w.add(&other.w);
        MatFac::new(
            &self.ring,
            &w,
            full.select(&odd, &even),
            full.select(&even, &odd),
        )
    }

    /// E* with (E*)⁰ = (E⁰)*, (E*)¹ = (E¹)*, a factorization of −w.
    pub fn dual(&self) -> MatFac {
        MatFac {
            ring: self.ring.clone(),
            w: self.w.neg(),
            d0: self.d1.transpose(),
            d1: self.d0.transpose().neg(),
        }
    }

    /// E[1] = (E with parities swapped, −δ).
    pub fn shift(&self) -> MatFac {
        MatFac {
            ring: self.ring.clone(),
            w: self.w.clone(),
            d0: self.d1.neg(),
            d1: self.d0.neg(),
        }
    }

    /// (E, −δ).
    pub fn negate(&self) -> MatFac {
        MatFac {
            ring: self.ring.clone(),
            w: self.w.clone(),
            d0: self.d0.neg(),
            d1: self.d1.neg(),
        }
    }

    /// Change of basis by parity-preserving invertible maps `p0` on E⁰ and
    /// `p1` on E¹: δ ↦ P δ P⁻¹.
    pub fn conjugate(
        &self,
        p0: (&PolyMatrix, &PolyMatrix),
        p1: (&PolyMatrix, &PolyMatrix),
    ) -> Result<MatFac, MfError> {
        let n = self.nvars();
        if p0.0.mul(p0.1) != PolyMatrix::poly_identity(self.r0(), n)
            || p1.0.mul(p1.1) != PolyMatrix::poly_identity(self.r1(), n)
        {
            return Err(MfError::ShapeMismatch);
        }
        MatFac::new(
            &self.ring,
            &self.w,
            p1.0.mul(&self.d0).mul(p0.1),
            p0.0.mul(&self.d1).mul(p1.1),
        )
    }

    /// Substitutes polynomials (in `target`) for the variables.
    pub fn substitute(&self, target: &PolyRing, values: &[Polynomial]) -> Result<MatFac, MfError> {
        let m = target.nvars();
        MatFac::new(
            target,
            &self.w.substitute(values, m),
            self.d0.substitute(values, m),
            self.d1.substitute(values, m),
        )
    }
}

/// A parity-homogeneous R-linear map E → F, stored as a full matrix on the
/// (even-first) bases; only the blocks of its parity may be nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    pub parity: u8,
    matrix: PolyMatrix,
    src: (usize, usize),
    tgt: (usize, usize),
}

impl Morphism {
    /// From the two nonzero blocks: (E⁰→F⁰, E¹→F¹) when even,
    /// (E⁰→F¹, E¹→F⁰) when odd.
    pub fn from_blocks(
        src: &MatFac,
        tgt: &MatFac,
        parity: u8,
        b0: PolyMatrix,
        b1: PolyMatrix,
    ) -> Result<Self, MfError> {
        Self::from_block_ranks(src.ranks(), tgt.ranks(), src.nvars(), parity, b0, b1)
    }

    pub fn from_block_ranks(
        src: (usize, usize),
        tgt: (usize, usize),
        nvars: usize,
        parity: u8,
        b0: PolyMatrix,
        b1: PolyMatrix,
    ) -> Result<Self, MfError> {
        let ((s0, s1), (t0, t1)) = (src, tgt);
        let z = |r, c| PolyMatrix::poly_zeros(r, c, nvars);
        let matrix = match parity {
            0 => {
                if (b0.rows(), b0.cols(), b1.rows(), b1.cols()) != (t0, s0, t1, s1) {
                    return Err(MfError::ShapeMismatch);
                }
                PolyMatrix::from_blocks(&b0, &z(t0, s1), &z(t1, s0), &b1)
            }
            1 => {
                if (b0.rows(), b0.cols(), b1.rows(), b1.cols()) != (t1, s0, t0, s1) {
                    return Err(MfError::ShapeMismatch);
                }
                PolyMatrix::from_blocks(&z(t0, s0), &b1, &b0, &z(t1, s1))
            }
            _ => return Err(MfError::NotHomogeneous(parity)),
        };
        Ok(Morphism {
            parity,
            matrix,
            src,
            tgt,
        })
    }

    pub fn from_matrix(
        src: &MatFac,
        tgt: &MatFac,
        parity: u8,
        matrix: PolyMatrix,
    ) -> Result<Self, MfError> {
        Self::from_matrix_ranks(src.ranks(), tgt.ranks(), parity, matrix)
    }

    pub fn from_matrix_ranks(
        src: (usize, usize),
        tgt: (usize, usize),
        parity: u8,
        matrix: PolyMatrix,
    ) -> Result<Self, MfError> {
        if matrix.rows() != tgt.0 + tgt.1 || matrix.cols() != src.0 + src.1 || parity > 1 {
            return Err(MfError::ShapeMismatch);
        }
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                let p = u8::from(i >= tgt.0) ^ u8::from(j >= src.0);
                if p != parity && !matrix.get(i, j).is_zero() {
                    return Err(MfError::NotHomogeneous(parity));
                }
            }
        }
        Ok(Morphism {
            parity,
            matrix,
            src,
            tgt,
        })
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn source_ranks(&self) -> (usize, usize) {
        self.src
    }

    pub fn target_ranks(&self) -> (usize, usize) {
        self.tgt
    }

    /// The two nonzero blocks, in the order accepted by [`Morphism::from_blocks`].
    pub fn blocks(&self) -> (PolyMatrix, PolyMatrix) {
        let ((s0, s1), (t0, t1)) = (self.src, self.tgt);
        let (rs, cs) = (s0 + s1, t0 + t1);
        if self.parity == 0 {
            (
                self.matrix.submatrix(0..t0, 0..s0),
                self.matrix.submatrix(t0..cs, s0..rs),
            )
        } else {
            (
                self.matrix.submatrix(t0..cs, 0..s0),
                self.matrix.submatrix(0..t0, s0..rs),
            )
        }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        assert_eq!(other.tgt, self.src, "composition of incompatible maps");
        Morphism {
            parity: (self.parity + other.parity) % 2,
            matrix: self.matrix.mul(&other.matrix),
            src: other.src,
            tgt: self.tgt,
        }
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        assert!(self.parity == other.parity && self.src == other.src && self.tgt == other.tgt);
        Morphism {
            matrix: self.matrix.add(&other.matrix),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Morphism) -> Morphism {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Morphism {
        Morphism {
            matrix: self.matrix.neg(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &Polynomial) -> Morphism {
        Morphism {
            matrix: self.matrix.scale(c),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// d f = δ_F∘f − (−1)^{|f|} f∘δ_E.
pub fn differential(e: &MatFac, f: &MatFac, m: &Morphism) -> Morphism {
    let a = f.delta().mul(&m.matrix);
    let b = m.matrix.mul(&e.delta());
    let matrix = if m.parity == 0 { a.sub(&b) } else { a.add(&b) };
    Morphism {
        parity: 1 - m.parity,
        matrix,
        src: e.ranks(),
        tgt: f.ranks(),
    }
}

pub fn is_closed(e: &MatFac, f: &MatFac, m: &Morphism) -> bool {
    differential(e, f, m).is_zero()
}

/// The Hom complex Hom(E, F) as two polynomial matrices
/// `d[p]: Hom^p → Hom^{1−p}` on flattened coordinates.
///
/// Hom⁰ is flattened as the row-major entries of the block E⁰→F⁰ followed by
/// E¹→F¹; Hom¹ as E⁰→F¹ followed by E¹→F⁰.
#[derive(Clone, Debug)]
pub struct HomComplex {
    src: (usize, usize),
    tgt: (usize, usize),
    nvars: usize,
    d: [PolyMatrix; 2],
}

impl HomComplex {
    pub fn new(e: &MatFac, f: &MatFac) -> Result<Self, MfError> {
        e.same_ring(f)?;
        if e.w != f.w {
            return Err(MfError::PotentialMismatch);
        }
        let mut hc = HomComplex {
            src: e.ranks(),
            tgt: f.ranks(),
            nvars: e.nvars(),
            d: [
                PolyMatrix::poly_zeros(0, 0, e.nvars()),
                PolyMatrix::poly_zeros(0, 0, e.nvars()),
            ],
        };
        for p in 0..2u8 {
            let cols: Vec<Vec<Polynomial>> = (0..hc.dim(p))
                .map(|k| {
                    let mut unit = vec![Polynomial::zero(hc.nvars); hc.dim(p)];
                    unit[k] = Polynomial::one(hc.nvars);
                    hc.flatten(&differential(e, f, &hc.unflatten(p, &unit)))
                })
                .collect();
            hc.d[p as usize] = PolyMatrix::from_fn(
                hc.dim(1 - p),
                hc.dim(p),
                Polynomial::zero(hc.nvars),
                |i, j| cols[j][i].clone(),
            );
        }
        Ok(hc)
    }

    fn block_shapes(&self, p: u8) -> [(usize, usize); 2] {
        let ((s0, s1), (t0, t1)) = (self.src, self.tgt);
        if p == 0 {
            [(t0, s0), (t1, s1)]
        } else {
            [(t1, s0), (t0, s1)]
        }
    }

    pub fn dim(&self, p: u8) -> usize {
        self.block_shapes(p).iter().map(|(r, c)| r * c).sum()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// d restricted to Hom^p.
    pub fn differential_matrix(&self, p: u8) -> &PolyMatrix {
        &self.d[p as usize]
    }

    pub fn flatten(&self, m: &Morphism) -> Vec<Polynomial> {
        assert_eq!(
            (m.src, m.tgt),
            (self.src, self.tgt),
            "morphism has the wrong shape"
        );
        let (b0, b1) = m.blocks();
        b0.entries().iter().chain(b1.entries()).cloned().collect()
    }

    pub fn unflatten(&self, p: u8, v: &[Polynomial]) -> Morphism {
        assert_eq!(v.len(), self.dim(p));
        let [(r0, c0), (r1, c1)] = self.block_shapes(p);
        let z = Polynomial::zero(self.nvars);
        let b0 = PolyMatrix::from_fn(r0, c0, z.clone(), |i, j| v[i * c0 + j].clone());
        let off = r0 * c0;
        let b1 = PolyMatrix::from_fn(r1, c1, z, |i, j| v[off + i * c1 + j].clone());
        Morphism::from_block_ranks(self.src, self.tgt, self.nvars, p, b0, b1)
            .expect("shapes match by construction")
    }
}

/// Subsets of {0..m} ordered by (size, lexicographic), split into even then odd sizes.
#[derive(Clone, Debug)]
pub struct Exterior {
    subsets: Vec<Vec<usize>>,
    even: usize,
}

impl Exterior {
    pub fn new(m: usize) -> Self {
        let mut all: Vec<Vec<usize>> = (0u32..1 << m)
            .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect())
            .collect();
        all.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let (mut ev, od): (Vec<_>, Vec<_>) = all.into_iter().partition(|s| s.len() % 2 == 0);
        let even = ev.len();
        ev.extend(od);
        Exterior { subsets: ev, even }
    }

    pub fn dim(&self) -> usize {
        self.subsets.len()
    }

    pub fn even(&self) -> usize {
        self.even
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    fn index(&self, s: &[usize]) -> usize {
        self.subsets
            .iter()
            .position(|t| t == s)
            .expect("subset in basis")
    }

    fn sign(s: &[usize], j: usize) -> i64 {
        if s.iter().filter(|&&i| i < j).count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// c·e_j∧.
    pub fn wedge(&self, j: usize, c: &Polynomial) -> PolyMatrix {
        let n = c.nvars();
        let mut m = PolyMatrix::poly_zeros(self.dim(), self.dim(), n);
        if c.is_zero() {
            return m;
        }
        for (col, s) in self.subsets.iter().enumerate() {
            if s.contains(&j) {
                continue;
            }
            let mut t = s.clone();
            t.push(j);
            t.sort_unstable();
            m.set(
                self.index(&t),
                col,
                c.scale(&Scalar::from_int(Self::sign(s, j))),
            );
        }
        m
    }

    /// c·ι(e_j*).
    pub fn contract(&self, j: usize, c: &Polynomial) -> PolyMatrix {
        let n = c.nvars();
        let mut m = PolyMatrix::poly_zeros(self.dim(), self.dim(), n);
        if c.is_zero() {
            return m;
        }
        for (col, s) in self.subsets.iter().enumerate() {
            if !s.contains(&j) {
                continue;
            }
            let t: Vec<usize> = s.iter().copied().filter(|&i| i != j).collect();
            m.set(
                self.index(&t),
                col,
                c.scale(&Scalar::from_int(Self::sign(s, j))),
            );
        }
        m
    }
}

/// Writes `f` as Σ x_i·g_i by assigning each monomial to its smallest-index variable.
pub fn greedy_decomposition(f: &Polynomial) -> Result<Vec<Polynomial>, MfError> {
    let n = f.nvars();
    let mut parts: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); n];
    for (m, c) in f.terms() {
        let i = m
            .exponents()
            .iter()
            .position(|&e| e > 0)
            .ok_or(MfError::InvalidDecomposition)?;
        parts[i].push((Monomial::var(n, i, 1).quotient_of(m), c.clone()));
    }
    Ok(parts
        .into_iter()
        .map(|p| Polynomial::from_terms(n, p))
        .collect())
}

/// k^st = koszul((w_1…w_n), (x_1…x_n)) with Σ x_i w_i = w.
pub fn stabilized_residue_field(
    ring: &PolyRing,
    w: &Polynomial,
    decomposition: Option<&[Polynomial]>,
) -> Result<MatFac, MfError> {
    let n = ring.nvars();
    let wi = match decomposition {
        Some(d) => {
            if d.len() != n {
                return Err(MfError::LengthMismatch(d.len(), n));
            }
            d.to_vec()
        }
        None => greedy_decomposition(w)?,
    };
    let xs: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
    let e = MatFac::koszul(ring, &wi, &xs)?;
    if e.potential() != w {
        return Err(MfError::InvalidDecomposition);
    }
    Ok(e)
}

/// The stabilized residue field together with its odd generators
/// α_j = −(Σ_i e_i w_ij)∧ + ι(e_j*), where w_j = Σ_i x_i w_ij.
#[derive(Clone, Debug)]
pub struct CliffordData {
    pub kst: MatFac,
    pub wi: Vec<Polynomial>,
    /// wij[i][j] = w_ij.
    pub wij: Vec<Vec<Polynomial>>,
    pub generators: Vec<Morphism>,
}

pub fn clifford_generators(ring: &PolyRing, w: &Polynomial) -> Result<CliffordData, MfError> {
    let n = ring.nvars();
    if w.terms().iter().any(|(m, _)| m.degree() < 2) {
        return Err(MfError::LinearPart);
    }
    let wi = greedy_decomposition(w)?;
    let kst = stabilized_residue_field(ring, w, Some(&wi))?;
    let cols: Vec<Vec<Polynomial>> = wi
        .iter()
        .map(greedy_decomposition)
        .collect::<Result<_, _>>()?;
    let wij: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect();
    let ext = Exterior::new(n);
    let one = Polynomial::one(n);
    let generators = (0..n)
        .map(|j| {
            let mut m = ext.contract(j, &one);
            for (i, row) in wij.iter().enumerate() {
                m = m.sub(&ext.wedge(i, &row[j]));
            }
            Morphism::from_matrix(&kst, &kst, 1, m).expect("odd by construction")
        })
        .collect();
    Ok(CliffordData {
        kst,
        wi,
        wij,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r1() -> PolyRing {
        PolyRing::rational(&["x"])
    }

    fn r2() -> PolyRing {
        PolyRing::rational(&["x", "y"])
    }

    fn p(r: &PolyRing, s: &str) -> Polynomial {
        r.parse(s).unwrap()
    }

    fn kz(r: &PolyRing, a: &[&str], b: &[&str]) -> MatFac {
        let a: Vec<_> = a.iter().map(|s| p(r, s)).collect();
        let b: Vec<_> = b.iter().map(|s| p(r, s)).collect();
        MatFac::koszul(r, &a, &b).unwrap()
    }

    #[test]
    fn validate_examples() {
        let r = r1();
        for i in 1..5 {
            kz(&r, &[&format!("x^{i}")], &[&format!("x^{}", 5 - i)]);
        }
        let r = r2();
        let e = MatFac::new(
            &r,
            &p(&r, "x*y"),
            PolyMatrix::from_rows(vec![vec![r.var(0)]], r.zero()),
            PolyMatrix::from_rows(vec![vec![r.var(1)]], r.zero()),
        );
        assert!(e.is_ok());
        let r = r1();
        let bad = MatFac::new(
            &r,
            &p(&r, "x^3"),
            PolyMatrix::from_rows(vec![vec![r.var(0)]], r.zero()),
            PolyMatrix::from_rows(vec![vec![r.var(0)]], r.zero()),
        );
        assert_eq!(
            bad.unwrap_err(),
            MfError::NotFactorization {
                block: 1,
                row: 0,
                col: 0
            }
        );
    }

    #[test]
    fn koszul_examples() {
        let r = r1();
        let e = kz(&r, &["x"], &["x^2"]);
        assert_eq!(e.ranks(), (1, 1));
        assert_eq!(e.d0().get(0, 0), &p(&r, "x"));
        assert_eq!(e.d1().get(0, 0), &p(&r, "x^2"));
        assert_eq!(e.potential(), &p(&r, "x^3"));
        let r = r2();
        assert_eq!(
            kz(&r, &["x"], &["x^2 + y^2"]).potential(),
            &p(&r, "x^3 + x*y^2")
        );
        let e = kz(&r, &["x", "y"], &["y", "x"]);
        assert_eq!(e.ranks(), (2, 2));
        assert_eq!(e.potential(), &p(&r, "2*x*y"));
        assert_eq!(
            MatFac::koszul(&r, &[r.var(0)], &[]).unwrap_err(),
            MfError::LengthMismatch(1, 0)
        );
    }

    #[test]
    fn exterior_sign_identities() {
        let ext = Exterior::new(3);
        let r = PolyRing::rational(&[]);
        let one = r.one();
        let id = PolyMatrix::poly_identity(ext.dim(), 0);
        for i in 0..3 {
            for j in 0..3 {
                let (wi, cj) = (ext.wedge(i, &one), ext.contract(j, &one));
                let ac = wi.mul(&cj).add(&cj.mul(&wi));
                if i == j {
                    assert_eq!(ac, id);
                } else {
                    assert!(ac.is_zero());
                }
                let ww = wi
                    .mul(&ext.wedge(j, &one))
                    .add(&ext.wedge(j, &one).mul(&wi));
                assert!(ww.is_zero());
            }
        }
    }

    #[test]
    fn dual_and_shift() {
        let r = r2();
        let e = kz(&r, &["x"], &["x^2 + y^2"]);
        let d = e.dual();
        d.validate().unwrap();
        assert_eq!(d.potential(), &p(&r, "-x^3 - x*y^2"));
        assert_eq!(d.d0().get(0, 0), &p(&r, "x^2 + y^2"));
        assert_eq!(d.d1().get(0, 0), &p(&r, "-x"));
        assert_eq!(d.dual(), e.negate());
        assert_eq!(e.shift().shift(), e);
        let r = r1();
        let s = kz(&r, &["x"], &["x^3"]).shift();
        s.validate().unwrap();
        assert_eq!(s.d0().get(0, 0), &p(&r, "-x^3"));
    }

    #[test]
    fn tensor_is_factorization() {
        let r = r2();
        let e = kz(&r, &["x"], &["x^2"]);
        let f = kz(&r, &["y"], &["y^2"]);
        let t = e.tensor(&f).unwrap();
        assert_eq!(t.potential(), &p(&r, "x^3 + y^3"));
        assert_eq!(t.ranks(), (2, 2));
        let z = MatFac::new(
            &r,
            &r.zero(),
            PolyMatrix::poly_zeros(0, 1, 2),
            PolyMatrix::poly_zeros(1, 0, 2),
        )
        .unwrap();
        let t = e.tensor(&z).unwrap();
        assert_eq!(t.ranks(), e.ranks());
        t.validate().unwrap();
    }

    #[test]
    fn hom_differential_squares_to_zero() {
        let r = r2();
        let e = kz(&r, &["x", "y"], &["x^2", "y^2"]);
        let f = kz(&r, &["x^2", "y"], &["x", "y^2"]);
        let h = HomComplex::new(&e, &f).unwrap();
        assert_eq!(h.dim(0), 8);
        assert!(h
            .differential_matrix(1)
            .mul(h.differential_matrix(0))
            .is_zero());
        assert!(h
            .differential_matrix(0)
            .mul(h.differential_matrix(1))
            .is_zero());
        assert!(is_closed(&e, &e, &e.identity()));
        let g = kz(&r, &["x"], &["y"]);
        assert_eq!(
            HomComplex::new(&e, &g).unwrap_err(),
            MfError::PotentialMismatch
        );
    }

    #[test]
    fn flatten_roundtrip() {
        let r = r2();
        let e = kz(&r, &["x", "y"], &["x^2", "y^2"]);
        let f = kz(&r, &["x"], &["x^2 + y^2"])
            .direct_sum(&kz(&r, &["x"], &["x^2 + y^2"]))
            .unwrap();
        let f = MatFac::new(&r, e.potential(), f.d0().clone(), f.d1().clone());
        assert!(f.is_err());
        let h = HomComplex::new(&e, &e).unwrap();
        for par in 0..2u8 {
            let v: Vec<Polynomial> = (0..h.dim(par))
                .map(|k| Polynomial::from_int(2, k as i64 + 1))
                .collect();
            let m = h.unflatten(par, &v);
            assert_eq!(m.parity, par);
            assert_eq!(h.flatten(&m), v);
            let d = differential(&e, &e, &m);
            let col = h.differential_matrix(par).mul(&PolyMatrix::from_fn(
                v.len(),
                1,
                r.zero(),
                |i, _| v[i].clone(),
            ));
            assert_eq!(h.flatten(&d), col.column(0));
        }
    }

    #[test]
    fn stabilized_residue() {
        let r = r1();
        let k = stabilized_residue_field(&r, &p(&r, "x^3"), None).unwrap();
        assert_eq!(k.d0().get(0, 0), &p(&r, "x^2"));
        assert_eq!(k.d1().get(0, 0), &p(&r, "x"));
        let r = r2();
        let c = clifford_generators(&r, &p(&r, "x^3 + x*y^2")).unwrap();
        assert_eq!(c.wi, vec![p(&r, "x^2 + y^2"), r.zero()]);
        for a in &c.generators {
            assert!(is_closed(&c.kst, &c.kst, a));
        }
        let id = c.kst.identity();
        for i in 0..2 {
            for j in 0..2 {
                let ac = c.generators[i]
                    .compose(&c.generators[j])
                    .add(&c.generators[j].compose(&c.generators[i]));
                assert_eq!(ac, id.scale(&c.wij[i][j].add(&c.wij[j][i]).neg()));
            }
        }
        assert_eq!(
            clifford_generators(&r, &p(&r, "x + y^2")).unwrap_err(),
            MfError::LinearPart
        );
        assert_eq!(
            stabilized_residue_field(&r, &p(&r, "x^2"), Some(&[r.var(1), r.zero()])).unwrap_err(),
            MfError::InvalidDecomposition
        );
    }

    fn arb_poly() -> impl Strategy<Value = &'static str> {
        prop_oneof![
            Just("x"),
            Just("y"),
            Just("x^2"),
            Just("x*y"),
            Just("y^2 + x"),
            Just("x^3 - y"),
            Just("1"),
            Just("x + y")
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn constructors_validate(a in proptest::collection::vec(arb_poly(), 2), b in proptest::collection::vec(arb_poly(), 2)) {
            let r = r2();
            let e = kz(&r, &a, &b);
            e.validate().unwrap();
            e.dual().validate().unwrap();
            e.shift().validate().unwrap();
            e.direct_sum(&e).unwrap().validate().unwrap();
            let f = kz(&r, &[a[0]], &[b[1]]);
            e.tensor(&f).unwrap().validate().unwrap();
            let h = HomComplex::new(&e, &e).unwrap();
            prop_assert!(h.differential_matrix(1).mul(h.differential_matrix(0)).is_zero());
            prop_assert!(h.differential_matrix(0).mul(h.differential_matrix(1)).is_zero());
        }
    }
}
