//! The Milnor ring A_w = R/J_w with its residue trace and canonical pairing.

use crate::groebner::GroebnerBasis;
use crate::matrix::{PolyMatrix, ScalarMatrix};
use crate::poly::{Monomial, PolyRing, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MilnorError {
    #[error("potential has a nonzero constant term")]
    NonzeroConstant,
    #[error("not an isolated singularity")]
    NotIsolated,
    #[error("singular locus not local")]
    NotLocal,
    #[error("classes live in different Milnor rings")]
    RingMismatch,
}

/// Milnor ring of an isolated singularity at the origin.
#[derive(Clone, Debug)]
pub struct MilnorRing {
    ring: PolyRing,
    w: Polynomial,
    jacobian: Vec<Polynomial>,
    gb: GroebnerBasis,
    basis: Vec<Monomial>,
    nilpotency: u32,
    residue_det: Polynomial,
}

/// An element of A_w·dx, stored as its normal form plus the parity of the ambient class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorClass {
    pub value: Polynomial,
    pub parity: u8,
}

impl MilnorRing {
    pub fn new(ring: &PolyRing, w: &Polynomial) -> Result<Self, MilnorError> {
        let n = ring.nvars();
        assert_eq!(w.nvars(), n, "potential lives in a different ring");
        if !w.constant_term().is_zero() {
            return Err(MilnorError::NonzeroConstant);
        }
        let jacobian: Vec<Polynomial> = (0..n).map(|i| w.partial_derivative(i)).collect();
        let gb = GroebnerBasis::with_cofactors(&jacobian, n);
        let basis = gb.quotient_basis().ok_or(MilnorError::NotIsolated)?;
        if !gb
            .local_support_check()
            .map_err(|_| MilnorError::NotIsolated)?
        {
            return Err(MilnorError::NotLocal);
        }
        let mut nilpotency = 1;
        for i in 0..n {
            let x = Polynomial::var(n, i);
            let mut e = 1;
            while !gb.contains(&x.pow(e)) {
                e += 1;
            }
            nilpotency = nilpotency.max(e);
        }
        let mut r = MilnorRing {
            ring: ring.clone(),
            w: w.clone(),
            jacobian,
            gb,
            basis,
            nilpotency,
            residue_det: Polynomial::one(n),
        };
        r.residue_det = r.cofactor_determinant(nilpotency);
        Ok(r)
    }

    /// det(a) for x_i^e = Σ_j a_ij ∂_j w.
    fn cofactor_determinant(&self, e: u32) -> Polynomial {
        let n = self.nvars();
        let rows: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| {
                let (r, a) = self
                    .gb
                    .normal_form_with_cofactors(&Polynomial::var(n, i).pow(e));
                assert!(r.is_zero(), "x_{i}^{e} is not in the Jacobian ideal");
                a
            })
            .collect();
        PolyMatrix::from_rows(rows, Polynomial::zero(n)).det()
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

    pub fn jacobian(&self) -> &[Polynomial] {
        &self.jacobian
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    /// Standard monomials, increasing.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn mu(&self) -> usize {
        self.basis.len()
    }

    pub fn nilpotency(&self) -> u32 {
        self.nilpotency
    }

    pub fn residue_cofactor_det(&self) -> &Polynomial {
        &self.residue_det
    }

    /// Parity n mod 2 of the top-degree forms.
    pub fn parity(&self) -> u8 {
        (self.nvars() % 2) as u8
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        self.gb.normal_form(f)
    }

    pub fn class(&self, f: &Polynomial) -> MilnorClass {
        MilnorClass {
            value: self.normal_form(f),
            parity: self.parity(),
        }
    }

    pub fn class_with_parity(&self, f: &Polynomial, parity: u8) -> MilnorClass {
        MilnorClass {
            value: self.normal_form(f),
            parity: parity % 2,
        }
    }

    /// Coordinates of `f` in the standard-monomial basis.
    pub fn coordinates(&self, f: &Polynomial) -> Vec<Scalar> {
        let nf = self.normal_form(f);
        self.basis.iter().map(|m| nf.coefficient(m)).collect()
    }

    pub fn hessian(&self) -> Polynomial {
        let n = self.nvars();
        let d: Vec<Polynomial> = (0..n).map(|i| self.w.partial_derivative(i)).collect();
        PolyMatrix::from_fn(n, n, Polynomial::zero(n), |i, j| d[i].partial_derivative(j)).det()
    }

    pub fn hessian_class(&self) -> MilnorClass {
        self.class(&self.hessian())
    }

    /// Grothendieck residue of f·dx over (∂_1 w, …, ∂_n w).
    pub fn residue_trace(&self, f: &Polynomial) -> Scalar {
        top_coefficient(f, &self.residue_det, self.nilpotency)
    }

    /// The same trace recomputed through the transformation law at exponent `e`;
    /// `e` must be at least the nilpotency bound.
    pub fn residue_trace_with_exponent(&self, f: &Polynomial, e: u32) -> Scalar {
        assert!(e >= self.nilpotency, "exponent below the nilpotency bound");
        top_coefficient(f, &self.cofactor_determinant(e), e)
    }

    /// (−1)^{C(n,2)}·tr(f·g).
    pub fn pairing(&self, f: &Polynomial, g: &Polynomial) -> Scalar {
        let t = self.residue_trace(&self.normal_form(&f.mul(g)));
        if orientation_sign(self.nvars()) < 0 {
            -t
        } else {
            t
        }
    }

    pub fn canonical_pairing(
        &self,
        f: &MilnorClass,
        g: &MilnorClass,
    ) -> Result<Scalar, MilnorError> {
        if f.value.nvars() != self.nvars() || g.value.nvars() != self.nvars() {
            return Err(MilnorError::RingMismatch);
        }
        Ok(self.pairing(&f.value, &g.value))
    }

    /// tr(b_α·b_β) over the standard-monomial basis.
    pub fn gram_matrix(&self) -> ScalarMatrix {
        let b: Vec<Polynomial> = self
            .basis
            .iter()
            .map(|m| Polynomial::term(m.clone(), Scalar::one()))
            .collect();
        ScalarMatrix::from_fn(b.len(), b.len(), Scalar::zero(), |i, j| {
            self.residue_trace(&self.normal_form(&b[i].mul(&b[j])))
        })
    }
}

/// (−1)^{C(n,2)}.
pub fn orientation_sign(n: usize) -> i64 {
    if (n * n.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Coefficient of Π x_i^{e−1} in f·d.
fn top_coefficient(f: &Polynomial, d: &Polynomial, e: u32) -> Scalar {
    let n = f.nvars();
    let target = Monomial::from_exponents(std::iter::repeat_n(e - 1, n));
    let mut acc = Scalar::zero();
    for (m, c) in f.terms() {
        if !m.divides(&target) {
            continue;
        }
        let k = d.coefficient(&m.quotient_of(&target));
        if !k.is_zero() {
            acc = &acc + &(c * &k);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(names: &[&str], w: &str) -> (PolyRing, MilnorRing) {
        let r = PolyRing::rational(names);
        let w = r.parse(w).unwrap();
        let a = MilnorRing::new(&r, &w).unwrap();
        (r, a)
    }

    #[test]
    fn milnor_numbers() {
        let (r, a) = ring(&["x", "y"], "x^3 + x*y^2");
        assert_eq!(a.mu(), 4);
        let b: Vec<String> = a.basis().iter().map(|m| r.format_monomial(m)).collect();
        assert_eq!(b, ["1", "x", "y", "x^2"]);
        for n in 2..8 {
            let (_, a) = ring(&["x"], &format!("x^{n}"));
            assert_eq!(a.mu(), n - 1);
        }
        assert_eq!(ring(&["x", "y"], "x^2 + y^2").1.mu(), 1);
    }

    #[test]
    fn errors() {
        let r = PolyRing::rational(&["x", "y"]);
        assert_eq!(
            MilnorRing::new(&r, &r.parse("x^2").unwrap()).unwrap_err(),
            MilnorError::NotIsolated
        );
        assert_eq!(
            MilnorRing::new(&r, &r.parse("x^2 + y^2 + 1").unwrap()).unwrap_err(),
            MilnorError::NonzeroConstant
        );
        // critical points at the origin and at x = -2/3
        assert_eq!(
            MilnorRing::new(&r, &r.parse("x^2 + x^3 + y^2").unwrap()).unwrap_err(),
            MilnorError::NotLocal
        );
    }

    #[test]
    fn hessians() {
        let (r, a) = ring(&["x"], "x^3");
        assert_eq!(a.hessian_class().value, r.parse("6*x").unwrap());
        let (r, a) = ring(&["x", "y"], "x^2 + y^2");
        assert_eq!(a.hessian_class().value, r.parse("4").unwrap());
        let (r, a) = ring(&["x", "y"], "x^3 + x*y^2");
        assert_eq!(a.hessian_class().value, r.parse("24*x^2").unwrap());
    }

    #[test]
    fn traces() {
        for n in 2..7i64 {
            let (r, a) = ring(&["x"], &format!("x^{n}"));
            assert_eq!(
                a.residue_trace(&r.parse(&format!("x^{}", n - 2)).unwrap()),
                Scalar::from_ratio(1, n)
            );
            assert_eq!(
                a.residue_trace(&a.hessian()),
                Scalar::from_int(a.mu() as i64)
            );
            if n % 2 == 0 {
                let f = r.parse(&format!("{n}*x^{}", n / 2 - 1)).unwrap();
                assert_eq!(a.pairing(&f, &f), Scalar::from_int(n));
            }
        }
        let (r, a) = ring(&["x", "y"], "x^3 + x*y^2");
        assert_eq!(
            a.residue_trace(&r.parse("-4*y^2").unwrap()),
            Scalar::from_int(2)
        );
        let c = a.class(&r.parse("2*y").unwrap());
        assert_eq!(a.canonical_pairing(&c, &c).unwrap(), Scalar::from_int(2));
        assert_eq!(a.pairing(&r.zero(), &r.var(0)), Scalar::zero());
    }

    #[test]
    fn gram() {
        let (_, a) = ring(&["x"], "x^2");
        assert_eq!(
            a.gram_matrix(),
            ScalarMatrix::from_rows(vec![vec![Scalar::from_ratio(1, 2)]], Scalar::zero())
        );
        for w in ["x^3 + x*y^2", "x^3 + y^4", "x^2*y + y^3"] {
            let (_, a) = ring(&["x", "y"], w);
            let g = a.gram_matrix();
            assert_eq!(g, g.transpose());
            assert!(!g.det_gauss().is_zero());
        }
    }

    #[test]
    fn hessian_trace_battery() {
        let cases: &[(&[&str], &str)] = &[
            (&["x", "y"], "x^2 + y^2"),
            (&["x", "y"], "x^3 + y^3"),
            (&["x", "y"], "x^3 + x*y^2"),
            (&["x", "y"], "x^4 + y^4"),
            (&["x", "y"], "x^3 + y^4"),
            (&["x", "y"], "x^2*y + y^4"),
            (&["x", "y", "z"], "x^3 + y^3 + z^3"),
        ];
        for (names, w) in cases {
            let (_, a) = ring(names, w);
            assert_eq!(
                a.residue_trace(&a.hessian()),
                Scalar::from_int(a.mu() as i64),
                "{w}"
            );
        }
    }

    #[test]
    fn zero_variable_ring() {
        let r = PolyRing::rational(&[]);
        let a = MilnorRing::new(&r, &r.zero()).unwrap();
        assert_eq!(a.mu(), 1);
        assert_eq!(a.residue_trace(&r.parse("3").unwrap()), Scalar::from_int(3));
        assert_eq!(
            a.pairing(&r.parse("2").unwrap(), &r.parse("5").unwrap()),
            Scalar::from_int(10)
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn trace_is_well_defined(k in 0usize..4, c in -5i64..5, j in 0usize..2, h in 0usize..3) {
            let (r, a) = ring(&["x", "y"], "x^3 + x*y^2");
            let f = Polynomial::term(a.basis()[k].clone(), Scalar::from_int(c));
            let hs = ["1", "x*y", "y + x^2"];
            let g = f.add(&a.jacobian()[j].mul(&r.parse(hs[h]).unwrap()));
            prop_assert_eq!(a.residue_trace(&a.normal_form(&g)), a.residue_trace(&f));
            prop_assert_eq!(a.residue_trace(&g), a.residue_trace(&f));
            prop_assert_eq!(a.residue_trace_with_exponent(&f, a.nilpotency() + 1), a.residue_trace(&f));
        }
    }
}
