//! Cohomology of Hom complexes between matrix factorizations, computed as
//! ker d / im d over the polynomial ring, and the Cardy supertrace.

use crate::groebner::{module_kernel, GroebnerError, ModuleGB, Subquotient};
use crate::matrix::ScalarMatrix;
use crate::mf::{differential, is_closed, HomComplex, MatFac, MfError, Morphism};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error(transparent)]
    Mf(#[from] MfError),
    #[error("cohomology is infinite-dimensional (potential is not an isolated singularity)")]
    Infinite,
    #[error(transparent)]
    Groebner(GroebnerError),
    #[error("map does not send cocycles to cocycles")]
    NotCochainMap,
    #[error("morphism is not closed")]
    NotClosed,
}

impl From<GroebnerError> for HomologyError {
    fn from(e: GroebnerError) -> Self {
        match e {
            GroebnerError::QuotientInfinite => HomologyError::Infinite,
            other => HomologyError::Groebner(other),
        }
    }
}

/// Hom_w(E, F) with explicit cocycle representatives and a coordinate map per parity.
#[derive(Clone, Debug)]
pub struct HomCohomology {
    complex: HomComplex,
    parts: [Subquotient; 2],
}

impl HomCohomology {
    pub fn new(e: &MatFac, f: &MatFac) -> Result<Self, HomologyError> {
        let complex = HomComplex::new(e, f)?;
        let part = |p: u8| -> Result<Subquotient, HomologyError> {
            let kernel = module_kernel(complex.differential_matrix(p));
            let d_in = complex.differential_matrix(1 - p);
            let image: Vec<Vec<Polynomial>> = (0..d_in.cols()).map(|j| d_in.column(j)).collect();
            Ok(Subquotient::new(kernel, &image)?)
        };
        let parts = [part(0)?, part(1)?];
        Ok(HomCohomology { complex, parts })
    }

    pub fn complex(&self) -> &HomComplex {
        &self.complex
    }

    pub fn dim(&self, p: u8) -> usize {
        self.parts[p as usize].dimension()
    }

    pub fn h0(&self) -> usize {
        self.dim(0)
    }

    pub fn h1(&self) -> usize {
        self.dim(1)
    }

    pub fn euler(&self) -> i64 {
        self.h0() as i64 - self.h1() as i64
    }

    /// Cocycle representing basis class `k` of parity `p`.
    pub fn representative(&self, p: u8, k: usize) -> Morphism {
        self.complex
            .unflatten(p, &self.parts[p as usize].representative(k))
    }

    pub fn basis(&self, p: u8) -> Vec<Morphism> {
        (0..self.dim(p))
            .map(|k| self.representative(p, k))
            .collect()
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn coordinates(&self, m: &Morphism) -> Result<Vec<Scalar>, HomologyError> {
        self.parts[m.parity as usize]
            .coordinates(&self.complex.flatten(m))
            .map_err(|_| HomologyError::NotCochainMap)
    }

    /// Matrix of a parity-preserving cochain map on H^p.
    pub fn induced_matrix(
        &self,
        p: u8,
        map: impl Fn(&Morphism) -> Morphism,
    ) -> Result<ScalarMatrix, HomologyError> {
        let d = self.dim(p);
        let mut out = ScalarMatrix::scalar_zeros(d, d);
        for k in 0..d {
            let img = map(&self.representative(p, k));
            if img.parity != p {
                return Err(HomologyError::NotCochainMap);
            }
            for (i, c) in self.coordinates(&img)?.into_iter().enumerate() {
                out.set(i, k, c);
            }
        }
        Ok(out)
    }

    /// Supertrace of a cochain map: tr on H⁰ minus tr on H¹. Maps of odd parity have supertrace 0.
    pub fn supertrace(&self, map: impl Fn(&Morphism) -> Morphism) -> Result<Scalar, HomologyError> {
        let mut acc = Scalar::zero();
        for p in 0..2u8 {
            if self.dim(p) == 0 {
                continue;
            }
            if map(&self.representative(p, 0)).parity != p {
                return Ok(Scalar::zero());
            }
            let t = self.induced_matrix(p, &map)?.trace();
            acc = if p == 0 { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }
}

pub fn hom_cohomology(e: &MatFac, f: &MatFac) -> Result<HomCohomology, HomologyError> {
    HomCohomology::new(e, f)
}

/// dim Hom⁰ − dim Hom¹.
pub fn euler(e: &MatFac, f: &MatFac) -> Result<i64, HomologyError> {
    Ok(HomCohomology::new(e, f)?.euler())
}

/// m_{α,β}(f) = (−1)^{|α||β| + |α||f|}·β∘f∘α.
pub fn m_alpha_beta(alpha: &Morphism, beta: &Morphism, f: &Morphism) -> Morphism {
    let m = beta.compose(f).compose(alpha);
    if (alpha.parity * beta.parity + alpha.parity * f.parity) % 2 == 1 {
        m.neg()
    } else {
        m
    }
}

/// str_k(m_{α,β}) on Hom_w(E, F).
pub fn cardy_lhs(
    e: &MatFac,
    f: &MatFac,
    alpha: &Morphism,
    beta: &Morphism,
) -> Result<Scalar, HomologyError> {
    cardy_lhs_with(&HomCohomology::new(e, f)?, e, f, alpha, beta)
}

/// [`cardy_lhs`] reusing a computed cohomology.
pub fn cardy_lhs_with(
    h: &HomCohomology,
    e: &MatFac,
    f: &MatFac,
    alpha: &Morphism,
    beta: &Morphism,
) -> Result<Scalar, HomologyError> {
    if !is_closed(e, e, alpha) || !is_closed(f, f, beta) {
        return Err(HomologyError::NotClosed);
    }
    h.supertrace(|m| m_alpha_beta(alpha, beta, m))
}

/// Whether a morphism E → F is d of something.
pub fn is_coboundary(e: &MatFac, f: &MatFac, m: &Morphism) -> Result<bool, HomologyError> {
    let hc = HomComplex::new(e, f)?;
    let d_in = hc.differential_matrix(1 - m.parity);
    let image: Vec<Vec<Polynomial>> = (0..d_in.cols()).map(|j| d_in.column(j)).collect();
    let gb = ModuleGB::new(&image, hc.dim(m.parity), hc.nvars());
    Ok(gb.contains(&hc.flatten(m)))
}

/// d applied to a morphism, re-exported for convenience.
pub fn coboundary(e: &MatFac, f: &MatFac, h: &Morphism) -> Morphism {
    differential(e, f, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::GroebnerBasis;
    use crate::matrix::PolyMatrix;
    use crate::mf::clifford_generators;
    use crate::poly::PolyRing;
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
    fn d4_dimensions() {
        let r = PolyRing::rational(&["x", "y"]);
        let e = kz(&r, &["x"], &["x^2 + y^2"]);
        let h = hom_cohomology(&e, &e).unwrap();
        assert_eq!((h.h0(), h.h1()), (2, 0));
        assert_eq!(euler(&e, &e).unwrap(), 2);
        let triv = kz(&r, &["1"], &["x^3 + x*y^2"]);
        let h = hom_cohomology(&triv, &triv).unwrap();
        assert_eq!((h.h0(), h.h1()), (0, 0));
        assert_eq!(euler(&e, &triv).unwrap(), 0);
        assert!(is_coboundary(&triv, &triv, &triv.identity()).unwrap());
        assert!(!is_coboundary(&e, &e, &e.identity()).unwrap());
    }

    #[test]
    fn xn_dimensions_follow_ab_formula() {
        let r = PolyRing::rational(&["x"]);
        for n in 2..7u32 {
            for i in 1..n {
                let (a, b) = (format!("x^{i}"), format!("x^{}", n - i));
                let e = kz(&r, &[&a], &[&b]);
                let h = hom_cohomology(&e, &e).unwrap();
                let quotient = GroebnerBasis::new(&[p(&r, &a), p(&r, &b)], 1)
                    .quotient_basis()
                    .unwrap()
                    .len();
                assert_eq!((h.h0(), h.h1()), (quotient, quotient), "n={n} i={i}");
                assert_eq!(quotient as u32, i.min(n - i));
            }
        }
    }

    #[test]
    fn xn_cardy_lhs() {
        let r = PolyRing::rational(&["x"]);
        for n in [2u32, 4, 6] {
            let i = n / 2;
            let e = kz(&r, &[&format!("x^{i}")], &[&format!("x^{i}")]);
            let al = Morphism::from_blocks(&e, &e, 1, single(&r, "1"), single(&r, "-1")).unwrap();
            assert_eq!(
                cardy_lhs(&e, &e, &al, &al).unwrap(),
                Scalar::from_int(n as i64)
            );
            let id = e.identity();
            assert_eq!(
                cardy_lhs(&e, &e, &id, &id).unwrap(),
                Scalar::from_int(hom_cohomology(&e, &e).unwrap().euler())
            );
        }
    }

    #[test]
    fn representatives_are_closed_and_independent() {
        let r = PolyRing::rational(&["x", "y"]);
        let e = kz(&r, &["x", "y"], &["x^2", "y^3"]);
        let f = kz(&r, &["x^2", "y"], &["x", "y^3"]);
        let h = hom_cohomology(&e, &f).unwrap();
        for par in 0..2u8 {
            for (k, m) in h.basis(par).iter().enumerate() {
                assert!(is_closed(&e, &f, m));
                let mut unit = vec![Scalar::zero(); h.dim(par)];
                unit[k] = Scalar::one();
                assert_eq!(h.coordinates(m).unwrap(), unit);
            }
        }
    }

    #[test]
    fn clifford_relations_in_cohomology() {
        let r = PolyRing::rational(&["x", "y"]);
        let w = p(&r, "x^2 + x*y + y^3");
        let c = clifford_generators(&r, &w).unwrap();
        let k = &c.kst;
        for i in 0..2 {
            for j in 0..2 {
                let ac = c.generators[i]
                    .compose(&c.generators[j])
                    .add(&c.generators[j].compose(&c.generators[i]));
                let constant = c.wij[i][j].constant_term() + c.wij[j][i].constant_term();
                let shifted = ac.add(&k.identity().scale(&Polynomial::constant(2, constant)));
                assert!(is_coboundary(k, k, &shifted).unwrap());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn dimensions_stable_under_permuted_generators(b in proptest::collection::vec(prop_oneof![Just("x^2"), Just("y^2"), Just("x^2 + y^2"), Just("x*y + y^2")], 2)) {
            let r = PolyRing::rational(&["x", "y"]);
            let e = kz(&r, &["x", "y"], &[b[0], b[1]]);
            let swapped = kz(&r, &["y", "x"], &[b[1], b[0]]);
            if let (Ok(h1), Ok(h2)) = (hom_cohomology(&e, &e), hom_cohomology(&swapped, &swapped)) {
                prop_assert_eq!((h1.h0(), h1.h1()), (h2.h0(), h2.h1()));
            }
        }
    }
}
