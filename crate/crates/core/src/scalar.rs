//! Exact arithmetic over ℚ and the cyclotomic fields ℚ(ζ_m).
//!
//! A [`Scalar`] is either a plain rational or an element of a cyclotomic
//! field, stored as its unique reduction modulo Φ_m. Elements whose reduction
//! is a constant are always stored as rationals, so equality is structural.
//! Rationals embed into every cyclotomic field; two elements of different
//! cyclotomic fields cannot be combined.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cyclotomic context mismatch: ζ_{0} vs ζ_{1}")]
    ContextMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
}

/// Coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic order must be positive");
    // x^m - 1
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![BigInt::zero(); qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (t, dt) in den.iter().enumerate() {
            rem[k + t] -= &c * dt;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// The field ℚ(ζ_m) = ℚ[x]/Φ_m.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicField {
    order: u32,
    modulus: Vec<Rational>,
}

impl CyclotomicField {
    pub fn new(order: u32) -> Arc<Self> {
        let modulus = cyclotomic_polynomial(order)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        Arc::new(CyclotomicField { order, modulus })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// φ(m), the degree of the extension.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn minimal_polynomial(&self) -> &[Rational] {
        &self.modulus
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        let phi = self.degree();
        for k in (phi..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut v[k], Rational::zero());
            for t in 0..phi {
                if !self.modulus[t].is_zero() {
                    v[k - phi + t] -= &c * &self.modulus[t];
                }
            }
        }
        v.resize(phi, Rational::zero());
        v
    }

    /// Builds a scalar from arbitrary-length power-basis coefficients.
    pub fn element(self: &Arc<Self>, coeffs: Vec<Rational>) -> Scalar {
        Scalar::from_reduced(self, self.reduce(coeffs))
    }

    /// ζ_m^k for any integer k.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> Scalar {
        let e = k.rem_euclid(self.order as i64) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        self.element(v)
    }

    pub fn zeta(self: &Arc<Self>) -> Scalar {
        self.zeta_pow(1)
    }

    /// Inverts a nonzero reduced element with the extended Euclidean algorithm.
    fn invert(&self, a: &[Rational]) -> Vec<Rational> {
        let (g, s) = ext_gcd(trim(a.to_vec()), trim(self.modulus.clone()));
        debug_assert_eq!(g.len(), 1, "Φ_m is irreducible");
        let ginv = g[0].recip();
        let mut s: Vec<Rational> = s.into_iter().map(|c| c * &ginv).collect();
        s.resize(s.len().max(1), Rational::zero());
        self.reduce(s)
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (t, bt) in b.iter().enumerate() {
            rem[k + t] -= &c * bt;
        }
        quot[k] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

/// Returns (g, s) with s·a ≡ g (mod b) and g = gcd(a, b).
fn ext_gcd(a: Vec<Rational>, b: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

/// An element of ℚ or of ℚ(ζ_m).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Cyclotomic(Arc<CyclotomicField>, Vec<Rational>),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Scalar::Rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    fn from_reduced(field: &Arc<CyclotomicField>, coeffs: Vec<Rational>) -> Self {
        if coeffs.iter().skip(1).all(Zero::is_zero) {
            Scalar::Rational(coeffs.into_iter().next().unwrap_or_else(Rational::zero))
        } else {
            Scalar::Cyclotomic(field.clone(), coeffs)
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Cyclotomic(..) => None,
        }
    }

    /// The integer value, if this scalar is a rational integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn field(&self) -> Option<&Arc<CyclotomicField>> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Cyclotomic(f, _) => Some(f),
        }
    }

    /// Power-basis coefficients of length φ(m) in the given field.
    pub fn coefficients_in(&self, field: &CyclotomicField) -> Vec<Rational> {
        match self {
            Scalar::Rational(r) => {
                let mut v = vec![Rational::zero(); field.degree()];
                v[0] = r.clone();
                v
            }
            Scalar::Cyclotomic(_, c) => c.clone(),
        }
    }

    fn common_field(&self, other: &Self) -> Result<Option<Arc<CyclotomicField>>, ScalarError> {
        match (self.field(), other.field()) {
            (Some(a), Some(b)) if a.order != b.order => {
                Err(ScalarError::ContextMismatch(a.order, b.order))
            }
            (Some(a), _) | (None, Some(a)) => Ok(Some(a.clone())),
            (None, None) => Ok(None),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.combine(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(
        &self,
        other: &Self,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self, ScalarError> {
        match self.common_field(other)? {
            None => Ok(Scalar::Rational(op(
                self.as_rational().unwrap(),
                other.as_rational().unwrap(),
            ))),
            Some(f) => {
                let a = self.coefficients_in(&f);
                let b = other.coefficients_in(&f);
                let c = a.iter().zip(&b).map(|(x, y)| op(x, y)).collect();
                Ok(Scalar::from_reduced(&f, c))
            }
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Rational(a), Scalar::Cyclotomic(f, c))
            | (Scalar::Cyclotomic(f, c), Scalar::Rational(a)) => {
                if a.is_zero() {
                    return Ok(Scalar::zero());
                }
                Ok(Scalar::Cyclotomic(
                    f.clone(),
                    c.iter().map(|x| x * a).collect(),
                ))
            }
            (Scalar::Cyclotomic(..), Scalar::Cyclotomic(..)) => {
                let f = self.common_field(other)?.unwrap();
                let (Scalar::Cyclotomic(_, a), Scalar::Cyclotomic(_, b)) = (self, other) else {
                    unreachable!()
                };
                let prod = poly_mul(a, b);
                Ok(Scalar::from_reduced(&f, f.reduce(prod)))
            }
        }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        match self {
            Scalar::Rational(r) if r.is_zero() => Err(ScalarError::DivisionByZero),
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Cyclotomic(f, c) => Ok(Scalar::from_reduced(f, f.invert(c))),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// Whether the scalar is a rational number with negative value; used for printing.
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Cyclotomic(f, c) => {
                Scalar::Cyclotomic(f.clone(), c.iter().map(|x| -x).collect())
            }
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Rationals print as `p/q` (or `p`); cyclotomic elements as a polynomial in `z`,
/// highest power first.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Cyclotomic(_, c) => {
                let mut first = true;
                for (k, ck) in c.iter().enumerate().rev() {
                    if ck.is_zero() {
                        continue;
                    }
                    let neg = ck.is_negative();
                    let abs = ck.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if neg { '-' } else { '+' })?;
                    }
                    first = false;
                    match k {
                        0 => write!(f, "{abs}")?,
                        _ => {
                            if !abs.is_one() {
                                write!(f, "{abs}*")?;
                            }
                            if k == 1 {
                                write!(f, "z")?;
                            } else {
                                write!(f, "z^{k}")?;
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// Greatest common divisor helper exposed for denominators in tests and callers.
pub fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        // Φ_105 is the first with a coefficient of absolute value 2.
        assert!(cyclotomic_polynomial(105)
            .iter()
            .any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(
            Scalar::from_ratio(1, 2) + Scalar::from_ratio(1, 3),
            Scalar::from_ratio(5, 6)
        );
        let q4 = CyclotomicField::new(4);
        let i = q4.zeta();
        assert_eq!(&i * &i, Scalar::from_int(-1));
        let q3 = CyclotomicField::new(3);
        assert_eq!(q3.zeta() + q3.zeta_pow(2), Scalar::from_int(-1));
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(
            Scalar::from_ratio(2, 3).inv().unwrap(),
            Scalar::from_ratio(3, 2)
        );
        let q4 = CyclotomicField::new(4);
        assert_eq!(q4.zeta().inv().unwrap(), -q4.zeta());
        let q3 = CyclotomicField::new(3);
        let z = q3.zeta();
        let a = Scalar::one() - z.clone();
        let expected = (Scalar::from_int(2) + z) / Scalar::from_int(3);
        assert_eq!(a.inv().unwrap(), expected);
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn mixed_conductors_rejected() {
        let a = CyclotomicField::new(3).zeta();
        let b = CyclotomicField::new(5).zeta();
        assert_eq!(a.checked_add(&b), Err(ScalarError::ContextMismatch(3, 5)));
        assert!(a.checked_mul(&b).is_err());
        // rationals embed in any field
        assert!(a.checked_mul(&Scalar::from_int(2)).is_ok());
    }

    #[test]
    fn roots_of_unity() {
        for m in 1..=12u32 {
            let f = CyclotomicField::new(m);
            let z = f.zeta();
            assert!(z.pow(m as i64).is_one(), "ζ_{m}^{m}");
            for d in 1..m {
                assert!(!z.pow(d as i64).is_one(), "ζ_{m}^{d}");
            }
            if m > 1 {
                let sum = (0..m).fold(Scalar::zero(), |acc, j| acc + f.zeta_pow(j as i64));
                assert!(sum.is_zero());
            }
            assert_eq!(f.degree(), (1..=m).filter(|k| k.gcd(&m) == 1).count());
        }
    }

    #[test]
    fn display() {
        let f = CyclotomicField::new(5);
        let s = f.zeta_pow(2) - f.zeta() + Scalar::from_ratio(1, 2);
        assert_eq!(s.to_string(), "z^2 - z + 1/2");
        assert_eq!(Scalar::from_ratio(-3, 4).to_string(), "-3/4");
    }

    fn arb_elem(m: u32) -> impl Strategy<Value = Scalar> {
        let f = CyclotomicField::new(m);
        proptest::collection::vec((-6i64..6, 1i64..5), f.degree()).prop_map(move |cs| {
            f.element(
                cs.into_iter()
                    .map(|(p, q)| Rational::new(p.into(), q.into()))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn field_axioms_q7((a, b, c) in (arb_elem(7), arb_elem(7), arb_elem(7))) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn field_axioms_q12((a, b, c) in (arb_elem(12), arb_elem(12), arb_elem(12))) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b - &c), &(&a * &b) - &(&a * &c));
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }
    }
}
