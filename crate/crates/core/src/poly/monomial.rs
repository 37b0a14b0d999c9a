use std::cmp::Ordering;

use smallvec::SmallVec;

pub type Exponents = SmallVec<[u32; 6]>;

/// Exponent vector ordered by graded reverse lexicographic order. Within a
/// degree the monomial with the smaller exponent of the first variable is
/// larger, so later variables rank higher (x < y in a ring on `x, y`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exponents,
    deg: u32,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, n),
            deg: 0,
        }
    }

    pub fn var(n: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(n);
        m.exps[i] = e;
        m.deg = e;
        m
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = u32>) -> Self {
        let exps: Exponents = exps.into_iter().collect();
        let deg = exps.iter().sum();
        Monomial { exps, deg }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            deg: self.deg + other.deg,
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Self) -> Self {
        Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(a, b)| a - b)
                .collect(),
            deg: other.deg - self.deg,
        }
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Self::from_exponents(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)))
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.exps
            .iter()
            .zip(weights)
            .map(|(e, w)| *e as i64 * w)
            .sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for (a, b) in self.exps.iter().zip(&other.exps) {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.iter().copied())
    }

    #[test]
    fn grevlex() {
        // z > y > x in degree 1; x*z < y^2
        assert!(m(&[0, 0, 1]) > m(&[0, 1, 0]));
        assert!(m(&[0, 1, 0]) > m(&[1, 0, 0]));
        assert!(m(&[1, 0, 1]) < m(&[0, 2, 0]));
        assert!(m(&[2, 0, 0]) > m(&[0, 0, 1]));
        assert!(m(&[0, 2]) > m(&[1, 1]));
        assert!(m(&[1, 1]) > m(&[2, 0]));
    }

    #[test]
    fn division() {
        assert!(m(&[1, 1]).divides(&m(&[2, 1])));
        assert!(!m(&[0, 2]).divides(&m(&[2, 1])));
        assert_eq!(m(&[1, 1]).quotient_of(&m(&[2, 1])), m(&[1, 0]));
        assert_eq!(m(&[2, 0]).lcm(&m(&[1, 3])), m(&[2, 3]));
    }
}
