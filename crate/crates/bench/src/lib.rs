//! Inputs shared by the benchmarks.

use mfhrr::{MatFac, PolyRing, Polynomial};

/// Named potentials in two variables, from cheap to expensive.
pub const POTENTIALS: &[(&str, &str)] = &[
    ("A2xA1", "x^3 + y^2"),
    ("D4", "x^3 + x*y^2"),
    ("E6", "x^3 + y^4"),
    ("x4y4", "x^4 + y^4"),
    ("E8", "x^3 + y^5"),
];

pub fn ring() -> PolyRing {
    PolyRing::rational(&["x", "y"])
}

pub fn parse(r: &PolyRing, s: &str) -> Polynomial {
    r.parse(s).expect("benchmark inputs parse")
}

/// The rank-2 factorization {x; x² + y²} of the D4 potential.
pub fn d4_factorization(r: &PolyRing) -> MatFac {
    MatFac::koszul(r, &[parse(r, "x")], &[parse(r, "x^2 + y^2")]).expect("D4 factorization")
}

/// A rank-4 Koszul factorization of x^a + y^b split as x^i·x^{a−i} + y^j·y^{b−j}.
pub fn split_koszul(r: &PolyRing, a: u32, i: u32, b: u32, j: u32) -> MatFac {
    let ks = [parse(r, &format!("x^{i}")), parse(r, &format!("y^{j}"))];
    let ls = [
        parse(r, &format!("x^{}", a - i)),
        parse(r, &format!("y^{}", b - j)),
    ];
    MatFac::koszul(r, &ks, &ls).expect("Koszul factorization")
}
