use mfhrr::{
    chern, chi_hrr, euler, graded_to_equivariant, hom_cohomology, orbifold_hh_dimensions,
    DiagonalGroup, Error, MatFac, MilnorRing, PolyRing, Result, Scalar,
};

fn e6() -> Result<(PolyRing, MilnorRing, MatFac, MatFac)> {
    let r = PolyRing::new(["x", "y"], None)?;
    let w = r.parse("x^3 + y^4")?;
    let a = MilnorRing::new(&r, &w)?;
    let e = MatFac::koszul(
        &r,
        &[r.parse("x")?, r.parse("y^2")?],
        &[r.parse("x^2")?, r.parse("y^2")?],
    )?;
    let f = MatFac::koszul(
        &r,
        &[r.parse("x^2")?, r.parse("y")?],
        &[r.parse("x")?, r.parse("y^3")?],
    )?;
    Ok((r, a, e, f))
}

#[test]
fn errors_convert_into_the_crate_error() {
    let r = PolyRing::rational(&["x", "y"]);
    let parse: Error = r.parse("x +* y").unwrap_err().into();
    assert!(matches!(parse, Error::Parse(_)));
    let w = r.parse("x^2").unwrap();
    let milnor: Error = MilnorRing::new(&r, &w).unwrap_err().into();
    assert!(matches!(milnor, Error::Milnor(_)));
    assert!(!milnor.to_string().is_empty());
}

#[test]
fn e6_pipeline() -> Result<()> {
    let (_, a, e, f) = e6()?;
    assert_eq!(a.mu(), 6);
    for (x, y) in [(&e, &e), (&e, &f), (&f, &e), (&f, &f)] {
        let h = hom_cohomology(x, y)?;
        assert_eq!(Scalar::from_int(h.euler()), chi_hrr(x, y, &a)?);
        assert_eq!(euler(x, y)?, h.euler());
    }
    assert_eq!(chern(&e.shift(), &a)?.value, chern(&e, &a)?.value.neg());
    Ok(())
}

#[test]
fn group_data_for_e6() -> Result<()> {
    let (r, a, _, _) = e6()?;
    let hh = orbifold_hh_dimensions(&r, a.potential(), &DiagonalGroup::trivial(2))?;
    assert_eq!((hh.even, hh.odd), (a.mu(), 0));
    let red = graded_to_equivariant(a.potential(), &[4, 3], 12)?;
    assert!(!red.doubled);
    assert_eq!(red.group.len(), 12);
    Ok(())
}
