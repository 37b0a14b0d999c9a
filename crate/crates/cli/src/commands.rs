//! Subcommands and their evaluation against a loaded session.

use clap::Subcommand;
use mfhrr::equivariant::{invariant_euler, orbifold_hh_dimensions};
use mfhrr::homology::cardy_lhs_with;
use mfhrr::invariants::{permutations, tau_permuted};
use mfhrr::mf::is_closed;
use mfhrr::oracle::{inverse_form_check, oracle_tau_with};
use mfhrr::{
    cardy_rhs, chern, chern_of_diagonal, chi_equivariant, chi_hrr, graded_chi,
    graded_to_equivariant, solve_d, tau, HomCohomology, Morphism, Scalar, Sector,
};
use serde_json::{json, Value};

use crate::output::{integral, matrix, poly, scalar};
use crate::session::Session;
use crate::CliError;

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Milnor number, monomial basis and residue Gram matrix of the potential.
    Milnor,
    /// Chern character of a factorization.
    Chern { e: String },
    /// Boundary-bulk image of an endomorphism (`id` for the identity).
    Tau { e: String, alpha: String },
    /// Riemann-Roch pairing of two Chern characters.
    Chi { e: String, f: String },
    /// Dimensions of Hom cohomology.
    Hom { e: String, f: String },
    /// Both sides of the Cardy identity.
    Cardy {
        e: String,
        f: String,
        alpha: String,
        beta: String,
    },
    /// Fixed loci, restricted potentials and weights of every group element.
    Sectors,
    /// Equivariant Riemann-Roch pairing.
    EquivariantChi { e: String, f: String },
    /// Sector-by-sector dimensions of orbifold Hochschild homology.
    OrbifoldHh,
    /// Graded Euler characteristic through the cyclic reduction.
    GradedChi { e: String, f: String },
    /// Runs every identity check on the session and reports each.
    Verify,
}

/// The result of one command; `failed` is set when a verification did not pass.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub value: Value,
    pub failed: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report {
            value,
            failed: false,
        }
    }
}

fn lib(context: impl Into<String>, e: impl Into<mfhrr::Error>) -> CliError {
    CliError::Library {
        context: context.into(),
        source: e.into(),
    }
}

fn endomorphism<'a>(
    s: &'a Session,
    e: &str,
    name: &str,
) -> Result<std::borrow::Cow<'a, Morphism>, CliError> {
    let fac = s.factorization(e)?;
    if name == "id" {
        return Ok(std::borrow::Cow::Owned(fac.mf.identity()));
    }
    let m = s.morphism(name)?;
    if m.source != e || m.target != e {
        return Err(CliError::Input(format!(
            "`{name}` is not an endomorphism of `{e}`"
        )));
    }
    Ok(std::borrow::Cow::Borrowed(&m.morphism))
}

pub fn run(cmd: &Command, s: &Session) -> Result<Report, CliError> {
    let a = &s.milnor;
    let r = &s.ring;
    match cmd {
        Command::Milnor => Ok(Report::ok(json!({
            "mu": a.mu(),
            "basis": a.basis().iter().map(|m| r.format_monomial(m)).collect::<Vec<_>>(),
            "gram": matrix(&a.gram_matrix()),
        }))),
        Command::Chern { e } => {
            let c = chern(&s.factorization(e)?.mf, a).map_err(|x| lib("chern", x))?;
            Ok(Report::ok(
                json!({"class": poly(r, &c.value), "parity": c.parity}),
            ))
        }
        Command::Tau { e, alpha } => {
            let al = endomorphism(s, e, alpha)?;
            let c = tau(&s.factorization(e)?.mf, &al, a).map_err(|x| lib("tau", x))?;
            Ok(Report::ok(
                json!({"class": poly(r, &c.value), "parity": c.parity}),
            ))
        }
        Command::Chi { e, f } => {
            let v = chi_hrr(&s.factorization(e)?.mf, &s.factorization(f)?.mf, a)
                .map_err(|x| lib("chi", x))?;
            Ok(Report::ok(json!({"chi": integral(&v)})))
        }
        Command::Hom { e, f } => {
            let h = HomCohomology::new(&s.factorization(e)?.mf, &s.factorization(f)?.mf)
                .map_err(|x| lib("hom", x))?;
            Ok(Report::ok(json!({"h0": h.h0(), "h1": h.h1()})))
        }
        Command::Cardy { e, f, alpha, beta } => {
            let (ef, ff) = (&s.factorization(e)?.mf, &s.factorization(f)?.mf);
            let (al, be) = (endomorphism(s, e, alpha)?, endomorphism(s, f, beta)?);
            let h = HomCohomology::new(ef, ff).map_err(|x| lib("cardy", x))?;
            let lhs = cardy_lhs_with(&h, ef, ff, &al, &be).map_err(|x| lib("cardy", x))?;
            let rhs = cardy_rhs(ef, ff, &al, &be, a).map_err(|x| lib("cardy", x))?;
            Ok(Report::ok(
                json!({"value": scalar(&lhs), "lhs": scalar(&lhs), "rhs": scalar(&rhs)}),
            ))
        }
        Command::Sectors => {
            let g = s.group()?;
            let mut rows = Vec::new();
            for el in g.elements() {
                let sec = Sector::new(r, &s.potential, el).map_err(|x| lib("sectors", x))?;
                rows.push(json!({
                    "element": el.to_string(),
                    "fixed": sec.fixed.iter().map(|&i| r.names()[i].clone()).collect::<Vec<_>>(),
                    "potential": poly(&sec.ring, &sec.potential),
                    "mu": sec.milnor.mu(),
                    "parity": sec.parity(),
                    "c_weight": scalar(&g.c_weight(el)),
                    "det_one_minus": scalar(&g.det_one_minus(el)),
                }));
            }
            Ok(Report::ok(json!({"order": g.len(), "sectors": rows})))
        }
        Command::EquivariantChi { e, f } => {
            let v = chi_equivariant(s.equivariant(e)?, s.equivariant(f)?)
                .map_err(|x| lib("equivariant-chi", x))?;
            Ok(Report::ok(json!({"chi": integral(&v)})))
        }
        Command::OrbifoldHh => {
            let hh = orbifold_hh_dimensions(r, &s.potential, s.group()?)
                .map_err(|x| lib("orbifold-hh", x))?;
            let rows: Vec<Value> = hh
                .sectors
                .iter()
                .map(|sd| {
                    json!({
                        "element": sd.element.to_string(),
                        "fixed": sd.fixed.iter().map(|&i| r.names()[i].clone()).collect::<Vec<_>>(),
                        "parity": sd.parity,
                        "dimension": sd.dimension,
                    })
                })
                .collect();
            Ok(Report::ok(
                json!({"sectors": rows, "even": hh.even, "odd": hh.odd}),
            ))
        }
        Command::GradedChi { e, f } => {
            let (Some(weights), Some(degree)) = (&s.weights, s.degree) else {
                return Err(CliError::Input(
                    "graded-chi needs `weights` and `degree`".into(),
                ));
            };
            let grading = |name: &str| -> Result<(&mfhrr::MatFac, &[i64]), CliError> {
                let fac = s.factorization(name)?;
                let g = fac.grading.as_deref().ok_or_else(|| {
                    CliError::Input(format!("factorization `{name}` has no `grading`"))
                })?;
                Ok((&fac.mf, g))
            };
            let ((ef, eg), (ff, fg)) = (grading(e)?, grading(f)?);
            let red = graded_to_equivariant(&s.potential, weights, degree)
                .map_err(|x| lib("graded-chi", x))?;
            let v = graded_chi(&red, ef, eg, ff, fg).map_err(|x| lib("graded-chi", x))?;
            Ok(Report::ok(
                json!({"chi": integral(&v), "doubled": red.doubled, "group_order": red.group.len()}),
            ))
        }
        Command::Verify => Ok(verify(s)),
    }
}

struct Checks {
    rows: Vec<Value>,
    failed: usize,
}

impl Checks {
    fn record(&mut self, identity: &str, subject: String, outcome: Result<(Value, Value), String>) {
        let (pass, lhs, rhs) = match outcome {
            Ok((l, r)) => (l == r, l, r),
            Err(msg) => (false, Value::String(format!("error: {msg}")), Value::Null),
        };
        if !pass {
            self.failed += 1;
        }
        self.rows.push(
            json!({"identity": identity, "subject": subject, "lhs": lhs, "rhs": rhs, "pass": pass}),
        );
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn verify(s: &Session) -> Report {
    let a = &s.milnor;
    let r = &s.ring;
    let mut c = Checks {
        rows: Vec::new(),
        failed: 0,
    };

    c.record(
        "hessian_trace",
        "w".into(),
        Ok((
            scalar(&a.residue_trace(&a.hessian())),
            scalar(&Scalar::from_int(a.mu() as i64)),
        )),
    );
    c.record(
        "inverse_form",
        "w".into(),
        inverse_form_check(a)
            .map(|()| (Value::Bool(true), Value::Bool(true)))
            .map_err(err),
    );
    c.record(
        "chern_of_diagonal",
        "w".into(),
        chern_of_diagonal(r, &s.potential)
            .map(|d| {
                (
                    Value::String(r.doubled().format(&d.direct)),
                    Value::String(r.doubled().format(&d.determinant)),
                )
            })
            .map_err(err),
    );

    let names: Vec<&String> = s.factorizations.keys().collect();
    for &e in &names {
        let ef = &s.factorizations[e].mf;
        let closed: Vec<(String, Morphism)> = s
            .endomorphisms(e)
            .into_iter()
            .filter(|(_, m)| is_closed(ef, ef, m))
            .collect();
        let d = solve_d(ef);
        for (name, al) in &closed {
            let subject = format!("{e}:{name}");
            let direct = tau(ef, al, a);
            let via_oracle = match &d {
                Ok(d) => oracle_tau_with(d, ef, al, a).map_err(err),
                Err(x) => Err(err(x)),
            };
            c.record(
                "oracle_tau",
                subject.clone(),
                match (&direct, via_oracle) {
                    (Ok(t), Ok(o)) => Ok((
                        json!([poly(r, &o.value), o.parity]),
                        json!([poly(r, &t.value), t.parity]),
                    )),
                    (Err(x), _) => Err(err(x)),
                    (_, Err(x)) => Err(x),
                },
            );
            let mut perm = Ok(());
            if let Ok(t) = &direct {
                for sigma in permutations(r.nvars()) {
                    match tau_permuted(ef, al, a, &sigma) {
                        Ok(p) if p == *t => {}
                        Ok(_) => {
                            perm = Err(format!("differs for order {sigma:?}"));
                            break;
                        }
                        Err(x) => {
                            perm = Err(err(x));
                            break;
                        }
                    }
                }
            }
            c.record(
                "permutation_invariance",
                subject,
                match (direct, perm) {
                    (Err(x), _) => Err(err(x)),
                    (Ok(_), Err(m)) => Err(m),
                    (Ok(_), Ok(())) => Ok((Value::Bool(true), Value::Bool(true))),
                },
            );
        }
    }

    for &e in &names {
        for &f in &names {
            let (ef, ff) = (&s.factorizations[e].mf, &s.factorizations[f].mf);
            let subject = format!("{e},{f}");
            let h = match HomCohomology::new(ef, ff) {
                Ok(h) => h,
                Err(x) => {
                    c.record("hrr", subject, Err(err(x)));
                    continue;
                }
            };
            c.record(
                "hrr",
                subject.clone(),
                chi_hrr(ef, ff, a)
                    .map(|v| (Value::from(h.euler()), integral(&v)))
                    .map_err(err),
            );
            let alphas: Vec<_> = s
                .endomorphisms(e)
                .into_iter()
                .filter(|(_, m)| is_closed(ef, ef, m))
                .collect();
            let betas: Vec<_> = s
                .endomorphisms(f)
                .into_iter()
                .filter(|(_, m)| is_closed(ff, ff, m))
                .collect();
            for (an, al) in &alphas {
                for (bn, be) in &betas {
                    let lhs = cardy_lhs_with(&h, ef, ff, al, be).map_err(err);
                    let rhs = cardy_rhs(ef, ff, al, be, a).map_err(err);
                    c.record(
                        "cardy",
                        format!("{subject}:{an},{bn}"),
                        lhs.and_then(|l| rhs.map(|r| (scalar(&l), scalar(&r)))),
                    );
                }
            }
            if let (Some(ee), Some(fe)) = (
                &s.factorizations[e].equivariant,
                &s.factorizations[f].equivariant,
            ) {
                let outcome = chi_equivariant(ee, fe).map_err(err).and_then(|chi| {
                    invariant_euler(ee, fe)
                        .map(|eu| (Value::from(eu), integral(&chi)))
                        .map_err(err)
                });
                c.record("equivariant_hrr", subject, outcome);
            }
        }
    }

    let total = c.rows.len();
    Report {
        value: json!({"checks": c.rows, "passed": total - c.failed, "failed": c.failed}),
        failed: c.failed > 0,
    }
}
