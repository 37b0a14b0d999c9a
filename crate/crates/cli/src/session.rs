//! Loading a session file: field, ring, potential, named factorizations and morphisms,
//! an optional diagonal group and optional grading data.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use mfhrr::equivariant::parse_root;
use mfhrr::mf::clifford_generators;
use mfhrr::{
    equivariant_kst, CyclotomicField, DiagonalGroup, EquivariantMF, GroupElement, MatFac,
    MilnorRing, Morphism, PolyMatrix, PolyRing, Polynomial, Scalar, ScalarMatrix,
};
use serde::Deserialize;

use crate::CliError;

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawSession {
    field: Option<RawField>,
    variables: Vec<String>,
    potential: String,
    #[serde(default)]
    factorizations: BTreeMap<String, RawFactorization>,
    #[serde(default)]
    morphisms: BTreeMap<String, RawMorphism>,
    group: Option<RawGroup>,
    weights: Option<Vec<i64>>,
    degree: Option<i64>,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum RawField {
    Named(String),
    Cyclotomic { cyclotomic: u32 },
}

type RawMatrix = Vec<Vec<String>>;

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawKoszul {
    a: Vec<String>,
    b: Vec<String>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawFactorization {
    koszul: Option<RawKoszul>,
    d0: Option<RawMatrix>,
    d1: Option<RawMatrix>,
    #[serde(default)]
    kst: bool,
    rho: Option<BTreeMap<String, RawMatrix>>,
    grading: Option<Vec<i64>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    source: String,
    target: Option<String>,
    parity: Option<u8>,
    blocks: Option<[RawMatrix; 2]>,
    clifford: Option<usize>,
    compose: Option<Vec<String>>,
    #[serde(default)]
    identity: bool,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    cyclotomic_order: u32,
    generators: Vec<Vec<String>>,
}

/// A named factorization with its optional extra structure.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub mf: MatFac,
    pub equivariant: Option<EquivariantMF>,
    pub grading: Option<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct NamedMorphism {
    pub source: String,
    pub target: String,
    pub morphism: Morphism,
}

/// A fully validated session.
#[derive(Clone, Debug)]
pub struct Session {
    pub ring: PolyRing,
    pub potential: Polynomial,
    pub milnor: MilnorRing,
    pub factorizations: BTreeMap<String, Factorization>,
    pub morphisms: BTreeMap<String, NamedMorphism>,
    pub group: Option<DiagonalGroup>,
    pub weights: Option<Vec<i64>>,
    pub degree: Option<i64>,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn lib(context: &str, e: impl Into<mfhrr::Error>) -> CliError {
    CliError::Library {
        context: context.to_string(),
        source: e.into(),
    }
}

impl Session {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: RawSession =
            serde_json::from_str(text).map_err(|e| input(format!("malformed session: {e}")))?;
        Self::build(raw)
    }

    fn build(raw: RawSession) -> Result<Self, CliError> {
        let mut field = match &raw.field {
            None => None,
            Some(RawField::Named(s)) if s == "rational" => None,
            Some(RawField::Named(s)) => return Err(input(format!("unknown field `{s}`"))),
            Some(RawField::Cyclotomic { cyclotomic }) if *cyclotomic >= 1 => {
                Some(CyclotomicField::new(*cyclotomic))
            }
            Some(RawField::Cyclotomic { .. }) => {
                return Err(input("cyclotomic order must be positive"))
            }
        };
        if let Some(g) = &raw.group {
            match &field {
                Some(f) if f.order() != g.cyclotomic_order => {
                    return Err(input(format!(
                        "group lives in Q(z_{}) but the session field is Q(z_{})",
                        g.cyclotomic_order,
                        f.order()
                    )))
                }
                Some(_) => {}
                None if g.cyclotomic_order >= 1 => {
                    field = Some(CyclotomicField::new(g.cyclotomic_order))
                }
                None => return Err(input("cyclotomic order must be positive")),
            }
        }
        let ring = PolyRing::new(raw.variables.iter().cloned(), field.clone())
            .map_err(|e| lib("variables", e))?;
        let potential = ring
            .parse(&raw.potential)
            .map_err(|e| lib("potential", e))?;
        let milnor = MilnorRing::new(&ring, &potential).map_err(|e| lib("potential", e))?;

        let group = match &raw.group {
            None => None,
            Some(g) => Some(build_group(
                &ring,
                &potential,
                field.as_ref().expect("field set with group"),
                g,
            )?),
        };

        let mut factorizations = BTreeMap::new();
        for (name, rf) in &raw.factorizations {
            let f = build_factorization(&ring, &potential, group.as_ref(), name, rf)?;
            factorizations.insert(name.clone(), f);
        }

        let mut morphisms = BTreeMap::new();
        let mut pending: Vec<(&String, &RawMorphism)> = raw.morphisms.iter().collect();
        // Compositions may refer to other morphisms in any order.
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for (name, rm) in pending {
                if raw.factorizations.contains_key(name) {
                    return Err(input(format!(
                        "`{name}` names both a factorization and a morphism"
                    )));
                }
                let ready = rm
                    .compose
                    .as_ref()
                    .is_none_or(|c| c.iter().all(|n| morphisms.contains_key(n)));
                if ready {
                    let m = build_morphism(&ring, &factorizations, &morphisms, name, rm)?;
                    morphisms.insert(name.clone(), m);
                } else {
                    rest.push((name, rm));
                }
            }
            if rest.len() == before {
                let (name, rm) = rest[0];
                let missing = rm
                    .compose
                    .iter()
                    .flatten()
                    .find(|n| !morphisms.contains_key(*n))
                    .cloned()
                    .unwrap_or_default();
                return Err(input(format!(
                    "morphism `{name}` composes unknown or cyclic morphism `{missing}`"
                )));
            }
            pending = rest;
        }

        if raw.weights.is_some() != raw.degree.is_some() {
            return Err(input("`weights` and `degree` must be given together"));
        }
        if let Some(w) = &raw.weights {
            if w.len() != ring.nvars() {
                return Err(input(format!(
                    "expected {} weights, found {}",
                    ring.nvars(),
                    w.len()
                )));
            }
        }

        Ok(Session {
            ring,
            potential,
            milnor,
            factorizations,
            morphisms,
            group,
            weights: raw.weights,
            degree: raw.degree,
        })
    }

    pub fn factorization(&self, name: &str) -> Result<&Factorization, CliError> {
        self.factorizations
            .get(name)
            .ok_or_else(|| CliError::UnknownName(name.to_string()))
    }

    pub fn morphism(&self, name: &str) -> Result<&NamedMorphism, CliError> {
        self.morphisms
            .get(name)
            .ok_or_else(|| CliError::UnknownName(name.to_string()))
    }

    pub fn group(&self) -> Result<&DiagonalGroup, CliError> {
        self.group
            .as_ref()
            .ok_or_else(|| input("this command needs a `group`"))
    }

    pub fn equivariant(&self, name: &str) -> Result<&EquivariantMF, CliError> {
        self.group()?;
        self.factorization(name)?
            .equivariant
            .as_ref()
            .ok_or_else(|| {
                input(format!(
                    "factorization `{name}` has no group action (`rho`)"
                ))
            })
    }

    /// Endomorphisms of `name`: the identity followed by every named morphism on it.
    pub fn endomorphisms(&self, name: &str) -> Vec<(String, Morphism)> {
        let mut out = vec![("id".to_string(), self.factorizations[name].mf.identity())];
        for (k, m) in &self.morphisms {
            if m.source == name && m.target == name {
                out.push((k.clone(), m.morphism.clone()));
            }
        }
        out
    }
}

fn build_group(
    ring: &PolyRing,
    w: &Polynomial,
    field: &Arc<CyclotomicField>,
    raw: &RawGroup,
) -> Result<DiagonalGroup, CliError> {
    let m = raw.cyclotomic_order;
    let mut gens = Vec::new();
    for (k, g) in raw.generators.iter().enumerate() {
        if g.len() != ring.nvars() {
            return Err(input(format!(
                "group generator {k} has {} entries, expected {}",
                g.len(),
                ring.nvars()
            )));
        }
        let exps = g
            .iter()
            .map(|s| parse_root(s, m))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| lib("group", e))?;
        gens.push(GroupElement::new(exps));
    }
    let group = DiagonalGroup::close(field, ring.nvars(), gens).map_err(|e| lib("group", e))?;
    group.check_invariance(w).map_err(|e| lib("group", e))?;
    Ok(group)
}

fn poly_matrix(ring: &PolyRing, rows: &RawMatrix, what: &str) -> Result<PolyMatrix, CliError> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(input(format!("{what}: rows have different lengths")));
    }
    let parsed = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| ring.parse(s))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| lib(what, e))?;
    Ok(PolyMatrix::from_rows(parsed, ring.zero()))
}

fn scalar_matrix(ring: &PolyRing, rows: &RawMatrix, what: &str) -> Result<ScalarMatrix, CliError> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(input(format!("{what}: rows have different lengths")));
    }
    let parsed = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| ring.parse_scalar(s))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| lib(what, e))?;
    Ok(ScalarMatrix::from_rows(parsed, Scalar::zero()))
}

fn build_factorization(
    ring: &PolyRing,
    w: &Polynomial,
    group: Option<&DiagonalGroup>,
    name: &str,
    raw: &RawFactorization,
) -> Result<Factorization, CliError> {
    let what = format!("factorization `{name}`");
    let kinds = [
        raw.koszul.is_some(),
        raw.d0.is_some() || raw.d1.is_some(),
        raw.kst,
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if kinds != 1 {
        return Err(input(format!(
            "{what}: give exactly one of `koszul`, `d0`/`d1` or `kst`"
        )));
    }
    let mut equivariant = None;
    let mf = if let Some(k) = &raw.koszul {
        let parse = |v: &[String]| {
            v.iter()
                .map(|s| ring.parse(s))
                .collect::<Result<Vec<_>, _>>()
        };
        let a = parse(&k.a).map_err(|e| lib(&what, e))?;
        let b = parse(&k.b).map_err(|e| lib(&what, e))?;
        MatFac::koszul(ring, &a, &b).map_err(|e| lib(&what, e))?
    } else if raw.kst {
        if let (Some(g), None) = (group, &raw.rho) {
            let e = equivariant_kst(ring, w, g).map_err(|e| lib(&what, e))?;
            let mf = e.base().clone();
            equivariant = Some(e);
            mf
        } else {
            clifford_generators(ring, w).map_err(|e| lib(&what, e))?.kst
        }
    } else {
        let (Some(d0), Some(d1)) = (&raw.d0, &raw.d1) else {
            return Err(input(format!("{what}: both `d0` and `d1` are required")));
        };
        let d0 = poly_matrix(ring, d0, &what)?;
        let d1 = poly_matrix(ring, d1, &what)?;
        MatFac::new(ring, w, d0, d1).map_err(|e| lib(&what, e))?
    };
    if mf.potential() != w {
        return Err(input(format!("{what} factors a different potential")));
    }
    if let Some(rho) = &raw.rho {
        let g = group.ok_or_else(|| input(format!("{what}: `rho` given without a `group`")))?;
        let mut mats = Vec::new();
        for k in 0..g.generators().len() {
            let key = format!("gen{k}");
            let m = rho
                .get(&key)
                .ok_or_else(|| input(format!("{what}: missing `rho.{key}`")))?;
            mats.push(scalar_matrix(ring, m, &what)?);
        }
        if let Some(extra) = rho
            .keys()
            .find(|k| !(0..g.generators().len()).any(|i| **k == format!("gen{i}")))
        {
            return Err(input(format!("{what}: unexpected `rho.{extra}`")));
        }
        equivariant =
            Some(EquivariantMF::new(mf.clone(), g.clone(), mats).map_err(|e| lib(&what, e))?);
    }
    if let Some(d) = &raw.grading {
        if d.len() != mf.rank() {
            return Err(input(format!(
                "{what}: grading has {} entries, rank is {}",
                d.len(),
                mf.rank()
            )));
        }
    }
    Ok(Factorization {
        mf,
        equivariant,
        grading: raw.grading.clone(),
    })
}

fn build_morphism(
    ring: &PolyRing,
    facs: &BTreeMap<String, Factorization>,
    done: &BTreeMap<String, NamedMorphism>,
    name: &str,
    raw: &RawMorphism,
) -> Result<NamedMorphism, CliError> {
    let what = format!("morphism `{name}`");
    let src = facs
        .get(&raw.source)
        .ok_or_else(|| CliError::UnknownName(raw.source.clone()))?;
    let target = raw.target.clone().unwrap_or_else(|| raw.source.clone());
    let tgt = facs
        .get(&target)
        .ok_or_else(|| CliError::UnknownName(target.clone()))?;
    let kinds = [
        raw.blocks.is_some(),
        raw.clifford.is_some(),
        raw.compose.is_some(),
        raw.identity,
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if kinds != 1 {
        return Err(input(format!(
            "{what}: give exactly one of `blocks`, `clifford`, `compose` or `identity`"
        )));
    }
    let morphism = if let Some([b0, b1]) = &raw.blocks {
        let parity = raw
            .parity
            .ok_or_else(|| input(format!("{what}: `parity` is required with `blocks`")))?;
        if parity > 1 {
            return Err(input(format!("{what}: parity must be 0 or 1")));
        }
        let b0 = poly_matrix(ring, b0, &what)?;
        let b1 = poly_matrix(ring, b1, &what)?;
        Morphism::from_blocks(&src.mf, &tgt.mf, parity, b0, b1).map_err(|e| lib(&what, e))?
    } else if let Some(j) = raw.clifford {
        if target != raw.source {
            return Err(input(format!(
                "{what}: Clifford generators are endomorphisms"
            )));
        }
        let c = clifford_generators(ring, src.mf.potential()).map_err(|e| lib(&what, e))?;
        if c.kst != src.mf {
            return Err(input(format!(
                "{what}: source `{}` is not the stabilized residue field",
                raw.source
            )));
        }
        c.generators
            .get(j)
            .cloned()
            .ok_or_else(|| input(format!("{what}: no Clifford generator {j}")))?
    } else if raw.identity {
        if target != raw.source {
            return Err(input(format!("{what}: the identity is an endomorphism")));
        }
        src.mf.identity()
    } else {
        let names = raw.compose.as_ref().expect("one kind present");
        let mut it = names.iter().rev();
        let first = it
            .next()
            .ok_or_else(|| input(format!("{what}: empty composition")))?;
        let first = &done[first];
        if first.source != raw.source {
            return Err(input(format!(
                "{what}: composition does not start at `{}`",
                raw.source
            )));
        }
        let (mut acc, mut at) = (first.morphism.clone(), first.target.clone());
        for n in it {
            let m = &done[n];
            if m.source != at {
                return Err(input(format!("{what}: `{n}` does not start at `{at}`")));
            }
            acc = m.morphism.compose(&acc);
            at = m.target.clone();
        }
        if at != target {
            return Err(input(format!(
                "{what}: composition ends at `{at}`, not `{target}`"
            )));
        }
        acc
    };
    if raw.parity.is_some_and(|p| p != morphism.parity) {
        return Err(input(format!("{what}: declared parity does not match")));
    }
    Ok(NamedMorphism {
        source: raw.source.clone(),
        target,
        morphism,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_d4_session() {
        let s = Session::from_json(
            r#"{"variables": ["x", "y"], "potential": "x^3 + x*y^2",
                "factorizations": {"E": {"koszul": {"a": ["x"], "b": ["x^2 + y^2"]}}},
                "morphisms": {"one": {"source": "E", "identity": true}}}"#,
        )
        .unwrap();
        assert_eq!(s.milnor.mu(), 4);
        assert_eq!(s.factorization("E").unwrap().mf.rank(), 2);
        assert_eq!(s.endomorphisms("E").len(), 2);
        assert!(matches!(
            s.factorization("F"),
            Err(CliError::UnknownName(_))
        ));
    }

    #[test]
    fn rejects_non_isolated_potential() {
        let err =
            Session::from_json(r#"{"variables": ["x", "y"], "potential": "x^2"}"#).unwrap_err();
        assert!(matches!(err, CliError::Library { .. }));
    }

    #[test]
    fn compositions_resolve_in_any_order() {
        let s = Session::from_json(
            r#"{"variables": ["x"], "potential": "x^4",
                "factorizations": {"E": {"koszul": {"a": ["x^2"], "b": ["x^2"]}}},
                "morphisms": {
                    "a": {"source": "E", "compose": ["b", "b"]},
                    "b": {"source": "E", "parity": 1, "blocks": [[["1"]], [["-1"]]]}
                }}"#,
        )
        .unwrap();
        assert_eq!(s.morphism("a").unwrap().morphism.parity, 0);
    }

    #[test]
    fn group_and_action() {
        let s = Session::from_json(
            r#"{"variables": ["x"], "potential": "x^3",
                "group": {"cyclotomic_order": 3, "generators": [["z"]]},
                "factorizations": {
                    "E": {"koszul": {"a": ["x"], "b": ["x^2"]}, "rho": {"gen0": [["z", "0"], ["0", "1"]]}}
                }}"#,
        )
        .unwrap();
        assert_eq!(s.group().unwrap().len(), 3);
        assert!(s.equivariant("E").is_ok());
        let bad = Session::from_json(
            r#"{"variables": ["x"], "potential": "x^3",
                "group": {"cyclotomic_order": 3, "generators": [["z"]]},
                "factorizations": {"E": {"koszul": {"a": ["x"], "b": ["x^2"]}, "rho": {"gen0": [["1", "0"], ["0", "1"]]}}}}"#,
        );
        assert!(bad.is_err());
    }
}
