//! JSON file formats. Every index in a file is 1-based; rationals are strings
//! `"p/q"` or `"p"`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::NLieAlgebra;
use crate::cochain::{Cochain, CochainSpace};
use crate::deformation::{DeformedAlgebra, DeformedMorphism, FormalAutomorphism};
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Matrix};
use crate::morphism::Morphism;
use crate::rational::Rational;
use crate::triple::CochainTriple;
use crate::wedge::is_strictly_increasing;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub arity: usize,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub args: Vec<usize>,
    /// Keys are 1-based basis indices or basis names.
    pub value: BTreeMap<String, Rational>,
}

/// A path (relative to the referring file) or an inline algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(String),
    Inline(Box<AlgebraFile>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: AlgebraRef,
    pub target: AlgebraRef,
    pub matrix: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainFile {
    pub degree: usize,
    /// Needed only for standalone cochain files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<AlgebraRef>,
    /// `"self"` or the value algebra.
    pub target: AlgebraRef,
    #[serde(default)]
    pub entries: Vec<CochainEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainEntry {
    #[serde(default)]
    pub blocks: Vec<Vec<usize>>,
    pub last: Vec<usize>,
    pub target_index: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationFile {
    pub source: AlgebraRef,
    pub target: AlgebraRef,
    pub order: usize,
    #[serde(default)]
    pub source_terms: Vec<CochainFile>,
    #[serde(default)]
    pub target_terms: Vec<CochainFile>,
    pub morphism_terms: Vec<Vec<Vec<Rational>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismFile {
    pub dimension: usize,
    pub order: usize,
    #[serde(default)]
    pub terms: Vec<Vec<Vec<Rational>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleFile {
    pub degree: usize,
    pub c1: CochainFile,
    pub c2: CochainFile,
    #[serde(default)]
    pub c3: Option<CochainFile>,
}

const SELF_TARGET: &str = "self";

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

// ---- algebras -------------------------------------------------------------

pub fn algebra_from_file(f: &AlgebraFile) -> Result<NLieAlgebra> {
    let d = f.dimension;
    let names = match &f.basis {
        Some(b) => b.clone(),
        None => NLieAlgebra::default_basis_names(d),
    };
    if names.len() != d {
        return Err(parse_err(format!(
            "algebra {:?}: {} basis names for dimension {d}",
            f.name,
            names.len()
        )));
    }
    let mut structure = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for entry in &f.brackets {
        if entry.args.len() != f.arity {
            return Err(parse_err(format!(
                "algebra {:?}: bracket {:?} has {} arguments, arity is {}",
                f.name,
                entry.args,
                entry.args.len(),
                f.arity
            )));
        }
        if !is_strictly_increasing(&entry.args) {
            return Err(parse_err(format!(
                "algebra {:?}: bracket arguments {:?} are not strictly increasing",
                f.name, entry.args
            )));
        }
        let key = to_zero_based(&entry.args, d)?;
        if !seen.insert(key.clone()) {
            return Err(parse_err(format!(
                "algebra {:?}: duplicate bracket {:?}",
                f.name, entry.args
            )));
        }
        let mut v = zero_vector(d);
        for (k, c) in &entry.value {
            let i = resolve_basis_key(k, &names)?;
            v[i] = c.clone();
        }
        structure.insert(key, v);
    }
    NLieAlgebra::new(f.name.clone(), f.arity, d, names, structure)
}

fn resolve_basis_key(key: &str, names: &[String]) -> Result<usize> {
    if let Ok(i) = key.trim().parse::<usize>() {
        if (1..=names.len()).contains(&i) {
            return Ok(i - 1);
        }
        return Err(Error::IndexOutOfRange {
            index: i,
            dim: names.len(),
        });
    }
    names
        .iter()
        .position(|n| n == key)
        .ok_or_else(|| parse_err(format!("unknown basis element {key:?}")))
}

fn to_zero_based(indices: &[usize], dim: usize) -> Result<Vec<usize>> {
    indices
        .iter()
        .map(|&i| {
            if (1..=dim).contains(&i) {
                Ok(i - 1)
            } else {
                Err(Error::IndexOutOfRange { index: i, dim })
            }
        })
        .collect()
}

fn to_one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}

pub fn algebra_to_file(alg: &NLieAlgebra) -> AlgebraFile {
    let brackets = alg
        .structure()
        .iter()
        .map(|(k, v)| BracketEntry {
            args: to_one_based(k),
            value: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| ((i + 1).to_string(), c.clone()))
                .collect(),
        })
        .collect();
    let basis = if alg.basis_names() == NLieAlgebra::default_basis_names(alg.dim()).as_slice() {
        None
    } else {
        Some(alg.basis_names().to_vec())
    };
    AlgebraFile {
        name: alg.name().to_string(),
        arity: alg.arity(),
        dimension: alg.dim(),
        basis,
        brackets,
    }
}

pub fn resolve_algebra(r: &AlgebraRef, dir: &Path) -> Result<Arc<NLieAlgebra>> {
    match r {
        AlgebraRef::Inline(f) => Ok(Arc::new(algebra_from_file(f)?)),
        AlgebraRef::Path(p) => load_algebra(&dir.join(p)).map(Arc::new),
    }
}

pub fn load_algebra(path: &Path) -> Result<NLieAlgebra> {
    algebra_from_file(&read_json(path)?)
}

pub fn inline(alg: &NLieAlgebra) -> AlgebraRef {
    AlgebraRef::Inline(Box::new(algebra_to_file(alg)))
}

// ---- matrices and morphisms ----------------------------------------------

pub fn matrix_from_rows(rows: &[Vec<Rational>], shape: (usize, usize)) -> Result<Matrix> {
    if rows.len() != shape.0 {
        return Err(parse_err(format!(
            "matrix has {} rows, expected {}",
            rows.len(),
            shape.0
        )));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != shape.1) {
        return Err(parse_err(format!(
            "matrix row has {} entries, expected {}",
            r.len(),
            shape.1
        )));
    }
    Matrix::from_rows(rows.to_vec())
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<Rational>> {
    m.to_rows()
}

pub fn morphism_from_file(f: &MorphismFile, dir: &Path) -> Result<Morphism> {
    let source = resolve_algebra(&f.source, dir)?;
    let target = resolve_algebra(&f.target, dir)?;
    let m = matrix_from_rows(&f.matrix, (target.dim(), source.dim()))?;
    Morphism::new(source, target, m)
}

pub fn morphism_to_file(phi: &Morphism) -> MorphismFile {
    MorphismFile {
        name: None,
        source: inline(phi.source()),
        target: inline(phi.target()),
        matrix: matrix_to_rows(phi.matrix()),
    }
}

pub fn load_morphism(path: &Path) -> Result<Morphism> {
    morphism_from_file(&read_json(path)?, &base_dir(path))
}

// ---- cochains -------------------------------------------------------------

/// Reads entries into a cochain of the given space.
pub fn cochain_from_entries(space: CochainSpace, entries: &[CochainEntry]) -> Result<Cochain> {
    let mut coeffs = zero_vector(space.dim());
    let d = space.source_dim();
    for e in entries {
        for b in e.blocks.iter().chain(std::iter::once(&e.last)) {
            if !is_strictly_increasing(b) {
                return Err(parse_err(format!(
                    "cochain entry indices {b:?} are not strictly increasing"
                )));
            }
        }
        let blocks: Vec<Vec<usize>> = e
            .blocks
            .iter()
            .map(|b| to_zero_based(b, d))
            .collect::<Result<_>>()?;
        let last = to_zero_based(&e.last, d)?;
        let dom = space.domain_index(&blocks, &last).ok_or_else(|| {
            parse_err(format!(
                "cochain entry {:?}/{:?} does not fit degree {} (arity {})",
                e.blocks,
                e.last,
                space.degree(),
                space.arity()
            ))
        })?;
        if !(1..=space.target_dim()).contains(&e.target_index) {
            return Err(Error::IndexOutOfRange {
                index: e.target_index,
                dim: space.target_dim(),
            });
        }
        coeffs[dom * space.target_dim() + e.target_index - 1] += &e.value;
    }
    Cochain::from_coeffs(space, coeffs)
}

pub fn cochain_entries(c: &Cochain) -> Vec<CochainEntry> {
    c.entries()
        .into_iter()
        .map(|(el, t, v)| CochainEntry {
            blocks: el.blocks.iter().map(|b| to_one_based(b)).collect(),
            last: to_one_based(&el.last),
            target_index: t + 1,
            value: v,
        })
        .collect()
}

/// Parses a cochain whose source is `source`; a non-`"self"` target is
/// resolved unless `target` is supplied.
pub fn cochain_from_file(
    f: &CochainFile,
    source: &NLieAlgebra,
    target: Option<&NLieAlgebra>,
    dir: &Path,
) -> Result<Cochain> {
    let target_dim = match (&f.target, target) {
        (AlgebraRef::Path(p), _) if p == SELF_TARGET => source.dim(),
        (_, Some(t)) => t.dim(),
        (r, None) => resolve_algebra(r, dir)?.dim(),
    };
    let space = CochainSpace::new(f.degree, source.arity(), source.dim(), target_dim);
    cochain_from_entries(space, &f.entries)
}

pub fn cochain_to_file(c: &Cochain, source: Option<AlgebraRef>, target: AlgebraRef) -> CochainFile {
    CochainFile {
        degree: c.degree(),
        source,
        target,
        entries: cochain_entries(c),
    }
}

pub fn self_target() -> AlgebraRef {
    AlgebraRef::Path(SELF_TARGET.into())
}

/// A standalone cochain file; it must name its source algebra.
pub fn load_cochain(path: &Path) -> Result<(Arc<NLieAlgebra>, Cochain)> {
    let f: CochainFile = read_json(path)?;
    let dir = base_dir(path);
    let source = f
        .source
        .as_ref()
        .ok_or_else(|| parse_err("standalone cochain files need a \"source\" algebra"))?;
    let source = resolve_algebra(source, &dir)?;
    let c = cochain_from_file(&f, &source, None, &dir)?;
    Ok((source, c))
}

// ---- deformations and automorphisms --------------------------------------

pub fn deformation_from_file(f: &DeformationFile, dir: &Path) -> Result<DeformedMorphism> {
    let source = resolve_algebra(&f.source, dir)?;
    let target = resolve_algebra(&f.target, dir)?;
    let k = f.order;
    if f.source_terms.len() > k || f.target_terms.len() > k || f.morphism_terms.len() != k + 1 {
        return Err(Error::OrderMismatch(format!(
            "order {k} needs at most {k} bracket terms per algebra and exactly {} morphism terms",
            k + 1
        )));
    }
    let read_terms = |terms: &[CochainFile], alg: &NLieAlgebra| -> Result<Vec<Cochain>> {
        let mut out = Vec::with_capacity(k);
        for t in terms {
            if t.degree != 1 {
                return Err(Error::DegreeMismatch {
                    expected: 1,
                    found: t.degree,
                });
            }
            out.push(cochain_from_file(t, alg, Some(alg), dir)?);
        }
        while out.len() < k {
            out.push(Cochain::zero(CochainSpace::over(alg, alg, 1)));
        }
        Ok(out)
    };
    let src_terms = read_terms(&f.source_terms, &source)?;
    let tgt_terms = read_terms(&f.target_terms, &target)?;
    let phi_terms = f
        .morphism_terms
        .iter()
        .map(|m| matrix_from_rows(m, (target.dim(), source.dim())))
        .collect::<Result<Vec<_>>>()?;
    DeformedMorphism::new(
        DeformedAlgebra::new(source, src_terms)?,
        DeformedAlgebra::new(target, tgt_terms)?,
        phi_terms,
    )
}

pub fn deformation_to_file(dm: &DeformedMorphism) -> DeformationFile {
    let terms = |da: &DeformedAlgebra| -> Vec<CochainFile> {
        da.terms()
            .iter()
            .map(|c| cochain_to_file(c, None, self_target()))
            .collect()
    };
    DeformationFile {
        source: inline(dm.source().base()),
        target: inline(dm.target().base()),
        order: dm.order(),
        source_terms: terms(dm.source()),
        target_terms: terms(dm.target()),
        morphism_terms: dm.phi_terms().iter().map(matrix_to_rows).collect(),
    }
}

pub fn load_deformation(path: &Path) -> Result<DeformedMorphism> {
    deformation_from_file(&read_json(path)?, &base_dir(path))
}

pub fn automorphism_from_file(f: &AutomorphismFile) -> Result<FormalAutomorphism> {
    if f.terms.len() > f.order {
        return Err(Error::OrderMismatch(format!(
            "{} terms given for order {}",
            f.terms.len(),
            f.order
        )));
    }
    let d = f.dimension;
    let mut terms = f
        .terms
        .iter()
        .map(|m| matrix_from_rows(m, (d, d)))
        .collect::<Result<Vec<_>>>()?;
    terms.resize(f.order, Matrix::zeros(d, d));
    FormalAutomorphism::new(d, terms)
}

pub fn automorphism_to_file(psi: &FormalAutomorphism) -> AutomorphismFile {
    AutomorphismFile {
        dimension: psi.dim(),
        order: psi.order(),
        terms: psi.terms().iter().map(matrix_to_rows).collect(),
    }
}

pub fn load_automorphism(path: &Path) -> Result<FormalAutomorphism> {
    automorphism_from_file(&read_json(path)?)
}

// ---- triples ---------------------------------------------------------------

pub fn triple_to_file(t: &CochainTriple, phi: &Morphism) -> TripleFile {
    TripleFile {
        degree: t.degree,
        c1: cochain_to_file(&t.c1, None, self_target()),
        c2: cochain_to_file(&t.c2, None, self_target()),
        c3: t
            .c3
            .as_ref()
            .map(|c| cochain_to_file(c, None, inline(phi.target()))),
    }
}

pub fn triple_from_file(f: &TripleFile, phi: &Morphism) -> Result<CochainTriple> {
    let dir = Path::new("");
    let (src, tgt) = (phi.source(), phi.target());
    let c1 = cochain_from_file(&f.c1, src, Some(src), dir)?;
    let c2 = cochain_from_file(&f.c2, tgt, Some(tgt), dir)?;
    let c3 = match &f.c3 {
        Some(c) => Some(cochain_from_file(c, src, Some(tgt), dir)?),
        None => None,
    };
    if c1.degree() != f.degree {
        return Err(Error::DegreeMismatch {
            expected: f.degree,
            found: c1.degree(),
        });
    }
    CochainTriple::new(c1, c2, c3)
}

// ---- auto-detection -------------------------------------------------------

/// Any of the supported documents.
#[derive(Clone, Debug)]
pub enum Document {
    Algebra(NLieAlgebra),
    Morphism(Morphism),
    Deformation(DeformedMorphism),
    Automorphism(FormalAutomorphism),
    Cochain(Arc<NLieAlgebra>, Cochain),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Algebra(_) => "algebra",
            Document::Morphism(_) => "morphism",
            Document::Deformation(_) => "deformation",
            Document::Automorphism(_) => "automorphism",
            Document::Cochain(..) => "cochain",
        }
    }
}

/// Loads a file and decides its kind from the top-level keys.
pub fn load_document(path: &Path) -> Result<Document> {
    let value: serde_json::Value = read_json(path)?;
    let obj = value
        .as_object()
        .ok_or_else(|| parse_err(format!("{}: expected a JSON object", path.display())))?;
    let has = |k: &str| obj.contains_key(k);
    let dir = base_dir(path);
    let parse = |what: &str| parse_err(format!("{}: not a valid {what} file", path.display()));
    if has("morphism_terms") {
        let f: DeformationFile = serde_json::from_value(value.clone())
            .map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
        return Ok(Document::Deformation(deformation_from_file(&f, &dir)?));
    }
    if has("matrix") {
        let f: MorphismFile = serde_json::from_value(value.clone())
            .map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
        return Ok(Document::Morphism(morphism_from_file(&f, &dir)?));
    }
    if has("arity") {
        let f: AlgebraFile = serde_json::from_value(value.clone())
            .map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
        return Ok(Document::Algebra(algebra_from_file(&f)?));
    }
    if has("entries") {
        let (s, c) = load_cochain(path)?;
        return Ok(Document::Cochain(s, c));
    }
    if has("dimension") && has("order") {
        let f: AutomorphismFile = serde_json::from_value(value.clone())
            .map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
        return Ok(Document::Automorphism(automorphism_from_file(&f)?));
    }
    Err(parse("algebra, morphism, deformation, automorphism or cochain"))
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}
