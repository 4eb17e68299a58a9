//! Definition files, canonical saving, result documents and the on-disk
//! product cache.

mod cache;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

pub use cache::ProductCache;

use crate::basis::BasisId;
use crate::canonical::{canonical_json, sha256_hex};
use crate::module::{check_module_axioms, check_module_dimension, BasedModule, ModuleSpec};
use crate::ring::{check_dimension, check_ring_axioms, BasedRing, DimValue, ExplicitRingSpec, RingExpr};
use crate::subring::{verify_certificate, verify_subring, DivisibilityCertificate, EmbeddingMap, SubringEmbedding};
use crate::torsion::{Census, EnumerationBudget};
use crate::verdict::{Verdict, Witness};

/// Depth used to validate loaded objects unless told otherwise.
pub const DEFAULT_VALIDATION_DEPTH: usize = 4;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {source}")]
    Build { path: PathBuf, source: crate::Error },
    #[error("{path}: expected a {expected} definition, found {found}")]
    WrongKind { path: PathBuf, expected: &'static str, found: &'static str },
    #[error("{path} failed validation: {witness}")]
    Validation { path: PathBuf, witness: Witness },
    #[error("reference cycle through {0}")]
    Cycle(PathBuf),
}

/// A ring given inline as a construction expression, or as the path of
/// another definition file (relative to the referring file).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RingRef {
    Path(String),
    Inline(RingExpr),
}

impl<'de> Deserialize<'de> for RingRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(RingRef::Path(s)),
            v => serde_json::from_value(v).map(RingRef::Inline).map_err(D::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingBody {
    pub sub: RingRef,
    pub ambient: RingRef,
    pub map: EmbeddingMap,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum EmbeddingRef {
    Path(String),
    Inline(Box<EmbeddingBody>),
}

impl<'de> Deserialize<'de> for EmbeddingRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(EmbeddingRef::Path(s)),
            v => serde_json::from_value(v).map(|b| EmbeddingRef::Inline(Box::new(b))).map_err(D::Error::custom),
        }
    }
}

type Triples<T> = Vec<(BasisId, BasisId, BTreeMap<BasisId, T>)>;

/// The on-disk schema. Products with the unit are implied; anything else
/// that is not listed is an error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DefinitionFile {
    ExplicitRing {
        basis: Vec<BasisId>,
        unit: BasisId,
        conj: BTreeMap<BasisId, BasisId>,
        dim: BTreeMap<BasisId, DimValue>,
        fusion: Triples<i64>,
    },
    Construct {
        expr: RingExpr,
    },
    Module {
        ring: RingRef,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        standard: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<Vec<BasisId>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        action: Option<Triples<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<BTreeMap<BasisId, DimValue>>,
    },
    Embedding {
        sub: RingRef,
        ambient: RingRef,
        map: EmbeddingMap,
    },
    Certificate {
        embedding: EmbeddingRef,
        verified_depth: usize,
        representatives: Vec<BasisId>,
        /// `(i, t, s)` with `i = s ⊗ l_t`.
        factorization: Vec<(BasisId, usize, BasisId)>,
    },
    Census {
        ring: RingRef,
        budget: EnumerationBudget,
        complete: bool,
        modules: Vec<ModuleSpec>,
    },
}

impl DefinitionFile {
    pub fn kind(&self) -> &'static str {
        match self {
            DefinitionFile::ExplicitRing { .. } => "explicit_ring",
            DefinitionFile::Construct { .. } => "construct",
            DefinitionFile::Module { .. } => "module",
            DefinitionFile::Embedding { .. } => "embedding",
            DefinitionFile::Certificate { .. } => "certificate",
            DefinitionFile::Census { .. } => "census",
        }
    }

    /// Parses a definition. A bare construction expression (an object with
    /// a top-level `"construct"` and no `"kind"`) is accepted as a
    /// `construct` definition.
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        if v.get("kind").is_none() && v.get("construct").is_some() {
            return Ok(DefinitionFile::Construct { expr: serde_json::from_value(v)? });
        }
        serde_json::from_value(v)
    }
}

/// A census read back from disk.
#[derive(Clone, Debug)]
pub struct LoadedCensus {
    pub ring: BasedRing,
    pub budget: EnumerationBudget,
    pub complete: bool,
    pub modules: Vec<BasedModule>,
}

/// Any object a definition file can describe.
#[derive(Clone, Debug)]
pub enum Loaded {
    Ring(BasedRing),
    Module(BasedModule),
    Embedding(SubringEmbedding),
    Certificate(DivisibilityCertificate),
    Census(LoadedCensus),
}

impl Loaded {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Ring(_) => "ring",
            Loaded::Module(_) => "module",
            Loaded::Embedding(_) => "embedding",
            Loaded::Certificate(_) => "certificate",
            Loaded::Census(_) => "census",
        }
    }

    /// Every ring this object refers to, outermost first.
    pub fn rings(&self) -> Vec<BasedRing> {
        match self {
            Loaded::Ring(r) => vec![r.clone()],
            Loaded::Module(m) => vec![m.ring().clone()],
            Loaded::Embedding(e) => vec![e.ambient().clone(), e.sub().clone()],
            Loaded::Certificate(c) => vec![c.embedding().ambient().clone(), c.embedding().sub().clone()],
            Loaded::Census(c) => vec![c.ring.clone()],
        }
    }
}

struct Loader {
    stack: Vec<PathBuf>,
}

impl Loader {
    fn read(&mut self, path: &Path) -> Result<DefinitionFile, LoadError> {
        let text = fs::read_to_string(path).map_err(|source| LoadError::Read { path: path.to_owned(), source })?;
        DefinitionFile::from_json(&text).map_err(|source| LoadError::Parse { path: path.to_owned(), source })
    }

    fn resolve(base: &Path, rel: &str) -> PathBuf {
        base.parent().unwrap_or(Path::new(".")).join(rel)
    }

    fn enter(&mut self, path: PathBuf) -> Result<(), LoadError> {
        let key = path.canonicalize().unwrap_or_else(|_| path.clone());
        if self.stack.contains(&key) {
            return Err(LoadError::Cycle(path));
        }
        self.stack.push(key);
        Ok(())
    }

    fn ring_ref(&mut self, base: &Path, r: &RingRef) -> Result<BasedRing, LoadError> {
        match r {
            RingRef::Inline(expr) => expr.build().map_err(|source| LoadError::Build { path: base.to_owned(), source }),
            RingRef::Path(rel) => {
                let path = Self::resolve(base, rel);
                match self.file(&path)? {
                    Loaded::Ring(ring) => Ok(ring),
                    other => Err(LoadError::WrongKind { path, expected: "ring", found: other.kind() }),
                }
            }
        }
    }

    fn embedding_ref(&mut self, base: &Path, r: &EmbeddingRef) -> Result<SubringEmbedding, LoadError> {
        match r {
            EmbeddingRef::Inline(body) => Ok(SubringEmbedding::new(
                self.ring_ref(base, &body.sub)?,
                self.ring_ref(base, &body.ambient)?,
                body.map.clone(),
            )),
            EmbeddingRef::Path(rel) => {
                let path = Self::resolve(base, rel);
                match self.file(&path)? {
                    Loaded::Embedding(e) => Ok(e),
                    other => Err(LoadError::WrongKind { path, expected: "embedding", found: other.kind() }),
                }
            }
        }
    }

    fn file(&mut self, path: &Path) -> Result<Loaded, LoadError> {
        self.enter(path.to_owned())?;
        let def = self.read(path)?;
        let out = self.definition(path, &def);
        self.stack.pop();
        out
    }

    fn definition(&mut self, path: &Path, def: &DefinitionFile) -> Result<Loaded, LoadError> {
        let build = |source| LoadError::Build { path: path.to_owned(), source };
        Ok(match def {
            DefinitionFile::ExplicitRing { basis, unit, conj, dim, fusion } => {
                let spec = ExplicitRingSpec {
                    basis: basis.clone(),
                    unit: unit.clone(),
                    conj: conj.clone(),
                    dim: dim.clone(),
                    fusion: fusion.clone(),
                };
                Loaded::Ring(RingExpr::Explicit { ring: spec }.build().map_err(build)?)
            }
            DefinitionFile::Construct { expr } => Loaded::Ring(expr.build().map_err(build)?),
            DefinitionFile::Module { ring, standard, basis, action, dim } => {
                let ring = self.ring_ref(path, ring)?;
                let spec =
                    ModuleSpec { standard: *standard, basis: basis.clone(), action: action.clone(), dim: dim.clone() };
                Loaded::Module(spec.build(&ring).map_err(build)?)
            }
            DefinitionFile::Embedding { sub, ambient, map } => Loaded::Embedding(SubringEmbedding::new(
                self.ring_ref(path, sub)?,
                self.ring_ref(path, ambient)?,
                map.clone(),
            )),
            DefinitionFile::Certificate { embedding, verified_depth, representatives, factorization } => {
                let e = self.embedding_ref(path, embedding)?;
                let mut table = BTreeMap::new();
                for (i, t, s) in factorization {
                    if table.insert(i.clone(), (*t, s.clone())).is_some() {
                        return Err(build(crate::error::invalid(format!("`{i}` is factored twice"))));
                    }
                }
                Loaded::Certificate(DivisibilityCertificate::new(e, representatives.clone(), table, *verified_depth))
            }
            DefinitionFile::Census { ring, budget, complete, modules } => {
                let ring = self.ring_ref(path, ring)?;
                let modules = modules.iter().map(|m| m.build(&ring)).collect::<crate::Result<_>>().map_err(build)?;
                Loaded::Census(LoadedCensus { ring, budget: budget.clone(), complete: *complete, modules })
            }
        })
    }
}

/// Reads a definition file and builds the object, resolving references,
/// without running the validation checks.
pub fn load_unchecked(path: impl AsRef<Path>) -> Result<Loaded, LoadError> {
    Loader { stack: Vec::new() }.file(path.as_ref())
}

/// Runs the checks matching the object's kind at `depth`.
pub fn validate(obj: &Loaded, depth: usize) -> crate::Result<Verdict> {
    Ok(match obj {
        Loaded::Ring(r) => check_ring_axioms(r, depth)?.and(check_dimension(r, depth)?),
        Loaded::Module(m) => module_verdict(m, depth)?,
        Loaded::Embedding(e) => verify_subring(e, depth)?,
        Loaded::Certificate(c) => verify_certificate(c, depth.min(c.verified_depth()))?,
        Loaded::Census(c) => {
            let mut v = check_ring_axioms(&c.ring, depth)?;
            for m in &c.modules {
                v = v.and(module_verdict(m, depth)?);
            }
            v
        }
    })
}

fn module_verdict(m: &BasedModule, depth: usize) -> crate::Result<Verdict> {
    let v = check_module_axioms(m, depth)?;
    Ok(if m.dim_function().is_some() { v.and(check_module_dimension(m, depth)?) } else { v })
}

/// Loads and validates at [`DEFAULT_VALIDATION_DEPTH`]; a failed check is
/// reported as [`LoadError::Validation`] with its witness.
pub fn load(path: impl AsRef<Path>) -> Result<Loaded, LoadError> {
    load_with_depth(path, DEFAULT_VALIDATION_DEPTH)
}

pub fn load_with_depth(path: impl AsRef<Path>, depth: usize) -> Result<Loaded, LoadError> {
    let path = path.as_ref();
    let obj = load_unchecked(path)?;
    match validate(&obj, depth).map_err(|source| LoadError::Build { path: path.to_owned(), source })? {
        Verdict::Fails(witness) => Err(LoadError::Validation { path: path.to_owned(), witness }),
        _ => Ok(obj),
    }
}

fn ring_definition(r: &BasedRing) -> DefinitionFile {
    match r.expr() {
        RingExpr::Explicit { ring } => DefinitionFile::ExplicitRing {
            basis: ring.basis.clone(),
            unit: ring.unit.clone(),
            conj: ring.conj.clone(),
            dim: ring.dim.clone(),
            fusion: ring.fusion.clone(),
        },
        expr => DefinitionFile::Construct { expr: expr.clone() },
    }
}

fn embedding_body(e: &SubringEmbedding) -> EmbeddingBody {
    EmbeddingBody {
        sub: RingRef::Inline(e.sub().expr().clone()),
        ambient: RingRef::Inline(e.ambient().expr().clone()),
        map: e.map().clone(),
    }
}

/// The self-contained definition of an object; references are inlined.
pub fn to_definition(obj: &Loaded) -> crate::Result<DefinitionFile> {
    Ok(match obj {
        Loaded::Ring(r) => ring_definition(r),
        Loaded::Module(m) => {
            let spec = m.to_spec()?;
            DefinitionFile::Module {
                ring: RingRef::Inline(m.ring().expr().clone()),
                standard: spec.standard,
                basis: spec.basis,
                action: spec.action,
                dim: spec.dim,
            }
        }
        Loaded::Embedding(e) => {
            let b = embedding_body(e);
            DefinitionFile::Embedding { sub: b.sub, ambient: b.ambient, map: b.map }
        }
        Loaded::Certificate(c) => DefinitionFile::Certificate {
            embedding: EmbeddingRef::Inline(Box::new(embedding_body(c.embedding()))),
            verified_depth: c.verified_depth(),
            representatives: c.representatives().to_vec(),
            factorization: c.factorization().iter().map(|(i, (t, s))| (i.clone(), *t, s.clone())).collect(),
        },
        Loaded::Census(c) => DefinitionFile::Census {
            ring: RingRef::Inline(c.ring.expr().clone()),
            budget: c.budget.clone(),
            complete: c.complete,
            modules: c.modules.iter().map(BasedModule::to_spec).collect::<crate::Result<_>>()?,
        },
    })
}

/// Canonical bytes of an object's definition (sorted keys, compact, one
/// trailing newline).
pub fn to_canonical_bytes(obj: &Loaded) -> crate::Result<Vec<u8>> {
    let mut s = canonical_json(&to_definition(obj)?);
    s.push('\n');
    Ok(s.into_bytes())
}

pub fn save(path: impl AsRef<Path>, obj: &Loaded) -> Result<(), LoadError> {
    let path = path.as_ref();
    let bytes = to_canonical_bytes(obj).map_err(|source| LoadError::Build { path: path.to_owned(), source })?;
    fs::write(path, bytes).map_err(|source| LoadError::Write { path: path.to_owned(), source })
}

impl LoadedCensus {
    pub fn from_census(ring: &BasedRing, budget: &EnumerationBudget, census: &Census) -> Self {
        LoadedCensus {
            ring: ring.clone(),
            budget: budget.clone(),
            complete: census.complete,
            modules: census.modules.clone(),
        }
    }
}

/// SHA-256 of a file's bytes.
pub fn file_hash(path: impl AsRef<Path>) -> std::io::Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}

/// Machine-readable outcome of one command. Holds no timing data, so
/// re-running a command on the same inputs reproduces it byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub command: String,
    /// Flags and positional values other than input files.
    pub parameters: BTreeMap<String, serde_json::Value>,
    /// Input path as given → SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    /// `Holds`, `Fails`, `UnknownWithinBound`, or absent for plain
    /// computations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    pub witnesses: Vec<Witness>,
    pub result: serde_json::Value,
    pub version: String,
}

impl ResultDocument {
    pub fn new(command: &str) -> Self {
        ResultDocument {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            inputs: BTreeMap::new(),
            verdict: None,
            bound: None,
            witnesses: Vec::new(),
            result: serde_json::Value::Null,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Records a verdict; a failure's witness goes first in `witnesses`.
    pub fn set_verdict(&mut self, v: &Verdict) {
        self.verdict = Some(v.name().to_string());
        match v {
            Verdict::Fails(w) => self.witnesses.insert(0, w.clone()),
            Verdict::UnknownWithinBound(d) => self.bound = Some(*d),
            Verdict::Holds => {}
        }
    }

    pub fn to_canonical_json(&self) -> String {
        canonical_json(self)
    }
}
