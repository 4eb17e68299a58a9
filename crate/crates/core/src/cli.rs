//! Command-line surface. [`run`] does all the work and returns the exit
//! code with the text for standard output and standard error, so the binary
//! stays a thin wrapper and the commands are testable in-process.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::basis::BasisId;
use crate::induction::{induce, restrict, restrict_and_decompose, standardize_from_induced};
use crate::io::{
    file_hash, load_unchecked, save, validate, LoadError, Loaded, LoadedCensus, ProductCache, ResultDocument,
    DEFAULT_VALIDATION_DEPTH,
};
use crate::module::{check_module_axioms, is_standard, is_torsion, BasedModule};
use crate::ring::BasedRing;
use crate::subring::{find_divisibility_certificate, DivisibilityCertificate, SubringEmbedding};
use crate::torsion::{enumerate_torsion_modules, is_torsion_free_finite, EnumerationBudget};
use crate::verdict::Verdict;

/// Environment variable naming the product cache directory.
pub const CACHE_ENV: &str = "FUSIONKIT_CACHE_DIR";

pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_COMPUTE: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "fusionkit", version, about = "Exact computations with fusion rings and based modules")]
struct Cli {
    /// Print the result document as canonical JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Directory of the persistent product cache (default: $FUSIONKIT_CACHE_DIR).
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Ignore the product cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a definition file and run its checks.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VALIDATION_DEPTH)]
        depth: usize,
    },
    /// Product of two basis elements.
    Product { ring: PathBuf, a: String, b: String },
    /// Search for a divisibility certificate of a subring.
    Divisible {
        ambient: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VALIDATION_DEPTH)]
        depth: usize,
        /// Write the certificate here when one is found.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Induce a module along a certified subring.
    Induce {
        module: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        /// Defaults to the certificate's verified depth.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Restrict a module to a subring.
    Restrict {
        module: PathBuf,
        #[arg(long)]
        embed: PathBuf,
        /// Split the restriction into connected summands.
        #[arg(long)]
        decompose: bool,
        #[arg(long, default_value_t = DEFAULT_VALIDATION_DEPTH)]
        depth: usize,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Decide whether a module is torsion (co-finite and connected).
    Torsion {
        module: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VALIDATION_DEPTH)]
        depth: usize,
    },
    /// Decide whether a module is isomorphic to the regular module.
    Standard {
        module: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VALIDATION_DEPTH)]
        depth: usize,
    },
    /// Enumerate torsion modules of a finite ring within a budget.
    Enumerate {
        ring: PathBuf,
        #[arg(long)]
        max_rank: usize,
        #[arg(long)]
        max_coeff: i64,
        /// Stop after this many milliseconds (the census is then marked incomplete).
        #[arg(long)]
        time_limit_ms: Option<u64>,
        /// Look for a non-standard torsion module instead of listing all.
        #[arg(long)]
        torsion_free: bool,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Recover n ≅ S from a standard induced module.
    Standardize {
        module: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
}

/// What a command printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(LoadError),
    Compute(crate::Error),
    /// A loaded file failed its checks; reported as a `Fails` document.
    Invalid(PathBuf, crate::Witness),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Validation { path, witness } => Failure::Invalid(path, witness),
            e => Failure::Input(e),
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Compute(e)
    }
}

struct Session {
    cache: Option<ProductCache>,
    rings: Vec<BasedRing>,
    doc: ResultDocument,
}

impl Session {
    fn param(&mut self, key: &str, v: impl Into<Value>) {
        self.doc.parameters.insert(key.to_string(), v.into());
    }

    /// Loads, seeds the product memo from the cache, then validates.
    fn load(&mut self, path: &Path) -> Result<Loaded, Failure> {
        let hash = file_hash(path).map_err(|source| LoadError::Read { path: path.to_owned(), source })?;
        self.doc.inputs.insert(path.display().to_string(), hash);
        let obj = load_unchecked(path)?;
        for r in obj.rings() {
            if let Some(c) = &self.cache {
                c.prefill(&r);
            }
            self.rings.push(r);
        }
        match validate(&obj, DEFAULT_VALIDATION_DEPTH)? {
            Verdict::Fails(w) => Err(Failure::Invalid(path.to_owned(), w)),
            _ => Ok(obj),
        }
    }

    fn ring(&mut self, path: &Path) -> Result<BasedRing, Failure> {
        match self.load(path)? {
            Loaded::Ring(r) => Ok(r),
            other => Err(wrong(path, "ring", &other)),
        }
    }

    fn module(&mut self, path: &Path) -> Result<BasedModule, Failure> {
        match self.load(path)? {
            Loaded::Module(m) => Ok(m),
            other => Err(wrong(path, "module", &other)),
        }
    }

    fn embedding(&mut self, path: &Path) -> Result<SubringEmbedding, Failure> {
        match self.load(path)? {
            Loaded::Embedding(e) => Ok(e),
            other => Err(wrong(path, "embedding", &other)),
        }
    }

    fn certificate(&mut self, path: &Path) -> Result<DivisibilityCertificate, Failure> {
        match self.load(path)? {
            Loaded::Certificate(c) => Ok(c),
            other => Err(wrong(path, "certificate", &other)),
        }
    }

    fn persist(&mut self) -> std::io::Result<()> {
        if let Some(c) = &mut self.cache {
            for r in &self.rings {
                c.record(r)?;
            }
        }
        Ok(())
    }
}

fn wrong(path: &Path, expected: &'static str, found: &Loaded) -> Failure {
    Failure::Input(LoadError::WrongKind { path: path.to_owned(), expected, found: found.kind() })
}

fn save_to(path: &Path, obj: &Loaded) -> Result<(), Failure> {
    save(path, obj).map_err(Failure::Input)
}

fn module_json(m: &BasedModule) -> Value {
    let mut v = json!({
        "rank": m.rank(),
        "basis": m.basis().map(|b| b.iter().map(BasisId::to_string).collect::<Vec<_>>()),
    });
    if m.is_finite() && m.ring().is_finite() {
        if let Ok(spec) = m.to_spec() {
            v["definition"] = serde_json::to_value(spec).expect("serializable");
        }
    }
    v
}

fn labels(v: &[BasisId]) -> Value {
    v.iter().map(BasisId::to_string).collect::<Vec<_>>().into()
}

fn map_json(m: &BTreeMap<BasisId, BasisId>) -> Value {
    m.iter().map(|(k, v)| (k.to_string(), Value::String(v.to_string()))).collect::<serde_json::Map<_, _>>().into()
}

fn execute(cmd: &Command, s: &mut Session) -> Result<i32, Failure> {
    match cmd {
        Command::Validate { file, depth } => {
            s.param("depth", *depth);
            let hash = file_hash(file).map_err(|source| LoadError::Read { path: file.clone(), source })?;
            s.doc.inputs.insert(file.display().to_string(), hash);
            let obj = load_unchecked(file)?;
            for r in obj.rings() {
                if let Some(c) = &s.cache {
                    c.prefill(&r);
                }
                s.rings.push(r);
            }
            let v = validate(&obj, *depth)?;
            let summary = match &obj {
                Loaded::Ring(r) => json!({
                    "kind": "ring",
                    "construct": r.expr().name(),
                    "fingerprint": r.fingerprint(),
                    "rank": r.finite_basis().map(<[BasisId]>::len),
                }),
                Loaded::Module(m) => json!({"kind": "module", "rank": m.rank()}),
                Loaded::Embedding(e) => json!({"kind": "embedding", "map": e.map()}),
                Loaded::Certificate(c) => json!({
                    "kind": "certificate",
                    "classes": c.representatives().len(),
                    "verified_depth": c.verified_depth(),
                }),
                Loaded::Census(c) => json!({"kind": "census", "modules": c.modules.len(), "complete": c.complete}),
            };
            s.doc.set_verdict(&v);
            s.doc.result = summary;
            Ok(v.exit_code())
        }
        Command::Product { ring, a, b } => {
            let r = s.ring(ring)?;
            s.param("a", a.as_str());
            s.param("b", b.as_str());
            let p = r.fuse(&BasisId::new(a.as_str()), &BasisId::new(b.as_str()))?;
            s.doc.result = json!({"product": p.to_string(), "terms": p});
            Ok(0)
        }
        Command::Divisible { ambient, sub, depth, save } => {
            s.param("depth", *depth);
            let r = s.ring(ambient)?;
            let e = s.embedding(sub)?;
            if !e.ambient().same_ring(&r) {
                return Err(Failure::Compute(crate::Error::Invalid(format!(
                    "the embedding's ambient ring is not {}",
                    ambient.display()
                ))));
            }
            let search = find_divisibility_certificate(&e, *depth)?;
            s.doc.witnesses = search.witnesses.clone();
            let classes: Vec<Value> = search.classes.classes.iter().map(|c| labels(c)).collect();
            let mut result = json!({"classes": classes});
            if let Some(c) = &search.certificate {
                result["representatives"] = labels(c.representatives());
                result["factorization"] = c
                    .factorization()
                    .iter()
                    .map(|(i, (t, s))| json!([i.to_string(), t, s.to_string()]))
                    .collect::<Vec<_>>()
                    .into();
                result["verified_depth"] = c.verified_depth().into();
                if let Some(path) = save {
                    save_to(path, &Loaded::Certificate(c.clone()))?;
                }
            }
            s.doc.result = result;
            let v = search.verdict;
            s.doc.set_verdict(&v);
            if let Verdict::Fails(w) = &v {
                // already listed among the rejected candidates
                if s.doc.witnesses[1..].contains(w) {
                    s.doc.witnesses.remove(0);
                }
            }
            Ok(v.exit_code())
        }
        Command::Induce { module, cert, depth, save } => {
            let n = s.module(module)?;
            let c = s.certificate(cert)?;
            let depth = depth.unwrap_or(c.verified_depth());
            s.param("depth", depth);
            let ind = induce(&n, &c, depth)?;
            let v = check_module_axioms(&ind.module, depth)?.and(is_torsion(&ind.module, depth)?);
            let mut result = module_json(&ind.module);
            result["classes"] = ind.classes.into();
            result["truncated"] = ind.truncated.into();
            if let Some(path) = save {
                save_to(path, &Loaded::Module(ind.module.clone()))?;
            }
            s.doc.set_verdict(&v);
            s.doc.result = result;
            Ok(v.exit_code())
        }
        Command::Restrict { module, embed, decompose, depth, save } => {
            s.param("depth", *depth);
            s.param("decompose", *decompose);
            let m = s.module(module)?;
            let e = s.embedding(embed)?;
            if *decompose {
                let d = restrict_and_decompose(&m, &e, *depth)?;
                let mut v = Verdict::Holds;
                let mut summands = Vec::new();
                for (k, part) in d.summands.iter().enumerate() {
                    v = v.and(d.verdicts[k].clone());
                    let mut j = module_json(part);
                    j["torsion"] = d.verdicts[k].name().into();
                    j["standard"] = is_standard(part, *depth)?.verdict.holds().into();
                    summands.push(j);
                }
                s.doc.set_verdict(&v);
                s.doc.result = json!({ "summands": summands });
                Ok(v.exit_code())
            } else {
                let r = restrict(&m, &e, *depth)?;
                let v = check_module_axioms(&r, *depth)?;
                if let Some(path) = save {
                    save_to(path, &Loaded::Module(r.clone()))?;
                }
                s.doc.set_verdict(&v);
                s.doc.result = module_json(&r);
                Ok(v.exit_code())
            }
        }
        Command::Torsion { module, depth } => {
            s.param("depth", *depth);
            let m = s.module(module)?;
            let v = is_torsion(&m, *depth)?;
            s.doc.set_verdict(&v);
            s.doc.result = json!({"rank": m.rank()});
            Ok(v.exit_code())
        }
        Command::Standard { module, depth } => {
            s.param("depth", *depth);
            let m = s.module(module)?;
            let st = is_standard(&m, *depth)?;
            s.doc.set_verdict(&st.verdict);
            s.doc.result = json!({"bijection": st.bijection.as_ref().map(map_json)});
            Ok(st.verdict.exit_code())
        }
        Command::Enumerate { ring, max_rank, max_coeff, time_limit_ms, torsion_free, save } => {
            s.param("max_rank", *max_rank);
            s.param("max_coeff", *max_coeff);
            if let Some(ms) = time_limit_ms {
                s.param("time_limit_ms", *ms);
            }
            let r = s.ring(ring)?;
            let mut budget = EnumerationBudget::new(*max_rank, *max_coeff)?;
            budget.time_limit_ms = *time_limit_ms;
            if *torsion_free {
                s.param("torsion_free", true);
                let tf = is_torsion_free_finite(&r, &budget)?;
                s.doc.set_verdict(&tf.verdict);
                s.doc.result = json!({
                    "bound": tf.bound,
                    "witness_module": tf.witness_module.as_ref().map(module_json),
                });
                return Ok(tf.verdict.exit_code());
            }
            let census = enumerate_torsion_modules(&r, &budget)?;
            let v = if census.complete { Verdict::Holds } else { Verdict::UnknownWithinBound(*max_rank) };
            if let Some(path) = save {
                save_to(path, &Loaded::Census(LoadedCensus::from_census(&r, &budget, &census)))?;
            }
            s.doc.set_verdict(&v);
            s.doc.result = json!({
                "classes": census.modules.len(),
                "complete": census.complete,
                "ranks": census.modules.iter().map(BasedModule::rank).collect::<Vec<_>>(),
                "modules": census.modules.iter().map(module_json).collect::<Vec<_>>(),
            });
            Ok(v.exit_code())
        }
        Command::Standardize { module, cert, depth } => {
            let n = s.module(module)?;
            let c = s.certificate(cert)?;
            let depth = depth.unwrap_or(c.verified_depth());
            s.param("depth", depth);
            let ind = induce(&n, &c, depth)?;
            let st = is_standard(&ind.module, depth)?;
            let Some(w) = st.bijection else {
                s.doc.set_verdict(&st.verdict);
                s.doc.result = json!({"induced_rank": ind.module.rank(), "bijection": Value::Null});
                return Ok(st.verdict.exit_code());
            };
            let out = standardize_from_induced(&n, &c, &w, depth)?;
            s.doc.set_verdict(&out.verdict);
            s.doc.result = json!({
                "induced_rank": ind.module.rank(),
                "induced_witness": map_json(&w),
                "bijection": out.bijection.as_ref().map(map_json),
            });
            Ok(out.verdict.exit_code())
        }
    }
}

fn render_human(doc: &ResultDocument) -> String {
    let mut out = String::new();
    if doc.command == "product" && doc.verdict.is_none() {
        if let Some(p) = doc.result.get("product").and_then(Value::as_str) {
            return format!("{p}\n");
        }
    }
    match (&doc.verdict, doc.bound) {
        (Some(v), Some(b)) => out.push_str(&format!("{}: {v} (bound {b})\n", doc.command)),
        (Some(v), None) => out.push_str(&format!("{}: {v}\n", doc.command)),
        (None, _) => out.push_str(&format!("{}: ok\n", doc.command)),
    }
    for w in &doc.witnesses {
        out.push_str(&format!("  witness {w}\n"));
    }
    if let Value::Object(map) = &doc.result {
        for (k, v) in map {
            match v {
                Value::Null => {}
                Value::String(s) if s.is_empty() => {}
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                v => out.push_str(&format!("{k}: {v}\n")),
            }
        }
    }
    out
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let cache_dir = if cli.no_cache {
        None
    } else {
        cli.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
    };
    let mut stderr = String::new();
    let cache = match cache_dir.map(ProductCache::open) {
        Some(Ok(c)) => Some(c),
        Some(Err(e)) => {
            stderr.push_str(&format!("warning: product cache unavailable: {e}\n"));
            None
        }
        None => None,
    };
    let name = match &cli.command {
        Command::Validate { .. } => "validate",
        Command::Product { .. } => "product",
        Command::Divisible { .. } => "divisible",
        Command::Induce { .. } => "induce",
        Command::Restrict { .. } => "restrict",
        Command::Torsion { .. } => "torsion",
        Command::Standard { .. } => "standard",
        Command::Enumerate { .. } => "enumerate",
        Command::Standardize { .. } => "standardize",
    };
    let mut session = Session { cache, rings: Vec::new(), doc: ResultDocument::new(name) };
    let outcome = execute(&cli.command, &mut session);
    if let Err(e) = session.persist() {
        stderr.push_str(&format!("warning: could not update the product cache: {e}\n"));
    }
    let code = match outcome {
        Ok(code) => code,
        Err(Failure::Invalid(path, w)) => {
            session.doc.parameters.insert("invalid_input".into(), path.display().to_string().into());
            session.doc.set_verdict(&Verdict::Fails(w));
            1
        }
        Err(Failure::Input(e)) => {
            stderr.push_str(&format!("error: {e}\n"));
            return CliOutput { code: EXIT_INPUT, stdout: String::new(), stderr };
        }
        Err(Failure::Compute(e)) => {
            stderr.push_str(&format!("error: {e}\n"));
            return CliOutput { code: EXIT_COMPUTE, stdout: String::new(), stderr };
        }
    };
    let stdout = if cli.json {
        let mut s = session.doc.to_canonical_json();
        s.push('\n');
        s
    } else {
        render_human(&session.doc)
    };
    CliOutput { code, stdout, stderr }
}
