//! Command-line front end for `hodge-sigma`.
//!
//! Exit codes: 0 success or the check holds, 1 the check fails, 2 input error.

pub mod document;

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use clap::{Parser, Subcommand};
use hodge_sigma::batch::{round_trips, Strategy};
use hodge_sigma::generator::{random_mhs, random_sigma_operator, Flavor, GenProfile};
use hodge_sigma::hodge::{deligne_splitting, validate_mhs, MixedHodgeStructure};
use hodge_sigma::linalg::{LatticeIndex, Matrix};
use hodge_sigma::numeric::{sigma_eval, sigma_lambda_eval, ComplexFloat, TruncationParams};
use hodge_sigma::sigma::{
    certify_sigma_operator, check_pseudo_real, mhs_from_operator, operator_from_mhs, strongly_equivalent,
    weakly_equivalent, PseudoRealityMode, SigmaOperator,
};
use hodge_sigma::Error;
use serde_json::{json, Map, Value};

pub use document::{emit_document, parse_document, Document, SchemaError};

pub const SEED_ENV: &str = "HODGE_SIGMA_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hodge-sigma", version, about = "Mixed Hodge structures and σ-operators over Q(i)")]
struct Cli {
    /// Indented output instead of canonical single-line JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms of a mixed Hodge structure.
    ValidateMhs { input: String },
    /// Deligne splitting of a mixed Hodge structure.
    Split { input: String },
    /// The σ-operator of a mixed Hodge structure.
    Mhs2op { input: String },
    /// The mixed Hodge structure of a weakly pseudo-real σ-operator.
    Op2mhs { input: String },
    /// Certify that a matrix is a σ-operator.
    Certify { input: String },
    CheckPseudoreal {
        input: String,
        #[arg(long)]
        mode: PseudoRealityMode,
    },
    /// Compare two operators.
    Equiv {
        a: String,
        b: String,
        #[arg(long)]
        mode: PseudoRealityMode,
    },
    /// Generate a random instance; flavor is real, strong, weak_only or mhs.
    Gen {
        #[arg(long)]
        profile: String,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "strong")]
        flavor: String,
    },
    /// Run MHS -> operator -> MHS round trips on consecutive seeds.
    Roundtrip {
        #[arg(long)]
        profile: String,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Evaluate the truncated σ-product, or σ(z)/(z-λ) with --lattice.
    SigmaEval {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: (f64, f64),
        #[arg(long = "N", default_value_t = 40)]
        n: u32,
        #[arg(long, value_parser = parse_index, allow_hyphen_values = true)]
        lattice: Option<(i64, i64)>,
        #[arg(long, default_value_t = TruncationParams::default().target_tol)]
        tol: f64,
    },
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> Result<(T, T), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated values, got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad value {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad value {b:?}"))?;
    Ok((a, b))
}

fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    parse_pair(s)
}

fn parse_index(s: &str) -> Result<(i64, i64), String> {
    parse_pair(s)
}

/// What a command produced: a document for stdout and an exit code.
struct Outcome {
    code: i32,
    doc: Document,
}

/// Input problems; printed to stderr with exit code 2.
#[derive(Debug, thiserror::Error)]
enum InputError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Schema { path: String, source: SchemaError },
    #[error("{path}: expected a {expected} document, found {found}")]
    WrongKind {
        path: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("{0}")]
    Invalid(String),
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError::Invalid(e.to_string())
    }
}

type CmdResult = Result<Outcome, InputError>;

/// Parse `argv` (including the program name), run, and write to the given streams.
pub fn run<I, S>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let out: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let mut input = Inputs { stdin, stdin_used: false };
    match dispatch(cli.command, &mut input) {
        Ok(o) => {
            let text = if cli.pretty {
                document::emit_pretty(&o.doc)
            } else {
                emit_document(&o.doc)
            };
            let _ = writeln!(stdout, "{text}");
            o.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

struct Inputs<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Inputs<'_> {
    /// File contents, or standard input for `-` (at most once).
    fn read(&mut self, path: &str) -> Result<String, InputError> {
        let io = |source| InputError::Io {
            path: path.to_string(),
            source,
        };
        if path == "-" {
            if self.stdin_used {
                return Err(InputError::Invalid("standard input can only be read once".into()));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(io)?;
            return Ok(s);
        }
        fs::read_to_string(Path::new(path)).map_err(io)
    }

    fn document(&mut self, path: &str) -> Result<Document, InputError> {
        let text = self.read(path)?;
        parse_document(&text).map_err(|source| InputError::Schema {
            path: path.to_string(),
            source,
        })
    }

    fn mhs(&mut self, path: &str) -> Result<MixedHodgeStructure, InputError> {
        match self.document(path)? {
            Document::Mhs(m) => Ok(m),
            other => Err(wrong_kind(path, "mhs", &other)),
        }
    }

    /// A matrix or operator document.
    fn matrix(&mut self, path: &str) -> Result<Matrix, InputError> {
        match self.document(path)? {
            Document::Matrix(m) => Ok(m),
            Document::Operator(op) => Ok(op.matrix().clone()),
            other => Err(wrong_kind(path, "matrix or operator", &other)),
        }
    }
}

fn wrong_kind(path: &str, expected: &'static str, found: &Document) -> InputError {
    InputError::WrongKind {
        path: path.to_string(),
        expected,
        found: found.kind().name(),
    }
}

fn report(command: &str, summary: String, fields: Value) -> Document {
    let mut m = Map::new();
    m.insert("command".into(), command.into());
    m.insert("summary".into(), summary.into());
    if let Value::Object(extra) = fields {
        m.extend(extra);
    }
    Document::Report(m)
}

fn done(doc: Document) -> CmdResult {
    Ok(Outcome { code: EXIT_OK, doc })
}

fn failed(doc: Document) -> CmdResult {
    Ok(Outcome { code: EXIT_FAILED, doc })
}

fn index_json(idx: &LatticeIndex) -> Value {
    json!({ "p": idx.p, "q": idx.q })
}

fn mode_json(mode: PseudoRealityMode) -> Value {
    serde_json::to_value(mode).expect("mode serializes")
}

fn float_pair(z: ComplexFloat) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// Report for a matrix that is not a σ-operator, or `None` for other errors.
fn certification_failure(command: &str, e: &Error) -> Option<Document> {
    let Error::NotSigmaOperator(d) = e else {
        return None;
    };
    let mut summary = format!("NotSigmaOperator: deficit {}", d.deficit);
    if !d.defective.is_empty() {
        let at: Vec<String> = d.defective.iter().map(|i| format!("λ={}", i.embed())).collect();
        summary.push_str(&format!(" at {}", at.join(", ")));
    }
    let found: Vec<Value> = d
        .found
        .iter()
        .map(|(i, dim)| json!({ "p": i.p, "q": i.q, "dim": dim }))
        .collect();
    Some(report(
        command,
        summary,
        json!({
            "certified": false,
            "deficit": d.deficit,
            "defective": d.defective.iter().map(index_json).collect::<Vec<_>>(),
            "found": found,
        }),
    ))
}

/// Certify, turning a failed certificate into an exit-1 report.
fn certify_or_report(command: &str, m: &Matrix) -> Result<Result<SigmaOperator, Document>, InputError> {
    match certify_sigma_operator(m) {
        Ok(op) => Ok(Ok(op)),
        Err(e) => match certification_failure(command, &e) {
            Some(doc) => Ok(Err(doc)),
            None => Err(e.into()),
        },
    }
}

fn spectrum_text(op: &SigmaOperator) -> String {
    let parts: Vec<String> = op
        .spectrum()
        .iter()
        .map(|(i, s)| if s.dim() == 1 { i.to_string() } else { format!("{i}x{}", s.dim()) })
        .collect();
    parts.join(" ")
}

fn dispatch(command: Command, input: &mut Inputs) -> CmdResult {
    match command {
        Command::ValidateMhs { input: path } => validate(input.mhs(&path)?),
        Command::Split { input: path } => split(input.mhs(&path)?),
        Command::Mhs2op { input: path } => mhs2op(input.mhs(&path)?),
        Command::Op2mhs { input: path } => op2mhs(&input.matrix(&path)?),
        Command::Certify { input: path } => certify(&input.matrix(&path)?),
        Command::CheckPseudoreal { input: path, mode } => pseudo_real(&input.matrix(&path)?, mode),
        Command::Equiv { a, b, mode } => {
            let a = input.matrix(&a)?;
            let b = input.matrix(&b)?;
            equiv(&a, &b, mode)
        }
        Command::Gen { profile, seed, flavor } => {
            let p = read_profile(&input.read(&profile)?, seed)?;
            generate(&p, &flavor)
        }
        Command::Roundtrip { profile, seed, count } => {
            let p = read_profile(&input.read(&profile)?, seed)?;
            roundtrip(&p, count)
        }
        Command::SigmaEval { z, n, lattice, tol } => sigma(z, n, lattice, tol),
    }
}

fn validate(mhs: MixedHodgeStructure) -> CmdResult {
    let r = validate_mhs(mhs.weight(), mhs.hodge())?;
    let valid = r.passed();
    let summary = if valid {
        "valid mixed Hodge structure".to_string()
    } else {
        format!("invalid: {}", r.failures().join("; "))
    };
    let doc = report(
        "validate-mhs",
        summary,
        json!({ "valid": valid, "checks": serde_json::to_value(&r.checks).expect("checks serialize") }),
    );
    if valid {
        done(doc)
    } else {
        failed(doc)
    }
}

/// Validate, or produce the failing validation report.
fn validated(mhs: MixedHodgeStructure) -> Result<Result<MixedHodgeStructure, Outcome>, InputError> {
    match MixedHodgeStructure::validated(mhs.weight().clone(), mhs.hodge().clone()) {
        Ok(m) => Ok(Ok(m)),
        Err(Error::InvalidMhs(_)) => Ok(Err(validate(mhs)?)),
        Err(e) => Err(e.into()),
    }
}

fn split(mhs: MixedHodgeStructure) -> CmdResult {
    match validated(mhs)? {
        Ok(m) => done(Document::Bigrading(deligne_splitting(&m)?)),
        Err(o) => Ok(o),
    }
}

fn mhs2op(mhs: MixedHodgeStructure) -> CmdResult {
    match validated(mhs)? {
        Ok(m) => done(Document::Operator(operator_from_mhs(&m)?)),
        Err(o) => Ok(o),
    }
}

fn op2mhs(m: &Matrix) -> CmdResult {
    let op = match certify_or_report("op2mhs", m)? {
        Ok(op) => op,
        Err(doc) => return failed(doc),
    };
    match mhs_from_operator(&op) {
        Ok(r) => done(Document::Mhs(r.mhs)),
        Err(e @ Error::NotPseudoReal { .. }) | Err(e @ Error::NotRealWeight { .. }) | Err(e @ Error::InvalidMhs(_)) => {
            failed(report("op2mhs", e.to_string(), json!({ "error": e.to_string() })))
        }
        Err(e) => Err(e.into()),
    }
}

fn certify(m: &Matrix) -> CmdResult {
    let op = match certify_or_report("certify", m)? {
        Ok(op) => op,
        Err(doc) => return failed(doc),
    };
    let c = op.certificate();
    let eigenspaces: Vec<Value> = c
        .eigenspace_dims
        .iter()
        .map(|(i, d)| json!({ "p": i.p, "q": i.q, "dim": d }))
        .collect();
    let certificate = json!({
        "source": serde_json::to_value(c.source).expect("source serializes"),
        "gershgorin_radii": c.gershgorin_radii.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "candidates_examined": c.candidates_examined,
        "roots_found": c.roots_found,
        "eigenspaces": eigenspaces,
    });
    done(report(
        "certify",
        format!("sigma-operator with spectrum {}", spectrum_text(&op)),
        json!({ "certified": true, "certificate": certificate }),
    ))
}

fn pseudo_real(m: &Matrix, mode: PseudoRealityMode) -> CmdResult {
    let op = match certify_or_report("check-pseudoreal", m)? {
        Ok(op) => op,
        Err(doc) => return failed(doc),
    };
    let v = check_pseudo_real(&op, mode);
    let witnesses: Vec<Value> = v
        .witnesses
        .iter()
        .map(|(rs, pq)| json!([index_json(rs), index_json(pq)]))
        .collect();
    let summary = if v.holds {
        format!("{mode} pseudo-real")
    } else {
        let w: Vec<String> = v.witnesses.iter().map(|(rs, pq)| format!("({rs},{pq})")).collect();
        format!("not {mode} pseudo-real: witnesses {}", w.join(" "))
    };
    let doc = report(
        "check-pseudoreal",
        summary,
        json!({ "mode": mode_json(mode), "holds": v.holds, "witnesses": witnesses }),
    );
    if v.holds {
        done(doc)
    } else {
        failed(doc)
    }
}

fn equiv(a: &Matrix, b: &Matrix, mode: PseudoRealityMode) -> CmdResult {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(InputError::Invalid(format!(
            "operators have different sizes ({}x{} and {}x{})",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let a = match certify_or_report("equiv", a)? {
        Ok(op) => op,
        Err(doc) => return failed(doc),
    };
    let b = match certify_or_report("equiv", b)? {
        Ok(op) => op,
        Err(doc) => return failed(doc),
    };
    let holds = match mode {
        PseudoRealityMode::Weak => weakly_equivalent(&a, &b)?,
        PseudoRealityMode::Strong => strongly_equivalent(&a, &b)?,
    };
    let summary = if holds {
        format!("{mode} equivalent")
    } else {
        format!("not {mode} equivalent")
    };
    let doc = report("equiv", summary, json!({ "mode": mode_json(mode), "equivalent": holds }));
    if holds {
        done(doc)
    } else {
        failed(doc)
    }
}

/// `{"coefficient_bound": B, "dims": [{"p": .., "q": .., "dim": ..}, ...]}`; the bound defaults to 2.
fn read_profile(text: &str, seed: u64) -> Result<GenProfile, InputError> {
    let v: Value = serde_json::from_str(text).map_err(|e| InputError::Invalid(format!("profile: {e}")))?;
    let bad = |at: &str, what: &str| InputError::Invalid(format!("profile: {what} at {at}"));
    let obj = v.as_object().ok_or_else(|| bad("", "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| *k != "dims" && *k != "coefficient_bound") {
        return Err(bad(&format!("/{k}"), "unexpected key"));
    }
    let bound = match obj.get("coefficient_bound") {
        None => 2,
        Some(b) => b
            .as_u64()
            .and_then(|b| u32::try_from(b).ok())
            .ok_or_else(|| bad("/coefficient_bound", "expected a small positive integer"))?,
    };
    let dims = obj
        .get("dims")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("/dims", "expected an array"))?;
    let mut entries = Vec::new();
    for (k, d) in dims.iter().enumerate() {
        let get = |key: &str| d.get(key).and_then(Value::as_i64);
        match (get("p"), get("q"), d.get("dim").and_then(Value::as_u64)) {
            (Some(p), Some(q), Some(n)) => entries.push((LatticeIndex::new(p, q), n as usize)),
            _ => return Err(bad(&format!("/dims/{k}"), "expected integers p, q, dim")),
        }
    }
    Ok(GenProfile::new(entries, bound, seed)?)
}

fn generate(p: &GenProfile, flavor: &str) -> CmdResult {
    let result = if flavor == "mhs" {
        random_mhs(p).map(Document::Mhs)
    } else {
        let f: Flavor = flavor.parse().map_err(InputError::Invalid)?;
        random_sigma_operator(p, f).and_then(|m| Ok(Document::Operator(certify_sigma_operator(&m)?)))
    };
    match result {
        Ok(doc) => done(doc),
        Err(e @ Error::ExhaustedRetries { .. }) => {
            failed(report("gen", e.to_string(), json!({ "error": e.to_string(), "seed": p.seed() })))
        }
        Err(e) => Err(e.into()),
    }
}

fn roundtrip(p: &GenProfile, count: usize) -> CmdResult {
    let results = round_trips(p, count, Strategy::Parallel);
    let mut failures = Vec::new();
    for (k, r) in results.iter().enumerate() {
        let seed = p.seed().wrapping_add(k as u64);
        match r {
            Ok(rt) if rt.passed() => {}
            Ok(rt) => failures.push(serde_json::to_value(rt).expect("round trip serializes")),
            Err(e) => failures.push(json!({ "seed": seed, "error": e.to_string() })),
        }
    }
    let passed = count - failures.len();
    let doc = report(
        "roundtrip",
        format!("{passed}/{count} round trips exact"),
        json!({ "count": count, "passed": passed, "seed": p.seed(), "failures": failures }),
    );
    if failures.is_empty() {
        done(doc)
    } else {
        failed(doc)
    }
}

fn sigma(z: (f64, f64), n: u32, lattice: Option<(i64, i64)>, tol: f64) -> CmdResult {
    let params = TruncationParams::new(n, tol)?;
    let zc = ComplexFloat::new(z.0, z.1);
    let idx = lattice.map(|(p, q)| LatticeIndex::new(p, q));
    let result = match idx {
        Some(i) => sigma_lambda_eval(zc, i, &params),
        None => sigma_eval(zc, &params),
    };
    let base = json!({
        "z": float_pair(zc),
        "N": n,
        "lattice": idx.as_ref().map(index_json),
    });
    match result {
        Ok(v) => {
            let mut fields = base;
            fields["value"] = float_pair(v.value);
            fields["error_estimate"] = json!(v.error_estimate);
            done(report(
                "sigma-eval",
                format!("{:e}{:+e}i ± {:.1e}", v.value.re, v.value.im, v.error_estimate),
                fields,
            ))
        }
        Err(e @ Error::TruncationInsufficient { .. }) => {
            let mut fields = base;
            fields["error"] = json!(e.to_string());
            failed(report("sigma-eval", e.to_string(), fields))
        }
        Err(e) => Err(e.into()),
    }
}
