use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use latglue::arith::relevant_primes;
use latglue::aut::{check_containment, congruence_level, extend_automorphism, AutError};
use latglue::bianchi::{bianchi_index, ring_mod2, residue_class, BianchiError};
use latglue::genus::{genus_exists, oddity, oddity_formula_check, p_excess, padic_symbol, GenusError, GenusSpec};
use latglue::gluing::{embed_unimodular, glue, verify_raw, EmbedError, Embedding, EmbeddingFile, GluingError};
use latglue::lattice::{Lattice, LatticeError};
use latglue::matrix::IntMatrix;
use latglue::serial::{self, int_json, int_matrix_json, rat_matrix_json};

const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_EXHAUSTED: u8 = 4;
const EXIT_VERIFY: u8 = 5;

/// Unimodular embeddings of integral lattices, genus symbols, and level-2
/// congruence checks.
#[derive(Parser)]
#[command(name = "latglue", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants, discriminant group and local symbols of a lattice.
    Analyze { lattice: PathBuf },
    /// Embed a lattice in an odd unimodular lattice.
    Embed {
        lattice: PathBuf,
        /// Largest absolute Gram entry tried for the companion lattice.
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// Where to write the embedding file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute an embedding's certificate from its raw data.
    Verify { embedding: PathBuf },
    /// Decide whether a genus symbol is realized by some lattice.
    Genus {
        /// A spec such as "sig 3 0; det 7; 2: [1^+3]_1; 7: 1^+2 7^+1", or a file holding one.
        spec: String,
    },
    /// Extend a level-2 automorphism of L across an embedding.
    Extend {
        lattice: PathBuf,
        embedding: PathBuf,
        /// JSON file with an array of integer rows.
        automorphism: PathBuf,
        /// Entry bound for harvested automorphisms of K.
        #[arg(long, default_value_t = 2)]
        bound: u64,
    },
    /// Index of the level-2 congruence subgroup of PSL(2, O_d).
    Bianchi {
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        d: Option<u64>,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        range: Option<Vec<u64>>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        fail(EXIT_PARSE, e)
    }
}

impl From<GenusError> for Failure {
    fn from(e: GenusError) -> Self {
        match e {
            GenusError::Syntax(_) => fail(EXIT_PARSE, e),
            _ => fail(EXIT_PRECONDITION, e),
        }
    }
}

impl From<BianchiError> for Failure {
    fn from(e: BianchiError) -> Self {
        fail(EXIT_PRECONDITION, e)
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Self {
        let code = match &e {
            EmbedError::Search(GluingError::SearchExhausted { .. }) => EXIT_EXHAUSTED,
            EmbedError::Verify(_) => EXIT_VERIFY,
            EmbedError::Spec(_) | EmbedError::Search(_) | EmbedError::AntiIsometry(_) | EmbedError::Glue(_) => {
                EXIT_PRECONDITION
            }
        };
        fail(code, e)
    }
}

impl From<AutError> for Failure {
    fn from(e: AutError) -> Self {
        let code = match e {
            AutError::NoExtension => EXIT_EXHAUSTED,
            _ => EXIT_PRECONDITION,
        };
        fail(code, e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_lattice(path: &Path) -> Result<(Lattice, Option<String>), Failure> {
    let text = read(path)?;
    let file: latglue::lattice::LatticeFile =
        serde_json::from_str(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let name = file.name.clone();
    Ok((Lattice::new(file.gram)?, name))
}

fn load_embedding(path: &Path) -> Result<EmbeddingFile, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn analyze(path: &Path) -> Result<Value, Failure> {
    let (l, name) = load_lattice(path)?;
    let group = l.discriminant_group();
    let form = l.discriminant_form(&group);
    let (ssf, delta) = l.is_ssf();
    let mut symbols = Map::new();
    let mut excess = Map::new();
    for p in relevant_primes(l.det()) {
        let sym = padic_symbol(&l, p);
        symbols.insert(p.to_string(), json!(sym.to_string()));
        if p != 2 {
            excess.insert(p.to_string(), json!(p_excess(&sym)?));
        }
    }
    let check = oddity_formula_check(&l);
    let norms: Vec<String> = (0..form.len()).map(|i| serial::rat_to_string(form.norm(i))).collect();
    Ok(json!({
        "command": "analyze",
        "name": name,
        "dim": l.dim(),
        "det": int_json(l.det()),
        "signature": [l.signature().0, l.signature().1],
        "unimodular": l.is_unimodular(),
        "odd": l.is_odd(),
        "invariant_factors": group.factors().iter().map(int_json).collect::<Vec<_>>(),
        "discriminant_norms": norms,
        "delta": delta,
        "ssf": ssf,
        "symbols": symbols,
        "p_excess": excess,
        "oddity": oddity(&padic_symbol(&l, 2))?,
        "oddity_formula": {"lhs": check.lhs, "rhs": check.rhs, "holds": check.holds()},
    }))
}

fn embedding_report(e: &Embedding) -> Value {
    json!({
        "certificate": e.certificate,
        "passed": e.certificate.passed(),
        "m": e.m(),
        "glue_order": int_json(&e.glue_index),
        "K": int_matrix_json(e.k.gram()),
        "glue_generators": rat_matrix_json(&e.generators),
        "glued_det": int_json(e.glued.det()),
        "glued_signature": [e.glued.signature().0, e.glued.signature().1],
    })
}

fn embed(path: &Path, budget: u64, out: Option<&Path>) -> Result<Value, Failure> {
    let (l, _) = load_lattice(path)?;
    let e = embed_unimodular(&l, budget)?;
    let file = e.to_file();
    let mut report = embedding_report(&e);
    report["command"] = json!("embed");
    match out {
        Some(out) => {
            let text = serde_json::to_string_pretty(&file).expect("embedding serializes");
            fs::write(out, text + "\n").map_err(|err| fail(EXIT_PARSE, format!("{}: {err}", out.display())))?;
            report["written"] = json!(out.display().to_string());
        }
        None => report["embedding"] = serde_json::to_value(&file).expect("embedding serializes"),
    }
    Ok(report)
}

fn verify(path: &Path) -> Result<Value, Failure> {
    let file = load_embedding(path)?;
    let l = Lattice::new(file.l.gram.clone())?;
    let k = Lattice::new(file.k.gram.clone())?;
    let mut mismatches = Vec::new();
    let ambient = IntMatrix::block_diag(l.gram(), k.gram()).to_rat();
    let mut glued_det = None;
    let cert = match verify_raw(&l, &k, &file.glue_basis) {
        Ok(c) => Some(c),
        Err(e) => {
            mismatches.push(format!("glue_basis: {e}"));
            None
        }
    };
    if let Some(c) = &cert {
        if c != &file.certificate {
            mismatches.push("certificate: stored flags differ from recomputed ones".into());
        }
        if file.m != c.m {
            mismatches.push(format!("m: stored {} but K has dimension {}", file.m, c.m));
        }
        if file.glue_order != c.glue_order {
            mismatches.push(format!("glue_order: stored {} but recomputed {}", file.glue_order, c.glue_order));
        }
        let gram = &(&file.glue_basis * &ambient) * &file.glue_basis.transpose();
        glued_det = Some(gram.det());
        if gram != file.glued.gram.to_rat() {
            mismatches.push("glued.gram: does not match the glue basis".into());
        }
        if l.dim() + k.dim() != file.glue_generators.cols() {
            mismatches.push("glue_generators: wrong number of columns".into());
        }
    }
    let recomputed_ok = cert.as_ref().is_some_and(|c| c.passed());
    let failures: Vec<String> = cert
        .as_ref()
        .map(|c| c.failures())
        .unwrap_or_default()
        .into_iter()
        .map(|f| match (f, &glued_det) {
            ("unimodular", Some(d)) => format!("det: glued det is {d}, not ±1"),
            _ => f.to_string(),
        })
        .collect();
    let report = json!({
        "command": "verify",
        "certificate": cert,
        "glued_det": glued_det.as_ref().map(serial::rat_to_string),
        "failures": failures,
        "mismatches": mismatches,
        "passed": recomputed_ok && mismatches.is_empty(),
    });
    if recomputed_ok && mismatches.is_empty() {
        Ok(report)
    } else {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        let mut why = failures;
        why.extend(mismatches);
        Err(fail(EXIT_VERIFY, format!("verification failed: {}", why.join("; "))))
    }
}

fn genus(spec: &str) -> Result<Value, Failure> {
    let text = if Path::new(spec).is_file() {
        read(Path::new(spec))?
    } else {
        spec.to_string()
    };
    let spec = GenusSpec::parse(text.trim())?;
    let verdict = genus_exists(&spec)?;
    let violations: Vec<Value> = verdict
        .violations
        .iter()
        .map(|v| json!({"condition": v.condition.to_string(), "detail": v.detail}))
        .collect();
    Ok(json!({
        "command": "genus",
        "spec": spec.to_string(),
        "exists": verdict.exists(),
        "violations": violations,
    }))
}

fn embedding_from_file(file: &EmbeddingFile) -> Result<Embedding, Failure> {
    let l = Lattice::new(file.l.gram.clone())?;
    let k = Lattice::new(file.k.gram.clone())?;
    let e = glue(&l, &k, &file.glue_map).map_err(|e| fail(EXIT_VERIFY, format!("embedding file: {e}")))?;
    if e.glue_basis != file.glue_basis {
        return Err(fail(EXIT_VERIFY, "embedding file: glue_basis does not match the glue map"));
    }
    Ok(e)
}

fn extend(lattice: &Path, embedding: &Path, automorphism: &Path, bound: u64) -> Result<Value, Failure> {
    let (l, _) = load_lattice(lattice)?;
    let e = embedding_from_file(&load_embedding(embedding)?)?;
    if &l != &e.l {
        return Err(fail(EXIT_PRECONDITION, "lattice does not match the embedding's L"));
    }
    let text = read(automorphism)?;
    let rows: Vec<Vec<BigInt>> = {
        #[derive(serde::Deserialize)]
        struct Rows(#[serde(with = "serial::int_rows")] Vec<Vec<BigInt>>);
        serde_json::from_str::<Rows>(&text)
            .map_err(|err| fail(EXIT_PARSE, format!("{}: {err}", automorphism.display())))?
            .0
    };
    let g = IntMatrix::from_rows(&rows).map_err(|err| fail(EXIT_PARSE, err))?;
    if !congruence_level(&g, 2) && l.preserves(&g) {
        return Err(fail(EXIT_PRECONDITION, "automorphism is not level 2"));
    }
    let ext = extend_automorphism(&e, &g, bound)?;
    let verdict = check_containment(&e, &g, bound)?;
    let report = json!({
        "command": "extend",
        "h": int_matrix_json(&ext.h),
        "conjugated": rat_matrix_json(&ext.conjugated),
        "integral": verdict.integral,
        "preserves_gram": verdict.preserves_gram,
        "level_two": verdict.level_two,
        "passed": verdict.passed(),
    });
    if verdict.passed() {
        Ok(report)
    } else {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        Err(fail(EXIT_VERIFY, "extension is not a level-2 automorphism of the glued lattice"))
    }
}

fn bianchi(d: Option<u64>, range: Option<Vec<u64>>) -> Result<Value, Failure> {
    let entry = |d: u64| -> Result<Value, Failure> {
        let ring = ring_mod2(d)?;
        Ok(json!({
            "d": d,
            "class": residue_class(d),
            "ring": ring.to_string(),
            "index": bianchi_index(d)?,
        }))
    };
    let rows = match (d, range) {
        (Some(d), _) => vec![entry(d)?],
        (None, Some(r)) => (r[0]..=r[1])
            .filter(|&d| latglue::arith::is_squarefree(d))
            .map(entry)
            .collect::<Result<_, _>>()?,
        (None, None) => unreachable!("clap requires --d or --range"),
    };
    Ok(json!({"command": "bianchi", "rows": rows}))
}

fn run(cli: Cli) -> Result<Value, Failure> {
    match cli.command {
        Command::Analyze { lattice } => analyze(&lattice),
        Command::Embed { lattice, budget, out } => embed(&lattice, budget, out.as_deref()),
        Command::Verify { embedding } => verify(&embedding),
        Command::Genus { spec } => genus(&spec),
        Command::Extend {
            lattice,
            embedding,
            automorphism,
            bound,
        } => extend(&lattice, &embedding, &automorphism, bound),
        Command::Bianchi { d, range } => bianchi(d, range),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
