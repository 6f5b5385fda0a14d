use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use coxmodel::classification::{
    self, candidate, classify_group, d_even_nonexistence, known_model, replay_certificate, verify_with_oracle,
    CandidateStatus, Classification, ModelFamily, NonexistenceOutcome, PerfectModelCandidate,
};
use coxmodel::induction::DegenSplitPolicy;
use coxmodel::lr::{try_lr_coefficient, try_lr_expand};
use coxmodel::model_index::{EquivalenceRelation, ModelIndex};
use coxmodel::oracle::{self, cached_group, GroupSpec};
use coxmodel::partitions::Partition;
use coxmodel::CoxError;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "coxmodel", version, about = "Model triples and perfect models of Coxeter groups")]
struct Cli {
    /// Emit the JSON payload instead of the text table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Littlewood–Richardson coefficient, or the full expansion without --nu.
    Lr {
        #[arg(long, allow_hyphen_values = true)]
        lam: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long)]
        nu: Option<String>,
    },
    /// Character of a model index given as JSON.
    Char {
        #[arg(long)]
        index: String,
        /// Split degenerate constituents with the brute-force group.
        #[arg(long)]
        oracle: bool,
    },
    /// Check that a set of indices (JSON array) or `family:NAME:n` is a perfect model.
    Verify {
        #[arg(long)]
        model: String,
        #[arg(long)]
        oracle: bool,
    },
    /// Classify perfect models up to strong or full equivalence.
    Classify {
        #[arg(long = "type", value_enum, ignore_case = true)]
        ty: GroupKind,
        #[arg(long)]
        rank: u32,
        #[arg(long, value_enum, default_value = "strong")]
        relation: Relation,
        /// Compare the JSON payload with a committed table; exit 2 on drift.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Write the JSON payload to this path.
        #[arg(long)]
        write_golden: Option<PathBuf>,
    },
    /// Nonexistence certificate for even-rank type D.
    DEven {
        #[arg(long)]
        rank: u32,
    },
    /// Brute-force group computations.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustive perfect-model search.
    Search {
        #[arg(long = "type", value_enum, ignore_case = true)]
        ty: GroupKind,
        #[arg(long)]
        rank: u32,
    },
    /// Perfect-involution classes and the involution count.
    Classes {
        #[arg(long = "type", value_enum, ignore_case = true)]
        ty: GroupKind,
        #[arg(long)]
        rank: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupKind {
    A,
    B,
    D,
    I2,
    H3,
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    Strong,
    Full,
}

impl From<Relation> for EquivalenceRelation {
    fn from(r: Relation) -> Self {
        match r {
            Relation::Strong => EquivalenceRelation::Strong,
            Relation::Full => EquivalenceRelation::Full,
        }
    }
}

fn group_spec(ty: GroupKind, rank: u32) -> Result<GroupSpec, CoxError> {
    Ok(match ty {
        GroupKind::A => GroupSpec::SymA(rank),
        GroupKind::B => GroupSpec::SymB(rank),
        GroupKind::D => GroupSpec::SymD(rank),
        GroupKind::I2 => GroupSpec::Dihedral(rank),
        GroupKind::H3 if rank == 3 => GroupSpec::H3,
        GroupKind::H3 => return Err(CoxError::Domain(format!("H3 has rank 3, got {rank}"))),
    })
}

/// Result of one command: exit code, JSON payload, and text rendering.
struct Outcome {
    code: u8,
    payload: Value,
    text: String,
}

impl Outcome {
    fn ok(payload: Value, text: String) -> Self {
        Outcome { code: 0, payload, text }
    }
}

fn exit_code(e: &CoxError) -> u8 {
    match e {
        CoxError::CapExceeded { .. } => 3,
        CoxError::Oracle(_) => 2,
        _ => 1,
    }
}

fn with_schema(command: &str, mut body: Value) -> Value {
    let mut out = json!({ "schema": SCHEMA, "command": command });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, &mut body) {
        o.append(b);
    }
    out
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, CoxError> {
    serde_json::to_value(x).map_err(|e| CoxError::Parse(format!("serialization: {e}")))
}

fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(headers.to_vec())];
    out.extend(rows.iter().map(|r| line(r.iter().map(String::as_str).collect())));
    out.join("\n")
}

fn status_name(s: &CandidateStatus) -> String {
    match s {
        CandidateStatus::Unverified => "unverified".into(),
        CandidateStatus::VerifiedSymbolic => "verified_symbolic".into(),
        CandidateStatus::VerifiedOracle => "verified_oracle".into(),
        CandidateStatus::NeedsOracle { cores } => {
            let c: Vec<String> = cores.iter().map(|p| p.to_string()).collect();
            format!("needs_oracle({})", c.join(","))
        }
        CandidateStatus::Failed { reason } => format!("failed({reason})"),
    }
}

/// Accepts `(3,1)`, `3,1`, `3 1`, and an empty string for `∅`.
fn partition_arg(s: &str) -> Result<Partition, CoxError> {
    let t = s.trim();
    if t.starts_with('(') || t == "∅" {
        return t.parse();
    }
    let parts = t
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<u32>().map_err(|_| CoxError::Parse(format!("bad partition {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Partition::new(parts)
}

fn run_lr(lam: &str, mu: &str, nu: Option<&str>) -> Result<Outcome, CoxError> {
    let lam = partition_arg(lam)?;
    let mu = partition_arg(mu)?;
    match nu {
        Some(nu) => {
            let nu = partition_arg(nu)?;
            let c = try_lr_coefficient(&lam, &mu, &nu)?;
            let payload = with_schema(
                "lr",
                json!({ "lam": lam.to_string(), "mu": mu.to_string(), "nu": nu.to_string(), "coefficient": c }),
            );
            Ok(Outcome::ok(payload, format!("c({lam},{mu};{nu}) = {c}")))
        }
        None => {
            let exp = try_lr_expand(&lam, &mu)?;
            let terms: Vec<Value> =
                exp.iter().map(|(p, c)| json!({ "nu": p.to_string(), "coefficient": c })).collect();
            let rows: Vec<Vec<String>> = exp.iter().map(|(p, c)| vec![p.to_string(), c.to_string()]).collect();
            let payload = with_schema("lr", json!({ "lam": lam.to_string(), "mu": mu.to_string(), "terms": terms }));
            Ok(Outcome::ok(payload, table(&["nu", "coefficient"], &rows)))
        }
    }
}

fn run_char(index: &str, use_oracle: bool) -> Result<Outcome, CoxError> {
    let idx: ModelIndex = index.parse()?;
    let policy = if use_oracle { DegenSplitPolicy::OracleAssisted { cap: 8 } } else { DegenSplitPolicy::Unresolved };
    let chi = idx.character(policy)?;
    let mf = chi.is_multiplicity_free()?;
    let degree = chi.degree()?;
    let strong = idx.canonical_form(EquivalenceRelation::Strong)?;
    let full = idx.canonical_form(EquivalenceRelation::Full)?;
    let payload = with_schema(
        "char",
        json!({
            "index": to_value(&idx)?,
            "character": to_value(&chi)?,
            "degree": degree,
            "multiplicity_free": to_value(&mf)?,
            "canonical_strong": to_value(&strong)?,
            "canonical_full": to_value(&full)?,
        }),
    );
    let text = format!(
        "index      {idx}\ncharacter  {chi}\ndegree     {degree}\nmf         {}\nstrong rep {strong}\nfull rep   {full}",
        to_value(&mf)?.as_str().unwrap_or("")
    );
    Ok(Outcome::ok(payload, text))
}

fn parse_model(spec: &str) -> Result<PerfectModelCandidate, CoxError> {
    if let Some(rest) = spec.strip_prefix("family:") {
        let (name, n) = rest
            .rsplit_once(':')
            .ok_or_else(|| CoxError::Parse(format!("expected family:NAME:n, got {spec}")))?;
        let family: ModelFamily = name.parse()?;
        let n: u32 = n.parse().map_err(|_| CoxError::Parse(format!("bad rank in {spec}")))?;
        return known_model(family, n);
    }
    let indices: Vec<ModelIndex> = match serde_json::from_str::<Vec<ModelIndex>>(spec) {
        Ok(v) => v,
        Err(_) => vec![spec.parse()?],
    };
    candidate(indices)
}

fn run_verify(model: &str, use_oracle: bool) -> Result<Outcome, CoxError> {
    let mut cand = parse_model(model)?;
    let symbolic = cand.status.clone();
    let oracle_status = if use_oracle {
        verify_with_oracle(&mut cand)?;
        Some(cand.status.clone())
    } else {
        None
    };
    let decisive = oracle_status.as_ref().unwrap_or(&symbolic);
    let code = if decisive.is_verified() { 0 } else { 2 };
    let payload = with_schema(
        "verify",
        json!({
            "model": to_value(&cand)?,
            "symbolic": to_value(&symbolic)?,
            "oracle": to_value(&oracle_status)?,
            "perfect": code == 0,
        }),
    );
    let mut text = format!("group     {}\nmembers   {cand}\nsymbolic  {}", cand.group, status_name(&symbolic));
    if let Some(o) = &oracle_status {
        text.push_str(&format!("\noracle    {}", status_name(o)));
    }
    text.push_str(if code == 0 { "\nresult    perfect" } else { "\nresult    not verified" });
    Ok(Outcome { code, payload, text })
}

fn classification_payload(c: &Classification) -> Result<Value, CoxError> {
    Ok(with_schema(
        "classify",
        json!({
            "group": c.group.to_string(),
            "relation": to_value(&c.relation)?,
            "model_count": c.models.len(),
            "class_count": c.class_count(),
            "classes": c.classes,
            "models": to_value(&c.models)?,
        }),
    ))
}

fn classification_text(c: &Classification) -> Result<String, CoxError> {
    let mut rows = Vec::new();
    for (k, class) in c.classes.iter().enumerate() {
        for &m in class {
            let model = &c.models[m];
            rows.push(vec![(k + 1).to_string(), (m + 1).to_string(), status_name(&model.status), model.to_string()]);
        }
    }
    let rel = to_value(&c.relation)?;
    Ok(format!(
        "group {}  relation {}  models {}  classes {}\n{}",
        c.group,
        rel.as_str().unwrap_or(""),
        c.models.len(),
        c.class_count(),
        table(&["class", "model", "status", "members"], &rows)
    ))
}

fn line_diff(expected: &str, actual: &str) -> String {
    let e: Vec<&str> = expected.lines().collect();
    let a: Vec<&str> = actual.lines().collect();
    let mut out = Vec::new();
    for i in 0..e.len().max(a.len()) {
        match (e.get(i), a.get(i)) {
            (Some(x), Some(y)) if x == y => {}
            (x, y) => {
                if let Some(x) = x {
                    out.push(format!("{:>5} - {x}", i + 1));
                }
                if let Some(y) = y {
                    out.push(format!("{:>5} + {y}", i + 1));
                }
            }
        }
        if out.len() > 40 {
            out.push("  ...".into());
            break;
        }
    }
    out.join("\n")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn run_classify(
    ty: GroupKind,
    rank: u32,
    relation: Relation,
    golden: Option<&PathBuf>,
    write_golden: Option<&PathBuf>,
) -> Result<Outcome, CoxError> {
    let c = classify_group(group_spec(ty, rank)?, relation.into())?;
    let payload = classification_payload(&c)?;
    let mut text = classification_text(&c)?;
    if let Some(path) = write_golden {
        std::fs::write(path, pretty(&payload) + "\n")
            .map_err(|e| CoxError::Domain(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut code = 0;
    if let Some(path) = golden {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| CoxError::Domain(format!("cannot read {}: {e}", path.display())))?;
        let expected: Value =
            serde_json::from_str(&raw).map_err(|e| CoxError::Parse(format!("golden file: {e}")))?;
        if expected == payload {
            text.push_str("\ngolden    match");
        } else {
            code = 2;
            eprintln!("classification drift against {}:\n{}", path.display(), line_diff(&pretty(&expected), &pretty(&payload)));
            text.push_str("\ngolden    MISMATCH");
        }
    }
    Ok(Outcome { code, payload, text })
}

fn run_d_even(rank: u32) -> Result<Outcome, CoxError> {
    match d_even_nonexistence(rank)? {
        NonexistenceOutcome::Certificate(cert) => {
            let replayed = replay_certificate(&cert)?;
            let cores: Vec<String> = cert.uncoverable.iter().map(|p| p.to_string()).collect();
            let payload = with_schema(
                "d-even",
                json!({ "rank": rank, "outcome": "certificate", "replayed": replayed, "certificate": to_value(&cert)? }),
            );
            let mut text = format!("D{rank}: no perfect model\nuncoverable cores {}\nreplayed {replayed}", cores.join(", "));
            for line in &cert.narrative {
                text.push_str(&format!("\n  {line}"));
            }
            Ok(Outcome { code: if replayed { 0 } else { 2 }, payload, text })
        }
        NonexistenceOutcome::Counterexample { indices } => {
            let names: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
            let payload =
                with_schema("d-even", json!({ "rank": rank, "outcome": "counterexample", "indices": to_value(&indices)? }));
            Ok(Outcome { code: 2, payload, text: format!("D{rank}: optimistic cover survives: {}", names.join(", ")) })
        }
    }
}

fn run_oracle_search(ty: GroupKind, rank: u32) -> Result<Outcome, CoxError> {
    let spec = group_spec(ty, rank)?;
    let strong = classification::classify_by_oracle(spec, EquivalenceRelation::Strong)?;
    let full = classification::classify_by_oracle(spec, EquivalenceRelation::Full)?;
    let models: Vec<Vec<String>> = strong
        .models
        .iter()
        .map(|m| match &m.members {
            classification::ModelMembers::Triples(t) => t.iter().map(|x| x.label.clone()).collect(),
            classification::ModelMembers::Indices(v) => v.iter().map(|i| i.to_string()).collect(),
        })
        .collect();
    let payload = with_schema(
        "oracle search",
        json!({
            "group": spec.to_string(),
            "count": strong.models.len(),
            "strong_class_count": strong.class_count(),
            "full_class_count": full.class_count(),
            "strong_classes": strong.classes,
            "full_classes": full.classes,
            "models": models,
        }),
    );
    let rows: Vec<Vec<String>> = models.iter().enumerate().map(|(i, m)| vec![(i + 1).to_string(), m.join(", ")]).collect();
    let text = format!(
        "group {spec}  models {}  strong classes {}  full classes {}\n{}",
        strong.models.len(),
        strong.class_count(),
        full.class_count(),
        table(&["model", "triples"], &rows)
    );
    Ok(Outcome::ok(payload, text))
}

fn run_oracle_classes(ty: GroupKind, rank: u32) -> Result<Outcome, CoxError> {
    let spec = group_spec(ty, rank)?;
    let g = cached_group(spec)?;
    let labels = g.generator_labels().to_vec();
    let classes = g.perfect_classes()?;
    let involutions = oracle::involution_count(&g);
    let degree_sum = oracle::irreducible_degree_sum(&g)?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for c in classes.iter() {
        let word: Vec<&str> = g.reduced_word(c.minimal).iter().map(|&k| labels[k].as_str()).collect();
        let w = if word.is_empty() { "1".to_string() } else { word.join("") };
        let signed = spec.weyl_type().map(|_| oracle::SignedPermutation::from_perm(g.element(c.minimal)).to_string());
        let theta: Vec<String> = c.theta.iter().map(|t| labels[*t as usize].clone()).collect();
        rows.push(vec![
            w.clone(),
            signed.clone().unwrap_or_default(),
            format!("[{}]", theta.join(",")),
            c.size.to_string(),
        ]);
        items.push(json!({ "minimal_word": w, "minimal": signed, "theta": theta, "size": c.size }));
    }
    let payload = with_schema(
        "oracle classes",
        json!({
            "group": spec.to_string(),
            "order": g.order(),
            "perfect_class_count": classes.len(),
            "classes": items,
            "involutions": involutions,
            "irreducible_degree_sum": degree_sum,
        }),
    );
    let mut text = format!("group {spec}  order {}  perfect classes {}\n", g.order(), classes.len());
    text.push_str(&table(&["minimal", "signed", "theta", "size"], &rows));
    text.push_str(&format!("\ninvolutions {involutions}  irreducible degree sum {degree_sum}"));
    Ok(Outcome::ok(payload, text))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CoxError> {
    match &cli.command {
        Command::Lr { lam, mu, nu } => run_lr(lam, mu, nu.as_deref()),
        Command::Char { index, oracle } => run_char(index, *oracle),
        Command::Verify { model, oracle } => run_verify(model, *oracle),
        Command::Classify { ty, rank, relation, golden, write_golden } => {
            run_classify(*ty, *rank, *relation, golden.as_ref(), write_golden.as_ref())
        }
        Command::DEven { rank } => run_d_even(*rank),
        Command::Oracle { command } => match command {
            OracleCommand::Search { ty, rank } => run_oracle_search(*ty, *rank),
            OracleCommand::Classes { ty, rank } => run_oracle_classes(*ty, *rank),
        },
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            if cli.json {
                emit(&pretty(&out.payload));
            } else {
                emit(&out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if cli.json {
                emit(&pretty(&with_schema("error", json!({ "message": e.to_string(), "code": exit_code(&e) }))));
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
