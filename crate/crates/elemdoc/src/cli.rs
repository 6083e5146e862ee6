//! The `elemdoc` command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use elemdoc_core::adjoint::{
    axiom_statuses, check_free_model, check_universal_property, ell_equality, free_model, FreeModelResult, FreeStatus,
};
use elemdoc_core::doctrine::sub_finset_doctrine;
use elemdoc_core::fincat::SetFunctor;
use elemdoc_core::kan::{check_product_preservation, count_mediators, kan_fixture, kan_fixture_names, mediator};
use elemdoc_core::prover::{Budget, ProofStatus};
use elemdoc_core::qcompletion::{
    build_completion, check_descent, check_preserves_quotients, check_q_after_j, finset_equivalences, q_functor,
    validate_completion,
};
use elemdoc_core::semantics::{check_model, decode_tuple, Structure, StructureHom};
use elemdoc_core::syntax::{SortId, Theory};
use elemdoc_core::{Severity, ValidationReport};

use crate::format::{load_model, load_morphism, load_theory, print_model, print_theory, ModelFile};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "elemdoc", version, about = "Horn theories, free models and quotient completions over finite sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: OutputFormat,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub max_atoms: Option<usize>,
    #[arg(long, global = true)]
    pub max_unions: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a theory file and check that its axioms are well-sorted.
    CheckTheory { theory: PathBuf },
    /// Check that a model satisfies a theory.
    CheckModel { model: PathBuf, theory: PathBuf },
    /// Prove the translated source axioms in the target theory.
    CheckMorphism {
        morphism: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Compute the free target model on a source model.
    Free {
        morphism: PathBuf,
        model: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Check a free model result (JSON) against every target model up to a size.
    VerifyUniversal {
        result: PathBuf,
        #[arg(long)]
        bound: usize,
    },
    /// The bounded equality relation on a context of the target.
    Ell {
        morphism: PathBuf,
        model: PathBuf,
        /// Context length.
        #[arg(long)]
        ctx: usize,
        #[arg(long)]
        bound: usize,
        /// Target sort of the context variables (default: the first).
        #[arg(long)]
        sort: Option<String>,
        /// Term depth of the left Kan extension.
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Quotient completion of the subset doctrine on sets up to a size.
    Qcomplete {
        #[arg(long)]
        max_size: usize,
    },
    /// Left Kan extension of a bundled fixture.
    Kan {
        #[arg(long)]
        fixture: String,
    },
}

/// Exit code, standard output and diagnostics of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code: 1, stdout: String::new(), stderr }
    }
}

struct Report {
    json: Value,
    text: String,
    code: i32,
}

fn report_code(r: &ValidationReport) -> i32 {
    if r.has_violations() {
        1
    } else if r.has_undecided() {
        2
    } else {
        0
    }
}

pub fn report_json(r: &ValidationReport) -> Value {
    Value::Array(
        r.findings
            .iter()
            .map(|f| {
                let sev = match f.severity {
                    Severity::Violation => "violation",
                    Severity::Undecided => "undecided",
                };
                json!({"severity": sev, "rule": f.rule, "detail": f.detail})
            })
            .collect(),
    )
}

fn report_text(r: &ValidationReport) -> String {
    if r.is_empty() {
        return "all checks pass\n".into();
    }
    let mut s = String::new();
    for f in &r.findings {
        let sev = match f.severity {
            Severity::Violation => "violation",
            Severity::Undecided => "undecided",
        };
        let _ = writeln!(s, "{sev} {}: {}", f.rule, f.detail);
    }
    s
}

pub fn structure_json(m: &Structure) -> Value {
    let sig = &m.sig;
    let ops: Vec<Value> = sig.ops.iter().zip(&m.ops).map(|(d, t)| json!({"name": d.name, "table": t})).collect();
    let rels: Vec<Value> = sig.rels.iter().zip(&m.rels).map(|(d, t)| json!({"name": d.name, "tuples": t})).collect();
    let carriers: Vec<Value> =
        sig.sorts.iter().zip(&m.carriers).map(|(s, c)| json!({"sort": s, "size": c})).collect();
    json!({"name": m.name, "carriers": carriers, "ops": ops, "relations": rels})
}

fn hom_json(h: &StructureHom) -> Value {
    Value::Array(h.maps.iter().map(|f| json!(f.map)).collect())
}

fn budget(cli: &Cli, depth: usize) -> Budget {
    let mut b = Budget::with_depth(depth);
    if let Some(a) = cli.max_atoms {
        b.max_atoms = a;
    }
    if let Some(u) = cli.max_unions {
        b.max_unions = u;
    }
    b
}

fn budget_json(b: &Budget) -> Value {
    json!({"depth": b.depth, "max_atoms": b.max_atoms, "max_unions": b.max_unions})
}

fn positive(name: &str, v: usize) -> Result<(), String> {
    if v == 0 {
        Err(format!("--{name} must be positive"))
    } else {
        Ok(())
    }
}

/// Parses the arguments and runs the command. Never exits the process.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let r = match &cli.command {
        Command::CheckTheory { theory } => check_theory(theory),
        Command::CheckModel { model, theory } => check_model_cmd(model, theory),
        Command::CheckMorphism { morphism, depth } => check_morphism(cli, morphism, *depth),
        Command::Free { morphism, model, depth } => free(cli, morphism, model, *depth),
        Command::VerifyUniversal { result, bound } => verify_universal(result, *bound),
        Command::Ell { morphism, model, ctx, bound, sort, depth } => {
            ell(cli, morphism, model, *ctx, *bound, sort.as_deref(), *depth)
        }
        Command::Qcomplete { max_size } => qcomplete(*max_size),
        Command::Kan { fixture } => kan(fixture),
    };
    let r = match r {
        Ok(r) => r,
        Err(e) => return Outcome::fail(e),
    };
    let body = match cli.format {
        OutputFormat::Json => {
            let mut v = r.json;
            if let Value::Object(m) = &mut v {
                m.insert("schema_version".into(), json!(SCHEMA_VERSION));
                m.insert("exit_code".into(), json!(r.code));
            }
            serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
        }
        OutputFormat::Text => r.text,
    };
    match &cli.out {
        Some(p) => match fs::write(p, &body) {
            Ok(()) => Outcome { code: r.code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome::fail(format!("{}: {e}", p.display())),
        },
        None => Outcome { code: r.code, stdout: body, stderr: String::new() },
    }
}

fn check_theory(path: &Path) -> Result<Report, String> {
    let t = load_theory(path).map_err(|e| e.to_string())?;
    let mut r = ValidationReport::new();
    if let Err(e) = t.validate() {
        r.violation("theory.sorts", e.to_string());
    }
    let text = format!(
        "theory {}: {} sorts, {} operations, {} relations, {} axioms\n{}",
        t.name,
        t.sig.sorts.len(),
        t.sig.ops.len(),
        t.sig.rels.len(),
        t.axioms.len(),
        report_text(&r)
    );
    let json = json!({
        "command": "check-theory",
        "theory": t.name,
        "sorts": t.sig.sorts,
        "operations": t.sig.ops.iter().map(|o| o.name.clone()).collect::<Vec<_>>(),
        "relations": t.sig.rels.iter().map(|o| o.name.clone()).collect::<Vec<_>>(),
        "axioms": t.axioms.iter().map(|a| a.name.clone()).collect::<Vec<_>>(),
        "canonical": print_theory(&t),
        "report": report_json(&r),
    });
    Ok(Report { json, text, code: report_code(&r) })
}

fn model_against(model: &Path, theory: &Path) -> Result<(ModelFile, Theory), String> {
    let t = load_theory(theory).map_err(|e| e.to_string())?;
    let (m, own) = load_model(model).map_err(|e| e.to_string())?;
    if own.sig != t.sig {
        return Err(format!(
            "{}: model is over the signature of {}, which differs from {}",
            model.display(),
            m.theory_path,
            theory.display()
        ));
    }
    Ok((m, t))
}

fn check_model_cmd(model: &Path, theory: &Path) -> Result<Report, String> {
    let (m, t) = model_against(model, theory)?;
    let r = check_model(&m.model, &t);
    let sizes: Vec<String> = m.model.carriers.iter().map(usize::to_string).collect();
    let text = format!("model {} of {} (carriers {})\n{}", m.model.name, t.name, sizes.join(", "), report_text(&r));
    let json = json!({
        "command": "check-model",
        "model": structure_json(&m.model),
        "theory": t.name,
        "report": report_json(&r),
    });
    Ok(Report { json, text, code: report_code(&r) })
}

fn check_morphism(cli: &Cli, path: &Path, depth: usize) -> Result<Report, String> {
    positive("depth", depth)?;
    let f = load_morphism(path).map_err(|e| e.to_string())?;
    let b = budget(cli, depth);
    let statuses = axiom_statuses(&f.morphism, &b).map_err(|e| e.to_string())?;
    let mut r = ValidationReport::new();
    let mut text = format!("morphism {}: {} -> {}\n", f.morphism.name, f.morphism.source.name, f.morphism.target.name);
    let mut rows = Vec::new();
    for (name, st) in &statuses {
        let (label, detail) = match st {
            ProofStatus::Proved { trace } => ("proved", format!("{} steps", trace.len())),
            ProofStatus::Unknown { reason, .. } => {
                r.undecided(format!("morphism.axiom.{name}"), reason.clone());
                ("unknown", reason.clone())
            }
        };
        let _ = writeln!(text, "  {name}: {label} ({detail})");
        rows.push(json!({"axiom": name, "status": label, "detail": detail}));
    }
    text += &report_text(&r);
    let json = json!({
        "command": "check-morphism",
        "morphism": f.morphism.name,
        "source": f.morphism.source.name,
        "target": f.morphism.target.name,
        "budget": budget_json(&b),
        "axioms": rows,
        "report": report_json(&r),
    });
    Ok(Report { json, text, code: report_code(&r) })
}

fn canonical(p: &Path) -> Result<String, String> {
    fs::canonicalize(p).map(|c| c.display().to_string()).map_err(|e| format!("{}: {e}", p.display()))
}

fn compute_free(morphism: &Path, model: &Path, b: &Budget) -> Result<FreeModelResult, String> {
    let f = load_morphism(morphism).map_err(|e| e.to_string())?;
    let (m, t) = load_model(model).map_err(|e| e.to_string())?;
    if t.sig != f.morphism.source.sig {
        return Err(format!("{}: model is not over the source signature of {}", model.display(), f.morphism.name));
    }
    Ok(free_model(&f.morphism, &m.model, b))
}

fn free_json(r: &FreeModelResult, morphism: &str, model: &str, b: &Budget, check: &ValidationReport) -> Value {
    let tsig = &r.morphism.target.sig;
    let gens = r.generators.clone();
    let show = |t| tsig.show_term_with(t, &|i: usize| format!("[{}]", gens[i].1));
    let reps: Vec<Value> = r
        .representatives
        .iter()
        .enumerate()
        .map(|(s, ts)| json!({"sort": tsig.sorts[s], "terms": ts.iter().map(show).collect::<Vec<_>>()}))
        .collect();
    let status = match &r.status {
        FreeStatus::Closed => json!({"closed": true}),
        FreeStatus::Truncated { depth, reason } => json!({"closed": false, "depth": depth, "reason": reason}),
    };
    let output = ModelFile { theory_path: format!("{}.thy", crate::fixtures::file_stem(&r.morphism.target.name)), model: r.output.clone() };
    json!({
        "command": "free",
        "morphism_file": morphism,
        "model_file": model,
        "morphism": r.morphism.name,
        "input": r.input.name,
        "budget": budget_json(b),
        "rounds": r.rounds,
        "status": status,
        "output": structure_json(&r.output),
        "output_model": print_model(&output),
        "representatives": reps,
        "unit": hom_json(&r.unit),
        "report": report_json(check),
    })
}

fn free_code(r: &FreeModelResult, check: &ValidationReport) -> i32 {
    if check.has_violations() {
        1
    } else if !r.is_closed() || check.has_undecided() {
        2
    } else {
        0
    }
}

fn free_text(r: &FreeModelResult, check: &ValidationReport) -> String {
    let tsig = &r.morphism.target.sig;
    let mut s = String::new();
    let status = match &r.status {
        FreeStatus::Closed => "closed".to_string(),
        FreeStatus::Truncated { depth, reason } => format!("truncated at depth {depth}: {reason}"),
    };
    let sizes: Vec<String> =
        r.output.carriers.iter().enumerate().map(|(i, c)| format!("{}={c}", tsig.sorts[i])).collect();
    let _ = writeln!(s, "free {} on {}: {status} after {} rounds", r.morphism.name, r.input.name, r.rounds);
    let _ = writeln!(s, "carriers {}", sizes.join(" "));
    for (so, ts) in r.representatives.iter().enumerate() {
        for (k, t) in ts.iter().enumerate() {
            let shown = tsig.show_term_with(t, &|i| format!("[{}]", r.generators[i].1));
            let _ = writeln!(s, "  {}#{k} = {shown}", tsig.sorts[so]);
        }
    }
    for (i, f) in r.unit.maps.iter().enumerate() {
        let _ = writeln!(s, "unit {} {:?}", r.input.sig.sorts[i], f.map);
    }
    s += &report_text(check);
    s
}

fn free(cli: &Cli, morphism: &Path, model: &Path, depth: usize) -> Result<Report, String> {
    positive("depth", depth)?;
    let b = budget(cli, depth);
    let r = compute_free(morphism, model, &b)?;
    let check = if r.is_closed() { check_free_model(&r) } else { ValidationReport::new() };
    let json = free_json(&r, &canonical(morphism)?, &canonical(model)?, &b, &check);
    Ok(Report { text: free_text(&r, &check), code: free_code(&r, &check), json })
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
    v.get(key).ok_or_else(|| format!("free result has no `{key}` field"))
}

fn verify_universal(path: &Path, bound: usize) -> Result<Report, String> {
    positive("bound", bound)?;
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| format!("{}: not a JSON free result (run `free --format json`): {e}", path.display()))?;
    if field(&v, "schema_version")?.as_u64() != Some(u64::from(SCHEMA_VERSION)) {
        return Err(format!("{}: unsupported schema_version", path.display()));
    }
    let s = |k: &str| -> Result<String, String> {
        field(&v, k)?.as_str().map(str::to_string).ok_or_else(|| format!("`{k}` is not a string"))
    };
    let bj = field(&v, "budget")?;
    let n = |k: &str| bj.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| format!("budget.{k} missing"));
    let b = Budget { depth: n("depth")?, max_atoms: n("max_atoms")?, max_unions: n("max_unions")? };
    let r = compute_free(Path::new(&s("morphism_file")?), Path::new(&s("model_file")?), &b)?;
    if structure_json(&r.output) != *field(&v, "output")? || hom_json(&r.unit) != *field(&v, "unit")? {
        return Err(format!("{}: stored result differs from a fresh computation", path.display()));
    }
    if !r.is_closed() {
        let mut rep = ValidationReport::new();
        rep.undecided("free.truncated", "the free model is truncated; the universal property is not checked");
        let json = json!({"command": "verify-universal", "bound": bound, "report": report_json(&rep)});
        return Ok(Report { json, text: report_text(&rep), code: 2 });
    }
    let u = check_universal_property(&r, bound);
    let text = format!(
        "universal property of {} on {} up to size {bound}: {} models, {} homomorphisms\n{}",
        r.morphism.name,
        r.input.name,
        u.models,
        u.homs,
        report_text(&u.report)
    );
    let json = json!({
        "command": "verify-universal",
        "morphism": r.morphism.name,
        "input": r.input.name,
        "bound": bound,
        "models": u.models,
        "homs": u.homs,
        "report": report_json(&u.report),
    });
    Ok(Report { json, text, code: report_code(&u.report) })
}

fn ell(
    cli: &Cli,
    morphism: &Path,
    model: &Path,
    k: usize,
    bound: usize,
    sort: Option<&str>,
    depth: usize,
) -> Result<Report, String> {
    positive("ctx", k)?;
    positive("bound", bound)?;
    let f = load_morphism(morphism).map_err(|e| e.to_string())?;
    let (m, t) = load_model(model).map_err(|e| e.to_string())?;
    if t.sig != f.morphism.source.sig {
        return Err(format!("{}: model is not over the source signature of {}", model.display(), f.morphism.name));
    }
    let tsig = &f.morphism.target.sig;
    let s = match sort {
        Some(name) => tsig.sort(name).ok_or_else(|| format!("unknown target sort `{name}`"))?,
        None => SortId(0),
    };
    let ctx = vec![s; k];
    let b = budget(cli, depth);
    let e = ell_equality(&f.morphism, &m.model, &ctx, bound, &b).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = e.classes.iter().map(Vec::len).collect();
    let doubled: Vec<SortId> = ctx.iter().chain(&ctx).copied().collect();
    let pairs: Vec<[Vec<usize>; 2]> = e
        .relation
        .iter()
        .map(|i| {
            let t = decode_tuple(&sizes, &doubled, i);
            [t[..k].to_vec(), t[k..].to_vec()]
        })
        .collect();
    let classes: Vec<Value> = e
        .classes
        .iter()
        .enumerate()
        .map(|(so, ts)| json!({"sort": tsig.sorts[so], "terms": ts.iter().map(|t| tsig.show_term(t)).collect::<Vec<_>>()}))
        .collect();
    let code = if e.stable { 0 } else { 2 };
    let mut text = format!(
        "ell on {} over {} (context length {k}, bound {bound}): {} models, {} pairs\n",
        f.morphism.name, m.model.name, e.models, e.pairs
    );
    for (so, ts) in e.classes.iter().enumerate() {
        for (i, t) in ts.iter().enumerate() {
            let _ = writeln!(text, "  {}#{i} = {}", tsig.sorts[so], tsig.show_term(t));
        }
    }
    let show = |t: &[usize]| t.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    let rel: Vec<String> =
        pairs.iter().filter(|p| p[0] != p[1]).map(|p| format!("({})~({})", show(&p[0]), show(&p[1]))).collect();
    let _ = writeln!(text, "identified: {}", if rel.is_empty() { "none".to_string() } else { rel.join(" ") });
    let _ = writeln!(text, "stable: {} (lan stable: {})", e.stable, e.lan_stable);
    let json = json!({
        "command": "ell",
        "morphism": f.morphism.name,
        "model": m.model.name,
        "context": ctx.iter().map(|s| tsig.sorts[s.0].clone()).collect::<Vec<_>>(),
        "bound": bound,
        "lan_depth": depth,
        "classes": classes,
        "relation": pairs,
        "models": e.models,
        "pairs": e.pairs,
        "stable": e.stable,
        "lan_stable": e.lan_stable,
    });
    Ok(Report { json, text, code })
}

fn qcomplete(max_size: usize) -> Result<Report, String> {
    positive("max-size", max_size)?;
    let d = sub_finset_doctrine(max_size).map_err(|e| e.to_string())?;
    let q = build_completion(&d).map_err(|e| format!("{e:?}"))?;
    let mut r = validate_completion(&q).scoped("completion");
    let (q2, _) = q_functor(max_size).map_err(|e| format!("{e:?}"))?;
    r.merge(check_q_after_j(&q2));
    r.merge(check_preserves_quotients(&q2));
    for n in 0..=max_size {
        for rho in finset_equivalences(n) {
            r.merge(check_descent(n, &rho));
        }
    }
    let objects: Vec<Value> = q
        .objects()
        .iter()
        .map(|o| {
            let pairs: Vec<[usize; 2]> = o.rho.iter().map(|i| [i / o.object, i % o.object]).collect();
            json!({"size": o.object, "relation": pairs})
        })
        .collect();
    let mut text = format!("quotient completion of subsets of sets up to size {max_size}: {} objects\n", objects.len());
    for n in 0..=max_size {
        let k = q.objects().iter().filter(|o| o.object == n).count();
        let _ = writeln!(text, "  size {n}: {k} equivalence relations");
    }
    text += &report_text(&r);
    let json = json!({
        "command": "qcomplete",
        "max_size": max_size,
        "objects": objects,
        "report": report_json(&r),
    });
    Ok(Report { json, text, code: report_code(&r) })
}

fn kan(name: &str) -> Result<Report, String> {
    let fx = kan_fixture(name)
        .ok_or_else(|| format!("unknown fixture `{name}` (known: {})", kan_fixture_names().join(", ")))?;
    let lan = fx.run();
    let f = fx.functor();
    let c = &fx.target;
    let mut r = check_product_preservation(&lan, c, &fx.pairs);
    // Lan itself, with the unit, must factor through the unit uniquely.
    let k = SetFunctor {
        category: c,
        sizes: c.objects().map(|o| lan.size(o).unwrap_or(0)).collect(),
        maps: c.arrows().map(|a| lan.action.get(&a).cloned().unwrap_or_default()).collect(),
    };
    let theta: Vec<Vec<usize>> = lan.unit.iter().map(|u| u.clone().unwrap_or_default()).collect();
    match mediator(&lan, &f, &k, &theta) {
        Ok(m) => {
            for (i, comp) in m.components.iter().enumerate() {
                if *comp != (0..comp.len()).collect::<Vec<_>>() {
                    r.violation("kan.self_mediator", format!("component at {} is not the identity", c.object_name(lan.at[i])));
                }
            }
        }
        Err(e) => r.violation("kan.self_mediator", e.to_string()),
    }
    // exhaustive uniqueness only where the search space is small
    let space: f64 = lan.classes.iter().map(|cl| (cl.len() as f64).powi(cl.len() as i32)).product();
    let count = (space <= 1e6).then(|| count_mediators(&lan, &f, &k, &theta));
    if let Some(n) = count.filter(|&n| n != 1) {
        r.violation("kan.unique", format!("{n} mediators"));
    }
    let mut text = format!("left Kan extension `{name}`\n");
    let mut objs = Vec::new();
    for (i, &d) in lan.at.iter().enumerate() {
        let classes: Vec<Vec<String>> = lan.classes[i]
            .iter()
            .map(|cl| {
                cl.iter()
                    .map(|e| format!("{}:{}:{}", fx.source.object_name(e.source), c.arrow_name(e.arrow), e.elem))
                    .collect()
            })
            .collect();
        let _ = writeln!(text, "  Lan({}) has {} elements", c.object_name(d), classes.len());
        objs.push(json!({"object": c.object_name(d), "size": classes.len(), "classes": classes}));
    }
    let units: Vec<Value> = fx
        .source
        .objects()
        .map(|a| json!({"object": fx.source.object_name(a), "map": lan.unit[a.0]}))
        .collect();
    let action: Vec<Value> =
        lan.action.iter().map(|(a, m)| json!({"arrow": c.arrow_name(*a), "map": m})).collect();
    text += &report_text(&r);
    let json = json!({
        "command": "kan",
        "fixture": name,
        "objects": objs,
        "unit": units,
        "action": action,
        "mediators": count,
        "report": report_json(&r),
    });
    Ok(Report { json, text, code: report_code(&r) })
}
