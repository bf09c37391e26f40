//! Command-line front end. Every command builds a JSON report; `--format text`
//! renders the same report as indented `key: value` lines.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::derivations::{
    bider_bracket, inner_biderivation, map_space, unflatten, Biderivation, MapKind, MapOnSubspace,
};
use crate::equations::{
    check_solution, division_witness, normalizer, nz_to_bider, solve_in, Assignment, DivisionConfig,
    DivisionOutcome, DomainMode, EvalContext, Side, SolveVerdict, DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::fdalg::{Element, StructureAlgebra};
use crate::free::DEFAULT_DEGREE_CAP;
use crate::hnn::{embedding_check, exact_model_check, hnn_extend, ModelOutcome, DEFAULT_DEGREE, MAX_DEGREE};
use crate::io::{
    algebra_to_json, load_algebra, matrix_json, parse_matrix, parse_vector, parse_vectors, read_json,
    subspace_json, system_from_json, vector_json, vector_strings, AlgebraDocument,
};
use crate::linalg::{is_zero_vector, Subspace};
use crate::parse::parse_expr;
use crate::scalar::{Field, Scalar};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Derivation,
    Anti,
    Bider,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveMode {
    Find,
    Check,
    Divide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Parser)]
#[command(name = "leibniz", version, about = "Exact computations with right Leibniz algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Truncation degree for quotient computations (1..=6 unless --force).
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    /// Reduce the input algebra into GF(p), written `gfp:P`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Maximum number of assignments tried by exhaustive solving.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized samples.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Lift the degree bounds.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the right Leibniz identity on all basis triples.
    Verify { algebra: PathBuf },
    /// Derived series, simplicity, centralizers and normalizers.
    Analyze {
        algebra: PathBuf,
        /// Extra subspace as a JSON list of spanning vectors (inline or a file path).
        #[arg(long)]
        sub: Option<String>,
    },
    /// Derivation, anti-derivation or biderivation spaces.
    Derivations {
        algebra: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Derivation)]
        kind: KindArg,
    },
    /// HNN-extension by a map on a subalgebra, with embedding and model checks.
    Hnn {
        algebra: PathBuf,
        /// Subalgebra as a JSON list of spanning vectors (inline or a file path).
        #[arg(long)]
        sub: String,
        /// n×n matrix (list of rows) whose restriction to the subalgebra is the map.
        #[arg(long)]
        map: String,
        #[arg(long, value_enum, default_value_t = KindArg::Derivation)]
        kind: KindArg,
    },
    /// Exhaustive solving, solution checking or division witnesses.
    Solve {
        algebra: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveMode::Find)]
        mode: SolveMode,
        /// System JSON file (find, check).
        #[arg(long)]
        system: Option<PathBuf>,
        /// Assignment JSON object `{"x": [coords]}` (check).
        #[arg(long)]
        assignment: Option<String>,
        /// Coefficient vector of `a` (divide).
        #[arg(long)]
        a: Option<String>,
        /// Coefficient vector of `b` (divide).
        #[arg(long)]
        b: Option<String>,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
        /// Use the line through `a` instead of the subalgebra it generates.
        #[arg(long)]
        span: bool,
    },
    /// Normal form of a free Leibniz or dialgebra expression.
    Free { expr: String },
}

/// A finished report and the process exit code it implies.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Outcome {
        Outcome { report, exit_code: 0 }
    }
}

fn validate(g: &GlobalArgs) -> Result<()> {
    if !g.force && !(1..=MAX_DEGREE).contains(&g.degree) {
        return Err(Error::Usage(format!(
            "--degree must lie in 1..={MAX_DEGREE} (use --force to override)"
        )));
    }
    if g.degree == 0 {
        return Err(Error::Usage("--degree must be at least 1".into()));
    }
    if g.budget == 0 {
        return Err(Error::Usage("--budget must be at least 1".into()));
    }
    Ok(())
}

fn field_override(g: &GlobalArgs) -> Result<Option<Field>> {
    g.field.as_deref().map(str::parse).transpose()
}

fn load(path: &Path, g: &GlobalArgs) -> Result<AlgebraDocument> {
    let doc = load_algebra(path)?;
    match field_override(g)? {
        Some(f) if f != doc.algebra.field() => doc.over_field(f),
        _ => Ok(doc),
    }
}

/// Inline JSON when the text starts with `[` or `{`, otherwise a file path.
fn json_arg(text: &str) -> Result<Value> {
    let t = text.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        serde_json::from_str(t).map_err(|e| Error::Parse(format!("inline JSON: {e}")))
    } else {
        read_json(Path::new(text))
    }
}

fn header(command: &str, doc: Option<&AlgebraDocument>) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    if let Some(d) = doc {
        m.insert("algebra".into(), json!(d.name));
        m.insert("dim".into(), json!(d.algebra.dim()));
        m.insert("field".into(), json!(d.algebra.field().to_string()));
    }
    m
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    validate(&cli.global)?;
    let g = &cli.global;
    match &cli.command {
        Command::Verify { algebra } => cmd_verify(&load(algebra, g)?),
        Command::Analyze { algebra, sub } => {
            let doc = load(algebra, g)?;
            let extra = sub
                .as_deref()
                .map(|s| parse_vectors(doc.algebra.field(), &json_arg(s)?, "--sub"))
                .transpose()?;
            cmd_analyze(&doc, extra, g.seed)
        }
        Command::Derivations { algebra, kind } => cmd_derivations(&load(algebra, g)?, *kind, g.seed),
        Command::Hnn {
            algebra,
            sub,
            map,
            kind,
        } => {
            let doc = load(algebra, g)?;
            let f = doc.algebra.field();
            let n = doc.algebra.dim();
            let vecs = parse_vectors(f, &json_arg(sub)?, "--sub")?;
            let m = parse_matrix(f, n, &json_arg(map)?, "--map")?;
            let kind = match kind {
                KindArg::Derivation => MapKind::Derivation,
                KindArg::Anti => MapKind::AntiDerivation,
                KindArg::Bider => return Err(Error::Usage("hnn --kind must be derivation or anti".into())),
            };
            cmd_hnn(&doc, vecs, &m, kind, g.degree)
        }
        Command::Solve {
            algebra,
            mode,
            system,
            assignment,
            a,
            b,
            side,
            span,
        } => {
            let doc = load(algebra, g)?;
            let f = doc.algebra.field();
            let n = doc.algebra.dim();
            let need_system = || -> Result<Value> {
                let p = system
                    .as_ref()
                    .ok_or_else(|| Error::Usage("--system is required for this mode".into()))?;
                read_json(p)
            };
            match mode {
                SolveMode::Find => {
                    let s = system_from_json(f, n, &need_system()?)?;
                    cmd_solve_find(&doc, &s, g.budget)
                }
                SolveMode::Check => {
                    let s = system_from_json(f, n, &need_system()?)?;
                    let asg_json = json_arg(
                        assignment
                            .as_deref()
                            .ok_or_else(|| Error::Usage("--assignment is required for check".into()))?,
                    )?;
                    let obj = asg_json
                        .as_object()
                        .ok_or_else(|| Error::Parse("--assignment: expected an object".into()))?;
                    let mut asg = Assignment::new();
                    for (k, v) in obj {
                        asg.insert(k.clone(), parse_vector(f, v, &format!("--assignment.{k}"))?);
                    }
                    let report = check_solution(&s, &asg, &EvalContext::identity(&doc.algebra))?;
                    let mut m = header("solve-check", Some(&doc));
                    m.insert("report".into(), serde_json::to_value(report)?);
                    Ok(Outcome::ok(Value::Object(m)))
                }
                SolveMode::Divide => {
                    let vec_arg = |name: &str, v: &Option<String>| -> Result<Element> {
                        let text = v
                            .as_deref()
                            .ok_or_else(|| Error::Usage(format!("--{name} is required for divide")))?;
                        parse_vector(f, &json_arg(text)?, &format!("--{name}"))
                    };
                    let config = DivisionConfig {
                        side: match side {
                            SideArg::Left => Side::Left,
                            SideArg::Right => Side::Right,
                        },
                        domain: if *span { DomainMode::Span } else { DomainMode::Generated },
                        degree: g.degree,
                    };
                    cmd_solve_divide(&doc, &vec_arg("a", a)?, &vec_arg("b", b)?, config)
                }
            }
        }
        Command::Free { expr } => cmd_free(expr, field_override(g)?.unwrap_or(Field::Rational), g.force),
    }
}

pub fn cmd_verify(doc: &AlgebraDocument) -> Result<Outcome> {
    let report = doc.algebra.verify_leibniz();
    let holds = report.holds;
    let mut m = header("verify", Some(doc));
    m.insert("status".into(), json!(if holds { "pass" } else { "fail" }));
    m.insert("report".into(), serde_json::to_value(report)?);
    Ok(Outcome {
        report: Value::Object(m),
        exit_code: if holds { 0 } else { 2 },
    })
}

fn random_element<R: Rng>(rng: &mut R, f: Field, n: usize) -> Element {
    (0..n)
        .map(|_| match f.order() {
            Some(p) => f.from_i64(rng.gen_range(0..p) as i64),
            None => f.from_i64(rng.gen_range(-3..=3)),
        })
        .collect()
}

fn subspace_report(a: &StructureAlgebra, s: &Subspace) -> Result<Value> {
    let nz = normalizer(a, s)?;
    let cent = crate::equations::centralizer(a, s.basis());
    let mut m = serde_json::Map::new();
    m.insert("subspace".into(), subspace_json(s));
    m.insert("is_subalgebra".into(), json!(a.is_subalgebra(s)));
    m.insert("is_left_ideal".into(), json!(a.is_left_ideal(s)));
    m.insert("is_right_ideal".into(), json!(a.is_right_ideal(s)));
    m.insert("centralizer".into(), subspace_json(&cent));
    m.insert("left_normalizer".into(), subspace_json(&nz.left));
    m.insert("right_normalizer".into(), subspace_json(&nz.right));
    m.insert("normalizer".into(), subspace_json(&nz.both));
    if a.is_subalgebra(s) {
        let r = nz_to_bider(a, s)?;
        m.insert(
            "normalizer_to_biderivations".into(),
            json!({
                "pairs_pass": r.failing_pairs.is_empty(),
                "linear": r.linear,
                "kernel": subspace_json(&r.kernel),
                "kernel_contains_centralizer": r.kernel_contains_centralizer,
                "image_dim": r.image_dim,
                "biderivation_dim": r.bider_dim,
                "inner_comparison": r.inner_comparison,
            }),
        );
    }
    Ok(Value::Object(m))
}

pub fn cmd_analyze(doc: &AlgebraDocument, extra: Option<Vec<Element>>, seed: u64) -> Result<Outcome> {
    let a = &doc.algebra;
    a.require_verified()?;
    let (f, n) = (a.field(), a.dim());
    let series = a.derived_series();
    let simple = a.is_simple();
    let mut m = header("analyze", Some(doc));
    m.insert(
        "derived_series".into(),
        json!({
            "dims": series.terms.iter().map(Subspace::dim).collect::<Vec<_>>(),
            "solvable": series.solvable,
            "stabilization_index": series.stabilization_index,
        }),
    );
    m.insert(
        "simplicity".into(),
        json!({
            "simple": simple.simple,
            "complete": simple.complete,
            "label": if simple.complete { "decided" } else { "no counterexample found" },
            "derived_dim": simple.derived.dim(),
            "ideal_dims": simple.ideals.iter().map(Subspace::dim).collect::<Vec<_>>(),
            "witness": simple.witness.as_ref().map(subspace_json),
            "warnings": simple.warnings,
        }),
    );
    // [x, [y, z] + [z, y]] = 0 on random triples.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    const SAMPLES: usize = 20;
    for _ in 0..SAMPLES {
        let x = random_element(&mut rng, f, n);
        let y = random_element(&mut rng, f, n);
        let z = random_element(&mut rng, f, n);
        let sym = crate::linalg::add_vectors(&a.bracket(&y, &z)?, &a.bracket(&z, &y)?);
        let value = a.bracket(&x, &sym)?;
        if !is_zero_vector(&value) {
            failures.push(json!([vector_json(&x), vector_json(&y), vector_json(&z)]));
        }
    }
    m.insert(
        "symmetric_annihilation_samples".into(),
        json!({ "seed": seed, "samples": SAMPLES, "failures": failures }),
    );
    let mut subs = doc.subalgebras.clone();
    if let Some(vs) = extra {
        subs.push(Subspace::span(f, n, vs));
    }
    let reports = subs
        .iter()
        .map(|s| subspace_report(a, s))
        .collect::<Result<Vec<_>>>()?;
    m.insert("subspaces".into(), Value::from(reports));
    Ok(Outcome::ok(Value::Object(m)))
}

pub fn cmd_derivations(doc: &AlgebraDocument, kind: KindArg, seed: u64) -> Result<Outcome> {
    let a = &doc.algebra;
    a.require_verified()?;
    let (f, n) = (a.field(), a.dim());
    let mut m = header("derivations", Some(doc));
    match kind {
        KindArg::Derivation | KindArg::Anti => {
            let mk = if kind == KindArg::Derivation {
                MapKind::Derivation
            } else {
                MapKind::AntiDerivation
            };
            let space = map_space(a, mk);
            m.insert("kind".into(), serde_json::to_value(mk)?);
            m.insert("dim".into(), json!(space.dim()));
            m.insert(
                "basis".into(),
                Value::from(
                    space
                        .basis()
                        .iter()
                        .map(|v| matrix_json(&unflatten(f, n, v)))
                        .collect::<Vec<_>>(),
                ),
            );
        }
        KindArg::Bider => {
            let space = crate::derivations::biderivation_space(a);
            let pairs = space
                .basis()
                .iter()
                .map(|v| Biderivation::from_flat(a, v))
                .collect::<Result<Vec<_>>>()?;
            m.insert("kind".into(), json!("biderivation"));
            m.insert("dim".into(), json!(space.dim()));
            m.insert(
                "basis".into(),
                Value::from(
                    pairs
                        .iter()
                        .map(|p| json!({ "d": matrix_json(p.d()), "D": matrix_json(p.big_d()) }))
                        .collect::<Vec<_>>(),
                ),
            );
            let inner_ok = (0..n).all(|i| inner_biderivation(a, &a.basis_element(i)).is_ok());
            m.insert("inner_pairs_pass".into(), json!(inner_ok));
            // Closure of the bracket on seeded random combinations.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut closure = true;
            if !pairs.is_empty() {
                for _ in 0..10 {
                    let c1 = random_element(&mut rng, f, space.dim());
                    let c2 = random_element(&mut rng, f, space.dim());
                    let p1 = Biderivation::from_flat(a, &space.vector_from_coordinates(&c1))?;
                    let p2 = Biderivation::from_flat(a, &space.vector_from_coordinates(&c2))?;
                    closure &= bider_bracket(a, &p1, &p2).is_ok();
                }
            }
            m.insert("bracket_closure".into(), json!(closure));
        }
    }
    Ok(Outcome::ok(Value::Object(m)))
}

pub fn cmd_hnn(
    doc: &AlgebraDocument,
    sub: Vec<Element>,
    map: &crate::linalg::Matrix,
    kind: MapKind,
    degree: usize,
) -> Result<Outcome> {
    let a = &doc.algebra;
    let (f, n) = (a.field(), a.dim());
    for v in &sub {
        if v.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: v.len(),
            });
        }
    }
    let domain = Subspace::span(f, n, sub);
    let m = MapOnSubspace::restriction_of(&domain, map);
    let h = hnn_extend(a, &m, kind)?;
    let verdict = embedding_check(&h, degree)?;
    let mut out = header("hnn", Some(doc));
    out.insert("kind".into(), serde_json::to_value(kind)?);
    out.insert("subalgebra".into(), subspace_json(&domain));
    out.insert("relators".into(), Value::from(h.presentation.relators.iter().map(|r| r.to_string()).collect::<Vec<_>>()));
    out.insert("status".into(), json!(verdict.label()));
    out.insert("verdict".into(), serde_json::to_value(&verdict)?);
    let model = match exact_model_check(&h) {
        ModelOutcome::Model(model) => json!({
            "status": "model",
            "verified": model.verify(&h),
            "algebra": algebra_to_json(&model.algebra),
        }),
        ModelOutcome::FreeProduct => json!({ "status": "absent", "reason": "A = 0" }),
        ModelOutcome::NoExtension => json!({ "status": "absent", "reason": "map does not extend to the whole algebra" }),
        ModelOutcome::Rejected(r) => json!({
            "status": "absent",
            "reason": "semidirect candidates violate the Leibniz identity",
            "violation": r.violations.first().map(|v| v.triple),
        }),
    };
    out.insert("exact_model".into(), model);
    Ok(Outcome::ok(Value::Object(out)))
}

pub fn cmd_solve_find(doc: &AlgebraDocument, s: &crate::equations::EqSystem, budget: u64) -> Result<Outcome> {
    let out = solve_in(s, &doc.algebra, budget)?;
    let mut m = header("solve-find", Some(doc));
    m.insert("verdict".into(), json!(out.label()));
    m.insert("search_space".into(), json!(out.search_space));
    m.insert("checked".into(), json!(out.checked));
    m.insert("budget".into(), json!(out.budget));
    if let SolveVerdict::Found(asg) = &out.verdict {
        let obj: serde_json::Map<String, Value> =
            asg.iter().map(|(k, v)| (k.clone(), json!(vector_strings(v)))).collect();
        m.insert("assignment".into(), Value::Object(obj));
    }
    Ok(Outcome::ok(Value::Object(m)))
}

pub fn cmd_solve_divide(doc: &AlgebraDocument, a: &[Scalar], b: &[Scalar], config: DivisionConfig) -> Result<Outcome> {
    let out = division_witness(&doc.algebra, a, b, config)?;
    let mut m = header("solve-divide", Some(doc));
    m.insert("a".into(), vector_json(a));
    m.insert("b".into(), vector_json(b));
    m.insert("side".into(), serde_json::to_value(config.side)?);
    match out {
        DivisionOutcome::Inconsistent(c) => {
            m.insert("status".into(), json!("inconsistent-assignment"));
            m.insert("conflict".into(), serde_json::to_value(&c)?);
        }
        DivisionOutcome::Obstructed { map, embedding } => {
            m.insert("status".into(), json!("obstructed"));
            m.insert("domain".into(), subspace_json(&map.domain));
            m.insert("images".into(), crate::io::vectors_json(&map.images));
            m.insert("embedding".into(), serde_json::to_value(&embedding)?);
        }
        DivisionOutcome::Witness(w) => {
            m.insert("status".into(), json!(if w.verified { "verified" } else { "unverified" }));
            m.insert("method".into(), json!(w.method));
            m.insert("kind".into(), serde_json::to_value(w.kind)?);
            m.insert("domain".into(), subspace_json(&w.map.domain));
            m.insert("images".into(), crate::io::vectors_json(&w.map.images));
            m.insert("witness".into(), json!("t"));
            m.insert("embedding".into(), serde_json::to_value(&w.embedding)?);
            m.insert("relator_check".into(), json!(w.relator_check));
            m.insert("model_check".into(), serde_json::to_value(&w.model_check)?);
        }
    }
    Ok(Outcome::ok(Value::Object(m)))
}

pub fn cmd_free(expr: &str, field: Field, force: bool) -> Result<Outcome> {
    let e = parse_expr(expr, field)?;
    let mut m = header("free", None);
    m.insert("input".into(), json!(expr));
    let (kind, text, degree) = if e.uses_dialgebra() {
        let d = e.to_dialgebra(field);
        let deg = d.terms().map(|(w, _)| w.len()).max().unwrap_or(0);
        ("dialgebra", d.to_string(), deg)
    } else {
        let fe = e.to_free(field)?;
        ("free-leibniz", fe.to_string(), fe.degree())
    };
    if degree > DEFAULT_DEGREE_CAP && !force {
        return Err(Error::Usage(format!(
            "result has degree {degree} > {DEFAULT_DEGREE_CAP}; use --force"
        )));
    }
    m.insert("algebra".into(), json!(kind));
    m.insert("normal_form".into(), json!(text));
    Ok(Outcome::ok(Value::Object(m)))
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(Value::is_object) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for (i, item) in items.iter().enumerate() {
                            out.push_str(&format!("{pad}  [{i}]\n"));
                            render_text(item, indent + 2, out);
                        }
                    }
                    Value::String(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    other => out.push_str(&format!("{pad}{k}: {other}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

/// Serialized report in the requested format, newline-terminated.
pub fn render(outcome: &Outcome, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => crate::io::to_pretty(&outcome.report)?,
        Format::Text => {
            let mut s = String::new();
            render_text(&outcome.report, 0, &mut s);
            s
        }
    })
}

/// Runs the CLI on parsed arguments, printing to stdout/stderr; returns the exit code.
pub fn main_with(cli: Cli) -> i32 {
    match run(&cli).and_then(|o| Ok((render(&o, cli.global.format)?, o.exit_code))) {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
