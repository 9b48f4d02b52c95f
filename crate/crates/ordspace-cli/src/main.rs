//! Command-line surface for computing with finite spaces of orderings.
//!
//! Subcommands:
//! - `quotient`: build the finite quotient generated by polynomials;
//! - `analyze`: components, fans, stability and decomposition of a space;
//! - `verify`: axiom verification with a witness on failure;
//! - `pp`: evaluate pp formulas, search counterexample subspaces, check
//!   towers, and print the cardinality bound B(n, k);
//! - `tower`: build a tower of quotients and verify the inverse-system laws;
//! - `restrict`: map a symbolic ordering to a quotient point.
//!
//! All JSON output is canonical: fixed field order, no maps with unstable
//! iteration, so identical inputs produce byte-identical output. Exit code
//! 0 on success, 1 on domain errors or failed verdicts, 2 on usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ordspace::ppform::{
    bound_b, check_tower, evaluate, parse_formula, search_counterexample_subspace, Binding, Bound,
    PPFormula, Verdict,
};
use ordspace::qx::{
    build_tower, construct_quotient, parse_ordering_spec, restrict, verify_inverse_system,
    QuotientResult, RawQuotient, RawTower, Tower,
};
use ordspace::ratpoly::parse_polynomial;
use ordspace::space::{AxiomFailure, AxiomVerdict, FiniteSpace, GroupElement, RawSpace, VerifyMethod};
use ordspace::structure::{
    components, decompose, fan_graph_dot, four_fans, stability_index, verify_candidate,
    DecompositionTree,
};

#[derive(Parser)]
#[command(name = "ordspace", version, about = "Exact computation with finite spaces of orderings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Build the finite quotient generated by the given polynomials.
    Quotient(QuotientArgs),
    /// Report components, four-element fans, stability index and the
    /// decomposition tree of a space.
    Analyze(AnalyzeArgs),
    /// Verify the space axioms; fails with a witness.
    Verify(VerifyArgs),
    /// Evaluate pp formulas or print the cardinality bound.
    Pp(PpArgs),
    /// Build a tower of quotients; levels are separated by `/`.
    Tower(TowerArgs),
    /// Map a symbolic ordering onto a point of a quotient.
    Restrict(RestrictArgs),
}

#[derive(Args)]
struct QuotientArgs {
    /// Polynomials such as "x^2-2" (at least one).
    #[arg(required = true)]
    polys: Vec<String>,
    /// Print `|X|=.. |G|=.. components=.. stindex=..` instead of JSON.
    #[arg(long)]
    summary: bool,
    /// Also write the quotient JSON to this path.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Path to a space JSON file (`-` for stdin).
    space: String,
    /// Output format; `dot` emits the fan graph.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Shortcut for `--format dot`.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Path to a space JSON file (`-` for stdin).
    space: String,
}

#[derive(Args)]
struct PpArgs {
    /// Path to a space JSON file (`-` for stdin); not needed with --bound
    /// or --tower.
    space: Option<String>,
    /// A pp formula, e.g. "E t1 : t1 in D(1,-1)".
    #[arg(long)]
    formula: Option<String>,
    /// A UTF-8 file with one formula per line; `#` starts a comment.
    #[arg(long)]
    formulas: Option<PathBuf>,
    /// Binding JSON: {"a1": [bits...], ...} over the space generators.
    #[arg(long)]
    binding: Option<PathBuf>,
    /// Also search for a counterexample subspace from seeds of up to N
    /// points.
    #[arg(long, value_name = "N")]
    subspace_search: Option<usize>,
    /// Evaluate along a tower JSON file instead of a single space.
    #[arg(long)]
    tower: Option<PathBuf>,
    /// Tower level the binding lives at (0-based).
    #[arg(long, default_value = "0")]
    level: usize,
    /// Print the exact cardinality bound B(n, k) or its symbolic tower.
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    bound: Option<Vec<u32>>,
}

#[derive(Args)]
struct TowerArgs {
    /// Polynomial lists separated by `/`, e.g. `x^2-2 / x^2-3`.
    #[arg(required = true)]
    levels: Vec<String>,
    /// Also write the tower JSON to this path.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RestrictArgs {
    /// Path to a quotient JSON file (`-` for stdin).
    quotient: String,
    /// Ordering: `inf+`, `inf-`, `root(<poly>,<index>,<+|->)`,
    /// `cut(<lo>,<hi>)`.
    ordering: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Quotient(args) => cmd_quotient(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Pp(args) => cmd_pp(args),
        Command::Tower(args) => cmd_tower(args),
        Command::Restrict(args) => cmd_restrict(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}

type CmdResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn read_input(path: &str) -> Result<String, Box<dyn std::error::Error>> {
    if path == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn load_space(path: &str) -> Result<FiniteSpace, Box<dyn std::error::Error>> {
    let raw: RawSpace = serde_json::from_str(&read_input(path)?)?;
    Ok(raw.to_space()?)
}

fn load_quotient(path: &str) -> Result<QuotientResult, Box<dyn std::error::Error>> {
    let raw: RawQuotient = serde_json::from_str(&read_input(path)?)?;
    Ok(raw.to_quotient()?)
}

fn load_tower(path: &PathBuf) -> Result<Tower, Box<dyn std::error::Error>> {
    let raw: RawTower = serde_json::from_str(&fs::read_to_string(path)?)?;
    Ok(raw.to_tower()?)
}

fn parse_polys(texts: &[String]) -> Result<Vec<ordspace::ratpoly::Polynomial>, Box<dyn std::error::Error>> {
    texts.iter().map(|t| Ok(parse_polynomial(t)?)).collect()
}

fn emit(value: &impl Serialize) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn summary_line(q: &QuotientResult) -> String {
    let comps = components(&q.space).map(|c| c.len().to_string()).unwrap_or_else(|_| "na".into());
    let stindex =
        stability_index(&q.space).map(|s| s.to_string()).unwrap_or_else(|_| "na".into());
    format!(
        "|X|={} |G|={} components={} stindex={}",
        q.space.num_points(),
        q.space.group_order(),
        comps,
        stindex
    )
}

fn cmd_quotient(args: QuotientArgs) -> CmdResult {
    let polys = parse_polys(&args.polys)?;
    let q = construct_quotient(&polys)?;
    let raw = RawQuotient::from_quotient(&q);
    if let Some(path) = &args.output {
        fs::write(path, serde_json::to_string(&raw)?)?;
    }
    if args.summary {
        println!("{}", summary_line(&q));
    } else {
        emit(&raw);
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct AnalyzeReport {
    components: Vec<Vec<String>>,
    four_fans: Vec<Vec<String>>,
    stability_index: Option<u32>,
    decomposition: DecompositionTree,
}

fn cmd_analyze(args: AnalyzeArgs) -> CmdResult {
    let space = load_space(&args.space)?;
    let verdict = ordspace::structure::verify_space(&space);
    if let AxiomVerdict::Fail(_) = &verdict {
        emit(&verdict_json(&verdict, &space));
        return Ok(ExitCode::from(1));
    }
    let format = if args.dot { Format::Dot } else { args.format };
    if format == Format::Dot {
        print!("{}", fan_graph_dot(&space)?);
        return Ok(ExitCode::SUCCESS);
    }
    let labels = |idx: &[usize]| idx.iter().map(|&x| space.label(x).to_string()).collect();
    let report = AnalyzeReport {
        components: components(&space)?.iter().map(|c| labels(c)).collect(),
        four_fans: four_fans(&space)?.iter().map(|q| labels(q)).collect(),
        stability_index: stability_index(&space).ok(),
        decomposition: decompose(&space)?,
    };
    match format {
        Format::Json => emit(&report),
        Format::Text => {
            println!("points: {}", space.num_points());
            println!("group order: {}", space.group_order());
            println!(
                "components: {}",
                report
                    .components
                    .iter()
                    .map(|c| format!("{{{}}}", c.join(", ")))
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            println!("four-element fans: {}", report.four_fans.len());
            for fan in &report.four_fans {
                println!("  {{{}}}", fan.join(", "));
            }
            match report.stability_index {
                Some(s) => println!("stability index: {}", s),
                None => println!("stability index: not computed (size cap)"),
            }
            println!("decomposition: {}", render_tree(&report.decomposition));
        }
        Format::Dot => unreachable!(),
    }
    Ok(ExitCode::SUCCESS)
}

fn render_tree(t: &DecompositionTree) -> String {
    match t {
        DecompositionTree::Leaf { label } => format!("point({})", label),
        DecompositionTree::Sum { children } => {
            let inner: Vec<String> = children.iter().map(render_tree).collect();
            format!("sum({})", inner.join(", "))
        }
        DecompositionTree::Ext { rank, child } => {
            format!("ext({}, {})", render_tree(child), rank)
        }
    }
}

#[derive(Serialize)]
struct VerdictJson {
    passed: bool,
    method: Option<&'static str>,
    triples_checked: Option<u64>,
    failure: Option<FailureJson>,
}

#[derive(Serialize)]
struct FailureJson {
    kind: &'static str,
    detail: String,
    witness: Option<WitnessJson>,
}

#[derive(Serialize)]
struct WitnessJson {
    a: String,
    b: String,
    c: String,
    element: String,
    missing_from: &'static str,
}

fn verdict_json(v: &AxiomVerdict, space: &FiniteSpace) -> VerdictJson {
    match v {
        AxiomVerdict::Pass { method, triples_checked } => VerdictJson {
            passed: true,
            method: Some(match method {
                VerifyMethod::Exhaustive => "exhaustive",
                VerifyMethod::StructuralCertificate => "structural-certificate",
            }),
            triples_checked: Some(*triples_checked),
            failure: None,
        },
        AxiomVerdict::Fail(f) => VerdictJson {
            passed: false,
            method: None,
            triples_checked: None,
            failure: Some(match f {
                AxiomFailure::Structural(msg) => {
                    FailureJson { kind: "structural", detail: msg.clone(), witness: None }
                }
                AxiomFailure::Undecomposable(msg) => {
                    FailureJson { kind: "undecomposable", detail: msg.clone(), witness: None }
                }
                AxiomFailure::Associativity { a, b, c, element, missing_from_left } => FailureJson {
                    kind: "associativity",
                    detail: "value-set associativity fails".into(),
                    witness: Some(WitnessJson {
                        a: space.render_element(*a),
                        b: space.render_element(*b),
                        c: space.render_element(*c),
                        element: space.render_element(*element),
                        missing_from: if *missing_from_left { "left" } else { "right" },
                    }),
                },
            }),
        },
    }
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let raw: RawSpace = serde_json::from_str(&read_input(&args.space)?)?;
    let verdict = verify_candidate(&raw);
    // a failed structural check means there is no space to render elements
    // against; fall back to a one-point placeholder for rendering
    let rendered = match raw.to_space() {
        Ok(space) => verdict_json(&verdict, &space),
        Err(_) => verdict_json(&verdict, &ordspace::structure::one_point_space("p")),
    };
    emit(&rendered);
    Ok(if rendered.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
#[serde(untagged)]
enum BoundJson {
    Exact { exact: String },
    Tower { pow2: u64, scale_log2: u64, inner: Box<BoundJson> },
}

fn bound_json(b: &Bound) -> BoundJson {
    match b {
        Bound::Exact(v) => BoundJson::Exact { exact: v.to_string() },
        Bound::Tower { outer_pow2, scale_log2, inner } => BoundJson::Tower {
            pow2: *outer_pow2,
            scale_log2: *scale_log2,
            inner: Box::new(bound_json(inner)),
        },
    }
}

#[derive(Serialize)]
struct PpVerdictJson {
    formula: String,
    holds: bool,
    witness: Option<BTreeMap<String, String>>,
    level: Option<usize>,
    counterexample_seed: Option<Vec<String>>,
}

fn witness_map(
    f: &PPFormula,
    witness: &[GroupElement],
    space: &FiniteSpace,
) -> BTreeMap<String, String> {
    f.vars
        .iter()
        .zip(witness)
        .map(|(v, g)| (v.clone(), space.render_element(*g)))
        .collect()
}

fn load_binding(
    path: &Option<PathBuf>,
    space: &FiniteSpace,
) -> Result<Binding, Box<dyn std::error::Error>> {
    let mut binding = Binding::new();
    if let Some(p) = path {
        let raw: BTreeMap<String, Vec<u8>> = serde_json::from_str(&fs::read_to_string(p)?)?;
        for (name, bits) in raw {
            if bits.len() != space.rank() {
                return Err(format!(
                    "binding `{}` has {} bits, the space has rank {}",
                    name,
                    bits.len(),
                    space.rank()
                )
                .into());
            }
            let mut value = 0u64;
            for (i, &b) in bits.iter().enumerate() {
                if b > 1 {
                    return Err("binding bits must be 0 or 1".into());
                }
                value |= (b as u64) << i;
            }
            binding.insert(name, GroupElement::from_bits(value));
        }
    }
    Ok(binding)
}

fn load_formulas(args: &PpArgs) -> Result<Vec<PPFormula>, Box<dyn std::error::Error>> {
    let mut out = Vec::new();
    if let Some(f) = &args.formula {
        out.push(parse_formula(f)?);
    }
    if let Some(path) = &args.formulas {
        for line in fs::read_to_string(path)?.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                out.push(parse_formula(line)?);
            }
        }
    }
    Ok(out)
}

fn cmd_pp(args: PpArgs) -> CmdResult {
    if let Some(nk) = &args.bound {
        let b = bound_b(nk[0], nk[1]);
        emit(&bound_json(&b));
        return Ok(ExitCode::SUCCESS);
    }
    let formulas = load_formulas(&args)?;
    if formulas.is_empty() {
        return Err("nothing to do: pass --formula, --formulas, or --bound".into());
    }
    if let Some(tower_path) = &args.tower {
        let tower = load_tower(tower_path)?;
        if args.level >= tower.levels.len() {
            return Err(format!("tower has no level {}", args.level).into());
        }
        let base = &tower.levels[args.level].space;
        let binding = load_binding(&args.binding, base)?;
        let mut reports = Vec::new();
        for f in &formulas {
            let outcome = check_tower(&tower, f, &binding, args.level)?;
            reports.push(match outcome {
                Some((level, witness)) => PpVerdictJson {
                    formula: f.to_string(),
                    holds: true,
                    witness: Some(witness_map(f, &witness, &tower.levels[level].space)),
                    level: Some(level),
                    counterexample_seed: None,
                },
                None => PpVerdictJson {
                    formula: f.to_string(),
                    holds: false,
                    witness: None,
                    level: None,
                    counterexample_seed: None,
                },
            });
        }
        emit_reports(reports);
        return Ok(ExitCode::SUCCESS);
    }
    let space_path =
        args.space.as_ref().ok_or("a space JSON path is required without --bound/--tower")?;
    let space = load_space(space_path)?;
    let binding = load_binding(&args.binding, &space)?;
    let mut reports = Vec::new();
    for f in &formulas {
        let verdict = evaluate(&space, f, &binding)?;
        let seed = match args.subspace_search {
            Some(n) => search_counterexample_subspace(&space, f, &binding, n)?
                .map(|seed| seed.iter().map(|&x| space.label(x).to_string()).collect()),
            None => None,
        };
        reports.push(PpVerdictJson {
            formula: f.to_string(),
            holds: verdict.holds(),
            witness: match &verdict {
                Verdict::True(w) => Some(witness_map(f, w, &space)),
                Verdict::False => None,
            },
            level: None,
            counterexample_seed: seed,
        });
    }
    emit_reports(reports);
    Ok(ExitCode::SUCCESS)
}

fn emit_reports(reports: Vec<PpVerdictJson>) {
    if reports.len() == 1 {
        emit(&reports[0]);
    } else {
        emit(&reports);
    }
}

#[derive(Serialize)]
struct TowerOutput {
    tower: RawTower,
    verification: TowerVerificationJson,
}

#[derive(Serialize)]
struct TowerVerificationJson {
    passed: bool,
    checks: u64,
    failure: Option<String>,
}

fn cmd_tower(args: TowerArgs) -> CmdResult {
    let mut levels: Vec<Vec<String>> = vec![Vec::new()];
    for token in &args.levels {
        if token == "/" {
            levels.push(Vec::new());
        } else {
            levels.last_mut().unwrap().push(token.clone());
        }
    }
    if levels.iter().any(|l| l.is_empty()) {
        return Err("every tower level needs at least one polynomial".into());
    }
    let mut parsed = Vec::with_capacity(levels.len());
    for level in &levels {
        parsed.push(parse_polys(level)?);
    }
    let tower = build_tower(&parsed)?;
    let report = verify_inverse_system(&tower)?;
    let output = TowerOutput {
        tower: RawTower::from_tower(&tower),
        verification: TowerVerificationJson {
            passed: report.passed,
            checks: report.checks,
            failure: report.failure.clone(),
        },
    };
    if let Some(path) = &args.output {
        fs::write(path, serde_json::to_string(&output.tower)?)?;
    }
    emit(&output);
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct RestrictOutput {
    point: String,
}

fn cmd_restrict(args: RestrictArgs) -> CmdResult {
    let q = load_quotient(&args.quotient)?;
    let ord = parse_ordering_spec(&args.ordering)?;
    let point = restrict(&ord, &q)?;
    emit(&RestrictOutput { point: q.space.label(point).to_string() });
    Ok(ExitCode::SUCCESS)
}
