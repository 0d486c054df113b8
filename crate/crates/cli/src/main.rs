//! `eqbundle`: check rotation data and isotropy data of cyclic group actions
//! on 4-manifolds, solve for missing weights, and evaluate moduli dimensions.
//!
//! Exit codes: 0 success, 1 a relation fails / no solution / non-integral
//! dimension, 2 unreadable input or bad parameters, 3 the input is readable
//! but unusable (validation failure, missing section, wrong unknown count).

mod doc;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use eqbundle::action::{connected_sum_points, connected_sum_spheres};
use eqbundle::arith::rational_mod;
use eqbundle::congruence::Quantity;
use eqbundle::series::{
    expand_boundary_term, expand_point_term, expand_sphere_term, expand_su2_point_term, expand_su2_sphere_term,
};
use eqbundle::{
    check_line_bundle, check_rotation_relations, check_su2, evaluate_dimension, gsignature_check, search_realizable,
    solve_existence, CongruenceReport, DimensionReport, PartialLineIsotropy, SearchParams, Unknown,
};
use serde_json::{json, Value};
use thiserror::Error;

use doc::{Document, LineDoc};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error("document has no [{0}] section")]
    MissingSection(&'static str),
    #[error("{0}")]
    Missing(String),
    #[error(transparent)]
    Core(#[from] eqbundle::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use eqbundle::Error as E;
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::MissingSection(_) | CliError::Missing(_) => 3,
            CliError::Core(E::NotSolvable | E::NonIntegerDimension(_)) => 1,
            CliError::Core(E::ZeroRotation { .. } | E::BadWeights(_)) => 2,
            CliError::Core(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "eqbundle", version, about = "Equivariant bundle congruences and invariant instanton dimensions")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Rotation,
    Line,
    Su2,
    Gsign,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Point,
    Sphere,
    Boundary,
    Su2Point,
    Su2Sphere,
}

#[derive(Clone, Copy, ValueEnum)]
enum Gluing {
    Points,
    Spheres,
}

#[derive(Subcommand)]
enum Command {
    /// Check congruences for a document (`-` reads standard input).
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "rotation")]
        mode: Mode,
    },
    /// Evaluate the G-signature at every nontrivial group element.
    Gsign { file: PathBuf },
    /// Fill in one unknown of the [line] section, e.g. `--free m[0]`.
    Solve {
        file: PathBuf,
        #[arg(long)]
        free: Vec<String>,
    },
    /// Dimension of the invariant moduli space for the [su2] lift.
    Dimension {
        file: PathBuf,
        /// Instanton number; defaults to su2.c2.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        /// Take m = 0 on every sphere when su2.m_spheres is absent.
        #[arg(long)]
        assume_m_zero: bool,
    },
    /// Expand one integrand times (t-1)^2 in s = t-1.
    Expand {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<i64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        alpha: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        m: i64,
        /// Isotropy weight (λ, or ℓ for the SU(2) terms).
        #[arg(long, alias = "ell", allow_hyphen_values = true, default_value_t = 0)]
        lambda: i64,
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Also reduce the coefficients mod this prime.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Equivariant connected sum of two documents.
    Sum {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum)]
        at: Gluing,
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long, default_value_t = 0)]
        j: usize,
        /// Reverse the orientation of the second summand first.
        #[arg(long)]
        reverse_second: bool,
    },
    /// Enumerate rotation data passing every rotation relation.
    Search {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        points: usize,
        /// Self-intersection of a fixed sphere; repeat for several spheres.
        #[arg(long = "sphere", allow_hyphen_values = true)]
        spheres: Vec<i64>,
        #[arg(long, allow_hyphen_values = true)]
        signature: i64,
        #[arg(long)]
        euler: i64,
        #[arg(long)]
        b2: i64,
        #[arg(long)]
        limit: Option<usize>,
    },
}

/// What a command produced: text, its JSON twin, and whether it passed.
struct Output {
    text: String,
    json: Value,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let text = if cli.machine {
                serde_json::to_string_pretty(&out.json).expect("json")
            } else {
                out.text.trim_end().to_string()
            };
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            if cli.machine {
                let _ =
                    writeln!(std::io::stdout().lock(), "{}", json!({ "error": e.to_string(), "exit": e.exit_code() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Check { file, mode } => check(&file, mode),
        Command::Gsign { file } => check(&file, Mode::Gsign),
        Command::Solve { file, free } => solve(&file, &free),
        Command::Dimension { file, k, assume_m_zero } => dimension(&file, k, assume_m_zero),
        Command::Expand { kind, a, b, c, alpha, m, lambda, order, p } => {
            expand(kind, a, b, c, alpha, m, lambda, order, p)
        }
        Command::Sum { first, second, at, i, j, reverse_second } => sum(&first, &second, at, i, j, reverse_second),
        Command::Search { p, points, spheres, signature, euler, b2, limit } => {
            let params = SearchParams { p, n_points: points, sphere_alphas: spheres, signature, euler, b2 };
            search(&params, limit)
        }
    }
}

fn quantity(q: &Quantity) -> Value {
    match q {
        Quantity::Residue(r) => json!(r.value()),
        Quantity::Exact(x) => json!(x.to_string()),
        Quantity::Field(x) => json!(x.to_string()),
    }
}

fn report_output(header: String, report: &CongruenceReport) -> Output {
    let relations: Vec<Value> = report
        .relations
        .iter()
        .map(|r| json!({ "name": r.name, "lhs": quantity(&r.lhs), "required": quantity(&r.required), "passed": r.passed }))
        .collect();
    Output {
        text: format!("{header}\n{report}"),
        json: json!({ "passed": report.passed(), "relations": relations }),
        passed: report.passed(),
    }
}

fn check(file: &Path, mode: Mode) -> Result<Output, CliError> {
    let doc = Document::load(file)?;
    let action = doc.action()?;
    let report = match mode {
        Mode::Rotation => check_rotation_relations(&action)?,
        Mode::Gsign => gsignature_check(&action)?,
        Mode::Line => check_line_bundle(&action, &doc.line_isotropy()?)?,
        Mode::Su2 => check_su2(&action, &doc.su2_isotropy(false)?)?,
    };
    Ok(report_output(action.to_string(), &report))
}

fn solve(file: &Path, free: &[String]) -> Result<Output, CliError> {
    let mut doc = Document::load(file)?;
    let action = doc.action()?;
    let full = doc.line_isotropy()?;
    let unknowns: Vec<Unknown> = free
        .iter()
        .map(|s| s.parse().map_err(|e: eqbundle::Error| CliError::Usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    let mut partial = match unknowns.first() {
        Some(&u) => PartialLineIsotropy::with_free(&full, u)?,
        None => PartialLineIsotropy {
            lambda_points: full.lambda_points.iter().copied().map(Some).collect(),
            lambda_spheres: full.lambda_spheres.iter().copied().map(Some).collect(),
            m_spheres: full.m_spheres.iter().copied().map(Some).collect(),
        },
    };
    for &u in unknowns.iter().skip(1) {
        *partial.slot(u)? = None;
    }
    let completion = solve_existence(&action, &partial)?;
    let iso = &completion.isotropy;
    let value = match completion.free {
        Unknown::LambdaPoint(i) => iso.lambda_points[i],
        Unknown::LambdaSphere(j) => iso.lambda_spheres[j],
        Unknown::M(j) => iso.m_spheres[j],
    };
    doc.line = Some(LineDoc {
        lambda_points: iso.lambda_points.clone(),
        lambda_spheres: iso.lambda_spheres.clone(),
        m_spheres: iso.m_spheres.clone(),
        c1_squared: full.c1_squared,
    });
    let note = if completion.any_value { " (any value works)" } else { "" };
    Ok(Output {
        text: format!("# {} = {value} (mod {}){note}\n{}", completion.free, action.p(), doc.to_toml()),
        json: json!({
            "free": completion.free.to_string(),
            "value": value,
            "any_value": completion.any_value,
            "document": serde_json::to_value(&doc).expect("json"),
        }),
        passed: true,
    })
}

fn dimension_json(r: &DimensionReport) -> Value {
    let terms: Vec<Value> = r.terms.iter().map(|t| json!({ "name": t.name, "value": t.value.to_string() })).collect();
    json!({
        "p": r.p,
        "k": r.k,
        "chi_quotient": r.quotient.euler.to_string(),
        "sign_quotient": r.quotient.signature.to_string(),
        "terms": terms,
        "total": r.total.to_string(),
        "dimension": r.dimension(),
    })
}

fn dimension(file: &Path, k: Option<i64>, assume_m_zero: bool) -> Result<Output, CliError> {
    let doc = Document::load(file)?;
    let action = doc.action()?;
    let lift = doc.adjoint_lift(assume_m_zero)?;
    let k = k.or(doc.c2()).ok_or_else(|| CliError::Missing("no --k given and su2.c2 is missing".into()))?;
    let report = evaluate_dimension(&action, &lift, k)?;
    Ok(Output {
        text: format!("{action}\n{report}"),
        json: dimension_json(&report),
        passed: report.dimension().is_some(),
    })
}

#[allow(clippy::too_many_arguments)]
fn expand(
    kind: Kind,
    a: Option<i64>,
    b: Option<i64>,
    c: Option<i64>,
    alpha: i64,
    m: i64,
    lambda: i64,
    order: usize,
    p: Option<u64>,
) -> Result<Output, CliError> {
    let need = |v: Option<i64>, name: &str| v.ok_or_else(|| CliError::Usage(format!("--{name} is required")));
    let (label, series) = match kind {
        Kind::Point => {
            let (a, b) = (need(a, "a")?, need(b, "b")?);
            (format!("point a={a} b={b} lambda={lambda}"), expand_point_term(a, b, lambda, order)?)
        }
        Kind::Sphere => {
            let c = need(c, "c")?;
            (format!("sphere c={c} alpha={alpha} lambda={lambda}"), expand_sphere_term(c, alpha, lambda, order)?)
        }
        Kind::Boundary => {
            let c = need(c, "c")?;
            (format!("boundary c={c} m={m} lambda={lambda}"), expand_boundary_term(c, m, lambda, order)?)
        }
        Kind::Su2Point => {
            let (a, b) = (need(a, "a")?, need(b, "b")?);
            (format!("su2-point a={a} b={b} ell={lambda}"), expand_su2_point_term(a, b, lambda, order)?)
        }
        Kind::Su2Sphere => {
            let c = need(c, "c")?;
            (
                format!("su2-sphere c={c} alpha={alpha} m={m} ell={lambda}"),
                expand_su2_sphere_term(c, alpha, m, lambda, order)?,
            )
        }
    };
    if let Some(p) = p {
        if !eqbundle::arith::is_prime(p) {
            return Err(CliError::Usage(format!("{p} is not prime")));
        }
    }
    let mut text = format!("{label}\n{series}\n");
    let mut coeffs = Vec::new();
    for (i, q) in series.coeffs().iter().enumerate() {
        let reduced = p.map(|p| rational_mod(q, p).ok().map(|r| r.value()));
        text.push_str(&format!("s^{i}: {q}"));
        match reduced {
            Some(Some(r)) => text.push_str(&format!("  = {r} (mod {})", p.unwrap())),
            Some(None) => text.push_str(&format!("  (denominator divisible by {})", p.unwrap())),
            None => {}
        }
        text.push('\n');
        coeffs.push(json!({ "order": i, "value": q.to_string(), "mod_p": reduced.flatten() }));
    }
    Ok(Output { text, json: json!({ "term": label, "p": p, "coefficients": coeffs }), passed: true })
}

fn sum(first: &Path, second: &Path, at: Gluing, i: usize, j: usize, reverse_second: bool) -> Result<Output, CliError> {
    let x = Document::load(first)?.action()?;
    let mut y = Document::load(second)?.action()?;
    if reverse_second {
        y = y.reversed();
    }
    let glued = match at {
        Gluing::Points => connected_sum_points(&x, i, &y, j)?,
        Gluing::Spheres => connected_sum_spheres(&x, i, &y, j)?,
    };
    let doc = Document::from_action(&glued);
    Ok(Output { text: doc.to_toml(), json: serde_json::to_value(&doc).expect("json"), passed: true })
}

fn search(params: &SearchParams, limit: Option<usize>) -> Result<Output, CliError> {
    let found = search_realizable(params, limit)?;
    let mut text = String::new();
    let mut docs = Vec::new();
    for x in &found {
        let x = x.canonical();
        text.push_str(&format!("{x}\n"));
        docs.push(serde_json::to_value(Document::from_action(&x)).expect("json"));
    }
    text.push_str(&format!("# {} datasets", found.len()));
    Ok(Output { text, json: json!({ "count": found.len(), "actions": docs }), passed: true })
}
