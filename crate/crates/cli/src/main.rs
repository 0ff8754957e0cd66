//! Command line front end. All mathematics lives in the library; this file
//! only parses files and flags, dispatches, and serializes reports.
//!
//! Exit codes: 0 success, 1 input error (flags, files, expressions),
//! 2 semantic error from a pipeline, 3 internal invariant violation.

use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{self, ExitCode};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use realpv::cohomology::{self, ProjectiveCocycle, TrivialityReport, TwistedForm};
use realpv::forms::Signature;
use realpv::groups::{self, GroupSpec};
use realpv::{classify, expr};
use realpv::{
    rational_solutions, DiffModule, GaussRational, Mat, OrderingSpec, RatFunc, Rational, Scalar,
    SolverBounds,
};

#[derive(Parser)]
#[command(
    name = "realpv",
    version,
    about = "Differential modules over Q(z) and Q(i)(z): rational flat sections, \
             invariant forms, orthogonal classification, Galois cocycles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Basis of rational flat sections of y' = Ay
    Flat(FlatArgs),
    /// Invariant form, signature and group label of an orthogonal module
    Classify(ClassifyArgs),
    /// Radical solutions of y' = r*y and their behavior under orderings
    Rank1(Rank1Args),
    /// Cocycles for conjugation on Q(i): validation, triviality, twisting
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// Module file with a prescribed differential Galois group, on stdout
    Generate(GenerateArgs),
}

#[derive(Args)]
struct FlatArgs {
    /// module file (JSON)
    file: PathBuf,
    /// ansatz denominator, for systems outside the Fuchsian fragment
    #[arg(long, requires = "numerator_degree")]
    denominator: Option<String>,
    /// numerator degree bound for the ansatz
    #[arg(long, requires = "denominator")]
    numerator_degree: Option<usize>,
    /// human-readable output instead of JSON
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    /// module file (JSON)
    file: PathBuf,
    /// plus-infinity | minus-infinity | at:<rational>:+ | at:<rational>:-
    #[arg(long, default_value = "plus-infinity", value_parser = parse_ordering)]
    ordering: OrderingSpec,
    /// human-readable output instead of JSON
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct Rank1Args {
    /// right-hand side r of y' = r*y, over Q
    expression: String,
    /// plus-infinity | minus-infinity | at:<rational>:+ | at:<rational>:-
    #[arg(long, default_value = "plus-infinity", value_parser = parse_ordering)]
    ordering: OrderingSpec,
    /// human-readable output instead of JSON
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand)]
enum CocycleCmd {
    /// Check the cocycle identity and group membership
    Validate(CocycleArgs),
    /// Triviality over the real closure, with certificates
    Trivial(CocycleArgs),
    /// Twisted form and signatures, for SO cocycles
    TwistForm(CocycleArgs),
    /// Lift a projective representative through the center (odd SO)
    Lift(CocycleArgs),
}

#[derive(Args)]
struct CocycleArgs {
    /// cocycle file (JSON)
    file: PathBuf,
    /// seed for certificate searches
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// human-readable output instead of JSON
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// SO | SL | Sp | SU2
    #[arg(long)]
    group: String,
    /// diagonal of the invariant form, e.g. "1,1,-1" (SO only)
    #[arg(long)]
    form: Option<String>,
    /// matrix size (SL and Sp only)
    #[arg(long)]
    n: Option<usize>,
    /// comma-separated coefficients, one per Lie algebra generator
    #[arg(long)]
    coeffs: Option<String>,
    /// draw coefficient numerators from this seed instead of the default 1
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match panic::catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
        Err(_) => {
            eprintln!("error: internal invariant violated");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Flat(args) => cmd_flat(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Rank1(args) => cmd_rank1(args),
        Command::Cocycle(cmd) => cmd_cocycle(cmd),
        Command::Generate(args) => cmd_generate(args),
    }
}

struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn input(e: impl Display) -> CmdError {
        CmdError { code: 1, message: e.to_string() }
    }

    fn semantic(e: impl Display) -> CmdError {
        CmdError { code: 2, message: e.to_string() }
    }
}

type CmdResult = Result<(), CmdError>;

// ---------- file formats ----------

#[derive(Serialize, Deserialize)]
struct ModuleFile {
    field: String,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type")]
enum GroupFile {
    #[serde(rename = "SL")]
    Sl { n: usize },
    #[serde(rename = "Sp")]
    Sp { n: usize },
    #[serde(rename = "SO")]
    So { form: Vec<Vec<String>> },
    #[serde(rename = "SU2")]
    Su2,
    #[serde(rename = "GL")]
    Gl { n: usize },
}

#[derive(Serialize, Deserialize)]
struct CocycleFile {
    group: GroupFile,
    matrix: Vec<Vec<String>>,
}

enum Module {
    Q(DiffModule<Rational>),
    Qi(DiffModule<GaussRational>),
}

fn read_module(path: &Path) -> Result<Module, CmdError> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CmdError::input(format!("{}: {e}", path.display())))?;
    let file: ModuleFile = serde_json::from_str(&raw).map_err(CmdError::input)?;
    match file.field.as_str() {
        "Q" => Ok(Module::Q(DiffModule::new(parse_matrix::<Rational>(&file.matrix)?))),
        "Qi" => Ok(Module::Qi(DiffModule::new(parse_matrix::<GaussRational>(&file.matrix)?))),
        other => {
            Err(CmdError::input(format!("unknown field {other:?}: expected \"Q\" or \"Qi\"")))
        }
    }
}

fn parse_matrix<S: Scalar>(rows: &[Vec<String>]) -> Result<Mat<RatFunc<S>>, CmdError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CmdError::input("matrix must be square and nonempty"));
    }
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        for s in row {
            data.push(expr::parse(s).map_err(|e| CmdError::input(format!("{s:?}: {e}")))?);
        }
    }
    Ok(Mat::new(n, n, data))
}

fn constant_of<S: Scalar>(f: &RatFunc<S>) -> Option<S> {
    let p = f.to_poly()?;
    match p.degree() {
        None => Some(S::zero()),
        Some(0) => Some(p.coeff(0)),
        Some(_) => None,
    }
}

fn parse_constant_matrix<S: Scalar>(rows: &[Vec<String>]) -> Result<Mat<S>, CmdError> {
    let m = parse_matrix::<S>(rows)?;
    let mut data = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            data.push(
                constant_of(&m[(i, j)])
                    .ok_or_else(|| CmdError::input("entries must be constants (no z)"))?,
            );
        }
    }
    Ok(Mat::new(m.rows(), m.cols(), data))
}

fn group_spec(g: &GroupFile) -> Result<GroupSpec, CmdError> {
    match g {
        GroupFile::Sl { n } => Ok(GroupSpec::Sl(*n)),
        GroupFile::Gl { n } => Ok(GroupSpec::Gl(*n)),
        GroupFile::Sp { n } => GroupSpec::sp(*n).map_err(CmdError::input),
        GroupFile::Su2 => Ok(GroupSpec::Su2),
        GroupFile::So { form } => {
            GroupSpec::so(parse_constant_matrix::<Rational>(form)?).map_err(CmdError::input)
        }
    }
}

fn parse_ordering(s: &str) -> Result<OrderingSpec, String> {
    match s {
        "plus-infinity" => return Ok(OrderingSpec::PlusInfinity),
        "minus-infinity" => return Ok(OrderingSpec::MinusInfinity),
        _ => {}
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 && parts[0] == "at" {
        let point = expr::parse::<Rational>(parts[1])
            .ok()
            .as_ref()
            .and_then(constant_of)
            .ok_or_else(|| format!("{:?} is not a rational point", parts[1]))?;
        return match parts[2] {
            "+" => Ok(OrderingSpec::AtPointPlus(point)),
            "-" => Ok(OrderingSpec::AtPointMinus(point)),
            side => Err(format!("side must be + or -, got {side:?}")),
        };
    }
    Err(format!("expected plus-infinity, minus-infinity, at:<rational>:+ or at:<rational>:-, got {s:?}"))
}

// ---------- rendering ----------

fn mat_strings<S: Scalar>(m: &Mat<RatFunc<S>>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| expr::ratfunc_string(&m[(i, j)])).collect())
        .collect()
}

fn const_mat_strings<S: Scalar>(m: &Mat<S>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| expr::ratfunc_string(&RatFunc::from_scalar(m[(i, j)].clone())))
                .collect()
        })
        .collect()
}

fn signature_pair(s: &Signature) -> [usize; 2] {
    [s.plus, s.minus]
}

/// Write one line to stdout. A broken pipe means the consumer stopped
/// reading (realpv ... | head); that is a clean exit, not an internal error.
fn emit(line: impl Display) {
    let mut out = io::stdout().lock();
    if let Err(e) = writeln!(out, "{line}") {
        if e.kind() == io::ErrorKind::BrokenPipe {
            process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        process::exit(3);
    }
}

fn print_json<T: Serialize>(report: &T) -> CmdResult {
    let body = serde_json::to_string_pretty(report)
        .map_err(|e| CmdError { code: 3, message: e.to_string() })?;
    emit(body);
    Ok(())
}

fn rows_text(rows: &[Vec<String>], indent: &str) -> String {
    rows.iter()
        .map(|r| format!("{indent}[{}]", r.join(", ")))
        .collect::<Vec<_>>()
        .join("\n")
}

// ---------- flat ----------

#[derive(Serialize)]
struct FlatReport {
    basis: Vec<Vec<String>>,
    complete: bool,
}

fn cmd_flat(args: FlatArgs) -> CmdResult {
    match read_module(&args.file)? {
        Module::Q(m) => flat_impl(&m, &args),
        Module::Qi(m) => flat_impl(&m, &args),
    }
}

fn flat_impl<S: Scalar>(m: &DiffModule<S>, args: &FlatArgs) -> CmdResult {
    let bounds = match (&args.denominator, args.numerator_degree) {
        (Some(d), Some(k)) => {
            let f: RatFunc<S> =
                expr::parse(d).map_err(|e| CmdError::input(format!("{d:?}: {e}")))?;
            let p = f
                .to_poly()
                .ok_or_else(|| CmdError::input("the ansatz denominator must be a polynomial"))?;
            Some(SolverBounds { denominator: p, numerator_degree: k })
        }
        _ => None,
    };
    let flat = rational_solutions(m.matrix(), bounds.as_ref()).map_err(CmdError::semantic)?;
    let report = FlatReport {
        basis: flat
            .vectors
            .iter()
            .map(|v| v.iter().map(|f| expr::ratfunc_string(f)).collect())
            .collect(),
        complete: flat.complete,
    };
    if args.text {
        let kind = if report.complete { "complete basis" } else { "sections found under bounds" };
        emit(format_args!("{kind}: {}", report.basis.len()));
        for v in &report.basis {
            emit(format_args!("  ({})", v.join(", ")));
        }
        Ok(())
    } else {
        print_json(&report)
    }
}

// ---------- classify ----------

#[derive(Serialize)]
struct ClassifyReport {
    flat_dim: usize,
    signature: [usize; 2],
    label: String,
    form: Vec<Vec<String>>,
    ordering: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    realify_scalar: Option<String>,
}

fn cmd_classify(args: ClassifyArgs) -> CmdResult {
    let rep = match read_module(&args.file)? {
        Module::Q(m) => classify::classify_orthogonal(&m, &args.ordering),
        Module::Qi(m) => classify::classify_orthogonal(&m, &args.ordering),
    }
    .map_err(CmdError::semantic)?;
    let report = ClassifyReport {
        flat_dim: rep.flat_dim,
        signature: [rep.signature_unordered.0, rep.signature_unordered.1],
        label: rep.form_label.clone(),
        form: mat_strings(&rep.form),
        ordering: rep.ordering.to_string(),
        realify_scalar: rep.realify_scalar.as_ref().map(|s| expr::ratfunc_string(s)),
    };
    if args.text {
        emit(format_args!("{} under {}", report.label, report.ordering));
        emit("invariant form:");
        emit(rows_text(&report.form, "  "));
        if let Some(s) = &report.realify_scalar {
            emit(format_args!("realified with scalar {s}"));
        }
        Ok(())
    } else {
        print_json(&report)
    }
}

// ---------- rank1 ----------

#[derive(Serialize)]
struct Rank1Report {
    m: u64,
    u: String,
    pv_description: String,
    ordering: String,
    candidates: Vec<CandidateReport>,
}

#[derive(Serialize)]
struct CandidateReport {
    radicand: String,
    constrained: bool,
    compatible: bool,
}

fn cmd_rank1(args: Rank1Args) -> CmdResult {
    let r: RatFunc<Rational> = expr::parse(&args.expression)
        .map_err(|e| CmdError::input(format!("{:?}: {e}", args.expression)))?;
    let rep = classify::rank1_analyze(&r).map_err(CmdError::semantic)?;
    let verdicts = classify::compare_real_pv(&rep, &args.ordering);
    let report = Rank1Report {
        m: rep.m,
        u: expr::ratfunc_string(&rep.u),
        pv_description: rep.pv_description.clone(),
        ordering: args.ordering.to_string(),
        candidates: rep
            .candidates
            .iter()
            .zip(&verdicts)
            .map(|(c, v)| CandidateReport {
                radicand: expr::ratfunc_string(&c.radicand),
                constrained: c.constrained,
                compatible: v.compatible,
            })
            .collect(),
    };
    if args.text {
        emit(&report.pv_description);
        for c in &report.candidates {
            let verdict = if c.compatible { "compatible" } else { "incompatible" };
            emit(format_args!(
                "  t^{} = {}: {verdict} under {}",
                report.m, c.radicand, report.ordering
            ));
        }
        Ok(())
    } else {
        print_json(&report)
    }
}

// ---------- cocycle ----------

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    group: String,
    size: usize,
}

#[derive(Serialize)]
struct CertificateReport {
    h: Vec<Vec<String>>,
    g: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct TwistReport {
    form: Vec<Vec<String>>,
    base_signature: [usize; 2],
    twisted_signature: [usize; 2],
    trivial: bool,
}

#[derive(Serialize)]
struct TrivialReport {
    group: String,
    trivial: bool,
    reason: String,
    needs_constant_extension: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    gl_certificate: Option<CertificateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    group_certificate: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    twisted: Option<TwistReport>,
}

#[derive(Serialize)]
struct LiftReport {
    group: String,
    matrix: Vec<Vec<String>>,
}

fn read_cocycle(path: &Path) -> Result<(GroupSpec, Mat<GaussRational>), CmdError> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CmdError::input(format!("{}: {e}", path.display())))?;
    let file: CocycleFile = serde_json::from_str(&raw).map_err(CmdError::input)?;
    let spec = group_spec(&file.group)?;
    let a = parse_constant_matrix::<GaussRational>(&file.matrix)?;
    if a.rows() != spec.size() {
        return Err(CmdError::input(format!(
            "matrix is {}x{} but {} acts in size {}",
            a.rows(),
            a.cols(),
            spec.name(),
            spec.size()
        )));
    }
    Ok((spec, a))
}

fn twist_report(t: &TwistedForm) -> TwistReport {
    TwistReport {
        form: const_mat_strings(&t.form),
        base_signature: signature_pair(&t.base_signature),
        twisted_signature: signature_pair(&t.twisted_signature),
        trivial: t.trivial,
    }
}

fn trivial_report(r: &TrivialityReport) -> TrivialReport {
    TrivialReport {
        group: r.group.clone(),
        trivial: r.trivial,
        reason: r.reason.clone(),
        needs_constant_extension: r.needs_constant_extension,
        gl_certificate: r.gl_certificate.as_ref().map(|c| CertificateReport {
            h: const_mat_strings(&c.h),
            g: const_mat_strings(&c.g),
        }),
        group_certificate: r.group_certificate.as_ref().map(const_mat_strings),
        twisted: r.twisted.as_ref().map(twist_report),
    }
}

fn cmd_cocycle(cmd: CocycleCmd) -> CmdResult {
    match cmd {
        CocycleCmd::Validate(args) => {
            let (spec, a) = read_cocycle(&args.file)?;
            let c = cohomology::validate(a, spec).map_err(CmdError::semantic)?;
            let report = ValidateReport {
                valid: true,
                group: c.group.name(),
                size: c.group.size(),
            };
            if args.text {
                println!("valid cocycle for {}", report.group);
                Ok(())
            } else {
                print_json(&report)
            }
        }
        CocycleCmd::Trivial(args) => {
            let (spec, a) = read_cocycle(&args.file)?;
            let c = cohomology::validate(a, spec).map_err(CmdError::semantic)?;
            let r = cohomology::triviality_report(&c, args.seed).map_err(CmdError::semantic)?;
            let report = trivial_report(&r);
            if args.text {
                let verdict = if report.trivial { "trivial" } else { "nontrivial" };
                println!("{verdict} for {}: {}", report.group, report.reason);
                if let Some(t) = &report.twisted {
                    println!(
                        "twisted signature ({}, {}) against base ({}, {})",
                        t.twisted_signature[0],
                        t.twisted_signature[1],
                        t.base_signature[0],
                        t.base_signature[1]
                    );
                }
                Ok(())
            } else {
                print_json(&report)
            }
        }
        CocycleCmd::TwistForm(args) => {
            let (spec, a) = read_cocycle(&args.file)?;
            let c = cohomology::validate(a, spec).map_err(CmdError::semantic)?;
            let t = cohomology::twisted_form(&c, args.seed).map_err(CmdError::semantic)?;
            let report = twist_report(&t);
            if args.text {
                let verdict = if report.trivial { "equivalent to" } else { "distinct from" };
                println!(
                    "twisted form has signature ({}, {}), {verdict} the base ({}, {})",
                    report.twisted_signature[0],
                    report.twisted_signature[1],
                    report.base_signature[0],
                    report.base_signature[1]
                );
                println!("{}", rows_text(&report.form, "  "));
                Ok(())
            } else {
                print_json(&report)
            }
        }
        CocycleCmd::Lift(args) => {
            let (spec, a_rep) = read_cocycle(&args.file)?;
            let p = ProjectiveCocycle { group: spec, a_rep };
            let c = cohomology::center_lift(&p).map_err(CmdError::semantic)?;
            let report = LiftReport { group: c.group.name(), matrix: const_mat_strings(&c.a) };
            if args.text {
                println!("lift in {}:", report.group);
                println!("{}", rows_text(&report.matrix, "  "));
                Ok(())
            } else {
                print_json(&report)
            }
        }
    }
}

// ---------- generate ----------

fn cmd_generate(args: GenerateArgs) -> CmdResult {
    let spec = match args.group.as_str() {
        "SO" => {
            let f = args
                .form
                .as_deref()
                .ok_or_else(|| CmdError::input("--group SO needs --form with a diagonal"))?;
            let diag = f
                .split(',')
                .map(|s| {
                    expr::parse::<Rational>(s.trim())
                        .ok()
                        .as_ref()
                        .and_then(constant_of)
                        .ok_or_else(|| CmdError::input(format!("{s:?} is not a rational constant")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            GroupSpec::so(Mat::from_diag(diag)).map_err(CmdError::input)?
        }
        "SL" => GroupSpec::Sl(args.n.ok_or_else(|| CmdError::input("--group SL needs --n"))?),
        "Sp" => GroupSpec::sp(args.n.ok_or_else(|| CmdError::input("--group Sp needs --n"))?)
            .map_err(CmdError::input)?,
        "SU2" => GroupSpec::Su2,
        other => {
            return Err(CmdError::input(format!(
                "unknown group {other:?}: expected SO, SL, Sp or SU2"
            )))
        }
    };
    if !matches!(spec, GroupSpec::So(_)) && args.form.is_some() {
        return Err(CmdError::input("--form applies only to SO"));
    }
    if matches!(spec, GroupSpec::So(_) | GroupSpec::Su2) && args.n.is_some() {
        return Err(CmdError::input("--n applies only to SL and Sp"));
    }
    let coeffs: Option<Vec<RatFunc<Rational>>> = match &args.coeffs {
        Some(list) => Some(
            list.split(',')
                .map(|s| {
                    expr::parse(s.trim()).map_err(|e| CmdError::input(format!("{s:?}: {e}")))
                })
                .collect::<Result<_, _>>()?,
        ),
        None => None,
    };
    let module =
        groups::generate_equation(&spec, coeffs.as_deref(), args.seed).map_err(CmdError::input)?;
    debug_assert!(groups::lie_membership(module.matrix(), &spec).member);
    let file = ModuleFile { field: "Q".into(), matrix: mat_strings(module.matrix()) };
    print_json(&file)
}
