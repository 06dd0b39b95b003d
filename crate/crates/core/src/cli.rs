//! Command-line front end.
//!
//! Every command writes a machine-readable JSON report to `--out` (when
//! given) and a short text summary to stdout. Exit codes: 0 success,
//! 1 property violation, 2 input error.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::diffcalc::{
    check_symmetry, closed_difference, closed_form_check, coboundary_square_check, cocycle_check,
    delta_consistency_check, delta_d_relation_check, invariant_values_check, is_polynomial_like,
    iterated_difference, leibniz_check, normalization_check, random_tuples,
    recursion_identity_check, translation_invariance_check, CheckReport, Membership,
    SymmetryReport,
};
use crate::error::{Error, Result};
use crate::floquet::{
    arrangement_diagnostic, decompose, fourier_fit, numeric_examples, reconstruct,
    ArrangementReport, Decomposition, NumericExample,
};
use crate::gmodule::{
    FloquetElement, FloquetModule, GModule, GRing, GroupFunction, GroupFunctionModule,
    NumericModule, SampleOptions,
};
use crate::group::{GroupElement, GroupSpec};
use crate::polymorph::{
    dim_ln, dim_lns, dim_pn_bound, dim_pn_telescoped_bound, from_dn, vanishing_check,
};
use crate::solver::{check_bound, kernel_translation_check, polynomial_kernel, StencilOperator};

#[derive(Parser, Debug)]
#[command(name = "polylike", version, about = "Polynomial-like elements of modules over groups")]
pub struct Cli {
    #[command(flatten)]
    pub job: JobOptions,
    #[command(subcommand)]
    pub command: Command,
}

/// Knobs shared by all commands. The seed determines every random tuple.
#[derive(Args, Debug, Clone)]
pub struct JobOptions {
    /// Group spec as inline JSON or a path, e.g. {"kind":"free_abelian","rank":2}.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Tolerance for floating-point zero tests.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Number of random tuples or sample points.
    #[arg(long, global = true, default_value_t = 64)]
    pub samples: usize,
    /// Coordinate radius of random group elements and sample points.
    #[arg(long, global = true, default_value_t = 3)]
    pub radius: i64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Path of the JSON report.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl JobOptions {
    fn sample_options(&self) -> SampleOptions {
        SampleOptions {
            samples: self.samples,
            radius: self.radius,
            seed: self.seed,
            tol: self.tol,
        }
    }
}

/// Where the element under study comes from.
#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Periodic-polynomial element: inline JSON or a path. Accepts a term list,
    /// {"rank":r,"terms":[…]} or a decomposition {"rank":r,"coefficients":{…}}.
    #[arg(long)]
    pub element: Option<String>,
    /// Name of a built-in black-box function.
    #[arg(long)]
    pub numeric: Option<String>,
    /// Coordinate function a, b or c of the Heisenberg group.
    #[arg(long)]
    pub function: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the identity suite on an element of P_n.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        degree: usize,
    },
    /// Split an element into periodic coefficients of monomials.
    Decompose {
        #[command(flatten)]
        source: Source,
        /// Defaults to the exact degree of the element.
        #[arg(long)]
        degree: Option<usize>,
        /// Fourier cutoff used to export black-box coefficients.
        #[arg(long, default_value_t = 4)]
        fourier_cutoff: usize,
    },
    /// Rebuild an element from a decomposition.
    Reconstruct {
        #[arg(long)]
        element: String,
    },
    /// Evaluate D^n at a tuple, n being the tuple length.
    Diff {
        #[command(flatten)]
        source: Source,
        /// Tuple of group elements, e.g. "1,0;0,1".
        #[arg(long, allow_hyphen_values = true)]
        tuple: String,
    },
    /// Dimension table of polymorphism spaces and the P_n bound.
    Dims {
        #[arg(long)]
        degree: usize,
        /// Rank of the abelianization; read from --group when omitted.
        #[arg(long)]
        rank: Option<usize>,
        /// Dimension s of the invariant part.
        #[arg(long, default_value_t = 1)]
        invariant_dim: usize,
    },
    /// Polynomial-like kernel of a periodic stencil operator.
    Solve {
        #[arg(long)]
        operator: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 8)]
        max_period: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
}

/// Result of one command before it is written out.
pub struct Outcome {
    pub summary: String,
    pub report: Value,
    pub passed: bool,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli).and_then(|o| write_outcome(&cli.job, o)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Violation { .. } | Error::NotPolynomialLike { .. } => 1,
        _ => 2,
    }
}

fn write_outcome(job: &JobOptions, outcome: Outcome) -> Result<bool> {
    print!("{}", outcome.summary);
    if let Some(path) = &job.out {
        let mut text = serde_json::to_string_pretty(&outcome.report)?;
        text.push('\n');
        fs::write(path, text)?;
    }
    Ok(outcome.passed)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let job = &cli.job;
    match &cli.command {
        Command::Verify { source, degree } => cmd_verify(job, source, *degree),
        Command::Decompose {
            source,
            degree,
            fourier_cutoff,
        } => cmd_decompose(job, source, *degree, *fourier_cutoff),
        Command::Reconstruct { element } => cmd_reconstruct(element),
        Command::Diff { source, tuple } => cmd_diff(job, source, tuple),
        Command::Dims {
            degree,
            rank,
            invariant_dim,
        } => cmd_dims(job, *degree, *rank, *invariant_dim),
        Command::Solve {
            operator,
            degree,
            max_period,
            max_degree,
        } => cmd_solve(operator, *degree, *max_period, *max_degree),
    }
}

/// Reads JSON given inline (starting with `{` or `[`) or from a file.
fn load_json(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

fn load_group(job: &JobOptions) -> Result<Option<GroupSpec>> {
    match &job.group {
        None => Ok(None),
        Some(arg) => {
            let value = load_json(arg)?;
            let g: GroupSpec = serde_json::from_value(value)
                .map_err(|e| Error::Parse(format!("group spec: {e}")))?;
            g.validate()?;
            Ok(Some(g))
        }
    }
}

/// Parses an element file into a periodic polynomial.
pub fn parse_element(value: &Value) -> Result<FloquetElement> {
    match value {
        Value::Array(_) => FloquetElement::from_json(value, None),
        Value::Object(map) if map.contains_key("coefficients") => {
            let d = Decomposition::from_json(value)?;
            Ok(reconstruct(&FloquetModule::new(d.rank()), &d))
        }
        Value::Object(map) => {
            let rank = map.get("rank").and_then(Value::as_u64).map(|r| r as usize);
            let terms = map
                .get("terms")
                .ok_or_else(|| Error::Parse("element object needs \"terms\"".into()))?;
            FloquetElement::from_json(terms, rank)
        }
        _ => Err(Error::Parse("element must be a list or an object".into())),
    }
}

enum Loaded {
    Floquet(FloquetElement),
    Numeric(NumericExample),
    Function(GroupSpec, GroupFunction),
}

fn load_source(job: &JobOptions, source: &Source) -> Result<Loaded> {
    let group = load_group(job)?;
    let given = [&source.element, &source.numeric, &source.function]
        .iter()
        .filter(|s| s.is_some())
        .count();
    if given != 1 {
        return Err(Error::Argument(
            "give exactly one of --element, --numeric, --function".into(),
        ));
    }
    let check_lattice = |rank: usize| match &group {
        Some(g) if *g != GroupSpec::free_abelian(rank) => Err(Error::Argument(format!(
            "this element lives on Z^{rank}, not on the given group"
        ))),
        _ => Ok(()),
    };
    if let Some(arg) = &source.element {
        let e = parse_element(&load_json(arg)?)?;
        check_lattice(e.rank())?;
        return Ok(Loaded::Floquet(e));
    }
    if let Some(name) = &source.numeric {
        let ex = numeric_examples()
            .into_iter()
            .find(|ex| ex.name == name)
            .ok_or_else(|| {
                let names: Vec<&str> = numeric_examples().iter().map(|e| e.name).collect();
                Error::Argument(format!("unknown black box {name:?}; known: {}", names.join(", ")))
            })?;
        check_lattice(ex.rank)?;
        return Ok(Loaded::Numeric(ex));
    }
    let name = source.function.as_deref().unwrap_or_default();
    let index = match name {
        "a" => 0,
        "b" => 1,
        "c" => 2,
        _ => return Err(Error::Argument(format!("unknown coordinate function {name:?}"))),
    };
    match group {
        Some(GroupSpec::HeisenbergZ) | None => Ok(Loaded::Function(
            GroupSpec::HeisenbergZ,
            GroupFunction::heisenberg_coordinate(index),
        )),
        Some(_) => Err(Error::Argument(
            "coordinate functions are defined on heisenberg_z".into(),
        )),
    }
}

/// Everything `verify` computes for one element.
#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub degree: usize,
    pub element: String,
    pub membership: Membership,
    pub checks: Vec<CheckReport>,
    /// Observed only; asserted among `checks` for abelian groups.
    pub symmetry: Option<SymmetryReport>,
    pub arrangement: Option<ArrangementReport>,
    pub passed: bool,
}

/// Runs the identity suite on `a` at order `n`.
///
/// The general identities hold for every element; the checks on `D^n a`
/// (cocycle, invariant values, multilinearity, vanishing on commutators and
/// torsion, symmetry) need `a ∈ P_n` and are skipped otherwise.
pub fn verify_suite<M: GRing + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    n: usize,
    options: &SampleOptions,
) -> Result<VerifyReport> {
    let group = module.group().clone();
    let count = options.samples;
    let tuples = |len: usize, salt: u64| random_tuples(&group, count, len, options.radius, options.seed ^ salt);
    let membership = is_polynomial_like(module, a, n, options)?;
    let mut checks = Vec::new();
    for k in 1..=n + 1 {
        checks.push(closed_form_check(module, a, k, &tuples(k, 0x10 + k as u64))?);
        checks.push(delta_consistency_check(module, a, k, &tuples(k, 0x20 + k as u64))?);
        checks.push(normalization_check(
            &iterated_difference(module, a, k),
            &tuples(k, 0x30 + k as u64),
        )?);
    }
    for k in 0..=n {
        checks.push(recursion_identity_check(module, a, k, &tuples(k + 1, 0x40 + k as u64))?);
    }
    for k in 1..=n.max(1) {
        checks.push(delta_d_relation_check(module, a, k, &tuples(k + 1, 0x50 + k as u64))?);
    }
    let elements: Vec<GroupElement> = tuples(1, 0x60).into_iter().flatten().collect();
    checks.push(leibniz_check(module, a, a, &elements)?);
    let dn = iterated_difference(module, a, n);
    checks.push(coboundary_square_check(&dn, &tuples(n + 2, 0x70))?);

    let mut symmetry = None;
    let mut arrangement = None;
    if membership.holds {
        checks.push(translation_invariance_check(module, a, n, options)?);
        checks.push(invariant_values_check(&dn, &tuples(n, 0x80))?);
        if n >= 1 {
            checks.push(cocycle_check(&dn, &tuples(n + 1, 0x90))?);
            checks.push(vanishing_check(&dn, &tuples(n, 0xa0))?);
            checks.push(from_dn(module, a, n, options)?.multilinearity);
            let sym = check_symmetry(&dn, &tuples(n, 0xb0))?;
            if group.is_abelian() {
                checks.push(CheckReport {
                    name: format!("symmetry_{n}"),
                    passed: sym.symmetric,
                    kind: sym.kind,
                    checked: sym.checked,
                    witness: sym.witness.as_ref().map(|(x, y)| format!("{x} vs {y}")),
                });
            }
            symmetry = Some(sym);
            arrangement = Some(arrangement_diagnostic(module, a, n)?);
        }
    }
    let passed = membership.holds && checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        degree: n,
        element: module.describe(a),
        membership,
        checks,
        symmetry,
        arrangement,
        passed,
    })
}

fn verify_summary(r: &VerifyReport) -> String {
    let mut s = String::new();
    let m = &r.membership;
    match &m.witness {
        None => s.push_str(&format!("PASS membership P_{} ({:?}, {} tuples)\n", r.degree, m.kind, m.checked)),
        Some(w) => s.push_str(&format!("FAIL membership P_{}: D^{} {w}\n", r.degree, r.degree + 1)),
    }
    for c in &r.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{status} {} ({:?}, {} checked)", c.name, c.kind, c.checked));
        if let Some(w) = &c.witness {
            s.push_str(&format!(": {w}"));
        }
        s.push('\n');
    }
    if let Some(sym) = &r.symmetry {
        s.push_str(&format!(
            "note: D^{} observed {}\n",
            r.degree,
            if sym.symmetric { "symmetric" } else { "not symmetric" }
        ));
    }
    if let Some(a) = &r.arrangement {
        if !a.independent {
            s.push_str(&format!("note: D^{} depends on the order of generators\n", r.degree));
        }
    }
    s.push_str(if r.passed { "verify: all checks passed\n" } else { "verify: FAILED\n" });
    s
}

fn verify_outcome(job: &JobOptions, r: VerifyReport, group: &GroupSpec) -> Result<Outcome> {
    let report = json!({
        "command": "verify",
        "group": group,
        "options": job.sample_options(),
        "result": r,
    });
    Ok(Outcome {
        summary: verify_summary(&r),
        passed: r.passed,
        report,
    })
}

fn cmd_verify(job: &JobOptions, source: &Source, n: usize) -> Result<Outcome> {
    let opts = job.sample_options();
    match load_source(job, source)? {
        Loaded::Floquet(e) => {
            let m = Arc::new(FloquetModule::new(e.rank()));
            let r = verify_suite(&m, &e, n, &opts)?;
            verify_outcome(job, r, m.group())
        }
        Loaded::Numeric(ex) => {
            let m = Arc::new(NumericModule::new(ex.rank, &opts));
            let r = verify_suite(&m, &ex.function, n, &opts)?;
            verify_outcome(job, r, m.group())
        }
        Loaded::Function(g, f) => {
            let m = Arc::new(GroupFunctionModule::new(g, &opts));
            let r = verify_suite(&m, &f, n, &opts)?;
            verify_outcome(job, r, m.group())
        }
    }
}

fn nu_label(nu: &[u32]) -> String {
    nu.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_decompose(job: &JobOptions, source: &Source, degree: Option<usize>, cutoff: usize) -> Result<Outcome> {
    let opts = job.sample_options();
    match load_source(job, source)? {
        Loaded::Floquet(e) => {
            let n = degree.unwrap_or(e.degree().max(0) as usize);
            let m = Arc::new(FloquetModule::new(e.rank()));
            let d = decompose(&m, &e, n, &opts)?;
            let mut summary = String::new();
            for (nu, a) in d.coefficients() {
                summary.push_str(&format!("x^({}): {}\n", nu_label(nu), a));
            }
            summary.push_str(&format!("decompose: {} coefficients\n", d.len()));
            Ok(Outcome {
                summary,
                report: d.to_json(),
                passed: true,
            })
        }
        Loaded::Numeric(ex) => {
            let n = degree.unwrap_or(ex.degree);
            let m = Arc::new(NumericModule::new(ex.rank, &opts));
            let d = decompose(&m, &ex.function, n, &opts)?;
            let mut coefficients = serde_json::Map::new();
            let mut summary = String::new();
            for (nu, a) in d.coefficients() {
                let fit = fourier_fit(a, cutoff, m.points());
                summary.push_str(&format!(
                    "x^({}): ≈ {} (fit residual {:.3e})\n",
                    nu_label(nu),
                    fit.element,
                    fit.residual
                ));
                coefficients.insert(
                    nu_label(nu),
                    json!({"fit": fit.element.to_json(), "fit_residual": fit.residual}),
                );
            }
            summary.push_str(&format!("decompose: {} coefficients\n", d.len()));
            Ok(Outcome {
                summary,
                report: json!({
                    "example": ex.name,
                    "rank": ex.rank,
                    "degree": n,
                    "fourier_cutoff": cutoff,
                    "options": opts,
                    "coefficients": coefficients,
                }),
                passed: true,
            })
        }
        Loaded::Function(..) => Err(Error::Unsupported(
            "decomposition is defined over free abelian groups".into(),
        )),
    }
}

fn cmd_reconstruct(element: &str) -> Result<Outcome> {
    let value = load_json(element)?;
    let d = Decomposition::from_json(&value)?;
    let e = reconstruct(&FloquetModule::new(d.rank()), &d);
    Ok(Outcome {
        summary: format!("{e}\n"),
        report: json!({"rank": e.rank(), "terms": e.to_json()}),
        passed: true,
    })
}

fn parse_tuple(text: &str, group: &GroupSpec) -> Result<Vec<GroupElement>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|part| {
            let coords = part
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad coordinate {c:?}")))
                })
                .collect::<Result<Vec<BigInt>>>()?;
            let g = match group {
                GroupSpec::HeisenbergZ if coords.len() == 3 => GroupElement::Heisenberg {
                    a: coords[0].clone(),
                    b: coords[1].clone(),
                    c: coords[2].clone(),
                },
                GroupSpec::HeisenbergZ => {
                    return Err(Error::Parse(format!("{part:?} is not a Heisenberg element")))
                }
                _ => GroupElement::lattice_big(coords),
            };
            if !group.contains(&g) {
                return Err(Error::Parse(format!("{part:?} is not in the group")));
            }
            Ok(g)
        })
        .collect()
}

fn diff_outcome<M: GModule + 'static>(
    module: Arc<M>,
    a: &M::Elem,
    tuple_text: &str,
    value_json: impl Fn(&M::Elem) -> Value,
) -> Result<Outcome> {
    let tuple = parse_tuple(tuple_text, module.group())?;
    let n = tuple.len();
    let value = iterated_difference(&module, a, n).eval(&tuple)?;
    let closed = closed_difference(module.as_ref(), a, &tuple)?;
    let agrees = module.equals(&value, &closed).zero;
    let shown = module.describe(&value);
    Ok(Outcome {
        summary: format!(
            "D^{n} {} = {shown}\nclosed form {}\n",
            crate::group::format_tuple(&tuple),
            if agrees { "agrees" } else { "DISAGREES" }
        ),
        report: json!({
            "command": "diff",
            "arity": n,
            "tuple": tuple.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "value": value_json(&value),
            "closed_form_agrees": agrees,
        }),
        passed: agrees,
    })
}

fn cmd_diff(job: &JobOptions, source: &Source, tuple: &str) -> Result<Outcome> {
    let opts = job.sample_options();
    match load_source(job, source)? {
        Loaded::Floquet(e) => diff_outcome(Arc::new(FloquetModule::new(e.rank())), &e, tuple, |v| v.to_json()),
        Loaded::Numeric(ex) => {
            let m = Arc::new(NumericModule::new(ex.rank, &opts));
            let describe = m.clone();
            diff_outcome(m, &ex.function, tuple, move |v| json!(describe.describe(v)))
        }
        Loaded::Function(g, f) => {
            let m = Arc::new(GroupFunctionModule::new(g, &opts));
            let describe = m.clone();
            diff_outcome(m, &f, tuple, move |v| json!(describe.describe(v)))
        }
    }
}

fn cmd_dims(job: &JobOptions, n: usize, rank: Option<usize>, s: usize) -> Result<Outcome> {
    let r = match (rank, load_group(job)?) {
        (Some(r), _) => r,
        (None, Some(g)) => g.free_rank(),
        (None, None) => return Err(Error::Argument("give --rank or --group".into())),
    };
    let mut summary = String::from("n r s dim_L dim_LS bound_Pn bound_telescoped\n");
    let mut rows = Vec::new();
    for k in 0..=n {
        let (l, ls, b, t) = (
            dim_ln(k, r, s),
            dim_lns(k, r, s),
            dim_pn_bound(k, r, s),
            dim_pn_telescoped_bound(k, r, s),
        );
        summary.push_str(&format!("{k} {r} {s} {l} {ls} {b} {t}\n"));
        rows.push(json!({
            "n": k, "r": r, "s": s,
            "dim_L": l.to_string(), "dim_LS": ls.to_string(),
            "bound_Pn": b.to_string(), "bound_telescoped": t.to_string(),
        }));
    }
    Ok(Outcome {
        summary,
        report: json!({"command": "dims", "rows": rows}),
        passed: true,
    })
}

fn cmd_solve(operator: &str, n: usize, max_period: usize, max_degree: usize) -> Result<Outcome> {
    let d = StencilOperator::from_json(&load_json(operator)?)?;
    if d.period() > max_period {
        return Err(Error::Argument(format!(
            "period {} exceeds --max-period {max_period}",
            d.period()
        )));
    }
    if n > max_degree {
        return Err(Error::Argument(format!("degree {n} exceeds --max-degree {max_degree}")));
    }
    let dims = (0..=n)
        .map(|k| polynomial_kernel(&d, k).map(|k| k.dimension))
        .collect::<Result<Vec<_>>>()?;
    let kernel = polynomial_kernel(&d, n)?;
    let bound = check_bound(&d, n)?;
    let translation = kernel_translation_check(&kernel)?;
    let monotone = dims.windows(2).all(|w| w[0] <= w[1]);
    let mut summary = format!("dim={}\n", kernel.dimension);
    for (i, b) in kernel.basis.iter().enumerate() {
        summary.push_str(&format!("b{} = {}\n", i + 1, b.render()));
    }
    summary.push_str(&format!(
        "bound: {} <= {} (s={}, slack {})\n",
        bound.dim, bound.bound, bound.s, bound.slack
    ));
    let passed = translation && monotone;
    if !passed {
        summary.push_str("solve: kernel checks FAILED\n");
    }
    Ok(Outcome {
        summary,
        report: json!({
            "command": "solve",
            "operator": d.to_json(),
            "n": n,
            "dimension": kernel.dimension,
            "dimensions_by_degree": dims,
            "basis": kernel.basis.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
            "bound": bound,
            "translation_invariant": translation,
            "monotone": monotone,
        }),
        passed,
    })
}
