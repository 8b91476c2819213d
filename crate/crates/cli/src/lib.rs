//! The `wbisim` command line tool.
//!
//! [`run`] does all the work and returns the text for stdout together with
//! the exit code, so the binary is a thin wrapper and tests can call it
//! in-process.
//!
//! Exit codes: 0 success, 1 states not bisimilar, 2 semantic or validation
//! error, 3 unreadable or malformed input, 4 solver did not converge.

pub mod args;
mod render;

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use wbisim_core::bisim::{refine, BisimError, Equivalence, RefineOptions, Refinement};
use wbisim_core::oracle::{brute_coarsest_partition, OracleError};
use wbisim_core::quotient::{emit_quotient, QuotientError};
use wbisim_core::semiring::{
    check_axioms, AxiomReport, SelectError, Semiring, SemiringDescriptor, SemiringKind,
    DEFAULT_EPSILON,
};
use wbisim_core::solver::{SaturationMode, Saturator, SolverError, SolverKind};
use wbisim_core::wlts::{
    load, to_document, LoadError, LoadWarnings, MassReport, Partition, SemiringField,
    SystemDocument, WltsError,
};
use wbisim_core::{dispatch_semiring, StateId, Wlts};

pub use args::Cli;
use args::{Command, Expect, Format, Param, SolverArg, SolverOpts};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_BISIMILAR: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Semiring(#[from] SelectError),
    #[error(transparent)]
    Model(#[from] WltsError),
    #[error(transparent)]
    Bisim(#[from] BisimError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_PARSE,
            CliError::Load(e) if e.is_parse() => EXIT_PARSE,
            CliError::Bisim(BisimError::NonConvergence { .. }) | CliError::Solver(_) => {
                EXIT_NO_CONVERGENCE
            }
            _ => EXIT_INVALID,
        }
    }
}

/// What a successful run prints, and the code it exits with. A run can
/// succeed in producing a report and still exit nonzero (a failed
/// `--expect`, two states that are not bisimilar).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            code: EXIT_OK,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let params = Params::collect(&cli.params);
    if let Command::Axioms = cli.command {
        return axioms(cli, &params);
    }
    let input = match &cli.command {
        Command::Validate { input, .. }
        | Command::Minimize { input, .. }
        | Command::Check { input, .. }
        | Command::Saturate { input, .. } => input,
        Command::Axioms => unreachable!(),
    };
    let doc = read_document(input)?;
    let kind = resolve_kind(cli.semiring.as_deref(), &params, doc.semiring.as_ref())?;
    dispatch_semiring!(kind, s => execute(s, kind, &doc, cli))
}

#[derive(Debug, Default, Clone, Copy)]
struct Params {
    k: Option<u64>,
    epsilon: Option<f64>,
}

impl Params {
    /// Later occurrences win.
    fn collect(params: &[Param]) -> Self {
        let mut out = Params::default();
        for p in params {
            match *p {
                Param::K(k) => out.k = Some(k),
                Param::Epsilon(e) => out.epsilon = Some(e),
            }
        }
        out
    }
}

fn read_document(path: &Path) -> Result<SystemDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(SystemDocument::from_json(&text)?)
}

fn canonical_name(name: &str) -> &str {
    match name.trim() {
        "bool" => "boolean",
        "max-times" => "maxtimes",
        other => other,
    }
}

/// Command-line name and parameters take precedence; the document's
/// parameters fill the gaps when it names the same instance.
fn resolve_kind(
    cli_name: Option<&str>,
    params: &Params,
    field: Option<&SemiringField>,
) -> Result<SemiringKind, CliError> {
    let (doc_name, doc_k, doc_eps) = match field {
        Some(SemiringField::Name(n)) => (Some(n.as_str()), None, None),
        Some(SemiringField::Spec { name, k, epsilon }) => (Some(name.as_str()), *k, *epsilon),
        None => (None, None, None),
    };
    let name = match (cli_name, doc_name) {
        (Some(n), _) | (None, Some(n)) => n,
        (None, None) => return Err(LoadError::MissingSemiring.into()),
    };
    let inherit = doc_name.is_some_and(|d| canonical_name(d) == canonical_name(name));
    let k = params.k.or(if inherit { doc_k } else { None });
    let epsilon = params.epsilon.or(if inherit { doc_eps } else { None });
    Ok(SemiringKind::from_name(name, k, epsilon)?)
}

fn solver_kind(opts: &SolverOpts) -> Result<SolverKind, CliError> {
    match (opts.solver, opts.max_iters) {
        (SolverArg::Elimination, None) => Ok(SolverKind::Elimination),
        (SolverArg::Elimination, Some(_)) => Err(CliError::Usage(
            "--max-iters only applies to --solver kleene".into(),
        )),
        (SolverArg::Kleene, max_iters) => Ok(SolverKind::Kleene { max_iters }),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports always serialise");
    text.push('\n');
    text
}

fn no_dot(command: &str) -> CliError {
    CliError::Usage(format!(
        "--format dot is not available for {command}; use validate or minimize"
    ))
}

fn names<S: Semiring>(w: &Wlts<S>, states: &[StateId]) -> Vec<String> {
    states.iter().map(|&x| w.state_name(x).to_owned()).collect()
}

fn blocks<S: Semiring>(w: &Wlts<S>, p: &Partition) -> Vec<Vec<String>> {
    p.blocks().iter().map(|b| names(w, b)).collect()
}

fn resolve<S: Semiring>(w: &Wlts<S>, name: &str) -> Result<StateId, CliError> {
    w.state_by_name(name)
        .ok_or_else(|| CliError::Usage(format!("unknown state {name:?}")))
}

fn execute<S: Semiring>(
    s: S,
    kind: SemiringKind,
    doc: &SystemDocument,
    cli: &Cli,
) -> Result<Output, CliError> {
    let loaded = load(doc, s)?;
    let w = &loaded.wlts;
    match &cli.command {
        Command::Validate { expect, .. } => validate(w, loaded.warnings, *expect, cli.format),
        Command::Minimize {
            equivalence,
            emit_quotient,
            trace,
            oracle,
            solver,
            ..
        } => {
            let opts = MinimizeOpts {
                mode: (*equivalence).into(),
                emit_quotient: *emit_quotient,
                trace: *trace,
                oracle: *oracle,
                solver: solver_kind(solver)?,
            };
            minimize(w, kind, &opts, cli.format)
        }
        Command::Check {
            left,
            right,
            equivalence,
            solver,
            ..
        } => check(
            w,
            left,
            right,
            (*equivalence).into(),
            solver_kind(solver)?,
            cli.format,
        ),
        Command::Saturate { class, mode, .. } => saturate(w, class, (*mode).into(), cli.format),
        Command::Axioms => unreachable!(),
    }
}

#[derive(Serialize)]
struct ValidateReport {
    semiring: SemiringDescriptor,
    tau: String,
    states: usize,
    actions: Vec<String>,
    transitions: usize,
    has_tau_transitions: bool,
    warnings: LoadWarnings,
    #[serde(skip_serializing_if = "Option::is_none")]
    generative: Option<MassReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reactive: Option<MassReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expect: Option<&'static str>,
    valid: bool,
}

fn validate<S: Semiring>(
    w: &Wlts<S>,
    warnings: LoadWarnings,
    expect: Option<Expect>,
    format: Format,
) -> Result<Output, CliError> {
    let descriptor = w.semiring().descriptor();
    let (generative, reactive) = if descriptor.is_real() {
        (
            Some(w.check_fully_probabilistic()?),
            Some(w.check_reactive()?),
        )
    } else if expect.is_some() {
        return Err(CliError::Usage(format!(
            "--expect needs a real-valued semiring, not {}",
            descriptor.name
        )));
    } else {
        (None, None)
    };
    let valid = match expect {
        None => true,
        Some(Expect::Generative) => generative.as_ref().is_some_and(|r| r.pass),
        Some(Expect::Reactive) => reactive.as_ref().is_some_and(|r| r.pass),
    };
    let report = ValidateReport {
        semiring: descriptor,
        tau: w.tau_name().to_owned(),
        states: w.num_states(),
        actions: w.action_names().to_vec(),
        transitions: w.num_transitions(),
        has_tau_transitions: w.has_tau_transitions(),
        warnings,
        generative,
        reactive,
        expect: expect.map(|e| match e {
            Expect::Generative => "generative",
            Expect::Reactive => "reactive",
        }),
        valid,
    };
    let text = match format {
        Format::Structured => json(&report),
        Format::Dot => render::dot(w, "system", None),
        Format::Plain => plain_validate(&report),
    };
    Ok(Output {
        text,
        code: if valid { EXIT_OK } else { EXIT_INVALID },
    })
}

fn plain_validate(r: &ValidateReport) -> String {
    let mut lines = vec![
        format!("semiring: {}", r.semiring.name),
        format!("states: {}", r.states),
        format!("actions: {}", r.actions.join(", ")),
        format!("transitions: {}", r.transitions),
        format!("dropped zero weights: {}", r.warnings.dropped_zero_weights),
        format!("merged duplicates: {}", r.warnings.merged_duplicates),
    ];
    for (what, report) in [("generative", &r.generative), ("reactive", &r.reactive)] {
        if let Some(report) = report {
            let mut line = format!("{what}: {}", if report.pass { "yes" } else { "no" });
            for e in report.failures() {
                match &e.label {
                    Some(l) => {
                        line.push_str(&format!("; {} on {} has mass {}", e.state, l, e.mass))
                    }
                    None => line.push_str(&format!("; {} has mass {}", e.state, e.mass)),
                }
            }
            lines.push(line);
        }
    }
    lines.push(format!("valid: {}", if r.valid { "yes" } else { "no" }));
    lines.join("\n") + "\n"
}

struct MinimizeOpts {
    mode: Equivalence,
    emit_quotient: bool,
    trace: bool,
    oracle: bool,
    solver: SolverKind,
}

#[derive(Serialize)]
struct TraceRow {
    sweep: usize,
    label: String,
    class: Vec<String>,
    blocks_split: usize,
    blocks_before: usize,
    blocks_after: usize,
}

#[derive(Serialize)]
struct Grid {
    class: Vec<String>,
    mode: SaturationMode,
    labels: Vec<String>,
    rows: Vec<GridRow>,
}

#[derive(Serialize)]
struct GridRow {
    state: String,
    weights: Vec<String>,
}

#[derive(Serialize)]
struct OracleReport {
    agrees: bool,
    blocks: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct MinimizeReport {
    semiring: &'static str,
    equivalence: &'static str,
    states: usize,
    blocks: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient: Option<SystemDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    saturation: Option<Vec<Grid>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

fn grid<S: Semiring>(
    w: &Wlts<S>,
    saturator: &Saturator<'_, S>,
    class: &[StateId],
) -> Result<Grid, CliError> {
    let s = w.semiring();
    let table = saturator.saturate(class)?;
    let labels: Vec<_> = w.labels().collect();
    Ok(Grid {
        class: names(w, class),
        mode: saturator.mode(),
        labels: labels.iter().map(|&l| w.label_name(l).to_owned()).collect(),
        rows: w
            .states()
            .map(|x| GridRow {
                state: w.state_name(x).to_owned(),
                weights: labels
                    .iter()
                    .map(|&l| s.format_value(&table.weights(l)[x.index()]))
                    .collect(),
            })
            .collect(),
    })
}

fn minimize<S: Semiring>(
    w: &Wlts<S>,
    kind: SemiringKind,
    opts: &MinimizeOpts,
    format: Format,
) -> Result<Output, CliError> {
    let Refinement { partition, trace } = refine(
        w,
        opts.mode,
        &RefineOptions {
            solver: opts.solver,
            ..Default::default()
        },
    )?;
    let quotient = match opts.mode {
        Equivalence::Strong => Some(emit_quotient(w, &partition)?),
        _ => None,
    };
    let saturation = match (opts.emit_quotient, opts.mode.saturation_mode()) {
        (true, Some(mode)) => {
            let saturator = Saturator::new(w, mode, SolverKind::Elimination);
            Some(
                partition
                    .blocks()
                    .iter()
                    .map(|b| grid(w, &saturator, b))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
        _ => None,
    };
    let oracle = if opts.oracle {
        let found = brute_coarsest_partition(w, opts.mode, w.num_states().max(1))?;
        Some(OracleReport {
            agrees: found == partition,
            blocks: blocks(w, &found),
        })
    } else {
        None
    };
    let code = match &oracle {
        Some(o) if !o.agrees => EXIT_INVALID,
        _ => EXIT_OK,
    };
    if format == Format::Dot {
        let text = match &quotient {
            Some(q) => render::dot(q, "quotient", None),
            None => render::dot(w, opts.mode.name(), Some(&partition)),
        };
        return Ok(Output { text, code });
    }
    let report = MinimizeReport {
        semiring: kind.name(),
        equivalence: opts.mode.name(),
        states: w.num_states(),
        blocks: blocks(w, &partition),
        trace: opts.trace.then(|| {
            trace
                .entries
                .iter()
                .map(|e| TraceRow {
                    sweep: e.sweep,
                    label: w.label_name(e.splitter.label).to_owned(),
                    class: names(w, &e.splitter.class),
                    blocks_split: e.blocks_split,
                    blocks_before: e.blocks_before,
                    blocks_after: e.blocks_after,
                })
                .collect()
        }),
        quotient: quotient
            .as_ref()
            .filter(|_| opts.emit_quotient)
            .map(|q| to_document(q, Some(kind))),
        saturation,
        oracle,
    };
    let text = match format {
        Format::Structured => json(&report),
        Format::Plain => plain_minimize(&report, quotient.as_ref().filter(|_| opts.emit_quotient)),
        Format::Dot => unreachable!(),
    };
    Ok(Output { text, code })
}

fn braces(names: &[String]) -> String {
    format!("{{{}}}", names.join(","))
}

fn plain_grid(g: &Grid) -> String {
    let mut header = vec!["state".to_owned()];
    header.extend(g.labels.iter().cloned());
    let rows: Vec<Vec<String>> = g
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![r.state.clone()];
            row.extend(r.weights.iter().cloned());
            row
        })
        .collect();
    render::table(&header, &rows)
}

fn plain_minimize<S: Semiring>(r: &MinimizeReport, quotient: Option<&Wlts<S>>) -> String {
    let mut out = format!(
        "equivalence: {}\nblocks: {}\n",
        r.equivalence,
        r.blocks.len()
    );
    for b in &r.blocks {
        out.push_str(&braces(b));
        out.push('\n');
    }
    if let Some(trace) = &r.trace {
        out.push_str("trace:\n");
        for t in trace {
            out.push_str(&format!(
                "  sweep {}: <{}, {}> split {} block(s), {} -> {}\n",
                t.sweep,
                t.label,
                braces(&t.class),
                t.blocks_split,
                t.blocks_before,
                t.blocks_after
            ));
        }
    }
    if let Some(q) = quotient {
        out.push_str("quotient:\n");
        out.push_str(&render::plain_transitions(q));
    }
    if let Some(grids) = &r.saturation {
        for g in grids {
            out.push_str(&format!("saturation into {}:\n", braces(&g.class)));
            out.push_str(&plain_grid(g));
        }
    }
    if let Some(o) = &r.oracle {
        let found: Vec<String> = o.blocks.iter().map(|b| braces(b)).collect();
        out.push_str(&format!(
            "oracle: {} ({})\n",
            if o.agrees { "agrees" } else { "DISAGREES" },
            found.join(" ")
        ));
    }
    out
}

#[derive(Serialize)]
struct CheckReport {
    equivalence: &'static str,
    left: String,
    right: String,
    bisimilar: bool,
    left_block: Vec<String>,
    right_block: Vec<String>,
}

fn check<S: Semiring>(
    w: &Wlts<S>,
    left: &str,
    right: &str,
    mode: Equivalence,
    solver: SolverKind,
    format: Format,
) -> Result<Output, CliError> {
    if format == Format::Dot {
        return Err(no_dot("check"));
    }
    let (x, y) = (resolve(w, left)?, resolve(w, right)?);
    let p = refine(
        w,
        mode,
        &RefineOptions {
            solver,
            ..Default::default()
        },
    )?
    .partition;
    let report = CheckReport {
        equivalence: mode.name(),
        left: left.to_owned(),
        right: right.to_owned(),
        bisimilar: p.same_block(x, y),
        left_block: names(w, p.block(p.block_of(x))),
        right_block: names(w, p.block(p.block_of(y))),
    };
    let text = match format {
        Format::Plain => format!(
            "{} and {} are {}{} bisimilar\n",
            left,
            right,
            if report.bisimilar { "" } else { "not " },
            mode.name()
        ),
        _ => json(&report),
    };
    Ok(Output {
        text,
        code: if report.bisimilar {
            EXIT_OK
        } else {
            EXIT_NOT_BISIMILAR
        },
    })
}

fn saturate<S: Semiring>(
    w: &Wlts<S>,
    class: &[String],
    mode: SaturationMode,
    format: Format,
) -> Result<Output, CliError> {
    if format == Format::Dot {
        return Err(no_dot("saturate"));
    }
    let mut ids = class
        .iter()
        .map(|n| resolve(w, n))
        .collect::<Result<Vec<_>, _>>()?;
    ids.sort();
    ids.dedup();
    let saturator = Saturator::new(w, mode, SolverKind::Elimination);
    let g = grid(w, &saturator, &ids)?;
    let text = match format {
        Format::Plain => plain_grid(&g),
        _ => json(&g),
    };
    Ok(Output::ok(text))
}

/// Every shipped instance, with the truncation threshold at 10 and the
/// default float tolerance unless parameters say otherwise.
fn all_instances(params: &Params) -> Vec<SemiringKind> {
    vec![
        SemiringKind::Boolean,
        SemiringKind::Real,
        SemiringKind::RealFloat {
            epsilon: params.epsilon.unwrap_or(DEFAULT_EPSILON),
        },
        SemiringKind::Tropical,
        SemiringKind::Arctic,
        SemiringKind::Truncation {
            k: params.k.unwrap_or(10),
        },
        SemiringKind::MaxTimes,
    ]
}

fn axioms(cli: &Cli, params: &Params) -> Result<Output, CliError> {
    let kinds = match &cli.semiring {
        Some(name) => vec![SemiringKind::from_name(name, params.k, params.epsilon)?],
        None => all_instances(params),
    };
    let reports: Vec<AxiomReport> = kinds
        .into_iter()
        .map(|kind| dispatch_semiring!(kind, s => check_axioms(&s, &s.standard_samples())))
        .collect();
    let pass = reports.iter().all(AxiomReport::all_pass);
    let text = match cli.format {
        Format::Dot => return Err(no_dot("axioms")),
        Format::Structured => json(&reports),
        Format::Plain => {
            let mut out = String::new();
            for r in &reports {
                out.push_str(&format!(
                    "{} ({} samples): {}\n",
                    r.semiring.name,
                    r.samples,
                    if r.all_pass() { "ok" } else { "FAILED" }
                ));
                for o in &r.outcomes {
                    let status = if o.passed() { "ok" } else { "FAILED" };
                    let axiom = serde_json::to_value(o.axiom).expect("axiom names serialise");
                    out.push_str(&format!(
                        "  {}: {} ({} checked)",
                        axiom.as_str().unwrap_or_default(),
                        status,
                        o.checked
                    ));
                    if let Some(c) = &o.counterexample {
                        out.push_str(&format!(", e.g. {c}"));
                    }
                    out.push('\n');
                }
            }
            out
        }
    };
    Ok(Output {
        text,
        code: if pass { EXIT_OK } else { EXIT_INVALID },
    })
}
