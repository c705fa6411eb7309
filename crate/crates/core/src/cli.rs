//! Command-line front end: `verify`, `build`, `analyze`, `search` and `graph`.
//!
//! Exit codes: 0 success, 1 failed check, 2 configuration error, 3 internal
//! inconsistency. Every command is deterministic.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{build_graph, genus_ladder, limit_report, report_json, write_csv};
use crate::error::{Error, ErrorKind, Result};
use crate::ffield::{Budget, FieldTower};
use crate::report::Report;
use crate::singer::{
    default_singer, image_of_r_check, mu_conjugation_check, verify_cover, SingerData,
};
use crate::towergen::{
    brute_force_phi_oracle, family_scan, first_family_spec, generic_spec, phi_candidates,
    q5_instance_with, search, standard_family, validate_spec, TowerSpec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "towerlab",
    version,
    about = "Recursive towers of curves from Singer-subgroup covers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the cover, the image of R, the φ criterion and every tower premise.
    Verify(InstanceArgs),
    /// Print a tower spec as JSON.
    Build(InstanceArgs),
    /// Genus ladder, splitting bound and limit table.
    Analyze(AnalyzeArgs),
    /// Enumerate candidate specs and print the valid ones.
    Search(SearchArgs),
    /// Export the correspondence graph over `F_{q^k}`.
    Graph(GraphArgs),
}

/// Selects a tower spec.
#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// The worked instance over F_5.
    #[arg(long, conflicts_with_all = ["family", "spec", "p"])]
    pub q5: bool,
    /// The a = t = 0 family (requires --p; --b and --n pick the member).
    #[arg(long, requires = "p")]
    pub family: bool,
    /// Load a spec previously written by `build`.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["family", "p"])]
    pub spec: Option<PathBuf>,
    /// Characteristic.
    #[arg(long)]
    pub p: Option<u32>,
    /// Extension degree of F_q over F_p.
    #[arg(long, default_value_t = 1)]
    pub ext: u32,
    /// Family parameter b (canonical element text).
    #[arg(long, allow_hyphen_values = true, requires = "family")]
    pub b: Option<String>,
    /// Family parameter n (canonical element text).
    #[arg(long = "n", allow_hyphen_values = true, requires = "family")]
    pub n_param: Option<String>,
    /// Index into the φ candidates (generic path).
    #[arg(long, default_value_t = 0)]
    pub phi_index: usize,
    /// Index into the targets T = ψ⁻¹(Q) (generic path).
    #[arg(long, default_value_t = 0)]
    pub t_index: usize,
    /// Index into the ψ candidates for the chosen T (generic path).
    #[arg(long, default_value_t = 0)]
    pub psi_index: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Write output to a file instead of standard output.
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Extra diagnostics on standard error.
    #[arg(long)]
    pub debug: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Highest level m.
    #[arg(long, default_value_t = 6)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Search over the Singer data of the worked F_5 instance.
    #[arg(long, conflicts_with = "p")]
    pub q5: bool,
    #[arg(long, required_unless_present = "q5")]
    pub p: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub ext: u32,
    /// Scan the a = t = 0 family instead of the generic (φ, T, ψ) space.
    #[arg(long)]
    pub family_scan: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Work over F_{q^k}.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Format::Dot)]
    pub format: Format,
}

pub fn exit_code(err: &Error) -> i32 {
    match err.kind() {
        ErrorKind::Config => EXIT_CONFIG,
        ErrorKind::Check => EXIT_CHECK,
        ErrorKind::Internal => EXIT_INTERNAL,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let budget = Budget::from_env()?;
    match command {
        Command::Verify(a) => with_output(&a.common, out, |w| cmd_verify(a, budget, w)),
        Command::Build(a) => with_output(&a.common, out, |w| cmd_build(a, budget, w)),
        Command::Analyze(a) => {
            with_output(&a.instance.common, out, |w| cmd_analyze(a, budget, w, err))
        }
        Command::Search(a) => with_output(&a.common, out, |w| cmd_search(a, budget, w)),
        Command::Graph(a) => with_output(&a.instance.common, out, |w| cmd_graph(a, budget, w)),
    }
}

fn io_err(e: io::Error) -> Error {
    Error::Parameter(format!("output: {e}"))
}

fn with_output(
    common: &CommonArgs,
    out: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<i32>,
) -> Result<i32> {
    match &common.output {
        Some(path) => {
            let mut file = File::create(path).map_err(io_err)?;
            let code = body(&mut file)?;
            file.flush().map_err(io_err)?;
            Ok(code)
        }
        None => {
            let code = body(out)?;
            out.flush().map_err(io_err)?;
            Ok(code)
        }
    }
}

fn field_tower(p: u32, ext: u32, budget: Budget) -> Result<Arc<FieldTower>> {
    Ok(Arc::new(FieldTower::build(p, ext, 2, budget, &[])?))
}

/// Resolves the selected instance to a spec.
pub fn select_spec(a: &InstanceArgs, budget: Budget) -> Result<TowerSpec> {
    if a.q5 {
        return q5_instance_with(budget);
    }
    if let Some(path) = &a.spec {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parameter(format!("{}: {e}", path.display())))?;
        return TowerSpec::from_json(&text, budget);
    }
    let p =
        a.p.ok_or_else(|| Error::Parameter("one of --q5, --spec or --p is required".into()))?;
    let tower = field_tower(p, a.ext, budget)?;
    if a.family {
        return match (&a.b, &a.n_param) {
            (Some(b), Some(n)) => {
                let base = tower.base();
                let (b, n) = (base.parse(b)?, base.parse(n)?);
                standard_family(tower, b, n)
            }
            (None, None) => first_family_spec(tower),
            _ => Err(Error::Parameter(
                "--b and --n must be given together".into(),
            )),
        };
    }
    generic_spec(default_singer(tower)?, a.phi_index, a.t_index, a.psi_index)
}

/// Singer data behind the selection, available even when no spec exists.
fn select_singer(a: &InstanceArgs, budget: Budget) -> Result<SingerData> {
    if a.q5 || a.spec.is_some() || a.family {
        return Ok(select_spec(a, budget)?.singer);
    }
    let p =
        a.p.ok_or_else(|| Error::Parameter("one of --q5, --spec or --p is required".into()))?;
    default_singer(field_tower(p, a.ext, budget)?)
}

fn write_json(w: &mut dyn Write, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    writeln!(w, "{text}").map_err(io_err)
}

/// Every named check for the selection; the second field carries the error
/// that stopped spec construction, if any.
pub fn verify_report(a: &InstanceArgs, budget: Budget) -> Result<(Report, Option<Error>)> {
    let mut report = Report::new();
    let sd = match select_singer(a, budget) {
        Ok(sd) => sd,
        Err(e) if e.kind() == ErrorKind::Check => {
            report.push("spec_constructed", false);
            return Ok((report, Some(e)));
        }
        Err(e) => return Err(e),
    };
    report.absorb("cover", &verify_cover(&sd));
    report.push("image_of_r.is_trace_fiber", image_of_r_check(&sd));
    let mu = mu_conjugation_check(&sd);
    report.push("mu.conjugate_is_norm", mu.conjugate_is_norm);
    report.push("mu.rational_points_to_one", mu.rational_points_to_one);
    report.push("mu.swapped_is_norm", mu.swapped_is_norm);
    let mut oracle = brute_force_phi_oracle(&sd);
    oracle.retain(|phi| !crate::towergen::excluded_phis(&sd).contains(phi));
    report.push(
        "phi.criterion_matches_brute_force",
        phi_candidates(&sd) == oracle,
    );
    let spec = match select_spec(a, budget) {
        Ok(spec) => spec,
        Err(e) if e.kind() == ErrorKind::Check => {
            report.push("spec_constructed", false);
            return Ok((report, Some(e)));
        }
        Err(e) => return Err(e),
    };
    report.push("spec_constructed", true);
    report.absorb("spec", &validate_spec(&spec));
    Ok((report, None))
}

fn cmd_verify(a: &InstanceArgs, budget: Budget, w: &mut dyn Write) -> Result<i32> {
    let (report, error) = verify_report(a, budget)?;
    let mut doc = json!({
        "passed": report.passed(),
        "checks": report,
        "failures": report.failures(),
    });
    if let Some(e) = &error {
        doc["error"] = Value::String(e.to_string());
    }
    write_json(w, &doc)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK })
}

fn cmd_build(a: &InstanceArgs, budget: Budget, w: &mut dyn Write) -> Result<i32> {
    let spec = select_spec(a, budget)?;
    writeln!(w, "{}", spec.to_json()).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_analyze(
    a: &AnalyzeArgs,
    budget: Budget,
    w: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let spec = select_spec(&a.instance, budget)?;
    if a.instance.common.debug {
        let levels = a.m.min(budget.max_level);
        for level in genus_ladder(&spec, levels)? {
            let _ = writeln!(
                err,
                "m={} genus={} delta={} cancellations={} states={}",
                level.m, level.genus, level.delta, level.cancellations, level.states
            );
        }
    }
    let report = limit_report(&spec, a.m)?;
    match a.format {
        Format::Csv => write_csv(&report, w)?,
        Format::Json => write_json(w, &report_json(&report))?,
        Format::Dot => return Err(Error::Parameter("analyze supports csv and json".into())),
    }
    Ok(EXIT_OK)
}

fn cmd_search(a: &SearchArgs, budget: Budget, w: &mut dyn Write) -> Result<i32> {
    let tower = match (a.q5, a.p) {
        (true, _) => q5_instance_with(budget)?.singer.tower.clone(),
        (false, Some(p)) => field_tower(p, a.ext, budget)?,
        (false, None) => return Err(Error::Parameter("--p is required".into())),
    };
    let mut write_err = None;
    let mut emit = |spec: &TowerSpec| {
        if write_err.is_none() {
            let line = serde_json::to_string(&spec.to_doc()).expect("spec documents serialize");
            if let Err(e) = writeln!(w, "{line}") {
                write_err = Some(e);
            }
        }
    };
    let (mode, summary) = if a.family_scan {
        ("family-scan", family_scan(tower, &mut emit)?)
    } else {
        let sd = if a.q5 {
            q5_instance_with(budget)?.singer
        } else {
            default_singer(tower)?
        };
        ("generic", search(&sd, &mut emit)?)
    };
    if let Some(e) = write_err {
        return Err(io_err(e));
    }
    let line = json!({"summary": {"mode": mode, "candidates": summary.candidates, "valid": summary.valid}});
    writeln!(w, "{line}").map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_graph(a: &GraphArgs, budget: Budget, w: &mut dyn Write) -> Result<i32> {
    let spec = select_spec(&a.instance, budget)?;
    let graph = build_graph(&spec, a.k)?;
    match a.format {
        Format::Dot => w.write_all(graph.to_dot().as_bytes()).map_err(io_err)?,
        Format::Json => write_json(
            w,
            &json!({
                "k": graph.k,
                "nodes": graph.labels,
                "in_s": graph.in_s,
                "in_r": graph.in_r,
                "adj": graph.adj,
            }),
        )?,
        Format::Csv => return Err(Error::Parameter("graph supports dot and json".into())),
    }
    Ok(EXIT_OK)
}
