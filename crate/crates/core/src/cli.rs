//! Command-line front end. Every command prints one JSON `CommandResult`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cycles::{
    cycle_product_structure, godbold_slater_report, mcquillan_i, mcquillan_ii, solve_ng, CoverageBudget,
};
use crate::error::{Error, ErrorKind, Result};
use crate::families::{
    check_s_member, enumerate_s1regular, s1regular_diagnostic, t_member_from_labeling, AssignmentFile,
    SFamilyMember, TFamilyMember,
};
use crate::graph::Digraph;
use crate::labeling::{is_super_edge_magic, valence_if_edge_magic, MagicCheck, TotalLabeling};
use crate::oracle::{self, Guard, Mode};
use crate::product::{induced_spk, induced_tqs, LabeledProduct};
use crate::suite;
use crate::transforms::Transform;

/// Exit code of `suite` when at least one criterion fails.
pub const SUITE_FAILED: i32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandResult {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default)]
    pub payload: Value,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

impl CommandResult {
    fn ok(payload: Value, diagnostics: Vec<String>) -> Self {
        CommandResult { status: Status::Ok, code: None, message: None, payload, diagnostics }
    }

    fn error(code: &str, message: String) -> Self {
        CommandResult {
            status: Status::Error,
            code: Some(code.to_string()),
            message: Some(message),
            payload: Value::Null,
            diagnostics: Vec::new(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "magiclab", version, about = "Edge-magic labelings of digraphs and their products")]
struct Cli {
    /// Emit JSON on stdout (the only output format).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether a labeling is (super) edge-magic.
    Verify {
        #[arg(long)]
        labeling: PathBuf,
    },
    /// Apply a labeling transform.
    Transform {
        #[arg(long, value_parser = parse_transform)]
        op: Transform,
        #[arg(long)]
        labeling: PathBuf,
        /// Also write the transformed labeling here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Families(FamiliesCommand),
    /// Exhaustive valence search.
    Oracle {
        /// `cycle:N`, `path:N`, `empty:N`, or a digraph JSON file.
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value = "em")]
        mode: OracleMode,
    },
    /// Build an induced product labeling.
    Product {
        #[arg(long, value_enum)]
        mode: ProductMode,
        /// Labeling (spk) or S-family member (tqs) of the outer factor.
        #[arg(long)]
        d: PathBuf,
        /// Edge assignment file.
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
    },
    #[command(subcommand)]
    Cycles(CyclesCommand),
    /// Run the acceptance criteria.
    Suite,
}

#[derive(Subcommand, Debug)]
enum FamiliesCommand {
    /// List the 1-regular members of S_p.
    EnumerateS {
        #[arg(long)]
        p: u32,
    },
    /// Test membership of a digraph in S_p.
    CheckS {
        #[arg(long)]
        digraph: PathBuf,
        #[arg(long)]
        p: Option<u32>,
    },
    /// Read off the T-family member carried by an edge-magic labeling.
    TMember {
        #[arg(long)]
        labeling: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CyclesCommand {
    /// Achieved valences of C_n against the conjectured range.
    Coverage(CoverageArgs),
    /// Component lengths of the cycle product for generator g.
    Structure {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        g: u32,
    },
    /// Lift an edge-magic labeling of C_m to C_pm.
    Mcquillan {
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        base: PathBuf,
    },
}

#[derive(Args, Debug)]
struct CoverageArgs {
    #[arg(long)]
    n: u32,
    /// Largest p + q handed to the exhaustive search.
    #[arg(long)]
    oracle_max: Option<u32>,
    /// Do not run the search on C_n itself.
    #[arg(long)]
    constructions_only: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleMode {
    Em,
    Sem,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProductMode {
    Spk,
    Tqs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    I,
    Ii,
}

fn parse_transform(s: &str) -> std::result::Result<Transform, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the result with its exit code. Help and version requests come back as
/// `Err` with the text clap would print.
pub fn run<I, T>(argv: I) -> std::result::Result<(CommandResult, i32), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            return Ok((CommandResult::error(ErrorKind::Usage.as_str(), e.to_string()), ErrorKind::Usage.exit_code()))
        }
        Err(e) => return Err(e),
    };
    Ok(match dispatch(cli.command) {
        Ok(Outcome::Done(result)) => (result, 0),
        Ok(Outcome::SuiteFailed(mut result)) => {
            result.status = Status::Error;
            result.code = Some("suite-failed".into());
            (result, SUITE_FAILED)
        }
        Err(e) => (CommandResult::error(e.kind().as_str(), e.to_string()), e.kind().exit_code()),
    })
}

enum Outcome {
    Done(CommandResult),
    SuiteFailed(CommandResult),
}

fn done(payload: Value) -> Result<Outcome> {
    Ok(Outcome::Done(CommandResult::ok(payload, Vec::new())))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("domain types serialize")
}

/// No unverified labeling leaves the process.
fn reverify(f: &TotalLabeling, valence: u32) -> Result<()> {
    match valence_if_edge_magic(f) {
        Some(v) if v == valence => Ok(()),
        other => Err(Error::Invariant(format!("emitted labeling has valence {other:?}, expected {valence}"))),
    }
}

fn reverify_product(prod: &LabeledProduct) -> Result<()> {
    reverify(&prod.labeling, prod.valence)
}

fn load_graph(spec: &str) -> Result<Digraph> {
    match Digraph::from_spec(spec) {
        Ok(d) => Ok(d),
        Err(_) if Path::new(spec).exists() => read_json(Path::new(spec)),
        Err(e) => Err(e),
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    let guard = Guard::from_env();
    match command {
        Command::Verify { labeling } => {
            let f: TotalLabeling = read_json(&labeling)?;
            let mut diagnostics = Vec::new();
            let payload = match f.check_magic() {
                MagicCheck::Magic { valence } => {
                    json!({"edge_magic": true, "valence": valence, "super": is_super_edge_magic(&f)})
                }
                MagicCheck::Conflict { arc_index, expected, found } => {
                    let (u, v) = f.graph().arcs()[arc_index];
                    diagnostics.push(format!("arc ({u}, {v}) sums to {found}, first arc sums to {expected}"));
                    json!({"edge_magic": false, "valence": null, "super": false,
                           "conflict": {"arc": [u, v], "expected": expected, "found": found}})
                }
                MagicCheck::NoArcs => {
                    diagnostics.push("digraph has no arcs; valence undefined".into());
                    json!({"edge_magic": false, "valence": null, "super": false})
                }
            };
            Ok(Outcome::Done(CommandResult::ok(payload, diagnostics)))
        }
        Command::Transform { op, labeling, out } => {
            let f: TotalLabeling = read_json(&labeling)?;
            let g = op.apply(&f)?;
            let val = valence_if_edge_magic(&g)
                .ok_or_else(|| Error::Invariant("transformed labeling is not edge-magic".into()))?;
            if let Some(out) = out {
                fs::write(&out, serde_json::to_string_pretty(&g)?)?;
            }
            Ok(Outcome::Done(CommandResult::ok(to_value(&g), vec![format!("valence {val}")])))
        }
        Command::Families(cmd) => families(cmd),
        Command::Oracle { graph, mode } => {
            let d = load_graph(&graph)?;
            let mode = match mode {
                OracleMode::Em => Mode::EdgeMagic,
                OracleMode::Sem => Mode::SuperEdgeMagic,
            };
            let report = oracle::run(&d, mode, guard)?;
            if !report.verify() {
                return Err(Error::Invariant("oracle certificate failed re-verification".into()));
            }
            done(to_value(&report))
        }
        Command::Product { mode, d, h, emit_dot } => {
            let prod = match mode {
                ProductMode::Spk => {
                    let f: TotalLabeling = read_json(&d)?;
                    let h: AssignmentFile<SFamilyMember> = read_json(&h)?;
                    induced_spk(&f, &h.into_assignment(f.graph())?)?
                }
                ProductMode::Tqs => {
                    let dm: SFamilyMember = read_json(&d)?;
                    let h: AssignmentFile<TFamilyMember> = read_json(&h)?;
                    let h = h.into_assignment(dm.digraph())?;
                    induced_tqs(&dm, &h)?
                }
            };
            reverify_product(&prod)?;
            if let Some(path) = emit_dot {
                fs::write(path, prod.labeling.to_dot())?;
            }
            done(to_value(&prod))
        }
        Command::Cycles(cmd) => cycles(cmd, guard),
        Command::Suite => {
            let outcomes = suite::run_all();
            let diagnostics = outcomes.iter().map(ToString::to_string).collect();
            let payload = Value::Array(
                outcomes
                    .iter()
                    .map(|o| {
                        json!({"id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail,
                               "seconds": o.elapsed.as_secs_f64()})
                    })
                    .collect(),
            );
            let result = CommandResult::ok(payload, diagnostics);
            Ok(if outcomes.iter().all(|o| o.passed) { Outcome::Done(result) } else { Outcome::SuiteFailed(result) })
        }
    }
}

fn families(cmd: FamiliesCommand) -> Result<Outcome> {
    match cmd {
        FamiliesCommand::EnumerateS { p } => {
            if p == 0 {
                return Err(Error::Precondition("p must be positive".into()));
            }
            let members = enumerate_s1regular(p);
            let diagnostics = s1regular_diagnostic(p).into_iter().collect();
            let payload = json!({"p": p, "count": members.len(), "members": to_value(&members)});
            Ok(Outcome::Done(CommandResult::ok(payload, diagnostics)))
        }
        FamiliesCommand::CheckS { digraph, p } => {
            let d: Digraph = read_json(&digraph)?;
            let p = p.unwrap_or(d.order());
            let k = check_s_member(&d, p)?;
            done(json!({"p": p, "member": k.is_some(), "k": k}))
        }
        FamiliesCommand::TMember { labeling } => {
            let f: TotalLabeling = read_json(&labeling)?;
            done(to_value(&t_member_from_labeling(&f)?))
        }
    }
}

fn cycles(cmd: CyclesCommand, guard: Guard) -> Result<Outcome> {
    match cmd {
        CyclesCommand::Coverage(CoverageArgs { n, oracle_max, constructions_only }) => {
            let budget = CoverageBudget { oracle_max: oracle_max.unwrap_or(guard.0), direct_oracle: !constructions_only };
            let report = godbold_slater_report(n, budget)?;
            for entry in &report.entries {
                if let Some(f) = &entry.certificate {
                    reverify(f, entry.valence)?;
                }
            }
            let (lo, hi) = report.conjectured_range;
            let missing = (lo..=hi).filter(|v| !report.achieved().contains(v)).count();
            let diagnostics = vec![format!("{missing} valences of [{lo}, {hi}] not achieved")];
            Ok(Outcome::Done(CommandResult::ok(to_value(&report), diagnostics)))
        }
        CyclesCommand::Structure { m, n, g } => {
            if m < 3 || n < 3 || g >= n {
                return Err(Error::Precondition(format!("need m, n >= 3 and 0 <= g < n (m={m}, n={n}, g={g})")));
            }
            let a = solve_ng(m, n, g)
                .ok_or_else(|| Error::Precondition(format!("no N with {m} - 2N = {g} (mod {n})")))?;
            let lengths = cycle_product_structure(&a)?;
            done(json!({"m": m, "n": n, "g": g, "reversed": a.reversed_count(), "components": lengths}))
        }
        CyclesCommand::Mcquillan { variant, m, p, base } => {
            let f: TotalLabeling = read_json(&base)?;
            if f.order() != m {
                return Err(Error::Precondition(format!("base labeling has order {}, expected m = {m}", f.order())));
            }
            let prod = match variant {
                Variant::I => mcquillan_i(&f, p, guard)?,
                Variant::Ii => mcquillan_ii(&f, p, guard)?,
            };
            reverify_product(&prod)?;
            done(to_value(&prod))
        }
    }
}
