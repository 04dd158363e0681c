use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use mcs_core::constraints::{encode_strong, encode_weak, satisfies, IntegrityConstraint, Mode};
use mcs_core::equilibria::{enumerate_with, is_consistent, EnumerationOptions};
use mcs_core::frontend::report::{format_action, format_state, Report};
use mcs_core::frontend::{format_ic, from_mcs, load, serialize};
use mcs_core::kernel::{ContextId, Mcs, Symbol};
use mcs_core::oracle::{brute_force_equilibria, satisfaction_from};
use mcs_core::repair::{enumerate_repairs, RepairOptions, RepairOutcome};
use mcs_core::Error;

#[derive(Parser)]
#[command(name = "mcs", version, about = "Integrity checking and repair for multi-context systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Weak,
    Strong,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Weak => Mode::Weak,
            ModeArg::Strong => Mode::Strong,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    #[value(alias = "weak")]
    Thm1,
    #[value(alias = "strong")]
    Thm2,
}

#[derive(Subcommand)]
enum Command {
    /// Decide weak or strong satisfaction of the file's constraints.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "weak")]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
    },
    /// List equilibria.
    Equilibria {
        file: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate subset-minimal repairs.
    Repair {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        /// Allowed operations as CTX:OP pairs; other contexts get none.
        #[arg(long, value_delimiter = ',')]
        ops: Option<Vec<String>>,
        #[arg(long, value_enum, default_value = "weak")]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
    },
    /// Write the constraint-free system whose consistency decides satisfaction.
    Encode {
        file: PathBuf,
        #[arg(long, value_enum)]
        construction: Construction,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Cross-check the search against brute force and the encodings.
    Oracle { file: PathBuf },
}

fn read(path: &Path) -> Result<(Mcs, Vec<IntegrityConstraint>), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
    load(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn parse_ops(m: &Mcs, specs: &[String]) -> Result<BTreeMap<ContextId, BTreeSet<Symbol>>, Error> {
    let mut out: BTreeMap<ContextId, BTreeSet<Symbol>> = BTreeMap::new();
    for spec in specs {
        let (ctx, op) = spec
            .split_once(':')
            .ok_or_else(|| Error::Validation(format!("expected CTX:OP, got `{spec}`")))?;
        let id = m.find(ctx.trim()).ok_or_else(|| Error::Validation(format!("unknown context `{ctx}`")))?;
        out.entry(id).or_default().insert(Symbol::new(op.trim()));
    }
    Ok(out)
}

fn run(cmd: Command) -> Result<u8, Error> {
    match cmd {
        Command::Check { file, mode, json } => {
            let (m, ics) = read(&file)?;
            let mode = Mode::from(mode);
            let verdict = satisfies(&m, &ics, mode)?;
            info!("{} equilibria examined", verdict.equilibria);
            if json {
                println!("{}", Report::check(&m, &ics, mode, &verdict).to_json());
            } else {
                println!("{mode} satisfaction: {}", if verdict.holds { "holds" } else { "fails" });
                if let Some(w) = &verdict.witness {
                    println!("{}", if verdict.holds { "witness:" } else { "violating equilibrium:" });
                    println!("{}", format_state(&m, w));
                }
                if let Some(v) = &verdict.violation {
                    let binding: Vec<String> = v.binding.iter().map(|(k, c)| format!("{k}={c}")).collect();
                    println!("violated: {} [{}]", format_ic(&m, &ics[v.constraint]), binding.join(", "));
                }
                if !verdict.holds && verdict.witness.is_none() {
                    println!("no equilibrium exists");
                }
            }
            Ok(if verdict.holds { 0 } else { 1 })
        }
        Command::Equilibria { file, limit, json } => {
            let (m, _) = read(&file)?;
            let eqs = enumerate_with(&m, EnumerationOptions { limit, ..EnumerationOptions::default() })?;
            if json {
                println!("{}", Report::equilibria(&m, &eqs).to_json());
            } else {
                println!("{} equilibria", eqs.len());
                for (k, s) in eqs.iter().enumerate() {
                    println!("#{}", k + 1);
                    println!("{}", format_state(&m, s));
                }
            }
            Ok(0)
        }
        Command::Repair { file, max_size, ops, mode, json } => {
            let (m, ics) = read(&file)?;
            let allowed_ops = ops.map(|o| parse_ops(&m, &o)).transpose()?;
            let mode = Mode::from(mode);
            let outcome = enumerate_repairs(&m, &ics, &RepairOptions { max_size, allowed_ops, mode })?;
            if json {
                println!("{}", Report::repair(&m, mode, &outcome).to_json());
            } else {
                match &outcome {
                    RepairOutcome::AlreadyConsistent => println!("already consistent"),
                    RepairOutcome::NoCandidates => println!("no update actions available"),
                    RepairOutcome::Exhausted { max_size, candidates } => {
                        println!("no repair of size <= {max_size} among {candidates} candidate actions")
                    }
                    RepairOutcome::Repairs(list) => {
                        for r in list {
                            let acts: Vec<String> = r.actions.iter().map(|a| format_action(&m, a)).collect();
                            println!("{{{}}}", acts.join(", "));
                        }
                    }
                }
            }
            Ok(match outcome {
                RepairOutcome::AlreadyConsistent | RepairOutcome::Repairs(_) => 0,
                _ => 1,
            })
        }
        Command::Encode { file, construction, output } => {
            let (m, ics) = read(&file)?;
            let encoded = match construction {
                Construction::Thm1 => encode_weak(&m, &ics),
                Construction::Thm2 => encode_strong(&m, &ics),
            };
            let doc = from_mcs(&encoded, &[])?;
            std::fs::write(&output, serialize(&doc))
                .map_err(|e| Error::Validation(format!("{}: {e}", output.display())))?;
            Ok(0)
        }
        Command::Oracle { file } => {
            let (m, ics) = read(&file)?;
            let mut searched = enumerate_with(&m, EnumerationOptions::unbounded())?;
            searched.sort();
            let brute = brute_force_equilibria(&m)?;
            let mut failures = Vec::new();
            if searched != brute {
                failures.push(format!("search found {} equilibria, brute force {}", searched.len(), brute.len()));
            }
            let (weak, strong) = satisfaction_from(&m, &brute, &ics)?;
            let weak_enc = is_consistent(&encode_weak(&m, &ics))?.is_some();
            if weak != weak_enc {
                failures.push(format!("weak satisfaction {weak} but weak encoding consistent = {weak_enc}"));
            }
            if !brute.is_empty() {
                let strong_enc = is_consistent(&encode_strong(&m, &ics))?.is_none();
                if strong != strong_enc {
                    failures.push(format!("strong satisfaction {strong} but strong encoding inconsistent = {strong_enc}"));
                }
            }
            println!("equilibria: {}  weak: {weak}  strong: {strong}", brute.len());
            for f in &failures {
                println!("MISMATCH {f}");
            }
            Ok(if failures.is_empty() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("MCS_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
