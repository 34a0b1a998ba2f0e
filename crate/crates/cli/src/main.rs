use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use subext::compute::{self, Command as Compute};
use subext::scenarios::{find, REGISTRY};
use subext::{bundled, parse_workspace, run_all, run_scenario, RunOptions, ScenarioResult, Status, Workspace};
use subext_core::ext::ENUM_BUDGET;

#[derive(Parser)]
#[command(name = "subext", version, about = "Exact Ext¹ subfunctors over small local rings")]
struct Cli {
    /// Workspace file (rings, ideals, modules); the bundled one by default.
    #[arg(long, global = true)]
    ws: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Names and claims of the verification scenarios.
    ListScenarios,
    /// Run one scenario (or `all`) and print its JSON report.
    Verify {
        scenario: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximal number of Ext¹ classes one enumeration may visit.
        #[arg(long, default_value_t = ENUM_BUDGET)]
        budget: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-shot computations; output is JSON.
    Compute {
        #[arg(long, default_value_t = ENUM_BUDGET)]
        budget: u64,
        #[command(subcommand)]
        what: ComputeCmd,
    },
}

#[derive(Subcommand)]
enum ComputeCmd {
    /// Invariants of a ring.
    RingInfo { ring: String },
    /// μ, length, depth, Betti numbers of a module.
    ModInvariants { module: String },
    /// Ext¹(M, N) as a D-module.
    Ext { m: String, n: String },
    /// Classes of Ext¹(M, N) on which the given functions are additive.
    ExtSub {
        m: String,
        n: String,
        /// mu | nu:I | et:I | hom-from:C | hom-to:C | tensor:C  (I: ideal label, m or m^k)
        #[arg(long = "phi", required = true)]
        phis: Vec<String>,
        /// Print every admitted class.
        #[arg(long)]
        list: bool,
    },
    /// Classes with I-Ulrich middle term next to the ν_I-additive ones.
    ExtUl {
        m: String,
        n: String,
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = 1)]
        s: u8,
    },
    /// The extension of a class given by its coordinates (polynomials in t).
    Middle {
        m: String,
        n: String,
        #[arg(required = true)]
        coords: Vec<String>,
    },
}

fn load(ws: &Option<PathBuf>) -> Result<Workspace, String> {
    match ws {
        None => Ok(bundled()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            parse_workspace(&text).map_err(|e| format!("{}: {} ({})", p.display(), e, e.code()))
        }
    }
}

fn exit_for(s: Status) -> ExitCode {
    match s {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
        Status::Budget => ExitCode::from(3),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ws = match load(&cli.ws) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match cli.cmd {
        Cmd::ListScenarios => {
            for s in REGISTRY {
                println!("{:<28} {}", s.name, s.claim);
            }
            ExitCode::SUCCESS
        }
        Cmd::Verify { scenario, seed, budget, out } => {
            let opts = RunOptions { seed, budget };
            let (text, status) = if scenario == "all" {
                let all: Vec<ScenarioResult> = run_all(&ws, opts);
                let status = all.iter().fold(Status::Pass, |s, r| s.combine(r.status));
                for r in &all {
                    eprintln!("{:<28} {:?} ({} ms)", r.scenario, r.status, r.wall_time_ms);
                }
                (serde_json::to_string_pretty(&all).expect("reports serialize"), status)
            } else {
                if find(&scenario).is_none() {
                    eprintln!("error: unknown scenario {scenario:?}; see `subext list-scenarios`");
                    return ExitCode::from(2);
                }
                match run_scenario(&ws, &scenario, opts) {
                    Ok(r) => (r.to_json(), r.status),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
            };
            if let Err(e) = emit(&text, &out) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            exit_for(status)
        }
        Cmd::Compute { budget, what } => {
            let cmd = match what {
                ComputeCmd::RingInfo { ring } => Compute::RingInfo { ring },
                ComputeCmd::ModInvariants { module } => Compute::ModInvariants { module },
                ComputeCmd::Ext { m, n } => Compute::Ext { m, n },
                ComputeCmd::ExtSub { m, n, phis, list } => Compute::ExtSub { m, n, phis, list },
                ComputeCmd::ExtUl { m, n, ideal, s } => Compute::ExtUl { m, n, ideal, s },
                ComputeCmd::Middle { m, n, coords } => Compute::Middle { m, n, class: coords },
            };
            match compute::run(&ws, &cmd, budget) {
                Ok(v) => {
                    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    println!("{}", serde_json::to_string_pretty(&e.to_json()).expect("json"));
                    ExitCode::from(1)
                }
            }
        }
    }
}
