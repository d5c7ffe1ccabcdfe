use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sl_core::coherence::{Policy, PolicyKind};
use sl_core::driver::{cmd_check, cmd_explain, cmd_run, Report, RunConfig};

#[derive(Parser)]
#[command(name = "sl", version, about = "Check, run and explain SL programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check and link the program, reporting diagnostics.
    Check(Common),
    /// Check, elaborate and evaluate `main`.
    Run(Common),
    /// Show how the constraint at FILE:LINE:COL was resolved.
    Explain {
        locator: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Source files.
    files: Vec<String>,
    /// Coherence policy.
    #[arg(long, default_value = "use-site", value_parser = parse_policy)]
    policy: PolicyKind,
    /// Use-site: pick a unique most specific model among overlapping ones.
    #[arg(long)]
    prioritize_specific: bool,
    /// Use-site: accept ambiguous goals, taking the first declared model.
    #[arg(long)]
    incoherent_ok: bool,
    /// Resolution depth limit.
    #[arg(long, default_value_t = sl_core::resolver::DEFAULT_DEPTH)]
    depth: usize,
    /// Evaluation step budget.
    #[arg(long, default_value_t = sl_core::eval::DEFAULT_FUEL)]
    fuel: u64,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    /// Print the elaborated core program.
    #[arg(long)]
    emit_core: bool,
    /// File listing source paths, one per line.
    #[arg(long)]
    manifest: Option<String>,
}

fn parse_policy(s: &str) -> Result<PolicyKind, String> {
    s.parse()
}

impl Common {
    fn config(self) -> RunConfig {
        RunConfig {
            policy: Policy { kind: self.policy, prioritize_specific: self.prioritize_specific, incoherent_ok: self.incoherent_ok },
            depth: self.depth,
            fuel: self.fuel,
            emit_core: self.emit_core,
            json: self.json,
            color: std::env::var("SL_COLOR").is_ok_and(|v| v == "1"),
            files: self.files,
            manifest: self.manifest,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let report: Report = match cli.command {
        Command::Check(c) => cmd_check(&c.config()),
        Command::Run(c) => cmd_run(&c.config()),
        Command::Explain { locator, common } => cmd_explain(&common.config(), &locator),
    };
    let _ = std::io::stdout().write_all(report.stdout.as_bytes());
    let _ = std::io::stderr().write_all(report.stderr.as_bytes());
    ExitCode::from(report.exit as u8)
}
