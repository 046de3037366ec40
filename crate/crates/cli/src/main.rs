//! Command-line front end: protocol execution, table conformance
//! verification, attack batches, and JSON report emission.

mod commands;
mod config;

use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use relqc::engine::Protocol;
use relqc::pauli::{BasisMode, BellIndex};

use config::{
    CarrierChoice, GeometryConfig, PairsChoice, PauliChoice, ResolvedAttackConfig,
    ResolvedRunConfig,
};

#[derive(Parser)]
#[command(
    name = "relqc",
    about = "Simulator of relativistic two-party protocols built on entanglement swapping and teleportation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// 64-bit seed for the deterministic random source.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Geometry file (JSON); omitted fields use the desk-scale defaults.
    #[arg(long, value_name = "FILE")]
    geometry: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded honest protocol trials and emit an aggregate report.
    Run {
        #[command(flatten)]
        common: CommonOpts,
        /// Protocol: core, ot, tpsc, coin or bc.
        #[arg(long)]
        protocol: String,
        /// Basis mode: hadamard or computational.
        #[arg(long, default_value = "hadamard")]
        basis: String,
        /// Number of trials.
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// Alice's input Pauli (I, X, Z, ZX) or "random".
        #[arg(long, default_value = "random")]
        sigma_a: String,
        /// Bob's input Pauli (I, X, Z, ZX) or "random".
        #[arg(long, default_value = "random")]
        sigma_b: String,
        /// Initial pair indices "LL,RR" or "random".
        #[arg(long, default_value = "random")]
        pairs: String,
        /// Carrier state: plus, minus, zero or one.
        #[arg(long)]
        carrier: Option<String>,
        /// Force Alice's swap measurement outcome (00, 01, 10, 11).
        #[arg(long)]
        forced_alpha: Option<String>,
        /// Force Bob's teleport measurement outcome.
        #[arg(long)]
        forced_beta: Option<String>,
        /// Worker threads for trial execution.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check the 64 swapping and 16 correction fixtures against the closed
    /// forms and the state-vector oracle.
    VerifyTables {
        #[command(flatten)]
        common: CommonOpts,
        /// Verify through the state-vector path alone.
        #[arg(long)]
        oracle_only: bool,
    },
    /// Run a cheating strategy batch and emit its statistics.
    Attack {
        #[command(flatten)]
        common: CommonOpts,
        /// Strategy: input-alteration, wrong-basis, mlc-delayed-alice,
        /// entangled-bprime, eve-set or position-spoof.
        #[arg(long)]
        strategy: String,
        /// Number of trials.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Available inference elements for eve-set, comma separated.
        #[arg(long)]
        available: Option<String>,
        /// Reveal-position offset for position-spoof, in units of d.
        #[arg(long)]
        offset: Option<f64>,
        /// Desired commitment bit for mlc-delayed-alice.
        #[arg(long)]
        desired_bit: Option<u8>,
        /// Coset the altered reveal targets for input-alteration.
        #[arg(long)]
        target_coset: Option<u8>,
        /// Run the strategy's honest control variant.
        #[arg(long)]
        control: bool,
        /// Schmidt coefficient of the entangled-bprime substitute.
        #[arg(long)]
        lambda0: Option<f64>,
        /// Pauli applied to the retained half after Bob's announcements.
        #[arg(long)]
        post_op: Option<String>,
        /// Query time for the eve-set assembly gate.
        #[arg(long)]
        at_time: Option<f64>,
    },
}

fn parse_protocol(s: &str) -> anyhow::Result<Protocol> {
    match s.to_ascii_lowercase().as_str() {
        "core" => Ok(Protocol::Core),
        "ot" => Ok(Protocol::Ot),
        "tpsc" => Ok(Protocol::Tpsc),
        "coin" => Ok(Protocol::Coin),
        "bc" => Ok(Protocol::Bc),
        other => anyhow::bail!(
            "invalid config field `protocol`: unknown protocol {other:?} (expected core, ot, tpsc, coin or bc)"
        ),
    }
}

fn parse_basis(s: &str) -> anyhow::Result<BasisMode> {
    match s.to_ascii_lowercase().as_str() {
        "hadamard" => Ok(BasisMode::Hadamard),
        "computational" => Ok(BasisMode::Computational),
        other => anyhow::bail!(
            "invalid config field `basis`: unknown basis {other:?} (expected hadamard or computational)"
        ),
    }
}

fn parse_bell(field: &'static str, s: &str) -> anyhow::Result<BellIndex> {
    s.parse::<BellIndex>()
        .map_err(|e| anyhow::anyhow!("invalid config field `{field}`: {e}"))
}

fn load_geometry(path: &Option<PathBuf>) -> anyhow::Result<GeometryConfig> {
    match path {
        Some(p) => Ok(GeometryConfig::load(p)?),
        None => Ok(GeometryConfig::default()),
    }
}

fn emit<C: Serialize>(report: &commands::Report<C>, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(report).context("serialize report")?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("write report to {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Run {
            common,
            protocol,
            basis,
            trials,
            sigma_a,
            sigma_b,
            pairs,
            carrier,
            forced_alpha,
            forced_beta,
            jobs,
        } => {
            let basis = parse_basis(&basis)?;
            let carrier = match carrier {
                Some(s) => s
                    .parse::<CarrierChoice>()
                    .map_err(|e| anyhow::anyhow!("invalid config field `carrier`: {e}"))?,
                None => CarrierChoice::default_for(basis),
            };
            let cfg = ResolvedRunConfig {
                protocol: parse_protocol(&protocol)?,
                basis,
                seed: common.seed,
                trials,
                jobs: jobs.max(1),
                sigma_a: sigma_a
                    .parse::<PauliChoice>()
                    .map_err(|e| anyhow::anyhow!("invalid config field `sigma_a`: {e}"))?,
                sigma_b: sigma_b
                    .parse::<PauliChoice>()
                    .map_err(|e| anyhow::anyhow!("invalid config field `sigma_b`: {e}"))?,
                pairs: pairs
                    .parse::<PairsChoice>()
                    .map_err(|e| anyhow::anyhow!("invalid config field `pairs`: {e}"))?,
                carrier,
                forced: commands::forced_from_flags(
                    forced_alpha.as_deref().map(|s| parse_bell("forced_alpha", s)).transpose()?,
                    forced_beta.as_deref().map(|s| parse_bell("forced_beta", s)).transpose()?,
                ),
                geometry: load_geometry(&common.geometry)?.resolve()?,
            };
            let report = commands::cmd_run(&cfg)?;
            emit(&report, &common.out)?;
            Ok(0)
        }
        Command::VerifyTables { common, oracle_only } => {
            let quiet = common.out.is_some();
            let (summary, _) = commands::cmd_verify_tables(oracle_only, quiet);
            let ok = summary.failures.is_empty();
            if common.out.is_some() {
                let report: commands::Report<serde_json::Value> = commands::Report {
                    schema: commands::REPORT_SCHEMA,
                    config: serde_json::json!({ "oracle_only": oracle_only }),
                    results: None,
                    transcripts: None,
                    attack: None,
                    tables: Some(summary),
                };
                emit(&report, &common.out)?;
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Attack {
            common,
            strategy,
            trials,
            available,
            offset,
            desired_bit,
            target_coset,
            control,
            lambda0,
            post_op,
            at_time,
        } => {
            let cfg = ResolvedAttackConfig {
                strategy,
                seed: common.seed,
                trials,
                geometry: load_geometry(&common.geometry)?.resolve()?,
                available: available
                    .map(|s| s.split(',').map(|p| p.trim().to_string()).collect()),
                offset,
                desired_bit,
                target_coset,
                lambda0,
                post_op,
                at_time,
                control,
            };
            let report = commands::cmd_attack(&cfg)?;
            emit(&report, &common.out)?;
            Ok(0)
        }
    }
}
