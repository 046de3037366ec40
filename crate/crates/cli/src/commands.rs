//! The three commands: protocol runs, table conformance, attack batches.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use relqc::adversary::{self, AttackReport};
use relqc::engine::{
    self, CoinValue, Deviations, ForcedOutcomes, Protocol, ProtocolInputs, Transcript, Verdict,
};
use relqc::pauli::{BellIndex, PauliOp};
use relqc::tables::{verify_all, EntryResult, VerifyPath};

use crate::config::{
    build_strategy, PairsChoice, PauliChoice, ResolvedAttackConfig, ResolvedRunConfig,
};

pub const REPORT_SCHEMA: &str = "report/v1";

/// Aggregate counters over a batch of runs.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunResults {
    pub accepted: u64,
    pub aborted: u64,
    pub abort_reasons: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coin_frequencies: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commitment_bits: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alice_learned_cosets: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_i_frequencies: Option<BTreeMap<String, u64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableSummary {
    pub checked: usize,
    pub passed: usize,
    pub failures: Vec<String>,
    pub oracle_only: bool,
}

/// Top-level report document (`report/v1`).
#[derive(Debug, Serialize)]
pub struct Report<C: Serialize> {
    pub schema: &'static str,
    pub config: C,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<RunResults>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcripts: Option<Vec<Transcript>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables: Option<TableSummary>,
}

fn draw_inputs<R: Rng>(cfg: &ResolvedRunConfig, rng: &mut R) -> anyhow::Result<ProtocolInputs> {
    let sigma_a = match cfg.sigma_a {
        PauliChoice::Fixed(p) => p,
        PauliChoice::Random => PauliOp::ALL[rng.gen_range(0..4)],
    };
    let sigma_b = match cfg.sigma_b {
        PauliChoice::Fixed(p) => p,
        PauliChoice::Random => PauliOp::ALL[rng.gen_range(0..4)],
    };
    let (left, right) = match cfg.pairs {
        PairsChoice::Fixed(l, r) => (l, r),
        PairsChoice::Random => (
            BellIndex::ALL[rng.gen_range(0..4)],
            BellIndex::ALL[rng.gen_range(0..4)],
        ),
    };
    Ok(ProtocolInputs {
        sigma_a,
        sigma_b,
        left,
        right,
        basis: cfg.basis,
        carrier: cfg.carrier.bit(cfg.basis)?,
    })
}

fn run_one_trial(cfg: &ResolvedRunConfig, trial: u64) -> anyhow::Result<Transcript> {
    let mut rng = adversary::trial_rng(cfg.seed, trial);
    let inputs = draw_inputs(cfg, &mut rng)?;
    let mut spec = engine::RunSpec::new(cfg.protocol, inputs, &cfg.geometry)
        .forced(cfg.forced);
    spec.seed = Some(cfg.seed);
    spec.trial = Some(trial);
    Ok(engine::run(&spec, &Deviations::honest(), &mut rng)?)
}

/// Execute the trial batch (optionally across threads) and aggregate.
pub fn cmd_run(cfg: &ResolvedRunConfig) -> anyhow::Result<Report<ResolvedRunConfig>> {
    let trials: Vec<u64> = (0..cfg.trials).collect();
    let transcripts: Vec<Transcript> = if cfg.jobs <= 1 {
        trials.iter().map(|&t| run_one_trial(cfg, t)).collect::<anyhow::Result<_>>()?
    } else {
        let chunk = trials.len().div_ceil(cfg.jobs).max(1);
        let mut slots: Vec<anyhow::Result<Vec<Transcript>>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = trials
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        part.iter().map(|&t| run_one_trial(cfg, t)).collect::<anyhow::Result<Vec<_>>>()
                    })
                })
                .collect();
            for h in handles {
                slots.push(h.join().expect("worker panicked"));
            }
        });
        let mut all = Vec::with_capacity(trials.len());
        for slot in slots {
            all.extend(slot?);
        }
        all
    };

    let mut results = RunResults::default();
    let mut coin: BTreeMap<String, u64> = BTreeMap::new();
    let mut bits: BTreeMap<String, u64> = BTreeMap::new();
    let mut cosets: BTreeMap<String, u64> = BTreeMap::new();
    let mut sigma_i: BTreeMap<String, u64> = BTreeMap::new();
    for t in &transcripts {
        match &t.verdict {
            Verdict::Accept => results.accepted += 1,
            Verdict::Abort(info) => {
                results.aborted += 1;
                let key = format!("{:?}/{}", info.check, info.detail);
                *results.abort_reasons.entry(key).or_default() += 1;
            }
        }
        if let Some(c) = t.outputs.coin {
            let key = match c {
                CoinValue::Plus => "+",
                CoinValue::Minus => "-",
                CoinValue::Invalid => "invalid",
            };
            *coin.entry(key.to_string()).or_default() += 1;
        }
        if let Some(b) = t.outputs.commitment_bit {
            *bits.entry(b.to_string()).or_default() += 1;
        }
        if let Some(c) = t.outputs.alice_learned_coset {
            *cosets.entry(c.to_string()).or_default() += 1;
        }
        if let Some(s) = t.outputs.sigma_i {
            *sigma_i.entry(s.to_string()).or_default() += 1;
        }
    }
    match cfg.protocol {
        Protocol::Coin => results.coin_frequencies = Some(coin),
        Protocol::Bc => results.commitment_bits = Some(bits),
        Protocol::Ot => results.alice_learned_cosets = Some(cosets),
        Protocol::Core => results.sigma_i_frequencies = Some(sigma_i),
        Protocol::Tpsc => {}
    }

    Ok(Report {
        schema: REPORT_SCHEMA,
        config: cfg.clone(),
        results: Some(results),
        transcripts: (cfg.trials == 1).then_some(transcripts),
        attack: None,
        tables: None,
    })
}

/// Check all 80 fixtures, printing one line per entry; the summary report
/// carries the failures.
pub fn cmd_verify_tables(oracle_only: bool, quiet: bool) -> (TableSummary, Vec<EntryResult>) {
    let path = if oracle_only { VerifyPath::OracleOnly } else { VerifyPath::Both };
    let results = verify_all(path);
    let mut failures = Vec::new();
    for r in &results {
        if r.pass {
            if !quiet {
                println!("PASS {}", r.label);
            }
        } else {
            if !quiet {
                println!("FAIL {} ({})", r.label, r.detail);
            }
            failures.push(format!("{} ({})", r.label, r.detail));
        }
    }
    let summary = TableSummary {
        checked: results.len(),
        passed: results.len() - failures.len(),
        failures,
        oracle_only,
    };
    if !quiet {
        println!("{}/{} entries pass", summary.passed, summary.checked);
    }
    (summary, results)
}

/// Run an attack strategy batch.
pub fn cmd_attack(cfg: &ResolvedAttackConfig) -> anyhow::Result<Report<ResolvedAttackConfig>> {
    let strategy = build_strategy(cfg)?;
    let report = adversary::run_strategy(&strategy, &cfg.geometry, cfg.trials, cfg.seed)?;
    Ok(Report {
        schema: REPORT_SCHEMA,
        config: cfg.clone(),
        results: None,
        transcripts: None,
        attack: Some(report),
        tables: None,
    })
}

/// Forced-outcome core run used by the `run --protocol core` examples.
pub fn forced_from_flags(
    alpha: Option<BellIndex>,
    beta: Option<BellIndex>,
) -> ForcedOutcomes {
    ForcedOutcomes { alpha, beta }
}
