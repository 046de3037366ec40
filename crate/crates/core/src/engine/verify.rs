//! Standalone verification predicates: each party's verdict recomputed from
//! its own view of a finished transcript.
//!
//! The runner applies the same checks inline while a run executes; these
//! functions re-derive the verdicts from the logged events alone, which is
//! what makes transcripts auditable after the fact.

use crate::pauli::{swap_state, teleport_correction, BasisMode, BellIndex, PauliOp};

use super::{AbortInfo, CheckKind, Event, Party, Transcript, Verdict};

fn announced(events: &[&Event], actor: &str) -> Option<BellIndex> {
    events
        .iter()
        .find(|e| e.actor == actor && e.action == "announce")
        .and_then(|e| e.data.get("bell"))
        .and_then(|v| v.as_str())
        .and_then(|s| s.parse().ok())
}

fn measured(events: &[&Event], action: &str) -> Option<bool> {
    events
        .iter()
        .find(|e| e.action == action)
        .and_then(|e| e.data.get("outcome"))
        .and_then(|v| v.as_u64())
        .map(|o| o != 0)
}

fn flag(e: &Event, key: &str) -> Option<bool> {
    e.data.get(key).and_then(|v| v.as_bool())
}

fn verdict_from(failures: Vec<AbortInfo>) -> Verdict {
    failures
        .into_iter()
        .min_by(|a, b| a.t.total_cmp(&b.t))
        .map(Verdict::Abort)
        .unwrap_or(Verdict::Accept)
}

/// The mode-basis outcome an honest reveal must produce, from the data Bob
/// holds (the public pairs and announcements, his own input, the claimed
/// coset). Both members of the claimed coset imply the same outcome.
pub fn expected_reveal_outcome(
    inputs: &ProtocolInputs,
    alpha: BellIndex,
    beta: BellIndex,
    claim_coset: bool,
) -> bool {
    let mode = inputs.basis;
    let outcomes: Vec<bool> = PauliOp::coset_members(claim_coset, mode)
        .iter()
        .map(|cand| {
            let swapped =
                swap_state(inputs.left.xor(BellIndex::from(*cand)), inputs.right, alpha);
            let sigma_i = teleport_correction(swapped, beta);
            inputs.carrier ^ cand.compose(sigma_i).compose(inputs.sigma_b).coset(mode)
        })
        .collect();
    debug_assert_eq!(outcomes[0], outcomes[1]);
    outcomes[0]
}

/// Alice's verdict on Bob's side, recomputed from her view: light-like
/// arrival of everything she received, and consistency of the forwarded
/// state with the announced outcomes through the swapping and correction
/// rules.
pub fn verify_bob(t: &Transcript) -> Verdict {
    let view = t.party_events(Party::Alice);
    let mut failures = Vec::new();
    for e in &view {
        if matches!(e.action.as_str(), "deliver_psi" | "deliver_data_state") {
            if flag(e, "within_window") == Some(false) {
                failures.push(AbortInfo {
                    check: CheckKind::Timing,
                    by: Party::Alice,
                    t: e.t,
                    detail: format!("{} arrival not light-like from its claim", e.action),
                });
            }
        }
    }
    let m_psi = measured(&view, "measure_psi");
    let m_data = measured(&view, "measure_data_state");
    if let (Some(mp), Some(md)) = (m_psi, m_data) {
        let inputs = &t.config.inputs;
        let (alpha, beta) = match (announced(&view, "alice"), announced(&view, "bob")) {
            (Some(a), Some(b)) => (a, b),
            _ => return verdict_from(failures),
        };
        let swapped =
            swap_state(inputs.left.xor(BellIndex::from(inputs.sigma_a)), inputs.right, alpha);
        let sigma_i = teleport_correction(swapped, beta);
        let t_check = view
            .iter()
            .filter(|e| e.action.starts_with("measure_"))
            .map(|e| e.t)
            .fold(f64::NEG_INFINITY, f64::max);
        if mp != (md ^ sigma_i.coset(inputs.basis)) {
            failures.push(AbortInfo {
                check: CheckKind::Correlation,
                by: Party::Alice,
                t: t_check,
                detail: "forwarded state inconsistent with announced outcomes".into(),
            });
        }
    }
    verdict_from(failures)
}

/// Bob's verdict on Alice's side, recomputed from his view: the reveal's
/// schedule and light-like arrival, and the reveal state matching some
/// input in the claimed coset. `None` when no reveal ever reached his side.
pub fn verify_alice(t: &Transcript) -> Option<Verdict> {
    let view = t.party_events(Party::Bob);
    let deliver = view.iter().find(|e| e.action == "deliver_reveal")?;
    let mut failures = Vec::new();
    if flag(deliver, "within_window") == Some(false) {
        failures.push(AbortInfo {
            check: CheckKind::Timing,
            by: Party::Bob,
            t: deliver.t,
            detail: "reveal arrival inconsistent with claimed emission position".into(),
        });
    }
    if flag(deliver, "on_schedule") == Some(false) {
        failures.push(AbortInfo {
            check: CheckKind::Timing,
            by: Party::Bob,
            t: deliver.t,
            detail: "reveal emitted off schedule".into(),
        });
    }
    let m_reveal = measured(&view, "measure_reveal")?;
    let claim = deliver.data.get("claim_coset").and_then(|v| v.as_u64())? != 0;
    let (alpha, beta) = match (announced(&view, "alice"), announced(&view, "bob")) {
        (Some(a), Some(b)) => (a, b),
        _ => return Some(verdict_from(failures)),
    };
    let inputs = &t.config.inputs;
    let expected = expected_reveal_outcome(
        inputs.left,
        inputs.right,
        alpha,
        beta,
        claim,
        inputs.sigma_b,
        inputs.basis,
        inputs.carrier,
    );
    if m_reveal != expected {
        failures.push(AbortInfo {
            check: CheckKind::Correlation,
            by: Party::Bob,
            t: deliver.t,
            detail: "reveal state matches no input in the claimed coset".into(),
        });
    }
    Some(verdict_from(failures))
}
