//! Hand-encoded swapping and correction tables, with conformance checks.
//!
//! The fixtures below transcribe the full 64-entry entanglement-swapping
//! table and the 16-entry teleportation-correction table as printed, row by
//! row. They are deliberately data, not formulas: the XOR closed forms in
//! [`crate::pauli`] are validated against them entry by entry, and the
//! state-vector oracle provides a second, independent verification path
//! that never consults the closed forms.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::oracle::{bell_amplitude, OracleError, StateVector};
use crate::pauli::{swap_state, teleport_correction, BellIndex, PauliOp};
use crate::Real;

type Sv = StateVector<Real>;

/// One entanglement-swapping entry: initial pairs, the swap measurement
/// outcome, and the resulting Bell index of the leftover pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapEntry {
    pub left: BellIndex,
    pub right: BellIndex,
    pub outcome: BellIndex,
    pub result: BellIndex,
}

/// One teleportation entry: the channel Bell index, the sender's outcome,
/// and the correction Pauli left on the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrectionEntry {
    pub shared: BellIndex,
    pub outcome: BellIndex,
    pub correction: PauliOp,
}

/// Four (value, value) columns of one printed table row.
type RowCells = [(u8, u8); 4];

/// Swapping table rows as printed: four initial-pair columns share one
/// outcome→result mapping per row.
const SWAP_ROWS: [(RowCells, RowCells); 4] = [
    (
        [(0b00, 0b00), (0b01, 0b01), (0b10, 0b10), (0b11, 0b11)],
        [(0b00, 0b00), (0b01, 0b01), (0b10, 0b10), (0b11, 0b11)],
    ),
    (
        [(0b00, 0b01), (0b01, 0b00), (0b10, 0b11), (0b11, 0b10)],
        [(0b00, 0b01), (0b01, 0b00), (0b10, 0b11), (0b11, 0b10)],
    ),
    (
        [(0b00, 0b10), (0b01, 0b11), (0b10, 0b00), (0b11, 0b01)],
        [(0b00, 0b10), (0b01, 0b11), (0b10, 0b00), (0b11, 0b01)],
    ),
    (
        [(0b00, 0b11), (0b01, 0b10), (0b10, 0b01), (0b11, 0b00)],
        [(0b00, 0b11), (0b01, 0b10), (0b10, 0b01), (0b11, 0b00)],
    ),
];

/// Correction table rows as printed: per channel Bell index, the corrections
/// for sender outcomes 00, 01, 10, 11.
const CORRECTION_ROWS: [(u8, [PauliOp; 4]); 4] = [
    (0b00, [PauliOp::I, PauliOp::X, PauliOp::Z, PauliOp::ZX]),
    (0b01, [PauliOp::X, PauliOp::I, PauliOp::ZX, PauliOp::Z]),
    (0b10, [PauliOp::Z, PauliOp::ZX, PauliOp::I, PauliOp::X]),
    (0b11, [PauliOp::ZX, PauliOp::Z, PauliOp::X, PauliOp::I]),
];

/// All 64 swapping entries.
pub fn swap_fixtures() -> Vec<SwapEntry> {
    let mut out = Vec::with_capacity(64);
    for (pairs, mapping) in SWAP_ROWS {
        for (l, r) in pairs {
            for (k, res) in mapping {
                out.push(SwapEntry {
                    left: BellIndex::from_ordinal(l as usize),
                    right: BellIndex::from_ordinal(r as usize),
                    outcome: BellIndex::from_ordinal(k as usize),
                    result: BellIndex::from_ordinal(res as usize),
                });
            }
        }
    }
    out
}

/// All 16 correction entries.
pub fn correction_fixtures() -> Vec<CorrectionEntry> {
    let mut out = Vec::with_capacity(16);
    for (shared, corrections) in CORRECTION_ROWS {
        for (k, correction) in corrections.into_iter().enumerate() {
            out.push(CorrectionEntry {
                shared: BellIndex::from_ordinal(shared as usize),
                outcome: BellIndex::from_ordinal(k),
                correction,
            });
        }
    }
    out
}

/// Verification result for one table entry.
#[derive(Debug, Clone)]
pub struct EntryResult {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

/// Which verification paths to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyPath {
    Both,
    OracleOnly,
}

/// 4-qubit state with Bell state `k` on qubits (0, 2) and `j` on (1, 3).
fn pairs_state(k: BellIndex, j: BellIndex) -> Sv {
    let mut amps = vec![Complex::new(0.0, 0.0); 16];
    for (idx, amp) in amps.iter_mut().enumerate() {
        let bit = |q: usize| (idx >> (3 - q)) & 1 == 1;
        *amp = bell_amplitude::<Real>(k, bit(0), bit(2)) * bell_amplitude::<Real>(j, bit(1), bit(3));
    }
    Sv::from_amplitudes(amps, 4)
}

/// Run the swapped chain in the oracle and identify the leftover pair's Bell
/// index by fidelity enumeration. Also returns the branch probability.
pub fn oracle_swap_result(
    left: BellIndex,
    right: BellIndex,
    outcome: BellIndex,
) -> Result<(BellIndex, Real), OracleError> {
    // Qubits: A = 0, B = 1, A' = 2, B' = 3.
    let chain = Sv::bell(left).tensor(&Sv::bell(right));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let rec = chain.bell_measure(0, 2, &mut rng, Some(outcome))?;
    for j in BellIndex::ALL {
        let fid = rec.post_state.fidelity(&pairs_state(outcome, j))?;
        if (fid - 1.0).abs() <= 1e-9 {
            return Ok((j, rec.probability));
        }
    }
    Err(OracleError::NotSeparable { qubit: 1 })
}

/// A probe state whose four Pauli images are pairwise distinguishable.
fn probe() -> Sv {
    let theta: Real = 0.35;
    let phase: Real = 0.55;
    Sv::single([
        Complex::new(theta.cos(), 0.0),
        Complex::new(theta.sin() * phase.cos(), theta.sin() * phase.sin()),
    ])
}

/// Teleport a probe through the shared channel in the oracle and identify
/// the correction Pauli by fidelity enumeration.
pub fn oracle_correction_result(
    shared: BellIndex,
    outcome: BellIndex,
) -> Result<(PauliOp, Real), OracleError> {
    // Qubits: source = 0, channel = (1, 2).
    let chi = probe();
    let chain = chi.tensor(&Sv::bell(shared));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (rec, post) = chain.teleport(0, (1, 2), &mut rng, Some(outcome))?;
    let received = Sv::single(post.extract_qubit(2)?);
    for p in PauliOp::ALL {
        let mut expected = chi.clone();
        expected.apply_pauli(0, p)?;
        if (received.fidelity(&expected)? - 1.0).abs() <= 1e-9 {
            return Ok((p, rec.probability));
        }
    }
    Err(OracleError::NotSeparable { qubit: 2 })
}

/// Check one swapping entry against the requested paths.
pub fn verify_swap_entry(entry: &SwapEntry, path: VerifyPath) -> EntryResult {
    let label = format!(
        "swap |{}⟩|{}⟩ outcome {} -> |{}⟩",
        entry.left, entry.right, entry.outcome, entry.result
    );
    if path == VerifyPath::Both {
        let closed = swap_state(entry.left, entry.right, entry.outcome);
        if closed != entry.result {
            return EntryResult {
                label,
                pass: false,
                detail: format!("closed form gives {closed}"),
            };
        }
    }
    match oracle_swap_result(entry.left, entry.right, entry.outcome) {
        Ok((got, prob)) => {
            if got != entry.result {
                EntryResult { label, pass: false, detail: format!("oracle gives {got}") }
            } else if (prob - 0.25).abs() > 1e-9 {
                EntryResult { label, pass: false, detail: format!("branch probability {prob}") }
            } else {
                EntryResult { label, pass: true, detail: String::new() }
            }
        }
        Err(e) => EntryResult { label, pass: false, detail: format!("oracle error: {e}") },
    }
}

/// Check one correction entry against the requested paths.
pub fn verify_correction_entry(entry: &CorrectionEntry, path: VerifyPath) -> EntryResult {
    let label = format!(
        "teleport |{}⟩ outcome {} -> {}",
        entry.shared, entry.outcome, entry.correction
    );
    if path == VerifyPath::Both {
        let closed = teleport_correction(entry.shared, entry.outcome);
        if closed != entry.correction {
            return EntryResult {
                label,
                pass: false,
                detail: format!("closed form gives {closed}"),
            };
        }
    }
    match oracle_correction_result(entry.shared, entry.outcome) {
        Ok((got, prob)) => {
            if got != entry.correction {
                EntryResult { label, pass: false, detail: format!("oracle gives {got}") }
            } else if (prob - 0.25).abs() > 1e-9 {
                EntryResult { label, pass: false, detail: format!("branch probability {prob}") }
            } else {
                EntryResult { label, pass: true, detail: String::new() }
            }
        }
        Err(e) => EntryResult { label, pass: false, detail: format!("oracle error: {e}") },
    }
}

/// Verify every fixture of both tables; 80 results in fixture order.
pub fn verify_all(path: VerifyPath) -> Vec<EntryResult> {
    let mut results: Vec<EntryResult> = swap_fixtures()
        .iter()
        .map(|e| verify_swap_entry(e, path))
        .collect();
    results.extend(correction_fixtures().iter().map(|e| verify_correction_entry(e, path)));
    results
}
