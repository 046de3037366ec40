//! Conformance of the XOR closed forms and the state-vector oracle against
//! the hand-encoded swapping and correction fixtures: 80 entries, exact Bell
//! indices, branch probabilities 1/4 to 1e-9.

use relqc::pauli::{BellIndex, PauliOp};
use relqc::tables::{
    correction_fixtures, swap_fixtures, verify_all, verify_correction_entry, verify_swap_entry,
    CorrectionEntry, SwapEntry, VerifyPath,
};

#[test]
fn fixture_counts() {
    assert_eq!(swap_fixtures().len(), 64);
    assert_eq!(correction_fixtures().len(), 16);
}

#[test]
fn all_80_entries_pass_both_paths() {
    let results = verify_all(VerifyPath::Both);
    assert_eq!(results.len(), 80);
    let failures: Vec<_> = results.iter().filter(|r| !r.pass).collect();
    assert!(failures.is_empty(), "failures: {failures:?}");
}

#[test]
fn all_80_entries_pass_oracle_only() {
    let results = verify_all(VerifyPath::OracleOnly);
    assert!(results.iter().all(|r| r.pass));
}

#[test]
fn corrupted_swap_fixture_is_named() {
    let bad = SwapEntry {
        left: BellIndex::B00,
        right: BellIndex::B00,
        outcome: BellIndex::B01,
        result: BellIndex::B10, // table says 01
    };
    let r = verify_swap_entry(&bad, VerifyPath::Both);
    assert!(!r.pass);
    assert!(r.label.contains("swap |00⟩|00⟩ outcome 01"));
}

#[test]
fn corrupted_correction_fixture_is_named() {
    let bad = CorrectionEntry {
        shared: BellIndex::B01,
        outcome: BellIndex::B10,
        correction: PauliOp::X, // table says ZX
    };
    let r = verify_correction_entry(&bad, VerifyPath::Both);
    assert!(!r.pass);
    assert!(r.label.contains("teleport |01⟩ outcome 10"));
}

#[test]
fn spot_checks_from_the_printed_tables() {
    // |00⟩|00⟩ with outcome 01 swaps to |01⟩.
    assert!(swap_fixtures().contains(&SwapEntry {
        left: BellIndex::B00,
        right: BellIndex::B00,
        outcome: BellIndex::B01,
        result: BellIndex::B01,
    }));
    // |00⟩|11⟩ maps outcomes 00, 01, 10, 11 to |11⟩, |10⟩, |01⟩, |00⟩.
    for (k, res) in [
        (BellIndex::B00, BellIndex::B11),
        (BellIndex::B01, BellIndex::B10),
        (BellIndex::B10, BellIndex::B01),
        (BellIndex::B11, BellIndex::B00),
    ] {
        assert!(swap_fixtures().contains(&SwapEntry {
            left: BellIndex::B00,
            right: BellIndex::B11,
            outcome: k,
            result: res,
        }));
    }
    // Channel |01⟩ with outcome 10 leaves σzσx.
    assert!(correction_fixtures().contains(&CorrectionEntry {
        shared: BellIndex::B01,
        outcome: BellIndex::B10,
        correction: PauliOp::ZX,
    }));
}
