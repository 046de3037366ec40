//! Exact finite algebra of single-qubit Pauli operators modulo global phase,
//! Bell-state indices, the entanglement-swapping rule and the teleportation
//! correction rule.
//!
//! A Pauli operator is stored as its (z, x) exponent pair, so composition is
//! bitwise XOR and the whole group has four elements. A Bell state is indexed
//! by a phase bit `m` and a parity bit `n`:
//!
//! ```text
//! |m n⟩ = (|0⟩|n⟩ + (−1)^m |1⟩|1⊕n⟩) / √2
//! ```
//!
//! Under this labeling, applying σ_z^z σ_x^x to one half of a Bell pair
//! shifts its index by (z, x), which is what makes the swapping and
//! teleportation rules pure XOR arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Single-qubit Pauli operator modulo global phase: σ_z^z σ_x^x.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PauliOp {
    /// σ_z exponent.
    pub z: bool,
    /// σ_x exponent.
    pub x: bool,
}

impl PauliOp {
    pub const I: PauliOp = PauliOp { z: false, x: false };
    pub const X: PauliOp = PauliOp { z: false, x: true };
    pub const Z: PauliOp = PauliOp { z: true, x: false };
    pub const ZX: PauliOp = PauliOp { z: true, x: true };

    /// All four group elements in input-code order 00, 01, 10, 11.
    pub const ALL: [PauliOp; 4] = [Self::I, Self::X, Self::Z, Self::ZX];

    pub fn new(z: bool, x: bool) -> Self {
        PauliOp { z, x }
    }

    /// Group composition (operator product with the phase discarded).
    pub fn compose(self, other: PauliOp) -> PauliOp {
        PauliOp { z: self.z ^ other.z, x: self.x ^ other.x }
    }

    /// The coset bit observable on a basis-mode carrier: `z` in Hadamard
    /// mode ({I, σx} ↦ 0, {σz, σzσx} ↦ 1), `x` in computational mode.
    pub fn coset(self, basis: BasisMode) -> bool {
        match basis {
            BasisMode::Hadamard => self.z,
            BasisMode::Computational => self.x,
        }
    }

    /// The two operators in this operator's coset for the given basis mode.
    pub fn coset_members(bit: bool, basis: BasisMode) -> [PauliOp; 2] {
        match basis {
            BasisMode::Hadamard => [PauliOp::new(bit, false), PauliOp::new(bit, true)],
            BasisMode::Computational => [PauliOp::new(false, bit), PauliOp::new(true, bit)],
        }
    }

    pub fn as_str(self) -> &'static str {
        match (self.z, self.x) {
            (false, false) => "I",
            (false, true) => "X",
            (true, false) => "Z",
            (true, true) => "ZX",
        }
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PauliOp {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "I" => Ok(PauliOp::I),
            "X" => Ok(PauliOp::X),
            "Z" => Ok(PauliOp::Z),
            "ZX" | "XZ" => Ok(PauliOp::ZX),
            _ => Err(ParseError::Pauli(s.to_string())),
        }
    }
}

impl TryFrom<String> for PauliOp {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PauliOp> for String {
    fn from(p: PauliOp) -> String {
        p.as_str().to_string()
    }
}

impl From<BellIndex> for PauliOp {
    /// The Pauli whose action on one half of |00⟩ produces this Bell state.
    fn from(b: BellIndex) -> PauliOp {
        PauliOp { z: b.m, x: b.n }
    }
}

/// Two-bit label (m, n) of a Bell state: phase bit `m`, parity bit `n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BellIndex {
    /// Phase bit.
    pub m: bool,
    /// Parity bit.
    pub n: bool,
}

impl BellIndex {
    pub const B00: BellIndex = BellIndex { m: false, n: false };
    pub const B01: BellIndex = BellIndex { m: false, n: true };
    pub const B10: BellIndex = BellIndex { m: true, n: false };
    pub const B11: BellIndex = BellIndex { m: true, n: true };

    pub const ALL: [BellIndex; 4] = [Self::B00, Self::B01, Self::B10, Self::B11];

    pub fn new(m: bool, n: bool) -> Self {
        BellIndex { m, n }
    }

    /// Bitwise XOR of two Bell indices.
    pub fn xor(self, other: BellIndex) -> BellIndex {
        BellIndex { m: self.m ^ other.m, n: self.n ^ other.n }
    }

    /// Index into 0..4 as the two-bit number `mn`.
    pub fn ordinal(self) -> usize {
        (self.m as usize) << 1 | self.n as usize
    }

    pub fn from_ordinal(k: usize) -> Self {
        BellIndex { m: k & 0b10 != 0, n: k & 0b01 != 0 }
    }
}

impl fmt::Debug for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.m as u8, self.n as u8)
    }
}

impl fmt::Display for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.m as u8, self.n as u8)
    }
}

impl FromStr for BellIndex {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "00" => Ok(BellIndex::B00),
            "01" => Ok(BellIndex::B01),
            "10" => Ok(BellIndex::B10),
            "11" => Ok(BellIndex::B11),
            _ => Err(ParseError::BellIndex(s.to_string())),
        }
    }
}

impl TryFrom<String> for BellIndex {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<BellIndex> for String {
    fn from(b: BellIndex) -> String {
        b.to_string()
    }
}

impl From<PauliOp> for BellIndex {
    fn from(p: PauliOp) -> BellIndex {
        BellIndex { m: p.z, n: p.x }
    }
}

/// Which pair of carrier states the protocol runs over, and therefore which
/// Pauli pairs are indistinguishable on the carrier.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BasisMode {
    /// Carrier |φ⟩ ∈ {|+⟩, |−⟩}; cosets {I, σx} vs {σz, σzσx}.
    #[default]
    Hadamard,
    /// Carrier |φ⟩ ∈ {|0⟩, |1⟩}; cosets {I, σz} vs {σx, σzσx}.
    Computational,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ParseError {
    #[error("unknown Pauli operator {0:?} (expected I, X, Z or ZX)")]
    Pauli(String),
    #[error("unknown Bell index {0:?} (expected 00, 01, 10 or 11)")]
    BellIndex(String),
}

/// Entanglement swapping: the Bell index of the B–B′ pair after a Bell-state
/// measurement with outcome `alice_bsm` on one qubit from each of the pairs
/// `left` and `right`.
pub fn swap_state(left: BellIndex, right: BellIndex, alice_bsm: BellIndex) -> BellIndex {
    left.xor(right).xor(alice_bsm)
}

/// Teleportation correction: the Pauli relating the receiver's qubit to the
/// teleported input, given the channel Bell index `shared` and the sender's
/// measurement outcome `bob_bsm`.
pub fn teleport_correction(shared: BellIndex, bob_bsm: BellIndex) -> PauliOp {
    PauliOp { z: shared.m ^ bob_bsm.m, x: shared.n ^ bob_bsm.n }
}

/// The coset bit carried by a Pauli on a basis-mode carrier. See
/// [`PauliOp::coset`].
pub fn coset_of(p: PauliOp, basis: BasisMode) -> bool {
    p.coset(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_identity_and_self_inverse() {
        assert_eq!(PauliOp::I.compose(PauliOp::X), PauliOp::X);
        assert_eq!(PauliOp::ZX.compose(PauliOp::ZX), PauliOp::I);
        assert_eq!(PauliOp::Z.compose(PauliOp::X), PauliOp::ZX);
        for a in PauliOp::ALL {
            assert_eq!(a.compose(a), PauliOp::I);
            for b in PauliOp::ALL {
                for c in PauliOp::ALL {
                    assert_eq!(a.compose(b).compose(c), a.compose(b.compose(c)));
                }
            }
        }
    }

    #[test]
    fn swap_state_examples() {
        // Identity pairs: the outcome labels the swapped state directly.
        assert_eq!(
            swap_state(BellIndex::B00, BellIndex::B00, BellIndex::B01),
            BellIndex::B01
        );
        // |00⟩|11⟩ with outcome 11 leaves |00⟩.
        assert_eq!(
            swap_state(BellIndex::B00, BellIndex::B11, BellIndex::B11),
            BellIndex::B00
        );
        assert_eq!(
            swap_state(BellIndex::B10, BellIndex::B10, BellIndex::B00),
            BellIndex::B00
        );
    }

    #[test]
    fn swap_state_is_bijective_in_outcome() {
        for left in BellIndex::ALL {
            for right in BellIndex::ALL {
                let mut seen = [false; 4];
                for k in BellIndex::ALL {
                    seen[swap_state(left, right, k).ordinal()] = true;
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }

    #[test]
    fn teleport_correction_examples() {
        assert_eq!(
            teleport_correction(BellIndex::B01, BellIndex::B10),
            PauliOp::ZX
        );
        assert_eq!(
            teleport_correction(BellIndex::B00, BellIndex::B00),
            PauliOp::I
        );
        assert_eq!(
            teleport_correction(BellIndex::B11, BellIndex::B11),
            PauliOp::I
        );
    }

    #[test]
    fn teleport_correction_is_bijective_in_outcome() {
        for shared in BellIndex::ALL {
            let mut seen = [false; 4];
            for b in BellIndex::ALL {
                let p = teleport_correction(shared, b);
                seen[BellIndex::from(p).ordinal()] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn coset_examples() {
        assert!(!coset_of(PauliOp::X, BasisMode::Hadamard));
        assert!(coset_of(PauliOp::ZX, BasisMode::Hadamard));
        assert!(!coset_of(PauliOp::Z, BasisMode::Computational));
        assert!(coset_of(PauliOp::X, BasisMode::Computational));
    }

    #[test]
    fn coset_members_cover_the_group() {
        for basis in [BasisMode::Hadamard, BasisMode::Computational] {
            let mut all: Vec<PauliOp> = Vec::new();
            for bit in [false, true] {
                all.extend(PauliOp::coset_members(bit, basis));
            }
            for p in PauliOp::ALL {
                assert!(all.contains(&p));
                assert!(PauliOp::coset_members(p.coset(basis), basis).contains(&p));
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for p in PauliOp::ALL {
            assert_eq!(p.as_str().parse::<PauliOp>().unwrap(), p);
        }
        for b in BellIndex::ALL {
            assert_eq!(b.to_string().parse::<BellIndex>().unwrap(), b);
        }
        assert!("Y".parse::<PauliOp>().is_err());
        assert!("2".parse::<BellIndex>().is_err());
    }
}
