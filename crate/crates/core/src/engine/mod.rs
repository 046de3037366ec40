//! Agents, message schedule, transcripts and the four protocol runners.
//!
//! Every run walks the same skeleton: at t0 Alice applies her input Pauli to
//! her half of the left pair and Bell-measures her two halves (entanglement
//! swapping), announcing the outcome; simultaneously Bob applies his input to
//! the carrier and teleports it through the left pair's other half,
//! announcing his outcome, while his agent B′ forwards its (now encoded)
//! qubit to Alice. At t0 + d Alice applies her input to the forwarded qubit
//! and sends the result, together with her revealed input coset, toward one
//! of Bob's drop sites. Both sides verify non-local correlations and strict
//! light-like timing; the verdict and per-protocol outputs land in a
//! [`Transcript`].
//!
//! Quantum steps run in the state-vector oracle and are simultaneously
//! tracked by Pauli-frame bookkeeping; the two must agree on every honest
//! run or the runner reports an internal error.

mod runner;
pub mod verify;

pub use runner::{run, RunSpec};
pub use verify::{verify_alice, verify_bob};

use rand::Rng;

use serde::{Deserialize, Serialize};

use crate::oracle::QubitAmps;
use crate::pauli::{BasisMode, BellIndex, PauliOp};
use crate::spacetime::{Geometry, SpacetimeEvent};
use crate::Real;

#[derive(Debug, Clone, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Oracle(#[from] crate::oracle::OracleError),
    #[error(transparent)]
    Geometry(#[from] crate::spacetime::GeometryError),
    #[error("Pauli frame and oracle disagree at {stage} (fidelity {fidelity})")]
    FrameOracleMismatch { stage: &'static str, fidelity: f64 },
    #[error("invalid run configuration: {0}")]
    Config(String),
}

/// Communicating party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

/// Agent role within a party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Principal,
    AprimeVerifier,
    A1,
    A2,
    Bprime,
    B1,
    B2,
    ColocatedBobAgent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentId {
    pub party: Party,
    pub role: Role,
}

impl AgentId {
    pub const ALICE: AgentId = AgentId { party: Party::Alice, role: Role::Principal };
    pub const BOB: AgentId = AgentId { party: Party::Bob, role: Role::Principal };
    pub const BPRIME: AgentId = AgentId { party: Party::Bob, role: Role::Bprime };

    pub fn a_site(i: usize) -> AgentId {
        AgentId { party: Party::Alice, role: if i == 0 { Role::A1 } else { Role::A2 } }
    }

    pub fn b_site(i: usize) -> AgentId {
        AgentId { party: Party::Bob, role: if i == 0 { Role::B1 } else { Role::B2 } }
    }

    pub fn label(&self) -> &'static str {
        match (self.party, self.role) {
            (Party::Alice, Role::Principal) => "alice",
            (Party::Alice, Role::AprimeVerifier) => "aprime",
            (Party::Alice, Role::A1) => "a1",
            (Party::Alice, Role::A2) => "a2",
            (Party::Bob, Role::Principal) => "bob",
            (Party::Bob, Role::Bprime) => "bprime",
            (Party::Bob, Role::B1) => "b1",
            (Party::Bob, Role::B2) => "b2",
            (Party::Bob, Role::ColocatedBobAgent) => "bob_colocated",
            _ => "agent",
        }
    }

    /// Deterministic tie-break rank: Alice's agents before Bob's, roles in
    /// declaration order.
    pub fn rank(&self) -> u8 {
        let party = match self.party {
            Party::Alice => 0,
            Party::Bob => 8,
        };
        let role = match self.role {
            Role::Principal => 0,
            Role::AprimeVerifier => 1,
            Role::A1 => 2,
            Role::A2 => 3,
            Role::Bprime => 4,
            Role::B1 => 5,
            Role::B2 => 6,
            Role::ColocatedBobAgent => 7,
        };
        party + role
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    ClassicalAnnouncement,
    QuantumState,
}

/// Transmission metadata embedded in transcript events.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Message {
    pub kind: MessageKind,
    pub emitted: SpacetimeEvent<Real>,
    pub from: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bell: Option<BellIndex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim_coset: Option<u8>,
}

/// Who can see a transcript event when reconstructing a party's view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Visibility {
    #[default]
    Public,
    AliceOnly,
    BobOnly,
}

/// One entry of the time-ordered run record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Event {
    pub t: Real,
    pub actor: String,
    pub action: String,
    pub data: serde_json::Value,
    #[serde(skip, default)]
    pub visibility: Visibility,
    #[serde(skip, default)]
    pub rank: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Timing,
    Correlation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbortInfo {
    pub check: CheckKind,
    pub by: Party,
    pub t: Real,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Abort(AbortInfo),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Coin-toss value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoinValue {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "invalid")]
    Invalid,
}

/// Per-protocol outputs: what each side can compute at the end of the run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    /// Teleportation encoding derived on Alice's side (public after reveal).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_i: Option<PauliOp>,
    /// Coset of Bob's input as measured by Alice (oblivious transfer output).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alice_learned_coset: Option<u8>,
    /// Position of the Alice-side agent that received Bob's data state.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alice_transfer_position: Option<Real>,
    /// Coset accepted by Bob's side from Alice's reveal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bob_accepted_coset: Option<u8>,
    /// Joint computation outcome state digest on Alice's side.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_digest_alice: Option<String>,
    /// Joint computation outcome state digest on Bob's side.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_digest_bob: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coin: Option<CoinValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commitment_bit: Option<u8>,
    /// Bob's coset guess in attack runs that replace his verification.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bob_guess: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    /// The bare framework skeleton (runs like OT, reports the encoding).
    Core,
    /// Oblivious transfer of Bob's input coset to Alice.
    Ot,
    /// Two-sided two-party secure computation of the joint outcome state.
    Tpsc,
    /// Coin toss from the XOR of both input cosets.
    Coin,
    /// Bit commitment of Alice's input coset.
    Bc,
}

impl Protocol {
    pub fn sends_data_state(self) -> bool {
        !matches!(self, Protocol::Bc)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Core => "core",
            Protocol::Ot => "ot",
            Protocol::Tpsc => "tpsc",
            Protocol::Coin => "coin",
            Protocol::Bc => "bc",
        }
    }
}

/// The inputs both parties feed into the shared system, plus the publicly
/// known initial pairs and carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolInputs {
    pub sigma_a: PauliOp,
    pub sigma_b: PauliOp,
    /// Initial Bell index of the pair shared between Alice and Bob.
    pub left: BellIndex,
    /// Initial Bell index of the pair shared between Alice and B′.
    pub right: BellIndex,
    pub basis: BasisMode,
    /// Carrier selector: 0 ↦ |+⟩ / |0⟩, 1 ↦ |−⟩ / |1⟩ per basis mode.
    pub carrier: bool,
}

impl ProtocolInputs {
    pub fn honest_default() -> Self {
        ProtocolInputs {
            sigma_a: PauliOp::I,
            sigma_b: PauliOp::I,
            left: BellIndex::B00,
            right: BellIndex::B00,
            basis: BasisMode::Hadamard,
            carrier: false,
        }
    }
}

/// Optional forced Bell-measurement outcomes, for exhaustive branch
/// enumeration instead of sampling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ForcedOutcomes {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<BellIndex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<BellIndex>,
}

/// Mayers–Lo–Chau delay plan: Alice skips her swap measurement, announces a
/// fabricated outcome, and teleports an arbitrary state to B′ instead.
#[derive(Debug, Clone)]
pub struct MlcPlan {
    pub fabricated_alpha: BellIndex,
    pub phi_prime: QubitAmps<Real>,
}

impl MlcPlan {
    pub fn new(fabricated_alpha: BellIndex) -> Self {
        // Any non-degenerate single-qubit state works for the decoy.
        let theta: Real = 0.6;
        MlcPlan {
            fabricated_alpha,
            phi_prime: [
                num_complex::Complex::new(theta.cos(), 0.0),
                num_complex::Complex::new(theta.sin(), 0.0),
            ],
        }
    }
}

/// What B′ forwards in place of its honest qubit.
#[derive(Debug, Clone)]
pub enum Substitution {
    /// A fresh computational-basis state |bit⟩ (wrong-basis attack).
    Computational { bit: bool },
    /// An entangled pair λ0|00⟩ + λ1|11⟩; the first qubit is forwarded, the
    /// second stays with B′ and optionally receives a Pauli after Bob's
    /// announcements.
    Entangled { lambda0: Real, post_op: Option<PauliOp> },
}

/// Per-run deviations from the honest script. `Deviations::default()` is the
/// honest run; every attack strategy overrides exactly the behaviors it
/// names.
#[derive(Debug, Clone, Default)]
pub struct Deviations {
    /// Alice reveals with this Pauli instead of her committed input.
    pub alice_reveal_override: Option<PauliOp>,
    /// Alice's reveal is emitted from x_a + offset while claiming x_a.
    pub alice_position_offset: Option<Real>,
    pub alice_mlc: Option<MlcPlan>,
    pub bprime_substitution: Option<Substitution>,
    /// B′ applies this extra Pauli before forwarding.
    pub bprime_extra_pauli: Option<PauliOp>,
    /// B′ emits its forward this much after t0 while claiming t0.
    pub bprime_delay: Option<Real>,
    /// Bob skips verification and guesses Alice's coset from a
    /// computational-basis measurement of the reveal qubit.
    pub bob_computational_guess: bool,
}

impl Deviations {
    pub fn honest() -> Self {
        Deviations::default()
    }

    pub fn is_honest(&self) -> bool {
        self.alice_reveal_override.is_none()
            && self.alice_position_offset.is_none()
            && self.alice_mlc.is_none()
            && self.bprime_substitution.is_none()
            && self.bprime_extra_pauli.is_none()
            && self.bprime_delay.is_none()
            && !self.bob_computational_guess
    }
}

/// Full configuration snapshot embedded in every transcript.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub protocol: Protocol,
    pub inputs: ProtocolInputs,
    pub geometry: Geometry<Real>,
    pub forced: ForcedOutcomes,
    pub position_attested: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
}

/// Time-ordered record of one protocol run: every announcement, state
/// transmission, measurement and verdict, from which both parties' verdicts
/// are recomputable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Transcript {
    pub schema: String,
    pub config: ConfigSnapshot,
    pub events: Vec<Event>,
    pub verdict: Verdict,
    pub outputs: Outputs,
}

pub const TRANSCRIPT_SCHEMA: &str = "transcript/v1";

/// Run the bare framework skeleton.
pub fn run_core<R: Rng>(
    inputs: ProtocolInputs,
    geometry: &Geometry<Real>,
    forced: ForcedOutcomes,
    rng: &mut R,
) -> Result<Transcript, EngineError> {
    run(&RunSpec::new(Protocol::Core, inputs, geometry).forced(forced), &Deviations::honest(), rng)
}

/// Run honest oblivious transfer.
pub fn run_ot<R: Rng>(
    inputs: ProtocolInputs,
    geometry: &Geometry<Real>,
    rng: &mut R,
) -> Result<Transcript, EngineError> {
    run(&RunSpec::new(Protocol::Ot, inputs, geometry), &Deviations::honest(), rng)
}

/// Run honest two-sided two-party secure computation.
pub fn run_tpsc<R: Rng>(
    inputs: ProtocolInputs,
    geometry: &Geometry<Real>,
    rng: &mut R,
) -> Result<Transcript, EngineError> {
    run(&RunSpec::new(Protocol::Tpsc, inputs, geometry), &Deviations::honest(), rng)
}

/// Run an honest coin toss.
pub fn run_coin_toss<R: Rng>(
    inputs: ProtocolInputs,
    geometry: &Geometry<Real>,
    rng: &mut R,
) -> Result<Transcript, EngineError> {
    run(&RunSpec::new(Protocol::Coin, inputs, geometry), &Deviations::honest(), rng)
}

/// Run honest bit commitment.
pub fn run_bit_commitment<R: Rng>(
    inputs: ProtocolInputs,
    geometry: &Geometry<Real>,
    rng: &mut R,
) -> Result<Transcript, EngineError> {
    run(&RunSpec::new(Protocol::Bc, inputs, geometry), &Deviations::honest(), rng)
}

impl Transcript {
    /// The events one party can see: public events plus its own.
    pub fn party_events(&self, party: Party) -> Vec<&Event> {
        self.events
            .iter()
            .filter(|e| match e.visibility {
                Visibility::Public => true,
                Visibility::AliceOnly => party == Party::Alice,
                Visibility::BobOnly => party == Party::Bob,
            })
            .collect()
    }

    /// Canonical JSON of a party's view: the public configuration (with the
    /// other party's secret input removed) plus the visible events.
    pub fn party_view(&self, party: Party) -> serde_json::Value {
        let mut config = serde_json::to_value(&self.config).expect("config json");
        let inputs = config
            .get_mut("inputs")
            .and_then(|v| v.as_object_mut())
            .expect("inputs object");
        match party {
            Party::Alice => inputs.remove("sigma_b"),
            Party::Bob => inputs.remove("sigma_a"),
        };
        let events: Vec<serde_json::Value> = self
            .party_events(party)
            .into_iter()
            .map(|e| serde_json::to_value(e).expect("event json"))
            .collect();
        serde_json::json!({ "config": config, "events": events })
    }

    /// Hex digest of a party's view, for obliviousness comparisons.
    pub fn party_view_digest(&self, party: Party) -> String {
        use sha2::{Digest, Sha256};
        let bytes = serde_json::to_vec(&self.party_view(party)).expect("view json");
        let out = Sha256::new_with_prefix(bytes).finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}
