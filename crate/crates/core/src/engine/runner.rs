//! The shared protocol skeleton and its verification predicates.

use rand::Rng;

use crate::oracle::{carrier_amps, mode_basis, pauli_on_carrier, StateVector};
use crate::pauli::{swap_state, teleport_correction, BellIndex, PauliOp};
use crate::spacetime::{within_window, Geometry, SpacetimeEvent};
use crate::Real;

use super::{
    AbortInfo, AgentId, CheckKind, CoinValue, ConfigSnapshot, Deviations, EngineError, Event,
    ForcedOutcomes, Message, MessageKind, Outputs, Party, Protocol, ProtocolInputs, Role,
    Substitution, Transcript, Verdict, Visibility, TRANSCRIPT_SCHEMA,
};

type Sv = StateVector<Real>;

/// Everything that fixes one run apart from the random source.
#[derive(Debug, Clone)]
pub struct RunSpec<'a> {
    pub protocol: Protocol,
    pub inputs: ProtocolInputs,
    pub geometry: &'a Geometry<Real>,
    pub forced: ForcedOutcomes,
    pub position_attested: bool,
    pub seed: Option<u64>,
    pub trial: Option<u64>,
}

impl<'a> RunSpec<'a> {
    pub fn new(protocol: Protocol, inputs: ProtocolInputs, geometry: &'a Geometry<Real>) -> Self {
        RunSpec {
            protocol,
            inputs,
            geometry,
            forced: ForcedOutcomes::default(),
            position_attested: false,
            seed: None,
            trial: None,
        }
    }

    pub fn forced(mut self, forced: ForcedOutcomes) -> Self {
        self.forced = forced;
        self
    }
}

/// Qubit indices of the run's register.
struct Register {
    carrier: usize,
    a: usize,
    b: usize,
    ap: usize,
    bp: usize,
    data: Option<usize>,
    mlc_phi: Option<usize>,
    substitute: Option<usize>,
    retained: Option<usize>,
}

struct RunState {
    state: Sv,
    events: Vec<Event>,
    failures: Vec<AbortInfo>,
    outputs: Outputs,
}

impl RunState {
    fn push(&mut self, t: Real, agent: AgentId, action: &str, data: serde_json::Value, vis: Visibility) {
        self.events.push(Event {
            t,
            actor: agent.label().to_string(),
            action: action.to_string(),
            data,
            visibility: vis,
            rank: agent.rank(),
        });
    }

    fn fail(&mut self, check: CheckKind, by: Party, t: Real, detail: impl Into<String>) {
        self.failures.push(AbortInfo { check, by, t, detail: detail.into() });
    }

    fn qubit_state(&self, q: usize) -> Option<Sv> {
        self.state.extract_qubit(q).ok().map(Sv::single)
    }

    fn qubit_digest(&self, q: usize) -> serde_json::Value {
        match self.qubit_state(q) {
            Some(s) => serde_json::Value::String(s.canonical_digest()),
            None => serde_json::Value::String("entangled".into()),
        }
    }
}

fn quantum_message(
    emitted: SpacetimeEvent<Real>,
    from: AgentId,
    digest: serde_json::Value,
) -> serde_json::Value {
    let msg = Message {
        kind: MessageKind::QuantumState,
        emitted,
        from: from.label().to_string(),
        to: None,
        bell: None,
        digest: digest.as_str().map(str::to_owned),
        claim_coset: None,
    };
    serde_json::to_value(msg).expect("message json")
}

fn announcement(emitted: SpacetimeEvent<Real>, from: AgentId, value: BellIndex) -> serde_json::Value {
    let msg = Message {
        kind: MessageKind::ClassicalAnnouncement,
        emitted,
        from: from.label().to_string(),
        to: None,
        bell: Some(value),
        digest: None,
        claim_coset: None,
    };
    serde_json::to_value(msg).expect("message json")
}

/// Run one protocol instance against the oracle, producing a transcript.
///
/// All quantum steps execute in the state-vector oracle and are tracked in
/// the Pauli frame; on honest runs the two must agree or an internal error
/// is returned. Timing violations and correlation mismatches become abort
/// verdicts, never errors.
pub fn run<R: Rng>(
    spec: &RunSpec,
    dev: &Deviations,
    rng: &mut R,
) -> Result<Transcript, EngineError> {
    let g = spec.geometry;
    let inputs = spec.inputs;
    let mode = inputs.basis;
    let phi = inputs.carrier;
    let d = g.d();
    let t0 = g.t0;
    let tol = 1e-9;
    let send_data = spec.protocol.sends_data_state();
    let honest = dev.is_honest();

    // Register assembly: carrier, the two shared pairs, then per-run extras.
    let mut parts: Vec<Sv> = vec![
        Sv::single(carrier_amps(mode, phi)),
        Sv::bell(inputs.left),
        Sv::bell(inputs.right),
    ];
    let mut next = 5;
    let reg = {
        let data = send_data.then(|| {
            parts.push(Sv::single(carrier_amps(mode, phi)));
            next += 1;
            next - 1
        });
        let mlc_phi = dev.alice_mlc.as_ref().map(|plan| {
            parts.push(Sv::single(plan.phi_prime));
            next += 1;
            next - 1
        });
        let (substitute, retained) = match &dev.bprime_substitution {
            Some(Substitution::Computational { bit }) => {
                parts.push(Sv::basis(1, *bit as usize));
                next += 1;
                (Some(next - 1), None)
            }
            Some(Substitution::Entangled { lambda0, .. }) => {
                let l0 = *lambda0;
                let l1 = (1.0 - l0 * l0).max(0.0).sqrt();
                let amps = vec![
                    num_complex::Complex::new(l0, 0.0),
                    num_complex::Complex::new(0.0, 0.0),
                    num_complex::Complex::new(0.0, 0.0),
                    num_complex::Complex::new(l1, 0.0),
                ];
                parts.push(Sv::from_amplitudes(amps, 2));
                next += 2;
                (Some(next - 2), Some(next - 1))
            }
            None => (None, None),
        };
        Register { carrier: 0, a: 1, b: 2, ap: 3, bp: 4, data, mlc_phi, substitute, retained }
    };
    let state = parts
        .into_iter()
        .reduce(|acc, p| acc.tensor(&p))
        .expect("nonempty register");
    debug_assert_eq!(state.qubit_count(), next);

    let mut rs = RunState {
        state,
        events: Vec::new(),
        failures: Vec::new(),
        outputs: Outputs::default(),
    };

    if spec.position_attested {
        rs.push(
            t0,
            AgentId { party: Party::Alice, role: Role::AprimeVerifier },
            "position_attestation",
            serde_json::json!({"attests": ["bob", "bprime"], "sites": [g.x_b, g.x_bp]}),
            Visibility::Public,
        );
    }

    // ----- t0: Alice's side (swap measurement + announcement) -----
    let announced_alpha = if let Some(plan) = &dev.alice_mlc {
        // MLC delay: skip the swap BSM, teleport a decoy through the right
        // pair instead, and announce a fabricated outcome.
        let rec = rs.state.bell_measure(reg.mlc_phi.unwrap(), reg.ap, rng, None)?;
        rs.state = rec.post_state.clone();
        rs.push(
            t0,
            AgentId::ALICE,
            "bell_measurement",
            serde_json::json!({"pair": "decoy", "outcome": rec.outcome, "probability": rec.probability}),
            Visibility::AliceOnly,
        );
        plan.fabricated_alpha
    } else {
        rs.state.apply_pauli(reg.a, inputs.sigma_a)?;
        rs.push(
            t0,
            AgentId::ALICE,
            "apply_input",
            serde_json::json!({"pauli": inputs.sigma_a}),
            Visibility::AliceOnly,
        );
        let rec = rs.state.bell_measure(reg.a, reg.ap, rng, spec.forced.alpha)?;
        rs.state = rec.post_state.clone();
        rs.push(
            t0,
            AgentId::ALICE,
            "bell_measurement",
            serde_json::json!({"pair": "swap", "outcome": rec.outcome, "probability": rec.probability}),
            Visibility::AliceOnly,
        );
        rec.outcome
    };
    rs.push(
        t0,
        AgentId::ALICE,
        "announce",
        announcement(SpacetimeEvent::new(g.x_a, t0), AgentId::ALICE, announced_alpha),
        Visibility::Public,
    );

    // ----- t0: Bob's side (input + teleport measurement + announcement) -----
    rs.state.apply_pauli(reg.carrier, inputs.sigma_b)?;
    rs.push(
        t0,
        AgentId::BOB,
        "apply_input",
        serde_json::json!({"pauli": inputs.sigma_b}),
        Visibility::BobOnly,
    );
    let beta = {
        let rec = rs.state.bell_measure(reg.carrier, reg.b, rng, spec.forced.beta)?;
        rs.state = rec.post_state.clone();
        rs.push(
            t0,
            AgentId::BOB,
            "bell_measurement",
            serde_json::json!({"pair": "teleport", "outcome": rec.outcome, "probability": rec.probability}),
            Visibility::BobOnly,
        );
        rec.outcome
    };
    rs.push(
        t0,
        AgentId::BOB,
        "announce",
        announcement(SpacetimeEvent::new(g.x_b, t0), AgentId::BOB, beta),
        Visibility::Public,
    );

    // Teleportation encoding implied by the honest frame. Valid whenever the
    // swap measurement actually happened (i.e. not under the MLC delay).
    let sigma_i = if dev.alice_mlc.is_none() {
        let swapped = inputs
            .left
            .xor(BellIndex::from(inputs.sigma_a))
            .xor(inputs.right)
            .xor(announced_alpha);
        Some(teleport_correction(swapped, beta))
    } else {
        None
    };
    rs.outputs.sigma_i = sigma_i;

    // ----- t0: Bob emits the data state toward one of Alice's agents -----
    let mut data_arrival: Option<(usize, Real, Real)> = None; // (site idx, t at site, t at Alice)
    if let Some(dq) = reg.data {
        rs.state.apply_pauli(dq, inputs.sigma_b)?;
        if honest {
            frame_check(&rs, dq, inputs.sigma_b, mode, phi, "data state")?;
        }
        rs.push(
            t0,
            AgentId::BOB,
            "emit_data_state",
            quantum_message(SpacetimeEvent::new(g.x_b, t0), AgentId::BOB, rs.qubit_digest(dq)),
            Visibility::Public,
        );
        let drawn = rng.gen_range(0..2usize);
        let site = g.a_sites[drawn];
        let t_site = t0 + (site - g.x_b).abs();
        let claim = SpacetimeEvent::new(g.x_b, t0);
        let arrival = SpacetimeEvent::new(site, t_site);
        let ok = within_window(arrival, claim);
        rs.push(
            t_site,
            AgentId::a_site(drawn),
            "deliver_data_state",
            serde_json::json!({"position": site, "within_window": ok, "digest": rs.qubit_digest(dq)}),
            Visibility::AliceOnly,
        );
        if !ok {
            rs.fail(CheckKind::Timing, Party::Alice, t_site, "data state arrival not light-like");
        }
        let t_alice = t_site + (g.x_a - site).abs();
        rs.push(
            t_alice,
            AgentId::ALICE,
            "receive_data_state",
            serde_json::json!({"relayed_from": AgentId::a_site(drawn).label()}),
            Visibility::AliceOnly,
        );
        rs.outputs.alice_transfer_position = Some(site);
        data_arrival = Some((drawn, t_site, t_alice));
    }

    // ----- t0: B′ forwards its system toward Alice -----
    let forwarded = reg.substitute.unwrap_or(reg.bp);
    if let Some(p) = dev.bprime_extra_pauli {
        rs.state.apply_pauli(forwarded, p)?;
    }
    if honest {
        let expected = sigma_i.unwrap().compose(inputs.sigma_b);
        frame_check(&rs, reg.bp, expected, mode, phi, "forwarded state")?;
    }
    let psi_emit_t = t0 + dev.bprime_delay.unwrap_or(0.0);
    let psi_claim = SpacetimeEvent::new(g.x_bp, t0);
    rs.push(
        psi_emit_t,
        AgentId::BPRIME,
        "forward_psi",
        quantum_message(psi_claim, AgentId::BPRIME, rs.qubit_digest(forwarded)),
        Visibility::Public,
    );
    let t_psi = psi_emit_t + (g.x_a - g.x_bp).abs();
    let psi_ok = within_window(SpacetimeEvent::new(g.x_a, t_psi), psi_claim);
    rs.push(
        t_psi,
        AgentId::ALICE,
        "deliver_psi",
        serde_json::json!({"within_window": psi_ok, "digest": rs.qubit_digest(forwarded)}),
        Visibility::AliceOnly,
    );

    // ----- t0 + d: Alice's verification -----
    let t_reveal = (t0 + d).max(t_psi);
    if dev.alice_mlc.is_none() {
        if !psi_ok {
            rs.fail(
                CheckKind::Timing,
                Party::Alice,
                t_psi,
                "forwarded state arrival inconsistent with claimed emission",
            );
        }
        // Honest processing: measure the forwarded system in the agreed
        // basis (non-disturbing on honest runs).
        let (m_psi, _, post) = rs.state.measure_in_basis(forwarded, &mode_basis(mode), rng, None)?;
        rs.state = post;
        rs.push(
            t_psi,
            AgentId::ALICE,
            "measure_psi",
            serde_json::json!({"outcome": m_psi}),
            Visibility::AliceOnly,
        );
        if let (Some(dq), Some((_, _, t_data)), Some(si)) = (reg.data, data_arrival, sigma_i) {
            let (m_data, _, post) = rs.state.measure_in_basis(dq, &mode_basis(mode), rng, None)?;
            rs.state = post;
            rs.push(
                t_data,
                AgentId::ALICE,
                "measure_data_state",
                serde_json::json!({"outcome": m_data}),
                Visibility::AliceOnly,
            );
            rs.outputs.alice_learned_coset = Some((m_data != 0) as u8 ^ phi as u8);
            let t_check = t_psi.max(t_data);
            let consistent = (m_psi != 0) == ((m_data != 0) ^ si.coset(mode));
            rs.push(
                t_check,
                AgentId::ALICE,
                "verify_bob_side",
                serde_json::json!({"consistent": consistent, "sigma_i": si}),
                Visibility::AliceOnly,
            );
            if !consistent {
                rs.fail(
                    CheckKind::Correlation,
                    Party::Alice,
                    t_check,
                    "forwarded state inconsistent with announced outcomes",
                );
            }
        }
    }

    // Alice aborts before revealing when a check has already failed.
    let pre_reveal_abort = rs
        .failures
        .iter()
        .filter(|f| f.by == Party::Alice && f.t <= t_reveal)
        .min_by(|a, b| a.t.total_cmp(&b.t))
        .cloned();
    if let Some(info) = pre_reveal_abort {
        rs.push(
            info.t,
            AgentId::ALICE,
            "abort",
            serde_json::to_value(&info).expect("abort json"),
            Visibility::Public,
        );
        return Ok(finish(spec, rs, Verdict::Abort(info)));
    }

    // ----- t0 + d: Alice reveals -----
    let (reveal_qubit, reveal_pauli) = if let Some(plan) = &dev.alice_mlc {
        // Consistency forces the reveal Pauli once the fabricated
        // announcement is fixed; the received decoy channel is discarded.
        let forced_pauli = PauliOp::from(inputs.right.xor(plan.fabricated_alpha));
        (reg.a, forced_pauli)
    } else {
        (forwarded, dev.alice_reveal_override.unwrap_or(inputs.sigma_a))
    };
    rs.state.apply_pauli(reveal_qubit, reveal_pauli)?;
    let claim_coset = reveal_pauli.coset(mode);
    if honest {
        let expected = inputs.sigma_a.compose(sigma_i.unwrap()).compose(inputs.sigma_b);
        frame_check(&rs, reveal_qubit, expected, mode, phi, "reveal state")?;
    }
    let emission_x = g.x_a + dev.alice_position_offset.unwrap_or(0.0);
    let reveal_claim = SpacetimeEvent::new(g.x_a, t_reveal);
    let reveal_msg = {
        let mut m = quantum_message(reveal_claim, AgentId::ALICE, rs.qubit_digest(reveal_qubit));
        m["claim_coset"] = serde_json::json!(claim_coset as u8);
        m
    };
    rs.push(t_reveal, AgentId::ALICE, "reveal", reveal_msg, Visibility::Public);

    let (verdict_agent, verdict_site) = if g.colocated_bob_agent {
        (AgentId { party: Party::Bob, role: Role::ColocatedBobAgent }, g.x_a)
    } else {
        let drawn = rng.gen_range(0..2usize);
        (AgentId::b_site(drawn), g.b_sites[drawn])
    };
    let t_arr = t_reveal + (verdict_site - emission_x).abs();
    let arrival = SpacetimeEvent::new(verdict_site, t_arr);
    let window_ok = within_window(arrival, reveal_claim);
    let schedule_ok = (t_reveal - (t0 + d)).abs() <= tol;
    rs.push(
        t_arr,
        verdict_agent,
        "deliver_reveal",
        serde_json::json!({
            "position": verdict_site,
            "within_window": window_ok,
            "on_schedule": schedule_ok,
            "digest": rs.qubit_digest(reveal_qubit),
            "claim_coset": claim_coset as u8,
        }),
        Visibility::BobOnly,
    );

    // Entangled-B′ post-operation happens once Bob's announcement reaches
    // x_bp; it acts on a system causally disconnected from the reveal path.
    if let (Some(q), Some(Substitution::Entangled { post_op: Some(p), .. })) =
        (reg.retained, &dev.bprime_substitution)
    {
        rs.state.apply_pauli(q, *p)?;
        rs.push(
            t0 + 2.0 * d,
            AgentId::BPRIME,
            "post_measurement_operation",
            serde_json::json!({"pauli": p}),
            Visibility::BobOnly,
        );
    }

    // ----- Bob's side verification (or guess, when he is the cheater) -----
    if dev.bob_computational_guess {
        let basis = mode_basis(crate::pauli::BasisMode::Computational);
        let (o, _, post) = rs.state.measure_in_basis(reveal_qubit, &basis, rng, None)?;
        rs.state = post;
        rs.push(
            t_arr,
            verdict_agent,
            "computational_guess",
            serde_json::json!({"outcome": o}),
            Visibility::BobOnly,
        );
        rs.outputs.bob_guess = Some(o as u8);
    } else {
        if !window_ok {
            rs.fail(
                CheckKind::Timing,
                Party::Bob,
                t_arr,
                "reveal arrival inconsistent with claimed emission position",
            );
        }
        if !schedule_ok {
            rs.fail(CheckKind::Timing, Party::Bob, t_arr, "reveal emitted off schedule");
        }
        let (m_reveal, _, post) = rs.state.measure_in_basis(reveal_qubit, &mode_basis(mode), rng, None)?;
        rs.state = post;
        rs.push(
            t_arr,
            verdict_agent,
            "measure_reveal",
            serde_json::json!({"outcome": m_reveal}),
            Visibility::BobOnly,
        );
        let expected = super::verify::expected_reveal_outcome(
            inputs.left,
            inputs.right,
            announced_alpha,
            beta,
            claim_coset,
            inputs.sigma_b,
            mode,
            phi,
        );
        let consistent = (m_reveal != 0) == expected;
        rs.push(
            t_arr,
            verdict_agent,
            "verify_alice_side",
            serde_json::json!({"consistent": consistent, "claim_coset": claim_coset as u8}),
            Visibility::BobOnly,
        );
        if !consistent {
            rs.fail(
                CheckKind::Correlation,
                Party::Bob,
                t_arr,
                "reveal state matches no input in the claimed coset",
            );
        } else {
            rs.outputs.bob_accepted_coset = Some(claim_coset as u8);
        }
    }

    // ----- protocol outputs -----
    let verdict = final_verdict(&rs.failures);
    if verdict.is_accept() {
        match spec.protocol {
            Protocol::Tpsc => {
                rs.outputs.f_digest_bob = rs.qubit_state(reveal_qubit).map(|s| s.canonical_digest());
                if let (Some(dq), Some(si)) = (reg.data, sigma_i) {
                    if let Some(mut s) = rs.qubit_state(dq) {
                        s.apply_pauli(0, si)?;
                        s.apply_pauli(0, inputs.sigma_a)?;
                        rs.outputs.f_digest_alice = Some(s.canonical_digest());
                    }
                }
            }
            Protocol::Coin => {
                if let Some(accepted) = rs.outputs.bob_accepted_coset {
                    let gamma = accepted ^ inputs.sigma_b.coset(mode) as u8;
                    rs.outputs.coin =
                        Some(if gamma == 0 { CoinValue::Plus } else { CoinValue::Minus });
                }
            }
            Protocol::Bc => {
                rs.outputs.commitment_bit = rs.outputs.bob_accepted_coset;
            }
            Protocol::Core | Protocol::Ot => {}
        }
    } else if spec.protocol == Protocol::Coin {
        rs.outputs.coin = Some(CoinValue::Invalid);
    }

    Ok(finish(spec, rs, verdict))
}

fn final_verdict(failures: &[AbortInfo]) -> Verdict {
    failures
        .iter()
        .min_by(|a, b| a.t.total_cmp(&b.t).then_with(|| party_rank(a.by).cmp(&party_rank(b.by))))
        .map(|info| Verdict::Abort(info.clone()))
        .unwrap_or(Verdict::Accept)
}

fn party_rank(p: Party) -> u8 {
    match p {
        Party::Alice => 0,
        Party::Bob => 1,
    }
}

fn finish(spec: &RunSpec, mut rs: RunState, verdict: Verdict) -> Transcript {
    if let Verdict::Abort(_) = &verdict {
        if spec.protocol == Protocol::Coin {
            rs.outputs.coin = Some(CoinValue::Invalid);
        }
    }
    rs.events.sort_by(|a, b| a.t.total_cmp(&b.t).then_with(|| a.rank.cmp(&b.rank)));
    Transcript {
        schema: TRANSCRIPT_SCHEMA.to_string(),
        config: ConfigSnapshot {
            protocol: spec.protocol,
            inputs: spec.inputs,
            geometry: spec.geometry.clone(),
            forced: spec.forced,
            position_attested: spec.position_attested,
            seed: spec.seed,
            trial: spec.trial,
        },
        events: rs.events,
        verdict,
        outputs: rs.outputs,
    }
}

/// Assert that a register qubit matches its Pauli-frame prediction.
fn frame_check(
    rs: &RunState,
    qubit: usize,
    frame: PauliOp,
    mode: crate::pauli::BasisMode,
    phi: bool,
    stage: &'static str,
) -> Result<(), EngineError> {
    let actual = rs
        .qubit_state(qubit)
        .ok_or(EngineError::FrameOracleMismatch { stage, fidelity: 0.0 })?;
    let expected = pauli_on_carrier(frame, mode, phi);
    let fidelity = actual.fidelity(&expected)?;
    if (fidelity - 1.0).abs() > 1e-9 {
        return Err(EngineError::FrameOracleMismatch { stage, fidelity });
    }
    Ok(())
}
