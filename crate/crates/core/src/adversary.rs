//! Executable cheating strategies and their measured statistics.
//!
//! Each strategy overrides exactly the honest behaviors it names and runs
//! the ordinary engine underneath, so a strategy with no deviation set
//! reproduces honest transcripts bit for bit. Success and detection are
//! measured two ways where the claims are absolute: analytic enumeration of
//! forced outcomes (authoritative) and seeded sampling.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{
    self, Deviations, EngineError, MlcPlan, Protocol, ProtocolInputs, Substitution, Verdict,
};
use crate::pauli::{teleport_correction, BasisMode, BellIndex, PauliOp};
use crate::spacetime::{earliest_assembly, SpacetimeEvent};
use crate::{Geometry, Real};

/// Deterministic per-trial random source: one seed, one independent stream
/// per trial index.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draw uniformly random honest inputs.
pub fn random_inputs<R: Rng>(rng: &mut R, basis: BasisMode) -> ProtocolInputs {
    ProtocolInputs {
        sigma_a: PauliOp::ALL[rng.gen_range(0..4)],
        sigma_b: PauliOp::ALL[rng.gen_range(0..4)],
        left: BellIndex::ALL[rng.gen_range(0..4)],
        right: BellIndex::ALL[rng.gen_range(0..4)],
        basis,
        carrier: rng.gen(),
    }
}

/// The four pieces of information sufficient to reconstruct Alice's input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EveElement {
    /// Bob's encoded data state σ_b|φ⟩.
    StateB,
    /// The forwarded state σ_i σ_b|φ⟩.
    StatePsi,
    /// Alice's announced measurement outcome.
    Alpha,
    /// Bob's announced measurement outcome.
    Beta,
}

impl EveElement {
    pub const ALL: [EveElement; 4] =
        [EveElement::StateB, EveElement::StatePsi, EveElement::Alpha, EveElement::Beta];
}

/// A cheating strategy with its parameters.
#[derive(Debug, Clone)]
pub enum Strategy {
    InputAlteration { target_coset: bool, same_coset_control: bool },
    WrongBasis { control: bool },
    MlcDelayedAlice { desired_bit: bool },
    EntangledBprime { lambda0: Real, post_op: Option<PauliOp> },
    EveSetInference { available: Vec<EveElement>, at_time: Option<Real> },
    PositionSpoof { offset: Real },
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::InputAlteration { .. } => "input-alteration",
            Strategy::WrongBasis { .. } => "wrong-basis",
            Strategy::MlcDelayedAlice { .. } => "mlc-delayed-alice",
            Strategy::EntangledBprime { .. } => "entangled-bprime",
            Strategy::EveSetInference { .. } => "eve-set",
            Strategy::PositionSpoof { .. } => "position-spoof",
        }
    }
}

/// Measured statistics of one strategy over a batch of seeded trials.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttackReport {
    pub strategy: String,
    pub trials: u64,
    /// Runs the honest verifiers aborted.
    pub detected: u64,
    /// Runs the cheater reached its stated goal undetected.
    pub cheat_success: u64,
    /// Strategy-specific distributions and rates.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub posterior: BTreeMap<String, Real>,
    /// Earliest time the full inference set can be co-located at a site the
    /// adversary controls.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assemblable_at: Option<Real>,
    /// Whether the queried time is at or past the assembly bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assemblable: Option<bool>,
}

impl AttackReport {
    fn new(strategy: &Strategy, trials: u64) -> Self {
        AttackReport {
            strategy: strategy.name().to_string(),
            trials,
            detected: 0,
            cheat_success: 0,
            posterior: BTreeMap::new(),
            assemblable_at: None,
            assemblable: None,
        }
    }
}

/// Run a strategy for `trials` seeded trials against the given geometry.
pub fn run_strategy(
    strategy: &Strategy,
    geometry: &Geometry,
    trials: u64,
    seed: u64,
) -> Result<AttackReport, EngineError> {
    match strategy {
        Strategy::InputAlteration { target_coset, same_coset_control } => {
            input_alteration(geometry, *target_coset, *same_coset_control, trials, seed)
        }
        Strategy::WrongBasis { control } => wrong_basis(geometry, *control, trials, seed),
        Strategy::MlcDelayedAlice { desired_bit } => {
            mlc_delayed_alice(geometry, *desired_bit, trials, seed)
        }
        Strategy::EntangledBprime { lambda0, post_op } => {
            entangled_bprime(geometry, *lambda0, *post_op, trials, seed)
        }
        Strategy::EveSetInference { available, at_time } => {
            Ok(eve_set_inference(geometry, available, *at_time, trials, seed))
        }
        Strategy::PositionSpoof { offset } => position_spoof(geometry, *offset, trials, seed),
    }
}

/// Alice announces her swap outcome honestly, then reveals with a Pauli from
/// a different (or, in control mode, the same) coset.
pub fn input_alteration(
    geometry: &Geometry,
    target_coset: bool,
    same_coset_control: bool,
    trials: u64,
    seed: u64,
) -> Result<AttackReport, EngineError> {
    let strategy =
        Strategy::InputAlteration { target_coset, same_coset_control };
    let mut report = AttackReport::new(&strategy, trials);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let mut inputs = random_inputs(&mut rng, BasisMode::Hadamard);
        let commit_coset = if same_coset_control { target_coset } else { !target_coset };
        let members = PauliOp::coset_members(commit_coset, inputs.basis);
        inputs.sigma_a = members[rng.gen_range(0..2)];
        let reveal_members = PauliOp::coset_members(target_coset, inputs.basis);
        let reveal = reveal_members[rng.gen_range(0..2)];
        let dev = Deviations { alice_reveal_override: Some(reveal), ..Deviations::default() };
        let spec = engine::RunSpec::new(Protocol::Bc, inputs, geometry);
        let t = engine::run(&spec, &dev, &mut rng)?;
        match &t.verdict {
            Verdict::Abort(_) => report.detected += 1,
            Verdict::Accept => {
                if t.outputs.commitment_bit == Some(target_coset as u8) {
                    report.cheat_success += 1;
                }
            }
        }
    }
    if trials > 0 {
        report
            .posterior
            .insert("detection_rate".into(), report.detected as Real / trials as Real);
    }
    Ok(report)
}

/// B′ forwards a computational-basis state instead of the agreed carrier;
/// Bob then tries to guess Alice's coset from the reveal. In control mode
/// the basis is honest and the guess accuracy is measured both before and
/// after the reveal.
pub fn wrong_basis(
    geometry: &Geometry,
    control: bool,
    trials: u64,
    seed: u64,
) -> Result<AttackReport, EngineError> {
    let strategy = Strategy::WrongBasis { control };
    let mut report = AttackReport::new(&strategy, trials);
    let mut correct_before = 0u64;
    let mut correct_after = 0u64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let inputs = random_inputs(&mut rng, BasisMode::Hadamard);
        let true_coset = inputs.sigma_a.coset(inputs.basis);
        if control {
            let spec = engine::RunSpec::new(Protocol::Bc, inputs, geometry);
            let t = engine::run(&spec, &Deviations::honest(), &mut rng)?;
            // Before the reveal Bob holds only the announcements, under
            // which both cosets are equally likely; his best guess is a coin.
            let blind_guess: bool = rng.gen();
            if blind_guess == true_coset {
                correct_before += 1;
            }
            if t.outputs.commitment_bit == Some(true_coset as u8) {
                correct_after += 1;
            }
        } else {
            let dev = Deviations {
                bprime_substitution: Some(Substitution::Computational { bit: rng.gen() }),
                bob_computational_guess: true,
                ..Deviations::default()
            };
            let spec = engine::RunSpec::new(Protocol::Bc, inputs, geometry);
            let t = engine::run(&spec, &dev, &mut rng)?;
            if let Verdict::Abort(_) = t.verdict {
                report.detected += 1;
            }
            let guess = t.outputs.bob_guess.expect("guess mode records an outcome") != 0;
            if guess == true_coset {
                report.cheat_success += 1;
            }
        }
    }
    if trials > 0 {
        if control {
            report
                .posterior
                .insert("accuracy_before_reveal".into(), correct_before as Real / trials as Real);
            report
                .posterior
                .insert("accuracy_after_reveal".into(), correct_after as Real / trials as Real);
        } else {
            report
                .posterior
                .insert("guess_accuracy".into(), report.cheat_success as Real / trials as Real);
        }
    }
    Ok(report)
}

/// The forced reveal coset once Alice fabricates each of the four possible
/// announcements: consistency pins her Pauli to right ⊕ fabricated, so the
/// four fabrications split evenly between the cosets.
pub fn mlc_forced_cosets(right: BellIndex, basis: BasisMode) -> [bool; 4] {
    let mut out = [false; 4];
    for (i, fab) in BellIndex::ALL.iter().enumerate() {
        out[i] = PauliOp::from(right.xor(*fab)).coset(basis);
    }
    out
}

/// Alice skips her swap measurement, fabricates an announcement, and only at
/// reveal time discovers which coset consistency forces on her.
pub fn mlc_delayed_alice(
    geometry: &Geometry,
    desired_bit: bool,
    trials: u64,
    seed: u64,
) -> Result<AttackReport, EngineError> {
    let strategy = Strategy::MlcDelayedAlice { desired_bit };
    let mut report = AttackReport::new(&strategy, trials);
    let mut accepted = 0u64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let mut inputs = random_inputs(&mut rng, BasisMode::Hadamard);
        // Her own input is irrelevant: she never applies it.
        inputs.sigma_a = PauliOp::I;
        let fab = BellIndex::ALL[rng.gen_range(0..4)];
        let dev = Deviations { alice_mlc: Some(MlcPlan::new(fab)), ..Deviations::default() };
        let spec = engine::RunSpec::new(Protocol::Bc, inputs, geometry);
        let t = engine::run(&spec, &dev, &mut rng)?;
        match &t.verdict {
            Verdict::Abort(_) => report.detected += 1,
            Verdict::Accept => {
                accepted += 1;
                if t.outputs.commitment_bit == Some(desired_bit as u8) {
                    report.cheat_success += 1;
                }
            }
        }
    }
    if trials > 0 {
        report
            .posterior
            .insert("success_rate".into(), report.cheat_success as Real / trials as Real);
        report
            .posterior
            .insert("accept_rate".into(), accepted as Real / trials as Real);
    }
    Ok(report)
}

/// B′ forwards half of an entangled pair and operates on the retained half
/// after Bob's announcements. Alice's verification statistics are compared
/// against the same runs without the post-operation.
pub fn entangled_bprime(
    geometry: &Geometry,
    lambda0: Real,
    post_op: Option<PauliOp>,
    trials: u64,
    seed: u64,
) -> Result<AttackReport, EngineError> {
    let strategy = Strategy::EntangledBprime { lambda0, post_op };
    let mut report = AttackReport::new(&strategy, trials);
    let mut baseline_detected = 0u64;
    for trial in 0..trials {
        let run_one = |with_post: Option<PauliOp>| -> Result<Verdict, EngineError> {
            let mut rng = trial_rng(seed, trial);
            let inputs = random_inputs(&mut rng, BasisMode::Hadamard);
            let dev = Deviations {
                bprime_substitution: Some(Substitution::Entangled {
                    lambda0,
                    post_op: with_post,
                }),
                ..Deviations::default()
            };
            let spec = engine::RunSpec::new(Protocol::Ot, inputs, geometry);
            Ok(engine::run(&spec, &dev, &mut rng)?.verdict)
        };
        if let Verdict::Abort(_) = run_one(post_op)? {
            report.detected += 1;
        } else {
            report.cheat_success += 1;
        }
        if let Verdict::Abort(_) = run_one(None)? {
            baseline_detected += 1;
        }
    }
    if trials > 0 {
        report
            .posterior
            .insert("detect_rate".into(), report.detected as Real / trials as Real);
        report
            .posterior
            .insert("baseline_detect_rate".into(), baseline_detected as Real / trials as Real);
    }
    Ok(report)
}

/// Bob-side availability events for the four inference elements, with the
/// reveal transmission standing in for the forwarded state.
pub fn eve_set_sources(geometry: &Geometry) -> [SpacetimeEvent<Real>; 4] {
    let t0 = geometry.t0;
    let d = geometry.d();
    [
        SpacetimeEvent::new(geometry.x_b, t0),      // σ_b|φ⟩: Bob's own data
        SpacetimeEvent::new(geometry.x_a, t0 + d),  // ψ-side info leaves with the reveal
        SpacetimeEvent::new(geometry.x_a, t0),      // Alice's announcement
        SpacetimeEvent::new(geometry.x_b, t0),      // Bob's announcement
    ]
}

/// Earliest time the full set can be co-located at a position the Bob side
/// controls: his own strongholds, plus the site next to Alice when the
/// colocated agent is configured.
pub fn eve_set_assembly_time(geometry: &Geometry) -> Real {
    let sources = eve_set_sources(geometry);
    let mut sites = vec![geometry.x_b, geometry.x_bp];
    if geometry.colocated_bob_agent {
        sites.push(geometry.x_a);
    }
    sites
        .into_iter()
        .map(|p| earliest_assembly(&sources, p).expect("nonempty sources"))
        .fold(Real::INFINITY, Real::min)
}

/// Bayesian inference of Alice's coset from a subset of the four elements,
/// by exhaustive enumeration of the hidden values consistent with the
/// observations. Refuses to infer before the set is assemblable.
pub fn eve_set_inference(
    geometry: &Geometry,
    available: &[EveElement],
    at_time: Option<Real>,
    trials: u64,
    seed: u64,
) -> AttackReport {
    let strategy =
        Strategy::EveSetInference { available: available.to_vec(), at_time };
    let mut report = AttackReport::new(&strategy, trials);
    let assembly = eve_set_assembly_time(geometry);
    report.assemblable_at = Some(assembly);
    if let Some(t) = at_time {
        let ok = t + 1e-9 >= assembly;
        report.assemblable = Some(ok);
        if !ok {
            report.posterior.insert("not_yet_assemblable".into(), 1.0);
            return report;
        }
    }
    let has = |e: EveElement| available.contains(&e);
    let basis = BasisMode::Hadamard;
    let mut posterior_sum = 0.0;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let inputs = random_inputs(&mut rng, basis);
        let phi = inputs.carrier;
        let alpha = BellIndex::ALL[rng.gen_range(0..4)];
        let beta = BellIndex::ALL[rng.gen_range(0..4)];
        let sigma_i = teleport_correction(
            inputs.left.xor(BellIndex::from(inputs.sigma_a)).xor(inputs.right).xor(alpha),
            beta,
        );
        let m_b = phi ^ inputs.sigma_b.coset(basis);
        let m_psi = phi ^ sigma_i.compose(inputs.sigma_b).coset(basis);

        // Enumerate every hidden assignment consistent with the available
        // observations; the pairs and carrier are public.
        let mut weight = [0u32; 2];
        for a_hyp in PauliOp::ALL {
            for b_hyp in PauliOp::ALL {
                for al_hyp in BellIndex::ALL {
                    for be_hyp in BellIndex::ALL {
                        if has(EveElement::Alpha) && al_hyp != alpha {
                            continue;
                        }
                        if has(EveElement::Beta) && be_hyp != beta {
                            continue;
                        }
                        if has(EveElement::StateB) && phi ^ b_hyp.coset(basis) != m_b {
                            continue;
                        }
                        if has(EveElement::StatePsi) {
                            let si = teleport_correction(
                                inputs
                                    .left
                                    .xor(BellIndex::from(a_hyp))
                                    .xor(inputs.right)
                                    .xor(al_hyp),
                                be_hyp,
                            );
                            if phi ^ si.compose(b_hyp).coset(basis) != m_psi {
                                continue;
                            }
                        }
                        weight[a_hyp.coset(basis) as usize] += 1;
                    }
                }
            }
        }
        let total = (weight[0] + weight[1]) as Real;
        let p1 = weight[1] as Real / total;
        posterior_sum += p1;
        let guess = match weight[1].cmp(&weight[0]) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => rng.gen(),
        };
        if guess == inputs.sigma_a.coset(basis) {
            report.cheat_success += 1;
        }
    }
    if trials > 0 {
        report
            .posterior
            .insert("accuracy".into(), report.cheat_success as Real / trials as Real);
        report
            .posterior
            .insert("mean_posterior_coset1".into(), posterior_sum / trials as Real);
    }
    report
}

/// Alice's reveal is emitted `offset` away from her announced position at
/// the honest emission time.
pub fn position_spoof(
    geometry: &Geometry,
    offset: Real,
    trials: u64,
    seed: u64,
) -> Result<AttackReport, EngineError> {
    let strategy = Strategy::PositionSpoof { offset };
    let mut report = AttackReport::new(&strategy, trials);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let inputs = random_inputs(&mut rng, BasisMode::Hadamard);
        let dev = Deviations { alice_position_offset: Some(offset), ..Deviations::default() };
        let spec = engine::RunSpec::new(Protocol::Bc, inputs, geometry);
        let t = engine::run(&spec, &dev, &mut rng)?;
        if let Verdict::Abort(_) = t.verdict {
            report.detected += 1;
        } else {
            report.cheat_success += 1;
        }
    }
    if trials > 0 {
        report
            .posterior
            .insert("detection_rate".into(), report.detected as Real / trials as Real);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_alteration_is_always_detected() {
        let g = Geometry::default();
        for target in [false, true] {
            let r = input_alteration(&g, target, false, 200, 5).unwrap();
            assert_eq!(r.detected, 200);
            assert_eq!(r.cheat_success, 0);
        }
    }

    #[test]
    fn same_coset_control_is_never_detected() {
        let g = Geometry::default();
        let r = input_alteration(&g, true, true, 100, 5).unwrap();
        assert_eq!(r.detected, 0);
        assert_eq!(r.cheat_success, 100);
    }

    #[test]
    fn zero_trials_make_an_empty_report() {
        let g = Geometry::default();
        let r = input_alteration(&g, false, false, 0, 5).unwrap();
        assert_eq!((r.trials, r.detected, r.cheat_success), (0, 0, 0));
        assert!(r.posterior.is_empty());
    }

    #[test]
    fn wrong_basis_guess_is_a_coin_flip() {
        let g = Geometry::default();
        let r = wrong_basis(&g, false, 2000, 17).unwrap();
        let acc = r.posterior["guess_accuracy"];
        assert!((0.45..=0.55).contains(&acc), "accuracy {acc}");
    }

    #[test]
    fn wrong_basis_control_accuracies() {
        let g = Geometry::default();
        let r = wrong_basis(&g, true, 1500, 17).unwrap();
        let before = r.posterior["accuracy_before_reveal"];
        let after = r.posterior["accuracy_after_reveal"];
        assert!((0.44..=0.56).contains(&before), "before {before}");
        assert_eq!(after, 1.0);
    }

    #[test]
    fn wrong_basis_single_trial_report_is_well_formed() {
        let g = Geometry::default();
        let r = wrong_basis(&g, false, 1, 3).unwrap();
        assert_eq!(r.trials, 1);
        assert!(r.cheat_success <= 1);
    }

    #[test]
    fn mlc_forced_cosets_are_uniform() {
        for right in BellIndex::ALL {
            let cosets = mlc_forced_cosets(right, BasisMode::Hadamard);
            let ones = cosets.iter().filter(|&&c| c).count();
            assert_eq!(ones, 2, "right {right}");
        }
    }

    #[test]
    fn mlc_runs_are_accepted_and_near_half_successful() {
        let g = Geometry::default();
        let r = mlc_delayed_alice(&g, true, 2000, 23).unwrap();
        assert_eq!(r.detected, 0);
        assert_eq!(r.posterior["accept_rate"], 1.0);
        let rate = r.posterior["success_rate"];
        assert!((0.45..=0.55).contains(&rate), "rate {rate}");
    }

    #[test]
    fn entangled_post_op_does_not_change_detection() {
        let g = Geometry::default();
        let r = entangled_bprime(&g, std::f64::consts::FRAC_1_SQRT_2, Some(PauliOp::Z), 400, 31)
            .unwrap();
        assert_eq!(r.posterior["detect_rate"], r.posterior["baseline_detect_rate"]);
        // An identity post-operation is literally the no-operation run.
        let r = entangled_bprime(&g, std::f64::consts::FRAC_1_SQRT_2, Some(PauliOp::I), 400, 31)
            .unwrap();
        assert_eq!(r.posterior["detect_rate"], r.posterior["baseline_detect_rate"]);
    }

    #[test]
    fn product_entangled_case_matches_wrong_basis_detection() {
        let g = Geometry::default();
        // λ0 = 1 forwards a bare |0⟩, the wrong-basis product case: Alice's
        // correlation check then fails on about half the runs.
        let r = entangled_bprime(&g, 1.0, None, 600, 37).unwrap();
        let rate = r.posterior["detect_rate"];
        assert!((0.42..=0.58).contains(&rate), "rate {rate}");
    }

    #[test]
    fn eve_full_set_is_perfect_and_subsets_are_blind() {
        let g = Geometry::default();
        let full = eve_set_inference(&g, &EveElement::ALL, None, 400, 41);
        assert_eq!(full.cheat_success, 400);
        for dropped in EveElement::ALL {
            let available: Vec<EveElement> =
                EveElement::ALL.into_iter().filter(|e| *e != dropped).collect();
            let r = eve_set_inference(&g, &available, None, 2000, 43);
            let acc = r.posterior["accuracy"];
            assert!((0.44..=0.56).contains(&acc), "dropped {dropped:?}: {acc}");
            assert_eq!(r.posterior["mean_posterior_coset1"], 0.5);
        }
    }

    #[test]
    fn assembly_minimum_over_bob_controlled_region() {
        // Grid over everything outside the strip between Bob's strongholds,
        // plus the analytic candidates: the set can never be assembled
        // before 3d there, and the colocated agent brings the bound to 2d.
        let g = Geometry::default();
        let d = g.d();
        let sources = eve_set_sources(&g);
        let mut positions: Vec<f64> = vec![g.x_b, g.x_a, g.x_bp];
        let steps = (0..=60).map(|i| i as f64 * 0.05 * d);
        positions.extend(steps.clone().map(|s| g.x_b - s));
        positions.extend(steps.map(|s| g.x_bp + s));
        let min_outside = positions
            .iter()
            .filter(|&&p| p <= g.x_b || p >= g.x_bp)
            .map(|&p| earliest_assembly(&sources, p).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((min_outside - 3.0 * d).abs() <= 1e-9, "min {min_outside}");
        assert_eq!(earliest_assembly(&sources, g.x_a).unwrap(), 2.0 * d);
    }

    #[test]
    fn eve_assembly_gate() {
        let g = Geometry::default();
        assert_eq!(eve_set_assembly_time(&g), 3.0);
        let r = eve_set_inference(&g, &EveElement::ALL, Some(2.9), 10, 1);
        assert_eq!(r.assemblable, Some(false));
        assert_eq!(r.cheat_success, 0);
        let r = eve_set_inference(&g, &EveElement::ALL, Some(3.0), 10, 1);
        assert_eq!(r.assemblable, Some(true));
        assert_eq!(r.cheat_success, 10);

        let colocated = Geometry { colocated_bob_agent: true, ..Geometry::default() };
        assert_eq!(eve_set_assembly_time(&colocated), 2.0);
        let r = eve_set_inference(&colocated, &EveElement::ALL, Some(1.9), 10, 1);
        assert_eq!(r.assemblable, Some(false));
    }

    #[test]
    fn position_spoof_detection() {
        let g = Geometry::default();
        for offset in [0.3, -0.3] {
            let r = position_spoof(&g, offset, 100, 51).unwrap();
            assert_eq!(r.detected, 100, "offset {offset}");
        }
        let control = position_spoof(&g, 0.0, 100, 51).unwrap();
        assert_eq!(control.detected, 0);
    }

    #[test]
    fn no_deviation_strategies_reproduce_honest_transcripts() {
        let g = Geometry::default();
        for trial in 0..20u64 {
            let mut rng = trial_rng(77, trial);
            let inputs = random_inputs(&mut rng, BasisMode::Hadamard);
            let spec = engine::RunSpec::new(Protocol::Bc, inputs, &g);
            let honest = engine::run(&spec, &Deviations::honest(), &mut rng).unwrap();

            let mut rng = trial_rng(77, trial);
            let inputs2 = random_inputs(&mut rng, BasisMode::Hadamard);
            assert_eq!(inputs, inputs2);
            let dev =
                Deviations { alice_position_offset: Some(0.0), ..Deviations::default() };
            let spec = engine::RunSpec::new(Protocol::Bc, inputs2, &g);
            let spoofless = engine::run(&spec, &dev, &mut rng).unwrap();

            assert_eq!(
                serde_json::to_string(&honest).unwrap(),
                serde_json::to_string(&spoofless).unwrap()
            );
        }
    }
}
