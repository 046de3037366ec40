//! Dense state-vector simulator used as the independent ground-truth engine.
//!
//! Registers stay small (at most ~8 qubits: five for the honest protocol plus
//! adversarial ancillas), so states are plain dense vectors and every gate is
//! the naive O(2^n) sweep. Qubit 0 is the most significant position in
//! amplitude indexing. Measurements are Bell-basis or single-qubit projective
//! measurements with Born-rule sampling; an optional forced outcome projects
//! onto a chosen branch and reports its probability, which is how the table
//! conformance suites enumerate every branch without sampling.
//!
//! States are compared by fidelity |⟨a|b⟩|, never amplitude-wise: the global
//! phase is not an observable and the Pauli bookkeeping elsewhere in the
//! crate discards it.

use num_complex::Complex;
use rand::Rng;
use sha2::{Digest, Sha256};

use crate::pauli::{BasisMode, BellIndex, PauliOp};
use crate::scalar::Scalar;

#[derive(Debug, Clone, thiserror::Error)]
pub enum OracleError {
    #[error("qubit index {index} out of range for a {qubits}-qubit register")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("measurement qubits must be distinct (got {0})")]
    DuplicateQubit(usize),
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("forced outcome {outcome} lies on a zero-probability branch")]
    ZeroProbabilityBranch { outcome: String },
    #[error("register does not factorize at qubit {qubit}")]
    NotSeparable { qubit: usize },
}

/// Amplitudes of a single qubit, |0⟩ component first.
pub type QubitAmps<T> = [Complex<T>; 2];

/// Normalized pure state of an n-qubit register.
///
/// Qubit 0 is the most significant bit of the amplitude index.
#[derive(Debug, Clone)]
pub struct StateVector<T: Scalar> {
    amps: Vec<Complex<T>>,
    qubits: usize,
}

/// Outcome of a projective measurement: the sampled (or forced) branch, its
/// Born-rule probability, and the renormalized post-measurement state.
#[derive(Debug, Clone)]
pub struct MeasurementRecord<T: Scalar> {
    pub outcome: BellIndex,
    pub probability: T,
    pub post_state: StateVector<T>,
}

fn half_sqrt2<T: Scalar>() -> T {
    T::from_f64_exact(std::f64::consts::FRAC_1_SQRT_2)
}

/// Amplitude of basis state |b1 b2⟩ in the Bell state labeled `k`.
pub fn bell_amplitude<T: Scalar>(k: BellIndex, b1: bool, b2: bool) -> Complex<T> {
    bell_coeff(k, b1, b2)
}

fn bell_coeff<T: Scalar>(k: BellIndex, b1: bool, b2: bool) -> Complex<T> {
    let r = half_sqrt2::<T>();
    if !b1 && b2 == k.n {
        Complex::new(r, T::zero())
    } else if b1 && b2 != k.n {
        let sign = if k.m { -r } else { r };
        Complex::new(sign, T::zero())
    } else {
        Complex::new(T::zero(), T::zero())
    }
}

impl<T: Scalar> StateVector<T> {
    /// Computational basis state |idx⟩ of an n-qubit register.
    pub fn basis(qubits: usize, idx: usize) -> Self {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << qubits];
        amps[idx] = Complex::new(T::one(), T::zero());
        StateVector { amps, qubits }
    }

    /// Single-qubit state from its two amplitudes (renormalized).
    pub fn single(amps: QubitAmps<T>) -> Self {
        let mut s = StateVector { amps: amps.to_vec(), qubits: 1 };
        s.renormalize();
        s
    }

    /// State from raw amplitudes (renormalized). Panics when the length is
    /// not 2^qubits.
    pub fn from_amplitudes(amps: Vec<Complex<T>>, qubits: usize) -> Self {
        assert_eq!(amps.len(), 1 << qubits, "amplitude vector length");
        let mut s = StateVector { amps, qubits };
        s.renormalize();
        s
    }

    /// Bell state |m n⟩ = (|0⟩|n⟩ + (−1)^m |1⟩|1⊕n⟩)/√2.
    pub fn bell(idx: BellIndex) -> Self {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 4];
        for b1 in [false, true] {
            for b2 in [false, true] {
                amps[(b1 as usize) << 1 | b2 as usize] = bell_coeff(idx, b1, b2);
            }
        }
        StateVector { amps, qubits: 2 }
    }

    /// Tensor product, `self` occupying the most significant qubits.
    pub fn tensor(&self, other: &StateVector<T>) -> Self {
        let dim_other = other.amps.len();
        let mut amps = Vec::with_capacity(self.amps.len() * dim_other);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector { amps, qubits: self.qubits + other.qubits }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
            .sqrt()
    }

    fn renormalize(&mut self) {
        let n = self.norm();
        for a in &mut self.amps {
            *a = Complex::new(a.re / n, a.im / n);
        }
    }

    fn check_qubit(&self, q: usize) -> Result<(), OracleError> {
        if q >= self.qubits {
            return Err(OracleError::QubitOutOfRange { index: q, qubits: self.qubits });
        }
        Ok(())
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.qubits - 1 - q)
    }

    /// Apply σ_z^z σ_x^x on `target` (σ_x first, then σ_z).
    pub fn apply_pauli(&mut self, target: usize, p: PauliOp) -> Result<(), OracleError> {
        self.check_qubit(target)?;
        let mask = self.mask(target);
        if p.x {
            for i in 0..self.amps.len() {
                if i & mask == 0 {
                    self.amps.swap(i, i | mask);
                }
            }
        }
        if p.z {
            for i in 0..self.amps.len() {
                if i & mask != 0 {
                    self.amps[i] = -self.amps[i];
                }
            }
        }
        Ok(())
    }

    /// |⟨self|other⟩| — phase-insensitive overlap.
    pub fn fidelity(&self, other: &StateVector<T>) -> Result<T, OracleError> {
        if self.qubits != other.qubits {
            return Err(OracleError::DimensionMismatch {
                left: self.qubits,
                right: other.qubits,
            });
        }
        let mut dot = Complex::new(T::zero(), T::zero());
        for (a, b) in self.amps.iter().zip(&other.amps) {
            dot = dot + a.conj() * b;
        }
        Ok(dot.norm())
    }

    /// Born probabilities of the four Bell outcomes on (q1, q2), computed
    /// analytically (no sampling).
    pub fn bell_probabilities(&self, q1: usize, q2: usize) -> Result<[T; 4], OracleError> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(OracleError::DuplicateQubit(q1));
        }
        let mut probs = [T::zero(); 4];
        for (k, prob) in probs.iter_mut().enumerate() {
            let outcome = BellIndex::from_ordinal(k);
            *prob = self.project_bell(q1, q2, outcome).0;
        }
        Ok(probs)
    }

    /// Probability and unnormalized projected amplitudes for one Bell branch.
    fn project_bell(&self, q1: usize, q2: usize, k: BellIndex) -> (T, Vec<Complex<T>>) {
        let m1 = self.mask(q1);
        let m2 = self.mask(q2);
        let mut projected = vec![Complex::new(T::zero(), T::zero()); self.amps.len()];
        let mut prob = T::zero();
        for i in 0..self.amps.len() {
            if i & m1 != 0 || i & m2 != 0 {
                continue;
            }
            // i has zeros at q1, q2; scan the four joint settings.
            let mut inner = Complex::new(T::zero(), T::zero());
            for b1 in [false, true] {
                for b2 in [false, true] {
                    let j = i | if b1 { m1 } else { 0 } | if b2 { m2 } else { 0 };
                    inner = inner + bell_coeff::<T>(k, b1, b2).conj() * self.amps[j];
                }
            }
            prob = prob + inner.norm_sqr();
            for b1 in [false, true] {
                for b2 in [false, true] {
                    let j = i | if b1 { m1 } else { 0 } | if b2 { m2 } else { 0 };
                    projected[j] = bell_coeff::<T>(k, b1, b2) * inner;
                }
            }
        }
        (prob, projected)
    }

    /// Bell-state measurement on (q1, q2).
    ///
    /// With `forced` set, projects onto that branch (erroring if it has zero
    /// probability); otherwise samples by the Born rule from `rng`.
    pub fn bell_measure<R: Rng>(
        &self,
        q1: usize,
        q2: usize,
        rng: &mut R,
        forced: Option<BellIndex>,
    ) -> Result<MeasurementRecord<T>, OracleError> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(OracleError::DuplicateQubit(q1));
        }
        let outcome = match forced {
            Some(k) => k,
            None => {
                let probs = self.bell_probabilities(q1, q2)?;
                sample_index(&probs, rng).map(BellIndex::from_ordinal).ok_or(
                    OracleError::ZeroProbabilityBranch { outcome: "sampled".into() },
                )?
            }
        };
        let (prob, projected) = self.project_bell(q1, q2, outcome);
        if prob <= T::tolerance() * T::tolerance() {
            return Err(OracleError::ZeroProbabilityBranch { outcome: outcome.to_string() });
        }
        let mut post = StateVector { amps: projected, qubits: self.qubits };
        post.renormalize();
        Ok(MeasurementRecord { outcome, probability: prob, post_state: post })
    }

    /// Teleportation step: Bell-measure (source, pair.0); the encoded state
    /// lands on pair.1 with its correction Pauli still in place.
    pub fn teleport<R: Rng>(
        &self,
        source: usize,
        pair: (usize, usize),
        rng: &mut R,
        forced: Option<BellIndex>,
    ) -> Result<(MeasurementRecord<T>, StateVector<T>), OracleError> {
        let record = self.bell_measure(source, pair.0, rng, forced)?;
        let post = record.post_state.clone();
        Ok((record, post))
    }

    /// Projective measurement of qubit `q` in an orthonormal single-qubit
    /// basis. Returns (outcome index, probability, post state).
    pub fn measure_in_basis<R: Rng>(
        &self,
        q: usize,
        basis: &[QubitAmps<T>; 2],
        rng: &mut R,
        forced: Option<usize>,
    ) -> Result<(usize, T, StateVector<T>), OracleError> {
        self.check_qubit(q)?;
        let project = |which: usize| -> (T, Vec<Complex<T>>) {
            let [c0, c1] = basis[which];
            let mask = self.mask(q);
            let mut projected = vec![Complex::new(T::zero(), T::zero()); self.amps.len()];
            let mut prob = T::zero();
            for i in 0..self.amps.len() {
                if i & mask != 0 {
                    continue;
                }
                let inner = c0.conj() * self.amps[i] + c1.conj() * self.amps[i | mask];
                prob = prob + inner.norm_sqr();
                projected[i] = c0 * inner;
                projected[i | mask] = c1 * inner;
            }
            (prob, projected)
        };
        let outcome = match forced {
            Some(o) => o,
            None => {
                let probs = [project(0).0, project(1).0];
                sample_index(&probs, rng)
                    .ok_or(OracleError::ZeroProbabilityBranch { outcome: "sampled".into() })?
            }
        };
        let (prob, projected) = project(outcome);
        if prob <= T::tolerance() * T::tolerance() {
            return Err(OracleError::ZeroProbabilityBranch { outcome: outcome.to_string() });
        }
        let mut post = StateVector { amps: projected, qubits: self.qubits };
        post.renormalize();
        Ok((outcome, prob, post))
    }

    /// Pure state of qubit `q`, when the register factorizes there.
    pub fn extract_qubit(&self, q: usize) -> Result<QubitAmps<T>, OracleError> {
        self.check_qubit(q)?;
        let mask = self.mask(q);
        let tol = T::tolerance();
        // Gather the two amplitude slices conditioned on the qubit's value.
        let mut v0 = Vec::with_capacity(self.amps.len() / 2);
        let mut v1 = Vec::with_capacity(self.amps.len() / 2);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                v0.push(self.amps[i]);
                v1.push(self.amps[i | mask]);
            }
        }
        let n0 = v0.iter().fold(T::zero(), |a, c| a + c.norm_sqr()).sqrt();
        let n1 = v1.iter().fold(T::zero(), |a, c| a + c.norm_sqr()).sqrt();
        if n1 <= tol {
            return Ok([Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero())]);
        }
        if n0 <= tol {
            return Ok([Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero())]);
        }
        // Separable iff v1 is a complex multiple of v0.
        let pivot = v0
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let ratio = v1[pivot] / v0[pivot];
        for (a, b) in v0.iter().zip(&v1) {
            let diff = *b - a * ratio;
            if diff.norm() > tol * T::from_f64_exact(10.0) {
                return Err(OracleError::NotSeparable { qubit: q });
            }
        }
        let amp0 = Complex::new(n0, T::zero());
        let amp1 = ratio * n0;
        let mut out = StateVector::single([amp0, amp1]);
        out.renormalize();
        Ok([out.amps[0], out.amps[1]])
    }

    /// Hex digest of the state modulo global phase, for transcript payloads.
    ///
    /// The phase is fixed by rotating the largest-magnitude amplitude onto
    /// the positive real axis; amplitudes are then rounded to 1e-9.
    pub fn canonical_digest(&self) -> String {
        let pivot = self
            .amps
            .iter()
            .max_by(|a, b| a.norm_sqr().partial_cmp(&b.norm_sqr()).unwrap())
            .copied()
            .unwrap();
        let phase = pivot / Complex::new(pivot.norm(), T::zero());
        let mut hasher = Sha256::new();
        for a in &self.amps {
            let fixed = a * phase.conj();
            let re = (fixed.re.to_f64().unwrap() * 1e9).round() / 1e9;
            let im = (fixed.im.to_f64().unwrap() * 1e9).round() / 1e9;
            // Avoid the -0.0 / 0.0 split in the hash input.
            hasher.update(format!("{:.9};{:.9},", re + 0.0, im + 0.0));
        }
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Single-qubit states for the two basis modes: index 0 ↦ |+⟩ or |0⟩,
/// index 1 ↦ |−⟩ or |1⟩.
pub fn carrier_amps<T: Scalar>(mode: BasisMode, bit: bool) -> QubitAmps<T> {
    let r = half_sqrt2::<T>();
    let zero = T::zero();
    match (mode, bit) {
        (BasisMode::Hadamard, false) => [Complex::new(r, zero), Complex::new(r, zero)],
        (BasisMode::Hadamard, true) => [Complex::new(r, zero), Complex::new(-r, zero)],
        (BasisMode::Computational, false) => {
            [Complex::new(T::one(), zero), Complex::new(zero, zero)]
        }
        (BasisMode::Computational, true) => {
            [Complex::new(zero, zero), Complex::new(T::one(), zero)]
        }
    }
}

/// The measurement basis matching a basis mode, as two single-qubit states.
pub fn mode_basis<T: Scalar>(mode: BasisMode) -> [QubitAmps<T>; 2] {
    [carrier_amps(mode, false), carrier_amps(mode, true)]
}

/// Single-qubit state σ_p |carrier⟩ as an owned state vector.
pub fn pauli_on_carrier<T: Scalar>(p: PauliOp, mode: BasisMode, bit: bool) -> StateVector<T> {
    let mut s = StateVector::single(carrier_amps(mode, bit));
    s.apply_pauli(0, p).expect("single qubit");
    s
}

fn sample_index<T: Scalar, R: Rng>(probs: &[T], rng: &mut R) -> Option<usize> {
    let draw: f64 = rng.gen::<f64>();
    let mut acc = 0.0;
    let mut last_nonzero = None;
    for (i, p) in probs.iter().enumerate() {
        let p = p.to_f64().unwrap();
        if p > 0.0 {
            last_nonzero = Some(i);
        }
        acc += p;
        if draw < acc {
            return Some(i);
        }
    }
    // Rounding can leave acc marginally below 1; fall back to the last
    // branch with support.
    last_nonzero
}
