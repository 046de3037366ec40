//! Run configuration: geometry files, flag resolution, and the resolved
//! config snapshot embedded in every report.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use relqc::adversary::{EveElement, Strategy};
use relqc::engine::{ForcedOutcomes, Protocol};
use relqc::pauli::{BasisMode, BellIndex, PauliOp};
use relqc::Geometry;

/// Configuration error naming the offending field.
#[derive(Debug)]
pub enum ConfigError {
    Field { field: &'static str, reason: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Field { field, reason } => {
                write!(f, "invalid config field `{field}`: {reason}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

fn field_err(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, reason: reason.into() }
}

/// Geometry file contents; omitted fields fall back to the desk-scale
/// defaults (sites at 0, d, 2d with t0 = d).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// Separation x_a − x_b; scales the whole default layout.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_bp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    /// Placement radius of Alice's receiver sites around x_a.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub receiver_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_sites: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_sites: Option<[f64; 2]>,
    #[serde(default)]
    pub colocated_bob_agent: bool,
}

impl GeometryConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| field_err("geometry", format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| field_err("geometry", format!("cannot parse {}: {e}", path.display())))
    }

    pub fn resolve(&self) -> Result<Geometry, ConfigError> {
        let base = Geometry::with_separation(self.d.unwrap_or(1.0));
        let x_b = self.x_b.unwrap_or(base.x_b);
        let x_a = self.x_a.unwrap_or(base.x_a);
        let x_bp = self.x_bp.unwrap_or(base.x_bp);
        let t0 = self.t0.unwrap_or(base.t0);
        let a_sites = match (self.a_sites, self.receiver_radius) {
            (Some(sites), _) => sites,
            (None, Some(r)) => [x_a - r, x_a + r],
            (None, None) => [x_a - (x_a - x_b) / 4.0, x_a + (x_a - x_b) / 4.0],
        };
        let b_sites = self.b_sites.unwrap_or([x_b, x_bp]);
        Geometry::new(x_b, x_a, x_bp, t0, a_sites, b_sites, self.colocated_bob_agent)
            .map_err(|e| field_err("geometry", e.to_string()))
    }
}

/// Fixed value or a fresh uniform draw per trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PauliChoice {
    Random,
    Fixed(PauliOp),
}

impl FromStr for PauliChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("random") {
            return Ok(PauliChoice::Random);
        }
        s.parse::<PauliOp>().map(PauliChoice::Fixed).map_err(|e| e.to_string())
    }
}

impl TryFrom<String> for PauliChoice {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PauliChoice> for String {
    fn from(c: PauliChoice) -> String {
        match c {
            PauliChoice::Random => "random".into(),
            PauliChoice::Fixed(p) => p.as_str().into(),
        }
    }
}

/// Fixed initial pair indices ("00,11") or fresh draws per trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PairsChoice {
    Random,
    Fixed(BellIndex, BellIndex),
}

impl FromStr for PairsChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("random") {
            return Ok(PairsChoice::Random);
        }
        let (l, r) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `LL,RR` or `random`, got {s:?}"))?;
        let left = l.trim().parse::<BellIndex>().map_err(|e| e.to_string())?;
        let right = r.trim().parse::<BellIndex>().map_err(|e| e.to_string())?;
        Ok(PairsChoice::Fixed(left, right))
    }
}

impl TryFrom<String> for PairsChoice {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PairsChoice> for String {
    fn from(c: PairsChoice) -> String {
        match c {
            PairsChoice::Random => "random".into(),
            PairsChoice::Fixed(l, r) => format!("{l},{r}"),
        }
    }
}

/// Carrier selector, validated against the basis mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CarrierChoice {
    Plus,
    Minus,
    Zero,
    One,
}

impl CarrierChoice {
    pub fn bit(self, basis: BasisMode) -> Result<bool, ConfigError> {
        match (basis, self) {
            (BasisMode::Hadamard, CarrierChoice::Plus) => Ok(false),
            (BasisMode::Hadamard, CarrierChoice::Minus) => Ok(true),
            (BasisMode::Computational, CarrierChoice::Zero) => Ok(false),
            (BasisMode::Computational, CarrierChoice::One) => Ok(true),
            _ => Err(field_err(
                "carrier",
                format!("carrier {self:?} does not exist in {basis:?} mode"),
            )),
        }
    }

    pub fn default_for(basis: BasisMode) -> Self {
        match basis {
            BasisMode::Hadamard => CarrierChoice::Plus,
            BasisMode::Computational => CarrierChoice::Zero,
        }
    }
}

impl FromStr for CarrierChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(CarrierChoice::Plus),
            "minus" | "-" => Ok(CarrierChoice::Minus),
            "zero" | "0" => Ok(CarrierChoice::Zero),
            "one" | "1" => Ok(CarrierChoice::One),
            _ => Err(format!("unknown carrier {s:?}")),
        }
    }
}

/// Fully resolved run configuration; serialized verbatim into reports so
/// they are self-describing.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedRunConfig {
    pub protocol: Protocol,
    pub basis: BasisMode,
    pub seed: u64,
    pub trials: u64,
    pub jobs: usize,
    pub sigma_a: PauliChoice,
    pub sigma_b: PauliChoice,
    pub pairs: PairsChoice,
    pub carrier: CarrierChoice,
    pub forced: ForcedOutcomes,
    pub geometry: Geometry,
}

/// Fully resolved attack configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedAttackConfig {
    pub strategy: String,
    pub seed: u64,
    pub trials: u64,
    pub geometry: Geometry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub available: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub desired_bit: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_coset: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub post_op: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at_time: Option<f64>,
    pub control: bool,
}

pub fn parse_eve_elements(spec: &str) -> Result<Vec<EveElement>, ConfigError> {
    spec.split(',')
        .map(|part| match part.trim() {
            "state_b" => Ok(EveElement::StateB),
            "state_psi" => Ok(EveElement::StatePsi),
            "alpha" => Ok(EveElement::Alpha),
            "beta" => Ok(EveElement::Beta),
            other => Err(field_err(
                "available",
                format!("unknown element {other:?} (expected state_b, state_psi, alpha, beta)"),
            )),
        })
        .collect()
}

/// Build the strategy from the resolved attack config. The `offset` field is
/// given in units of the separation d.
pub fn build_strategy(cfg: &ResolvedAttackConfig) -> Result<Strategy, ConfigError> {
    let d = cfg.geometry.d();
    match cfg.strategy.as_str() {
        "input-alteration" => Ok(Strategy::InputAlteration {
            target_coset: cfg.target_coset.unwrap_or(1) != 0,
            same_coset_control: cfg.control,
        }),
        "wrong-basis" => Ok(Strategy::WrongBasis { control: cfg.control }),
        "mlc-delayed-alice" => Ok(Strategy::MlcDelayedAlice {
            desired_bit: cfg.desired_bit.unwrap_or(1) != 0,
        }),
        "entangled-bprime" => {
            let post_op = match &cfg.post_op {
                Some(s) => Some(
                    s.parse::<PauliOp>()
                        .map_err(|e| field_err("post_op", e.to_string()))?,
                ),
                None => None,
            };
            Ok(Strategy::EntangledBprime {
                lambda0: cfg.lambda0.unwrap_or(std::f64::consts::FRAC_1_SQRT_2),
                post_op,
            })
        }
        "eve-set" => {
            let available = match &cfg.available {
                Some(names) => parse_eve_elements(&names.join(","))?,
                None => EveElement::ALL.to_vec(),
            };
            Ok(Strategy::EveSetInference { available, at_time: cfg.at_time })
        }
        "position-spoof" => {
            let offset = cfg
                .offset
                .ok_or_else(|| field_err("offset", "position-spoof requires --offset"))?;
            Ok(Strategy::PositionSpoof { offset: offset * d })
        }
        other => Err(field_err(
            "strategy",
            format!(
                "unknown strategy {other:?} (expected input-alteration, wrong-basis, \
                 mlc-delayed-alice, entangled-bprime, eve-set or position-spoof)"
            ),
        )),
    }
}
