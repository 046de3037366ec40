//! 1+1-dimensional Minkowski geometry with c = 1: interval classification,
//! light-speed transit, strict light-like arrival windows, and the
//! earliest-assembly computation behind the protocol's timing bounds.
//!
//! All checks live in a single fixed inertial frame. Arrival verification is
//! strict: a message must be exactly light-like separated from its claimed
//! emission event (processing time at secure sites is idealized to zero), so
//! both early and late arrivals are violations.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, thiserror::Error)]
pub enum GeometryError {
    #[error("earliest_assembly requires at least one source event")]
    EmptySources,
    #[error("geometry field {field} is invalid: {reason}")]
    Invalid { field: &'static str, reason: String },
}

/// A point in 1+1D Minkowski space (position, time), c = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeEvent<T> {
    pub x: T,
    pub t: T,
}

impl<T> SpacetimeEvent<T> {
    pub fn new(x: T, t: T) -> Self {
        SpacetimeEvent { x, t }
    }
}

/// Causal character of the interval between two events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Separation {
    Timelike,
    Lightlike,
    Spacelike,
}

/// Sign of (Δt)² − (Δx)². Exact on the binary-fraction coordinates used in
/// configurations.
pub fn classify<T: Scalar>(e1: SpacetimeEvent<T>, e2: SpacetimeEvent<T>) -> Separation {
    let dt = e2.t - e1.t;
    let dx = e2.x - e1.x;
    let interval = dt * dt - dx * dx;
    if interval > T::zero() {
        Separation::Timelike
    } else if interval < T::zero() {
        Separation::Spacelike
    } else {
        Separation::Lightlike
    }
}

/// Light-speed transit time between two positions.
pub fn transit_time<T: Scalar>(from: T, to: T) -> T {
    (to - from).abs()
}

/// Earliest time at which information from every source event can be
/// co-located at position `at`: max over sources of (t + |at − x|).
pub fn earliest_assembly<T: Scalar>(
    sources: &[SpacetimeEvent<T>],
    at: T,
) -> Result<T, GeometryError> {
    sources
        .iter()
        .map(|s| s.t + (at - s.x).abs())
        .fold(None, |acc: Option<T>, t| Some(acc.map_or(t, |a| a.max(t))))
        .ok_or(GeometryError::EmptySources)
}

/// True iff `arrival` is exactly light-like from the claimed emission event,
/// within tolerance.
pub fn within_window<T: Scalar>(
    arrival: SpacetimeEvent<T>,
    sender_claim: SpacetimeEvent<T>,
) -> bool {
    let expected = sender_claim.t + transit_time(sender_claim.x, arrival.x);
    (arrival.t - expected).abs() <= T::tolerance()
}

/// Protocol geometry: the three principal sites, the receiver drop sites,
/// and the input time.
///
/// Invariants: x_b < x_a < x_bp with x_a the midpoint. Receiver sites for
/// Alice's agents default to x_a ± r; Bob's drop sites default to his own
/// strongholds x_b and x_bp, which both sit at light distance d from Alice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry<T> {
    pub x_b: T,
    pub x_a: T,
    pub x_bp: T,
    /// Input time t0 (both parties act simultaneously at t0).
    pub t0: T,
    /// Positions of Alice's receiving agents A_1, A_2.
    pub a_sites: [T; 2],
    /// Positions of Bob's receiving agents B_1, B_2.
    pub b_sites: [T; 2],
    /// Extra Bob agent at a disjoint site adjacent to x_a.
    pub colocated_bob_agent: bool,
}

impl<T: Scalar> Geometry<T> {
    pub fn new(
        x_b: T,
        x_a: T,
        x_bp: T,
        t0: T,
        a_sites: [T; 2],
        b_sites: [T; 2],
        colocated_bob_agent: bool,
    ) -> Result<Self, GeometryError> {
        if !(x_b < x_a && x_a < x_bp) {
            return Err(GeometryError::Invalid {
                field: "x_a",
                reason: format!("require x_b < x_a < x_bp, got {x_b} / {x_a} / {x_bp}"),
            });
        }
        let midpoint_gap = (x_a + x_a) - (x_b + x_bp);
        if midpoint_gap.abs() > T::tolerance() {
            return Err(GeometryError::Invalid {
                field: "x_a",
                reason: format!("x_a must be the midpoint of x_b and x_bp, off by {midpoint_gap}"),
            });
        }
        if t0 <= T::zero() {
            return Err(GeometryError::Invalid {
                field: "t0",
                reason: format!("t0 must be positive, got {t0}"),
            });
        }
        Ok(Geometry { x_b, x_a, x_bp, t0, a_sites, b_sites, colocated_bob_agent })
    }

    /// Desk-scale default with separation d: sites at 0, d, 2d; t0 = d;
    /// Alice's receivers at x_a ± d/4; Bob's receivers at x_b and x_bp.
    pub fn with_separation(d: T) -> Self {
        let zero = T::zero();
        let r = d / T::from_f64_exact(4.0);
        Geometry {
            x_b: zero,
            x_a: d,
            x_bp: d + d,
            t0: d,
            a_sites: [d - r, d + r],
            b_sites: [zero, d + d],
            colocated_bob_agent: false,
        }
    }

    /// Separation d = x_a − x_b.
    pub fn d(&self) -> T {
        self.x_a - self.x_b
    }

    /// The position where Bob's verdict is adjudicated: the colocated agent
    /// next to Alice when enabled, otherwise the drawn drop site.
    pub fn bob_verdict_site(&self, drawn: usize) -> T {
        if self.colocated_bob_agent {
            self.x_a
        } else {
            self.b_sites[drawn]
        }
    }
}

impl Default for Geometry<f64> {
    fn default() -> Self {
        Geometry::with_separation(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Ev = SpacetimeEvent<f64>;

    #[test]
    fn classify_examples() {
        assert_eq!(classify(Ev::new(0.0, 0.0), Ev::new(0.0, 5.0)), Separation::Timelike);
        assert_eq!(classify(Ev::new(0.0, 0.0), Ev::new(3.0, 3.0)), Separation::Lightlike);
        let g = Geometry::<f64>::default();
        assert_eq!(
            classify(Ev::new(g.x_b, g.t0), Ev::new(g.x_bp, g.t0)),
            Separation::Spacelike
        );
    }

    #[test]
    fn classify_is_symmetric() {
        let events = [
            Ev::new(0.0, 0.0),
            Ev::new(1.5, 0.25),
            Ev::new(-2.0, 3.0),
            Ev::new(4.0, 4.0),
        ];
        for a in events {
            for b in events {
                assert_eq!(classify(a, b), classify(b, a));
            }
        }
    }

    #[test]
    fn transit_examples() {
        let g = Geometry::<f64>::default();
        assert_eq!(transit_time(g.x_b, g.x_a), g.d());
        assert_eq!(transit_time(2.5, 2.5), 0.0);
        assert_eq!(transit_time(g.x_b, g.x_bp), 2.0 * g.d());
    }

    #[test]
    fn assembly_examples() {
        assert_eq!(
            earliest_assembly(&[Ev::new(0.0, 0.0)], 0.0).unwrap(),
            0.0
        );
        assert!(matches!(
            earliest_assembly::<f64>(&[], 0.0),
            Err(GeometryError::EmptySources)
        ));
        // Assembly is never earlier than the latest source time, with
        // equality only when every source already sits at the target.
        let sources = [Ev::new(0.0, 1.0), Ev::new(2.0, 1.0), Ev::new(1.0, 1.0)];
        let t = earliest_assembly(&sources, 1.0).unwrap();
        assert!(t >= 1.0);
        assert_eq!(t, 2.0);
        let colocated = [Ev::new(1.0, 0.5), Ev::new(1.0, 0.75)];
        assert_eq!(earliest_assembly(&colocated, 1.0).unwrap(), 0.75);
    }

    #[test]
    fn window_examples() {
        let d = 1.0;
        let claim = Ev::new(1.0, d);
        assert!(within_window(Ev::new(0.0, 2.0 * d), claim));
        assert!(!within_window(Ev::new(0.0, 1.5 * d), claim)); // superluminal
        assert!(!within_window(Ev::new(0.0, 2.5 * d), claim)); // late
    }

    #[test]
    fn window_implies_lightlike() {
        // Exact binary-fraction coordinates stay exact in f64.
        for dx in [0.25, 0.5, 1.0, 2.75] {
            let claim = Ev::new(0.5, 0.25);
            let arrival = Ev::new(0.5 + dx, 0.25 + dx);
            assert!(within_window(arrival, claim));
            assert_eq!(classify(claim, arrival), Separation::Lightlike);
        }
    }

    #[test]
    fn geometry_validation() {
        assert!(Geometry::new(0.0, 1.0, 2.0, 1.0, [0.75, 1.25], [0.0, 2.0], false).is_ok());
        assert!(Geometry::new(1.0, 0.5, 2.0, 1.0, [0.75, 1.25], [0.0, 2.0], false).is_err());
        assert!(Geometry::new(0.0, 1.5, 2.0, 1.0, [0.75, 1.25], [0.0, 2.0], false).is_err());
        assert!(Geometry::new(0.0, 1.0, 2.0, 0.0, [0.75, 1.25], [0.0, 2.0], false).is_err());
    }

    #[test]
    fn default_geometry_shape() {
        let g = Geometry::<f64>::default();
        assert_eq!((g.x_b, g.x_a, g.x_bp, g.t0), (0.0, 1.0, 2.0, 1.0));
        assert_eq!(g.a_sites, [0.75, 1.25]);
        assert_eq!(g.b_sites, [0.0, 2.0]);
        assert_eq!(g.d(), 1.0);
    }
}
