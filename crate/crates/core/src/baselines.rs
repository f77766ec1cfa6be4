//! Reference detectors: a clairvoyant oracle, a trust-oblivious fusion center
//! and a reputation filter that drops robots which keep disagreeing with the
//! fused decision.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{check_len, Decision, NetworkObservation, SensorModel};
use crate::scalar::Real;
use crate::two_stage::fuse_trusted;

/// Fuses only the truly legitimate robots. Needs ground truth, so it is a
/// lower reference for the other detectors rather than a usable detector.
pub fn oracle_decide<T: Real>(obs: &NetworkObservation, sensor: &SensorModel<T>) -> Result<Decision<T>> {
    fuse_trusted(&obs.y, &obs.truth_t, sensor)
}

/// Fuses every report as if all robots were legitimate.
pub fn oblivious_decide<T: Real>(y: &[bool], sensor: &SensorModel<T>) -> Result<Decision<T>> {
    fuse_trusted(y, &vec![true; y.len()], sensor)
}

/// Per-robot record of the last `window` disagreements with the fused decision.
///
/// A robot is ignored while its disagreement count is at least `eta`. With
/// `(window, eta) = (1, 0.5)` a single disagreement in the previous test
/// excludes it; with `(5, 2.5)` three out of the last five do.
#[derive(Debug, Clone, PartialEq)]
pub struct ReputationState<T> {
    window: usize,
    eta: T,
    history: Vec<VecDeque<bool>>,
}

impl<T: Real> ReputationState<T> {
    pub fn new(n: usize, window: usize, eta: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyNetwork);
        }
        if window == 0 {
            return Err(Error::Domain("reputation window must be positive".into()));
        }
        if !(eta > T::zero() && eta < T::from_count(window)) {
            return Err(Error::OutOfRange {
                name: "eta",
                value: eta.as_f64(),
                range: "(0, window)",
            });
        }
        Ok(Self {
            window,
            eta,
            history: vec![VecDeque::with_capacity(window); n],
        })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn disagreements(&self, robot: usize) -> usize {
        self.history[robot].iter().filter(|&&d| d).count()
    }

    /// Robots currently admitted to fusion.
    pub fn admitted(&self) -> Vec<bool> {
        (0..self.history.len())
            .map(|i| T::from_count(self.disagreements(i)) < self.eta)
            .collect()
    }

    /// Fuses the admitted robots, then records for every robot whether its
    /// report disagreed with the decision.
    pub fn decide(&mut self, y: &[bool], sensor: &SensorModel<T>) -> Result<Decision<T>> {
        check_len("reports vs reputation state", y.len(), self.history.len())?;
        let decision = fuse_trusted(y, &self.admitted(), sensor)?;
        let verdict = decision.hypothesis.bit();
        for (h, &yi) in self.history.iter_mut().zip(y) {
            if h.len() == self.window {
                h.pop_front();
            }
            h.push_back(yi != verdict);
        }
        Ok(decision)
    }
}

/// Functional form of [`ReputationState::decide`].
pub fn reputation_update_and_decide<T: Real>(
    y: &[bool],
    mut state: ReputationState<T>,
    sensor: &SensorModel<T>,
) -> Result<(Decision<T>, ReputationState<T>)> {
    let d = state.decide(y, sensor)?;
    Ok((d, state))
}
