//! Two-level population dynamics driven by the transition rates: exact
//! rate-equation evolution, steady-state inversion, and a seeded
//! stochastic jump simulator.
//!
//! The rates define a classical two-state Markov process; there is no
//! coherent dynamics here.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of the random number generator algorithm, recorded in
/// every trajectory so independent reimplementations can document their
/// own streams.
pub const RNG_ALGORITHM: &str = "chacha12";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationState {
    pub p_ground: f64,
    pub p_excited: f64,
    pub time: f64,
}

impl PopulationState {
    pub fn new(p_excited: f64, time: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_excited) {
            return Err(Error::InvalidSpec(format!(
                "p_excited must lie in [0, 1], got {p_excited}"
            )));
        }
        Ok(PopulationState {
            p_ground: 1.0 - p_excited,
            p_excited,
            time,
        })
    }

    /// Fully de-excited state at t = 0.
    pub fn ground() -> Self {
        PopulationState {
            p_ground: 1.0,
            p_excited: 0.0,
            time: 0.0,
        }
    }
}

/// Transition-count statistics of a single stochastic trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStats {
    pub n_up: u64,
    pub n_down: u64,
    pub duration: f64,
    /// Fraction of the duration spent in the excited state.
    pub excited_fraction: f64,
    pub seed: u64,
    pub rng_algorithm: String,
}

fn check_rates(gamma_up: f64, gamma_down: f64) -> Result<()> {
    if gamma_up < 0.0 || gamma_down < 0.0 || !gamma_up.is_finite() || !gamma_down.is_finite() {
        return Err(Error::InvalidSpec(format!(
            "rates must be finite and non-negative, got gamma_up = {gamma_up}, gamma_down = {gamma_down}"
        )));
    }
    if gamma_up == 0.0 && gamma_down == 0.0 {
        return Err(Error::BothRatesZero);
    }
    Ok(())
}

/// Steady-state populations: p_excited = Γ↑ / (Γ↑ + Γ↓).
pub fn steady_state(gamma_up: f64, gamma_down: f64) -> Result<PopulationState> {
    check_rates(gamma_up, gamma_down)?;
    PopulationState::new(gamma_up / (gamma_up + gamma_down), f64::INFINITY)
}

/// Exact rate-equation evolution:
/// p_e(t) = p* + (p_e(0) − p*) · exp(−(Γ↑ + Γ↓) t).
pub fn evolve(
    initial: &PopulationState,
    gamma_up: f64,
    gamma_down: f64,
    t: f64,
) -> Result<PopulationState> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    check_rates(gamma_up, gamma_down)?;
    let total = gamma_up + gamma_down;
    let p_star = gamma_up / total;
    let p_excited = p_star + (initial.p_excited - p_star) * (-total * t).exp();
    PopulationState::new(p_excited.clamp(0.0, 1.0), initial.time + t)
}

/// Simulates a single jump trajectory starting from the ground state.
///
/// Waiting times are exponential with mean 1/Γ↑ in the ground state and
/// 1/Γ↓ in the excited state. Deterministic for a given seed.
pub fn simulate_jumps(
    gamma_up: f64,
    gamma_down: f64,
    duration: f64,
    seed: u64,
) -> Result<TrajectoryStats> {
    if !(duration > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "duration must be positive, got {duration}"
        )));
    }
    check_rates(gamma_up, gamma_down)?;

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut excited = false;
    let mut t = 0.0f64;
    let mut excited_time = 0.0f64;
    let mut n_up = 0u64;
    let mut n_down = 0u64;

    loop {
        let rate = if excited { gamma_down } else { gamma_up };
        if rate == 0.0 {
            // absorbing: the atom stays in this state forever
            if excited {
                excited_time += duration - t;
            }
            break;
        }
        let wait = Exp::new(rate).expect("rate is positive").sample(&mut rng);
        if t + wait >= duration {
            if excited {
                excited_time += duration - t;
            }
            break;
        }
        t += wait;
        if excited {
            excited_time += wait;
            n_down += 1;
        } else {
            n_up += 1;
        }
        excited = !excited;
    }

    Ok(TrajectoryStats {
        n_up,
        n_down,
        duration,
        excited_fraction: excited_time / duration,
        seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
    })
}
