//! The unified rate calculator. The atom-field interaction decomposes
//! into a small set of spectral channels; each transition rate is the sum
//! of channel amplitude × environment response over the active channels.
//!
//! Channel table (leading order in RΩ/c):
//!
//! | label            | direction  | frequency   | amplitude                              | active     |
//! |------------------|------------|-------------|----------------------------------------|------------|
//! | Z_RESONANT       | emission   | ω₀          | ω₀ d_z²/(3ε₀ħ)                         | always     |
//! | TRANSVERSE_PLUS  | emission   | ω₀+Ω        | (ω₀+Ω)(d_ρ²+d_φ²)/(6ε₀ħ)               | always     |
//! | TRANSVERSE_MINUS | emission   | ω₀−Ω        | (ω₀−Ω)(d_ρ²+d_φ²)/(6ε₀ħ)               | Ω < ω₀     |
//! | COUNTER_ROTATING | excitation | Ω−ω₀        | (Ω−ω₀)(d_ρ²+d_φ²)/(6ε₀ħ)               | Ω > ω₀     |
//! | SECOND_HARMONIC  | excitation | 2Ω−ω₀       | R²(2Ω−ω₀)³(d_ρ²+d_φ²)/(40c²ε₀ħ)        | Ω > ω₀/2   |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phys::{response, AtomSpec, CavitySpec, Constants, Environment, MotionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelLabel {
    ZResonant,
    TransversePlus,
    TransverseMinus,
    CounterRotating,
    SecondHarmonic,
}

impl ChannelLabel {
    pub const ALL: [ChannelLabel; 5] = [
        ChannelLabel::ZResonant,
        ChannelLabel::TransversePlus,
        ChannelLabel::TransverseMinus,
        ChannelLabel::CounterRotating,
        ChannelLabel::SecondHarmonic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelLabel::ZResonant => "z_resonant",
            ChannelLabel::TransversePlus => "transverse_plus",
            ChannelLabel::TransverseMinus => "transverse_minus",
            ChannelLabel::CounterRotating => "counter_rotating",
            ChannelLabel::SecondHarmonic => "second_harmonic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Emission,
    Excitation,
}

/// One spectral transition pathway.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub label: ChannelLabel,
    pub direction: Direction,
    /// Lab-frame frequency of the pathway (rad/s), strictly positive.
    pub frequency: f64,
    /// Spectral weight (m³/s²); contribution = amplitude × response.
    pub amplitude: f64,
    /// Order in RΩ/c: 0 for the dipole channels, 2 for the second harmonic.
    pub velocity_order: u8,
}

/// Validity diagnostics attached to a rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Diagnostic {
    /// RΩ/c > 0.1: the non-relativistic expansion is strained.
    NonRelativisticStrained,
    /// Q < 100: the Lorentzian single-mode model assumes Q >> 1.
    LowQ,
    /// Ω <= ω₀/2: the true excitation rate is of order (RΩ/c)⁴ and is
    /// reported as zero.
    BelowLeadingOrder,
    /// Two channel frequencies lie within 3 cavity linewidths.
    PeakOverlap,
}

impl Diagnostic {
    pub fn as_str(&self) -> &'static str {
        match self {
            Diagnostic::NonRelativisticStrained => "non_relativistic_strained",
            Diagnostic::LowQ => "low_q",
            Diagnostic::BelowLeadingOrder => "below_leading_order",
            Diagnostic::PeakOverlap => "peak_overlap",
        }
    }
}

/// Transition rates with per-channel breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub gamma_down: f64,
    pub gamma_up: f64,
    pub channels: Vec<(Channel, f64)>,
    pub diagnostics: Vec<Diagnostic>,
}

impl RateResult {
    /// Contribution of a single channel, zero if absent.
    pub fn channel_rate(&self, label: ChannelLabel) -> f64 {
        self.channels
            .iter()
            .find(|(c, _)| c.label == label)
            .map(|(_, r)| *r)
            .unwrap_or(0.0)
    }
}

/// Builds the active spectral channels for the given atom and orbit.
///
/// Every channel whose frequency is strictly positive is emitted, which
/// keeps the rates continuous in Ω across regime boundaries.
pub fn build_channels(atom: &AtomSpec, motion: &MotionSpec, consts: &Constants) -> Vec<Channel> {
    let omega0 = atom.omega0;
    let omega_rot = motion.omega_rot;
    let dt2 = atom.d_transverse_sq();
    let dz2 = atom.d_z * atom.d_z;
    let eh = consts.eps0 * consts.hbar;

    let mut channels = Vec::with_capacity(5);

    channels.push(Channel {
        label: ChannelLabel::ZResonant,
        direction: Direction::Emission,
        frequency: omega0,
        amplitude: omega0 * dz2 / (3.0 * eh),
        velocity_order: 0,
    });
    channels.push(Channel {
        label: ChannelLabel::TransversePlus,
        direction: Direction::Emission,
        frequency: omega0 + omega_rot,
        amplitude: (omega0 + omega_rot) * dt2 / (6.0 * eh),
        velocity_order: 0,
    });
    if omega_rot < omega0 {
        channels.push(Channel {
            label: ChannelLabel::TransverseMinus,
            direction: Direction::Emission,
            frequency: omega0 - omega_rot,
            amplitude: (omega0 - omega_rot) * dt2 / (6.0 * eh),
            velocity_order: 0,
        });
    }
    if omega_rot > omega0 {
        channels.push(Channel {
            label: ChannelLabel::CounterRotating,
            direction: Direction::Excitation,
            frequency: omega_rot - omega0,
            amplitude: (omega_rot - omega0) * dt2 / (6.0 * eh),
            velocity_order: 0,
        });
    }
    if omega_rot > 0.5 * omega0 {
        let f = 2.0 * omega_rot - omega0;
        channels.push(Channel {
            label: ChannelLabel::SecondHarmonic,
            direction: Direction::Excitation,
            frequency: f,
            amplitude: motion.radius * motion.radius * f.powi(3) * dt2
                / (40.0 * consts.c * consts.c * eh),
            velocity_order: 2,
        });
    }
    channels
}

/// Evaluates the emission and excitation rates of the atom in the given
/// environment as channel-amplitude × response sums.
pub fn transition_rates(atom: &AtomSpec, motion: &MotionSpec, env: &Environment) -> Result<RateResult> {
    let consts = Constants::codata();
    let channels = build_channels(atom, motion, &consts);

    let mut gamma_down = 0.0;
    let mut gamma_up = 0.0;
    let mut contributions = Vec::with_capacity(channels.len());
    for ch in &channels {
        let rate = ch.amplitude * response(env, ch.frequency)?;
        match ch.direction {
            Direction::Emission => gamma_down += rate,
            Direction::Excitation => gamma_up += rate,
        }
        contributions.push((*ch, rate));
    }

    let mut diagnostics = Vec::new();
    if motion.beta() > 0.1 {
        diagnostics.push(Diagnostic::NonRelativisticStrained);
    }
    if motion.omega_rot <= 0.5 * atom.omega0 {
        diagnostics.push(Diagnostic::BelowLeadingOrder);
    }
    if let Environment::Cavity(cav) = env {
        if cav.q_factor < 100.0 {
            diagnostics.push(Diagnostic::LowQ);
        }
        let sep = 3.0 * cav.linewidth();
        'outer: for i in 0..channels.len() {
            for j in (i + 1)..channels.len() {
                if (channels[i].frequency - channels[j].frequency).abs() < sep {
                    diagnostics.push(Diagnostic::PeakOverlap);
                    break 'outer;
                }
            }
        }
    }

    Ok(RateResult {
        gamma_down,
        gamma_up,
        channels: contributions,
        diagnostics,
    })
}

/// Controls the time-domain quadrature of [`response_oracle`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureParams {
    /// Upper truncation of the time integral (s).
    pub truncation: f64,
    /// Maximum total number of integrand evaluations before giving up.
    pub max_nodes: usize,
    /// Relative tolerance between successive refinements.
    pub rel_tol: f64,
}

impl QuadratureParams {
    /// Default truncation of 20 cavity decay times.
    pub fn for_cavity(cavity: &CavitySpec) -> Self {
        QuadratureParams {
            truncation: 20.0 * cavity.q_factor / cavity.omega_c,
            max_nodes: 4_000_000,
            rel_tol: 1e-9,
        }
    }
}

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

/// Independent time-domain oracle for the cavity response.
///
/// Computes V⁻¹ · Re ∫₀^∞ e^{iωt} C(t) dt by composite Gauss-Legendre
/// quadrature of the analytically known field autocorrelation
/// C(t) = e^{-iω_c t - (ω_c/Q) t}, truncated at `quad.truncation`.
/// The result must match [`response`] on the cavity branch; the two
/// routes share no code beyond the cavity parameters.
pub fn response_oracle(cavity: &CavitySpec, omega: f64, quad: &QuadratureParams) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::NonPositiveFrequency(omega));
    }
    let kappa = cavity.linewidth();
    let delta = omega - cavity.omega_c;
    let big_t = quad.truncation;

    // Truncation check: the discarded tail has envelope
    // e^{-kappa T}/sqrt(kappa^2 + delta^2), to be compared with the value
    // kappa/(kappa^2 + delta^2).
    let tail_rel = (-kappa * big_t).exp() * (kappa * kappa + delta * delta).sqrt() / kappa;
    if tail_rel > 1e-6 {
        return Err(Error::QuadratureNotConverged(format!(
            "truncation T = {big_t:.3e} s leaves a relative tail bound of {tail_rel:.3e}"
        )));
    }

    // Integrand: Re e^{i omega t} C(t) = e^{-kappa t} cos(delta t).
    let f = |t: f64| (-kappa * t).exp() * (delta * t).cos();

    // Resolve the fastest scale: at least 8 panels per oscillation/decay.
    let scale = delta.abs().max(kappa);
    let min_panels = ((big_t * scale / (2.0 * std::f64::consts::PI)) * 8.0).ceil() as usize;
    let mut panels = min_panels.max(16);

    let integrate = |panels: usize| -> f64 {
        let h = big_t / panels as f64;
        let mut acc = 0.0;
        for p in 0..panels {
            let a = p as f64 * h;
            let mid = a + 0.5 * h;
            let half = 0.5 * h;
            let mut s = 0.0;
            for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
                s += w * f(mid + half * x);
            }
            acc += s * half;
        }
        acc
    };

    let mut prev = integrate(panels);
    loop {
        panels *= 2;
        if panels * 8 > quad.max_nodes {
            return Err(Error::QuadratureNotConverged(format!(
                "node budget of {} exhausted without convergence",
                quad.max_nodes
            )));
        }
        let next = integrate(panels);
        let denom = next.abs().max(f64::MIN_POSITIVE);
        if ((next - prev) / denom).abs() <= quad.rel_tol {
            return Ok(next / cavity.volume);
        }
        prev = next;
    }
}
