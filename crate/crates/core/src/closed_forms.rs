//! Closed-form transcriptions of the special-case rate formulas: peak
//! values, inertial references, free-space rates, enhancement factors,
//! the inversion ratio, and the peak-coincidence classification.
//!
//! These are kept deliberately independent of the channel engine in
//! `spectral`; the two act as mutual oracles in the test suite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phys::{AtomSpec, CavitySpec, Constants, MotionSpec, SPEED_OF_LIGHT};

/// Q and V of a cavity whose normal mode frequency is left free (it is
/// determined by the peak condition under study).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityTemplate {
    pub q_factor: f64,
    pub volume: f64,
}

impl From<&CavitySpec> for CavityTemplate {
    fn from(cav: &CavitySpec) -> Self {
        CavityTemplate {
            q_factor: cav.q_factor,
            volume: cav.volume,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PeakKind {
    EmissionAtResonance,
    EmissionOffResonant,
    ExcitationHighRotation,
    ExcitationLowRotation,
}

/// An analytic peak: where to tune the cavity and the rate there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub peak_kind: PeakKind,
    pub omega_c_star: f64,
    pub rate_at_peak: f64,
}

/// Rotation/transition-frequency ratios at which emission and excitation
/// peaks coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coincidence {
    None,
    OmegaEq2Omega0,
    OmegaEqOmega0,
    OmegaEqTwoThirdsOmega0,
}

/// Free-space rates with the below-leading-order marker for slow rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeSpaceRates {
    pub gamma_down: f64,
    pub gamma_up: f64,
    /// True when Ω <= ω₀/2 and the excitation rate is reported as zero
    /// although the true rate is nonzero at order (RΩ/c)⁴.
    pub below_leading_order: bool,
}

/// Nominal and exact cavity-over-free-space enhancement of a peak rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnhancementReport {
    /// The rounded factor Qc³/(Vω³).
    pub nominal: f64,
    /// The exact ratio πQc³/(Vω³) = response_cavity(peak)/response_free(ω).
    pub exact: f64,
    /// The peak frequency the factor refers to.
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnhancementKind {
    EmissionLow,
    EmissionHigh,
    ExcitationHigh,
    ExcitationLow,
}

fn consts() -> Constants {
    Constants::codata()
}

/// Peak emission rate of an inertial atom resonant with the cavity:
/// Q (d_z² + d_ρ² + d_φ²) / (3 ε₀ ħ V).
pub fn inertial_resonant_peak(atom: &AtomSpec, cavity: &CavityTemplate) -> f64 {
    let k = consts();
    cavity.q_factor * atom.d_total_sq() / (3.0 * k.eps0 * k.hbar * cavity.volume)
}

/// Emission rate of a rotating atom resonant with the cavity (ω_c = ω₀).
pub fn rotating_emission_at_resonance(
    atom: &AtomSpec,
    motion: &MotionSpec,
    cavity: &CavitySpec,
) -> Result<f64> {
    let detuning = (cavity.omega_c - atom.omega0).abs();
    if detuning > 1e-9 * atom.omega0 {
        return Err(Error::NotAtResonance { detuning });
    }
    let k = consts();
    let q = cavity.q_factor;
    let v = cavity.volume;
    let omega0 = atom.omega0;
    let omega_rot = motion.omega_rot;
    let theta = if omega_rot < omega0 { 1.0 } else { 0.0 };
    let bracket = omega0 + omega_rot + (omega0 - omega_rot) * theta;
    let axial = q * atom.d_z * atom.d_z / (3.0 * k.eps0 * k.hbar * v);
    let transverse = q * omega0 * bracket * atom.d_transverse_sq()
        / (6.0 * k.eps0 * k.hbar * v * (q * q * omega_rot * omega_rot + omega0 * omega0));
    Ok(axial + transverse)
}

/// Peak emission rate of a rotating atom off resonance with the cavity,
/// Q (d_ρ² + d_φ²) / (6 ε₀ ħ V), attained at ω_c = ω₀ + Ω (and at
/// ω_c = ω₀ − Ω when Ω < ω₀).
pub fn off_resonant_emission_peak(
    atom: &AtomSpec,
    motion: &MotionSpec,
    cavity: &CavityTemplate,
) -> PeakReport {
    let k = consts();
    PeakReport {
        peak_kind: PeakKind::EmissionOffResonant,
        omega_c_star: atom.omega0 + motion.omega_rot,
        rate_at_peak: cavity.q_factor * atom.d_transverse_sq()
            / (6.0 * k.eps0 * k.hbar * cavity.volume),
    }
}

/// Emission rate of an inertial atom detuned from the cavity:
/// ω₀ ω_c (d_z² + d_ρ² + d_φ²) / (3 ε₀ ħ V Q (ω₀ − ω_c)²).
pub fn inertial_off_resonant_emission(atom: &AtomSpec, cavity: &CavitySpec) -> Result<f64> {
    let det = atom.omega0 - cavity.omega_c;
    if det.abs() < cavity.omega_c * 1e-12 {
        return Err(Error::DivergentAtResonance);
    }
    let k = consts();
    Ok(atom.omega0 * cavity.omega_c * atom.d_total_sq()
        / (3.0 * k.eps0 * k.hbar * cavity.volume * cavity.q_factor * det * det))
}

/// Free-space emission and excitation rates, piecewise in Ω/ω₀.
pub fn free_space_rates(atom: &AtomSpec, motion: &MotionSpec) -> FreeSpaceRates {
    let k = consts();
    let c3 = k.c.powi(3);
    let pi = std::f64::consts::PI;
    let omega0 = atom.omega0;
    let omega_rot = motion.omega_rot;
    let dt2 = atom.d_transverse_sq();
    let dz2 = atom.d_z * atom.d_z;

    let gamma_down = if omega_rot <= omega0 {
        omega0.powi(3) / (3.0 * pi * k.eps0 * k.hbar * c3)
            * ((1.0 + 3.0 * omega_rot * omega_rot / (omega0 * omega0)) * dt2 + dz2)
    } else {
        let s = omega_rot + omega0;
        s.powi(3) / (6.0 * pi * k.eps0 * k.hbar * c3)
            * (dt2 + 2.0 * omega0.powi(3) / s.powi(3) * dz2)
    };

    let (gamma_up, below) = if omega_rot > omega0 {
        (
            (omega_rot - omega0).powi(3) * dt2 / (6.0 * pi * k.eps0 * k.hbar * c3),
            false,
        )
    } else if omega_rot > 0.5 * omega0 {
        let f = 2.0 * omega_rot - omega0;
        (
            motion.radius * motion.radius * f.powi(5) * dt2
                / (40.0 * pi * k.eps0 * k.hbar * k.c.powi(5)),
            false,
        )
    } else {
        (0.0, true)
    };

    FreeSpaceRates {
        gamma_down,
        gamma_up,
        below_leading_order: below,
    }
}

/// Peak excitation rate for Ω > ω₀, attained at ω_c = Ω − ω₀:
/// Q (d_ρ² + d_φ²) / (6 ε₀ ħ V). Independent of ω₀, Ω and R.
pub fn excitation_peak_high_rotation(
    atom: &AtomSpec,
    motion: &MotionSpec,
    cavity: &CavityTemplate,
) -> Result<PeakReport> {
    if motion.omega_rot <= atom.omega0 {
        return Err(Error::WrongRegime(format!(
            "requires Omega > omega0, got Omega = {} and omega0 = {}",
            motion.omega_rot, atom.omega0
        )));
    }
    let k = consts();
    Ok(PeakReport {
        peak_kind: PeakKind::ExcitationHighRotation,
        omega_c_star: motion.omega_rot - atom.omega0,
        rate_at_peak: cavity.q_factor * atom.d_transverse_sq()
            / (6.0 * k.eps0 * k.hbar * cavity.volume),
    })
}

/// Peak excitation rate for ω₀/2 < Ω <= ω₀, attained at ω_c = 2Ω − ω₀:
/// Q R² (2Ω − ω₀)² (d_ρ² + d_φ²) / (40 ε₀ ħ V c²).
pub fn excitation_peak_low_rotation(
    atom: &AtomSpec,
    motion: &MotionSpec,
    cavity: &CavityTemplate,
) -> Result<PeakReport> {
    let omega0 = atom.omega0;
    let omega_rot = motion.omega_rot;
    if omega_rot <= 0.5 * omega0 || omega_rot > omega0 {
        return Err(Error::WrongRegime(format!(
            "requires omega0/2 < Omega <= omega0, got Omega = {omega_rot} and omega0 = {omega0}"
        )));
    }
    let k = consts();
    let f = 2.0 * omega_rot - omega0;
    Ok(PeakReport {
        peak_kind: PeakKind::ExcitationLowRotation,
        omega_c_star: f,
        rate_at_peak: cavity.q_factor * motion.radius * motion.radius * f * f
            * atom.d_transverse_sq()
            / (40.0 * k.eps0 * k.hbar * cavity.volume * k.c * k.c),
    })
}

// "Not near a coincidence" is operationalized as >= 10 cavity linewidths
// of separation between the coinciding channel frequencies.
const COINCIDENCE_LINEWIDTHS: f64 = 10.0;

/// Emission rate at the high-rotation excitation peak (ω_c = Ω − ω₀):
/// (Ω² − ω₀²)/(24 ε₀ ħ V Q ω₀²) · [(d_ρ² + d_φ²) + 8ω₀³ d_z² / ((Ω − 2ω₀)²(Ω + ω₀))].
pub fn emission_at_excitation_peak_high(
    atom: &AtomSpec,
    motion: &MotionSpec,
    cavity: &CavityTemplate,
) -> Result<f64> {
    let omega0 = atom.omega0;
    let omega_rot = motion.omega_rot;
    if omega_rot <= omega0 {
        return Err(Error::WrongRegime(format!(
            "requires Omega > omega0, got Omega = {omega_rot} and omega0 = {omega0}"
        )));
    }
    let omega_c = omega_rot - omega0;
    let linewidth = omega_c / cavity.q_factor;
    // excitation peak at Omega - omega0 vs emission peak at omega0:
    // separation |Omega - 2 omega0|
    if (omega_rot - 2.0 * omega0).abs() < COINCIDENCE_LINEWIDTHS * linewidth {
        return Err(Error::CoincidentPeaks(
            "Omega is within 10 linewidths of 2*omega0".into(),
        ));
    }
    let k = consts();
    let bracket = atom.d_transverse_sq()
        + 8.0 * omega0.powi(3) * atom.d_z * atom.d_z
            / ((omega_rot - 2.0 * omega0).powi(2) * (omega_rot + omega0));
    Ok((omega_rot * omega_rot - omega0 * omega0)
        / (24.0 * k.eps0 * k.hbar * cavity.volume * cavity.q_factor * omega0 * omega0)
        * bracket)
}

/// Emission rate at the low-rotation excitation peak (ω_c = 2Ω − ω₀).
pub fn emission_at_excitation_peak_low(
    atom: &AtomSpec,
    motion: &MotionSpec,
    cavity: &CavityTemplate,
) -> Result<f64> {
    let omega0 = atom.omega0;
    let omega_rot = motion.omega_rot;
    if omega_rot <= 0.5 * omega0 || omega_rot > omega0 {
        return Err(Error::WrongRegime(format!(
            "requires omega0/2 < Omega <= omega0, got Omega = {omega_rot} and omega0 = {omega0}"
        )));
    }
    let omega_c = 2.0 * omega_rot - omega0;
    let linewidth = omega_c / cavity.q_factor;
    // peak at 2 Omega - omega0 vs emission peaks at omega0 and omega0 - Omega:
    // separations 2|Omega - omega0| and |3 Omega - 2 omega0|
    if 2.0 * (omega_rot - omega0).abs() < COINCIDENCE_LINEWIDTHS * linewidth {
        return Err(Error::CoincidentPeaks(
            "Omega is within 10 linewidths of omega0".into(),
        ));
    }
    if (3.0 * omega_rot - 2.0 * omega0).abs() < COINCIDENCE_LINEWIDTHS * linewidth {
        return Err(Error::CoincidentPeaks(
            "Omega is within 10 linewidths of 2*omega0/3".into(),
        ));
    }
    let k = consts();
    let transverse = 2.0
        * (4.0 * omega_rot.powi(3)
            + omega0
                * (omega_rot * omega_rot - 8.0 * omega0 * omega_rot + 4.0 * omega0 * omega0))
        / ((omega_rot - 2.0 * omega0).powi(2) * (3.0 * omega_rot - 2.0 * omega0).powi(2))
        * atom.d_transverse_sq();
    let axial =
        omega0 * atom.d_z * atom.d_z / (2.0 * (omega_rot - omega0).powi(2));
    Ok(omega_c / (6.0 * k.eps0 * k.hbar * cavity.volume * cavity.q_factor) * (transverse + axial))
}

/// Cavity-over-free-space enhancement of a peak rate.
///
/// The nominal factor Qc³/(Vω³) is the rounded statement; the exact ratio
/// carries an extra π and is computed as the quotient of the cavity
/// response at resonance and the free-space response at the same
/// frequency.
pub fn enhancement_factor(
    atom: &AtomSpec,
    motion: &MotionSpec,
    cavity: &CavityTemplate,
    which: EnhancementKind,
) -> Result<EnhancementReport> {
    let omega0 = atom.omega0;
    let omega_rot = motion.omega_rot;
    let omega = match which {
        EnhancementKind::EmissionLow => {
            if omega_rot > omega0 {
                return Err(Error::WrongRegime("EmissionLow requires Omega <= omega0".into()));
            }
            omega0
        }
        EnhancementKind::EmissionHigh => {
            if omega_rot <= omega0 {
                return Err(Error::WrongRegime("EmissionHigh requires Omega > omega0".into()));
            }
            omega_rot + omega0
        }
        EnhancementKind::ExcitationHigh => {
            if omega_rot <= omega0 {
                return Err(Error::WrongRegime("ExcitationHigh requires Omega > omega0".into()));
            }
            omega_rot - omega0
        }
        EnhancementKind::ExcitationLow => {
            if omega_rot <= 0.5 * omega0 || omega_rot > omega0 {
                return Err(Error::WrongRegime(
                    "ExcitationLow requires omega0/2 < Omega <= omega0".into(),
                ));
            }
            2.0 * omega_rot - omega0
        }
    };
    let c3 = SPEED_OF_LIGHT.powi(3);
    let nominal = cavity.q_factor * c3 / (cavity.volume * omega.powi(3));
    // response_cavity(omega at resonance) / response_free(omega)
    let resp_cavity = cavity.q_factor / (omega * cavity.volume);
    let resp_free = omega * omega / (std::f64::consts::PI * c3);
    Ok(EnhancementReport {
        nominal,
        exact: resp_cavity / resp_free,
        omega,
    })
}

/// Classifies whether the rotation ratio Ω/ω₀ sits at one of the peak
/// coincidence values {2, 1, 2/3} within relative tolerance `tol`.
///
/// `tol` must lie in (0, 0.1); the classification is exclusive because
/// the candidate ratios are separated by more than 2·0.1 relative.
pub fn classify_coincidence(atom: &AtomSpec, motion: &MotionSpec, tol: f64) -> Coincidence {
    assert!(tol > 0.0 && tol < 0.1, "tol must lie in (0, 0.1)");
    let ratio = motion.omega_rot / atom.omega0;
    for (r, class) in [
        (2.0, Coincidence::OmegaEq2Omega0),
        (1.0, Coincidence::OmegaEqOmega0),
        (2.0 / 3.0, Coincidence::OmegaEqTwoThirdsOmega0),
    ] {
        if (ratio - r).abs() <= tol * r {
            return class;
        }
    }
    Coincidence::None
}

/// Exact and nominal excitation/emission peak ratios for Ω > ω₀ with
/// transverse-only polarization.
///
/// The exact quotient of the excitation peak and the transverse part of
/// the emission rate at that peak is 4Q²ω₀²/(Ω² − ω₀²); the rounded
/// statement Q²/((Ω/ω₀)² − 1) differs from it by a factor of 4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionRatioAudit {
    pub exact: f64,
    pub nominal: f64,
    /// exact / nominal; equals 4 identically.
    pub discrepancy_factor: f64,
}

pub fn inversion_ratio_audit(atom: &AtomSpec, motion: &MotionSpec, q_factor: f64) -> Result<InversionRatioAudit> {
    let omega0 = atom.omega0;
    let omega_rot = motion.omega_rot;
    if omega_rot <= omega0 {
        return Err(Error::WrongRegime("requires Omega > omega0".into()));
    }
    let denom = omega_rot * omega_rot - omega0 * omega0;
    let exact = 4.0 * q_factor * q_factor * omega0 * omega0 / denom;
    let nominal = q_factor * q_factor / ((omega_rot / omega0).powi(2) - 1.0);
    Ok(InversionRatioAudit {
        exact,
        nominal,
        discrepancy_factor: exact / nominal,
    })
}
