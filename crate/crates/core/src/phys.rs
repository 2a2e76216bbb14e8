//! Physical constants, input specifications, orbit kinematics, and the
//! spectral response functions of the two environments (free space and a
//! Lorentzian single-mode cavity).
//!
//! All frequencies are angular frequencies in rad/s. Constants are pinned
//! so that every numeric result in the test suite is bit-reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum (m/s), exact by SI definition.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
/// Reduced Planck constant (J·s), CODATA 2018.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity (C²·N⁻¹·m⁻²), CODATA 2018.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Pinned physical constants used by every rate formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub c: f64,
    pub hbar: f64,
    pub eps0: f64,
}

impl Constants {
    /// The fixed CODATA table. This is the only constructor.
    pub const fn codata() -> Self {
        Constants {
            c: SPEED_OF_LIGHT,
            hbar: HBAR,
            eps0: EPSILON_0,
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::codata()
    }
}

/// Two-level atom: proper transition frequency and real dipole matrix
/// elements in the co-rotating cylindrical basis (rho, phi, z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub omega0: f64,
    pub d_rho: f64,
    pub d_phi: f64,
    pub d_z: f64,
}

impl AtomSpec {
    pub fn new(omega0: f64, d_rho: f64, d_phi: f64, d_z: f64) -> Result<Self> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "omega0 must be positive and finite, got {omega0}"
            )));
        }
        for (name, d) in [("d_rho", d_rho), ("d_phi", d_phi), ("d_z", d_z)] {
            if !d.is_finite() {
                return Err(Error::InvalidSpec(format!("{name} must be finite, got {d}")));
            }
        }
        Ok(AtomSpec {
            omega0,
            d_rho,
            d_phi,
            d_z,
        })
    }

    /// Isotropic atom with d_rho = d_phi = d_z = d.
    pub fn isotropic(omega0: f64, d: f64) -> Result<Self> {
        Self::new(omega0, d, d, d)
    }

    /// Sum of transverse dipole squares d_rho² + d_phi².
    pub fn d_transverse_sq(&self) -> f64 {
        self.d_rho * self.d_rho + self.d_phi * self.d_phi
    }

    /// Total dipole square d_z² + d_rho² + d_phi².
    pub fn d_total_sq(&self) -> f64 {
        self.d_z * self.d_z + self.d_transverse_sq()
    }
}

/// Circular orbit: radius R and rotational angular velocity Omega.
/// The constructor enforces the subluminal condition R·Omega < c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionSpec {
    pub radius: f64,
    pub omega_rot: f64,
}

impl MotionSpec {
    pub fn new(radius: f64, omega_rot: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "radius must be non-negative and finite, got {radius}"
            )));
        }
        if !(omega_rot >= 0.0) || !omega_rot.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "omega_rot must be non-negative and finite, got {omega_rot}"
            )));
        }
        let speed = radius * omega_rot;
        if speed >= SPEED_OF_LIGHT {
            return Err(Error::SuperluminalOrbit { speed });
        }
        Ok(MotionSpec { radius, omega_rot })
    }

    /// Orbital linear speed v = R·Omega (m/s).
    pub fn speed(&self) -> f64 {
        self.radius * self.omega_rot
    }

    /// v/c, guaranteed in [0, 1).
    pub fn beta(&self) -> f64 {
        self.speed() / SPEED_OF_LIGHT
    }
}

/// Lorentzian single-mode cavity: normal mode frequency, quality factor
/// and mode volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec {
    pub omega_c: f64,
    pub q_factor: f64,
    pub volume: f64,
}

impl CavitySpec {
    pub fn new(omega_c: f64, q_factor: f64, volume: f64) -> Result<Self> {
        if !(omega_c > 0.0) || !omega_c.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "omega_c must be positive and finite, got {omega_c}"
            )));
        }
        if !(q_factor > 1.0) || !q_factor.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "q_factor must exceed 1, got {q_factor}"
            )));
        }
        if !(volume > 0.0) || !volume.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "volume must be positive and finite, got {volume}"
            )));
        }
        Ok(CavitySpec {
            omega_c,
            q_factor,
            volume,
        })
    }

    /// Cavity linewidth omega_c/Q (rad/s).
    pub fn linewidth(&self) -> f64 {
        self.omega_c / self.q_factor
    }
}

/// The spectral environment the atom is coupled to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Environment {
    FreeSpace,
    Cavity(CavitySpec),
}

/// Lorentz factor of the orbit, (1 - (Omega R / c)²)^(-1/2).
///
/// The subluminal condition is a `MotionSpec` invariant, so this never
/// diverges.
pub fn lorentz_gamma(motion: &MotionSpec) -> f64 {
    let beta = motion.beta();
    1.0 / (1.0 - beta * beta).sqrt()
}

/// Lab-frame transition frequency omega = omega0 (1 - Omega²R²/c²)^(1/2).
///
/// Equals omega0 when R = 0 or Omega = 0, and is always <= omega0.
pub fn lab_frame_frequency(atom: &AtomSpec, motion: &MotionSpec) -> f64 {
    atom.omega0 / lorentz_gamma(motion)
}

/// Lorentzian density of states of the cavity, evaluated at mode
/// frequency `omega_k` (units: seconds). Normalized over the full line.
pub fn dos_lorentzian(cavity: &CavitySpec, omega_k: f64) -> f64 {
    let kappa = cavity.linewidth();
    let detuning = omega_k - cavity.omega_c;
    std::f64::consts::FRAC_1_PI * kappa / (kappa * kappa + detuning * detuning)
}

/// Spectral response density of the environment (s·m⁻³).
///
/// Cavity: Q·omega_c / (V·(Q²(omega - omega_c)² + omega_c²)), i.e. the
/// Lorentzian density of states times pi/V. Free space: omega²/(pi c³),
/// the unique counterpart that makes the channel sums reproduce the
/// free-space rate formulas.
pub fn response(env: &Environment, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::NonPositiveFrequency(omega));
    }
    Ok(match env {
        Environment::FreeSpace => {
            omega * omega / (std::f64::consts::PI * SPEED_OF_LIGHT.powi(3))
        }
        Environment::Cavity(cav) => {
            let q = cav.q_factor;
            let det = omega - cav.omega_c;
            q * cav.omega_c / (cav.volume * (q * q * det * det + cav.omega_c * cav.omega_c))
        }
    })
}
