//! Parameter sweeps, numeric peak finding, scenario presets, and the
//! machine-readable output records behind the command-line tool.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::CavityTemplate;
use crate::dynamics;
use crate::error::{Error, Result};
use crate::phys::{AtomSpec, CavitySpec, Environment, MotionSpec};
use crate::spectral::{transition_rates, ChannelLabel, Direction, RateResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "omega-c")]
    OmegaC,
    #[serde(rename = "omega-rot")]
    OmegaRot,
    #[serde(rename = "omega0")]
    Omega0,
    #[serde(rename = "q")]
    QFactor,
    #[serde(rename = "volume")]
    Volume,
    #[serde(rename = "radius")]
    Radius,
}

impl SweepParameter {
    /// Stable CSV column name for the swept quantity.
    pub fn column_name(&self) -> &'static str {
        match self {
            SweepParameter::OmegaC => "omega_c_rad_s",
            SweepParameter::OmegaRot => "omega_rot_rad_s",
            SweepParameter::Omega0 => "omega0_rad_s",
            SweepParameter::QFactor => "q_factor",
            SweepParameter::Volume => "volume_m3",
            SweepParameter::Radius => "radius_m",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    Linear,
    Logarithmic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputField {
    GammaDown,
    GammaUp,
    Channels,
    Diagnostics,
    PExcitedSteady,
}

const ALL_OUTPUTS: [OutputField; 5] = [
    OutputField::GammaDown,
    OutputField::GammaUp,
    OutputField::Channels,
    OutputField::Diagnostics,
    OutputField::PExcitedSteady,
];

/// Flat scan configuration; keys match the CLI flags. Unknown keys are
/// rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ScanConfig {
    pub omega0: Option<f64>,
    pub omega_rot: Option<f64>,
    #[serde(default)]
    pub radius: f64,
    #[serde(default)]
    pub d_rho: f64,
    #[serde(default)]
    pub d_phi: f64,
    #[serde(default)]
    pub d_z: f64,
    /// "free" or "cavity".
    pub env: String,
    pub omega_c: Option<f64>,
    pub q: Option<f64>,
    pub volume: Option<f64>,
    pub sweep: SweepParameter,
    pub lo: f64,
    pub hi: f64,
    pub grid: Grid,
    pub points: usize,
    pub outputs: Option<Vec<OutputField>>,
}

impl ScanConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ScanConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidConfig(format!(
                "points: must be >= 2, got {}",
                self.points
            )));
        }
        if !(self.lo < self.hi) {
            return Err(Error::InvalidConfig(format!(
                "lo/hi: lo ({}) must be below hi ({})",
                self.lo, self.hi
            )));
        }
        if self.grid == Grid::Logarithmic && self.lo <= 0.0 {
            return Err(Error::InvalidConfig(
                "lo: must be positive for a logarithmic grid".into(),
            ));
        }
        let is_cavity = match self.env.as_str() {
            "free" => false,
            "cavity" => true,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "env: expected \"free\" or \"cavity\", got \"{other}\""
                )))
            }
        };
        // each parameter is either fixed or swept, never both
        let check = |name: &str, fixed: bool, param: SweepParameter| -> Result<()> {
            if self.sweep == param && fixed {
                return Err(Error::InvalidConfig(format!(
                    "{name}: is both fixed and swept"
                )));
            }
            if self.sweep != param && !fixed {
                return Err(Error::InvalidConfig(format!("{name}: missing value")));
            }
            Ok(())
        };
        check("omega0", self.omega0.is_some(), SweepParameter::Omega0)?;
        check("omega-rot", self.omega_rot.is_some(), SweepParameter::OmegaRot)?;
        if is_cavity {
            check("omega-c", self.omega_c.is_some(), SweepParameter::OmegaC)?;
            check("q", self.q.is_some(), SweepParameter::QFactor)?;
            check("volume", self.volume.is_some(), SweepParameter::Volume)?;
        } else {
            for (name, present, param) in [
                ("omega-c", self.omega_c.is_some(), SweepParameter::OmegaC),
                ("q", self.q.is_some(), SweepParameter::QFactor),
                ("volume", self.volume.is_some(), SweepParameter::Volume),
            ] {
                if present || self.sweep == param {
                    return Err(Error::InvalidConfig(format!(
                        "{name}: not applicable when env = \"free\""
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn outputs(&self) -> Vec<OutputField> {
        self.outputs.clone().unwrap_or_else(|| ALL_OUTPUTS.to_vec())
    }
}

/// Echo of the full input tuple a record was evaluated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EchoedInputs {
    pub omega0: f64,
    pub omega_rot: f64,
    pub radius: f64,
    pub d_rho: f64,
    pub d_phi: f64,
    pub d_z: f64,
    pub env: String,
    pub omega_c: Option<f64>,
    pub q: Option<f64>,
    pub volume: Option<f64>,
}

impl EchoedInputs {
    pub fn atom(&self) -> Result<AtomSpec> {
        AtomSpec::new(self.omega0, self.d_rho, self.d_phi, self.d_z)
    }

    pub fn motion(&self) -> Result<MotionSpec> {
        MotionSpec::new(self.radius, self.omega_rot)
    }

    pub fn environment(&self) -> Result<Environment> {
        match self.env.as_str() {
            "free" => Ok(Environment::FreeSpace),
            "cavity" => {
                let missing =
                    |name: &str| Error::InvalidConfig(format!("{name}: missing value"));
                Ok(Environment::Cavity(CavitySpec::new(
                    self.omega_c.ok_or_else(|| missing("omega-c"))?,
                    self.q.ok_or_else(|| missing("q"))?,
                    self.volume.ok_or_else(|| missing("volume"))?,
                )?))
            }
            other => Err(Error::InvalidConfig(format!(
                "env: expected \"free\" or \"cavity\", got \"{other}\""
            ))),
        }
    }

    /// Re-evaluates the rates from the echoed inputs.
    pub fn evaluate(&self) -> Result<RateResult> {
        transition_rates(&self.atom()?, &self.motion()?, &self.environment()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRecord {
    pub label: String,
    pub frequency_rad_s: f64,
    pub rate_per_s: f64,
}

/// One grid point of a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub sweep_parameter: String,
    pub sweep_value: f64,
    pub inputs: EchoedInputs,
    pub gamma_down_per_s: Option<f64>,
    pub gamma_up_per_s: Option<f64>,
    pub channels: Option<Vec<ChannelRecord>>,
    pub flags: Option<Vec<String>>,
    pub p_excited_steady: Option<f64>,
}

/// Grid nodes for the sweep, in ascending order.
pub fn grid_values(lo: f64, hi: f64, points: usize, grid: Grid) -> Vec<f64> {
    let n = points as f64 - 1.0;
    (0..points)
        .map(|i| {
            let s = i as f64 / n;
            match grid {
                Grid::Linear => lo + s * (hi - lo),
                Grid::Logarithmic => (lo.ln() + s * (hi.ln() - lo.ln())).exp(),
            }
        })
        .collect()
}

fn inputs_at(config: &ScanConfig, value: f64) -> EchoedInputs {
    let pick = |param: SweepParameter, fixed: Option<f64>| {
        if config.sweep == param {
            Some(value)
        } else {
            fixed
        }
    };
    EchoedInputs {
        omega0: pick(SweepParameter::Omega0, config.omega0).unwrap_or(0.0),
        omega_rot: pick(SweepParameter::OmegaRot, config.omega_rot).unwrap_or(0.0),
        radius: if config.sweep == SweepParameter::Radius {
            value
        } else {
            config.radius
        },
        d_rho: config.d_rho,
        d_phi: config.d_phi,
        d_z: config.d_z,
        env: config.env.clone(),
        omega_c: pick(SweepParameter::OmegaC, config.omega_c),
        q: pick(SweepParameter::QFactor, config.q),
        volume: pick(SweepParameter::Volume, config.volume),
    }
}

fn record_at(config: &ScanConfig, outputs: &[OutputField], value: f64) -> Result<OutputRecord> {
    let inputs = inputs_at(config, value);
    let rates = inputs.evaluate()?;
    let want = |f: OutputField| outputs.contains(&f);
    let p_excited = if want(OutputField::PExcitedSteady) {
        dynamics::steady_state(rates.gamma_up, rates.gamma_down)
            .ok()
            .map(|s| s.p_excited)
    } else {
        None
    };
    Ok(OutputRecord {
        sweep_parameter: config.sweep.column_name().to_string(),
        sweep_value: value,
        inputs,
        gamma_down_per_s: want(OutputField::GammaDown).then_some(rates.gamma_down),
        gamma_up_per_s: want(OutputField::GammaUp).then_some(rates.gamma_up),
        channels: want(OutputField::Channels).then(|| {
            rates
                .channels
                .iter()
                .map(|(ch, rate)| ChannelRecord {
                    label: ch.label.as_str().to_string(),
                    frequency_rad_s: ch.frequency,
                    rate_per_s: *rate,
                })
                .collect()
        }),
        flags: want(OutputField::Diagnostics).then(|| {
            rates
                .diagnostics
                .iter()
                .map(|d| d.as_str().to_string())
                .collect()
        }),
        p_excited_steady: p_excited,
    })
}

/// Evaluates the sweep. Grid points are independent and run in parallel;
/// records are returned in grid order regardless of scheduling.
pub fn run_scan(config: &ScanConfig) -> Result<Vec<OutputRecord>> {
    config.validate()?;
    let outputs = config.outputs();
    let values = grid_values(config.lo, config.hi, config.points, config.grid);
    values
        .par_iter()
        .map(|&v| record_at(config, &outputs, v))
        .collect()
}

/// Serializes records as a JSON array. f64 values are emitted in the
/// shortest representation that parses back to the identical bits.
pub fn records_to_json(records: &[OutputRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records are serializable")
}

/// Serializes records as CSV with a stable header, RFC-style quoting and
/// LF line endings.
pub fn records_to_csv(records: &[OutputRecord]) -> Result<String> {
    let sweep_col = records
        .first()
        .map(|r| r.sweep_parameter.clone())
        .unwrap_or_else(|| "sweep_value".to_string());
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());

    let mut header = vec![sweep_col];
    header.push("gamma_down_per_s".into());
    header.push("gamma_up_per_s".into());
    for label in ChannelLabel::ALL {
        header.push(format!("channel_{}_per_s", label.as_str()));
    }
    header.push("p_excited_steady".into());
    header.push("flags".into());
    writer
        .write_record(&header)
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;

    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for rec in records {
        let mut row = vec![rec.sweep_value.to_string()];
        row.push(fmt(rec.gamma_down_per_s));
        row.push(fmt(rec.gamma_up_per_s));
        for label in ChannelLabel::ALL {
            let rate = rec.channels.as_ref().and_then(|chs| {
                chs.iter()
                    .find(|c| c.label == label.as_str())
                    .map(|c| c.rate_per_s)
            });
            row.push(fmt(rate));
        }
        row.push(fmt(rec.p_excited_steady));
        row.push(rec.flags.as_ref().map(|f| f.join(";")).unwrap_or_default());
        writer
            .write_record(&row)
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidConfig(e.to_string()))
}

/// Result of a numeric peak search over the cavity frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakSearch {
    pub omega_c_star: f64,
    pub rate: f64,
    /// Final refined grid step (rad/s); the argmax is accurate to one step.
    pub grid_step: f64,
}

/// Locates the cavity frequency maximizing the selected rate by grid
/// scan with iterative local refinement.
pub fn find_peak_omega_c(
    atom: &AtomSpec,
    motion: &MotionSpec,
    template: &CavityTemplate,
    direction: Direction,
    window: (f64, f64),
    points: usize,
) -> Result<PeakSearch> {
    if points < 100 {
        return Err(Error::InvalidConfig(format!(
            "points: must be >= 100 for the peak search, got {points}"
        )));
    }
    let (mut lo, mut hi) = window;
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::InvalidConfig(format!(
            "window: must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }

    let rate_at = |omega_c: f64| -> Result<f64> {
        let cav = CavitySpec::new(omega_c, template.q_factor, template.volume)?;
        let rates = transition_rates(atom, motion, &Environment::Cavity(cav))?;
        Ok(match direction {
            Direction::Emission => rates.gamma_down,
            Direction::Excitation => rates.gamma_up,
        })
    };

    let mut best = (0.0f64, f64::NEG_INFINITY);
    let mut step = (hi - lo) / (points - 1) as f64;
    for iteration in 0..200 {
        step = (hi - lo) / (points - 1) as f64;
        let mut argmax = 0usize;
        let mut max_rate = f64::NEG_INFINITY;
        for i in 0..points {
            let x = lo + i as f64 * step;
            let r = rate_at(x)?;
            if r > max_rate {
                max_rate = r;
                argmax = i;
            }
        }
        if iteration == 0 && (argmax == 0 || argmax == points - 1) {
            return Err(Error::WindowExcludesPeak);
        }
        let x_star = lo + argmax as f64 * step;
        best = (x_star, max_rate);
        if step <= 1e-12 * x_star {
            break;
        }
        lo = x_star - step;
        hi = x_star + step;
    }
    Ok(PeakSearch {
        omega_c_star: best.0,
        rate: best.1,
        grid_step: step,
    })
}

/// A computed value together with the label of the formula it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub formula: String,
}

impl Quantity {
    fn new(value: f64, formula: &str) -> Self {
        Quantity {
            value,
            formula: formula.to_string(),
        }
    }
}

/// Full report for one of the two preset scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    /// How the preset's GHz/MHz figures are encoded.
    pub frequency_convention: String,
    pub inputs: EchoedInputs,
    pub cavity_gamma_up: Quantity,
    pub cavity_gamma_down: Quantity,
    pub free_gamma_up: Quantity,
    pub free_gamma_down: Quantity,
    pub log10_cavity_to_free_excitation: Quantity,
    pub log10_excitation_to_emission: Quantity,
    pub p_excited_steady: Quantity,
    pub relaxation_time_s: Quantity,
    pub expected_jumps_per_s: Quantity,
}

/// Evaluates one of the preset parameter sets.
///
/// scenario1: d = 1e-29 C·m isotropic, V = 1e-14 m³, Q = 1e7, R = 5e-8 m,
/// Ω = 5e9 rad/s, ω₀ = 1e7 rad/s, ω_c = Ω − ω₀.
/// scenario2: same except Ω = 5e9, ω₀ = ω_c = 2.5e9 rad/s.
pub fn run_scenario(name: &str) -> Result<ScenarioReport> {
    let (omega0, omega_c) = match name {
        "scenario1" => (1e7, 5e9 - 1e7),
        "scenario2" => (2.5e9, 2.5e9),
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    let inputs = EchoedInputs {
        omega0,
        omega_rot: 5e9,
        radius: 5e-8,
        d_rho: 1e-29,
        d_phi: 1e-29,
        d_z: 1e-29,
        env: "cavity".into(),
        omega_c: Some(omega_c),
        q: Some(1e7),
        volume: Some(1e-14),
    };
    let atom = inputs.atom()?;
    let motion = inputs.motion()?;
    let cavity = inputs.environment()?;
    let in_cavity = transition_rates(&atom, &motion, &cavity)?;
    let in_free = transition_rates(&atom, &motion, &Environment::FreeSpace)?;

    let steady = dynamics::steady_state(in_cavity.gamma_up, in_cavity.gamma_down)?;
    let total = in_cavity.gamma_up + in_cavity.gamma_down;
    let jumps = 2.0 / (1.0 / in_cavity.gamma_up + 1.0 / in_cavity.gamma_down);

    Ok(ScenarioReport {
        name: name.to_string(),
        frequency_convention:
            "GHz/MHz preset figures are encoded as angular frequencies (5 GHz -> 5e9 rad/s)"
                .to_string(),
        inputs,
        cavity_gamma_up: Quantity::new(
            in_cavity.gamma_up,
            "sum of excitation channels x Lorentzian cavity response",
        ),
        cavity_gamma_down: Quantity::new(
            in_cavity.gamma_down,
            "sum of emission channels x Lorentzian cavity response",
        ),
        free_gamma_up: Quantity::new(
            in_free.gamma_up,
            "sum of excitation channels x free-space response",
        ),
        free_gamma_down: Quantity::new(
            in_free.gamma_down,
            "sum of emission channels x free-space response",
        ),
        log10_cavity_to_free_excitation: Quantity::new(
            (in_cavity.gamma_up / in_free.gamma_up).log10(),
            "log10 of the exact excitation enhancement ratio",
        ),
        log10_excitation_to_emission: Quantity::new(
            (in_cavity.gamma_up / in_cavity.gamma_down).log10(),
            "log10 of cavity gamma_up / gamma_down",
        ),
        p_excited_steady: Quantity::new(steady.p_excited, "gamma_up / (gamma_up + gamma_down)"),
        relaxation_time_s: Quantity::new(1.0 / total, "1 / (gamma_up + gamma_down)"),
        expected_jumps_per_s: Quantity::new(jumps, "2 / (1/gamma_up + 1/gamma_down)"),
    })
}
