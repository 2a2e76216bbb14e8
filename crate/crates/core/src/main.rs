use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rotcav::closed_forms::{
    self, CavityTemplate, EnhancementKind,
};
use rotcav::dynamics;
use rotcav::error::Error;
use rotcav::phys::{AtomSpec, CavitySpec, Environment, MotionSpec};
use rotcav::scan::{self, ScanConfig};
use rotcav::spectral::transition_rates;

#[derive(Parser)]
#[command(
    name = "rotcav",
    about = "Transition rates of a rotating two-level atom in free space and inside a high-Q cavity",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnvKind {
    Free,
    Cavity,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct AtomMotionArgs {
    /// Proper transition angular frequency omega0 (rad/s)
    #[arg(long)]
    omega0: f64,
    /// Rotational angular velocity Omega (rad/s)
    #[arg(long, default_value_t = 0.0)]
    omega_rot: f64,
    /// Orbit radius R (m)
    #[arg(long, default_value_t = 0.0)]
    radius: f64,
    /// Radial dipole matrix element (C·m)
    #[arg(long, default_value_t = 0.0)]
    d_rho: f64,
    /// Azimuthal dipole matrix element (C·m)
    #[arg(long, default_value_t = 0.0)]
    d_phi: f64,
    /// Axial dipole matrix element (C·m)
    #[arg(long, default_value_t = 0.0)]
    d_z: f64,
    /// Interpret input frequencies as cyclic (Hz); they are multiplied
    /// by 2*pi on ingestion
    #[arg(long, default_value_t = false)]
    cyclic: bool,
}

impl AtomMotionArgs {
    fn freq_scale(&self) -> f64 {
        if self.cyclic {
            2.0 * std::f64::consts::PI
        } else {
            1.0
        }
    }

    fn atom(&self) -> Result<AtomSpec, Error> {
        AtomSpec::new(self.omega0 * self.freq_scale(), self.d_rho, self.d_phi, self.d_z)
    }

    fn motion(&self) -> Result<MotionSpec, Error> {
        MotionSpec::new(self.radius, self.omega_rot * self.freq_scale())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the transition rates for one parameter set
    Rates {
        #[command(flatten)]
        atom_motion: AtomMotionArgs,
        /// Environment: free space or Lorentzian cavity
        #[arg(long, value_enum)]
        env: EnvKind,
        /// Cavity normal mode frequency (rad/s)
        #[arg(long)]
        omega_c: Option<f64>,
        /// Cavity quality factor
        #[arg(long)]
        q: Option<f64>,
        /// Cavity volume (m^3)
        #[arg(long)]
        volume: Option<f64>,
    },
    /// Report the analytic peak locations and values for the regime
    Peaks {
        #[command(flatten)]
        atom_motion: AtomMotionArgs,
        /// Cavity quality factor
        #[arg(long)]
        q: f64,
        /// Cavity volume (m^3)
        #[arg(long)]
        volume: f64,
    },
    /// Run a parameter sweep from a config file
    Scan {
        /// TOML config file; keys match the CLI flags
        #[arg(long)]
        config: std::path::PathBuf,
        /// Output file
        #[arg(long)]
        out: std::path::PathBuf,
        #[arg(long, value_enum)]
        format: OutFormat,
    },
    /// Simulate stochastic jump trajectories for given rates
    Dynamics {
        #[arg(long)]
        gamma_up: f64,
        #[arg(long)]
        gamma_down: f64,
        /// Trajectory duration (s)
        #[arg(long)]
        duration: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trajectories: u64,
    },
    /// Reproduce one of the preset parameter scenarios
    Scenario {
        #[arg(long)]
        name: String,
    },
}

fn cavity_from(omega_c: Option<f64>, q: Option<f64>, volume: Option<f64>) -> Result<CavitySpec, Error> {
    let missing = |name: &str| Error::InvalidConfig(format!("--{name} is required with --env cavity"));
    CavitySpec::new(
        omega_c.ok_or_else(|| missing("omega-c"))?,
        q.ok_or_else(|| missing("q"))?,
        volume.ok_or_else(|| missing("volume"))?,
    )
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Rates {
            atom_motion,
            env,
            omega_c,
            q,
            volume,
        } => {
            let atom = atom_motion.atom()?;
            let motion = atom_motion.motion()?;
            let scale = atom_motion.freq_scale();
            let environment = match env {
                EnvKind::Free => Environment::FreeSpace,
                EnvKind::Cavity => {
                    Environment::Cavity(cavity_from(omega_c.map(|w| w * scale), q, volume)?)
                }
            };
            let rates = transition_rates(&atom, &motion, &environment)?;
            println!("{}", serde_json::to_string_pretty(&rates).expect("serializable"));
        }
        Command::Peaks {
            atom_motion,
            q,
            volume,
        } => {
            let atom = atom_motion.atom()?;
            let motion = atom_motion.motion()?;
            let template = CavityTemplate {
                q_factor: q,
                volume,
            };
            let mut report = serde_json::Map::new();
            report.insert(
                "inertial_resonant_peak_per_s".into(),
                closed_forms::inertial_resonant_peak(&atom, &template).into(),
            );
            let off = closed_forms::off_resonant_emission_peak(&atom, &motion, &template);
            report.insert(
                "off_resonant_emission_peak".into(),
                serde_json::to_value(off).expect("serializable"),
            );
            if let Ok(peak) = closed_forms::excitation_peak_high_rotation(&atom, &motion, &template)
            {
                report.insert(
                    "excitation_peak".into(),
                    serde_json::to_value(peak).expect("serializable"),
                );
                report.insert(
                    "emission_at_excitation_peak_per_s".into(),
                    match closed_forms::emission_at_excitation_peak_high(&atom, &motion, &template)
                    {
                        Ok(v) => v.into(),
                        Err(e) => e.to_string().into(),
                    },
                );
                let enh = closed_forms::enhancement_factor(
                    &atom,
                    &motion,
                    &template,
                    EnhancementKind::ExcitationHigh,
                )?;
                report.insert(
                    "excitation_enhancement".into(),
                    serde_json::to_value(enh).expect("serializable"),
                );
            } else if let Ok(peak) =
                closed_forms::excitation_peak_low_rotation(&atom, &motion, &template)
            {
                report.insert(
                    "excitation_peak".into(),
                    serde_json::to_value(peak).expect("serializable"),
                );
                report.insert(
                    "emission_at_excitation_peak_per_s".into(),
                    match closed_forms::emission_at_excitation_peak_low(&atom, &motion, &template) {
                        Ok(v) => v.into(),
                        Err(e) => e.to_string().into(),
                    },
                );
            }
            let coincidence = closed_forms::classify_coincidence(&atom, &motion, 1e-6);
            report.insert(
                "coincidence".into(),
                serde_json::to_value(coincidence).expect("serializable"),
            );
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::Value::Object(report))
                    .expect("serializable")
            );
        }
        Command::Scan {
            config,
            out,
            format,
        } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", config.display())))?;
            let cfg = ScanConfig::from_toml(&text)?;
            let records = scan::run_scan(&cfg)?;
            let body = match format {
                OutFormat::Csv => scan::records_to_csv(&records)?,
                OutFormat::Json => scan::records_to_json(&records),
            };
            fs::write(&out, body)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", out.display())))?;
            eprintln!("wrote {} records to {}", records.len(), out.display());
        }
        Command::Dynamics {
            gamma_up,
            gamma_down,
            duration,
            seed,
            trajectories,
        } => {
            let runs: Vec<_> = (0..trajectories)
                .map(|i| dynamics::simulate_jumps(gamma_up, gamma_down, duration, seed + i))
                .collect::<Result<_, _>>()?;
            let mean_fraction =
                runs.iter().map(|t| t.excited_fraction).sum::<f64>() / runs.len() as f64;
            let total_jumps: u64 = runs.iter().map(|t| t.n_up + t.n_down).sum();
            let summary = serde_json::json!({
                "trajectories": runs,
                "mean_excited_fraction": mean_fraction,
                "total_jumps": total_jumps,
                "steady_state_p_excited": dynamics::steady_state(gamma_up, gamma_down)?.p_excited,
            });
            println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
        }
        Command::Scenario { name } => {
            let report = scan::run_scenario(&name)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::QuadratureNotConverged(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
