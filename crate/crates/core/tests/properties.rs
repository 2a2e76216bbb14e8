//! Property-based invariants of the rate engine and the dynamics layer.

use proptest::prelude::*;

use rotcav::dynamics;
use rotcav::phys::{lab_frame_frequency, AtomSpec, CavitySpec, Environment, MotionSpec};
use rotcav::spectral::transition_rates;

fn log_range(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn atom_strategy() -> impl Strategy<Value = AtomSpec> {
    (
        log_range(1e5, 1e11),
        -1e-28..1e-28f64,
        -1e-28..1e-28f64,
        -1e-28..1e-28f64,
    )
        .prop_map(|(omega0, d_rho, d_phi, d_z)| AtomSpec::new(omega0, d_rho, d_phi, d_z).unwrap())
}

fn motion_strategy() -> impl Strategy<Value = MotionSpec> {
    (log_range(1e-9, 1e-6), 0.0..2e10f64)
        .prop_filter_map("subluminal", |(radius, omega_rot)| {
            MotionSpec::new(radius, omega_rot).ok()
        })
}

fn cavity_strategy() -> impl Strategy<Value = CavitySpec> {
    (log_range(1e5, 1e11), log_range(1e2, 1e8), log_range(1e-16, 1e-10))
        .prop_map(|(omega_c, q, v)| CavitySpec::new(omega_c, q, v).unwrap())
}

fn env_strategy() -> impl Strategy<Value = Environment> {
    prop_oneof![
        Just(Environment::FreeSpace),
        cavity_strategy().prop_map(Environment::Cavity),
    ]
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Every channel contribution is non-negative, and the totals are the
    /// exact sums over channels in each direction.
    #[test]
    fn rates_are_nonnegative_channel_sums(
        atom in atom_strategy(),
        motion in motion_strategy(),
        env in env_strategy(),
    ) {
        let rates = transition_rates(&atom, &motion, &env).unwrap();
        let mut down = 0.0;
        let mut up = 0.0;
        for (channel, rate) in &rates.channels {
            prop_assert!(*rate >= 0.0);
            match channel.direction {
                rotcav::spectral::Direction::Emission => down += rate,
                rotcav::spectral::Direction::Excitation => up += rate,
            }
        }
        prop_assert_eq!(rates.gamma_down, down);
        prop_assert_eq!(rates.gamma_up, up);
    }

    /// The rates are additive over dipole components: the axial and
    /// transverse parts contribute independently.
    #[test]
    fn rates_are_additive_in_dipole_components(
        atom in atom_strategy(),
        motion in motion_strategy(),
        env in env_strategy(),
    ) {
        let full = transition_rates(&atom, &motion, &env).unwrap();
        let axial = AtomSpec::new(atom.omega0, 0.0, 0.0, atom.d_z).unwrap();
        let transverse = AtomSpec::new(atom.omega0, atom.d_rho, atom.d_phi, 0.0).unwrap();
        let a = transition_rates(&axial, &motion, &env).unwrap();
        let t = transition_rates(&transverse, &motion, &env).unwrap();
        prop_assert!(rel_close(full.gamma_down, a.gamma_down + t.gamma_down, 1e-12));
        prop_assert!(rel_close(full.gamma_up, a.gamma_up + t.gamma_up, 1e-12));
    }

    /// Rates scale quadratically with a uniform dipole rescaling.
    #[test]
    fn rates_scale_quadratically_with_dipole(
        atom in atom_strategy(),
        motion in motion_strategy(),
        env in env_strategy(),
        scale in 0.1..10.0f64,
    ) {
        let base = transition_rates(&atom, &motion, &env).unwrap();
        let scaled_atom = AtomSpec::new(
            atom.omega0,
            scale * atom.d_rho,
            scale * atom.d_phi,
            scale * atom.d_z,
        )
        .unwrap();
        let scaled = transition_rates(&scaled_atom, &motion, &env).unwrap();
        prop_assert!(rel_close(scaled.gamma_down, scale * scale * base.gamma_down, 1e-12));
        prop_assert!(rel_close(scaled.gamma_up, scale * scale * base.gamma_up, 1e-12));
    }

    /// Cavity rates scale as 1/V at fixed everything else.
    #[test]
    fn cavity_rates_scale_inversely_with_volume(
        atom in atom_strategy(),
        motion in motion_strategy(),
        cavity in cavity_strategy(),
        factor in 1.1..100.0f64,
    ) {
        let base = transition_rates(&atom, &motion, &Environment::Cavity(cavity)).unwrap();
        let bigger = CavitySpec::new(cavity.omega_c, cavity.q_factor, factor * cavity.volume).unwrap();
        let scaled = transition_rates(&atom, &motion, &Environment::Cavity(bigger)).unwrap();
        prop_assert!(rel_close(factor * scaled.gamma_down, base.gamma_down, 1e-12));
        prop_assert!(rel_close(factor * scaled.gamma_up, base.gamma_up, 1e-12));
    }

    /// Doubling Q at a channel resonance doubles that channel's rate: at
    /// omega = omega_c the response is linear in Q.
    #[test]
    fn on_resonance_response_is_linear_in_q(
        atom in atom_strategy(),
        q in log_range(1e3, 1e7),
        volume in log_range(1e-16, 1e-10),
    ) {
        // tune the cavity to the static resonant channel and use a
        // non-rotating atom so only that channel contributes
        let motion = MotionSpec::new(0.0, 0.0).unwrap();
        let c1 = CavitySpec::new(atom.omega0, q, volume).unwrap();
        let c2 = CavitySpec::new(atom.omega0, 2.0 * q, volume).unwrap();
        let r1 = transition_rates(&atom, &motion, &Environment::Cavity(c1)).unwrap();
        let r2 = transition_rates(&atom, &motion, &Environment::Cavity(c2)).unwrap();
        prop_assert!(rel_close(r2.gamma_down, 2.0 * r1.gamma_down, 1e-12));
    }

    /// Time dilation only lowers the observed transition frequency.
    #[test]
    fn lab_frequency_is_redshifted(
        omega0 in log_range(1e5, 1e11),
        motion in motion_strategy(),
    ) {
        let atom = AtomSpec::new(omega0, 1e-29, 0.0, 0.0).unwrap();
        let lab = lab_frame_frequency(&atom, &motion);
        let omega0 = atom.omega0;
        prop_assert!(lab <= omega0);
        if motion.speed() == 0.0 {
            prop_assert_eq!(lab, omega0);
        } else if motion.beta() > 1e-7 {
            // below this, gamma - 1 < 1 ULP and the redshift is not
            // representable in f64
            prop_assert!(lab < omega0);
        }
    }

    /// Rate-equation evolution forms a semigroup: evolving t1 then t2
    /// equals evolving t1 + t2.
    #[test]
    fn evolution_is_a_semigroup(
        gamma_up in log_range(1e-3, 1e9),
        gamma_down in log_range(1e-3, 1e9),
        p0 in 0.0..1.0f64,
        t1 in 0.0..10.0f64,
        t2 in 0.0..10.0f64,
    ) {
        let start = dynamics::PopulationState::new(p0, 0.0).unwrap();
        let step = dynamics::evolve(&start, gamma_up, gamma_down, t1).unwrap();
        let two_step = dynamics::evolve(&step, gamma_up, gamma_down, t2).unwrap();
        let direct = dynamics::evolve(&start, gamma_up, gamma_down, t1 + t2).unwrap();
        prop_assert!((two_step.p_excited - direct.p_excited).abs() <= 1e-12);
        prop_assert!((two_step.time - direct.time).abs() <= 1e-12 * direct.time.max(1.0));
    }

    /// A trajectory starting in the ground state alternates states, so the
    /// jump counts can differ by at most one.
    #[test]
    fn jump_counts_alternate(
        gamma_up in log_range(1e0, 1e4),
        gamma_down in log_range(1e0, 1e4),
        seed in any::<u64>(),
    ) {
        let stats = dynamics::simulate_jumps(gamma_up, gamma_down, 1.0, seed).unwrap();
        prop_assert!(stats.n_up >= stats.n_down);
        prop_assert!(stats.n_up - stats.n_down <= 1);
        prop_assert!((0.0..=1.0).contains(&stats.excited_fraction));
    }
}

/// The jump simulator reproduces the analytic steady state: the mean
/// excited-state fraction over many seeds sits within five standard
/// errors of gamma_up / (gamma_up + gamma_down).
#[test]
fn monte_carlo_occupation_matches_steady_state() {
    let gamma_up = 2e3;
    let gamma_down = 1e3;
    let duration = 1.0;
    let n = 200;

    let fractions: Vec<f64> = (0..n)
        .map(|seed| {
            dynamics::simulate_jumps(gamma_up, gamma_down, duration, seed)
                .unwrap()
                .excited_fraction
        })
        .collect();
    let mean = fractions.iter().sum::<f64>() / n as f64;
    let var = fractions.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let standard_error = (var / n as f64).sqrt();

    let target = dynamics::steady_state(gamma_up, gamma_down).unwrap().p_excited;
    assert!(
        (mean - target).abs() <= 5.0 * standard_error,
        "mean = {mean}, target = {target}, SE = {standard_error}"
    );
}

/// Per-state exit rates inferred from the jump counts agree with the
/// input rates within five-sigma Poisson bounds.
#[test]
fn monte_carlo_jump_rates_match_inputs() {
    let gamma_up = 2e3;
    let gamma_down = 1e3;
    let duration = 1.0;
    let n = 200;

    let mut n_up = 0u64;
    let mut n_down = 0u64;
    let mut excited_time = 0.0;
    for seed in 0..n {
        let stats = dynamics::simulate_jumps(gamma_up, gamma_down, duration, seed).unwrap();
        n_up += stats.n_up;
        n_down += stats.n_down;
        excited_time += stats.excited_fraction * stats.duration;
    }
    let ground_time = n as f64 * duration - excited_time;

    let expected_up = gamma_up * ground_time;
    let expected_down = gamma_down * excited_time;
    assert!(
        (n_up as f64 - expected_up).abs() <= 5.0 * expected_up.sqrt(),
        "n_up = {n_up}, expected {expected_up}"
    );
    assert!(
        (n_down as f64 - expected_down).abs() <= 5.0 * expected_down.sqrt(),
        "n_down = {n_down}, expected {expected_down}"
    );
}
