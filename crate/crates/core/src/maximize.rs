//! Maximal Svetlichny violation: closed forms for the GHZ-class families,
//! the measurement settings that attain them, and a multi-start numerical
//! maximizer for arbitrary states.
//!
//! For generalized GHZ states
//!
//! ```text
//! S_max = 4 √(1 − τ)   for τ ≤ 1/3   (all directions along z, c' along −z)
//! S_max = 4 √(2τ)      for τ ≥ 1/3   (all directions in the xy-plane)
//! ```
//!
//! and for maximal slice states `S_max = 4 √(1 + τ)`. Over the 3-parameter
//! family these two curves bound `S_max` from below and above:
//! `|S²/16 − 1| ≤ τ ≤ S²/32`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bell::{bb_from_dd, Correlations2, Correlations3, DPrimeSetting, Direction, SvetlichnySetting};
use crate::entanglement::three_tangle;
use crate::error::{Error, Result};
use crate::simplex::{minimize, SimplexOptions};
use crate::states::{gghz, maximal_slice, three_param, PureState2, PureState3};
use crate::stream_seed;

/// The 3-tangle at which the optimal GGHZ measurement switches from the
/// z-axis configuration to the xy-plane configuration.
pub const GGHZ_KINK_TAU: f64 = 1.0 / 3.0;
/// Restarts agreeing with the best value within this margin count towards
/// convergence.
pub const AGREEMENT_TOL: f64 = 1e-6;
/// Restarts that must agree before a maximization is marked converged.
pub const AGREEING_RESTARTS: usize = 3;
/// Slack allowed on the family bounds in [`BoundReport`].
pub const BOUND_TOL: f64 = 1e-7;
pub const DEFAULT_BUDGET: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub budget: usize,
    pub seed: u64,
    pub simplex: SimplexOptions,
}

impl OptimizerConfig {
    pub fn new(budget: usize, seed: u64) -> Self {
        Self {
            budget,
            seed,
            simplex: SimplexOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub s_max: f64,
    pub setting: SvetlichnySetting,
    pub restarts_used: usize,
    pub best_restart: usize,
    pub converged: bool,
    /// Simplex iterations summed over all restarts.
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub tau: f64,
    pub s_max: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// `τ − |S²/16 − 1|`; negative when the lower bound is violated.
    pub lower_slack: f64,
    /// `S²/32 − τ`; negative when the upper bound is violated.
    pub upper_slack: f64,
}

impl BoundReport {
    pub fn new(tau: f64, s_max: f64) -> Self {
        let s2 = s_max * s_max;
        let lower_slack = tau - (s2 / 16.0 - 1.0).abs();
        let upper_slack = s2 / 32.0 - tau;
        Self {
            tau,
            s_max,
            lower_ok: lower_slack >= -BOUND_TOL,
            upper_ok: upper_slack >= -BOUND_TOL,
            lower_slack,
            upper_slack,
        }
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if (0.0..=1.0).contains(&tau) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "tau", value: tau })
    }
}

/// Maximal `|<S>|` of a generalized GHZ state with 3-tangle `tau`.
pub fn smax_gghz_analytic(tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(if tau <= GGHZ_KINK_TAU {
        4.0 * (1.0 - tau).sqrt()
    } else {
        4.0 * (2.0 * tau).sqrt()
    })
}

/// Maximal `|<S>|` of a maximal slice state with 3-tangle `tau`.
pub fn smax_ms_analytic(tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(4.0 * (1.0 + tau).sqrt())
}

/// All six directions along `+z` except `c'` along `−z`; `S = 4 σz⊗σz⊗σz`.
pub fn z_axis_setting() -> SvetlichnySetting {
    let z = Direction::plus_z();
    SvetlichnySetting {
        a: z,
        a_prime: z,
        b: z,
        b_prime: z,
        c: z,
        c_prime: Direction::minus_z(),
    }
}

/// Complete a setting given `a, a', d, d', c, c'` by choosing the mixing
/// angle of `b, b'` that maximizes `<S>` on `state`.
///
/// With `b ± b'` written through `d, d'`, the value is
/// `2 (x cosθ + y sinθ)` where `x = <ADC> − <A'DC'>` and
/// `y = <AD'C'> + <A'D'C>`, maximal at `tanθ = y/x`.
fn complete_with_mixing(
    state: &PureState3,
    a: Direction,
    a_prime: Direction,
    d: Direction,
    d_prime: Direction,
    c: Direction,
    c_prime: Direction,
) -> SvetlichnySetting {
    let corr = Correlations3::new(state);
    let (av, apv, dv, dpv, cv, cpv) = (
        a.vector(),
        a_prime.vector(),
        d.vector(),
        d_prime.vector(),
        c.vector(),
        c_prime.vector(),
    );
    let x = corr.correlator(av, dv, cv) - corr.correlator(apv, dv, cpv);
    let y = corr.correlator(av, dpv, cpv) + corr.correlator(apv, dpv, cv);
    let theta = if x == 0.0 && y == 0.0 { FRAC_PI_4 } else { y.atan2(x) };
    let (b, b_prime) = bb_from_dd(&DPrimeSetting { d, d_prime, theta }).expect("d and d' are orthogonal by construction");
    SvetlichnySetting {
        a,
        a_prime,
        b,
        b_prime,
        c,
        c_prime,
    }
}

/// The xy-plane configuration for generalized GHZ states, in the gauge
/// `φa = φd = 0`: `φc = 0`, `φd' = −π/2`, `φc' = π/2`, `φa' = π/2`, so that
/// `φa+φd+φc = φa+φd'+φc' = φa'+φd'+φc = 0` and `φa'+φd+φc' = π`. The mixing
/// angle is `π/4` regardless of `θ1`.
pub fn gghz_xy_setting() -> SvetlichnySetting {
    let eq = |phi: f64| Direction::new(FRAC_PI_2, phi);
    let (b, b_prime) = bb_from_dd(&DPrimeSetting {
        d: eq(0.0),
        d_prime: eq(-FRAC_PI_2),
        theta: FRAC_PI_4,
    })
    .expect("orthogonal");
    SvetlichnySetting {
        a: eq(0.0),
        a_prime: eq(FRAC_PI_2),
        b,
        b_prime,
        c: eq(0.0),
        c_prime: eq(FRAC_PI_2),
    }
}

/// A setting attaining `S_max` for `gghz(theta1)`: the z-axis set below the
/// kink, the xy-plane set at and above it.
pub fn optimal_setting_gghz(theta1: f64) -> SvetlichnySetting {
    let state = gghz(theta1);
    let tau = three_tangle(&state);
    if tau < GGHZ_KINK_TAU - 1e-12 {
        return z_axis_setting();
    }
    let eq = |phi: f64| Direction::new(FRAC_PI_2, phi);
    complete_with_mixing(
        &state,
        eq(0.0),
        eq(FRAC_PI_2),
        eq(0.0),
        eq(-FRAC_PI_2),
        eq(0.0),
        eq(FRAC_PI_2),
    )
}

/// A setting attaining `S_max` for `maximal_slice(theta3)`: `a, a', d, d'`
/// in the xy-plane, `tanθc = tanθc' = √2 tanθ3`, `φc' = −φc = π/4`,
/// `φd − φd' = π/2` and the phase sums `φadc = φad'c' = φa'd'c = 0`,
/// `φa'dc' = π`, in the gauge `φd = 0`.
pub fn optimal_setting_ms(theta3: f64) -> SvetlichnySetting {
    let state = maximal_slice(theta3);
    let (s3, c3) = theta3.sin_cos();
    let theta_c = (SQRT_2 * s3).atan2(c3);
    let (phi_c, phi_cp) = (-FRAC_PI_4, FRAC_PI_4);
    let (phi_d, phi_dp) = (0.0, -FRAC_PI_2);
    let phi_a = -phi_d - phi_c;
    let phi_ap = -phi_dp - phi_c;
    let eq = |phi: f64| Direction::new(FRAC_PI_2, phi);
    complete_with_mixing(
        &state,
        eq(phi_a),
        eq(phi_ap),
        eq(phi_d),
        eq(phi_dp),
        Direction::new(theta_c, phi_c),
        Direction::new(theta_c, phi_cp),
    )
}

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

fn random_angles<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    std::array::from_fn(|k| {
        if k % 2 == 0 {
            rng.gen_range(0.0..PI)
        } else {
            rng.gen_range(0.0..TAU)
        }
    })
}

struct Restart<const N: usize> {
    value: f64,
    angles: [f64; N],
    iterations: usize,
}

/// Multi-start maximization of `objective` over `N` angles. Restarts use
/// independent streams derived from the seed; ties go to the lowest index.
fn multistart<const N: usize>(
    config: &OptimizerConfig,
    objective: impl Fn(&[f64]) -> f64,
) -> Result<(Vec<Restart<N>>, usize)> {
    if config.budget == 0 {
        return Err(Error::ZeroBudget);
    }
    let restarts: Vec<Restart<N>> = (0..config.budget)
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, r as u64));
            let x0: [f64; N] = random_angles(&mut rng);
            let res = minimize(|x| -objective(x), &x0, &config.simplex);
            Restart {
                value: -res.f,
                angles: res.x.try_into().expect("simplex preserves dimension"),
                iterations: res.iterations,
            }
        })
        .collect();
    let mut best = 0;
    for (r, restart) in restarts.iter().enumerate() {
        if restart.value > restarts[best].value {
            best = r;
        }
    }
    Ok((restarts, best))
}

/// Numerically maximize `|<S>|` for `state` over all twelve measurement
/// angles.
pub fn maximize_svetlichny(state: &PureState3, budget: usize, seed: u64) -> Result<OptResult> {
    maximize_svetlichny_with(state, &OptimizerConfig::new(budget, seed))
}

pub fn maximize_svetlichny_with(state: &PureState3, config: &OptimizerConfig) -> Result<OptResult> {
    let corr = Correlations3::new(state);
    let objective = |x: &[f64]| {
        let v: [[f64; 3]; 6] = std::array::from_fn(|k| unit(x[2 * k], x[2 * k + 1]));
        corr.svetlichny_vectors(&v).abs()
    };
    let (restarts, best) = multistart::<12>(config, objective)?;
    let best_value = restarts[best].value;
    let agreeing = restarts
        .iter()
        .filter(|r| r.value >= best_value - AGREEMENT_TOL)
        .count();
    let setting = SvetlichnySetting::from_angles(&restarts[best].angles);
    Ok(OptResult {
        s_max: corr.svetlichny(&setting).abs(),
        setting,
        restarts_used: restarts.len(),
        best_restart: best,
        converged: agreeing >= AGREEING_RESTARTS,
        iterations: restarts.iter().map(|r| r.iterations).sum(),
    })
}

/// Numerical `S_max` of a 3-parameter family state, checked against
/// `|S²/16 − 1| ≤ τ ≤ S²/32`.
pub fn verify_family_bounds(theta1: f64, theta2: f64, theta3: f64, budget: usize, seed: u64) -> Result<BoundReport> {
    let state = three_param(theta1, theta2, theta3);
    let tau = three_tangle(&state);
    let opt = maximize_svetlichny(&state, budget, seed)?;
    Ok(BoundReport::new(tau, opt.s_max))
}

/// Numerical maximum of `|<CHSH>|` over the eight angles of `a, a', b, b'`.
pub fn chsh_max_pair(state: &PureState2, budget: usize, seed: u64) -> Result<f64> {
    let corr = Correlations2::new(state);
    let objective = |x: &[f64]| {
        let v: [[f64; 3]; 4] = std::array::from_fn(|k| unit(x[2 * k], x[2 * k + 1]));
        corr.chsh_vectors(&v).abs()
    };
    let config = OptimizerConfig::new(budget, seed);
    let (restarts, best) = multistart::<8>(&config, objective)?;
    Ok(restarts[best].value)
}
