use crate::format::{to_json, write_csv, SweepRecord};
use crate::{to_radians, Cli, Command, EstimateArgs, StateArgs, SvetlichnyArgs, SweepArgs, VerifyBoundsArgs};
use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
use std::fs;
use std::path::{Path, PathBuf};
use tritangle_core::{
    estimate_tau_gghz, BoundReport, maximize_svetlichny, smax_gghz_analytic, smax_ms_analytic, stream_seed, summary, three_tangle,
    verify_family_bounds, Family, FamilyParams, PureState3, SvetlichnySetting, SVETLICHNY_LOCAL_BOUND,
};

/// `S` must exceed the local bound by this much to count as a violation,
/// so boundary states (`S = 4` exactly) are not flagged by rounding.
pub const VIOLATION_TOL: f64 = 1e-6;

pub fn is_violation(s: f64) -> bool {
    s > SVETLICHNY_LOCAL_BOUND + VIOLATION_TOL
}

/// Execute a parsed command line and return the text for standard output.
pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::State(args) => cmd_state(args),
        Command::Svetlichny(args) => cmd_svetlichny(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::VerifyBounds(args) => cmd_verify_bounds(args),
        Command::Estimate(args) => cmd_estimate(args),
    }
}

#[derive(Serialize)]
struct StateOutput {
    params: Option<FamilyParams>,
    /// `[re, im]` pairs in basis order `|000>, |001>, …, |111>`.
    amplitudes: Vec<[f64; 2]>,
    c12: f64,
    c13: f64,
    c23: f64,
    c1_23: f64,
    tau: f64,
}

fn cmd_state(args: &StateArgs) -> Result<String> {
    let resolved = args.state.resolve()?;
    let s = summary(&resolved.state);
    to_json(&StateOutput {
        params: resolved.params,
        amplitudes: amplitude_pairs(&resolved.state),
        c12: s.c12,
        c13: s.c13,
        c23: s.c23,
        c1_23: s.c1_23,
        tau: s.tau,
    })
}

fn amplitude_pairs(state: &PureState3) -> Vec<[f64; 2]> {
    (0..8)
        .map(|i| {
            let a = state.amplitude(i);
            [a.re, a.im]
        })
        .collect()
}

/// Closed-form `S_max` when the family has one.
pub fn analytic_smax(family: Family, tau: f64) -> Result<Option<f64>> {
    Ok(match family {
        Family::Gghz => Some(smax_gghz_analytic(tau)?),
        Family::Ms => Some(smax_ms_analytic(tau)?),
        Family::ThreeParam => None,
    })
}

#[derive(Serialize)]
struct SvetlichnyOutput {
    params: Option<FamilyParams>,
    tau: f64,
    s_max: f64,
    violation: bool,
    analytic_applies: bool,
    s_analytic: Option<f64>,
    setting: SvetlichnySetting,
    budget: usize,
    seed: u64,
    restarts_used: usize,
    best_restart: usize,
    converged: bool,
    iterations: usize,
}

fn cmd_svetlichny(args: &SvetlichnyArgs) -> Result<String> {
    let resolved = args.state.resolve()?;
    let tau = three_tangle(&resolved.state);
    let opt = maximize_svetlichny(&resolved.state, args.budget, args.seed).context("--budget")?;
    let s_analytic = match resolved.params {
        Some(p) => analytic_smax(p.family, tau)?,
        None => None,
    };
    to_json(&SvetlichnyOutput {
        params: resolved.params,
        tau,
        s_max: opt.s_max,
        violation: is_violation(opt.s_max),
        analytic_applies: s_analytic.is_some(),
        s_analytic,
        setting: opt.setting,
        budget: args.budget,
        seed: args.seed,
        restarts_used: opt.restarts_used,
        best_restart: opt.best_restart,
        converged: opt.converged,
        iterations: opt.iterations,
    })
}

/// Uniform grid of the family's sweep angle: θ1 ∈ [0, π/4] for GGHZ,
/// θ3 ∈ [0, π/2] for maximal slice, θ1 ∈ [0, π/2] for the 3-parameter family.
pub fn sweep_grid(family: Family, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        bail!("--points must be at least 2, got {points}");
    }
    let hi = match family {
        Family::Gghz => FRAC_PI_4,
        Family::Ms | Family::ThreeParam => FRAC_PI_2,
    };
    Ok((0..points).map(|i| hi * i as f64 / (points - 1) as f64).collect())
}

/// Sweep rows in grid order. Row `i` uses optimizer seed `stream_seed(seed, i)`.
/// `theta2`/`theta3` only apply to the 3-parameter family.
pub fn sweep_records(
    family: Family,
    points: usize,
    budget: usize,
    seed: u64,
    theta2: f64,
    theta3: f64,
) -> Result<Vec<SweepRecord>> {
    sweep_grid(family, points)?
        .into_iter()
        .enumerate()
        .map(|(i, param)| {
            let params = match family {
                Family::Gghz => FamilyParams::gghz(param),
                Family::Ms => FamilyParams::ms(param),
                Family::ThreeParam => FamilyParams::three_param(param, theta2, theta3),
            };
            let state = params.state();
            let tau = three_tangle(&state);
            let s_numeric = maximize_svetlichny(&state, budget, stream_seed(seed, i as u64))?.s_max;
            let s_analytic = analytic_smax(family, tau)?;
            Ok(SweepRecord {
                family: family.name().to_string(),
                param,
                tau,
                s_analytic,
                s_numeric,
                gap: s_analytic.map(|a| s_numeric - a),
                violation: is_violation(s_numeric),
            })
        })
        .collect()
}

#[derive(Serialize)]
struct SweepOutput {
    family: Family,
    points: usize,
    budget: usize,
    seed: u64,
    out: PathBuf,
    gnuplot: Option<PathBuf>,
    violations: usize,
    max_abs_gap: Option<f64>,
}

fn cmd_sweep(args: &SweepArgs) -> Result<String> {
    if args.family != Family::ThreeParam && (args.theta2.is_some() || args.theta3.is_some()) {
        bail!("--theta2/--theta3 only apply to --family three-param");
    }
    let fixed = |v: Option<f64>| v.map_or(FRAC_PI_2, |x| to_radians(x, args.degrees));
    let records = sweep_records(
        args.family,
        args.points,
        args.budget,
        args.seed,
        fixed(args.theta2),
        fixed(args.theta3),
    )?;
    let csv = write_csv(&records);
    let Some(out) = &args.out else {
        return Ok(csv);
    };
    fs::write(out, &csv).with_context(|| format!("--out: cannot write {}", out.display()))?;
    let gnuplot = if args.gnuplot {
        let path = gnuplot_path(out);
        fs::write(&path, gnuplot_script(args.family, out))
            .with_context(|| format!("cannot write {}", path.display()))?;
        Some(path)
    } else {
        None
    };
    let max_abs_gap = records
        .iter()
        .filter_map(|r| r.gap)
        .map(f64::abs)
        .reduce(f64::max);
    to_json(&SweepOutput {
        family: args.family,
        points: args.points,
        budget: args.budget,
        seed: args.seed,
        out: out.clone(),
        gnuplot,
        violations: records.iter().filter(|r| r.violation).count(),
        max_abs_gap,
    })
}

fn gnuplot_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".gp");
    PathBuf::from(name)
}

/// Script plotting `S_max` against `τ` with the local bound as a reference line.
pub fn gnuplot_script(family: Family, csv: &Path) -> String {
    let data = csv.display();
    let analytic = if family == Family::ThreeParam {
        String::new()
    } else {
        format!(", \\\n     '{data}' using 3:4 with lines lw 2 title 'analytic'")
    };
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 'tau'\n\
         set ylabel 'S_max'\n\
         set title '{family} states'\n\
         set xrange [0:1]\n\
         plot 4 with lines dt 2 lc rgb 'gray' title 'local bound', \\\n     \
         '{data}' using 3:5 with points pt 7 title 'numeric'{analytic}\n"
    )
}

#[derive(Serialize)]
struct Triple {
    theta1: f64,
    theta2: f64,
    theta3: f64,
}

#[derive(Serialize)]
struct SingleBoundOutput {
    #[serde(flatten)]
    angles: Triple,
    #[serde(flatten)]
    report: BoundReport,
    budget: usize,
    seed: u64,
}

#[derive(Serialize)]
struct BoundsOutput {
    samples: usize,
    budget: usize,
    seed: u64,
    failures: usize,
    lower_failures: usize,
    upper_failures: usize,
    worst_lower_slack: f64,
    worst_lower_at: Triple,
    worst_upper_slack: f64,
    worst_upper_at: Triple,
}

/// Random `(θ1, θ2, θ3)` in `[0, 2π)³`, one per sample, from `seed`.
pub fn random_triples(samples: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| std::array::from_fn(|_| rng.gen_range(0.0..TAU)))
        .collect()
}

fn cmd_verify_bounds(args: &VerifyBoundsArgs) -> Result<String> {
    let given = [args.theta1, args.theta2, args.theta3];
    if given.iter().any(Option::is_some) {
        let names = ["--theta1", "--theta2", "--theta3"];
        let mut t = [0.0; 3];
        for k in 0..3 {
            match given[k] {
                Some(x) => t[k] = to_radians(x, args.degrees),
                None => bail!("{} is required when checking a single triple", names[k]),
            }
        }
        let report = verify_family_bounds(t[0], t[1], t[2], args.budget, args.seed)?;
        return to_json(&SingleBoundOutput {
            angles: Triple {
                theta1: t[0],
                theta2: t[1],
                theta3: t[2],
            },
            report,
            budget: args.budget,
            seed: args.seed,
        });
    }
    if args.samples == 0 {
        bail!("--samples must be at least 1");
    }
    let triples = random_triples(args.samples, args.seed);
    let mut reports = Vec::with_capacity(triples.len());
    for (i, t) in triples.iter().enumerate() {
        reports.push(verify_family_bounds(t[0], t[1], t[2], args.budget, stream_seed(args.seed, i as u64))?);
    }
    let argmin = |key: fn(&BoundReport) -> f64| {
        (0..reports.len())
            .reduce(|best, i| if key(&reports[i]) < key(&reports[best]) { i } else { best })
            .expect("at least one sample")
    };
    let lo = argmin(|r| r.lower_slack);
    let up = argmin(|r| r.upper_slack);
    let triple = |i: usize| Triple {
        theta1: triples[i][0],
        theta2: triples[i][1],
        theta3: triples[i][2],
    };
    to_json(&BoundsOutput {
        samples: args.samples,
        budget: args.budget,
        seed: args.seed,
        failures: reports.iter().filter(|r| !(r.lower_ok && r.upper_ok)).count(),
        lower_failures: reports.iter().filter(|r| !r.lower_ok).count(),
        upper_failures: reports.iter().filter(|r| !r.upper_ok).count(),
        worst_lower_slack: reports[lo].lower_slack,
        worst_lower_at: triple(lo),
        worst_upper_slack: reports[up].upper_slack,
        worst_upper_at: triple(up),
    })
}

#[derive(Serialize)]
struct EstimateOutput {
    s_estimate: f64,
    tau_hat: f64,
    shots: u64,
    seed: u64,
    /// Exact τ, reported only for family-constructed states.
    tau_true: Option<f64>,
}

fn cmd_estimate(args: &EstimateArgs) -> Result<String> {
    let resolved = args.state.resolve()?;
    let est = estimate_tau_gghz(&resolved.state, args.shots, args.seed).context("--shots")?;
    to_json(&EstimateOutput {
        s_estimate: est.s_estimate,
        tau_hat: est.tau_hat,
        shots: est.shots_per_setting,
        seed: est.seed,
        tau_true: resolved.params.map(|_| three_tangle(&resolved.state)),
    })
}
