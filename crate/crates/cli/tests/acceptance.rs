//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};
use std::process::{Command, ExitCode};
use std::time::Instant;
use tritangle_cli::commands::random_triples;
use tritangle_core::entanglement::three_tangle_with_pivot;
use tritangle_core::qalg::ComplexMatrix;
use tritangle_core::{
    chsh_max_pair, estimate_tau_gghz, expectation, gghz, maximal_slice, maximize_svetlichny, optimal_setting_gghz,
    optimal_setting_ms, smax_gghz_analytic, smax_ms_analytic, stream_seed, svetlichny_operator, svetlichny_value,
    swap_qubits, three_param, three_tangle, verify_family_bounds, BoundReport, Complex64, Direction, PureState2,
    PureState3, SvetlichnySetting, SVETLICHNY_LOCAL_BOUND, SVETLICHNY_QUANTUM_MAX,
};

const BUDGET: usize = 64;
const SEED: u64 = 42;

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn smax(state: &PureState3, stream: u64) -> f64 {
    maximize_svetlichny(state, BUDGET, stream_seed(SEED, stream))
        .expect("nonzero budget")
        .s_max
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_state(rng: &mut ChaCha8Rng) -> PureState3 {
    PureState3::from_amplitudes(std::array::from_fn(|_| random_complex(rng))).unwrap()
}

fn random_pair(rng: &mut ChaCha8Rng) -> PureState2 {
    PureState2::from_amplitudes(std::array::from_fn(|_| random_complex(rng))).unwrap()
}

fn random_unitary(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let (a, b, c) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
    let (s, co) = (rng.gen_range(0.0..PI) / 2.0).sin_cos();
    let e = |x: f64| Complex64::from_polar(1.0, x);
    ComplexMatrix::from_rows(2, 2, vec![e(a) * co, -e(a + b) * s, e(a + c) * s, e(a + b + c) * co]).unwrap()
}

fn random_direction(rng: &mut ChaCha8Rng) -> Direction {
    Direction::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU))
}

fn random_setting(rng: &mut ChaCha8Rng) -> SvetlichnySetting {
    SvetlichnySetting {
        a: random_direction(rng),
        a_prime: random_direction(rng),
        b: random_direction(rng),
        b_prime: random_direction(rng),
        c: random_direction(rng),
        c_prime: random_direction(rng),
    }
}

fn ghz_maximal_violation() -> Verdict {
    let s = smax(&gghz(FRAC_PI_4), 0);
    let err = (s - SVETLICHNY_QUANTUM_MAX).abs();
    check(err <= 1e-4, format!("S_max = {s:.9}, |S_max - 4√2| = {err:.2e}"))
}

/// 21 points uniform in θ1 over [0, π/4], with the node nearest the kink
/// moved onto τ = 1/3 itself.
fn gghz_grid() -> Vec<f64> {
    let kink = (1.0f64 / 3.0).sqrt().asin() / 2.0;
    let mut grid: Vec<f64> = (0..21).map(|i| FRAC_PI_4 * i as f64 / 20.0).collect();
    let nearest = (0..grid.len())
        .min_by(|&i, &j| (grid[i] - kink).abs().total_cmp(&(grid[j] - kink).abs()))
        .unwrap();
    grid[nearest] = kink;
    grid
}

struct Row {
    tau: f64,
    numeric: f64,
    analytic: f64,
}

fn gghz_rows() -> Vec<Row> {
    gghz_grid()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let state = gghz(t);
            let tau = three_tangle(&state);
            Row {
                tau,
                numeric: smax(&state, i as u64),
                analytic: smax_gghz_analytic(tau).unwrap(),
            }
        })
        .collect()
}

fn gghz_curve(rows: &[Row]) -> Verdict {
    let worst = rows.iter().map(|r| (r.numeric - r.analytic).abs()).fold(0.0, f64::max);
    let min = rows.iter().min_by(|a, b| a.numeric.total_cmp(&b.numeric)).unwrap();
    let nearest = rows
        .iter()
        .min_by(|a, b| (a.tau - 1.0 / 3.0).abs().total_cmp(&(b.tau - 1.0 / 3.0).abs()))
        .unwrap();
    let dip = 4.0 * (2.0f64 / 3.0).sqrt();
    let at_kink = std::ptr::eq(min, nearest);
    check(
        worst <= 1e-4 && at_kink && (min.numeric - dip).abs() <= 1e-3,
        format!(
            "max |numeric - analytic| = {worst:.2e}; minimum S = {:.9} at τ = {:.9} (nearest 1/3: {at_kink})",
            min.numeric, min.tau
        ),
    )
}

fn nonviolation_threshold(rows: &[Row]) -> Verdict {
    let below: Vec<&Row> = rows.iter().filter(|r| r.tau <= 0.5 - 1e-3).collect();
    let worst = below.iter().map(|r| r.numeric).fold(f64::MIN, f64::max);
    check(
        !below.is_empty() && worst <= SVETLICHNY_LOCAL_BOUND + 1e-4,
        format!("{} points with τ ≤ 0.499, largest S_max = {worst:.9}", below.len()),
    )
}

fn ms_curve() -> Verdict {
    let mut worst = 0.0f64;
    let mut weakest = f64::INFINITY;
    let mut violating = 0;
    for i in 0..21 {
        let state = maximal_slice(FRAC_PI_2 * i as f64 / 20.0);
        let tau = three_tangle(&state);
        let s = smax(&state, 100 + i);
        worst = worst.max((s - smax_ms_analytic(tau).unwrap()).abs());
        if tau >= 0.01 {
            violating += 1;
            weakest = weakest.min(s - SVETLICHNY_LOCAL_BOUND);
        }
    }
    check(
        worst <= 1e-4 && weakest > 0.0,
        format!("max |numeric - analytic| = {worst:.2e}; smallest S_max - 4 over {violating} points with τ ≥ 0.01: {weakest:.6}"),
    )
}

fn canonical_settings() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let t1 = rng.gen_range(0.0..FRAC_PI_4);
        let state = gghz(t1);
        let op = svetlichny_operator(&optimal_setting_gghz(t1));
        let s = expectation(&state, &op).unwrap().abs();
        worst = worst.max((s - smax_gghz_analytic(three_tangle(&state)).unwrap()).abs());

        let t3 = rng.gen_range(0.0..FRAC_PI_2);
        let state = maximal_slice(t3);
        let op = svetlichny_operator(&optimal_setting_ms(t3));
        let s = expectation(&state, &op).unwrap().abs();
        worst = worst.max((s - smax_ms_analytic(three_tangle(&state)).unwrap()).abs());
    }
    check(worst <= 1e-8, format!("20 settings, max |<S> - analytic| = {worst:.2e}"))
}

fn family_bounds() -> Verdict {
    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = f64::INFINITY;
    for (i, t) in random_triples(1000, SEED).iter().enumerate() {
        let r = verify_family_bounds(t[0], t[1], t[2], BUDGET, stream_seed(SEED, i as u64)).unwrap();
        worst_lower = worst_lower.min(r.lower_slack);
        worst_upper = worst_upper.min(r.upper_slack);
    }

    let kink = (1.0f64 / 3.0).sqrt().asin() / 2.0;
    let mut ghz_gap = 0.0f64;
    let mut ms_gap = 0.0f64;
    for i in 0..10 {
        let t1 = kink + (FRAC_PI_4 - kink) * i as f64 / 9.0;
        let state = three_param(t1, FRAC_PI_2, FRAC_PI_2);
        let r = BoundReport::new(three_tangle(&state), smax(&state, 2000 + i));
        ghz_gap = ghz_gap.max(r.upper_slack.abs());

        let t3 = FRAC_PI_2 * i as f64 / 9.0;
        let state = three_param(FRAC_PI_4, FRAC_PI_2, t3);
        let r = BoundReport::new(three_tangle(&state), smax(&state, 3000 + i));
        ms_gap = ms_gap.max(r.lower_slack.abs());
    }
    check(
        worst_lower >= -1e-6 && worst_upper >= -1e-6 && ghz_gap <= 1e-5 && ms_gap <= 1e-5,
        format!(
            "1000 samples: worst lower slack {worst_lower:.2e}, worst upper slack {worst_upper:.2e}; \
             GGHZ |upper slack| ≤ {ghz_gap:.2e}, MS |lower slack| ≤ {ms_gap:.2e}"
        ),
    )
}

fn tangle_properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut perm = 0.0f64;
    let mut local = 0.0f64;
    for _ in 0..500 {
        let state = random_state(&mut rng);
        let tau = three_tangle(&state);
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            perm = perm.max((three_tangle(&swap_qubits(&state, i, j).unwrap()) - tau).abs());
        }
        for pivot in [2, 3] {
            perm = perm.max((three_tangle_with_pivot(&state, pivot).unwrap() - tau).abs());
        }
        let u = [random_unitary(&mut rng), random_unitary(&mut rng), random_unitary(&mut rng)];
        let rotated = state.apply_local([&u[0], &u[1], &u[2]]).unwrap();
        local = local.max((three_tangle(&rotated) - tau).abs());
    }
    let mut closed = 0.0f64;
    for i in 0..100 {
        let t = FRAC_PI_2 * i as f64 / 99.0;
        closed = closed.max((three_tangle(&gghz(t)) - (2.0 * t).sin().powi(2)).abs());
        closed = closed.max((three_tangle(&maximal_slice(t)) - t.sin().powi(2)).abs());
    }
    check(
        perm <= 1e-9 && local <= 1e-9 && closed <= 1e-10,
        format!("500 states: permutation {perm:.2e}, local unitary {local:.2e}; closed forms {closed:.2e}"),
    )
}

fn chsh_analogue() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let pair = random_pair(&mut rng);
        let c = pair.concurrence();
        let s = chsh_max_pair(&pair, BUDGET, stream_seed(SEED, i)).unwrap();
        worst = worst.max((s - 2.0 * (1.0 + c * c).sqrt()).abs());
    }
    check(worst <= 1e-6, format!("50 states, max |CHSH_max - 2√(1+C²)| = {worst:.2e}"))
}

fn biseparable_bound() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut largest = 0.0f64;
    let mut states = Vec::with_capacity(10_000);
    for k in 0..10_000 {
        let pair = random_pair(&mut rng);
        let single = [random_complex(&mut rng), random_complex(&mut rng)];
        let state = PureState3::pair_times_single(&pair, single).unwrap();
        // cycle the separated qubit through 3, 1 and 2
        let state = match k % 3 {
            0 => state,
            1 => swap_qubits(&state, 1, 3).unwrap(),
            _ => swap_qubits(&state, 2, 3).unwrap(),
        };
        largest = largest.max(svetlichny_value(&state, &random_setting(&mut rng)));
        states.push(state);
    }
    let mut optimized = 0.0f64;
    for (i, state) in states.iter().take(100).enumerate() {
        optimized = optimized.max(maximize_svetlichny(state, 8, stream_seed(SEED, i as u64)).unwrap().s_max);
    }
    check(
        largest <= SVETLICHNY_LOCAL_BOUND + 1e-9 && optimized <= SVETLICHNY_LOCAL_BOUND + 1e-9,
        format!("10^4 random settings: max |<S>| = {largest:.9}; 100 optimized: max S_max = {optimized:.9}"),
    )
}

fn tau_from_shots() -> Verdict {
    let mut worst = 0.0f64;
    for t in [PI / 12.0, FRAC_PI_8, FRAC_PI_4] {
        let exact = (2.0 * t).sin().powi(2);
        for seed in 0..5 {
            let est = estimate_tau_gghz(&gghz(t), 1_000_000, seed).unwrap();
            worst = worst.max((est.tau_hat - exact).abs());
        }
    }
    check(worst <= 0.02, format!("3 angles x 5 seeds at 10^6 shots, max |tau_hat - τ| = {worst:.2e}"))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tritangle"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(out.stdout)
    } else {
        Err(String::from_utf8_lossy(&out.stderr).into_owned())
    }
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut csvs = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("sweep{run}.csv"));
        run_cli(&["sweep", "--family", "gghz", "--seed", "7", "--out", path.to_str().unwrap()])?;
        csvs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let three = ["sweep", "--family", "three-param", "--points", "11", "--seed", "7"];
    let three_same = run_cli(&three)? == run_cli(&three)?;
    let est = ["estimate", "--family", "gghz", "--theta1", "0.5", "--shots", "200000", "--seed", "7"];
    let est_same = run_cli(&est)? == run_cli(&est)?;
    let csv_same = csvs[0] == csvs[1];
    check(
        csv_same && three_same && est_same,
        format!(
            "gghz sweep CSV identical: {csv_same} ({} bytes); three-param sweep identical: {three_same}; estimate JSON identical: {est_same}",
            csvs[0].len()
        ),
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut failures = 0;
    let mut report = |id: usize, name: &str, verdict: Verdict| {
        let (tag, detail) = match verdict {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{id:>2}] {name}: {detail}");
    };

    report(1, "GHZ maximal violation", ghz_maximal_violation());
    let rows = gghz_rows();
    report(2, "GGHZ analytic curve", gghz_curve(&rows));
    report(3, "nonviolation below τ = 1/2", nonviolation_threshold(&rows));
    report(4, "MS analytic curve", ms_curve());
    report(5, "canonical angle sets", canonical_settings());
    report(6, "3-parameter family bounds", family_bounds());
    report(7, "3-tangle invariances and closed forms", tangle_properties());
    report(8, "CHSH analogue", chsh_analogue());
    report(9, "biseparable bound", biseparable_bound());
    report(10, "τ from shots", tau_from_shots());
    report(11, "determinism", determinism());

    println!(
        "acceptance: {} of 11 criteria passed in {:.1}s",
        11 - failures,
        started.elapsed().as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
