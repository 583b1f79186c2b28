//! Finite-shot simulation of local spin measurements, and estimation of the
//! 3-tangle of a generalized GHZ state from measured Svetlichny
//! correlators.
//!
//! At the xy-plane setting every generalized GHZ state gives
//! `S = 4 √(2τ)`, so `τ̂ = Ŝ² / 32`. This holds below the kink too, where
//! that setting is not the maximizing one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bell::{expectation, Direction, SvetlichnySetting, SVETLICHNY_SIGNS};
use crate::error::{Error, Result};
use crate::maximize::gghz_xy_setting;
use crate::qalg::{identity2, kron3, ComplexMatrix};
use crate::states::PureState3;
use crate::stream_seed;

/// Joint outcome counts of a three-qubit measurement. Index bit 2 is qubit
/// 1; a set bit means outcome `−1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub counts: [u64; 8],
}

impl OutcomeCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The `(±1, ±1, ±1)` outcome labelled by `index`.
    pub fn outcome(index: usize) -> [i8; 3] {
        std::array::from_fn(|q| if (index >> (2 - q)) & 1 == 0 { 1 } else { -1 })
    }

    pub fn count(&self, outcome: [i8; 3]) -> u64 {
        let idx = outcome
            .iter()
            .fold(0, |acc, &o| (acc << 1) | usize::from(o < 0));
        self.counts[idx]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorEstimate {
    pub value: f64,
    pub shots: u64,
    pub std_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauEstimate {
    pub s_estimate: f64,
    pub tau_hat: f64,
    pub shots_per_setting: u64,
    pub seed: u64,
}

fn projector(dir: &Direction, outcome: usize) -> ComplexMatrix {
    let sign = if outcome == 0 { 0.5 } else { -0.5 };
    &(&identity2() * 0.5) + &(&dir.observable() * sign)
}

/// Born-rule probabilities of the eight joint outcomes, indexed as in
/// [`OutcomeCounts`].
pub fn outcome_probabilities(state: &PureState3, dirs: (Direction, Direction, Direction)) -> [f64; 8] {
    let (a, b, c) = dirs;
    std::array::from_fn(|idx| {
        let op = kron3(
            &projector(&a, (idx >> 2) & 1),
            &projector(&b, (idx >> 1) & 1),
            &projector(&c, idx & 1),
        )
        .expect("8x8");
        expectation(state, &op).expect("projectors are hermitian").max(0.0)
    })
}

/// Draw `shots` joint outcomes of measuring `a·σ ⊗ b·σ ⊗ c·σ` on `state`
/// by inverse-CDF sampling of the exact joint distribution.
pub fn sample_outcomes(
    state: &PureState3,
    dirs: (Direction, Direction, Direction),
    shots: u64,
    seed: u64,
) -> Result<OutcomeCounts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let probs = outcome_probabilities(state, dirs);
    let mut cdf = [0.0; 8];
    let mut acc = 0.0;
    for (slot, p) in cdf.iter_mut().zip(probs) {
        acc += p;
        *slot = acc;
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = OutcomeCounts::default();
    for _ in 0..shots {
        let u = rng.gen::<f64>() * total;
        let idx = cdf.iter().position(|&c| u < c).unwrap_or_else(|| {
            // u == total only through rounding; take the last populated outcome
            probs.iter().rposition(|&p| p > 0.0).unwrap_or(7)
        });
        counts.counts[idx] += 1;
    }
    Ok(counts)
}

/// Mean of the outcome product `i·j·k`.
pub fn estimate_correlator(counts: &OutcomeCounts) -> Result<CorrelatorEstimate> {
    let shots = counts.total();
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let signed: i64 = counts
        .counts
        .iter()
        .enumerate()
        .map(|(idx, &n)| {
            let parity: i64 = OutcomeCounts::outcome(idx).iter().map(|&o| o as i64).product();
            parity * n as i64
        })
        .sum();
    let value = signed as f64 / shots as f64;
    Ok(CorrelatorEstimate {
        value,
        shots,
        std_error: ((1.0 - value * value).max(0.0) / shots as f64).sqrt(),
    })
}

/// The eight correlator estimates, in [`SVETLICHNY_SIGNS`] order. Term `k`
/// is sampled with its own stream derived from `(seed, k)`.
pub fn estimate_svetlichny_terms(
    state: &PureState3,
    setting: &SvetlichnySetting,
    shots_per_setting: u64,
    seed: u64,
) -> Result<[CorrelatorEstimate; 8]> {
    let mut out = [CorrelatorEstimate {
        value: 0.0,
        shots: 0,
        std_error: 0.0,
    }; 8];
    for (k, slot) in out.iter_mut().enumerate() {
        let counts = sample_outcomes(state, setting.term_directions(k), shots_per_setting, stream_seed(seed, k as u64))?;
        *slot = estimate_correlator(&counts)?;
    }
    Ok(out)
}

/// Combined standard error of the signed correlator sum.
pub fn combined_std_error(terms: &[CorrelatorEstimate; 8]) -> f64 {
    terms.iter().map(|t| t.std_error * t.std_error).sum::<f64>().sqrt()
}

/// Signed sum of the eight estimated correlators.
pub fn estimate_svetlichny(state: &PureState3, setting: &SvetlichnySetting, shots_per_setting: u64, seed: u64) -> Result<f64> {
    let terms = estimate_svetlichny_terms(state, setting, shots_per_setting, seed)?;
    Ok(terms.iter().zip(SVETLICHNY_SIGNS).map(|(t, s)| s * t.value).sum())
}

/// Estimate the 3-tangle of a generalized GHZ state by measuring `S` at the
/// xy-plane setting and inverting `S = 4 √(2τ)`.
pub fn estimate_tau_gghz(state: &PureState3, shots_per_setting: u64, seed: u64) -> Result<TauEstimate> {
    let s_estimate = estimate_svetlichny(state, &gghz_xy_setting(), shots_per_setting, seed)?;
    Ok(TauEstimate {
        s_estimate,
        tau_hat: (s_estimate * s_estimate / 32.0).clamp(0.0, 1.0),
        shots_per_setting,
        seed,
    })
}
