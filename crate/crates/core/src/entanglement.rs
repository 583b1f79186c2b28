//! Concurrences and the 3-tangle of three-qubit pure states.
//!
//! The 3-tangle is `τ = C²_{1(23)} − C²_{12} − C²_{13}` with qubit 1 as the
//! pivot. For the two families this gives closed forms:
//!
//! * generalized GHZ: `C12 = C13 = 0`, `C_{1(23)} = |sin 2θ1|`, `τ = sin² 2θ1`
//! * maximal slice: `C13 = 0`, `C_{1(23)} = 1`, `C12 = |cos θ3|`, `τ = sin² θ3`
//!
//! Note that `C12` of the maximal slice states is `|cos θ3|`; it is its
//! square `cos² θ3` that enters the tangle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qalg::{self, bit_of, kron, nonnegative_spectrum, sigma_y, ComplexMatrix};
use crate::states::PureState3;

/// Values this far outside `[0, 1]` are still treated as rounding noise.
pub const RANGE_SLACK: f64 = 1e-10;

fn clamp_unit(x: f64) -> f64 {
    debug_assert!(
        x > -1e-6 && x < 1.0 + 1e-6,
        "entanglement measure {x} far outside [0, 1]"
    );
    x.clamp(0.0, 1.0)
}

fn check_pair(i: usize, j: usize) -> Result<usize> {
    for q in [i, j] {
        if !(1..=3).contains(&q) {
            return Err(Error::InvalidQubit(q));
        }
    }
    if i == j {
        return Err(Error::SameQubit(i));
    }
    Ok(6 - i - j)
}

/// `v^T (σy ⊗ σy) w` for two-qubit vectors.
fn spin_flip_form(v: &[Complex64; 4], w: &[Complex64; 4]) -> Complex64 {
    -v[0] * w[3] + v[1] * w[2] + v[2] * w[1] - v[3] * w[0]
}

/// Squared Wootters concurrence `C²_{ij}` of the reduced state of qubits
/// `i` and `j`.
///
/// The reduced state is `Σ_k |v_k><v_k|` where `v_k` is the (unnormalized)
/// two-qubit vector obtained by fixing the third qubit to `k`. The Wootters
/// λ's are the singular values of the 2x2 matrix `T_kl = v_kᵀ(σy⊗σy)v_l`,
/// and with at most two of them nonzero `C² = (λ1 − λ2)² = ‖T‖²_F − 2|det T|`.
/// This gives the same value as the eigenvalue route of
/// [`wootters_concurrence`] but never takes square roots of near-zero
/// eigenvalues.
pub fn pair_tangle(state: &PureState3, i: usize, j: usize) -> Result<f64> {
    let traced = check_pair(i, j)?;
    let (first, second) = (i.min(j), i.max(j));
    let mut v = [[Complex64::new(0.0, 0.0); 4]; 2];
    for (idx, &amp) in state.amplitudes().entries().iter().enumerate() {
        let k = (idx >> bit_of(traced)) & 1;
        let a = (idx >> bit_of(first)) & 1;
        let b = (idx >> bit_of(second)) & 1;
        v[k][(a << 1) | b] = amp;
    }
    let t00 = spin_flip_form(&v[0], &v[0]);
    let t01 = spin_flip_form(&v[0], &v[1]);
    let t11 = spin_flip_form(&v[1], &v[1]);
    let frob = t00.norm_sqr() + 2.0 * t01.norm_sqr() + t11.norm_sqr();
    let det = (t00 * t11 - t01 * t01).norm();
    Ok(clamp_unit(frob - 2.0 * det))
}

/// Wootters concurrence `C_{ij}` between qubits `i` and `j`.
pub fn concurrence_pair(state: &PureState3, i: usize, j: usize) -> Result<f64> {
    Ok(pair_tangle(state, i, j)?.sqrt())
}

/// Wootters concurrence of an arbitrary two-qubit density matrix, computed
/// from the spectrum of `ρ (σy⊗σy) ρ* (σy⊗σy)`.
pub fn wootters_concurrence(rho: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.rows().max(rho.cols()),
        });
    }
    let yy = kron(&sigma_y(), &sigma_y())?;
    let tilde = yy.matmul(&rho.conj())?.matmul(&yy)?;
    let mut lambdas: Vec<f64> = nonnegative_spectrum(&rho.matmul(&tilde)?)?
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok(clamp_unit(
        (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0),
    ))
}

/// `C²_{i(jk)} = 4 det ρ_i`.
pub fn one_vs_rest_tangle(state: &PureState3, i: usize) -> Result<f64> {
    if !(1..=3).contains(&i) {
        return Err(Error::InvalidQubit(i));
    }
    let mut p0 = 0.0;
    let mut p1 = 0.0;
    let mut coh = Complex64::new(0.0, 0.0);
    let bit = bit_of(i);
    let amps = state.amplitudes().entries();
    for (idx, amp) in amps.iter().enumerate() {
        if (idx >> bit) & 1 == 0 {
            p0 += amp.norm_sqr();
            coh += amp * amps[idx | (1 << bit)].conj();
        } else {
            p1 += amp.norm_sqr();
        }
    }
    Ok(clamp_unit(4.0 * (p0 * p1 - coh.norm_sqr())))
}

/// Concurrence between qubit `i` and the other two, `2 √(det ρ_i)`.
pub fn concurrence_one_vs_rest(state: &PureState3, i: usize) -> Result<f64> {
    Ok(one_vs_rest_tangle(state, i)?.sqrt())
}

/// The 3-tangle computed with an arbitrary pivot qubit. All pivots agree
/// for pure states.
pub fn three_tangle_with_pivot(state: &PureState3, pivot: usize) -> Result<f64> {
    if !(1..=3).contains(&pivot) {
        return Err(Error::InvalidQubit(pivot));
    }
    let others: Vec<usize> = (1..=3).filter(|&q| q != pivot).collect();
    let tau = one_vs_rest_tangle(state, pivot)?
        - pair_tangle(state, pivot, others[0])?
        - pair_tangle(state, pivot, others[1])?;
    Ok(clamp_unit(tau))
}

/// The 3-tangle `τ = C²_{1(23)} − C²_{12} − C²_{13}`.
pub fn three_tangle(state: &PureState3) -> f64 {
    three_tangle_with_pivot(state, 1).expect("qubit 1 is a valid pivot")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementSummary {
    pub c12: f64,
    pub c13: f64,
    pub c23: f64,
    pub c1_23: f64,
    pub tau: f64,
}

pub fn summary(state: &PureState3) -> EntanglementSummary {
    let pair = |i, j| concurrence_pair(state, i, j).expect("valid pair");
    EntanglementSummary {
        c12: pair(1, 2),
        c13: pair(1, 3),
        c23: pair(2, 3),
        c1_23: concurrence_one_vs_rest(state, 1).expect("valid qubit"),
        tau: three_tangle(state),
    }
}

/// Concurrence of the reduced pair state via the general eigenvalue route.
pub fn concurrence_pair_spectral(state: &PureState3, i: usize, j: usize) -> Result<f64> {
    check_pair(i, j)?;
    let rho = qalg::partial_trace(&state.density_matrix(), &[i, j])?;
    wootters_concurrence(&rho)
}
