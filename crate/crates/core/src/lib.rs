//! Tripartite entanglement and genuine tripartite nonlocality of
//! three-qubit pure states.
//!
//! * [`states`]: generalized GHZ, maximal slice and 3-parameter family states
//! * [`entanglement`]: concurrences and the 3-tangle
//! * [`bell`]: Svetlichny and CHSH observables and exact expectation values
//! * [`maximize`]: closed-form and numerical maximal violations
//! * [`shots`]: finite-shot estimation of correlators and of the 3-tangle

pub mod bell;
pub mod entanglement;
pub mod error;
pub mod maximize;
pub mod qalg;
pub mod shots;
pub mod simplex;
pub mod states;

pub use bell::{
    bb_from_dd, chsh_operator, dd_from_bb, expectation, svetlichny_operator, svetlichny_value, Correlations3,
    DPrimeSetting, Direction, SvetlichnySetting, SVETLICHNY_LOCAL_BOUND, SVETLICHNY_QUANTUM_MAX,
};
pub use entanglement::{
    concurrence_one_vs_rest, concurrence_pair, summary, three_tangle, EntanglementSummary,
};
pub use error::{Error, Result};
pub use maximize::{
    chsh_max_pair, maximize_svetlichny, optimal_setting_gghz, optimal_setting_ms, smax_gghz_analytic,
    smax_ms_analytic, verify_family_bounds, BoundReport, OptResult, DEFAULT_BUDGET,
};
pub use qalg::{ComplexMatrix, ComplexVector};
pub use shots::{estimate_svetlichny, estimate_tau_gghz, sample_outcomes, CorrelatorEstimate, OutcomeCounts, TauEstimate};
pub use states::{gghz, maximal_slice, swap_qubits, three_param, Family, FamilyParams, PureState2, PureState3};

pub use num_complex::Complex64;

/// Seed of an independent random stream `stream` derived from a master
/// seed (SplitMix64 finalizer).
pub fn stream_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
