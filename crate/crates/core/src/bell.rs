//! Measurement directions and the Svetlichny and CHSH observables.
//!
//! The Svetlichny operator is
//!
//! ```text
//! S = A(BK + B'K') + A'(BK' − B'K),   K = C + C',  K' = C − C'
//!   = ABC + ABC' + AB'C − AB'C' + A'BC − A'BC' − A'B'C − A'B'C'
//! ```
//!
//! and hybrid nonlocal-local realistic models satisfy `|<S>| ≤ 4`. The
//! eight-term expansion is the canonical sign convention used throughout
//! the crate, including by the shot estimator.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qalg::{kron, kron3, pauli_projection, ComplexMatrix, ComplexVector};
use crate::states::{PureState2, PureState3};

/// Local-realistic bound on `|<S>|`.
pub const SVETLICHNY_LOCAL_BOUND: f64 = 4.0;
/// Quantum (algebraic) maximum of `|<S>|`, `4√2`.
pub const SVETLICHNY_QUANTUM_MAX: f64 = 4.0 * std::f64::consts::SQRT_2;
/// Imaginary part of an expectation value tolerated as rounding noise.
pub const IMAG_RESIDUE: f64 = 1e-10;
/// `d · d'` tolerance for the orthogonal reparameterization of `b, b'`.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// The signs of the eight `(A|A', B|B', C|C')` terms, indexed by
/// `4*a_prime + 2*b_prime + c_prime`.
pub const SVETLICHNY_SIGNS: [f64; 8] = [1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -1.0];

/// A unit vector on the Bloch sphere, `(sinθ cosφ, sinθ sinφ, cosθ)`.
///
/// Angles are kept canonical: `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    /// Any pair of angles; the stored angles are reduced to the canonical
    /// range while describing the same vector.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        Self {
            theta,
            phi: crate::states::wrap_angle(phi),
        }
    }

    /// Direction of a nonzero Cartesian vector (normalized first).
    pub fn from_vector(v: [f64; 3]) -> Self {
        let rho = v[0].hypot(v[1]);
        let theta = rho.atan2(v[2]);
        let phi = if rho == 0.0 { 0.0 } else { v[1].atan2(v[0]) };
        Self::new(theta, phi)
    }

    pub fn plus_x() -> Self {
        Self::new(PI / 2.0, 0.0)
    }

    pub fn plus_y() -> Self {
        Self::new(PI / 2.0, PI / 2.0)
    }

    pub fn plus_z() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn minus_z() -> Self {
        Self::new(PI, 0.0)
    }

    pub fn vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn observable(&self) -> ComplexMatrix {
        pauli_projection(self)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(self.vector(), other.vector())
    }
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn add(a: [f64; 3], b: [f64; 3], k: f64) -> [f64; 3] {
    [a[0] + k * b[0], a[1] + k * b[1], a[2] + k * b[2]]
}

fn scaled(a: [f64; 3], k: f64) -> [f64; 3] {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// The six measurement directions of a Svetlichny experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvetlichnySetting {
    pub a: Direction,
    pub a_prime: Direction,
    pub b: Direction,
    pub b_prime: Direction,
    pub c: Direction,
    pub c_prime: Direction,
}

impl SvetlichnySetting {
    /// Build from the 12 angles `(θa, φa, θa', φa', θb, φb, θb', φb', θc, φc, θc', φc')`.
    pub fn from_angles(x: &[f64; 12]) -> Self {
        Self {
            a: Direction::new(x[0], x[1]),
            a_prime: Direction::new(x[2], x[3]),
            b: Direction::new(x[4], x[5]),
            b_prime: Direction::new(x[6], x[7]),
            c: Direction::new(x[8], x[9]),
            c_prime: Direction::new(x[10], x[11]),
        }
    }

    pub fn angles(&self) -> [f64; 12] {
        let d = self.directions();
        std::array::from_fn(|k| if k % 2 == 0 { d[k / 2].theta } else { d[k / 2].phi })
    }

    pub fn directions(&self) -> [Direction; 6] {
        [self.a, self.a_prime, self.b, self.b_prime, self.c, self.c_prime]
    }

    /// Directions used for correlator term `k` of [`SVETLICHNY_SIGNS`].
    pub fn term_directions(&self, k: usize) -> (Direction, Direction, Direction) {
        (
            if k & 4 == 0 { self.a } else { self.a_prime },
            if k & 2 == 0 { self.b } else { self.b_prime },
            if k & 1 == 0 { self.c } else { self.c_prime },
        )
    }
}

/// Orthogonal reparameterization of Bob's pair:
/// `b + b' = 2 d cosθ`, `b − b' = 2 d' sinθ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DPrimeSetting {
    pub d: Direction,
    pub d_prime: Direction,
    pub theta: f64,
}

/// Recover `b = d cosθ + d' sinθ` and `b' = d cosθ − d' sinθ`.
pub fn bb_from_dd(dp: &DPrimeSetting) -> Result<(Direction, Direction)> {
    let overlap = dp.d.dot(&dp.d_prime);
    if overlap.abs() > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal(overlap));
    }
    let (s, c) = dp.theta.sin_cos();
    let d = dp.d.vector();
    let dq = dp.d_prime.vector();
    let b = add(scaled(d, c), dq, s);
    let bp = add(scaled(d, c), dq, -s);
    Ok((Direction::from_vector(b), Direction::from_vector(bp)))
}

/// Inverse of [`bb_from_dd`] for `θ ∈ [0, π/2]`. When `b = ±b'` one of `d`,
/// `d'` is undetermined and an arbitrary orthogonal direction is chosen.
pub fn dd_from_bb(b: &Direction, b_prime: &Direction) -> DPrimeSetting {
    let bv = b.vector();
    let bpv = b_prime.vector();
    let sum = add(bv, bpv, 1.0);
    let diff = add(bv, bpv, -1.0);
    let (ns, nd) = (norm(sum), norm(diff));
    let theta = nd.atan2(ns);
    let (d, d_prime) = if ns > 1e-12 && nd > 1e-12 {
        (scaled(sum, 1.0 / ns), scaled(diff, 1.0 / nd))
    } else if ns > 1e-12 {
        let d = scaled(sum, 1.0 / ns);
        (d, any_orthogonal(d))
    } else {
        let dq = scaled(diff, 1.0 / nd);
        (any_orthogonal(dq), dq)
    };
    DPrimeSetting {
        d: Direction::from_vector(d),
        d_prime: Direction::from_vector(d_prime),
        theta,
    }
}

fn any_orthogonal(v: [f64; 3]) -> [f64; 3] {
    let helper = if v[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let w = add(helper, v, -dot(helper, v));
    scaled(w, 1.0 / norm(w))
}

/// Dense 8x8 Svetlichny operator for a setting.
pub fn svetlichny_operator(setting: &SvetlichnySetting) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(8, 8).expect("8x8");
    for (k, &sign) in SVETLICHNY_SIGNS.iter().enumerate() {
        let (a, b, c) = setting.term_directions(k);
        let term = kron3(&a.observable(), &b.observable(), &c.observable()).expect("8x8");
        acc = &acc + &(&term * sign);
    }
    acc
}

/// Dense 4x4 CHSH operator `AB + AB' + A'B − A'B'`.
pub fn chsh_operator(a: &Direction, a_prime: &Direction, b: &Direction, b_prime: &Direction) -> ComplexMatrix {
    let (oa, oap) = (a.observable(), a_prime.observable());
    let (ob, obp) = (b.observable(), b_prime.observable());
    let k = |x: &ComplexMatrix, y: &ComplexMatrix| kron(x, y).expect("4x4");
    &(&(&k(&oa, &ob) + &k(&oa, &obp)) + &k(&oap, &ob)) - &k(&oap, &obp)
}

/// `<ψ|O|ψ>` for a Hermitian observable. Imaginary residue up to
/// [`IMAG_RESIDUE`] (relative to the operator scale) is discarded.
pub fn expectation(state: &impl AsRef<ComplexVector>, observable: &ComplexMatrix) -> Result<f64> {
    let psi = state.as_ref();
    if observable.rows() != psi.dim() || observable.cols() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            actual: observable.rows(),
        });
    }
    let value = psi.inner(&observable.apply(psi)?);
    let scale = observable.entries().iter().map(|z| z.norm()).fold(1.0, f64::max);
    if value.im.abs() > IMAG_RESIDUE * scale {
        return Err(Error::NonHermitian(value.im));
    }
    Ok(value.re)
}

impl AsRef<ComplexVector> for PureState3 {
    fn as_ref(&self) -> &ComplexVector {
        self.amplitudes()
    }
}

impl AsRef<ComplexVector> for PureState2 {
    fn as_ref(&self) -> &ComplexVector {
        self.amplitudes()
    }
}

impl AsRef<ComplexVector> for ComplexVector {
    fn as_ref(&self) -> &ComplexVector {
        self
    }
}

/// `|<ψ|S|ψ>|` evaluated with the dense operator.
pub fn svetlichny_value(state: &PureState3, setting: &SvetlichnySetting) -> f64 {
    expectation(state, &svetlichny_operator(setting))
        .expect("svetlichny operator is 8x8 hermitian")
        .abs()
}

/// Action of a Pauli (1 = x, 2 = y, 3 = z) on a single basis bit:
/// returns the flipped bit and the phase.
fn pauli_on_bit(pauli: usize, bit: usize) -> (usize, Complex64) {
    match (pauli, bit) {
        (1, b) => (b ^ 1, Complex64::new(1.0, 0.0)),
        (2, 0) => (1, Complex64::new(0.0, 1.0)),
        (2, _) => (0, Complex64::new(0.0, -1.0)),
        (3, 0) => (0, Complex64::new(1.0, 0.0)),
        (3, _) => (1, Complex64::new(-1.0, 0.0)),
        _ => unreachable!("pauli index in 1..=3"),
    }
}

/// The correlation tensor `T_ijk = <σi ⊗ σj ⊗ σk>` of a three-qubit state.
///
/// Every triple correlator is the trilinear form `<ABC> = Σ a_i b_j c_k T_ijk`,
/// so Svetlichny values for many settings can be evaluated without building
/// 8x8 matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Correlations3 {
    t: [[[f64; 3]; 3]; 3],
}

impl Correlations3 {
    pub fn new(state: &PureState3) -> Self {
        let amps = state.amplitudes().entries();
        let mut t = [[[0.0; 3]; 3]; 3];
        for (i, plane) in t.iter_mut().enumerate() {
            for (j, row) in plane.iter_mut().enumerate() {
                for (k, slot) in row.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (idx, amp) in amps.iter().enumerate() {
                        let (b1, p1) = pauli_on_bit(i + 1, (idx >> 2) & 1);
                        let (b2, p2) = pauli_on_bit(j + 1, (idx >> 1) & 1);
                        let (b3, p3) = pauli_on_bit(k + 1, idx & 1);
                        let out = (b1 << 2) | (b2 << 1) | b3;
                        acc += amps[out].conj() * p1 * p2 * p3 * amp;
                    }
                    *slot = acc.re;
                }
            }
        }
        Self { t }
    }

    pub fn tensor(&self) -> &[[[f64; 3]; 3]; 3] {
        &self.t
    }

    /// `<(a·σ)(b·σ)(c·σ)>` for arbitrary (not necessarily unit) vectors.
    #[allow(clippy::needless_range_loop)]
    pub fn correlator(&self, a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let ab = a[i] * b[j];
                let row = &self.t[i][j];
                acc += ab * (row[0] * c[0] + row[1] * c[1] + row[2] * c[2]);
            }
        }
        acc
    }

    /// Signed `<S>` from six Cartesian unit vectors `[a, a', b, b', c, c']`.
    pub fn svetlichny_vectors(&self, v: &[[f64; 3]; 6]) -> f64 {
        let [a, ap, b, bp, c, cp] = *v;
        let k = add(c, cp, 1.0);
        let kp = add(c, cp, -1.0);
        // <S> = a·(M_K b + M_K' b') + a'·(M_K' b − M_K b'), M_K = T contracted with K
        let mut acc = 0.0;
        for i in 0..3 {
            let mut row_a = 0.0;
            let mut row_ap = 0.0;
            for j in 0..3 {
                let t = &self.t[i][j];
                let mk = t[0] * k[0] + t[1] * k[1] + t[2] * k[2];
                let mkp = t[0] * kp[0] + t[1] * kp[1] + t[2] * kp[2];
                row_a += mk * b[j] + mkp * bp[j];
                row_ap += mkp * b[j] - mk * bp[j];
            }
            acc += a[i] * row_a + ap[i] * row_ap;
        }
        acc
    }

    /// Signed `<S>`.
    pub fn svetlichny(&self, setting: &SvetlichnySetting) -> f64 {
        let d = setting.directions();
        self.svetlichny_vectors(&std::array::from_fn(|k| d[k].vector()))
    }
}

/// The correlation matrix `T_ij = <σi ⊗ σj>` of a two-qubit state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Correlations2 {
    t: [[f64; 3]; 3],
}

impl Correlations2 {
    pub fn new(state: &PureState2) -> Self {
        let amps = state.amplitudes().entries();
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (idx, amp) in amps.iter().enumerate() {
                    let (b1, p1) = pauli_on_bit(i + 1, (idx >> 1) & 1);
                    let (b2, p2) = pauli_on_bit(j + 1, idx & 1);
                    acc += amps[(b1 << 1) | b2].conj() * p1 * p2 * amp;
                }
                *slot = acc.re;
            }
        }
        Self { t }
    }

    #[allow(clippy::needless_range_loop)]
    pub fn correlator(&self, a: [f64; 3], b: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                acc += a[i] * b[j] * self.t[i][j];
            }
        }
        acc
    }

    /// Signed CHSH value from `[a, a', b, b']`.
    pub fn chsh_vectors(&self, v: &[[f64; 3]; 4]) -> f64 {
        let [a, ap, b, bp] = *v;
        self.correlator(a, add(b, bp, 1.0)) + self.correlator(ap, add(b, bp, -1.0))
    }
}
