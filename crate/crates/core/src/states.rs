//! Three-qubit (and two-qubit) pure states and the GHZ-class families.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qalg::{bit_of, ComplexMatrix, ComplexVector, ZERO};

/// Normalized pure state of three qubits, amplitudes indexed by `|q1 q2 q3>`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PureState3 {
    amplitudes: ComplexVector,
}

impl PureState3 {
    /// Normalized copy of eight raw amplitudes.
    pub fn from_amplitudes(raw: [Complex64; 8]) -> Result<Self> {
        let amplitudes = ComplexVector::new(raw.to_vec())?.normalized()?;
        Ok(Self { amplitudes })
    }

    pub fn from_real(raw: [f64; 8]) -> Result<Self> {
        Self::from_amplitudes(raw.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn basis(index: usize) -> Self {
        Self {
            amplitudes: ComplexVector::basis(8, index).expect("8 is a valid dimension"),
        }
    }

    /// `|a> ⊗ |b> ⊗ |c>` for single-qubit states.
    pub fn product(a: [Complex64; 2], b: [Complex64; 2], c: [Complex64; 2]) -> Result<Self> {
        let mut raw = [ZERO; 8];
        for (idx, slot) in raw.iter_mut().enumerate() {
            *slot = a[(idx >> 2) & 1] * b[(idx >> 1) & 1] * c[idx & 1];
        }
        Self::from_amplitudes(raw)
    }

    /// `|pair>_{12} ⊗ |single>_3`.
    pub fn pair_times_single(pair: &PureState2, single: [Complex64; 2]) -> Result<Self> {
        let mut raw = [ZERO; 8];
        for (idx, slot) in raw.iter_mut().enumerate() {
            *slot = pair.amplitudes()[idx >> 1] * single[idx & 1];
        }
        Self::from_amplitudes(raw)
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    /// `|<self|other>|`, which is 1 exactly when the states agree up to a
    /// global phase.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amplitudes.inner(&other.amplitudes).norm()
    }

    /// Apply single-qubit unitaries `u1 ⊗ u2 ⊗ u3` (each 2x2).
    pub fn apply_local(&self, u: [&ComplexMatrix; 3]) -> Result<Self> {
        let op = crate::qalg::kron3(u[0], u[1], u[2])?;
        let amplitudes = op.apply(&self.amplitudes)?;
        Ok(Self { amplitudes })
    }
}

/// Normalized pure state of two qubits, amplitudes indexed by `|q1 q2>`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PureState2 {
    amplitudes: ComplexVector,
}

impl PureState2 {
    pub fn from_amplitudes(raw: [Complex64; 4]) -> Result<Self> {
        let amplitudes = ComplexVector::new(raw.to_vec())?.normalized()?;
        Ok(Self { amplitudes })
    }

    pub fn from_real(raw: [f64; 4]) -> Result<Self> {
        Self::from_amplitudes(raw.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    /// Pure-state concurrence `2 |a00 a11 - a01 a10|`.
    pub fn concurrence(&self) -> f64 {
        let a = self.amplitudes.entries();
        (2.0 * (a[0] * a[3] - a[1] * a[2]).norm()).min(1.0)
    }
}

/// `cos θ1 |000> + sin θ1 |111>`
pub fn gghz(theta1: f64) -> PureState3 {
    let mut raw = [ZERO; 8];
    raw[0] = Complex64::new(theta1.cos(), 0.0);
    raw[7] = Complex64::new(theta1.sin(), 0.0);
    PureState3 {
        amplitudes: ComplexVector::new(raw.to_vec()).expect("dim 8"),
    }
}

/// `(|000> + |11>(cos θ3 |0> + sin θ3 |1>)) / √2`
pub fn maximal_slice(theta3: f64) -> PureState3 {
    let mut raw = [ZERO; 8];
    raw[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    raw[6] = Complex64::new(theta3.cos() * FRAC_1_SQRT_2, 0.0);
    raw[7] = Complex64::new(theta3.sin() * FRAC_1_SQRT_2, 0.0);
    PureState3 {
        amplitudes: ComplexVector::new(raw.to_vec()).expect("dim 8"),
    }
}

/// `cos θ1 |000> + sin θ1 |1>(cos θ2|0> + sin θ2|1>)(cos θ3|0> + sin θ3|1>)`
pub fn three_param(theta1: f64, theta2: f64, theta3: f64) -> PureState3 {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    let (s3, c3) = theta3.sin_cos();
    let mut raw = [0.0; 8];
    raw[0] = c1;
    raw[0b100] = s1 * c2 * c3;
    raw[0b101] = s1 * c2 * s3;
    raw[0b110] = s1 * s2 * c3;
    raw[0b111] = s1 * s2 * s3;
    PureState3 {
        amplitudes: ComplexVector::new(raw.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .expect("dim 8"),
    }
}

/// Exchange qubits `i` and `j` (labels 1..=3).
pub fn swap_qubits(state: &PureState3, i: usize, j: usize) -> Result<PureState3> {
    for q in [i, j] {
        if !(1..=3).contains(&q) {
            return Err(Error::InvalidQubit(q));
        }
    }
    if i == j {
        return Err(Error::SameQubit(i));
    }
    let (bi, bj) = (bit_of(i), bit_of(j));
    let mut raw = [ZERO; 8];
    for (idx, &amp) in state.amplitudes.entries().iter().enumerate() {
        let xi = (idx >> bi) & 1;
        let xj = (idx >> bj) & 1;
        let swapped = (idx & !(1 << bi) & !(1 << bj)) | (xi << bj) | (xj << bi);
        raw[swapped] = amp;
    }
    Ok(PureState3 {
        amplitudes: ComplexVector::new(raw.to_vec())?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Gghz,
    Ms,
    ThreeParam,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gghz => "gghz",
            Family::Ms => "ms",
            Family::ThreeParam => "three-param",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "gghz" => Ok(Family::Gghz),
            "ms" => Ok(Family::Ms),
            "three-param" | "three_param" => Ok(Family::ThreeParam),
            other => Err(format!("unknown family `{other}` (expected gghz, ms or three-param)")),
        }
    }
}

/// A member of one of the state families. Angles that a family does not use
/// are stored as 0 so every record has the same shape.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl FamilyParams {
    pub fn gghz(theta1: f64) -> Self {
        Self {
            family: Family::Gghz,
            theta1: wrap_angle(theta1),
            theta2: 0.0,
            theta3: 0.0,
        }
    }

    pub fn ms(theta3: f64) -> Self {
        Self {
            family: Family::Ms,
            theta1: 0.0,
            theta2: 0.0,
            theta3: wrap_angle(theta3),
        }
    }

    pub fn three_param(theta1: f64, theta2: f64, theta3: f64) -> Self {
        Self {
            family: Family::ThreeParam,
            theta1: wrap_angle(theta1),
            theta2: wrap_angle(theta2),
            theta3: wrap_angle(theta3),
        }
    }

    /// The family's own sweep parameter (θ1 for GGHZ and the 3-parameter
    /// family, θ3 for maximal slice).
    pub fn primary_angle(&self) -> f64 {
        match self.family {
            Family::Ms => self.theta3,
            Family::Gghz | Family::ThreeParam => self.theta1,
        }
    }

    pub fn state(&self) -> PureState3 {
        match self.family {
            Family::Gghz => gghz(self.theta1),
            Family::Ms => maximal_slice(self.theta3),
            Family::ThreeParam => three_param(self.theta1, self.theta2, self.theta3),
        }
    }
}

/// Reduce an angle into `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    const TOL: f64 = 1e-12;

    fn assert_amps(state: &PureState3, expected: [f64; 8]) {
        for (i, &e) in expected.iter().enumerate() {
            let a = state.amplitude(i);
            assert!((a.re - e).abs() < TOL && a.im.abs() < TOL, "index {i}: {a} vs {e}");
        }
    }

    fn ghz() -> PureState3 {
        PureState3::from_real([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn gghz_examples() {
        assert_eq!(gghz(0.0), PureState3::basis(0));
        assert!((gghz(FRAC_PI_4).overlap(&ghz()) - 1.0).abs() < TOL);
        let h = 3f64.sqrt() / 2.0;
        assert_amps(&gghz(FRAC_PI_6), [h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn maximal_slice_examples() {
        assert!((maximal_slice(FRAC_PI_2).overlap(&ghz()) - 1.0).abs() < TOL);
        let r = FRAC_1_SQRT_2;
        assert_amps(&maximal_slice(0.0), [r, 0.0, 0.0, 0.0, 0.0, 0.0, r, 0.0]);
        assert_amps(&maximal_slice(FRAC_PI_4), [r, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.5]);
    }

    #[test]
    fn three_param_reduces_to_families() {
        for k in 0..20 {
            let t = k as f64 * 0.31;
            assert!(three_param(t, FRAC_PI_2, FRAC_PI_2).amplitudes().entries()
                .iter()
                .zip(gghz(t).amplitudes().entries())
                .all(|(a, b)| (a - b).norm() < TOL));
            assert!((three_param(FRAC_PI_4, FRAC_PI_2, t).overlap(&maximal_slice(t)) - 1.0).abs() < TOL);
            assert!((three_param(0.0, t, 1.3 * t).overlap(&PureState3::basis(0)) - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn swap_examples() {
        let s = swap_qubits(&PureState3::basis(0b001), 2, 3).unwrap();
        assert_eq!(s, PureState3::basis(0b010));
        assert_eq!(swap_qubits(&ghz(), 2, 3).unwrap(), ghz());
        let t = 0.7;
        let r = FRAC_1_SQRT_2;
        assert_amps(
            &swap_qubits(&maximal_slice(t), 2, 3).unwrap(),
            [r, 0.0, 0.0, 0.0, 0.0, t.cos() * r, 0.0, t.sin() * r],
        );
    }

    #[test]
    fn swap_rejects_bad_indices() {
        assert_eq!(swap_qubits(&ghz(), 0, 2), Err(Error::InvalidQubit(0)));
        assert_eq!(swap_qubits(&ghz(), 1, 4), Err(Error::InvalidQubit(4)));
        assert_eq!(swap_qubits(&ghz(), 2, 2), Err(Error::SameQubit(2)));
    }

    #[test]
    fn from_amplitudes_normalizes() {
        assert!((PureState3::from_real([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
            .unwrap()
            .overlap(&gghz(FRAC_PI_4))
            - 1.0)
            .abs()
            < TOL);
        assert_eq!(
            PureState3::from_real([2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap(),
            PureState3::basis(0)
        );
        assert_eq!(PureState3::from_real([0.0; 8]), Err(Error::ZeroNorm));
    }

    #[test]
    fn family_names_round_trip() {
        for f in [Family::Gghz, Family::Ms, Family::ThreeParam] {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("w".parse::<Family>().is_err());
    }

    proptest! {
        #[test]
        fn constructors_are_normalized(t1 in -10.0..10.0f64, t2 in -10.0..10.0f64, t3 in -10.0..10.0f64) {
            for s in [gghz(t1), maximal_slice(t3), three_param(t1, t2, t3)] {
                prop_assert!((s.amplitudes().norm() - 1.0).abs() < TOL);
            }
        }

        #[test]
        fn swap_is_an_involution(
            re in proptest::array::uniform8(-1.0..1.0f64),
            im in proptest::array::uniform8(-1.0..1.0f64),
            pair in 0usize..3,
        ) {
            let raw: [Complex64; 8] = std::array::from_fn(|k| Complex64::new(re[k], im[k]));
            prop_assume!(raw.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6);
            let s = PureState3::from_amplitudes(raw).unwrap();
            let (i, j) = [(1, 2), (1, 3), (2, 3)][pair];
            let back = swap_qubits(&swap_qubits(&s, i, j).unwrap(), i, j).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn wrapped_angles_stay_in_range(x in -100.0..100.0f64) {
            let w = wrap_angle(x);
            prop_assert!((0.0..TAU).contains(&w));
        }
    }
}
