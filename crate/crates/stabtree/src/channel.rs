//! Single-qubit Pauli channels and diamond-distance helpers.

use crate::pauli::{Axis, SingleQubitPauli};
use crate::{Error, Result};
use rand::Rng;
use std::fmt;

/// Tolerance applied when checking that channel rates sum to one; inputs
/// within this slack are renormalized exactly.
const NORMALIZATION_SLACK: f64 = 1e-12;

/// A single-qubit Pauli channel `ρ ↦ Σ_w r_w · w ρ w`, stored as the four
/// rates `(r_I, r_X, r_Y, r_Z)` in canonical letter order.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct PauliChannel {
    r: [f64; 4],
}

impl PauliChannel {
    /// Builds a channel from the four rates. Rates must be non-negative and
    /// sum to one within `1e-12`; the stored rates are renormalized so they
    /// sum to one exactly.
    pub fn new(r_i: f64, r_x: f64, r_y: f64, r_z: f64) -> Result<Self> {
        let r = [r_i, r_x, r_y, r_z];
        for (w, &v) in SingleQubitPauli::ALL.iter().zip(&r) {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidProbability {
                    name: format!("r_{}", w.letter()),
                    value: v,
                });
            }
        }
        let sum: f64 = r.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_SLACK {
            return Err(Error::BadInput(format!(
                "channel rates sum to {sum}, expected 1 within {NORMALIZATION_SLACK}"
            )));
        }
        let mut r = [r_i / sum, r_x / sum, r_y / sum, r_z / sum];
        // Absorb the last ulps of drift into the largest rate so the stored
        // rates sum to one as exactly as f64 allows.
        let largest = (0..4).max_by(|&a, &b| r[a].total_cmp(&r[b])).unwrap();
        let residual = 1.0 - r.iter().sum::<f64>();
        r[largest] += residual;
        Ok(PauliChannel { r })
    }

    /// Independent X and Z flips with probabilities `p_x` and `p_z`:
    /// `r = ((1-p_x)(1-p_z), p_x(1-p_z), p_x p_z, (1-p_x) p_z)`.
    pub fn from_independent_xz(p_x: f64, p_z: f64) -> Result<Self> {
        check_probability("p_x", p_x)?;
        check_probability("p_z", p_z)?;
        PauliChannel::new(
            (1.0 - p_x) * (1.0 - p_z),
            p_x * (1.0 - p_z),
            p_x * p_z,
            (1.0 - p_x) * p_z,
        )
    }

    /// Depolarizing channel: each non-identity letter with rate `eps / 4`,
    /// identity with `1 - 3 eps / 4`.
    pub fn depolarizing(eps: f64) -> Result<Self> {
        check_probability("eps", eps)?;
        if eps > 4.0 / 3.0 {
            return Err(Error::InvalidProbability {
                name: "eps".to_string(),
                value: eps,
            });
        }
        PauliChannel::new(1.0 - 0.75 * eps, eps / 4.0, eps / 4.0, eps / 4.0)
    }

    /// Pure bit-flip channel (X with probability `p`).
    pub fn bit_flip(p: f64) -> Result<Self> {
        check_probability("p", p)?;
        PauliChannel::new(1.0 - p, p, 0.0, 0.0)
    }

    /// Pure phase-flip channel (Z with probability `p`).
    pub fn phase_flip(p: f64) -> Result<Self> {
        check_probability("p", p)?;
        PauliChannel::new(1.0 - p, 0.0, 0.0, p)
    }

    /// Rate of the given letter.
    #[inline]
    pub fn r(&self, w: SingleQubitPauli) -> f64 {
        self.r[w.index()]
    }

    /// All four rates in canonical order.
    pub fn rates(&self) -> [f64; 4] {
        self.r
    }

    /// Transition weight `N(out | in) = r_{out·in}`: the probability that
    /// the channel maps a prior error `in` to the composite error `out`.
    #[inline]
    pub fn transition(&self, out: SingleQubitPauli, input: SingleQubitPauli) -> f64 {
        self.r[out.mul(input).index()]
    }

    /// Probability that the error flips the given axis: X and Y flip axis
    /// `x`; Z and Y flip axis `z`.
    pub fn flip_probability(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.r[1] + self.r[2],
            Axis::Z => self.r[3] + self.r[2],
        }
    }

    /// Draws one error letter.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SingleQubitPauli {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, &r) in self.r.iter().enumerate() {
            acc += r;
            if u < acc {
                return SingleQubitPauli::from_index(i);
            }
        }
        SingleQubitPauli::Z
    }

    /// True when the channel is entanglement-breaking: applied to half of
    /// any entangled state, the output is separable. For a Pauli channel the
    /// Choi state is Bell-diagonal with eigenvalues equal to the rates, and
    /// that state is separable exactly when no rate exceeds one half.
    pub fn is_entanglement_breaking(&self) -> bool {
        self.r.iter().all(|&v| v <= 0.5)
    }
}

impl fmt::Display for PauliChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PauliChannel(I: {:.6}, X: {:.6}, Y: {:.6}, Z: {:.6})",
            self.r[0], self.r[1], self.r[2], self.r[3]
        )
    }
}

fn check_probability(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability {
            name: name.to_string(),
            value,
        })
    }
}

/// Total variation distance between two distributions over Pauli strings
/// (given in a shared enumeration order): half the L1 distance. For the
/// random-Pauli channels the distributions induce, the diamond-norm
/// distance is exactly twice this value, attained on a maximally entangled
/// input.
pub fn pauli_diamond_tvd(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::BadInput(format!(
            "distribution lengths differ: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn independent_xz_rates() {
        let c = PauliChannel::from_independent_xz(0.01, 0.01).unwrap();
        let r = c.rates();
        assert_abs_diff_eq!(r[0], 0.9801, epsilon = 1e-15);
        assert_abs_diff_eq!(r[1], 0.0099, epsilon = 1e-15);
        assert_abs_diff_eq!(r[2], 0.0001, epsilon = 1e-15);
        assert_abs_diff_eq!(r[3], 0.0099, epsilon = 1e-15);
    }

    #[test]
    fn transition_composes_errors() {
        let c = PauliChannel::new(0.4, 0.3, 0.2, 0.1).unwrap();
        use SingleQubitPauli::*;
        // N(X | Y) = r_{X·Y} = r_Z.
        assert_abs_diff_eq!(c.transition(X, Y), 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(c.transition(I, I), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(c.transition(Y, X), c.r(Z), epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(PauliChannel::new(0.5, 0.5, 0.2, 0.0).is_err());
        assert!(PauliChannel::new(-0.1, 0.6, 0.3, 0.2).is_err());
        assert!(PauliChannel::from_independent_xz(1.2, 0.0).is_err());
        assert!(PauliChannel::depolarizing(1.5).is_err());
    }

    #[test]
    fn renormalizes_tiny_drift() {
        let c = PauliChannel::new(0.25, 0.25, 0.25, 0.25 + 4e-13).unwrap();
        let sum: f64 = c.rates().iter().sum();
        assert!((sum - 1.0).abs() <= f64::EPSILON, "sum = {sum:e}");
    }

    #[test]
    fn flip_probabilities_per_axis() {
        let c = PauliChannel::new(0.4, 0.3, 0.2, 0.1).unwrap();
        assert_abs_diff_eq!(c.flip_probability(Axis::X), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.flip_probability(Axis::Z), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn entanglement_breaking_boundary() {
        assert!(PauliChannel::bit_flip(0.5).unwrap().is_entanglement_breaking());
        assert!(!PauliChannel::bit_flip(0.4).unwrap().is_entanglement_breaking());
        assert!(PauliChannel::depolarizing(0.8).unwrap().is_entanglement_breaking());
    }

    #[test]
    fn diamond_tvd_is_half_l1() {
        // A phase-flip channel at p = 0.1 against its Z-composed version:
        // rate vectors (0.9, 0.1) and (0.1, 0.9) over {I, Z}, TVD 0.8.
        let d = pauli_diamond_tvd(&[0.9, 0.1], &[0.1, 0.9]).unwrap();
        assert_abs_diff_eq!(d, 0.8, epsilon = 1e-15);
        let a = PauliChannel::bit_flip(0.1).unwrap();
        let b = PauliChannel::bit_flip(0.3).unwrap();
        let d = pauli_diamond_tvd(&a.rates(), &b.rates()).unwrap();
        assert_abs_diff_eq!(d, 0.2, epsilon = 1e-15);
        assert!(pauli_diamond_tvd(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn sampling_matches_rates() {
        use crate::rng::stream_rng;
        let c = PauliChannel::new(0.4, 0.3, 0.2, 0.1).unwrap();
        let mut rng = stream_rng(7, 0);
        let mut counts = [0u64; 4];
        let n = 200_000;
        for _ in 0..n {
            counts[c.sample(&mut rng).index()] += 1;
        }
        for (i, &want) in c.rates().iter().enumerate() {
            let got = counts[i] as f64 / n as f64;
            // 5 sigma on a Bernoulli count.
            let sigma = (want * (1.0 - want) / n as f64).sqrt();
            assert!(
                (got - want).abs() < 5.0 * sigma,
                "rate {i}: got {got}, want {want}"
            );
        }
    }
}
