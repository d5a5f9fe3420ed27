//! Closed-form decay bounds for stabilizer tree channels.
//!
//! A `[[b, 1]]` encoder applied recursively for `T` levels spreads a
//! root-level logical operator over the leaves. How fast the leaf weight
//! grows — captured by the logical weight-transition matrix and its
//! spectral radius — controls how fast independent noise on every wire
//! erases the input. This module evaluates those growth statistics and the
//! bounds and threshold conditions built from them.
//!
//! Bounds are returned as [`BoundValue`]s: the raw formula value plus a
//! `vacuous` flag set when the value exceeds the trivial cap for the
//! quantity being bounded (2 for diamond-norm differences, 1 for total
//! variation distances and `|1-2q|`-style correlations). Values are
//! reported uncapped so decay curves can be plotted from the raw formula.

use crate::pauli::{CliffordEncoder, PauliString, SingleQubitPauli};
use crate::{Error, Result};

/// Trivial upper bound on a diamond-norm distance between channels.
pub const DIAMOND_CAP: f64 = 2.0;
/// Trivial upper bound on a total variation distance or `|1-2q|`.
pub const UNIT_CAP: f64 = 1.0;

/// A bound value together with a flag marking it trivially true.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    /// True when `value` exceeds the trivial cap for the bounded quantity,
    /// i.e. the bound carries no information.
    pub vacuous: bool,
}

impl BoundValue {
    fn capped_at(value: f64, cap: f64) -> Self {
        BoundValue {
            value,
            vacuous: !(value <= cap),
        }
    }
}

/// Which error types a weight-transition matrix tracks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TransitionMode {
    /// Track X and Z components only (valid when no logical representative
    /// contains a Y letter).
    Xz,
    /// Track X, Y, and Z letters.
    Xyz,
}

/// Logical weight-transition matrix: entry `(w, v)` counts the qubits where
/// the physical representative of logical letter `v` acts as letter `w`.
/// Column `v` therefore sums to the weight of the representative of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightTransition {
    /// Rows and columns ordered `[X, Z]`.
    Xz([[u64; 2]; 2]),
    /// Rows and columns ordered `[X, Y, Z]`.
    Xyz([[u64; 3]; 3]),
}

impl WeightTransition {
    pub fn mode(&self) -> TransitionMode {
        match self {
            WeightTransition::Xz(_) => TransitionMode::Xz,
            WeightTransition::Xyz(_) => TransitionMode::Xyz,
        }
    }

    /// Matrix dimension (2 or 3).
    pub fn dim(&self) -> usize {
        match self {
            WeightTransition::Xz(_) => 2,
            WeightTransition::Xyz(_) => 3,
        }
    }

    /// Entry `(w, v)` by row/column index in the mode's letter order.
    pub fn entry(&self, w: usize, v: usize) -> u64 {
        match self {
            WeightTransition::Xz(m) => m[w][v],
            WeightTransition::Xyz(m) => m[w][v],
        }
    }

    /// Column sums: the weights of the logical representatives, in the
    /// mode's letter order.
    pub fn column_weights(&self) -> Vec<u64> {
        let d = self.dim();
        (0..d)
            .map(|v| (0..d).map(|w| self.entry(w, v)).sum())
            .collect()
    }

    /// Largest logical-representative weight (the `b_max` of the threshold
    /// conditions).
    pub fn max_weight(&self) -> u64 {
        self.column_weights().into_iter().max().unwrap_or(0)
    }
}

const LETTER_ORDER_XZ: [SingleQubitPauli; 2] = [SingleQubitPauli::X, SingleQubitPauli::Z];
const LETTER_ORDER_XYZ: [SingleQubitPauli; 3] = [
    SingleQubitPauli::X,
    SingleQubitPauli::Y,
    SingleQubitPauli::Z,
];

/// Builds the weight-transition matrix of an encoder from its declared
/// logical representatives.
///
/// In `Xz` mode, a representative containing a Y letter makes the two
/// components inseparable; the call fails and directs the caller to `Xyz`
/// mode.
pub fn weight_transition(
    enc: &CliffordEncoder,
    mode: TransitionMode,
) -> Result<WeightTransition> {
    match mode {
        TransitionMode::Xz => {
            for (name, v) in [("X", SingleQubitPauli::X), ("Z", SingleQubitPauli::Z)] {
                if enc.push_forward(v).has_y() {
                    return Err(Error::Unsupported(format!(
                        "logical {name} representative contains a Y letter; \
                         use Xyz mode for this encoder"
                    )));
                }
            }
            let mut m = [[0u64; 2]; 2];
            for (v, &lv) in LETTER_ORDER_XZ.iter().enumerate() {
                let rep = enc.push_forward(lv);
                for q in 0..rep.n() {
                    if let Some(w) = LETTER_ORDER_XZ.iter().position(|&l| l == rep.letter(q)) {
                        m[w][v] += 1;
                    }
                }
            }
            Ok(WeightTransition::Xz(m))
        }
        TransitionMode::Xyz => {
            let mut m = [[0u64; 3]; 3];
            for (v, &lv) in LETTER_ORDER_XYZ.iter().enumerate() {
                let rep = enc.push_forward(lv);
                for q in 0..rep.n() {
                    if let Some(w) = LETTER_ORDER_XYZ.iter().position(|&l| l == rep.letter(q)) {
                        m[w][v] += 1;
                    }
                }
            }
            Ok(WeightTransition::Xyz(m))
        }
    }
}

/// Power-iteration / closed-form tolerance and iteration cap.
const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 100_000;

/// Spectral radius of a weight-transition matrix: closed form for 2×2
/// (`n_avg + sqrt(n_dif² + n_cross²)`), power iteration from `(1,1,1)/√3`
/// for 3×3.
pub fn spectral_radius(m: &WeightTransition) -> f64 {
    match m {
        WeightTransition::Xz(a) => {
            let (n_xx, n_zz) = (a[0][0] as f64, a[1][1] as f64);
            let n_avg = 0.5 * (n_xx + n_zz);
            let n_dif = 0.5 * (n_xx - n_zz);
            let n_cross = ((a[0][1] * a[1][0]) as f64).sqrt();
            n_avg + (n_dif * n_dif + n_cross * n_cross).sqrt()
        }
        WeightTransition::Xyz(a) => {
            let mut v = [1.0 / 3f64.sqrt(); 3];
            let mut lambda = 0.0;
            for _ in 0..POWER_MAX_ITERS {
                let mut w = [0.0; 3];
                for (r, row) in a.iter().enumerate() {
                    for (c, &e) in row.iter().enumerate() {
                        w[r] += e as f64 * v[c];
                    }
                }
                let norm = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
                if norm == 0.0 {
                    return 0.0;
                }
                for x in &mut w {
                    *x /= norm;
                }
                if (norm - lambda).abs() < POWER_TOL {
                    return norm;
                }
                lambda = norm;
                v = w;
            }
            lambda
        }
    }
}

/// Bound on the distinguishability surviving `T` levels of a weight-`b_z`
/// logical under per-wire dephasing noise of strength `p_z`:
/// `√2 · (√b_z · |1-2p_z|)^T`, a diamond-norm bound (cap 2).
pub fn dephasing_decay_bound(b_z: u64, p_z: f64, t: u32) -> BoundValue {
    let base = (b_z as f64).sqrt() * (1.0 - 2.0 * p_z).abs();
    BoundValue::capped_at(2f64.sqrt() * base.powi(t as i32), DIAMOND_CAP)
}

/// Result of [`tree_decay_bound`]: the bound itself plus the growth
/// statistics behind it and the certified-decay flag.
#[derive(Clone, Debug)]
pub struct TreeDecayBound {
    pub bound: BoundValue,
    /// True when the per-level contraction condition certifies that the
    /// bound decays to zero with depth.
    pub decays: bool,
    /// Spectral radius of the weight-transition matrix.
    pub lambda_max: f64,
    /// Natural log of the weight-growth factor `g(T)` (max over starting
    /// letters of the lifted-operator weight after `T` levels).
    pub log_growth: f64,
    /// Largest logical-representative weight.
    pub b_max: u64,
    pub transition: WeightTransition,
}

/// `ln of max_w Σ entries of D^T e_w`, computed with per-step
/// renormalization so deep trees do not overflow.
fn log_growth(m: &WeightTransition, t: u32) -> f64 {
    let d = m.dim();
    let mut best = f64::NEG_INFINITY;
    for w in 0..d {
        let mut v = vec![0.0f64; d];
        v[w] = 1.0;
        let mut log_scale = 0.0f64;
        for _ in 0..t {
            let mut next = vec![0.0f64; d];
            for (r, nr) in next.iter_mut().enumerate() {
                for (c, &vc) in v.iter().enumerate() {
                    *nr += m.entry(r, c) as f64 * vc;
                }
            }
            let sum: f64 = next.iter().sum();
            if sum == 0.0 {
                log_scale = f64::NEG_INFINITY;
                break;
            }
            for x in &mut next {
                *x /= sum;
            }
            log_scale += sum.ln();
            v = next;
        }
        best = best.max(log_scale);
    }
    best
}

/// The general weight-transition decay bound for a depth-`T` tree.
///
/// * `Xz` mode, noise parameter `p` (independent X and Z flip probability):
///   bound `2√2 · √g_xz(T) · |1-2p|^T`, decay certified when
///   `(1-2p)² · min{λ_max, b_max} < 1`.
/// * `Xyz` mode, noise parameter `ε` (total non-identity rate style):
///   bound `2√2 · √(g_xyz(T) · (1-ε)^T)`, decay certified when
///   `(1-ε) · min{λ_max, b_max} < 1`.
///
/// Both are diamond-norm bounds (vacuous above 2).
pub fn tree_decay_bound(
    enc: &CliffordEncoder,
    mode: TransitionMode,
    noise: f64,
    t: u32,
) -> Result<TreeDecayBound> {
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::InvalidProbability {
            name: match mode {
                TransitionMode::Xz => "p".to_string(),
                TransitionMode::Xyz => "eps".to_string(),
            },
            value: noise,
        });
    }
    let transition = weight_transition(enc, mode)?;
    let lambda_max = spectral_radius(&transition);
    let b_max = transition.max_weight();
    let lg = log_growth(&transition, t);
    let (log_bound, decays) = match mode {
        TransitionMode::Xz => {
            let corr = (1.0 - 2.0 * noise).abs();
            let log_bound = (2.0 * 2f64.sqrt()).ln() + 0.5 * lg + t as f64 * corr.ln();
            let decays = corr * corr * lambda_max.min(b_max as f64) < 1.0;
            (log_bound, decays)
        }
        TransitionMode::Xyz => {
            let keep = 1.0 - noise;
            let log_bound = (2.0 * 2f64.sqrt()).ln() + 0.5 * (lg + t as f64 * keep.ln());
            let decays = keep * lambda_max.min(b_max as f64) < 1.0;
            (log_bound, decays)
        }
    };
    Ok(TreeDecayBound {
        bound: BoundValue::capped_at(log_bound.exp(), DIAMOND_CAP),
        decays,
        lambda_max,
        log_growth: lg,
        b_max,
        transition,
    })
}

/// Decay bound specialized to anti-standard encoders, whose trees
/// alternate X-type and Z-type logical growth:
/// `√2 · √(d_x^⌈T/2⌉ · d_z^⌊T/2⌋) · |1-2p|^T`. Bounds the correlation
/// `|1-2q|` of the root bit, so the cap is 1.
pub fn anti_standard_decay_bound(d_x: u64, d_z: u64, p: f64, t: u32) -> BoundValue {
    let log_val = 0.5 * 2f64.ln()
        + 0.5 * (t.div_ceil(2) as f64 * (d_x as f64).ln() + (t / 2) as f64 * (d_z as f64).ln())
        + t as f64 * (1.0 - 2.0 * p).abs().ln();
    BoundValue::capped_at(log_val.exp(), UNIT_CAP)
}

/// Smallest depth `T` at which the alternating tree channel is certified
/// entanglement-breaking: the smallest integer strictly exceeding
/// `c / (-ln(√d_z · |1-2p_z|))` with `c = ln(√2 · (1-q_x_1)/q_x_1)`, where
/// `q_x_1` is the level-1 X-error rate.
///
/// Requires `√d_z · |1-2p_z| < 1` (otherwise the bound never certifies
/// breaking) and `0 < q_x_1 ≤ 1/2`.
pub fn ent_breaking_depth(d_z: u64, p_z: f64, q_x_1: f64) -> Result<u32> {
    let base = (d_z as f64).sqrt() * (1.0 - 2.0 * p_z).abs();
    if base >= 1.0 {
        return Err(Error::Unsupported(format!(
            "√d_z·|1-2p_z| = {base} ≥ 1: the decay bound never certifies breaking"
        )));
    }
    if !(q_x_1 > 0.0 && q_x_1 <= 0.5) {
        return Err(Error::InvalidProbability {
            name: "q_x_1".to_string(),
            value: q_x_1,
        });
    }
    let c = (2f64.sqrt() * (1.0 - q_x_1) / q_x_1).ln();
    let ratio = c / (-base.ln());
    Ok(ratio.floor() as u32 + 1)
}

/// True when `(1-ε)·b < 1`: errors at rate `ε` per wire disconnect the tree
/// in the bond-percolation sense, so no information propagates.
pub fn percolation_flag(b: u64, eps: f64) -> bool {
    (1.0 - eps) * (b as f64) < 1.0
}

/// Total-variation bound for the classical broadcast tree:
/// `√2 · (√b · |1-2p|)^T`, capped at 1.
pub fn classical_tvd_bound(b: u64, p: f64, t: u32) -> BoundValue {
    let base = (b as f64).sqrt() * (1.0 - 2.0 * p).abs();
    BoundValue::capped_at(2f64.sqrt() * base.powi(t as i32), UNIT_CAP)
}

/// The broadcasting threshold `(1 - 1/√b) / 2` for a `b`-ary tree: above
/// this flip rate no decoder recovers the root bit as depth grows.
/// Callers must pass `b ≥ 2`.
pub fn kesten_stigum_threshold(b: u64) -> f64 {
    debug_assert!(b >= 2, "threshold defined for branching b >= 2");
    0.5 * (1.0 - 1.0 / (b as f64).sqrt())
}

/// Outcome of the exhaustive logical-representative search.
#[derive(Clone, Debug)]
pub struct RepresentativeSearch {
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    pub transition: WeightTransition,
    pub lambda_max: f64,
}

/// Largest block size accepted by [`representative_search`].
pub const REPRESENTATIVE_SEARCH_MAX_B: usize = 4;

/// Searches all stabilizer multiples of both logicals for the pair
/// minimizing the transition spectral radius. In `Xz` mode, pairs with a Y
/// letter are skipped (and the search fails if none remain). Exhaustive
/// over `2^(b-1) × 2^(b-1)` pairs, so capped at `b ≤ 4`.
pub fn representative_search(
    enc: &CliffordEncoder,
    mode: TransitionMode,
) -> Result<RepresentativeSearch> {
    if enc.b() > REPRESENTATIVE_SEARCH_MAX_B {
        return Err(Error::ResourceCap {
            what: "representative search block size",
            actual: enc.b() as u128,
            cap: REPRESENTATIVE_SEARCH_MAX_B as u128,
        });
    }
    let group = enc.stabilizer_group();
    let mut best: Option<RepresentativeSearch> = None;
    for sx in &group {
        let lx = enc.logical_x().multiply(sx).phaseless();
        if mode == TransitionMode::Xz && lx.has_y() {
            continue;
        }
        for sz in &group {
            let lz = enc.logical_z().multiply(sz).phaseless();
            if mode == TransitionMode::Xz && lz.has_y() {
                continue;
            }
            let candidate =
                CliffordEncoder::new_unchecked(enc.stabilizers().to_vec(), lx.clone(), lz);
            let transition = weight_transition(&candidate, mode)?;
            let lambda = spectral_radius(&transition);
            if best.as_ref().is_none_or(|b| lambda < b.lambda_max) {
                best = Some(RepresentativeSearch {
                    logical_x: candidate.logical_x().clone(),
                    logical_z: candidate.logical_z().clone(),
                    transition,
                    lambda_max: lambda,
                });
            }
        }
    }
    best.ok_or_else(|| {
        Error::Unsupported(
            "every logical representative pair contains a Y letter; \
             use Xyz mode"
                .to_string(),
        )
    })
}

/// Weight of the lifted operator for letter `v` after `t` levels, from the
/// transition matrix alone (integer matrix power on the letter counts).
/// Used to cross-check `log_growth` against
/// [`CliffordEncoder::lift_logical`] at small depth.
pub fn lifted_weight_from_transition(m: &WeightTransition, v: usize, t: u32) -> u64 {
    let d = m.dim();
    let mut counts = vec![0u64; d];
    counts[v] = 1;
    for _ in 0..t {
        let mut next = vec![0u64; d];
        for (r, nr) in next.iter_mut().enumerate() {
            for (c, &vc) in counts.iter().enumerate() {
                *nr += m.entry(r, c) * vc;
            }
        }
        counts = next;
    }
    counts.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;
    use approx::assert_abs_diff_eq;

    #[test]
    fn dephasing_bound_matches_formula() {
        // T = 0 leaves only the constant prefactor.
        assert_abs_diff_eq!(dephasing_decay_bound(3, 0.3, 0).value, 2f64.sqrt());
        // The dephasing point kills the bound entirely.
        assert_eq!(dephasing_decay_bound(3, 0.5, 1).value, 0.0);
        // Frozen value: √2 · (√3 · 0.4)^5.
        let b = dephasing_decay_bound(3, 0.3, 5);
        assert_abs_diff_eq!(b.value, 0.2257450, epsilon = 1e-6);
        assert!(!b.vacuous);
        // Growing base goes vacuous past the diamond cap.
        let v = dephasing_decay_bound(9, 0.1, 3);
        assert!(v.vacuous && v.value > 2.0);
    }

    #[test]
    fn spectral_radius_closed_forms() {
        assert_abs_diff_eq!(
            spectral_radius(&WeightTransition::Xz([[3, 0], [0, 3]])),
            3.0
        );
        assert_abs_diff_eq!(
            spectral_radius(&WeightTransition::Xz([[0, 2], [1, 0]])),
            2f64.sqrt(),
            epsilon = 1e-12
        );
        let eye = WeightTransition::Xyz([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_abs_diff_eq!(spectral_radius(&eye), 1.0, epsilon = 1e-9);
        let zero = WeightTransition::Xyz([[0; 3]; 3]);
        assert_eq!(spectral_radius(&zero), 0.0);
        // 3×3 with known dominant eigenvalue: all-ones has radius 3.
        let ones = WeightTransition::Xyz([[1; 3]; 3]);
        assert_abs_diff_eq!(spectral_radius(&ones), 3.0, epsilon = 1e-9);
    }

    #[test]
    fn transition_matrices_of_builtin_codes() {
        // Standard CSS: diagonal with the two logical weights.
        let steane = codes::steane7();
        let m = weight_transition(&steane, TransitionMode::Xz).unwrap();
        assert_eq!(m, WeightTransition::Xz([[3, 0], [0, 3]]));
        assert_abs_diff_eq!(spectral_radius(&m), 3.0);
        // max{d_x, d_z} for the standard orientation.
        assert_eq!(spectral_radius(&m), steane.d_x().unwrap().max(steane.d_z().unwrap()) as f64);

        // Anti-standard: off-diagonal, radius √(d_x·d_z).
        let bell = codes::bell();
        let m = weight_transition(&bell, TransitionMode::Xz).unwrap();
        assert_eq!(m, WeightTransition::Xz([[0, 2], [1, 0]]));
        let expect = ((bell.d_x().unwrap() * bell.d_z().unwrap()) as f64).sqrt();
        assert_abs_diff_eq!(spectral_radius(&m), expect, epsilon = 1e-12);

        // Third Hadamard placement: triangular with unit radius.
        let v3 = codes::bell_variant(3).unwrap();
        let m = weight_transition(&v3, TransitionMode::Xz).unwrap();
        assert_eq!(m, WeightTransition::Xz([[1, 0], [1, 1]]));
        assert_abs_diff_eq!(spectral_radius(&m), 1.0);

        // Column sums equal representative weights in both modes.
        for enc in [codes::rep(3).unwrap(), codes::bell(), codes::steane7()] {
            let m = weight_transition(&enc, TransitionMode::Xyz).unwrap();
            let weights = m.column_weights();
            for (v, &lv) in LETTER_ORDER_XYZ.iter().enumerate() {
                assert_eq!(weights[v], enc.push_forward(lv).weight() as u64);
            }
        }
    }

    #[test]
    fn xz_mode_rejects_y_logicals() {
        // Stabilizer XZ with logicals YY-free choice is possible, but the
        // canonical variant-3 conjugate with L_x = ZX·XZ = YY fails.
        let enc = crate::pauli::CliffordEncoder::new_unchecked(
            vec!["XZ".parse().unwrap()],
            "YY".parse().unwrap(),
            "IZ".parse().unwrap(),
        );
        assert!(matches!(
            weight_transition(&enc, TransitionMode::Xz),
            Err(Error::Unsupported(_))
        ));
        assert!(weight_transition(&enc, TransitionMode::Xyz).is_ok());
    }

    #[test]
    fn tree_decay_bound_bell_threshold() {
        let bell = codes::bell();
        // Decay certified iff (1-2p)²·√2 < 1, i.e. p above ≈ 0.0796.
        let hi = tree_decay_bound(&bell, TransitionMode::Xz, 0.080, 8).unwrap();
        assert!(hi.decays);
        let lo = tree_decay_bound(&bell, TransitionMode::Xz, 0.079, 8).unwrap();
        assert!(!lo.decays);
        assert_abs_diff_eq!(hi.lambda_max, 2f64.sqrt(), epsilon = 1e-12);
        assert_eq!(hi.b_max, 2);
    }

    #[test]
    fn tree_decay_bound_xyz_edge_cases() {
        let rep3 = codes::rep(3).unwrap();
        // Full noise kills the bound for any T ≥ 1.
        let b = tree_decay_bound(&rep3, TransitionMode::Xyz, 1.0, 2).unwrap();
        assert_eq!(b.bound.value, 0.0);
        // Noise out of range is rejected.
        assert!(tree_decay_bound(&rep3, TransitionMode::Xyz, 1.5, 2).is_err());
    }

    #[test]
    fn standard_css_bound_matches_split_form() {
        // For a standard CSS encoder, the combined xz bound should agree
        // with the sum of two single-axis dephasing-style terms within a
        // factor of 2.
        let steane = codes::steane7();
        let p = 0.3;
        let t = 4;
        let combined = tree_decay_bound(&steane, TransitionMode::Xz, p, t)
            .unwrap()
            .bound
            .value;
        let split = dephasing_decay_bound(3, p, t).value + dephasing_decay_bound(3, p, t).value;
        let ratio = combined / split;
        assert!(
            (0.5..=2.0).contains(&ratio),
            "combined {combined} vs split {split}"
        );
    }

    #[test]
    fn growth_matches_lifted_weight() {
        for enc in [
            codes::rep(3).unwrap(),
            codes::bell(),
            codes::bell_variant(3).unwrap(),
        ] {
            let m = weight_transition(&enc, TransitionMode::Xz).unwrap();
            for t in 0..5u32 {
                // g(T) from the renormalized propagation agrees with the
                // exact integer growth.
                let g_log = log_growth(&m, t);
                let g_int = (0..2)
                    .map(|v| lifted_weight_from_transition(&m, v, t))
                    .max()
                    .unwrap();
                assert_abs_diff_eq!(g_log, (g_int as f64).ln(), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn anti_standard_bound_frozen_values() {
        let v = anti_standard_decay_bound(2, 1, 0.05, 4);
        assert_abs_diff_eq!(v.value, 1.8557310, epsilon = 1e-5);
        assert!(v.vacuous);
        let v = anti_standard_decay_bound(2, 1, 0.2, 10);
        assert_abs_diff_eq!(v.value, 0.0483729, epsilon = 1e-6);
        assert!(!v.vacuous);
        // Symmetric distances reduce to the single-axis formula.
        for t in 0..6 {
            assert_abs_diff_eq!(
                anti_standard_decay_bound(3, 3, 0.3, t).value,
                dephasing_decay_bound(3, 0.3, t).value.min(f64::MAX),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn ent_breaking_depth_cases() {
        assert_eq!(ent_breaking_depth(3, 0.4, 0.1).unwrap(), 3);
        // q -> 1/2 minimizes c = ln √2.
        let t = ent_breaking_depth(3, 0.4, 0.5).unwrap();
        assert_eq!(t, 1);
        // Weak dephasing still contracts: ratio ~1.45 rounds up to 2.
        assert_eq!(ent_breaking_depth(3, 0.45, 0.1).unwrap(), 2);
        // Bound inapplicable when the base does not contract.
        assert!(ent_breaking_depth(4, 0.1, 0.1).is_err());
        assert!(ent_breaking_depth(3, 0.4, 0.0).is_err());
        assert!(ent_breaking_depth(3, 0.4, 0.6).is_err());
    }

    #[test]
    fn percolation_and_classical_bounds() {
        assert!(percolation_flag(2, 0.6));
        assert!(!percolation_flag(2, 0.4));
        assert!(!percolation_flag(3, 0.5));
        let v = classical_tvd_bound(2, 0.25, 4);
        assert_abs_diff_eq!(v.value, 0.353553, epsilon = 1e-6);
        assert!(!v.vacuous);
        assert!(classical_tvd_bound(2, 0.05, 1).vacuous);
    }

    #[test]
    fn kesten_stigum_values() {
        assert_abs_diff_eq!(kesten_stigum_threshold(4), 0.25);
        assert_abs_diff_eq!(kesten_stigum_threshold(2), 0.146447, epsilon = 1e-6);
    }

    #[test]
    fn bounds_monotone_when_contracting() {
        for &(b, p) in &[(2u64, 0.2f64), (3, 0.3), (4, 0.35)] {
            let base = (b as f64).sqrt() * (1.0 - 2.0 * p).abs();
            assert!(base < 1.0, "grid point must contract");
            let mut prev = f64::INFINITY;
            for t in 0..30 {
                let v = dephasing_decay_bound(b, p, t).value;
                assert!(v >= 0.0 && v <= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn representative_search_improves_variant_3() {
        // With logical Z = XI instead of IZ the radius is the golden ratio;
        // the search must find the unit-radius pair.
        let worse = crate::pauli::CliffordEncoder::new(
            vec!["XZ".parse().unwrap()],
            "ZX".parse().unwrap(),
            "XI".parse().unwrap(),
        )
        .unwrap();
        let m = weight_transition(&worse, TransitionMode::Xz).unwrap();
        assert_abs_diff_eq!(
            spectral_radius(&m),
            (1.0 + 5f64.sqrt()) / 2.0,
            epsilon = 1e-12
        );
        let found = representative_search(&worse, TransitionMode::Xz).unwrap();
        assert_abs_diff_eq!(found.lambda_max, 1.0, epsilon = 1e-12);
        assert_eq!(found.logical_z.to_string(), "IZ");
        // Bell is already optimal.
        let bell = codes::bell();
        let found = representative_search(&bell, TransitionMode::Xz).unwrap();
        assert_abs_diff_eq!(found.lambda_max, 2f64.sqrt(), epsilon = 1e-12);
        // Cap respected.
        assert!(matches!(
            representative_search(&codes::steane7(), TransitionMode::Xz),
            Err(Error::ResourceCap { .. })
        ));
    }
}
