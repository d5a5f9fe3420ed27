//! Reliability-bit decoders: exact density evolution, Monte Carlo pools,
//! and analytic error-bound recursions.
//!
//! Distance-2 blocks cannot locate an error from the syndrome alone, but
//! they can *detect* one. The decoders here forward a per-qubit
//! *reliability bit* `m` to the next level (`m = 1` marks the qubit as
//! suspect). A marked qubit turns the next level's detection into a
//! correction: a distance-2 code corrects any single-qubit error at a known
//! location. The level-to-level map of the joint distribution over
//! (logical error, reliability bit) is a small exact linear map, so density
//! evolution is exact and fast; a population Monte Carlo variant covers
//! block sizes beyond the enumeration cap.
//!
//! The Bell-pair tree (a distance-1 code) gets a two-bit variant: one bit
//! for the error type the current level's syndrome can see, one for the
//! type it cannot, with the two swapped every level to track the Hadamard
//! frame flip in the encoder.

use rayon::prelude::*;

use crate::channel::PauliChannel;
use crate::pauli::{block_tables, class_letter, BlockTables, CliffordEncoder, SingleQubitPauli};
use crate::rng::stream_rng;
use crate::{Error, Result};
use rand::Rng;

/// Largest block size for exact one-bit density evolution; the step
/// enumerates all `8^b` child (error, mark) combinations.
pub const ONE_BIT_DE_MAX_B: usize = 5;

const DIST_SLACK: f64 = 1e-12;

/// Joint distribution of (logical error `L`, reliability bit `m`) for one
/// decoded qubit; 8 entries indexed by `L.index() * 2 + m`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneBitLevelDist {
    probs: [f64; 8],
}

impl OneBitLevelDist {
    /// Validates non-negativity and normalization within `1e-12`.
    pub fn new(probs: [f64; 8]) -> Result<Self> {
        for (i, &p) in probs.iter().enumerate() {
            if !(p >= -DIST_SLACK) || !p.is_finite() {
                return Err(Error::InvalidProbability {
                    name: format!("entry {i}"),
                    value: p,
                });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > DIST_SLACK {
            return Err(Error::InvalidProbability {
                name: "distribution sum".into(),
                value: sum,
            });
        }
        Ok(OneBitLevelDist { probs })
    }

    /// Perfect unmarked qubit: `(I, 0)` with probability 1.
    pub fn clean() -> Self {
        let mut probs = [0.0; 8];
        probs[0] = 1.0;
        OneBitLevelDist { probs }
    }

    /// Qubit that has passed once through `noise`, unmarked.
    pub fn from_channel(noise: &PauliChannel) -> Self {
        let mut probs = [0.0; 8];
        for w in SingleQubitPauli::ALL {
            probs[w.index() * 2] = noise.r(w);
        }
        OneBitLevelDist { probs }
    }

    pub fn pr(&self, l: SingleQubitPauli, m: bool) -> f64 {
        self.probs[l.index() * 2 + m as usize]
    }

    pub fn probs(&self) -> &[f64; 8] {
        &self.probs
    }

    /// Marginal probability of each logical error letter.
    pub fn letter_marginals(&self) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, &p) in self.probs.iter().enumerate() {
            out[i / 2] += p;
        }
        out
    }

    /// `Pr(m = 1)`.
    pub fn mu(&self) -> f64 {
        self.probs.iter().skip(1).step_by(2).sum()
    }

    /// `Pr(L != I and m = 0)`: the unmarked-error probability.
    pub fn delta(&self) -> f64 {
        self.probs.iter().step_by(2).skip(1).sum()
    }

    /// `Pr(L != I)` regardless of the reliability bit.
    pub fn pr_logical_error(&self) -> f64 {
        1.0 - self.probs[0] - self.probs[1]
    }

    /// Folds one more pass through `noise` onto the logical letter, leaving
    /// the reliability bit untouched (the root-edge reporting convention).
    pub fn fold_logical(&self, noise: &PauliChannel) -> Self {
        let mut probs = [0.0; 8];
        for l in SingleQubitPauli::ALL {
            for e in SingleQubitPauli::ALL {
                let out = l.mul(e).index();
                for m in 0..2 {
                    probs[out * 2 + m] += self.probs[l.index() * 2 + m] * noise.r(e);
                }
            }
        }
        OneBitLevelDist { probs }
    }
}

/// Candidate correction letters ordered by channel probability (descending),
/// ties broken I < X < Y < Z.
fn candidate_order(noise: &PauliChannel) -> [SingleQubitPauli; 3] {
    let mut cand = [SingleQubitPauli::X, SingleQubitPauli::Y, SingleQubitPauli::Z];
    cand.sort_by(|a, b| {
        noise
            .r(*b)
            .partial_cmp(&noise.r(*a))
            .unwrap()
            .then(a.index().cmp(&b.index()))
    });
    cand
}

/// The one-reliability-bit decoding rule applied to one block realization:
/// child errors `a` (after edge noise) and marks `m` in, decoded logical
/// letter and output mark out.
fn decode_one_bit(
    t: &BlockTables,
    cand: &[SingleQubitPauli; 3],
    a: &[u8],
    m: &[bool],
) -> (SingleQubitPauli, bool) {
    let mut s = 0u32;
    let mut cls = 0u8;
    for i in 0..t.b {
        s ^= t.synd[i][a[i] as usize];
        cls ^= t.cls[i][a[i] as usize];
    }
    let marked = m.iter().filter(|&&x| x).count();
    match (marked, s) {
        (0, 0) => (class_letter(cls), false),
        (0, _) => (class_letter(cls), true),
        (1, 0) => (class_letter(cls), false),
        (1, _) => {
            let k = m.iter().position(|&x| x).unwrap();
            for v in cand {
                if t.synd[k][v.index()] == s {
                    return (class_letter(cls ^ t.cls[k][v.index()]), false);
                }
            }
            (class_letter(cls), true)
        }
        _ => (class_letter(cls), true),
    }
}

/// Single-qubit errors the code cannot detect: letters with zero syndrome
/// but a nontrivial logical action. A distance-2 code has none on its
/// protected axis; the Bell code, for instance, has undetectable `Z`s.
pub fn single_error_detection_gaps(enc: &CliffordEncoder) -> Vec<(usize, SingleQubitPauli)> {
    let t = block_tables(enc);
    let mut gaps = Vec::new();
    for i in 0..t.b {
        for v in [SingleQubitPauli::X, SingleQubitPauli::Y, SingleQubitPauli::Z] {
            if t.synd[i][v.index()] == 0 && t.cls[i][v.index()] != 0 {
                gaps.push((i, v));
            }
        }
    }
    gaps
}

/// One exact density-evolution level: folds fresh edge noise into each of
/// the `b` children, enumerates every (error, mark) combination, applies
/// the one-bit decoding rule, and accumulates the output distribution.
///
/// # Errors
///
/// [`Error::ResourceCap`] when `enc.b() > 5` (use [`one_bit_mc_run`]).
pub fn one_bit_de_step(
    dist: &OneBitLevelDist,
    enc: &CliffordEncoder,
    noise: &PauliChannel,
) -> Result<OneBitLevelDist> {
    let b = enc.b();
    if b > ONE_BIT_DE_MAX_B {
        return Err(Error::ResourceCap {
            what: "one-bit density evolution block size",
            actual: b as u128,
            cap: ONE_BIT_DE_MAX_B as u128,
        });
    }
    let tables = block_tables(enc);
    let cand = candidate_order(noise);
    // Per-child joint over (post-noise error A, mark m):
    // Pr(A, m) = sum_L Pr(L, m) r(L * A).
    let mut child = [0.0f64; 8];
    for a in SingleQubitPauli::ALL {
        for l in SingleQubitPauli::ALL {
            let e = l.mul(a); // phaseless letter with L * e = A
            for m in 0..2 {
                child[a.index() * 2 + m] += dist.probs[l.index() * 2 + m] * noise.r(e);
            }
        }
    }

    let mut out = [0.0f64; 8];
    let mut a = vec![0u8; b];
    let mut marks = vec![false; b];
    let mut idx = vec![0usize; b];
    loop {
        let mut prob = 1.0;
        for i in 0..b {
            prob *= child[idx[i]];
        }
        if prob > 0.0 {
            for i in 0..b {
                a[i] = (idx[i] / 2) as u8;
                marks[i] = idx[i] % 2 == 1;
            }
            let (l, m) = decode_one_bit(&tables, &cand, &a, &marks);
            out[l.index() * 2 + m as usize] += prob;
        }
        // Mixed-radix increment over 8^b states.
        let mut i = 0;
        loop {
            if i == b {
                let total: f64 = out.iter().sum();
                debug_assert!((total - 1.0).abs() < 1e-9);
                // Scrub accumulated rounding so iterated runs stay normalized.
                return OneBitLevelDist::new(out.map(|p| p.max(0.0) / total));
            }
            idx[i] += 1;
            if idx[i] < 8 {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Exact density evolution for `levels` decoding levels.
///
/// Level 0 is the leaf input; each step folds one layer of edge noise into
/// the children before decoding. With `root_noise` set, every reported
/// level additionally folds one pass of `noise` onto the logical letter —
/// the convention where the tree's root qubit also sits behind a noisy
/// edge — so level 0 reports the bare channel.
pub fn one_bit_run(
    enc: &CliffordEncoder,
    noise: &PauliChannel,
    levels: u32,
    root_noise: bool,
) -> Result<Vec<OneBitLevelDist>> {
    let mut dist = OneBitLevelDist::clean();
    let mut out = Vec::with_capacity(levels as usize + 1);
    let report = |d: &OneBitLevelDist| {
        if root_noise {
            d.fold_logical(noise)
        } else {
            d.clone()
        }
    };
    out.push(report(&dist));
    for _ in 0..levels {
        dist = one_bit_de_step(&dist, enc, noise)?;
        out.push(report(&dist));
    }
    Ok(out)
}

/// One level of population Monte Carlo estimates.
#[derive(Clone, Debug)]
pub struct McLevelEstimate {
    /// Empirical joint distribution over (logical error, mark).
    pub dist: OneBitLevelDist,
    /// Pool size behind the estimate.
    pub samples: u64,
}

impl McLevelEstimate {
    /// Binomial standard error of an estimated probability `p`.
    pub fn std_err(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

/// Population-based Monte Carlo density evolution: keeps a pool of
/// (error, mark) samples per level; each next-level sample draws `b` pool
/// members and fresh edge noise, then applies the one-bit decoding rule.
///
/// Works for any block size. Deterministic in `seed`: sample `j` of level
/// `t` always uses RNG stream `t << 32 | j` regardless of thread count.
pub fn one_bit_mc_run(
    enc: &CliffordEncoder,
    noise: &PauliChannel,
    levels: u32,
    pool: usize,
    seed: u64,
    root_noise: bool,
) -> Vec<McLevelEstimate> {
    assert!(pool > 0, "pool must be non-empty");
    assert!(pool <= u32::MAX as usize, "pool exceeds the stream space");
    let b = enc.b();
    let tables = block_tables(enc);
    let cand = candidate_order(noise);

    let estimate = |members: &[(u8, bool)]| -> McLevelEstimate {
        let mut counts = [0u64; 8];
        for &(l, m) in members {
            counts[l as usize * 2 + m as usize] += 1;
        }
        let n = members.len() as f64;
        let probs = counts.map(|c| c as f64 / n);
        let mut dist = OneBitLevelDist::new(probs).expect("empirical counts normalize");
        if root_noise {
            dist = dist.fold_logical(noise);
        }
        McLevelEstimate {
            dist,
            samples: members.len() as u64,
        }
    };

    assert!(b <= 32, "block size exceeds the sampling buffer");
    let mut members: Vec<(u8, bool)> = vec![(0, false); pool];
    let mut out = Vec::with_capacity(levels as usize + 1);
    out.push(estimate(&members));
    for t in 1..=levels {
        let next: Vec<(u8, bool)> = (0..pool)
            .into_par_iter()
            .map(|j| {
                let mut rng = stream_rng(seed, ((t as u64) << 32) | j as u64);
                let mut a = [0u8; 32];
                let mut marks = [false; 32];
                for i in 0..b {
                    let (l, m) = members[rng.random_range(0..pool)];
                    let e = noise.sample(&mut rng);
                    a[i] = SingleQubitPauli::from_index(l as usize).mul(e).index() as u8;
                    marks[i] = m;
                }
                let (l, m) = decode_one_bit(&tables, &cand, &a[..b], &marks[..b]);
                (l.index() as u8, m)
            })
            .collect();
        members = next;
        out.push(estimate(&members));
    }
    out
}

/// Analytic upper-bound recursion for the one-bit decoder.
#[derive(Clone, Debug)]
pub struct OneBitBounds {
    /// Bound on `Pr(m(t) = 1)` per level.
    pub mu: Vec<f64>,
    /// Bound on `Pr(error and m(t) = 0)` per level.
    pub delta: Vec<f64>,
    /// Bound on the total logical error `mu + delta` per level.
    pub r_tot: Vec<f64>,
    /// Whether `p_tot` sits below the guaranteed-bounded regime.
    pub regime_ok: bool,
    /// The regime boundary `1 / (16 b^4 + 4 b^2)`.
    pub regime_cap: f64,
}

/// Propagates the coupled bound recursions
/// `mu_t <= b(delta + p) + b^2 mu (delta + p) + b^2 mu^2` and
/// `delta_t <= b^2 (delta + p)^2 + b^2 mu (delta + p)`
/// from `mu_0 = delta_0 = 0`, clamping each sequence at 1. Inside the
/// regime `p_tot < 1 / (16 b^4 + 4 b^2)` the total stays below
/// `(1 + 8 b^2) p_tot` at every level.
pub fn one_bit_error_bounds(b: u32, p_tot: f64, levels: u32) -> OneBitBounds {
    assert!((0.0..=1.0).contains(&p_tot), "probability out of range");
    assert!(b >= 1, "block size must be positive");
    let bf = b as f64;
    let regime_cap = 1.0 / (16.0 * bf.powi(4) + 4.0 * bf.powi(2));
    let (mut mu, mut delta) = (vec![0.0f64], vec![0.0f64]);
    for t in 1..=levels as usize {
        let (m, d) = (mu[t - 1], delta[t - 1]);
        let eps = d + p_tot;
        let m_next = bf * eps + bf * bf * m * eps + bf * bf * m * m;
        let d_next = bf * bf * eps * eps + bf * bf * m * eps;
        mu.push(m_next.min(1.0));
        delta.push(d_next.min(1.0));
    }
    let r_tot = mu
        .iter()
        .zip(&delta)
        .map(|(m, d)| (m + d).min(1.0))
        .collect();
    OneBitBounds {
        mu,
        delta,
        r_tot,
        regime_ok: p_tot < regime_cap,
        regime_cap,
    }
}

/// Which rule the two-bit Bell decoder applies after correcting at a marked
/// location: the standard decoder trusts the correction (`m = 0`), the
/// conservative one keeps the qubit marked (`m = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellVariant {
    Standard,
    Conservative,
}

/// Level state of the Bell-tree decoder: the joint distribution of the
/// X-side record `(e_x, m_rel)` and the Z-side record `(e_z, m_irrel)`,
/// which stay exactly independent level to level. Entries are indexed by
/// `e * 2 + m`.
#[derive(Clone, Debug, PartialEq)]
pub struct BellLevelDist {
    x: [f64; 4],
    z: [f64; 4],
}

impl BellLevelDist {
    /// Validates both marginals.
    pub fn new(x: [f64; 4], z: [f64; 4]) -> Result<Self> {
        for (name, v) in [("x", &x), ("z", &z)] {
            let sum: f64 = v.iter().sum();
            if v.iter().any(|&p| !(p >= -DIST_SLACK) || !p.is_finite())
                || (sum - 1.0).abs() > DIST_SLACK
            {
                return Err(Error::InvalidProbability {
                    name: format!("{name}-side distribution"),
                    value: sum,
                });
            }
        }
        Ok(BellLevelDist { x, z })
    }

    /// Perfect unmarked qubit on both axes.
    pub fn clean() -> Self {
        BellLevelDist {
            x: [1.0, 0.0, 0.0, 0.0],
            z: [1.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn pr_x(&self, e: bool, m: bool) -> f64 {
        self.x[e as usize * 2 + m as usize]
    }

    pub fn pr_z(&self, e: bool, m: bool) -> f64 {
        self.z[e as usize * 2 + m as usize]
    }

    /// `Pr(e_x = 1)`.
    pub fn q_x(&self) -> f64 {
        self.x[2] + self.x[3]
    }

    /// `Pr(e_z = 1)`.
    pub fn q_z(&self) -> f64 {
        self.z[2] + self.z[3]
    }

    /// `Pr(m_rel = 1)`.
    pub fn mu_x(&self) -> f64 {
        self.x[1] + self.x[3]
    }

    /// `Pr(m_irrel = 1)`.
    pub fn mu_z(&self) -> f64 {
        self.z[1] + self.z[3]
    }

    /// `Pr(e_x = 1 and m_rel = 0)`.
    pub fn delta_x(&self) -> f64 {
        self.x[2]
    }

    /// `Pr(e_z = 1 and m_irrel = 0)`.
    pub fn delta_z(&self) -> f64 {
        self.z[2]
    }
}

/// Syndrome side of the Bell module: folds fresh flips at rate `p` into the
/// two input records, measures the pair parity, applies the marked-qubit
/// correction rules, and decodes (the output error is the first qubit's
/// residual bit).
fn bell_relevant_update(input: &[f64; 4], p: f64, variant: BellVariant) -> [f64; 4] {
    let mut out = [0.0f64; 4];
    for i1 in 0..4 {
        for i2 in 0..4 {
            for f1 in 0..2 {
                for f2 in 0..2 {
                    let prob = input[i1]
                        * input[i2]
                        * if f1 == 1 { p } else { 1.0 - p }
                        * if f2 == 1 { p } else { 1.0 - p };
                    if prob == 0.0 {
                        continue;
                    }
                    let (m1, m2) = (i1 % 2 == 1, i2 % 2 == 1);
                    let mut y1 = (i1 / 2) ^ f1;
                    let y2 = (i2 / 2) ^ f2;
                    let s = y1 ^ y2;
                    let (e, m) = match (m1 as u8 + m2 as u8, s) {
                        (0, 0) => (y1, false),
                        (0, _) => (y1, true),
                        (1, 0) => (y1, false),
                        (1, _) => {
                            // Correct the marked qubit; only a flip at the
                            // first position changes the decoded value.
                            if m1 {
                                y1 ^= 1;
                            }
                            (y1, variant == BellVariant::Conservative)
                        }
                        (_, _) => (y1, true),
                    };
                    out[e * 2 + m as usize] += prob;
                }
            }
        }
    }
    out
}

/// Unprotected side of the Bell module: folds fresh flips in, then the two
/// bits simply combine — the output error is the pair parity and the output
/// mark the OR of the input marks.
fn bell_irrelevant_update(input: &[f64; 4], p: f64) -> [f64; 4] {
    let mut out = [0.0f64; 4];
    for i1 in 0..4 {
        for i2 in 0..4 {
            for f1 in 0..2 {
                for f2 in 0..2 {
                    let prob = input[i1]
                        * input[i2]
                        * if f1 == 1 { p } else { 1.0 - p }
                        * if f2 == 1 { p } else { 1.0 - p };
                    if prob == 0.0 {
                        continue;
                    }
                    let e = (i1 / 2) ^ f1 ^ (i2 / 2) ^ f2;
                    let m = (i1 % 2 == 1) || (i2 % 2 == 1);
                    out[e * 2 + m as usize] += prob;
                }
            }
        }
    }
    out
}

/// One exact level of the two-bit Bell decoder.
///
/// The syndrome side consumes the X-error records (folding `p_x`) and the
/// unprotected side consumes the Z-error records (folding `p_z`); the
/// encoder's Hadamard frame flip swaps the roles, so the syndrome side's
/// output becomes the next level's Z record and vice versa.
pub fn bell_de_step(
    dist: &BellLevelDist,
    p_x: f64,
    p_z: f64,
    variant: BellVariant,
) -> BellLevelDist {
    assert!((0.0..=1.0).contains(&p_x), "probability out of range");
    assert!((0.0..=1.0).contains(&p_z), "probability out of range");
    let renorm = |mut v: [f64; 4]| {
        let total: f64 = v.iter().sum();
        debug_assert!((total - 1.0).abs() < 1e-9);
        v.iter_mut().for_each(|p| *p /= total);
        v
    };
    BellLevelDist {
        x: renorm(bell_irrelevant_update(&dist.z, p_z)),
        z: renorm(bell_relevant_update(&dist.x, p_x, variant)),
    }
}

/// Per-level summary of a Bell density-evolution run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellLevelReport {
    pub t: u32,
    pub q_x: f64,
    pub q_z: f64,
    pub mu_x: f64,
    pub mu_z: f64,
    pub delta_x: f64,
    pub delta_z: f64,
}

impl BellLevelReport {
    fn from_dist(t: u32, d: &BellLevelDist) -> Self {
        BellLevelReport {
            t,
            q_x: d.q_x(),
            q_z: d.q_z(),
            mu_x: d.mu_x(),
            mu_z: d.mu_z(),
            delta_x: d.delta_x(),
            delta_z: d.delta_z(),
        }
    }
}

/// Iterates [`bell_de_step`] from perfect leaves for `levels` levels (the
/// 16-dimensional state makes thousands of levels exact and instant) and
/// reports the per-level error and mark probabilities for both axes.
pub fn bell_run(p_x: f64, p_z: f64, levels: u32, variant: BellVariant) -> Vec<BellLevelReport> {
    let mut dist = BellLevelDist::clean();
    let mut out = Vec::with_capacity(levels as usize + 1);
    out.push(BellLevelReport::from_dist(0, &dist));
    for t in 1..=levels {
        dist = bell_de_step(&dist, p_x, p_z, variant);
        out.push(BellLevelReport::from_dist(t, &dist));
    }
    out
}
