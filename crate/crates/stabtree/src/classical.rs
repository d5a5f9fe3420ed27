//! The dephased classical-tree picture: measuring every wire of the tree
//! channel in a fixed basis turns each Clifford encoder into a *classical*
//! encoder that broadcasts one bit into a uniformly random coset element,
//! and the whole tree into a correlated bit-broadcasting process with
//! independent flips on every edge.
//!
//! This module builds those classical encoders ([`dephase`]), simulates the
//! broadcast ([`simulate_tree`]), decodes with a global majority vote
//! ([`majority_global`]), and computes the exact total variation distance
//! between the two root hypotheses ([`tvd_exact`]) — the quantity whose
//! Helstrom error `(1 - TVD)/2` the binary-mode belief-propagation decoder
//! attains.
//!
//! For standard CSS encoders one basis is informative at every level; for
//! anti-standard ones such as [`crate::codes::bell`] the informative basis
//! alternates, and so do the dephased encoders: the Bell tree alternates
//! the two-bit parity encoder (`0 → {00, 11}`, `1 → {01, 10}`) with the
//! deterministic copier. Level cycles follow the same convention as
//! [`crate::bp`]: entry 0 of a cycle acts at the root level and the cycle
//! repeats downward.

use rand::Rng;

use crate::bounds::kesten_stigum_threshold;
use crate::{Axis, CliffordEncoder, Error, Result};

/// Largest block size accepted by [`dephase`] and [`ClassicalEncoder::new`].
pub const DEPHASE_MAX_B: usize = 24;

/// Largest leaf count for which [`tvd_exact`] will materialize the joint
/// leaf distribution (tables hold `2^leaves` entries).
pub const TVD_MAX_LEAVES: u32 = 24;

/// Leaf-count cap for [`simulate_tree`].
pub const SIMULATE_MAX_LEAVES: u128 = 1 << 24;

/// A coset-uniform classical encoder: input bit `c` maps to a uniformly
/// random element of `S ⊕ c·shift`, where `S` is the subgroup of `{0,1}^b`
/// spanned by the generators. The two supports are disjoint cosets of equal
/// size, so `P(w | c) = P(w ⊕ shift | c ⊕ 1)`. The deterministic copier is
/// the degenerate case of an empty subgroup with the all-ones shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalEncoder {
    b: usize,
    /// Row-reduced basis of the coset subgroup.
    basis: Vec<u32>,
    shift: u32,
}

impl ClassicalEncoder {
    /// Builds an encoder from subgroup generators and a logical shift.
    /// The generators may be dependent; they are reduced to a basis. Fails
    /// when a mask does not fit `b` bits or when the shift lies in the
    /// subgroup span (the two supports would coincide and the encoder would
    /// carry no information).
    pub fn new(b: usize, gens: &[u32], shift: u32) -> Result<ClassicalEncoder> {
        if b == 0 || b > DEPHASE_MAX_B {
            return Err(Error::BadInput(format!(
                "block size {b} outside 1..={DEPHASE_MAX_B}"
            )));
        }
        let mask = (1u32 << b) - 1;
        if gens.iter().any(|&g| g & !mask != 0) || shift & !mask != 0 {
            return Err(Error::BadInput(format!(
                "generator or shift does not fit {b} bits"
            )));
        }
        let mut basis: Vec<u32> = Vec::new();
        for &g in gens {
            let mut v = g;
            for &row in &basis {
                v = v.min(v ^ row);
            }
            if v != 0 {
                basis.push(v);
                basis.sort_unstable_by_key(|&r| std::cmp::Reverse(r));
            }
        }
        let mut s = shift;
        for &row in &basis {
            s = s.min(s ^ row);
        }
        if s == 0 {
            return Err(Error::BadInput(
                "the logical shift lies in the subgroup span, so the two \
                 supports coincide and the encoder is degenerate"
                    .into(),
            ));
        }
        Ok(ClassicalEncoder { b, basis, shift })
    }

    /// The deterministic copier `c → c^b`.
    pub fn copier(b: usize) -> ClassicalEncoder {
        ClassicalEncoder::new(b, &[], (1u32 << b) - 1).expect("the copier is never degenerate")
    }

    /// Output block size.
    pub fn b(&self) -> usize {
        self.b
    }

    /// Rank of the coset subgroup.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Size `2^rank` of each support.
    pub fn coset_size(&self) -> u64 {
        1u64 << self.basis.len()
    }

    /// The logical shift separating the two supports.
    pub fn shift(&self) -> u32 {
        self.shift
    }

    /// Row-reduced generators of the coset subgroup.
    pub fn generators(&self) -> &[u32] {
        &self.basis
    }

    /// All output patterns of input `c`, ascending.
    pub fn support(&self, c: bool) -> Vec<u32> {
        let mut out = Vec::with_capacity(1 << self.basis.len());
        out.push(if c { self.shift } else { 0 });
        for &g in &self.basis {
            for i in 0..out.len() {
                out.push(out[i] ^ g);
            }
        }
        out.sort_unstable();
        out
    }

    /// `P(w | c)`: `2^{-rank}` on the support of `c`, zero elsewhere.
    pub fn prob(&self, w: u32, c: bool) -> f64 {
        let mut v = w ^ if c { self.shift } else { 0 };
        for &row in &self.basis {
            v = v.min(v ^ row);
        }
        if v == 0 {
            1.0 / self.coset_size() as f64
        } else {
            0.0
        }
    }

    /// Draws one output pattern for input `c`.
    pub fn sample<R: Rng + ?Sized>(&self, c: bool, rng: &mut R) -> u32 {
        let subset: u64 = rng.random_range(0..self.coset_size());
        let mut w = if c { self.shift } else { 0 };
        for (k, &g) in self.basis.iter().enumerate() {
            if subset >> k & 1 == 1 {
                w ^= g;
            }
        }
        w
    }
}

/// Classical encoder obtained by preparing the logical bit in the given
/// basis and measuring every output wire in the informative basis.
///
/// The input bit is imprinted by the logical flipper — `logical X` for
/// basis `Z`, `logical Z` for basis `X` — so the flipper's type decides
/// which side of the CSS structure survives the measurement: an X-type
/// flipper yields supports built from the X-type stabilizer supports, a
/// Z-type flipper (the anti-standard case) the Z-type ones. Fails for
/// non-CSS encoders and for mixed-type flippers.
pub fn dephase(enc: &CliffordEncoder, basis: Axis) -> Result<ClassicalEncoder> {
    if enc.b() > DEPHASE_MAX_B {
        return Err(Error::ResourceCap {
            what: "block size in dephasing",
            actual: enc.b() as u128,
            cap: DEPHASE_MAX_B as u128,
        });
    }
    if !enc.is_css() {
        return Err(Error::Unsupported(
            "dephasing is defined for CSS encoders only".into(),
        ));
    }
    let flipper = match basis {
        Axis::Z => enc.logical_x(),
        Axis::X => enc.logical_z(),
    };
    let (gens, shift): (Vec<u32>, u32) = if flipper.is_x_type() {
        (
            enc.x_type_stabilizers()
                .iter()
                .map(|s| s.x_bits().as_u32())
                .collect(),
            flipper.x_bits().as_u32(),
        )
    } else if flipper.is_z_type() {
        (
            enc.z_type_stabilizers()
                .iter()
                .map(|s| s.z_bits().as_u32())
                .collect(),
            flipper.z_bits().as_u32(),
        )
    } else {
        return Err(Error::Unsupported(format!(
            "dephasing in basis {} needs a pure-type logical flipper",
            basis.name()
        )));
    };
    ClassicalEncoder::new(enc.b(), &gens, shift)
}

/// The level cycle of dephased encoders for a tree built from `enc`, with
/// the root-level measurement in `basis`.
///
/// A standard encoder re-encodes the bit in the same basis at every level
/// (cycle length 1); an anti-standard one hands it to the opposite basis
/// (cycle length 2). The flipper's type tells the two apart: an X-type
/// logical X keeps a Z-basis bit in the Z basis, a Z-type one swaps it.
/// Entry 0 acts at the root level.
pub fn dephase_cycle(enc: &CliffordEncoder, basis: Axis) -> Result<Vec<ClassicalEncoder>> {
    let first = dephase(enc, basis)?;
    let flipper = match basis {
        Axis::Z => enc.logical_x(),
        Axis::X => enc.logical_z(),
    };
    if flipper.is_x_type() == matches!(basis, Axis::Z) {
        Ok(vec![first])
    } else {
        let other = match basis {
            Axis::Z => Axis::X,
            Axis::X => Axis::Z,
        };
        Ok(vec![first, dephase(enc, other)?])
    }
}

/// Simulates one broadcast through a depth-`t_levels` tree: the root bit
/// enters `cycle[0]`'s encoder, every output bit flips independently with
/// probability `p_flip` (leaf edges included, no noise on the root input),
/// and each flipped bit feeds the next level's encoder, cycling through
/// `cycle` downward. Returns the leaf bits, left to right.
///
/// # Panics
/// Panics if `cycle` is empty or `t_levels = 0`.
pub fn simulate_tree<R: Rng + ?Sized>(
    cycle: &[ClassicalEncoder],
    p_flip: f64,
    t_levels: usize,
    input: bool,
    rng: &mut R,
) -> Result<Vec<u8>> {
    assert!(!cycle.is_empty(), "need at least one encoder");
    assert!(t_levels >= 1, "the tree needs at least one level");
    if !(0.0..=1.0).contains(&p_flip) {
        return Err(Error::InvalidProbability {
            name: "p_flip".into(),
            value: p_flip,
        });
    }
    leaf_count(cycle, t_levels)?;
    let mut bits: Vec<u8> = vec![input as u8];
    for t in (1..=t_levels).rev() {
        let enc = &cycle[(t_levels - t) % cycle.len()];
        let mut next = Vec::with_capacity(bits.len() * enc.b());
        for &bit in &bits {
            let w = enc.sample(bit == 1, rng);
            for i in 0..enc.b() {
                let noisy = (w >> i & 1) as u8 ^ rng.random_bool(p_flip) as u8;
                next.push(noisy);
            }
        }
        bits = next;
    }
    Ok(bits)
}

/// Majority vote over all leaves, ties broken toward 0.
///
/// # Panics
/// Panics on an empty slice.
pub fn majority_global(leaves: &[u8]) -> u8 {
    assert!(!leaves.is_empty(), "majority vote needs at least one leaf");
    let ones: usize = leaves.iter().map(|&b| b as usize).sum();
    (2 * ones > leaves.len()) as u8
}

/// Monte Carlo estimate of the global-majority decoding error.
#[derive(Clone, Copy, Debug)]
pub struct McMajorityEstimate {
    trials: u64,
    errors: u64,
}

impl McMajorityEstimate {
    /// Number of simulated broadcasts.
    pub fn trials(&self) -> u64 {
        self.trials
    }

    /// Trials whose majority vote missed the root bit.
    pub fn errors(&self) -> u64 {
        self.errors
    }

    /// Empirical decoding error rate.
    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }

    /// Binomial standard error of [`Self::error_rate`].
    pub fn std_err(&self) -> f64 {
        let q = self.error_rate();
        (q * (1.0 - q) / self.trials as f64).sqrt()
    }
}

/// Estimates the error rate of [`majority_global`] over `trials` simulated
/// broadcasts with a uniformly random root bit, one deterministic RNG
/// stream per trial, so the estimate is reproducible for a fixed seed
/// regardless of thread count.
///
/// # Panics
/// Panics if `cycle` is empty, `t_levels = 0`, or `trials = 0`.
pub fn mc_majority_error(
    cycle: &[ClassicalEncoder],
    p_flip: f64,
    t_levels: usize,
    trials: u64,
    seed: u64,
) -> Result<McMajorityEstimate> {
    use rayon::prelude::*;

    assert!(trials > 0, "need at least one trial");
    if !(0.0..=1.0).contains(&p_flip) {
        return Err(Error::InvalidProbability {
            name: "p_flip".into(),
            value: p_flip,
        });
    }
    leaf_count(cycle, t_levels)?;
    let errors = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = crate::rng::stream_rng(seed, k);
            let input = rng.random_bool(0.5);
            let leaves = simulate_tree(cycle, p_flip, t_levels, input, &mut rng)
                .expect("arguments validated above");
            (majority_global(&leaves) != input as u8) as u64
        })
        .sum();
    Ok(McMajorityEstimate { trials, errors })
}

/// Exact total variation distance between the leaf distributions for root
/// inputs 0 and 1, by conditional-distribution propagation: blocks are
/// independent given their parent bit, so the `2^{leaves}`-entry tables
/// build level by level as tensored mixtures instead of an enumeration of
/// the `2^{b^T}`-sized function space.
///
/// # Panics
/// Panics if `cycle` is empty or `t_levels = 0`.
pub fn tvd_exact(cycle: &[ClassicalEncoder], p_flip: f64, t_levels: usize) -> Result<f64> {
    assert!(!cycle.is_empty(), "need at least one encoder");
    assert!(t_levels >= 1, "the tree needs at least one level");
    if !(0.0..=1.0).contains(&p_flip) {
        return Err(Error::InvalidProbability {
            name: "p_flip".into(),
            value: p_flip,
        });
    }
    let leaves = leaf_count(cycle, t_levels)?;
    if leaves > TVD_MAX_LEAVES as u128 {
        return Err(Error::ResourceCap {
            what: "leaf count in exact TVD propagation",
            actual: leaves,
            cap: TVD_MAX_LEAVES as u128,
        });
    }
    // dist[c][w] = P(leaf pattern w | subtree root carries bit c), starting
    // from the height-0 "subtree" that is just the bit itself.
    let mut dist = [vec![1.0, 0.0], vec![0.0, 1.0]];
    let mut bits_below = 1usize;
    for h in 1..=t_levels {
        let enc = &cycle[(t_levels - h) % cycle.len()];
        let b = enc.b();
        // Edge noise acts on the bit entering each child subtree.
        let flipped: [Vec<f64>; 2] = [
            mix(&dist[0], &dist[1], p_flip),
            mix(&dist[1], &dist[0], p_flip),
        ];
        let out_bits = b * bits_below;
        let weight = 1.0 / enc.coset_size() as f64;
        let mut next = [vec![0.0; 1 << out_bits], vec![0.0; 1 << out_bits]];
        for c in 0..2 {
            for &w in &enc.support(c == 1) {
                // Tensor product of the b child-subtree distributions,
                // child j occupying bits [j*bits_below, (j+1)*bits_below).
                let mut acc = vec![1.0f64];
                for j in 0..b {
                    let f = &flipped[(w >> j & 1) as usize];
                    let mut nacc = vec![0.0; acc.len() << bits_below];
                    for (i, &a) in acc.iter().enumerate() {
                        if a == 0.0 {
                            continue;
                        }
                        for (wj, &fj) in f.iter().enumerate() {
                            nacc[(wj << (j * bits_below)) | i] += a * fj;
                        }
                    }
                    acc = nacc;
                }
                for (slot, &a) in next[c].iter_mut().zip(&acc) {
                    *slot += weight * a;
                }
            }
        }
        dist = next;
        bits_below = out_bits;
    }
    Ok(0.5
        * dist[0]
            .iter()
            .zip(&dist[1])
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

fn mix(keep: &[f64], swap: &[f64], p: f64) -> Vec<f64> {
    keep.iter()
        .zip(swap)
        .map(|(&k, &s)| (1.0 - p) * k + p * s)
        .collect()
}

fn leaf_count(cycle: &[ClassicalEncoder], t_levels: usize) -> Result<u128> {
    let mut leaves: u128 = 1;
    for t in (1..=t_levels).rev() {
        leaves = leaves.saturating_mul(cycle[(t_levels - t) % cycle.len()].b() as u128);
        if leaves > SIMULATE_MAX_LEAVES {
            return Err(Error::ResourceCap {
                what: "tree leaf count",
                actual: leaves,
                cap: SIMULATE_MAX_LEAVES,
            });
        }
    }
    Ok(leaves)
}

/// Side of the broadcasting threshold a `(b, p)` pair falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criticality {
    /// Below threshold: root information survives to arbitrary depth.
    Subcritical,
    /// At or above threshold (the boundary counts as supercritical).
    Supercritical,
}

/// Classifies a flip rate against the `b`-ary broadcasting threshold
/// `(1 - 1/√b)/2` from [`kesten_stigum_threshold`].
///
/// # Panics
/// Panics if `b < 2` or `p` is not a probability.
pub fn kesten_stigum_check(b: u64, p: f64) -> Criticality {
    assert!(b >= 2, "branching number must be at least 2");
    assert!((0.0..=1.0).contains(&p), "flip probability out of range");
    if p < kesten_stigum_threshold(b) {
        Criticality::Subcritical
    } else {
        Criticality::Supercritical
    }
}
