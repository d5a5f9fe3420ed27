//! Optimal decoding of the noisy tree: exact belief propagation over the
//! per-node syndrome records, plus a deterministic Monte Carlo harness for
//! logical error rates.
//!
//! # Model
//!
//! A depth-`T` tree channel applies the block encoder at every node and
//! independent Pauli noise on every wire. Decoding runs bottom up: each
//! node's block is split into a syndrome (measured and recorded) and a
//! residual logical letter that propagates to the parent. A realization is
//! therefore a pair *(root letter, tree of syndrome records)*, and the
//! decoder's job is the posterior over the root letter given every record.
//!
//! [`sample_realization`] draws one such pair without ever materializing
//! the `b^T`-qubit state: leaves draw their letter straight from the
//! channel; an interior node decomposes the tensor product of its
//! children's letters into `(class, syndrome)`, stores the syndrome, and
//! multiplies its own edge error onto the class. With `root_noise = false`
//! the root skips its edge error, so the result is the error on the decoded
//! qubit *before* it crosses the final wire.
//!
//! [`bp_posterior`] computes the exact conditional distribution of the root
//! letter by message passing: a leaf's message is the channel distribution,
//! and a node combines its children's messages over all letter assignments
//! consistent with its recorded syndrome. Because the factor graph is a
//! tree, the result is the true posterior, and [`bp_decode`]'s argmax is
//! the minimum-error decoder for this channel.
//!
//! # Modes
//!
//! * [`DecodeMode::Pauli`] tracks the full `{I, X, Y, Z}` letter alphabet
//!   and works for any encoder with `b ≤ `[`BP_PAULI_MAX_B`]. Logical
//!   classes follow [`CliffordEncoder::decompose`]: the class is read off
//!   by anticommutation with the logical operators, independent of the
//!   syndrome.
//! * [`DecodeMode::Binary`] restricts to one error axis of a CSS encoder
//!   (`b ≤ `[`BP_BINARY_MAX_B`]): blocks become bit patterns, checks the
//!   relevant pure-type stabilizers, and the class is measured **relative
//!   to the minimum-weight correction** `f(s)` for the observed syndrome
//!   (ties broken toward the smallest pattern value). A zero class at a
//!   node therefore means "the canonical correction would have fixed this
//!   block". For anti-standard encoders such as [`crate::codes::bell`] the
//!   two axes feed each other, so the per-level check/class maps alternate
//!   down the tree, with the requested axis produced at the root.
//!
//! Both conventions are self-consistent between sampling and decoding, so
//! [`mc_logical_error`]'s mismatch counts are convention-free.
//!
//! # Determinism
//!
//! Monte Carlo trials draw from [`stream_rng`]`(seed, trial)`, and results
//! are integer counts reduced associatively, so estimates are reproducible
//! bit-for-bit regardless of thread count.

use rand::Rng;
use rayon::prelude::*;

use crate::channel::PauliChannel;
use crate::pauli::{block_tables, class_letter, BlockTables};
use crate::rng::stream_rng;
use crate::{Axis, CliffordEncoder, Error, Result, SingleQubitPauli};

/// Largest block size in Pauli mode; per-node sums range over all `4^b`
/// child-letter assignments (organized as a syndrome/class convolution).
pub const BP_PAULI_MAX_B: usize = 7;

/// Largest block size in binary mode; per-node sums range over the `2^b`
/// child-bit assignments.
pub const BP_BINARY_MAX_B: usize = 16;

/// Cap on the number of leaves `b^T` of a single realization.
pub const BP_MAX_LEAVES: u128 = 1 << 22;

/// Alphabet the sampler and decoder work in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeMode {
    /// Full `{I, X, Y, Z}` letters; any encoder.
    Pauli,
    /// One error axis of a CSS encoder: `Binary(Axis::X)` decodes the
    /// bit-flip sector, `Binary(Axis::Z)` the phase-flip sector.
    Binary(Axis),
}

/// Per-node syndrome records of one sampled realization.
///
/// `levels()[h]` holds the records of the nodes at height `h + 1` above the
/// leaves, left to right, so `levels()` runs from the lowest interior level
/// up to the root and child `i` of node `j` at one level is node
/// `j * b + i` one level below. Record bit `k` is check `k` of that node:
/// stabilizer `k` in Pauli mode, the `k`-th relevant pure-type stabilizer
/// in binary mode (where unused bits stay zero and levels of an alternating
/// encoder may have different check counts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeTree {
    b: usize,
    levels: Vec<Vec<u32>>,
}

impl SyndromeTree {
    /// Wraps explicit records, validating the `b`-ary shape: the last level
    /// is the single root and each level is `b` times longer than the one
    /// above it.
    pub fn from_levels(b: usize, levels: Vec<Vec<u32>>) -> Result<SyndromeTree> {
        if b < 2 {
            return Err(Error::BadInput(format!(
                "syndrome tree needs a block size of at least 2, got {b}"
            )));
        }
        if levels.is_empty() {
            return Err(Error::BadInput(
                "syndrome tree needs at least one level".into(),
            ));
        }
        match levels.last() {
            Some(root) if root.len() == 1 => {}
            _ => {
                return Err(Error::BadInput(
                    "the last syndrome level must hold exactly the root record".into(),
                ))
            }
        }
        for h in 0..levels.len() - 1 {
            if levels[h].len() != levels[h + 1].len() * b {
                return Err(Error::BadInput(format!(
                    "syndrome level {} has {} records; expected {} (b × level {})",
                    h,
                    levels[h].len(),
                    levels[h + 1].len() * b,
                    h + 1,
                )));
            }
        }
        Ok(SyndromeTree { b, levels })
    }

    /// Block size of the tree the records came from.
    pub fn b(&self) -> usize {
        self.b
    }

    /// Number of levels `T` (interior levels carrying a record).
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Total number of recorded nodes, `(b^T - 1) / (b - 1)`.
    pub fn node_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// All records, lowest interior level first, root level last.
    pub fn levels(&self) -> &[Vec<u32>] {
        &self.levels
    }

    /// Records of the nodes at height `t ∈ 1..=depth` above the leaves.
    pub fn level(&self, t: usize) -> &[u32] {
        &self.levels[t - 1]
    }
}

/// Exact posterior over the root logical letter given every syndrome
/// record; entries are indexed like [`SingleQubitPauli::index`]. In binary
/// mode all weight sits on `I` and the decoded axis letter.
#[derive(Clone, Debug, PartialEq)]
pub struct Posterior {
    probs: [f64; 4],
}

impl Posterior {
    fn new(raw: [f64; 4]) -> Posterior {
        let total: f64 = raw.iter().sum();
        assert!(
            raw.iter().all(|&p| p >= 0.0) && total > 0.0,
            "posterior weights must be nonnegative with positive mass, got {raw:?}"
        );
        Posterior {
            probs: raw.map(|p| p / total),
        }
    }

    /// Belief vector over `{I, X, Y, Z}`; nonnegative and summing to 1.
    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    /// Posterior probability of one letter.
    pub fn pr(&self, l: SingleQubitPauli) -> f64 {
        self.probs[l.index()]
    }
}

/// Argmax decoding with the deterministic tie-break `I < X < Y < Z`
/// (ties occur at `p = 1/2` exactly, and broken this way success counts
/// are reproducible).
pub fn bp_decode(post: &Posterior) -> SingleQubitPauli {
    let mut best = 0;
    for i in 1..4 {
        if post.probs[i] > post.probs[best] {
            best = i;
        }
    }
    SingleQubitPauli::from_index(best)
}

/// Monte Carlo estimate of the logical error rate under optimal decoding.
///
/// `counts()[k]` is the number of trials whose discrepancy
/// `decoded · truth` was the letter with index `k`, so index 0 counts the
/// successes and the rest split the failures by logical class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McDecodeEstimate {
    trials: u64,
    counts: [u64; 4],
}

impl McDecodeEstimate {
    /// Number of trials.
    pub fn trials(&self) -> u64 {
        self.trials
    }

    /// Discrepancy counts by letter index (`I` = decoded correctly).
    pub fn counts(&self) -> [u64; 4] {
        self.counts
    }

    /// Fraction of trials decoded incorrectly.
    pub fn error_rate(&self) -> f64 {
        1.0 - self.counts[0] as f64 / self.trials as f64
    }

    /// Bernoulli standard error `√(q(1-q)/N)` of [`error_rate`](Self::error_rate).
    pub fn std_err(&self) -> f64 {
        let q = self.error_rate();
        (q * (1.0 - q) / self.trials as f64).sqrt()
    }

    /// Fraction of trials whose discrepancy was the given letter.
    pub fn class_rate(&self, l: SingleQubitPauli) -> f64 {
        self.counts[l.index()] as f64 / self.trials as f64
    }

    /// Bernoulli standard error of [`class_rate`](Self::class_rate).
    pub fn class_std_err(&self, l: SingleQubitPauli) -> f64 {
        let q = self.class_rate(l);
        (q * (1.0 - q) / self.trials as f64).sqrt()
    }
}

/// Draws one realization of the depth-`t_levels` tree: the residual root
/// letter and every syndrome record. See the module docs for the exact
/// bottom-up convention and the meaning of `root_noise`.
///
/// # Panics
/// Panics if `t_levels = 0`.
pub fn sample_realization<R: Rng + ?Sized>(
    enc: &CliffordEncoder,
    noise: &PauliChannel,
    t_levels: usize,
    mode: DecodeMode,
    root_noise: bool,
    rng: &mut R,
) -> Result<(SingleQubitPauli, SyndromeTree)> {
    assert!(t_levels >= 1, "the tree needs at least one level");
    let leaves = checked_leaf_count(enc.b(), t_levels)?;
    match mode {
        DecodeMode::Pauli => {
            let tables = pauli_tables(enc)?;
            Ok(pauli_sample(
                &tables, noise, t_levels, leaves, root_noise, rng,
            ))
        }
        DecodeMode::Binary(axis) => {
            let code = binary_code(enc, axis)?;
            Ok(binary_sample(
                &code, noise, t_levels, leaves, root_noise, rng,
            ))
        }
    }
}

/// Exact posterior over the root logical letter given the recorded
/// syndromes; `noise`, `mode`, and `root_noise` must describe the process
/// the records came from.
///
/// Messages are renormalized at every node, which both controls underflow
/// and absorbs the `1/p(s)` conditioning constants; the result is exact on
/// the tree. Fails with [`Error::BadInput`] when the records do not fit the
/// encoder/mode shape or have probability zero under the channel.
pub fn bp_posterior(
    synd: &SyndromeTree,
    enc: &CliffordEncoder,
    noise: &PauliChannel,
    mode: DecodeMode,
    root_noise: bool,
) -> Result<Posterior> {
    if synd.b() != enc.b() {
        return Err(Error::BadInput(format!(
            "syndrome tree has block size {} but the encoder has {}",
            synd.b(),
            enc.b()
        )));
    }
    checked_leaf_count(enc.b(), synd.depth())?;
    match mode {
        DecodeMode::Pauli => {
            let tables = pauli_tables(enc)?;
            pauli_posterior(synd, &tables, noise, root_noise)
        }
        DecodeMode::Binary(axis) => {
            let code = binary_code(enc, axis)?;
            binary_posterior(synd, &code, noise, root_noise)
        }
    }
}

/// Samples `trials` realizations, decodes each with [`bp_posterior`] +
/// [`bp_decode`], and tallies the discrepancies. Trial `k` draws from
/// [`stream_rng`]`(seed, k)`, so estimates are reproducible regardless of
/// thread count.
///
/// # Panics
/// Panics if `trials = 0` or `t_levels = 0`.
pub fn mc_logical_error(
    enc: &CliffordEncoder,
    noise: &PauliChannel,
    t_levels: usize,
    trials: u64,
    mode: DecodeMode,
    root_noise: bool,
    seed: u64,
) -> Result<McDecodeEstimate> {
    assert!(trials >= 1, "need at least one trial");
    assert!(t_levels >= 1, "the tree needs at least one level");
    checked_leaf_count(enc.b(), t_levels)?;
    // Validate the mode/encoder pairing once, before fanning out.
    match mode {
        DecodeMode::Pauli => {
            pauli_tables(enc)?;
        }
        DecodeMode::Binary(axis) => {
            binary_code(enc, axis)?;
        }
    }
    let counts = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k);
            let (truth, synd) =
                sample_realization(enc, noise, t_levels, mode, root_noise, &mut rng)
                    .expect("realization parameters were validated before the trial loop");
            let post = bp_posterior(&synd, enc, noise, mode, root_noise)
                .expect("a sampled syndrome tree always has positive probability");
            bp_decode(&post).mul(truth).index()
        })
        .fold(
            || [0u64; 4],
            |mut acc, i| {
                acc[i] += 1;
                acc
            },
        )
        .reduce(
            || [0u64; 4],
            |mut a, b| {
                for i in 0..4 {
                    a[i] += b[i];
                }
                a
            },
        );
    Ok(McDecodeEstimate { trials, counts })
}

fn checked_leaf_count(b: usize, t_levels: usize) -> Result<u128> {
    let mut leaves: u128 = 1;
    for _ in 0..t_levels {
        leaves = leaves.saturating_mul(b as u128);
        if leaves > BP_MAX_LEAVES {
            return Err(Error::ResourceCap {
                what: "tree leaf count b^T",
                actual: leaves,
                cap: BP_MAX_LEAVES,
            });
        }
    }
    Ok(leaves)
}

// ---------------------------------------------------------------------------
// Pauli mode
// ---------------------------------------------------------------------------

fn pauli_tables(enc: &CliffordEncoder) -> Result<BlockTables> {
    if enc.b() > BP_PAULI_MAX_B {
        return Err(Error::ResourceCap {
            what: "block size in Pauli-mode belief propagation",
            actual: enc.b() as u128,
            cap: BP_PAULI_MAX_B as u128,
        });
    }
    Ok(block_tables(enc))
}

fn pauli_sample<R: Rng + ?Sized>(
    tables: &BlockTables,
    noise: &PauliChannel,
    t_levels: usize,
    leaves: u128,
    root_noise: bool,
    rng: &mut R,
) -> (SingleQubitPauli, SyndromeTree) {
    let b = tables.b;
    let mut letters: Vec<u8> = (0..leaves as usize)
        .map(|_| noise.sample(rng).index() as u8)
        .collect();
    let mut levels = Vec::with_capacity(t_levels);
    for t in 1..=t_levels {
        let n_nodes = letters.len() / b;
        let mut records = Vec::with_capacity(n_nodes);
        let mut next = Vec::with_capacity(n_nodes);
        for j in 0..n_nodes {
            let mut s = 0u32;
            let mut cls = 0u8;
            for i in 0..b {
                let v = letters[j * b + i] as usize;
                s ^= tables.synd[i][v];
                cls ^= tables.cls[i][v];
            }
            let mut letter = class_letter(cls);
            if t < t_levels || root_noise {
                letter = letter.mul(noise.sample(rng));
            }
            records.push(s);
            next.push(letter.index() as u8);
        }
        levels.push(records);
        letters = next;
    }
    let root = SingleQubitPauli::from_index(letters[0] as usize);
    (root, SyndromeTree { b, levels })
}

fn pauli_posterior(
    synd: &SyndromeTree,
    tables: &BlockTables,
    noise: &PauliChannel,
    root_noise: bool,
) -> Result<Posterior> {
    let b = tables.b;
    let t_levels = synd.depth();
    let n_checks = b - 1;
    let n_states = 1usize << n_checks;
    // Leaf messages are the channel distribution itself.
    let mut msgs: Vec<[f64; 4]> = Vec::new();
    let mut dp = vec![0.0f64; n_states * 4];
    let mut ndp = vec![0.0f64; n_states * 4];
    let leaf_msg = noise.rates();
    for t in 1..=t_levels {
        let records = synd.level(t);
        let mut out_msgs = Vec::with_capacity(records.len());
        for (j, &record) in records.iter().enumerate() {
            if record as usize >= n_states {
                return Err(Error::BadInput(format!(
                    "record {record:#b} at level {t}, node {j} does not fit {n_checks} checks"
                )));
            }
            dp.fill(0.0);
            dp[0] = 1.0;
            for i in 0..b {
                let child = if t == 1 { &leaf_msg } else { &msgs[j * b + i] };
                ndp.fill(0.0);
                for s in 0..n_states {
                    for c in 0..4usize {
                        let w = dp[s * 4 + c];
                        if w == 0.0 {
                            continue;
                        }
                        for v in 0..4usize {
                            let m = child[v];
                            if m == 0.0 {
                                continue;
                            }
                            let s2 = s ^ tables.synd[i][v] as usize;
                            let c2 = c ^ tables.cls[i][v] as usize;
                            ndp[s2 * 4 + c2] += w * m;
                        }
                    }
                }
                std::mem::swap(&mut dp, &mut ndp);
            }
            // Conditional class distribution at the observed syndrome,
            // reindexed from class bits to letter indices.
            let mut inner = [0.0f64; 4];
            for cls in 0..4u8 {
                inner[class_letter(cls).index()] = dp[record as usize * 4 + cls as usize];
            }
            let total: f64 = inner.iter().sum();
            if total <= 0.0 {
                return Err(Error::BadInput(format!(
                    "record {record:#b} at level {t}, node {j} has probability zero \
                     under this channel"
                )));
            }
            let convolve = t < t_levels || root_noise;
            let mut out = [0.0f64; 4];
            if convolve {
                for (l, slot) in out.iter_mut().enumerate() {
                    let l = SingleQubitPauli::from_index(l);
                    *slot = SingleQubitPauli::ALL
                        .iter()
                        .map(|&lp| noise.transition(l, lp) * inner[lp.index()])
                        .sum();
                }
            } else {
                out = inner;
            }
            let norm: f64 = out.iter().sum();
            out_msgs.push(out.map(|p| p / norm));
        }
        msgs = out_msgs;
    }
    Ok(Posterior::new(msgs[0]))
}

// ---------------------------------------------------------------------------
// Binary mode
// ---------------------------------------------------------------------------

/// One level of the binary (single-axis) reduction: block bit patterns are
/// scored by `checks`, classed by `lmask` relative to the minimum-weight
/// correction `f`, and the produced class letter lives on `out_axis`.
#[derive(Clone, Debug)]
struct BinaryLevel {
    checks: Vec<u32>,
    lmask: u32,
    /// `offset[s] = parity(f(s) & lmask)`: the class of the canonical
    /// correction `f(s)`, the minimum-weight pattern with syndrome `s`
    /// (ties toward the smallest value).
    offset: Vec<u8>,
    in_axis: Axis,
    out_axis: Axis,
}

/// The cycled per-level maps of the binary reduction; `cycle[0]` is the
/// root level, and level `t` of a depth-`T` tree uses
/// `cycle[(T - t) % cycle.len()]`.
struct BinaryCode {
    b: usize,
    cycle: Vec<BinaryLevel>,
}

impl BinaryCode {
    fn level(&self, t_levels: usize, t: usize) -> &BinaryLevel {
        &self.cycle[(t_levels - t) % self.cycle.len()]
    }

    /// Axis of the letters the leaves carry.
    fn leaf_axis(&self, t_levels: usize) -> Axis {
        self.level(t_levels, 1).in_axis
    }
}

fn binary_level(enc: &CliffordEncoder, out_axis: Axis) -> Result<BinaryLevel> {
    let b = enc.b();
    // The class bit on `out_axis` is anticommutation with the opposite
    // logical operator, so that operator's type decides which patterns
    // (X- or Z-type) this level consumes and which stabilizers check them.
    let lop = match out_axis {
        Axis::X => enc.logical_z(),
        Axis::Z => enc.logical_x(),
    };
    let (in_axis, lmask, checks) = if lop.is_z_type() {
        let checks: Vec<u32> = enc
            .z_type_stabilizers()
            .iter()
            .map(|s| s.z_bits().as_u32())
            .collect();
        (Axis::X, lop.z_bits().as_u32(), checks)
    } else if lop.is_x_type() {
        let checks: Vec<u32> = enc
            .x_type_stabilizers()
            .iter()
            .map(|s| s.x_bits().as_u32())
            .collect();
        (Axis::Z, lop.x_bits().as_u32(), checks)
    } else {
        return Err(Error::Unsupported(format!(
            "binary {} decoding needs a pure-type logical {} operator",
            out_axis.name(),
            match out_axis {
                Axis::X => "Z",
                Axis::Z => "X",
            },
        )));
    };
    let n_checks = checks.len();
    let mut f = vec![u32::MAX; 1 << n_checks];
    let mut patterns: Vec<u32> = (0..1u32 << b).collect();
    patterns.sort_by_key(|&y| (y.count_ones(), y));
    for y in patterns {
        let s = binary_syndrome(y, &checks);
        if f[s as usize] == u32::MAX {
            f[s as usize] = y;
        }
    }
    debug_assert!(
        f.iter().all(|&y| y != u32::MAX),
        "independent checks make every syndrome reachable"
    );
    let offset = f.iter().map(|&y| parity(y & lmask)).collect();
    Ok(BinaryLevel {
        checks,
        lmask,
        offset,
        in_axis,
        out_axis,
    })
}

fn binary_code(enc: &CliffordEncoder, axis: Axis) -> Result<BinaryCode> {
    let b = enc.b();
    if b > BP_BINARY_MAX_B {
        return Err(Error::ResourceCap {
            what: "block size in binary-mode belief propagation",
            actual: b as u128,
            cap: BP_BINARY_MAX_B as u128,
        });
    }
    if !enc.is_css() {
        return Err(Error::Unsupported(
            "binary-mode decoding is defined for CSS encoders only".into(),
        ));
    }
    let root = binary_level(enc, axis)?;
    let cycle = if root.in_axis == axis {
        vec![root]
    } else {
        let feeder = binary_level(enc, root.in_axis)?;
        if feeder.in_axis != axis {
            return Err(Error::Unsupported(
                "binary-mode decoding needs the two axes to close a cycle".into(),
            ));
        }
        vec![root, feeder]
    };
    Ok(BinaryCode { b, cycle })
}

fn binary_syndrome(y: u32, checks: &[u32]) -> u32 {
    let mut s = 0u32;
    for (j, &c) in checks.iter().enumerate() {
        s |= (parity(y & c) as u32) << j;
    }
    s
}

fn parity(v: u32) -> u8 {
    (v.count_ones() & 1) as u8
}

fn axis_letter(axis: Axis) -> SingleQubitPauli {
    match axis {
        Axis::X => SingleQubitPauli::X,
        Axis::Z => SingleQubitPauli::Z,
    }
}

fn binary_sample<R: Rng + ?Sized>(
    code: &BinaryCode,
    noise: &PauliChannel,
    t_levels: usize,
    leaves: u128,
    root_noise: bool,
    rng: &mut R,
) -> (SingleQubitPauli, SyndromeTree) {
    let b = code.b;
    let leaf_flip = noise.flip_probability(code.leaf_axis(t_levels));
    let mut bits: Vec<u8> = (0..leaves as usize)
        .map(|_| rng.random_bool(leaf_flip) as u8)
        .collect();
    let mut levels = Vec::with_capacity(t_levels);
    for t in 1..=t_levels {
        let lvl = code.level(t_levels, t);
        let edge_flip = noise.flip_probability(lvl.out_axis);
        let n_nodes = bits.len() / b;
        let mut records = Vec::with_capacity(n_nodes);
        let mut next = Vec::with_capacity(n_nodes);
        for j in 0..n_nodes {
            let mut y = 0u32;
            for i in 0..b {
                y |= (bits[j * b + i] as u32) << i;
            }
            let s = binary_syndrome(y, &lvl.checks);
            let mut cls = parity(y & lvl.lmask) ^ lvl.offset[s as usize];
            if t < t_levels || root_noise {
                cls ^= rng.random_bool(edge_flip) as u8;
            }
            records.push(s);
            next.push(cls);
        }
        levels.push(records);
        bits = next;
    }
    let root = if bits[0] == 1 {
        axis_letter(code.cycle[0].out_axis)
    } else {
        SingleQubitPauli::I
    };
    (root, SyndromeTree { b, levels })
}

fn binary_posterior(
    synd: &SyndromeTree,
    code: &BinaryCode,
    noise: &PauliChannel,
    root_noise: bool,
) -> Result<Posterior> {
    let b = code.b;
    let t_levels = synd.depth();
    let leaf_flip = noise.flip_probability(code.leaf_axis(t_levels));
    let leaf_msg = [1.0 - leaf_flip, leaf_flip];
    let mut msgs: Vec<[f64; 2]> = Vec::new();
    for t in 1..=t_levels {
        let lvl = code.level(t_levels, t);
        let n_checks = lvl.checks.len();
        let n_states = 1usize << n_checks;
        let edge_flip = noise.flip_probability(lvl.out_axis);
        // Per-child-position syndrome columns and class bits of a set bit.
        let col: Vec<u32> = (0..b)
            .map(|i| binary_syndrome(1 << i, &lvl.checks))
            .collect();
        let lbit: Vec<u8> = (0..b).map(|i| parity((1 << i) & lvl.lmask)).collect();
        let mut dp = vec![0.0f64; n_states * 2];
        let mut ndp = vec![0.0f64; n_states * 2];
        let records = synd.level(t);
        let mut out_msgs = Vec::with_capacity(records.len());
        for (j, &record) in records.iter().enumerate() {
            if record as usize >= n_states {
                return Err(Error::BadInput(format!(
                    "record {record:#b} at level {t}, node {j} does not fit {n_checks} checks"
                )));
            }
            dp.fill(0.0);
            dp[0] = 1.0;
            for i in 0..b {
                let child = if t == 1 { &leaf_msg } else { &msgs[j * b + i] };
                ndp.fill(0.0);
                for s in 0..n_states {
                    for c in 0..2usize {
                        let w = dp[s * 2 + c];
                        if w == 0.0 {
                            continue;
                        }
                        ndp[s * 2 + c] += w * child[0];
                        let s2 = s ^ col[i] as usize;
                        let c2 = c ^ lbit[i] as usize;
                        ndp[s2 * 2 + c2] += w * child[1];
                    }
                }
                std::mem::swap(&mut dp, &mut ndp);
            }
            // Class relative to the canonical correction for this record.
            let off = lvl.offset[record as usize] as usize;
            let inner = [
                dp[record as usize * 2 + off],
                dp[record as usize * 2 + (off ^ 1)],
            ];
            let total = inner[0] + inner[1];
            if total <= 0.0 {
                return Err(Error::BadInput(format!(
                    "record {record:#b} at level {t}, node {j} has probability zero \
                     under this channel"
                )));
            }
            let out = if t < t_levels || root_noise {
                [
                    (1.0 - edge_flip) * inner[0] + edge_flip * inner[1],
                    (1.0 - edge_flip) * inner[1] + edge_flip * inner[0],
                ]
            } else {
                inner
            };
            let norm = out[0] + out[1];
            out_msgs.push([out[0] / norm, out[1] / norm]);
        }
        msgs = out_msgs;
    }
    let flip = msgs[0][1];
    let mut probs = [0.0f64; 4];
    probs[0] = msgs[0][0];
    probs[axis_letter(code.cycle[0].out_axis).index()] = flip;
    Ok(Posterior::new(probs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;
    use approx::assert_relative_eq;

    fn zero_tree(b: usize, t_levels: usize) -> SyndromeTree {
        let mut levels = Vec::new();
        let mut n = b.pow(t_levels as u32 - 1);
        for _ in 0..t_levels {
            levels.push(vec![0u32; n]);
            n /= b;
        }
        SyndromeTree::from_levels(b, levels).unwrap()
    }

    #[test]
    fn noiseless_sampling_is_trivial() {
        let enc = codes::rep(3).unwrap();
        let clean = PauliChannel::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let mut rng = stream_rng(7, 0);
        for mode in [DecodeMode::Pauli, DecodeMode::Binary(Axis::X)] {
            let (root, synd) =
                sample_realization(&enc, &clean, 3, mode, true, &mut rng).unwrap();
            assert_eq!(root, SingleQubitPauli::I);
            assert!(synd.levels().iter().all(|l| l.iter().all(|&s| s == 0)));
            assert_eq!(synd.node_count(), 9 + 3 + 1);
        }
    }

    #[test]
    fn zero_noise_posterior_is_a_point_mass() {
        let enc = codes::rep(3).unwrap();
        let clean = PauliChannel::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let synd = zero_tree(3, 2);
        for mode in [DecodeMode::Pauli, DecodeMode::Binary(Axis::X)] {
            let post = bp_posterior(&synd, &enc, &clean, mode, true).unwrap();
            assert_eq!(post.probs(), [1.0, 0.0, 0.0, 0.0]);
            assert_eq!(bp_decode(&post), SingleQubitPauli::I);
        }
    }

    #[test]
    fn rep3_binary_single_level_posteriors_match_the_closed_forms() {
        let enc = codes::rep(3).unwrap();
        let noise = PauliChannel::bit_flip(0.1).unwrap();
        let p: f64 = 0.1;

        // Trivial syndrome: patterns 000 vs 111.
        let synd = SyndromeTree::from_levels(3, vec![vec![0]]).unwrap();
        let post =
            bp_posterior(&synd, &enc, &noise, DecodeMode::Binary(Axis::X), false).unwrap();
        let expect = p.powi(3) / (p.powi(3) + (1.0 - p).powi(3));
        assert_relative_eq!(post.pr(SingleQubitPauli::X), expect, max_relative = 1e-12);
        assert_relative_eq!(
            post.pr(SingleQubitPauli::X),
            1.3698630136986302e-3,
            max_relative = 1e-12
        );

        // First check fires: patterns 100 vs 011, flip probability exactly p.
        let synd = SyndromeTree::from_levels(3, vec![vec![0b01]]).unwrap();
        let post =
            bp_posterior(&synd, &enc, &noise, DecodeMode::Binary(Axis::X), false).unwrap();
        assert_relative_eq!(post.pr(SingleQubitPauli::X), p, max_relative = 1e-12);
        assert_eq!(bp_decode(&post), SingleQubitPauli::I);
    }

    #[test]
    fn single_flip_is_absorbed_by_the_canonical_correction() {
        // An X on qubit 0 of a rep(3) block: syndrome fires check 0 only,
        // the raw class is X, and the minimum-weight correction is that
        // same flip, so the binary class relative to it is 0.
        let enc = codes::rep(3).unwrap();
        let e = crate::PauliString::from_single(3, 0, SingleQubitPauli::X);
        let (cls, s) = enc.decompose(&e);
        assert_eq!(cls, SingleQubitPauli::X);
        assert_eq!(s.as_u32(), 0b01);
        let lvl = binary_level(&enc, Axis::X).unwrap();
        assert_eq!(lvl.offset[0b01], 1, "the correction X@0 carries class X");
        assert_eq!(parity(0b001 & lvl.lmask) ^ lvl.offset[0b01], 0);
    }

    #[test]
    fn bell_two_level_push_chain_turns_an_inner_z_into_a_root_x() {
        // A single Z on one depth-1 wire of the depth-2 Bell tree: the two
        // leaves below it are clean (class I, no syndrome), the Z rides up
        // to the root block as Z ⊗ I, which commutes with the ZZ check but
        // anticommutes with logical Z = XX: root class X, all records 0.
        let enc = codes::bell();
        let clean = enc.decompose(&crate::PauliString::identity(2));
        assert_eq!(clean.0, SingleQubitPauli::I);
        let carried = clean.0.mul(SingleQubitPauli::Z);
        let block = crate::PauliString::from_letters(&[carried, SingleQubitPauli::I]);
        let (root, s) = enc.decompose(&block);
        assert_eq!(root, SingleQubitPauli::X);
        assert_eq!(s.as_u32(), 0);
    }

    #[test]
    fn all_z_noise_on_the_bell_tree_cancels_at_depth_two() {
        // Every wire errs with Z: each depth-1 block sees Z⊗Z (class I,
        // trivial syndrome), each depth-1 node adds its own Z, and the root
        // block again sees Z⊗Z. With the root wire skipped the residual is
        // exactly I with every record 0.
        let enc = codes::bell();
        let all_z = PauliChannel::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let mut rng = stream_rng(1, 0);
        let (root, synd) =
            sample_realization(&enc, &all_z, 2, DecodeMode::Pauli, false, &mut rng).unwrap();
        assert_eq!(root, SingleQubitPauli::I);
        assert_eq!(synd.levels(), &[vec![0, 0], vec![0]]);
    }

    #[test]
    fn bell_binary_alternation_starts_with_the_checkless_map_at_the_root() {
        let enc = codes::bell();
        let code = binary_code(&enc, Axis::X).unwrap();
        assert_eq!(code.cycle.len(), 2);
        assert_eq!(code.cycle[0].checks.len(), 0);
        assert_eq!(code.cycle[0].lmask, 0b11);
        assert_eq!(code.cycle[0].in_axis, Axis::Z);
        assert_eq!(code.cycle[1].checks, vec![0b11]);
        assert_eq!(code.cycle[1].lmask, 0b01);
        assert_eq!(code.cycle[1].in_axis, Axis::X);

        // Depth 1 exposes the root map directly: the class is the parity of
        // two independent leaf Z-letters, so Pr(flip) = 2q(1-q).
        let noise = PauliChannel::from_independent_xz(0.1, 0.2).unwrap();
        let synd = SyndromeTree::from_levels(2, vec![vec![0]]).unwrap();
        let post =
            bp_posterior(&synd, &enc, &noise, DecodeMode::Binary(Axis::X), false).unwrap();
        assert_relative_eq!(post.pr(SingleQubitPauli::X), 0.32, max_relative = 1e-12);
        assert_relative_eq!(post.pr(SingleQubitPauli::I), 0.68, max_relative = 1e-12);
        assert_eq!(post.pr(SingleQubitPauli::Z), 0.0);
    }

    #[test]
    fn bell_binary_syndrome_levels_alternate_their_check_counts() {
        let enc = codes::bell();
        let noise = PauliChannel::depolarizing(0.2).unwrap();
        let mut rng = stream_rng(3, 0);
        let (_, synd) =
            sample_realization(&enc, &noise, 3, DecodeMode::Binary(Axis::X), false, &mut rng)
                .unwrap();
        // Root level is the checkless parity map, the next one down carries
        // the ZZ check, and so on alternating.
        assert_eq!(synd.level(3), &[0]);
        assert!(synd.level(2).iter().all(|&s| s <= 1));
        assert!(synd.level(1).iter().all(|&s| s == 0));
    }

    #[test]
    fn sampled_posteriors_are_normalized_distributions() {
        let cases: Vec<(CliffordEncoder, DecodeMode)> = vec![
            (codes::rep(3).unwrap(), DecodeMode::Pauli),
            (codes::bell(), DecodeMode::Pauli),
            (codes::bell_variant(3).unwrap(), DecodeMode::Pauli),
            (codes::bell(), DecodeMode::Binary(Axis::Z)),
            (codes::steane7(), DecodeMode::Binary(Axis::X)),
        ];
        let noise = PauliChannel::depolarizing(0.12).unwrap();
        for (k, (enc, mode)) in cases.iter().enumerate() {
            let mut rng = stream_rng(11, k as u64);
            let (_, synd) =
                sample_realization(enc, &noise, 2, *mode, true, &mut rng).unwrap();
            let post = bp_posterior(&synd, enc, &noise, *mode, true).unwrap();
            let sum: f64 = post.probs().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            assert!(post.probs().iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn pauli_and_binary_modes_agree_on_rep3() {
        // rep(3) has only Z-type checks, so a one-level syndrome record is
        // valid in both modes. The Pauli class is the raw X component while
        // the binary class is measured relative to the minimum-weight
        // correction f(s); they differ exactly by the class of f(s), so the
        // X ∪ Y marginal of the full posterior must map onto the binary
        // flip probability through that offset.
        let enc = codes::rep(3).unwrap();
        let noise = PauliChannel::from_independent_xz(0.1, 0.07).unwrap();
        let lvl = binary_level(&enc, Axis::X).unwrap();
        for record in 0u32..4 {
            let synd = SyndromeTree::from_levels(3, vec![vec![record]]).unwrap();
            let pauli = bp_posterior(&synd, &enc, &noise, DecodeMode::Pauli, false).unwrap();
            let binary =
                bp_posterior(&synd, &enc, &noise, DecodeMode::Binary(Axis::X), false).unwrap();
            let marginal = pauli.pr(SingleQubitPauli::X) + pauli.pr(SingleQubitPauli::Y);
            let mut flip = binary.pr(SingleQubitPauli::X);
            if lvl.offset[record as usize] == 1 {
                flip = 1.0 - flip;
            }
            assert_relative_eq!(marginal, flip, max_relative = 1e-10);
        }

        // Deeper trees relabel classes per node, but both modes decode the
        // bit-flip sector optimally, so their error rates must agree.
        let pauli = mc_logical_error(&enc, &noise, 2, 20_000, DecodeMode::Pauli, false, 77)
            .unwrap();
        let binary = mc_logical_error(
            &enc,
            &noise,
            2,
            20_000,
            DecodeMode::Binary(Axis::X),
            false,
            78,
        )
        .unwrap();
        let pauli_x = pauli.class_rate(SingleQubitPauli::X) + pauli.class_rate(SingleQubitPauli::Y);
        let sigma = (pauli.std_err().powi(2) + binary.std_err().powi(2)).sqrt();
        assert!(
            (pauli_x - binary.error_rate()).abs() <= 3.0 * sigma.max(1e-4),
            "pauli X-sector {pauli_x} vs binary {}",
            binary.error_rate()
        );
    }

    #[test]
    fn mc_with_zero_noise_never_errs() {
        let enc = codes::bell();
        let clean = PauliChannel::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let est =
            mc_logical_error(&enc, &clean, 3, 500, DecodeMode::Pauli, true, 5).unwrap();
        assert_eq!(est.error_rate(), 0.0);
        assert_eq!(est.counts(), [500, 0, 0, 0]);
    }

    #[test]
    fn mc_is_reproducible_for_a_fixed_seed() {
        let enc = codes::rep(3).unwrap();
        let noise = PauliChannel::depolarizing(0.15).unwrap();
        let a = mc_logical_error(&enc, &noise, 2, 2000, DecodeMode::Pauli, true, 99).unwrap();
        let b = mc_logical_error(&enc, &noise, 2, 2000, DecodeMode::Pauli, true, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts().iter().sum::<u64>(), 2000);
    }

    #[test]
    fn three_ary_single_level_error_matches_the_majority_formula() {
        let enc = codes::rep(3).unwrap();
        let noise = PauliChannel::bit_flip(0.1).unwrap();
        let est = mc_logical_error(
            &enc,
            &noise,
            1,
            100_000,
            DecodeMode::Binary(Axis::X),
            false,
            2024,
        )
        .unwrap();
        let expect = 3.0 * 0.9 * 0.01 + 0.001;
        assert!(
            (est.error_rate() - expect).abs() <= 3.0 * est.std_err().max(1e-4),
            "estimate {} vs closed form {expect}",
            est.error_rate()
        );
    }

    #[test]
    fn shor9_single_level_matches_the_coset_helstrom_error() {
        let enc = codes::shor(3).unwrap();
        let table = crate::alpha::coset_table(&enc, Axis::X).unwrap();
        let expect = table.helstrom_error(0.05);
        let noise = PauliChannel::bit_flip(0.05).unwrap();
        let est = mc_logical_error(
            &enc,
            &noise,
            1,
            30_000,
            DecodeMode::Binary(Axis::X),
            false,
            31,
        )
        .unwrap();
        assert!(
            (est.error_rate() - expect).abs() <= 3.0 * est.std_err().max(1e-4),
            "estimate {} vs Helstrom {expect}",
            est.error_rate()
        );
    }

    #[test]
    fn resource_and_mode_caps_are_enforced() {
        let clean = PauliChannel::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let mut rng = stream_rng(0, 0);
        let big = codes::rep(8).unwrap();
        assert!(matches!(
            sample_realization(&big, &clean, 1, DecodeMode::Pauli, true, &mut rng),
            Err(Error::ResourceCap { .. })
        ));
        let wide = codes::rep(17).unwrap();
        assert!(matches!(
            sample_realization(&wide, &clean, 1, DecodeMode::Binary(Axis::X), true, &mut rng),
            Err(Error::ResourceCap { .. })
        ));
        let mixed = codes::bell_variant(3).unwrap();
        assert!(matches!(
            sample_realization(&mixed, &clean, 1, DecodeMode::Binary(Axis::X), true, &mut rng),
            Err(Error::Unsupported(_))
        ));
        let deep = codes::bell();
        assert!(matches!(
            sample_realization(&deep, &clean, 23, DecodeMode::Pauli, true, &mut rng),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn malformed_syndrome_trees_are_rejected() {
        assert!(SyndromeTree::from_levels(3, vec![]).is_err());
        assert!(SyndromeTree::from_levels(3, vec![vec![0, 0]]).is_err());
        assert!(SyndromeTree::from_levels(3, vec![vec![0, 0], vec![0]]).is_err());
        let enc = codes::rep(3).unwrap();
        let noise = PauliChannel::depolarizing(0.1).unwrap();
        // A record that does not fit b - 1 = 2 checks.
        let synd = SyndromeTree::from_levels(3, vec![vec![0b100]]).unwrap();
        assert!(matches!(
            bp_posterior(&synd, &enc, &noise, DecodeMode::Pauli, true),
            Err(Error::BadInput(_))
        ));
        // Block-size mismatch with the encoder.
        let synd = SyndromeTree::from_levels(2, vec![vec![0]]).unwrap();
        assert!(bp_posterior(&synd, &enc, &noise, DecodeMode::Pauli, true).is_err());
        // Zero-probability record under a noiseless channel.
        let clean = PauliChannel::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let synd = SyndromeTree::from_levels(3, vec![vec![0b01]]).unwrap();
        assert!(matches!(
            bp_posterior(&synd, &enc, &clean, DecodeMode::Pauli, true),
            Err(Error::BadInput(_))
        ));
    }

    #[test]
    fn root_noise_widens_the_posterior() {
        let enc = codes::rep(3).unwrap();
        let noise = PauliChannel::depolarizing(0.1).unwrap();
        let synd = zero_tree(3, 2);
        let without = bp_posterior(&synd, &enc, &noise, DecodeMode::Pauli, false).unwrap();
        let with = bp_posterior(&synd, &enc, &noise, DecodeMode::Pauli, true).unwrap();
        assert!(with.pr(SingleQubitPauli::I) < without.pr(SingleQubitPauli::I));
    }
}
