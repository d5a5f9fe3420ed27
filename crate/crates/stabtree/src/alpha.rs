//! Logical error rates and fixed points for recursive block decoders.
//!
//! A depth-`T` tree of noisy encoding blocks can be decoded recursively:
//! decode each child block, then treat the decoded values as a noisy input
//! to the parent block. For a single error axis this reduces the analysis to
//! a scalar recursion `q_{t+1} = p + (1 - 2p) * alpha(q_t)`, where `alpha(q)`
//! is the probability that an optimal (Helstrom) measurement of one block's
//! logical value errs when each input bit is flipped independently with
//! probability `q`.
//!
//! This module computes `alpha` exactly from the code structure (as a
//! polynomial with rational coefficients where possible), provides closed
//! forms for repetition-style majority and parity blocks, iterates the
//! recursion to its fixed point, and locates decoding thresholds by
//! bisection or by the tangent condition at `q = 1/2`.

use std::collections::HashMap;
use std::fmt;

use crate::pauli::{Axis, CliffordEncoder};
use crate::{Error, Result};

/// Largest block size accepted by [`coset_table`]; the construction
/// enumerates all `2^b` error patterns on one block.
pub const COSET_TABLE_MAX_B: usize = 24;

/// Default convergence tolerance for [`fixed_point`].
pub const FIXED_POINT_TOL: f64 = 1e-12;

/// Default iteration cap for [`fixed_point`].
pub const FIXED_POINT_MAX_ITERS: u64 = 1_000_000;

/// Default bisection tolerance for [`threshold`].
pub const THRESHOLD_TOL: f64 = 1e-5;

/// An exact rational number used for polynomial coefficients.
///
/// Kept deliberately small: coefficients produced by [`alpha_exact`] have
/// denominator 1 or 2, and block sizes are capped well below anything that
/// could overflow `i128` during construction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    /// Creates `num/den` in lowest terms with a positive denominator.
    ///
    /// # Panics
    ///
    /// Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "rational denominator must be nonzero");
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i128;
        let sign = if den < 0 { -1 } else { 1 };
        Rational {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    /// The integer `n` as a rational.
    pub fn integer(n: i128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    if a == 0 && b == 0 {
        return 1;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Partition of single-axis error patterns on one block into cosets that an
/// optimal decoder cannot distinguish, together with the logical shift that
/// pairs each coset with the coset acting as the opposite logical value.
///
/// For axis `X` the patterns are bitstrings `y` (the error is `X^y`); two
/// patterns are equivalent when they differ by the X-part of a pure-X-type
/// stabilizer element (same syndrome, same logical action). The `shift` is
/// the X-part of a pure-X-type logical representative, so coset `K` and
/// coset `K + shift` have identical syndromes but opposite logical values.
/// Axis `Z` is symmetric. Memory scales with the number of cosets, which can
/// reach `2^b` when the code has no pure-type stabilizers on that axis.
#[derive(Clone, Debug)]
pub struct CosetTable {
    axis: Axis,
    b: usize,
    shift: u32,
    /// Canonical (basis-reduced) representative of each coset.
    reps: Vec<u32>,
    /// `hists[i][w]` counts patterns of Hamming weight `w` in coset `i`.
    hists: Vec<Vec<u64>>,
    /// `partner[i]` is the id of coset `i + shift`.
    partner: Vec<usize>,
    coset_size: usize,
}

impl CosetTable {
    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// Number of qubits per block.
    pub fn block_size(&self) -> usize {
        self.b
    }

    /// X- (or Z-) part of the pure-type logical representative, as a bitmask.
    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn num_cosets(&self) -> usize {
        self.reps.len()
    }

    /// Number of patterns in each coset.
    pub fn coset_size(&self) -> usize {
        self.coset_size
    }

    /// Canonical representative bitmask of coset `i`.
    pub fn representative(&self, i: usize) -> u32 {
        self.reps[i]
    }

    /// Weight histogram of coset `i`: entry `w` counts patterns of weight `w`.
    pub fn histogram(&self, i: usize) -> &[u64] {
        &self.hists[i]
    }

    /// Id of the coset obtained by adding the logical shift to coset `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    /// Unordered coset pairs `(i, partner(i))` with each pair listed once.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.reps.len())
            .filter(|&i| i < self.partner[i])
            .map(|i| (i, self.partner[i]))
            .collect()
    }

    /// Probability that an optimal single-block decoder errs, evaluated
    /// directly from the coset histograms at flip probability `p`.
    ///
    /// This is `1/2 - (1/4) * sum_K |sigma_p(K) - sigma_p(K + shift)|` where
    /// `sigma_p(K)` is the probability that the error pattern lies in `K`.
    pub fn helstrom_error(&self, p: f64) -> f64 {
        assert!((0.0..=1.0).contains(&p), "flip probability out of range");
        let q = 1.0 - p;
        let mut total = 0.0;
        for &(i, j) in self.pairs().iter() {
            let si = weighted_mass(&self.hists[i], p, q);
            let sj = weighted_mass(&self.hists[j], p, q);
            total += (si - sj).abs();
        }
        0.5 - 0.5 * total
    }
}

fn weighted_mass(hist: &[u64], p: f64, q: f64) -> f64 {
    let b = hist.len() - 1;
    hist.iter()
        .enumerate()
        .map(|(w, &c)| c as f64 * p.powi(w as i32) * q.powi((b - w) as i32))
        .sum()
}

/// GF(2) xor-basis over `u32` masks that tracks which inputs combine into
/// each pivot, so membership questions come with an explicit combination.
struct XorBasis {
    /// `(reduced_value, combo)` pairs; `reduced_value` has a unique top bit.
    pivots: Vec<(u32, u32)>,
}

impl XorBasis {
    fn new() -> Self {
        XorBasis { pivots: Vec::new() }
    }

    /// Reduces `value`, returning the remainder and the combination of
    /// previously inserted vectors used.
    fn reduce(&self, mut value: u32) -> (u32, u32) {
        let mut combo = 0u32;
        for &(pv, pc) in &self.pivots {
            if value & (1 << (31 - pv.leading_zeros())) != 0 {
                value ^= pv;
                combo ^= pc;
            }
        }
        (value, combo)
    }

    /// Inserts vector `value` tagged `tag`; returns the nullspace combination
    /// if `value` was already in the span.
    fn insert(&mut self, value: u32, tag: u32) -> Option<u32> {
        let (rem, combo) = self.reduce(value);
        if rem == 0 {
            Some(combo ^ tag)
        } else {
            self.pivots.push((rem, combo ^ tag));
            self.pivots.sort_by(|a, b| b.0.cmp(&a.0));
            None
        }
    }
}

/// Builds the coset partition of single-axis error patterns for one block.
///
/// # Errors
///
/// Returns [`Error::ResourceCap`] when `b > 24` and [`Error::Unsupported`]
/// when no logical class has a pure-type representative on the requested
/// axis (the binary coset construction needs one to define the shift).
pub fn coset_table(enc: &CliffordEncoder, axis: Axis) -> Result<CosetTable> {
    let b = enc.b();
    if b > COSET_TABLE_MAX_B {
        return Err(Error::ResourceCap {
            what: "coset table block size",
            actual: b as u128,
            cap: COSET_TABLE_MAX_B as u128,
        });
    }
    let part = |p: &crate::pauli::PauliString| -> (u32, u32) {
        match axis {
            Axis::X => (p.x_bits().as_u32(), p.z_bits().as_u32()),
            Axis::Z => (p.z_bits().as_u32(), p.x_bits().as_u32()),
        }
    };

    // Pure-type stabilizer subgroup: subsets of generators whose off-axis
    // parts cancel. Track combinations so the on-axis parts of those
    // products span the equivalence subgroup C.
    let gens: Vec<(u32, u32)> = enc.stabilizers().iter().map(|s| part(s)).collect();
    let mut off_axis = XorBasis::new();
    let mut subgroup = XorBasis::new();
    let on_axis_of_combo = |combo: u32, extra: u32| -> u32 {
        let mut acc = extra;
        for (i, g) in gens.iter().enumerate() {
            if combo & (1 << i) != 0 {
                acc ^= g.0;
            }
        }
        acc
    };
    for (i, g) in gens.iter().enumerate() {
        if let Some(combo) = off_axis.insert(g.1, 1 << i) {
            let on = on_axis_of_combo(combo ^ (1 << i), 0) ^ g.0;
            subgroup.insert(on, 0);
        }
    }

    // Shift: a logical class whose off-axis part is cancelled by some
    // stabilizer product, leaving a pure-type logical representative.
    let lx = part(enc.logical_x());
    let lz = part(enc.logical_z());
    let ly = (lx.0 ^ lz.0, lx.1 ^ lz.1);
    let mut shift = None;
    for cand in [lx, lz, ly] {
        let (rem, combo) = off_axis.reduce(cand.1);
        if rem == 0 {
            let raw = on_axis_of_combo(combo, cand.0);
            let (canon, _) = subgroup.reduce(raw);
            shift = Some(canon);
            break;
        }
    }
    let Some(shift) = shift else {
        return Err(Error::Unsupported(format!(
            "no pure {axis}-type logical representative exists; the binary \
             coset construction does not apply on this axis"
        )));
    };
    if shift == 0 {
        return Err(Error::Unsupported(format!(
            "the pure {axis}-type logical representative lies in the \
             stabilizer span; logical classes are not distinguishable"
        )));
    }

    // Enumerate all patterns, bin by canonical coset representative.
    let mut ids: HashMap<u32, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut hists: Vec<Vec<u64>> = Vec::new();
    for y in 0u32..(1u32 << b) {
        let (canon, _) = subgroup.reduce(y);
        let id = *ids.entry(canon).or_insert_with(|| {
            reps.push(canon);
            hists.push(vec![0u64; b + 1]);
            reps.len() - 1
        });
        hists[id][y.count_ones() as usize] += 1;
    }
    let coset_size = (1usize << b) / reps.len();
    let partner: Vec<usize> = reps
        .iter()
        .map(|&r| {
            let (canon, _) = subgroup.reduce(r ^ shift);
            ids[&canon]
        })
        .collect();
    for (i, &j) in partner.iter().enumerate() {
        assert!(i != j, "logical shift fixes a coset; invalid table");
    }
    Ok(CosetTable {
        axis,
        b,
        shift,
        reps,
        hists,
        partner,
        coset_size,
    })
}

/// Pair differences in the `p^w (1-p)^{b-w}` basis, retained when the
/// sign-constancy check fails and the exact polynomial form is unavailable.
#[derive(Clone, Debug)]
struct PairTable {
    b: usize,
    /// Per pair: coefficient of `p^w (1-p)^{b-w}` for `w = 0..=b`.
    diffs: Vec<Vec<i128>>,
}

impl PairTable {
    fn eval(&self, p: f64) -> f64 {
        let q = 1.0 - p;
        let mut total = 0.0;
        for d in &self.diffs {
            let mut s = 0.0;
            for (w, &c) in d.iter().enumerate() {
                s += c as f64 * p.powi(w as i32) * q.powi((self.b - w) as i32);
            }
            total += s.abs();
        }
        0.5 - 0.5 * total
    }
}

#[derive(Clone, Debug)]
enum Form {
    /// Exact polynomial, coefficient of `p^j` at index `j`. Valid on
    /// `[0, 1/2]`, where the per-pair signs were verified constant.
    Poly(Vec<Rational>),
    /// Majority vote over `b` (odd) independent flips.
    Majority { b: u32 },
    /// Parity of `n` independent flips.
    Parity { n: u32 },
    /// `outer(inner(p))` for two-stage blocks.
    Compose {
        outer: Box<AlphaFunction>,
        inner: Box<AlphaFunction>,
    },
    /// Numeric coset evaluation (sign pattern not constant on `(0, 1/2)`).
    Numeric(PairTable),
}

/// The single-block logical error rate `alpha(p)` of an optimal decoder,
/// in one of several exact or numeric forms.
#[derive(Clone, Debug)]
pub struct AlphaFunction {
    label: String,
    form: Form,
}

impl AlphaFunction {
    /// Majority vote over an odd number `b` of independent flips.
    ///
    /// # Panics
    ///
    /// Panics if `b` is even or zero (majority needs a tie-free vote).
    pub fn majority(b: u32) -> Self {
        assert!(b % 2 == 1, "majority vote requires an odd block size");
        AlphaFunction {
            label: format!("majority({b})"),
            form: Form::Majority { b },
        }
    }

    /// Parity of `n >= 1` independent flips.
    pub fn parity(n: u32) -> Self {
        assert!(n >= 1, "parity requires at least one bit");
        AlphaFunction {
            label: format!("parity({n})"),
            form: Form::Parity { n },
        }
    }

    /// Polynomial `sum_j coeffs[j] p^j` with exact coefficients.
    pub fn polynomial_form(coeffs: Vec<Rational>, label: impl Into<String>) -> Self {
        AlphaFunction {
            label: label.into(),
            form: Form::Poly(coeffs),
        }
    }

    /// Two-stage block: `outer(inner(p))`.
    pub fn compose(outer: AlphaFunction, inner: AlphaFunction) -> Self {
        AlphaFunction {
            label: format!("{} . {}", outer.label, inner.label),
            form: Form::Compose {
                outer: Box::new(outer),
                inner: Box::new(inner),
            },
        }
    }

    /// Block error rate of the size-`n^2` two-stage repetition construction
    /// on the given axis: parity-of-majorities for `X`, majority-of-parities
    /// for `Z`.
    ///
    /// # Panics
    ///
    /// Panics if `n` is even (the inner/outer majority needs odd size).
    pub fn two_stage_repetition(n: u32, axis: Axis) -> Self {
        match axis {
            Axis::X => Self::compose(Self::parity(n), Self::majority(n)),
            Axis::Z => Self::compose(Self::majority(n), Self::parity(n)),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Exact polynomial coefficients (`p^j` at index `j`) when available.
    pub fn polynomial(&self) -> Option<&[Rational]> {
        match &self.form {
            Form::Poly(c) => Some(c),
            _ => None,
        }
    }

    /// Evaluates `alpha(p)`.
    ///
    /// All forms are exact on `[0, 1/2]`; the polynomial form freezes each
    /// coset pair's favoured side from that interval, so evaluations beyond
    /// `1/2` extrapolate the polynomial rather than re-optimize the decoder.
    pub fn eval(&self, p: f64) -> f64 {
        assert!((0.0..=1.0).contains(&p), "flip probability out of range");
        match &self.form {
            Form::Poly(c) => c.iter().rev().fold(0.0, |acc, r| acc * p + r.to_f64()),
            Form::Majority { b } => majority_error(*b, p),
            Form::Parity { n } => parity_error(*n, p),
            Form::Compose { outer, inner } => outer.eval(inner.eval(p)),
            Form::Numeric(t) => t.eval(p),
        }
    }

    /// `alpha'(1/2)`, the slope at the fully-mixed point, used by the
    /// tangent threshold condition. Exact for the closed forms; one-sided
    /// finite difference for the numeric fallback.
    pub fn derivative_at_half(&self) -> f64 {
        match &self.form {
            Form::Poly(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, r)| j as f64 * r.to_f64() * 0.5f64.powi(j as i32 - 1))
                .sum(),
            Form::Majority { b } => majority_slope_at_half(*b),
            Form::Parity { n } => {
                if *n == 1 {
                    1.0
                } else {
                    0.0
                }
            }
            Form::Compose { outer, inner } => {
                let mid = inner.eval(0.5);
                assert!(
                    (mid - 0.5).abs() < 1e-9,
                    "composed inner block must fix the fully-mixed point"
                );
                outer.derivative_at_half() * inner.derivative_at_half()
            }
            Form::Numeric(_) => {
                let h = 1e-5;
                let f0 = self.eval(0.5);
                let f1 = self.eval(0.5 - h);
                let f2 = self.eval(0.5 - 2.0 * h);
                (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * h)
            }
        }
    }
}

/// Majority-vote error probability over `b` (odd) flips at rate `p`.
///
/// # Panics
///
/// Panics if `b` is even or zero.
pub fn alpha_maj(b: u32, p: f64) -> f64 {
    assert!(b % 2 == 1, "majority vote requires an odd block size");
    assert!((0.0..=1.0).contains(&p), "flip probability out of range");
    majority_error(b, p)
}

/// Parity error probability over `n` flips at rate `p`:
/// `(1 - (1-2p)^n) / 2`.
pub fn alpha_par(n: u32, p: f64) -> f64 {
    assert!(n >= 1, "parity requires at least one bit");
    assert!((0.0..=1.0).contains(&p), "flip probability out of range");
    parity_error(n, p)
}

/// Block error rate of the two-stage repetition construction of size `n^2`
/// on the given axis (see [`AlphaFunction::two_stage_repetition`]).
pub fn shor_alpha(n: u32, axis: Axis, p: f64) -> f64 {
    match axis {
        Axis::X => parity_error(n, majority_error(n, p)),
        Axis::Z => majority_error(n, parity_error(n, p)),
    }
}

fn majority_error(b: u32, p: f64) -> f64 {
    let q = 1.0 - p;
    let half = (b + 1) / 2;
    // C(b, half) via a stable multiplicative loop, then walk upward.
    let mut binom = 1.0f64;
    for i in 1..=(b - half) {
        binom *= (half + i) as f64 / i as f64;
    }
    let mut total = 0.0;
    let mut c = binom;
    for k in half..=b {
        total += c * p.powi(k as i32) * q.powi((b - k) as i32);
        c *= (b - k) as f64 / (k + 1) as f64;
    }
    total
}

fn parity_error(n: u32, p: f64) -> f64 {
    0.5 - 0.5 * (1.0 - 2.0 * p).powi(n as i32)
}

/// Exact slope of the majority-vote error rate at `p = 1/2`:
/// `((b+1)/2) * C(b, (b-1)/2) / 2^{b-1}`, computed in log space so large
/// odd `b` (hundreds) stay finite.
///
/// # Panics
///
/// Panics if `b` is even or zero.
pub fn majority_slope_at_half(b: u32) -> f64 {
    assert!(b % 2 == 1, "majority vote requires an odd block size");
    let k = (b - 1) / 2;
    let mut ln_c = 0.0f64;
    for i in 1..=k {
        ln_c += ((b - k + i) as f64).ln() - (i as f64).ln();
    }
    (((b + 1) / 2) as f64) * (ln_c - (b as f64 - 1.0) * std::f64::consts::LN_2).exp()
}

/// Builds `alpha` exactly from a coset table.
///
/// Each coset pair contributes `|sigma_p(K) - sigma_p(K + shift)|`; the sign
/// of the difference is read off the lowest-order term and verified constant
/// on a grid over `(0, 1/2)`. When every pair keeps a constant sign the
/// result is an exact polynomial with rational coefficients; otherwise the
/// function falls back to direct numeric evaluation of the coset masses.
pub fn alpha_exact(table: &CosetTable) -> AlphaFunction {
    let b = table.b;
    let pairs = table.pairs();
    let mut diffs: Vec<Vec<i128>> = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        let d: Vec<i128> = (0..=b)
            .map(|w| table.hists[i][w] as i128 - table.hists[j][w] as i128)
            .collect();
        if d.iter().any(|&c| c != 0) {
            diffs.push(d);
        }
    }

    let mut total = vec![0i128; b + 1];
    let mut sign_constant = true;
    'pairs: for d in &diffs {
        // Expand sum_w d_w p^w (1-p)^{b-w} into monomials of p.
        let mut mono = vec![0i128; b + 1];
        for (w, &c) in d.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for j in w..=b {
                let k = (j - w) as u32;
                let sign = if k % 2 == 0 { 1 } else { -1 };
                mono[j] += c * sign * binom_i128((b - w) as u32, k);
            }
        }
        let Some(&lead) = mono.iter().find(|&&c| c != 0) else {
            continue;
        };
        let s = lead.signum();
        // Verify the sign holds across (0, 1/2), not just near 0.
        let scale: f64 = d.iter().map(|&c| c.unsigned_abs() as f64).sum();
        for k in 1..=64 {
            let p = k as f64 / 130.0;
            let q = 1.0 - p;
            let val: f64 = d
                .iter()
                .enumerate()
                .map(|(w, &c)| c as f64 * p.powi(w as i32) * q.powi((b - w) as i32))
                .sum();
            if (s as f64) * val < -1e-12 * scale {
                sign_constant = false;
                break 'pairs;
            }
        }
        for (t, m) in total.iter_mut().zip(mono) {
            *t += s as i128 * m;
        }
    }

    let label = format!("{}-axis coset posterior", table.axis);
    if !sign_constant {
        return AlphaFunction {
            label,
            form: Form::Numeric(PairTable { b, diffs }),
        };
    }
    // alpha(p) = 1/2 - (1/2) sum_pairs sign * D(p).
    let mut coeffs: Vec<Rational> = total.iter().map(|&t| Rational::new(-t, 2)).collect();
    coeffs[0] = Rational::new(1 - total[0], 2);
    while coeffs.len() > 1 && coeffs.last().is_some_and(Rational::is_zero) {
        coeffs.pop();
    }
    AlphaFunction {
        label,
        form: Form::Poly(coeffs),
    }
}

fn binom_i128(n: u32, k: u32) -> i128 {
    assert!(n <= 127, "binomial argument too large for exact arithmetic");
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: i128 = 1;
    for i in 1..=k {
        c = c * (n - k + i) as i128 / i as i128;
    }
    c
}

/// One level of the recursive-decoder error recursion:
/// `q_{t+1} = p + (1 - 2p) * alpha(q_t)`.
///
/// # Panics
///
/// Panics if `q` or `p` leaves `[0, 1/2]` (the recursion is only meaningful
/// for sub-fully-mixed error rates).
pub fn recursion_step(alpha: &AlphaFunction, q: f64, p: f64) -> f64 {
    assert!(
        (0.0..=0.5 + 1e-12).contains(&q),
        "input error rate out of range"
    );
    assert!(
        (0.0..=0.5 + 1e-12).contains(&p),
        "physical error rate out of range"
    );
    let a = alpha.eval(q.min(0.5)).clamp(0.0, 0.5);
    p + (1.0 - 2.0 * p) * a
}

/// Error rates `q_0 = p, q_1, ..., q_depth` along the recursion.
pub fn recursion_trace(alpha: &AlphaFunction, p: f64, depth: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(depth as usize + 1);
    let mut q = p;
    out.push(q);
    for _ in 0..depth {
        q = recursion_step(alpha, q, p);
        out.push(q);
    }
    out
}

/// A converged fixed point of the error recursion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPoint {
    /// The limiting per-block logical error rate `q_infinity`.
    pub q: f64,
    /// Iterations taken to converge.
    pub iterations: u64,
}

/// Iterates `q -> p + (1 - 2p) alpha(q)` from `q_0 = p` until successive
/// iterates differ by less than `tol`.
///
/// # Errors
///
/// [`Error::NonConvergence`] (carrying the last iterate) if `max_iters` is
/// exhausted first.
pub fn fixed_point(
    alpha: &AlphaFunction,
    p: f64,
    tol: f64,
    max_iters: u64,
) -> Result<FixedPoint> {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut q = p;
    for it in 1..=max_iters {
        let next = recursion_step(alpha, q, p);
        if (next - q).abs() < tol {
            return Ok(FixedPoint {
                q: next,
                iterations: it,
            });
        }
        q = next;
    }
    Err(Error::NonConvergence {
        last: q,
        iterations: max_iters,
    })
}

/// Locates the decoding threshold by bisection on `[0, 1/2]`: the largest
/// physical rate whose fixed point stays strictly below `1/2`.
///
/// A run that fails to converge within the iteration budget is classified
/// by how close its last iterate sits to `1/2`; near-critical subcritical
/// fixed points detach from `1/2` much faster than the iteration drifts.
pub fn threshold(alpha: &AlphaFunction, tol: f64) -> f64 {
    assert!(tol > 0.0, "tolerance must be positive");
    let subcritical = |p: f64| -> bool {
        match fixed_point(alpha, p, FIXED_POINT_TOL, FIXED_POINT_MAX_ITERS) {
            Ok(fp) => fp.q < 0.5 - 1e-6,
            Err(Error::NonConvergence { last, .. }) => last < 0.5 - 5e-4,
            Err(_) => unreachable!("fixed point iteration only fails to converge"),
        }
    };
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    if !subcritical(lo + tol.min(1e-9)) {
        return 0.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if subcritical(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Threshold from the tangent condition at the fully-mixed point:
/// `p_th = (1 - 1/alpha'(1/2)) / 2`, valid when `alpha` is convex on
/// `[0, 1/2]` so the first tangency with the identity happens at `1/2`.
///
/// Returns `None` when `alpha'(1/2) <= 1`, in which case the recursion line
/// never becomes tangent at `1/2` and the condition does not apply (for
/// flat-at-half alphas such as self-complementary coset polynomials, use
/// [`threshold`] instead).
pub fn tangent_threshold(alpha: &AlphaFunction) -> Option<f64> {
    let s = alpha.derivative_at_half();
    if s > 1.0 + 1e-12 {
        Some(0.5 * (1.0 - 1.0 / s))
    } else {
        None
    }
}

/// `sum_{k=t+1}^{b} C(b, k)`: the number of error patterns heavier than the
/// correctable weight `t`, used as the constant `c` in threshold bounds.
pub fn correctable_tail_constant(b: u32, t: u32) -> f64 {
    assert!(t < b, "correctable weight must be below the block size");
    let mut c = 1.0f64; // C(b, 0)
    let mut total = 0.0f64;
    for k in 0..=b {
        if k > t {
            total += c;
        }
        if k < b {
            c *= (b - k) as f64 / (k + 1) as f64;
        }
    }
    total
}

/// Lower bound on the guaranteed convergence region of the recursion for a
/// distance-`2t+1` block with tail constant `c`:
/// `delta = (t/(t+1)) * (1/((t+1) c))^{1/t}`.
///
/// For physical rates `p <= delta` the fixed point satisfies
/// `p <= q_infinity <= (1 + 1/t) p`.
pub fn delta_lower_bound(t: u32, c: f64) -> f64 {
    assert!(t >= 1, "need a code correcting at least one error");
    assert!(c > 0.0, "tail constant must be positive");
    let tf = t as f64;
    (tf / (tf + 1.0)) * (1.0 / ((tf + 1.0) * c)).powf(1.0 / tf)
}

/// Scalar error recursion for stabilizer blocks decoded with a
/// bounded-weight corrector: `e_{s+1} = p + (1 - p) * min(c e_s^{t+1}, 1)`
/// starting from `e_0 = 0`. Returns `e_0, ..., e_depth`.
///
/// Unlike [`recursion_step`] this tracks a one-sided bound on the total
/// block failure probability, so the noise term enters as `(1 - p)` rather
/// than `(1 - 2p)` and the iteration starts from a noiseless root.
pub fn bounded_error_recursion(c: f64, t: u32, p: f64, depth: u32) -> Vec<f64> {
    assert!(t >= 1, "need a code correcting at least one error");
    assert!(c > 0.0, "tail constant must be positive");
    assert!((0.0..=1.0).contains(&p), "flip probability out of range");
    let mut out = Vec::with_capacity(depth as usize + 1);
    let mut e = 0.0f64;
    out.push(e);
    for _ in 0..depth {
        e = p + (1.0 - p) * (c * e.powi(t as i32 + 1)).min(1.0);
        out.push(e);
    }
    out
}

/// Physical rate below which [`bounded_error_recursion`] is guaranteed to
/// stay bounded by `(1 + 1/t) p` at every depth:
/// one quarter of [`delta_lower_bound`].
pub fn stabilizer_threshold_bound(t: u32, c: f64) -> f64 {
    0.25 * delta_lower_bound(t, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;
    use approx::assert_abs_diff_eq;

    fn poly_ints(a: &AlphaFunction) -> Vec<i128> {
        a.polynomial()
            .expect("expected exact polynomial")
            .iter()
            .map(|r| {
                assert!(r.is_integer(), "expected integer coefficient, got {r}");
                r.numerator()
            })
            .collect()
    }

    #[test]
    fn closed_forms_match_pinned_values() {
        assert_abs_diff_eq!(alpha_maj(3, 0.1), 0.028, epsilon = 1e-15);
        assert_abs_diff_eq!(alpha_maj(3, 0.5), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(alpha_maj(5, 0.5), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(alpha_par(3, 0.1), 0.244, epsilon = 1e-15);
        assert_abs_diff_eq!(alpha_par(1, 0.3), 0.3, epsilon = 1e-15);
    }

    #[test]
    #[should_panic(expected = "odd block size")]
    fn majority_rejects_even_votes() {
        alpha_maj(4, 0.1);
    }

    #[test]
    fn repetition_coset_table_is_majority() {
        // rep(b), axis X: no X-type stabilizers, so every pattern is its own
        // coset and the shift is the all-ones logical; alpha is majority.
        let enc = codes::rep(3).unwrap();
        let t = coset_table(&enc, Axis::X).unwrap();
        assert_eq!(t.num_cosets(), 8);
        assert_eq!(t.coset_size(), 1);
        assert_eq!(t.shift(), 0b111);
        let a = alpha_exact(&t);
        assert_eq!(poly_ints(&a), vec![0, 0, 3, -2]);
        for p in [0.0, 0.05, 0.1, 0.3, 0.5] {
            assert_abs_diff_eq!(a.eval(p), alpha_maj(3, p), epsilon = 1e-14);
        }

        let enc5 = codes::rep(5).unwrap();
        let a5 = alpha_exact(&coset_table(&enc5, Axis::X).unwrap());
        // Monomial expansion of the majority tail for b = 5.
        assert_eq!(poly_ints(&a5), vec![0, 0, 0, 10, -15, 6]);
    }

    #[test]
    fn repetition_z_axis_is_parity() {
        // rep(3), axis Z: the Z-pair stabilizers identify all even patterns,
        // so only the total parity is observable.
        let enc = codes::rep(3).unwrap();
        let t = coset_table(&enc, Axis::Z).unwrap();
        assert_eq!(t.num_cosets(), 2);
        assert_eq!(t.coset_size(), 4);
        let a = alpha_exact(&t);
        assert_eq!(poly_ints(&a), vec![0, 3, -6, 4]);
        for p in [0.0, 0.1, 0.25, 0.5] {
            assert_abs_diff_eq!(a.eval(p), alpha_par(3, p), epsilon = 1e-14);
        }
    }

    #[test]
    fn rep2_x_axis_is_transparent() {
        // rep(2), axis X: syndrome reveals one disagreement but the decoder
        // still errs exactly at rate p (the weight-1 cosets tie).
        let a = alpha_exact(&coset_table(&codes::rep(2).unwrap(), Axis::X).unwrap());
        assert_eq!(poly_ints(&a), vec![0, 1]);
    }

    #[test]
    fn steane_coset_table_weights() {
        let enc = codes::steane7();
        let t = coset_table(&enc, Axis::X).unwrap();
        assert_eq!(t.num_cosets(), 16);
        assert_eq!(t.coset_size(), 8);
        // The identity coset is the even subcode: weights (0,4,4,4,4,4,4,4).
        let id = t.reps.iter().position(|&r| r == 0).unwrap();
        assert_eq!(t.histogram(id), &[1, 0, 0, 0, 7, 0, 0, 0]);
        // Its logical partner holds the complement weights (7,3,3,3,3,3,3,3).
        assert_eq!(t.histogram(t.partner(id)), &[0, 0, 0, 7, 0, 0, 0, 1]);
        // Complementation maps each coset onto its partner, so histograms
        // reverse: the optimal error rate is symmetric under p -> 1 - p.
        for i in 0..t.num_cosets() {
            let rev: Vec<u64> = t.histogram(i).iter().rev().copied().collect();
            assert_eq!(t.histogram(t.partner(i)), &rev[..]);
        }
    }

    #[test]
    fn steane_alpha_polynomial() {
        let a = alpha_exact(&coset_table(&codes::steane7(), Axis::X).unwrap());
        assert_eq!(poly_ints(&a), vec![0, 0, 21, -98, 210, -252, 168, -48]);
        // Both axes agree (self-dual code).
        let az = alpha_exact(&coset_table(&codes::steane7(), Axis::Z).unwrap());
        assert_eq!(poly_ints(&az), vec![0, 0, 21, -98, 210, -252, 168, -48]);
        // Flat at the fully-mixed point: no tangent threshold.
        assert_abs_diff_eq!(a.derivative_at_half(), 0.0, epsilon = 1e-12);
        assert!(tangent_threshold(&a).is_none());
        // Histogram evaluation agrees with the polynomial on [0, 1/2].
        let t = coset_table(&codes::steane7(), Axis::X).unwrap();
        for k in 0..=10 {
            let p = k as f64 / 20.0;
            assert_abs_diff_eq!(t.helstrom_error(p), a.eval(p), epsilon = 1e-13);
        }
    }

    #[test]
    fn two_stage_repetition_matches_exact_cosets() {
        let enc = codes::shor(3).unwrap();
        let ax = alpha_exact(&coset_table(&enc, Axis::X).unwrap());
        let az = alpha_exact(&coset_table(&enc, Axis::Z).unwrap());
        for k in 0..=20 {
            let p = k as f64 / 40.0;
            assert_abs_diff_eq!(ax.eval(p), shor_alpha(3, Axis::X, p), epsilon = 1e-12);
            assert_abs_diff_eq!(az.eval(p), shor_alpha(3, Axis::Z, p), epsilon = 1e-12);
            let f = AlphaFunction::two_stage_repetition(3, Axis::X);
            assert_abs_diff_eq!(f.eval(p), shor_alpha(3, Axis::X, p), epsilon = 1e-15);
        }
    }

    #[test]
    fn recursion_step_pinned_example() {
        let a = AlphaFunction::majority(3);
        assert_abs_diff_eq!(recursion_step(&a, 0.1, 0.1), 0.1224, epsilon = 1e-15);
        let trace = recursion_trace(&a, 0.1, 1);
        assert_eq!(trace.len(), 2);
        assert_abs_diff_eq!(trace[1], 0.1224, epsilon = 1e-15);
    }

    #[test]
    fn fixed_points_of_majority_recursion() {
        let a = AlphaFunction::majority(3);
        // Frozen from an independent cubic-root computation.
        let fp = fixed_point(&a, 0.05, FIXED_POINT_TOL, FIXED_POINT_MAX_ITERS).unwrap();
        assert_abs_diff_eq!(fp.q, 0.059041448155901, epsilon = 1e-10);
        let fp = fixed_point(&a, 0.1, FIXED_POINT_TOL, FIXED_POINT_MAX_ITERS).unwrap();
        assert_abs_diff_eq!(fp.q, 0.146446609406725, epsilon = 1e-10);
        // Above threshold the recursion saturates at the fully-mixed point.
        let fp = fixed_point(&a, 0.25, FIXED_POINT_TOL, FIXED_POINT_MAX_ITERS).unwrap();
        assert_abs_diff_eq!(fp.q, 0.5, epsilon = 1e-9);
        // Degenerate endpoints.
        assert_eq!(
            fixed_point(&a, 0.0, FIXED_POINT_TOL, 10).unwrap().q,
            0.0
        );
        assert_abs_diff_eq!(
            fixed_point(&a, 0.5, FIXED_POINT_TOL, 10).unwrap().q,
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn fixed_point_slope_approaches_one() {
        // q_infinity / p -> 1 as p -> 0 for any alpha with alpha'(0) = 0.
        let a = AlphaFunction::majority(3);
        let fp = fixed_point(&a, 1e-5, FIXED_POINT_TOL, FIXED_POINT_MAX_ITERS).unwrap();
        let ratio = fp.q / 1e-5;
        assert!((1.0..1.001).contains(&ratio), "ratio was {ratio}");
    }

    #[test]
    fn majority_threshold_is_one_sixth() {
        let a = AlphaFunction::majority(3);
        assert_abs_diff_eq!(majority_slope_at_half(3), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(majority_slope_at_half(5), 1.875, epsilon = 1e-15);
        let tangent = tangent_threshold(&a).unwrap();
        assert_abs_diff_eq!(tangent, 1.0 / 6.0, epsilon = 1e-14);
        let bisect = threshold(&a, THRESHOLD_TOL);
        assert_abs_diff_eq!(bisect, 1.0 / 6.0, epsilon = 5e-5);
    }

    #[test]
    fn parity_has_zero_threshold() {
        // Parity amplifies noise, so only p = 0 is subcritical.
        let a = AlphaFunction::parity(3);
        assert!(threshold(&a, 1e-4) < 1e-3);
        assert!(tangent_threshold(&a).is_none());
    }

    #[test]
    fn majority_slope_tracks_square_root_growth() {
        // For large odd b the slope grows like sqrt(2 b / pi), so the ratio
        // sqrt(b) / slope approaches sqrt(pi / 2) ~ 1.2533.
        let ratio = (101.0f64).sqrt() / majority_slope_at_half(101);
        assert_abs_diff_eq!(ratio, 1.2502157614218856, epsilon = 1e-12);
        assert!((ratio - (std::f64::consts::PI / 2.0).sqrt()).abs() < 0.02);
    }

    #[test]
    fn tail_constant_and_delta_bound() {
        assert_abs_diff_eq!(correctable_tail_constant(7, 1), 120.0, epsilon = 1e-9);
        assert_abs_diff_eq!(correctable_tail_constant(3, 1), 4.0, epsilon = 1e-12);
        // Distance-3 block with c = 120: delta = (1/2) / 240 = 1/480.
        assert_abs_diff_eq!(delta_lower_bound(1, 120.0), 1.0 / 480.0, epsilon = 1e-18);
    }

    #[test]
    fn small_rate_fixed_point_brackets() {
        // For p <= delta the fixed point obeys p <= q <= (1 + 1/t) p.
        let a = alpha_exact(&coset_table(&codes::steane7(), Axis::X).unwrap());
        let delta = delta_lower_bound(1, correctable_tail_constant(7, 1));
        for &p in &[delta, delta / 2.0, 1e-4, 1e-5] {
            let fp = fixed_point(&a, p, FIXED_POINT_TOL, FIXED_POINT_MAX_ITERS).unwrap();
            assert!(fp.q >= p - 1e-15, "q = {}, p = {p}", fp.q);
            assert!(fp.q <= 2.0 * p + 1e-15, "q = {}, p = {p}", fp.q);
        }
    }

    #[test]
    fn bounded_recursion_stays_below_linear_cap() {
        let t = 1;
        let c = 120.0;
        let p_max = stabilizer_threshold_bound(t, c);
        assert_abs_diff_eq!(p_max, 1.0 / 1920.0, epsilon = 1e-18);
        for &p in &[p_max, p_max / 2.0, p_max / 10.0] {
            let trace = bounded_error_recursion(c, t, p, 60);
            assert_eq!(trace[0], 0.0);
            assert_abs_diff_eq!(trace[1], p, epsilon = 1e-18);
            for &e in &trace {
                assert!(e <= (1.0 + 1.0 / t as f64) * p + 1e-15);
            }
        }
        // Well above the bound the recursion escapes the linear cap.
        let runaway = bounded_error_recursion(c, t, 0.05, 60);
        assert!(*runaway.last().unwrap() > 0.1);
    }

    #[test]
    fn bell_variant_x_axis_is_transparent() {
        // Variant 3 has a mixed-type stabilizer; a pure-X logical
        // representative still exists via stabilizer multiplication.
        let enc = codes::bell_variant(3).unwrap();
        let t = coset_table(&enc, Axis::X).unwrap();
        assert_eq!(t.shift().count_ones(), 1);
        let a = alpha_exact(&t);
        assert_eq!(poly_ints(&a), vec![0, 1]);
    }

    #[test]
    fn rational_arithmetic_basics() {
        assert_eq!(Rational::new(2, 4), Rational::new(1, 2));
        assert_eq!(Rational::new(-3, -6), Rational::new(1, 2));
        assert_eq!(Rational::new(3, -6).to_f64(), -0.5);
        assert_eq!(format!("{}", Rational::new(-49, 2)), "-49/2");
        assert_eq!(format!("{}", Rational::integer(21)), "21");
        assert!(Rational::new(0, 5).is_zero());
    }
}
