//! Pauli strings, single-qubit Pauli algebra, and `[[b, 1]]` stabilizer
//! encoders with their decomposition maps.
//!
//! Conventions used throughout the crate:
//!
//! * A Pauli string is `i^phase · W_1 ⊗ … ⊗ W_n` with letters
//!   `W ∈ {I, X, Y, Z}` and `Y = iXZ`, so the letter at a qubit is determined
//!   by an (x, z) bit pair: `(0,0) = I`, `(1,0) = X`, `(1,1) = Y`,
//!   `(0,1) = Z`.
//! * Qubit 0 is the first character of the string form and the least
//!   significant bit of any packed-integer form.
//! * Error classes and lifted operators are phaseless: decomposition and
//!   recursive substitution discard the accumulated power of `i`.

use crate::bits::{gf2_rank, gf2_solve, BitVec};
use crate::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Error-type axis used by coset tables, binary-mode decoding, and
/// dephasing reductions: `X` means bit-flip-type errors, `Z` phase-flip-type.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Axis {
    X,
    Z,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::BadInput(format!(
                "unknown axis `{other}` (expected x or z)"
            ))),
        }
    }
}

/// A single-qubit Pauli letter. The derived ordering `I < X < Y < Z` is the
/// canonical tie-breaking order used by decoders.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum SingleQubitPauli {
    I,
    X,
    Y,
    Z,
}

impl SingleQubitPauli {
    pub const ALL: [SingleQubitPauli; 4] = [
        SingleQubitPauli::I,
        SingleQubitPauli::X,
        SingleQubitPauli::Y,
        SingleQubitPauli::Z,
    ];

    /// Canonical index: I=0, X=1, Y=2, Z=3.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            SingleQubitPauli::I => 0,
            SingleQubitPauli::X => 1,
            SingleQubitPauli::Y => 2,
            SingleQubitPauli::Z => 3,
        }
    }

    #[inline]
    pub fn from_index(i: usize) -> SingleQubitPauli {
        Self::ALL[i]
    }

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> SingleQubitPauli {
        match (x, z) {
            (false, false) => SingleQubitPauli::I,
            (true, false) => SingleQubitPauli::X,
            (true, true) => SingleQubitPauli::Y,
            (false, true) => SingleQubitPauli::Z,
        }
    }

    #[inline]
    pub fn x_bit(self) -> bool {
        matches!(self, SingleQubitPauli::X | SingleQubitPauli::Y)
    }

    #[inline]
    pub fn z_bit(self) -> bool {
        matches!(self, SingleQubitPauli::Z | SingleQubitPauli::Y)
    }

    /// Phaseless product of two letters (the letter whose bits are the XOR).
    #[inline]
    pub fn mul(self, other: SingleQubitPauli) -> SingleQubitPauli {
        SingleQubitPauli::from_bits(
            self.x_bit() ^ other.x_bit(),
            self.z_bit() ^ other.z_bit(),
        )
    }

    /// Power of `i` produced by the ordered letter product `self · other`,
    /// i.e. `self · other = i^g · self.mul(other)`. With `Y = iXZ` the cycle
    /// `X·Y = iZ`, `Y·Z = iX`, `Z·X = iY` holds, and reversed orders pick up
    /// `-i`.
    #[inline]
    pub fn mul_phase(self, other: SingleQubitPauli) -> u8 {
        use SingleQubitPauli::*;
        match (self, other) {
            (X, Y) | (Y, Z) | (Z, X) => 1,
            (Y, X) | (Z, Y) | (X, Z) => 3,
            _ => 0,
        }
    }

    pub fn letter(self) -> char {
        match self {
            SingleQubitPauli::I => 'I',
            SingleQubitPauli::X => 'X',
            SingleQubitPauli::Y => 'Y',
            SingleQubitPauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<SingleQubitPauli> {
        match c {
            'I' | 'i' => Some(SingleQubitPauli::I),
            'X' | 'x' => Some(SingleQubitPauli::X),
            'Y' | 'y' => Some(SingleQubitPauli::Y),
            'Z' | 'z' => Some(SingleQubitPauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for SingleQubitPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// An n-qubit Pauli operator `i^phase · W_1 ⊗ … ⊗ W_n`, stored as paired
/// X/Z bit vectors plus a phase exponent mod 4.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliString {
    /// The identity on `n` qubits.
    pub fn identity(n: usize) -> Self {
        PauliString {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    /// A single letter `p` at position `pos` on `n` qubits.
    ///
    /// # Panics
    /// Panics if `pos >= n`.
    pub fn from_single(n: usize, pos: usize, p: SingleQubitPauli) -> Self {
        let mut s = PauliString::identity(n);
        s.set_letter(pos, p);
        s
    }

    /// Builds a string from letters, phase 0.
    pub fn from_letters(letters: &[SingleQubitPauli]) -> Self {
        let mut s = PauliString::identity(letters.len());
        for (i, &p) in letters.iter().enumerate() {
            s.set_letter(i, p);
        }
        s
    }

    /// Builds a string from X/Z bit vectors with a given phase exponent.
    ///
    /// # Panics
    /// Panics if the vectors differ in length.
    pub fn from_bits(x: BitVec, z: BitVec, phase: u8) -> Self {
        assert_eq!(x.len(), z.len(), "X/Z component length mismatch");
        PauliString {
            x,
            z,
            phase: phase % 4,
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Phase exponent: the operator equals `i^phase` times the letter string.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.x.or_count(&self.z)
    }

    pub fn is_identity(&self) -> bool {
        !self.x.any() && !self.z.any()
    }

    /// True if every letter is `I` or `X`.
    pub fn is_x_type(&self) -> bool {
        !self.z.any()
    }

    /// True if every letter is `I` or `Z`.
    pub fn is_z_type(&self) -> bool {
        !self.x.any()
    }

    /// True if some letter is `Y`.
    pub fn has_y(&self) -> bool {
        self.x.and_any(&self.z)
    }

    #[inline]
    pub fn letter(&self, i: usize) -> SingleQubitPauli {
        SingleQubitPauli::from_bits(self.x.get(i), self.z.get(i))
    }

    pub fn set_letter(&mut self, i: usize, p: SingleQubitPauli) {
        self.x.set(i, p.x_bit());
        self.z.set(i, p.z_bit());
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    /// Same operator with the phase forced to `+1`.
    pub fn phaseless(mut self) -> Self {
        self.phase = 0;
        self
    }

    /// Operator product, tracking the phase letter by letter.
    ///
    /// # Panics
    /// Panics if the operands act on different qubit counts.
    pub fn multiply(&self, other: &PauliString) -> PauliString {
        assert_eq!(
            self.n(),
            other.n(),
            "cannot multiply Pauli strings on {} and {} qubits",
            self.n(),
            other.n()
        );
        let mut phase = (self.phase + other.phase) % 4;
        for i in 0..self.n() {
            phase = (phase + self.letter(i).mul_phase(other.letter(i))) % 4;
        }
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        PauliString { x, z, phase }
    }

    /// True if the operators commute. Computed from the binary symplectic
    /// form: `p` and `q` commute iff `p.x·q.z + p.z·q.x` is even.
    ///
    /// # Panics
    /// Panics if the operands act on different qubit counts.
    pub fn commutes(&self, other: &PauliString) -> bool {
        assert_eq!(
            self.n(),
            other.n(),
            "cannot compare Pauli strings on {} and {} qubits",
            self.n(),
            other.n()
        );
        !(self.x.and_parity(&other.z) ^ self.z.and_parity(&other.x))
    }

    /// The symplectic row `(x | z)` of length `2n`, used for rank checks.
    pub fn symplectic_row(&self) -> BitVec {
        let n = self.n();
        let mut row = BitVec::zeros(2 * n);
        for i in 0..n {
            if self.x.get(i) {
                row.set(i, true);
            }
            if self.z.get(i) {
                row.set(n + i, true);
            }
        }
        row
    }

    /// The symplectic-dual row `(z | x)`: its inner product with another
    /// operator's `(x | z)` row is the anticommutation bit.
    pub fn dual_row(&self) -> BitVec {
        let n = self.n();
        let mut row = BitVec::zeros(2 * n);
        for i in 0..n {
            if self.z.get(i) {
                row.set(i, true);
            }
            if self.x.get(i) {
                row.set(n + i, true);
            }
        }
        row
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase {
            0 => {}
            1 => write!(f, "i")?,
            2 => write!(f, "-")?,
            3 => write!(f, "-i")?,
            _ => unreachable!(),
        }
        for i in 0..self.n() {
            write!(f, "{}", self.letter(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses strings like `XIZ`, `-YY`, `iX`, `-iZZ`. A lowercase leading
    /// `i` is the phase marker; the identity letter is uppercase `I`.
    fn from_str(s: &str) -> Result<Self> {
        let mut rest = s.trim();
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix('-') {
            phase = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase = (phase + 1) % 4;
            rest = r;
        }
        if rest.is_empty() {
            return Err(Error::BadInput(format!("empty Pauli string in `{s}`")));
        }
        let mut letters = Vec::with_capacity(rest.len());
        for c in rest.chars() {
            if c == 'i' {
                return Err(Error::BadInput(format!(
                    "lowercase `i` is the phase marker; use `I` for identity in `{s}`"
                )));
            }
            match SingleQubitPauli::from_letter(c) {
                Some(p) => letters.push(p),
                None => {
                    return Err(Error::BadInput(format!(
                        "invalid Pauli letter `{c}` in `{s}`"
                    )))
                }
            }
        }
        let mut out = PauliString::from_letters(&letters);
        out.phase = phase;
        Ok(out)
    }
}

/// Result of checking a declared distance during encoder validation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DistanceCheck {
    /// Exhaustive scan matched the declared value.
    Verified(usize),
    /// Exhaustive scan found a different minimum weight.
    Mismatch { declared: usize, computed: usize },
    /// No pure-type logical operator exists on this axis.
    NoPureTypeLogical { declared: usize },
    /// Nothing declared, or the block is too large for an exhaustive scan.
    Skipped,
}

/// Outcome of [`CliffordEncoder::validate`].
#[derive(Clone, Debug)]
pub struct ValidationReport {
    /// Human-readable violations; empty means the encoder is well-formed.
    pub violations: Vec<String>,
    pub d_x_check: DistanceCheck,
    pub d_z_check: DistanceCheck,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A `[[b, 1]]` stabilizer encoder: `b - 1` commuting stabilizer generators
/// plus a logical X/Z pair, acting on one tree node's block of `b` qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordEncoder {
    b: usize,
    stabilizers: Vec<PauliString>,
    logical_x: PauliString,
    logical_z: PauliString,
    is_css: bool,
    is_standard: bool,
    is_anti_standard: bool,
    d_x: Option<usize>,
    d_z: Option<usize>,
}

/// Default cap on the number of physical qubits materialized by
/// [`CliffordEncoder::lift_logical`].
pub const DEFAULT_LIFT_CAP: usize = 1 << 20;

/// Largest block size for which exhaustive pure-type distance scans and
/// explicit pure-error solves run (2·2^b patterns / linear solves).
pub const EXHAUSTIVE_CHECK_MAX_B: usize = 12;

impl CliffordEncoder {
    /// Builds and validates an encoder. Declared distances can be attached
    /// afterwards with [`declare_distances`](Self::declare_distances).
    pub fn new(
        stabilizers: Vec<PauliString>,
        logical_x: PauliString,
        logical_z: PauliString,
    ) -> Result<Self> {
        let enc = Self::new_unchecked(stabilizers, logical_x, logical_z);
        let report = enc.validate();
        if report.is_valid() {
            Ok(enc)
        } else {
            Err(Error::Validation(report.violations))
        }
    }

    /// Builds an encoder without validating it. Intended for tests and for
    /// staging encoders that will be passed to [`validate`](Self::validate).
    pub fn new_unchecked(
        stabilizers: Vec<PauliString>,
        logical_x: PauliString,
        logical_z: PauliString,
    ) -> Self {
        let b = logical_x.n();
        let is_css = stabilizers
            .iter()
            .all(|s| s.is_x_type() || s.is_z_type());
        let is_standard = is_css && logical_x.is_x_type() && logical_z.is_z_type();
        let is_anti_standard = is_css && logical_x.is_z_type() && logical_z.is_x_type();
        CliffordEncoder {
            b,
            stabilizers,
            logical_x,
            logical_z,
            is_css,
            is_standard,
            is_anti_standard,
            d_x: None,
            d_z: None,
        }
    }

    /// Attaches declared pure-type distances (minimum weight of an X-type /
    /// Z-type logical operator). `validate` verifies them when `b` is small
    /// enough to scan.
    pub fn declare_distances(mut self, d_x: Option<usize>, d_z: Option<usize>) -> Self {
        self.d_x = d_x;
        self.d_z = d_z;
        self
    }

    /// Block size `b` (qubits per node).
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn logical_x(&self) -> &PauliString {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &PauliString {
        &self.logical_z
    }

    /// True if every stabilizer generator is purely X-type or purely Z-type.
    pub fn is_css(&self) -> bool {
        self.is_css
    }

    /// CSS with an X-type logical X and a Z-type logical Z.
    pub fn is_standard(&self) -> bool {
        self.is_standard
    }

    /// CSS with a Z-type logical X and an X-type logical Z.
    pub fn is_anti_standard(&self) -> bool {
        self.is_anti_standard
    }

    /// Declared minimum weight of a pure-X-type logical, if any.
    pub fn d_x(&self) -> Option<usize> {
        self.d_x
    }

    /// Declared minimum weight of a pure-Z-type logical, if any.
    pub fn d_z(&self) -> Option<usize> {
        self.d_z
    }

    /// The X-type stabilizer generators (for CSS bookkeeping).
    pub fn x_type_stabilizers(&self) -> Vec<&PauliString> {
        self.stabilizers
            .iter()
            .filter(|s| s.is_x_type() && !s.is_identity())
            .collect()
    }

    /// The Z-type stabilizer generators (for CSS bookkeeping).
    pub fn z_type_stabilizers(&self) -> Vec<&PauliString> {
        self.stabilizers
            .iter()
            .filter(|s| s.is_z_type() && !s.is_identity())
            .collect()
    }

    /// Splits a physical error into `(logical class, syndrome)`. Syndrome
    /// bit `j` is set when `e` anticommutes with stabilizer `j`; the logical
    /// class has X component `[e, logical_z] ≠ 0` and Z component
    /// `[e, logical_x] ≠ 0`. Phases are discarded.
    ///
    /// # Panics
    /// Panics if `e` does not act on `b` qubits.
    pub fn decompose(&self, e: &PauliString) -> (SingleQubitPauli, BitVec) {
        assert_eq!(
            e.n(),
            self.b,
            "error acts on {} qubits but the block has {}",
            e.n(),
            self.b
        );
        let mut syndrome = BitVec::zeros(self.stabilizers.len());
        for (j, s) in self.stabilizers.iter().enumerate() {
            if !e.commutes(s) {
                syndrome.set(j, true);
            }
        }
        let x_comp = !e.commutes(&self.logical_z);
        let z_comp = !e.commutes(&self.logical_x);
        (SingleQubitPauli::from_bits(x_comp, z_comp), syndrome)
    }

    /// Logical class of `e`, ignoring the syndrome.
    pub fn logical_class(&self, e: &PauliString) -> SingleQubitPauli {
        self.decompose(e).0
    }

    /// Physical representative of a logical letter: `I → I⊗…⊗I`,
    /// `X → logical X`, `Z → logical Z`, `Y →` their phaseless product.
    pub fn push_forward(&self, v: SingleQubitPauli) -> PauliString {
        match v {
            SingleQubitPauli::I => PauliString::identity(self.b),
            SingleQubitPauli::X => self.logical_x.clone().phaseless(),
            SingleQubitPauli::Z => self.logical_z.clone().phaseless(),
            SingleQubitPauli::Y => self.logical_x.multiply(&self.logical_z).phaseless(),
        }
    }

    /// Recursively substitutes [`push_forward`](Self::push_forward) `t`
    /// times, producing the physical representative of a root-level logical
    /// letter on the `b^t` leaves of a height-`t` tree. `cap` bounds the
    /// output size (default [`DEFAULT_LIFT_CAP`]).
    pub fn lift_logical(
        &self,
        v: SingleQubitPauli,
        t: u32,
        cap: Option<usize>,
    ) -> Result<PauliString> {
        let cap = cap.unwrap_or(DEFAULT_LIFT_CAP);
        let mut size: usize = 1;
        for _ in 0..t {
            size = size.checked_mul(self.b).ok_or(Error::ResourceCap {
                what: "lifted operator size",
                actual: u128::MAX,
                cap: cap as u128,
            })?;
            if size > cap {
                return Err(Error::ResourceCap {
                    what: "lifted operator size",
                    actual: size as u128,
                    cap: cap as u128,
                });
            }
        }
        // Letter-wise expansion tables for one substitution round.
        let expansions: [PauliString; 4] = [
            self.push_forward(SingleQubitPauli::I),
            self.push_forward(SingleQubitPauli::X),
            self.push_forward(SingleQubitPauli::Y),
            self.push_forward(SingleQubitPauli::Z),
        ];
        let mut current = PauliString::from_single(1, 0, v);
        for _ in 0..t {
            let mut next = PauliString::identity(current.n() * self.b);
            for i in 0..current.n() {
                let block = &expansions[current.letter(i).index()];
                for j in 0..self.b {
                    next.set_letter(i * self.b + j, block.letter(j));
                }
            }
            current = next;
        }
        Ok(current)
    }

    /// All `2^(b-1)` elements of the stabilizer group, phaseless, in
    /// generator-subset order (element `m` multiplies the generators whose
    /// bits are set in `m`).
    ///
    /// # Panics
    /// Panics if the encoder has more than 20 generators (the group would
    /// exceed a million elements).
    pub fn stabilizer_group(&self) -> Vec<PauliString> {
        assert!(
            self.stabilizers.len() <= 20,
            "stabilizer group too large to enumerate ({} generators)",
            self.stabilizers.len()
        );
        let mut out = Vec::with_capacity(1 << self.stabilizers.len());
        for m in 0u32..(1 << self.stabilizers.len()) {
            let mut e = PauliString::identity(self.b);
            for (j, s) in self.stabilizers.iter().enumerate() {
                if m >> j & 1 == 1 {
                    e = e.multiply(s);
                }
            }
            out.push(e.phaseless());
        }
        out
    }

    /// One pure error per syndrome: entry `j` anticommutes with stabilizer
    /// `j` only and has trivial logical class. Solved from the linear
    /// symplectic system; capped at `b ≤` [`EXHAUSTIVE_CHECK_MAX_B`].
    pub fn pure_errors(&self) -> Result<Vec<PauliString>> {
        if self.b > EXHAUSTIVE_CHECK_MAX_B {
            return Err(Error::ResourceCap {
                what: "pure-error solve block size",
                actual: self.b as u128,
                cap: EXHAUSTIVE_CHECK_MAX_B as u128,
            });
        }
        // Rows: anticommutation constraints against every stabilizer and
        // both logicals; a pure error for syndrome j anticommutes with
        // stabilizer j only and commutes with logical X and logical Z.
        let mut rows: Vec<BitVec> = self
            .stabilizers
            .iter()
            .map(|s| s.dual_row())
            .collect();
        rows.push(self.logical_x.dual_row());
        rows.push(self.logical_z.dual_row());
        let m = self.stabilizers.len();
        let mut out = Vec::with_capacity(m);
        for j in 0..m {
            let rhs = BitVec::from_indices(m + 2, &[j]);
            let sol = gf2_solve(&rows, &rhs).ok_or_else(|| {
                Error::Validation(vec![format!(
                    "no pure error exists for unit syndrome {j}"
                )])
            })?;
            let mut e = PauliString::identity(self.b);
            for q in 0..self.b {
                e.set_letter(
                    q,
                    SingleQubitPauli::from_bits(sol.get(q), sol.get(self.b + q)),
                );
            }
            out.push(e);
        }
        Ok(out)
    }

    /// Minimum weight of a pure-type logical on `axis` (`None` if no
    /// pure-type pattern is a logical). Exhaustive over `2^b` patterns;
    /// capped at `b ≤` [`EXHAUSTIVE_CHECK_MAX_B`].
    pub fn min_pure_type_distance(&self, axis: Axis) -> Result<Option<usize>> {
        if self.b > EXHAUSTIVE_CHECK_MAX_B {
            return Err(Error::ResourceCap {
                what: "distance scan block size",
                actual: self.b as u128,
                cap: EXHAUSTIVE_CHECK_MAX_B as u128,
            });
        }
        let mut best: Option<usize> = None;
        for mask in 1u32..(1u32 << self.b) {
            let mut e = PauliString::identity(self.b);
            for q in 0..self.b {
                if mask >> q & 1 == 1 {
                    e.set_letter(
                        q,
                        match axis {
                            Axis::X => SingleQubitPauli::X,
                            Axis::Z => SingleQubitPauli::Z,
                        },
                    );
                }
            }
            let (class, syndrome) = self.decompose(&e);
            if !syndrome.any() && class != SingleQubitPauli::I {
                let w = e.weight();
                if best.is_none_or(|b| w < b) {
                    best = Some(w);
                }
            }
        }
        Ok(best)
    }

    /// Checks the full contract: operator lengths, generator count, pairwise
    /// commutation, logical commutation relations, symplectic independence,
    /// pure-error existence, and declared distances (the latter two only for
    /// blocks small enough to scan).
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let b = self.b;
        if b == 0 {
            violations.push("block size is zero".to_string());
            return ValidationReport {
                violations,
                d_x_check: DistanceCheck::Skipped,
                d_z_check: DistanceCheck::Skipped,
            };
        }
        for (j, s) in self.stabilizers.iter().enumerate() {
            if s.n() != b {
                violations.push(format!(
                    "stabilizer {j} acts on {} qubits, expected {b}",
                    s.n()
                ));
            }
            if s.n() == b && s.is_identity() {
                violations.push(format!("stabilizer {j} is the identity"));
            }
        }
        if self.logical_x.n() != b {
            violations.push(format!(
                "logical X acts on {} qubits, expected {b}",
                self.logical_x.n()
            ));
        }
        if self.logical_z.n() != b {
            violations.push(format!(
                "logical Z acts on {} qubits, expected {b}",
                self.logical_z.n()
            ));
        }
        if self.stabilizers.len() != b - 1 {
            violations.push(format!(
                "expected {} stabilizer generators for a [[{b}, 1]] encoder, got {}",
                b - 1,
                self.stabilizers.len()
            ));
        }
        if !violations.is_empty() {
            // Shape errors make the remaining checks panic-prone; stop here.
            return ValidationReport {
                violations,
                d_x_check: DistanceCheck::Skipped,
                d_z_check: DistanceCheck::Skipped,
            };
        }
        for i in 0..self.stabilizers.len() {
            for j in (i + 1)..self.stabilizers.len() {
                if !self.stabilizers[i].commutes(&self.stabilizers[j]) {
                    violations.push(format!(
                        "stabilizers {i} ({}) and {j} ({}) anticommute",
                        self.stabilizers[i], self.stabilizers[j]
                    ));
                }
            }
        }
        for (j, s) in self.stabilizers.iter().enumerate() {
            if !self.logical_x.commutes(s) {
                violations.push(format!("logical X anticommutes with stabilizer {j} ({s})"));
            }
            if !self.logical_z.commutes(s) {
                violations.push(format!("logical Z anticommutes with stabilizer {j} ({s})"));
            }
        }
        if self.logical_x.commutes(&self.logical_z) {
            violations.push("logical X and logical Z commute (must anticommute)".to_string());
        }
        let rows: Vec<BitVec> = self
            .stabilizers
            .iter()
            .chain([&self.logical_x, &self.logical_z])
            .map(|p| p.symplectic_row())
            .collect();
        let expected = rows.len();
        let rank = gf2_rank(rows);
        if rank != expected {
            violations.push(format!(
                "stabilizers and logicals are linearly dependent (rank {rank} of {expected})"
            ));
        }
        if violations.is_empty() && b <= EXHAUSTIVE_CHECK_MAX_B {
            if let Err(Error::Validation(mut v)) = self.pure_errors() {
                violations.append(&mut v);
            }
        }
        let d_x_check = self.check_distance(Axis::X, self.d_x, &mut violations);
        let d_z_check = self.check_distance(Axis::Z, self.d_z, &mut violations);
        ValidationReport {
            violations,
            d_x_check,
            d_z_check,
        }
    }

    fn check_distance(
        &self,
        axis: Axis,
        declared: Option<usize>,
        violations: &mut Vec<String>,
    ) -> DistanceCheck {
        let Some(declared) = declared else {
            return DistanceCheck::Skipped;
        };
        if self.b > EXHAUSTIVE_CHECK_MAX_B {
            return DistanceCheck::Skipped;
        }
        match self.min_pure_type_distance(axis) {
            Ok(Some(computed)) if computed == declared => DistanceCheck::Verified(computed),
            Ok(Some(computed)) => {
                violations.push(format!(
                    "declared d_{axis} = {declared} but the minimum pure-{}-type logical weight is {computed}",
                    axis.name().to_uppercase(),
                ));
                DistanceCheck::Mismatch {
                    declared,
                    computed,
                }
            }
            Ok(None) => {
                violations.push(format!(
                    "declared d_{axis} = {declared} but no pure-{}-type logical exists",
                    axis.name().to_uppercase(),
                ));
                DistanceCheck::NoPureTypeLogical { declared }
            }
            Err(_) => DistanceCheck::Skipped,
        }
    }
}

/// Per-position syndrome and logical-class contributions of each error
/// letter, so block errors fold additively. Shared plumbing for the
/// density-evolution and belief-propagation decoders.
pub(crate) struct BlockTables {
    pub(crate) b: usize,
    /// `synd[i][v]`: syndrome mask of letter `v` at position `i`.
    pub(crate) synd: Vec<[u32; 4]>,
    /// `cls[i][v]`: 2-bit logical class (bit 0 = X component, bit 1 = Z).
    pub(crate) cls: Vec<[u8; 4]>,
}

pub(crate) fn block_tables(enc: &CliffordEncoder) -> BlockTables {
    let b = enc.b();
    let stabs = enc.stabilizers();
    let mut synd = vec![[0u32; 4]; b];
    let mut cls = vec![[0u8; 4]; b];
    for i in 0..b {
        for v in SingleQubitPauli::ALL {
            let (vx, vz) = (v.x_bit(), v.z_bit());
            let mut s = 0u32;
            for (j, stab) in stabs.iter().enumerate() {
                let anti = (vx & stab.z_bits().get(i)) ^ (vz & stab.x_bits().get(i));
                s |= (anti as u32) << j;
            }
            synd[i][v.index()] = s;
            let x_comp = (vx & enc.logical_z().z_bits().get(i))
                ^ (vz & enc.logical_z().x_bits().get(i));
            let z_comp = (vx & enc.logical_x().z_bits().get(i))
                ^ (vz & enc.logical_x().x_bits().get(i));
            cls[i][v.index()] = x_comp as u8 | ((z_comp as u8) << 1);
        }
    }
    BlockTables { b, synd, cls }
}

/// The letter named by a 2-bit class (bit 0 = X component, bit 1 = Z).
pub(crate) fn class_letter(cls: u8) -> SingleQubitPauli {
    SingleQubitPauli::from_bits(cls & 1 == 1, cls & 2 == 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn letter_products_track_phase() {
        use SingleQubitPauli::*;
        // X · Z = -iY under Y = iXZ.
        assert_eq!(X.mul(Z), Y);
        assert_eq!(X.mul_phase(Z), 3);
        // Z · X = iY.
        assert_eq!(Z.mul(X), Y);
        assert_eq!(Z.mul_phase(X), 1);
        // Squares are the identity with no phase.
        for w in SingleQubitPauli::ALL {
            assert_eq!(w.mul(w), I);
            assert_eq!(w.mul_phase(w), 0);
        }
    }

    #[test]
    fn string_multiply_and_display() {
        let a = p("XI");
        let b = p("ZI");
        let prod = a.multiply(&b);
        assert_eq!(prod.to_string(), "-iYI");
        assert_eq!(prod.phaseless().to_string(), "YI");
        // Y·Y = (iXZ)(iXZ) = I via per-letter bookkeeping.
        let y = p("Y");
        assert_eq!(y.multiply(&y).to_string(), "I");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["XIZ", "-YY", "iXZ", "-iZZ", "IIII"] {
            let q = p(s);
            assert_eq!(q.to_string(), s.trim_start_matches('+'));
        }
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn commutation_matches_definition() {
        assert!(p("XX").commutes(&p("ZZ")));
        assert!(!p("XI").commutes(&p("ZI")));
        assert!(p("XI").commutes(&p("IZ")));
        assert!(!p("Y").commutes(&p("X")));
    }

    #[test]
    fn weight_counts_non_identity_letters() {
        assert_eq!(p("XIYZ").weight(), 3);
        assert_eq!(PauliString::identity(5).weight(), 0);
        assert!(p("XIY").has_y());
        assert!(!p("XZ").has_y());
    }

    fn rep2() -> CliffordEncoder {
        CliffordEncoder::new(vec![p("ZZ")], p("XX"), p("ZI")).unwrap()
    }

    #[test]
    fn rep2_decompose_classes() {
        let enc = rep2();
        // X on one leg: anticommutes with ZZ -> syndrome 1; commutes with
        // ZI -> no Z part; anticommutes with... logical_z = ZI? XI vs ZI
        // anticommute -> X class.
        let (class, syn) = enc.decompose(&p("XI"));
        assert_eq!(class, SingleQubitPauli::X);
        assert!(syn.get(0));
        // The stabilizer itself decomposes to identity class, zero syndrome.
        let (class, syn) = enc.decompose(&p("ZZ"));
        assert_eq!(class, SingleQubitPauli::I);
        assert!(!syn.any());
        // The logical X representative decomposes to class X.
        let (class, syn) = enc.decompose(&p("XX"));
        assert_eq!(class, SingleQubitPauli::X);
        assert!(!syn.any());
    }

    #[test]
    fn decompose_is_homomorphic_on_rep2() {
        let enc = rep2();
        let ops = ["II", "XI", "IX", "XX", "ZI", "IZ", "ZZ", "YI", "XZ", "YY"];
        for a in ops {
            for b in ops {
                let (ca, _) = enc.decompose(&p(a));
                let (cb, _) = enc.decompose(&p(b));
                let (cab, _) = enc.decompose(&p(a).multiply(&p(b)).phaseless());
                assert_eq!(cab, ca.mul(cb), "class homomorphism failed on {a}·{b}");
            }
        }
    }

    #[test]
    fn push_forward_and_lift() {
        let enc = rep2();
        assert_eq!(enc.push_forward(SingleQubitPauli::X).to_string(), "XX");
        assert_eq!(enc.push_forward(SingleQubitPauli::Z).to_string(), "ZI");
        // Y -> phaseless XX·ZI = YX.
        assert_eq!(enc.push_forward(SingleQubitPauli::Y).to_string(), "YX");
        // Lift of X through two levels: XX -> each X expands to XX.
        let lifted = enc.lift_logical(SingleQubitPauli::X, 2, None).unwrap();
        assert_eq!(lifted.to_string(), "XXXX");
        let lifted_z = enc.lift_logical(SingleQubitPauli::Z, 2, None).unwrap();
        assert_eq!(lifted_z.to_string(), "ZIII");
        // Round trip: the lifted operator decomposes back to its letter at
        // every level.
        let (class, syn) = enc.decompose(&p("XX"));
        assert_eq!((class, syn.any()), (SingleQubitPauli::X, false));
        // Cap errors out instead of allocating.
        assert!(matches!(
            enc.lift_logical(SingleQubitPauli::X, 30, Some(1 << 10)),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn validate_flags_anticommuting_stabilizers() {
        let enc = CliffordEncoder::new_unchecked(
            vec![p("XZI"), p("ZXI")],
            p("XXX"),
            p("ZZZ"),
        );
        let report = enc.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("anticommute")));
    }

    #[test]
    fn validate_flags_dependent_generators() {
        // Second stabilizer equals the first: dependent, and the duplicate
        // leaves one syndrome unreachable.
        let enc = CliffordEncoder::new_unchecked(
            vec![p("ZZI"), p("ZZI")],
            p("XXX"),
            p("ZII"),
        );
        let report = enc.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("linearly dependent")));
    }

    #[test]
    fn pure_errors_have_unit_syndromes() {
        let enc = CliffordEncoder::new(
            vec![p("ZZI"), p("IZZ")],
            p("XXX"),
            p("ZII"),
        )
        .unwrap();
        let pures = enc.pure_errors().unwrap();
        assert_eq!(pures.len(), 2);
        for (j, e) in pures.iter().enumerate() {
            let (class, syn) = enc.decompose(e);
            assert_eq!(class, SingleQubitPauli::I);
            for k in 0..2 {
                assert_eq!(syn.get(k), k == j);
            }
        }
    }

    #[test]
    fn distance_scan_on_rep3() {
        let enc = CliffordEncoder::new(
            vec![p("ZZI"), p("IZZ")],
            p("XXX"),
            p("ZII"),
        )
        .unwrap()
        .declare_distances(Some(3), Some(1));
        let report = enc.validate();
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.d_x_check, DistanceCheck::Verified(3));
        assert_eq!(report.d_z_check, DistanceCheck::Verified(1));
        // A wrong declaration is caught.
        let bad = CliffordEncoder::new(
            vec![p("ZZI"), p("IZZ")],
            p("XXX"),
            p("ZII"),
        )
        .unwrap()
        .declare_distances(Some(2), None);
        let report = bad.validate();
        assert!(!report.is_valid());
        assert_eq!(
            report.d_x_check,
            DistanceCheck::Mismatch {
                declared: 2,
                computed: 3
            }
        );
    }

    #[test]
    fn css_and_orientation_flags() {
        let rep = rep2();
        assert!(rep.is_css() && rep.is_standard() && !rep.is_anti_standard());
        // Swapped logicals: X-type logical Z, Z-type logical X.
        let bell = CliffordEncoder::new(vec![p("ZZ")], p("ZI"), p("XX")).unwrap();
        assert!(bell.is_css() && !bell.is_standard() && bell.is_anti_standard());
        // Non-CSS stabilizer.
        let mixed = CliffordEncoder::new(vec![p("XZ")], p("ZX"), p("IZ")).unwrap();
        assert!(!mixed.is_css());
    }
}
