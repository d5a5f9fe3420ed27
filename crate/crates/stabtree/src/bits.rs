//! Packed bit vectors over GF(2) and a small elimination toolkit.
//!
//! Pauli strings store their X and Z components as [`BitVec`]s; the hot
//! operations everywhere in the crate are word-wide XOR and AND-parity,
//! which is why this is a flat `u64` array rather than anything fancier.

use std::fmt;

/// A fixed-length bit vector packed into `u64` words. Bit `i` of the vector
/// lives in word `i / 64` at position `i % 64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Vector with exactly the listed positions set.
    ///
    /// # Panics
    /// Panics if any index is out of range.
    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bit_str(s: &str) -> Option<Self> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return None,
            }
        }
        Some(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Number of set bits.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True if any bit is set.
    pub fn any(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }

    /// In-place XOR with another vector of the same length.
    ///
    /// # Panics
    /// Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "BitVec length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the bitwise AND with `other` — the workhorse of the binary
    /// symplectic form.
    ///
    /// # Panics
    /// Panics on length mismatch.
    pub fn and_parity(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "BitVec length mismatch");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// True if this vector and `other` are both set anywhere.
    ///
    /// # Panics
    /// Panics on length mismatch.
    pub fn and_any(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "BitVec length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    /// Number of positions where this vector or `other` is set
    /// (Pauli weight when applied to the X/Z component pair).
    pub fn or_count(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len, "BitVec length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Iterator over the indices of set bits, in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// The low `len` bits packed into a `u32`. Only valid for `len <= 32`.
    ///
    /// # Panics
    /// Panics if the vector is longer than 32 bits.
    pub fn as_u32(&self) -> u32 {
        assert!(self.len <= 32, "BitVec too long for u32 packing");
        if self.words.is_empty() {
            0
        } else {
            self.words[0] as u32
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Row-reduces `rows` over GF(2) and returns the rank. The input rows are
/// consumed; all rows must share a length.
pub fn gf2_rank(mut rows: Vec<BitVec>) -> usize {
    let width = match rows.first() {
        Some(r) => r.len(),
        None => return 0,
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Solves `A x = b` over GF(2) where the rows of `A` are given as bit
/// vectors. Returns one solution if the system is consistent.
pub fn gf2_solve(rows: &[BitVec], rhs: &BitVec) -> Option<BitVec> {
    assert_eq!(rows.len(), rhs.len(), "row count must match rhs length");
    let width = match rows.first() {
        Some(r) => r.len(),
        None => return Some(BitVec::zeros(0)),
    };
    // Augmented elimination: carry the rhs bit alongside each row.
    let mut aug: Vec<(BitVec, bool)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), rhs.get(i)))
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..aug.len()).find(|&r| aug[r].0.get(col)) else {
            continue;
        };
        aug.swap(rank, p);
        let (prow, pbit) = aug[rank].clone();
        for (r, (row, bit)) in aug.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&prow);
                *bit ^= pbit;
            }
        }
        pivots.push((rank, col));
        rank += 1;
        if rank == aug.len() {
            break;
        }
    }
    // Inconsistent if any zero row has rhs 1.
    if aug.iter().skip(rank).any(|(row, bit)| *bit && !row.any()) {
        return None;
    }
    let mut x = BitVec::zeros(width);
    for &(row, col) in &pivots {
        if aug[row].1 {
            x.set(col, true);
        }
    }
    Some(x)
}

/// Tests whether `v` lies in the GF(2) span of `basis`.
pub fn gf2_in_span(basis: &[BitVec], v: &BitVec) -> bool {
    if !v.any() {
        return true;
    }
    let with = {
        let mut rows: Vec<BitVec> = basis.to_vec();
        rows.push(v.clone());
        gf2_rank(rows)
    };
    let without = gf2_rank(basis.to_vec());
    with == without
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_roundtrip() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert!(v.get(0) && v.get(64) && v.get(129));
        assert!(!v.get(1));
        assert_eq!(v.count_ones(), 3);
        v.set(64, false);
        assert_eq!(v.count_ones(), 2);
    }

    #[test]
    fn and_parity_matches_naive() {
        let a = BitVec::from_indices(70, &[0, 3, 65, 69]);
        let b = BitVec::from_indices(70, &[3, 65, 68]);
        // overlap {3, 65} -> even parity
        assert!(!a.and_parity(&b));
        let c = BitVec::from_indices(70, &[0, 3]);
        // overlap {0, 3} with a -> even; with b -> {3} odd
        assert!(!a.and_parity(&c));
        assert!(b.and_parity(&c));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            BitVec::from_bit_str("1100").unwrap(),
            BitVec::from_bit_str("0110").unwrap(),
            BitVec::from_bit_str("1010").unwrap(), // sum of the first two
        ];
        assert_eq!(gf2_rank(rows), 2);
    }

    #[test]
    fn solve_finds_consistent_solution() {
        let rows = vec![
            BitVec::from_bit_str("110").unwrap(),
            BitVec::from_bit_str("011").unwrap(),
        ];
        let rhs = BitVec::from_bit_str("10").unwrap();
        let x = gf2_solve(&rows, &rhs).unwrap();
        // check A x = b
        assert_eq!(rows[0].and_parity(&x), rhs.get(0));
        assert_eq!(rows[1].and_parity(&x), rhs.get(1));
        // inconsistent system: duplicate row with conflicting rhs
        let rows2 = vec![rows[0].clone(), rows[0].clone()];
        let rhs2 = BitVec::from_bit_str("10").unwrap();
        assert!(gf2_solve(&rows2, &rhs2).is_none());
    }

    #[test]
    fn span_membership() {
        let basis = vec![
            BitVec::from_bit_str("1100").unwrap(),
            BitVec::from_bit_str("0011").unwrap(),
        ];
        assert!(gf2_in_span(&basis, &BitVec::from_bit_str("1111").unwrap()));
        assert!(!gf2_in_span(&basis, &BitVec::from_bit_str("1000").unwrap()));
    }
}
