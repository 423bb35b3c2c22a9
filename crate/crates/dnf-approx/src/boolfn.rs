//! Truth tables, input indexing, function generators, and monotone-structure
//! utilities.
//!
//! A function f: {0,1}^n -> {0,1} is stored as a complete table of 2^n bits.
//! Coordinates are 1-based; the table index of an input is
//! `idx(x) = sum x_i * 2^(i-1)`, i.e. coordinate 1 is the least-significant
//! index bit. Every file format and golden value in this repo depends on that
//! one convention.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Largest supported arity for full tables (2^30 bits = 128 MiB).
pub const MAX_N: u32 = 30;

/// Within-word masks: `LOW_HALF[i]` selects bit positions whose i-th index
/// bit is clear. Valid for i < 6 since 2^(i+1) divides 64.
const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

fn check_arity(n: u32) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::ArityOutOfRange { n, max: MAX_N });
    }
    Ok(())
}

/// Exact binomial coefficient. Panics on n > 63 (never reachable here).
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut res: u64 = 1;
    for i in 1..=k as u64 {
        res = res * (n as u64 - k as u64 + i) / i;
    }
    res
}

/// One input point x in {0,1}^n. Bit i-1 of `word` holds x_i, so the packed
/// word is the table index itself.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString {
    n: u32,
    word: u32,
}

impl BitString {
    pub fn new(n: u32, word: u32) -> Result<Self> {
        check_arity(n)?;
        if n < 32 && word >> n != 0 {
            return Err(Error::Parse {
                what: "bitstring",
                detail: format!("word {word:#x} has bits above coordinate {n}"),
            });
        }
        Ok(BitString { n, word })
    }

    /// Inverse of [`BitString::index`].
    pub fn from_index(n: u32, index: usize) -> Result<Self> {
        Self::new(n, u32::try_from(index).map_err(|_| Error::ArityOutOfRange { n, max: MAX_N })?)
    }

    /// Build from x_1..x_n in order.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let n = bits.len() as u32;
        check_arity(n)?;
        let mut word = 0u32;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                word |= 1 << i;
            }
        }
        Ok(BitString { n, word })
    }

    /// Parse "x_1 x_2 .. x_n" written left to right, e.g. "011".
    pub fn from_pattern(s: &str) -> Result<Self> {
        let bits: Result<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    what: "bitstring",
                    detail: format!("unexpected character {other:?}"),
                }),
            })
            .collect();
        Self::from_bits(&bits?)
    }

    pub fn zeros(n: u32) -> Result<Self> {
        check_arity(n)?;
        Ok(BitString { n, word: 0 })
    }

    pub fn ones(n: u32) -> Result<Self> {
        check_arity(n)?;
        Ok(BitString {
            n,
            word: if n == 32 { u32::MAX } else { (1 << n) - 1 },
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The packed coordinate word (bit i-1 = x_i).
    pub fn word(&self) -> u32 {
        self.word
    }

    /// Table index of this input: `sum x_i * 2^(i-1)`. A bijection onto
    /// [0, 2^n).
    pub fn index(&self) -> usize {
        self.word as usize
    }

    /// Value of coordinate i (1-based).
    pub fn get(&self, i: u32) -> bool {
        debug_assert!(i >= 1 && i <= self.n);
        self.word >> (i - 1) & 1 == 1
    }

    /// Copy with coordinate i (1-based) set to `value`.
    pub fn with_bit(&self, i: u32, value: bool) -> Self {
        debug_assert!(i >= 1 && i <= self.n);
        let mask = 1 << (i - 1);
        BitString {
            n: self.n,
            word: if value { self.word | mask } else { self.word & !mask },
        }
    }

    /// Hamming weight ||x||.
    pub fn weight(&self) -> u32 {
        self.word.count_ones()
    }

    /// Coordinatewise x <= y.
    pub fn below(&self, other: &BitString) -> bool {
        self.n == other.n && self.word & !other.word == 0
    }
}

impl std::fmt::Display for BitString {
    /// Written x_1 first, matching the DNF file format's character order.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 1..=self.n {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Complete truth table of a Boolean function on n inputs, packed 64 entries
/// per word. Entry `idx(x)` holds f(x). Unused high bits of the last word are
/// always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: u32,
    words: Vec<u64>,
}

impl TruthTable {
    fn word_count(n: u32) -> usize {
        if n >= 6 {
            1usize << (n - 6)
        } else {
            1
        }
    }

    /// Mask of valid bits in the (single) word when n < 6.
    fn tail_mask(n: u32) -> u64 {
        if n >= 6 {
            u64::MAX
        } else {
            (1u64 << (1u32 << n)) - 1
        }
    }

    pub fn zeros(n: u32) -> Result<Self> {
        check_arity(n)?;
        Ok(TruthTable {
            n,
            words: vec![0; Self::word_count(n)],
        })
    }

    pub fn ones(n: u32) -> Result<Self> {
        check_arity(n)?;
        let mut words = vec![u64::MAX; Self::word_count(n)];
        *words.last_mut().unwrap() = Self::tail_mask(n);
        Ok(TruthTable { n, words })
    }

    /// Tabulate an arbitrary point function.
    pub fn from_fn(n: u32, mut f: impl FnMut(&BitString) -> bool) -> Result<Self> {
        let mut t = TruthTable::zeros(n)?;
        for idx in 0..1usize << n {
            let x = BitString {
                n,
                word: idx as u32,
            };
            if f(&x) {
                t.set_index(idx, true);
            }
        }
        Ok(t)
    }

    pub fn from_bools(n: u32, bits: &[bool]) -> Result<Self> {
        check_arity(n)?;
        if bits.len() != 1usize << n {
            return Err(Error::Parse {
                what: "truth table",
                detail: format!("expected {} entries, got {}", 1usize << n, bits.len()),
            });
        }
        let mut t = TruthTable::zeros(n)?;
        for (idx, &b) in bits.iter().enumerate() {
            if b {
                t.set_index(idx, true);
            }
        }
        Ok(t)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of table entries, 2^n.
    pub fn len(&self) -> usize {
        1usize << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get_index(&self, idx: usize) -> bool {
        debug_assert!(idx < self.len());
        self.words[idx >> 6] >> (idx & 63) & 1 == 1
    }

    #[inline]
    pub fn set_index(&mut self, idx: usize, value: bool) {
        debug_assert!(idx < self.len());
        let mask = 1u64 << (idx & 63);
        if value {
            self.words[idx >> 6] |= mask;
        } else {
            self.words[idx >> 6] &= !mask;
        }
    }

    pub fn get(&self, x: &BitString) -> Result<bool> {
        if x.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: x.n(),
            });
        }
        Ok(self.get_index(x.index()))
    }

    /// Number of 1-inputs.
    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// |{x : self(x) != other(x)}|.
    pub fn diff_count(&self, other: &TruthTable) -> Result<u64> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum())
    }

    /// |{x : self(x) = 1 and other(x) = 0}|. Zero iff self <= other pointwise.
    pub fn and_not_count(&self, other: &TruthTable) -> Result<u64> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & !b).count_ones() as u64)
            .sum())
    }

    /// Pointwise self(x) <= other(x) for all x.
    pub fn le(&self, other: &TruthTable) -> Result<bool> {
        Ok(self.and_not_count(other)? == 0)
    }

    pub fn or_assign(&mut self, other: &TruthTable) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(())
    }

    /// Iterate indices of 1-inputs in ascending order.
    pub fn ones_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((wi << 6) | b)
                }
            })
        })
    }

    /// True iff f(x) <= f(y) whenever x is y with one bit lowered; by
    /// transitivity this is full monotonicity.
    pub fn is_monotone(&self) -> bool {
        let n = self.n;
        for i in 0..n.min(6) {
            let step = 1u32 << i;
            for &w in &self.words {
                // A 1 at a position with bit i clear and a 0 one step up is
                // a violation.
                if ((w & LOW_HALF[i as usize]) << step) & !w != 0 {
                    return false;
                }
            }
        }
        for i in 6..n {
            let stride = 1usize << (i - 6);
            for wj in 0..self.words.len() {
                if wj & stride == 0 && self.words[wj] & !self.words[wj + stride] != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Minimal 1-inputs under the coordinatewise order. Errors on
    /// non-monotone input; the upward closure of the result reproduces the
    /// table exactly.
    pub fn minterms(&self) -> Result<Vec<BitString>> {
        if !self.is_monotone() {
            return Err(Error::NotMonotone);
        }
        // lowered[x] = OR over set bits i of f(x with bit i cleared).
        let mut lowered = vec![0u64; self.words.len()];
        let n = self.n;
        for i in 0..n.min(6) {
            let step = 1u32 << i;
            for (acc, &w) in lowered.iter_mut().zip(&self.words) {
                *acc |= (w & LOW_HALF[i as usize]) << step;
            }
        }
        for i in 6..n {
            let stride = 1usize << (i - 6);
            for wj in 0..self.words.len() {
                if wj & stride == 0 {
                    lowered[wj + stride] |= self.words[wj];
                }
            }
        }
        let mut out = Vec::new();
        for (wi, (&w, &low)) in self.words.iter().zip(&lowered).enumerate() {
            let mut m = w & !low;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                m &= m - 1;
                out.push(BitString {
                    n,
                    word: ((wi << 6) | b) as u32,
                });
            }
        }
        Ok(out)
    }

    /// Level density mu_k: the fraction of weight-k inputs mapped to 1,
    /// as an exact (ones, C(n,k)) pair.
    pub fn level_count(&self, k: u32) -> Result<(u64, u64)> {
        if k > self.n {
            return Err(Error::LevelOutOfRange { k, n: self.n });
        }
        let ones = weight_k_indices(self.n, k)
            .filter(|&idx| self.get_index(idx as usize))
            .count() as u64;
        Ok((ones, binomial(self.n, k)))
    }

    pub fn level_density(&self, k: u32) -> Result<f64> {
        let (ones, total) = self.level_count(k)?;
        Ok(ones as f64 / total as f64)
    }

    /// Serialize to the table file format: a header line `n=<int>` followed
    /// by one hex string of exactly ceil(2^n / 4) digits, most-significant
    /// digit first; table bit j sits in hex digit floor(j/4), bit j mod 4.
    pub fn to_file_string(&self) -> String {
        let digits = self.len().div_ceil(4);
        let mut s = String::with_capacity(digits + 8);
        s.push_str(&format!("n={}\n", self.n));
        for p in (0..digits).rev() {
            let bit = 4 * p;
            let nibble = (self.words[bit >> 6] >> (bit & 63)) & 0xF;
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s.push('\n');
        s
    }

    pub fn from_file_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines.next().ok_or_else(|| Error::Parse {
            what: "truth table",
            detail: "empty input".into(),
        })?;
        let n: u32 = header
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse {
                what: "truth table",
                detail: format!("bad header {header:?}"),
            })?;
        check_arity(n)?;
        let hex: String = lines.collect::<String>().trim().to_string();
        let digits = (1usize << n).div_ceil(4);
        if hex.len() != digits {
            return Err(Error::Parse {
                what: "truth table",
                detail: format!("expected {digits} hex digits, got {}", hex.len()),
            });
        }
        let mut t = TruthTable::zeros(n)?;
        for (pos, c) in hex.chars().enumerate() {
            let nibble = c.to_digit(16).ok_or_else(|| Error::Parse {
                what: "truth table",
                detail: format!("bad hex digit {c:?}"),
            })? as u64;
            let p = digits - 1 - pos;
            let bit = 4 * p;
            t.words[bit >> 6] |= nibble << (bit & 63);
        }
        if *t.words.last().unwrap() & !Self::tail_mask(n) != 0 {
            return Err(Error::Parse {
                what: "truth table",
                detail: "hex digits set bits beyond 2^n".into(),
            });
        }
        Ok(t)
    }
}

impl std::fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TruthTable(n={}, ones={})", self.n, self.count_ones())?;
        if self.n <= 6 {
            write!(f, " [")?;
            for idx in 0..self.len() {
                write!(f, "{}", self.get_index(idx) as u8)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Parity: 1 iff the input has an odd number of 1s.
pub fn parity_table(n: u32) -> Result<TruthTable> {
    check_arity(n)?;
    TruthTable::from_fn(n, |x| x.weight() % 2 == 1)
}

/// Strict majority: 1 iff weight(x) > n/2. Ties at even n map to 0.
pub fn majority_table(n: u32) -> Result<TruthTable> {
    check_arity(n)?;
    TruthTable::from_fn(n, |x| 2 * x.weight() > n)
}

/// Independent Bernoulli(q) entry per input.
pub fn random_table(n: u32, q: f64, seed: u64) -> Result<TruthTable> {
    check_arity(n)?;
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::ProbabilityOutOfRange(q));
    }
    let mut rng = SplitMix64::new(seed);
    TruthTable::from_fn(n, |_| rng.bernoulli(q))
}

/// Exactly 2^(n-1) ones placed uniformly at random: the strictest reading
/// of "balanced", so min{Pr[f=0], Pr[f=1]} = 1/2 holds with equality.
pub fn random_balanced_table(n: u32, seed: u64) -> Result<TruthTable> {
    check_arity(n)?;
    let len = 1usize << n;
    let mut idxs: Vec<u32> = (0..len as u32).collect();
    let mut rng = SplitMix64::new(seed);
    // Partial Fisher-Yates: the first half becomes the 1-set.
    for i in 0..len / 2 {
        let j = i + rng.next_below((len - i) as u64) as usize;
        idxs.swap(i, j);
    }
    let mut t = TruthTable::zeros(n)?;
    for &idx in &idxs[..len / 2] {
        t.set_index(idx as usize, true);
    }
    Ok(t)
}

/// Replace a table by its upward closure: every y above a 1-input becomes 1.
pub fn upward_closure(t: &TruthTable) -> TruthTable {
    let mut out = t.clone();
    let n = out.n;
    for i in 0..n.min(6) {
        let step = 1u32 << i;
        for w in out.words.iter_mut() {
            *w |= (*w & LOW_HALF[i as usize]) << step;
        }
    }
    for i in 6..n {
        let stride = 1usize << (i - 6);
        for wj in 0..out.words.len() {
            if wj & stride == 0 {
                out.words[wj + stride] |= out.words[wj];
            }
        }
    }
    out
}

/// Seed-set sampling of a monotone function: mark each input independently
/// with probability q, then take the upward closure. Always monotone.
pub fn random_monotone_table(n: u32, q: f64, seed: u64) -> Result<TruthTable> {
    Ok(upward_closure(&random_table(n, q, seed)?))
}

/// All table indices of weight-k inputs, ascending (Gosper's hack).
pub fn weight_k_indices(n: u32, k: u32) -> impl Iterator<Item = u64> {
    let limit = 1u64 << n;
    let mut cur = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done || cur >= limit {
            return None;
        }
        let out = cur;
        if k == 0 {
            done = true;
        } else {
            let u = cur & cur.wrapping_neg();
            let w = cur + u;
            cur = w | (((cur ^ w) / u) >> 2);
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_and2() -> TruthTable {
        // f = x1 AND x2: only index 3 is 1.
        TruthTable::from_bools(2, &[false, false, false, true]).unwrap()
    }

    fn table_or2() -> TruthTable {
        TruthTable::from_bools(2, &[false, true, true, true]).unwrap()
    }

    #[test]
    fn idx_examples() {
        assert_eq!(BitString::from_pattern("00").unwrap().index(), 0);
        // x1=1, x2=0.
        assert_eq!(BitString::from_pattern("10").unwrap().index(), 1);
        // x1=0, x2=1, x3=1 -> 0 + 2 + 4.
        assert_eq!(BitString::from_pattern("011").unwrap().index(), 6);
    }

    #[test]
    fn idx_bijection_round_trip() {
        for n in 1..=12u32 {
            for idx in 0..1usize << n {
                let x = BitString::from_index(n, idx).unwrap();
                assert_eq!(x.index(), idx);
            }
        }
    }

    #[test]
    fn parity_examples() {
        let p1 = parity_table(1).unwrap();
        assert!(!p1.get_index(0));
        assert!(p1.get_index(1));
        let p2 = parity_table(2).unwrap();
        assert_eq!(
            (0..4).map(|i| p2.get_index(i)).collect::<Vec<_>>(),
            vec![false, true, true, false]
        );
        let p3 = parity_table(3).unwrap();
        assert!(p3.get(&BitString::from_pattern("111").unwrap()).unwrap());
    }

    #[test]
    fn majority_examples() {
        let m3 = majority_table(3).unwrap();
        assert!(m3.get(&BitString::from_pattern("110").unwrap()).unwrap());
        assert!(!m3.get(&BitString::from_pattern("100").unwrap()).unwrap());
        // Tie at even n goes to 0.
        let m4 = majority_table(4).unwrap();
        assert!(!m4.get(&BitString::from_pattern("1100").unwrap()).unwrap());
    }

    #[test]
    fn random_balanced_has_exactly_half_ones() {
        for n in [4u32, 9, 12] {
            for seed in 0..5u64 {
                let t = random_balanced_table(n, seed).unwrap();
                assert_eq!(t.count_ones(), 1u64 << (n - 1), "n={n} seed={seed}");
            }
        }
        // Different seeds produce different placements (overwhelmingly).
        assert_ne!(
            random_balanced_table(10, 1).unwrap(),
            random_balanced_table(10, 2).unwrap()
        );
    }

    #[test]
    fn random_monotone_degenerate_densities() {
        let z = random_monotone_table(6, 0.0, 1).unwrap();
        assert_eq!(z.count_ones(), 0);
        let o = random_monotone_table(6, 1.0, 1).unwrap();
        assert_eq!(o.count_ones(), 64);
    }

    #[test]
    fn random_monotone_is_always_monotone() {
        // 13 exercises the word-stride paths (several words per table).
        for n in [3u32, 5, 8, 10, 13] {
            for (si, q) in [(1u64, 0.02), (2, 0.1), (3, 0.5), (4, 0.9)] {
                let t = random_monotone_table(n, q, 1000 + si).unwrap();
                // Exhaustive single-bit-raise check, independent of the
                // word-level is_monotone path.
                for idx in 0..t.len() {
                    for i in 0..n {
                        if idx >> i & 1 == 0 {
                            let up = idx | (1 << i);
                            assert!(
                                !t.get_index(idx) || t.get_index(up),
                                "n={n} q={q} raise at idx={idx} bit={i}"
                            );
                        }
                    }
                }
                assert!(t.is_monotone());
            }
        }
    }

    #[test]
    fn is_monotone_examples() {
        assert!(table_and2().is_monotone());
        assert!(!parity_table(2).unwrap().is_monotone());
        assert!(TruthTable::zeros(4).unwrap().is_monotone());
        assert!(TruthTable::ones(4).unwrap().is_monotone());
    }

    #[test]
    fn is_monotone_wide_tables() {
        // Exercise the word-level stride path (n > 6).
        assert!(majority_table(9).unwrap().is_monotone());
        assert!(!parity_table(9).unwrap().is_monotone());
    }

    #[test]
    fn minterm_examples() {
        let and_minterms = table_and2().minterms().unwrap();
        assert_eq!(and_minterms, vec![BitString::from_pattern("11").unwrap()]);

        let or_minterms = table_or2().minterms().unwrap();
        assert_eq!(
            or_minterms,
            vec![
                BitString::from_pattern("10").unwrap(),
                BitString::from_pattern("01").unwrap(),
            ]
        );

        assert!(TruthTable::zeros(3).unwrap().minterms().unwrap().is_empty());
        assert_eq!(
            TruthTable::ones(3).unwrap().minterms().unwrap(),
            vec![BitString::zeros(3).unwrap()]
        );

        assert_eq!(
            parity_table(3).unwrap().minterms(),
            Err(Error::NotMonotone)
        );
    }

    #[test]
    fn minterm_closure_idempotent() {
        for (n, q, seed) in [(8u32, 0.05, 5u64), (10, 0.02, 6), (10, 0.3, 7)] {
            let t = random_monotone_table(n, q, seed).unwrap();
            let minterms = t.minterms().unwrap();
            let mut seeds = TruthTable::zeros(n).unwrap();
            for m in &minterms {
                seeds.set_index(m.index(), true);
            }
            assert_eq!(upward_closure(&seeds), t, "n={n} q={q} seed={seed}");
        }
    }

    #[test]
    fn level_density_examples() {
        let m3 = majority_table(3).unwrap();
        assert_eq!(m3.level_density(2).unwrap(), 1.0);
        assert_eq!(TruthTable::zeros(5).unwrap().level_density(3).unwrap(), 0.0);
        assert_eq!(parity_table(3).unwrap().level_density(2).unwrap(), 0.0);
        assert_eq!(m3.level_density(4), Err(Error::LevelOutOfRange { k: 4, n: 3 }));
    }

    #[test]
    fn level_density_monotone_in_k() {
        for (n, q, seed) in [(10u32, 0.03, 11u64), (12, 0.1, 12), (12, 0.4, 13)] {
            let t = random_monotone_table(n, q, seed).unwrap();
            // Compare exactly via cross-multiplied counts.
            let mut prev: Option<(u64, u64)> = None;
            for k in 0..=n {
                let (ones, total) = t.level_count(k).unwrap();
                if let Some((po, pt)) = prev {
                    assert!(
                        (ones as u128) * (pt as u128) >= (po as u128) * (total as u128),
                        "density dropped at k={k} for n={n} q={q}"
                    );
                }
                prev = Some((ones, total));
            }
        }
    }

    #[test]
    fn layer_enumeration_counts() {
        for n in [4u32, 9, 12] {
            for k in 0..=n {
                let seen: Vec<u64> = weight_k_indices(n, k).collect();
                assert_eq!(seen.len() as u64, binomial(n, k), "n={n} k={k}");
                for &idx in &seen {
                    assert_eq!(idx.count_ones(), k);
                }
                let mut sorted = seen.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), seen.len());
            }
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(12, 6), 924);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(5, 7), 0);
    }

    #[test]
    fn table_file_round_trip() {
        let p3 = parity_table(3).unwrap();
        let s = p3.to_file_string();
        assert_eq!(s, "n=3\n96\n");
        assert_eq!(TruthTable::from_file_str(&s).unwrap(), p3);

        // Majority on 4 bits: ones at indices {7, 11, 13, 14, 15}, whose
        // characteristic number is 0xe880.
        assert_eq!(majority_table(4).unwrap().to_file_string(), "n=4\ne880\n");
        // Uppercase digits parse too.
        assert_eq!(
            TruthTable::from_file_str("n=4\nE880\n").unwrap(),
            majority_table(4).unwrap()
        );

        for n in [1u32, 2, 5, 6, 9] {
            let t = random_table(n, 0.4, 99 + n as u64).unwrap();
            let round = TruthTable::from_file_str(&t.to_file_string()).unwrap();
            assert_eq!(round, t, "n={n}");
        }
    }

    #[test]
    fn table_file_rejects_garbage() {
        assert!(TruthTable::from_file_str("").is_err());
        assert!(TruthTable::from_file_str("n=3\n9").is_err());
        assert!(TruthTable::from_file_str("n=3\nzz").is_err());
        // n=1 has two valid bits; digit 8 would set bit 3.
        assert!(TruthTable::from_file_str("n=1\n8").is_err());
        assert!(TruthTable::from_file_str("n=0\n0").is_err());
    }

    #[test]
    fn arity_cap_enforced() {
        assert!(matches!(
            TruthTable::zeros(MAX_N + 1),
            Err(Error::ArityOutOfRange { .. })
        ));
        assert!(BitString::new(0, 0).is_err());
    }
}
