//! DNF terms and formulas, their evaluation, and the closeness metric.
//!
//! A term is a conjunction of literals, stored as (mask of fixed
//! coordinates, required values); its satisfying set is a sub-cube of
//! dimension n - width. A formula is an ordered list of terms; the empty
//! list is the constant-0 formula. Terms may repeat inside a formula, and
//! size counts the repeats.

use serde::Serialize;

use crate::boolfn::{BitString, TruthTable, MAX_N};
use crate::error::{Error, Result};

/// One conjunction over n coordinates. Bit i-1 of `mask` says whether
/// coordinate i is fixed; the matching bit of `values` gives the required
/// value. `values & !mask == 0` always, so a term can never demand both
/// values of one coordinate, and repeated fixes of a coordinate collapse.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    n: u32,
    mask: u32,
    values: u32,
}

impl Term {
    pub fn new(n: u32, mask: u32, values: u32) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::ArityOutOfRange { n, max: MAX_N });
        }
        let full = Self::full_mask(n);
        if mask & !full != 0 || values & !full != 0 {
            return Err(Error::Parse {
                what: "term",
                detail: format!("mask/values have bits above coordinate {n}"),
            });
        }
        if values & !mask != 0 {
            return Err(Error::ValueOutsideMask { mask, values });
        }
        Ok(Term { n, mask, values })
    }

    fn full_mask(n: u32) -> u32 {
        if n == 32 {
            u32::MAX
        } else {
            (1 << n) - 1
        }
    }

    /// The width-0 term, true on every input.
    pub fn always_true(n: u32) -> Result<Self> {
        Term::new(n, 0, 0)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn values(&self) -> u32 {
        self.values
    }

    /// Number of fixed coordinates.
    pub fn width(&self) -> u32 {
        self.mask.count_ones()
    }

    /// Required value of coordinate i (1-based), if fixed.
    pub fn fixes(&self, i: u32) -> Option<bool> {
        debug_assert!(i >= 1 && i <= self.n);
        let bit = 1 << (i - 1);
        if self.mask & bit != 0 {
            Some(self.values & bit != 0)
        } else {
            None
        }
    }

    /// True iff every fixed coordinate of the term matches x.
    pub fn accepts(&self, x: &BitString) -> Result<bool> {
        if x.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: x.n(),
            });
        }
        Ok(self.accepts_index(x.index()))
    }

    /// Unchecked-arity fast path over a table index.
    #[inline]
    pub fn accepts_index(&self, idx: usize) -> bool {
        (idx as u32 ^ self.values) & self.mask == 0
    }

    /// Number of accepted inputs, 2^(n - width).
    pub fn accept_count(&self) -> u64 {
        1u64 << (self.n - self.width())
    }

    /// Table indices of all accepted inputs, ascending.
    pub fn accepted_indices(&self) -> impl Iterator<Item = u32> {
        let free = Self::full_mask(self.n) & !self.mask;
        let base = self.values;
        let mut sub: u32 = 0;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = base | sub;
            // Enumerate submasks of `free` in ascending order.
            sub = sub.wrapping_sub(free) & free;
            if sub == 0 {
                done = true;
            }
            Some(out)
        })
    }

    /// Render as n characters over {0,1,-}, coordinate 1 first.
    pub fn pattern(&self) -> String {
        (1..=self.n)
            .map(|i| match self.fixes(i) {
                Some(true) => '1',
                Some(false) => '0',
                None => '-',
            })
            .collect()
    }

    pub fn from_pattern(s: &str) -> Result<Self> {
        let n = s.chars().count() as u32;
        if n == 0 || n > MAX_N {
            return Err(Error::ArityOutOfRange { n, max: MAX_N });
        }
        let mut mask = 0u32;
        let mut values = 0u32;
        for (i, c) in s.chars().enumerate() {
            let bit = 1 << i;
            match c {
                '0' => mask |= bit,
                '1' => {
                    mask |= bit;
                    values |= bit;
                }
                '-' => {}
                other => {
                    return Err(Error::Parse {
                        what: "term",
                        detail: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        Ok(Term { n, mask, values })
    }
}

impl std::fmt::Debug for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Term({})", self.pattern())
    }
}

/// The positive-literal term accepting exactly {x : x >= y coordinatewise}.
/// Width equals weight(y); y = 0...0 gives the always-true term.
pub fn upset_term(y: &BitString) -> Term {
    Term {
        n: y.n(),
        mask: y.word(),
        values: y.word(),
    }
}

/// An ordered DNF formula. Size = term count (duplicates included),
/// width = maximum term width (0 when empty).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dnf {
    n: u32,
    terms: Vec<Term>,
}

impl Dnf {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::ArityOutOfRange { n, max: MAX_N });
        }
        Ok(Dnf { n, terms: Vec::new() })
    }

    pub fn from_terms(n: u32, terms: Vec<Term>) -> Result<Self> {
        let mut d = Dnf::new(n)?;
        for t in terms {
            d.push(t)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, term: Term) -> Result<()> {
        if term.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: term.n(),
            });
        }
        self.terms.push(term);
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn size(&self) -> usize {
        self.terms.len()
    }

    pub fn width(&self) -> u32 {
        self.terms.iter().map(Term::width).max().unwrap_or(0)
    }

    /// OR over the terms; the empty formula is identically 0.
    pub fn eval(&self, x: &BitString) -> Result<bool> {
        if x.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: x.n(),
            });
        }
        Ok(self.eval_index(x.index()))
    }

    #[inline]
    pub fn eval_index(&self, idx: usize) -> bool {
        self.terms.iter().any(|t| t.accepts_index(idx))
    }

    /// Tabulate by stamping each term's accepted sub-cube into the bit
    /// table. The slow per-point oracle lives in [`crate::oracle`] and
    /// shares none of this code.
    pub fn to_table(&self) -> Result<TruthTable> {
        let mut t = TruthTable::zeros(self.n)?;
        for term in &self.terms {
            for idx in term.accepted_indices() {
                t.set_index(idx as usize, true);
            }
        }
        Ok(t)
    }

    /// Serialize to the DNF text format: header `n=<int> terms=<int>`, then
    /// one pattern line per term. Round-trips bit-exactly, including term
    /// order and duplicates.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("n={} terms={}\n", self.n, self.terms.len());
        for t in &self.terms {
            s.push_str(&t.pattern());
            s.push('\n');
        }
        s
    }

    pub fn from_file_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines.next().ok_or_else(|| Error::Parse {
            what: "dnf",
            detail: "empty input".into(),
        })?;
        let parse_header = || -> Option<(u32, usize)> {
            let mut it = header.split_whitespace();
            let n = it.next()?.strip_prefix("n=")?.parse().ok()?;
            let terms = it.next()?.strip_prefix("terms=")?.parse().ok()?;
            if it.next().is_some() {
                return None;
            }
            Some((n, terms))
        };
        let (n, count) = parse_header().ok_or_else(|| Error::Parse {
            what: "dnf",
            detail: format!("bad header {header:?}"),
        })?;
        let mut d = Dnf::new(n)?;
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let t = Term::from_pattern(line)?;
            d.push(t)?;
        }
        if d.size() != count {
            return Err(Error::Parse {
                what: "dnf",
                detail: format!("header says {count} terms, found {}", d.size()),
            });
        }
        Ok(d)
    }
}

/// Fraction of inputs where the two tables disagree, computed exactly as
/// popcount(xor)/2^n. Two functions are eps-close iff this is <= eps.
pub fn closeness(a: &TruthTable, b: &TruthTable) -> Result<f64> {
    let diff = a.diff_count(b)?;
    Ok(diff as f64 / a.len() as f64)
}

/// The exact baseline: one width-n term per 1-input.
pub fn minterm_expansion(t: &TruthTable) -> Dnf {
    let n = t.n();
    let full = Term::full_mask(n);
    let mut d = Dnf { n, terms: Vec::new() };
    for idx in t.ones_indices() {
        d.terms.push(Term {
            n,
            mask: full,
            values: idx as u32,
        });
    }
    d
}

/// Construction parameters echoed into reports, whichever apply.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ParamRecord {
    /// Special sub-cube dimension (universal).
    pub d: Option<u32>,
    /// Block count (parity).
    pub b: Option<u32>,
    /// Term width budget (majority).
    pub w: Option<u32>,
    /// Term count (majority) or slice count (monotone).
    pub t: Option<u64>,
}

/// One construction trial's outcome.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxReport {
    pub construction: String,
    pub n: u32,
    /// Target error fraction.
    pub epsilon: f64,
    /// Measured disagreement fraction, in the unit interval.
    pub error: f64,
    /// Fraction of all inputs with f(x)=0 but approximator 1.
    pub error_zero_side: f64,
    /// Fraction of all inputs with f(x)=1 but approximator 0.
    pub error_one_side: f64,
    pub size: usize,
    pub width: u32,
    pub params: ParamRecord,
    pub master_seed: u64,
    /// Seed the winning trial actually ran with.
    pub trial_seed: u64,
    pub trial: u64,
    /// "exhaustive" or "monte_carlo".
    pub error_method: String,
    /// 95% half-width of the error estimate; 0 when exhaustive.
    pub error_half_width: f64,
    /// Structured notes: degenerate inputs, unmet preconditions, per-slice
    /// sampling failures. Empty on a clean run.
    pub notes: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::parity_table;

    #[test]
    fn term_accept_examples() {
        let anyx = Term::always_true(4).unwrap();
        for idx in 0..16 {
            assert!(anyx.accepts_index(idx));
        }

        // x1=1 and x2=0.
        let t = Term::from_pattern("10").unwrap();
        assert!(t.accepts(&BitString::from_pattern("10").unwrap()).unwrap());
        assert!(!t.accepts(&BitString::from_pattern("11").unwrap()).unwrap());

        // Positive term on {1,3}: containment check.
        let t = Term::from_pattern("1-1").unwrap();
        assert!(t.accepts(&BitString::from_pattern("101").unwrap()).unwrap());
        assert!(!t.accepts(&BitString::from_pattern("100").unwrap()).unwrap());

        assert_eq!(
            t.accepts(&BitString::from_pattern("10").unwrap()),
            Err(Error::ArityMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn term_width_and_count() {
        let t = Term::from_pattern("1-0-").unwrap();
        assert_eq!(t.width(), 2);
        assert_eq!(t.accept_count(), 4);
        assert_eq!(t.accepted_indices().count(), 4);
        for idx in t.accepted_indices() {
            assert!(t.accepts_index(idx as usize));
        }
    }

    #[test]
    fn contradictory_terms_unrepresentable() {
        // values outside mask is the only ill-formed state and is rejected.
        assert_eq!(
            Term::new(3, 0b001, 0b011),
            Err(Error::ValueOutsideMask { mask: 1, values: 3 })
        );
    }

    #[test]
    fn dnf_eval_examples() {
        let empty = Dnf::new(3).unwrap();
        for idx in 0..8 {
            assert!(!empty.eval_index(idx));
        }

        let mut taut = Dnf::new(3).unwrap();
        taut.push(Term::always_true(3).unwrap()).unwrap();
        for idx in 0..8 {
            assert!(taut.eval_index(idx));
        }
    }

    #[test]
    fn minterm_expansion_matches_table() {
        for n in [2u32, 4, 6, 8] {
            let t = crate::boolfn::random_table(n, 0.35, 17 + n as u64).unwrap();
            let d = minterm_expansion(&t);
            assert_eq!(d.size() as u64, t.count_ones());
            if t.count_ones() > 0 {
                assert_eq!(d.width(), n);
            }
            assert_eq!(d.to_table().unwrap(), t);
            // Per-point evaluation agrees too.
            for idx in 0..t.len() {
                assert_eq!(d.eval_index(idx), t.get_index(idx), "n={n} idx={idx}");
            }
        }
    }

    #[test]
    fn minterm_expansion_examples() {
        assert_eq!(minterm_expansion(&TruthTable::zeros(3).unwrap()).size(), 0);
        let p3 = minterm_expansion(&parity_table(3).unwrap());
        assert_eq!(p3.size(), 4);
        assert_eq!(p3.width(), 3);
        let and2 = TruthTable::from_bools(2, &[false, false, false, true]).unwrap();
        assert_eq!(minterm_expansion(&and2).size(), 1);
    }

    #[test]
    fn single_full_width_term_stamps_one_point() {
        let y = BitString::from_pattern("0110").unwrap();
        let d = minterm_expansion(&{
            let mut t = TruthTable::zeros(4).unwrap();
            t.set_index(y.index(), true);
            t
        });
        let table = d.to_table().unwrap();
        assert_eq!(table.count_ones(), 1);
        assert!(table.get(&y).unwrap());
    }

    #[test]
    fn closeness_examples() {
        let t = crate::boolfn::random_table(6, 0.5, 3).unwrap();
        assert_eq!(closeness(&t, &t).unwrap(), 0.0);
        let complement = TruthTable::from_fn(6, |x| !t.get(x).unwrap()).unwrap();
        assert_eq!(closeness(&t, &complement).unwrap(), 1.0);

        let or2 = TruthTable::from_bools(2, &[false, true, true, true]).unwrap();
        assert_eq!(closeness(&or2, &parity_table(2).unwrap()).unwrap(), 0.25);
    }

    #[test]
    fn appending_terms_never_clears_outputs() {
        let mut rng = crate::rng::SplitMix64::new(77);
        let n = 6;
        let mut d = Dnf::new(n).unwrap();
        let mut prev = d.to_table().unwrap();
        for _ in 0..20 {
            let t = crate::oracle::random_term(n, &mut rng);
            d.push(t).unwrap();
            let cur = d.to_table().unwrap();
            assert!(prev.le(&cur).unwrap());
            prev = cur;
        }
    }

    #[test]
    fn upset_term_examples() {
        let bottom = upset_term(&BitString::zeros(5).unwrap());
        assert_eq!(bottom.width(), 0);

        let y = BitString::from_pattern("110").unwrap();
        let t = upset_term(&y);
        assert_eq!(t.width(), 2);
        let accepted: Vec<u32> = t.accepted_indices().collect();
        assert_eq!(accepted.len(), 2);
        assert!(t.accepts(&BitString::from_pattern("110").unwrap()).unwrap());
        assert!(t.accepts(&BitString::from_pattern("111").unwrap()).unwrap());

        // Acceptance set is exactly the upset of y.
        for n in [4u32, 6, 8] {
            let y = BitString::from_index(n, 0b1010 & ((1 << n) - 1)).unwrap();
            let t = upset_term(&y);
            let mut count = 0u64;
            for idx in 0..1usize << n {
                let x = BitString::from_index(n, idx).unwrap();
                let expect = y.below(&x);
                assert_eq!(t.accepts(&x).unwrap(), expect);
                count += expect as u64;
            }
            assert_eq!(count, 1 << (n - y.weight()));
            assert_eq!(t.accept_count(), count);
        }
    }

    #[test]
    fn dnf_file_round_trip() {
        let mut d = Dnf::new(3).unwrap();
        d.push(Term::from_pattern("1-0").unwrap()).unwrap();
        d.push(Term::from_pattern("011").unwrap()).unwrap();
        // Duplicate on purpose; the format must preserve it.
        d.push(Term::from_pattern("1-0").unwrap()).unwrap();
        let s = d.to_file_string();
        assert_eq!(s, "n=3 terms=3\n1-0\n011\n1-0\n");
        assert_eq!(Dnf::from_file_str(&s).unwrap(), d);

        assert!(Dnf::from_file_str("n=3 terms=2\n1-0\n").is_err());
        assert!(Dnf::from_file_str("n=3 terms=1\n1-2\n").is_err());
        assert!(Dnf::from_file_str("terms=1 n=3\n1-0\n").is_err());
    }
}
