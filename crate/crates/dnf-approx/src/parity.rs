//! Exact parity DNFs and the block-split parity approximator.
//!
//! The exact DNF for parity on m coordinates lists all 2^(m-1) odd-weight
//! sign patterns. The approximator partitions the n coordinates into b
//! balanced blocks and ORs the per-block exact DNFs; it is one-sided (never
//! wrong when parity is 1) and errs exactly when a nonzero even number of
//! blocks have odd parity, which happens on a 1/2 - 2^-b fraction of inputs.

use crate::boolfn::parity_table;
use crate::dnf::{closeness, ApproxReport, Dnf, ParamRecord, Term};
use crate::error::{Error, Result};

/// A partition of {1..n} into b disjoint blocks with sizes differing by at
/// most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    n: u32,
    blocks: Vec<Vec<u32>>,
}

impl BlockPartition {
    /// Deterministic balanced partition: contiguous coordinate runs, the
    /// remainder handed one extra coordinate per leading block.
    pub fn balanced(n: u32, b: u32) -> Result<Self> {
        if b == 0 || b > n {
            return Err(Error::BlockCountOutOfRange { b, n });
        }
        let base = n / b;
        let extra = n % b;
        let mut blocks = Vec::with_capacity(b as usize);
        let mut next = 1u32;
        for j in 0..b {
            let len = base + u32::from(j < extra);
            blocks.push((next..next + len).collect());
            next += len;
        }
        Ok(BlockPartition { n, blocks })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn b(&self) -> u32 {
        self.blocks.len() as u32
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }
}

/// The exact ("trivial") parity DNF on a coordinate subset: one width-m term
/// per odd-weight sign pattern, 2^(m-1) terms total. Evaluates to the parity
/// of those coordinates on every input.
pub fn parity_trivial_dnf(n: u32, coords: &[u32]) -> Result<Dnf> {
    if coords.is_empty() {
        return Err(Error::EmptyCoordinateSet);
    }
    let mut d = Dnf::new(n)?;
    let mut mask = 0u32;
    for &c in coords {
        if c == 0 || c > n {
            return Err(Error::LevelOutOfRange { k: c, n });
        }
        mask |= 1 << (c - 1);
    }
    if mask.count_ones() as usize != coords.len() {
        return Err(Error::Parse {
            what: "coordinate set",
            detail: "repeated coordinate".into(),
        });
    }
    let m = coords.len() as u32;
    for pattern in 0..1u32 << m {
        if pattern.count_ones() % 2 == 1 {
            let mut values = 0u32;
            for (j, &c) in coords.iter().enumerate() {
                if pattern >> j & 1 == 1 {
                    values |= 1 << (c - 1);
                }
            }
            d.push(Term::new(n, mask, values)?)?;
        }
    }
    Ok(d)
}

/// OR of exact parity DNFs over the blocks of a balanced b-partition.
/// For b | n: size b * 2^(n/b - 1), width n/b.
pub fn parity_block_approx(n: u32, b: u32) -> Result<Dnf> {
    let partition = BlockPartition::balanced(n, b)?;
    let mut d = Dnf::new(n)?;
    for block in partition.blocks() {
        for term in parity_trivial_dnf(n, block)?.terms() {
            d.push(*term)?;
        }
    }
    Ok(d)
}

/// Exact error fraction of the b-block approximator against parity:
/// 1/2 - 2^-b, the probability that a nonzero even number of blocks have odd
/// parity. Partition-independent as long as every block is nonempty.
pub fn block_error(b: u32) -> Result<f64> {
    if b == 0 {
        return Err(Error::BlockCountOutOfRange { b, n: 0 });
    }
    // Dyadic, so exact in f64 for any plausible b.
    Ok(0.5 - (-(b as f64)).exp2())
}

/// Block count whose error 1/2 - 2^-b best matches a target error fraction
/// eps in (0, 1/2).
pub fn blocks_for_epsilon(eps: f64) -> Result<u32> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::EpsilonOutOfRange {
            value: eps,
            expected: "(0, 1/2)",
        });
    }
    let b = (1.0 / (0.5 - eps)).log2().round();
    Ok((b as u32).max(1))
}

/// Build the b-block approximator and measure it exhaustively.
pub fn parity_approx(n: u32, b: u32) -> Result<(ApproxReport, Dnf)> {
    let d = parity_block_approx(n, b)?;
    let target = parity_table(n)?;
    let table = d.to_table()?;
    let error = closeness(&table, &target)?;
    let len = target.len() as f64;
    // One-sided: the approximator can only be wrong where parity is 0.
    let zero_side = table.and_not_count(&target)? as f64 / len;
    let one_side = target.and_not_count(&table)? as f64 / len;
    let report = ApproxReport {
        construction: "parity".into(),
        n,
        epsilon: block_error(b)?,
        error,
        error_zero_side: zero_side,
        error_one_side: one_side,
        size: d.size(),
        width: d.width(),
        params: ParamRecord {
            b: Some(b),
            ..ParamRecord::default()
        },
        master_seed: 0,
        trial_seed: 0,
        trial: 0,
        error_method: "exhaustive".into(),
        error_half_width: 0.0,
        notes: Vec::new(),
    };
    Ok((report, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::BitString;

    #[test]
    fn balanced_partition_shapes() {
        let p = BlockPartition::balanced(10, 3).unwrap();
        assert_eq!(
            p.blocks(),
            &[vec![1, 2, 3, 4], vec![5, 6, 7], vec![8, 9, 10]]
        );
        let p = BlockPartition::balanced(8, 2).unwrap();
        assert_eq!(p.blocks(), &[vec![1, 2, 3, 4], vec![5, 6, 7, 8]]);
        assert!(BlockPartition::balanced(4, 5).is_err());
        assert!(BlockPartition::balanced(4, 0).is_err());
    }

    #[test]
    fn trivial_dnf_small_cases() {
        let d = parity_trivial_dnf(3, &[2]).unwrap();
        assert_eq!(d.size(), 1);
        assert_eq!(d.terms()[0].pattern(), "-1-");

        let d = parity_trivial_dnf(2, &[1, 2]).unwrap();
        assert_eq!(d.size(), 2);
        let pats: Vec<String> = d.terms().iter().map(|t| t.pattern()).collect();
        assert_eq!(pats, vec!["10", "01"]);

        assert_eq!(parity_trivial_dnf(4, &[]), Err(Error::EmptyCoordinateSet));
    }

    #[test]
    fn trivial_dnf_computes_restricted_parity() {
        // m = 4 over a scattered coordinate set inside n = 6.
        let coords = [1u32, 3, 4, 6];
        let d = parity_trivial_dnf(6, &coords).unwrap();
        assert_eq!(d.size(), 8);
        assert_eq!(d.width(), 4);
        for idx in 0..1usize << 6 {
            let x = BitString::from_index(6, idx).unwrap();
            let par: bool = coords.iter().map(|&c| x.get(c) as u32).sum::<u32>() % 2 == 1;
            assert_eq!(d.eval(&x).unwrap(), par, "idx={idx}");
        }
    }

    #[test]
    fn single_block_is_exact() {
        let n = 8;
        let d = parity_block_approx(n, 1).unwrap();
        assert_eq!(d.size(), 1 << (n - 1));
        assert_eq!(d.to_table().unwrap(), parity_table(n).unwrap());
    }

    #[test]
    fn two_blocks_match_published_numbers() {
        let (report, d) = parity_approx(8, 2).unwrap();
        assert_eq!(d.size(), 16);
        assert_eq!(d.width(), 4);
        assert_eq!(report.error, 0.25);
        assert_eq!(report.error_one_side, 0.0);
        assert_eq!(report.error_zero_side, 0.25);
    }

    #[test]
    fn three_blocks_error_three_eighths() {
        let (report, _) = parity_approx(12, 3).unwrap();
        assert_eq!(report.error, 0.375);
        assert_eq!(block_error(3).unwrap(), 0.375);
    }

    #[test]
    fn block_error_values() {
        assert_eq!(block_error(1).unwrap(), 0.0);
        assert_eq!(block_error(2).unwrap(), 0.25);
        assert_eq!(block_error(5).unwrap(), 15.0 / 32.0);
        assert!(block_error(0).is_err());
    }

    #[test]
    fn block_error_verified_by_pattern_count_at_n10() {
        // Independent oracle: enumerate all inputs at n = 10 and count those
        // where a nonzero even number of blocks have odd parity.
        let n = 10u32;
        for b in 1..=5u32 {
            let partition = BlockPartition::balanced(n, b).unwrap();
            let mut bad = 0u64;
            for idx in 0..1u64 << n {
                let odd_blocks = partition
                    .blocks()
                    .iter()
                    .filter(|block| {
                        block.iter().filter(|&&c| idx >> (c - 1) & 1 == 1).count() % 2 == 1
                    })
                    .count();
                if odd_blocks > 0 && odd_blocks % 2 == 0 {
                    bad += 1;
                }
            }
            let expect = bad as f64 / (1u64 << n) as f64;
            assert_eq!(block_error(b).unwrap(), expect, "b={b}");
        }
    }

    #[test]
    fn one_sided_error_property() {
        // PAR(x)=1 implies approximator(x)=1, for several n and b.
        for (n, b) in [(8u32, 2u32), (9, 3), (12, 4)] {
            let d = parity_block_approx(n, b).unwrap();
            let table = d.to_table().unwrap();
            let par = parity_table(n).unwrap();
            assert!(par.le(&table).unwrap(), "n={n} b={b}");
        }
    }

    #[test]
    fn size_and_width_formulas() {
        for (n, b) in [(8u32, 2u32), (12, 3), (10, 3), (9, 4)] {
            let partition = BlockPartition::balanced(n, b).unwrap();
            let d = parity_block_approx(n, b).unwrap();
            let expect_size: usize = partition
                .blocks()
                .iter()
                .map(|blk| 1usize << (blk.len() - 1))
                .sum();
            let expect_width = partition.blocks().iter().map(Vec::len).max().unwrap() as u32;
            assert_eq!(d.size(), expect_size, "n={n} b={b}");
            assert_eq!(d.width(), expect_width, "n={n} b={b}");
        }
    }

    #[test]
    fn b2_meets_quarter_epsilon_bound() {
        // At eps = 1/4 the two-block instance hits size 2^((1-2eps)n) and
        // width (1-2eps)n exactly.
        for n in [8u32, 12] {
            let d = parity_block_approx(n, 2).unwrap();
            assert_eq!(d.size() as f64, ((1.0 - 2.0 * 0.25) * n as f64).exp2());
            assert_eq!(d.width(), n / 2);
        }
    }

    #[test]
    fn blocks_for_epsilon_round_trip() {
        assert_eq!(blocks_for_epsilon(0.25).unwrap(), 2);
        assert_eq!(blocks_for_epsilon(0.375).unwrap(), 3);
        assert_eq!(blocks_for_epsilon(0.1).unwrap(), 1);
        assert!(blocks_for_epsilon(0.5).is_err());
        assert!(blocks_for_epsilon(0.0).is_err());
    }
}
