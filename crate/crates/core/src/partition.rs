//! Elements of `Z_n`, arithmetic-progression blocks and partitions of the
//! cycle into blocks of one common difference.
//!
//! Elements are written `1..=n`; residue `0` is represented by `n`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ptype::PartitionType;

/// An element of `Z_n`, stored as its representative in `1..=n`.
///
/// The modulus is carried by whatever structure holds the element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleElement(usize);

impl CycleElement {
    /// Returns `None` unless `1 <= value <= n`.
    pub fn new(value: usize, n: usize) -> Option<Self> {
        (1..=n).contains(&value).then_some(CycleElement(value))
    }

    /// Reduces an arbitrary integer modulo `n`, writing residue 0 as `n`.
    pub fn reduce(value: i64, n: usize) -> Self {
        assert!(n >= 1, "modulus must be positive");
        let r = value.rem_euclid(n as i64) as usize;
        CycleElement(if r == 0 { n } else { r })
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Zero-based index, `value - 1`.
    pub fn index(self) -> usize {
        self.0 - 1
    }

    /// `self + delta (mod n)`.
    pub fn forward(self, delta: usize, n: usize) -> Self {
        let r = (self.0 - 1 + delta % n) % n;
        CycleElement(r + 1)
    }

    /// `self - delta (mod n)`.
    pub fn backward(self, delta: usize, n: usize) -> Self {
        let r = (self.0 - 1 + n - delta % n) % n;
        CycleElement(r + 1)
    }

    /// Directed distance from `from` to `self` on the cycle, in `0..n`.
    pub fn distance_from(self, from: CycleElement, n: usize) -> usize {
        (self.0 + n - from.0) % n
    }
}

impl fmt::Display for CycleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An AP-block `(head, head+m, ..., head+(len-1)m) mod n`.
///
/// The difference `m` belongs to the enclosing partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct APBlock {
    pub head: CycleElement,
    pub len: usize,
}

impl APBlock {
    pub fn new(head: CycleElement, len: usize) -> Self {
        APBlock { head, len }
    }

    pub fn is_singleton(&self) -> bool {
        self.len == 1
    }

    /// The block's elements in sequence order. Does not check for overlap.
    pub fn sequence(&self, n: usize, m: usize) -> impl Iterator<Item = CycleElement> {
        let head = self.head;
        (0..self.len).map(move |j| head.forward(j * m % n, n))
    }

    /// Sequence order, or an error if the progression revisits an element.
    pub fn elements(&self, n: usize, m: usize) -> Result<Vec<CycleElement>> {
        let overlap = || Error::SelfOverlappingBlock {
            head: self.head.get(),
            len: self.len,
            n,
            m,
        };
        if self.len == 0 || self.len > n || self.head.get() > n {
            return Err(overlap());
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(self.len);
        for e in self.sequence(n, m) {
            if std::mem::replace(&mut seen[e.index()], true) {
                return Err(overlap());
            }
            out.push(e);
        }
        Ok(out)
    }
}

impl fmt::Display for APBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.head, self.len)
    }
}

/// The set `{head + j*m mod n : 0 <= j < len}`.
pub fn underlying_set(block: APBlock, n: usize, m: usize) -> Result<BTreeSet<CycleElement>> {
    Ok(block.elements(n, m)?.into_iter().collect())
}

/// Every block of difference `m` whose underlying set is `set`, by increasing head.
///
/// An empty result means `set` is not an `m`-AP-block of `Z_n`. More than one
/// result happens exactly when `set` is a whole coset of the subgroup generated
/// by `m`, i.e. `|set| = n / gcd(n, m) >= 2`.
pub fn block_from_set(set: &BTreeSet<CycleElement>, n: usize, m: usize) -> Vec<APBlock> {
    if set.is_empty() || set.iter().any(|e| e.get() == 0 || e.get() > n) {
        return Vec::new();
    }
    set.iter()
        .map(|&head| APBlock::new(head, set.len()))
        .filter(|b| matches!(underlying_set(*b, n, m), Ok(s) if &s == set))
        .collect()
}

/// Why a candidate partition is not an AP-partition of `Z_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyCycle,
    ZeroDifference,
    HeadOutOfRange { head: usize },
    ZeroLength { head: usize },
    SelfOverlap { head: usize, len: usize },
    Coverage {
        duplicated: Option<usize>,
        missing: Option<usize>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyCycle => write!(f, "cycle size must be at least 1"),
            Violation::ZeroDifference => write!(f, "difference must be at least 1"),
            Violation::HeadOutOfRange { head } => write!(f, "head {head} is out of range"),
            Violation::ZeroLength { head } => write!(f, "block with head {head} has length 0"),
            Violation::SelfOverlap { head, len } => {
                write!(f, "block ({head}:{len}) revisits an element")
            }
            Violation::Coverage { duplicated, missing } => {
                let mut parts = Vec::new();
                if let Some(d) = duplicated {
                    parts.push(format!("element {d} covered twice"));
                }
                if let Some(x) = missing {
                    parts.push(format!("element {x} uncovered"));
                }
                write!(f, "{}", parts.join(", "))
            }
        }
    }
}

/// A set of blocks of common difference `m`, stored in increasing head order.
///
/// Construction through [`APPartition::try_new`] guarantees validity;
/// [`APPartition::new_unchecked`] exists so invalid candidates can be reported
/// on by [`validate_partition`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct APPartition {
    n: usize,
    difference: usize,
    blocks: Vec<APBlock>,
}

impl APPartition {
    pub fn new_unchecked(n: usize, difference: usize, mut blocks: Vec<APBlock>) -> Self {
        blocks.sort();
        APPartition {
            n,
            difference,
            blocks,
        }
    }

    pub fn try_new(n: usize, difference: usize, blocks: Vec<APBlock>) -> Result<Self> {
        let p = Self::new_unchecked(n, difference, blocks);
        validate_partition(&p).map_err(Error::InvalidPartition)?;
        Ok(p)
    }

    /// Convenience constructor from `(head, len)` pairs.
    pub fn from_pairs(n: usize, difference: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut blocks = Vec::with_capacity(pairs.len());
        for &(h, len) in pairs {
            let head = CycleElement::new(h, n).ok_or(Error::InvalidPartition(
                Violation::HeadOutOfRange { head: h },
            ))?;
            blocks.push(APBlock::new(head, len));
        }
        Self::try_new(n, difference, blocks)
    }

    /// The given blocks plus a singleton for every element they leave uncovered.
    pub fn with_singletons(n: usize, difference: usize, blocks: Vec<APBlock>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition(Violation::EmptyCycle));
        }
        let mut covered = vec![false; n];
        for b in &blocks {
            for e in b.elements(n, difference)? {
                if std::mem::replace(&mut covered[e.index()], true) {
                    return Err(Error::InvalidPartition(Violation::Coverage {
                        duplicated: Some(e.get()),
                        missing: None,
                    }));
                }
            }
        }
        let mut all = blocks;
        all.extend(
            (1..=n)
                .filter(|&x| !covered[x - 1])
                .map(|x| APBlock::new(CycleElement(x), 1)),
        );
        Self::try_new(n, difference, all)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn difference(&self) -> usize {
        self.difference
    }

    pub fn blocks(&self) -> &[APBlock] {
        &self.blocks
    }

    pub fn heads(&self) -> impl Iterator<Item = CycleElement> + '_ {
        self.blocks.iter().map(|b| b.head)
    }

    pub fn block_with_head(&self, head: CycleElement) -> Option<&APBlock> {
        self.blocks
            .binary_search_by_key(&head, |b| b.head)
            .ok()
            .map(|i| &self.blocks[i])
    }

    /// Each block's elements in sequence order.
    pub fn sequences(&self) -> Vec<Vec<CycleElement>> {
        self.blocks
            .iter()
            .map(|b| b.sequence(self.n, self.difference).collect())
            .collect()
    }

    /// Underlying set partition, as sorted element lists in sorted order.
    pub fn underlying_partition(&self) -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = self
            .sequences()
            .into_iter()
            .map(|s| {
                let mut v: Vec<usize> = s.into_iter().map(CycleElement::get).collect();
                v.sort_unstable();
                v
            })
            .collect();
        sets.sort();
        sets
    }

    /// Adds `c` to every head.
    pub fn rotate(&self, c: usize) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| APBlock::new(b.head.forward(c, self.n), b.len))
            .collect();
        Self::new_unchecked(self.n, self.difference, blocks)
    }

    pub fn type_of(&self) -> Result<PartitionType> {
        type_of(self)
    }

    /// Paper-style sequence notation `(7,9,11),(8),...` with blocks in the given head order.
    pub fn sequence_notation(&self, order: &[CycleElement]) -> String {
        order
            .iter()
            .filter_map(|&h| self.block_with_head(h))
            .map(|b| {
                let items: Vec<String> = b
                    .sequence(self.n, self.difference)
                    .map(|e| e.to_string())
                    .collect();
                format!("({})", items.join(","))
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Checks that the blocks' underlying sets partition `{1, ..., n}` exactly.
pub fn validate_partition(p: &APPartition) -> std::result::Result<(), Violation> {
    let n = p.n;
    if n == 0 {
        return Err(Violation::EmptyCycle);
    }
    if p.difference == 0 {
        return Err(Violation::ZeroDifference);
    }
    let mut cover = vec![0usize; n];
    for b in &p.blocks {
        let head = b.head.get();
        if head == 0 || head > n {
            return Err(Violation::HeadOutOfRange { head });
        }
        if b.len == 0 {
            return Err(Violation::ZeroLength { head });
        }
        if b.elements(n, p.difference).is_err() {
            return Err(Violation::SelfOverlap { head, len: b.len });
        }
        for e in b.sequence(n, p.difference) {
            cover[e.index()] += 1;
        }
    }
    let duplicated = cover.iter().position(|&c| c > 1).map(|i| i + 1);
    let missing = cover.iter().position(|&c| c == 0).map(|i| i + 1);
    if duplicated.is_some() || missing.is_some() {
        return Err(Violation::Coverage { duplicated, missing });
    }
    Ok(())
}

/// The multiset of block lengths.
pub fn type_of(p: &APPartition) -> Result<PartitionType> {
    validate_partition(p).map_err(Error::InvalidPartition)?;
    PartitionType::from_lengths(p.blocks.iter().map(|b| b.len))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> BTreeSet<CycleElement> {
        xs.iter().map(|&x| CycleElement(x)).collect()
    }

    fn sample_m2() -> APPartition {
        APPartition::from_pairs(
            12,
            2,
            &[(7, 3), (8, 1), (10, 2), (1, 1), (2, 3), (3, 1), (5, 1)],
        )
        .unwrap()
    }

    #[test]
    fn reduce_maps_zero_to_n() {
        assert_eq!(CycleElement::reduce(0, 12).get(), 12);
        assert_eq!(CycleElement::reduce(-1, 12).get(), 11);
        assert_eq!(CycleElement::reduce(25, 12).get(), 1);
        assert_eq!(CycleElement(3).backward(5, 12).get(), 10);
        assert_eq!(CycleElement(11).forward(3, 12).get(), 2);
    }

    #[test]
    fn sample_m2_partition_is_valid() {
        let p = sample_m2();
        assert_eq!(validate_partition(&p), Ok(()));
        assert_eq!(p.type_of().unwrap().to_string(), "1^4,2^1,3^2");
    }

    #[test]
    fn single_block_covers_cycle() {
        let p = APPartition::new_unchecked(3, 1, vec![APBlock::new(CycleElement(1), 3)]);
        assert_eq!(validate_partition(&p), Ok(()));
    }

    #[test]
    fn overlap_reports_duplicate_and_missing() {
        let p = APPartition::new_unchecked(
            4,
            1,
            vec![
                APBlock::new(CycleElement(1), 2),
                APBlock::new(CycleElement(2), 2),
            ],
        );
        assert_eq!(
            validate_partition(&p),
            Err(Violation::Coverage {
                duplicated: Some(2),
                missing: Some(4)
            })
        );
    }

    #[test]
    fn type_of_rejects_invalid() {
        let p = APPartition::new_unchecked(4, 1, vec![APBlock::new(CycleElement(1), 2)]);
        assert!(matches!(type_of(&p), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn all_singletons_type() {
        let p = APPartition::with_singletons(5, 1, vec![]).unwrap();
        assert_eq!(p.type_of().unwrap().to_string(), "1^5");
    }

    #[test]
    fn twenty_cycle_dissection_type() {
        let p = APPartition::with_singletons(
            20,
            1,
            vec![
                APBlock::new(CycleElement(5), 2),
                APBlock::new(CycleElement(9), 2),
                APBlock::new(CycleElement(16), 2),
                APBlock::new(CycleElement(12), 3),
                APBlock::new(CycleElement(20), 3),
            ],
        )
        .unwrap();
        assert_eq!(p.type_of().unwrap().to_string(), "1^8,2^3,3^2");
    }

    #[test]
    fn underlying_set_examples() {
        let b = APBlock::new(CycleElement(12), 5);
        assert_eq!(underlying_set(b, 16, 3).unwrap(), set(&[2, 5, 8, 12, 15]));
        assert_eq!(
            underlying_set(APBlock::new(CycleElement(4), 1), 9, 7).unwrap(),
            set(&[4])
        );
        assert_eq!(
            underlying_set(APBlock::new(CycleElement(1), 3), 6, 2).unwrap(),
            set(&[1, 3, 5])
        );
    }

    #[test]
    fn underlying_set_detects_self_overlap() {
        let err = underlying_set(APBlock::new(CycleElement(1), 4), 6, 2).unwrap_err();
        assert!(matches!(err, Error::SelfOverlappingBlock { .. }));
        assert!(underlying_set(APBlock::new(CycleElement(1), 7), 6, 1).is_err());
    }

    #[test]
    fn block_from_set_examples() {
        assert_eq!(
            block_from_set(&set(&[2, 5, 8, 12, 15]), 16, 3),
            vec![APBlock::new(CycleElement(12), 5)]
        );
        assert_eq!(
            block_from_set(&set(&[1, 3]), 4, 2),
            vec![
                APBlock::new(CycleElement(1), 2),
                APBlock::new(CycleElement(3), 2)
            ]
        );
        assert!(block_from_set(&set(&[1, 2, 4]), 6, 1).is_empty());
        assert!(block_from_set(&BTreeSet::new(), 6, 1).is_empty());
    }

    #[test]
    fn coset_with_non_dividing_difference_is_ambiguous() {
        // gcd(6, 4) = 2: {1, 3, 5} is a full coset, so every element can lead.
        assert_eq!(block_from_set(&set(&[1, 3, 5]), 6, 4).len(), 3);
    }

    #[test]
    fn rotation_preserves_type() {
        let p = sample_m2();
        for c in 0..12 {
            let q = p.rotate(c);
            assert_eq!(validate_partition(&q), Ok(()));
            assert_eq!(q.type_of().unwrap(), p.type_of().unwrap());
        }
    }

    #[test]
    fn sequence_notation_follows_given_order() {
        let p = sample_m2();
        let order: Vec<_> = [7, 8, 10, 1, 2, 3, 5].iter().map(|&x| CycleElement(x)).collect();
        assert_eq!(
            p.sequence_notation(&order),
            "(7,9,11),(8),(10,12),(1),(2,4,6),(3),(5)"
        );
    }

    #[test]
    fn sample_m2_is_determined_by_underlying_sets() {
        let p = sample_m2();
        for b in p.blocks() {
            let s = underlying_set(*b, 12, 2).unwrap();
            assert_eq!(block_from_set(&s, 12, 2), vec![*b]);
        }
    }
}
