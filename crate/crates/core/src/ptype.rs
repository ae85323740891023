//! Partition types `i_1^{k_1} i_2^{k_2} ... i_r^{k_r}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Multiset of block sizes, as `(size, multiplicity)` pairs with strictly
/// increasing sizes and positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionType {
    parts: Vec<(usize, usize)>,
}

impl PartitionType {
    pub fn new(parts: Vec<(usize, usize)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("a type needs at least one part".into()));
        }
        for (idx, &(size, mult)) in parts.iter().enumerate() {
            if size == 0 {
                return Err(Error::InvalidArgument("block sizes must be positive".into()));
            }
            if mult == 0 {
                return Err(Error::InvalidArgument(format!(
                    "size {size} has multiplicity 0"
                )));
            }
            if idx > 0 && parts[idx - 1].0 >= size {
                return Err(Error::InvalidArgument(
                    "sizes must be strictly increasing".into(),
                ));
            }
        }
        Ok(PartitionType { parts })
    }

    pub fn from_lengths(lengths: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut lengths: Vec<usize> = lengths.into_iter().collect();
        lengths.sort_unstable();
        let mut parts: Vec<(usize, usize)> = Vec::new();
        for l in lengths {
            match parts.last_mut() {
                Some((size, mult)) if *size == l => *mult += 1,
                _ => parts.push((l, 1)),
            }
        }
        Self::new(parts)
    }

    /// `1^{n-(p+1)k} (p+1)^k`, the type whose partitions are head selections.
    pub fn spaced(n: usize, p: usize, k: usize) -> Result<Self> {
        let used = (p + 1) * k;
        if used > n || p == 0 {
            return Err(Error::InvalidArgument(format!(
                "no type 1^(n-(p+1)k) (p+1)^k for n={n}, p={p}, k={k}"
            )));
        }
        let mut parts = Vec::new();
        if n > used {
            parts.push((1, n - used));
        }
        if k > 0 {
            parts.push((p + 1, k));
        }
        Self::new(parts)
    }

    /// Every type of the given weight, in reverse-lexicographic order of the
    /// size sequence read largest first.
    pub fn all_of_weight(n: usize) -> Vec<Self> {
        fn rec(rest: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<PartitionType>) {
            if rest == 0 {
                out.push(PartitionType::from_lengths(acc.iter().copied()).unwrap());
                return;
            }
            for s in (1..=max.min(rest)).rev() {
                acc.push(s);
                rec(rest - s, s, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }

    pub fn parts(&self) -> &[(usize, usize)] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().map(|&(s, k)| s * k).sum()
    }

    pub fn block_count(&self) -> usize {
        self.parts.iter().map(|&(_, k)| k).sum()
    }

    /// `k_1`, the number of singleton blocks.
    pub fn singletons(&self) -> usize {
        match self.parts.first() {
            Some(&(1, k)) => k,
            _ => 0,
        }
    }

    pub fn nonsingletons(&self) -> usize {
        self.block_count() - self.singletons()
    }

    /// `i_r`.
    pub fn max_size(&self) -> usize {
        self.parts.last().map_or(0, |&(s, _)| s)
    }

    pub fn contains_size(&self, size: usize) -> bool {
        self.parts.iter().any(|&(s, _)| s == size)
    }

    /// At least one singleton block and at least one longer block.
    pub fn is_mixed(&self) -> bool {
        self.singletons() > 0 && self.parts.len() >= 2
    }

    /// Block lengths in increasing order, one entry per block.
    pub fn lengths(&self) -> Vec<usize> {
        self.parts
            .iter()
            .flat_map(|&(s, k)| std::iter::repeat_n(s, k))
            .collect()
    }
}

/// `ceil(k_1 / (k_2 + ... + k_r)) >= (max{m, m'} - 1)(i_r - 1)`.
///
/// Pass `m_prime = m` for the single-difference form.
pub fn check_condition(t: &PartitionType, m: usize, m_prime: usize) -> Result<bool> {
    if !t.is_mixed() {
        return Err(Error::UnsupportedType(t.clone()));
    }
    if m == 0 || m_prime == 0 {
        return Err(Error::InvalidArgument("differences must be positive".into()));
    }
    Ok(required_gap(t, m, m_prime) <= t.singletons().div_ceil(t.nonsingletons()))
}

/// Right-hand side `(max{m, m'} - 1)(i_r - 1)`.
pub(crate) fn required_gap(t: &PartitionType, m: usize, m_prime: usize) -> usize {
    (m.max(m_prime) - 1) * (t.max_size() - 1)
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.parts.iter().map(|(s, k)| format!("{s}^{k}")).collect();
        write!(f, "{}", terms.join(","))
    }
}

impl FromStr for PartitionType {
    type Err = Error;

    /// Comma-separated `size^mult` terms with strictly increasing sizes.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for term in s.split(',') {
            let term = term.trim();
            let (size, mult) = term
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("type term `{term}` is not size^mult")))?;
            let size: usize = size
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad size in `{term}`")))?;
            let mult: usize = mult
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity in `{term}`")))?;
            parts.push((size, mult));
        }
        PartitionType::new(parts).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::Parse(msg),
            other => other,
        })
    }
}
