//! The separation map between `m`-AP-partitions and `m'`-AP-partitions of
//! the same type.
//!
//! Heads are read in the cyclic order anchored at a head of maximal g-value
//! (the starting point). Block `i` of the output has the same length as
//! block `i` of the input and is headed by the smallest element, in that
//! order, not yet covered by earlier output blocks. Running the map with the
//! differences swapped inverts it.

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::{APBlock, APPartition, CycleElement};
use crate::ptype::{check_condition, required_gap};

/// A head together with its g-value.
///
/// `g` counts the singleton blocks strictly after the nearest non-singleton
/// head found walking counterclockwise from `head`, and strictly before `head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeadProfile {
    pub head: CycleElement,
    pub is_singleton: bool,
    pub g: usize,
}

/// The linear order `origin < origin+1 < ... < origin-1` on `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelativeOrder {
    origin: CycleElement,
    n: usize,
}

impl RelativeOrder {
    pub fn new(origin: CycleElement, n: usize) -> Self {
        RelativeOrder { origin, n }
    }

    pub fn origin(&self) -> CycleElement {
        self.origin
    }

    /// `(x - origin) mod n`.
    pub fn rank(&self, x: CycleElement) -> usize {
        x.distance_from(self.origin, self.n)
    }

    pub fn element_at(&self, rank: usize) -> CycleElement {
        self.origin.forward(rank, self.n)
    }
}

/// One step of the construction: the source block and the block built for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationStep {
    pub source_head: CycleElement,
    pub len: usize,
    pub new_head: CycleElement,
    pub elements: Vec<CycleElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationTrace {
    pub start: CycleElement,
    pub from_difference: usize,
    pub to_difference: usize,
    pub steps: Vec<SeparationStep>,
}

impl fmt::Display for SeparationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "start {} (difference {} -> {})",
            self.start, self.from_difference, self.to_difference
        )?;
        for (i, s) in self.steps.iter().enumerate() {
            let elems: Vec<String> = s.elements.iter().map(|e| e.to_string()).collect();
            writeln!(
                f,
                "step {}: head {} (length {}) -> head {}: ({})",
                i + 1,
                s.source_head,
                s.len,
                s.new_head,
                elems.join(",")
            )?;
        }
        Ok(())
    }
}

fn require_mixed(p: &APPartition) -> Result<()> {
    let t = p.type_of()?;
    if !t.is_mixed() {
        return Err(Error::UnsupportedType(t));
    }
    Ok(())
}

/// g-values of every head, by increasing head.
pub fn head_profiles(p: &APPartition) -> Result<Vec<HeadProfile>> {
    require_mixed(p)?;
    let n = p.n();
    let mut singleton = vec![false; n];
    let mut long_head = vec![false; n];
    for b in p.blocks() {
        if b.is_singleton() {
            singleton[b.head.index()] = true;
        } else {
            long_head[b.head.index()] = true;
        }
    }
    let profiles = p
        .blocks()
        .iter()
        .map(|b| {
            let mut g = 0;
            let mut e = b.head.backward(1, n);
            while !long_head[e.index()] {
                if singleton[e.index()] {
                    g += 1;
                }
                e = e.backward(1, n);
            }
            HeadProfile {
                head: b.head,
                is_singleton: b.is_singleton(),
                g,
            }
        })
        .collect();
    Ok(profiles)
}

/// Heads attaining the maximal g-value, by increasing label.
pub fn starting_points(p: &APPartition) -> Result<Vec<CycleElement>> {
    let profiles = head_profiles(p)?;
    let max = profiles.iter().map(|h| h.g).max().unwrap_or(0);
    let starts: Vec<&HeadProfile> = profiles.iter().filter(|h| h.g == max).collect();
    if let Some(bad) = starts.iter().find(|h| h.is_singleton) {
        return Err(Error::InvariantViolation(format!(
            "singleton {} attains the maximal g-value {max} in {p}",
            bad.head
        )));
    }
    Ok(starts.into_iter().map(|h| h.head).collect())
}

/// The separation map to difference `m_prime`, anchored at the smallest-label
/// starting point.
pub fn separate(p: &APPartition, m_prime: usize) -> Result<APPartition> {
    let start = starting_points(p)?[0];
    separate_from(p, m_prime, start)
}

/// The separation map anchored at `start`, which must be a starting point.
pub fn separate_from(p: &APPartition, m_prime: usize, start: CycleElement) -> Result<APPartition> {
    separate_traced(p, m_prime, start).map(|(q, _)| q)
}

/// [`separate_from`] plus a step-by-step record of the construction.
pub fn separate_traced(
    p: &APPartition,
    m_prime: usize,
    start: CycleElement,
) -> Result<(APPartition, SeparationTrace)> {
    let t = p.type_of()?;
    let m = p.difference();
    if !check_condition(&t, m, m_prime)? {
        return Err(Error::ConditionViolated {
            k1: t.singletons(),
            nonsingletons: t.nonsingletons(),
            max_difference: m.max(m_prime),
            max_size: t.max_size(),
            ptype: t,
        });
    }
    let profiles = head_profiles(p)?;
    let max_g = profiles.iter().map(|h| h.g).max().unwrap_or(0);
    let starts = starting_points(p)?;
    if !starts.contains(&start) {
        return Err(Error::InvalidStart {
            start: start.get(),
            maximal: starts.iter().map(|s| s.get()).collect(),
        });
    }
    let gap = required_gap(&t, m, m_prime);
    if max_g < gap {
        return Err(Error::InvariantViolation(format!(
            "maximal g-value {max_g} is below the guaranteed {gap} for {p}"
        )));
    }

    let n = p.n();
    let order = RelativeOrder::new(start, n);
    let mut source: Vec<APBlock> = p.blocks().to_vec();
    source.sort_by_key(|b| order.rank(b.head));

    let mut covered = vec![false; n];
    let mut cursor = 0usize;
    let mut trace = SeparationTrace {
        start,
        from_difference: m,
        to_difference: m_prime,
        steps: Vec::with_capacity(source.len()),
    };
    let mut out = Vec::with_capacity(source.len());
    for b in &source {
        while cursor < n && covered[order.element_at(cursor).index()] {
            cursor += 1;
        }
        if cursor == n {
            return Err(dump("ran out of uncovered elements", p, m_prime, &trace));
        }
        let new_head = order.element_at(cursor);
        if let Some(prev) = trace.steps.last() {
            if order.rank(prev.new_head) >= cursor {
                return Err(dump("generated heads are not increasing", p, m_prime, &trace));
            }
        }
        let block = APBlock::new(new_head, b.len);
        let elements = block.elements(n, m_prime).map_err(|_| {
            let what = format!("block ({new_head}:{}) overlaps itself", b.len);
            dump(&what, p, m_prime, &trace)
        })?;
        if let Some(e) = elements.iter().find(|e| covered[e.index()]) {
            let what = format!("block ({new_head}:{}) hits covered element {e}", b.len);
            return Err(dump(&what, p, m_prime, &trace));
        }
        for e in &elements {
            covered[e.index()] = true;
        }
        trace.steps.push(SeparationStep {
            source_head: b.head,
            len: b.len,
            new_head,
            elements,
        });
        out.push(block);
    }
    let q = APPartition::try_new(n, m_prime, out)
        .map_err(|e| dump(&format!("output is not a partition: {e}"), p, m_prime, &trace))?;
    Ok((q, trace))
}

fn dump(what: &str, p: &APPartition, m_prime: usize, trace: &SeparationTrace) -> Error {
    Error::InvariantViolation(format!(
        "separation of {p} to difference {m_prime}: {what}\n{trace}"
    ))
}

/// Checks that mapping to `m_prime` and back returns `p`.
///
/// Also checks that the starting point used for `p` is again a starting point
/// of the image, failing with an invariant violation otherwise.
pub fn verify_roundtrip(p: &APPartition, m_prime: usize) -> Result<bool> {
    let start = starting_points(p)?[0];
    let image = separate_from(p, m_prime, start)?;
    let image_starts = starting_points(&image)?;
    if !image_starts.contains(&start) {
        return Err(Error::InvariantViolation(format!(
            "head {start} is a starting point of {p} but not of its image {image}"
        )));
    }
    let back = separate(&image, p.difference())?;
    Ok(&back == p)
}
