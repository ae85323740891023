//! Canonical text and JSON forms of an [`APPartition`].
//!
//! Text: `n=<n> m=<m> blocks=(h1:l1)(h2:l2)...` with strictly increasing heads.
//! JSON: `{"n":..,"m":..,"blocks":[{"head":..,"len":..},...]}`, same order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{APBlock, APPartition, CycleElement, Violation};

/// How parsers treat blocks that are not listed in increasing head order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockOrder {
    #[default]
    Strict,
    Normalize,
}

impl fmt::Display for APPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={} blocks=", self.n(), self.difference())?;
        for b in self.blocks() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockRecord {
    pub head: u64,
    pub len: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionRecord {
    pub n: u64,
    pub m: u64,
    pub blocks: Vec<BlockRecord>,
}

impl From<&APPartition> for PartitionRecord {
    fn from(p: &APPartition) -> Self {
        PartitionRecord {
            n: p.n() as u64,
            m: p.difference() as u64,
            blocks: p
                .blocks()
                .iter()
                .map(|b| BlockRecord {
                    head: b.head.get() as u64,
                    len: b.len as u64,
                })
                .collect(),
        }
    }
}

impl PartitionRecord {
    pub fn into_partition(self, order: BlockOrder) -> Result<APPartition> {
        let n = to_usize(self.n)?;
        let m = to_usize(self.m)?;
        let pairs = self
            .blocks
            .iter()
            .map(|b| Ok((to_usize(b.head)?, to_usize(b.len)?)))
            .collect::<Result<Vec<_>>>()?;
        build(n, m, &pairs, order)
    }
}

fn to_usize(v: u64) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::Parse(format!("{v} does not fit in usize")))
}

fn build(n: usize, m: usize, pairs: &[(usize, usize)], order: BlockOrder) -> Result<APPartition> {
    let increasing = pairs.windows(2).all(|w| w[0].0 < w[1].0);
    if !increasing && order == BlockOrder::Strict {
        return Err(Error::NonCanonicalOrder);
    }
    let mut blocks = Vec::with_capacity(pairs.len());
    for &(h, len) in pairs {
        let head = CycleElement::new(h, n)
            .ok_or(Error::InvalidPartition(Violation::HeadOutOfRange { head: h }))?;
        blocks.push(APBlock::new(head, len));
    }
    APPartition::try_new(n, m, blocks)
}

pub fn to_text(p: &APPartition) -> String {
    p.to_string()
}

pub fn to_json(p: &APPartition) -> String {
    serde_json::to_string(&PartitionRecord::from(p)).expect("record serializes")
}

fn field<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    let token = token.ok_or_else(|| Error::Parse(format!("missing `{key}=`")))?;
    token
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected `{key}=...`, found `{token}`")))
}

fn number(s: &str, what: &str) -> Result<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("{what} `{s}` is not a decimal integer")));
    }
    s.parse()
        .map_err(|_| Error::Parse(format!("{what} `{s}` is out of range")))
}

pub fn from_text(s: &str, order: BlockOrder) -> Result<APPartition> {
    let mut tokens = s.split_whitespace();
    let n = number(field(tokens.next(), "n")?, "n")?;
    let m = number(field(tokens.next(), "m")?, "m")?;
    let mut rest = field(tokens.next(), "blocks")?;
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse(format!("unexpected trailing `{extra}`")));
    }
    let mut pairs = Vec::new();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected `(` at `{rest}`")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::Parse("unterminated block".into()))?;
        let (h, l) = body[..close]
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("block `{}` is not head:len", &body[..close])))?;
        pairs.push((number(h, "head")?, number(l, "length")?));
        rest = &body[close + 1..];
    }
    build(n, m, &pairs, order)
}

pub fn from_json(s: &str, order: BlockOrder) -> Result<APPartition> {
    let rec: PartitionRecord =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("json: {e}")))?;
    rec.into_partition(order)
}

/// Accepts either form, choosing JSON when the input starts with `{`.
pub fn parse_partition(s: &str, order: BlockOrder) -> Result<APPartition> {
    if s.trim_start().starts_with('{') {
        from_json(s, order)
    } else {
        from_text(s.trim(), order)
    }
}
