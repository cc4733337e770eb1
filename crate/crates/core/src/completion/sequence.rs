//! Finitely described infinite sequences.

use serde::{Deserialize, Serialize};

use super::interval::{Interval, Iv};
use super::Completion;
use crate::error::{Error, Result};
use crate::semigroup::add_points;

/// `preamble` followed by `period` repeated forever. `period` is non-empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceDescriptor<T> {
    #[serde(default = "Vec::new")]
    pub preamble: Vec<T>,
    pub period: Vec<T>,
}

impl<T> SequenceDescriptor<T> {
    pub fn new(preamble: Vec<T>, period: Vec<T>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Shape("a sequence needs a non-empty period".into()));
        }
        Ok(SequenceDescriptor { preamble, period })
    }

    pub fn constant(value: T) -> Self {
        SequenceDescriptor {
            preamble: Vec::new(),
            period: vec![value],
        }
    }

    /// Term `i`, counting from 0.
    pub fn get(&self, i: usize) -> &T {
        if i < self.preamble.len() {
            &self.preamble[i]
        } else {
            &self.period[(i - self.preamble.len()) % self.period.len()]
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.period.is_empty() {
            return Err(Error::Shape("a sequence needs a non-empty period".into()));
        }
        Ok(())
    }

    /// Number of leading terms after which the sequence repeats with the
    /// period of `other` as well: indices beyond this add nothing new to a
    /// pairwise check of the two sequences.
    pub(crate) fn joint_span<U>(&self, other: &SequenceDescriptor<U>) -> usize {
        let pre = self.preamble.len().max(other.preamble.len());
        pre + num::integer::lcm(self.period.len(), other.period.len())
    }

    /// Drops the first `n` terms.
    pub fn skip(&self, n: usize) -> Self
    where
        T: Clone,
    {
        if n <= self.preamble.len() {
            return SequenceDescriptor {
                preamble: self.preamble[n..].to_vec(),
                period: self.period.clone(),
            };
        }
        let shift = (n - self.preamble.len()) % self.period.len();
        let mut period = self.period[shift..].to_vec();
        period.extend_from_slice(&self.period[..shift]);
        SequenceDescriptor {
            preamble: Vec::new(),
            period,
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> Result<U>) -> Result<SequenceDescriptor<U>> {
        Ok(SequenceDescriptor {
            preamble: self.preamble.iter().map(&mut f).collect::<Result<_>>()?,
            period: self.period.iter().map(&mut f).collect::<Result<_>>()?,
        })
    }
}

/// An increasing sequence of intervals: `preamble`, then
/// `last + increment`, `last + 2·increment`, ...
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalChain {
    pub preamble: Vec<Interval>,
    pub increment: Interval,
}

impl Completion {
    /// Supremum of an increasing chain of intervals.
    ///
    /// Writing `[0, a]` as a chain with zero increment, the union of
    /// `(g, u) + k·(h, v)` over `k` is the chain with base `g` and increment
    /// `h + u + v`.
    pub fn sup_chain(&self, chain: &IntervalChain) -> Result<Interval> {
        let mut last: Option<Iv> = None;
        for (idx, i) in chain.preamble.iter().enumerate() {
            let iv = self.lower(i)?;
            if let Some(prev) = &last {
                if self.iv_include(prev, &iv)?.is_none() {
                    return Err(Error::NotIncreasing(idx));
                }
            }
            last = Some(iv);
        }
        let start = last.unwrap_or_else(|| self.principal(vec![0; self.model.dimension()]));
        let inc = self.lower(&chain.increment)?;
        let d = self.model.dimension();
        let sup = match (start.parts(d), inc.parts(d)) {
            (Some((g, u)), Some((h, v))) => {
                self.normalize(g, add_points(&add_points(&h, &u)?, &v)?)?
            }
            _ => Iv::Top,
        };
        Ok(self.lift(&sup))
    }
}
