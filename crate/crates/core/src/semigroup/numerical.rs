//! Numerical semigroups: membership through the Apéry set of the smallest
//! generator, which also yields the Frobenius number.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num::integer::gcd;
use serde::Serialize;

/// Precomputed arithmetic of `<g_1, ..., g_r>`.
#[derive(Debug)]
pub(crate) struct NumericalData {
    /// gcd of the generators; 0 for the trivial semigroup {0}.
    pub gcd: u64,
    /// Smallest generator of the gcd-reduced semigroup.
    multiplicity: u64,
    /// `apery[r]` is the least reduced member congruent to `r` mod `multiplicity`.
    apery: Vec<u64>,
}

impl NumericalData {
    pub fn new(generators: &[u64]) -> Self {
        let g = generators.iter().fold(0, |acc, &x| gcd(acc, x));
        if g == 0 {
            return NumericalData {
                gcd: 0,
                multiplicity: 1,
                apery: vec![0],
            };
        }
        let reduced: Vec<u64> = generators.iter().map(|x| x / g).collect();
        let m = *reduced.iter().min().expect("non-empty generators");
        let mut dist = vec![u64::MAX; m as usize];
        dist[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, 0u64)));
        while let Some(Reverse((d, r))) = heap.pop() {
            if d > dist[r as usize] {
                continue;
            }
            for &step in &reduced {
                let next = ((r + step % m) % m) as usize;
                let nd = d + step;
                if nd < dist[next] {
                    dist[next] = nd;
                    heap.push(Reverse((nd, next as u64)));
                }
            }
        }
        NumericalData {
            gcd: g,
            multiplicity: m,
            apery: dist,
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        if self.gcd == 0 {
            return v == 0;
        }
        if !v.is_multiple_of(self.gcd) {
            return false;
        }
        let w = v / self.gcd;
        w >= self.apery[(w % self.multiplicity) as usize]
    }

    /// Frobenius number of the gcd-reduced semigroup; `-1` when it has no gaps.
    fn reduced_frobenius(&self) -> i128 {
        let max = *self.apery.iter().max().expect("apery set is non-empty");
        max as i128 - self.multiplicity as i128
    }

    pub fn frobenius(&self) -> Frobenius {
        if self.gcd != 1 {
            return Frobenius::InfiniteGaps { gcd: self.gcd };
        }
        match self.reduced_frobenius() {
            f if f < 0 => Frobenius::NoGaps,
            f => Frobenius::Number { value: f as u64 },
        }
    }

    /// Every multiple of the gcd at or above this value is a member.
    pub fn conductor(&self) -> u64 {
        if self.gcd == 0 {
            return 0;
        }
        self.gcd * (self.reduced_frobenius() + 1) as u64
    }
}

/// Outcome of a Frobenius-number query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Frobenius {
    /// The largest integer outside the semigroup.
    Number { value: u64 },
    /// The generators share a factor, so infinitely many integers are missing.
    InfiniteGaps { gcd: u64 },
    /// The semigroup is all of Z+.
    NoGaps,
}

impl Frobenius {
    pub fn value(&self) -> Option<u64> {
        match self {
            Frobenius::Number { value } => Some(*value),
            _ => None,
        }
    }
}
