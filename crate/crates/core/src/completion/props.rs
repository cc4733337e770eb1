//! Order-theoretic properties of the completion and the ω-comparison checks.

use std::collections::HashSet;

use serde::Serialize;

use super::interval::{InclusionCertificate, Interval, Iv};
use super::sequence::{IntervalChain, SequenceDescriptor};
use super::Completion;
use crate::comparison::{sdom_least_k_points, Status};
use crate::error::{Error, Result};
use crate::semigroup::{add_points, Element, OrderCertificate, SemigroupModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LargestElement {
    pub top: Interval,
    /// A full element `w`; the top is the supremum of `k·[0, w]`.
    pub full_element: Element,
    /// `2·top ⊆ top`.
    pub properly_infinite: bool,
}

/// The largest interval, exhibited as the supremum of the multiples of a
/// full element (the sum of the generators).
pub fn largest_element(c: &Completion) -> Result<LargestElement> {
    let model = c.model();
    let mut w = vec![0; model.dimension()];
    for g in model.flat_generators() {
        w = add_points(&w, &g)?;
    }
    model.check_bound(&w).map_err(|_| Error::NoFullElement)?;
    let full_element = model.element_from_point(&w);
    let p = Interval::Principal(full_element.clone());
    let top = c.sup_chain(&IntervalChain {
        preamble: vec![p.clone()],
        increment: p,
    })?;
    let t = c.lower(&top)?;
    let properly_infinite = c.iv_include(&c.iv_add(&t, &t)?, &t)?.is_some();
    Ok(LargestElement {
        top,
        full_element,
        properly_infinite,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum QMode {
    /// `m·u = top` implies `u = top`.
    Q,
    /// `2(m·u) <= m·u` implies `2u <= u`.
    Qq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QWitness {
    pub interval: Interval,
    pub m: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QVerdict {
    pub mode: QMode,
    pub status: Status,
    pub bound: u64,
    pub intervals_scanned: usize,
    pub undecided: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<QWitness>,
}

impl QVerdict {
    /// Re-checks the witness, if any: the premise holds for `m·u` and the
    /// conclusion fails for `u`.
    pub fn replay(&self, c: &Completion) -> Result<bool> {
        let Some(w) = &self.witness else {
            return Ok(self.status != Status::FailsWithWitness);
        };
        let u = c.lower(&w.interval)?;
        let mu = c.iv_scale(&u, w.m)?;
        Ok(match self.mode {
            QMode::Q => mu == Iv::Top && u != Iv::Top,
            QMode::Qq => c.properly_infinite(&mu)? && !c.properly_infinite(&u)?,
        })
    }
}

impl Completion {
    /// Principal intervals and chains with generators of coordinate sum at
    /// most `bound`, plus the top, deduplicated after normalization.
    pub(crate) fn representable(&self, bound: u64) -> Result<Vec<Iv>> {
        let members = self.model.enumerate_points(bound)?;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut push = |iv: Iv, out: &mut Vec<Iv>| {
            if seen.insert(iv.clone()) {
                out.push(iv);
            }
        };
        for g in &members {
            push(self.principal(g.clone()), &mut out);
        }
        for g in &members {
            for u in &members {
                push(self.normalize(g.clone(), u.clone())?, &mut out);
            }
        }
        push(Iv::Top, &mut out);
        Ok(out)
    }

    /// `2I ⊆ I`.
    fn properly_infinite(&self, i: &Iv) -> Result<bool> {
        Ok(self.iv_include(&self.iv_scale(i, 2)?, i)?.is_some())
    }

    /// Increasing (including from the last period term back to the first) and
    /// eventually full at `bound`.
    pub fn is_full_sequence(&self, seq: &SequenceDescriptor<Interval>, bound: u64) -> Result<bool> {
        seq.check()?;
        let terms = self.increasing_terms(seq)?;
        let eventual = &terms[seq.preamble.len()];
        self.iv_is_full(eventual, bound)
    }

    /// Lowers every written term and checks that they increase.
    pub(crate) fn increasing_terms(&self, seq: &SequenceDescriptor<Interval>) -> Result<Vec<Iv>> {
        let written: Vec<&Interval> = seq.preamble.iter().chain(&seq.period).collect();
        let terms: Vec<Iv> = written
            .iter()
            .map(|i| self.lower(i))
            .collect::<Result<_>>()?;
        for idx in 1..terms.len() {
            if self.iv_include(&terms[idx - 1], &terms[idx])?.is_none() {
                return Err(Error::NotIncreasing(idx));
            }
        }
        let first = seq.preamble.len();
        if self
            .iv_include(&terms[terms.len() - 1], &terms[first])?
            .is_none()
        {
            return Err(Error::NotIncreasing(terms.len()));
        }
        Ok(terms)
    }
}

/// Scans representable intervals `u` within `bound` and multipliers
/// `1 <= m <= bound` for a counterexample to (Q) or (QQ).
pub fn property_q_check(c: &Completion, mode: QMode, bound: u64) -> Result<QVerdict> {
    let intervals = c.representable(bound)?;
    let mut undecided = 0;
    let mut witness = None;
    'scan: for u in &intervals {
        let premise_free = match mode {
            QMode::Q => *u == Iv::Top,
            QMode::Qq => match c.properly_infinite(u) {
                Ok(b) => b,
                Err(Error::UndecidableAtBound(_)) => {
                    undecided += 1;
                    continue;
                }
                Err(e) => return Err(e),
            },
        };
        if premise_free {
            continue;
        }
        for m in 1..=bound.max(1) {
            let mu = c.iv_scale(u, m)?;
            let hit = match mode {
                QMode::Q => mu == Iv::Top,
                QMode::Qq => match c.properly_infinite(&mu) {
                    Ok(b) => b,
                    Err(Error::UndecidableAtBound(_)) => {
                        undecided += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                },
            };
            if hit {
                witness = Some(QWitness {
                    interval: c.lift(u),
                    m,
                });
                break 'scan;
            }
        }
    }
    let status = match (&witness, undecided) {
        (Some(_), _) => Status::FailsWithWitness,
        (None, 0) => Status::Holds,
        (None, _) => Status::UnknownAtBound,
    };
    Ok(QVerdict {
        mode,
        status,
        bound,
        intervals_scanned: intervals.len(),
        undecided,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OmegaVerdict {
    /// `x' ⊆ y_0 + ... + y_n` with `n` least.
    Certificate {
        n: u64,
        partial_sum: Interval,
        inclusion: InclusionCertificate,
        /// Least `k` with `(k+1)x ⊆ k·y_j`, for each written `y_j`.
        domination: Vec<u64>,
    },
    NoCertificateWithinBound {
        k_max: u64,
    },
}

impl OmegaVerdict {
    pub fn n(&self) -> Option<u64> {
        match self {
            OmegaVerdict::Certificate { n, .. } => Some(*n),
            OmegaVerdict::NoCertificateWithinBound { .. } => None,
        }
    }
}

/// Instance-level ω-comparison: given `x' ≪ x` and `x <_s y_j` for every
/// `j` (and each `y_j` full in weak mode), the least `n <= k_max` with
/// `x' ⊆ y_0 + ... + y_n`.
pub fn omega_comparison_check(
    c: &Completion,
    x_prime: &Interval,
    x: &Interval,
    y_seq: &SequenceDescriptor<Interval>,
    k_max: u64,
    weak: bool,
) -> Result<OmegaVerdict> {
    y_seq.check()?;
    let xp = c.lower(x_prime)?;
    let xv = c.lower(x)?;
    if !c.iv_way_below(&xp, &xv)? {
        return Err(Error::PreconditionViolated(format!(
            "{x_prime} is not way below {x}"
        )));
    }
    let ys = y_seq.map(|y| c.lower(y))?;
    let mut domination = Vec::new();
    for j in 0..ys.preamble.len() + ys.period.len() {
        let y = ys.get(j);
        match c.iv_sdom(&xv, y)? {
            Some(k) => domination.push(k),
            None => {
                return Err(Error::PreconditionViolated(format!(
                    "x is not stably dominated by y_{j} = {}",
                    c.lift(y)
                )))
            }
        }
        if weak && !c.iv_is_full(y, c.model().element_bound())? {
            return Err(Error::PreconditionViolated(format!(
                "y_{j} = {} is not full",
                c.lift(y)
            )));
        }
    }
    let mut sum = c.principal(vec![0; c.model().dimension()]);
    for n in 0..=k_max {
        sum = c.iv_add(&sum, ys.get(n as usize))?;
        if let Some(inclusion) = c.iv_include(&xp, &sum)? {
            return Ok(OmegaVerdict::Certificate {
                n,
                partial_sum: c.lift(&sum),
                inclusion,
                domination,
            });
        }
    }
    Ok(OmegaVerdict::NoCertificateWithinBound { k_max })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DiscreteOmegaVerdict {
    Certificate {
        n: u64,
        partial_sum: Element,
        order: OrderCertificate,
        domination: Vec<u64>,
    },
    NoCertificateWithinBound {
        k_max: u64,
    },
}

/// The element-level surrogate of the ω-comparison check: `x' = x`, and the
/// conclusion is `x <= y_0 + ... + y_n`.
pub fn omega_surrogate_check(
    model: &SemigroupModel,
    x: &Element,
    y_seq: &SequenceDescriptor<Element>,
    k_max: u64,
    weak: bool,
) -> Result<DiscreteOmegaVerdict> {
    y_seq.check()?;
    let xp = model.checked_point(x)?;
    let ys = y_seq.map(|y| model.checked_point(y))?;
    let mut domination = Vec::new();
    for j in 0..ys.preamble.len() + ys.period.len() {
        let y = ys.get(j);
        match sdom_least_k_points(model, &xp, y)? {
            Some(k) => domination.push(k),
            None => {
                return Err(Error::PreconditionViolated(format!(
                    "x is not stably dominated by y_{j} = {}",
                    model.element_from_point(y)
                )))
            }
        }
        if weak
            && !crate::comparison::is_full_element(
                model,
                &model.element_from_point(y),
                model.element_bound(),
            )?
        {
            return Err(Error::PreconditionViolated(format!(
                "y_{j} = {} is not full",
                model.element_from_point(y)
            )));
        }
    }
    let mut sum = vec![0; model.dimension()];
    for n in 0..=k_max {
        sum = add_points(&sum, ys.get(n as usize))?;
        if let Some(order) = model.order_certificate_points(&xp, &sum)? {
            return Ok(DiscreteOmegaVerdict::Certificate {
                n,
                partial_sum: model.element_from_point(&sum),
                order,
                domination,
            });
        }
    }
    Ok(DiscreteOmegaVerdict::NoCertificateWithinBound { k_max })
}
