//! Constructive reductions: ω-comparison answers turned into CFP
//! certificates by grouping the `y` sequence into blocks, and a single
//! multiplier for a chain of two stable dominations.

use serde::Serialize;

use crate::comparison::stably_dominated;
use crate::completion::{
    omega_comparison_check, validate_cfp, CfpInstance, Completion, InclusionCertificate, Interval,
    Iv, OmegaVerdict, SequenceDescriptor, XSide,
};
use crate::error::{Error, Result};
use crate::semigroup::{scale_point, Element, OrderCertificate, SemigroupModel};

/// Answers an ω-comparison question `(x', x, (z_j))` with an index `n` such
/// that `x' ⊆ z_0 + ... + z_n`, or `None`.
pub type OmegaOracle<'a> =
    dyn Fn(&Interval, &Interval, &SequenceDescriptor<Interval>) -> Option<u64> + 'a;

/// The bounded ω-comparison checker as an oracle.
pub fn omega_oracle(
    c: &Completion,
    k_max: u64,
    weak: bool,
) -> impl Fn(&Interval, &Interval, &SequenceDescriptor<Interval>) -> Option<u64> + '_ {
    move |xp, x, zs| match omega_comparison_check(c, xp, x, zs, k_max, weak) {
        Ok(OmegaVerdict::Certificate { n, .. }) => Some(n),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupingCertificate {
    pub m: u64,
    /// Index returned by the oracle for the block sequence.
    pub n: u64,
    /// `(n+1)(m+1)`: the number of `y` terms covering `x'`.
    pub k: u64,
    /// `z_j = y_{j(m+1)+1} + ... + y_{j(m+1)+m+1}` for `j <= n`.
    pub blocks: Vec<Interval>,
    /// `(m+1)·x_1 ⊆ x_{j(m+1)+1} + ... + x_{j(m+1)+m+1}`.
    pub x_blocks: Vec<InclusionCertificate>,
    /// `x_{j(m+1)+1} + ... + x_{j(m+1)+m+1} ⊆ m·z_j`.
    pub y_blocks: Vec<InclusionCertificate>,
    pub partial_sum: Interval,
    /// `x' ⊆ y_1 + ... + y_k`.
    pub conclusion: InclusionCertificate,
}

fn block_sum(c: &Completion, seq: &SequenceDescriptor<Iv>, j: u64, m: u64) -> Result<Iv> {
    let mut s = c.principal(vec![0; c.model().dimension()]);
    let start = (j * (m + 1)) as usize;
    for i in start..=start + m as usize {
        s = c.iv_add(&s, seq.get(i))?;
    }
    Ok(s)
}

fn prefix_sum(c: &Completion, seq: &SequenceDescriptor<Iv>, k: u64) -> Result<Iv> {
    let mut s = c.principal(vec![0; c.model().dimension()]);
    for i in 0..k as usize {
        s = c.iv_add(&s, seq.get(i))?;
    }
    Ok(s)
}

/// The block sequence `(z_j)` as a descriptor: once a block starts past the
/// preamble of `y`, blocks repeat with period `p / gcd(p, m+1)`.
fn block_sequence(
    c: &Completion,
    ys: &SequenceDescriptor<Iv>,
    m: u64,
) -> Result<SequenceDescriptor<Iv>> {
    let width = m as usize + 1;
    let pre = ys.preamble.len().div_ceil(width);
    let p = ys.period.len();
    let q = p / num::integer::gcd(p, width);
    let mut preamble = Vec::with_capacity(pre);
    for j in 0..pre {
        preamble.push(block_sum(c, ys, j as u64, m)?);
    }
    let mut period = Vec::with_capacity(q);
    for j in pre..pre + q {
        period.push(block_sum(c, ys, j as u64, m)?);
    }
    SequenceDescriptor::new(preamble, period)
}

/// Derives a CFP certificate for `inst` from one ω-comparison answer on the
/// block sequence `z_j`, where `x_1 <_s z_j` holds with multiplier `m`.
pub fn omega_to_cfp_grouping(
    c: &Completion,
    inst: &CfpInstance,
    oracle: &OmegaOracle<'_>,
) -> Result<GroupingCertificate> {
    let (xp, ys) = validate_cfp(c, inst, false)?;
    let xs = inst.x_sequence().map(|x| c.lower(x))?;
    let m = inst.m;
    let zs = block_sequence(c, &ys, m)?;
    let zs_out = zs.map(|z| Ok(c.lift(z)))?;
    let x1 = xs.get(0).clone();
    let n = oracle(&inst.x_prime, &c.lift(&x1), &zs_out).ok_or(Error::OracleFailure)?;

    let x1_scaled = c.iv_scale(&x1, m + 1)?;
    let mut blocks = Vec::new();
    let mut x_blocks = Vec::new();
    let mut y_blocks = Vec::new();
    for j in 0..=n {
        let xb = block_sum(c, &xs, j, m)?;
        let z = zs.get(j as usize);
        let into_x = c.iv_include(&x1_scaled, &xb)?.ok_or_else(|| {
            Error::PreconditionViolated(format!("(m+1)·x_1 is not below x-block {j}"))
        })?;
        let into_z = c.iv_include(&xb, &c.iv_scale(z, m)?)?.ok_or_else(|| {
            Error::PreconditionViolated(format!("x-block {j} is not below m·z_{j}"))
        })?;
        blocks.push(c.lift(z));
        x_blocks.push(into_x);
        y_blocks.push(into_z);
    }
    let k = (n + 1) * (m + 1);
    let sum = prefix_sum(c, &ys, k)?;
    let conclusion = c.iv_include(&xp, &sum)?.ok_or(Error::OracleFailure)?;
    Ok(GroupingCertificate {
        m,
        n,
        k,
        blocks,
        x_blocks,
        y_blocks,
        partial_sum: c.lift(&sum),
        conclusion,
    })
}

impl GroupingCertificate {
    /// Recomputes the blocks from `inst` and replays every inclusion.
    pub fn replay(&self, c: &Completion, inst: &CfpInstance) -> Result<bool> {
        let m = self.m;
        if m != inst.m || self.k != (self.n + 1) * (m + 1) || self.blocks.len() as u64 != self.n + 1
        {
            return Ok(false);
        }
        if self.x_blocks.len() != self.blocks.len() || self.y_blocks.len() != self.blocks.len() {
            return Ok(false);
        }
        let xs = inst.x_sequence().map(|x| c.lower(x))?;
        let ys = inst.y_seq.map(|y| c.lower(y))?;
        let x1_scaled = c.iv_scale(xs.get(0), m + 1)?;
        for j in 0..=self.n {
            let z = block_sum(c, &ys, j, m)?;
            if c.lower(&self.blocks[j as usize])? != z {
                return Ok(false);
            }
            let xb = block_sum(c, &xs, j, m)?;
            if !c.iv_replay(&self.x_blocks[j as usize], &x1_scaled, &xb)?
                || !c.iv_replay(&self.y_blocks[j as usize], &xb, &c.iv_scale(&z, m)?)?
            {
                return Ok(false);
            }
        }
        let sum = prefix_sum(c, &ys, self.k)?;
        c.iv_replay(&self.conclusion, &c.lower(&inst.x_prime)?, &sum)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakGroupingCertificate {
    /// Number of leading terms dropped so that every remaining `y_n` is full.
    pub trim: usize,
    /// `v ≪ w` with `v` full.
    pub pair: (Interval, Interval),
    /// Certificate for the trimmed instance.
    pub grouping: GroupingCertificate,
}

impl WeakGroupingCertificate {
    pub fn replay(&self, c: &Completion, inst: &CfpInstance) -> Result<bool> {
        self.grouping.replay(c, &trimmed(inst, self.trim))
    }
}

fn trimmed(inst: &CfpInstance, t: usize) -> CfpInstance {
    CfpInstance {
        x_prime: inst.x_prime.clone(),
        x: XSide::Sequence(inst.x_sequence().skip(t)),
        y_seq: inst.y_seq.skip(t),
        m: inst.m,
    }
}

/// `[0, w]` for the sum `w` of the generators, which is full, and the top.
pub fn find_full_pair(c: &Completion) -> Result<(Interval, Interval)> {
    let model = c.model();
    let mut w = vec![0; model.dimension()];
    for g in model.flat_generators() {
        w = crate::semigroup::add_points(&w, &g)?;
    }
    if model.check_bound(&w).is_err() {
        return Err(Error::NoFullPair);
    }
    Ok((
        Interval::Principal(model.element_from_point(&w)),
        Interval::Top,
    ))
}

/// As [`omega_to_cfp_grouping`] with a weak ω-comparison oracle: the
/// instance is first trimmed to the point from which the full `v` is
/// `∝ x_n`, so that every remaining `y_n` is full.
pub fn weak_omega_to_cfp(
    c: &Completion,
    inst: &CfpInstance,
    oracle: &OmegaOracle<'_>,
    pair: Option<(Interval, Interval)>,
) -> Result<WeakGroupingCertificate> {
    let (v, w) = match pair {
        Some(p) => p,
        None => find_full_pair(c)?,
    };
    let bound = c.model().element_bound();
    let (vl, wl) = (c.lower(&v)?, c.lower(&w)?);
    if !c.iv_way_below(&vl, &wl)? || !c.iv_is_full(&vl, bound)? {
        return Err(Error::NoFullPair);
    }
    validate_cfp(c, inst, false)?;
    let xs = inst.x_sequence().map(|x| c.lower(x))?;
    let ys = inst.y_seq.map(|y| c.lower(y))?;
    let span = xs.joint_span(&ys);
    let mut trim = 0;
    for i in 0..span {
        if !c.iv_propto(&vl, xs.get(i))? {
            trim = i + 1;
        }
    }
    for i in trim..span {
        if !c.iv_is_full(ys.get(i), bound)? {
            return Err(Error::PreconditionViolated(format!(
                "y_{} is not full although v ∝ x_{}",
                i + 1,
                i + 1
            )));
        }
    }
    let grouping = omega_to_cfp_grouping(c, &trimmed(inst, trim), oracle)?;
    Ok(WeakGroupingCertificate {
        trim,
        pair: (v, w),
        grouping,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommonK {
    pub k: u64,
    /// Least multipliers for `x <_s y` and `y <_s z`.
    pub tails: [u64; 2],
    /// `(k+1)x, ky, (k+1)y, kz`.
    pub values: [Element; 4],
    /// Certificates for the three links between consecutive values.
    pub links: Vec<OrderCertificate>,
}

impl CommonK {
    pub fn replay(
        &self,
        model: &SemigroupModel,
        x: &Element,
        y: &Element,
        z: &Element,
    ) -> Result<bool> {
        let (x, y, z) = (model.flatten(x)?, model.flatten(y)?, model.flatten(z)?);
        let k = self.k;
        let values = [
            scale_point(&x, k + 1)?,
            scale_point(&y, k)?,
            scale_point(&y, k + 1)?,
            scale_point(&z, k)?,
        ];
        for (v, stored) in values.iter().zip(&self.values) {
            if model.flatten(stored)? != *v {
                return Ok(false);
            }
        }
        if self.links.len() != 3 {
            return Ok(false);
        }
        for (i, link) in self.links.iter().enumerate() {
            if !link.replay_points(model, &values[i], &values[i + 1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A single `k` with `(k+1)x <= ky <= (k+1)y <= kz`, taken from the tail
/// bounds `(m+1)m` of the two dominations.
pub fn sdom_common_k(
    model: &SemigroupModel,
    x: &Element,
    y: &Element,
    z: &Element,
    k_max: u64,
) -> Result<CommonK> {
    let first = stably_dominated(model, x, y, k_max)?
        .ok_or_else(|| Error::PreconditionViolated(format!("no k <= {k_max} gives {x} <_s {y}")))?;
    let second = stably_dominated(model, y, z, k_max)?
        .ok_or_else(|| Error::PreconditionViolated(format!("no k <= {k_max} gives {y} <_s {z}")))?;
    let tail = |m: u64, trivial: bool| -> Result<u64> {
        if trivial {
            Ok(1)
        } else {
            (m + 1).checked_mul(m).ok_or(Error::Overflow)
        }
    };
    let xp = model.flatten(x)?;
    let yp = model.flatten(y)?;
    let zp = model.flatten(z)?;
    let zero = |p: &[u64]| p.iter().all(|&v| v == 0);
    let k = tail(first.k, zero(&xp))?.max(tail(second.k, zero(&yp))?);
    let values = [
        scale_point(&xp, k + 1)?,
        scale_point(&yp, k)?,
        scale_point(&yp, k + 1)?,
        scale_point(&zp, k)?,
    ];
    let mut links = Vec::with_capacity(3);
    for i in 0..3 {
        let cert = model
            .order_certificate_points(&values[i], &values[i + 1])?
            .ok_or_else(|| {
                Error::PreconditionViolated(format!("link {i} of the chain fails at k = {k}"))
            })?;
        links.push(cert);
    }
    Ok(CommonK {
        k,
        tails: [first.k, second.k],
        values: values.map(|v| model.element_from_point(&v)),
        links,
    })
}
