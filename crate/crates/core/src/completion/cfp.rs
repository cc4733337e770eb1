//! Checkers for the comparison-of-sequences properties (CFP and strong CFP).

use serde::{Deserialize, Serialize};

use super::interval::{InclusionCertificate, Interval, Iv};
use super::sequence::SequenceDescriptor;
use super::Completion;
use crate::error::{Error, Result};
use crate::semigroup::{add_points, scale_point, Element, OrderCertificate, SemigroupModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum XSide {
    #[serde(rename = "x")]
    Single(Interval),
    #[serde(rename = "x_seq")]
    Sequence(SequenceDescriptor<Interval>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfpInstance {
    pub x_prime: Interval,
    #[serde(flatten)]
    pub x: XSide,
    pub y_seq: SequenceDescriptor<Interval>,
    pub m: u64,
}

impl CfpInstance {
    pub fn x_sequence(&self) -> SequenceDescriptor<Interval> {
        match &self.x {
            XSide::Single(x) => SequenceDescriptor::constant(x.clone()),
            XSide::Sequence(s) => s.clone(),
        }
    }

    /// The single `x` of the strong form; for a sequence, its first term.
    pub fn first_x(&self) -> &Interval {
        match &self.x {
            XSide::Single(x) => x,
            XSide::Sequence(s) => s.get(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CfpVerdict {
    /// `x' ⊆ y_1 + ... + y_k` with `k` least.
    Certificate {
        k: u64,
        partial_sum: Interval,
        inclusion: InclusionCertificate,
    },
    NoCertificateWithinBound {
        k_max: u64,
    },
}

impl CfpVerdict {
    pub fn k(&self) -> Option<u64> {
        match self {
            CfpVerdict::Certificate { k, .. } => Some(*k),
            CfpVerdict::NoCertificateWithinBound { .. } => None,
        }
    }
}

/// Validates the hypotheses of the instance and returns the least
/// `k <= k_max` with `x' ⊆ y_1 + ... + y_k`.
///
/// Strong form: `x' ≪ x` and `x ⊆ m·y_n` for all `n`. Otherwise `(x_n)` is a
/// full increasing sequence, `x' ≪ x_1` and `x_n ⊆ m·y_n` for all `n`.
pub fn check_cfp(
    c: &Completion,
    inst: &CfpInstance,
    k_max: u64,
    strong: bool,
) -> Result<CfpVerdict> {
    let (xp, ys) = validate_cfp(c, inst, strong)?;
    scan_partial_sums(c, &xp, &ys, k_max)
}

/// Checks the hypotheses of an instance and returns `x'` and `(y_n)` lowered.
pub(crate) fn validate_cfp(
    c: &Completion,
    inst: &CfpInstance,
    strong: bool,
) -> Result<(Iv, SequenceDescriptor<Iv>)> {
    inst.y_seq.check()?;
    let xp = c.lower(&inst.x_prime)?;
    let ys = inst.y_seq.map(|y| c.lower(y))?;
    if strong {
        let x = c.lower(inst.first_x())?;
        if !c.iv_way_below(&xp, &x)? {
            return Err(Error::PreconditionViolated("x' is not way below x".into()));
        }
        for n in 0..ys.preamble.len() + ys.period.len() {
            if c.iv_include(&x, &c.iv_scale(ys.get(n), inst.m)?)?.is_none() {
                return Err(Error::PreconditionViolated(format!(
                    "x is not below m·y_{}",
                    n + 1
                )));
            }
        }
    } else {
        let xs_desc = inst.x_sequence();
        xs_desc.check()?;
        if !c.is_full_sequence(&xs_desc, c.model().element_bound())? {
            return Err(Error::PreconditionViolated("(x_n) is not full".into()));
        }
        let xs = xs_desc.map(|x| c.lower(x))?;
        if !c.iv_way_below(&xp, xs.get(0))? {
            return Err(Error::PreconditionViolated(
                "x' is not way below x_1".into(),
            ));
        }
        for n in 0..xs.joint_span(&ys) {
            if c.iv_include(xs.get(n), &c.iv_scale(ys.get(n), inst.m)?)?
                .is_none()
            {
                return Err(Error::PreconditionViolated(format!(
                    "x_{0} is not below m·y_{0}",
                    n + 1
                )));
            }
        }
    }
    Ok((xp, ys))
}

fn scan_partial_sums(
    c: &Completion,
    xp: &Iv,
    ys: &SequenceDescriptor<Iv>,
    k_max: u64,
) -> Result<CfpVerdict> {
    let mut sum = c.principal(vec![0; c.model().dimension()]);
    for k in 1..=k_max {
        sum = c.iv_add(&sum, ys.get(k as usize - 1))?;
        if let Some(inclusion) = c.iv_include(xp, &sum)? {
            return Ok(CfpVerdict::Certificate {
                k,
                partial_sum: c.lift(&sum),
                inclusion,
            });
        }
    }
    Ok(CfpVerdict::NoCertificateWithinBound { k_max })
}

/// Strong CFP stated on the base model: `x <= m·y_n` for all `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteCfpInstance {
    pub x: Element,
    pub y_seq: SequenceDescriptor<Element>,
    pub m: u64,
}

impl DiscreteCfpInstance {
    /// The matching instance of the completion: `x' = x = [0, x]` and
    /// `y_n = [0, y_n]`.
    pub fn to_intervals(&self) -> CfpInstance {
        let p = |e: &Element| Interval::Principal(e.clone());
        CfpInstance {
            x_prime: p(&self.x),
            x: XSide::Single(p(&self.x)),
            y_seq: SequenceDescriptor {
                preamble: self.y_seq.preamble.iter().map(p).collect(),
                period: self.y_seq.period.iter().map(p).collect(),
            },
            m: self.m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DiscreteCfpVerdict {
    Certificate {
        k: u64,
        partial_sum: Element,
        order: OrderCertificate,
    },
    NoCertificateWithinBound {
        k_max: u64,
    },
}

impl DiscreteCfpVerdict {
    pub fn k(&self) -> Option<u64> {
        match self {
            DiscreteCfpVerdict::Certificate { k, .. } => Some(*k),
            DiscreteCfpVerdict::NoCertificateWithinBound { .. } => None,
        }
    }
}

pub fn check_cfp_discrete(
    model: &SemigroupModel,
    inst: &DiscreteCfpInstance,
    k_max: u64,
) -> Result<DiscreteCfpVerdict> {
    inst.y_seq.check()?;
    let x = model.checked_point(&inst.x)?;
    let ys = inst.y_seq.map(|y| model.checked_point(y))?;
    for n in 0..ys.preamble.len() + ys.period.len() {
        if !model.leq_points(&x, &scale_point(ys.get(n), inst.m)?)? {
            return Err(Error::PreconditionViolated(format!(
                "x is not below m·y_{}",
                n + 1
            )));
        }
    }
    let mut sum = vec![0; model.dimension()];
    for k in 1..=k_max {
        sum = add_points(&sum, ys.get(k as usize - 1))?;
        if let Some(order) = model.order_certificate_points(&x, &sum)? {
            return Ok(DiscreteCfpVerdict::Certificate {
                k,
                partial_sum: model.element_from_point(&sum),
                order,
            });
        }
    }
    Ok(DiscreteCfpVerdict::NoCertificateWithinBound { k_max })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Interval {
        Interval::Principal(Element::Num(v))
    }

    fn w2() -> Completion {
        Completion::new(SemigroupModel::numerical([3, 4], 1000).unwrap())
    }

    #[test]
    fn strong_and_plain_forms() {
        let c = w2();
        let inst = CfpInstance {
            x_prime: p(3),
            x: XSide::Single(p(3)),
            y_seq: SequenceDescriptor::constant(p(4)),
            m: 1,
        };
        // 3 <= 4 fails in W_2, so m = 1 is not a valid instance.
        assert!(matches!(
            check_cfp(&c, &inst, 100, true),
            Err(Error::PreconditionViolated(_))
        ));
        let inst = CfpInstance { m: 3, ..inst };
        assert_eq!(check_cfp(&c, &inst, 100, true).unwrap().k(), Some(3));
        assert_eq!(check_cfp(&c, &inst, 100, false).unwrap().k(), Some(3));
        assert_eq!(
            check_cfp(&c, &inst, 2, false).unwrap(),
            CfpVerdict::NoCertificateWithinBound { k_max: 2 }
        );
    }

    #[test]
    fn plain_form_needs_a_full_sequence() {
        let c = w2();
        let inst = CfpInstance {
            x_prime: p(0),
            x: XSide::Sequence(SequenceDescriptor::constant(p(0))),
            y_seq: SequenceDescriptor::constant(p(4)),
            m: 1,
        };
        assert!(matches!(
            check_cfp(&c, &inst, 10, false),
            Err(Error::PreconditionViolated(_))
        ));
        assert_eq!(check_cfp(&c, &inst, 10, true).unwrap().k(), Some(1));
    }

    #[test]
    fn json_forms() {
        let v = serde_json::json!({
            "x_prime": 3, "x_seq": {"preamble": [], "period": [{"principal": 3}]},
            "y_seq": {"period": ["top"]}, "m": 2
        });
        let inst: CfpInstance = serde_json::from_value(v).unwrap();
        assert!(matches!(inst.x, XSide::Sequence(_)));
        assert_eq!(inst.y_seq.period, vec![Interval::Top]);
        assert_eq!(check_cfp(&w2(), &inst, 5, false).unwrap().k(), Some(1));
        let single: CfpInstance = serde_json::from_value(serde_json::json!({
            "x_prime": 3, "x": 3, "y_seq": {"period": [4]}, "m": 3
        }))
        .unwrap();
        assert_eq!(single.x, XSide::Single(p(3)));
    }

    #[test]
    fn discrete_matches_principal_embedding() {
        let model = SemigroupModel::numerical([3, 4], 1000).unwrap();
        let inst = DiscreteCfpInstance {
            x: Element::Num(8),
            y_seq: SequenceDescriptor::new(
                vec![Element::Num(4)],
                vec![Element::Num(6), Element::Num(8)],
            )
            .unwrap(),
            m: 2,
        };
        let d = check_cfp_discrete(&model, &inst, 50).unwrap();
        let c = check_cfp(&Completion::new(model), &inst.to_intervals(), 50, true).unwrap();
        assert_eq!(d.k(), Some(3));
        assert_eq!(d.k(), c.k());
    }
}
