//! Stable domination `x <_s y`: `(k+1)x <= ky` for some `k`.

use serde::Serialize;

use super::states::{state_max_points, StateBound};
use crate::error::{Error, Result};
use crate::lp::rat;
use crate::semigroup::{
    add_points, is_zero_point, scale_point, Element, Kind, OrderCertificate, OrderMode, Point,
    SemigroupModel,
};

/// Multipliers tried before an affine pair is sent to the exact refutation test.
const QUICK_SCAN: u64 = 32;

/// Largest `k` searched once a pair is known to be stably dominated.
pub(crate) const SDOM_HORIZON: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableDomCertificate {
    pub k: u64,
    /// Certificate for `(k+1)x <= ky`.
    pub inner: OrderCertificate,
}

impl StableDomCertificate {
    pub fn replay_points(&self, model: &SemigroupModel, x: &[u64], y: &[u64]) -> Result<bool> {
        if self.k == 0 {
            return Ok(false);
        }
        let lhs = scale_point(x, self.k + 1)?;
        let rhs = scale_point(y, self.k)?;
        self.inner.replay_points(model, &lhs, &rhs)
    }

    pub fn replay(&self, model: &SemigroupModel, x: &Element, y: &Element) -> Result<bool> {
        self.replay_points(model, &model.flatten(x)?, &model.flatten(y)?)
    }

    pub(crate) fn for_points(
        model: &SemigroupModel,
        x: &[u64],
        y: &[u64],
        k: u64,
    ) -> Result<Option<Self>> {
        let lhs = scale_point(x, k + 1)?;
        let rhs = scale_point(y, k)?;
        Ok(model
            .order_certificate_points(&lhs, &rhs)?
            .map(|inner| StableDomCertificate { k, inner }))
    }
}

/// Smallest `k <= k_max` with `(k+1)x <= ky`.
pub fn stably_dominated(
    model: &SemigroupModel,
    x: &Element,
    y: &Element,
    k_max: u64,
) -> Result<Option<StableDomCertificate>> {
    let x = model.checked_point(x)?;
    let y = model.checked_point(y)?;
    match scan_k(model, &x, &y, 1, k_max)? {
        Some(k) => StableDomCertificate::for_points(model, &x, &y, k),
        None => Ok(None),
    }
}

fn scan_k(model: &SemigroupModel, x: &[u64], y: &[u64], from: u64, to: u64) -> Result<Option<u64>> {
    if from > to {
        return Ok(None);
    }
    let mut lhs = scale_point(x, from + 1)?;
    let mut rhs = scale_point(y, from)?;
    for k in from..=to {
        if model.leq_points(&lhs, &rhs)? {
            return Ok(Some(k));
        }
        lhs = add_points(&lhs, x)?;
        rhs = add_points(&rhs, y)?;
    }
    Ok(None)
}

/// Checks `(k+1)x <= ky` for every `k` in `[(m+1)m, (m+1)m + probe_extra]`,
/// where `m` is the multiplier of `certificate`.
pub fn tail_property_check(
    model: &SemigroupModel,
    x: &Element,
    y: &Element,
    certificate: &StableDomCertificate,
    probe_extra: u64,
) -> Result<bool> {
    let x = model.flatten(x)?;
    let y = model.flatten(y)?;
    if !certificate.replay_points(model, &x, &y)? {
        return Err(Error::PreconditionViolated(format!(
            "(m+1)x <= my does not replay for m = {}",
            certificate.k
        )));
    }
    let m = certificate.k;
    let k0 = (m + 1).checked_mul(m).ok_or(Error::Overflow)?;
    let mut lhs = scale_point(&x, k0 + 1)?;
    let mut rhs = scale_point(&y, k0)?;
    for _ in 0..=probe_extra {
        if !model.leq_points(&lhs, &rhs)? {
            return Ok(false);
        }
        lhs = add_points(&lhs, &x)?;
        rhs = add_points(&rhs, &y)?;
    }
    Ok(true)
}

/// Why `x <_s y` fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Refutation {
    /// `x_i > 0` and `x_i >= y_i`, so `(k+1)x_i <= k·y_i` is impossible.
    Coordinate { index: usize },
    /// `x` is not in the order ideal generated by `y`.
    NotProportional,
    /// Some normalized state takes a value `>= 1` at `x`.
    State { max_value: StateBound },
}

/// Exact refutation of `x <_s y` for members, or `None` when it holds.
pub(crate) fn refute_points(
    model: &SemigroupModel,
    x: &[u64],
    y: &[u64],
) -> Result<Option<Refutation>> {
    if is_zero_point(x) {
        return Ok(None);
    }
    if let Some(index) = (0..x.len()).find(|&i| x[i] > 0 && x[i] >= y[i]) {
        return Ok(Some(Refutation::Coordinate { index }));
    }
    if model.order_mode() == OrderMode::Induced {
        return Ok(None);
    }
    match model.kind() {
        Kind::Numerical { .. } => Ok(None),
        Kind::DirectSum { components } => {
            let ranges = model.component_ranges();
            for (c, r) in components.iter().zip(ranges) {
                if let Some(reason) = refute_points(c, &x[r.clone()], &y[r.clone()])? {
                    return Ok(Some(match reason {
                        Refutation::Coordinate { index } => Refutation::Coordinate {
                            index: index + r.start,
                        },
                        other => other,
                    }));
                }
            }
            Ok(None)
        }
        Kind::Affine { .. } => {
            if scan_k(model, x, y, 1, QUICK_SCAN)?.is_some() {
                return Ok(None);
            }
            if !model.propto_points(x, y)? {
                return Ok(Some(Refutation::NotProportional));
            }
            let max_value = state_max_points(model, y, x)?;
            if max_value.at_least(&rat(1)) {
                return Ok(Some(Refutation::State { max_value }));
            }
            Ok(None)
        }
    }
}

pub(crate) fn sdom_holds_points(model: &SemigroupModel, x: &[u64], y: &[u64]) -> Result<bool> {
    Ok(refute_points(model, x, y)?.is_none())
}

/// Least `k` with `(k+1)x <= ky`, or `None` when `x <_s y` fails.
pub(crate) fn sdom_least_k_points(
    model: &SemigroupModel,
    x: &[u64],
    y: &[u64],
) -> Result<Option<u64>> {
    if is_zero_point(x) {
        return Ok(Some(1));
    }
    if refute_points(model, x, y)?.is_some() {
        return Ok(None);
    }
    if model.order_mode() == OrderMode::Induced {
        let k = x
            .iter()
            .zip(y)
            .filter(|(a, _)| **a > 0)
            .map(|(a, b)| a.div_ceil(b - a))
            .max()
            .unwrap_or(1);
        return Ok(Some(k.max(1)));
    }
    match scan_k(model, x, y, 1, SDOM_HORIZON)? {
        Some(k) => Ok(Some(k)),
        None => Err(Error::UnknownAtBound(format!(
            "{} <_s {} holds but no k <= {SDOM_HORIZON} was found",
            model.element_from_point(x),
            model.element_from_point(y)
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SdomDecision {
    Holds { certificate: StableDomCertificate },
    Refuted { refutation: Refutation },
}

/// Exact decision of `x <_s y` with a certificate either way.
pub fn decide_stable_domination(
    model: &SemigroupModel,
    x: &Element,
    y: &Element,
) -> Result<SdomDecision> {
    let xp: Point = model.checked_point(x)?;
    let yp: Point = model.checked_point(y)?;
    if let Some(refutation) = refute_points(model, &xp, &yp)? {
        return Ok(SdomDecision::Refuted { refutation });
    }
    let k = sdom_least_k_points(model, &xp, &yp)?.expect("not refuted");
    let certificate = StableDomCertificate::for_points(model, &xp, &yp, k)?.expect("k was found");
    Ok(SdomDecision::Holds { certificate })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: u64) -> SemigroupModel {
        SemigroupModel::numerical([n + 1, n + 2], 2000).unwrap()
    }

    fn num(v: u64) -> Element {
        Element::Num(v)
    }

    #[test]
    fn smallest_multiplier() {
        let w2 = w(2);
        let c = stably_dominated(&w2, &num(3), &num(4), 100)
            .unwrap()
            .unwrap();
        assert_eq!(c.k, 3);
        assert_eq!(c.inner, OrderCertificate::Witness { z: num(0) });
        assert!(c.replay(&w2, &num(3), &num(4)).unwrap());
        assert_eq!(
            stably_dominated(&w2, &num(0), &num(4), 1)
                .unwrap()
                .unwrap()
                .k,
            1
        );
        assert_eq!(stably_dominated(&w2, &num(4), &num(3), 500).unwrap(), None);
        assert_eq!(
            stably_dominated(&w(1), &num(2), &num(3), 10)
                .unwrap()
                .unwrap()
                .k,
            2
        );
    }

    #[test]
    fn tail_from_certificate() {
        let w1 = w(1);
        let c = stably_dominated(&w1, &num(2), &num(3), 10)
            .unwrap()
            .unwrap();
        assert!(tail_property_check(&w1, &num(2), &num(3), &c, 100).unwrap());
        // k = m + 1 = 3 is not enough: 8 <= 9 would need 1 in W_1.
        assert_eq!(
            stably_dominated(&w1, &num(2), &num(3), 3)
                .unwrap()
                .unwrap()
                .k,
            2
        );
        assert!(!w1.leq_points(&[8], &[9]).unwrap());
        let w2 = w(2);
        let c = stably_dominated(&w2, &num(3), &num(4), 10)
            .unwrap()
            .unwrap();
        assert!(tail_property_check(&w2, &num(3), &num(4), &c, 100).unwrap());
        let bogus = StableDomCertificate {
            k: 1,
            inner: OrderCertificate::Witness { z: num(0) },
        };
        assert!(matches!(
            tail_property_check(&w2, &num(3), &num(4), &bogus, 1),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn exact_decisions() {
        let w2 = w(2);
        match decide_stable_domination(&w2, &num(4), &num(3)).unwrap() {
            SdomDecision::Refuted { refutation } => {
                assert_eq!(refutation, Refutation::Coordinate { index: 0 })
            }
            other => panic!("unexpected {other:?}"),
        }
        let aff = SemigroupModel::affine(2, vec![vec![1, 0], vec![1, 2]], 100).unwrap();
        match decide_stable_domination(&aff, &Element::Vec(vec![1, 0]), &Element::Vec(vec![3, 2]))
            .unwrap()
        {
            SdomDecision::Holds { certificate } => assert_eq!(certificate.k, 1),
            other => panic!("unexpected {other:?}"),
        }
        // v = (1, -1/2) is a state with value 1 at both (1,0) and (2,2).
        match decide_stable_domination(&aff, &Element::Vec(vec![1, 0]), &Element::Vec(vec![2, 2]))
            .unwrap()
        {
            SdomDecision::Refuted {
                refutation: Refutation::State { max_value },
            } => assert_eq!(max_value, StateBound::Finite(rat(1))),
            other => panic!("unexpected {other:?}"),
        }
        match decide_stable_domination(&aff, &Element::Vec(vec![1, 0]), &Element::Vec(vec![2, 4]))
            .unwrap()
        {
            SdomDecision::Refuted { refutation } => {
                assert_eq!(refutation, Refutation::NotProportional)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(refute_points(&aff, &[2, 2], &[3, 2]).unwrap().is_some());
    }

    #[test]
    fn induced_order_closed_form() {
        let w2 = w(2).with_order_mode(OrderMode::Induced);
        assert_eq!(sdom_least_k_points(&w2, &[3], &[4]).unwrap(), Some(3));
        assert_eq!(sdom_least_k_points(&w2, &[4], &[4]).unwrap(), None);
    }
}
