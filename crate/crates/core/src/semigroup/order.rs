//! Membership, the two order relations, `∝`, and bounded enumeration.

use std::collections::BTreeSet;

use serde::Serialize;

use super::affine::{self, on_face_of};
use super::{
    add_points, coordinatewise_leq, is_zero_point, scale_point, sub_points, total, Element,
    Frobenius, Kind, OrderMode, Point, SemigroupModel,
};
use crate::error::{Error, Result};

/// Largest multiplier tried when searching for the least `n` with `x <= n·y`
/// after `x ∝ y` has been established.
const SCALING_HORIZON: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Coefficients over the generators (in [`SemigroupModel::flat_generators`]
    /// order), lexicographically smallest.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization: Option<Vec<u64>>,
}

/// Evidence for `x <= y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderCertificate {
    /// `y = x + z` with `z` a member.
    Witness { z: Element },
    /// Both are members and `x <= y` in every coordinate.
    Coordinatewise,
}

impl OrderCertificate {
    /// Re-checks the certificate against `x <= y` without searching.
    pub fn replay_points(&self, model: &SemigroupModel, x: &[u64], y: &[u64]) -> Result<bool> {
        match self {
            OrderCertificate::Witness { z } => {
                let z = model.flatten(z)?;
                Ok(model.is_member_point(&z)? && add_points(x, &z)? == y)
            }
            OrderCertificate::Coordinatewise => Ok(model.order_mode() == OrderMode::Induced
                && coordinatewise_leq(x, y)
                && model.is_member_point(x)?
                && model.is_member_point(y)?),
        }
    }

    pub fn replay(&self, model: &SemigroupModel, x: &Element, y: &Element) -> Result<bool> {
        self.replay_points(model, &model.flatten(x)?, &model.flatten(y)?)
    }
}

/// Evidence for `x ∝ y`: the least `n` with `x <= n·y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProptoCertificate {
    pub n: u64,
    pub inner: OrderCertificate,
}

impl ProptoCertificate {
    pub fn replay(&self, model: &SemigroupModel, x: &Element, y: &Element) -> Result<bool> {
        let x = model.flatten(x)?;
        let ny = scale_point(&model.flatten(y)?, self.n)?;
        self.inner.replay_points(model, &x, &ny)
    }
}

impl SemigroupModel {
    pub fn member(&self, value: &Element) -> Result<Membership> {
        let p = self.flatten(value)?;
        self.check_bound(&p)?;
        if !self.is_member_point(&p)? {
            return Ok(Membership {
                member: false,
                factorization: None,
            });
        }
        Ok(Membership {
            member: true,
            factorization: Some(self.factorize_point(&p)?),
        })
    }

    fn factorize_point(&self, p: &[u64]) -> Result<Vec<u64>> {
        match &self.kind {
            Kind::DirectSum { components } => {
                let mut out = Vec::new();
                for (c, r) in components.iter().zip(self.component_ranges()) {
                    out.extend(c.factorize_point(&p[r])?);
                }
                Ok(out)
            }
            _ => affine::factorize(&self.flat_generators(), p)?
                .ok_or_else(|| Error::NotMember(self.element_from_point(p).to_string())),
        }
    }

    pub fn frobenius(&self) -> Result<Frobenius> {
        self.numerical_data()
            .map(|d| d.frobenius())
            .ok_or(Error::WrongKind)
    }

    /// `x <= y` for members given as flat points. No bound is applied.
    pub fn leq_points(&self, x: &[u64], y: &[u64]) -> Result<bool> {
        match self.order_mode {
            OrderMode::Induced => Ok(coordinatewise_leq(x, y)),
            OrderMode::Algebraic => match sub_points(y, x) {
                Some(z) => self.is_member_point(&z),
                None => Ok(false),
            },
        }
    }

    pub(crate) fn order_certificate_points(
        &self,
        x: &[u64],
        y: &[u64],
    ) -> Result<Option<OrderCertificate>> {
        if !self.leq_points(x, y)? {
            return Ok(None);
        }
        Ok(Some(match self.order_mode {
            OrderMode::Induced => OrderCertificate::Coordinatewise,
            OrderMode::Algebraic => OrderCertificate::Witness {
                z: self.element_from_point(&sub_points(y, x).expect("x <= y")),
            },
        }))
    }

    pub fn leq(&self, x: &Element, y: &Element) -> Result<Option<OrderCertificate>> {
        let x = self.checked_point(x)?;
        let y = self.checked_point(y)?;
        self.order_certificate_points(&x, &y)
    }

    /// Exact test for `w ∝ y`, i.e. `w <= n·y` for some `n >= 1`.
    ///
    /// Under the algebraic order this holds iff `w` lies on the smallest face
    /// of the generator cone containing `y`; under the induced order iff the
    /// support of `w` is contained in the support of `y`.
    pub fn propto_points(&self, w: &[u64], y: &[u64]) -> Result<bool> {
        if is_zero_point(w) {
            return Ok(true);
        }
        if self.order_mode == OrderMode::Induced {
            return Ok(w.iter().zip(y).all(|(a, b)| *a == 0 || *b > 0));
        }
        Ok(match &self.kind {
            Kind::Numerical { .. } => !is_zero_point(y),
            Kind::Affine { generators, .. } => on_face_of(generators, y, w),
            Kind::DirectSum { components } => {
                for (c, r) in components.iter().zip(self.component_ranges()) {
                    if !c.propto_points(&w[r.clone()], &y[r])? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }

    /// Least `n >= 1` with `x <= n·y`, or `None` when `x` is not `∝ y`.
    pub(crate) fn least_scaling(&self, x: &[u64], y: &[u64]) -> Result<Option<u64>> {
        if !self.propto_points(x, y)? {
            return Ok(None);
        }
        if self.order_mode == OrderMode::Induced {
            let n = x
                .iter()
                .zip(y)
                .filter(|(a, _)| **a > 0)
                .map(|(a, b)| a.div_ceil(*b))
                .max()
                .unwrap_or(1);
            return Ok(Some(n.max(1)));
        }
        let mut ny = y.to_vec();
        for n in 1..=SCALING_HORIZON {
            if self.leq_points(x, &ny)? {
                return Ok(Some(n));
            }
            ny = add_points(&ny, y)?;
        }
        Err(Error::UnknownAtBound(format!(
            "no multiplier up to {SCALING_HORIZON} for {} <= n·{}",
            self.element_from_point(x),
            self.element_from_point(y)
        )))
    }

    /// Smallest `n <= n_max` with `x <= n·y`.
    pub fn propto(
        &self,
        x: &Element,
        y: &Element,
        n_max: u64,
    ) -> Result<Option<ProptoCertificate>> {
        let x = self.checked_point(x)?;
        let y = self.checked_point(y)?;
        let mut ny = y.clone();
        for n in 1..=n_max {
            if let Some(inner) = self.order_certificate_points(&x, &ny)? {
                return Ok(Some(ProptoCertificate { n, inner }));
            }
            ny = add_points(&ny, &y)?;
        }
        Ok(None)
    }

    /// Members with coordinate sum at most `bound`, ordered by coordinate sum
    /// and then lexicographically.
    pub fn enumerate_points(&self, bound: u64) -> Result<Vec<Point>> {
        if bound > self.element_bound {
            return Err(Error::ValueOutOfBound {
                value: bound.to_string(),
                bound: self.element_bound,
            });
        }
        let mut points = self.points_up_to(bound);
        points.sort_by(|a, b| total(a).cmp(&total(b)).then_with(|| a.cmp(b)));
        Ok(points)
    }

    fn points_up_to(&self, bound: u64) -> Vec<Point> {
        match &self.kind {
            Kind::Numerical { .. } => {
                let data = self.numerical_data().expect("numerical");
                (0..=bound)
                    .filter(|v| data.contains(*v))
                    .map(|v| vec![v])
                    .collect()
            }
            Kind::Affine { generators, .. } => {
                let mut seen: BTreeSet<Point> = BTreeSet::new();
                let mut frontier = vec![vec![0; self.dimension()]];
                seen.insert(frontier[0].clone());
                while let Some(p) = frontier.pop() {
                    for g in generators {
                        let q: Point = p.iter().zip(g).map(|(a, b)| a + b).collect();
                        if total(&q) <= bound as u128 && seen.insert(q.clone()) {
                            frontier.push(q);
                        }
                    }
                }
                seen.into_iter().collect()
            }
            Kind::DirectSum { components } => {
                let mut acc: Vec<Point> = vec![Vec::new()];
                for c in components {
                    let parts = c.points_up_to(bound);
                    let mut next = Vec::new();
                    for a in &acc {
                        let used = total(a);
                        for p in &parts {
                            if used + total(p) <= bound as u128 {
                                let mut q = a.clone();
                                q.extend_from_slice(p);
                                next.push(q);
                            }
                        }
                    }
                    acc = next;
                }
                acc
            }
        }
    }

    pub fn enumerate_elements(&self, bound: u64) -> Result<Vec<Element>> {
        Ok(self
            .enumerate_points(bound)?
            .iter()
            .map(|p| self.element_from_point(p))
            .collect())
    }
}
