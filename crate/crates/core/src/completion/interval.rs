//! Countably generated intervals of a base model.
//!
//! The representable class is `Principal(g) = [0, g]`, `Chain` (the union of
//! `[0, g + k·u]` over `k >= 0`) and `Top = V`. Normal forms: a chain with
//! zero increment is principal, a chain whose increment is full is `Top`,
//! and every interval of the zero semigroup is `Top`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::comparison::sdom_least_k_points;
use crate::error::{Error, Result};
use crate::semigroup::{
    add_points, is_zero_point, scale_point, sub_points, Element, Kind, OrderCertificate, OrderMode,
    Point, ProptoCertificate, SemigroupModel,
};

use super::Completion;

/// An interval as given on input or reported on output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interval {
    Principal(Element),
    /// Generated by `preamble` (increasing) followed by
    /// `last + increment, last + 2·increment, ...`.
    Chain {
        preamble: Vec<Element>,
        increment: Element,
    },
    Top,
}

impl Interval {
    pub fn to_json(&self) -> Value {
        match self {
            Interval::Principal(g) => json!({ "principal": g.to_json() }),
            Interval::Chain {
                preamble,
                increment,
            } => json!({ "chain": {
                "preamble": preamble.iter().map(Element::to_json).collect::<Vec<_>>(),
                "increment": increment.to_json(),
            }}),
            Interval::Top => json!("top"),
        }
    }

    /// Accepts `"top"`, `{"principal": e}`, `{"chain": {"preamble": [..],
    /// "increment": e}}`, or a bare element as shorthand for a principal
    /// interval.
    pub fn from_json(value: &Value) -> Result<Self> {
        if value.as_str() == Some("top") {
            return Ok(Interval::Top);
        }
        if let Some(obj) = value.as_object() {
            if let Some(g) = obj.get("principal") {
                return Ok(Interval::Principal(Element::from_json(g)?));
            }
            if let Some(c) = obj.get("chain") {
                let preamble = c
                    .get("preamble")
                    .and_then(Value::as_array)
                    .map(|a| a.iter().map(Element::from_json).collect::<Result<Vec<_>>>())
                    .transpose()?
                    .unwrap_or_default();
                let increment = Element::from_json(
                    c.get("increment")
                        .ok_or_else(|| Error::Shape("chain needs an increment".into()))?,
                )?;
                return Ok(Interval::Chain {
                    preamble,
                    increment,
                });
            }
        }
        Ok(Interval::Principal(Element::from_json(value)?))
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Interval::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// Normalized interval in flat coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Iv {
    P(Point),
    /// Increment is non-zero and not full.
    C(Point, Point),
    Top,
}

impl Iv {
    /// `(base, increment)` with `P(g) = (g, 0)`; `None` for `Top`.
    pub(crate) fn parts(&self, dim: usize) -> Option<(Point, Point)> {
        match self {
            Iv::P(g) => Some((g.clone(), vec![0; dim])),
            Iv::C(g, u) => Some((g.clone(), u.clone())),
            Iv::Top => None,
        }
    }
}

/// Evidence for an inclusion `I ⊆ J` between normalized intervals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InclusionCertificate {
    IntoTop,
    /// `I = [0, a]` and `a <= h + step·v` where `J` has base `h`, increment `v`.
    Element {
        step: u64,
        order: OrderCertificate,
    },
    /// `I` has base `g`, increment `u`: `g <= h + step·v` and `u <= n·v`.
    Chain {
        step: u64,
        order: OrderCertificate,
        growth: ProptoCertificate,
    },
    /// Both sides are `Top` (the zero semigroup).
    TopIntoTop,
}

impl Completion {
    pub(crate) fn normalize(&self, base: Point, inc: Point) -> Result<Iv> {
        if self.model.is_trivial() {
            return Ok(Iv::Top);
        }
        if is_zero_point(&inc) {
            return Ok(Iv::P(base));
        }
        if self.is_full_exact(&inc)? {
            return Ok(Iv::Top);
        }
        Ok(Iv::C(base, inc))
    }

    /// Every generator is `∝ u`.
    pub(crate) fn is_full_exact(&self, u: &[u64]) -> Result<bool> {
        if let Some(&known) = self.fullness.read().expect("cache lock").get(u) {
            return Ok(known);
        }
        let mut full = true;
        for g in self.model.flat_generators() {
            if !self.model.propto_points(&g, u)? {
                full = false;
                break;
            }
        }
        self.fullness
            .write()
            .expect("cache lock")
            .insert(u.to_vec(), full);
        Ok(full)
    }

    pub(crate) fn principal(&self, g: Point) -> Iv {
        if self.model.is_trivial() {
            Iv::Top
        } else {
            Iv::P(g)
        }
    }

    /// Reads an interval, checking that its generators are members within the
    /// element bound and that a chain preamble is increasing.
    pub(crate) fn lower(&self, i: &Interval) -> Result<Iv> {
        match i {
            Interval::Top => Ok(Iv::Top),
            Interval::Principal(g) => Ok(self.principal(self.model.checked_point(g)?)),
            Interval::Chain {
                preamble,
                increment,
            } => {
                let u = self.model.checked_point(increment)?;
                let mut last: Option<Point> = None;
                for (idx, e) in preamble.iter().enumerate() {
                    let p = self.model.checked_point(e)?;
                    if let Some(prev) = &last {
                        if !self.model.leq_points(prev, &p)? {
                            return Err(Error::NotIncreasing(idx));
                        }
                    }
                    last = Some(p);
                }
                let base = last.unwrap_or_else(|| vec![0; self.model.dimension()]);
                self.normalize(base, u)
            }
        }
    }

    pub(crate) fn lift(&self, iv: &Iv) -> Interval {
        let m = &self.model;
        match iv {
            Iv::P(g) => Interval::Principal(m.element_from_point(g)),
            Iv::C(g, u) => Interval::Chain {
                preamble: vec![m.element_from_point(g)],
                increment: m.element_from_point(u),
            },
            Iv::Top => Interval::Top,
        }
    }

    /// Normal form of an interval.
    pub fn canonical(&self, i: &Interval) -> Result<Interval> {
        Ok(self.lift(&self.lower(i)?))
    }

    // ----- chains ------------------------------------------------------------

    /// Least `k >= 0` with `x <= g + k·u`, or `None` if there is none.
    ///
    /// The set of such `k` is upward closed because `u` is a member, so the
    /// answer for a direct sum is the maximum over its components.
    pub(crate) fn first_k_leq(&self, x: &[u64], g: &[u64], u: &[u64]) -> Result<Option<u64>> {
        first_k_leq_in(&self.model, x, g, u)
    }

    pub(crate) fn iv_member(&self, iv: &Iv, x: &[u64]) -> Result<bool> {
        Ok(match iv {
            Iv::Top => true,
            Iv::P(g) => self.model.leq_points(x, g)?,
            Iv::C(g, u) => self.first_k_leq(x, g, u)?.is_some(),
        })
    }

    pub fn interval_member(&self, i: &Interval, x: &Element) -> Result<bool> {
        let iv = self.lower(i)?;
        let x = self.model.checked_point(x)?;
        self.iv_member(&iv, &x)
    }

    // ----- arithmetic ----------------------------------------------------------

    pub(crate) fn iv_add(&self, a: &Iv, b: &Iv) -> Result<Iv> {
        let d = self.model.dimension();
        match (a.parts(d), b.parts(d)) {
            (Some((g, u)), Some((h, v))) => {
                self.normalize(add_points(&g, &h)?, add_points(&u, &v)?)
            }
            _ => Ok(Iv::Top),
        }
    }

    pub(crate) fn iv_scale(&self, a: &Iv, m: u64) -> Result<Iv> {
        if m == 0 {
            return Ok(self.principal(vec![0; self.model.dimension()]));
        }
        match a {
            Iv::Top => Ok(Iv::Top),
            Iv::P(g) => Ok(Iv::P(scale_point(g, m)?)),
            // m·u generates the same order ideal as u, so it is still not full.
            Iv::C(g, u) => Ok(Iv::C(scale_point(g, m)?, scale_point(u, m)?)),
        }
    }

    pub fn interval_add(&self, a: &Interval, b: &Interval) -> Result<Interval> {
        let s = self.iv_add(&self.lower(a)?, &self.lower(b)?)?;
        Ok(self.lift(&s))
    }

    pub fn interval_scale(&self, a: &Interval, m: u64) -> Result<Interval> {
        let s = self.iv_scale(&self.lower(a)?, m)?;
        Ok(self.lift(&s))
    }

    // ----- order ------------------------------------------------------------------

    pub(crate) fn iv_include(&self, i: &Iv, j: &Iv) -> Result<Option<InclusionCertificate>> {
        let model = &self.model;
        let d = model.dimension();
        Ok(match (i, j) {
            (Iv::Top, Iv::Top) if model.is_trivial() => Some(InclusionCertificate::TopIntoTop),
            (_, Iv::Top) => Some(InclusionCertificate::IntoTop),
            (Iv::Top, _) => None,
            (Iv::C(..), Iv::P(_)) => None,
            (Iv::P(a), j) => {
                let (h, v) = j.parts(d).expect("not top");
                match self.first_k_leq(a, &h, &v)? {
                    Some(step) => {
                        let target = add_points(&h, &scale_point(&v, step)?)?;
                        let order = model
                            .order_certificate_points(a, &target)?
                            .expect("first_k_leq is exact");
                        Some(InclusionCertificate::Element { step, order })
                    }
                    None => None,
                }
            }
            (Iv::C(g, u), Iv::C(h, v)) => {
                let Some(n) = model.least_scaling(u, v)? else {
                    return Ok(None);
                };
                match self.first_k_leq(g, h, v)? {
                    Some(step) => {
                        let target = add_points(h, &scale_point(v, step)?)?;
                        let order = model
                            .order_certificate_points(g, &target)?
                            .expect("first_k_leq is exact");
                        let inner = model
                            .order_certificate_points(u, &scale_point(v, n)?)?
                            .expect("least_scaling is exact");
                        Some(InclusionCertificate::Chain {
                            step,
                            order,
                            growth: ProptoCertificate { n, inner },
                        })
                    }
                    None => None,
                }
            }
        })
    }

    /// Re-checks an inclusion certificate without searching.
    pub(crate) fn iv_replay(&self, cert: &InclusionCertificate, i: &Iv, j: &Iv) -> Result<bool> {
        let model = &self.model;
        let d = model.dimension();
        match (cert, i, j) {
            (InclusionCertificate::TopIntoTop, Iv::Top, Iv::Top) => Ok(model.is_trivial()),
            (InclusionCertificate::IntoTop, _, Iv::Top) => Ok(true),
            (InclusionCertificate::Element { step, order }, Iv::P(a), j) if *j != Iv::Top => {
                let (h, v) = j.parts(d).expect("not top");
                let target = add_points(&h, &scale_point(&v, *step)?)?;
                order.replay_points(model, a, &target)
            }
            (
                InclusionCertificate::Chain {
                    step,
                    order,
                    growth,
                },
                Iv::C(g, u),
                Iv::C(h, v),
            ) => {
                let target = add_points(h, &scale_point(v, *step)?)?;
                Ok(order.replay_points(model, g, &target)?
                    && growth
                        .inner
                        .replay_points(model, u, &scale_point(v, growth.n)?)?)
            }
            _ => Ok(false),
        }
    }

    pub fn interval_leq(&self, i: &Interval, j: &Interval) -> Result<Option<InclusionCertificate>> {
        self.iv_include(&self.lower(i)?, &self.lower(j)?)
    }

    pub fn replay_inclusion(
        &self,
        cert: &InclusionCertificate,
        i: &Interval,
        j: &Interval,
    ) -> Result<bool> {
        self.iv_replay(cert, &self.lower(i)?, &self.lower(j)?)
    }

    /// `I ≪ J`: only principal intervals are compact, and `[0, g] ≪ J` iff
    /// `g ∈ J`.
    pub(crate) fn iv_way_below(&self, i: &Iv, j: &Iv) -> Result<bool> {
        match i {
            Iv::P(g) => self.iv_member(j, g),
            Iv::Top => Ok(self.model.is_trivial()),
            Iv::C(..) => Ok(false),
        }
    }

    pub fn way_below(&self, i: &Interval, j: &Interval) -> Result<bool> {
        self.iv_way_below(&self.lower(i)?, &self.lower(j)?)
    }

    /// `I ⊆ n·J` for some `n`.
    pub(crate) fn iv_propto(&self, i: &Iv, j: &Iv) -> Result<bool> {
        let model = &self.model;
        let d = model.dimension();
        match (i, j) {
            (_, Iv::Top) => Ok(true),
            (Iv::Top, _) => Ok(model.is_trivial()),
            (Iv::C(..), Iv::P(_)) => Ok(false),
            (Iv::P(a), j) => {
                let (h, v) = j.parts(d).expect("not top");
                model.propto_points(a, &add_points(&h, &v)?)
            }
            (Iv::C(g, u), Iv::C(h, v)) => {
                Ok(model.propto_points(u, v)? && model.propto_points(g, &add_points(h, v)?)?)
            }
        }
    }

    pub fn interval_propto(&self, i: &Interval, j: &Interval) -> Result<bool> {
        self.iv_propto(&self.lower(i)?, &self.lower(j)?)
    }

    /// Least `k` with `(k+1)I ⊆ kJ`, or `None` when stable domination fails.
    pub(crate) fn iv_sdom(&self, i: &Iv, j: &Iv) -> Result<Option<u64>> {
        let model = &self.model;
        let d = model.dimension();
        match (i, j) {
            (_, Iv::Top) => Ok(Some(1)),
            (Iv::Top, _) => Ok(None),
            (Iv::C(..), Iv::P(_)) => Ok(None),
            (Iv::P(a), Iv::P(b)) => sdom_least_k_points(model, a, b),
            (i, j) => {
                let (g, u) = i.parts(d).expect("not top");
                let (h, v) = j.parts(d).expect("not top");
                if !is_zero_point(&u) && !model.propto_points(&u, &v)? {
                    return Ok(None);
                }
                // Coordinates of g not reached by the increment must be
                // strictly dominated by h.
                if (0..d).any(|c| g[c] > 0 && v[c] == 0 && g[c] >= h[c]) {
                    return Ok(None);
                }
                let mut lhs = scale_point(&g, 2)?;
                let mut kh = h.clone();
                let mut kv = v.clone();
                for k in 1..=crate::comparison::SDOM_HORIZON {
                    if first_k_leq_in(model, &lhs, &kh, &kv)?.is_some() {
                        return Ok(Some(k));
                    }
                    lhs = add_points(&lhs, &g)?;
                    kh = add_points(&kh, &h)?;
                    kv = add_points(&kv, &v)?;
                }
                Err(Error::UnknownAtBound(format!(
                    "interval stable domination needs k above {}",
                    crate::comparison::SDOM_HORIZON
                )))
            }
        }
    }

    pub fn interval_stably_dominated(&self, i: &Interval, j: &Interval) -> Result<Option<u64>> {
        self.iv_sdom(&self.lower(i)?, &self.lower(j)?)
    }

    /// Whether `I` is full: every compact `[0, g]` (g a generator within the
    /// element bound) is `∝ I`.
    pub(crate) fn iv_is_full(&self, i: &Iv, bound: u64) -> Result<bool> {
        for g in self.model.flat_generators() {
            if crate::semigroup::total(&g) <= bound as u128 && !self.iv_propto(&Iv::P(g), i)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub(crate) fn first_k_leq_in(
    model: &SemigroupModel,
    x: &[u64],
    g: &[u64],
    u: &[u64],
) -> Result<Option<u64>> {
    if model.order_mode() == OrderMode::Induced {
        let mut k = 0;
        for i in 0..x.len() {
            if x[i] <= g[i] {
                continue;
            }
            if u[i] == 0 {
                return Ok(None);
            }
            k = k.max((x[i] - g[i]).div_ceil(u[i]));
        }
        return Ok(Some(k));
    }
    if is_zero_point(u) {
        return Ok(model.leq_points(x, g)?.then_some(0));
    }
    match model.kind() {
        Kind::Numerical { .. } => {
            let conductor = model.numerical_data().expect("numerical").conductor();
            let mut top = g[0];
            let mut k = 0;
            loop {
                if let Some(z) = top.checked_sub(x[0]) {
                    if model.is_member_point(&[z])? {
                        return Ok(Some(k));
                    }
                    if z >= conductor {
                        // Multiples of the gcd above the conductor are members,
                        // and x, g, u are all such multiples.
                        unreachable!("difference above the conductor is a member");
                    }
                }
                top = top.checked_add(u[0]).ok_or(Error::Overflow)?;
                k += 1;
            }
        }
        Kind::DirectSum { components } => {
            let mut k = 0;
            for (c, r) in components.iter().zip(model.component_ranges()) {
                match first_k_leq_in(c, &x[r.clone()], &g[r.clone()], &u[r])? {
                    Some(kc) => k = k.max(kc),
                    None => return Ok(None),
                }
            }
            Ok(Some(k))
        }
        Kind::Affine { .. } => {
            if !model.propto_points(x, &add_points(g, u)?)? {
                return Ok(None);
            }
            let horizon = model.default_search_limit();
            let mut top = g.to_vec();
            for k in 0..=horizon {
                if let Some(z) = sub_points(&top, x) {
                    if model.is_member_point(&z)? {
                        return Ok(Some(k));
                    }
                }
                top = add_points(&top, u)?;
            }
            Err(Error::UndecidableAtBound(format!(
                "{} <= {} + k·{} for no k <= {horizon}",
                model.element_from_point(x),
                model.element_from_point(g),
                model.element_from_point(u)
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(gens: &[u64]) -> Completion {
        Completion::new(SemigroupModel::numerical(gens.iter().copied(), 10_000_000).unwrap())
    }

    fn p(v: u64) -> Interval {
        Interval::Principal(Element::Num(v))
    }

    fn chain(start: u64, inc: u64) -> Interval {
        Interval::Chain {
            preamble: vec![Element::Num(start)],
            increment: Element::Num(inc),
        }
    }

    #[test]
    fn membership() {
        let z = c(&[1]);
        assert!(z.interval_member(&p(2), &Element::Num(1)).unwrap());
        assert!(z
            .interval_member(&chain(1, 1), &Element::Num(1_000_000))
            .unwrap());
        assert!(!c(&[3, 4]).interval_member(&p(4), &Element::Num(3)).unwrap());
    }

    #[test]
    fn normal_forms() {
        let z = c(&[1]);
        assert_eq!(z.canonical(&chain(1, 1)).unwrap(), Interval::Top);
        assert_eq!(z.canonical(&chain(4, 0)).unwrap(), p(4));
        let trivial = c(&[]);
        assert_eq!(trivial.canonical(&p(0)).unwrap(), Interval::Top);
        assert!(matches!(
            z.canonical(&Interval::Chain {
                preamble: vec![Element::Num(3), Element::Num(2)],
                increment: Element::Num(0)
            }),
            Err(Error::NotIncreasing(1))
        ));
    }

    #[test]
    fn addition_and_inclusion() {
        let z = c(&[1]);
        assert_eq!(z.interval_add(&p(2), &p(3)).unwrap(), p(5));
        assert_eq!(z.interval_add(&p(2), &p(0)).unwrap(), p(2));
        assert_eq!(
            z.interval_add(&Interval::Top, &p(7)).unwrap(),
            Interval::Top
        );
        let w2 = c(&[3, 4]);
        let cert = w2.interval_leq(&p(3), &p(7)).unwrap().unwrap();
        assert!(w2.replay_inclusion(&cert, &p(3), &p(7)).unwrap());
        assert!(w2.interval_leq(&p(3), &p(4)).unwrap().is_none());
        assert!(z.interval_leq(&chain(1, 1), &p(1_000)).unwrap().is_none());
    }

    #[test]
    fn compact_containment() {
        let z = c(&[1]);
        assert!(z.way_below(&p(2), &Interval::Top).unwrap());
        assert!(!z.way_below(&Interval::Top, &Interval::Top).unwrap());
        assert!(z.way_below(&p(5), &p(5)).unwrap());
    }

    #[test]
    fn chains_in_a_direct_sum() {
        let w1 = SemigroupModel::numerical([2, 3], 100).unwrap();
        let sum = Completion::new(SemigroupModel::direct_sum(vec![w1.clone(), w1], 100).unwrap());
        let i = Interval::Chain {
            preamble: vec![Element::Vec(vec![2, 0])],
            increment: Element::Vec(vec![0, 2]),
        };
        let iv = sum.lower(&i).unwrap();
        assert!(matches!(iv, Iv::C(..)));
        assert!(sum.iv_member(&iv, &[2, 40]).unwrap());
        assert!(!sum.iv_member(&iv, &[3, 0]).unwrap());
        // 2·3 - 5 = 1 is a gap of W_1, 2·4 - 5 = 3 is not.
        assert_eq!(sum.first_k_leq(&[2, 5], &[2, 0], &[0, 2]).unwrap(), Some(4));
    }

    #[test]
    fn interval_stable_domination() {
        let w2 = c(&[3, 4]);
        assert_eq!(w2.interval_stably_dominated(&p(3), &p(4)).unwrap(), Some(3));
        assert_eq!(w2.interval_stably_dominated(&p(4), &p(3)).unwrap(), None);
        assert_eq!(
            w2.interval_stably_dominated(&Interval::Top, &Interval::Top)
                .unwrap(),
            Some(1)
        );
        assert_eq!(
            w2.interval_stably_dominated(&Interval::Top, &p(3)).unwrap(),
            None
        );
    }
}
