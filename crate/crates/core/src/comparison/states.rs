//! Normalized states as points of a rational polyhedral cone.
//!
//! For a finitely generated model under the algebraic order, a state
//! normalized at `y` restricted to the order ideal of `y` is `w ↦ v·w` for a
//! rational vector `v` with `v·g >= 0` on the generators `g ∝ y` and
//! `v·y = 1`. Elements outside the ideal take the value ∞.

use num::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::stable::stably_dominated;
use crate::error::{Error, Result};
use crate::lp::{maximize, rat_u, LpOutcome, Rational};
use crate::semigroup::{
    is_zero_point, Element, OrderMode, Point, ProptoCertificate, SemigroupModel,
};

/// Supremum of `f(x)` over the normalized states `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateBound {
    Finite(Rational),
    Infinite,
}

impl StateBound {
    pub fn at_least(&self, r: &Rational) -> bool {
        match self {
            StateBound::Finite(v) => v >= r,
            StateBound::Infinite => true,
        }
    }

    pub fn below_one(&self) -> bool {
        !self.at_least(&Rational::one())
    }
}

impl std::fmt::Display for StateBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateBound::Finite(v) => write!(f, "{v}"),
            StateBound::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for StateBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StateCone {
    pub dimension: usize,
    pub normalizer: Element,
    /// Generators in the order ideal of the normalizer, in flat coordinates.
    /// The cone is `{v : v·g >= 0 for these g, v·normalizer = 1}`.
    pub ideal_generators: Vec<Point>,
    pub empty: bool,
    #[serde(skip)]
    y: Point,
}

impl StateCone {
    /// The single state, when the cone is a point (dimension one).
    pub fn unique_point(&self) -> Option<Vec<Rational>> {
        (self.dimension == 1 && !self.empty)
            .then(|| vec![Rational::new(1.into(), self.y[0].into())])
    }

    /// Whether `v` satisfies the cone constraints.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let dot = |p: &[u64]| -> Rational {
            v.iter()
                .zip(p)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * rat_u(*b))
        };
        v.len() == self.dimension
            && dot(&self.y).is_one()
            && self.ideal_generators.iter().all(|g| !dot(g).is_negative())
    }

    pub fn max_value_point(&self, x: &[u64]) -> StateBound {
        if let Some(v) = self.unique_point() {
            // Off the ideal the only normalized state is infinite; for a
            // numerical model the ideal of a non-zero y is everything.
            return StateBound::Finite(&v[0] * rat_u(x[0]));
        }
        let d = self.dimension;
        let gens = &self.ideal_generators;
        // Variables: p (d), q (d), one slack per generator; v = p - q.
        let width = 2 * d + gens.len();
        let mut a = Vec::with_capacity(gens.len() + 1);
        for (j, g) in gens.iter().enumerate() {
            let mut row = vec![Rational::zero(); width];
            for i in 0..d {
                row[i] = rat_u(g[i]);
                row[d + i] = -rat_u(g[i]);
            }
            row[2 * d + j] = -Rational::one();
            a.push(row);
        }
        let mut norm = vec![Rational::zero(); width];
        for i in 0..d {
            norm[i] = rat_u(self.y[i]);
            norm[d + i] = -rat_u(self.y[i]);
        }
        a.push(norm);
        let mut b = vec![Rational::zero(); gens.len()];
        b.push(Rational::one());
        let mut c = vec![Rational::zero(); width];
        for i in 0..d {
            c[i] = rat_u(x[i]);
            c[d + i] = -rat_u(x[i]);
        }
        match maximize(&a, &b, &c) {
            LpOutcome::Optimal { value, .. } => StateBound::Finite(value),
            LpOutcome::Unbounded => StateBound::Infinite,
            // The all-ones direction scaled by 1/total(y) is always feasible.
            LpOutcome::Infeasible => unreachable!("state cone of a non-zero member is non-empty"),
        }
    }

    pub fn max_value(&self, model: &SemigroupModel, x: &Element) -> Result<StateBound> {
        Ok(self.max_value_point(&model.flatten(x)?))
    }
}

fn cone_for_point(model: &SemigroupModel, y: &[u64]) -> Result<StateCone> {
    if model.order_mode() != OrderMode::Algebraic {
        return Err(Error::UnsupportedOrderMode);
    }
    if is_zero_point(y) {
        return Err(Error::ZeroNormalizer);
    }
    let mut ideal_generators = Vec::new();
    for g in model.flat_generators() {
        if model.propto_points(&g, y)? {
            ideal_generators.push(g);
        }
    }
    Ok(StateCone {
        dimension: model.dimension(),
        normalizer: model.element_from_point(y),
        ideal_generators,
        empty: false,
        y: y.to_vec(),
    })
}

/// The cone of states normalized at `y`.
pub fn state_cone(model: &SemigroupModel, y: &Element) -> Result<StateCone> {
    let y = model.checked_point(y)?;
    cone_for_point(model, &y)
}

/// Supremum of `f(x)` over states normalized at `y`; `y` must be non-zero.
pub(crate) fn state_max_points(model: &SemigroupModel, y: &[u64], x: &[u64]) -> Result<StateBound> {
    Ok(cone_for_point(model, y)?.max_value_point(x))
}

#[derive(Clone, Debug, Serialize)]
pub struct StateVerdict {
    pub holds: bool,
    /// `None` when `x` is not `∝ y`.
    pub propto: Option<ProptoCertificate>,
    pub cone_empty: bool,
    /// `None` when the cone is empty.
    pub max_value: Option<StateBound>,
}

/// Stable domination through states: `x ∝ y` and every state normalized at
/// `y` is strictly below 1 at `x`. With `y = 0` no state exists and the
/// criterion is `x ∝ 0`, i.e. `x = 0`.
pub fn stable_dom_via_states(
    model: &SemigroupModel,
    x: &Element,
    y: &Element,
    n_max: u64,
) -> Result<StateVerdict> {
    if model.order_mode() != OrderMode::Algebraic {
        return Err(Error::UnsupportedOrderMode);
    }
    let xp = model.checked_point(x)?;
    let yp = model.checked_point(y)?;
    if !model.propto_points(&xp, &yp)? {
        return Ok(StateVerdict {
            holds: false,
            propto: None,
            cone_empty: is_zero_point(&yp),
            max_value: (!is_zero_point(&yp)).then_some(StateBound::Infinite),
        });
    }
    let propto = model.propto(x, y, n_max)?.ok_or_else(|| {
        Error::UnknownAtBound(format!("{x} ∝ {y} needs a multiplier above {n_max}"))
    })?;
    if is_zero_point(&yp) {
        return Ok(StateVerdict {
            holds: true,
            propto: Some(propto),
            cone_empty: true,
            max_value: None,
        });
    }
    let max_value = state_max_points(model, &yp, &xp)?;
    Ok(StateVerdict {
        holds: max_value.below_one(),
        propto: Some(propto),
        cone_empty: false,
        max_value: Some(max_value),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Agree,
    /// The search found no `k` within `k_max` while the states say it holds.
    BoundExhausted,
    Disagree,
}

#[derive(Clone, Debug, Serialize)]
pub struct StatesAgreementRow {
    pub x: Element,
    pub y: Element,
    /// Least `k <= k_max` with `(k+1)x <= ky`.
    pub search_k: Option<u64>,
    /// `None` when `∝` was inconclusive within `n_max`.
    pub states_hold: Option<bool>,
    pub max_value: Option<StateBound>,
    pub agreement: Agreement,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StatesAgreementReport {
    pub rows: Vec<StatesAgreementRow>,
    pub disagreements: usize,
    pub bound_exhaustions: usize,
}

/// Runs the multiplier search and the state criterion on every pair.
pub fn check_states_agreement(
    model: &SemigroupModel,
    pairs: &[(Element, Element)],
    k_max: u64,
    n_max: u64,
) -> Result<StatesAgreementReport> {
    let mut report = StatesAgreementReport::default();
    for (x, y) in pairs {
        let search = stably_dominated(model, x, y, k_max)?;
        let states = match stable_dom_via_states(model, x, y, n_max) {
            Ok(v) => Some(v),
            Err(Error::UnknownAtBound(_)) => None,
            Err(e) => return Err(e),
        };
        let states_hold = states.as_ref().map(|s| s.holds);
        let agreement = match (search.is_some(), states_hold) {
            (true, Some(false)) => Agreement::Disagree,
            (false, Some(true)) | (false, None) => Agreement::BoundExhausted,
            _ => Agreement::Agree,
        };
        match agreement {
            Agreement::Disagree => report.disagreements += 1,
            Agreement::BoundExhausted => report.bound_exhaustions += 1,
            Agreement::Agree => {}
        }
        report.rows.push(StatesAgreementRow {
            x: x.clone(),
            y: y.clone(),
            search_k: search.map(|c| c.k),
            states_hold,
            max_value: states.and_then(|s| s.max_value),
            agreement,
        });
    }
    Ok(report)
}
