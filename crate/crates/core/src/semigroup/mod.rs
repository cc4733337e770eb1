//! Finitely generated positively ordered abelian semigroups.
//!
//! A [`SemigroupModel`] is a numerical semigroup, an affine semigroup in
//! Z^d with non-negative generators, or a finite direct sum of such models.
//! Every model embeds in some Z^D; [`Point`] is that flat coordinate vector
//! and [`Element`] the canonical presentation used on input and output.

pub(crate) mod affine;
mod element;
mod numerical;
mod order;

use std::ops::Range;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub(crate) use element::{
    add_points, coordinatewise_leq, is_zero_point, scale_point, sub_points, total,
};
pub use element::{parse_u64, parse_u64_str, Element, Point};
pub use numerical::Frobenius;
pub use order::{Membership, OrderCertificate, ProptoCertificate};

use crate::error::{Error, Result};
use affine::MembershipCache;
use numerical::NumericalData;

/// Which partial order a model carries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderMode {
    /// `x <= y` iff `y = x + z` for a member `z`.
    #[default]
    Algebraic,
    /// Coordinatewise integer order restricted to members.
    Induced,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Numerical {
        generators: Vec<u64>,
    },
    Affine {
        dimension: usize,
        generators: Vec<Point>,
    },
    DirectSum {
        components: Vec<SemigroupModel>,
    },
}

#[derive(Debug, Default)]
struct ModelCache {
    numerical: OnceLock<NumericalData>,
    membership: MembershipCache,
}

/// A semigroup together with its order and enumeration horizon.
///
/// `element_bound` caps the coordinate sum of every element handed to the
/// public operations and of every enumeration. Quantities derived inside a
/// procedure (multiples, partial sums) are decided exactly without that cap.
#[derive(Clone, Debug)]
pub struct SemigroupModel {
    kind: Kind,
    order_mode: OrderMode,
    element_bound: u64,
    cache: Arc<ModelCache>,
}

impl PartialEq for SemigroupModel {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.order_mode == other.order_mode
            && self.element_bound == other.element_bound
    }
}

impl Eq for SemigroupModel {}

impl SemigroupModel {
    fn from_kind(kind: Kind, element_bound: u64) -> Result<Self> {
        if element_bound == 0 {
            return Err(Error::Shape("element_bound must be positive".into()));
        }
        Ok(SemigroupModel {
            kind,
            order_mode: OrderMode::Algebraic,
            element_bound,
            cache: Arc::default(),
        })
    }

    /// `<generators>` inside Z+. Zeros are dropped; the rest is sorted and
    /// deduplicated.
    pub fn numerical(
        generators: impl IntoIterator<Item = u64>,
        element_bound: u64,
    ) -> Result<Self> {
        let mut gens: Vec<u64> = generators.into_iter().filter(|g| *g > 0).collect();
        gens.sort_unstable();
        gens.dedup();
        Self::from_kind(Kind::Numerical { generators: gens }, element_bound)
    }

    /// Affine semigroup generated by non-negative vectors of length `dimension`.
    pub fn affine(dimension: usize, generators: Vec<Point>, element_bound: u64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Shape("affine dimension must be positive".into()));
        }
        if let Some(bad) = generators.iter().find(|g| g.len() != dimension) {
            return Err(Error::Shape(format!(
                "generator {bad:?} does not have length {dimension}"
            )));
        }
        let mut gens: Vec<Point> = generators
            .into_iter()
            .filter(|g| !is_zero_point(g))
            .collect();
        gens.sort();
        gens.dedup();
        Self::from_kind(
            Kind::Affine {
                dimension,
                generators: gens,
            },
            element_bound,
        )
    }

    /// Direct sum of `components`. The components inherit this model's order
    /// mode and element bound.
    pub fn direct_sum(components: Vec<SemigroupModel>, element_bound: u64) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Shape(
                "a direct sum needs at least one component".into(),
            ));
        }
        let mut model = Self::from_kind(Kind::DirectSum { components }, element_bound)?;
        model.propagate();
        Ok(model)
    }

    pub fn with_order_mode(mut self, mode: OrderMode) -> Self {
        self.order_mode = mode;
        self.propagate();
        self
    }

    pub fn with_element_bound(mut self, bound: u64) -> Self {
        self.element_bound = bound.max(1);
        self.propagate();
        self
    }

    fn propagate(&mut self) {
        let (mode, bound) = (self.order_mode, self.element_bound);
        if let Kind::DirectSum { components } = &mut self.kind {
            for c in components.iter_mut() {
                c.order_mode = mode;
                c.element_bound = bound;
                c.propagate();
            }
        }
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn order_mode(&self) -> OrderMode {
        self.order_mode
    }

    pub fn element_bound(&self) -> u64 {
        self.element_bound
    }

    pub fn is_numerical(&self) -> bool {
        matches!(self.kind, Kind::Numerical { .. })
    }

    /// Length of the flat coordinate vector.
    pub fn dimension(&self) -> usize {
        match &self.kind {
            Kind::Numerical { .. } => 1,
            Kind::Affine { dimension, .. } => *dimension,
            Kind::DirectSum { components } => components.iter().map(|c| c.dimension()).sum(),
        }
    }

    pub(crate) fn component_ranges(&self) -> Vec<Range<usize>> {
        match &self.kind {
            Kind::DirectSum { components } => {
                let mut start = 0;
                components
                    .iter()
                    .map(|c| {
                        let r = start..start + c.dimension();
                        start = r.end;
                        r
                    })
                    .collect()
            }
            #[allow(clippy::single_range_in_vec_init)]
            _ => vec![0..self.dimension()],
        }
    }

    /// Generators embedded in the flat coordinates.
    pub fn flat_generators(&self) -> Vec<Point> {
        match &self.kind {
            Kind::Numerical { generators } => generators.iter().map(|g| vec![*g]).collect(),
            Kind::Affine { generators, .. } => generators.clone(),
            Kind::DirectSum { components } => {
                let d = self.dimension();
                let mut out = Vec::new();
                for (c, range) in components.iter().zip(self.component_ranges()) {
                    for g in c.flat_generators() {
                        let mut p = vec![0; d];
                        p[range.clone()].copy_from_slice(&g);
                        out.push(p);
                    }
                }
                out
            }
        }
    }

    /// True for the zero semigroup {0}.
    pub fn is_trivial(&self) -> bool {
        match &self.kind {
            Kind::Numerical { generators } => generators.is_empty(),
            Kind::Affine { generators, .. } => generators.is_empty(),
            Kind::DirectSum { components } => components.iter().all(|c| c.is_trivial()),
        }
    }

    pub(crate) fn numerical_data(&self) -> Option<&NumericalData> {
        match &self.kind {
            Kind::Numerical { generators } => Some(
                self.cache
                    .numerical
                    .get_or_init(|| NumericalData::new(generators)),
            ),
            _ => None,
        }
    }

    /// Search horizon used for default `k_max` / `n_max`:
    /// `4 * (conductor + largest generator)` for numerical models, the
    /// componentwise maximum for direct sums, and `4 * (sum of all generator
    /// coordinates)` for affine models.
    pub fn default_search_limit(&self) -> u64 {
        match &self.kind {
            Kind::Numerical { generators } => {
                let data = self.numerical_data().expect("numerical");
                4 * (data.conductor() + generators.last().copied().unwrap_or(0)).max(1)
            }
            Kind::Affine { generators, .. } => 4 * generators.iter().flatten().sum::<u64>().max(1),
            Kind::DirectSum { components } => components
                .iter()
                .map(|c| c.default_search_limit())
                .max()
                .unwrap_or(4),
        }
    }

    /// Membership of a flat point, without applying `element_bound`.
    pub fn is_member_point(&self, p: &[u64]) -> Result<bool> {
        match &self.kind {
            Kind::Numerical { .. } => Ok(self.numerical_data().expect("numerical").contains(p[0])),
            Kind::Affine { generators, .. } => {
                affine::is_member(generators, p, &self.cache.membership)
            }
            Kind::DirectSum { components } => {
                for (c, r) in components.iter().zip(self.component_ranges()) {
                    if !c.is_member_point(&p[r])? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    // ----- element presentation -------------------------------------------

    pub fn zero(&self) -> Element {
        self.element_from_point(&vec![0; self.dimension()])
    }

    /// Flat coordinates of `e`, checking its shape against the model.
    ///
    /// Direct sums accept either the sparse `Sum` form or a dense `Vec` of
    /// all flat coordinates.
    pub fn flatten(&self, e: &Element) -> Result<Point> {
        match (&self.kind, e) {
            (Kind::Numerical { .. }, Element::Num(v)) => Ok(vec![*v]),
            (Kind::Numerical { .. }, Element::Vec(v)) if v.len() == 1 => Ok(v.clone()),
            (Kind::Affine { dimension, .. }, Element::Vec(v)) if v.len() == *dimension => {
                Ok(v.clone())
            }
            (Kind::DirectSum { .. }, Element::Vec(v)) if v.len() == self.dimension() => {
                Ok(v.clone())
            }
            (Kind::DirectSum { components }, Element::Sum(parts)) => {
                let mut p = vec![0; self.dimension()];
                let ranges = self.component_ranges();
                let mut last: Option<usize> = None;
                for (i, part) in parts {
                    if last.is_some_and(|l| l >= *i) {
                        return Err(Error::Shape(
                            "direct-sum support indices must be strictly increasing".into(),
                        ));
                    }
                    last = Some(*i);
                    let comp = components
                        .get(*i)
                        .ok_or_else(|| Error::Shape(format!("component index {i} out of range")))?;
                    p[ranges[*i].clone()].copy_from_slice(&comp.flatten(part)?);
                }
                Ok(p)
            }
            (_, e) => Err(Error::Shape(format!("{e} does not fit this model"))),
        }
    }

    /// Canonical element for flat coordinates.
    pub fn element_from_point(&self, p: &[u64]) -> Element {
        match &self.kind {
            Kind::Numerical { .. } => Element::Num(p[0]),
            Kind::Affine { .. } => Element::Vec(p.to_vec()),
            Kind::DirectSum { components } => Element::Sum(
                components
                    .iter()
                    .zip(self.component_ranges())
                    .enumerate()
                    .filter(|(_, (_, r))| !is_zero_point(&p[r.clone()]))
                    .map(|(i, (c, r))| (i, c.element_from_point(&p[r])))
                    .collect(),
            ),
        }
    }

    /// Canonical form of `e` (zero components dropped, dense input converted).
    pub fn canonical(&self, e: &Element) -> Result<Element> {
        Ok(self.element_from_point(&self.flatten(e)?))
    }

    /// Parses an element from JSON against this model.
    pub fn parse_element(&self, value: &Value) -> Result<Element> {
        let e = Element::from_json(value)?;
        self.canonical(&e)
    }

    /// Flattens `e` and checks that it is a member within `element_bound`.
    pub fn checked_point(&self, e: &Element) -> Result<Point> {
        let p = self.flatten(e)?;
        self.check_bound(&p)?;
        if !self.is_member_point(&p)? {
            return Err(Error::NotMember(e.to_string()));
        }
        Ok(p)
    }

    pub(crate) fn check_bound(&self, p: &[u64]) -> Result<()> {
        let t = total(p);
        if t > self.element_bound as u128 {
            return Err(Error::ValueOutOfBound {
                value: self.element_from_point(p).to_string(),
                bound: self.element_bound,
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        let p = add_points(&self.flatten(a)?, &self.flatten(b)?)?;
        Ok(self.element_from_point(&p))
    }

    pub fn scale(&self, a: &Element, k: u64) -> Result<Element> {
        let p = scale_point(&self.flatten(a)?, k)?;
        Ok(self.element_from_point(&p))
    }

    /// Coordinate sum, the grading used by enumeration and bounds.
    pub fn total(&self, e: &Element) -> Result<u128> {
        Ok(total(&self.flatten(e)?))
    }

    // ----- JSON model files ------------------------------------------------

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        Self::from_json(&value)
    }

    /// Reads a model description. Components of a direct sum may omit
    /// `order_mode` and `element_bound`; they inherit the outer values.
    pub fn from_json(value: &Value) -> Result<Self> {
        Self::from_json_at(value, "$", None)
    }

    fn from_json_at(value: &Value, at: &str, inherited: Option<u64>) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::parse(at, "model must be a JSON object"))?;
        let wrap = |field: &str, err: Error| match err {
            Error::Parse { .. } => err,
            other => Error::parse(format!("{at}.{field}"), other.to_string()),
        };
        let bound = match obj.get("element_bound") {
            Some(v) => parse_u64(v).map_err(|e| wrap("element_bound", e))?,
            None => inherited
                .ok_or_else(|| Error::parse(format!("{at}.element_bound"), "missing field"))?,
        };
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse(format!("{at}.kind"), "missing or not a string"))?;
        let generators = || -> Result<&Vec<Value>> {
            obj.get("generators")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(format!("{at}.generators"), "expected an array"))
        };
        let model = match kind {
            "numerical" => {
                let gens = generators()?
                    .iter()
                    .enumerate()
                    .map(|(i, g)| parse_u64(g).map_err(|e| wrap(&format!("generators[{i}]"), e)))
                    .collect::<Result<Vec<_>>>()?;
                Self::numerical(gens, bound).map_err(|e| wrap("generators", e))?
            }
            "affine" => {
                let mut gens = Vec::new();
                for (i, g) in generators()?.iter().enumerate() {
                    let field = format!("generators[{i}]");
                    let row = g.as_array().ok_or_else(|| {
                        Error::parse(format!("{at}.{field}"), "expected a vector")
                    })?;
                    gens.push(
                        row.iter()
                            .map(parse_u64)
                            .collect::<Result<Vec<_>>>()
                            .map_err(|e| wrap(&field, e))?,
                    );
                }
                let dimension = match obj.get("dimension") {
                    Some(d) => parse_u64(d).map_err(|e| wrap("dimension", e))? as usize,
                    None => gens.first().map(Vec::len).ok_or_else(|| {
                        Error::parse(format!("{at}.dimension"), "missing and no generators given")
                    })?,
                };
                Self::affine(dimension, gens, bound).map_err(|e| wrap("generators", e))?
            }
            "direct_sum" => {
                let comps = obj
                    .get("components")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::parse(format!("{at}.components"), "expected an array"))?;
                let components = comps
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        Self::from_json_at(c, &format!("{at}.components[{i}]"), Some(bound))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::direct_sum(components, bound).map_err(|e| wrap("components", e))?
            }
            other => {
                return Err(Error::parse(
                    format!("{at}.kind"),
                    format!("unknown kind {other:?}"),
                ))
            }
        };
        let mode = match obj.get("order_mode") {
            None => OrderMode::Algebraic,
            Some(v) => serde_json::from_value(v.clone()).map_err(|_| {
                Error::parse(
                    format!("{at}.order_mode"),
                    "expected \"algebraic\" or \"induced\"",
                )
            })?,
        };
        Ok(model.with_order_mode(mode))
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.kind_json();
        v["order_mode"] = json!(self.order_mode);
        v["element_bound"] = json!(self.element_bound);
        v
    }

    fn kind_json(&self) -> Value {
        match &self.kind {
            Kind::Numerical { generators } => {
                json!({"kind": "numerical", "generators": generators})
            }
            Kind::Affine {
                dimension,
                generators,
            } => json!({"kind": "affine", "dimension": dimension, "generators": generators}),
            Kind::DirectSum { components } => json!({
                "kind": "direct_sum",
                "components": components.iter().map(|c| c.kind_json()).collect::<Vec<_>>(),
            }),
        }
    }
}

impl Serialize for SemigroupModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SemigroupModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        SemigroupModel::from_json(&v).map_err(serde::de::Error::custom)
    }
}
