//! Bounded exhaustive n-comparison.
//!
//! For every non-zero `x` within the bound, `D(x)` collects the members `y`
//! within the bound with `x <_s y` (and `y` full in weak mode). A
//! counterexample exists iff some `(n+1)`-fold sum of `D(x)` is not above
//! `x`. The sums are built layer by layer, as bitsets for numerical models
//! and as hash sets otherwise. Direct sums in non-weak mode split into their
//! components, since both `<_s` and `<=` are componentwise there.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::stable::{sdom_holds_points, sdom_least_k_points, StableDomCertificate};
use super::Status;
use crate::error::{Error, Result};
use crate::semigroup::{
    add_points, is_zero_point, total, Element, Kind, OrderMode, Point, SemigroupModel,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonWitness {
    pub x: Element,
    pub ys: Vec<Element>,
    /// `x <_s ys[j]` for each `j`.
    pub domination: Vec<StableDomCertificate>,
}

impl ComparisonWitness {
    /// Every domination certificate replays and `x <= Σ ys` is false.
    pub fn replay(&self, model: &SemigroupModel) -> Result<bool> {
        if self.ys.len() != self.domination.len() {
            return Ok(false);
        }
        let x = model.flatten(&self.x)?;
        let mut sum = vec![0; model.dimension()];
        for (y, cert) in self.ys.iter().zip(&self.domination) {
            let y = model.flatten(y)?;
            if !cert.replay_points(model, &x, &y)? {
                return Ok(false);
            }
            sum = add_points(&sum, &y)?;
        }
        Ok(model.is_member_point(&x)? && !model.leq_points(&x, &sum)?)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    /// "bitset", "sumset" or "componentwise".
    pub method: String,
    pub elements: usize,
    pub nonzero_x_checked: usize,
    /// Pairs whose domination could not be decided within the search horizon.
    pub undecided_pairs: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<Status>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonVerdict {
    pub status: Status,
    pub n: u64,
    pub weak: bool,
    pub bound: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ComparisonWitness>,
    pub scan: ScanSummary,
}

impl ComparisonVerdict {
    /// A failure replays from its witness; `Holds` and `UnknownAtBound` are
    /// exhaustive-scan outcomes and replay by running the scan again.
    pub fn replay(&self, model: &SemigroupModel) -> Result<bool> {
        match (&self.status, &self.witness) {
            (Status::FailsWithWitness, Some(w)) => w.replay(model),
            (Status::FailsWithWitness, None) => Ok(false),
            _ => {
                let again = n_comparison(model, self.n, self.bound, self.weak)?;
                Ok(again.status == self.status)
            }
        }
    }
}

/// Exact fullness up to `bound`: every member within the bound is `∝ x`.
/// The order ideal is closed under sums, so generators suffice.
pub(crate) fn is_full_point(model: &SemigroupModel, x: &[u64], bound: u64) -> Result<bool> {
    for g in model.flat_generators() {
        if total(&g) <= bound as u128 && !model.propto_points(&g, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every member `y` within `bound` satisfies `y ∝ x`.
pub fn is_full_element(model: &SemigroupModel, x: &Element, bound: u64) -> Result<bool> {
    let x = model.checked_point(x)?;
    is_full_point(model, &x, bound)
}

pub fn n_comparison(
    model: &SemigroupModel,
    n: u64,
    bound: u64,
    weak: bool,
) -> Result<ComparisonVerdict> {
    if !weak {
        if let Kind::DirectSum { components } = model.kind() {
            return componentwise(model, components, n, bound);
        }
    }
    let points = model.enumerate_points(bound)?;
    n_comparison_points(model, n, bound, weak, &points)
}

/// As [`n_comparison`], over a caller-supplied enumeration of the members
/// within `bound` (in canonical order).
pub(crate) fn n_comparison_points(
    model: &SemigroupModel,
    n: u64,
    bound: u64,
    weak: bool,
    points: &[Point],
) -> Result<ComparisonVerdict> {
    if !model.is_trivial() && points.iter().all(|p| is_zero_point(p)) {
        return Err(Error::BoundTooSmall(format!(
            "no non-zero member has coordinate sum <= {bound}"
        )));
    }
    if !weak {
        if let Kind::DirectSum { components } = model.kind() {
            return componentwise(model, components, n, bound);
        }
    }
    let candidates: Vec<&Point> = if weak {
        let mut full = Vec::new();
        for p in points {
            if is_full_point(model, p, bound)? {
                full.push(p);
            }
        }
        full
    } else {
        points.iter().collect()
    };
    let xs: Vec<&Point> = points.iter().filter(|p| !is_zero_point(p)).collect();
    let numerical = model.is_numerical();

    let outcomes: Vec<Result<XOutcome>> = xs
        .par_iter()
        .map(|x| -> Result<XOutcome> {
            let mut dominating = Vec::new();
            let mut undecided = 0;
            for y in &candidates {
                match sdom_holds_points(model, x, y) {
                    Ok(true) => dominating.push((*y).clone()),
                    Ok(false) => {}
                    Err(Error::UnknownAtBound(_)) | Err(Error::HorizonExceeded(_)) => {
                        undecided += 1
                    }
                    Err(e) => return Err(e),
                }
            }
            let found = if dominating.is_empty() {
                None
            } else if numerical {
                bitset_search(model, x[0], &dominating, n)?
            } else {
                sumset_search(model, x, &dominating, n)?
            };
            Ok(XOutcome { undecided, found })
        })
        .collect();

    let mut undecided = 0;
    let mut witness = None;
    let mut checked = 0;
    for (x, outcome) in xs.iter().zip(outcomes) {
        let outcome = outcome?;
        checked += 1;
        undecided += outcome.undecided;
        if let Some(ys) = outcome.found {
            witness = Some(build_witness(model, x, &ys)?);
            break;
        }
    }
    let status = match (&witness, undecided) {
        (Some(_), _) => Status::FailsWithWitness,
        (None, 0) => Status::Holds,
        (None, _) => Status::UnknownAtBound,
    };
    Ok(ComparisonVerdict {
        status,
        n,
        weak,
        bound,
        witness,
        scan: ScanSummary {
            method: if numerical { "bitset" } else { "sumset" }.into(),
            elements: points.len(),
            nonzero_x_checked: checked,
            undecided_pairs: undecided,
            components: Vec::new(),
        },
    })
}

struct XOutcome {
    undecided: usize,
    found: Option<Vec<Point>>,
}

fn build_witness(model: &SemigroupModel, x: &[u64], ys: &[Point]) -> Result<ComparisonWitness> {
    let mut domination = Vec::with_capacity(ys.len());
    for y in ys {
        let k = sdom_least_k_points(model, x, y)?.expect("y was admitted as dominating");
        domination.push(StableDomCertificate::for_points(model, x, y, k)?.expect("k replays"));
    }
    Ok(ComparisonWitness {
        x: model.element_from_point(x),
        ys: ys.iter().map(|y| model.element_from_point(y)).collect(),
        domination,
    })
}

fn componentwise(
    model: &SemigroupModel,
    components: &[SemigroupModel],
    n: u64,
    bound: u64,
) -> Result<ComparisonVerdict> {
    let ranges = model.component_ranges();
    let mut statuses = Vec::with_capacity(components.len());
    let mut elements = 0;
    let mut checked = 0;
    let mut undecided = 0;
    let mut witness = None;
    for (i, c) in components.iter().enumerate() {
        if c.is_trivial() {
            statuses.push(Status::Holds);
            continue;
        }
        let points = c.enumerate_points(bound)?;
        let v = if points.len() > 1 {
            n_comparison_points(c, n, bound, false, &points)?
        } else {
            ComparisonVerdict {
                status: Status::Holds,
                n,
                weak: false,
                bound,
                witness: None,
                scan: ScanSummary::default(),
            }
        };
        elements += points.len();
        checked += v.scan.nonzero_x_checked;
        undecided += v.scan.undecided_pairs;
        statuses.push(v.status);
        if witness.is_none() {
            if let Some(w) = v.witness {
                witness = Some(embed_witness(model, c, &ranges[i], &w)?);
            }
        }
    }
    if !model.is_trivial() && checked == 0 {
        return Err(Error::BoundTooSmall(format!(
            "no non-zero member has coordinate sum <= {bound}"
        )));
    }
    let status = if witness.is_some() {
        Status::FailsWithWitness
    } else if statuses.contains(&Status::UnknownAtBound) {
        Status::UnknownAtBound
    } else {
        Status::Holds
    };
    Ok(ComparisonVerdict {
        status,
        n,
        weak: false,
        bound,
        witness,
        scan: ScanSummary {
            method: "componentwise".into(),
            elements,
            nonzero_x_checked: checked,
            undecided_pairs: undecided,
            components: statuses,
        },
    })
}

fn embed_witness(
    model: &SemigroupModel,
    component: &SemigroupModel,
    range: &std::ops::Range<usize>,
    w: &ComparisonWitness,
) -> Result<ComparisonWitness> {
    let embed = |e: &Element| -> Result<Point> {
        let mut p = vec![0; model.dimension()];
        p[range.clone()].copy_from_slice(&component.flatten(e)?);
        Ok(p)
    };
    let x = embed(&w.x)?;
    let ys = w.ys.iter().map(embed).collect::<Result<Vec<_>>>()?;
    build_witness(model, &x, &ys)
}

/// `s` is a sum that does not lie above `x`.
fn fails(model: &SemigroupModel, x: &[u64], s: &[u64]) -> Result<bool> {
    Ok(!model.leq_points(x, s)?)
}

// ----- numerical models: layered bitsets -------------------------------------

#[derive(Clone)]
struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    fn new(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// `self |= other << shift`, truncated to `len`.
    fn or_shifted(&mut self, other: &Bits, shift: usize) {
        let (ws, bs) = (shift / 64, shift % 64);
        for i in (ws..self.words.len()).rev() {
            let src = i - ws;
            let mut w = other.words.get(src).copied().unwrap_or(0) << bs;
            if bs > 0 && src > 0 {
                w |= other.words[src - 1] >> (64 - bs);
            }
            self.words[i] |= w;
        }
        let tail = self.len % 64;
        if tail > 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << tail) - 1;
        }
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

fn bitset_search(
    model: &SemigroupModel,
    x: u64,
    ds: &[Point],
    n: u64,
) -> Result<Option<Vec<Point>>> {
    let ds: Vec<usize> = ds.iter().map(|p| p[0] as usize).collect();
    let max_d = *ds.iter().max().expect("non-empty");
    let len = (n as usize + 1) * max_d + 1;
    // layers[j] holds the sums of j elements of D.
    let mut layers = Vec::with_capacity(n as usize + 2);
    let mut zero = Bits::new(len);
    zero.set(0);
    layers.push(zero);
    for j in 1..=n as usize + 1 {
        let mut next = Bits::new(len);
        for &d in &ds {
            next.or_shifted(&layers[j - 1], d);
        }
        layers.push(next);
    }
    let fail = |s: usize| fails(model, &[x], &[s as u64]);
    let mut any = false;
    for s in layers[n as usize + 1].ones() {
        if fail(s)? {
            any = true;
            break;
        }
    }
    if !any {
        return Ok(None);
    }
    let mut chosen = Vec::with_capacity(n as usize + 1);
    let mut acc = 0usize;
    for j in 0..=n as usize {
        let rest = n as usize - j;
        let mut picked = None;
        'candidates: for &d in &ds {
            for t in layers[rest].ones() {
                if fail(acc + d + t)? {
                    picked = Some(d);
                    break 'candidates;
                }
            }
        }
        let d = picked.expect("a completion exists");
        acc += d;
        chosen.push(vec![d as u64]);
    }
    Ok(Some(chosen))
}

// ----- general models: layered hash sets -------------------------------------

fn sumset_search(
    model: &SemigroupModel,
    x: &[u64],
    ds: &[Point],
    n: u64,
) -> Result<Option<Vec<Point>>> {
    let dim = x.len();
    let mut layers: Vec<HashSet<Point>> = Vec::with_capacity(n as usize + 2);
    layers.push(HashSet::from([vec![0; dim]]));
    for j in 1..=n as usize + 1 {
        let mut next = HashSet::new();
        for s in &layers[j - 1] {
            for d in ds {
                next.insert(add_points(s, d)?);
            }
        }
        layers.push(next);
    }
    // Under the induced order a sum fails iff some coordinate falls short,
    // which is cheaper than a membership test but gives the same answer.
    let fail = |s: &[u64]| -> Result<bool> {
        match model.order_mode() {
            OrderMode::Induced => Ok(x.iter().zip(s).any(|(a, b)| a > b)),
            OrderMode::Algebraic => fails(model, x, s),
        }
    };
    let mut any = false;
    for s in &layers[n as usize + 1] {
        if fail(s)? {
            any = true;
            break;
        }
    }
    if !any {
        return Ok(None);
    }
    let mut chosen: Vec<Point> = Vec::with_capacity(n as usize + 1);
    let mut acc = vec![0; dim];
    for j in 0..=n as usize {
        let rest = n as usize - j;
        let mut picked = None;
        'candidates: for d in ds {
            let base = add_points(&acc, d)?;
            for t in &layers[rest] {
                if fail(&add_points(&base, t)?)? {
                    picked = Some(d.clone());
                    break 'candidates;
                }
            }
        }
        let d = picked.expect("a completion exists");
        acc = add_points(&acc, &d)?;
        chosen.push(d);
    }
    Ok(Some(chosen))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: u64) -> SemigroupModel {
        SemigroupModel::numerical([n + 1, n + 2], 1000).unwrap()
    }

    #[test]
    fn w2_staircase() {
        let v = n_comparison(&w(2), 1, 72, false).unwrap();
        assert_eq!(v.status, Status::FailsWithWitness);
        let wit = v.witness.as_ref().unwrap();
        assert_eq!(wit.x, Element::Num(3));
        assert_eq!(wit.ys, vec![Element::Num(4), Element::Num(4)]);
        assert!(v.replay(&w(2)).unwrap());
        assert_eq!(
            n_comparison(&w(2), 2, 40, false).unwrap().status,
            Status::Holds
        );
    }

    #[test]
    fn w1_is_not_almost_unperforated() {
        let v = n_comparison(&w(1), 0, 30, false).unwrap();
        let wit = v.witness.unwrap();
        assert_eq!((wit.x, wit.ys), (Element::Num(2), vec![Element::Num(3)]));
    }

    #[test]
    fn bound_too_small() {
        assert!(matches!(
            n_comparison(&w(5), 0, 3, false),
            Err(Error::BoundTooSmall(_))
        ));
    }

    #[test]
    fn fullness() {
        assert!(is_full_element(&w(2), &Element::Num(3), 100).unwrap());
        assert!(!is_full_element(&w(2), &Element::Num(0), 100).unwrap());
        let sum = SemigroupModel::direct_sum(vec![w(1), w(1)], 50).unwrap();
        assert!(!is_full_element(&sum, &Element::Vec(vec![2, 0]), 50).unwrap());
        assert!(is_full_element(&sum, &Element::Vec(vec![2, 2]), 50).unwrap());
        let trivial = SemigroupModel::numerical([], 5).unwrap();
        assert!(is_full_element(&trivial, &Element::Num(0), 5).unwrap());
    }

    #[test]
    fn bit_shifts() {
        let mut a = Bits::new(200);
        a.set(0);
        a.set(63);
        let mut b = Bits::new(200);
        b.or_shifted(&a, 70);
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![70, 133]);
        let mut c = Bits::new(140);
        c.or_shifted(&a, 100);
        assert_eq!(c.ones().collect::<Vec<_>>(), vec![100]);
    }

    #[test]
    fn direct_sum_uses_component_witness() {
        let sum = SemigroupModel::direct_sum(vec![w(1), w(2)], 60).unwrap();
        let v = n_comparison(&sum, 1, 60, false).unwrap();
        assert_eq!(v.status, Status::FailsWithWitness);
        let wit = v.witness.as_ref().unwrap();
        assert_eq!(sum.flatten(&wit.x).unwrap(), vec![0, 3]);
        assert!(v.replay(&sum).unwrap());
        assert_eq!(
            v.scan.components,
            vec![Status::Holds, Status::FailsWithWitness]
        );
    }

    #[test]
    fn generic_search_agrees_with_bitsets() {
        // The same semigroup as a one-dimensional affine model.
        let aff = SemigroupModel::affine(1, vec![vec![3], vec![4]], 100).unwrap();
        for n in 0..3 {
            let a = n_comparison(&aff, n, 30, false).unwrap();
            let b = n_comparison(&w(2), n, 30, false).unwrap();
            assert_eq!(a.status, b.status);
            assert_eq!(
                a.witness.map(|w| (w.x, w.ys)),
                b.witness
                    .map(|w| (
                        w.x,
                        w.ys.into_iter()
                            .map(|y| match y {
                                Element::Num(v) => Element::Vec(vec![v]),
                                e => e,
                            })
                            .collect::<Vec<_>>()
                    ))
                    .map(|(x, ys)| (
                        match x {
                            Element::Num(v) => Element::Vec(vec![v]),
                            e => e,
                        },
                        ys
                    ))
            );
        }
    }
}
