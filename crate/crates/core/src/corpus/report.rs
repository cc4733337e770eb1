//! Batch property reports over a list of models.

use std::time::Instant;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::instances::{random_cfp_instance, CfpParams};
use crate::comparison::{n_comparison, ComparisonVerdict, Status};
use crate::completion::{check_cfp, property_q_check, CfpVerdict, Completion, QMode, QVerdict};
use crate::error::Result;
use crate::semigroup::{Kind, SemigroupModel};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    AlmostUnperforation,
    NComparison,
    WeakNComparison,
    OmegaSurrogate,
    Q,
    Qq,
    Cfp,
    StrongCfp,
}

impl Check {
    pub fn all() -> Vec<Check> {
        vec![
            Check::AlmostUnperforation,
            Check::NComparison,
            Check::WeakNComparison,
            Check::OmegaSurrogate,
            Check::Q,
            Check::Qq,
            Check::Cfp,
            Check::StrongCfp,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBounds {
    /// Coordinate-sum bound for the n-comparison scans; the model's element
    /// bound when absent.
    pub ncomp_bound: Option<u64>,
    /// n-comparison is checked for `n = 0..=n_max`.
    pub n_max: u64,
    /// Largest `n` tried per component by the ω-surrogate.
    pub omega_n_cap: u64,
    pub q_bound: u64,
    pub k_max: u64,
    pub cfp_instances: u64,
    pub seed: u64,
    pub timings: bool,
}

impl Default for ReportBounds {
    fn default() -> Self {
        ReportBounds {
            ncomp_bound: None,
            n_max: 3,
            omega_n_cap: 6,
            q_bound: 6,
            k_max: 500,
            cfp_instances: 20,
            seed: 0,
            timings: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportInput {
    pub id: String,
    pub model: SemigroupModel,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub schema: u32,
    pub model_id: String,
    pub model: Value,
    pub bounds: IndexMap<String, Value>,
    pub checks: IndexMap<String, Value>,
    /// Hierarchy-monotonicity and certificate-replay failures.
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<IndexMap<String, u64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportOutcome {
    pub reports: Vec<PropertyReport>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaSurrogateReport {
    pub label: &'static str,
    pub status: Status,
    pub bound: u64,
    /// Least `n` with n-comparison per summand (one entry for a non-sum).
    pub per_component: Vec<Option<u64>>,
    /// `n(x)` is the maximum of `per_component` over the support of `x`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniform_n: Option<u64>,
}

const SURROGATE_LABEL: &str = "algebraic surrogate: x' = x, way-below replaced by equality";

/// Holds when every summand has the n-comparison property for some
/// `n <= n_cap` at `bound`, so each `x` has a finite `n(x)`.
pub fn omega_surrogate_property(
    model: &SemigroupModel,
    bound: u64,
    n_cap: u64,
) -> Result<OmegaSurrogateReport> {
    let parts: Vec<&SemigroupModel> = match model.kind() {
        Kind::DirectSum { components } => components.iter().collect(),
        _ => vec![model],
    };
    let mut per_component = Vec::with_capacity(parts.len());
    for c in parts {
        let mut found = None;
        if c.is_trivial() {
            found = Some(0);
        } else {
            for n in 0..=n_cap {
                if n_comparison(c, n, bound, false)?.status == Status::Holds {
                    found = Some(n);
                    break;
                }
            }
        }
        per_component.push(found);
    }
    let all = per_component.iter().all(Option::is_some);
    Ok(OmegaSurrogateReport {
        label: SURROGATE_LABEL,
        status: if all {
            Status::Holds
        } else {
            Status::UnknownAtBound
        },
        bound,
        uniform_n: all.then(|| per_component.iter().flatten().copied().max().unwrap_or(0)),
        per_component,
    })
}

/// Runs `checks` on every model (models in parallel, output in input order).
/// `ok` is false iff some report records a monotonicity or replay violation.
pub fn run_report(
    inputs: &[ReportInput],
    checks: &[Check],
    bounds: &ReportBounds,
) -> ReportOutcome {
    let reports: Vec<PropertyReport> = inputs
        .par_iter()
        .map(|input| report_one(input, checks, bounds))
        .collect();
    let ok = reports.iter().all(|r| r.violations.is_empty());
    ReportOutcome { reports, ok }
}

fn status_of(v: &Value) -> Option<&str> {
    v.get("status").and_then(Value::as_str)
}

fn error_entry(e: &crate::Error) -> Value {
    json!({ "status": "unknown_at_bound", "error": e.to_string() })
}

struct Runner<'a> {
    model: &'a SemigroupModel,
    checks: IndexMap<String, Value>,
    violations: Vec<String>,
    timings: IndexMap<String, u64>,
}

impl Runner<'_> {
    fn record<T: Serialize>(&mut self, key: String, started: Instant, out: Result<T>) -> Option<T> {
        self.timings
            .insert(key.clone(), started.elapsed().as_millis() as u64);
        match out {
            Ok(v) => {
                let value = serde_json::to_value(&v).expect("verdicts serialize");
                self.checks.insert(key, value);
                Some(v)
            }
            Err(e) => {
                self.checks.insert(key, error_entry(&e));
                None
            }
        }
    }

    fn ladder(&mut self, prefix: &str, n_max: u64, bound: u64, weak: bool) {
        for n in 0..=n_max {
            let t = Instant::now();
            let key = format!("{prefix}[{n}]");
            let v = self.record(key.clone(), t, n_comparison(self.model, n, bound, weak));
            if let Some(v) = v {
                self.replay_comparison(&key, &v);
            }
        }
    }

    fn replay_comparison(&mut self, key: &str, v: &ComparisonVerdict) {
        if let (Status::FailsWithWitness, Some(w)) = (&v.status, &v.witness) {
            match w.replay(self.model) {
                Ok(true) => {}
                _ => self
                    .violations
                    .push(format!("{key}: witness does not replay")),
            }
        }
    }

    fn monotone(&mut self, prefix: &str, n_max: u64) {
        for n in 0..n_max {
            let a = self
                .checks
                .get(&format!("{prefix}[{n}]"))
                .and_then(status_of);
            let b = self
                .checks
                .get(&format!("{prefix}[{}]", n + 1))
                .and_then(status_of);
            if a == Some("holds") && b == Some("fails_with_witness") {
                self.violations.push(format!(
                    "{prefix}: holds at n = {n} but fails at n = {}",
                    n + 1
                ));
            }
        }
    }
}

fn report_one(input: &ReportInput, checks: &[Check], b: &ReportBounds) -> PropertyReport {
    let model = &input.model;
    let ncomp_bound = b.ncomp_bound.unwrap_or(model.element_bound());
    let mut r = Runner {
        model,
        checks: IndexMap::new(),
        violations: Vec::new(),
        timings: IndexMap::new(),
    };
    let wants = |c: Check| checks.contains(&c);
    let completion = Completion::new(model.clone());

    if wants(Check::AlmostUnperforation) {
        let t = Instant::now();
        let v = r.record(
            "almost_unperforation".into(),
            t,
            n_comparison(model, 0, ncomp_bound, false),
        );
        if let Some(v) = v {
            r.replay_comparison("almost_unperforation", &v);
        }
    }
    if wants(Check::NComparison) {
        r.ladder("n_comparison", b.n_max, ncomp_bound, false);
        r.monotone("n_comparison", b.n_max);
    }
    if wants(Check::WeakNComparison) {
        r.ladder("weak_n_comparison", b.n_max, ncomp_bound, true);
        r.monotone("weak_n_comparison", b.n_max);
        if wants(Check::NComparison) {
            for n in 0..=b.n_max {
                let strong = r
                    .checks
                    .get(&format!("n_comparison[{n}]"))
                    .and_then(status_of);
                let weak = r
                    .checks
                    .get(&format!("weak_n_comparison[{n}]"))
                    .and_then(status_of);
                if strong == Some("holds") && weak == Some("fails_with_witness") {
                    r.violations
                        .push(format!("n = {n}: comparison holds but its weak form fails"));
                }
            }
        }
    }
    if wants(Check::OmegaSurrogate) {
        let t = Instant::now();
        r.record(
            "omega_surrogate".into(),
            t,
            omega_surrogate_property(model, ncomp_bound, b.omega_n_cap),
        );
    }
    for (check, mode, key) in [(Check::Q, QMode::Q, "q"), (Check::Qq, QMode::Qq, "qq")] {
        if wants(check) {
            let t = Instant::now();
            let v = r.record(
                key.into(),
                t,
                property_q_check(&completion, mode, b.q_bound),
            );
            if let Some(v) = v {
                replay_q(&mut r, &completion, key, &v);
            }
        }
    }
    for (check, strong, key) in [
        (Check::Cfp, false, "cfp"),
        (Check::StrongCfp, true, "strong_cfp"),
    ] {
        if wants(check) {
            let t = Instant::now();
            let out = cfp_batch(&completion, b, strong);
            if let Ok(batch) = &out {
                if batch.replay_failures > 0 {
                    r.violations.push(format!(
                        "{key}: {} certificates do not replay",
                        batch.replay_failures
                    ));
                }
            }
            r.record(key.into(), t, out);
        }
    }

    let mut bounds = IndexMap::new();
    bounds.insert("element_bound".into(), json!(model.element_bound()));
    bounds.insert("ncomp_bound".into(), json!(ncomp_bound));
    bounds.insert("n_max".into(), json!(b.n_max));
    bounds.insert("omega_n_cap".into(), json!(b.omega_n_cap));
    bounds.insert("q_bound".into(), json!(b.q_bound));
    bounds.insert("k_max".into(), json!(b.k_max));
    bounds.insert("cfp_instances".into(), json!(b.cfp_instances));
    bounds.insert("seed".into(), json!(b.seed));
    bounds.insert(
        "interval_class".into(),
        json!("principal, eventually arithmetic chains, top"),
    );
    PropertyReport {
        schema: REPORT_SCHEMA,
        model_id: input.id.clone(),
        model: model.to_json(),
        bounds,
        checks: r.checks,
        violations: r.violations,
        timings_ms: b.timings.then_some(r.timings),
    }
}

fn replay_q(r: &mut Runner, c: &Completion, key: &str, v: &QVerdict) {
    if v.witness.is_some() && !matches!(v.replay(c), Ok(true)) {
        r.violations.push(format!("{key}: witness does not replay"));
    }
}

#[derive(Clone, Debug, Serialize)]
struct CfpBatch {
    status: Status,
    strong: bool,
    instances: u64,
    certified: u64,
    max_k: u64,
    no_certificate: u64,
    replay_failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_uncertified: Option<Value>,
}

pub(crate) fn instance_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i)
}

fn cfp_batch(c: &Completion, b: &ReportBounds, strong: bool) -> Result<CfpBatch> {
    let mut batch = CfpBatch {
        status: Status::Holds,
        strong,
        instances: b.cfp_instances,
        certified: 0,
        max_k: 0,
        no_certificate: 0,
        replay_failures: 0,
        first_uncertified: None,
    };
    let params = CfpParams::default();
    for i in 0..b.cfp_instances {
        let inst = random_cfp_instance(c, instance_seed(b.seed, i), &params)?;
        let verdict = match check_cfp(c, &inst, b.k_max, strong) {
            Ok(v) => v,
            Err(crate::Error::UndecidableAtBound(_)) => {
                CfpVerdict::NoCertificateWithinBound { k_max: b.k_max }
            }
            Err(e) => return Err(e),
        };
        match &verdict {
            CfpVerdict::Certificate {
                k,
                partial_sum,
                inclusion,
            } => {
                batch.certified += 1;
                batch.max_k = batch.max_k.max(*k);
                if !matches!(
                    c.replay_inclusion(inclusion, &inst.x_prime, partial_sum),
                    Ok(true)
                ) {
                    batch.replay_failures += 1;
                }
            }
            CfpVerdict::NoCertificateWithinBound { .. } => {
                batch.no_certificate += 1;
                batch.status = Status::UnknownAtBound;
                if batch.first_uncertified.is_none() {
                    batch.first_uncertified = Some(serde_json::to_value(&inst)?);
                }
            }
        }
    }
    Ok(batch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{family_wn, family_womega};

    #[test]
    fn staircase_report() {
        let inputs: Vec<ReportInput> = (1..=3)
            .map(|n| ReportInput {
                id: format!("W_{n}"),
                model: family_wn(n).unwrap(),
            })
            .collect();
        let bounds = ReportBounds {
            n_max: 3,
            ..Default::default()
        };
        let out = run_report(&inputs, &[Check::NComparison], &bounds);
        assert!(out.ok);
        for (i, rep) in out.reports.iter().enumerate() {
            let n = i as u64 + 1;
            for m in 0..=3 {
                let s = status_of(&rep.checks[&format!("n_comparison[{m}]")]).unwrap();
                let expect = if m < n { "fails_with_witness" } else { "holds" };
                assert_eq!(s, expect, "W_{n}, m = {m}");
            }
            assert!(rep.timings_ms.is_none());
        }
        assert!(run_report(&[], &Check::all(), &bounds).reports.is_empty());
    }

    #[test]
    fn surrogate_on_a_truncated_sum() {
        let v = omega_surrogate_property(&family_womega(3).unwrap(), 60, 5).unwrap();
        assert_eq!(v.per_component, vec![Some(1), Some(2), Some(3)]);
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.uniform_n, Some(3));
    }

    #[test]
    fn completion_checks_on_the_integers() {
        let z = ReportInput {
            id: "Z+".into(),
            model: SemigroupModel::numerical([1], 40).unwrap(),
        };
        let bounds = ReportBounds {
            cfp_instances: 10,
            ..Default::default()
        };
        let out = run_report(&[z], &[Check::Q, Check::Qq, Check::Cfp], &bounds);
        assert!(out.ok);
        for key in ["q", "qq", "cfp"] {
            assert_eq!(
                status_of(&out.reports[0].checks[key]),
                Some("holds"),
                "{key}"
            );
        }
    }
}
