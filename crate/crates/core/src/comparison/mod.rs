//! Stable domination, state cones, and the n-comparison checkers.

mod ncomp;
mod stable;
mod states;

use serde::Serialize;

pub use ncomp::{is_full_element, n_comparison, ComparisonVerdict, ComparisonWitness, ScanSummary};
pub use stable::{
    decide_stable_domination, stably_dominated, tail_property_check, Refutation, SdomDecision,
    StableDomCertificate,
};
pub(crate) use stable::{sdom_least_k_points, SDOM_HORIZON};
pub use states::{
    check_states_agreement, stable_dom_via_states, state_cone, Agreement, StateBound, StateCone,
    StateVerdict, StatesAgreementReport, StatesAgreementRow,
};

/// Three-valued outcome of a bounded property check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    FailsWithWitness,
    UnknownAtBound,
}
