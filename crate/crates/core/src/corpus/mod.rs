//! Example families, seeded random models and instances, and batch reports.

mod instances;
mod report;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::{Kind, SemigroupModel};

pub use instances::{random_cfp_instance, random_discrete_cfp_instance, CfpParams};
pub use report::{
    omega_surrogate_property, run_report, Check, OmegaSurrogateReport, PropertyReport,
    ReportBounds, ReportInput, ReportOutcome, REPORT_SCHEMA,
};

/// `W_n = <n+1, n+2>` with element bound `6(n+1)(n+2)`.
pub fn family_wn(n: u64) -> Result<SemigroupModel> {
    if n == 0 {
        return Err(Error::PreconditionViolated("W_n needs n >= 1".into()));
    }
    SemigroupModel::numerical([n + 1, n + 2], wn_bound(n))
}

pub fn wn_bound(n: u64) -> u64 {
    6 * (n + 1) * (n + 2)
}

/// `W_1 ⊕ ... ⊕ W_{n_max}`, with the bound of the last summand.
pub fn family_womega(n_max: u64) -> Result<SemigroupModel> {
    if n_max == 0 {
        return Err(Error::PreconditionViolated(
            "the truncation needs n_max >= 1".into(),
        ));
    }
    let components = (1..=n_max).map(family_wn).collect::<Result<Vec<_>>>()?;
    SemigroupModel::direct_sum(components, wn_bound(n_max))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RandomKind {
    Numerical,
    Affine,
    Either,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomModelParams {
    pub kind: RandomKind,
    pub generators: usize,
    /// Largest generator (numerical) or coordinate (affine).
    pub max_entry: u64,
    pub dimension: usize,
    pub element_bound: u64,
}

impl Default for RandomModelParams {
    fn default() -> Self {
        RandomModelParams {
            kind: RandomKind::Either,
            generators: 3,
            max_entry: 6,
            dimension: 2,
            element_bound: 24,
        }
    }
}

/// A reproducible numerical or affine model; the same seed and parameters
/// give the same model.
pub fn random_model(seed: u64, params: &RandomModelParams) -> Result<SemigroupModel> {
    if params.generators == 0 || params.max_entry == 0 {
        return Err(Error::PreconditionViolated(
            "random models need at least one non-zero generator".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = match params.kind {
        RandomKind::Either => {
            if rng.gen_bool(0.5) {
                RandomKind::Numerical
            } else {
                RandomKind::Affine
            }
        }
        k => k,
    };
    match kind {
        RandomKind::Numerical => {
            let gens: Vec<u64> = (0..params.generators)
                .map(|_| rng.gen_range(1..=params.max_entry))
                .collect();
            SemigroupModel::numerical(gens, params.element_bound)
        }
        _ => {
            let d = params.dimension.max(1);
            let mut gens = Vec::with_capacity(params.generators);
            while gens.len() < params.generators {
                let g: Vec<u64> = (0..d)
                    .map(|_| rng.gen_range(0..=params.max_entry))
                    .collect();
                if g.iter().any(|&v| v > 0) {
                    gens.push(g);
                }
            }
            SemigroupModel::affine(d, gens, params.element_bound)
        }
    }
}

/// Whether any part of the model is affine; chain membership there can
/// stop at a search horizon.
pub(crate) fn has_affine_part(model: &SemigroupModel) -> bool {
    match model.kind() {
        Kind::Numerical { .. } => false,
        Kind::Affine { .. } => true,
        Kind::DirectSum { components } => components.iter().any(has_affine_part),
    }
}

pub(crate) fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> Option<&'a T> {
    items.choose(rng)
}
