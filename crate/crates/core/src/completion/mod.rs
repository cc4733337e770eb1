//! The interval completion `Λ_σ(V)` of a base model: countably generated
//! order ideals, ordered by inclusion, with elementwise addition.

mod cfp;
mod interval;
mod props;
mod sequence;

use std::collections::HashMap;
use std::sync::RwLock;

use crate::semigroup::{Point, SemigroupModel};

pub(crate) use cfp::validate_cfp;
pub use cfp::{
    check_cfp, check_cfp_discrete, CfpInstance, CfpVerdict, DiscreteCfpInstance,
    DiscreteCfpVerdict, XSide,
};
pub(crate) use interval::Iv;
pub use interval::{InclusionCertificate, Interval};
pub use props::{
    largest_element, omega_comparison_check, omega_surrogate_check, property_q_check,
    DiscreteOmegaVerdict, LargestElement, OmegaVerdict, QMode, QVerdict, QWitness,
};
pub use sequence::{IntervalChain, SequenceDescriptor};

pub struct Completion {
    model: SemigroupModel,
    fullness: RwLock<HashMap<Point, bool>>,
}

impl Completion {
    pub fn new(model: SemigroupModel) -> Self {
        Completion {
            model,
            fullness: RwLock::new(HashMap::new()),
        }
    }

    pub fn model(&self) -> &SemigroupModel {
        &self.model
    }
}

impl Clone for Completion {
    fn clone(&self) -> Self {
        Completion::new(self.model.clone())
    }
}

impl std::fmt::Debug for Completion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Completion")
            .field("model", &self.model)
            .finish()
    }
}
