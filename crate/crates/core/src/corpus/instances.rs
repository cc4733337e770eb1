//! Seeded CFP instances that satisfy their hypotheses by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{has_affine_part, pick};
use crate::completion::{
    CfpInstance, Completion, DiscreteCfpInstance, Interval, Iv, SequenceDescriptor, XSide,
};
use crate::error::{Error, Result};
use crate::semigroup::{add_points, is_zero_point, scale_point, Point, SemigroupModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfpParams {
    pub max_m: u64,
    pub max_preamble: usize,
    pub max_period: usize,
    /// Largest coordinate sum of the sampled members.
    pub value_bound: u64,
    /// Allow chain intervals (ignored for models with an affine part).
    pub chains: bool,
    /// Allow `y_n = top`.
    pub tops: bool,
}

impl Default for CfpParams {
    fn default() -> Self {
        CfpParams {
            max_m: 3,
            max_preamble: 2,
            max_period: 3,
            value_bound: 12,
            chains: true,
            tops: false,
        }
    }
}

struct Sampler<'a> {
    model: &'a SemigroupModel,
    rng: ChaCha8Rng,
    members: Vec<Point>,
}

impl Sampler<'_> {
    fn below(&mut self, a: &[u64]) -> Result<Point> {
        let mut cands = Vec::new();
        for p in &self.members {
            if self.model.leq_points(p, a)? {
                cands.push(p.clone());
            }
        }
        Ok(pick(&mut self.rng, &cands)
            .cloned()
            .unwrap_or_else(|| vec![0; a.len()]))
    }

    /// A member `y` with `a <= m·y`, or `a` itself when none is sampled.
    fn dominating(&mut self, a: &[u64], m: u64) -> Result<Point> {
        let mut cands = Vec::new();
        for p in &self.members {
            if self.model.leq_points(a, &scale_point(p, m)?)? {
                cands.push(p.clone());
            }
        }
        Ok(pick(&mut self.rng, &cands)
            .cloned()
            .unwrap_or_else(|| a.to_vec()))
    }
}

/// A valid (plain, hence also strong) CFP instance over `c`: `(x_n)` is full
/// and increasing, `x' ≪ x_1` and `x_n ⊆ m·y_n` for every `n`.
pub fn random_cfp_instance(c: &Completion, seed: u64, params: &CfpParams) -> Result<CfpInstance> {
    let model = c.model();
    let bound = params.value_bound.min(model.element_bound());
    let mut s = Sampler {
        model,
        rng: ChaCha8Rng::seed_from_u64(seed),
        members: model.enumerate_points(bound)?,
    };
    let chains = params.chains && !has_affine_part(model);

    let mut fulls = Vec::new();
    for p in &s.members {
        if !is_zero_point(p) && c.is_full_exact(p)? {
            fulls.push(p.clone());
        }
    }
    if fulls.is_empty() {
        let mut w = vec![0; model.dimension()];
        for g in model.flat_generators() {
            w = add_points(&w, &g)?;
        }
        model.check_bound(&w).map_err(|_| Error::NoFullElement)?;
        fulls.push(w);
    }
    let b = pick(&mut s.rng, &fulls).expect("non-empty").clone();
    let x_last = if chains && s.rng.gen_bool(0.3) {
        let nonzero: Vec<Point> = s
            .members
            .iter()
            .filter(|p| !is_zero_point(p))
            .cloned()
            .collect();
        match pick(&mut s.rng, &nonzero) {
            Some(u) => c.normalize(b.clone(), u.clone())?,
            None => c.principal(b.clone()),
        }
    } else {
        c.principal(b.clone())
    };

    // Preamble of x: a_1 <= a_2 <= ... <= b, built downwards.
    let lx = s.rng.gen_range(0..=params.max_preamble);
    let mut xs_pre: Vec<Point> = Vec::with_capacity(lx);
    let mut top = b.clone();
    for _ in 0..lx {
        top = s.below(&top)?;
        xs_pre.push(top.clone());
    }
    xs_pre.reverse();
    let first = xs_pre.first().cloned().unwrap_or_else(|| b.clone());
    let x_prime = s.below(&first)?;
    let m = s.rng.gen_range(1..=params.max_m.max(1));

    let ly = lx + s.rng.gen_range(0..=params.max_preamble);
    let py = s.rng.gen_range(1..=params.max_period.max(1));
    let y_term = |s: &mut Sampler, target: &Iv| -> Result<Iv> {
        if params.tops && s.rng.gen_bool(0.1) {
            return Ok(Iv::Top);
        }
        match target {
            Iv::P(a) => Ok(c.principal(s.dominating(a, m)?)),
            other => {
                let extra = pick(&mut s.rng, &s.members).cloned().unwrap_or_default();
                c.iv_add(other, &c.principal(extra))
            }
        }
    };
    let x_at = |n: usize| -> Iv {
        if n < xs_pre.len() {
            c.principal(xs_pre[n].clone())
        } else {
            x_last.clone()
        }
    };
    let mut y_pre = Vec::with_capacity(ly);
    for n in 0..ly {
        y_pre.push(c.lift(&y_term(&mut s, &x_at(n))?));
    }
    let mut y_per = Vec::with_capacity(py);
    for _ in 0..py {
        y_per.push(c.lift(&y_term(&mut s, &x_last)?));
    }
    Ok(CfpInstance {
        x_prime: Interval::Principal(model.element_from_point(&x_prime)),
        x: XSide::Sequence(SequenceDescriptor {
            preamble: xs_pre
                .iter()
                .map(|a| c.lift(&c.principal(a.clone())))
                .collect(),
            period: vec![c.lift(&x_last)],
        }),
        y_seq: SequenceDescriptor {
            preamble: y_pre,
            period: y_per,
        },
        m,
    })
}

/// A valid strong CFP instance on the base model: `x <= m·y_n` for all `n`.
pub fn random_discrete_cfp_instance(
    model: &SemigroupModel,
    seed: u64,
    params: &CfpParams,
) -> Result<DiscreteCfpInstance> {
    let bound = params.value_bound.min(model.element_bound());
    let mut s = Sampler {
        model,
        rng: ChaCha8Rng::seed_from_u64(seed),
        members: model.enumerate_points(bound)?,
    };
    let x = pick(&mut s.rng, &s.members)
        .cloned()
        .unwrap_or_else(|| vec![0; model.dimension()]);
    let m = s.rng.gen_range(1..=params.max_m.max(1));
    let ly = s.rng.gen_range(0..=params.max_preamble);
    let py = s.rng.gen_range(1..=params.max_period.max(1));
    let mut terms = Vec::with_capacity(ly + py);
    for _ in 0..ly + py {
        terms.push(model.element_from_point(&s.dominating(&x, m)?));
    }
    let period = terms.split_off(ly);
    Ok(DiscreteCfpInstance {
        x: model.element_from_point(&x),
        y_seq: SequenceDescriptor {
            preamble: terms,
            period,
        },
        m,
    })
}
