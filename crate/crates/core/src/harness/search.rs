use rayon::prelude::*;

use super::models::{draw_screened, stream_rng};
use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::gap::GapProblem;
use crate::monotone::MonotoneFunction;

/// Best model found by [`strict_gap_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct StrictGapWitness {
    pub index: usize,
    pub model: ModelConfig,
    pub lambda_gns: f64,
    pub lambda_kms: f64,
    /// (λ_KMS − λ_GNS)/λ_GNS.
    pub relative_margin: f64,
    pub draws: usize,
    /// Draws skipped because their generator is GNS self-adjoint.
    pub balanced_skipped: usize,
}

struct Draw {
    index: usize,
    model: ModelConfig,
    gns: f64,
    kms: f64,
    balanced: bool,
}

fn evaluate(seed: u64, d: usize, index: usize) -> Result<Draw> {
    let mut rng = stream_rng(seed, 11, index);
    let (model, state, _) = draw_screened(d, &mut rng)?;
    let problem = GapProblem::new(model, state)?;
    let gns_metric = problem.metric(MonotoneFunction::gns())?;
    let l = problem.generator();
    let balanced = l.dist(&gns_metric.f_adjoint(l)) / l.matrix().frobenius_norm().max(1.0) < 1e-9;
    let gap = |m| -> Result<f64> { Ok(problem.spectral_gap(m)?.lambda.to_f64()) };
    let gns = gap(&gns_metric)?;
    let kms = gap(&problem.metric(MonotoneFunction::kms())?)?;
    Ok(Draw {
        index,
        model: ModelConfig::from_model(problem.model(), Some(problem.state()), Some(seed)),
        gns,
        kms,
        balanced,
    })
}

/// Plain random scan over `draws` models of dimension `d` for the largest
/// relative margin (λ_KMS − λ_GNS)/λ_GNS, skipping GNS-self-adjoint generators.
///
/// Returns the best draw when its margin exceeds `threshold`, otherwise
/// [`Error::SearchExhausted`].
pub fn strict_gap_search(seed: u64, d: usize, draws: usize, threshold: f64) -> Result<StrictGapWitness> {
    let results: Vec<Draw> = (0..draws).into_par_iter().map(|i| evaluate(seed, d, i)).collect::<Result<_>>()?;
    let balanced_skipped = results.iter().filter(|r| r.balanced).count();
    let rel = |r: &Draw| (r.kms - r.gns) / r.gns;
    let best = results
        .iter()
        .filter(|r| !r.balanced && r.gns.is_finite() && r.gns > 0.0)
        .max_by(|a, b| rel(a).total_cmp(&rel(b)).then(b.index.cmp(&a.index)));
    match best {
        Some(b) if rel(b) > threshold => Ok(StrictGapWitness {
            index: b.index,
            model: b.model.clone(),
            lambda_gns: b.gns,
            lambda_kms: b.kms,
            relative_margin: rel(b),
            draws,
            balanced_skipped,
        }),
        Some(b) => Err(Error::SearchExhausted { best_relative_margin: rel(b) }),
        None => Err(Error::SearchExhausted { best_relative_margin: f64::NEG_INFINITY }),
    }
}
