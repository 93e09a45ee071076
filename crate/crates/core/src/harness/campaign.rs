use std::time::Instant;

use rayon::prelude::*;

use super::config::{CampaignConfig, PROPERTIES};
use super::models::pool_model;
use super::properties::{self as prop, Pool};
use super::report::{CampaignReport, PropertyResult};
use crate::error::{Error, Result};
use crate::monotone::MonotoneFunction;

/// Runs every property on freshly generated models. The report depends only
/// on the configuration: each model and sample draws from its own stream.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let seed = cfg.seed.ok_or_else(|| Error::Config("campaign seed is required".into()))?;
    let suite: Vec<MonotoneFunction<f64>> =
        cfg.functions()?.iter().map(|d| d.to_function()).collect::<Result<_>>()?;

    let start = Instant::now();
    let pool: Pool = (0..cfg.n_models)
        .into_par_iter()
        .map(|i| {
            let d = cfg.dims[i % cfg.dims.len()];
            pool_model(cfg, seed, i)
                .and_then(|cm| prop::evaluate(cm, &suite))
                .map_err(|e| (i, d, e.to_string()))
        })
        .collect();
    let mut rejected: usize = pool.iter().filter_map(|e| e.as_ref().ok()).map(|e| e.cm.rejected).sum();
    log::info!("generated {} models in {:.2?}", pool.len(), start.elapsed());

    let mut properties = Vec::with_capacity(PROPERTIES.len());
    let mut timing = vec![("model_pool".to_string(), start.elapsed())];
    for name in PROPERTIES {
        let t0 = Instant::now();
        let (samples, note) = match name {
            "gap_comparison" => (prop::gap_comparison(&pool, cfg), None),
            "contractivity" => (prop::contractivity(&pool, cfg, &suite), None),
            "decay_equivalence" => (prop::decay_equivalence(&pool, cfg, &suite), None),
            "transpose_symmetry" => (prop::transpose_symmetry(&pool, cfg), None),
            "alpha_curve" => {
                let (s, n) = prop::alpha_curve(&pool, cfg);
                (s, Some(n))
            }
            "moreau_identity" => (prop::moreau_identity(cfg, seed), None),
            "om1_bound" => (prop::om1_bound(cfg, seed, &suite), None),
            "loewner_order" => (prop::loewner_order(cfg, seed), None),
            "metric_closed_forms" => (
                prop::metric_closed_forms(cfg, seed),
                Some(format!("bkm tolerance {:e}", cfg.tolerance("bkm_closed_form"))),
            ),
            "detailed_balance_collapse" => (prop::detailed_balance_collapse(cfg, seed, &suite), None),
            "strict_gap" => prop::strict_gap(cfg, seed),
            "degenerate_ground_state" => {
                let (s, r) = prop::degenerate_ground_state(cfg, seed, &suite);
                rejected += r;
                (s, None)
            }
            _ => unreachable!("unknown property {name}"),
        };
        let tol_name = match name {
            "metric_closed_forms" => "kms_closed_form",
            "degenerate_ground_state" => "degenerate_kernel",
            other => other,
        };
        let result = PropertyResult::from_samples(name, seed, cfg.tolerance(tol_name), samples, note);
        let elapsed = t0.elapsed();
        log::info!("{name}: {} in {elapsed:.2?}", if result.passed { "pass" } else { "FAIL" });
        timing.push((name.to_string(), elapsed));
        properties.push(result);
    }
    Ok(CampaignReport { seed, properties, rejected_draws: rejected, timing })
}
