//! Seeded randomized campaign over the properties the toolkit certifies,
//! plus the detailed-balance construction and the strict-gap scan.
//!
//! Every model or sample `i` of property stream `k` is drawn from ChaCha8
//! keyed by the campaign seed with stream id `k << 32 | i`, so results do not
//! depend on thread scheduling. Streams are stable for a given build of
//! `rand_chacha`; a major version bump may change them.

mod balance;
mod campaign;
mod config;
mod models;
mod properties;
mod quadrature;
mod report;
mod search;

pub use balance::{detailed_balance_model, random_balanced, RateSpec, SELF_ADJOINT_TOL};
pub use campaign::run_campaign;
pub use config::{default_tolerances, CampaignConfig, OverrideModel, Sizes, PROPERTIES};
pub use models::{block_model, draw_screened, pool_model, screen, stream_rng, CampaignModel};
pub use properties::decay_times;
pub use quadrature::gauss_legendre;
pub use report::{CampaignReport, Counterexample, PropertyResult, Sample};
pub use search::{strict_gap_search, StrictGapWitness};

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> CampaignConfig {
        let mut cfg = CampaignConfig { n_models: 4, dims: vec![2, 3], ..CampaignConfig::default() }.with_seed(seed);
        cfg.sizes = Sizes {
            decay_models: 2,
            decay_samples: 20,
            transpose_models: 2,
            curve_models: 2,
            moreau_triples: 5,
            sandwich_states: 3,
            order_pairs: 3,
            closed_form_triples: 5,
            balanced_models: 2,
            search_draws: 40,
            degenerate_models: 2,
        };
        cfg
    }

    #[test]
    fn depolarizing_override_passes_with_flat_curve() {
        let cfg = CampaignConfig {
            n_models: 1,
            dims: vec![2],
            override_model: Some(OverrideModel::Depolarizing),
            ..small(1)
        };
        let r = run_campaign(&cfg).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.properties.len(), PROPERTIES.len());
        let note = r.property("alpha_curve").unwrap().note.as_deref().unwrap();
        let spread: f64 = note.rsplit(' ').next().unwrap().parse().unwrap();
        assert!(spread < 1e-12, "{note}");
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run_campaign(&small(9)).unwrap();
        let b = run_campaign(&small(9)).unwrap();
        assert!(a.passed(), "{}", a.to_text());
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.to_csv(), b.to_csv());
        assert_ne!(a.to_csv(), run_campaign(&small(10)).unwrap().to_csv());
    }

    #[test]
    fn impossible_tolerance_fails_with_counterexample() {
        let mut cfg = small(3);
        cfg.tolerances.insert("contractivity".into(), 0.0);
        cfg.tolerances.insert("decay_equivalence".into(), 1e-16);
        let r = run_campaign(&cfg).unwrap();
        assert!(!r.passed());
        let bad = r.property("decay_equivalence").unwrap();
        assert!(!bad.passed);
        assert!(bad.counterexample.as_ref().unwrap().model.is_some());
    }

    #[test]
    fn empty_properties_fail() {
        let mut cfg = small(4);
        cfg.sizes.moreau_triples = 0;
        let r = run_campaign(&cfg).unwrap();
        let p = r.property("moreau_identity").unwrap();
        assert!(!p.passed && p.note.as_deref() == Some("no samples executed"));
    }

    #[test]
    fn missing_seed_and_bad_dims_are_config_errors() {
        assert!(run_campaign(&CampaignConfig::default()).is_err());
        let cfg = CampaignConfig { dims: vec![9], ..CampaignConfig::default() }.with_seed(1);
        assert!(run_campaign(&cfg).is_err());
    }
}
