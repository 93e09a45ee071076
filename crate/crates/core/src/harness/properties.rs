//! One evaluator per campaign property. Each returns a sample per model (or
//! per drawn triple) holding its worst check.

use rand::Rng;
use rayon::prelude::*;

use super::balance::random_balanced;
use super::config::CampaignConfig;
use super::models::{block_model, stream_rng, CampaignModel};
use super::quadrature::gauss_legendre;
use super::report::Sample;
use super::search::strict_gap_search;
use crate::error::{Error, Result};
use crate::gap::{GapProblem, GapReport};
use crate::metric::{loewner_order_probe, moreau_form, FMetric, QuadraticForm};
use crate::monotone::{check_om1_bounds, log_grid, MonotoneFunction};
use crate::operators::{herm_eig, ComplexMatrix, Lu, Superoperator};
use crate::qms::random::{complex_gaussian, random_density_matrix, random_matrix, random_psd};
use crate::scalar::C;

pub type Suite = [MonotoneFunction<f64>];

/// A pool model with its problem and the gaps for GNS and every suite member.
pub struct Evaluated {
    pub cm: CampaignModel,
    pub problem: GapProblem<f64>,
    pub gns: GapReport<f64>,
    pub gaps: Vec<GapReport<f64>>,
}

pub fn evaluate(cm: CampaignModel, suite: &Suite) -> Result<Evaluated> {
    let problem = GapProblem::new(cm.model.clone(), cm.state.clone())?;
    let gns = problem.spectral_gap(&problem.metric(MonotoneFunction::gns())?)?;
    let gaps = suite.iter().map(|f| problem.spectral_gap(&problem.metric(f.clone())?)).collect::<Result<_>>()?;
    Ok(Evaluated { cm, problem, gns, gaps })
}

/// Keeps the worst of several (label, value, bound, margin) checks.
#[derive(Default)]
struct Worst {
    best: Option<(String, f64, f64, f64)>,
}

impl Worst {
    fn push(&mut self, label: impl Into<String>, value: f64, bound: f64, margin: f64) {
        let worse = match &self.best {
            None => true,
            Some(b) => margin < b.3 || (margin.is_nan() && !b.3.is_nan()),
        };
        if worse {
            self.best = Some((label.into(), value, bound, margin));
        }
    }

    fn sample(self, index: usize, dim: usize) -> Sample {
        let (label, value, bound, margin) = self.best.unwrap_or_else(|| ("none".into(), f64::NAN, f64::NAN, f64::NEG_INFINITY));
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        Sample { index, dim, label, value, bound, margin, error: None, model: None }
    }
}

fn attach(s: Sample, cm: &CampaignModel) -> Sample {
    if s.passed() {
        s
    } else {
        s.with_model(Some(cm.config()))
    }
}

fn on_pool<F>(pool: &[std::result::Result<Evaluated, (usize, usize, String)>], limit: usize, f: F) -> Vec<Sample>
where
    F: Fn(&Evaluated) -> Result<Sample> + Sync,
{
    pool.par_iter()
        .take(limit)
        .map(|e| match e {
            Ok(ev) => match f(ev) {
                Ok(s) => attach(s, &ev.cm),
                Err(err) => Sample::failed(ev.cm.index, ev.cm.dim(), "error", err).with_model(Some(ev.cm.config())),
            },
            Err((index, dim, msg)) => Sample::failed(*index, *dim, "model", msg),
        })
        .collect()
}

pub type Pool = Vec<std::result::Result<Evaluated, (usize, usize, String)>>;

fn slack(tol: f64, scale: f64) -> f64 {
    tol * scale.max(1.0)
}

/// λ_f ≥ λ_GNS − tol·max(1, λ_GNS) for one model.
fn comparison(ev: &Evaluated, tol: f64) -> Sample {
    let mut w = Worst::default();
    let g = ev.gns.lambda.to_f64();
    for r in &ev.gaps {
        let l = r.lambda.to_f64();
        let bound = g - slack(tol, g);
        let margin = if l.is_infinite() && g.is_infinite() { 0.0 } else { l - bound };
        w.push(r.f_name.clone(), l, bound, margin);
    }
    w.sample(ev.cm.index, ev.cm.dim())
}

pub fn gap_comparison(pool: &Pool, cfg: &CampaignConfig) -> Vec<Sample> {
    let tol = cfg.tolerance("gap_comparison");
    on_pool(pool, usize::MAX, |ev| Ok(comparison(ev, tol)))
}

fn contraction(problem: &GapProblem<f64>, suite: &Suite, t_grid: &[f64], tol: f64, w: &mut Worst) -> Result<()> {
    let phis: Vec<(f64, Superoperator<f64>)> =
        t_grid.iter().map(|&t| Ok((t, problem.semigroup(t)?))).collect::<Result<_>>()?;
    for f in suite {
        let m = problem.metric(f.clone())?;
        for (t, phi) in &phis {
            let n = m.operator_norm(phi)?;
            w.push(format!("{} t={t}", f.name()), n, 1.0 + tol, 1.0 + tol - n);
        }
    }
    Ok(())
}

pub fn contractivity(pool: &Pool, cfg: &CampaignConfig, suite: &Suite) -> Vec<Sample> {
    let tol = cfg.tolerance("contractivity");
    on_pool(pool, usize::MAX, |ev| {
        let mut w = Worst::default();
        contraction(&ev.problem, suite, &cfg.t_grid, tol, &mut w)?;
        Ok(w.sample(ev.cm.index, ev.cm.dim()))
    })
}

/// Times at which ‖Φ_t x‖_f is sampled for the decay fit: 30 log-spaced points on [1e-6, 5].
pub fn decay_times() -> Vec<f64> {
    log_grid(1e-6, 5.0, 30)
}

/// The empirical rate is min over x and t of −log(‖Φ_t x‖_f/‖x‖_f)/t, taken over
/// random x ∈ ker E together with the computed slowest mode.
pub fn decay_equivalence(pool: &Pool, cfg: &CampaignConfig, suite: &Suite) -> Vec<Sample> {
    let tol = cfg.tolerance("decay_equivalence");
    let n_x = cfg.sizes.decay_samples;
    on_pool(pool, cfg.sizes.decay_models, |ev| {
        let p = &ev.problem;
        let d = p.model().dim();
        let phis: Vec<(f64, Superoperator<f64>)> =
            decay_times().into_iter().map(|t| Ok((t, p.semigroup(t)?))).collect::<Result<_>>()?;
        let mut rng = stream_rng(ev.cm.seed, 3, ev.cm.index);
        let e = p.fixed_points().projector();
        let xs: Vec<ComplexMatrix<f64>> = (0..n_x)
            .map(|_| {
                let x = ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(&mut rng));
                &x - &e.apply(&x)
            })
            .collect();
        let mut w = Worst::default();
        for (f, r) in suite.iter().zip(&ev.gaps) {
            let Some(lambda) = r.lambda.finite() else { continue };
            let m = p.metric(f.clone())?;
            let rate = xs
                .iter()
                .chain(r.slowest_mode.as_ref())
                .map(|x| p.empirical_decay_rate(&m, x, &phis))
                .fold(f64::INFINITY, f64::min);
            let rel = (rate - lambda).abs() / lambda.abs().max(f64::MIN_POSITIVE);
            w.push(r.f_name.clone(), rate, lambda, tol - rel);
        }
        Ok(w.sample(ev.cm.index, ev.cm.dim()))
    })
}

/// |λ_f − λ_f̃| ≤ tol·max(1, λ_f) for f ∈ {GNS, Power(0.3), BKM}.
pub fn transpose_symmetry(pool: &Pool, cfg: &CampaignConfig) -> Vec<Sample> {
    let tol = cfg.tolerance("transpose_symmetry");
    on_pool(pool, cfg.sizes.transpose_models, |ev| {
        let p = &ev.problem;
        let mut w = Worst::default();
        for f in [MonotoneFunction::gns(), MonotoneFunction::power(0.3)?, MonotoneFunction::bkm()] {
            let a = p.spectral_gap(&p.metric(f.clone())?)?.lambda.to_f64();
            let b = p.spectral_gap(&p.metric(f.transpose())?)?.lambda.to_f64();
            let diff = if a == b { 0.0 } else { (a - b).abs() };
            w.push(f.name(), diff, slack(tol, a), slack(tol, a) - diff);
        }
        Ok(w.sample(ev.cm.index, ev.cm.dim()))
    })
}

/// The curve on {0, 0.05, …, 1}: symmetric about 1/2 and nondecreasing on [0, 1/2].
pub fn alpha_curve(pool: &Pool, cfg: &CampaignConfig) -> (Vec<Sample>, String) {
    let tol = cfg.tolerance("alpha_curve");
    let alphas: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    let spreads: Vec<f64> = pool
        .par_iter()
        .take(cfg.sizes.curve_models)
        .filter_map(|e| e.as_ref().ok())
        .filter_map(|ev| ev.problem.gap_curve(&alphas).ok())
        .map(|c| {
            let (lo, hi) = c.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
            if hi.is_finite() { (hi - lo) / hi.abs().max(1.0) } else { 0.0 }
        })
        .collect();
    let samples = on_pool(pool, cfg.sizes.curve_models, |ev| {
        let c = ev.problem.gap_curve(&alphas)?;
        let half = c.points.iter().find(|p| (p.0 - 0.5).abs() < 1e-12).map_or(0.0, |p| p.1);
        let bound = slack(tol, if half.is_finite() { half } else { 0.0 });
        let mut w = Worst::default();
        w.push("symmetry", c.symmetry_defect, bound, bound - c.symmetry_defect);
        w.push("monotonicity", c.monotonicity_defect, bound, bound - c.monotonicity_defect);
        Ok(w.sample(ev.cm.index, ev.cm.dim()))
    });
    let flat = spreads.iter().copied().fold(0.0, f64::max);
    (samples, format!("largest relative spread of a curve {flat:.3e}"))
}

fn run_items<F>(n: usize, f: F) -> Vec<Sample>
where
    F: Fn(usize) -> Result<Sample> + Sync,
{
    (0..n).into_par_iter().map(|i| f(i).unwrap_or_else(|e| Sample::failed(i, 0, "error", e))).collect()
}

/// Closed-form envelope against the objective at the minimizer of the
/// stationarity equation (1 + λA)η = ξ, plus monotone growth as λ ↓ 0.
pub fn moreau_identity(cfg: &CampaignConfig, seed: u64) -> Vec<Sample> {
    let tol = cfg.tolerance("moreau_identity");
    run_items(cfg.sizes.moreau_triples, |i| {
        let mut rng = stream_rng(seed, 6, i);
        let d = 1 + i % 5;
        let rank = rng.random_range(1..=d);
        let q = QuadraticForm::new(random_psd::<f64, _>(d, rank, &mut rng))?;
        let xi: Vec<C<f64>> = (0..d).map(|_| complex_gaussian(&mut rng)).collect();
        let lambda = 10f64.powf(rng.random_range(-3.0..1.0));
        let mut w = Worst::default();
        let closed = moreau_form(&q, lambda, &xi)?;
        let shifted = &ComplexMatrix::identity(d) + &q.operator().scale_real(lambda);
        let eta = Lu::new(&shifted)?.solve_vec(&xi);
        let direct = q.moreau_objective(lambda, &xi, &eta);
        let diff = (closed - direct).abs();
        w.push("closed form", diff, slack(tol, closed.abs()), slack(tol, closed.abs()) - diff);
        let q_xi = q.eval(&xi);
        let mut prev = None;
        for l in [1.0, 0.1, 0.01, 0.001] {
            let v = moreau_form(&q, l, &xi)?;
            if let Some(p) = prev {
                w.push(format!("increase at {l}"), v, p, v - p + slack(tol, q_xi));
            }
            w.push(format!("below Q at {l}"), v, q_xi, q_xi - v + slack(tol, q_xi));
            prev = Some(v);
        }
        Ok(w.sample(i, d))
    })
}

fn random_state(seed: u64, tag: u32, i: usize, dims: &[usize]) -> Result<(crate::qms::DensityMatrix<f64>, rand_chacha::ChaCha8Rng)> {
    let mut rng = stream_rng(seed, tag, i);
    let d = dims[i % dims.len()];
    Ok((random_density_matrix::<f64, _>(d, 1e-3, &mut rng)?, rng))
}

/// f(t) ≤ t + 1 for every f in the suite, then G_f ≤ G_GNS + G_AntiGNS.
pub fn om1_bound(cfg: &CampaignConfig, seed: u64, suite: &Suite) -> Vec<Sample> {
    let tol = cfg.tolerance("om1_bound");
    let mut samples: Vec<Sample> = suite
        .iter()
        .enumerate()
        .map(|(k, f)| match check_om1_bounds(f) {
            Ok(r) => {
                let mut w = Worst::default();
                w.push(format!("om1 {}", f.name()), r.worst_margin, 0.0, r.worst_margin + tol);
                w.sample(k, 0)
            }
            Err(e) => Sample::failed(k, 0, format!("om1 {}", f.name()), e),
        })
        .collect();
    let offset = samples.len();
    samples.extend(run_items(cfg.sizes.sandwich_states, |i| {
        let (rho, _) = random_state(seed, 7, i, &cfg.dims)?;
        let upper = FMetric::new(&rho, MonotoneFunction::gns())?.gram().add(&FMetric::new(&rho, MonotoneFunction::anti_gns())?.gram());
        let mut w = Worst::default();
        for f in suite {
            let g = FMetric::new(&rho, f.clone())?.gram();
            let gap = herm_eig(&upper.sub(&g).matrix().hermitian_part())?.min_eigenvalue();
            w.push(format!("sandwich {}", f.name()), gap, -tol, gap + tol);
        }
        Ok(w.sample(offset + i, rho.dim()))
    }));
    samples
}

/// A ≤ A + P with P PSD: resolvent order and f-order for all built-in f.
pub fn loewner_order(cfg: &CampaignConfig, seed: u64) -> Vec<Sample> {
    let tol = cfg.tolerance("loewner_order");
    let grid = [1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0];
    run_items(cfg.sizes.order_pairs, |i| {
        let mut rng = stream_rng(seed, 8, i);
        let d = cfg.dims[i % cfg.dims.len()];
        let a = random_psd::<f64, _>(d, d, &mut rng);
        let rank = rng.random_range(1..=d);
        let b = &a + &random_psd::<f64, _>(d, rank, &mut rng);
        let mut w = Worst::default();
        match loewner_order_probe(&a, &b, &grid) {
            Ok(r) => {
                let floor = slack(tol, b.frobenius_norm());
                w.push("order", r.order_margin, -floor, r.order_margin + floor);
                for (l, m) in r.resolvent_margins {
                    w.push(format!("resolvent {l}"), m, -floor, m + floor);
                }
                for (name, m) in r.function_margins {
                    w.push(name, m, -floor, m + floor);
                }
            }
            Err(Error::OrderViolation { probe, min_eigenvalue }) => {
                w.push(probe, min_eigenvalue, 0.0, f64::NEG_INFINITY);
            }
            Err(e) => return Err(e),
        }
        Ok(w.sample(i, d))
    })
}

/// KMS against tr(x*ρ^{1/2}yρ^{1/2}); BKM against 64-point Gauss–Legendre
/// quadrature of s ↦ tr(x*ρ^s yρ^{1−s}) on [0, 1].
pub fn metric_closed_forms(cfg: &CampaignConfig, seed: u64) -> Vec<Sample> {
    let (tol_kms, tol_bkm) = (cfg.tolerance("kms_closed_form"), cfg.tolerance("bkm_closed_form"));
    let nodes = gauss_legendre(64);
    run_items(cfg.sizes.closed_form_triples, |i| {
        let (rho, mut rng) = random_state(seed, 9, i, &cfg.dims)?;
        let d = rho.dim();
        let x: ComplexMatrix<f64> = random_matrix(d, &mut rng);
        let y: ComplexMatrix<f64> = random_matrix(d, &mut rng);
        let xh = x.adjoint();
        let sandwich = |s: f64| -> Result<C<f64>> { Ok((&(&(&xh * &rho.power(s)?) * &y) * &rho.power(1.0 - s)?).trace()) };
        let mut w = Worst::default();
        let kms = FMetric::new(&rho, MonotoneFunction::kms())?.f_inner(&x, &y);
        let diff = (kms - sandwich(0.5)?).norm();
        w.push("kms", diff, tol_kms, tol_kms - diff);
        let mut quad = C::new(0.0, 0.0);
        for &(s, wt) in &nodes {
            quad += sandwich(s)? * wt;
        }
        let bkm = FMetric::new(&rho, MonotoneFunction::bkm())?.f_inner(&x, &y);
        let diff = (bkm - quad).norm();
        w.push("bkm", diff, tol_bkm, tol_bkm - diff);
        Ok(w.sample(i, d))
    })
}

/// Balanced generators give the same gap for every f.
pub fn detailed_balance_collapse(cfg: &CampaignConfig, seed: u64, suite: &Suite) -> Vec<Sample> {
    let tol = cfg.tolerance("detailed_balance_collapse");
    run_items(cfg.sizes.balanced_models, |i| {
        let mut rng = stream_rng(seed, 10, i);
        let d = cfg.dims[i % cfg.dims.len()];
        let (model, rho) = random_balanced(d, &mut rng)?;
        let problem = GapProblem::new(model, rho)?;
        let gns = problem.spectral_gap(&problem.metric(MonotoneFunction::gns())?)?.lambda.to_f64();
        let mut lo = gns;
        let mut hi = gns;
        for f in suite {
            let l = problem.spectral_gap(&problem.metric(f.clone())?)?.lambda.to_f64();
            lo = lo.min(l);
            hi = hi.max(l);
        }
        let spread = hi - lo;
        let bound = tol * gns;
        let mut w = Worst::default();
        w.push("spread", spread, bound, bound - spread);
        let s = w.sample(i, d);
        Ok(if s.passed() {
            s
        } else {
            s.with_model(Some(crate::config::ModelConfig::from_model(problem.model(), Some(problem.state()), Some(seed))))
        })
    })
}

pub fn strict_gap(cfg: &CampaignConfig, seed: u64) -> (Vec<Sample>, Option<String>) {
    let tol = cfg.tolerance("strict_gap");
    match strict_gap_search(seed, 2, cfg.sizes.search_draws, tol) {
        Ok(wit) => {
            let note = format!(
                "best draw {} of {}: lambda_gns {:.6e}, lambda_kms {:.6e}",
                wit.index, wit.draws, wit.lambda_gns, wit.lambda_kms
            );
            let mut w = Worst::default();
            w.push("kms - gns relative", wit.relative_margin, tol, wit.relative_margin - tol);
            (vec![w.sample(wit.index, 2)], Some(note))
        }
        Err(e @ Error::SearchExhausted { .. }) if cfg.sizes.search_draws > 0 => {
            (vec![Sample::failed(0, 2, "search", e)], None)
        }
        Err(Error::SearchExhausted { .. }) => (Vec::new(), None),
        Err(e) => (vec![Sample::failed(0, 2, "error", e)], None),
    }
}

/// Gap comparison and contractivity with ker E on models with dim N > 1,
/// and E(b) = 0 for the decaying basis.
pub fn degenerate_ground_state(cfg: &CampaignConfig, seed: u64, suite: &Suite) -> (Vec<Sample>, usize) {
    let (tol_gap, tol_con, tol_ker) =
        (cfg.tolerance("gap_comparison"), cfg.tolerance("contractivity"), cfg.tolerance("degenerate_kernel"));
    let results: Vec<(Sample, usize)> = (0..cfg.sizes.degenerate_models)
        .into_par_iter()
        .map(|i| {
            let cm = match block_model(seed, i) {
                Ok(cm) => cm,
                Err(e) => return (Sample::failed(i, 0, "model", e), 0),
            };
            let rejected = cm.rejected;
            let run = || -> Result<Sample> {
                let ev = evaluate(cm.clone(), suite)?;
                if !ev.problem.fixed_points().degenerate() {
                    return Err(Error::StructureCheck { check: "degenerate fixed points", residual: 0.0 });
                }
                let s = comparison(&ev, tol_gap);
                let mut w = Worst::default();
                w.push(format!("comparison {}", s.label), s.value, s.bound, s.margin);
                contraction(&ev.problem, suite, &cfg.t_grid, tol_con, &mut w)?;
                let e_norm = ev.problem.fixed_points().projector().matrix().frobenius_norm();
                for r in ev.gaps.iter().chain([&ev.gns]) {
                    let bound = slack(tol_ker, e_norm);
                    w.push(format!("kernel {}", r.f_name), r.residuals.kernel, bound, bound - r.residuals.kernel);
                }
                Ok(w.sample(cm.index, cm.dim()))
            };
            let s = run().unwrap_or_else(|e| Sample::failed(i, cm.dim(), "error", e));
            (attach(s, &cm), rejected)
        })
        .collect();
    let rejected = results.iter().map(|r| r.1).sum();
    (results.into_iter().map(|r| r.0).collect(), rejected)
}
