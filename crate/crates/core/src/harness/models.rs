use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{CampaignConfig, OverrideModel};
use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::operators::ComplexMatrix;
use crate::qms::random::{random_model, MAX_MODEL_ATTEMPTS};
use crate::qms::{choi_min_eigenvalue, unitality_defect, DensityMatrix, GKSLModel};

/// Independent generator for item `index` of the stream `tag`: ChaCha8 keyed
/// by the campaign seed, with the 64-bit stream id `tag << 32 | index`.
pub fn stream_rng(seed: u64, tag: u32, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(tag) << 32) | index as u64);
    rng
}

/// A model admitted to the campaign.
#[derive(Debug, Clone)]
pub struct CampaignModel {
    pub index: usize,
    pub model: GKSLModel<f64>,
    pub state: DensityMatrix<f64>,
    pub rejected: usize,
    pub seed: u64,
}

impl CampaignModel {
    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn config(&self) -> ModelConfig {
        ModelConfig::from_model(&self.model, Some(&self.state), Some(self.seed))
    }
}

/// ∗-preservation, unitality and complete positivity of Φ_1.
pub fn screen(model: &GKSLModel<f64>) -> Result<bool> {
    let phi = model.semigroup(1.0)?;
    Ok(phi.star_defect() < 1e-10 && unitality_defect(&phi) < 1e-10 && choi_min_eigenvalue(&phi)? > -1e-8)
}

const MAX_ROUNDS: usize = 5;

/// Draws a screened random model of dimension `d` from `rng`, counting every
/// discarded draw.
pub fn draw_screened<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<(GKSLModel<f64>, DensityMatrix<f64>, usize)> {
    let mut rejected = 0;
    let mut last = None;
    for _ in 0..MAX_ROUNDS {
        match random_model::<f64, _>(d, rng) {
            Ok(r) => {
                rejected += r.rejected;
                if screen(&r.model)? {
                    return Ok((r.model, r.state, rejected));
                }
                rejected += 1;
            }
            Err(e) => {
                rejected += MAX_MODEL_ATTEMPTS;
                last = Some(e);
            }
        }
    }
    Err(last.unwrap_or(Error::ConvergenceFailure("no random model passed screening")))
}

/// Model `index` of the campaign's shared random pool.
pub fn pool_model(cfg: &CampaignConfig, seed: u64, index: usize) -> Result<CampaignModel> {
    if let Some(OverrideModel::Depolarizing) = cfg.override_model {
        return Ok(CampaignModel {
            index,
            model: GKSLModel::depolarizing_qubit(0.5),
            state: DensityMatrix::maximally_mixed(2),
            rejected: 0,
            seed,
        });
    }
    let d = cfg.dims[index % cfg.dims.len()];
    let mut rng = stream_rng(seed, 1, index);
    let (model, state, rejected) = draw_screened(d, &mut rng)?;
    Ok(CampaignModel { index, model, state, rejected, seed })
}

fn direct_sum(a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>) -> ComplexMatrix<f64> {
    let (m, n) = (a.rows(), b.rows());
    let mut out = ComplexMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..m {
            out[(i, j)] = a[(i, j)];
        }
    }
    for i in 0..n {
        for j in 0..n {
            out[(m + i, m + j)] = b[(i, j)];
        }
    }
    out
}

/// Two random blocks acting on ℂ^a ⊕ ℂ^b with no coupling, so the fixed-point
/// algebra contains both block projections. The state mixes the block states
/// with weights q and 1 − q.
pub fn block_model(seed: u64, index: usize) -> Result<CampaignModel> {
    let mut rng = stream_rng(seed, 12, index);
    let sizes = if index.is_multiple_of(2) { (2, 2) } else { (2, 3) };
    let (m1, s1, r1) = draw_screened(sizes.0, &mut rng)?;
    let (m2, s2, r2) = draw_screened(sizes.1, &mut rng)?;
    let q: f64 = rng.random_range(0.3..0.7);
    let zero1 = ComplexMatrix::zeros(sizes.0, sizes.0);
    let zero2 = ComplexMatrix::zeros(sizes.1, sizes.1);
    let h = direct_sum(m1.hamiltonian(), m2.hamiltonian());
    let jumps = m1
        .jumps()
        .iter()
        .map(|v| direct_sum(v, &zero2))
        .chain(m2.jumps().iter().map(|v| direct_sum(&zero1, v)))
        .collect();
    let model = GKSLModel::new(h, jumps)?;
    let rho = direct_sum(&s1.matrix().scale_real(q), &s2.matrix().scale_real(1.0 - q));
    Ok(CampaignModel { index, model, state: DensityMatrix::new(rho)?, rejected: r1 + r2, seed })
}
