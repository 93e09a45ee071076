//! Discrete Löwner measures fitted to closed-form functions by nonnegative
//! least squares on a fixed atom grid.

use super::measure::{h_kernel, Atom, LambdaPoint, LoewnerMeasure};
use super::{log_grid, MonotoneFunction, MonotoneKind};
use crate::error::{Error, Result};
use crate::scalar::Real;

const LAMBDA_RANGE: (f64, f64) = (1e-4, 1e4);
const FIT_RANGE: (f64, f64) = (1e-3, 1e3);
const FIT_POINTS: usize = 241;
const CHECK_POINTS: usize = 2001;
const TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct LoewnerFit<T> {
    pub measure: LoewnerMeasure<T>,
    /// sup over a dense grid on [1e-3, 1e3] of |m(t) − f(t)| / f(t).
    pub sup_relative_error: f64,
}

/// Fits f by a measure on `n_atoms` log-spaced points of [1e-4, 1e4] plus the
/// endpoints 0 and ∞. Fails with [`Error::FitTolerance`] above 1e-3 relative error.
pub fn fit_loewner_measure<T: Real>(f: &MonotoneFunction<T>, n_atoms: usize) -> Result<LoewnerMeasure<T>> {
    fit_loewner_measure_report(f, n_atoms).map(|r| r.measure)
}

pub fn fit_loewner_measure_report<T: Real>(f: &MonotoneFunction<T>, n_atoms: usize) -> Result<LoewnerFit<T>> {
    if n_atoms < 2 {
        return Err(Error::InvalidMeasure(format!("n_atoms = {n_atoms} must be at least 2")));
    }
    let exact = match f.kind() {
        MonotoneKind::Gns => Some(LoewnerMeasure::point_mass(LambdaPoint::Finite(T::zero()))),
        MonotoneKind::AntiGns => Some(LoewnerMeasure::point_mass(LambdaPoint::Infinity)),
        MonotoneKind::Power(a) if a.is_zero() => Some(LoewnerMeasure::point_mass(LambdaPoint::Finite(T::zero()))),
        MonotoneKind::Power(a) if *a == T::one() => Some(LoewnerMeasure::point_mass(LambdaPoint::Infinity)),
        MonotoneKind::Measure(m) => Some(m.clone()),
        _ => None,
    };
    if let Some(measure) = exact {
        return Ok(LoewnerFit { measure, sup_relative_error: 0.0 });
    }

    let mut lambdas: Vec<LambdaPoint<f64>> = vec![LambdaPoint::Finite(0.0)];
    lambdas.extend(log_grid(LAMBDA_RANGE.0, LAMBDA_RANGE.1, n_atoms).into_iter().map(LambdaPoint::Finite));
    lambdas.push(LambdaPoint::Infinity);

    let ts = log_grid(FIT_RANGE.0, FIT_RANGE.1, FIT_POINTS);
    let target: Vec<f64> = ts.iter().map(|&t| f.eval(T::lit(t)).map(|v| v.f64())).collect::<Result<_>>()?;
    if target.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidMeasure("target function must be positive and finite on the fit grid".into()));
    }
    // rows scaled by 1/f(t) so the residual is relative
    let a: Vec<Vec<f64>> = ts
        .iter()
        .zip(&target)
        .map(|(&t, &ft)| lambdas.iter().map(|&l| h_kernel(t, l).map(|h| h / ft)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let b = vec![1.0; ts.len()];
    let w = nnls(&a, &b)?;

    let atoms: Vec<Atom<T>> = lambdas
        .iter()
        .zip(&w)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&l, &w)| Atom {
            lambda: match l {
                LambdaPoint::Finite(x) => LambdaPoint::Finite(T::lit(x)),
                LambdaPoint::Infinity => LambdaPoint::Infinity,
            },
            weight: T::lit(w),
        })
        .collect();
    let measure = LoewnerMeasure::normalized(atoms)?;

    let mut sup = 0.0f64;
    for t in log_grid(FIT_RANGE.0, FIT_RANGE.1, CHECK_POINTS) {
        let want = f.eval(T::lit(t))?.f64();
        let got = measure.eval(T::lit(t))?.f64();
        sup = sup.max((got - want).abs() / want);
    }
    if !(sup <= TOLERANCE) {
        return Err(Error::FitTolerance { error: sup, tolerance: TOLERANCE });
    }
    Ok(LoewnerFit { measure, sup_relative_error: sup })
}

/// Lawson–Hanson active-set solver for min ‖Ax − b‖ subject to x ≥ 0.
fn nnls(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let tol = 1e-12 * m as f64;
    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];

    let gradient = |x: &[f64]| -> Vec<f64> {
        let r: Vec<f64> = (0..m).map(|i| b[i] - (0..n).map(|j| a[i][j] * x[j]).sum::<f64>()).collect();
        (0..n).map(|j| (0..m).map(|i| a[i][j] * r[i]).sum()).collect()
    };

    for _ in 0..(3 * n + 10) {
        let w = gradient(&x);
        let candidate = (0..n).filter(|&j| !passive[j] && w[j] > tol).max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else {
            return Ok(x);
        };
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let sub: Vec<Vec<f64>> = a.iter().map(|row| idx.iter().map(|&k| row[k]).collect()).collect();
            let z_sub = least_squares(&sub, b);
            let mut z = vec![0.0; n];
            for (&k, &v) in idx.iter().zip(&z_sub) {
                z[k] = v;
            }
            if idx.iter().all(|&k| z[k] > 0.0) {
                x = z;
                break;
            }
            let alpha = idx
                .iter()
                .filter(|&&k| z[k] <= 0.0)
                .map(|&k| x[k] / (x[k] - z[k]))
                .fold(f64::INFINITY, f64::min);
            for k in 0..n {
                x[k] += alpha * (z[k] - x[k]);
                if passive[k] && x[k] <= tol {
                    passive[k] = false;
                    x[k] = 0.0;
                }
            }
        }
    }
    Err(Error::ConvergenceFailure("nonnegative least squares"))
}

/// Householder QR least squares; dependent columns get coefficient zero.
fn least_squares(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut r: Vec<Vec<f64>> = a.to_vec();
    let mut y = b.to_vec();
    for k in 0..n.min(m) {
        let norm: f64 = (k..m).map(|i| r[i][k] * r[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| r[i][k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for j in k..n {
            let s: f64 = (k..m).map(|i| v[i - k] * r[i][j]).sum::<f64>() * 2.0 / vv;
            for i in k..m {
                r[i][j] -= s * v[i - k];
            }
        }
        let s: f64 = (k..m).map(|i| v[i - k] * y[i]).sum::<f64>() * 2.0 / vv;
        for i in k..m {
            y[i] -= s * v[i - k];
        }
    }
    let scale = (0..n.min(m)).map(|k| r[k][k].abs()).fold(0.0, f64::max);
    let mut x = vec![0.0; n];
    for k in (0..n.min(m)).rev() {
        if r[k][k].abs() <= 1e-14 * scale {
            continue;
        }
        let s: f64 = ((k + 1)..n).map(|j| r[k][j] * x[j]).sum();
        x[k] = (y[k] - s) / r[k][k];
    }
    x
}
