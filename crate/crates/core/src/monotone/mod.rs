//! Operator monotone functions ℝ₊ → ℝ₊ normalized by f(1) = 1.
//!
//! Every f in OM₁ has a Löwner representation f(t) = ∫ h(t, λ) dm(λ) with a
//! probability measure m on [0, ∞]. The built-in kinds below are evaluated
//! in closed form; [`MonotoneKind::Measure`] evaluates the integral over a
//! discrete measure.

mod descriptor;
mod fit;
mod measure;

use std::fmt;
use std::sync::Arc;

pub use descriptor::FDescriptor;
pub use fit::{fit_loewner_measure, fit_loewner_measure_report, LoewnerFit};
pub use measure::{h_kernel, Atom, LambdaPoint, LoewnerMeasure};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Scalar function wrapped for use as an f (no operator monotonicity is implied).
#[derive(Clone)]
pub struct ClosedForm<T> {
    pub name: String,
    pub f: Arc<dyn Fn(T) -> T + Send + Sync>,
}

impl<T> fmt::Debug for ClosedForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClosedForm({})", self.name)
    }
}

#[derive(Debug, Clone)]
pub enum MonotoneKind<T> {
    /// f ≡ 1.
    Gns,
    /// f(t) = t.
    AntiGns,
    /// f(t) = √t.
    Kms,
    /// f(t) = (t − 1)/log t, f(0) = 0, f(1) = 1.
    Bkm,
    /// f(t) = t^α with α ∈ [0, 1].
    Power(T),
    Measure(LoewnerMeasure<T>),
    ClosedForm(ClosedForm<T>),
}

#[derive(Debug, Clone)]
pub struct MonotoneFunction<T> {
    kind: MonotoneKind<T>,
}

impl<T: Real> MonotoneFunction<T> {
    pub fn gns() -> Self {
        Self { kind: MonotoneKind::Gns }
    }

    pub fn anti_gns() -> Self {
        Self { kind: MonotoneKind::AntiGns }
    }

    pub fn kms() -> Self {
        Self { kind: MonotoneKind::Kms }
    }

    pub fn bkm() -> Self {
        Self { kind: MonotoneKind::Bkm }
    }

    /// t^α; exponents outside [0, 1] are not operator monotone.
    pub fn power(alpha: T) -> Result<Self> {
        if !(alpha >= T::zero() && alpha <= T::one()) {
            return Err(Error::InvalidPower(alpha.f64()));
        }
        Ok(Self { kind: MonotoneKind::Power(alpha) })
    }

    pub fn from_measure(m: LoewnerMeasure<T>) -> Self {
        Self { kind: MonotoneKind::Measure(m) }
    }

    pub fn closed_form(name: impl Into<String>, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self { kind: MonotoneKind::ClosedForm(ClosedForm { name: name.into(), f: Arc::new(f) }) }
    }

    /// GNS, anti-GNS, KMS, BKM and the powers 1/4, 3/4.
    pub fn builtins() -> Vec<Self> {
        vec![
            Self::gns(),
            Self::anti_gns(),
            Self::kms(),
            Self::bkm(),
            Self::power(T::lit(0.25)).expect("valid exponent"),
            Self::power(T::lit(0.75)).expect("valid exponent"),
        ]
    }

    pub fn kind(&self) -> &MonotoneKind<T> {
        &self.kind
    }

    /// Exponent for power functions (GNS ↦ 0, anti-GNS ↦ 1, KMS ↦ 1/2).
    pub fn alpha(&self) -> Option<T> {
        match self.kind {
            MonotoneKind::Gns => Some(T::zero()),
            MonotoneKind::AntiGns => Some(T::one()),
            MonotoneKind::Kms => Some(T::lit(0.5)),
            MonotoneKind::Power(a) => Some(a),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            MonotoneKind::Gns => "gns".into(),
            MonotoneKind::AntiGns => "anti-gns".into(),
            MonotoneKind::Kms => "kms".into(),
            MonotoneKind::Bkm => "bkm".into(),
            MonotoneKind::Power(a) => format!("power:{}", a),
            MonotoneKind::Measure(m) => format!("measure[{}]", m.atoms().len()),
            MonotoneKind::ClosedForm(c) => c.name.clone(),
        }
    }

    pub fn eval(&self, t: T) -> Result<T> {
        if t < T::zero() || t.is_nan() {
            return Err(Error::NegativeArgument(t.f64()));
        }
        Ok(match &self.kind {
            MonotoneKind::Gns => T::one(),
            MonotoneKind::AntiGns => t,
            MonotoneKind::Kms => t.sqrt(),
            MonotoneKind::Bkm => bkm(t),
            MonotoneKind::Power(a) => {
                if a.is_zero() {
                    T::one()
                } else {
                    t.powf(*a)
                }
            }
            MonotoneKind::Measure(m) => m.eval(t)?,
            MonotoneKind::ClosedForm(c) => (c.f)(t),
        })
    }

    /// f(1).
    pub fn normalization(&self) -> Result<T> {
        self.eval(T::one())
    }

    /// Checks membership normalization |f(1) − 1| ≤ 1e-12.
    pub fn ensure_normalized(&self) -> Result<()> {
        let v = self.normalization()?;
        if (v - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) {
            return Err(Error::NotNormalized { value: v.f64() });
        }
        Ok(())
    }

    /// The weight p_j·f(p_i/p_j) of the matrix unit E_ij for eigenvalues
    /// `p_i = num`, `p_j = den` of a faithful state.
    pub fn mean(&self, num: T, den: T) -> Result<T> {
        match &self.kind {
            MonotoneKind::Gns => Ok(den),
            MonotoneKind::AntiGns => Ok(num),
            MonotoneKind::Kms => Ok((num * den).sqrt()),
            MonotoneKind::Power(a) => Ok(num.powf(*a) * den.powf(T::one() - *a)),
            MonotoneKind::Bkm => {
                if (num - den).abs() < T::lit(1e-12) * num {
                    Ok(num)
                } else {
                    Ok(den * bkm(num / den))
                }
            }
            _ => Ok(den * self.eval(num / den)?),
        }
    }

    /// f̃(t) = t·f(1/t).
    pub fn transpose(&self) -> Self {
        let kind = match &self.kind {
            MonotoneKind::Gns => MonotoneKind::AntiGns,
            MonotoneKind::AntiGns => MonotoneKind::Gns,
            MonotoneKind::Kms => MonotoneKind::Kms,
            MonotoneKind::Bkm => MonotoneKind::Bkm,
            MonotoneKind::Power(a) => MonotoneKind::Power(T::one() - *a),
            MonotoneKind::Measure(m) => MonotoneKind::Measure(m.transpose()),
            MonotoneKind::ClosedForm(c) => {
                let inner = c.f.clone();
                let name = match c.name.strip_suffix('~') {
                    Some(base) => base.to_string(),
                    None => format!("{}~", c.name),
                };
                MonotoneKind::ClosedForm(ClosedForm {
                    name,
                    f: Arc::new(move |t: T| {
                        // the value at 0 is the limit of t·f(1/t)
                        let t = if t.is_zero() { T::lit(1e-12).max(T::min_positive_value()) } else { t };
                        t * inner(t.recip())
                    }),
                })
            }
        };
        Self { kind }
    }
}

/// (t − 1)/log t with its limits at 0 and near 1.
fn bkm<T: Real>(t: T) -> T {
    if t.is_zero() {
        return T::zero();
    }
    if t.is_infinite() {
        return t;
    }
    let x = t - T::one();
    // t − 1 is exact near 1, so ln_1p avoids cancellation in log t
    let l = if x.abs() < T::lit(0.5) { x.ln_1p() } else { t.ln() };
    if l.abs() < T::lit(1e-8) {
        // (e^l − 1)/l = 1 + l/2 + l²/6 + …
        T::one() + l / T::lit(2.0) + l * l / T::lit(6.0)
    } else {
        x / l
    }
}

/// Outcome of [`check_om1_bounds`].
#[derive(Debug, Clone, PartialEq)]
pub struct Om1Report {
    /// min over the grid of t + 1 − f(t).
    pub worst_margin: f64,
    pub worst_margin_at: f64,
    /// Largest relative decrease between consecutive grid points (0 when monotone).
    pub worst_decrease: f64,
    pub grid_points: usize,
}

/// Log-spaced grid of `n` points on [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// Evaluates f on a log-grid over [1e-6, 1e6] and checks f(t) ≤ t + 1 + 1e-9
/// and nondecreasing within 1e-12 relative slack.
pub fn check_om1_bounds<T: Real>(f: &MonotoneFunction<T>) -> Result<Om1Report> {
    let grid = log_grid(1e-6, 1e6, 1201);
    let mut worst_margin = f64::INFINITY;
    let mut worst_at = f64::NAN;
    let mut worst_decrease = 0.0f64;
    let mut prev: Option<f64> = None;
    for &t in &grid {
        let v = f.eval(T::lit(t))?.f64();
        if !v.is_finite() {
            return Err(Error::BoundViolation { t, reason: "value is not finite".into() });
        }
        let margin = t + 1.0 - v;
        if margin < worst_margin {
            worst_margin = margin;
            worst_at = t;
        }
        if margin < -1e-9 {
            return Err(Error::BoundViolation { t, reason: format!("f(t) = {v} exceeds t + 1") });
        }
        if let Some(p) = prev {
            let drop = (p - v) / p.abs().max(1.0);
            worst_decrease = worst_decrease.max(drop);
            if drop > 1e-12 {
                return Err(Error::BoundViolation { t, reason: format!("f decreases from {p} to {v}") });
            }
        }
        prev = Some(v);
    }
    Ok(Om1Report { worst_margin, worst_margin_at: worst_at, worst_decrease, grid_points: grid.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_builtins() -> Vec<MonotoneFunction<f64>> {
        let mut v = MonotoneFunction::builtins();
        v.push(MonotoneFunction::power(0.3).unwrap());
        v.push(MonotoneFunction::from_measure(
            LoewnerMeasure::new(vec![
                Atom { lambda: LambdaPoint::Finite(0.0), weight: 0.2 },
                Atom { lambda: LambdaPoint::Finite(2.5), weight: 0.5 },
                Atom { lambda: LambdaPoint::Infinity, weight: 0.3 },
            ])
            .unwrap(),
        ));
        v
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(MonotoneFunction::<f64>::kms().eval(4.0).unwrap(), 2.0);
        assert_eq!(MonotoneFunction::<f64>::bkm().eval(1.0).unwrap(), 1.0);
        assert_eq!(MonotoneFunction::<f64>::bkm().eval(0.0).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert!((MonotoneFunction::<f64>::bkm().eval(e).unwrap() - (e - 1.0)).abs() < 1e-15);
        let gns = MonotoneFunction::from_measure(LoewnerMeasure::point_mass(LambdaPoint::Finite(0.0)));
        assert_eq!(gns.eval(7.0).unwrap(), 1.0);
    }

    #[test]
    fn bkm_is_continuous_across_taylor_branch() {
        let f = MonotoneFunction::<f64>::bkm();
        for &d in &[1e-9f64, 5e-9, 2e-8, 1e-7, -3e-9, -2e-8] {
            let t = 1.0 + d;
            let x = t - 1.0;
            let exact = x / x.ln_1p();
            assert!((f.eval(t).unwrap() - exact).abs() < 1e-15, "t = {t}");
            assert!((exact - (1.0 + x / 2.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_powers_rejected() {
        assert_eq!(MonotoneFunction::<f64>::power(1.5).unwrap_err(), Error::InvalidPower(1.5));
        assert!(MonotoneFunction::<f64>::power(-0.1).is_err());
    }

    #[test]
    fn negative_argument() {
        assert!(matches!(MonotoneFunction::<f64>::kms().eval(-1.0), Err(Error::NegativeArgument(_))));
    }

    #[test]
    fn transposes() {
        let t = MonotoneFunction::<f64>::gns().transpose();
        assert!(matches!(t.kind(), MonotoneKind::AntiGns));
        assert!(matches!(MonotoneFunction::<f64>::kms().transpose().kind(), MonotoneKind::Kms));
        let p = MonotoneFunction::<f64>::power(0.3).unwrap().transpose();
        assert!((p.alpha().unwrap() - 0.7).abs() < 1e-15);
        // t·f(1/t) agrees with the closed kind on a few points
        for f in all_builtins() {
            let ft = f.transpose();
            for &x in &[0.01, 0.5, 2.0, 40.0] {
                let want = x * f.eval(1.0 / x).unwrap();
                assert!((ft.eval(x).unwrap() - want).abs() <= 1e-12 * want.max(1.0), "{}", f.name());
            }
        }
    }

    #[test]
    fn normalization_of_builtins() {
        for f in all_builtins() {
            assert!((f.eval(1.0).unwrap() - 1.0).abs() <= 1e-12, "{}", f.name());
            f.ensure_normalized().unwrap();
        }
    }

    #[test]
    fn om1_bounds_kms() {
        let r = check_om1_bounds(&MonotoneFunction::<f64>::kms()).unwrap();
        // min_t (t + 1 − √t) is 3/4 at t = 1/4; the grid brackets it
        assert!((r.worst_margin - 0.75).abs() < 1e-4);
        assert!((r.worst_margin_at - 0.25).abs() < 0.01);
    }

    #[test]
    fn om1_bounds_builtins_pass() {
        for f in all_builtins() {
            check_om1_bounds(&f).unwrap();
        }
    }

    #[test]
    fn square_is_rejected() {
        let sq = MonotoneFunction::<f64>::closed_form("square", |t| t * t);
        match check_om1_bounds(&sq) {
            Err(Error::BoundViolation { t, .. }) => assert!(t >= (1.0 + 5f64.sqrt()) / 2.0 - 0.05),
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn single_precision_eval() {
        let f = MonotoneFunction::<f32>::bkm();
        assert!((f.eval(1.0).unwrap() - 1.0).abs() < 1e-6);
        assert!((f.mean(0.3, 0.3).unwrap() - 0.3).abs() < 1e-6);
    }

    #[test]
    fn kernel_is_om1_for_each_lambda() {
        for &l in &[0.0, 1e-3, 0.7, 12.0, 1e3] {
            let f = MonotoneFunction::closed_form("h", move |t: f64| h_kernel(t, LambdaPoint::Finite(l)).unwrap());
            assert!((f.eval(1.0).unwrap() - 1.0).abs() < 1e-15);
            check_om1_bounds(&f).unwrap();
        }
    }

    proptest! {
        #[test]
        fn double_transpose_is_identity(t in 1e-4f64..1e4, k in 0usize..8) {
            let fs = all_builtins();
            let f = &fs[k % fs.len()];
            let tt = f.transpose().transpose();
            let (a, b) = (tt.eval(t).unwrap(), f.eval(t).unwrap());
            prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-300));
        }

        #[test]
        fn means_match_weight_formula(p in 1e-3f64..1.0, q in 1e-3f64..1.0, k in 0usize..8) {
            let fs = all_builtins();
            let f = &fs[k % fs.len()];
            let direct = q * f.eval(p / q).unwrap();
            prop_assert!((f.mean(p, q).unwrap() - direct).abs() <= 1e-12 * direct);
        }
    }
}
