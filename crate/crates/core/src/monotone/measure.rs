use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A point of the compactified half-line [0, ∞].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaPoint<T> {
    Finite(T),
    Infinity,
}

impl<T: Real> LambdaPoint<T> {
    /// λ ↦ 1/λ with 0 ↔ ∞.
    pub fn reciprocal(self) -> Self {
        match self {
            LambdaPoint::Infinity => LambdaPoint::Finite(T::zero()),
            LambdaPoint::Finite(l) if l.is_zero() => LambdaPoint::Infinity,
            LambdaPoint::Finite(l) => LambdaPoint::Finite(l.recip()),
        }
    }
}

/// The Löwner kernel h(t, λ) = (1+λ)t/(t+λ), with h(t, 0) = 1 and h(t, ∞) = t.
pub fn h_kernel<T: Real>(t: T, lambda: LambdaPoint<T>) -> Result<T> {
    if t < T::zero() || t.is_nan() {
        return Err(Error::NegativeArgument(t.f64()));
    }
    Ok(match lambda {
        LambdaPoint::Infinity => t,
        LambdaPoint::Finite(l) if l < T::zero() => return Err(Error::NegativeArgument(l.f64())),
        LambdaPoint::Finite(l) if l.is_zero() => T::one(),
        LambdaPoint::Finite(l) => {
            if t.is_infinite() {
                T::one() + l
            } else {
                (T::one() + l) * t / (t + l)
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Atom<T> {
    pub lambda: LambdaPoint<T>,
    pub weight: T,
}

/// Discrete Löwner measure m = Σ w_j δ_{λ_j}; a probability measure represents
/// an element of OM₁.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent, bound(serialize = "T: Real + Serialize"))]
pub struct LoewnerMeasure<T> {
    atoms: Vec<Atom<T>>,
}

impl<T: Real> LoewnerMeasure<T> {
    /// Validated probability measure (weights positive, total mass 1 within 1e-12).
    pub fn new(atoms: Vec<Atom<T>>) -> Result<Self> {
        let m = Self::unnormalized(atoms)?;
        let mass = m.total_mass();
        if (mass - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) {
            return Err(Error::InvalidMeasure(format!("total mass {} is not 1", mass.f64())));
        }
        Ok(m)
    }

    /// Rescales positive weights to total mass 1.
    pub fn normalized(atoms: Vec<Atom<T>>) -> Result<Self> {
        let m = Self::unnormalized(atoms)?;
        let mass = m.total_mass();
        Ok(Self { atoms: m.atoms.into_iter().map(|a| Atom { weight: a.weight / mass, ..a }).collect() })
    }

    fn unnormalized(atoms: Vec<Atom<T>>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        for a in &atoms {
            if !(a.weight > T::zero()) || !a.weight.is_finite() {
                return Err(Error::InvalidMeasure(format!("weight {} must be positive", a.weight.f64())));
            }
            if let LambdaPoint::Finite(l) = a.lambda {
                if !(l >= T::zero()) || !l.is_finite() {
                    return Err(Error::InvalidMeasure(format!("atom position {} outside [0, inf]", l.f64())));
                }
            }
        }
        Ok(Self { atoms })
    }

    pub fn point_mass(lambda: LambdaPoint<T>) -> Self {
        Self { atoms: vec![Atom { lambda, weight: T::one() }] }
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn total_mass(&self) -> T {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Σ_j w_j h(t, λ_j).
    pub fn eval(&self, t: T) -> Result<T> {
        let mut s = T::zero();
        for a in &self.atoms {
            s = s + a.weight * h_kernel(t, a.lambda)?;
        }
        Ok(s)
    }

    /// Measure of the transpose t·f(1/t): atoms move to 1/λ.
    pub fn transpose(&self) -> Self {
        Self {
            atoms: self.atoms.iter().map(|a| Atom { lambda: a.lambda.reciprocal(), weight: a.weight }).collect(),
        }
    }
}

impl<'de> Deserialize<'de> for LoewnerMeasure<f64> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let atoms = Vec::<Atom<f64>>::deserialize(d)?;
        LoewnerMeasure::new(atoms).map_err(de::Error::custom)
    }
}

impl<T: Real + Serialize> Serialize for LambdaPoint<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LambdaPoint::Finite(l) => l.serialize(s),
            LambdaPoint::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for LambdaPoint<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr<T> {
            Num(T),
            Str(String),
        }
        match Repr::<T>::deserialize(d)? {
            Repr::Num(v) => Ok(LambdaPoint::Finite(v)),
            Repr::Str(s) if s == "inf" || s == "infinity" => Ok(LambdaPoint::Infinity),
            Repr::Str(s) => Err(de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }
}
