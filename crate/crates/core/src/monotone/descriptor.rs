use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::measure::{Atom, LambdaPoint, LoewnerMeasure};
use super::MonotoneFunction;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Serializable name of a metric-defining function, e.g. `{"kind":"power","alpha":0.5}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FDescriptor {
    Gns,
    AntiGns,
    Kms,
    Bkm,
    Power { alpha: f64 },
    Measure { atoms: LoewnerMeasure<f64> },
}

impl FDescriptor {
    /// Parses `gns`, `anti-gns`, `kms`, `bkm`, `power:ALPHA` or `measure:PATH`.
    /// The measure file holds an atom list or an object with an `atoms` field.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let d = match s {
            "gns" => Self::Gns,
            "anti-gns" => Self::AntiGns,
            "kms" => Self::Kms,
            "bkm" => Self::Bkm,
            _ => {
                if let Some(a) = s.strip_prefix("power:") {
                    let alpha: f64 =
                        a.trim().parse().map_err(|_| Error::Config(format!("invalid exponent {a:?} in {s:?}")))?;
                    MonotoneFunction::<f64>::power(alpha)?;
                    Self::Power { alpha }
                } else if let Some(p) = s.strip_prefix("measure:") {
                    Self::Measure { atoms: read_measure(Path::new(p))? }
                } else {
                    return Err(Error::Config(format!(
                        "unknown function {s:?}; expected gns, anti-gns, kms, bkm, power:ALPHA or measure:PATH"
                    )));
                }
            }
        };
        Ok(d)
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Self::Gns => Some(0.0),
            Self::AntiGns => Some(1.0),
            Self::Kms => Some(0.5),
            Self::Power { alpha } => Some(*alpha),
            _ => None,
        }
    }

    pub fn to_function<T: Real>(&self) -> Result<MonotoneFunction<T>> {
        Ok(match self {
            Self::Gns => MonotoneFunction::gns(),
            Self::AntiGns => MonotoneFunction::anti_gns(),
            Self::Kms => MonotoneFunction::kms(),
            Self::Bkm => MonotoneFunction::bkm(),
            Self::Power { alpha } => MonotoneFunction::power(T::lit(*alpha))?,
            Self::Measure { atoms } => {
                let converted = atoms
                    .atoms()
                    .iter()
                    .map(|a| Atom {
                        lambda: match a.lambda {
                            LambdaPoint::Finite(l) => LambdaPoint::Finite(T::lit(l)),
                            LambdaPoint::Infinity => LambdaPoint::Infinity,
                        },
                        weight: T::lit(a.weight),
                    })
                    .collect();
                MonotoneFunction::from_measure(LoewnerMeasure::normalized(converted)?)
            }
        })
    }
}

impl fmt::Display for FDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gns => f.write_str("gns"),
            Self::AntiGns => f.write_str("anti-gns"),
            Self::Kms => f.write_str("kms"),
            Self::Bkm => f.write_str("bkm"),
            Self::Power { alpha } => write!(f, "power:{alpha}"),
            Self::Measure { atoms } => write!(f, "measure[{}]", atoms.atoms().len()),
        }
    }
}

fn read_measure(path: &Path) -> Result<LoewnerMeasure<f64>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum File {
        List(LoewnerMeasure<f64>),
        Object { atoms: LoewnerMeasure<f64> },
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read measure file {}: {e}", path.display())))?;
    let file: File = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: invalid measure: {e}", path.display())))?;
    Ok(match file {
        File::List(m) | File::Object { atoms: m } => m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let d: FDescriptor = serde_json::from_str(r#"{"kind":"power","alpha":0.5}"#).unwrap();
        assert_eq!(d, FDescriptor::Power { alpha: 0.5 });
        let d: FDescriptor = serde_json::from_str(r#"{"kind":"anti-gns"}"#).unwrap();
        assert_eq!(d, FDescriptor::AntiGns);
        let d: FDescriptor =
            serde_json::from_str(r#"{"kind":"measure","atoms":[{"lambda":"inf","weight":1.0}]}"#).unwrap();
        let f = d.to_function::<f64>().unwrap();
        assert_eq!(f.eval(3.0).unwrap(), 3.0);
        assert_eq!(serde_json::to_string(&FDescriptor::Kms).unwrap(), r#"{"kind":"kms"}"#);
    }

    #[test]
    fn cli_strings() {
        assert_eq!(FDescriptor::parse("bkm").unwrap(), FDescriptor::Bkm);
        assert_eq!(FDescriptor::parse("power:0.25").unwrap(), FDescriptor::Power { alpha: 0.25 });
        assert!(FDescriptor::parse("power:2").is_err());
        assert!(FDescriptor::parse("power:x").is_err());
        assert!(FDescriptor::parse("cubic").is_err());
        assert!(FDescriptor::parse("measure:/nonexistent/file.json").is_err());
    }

    #[test]
    fn measure_file() {
        let dir = std::env::temp_dir().join(format!("qmsgap-measure-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("m.json");
        std::fs::write(&p, r#"{"atoms":[{"lambda":0.0,"weight":0.5},{"lambda":"inf","weight":0.5}]}"#).unwrap();
        let d = FDescriptor::parse(&format!("measure:{}", p.display())).unwrap();
        let f = d.to_function::<f64>().unwrap();
        assert!((f.eval(3.0).unwrap() - 2.0).abs() < 1e-15);
        std::fs::remove_dir_all(&dir).ok();
    }
}
