//! JSON measure specifications.
//!
//! Explicit triplet:
//! ```json
//! {"dim": 1, "shift": [0.0], "cov": [[1.0]],
//!  "spectral": {"rays": [{"direction": [1.0],
//!    "atoms": [{"r": 2.0, "w": 1.0}],
//!    "densities": [{"lo": 0.0, "hi": 1.0, "kind": "power", "coef": 1.0, "exponent": -1.5}]}]}}
//! ```
//! or a named family: `{"family": "gaussian", "var": 1.0}`,
//! `{"family": "poisson", "rate": 1.0, "jump": 2.0}`,
//! `{"family": "gamma", "shape": 1.0, "rate": 1.0}`, `{"family": "shift", "a": [1.0]}`.
//! A density with `"hi": null` extends to infinity.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{CovMatrix, Vector};
use crate::measure::IdMeasure;
use crate::scalar::Scalar;
use crate::spectral::{Atom, DensitySegment, RadialComponent, RadialDensity, SpectralMeasure, TailBound};
use crate::triplet::LevyTriplet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilySpec {
    Gaussian { var: f64 },
    Poisson { rate: f64, jump: f64 },
    Gamma { shape: f64, rate: f64 },
    Shift { a: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub r: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailSpec {
    LogIntegrable,
    LogDivergent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityKind {
    Power { coef: f64, exponent: f64 },
    ExpOverR { coef: f64, rate: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    pub lo: f64,
    pub hi: Option<f64>,
    #[serde(flatten)]
    pub kind: DensityKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaySpec {
    pub direction: Vec<f64>,
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    #[serde(default)]
    pub densities: Vec<DensitySpec>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralSpec {
    #[serde(default)]
    pub rays: Vec<RaySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripletSpec {
    pub dim: usize,
    pub shift: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
    #[serde(default)]
    pub spectral: SpectralSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    Family(FamilySpec),
    Triplet(TripletSpec),
}

impl MeasureSpec {
    /// Parses JSON text; syntax errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::Spec(format!("malformed JSON at line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let is_family = value.get("family").is_some();
        if is_family {
            serde_json::from_value(value)
                .map(Self::Family)
                .map_err(|e| Error::Spec(format!("family spec: {e}")))
        } else {
            serde_json::from_value(value)
                .map(Self::Triplet)
                .map_err(|e| Error::Spec(format!("triplet spec: {e}")))
        }
    }

    pub fn build<T: Scalar>(&self) -> Result<IdMeasure<T>> {
        match self {
            Self::Family(f) => match f {
                FamilySpec::Gaussian { var } => IdMeasure::gaussian(T::of(*var)),
                FamilySpec::Poisson { rate, jump } => IdMeasure::poisson(T::of(*rate), T::of(*jump)),
                FamilySpec::Gamma { shape, rate } => IdMeasure::gamma(T::of(*shape), T::of(*rate)),
                FamilySpec::Shift { a } => IdMeasure::shift(Vector::new(a.iter().map(|&x| T::of(x)).collect())?),
            },
            Self::Triplet(t) => Ok(IdMeasure::from_triplet(t.build()?).with_label("spec")),
        }
    }
}

impl TripletSpec {
    pub fn build<T: Scalar>(&self) -> Result<LevyTriplet<T>> {
        let conv = |v: &[f64]| v.iter().map(|&x| T::of(x)).collect::<Vec<T>>();
        if self.shift.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: self.shift.len(),
            });
        }
        let shift = Vector::new(conv(&self.shift))?;
        let cov = CovMatrix::new(self.cov.iter().map(|r| conv(r)).collect())?;
        let mut rays = Vec::with_capacity(self.spectral.rays.len());
        for r in &self.spectral.rays {
            if r.direction.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: r.direction.len(),
                });
            }
            let mut ray = RadialComponent::new(Vector::new(conv(&r.direction))?)?;
            ray.atoms = r.atoms.iter().map(|a| Atom { r: T::of(a.r), w: T::of(a.w) }).collect();
            for d in &r.densities {
                let density = match d.kind {
                    DensityKind::Power { coef, exponent } => RadialDensity::Power {
                        coef: T::of(coef),
                        exponent: T::of(exponent),
                    },
                    DensityKind::ExpOverR { coef, rate } => RadialDensity::ExpOverR {
                        coef: T::of(coef),
                        rate: T::of(rate),
                    },
                };
                let mut seg = DensitySegment::new(T::of(d.lo), d.hi.map_or(T::infinity(), T::of), density);
                seg.tail = d.tail.map(|t| match t {
                    TailSpec::LogIntegrable => TailBound::LogIntegrable,
                    TailSpec::LogDivergent => TailBound::LogDivergent,
                });
                ray.densities.push(seg);
            }
            rays.push(ray);
        }
        LevyTriplet::new(shift, cov, SpectralMeasure::new(rays))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{"dim": 1, "shift": [0.0], "cov": [[1.0]], "spectral": {"rays": [{"direction": [1.0], "atoms": [{"r": 2.0, "w": 1.0}], "densities": [{"lo": 0.0, "hi": 1.0, "kind": "power", "coef": 1.0, "exponent": -1.5}]}]}}"#;

    #[test]
    fn parses_documented_example() {
        let spec = MeasureSpec::parse(EXAMPLE).unwrap();
        let m: IdMeasure<f64> = spec.build().unwrap();
        let t = m.triplet().unwrap();
        assert_eq!(t.spectral.rays[0].atoms.len(), 1);
        assert_eq!(t.spectral.rays[0].densities.len(), 1);
    }

    #[test]
    fn parses_families() {
        for s in [
            r#"{"family": "gaussian", "var": 1.0}"#,
            r#"{"family": "poisson", "rate": 1.0, "jump": 2.0}"#,
            r#"{"family": "gamma", "shape": 1.0, "rate": 1.0}"#,
            r#"{"family": "shift", "a": [1.0]}"#,
        ] {
            let m: IdMeasure<f64> = MeasureSpec::parse(s).unwrap().build().unwrap();
            assert_eq!(m.dim(), 1);
        }
    }

    #[test]
    fn unknown_family_is_spec_error() {
        let e = MeasureSpec::parse(r#"{"family": "cauchy", "scale": 1.0}"#).unwrap_err();
        assert!(matches!(e, Error::Spec(_)));
    }

    #[test]
    fn malformed_json_reports_position() {
        let e = MeasureSpec::parse("{\n  \"dim\": 1,\n  \"shift\": [0.0\n}").unwrap_err();
        let Error::Spec(msg) = e else { panic!() };
        assert!(msg.contains("line 4"), "{msg}");
    }

    #[test]
    fn invalid_density_fails_validation() {
        let s = r#"{"dim": 1, "shift": [0.0], "cov": [[0.0]], "spectral": {"rays": [{"direction": [1.0], "densities": [{"lo": 0.0, "hi": 1.0, "kind": "power", "coef": 1.0, "exponent": -3.0}]}]}}"#;
        let e = MeasureSpec::parse(s).unwrap().build::<f64>().unwrap_err();
        let Error::Validation(msg) = e else { panic!() };
        assert!(msg.contains("min(1,r²)"));
    }

    #[test]
    fn infinite_upper_limit() {
        let s = r#"{"dim": 1, "shift": [0.0], "cov": [[0.0]], "spectral": {"rays": [{"direction": [-1.0], "densities": [{"lo": 0.0, "hi": null, "kind": "exp_over_r", "coef": 1.0, "rate": 1.0}]}]}}"#;
        let m: IdMeasure<f64> = MeasureSpec::parse(s).unwrap().build().unwrap();
        assert!(m.triplet().unwrap().spectral.rays[0].densities[0].hi.is_infinite());
    }
}
