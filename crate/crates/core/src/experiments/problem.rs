//! Problem files: the data of an experiment, as JSON with exact rationals
//! written as `"p/q"` strings.

use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::parse_rational;
use crate::error::{Error, Result};
use crate::geometry::cycle::ExactOrbit;
use crate::geometry::poly::QPoly;
use crate::geometry::{intersect_zero_cycle, Divisor, FormSpec, HomogeneousForm, ProjectivePoint, Variety, ZeroCycle};
use crate::numfield::BaseField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Tau,
    Criterion,
    GcdBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub form: FormSpec,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

/// A divisor: one form, or components with multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DivisorSpec {
    Components { components: Vec<ComponentSpec> },
    Form(FormSpec),
}

impl DivisorSpec {
    pub fn to_divisor(&self, ambient_dim: usize) -> Result<Divisor> {
        let comps = match self {
            DivisorSpec::Form(f) => vec![(f.to_form(ambient_dim + 1)?, 1)],
            DivisorSpec::Components { components } => components
                .iter()
                .map(|c| Ok((c.form.to_form(ambient_dim + 1)?, c.multiplicity)))
                .collect::<Result<Vec<_>>>()?,
        };
        Divisor::new(ambient_dim, comps)
    }
}

/// Orbit data: coefficients (ascending, as rationals) of the minimal
/// polynomial of `θ` and of each coordinate as a polynomial in `θ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSpec {
    pub minpoly: Vec<String>,
    pub coords: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CycleSpec {
    Points { points: Vec<String> },
    Orbits { orbits: Vec<OrbitSpec> },
}

fn qpoly(coeffs: &[String]) -> Result<QPoly> {
    Ok(QPoly::from_rationals(coeffs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?))
}

impl CycleSpec {
    pub fn to_cycle(&self, field: BaseField, ambient_dim: usize) -> Result<ZeroCycle> {
        match self {
            CycleSpec::Points { points } => {
                let pts = points.iter().map(|p| ProjectivePoint::parse(field, p)).collect::<Result<Vec<_>>>()?;
                if let Some(p) = pts.iter().find(|p| p.nvars() != ambient_dim + 1) {
                    return Err(Error::DimensionMismatch { expected: ambient_dim + 1, got: p.nvars() });
                }
                ZeroCycle::from_points(ambient_dim, &pts)
            }
            CycleSpec::Orbits { orbits } => {
                let exact = orbits
                    .iter()
                    .map(|o| {
                        let coords = o.coords.iter().map(|c| qpoly(c)).collect::<Result<Vec<_>>>()?;
                        ExactOrbit::new(&qpoly(&o.minpoly)?, &coords)
                    })
                    .collect::<Result<Vec<_>>>()?;
                ZeroCycle::from_orbits(ambient_dim, exact)
            }
        }
    }
}

/// Where a τ value comes from: a theorem (asserted) or the estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum TauSource {
    Asserted {
        value: String,
        #[serde(default)]
        justification: Option<String>,
    },
    Estimate,
}

/// A τ assumption for an `(orbit, divisor)` pair; a missing index applies
/// to every orbit or divisor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauAssumption {
    #[serde(default)]
    pub orbit: Option<usize>,
    #[serde(default)]
    pub divisor: Option<usize>,
    #[serde(flatten)]
    pub source: TauSource,
}

impl TauAssumption {
    fn matches(&self, orbit: usize, divisor: usize) -> bool {
        self.orbit.is_none_or(|o| o == orbit) && self.divisor.is_none_or(|d| d == divisor)
    }

    fn specificity(&self) -> usize {
        self.orbit.is_some() as usize + self.divisor.is_some() as usize
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    /// Multiplicative height bound for enumerations of `ℙⁿ(k)`.
    #[serde(default)]
    pub height: Option<f64>,
    /// Box bound for integral points or sweeps.
    #[serde(default, rename = "box")]
    pub box_bound: Option<u64>,
    /// Larger box for the two-bound stability check; defaults to `10·box`.
    #[serde(default)]
    pub stability_box: Option<u64>,
    /// Smallest logarithmic height entering τ estimates.
    #[serde(default)]
    pub h_min: Option<f64>,
}

/// Integral points of an auxiliary variety `W ⊆ ℙᴺ` mapped to `X` by
/// picking coordinates: `x_i = w_{map[i]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub ambient_dim: usize,
    #[serde(default)]
    pub variety: Vec<FormSpec>,
    #[serde(default)]
    pub patch: usize,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateSpec {
    /// Affine patch `x_patch = 1` whose integral points are enumerated.
    #[serde(default)]
    pub patch: usize,
    #[serde(default)]
    pub cover: Option<CoverSpec>,
    /// Largest integrality defect `h(D,x) − m_∞(D,x)` kept.
    #[serde(default = "default_defect_bound")]
    pub defect_bound: f64,
}

impl Default for CandidateSpec {
    fn default() -> Self {
        CandidateSpec { patch: 0, cover: None, defect_bound: default_defect_bound() }
    }
}

fn one() -> u32 {
    1
}

fn default_defect_bound() -> f64 {
    1e-9
}

fn rationals() -> BaseField {
    BaseField::Rationals
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub kind: Option<ExperimentKind>,
    #[serde(default = "rationals")]
    pub field: BaseField,
    pub ambient_dim: usize,
    /// Defining forms of `X`; empty for `ℙⁿ`.
    #[serde(default)]
    pub variety: Vec<FormSpec>,
    #[serde(default)]
    pub divisors: Vec<DivisorSpec>,
    #[serde(default)]
    pub cycle: Option<CycleSpec>,
    /// Forms whose common zeros are declared exceptional (`Z₀`).
    #[serde(default)]
    pub exceptional: Vec<FormSpec>,
    #[serde(default)]
    pub tau: Vec<TauAssumption>,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default)]
    pub candidates: CandidateSpec,
    /// Degree of the line sheaf `𝓛 = O(e)`.
    #[serde(default = "one")]
    pub e: u32,
    #[serde(default)]
    pub delta: Option<String>,
    #[serde(default)]
    pub waive_snc: bool,
    #[serde(default)]
    pub peel: bool,
}

/// A problem file with its forms parsed and checked.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub file: ProblemFile,
    pub variety: Variety,
    pub divisors: Vec<Divisor>,
    pub exceptional: Vec<HomogeneousForm>,
    pub cycle: Option<ZeroCycle>,
}

impl ProblemFile {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn resolve(&self) -> Result<Problem> {
        self.field.validate()?;
        let n = self.ambient_dim;
        let forms = |specs: &[FormSpec]| specs.iter().map(|f| f.to_form(n + 1)).collect::<Result<Vec<_>>>();
        let variety = Variety::new(n, forms(&self.variety)?)?;
        let divisors = self.divisors.iter().map(|d| d.to_divisor(n)).collect::<Result<Vec<_>>>()?;
        let exceptional = forms(&self.exceptional)?;
        let cycle = self.cycle.as_ref().map(|c| c.to_cycle(self.field, n)).transpose()?;
        if self.e == 0 {
            return Err(Error::InvalidInput("line sheaf degree e must be positive".into()));
        }
        if let Some(cover) = &self.candidates.cover {
            if cover.map.len() != n + 1 || cover.map.iter().any(|&i| i > cover.ambient_dim) {
                return Err(Error::InvalidInput("cover map must pick one cover coordinate per coordinate".into()));
            }
        } else if self.candidates.patch > n {
            return Err(Error::InvalidInput(format!("affine patch {} out of range", self.candidates.patch)));
        }
        Ok(Problem { file: self.clone(), variety, divisors, exceptional, cycle })
    }

    pub fn delta(&self) -> Result<BigRational> {
        let d = self.delta.as_deref().ok_or_else(|| Error::InvalidInput("delta is required".into()))?;
        parse_rational(d)
    }
}

impl Problem {
    /// The explicit cycle, or the intersection of the divisors on `ℙⁿ`.
    pub fn target_cycle(&self) -> Result<ZeroCycle> {
        let cycle = match &self.cycle {
            Some(c) => c.clone(),
            None if self.divisors.is_empty() => return Err(Error::NoTarget),
            None if !self.variety.defining_forms.is_empty() => {
                return Err(Error::InvalidInput("give the cycle explicitly for a proper subvariety".into()))
            }
            None => intersect_zero_cycle(&self.divisors)?,
        };
        if cycle.is_empty() {
            return Err(Error::NoTarget);
        }
        Ok(cycle)
    }

    /// The most specific assumption covering `(orbit, divisor)`.
    pub fn tau_assumption(&self, orbit: usize, divisor: usize) -> Option<&TauAssumption> {
        self.file
            .tau
            .iter()
            .filter(|a| a.matches(orbit, divisor))
            .rev()
            .max_by_key(|a| a.specificity())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_assumptions_and_cycles() {
        let f = ProblemFile::from_json(
            r#"{
              "ambient_dim": 1,
              "divisors": ["x0^3 - 2*x1^3", {"components": [{"form": "x0", "multiplicity": 1}]}],
              "cycle": {"orbits": [{"minpoly": ["-2", "0", "1"], "coords": [["0", "1"], ["1"]]}]},
              "tau": [
                {"source": "estimate"},
                {"divisor": 1, "source": "asserted", "value": "1/2"},
                {"orbit": 0, "divisor": 1, "source": "asserted", "value": "3/4"}
              ]
            }"#,
        )
        .unwrap();
        let p = f.resolve().unwrap();
        assert_eq!(p.divisors.len(), 2);
        assert_eq!(p.target_cycle().unwrap().geometric_degree(), 2);
        assert_eq!(p.tau_assumption(0, 0).unwrap().source, TauSource::Estimate);
        assert_eq!(
            p.tau_assumption(0, 1).unwrap().source,
            TauSource::Asserted { value: "3/4".into(), justification: None }
        );
        assert_eq!(p.tau_assumption(1, 1).unwrap().orbit, None);
    }

    #[test]
    fn target_cycle_errors() {
        let f = ProblemFile::from_json(r#"{"ambient_dim": 2}"#).unwrap();
        assert_eq!(f.resolve().unwrap().target_cycle(), Err(Error::NoTarget));
        let bad = ProblemFile::from_json(r#"{"ambient_dim": 1, "candidates": {"patch": 3}}"#).unwrap();
        assert!(matches!(bad.resolve(), Err(Error::InvalidInput(_))));
        assert!(ProblemFile::from_json(r#"{"ambient_dim": "x"}"#).is_err());
    }
}
