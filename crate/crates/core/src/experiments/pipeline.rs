//! The GCD-bound pipeline: parameters, auxiliary form, certification and
//! the empirical checks of `μ·h(Y,x) ≤ s·h(x) + O(1)` and
//! `m_∞(Y,x) ≤ h(Y,x)`.

use serde::{Deserialize, Serialize};

use super::problem::Problem;
use super::tau::{estimate_tau, TauProfile, TauSettings, DEFAULT_H_MIN};
use crate::error::{Error, Result};
use crate::gcdbound::{
    box_gcd_bound_check, choose_parameters, construct_certificate, empirical_gcd_bound_check, SectionCertificate,
};
use crate::numfield::rational_to_f64;
use crate::points::{enumerate_projective_points, EnumerationSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcdPipelineReport {
    pub certificate: SectionCertificate,
    /// `s_total/(μ·e)`.
    pub ratio: f64,
    /// `(d/vol)^{1/n}`.
    pub target_exponent: f64,
    /// `(d/vol)^{1/n} + δ < 1`: the section can feed the Main Criterion.
    pub criterion_applicable: bool,
    /// `box` or `height`.
    pub sample_kind: String,
    pub sample_bound: f64,
    pub tau: Option<TauProfile>,
}

pub fn run_gcd_pipeline(problem: &Problem) -> Result<GcdPipelineReport> {
    let f = &problem.file;
    if !problem.variety.defining_forms.is_empty() {
        return Err(Error::Unsupported("the GCD pipeline runs on projective space".into()));
    }
    let cycle = problem.target_cycle()?;
    let n = f.ambient_dim as u32;
    let d = u32::try_from(cycle.geometric_degree()).map_err(|_| Error::InvalidInput("cycle too large".into()))?;
    let params = choose_parameters(n, d, f.e, &f.delta()?)?;
    let cert = construct_certificate(&cycle, &params)?;
    let (certificate, sample_kind, sample_bound) = match (f.bounds.box_bound, f.bounds.height) {
        (Some(b), _) if f.field.is_rational() => {
            let b = i64::try_from(b).map_err(|_| Error::InvalidInput("box bound too large".into()))?;
            (box_gcd_bound_check(&cert, b)?, "box", b as f64)
        }
        (_, Some(h)) => {
            let spec = EnumerationSpec::by_height(f.ambient_dim, f.field, h);
            let sample: Vec<_> = enumerate_projective_points(&spec)?.collect();
            (empirical_gcd_bound_check(&cert, &sample)?, "height", h)
        }
        _ => return Err(Error::InvalidInput("bounds.box (over Q) or bounds.height is required".into())),
    };
    let tau = match f.bounds.height {
        Some(h) => Some(estimate_tau(
            &cycle,
            &TauSettings {
                field: f.field,
                variety: &problem.variety,
                exceptional: &problem.exceptional,
                e: f.e,
                height_bound: h,
                h_min: f.bounds.h_min.unwrap_or(DEFAULT_H_MIN),
                peel: f.peel,
            },
        )?),
        None => None,
    };
    Ok(GcdPipelineReport {
        ratio: rational_to_f64(&params.ratio()),
        target_exponent: params.target_exponent(),
        criterion_applicable: params.criterion_applicable(),
        certificate,
        sample_kind: sample_kind.into(),
        sample_bound,
        tau,
    })
}
