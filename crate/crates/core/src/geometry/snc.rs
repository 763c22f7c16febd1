use serde::{Deserialize, Serialize};

use super::algebraic::NfElem;
use super::cycle::ZeroCycle;
use super::divisor::Divisor;
use super::poly::Scalar;
use crate::error::{Error, Result};
use crate::linalg::rank_generic;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SncFailure {
    pub orbit: usize,
    pub divisor: Option<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SncReport {
    pub snc: bool,
    pub failures: Vec<SncFailure>,
}

/// Normal-crossings test at every geometric point of `cycle`: each divisor
/// is smooth there and the gradients are linearly independent. All checks
/// are exact in the orbit's field of definition.
pub fn snc_check(divisors: &[Divisor], cycle: &ZeroCycle) -> Result<SncReport> {
    let nvars = cycle.ambient_dim + 1;
    if divisors.iter().any(|d| d.ambient_dim != cycle.ambient_dim) {
        return Err(Error::InvalidInput("divisors and cycle live on different spaces".into()));
    }
    let mut failures = Vec::new();
    for (oi, orbit) in cycle.orbits.iter().enumerate() {
        let point = orbit.exact.point();
        let mut gradients: Vec<Vec<NfElem>> = Vec::new();
        for (di, d) in divisors.iter().enumerate() {
            let through: Vec<_> = d
                .components
                .iter()
                .filter(|c| c.form.evaluate_scalar(&point).is_zero_elem())
                .collect();
            let fail = |reason: &str| SncFailure { orbit: oi, divisor: Some(di), reason: reason.to_string() };
            match through.as_slice() {
                [] => failures.push(fail("point does not lie on the divisor")),
                [c] if c.multiplicity > 1 => failures.push(fail("non-reduced component through the point")),
                [c] => {
                    let grad: Vec<NfElem> = c
                        .form
                        .gradient()
                        .iter()
                        .map(|g| match g {
                            Some(g) => g.evaluate_scalar(&point),
                            None => point[0].zero_like(),
                        })
                        .collect();
                    if grad.iter().all(|x| x.is_zero_elem()) {
                        failures.push(fail("divisor is singular at the point"));
                    } else {
                        gradients.push(grad);
                    }
                }
                _ => failures.push(fail("two components of one divisor meet at the point")),
            }
        }
        if gradients.len() == divisors.len() && !gradients.is_empty() {
            debug_assert!(gradients.iter().all(|g| g.len() == nvars));
            if rank_generic(gradients) < divisors.len() {
                failures.push(SncFailure {
                    orbit: oi,
                    divisor: None,
                    reason: "divisors are not transverse at the point".into(),
                });
            }
        }
    }
    Ok(SncReport { snc: failures.is_empty(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::intersect::intersect_zero_cycle;

    fn check(forms: &[&str], n: usize) -> SncReport {
        let ds: Vec<Divisor> = forms.iter().map(|f| Divisor::parse(f, n).unwrap()).collect();
        let y = intersect_zero_cycle(&ds).unwrap();
        snc_check(&ds, &y).unwrap()
    }

    #[test]
    fn examples() {
        assert!(check(&["x0", "x1"], 2).snc);
        assert!(check(&["x0^2 - 2*x1^2"], 1).snc);
        let r = check(&["x0*x1 - x2^2", "x0*x1 - 4*x2^2"], 2);
        assert!(!r.snc);
        assert_eq!(r.failures.len(), 2);
        assert!(check(&["x0^2 + x1^2 - x2^2", "x1"], 2).snc);
        assert!(!check(&["x0^2 + x1^2 - x2^2", "x1 - x2"], 2).snc);
    }
}
