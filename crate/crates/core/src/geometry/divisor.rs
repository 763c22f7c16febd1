use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::form::HomogeneousForm;
use super::point::ProjectivePoint;
use super::poly::QPoly;
use crate::arith::rat;
use crate::error::{Error, Result};

/// Component of a divisor: a form with a positive multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub form: HomogeneousForm,
    pub multiplicity: u32,
}

/// Effective divisor `Σ m_i·div(F_i)` on `ℙⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Divisor {
    pub ambient_dim: usize,
    pub components: Vec<Component>,
    pub reduced: bool,
}

impl Divisor {
    pub fn new(ambient_dim: usize, components: Vec<(HomogeneousForm, u32)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("a divisor needs at least one component".into()));
        }
        for (f, m) in &components {
            if f.nvars() != ambient_dim + 1 {
                return Err(Error::DimensionMismatch { expected: ambient_dim + 1, got: f.nvars() });
            }
            if f.is_zero() || f.degree() == 0 {
                return Err(Error::InvalidInput("divisor components must be nonconstant".into()));
            }
            if *m == 0 {
                return Err(Error::InvalidInput("multiplicities must be positive".into()));
            }
        }
        let components: Vec<Component> = components
            .into_iter()
            .map(|(f, m)| Component { form: f.primitive(), multiplicity: m })
            .collect();
        let reduced = components.iter().all(|c| c.multiplicity == 1) && is_reduced(&components);
        Ok(Divisor { ambient_dim, components, reduced })
    }

    pub fn from_form(form: HomogeneousForm) -> Result<Self> {
        let n = form.nvars().saturating_sub(1);
        Self::new(n, vec![(form, 1)])
    }

    pub fn parse(s: &str, ambient_dim: usize) -> Result<Self> {
        Self::from_form(HomogeneousForm::parse(s, ambient_dim + 1)?)
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(|c| c.multiplicity * c.form.degree()).sum()
    }

    /// The single defining form `Π F_i^{m_i}`.
    pub fn defining_form(&self) -> HomogeneousForm {
        self.components
            .iter()
            .map(|c| c.form.pow(c.multiplicity))
            .reduce(|a, b| a.mul(&b))
            .expect("nonempty")
    }

    pub fn contains(&self, x: &ProjectivePoint) -> Result<bool> {
        for c in &self.components {
            if c.form.evaluate(x.coords())?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Deterministic sequence of small integer points used to restrict forms
/// to lines.
fn probe_point(nvars: usize, seed: u64) -> Vec<BigRational> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..nvars)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            rat(((state >> 33) % 19) as i64 - 9)
        })
        .collect()
}

/// Binary form `F(s·p + t·q)`.
pub(crate) fn restrict_to_line(f: &HomogeneousForm, p: &[BigRational], q: &[BigRational]) -> HomogeneousForm {
    let n = f.nvars();
    // Substitute x = B·z with B = [p q 0 … 0] and keep z0, z1.
    let mut square = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        square[i][0] = p[i].clone();
        if n > 1 {
            square[i][1] = q[i].clone();
        }
    }
    let g = f.substitute_linear(&square);
    HomogeneousForm::new(
        2,
        f.degree(),
        g.terms().iter().map(|(e, c)| (vec![e[0], e.get(1).copied().unwrap_or(0)], c.clone())),
    )
    .expect("restriction is a binary form")
}

/// `(F(t,1), degree)` data for squarefreeness of a binary form.
fn binary_parts(b: &HomogeneousForm) -> (QPoly, u32) {
    let u = b.binary_to_univariate();
    let deg_u = u.degree().unwrap_or(0) as u32;
    (u, b.degree() - deg_u)
}

fn binary_squarefree(b: &HomogeneousForm) -> bool {
    if b.is_zero() {
        return false;
    }
    let (u, infinity_mult) = binary_parts(b);
    infinity_mult <= 1 && u.gcd(&u.derivative()).degree() == Some(0)
}

fn binary_coprime(a: &HomogeneousForm, b: &HomogeneousForm) -> bool {
    let (ua, ia) = binary_parts(a);
    let (ub, ib) = binary_parts(b);
    !(ia > 0 && ib > 0) && ua.gcd(&ub).degree() == Some(0)
}

const LINE_ATTEMPTS: u64 = 8;

/// Squarefree and pairwise coprime, certified by restriction to a line on
/// which the restrictions already have these properties.
fn is_reduced(components: &[Component]) -> bool {
    let n = components[0].form.nvars();
    for attempt in 0..LINE_ATTEMPTS {
        let p = probe_point(n, 2 * attempt);
        let q = probe_point(n, 2 * attempt + 1);
        let restricted: Vec<HomogeneousForm> =
            components.iter().map(|c| restrict_to_line(&c.form, &p, &q)).collect();
        if restricted.iter().any(|r| r.is_zero()) {
            continue;
        }
        let ok = restricted.iter().all(binary_squarefree)
            && (0..restricted.len())
                .all(|i| (i + 1..restricted.len()).all(|j| binary_coprime(&restricted[i], &restricted[j])));
        if ok {
            return true;
        }
    }
    false
}

/// Projective variety `X ⊆ ℙⁿ` cut out by forms; the empty list is `ℙⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Variety {
    pub ambient_dim: usize,
    pub defining_forms: Vec<HomogeneousForm>,
    pub dim: usize,
}

impl Variety {
    pub fn projective_space(n: usize) -> Self {
        Variety { ambient_dim: n, defining_forms: Vec::new(), dim: n }
    }

    /// Hypersurface or complete intersection: `dim = n − #forms`.
    pub fn new(ambient_dim: usize, defining_forms: Vec<HomogeneousForm>) -> Result<Self> {
        for f in &defining_forms {
            if f.nvars() != ambient_dim + 1 {
                return Err(Error::DimensionMismatch { expected: ambient_dim + 1, got: f.nvars() });
            }
        }
        let dim = ambient_dim.checked_sub(defining_forms.len()).ok_or_else(|| {
            Error::InvalidInput("more defining forms than the ambient dimension".into())
        })?;
        Ok(Variety { ambient_dim, defining_forms, dim })
    }

    pub fn contains(&self, x: &ProjectivePoint) -> Result<bool> {
        for f in &self.defining_forms {
            if !f.evaluate(x.coords())?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
