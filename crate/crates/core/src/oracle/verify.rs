use std::fmt;

use num_traits::Zero;

use super::{alternating_composition, symbolic_wronskian, Polynomial};
use crate::error::Result;
use crate::ExactRational;

/// Proportionality constant recovered from the two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extracted {
    Ratio(ExactRational),
    /// The right-hand side vanished, so no constant can be read off.
    Indeterminate,
}

impl fmt::Display for Extracted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extracted::Ratio(r) => write!(f, "{r}"),
            Extracted::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub holds: bool,
    pub extracted: Extracted,
    /// The alternating composition.
    pub lhs: Polynomial,
    /// `Wronsk(weights) · ∂^p f`.
    pub rhs: Polynomial,
}

/// Checks that the alternating composition is an exact scalar multiple of
/// `Wronsk(weights) · ∂^p f` and reports the scalar. `f` defaults to
/// `x^{p+N}`.
pub fn verify_theorem(
    p: u32,
    weights: &[Polynomial],
    f: Option<&Polynomial>,
) -> Result<Verification> {
    let default_f;
    let f = match f {
        Some(f) => f,
        None => {
            default_f = Polynomial::x_pow(p + 2 * p);
            &default_f
        }
    };
    let lhs = alternating_composition(p, weights, f)?;
    let rhs = &symbolic_wronskian(weights)? * &f.derivative(p);

    let Some((_, rhs_lead)) = rhs.leading() else {
        return Ok(Verification {
            holds: lhs.is_zero(),
            extracted: Extracted::Indeterminate,
            lhs,
            rhs,
        });
    };
    // Ratio of the coefficients at the rhs leading exponent, then an exact
    // coefficientwise check of lhs·den = rhs·num.
    let (lead_exp, _) = rhs.leading().expect("nonzero");
    let ratio = ExactRational::new(lhs.coeff(lead_exp), rhs_lead.clone());
    let holds = lhs.scale(ratio.denom()) == rhs.scale(ratio.numer())
        && (lhs.degree() == rhs.degree() || ratio.is_zero() && lhs.is_zero());
    Ok(Verification {
        holds,
        extracted: Extracted::Ratio(ratio),
        lhs,
        rhs,
    })
}
