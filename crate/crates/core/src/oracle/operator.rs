use num_integer::Integer;
use num_traits::{One, Zero};

use super::Polynomial;
use crate::error::{Error, Result};
use crate::ExactInt;

/// Largest `p` the full-group expansion is meant for; `p = 5` works but
/// expands 3 628 800 compositions.
pub const ORACLE_SOFT_LIMIT: u32 = 4;

/// `weight · ∂^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedOperator {
    weight: Polynomial,
    order: u32,
}

impl WeightedOperator {
    pub fn new(weight: Polynomial, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("operator order must be at least 1"));
        }
        Ok(WeightedOperator { weight, order })
    }

    pub fn weight(&self) -> &Polynomial {
        &self.weight
    }

    pub fn order(&self) -> u32 {
        self.order
    }
}

pub fn apply_weighted_operator(op: &WeightedOperator, g: &Polynomial) -> Polynomial {
    let d = g.derivative(op.order);
    if d.is_zero() {
        return d;
    }
    &op.weight * &d
}

/// `[1, x, …, x^{n-1}]`.
pub fn monomial_weights(n: usize) -> Vec<Polynomial> {
    (0..n as u32).map(Polynomial::x_pow).collect()
}

/// `Σ_{σ ∈ S_N} (-1)^σ (w_σ(1)∂^p ∘ … ∘ w_σ(N)∂^p)(f)`, expanded literally.
///
/// Permutations come from Heap's algorithm; every swap flips the sign.
pub fn alternating_composition(
    p: u32,
    weights: &[Polynomial],
    f: &Polynomial,
) -> Result<Polynomial> {
    if p == 0 {
        return Err(Error::invalid("order p must be at least 1"));
    }
    let n = 2 * p as usize;
    if weights.len() != n {
        return Err(Error::invalid(format!(
            "expected {n} weights for p = {p}, got {}",
            weights.len()
        )));
    }
    let ops: Vec<WeightedOperator> = weights
        .iter()
        .map(|w| WeightedOperator::new(w.clone(), p))
        .collect::<Result<_>>()?;

    let compose = |order: &[usize]| -> Polynomial {
        let mut g = f.clone();
        for &j in order.iter().rev() {
            g = apply_weighted_operator(&ops[j], &g);
            if g.is_zero() {
                break;
            }
        }
        g
    };

    let mut order: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut positive = true;
    let mut total = compose(&order);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(counters[i], i);
            }
            positive = !positive;
            let term = compose(&order);
            if !term.is_zero() {
                total = if positive {
                    &total + &term
                } else {
                    &total - &term
                };
            }
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}

/// `const(p)` from the full expansion with `w_n = x^{n-1}` and `f = x^p`:
/// the result must be the constant `const(p) · p! · Wronsk(1, …, x^{N-1})`.
pub fn brute_force_const(p: u32) -> Result<ExactInt> {
    let n = 2 * p as usize;
    let weights = monomial_weights(n);
    let f = Polynomial::x_pow(p);
    let total = alternating_composition(p, &weights, &f)?;
    if total.degree().unwrap_or(0) != 0 {
        return Err(Error::InexactDivision {
            dividend: total.to_string(),
            divisor: "a constant".into(),
        });
    }
    let wronskian = super::symbolic_wronskian(&weights)?;
    let wronskian = wronskian.coeff(0);
    let p_factorial = (1..=p as u64).fold(ExactInt::one(), |acc, k| acc * k);
    let divisor = p_factorial * wronskian;
    let value = total.coeff(0);
    let (q, r) = value.div_rem(&divisor);
    if divisor.is_zero() || !r.is_zero() {
        return Err(Error::InexactDivision {
            dividend: value.to_string(),
            divisor: divisor.to_string(),
        });
    }
    Ok(q)
}
