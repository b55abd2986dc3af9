//! Seeded random polynomials for property checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Polynomial;

pub const MAX_DEGREE: u32 = 5;
pub const COEFF_BOUND: i64 = 9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense polynomial of degree at most `max_degree` with coefficients in
/// `[-bound, bound]`; the zero polynomial is rejected and redrawn.
pub fn random_polynomial<R: Rng>(rng: &mut R, max_degree: u32, bound: i64) -> Polynomial {
    loop {
        let p =
            Polynomial::from_terms((0..=max_degree).map(|e| (e, rng.gen_range(-bound..=bound))));
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_weights<R: Rng>(rng: &mut R, count: usize) -> Vec<Polynomial> {
    (0..count)
        .map(|_| random_polynomial(rng, MAX_DEGREE, COEFF_BOUND))
        .collect()
}

/// A test function with `∂^p f ≠ 0`: exact degree drawn from `p..=p+n`.
pub fn random_test_function<R: Rng>(rng: &mut R, p: u32, n: u32) -> Polynomial {
    let degree = rng.gen_range(p..=p + n);
    let mut lead = 0;
    while lead == 0 {
        lead = rng.gen_range(-COEFF_BOUND..=COEFF_BOUND);
    }
    let lower =
        Polynomial::from_terms((0..degree).map(|e| (e, rng.gen_range(-COEFF_BOUND..=COEFF_BOUND))));
    &lower + &Polynomial::monomial(lead, degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_bounded() {
        let a = random_weights(&mut rng(7), 4);
        let b = random_weights(&mut rng(7), 4);
        assert_eq!(a, b);
        for w in &a {
            assert!(!w.is_zero());
            assert!(w.degree().unwrap() <= MAX_DEGREE);
            assert!(w.terms().all(|(_, c)| c.magnitude() <= &9u32.into()));
        }
        let f = random_test_function(&mut rng(1), 2, 4);
        assert!(!f.derivative(2).is_zero());
    }
}
