//! Closed-form evaluation of `const(p)`.
//!
//! With monomial weights `w_n = x^{n-1}`, each contributing permutation adds
//! `(-1)^σ Π_{k=1}^{N-1} E_k^{(p)}` (falling factorials of the exponent trace)
//! to a signed sum, and `const(p)` is that sum divided by the monomial
//! Wronskian `0!·1!·…·(N-1)!`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::backtrack::enumerate_backtracking;
use crate::error::{Error, Result};
use crate::parallel::{self, PartialResult, RunOptions};
use crate::permutation::{check_order, enumerate_filtered, Parity, Permutation};
use crate::report::{decimal, rational};
use crate::{ExactInt, ExactRational};

/// Outcome of evaluating one permutation: either it contributes, or some
/// exponent fell below `p` and the whole term is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term<T> {
    Contributing(T),
    /// `E_step < p`; `step` is 1-based.
    Vanishing {
        step: usize,
        exponent: i64,
    },
}

impl<T> Term<T> {
    pub fn contributing(self) -> Option<T> {
        match self {
            Term::Contributing(t) => Some(t),
            Term::Vanishing { .. } => None,
        }
    }

    pub fn is_vanishing(&self) -> bool {
        matches!(self, Term::Vanishing { .. })
    }
}

/// `E_1, …, E_{N-1}`: the exponent of `x` just before each right-to-left
/// application of `∂^p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentTrace {
    values: Vec<u64>,
}

impl ExponentTrace {
    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

fn check_length(sigma: &Permutation, p: u32) -> Result<usize> {
    let n = check_order(p)?;
    if sigma.len() != n {
        return Err(Error::invalid(format!(
            "permutation of length {} used with p = {p} (expected N = {n})",
            sigma.len()
        )));
    }
    Ok(n)
}

/// Exponent trace via `E_1 = σ(N) - 1`, `E_{k+1} = E_k - p + σ(N-k) - 1`.
pub fn exponent_sequence(sigma: &Permutation, p: u32) -> Result<Term<ExponentTrace>> {
    let n = check_length(sigma, p)?;
    let p = p as i64;
    let mut values = Vec::with_capacity(n - 1);
    let mut e = sigma.image(n) as i64 - 1;
    for k in 1..n {
        if k > 1 {
            e = e - p + sigma.image(n - k + 1) as i64 - 1;
        }
        if e < p {
            return Ok(Term::Vanishing {
                step: k,
                exponent: e,
            });
        }
        values.push(e as u64);
    }
    Ok(Term::Contributing(ExponentTrace { values }))
}

/// `a (a-1) ⋯ (a-p+1)`; zero when `a < p`, one when `p = 0`.
pub fn falling_factorial(a: u64, p: u64) -> ExactInt {
    if a < p {
        return ExactInt::zero();
    }
    if let Some(v) = falling_factorial_u128(a, p) {
        return ExactInt::from(v);
    }
    let mut acc = BigUint::one();
    for i in 0..p {
        acc *= a - i;
    }
    ExactInt::from(acc)
}

pub(crate) fn falling_factorial_u128(a: u64, p: u64) -> Option<u128> {
    if a < p {
        return Some(0);
    }
    (0..p).try_fold(1u128, |acc, i| acc.checked_mul((a - i) as u128))
}

/// `c(σ, p) = Π_k E_k^{(p)}`. Products run in `u128` until they overflow.
pub fn term_coefficient(sigma: &Permutation, p: u32) -> Result<Term<ExactInt>> {
    let trace = match exponent_sequence(sigma, p)? {
        Term::Contributing(t) => t,
        Term::Vanishing { step, exponent } => return Ok(Term::Vanishing { step, exponent }),
    };
    let p = p as u64;
    let mut small: Option<u128> = Some(1);
    let mut big = BigUint::one();
    for &e in trace.values() {
        let f = falling_factorial_u128(e, p);
        small = match (small, f) {
            (Some(acc), Some(f)) => match acc.checked_mul(f) {
                Some(v) => Some(v),
                None => {
                    big = BigUint::from(acc) * f;
                    None
                }
            },
            (Some(acc), None) => {
                big = BigUint::from(acc) * falling_factorial(e, p).magnitude();
                None
            }
            (None, Some(f)) => {
                big *= f;
                None
            }
            (None, None) => {
                big *= falling_factorial(e, p).magnitude();
                None
            }
        };
    }
    Ok(Term::Contributing(match small {
        Some(v) => ExactInt::from(v),
        None => ExactInt::from(big),
    }))
}

pub fn factorial(n: u64) -> ExactInt {
    (1..=n).fold(ExactInt::one(), |acc, k| acc * k)
}

/// `Wronsk(1, x, …, x^{n-1}) = 0!·1!·…·(n-1)!`, cached per `n`.
pub fn wronskian_of_monomials(n: usize) -> ExactInt {
    static CACHE: OnceLock<Mutex<HashMap<usize, ExactInt>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("wronskian cache poisoned").get(&n) {
        return v.clone();
    }
    let mut acc = ExactInt::one();
    let mut fact = ExactInt::one();
    for k in 1..n as u64 {
        fact *= k;
        acc *= &fact;
    }
    cache
        .lock()
        .expect("wronskian cache poisoned")
        .insert(n, acc.clone());
    acc
}

pub(crate) fn exact_div(dividend: &ExactInt, divisor: &ExactInt) -> Result<ExactInt> {
    if divisor.is_zero() {
        return Err(Error::InexactDivision {
            dividend: dividend.to_string(),
            divisor: divisor.to_string(),
        });
    }
    let (q, r) = dividend.div_rem(divisor);
    if !r.is_zero() {
        return Err(Error::InexactDivision {
            dividend: dividend.to_string(),
            divisor: divisor.to_string(),
        });
    }
    Ok(q)
}

/// One row of the results: the contributing-set statistics and `const(p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstReport {
    pub p: u32,
    pub phi_size: u64,
    pub even_count: u64,
    pub odd_count: u64,
    #[serde(with = "decimal")]
    pub wronskian: ExactInt,
    #[serde(with = "decimal")]
    pub signed_sum: ExactInt,
    #[serde(with = "decimal")]
    pub const_p: ExactInt,
    #[serde(with = "rational")]
    pub ratio_p_factorial: ExactRational,
    #[serde(with = "rational")]
    pub ratio_n_factorial: ExactRational,
}

impl ConstReport {
    /// Assembles a report from a reduced partial result, dividing exactly.
    pub fn from_partial(p: u32, part: &PartialResult) -> Result<Self> {
        let n = check_order(p)?;
        let wronskian = wronskian_of_monomials(n);
        let const_p = exact_div(&part.signed_sum, &wronskian)?;
        let ratio_p_factorial = ExactRational::new(const_p.clone(), factorial(p as u64));
        let ratio_n_factorial = ExactRational::new(const_p.clone(), factorial(n as u64));
        Ok(ConstReport {
            p,
            phi_size: part.terms_evaluated,
            even_count: part.even_count,
            odd_count: part.odd_count,
            wronskian,
            signed_sum: part.signed_sum.clone(),
            const_p,
            ratio_p_factorial,
            ratio_n_factorial,
        })
    }

    pub fn n(&self) -> usize {
        2 * self.p as usize
    }

    /// `N!`, the size of the full symmetric group.
    pub fn group_order(&self) -> ExactInt {
        factorial(self.n() as u64)
    }

    /// `|Φ_p| / N!` as printed in the results table: `1/k` when exact,
    /// `≈1/k` with `k = ⌊N!/|Φ_p|⌋` otherwise.
    pub fn phi_fraction_text(&self) -> String {
        let order = self.group_order();
        let size = ExactInt::from(self.phi_size);
        if size.is_zero() {
            return "0".into();
        }
        let (q, r) = order.div_rem(&size);
        if r.is_zero() {
            format!("1/{q}")
        } else {
            format!("≈1/{q}")
        }
    }
}

/// Exact ratios and their table renderings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ratios {
    pub over_p_factorial: ExactRational,
    pub over_n_factorial: ExactRational,
    pub over_p_factorial_text: String,
    pub over_n_factorial_text: String,
}

pub fn ratios(report: &ConstReport) -> Ratios {
    Ratios {
        over_p_factorial: report.ratio_p_factorial.clone(),
        over_n_factorial: report.ratio_n_factorial.clone(),
        over_p_factorial_text: render_ratio(&report.ratio_p_factorial),
        over_n_factorial_text: render_ratio(&report.ratio_n_factorial),
    }
}

/// Table rendering of a non-negative ratio:
/// integers below `10^6` exactly; terminating decimals with at most four
/// significant digits exactly; values from `10^5` up (or integers from
/// `10^6`) as `≈m.m·10^e`; everything else to two significant digits.
/// Rounding is half-to-even.
pub fn render_ratio(r: &ExactRational) -> String {
    if r.is_negative() {
        return format!("-{}", render_ratio(&-r));
    }
    if r.is_zero() {
        return "0".into();
    }
    let million = ExactRational::from_integer(ExactInt::from(1_000_000u32));
    let hundred_k = ExactRational::from_integer(ExactInt::from(100_000u32));
    if r.is_integer() && r < &million {
        return r.to_integer().to_string();
    }
    if r >= &hundred_k {
        let (digits, exp) = round_significant(r, 2);
        let d = digits.to_string();
        return format!("≈{}.{}·10^{}", &d[..1], &d[1..], exp);
    }
    if let Some(text) = terminating_decimal(r) {
        if significant_digits(&text) <= 4 {
            return text;
        }
    }
    let (digits, exp) = round_significant(r, 2);
    place_decimal(&digits.to_string(), exp)
}

fn pow10(e: u32) -> ExactInt {
    num_traits::pow(ExactInt::from(10u32), e as usize)
}

/// `⌊log10 r⌋` for `r > 0`.
fn floor_log10(r: &ExactRational) -> i64 {
    let num_len = r.numer().to_string().len() as i64;
    let den_len = r.denom().to_string().len() as i64;
    let mut e = num_len - den_len;
    let ten_pow = |e: i64| -> ExactRational {
        if e >= 0 {
            ExactRational::from_integer(pow10(e as u32))
        } else {
            ExactRational::new(ExactInt::one(), pow10((-e) as u32))
        }
    };
    while &ten_pow(e) > r {
        e -= 1;
    }
    while &ten_pow(e + 1) <= r {
        e += 1;
    }
    e
}

/// Rounds `r > 0` to `sig` significant digits (half-to-even); returns the
/// digit string as an integer with exactly `sig` digits and the decimal
/// exponent of the leading digit.
fn round_significant(r: &ExactRational, sig: u32) -> (ExactInt, i64) {
    let mut e = floor_log10(r);
    let shift = sig as i64 - 1 - e;
    let scaled = if shift >= 0 {
        r * ExactRational::from_integer(pow10(shift as u32))
    } else {
        r / ExactRational::from_integer(pow10((-shift) as u32))
    };
    let floor = scaled.floor().to_integer();
    let frac = &scaled - ExactRational::from_integer(floor.clone());
    let half = ExactRational::new(ExactInt::one(), ExactInt::from(2));
    let mut m = if frac > half || (frac == half && floor.is_odd()) {
        floor + 1
    } else {
        floor
    };
    if m == pow10(sig) {
        m = pow10(sig - 1);
        e += 1;
    }
    (m, e)
}

fn place_decimal(digits: &str, exp: i64) -> String {
    let len = digits.len() as i64;
    let point = exp + 1;
    let raw = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point >= len {
        format!("{}{}", digits, "0".repeat((point - len) as usize))
    } else {
        format!(
            "{}.{}",
            &digits[..point as usize],
            &digits[point as usize..]
        )
    };
    trim_fraction(raw)
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

/// Exact decimal expansion if the denominator has only the prime factors 2 and 5.
fn terminating_decimal(r: &ExactRational) -> Option<String> {
    let mut den = r.denom().clone();
    let two = ExactInt::from(2);
    let five = ExactInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = (r * ExactRational::from_integer(pow10(places))).to_integer();
    let digits = scaled.to_string();
    let point = digits.len() as i64 - places as i64 - 1;
    Some(place_decimal(&digits, point))
}

fn significant_digits(text: &str) -> usize {
    let digits: String = text.chars().filter(|c| c.is_ascii_digit()).collect();
    let trimmed = digits.trim_start_matches('0');
    let trimmed = if text.contains('.') {
        trimmed
    } else {
        trimmed.trim_end_matches('0')
    };
    trimmed.len().max(1)
}

/// Computes the full report for `p` with default run options.
pub fn const_of_p(p: u32, workers: Option<usize>) -> Result<ConstReport> {
    const_of_p_with(
        p,
        &RunOptions {
            workers,
            ..RunOptions::default()
        },
    )
}

pub fn const_of_p_with(p: u32, options: &RunOptions) -> Result<ConstReport> {
    let part = parallel::run(p, options)?;
    ConstReport::from_partial(p, &part)
}

/// Which enumerator the per-permutation reference route consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Filtered,
    Backtracking,
}

/// Reference route: streams permutations, evaluates `sign · c(σ, p)` one at a
/// time with [`Permutation::sign`] and [`term_coefficient`], and sums.
pub fn const_of_p_streamed(p: u32, generator: Generator) -> Result<ConstReport> {
    let stream: Box<dyn Iterator<Item = Permutation>> = match generator {
        Generator::Filtered => Box::new(enumerate_filtered(p)?),
        Generator::Backtracking => Box::new(enumerate_backtracking(p)?),
    };
    let mut part = PartialResult::zero();
    for sigma in stream {
        let c = term_coefficient(&sigma, p)?
            .contributing()
            .ok_or_else(|| Error::invalid(format!("generator emitted non-contributing {sigma}")))?;
        match sigma.parity() {
            Parity::Even => {
                part.signed_sum += c;
                part.even_count += 1;
            }
            Parity::Odd => {
                part.signed_sum -= c;
                part.odd_count += 1;
            }
        }
        part.terms_evaluated += 1;
    }
    ConstReport::from_partial(p, &part)
}

/// Lossy float view, for quick inspection only.
pub fn approx_f64(r: &ExactRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_one_line(v).unwrap()
    }

    fn rat(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n.into(), d.into())
    }

    #[test]
    fn exponent_traces() {
        let t = exponent_sequence(&perm(&[1, 2, 3, 4]), 2).unwrap();
        assert_eq!(t.contributing().unwrap().values(), &[3, 3, 2]);
        let t = exponent_sequence(&perm(&[1, 2, 4, 3]), 2).unwrap();
        assert_eq!(t.contributing().unwrap().values(), &[2, 3, 2]);
        let t = exponent_sequence(&perm(&[1, 3, 2, 4]), 2).unwrap();
        assert_eq!(t.contributing().unwrap().values(), &[3, 2, 2]);
        let t = exponent_sequence(&perm(&[1, 2]), 1).unwrap();
        assert_eq!(t.contributing().unwrap().values(), &[1]);
    }

    #[test]
    fn vanishing_is_not_an_error() {
        let t = exponent_sequence(&perm(&[3, 1, 4, 2]), 2).unwrap();
        assert_eq!(
            t,
            Term::Vanishing {
                step: 1,
                exponent: 1
            }
        );
        let t = term_coefficient(&perm(&[1, 3, 4, 2]), 2).unwrap();
        assert!(t.is_vanishing());
        assert!(matches!(
            exponent_sequence(&perm(&[1, 2]), 2),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(3, 2), 6.into());
        assert_eq!(falling_factorial(5, 0), 1.into());
        assert_eq!(falling_factorial(1, 2), 0.into());
        assert_eq!(falling_factorial(0, 0), 1.into());
        // 40 consecutive factors overflow u128
        assert_eq!(falling_factorial(60, 40), factorial(60) / factorial(20));
    }

    #[test]
    fn term_coefficients() {
        let c = |v: &[usize], p| {
            term_coefficient(&perm(v), p)
                .unwrap()
                .contributing()
                .unwrap()
        };
        assert_eq!(c(&[1, 2, 3, 4], 2), 72.into());
        assert_eq!(c(&[1, 2, 4, 3], 2), 24.into());
        assert_eq!(c(&[1, 3, 2, 4], 2), 24.into());
        assert_eq!(c(&[1, 2], 1), 1.into());
    }

    #[test]
    fn big_term_promotes() {
        let id = Permutation::identity(12).unwrap();
        let c = term_coefficient(&id, 6).unwrap().contributing().unwrap();
        let trace = exponent_sequence(&id, 6).unwrap().contributing().unwrap();
        let expected = trace
            .values()
            .iter()
            .fold(ExactInt::one(), |acc, &e| acc * falling_factorial(e, 6));
        assert_eq!(c, expected);
        assert!(c > ExactInt::from(u128::MAX));
    }

    #[test]
    fn wronskians() {
        assert_eq!(wronskian_of_monomials(1), 1.into());
        assert_eq!(wronskian_of_monomials(4), 12.into());
        assert_eq!(wronskian_of_monomials(6), 34560.into());
        assert_eq!(wronskian_of_monomials(6), 34560.into());
    }

    #[test]
    fn exact_division_detects_remainder() {
        assert!(matches!(
            exact_div(&7.into(), &2.into()),
            Err(Error::InexactDivision { .. })
        ));
        assert_eq!(exact_div(&(-8).into(), &2.into()).unwrap(), (-4).into());
    }

    #[test]
    fn streamed_route_small_p() {
        let r = const_of_p_streamed(2, Generator::Filtered).unwrap();
        assert_eq!(r.signed_sum, 24.into());
        assert_eq!(r.const_p, 2.into());
        assert_eq!((r.phi_size, r.even_count, r.odd_count), (3, 1, 2));
        let r = const_of_p_streamed(3, Generator::Backtracking).unwrap();
        assert_eq!(r.const_p, 90.into());
    }

    #[test]
    fn ratio_rendering() {
        assert_eq!(render_ratio(&rat(1, 2)), "0.5");
        assert_eq!(render_ratio(&rat(2, 24)), "0.083");
        assert_eq!(render_ratio(&rat(90, 720)), "0.125");
        assert_eq!(render_ratio(&rat(586656, 40320)), "14.55");
        assert_eq!(render_ratio(&rat(24444, 1)), "24444");
        assert_eq!(render_ratio(&rat(1, 1)), "1");
        assert_eq!(render_ratio(&rat(2_000_000, 1)), "≈2.0·10^6");
        assert_eq!(render_ratio(&rat(1, 3)), "0.33");
        assert_eq!(render_ratio(&rat(1, 7)), "0.14");
        assert_eq!(render_ratio(&rat(250_000, 1)), "250000");
        assert_eq!(render_ratio(&rat(500_001, 2)), "≈2.5·10^5");
        assert_eq!(render_ratio(&rat(1, 80)), "0.0125");
        assert_eq!(render_ratio(&rat(12345, 1_000_000)), "0.012");
        // half-to-even at the second significant digit
        assert_eq!(render_ratio(&rat(1_250_000, 1)), "≈1.2·10^6");
        assert_eq!(render_ratio(&rat(1_350_000, 1)), "≈1.4·10^6");
        assert_eq!(render_ratio(&rat(2_500_001, 2)), "≈1.3·10^6");
        assert_eq!(render_ratio(&rat(99999, 1_000_000)), "0.1");
        assert_eq!(render_ratio(&rat(0, 1)), "0");
    }

    #[test]
    fn phi_fraction() {
        let part = PartialResult {
            signed_sum: 24.into(),
            even_count: 1,
            odd_count: 2,
            terms_evaluated: 3,
        };
        let r = ConstReport::from_partial(2, &part).unwrap();
        assert_eq!(r.phi_fraction_text(), "1/8");
        let part = PartialResult {
            signed_sum: ExactInt::from(90) * wronskian_of_monomials(6),
            even_count: 18,
            odd_count: 17,
            terms_evaluated: 35,
        };
        let r = ConstReport::from_partial(3, &part).unwrap();
        assert_eq!(r.phi_fraction_text(), "≈1/20");
        assert_eq!(r.ratio_p_factorial, rat(15, 1));
    }
}
