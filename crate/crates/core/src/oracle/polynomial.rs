use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::ExactInt;

/// Sparse univariate polynomial with exact integer coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<u32, ExactInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Self::constant(ExactInt::one())
    }

    pub fn constant(c: impl Into<ExactInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `x^e`.
    pub fn x_pow(e: u32) -> Self {
        Self::monomial(1, e)
    }

    pub fn monomial(c: impl Into<ExactInt>, e: u32) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(e, c.into());
        p
    }

    /// Builds from `(exponent, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, C)>,
        C: Into<ExactInt>,
    {
        let mut p = Polynomial::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, e: u32, c: ExactInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(ExactInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, e: u32) -> ExactInt {
        self.terms.get(&e).cloned().unwrap_or_else(ExactInt::zero)
    }

    pub fn leading(&self) -> Option<(u32, &ExactInt)> {
        self.terms.iter().next_back().map(|(&e, c)| (e, c))
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &ExactInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// `k`-th formal derivative.
    pub fn derivative(&self, k: u32) -> Polynomial {
        let mut out = BTreeMap::new();
        for (&e, c) in self.terms.range(k..) {
            let mut factor = ExactInt::one();
            for i in 0..k {
                factor *= e - i;
            }
            out.insert(e - k, c * factor);
        }
        Polynomial { terms: out }
    }

    pub fn scale(&self, s: &ExactInt) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(&e, c)| (e, c * s)).collect(),
        }
    }

    /// Value at an integer point.
    pub fn eval(&self, x: &ExactInt) -> ExactInt {
        // Horner over the dense range of exponents.
        let Some(deg) = self.degree() else {
            return ExactInt::zero();
        };
        let mut acc = ExactInt::zero();
        for e in (0..=deg).rev() {
            acc = acc * x + self.coeff(e);
        }
        acc
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Canonical form: descending exponents, `c*x^e` terms, unit coefficients
/// elided, e.g. `x^3-4*x^2+1`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            let mag = c.abs();
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str("x")?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn parse_term(term: &str, negative: bool) -> Result<(u32, ExactInt), Error> {
    let bad = || Error::Parse(format!("bad polynomial term {term:?}"));
    let (coeff_text, power_text) = match term.find('x') {
        None => (term, None),
        Some(pos) => {
            let coeff = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
            (coeff, Some(&term[pos + 1..]))
        }
    };
    let mut coeff: ExactInt = if coeff_text.is_empty() {
        if power_text.is_none() {
            return Err(bad());
        }
        ExactInt::one()
    } else {
        coeff_text.parse().map_err(|_| bad())?
    };
    let exponent = match power_text {
        None => 0,
        Some("") => 1,
        Some(rest) => rest
            .strip_prefix('^')
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?,
    };
    if negative {
        coeff = -coeff;
    }
    Ok((exponent, coeff))
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '−' { '-' } else { c })
            .collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bytes = cleaned.as_bytes();
        let mut out = Polynomial::zero();
        let mut i = 0;
        while i < bytes.len() {
            let negative = bytes[i] == b'-';
            if bytes[i] == b'+' || bytes[i] == b'-' {
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            if start == i {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            let (e, c) = parse_term(&cleaned[start..i], negative)?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}
