//! Text encodings shared by every output format: exact integers as plain
//! decimal strings, rationals as `numerator/denominator`.

use crate::{ExactInt, ExactRational};

pub fn parse_exact_int(s: &str) -> Option<ExactInt> {
    s.trim().parse().ok()
}

/// Parses `n/d` or a bare integer.
pub fn parse_rational(s: &str) -> Option<ExactRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: ExactInt = d.trim().parse().ok()?;
            if d == ExactInt::from(0) {
                return None;
            }
            Some(ExactRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(ExactRational::from_integer(s.parse().ok()?)),
    }
}

pub fn rational_string(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `1234567` → `1_234_567`.
pub fn group_digits(s: &str) -> String {
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", s),
    };
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push('_');
        }
        out.push(c);
    }
    format!("{sign}{out}")
}

pub mod decimal {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::ExactInt;

    pub fn serialize<S: Serializer>(v: &ExactInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactInt, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_exact_int(&s)
            .ok_or_else(|| de::Error::custom(format!("not a decimal integer: {s:?}")))
    }
}

pub mod rational {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::ExactRational;

    pub fn serialize<S: Serializer>(v: &ExactRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::rational_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).ok_or_else(|| de::Error::custom(format!("not a rational: {s:?}")))
    }
}
