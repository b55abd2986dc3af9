//! Permutations in one-line notation, the contribution filter and the
//! exhaustive (filter-after-generate) enumerator.
//!
//! Entries are stored 0-indexed; everything that crosses the text boundary
//! (`Display`, `FromStr`, [`Permutation::one_line`]) uses 1-indexed values.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest permutation length representable (entries are stored as `u8`).
pub const MAX_LEN: usize = u8::MAX as usize;

/// Default cap on `N = 2p` for [`enumerate_filtered`].
pub const DEFAULT_FILTER_CAP: usize = 16;

/// Largest `n` accepted by [`count_late_growing`].
pub const LATE_GROWING_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_inversions(inversions: usize) -> Self {
        if inversions.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<u8>,
}

impl Permutation {
    /// Builds from 1-indexed one-line notation `(σ(1), …, σ(n))`.
    pub fn from_one_line(values: &[usize]) -> Result<Self> {
        let entries = values
            .iter()
            .map(|&v| {
                if v == 0 || v > MAX_LEN {
                    Err(Error::invalid(format!(
                        "entry {v} out of range 1..={MAX_LEN}"
                    )))
                } else {
                    Ok((v - 1) as u8)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_zero_based(entries)
    }

    pub fn from_zero_based(entries: Vec<u8>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::invalid("empty permutation"));
        }
        if n > MAX_LEN {
            return Err(Error::invalid(format!("length {n} exceeds {MAX_LEN}")));
        }
        let mut seen = vec![false; n];
        for &e in &entries {
            let e = e as usize;
            if e >= n || seen[e] {
                return Err(Error::invalid(format!(
                    "not a bijection of 1..={n}: {}",
                    one_line_string(&entries)
                )));
            }
            seen[e] = true;
        }
        Ok(Permutation { entries })
    }

    /// Callers guarantee `entries` is a bijection of `0..len`.
    pub(crate) fn from_zero_based_unchecked(entries: Vec<u8>) -> Self {
        debug_assert!(Self::from_zero_based(entries.clone()).is_ok());
        Permutation { entries }
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_zero_based((0..n).map(|i| i as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `σ(position)` with both sides 1-indexed.
    pub fn image(&self, position: usize) -> usize {
        self.entries[position - 1] as usize + 1
    }

    pub fn zero_based(&self) -> &[u8] {
        &self.entries
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.entries.iter().map(|&e| e as usize + 1).collect()
    }

    /// Inversion count by merge sort, O(n log n).
    pub fn inversions(&self) -> usize {
        fn sort_count(v: &mut [u8], buf: &mut Vec<u8>) -> usize {
            let n = v.len();
            if n < 2 {
                return 0;
            }
            let mid = n / 2;
            let mut count = sort_count(&mut v[..mid], buf) + sort_count(&mut v[mid..], buf);
            buf.clear();
            let (mut i, mut j) = (0, mid);
            while i < mid && j < n {
                if v[i] <= v[j] {
                    buf.push(v[i]);
                    i += 1;
                } else {
                    count += mid - i;
                    buf.push(v[j]);
                    j += 1;
                }
            }
            buf.extend_from_slice(&v[i..mid]);
            buf.extend_from_slice(&v[j..n]);
            v.copy_from_slice(buf);
            count
        }
        let mut work = self.entries.clone();
        let mut buf = Vec::with_capacity(work.len());
        sort_count(&mut work, &mut buf)
    }

    pub fn parity(&self) -> Parity {
        Parity::from_inversions(self.inversions())
    }

    /// `(-1)^σ`.
    pub fn sign(&self) -> i8 {
        self.parity().sign()
    }
}

fn one_line_string(entries: &[u8]) -> String {
    let body: Vec<String> = entries
        .iter()
        .map(|&e| (e as usize + 1).to_string())
        .collect();
    format!("({})", body.join(","))
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&one_line_string(&self.entries))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = match (s.strip_prefix('('), s.strip_suffix(')')) {
            (Some(_), Some(_)) => &s[1..s.len() - 1],
            (None, None) => s,
            _ => return Err(Error::Parse(format!("unbalanced parentheses in {s:?}"))),
        };
        let values = inner
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad entry {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_one_line(&values)
    }
}

pub(crate) fn check_order(p: u32) -> Result<usize> {
    if p == 0 {
        return Err(Error::invalid("order p must be at least 1"));
    }
    Ok(2 * p as usize)
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

/// `(T_1, …, T_{N-1})` with `T_k = Σ_{i=N-k+1}^{N} (σ(i) - 1 - p)`.
pub fn suffix_partial_sums(sigma: &Permutation, p: u32) -> Result<Vec<i64>> {
    check_length(sigma, p)?;
    let p = p as i64;
    let mut running = 0i64;
    // Positions N, N-1, …, 2; a 0-based entry e is σ(i) - 1.
    Ok(sigma.entries[1..]
        .iter()
        .rev()
        .map(|&e| {
            running += e as i64 - p;
            running
        })
        .collect())
}

/// `σ(1) = 1` and every suffix sum `T_k` is non-negative.
pub fn is_contributing(sigma: &Permutation, p: u32) -> Result<bool> {
    check_length(sigma, p)?;
    if sigma.entries[0] != 0 {
        return Ok(false);
    }
    let p = p as i64;
    let mut running = 0i64;
    for &e in sigma.entries[1..].iter().rev() {
        running += e as i64 - p;
        if running < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every prefix average is at most `(n + 1) / 2`.
pub fn is_late_growing(sigma: &Permutation) -> bool {
    let bound = sigma.len() as u64 + 1;
    let mut prefix = 0u64;
    sigma.one_line().iter().enumerate().all(|(i, &v)| {
        prefix += v as u64;
        2 * prefix <= (i as u64 + 1) * bound
    })
}

/// Brute-force count of late-growing permutations of `{1, …, n}`.
pub fn count_late_growing(n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if n > LATE_GROWING_CAP {
        return Err(Error::Infeasible {
            what: "late-growing brute force",
            n,
            cap: LATE_GROWING_CAP,
        });
    }
    Ok(Lexicographic::new(n).filter(is_late_growing).count() as u64)
}

/// Rearranges `v` into its lexicographic successor; false when `v` was the last one.
pub(crate) fn next_permutation(v: &mut [u8]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All of `S_n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Lexicographic {
    current: Option<Vec<u8>>,
}

impl Lexicographic {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_LEN, "permutation length {n} exceeds {MAX_LEN}");
        Lexicographic {
            current: Some((0..n as u8).collect()),
        }
    }
}

impl Iterator for Lexicographic {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.current.as_mut()?;
        let out = Permutation::from_zero_based_unchecked(current.clone());
        if !next_permutation(current) {
            self.current = None;
        }
        Some(out)
    }
}

/// Generate-then-filter enumerator: walks all of `S_N` lexicographically and
/// keeps the contributing permutations.
#[derive(Debug, Clone)]
pub struct Filtered {
    p: u32,
    inner: Lexicographic,
    examined: u64,
}

impl Filtered {
    /// Number of elements of `S_N` inspected so far.
    pub fn examined(&self) -> u64 {
        self.examined
    }
}

impl Iterator for Filtered {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        for sigma in self.inner.by_ref() {
            self.examined += 1;
            // Length is fixed at construction, so the filter cannot fail here.
            if is_contributing(&sigma, self.p).unwrap_or(false) {
                return Some(sigma);
            }
        }
        None
    }
}

pub fn enumerate_filtered(p: u32) -> Result<Filtered> {
    enumerate_filtered_capped(p, DEFAULT_FILTER_CAP)
}

/// As [`enumerate_filtered`] with an explicit cap on `N`.
pub fn enumerate_filtered_capped(p: u32, max_n: usize) -> Result<Filtered> {
    let n = check_order(p)?;
    if n > max_n {
        return Err(Error::Infeasible {
            what: "exhaustive S_N filter",
            n,
            cap: max_n,
        });
    }
    Ok(Filtered {
        p,
        inner: Lexicographic::new(n),
        examined: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_one_line(v).unwrap()
    }

    #[test]
    fn signs() {
        assert_eq!(perm(&[1, 2, 3, 4]).sign(), 1);
        assert_eq!(perm(&[1, 2, 4, 3]).sign(), -1);
        assert_eq!(perm(&[1, 3, 2, 4]).sign(), -1);
        assert_eq!(perm(&[4, 3, 2, 1]).inversions(), 6);
    }

    #[test]
    fn suffix_sums() {
        assert_eq!(
            suffix_partial_sums(&perm(&[1, 2, 3, 4]), 2).unwrap(),
            vec![1, 1, 0]
        );
        assert_eq!(
            suffix_partial_sums(&perm(&[1, 3, 4, 2]), 2).unwrap(),
            vec![-1, 0, 0]
        );
        assert_eq!(suffix_partial_sums(&perm(&[1, 2]), 1).unwrap(), vec![0]);
        assert!(matches!(
            suffix_partial_sums(&perm(&[1, 2, 3]), 2),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn contributing_examples() {
        assert!(is_contributing(&perm(&[1, 2, 4, 3]), 2).unwrap());
        assert!(!is_contributing(&perm(&[3, 1, 4, 2]), 2).unwrap());
        assert!(!is_contributing(&perm(&[1, 4, 2, 3]), 2).unwrap());
        assert!(!is_contributing(&perm(&[1, 3, 4, 2]), 2).unwrap());
        assert!(!is_contributing(&perm(&[1, 4, 3, 2]), 2).unwrap());
        assert!(is_contributing(&perm(&[1, 2]), 3).is_err());
    }

    #[test]
    fn filtered_small_cases() {
        let phi1: Vec<_> = enumerate_filtered(1).unwrap().collect();
        assert_eq!(phi1, vec![perm(&[1, 2])]);
        let phi2: Vec<_> = enumerate_filtered(2).unwrap().collect();
        assert_eq!(
            phi2,
            vec![
                perm(&[1, 2, 3, 4]),
                perm(&[1, 2, 4, 3]),
                perm(&[1, 3, 2, 4])
            ]
        );
        let mut it = enumerate_filtered(3).unwrap();
        assert_eq!(it.by_ref().count(), 35);
        assert_eq!(it.examined(), 720);
    }

    #[test]
    fn filtered_cap() {
        assert!(matches!(
            enumerate_filtered(9),
            Err(Error::Infeasible { n: 18, .. })
        ));
        assert!(enumerate_filtered_capped(2, 3).is_err());
        assert!(enumerate_filtered(0).is_err());
    }

    #[test]
    fn late_growing() {
        assert!(is_late_growing(&perm(&[1, 2])));
        assert!(!is_late_growing(&perm(&[2, 1])));
        // Frozen from an independent brute force over S_n.
        let expected = [1u64, 1, 3, 7, 35, 139, 1001, 5701];
        for (n, want) in (1..=8).zip(expected) {
            assert_eq!(count_late_growing(n).unwrap(), want, "n = {n}");
        }
        assert!(matches!(
            count_late_growing(11),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn text_format() {
        let s: Permutation = "(1,3,2,4)".parse().unwrap();
        assert_eq!(s, perm(&[1, 3, 2, 4]));
        let t: Permutation = " 1, 3 ,2,4 ".parse().unwrap();
        assert_eq!(s, t);
        assert_eq!(s.to_string(), "(1,3,2,4)");
        assert!("(1,1,2)".parse::<Permutation>().is_err());
        assert!("(1,2".parse::<Permutation>().is_err());
        assert!("(0,1)".parse::<Permutation>().is_err());
    }

    #[test]
    fn identity_always_contributes() {
        for p in 1..=12 {
            let id = Permutation::identity(2 * p as usize).unwrap();
            assert!(is_contributing(&id, p).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn lexicographic_covers_group() {
        let all: Vec<_> = Lexicographic::new(4).collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
