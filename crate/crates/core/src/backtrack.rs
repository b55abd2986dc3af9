//! Pruned backtracking generator for the contributing set `Φ_p`.
//!
//! Position 1 is pinned to the value 1. Positions `N, N-1, …, 2` are filled
//! right to left, trying candidates in increasing order; a candidate `R` is
//! accepted only while the running sum `Σ (R - 1 - p)` stays non-negative.
//! The sign is carried along: placing `R` to the left of the already placed
//! values adds one inversion per smaller value among them.

use crate::error::{Error, Result};
use crate::permutation::{check_order, Parity, Permutation};

/// Largest `N = 2p` the bitmask-based generator accepts.
pub const MAX_N: usize = 64;

pub(crate) fn check_generator_order(p: u32) -> Result<usize> {
    let n = check_order(p)?;
    if n > MAX_N {
        return Err(Error::invalid(format!(
            "N = {n} exceeds the generator limit of {MAX_N}"
        )));
    }
    Ok(n)
}

#[inline]
fn below(value: u8) -> u64 {
    // `value` is 1-indexed; bit v-1 marks value v.
    (1u64 << (value - 1)) - 1
}

/// A partial permutation: the values at positions `N, N-1, …, N-k+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixState {
    p: u32,
    chosen: Vec<u8>,
    running_sum: i64,
    placed: u64,
    parity: Parity,
}

impl SuffixState {
    pub fn root(p: u32) -> Result<Self> {
        check_generator_order(p)?;
        Ok(SuffixState {
            p,
            chosen: Vec::new(),
            running_sum: 0,
            placed: 0,
            parity: Parity::Even,
        })
    }

    /// Replays `suffix` (right-to-left, 1-indexed values) from the root,
    /// rejecting it if any prefix violates the pruning rule.
    pub fn from_suffix(p: u32, suffix: &[u8]) -> Result<Self> {
        let mut state = Self::root(p)?;
        for &v in suffix {
            state = state.extend(v).ok_or_else(|| {
                Error::invalid(format!(
                    "suffix {suffix:?} is not reachable for p = {p} (at value {v})"
                ))
            })?;
        }
        Ok(state)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        2 * self.p as usize
    }

    /// Values placed so far, rightmost position first.
    pub fn chosen(&self) -> &[u8] {
        &self.chosen
    }

    /// `T_k` for the `k = chosen().len()` values placed.
    pub fn running_sum(&self) -> i64 {
        self.running_sum
    }

    /// Parity of the inversions among the placed values.
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn placed_mask(&self) -> u64 {
        self.placed
    }

    /// All of `2..=N` placed; prepending 1 completes the permutation.
    pub fn is_complete(&self) -> bool {
        self.chosen.len() + 1 == self.n()
    }

    pub fn can_place(&self, value: u8) -> bool {
        let n = self.n();
        (2..=n).contains(&(value as usize))
            && self.placed & (1u64 << (value - 1)) == 0
            && self.running_sum + value as i64 - 1 - self.p as i64 >= 0
    }

    /// The child state after placing `value`, or `None` if that branch is pruned
    /// (or the value is unavailable).
    pub fn extend(&self, value: u8) -> Option<SuffixState> {
        if !self.can_place(value) {
            return None;
        }
        let mut next = self.clone();
        next.push_unchecked(value);
        Some(next)
    }

    fn push_unchecked(&mut self, value: u8) {
        let smaller = (self.placed & below(value)).count_ones();
        if smaller % 2 == 1 {
            self.parity = self.parity.flip();
        }
        self.placed |= 1u64 << (value - 1);
        self.running_sum += value as i64 - 1 - self.p as i64;
        self.chosen.push(value);
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        if !self.is_complete() {
            return None;
        }
        let mut entries = Vec::with_capacity(self.n());
        entries.push(0u8);
        entries.extend(self.chosen.iter().rev().map(|&v| v - 1));
        Some(Permutation::from_zero_based_unchecked(entries))
    }
}

/// Streaming generator over `Φ_p` (or over the leaves below a given
/// [`SuffixState`]). Emission order: right-to-left filling with increasing
/// candidates, i.e. lexicographic on `(σ(N), σ(N-1), …, σ(2))`.
#[derive(Debug, Clone)]
pub struct Backtracking {
    state: SuffixState,
    // Saved (running_sum, parity) for each placement below `base_depth`, for undo.
    undo: Vec<(i64, Parity)>,
    // Next candidate to try at each open frame.
    cursors: Vec<u8>,
    base_depth: usize,
    examined: u64,
    pruned: u64,
    emitted: u64,
}

impl Backtracking {
    pub fn new(p: u32) -> Result<Self> {
        Ok(Self::from_state(SuffixState::root(p)?))
    }

    /// Enumerates the completions of `state`.
    pub fn from_state(state: SuffixState) -> Self {
        let base_depth = state.chosen.len();
        Backtracking {
            state,
            undo: Vec::new(),
            cursors: vec![2],
            base_depth,
            examined: 0,
            pruned: 0,
            emitted: 0,
        }
    }

    /// Candidate values tested (accepted or pruned).
    pub fn examined(&self) -> u64 {
        self.examined
    }

    /// Candidates rejected by the running-sum rule.
    pub fn pruned(&self) -> u64 {
        self.pruned
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    fn pop(&mut self) {
        let value = self.state.chosen.pop().expect("pop below base depth");
        let (sum, parity) = self.undo.pop().expect("undo stack underflow");
        self.state.placed &= !(1u64 << (value - 1));
        self.state.running_sum = sum;
        self.state.parity = parity;
    }

    /// Next permutation of the stream together with its parity.
    pub fn next_with_parity(&mut self) -> Option<(Permutation, Parity)> {
        let n = self.state.n() as u8;
        // A state that is already complete has exactly one leaf: itself.
        if self.state.is_complete() {
            if self.cursors.pop().is_some() {
                self.emitted += 1;
                return self.state.to_permutation().map(|s| (s, self.state.parity));
            }
            return None;
        }
        loop {
            let cursor = *self.cursors.last()?;
            let mut chosen = None;
            let mut v = cursor;
            while v <= n {
                if self.state.placed & (1u64 << (v - 1)) == 0 {
                    self.examined += 1;
                    if self.state.running_sum + v as i64 - 1 - self.state.p as i64 >= 0 {
                        chosen = Some(v);
                        break;
                    }
                    self.pruned += 1;
                }
                v += 1;
            }
            match chosen {
                Some(v) => {
                    *self.cursors.last_mut().expect("frame") = v + 1;
                    self.undo.push((self.state.running_sum, self.state.parity));
                    self.state.push_unchecked(v);
                    if self.state.is_complete() {
                        let out = self.state.to_permutation().expect("complete");
                        let parity = self.state.parity;
                        self.pop();
                        self.emitted += 1;
                        return Some((out, parity));
                    }
                    self.cursors.push(2);
                }
                None => {
                    self.cursors.pop();
                    if self.state.chosen.len() > self.base_depth {
                        self.pop();
                    }
                    if self.cursors.is_empty() {
                        return None;
                    }
                }
            }
        }
    }
}

impl Iterator for Backtracking {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        self.next_with_parity().map(|(sigma, _)| sigma)
    }
}

pub fn enumerate_backtracking(p: u32) -> Result<Backtracking> {
    Backtracking::new(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::enumerate_filtered;
    use std::collections::BTreeSet;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_one_line(v).unwrap()
    }

    #[test]
    fn phi_two_in_generator_order() {
        let got: Vec<_> = enumerate_backtracking(2).unwrap().collect();
        // (σ(4), σ(3), σ(2)) increasing lexicographically.
        assert_eq!(
            got,
            vec![
                perm(&[1, 2, 4, 3]),
                perm(&[1, 3, 2, 4]),
                perm(&[1, 2, 3, 4])
            ]
        );
    }

    #[test]
    fn phi_one() {
        let got: Vec<_> = enumerate_backtracking(1).unwrap().collect();
        assert_eq!(got, vec![perm(&[1, 2])]);
    }

    #[test]
    fn fused_parity_matches_inversions() {
        for p in 1..=4 {
            let mut gen = enumerate_backtracking(p).unwrap();
            while let Some((sigma, parity)) = gen.next_with_parity() {
                assert_eq!(parity, sigma.parity(), "{sigma}");
            }
        }
    }

    #[test]
    fn sets_match_filter() {
        for p in 1..=3 {
            let a: BTreeSet<_> = enumerate_backtracking(p).unwrap().collect();
            let b: BTreeSet<_> = enumerate_filtered(p).unwrap().collect();
            assert_eq!(a, b, "p = {p}");
        }
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_backtracking(3).unwrap().count(), 35);
        assert_eq!(enumerate_backtracking(4).unwrap().count(), 1001);
    }

    #[test]
    fn subtree_enumeration() {
        let state = SuffixState::from_suffix(2, &[4]).unwrap();
        let got: Vec<_> = Backtracking::from_state(state).collect();
        assert_eq!(got, vec![perm(&[1, 3, 2, 4]), perm(&[1, 2, 3, 4])]);

        let leaf = SuffixState::from_suffix(2, &[3, 4, 2]).unwrap();
        assert!(leaf.is_complete());
        let got: Vec<_> = Backtracking::from_state(leaf).collect();
        assert_eq!(got, vec![perm(&[1, 2, 4, 3])]);
    }

    #[test]
    fn unreachable_suffix_rejected() {
        assert!(SuffixState::from_suffix(2, &[2]).is_err());
        assert!(SuffixState::from_suffix(2, &[4, 4]).is_err());
        assert!(SuffixState::from_suffix(2, &[1]).is_err());
    }

    #[test]
    fn running_sum_tracks_suffix_sums() {
        let state = SuffixState::from_suffix(3, &[6, 5, 2]).unwrap();
        // T_1 = 6-4, T_2 = T_1 + 1, T_3 = T_2 - 2
        assert_eq!(state.running_sum(), 1);
    }

    #[test]
    fn order_limits() {
        assert!(enumerate_backtracking(0).is_err());
        assert!(enumerate_backtracking(33).is_err());
        assert!(enumerate_backtracking(32).is_ok());
    }
}
