use std::collections::HashMap;

use super::Polynomial;
use crate::error::{Error, Result};

/// Largest Wronskian size the subset expansion accepts.
pub const WRONSKIAN_CAP: usize = 16;

/// `det [ w_j^{(i)} ]_{i,j}` over the polynomial ring, by Laplace expansion
/// along the last row with every minor on the leading rows memoized by its
/// column set.
pub fn symbolic_wronskian(weights: &[Polynomial]) -> Result<Polynomial> {
    let n = weights.len();
    if n == 0 {
        return Err(Error::invalid("Wronskian of an empty list"));
    }
    if n > WRONSKIAN_CAP {
        return Err(Error::Infeasible {
            what: "symbolic Wronskian",
            n,
            cap: WRONSKIAN_CAP,
        });
    }
    let rows: Vec<Vec<Polynomial>> = (0..n as u32)
        .map(|i| weights.iter().map(|w| w.derivative(i)).collect())
        .collect();

    // minors[mask] = det(rows 0..popcount(mask), columns in mask ascending)
    let mut minors: HashMap<u32, Polynomial> = HashMap::new();
    minors.insert(0, Polynomial::one());
    let mut layer = vec![0u32];
    for k in 1..=n {
        let row = &rows[k - 1];
        let mut next: Vec<u32> = Vec::new();
        for &base in &layer {
            for j in 0..n {
                let bit = 1u32 << j;
                if base & bit == 0 && !minors.contains_key(&(base | bit)) {
                    next.push(base | bit);
                    minors.insert(base | bit, Polynomial::zero());
                }
            }
        }
        for &mask in &next {
            let mut det = Polynomial::zero();
            for (pos, j) in (0..n).filter(|j| mask & (1 << j) != 0).enumerate() {
                let entry = &row[j];
                if entry.is_zero() {
                    continue;
                }
                let minor = &minors[&(mask & !(1 << j))];
                if minor.is_zero() {
                    continue;
                }
                let term = entry * minor;
                det = if (k - 1 + pos) % 2 == 0 {
                    &det + &term
                } else {
                    &det - &term
                };
            }
            minors.insert(mask, det);
        }
        // Minors two layers down are no longer needed.
        for m in &layer {
            if *m != 0 {
                minors.remove(m);
            }
        }
        layer = next;
    }
    Ok(minors.remove(&((1u32 << n) - 1)).unwrap_or_default())
}
