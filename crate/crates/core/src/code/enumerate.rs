//! Exhaustive codeword enumeration.
//!
//! Codewords are visited in a p-ary Gray order: step `t` adds basis row
//! `v_p(t)` to the running word, so each step costs one row addition. The
//! top digits split the space into independent chunks for rayon.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::LinearCode;
use crate::error::{Error, Result};

pub const DEFAULT_DIMENSION_CAP: usize = 16;

/// Weight distribution `weight -> number of codewords`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightEnumerator(pub BTreeMap<usize, u64>);

impl WeightEnumerator {
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn count(&self, w: usize) -> u64 {
        self.0.get(&w).copied().unwrap_or(0)
    }

    pub fn minimum_distance(&self) -> Option<usize> {
        self.0.keys().copied().find(|&w| w > 0)
    }
}

pub(crate) fn check_cap(code: &LinearCode, cap: usize) -> Result<()> {
    if code.dimension() > cap {
        return Err(Error::DimensionCap {
            dim: code.dimension(),
            cap,
        });
    }
    Ok(())
}

#[inline]
fn add_row(word: &mut [u8], row: &[u8], p: u8) {
    for (w, &r) in word.iter_mut().zip(row) {
        let s = *w + r;
        *w = if s >= p { s - p } else { s };
    }
}

#[inline]
pub(crate) fn weight_of(word: &[u8]) -> usize {
    word.iter().map(|&v| usize::from(v != 0)).sum()
}

/// Calls `visit(state, coefficients, word, weight)` once per codeword. The
/// coefficient vector is with respect to the reduced basis of `code`. One
/// state per chunk is returned in chunk order, so reductions over the result
/// are deterministic regardless of thread count.
pub(crate) fn visit_codewords<S, I, V>(code: &LinearCode, cap: usize, init: I, visit: V) -> Result<Vec<S>>
where
    S: Send,
    I: Fn() -> S + Sync,
    V: Fn(&mut S, &[u8], &[u8], usize) + Sync,
{
    check_cap(code, cap)?;
    let p = code.p() as u8;
    let k = code.dimension();
    let len = code.length();
    let rows: Vec<Vec<u8>> = code
        .basis()
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|v| v as u8).collect())
        .collect();

    // digits above `low` are fixed per chunk
    let mut top = 0;
    while top < k && usize::from(p).pow(top as u32) < 64 {
        top += 1;
    }
    let top = top.min(k.saturating_sub(1));
    let low = k - top;
    let chunks = usize::from(p).pow(top as u32);
    let steps = usize::from(p).pow(low as u32);

    Ok((0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut state = init();
            let mut coeffs = vec![0u8; k];
            let mut word = vec![0u8; len];
            let mut c = chunk;
            for i in low..k {
                let d = (c % usize::from(p)) as u8;
                c /= usize::from(p);
                coeffs[i] = d;
                for _ in 0..d {
                    add_row(&mut word, &rows[i], p);
                }
            }
            visit(&mut state, &coeffs, &word, weight_of(&word));
            for t in 1..steps {
                let mut d = 0;
                let mut tt = t;
                while tt % usize::from(p) == 0 {
                    tt /= usize::from(p);
                    d += 1;
                }
                add_row(&mut word, &rows[d], p);
                coeffs[d] = (coeffs[d] + 1) % p;
                visit(&mut state, &coeffs, &word, weight_of(&word));
            }
            state
        })
        .collect())
}

/// Exact weight distribution by full enumeration of `p^dim` codewords.
pub fn weight_enumerator(code: &LinearCode, cap: usize) -> Result<WeightEnumerator> {
    let len = code.length();
    let parts = visit_codewords(code, cap, || vec![0u64; len + 1], |hist, _, _, w| hist[w] += 1)?;
    let mut out = BTreeMap::new();
    for hist in parts {
        for (w, &n) in hist.iter().enumerate() {
            if n > 0 {
                *out.entry(w).or_insert(0) += n;
            }
        }
    }
    Ok(WeightEnumerator(out))
}

/// Codewords without zero coordinates, sorted lexicographically.
pub fn full_weight_words(code: &LinearCode, cap: usize) -> Result<Vec<Vec<u32>>> {
    let len = code.length();
    let parts = visit_codewords(code, cap, Vec::new, |acc: &mut Vec<Vec<u32>>, _, word, wt| {
        if wt == len {
            acc.push(word.iter().map(|&v| u32::from(v)).collect());
        }
    })?;
    let mut out: Vec<Vec<u32>> = parts.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

/// True when every full-weight word is a constant word.
pub fn full_weight_words_are_constant(words: &[Vec<u32>]) -> bool {
    words.iter().all(|w| w.iter().all(|&v| v == w[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::code_from_function;
    use crate::fmap::PolyMap;
    use crate::gf::{Elem, Field, FieldSpec};
    use crate::linalg::FpMatrix;

    #[test]
    fn hamming_code_distribution() {
        // [7,4] binary Hamming code: 1 + 7z^3 + 7z^4 + z^7
        let g = FpMatrix::from_rows(
            2,
            &[
                vec![1, 0, 0, 0, 0, 1, 1],
                vec![0, 1, 0, 0, 1, 0, 1],
                vec![0, 0, 1, 0, 1, 1, 0],
                vec![0, 0, 0, 1, 1, 1, 1],
            ],
        );
        let we = weight_enumerator(&LinearCode::new(g), 16).unwrap();
        assert_eq!(we.0, BTreeMap::from([(0, 1), (3, 7), (4, 7), (7, 1)]));
    }

    #[test]
    fn planar_code_over_f9() {
        let f = Field::new(FieldSpec::new(3, &[1, 0, 1]).unwrap());
        let c = code_from_function(&PolyMap::monomial(&f, Elem::ONE, 2));
        let we = weight_enumerator(&c, 16).unwrap();
        assert_eq!(we.total(), 3u64.pow(5));
        assert_eq!(we.count(0), 1);
        assert_eq!(we.count(9), 2);
        let full = full_weight_words(&c, 16).unwrap();
        assert_eq!(full, vec![vec![1; 9], vec![2; 9]]);
        assert!(full_weight_words_are_constant(&full));
    }

    #[test]
    fn cap_is_enforced() {
        let f = Field::new(FieldSpec::new(3, &[1, 0, 1]).unwrap());
        let c = code_from_function(&PolyMap::monomial(&f, Elem::ONE, 2));
        assert_eq!(
            weight_enumerator(&c, 4),
            Err(Error::DimensionCap { dim: 5, cap: 4 })
        );
    }

    #[test]
    fn non_planar_code_has_more_full_weight_words() {
        // the indicator of 0 gives the word 1 + Tr(b * delta_0) which is 2 at 0 and 1 elsewhere
        let f = Field::new(FieldSpec::new(3, &[1, 0, 1]).unwrap());
        let mut table = vec![Elem::ZERO; 9];
        table[0] = Elem::ONE;
        let c = code_from_function(&PolyMap::interpolate(&f, &table).unwrap());
        let full = full_weight_words(&c, 16).unwrap();
        assert!(!full_weight_words_are_constant(&full));
    }
}
