//! Invariants of linear codes under monomial equivalence.
//!
//! Everything here is computed from weights alone, so a monomial map between
//! two codes carries each quantity of the first code onto the same quantity
//! of the second. The analysis runs two enumeration passes:
//!
//! 1. weight distribution, the span of every weight class and the full-weight
//!    words;
//! 2. per-column shortened weight distributions, zero sets of the words used
//!    by the search, and the image of each weight class in the quotient by the
//!    characteristic subcode.
//!
//! The characteristic subcode `D` is the sum of all weight-class spans that are
//! proper subcodes. For codes of planar functions this is the subcode of
//! affine functions, and the quotient `C/D` is the space of quadratic parts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::echelon::Echelon;
use super::enumerate::{check_cap, visit_codewords};
use super::{LinearCode, WeightEnumerator};
use crate::error::Result;
use crate::linalg::FpMatrix;

/// Limits for the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisCaps {
    pub dimension_cap: usize,
    /// Upper bound on the number of zero sets kept for the search.
    pub word_cap: usize,
    /// Subspaces of the quotient are enumerated up to this dimension.
    pub max_profile_dimension: usize,
    /// Profiles with more subspaces than this are skipped.
    pub max_profile_subspaces: u64,
}

impl Default for AnalysisCaps {
    fn default() -> Self {
        Self {
            dimension_cap: super::DEFAULT_DIMENSION_CAP,
            word_cap: 400_000,
            max_profile_dimension: 3,
            max_profile_subspaces: 200_000,
        }
    }
}

/// Distribution of `|S ∩ U|` over all `dim`-dimensional subspaces `U` of the
/// quotient `C/D`, where `S` is the image of the codewords of one weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientProfile {
    pub weight: usize,
    pub dim: usize,
    pub histogram: BTreeMap<usize, u64>,
}

/// Zero sets of selected codewords, one bitset per projective codeword.
#[derive(Debug, Clone)]
pub(crate) struct ZeroSets {
    pub words_per_set: usize,
    pub bits: Vec<u64>,
    pub class_of: Vec<u8>,
    pub classes: Vec<usize>,
}

impl ZeroSets {
    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn set(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_set..(i + 1) * self.words_per_set]
    }
}

#[derive(Debug, Clone)]
pub struct CodeAnalysis {
    pub code: LinearCode,
    pub weights: WeightEnumerator,
    pub full_weight_words: Vec<Vec<u32>>,
    /// Dimension of the span of each nonzero weight class.
    pub class_span_dims: BTreeMap<usize, usize>,
    pub characteristic_dim: usize,
    /// Nonzero weights below the length, in increasing order; the index of a
    /// weight here is its position in a column signature.
    pub signature_weights: Vec<usize>,
    /// Per column: number of codewords of each signature weight vanishing there.
    pub signatures: Vec<Vec<u64>>,
    pub quotient_profiles: Vec<QuotientProfile>,
    /// Columns of the characteristic subcode's basis, one vector per column.
    pub(crate) char_columns: Vec<Vec<u32>>,
    /// Columns of the code's reduced basis.
    pub(crate) code_columns: Vec<Vec<u32>>,
    pub(crate) zero_sets: ZeroSets,
}

/// Scales `v` so its first nonzero entry is 1; false for the zero vector.
pub(crate) fn normalize_projective(v: &mut [u32], p: u32) -> bool {
    match v.iter().find(|&&x| x != 0) {
        Some(&lead) if lead != 1 => {
            let inv = crate::linalg::inv_mod(lead, p);
            for a in v.iter_mut() {
                *a = *a * inv % p;
            }
            true
        }
        Some(_) => true,
        None => false,
    }
}

fn columns_of(m: &FpMatrix) -> Vec<Vec<u32>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

/// Hull dimension `dim(C ∩ C^⊥)`.
pub fn hull_dimension(code: &LinearCode) -> usize {
    let b = code.basis();
    code.dimension() - b.mul(&b.transpose()).rank()
}

/// Whether the hull dimension is preserved by monomial maps between codes
/// like `code`. Scalings by `c` change inner products by `c^2`, which is
/// harmless for `p <= 3` or when all scalings are forced to be equal.
pub(crate) fn hull_is_monomial_invariant(code: &LinearCode, constants_only: bool) -> bool {
    code.p() <= 3 || (constants_only && code.contains(&vec![1; code.length()]))
}

/// Per-column signatures: for column `j` and each nonzero weight `w` below the
/// length, the number of codewords of weight `w` that vanish at `j`.
pub fn coordinate_signatures(code: &LinearCode, cap: usize) -> Result<Vec<Vec<u64>>> {
    let caps = AnalysisCaps {
        dimension_cap: cap,
        word_cap: 0,
        max_profile_dimension: 0,
        ..AnalysisCaps::default()
    };
    Ok(CodeAnalysis::new(code, &caps)?.signatures)
}

impl CodeAnalysis {
    pub fn new(code: &LinearCode, caps: &AnalysisCaps) -> Result<Self> {
        check_cap(code, caps.dimension_cap)?;
        let p = code.p();
        let n = code.length();
        let k = code.dimension();

        // pass 1
        struct First {
            hist: Vec<u64>,
            spans: BTreeMap<usize, Echelon>,
            full: Vec<Vec<u32>>,
        }
        let parts = visit_codewords(
            code,
            caps.dimension_cap,
            || First {
                hist: vec![0; n + 1],
                spans: BTreeMap::new(),
                full: Vec::new(),
            },
            |st, coeffs, word, w| {
                st.hist[w] += 1;
                if w == 0 {
                    return;
                }
                let e = st.spans.entry(w).or_insert_with(|| Echelon::new(p));
                if e.rank() < k {
                    let c: Vec<u32> = coeffs.iter().map(|&x| u32::from(x)).collect();
                    e.insert(&c);
                }
                if w == n {
                    st.full.push(word.iter().map(|&x| u32::from(x)).collect());
                }
            },
        )?;
        let mut hist = vec![0u64; n + 1];
        let mut spans: BTreeMap<usize, Echelon> = BTreeMap::new();
        let mut full_weight_words = Vec::new();
        for part in parts {
            for (w, c) in part.hist.iter().enumerate() {
                hist[w] += c;
            }
            for (w, e) in part.spans {
                let target = spans.entry(w).or_insert_with(|| Echelon::new(p));
                for r in e.rows() {
                    if target.rank() < k {
                        target.insert(r);
                    }
                }
            }
            full_weight_words.extend(part.full);
        }
        full_weight_words.sort();
        let weights = WeightEnumerator(
            hist.iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(w, &c)| (w, c))
                .collect(),
        );
        let class_span_dims: BTreeMap<usize, usize> = spans.iter().map(|(&w, e)| (w, e.rank())).collect();

        // characteristic subcode, in coefficient coordinates
        let mut char_coef = Echelon::new(p);
        for e in spans.values().filter(|e| e.rank() < k) {
            for r in e.rows() {
                char_coef.insert(r);
            }
        }
        let characteristic_dim = char_coef.rank();
        let char_basis = if characteristic_dim == 0 {
            FpMatrix::zeros(p, 0, n)
        } else {
            let coef = FpMatrix::from_rows(p, char_coef.rows());
            coef.mul(code.basis()).row_space_basis()
        };
        let char_pivots: Vec<usize> = char_coef.pivots().to_vec();
        let quotient_coords: Vec<usize> = (0..k).filter(|c| !char_pivots.contains(c)).collect();
        let m = quotient_coords.len();

        let signature_weights: Vec<usize> = weights.0.keys().copied().filter(|&w| w > 0 && w < n).collect();
        let class_index: Vec<u8> = {
            let mut v = vec![u8::MAX; n + 1];
            for (i, &w) in signature_weights.iter().enumerate() {
                v[w] = i as u8;
            }
            v
        };
        let nclasses = signature_weights.len();

        // classes kept for the search, smallest first within the word budget
        let mut by_count: Vec<(u64, usize)> = signature_weights
            .iter()
            .map(|&w| (weights.count(w) / u64::from(p - 1), w))
            .collect();
        by_count.sort();
        let mut kept = vec![false; n + 1];
        let mut budget = caps.word_cap as u64;
        let mut search_classes = Vec::new();
        for (c, w) in by_count {
            if c > budget {
                break;
            }
            budget -= c;
            kept[w] = true;
            search_classes.push(w);
        }
        search_classes.sort();
        let search_index: Vec<u8> = {
            let mut v = vec![u8::MAX; n + 1];
            for (i, &w) in search_classes.iter().enumerate() {
                v[w] = i as u8;
            }
            v
        };
        let words_per_set = n.div_ceil(64);
        let quotient_size = if m <= 20 { (p as usize).pow(m as u32) } else { 0 };
        let profile_classes: Vec<usize> = signature_weights
            .iter()
            .copied()
            .filter(|&w| spans[&w].rank() == k)
            .collect();
        let want_profiles =
            caps.max_profile_dimension > 0 && m >= 2 && quotient_size > 0 && quotient_size <= 1 << 20;

        // pass 2
        struct Second {
            sig: Vec<u32>,
            bits: Vec<u64>,
            class_of: Vec<u8>,
            quotient: Vec<Vec<bool>>,
        }
        // quotient image of each basis vector
        let basis_images: Vec<Vec<u32>> = (0..k)
            .map(|i| {
                let mut e = vec![0u32; k];
                e[i] = 1;
                char_coef.reduce(&mut e);
                quotient_coords.iter().map(|&qc| e[qc]).collect()
            })
            .collect();
        let parts = visit_codewords(
            code,
            caps.dimension_cap,
            || Second {
                sig: vec![0; nclasses * n],
                bits: Vec::new(),
                class_of: Vec::new(),
                quotient: if want_profiles {
                    vec![vec![false; quotient_size]; nclasses]
                } else {
                    Vec::new()
                },
            },
            |st, coeffs, word, w| {
                let ci = class_index[w];
                if ci == u8::MAX {
                    return;
                }
                let row = &mut st.sig[usize::from(ci) * n..(usize::from(ci) + 1) * n];
                for (s, &x) in row.iter_mut().zip(word) {
                    *s += u32::from(x == 0);
                }
                // one representative per projective point
                let lead = coeffs.iter().find(|&&x| x != 0).copied().unwrap_or(0);
                if lead != 1 {
                    return;
                }
                if kept[w] {
                    for chunk in word.chunks(64) {
                        let mask = chunk
                            .iter()
                            .enumerate()
                            .fold(0u64, |m, (b, &x)| m | (u64::from(x == 0) << b));
                        st.bits.push(mask);
                    }
                    st.class_of.push(search_index[w]);
                }
                if want_profiles && profile_classes.contains(&w) {
                    let mut acc = [0u32; 20];
                    for (&c, img) in coeffs.iter().zip(&basis_images) {
                        if c != 0 {
                            for (a, &v) in acc.iter_mut().zip(img) {
                                *a += u32::from(c) * v;
                            }
                        }
                    }
                    let idx = acc[..m]
                        .iter()
                        .rev()
                        .fold(0usize, |i, &d| i * p as usize + (d % p) as usize);
                    st.quotient[usize::from(ci)][idx] = true;
                }
            },
        )?;
        let mut sig = vec![0u64; nclasses * n];
        let mut bits = Vec::new();
        let mut class_of = Vec::new();
        let mut quotient: Vec<Vec<bool>> =
            vec![vec![false; if want_profiles { quotient_size } else { 0 }]; nclasses];
        for part in parts {
            for (a, &b) in sig.iter_mut().zip(&part.sig) {
                *a += u64::from(b);
            }
            bits.extend(part.bits);
            class_of.extend(part.class_of);
            for (qa, qb) in quotient.iter_mut().zip(&part.quotient) {
                for (a, &b) in qa.iter_mut().zip(qb) {
                    *a |= b;
                }
            }
        }
        let signatures: Vec<Vec<u64>> = (0..n)
            .map(|j| (0..nclasses).map(|c| sig[c * n + j]).collect())
            .collect();

        let mut quotient_profiles = Vec::new();
        if want_profiles {
            for (ci, &w) in signature_weights.iter().enumerate() {
                if !profile_classes.contains(&w) {
                    continue;
                }
                // scalar multiples are added so the set is closed under F_p^*
                let set = close_under_scalars(&quotient[ci], p, m);
                for d in 1..=caps.max_profile_dimension.min(m - 1) {
                    if let Some(histogram) = subspace_profile(&set, p, m, d, caps.max_profile_subspaces) {
                        quotient_profiles.push(QuotientProfile {
                            weight: w,
                            dim: d,
                            histogram,
                        });
                    }
                }
            }
        }

        Ok(Self {
            code: code.clone(),
            weights,
            full_weight_words,
            class_span_dims,
            characteristic_dim,
            signature_weights,
            signatures,
            quotient_profiles,
            char_columns: columns_of(&char_basis),
            code_columns: columns_of(code.basis()),
            zero_sets: ZeroSets {
                words_per_set,
                bits,
                class_of,
                classes: search_classes,
            },
        })
    }

    pub fn constants_only(&self) -> bool {
        super::full_weight_words_are_constant(&self.full_weight_words)
    }

    /// Multiset of column signatures, sorted.
    pub fn signature_multiset(&self) -> Vec<(Vec<u64>, usize)> {
        let mut m: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        for s in &self.signatures {
            *m.entry(s.clone()).or_default() += 1;
        }
        m.into_iter().collect()
    }
}

fn digits(mut idx: usize, p: u32, m: usize) -> Vec<u32> {
    let mut v = vec![0; m];
    for d in v.iter_mut() {
        *d = (idx % p as usize) as u32;
        idx /= p as usize;
    }
    v
}

fn index_of(v: &[u32], p: u32) -> usize {
    v.iter().rev().fold(0, |acc, &d| acc * p as usize + d as usize)
}

fn close_under_scalars(set: &[bool], p: u32, m: usize) -> Vec<bool> {
    let mut out = set.to_vec();
    for (idx, &present) in set.iter().enumerate() {
        if !present {
            continue;
        }
        let v = digits(idx, p, m);
        for s in 2..p {
            let w: Vec<u32> = v.iter().map(|&x| x * s % p).collect();
            out[index_of(&w, p)] = true;
        }
    }
    out
}

/// Digitwise sum of two vectors of F_p^m given by their base-p indices.
fn add_indices(mut a: usize, mut b: usize, p: usize, m: usize) -> usize {
    let (mut out, mut place) = (0, 1);
    for _ in 0..m {
        out += (a % p + b % p) % p * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Number of `d`-dimensional subspaces of F_p^m.
pub(crate) fn gaussian_binomial(p: u64, m: usize, d: usize) -> Option<u64> {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num = num.checked_mul(u128::from(p).checked_pow((m - i) as u32)? - 1)?;
        den = den.checked_mul(u128::from(p).checked_pow((i + 1) as u32)? - 1)?;
    }
    u64::try_from(num / den).ok()
}

/// Histogram of `|set ∩ U \ {0}|` over the `d`-dimensional subspaces `U`,
/// enumerated through their reduced echelon bases.
fn subspace_profile(set: &[bool], p: u32, m: usize, d: usize, max: u64) -> Option<BTreeMap<usize, u64>> {
    if gaussian_binomial(u64::from(p), m, d)? > max {
        return None;
    }
    let mut hist = BTreeMap::new();
    let mut pivots: Vec<usize> = (0..d).collect();
    let combos = (p as usize).pow(d as u32);
    loop {
        // free positions: (row i, column c) with c > pivots[i] and c not a pivot
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| {
                let pv = &pivots;
                (pv[i] + 1..m)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let assignments = (p as usize).pow(free.len() as u32);
        let mut basis = vec![vec![0u32; m]; d];
        let mut span: Vec<usize> = Vec::with_capacity(combos);
        for a in 0..assignments {
            for (i, row) in basis.iter_mut().enumerate() {
                row.iter_mut().for_each(|x| *x = 0);
                row[pivots[i]] = 1;
            }
            let mut t = a;
            for &(i, c) in &free {
                basis[i][c] = (t % p as usize) as u32;
                t /= p as usize;
            }
            span.clear();
            span.push(0);
            for row in &basis {
                let len = span.len();
                for s in 1..p {
                    let sb = index_of(&row.iter().map(|&x| x * s % p).collect::<Vec<_>>(), p);
                    for i in 0..len {
                        span.push(add_indices(span[i], sb, p as usize, m));
                    }
                }
            }
            let count = span[1..].iter().filter(|&&v| set[v]).count();
            *hist.entry(count).or_insert(0) += 1;
        }
        // next pivot set in lexicographic order
        let mut i = d;
        loop {
            if i == 0 {
                return Some(hist);
            }
            i -= 1;
            if pivots[i] < m - d + i {
                pivots[i] += 1;
                for j in i + 1..d {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}
