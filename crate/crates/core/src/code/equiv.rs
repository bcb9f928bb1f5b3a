//! Monomial equivalence of linear codes.
//!
//! The decision runs in three stages and records which one settled it:
//!
//! * invariants of the whole code (dimension, weight distribution, spans of
//!   weight classes, hull dimension, quotient profiles);
//! * the multiset of column signatures;
//! * a complete backtracking search over column matchings.
//!
//! The search fixes one column image at a time. Every fixed pair is fed to
//! two partial linear maps, one on the characteristic subcode and one on the
//! whole code, and any column whose vector falls in the span of the fixed
//! ones has its image forced. Candidate images are filtered by colours that
//! refine the column signatures with counts of stored low-weight codewords
//! vanishing on the fixed columns. Every step only discards matchings that
//! cannot extend to an equivalence, so exhausting the tree proves
//! inequivalence.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::echelon::{PairEchelon, PairStatus};
use super::invariants::{
    hull_dimension, hull_is_monomial_invariant, normalize_projective, AnalysisCaps, CodeAnalysis,
};
use super::{code_from_function, LinearCode};
use crate::error::{Error, Result};
use crate::fmap::PolyMap;
use crate::linalg::{inv_mod, FpMatrix};
use crate::planar::planarity_witness;

/// Resource limits for an equivalence query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchCaps {
    /// Search nodes (tentative column assignments) before giving up.
    pub max_nodes: u64,
    /// Wall-clock limit for the search stage, in seconds.
    pub timeout_secs: Option<f64>,
    pub analysis: AnalysisCaps,
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self {
            max_nodes: 2_000_000,
            timeout_secs: Some(600.0),
            analysis: AnalysisCaps::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Invariants,
    Refinement,
    Search,
}

/// Column `j` of the first code goes to column `column_permutation[j]` of the
/// second after multiplication by `column_scalings[j]`; `row_transform` maps
/// the transformed generator of the first code onto the generator of the
/// second.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub column_permutation: Vec<usize>,
    pub column_scalings: Vec<u32>,
    pub row_transform: Vec<Vec<u32>>,
}

impl Certificate {
    /// The generator of `code` with its columns moved and scaled.
    pub fn apply(&self, generator: &FpMatrix) -> FpMatrix {
        let p = generator.p();
        let mut out = FpMatrix::zeros(p, generator.rows(), generator.cols());
        for (j, (&t, &s)) in self
            .column_permutation
            .iter()
            .zip(&self.column_scalings)
            .enumerate()
        {
            for r in 0..generator.rows() {
                out.set(r, t, generator.get(r, j) * s % p);
            }
        }
        out
    }

    fn is_monomial(&self, p: u32, n: usize) -> bool {
        if self.column_permutation.len() != n || self.column_scalings.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &t in &self.column_permutation {
            if t >= n || std::mem::replace(&mut seen[t], true) {
                return false;
            }
        }
        self.column_scalings.iter().all(|&s| s % p != 0 && s < p)
    }

    /// Direct re-verification: the permuted and scaled generator of `c1`,
    /// multiplied by the row transform, equals the generator of `c2`, and
    /// both span the same space.
    pub fn verify(&self, c1: &LinearCode, c2: &LinearCode) -> bool {
        let (p, n) = (c1.p(), c1.length());
        if c2.p() != p || c2.length() != n || !self.is_monomial(p, n) {
            return false;
        }
        let moved = self.apply(c1.generator());
        let g2 = c2.generator();
        if self.row_transform.len() != g2.rows()
            || self
                .row_transform
                .iter()
                .any(|r| r.len() != moved.rows() || r.iter().any(|&v| v >= p))
        {
            return false;
        }
        let r = FpMatrix::from_rows(p, &self.row_transform);
        r.mul(&moved) == *g2 && moved.same_row_space(g2)
    }

    fn from_matching(c1: &LinearCode, c2: &LinearCode, perm: Vec<usize>, scal: Vec<u32>) -> Option<Self> {
        let mut cert = Self {
            column_permutation: perm,
            column_scalings: scal,
            row_transform: Vec::new(),
        };
        let moved = cert.apply(c1.generator());
        let mt = moved.transpose();
        let g2 = c2.generator();
        let mut rows = Vec::with_capacity(g2.rows());
        for i in 0..g2.rows() {
            rows.push(mt.solve(g2.row(i))?);
        }
        cert.row_transform = rows;
        cert.verify(c1, c2).then_some(cert)
    }
}

/// A named invariant with differing values on the two codes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub invariant: String,
    pub left: Value,
    pub right: Value,
}

impl Witness {
    /// Recomputes the invariant on both codes and checks that the stored
    /// values are reproduced and differ. Search witnesses are re-checked by
    /// running the complete search again.
    pub fn recompute(&self, c1: &LinearCode, c2: &LinearCode, caps: &SearchCaps) -> Result<bool> {
        if self.left == self.right {
            return Ok(false);
        }
        if self.invariant == "exhaustive_search" {
            return Ok(matches!(
                monomial_equivalent(c1, c2, caps)?,
                EquivalenceVerdict::Inequivalent { .. }
            ));
        }
        let (a1, a2) = rayon::join(
            || CodeAnalysis::new(c1, &caps.analysis),
            || CodeAnalysis::new(c2, &caps.analysis),
        );
        let (a1, a2) = (a1?, a2?);
        Ok(
            invariant_value(&a1, &a2, &self.invariant, true).as_ref() == Some(&self.left)
                && invariant_value(&a1, &a2, &self.invariant, false).as_ref() == Some(&self.right),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EquivalenceVerdict {
    Equivalent {
        stage: Stage,
        nodes: u64,
        certificate: Certificate,
    },
    Inequivalent {
        stage: Stage,
        nodes: u64,
        witness: Witness,
    },
    Unknown {
        stage: Stage,
        nodes: u64,
        exhausted_resource: String,
    },
}

impl EquivalenceVerdict {
    pub fn stage(&self) -> Stage {
        match self {
            Self::Equivalent { stage, .. }
            | Self::Inequivalent { stage, .. }
            | Self::Unknown { stage, .. } => *stage,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Equivalent { .. } => "equivalent",
            Self::Inequivalent { .. } => "inequivalent",
            Self::Unknown { .. } => "unknown",
        }
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, Self::Equivalent { .. })
    }

    pub fn is_inequivalent(&self) -> bool {
        matches!(self, Self::Inequivalent { .. })
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Self::Equivalent { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Self::Inequivalent { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// Whether every monomial map from `a1`'s code to `a2`'s code must use one
/// common scalar: the all-ones word is in the first code and the second code
/// has no non-constant full-weight word.
fn scalings_are_uniform(a1: &CodeAnalysis, a2: &CodeAnalysis) -> bool {
    a2.constants_only() && a1.code.contains(&vec![1; a1.code.length()])
}

const INVARIANT_ORDER: [&str; 4] = [
    "dimension",
    "weight_enumerator",
    "class_span_dimensions",
    "hull_dimension",
];

/// Value of a named invariant on the left or right code. Hull dimension is
/// only reported when it is an invariant for this pair.
fn invariant_value(a1: &CodeAnalysis, a2: &CodeAnalysis, name: &str, left: bool) -> Option<Value> {
    let a = if left { a1 } else { a2 };
    match name {
        "dimension" => Some(json!(a.code.dimension())),
        "weight_enumerator" => Some(json!(a.weights)),
        "class_span_dimensions" => Some(json!(a.class_span_dims)),
        "hull_dimension" => {
            let uniform = scalings_are_uniform(a1, a2) && scalings_are_uniform(a2, a1);
            (hull_is_monomial_invariant(&a1.code, uniform) && hull_is_monomial_invariant(&a2.code, uniform))
                .then(|| json!(hull_dimension(&a.code)))
        }
        "signature_multiset" => Some(json!(a.signature_multiset())),
        _ => {
            let rest = name.strip_prefix("quotient_profile:")?;
            let (w, d) = rest.split_once(':')?;
            let w: usize = w.strip_prefix("w=")?.parse().ok()?;
            let d: usize = d.strip_prefix("d=")?.parse().ok()?;
            let prof = a.quotient_profiles.iter().find(|q| q.weight == w && q.dim == d);
            Some(prof.map_or(Value::Null, |q| json!(q.histogram)))
        }
    }
}

fn differing(a1: &CodeAnalysis, a2: &CodeAnalysis, name: &str) -> Option<Witness> {
    let l = invariant_value(a1, a2, name, true)?;
    let r = invariant_value(a1, a2, name, false)?;
    (l != r).then(|| Witness {
        invariant: name.to_string(),
        left: l,
        right: r,
    })
}

/// First whole-code invariant on which the two analyses differ.
pub fn invariant_witness(a1: &CodeAnalysis, a2: &CodeAnalysis) -> Option<Witness> {
    for name in INVARIANT_ORDER {
        if let Some(w) = differing(a1, a2, name) {
            return Some(w);
        }
    }
    let mut keys: Vec<(usize, usize)> = a1
        .quotient_profiles
        .iter()
        .chain(&a2.quotient_profiles)
        .map(|q| (q.dim, q.weight))
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .find_map(|(d, w)| differing(a1, a2, &format!("quotient_profile:w={w}:d={d}")))
}

/// Decides monomial equivalence of two codes of the same length over the same
/// prime field.
pub fn monomial_equivalent(
    c1: &LinearCode,
    c2: &LinearCode,
    caps: &SearchCaps,
) -> Result<EquivalenceVerdict> {
    if c1.p() != c2.p() || c1.length() != c2.length() {
        return Err(Error::IncompatibleCodes(format!(
            "p={} length={} versus p={} length={}",
            c1.p(),
            c1.length(),
            c2.p(),
            c2.length()
        )));
    }
    if c1.dimension() != c2.dimension() {
        return Ok(EquivalenceVerdict::Inequivalent {
            stage: Stage::Invariants,
            nodes: 0,
            witness: Witness {
                invariant: "dimension".into(),
                left: json!(c1.dimension()),
                right: json!(c2.dimension()),
            },
        });
    }
    let cap = caps.analysis.dimension_cap;
    if c1.dimension() > cap {
        return Ok(EquivalenceVerdict::Unknown {
            stage: Stage::Invariants,
            nodes: 0,
            exhausted_resource: format!("dimension {} above cap {cap}", c1.dimension()),
        });
    }
    let (a1, a2) = rayon::join(
        || CodeAnalysis::new(c1, &caps.analysis),
        || CodeAnalysis::new(c2, &caps.analysis),
    );
    Ok(compare_analyses(&a1?, &a2?, caps))
}

/// The staged decision on two precomputed analyses.
pub fn compare_analyses(a1: &CodeAnalysis, a2: &CodeAnalysis, caps: &SearchCaps) -> EquivalenceVerdict {
    if let Some(witness) = invariant_witness(a1, a2) {
        return EquivalenceVerdict::Inequivalent {
            stage: Stage::Invariants,
            nodes: 0,
            witness,
        };
    }
    if let Some(witness) = differing(a1, a2, "signature_multiset") {
        return EquivalenceVerdict::Inequivalent {
            stage: Stage::Refinement,
            nodes: 0,
            witness,
        };
    }
    let mut search = Search::new(a1, a2, caps);
    let root = search.root();
    let outcome = search.run(root);
    let nodes = search.nodes;
    match outcome {
        Outcome::Found(certificate) => EquivalenceVerdict::Equivalent {
            stage: Stage::Search,
            nodes,
            certificate,
        },
        Outcome::Exhausted => EquivalenceVerdict::Inequivalent {
            stage: Stage::Search,
            nodes,
            witness: Witness {
                invariant: "exhaustive_search".into(),
                left: json!({ "nodes": nodes, "matchings_found": 0 }),
                right: Value::Null,
            },
        },
        Outcome::Cap(resource) => EquivalenceVerdict::Unknown {
            stage: Stage::Search,
            nodes,
            exhausted_resource: resource.into(),
        },
    }
}

/// CCZ equivalence of two planar functions through their codes. For planar
/// functions this coincides with EA equivalence, and for the diagonals of
/// commutative presemifields with strong isotopy.
pub fn ccz_equivalent_planar(f: &PolyMap, g: &PolyMap, caps: &SearchCaps) -> Result<EquivalenceVerdict> {
    Ok(ccz_equivalent_planar_detailed(f, g, caps)?.0)
}

/// As [`ccz_equivalent_planar`], also returning both code analyses.
pub fn ccz_equivalent_planar_detailed(
    f: &PolyMap,
    g: &PolyMap,
    caps: &SearchCaps,
) -> Result<(EquivalenceVerdict, CodeAnalysis, CodeAnalysis)> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch);
    }
    if planarity_witness(f).is_some() || planarity_witness(g).is_some() {
        return Err(Error::NotPlanar);
    }
    let (c1, c2) = (code_from_function(f), code_from_function(g));
    let (a1, a2) = rayon::join(
        || CodeAnalysis::new(&c1, &caps.analysis),
        || CodeAnalysis::new(&c2, &caps.analysis),
    );
    let (a1, a2) = (a1?, a2?);
    if !a1.constants_only() || !a2.constants_only() {
        return Err(Error::InvalidParameters(
            "a code of a planar function has a non-constant full-weight word".into(),
        ));
    }
    let verdict = compare_analyses(&a1, &a2, caps);
    Ok((verdict, a1, a2))
}

enum Outcome {
    Found(Certificate),
    Exhausted,
    Cap(&'static str),
}

#[derive(Clone)]
struct State {
    image: Vec<Option<(usize, u32)>>,
    used: Vec<bool>,
    fixed: usize,
    char_map: PairEchelon,
    code_map: PairEchelon,
    list1: Vec<u32>,
    list2: Vec<u32>,
    colour1: Vec<u64>,
    colour2: Vec<u64>,
    /// Fixed pairs not yet used to filter the word lists.
    pending: Vec<(usize, usize)>,
}

struct Search<'a> {
    a1: &'a CodeAnalysis,
    a2: &'a CodeAnalysis,
    p: u32,
    n: usize,
    scalars: Vec<u32>,
    char_lookup: HashMap<Vec<u32>, Vec<usize>>,
    code_lookup: HashMap<Vec<u32>, Vec<usize>>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
}

fn mix(h: u64, v: u64) -> u64 {
    let mut z = h ^ v
        .wrapping_add(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(h << 6)
        .wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn projective_lookup(columns: &[Vec<u32>], p: u32) -> HashMap<Vec<u32>, Vec<usize>> {
    let mut m: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    for (j, c) in columns.iter().enumerate() {
        let mut v = c.clone();
        normalize_projective(&mut v, p);
        m.entry(v).or_default().push(j);
    }
    m
}

fn scale(v: &[u32], s: u32, p: u32) -> Vec<u32> {
    v.iter().map(|&x| x * s % p).collect()
}

impl<'a> Search<'a> {
    fn new(a1: &'a CodeAnalysis, a2: &'a CodeAnalysis, caps: &SearchCaps) -> Self {
        let p = a1.code.p();
        let scalars = if scalings_are_uniform(a1, a2) {
            vec![1]
        } else {
            (1..p).collect()
        };
        Self {
            a1,
            a2,
            p,
            n: a1.code.length(),
            scalars,
            char_lookup: projective_lookup(&a2.char_columns, p),
            code_lookup: projective_lookup(&a2.code_columns, p),
            nodes: 0,
            max_nodes: caps.max_nodes,
            deadline: caps
                .timeout_secs
                .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
        }
    }

    fn root(&self) -> State {
        let colour = |a: &CodeAnalysis| -> Vec<u64> {
            a.signatures
                .iter()
                .map(|s| s.iter().fold(0x5eed, |h, &v| mix(h, v)))
                .collect()
        };
        let dim_char = self.a1.characteristic_dim;
        let k = self.a1.code.dimension();
        State {
            image: vec![None; self.n],
            used: vec![false; self.n],
            fixed: 0,
            char_map: PairEchelon::new(self.p, dim_char, dim_char),
            code_map: PairEchelon::new(self.p, k, k),
            list1: (0..self.a1.zero_sets.len() as u32).collect(),
            list2: (0..self.a2.zero_sets.len() as u32).collect(),
            colour1: colour(self.a1),
            colour2: colour(self.a2),
            pending: Vec::new(),
        }
    }

    /// Fixes `x -> (y, s)` and everything it forces. False on contradiction.
    fn assign(&self, st: &mut State, x: usize, y: usize, s: u32) -> bool {
        let mut queue = vec![(x, y, s)];
        while !queue.is_empty() {
            while let Some((x, y, s)) = queue.pop() {
                match st.image[x] {
                    Some(prev) if prev == (y, s) => continue,
                    Some(_) => return false,
                    None => {}
                }
                if st.used[y] || st.colour1[x] != st.colour2[y] {
                    return false;
                }
                let c1 = &self.a1.char_columns[x];
                let c2 = scale(&self.a2.char_columns[y], s, self.p);
                if st.char_map.insert(c1, &c2) == PairStatus::Inconsistent {
                    return false;
                }
                let g2 = scale(&self.a2.code_columns[y], s, self.p);
                if st.code_map.insert(&self.a1.code_columns[x], &g2) == PairStatus::Inconsistent {
                    return false;
                }
                st.image[x] = Some((y, s));
                st.used[y] = true;
                st.fixed += 1;
                st.pending.push((x, y));
            }
            for z in 0..self.n {
                if st.image[z].is_some() {
                    continue;
                }
                let forced = self
                    .forced_image(
                        &st.char_map,
                        &self.a1.char_columns[z],
                        &self.char_lookup,
                        &self.a2.char_columns,
                    )
                    .or_else(|| {
                        self.forced_image(
                            &st.code_map,
                            &self.a1.code_columns[z],
                            &self.code_lookup,
                            &self.a2.code_columns,
                        )
                    });
                match forced {
                    Some(Some((y, s))) => queue.push((z, y, s)),
                    Some(None) => return false,
                    None => {}
                }
            }
        }
        true
    }

    /// `None` if nothing is forced, `Some(None)` if the forced image does not
    /// exist, `Some(Some((y, s)))` for a forced pair.
    fn forced_image(
        &self,
        map: &PairEchelon,
        left: &[u32],
        lookup: &HashMap<Vec<u32>, Vec<usize>>,
        columns2: &[Vec<u32>],
    ) -> Option<Option<(usize, u32)>> {
        if map.rank() == 0 {
            return None;
        }
        let target = map.image_of(left)?;
        let mut key = target.clone();
        if !normalize_projective(&mut key, self.p) {
            // zero vector: only useful when a single column is zero
            return None;
        }
        let cols = match lookup.get(&key) {
            None => return Some(None),
            Some(c) if c.len() > 1 => return None,
            Some(c) => c,
        };
        let y = cols[0];
        let column = &columns2[y];
        let lead = column.iter().position(|&v| v != 0).expect("nonzero column");
        let s = target[lead] * inv_mod(column[lead], self.p) % self.p;
        if !self.scalars.contains(&s) {
            return Some(None);
        }
        Some(Some((y, s)))
    }

    /// Filters the word lists by the newly fixed columns and refines colours.
    fn refine(&self, st: &mut State) -> bool {
        if st.pending.is_empty() {
            return true;
        }
        let wps = self.a1.zero_sets.words_per_set;
        let mut mask1 = vec![0u64; wps];
        let mut mask2 = vec![0u64; wps];
        for &(x, y) in &st.pending {
            mask1[x / 64] |= 1 << (x % 64);
            mask2[y / 64] |= 1 << (y % 64);
        }
        st.pending.clear();
        let keep = |zs: &super::invariants::ZeroSets, mask: &[u64], list: &mut Vec<u32>| {
            list.retain(|&i| zs.set(i as usize).iter().zip(mask).all(|(a, m)| a & m == *m));
        };
        keep(&self.a1.zero_sets, &mask1, &mut st.list1);
        keep(&self.a2.zero_sets, &mask2, &mut st.list2);
        if st.list1.len() != st.list2.len() {
            return false;
        }
        let counts1 = self.counts(&self.a1.zero_sets, &st.list1);
        let counts2 = self.counts(&self.a2.zero_sets, &st.list2);
        let nc = self.a1.zero_sets.classes.len().max(1);
        for j in 0..self.n {
            let mut h1 = st.colour1[j];
            let mut h2 = st.colour2[j];
            for c in 0..nc {
                h1 = mix(h1, u64::from(counts1[c * self.n + j]));
                h2 = mix(h2, u64::from(counts2[c * self.n + j]));
            }
            st.colour1[j] = h1;
            st.colour2[j] = h2;
        }
        for x in 0..self.n {
            if let Some((y, _)) = st.image[x] {
                if st.colour1[x] != st.colour2[y] {
                    return false;
                }
            }
        }
        let mut m1: Vec<u64> = st.colour1.clone();
        let mut m2: Vec<u64> = st.colour2.clone();
        m1.sort_unstable();
        m2.sort_unstable();
        m1 == m2
    }

    fn counts(&self, zs: &super::invariants::ZeroSets, list: &[u32]) -> Vec<u32> {
        let nc = zs.classes.len().max(1);
        let mut counts = vec![0u32; nc * self.n];
        for &i in list {
            let base = usize::from(zs.class_of[i as usize]) * self.n;
            for (wi, &word) in zs.set(i as usize).iter().enumerate() {
                let mut b = word;
                while b != 0 {
                    let t = b.trailing_zeros() as usize;
                    counts[base + wi * 64 + t] += 1;
                    b &= b - 1;
                }
            }
        }
        counts
    }

    fn over_budget(&mut self) -> Option<&'static str> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Some("max_nodes");
        }
        if self.nodes.is_multiple_of(64) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Some("timeout");
                }
            }
        }
        None
    }

    fn run(&mut self, mut st: State) -> Outcome {
        if !self.refine(&mut st) {
            return Outcome::Exhausted;
        }
        if st.fixed == self.n {
            let perm = st.image.iter().map(|i| i.expect("all fixed").0).collect();
            let scal = st.image.iter().map(|i| i.expect("all fixed").1).collect();
            return match Certificate::from_matching(&self.a1.code, &self.a2.code, perm, scal) {
                Some(c) => Outcome::Found(c),
                None => Outcome::Exhausted,
            };
        }
        // branch on an unfixed column from the smallest colour cell
        let mut cell: BTreeMap<u64, usize> = BTreeMap::new();
        for x in 0..self.n {
            if st.image[x].is_none() {
                *cell.entry(st.colour1[x]).or_default() += 1;
            }
        }
        let x = (0..self.n)
            .filter(|&x| st.image[x].is_none())
            .min_by_key(|&x| (cell[&st.colour1[x]], x))
            .expect("an unfixed column exists");
        let candidates: Vec<usize> = (0..self.n)
            .filter(|&y| !st.used[y] && st.colour2[y] == st.colour1[x])
            .collect();
        let scalars = self.scalars.clone();
        for y in candidates {
            for &s in &scalars {
                if let Some(r) = self.over_budget() {
                    return Outcome::Cap(r);
                }
                let mut child = st.clone();
                if !self.assign(&mut child, x, y, s) {
                    continue;
                }
                match self.run(child) {
                    Outcome::Exhausted => {}
                    other => return other,
                }
            }
        }
        Outcome::Exhausted
    }
}
