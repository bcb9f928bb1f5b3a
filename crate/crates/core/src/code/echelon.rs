//! Small incremental echelon forms over F_p used by the analysis pass and the
//! equivalence search.

use crate::linalg::inv_mod;

/// Row echelon basis that grows one vector at a time. Rows are stored with
/// pivot entry 1 and are zero at the pivots of all earlier rows, so a single
/// sweep in insertion order reduces any vector.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    p: u32,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u32) -> Self {
        Self {
            p,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` in place against the stored rows.
    pub fn reduce(&self, v: &mut [u32]) {
        let p = self.p;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                let f = p - c;
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = (*a + f * b) % p;
                }
            }
        }
    }

    /// Adds `v` if it is independent; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[pc], self.p);
        for a in w.iter_mut() {
            *a = *a * inv % self.p;
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }
}

/// Echelon form of paired vectors `[left | right]` with pivots taken in the
/// left half only. It records a partial linear map `left_i -> right_i` and
/// tells whether that map extends to an injective linear map.
#[derive(Clone, Debug)]
pub(crate) struct PairEchelon {
    p: u32,
    split: usize,
    width: usize,
    joint: Echelon,
    right: Echelon,
}

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum PairStatus {
    /// The pair is new information and consistent.
    Extended,
    /// The pair was already implied.
    Implied,
    Inconsistent,
}

impl PairEchelon {
    pub fn new(p: u32, left_dim: usize, right_dim: usize) -> Self {
        Self {
            p,
            split: left_dim,
            width: left_dim + right_dim,
            joint: Echelon::new(p),
            right: Echelon::new(p),
        }
    }

    pub fn rank(&self) -> usize {
        self.joint.rank()
    }

    pub fn insert(&mut self, left: &[u32], right: &[u32]) -> PairStatus {
        let mut v: Vec<u32> = left.iter().chain(right).copied().collect();
        self.reduce_left(&mut v);
        let left_zero = v[..self.split].iter().all(|&x| x == 0);
        if left_zero {
            return if v[self.split..].iter().all(|&x| x == 0) {
                PairStatus::Implied
            } else {
                PairStatus::Inconsistent
            };
        }
        if !self.right.insert(right) {
            return PairStatus::Inconsistent;
        }
        let pc = v.iter().position(|&x| x != 0).expect("left part is nonzero");
        let inv = inv_mod(v[pc], self.p);
        for a in v.iter_mut() {
            *a = *a * inv % self.p;
        }
        self.joint.rows.push(v);
        self.joint.pivots.push(pc);
        PairStatus::Extended
    }

    fn reduce_left(&self, v: &mut [u32]) {
        self.joint.reduce(v);
    }

    /// If `left` lies in the span of the recorded left vectors, the image it
    /// is forced to under the recorded map.
    pub fn image_of(&self, left: &[u32]) -> Option<Vec<u32>> {
        let mut v = left.to_vec();
        v.resize(self.width, 0);
        self.reduce_left(&mut v);
        if v[..self.split].iter().any(|&x| x != 0) {
            return None;
        }
        Some(v[self.split..].iter().map(|&x| (self.p - x) % self.p).collect())
    }
}
