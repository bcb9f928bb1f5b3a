//! Linear codes `C_f` generated by the rows `[1; x; f(x)]` and a monomial
//! equivalence engine for them.

mod echelon;
mod enumerate;
pub mod equiv;
pub mod invariants;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmap::PolyMap;
use crate::linalg::FpMatrix;

pub use enumerate::{
    full_weight_words, full_weight_words_are_constant, weight_enumerator, WeightEnumerator,
    DEFAULT_DIMENSION_CAP,
};
pub use equiv::{
    ccz_equivalent_planar, ccz_equivalent_planar_detailed, compare_analyses, invariant_witness,
    monomial_equivalent, Certificate, EquivalenceVerdict, SearchCaps, Stage, Witness,
};
pub use invariants::{coordinate_signatures, hull_dimension, AnalysisCaps, CodeAnalysis, QuotientProfile};

/// A linear code over F_p given by a generator matrix (rows need not be
/// independent) together with a reduced basis of its row space.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: FpMatrix,
    basis: FpMatrix,
}

impl std::fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "LinearCode(p={}, length={}, dim={})",
            self.p(),
            self.length(),
            self.dimension()
        )
    }
}

impl LinearCode {
    pub fn new(generator: FpMatrix) -> Self {
        let basis = generator.row_space_basis();
        Self { generator, basis }
    }

    pub fn p(&self) -> u32 {
        self.generator.p()
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn generator(&self) -> &FpMatrix {
        &self.generator
    }

    /// Reduced row echelon basis (k x length).
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.rows()
    }

    /// Membership test for a word of the ambient space.
    pub fn contains(&self, word: &[u32]) -> bool {
        if word.len() != self.length() {
            return false;
        }
        let mut rows = self.basis.to_rows();
        rows.push(word.to_vec());
        FpMatrix::from_rows(self.p(), &rows).rank() == self.dimension()
    }

    pub fn to_json(&self) -> CodeJson {
        CodeJson {
            p: self.p(),
            length: self.length(),
            dimension: self.dimension(),
            generator: self
                .generator
                .to_rows()
                .iter()
                .map(|r| digits_string(r))
                .collect(),
        }
    }

    pub fn from_json(j: &CodeJson) -> Result<Self> {
        let rows: Vec<Vec<u32>> = j
            .generator
            .iter()
            .map(|s| parse_digit_string(s, j.p))
            .collect::<Result<_>>()?;
        if rows.iter().any(|r| r.len() != j.length) {
            return Err(Error::InvalidParameters("generator row length mismatch".into()));
        }
        let code = Self::new(FpMatrix::from_rows(j.p, &rows));
        if code.dimension() != j.dimension {
            return Err(Error::InvalidParameters(format!(
                "declared dimension {} but generator has rank {}",
                j.dimension,
                code.dimension()
            )));
        }
        Ok(code)
    }
}

fn digits_string(r: &[u32]) -> String {
    if r.iter().all(|&v| v < 10) {
        r.iter().map(|&v| char::from(b'0' + v as u8)).collect()
    } else {
        r.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

fn parse_digit_string(s: &str, p: u32) -> Result<Vec<u32>> {
    let vals: Vec<u32> = if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                pos: 0,
                msg: e.to_string(),
            })?
    } else {
        s.chars()
            .enumerate()
            .map(|(i, c)| {
                c.to_digit(10).ok_or_else(|| Error::Parse {
                    pos: i,
                    msg: format!("bad digit {c:?}"),
                })
            })
            .collect::<Result<_>>()?
    };
    if let Some(v) = vals.iter().find(|&&v| v >= p) {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("symbol {v} is not below p = {p}"),
        });
    }
    Ok(vals)
}

/// JSON form: generator rows as digit strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub p: u32,
    pub length: usize,
    pub dimension: usize,
    pub generator: Vec<String>,
}

/// The code spanned by `[1; x; f(x)]`, columns indexed by field elements
/// in index order `0, 1, 2, ξ, 1+ξ, ...`.
pub fn code_from_function(f: &PolyMap) -> LinearCode {
    let field = f.field();
    let n = field.degree();
    let q = field.order();
    let table = f.table();
    let mut g = FpMatrix::zeros(field.p(), 2 * n + 1, q);
    for x in field.elements() {
        let j = x.index();
        g.set(0, j, 1);
        for (i, c) in field.coeffs(x).into_iter().enumerate() {
            g.set(1 + i, j, c);
        }
        for (i, c) in field.coeffs(table[j]).into_iter().enumerate() {
            g.set(1 + n + i, j, c);
        }
    }
    LinearCode::new(g)
}
