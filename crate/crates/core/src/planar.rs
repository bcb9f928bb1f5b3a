//! Planarity certificates, the LMPTB family, EA transforms and quadratic
//! form rank profiles.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmap::PolyMap;
use crate::gf::{Elem, Field};
use crate::linalg::FpMatrix;

/// A direction `a` whose difference map `x -> f(x+a) - f(x)` misses `missing`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanarityWitness {
    pub direction: Elem,
    pub missing: Elem,
}

/// First direction (in index order) whose difference map is not a bijection.
pub fn planarity_witness(f: &PolyMap) -> Option<PlanarityWitness> {
    let field = f.field();
    let table = f.table();
    planarity_witness_table(field, &table)
}

pub(crate) fn planarity_witness_table(field: &Field, table: &[Elem]) -> Option<PlanarityWitness> {
    let q = field.order();
    (1..q as u32).into_par_iter().map(Elem).find_map_first(|a| {
        let mut hit = vec![false; q];
        for x in field.elements() {
            let d = field.sub(table[field.add(x, a).index()], table[x.index()]);
            hit[d.index()] = true;
        }
        hit.iter().position(|h| !h).map(|m| PlanarityWitness {
            direction: a,
            missing: Elem(m as u32),
        })
    })
}

/// Every difference map `x -> f(x+a) - f(x)`, `a != 0`, is a bijection.
pub fn is_planar_bruteforce(f: &PolyMap) -> bool {
    planarity_witness(f).is_none()
}

/// Signed exponents of `h(x) = sum_{i=0}^k (-1)^i x^(q^(2i)) + sum_{j=0}^{k-1} (-1)^(k+j) x^(q^(2j+1))`,
/// as pairs `(t, ±1)` meaning `± x^(q^t)`.
pub fn lmptb_h_terms(k: usize) -> Vec<(usize, i64)> {
    let sign = |e: usize| if e.is_multiple_of(2) { 1 } else { -1 };
    let mut out: Vec<(usize, i64)> = (0..=k).map(|i| (2 * i, sign(i))).collect();
    out.extend((0..k).map(|j| (2 * j + 1, sign(k + j))));
    out.sort();
    out
}

fn lmptb_symbolic(field: &Field, q: u64, m: usize) -> PolyMap {
    let k = (m - 1) / 2;
    let qm = q.pow(m as u32);
    let e = q * q + 1;
    let mut terms: Vec<(u64, i64)> = vec![(2, 1), (2 * qm, 1)];
    // G(y) = h(y - y^(q^m)) with y = x^(q^2+1)
    for (t, s) in lmptb_h_terms(k) {
        let qt = q.pow(t as u32);
        terms.push((e * qt, s));
        terms.push((e * qt * qm, -s));
    }
    let half = field.half(Elem::ONE);
    let reduced: Vec<(u64, Elem)> = terms
        .into_iter()
        .map(|(ex, s)| (ex, field.mul(half, field.from_int(s))))
        .collect();
    PolyMap::from_terms(field, &reduced)
}

fn lmptb_pointwise(field: &Field, s: usize, m: usize) -> Result<PolyMap> {
    let k = (m - 1) / 2;
    let sub = s * m;
    let h_terms = lmptb_h_terms(k);
    let vals: Vec<Elem> = field
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|x| {
            let tr = field.rel_trace(field.square(x), sub).expect("divisor checked");
            let y = field.mul(field.frobenius(x, 2 * s), x);
            let z = field.sub(y, field.frobenius(y, sub));
            let mut hz = Elem::ZERO;
            for &(t, sg) in &h_terms {
                let term = field.frobenius(z, s * t);
                hz = if sg > 0 {
                    field.add(hz, term)
                } else {
                    field.sub(hz, term)
                };
            }
            field.half(field.add(tr, hz))
        })
        .collect();
    PolyMap::interpolate(field, &vals)
}

/// `½(Tr(x²) + G(x^(q²+1)))` over `F_{q^(2m)}`, `q = p^s`, `m` odd, where Tr
/// is the relative trace onto `F_{q^m}` and `G(x) = h(x - x^(q^m))`.
///
/// The polynomial is built from the exponent formula and cross-checked
/// against pointwise evaluation followed by interpolation.
pub fn lmptb(field: &Field, q: u64, m: usize) -> Result<PolyMap> {
    let p = u64::from(field.p());
    let mut s = 0;
    let mut pw = 1u64;
    while pw < q {
        pw *= p;
        s += 1;
    }
    if pw != q || s == 0 {
        return Err(Error::InvalidParameters(format!(
            "q = {q} is not a power of p = {p}"
        )));
    }
    if m.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("m = {m} must be odd")));
    }
    if field.degree() != 2 * m * s {
        return Err(Error::InvalidParameters(format!(
            "ambient field has degree {} but F_(q^2m) needs {}",
            field.degree(),
            2 * m * s
        )));
    }
    let symbolic = lmptb_symbolic(field, q, m);
    let pointwise = lmptb_pointwise(field, s, m)?;
    if symbolic != pointwise {
        return Err(Error::InvalidParameters(format!(
            "LMPTB construction disagrees with itself: {symbolic} vs {pointwise}"
        )));
    }
    Ok(symbolic)
}

/// Values `f(e_i + e_j) - f(e_i) - f(e_j)` on basis pairs.
fn polarisation_matrix(f: &PolyMap) -> Vec<Vec<Elem>> {
    let field = f.field();
    let n = field.degree();
    let fe: Vec<Elem> = (0..n).map(|i| f.evaluate(field.basis(i))).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s = f.evaluate(field.add(field.basis(i), field.basis(j)));
                    field.sub(field.sub(s, fe[i]), fe[j])
                })
                .collect()
        })
        .collect()
}

fn rank_for(field: &Field, pol: &[Vec<Elem>], b: Elem) -> usize {
    let n = field.degree();
    let rows: Vec<Vec<u32>> = pol
        .iter()
        .map(|row| row.iter().map(|&v| field.trace(field.mul(b, v))).collect())
        .collect();
    debug_assert_eq!(rows.len(), n);
    FpMatrix::from_rows(field.p(), &rows).rank()
}

/// DO part of `f`, provided everything else is affine.
fn quadratic_form_source(f: &PolyMap) -> Result<PolyMap> {
    let g = quadratic_part(f);
    if g.is_dembowski_ostrom() {
        Ok(g)
    } else {
        Err(Error::NotDembowskiOstrom)
    }
}

/// Rank over F_p of the symmetric form `Tr(b (f(x+y) - f(x) - f(y)))`.
/// Affine terms of `f` do not contribute; the rest must be DO.
pub fn quad_form_rank(f: &PolyMap, b: Elem) -> Result<usize> {
    let g = quadratic_form_source(f)?;
    if b.is_zero() {
        return Err(Error::ZeroArgument("quadratic form multiplier"));
    }
    Ok(rank_for(g.field(), &polarisation_matrix(&g), b))
}

/// Histogram of [`quad_form_rank`] over all nonzero `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RankProfile {
    pub histogram: BTreeMap<usize, usize>,
}

impl RankProfile {
    pub fn total(&self) -> usize {
        self.histogram.values().sum()
    }

    /// All forms have rank `n`.
    pub fn is_constant(&self, n: usize) -> bool {
        self.histogram.len() == 1 && self.histogram.contains_key(&n)
    }
}

pub fn rank_profile(f: &PolyMap) -> Result<RankProfile> {
    let g = quadratic_form_source(f)?;
    let field = f.field();
    let pol = polarisation_matrix(&g);
    let ranks: Vec<usize> = field
        .nonzero_elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|b| rank_for(field, &pol, b))
        .collect();
    let mut histogram = BTreeMap::new();
    for r in ranks {
        *histogram.entry(r).or_insert(0) += 1;
    }
    Ok(RankProfile { histogram })
}

/// What remains of `f` after removing constant and linearized terms. For an
/// EA transform of a DO polynomial this is again DO.
pub fn quadratic_part(f: &PolyMap) -> PolyMap {
    let field = f.field();
    let p = field.p() as usize;
    let n = field.degree();
    let mut keep = Vec::new();
    for (e, c) in f.terms() {
        let mut pw = 1;
        let mut linear = e == 0;
        for _ in 0..n {
            if pw == e {
                linear = true;
            }
            pw *= p;
        }
        if !linear {
            keep.push((e as u64, c));
        }
    }
    PolyMap::from_terms(field, &keep)
}

/// `l1 ∘ f ∘ l2 + l3`.
pub fn ea_transform(f: &PolyMap, l1: &PolyMap, l2: &PolyMap, l3: &PolyMap) -> Result<PolyMap> {
    let field = f.field();
    if l1.field() != field || l2.field() != field || l3.field() != field {
        return Err(Error::FieldMismatch);
    }
    if !l1.is_affine() {
        return Err(Error::NotAffine("l1"));
    }
    if !l2.is_affine() {
        return Err(Error::NotAffine("l2"));
    }
    if !l3.is_affine() {
        return Err(Error::NotAffine("l3"));
    }
    if !l1.is_permutation() {
        return Err(Error::NotPermutation("l1"));
    }
    if !l2.is_permutation() {
        return Err(Error::NotPermutation("l2"));
    }
    let tf = f.table();
    let t1 = l1.table();
    let t2 = l2.table();
    let t3 = l3.table();
    let vals: Vec<Elem> = field
        .elements()
        .map(|x| field.add(t1[tf[t2[x.index()].index()].index()], t3[x.index()]))
        .collect();
    PolyMap::interpolate(field, &vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn f9() -> Field {
        Field::new(FieldSpec::new(3, &[1, 0, 1]).unwrap())
    }

    #[test]
    fn small_planarity_cases() {
        let f = f9();
        assert!(is_planar_bruteforce(&PolyMap::monomial(&f, Elem::ONE, 2)));
        let x4 = PolyMap::monomial(&f, Elem::ONE, 4);
        let w = planarity_witness(&x4).unwrap();
        let t = x4.table();
        let hit = f
            .elements()
            .any(|x| f.sub(t[f.add(x, w.direction).index()], t[x.index()]) == w.missing);
        assert!(!hit);
    }

    #[test]
    fn h_for_k_equal_one() {
        // h(x) = x - x^9 - x^3 when q = 3, k = 1
        assert_eq!(lmptb_h_terms(1), vec![(0, 1), (1, -1), (2, -1)]);
        assert_eq!(lmptb_h_terms(0), vec![(0, 1)]);
    }

    #[test]
    fn lmptb_matches_published_polynomial() {
        let f = Field::canonical();
        let g = lmptb(&f, 3, 3).unwrap();
        let expected = PolyMap::from_int_terms(
            &f,
            &[
                (270, 1),
                (246, -1),
                (90, 1),
                (82, -1),
                (54, -1),
                (30, 1),
                (10, -1),
                (2, -1),
            ],
        );
        assert_eq!(g, expected);
        assert!(g.is_dembowski_ostrom());
    }

    #[test]
    fn lmptb_parameter_errors() {
        let f = Field::canonical();
        assert!(lmptb(&f, 3, 2).is_err());
        assert!(lmptb(&f, 4, 3).is_err());
        assert!(lmptb(&f, 9, 3).is_err());
        // q = 3, m = 1 lives in F_9
        let g = lmptb(&f9(), 3, 1).unwrap();
        assert!(is_planar_bruteforce(&g));
    }

    #[test]
    fn rank_examples() {
        let f = f9();
        let sq = PolyMap::monomial(&f, Elem::ONE, 2);
        for b in f.nonzero_elements() {
            assert_eq!(quad_form_rank(&sq, b).unwrap(), 2);
        }
        let prof = rank_profile(&sq).unwrap();
        assert_eq!(prof.histogram, BTreeMap::from([(2, 8)]));
        let x4 = PolyMap::monomial(&f, Elem::ONE, 4);
        assert!(f.nonzero_elements().any(|b| quad_form_rank(&x4, b).unwrap() < 2));
        assert!(quad_form_rank(&sq, Elem::ZERO).is_err());
        let non_do = PolyMap::from_int_terms(&f, &[(5, 1), (2, 1)]);
        assert_eq!(
            quad_form_rank(&PolyMap::from_int_terms(&f, &[(2, 1), (1, 1), (0, 1)]), Elem::ONE),
            Ok(2)
        );
        assert_eq!(quad_form_rank(&non_do, Elem::ONE), Err(Error::NotDembowskiOstrom));
        assert_eq!(serde_json::to_string(&prof).unwrap(), r#"{"2":8}"#);
    }

    #[test]
    fn ea_transform_examples() {
        let f = f9();
        let sq = PolyMap::monomial(&f, Elem::ONE, 2);
        let id = PolyMap::identity(&f);
        let zero = PolyMap::zero(&f);
        assert_eq!(ea_transform(&sq, &id, &id, &zero).unwrap(), sq);
        let c = Elem(4);
        let scale = PolyMap::monomial(&f, c, 1);
        let expected = PolyMap::monomial(&f, f.mul(c, c), 2);
        assert_eq!(ea_transform(&sq, &id, &scale, &zero).unwrap(), expected);
        assert_eq!(
            ea_transform(&sq, &zero, &id, &zero),
            Err(Error::NotPermutation("l1"))
        );
        assert_eq!(ea_transform(&sq, &id, &sq, &zero), Err(Error::NotAffine("l2")));
    }

    #[test]
    fn quadratic_part_strips_affine_terms() {
        let f = f9();
        let g = PolyMap::from_int_terms(&f, &[(4, 1), (2, 1), (3, 1), (1, 2), (0, 1)]);
        assert_eq!(quadratic_part(&g), PolyMap::from_int_terms(&f, &[(4, 1), (2, 1)]));
    }
}
