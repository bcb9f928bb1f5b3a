//! Commutative presemifields and semifields on `(F_{p^n}, +)`.
//!
//! A product is stored by its structure constants `e_i * e_j` on the
//! polynomial basis `e_i = ξ^i` and extended bilinearly over F_p. Every
//! construction here (polarisation of a DO polynomial, Kaplansky's unit
//! trick, scaled isotopes) produces such a table once; products afterwards
//! are table driven.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmap::PolyMap;
use crate::gf::{Elem, Field, FieldElement};
use crate::linalg::FpMatrix;

/// Bilinear product given by structure constants.
#[derive(Clone, PartialEq, Eq)]
pub struct Presemifield {
    field: Field,
    /// `basis_products[i][j] = e_i * e_j`
    basis_products: Vec<Vec<Elem>>,
    /// Same data as digits: `consts[(i * n + j) * n + r]`.
    consts: Vec<u32>,
}

impl std::fmt::Debug for Presemifield {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Presemifield")
            .field("field", &self.field)
            .field("basis_products", &self.basis_products)
            .finish()
    }
}

impl Presemifield {
    /// Builds the product from its values on basis pairs.
    pub fn from_basis_products(field: &Field, basis_products: Vec<Vec<Elem>>) -> Result<Self> {
        let n = field.degree();
        if basis_products.len() != n || basis_products.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameters(format!(
                "structure constants must be {n}x{n}"
            )));
        }
        if basis_products.iter().flatten().any(|e| !field.contains(*e)) {
            return Err(Error::InvalidParameters(
                "structure constant outside field".into(),
            ));
        }
        let mut consts = vec![0u32; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let c = field.coeffs(basis_products[i][j]);
                consts[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&c);
            }
        }
        Ok(Self {
            field: field.clone(),
            basis_products,
            consts,
        })
    }

    /// Samples a bilinear map on basis pairs. The closure must be F_p-bilinear
    /// for the result to agree with it everywhere.
    pub fn from_bilinear(field: &Field, mut f: impl FnMut(Elem, Elem) -> Elem) -> Self {
        let n = field.degree();
        let table = (0..n)
            .map(|i| (0..n).map(|j| f(field.basis(i), field.basis(j))).collect())
            .collect();
        Self::from_basis_products(field, table).expect("closure values lie in the field")
    }

    /// The field multiplication itself.
    pub fn field_product(field: &Field) -> Self {
        Self::from_bilinear(field, |x, y| field.mul(x, y))
    }

    /// Polarisation `x * y = (f(x+y) - f(x) - f(y)) / 2` of a DO polynomial.
    pub fn from_planar(f: &PolyMap) -> Result<Self> {
        let field = f.field();
        if field.p() == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !f.is_dembowski_ostrom() {
            return Err(Error::NotDembowskiOstrom);
        }
        Ok(Self::from_bilinear(field, |x, y| {
            let s = f.evaluate(field.add(x, y));
            field.half(field.sub(field.sub(s, f.evaluate(x)), f.evaluate(y)))
        }))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn basis_products(&self) -> &[Vec<Elem>] {
        &self.basis_products
    }

    pub fn product(&self, x: Elem, y: Elem) -> Elem {
        let f = &self.field;
        let n = f.degree();
        let p = f.p();
        let xd = f.coeffs(x);
        let yd = f.coeffs(y);
        let mut acc = vec![0u64; n];
        for (i, &xi) in xd.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in yd.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = u64::from(xi * yj % p);
                let base = (i * n + j) * n;
                for (r, a) in acc.iter_mut().enumerate() {
                    *a += c * u64::from(self.consts[base + r]);
                }
            }
        }
        let digits: Vec<i64> = acc.iter().map(|&a| (a % u64::from(p)) as i64).collect();
        f.from_coeffs(&digits).expect("n digits")
    }

    pub fn product_checked(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        if *x.field() != self.field || *y.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        self.field.element(self.product(x.elem(), y.elem()))
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.field.degree();
        (0..n).all(|i| (0..i).all(|j| self.basis_products[i][j] == self.basis_products[j][i]))
    }

    /// Matrix of `x -> x * a` on coefficient vectors.
    pub fn right_map(&self, a: Elem) -> FpMatrix {
        let n = self.field.degree();
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|i| self.field.coeffs(self.product(self.field.basis(i), a)))
            .collect();
        FpMatrix::from_columns(self.field.p(), n, &cols)
    }

    /// Matrix of `y -> a * y` on coefficient vectors.
    pub fn left_map(&self, a: Elem) -> FpMatrix {
        let n = self.field.degree();
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|j| self.field.coeffs(self.product(a, self.field.basis(j))))
            .collect();
        FpMatrix::from_columns(self.field.p(), n, &cols)
    }

    /// A pair `(x, y)` of nonzero elements with `x * y = 0`, if any. Scans
    /// every nonzero x and looks for a kernel vector of `y -> x * y`.
    pub fn zero_divisor_witness(&self) -> Option<(Elem, Elem)> {
        let f = &self.field;
        f.nonzero_elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .find_map_first(|x| {
                let ker = self.left_map(x).kernel();
                ker.first().map(|v| {
                    let y: Vec<i64> = v.iter().map(|&c| i64::from(c)).collect();
                    (x, f.from_coeffs(&y).expect("n digits"))
                })
            })
    }

    pub fn has_zero_divisors(&self) -> bool {
        self.zero_divisor_witness().is_some()
    }

    /// The diagonal `x -> x * x` as a polynomial.
    pub fn diagonal(&self) -> PolyMap {
        let vals: Vec<Elem> = self
            .field
            .elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|x| self.product(x, x))
            .collect();
        PolyMap::interpolate(&self.field, &vals).expect("complete table")
    }

    /// Semifield with product `(x*a) ⋆ (a*y) = x*y` and unit `a*a`.
    pub fn to_semifield(&self, a: Elem) -> Result<Semifield> {
        if a.is_zero() {
            return Err(Error::ZeroArgument("base point of the unit construction"));
        }
        let r_inv = self.right_map(a).inverse().ok_or(Error::ZeroDivisors)?;
        let l_inv = self.left_map(a).inverse().ok_or(Error::ZeroDivisors)?;
        let f = &self.field;
        let apply = |m: &FpMatrix, v: Elem| -> Elem {
            let d: Vec<i64> = m.mul_vec(&f.coeffs(v)).into_iter().map(i64::from).collect();
            f.from_coeffs(&d).expect("n digits")
        };
        let star = Presemifield::from_bilinear(f, |u, v| self.product(apply(&r_inv, u), apply(&l_inv, v)));
        Ok(Semifield {
            product: star,
            unit: self.product(a, a),
        })
    }
}

/// A presemifield together with a two-sided identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semifield {
    product: Presemifield,
    unit: Elem,
}

impl Semifield {
    /// Validates the unit law exhaustively.
    pub fn new(product: Presemifield, unit: Elem) -> Result<Self> {
        let s = Self { product, unit };
        if s.unit_law_holds() {
            Ok(s)
        } else {
            Err(Error::InvalidParameters(format!(
                "{} is not a two-sided identity",
                s.field().format(unit)
            )))
        }
    }

    /// A finite field viewed as a semifield.
    pub fn from_field(field: &Field) -> Self {
        Self {
            product: Presemifield::field_product(field),
            unit: Elem::ONE,
        }
    }

    pub fn field(&self) -> &Field {
        &self.product.field
    }

    pub fn product(&self) -> &Presemifield {
        &self.product
    }

    pub fn unit(&self) -> Elem {
        self.unit
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.product.product(x, y)
    }

    pub fn unit_law_holds(&self) -> bool {
        self.field()
            .elements()
            .all(|x| self.mul(self.unit, x) == x && self.mul(x, self.unit) == x)
    }

    pub fn is_commutative(&self) -> bool {
        self.product.is_commutative()
    }

    fn nucleus_scan(&self, slot: Slot) -> Vec<Elem> {
        let f = self.field();
        let n = f.degree();
        let basis: Vec<Elem> = (0..n).map(|i| f.basis(i)).collect();
        let m = |x, y| self.mul(x, y);
        let mut out: Vec<Elem> = f
            .elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter(|&a| {
                basis.iter().all(|&x| {
                    basis.iter().all(|&y| match slot {
                        Slot::Left => m(m(a, x), y) == m(a, m(x, y)),
                        Slot::Middle => m(m(x, a), y) == m(x, m(a, y)),
                        Slot::Right => m(m(x, y), a) == m(x, m(y, a)),
                    })
                })
            })
            .collect();
        out.sort();
        out
    }

    pub fn nucleus_left(&self) -> Vec<Elem> {
        self.nucleus_scan(Slot::Left)
    }

    pub fn nucleus_middle(&self) -> Vec<Elem> {
        self.nucleus_scan(Slot::Middle)
    }

    pub fn nucleus_right(&self) -> Vec<Elem> {
        self.nucleus_scan(Slot::Right)
    }

    /// Intersection of the three nuclei.
    pub fn nucleus(&self) -> Vec<Elem> {
        let l: BTreeSet<Elem> = self.nucleus_left().into_iter().collect();
        let r: BTreeSet<Elem> = self.nucleus_right().into_iter().collect();
        self.nucleus_middle()
            .into_iter()
            .filter(|a| l.contains(a) && r.contains(a))
            .collect()
    }

    /// Elements `α ∈ N_m \ N` that are not of the form `γ ⋆ (β ⋆ β)` with
    /// `γ ∈ N`, `β ∈ N_m`.
    pub fn alpha_search(&self) -> Result<Vec<Elem>> {
        if !self.is_commutative() {
            return Err(Error::NotCommutative);
        }
        let middle = self.nucleus_middle();
        let nucleus: BTreeSet<Elem> = self.nucleus().into_iter().collect();
        let mut covered = BTreeSet::new();
        for &beta in &middle {
            let sq = self.mul(beta, beta);
            for &gamma in &nucleus {
                covered.insert(self.mul(gamma, sq));
            }
        }
        Ok(middle
            .into_iter()
            .filter(|a| !nucleus.contains(a) && !covered.contains(a))
            .collect())
    }

    /// The isotope `x ⊙ y = (λ ⋆ x) ⋆ y`.
    pub fn isotope_scale(&self, lambda: Elem) -> Result<Presemifield> {
        isotope_scale(&self.product, lambda)
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Left,
    Middle,
    Right,
}

/// The isotope `x ⊙ y = (λ ⋆ x) ⋆ y` of a product.
pub fn isotope_scale(star: &Presemifield, lambda: Elem) -> Result<Presemifield> {
    if lambda.is_zero() {
        return Err(Error::ZeroArgument("isotope scalar"));
    }
    Ok(Presemifield::from_bilinear(star.field(), |x, y| {
        star.product(star.product(lambda, x), y)
    }))
}

/// Interpolates an F_p-linear map given as a closure.
pub fn linear_polymap(field: &Field, f: impl Fn(Elem) -> Elem + Sync + Send) -> PolyMap {
    let vals: Vec<Elem> = field
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(f)
        .collect();
    PolyMap::interpolate(field, &vals).expect("complete table")
}

/// Triple `(M, N, L)` of linearized permutation polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isotopism {
    m: PolyMap,
    n: PolyMap,
    l: PolyMap,
}

impl Isotopism {
    pub fn new(m: PolyMap, n: PolyMap, l: PolyMap) -> Result<Self> {
        for (map, name) in [(&m, "M"), (&n, "N"), (&l, "L")] {
            if !map.is_linearized() {
                return Err(Error::NotLinearized(name));
            }
            if !map.is_permutation() {
                return Err(Error::NotPermutation(name));
            }
        }
        if m.field() != n.field() || n.field() != l.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(Self { m, n, l })
    }

    pub fn identity(field: &Field) -> Self {
        let id = PolyMap::identity(field);
        Self {
            m: id.clone(),
            n: id.clone(),
            l: id,
        }
    }

    pub fn m(&self) -> &PolyMap {
        &self.m
    }

    pub fn n(&self) -> &PolyMap {
        &self.n
    }

    pub fn l(&self) -> &PolyMap {
        &self.l
    }

    /// Isotopisms of the form `(N, N, L)` witness strong isotopy.
    pub fn is_strong(&self) -> bool {
        self.m == self.n
    }
}

/// Checks `M(x) ⋆ N(y) = L(x * y)` on all basis pairs, where `*` is `source`
/// and `⋆` is `target`. Bilinearity makes basis pairs sufficient.
pub fn verify_isotopism(source: &Presemifield, target: &Presemifield, iso: &Isotopism) -> Result<bool> {
    let f = source.field();
    if target.field() != f || iso.m.field() != f {
        return Err(Error::FieldMismatch);
    }
    let n = f.degree();
    for i in 0..n {
        let x = f.basis(i);
        let mx = iso.m.evaluate(x);
        for j in 0..n {
            let y = f.basis(j);
            let lhs = target.product(mx, iso.n.evaluate(y));
            let rhs = iso.l.evaluate(source.product(x, y));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Element rendered for reports: coefficients plus, in the canonical field,
/// the exponent k with the element equal to `ξ^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemJson {
    pub coeffs: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_power: Option<u64>,
}

impl ElemJson {
    pub fn new(field: &Field, e: Elem) -> Self {
        let xi_power = if field.spec().is_canonical() {
            field.log(field.generator(), e)
        } else {
            None
        };
        Self {
            coeffs: field.coeffs(e),
            xi_power,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemifieldReport {
    pub field: crate::gf::FieldSpec,
    pub unit: ElemJson,
    pub nucleus_left_size: usize,
    pub nucleus_middle_size: usize,
    pub nucleus_right_size: usize,
    pub nucleus_size: usize,
    pub alpha_set: Vec<ElemJson>,
}

impl SemifieldReport {
    pub fn new(s: &Semifield) -> Result<Self> {
        let f = s.field();
        let alpha = s.alpha_search()?;
        Ok(Self {
            field: f.spec().clone(),
            unit: ElemJson::new(f, s.unit()),
            nucleus_left_size: s.nucleus_left().len(),
            nucleus_middle_size: s.nucleus_middle().len(),
            nucleus_right_size: s.nucleus_right().len(),
            nucleus_size: s.nucleus().len(),
            alpha_set: alpha.iter().map(|&a| ElemJson::new(f, a)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn f9() -> Field {
        Field::new(FieldSpec::new(3, &[1, 0, 1]).unwrap())
    }

    fn reference_f1(field: &Field) -> PolyMap {
        PolyMap::from_int_terms(
            field,
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
        )
    }

    #[test]
    fn polarising_x_squared_gives_field_product() {
        let f = f9();
        let sq = PolyMap::monomial(&f, Elem::ONE, 2);
        let p = Presemifield::from_planar(&sq).unwrap();
        assert_eq!(p, Presemifield::field_product(&f));
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(p.product(x, y), f.mul(x, y));
            }
        }
        assert_eq!(p.product(Elem::ZERO, Elem(5)), Elem::ZERO);
    }

    #[test]
    fn from_planar_rejects_non_do() {
        let f = f9();
        let g = PolyMap::from_int_terms(&f, &[(2, 1), (1, 1)]);
        assert_eq!(Presemifield::from_planar(&g), Err(Error::NotDembowskiOstrom));
    }

    #[test]
    fn non_planar_do_has_zero_divisors() {
        let f = f9();
        let x4 = PolyMap::monomial(&f, Elem::ONE, 4);
        let p = Presemifield::from_planar(&x4).unwrap();
        // brute force over all pairs
        let brute = f
            .nonzero_elements()
            .any(|x| f.nonzero_elements().any(|y| p.product(x, y).is_zero()));
        assert!(brute);
        let (x, y) = p.zero_divisor_witness().unwrap();
        assert!(!x.is_zero() && !y.is_zero());
        assert_eq!(p.product(x, y), Elem::ZERO);
        assert!(matches!(p.to_semifield(Elem::ONE), Err(Error::ZeroDivisors)));
    }

    #[test]
    fn lmptb_diagonal_and_unit() {
        let f = Field::canonical();
        let f1 = reference_f1(&f);
        let p = Presemifield::from_planar(&f1).unwrap();
        assert!(p.is_commutative());
        for x in f.elements() {
            assert_eq!(p.product(x, x), f1.evaluate(x));
        }
        let s = p.to_semifield(Elem::ONE).unwrap();
        assert_eq!(s.unit(), f1.evaluate(Elem::ONE));
        assert_eq!(s.unit(), Elem::ONE);
        assert!(s.unit_law_holds());
        assert!(matches!(p.to_semifield(Elem::ZERO), Err(Error::ZeroArgument(_))));
    }

    #[test]
    fn field_semifield_nuclei_are_everything() {
        let f = f9();
        let s = Semifield::from_field(&f);
        assert_eq!(s.nucleus_left().len(), 9);
        assert_eq!(s.nucleus_middle().len(), 9);
        assert_eq!(s.nucleus().len(), 9);
        assert!(s.alpha_search().unwrap().is_empty());
        let p = Presemifield::field_product(&f);
        let t = p.to_semifield(Elem::ONE).unwrap();
        assert_eq!(t.unit(), Elem::ONE);
        assert_eq!(t.product(), &p);
    }

    #[test]
    fn isotope_by_unit_is_the_product_itself() {
        let f = Field::canonical();
        let s = Presemifield::from_planar(&reference_f1(&f))
            .unwrap()
            .to_semifield(Elem::ONE)
            .unwrap();
        assert_eq!(&s.isotope_scale(s.unit()).unwrap(), s.product());
        assert!(matches!(s.isotope_scale(Elem::ZERO), Err(Error::ZeroArgument(_))));
    }

    #[test]
    fn alpha_search_rejects_noncommutative() {
        // Twisted field x∘y = x y^3 - c x^3 y on F_27 for some c without zero divisors.
        let f = Field::new(FieldSpec::new(3, &[1, 2, 0, 1]).unwrap());
        let p = f
            .nonzero_elements()
            .map(|c| {
                Presemifield::from_bilinear(&f, |x, y| {
                    f.sub(f.mul(x, f.pow(y, 3)), f.mul(c, f.mul(f.pow(x, 3), y)))
                })
            })
            .find(|p| !p.has_zero_divisors() && !p.is_commutative())
            .unwrap();
        let s = p.to_semifield(Elem::ONE).unwrap();
        assert!(s.unit_law_holds());
        assert!(!s.is_commutative());
        assert_eq!(s.alpha_search(), Err(Error::NotCommutative));
    }

    #[test]
    fn semifield_new_checks_unit() {
        let f = f9();
        assert!(Semifield::new(Presemifield::field_product(&f), Elem(2)).is_err());
    }

    #[test]
    fn identity_isotopism_and_validation() {
        let f = f9();
        let p = Presemifield::field_product(&f);
        assert!(verify_isotopism(&p, &p, &Isotopism::identity(&f)).unwrap());
        let sq = PolyMap::monomial(&f, Elem::ONE, 2);
        let id = PolyMap::identity(&f);
        assert_eq!(
            Isotopism::new(sq, id.clone(), id.clone()),
            Err(Error::NotLinearized("M"))
        );
        let zero = PolyMap::zero(&f);
        assert_eq!(
            Isotopism::new(id.clone(), zero, id),
            Err(Error::NotPermutation("N"))
        );
    }

    #[test]
    fn checked_product_rejects_mixed_fields() {
        let f = f9();
        let g = Field::canonical();
        let p = Presemifield::field_product(&f);
        let a = f.element(Elem(4)).unwrap();
        let b = g.element(Elem(4)).unwrap();
        assert_eq!(p.product_checked(&a, &b), Err(Error::FieldMismatch));
        assert_eq!(p.product_checked(&a, &a).unwrap().elem(), f.mul(Elem(4), Elem(4)));
    }
}
