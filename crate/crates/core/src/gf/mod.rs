//! Arithmetic in odd-characteristic finite fields `F_{p^n} = F_p[x]/(m(x))`.
//!
//! A [`Field`] is a cheap, clonable handle holding the validated
//! [`FieldSpec`]. Elements come in two flavours:
//!
//! * [`Elem`] is a bare `Copy` index. The element with little-endian
//!   coefficient vector `(c_0, ..., c_{n-1})` has index `sum c_i p^i`, so the
//!   natural index order is the lexicographic order `0, 1, 2, ξ, 1+ξ, ...`.
//!   All arithmetic goes through `Field` methods and is infallible.
//! * [`FieldElement`] carries its field and offers checked operations that
//!   reject operands from different fields.

mod poly;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 20;
/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 24;

/// Validated description of `F_p[x]/(modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    n: usize,
    /// Little-endian, monic, length n + 1, entries in `[0, p)`.
    modulus: Vec<u32>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Builds a spec from a little-endian modulus given as signed residues.
    pub fn new(p: u32, modulus: &[i64]) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(u64::from(p)));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if modulus.len() < 2 {
            return Err(Error::BadModulus("degree must be at least 1".into()));
        }
        let n = modulus.len() - 1;
        if n > MAX_DEGREE || (u64::from(p)).checked_pow(n as u32).is_none_or(|q| q > MAX_ORDER) {
            return Err(Error::FieldTooLarge { p, n });
        }
        let reduced: Vec<u32> = modulus
            .iter()
            .map(|&c| c.rem_euclid(i64::from(p)) as u32)
            .collect();
        if reduced[n] != 1 {
            return Err(Error::BadModulus(format!(
                "leading coefficient {} is not 1 mod {p}",
                modulus[n]
            )));
        }
        if !poly::is_irreducible(&reduced, p) {
            return Err(Error::ReducibleModulus { p });
        }
        Ok(Self {
            p,
            n,
            modulus: reduced,
        })
    }

    /// The field `F_3(ξ)` with `ξ^6 - ξ^4 + ξ^2 - ξ - 1 = 0`.
    pub fn canonical() -> Self {
        Self::new(3, &[-1, -1, 1, 0, -1, 0, 1]).expect("canonical modulus is irreducible")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        u64::from(self.p).pow(self.n as u32)
    }

    pub fn is_canonical(&self) -> bool {
        *self == Self::canonical()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} n={} mod=[", self.p, self.n)?;
        for (i, c) in self.modulus.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Parses a bracketed list of signed integers, e.g. `[-1, 0, 2]`.
pub(crate) fn parse_int_list(s: &str, offset: usize) -> Result<Vec<i64>> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| parse_err(offset + lead, "expected [..] list"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut pos = offset + lead + 1;
    for part in inner.split(',') {
        let v = part
            .trim()
            .parse::<i64>()
            .map_err(|e| parse_err(pos, format!("bad integer {:?}: {e}", part.trim())))?;
        out.push(v);
        pos += part.len() + 1;
    }
    Ok(out)
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Parses `p=3 n=6 mod=[-1,-1,1,0,-1,0,1]`. The `n=` key is optional
    /// but must agree with the modulus degree when present.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = None;
        let mut n = None;
        let mut modulus = None;
        let mut pos = 0;
        let bytes = s;
        while pos < bytes.len() {
            let rest = &bytes[pos..];
            let skip = rest.len() - rest.trim_start().len();
            pos += skip;
            if pos >= bytes.len() {
                break;
            }
            let rest = &bytes[pos..];
            let eq = rest
                .find('=')
                .ok_or_else(|| parse_err(pos, "expected key=value"))?;
            let key = rest[..eq].trim();
            let value_start = pos + eq + 1;
            let value_rest = &bytes[value_start..];
            let value_len = if value_rest.starts_with('[') {
                value_rest
                    .find(']')
                    .map(|i| i + 1)
                    .ok_or_else(|| parse_err(value_start, "unterminated list"))?
            } else {
                value_rest.find(char::is_whitespace).unwrap_or(value_rest.len())
            };
            let value = &value_rest[..value_len];
            match key {
                "p" => {
                    p = Some(
                        value
                            .parse::<u32>()
                            .map_err(|e| parse_err(value_start, e.to_string()))?,
                    )
                }
                "n" => {
                    n = Some(
                        value
                            .parse::<usize>()
                            .map_err(|e| parse_err(value_start, e.to_string()))?,
                    )
                }
                "mod" => modulus = Some(parse_int_list(value, value_start)?),
                other => return Err(parse_err(pos, format!("unknown key {other:?}"))),
            }
            pos = value_start + value_len;
        }
        let p = p.ok_or_else(|| parse_err(0, "missing p="))?;
        let modulus = modulus.ok_or_else(|| parse_err(0, "missing mod="))?;
        if let Some(n) = n {
            if modulus.len() != n + 1 {
                return Err(Error::BadModulus(format!(
                    "n={n} but modulus has {} coefficients",
                    modulus.len()
                )));
            }
        }
        Self::new(p, &modulus)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Index of a field element; see the module docs for the encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

type Digits = [u32; MAX_DEGREE];

#[derive(Debug)]
struct Inner {
    spec: FieldSpec,
    q: u32,
    /// `p^i` for i in 0..=n.
    pow_p: Vec<u32>,
    /// Coefficients of `x^(n+k) mod m` for k in 0..n-1.
    reductions: Vec<Digits>,
}

/// Handle to a finite field. Clones share the same precomputed data.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.0.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        let p = spec.p;
        let n = spec.n;
        let pow_p: Vec<u32> = (0..=n).map(|i| p.pow(i as u32)).collect();
        let q = pow_p[n];
        // x^n = -(m_0 + ... + m_{n-1} x^{n-1})
        let mut reductions = Vec::with_capacity(n.saturating_sub(1));
        let mut cur: Digits = [0; MAX_DEGREE];
        for (i, c) in spec.modulus[..n].iter().enumerate() {
            cur[i] = (p - c) % p;
        }
        for _ in 0..n.saturating_sub(1) {
            reductions.push(cur);
            // multiply by x
            let top = cur[n - 1];
            let mut next: Digits = [0; MAX_DEGREE];
            for i in (1..n).rev() {
                next[i] = cur[i - 1];
            }
            if top != 0 {
                let base = reductions[0];
                for i in 0..n {
                    next[i] = (next[i] + top * base[i]) % p;
                }
            }
            cur = next;
        }
        Field(Arc::new(Inner {
            spec,
            q,
            pow_p,
            reductions,
        }))
    }

    pub fn canonical() -> Self {
        Self::new(FieldSpec::canonical())
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn degree(&self) -> usize {
        self.0.spec.n
    }

    /// Number of elements `p^n`.
    pub fn order(&self) -> usize {
        self.0.q as usize
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.0.q).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.0.q).map(Elem)
    }

    /// The generator ξ of the polynomial basis (the residue class of x).
    pub fn generator(&self) -> Elem {
        if self.degree() == 1 {
            // F_p itself: x reduces to -m_0
            Elem((self.p() - self.0.spec.modulus[0]) % self.p())
        } else {
            Elem(self.p())
        }
    }

    /// The i-th standard basis vector `ξ^i`.
    pub fn basis(&self, i: usize) -> Elem {
        Elem(self.0.pow_p[i])
    }

    /// Embeds an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(i64::from(self.p())) as u32)
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.q
    }

    #[inline]
    fn digits(&self, a: Elem) -> Digits {
        let p = self.p();
        let mut d = [0; MAX_DEGREE];
        let mut v = a.0;
        for slot in d.iter_mut().take(self.degree()) {
            *slot = v % p;
            v /= p;
        }
        d
    }

    #[inline]
    fn digits_to_elem(&self, d: &Digits) -> Elem {
        let mut v = 0;
        for i in (0..self.degree()).rev() {
            v = v * self.p() + d[i];
        }
        Elem(v)
    }

    /// Little-endian coefficient vector of `a`.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        self.digits(a)[..self.degree()].to_vec()
    }

    /// Builds an element from signed coefficients (reduced mod p). The slice
    /// may be shorter than n; missing entries are zero.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Elem> {
        if coeffs.len() > self.degree() {
            return Err(Error::InvalidParameters(format!(
                "{} coefficients for a degree {} field",
                coeffs.len(),
                self.degree()
            )));
        }
        let mut d = [0; MAX_DEGREE];
        for (slot, &c) in d.iter_mut().zip(coeffs) {
            *slot = c.rem_euclid(i64::from(self.p())) as u32;
        }
        Ok(self.digits_to_elem(&d))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p();
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        for &pw in &self.0.pow_p[..self.degree()] {
            let s = x % p + y % p;
            out += if s >= p { s - p } else { s } * pw;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.p();
        let mut x = a.0;
        let mut out = 0;
        for &pw in &self.0.pow_p[..self.degree()] {
            let d = x % p;
            out += if d == 0 { 0 } else { p - d } * pw;
            x /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplication by an element of the prime field.
    #[inline]
    pub fn scale(&self, a: Elem, s: u32) -> Elem {
        let p = self.p();
        let s = s % p;
        let mut x = a.0;
        let mut out = 0;
        for &pw in &self.0.pow_p[..self.degree()] {
            out += (x % p) * s % p * pw;
            x /= p;
        }
        Elem(out)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let n = self.degree();
        let p = u64::from(self.p());
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if da[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] += u64::from(da[i]) * u64::from(db[j]);
            }
        }
        let mut acc = [0u64; MAX_DEGREE];
        for i in 0..n {
            acc[i] = prod[i] % p;
        }
        for k in 0..n.saturating_sub(1) {
            let c = prod[n + k] % p;
            if c == 0 {
                continue;
            }
            for (i, &r) in self.0.reductions[k][..n].iter().enumerate() {
                acc[i] += c * u64::from(r);
            }
        }
        let mut d = [0u32; MAX_DEGREE];
        for i in 0..n {
            d[i] = (acc[i] % p) as u32;
        }
        self.digits_to_elem(&d)
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// `a^e`; `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let e = (e - 1) % (self.order() as u64 - 1) + 1;
        let mut acc = Elem::ONE;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order() as u64 - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a / 2`.
    pub fn half(&self, a: Elem) -> Elem {
        self.scale(a, self.p().div_ceil(2))
    }

    /// `a^(p^i)`.
    pub fn frobenius(&self, a: Elem, i: usize) -> Elem {
        let i = i % self.degree();
        self.pow(a, u64::from(self.0.pow_p[i]))
    }

    /// Relative trace onto the subfield of degree `sub_degree`.
    pub fn rel_trace(&self, a: Elem, sub_degree: usize) -> Result<Elem> {
        let n = self.degree();
        if sub_degree == 0 || !n.is_multiple_of(sub_degree) {
            return Err(Error::NotADivisor { sub: sub_degree, n });
        }
        let mut acc = Elem::ZERO;
        for j in 0..n / sub_degree {
            acc = self.add(acc, self.frobenius(a, sub_degree * j));
        }
        Ok(acc)
    }

    /// Absolute trace to F_p, returned as a residue.
    pub fn trace(&self, a: Elem) -> u32 {
        self.rel_trace(a, 1).expect("1 divides n").0
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Elem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroOrder);
        }
        let group = self.order() as u64 - 1;
        let mut order = group;
        for (prime, _) in factorize(group) {
            while order.is_multiple_of(prime) && self.pow(a, order / prime) == Elem::ONE {
                order /= prime;
            }
        }
        Ok(order)
    }

    /// Builds the checked wrapper.
    pub fn element(&self, a: Elem) -> Result<FieldElement> {
        if !self.contains(a) {
            return Err(Error::InvalidParameters(format!(
                "index {} outside field of order {}",
                a.0,
                self.order()
            )));
        }
        Ok(FieldElement {
            field: self.clone(),
            elem: a,
        })
    }

    /// Formats as the little-endian coefficient tuple `[c0,...,c_{n-1}]`.
    pub fn format(&self, a: Elem) -> String {
        let c = self.coeffs(a);
        let parts: Vec<String> = c.iter().map(u32::to_string).collect();
        format!("[{}]", parts.join(","))
    }

    /// Parses an element. Accepted forms: a coefficient list `[c0,...]`, a
    /// prime-field integer, or `xi^k` / `ξ^k` (canonical field only).
    pub fn parse_element(&self, s: &str) -> Result<Elem> {
        let t = s.trim();
        if t.starts_with('[') {
            let v = parse_int_list(t, 0)?;
            return self.from_coeffs(&v);
        }
        let power = t.strip_prefix("xi").or_else(|| t.strip_prefix('ξ'));
        if let Some(rest) = power {
            if !self.spec().is_canonical() {
                return Err(parse_err(
                    0,
                    "ξ^k notation is only accepted for the canonical field",
                ));
            }
            let k = if rest.is_empty() {
                1
            } else {
                let r = rest
                    .strip_prefix('^')
                    .ok_or_else(|| parse_err(t.len() - rest.len(), "expected ^ after ξ"))?;
                r.trim()
                    .parse::<u64>()
                    .map_err(|e| parse_err(t.len() - r.len(), e.to_string()))?
            };
            let mut acc = Elem::ONE;
            let xi = self.generator();
            for _ in 0..k {
                acc = self.mul(acc, xi);
            }
            return Ok(acc);
        }
        let v = t
            .parse::<i64>()
            .map_err(|_| parse_err(0, format!("cannot parse element {t:?}")))?;
        Ok(self.from_int(v))
    }

    /// Discrete logarithm to base `g` by exhaustive search, if any.
    pub fn log(&self, g: Elem, a: Elem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let mut acc = Elem::ONE;
        for k in 0..self.order() as u64 - 1 {
            if acc == a {
                return Some(k);
            }
            acc = self.mul(acc, g);
        }
        None
    }
}

pub(crate) fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            let mut e = 0;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// A field element bound to its field. Binary operations check that both
/// operands live in the same field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    elem: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.elem))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.elem))
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn elem(&self) -> Elem {
        self.elem
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.elem)
    }

    pub fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, e: Elem) -> Self {
        Self {
            field: self.field.clone(),
            elem: e,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(self.elem, other.elem)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(self.elem, other.elem)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(self.elem, other.elem)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.field.div(self.elem, other.elem)?))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.field.neg(self.elem))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field.inv(self.elem)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.wrap(self.field.pow(self.elem, e))
    }

    pub fn half(&self) -> Self {
        self.wrap(self.field.half(self.elem))
    }

    pub fn frobenius(&self, i: usize) -> Self {
        self.wrap(self.field.frobenius(self.elem, i))
    }

    pub fn rel_trace(&self, sub_degree: usize) -> Result<Self> {
        Ok(self.wrap(self.field.rel_trace(self.elem, sub_degree)?))
    }

    pub fn order(&self) -> Result<u64> {
        self.field.element_order(self.elem)
    }
}
