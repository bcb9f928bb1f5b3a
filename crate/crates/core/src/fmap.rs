//! Functions `F_{p^n} -> F_{p^n}` as reduced univariate polynomials.
//!
//! Exponents are kept in `[0, p^n - 1]`: a positive exponent `e` is stored as
//! `((e - 1) mod (p^n - 1)) + 1`, so `x^(p^n)` and `x` coincide while the
//! constant term stays separate. Every function on the field has exactly one
//! such representative.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field, FieldElement, FieldSpec};

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMap {
    field: Field,
    /// exponent -> nonzero coefficient
    terms: BTreeMap<usize, Elem>,
}

/// Structural flags reported by [`PolyMap::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_linearized: bool,
    pub is_dembowski_ostrom: bool,
    pub is_affine: bool,
    pub is_permutation: bool,
}

/// Reduces an exponent to the canonical range.
pub fn reduce_exponent(e: u64, q: u64) -> usize {
    if e == 0 {
        0
    } else {
        ((e - 1) % (q - 1) + 1) as usize
    }
}

/// Some i with `e = p^i`, if any.
fn p_power_index(e: usize, p: usize, n: usize) -> Option<usize> {
    let mut pw = 1;
    for i in 0..n {
        if pw == e {
            return Some(i);
        }
        pw *= p;
    }
    None
}

fn is_do_exponent(e: usize, p: usize, n: usize) -> bool {
    let mut pi = 1;
    for _ in 0..n {
        if e > pi && p_power_index(e - pi, p, n).is_some() {
            return true;
        }
        pi *= p;
    }
    false
}

impl PolyMap {
    pub fn zero(field: &Field) -> Self {
        Self {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// The identity map `x`.
    pub fn identity(field: &Field) -> Self {
        Self::monomial(field, Elem::ONE, 1)
    }

    pub fn constant(field: &Field, c: Elem) -> Self {
        Self::monomial(field, c, 0)
    }

    pub fn monomial(field: &Field, coeff: Elem, exponent: u64) -> Self {
        Self::from_terms(field, &[(exponent, coeff)])
    }

    /// Sums the given terms after exponent reduction.
    pub fn from_terms(field: &Field, terms: &[(u64, Elem)]) -> Self {
        let q = field.order() as u64;
        let mut map: BTreeMap<usize, Elem> = BTreeMap::new();
        for &(e, c) in terms {
            let e = reduce_exponent(e, q);
            let slot = map.entry(e).or_insert(Elem::ZERO);
            *slot = field.add(*slot, c);
        }
        map.retain(|_, c| !c.is_zero());
        Self {
            field: field.clone(),
            terms: map,
        }
    }

    /// Terms with small signed integer coefficients, e.g. `&[(270, 1), (246, -1)]`.
    pub fn from_int_terms(field: &Field, terms: &[(u64, i64)]) -> Self {
        let t: Vec<(u64, Elem)> = terms.iter().map(|&(e, c)| (e, field.from_int(c))).collect();
        Self::from_terms(field, &t)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponent: usize) -> Elem {
        self.terms.get(&exponent).copied().unwrap_or(Elem::ZERO)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Elem)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn evaluate(&self, x: Elem) -> Elem {
        let f = &self.field;
        let mut acc = Elem::ZERO;
        for (&e, &c) in &self.terms {
            acc = f.add(acc, f.mul(c, f.pow(x, e as u64)));
        }
        acc
    }

    pub fn evaluate_checked(&self, x: &FieldElement) -> Result<FieldElement> {
        if *x.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        self.field.element(self.evaluate(x.elem()))
    }

    /// Values at every field element, indexed by element index.
    pub fn table(&self) -> Vec<Elem> {
        let q = self.field.order() as u32;
        (0..q).into_par_iter().map(|x| self.evaluate(Elem(x))).collect()
    }

    /// Unique reduced polynomial agreeing with `values[x]` at every x.
    ///
    /// Uses the Lagrange basis `1 - (x - a)^(q-1)`; expanding it gives
    /// `c_0 = f(0)` and `c_k = -sum_a f(a) a^(q-1-k)` for `k >= 1`.
    pub fn interpolate(field: &Field, values: &[Elem]) -> Result<Self> {
        let q = field.order();
        if values.len() != q {
            return Err(Error::IncompleteTable(format!(
                "{} values for a field of order {q}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !field.contains(**v)) {
            return Err(Error::IncompleteTable(format!(
                "value index {} out of range",
                bad.0
            )));
        }
        let zero = vec![Elem::ZERO; q];
        let acc = (1..q as u32)
            .into_par_iter()
            .fold(
                || zero.clone(),
                |mut acc, a| {
                    let fa = values[a as usize];
                    if fa.is_zero() {
                        return acc;
                    }
                    let a = Elem(a);
                    let mut pw = fa;
                    acc[q - 1] = field.add(acc[q - 1], pw);
                    for k in (1..q - 1).rev() {
                        pw = field.mul(pw, a);
                        acc[k] = field.add(acc[k], pw);
                    }
                    acc
                },
            )
            .reduce(
                || zero.clone(),
                |a, b| a.iter().zip(&b).map(|(&x, &y)| field.add(x, y)).collect(),
            );
        let mut terms = BTreeMap::new();
        if !values[0].is_zero() {
            terms.insert(0, values[0]);
        }
        for k in 1..q {
            let mut c = acc[k];
            if k == q - 1 {
                c = field.add(c, values[0]);
            }
            let c = field.neg(c);
            if !c.is_zero() {
                terms.insert(k, c);
            }
        }
        Ok(Self {
            field: field.clone(),
            terms,
        })
    }

    /// Interpolates from explicit `(input, output)` pairs, which must cover
    /// every field element exactly once.
    pub fn interpolate_pairs(field: &Field, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let q = field.order();
        let mut values: Vec<Option<Elem>> = vec![None; q];
        for &(x, y) in pairs {
            if !field.contains(x) || !field.contains(y) {
                return Err(Error::IncompleteTable("element out of range".into()));
            }
            match values[x.index()] {
                Some(prev) if prev != y => {
                    return Err(Error::IncompleteTable(format!(
                        "two outputs for input {}",
                        field.format(x)
                    )))
                }
                _ => values[x.index()] = Some(y),
            }
        }
        let missing = values.iter().filter(|v| v.is_none()).count();
        if missing > 0 {
            return Err(Error::IncompleteTable(format!("{missing} inputs have no output")));
        }
        let values: Vec<Elem> = values.into_iter().map(Option::unwrap).collect();
        Self::interpolate(field, &values)
    }

    pub fn is_linearized(&self) -> bool {
        let p = self.field.p() as usize;
        let n = self.field.degree();
        self.terms.keys().all(|&e| p_power_index(e, p, n).is_some())
    }

    pub fn is_dembowski_ostrom(&self) -> bool {
        let p = self.field.p() as usize;
        let n = self.field.degree();
        self.terms.keys().all(|&e| is_do_exponent(e, p, n))
    }

    pub fn is_affine(&self) -> bool {
        let p = self.field.p() as usize;
        let n = self.field.degree();
        self.terms
            .keys()
            .all(|&e| e == 0 || p_power_index(e, p, n).is_some())
    }

    /// Decided by exhaustive evaluation.
    pub fn is_permutation(&self) -> bool {
        is_permutation_table(&self.table())
    }

    pub fn classify(&self) -> Classification {
        Classification {
            is_linearized: self.is_linearized(),
            is_dembowski_ostrom: self.is_dembowski_ostrom(),
            is_affine: self.is_affine(),
            is_permutation: self.is_permutation(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (&e, &c) in &other.terms {
            let slot = terms.entry(e).or_insert(Elem::ZERO);
            *slot = self.field.add(*slot, c);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Self {
            field: self.field.clone(),
            terms,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(&e, &c)| (e, self.field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `c * f`.
    pub fn scale(&self, c: Elem) -> Self {
        let mut terms: BTreeMap<usize, Elem> = self
            .terms
            .iter()
            .map(|(&e, &v)| (e, self.field.mul(c, v)))
            .collect();
        terms.retain(|_, v| !v.is_zero());
        Self {
            field: self.field.clone(),
            terms,
        }
    }

    /// `self ∘ inner`, computed pointwise and re-interpolated.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_same(inner)?;
        let outer = self.table();
        let vals: Vec<Elem> = inner.table().into_iter().map(|y| outer[y.index()]).collect();
        Self::interpolate(&self.field, &vals)
    }

    /// Human-readable form with descending exponents, e.g.
    /// `x^270 - x^246 + x^90`. Prime-field coefficients print as signed
    /// integers; others as coefficient vectors, or as `ξ^k` in the
    /// canonical field.
    pub fn to_human(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let f = &self.field;
        let p = f.p();
        let canonical = f.spec().is_canonical();
        let mut out = String::new();
        for (i, (&e, &c)) in self.terms.iter().rev().enumerate() {
            let monomial = match e {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            };
            let (negative, coeff) = if c.0 < p {
                let v = c.0;
                if v * 2 > p {
                    (true, (p - v).to_string())
                } else {
                    (false, v.to_string())
                }
            } else if canonical {
                let k = f.log(f.generator(), c).expect("nonzero");
                (false, format!("ξ^{k}"))
            } else {
                (false, f.format(c))
            };
            let sep = match (i, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(sep);
            match (coeff.as_str(), monomial.is_empty()) {
                ("1", false) => out.push_str(&monomial),
                (_, true) => out.push_str(&coeff),
                (_, false) => {
                    out.push_str(&coeff);
                    out.push('*');
                    out.push_str(&monomial);
                }
            }
        }
        out
    }

    /// Parses the text form produced by [`PolyMap::to_human`]. Coefficients
    /// may be integers, `[c0,...]` vectors or `xi^k`; terms are joined by
    /// `+`/`-` and a coefficient attaches with `*` (or whitespace).
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        parse_poly(field, s, 0)
    }
}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMap({})", self.to_human())
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_human())
    }
}

pub fn is_permutation_table(values: &[Elem]) -> bool {
    let mut seen = vec![false; values.len()];
    for v in values {
        match seen.get_mut(v.index()) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn parse_poly(field: &Field, s: &str, offset: usize) -> Result<PolyMap> {
    // Split into signed terms at top-level + and -.
    let bytes: Vec<char> = s.chars().collect();
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut byte_pos = Vec::with_capacity(bytes.len() + 1);
    let mut acc = 0;
    for ch in &bytes {
        byte_pos.push(acc);
        acc += ch.len_utf8();
    }
    byte_pos.push(acc);
    let mut pending: Option<i64> = None;
    for (i, &ch) in bytes.iter().enumerate() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            '+' | '-' if depth == 0 => {
                // a sign right after '^' or '*' belongs to the operand
                let prev = bytes[..i].iter().rev().find(|c| !c.is_whitespace());
                if matches!(prev, Some('^') | Some('*')) {
                    continue;
                }
                let chunk: String = bytes[start..i].iter().collect();
                if chunk.trim().is_empty() {
                    if pending.is_some() {
                        return Err(perr(offset + byte_pos[i], "dangling operator"));
                    }
                } else {
                    terms.push((pending.unwrap_or(1), chunk, byte_pos[start]));
                }
                pending = Some(if ch == '-' { -1 } else { 1 });
                start = i + 1;
            }
            _ => {}
        }
    }
    let tail: String = bytes[start..].iter().collect();
    if tail.trim().is_empty() {
        if pending.is_some() {
            return Err(perr(
                offset + byte_pos[bytes.len()],
                "expression ends with an operator",
            ));
        }
    } else {
        terms.push((pending.unwrap_or(1), tail, byte_pos[start]));
    }
    if terms.is_empty() {
        return Err(perr(offset, "empty polynomial"));
    }
    let mut parsed = Vec::new();
    for (sign, text, pos) in terms {
        let (coeff, exp) = parse_term(field, &text, offset + pos)?;
        let coeff = if sign < 0 { field.neg(coeff) } else { coeff };
        parsed.push((exp, coeff));
    }
    Ok(PolyMap::from_terms(field, &parsed))
}

fn parse_term(field: &Field, text: &str, pos: usize) -> Result<(Elem, u64)> {
    let lead = text.len() - text.trim_start().len();
    let t = text.trim();
    let pos = pos + lead;
    if t == "0" {
        return Ok((Elem::ZERO, 0));
    }
    // Locate the variable x (not part of "xi").
    let chars: Vec<(usize, char)> = t.char_indices().collect();
    let mut var_at = None;
    for (k, &(bi, ch)) in chars.iter().enumerate() {
        if ch == 'x' {
            let next = chars.get(k + 1).map(|c| c.1);
            if next != Some('i') {
                var_at = Some(bi);
            }
        }
    }
    let (coeff_text, exp) = match var_at {
        None => (t, 0u64),
        Some(bi) => {
            let after = t[bi + 1..].trim_start();
            let exp = if after.is_empty() {
                1
            } else {
                let e = after
                    .strip_prefix('^')
                    .ok_or_else(|| perr(pos + bi + 1, "expected ^ after x"))?
                    .trim();
                e.parse::<u64>()
                    .map_err(|_| perr(pos + bi + 1, format!("bad exponent {e:?}")))?
            };
            let before = t[..bi].trim_end();
            let before = before.strip_suffix('*').unwrap_or(before).trim();
            (before, exp)
        }
    };
    let coeff = if coeff_text.is_empty() {
        Elem::ONE
    } else {
        field.parse_element(coeff_text).map_err(|e| match e {
            Error::Parse { pos: p, msg } => perr(pos + p, msg),
            other => other,
        })?
    };
    Ok((coeff, exp))
}

/// JSON term: exponent plus little-endian coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponent: u64,
    pub coeff: Vec<u32>,
}

/// Self-describing polynomial file / report entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub field: FieldSpec,
    /// Sorted by descending exponent.
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub human: Option<String>,
}

impl PolyMap {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            field: self.field.spec().clone(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(&e, &c)| TermJson {
                    exponent: e as u64,
                    coeff: self.field.coeffs(c),
                })
                .collect(),
            human: Some(self.to_human()),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        let field = Field::new(j.field.clone());
        Self::from_json_in(&field, j)
    }

    pub fn from_json_in(field: &Field, j: &PolyJson) -> Result<Self> {
        if j.field != *field.spec() {
            return Err(Error::FieldMismatch);
        }
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            let c: Vec<i64> = t.coeff.iter().map(|&v| i64::from(v)).collect();
            terms.push((t.exponent, field.from_coeffs(&c)?));
        }
        Ok(Self::from_terms(field, &terms))
    }
}

/// Parses a polynomial file: either a [`PolyJson`] document, or text whose
/// first non-empty line is `field: <spec>` followed by the polynomial.
pub fn parse_poly_file(text: &str) -> Result<PolyMap> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let j: PolyJson = serde_json::from_str(text)?;
        return PolyMap::from_json(&j);
    }
    let mut offset = 0;
    let mut field = None;
    let mut body = String::new();
    let mut body_offset = None;
    for line in text.split_inclusive('\n') {
        let content = line.trim_end_matches(['\n', '\r']);
        let t = content.trim();
        if t.is_empty() || t.starts_with('#') {
            offset += line.len();
            continue;
        }
        if field.is_none() {
            let rest = t
                .strip_prefix("field:")
                .ok_or_else(|| perr(offset, "expected `field: p=.. n=.. mod=[..]` header"))?;
            let spec: FieldSpec = rest.trim().parse().map_err(|e| match e {
                Error::Parse { pos, msg } => perr(offset + pos, msg),
                other => other,
            })?;
            field = Some(Field::new(spec));
        } else {
            if body_offset.is_none() {
                body_offset = Some(offset);
            }
            body.push_str(content);
            body.push(' ');
        }
        offset += line.len();
    }
    let field = field.ok_or_else(|| perr(0, "missing field header"))?;
    parse_poly(&field, &body, body_offset.unwrap_or(offset))
}

/// Text form accepted by [`parse_poly_file`].
pub fn format_poly_file(f: &PolyMap) -> String {
    format!("field: {}\n{}\n", f.field().spec(), f.to_human())
}
