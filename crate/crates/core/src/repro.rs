//! End-to-end reproduction run: construct f1, derive the commutative
//! semifield, its nuclei and the isotope f2, and decide whether f1 and f2 are
//! CCZ-equivalent. Every computed value is compared against a golden file.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::code::{ccz_equivalent_planar_detailed, EquivalenceVerdict, SearchCaps, Stage};
use crate::error::{Error, Result};
use crate::fmap::PolyMap;
use crate::gf::{Elem, Field, FieldSpec};
use crate::planar::{is_planar_bruteforce, lmptb, rank_profile, RankProfile};
use crate::semifield::{ElemJson, Presemifield};

pub const BUILTIN_GOLDEN: &str = include_str!("../data/repro_golden.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntTerm {
    pub exponent: u64,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaTerm {
    pub exponent: u64,
    pub sign: i64,
    pub lambda_power: u64,
}

/// f2 written as `λ^outer * Σ sign * λ^k * x^e`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaPolynomial {
    pub outer_lambda_power: u64,
    pub terms: Vec<LambdaTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LmptbParams {
    pub q: u64,
    pub m: usize,
}

/// Expected values of the reproduction run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Golden {
    pub field: FieldSpec,
    pub xi_order: u64,
    pub lmptb: LmptbParams,
    pub f1_terms: Vec<IntTerm>,
    pub base_point: i64,
    pub nucleus_middle_size: usize,
    pub nucleus_size: usize,
    pub alpha_set_xi_exponents: Vec<u64>,
    pub lambda_xi_exponent: u64,
    pub lambda_order: u64,
    pub f2: LambdaPolynomial,
    pub rank_profile: RankProfile,
    pub code_length: usize,
    pub code_dimension: usize,
    pub full_weight_words: usize,
    pub verdict: String,
}

impl Golden {
    pub fn builtin() -> Self {
        serde_json::from_str(BUILTIN_GOLDEN).expect("built-in golden file parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn f1(&self, field: &Field) -> PolyMap {
        let terms: Vec<(u64, i64)> = self.f1_terms.iter().map(|t| (t.exponent, t.coeff)).collect();
        PolyMap::from_int_terms(field, &terms)
    }

    pub fn f2(&self, field: &Field, lambda: Elem) -> PolyMap {
        let terms: Vec<(u64, Elem)> = self
            .f2
            .terms
            .iter()
            .map(|t| {
                let c = field.mul(field.from_int(t.sign), field.pow(lambda, t.lambda_power));
                (t.exponent, c)
            })
            .collect();
        PolyMap::from_terms(field, &terms).scale(field.pow(lambda, self.f2.outer_lambda_power))
    }
}

#[derive(Debug, Clone)]
pub struct ReproConfig {
    pub field: FieldSpec,
    /// Use `λ^k` for the isotope instead of `λ`.
    pub lambda_index: u64,
    pub caps: SearchCaps,
    pub golden: Golden,
}

impl Default for ReproConfig {
    fn default() -> Self {
        Self {
            field: FieldSpec::canonical(),
            lambda_index: 1,
            caps: SearchCaps::default(),
            golden: Golden::builtin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Planarity {
    pub bruteforce: bool,
    pub rank_profile: RankProfile,
    pub constant_full_rank: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub length: usize,
    pub dimension: usize,
    pub full_weight_words: usize,
    pub full_weight_words_constant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub item: String,
    pub expected: Value,
    pub actual: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaChoice {
    pub base: ElemJson,
    pub base_order: u64,
    pub index: u64,
    pub chosen: ElemJson,
    /// The base λ is one of the α found, with the expected order.
    pub lambda_match: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub field: FieldSpec,
    pub xi_order: u64,
    pub f1_polynomial: String,
    pub f1_matches_golden: bool,
    pub base_point: ElemJson,
    pub nucleus_left_size: usize,
    pub nucleus_middle_size: usize,
    pub nucleus_right_size: usize,
    pub nucleus_size: usize,
    pub alpha_set: Vec<ElemJson>,
    pub lambda: LambdaChoice,
    pub f2_polynomial: String,
    /// Not compared when an alternative power of λ is used.
    pub f2_matches_golden: Option<bool>,
    pub planarity: BTreeMap<String, Planarity>,
    pub codes: BTreeMap<String, CodeSummary>,
    pub verdict: EquivalenceVerdict,
    pub deciding_stage: Stage,
    pub conclusion: String,
    pub mismatches: Vec<Mismatch>,
    pub all_expectations_met: bool,
    pub timings_ms: BTreeMap<String, f64>,
}

impl ReproReport {
    /// The report as JSON with the timing block removed, for comparisons
    /// across runs.
    pub fn without_timings(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timings_ms");
        }
        v
    }
}

struct Timer {
    start: Instant,
    timings: BTreeMap<String, f64>,
}

impl Timer {
    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.timings
            .insert(name.to_string(), (now - self.start).as_secs_f64() * 1e3);
        self.start = now;
    }
}

fn expect(mismatches: &mut Vec<Mismatch>, item: &str, expected: Value, actual: Value) {
    if expected != actual {
        mismatches.push(Mismatch {
            item: item.into(),
            expected,
            actual,
        });
    }
}

pub fn run(config: &ReproConfig) -> Result<ReproReport> {
    let g = &config.golden;
    let mut t = Timer {
        start: Instant::now(),
        timings: BTreeMap::new(),
    };
    let mut mm = Vec::new();

    let field = Field::new(config.field.clone());
    expect(&mut mm, "field", json!(g.field), json!(field.spec()));
    let xi = field.generator();
    let xi_order = field.element_order(xi)?;
    expect(&mut mm, "xi_order", json!(g.xi_order), json!(xi_order));
    t.lap("field");

    let f1 = lmptb(&field, g.lmptb.q, g.lmptb.m)?;
    let f1_matches_golden = f1 == g.f1(&field);
    expect(
        &mut mm,
        "f1",
        json!(g.f1(&field).to_human()),
        json!(f1.to_human()),
    );
    t.lap("lmptb");

    let pre = Presemifield::from_planar(&f1)?;
    let base_point = field.from_int(g.base_point);
    let semi = pre.to_semifield(base_point)?;
    let nucleus_middle = semi.nucleus_middle();
    let nucleus = semi.nucleus();
    let nucleus_left_size = semi.nucleus_left().len();
    let nucleus_right_size = semi.nucleus_right().len();
    expect(
        &mut mm,
        "nucleus_middle_size",
        json!(g.nucleus_middle_size),
        json!(nucleus_middle.len()),
    );
    expect(
        &mut mm,
        "nucleus_size",
        json!(g.nucleus_size),
        json!(nucleus.len()),
    );
    t.lap("nuclei");

    let alpha = semi.alpha_search()?;
    let mut alpha_exps: Vec<Option<u64>> = alpha.iter().map(|&a| field.log(xi, a)).collect();
    alpha_exps.sort();
    let mut want: Vec<Option<u64>> = g.alpha_set_xi_exponents.iter().map(|&e| Some(e)).collect();
    want.sort();
    expect(&mut mm, "alpha_set_xi_exponents", json!(want), json!(alpha_exps));
    t.lap("alpha_search");

    let lambda_base = field.pow(xi, g.lambda_xi_exponent);
    let base_order = field.element_order(lambda_base)?;
    let lambda_match = alpha.contains(&lambda_base) && base_order == g.lambda_order;
    expect(&mut mm, "lambda_match", json!(true), json!(lambda_match));
    if config.lambda_index == 0 {
        return Err(Error::InvalidParameters("lambda index must be positive".into()));
    }
    let lambda = field.pow(lambda_base, config.lambda_index);
    if !alpha.contains(&lambda) {
        return Err(Error::InvalidParameters(format!(
            "lambda^{} = {} is not in the alpha set",
            config.lambda_index,
            field.format(lambda)
        )));
    }
    let f2 = semi.isotope_scale(lambda)?.diagonal();
    let f2_matches_golden = (config.lambda_index == 1).then(|| f2 == g.f2(&field, lambda_base));
    if f2_matches_golden == Some(false) {
        expect(
            &mut mm,
            "f2",
            json!(g.f2(&field, lambda_base).to_human()),
            json!(f2.to_human()),
        );
    }
    t.lap("isotope");

    let mut planarity = BTreeMap::new();
    for (name, f) in [("f1", &f1), ("f2", &f2)] {
        let profile = rank_profile(f)?;
        let p = Planarity {
            bruteforce: is_planar_bruteforce(f),
            constant_full_rank: profile.is_constant(field.degree()),
            rank_profile: profile,
        };
        expect(
            &mut mm,
            &format!("{name}.planar"),
            json!(true),
            json!(p.bruteforce),
        );
        expect(
            &mut mm,
            &format!("{name}.rank_profile"),
            json!(g.rank_profile),
            json!(p.rank_profile),
        );
        planarity.insert(name.to_string(), p);
    }
    t.lap("planarity");

    let (verdict, a1, a2) = ccz_equivalent_planar_detailed(&f1, &f2, &config.caps)?;
    let mut codes = BTreeMap::new();
    for (name, a) in [("f1", &a1), ("f2", &a2)] {
        let s = CodeSummary {
            length: a.code.length(),
            dimension: a.code.dimension(),
            full_weight_words: a.full_weight_words.len(),
            full_weight_words_constant: a.constants_only(),
        };
        expect(
            &mut mm,
            &format!("{name}.code_length"),
            json!(g.code_length),
            json!(s.length),
        );
        expect(
            &mut mm,
            &format!("{name}.code_dimension"),
            json!(g.code_dimension),
            json!(s.dimension),
        );
        expect(
            &mut mm,
            &format!("{name}.full_weight_words"),
            json!(g.full_weight_words),
            json!(s.full_weight_words),
        );
        expect(
            &mut mm,
            &format!("{name}.full_weight_words_constant"),
            json!(true),
            json!(s.full_weight_words_constant),
        );
        codes.insert(name.to_string(), s);
    }
    expect(&mut mm, "verdict", json!(g.verdict), json!(verdict.name()));
    t.lap("codes_and_equivalence");

    let conclusion = match &verdict {
        EquivalenceVerdict::Inequivalent { .. } => {
            "F1 and F2 are isotopic but not strongly isotopic: f1 and f2 are not CCZ-equivalent"
        }
        EquivalenceVerdict::Equivalent { .. } => {
            "F1 and F2 are strongly isotopic: f1 and f2 are CCZ-equivalent"
        }
        EquivalenceVerdict::Unknown { .. } => "undecided within the resource caps",
    }
    .to_string();

    Ok(ReproReport {
        field: field.spec().clone(),
        xi_order,
        f1_polynomial: f1.to_human(),
        f1_matches_golden,
        base_point: ElemJson::new(&field, base_point),
        nucleus_left_size,
        nucleus_middle_size: nucleus_middle.len(),
        nucleus_right_size,
        nucleus_size: nucleus.len(),
        alpha_set: alpha.iter().map(|&a| ElemJson::new(&field, a)).collect(),
        lambda: LambdaChoice {
            base: ElemJson::new(&field, lambda_base),
            base_order,
            index: config.lambda_index,
            chosen: ElemJson::new(&field, lambda),
            lambda_match,
        },
        f2_polynomial: f2.to_human(),
        f2_matches_golden,
        planarity,
        codes,
        deciding_stage: verdict.stage(),
        verdict,
        conclusion,
        all_expectations_met: mm.is_empty(),
        mismatches: mm,
        timings_ms: t.timings,
    })
}
