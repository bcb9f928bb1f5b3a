//! Acceptance run: one PASS/FAIL line per criterion with its wall-clock time.
//! Exits non-zero if any criterion fails or overruns its time budget.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use semiso::code::{
    ccz_equivalent_planar, code_from_function, compare_analyses, full_weight_words,
    full_weight_words_are_constant, CodeAnalysis, EquivalenceVerdict, SearchCaps,
};
use semiso::fmap::PolyMap;
use semiso::gf::{Elem, Field};
use semiso::planar::{is_planar_bruteforce, lmptb, rank_profile};
use semiso::repro::{self, Golden, ReproConfig};
use semiso::semifield::{Presemifield, Semifield};

type Outcome = Result<String, String>;
/// Number, description, time budget in seconds, check.
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn canonical_semifield(field: &Field) -> Semifield {
    let f1 = lmptb(field, 3, 3).expect("lmptb");
    Presemifield::from_planar(&f1)
        .and_then(|s| s.to_semifield(Elem::ONE))
        .expect("semifield")
}

fn c1_lmptb() -> Outcome {
    let field = Field::canonical();
    let f = lmptb(&field, 3, 3).map_err(|e| e.to_string())?;
    let golden = Golden::builtin().f1(&field);
    ensure(f == golden, || format!("got {f}, expected {golden}"))?;
    ensure(f == common::f1(&field), || "differs from the literal f1".into())?;
    Ok(f.to_human())
}

fn c2_nuclei() -> Outcome {
    let s = canonical_semifield(&Field::canonical());
    let (m, n) = (s.nucleus_middle().len(), s.nucleus().len());
    ensure(m == 9 && n == 3, || format!("|N_m| = {m}, |N| = {n}"))?;
    Ok(format!("|N_m| = {m}, |N| = {n}"))
}

fn c3_alpha() -> Outcome {
    let field = Field::canonical();
    let xi = field.generator();
    let s = canonical_semifield(&field);
    let alpha = s.alpha_search().map_err(|e| e.to_string())?;
    let mut got: Vec<Option<u64>> = alpha.iter().map(|&a| field.log(xi, a)).collect();
    got.sort();
    let want: Vec<Option<u64>> = [1, 3, 5, 7].iter().map(|k| Some(91 * k)).collect();
    ensure(got == want, || format!("alpha exponents {got:?}"))?;
    let xi_order = field.element_order(xi).map_err(|e| e.to_string())?;
    let lambda_order = field
        .element_order(field.pow(xi, 91))
        .map_err(|e| e.to_string())?;
    ensure(xi_order == 728 && lambda_order == 8, || {
        format!("ord(xi) = {xi_order}, ord(xi^91) = {lambda_order}")
    })?;
    Ok(format!(
        "alpha = xi^{{91,273,455,637}}, ord(xi) = {xi_order}, ord(lambda) = {lambda_order}"
    ))
}

fn c4_f2() -> Outcome {
    let field = Field::canonical();
    let lambda = field.pow(field.generator(), 91);
    let s = canonical_semifield(&field);
    let f2 = s.isotope_scale(lambda).map_err(|e| e.to_string())?.diagonal();
    ensure(f2 == Golden::builtin().f2(&field, lambda), || format!("got {f2}"))?;
    ensure(f2 == common::f2(&field), || "differs from the literal f2".into())?;
    Ok(f2.to_human())
}

fn c5_planarity() -> Outcome {
    let field = Field::canonical();
    for (name, f) in [("f1", common::f1(&field)), ("f2", common::f2(&field))] {
        ensure(is_planar_bruteforce(&f), || {
            format!("{name} fails the brute-force test")
        })?;
        let r = rank_profile(&f).map_err(|e| e.to_string())?;
        ensure(
            r.histogram.len() == 1 && r.histogram.get(&6) == Some(&728),
            || format!("{name} rank profile {:?}", r.histogram),
        )?;
    }
    Ok("both planar, rank profile {6: 728}".into())
}

fn c6_code_shape() -> Outcome {
    let field = Field::canonical();
    for (name, f) in [("f1", common::f1(&field)), ("f2", common::f2(&field))] {
        let c = code_from_function(&f);
        ensure(c.length() == 729 && c.dimension() == 13, || {
            format!("{name}: length {}, dimension {}", c.length(), c.dimension())
        })?;
        let words = full_weight_words(&c, 16).map_err(|e| e.to_string())?;
        ensure(words.len() == 2 && full_weight_words_are_constant(&words), || {
            format!("{name}: {} full-weight words", words.len())
        })?;
    }
    Ok("[729, 13] codes, 2 constant full-weight words each".into())
}

fn c7_central() -> Outcome {
    let report = repro::run(&ReproConfig::default()).map_err(|e| e.to_string())?;
    ensure(report.verdict.is_inequivalent(), || {
        format!("verdict {:?}", report.verdict)
    })?;
    ensure(
        report.conclusion.contains("isotopic but not strongly isotopic"),
        || report.conclusion.clone(),
    )?;
    ensure(report.all_expectations_met, || {
        format!("mismatches {:?}", report.mismatches)
    })?;
    let witness = report
        .verdict
        .witness()
        .map(|w| w.invariant.clone())
        .unwrap_or_default();
    Ok(format!(
        "inequivalent at {:?} stage via {witness}",
        report.deciding_stage
    ))
}

fn c8_positive_controls() -> Outcome {
    let field = Field::canonical();
    let f1 = common::f1(&field);
    let caps = SearchCaps::default();
    let c1 = code_from_function(&f1);
    let a1 = CodeAnalysis::new(&c1, &caps.analysis).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut nodes = Vec::new();
    for i in 0..10 {
        let g = random_ea_transform(&f1, &mut rng);
        ensure(is_planar_bruteforce(&g), || format!("control {i} is not planar"))?;
        let c2 = code_from_function(&g);
        let a2 = CodeAnalysis::new(&c2, &caps.analysis).map_err(|e| e.to_string())?;
        let v = compare_analyses(&a1, &a2, &caps);
        let EquivalenceVerdict::Equivalent {
            certificate,
            nodes: n,
            ..
        } = &v
        else {
            return Err(format!("control {i}: {}", v.name()));
        };
        ensure(certificate.verify(&c1, &c2), || {
            format!("control {i}: certificate fails")
        })?;
        nodes.push(*n);
    }
    Ok(format!(
        "10/10 equivalent, certificates verified, search nodes {nodes:?}"
    ))
}

fn c9_oracle() -> Outcome {
    let k = f27();
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let mut pairs = vec![
        (
            PolyMap::monomial(&k, Elem::ONE, 2),
            PolyMap::monomial(&k, Elem::ONE, 4),
        ),
        (
            PolyMap::monomial(&k, Elem::ONE, 4),
            PolyMap::monomial(&k, Elem::ONE, 10),
        ),
        (
            PolyMap::monomial(&k, Elem::ONE, 2),
            PolyMap::monomial(&k, Elem::ONE, 10),
        ),
    ];
    let fs = planar_do_candidates(&k, &mut rng, 4);
    for f in &fs {
        pairs.push((PolyMap::monomial(&k, Elem::ONE, 2), f.clone()));
        pairs.push((f.clone(), random_ea_transform(f, &mut rng)));
    }
    pairs.push((fs[0].clone(), fs[1].clone()));
    let (mut eq, mut ineq) = (0, 0);
    for (f, g) in &pairs {
        let oracle = oracle_affine_equivalent(f, g).is_some();
        let v = ccz_equivalent_planar(f, g, &SearchCaps::default()).map_err(|e| e.to_string())?;
        ensure(!matches!(v, EquivalenceVerdict::Unknown { .. }), || {
            format!("{f} vs {g}: unknown")
        })?;
        ensure(v.is_equivalent() == oracle, || {
            format!("{f} vs {g}: engine {}, oracle {oracle}", v.name())
        })?;
        if let Some(cert) = v.certificate() {
            ensure(
                cert.verify(&code_from_function(f), &code_from_function(g)),
                || format!("{f} vs {g}: certificate fails"),
            )?;
        }
        if oracle {
            eq += 1;
        } else {
            ineq += 1;
        }
    }
    ensure(eq > 0 && ineq > 0, || "need both kinds of pair".into())?;
    Ok(format!(
        "{} pairs agree ({eq} equivalent, {ineq} inequivalent)",
        pairs.len()
    ))
}

fn field_axioms(k: &Field, a: Elem, b: Elem, c: Elem) -> Result<(), TestCaseError> {
    prop_assert_eq!(k.add(a, b), k.add(b, a));
    prop_assert_eq!(k.mul(a, b), k.mul(b, a));
    prop_assert_eq!(k.add(k.add(a, b), c), k.add(a, k.add(b, c)));
    prop_assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
    prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
    prop_assert_eq!(k.add(a, Elem::ZERO), a);
    prop_assert_eq!(k.mul(a, Elem::ONE), a);
    prop_assert_eq!(k.add(a, k.neg(a)), Elem::ZERO);
    if !a.is_zero() {
        prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), Elem::ONE);
    }
    Ok(())
}

fn c10_properties() -> Outcome {
    let f9 = f9();
    for a in f9.elements() {
        for b in f9.elements() {
            for c in f9.elements() {
                field_axioms(&f9, a, b, c).map_err(|e| format!("F9 axioms: {e}"))?;
            }
        }
    }

    let k = Field::canonical();
    let q = k.order() as u32;
    let mut runner = TestRunner::new(Config {
        cases: 2000,
        rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&(0..q, 0..q, 0..q), |(a, b, c)| {
            field_axioms(&k, Elem(a), Elem(b), Elem(c))
        })
        .map_err(|e| format!("F_3^6 axioms: {e}"))?;

    let f1 = common::f1(&k);
    let pre = Presemifield::from_planar(&f1).map_err(|e| e.to_string())?;
    for x in k.elements() {
        ensure(pre.product(x, x) == f1.evaluate(x), || {
            format!("x*x != f(x) at {}", k.format(x))
        })?;
    }
    let semi = pre.to_semifield(Elem::ONE).map_err(|e| e.to_string())?;
    ensure(semi.unit_law_holds(), || "unit law fails".into())?;

    let base = rank_profile(&f1).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for i in 0..20 {
        let g = random_ea_transform(&f1, &mut rng);
        let r = rank_profile(&g).map_err(|e| e.to_string())?;
        ensure(r == base, || {
            format!("rank profile changed under EA transform {i}")
        })?;
    }
    Ok("F9 axioms exhaustive, 2000 random F_3^6 triples, x*x = f1(x) and unit law exhaustive, 20 EA rank profiles".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "lmptb(3,3) equals f1", 1, c1_lmptb),
        (2, "nuclei sizes", 5, c2_nuclei),
        (3, "alpha set and element orders", 5, c3_alpha),
        (4, "isotope f2 equals golden", 5, c4_f2),
        (5, "planarity of f1 and f2", 10, c5_planarity),
        (6, "code dimension and full-weight words", 60, c6_code_shape),
        (7, "f1 and f2 are CCZ-inequivalent", 600, c7_central),
        (8, "EA positive controls", 600, c8_positive_controls),
        (9, "F27 oracle agreement", 600, c9_oracle),
        (10, "property suites", 600, c10_properties),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > Duration::from_secs(limit) => Err(format!("exceeded {limit} s budget")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} criterion {id:>2}: {name} [{:.2} s / {limit} s] {detail}",
            took.as_secs_f64()
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
