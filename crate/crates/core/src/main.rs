use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use semiso::code::{
    ccz_equivalent_planar, code_from_function, full_weight_words, full_weight_words_are_constant,
    monomial_equivalent, weight_enumerator, CodeJson, EquivalenceVerdict, LinearCode, SearchCaps,
    DEFAULT_DIMENSION_CAP,
};
use semiso::fmap::{parse_poly_file, PolyMap};
use semiso::gf::{Elem, Field, FieldSpec};
use semiso::planar::{lmptb, planarity_witness, rank_profile};
use semiso::repro::{self, Golden, ReproConfig};
use semiso::semifield::{ElemJson, Presemifield, SemifieldReport};
use semiso::{Error, Result};

const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "semiso",
    version,
    about = "Commutative semifields, planar functions and code equivalence"
)]
struct Cli {
    /// Field spec such as `p=3 n=6 mod=[-1,-1,1,0,-1,0,1]`. Defaults to the
    /// canonical F_{3^6}; files carrying their own field must agree with it.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Emit a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for the parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe the field and optionally one element.
    Field {
        #[arg(long)]
        element: Option<String>,
    },
    /// Check planarity by brute force and by the quadratic-form rank profile.
    Planar(PolyInput),
    /// Build the LMPTB planar polynomial over F_{q^(2m)}.
    Lmptb {
        #[arg(long, default_value_t = 3)]
        q: u64,
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
    /// Presemifield and semifield operations for a planar DO polynomial.
    Semifield {
        #[command(subcommand)]
        op: SemifieldOp,
    },
    /// Interpolate a polynomial from a JSON value table.
    Interpolate {
        /// JSON with `values` (all q outputs in index order) or `pairs`
        /// (`[[x, y], ...]`); elements are integers, coefficient lists or
        /// `xi^k` strings.
        file: PathBuf,
    },
    /// Linear codes C_f and their equivalence.
    Code {
        #[command(subcommand)]
        op: CodeOp,
    },
    /// Run the full worked example and check every value against the golden file.
    ReproPaper {
        /// Use λ^k instead of λ for the isotope.
        #[arg(long, default_value_t = 1)]
        lambda_index: u64,
        /// Alternative golden file.
        #[arg(long)]
        golden: Option<PathBuf>,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Subcommand)]
enum SemifieldOp {
    /// Nuclei sizes and the α set of the semifield built at a base point.
    Nuclei(SemifieldArgs),
    /// Elements of N_m \ N that are not nuclear multiples of squares.
    Alpha(SemifieldArgs),
    /// Planar polynomial of the isotope x ⊙ y = (λ ⋆ x) ⋆ y.
    Isotope {
        #[command(flatten)]
        base: SemifieldArgs,
        #[arg(long)]
        lambda: String,
    },
}

#[derive(Args)]
struct SemifieldArgs {
    #[command(flatten)]
    poly: PolyInput,
    /// Base point a of the unit construction (unit = a ⋆ a).
    #[arg(long, default_value = "1")]
    base_point: String,
}

#[derive(Subcommand)]
enum CodeOp {
    /// Generator matrix of C_f.
    Build(PolyInput),
    /// Exact weight enumerator and full-weight codewords.
    Weights {
        /// Polynomial file or code JSON.
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DIMENSION_CAP)]
        dimension_cap: usize,
    },
    /// Decide equivalence. Exit status 0 = equivalent, 1 = inequivalent, 2 = unknown.
    Equiv {
        /// Polynomial file or code JSON.
        first: PathBuf,
        /// Polynomial file or code JSON.
        second: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Args)]
struct PolyInput {
    /// Polynomial file (`field:` header plus polynomial, or polynomial JSON); `-` reads stdin.
    #[arg(required_unless_present = "expr")]
    file: Option<PathBuf>,
    /// Inline polynomial over the `--field` field, e.g. `x^10 - x^2`.
    #[arg(long, conflicts_with = "file")]
    expr: Option<String>,
}

#[derive(Args)]
struct CapArgs {
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Wall-clock limit for the search stage; 0 disables it.
    #[arg(long)]
    timeout_secs: Option<f64>,
}

impl CapArgs {
    fn caps(&self) -> Result<SearchCaps> {
        let mut caps = SearchCaps::default();
        if let Some(n) = self.max_nodes {
            caps.max_nodes = n;
        }
        if let Some(t) = self.timeout_secs {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidParameters(format!(
                    "timeout {t} must be a non-negative number"
                )));
            }
            caps.timeout_secs = (t > 0.0).then_some(t);
        }
        Ok(caps)
    }
}

struct Ctx {
    field: Option<FieldSpec>,
    pretty: bool,
}

impl Ctx {
    fn field(&self) -> Field {
        Field::new(self.field.clone().unwrap_or_else(FieldSpec::canonical))
    }

    fn check_field(&self, spec: &FieldSpec) -> Result<()> {
        match &self.field {
            Some(want) if want != spec => Err(Error::FieldMismatch),
            _ => Ok(()),
        }
    }

    fn read(&self, path: &Path) -> Result<String> {
        if path == Path::new("-") {
            return Ok(std::io::read_to_string(std::io::stdin())?);
        }
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    fn poly(&self, input: &PolyInput) -> Result<PolyMap> {
        if let Some(expr) = &input.expr {
            return PolyMap::parse(&self.field(), expr);
        }
        let path = input.file.as_deref().expect("clap requires file or expr");
        let f = parse_poly_file(&self.read(path)?)?;
        self.check_field(f.field().spec())?;
        Ok(f)
    }

    /// A code JSON document is recognised by its `generator` key; anything
    /// else is read as a polynomial and turned into C_f.
    fn code_or_poly(&self, path: &Path) -> Result<(LinearCode, Option<PolyMap>)> {
        let text = self.read(path)?;
        if let Ok(j) = serde_json::from_str::<CodeJson>(&text) {
            return Ok((LinearCode::from_json(&j)?, None));
        }
        let f = parse_poly_file(&text)?;
        self.check_field(f.field().spec())?;
        Ok((code_from_function(&f), Some(f)))
    }

    fn emit<T: Serialize>(&self, value: &T) {
        let v = serde_json::to_value(value).expect("output serializes");
        let mut out = String::new();
        if self.pretty {
            pretty(&mut out, "", &v);
        } else {
            out = serde_json::to_string_pretty(&v).expect("output serializes");
            out.push('\n');
        }
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        let _ = std::io::stdout().lock().write_all(out.as_bytes());
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_) | Value::Bool(_))) => Some(format!(
            "[{}]",
            a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        )),
        _ => None,
    }
}

/// Flattens nested JSON into `path  value` lines.
fn pretty(out: &mut String, prefix: &str, v: &Value) {
    if let Some(s) = scalar(v) {
        out.push_str(&format!(
            "{:<40} {s}\n",
            if prefix.is_empty() { "value" } else { prefix }
        ));
        return;
    }
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                pretty(out, &join(k), x);
            }
        }
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str(&format!("{prefix:<40} []\n"));
            }
            for (i, x) in a.iter().enumerate() {
                pretty(out, &join(&i.to_string()), x);
            }
        }
        _ => unreachable!(),
    }
}

fn element_value(field: &Field, v: &Value) -> Result<Elem> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| field.from_int(i))
            .ok_or_else(|| Error::InvalidParameters(format!("bad element {n}"))),
        Value::String(s) => field.parse_element(s),
        Value::Array(a) => {
            let c: Option<Vec<i64>> = a.iter().map(Value::as_i64).collect();
            field.from_coeffs(&c.ok_or_else(|| Error::InvalidParameters("bad coefficient list".into()))?)
        }
        other => Err(Error::InvalidParameters(format!("bad element {other}"))),
    }
}

fn cmd_field(ctx: &Ctx, element: Option<&str>) -> Result<Value> {
    let field = ctx.field();
    let xi = field.generator();
    let xi_order = field.element_order(xi)?;
    let mut out = json!({
        "field": field.spec(),
        "p": field.p(),
        "n": field.degree(),
        "order": field.order(),
        "canonical": field.spec().is_canonical(),
        "generator": ElemJson::new(&field, xi),
        "generator_order": xi_order,
        "generator_primitive": xi_order == field.order() as u64 - 1,
    });
    if let Some(s) = element {
        let a = field.parse_element(s)?;
        out["element"] = json!({
            "value": ElemJson::new(&field, a),
            "order": if a.is_zero() { None } else { Some(field.element_order(a)?) },
            "log_generator": field.log(xi, a),
            "trace": field.trace(a),
        });
    }
    Ok(out)
}

fn cmd_planar(f: &PolyMap) -> Result<Value> {
    let field = f.field();
    let witness = planarity_witness(f);
    // The rank profile certifies planarity only when f is DO up to affine terms.
    let profile = rank_profile(f).ok();
    let rank_planar = profile.as_ref().map(|r| r.is_constant(field.degree()));
    Ok(json!({
        "field": field.spec(),
        "polynomial": f.to_human(),
        "dembowski_ostrom": f.is_dembowski_ostrom(),
        "bruteforce": {
            "planar": witness.is_none(),
            "witness": witness.map(|w| json!({
                "direction": ElemJson::new(field, w.direction),
                "missing_difference": ElemJson::new(field, w.missing),
            })),
        },
        "rank_profile": profile,
        "rank_profile_planar": rank_planar,
        "agree": rank_planar.map(|r| r == witness.is_none()),
    }))
}

fn semifield_for(ctx: &Ctx, args: &SemifieldArgs) -> Result<(PolyMap, semiso::semifield::Semifield)> {
    let f = ctx.poly(&args.poly)?;
    let a = f.field().parse_element(&args.base_point)?;
    let s = Presemifield::from_planar(&f)?.to_semifield(a)?;
    Ok((f, s))
}

fn cmd_semifield(ctx: &Ctx, op: &SemifieldOp) -> Result<Value> {
    match op {
        SemifieldOp::Nuclei(args) => {
            let (_, s) = semifield_for(ctx, args)?;
            Ok(serde_json::to_value(SemifieldReport::new(&s)?)?)
        }
        SemifieldOp::Alpha(args) => {
            let (f, s) = semifield_for(ctx, args)?;
            let field = f.field();
            let alpha: Vec<ElemJson> = s
                .alpha_search()?
                .iter()
                .map(|&a| ElemJson::new(field, a))
                .collect();
            Ok(json!({ "field": field.spec(), "unit": ElemJson::new(field, s.unit()), "alpha_set": alpha }))
        }
        SemifieldOp::Isotope { base, lambda } => {
            let (f, s) = semifield_for(ctx, base)?;
            let field = f.field();
            let l = field.parse_element(lambda)?;
            let g = s.isotope_scale(l)?.diagonal();
            Ok(json!({
                "lambda": ElemJson::new(field, l),
                "lambda_in_alpha_set": s.alpha_search()?.contains(&l),
                "polynomial": g.to_json(),
                "planar": planarity_witness(&g).is_none(),
            }))
        }
    }
}

fn cmd_interpolate(ctx: &Ctx, path: &Path) -> Result<Value> {
    let doc: Value = serde_json::from_str(&ctx.read(path)?)?;
    let spec = match doc.get("field") {
        Some(Value::String(s)) => {
            let spec: FieldSpec = s.parse()?;
            ctx.check_field(&spec)?;
            spec
        }
        Some(_) => return Err(Error::InvalidParameters("`field` must be a spec string".into())),
        None => ctx.field().spec().clone(),
    };
    let field = Field::new(spec);
    let f = if let Some(Value::Array(vals)) = doc.get("values") {
        let v: Vec<Elem> = vals
            .iter()
            .map(|x| element_value(&field, x))
            .collect::<Result<_>>()?;
        PolyMap::interpolate(&field, &v)?
    } else if let Some(Value::Array(pairs)) = doc.get("pairs") {
        let mut v = Vec::with_capacity(pairs.len());
        for p in pairs {
            match p.as_array().map(Vec::as_slice) {
                Some([x, y]) => v.push((element_value(&field, x)?, element_value(&field, y)?)),
                _ => return Err(Error::InvalidParameters("each pair must be [x, y]".into())),
            }
        }
        PolyMap::interpolate_pairs(&field, &v)?
    } else {
        return Err(Error::InvalidParameters(
            "expected a `values` or `pairs` array".into(),
        ));
    };
    Ok(serde_json::to_value(f.to_json())?)
}

fn verdict_exit(v: &EquivalenceVerdict) -> u8 {
    match v {
        EquivalenceVerdict::Equivalent { .. } => 0,
        EquivalenceVerdict::Inequivalent { .. } => 1,
        EquivalenceVerdict::Unknown { .. } => 2,
    }
}

fn cmd_code(ctx: &Ctx, op: &CodeOp) -> Result<(Value, u8)> {
    match op {
        CodeOp::Build(input) => {
            let f = ctx.poly(input)?;
            Ok((serde_json::to_value(code_from_function(&f).to_json())?, 0))
        }
        CodeOp::Weights { file, dimension_cap } => {
            let (code, _) = ctx.code_or_poly(file)?;
            let we = weight_enumerator(&code, *dimension_cap)?;
            let fw = full_weight_words(&code, *dimension_cap)?;
            let out = json!({
                "length": code.length(),
                "dimension": code.dimension(),
                "minimum_distance": we.minimum_distance(),
                "weight_enumerator": we,
                "full_weight_words": fw.len(),
                "full_weight_words_constant": full_weight_words_are_constant(&fw),
            });
            Ok((out, 0))
        }
        CodeOp::Equiv { first, second, caps } => {
            let caps = caps.caps()?;
            let (c1, f1) = ctx.code_or_poly(first)?;
            let (c2, f2) = ctx.code_or_poly(second)?;
            let verdict = match (f1, f2) {
                (Some(f), Some(g)) => ccz_equivalent_planar(&f, &g, &caps)?,
                _ => monomial_equivalent(&c1, &c2, &caps)?,
            };
            let code = verdict_exit(&verdict);
            Ok((serde_json::to_value(verdict)?, code))
        }
    }
}

fn cmd_repro(ctx: &Ctx, lambda_index: u64, golden: Option<&Path>, caps: &CapArgs) -> Result<(Value, u8)> {
    let mut config = ReproConfig {
        caps: caps.caps()?,
        lambda_index,
        ..ReproConfig::default()
    };
    if let Some(spec) = &ctx.field {
        config.field = spec.clone();
    }
    if let Some(path) = golden {
        config.golden = Golden::from_json(&ctx.read(path)?)?;
    }
    let report = repro::run(&config)?;
    let code = if report.all_expectations_met { 0 } else { 1 };
    Ok((serde_json::to_value(report)?, code))
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;
    }
    let ctx = Ctx {
        field: cli.field.as_deref().map(str::parse).transpose()?,
        pretty: cli.pretty,
    };
    let (value, code) = match &cli.command {
        Command::Field { element } => (cmd_field(&ctx, element.as_deref())?, 0),
        Command::Planar(input) => (cmd_planar(&ctx.poly(input)?)?, 0),
        Command::Lmptb { q, m } => (serde_json::to_value(lmptb(&ctx.field(), *q, *m)?.to_json())?, 0),
        Command::Semifield { op } => (cmd_semifield(&ctx, op)?, 0),
        Command::Interpolate { file } => (cmd_interpolate(&ctx, file)?, 0),
        Command::Code { op } => cmd_code(&ctx, op)?,
        Command::ReproPaper {
            lambda_index,
            golden,
            caps,
        } => cmd_repro(&ctx, *lambda_index, golden.as_deref(), caps)?,
    };
    ctx.emit(&value);
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
