use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shpart::algebra::{parse_polynomial, rational_string, Field, Polynomial};
use shpart::decompose::{
    low_depth_decompose, normalize_stats, upt_log_product_decompose, ProductDecomposition,
};
use shpart::formula::{
    deg_seq, formula_from_json, is_upt, parse_tree_count, upt_k, BinaryTree, DegreeSequence,
    Formula,
};
use shpart::hardpolys::{
    construct_unbiased_word, imm_polynomial, monomial_and_vandermonde, nw_polynomial, p_sigma,
    power_of_quadratic, word_polynomial,
};
use shpart::harness::{run_suite, run_sweep, Scale, SweepOptions, SweepSpec, VerifyConfig, SUITES};
use shpart::measures::{
    app_sampled, pd_measure, residue_report, skewp_measure, sp_measure, Budget, MeasureConfig,
    ResidueValue,
};
use shpart::Error;

#[derive(Parser)]
#[command(
    name = "shpart",
    version,
    about = "Shifted-partials measures, formula structure and hard polynomial families"
)]
struct Cli {
    /// Seed for every randomized step [default: 42, or the sweep spec's seed].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Grid bounds for `verify`.
    #[arg(long, global = true, default_value = "small", value_parser = parse_scale)]
    scale: Scale,
    /// `rational` or `prime:<p>` [default: rational].
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
    /// Cap on coefficient-matrix cells.
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[command(subcommand)]
    cmd: Cmd,
}

fn parse_scale(s: &str) -> Result<Scale, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a polynomial family instance.
    Construct(ConstructArgs),
    /// Compute a measure of a polynomial read from a file (`-` for stdin).
    Measure(MeasureArgs),
    /// Residue of a degree sequence, both variants.
    Residue {
        #[arg(long)]
        k: u64,
        /// Comma-separated degrees.
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u64>,
    },
    /// Degree sequence of the canonical form of a tree.
    Degseq {
        /// Tree encoding, e.g. `(L,(L,L))`.
        tree: String,
    },
    /// Full trace of the order selection for a tree or a degree sequence.
    Uptk {
        #[arg(long, conflicts_with = "degrees", required_unless_present = "degrees")]
        tree: Option<String>,
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<u64>>,
    },
    /// Canonical form of a tree.
    Canon { tree: String },
    /// Whether a formula has a unique parse tree up to isomorphism.
    CheckUpt { formula: PathBuf },
    /// Sum-of-products decomposition of a formula.
    Decompose {
        formula: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Degree threshold for `lowdepth` (defaults to the formula degree).
        #[arg(long)]
        threshold: Option<u64>,
    },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
    /// Run a parameter sweep described by a JSON file.
    Sweep {
        spec: PathBuf,
        /// Write here instead of the spec's `output` (`-` for stdout).
        #[arg(long)]
        output: Option<String>,
        /// Append a runtime column.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Nw,
    Imm,
    Word,
    Psigma,
    Monomial,
    Quadpower,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Lowdepth,
    Upt,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureKind {
    Pd,
    Sp,
    App,
    Skewp,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    h: Option<u64>,
    #[arg(long)]
    delta: Option<u32>,
    #[arg(long)]
    e: Option<u32>,
    #[arg(long)]
    n0: Option<u32>,
    /// Polynomial text goes here and the JSON sidecar to `<output>.json`.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MeasureArgs {
    input: String,
    #[arg(long, value_enum)]
    measure: MeasureKind,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 0)]
    l: u32,
    #[arg(long)]
    n0: Option<u32>,
    /// Random maps tried for `app`; the maximum is reported.
    #[arg(long, default_value_t = 1)]
    trials: u32,
    /// Comma-separated y-variable indices for `skewp`.
    #[arg(long, value_delimiter = ',')]
    y: Option<Vec<u32>>,
    /// Number of variables when the text mentions fewer.
    #[arg(long)]
    nvars: Option<u32>,
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Out = Result<(), Failure>;

fn usage(s: impl Into<String>) -> Failure {
    Failure::Usage(s.into())
}

// a closed pipe downstream is not an error worth reporting
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print(v: &Value) {
    emit(&(serde_json::to_string_pretty(v).expect("serializable") + "\n"));
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
    }
}

fn read_formula(path: &Path) -> Result<Formula, Failure> {
    let text = read_input(&path.to_string_lossy())?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(formula_from_json(&v)?)
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("--{name} is required for this family")))
}

fn seed(cli: &Cli) -> u64 {
    cli.seed.unwrap_or(42)
}

fn field(cli: &Cli) -> Field {
    cli.field.unwrap_or(Field::Rational)
}

fn budget(cli: &Cli) -> Budget {
    cli.budget.map_or_else(Budget::default, Budget::with_cells)
}

fn construct(cli: &Cli, a: &ConstructArgs) -> Out {
    let (field, b) = (field(cli), budget(cli));
    let (name, poly, mut meta): (&str, Polynomial, Value) = match a.family {
        Family::Nw => {
            let (q, d, k) = (need(a.q, "q")?, need(a.d, "d")?, need(a.k, "k")?);
            (
                "nw",
                nw_polynomial(q, d, k, field, &b)?,
                json!({"q": q, "d": d, "k": k}),
            )
        }
        Family::Imm => {
            let (n, d) = (need(a.n, "n")?, need(a.d, "d")?);
            let d = u32::try_from(d).map_err(|_| usage("d out of range"))?;
            (
                "imm",
                imm_polynomial(n, d, field, &b)?,
                json!({"n": n, "d": d}),
            )
        }
        Family::Word => {
            let (h, d, k) = (need(a.h, "h")?, need(a.d, "d")?, need(a.k, "k")?);
            let w = construct_unbiased_word(h, d, k)?;
            let p = word_polynomial(&w, field, &b)?;
            (
                "word",
                p,
                json!({"h": h, "d": d, "k": k, "word": w.to_json()}),
            )
        }
        Family::Psigma => {
            let (n, d, delta) = (need(a.n, "n")?, need(a.d, "d")?, need(a.delta, "delta")?);
            let d = u32::try_from(d).map_err(|_| usage("d out of range"))?;
            let ps = p_sigma(n, d, delta, field, &b)?;
            let meta = ps.to_json();
            ("psigma", ps.polynomial, meta)
        }
        Family::Monomial => {
            let n = need(a.n, "n")?;
            let n0 = a.n0.unwrap_or(n);
            let (p, _) = monomial_and_vandermonde(n, n0, field)?;
            ("monomial", p, json!({"n": n, "n0": n0}))
        }
        Family::Quadpower => {
            let (n, e) = (need(a.n, "n")?, need(a.e, "e")?);
            (
                "quadpower",
                power_of_quadratic(n, e, field, &b)?,
                json!({"n": n, "e": e}),
            )
        }
    };
    meta["family"] = json!(name);
    meta["field"] = json!(field.to_string());
    meta["nvars"] = json!(poly.nvars());
    meta["degree"] = json!(poly.degree());
    meta["terms"] = json!(poly.num_terms());
    match &a.output {
        Some(path) => {
            let sidecar = PathBuf::from(format!("{}.json", path.display()));
            fs::write(path, format!("{poly}\n"))
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let text = serde_json::to_string_pretty(&meta).expect("serializable");
            fs::write(&sidecar, text + "\n")
                .map_err(|e| usage(format!("{}: {e}", sidecar.display())))?;
            meta["output"] = json!(path.display().to_string());
            meta["sidecar"] = json!(sidecar.display().to_string());
        }
        None => meta["polynomial"] = json!(poly.to_string()),
    }
    print(&meta);
    Ok(())
}

fn measure(cli: &Cli, a: &MeasureArgs) -> Out {
    let text = read_input(&a.input)?;
    let p = parse_polynomial(text.trim(), a.nvars, Field::Rational)?;
    let cfg = MeasureConfig {
        field: field(cli),
        budget: budget(cli),
    };
    let r = match a.measure {
        MeasureKind::Pd => pd_measure(&p, a.k, &cfg)?,
        MeasureKind::Sp => sp_measure(&p, a.k, a.l, &cfg)?,
        MeasureKind::App => app_sampled(&p, a.k, need(a.n0, "n0")?, a.trials, seed(cli), &cfg)?,
        MeasureKind::Skewp => {
            let y = a.y.clone().unwrap_or_else(|| (1..=p.nvars() / 2).collect());
            skewp_measure(&p, &y, a.k, &cfg)?
        }
    };
    print(&r.to_json());
    Ok(())
}

fn residue_json(r: &ResidueValue) -> Value {
    json!({"value": rational_string(&r.value), "minimizer": r.minimizers})
}

fn tree_arg(s: &str) -> Result<BinaryTree, Failure> {
    Ok(s.parse::<BinaryTree>()?)
}

fn canonical_deg_seq(s: &str) -> Result<(BinaryTree, DegreeSequence), Failure> {
    let c = tree_arg(s)?.canonical();
    let ds = deg_seq(&c)?;
    Ok((c, ds))
}

fn decompose(path: &Path, mode: Mode, threshold: Option<u64>) -> Out {
    let f = read_formula(path)?;
    let (dec, extra): (ProductDecomposition, Value) = match mode {
        Mode::Lowdepth => {
            let stats = normalize_stats(&f)?;
            let d = match (threshold, stats.degree) {
                (Some(t), _) => t,
                (None, Some(d)) => d as u64,
                (None, None) => return Err(usage("zero formula has no degree; pass --threshold")),
            };
            let dec = low_depth_decompose(&f, d)?;
            (
                dec,
                json!({"mode": "lowdepth", "threshold": d, "productDepth": stats.product_depth}),
            )
        }
        Mode::Upt => {
            let dec = upt_log_product_decompose(&f)?;
            let tree = is_upt(&f.binarize())?.map(|t| t.encoding());
            (dec, json!({"mode": "upt", "tree": tree}))
        }
    };
    let exact = dec.recombine() == f.eval();
    let mut v = dec.to_json();
    for (k, x) in extra.as_object().expect("object") {
        v[k] = x.clone();
    }
    v["recombination"] = json!(if exact { "exact" } else { "mismatch" });
    print(&v);
    if exact {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn verify(cli: &Cli, suite: &str) -> Out {
    let cfg = VerifyConfig {
        seed: seed(cli),
        scale: cli.scale,
        field: field(cli),
        budget: budget(cli),
    };
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(usage(format!(
            "unknown suite '{suite}' (all, {})",
            SUITES.join(", ")
        )));
    };
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut ok = true;
    for name in names {
        let r = run_suite(name, &cfg)?;
        eprintln!(
            "{name}: {} cases, {} failures, {:.3}s",
            r.cases,
            r.failures.len(),
            r.wall.as_secs_f64()
        );
        ok &= r.passed();
        reports.push(r.to_json());
    }
    eprintln!("total wall time {:.3}s", start.elapsed().as_secs_f64());
    print(
        &json!({"seed": seed(cli), "scale": cli.scale.to_string(), "field": field(cli).to_string(), "passed": ok, "suites": reports}),
    );
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn sweep(cli: &Cli, path: &Path, output: Option<&str>, timing: bool) -> Out {
    let spec = SweepSpec::from_json(&read_input(&path.to_string_lossy())?)?;
    let csv = run_sweep(
        &spec,
        &SweepOptions {
            field: cli.field,
            seed: cli.seed,
            timing,
        },
    )?;
    match output.map(str::to_string).or_else(|| spec.output.clone()) {
        Some(p) if p != "-" => fs::write(&p, csv).map_err(|e| usage(format!("{p}: {e}")))?,
        _ => emit(&csv),
    }
    Ok(())
}

fn run(cli: &Cli) -> Out {
    match &cli.cmd {
        Cmd::Construct(a) => construct(cli, a),
        Cmd::Measure(a) => measure(cli, a),
        Cmd::Residue { k, degrees } => {
            let r = residue_report(*k, degrees)?;
            print(&json!({
                "k": k, "degrees": degrees,
                "residue": residue_json(&r.canonical), "constrained": residue_json(&r.constrained),
            }));
            Ok(())
        }
        Cmd::Degseq { tree } => {
            let (c, ds) = canonical_deg_seq(tree)?;
            let mut v = ds.to_json();
            v["canonical"] = json!(c.encoding());
            print(&v);
            Ok(())
        }
        Cmd::Uptk { tree, degrees } => {
            let ds = match (tree, degrees) {
                (Some(t), _) => canonical_deg_seq(t)?.1,
                (None, Some(d)) => DegreeSequence::new(d.clone())?,
                (None, None) => return Err(usage("pass --tree or --degrees")),
            };
            print(&upt_k(&ds)?.to_json());
            Ok(())
        }
        Cmd::Canon { tree } => {
            let t = tree_arg(tree)?;
            let c = t.canonical();
            print(&json!({"input": t.encoding(), "canonical": c.encoding(), "leaves": c.leaves()}));
            Ok(())
        }
        Cmd::CheckUpt { formula } => {
            let f = read_formula(formula)?.binarize();
            let t = is_upt(&f)?;
            print(&json!({
                "upt": t.is_some(),
                "tree": t.map(|t| t.encoding()),
                "parseTrees": parse_tree_count(&f).to_string(),
                "binarizedSize": f.size(),
            }));
            Ok(())
        }
        Cmd::Decompose {
            formula,
            mode,
            threshold,
        } => decompose(formula, *mode, *threshold),
        Cmd::Verify { suite } => verify(cli, suite),
        Cmd::Sweep {
            spec,
            output,
            timing,
        } => sweep(cli, spec, output.as_deref(), *timing),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
