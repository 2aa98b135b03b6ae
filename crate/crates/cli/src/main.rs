use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qmzv::arith::{parse_rational, Scalar};
use qmzv::checks::{check_generators, check_product_theorem, check_relations, CheckSummary, ProductKind, Products};
use qmzv::parse::{parse_element, ParsedElement};
use qmzv::products::shuffle_x;
use qmzv::qeval::{l_value, z_q, EvalResult, QContext};
use qmzv::relations::{dims_table_with, gen_hoffman, relation_basis, Generators, RelationBasis};
use qmzv::{AElement, Index, Rational};

#[derive(Parser)]
#[command(name = "qmzv", version, about = "Word algebra for q-analogues of multiple zeta values")]
struct Cli {
    /// Deformation parameter, a rational in (0, 1)
    #[arg(long, global = true, default_value = "1/2")]
    q: String,
    /// Truncation of the outer sum
    #[arg(long = "N", global = true, default_value_t = 300)]
    n: usize,
    /// Absolute tolerance for evaluations and checks
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Leave the h-multiples of lower weight resummation relations out
    #[arg(long, global = true)]
    no_hbar_lifts: bool,
    /// Print machine-readable JSON
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to a file
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Harmonic,
    Shuffle,
    Star,
}

impl From<Kind> for ProductKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Harmonic => ProductKind::Harmonic,
            Kind::Shuffle => ProductKind::Shuffle,
            Kind::Star => ProductKind::Star,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two elements
    Product {
        kind: Kind,
        left: String,
        right: String,
    },
    /// Evaluate Z_q of an element
    Eval {
        expr: String,
        /// Sum exactly in rationals up to N instead of in floating point
        #[arg(long)]
        exact: bool,
    },
    /// Evaluate the q-polylogarithm L_w(t)
    Polylog {
        expr: String,
        #[arg(long)]
        t: String,
        #[arg(long)]
        exact: bool,
    },
    /// Compute the relation space at one weight
    Relations {
        #[arg(long)]
        weight: usize,
    },
    /// Print the dimension table
    Dims {
        #[arg(long = "max-weight")]
        max_weight: usize,
    },
    /// Check the product theorems and relation spaces numerically
    Verify {
        #[arg(long)]
        weight: usize,
        /// Check the rows of a saved relation document instead of recomputing
        #[arg(long)]
        relations: Option<PathBuf>,
    },
    /// Print Hoffman's relation for an admissible index such as 2,1
    Hoffman { index: String },
}

enum Outcome {
    Done,
    Failed,
}

struct Config {
    q: Rational,
    n: usize,
    tol: f64,
    hbar_lifts: bool,
    json: bool,
    out: Option<PathBuf>,
}

impl Config {
    fn float_context(&self) -> anyhow::Result<QContext<f64>> {
        Ok(QContext::new(f64::from_rational(&self.q), self.n, self.tol)?)
    }

    fn exact_context(&self) -> anyhow::Result<QContext<Rational>> {
        Ok(QContext::new(self.q.clone(), self.n, self.tol)?)
    }

    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => fs::write(path, format!("{text}\n"))
                .with_context(|| format!("writing {}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                writeln!(stdout, "{text}")?;
                Ok(())
            }
        }
    }
}

fn parse_a(text: &str) -> anyhow::Result<AElement> {
    Ok(match parse_element(text)? {
        ParsedElement::A(e) => e,
        ParsedElement::X(e) => e.contract_to_a()?,
    })
}

fn result_json<T>(r: &EvalResult<T>, value: serde_json::Value) -> serde_json::Value {
    json!({
        "value": value,
        "tail_bound": r.tail_bound,
        "certified": r.certified,
        "truncation": r.truncation,
    })
}

fn format_result(r: &EvalResult<f64>) -> String {
    format!(
        "{:.15e} ± {:.3e} (N = {}, {})",
        r.value,
        r.tail_bound,
        r.truncation,
        if r.certified { "certified" } else { "heuristic bound" }
    )
}

fn format_exact(r: &EvalResult<Rational>) -> String {
    format!(
        "{}\n≈ {:.15e} ± {:.3e} (N = {}, {})",
        r.value,
        f64::from_rational(&r.value),
        r.tail_bound,
        r.truncation,
        if r.certified { "certified" } else { "heuristic bound" }
    )
}

fn product(cfg: &Config, kind: Kind, left: &str, right: &str) -> anyhow::Result<Outcome> {
    let l = parse_element(left)?;
    let r = parse_element(right)?;
    let text = match (kind, l, r) {
        (Kind::Shuffle, ParsedElement::X(a), ParsedElement::X(b)) => shuffle_x(&a, &b).to_string(),
        (kind, l, r) => {
            let to_a = |e: ParsedElement| -> anyhow::Result<AElement> {
                Ok(match e {
                    ParsedElement::A(e) => e,
                    ParsedElement::X(e) => e.contract_to_a()?,
                })
            };
            Products::new().apply(kind.into(), &to_a(l)?, &to_a(r)?)?.to_string()
        }
    };
    if cfg.json {
        cfg.emit(&json!({ "product": ProductKind::from(kind).to_string(), "result": text }).to_string())?;
    } else {
        cfg.emit(&text)?;
    }
    Ok(Outcome::Done)
}

fn eval(cfg: &Config, expr: &str, t: Option<&str>, exact: bool) -> anyhow::Result<Outcome> {
    let e = parse_a(expr)?;
    let t = t.map(parse_rational).transpose()?;
    let text = if exact {
        let ctx = cfg.exact_context()?;
        let r = match &t {
            Some(t) => l_value(&e, t, &ctx)?,
            None => z_q(&e, &ctx)?,
        };
        if cfg.json {
            result_json(&r, json!(r.value.to_string())).to_string()
        } else {
            format_exact(&r)
        }
    } else {
        let ctx = cfg.float_context()?;
        let r = match &t {
            Some(t) => l_value(&e, &f64::from_rational(t), &ctx)?,
            None => z_q(&e, &ctx)?,
        };
        if cfg.json {
            result_json(&r, json!(r.value)).to_string()
        } else {
            format_result(&r)
        }
    };
    cfg.emit(&text)?;
    Ok(Outcome::Done)
}

fn check_weight(weight: usize) -> anyhow::Result<()> {
    if !(2..=8).contains(&weight) {
        bail!("weight must be between 2 and 8, got {weight}");
    }
    Ok(())
}

fn describe_row(basis: &RelationBasis, row: &[Rational]) -> String {
    let mut parts = Vec::new();
    for (k, c) in basis.index_basis.iter().zip(row) {
        if c == &Rational::from_integer(0.into()) {
            continue;
        }
        parts.push(format!("({c})*zb({k})"));
    }
    format!("{} = 0", parts.join(" + "))
}

fn relations(cfg: &Config, weight: usize) -> anyhow::Result<Outcome> {
    check_weight(weight)?;
    let basis = relation_basis(&mut Generators::new(), weight, cfg.hbar_lifts)?;
    eprintln!("weight {weight}: dimension {}", basis.dimension());
    if cfg.json || cfg.out.is_some() {
        cfg.emit(&basis.to_json())?;
    } else {
        let mut lines = vec![format!("weight {weight}: dimension {}", basis.dimension())];
        lines.extend(basis.rows.iter().map(|r| describe_row(&basis, r)));
        cfg.emit(&lines.join("\n"))?;
    }
    Ok(Outcome::Done)
}

fn dims(cfg: &Config, max_weight: usize) -> anyhow::Result<Outcome> {
    check_weight(max_weight)?;
    let rows = dims_table_with(max_weight, cfg.hbar_lifts, |r| {
        eprintln!("weight {} done: dim N = {}", r.weight, r.relations)
    })?;
    let text = if cfg.json {
        serde_json::to_string_pretty(&json!({ "hbar_lifts": cfg.hbar_lifts, "rows": rows }))?
    } else {
        let line = |label: &str, f: &dyn Fn(&qmzv::relations::DimsRow) -> usize| {
            let cells: Vec<String> = rows.iter().map(|r| format!("{:>4}", f(r))).collect();
            format!("{label:<26}{}", cells.join(""))
        };
        [
            line("d", &|r| r.weight),
            line("# of admissible indices", &|r| r.indices),
            line("bound on dim Z", &|r| r.bound),
            line("dim N", &|r| r.relations),
        ]
        .join("\n")
    };
    cfg.emit(&text)?;
    Ok(Outcome::Done)
}

fn verify(cfg: &Config, weight: usize, file: Option<&PathBuf>) -> anyhow::Result<Outcome> {
    check_weight(weight)?;
    let ctx = cfg.float_context()?;
    let mut summaries: Vec<CheckSummary> = Vec::new();
    let basis = match file {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            RelationBasis::from_json(&text)?
        }
        None => {
            let mut gens = Generators::new();
            summaries.extend(check_generators(&mut gens, weight, cfg.hbar_lifts, &ctx)?);
            relation_basis(&mut gens, weight, cfg.hbar_lifts)?
        }
    };
    summaries.push(check_relations(&basis, &ctx)?);
    if file.is_none() {
        let product_weight = weight.min(5);
        for kind in [ProductKind::Harmonic, ProductKind::Shuffle] {
            summaries.push(check_product_theorem(kind, product_weight, &ctx)?);
        }
    }
    let ok = summaries.iter().all(CheckSummary::ok);
    let text = if cfg.json {
        let families: Vec<_> = summaries
            .iter()
            .map(|s| {
                json!({
                    "family": s.family,
                    "checked": s.checked,
                    "max_defect": s.max_defect,
                    "failures": s.failures,
                })
            })
            .collect();
        serde_json::to_string_pretty(&json!({ "ok": ok, "checks": families }))?
    } else {
        summaries.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
    };
    cfg.emit(&text)?;
    Ok(if ok { Outcome::Done } else { Outcome::Failed })
}

fn hoffman(cfg: &Config, index: &str) -> anyhow::Result<Outcome> {
    let k = Index::parse(index)?;
    let e = gen_hoffman(&k)?;
    if cfg.json {
        cfg.emit(&json!({ "index": k.to_string(), "relation": e.to_string() }).to_string())?;
    } else {
        cfg.emit(&e.to_string())?;
    }
    Ok(Outcome::Done)
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let q = parse_rational(&cli.q).context("parsing --q")?;
    if q <= Rational::from_integer(0.into()) || q >= Rational::from_integer(1.into()) {
        bail!("--q must lie strictly between 0 and 1, got {q}");
    }
    if cli.n < 10 {
        bail!("--N must be at least 10, got {}", cli.n);
    }
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        bail!("--tol must be positive, got {}", cli.tol);
    }
    let cfg = Config {
        q,
        n: cli.n,
        tol: cli.tol,
        hbar_lifts: !cli.no_hbar_lifts,
        json: cli.json,
        out: cli.out,
    };
    match &cli.command {
        Command::Product { kind, left, right } => product(&cfg, *kind, left, right),
        Command::Eval { expr, exact } => eval(&cfg, expr, None, *exact),
        Command::Polylog { expr, t, exact } => eval(&cfg, expr, Some(t), *exact),
        Command::Relations { weight } => relations(&cfg, *weight),
        Command::Dims { max_weight } => dims(&cfg, *max_weight),
        Command::Verify { weight, relations } => verify(&cfg, *weight, relations.as_ref()),
        Command::Hoffman { index } => hoffman(&cfg, index),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
