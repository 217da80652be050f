//! `semiclassical`: command-line access to functionals, moments, Stieltjes
//! equations, transformations, recurrences and the family catalog.

mod error;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use error::CliError;
use semiclassical::catalog::{run_entry, run_suite, Catalog, EntryKind, SuiteOptions};
use semiclassical::equation::{default_samples, equation_of, verify_equation, StieltjesEquation};
use semiclassical::exact::{Precision, Ring, Scalar};
use semiclassical::functional::{class_from_counts, moments, pearson_pair, FunctionalSpec, Support};
use semiclassical::hyper::{classify_convergence, ConvergenceClass, HyperSeries};
use semiclassical::orthopoly::{orthogonality_check, recurrence_from_moments};
use semiclassical::transforms::{apply_transform, TransformKind};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "semiclassical", version, about = "Discrete semiclassical functionals of class at most two")]
struct Cli {
    /// Working precision in decimal digits (at least 20).
    #[arg(long, global = true, default_value_t = 50)]
    precision: u32,
    /// Residual and orthogonality tolerance.
    #[arg(long, global = true, default_value = "1e-30")]
    tol: String,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Catalog file to use instead of the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
}

#[derive(Args)]
struct SpecArgs {
    /// FunctionalSpec JSON file, or `-` for stdin.
    #[arg(long, short)]
    input: Option<String>,
    /// Catalog entry id, instantiated at its defaults.
    #[arg(long, conflicts_with = "input")]
    id: Option<String>,
    /// Overrides a catalog parameter, e.g. `--param z=1/3`.
    #[arg(long = "param", value_name = "NAME=VALUE", requires = "id")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Pearson pair, class and convergence of the moment series.
    Classify(SpecArgs),
    /// Moments in the falling-factorial basis.
    Moments {
        #[command(flatten)]
        spec: SpecArgs,
        /// Highest moment index.
        #[arg(long, default_value_t = 8)]
        max: usize,
    },
    /// Derives the Stieltjes difference equation.
    StieltjesXi(SpecArgs),
    /// Checks the Stieltjes equation at sample points; exit 1 on failure.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Comma separated sample points.
        #[arg(long)]
        samples: Option<String>,
        /// Equation JSON to check instead of the derived one.
        #[arg(long)]
        equation: Option<String>,
    },
    /// Applies one transform or a list of transforms.
    Transform {
        #[command(flatten)]
        spec: SpecArgs,
        /// Transform JSON (inline or file path), e.g. `{"kind":"uvarov","omega":"0","M":"1"}`.
        #[arg(long)]
        transform: String,
        #[arg(long, default_value_t = 6)]
        max: usize,
    },
    /// Three-term recurrence from the moments.
    Recurrence {
        #[command(flatten)]
        spec: SpecArgs,
        /// Number of recurrence coefficients K (at most 12).
        #[arg(long, default_value_t = 6)]
        degree: usize,
        /// Also report the Gram matrix of p_0..p_K.
        #[arg(long)]
        check: bool,
    },
    /// The built-in family catalog.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    Show { id: String },
    /// Runs the regression suite, or one entry of it.
    Suite {
        #[arg(long)]
        entry: Option<String>,
    },
}

struct Config {
    prec: Precision,
    tol: Scalar,
    catalog: Option<Catalog>,
}

impl Config {
    fn from_cli(cli: &Cli) -> Result<Config, CliError> {
        if cli.precision < 20 {
            return Err(CliError::input("InvalidArgument", "precision must be at least 20 digits"));
        }
        let tol: Scalar = cli.tol.parse().map_err(|_| CliError::input("InvalidArgument", "tolerance is not a number"))?;
        if tol.signum() <= 0 {
            return Err(CliError::input("InvalidArgument", "tolerance must be positive"));
        }
        let catalog = match &cli.catalog {
            Some(path) => Some(Catalog::from_json(&read_source(&path.to_string_lossy())?)?),
            None => None,
        };
        Ok(Config { prec: Precision::digits(cli.precision), tol, catalog })
    }

    fn catalog(&self) -> &Catalog {
        self.catalog.as_ref().unwrap_or_else(|| Catalog::builtin())
    }
}

fn read_source(source: &str) -> Result<String, CliError> {
    if source == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::input("Io", e.to_string()))?;
        return Ok(s);
    }
    std::fs::read_to_string(source).map_err(|e| CliError::input("Io", format!("{source}: {e}")))
}

/// Inline JSON when the argument looks like JSON, otherwise a path.
fn read_json_arg(arg: &str) -> Result<String, CliError> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        read_source(arg)
    }
}

fn load_spec(args: &SpecArgs, cfg: &Config) -> Result<FunctionalSpec, CliError> {
    match (&args.input, &args.id) {
        (_, Some(id)) => {
            let mut assignments = BTreeMap::new();
            for p in &args.params {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| CliError::input("InvalidArgument", format!("expected NAME=VALUE, got `{p}`")))?;
                let v: Scalar =
                    v.parse().map_err(|_| CliError::input("InvalidArgument", format!("`{v}` is not a number")))?;
                assignments.insert(k.trim().to_string(), v);
            }
            Ok(cfg.catalog().instantiate(id, &assignments)?.spec)
        }
        (Some(src), None) => {
            let text = read_source(src)?;
            serde_json::from_str::<Value>(&text).map_err(|e| CliError::input("InvalidJson", e.to_string()))?;
            Ok(FunctionalSpec::from_json(&text)?)
        }
        (None, None) => Err(CliError::input("InvalidArgument", "give --input <file|-> or --id <catalog id>")),
    }
}

fn poly_json(p: &semiclassical::exact::Poly<Scalar>, var: &str) -> Value {
    json!({ "coeffs": p.coeffs(), "text": p.render(var, |c| c.to_string()) })
}

fn convergence_json(spec: &FunctionalSpec) -> Value {
    if let Some(end) = spec.support_end() {
        return json!({ "kind": "finite", "terms": end + 1 });
    }
    let one = Scalar::from(1);
    let h = HyperSeries::new(spec.a.clone(), spec.b.iter().map(|b| b.clone() + one.clone()).collect(), spec.z.clone());
    match classify_convergence(&h) {
        ConvergenceClass::Entire => json!({ "kind": "entire" }),
        ConvergenceClass::UnitDisk { gamma } => json!({ "kind": "unit_disk", "gamma": gamma, "z": spec.z }),
        ConvergenceClass::Terminating { degree } => json!({ "kind": "terminating", "degree": degree }),
        ConvergenceClass::Divergent => json!({ "kind": "divergent" }),
    }
}

fn classify(spec: &FunctionalSpec) -> Result<Value, CliError> {
    let pair = pearson_pair(spec)?;
    let (a, b) = spec.reduced_parameters();
    let plain = spec.masses.is_empty() && matches!(spec.support, Support::Infinite);
    Ok(json!({
        "class": pair.class(),
        "class_from_counts": plain.then(|| class_from_counts(a.len(), b.len(), &spec.z)),
        "pearson_pair": {
            "eta": poly_json(&pair.eta, "x"),
            "sigma": poly_json(&pair.sigma, "x"),
            "sigma_shift": poly_json(&pair.sigma_shift(), "x"),
            "start": pair.start,
            "coprime": pair.is_coprime(),
        },
        "nu0_convergence": convergence_json(spec),
    }))
}

fn equation_json(eq: &StieltjesEquation) -> Value {
    json!({
        "class": eq.class(),
        "sigma_shift": poly_json(&eq.sigma_shift, "t"),
        "eta": poly_json(&eq.eta, "t"),
        "xi": poly_json(&eq.xi, "t"),
        "xi_symbolic": eq.xi_symbolic,
        "basis_shift": eq.basis_shift,
    })
}

/// Reads an equation either in the library's serde shape or as printed by
/// `stieltjes-xi`, where each polynomial is `{"coeffs": [...], "text": ...}`.
fn parse_equation(text: &str) -> Result<StieltjesEquation, CliError> {
    let mut v: Value = serde_json::from_str(text).map_err(|e| CliError::input("InvalidJson", e.to_string()))?;
    if let Value::Object(map) = &mut v {
        map.remove("class");
        for key in ["sigma_shift", "eta", "xi"] {
            if let Some(coeffs) = map.get_mut(key).and_then(|p| p.get_mut("coeffs")).map(Value::take) {
                map.insert(key.to_string(), coeffs);
            }
        }
    }
    serde_json::from_value(v).map_err(|e| CliError::input("InvalidJson", e.to_string()))
}

fn parse_samples(list: &str) -> Result<Vec<Scalar>, CliError> {
    list.split(',')
        .map(|s| s.trim().parse().map_err(|_| CliError::input("InvalidArgument", format!("bad sample `{s}`"))))
        .collect()
}

fn parse_transforms(text: &str) -> Result<Vec<TransformKind>, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::input("InvalidJson", e.to_string()))?;
    let items = match v {
        Value::Array(items) => items,
        one => vec![one],
    };
    items
        .into_iter()
        .map(|i| serde_json::from_value(i).map_err(|e| CliError::input("InvalidJson", e.to_string())))
        .collect()
}

/// The command's JSON body and whether it counts as a PASS.
fn run(cli: &Cli, cfg: &Config) -> Result<(Value, bool), CliError> {
    let prec = cfg.prec;
    match &cli.command {
        Command::Classify(args) => Ok((classify(&load_spec(args, cfg)?)?, true)),
        Command::Moments { spec, max } => {
            let spec = load_spec(spec, cfg)?;
            let table = moments(&spec, *max, prec)?;
            Ok((json!({ "basis_shift": table.basis_shift, "moments": table.moments, "exact": table.exactness() }), true))
        }
        Command::StieltjesXi(args) => Ok((equation_json(&equation_of(&load_spec(args, cfg)?, prec)?), true)),
        Command::Verify { spec, samples, equation } => {
            let spec = load_spec(spec, cfg)?;
            let eq = match equation {
                Some(src) => parse_equation(&read_json_arg(src)?)?,
                None => equation_of(&spec, prec)?,
            };
            let ts = match samples {
                Some(list) => parse_samples(list)?,
                None => default_samples(&spec),
            };
            let report = verify_equation(&spec, &eq, &ts, &cfg.tol, prec)?;
            let exact = report.samples.iter().all(|s| s.residual.is_exact() && s.residual.is_zero());
            let body = json!({ "pass": report.pass, "exact": exact, "samples": report.samples, "tol": cfg.tol });
            Ok((body, report.pass))
        }
        Command::Transform { spec, transform, max } => {
            let mut spec = load_spec(spec, cfg)?;
            for kind in parse_transforms(&read_json_arg(transform)?)? {
                spec = apply_transform(&spec, &kind, prec)?;
            }
            let table = moments(&spec, *max, prec)?;
            let eq = equation_of(&spec, prec)?;
            let body = json!({
                "spec": spec,
                "moments": { "basis_shift": table.basis_shift, "moments": table.moments },
                "equation": equation_json(&eq),
            });
            Ok((body, true))
        }
        Command::Recurrence { spec, degree, check } => {
            let spec = load_spec(spec, cfg)?;
            let nu = moments(&spec, (2 * degree).max(1) - 1, prec)?;
            let rec = recurrence_from_moments(&nu, *degree)?;
            let mut body = json!({ "alpha": rec.alpha, "beta": rec.beta });
            let mut pass = true;
            if *check {
                let report = orthogonality_check(&spec, &rec, *degree, &cfg.tol, prec)?;
                pass = report.pass;
                body["orthogonality"] = serde_json::to_value(&report).map_err(CliError::internal)?;
            }
            Ok((body, pass))
        }
        Command::Catalog { command } => run_catalog(command, cfg),
    }
}

fn run_catalog(command: &CatalogCommand, cfg: &Config) -> Result<(Value, bool), CliError> {
    let catalog = cfg.catalog();
    let opts = SuiteOptions { prec: cfg.prec, ..SuiteOptions::default() };
    match command {
        CatalogCommand::List => {
            let rows: Vec<Value> = catalog
                .entries
                .iter()
                .map(|e| json!({ "id": e.id, "kind": e.kind, "class": e.class, "name": e.name }))
                .collect();
            let body = json!({
                "version": catalog.version,
                "canonical": catalog.count(EntryKind::Canonical),
                "subcases": catalog.count(EntryKind::Subcase),
                "entries": rows,
            });
            Ok((body, true))
        }
        CatalogCommand::Show { id } => {
            let entry = catalog.get(id)?;
            Ok((serde_json::to_value(entry).map_err(CliError::internal)?, true))
        }
        CatalogCommand::Suite { entry: Some(id) } => {
            let report = run_entry(catalog, catalog.get(id)?, &opts);
            let pass = report.pass();
            Ok((serde_json::to_value(&report).map_err(CliError::internal)?, pass))
        }
        CatalogCommand::Suite { entry: None } => {
            let report = run_suite(catalog, &opts);
            let pass = report.pass;
            Ok((serde_json::to_value(&report).map_err(CliError::internal)?, pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Config::from_cli(&cli).and_then(|cfg| run(&cli, &cfg));
    match result {
        Ok((body, pass)) => {
            render::emit(&body, cli.output == Output::Table);
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => {
            render::emit(&e.body(), cli.output == Output::Table);
            ExitCode::from(e.exit_code())
        }
    }
}
