//! The `toric-dvr` command-line tool: JSON in, exact JSON out.

mod input;
mod plot;

pub use input::{
    BuildError, ChartSpec, InputDocument, InputError, DEFAULT_SAMPLE_DENSITY, DEFAULT_SEED,
};
pub use plot::render_svg;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::arith::{format_rational, rat, QMatrix};
use crate::buildings::{link_norm, AdaptedNorm, BuildingError, OLattice, ResidueValuation};
use crate::bundle::{check_morphism, BundleError, ToricBundleData};
use crate::chern::{chern_class, chern_generic, chern_total, ChernError};
use crate::polyhedral::{check_regular_complete, Cell};
use crate::ppoly::{PPClass, PiecewisePoly, Poly};

#[derive(Debug, Parser)]
#[command(name = "toric-dvr", version, about = "Toric vector bundles over a DVR and their Chern classes")]
pub struct Cli {
    /// Residue characteristic, overriding the document's `p`.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long = "sample-density", global = true)]
    pub sample_density: Option<usize>,
    /// Also print human-readable polynomials to stderr.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write the result here instead of stdout (the SVG file for `plot`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the fan axioms, completeness, regularity and chart gluing.
    Validate { input: PathBuf },
    /// Chern class c_i, or the total class.
    Chern {
        input: PathBuf,
        #[arg(long, required_unless_present = "total", conflicts_with = "total")]
        i: Option<usize>,
        #[arg(long)]
        total: bool,
    },
    /// Chern polynomial of the generic fiber on the height-zero fan.
    ChernGeneric {
        input: PathBuf,
        #[arg(long)]
        i: usize,
    },
    /// The lattice and residue charts at a vertex of the height-one complex.
    Restrict {
        input: PathBuf,
        /// Comma-separated coordinates, e.g. `1,0`.
        #[arg(long, allow_hyphen_values = true)]
        vertex: String,
    },
    /// Send a level-one norm to the link of the vertex lattice.
    Link {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        vertex: String,
        #[arg(long)]
        norm: PathBuf,
    },
    /// Decide whether a matrix defines a morphism into another bundle.
    Morphism {
        input: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Draw the height-one complex shaded by the pieces of c_i (n <= 2).
    Plot {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        i: usize,
    },
}

impl Cli {
    /// Like `Cli::try_parse_from`, without needing the clap traits in scope.
    pub fn parse_args<I, T>(args: I) -> Result<Cli, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Cli::try_parse_from(args)
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Chern { .. } => "chern",
            Command::ChernGeneric { .. } => "chern-generic",
            Command::Restrict { .. } => "restrict",
            Command::Link { .. } => "link",
            Command::Morphism { .. } => "morphism",
            Command::Plot { .. } => "plot",
        }
    }

    fn input(&self) -> &Path {
        match self {
            Command::Validate { input }
            | Command::Chern { input, .. }
            | Command::ChernGeneric { input, .. }
            | Command::Restrict { input, .. }
            | Command::Link { input, .. }
            | Command::Morphism { input, .. }
            | Command::Plot { input, .. } => input,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Everything a run produces; `main` only prints it.
#[derive(Debug, Clone, PartialEq)]
pub struct Response {
    pub code: i32,
    pub document: Value,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Math(String, Value),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Input(e) => e.into(),
            BuildError::Fan(e) => Failure::Math(e.to_string(), Value::Null),
            BuildError::Bundle(BundleError::Polyhedral(e)) => {
                Failure::Math(e.to_string(), Value::Null)
            }
            BuildError::Bundle(e) => Failure::Input(e.to_string()),
        }
    }
}

impl From<ChernError> for Failure {
    fn from(e: ChernError) -> Self {
        match e {
            ChernError::IndexOutOfRange { .. } => Failure::Input(e.to_string()),
            ChernError::Bundle(BundleError::NotAVertex(_) | BundleError::ShapeMismatch(_)) => {
                Failure::Input(e.to_string())
            }
            other => Failure::Math(other.to_string(), Value::Null),
        }
    }
}

struct Settings {
    p: u64,
    seed: u64,
    sample_density: usize,
}

impl Settings {
    fn to_json(&self) -> Value {
        json!({"p": self.p, "seed": self.seed, "sample_density": self.sample_density})
    }
}

/// Parses arguments and runs; clap's own errors and help are handled by the caller.
pub fn run(cli: &Cli) -> Response {
    let mut stderr = String::new();
    // p stays 0 until a document has been read
    let mut settings = Settings {
        p: 0,
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
        sample_density: cli.sample_density.unwrap_or(DEFAULT_SAMPLE_DENSITY),
    };
    let result = execute(cli, &mut settings, &mut stderr);
    let command = cli.command.name();
    let (code, mut document) = match result {
        Ok((code, body)) => (code, body),
        Err(Failure::Input(msg)) => {
            stderr.push_str(&format!("error: {msg}\n"));
            (EXIT_INPUT, json!({"status": "input_error", "error": msg}))
        }
        Err(Failure::Math(msg, details)) => {
            stderr.push_str(&format!("failed: {msg}\n"));
            let mut body = json!({"status": "failed", "error": msg});
            if !details.is_null() {
                body["details"] = details;
            }
            (EXIT_MATH, body)
        }
    };
    document["command"] = json!(command);
    if settings.p != 0 {
        document["settings"] = settings.to_json();
    }
    Response {
        code,
        document,
        stderr,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(cli: &Cli, path: &Path, settings: &mut Settings) -> Result<ToricBundleData, Failure> {
    let mut doc = InputDocument::parse(&read(path)?)?;
    if let Some(p) = cli.p {
        input::prime(p)?;
        doc.p = p;
    }
    settings.p = doc.p;
    settings.seed = cli.seed.unwrap_or(doc.seed);
    settings.sample_density = cli.sample_density.unwrap_or(doc.sample_density);
    Ok(doc.to_bundle()?)
}

/// Fan checks and gluing as one JSON report with a `status` field.
pub fn validation_report(e: &ToricBundleData, seed: u64, sample_density: usize) -> (bool, Value) {
    let fan = check_regular_complete(e.fan().fan());
    let gluing = e.validate(seed, sample_density);
    let ok = fan.complete && fan.regular && gluing.passed;
    let report = json!({
        "status": if ok { "ok" } else { "failed" },
        "fan": serde_json::to_value(&fan).expect("serializable"),
        "gluing": serde_json::to_value(&gluing).expect("serializable"),
    });
    (ok, report)
}

fn validation(e: &ToricBundleData, settings: &Settings) -> (bool, Value) {
    validation_report(e, settings.seed, settings.sample_density)
}

fn require_valid(e: &ToricBundleData, settings: &Settings) -> Result<(), Failure> {
    let (ok, report) = validation(e, settings);
    if ok {
        Ok(())
    } else {
        Err(Failure::Math("bundle data did not validate".into(), report))
    }
}

fn execute(
    cli: &Cli,
    settings: &mut Settings,
    stderr: &mut String,
) -> Result<(i32, Value), Failure> {
    let e = load(cli, cli.command.input(), settings)?;
    if let Command::Validate { .. } = cli.command {
        let (ok, report) = validation(&e, settings);
        if cli.pretty {
            stderr.push_str(&format!("validation {}\n", if ok { "passed" } else { "failed" }));
        }
        return Ok((if ok { EXIT_OK } else { EXIT_MATH }, report));
    }
    if let Command::Plot { .. } = cli.command {
        if e.fan().n() > 2 {
            return Err(Failure::Input(format!(
                "plot supports n <= 2, the fan has n = {}",
                e.fan().n()
            )));
        }
    }
    require_valid(&e, settings)?;

    let mut body = match &cli.command {
        Command::Validate { .. } => unreachable!("handled above"),
        Command::Chern { i, total, .. } => {
            let class = if *total {
                chern_total(&e)?
            } else {
                chern_class(&e, i.expect("clap enforces --i or --total"))?
            };
            if cli.pretty {
                pretty_class(&class, stderr);
            }
            let mut body = json!({"class": class_json(&class)});
            if *total {
                body["total"] = json!(true);
            } else {
                body["i"] = json!(i);
            }
            body
        }
        Command::ChernGeneric { i, .. } => {
            let f = chern_generic(&e, *i)?;
            if cli.pretty {
                pretty_fan_poly(&f, stderr);
            }
            json!({"i": i, "pieces": fan_poly_json(&f)})
        }
        Command::Restrict { vertex, .. } => {
            let v = parse_vertex(vertex, e.fan().n())?;
            let res = e.restrict_to_vertex(&v).map_err(|err| Failure::Input(err.to_string()))?;
            let charts: Vec<Value> = res
                .charts
                .iter()
                .map(|c| {
                    json!({
                        "star_cone": res.star.fan().cone(c.star_cone).rays(),
                        "cell": cell_json(e.fan().sigma1().cell(c.cell)),
                        "basis": c.basis.columns(),
                        "u": c.u,
                    })
                })
                .collect();
            if cli.pretty {
                for c in &res.charts {
                    stderr.push_str(&format!(
                        "cone {:?}: residue basis {:?}, characters {:?}\n",
                        res.star.fan().cone(c.star_cone).rays(),
                        c.basis.columns(),
                        c.u
                    ));
                }
            }
            json!({"vertex": v, "lattice": lattice_json(&res.lattice), "charts": charts})
        }
        Command::Link { vertex, norm, .. } => {
            let v = parse_vertex(vertex, e.fan().n())?;
            let res = e.restrict_to_vertex(&v).map_err(|err| Failure::Input(err.to_string()))?;
            let w = parse_norm(&read(norm)?, &e)?;
            let residue = link_norm(&res.lattice, &w).map_err(|err| match err {
                BuildingError::NotInLink | BuildingError::ValuesOutOfRange => {
                    Failure::Math(err.to_string(), Value::Null)
                }
                other => Failure::Input(other.to_string()),
            })?;
            if cli.pretty {
                stderr.push_str(&format!(
                    "residue basis {:?}, values {:?}\n",
                    residue.basis().columns(),
                    residue.values().iter().map(format_rational).collect::<Vec<_>>()
                ));
            }
            json!({
                "vertex": v,
                "lattice": lattice_json(&res.lattice),
                "residue": residue_json(&residue),
            })
        }
        Command::Morphism { target, matrix, .. } => {
            let mut target_settings = Settings {
                p: settings.p,
                seed: settings.seed,
                sample_density: settings.sample_density,
            };
            let t = load_target(cli, target, settings.p, &mut target_settings)?;
            require_valid(&t, settings)?;
            let f = parse_matrix(&read(matrix)?, t.rank(), e.rank())?;
            let report =
                check_morphism(&e, &t, &f).map_err(|err| Failure::Input(err.to_string()))?;
            if cli.pretty {
                stderr.push_str(&format!(
                    "morphism {}\n",
                    if report.holds { "holds" } else { "fails" }
                ));
            }
            let code = if report.holds { EXIT_OK } else { EXIT_MATH };
            let mut body = serde_json::to_value(&report).expect("serializable");
            body["status"] = json!(if report.holds { "ok" } else { "failed" });
            return Ok((code, body));
        }
        Command::Plot { i, .. } => {
            let out = cli
                .out
                .as_ref()
                .ok_or_else(|| Failure::Input("plot needs --out FILE.svg".into()))?;
            let class = chern_class(&e, *i)?;
            fs::write(out, render_svg(&class))
                .map_err(|err| Failure::Input(format!("{}: {err}", out.display())))?;
            json!({"i": i, "out": out.display().to_string()})
        }
    };
    body["status"] = json!("ok");
    Ok((EXIT_OK, body))
}

fn load_target(
    cli: &Cli,
    path: &Path,
    p: u64,
    settings: &mut Settings,
) -> Result<ToricBundleData, Failure> {
    let t = load(cli, path, settings)?;
    if settings.p != p {
        return Err(Failure::Input(format!(
            "target uses p = {}, source uses p = {p}",
            settings.p
        )));
    }
    Ok(t)
}

/// `"1,0"`, `"-1"` or `"[1,0]"`.
fn parse_vertex(text: &str, n: usize) -> Result<Vec<i64>, Failure> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    let v = inner
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::Input(format!("cannot parse vertex {text:?}")))?;
    if v.len() != n {
        return Err(Failure::Input(format!(
            "vertex {text:?} has {} coordinates, expected {n}",
            v.len()
        )));
    }
    Ok(v)
}

/// `{"level": "1/1", "basis": [vectors], "values": [...]}`; the level defaults to 1.
fn parse_norm(text: &str, e: &ToricBundleData) -> Result<AdaptedNorm, Failure> {
    let v = input::parse_json(text)?;
    let r = e.rank();
    let level = match v.get("level") {
        Some(l) => input::rational(l, "$.level")?,
        None => rat(1),
    };
    let basis = input::basis_vectors(
        v.get("basis")
            .ok_or_else(|| Failure::Input("$.basis: missing field".into()))?,
        "$.basis",
        r,
    )?;
    let values = input::rational_vector(
        v.get("values")
            .ok_or_else(|| Failure::Input("$.values: missing field".into()))?,
        "$.values",
        r,
    )?;
    AdaptedNorm::new(level, QMatrix::from_columns(basis), values, e.cfg())
        .map_err(|err| Failure::Input(err.to_string()))
}

/// A matrix given as a list of rows.
fn parse_matrix(text: &str, rows: usize, cols: usize) -> Result<QMatrix, Failure> {
    let v = input::parse_json(text)?;
    Ok(QMatrix::from_rows(input::rational_rows(&v, "$", rows, cols)?))
}

/// Sparse monomial list `[[e_1..e_n], "num/den"]`, sorted by exponent vector.
pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!([e, format_rational(c)]))
            .collect(),
    )
}

pub fn poly_from_json(v: &Value, nvars: usize) -> Result<Poly, InputError> {
    let bad = |reason: &str| InputError::SchemaError {
        path: "$".into(),
        reason: reason.into(),
    };
    let terms = v.as_array().ok_or_else(|| bad("expected a monomial list"))?;
    let mut parsed = Vec::with_capacity(terms.len());
    for (k, t) in terms.iter().enumerate() {
        let pair = t
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| bad("expected [exponents, coefficient]"))?;
        let e = pair[0]
            .as_array()
            .ok_or_else(|| bad("expected an exponent list"))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as u32))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| bad("exponents must be non-negative integers"))?;
        parsed.push((e, input::rational(&pair[1], &format!("$[{k}][1]"))?));
    }
    Poly::from_terms(nvars, parsed).map_err(|e| bad(&e.to_string()))
}

fn cell_json(c: &Cell) -> Value {
    json!({"vertices": c.vertices(), "rays": c.rays()})
}

pub fn class_json(class: &PPClass) -> Value {
    let complex = class.complex();
    let vertices: Vec<Value> = class
        .vertices()
        .map(|v| {
            let star = class.star(v).expect("star for every vertex");
            let part = class.part(v).expect("part for every vertex");
            let pieces: Vec<Value> = star
                .fan()
                .maximal_indices()
                .iter()
                .map(|&c| {
                    json!({
                        "cone": star.fan().cone(c).rays(),
                        "cell": cell_json(complex.cell(star.cell_of_cone(c))),
                        "poly": poly_to_json(part.piece(c).expect("piece on maximal cone")),
                    })
                })
                .collect();
            json!({"vertex": v, "pieces": pieces})
        })
        .collect();
    json!({"degree": class.degree(), "vertices": vertices})
}

pub fn fan_poly_json(f: &PiecewisePoly) -> Value {
    Value::Array(
        f.pieces()
            .iter()
            .map(|(&c, p)| json!({"cone": f.fan().cone(c).rays(), "poly": poly_to_json(p)}))
            .collect(),
    )
}

fn lattice_json(l: &OLattice) -> Value {
    let basis: Vec<Vec<String>> = l
        .basis()
        .columns()
        .iter()
        .map(|c| c.iter().map(format_rational).collect())
        .collect();
    json!({"basis": basis, "exponents": l.exponents()})
}

fn residue_json(r: &ResidueValuation) -> Value {
    let values: Vec<String> = r.values().iter().map(format_rational).collect();
    json!({"p": r.p(), "basis": r.basis().columns(), "values": values})
}

fn pretty_class(class: &PPClass, out: &mut String) {
    for v in class.vertices() {
        let star = class.star(v).expect("star");
        let part = class.part(v).expect("part");
        for &c in star.fan().maximal_indices() {
            out.push_str(&format!(
                "vertex {:?}, cone {:?}: {}\n",
                v,
                star.fan().cone(c).rays(),
                part.piece(c).expect("piece")
            ));
        }
    }
}

fn pretty_fan_poly(f: &PiecewisePoly, out: &mut String) {
    for (&c, p) in f.pieces() {
        out.push_str(&format!("cone {:?}: {}\n", f.fan().cone(c).rays(), p));
    }
}

/// Entry point shared by the binary: parse `args`, run, print, return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::parse_args(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let response = run(&cli);
    let text = serde_json::to_string_pretty(&response.document).expect("serializable") + "\n";
    eprint!("{}", response.stderr);
    match (&cli.out, &cli.command) {
        (Some(path), cmd) if !matches!(cmd, Command::Plot { .. }) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        _ => print!("{text}"),
    }
    response.code
}
