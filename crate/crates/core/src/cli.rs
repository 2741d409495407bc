//! The `lagcat` command line.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on malformed input.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::composition::{compose_bruteforce, compose_formula_detailed, Correspondence};
use crate::error::{Error, Result};
use crate::field_theory;
use crate::io::{read_json, LagrangianJson, LagrangianInput, PolarizedJson, Repr};
use crate::lagrangian;
use crate::linalg::{Field, Tolerances};
use crate::polarization::{classify_morphism, compose_in_category, morphism_residuals, PolarizedSpace};
use crate::sequence;
use crate::sweep::{self, SweepConfig, SweepKind};

#[derive(Parser, Debug)]
#[command(name = "lagcat", version, about = "Lagrangian correspondences and their composition")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Projection tolerance; overrides LAGCAT_TOL.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the produced object (composition, conversion) to this path.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a Lagrangian JSON file describes a (sub-)Lagrangian.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compose two correspondences `left: V0 → V1` and `right: V1 → V2`.
    Compose {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// Compose two morphisms between polarized spaces.
    CatCompose {
        #[command(flatten)]
        spaces: ThreeSpaces,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, default_value_t = f64::INFINITY)]
        threshold: f64,
    },
    /// Classify a correspondence between polarized spaces as type (1) and/or (2).
    Classify {
        #[arg(long)]
        p0: PathBuf,
        #[arg(long)]
        p1: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = f64::INFINITY)]
        threshold: f64,
    },
    /// Convert a correspondence between its `u` and `T` descriptions.
    Convert {
        #[arg(value_enum)]
        direction: Direction,
        #[arg(long)]
        input: PathBuf,
    },
    /// Index of the reference sub-Lagrangian of a polarized space.
    Index {
        #[arg(long)]
        input: PathBuf,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
    /// Seeded randomized property sweep.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct ThreeSpaces {
    #[arg(long)]
    p0: PathBuf,
    #[arg(long)]
    p1: PathBuf,
    #[arg(long)]
    p2: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Formula,
    Bruteforce,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    UToT,
    TToU,
}

#[derive(Subcommand, Debug)]
pub enum Demo {
    /// Glue two cylinders and compare with the longer one.
    Cylinder {
        #[arg(long, default_value_t = 0.5)]
        l1: f64,
        #[arg(long, default_value_t = 0.7)]
        l2: f64,
        #[arg(long, default_value_t = 16)]
        modes: usize,
        #[arg(long, default_value_t = 1)]
        multiplicity: usize,
    },
    /// Composition of `graph(T_α1)` and `graph(T_α2)`.
    Counterexample {
        #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
        alpha1: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
        alpha2: f64,
    },
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(value_enum, default_value_t = SweepKind::Compose)]
    kind: SweepKind,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    /// Largest graded dimension.
    #[arg(long, default_value_t = 8)]
    dims: usize,
    /// Restrict to one field; alternate when absent.
    #[arg(long, value_parser = parse_field)]
    field: Option<Field>,
}

fn parse_field(s: &str) -> std::result::Result<Field, String> {
    match s {
        "R" | "r" | "real" => Ok(Field::Real),
        "C" | "c" | "complex" => Ok(Field::Complex),
        _ => Err(format!("unknown field {s:?}; use R or C")),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
    #[serde(skip)]
    flag: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
            flag: false,
        }
    }

    fn flag(name: &str, ok: bool) -> Self {
        Check {
            name: name.into(),
            value: if ok { 0.0 } else { 1.0 },
            threshold: 0.0,
            passed: ok,
            flag: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub data: Value,
}

impl Report {
    fn new(command: &str, checks: Vec<Check>, data: Value) -> Self {
        Report {
            command: command.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
            data,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Text => {
                let mut s = format!("{}: {}\n", self.command, if self.passed { "PASS" } else { "FAIL" });
                for c in &self.checks {
                    let mark = if c.passed { "pass" } else { "FAIL" };
                    if c.flag {
                        s += &format!("  [{mark}] {}\n", c.name);
                    } else {
                        s += &format!("  [{mark}] {} = {:.3e} (threshold {:.3e})\n", c.name, c.value, c.threshold);
                    }
                }
                if let Value::Object(map) = &self.data {
                    for (k, v) in map {
                        if !v.is_array() && !v.is_object() {
                            s += &format!("  {k}: {v}\n");
                        }
                    }
                }
                s
            }
        }
    }
}

/// Exit status for an error: malformed input is 2, anything else is a failed check.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Malformed(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::DimensionMismatch(_)
        | Error::FieldMismatch { .. }
        | Error::DegreeMismatch(..)
        | Error::NotAModule(_) => 2,
        _ => 1,
    }
}

fn write_output(path: &Option<PathBuf>, value: &impl Serialize) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, serde_json::to_string_pretty(value)? + "\n")?;
    }
    Ok(())
}

fn load_lagrangian(path: &Path, tol: &Tolerances) -> Result<LagrangianInput> {
    read_json::<LagrangianJson>(path)?.decode(tol)
}

fn load_corr(path: &Path, tol: &Tolerances) -> Result<Correspondence> {
    load_lagrangian(path, tol)?.correspondence(tol)
}

fn load_polarized(path: &Path, tol: &Tolerances) -> Result<PolarizedSpace> {
    read_json::<PolarizedJson>(path)?.decode(tol)
}

fn check(input: &LagrangianInput, tol: &Tolerances) -> Result<Report> {
    let ambient = input.ambient()?;
    let frame = input.frame(tol)?;
    let isotropy = lagrangian::isotropy_residual(&ambient, &frame);
    let mut checks = vec![Check::at_most("isotropy", isotropy, tol.proj)];
    let mut data = json!({
        "repr": input.repr,
        "ambient": [ambient.dim_plus(), ambient.dim_minus()],
        "dim": frame.dim(),
    });
    if isotropy <= tol.proj {
        let class = lagrangian::classify(&ambient, &frame, tol)?;
        data["kind"] = json!(format!("{:?}", class.kind));
        data["defect_dim"] = json!(class.defect_dim);
        checks.push(Check::flag("lagrangian", class.defect_dim == 0));
    }
    if input.repr == Repr::GraphT {
        let (r, thr) =
            lagrangian::lagrangian_graph_residual(&input.matrix, &input.space0, input.space1.as_ref().unwrap(), tol)?;
        checks.push(Check::at_most("graph_T_residual", r, thr));
    }
    if ambient.degree() > 0 {
        checks.push(Check::at_most("clifford_invariance", ambient.invariance_residual(&frame), tol.proj));
    }
    Ok(Report::new("check", checks, data))
}

fn compose(cli: &Cli, left: &Path, right: &Path, method: Method, tol: &Tolerances) -> Result<Report> {
    let l01 = load_corr(left, tol)?;
    let l12 = load_corr(right, tol)?;
    let mut checks = Vec::new();
    let mut data = json!({});
    let result = match method {
        Method::Bruteforce => {
            let f = compose_bruteforce(&l01, &l12, tol)?;
            Correspondence::from_frame(l01.v0(), l12.v1(), &f, tol)?
        }
        Method::Formula | Method::Both => {
            let f = compose_formula_detailed(&l01, &l12, tol.rank_cutoff, tol)?;
            data["method"] = json!(f.method);
            data["gap"] = json!(f.gap);
            checks.push(Check::at_most("unitarity", f.unitarity_residual, tol.proj));
            if method == Method::Both {
                let b = compose_bruteforce(&l01, &l12, tol)?;
                checks.push(Check::at_most("formula_vs_bruteforce", f.result.frame().distance(&b), 1e-8));
            }
            f.result
        }
    };
    let space = result.space();
    checks.push(Check::at_most(
        "isotropy",
        lagrangian::isotropy_residual(&space, result.frame()),
        tol.proj,
    ));
    let out = LagrangianJson::from_correspondence(&result, Repr::GraphU, tol)?;
    write_output(&cli.output, &out)?;
    data["result"] = serde_json::to_value(&out)?;
    Ok(Report::new("compose", checks, data))
}

fn run_command(cli: &Cli, tol: &Tolerances) -> Result<Report> {
    match &cli.command {
        Command::Check { input } => check(&load_lagrangian(input, tol)?, tol),
        Command::Compose { left, right, method } => compose(cli, left, right, *method, tol),
        Command::CatCompose {
            spaces,
            left,
            right,
            threshold,
        } => {
            let p0 = load_polarized(&spaces.p0, tol)?;
            let p1 = load_polarized(&spaces.p1, tol)?;
            let p2 = load_polarized(&spaces.p2, tol)?;
            let (c01, c12) = (load_corr(left, tol)?, load_corr(right, tol)?);
            let r = compose_in_category(&p0, &p1, &p2, &c01, &c12, *threshold, tol.rank_cutoff, tol)?;
            let out = LagrangianJson::from_correspondence(&r.result, Repr::GraphU, tol)?;
            write_output(&cli.output, &out)?;
            let data = json!({
                "case": [r.case.0, r.case.1],
                "output_type": r.output.name(),
                "method": r.method,
                "gap": r.gap,
                "result": out,
            });
            Ok(Report::new("cat-compose", vec![Check::flag("output_type", true)], data))
        }
        Command::Classify {
            p0,
            p1,
            input,
            threshold,
        } => {
            let (p0, p1) = (load_polarized(p0, tol)?, load_polarized(p1, tol)?);
            let c = load_corr(input, tol)?;
            let m = classify_morphism(&p0, &p1, &c, *threshold, tol)?;
            let r = morphism_residuals(&p0, &p1, &c)?;
            let data = json!({ "type": m.name(), "residuals": r });
            Ok(Report::new(
                "classify",
                vec![Check::flag("is_morphism", m.dispatch().is_some())],
                data,
            ))
        }
        Command::Convert { direction, input } => {
            let inp = load_lagrangian(input, tol)?;
            let (expected, target) = match direction {
                Direction::UToT => (Repr::GraphU, Repr::GraphT),
                Direction::TToU => (Repr::GraphT, Repr::GraphU),
            };
            if inp.repr != expected {
                return Err(Error::Malformed(format!("expected repr {expected:?}, found {:?}", inp.repr)));
            }
            let c = inp.correspondence(tol)?;
            let out = LagrangianJson::from_correspondence(&c, target, tol)?;
            write_output(&cli.output, &out)?;
            Ok(Report::new("convert", Vec::new(), json!({ "result": out })))
        }
        Command::Index { input } => {
            let p = load_polarized(input, tol)?;
            let idx = crate::clifford::sublagrangian_index(p.reference(), tol)?;
            let data = json!({
                "degree": idx.degree,
                "field": idx.field,
                "group": idx.group.to_string(),
                "value": idx.value,
                "class": idx.to_string(),
            });
            Ok(Report::new("index", Vec::new(), data))
        }
        Command::Demo { demo } => match demo {
            Demo::Cylinder {
                l1,
                l2,
                modes,
                multiplicity,
            } => {
                let d = field_theory::demo_cylinder(*l1, *l2, *modes, *multiplicity, tol)?;
                let mut checks: Vec<Check> = d
                    .glue
                    .iter()
                    .map(|g| Check::at_most("glue_distance", g.dense_distance, 1e-9))
                    .collect();
                checks.push(Check::flag(
                    "glue_symbols",
                    d.glue.iter().all(|g| g.structured_exact != Some(false)),
                ));
                checks.push(Check::flag("type2_close", d.type2.iter().all(|c| c.close)));
                checks.push(Check::at_most("isotropy", d.isotropy_residual, 1e-9));
                checks.push(Check::at_most("truncated_graph_residual", d.lagrangian_residual, 1e-9));
                Ok(Report::new("demo cylinder", checks, serde_json::to_value(&d)?))
            }
            Demo::Counterexample { alpha1, alpha2 } => {
                let d = sequence::demo_counterexample(*alpha1, *alpha2, tol)?;
                Ok(Report::new("demo counterexample", Vec::new(), serde_json::to_value(&d)?))
            }
        },
        Command::Sweep(args) => {
            let config = SweepConfig {
                kind: args.kind,
                seed: args.seed,
                cases: args.cases,
                max_dim: args.dims,
                field: args.field,
                tol: *tol,
            };
            let r = sweep::run(&config);
            write_output(&cli.output, &r)?;
            let checks = vec![
                Check::at_most("max_residual", r.max_residual, sweep::threshold(args.kind)),
                Check::flag("no_failures", r.failed == 0),
            ];
            Ok(Report::new("sweep", checks, serde_json::to_value(&r)?))
        }
    }
}

/// Runs a parsed command line; returns the rendered report and exit status.
pub fn run(cli: &Cli) -> (String, i32) {
    let mut tol = Tolerances::from_env();
    if let Some(t) = cli.tol {
        tol.proj = t;
    }
    match run_command(cli, &tol) {
        Ok(report) => {
            let code = if report.passed { 0 } else { 1 };
            (report.render(cli.format), code)
        }
        Err(e) => {
            let code = exit_code(&e);
            let msg = match cli.format {
                Format::Json => serde_json::to_string_pretty(&json!({"error": e.to_string(), "exit": code})).unwrap() + "\n",
                Format::Text => format!("error: {e}\n"),
            };
            (msg, code)
        }
    }
}

pub fn main_from_args() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (out, code) = run(&cli);
    if code == 2 && cli.format == Format::Text {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    code
}
