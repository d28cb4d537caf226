//! Command-line driver. Every command reads one manifest and prints one
//! report. Exit codes: 0 pass, 1 mathematical failure, 2 usage or resource
//! error.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::bracket::{check_dgla, maurer_cartan_residual};
use crate::cohomology::{cohomology, DEFAULT_COCHAIN_CAP};
use crate::deform::{
    check_deformation, extend, nijenhuis_elements, nijenhuis_report, obstruction,
    rigidity_certificate,
};
use crate::enumerate::{resolve_jobs, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::leibniz::{
    validate_leibniz, validate_leibniz_g_rep, validate_representation, LeibnizGRep,
};
use crate::manifest::{parse_manifest_in, Manifest};
use crate::post::{from_rbo, total_algebra, validate_post_leibniz, PostLeibnizAlgebra};
use crate::rbo::{check_weighted_relative_rbo, graph_check, induced_algebra, WeightedRBO};
use crate::report::{
    format_bilinear, format_matrix, format_multimap, format_tuple, Format, Report, Status,
};
use crate::search::search_rbos;
use crate::tensor::LinearMap;
use crate::validation::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    CheckRbo,
    GraphCheck,
    Induced,
    Cohomology,
    McResidual,
    DglaCheck,
    DeformCheck,
    Obstruct,
    Extend,
    Nijenhuis,
    Rigidity,
    PostValidate,
    PostFromRbo,
    Total,
    Search,
}

impl Command {
    fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "lrb",
    version,
    about = "Exact checks for weighted Rota-Baxter operators between Leibniz algebras"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Manifest file (`.lra`).
    pub manifest: PathBuf,
    /// Reinterpret the manifest over `rational` or `gf P` (also `gfP`).
    #[arg(long)]
    pub field: Option<String>,
    /// Weight λ: a literal or a scalar name. Defaults to 0.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
    /// Size cap for cochain spaces and enumerations.
    #[arg(long)]
    pub cap: Option<u128>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Worker threads for enumerations (default: LRA_JOBS, else all CPUs).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Algebra name; selects its adjoint context.
    #[arg(long)]
    pub algebra: Option<String>,
    #[arg(long)]
    pub context: Option<String>,
    /// A map name, `id` or `zero`.
    #[arg(long, default_value = "zero")]
    pub operator: String,
    #[arg(long)]
    pub deformation: Option<String>,
    #[arg(long)]
    pub post: Option<String>,
    /// Coordinates of x0, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// 1 for mathematical failures, 2 for usage and resource problems.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidOperator(_)
        | Error::InvalidDeformation(_)
        | Error::InvalidInput(_)
        | Error::NotInvertible
        | Error::NotAdjointContext
        | Error::ContainmentViolated(_)
        | Error::OracleDisagreement(_)
        | Error::StructureIncompatible(_)
        | Error::WrongWeight(_)
        | Error::BaseMismatch => 1,
        _ => 2,
    }
}

fn parse_field(text: &str) -> Result<FieldSpec> {
    let t = text.trim();
    if t == "rational" || t == "q" || t == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    let digits = t.strip_prefix("gf").unwrap_or(t).trim();
    let p: u64 = digits
        .parse()
        .map_err(|_| Error::Usage(format!("unknown field `{text}`")))?;
    FieldSpec::prime(p)
}

/// Parses and runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Machine => Format::Machine,
    };
    match execute(cli) {
        Ok(report) => {
            let code = if report.status == Status::Pass { 0 } else { 1 };
            Outcome {
                code,
                stdout: report.render(format),
                stderr: String::new(),
            }
        }
        Err(e) => {
            let mut report = Report::new(&cli.command.name());
            report.status = Status::Error;
            report.push("error", &e);
            let stdout = if format == Format::Machine {
                report.render(format)
            } else {
                String::new()
            };
            Outcome {
                code: exit_code(&e),
                stdout,
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

struct Session<'a> {
    cli: &'a Cli,
    manifest: Manifest,
}

fn only<'m, V>(kind: &str, map: &'m std::collections::BTreeMap<String, V>) -> Result<&'m str> {
    let mut keys = map.keys();
    match (keys.next(), keys.next()) {
        (Some(k), None) => Ok(k),
        _ => Err(Error::Usage(format!(
            "the manifest has {} {kind}s; name one with --{kind}",
            map.len()
        ))),
    }
}

impl Session<'_> {
    fn context(&self) -> Result<(String, LeibnizGRep)> {
        let m = &self.manifest;
        match (&self.cli.context, &self.cli.algebra) {
            (Some(c), _) => Ok((c.clone(), m.context(c)?)),
            (None, Some(a)) => Ok((format!("adjoint {a}"), LeibnizGRep::adjoint(m.algebra(a)?))),
            (None, None) => {
                if m.contexts.len() == 1 {
                    let c = only("context", &m.contexts)?;
                    return Ok((c.to_string(), m.context(c)?));
                }
                let a = only("algebra", &m.algebras)?;
                Ok((format!("adjoint {a}"), LeibnizGRep::adjoint(m.algebra(a)?)))
            }
        }
    }

    fn weight(&self) -> Result<Scalar> {
        match &self.cli.weight {
            Some(w) => self.manifest.scalar(w),
            None => Ok(self.manifest.field.zero()),
        }
    }

    fn operator(&self, report: &mut Report) -> Result<WeightedRBO> {
        let (name, d) = self.context()?;
        let weight = self.weight()?;
        let field = d.field();
        let t = match self.cli.operator.as_str() {
            "zero" => LinearMap::zero(field, d.h_dim(), d.g_dim()),
            "id" => {
                if d.g_dim() != d.h_dim() {
                    return Err(Error::shape("`id` needs equal dimensions"));
                }
                LinearMap::identity(field, d.g_dim())
            }
            other => self.manifest.map(other)?.clone(),
        };
        report.push("context", name);
        report.push("weight", weight.to_plain_string());
        report.push("operator", &self.cli.operator);
        WeightedRBO::new(d, weight, t)
    }

    fn cochain_cap(&self) -> usize {
        self.cli
            .cap
            .map_or(DEFAULT_COCHAIN_CAP, |c| c.min(usize::MAX as u128) as usize)
    }

    fn enumeration_cap(&self) -> u128 {
        self.cli.cap.unwrap_or(DEFAULT_ENUMERATION_CAP)
    }

    fn jobs(&self) -> usize {
        resolve_jobs(self.cli.jobs)
    }

    fn deformation_name(&self) -> Result<String> {
        match &self.cli.deformation {
            Some(d) => Ok(d.clone()),
            None => Ok(only("deformation", &self.manifest.deformations)?.to_string()),
        }
    }

    fn post(&self) -> Result<(String, &PostLeibnizAlgebra)> {
        let name = match &self.cli.post {
            Some(p) => p.clone(),
            None => only("post", &self.manifest.posts)?.to_string(),
        };
        let p = self.manifest.post(&name)?;
        Ok((name, p))
    }
}

fn summarize(report: &mut Report, prefix: &str, v: &ValidationReport) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    report.push(key("checked"), v.checked);
    report.push(key("violations"), v.violations.len());
    if let Some(first) = v.violations.first() {
        report.push(key("first_violation"), first);
    }
    report.require(v.is_valid());
}

fn execute(cli: &Cli) -> Result<Report> {
    let text = std::fs::read_to_string(&cli.manifest)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", cli.manifest.display())))?;
    let field = cli.field.as_deref().map(parse_field).transpose()?;
    let manifest = parse_manifest_in(&text, field)?;
    let s = Session { cli, manifest };
    let mut report = Report::new(&cli.command.name());
    report.push("field", s.manifest.field);
    match cli.command {
        Command::Validate => validate_all(&s, &mut report)?,
        Command::CheckRbo => {
            let r = s.operator(&mut report)?;
            let v = check_weighted_relative_rbo(r.context(), r.weight(), r.map())?;
            summarize(&mut report, "", &v);
        }
        Command::GraphCheck => {
            let r = s.operator(&mut report)?;
            let ok = graph_check(r.context(), r.weight(), r.map())?;
            report.push("graph_subalgebra", ok);
            report.require(ok);
        }
        Command::Induced => {
            let r = s.operator(&mut report)?;
            let a = induced_algebra(&r)?;
            report.push("bracket", format_bilinear(a.structure()));
            let v = validate_leibniz(&a);
            report.push("leibniz", v.is_valid());
            report.require(v.is_valid());
        }
        Command::Cohomology => {
            let r = s.operator(&mut report)?;
            let c = cohomology(&r, cli.max_degree, s.cochain_cap())?;
            for deg in &c.degrees {
                let n = deg.degree;
                report.push(format!("degree.{n}.cochains"), deg.dim_cochains);
                report.push(format!("degree.{n}.cocycles"), deg.dim_cocycles);
                report.push(format!("degree.{n}.coboundaries"), deg.dim_coboundaries);
                report.push(format!("degree.{n}.cohomology"), deg.dim_cohomology);
            }
            let betti: Vec<String> = c.betti().iter().map(ToString::to_string).collect();
            report.push("betti", betti.join(" "));
        }
        Command::McResidual => {
            let r = s.operator(&mut report)?;
            let res = maurer_cartan_residual(r.context(), r.weight(), r.map())?;
            report.push("residual", format_multimap(&res));
            report.require(res.is_zero());
        }
        Command::DglaCheck => {
            let (name, d) = s.context()?;
            let weight = s.weight()?;
            report.push("context", name);
            report.push("weight", weight.to_plain_string());
            report.push("samples", cli.samples);
            report.push("seed", cli.seed);
            let max_arity = cli.max_degree.max(1);
            report.push("max_arity", max_arity);
            let dg = check_dgla(&d, &weight, max_arity, cli.samples, cli.seed)?;
            for (law, checked, failed) in &dg.laws {
                report.push(
                    format!("law.{law}"),
                    format!("{checked} checked, {failed} failed"),
                );
            }
            report.require(dg.passed());
        }
        Command::DeformCheck => {
            let name = s.deformation_name()?;
            let def = s.manifest.deformation(&name)?;
            report.push("deformation", name);
            report.push("order", def.order());
            summarize(&mut report, "", &check_deformation(&def)?);
        }
        Command::Obstruct => {
            let name = s.deformation_name()?;
            let def = s.manifest.deformation(&name)?;
            report.push("deformation", name);
            report.push("order", def.order());
            let class = obstruction(&def, s.cochain_cap())?;
            report.push("ob", format_multimap(&class.ob));
            report.push("coboundary", class.is_coboundary);
            if let Some(w) = &class.witness {
                report.push("witness", format_matrix(w));
            }
            report.require(class.is_coboundary);
        }
        Command::Extend => {
            let name = s.deformation_name()?;
            let def = s.manifest.deformation(&name)?;
            report.push("deformation", name);
            report.push("order", def.order());
            match extend(&def, s.cochain_cap())? {
                Some(next) => {
                    report.push("extensible", true);
                    report.push(
                        format!("T{}", next.order()),
                        format_matrix(&next.coefficients()[next.order()]),
                    );
                }
                None => {
                    report.push("extensible", false);
                    report.require(false);
                }
            }
        }
        Command::Nijenhuis => {
            let r = s.operator(&mut report)?;
            match &cli.x0 {
                Some(text) => {
                    let x0 = text
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|t| !t.is_empty())
                        .map(|t| s.manifest.scalar(t))
                        .collect::<Result<Vec<_>>>()?;
                    report.push("x0", format_tuple(&x0));
                    let v = nijenhuis_report(&r, &x0)?;
                    report.push("nijenhuis", v.is_valid());
                    if !v.is_valid() {
                        report.push("failed_rules", v.failed_rules().join(" "));
                    }
                    report.require(v.is_valid());
                }
                None => {
                    let all = nijenhuis_elements(&r, s.enumeration_cap(), s.jobs())?;
                    report.push("count", all.len());
                    let shown: Vec<String> = all.iter().map(|x| format_tuple(x)).collect();
                    report.push("elements", shown.join(" "));
                }
            }
        }
        Command::Rigidity => {
            let r = s.operator(&mut report)?;
            let cert = rigidity_certificate(&r, s.enumeration_cap(), s.jobs())?;
            report.push("cocycles", cert.cocycle_count);
            report.push("nijenhuis", cert.nijenhuis_count);
            report.push("image", cert.image_count);
            report.push("criterion", cert.holds);
            if let Some(w) = &cert.witness {
                report.push("witness", format_matrix(w));
            }
            report.require(cert.holds);
        }
        Command::PostValidate => {
            let (name, p) = s.post()?;
            report.push("post", name);
            summarize(&mut report, "", &validate_post_leibniz(p));
        }
        Command::PostFromRbo => {
            let r = s.operator(&mut report)?;
            let p = from_rbo(&r)?;
            report.push("lt", format_bilinear(p.lt()));
            report.push("gt", format_bilinear(p.gt()));
            report.push("br", format_bilinear(p.bracket()));
            summarize(&mut report, "", &validate_post_leibniz(&p));
        }
        Command::Total => {
            let (name, p) = s.post()?;
            report.push("post", name);
            let a = total_algebra(p)?;
            report.push("bracket", format_bilinear(a.structure()));
        }
        Command::Search => {
            let (name, d) = s.context()?;
            let weight = s.weight()?;
            report.push("context", name);
            report.push("weight", weight.to_plain_string());
            let res = search_rbos(&d, &weight, s.enumeration_cap(), s.jobs())?;
            report.push("examined", res.examined);
            report.push("count", res.operators.len());
            for (k, t) in res.operators.iter().enumerate() {
                report.push(format!("operator.{}", k + 1), format_matrix(t));
            }
        }
    }
    Ok(report)
}

fn validate_all(s: &Session<'_>, report: &mut Report) -> Result<()> {
    let m = &s.manifest;
    for (name, a) in &m.algebras {
        summarize(report, &format!("algebra.{name}"), &validate_leibniz(a));
    }
    for (name, a) in &m.actions {
        summarize(
            report,
            &format!("actions.{name}"),
            &validate_representation(m.algebra(&a.g)?, &a.pair)?,
        );
    }
    for name in m.contexts.keys() {
        summarize(
            report,
            &format!("context.{name}"),
            &validate_leibniz_g_rep(&m.context(name)?),
        );
    }
    for name in m.deformations.keys() {
        summarize(
            report,
            &format!("deformation.{name}"),
            &check_deformation(&m.deformation(name)?)?,
        );
    }
    for (name, p) in &m.posts {
        summarize(report, &format!("post.{name}"), &validate_post_leibniz(p));
    }
    Ok(())
}
