//! Command-line configuration, dispatch, reports and the run manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::arith::{format_rational, parse_rational, ratio, rat, Rational};
use crate::error::{Error, Result};
use crate::identities::{identity_suite, IdentityRanges};
use crate::omega::{
    an_action_check, default_state_cap, eigenvalue_check, grading_check, omega_n, omega_window_check,
    reassociate_behavior_check, reassociate_table_check,
};
use crate::report::{CheckRecord, Verdict};
use crate::verma::{render_matrix, verma_suite, AnModule, VermaWindow};
use crate::voa::{Backend, FockSpace, Voa};
use crate::zhu::{algebra_suite, anti_involution_check, check_window, surjection_check, OnSpan};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILED_CHECKS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    /// Binomial and Laurent identities behind the constructions.
    Identities,
    /// A_n(V) quotient table and algebra axioms.
    Algebra,
    /// A_n(V) -> A_{n-1}(V) and the anti-involution.
    Surjection,
    /// Omega_n of a highest-weight module and the zero-mode action.
    Omega,
    /// Induced module, radical quotient and recovery of U.
    Verma,
    /// The full acceptance suite at its default parameters.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendName {
    Heisenberg,
    Virasoro,
}

/// Everything a run depends on. Rationals are kept as canonical `p/q` text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandName,
    pub backend: BackendName,
    pub c: String,
    pub h: String,
    pub n: u32,
    pub weight_cap: u32,
    pub slack: u32,
    /// Defaults to 4 at `n = 0` and 2 above.
    pub degree_cap: Option<u32>,
    pub depth: u32,
    /// Weight cap for pairwise product checks.
    pub pair_cap: u32,
    /// Degrees of the highest-weight module summed into U; defaults to `0..=n`.
    pub levels: Option<Vec<u32>>,
    pub identities: IdentityRanges,
    pub inconclusive_fails: bool,
    pub output: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: CommandName::All,
            backend: BackendName::Heisenberg,
            c: "1/2".into(),
            h: "2/3".into(),
            n: 1,
            weight_cap: 3,
            slack: 4,
            degree_cap: None,
            depth: 5,
            pair_cap: 2,
            levels: None,
            identities: IdentityRanges::default(),
            inconclusive_fails: false,
            output: None,
            manifest: None,
        }
    }
}

impl RunConfig {
    /// Checks ranges and rewrites rationals canonically.
    pub fn validated(mut self) -> Result<Self> {
        let c = parse_rational(&self.c)?;
        let h = parse_rational(&self.h)?;
        self.c = format_rational(&c);
        self.h = format_rational(&h);
        let bad = |m: String| Err(Error::Config(m));
        if self.n > 4 {
            return bad(format!("n = {} is above the supported maximum 4", self.n));
        }
        if !(1..=6).contains(&self.weight_cap) {
            return bad(format!("weight_cap must lie in 1..=6, got {}", self.weight_cap));
        }
        if self.slack > 8 {
            return bad(format!("slack must be at most 8, got {}", self.slack));
        }
        if self.depth > 8 {
            return bad(format!("depth must be at most 8, got {}", self.depth));
        }
        if !(1..=3).contains(&self.pair_cap) {
            return bad(format!("pair_cap must lie in 1..=3, got {}", self.pair_cap));
        }
        if let Some(d) = self.degree_cap {
            if d > 8 {
                return bad(format!("degree_cap must be at most 8, got {d}"));
            }
        }
        if let Some(levels) = &mut self.levels {
            levels.sort_unstable();
            levels.dedup();
            if let Some(l) = levels.iter().find(|&&l| l > self.n) {
                return bad(format!("level {l} exceeds n = {}", self.n));
            }
        }
        let r = &self.identities;
        if !(0..=12).contains(&r.max_n) || !(0..=8).contains(&r.max_n_two_var) || !(1..=8).contains(&r.max_wt) {
            return bad(format!("identity ranges out of bounds: {r:?}"));
        }
        if self.command == CommandName::Surjection && self.n == 0 {
            return bad("surjection needs n >= 1".into());
        }
        if self.backend == BackendName::Virasoro && c.is_zero() {
            return bad("the Virasoro backend needs c != 0".into());
        }
        Ok(self)
    }

    pub fn voa(&self) -> Result<Voa> {
        Ok(match self.backend {
            BackendName::Heisenberg => Voa::heisenberg(),
            BackendName::Virasoro => Voa::virasoro(parse_rational(&self.c)?),
        })
    }

    pub fn h_value(&self) -> Result<Rational> {
        parse_rational(&self.h)
    }

    pub fn effective_degree_cap(&self) -> u32 {
        self.degree_cap.unwrap_or(if self.n == 0 { 4 } else { 2 })
    }

    pub fn effective_levels(&self) -> Vec<u32> {
        self.levels.clone().unwrap_or_else(|| (0..=self.n).collect())
    }
}

#[derive(Debug, Parser)]
#[command(name = "zhu", version, about = "Higher Zhu algebras with exact rational arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandName,
    /// JSON config file; flags given on the command line override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendName>,
    /// Central charge for the Virasoro backend, as p/q.
    #[arg(long, global = true)]
    pub c: Option<String>,
    /// Highest weight of the Fock or Verma module, as p/q.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub h: Option<String>,
    #[arg(long, global = true)]
    pub n: Option<u32>,
    #[arg(long, global = true)]
    pub weight_cap: Option<u32>,
    #[arg(long, global = true)]
    pub slack: Option<u32>,
    #[arg(long, global = true)]
    pub degree_cap: Option<u32>,
    #[arg(long, global = true)]
    pub depth: Option<u32>,
    #[arg(long, global = true)]
    pub pair_cap: Option<u32>,
    /// Comma-separated degrees of the module summed into U.
    #[arg(long, global = true, value_delimiter = ',')]
    pub levels: Option<Vec<u32>>,
    #[arg(long, global = true)]
    pub max_n: Option<i64>,
    #[arg(long, global = true)]
    pub max_n_two_var: Option<i64>,
    #[arg(long, global = true)]
    pub max_wt: Option<i64>,
    /// Count inconclusive checks as failures.
    #[arg(long, global = true)]
    pub inconclusive_fails: bool,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Write the JSON run manifest here.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    pub json: bool,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
            None => RunConfig::default(),
        };
        cfg.command = self.command;
        macro_rules! take {
            ($($field:ident),*) => { $(if let Some(x) = self.$field { cfg.$field = x; })* };
        }
        take!(backend, c, h, n, weight_cap, slack, depth, pair_cap);
        if self.degree_cap.is_some() {
            cfg.degree_cap = self.degree_cap;
        }
        if self.levels.is_some() {
            cfg.levels = self.levels;
        }
        if let Some(x) = self.max_n {
            cfg.identities.max_n = x;
        }
        if let Some(x) = self.max_n_two_var {
            cfg.identities.max_n_two_var = x;
        }
        if let Some(x) = self.max_wt {
            cfg.identities.max_wt = x;
        }
        cfg.inconclusive_fails |= self.inconclusive_fails;
        if self.output.is_some() {
            cfg.output = self.output;
        }
        if self.manifest.is_some() {
            cfg.manifest = self.manifest;
        }
        cfg.validated()
    }
}

/// Top-level JSON report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
}

/// One block of work inside a run: its parameters, dimension tables and checks.
#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: String,
    pub parameters: BTreeMap<String, Value>,
    pub tables: BTreeMap<String, Value>,
    #[serde(skip)]
    pub checks: Vec<CheckRecord>,
    pub elapsed_ms: u64,
}

impl Section {
    fn new(name: String) -> Self {
        Section { name, parameters: BTreeMap::new(), tables: BTreeMap::new(), checks: Vec::new(), elapsed_ms: 0 }
    }

    fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    fn table(&mut self, key: &str, value: impl Serialize) {
        self.tables.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    fn push(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        for mut r in records {
            r.parameters.insert("section".into(), Value::String(self.name.clone()));
            self.checks.push(r);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestVerdict {
    pub name: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestSection {
    #[serde(flatten)]
    pub section: Section,
    pub verdicts: Vec<ManifestVerdict>,
}

/// Reproducibility record: the config plus, per section, windows, tables and verdicts.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub version: String,
    pub config: RunConfig,
    pub sections: Vec<ManifestSection>,
    pub exit_status: i32,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub manifest: Manifest,
    pub sections: Vec<Section>,
    pub exit_status: i32,
}

impl Outcome {
    pub fn report_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.report)?)
    }

    pub fn manifest_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.manifest)?)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Canonical text summary.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let cfg = &self.report.config;
        let _ = writeln!(out, "zhu {} {}", self.report.version, command_text(cfg.command));
        for s in &self.sections {
            let params: Vec<String> = s.parameters.iter().map(|(k, v)| format!("{k}={}", value_text(v))).collect();
            let _ = writeln!(out, "[{}] {}", s.name, params.join(" "));
            for (k, v) in &s.tables {
                let _ = writeln!(out, "  {k}: {}", value_text(v));
            }
            for c in &s.checks {
                let _ = write!(out, "  {:<12} {} {}/{}", verdict_text(c.verdict), c.name, c.passed, c.tested);
                if c.verdict != Verdict::Pass {
                    if let Some(d) = &c.detail {
                        let _ = write!(out, " ({d})");
                    }
                }
                out.push('\n');
            }
        }
        let count = |v: Verdict| self.report.checks.iter().filter(|c| c.verdict == v).count();
        let _ = writeln!(
            out,
            "summary: {} pass, {} fail, {} inconclusive; exit {}",
            count(Verdict::Pass),
            count(Verdict::Fail),
            count(Verdict::Inconclusive),
            self.exit_status
        );
        out
    }
}

fn command_text(c: CommandName) -> &'static str {
    match c {
        CommandName::Identities => "identities",
        CommandName::Algebra => "algebra",
        CommandName::Surjection => "surjection",
        CommandName::Omega => "omega",
        CommandName::Verma => "verma",
        CommandName::All => "all",
    }
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(value_text).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

fn timed(mut s: Section, body: impl FnOnce(&mut Section) -> Result<()>) -> Result<Section> {
    let start = Instant::now();
    body(&mut s)?;
    s.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(s)
}

fn backend_label(voa: &Voa) -> String {
    match voa.backend() {
        Backend::Heisenberg => "heisenberg".into(),
        Backend::Virasoro { c } => format!("virasoro c={}", format_rational(c)),
    }
}

pub fn identities_section(r: &IdentityRanges) -> Result<Section> {
    let s = Section::new("identities".into())
        .param("max_n", r.max_n)
        .param("max_n_two_var", r.max_n_two_var)
        .param("max_wt", r.max_wt);
    timed(s, |s| {
        s.push(identity_suite(r));
        Ok(())
    })
}

pub fn algebra_section(voa: &Voa, n: u32, cap: u32, slack: u32) -> Result<Section> {
    let s = Section::new(format!("algebra n={n}"))
        .param("backend", backend_label(voa))
        .param("n", n)
        .param("weight_cap", cap)
        .param("slack", slack);
    timed(s, |s| {
        let rep = algebra_suite(voa, n, cap, slack)?;
        s.table("generators", rep.generator_count);
        s.table("rank", rep.rank);
        s.table("quotient_dims_per_weight", &rep.quotient_dims_per_weight);
        s.table("check_window_cap", rep.check_window_cap);
        s.push(rep.checks);
        Ok(())
    })
}

pub fn surjection_section(voa: &Voa, n: u32, cap: u32, slack: u32) -> Result<Section> {
    let window = check_window(n, cap);
    let s = Section::new(format!("surjection n={n}"))
        .param("backend", backend_label(voa))
        .param("n", n)
        .param("weight_cap", cap)
        .param("window_cap", window)
        .param("slack", slack);
    timed(s, |s| {
        let lower = OnSpan::build(voa, n - 1, window, slack)?;
        s.table("lower_rank", lower.rank());
        s.push(surjection_check(voa, &lower, n, cap));
        Ok(())
    })
}

pub fn anti_involution_section(voa: &Voa, n: u32, cap: u32, slack: u32) -> Result<Section> {
    let window = check_window(n, cap);
    let s = Section::new(format!("anti_involution n={n}"))
        .param("backend", backend_label(voa))
        .param("n", n)
        .param("weight_cap", cap)
        .param("square_cap", 4)
        .param("window_cap", window)
        .param("slack", slack);
    timed(s, |s| {
        let span = OnSpan::build(voa, n, window, slack)?;
        s.push(anti_involution_check(voa, &span, cap, 4));
        Ok(())
    })
}

pub fn omega_section(voa: &Voa, h: &Rational, n: u32, depth: u32, cap: u32) -> Result<Section> {
    let m = FockSpace::highest_weight(voa.backend().clone(), h.clone());
    let state_cap = default_state_cap(voa, depth);
    let s = Section::new(format!("omega n={n} h={}", format_rational(h)))
        .param("backend", backend_label(voa))
        .param("module", crate::omega::GradedModule::describe(&m))
        .param("n", n)
        .param("depth", depth)
        .param("state_cap", state_cap)
        .param("pair_cap", cap);
    timed(s, |s| {
        let om = omega_n(voa, &m, n, depth, state_cap);
        s.table("omega_dims", om.dims());
        s.push([omega_window_check(&m, &om)]);
        s.push(an_action_check(voa, &m, &om, cap));
        s.push([grading_check(voa, &m, depth.min(3), cap), eigenvalue_check(voa, &m, depth)]);
        s.push([reassociate_behavior_check(voa, &m, &om, cap, n as i64 + 1)?]);
        Ok(())
    })
}

pub fn reassociate_section(max_n: i64) -> Result<Section> {
    let s = Section::new("reassociate".into()).param("max_n", max_n);
    timed(s, |s| {
        s.push([reassociate_table_check(max_n)?]);
        Ok(())
    })
}

pub fn verma_section(voa: &Voa, h: &Rational, n: u32, levels: &[u32], degree_cap: u32) -> Result<Section> {
    let input = AnModule::fock_levels(voa.backend().clone(), h.clone(), n, levels)?;
    let window = VermaWindow::for_degree(degree_cap as i64);
    let s = Section::new(format!("verma n={n} h={} levels={levels:?}", format_rational(h)))
        .param("backend", backend_label(voa))
        .param("n", n)
        .param("h", format_rational(h))
        .param("levels", levels.to_vec())
        .param("degree_cap", degree_cap)
        .param("window", serde_json::to_value(&window)?);
    timed(s, |s| {
        let mut action = BTreeMap::new();
        for (name, w) in [("generator", voa.generator()), ("conformal_vector", voa.conformal_vector())] {
            action.insert(name, render_matrix(&input.rho(&w)?));
        }
        s.table("u_action", json!({ "dim": input.dim, "label": input.label, "rho": action }));
        let rep = verma_suite(voa, &input, &window)?;
        s.table("induced_dims", &rep.induced_dims);
        s.table("mbar_dims", &rep.mbar_dims);
        s.table("quotient_dims", &rep.quotient_dims);
        s.table("radical_dims", &rep.radical_dims);
        s.table("relations", json!({ "total": rep.relation_count, "nonzero": rep.nonzero_relations }));
        s.push(rep.checks);
        Ok(())
    })
}

fn all_sections() -> Result<Vec<Section>> {
    let heis = Voa::heisenberg();
    let mut out = vec![identities_section(&IdentityRanges::default())?];
    for n in 0..=2 {
        out.push(algebra_section(&heis, n, 3, 4)?);
    }
    for n in 1..=2 {
        out.push(surjection_section(&heis, n, 2, 4)?);
    }
    for n in 0..=1 {
        out.push(anti_involution_section(&heis, n, 2, 4)?);
    }
    out.push(reassociate_section(3)?);
    for h in [rat(0), rat(1), ratio(2, 3)] {
        for n in 0..=1 {
            out.push(omega_section(&heis, &h, n, 5, 2)?);
        }
    }
    out.push(verma_section(&heis, &ratio(2, 3), 0, &[0], 4)?);
    out.push(verma_section(&heis, &ratio(2, 3), 1, &[0, 1], 2)?);
    Ok(out)
}

fn sections(cfg: &RunConfig) -> Result<Vec<Section>> {
    let voa = cfg.voa()?;
    let h = cfg.h_value()?;
    Ok(match cfg.command {
        CommandName::Identities => vec![identities_section(&cfg.identities)?],
        CommandName::Algebra => vec![algebra_section(&voa, cfg.n, cfg.weight_cap, cfg.slack)?],
        CommandName::Surjection => vec![
            surjection_section(&voa, cfg.n, cfg.pair_cap, cfg.slack)?,
            anti_involution_section(&voa, cfg.n, cfg.pair_cap, cfg.slack)?,
        ],
        CommandName::Omega => vec![
            reassociate_section(cfg.n.max(3) as i64)?,
            omega_section(&voa, &h, cfg.n, cfg.depth, cfg.pair_cap)?,
        ],
        CommandName::Verma => {
            vec![verma_section(&voa, &h, cfg.n, &cfg.effective_levels(), cfg.effective_degree_cap())?]
        }
        CommandName::All => all_sections()?,
    })
}

/// Exit status for a list of checks under the given policy.
pub fn exit_status(checks: &[CheckRecord], inconclusive_fails: bool) -> i32 {
    let failed = checks
        .iter()
        .any(|c| c.verdict == Verdict::Fail || (inconclusive_fails && c.verdict == Verdict::Inconclusive));
    if failed {
        EXIT_FAILED_CHECKS
    } else {
        EXIT_PASS
    }
}

/// Exit status for an error that stopped the run.
pub fn error_status(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Parse(_) | Error::ModuleInput(_) | Error::Config(_) | Error::Io(_) => {
            EXIT_USAGE
        }
        _ => EXIT_INVARIANT,
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let cfg = cfg.clone().validated()?;
    let sections = sections(&cfg)?;
    let checks: Vec<CheckRecord> = sections.iter().flat_map(|s| s.checks.iter().cloned()).collect();
    let exit = exit_status(&checks, cfg.inconclusive_fails);
    let manifest = Manifest {
        version: VERSION.into(),
        config: cfg.clone(),
        sections: sections
            .iter()
            .map(|s| ManifestSection {
                section: s.clone(),
                verdicts: s.checks.iter().map(|c| ManifestVerdict { name: c.name.clone(), verdict: c.verdict }).collect(),
            })
            .collect(),
        exit_status: exit,
    };
    let report = Report { version: VERSION.into(), config: cfg, checks };
    Ok(Outcome { report, manifest, sections, exit_status: exit })
}

/// Runs a parsed command line, writes the requested files and returns the exit status.
pub fn main_with(cli: Cli) -> i32 {
    let json = cli.json;
    let cfg = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("zhu: {e}");
            return error_status(&e);
        }
    };
    let result = run(&cfg).and_then(|out| {
        if let Some(p) = &cfg.output {
            std::fs::write(p, out.report_json()? + "\n")?;
        }
        if let Some(p) = &cfg.manifest {
            std::fs::write(p, out.manifest_json()? + "\n")?;
        }
        if json {
            println!("{}", out.report_json()?);
        } else {
            print!("{}", out.render_text());
        }
        Ok(out.exit_status)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("zhu: {e}");
            error_status(&e)
        }
    }
}
