//! Command-line surface: `classify`, `rank`, `crosscheck` and `witness`.
//!
//! Exit codes: 0 for a clean numeric answer, 1 for an error, 2 for a
//! cross-check mismatch or a failed witness identity, 3 for an answer that
//! is caveated, conditional or unknown.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::{classify, Associated, ClassifyResult, Descriptor, Isogeny, LieDescriptor, RootSystem};
use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, HermitianChoice};
use crate::matgroup::{DEFAULT_ENUMERATION_BOUND, DEFAULT_ORBIT_BUDGET};
use crate::posetrank::{poset_to_dot, poset_to_text, rank_of, Budgets, RankAnalysis, POSET_SCHEMA, REPORT_SCHEMA};
use crate::witnesses::{
    construct_witness_defchar, construct_witness_gl, construct_witness_sl, DefCharVariant, WitnessReport,
};

pub const RUN_SCHEMA: &str = "endorank.rank-run/1";
pub const GRID_SCHEMA: &str = "endorank.grid/1";
pub const CROSSCHECK_SCHEMA: &str = "endorank.crosscheck/1";
pub const CACHE_ENV: &str = "ENDORANK_CACHE_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_CAVEAT: i32 = 3;

/// Grid shipped with the crate and used by `crosscheck` without a file.
pub const DEFAULT_GRID: &str = include_str!("../data/default_grid.json");

#[derive(Parser, Debug)]
#[command(name = "endorank", version, about = "Torsion-free rank of TF(G) for finite groups of Lie type")]
pub struct Cli {
    /// Worker threads for orbit enumeration (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank from the classification of finite groups of Lie type.
    Classify(ClassifyArgs),
    /// Rank by enumerating the orbit poset of a matrix group.
    Rank(RankArgs),
    /// Run both routes over a grid of groups and compare.
    Crosscheck(CrosscheckArgs),
    /// Build the explicit witness matrices and check their identities.
    Witness(WitnessArgs),
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Root system, e.g. A2, B2, G2, D4, E6.
    #[arg(long, required_unless_present = "descriptor")]
    pub family: Option<RootSystem>,
    /// 1 for split groups, 2 or 3 for twisted ones.
    #[arg(long, default_value_t = 1)]
    pub twist: u8,
    #[arg(long, value_enum, default_value = "sc")]
    pub isogeny: IsogenyArg,
    #[arg(long, required_unless_present = "descriptor")]
    pub q: Option<u64>,
    #[arg(long)]
    pub ell: u64,
    /// Named associated group of a simply connected descriptor.
    #[arg(long, value_enum, conflicts_with = "h_index")]
    pub associated: Option<AssociatedArg>,
    /// Index of the determinant-cut subgroup H over the simply connected group.
    #[arg(long, requires = "j_order")]
    pub h_index: Option<u64>,
    /// Order of the central scalar subgroup J divided out of H.
    #[arg(long, requires = "h_index")]
    pub j_order: Option<u64>,
    /// Descriptor as a JSON file or inline JSON; replaces the flags above.
    #[arg(long, conflicts_with_all = ["family", "q"])]
    pub descriptor: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum IsogenyArg {
    Sc,
    Ad,
    Other,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AssociatedArg {
    Psl,
    Pgl,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Largest group order enumerated when no Sylow construction applies.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND)]
    pub enumeration_bound: u64,
    /// Largest conjugation orbit followed before a class is marked incomplete.
    #[arg(long, default_value_t = DEFAULT_ORBIT_BUDGET)]
    pub orbit_budget: usize,
}

impl BudgetArgs {
    fn budgets(&self) -> Result<Budgets> {
        if self.enumeration_bound == 0 || self.orbit_budget == 0 {
            return Err(Error::Descriptor("budgets must be positive".into()));
        }
        Ok(Budgets { enumeration_bound: self.enumeration_bound, orbit_budget: self.orbit_budget })
    }
}

#[derive(Args, Debug)]
pub struct RankArgs {
    /// GL, SL, PGL, PSL, GU, SU, PGU, PSU, Sp or PSp.
    #[arg(long, required_unless_present = "descriptor")]
    pub group: Option<String>,
    #[arg(long, required_unless_present = "descriptor")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "descriptor")]
    pub q: Option<u64>,
    #[arg(long)]
    pub ell: u64,
    /// Hermitian form for unitary groups.
    #[arg(long, value_enum, default_value = "identity")]
    pub hermitian: HermitianArg,
    /// Group descriptor as a JSON file or inline JSON.
    #[arg(long, conflicts_with_all = ["group", "n", "q"])]
    pub descriptor: Option<String>,
    #[command(flatten)]
    pub budgets: BudgetArgs,
    /// Also write the orbit poset as JSON to this path.
    #[arg(long)]
    pub export_poset: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Recorded in the output header; the pipeline has no randomized step.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum HermitianArg {
    Identity,
    Antidiagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args, Debug)]
pub struct CrosscheckArgs {
    /// Grid file; the shipped default grid when absent.
    pub grid: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long, value_enum)]
    pub variant: WitnessVariant,
    /// Odd prime dividing q - 1 (gl and sl variants).
    #[arg(long, required_if_eq_any = [("variant", "gl"), ("variant", "sl")])]
    pub ell: Option<u64>,
    #[arg(long, required_if_eq_any = [("variant", "gl"), ("variant", "sl")])]
    pub q: Option<u64>,
    /// The prime for the defchar variant.
    #[arg(long, required_if_eq("variant", "defchar"))]
    pub p: Option<u64>,
    /// Linear (SL_3) or unitary (SU_3) for the defchar variant.
    #[arg(long, value_enum, default_value = "linear")]
    pub form: FormArg,
    /// Also test the witness subgroups for pairwise non-conjugacy, following
    /// conjugation orbits up to this many subgroups (gl and sl variants).
    #[arg(long)]
    pub conjugacy_budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WitnessVariant {
    Gl,
    Sl,
    Defchar,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormArg {
    Linear,
    Unitary,
}

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String, code: i32) -> Output {
        Output { stdout, stderr: String::new(), code }
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { stdout: String::new(), stderr: text, code }
            } else {
                Output::ok(text, code)
            };
        }
    };
    if let Some(t) = cli.threads {
        // a pool already installed by an earlier call in the same process is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let result = match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Crosscheck(a) => cmd_crosscheck(a),
        Command::Witness(a) => cmd_witness(a),
    };
    result.unwrap_or_else(|e| Output { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_ERROR })
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Reads a JSON argument given inline or as a file path.
fn json_arg<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with('{') { arg.to_string() } else { std::fs::read_to_string(arg)? };
    Ok(serde_json::from_str(&text)?)
}

fn classify_descriptor(a: &ClassifyArgs) -> Result<Descriptor> {
    if let Some(d) = &a.descriptor {
        return json_arg(d);
    }
    let family = a.family.ok_or_else(|| Error::Descriptor("--family is required".into()))?;
    let q = a.q.ok_or_else(|| Error::Descriptor("--q is required".into()))?;
    let isogeny = match a.isogeny {
        IsogenyArg::Sc => Isogeny::Sc,
        IsogenyArg::Ad => Isogeny::Ad,
        IsogenyArg::Other => Isogeny::Other,
    };
    let mut d = LieDescriptor::new(family, a.twist, isogeny, q);
    d.associated = match (a.associated, a.h_index, a.j_order) {
        (Some(AssociatedArg::Psl), _, _) => Some(Associated::Psl),
        (Some(AssociatedArg::Pgl), _, _) => Some(Associated::Pgl),
        (None, Some(h_index), Some(j_order)) => Some(Associated::Section { h_index, j_order }),
        _ => None,
    };
    Ok(Descriptor::Simple(d))
}

fn classify_code(r: &ClassifyResult) -> i32 {
    if r.is_clean() {
        EXIT_OK
    } else {
        EXIT_CAVEAT
    }
}

pub fn cmd_classify(a: &ClassifyArgs) -> Result<Output> {
    let d = classify_descriptor(a)?;
    let r = classify(&d, a.ell)?;
    Ok(Output::ok(json(&r)?, classify_code(&r)))
}

fn group_descriptor(a: &RankArgs) -> Result<GroupDescriptor> {
    if let Some(d) = &a.descriptor {
        return json_arg(d);
    }
    let (Some(g), Some(n), Some(q)) = (&a.group, a.n, a.q) else {
        return Err(Error::Descriptor("--group, --n and --q are required".into()));
    };
    let mut d = GroupDescriptor::named(g, n, q)?;
    if let HermitianArg::Antidiagonal = a.hermitian {
        d.hermitian_form = HermitianChoice::Antidiagonal;
    }
    Ok(d)
}

#[derive(Serialize)]
struct CacheKey<'a> {
    report_schema: &'a str,
    poset_schema: &'a str,
    descriptor: &'a GroupDescriptor,
    ell: u64,
    budgets: &'a Budgets,
}

fn cache_file(dir: &Path, d: &GroupDescriptor, ell: u64, budgets: &Budgets) -> Result<PathBuf> {
    let key = CacheKey { report_schema: REPORT_SCHEMA, poset_schema: POSET_SCHEMA, descriptor: d, ell, budgets };
    let digest = Sha256::digest(serde_json::to_vec(&key)?);
    let mut name = String::with_capacity(69);
    for b in digest {
        let _ = write!(name, "{b:02x}");
    }
    name.push_str(".json");
    Ok(dir.join(name))
}

/// Brute-force analysis, through the content-addressed cache when
/// `ENDORANK_CACHE_DIR` is set.
pub fn cached_rank(d: &GroupDescriptor, ell: u64, budgets: &Budgets) -> Result<RankAnalysis> {
    let Some(dir) = std::env::var_os(CACHE_ENV).map(PathBuf::from) else {
        return rank_of(d, ell, budgets);
    };
    let path = cache_file(&dir, d, ell, budgets)?;
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(hit) = serde_json::from_str::<RankAnalysis>(&text) {
            return Ok(hit);
        }
    }
    let fresh = rank_of(d, ell, budgets)?;
    std::fs::create_dir_all(&dir)?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, serde_json::to_vec(&fresh)?)?;
    std::fs::rename(&tmp, &path)?;
    Ok(fresh)
}

#[derive(Serialize)]
struct RankRun<'a> {
    schema: &'a str,
    descriptor: &'a GroupDescriptor,
    seed: u64,
    budgets: Budgets,
    #[serde(flatten)]
    analysis: &'a RankAnalysis,
}

fn rank_code(a: &RankAnalysis) -> i32 {
    if a.report.tf_rank.is_some() && a.report.caveats.is_empty() {
        EXIT_OK
    } else {
        EXIT_CAVEAT
    }
}

pub fn cmd_rank(a: &RankArgs) -> Result<Output> {
    let d = group_descriptor(a)?;
    let budgets = a.budgets.budgets()?;
    let analysis = cached_rank(&d, a.ell, &budgets)?;
    if let Some(path) = &a.export_poset {
        std::fs::write(path, json(&analysis.poset)?)?;
    }
    let header = format!(
        "seed {} enumeration_bound {} orbit_budget {}",
        a.seed, budgets.enumeration_bound, budgets.orbit_budget
    );
    let out = match a.format {
        Format::Json => {
            json(&RankRun { schema: RUN_SCHEMA, descriptor: &d, seed: a.seed, budgets, analysis: &analysis })?
        }
        Format::Dot => format!("// {header}\n{}", poset_to_dot(&analysis.poset)),
        Format::Text => format!("# {header}\n{}", poset_to_text(&analysis.report, &analysis.poset)),
    };
    Ok(Output::ok(out, rank_code(&analysis)))
}

/// A grid file: groups and primes to run through both routes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridConfig {
    pub schema: String,
    pub entries: Vec<GridEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridEntry {
    /// Matrix group for the brute-force route; its Lie descriptor is derived
    /// when `lie` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie: Option<Descriptor>,
    pub ell: u64,
    #[serde(default)]
    pub expected: Expected,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Budgets>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Expected {
    #[default]
    Derive,
    Rank(u32),
}

impl Serialize for Expected {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Expected::Derive => s.serialize_str("derive"),
            Expected::Rank(r) => s.serialize_u32(*r),
        }
    }
}

impl<'de> Deserialize<'de> for Expected {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Rank(u32),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Rank(r) => Ok(Expected::Rank(r)),
            Raw::Word(w) if w == "derive" => Ok(Expected::Derive),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("expected a rank or \"derive\", got {w}"))),
        }
    }
}

impl GridConfig {
    pub fn parse(text: &str) -> Result<GridConfig> {
        let g: GridConfig = serde_json::from_str(text)?;
        if g.schema != GRID_SCHEMA {
            return Err(Error::Descriptor(format!("grid schema {} is not {GRID_SCHEMA}", g.schema)));
        }
        for e in &g.entries {
            if e.group.is_none() && e.lie.is_none() {
                return Err(Error::Descriptor("grid entry needs a group or a lie descriptor".into()));
            }
            if let Some(b) = e.budgets {
                if b.enumeration_bound == 0 || b.orbit_budget == 0 {
                    return Err(Error::Descriptor("grid budgets must be positive".into()));
                }
            }
        }
        Ok(g)
    }

    pub fn default_grid() -> GridConfig {
        GridConfig::parse(DEFAULT_GRID).expect("shipped grid parses")
    }
}

/// Outcome of one route on one grid entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum RouteValue {
    Rank(u32),
    Unknown(String),
    NotRun,
    Error(String),
}

impl RouteValue {
    fn rank(&self) -> Option<u32> {
        match self {
            RouteValue::Rank(r) => Some(*r),
            _ => None,
        }
    }

    fn show(&self) -> String {
        match self {
            RouteValue::Rank(r) => r.to_string(),
            RouteValue::Unknown(_) => "unknown".into(),
            RouteValue::NotRun => "-".into(),
            RouteValue::Error(_) => "error".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckRow {
    pub name: String,
    pub ell: u64,
    pub expected: Expected,
    pub classify: RouteValue,
    pub classify_rule: String,
    pub brute: RouteValue,
    pub brute_rule: String,
    pub matched: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub schema: &'static str,
    pub seed: u64,
    pub rows: Vec<CrosscheckRow>,
    pub mismatches: usize,
    pub errors: usize,
}

pub fn crosscheck(grid: &GridConfig, seed: u64) -> CrosscheckReport {
    let rows: Vec<CrosscheckRow> = grid.entries.iter().map(crosscheck_entry).collect();
    let mismatches = rows.iter().filter(|r| !r.matched).count();
    let errors = rows
        .iter()
        .filter(|r| matches!(r.classify, RouteValue::Error(_)) || matches!(r.brute, RouteValue::Error(_)))
        .count();
    CrosscheckReport { schema: CROSSCHECK_SCHEMA, seed, rows, mismatches, errors }
}

fn crosscheck_entry(e: &GridEntry) -> CrosscheckRow {
    let lie: Result<Descriptor> = match (&e.lie, &e.group) {
        (Some(l), _) => Ok(l.clone()),
        (None, Some(g)) => LieDescriptor::from_group(g).map(Descriptor::Simple),
        (None, None) => Err(Error::Descriptor("empty grid entry".into())),
    };
    let name = match (&e.group, &lie) {
        (Some(g), _) => g.display_name(),
        (None, Ok(l)) => l.name(),
        (None, Err(_)) => "?".into(),
    };
    let (classify_value, classify_rule) = match lie.and_then(|l| classify(&l, e.ell)) {
        Ok(r) => match r.tf_rank {
            Some(t) => (RouteValue::Rank(t), r.rule),
            None => (RouteValue::Unknown(r.caveats.join("; ")), r.rule),
        },
        Err(err) => (RouteValue::Error(err.to_string()), String::new()),
    };
    let (brute, brute_rule) = match &e.group {
        None => (RouteValue::NotRun, String::new()),
        Some(g) => match cached_rank(g, e.ell, &e.budgets.unwrap_or_default()) {
            Ok(a) => match a.report.tf_rank {
                Some(t) => (RouteValue::Rank(t), a.report.rule),
                None => (RouteValue::Unknown(a.report.caveats.join("; ")), a.report.rule),
            },
            Err(err) => (RouteValue::Error(err.to_string()), String::new()),
        },
    };
    let values: Vec<u32> = [classify_value.rank(), brute.rank()].into_iter().flatten().collect();
    let routes_agree = values.windows(2).all(|w| w[0] == w[1]);
    let meets_expected = match e.expected {
        Expected::Derive => true,
        Expected::Rank(r) => values.iter().all(|&v| v == r),
    };
    let errored = matches!(classify_value, RouteValue::Error(_)) || matches!(brute, RouteValue::Error(_));
    CrosscheckRow {
        name,
        ell: e.ell,
        expected: e.expected,
        classify: classify_value,
        classify_rule,
        brute,
        brute_rule,
        matched: routes_agree && meets_expected && !errored,
    }
}

fn crosscheck_text(r: &CrosscheckReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# seed {}", r.seed);
    let _ = writeln!(s, "{:<26} {:>3} {:>8} {:>8} {:>8}  match", "group", "ell", "expected", "classify", "brute");
    for row in &r.rows {
        let exp = match row.expected {
            Expected::Derive => "derive".to_string(),
            Expected::Rank(v) => v.to_string(),
        };
        let _ = writeln!(
            s,
            "{:<26} {:>3} {:>8} {:>8} {:>8}  {}",
            row.name,
            row.ell,
            exp,
            row.classify.show(),
            row.brute.show(),
            if row.matched { "yes" } else { "NO" }
        );
        for v in [&row.classify, &row.brute] {
            if let RouteValue::Error(m) | RouteValue::Unknown(m) = v {
                let _ = writeln!(s, "    {m}");
            }
        }
    }
    let _ = writeln!(s, "{} rows, {} mismatches, {} errors", r.rows.len(), r.mismatches, r.errors);
    s
}

pub fn cmd_crosscheck(a: &CrosscheckArgs) -> Result<Output> {
    let grid = match &a.grid {
        Some(p) => GridConfig::parse(&std::fs::read_to_string(p)?)?,
        None => GridConfig::default_grid(),
    };
    let report = crosscheck(&grid, a.seed);
    let out = match a.format {
        Format::Json => json(&report)?,
        _ => crosscheck_text(&report),
    };
    let code = if report.mismatches > 0 { EXIT_MISMATCH } else { EXIT_OK };
    Ok(Output::ok(out, code))
}

pub fn cmd_witness(a: &WitnessArgs) -> Result<Output> {
    let need = |v: Option<u64>, flag: &str| v.ok_or_else(|| Error::Descriptor(format!("--{flag} is required")));
    let mut report: WitnessReport = match a.variant {
        WitnessVariant::Gl => {
            let w = construct_witness_gl(need(a.ell, "ell")?, need(a.q, "q")?)?;
            let mut r = w.report();
            if let Some(b) = a.conjugacy_budget {
                conjugacy_check(&mut r, w.pairwise_nonconjugate(b), b);
            }
            r
        }
        WitnessVariant::Sl => {
            let w = construct_witness_sl(need(a.ell, "ell")?, need(a.q, "q")?)?;
            let mut r = w.report();
            if let Some(b) = a.conjugacy_budget {
                conjugacy_check(&mut r, w.pairwise_nonconjugate(b), b);
            }
            r
        }
        WitnessVariant::Defchar => {
            let variant = match a.form {
                FormArg::Linear => DefCharVariant::Linear,
                FormArg::Unitary => DefCharVariant::Unitary,
            };
            construct_witness_defchar(need(a.p, "p")?, variant)?.report()
        }
    };
    report.all_hold = report.checks.all_hold();
    let code = if report.all_hold { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Output::ok(json(&report)?, code))
}

fn conjugacy_check(r: &mut WitnessReport, outcome: Option<bool>, budget: usize) {
    match outcome {
        Some(b) => r.checks.push("images are pairwise non-conjugate", b),
        None => r.notes.push(format!("non-conjugacy not decided: an orbit exceeded {budget} subgroups")),
    }
}
