//! Command-line arguments and experiment files share one schema: every
//! subcommand's arguments are also a section of the config file.
//!
//! ```toml
//! [run]
//! workers = 4
//! out = "orbits.json"
//!
//! [orbits]
//! group = "S3"
//! c = "order=2"
//! g-inf = 1
//! n = 4
//! ```
//!
//! Exactly one experiment section is allowed; unknown keys are rejected.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hurlab::hurwitz::DEFAULT_TUPLE_BUDGET;
use hurlab::randgrp::DEFAULT_FREE_ORDER_CAP;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "hurlab", version, about = "Braid orbits, lifting invariants, random Γ-groups and class-group moments")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunOptions,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the experiment described by a TOML or JSON file.
    Run {
        config: PathBuf,
    },
    /// Run acceptance checks.
    Verify(VerifyArgs),
    #[command(flatten)]
    Experiment(Experiment),
}

/// Settings that do not affect results.
#[derive(Args, Serialize, Deserialize, Clone, Debug, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunOptions {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    #[serde(default)]
    pub workers: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the extension of `--out`, else JSON.
    #[arg(long, global = true, value_enum)]
    #[serde(default)]
    pub format: Option<Format>,
    /// Leave the wall-clock time out of the report, making it byte-reproducible.
    #[arg(long, global = true)]
    #[serde(default)]
    pub no_timing: bool,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl RunOptions {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_else(|| match self.out.as_deref().and_then(Path::extension).and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            _ => Format::Json,
        })
    }
}

#[derive(Subcommand, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Braid orbits of Nielsen tuples with their lifting invariants.
    Orbits(OrbitsArgs),
    /// Multipliers and the stable bijection between orbits and K(G,c).
    Invariants(InvariantsArgs),
    /// Frobenius-fixed invariant counts b(G,c,q,n) and point-count main terms.
    FrobCount(FrobCountArgs),
    /// The conjectural H-moment for given q, and its q → ∞ value.
    PredictMoment(PredictMomentArgs),
    /// The random Γ-group model.
    #[command(subcommand)]
    Randgrp(RandgrpCommand),
    /// Class groups of quadratic fields.
    #[command(subcommand)]
    Arith(ArithCommand),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Orbits(_) => "orbits",
            Experiment::Invariants(_) => "invariants",
            Experiment::FrobCount(_) => "frob-count",
            Experiment::PredictMoment(_) => "predict-moment",
            Experiment::Randgrp(RandgrpCommand::Sample(_)) => "randgrp sample",
            Experiment::Randgrp(RandgrpCommand::Measure(_)) => "randgrp measure",
            Experiment::Randgrp(RandgrpCommand::Moment(_)) => "randgrp moment",
            Experiment::Arith(ArithCommand::FfMoment(_)) => "arith ff-moment",
            Experiment::Arith(ArithCommand::NfMoment(_)) => "arith nf-moment",
        }
    }
}

fn default_c() -> String {
    "all".into()
}

fn default_budget() -> u64 {
    DEFAULT_TUPLE_BUDGET
}

fn default_gamma_inf() -> String {
    "all".into()
}

fn default_cap() -> usize {
    DEFAULT_FREE_ORDER_CAP
}

fn default_one() -> u32 {
    1
}

/// `G`, `c` and `g∞`.
///
/// `group` is a catalog name (`S3`, `D5`, `Z3x3`, `Pauli`, …) or a path to a
/// table or permutation file. `c` is `all` (every nontrivial element),
/// `order=K`, or a comma-separated list of element indices.
#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct OrbitsArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, default_value = "all")]
    #[serde(default = "default_c")]
    pub c: String,
    #[arg(long)]
    pub g_inf: usize,
    #[arg(long)]
    pub n: usize,
    /// Largest number of tuples to enumerate.
    #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
    #[serde(default = "default_budget")]
    pub budget: u64,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct InvariantsArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, default_value = "all")]
    #[serde(default = "default_c")]
    pub c: String,
    #[arg(long)]
    pub g_inf: usize,
    #[arg(long)]
    pub n: usize,
    /// Lower bounds M on the class multiplicities.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    #[serde(default = "default_ms")]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn default_ms() -> Vec<usize> {
    vec![1, 2, 3]
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FrobCountArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, default_value = "all")]
    #[serde(default = "default_c")]
    pub c: String,
    #[arg(long)]
    pub g_inf: usize,
    /// The field size, any size integer.
    #[arg(long)]
    pub q: String,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_n_min")]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
}

fn default_n_min() -> usize {
    1
}

/// `H` is a list of cyclic orders such as `3,3` (Γ = ℤ/2 acting by
/// inversion) or a path to a table file with a `gamma` stanza. `gamma-inf`
/// is `all`, `trivial`, or element indices of Γ generating Γ∞.
#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct PredictMomentArgs {
    #[arg(long = "H", alias = "h")]
    #[serde(alias = "H")]
    pub h: String,
    #[arg(long, default_value = "all")]
    #[serde(default = "default_gamma_inf")]
    pub gamma_inf: String,
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub q: Vec<String>,
}

#[derive(Subcommand, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum RandgrpCommand {
    /// Monte Carlo samples of X^n and the resulting distribution.
    Sample(SampleArgs),
    /// Exact μ^n(H) and its limit.
    Measure(MeasureArgs),
    /// Exact H-moments, optionally against Monte Carlo.
    Moment(RgMomentArgs),
}

/// The variety is the abelian groups of exponent dividing `ℓ^k`, with Γ = ℤ/2 acting by inversion.
#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SampleArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_one")]
    pub k: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "all")]
    #[serde(default = "default_gamma_inf")]
    pub gamma_inf: String,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_FREE_ORDER_CAP)]
    #[serde(default = "default_cap")]
    pub cap: usize,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct MeasureArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_one")]
    pub k: u32,
    /// Targets, each a list of cyclic orders; `;` separates targets and an empty entry is the trivial group.
    #[arg(long = "H", alias = "h", value_delimiter = ';')]
    #[serde(alias = "H")]
    pub h: Vec<String>,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, default_value = "all")]
    #[serde(default = "default_gamma_inf")]
    pub gamma_inf: String,
    /// Stop the limit once consecutive values differ by less than this.
    #[arg(long, default_value_t = 1e-9)]
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    1e-9
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RgMomentArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_one")]
    pub k: u32,
    #[arg(long = "H", alias = "h", value_delimiter = ';')]
    #[serde(alias = "H")]
    pub h: Vec<String>,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, default_value = "all")]
    #[serde(default = "default_gamma_inf")]
    pub gamma_inf: String,
    /// Monte Carlo trials at `n = n_max`; needs `--seed`.
    #[arg(long, requires = "seed")]
    #[serde(default)]
    pub trials: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum ArithCommand {
    /// Average #Sur(Cl(K), H) over imaginary quadratic function fields F_q(t)(√f).
    FfMoment(FfMomentArgs),
    /// Average #Sur(Cl(K), H) over imaginary quadratic number fields Q(√−d).
    NfMoment(NfMomentArgs),
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum WeightsArg {
    None,
    Gerth,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FfMomentArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub dmax: u32,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_one")]
    pub dmin: u32,
    /// Cyclic orders of H, e.g. `5` or `2,2`.
    #[arg(long = "H", alias = "h")]
    #[serde(alias = "H")]
    pub h: String,
    #[arg(long, value_enum, default_value = "none")]
    #[serde(default = "default_weights")]
    pub weights: WeightsArg,
    /// Seeds the random Sylow search on curves too large to enumerate.
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
    /// No verdict is printed below this many fields.
    #[arg(long, default_value_t = 100)]
    #[serde(default = "default_floor")]
    pub sample_floor: u64,
}

fn default_weights() -> WeightsArg {
    WeightsArg::None
}

fn default_floor() -> u64 {
    100
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct NfMomentArgs {
    /// Largest squarefree d.
    #[arg(long)]
    pub dmax: u64,
    /// Cyclic orders of H (odd order).
    #[arg(long = "H", alias = "h")]
    #[serde(alias = "H")]
    pub h: String,
    /// One report row every this many d.
    #[arg(long, default_value_t = 1000)]
    #[serde(default = "default_step")]
    pub step: u64,
}

fn default_step() -> u64 {
    1000
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// `all`, a criterion name, or its number.
    pub suite: String,
    /// Trimmed ranges, for a run of a few seconds.
    #[arg(long)]
    pub quick: bool,
}

/// Layout of an experiment file.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    #[serde(default)]
    run: RunOptions,
    orbits: Option<OrbitsArgs>,
    invariants: Option<InvariantsArgs>,
    frob_count: Option<FrobCountArgs>,
    predict_moment: Option<PredictMomentArgs>,
    randgrp: Option<RandgrpSection>,
    arith: Option<ArithSection>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RandgrpSection {
    sample: Option<SampleArgs>,
    measure: Option<MeasureArgs>,
    moment: Option<RgMomentArgs>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ArithSection {
    ff_moment: Option<FfMomentArgs>,
    nf_moment: Option<NfMomentArgs>,
}

/// Reads a config file (JSON if the extension is `.json`, TOML otherwise).
pub fn load(path: &Path) -> Result<(RunOptions, Experiment), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let file: ConfigFile = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
    } else {
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
    };
    let mut found: Vec<Experiment> = Vec::new();
    found.extend(file.orbits.map(Experiment::Orbits));
    found.extend(file.invariants.map(Experiment::Invariants));
    found.extend(file.frob_count.map(Experiment::FrobCount));
    found.extend(file.predict_moment.map(Experiment::PredictMoment));
    if let Some(r) = file.randgrp {
        found.extend(r.sample.map(|a| Experiment::Randgrp(RandgrpCommand::Sample(a))));
        found.extend(r.measure.map(|a| Experiment::Randgrp(RandgrpCommand::Measure(a))));
        found.extend(r.moment.map(|a| Experiment::Randgrp(RandgrpCommand::Moment(a))));
    }
    if let Some(a) = file.arith {
        found.extend(a.ff_moment.map(|x| Experiment::Arith(ArithCommand::FfMoment(x))));
        found.extend(a.nf_moment.map(|x| Experiment::Arith(ArithCommand::NfMoment(x))));
    }
    match found.len() {
        1 => Ok((file.run, found.pop().unwrap())),
        0 => Err(CliError::Config(format!("{}: no experiment section", path.display()))),
        k => Err(CliError::Config(format!("{}: {k} experiment sections, expected exactly one", path.display()))),
    }
}
