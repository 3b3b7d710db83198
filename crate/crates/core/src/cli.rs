//! Command layer behind the `qssamp` binary.
//!
//! Every command is a pure function of its flags (plus the seed) and returns
//! its output as a string, so repeated invocations are byte-identical.
//! Exit codes: 0 success, 2 validation, 3 no valid target, 4 simulation,
//! 5 I/O, 6 sensitivity range, 7 ensemble generation.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use serde::Serialize;
use serde_json::json;

use crate::cost::{
    alt_stage2_cost, compare_routes, fmt17, hitting_bound_ratio, sweep_ab, GapStage, Route,
    DEFAULT_SWEEP_GRID, FIGURE1_PRESETS,
};
use crate::error::Error;
use crate::interpolation::{interpolated_chain, interpolated_stationary, s_star, valid_targets};
use crate::markov::{
    chain_statistics, gen_family, read_chain_json, stationary_distribution, write_chain_json,
    ChainFile, Family, MarkovChain, StationaryMethod,
};
use crate::sim::{run_protocol, GapEstimate, Mode, ProtocolConfig, SPrime, TimeRule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NO_VALID_J: i32 = 3;
pub const EXIT_SIMULATION: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_SENSITIVITY: i32 = 6;
pub const EXIT_GENERATION: i32 = 7;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn validation(e: impl std::fmt::Display) -> Self {
        Self::new(EXIT_VALIDATION, format!("validation failed: {e}"))
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Self::new(EXIT_IO, format!("{}: {e}", path.display()))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "qssamp", version, about = "Analog stationary-state preparation: simulation and cost analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    TwoState,
    CycleLazy,
    Complete,
    BirthDeath,
    RandomReversible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeName {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TimeRuleName {
    SqrtChainGap,
    HamiltonianGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichGap {
    Stage1,
    Stage2,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// First parameter: p for two-state, up-probability for birth-death.
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    /// Second parameter: q for two-state, down-probability for birth-death.
    #[arg(long, default_value_t = 0.1)]
    pub q: f64,
}

impl FamilyArgs {
    fn family(&self) -> Family {
        match self.family {
            FamilyName::TwoState => Family::TwoState { p: self.p, q: self.q },
            FamilyName::CycleLazy => Family::CycleLazy,
            FamilyName::Complete => Family::Complete,
            FamilyName::BirthDeath => Family::BirthDeath { up: self.p, down: self.q },
            FamilyName::RandomReversible => Family::RandomReversible,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a chain from a named family.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stationary distribution, spectral gap, mixing and hitting times, s*.
    Analyze {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, default_value_t = 0.25)]
        eps_mix: f64,
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Interpolated chain P(s) toward the j-absorbing variant and its stationary distribution.
    Interp {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the two-stage protocol on the pointer-register simulator.
    Simulate {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// `auto` (s* from the exact stationary distribution) or a value in [0, 1).
        #[arg(long, default_value = "auto")]
        s_prime: String,
        /// Added to s* when `--s-prime auto`.
        #[arg(long, default_value_t = 0.0)]
        s_offset: f64,
        /// Stage-1 gap estimate Δ(s′)′ (default: exact).
        #[arg(long)]
        gap_stage1: Option<f64>,
        /// Stage-2 gap estimate Δ′ (default: exact).
        #[arg(long)]
        gap_stage2: Option<f64>,
        /// Stage-1 gap estimate as a multiple C of the true gap.
        #[arg(long, conflicts_with = "gap_stage1")]
        gap_factor_stage1: Option<f64>,
        #[arg(long, conflicts_with = "gap_stage2")]
        gap_factor_stage2: Option<f64>,
        /// Pointer copies per stage (default: ceil(log2(4/eps))).
        #[arg(long)]
        copies: Option<u64>,
        #[arg(long)]
        pointer_size: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        dx: f64,
        #[arg(long, value_enum, default_value_t = TimeRuleName::SqrtChainGap)]
        time_rule: TimeRuleName,
        #[arg(long, value_enum, default_value_t = ModeName::Exact)]
        mode: ModeName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A and B over a grid of s′ for one (eps, pi_j) pair.
    Sweep {
        #[arg(long)]
        pi_j: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_SWEEP_GRID)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweeps for the two reference (eps, pi_j) pairs, one CSV each.
    Figure1 {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SWEEP_GRID)]
        grid: usize,
    },
    /// Copy counts, residual overlap and alternative cost for overestimated gaps.
    Sensitivity {
        /// Comma-separated ratios C = (gap used)/(true gap).
        #[arg(long = "c", value_delimiter = ',', required = true)]
        c: Vec<f64>,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// True gap Δ of the original chain.
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        /// True gap Δ(s*) of the interpolated chain (default: --delta).
        #[arg(long)]
        delta_s: Option<f64>,
        #[arg(long, value_enum, default_value_t = WhichGap::Stage1)]
        which_gap: WhichGap,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit of 1/Δ(s′) ≥ 4·T_hit/(1 − α²) over an ensemble.
    Hitbound {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Chains per size (seeds seed, seed+1, ...).
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `auto` (s*) or a value in [0, 1).
        #[arg(long, default_value = "auto")]
        s_prime: String,
        #[arg(long, default_value_t = 0.0)]
        s_offset: f64,
        /// Where chains with ratio < 1 are archived.
        #[arg(long)]
        archive: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(command: &Command) -> CliResult<()> {
    match command {
        Command::Gen { family, n, seed, out } => {
            emit(out.as_deref(), &cmd_gen(family.family(), *n, *seed)?)
        }
        Command::Analyze { chain, eps_mix, j, format, out } => {
            let chain = load_chain(chain)?;
            emit(out.as_deref(), &cmd_analyze(&chain, *eps_mix, *j, *format)?)
        }
        Command::Interp { chain, j, s, out } => {
            let chain = load_chain(chain)?;
            emit(out.as_deref(), &cmd_interp(&chain, *j, *s)?)
        }
        Command::Simulate {
            chain,
            j,
            eps,
            s_prime,
            s_offset,
            gap_stage1,
            gap_stage2,
            gap_factor_stage1,
            gap_factor_stage2,
            copies,
            pointer_size,
            dx,
            time_rule,
            mode,
            seed,
            out,
        } => {
            let chain = load_chain(chain)?;
            let gap = |v: Option<f64>, c: Option<f64>| match (v, c) {
                (Some(v), _) => GapEstimate::Value(v),
                (None, Some(c)) => GapEstimate::Factor(c),
                (None, None) => GapEstimate::Exact,
            };
            let config = ProtocolConfig {
                eps: *eps,
                s_prime: parse_s_prime(s_prime, *s_offset)?,
                gap_stage1: gap(*gap_stage1, *gap_factor_stage1),
                gap_stage2: gap(*gap_stage2, *gap_factor_stage2),
                copies_stage1: *copies,
                copies_stage2: *copies,
                time_rule: match time_rule {
                    TimeRuleName::SqrtChainGap => TimeRule::InverseSqrtChainGap,
                    TimeRuleName::HamiltonianGap => TimeRule::InverseHamiltonianGap,
                },
                pointer_size: *pointer_size,
                dx: *dx,
                mode: match mode {
                    ModeName::Exact => Mode::ExactConditional,
                    ModeName::Sampled => Mode::Sampled(*seed),
                },
            };
            emit(out.as_deref(), &cmd_simulate(&chain, *j, &config)?)
        }
        Command::Sweep { pi_j, eps, grid, format, out } => {
            emit(out.as_deref(), &cmd_sweep(*pi_j, *eps, *grid, *format)?)
        }
        Command::Figure1 { out, grid } => {
            print!("{}", cmd_figure1(out, *grid)?);
            Ok(())
        }
        Command::Sensitivity {
            c,
            eps,
            delta,
            delta_s,
            which_gap,
            format,
            out,
        } => {
            let which = match which_gap {
                WhichGap::Stage1 => GapStage::Stage1,
                WhichGap::Stage2 => GapStage::Stage2,
            };
            let text = cmd_sensitivity(c, *eps, *delta, delta_s.unwrap_or(*delta), which, *format)?;
            emit(out.as_deref(), &text)
        }
        Command::Hitbound {
            family,
            n_min,
            n_max,
            count,
            seed,
            s_prime,
            s_offset,
            archive,
            format,
            out,
        } => {
            let rule = parse_s_prime(s_prime, *s_offset)?;
            let archive = archive.clone().unwrap_or_else(|| {
                out.as_deref()
                    .and_then(Path::parent)
                    .unwrap_or_else(|| Path::new("."))
                    .join("hitbound_failures.json")
            });
            let ensemble = hitbound_ensemble(family.family(), *n_min, *n_max, *count, *seed)?;
            let audit = cmd_hitbound(&ensemble, rule)?;
            if !audit.failures.is_empty() {
                let text = serde_json::to_string_pretty(&audit.failures)
                    .expect("archived chains serialize");
                fs::write(&archive, text + "\n").map_err(|e| CliError::io(&archive, e))?;
            }
            let text = match format {
                Format::Csv => audit.csv,
                Format::Json => serde_json::to_string_pretty(&audit.rows).expect("rows serialize") + "\n",
            };
            emit(out.as_deref(), &text)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn load_chain(path: &Path) -> CliResult<MarkovChain> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    read_chain_json(&text).map_err(CliError::validation)
}

fn parse_s_prime(text: &str, offset: f64) -> CliResult<SPrime> {
    if text == "auto" {
        return Ok(if offset == 0.0 {
            SPrime::Auto
        } else {
            SPrime::StarOffset(offset)
        });
    }
    let v: f64 = text
        .parse()
        .map_err(|_| CliError::validation(format!("--s-prime must be `auto` or a number, got `{text}`")))?;
    Ok(SPrime::Value(v + offset))
}

pub fn cmd_gen(family: Family, n: usize, seed: u64) -> CliResult<String> {
    let chain = gen_family(family, n, seed).map_err(|e| CliError::new(EXIT_GENERATION, e.to_string()))?;
    Ok(write_chain_json(&chain) + "\n")
}

pub fn cmd_analyze(chain: &MarkovChain, eps_mix: f64, j: usize, format: Format) -> CliResult<String> {
    let stats = chain_statistics(chain, eps_mix, j).map_err(CliError::validation)?;
    let pj = stats.pi[j];
    let star = (pj > 0.0 && pj < 0.5).then(|| s_star(pj).expect("pi_j in (0, 1/2)"));
    let pi = DVector::from_vec(stats.pi.clone());
    let valid = valid_targets(&pi);
    match format {
        Format::Json => {
            let value = json!({
                "n": chain.n(),
                "pi": stats.pi,
                "delta": stats.delta,
                "t_mix": stats.t_mix,
                "eps_mix": stats.eps_mix,
                "t_hit": stats.t_hit,
                "target_j": j,
                "reversible": stats.reversible,
                "spectrum_route": stats.spectrum_route,
                "s_star": star.map_or(json!("undefined"), |s| json!(s)),
                "valid_targets": valid,
            });
            Ok(serde_json::to_string_pretty(&value).expect("analysis serializes") + "\n")
        }
        Format::Csv => {
            let mut out = String::from("quantity,value\n");
            for (i, p) in stats.pi.iter().enumerate() {
                out.push_str(&format!("pi_{i},{}\n", fmt17(*p)));
            }
            out.push_str(&format!("delta,{}\n", fmt17(stats.delta)));
            out.push_str(&format!("t_mix,{}\n", stats.t_mix));
            out.push_str(&format!("eps_mix,{}\n", fmt17(stats.eps_mix)));
            out.push_str(&format!("t_hit,{}\n", fmt17(stats.t_hit)));
            out.push_str(&format!("target_j,{j}\n"));
            out.push_str(&format!("reversible,{}\n", stats.reversible));
            out.push_str(&format!(
                "s_star,{}\n",
                star.map_or("undefined".to_string(), fmt17)
            ));
            Ok(out)
        }
    }
}

pub fn cmd_interp(chain: &MarkovChain, j: usize, s: f64) -> CliResult<String> {
    let ps = interpolated_chain(chain, j, s).map_err(CliError::validation)?;
    let pi = stationary_distribution(chain, StationaryMethod::LinearSolve).map_err(CliError::validation)?;
    let pj = pi[j];
    let star = (pj > 0.0 && pj < 0.5).then(|| 1.0 - pj / (1.0 - pj));
    let pi_s = if s < 1.0 {
        Some(
            interpolated_stationary(chain, j, s)
                .map_err(CliError::validation)?
                .iter()
                .copied()
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let value = json!({
        "s": s,
        "target_j": j,
        "s_star": star.map_or(json!("undefined"), |v| json!(v)),
        "chain": ChainFile::from_chain(&ps),
        "pi_s": pi_s,
    });
    Ok(serde_json::to_string_pretty(&value).expect("interpolation serializes") + "\n")
}

pub fn cmd_simulate(chain: &MarkovChain, j: usize, config: &ProtocolConfig) -> CliResult<String> {
    if !chain.is_ergodic() {
        return Err(CliError::validation(Error::NotErgodic(
            chain.ergodicity().failure().expect("non-ergodic chain has a failure"),
        )));
    }
    chain.check_index(j).map_err(CliError::validation)?;
    match run_protocol(chain, j, config) {
        Ok(result) => Ok(result.to_json() + "\n"),
        Err(e @ Error::NoValidJ { .. }) => Err(CliError::new(EXIT_NO_VALID_J, e.to_string())),
        Err(e @ (Error::Range { .. } | Error::Config(_) | Error::BadSize(_) | Error::NotReversible { .. })) => {
            Err(CliError::validation(e))
        }
        Err(e) => Err(CliError::new(EXIT_SIMULATION, format!("simulation failed: {e}"))),
    }
}

pub fn cmd_sweep(pi_j: f64, eps: f64, grid: usize, format: Format) -> CliResult<String> {
    let sweep = sweep_ab(pi_j, eps, grid).map_err(CliError::validation)?;
    Ok(match format {
        Format::Csv => sweep.to_csv(),
        Format::Json => serde_json::to_string_pretty(&sweep).expect("sweep serializes") + "\n",
    })
}

/// Writes one CSV per reference pair into `dir`; returns the summary lines.
pub fn cmd_figure1(dir: &Path, grid: usize) -> CliResult<String> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut summary = String::new();
    for (eps, pi_j) in FIGURE1_PRESETS {
        let sweep = sweep_ab(pi_j, eps, grid).map_err(CliError::validation)?;
        let path = dir.join(sweep.file_name());
        fs::write(&path, sweep.to_csv()).map_err(|e| CliError::io(&path, e))?;
        summary.push_str(&format!(
            "eps={eps} pi_j={pi_j} s_star={} argmin_A={} file={}\n",
            sweep.s_star.map_or("undefined".to_string(), fmt17),
            fmt17(sweep.argmin_a),
            path.display()
        ));
    }
    Ok(summary)
}

#[derive(Debug, Clone, Serialize)]
pub struct SensitivityRow {
    #[serde(rename = "C")]
    pub c: f64,
    pub copies: u64,
    pub delta_overlap: f64,
    pub alt_stage2_cost: f64,
    pub extra_copies_cost: f64,
    pub alt_cost: Option<f64>,
    pub cheaper: Route,
}

pub fn cmd_sensitivity(
    cs: &[f64],
    eps: f64,
    delta: f64,
    delta_s: f64,
    which: GapStage,
    format: Format,
) -> CliResult<String> {
    let bad: Vec<String> = cs
        .iter()
        .filter(|&&c| !(c > 0.0 && c < 2.0))
        .map(|c| c.to_string())
        .collect();
    if !bad.is_empty() {
        return Err(CliError::new(
            EXIT_SENSITIVITY,
            format!(
                "C values outside (0, 2): {}. With a gap estimate at least twice the true gap \
                 there is no guaranteed overlap between the filtered and target states, so no \
                 number of pointer copies restores the precision.",
                bad.join(", ")
            ),
        ));
    }
    let rows = cs
        .iter()
        .map(|&c| {
            let cmp = compare_routes(c, eps, delta, delta_s, which)?;
            Ok(SensitivityRow {
                c,
                copies: cmp.copies,
                delta_overlap: cmp.delta_overlap,
                alt_stage2_cost: alt_stage2_cost(delta, cmp.delta_overlap)?,
                extra_copies_cost: cmp.extra_copies_cost,
                alt_cost: cmp.alt_cost,
                cheaper: cmp.cheaper,
            })
        })
        .collect::<Result<Vec<_>, Error>>()
        .map_err(CliError::validation)?;
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv => {
            let mut out =
                String::from("C,copies,delta_overlap,alt_stage2_cost,extra_copies_cost,alt_cost,cheaper\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    fmt17(r.c),
                    r.copies,
                    fmt17(r.delta_overlap),
                    fmt17(r.alt_stage2_cost),
                    fmt17(r.extra_copies_cost),
                    r.alt_cost.map_or("NA".to_string(), fmt17),
                    match r.cheaper {
                        Route::ExtraCopies => "extra-copies",
                        Route::AltStage2 => "alt-stage2",
                    }
                ));
            }
            out
        }
    })
}

/// Labeled ensemble member.
#[derive(Debug, Clone)]
pub struct EnsembleMember {
    pub label: String,
    pub chain: MarkovChain,
}

/// `count` chains of each size in `n_min..=n_max`; an inverted range yields an empty ensemble.
pub fn hitbound_ensemble(
    family: Family,
    n_min: usize,
    n_max: usize,
    count: u64,
    seed: u64,
) -> CliResult<Vec<EnsembleMember>> {
    let mut out = Vec::new();
    for n in n_min..=n_max {
        for k in 0..count {
            let s = seed.wrapping_add(k);
            let chain = gen_family(family, n, s).map_err(|e| CliError::new(EXIT_GENERATION, e.to_string()))?;
            out.push(EnsembleMember {
                label: format!("{}-n{n}-seed{s}", family.name()),
                chain,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct HitBoundRow {
    pub chain: String,
    pub n: usize,
    pub j: usize,
    pub s_prime: f64,
    pub delta_s: f64,
    pub t_hit: f64,
    pub alpha: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArchivedChain {
    pub label: String,
    pub j: usize,
    pub s_prime: f64,
    pub ratio: f64,
    pub chain: ChainFile,
}

#[derive(Debug, Clone)]
pub struct HitBoundAudit {
    pub rows: Vec<HitBoundRow>,
    pub failures: Vec<ArchivedChain>,
    pub csv: String,
}

/// Target for the audit: the state of least stationary mass (lowest index on ties).
pub fn audit_target(pi: &DVector<f64>) -> usize {
    pi.iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bj, bp), (j, &p)| if p < bp { (j, p) } else { (bj, bp) })
        .0
}

pub fn cmd_hitbound(ensemble: &[EnsembleMember], rule: SPrime) -> CliResult<HitBoundAudit> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut csv = String::from("chain,n,j,s_prime,delta_s,t_hit,alpha,ratio\n");
    for m in ensemble {
        let gen_err = |e: Error| CliError::new(EXIT_GENERATION, format!("{}: {e}", m.label));
        let pi = stationary_distribution(&m.chain, StationaryMethod::LinearSolve).map_err(gen_err)?;
        let j = audit_target(&pi);
        let s_prime = match rule {
            SPrime::Auto => s_star(pi[j]).map_err(gen_err)?,
            SPrime::StarOffset(d) => s_star(pi[j]).map_err(gen_err)? + d,
            SPrime::Value(v) => v,
        };
        let hb = hitting_bound_ratio(&m.chain, j, s_prime).map_err(gen_err)?;
        csv.push_str(&format!(
            "{},{},{j},{},{},{},{},{}\n",
            m.label,
            m.chain.n(),
            fmt17(hb.s_prime),
            fmt17(hb.delta_s),
            fmt17(hb.t_hit),
            fmt17(hb.alpha),
            fmt17(hb.ratio)
        ));
        if hb.ratio < 1.0 {
            failures.push(ArchivedChain {
                label: m.label.clone(),
                j,
                s_prime: hb.s_prime,
                ratio: hb.ratio,
                chain: ChainFile::from_chain(&m.chain),
            });
        }
        rows.push(HitBoundRow {
            chain: m.label.clone(),
            n: m.chain.n(),
            j,
            s_prime: hb.s_prime,
            delta_s: hb.delta_s,
            t_hit: hb.t_hit,
            alpha: hb.alpha,
            ratio: hb.ratio,
        });
    }
    Ok(HitBoundAudit { rows, failures, csv })
}
