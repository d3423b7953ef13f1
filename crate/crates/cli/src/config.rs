//! Command-line flags, config files and their resolution into a [`RunConfig`].

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Deserialize;

use pants_core::resolvent::{GridSpec, SminMethod};
use pants_core::{DomainKind, DomainParams, Mode, Truncation};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_N: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Spectrum,
    Pseudospectrum,
    ResolventCheck,
    CommutatorReport,
    ToeplitzCheck,
    Convergence,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Pseudospectrum => "pseudospectrum",
            Command::ResolventCheck => "resolvent-check",
            Command::CommutatorReport => "commutator-report",
            Command::ToeplitzCheck => "toeplitz-check",
            Command::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DumpFormat {
    /// Row-major CSV with one "re,im" cell per entry.
    Dense,
    /// One "row col re im" line per stored entry.
    Sparse,
}

#[derive(Debug, Parser)]
#[command(name = "pants", version, about = "Truncated multiplication operators on the disk, annulus and pair of pants")]
pub struct Cli {
    /// Report to produce.
    #[arg(value_enum)]
    pub command: Command,

    /// Domain: disk, annulus or pants.
    #[arg(long)]
    pub kind: Option<String>,

    /// Centre of the second pants hole.
    #[arg(long)]
    pub a: Option<f64>,

    /// Radius of the pants hole at the origin.
    #[arg(long)]
    pub r1: Option<f64>,

    /// Radius of the pants hole at `a`.
    #[arg(long)]
    pub r2: Option<f64>,

    /// Inner radius of the annulus.
    #[arg(long)]
    pub r: Option<f64>,

    /// Truncation level.
    #[arg(long = "N")]
    pub n: Option<usize>,

    /// Pseudospectrum grid "x0,x1,y0,y1,res".
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Construction mode for zz*: exact or compressed.
    #[arg(long, default_value = "exact")]
    pub mode: String,

    /// JSON or TOML file with the keys kind, a, r1, r2, r, N.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Operator word for toeplitz-check, e.g. "z*z - zz*" (repeatable).
    #[arg(long)]
    pub word: Vec<String>,

    /// Comma-separated truncation levels for convergence.
    #[arg(long = "n-list")]
    pub n_list: Option<String>,

    /// Smallest-singular-value method for pseudospectrum: svd, forest or auto.
    /// Forest bisection matches the dense SVD to rounding and is several
    /// hundred times faster per grid point.
    #[arg(long, default_value = "forest")]
    pub method: String,

    /// Also write the matrices of z and zz*.
    #[arg(long, value_enum)]
    pub dump: Option<DumpFormat>,
}

/// Keys accepted in a config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub kind: Option<String>,
    pub a: Option<f64>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub r: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        let is_toml = path.extension().is_some_and(|e| e == "toml");
        if is_toml {
            toml::from_str(&text).map_err(|e| CliError::Input(format!("config {}: {}", path.display(), e.message())))
        } else {
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: DomainParams,
    pub n: Truncation,
    pub output_dir: PathBuf,
    pub grid: Option<GridSpec>,
    pub seed: u64,
    pub mode: Mode,
    pub words: Vec<String>,
    pub n_list: Option<Vec<usize>>,
    pub method: SminMethod,
    pub dump: Option<DumpFormat>,
}

impl RunConfig {
    pub fn kind(&self) -> DomainKind {
        self.params.kind()
    }

    pub fn n(&self) -> usize {
        self.n.n()
    }

    /// `<command>_<kind>_<N>`
    pub fn stem(&self) -> String {
        format!("{}_{}_{}", self.command.as_str(), self.kind(), self.n())
    }
}

fn bad(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("bad value for `{key}`: {msg}"))
}

pub fn parse_grid(s: &str) -> Result<GridSpec, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(bad("grid", format!("expected \"x0,x1,y0,y1,res\", got {s:?}")));
    }
    let mut v = [0.0; 4];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| bad("grid", format!("{p:?} is not a number")))?;
    }
    let res = parts[4].parse().map_err(|_| bad("grid", format!("{:?} is not a resolution", parts[4])))?;
    let g = GridSpec { x0: v[0], x1: v[1], y0: v[2], y1: v[3], res };
    g.validate().map_err(|e| bad("grid", e))?;
    Ok(g)
}

fn parse_n_list(s: &str) -> Result<Vec<usize>, CliError> {
    let list = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad("n-list", format!("{p:?} is not an integer"))))
        .collect::<Result<Vec<_>, _>>()?;
    for &n in &list {
        Truncation::new(n).map_err(|e| bad("n-list", e))?;
    }
    Ok(list)
}

/// Merge flags over the config file and validate everything.
pub fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let kind_str = cli.kind.or(file.kind).unwrap_or_else(|| "pants".into());
    let kind: DomainKind = kind_str.parse().map_err(|e| bad("kind", e))?;
    let a = cli.a.or(file.a);
    let r1 = cli.r1.or(file.r1);
    let r2 = cli.r2.or(file.r2);
    let r = cli.r.or(file.r);
    let unused = |key: &str, v: Option<f64>| match v {
        Some(_) => Err(bad(key, format!("not a parameter of the {kind} domain"))),
        None => Ok(()),
    };
    let params = match kind {
        DomainKind::Disk => {
            for (k, v) in [("a", a), ("r1", r1), ("r2", r2), ("r", r)] {
                unused(k, v)?;
            }
            DomainParams::Disk
        }
        DomainKind::Annulus => {
            for (k, v) in [("a", a), ("r1", r1), ("r2", r2)] {
                unused(k, v)?;
            }
            DomainParams::annulus(r.unwrap_or(0.5)).map_err(|e| bad("r", e))?
        }
        DomainKind::Pants => {
            unused("r", r)?;
            let DomainParams::Pants { a: a0, r1: r10, r2: r20 } = DomainParams::default_pants() else {
                unreachable!()
            };
            let (a, r1, r2) = (a.unwrap_or(a0), r1.unwrap_or(r10), r2.unwrap_or(r20));
            DomainParams::pants(a, r1, r2).map_err(|e| bad("a, r1, r2", e))?
        }
    };
    let n = Truncation::new(cli.n.or(file.n).unwrap_or(DEFAULT_N)).map_err(|e| bad("N", e))?;
    let mode: Mode = cli.mode.parse().map_err(|e| bad("mode", e))?;
    let method: SminMethod = cli.method.parse().map_err(|e| bad("method", e))?;
    let grid = cli.grid.as_deref().map(parse_grid).transpose()?;
    let n_list = cli.n_list.as_deref().map(parse_n_list).transpose()?;
    fs::create_dir_all(&cli.out).map_err(|e| bad("out", format!("{}: {e}", cli.out.display())))?;
    Ok(RunConfig {
        command: cli.command,
        params,
        n,
        output_dir: cli.out,
        grid,
        seed: cli.seed,
        mode,
        words: cli.word,
        n_list,
        method,
        dump: cli.dump,
    })
}
