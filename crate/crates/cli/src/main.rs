mod cache;
mod commands;
mod config;
mod model;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::commands::Status;
use crate::config::{Flags, FORMAT_VERSION};

/// Heights, covolumes and generic elements for arithmetic lattices.
#[derive(Parser, Debug)]
#[command(name = "heightgap", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Weil height of matrices, place by place.
    Height(Common),
    /// Bracket for the normalized height of a finite matrix set.
    Nheight(Common),
    /// Covolume interval of a maximal lattice from (k, Ram_f, S).
    Covol(Common),
    /// Search the generators' words for a generic element.
    GenericSearch(Common),
    /// Split the discriminant of an algebraic number by the unit circle.
    DiscDecompose(Common),
    /// Height-gap check for one lattice.
    GapCheck(Common),
    /// Height-gap check over Bianchi groups.
    GapScan(Common),
    /// Classify the subgroups generated by short displacements.
    MargulisScan(Common),
    /// Euler-product interval for the Dedekind zeta value at 2.
    Zeta(Common),
    /// Types, embeddings and lengths of words in the generators.
    MobiusInspect(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// TOML config (field, algebra, lattice, run parameters).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// JSON matrices (a list of 2x2 matrices, or one matrix of rationals).
    #[arg(long)]
    matrices: Option<PathBuf>,
    /// Polynomial coefficients, low to high, e.g. 1,0,1.
    #[arg(long, allow_hyphen_values = true)]
    minpoly: Option<String>,
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    nheight_nmax: Option<usize>,
    #[arg(long)]
    zeta_bound: Option<u64>,
    /// direct | double-commutator
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    max_candidates: Option<usize>,
    /// Comma-separated epsilon values.
    #[arg(long)]
    eps: Option<String>,
    /// Word length bound for the Margulis scan.
    #[arg(long)]
    radius: Option<usize>,
    /// Comma-separated D values.
    #[arg(long)]
    bianchi: Option<String>,
    /// Root index for disc-decompose (default: largest modulus).
    #[arg(long)]
    root: Option<usize>,
    /// Word to inspect (repeatable).
    #[arg(long = "word")]
    words: Vec<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the CSV table here.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
    /// Print the resolved config as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

impl Cmd {
    fn split(&self) -> (&'static str, &Common) {
        match self {
            Cmd::Height(c) => ("height", c),
            Cmd::Nheight(c) => ("nheight", c),
            Cmd::Covol(c) => ("covol", c),
            Cmd::GenericSearch(c) => ("generic-search", c),
            Cmd::DiscDecompose(c) => ("disc-decompose", c),
            Cmd::GapCheck(c) => ("gap-check", c),
            Cmd::GapScan(c) => ("gap-scan", c),
            Cmd::MargulisScan(c) => ("margulis-scan", c),
            Cmd::Zeta(c) => ("zeta", c),
            Cmd::MobiusInspect(c) => ("mobius-inspect", c),
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, name: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| anyhow::anyhow!("parse error in {name}: bad value {:?}", t.trim())))
        .collect()
}

fn flags(c: &Common) -> Result<Flags> {
    Ok(Flags {
        precision_bits: c.precision,
        n_max: c.nmax,
        nheight_n_max: c.nheight_nmax,
        zeta_prime_bound: c.zeta_bound,
        mode: c.mode.clone(),
        max_candidates: c.max_candidates,
        eps: c.eps.as_deref().map(|s| parse_list(s, "--eps")).transpose()?,
        radius: c.radius,
        bianchi: c.bianchi.as_deref().map(|s| parse_list(s, "--bianchi")).transpose()?,
        minpoly: c.minpoly.as_deref().map(|s| config::parse_scalar_list(s, "--minpoly")).transpose()?,
        root: c.root,
        words: (!c.words.is_empty()).then(|| c.words.clone()),
        matrices: c.matrices.as_deref().map(config::load_matrices_json).transpose()?,
    })
}

fn emit(c: &Common, json: &str, csv: Option<&str>) -> Result<()> {
    match &c.out {
        Some(p) => std::fs::write(p, json).with_context(|| format!("cannot write {}", p.display()))?,
        None => print!("{json}"),
    }
    if let Some(p) = &c.csv {
        match csv {
            Some(t) => std::fs::write(p, t).with_context(|| format!("cannot write {}", p.display()))?,
            None => eprintln!("warning: this command has no CSV table; {} not written", p.display()),
        }
    }
    Ok(())
}

fn real_main(cli: Cli) -> Result<i32> {
    let (name, common) = cli.cmd.split();
    let file = common.spec.as_deref().map(config::load_file).transpose()?;
    let resolved = config::resolve(name, file, flags(common)?)?;
    for w in &resolved.warnings {
        eprintln!("warning: {w}");
    }
    let toml = config::to_toml(&resolved.config);
    if common.dump_config {
        print!("{toml}");
        return Ok(0);
    }
    let key = cache::key(&toml);
    if !common.no_cache {
        if let Some(hit) = cache::load(&key) {
            emit(common, &hit.json, hit.csv.as_deref())?;
            return Ok(hit.code);
        }
    }
    let out = commands::run(&resolved.config)?;
    let mut report = match out.report {
        serde_json::Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("report".into(), other);
            m
        }
    };
    report.insert("format_version".into(), FORMAT_VERSION.into());
    report.insert("command".into(), name.into());
    report.insert("config_hash".into(), key.clone().into());
    let json = serde_json::to_string_pretty(&serde_json::Value::Object(report))? + "\n";
    let code = if out.status == Status::Inconclusive { 2 } else { 0 };
    if !common.no_cache {
        if let Err(e) = cache::store(&key, &cache::Entry { json: json.clone(), csv: out.csv.clone(), code }) {
            eprintln!("warning: cache not written: {e}");
        }
    }
    emit(common, &json, out.csv.as_deref())?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match real_main(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
