//! TOML configuration: the file schema, flag overrides, and the resolved
//! `RunConfig` that is echoed by `--dump-config` and hashed for the cache.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use heightgap::arith::parse_rational;
use heightgap::gaplab::default_epsilon_grid;
use heightgap::qalg::PlaceRef;
use heightgap::roots::MAX_BITS;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_PRECISION: u32 = 192;
pub const DEFAULT_NMAX: usize = 8;

/// Integer or rational string ("3/2").
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Str(String),
}

/// Matrix entry: a rational, or power-basis coefficients of a field element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Scalar(Scalar),
    Coeffs(Vec<Scalar>),
}

pub type MatrixCfg = Vec<Vec<Entry>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldCfg {
    /// Coefficients low to high.
    pub minpoly: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraCfg {
    #[serde(default)]
    pub ram_f: Vec<PlaceRef>,
    /// Real roots where the algebra splits (factors PGL2(R)); default all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_real: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeCfg {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    /// Shortcut for the Bianchi group of Q(sqrt -D) with its standard generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bianchi: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<MatrixCfg>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<PlaceRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_hint: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasePointCfg {
    #[serde(default)]
    pub h2: Vec<[f64; 2]>,
    /// (x, y, t) with t > 0.
    #[serde(default)]
    pub h3: Vec<[f64; 3]>,
}

/// Run parameters as written in a file: everything optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub precision_bits: Option<u32>,
    pub n_max: Option<usize>,
    pub nheight_n_max: Option<usize>,
    pub zeta_prime_bound: Option<u64>,
    pub mode: Option<String>,
    pub max_candidates: Option<usize>,
    pub max_products: Option<usize>,
    pub eig_words: Option<usize>,
    pub eps: Option<Vec<f64>>,
    pub radius: Option<usize>,
    pub bianchi: Option<Vec<u64>>,
    pub minpoly: Option<Vec<Scalar>>,
    pub root: Option<usize>,
    pub words: Option<Vec<String>>,
    pub base_point: Option<BasePointCfg>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format_version: Option<u32>,
    pub command: Option<String>,
    pub field: Option<FieldCfg>,
    pub algebra: Option<AlgebraCfg>,
    pub lattice: Option<LatticeCfg>,
    pub run: Option<RunFile>,
}

/// Fully resolved parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub precision_bits: u32,
    pub n_max: usize,
    pub nheight_n_max: usize,
    pub zeta_prime_bound: u64,
    pub mode: String,
    pub max_candidates: usize,
    pub max_products: usize,
    pub eig_words: usize,
    pub eps: Vec<f64>,
    pub radius: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bianchi: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<BasePointCfg>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub format_version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldCfg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraCfg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeCfg>,
    pub run: Params,
}

/// Values given on the command line; None when the flag is absent.
#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub precision_bits: Option<u32>,
    pub n_max: Option<usize>,
    pub nheight_n_max: Option<usize>,
    pub zeta_prime_bound: Option<u64>,
    pub mode: Option<String>,
    pub max_candidates: Option<usize>,
    pub eps: Option<Vec<f64>>,
    pub radius: Option<usize>,
    pub bianchi: Option<Vec<u64>>,
    pub minpoly: Option<Vec<Scalar>>,
    pub root: Option<usize>,
    pub words: Option<Vec<String>>,
    pub matrices: Option<Vec<MatrixCfg>>,
}

pub fn parse_file(text: &str, origin: &str) -> Result<FileConfig> {
    let cfg: FileConfig = toml::from_str(text).map_err(|e| anyhow!("{origin}: {e}"))?;
    if let Some(v) = cfg.format_version {
        if v != FORMAT_VERSION {
            bail!("{origin}: format_version {v} is not supported (expected {FORMAT_VERSION})");
        }
    }
    Ok(cfg)
}

pub fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_file(&text, &path.display().to_string())
}

/// Matrices in JSON: a list of 2x2 matrices, or a single matrix of rationals.
pub fn load_matrices_json(path: &Path) -> Result<Vec<MatrixCfg>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    if let Ok(m) = serde_json::from_value::<Vec<Vec<Scalar>>>(v.clone()) {
        return Ok(vec![m.into_iter().map(|r| r.into_iter().map(Entry::Scalar).collect()).collect()]);
    }
    serde_json::from_value(v).map_err(|e| anyhow!("{}: expected a list of 2x2 matrices: {e}", path.display()))
}

pub fn parse_scalar_list(s: &str, field: &str) -> Result<Vec<Scalar>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            parse_rational(t).ok_or_else(|| anyhow!("parse error in {field}: malformed rational {t:?}"))?;
            Ok(match t.parse::<i64>() {
                Ok(n) => Scalar::Int(n),
                Err(_) => Scalar::Str(t.to_string()),
            })
        })
        .collect()
}

fn pick<T: Clone + PartialEq + std::fmt::Debug>(name: &str, flag: Option<T>, file: Option<T>, default: T, warnings: &mut Vec<String>) -> T {
    match (flag, file) {
        (Some(f), Some(v)) => {
            if f != v {
                warnings.push(format!("flag value {f:?} overrides {name} = {v:?} from the config file"));
            }
            f
        }
        (Some(f), None) => f,
        (None, Some(v)) => v,
        (None, None) => default,
    }
}

pub struct Resolved {
    pub config: RunConfig,
    pub warnings: Vec<String>,
}

pub fn resolve(command: &str, file: Option<FileConfig>, flags: Flags) -> Result<Resolved> {
    let file = file.unwrap_or_default();
    if let Some(c) = &file.command {
        if c != command {
            bail!("config file is for command {c:?}, not {command:?}");
        }
    }
    let r = file.run.clone().unwrap_or_default();
    let mut w = Vec::new();
    let mut field = file.field.clone();
    let field_bits = field.as_ref().and_then(|f| f.precision_bits);
    if let (Some(a), Some(b)) = (field_bits, r.precision_bits) {
        if a != b {
            bail!("field.precision_bits = {a} conflicts with run.precision_bits = {b}");
        }
    }
    let file_bits = field_bits.or(r.precision_bits);
    let precision_bits = pick("field.precision_bits", flags.precision_bits, file_bits, DEFAULT_PRECISION, &mut w);
    if let Some(f) = field.as_mut() {
        f.precision_bits = Some(precision_bits);
    }
    let n_max = pick("run.n_max", flags.n_max, r.n_max, DEFAULT_NMAX, &mut w);
    let params = Params {
        precision_bits,
        n_max,
        nheight_n_max: pick("run.nheight_n_max", flags.nheight_n_max, r.nheight_n_max, n_max, &mut w),
        zeta_prime_bound: pick("run.zeta_prime_bound", flags.zeta_prime_bound, r.zeta_prime_bound, 100_000, &mut w),
        mode: pick("run.mode", flags.mode, r.mode, "direct".to_string(), &mut w),
        max_candidates: pick("run.max_candidates", flags.max_candidates, r.max_candidates, 2_000_000, &mut w),
        max_products: r.max_products.unwrap_or(50_000),
        eig_words: r.eig_words.unwrap_or(2_000),
        eps: pick("run.eps", flags.eps, r.eps, default_epsilon_grid(), &mut w),
        radius: pick("run.radius", flags.radius, r.radius, 8, &mut w),
        bianchi: pick("run.bianchi", flags.bianchi, r.bianchi, Vec::new(), &mut w),
        minpoly: pick("run.minpoly", flags.minpoly.map(Some), r.minpoly.map(Some), None, &mut w),
        root: pick("run.root", flags.root.map(Some), r.root.map(Some), None, &mut w),
        words: pick("run.words", flags.words, r.words, Vec::new(), &mut w),
        base_point: r.base_point,
    };
    let mut lattice = file.lattice.clone();
    if let Some(m) = flags.matrices {
        let l = lattice.get_or_insert_with(Default::default);
        if !l.generators.is_empty() && l.generators != m {
            w.push("matrices from --matrices override lattice.generators from the config file".into());
        }
        l.generators = m;
    }
    let config = RunConfig { format_version: FORMAT_VERSION, command: command.to_string(), field, algebra: file.algebra, lattice, run: params };
    validate(&config)?;
    Ok(Resolved { config, warnings: w })
}

fn validate(c: &RunConfig) -> Result<()> {
    let p = &c.run;
    if !(32..=MAX_BITS).contains(&p.precision_bits) {
        bail!("precision_bits = {} is out of range [32, {MAX_BITS}]", p.precision_bits);
    }
    if p.n_max == 0 || p.n_max > 64 {
        bail!("run.n_max = {} is out of range [1, 64]", p.n_max);
    }
    if p.nheight_n_max == 0 || p.nheight_n_max > 64 {
        bail!("run.nheight_n_max = {} is out of range [1, 64]", p.nheight_n_max);
    }
    if p.zeta_prime_bound < 2 {
        bail!("run.zeta_prime_bound must be at least 2");
    }
    if p.mode != "direct" && p.mode != "double-commutator" {
        bail!("run.mode must be \"direct\" or \"double-commutator\", got {:?}", p.mode);
    }
    if p.eps.is_empty() || p.eps.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
        bail!("run.eps must be a non-empty list of positive numbers");
    }
    if p.radius == 0 || p.radius > 24 {
        bail!("run.radius = {} is out of range [1, 24]", p.radius);
    }
    if let Some(f) = &c.field {
        check_scalars(&f.minpoly, "field.minpoly")?;
    }
    if let Some(m) = &p.minpoly {
        check_scalars(m, "run.minpoly")?;
    }
    if let Some(l) = &c.lattice {
        if l.bianchi.is_some() && !l.generators.is_empty() {
            bail!("lattice.bianchi and lattice.generators are mutually exclusive");
        }
        for (i, g) in l.generators.iter().enumerate() {
            if g.len() != 2 || g.iter().any(|r| r.len() != 2) {
                bail!("lattice.generators[{i}]: expected a 2x2 matrix");
            }
            for (r, row) in g.iter().enumerate() {
                for (col, e) in row.iter().enumerate() {
                    let name = format!("lattice.generators[{i}][{r}][{col}]");
                    match e {
                        Entry::Scalar(s) => check_scalars(std::slice::from_ref(s), &name)?,
                        Entry::Coeffs(v) => check_scalars(v, &name)?,
                    }
                }
            }
        }
        if let Some(h) = &l.index_hint {
            parse_rational(h).ok_or_else(|| anyhow!("parse error in lattice.index_hint: malformed rational {h:?}"))?;
        }
    }
    Ok(())
}

fn check_scalars(v: &[Scalar], name: &str) -> Result<()> {
    for (i, s) in v.iter().enumerate() {
        if let Scalar::Str(t) = s {
            if parse_rational(t).is_none() {
                let at = if v.len() > 1 { format!("{name}[{i}]") } else { name.to_string() };
                bail!("parse error in {at}: malformed rational {t:?}");
            }
        }
    }
    Ok(())
}

pub fn to_toml(c: &RunConfig) -> String {
    toml::to_string(c).expect("config serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let r = resolve("gap-check", None, Flags::default()).unwrap();
        assert_eq!(r.config.run.precision_bits, 192);
        assert_eq!(r.config.run.n_max, 8);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn round_trip() {
        let text = r#"
            [field]
            minpoly = [1, 0, 1]
            [lattice]
            generators = [[["1", "1"], [0, 1]], [[1, [0, 1]], [0, 1]]]
            index_hint = "3/2"
            [run]
            eps = [0.1, 0.5]
        "#;
        let file = parse_file(text, "t").unwrap();
        let r = resolve("covol", Some(file), Flags { n_max: Some(5), ..Default::default() }).unwrap();
        let back: RunConfig = toml::from_str(&to_toml(&r.config)).unwrap();
        assert_eq!(back, r.config);
        // the dumped config is itself a valid input with the same resolution
        let again = resolve("covol", Some(parse_file(&to_toml(&r.config), "dump").unwrap()), Flags::default()).unwrap();
        assert_eq!(again.config, r.config);
    }

    #[test]
    fn flag_wins_with_warning() {
        let file = parse_file("[run]\nn_max = 6\n", "t").unwrap();
        let r = resolve("gap-check", Some(file), Flags { n_max: Some(8), ..Default::default() }).unwrap();
        assert_eq!(r.config.run.n_max, 8);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn malformed_rational_names_field() {
        let file = parse_file("[field]\nminpoly = [1, 0, 1]\n[lattice]\ngenerators = [[[\"3//2\", 0], [0, 1]]]\n", "t").unwrap();
        let e = resolve("height", Some(file), Flags::default()).err().unwrap().to_string();
        assert!(e.contains("lattice.generators[0][0][0]") && e.contains("3//2"), "{e}");
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(parse_file("[run]\nnmax = 3\n", "t").is_err());
        assert!(parse_file("[lattice]\nbianchi = 1\nextra = 2\n", "t").is_err());
    }

    #[test]
    fn out_of_range() {
        assert!(resolve("gap-check", None, Flags { n_max: Some(0), ..Default::default() }).is_err());
        assert!(resolve("gap-check", None, Flags { mode: Some("sideways".into()), ..Default::default() }).is_err());
    }
}
