//! Grammars for the structured flag values.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hardness::Mode;
use crate::objectives::{SyntheticKind, SyntheticSpec};

/// Splits `a=1,b=x;y` into key/value pairs.
fn key_values(body: &str) -> Result<Vec<(String, String)>> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for token in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token.split_once('=') {
            Some((key, value)) => pairs.push((key.trim().to_string(), value.trim().to_string())),
            // A bare token continues the previous list value: `g=Drama,Comedy`.
            None => match pairs.last_mut() {
                Some((_, value)) => {
                    value.push(';');
                    value.push_str(token);
                }
                None => return Err(Error::Parse(format!("expected key=value, got `{token}`"))),
            },
        }
    }
    Ok(pairs)
}

fn parse_field<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("`{key}={value}` has an invalid value")))
}

fn take<T: FromStr>(pairs: &[(String, String)], key: &str) -> Result<Option<T>> {
    pairs
        .iter()
        .find(|(k, _)| k == key)
        .map(|(k, v)| parse_field(k, v))
        .transpose()
}

fn require<T: FromStr>(pairs: &[(String, String)], key: &str, context: &str) -> Result<T> {
    take(pairs, key)?.ok_or_else(|| Error::Parse(format!("{context} needs `{key}=`")))
}

fn reject_unknown(pairs: &[(String, String)], known: &[&str], context: &str) -> Result<()> {
    match pairs.iter().find(|(k, _)| !known.contains(&k.as_str())) {
        Some((k, _)) => Err(Error::Parse(format!("{context}: unknown key `{k}`"))),
        None => Ok(()),
    }
}

/// `--constraint` value.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSpec {
    Unconstrained,
    Uniform { m: usize },
    Partition { file: PathBuf },
    Genre { m: usize, mg: usize, favorites: Vec<String> },
    Hard { k: usize, h: usize, m: usize, mode: Mode },
}

impl FromStr for ConstraintSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        match kind.trim() {
            "none" => Ok(Self::Unconstrained),
            "uniform" => Ok(Self::Uniform { m: parse_field("uniform", body.trim())? }),
            "partition" if !body.trim().is_empty() => Ok(Self::Partition { file: PathBuf::from(body.trim()) }),
            "genre" => {
                let pairs = key_values(body)?;
                reject_unknown(&pairs, &["m", "mg", "g"], "genre constraint")?;
                let favorites: Vec<String> = require::<String>(&pairs, "g", "genre constraint")?
                    .split(';')
                    .map(str::trim)
                    .filter(|g| !g.is_empty())
                    .map(String::from)
                    .collect();
                if favorites.is_empty() {
                    return Err(Error::Parse("genre constraint needs at least one genre in `g=`".into()));
                }
                Ok(Self::Genre {
                    m: require(&pairs, "m", "genre constraint")?,
                    mg: require(&pairs, "mg", "genre constraint")?,
                    favorites,
                })
            }
            "hard" => {
                let pairs = key_values(body)?;
                reject_unknown(&pairs, &["k", "h", "m", "mode"], "hard constraint")?;
                let mode = match take::<String>(&pairs, "mode")? {
                    Some(mode) => mode.parse()?,
                    None => Mode::Extendible,
                };
                Ok(Self::Hard {
                    k: require(&pairs, "k", "hard constraint")?,
                    h: require(&pairs, "h", "hard constraint")?,
                    m: require(&pairs, "m", "hard constraint")?,
                    mode,
                })
            }
            _ => Err(Error::Parse(format!(
                "unknown constraint `{s}`; expected uniform:M, partition:FILE, genre:m=..,mg=..,g=.., hard:k=..,h=..,m=..,mode=.. or none"
            ))),
        }
    }
}

impl fmt::Display for ConstraintSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Unconstrained => f.write_str("none"),
            Self::Uniform { m } => write!(f, "uniform:{m}"),
            Self::Partition { file } => write!(f, "partition:{}", file.display()),
            Self::Genre { m, mg, favorites } => write!(f, "genre:m={m},mg={mg},g={}", favorites.join(";")),
            Self::Hard { k, h, m, mode } => write!(f, "hard:k={k},h={h},m={m},mode={mode}"),
        }
    }
}

/// `--synthetic` value: `KIND:n=INT[,seed=U64,density=F,lambda=F,items=INT,genres=INT]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSource {
    pub spec: SyntheticSpec,
    /// Number of synthetic genre labels `g0..`; zero for none.
    pub genres: usize,
}

impl FromStr for SyntheticSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        let kind: SyntheticKind = kind.trim().parse()?;
        let pairs = key_values(body)?;
        reject_unknown(&pairs, &["n", "seed", "density", "lambda", "items", "genres"], "synthetic instance")?;
        let mut spec = SyntheticSpec::new(kind, require(&pairs, "n", "synthetic instance")?, take(&pairs, "seed")?.unwrap_or(0));
        if let Some(d) = take(&pairs, "density")? {
            spec = spec.density(d);
        }
        if let Some(l) = take(&pairs, "lambda")? {
            spec = spec.lambda(l);
        }
        if let Some(items) = take(&pairs, "items")? {
            spec = spec.items(items);
        }
        Ok(Self { spec, genres: take(&pairs, "genres")?.unwrap_or(0) })
    }
}

impl fmt::Display for SyntheticSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.spec;
        let kind = match s.kind {
            SyntheticKind::Modular => "modular",
            SyntheticKind::CoverageDispersion => "coverage-dispersion",
            SyntheticKind::Cut => "cut",
            SyntheticKind::WeightedCoverage => "weighted-coverage",
        };
        write!(
            f,
            "{kind}:n={},seed={},density={},lambda={},items={},genres={}",
            s.n, s.seed, s.density, s.lambda, s.items, self.genres
        )
    }
}

/// A parameter a benchmark can sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// Per-genre limit of a genre constraint.
    Mg,
    /// Total limit of a genre or uniform constraint.
    M,
    /// Synthetic ground-set size.
    N,
    Ell,
    Lambda,
    P,
}

impl SweepParam {
    pub fn is_integer(self) -> bool {
        !matches!(self, Self::Lambda | Self::P)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Mg => "mg",
            Self::M => "m",
            Self::N => "n",
            Self::Ell => "ell",
            Self::Lambda => "lambda",
            Self::P => "p",
        }
    }
}

/// `--sweep` value: `PARAM=LO..HI` (inclusive, integer step 1) or `PARAM=a;b;c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl Sweep {
    /// Render a sweep value for reports.
    pub fn format(&self, v: f64) -> String {
        if self.param.is_integer() {
            format!("{}", v as u64)
        } else {
            format!("{v}")
        }
    }

    pub fn json(&self, v: f64) -> serde_json::Value {
        if self.param.is_integer() {
            serde_json::Value::from(v as u64)
        } else {
            serde_json::Value::from(v)
        }
    }
}

impl FromStr for Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, body) = s
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("sweep must look like PARAM=LO..HI, got `{s}`")))?;
        let param = match name.trim() {
            "mg" => SweepParam::Mg,
            "m" => SweepParam::M,
            "n" => SweepParam::N,
            "ell" => SweepParam::Ell,
            "lambda" => SweepParam::Lambda,
            "p" => SweepParam::P,
            other => return Err(Error::Parse(format!("cannot sweep `{other}`; use mg, m, n, ell, lambda or p"))),
        };
        let values: Vec<f64> = match body.split_once("..") {
            Some((lo, hi)) => {
                let lo: u64 = parse_field(name, lo.trim())?;
                let hi: u64 = parse_field(name, hi.trim())?;
                if lo > hi {
                    return Err(Error::Parse(format!("empty sweep range {lo}..{hi}")));
                }
                (lo..=hi).map(|v| v as f64).collect()
            }
            None => body
                .split([';', ','])
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(|v| parse_field(name, v))
                .collect::<Result<_>>()?,
        };
        if values.is_empty() {
            return Err(Error::Parse("sweep has no values".into()));
        }
        if param.is_integer() && values.iter().any(|v| v.fract() != 0.0 || *v < 0.0) {
            return Err(Error::Parse(format!("sweep over `{}` needs non-negative integers", param.name())));
        }
        Ok(Self { param, values })
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let values: Vec<String> = self.values.iter().map(|&v| self.format(v)).collect();
        write!(f, "{}={}", self.param.name(), values.join(";"))
    }
}
