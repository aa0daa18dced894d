//! Run configuration: cache location, solver defaults, thread budget and the
//! table of named tolerances used by checks and acceptance brackets.
//!
//! Files are plain `key = value` lines; `#` starts a comment. Tolerances are
//! written as `tol.<name> = <value>`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

pub const ENV_CACHE: &str = "SQRTLAT_CACHE";
pub const ENV_THREADS: &str = "SQRTLAT_THREADS";

/// Collocation height: `10/N` or a fixed value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HeightRule {
    TenOverN,
    Fixed(f64),
}

impl HeightRule {
    pub fn height(self, size: usize) -> f64 {
        match self {
            HeightRule::TenOverN => 10.0 / size as f64,
            HeightRule::Fixed(h) => h,
        }
    }
}

impl FromStr for HeightRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("10/N") {
            return Ok(HeightRule::TenOverN);
        }
        match t.parse::<f64>() {
            Ok(h) if h > 0.0 && h.is_finite() => Ok(HeightRule::Fixed(h)),
            _ => Err(Error::invalid(format!("height must be \"10/N\" or a positive number, got {s:?}"))),
        }
    }
}

impl fmt::Display for HeightRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightRule::TenOverN => write!(f, "10/N"),
            HeightRule::Fixed(h) => write!(f, "{h}"),
        }
    }
}

/// Every named tolerance with its default value.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("delta.max_err", 1e-6),
    ("coeff.rel", 1e-6),
    ("kloosterman.abs", 1e-12),
    ("phi.feq_residual", 1e-8),
    ("phi.residue", 1e-3),
    ("approx.abs", 1e-6),
    ("regime.middle_const", 5.0),
    ("regime.third_rel", 0.1),
    ("negint.rel", 1e-3),
    ("fnsecmom.lo", 0.3),
    ("fnsecmom.hi", 1.5),
    ("psimom.lo", 0.6),
    ("psimom.hi", 1.4),
    ("zeros.delta_slack", 4.0),
    ("zeros.rect_lo", 0.2),
    ("zeros.rect_hi", 5.0),
    ("zeros.h_abs", 1e-8),
    ("zeros.separation", 1e-6),
    ("winding.integer", 1e-3),
    ("bulk.max_abs", 1.0),
    ("l2norms.lo", 0.5),
    ("l2norms.hi", 2.0),
    ("l2sum.lo", 0.2),
    ("l2sum.hi", 3.0),
    ("l2sum.doubling_lo", 1.5),
    ("l2sum.doubling_hi", 3.0),
    ("histogram.symmetry", 0.1),
    ("histogram.bound", 3.0),
    ("interp.t1", 1e-6),
    ("interp.t4", 1e-5),
];

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub cache_dir: PathBuf,
    /// Default collocation truncation `N`.
    pub default_n: usize,
    pub height_rule: HeightRule,
    pub precision_cap_bits: u32,
    pub tolerances: BTreeMap<String, f64>,
    /// Worker threads; 0 leaves the choice to the thread pool.
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cache_dir: PathBuf::from("cache"),
            default_n: 128,
            height_rule: HeightRule::TenOverN,
            precision_cap_bits: crate::basis::contour::DEFAULT_PRECISION_CAP,
            tolerances: TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            threads: 0,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str, line: usize) -> Result<T> {
    v.parse().map_err(|_| Error::invalid(format!("line {line}: bad value {v:?} for {key}")))
}

impl Config {
    /// Overlay `key = value` text on the defaults. Unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("line {}: expected key = value", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "cache_dir" => cfg.cache_dir = PathBuf::from(v),
                "default_n" => cfg.default_n = parse_value(k, v, i + 1)?,
                "height" => cfg.height_rule = v.parse()?,
                "precision_cap_bits" => cfg.precision_cap_bits = parse_value(k, v, i + 1)?,
                "threads" => cfg.threads = parse_value(k, v, i + 1)?,
                _ => match k.strip_prefix("tol.") {
                    Some(name) if cfg.tolerances.contains_key(name) => {
                        cfg.tolerances.insert(name.to_string(), parse_value(k, v, i + 1)?);
                    }
                    _ => return Err(Error::invalid(format!("line {}: unknown key {k:?}", i + 1))),
                },
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Apply `SQRTLAT_CACHE` and `SQRTLAT_THREADS` when set.
    pub fn with_env(mut self) -> Result<Self> {
        if let Ok(dir) = std::env::var(ENV_CACHE) {
            if !dir.is_empty() {
                self.cache_dir = PathBuf::from(dir);
            }
        }
        if let Ok(t) = std::env::var(ENV_THREADS) {
            self.threads = t
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("{ENV_THREADS} must be a non-negative integer, got {t:?}")))?;
        }
        Ok(self)
    }

    /// Defaults, then the optional file, then the environment.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Self::from_file(p)?,
            None => Config::default(),
        }
        .with_env()
    }

    /// A named tolerance; every name in [`TOLERANCES`] is present.
    pub fn tol(&self, name: &str) -> f64 {
        match self.tolerances.get(name) {
            Some(v) => *v,
            None => panic!("unknown tolerance {name:?}"),
        }
    }

    /// Configure the global thread pool once; later calls are ignored.
    pub fn apply_threads(&self) {
        if self.threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(self.threads).build_global();
        }
    }

    /// Serialize in the same `key = value` format.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "cache_dir = {}\ndefault_n = {}\nheight = {}\nprecision_cap_bits = {}\nthreads = {}\n",
            self.cache_dir.display(),
            self.default_n,
            self.height_rule,
            self.precision_cap_bits,
            self.threads
        );
        for (k, v) in &self.tolerances {
            s += &format!("tol.{k} = {v:e}\n");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut c = Config::default();
        c.default_n = 300;
        c.height_rule = HeightRule::Fixed(0.02);
        c.tolerances.insert("approx.abs".into(), 2.5e-7);
        assert_eq!(Config::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Config::parse("colour = blue").is_err());
        assert!(Config::parse("tol.nonexistent = 1").is_err());
        assert!(Config::parse("default_n").is_err());
        assert!(Config::parse("height = -1").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = Config::parse("# defaults\n\nthreads = 2 # two workers\n").unwrap();
        assert_eq!(c.threads, 2);
        assert_eq!(c.height_rule.height(100), 0.1);
    }
}
