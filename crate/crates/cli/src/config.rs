//! key=value configuration: command-line arguments override config-file
//! entries, which override defaults. Unknown keys are hard errors — a silent
//! typo would quietly corrupt a study.

use std::collections::BTreeMap;
use std::path::PathBuf;

use spinlim::models::{ModelSpec, SymbolExpansion};
use spinlim::poly::SpherePolynomial;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

/// Everything a run needs, resolved from defaults, config file and flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Option<ModelSpec>,
    pub n_grid: Vec<usize>,
    pub observables: Vec<SpherePolynomial>,
    pub observable_strings: Vec<String>,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub cache_enabled: bool,
    pub cache_dir: Option<PathBuf>,
    pub workers: usize,
    pub cap_radius: f64,
    pub margin: f64,
    /// "ground" or a fixed energy target.
    pub target_energy: Option<f64>,
    pub n_small: usize,
    pub matrix_format: MatrixFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Text,
    Binary,
    Both,
}

const KNOWN_KEYS: &[&str] = &[
    "model",
    "J",
    "B",
    "lambda",
    "gamma",
    "h0",
    "h1",
    "N",
    "f",
    "seed",
    "out",
    "cache",
    "cache-dir",
    "workers",
    "cap-radius",
    "margin",
    "target",
    "n-small",
    "format",
    "config",
];

/// Raw key -> values map (f repeats; everything else is single-valued).
struct RawConfig {
    values: BTreeMap<String, String>,
    observables: Vec<String>,
}

impl RawConfig {
    fn parse_pairs<'a, I: Iterator<Item = &'a str>>(
        &mut self,
        pairs: I,
        source: &str,
    ) -> Result<()> {
        for raw in pairs {
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let (key, value) = raw
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("{source}: expected key=value, got '{raw}'")))?;
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError(format!(
                    "{source}: unknown key '{key}' (known: {})",
                    KNOWN_KEYS.join(", ")
                )));
            }
            if key == "f" {
                self.observables.push(value.to_string());
            } else {
                self.values.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }
}

impl RunConfig {
    /// Parses `args` (everything after the subcommand). A `config=FILE` key
    /// pulls defaults from the file; explicit flags win.
    pub fn from_args(_subcommand: &str, args: &[String]) -> Result<RunConfig> {
        let mut flags = RawConfig {
            values: BTreeMap::new(),
            observables: Vec::new(),
        };
        flags.parse_pairs(args.iter().map(|s| s.as_str()), "command line")?;

        let mut merged = RawConfig {
            values: BTreeMap::new(),
            observables: Vec::new(),
        };
        if let Some(path) = flags.values.get("config") {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("cannot read config file {path}: {e}")))?;
            merged.parse_pairs(text.lines(), &format!("config file {path}"))?;
        }
        // flags override file entries
        for (k, v) in &flags.values {
            merged.values.insert(k.clone(), v.clone());
        }
        // observables: flags replace the file list when given
        if !flags.observables.is_empty() {
            merged.observables = flags.observables;
        }

        let get = |key: &str| merged.values.get(key).cloned();
        let parse_f64 = |key: &str| -> Result<Option<f64>> {
            match get(key) {
                None => Ok(None),
                Some(v) => v
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|e| ConfigError(format!("key {key}: bad number '{v}': {e}"))),
            }
        };

        let model = match get("model").as_deref() {
            None => None,
            Some("cw") => Some(ModelSpec::CurieWeiss {
                coupling: parse_f64("J")?.unwrap_or(1.0),
                field: parse_f64("B")?.unwrap_or(0.5),
            }),
            Some("lmg") => Some(ModelSpec::Lmg {
                lambda: parse_f64("lambda")?.unwrap_or(1.0),
                gamma: parse_f64("gamma")?.unwrap_or(1.0),
                field: parse_f64("B")?.unwrap_or(0.0),
            }),
            Some("custom") => {
                let h0_text = get("h0")
                    .ok_or_else(|| ConfigError("model=custom requires h0=<polynomial>".into()))?;
                let h0 = SpherePolynomial::parse(&h0_text)
                    .map_err(|e| ConfigError(format!("h0: {e}")))?;
                let mut sym = SymbolExpansion::principal_only(h0);
                if let Some(h1_text) = get("h1") {
                    let h1 = SpherePolynomial::parse(&h1_text)
                        .map_err(|e| ConfigError(format!("h1: {e}")))?;
                    sym.corrections.push((1, h1.reduce_mod_sphere()));
                }
                Some(ModelSpec::CustomSymbol(sym))
            }
            Some(other) => {
                return Err(ConfigError(format!(
                    "unknown model '{other}' (want cw, lmg or custom)"
                )))
            }
        };
        if let Some(m) = &model {
            m.validate()
                .map_err(|e| ConfigError(format!("model parameters: {e}")))?;
        }

        let n_grid = match get("N") {
            None => Vec::new(),
            Some(text) => parse_n_grid(&text)?,
        };

        let mut observables = Vec::new();
        for text in &merged.observables {
            let p = SpherePolynomial::parse(text)
                .map_err(|e| ConfigError(format!("f='{text}': {e}")))?;
            observables.push(p.reduce_mod_sphere());
        }

        let seed = match get("seed") {
            None => 0x5EED_2024,
            Some(v) => v
                .parse::<u64>()
                .map_err(|e| ConfigError(format!("seed: bad integer '{v}': {e}")))?,
        };

        let cache_enabled = match get("cache").as_deref() {
            None | Some("on") => true,
            Some("off") => false,
            Some(other) => {
                return Err(ConfigError(format!("cache: want on or off, got '{other}'")))
            }
        };

        let workers = match get("workers") {
            None => std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
            Some(v) => {
                let w = v
                    .parse::<usize>()
                    .map_err(|e| ConfigError(format!("workers: bad integer '{v}': {e}")))?;
                if w == 0 {
                    return Err(ConfigError("workers must be positive".into()));
                }
                w
            }
        };

        let cap_radius = parse_f64("cap-radius")?.unwrap_or(0.3);
        let margin = parse_f64("margin")?.unwrap_or(0.2);
        if cap_radius <= 0.0 || margin <= 0.0 {
            return Err(ConfigError("cap-radius and margin must be positive".into()));
        }

        let target_energy = match get("target").as_deref() {
            None | Some("ground") => None,
            Some(v) => Some(v.parse::<f64>().map_err(|e| {
                ConfigError(format!("target: want 'ground' or a number, got '{v}': {e}"))
            })?),
        };

        let n_small = match get("n-small") {
            None => 32,
            Some(v) => v
                .parse::<usize>()
                .map_err(|e| ConfigError(format!("n-small: bad integer '{v}': {e}")))?,
        };

        let matrix_format = match get("format").as_deref() {
            None | Some("text") => MatrixFormat::Text,
            Some("binary") => MatrixFormat::Binary,
            Some("both") => MatrixFormat::Both,
            Some(other) => {
                return Err(ConfigError(format!(
                    "format: want text, binary or both, got '{other}'"
                )))
            }
        };

        Ok(RunConfig {
            model,
            n_grid,
            observables,
            observable_strings: merged.observables,
            seed,
            out_dir: PathBuf::from(get("out").unwrap_or_else(|| "out".into())),
            cache_enabled,
            cache_dir: get("cache-dir").map(PathBuf::from),
            workers,
            cap_radius,
            margin,
            target_energy,
            n_small,
            matrix_format,
        })
    }

    pub fn require_model(&self) -> Result<&ModelSpec> {
        self.model
            .as_ref()
            .ok_or_else(|| ConfigError("this command needs model=cw|lmg|custom".into()))
    }

    pub fn require_grid(&self) -> Result<&[usize]> {
        if self.n_grid.is_empty() {
            Err(ConfigError(
                "this command needs N=<list> (comma list or start:stop:factor)".into(),
            ))
        } else {
            Ok(&self.n_grid)
        }
    }
}

/// `N=16,32,64` or `N=start:stop:factor` (geometric, inclusive of stop when
/// hit exactly). The grid must be strictly increasing.
pub fn parse_n_grid(text: &str) -> Result<Vec<usize>> {
    let grid: Vec<usize> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(ConfigError(format!(
                "N range needs start:stop:factor, got '{text}'"
            )));
        }
        let start: usize = parts[0]
            .parse()
            .map_err(|e| ConfigError(format!("N start: {e}")))?;
        let stop: usize = parts[1]
            .parse()
            .map_err(|e| ConfigError(format!("N stop: {e}")))?;
        let factor: usize = parts[2]
            .parse()
            .map_err(|e| ConfigError(format!("N factor: {e}")))?;
        if start == 0 || factor < 2 || stop < start {
            return Err(ConfigError(
                "N range needs start ≥ 1, stop ≥ start, factor ≥ 2".into(),
            ));
        }
        let mut v = Vec::new();
        let mut n = start;
        while n <= stop {
            v.push(n);
            n = n.saturating_mul(factor);
        }
        v
    } else {
        let mut v = Vec::new();
        for part in text.split(',') {
            let n: usize = part
                .trim()
                .parse()
                .map_err(|e| ConfigError(format!("N value '{part}': {e}")))?;
            v.push(n);
        }
        v
    };
    if grid.is_empty() {
        return Err(ConfigError("empty N grid".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ConfigError("N grid must be strictly increasing".into()));
    }
    if grid[0] == 0 {
        return Err(ConfigError("N must be ≥ 1".into()));
    }
    Ok(grid)
}
