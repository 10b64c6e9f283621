use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::emit::Format;
use super::experiments::Experiment;
use crate::error::{Error, Result};

/// Everything needed to reproduce a benchmark run.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    /// Experiment-specific knobs such as `k`, `d` or `budget`.
    pub params: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, sizes: Vec<usize>, trials: usize, seed: u64) -> Result<Self> {
        let c = Self {
            experiment,
            sizes,
            trials,
            seed,
            out: None,
            format: Format::Csv,
            jobs: 1,
            params: BTreeMap::new(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Usage("trials must be at least 1".into()));
        }
        if self.sizes.is_empty() {
            return Err(Error::Usage("no sizes given".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Usage(format!(
                "sizes must be strictly increasing: {:?}",
                self.sizes
            )));
        }
        if self.jobs == 0 {
            return Err(Error::Usage("jobs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn param<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.params
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Usage(format!("bad value {v:?} for parameter {key}")))
            })
            .transpose()
    }

    /// Parses `key = value` lines; `#` starts a comment. Recognized keys
    /// are `experiment`, `sizes`, `trials`, `seed`, `out`, `format` and
    /// `jobs`; anything else becomes an experiment parameter.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_map(parse_pairs(text)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Builds a config from raw key/value pairs, filling defaults.
    pub fn from_map(mut map: BTreeMap<String, String>) -> Result<Self> {
        let experiment: Experiment = map
            .remove("experiment")
            .ok_or_else(|| Error::Usage("no experiment given".into()))?
            .parse()?;
        let sizes = match map.remove("sizes") {
            Some(s) => parse_sizes(&s)?,
            None => experiment.default_sizes(),
        };
        let num = |map: &mut BTreeMap<String, String>, key: &str, default: u64| -> Result<u64> {
            map.remove(key).map_or(Ok(default), |v| {
                v.parse()
                    .map_err(|_| Error::Usage(format!("bad value {v:?} for {key}")))
            })
        };
        let trials = num(&mut map, "trials", 10)? as usize;
        let seed = num(&mut map, "seed", 0)?;
        let jobs = num(&mut map, "jobs", 1)? as usize;
        let out = map.remove("out").map(PathBuf::from);
        let format = match map.remove("format") {
            Some(f) => f.parse()?,
            None => Format::Csv,
        };
        let c = Self {
            experiment,
            sizes,
            trials,
            seed,
            out,
            format,
            jobs,
            params: map,
        };
        c.validate()?;
        Ok(c)
    }
}

/// Raw `key = value` pairs of a config file.
pub(crate) fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(Error::Parse {
            line: i + 1,
            msg: format!("expected key=value, got {line:?}"),
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Size lists: comma-separated items, each a number, an additive range
/// `a..b` or `a..b:step`, or a geometric range `a..b:xK`. Ranges include
/// `b` when the progression hits it.
pub fn parse_sizes(spec: &str) -> Result<Vec<usize>> {
    let bad = |msg: String| Error::Usage(format!("bad size list {spec:?}: {msg}"));
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let num = |s: &str| s.trim().parse::<usize>().map_err(|e| bad(format!("{s:?}: {e}")));
        let Some((a, rest)) = item.split_once("..") else {
            out.push(num(item)?);
            continue;
        };
        let (b, step) = match rest.split_once(':') {
            Some((b, step)) => (b, Some(step.trim())),
            None => (rest, None),
        };
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad(format!("range {a}..{b} is empty")));
        }
        match step {
            Some(s) if s.starts_with('x') => {
                let k = num(&s[1..])?;
                if k < 2 || a == 0 {
                    return Err(bad("geometric ranges need a >= 1 and factor >= 2".into()));
                }
                let mut v = a;
                while v <= b {
                    out.push(v);
                    v *= k;
                }
            }
            s => {
                let step = s.map_or(Ok(1), num)?;
                if step == 0 {
                    return Err(bad("step must be positive".into()));
                }
                out.extend((a..=b).step_by(step));
            }
        }
    }
    if out.is_empty() {
        return Err(bad("no sizes".into()));
    }
    Ok(out)
}
