//! Run configuration: a flat `key = value` file (or the `config` block of a
//! run manifest), validated into [`RunConfig`] before any computation.

use crate::error::{Error, Result};
use crate::experiments::GridPolicy;
use crate::params::ProblemParams;
use crate::solver::SolveOptions;
use std::collections::BTreeMap;
use std::path::Path;

/// Everything a run needs: problem parameters, domain sizes, grids, solver
/// knobs, experiment lists. Unknown keys are rejected at parse time.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ProblemParams,
    /// Ball radius for single solves.
    pub radius: f64,
    /// Truncation radius for the whole-space solve.
    pub truncation: f64,
    /// Grid cells per side for single solves (policy-derived when absent).
    pub grid_n: Option<usize>,
    /// Sweep policy spacing (fixed-h default) …
    pub sweep_h: f64,
    /// … or a fixed side count when set.
    pub sweep_n: Option<usize>,
    pub r_list: Vec<f64>,
    pub t_list: Vec<f64>,
    pub cutoff_r_list: Vec<f64>,
    pub solver: SolveOptions,
    pub threads: usize,
}

impl RunConfig {
    /// The reference configuration: (2, 3/4, 3, 2, 1/2, 1), R-sweep over
    /// {1, 2, 4, 8, 16, 24}.
    pub fn reference() -> Self {
        RunConfig {
            params: ProblemParams::reference(),
            radius: 8.0,
            truncation: 64.0,
            grid_n: None,
            sweep_h: 0.25,
            sweep_n: None,
            r_list: vec![1.0, 2.0, 4.0, 8.0, 16.0, 24.0],
            t_list: vec![4.0, 8.0, 16.0, 32.0],
            cutoff_r_list: vec![1.0, 2.0, 3.0, 4.0, 6.0, 8.0],
            solver: SolveOptions::default(),
            threads: 1,
        }
    }

    pub fn sweep_policy(&self) -> GridPolicy {
        match self.sweep_n {
            Some(n) => GridPolicy::FixedSide { n },
            None => GridPolicy::FixedSpacing { h: self.sweep_h },
        }
    }

    /// Grid dimensions for a single-ball solve at `radius`: explicit n when
    /// configured, else the default resolution ladder (128 per side up to
    /// R = 8, 192 up to R = 24, grown proportionally beyond).
    pub fn single_grid(&self) -> (usize, f64) {
        let n = self.grid_n.unwrap_or(if self.radius <= 8.0 {
            128
        } else if self.radius <= 24.0 {
            192
        } else {
            (8.0 * self.radius) as usize
        });
        (n, 2.0 * self.radius / n as f64)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    /// Parse either format: a run-manifest JSON document (its `config`
    /// object) or plain `key = value` lines with `#` comments.
    pub fn parse_str(text: &str) -> Result<Self> {
        Self::parse_str_with_overrides(text, &[])
    }

    /// Parse and then apply `key = value` overrides (command-line `--set`),
    /// validated against the same key set.
    pub fn parse_str_with_overrides(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let trimmed = text.trim_start();
        let mut pairs = if trimmed.starts_with('{') {
            manifest_pairs(text)?
        } else {
            key_value_pairs(text)?
        };
        for (key, value) in overrides {
            pairs.insert(key.clone(), value.clone());
        }
        Self::from_pairs(pairs)
    }

    fn from_pairs(pairs: BTreeMap<String, String>) -> Result<Self> {
        const KNOWN: &[&str] = &[
            "n", "s", "p", "q", "a", "b", "R", "L", "grid_n", "sweep_h", "sweep_n", "r_list",
            "t_list", "cutoff_r_list", "max_iters", "grad_tol", "step0", "armijo_c", "seed",
            "threads",
        ];
        for key in pairs.keys() {
            if !KNOWN.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown key `{key}`")));
            }
        }
        let require = |key: &str| -> Result<&String> {
            pairs.get(key).ok_or_else(|| Error::Config(format!("missing key `{key}`")))
        };
        let parse_f64 = |key: &str, v: &str| -> Result<f64> {
            v.parse::<f64>().map_err(|_| Error::Config(format!("key `{key}`: bad number `{v}`")))
        };

        let n: u32 = require("n")?
            .parse()
            .map_err(|_| Error::Config("key `n`: expected a positive integer".into()))?;
        let params = ProblemParams::new(
            n,
            parse_f64("s", require("s")?)?,
            parse_f64("p", require("p")?)?,
            parse_f64("q", require("q")?)?,
            parse_f64("a", require("a")?)?,
            parse_f64("b", require("b")?)?,
        )
        .map_err(|e| Error::Config(format!("invalid parameters: {e}")))?;

        let defaults = RunConfig::reference();
        let get_f64 = |key: &str, dflt: f64| -> Result<f64> {
            match pairs.get(key) {
                Some(v) => parse_f64(key, v),
                None => Ok(dflt),
            }
        };
        let get_list = |key: &str, dflt: &[f64]| -> Result<Vec<f64>> {
            match pairs.get(key) {
                Some(v) => v
                    .split(',')
                    .map(|tok| {
                        tok.trim().parse::<f64>().map_err(|_| {
                            Error::Config(format!("key `{key}`: bad list entry `{tok}`"))
                        })
                    })
                    .collect(),
                None => Ok(dflt.to_vec()),
            }
        };

        let solver = SolveOptions {
            max_iters: match pairs.get("max_iters") {
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::Config("key `max_iters`: expected an integer".into()))?,
                None => defaults.solver.max_iters,
            },
            grad_tol: get_f64("grad_tol", defaults.solver.grad_tol)?,
            step0: get_f64("step0", defaults.solver.step0)?,
            armijo_c: get_f64("armijo_c", defaults.solver.armijo_c)?,
            seed: match pairs.get("seed") {
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::Config("key `seed`: expected an unsigned integer".into()))?,
                None => defaults.solver.seed,
            },
        };

        Ok(RunConfig {
            params,
            radius: get_f64("R", defaults.radius)?,
            truncation: get_f64("L", defaults.truncation)?,
            grid_n: match pairs.get("grid_n") {
                Some(v) => Some(
                    v.parse()
                        .map_err(|_| Error::Config("key `grid_n`: expected an integer".into()))?,
                ),
                None => None,
            },
            sweep_h: get_f64("sweep_h", defaults.sweep_h)?,
            sweep_n: match pairs.get("sweep_n") {
                Some(v) => Some(
                    v.parse()
                        .map_err(|_| Error::Config("key `sweep_n`: expected an integer".into()))?,
                ),
                None => None,
            },
            r_list: get_list("r_list", &defaults.r_list)?,
            t_list: get_list("t_list", &defaults.t_list)?,
            cutoff_r_list: get_list("cutoff_r_list", &defaults.cutoff_r_list)?,
            solver,
            threads: match pairs.get("threads") {
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::Config("key `threads`: expected an integer".into()))?,
                None => 1,
            },
        })
    }

    /// The effective configuration as deterministic key/value pairs; feeding
    /// them back through the parser reproduces this configuration exactly.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = vec![
            ("n".into(), self.params.n.to_string()),
            ("s".into(), self.params.s.to_string()),
            ("p".into(), self.params.p.to_string()),
            ("q".into(), self.params.q.to_string()),
            ("a".into(), self.params.a.to_string()),
            ("b".into(), self.params.b.to_string()),
            ("R".into(), self.radius.to_string()),
            ("L".into(), self.truncation.to_string()),
            ("sweep_h".into(), self.sweep_h.to_string()),
        ];
        if let Some(n) = self.grid_n {
            out.push(("grid_n".into(), n.to_string()));
        }
        if let Some(n) = self.sweep_n {
            out.push(("sweep_n".into(), n.to_string()));
        }
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        out.push(("r_list".into(), join(&self.r_list)));
        out.push(("t_list".into(), join(&self.t_list)));
        out.push(("cutoff_r_list".into(), join(&self.cutoff_r_list)));
        out.push(("max_iters".into(), self.solver.max_iters.to_string()));
        out.push(("grad_tol".into(), self.solver.grad_tol.to_string()));
        out.push(("step0".into(), self.solver.step0.to_string()));
        out.push(("armijo_c".into(), self.solver.armijo_c.to_string()));
        out.push(("seed".into(), self.solver.seed.to_string()));
        out.push(("threads".into(), self.threads.to_string()));
        out
    }
}

fn key_value_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut pairs = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if pairs.insert(key.clone(), value).is_some() {
            return Err(Error::Config(format!("duplicate key `{key}`")));
        }
    }
    Ok(pairs)
}

fn manifest_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad manifest JSON: {e}")))?;
    let config = doc
        .get("config")
        .and_then(|c| c.as_object())
        .ok_or_else(|| Error::Config("manifest lacks a `config` object".into()))?;
    let mut pairs = BTreeMap::new();
    for (key, value) in config {
        let rendered = match value {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        pairs.insert(key.clone(), rendered);
    }
    Ok(pairs)
}
