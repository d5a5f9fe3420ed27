//! Argument plumbing: key=value config files expanded into flags (with
//! command-line flags taking precedence), grid and depth-list grammars,
//! and code-name resolution.

use anyhow::{bail, ensure, Context};
use std::path::Path;

use stabtree::{codes, CliffordEncoder};

/// Flags that are presence-only switches: a `key = true` line becomes the
/// bare flag, `key = false` is dropped.
const BOOL_KEYS: &[&str] = &["root-noise"];

/// Expands `--config FILE` into the flags the file defines. The synthetic
/// flags are inserted before the first explicit flag, so with
/// `args_override_self` the command line wins every conflict.
pub fn expand_args(argv: Vec<String>) -> anyhow::Result<Vec<String>> {
    let mut path: Option<String> = None;
    let mut iter = argv.iter();
    while let Some(tok) = iter.next() {
        if tok == "--config" {
            path = iter.next().cloned();
        } else if let Some(rest) = tok.strip_prefix("--config=") {
            path = Some(rest.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("cannot read config file {path}"))?;
    let mut flags = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{path}:{}: expected `key = value`, got `{line}`", no + 1);
        };
        let (key, value) = (key.trim(), value.trim());
        ensure!(!key.is_empty(), "{path}:{}: empty key", no + 1);
        ensure!(key != "config", "{path}:{}: config files cannot nest", no + 1);
        if BOOL_KEYS.contains(&key) {
            match value {
                "true" => flags.push(format!("--{key}")),
                "false" => {}
                _ => bail!("{path}:{}: `{key}` takes true or false", no + 1),
            }
        } else {
            flags.push(format!("--{key}"));
            flags.push(value.to_string());
        }
    }
    let at = argv
        .iter()
        .position(|t| t.starts_with('-'))
        .unwrap_or(argv.len());
    let mut out = argv;
    out.splice(at..at, flags);
    Ok(out)
}

/// Parses a probability grid: `start:stop:step` (inclusive of `stop` up to
/// a relative step tolerance) or a comma-separated list.
pub fn parse_grid(s: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [_] => s
            .split(',')
            .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad grid value `{v}`")))
            .collect::<anyhow::Result<Vec<f64>>>()?,
        [start, stop, step] => {
            let start: f64 = start.trim().parse().context("bad grid start")?;
            let stop: f64 = stop.trim().parse().context("bad grid stop")?;
            let step: f64 = step.trim().parse().context("bad grid step")?;
            ensure!(step > 0.0, "grid step must be positive");
            ensure!(start <= stop, "grid start exceeds stop");
            let mut grid = Vec::new();
            for k in 0.. {
                let v = start + k as f64 * step;
                if v > stop + 1e-9 * step {
                    break;
                }
                grid.push(v);
            }
            grid
        }
        _ => bail!("grids are `start:stop:step` or comma-separated values"),
    };
    ensure!(!grid.is_empty(), "the grid is empty");
    for &p in &grid {
        ensure!(
            (0.0..=1.0).contains(&p),
            "grid value {p} is not a probability"
        );
    }
    Ok(grid)
}

/// Parses a depth list: `a..b` (inclusive), a comma-separated list, or a
/// single value.
pub fn parse_depths(s: &str) -> anyhow::Result<Vec<u32>> {
    let depths = if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().context("bad depth range start")?;
        let b: u32 = b.trim().parse().context("bad depth range end")?;
        ensure!(a <= b, "depth range start exceeds end");
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|v| v.trim().parse::<u32>().with_context(|| format!("bad depth `{v}`")))
            .collect::<anyhow::Result<Vec<u32>>>()?
    };
    ensure!(!depths.is_empty(), "the depth list is empty");
    Ok(depths)
}

/// Resolves `--code`: a built-in name first, then a code file path.
pub fn resolve_code(name: &str) -> anyhow::Result<CliffordEncoder> {
    match codes::builtin(name) {
        Ok(enc) => Ok(enc),
        Err(stabtree::Error::UnknownCode(_)) => {
            let path = Path::new(name);
            if path.exists() {
                Ok(codes::load(path)?.encoder)
            } else {
                bail!("unknown code `{name}`: not a built-in and no such file");
            }
        }
        Err(e) => Err(e.into()),
    }
}
