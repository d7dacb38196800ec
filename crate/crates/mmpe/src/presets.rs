//! Named input laws and the distribution file format.
//!
//! A distribution file is either flat `key = value` lines or one JSON object
//! with the same keys:
//!
//! | key       | meaning                                                        |
//! |-----------|----------------------------------------------------------------|
//! | `kind`    | `gaussian`, `atoms`, `ball` or `tabulated`                      |
//! | `n`       | dimension (default 1)                                          |
//! | `sigma2`  | per-dimension variance (`gaussian`)                            |
//! | `radius`  | ball radius (`ball`)                                           |
//! | `atoms`   | `x:prob` pairs separated by `,`; vector points use `;` between coordinates, e.g. `1;1:0.5, -1;-1:0.5` |
//! | `grid`    | comma-separated abscissae (`tabulated`)                        |
//! | `density` | comma-separated density values on `grid` (`tabulated`)         |
//!
//! In JSON, `atoms` is a list of `[x, prob]` pairs with `x` a number or an
//! array, and `grid`/`density` are arrays.
//!
//! ```
//! use mmpe::presets::parse_distribution;
//! let d = parse_distribution("kind = atoms\natoms = -1:0.5, 1:0.5\n").unwrap();
//! assert_eq!(d, mmpe::model::InputDistribution::bpsk());
//! ```

use crate::error::{MmpeError, Result};
use crate::model::{Atoms, InputDistribution, TabulatedPdf};
use serde_json::Value;
use std::collections::BTreeMap;

/// Preset names accepted by [`preset`].
pub const PRESETS: [&str; 5] = ["gaussian", "bpsk", "pam4", "asym_pair", "pmone_vector"];

/// Build a named preset; `n` only affects `gaussian` and `pmone_vector`.
pub fn preset(name: &str, n: usize) -> Result<InputDistribution> {
    match name {
        "gaussian" => InputDistribution::vector_gaussian(n, 1.0),
        "bpsk" => Ok(InputDistribution::bpsk()),
        "pam4" => InputDistribution::pam(4),
        "asym_pair" => Ok(InputDistribution::asym_pair()),
        "pmone_vector" => InputDistribution::pmone_vector(n),
        other => Err(MmpeError::Parse(format!("unknown preset '{other}'; available: {}", PRESETS.join(", ")))),
    }
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| MmpeError::Parse(format!("{key}: '{}' is not a number", s.trim())))
}

fn parse_list(key: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_f64(key, t)).collect()
}

fn parse_atoms_text(s: &str) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut points = Vec::new();
    let mut probs = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (x, q) = item
            .rsplit_once(':')
            .ok_or_else(|| MmpeError::Parse(format!("atoms: '{item}' is not of the form x:prob")))?;
        points.push(x.split(';').map(|c| parse_f64("atoms", c)).collect::<Result<Vec<f64>>>()?);
        probs.push(parse_f64("atoms", q)?);
    }
    Ok((points, probs))
}

fn json_number(key: &str, v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| MmpeError::Parse(format!("{key}: expected a number, got {v}")))
}

fn json_list(key: &str, v: &Value) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| MmpeError::Parse(format!("{key}: expected an array")))?
        .iter()
        .map(|x| json_number(key, x))
        .collect()
}

fn json_atoms(v: &Value) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let items = v.as_array().ok_or_else(|| MmpeError::Parse("atoms: expected an array of [x, prob]".into()))?;
    let mut points = Vec::new();
    let mut probs = Vec::new();
    for it in items {
        let pair = it.as_array().filter(|a| a.len() == 2).ok_or_else(|| MmpeError::Parse(format!("atoms: bad entry {it}")))?;
        points.push(if pair[0].is_array() { json_list("atoms", &pair[0])? } else { vec![json_number("atoms", &pair[0])?] });
        probs.push(json_number("atoms", &pair[1])?);
    }
    Ok((points, probs))
}

enum Field {
    Text(String),
    Json(Value),
}

/// Parse a distribution description (key=value or JSON).
pub fn parse_distribution(src: &str) -> Result<InputDistribution> {
    let trimmed = src.trim_start();
    let mut fields: BTreeMap<String, Field> = BTreeMap::new();
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed).map_err(|e| MmpeError::Parse(format!("invalid JSON: {e}")))?;
        let obj = v.as_object().ok_or_else(|| MmpeError::Parse("expected a JSON object".into()))?;
        for (k, v) in obj {
            fields.insert(k.clone(), Field::Json(v.clone()));
        }
    } else {
        for (i, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| MmpeError::Parse(format!("line {}: expected key = value", i + 1)))?;
            fields.insert(k.trim().to_string(), Field::Text(v.trim().to_string()));
        }
    }
    for k in fields.keys() {
        if !["kind", "n", "sigma2", "radius", "atoms", "grid", "density"].contains(&k.as_str()) {
            return Err(MmpeError::Parse(format!("unknown key '{k}'")));
        }
    }
    let number = |key: &str| -> Result<Option<f64>> {
        match fields.get(key) {
            None => Ok(None),
            Some(Field::Text(s)) => parse_f64(key, s).map(Some),
            Some(Field::Json(v)) => json_number(key, v).map(Some),
        }
    };
    let list = |key: &str| -> Result<Vec<f64>> {
        match fields.get(key) {
            None => Err(MmpeError::Parse(format!("missing key '{key}'"))),
            Some(Field::Text(s)) => parse_list(key, s),
            Some(Field::Json(v)) => json_list(key, v),
        }
    };
    let kind = match fields.get("kind") {
        Some(Field::Text(s)) => s.clone(),
        Some(Field::Json(Value::String(s))) => s.clone(),
        Some(_) => return Err(MmpeError::Parse("kind: expected a string".into())),
        None => return Err(MmpeError::Parse("missing key 'kind'".into())),
    };
    let n = match number("n")? {
        None => 1,
        Some(v) if v >= 1.0 && v.fract() == 0.0 => v as usize,
        Some(v) => return Err(MmpeError::Parse(format!("n: expected a positive integer, got {v}"))),
    };
    let require = |key: &str| -> Result<f64> { number(key)?.ok_or_else(|| MmpeError::Parse(format!("missing key '{key}'"))) };
    match kind.as_str() {
        "gaussian" => InputDistribution::vector_gaussian(n, require("sigma2")?),
        "ball" => InputDistribution::uniform_ball(n, require("radius")?),
        "atoms" => {
            let (points, probs) = match fields.get("atoms") {
                None => return Err(MmpeError::Parse("missing key 'atoms'".into())),
                Some(Field::Text(s)) => parse_atoms_text(s)?,
                Some(Field::Json(v)) => json_atoms(v)?,
            };
            if fields.contains_key("n") && points.first().map(Vec::len) != Some(n) {
                return Err(MmpeError::Parse(format!("atoms do not have dimension n = {n}")));
            }
            Ok(InputDistribution::DiscreteAtoms(Atoms::new(points, probs)?))
        }
        "tabulated" => {
            if n != 1 {
                return Err(MmpeError::Parse("tabulated densities are scalar".into()));
            }
            Ok(InputDistribution::TabulatedScalarPdf(TabulatedPdf::new(list("grid")?, list("density")?)?))
        }
        other => Err(MmpeError::Parse(format!("unknown kind '{other}'; expected gaussian, atoms, ball or tabulated"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_text_agree() {
        let a = parse_distribution(r#"{"kind": "atoms", "atoms": [[-3, 0.01], [1, 0.99]]}"#).unwrap();
        let b = parse_distribution("kind=atoms\natoms=-3:0.01,1:0.99").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, InputDistribution::asym_pair());
    }

    #[test]
    fn vector_atoms() {
        let d = parse_distribution("kind = atoms\nn = 2\natoms = 1;1:0.5, -1;-1:0.5").unwrap();
        assert_eq!(d, InputDistribution::pmone_vector(2).unwrap());
        let j = parse_distribution(r#"{"kind":"atoms","atoms":[[[1,1],0.5],[[-1,-1],0.5]]}"#).unwrap();
        assert_eq!(d, j);
    }

    #[test]
    fn errors_are_reported() {
        assert!(parse_distribution("kind = atoms\natoms = 1:0.7, 1:0.3").is_err());
        assert!(parse_distribution("kind = gaussian\nsigma2 = -1").is_err());
        assert!(parse_distribution("kind = gaussian\nsigma = 1").is_err());
        assert!(parse_distribution("sigma2 = 1").is_err());
        let e = preset("nope", 1).unwrap_err().to_string();
        assert!(e.contains("bpsk") && e.contains("pmone_vector"));
    }

    #[test]
    fn gaussian_file() {
        let d = parse_distribution("# prior\nkind = gaussian\nsigma2 = 2\nn = 3\n").unwrap();
        assert_eq!(d, InputDistribution::vector_gaussian(3, 2.0).unwrap());
    }
}
