//! Text forms of command-line inputs.
//!
//! A distribution is given as a JSON object (`{"family": "pareto", "params":
//! {"alpha": 1.0}}`), as `@path` naming a file holding such an object, or in
//! shorthand:
//!
//! | shorthand        | law                              |
//! |------------------|----------------------------------|
//! | `pareto:1`       | Pareto(α)                        |
//! | `frechet:0.8`    | Fréchet(α)                       |
//! | `cauchy`         | standard Cauchy                  |
//! | `half_cauchy`    | law of the absolute Cauchy value |
//! | `stable:0.5,1`   | S(α, β)                          |
//! | `deadly:0.3`     | mass p at +∞, 1 − p at 0         |
//! | `uniform:0,2`    | Uniform(lo, hi)                  |
//! | `example`        | the three-piece example mixture  |

use std::path::Path;

use heavytail_core::bounds::{Baseline, CdfConstraintSet};
use heavytail_core::pooling::example_construction;
use heavytail_core::stable_calculus::WeightVector;
use heavytail_core::DistributionSpec;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Domain(#[from] heavytail_core::Error),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn syntax(msg: impl Into<String>) -> ParseError {
    ParseError::Syntax(msg.into())
}

pub fn read_file(path: &Path) -> Result<String, ParseError> {
    std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Comma-separated reals.
pub fn parse_reals(s: &str) -> Result<Vec<f64>, ParseError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| syntax(format!("`{t}` is not a number"))))
        .collect()
}

fn expect_args(name: &str, args: &[f64], n: usize) -> Result<(), ParseError> {
    if args.len() == n {
        Ok(())
    } else {
        Err(syntax(format!("`{name}` takes {n} parameter(s), got {}", args.len())))
    }
}

pub fn parse_spec(s: &str) -> Result<DistributionSpec, ParseError> {
    let s = s.trim();
    let spec = if let Some(path) = s.strip_prefix('@') {
        serde_json::from_str(&read_file(Path::new(path))?)?
    } else if s.starts_with('{') {
        serde_json::from_str(s)?
    } else {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let args = parse_reals(rest)?;
        let name = name.trim().to_ascii_lowercase().replace('-', "_");
        let n = match name.as_str() {
            "cauchy" | "half_cauchy" | "example" => 0,
            "stable" | "uniform" => 2,
            "pareto" | "frechet" | "deadly" => 1,
            _ => return Err(syntax(format!("unknown family `{name}`"))),
        };
        expect_args(&name, &args, n)?;
        match name.as_str() {
            "pareto" => DistributionSpec::pareto(args[0]),
            "frechet" => DistributionSpec::frechet(args[0]),
            "cauchy" => DistributionSpec::cauchy(),
            "half_cauchy" => DistributionSpec::half_cauchy(),
            "stable" => DistributionSpec::stable(args[0], args[1]),
            "deadly" => DistributionSpec::deadly(args[0]),
            "uniform" => DistributionSpec::uniform(args[0], args[1]),
            _ => example_construction(),
        }
    };
    spec.validate()?;
    Ok(spec)
}

pub fn parse_weights(s: &str) -> Result<WeightVector, ParseError> {
    Ok(WeightVector::new(parse_reals(s)?)?)
}

/// `x:F(x)` pairs, e.g. `2:0.4,4:0.8`.
pub fn parse_pairs(s: &str) -> Result<Vec<(f64, f64)>, ParseError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (a, b) = t.split_once(':').ok_or_else(|| syntax(format!("`{t}` is not of the form a:b")))?;
            let num = |v: &str| v.trim().parse::<f64>().map_err(|_| syntax(format!("`{v}` is not a number")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

pub fn parse_constraints(s: &str) -> Result<CdfConstraintSet, ParseError> {
    Ok(CdfConstraintSet::new(parse_pairs(s)?)?)
}

pub fn parse_baseline(s: &str) -> Result<Baseline, ParseError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "pareto" => Ok(Baseline::Pareto),
        "frechet" | "fréchet" => Ok(Baseline::Frechet),
        "cauchy" => Ok(Baseline::Cauchy),
        other => Err(syntax(format!("unknown baseline `{other}` (pareto, frechet, cauchy)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthand_forms() {
        assert_eq!(parse_spec("pareto:1").unwrap(), DistributionSpec::pareto(1.0));
        assert_eq!(parse_spec(" Half-Cauchy ").unwrap(), DistributionSpec::half_cauchy());
        assert_eq!(parse_spec("stable:0.5, 1").unwrap(), DistributionSpec::stable(0.5, 1.0));
        assert_eq!(parse_spec("example").unwrap(), example_construction());
        assert!(parse_spec("pareto").is_err());
        assert!(parse_spec("pareto:-1").is_err());
        assert!(parse_spec("gamma:2").is_err());
    }

    #[test]
    fn json_form() {
        let s = r#"{"family": "frechet", "params": {"alpha": 0.8}}"#;
        assert_eq!(parse_spec(s).unwrap(), DistributionSpec::frechet(0.8));
        assert!(parse_spec(r#"{"family": "frechet", "params": {"alpha": 0.8, "beta": 1}}"#).is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_weights("0.5,0.5").unwrap().as_slice(), &[0.5, 0.5]);
        assert!(parse_weights("0.5,0.6").is_err());
        assert_eq!(parse_constraints("2:0.4,4:0.8").unwrap().points(), &[(2.0, 0.4), (4.0, 0.8)]);
        assert_eq!(parse_pairs("-1:1,0:1").unwrap(), vec![(-1.0, 1.0), (0.0, 1.0)]);
        assert!(parse_pairs("1").is_err());
        assert_eq!(parse_baseline("Frechet").unwrap(), Baseline::Frechet);
    }
}
