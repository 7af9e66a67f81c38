//! Parsing of the `--classifier` flag.
//!
//! ```text
//! builtin:hyperplane:w1,...,wd:b
//! builtin:axis:i:t
//! builtin:sphere:c1,...,cd:r
//! builtin:min:i,j,...:t
//! builtin:const:l
//! exec:<path> [adapter args]
//! ```

use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use growing_spheres::{BuiltinClassifier, BuiltinSpec, Classifier, ExternalClassifier, Label};

#[derive(Clone, Debug, PartialEq)]
pub enum ClassifierArg {
    Builtin(BuiltinSpec),
    Exec { program: String, args: Vec<String> },
}

fn floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("{t:?} is not a number")))
        .collect()
}

fn number<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim().parse::<T>().map_err(|_| anyhow!("{s:?} is not a valid number"))
}

impl std::str::FromStr for ClassifierArg {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(cmd) = s.strip_prefix("exec:") {
            let mut parts = cmd.split_whitespace().map(String::from);
            let program = parts.next().ok_or_else(|| anyhow!("exec: needs a program path"))?;
            return Ok(ClassifierArg::Exec {
                program,
                args: parts.collect(),
            });
        }
        let Some(rest) = s.strip_prefix("builtin:") else {
            bail!("classifier must start with builtin: or exec:, got {s:?}");
        };
        let parts: Vec<&str> = rest.split(':').collect();
        let spec = match parts.as_slice() {
            ["hyperplane", w, b] => BuiltinSpec::Hyperplane { w: floats(w)?, b: number(b)? },
            ["axis", i, t] => BuiltinSpec::AxisThreshold { index: number(i)?, threshold: number(t)? },
            ["sphere", c, r] => BuiltinSpec::HypersphereBoundary { center: floats(c)?, radius: number(r)? },
            ["min", idx, t] => BuiltinSpec::MinThreshold {
                indices: idx.split(',').map(number).collect::<Result<_>>()?,
                threshold: number(t)?,
            },
            ["const", l] => BuiltinSpec::Constant(Label(number(l)?)),
            _ => bail!("unrecognized builtin classifier {s:?}"),
        };
        Ok(ClassifierArg::Builtin(spec))
    }
}

impl ClassifierArg {
    pub fn build(&self, dimension: usize, timeout: Duration) -> Result<Box<dyn Classifier>> {
        Ok(match self {
            ClassifierArg::Builtin(spec) => Box::new(BuiltinClassifier::new(spec.clone(), dimension)?),
            ClassifierArg::Exec { program, args } => {
                Box::new(ExternalClassifier::spawn(program, args, dimension, timeout)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> ClassifierArg {
        s.parse().unwrap()
    }

    #[test]
    fn builtins() {
        assert_eq!(
            parse("builtin:hyperplane:1,0:-0.5"),
            ClassifierArg::Builtin(BuiltinSpec::Hyperplane { w: vec![1.0, 0.0], b: -0.5 })
        );
        assert_eq!(
            parse("builtin:axis:0:0.5"),
            ClassifierArg::Builtin(BuiltinSpec::AxisThreshold { index: 0, threshold: 0.5 })
        );
        assert_eq!(
            parse("builtin:sphere:0.5,0.5:0.25"),
            ClassifierArg::Builtin(BuiltinSpec::HypersphereBoundary { center: vec![0.5, 0.5], radius: 0.25 })
        );
        assert_eq!(
            parse("builtin:min:0,2:0.5"),
            ClassifierArg::Builtin(BuiltinSpec::MinThreshold { indices: vec![0, 2], threshold: 0.5 })
        );
        assert_eq!(parse("builtin:const:-1"), ClassifierArg::Builtin(BuiltinSpec::Constant(Label(-1))));
    }

    #[test]
    fn exec_with_args() {
        assert_eq!(
            parse("exec:/usr/bin/adapter --model m.pkl"),
            ClassifierArg::Exec {
                program: "/usr/bin/adapter".into(),
                args: vec!["--model".into(), "m.pkl".into()]
            }
        );
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "builtin:", "builtin:axis:x:0.5", "builtin:cube:1", "exec:", "model.pkl"] {
            assert!(s.parse::<ClassifierArg>().is_err(), "{s}");
        }
    }
}
