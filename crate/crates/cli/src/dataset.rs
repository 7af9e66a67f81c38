use std::path::Path;

use anyhow::{bail, Context, Result};
use growing_spheres::FeatureVector;

/// A numeric CSV table: header row of feature names, one observation per row.
pub struct Dataset {
    pub features: Vec<String>,
    pub rows: Vec<FeatureVector>,
}

impl Dataset {
    /// Loads `path`, dropping `label_column` if given.
    pub fn load(path: &Path, label_column: Option<&str>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .with_context(|| format!("cannot read dataset {}", path.display()))?;
        let headers = reader
            .headers()
            .with_context(|| format!("cannot read header of {}", path.display()))?
            .clone();

        let skip = match label_column {
            Some(name) => Some(
                headers
                    .iter()
                    .position(|h| h == name)
                    .with_context(|| format!("label column {name:?} not found in {}", path.display()))?,
            ),
            None => None,
        };
        let features: Vec<String> = headers
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .map(|(_, h)| h.to_string())
            .collect();
        if features.is_empty() {
            bail!("{} has no feature columns", path.display());
        }

        let mut rows = Vec::new();
        for (n, record) in reader.records().enumerate() {
            let record = record.with_context(|| format!("{}: bad row {}", path.display(), n + 1))?;
            let values = record
                .iter()
                .enumerate()
                .filter(|(i, _)| Some(*i) != skip)
                .map(|(i, field)| {
                    field.parse::<f64>().with_context(|| {
                        format!("{}: row {}, column {}: {field:?} is not a number", path.display(), n + 1, i + 1)
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let row = FeatureVector::new(values)
                .with_context(|| format!("{}: row {}", path.display(), n + 1))?;
            rows.push(row);
        }
        if rows.is_empty() {
            bail!("{} contains no observations", path.display());
        }
        Ok(Self { features, rows })
    }

    pub fn dimension(&self) -> usize {
        self.features.len()
    }
}
