//! JSON model specification for the analytic ensemble commands: explicit
//! support points and probabilities for the community-size and membership
//! distributions.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    /// Community-size support: `[[size, probability], ...]`, sizes >= 1.
    pub p_n: Vec<(usize, f64)>,
    /// Membership support: `[[memberships, probability], ...]`.
    pub g_m: Vec<(usize, f64)>,
}

impl ModelSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let spec: ModelSpec = serde_json::from_str(&raw).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.p_n.is_empty() || self.g_m.is_empty() {
            return Err(CliError::Config(
                "model needs non-empty p_n and g_m support".into(),
            ));
        }
        for &(size, _) in &self.p_n {
            if size < 1 {
                return Err(CliError::Config(
                    "community sizes in p_n must be >= 1".into(),
                ));
            }
        }
        Ok(())
    }

    fn dense(points: &[(usize, f64)]) -> Vec<f64> {
        let max = points.iter().map(|&(k, _)| k).max().unwrap_or(0);
        let mut dense = vec![0.0; max + 1];
        for &(k, probability) in points {
            dense[k] += probability;
        }
        dense
    }

    pub fn dense_p_n(&self) -> Vec<f64> {
        Self::dense(&self.p_n)
    }

    pub fn dense_g_m(&self) -> Vec<f64> {
        Self::dense(&self.g_m)
    }
}
