//! Run configuration: ħ, tolerances, output format, seed.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value};

use crate::report::{num, Format};

pub const DEFAULT_SEED: u64 = 42;

/// Default tolerance table; a JSON file may override any entry.
pub fn default_tolerances() -> BTreeMap<String, f64> {
    [
        ("fidelity", 1e-10),
        ("hermiticity", 1e-11),
        ("unitarity", 1e-12),
        ("c_algebra", 1e-12),
        ("closed_form", 1e-12),
        ("norm_conservation", 1e-10),
        ("spectrum", 1e-11),
        ("time", 1e-12),
        ("speed_bound", 1e-12),
        ("closure", 1e-8),
        ("period", 1e-6),
        ("foci", 1e-6),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub hbar: f64,
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(
        hbar: f64,
        tolerance_file: Option<&Path>,
        format: Format,
        seed: u64,
    ) -> Result<Self, String> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(format!("hbar must be positive, got {hbar}"));
        }
        let mut tolerances = default_tolerances();
        if let Some(path) = tolerance_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let overrides: BTreeMap<String, f64> = serde_json::from_str(&text)
                .map_err(|e| format!("bad tolerance file {}: {e}", path.display()))?;
            tolerances.extend(overrides);
        }
        if let Some((name, value)) = tolerances.iter().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(format!("tolerance {name} must be positive, got {value}"));
        }
        Ok(Self {
            hbar,
            tolerances,
            format,
            seed,
        })
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    pub fn to_json(&self) -> Value {
        let tolerances: serde_json::Map<String, Value> =
            self.tolerances.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
        json!({
            "hbar": num(self.hbar),
            "tolerances": tolerances,
            "output_format": self.format,
            "seed": self.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::new(0.0, None, Format::Json, 1).is_err());
        assert!(RunConfig::new(-1.0, None, Format::Json, 1).is_err());
        let cfg = RunConfig::new(1.0, None, Format::Json, 1).unwrap();
        assert!(cfg.tolerances.values().all(|&v| v > 0.0));
    }

    #[test]
    fn tolerance_file_overrides() {
        let dir = std::env::temp_dir().join(format!("qbrach-tol-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("tol.json");
        std::fs::write(&path, r#"{"fidelity": 1e-6}"#).unwrap();
        let cfg = RunConfig::new(1.0, Some(&path), Format::Json, 1).unwrap();
        assert_eq!(cfg.tol("fidelity"), 1e-6);
        std::fs::write(&path, r#"{"fidelity": -1}"#).unwrap();
        assert!(RunConfig::new(1.0, Some(&path), Format::Json, 1).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
