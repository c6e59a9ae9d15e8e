//! Optional TOML config mirroring the CLI flags. Flags win over config,
//! config wins over built-in defaults.

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default)]
    pub exact: ExactSection,
    #[serde(default)]
    pub rho: RhoSection,
    #[serde(default)]
    pub moments: MomentsSection,
    #[serde(default)]
    pub simulate: SimulateSection,
    #[serde(default)]
    pub rouche: RoucheSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    pub precision: Option<u32>,
    pub format: Option<String>,
    pub series_cap: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactSection {
    pub k_max: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoSection {
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsSection {
    pub terms: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub trials: Option<u64>,
    pub r_max: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoucheSection {
    pub samples: Option<u32>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_partial_config() {
        let cfg: FileConfig = toml::from_str(
            "[defaults]\nprecision = 60\n\n[simulate]\ntrials = 500\n",
        )
        .unwrap();
        assert_eq!(cfg.defaults.precision, Some(60));
        assert_eq!(cfg.simulate.trials, Some(500));
        assert_eq!(cfg.rho.tol, None);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<FileConfig>("[defaults]\nbogus = 1\n").is_err());
    }
}
