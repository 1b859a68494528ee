use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::hmars::OutageConvention;
use crate::scenario::ScenarioParams;

/// Sweep grids. Distances are normalised by the group radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sweep {
    #[serde(rename = "d0D_over_R")]
    pub d0d_over_r: Vec<f64>,
    #[serde(rename = "d0T_over_R")]
    pub d0t_over_r: Vec<f64>,
    pub r_e: Vec<f64>,
}

impl Default for Sweep {
    fn default() -> Self {
        Self {
            d0d_over_r: vec![0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0],
            d0t_over_r: vec![1.5, 2.0, 2.5, 3.0],
            r_e: vec![0.0, 5.0, 10.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioParams,
    pub channel: ChannelParams,
    pub trials: u64,
    pub master_seed: u64,
    pub convention: OutageConvention,
    pub sweep: Sweep,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioParams::default(),
            channel: ChannelParams::default(),
            trials: 100_000,
            master_seed: 0x5eed_0001,
            convention: OutageConvention::default(),
            sweep: Sweep::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Copy of this configuration moved to one sweep point.
    pub fn at(&self, d0d_over_r: f64, d0t_over_r: f64, r_e: f64) -> Self {
        let mut point = self.clone();
        point.scenario.d0_d = d0d_over_r * self.scenario.radius;
        point.scenario.d0_t = d0t_over_r * self.scenario.radius;
        point.scenario.r_e = r_e;
        point
    }

    pub fn d0d_over_r(&self) -> f64 {
        self.scenario.d0_d / self.scenario.radius
    }

    pub fn d0t_over_r(&self) -> f64 {
        self.scenario.d0_t / self.scenario.radius
    }

    /// Every (d0D/R, d0T/R, r_e) cell of the full grid, error radius
    /// outermost. Cells where the interferers would coincide are skipped.
    pub fn grid_points(&self) -> Vec<(f64, f64, f64)> {
        let sweep = &self.sweep;
        let mut points = Vec::new();
        for &r_e in &sweep.r_e {
            for &t in &sweep.d0t_over_r {
                for &d in &sweep.d0d_over_r {
                    if self.at(d, t, r_e).scenario.validate().is_ok() {
                        points.push((d, t, r_e));
                    }
                }
            }
        }
        points
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        self.scenario
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.channel
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        let sweep = &self.sweep;
        for (name, values) in [
            ("d0D_over_R", &sweep.d0d_over_r),
            ("d0T_over_R", &sweep.d0t_over_r),
        ] {
            if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::Config(format!(
                    "sweep {name} values must be finite and > 0, got {v}"
                )));
            }
        }
        if let Some(v) = sweep.r_e.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Config(format!(
                "sweep r_e values must be finite and >= 0, got {v}"
            )));
        }
        // the receiver-distance sweep runs at the configured transmitter distance
        for &d in &sweep.d0d_over_r {
            self.at(d, self.d0t_over_r(), self.scenario.r_e)
                .scenario
                .validate()
                .map_err(|e| Error::Config(format!("sweep point d0D/R={d}: {e}")))?;
        }
        Ok(())
    }
}
