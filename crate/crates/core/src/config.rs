//! Run configuration: one strict TOML file drives every subcommand, so a
//! config plus a seed reproduces any output byte for byte.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cross_section::CrossSection;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Seed for the randomized invariant checks in `verify`.
    pub seed: u64,
    pub cross_section: SectionConfig,
    pub grid: GridConfig,
    pub model: ModelConfig,
    pub dispersion: DispersionConfig,
    pub window: WindowConfig,
    pub branch: BranchConfig,
    pub tolerances: Tolerances,
}

/// Cross-section table, kept as a plain struct so the strict schema applies
/// reliably (tagged enums and `deny_unknown_fields` do not mix in serde).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SectionConfig {
    /// "interval" or "rectangle".
    pub kind: String,
    /// Interval length; required for kind = "interval".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    /// Rectangle sides; required for kind = "rectangle".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

impl Default for SectionConfig {
    fn default() -> Self {
        SectionConfig {
            kind: "interval".into(),
            length: Some(std::f64::consts::PI),
            a: None,
            b: None,
        }
    }
}

impl SectionConfig {
    pub fn to_section(&self) -> Result<CrossSection> {
        let section = match self.kind.as_str() {
            "interval" => CrossSection::Interval {
                length: self.length.ok_or_else(|| {
                    Error::Config("cross_section.length is required for an interval".into())
                })?,
            },
            "rectangle" => CrossSection::Rectangle {
                a: self.a.ok_or_else(|| {
                    Error::Config("cross_section.a is required for a rectangle".into())
                })?,
                b: self.b.ok_or_else(|| {
                    Error::Config("cross_section.b is required for a rectangle".into())
                })?,
            },
            other => {
                return Err(Error::Config(format!(
                    "cross_section.kind must be \"interval\" or \"rectangle\", got \"{other}\""
                )))
            }
        };
        section
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(section)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n_cross: usize,
    pub n_axial: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    /// Mode truncation for projections and branch unknowns.
    pub k_count: usize,
    /// Cylinder height used by `eig` and `reflect`.
    pub t: f64,
    /// Deviation coefficients in the Neumann basis for `eig`.
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DispersionConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    /// Curves are emitted for modes 1..=k_max.
    pub k_max: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowConfig {
    pub t_min: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BranchConfig {
    /// Mode through whose bifurcation point the branch is traced.
    pub j: usize,
    pub s_max: f64,
    pub ds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Newton residual tolerance, relative to the overdetermined constant.
    pub newton: f64,
    /// Eigenvalue increment tolerance of the inverse iteration.
    pub eig: f64,
    /// Step of the finite-difference linearization oracle.
    pub fd_eps: f64,
    /// Relative tolerance of the `verify` dispersion table.
    pub verify_gap: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 7,
            cross_section: SectionConfig::default(),
            grid: GridConfig::default(),
            model: ModelConfig::default(),
            dispersion: DispersionConfig::default(),
            window: WindowConfig::default(),
            branch: BranchConfig::default(),
            tolerances: Tolerances::default(),
        }
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n_cross: 48,
            n_axial: 64,
        }
    }
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            k_count: 8,
            t: 1.0,
            coefficients: Vec::new(),
        }
    }
}

impl Default for DispersionConfig {
    fn default() -> Self {
        DispersionConfig {
            t_min: 0.5,
            t_max: 2.0,
            samples: 61,
            k_max: 3,
        }
    }
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig {
            t_min: 0.5,
            t_max: 2.0,
        }
    }
}

impl Default for BranchConfig {
    fn default() -> Self {
        BranchConfig {
            j: 1,
            s_max: 0.04,
            ds: 0.01,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            newton: 1e-9,
            eig: 1e-12,
            fd_eps: 1e-3,
            verify_gap: 0.02,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// The validated cross-section described by the config.
    pub fn section(&self) -> Result<CrossSection> {
        self.cross_section.to_section()
    }

    pub fn validate(&self) -> Result<()> {
        self.cross_section.to_section()?;
        let bad = |msg: String| Err(Error::Config(msg));
        if self.model.k_count == 0 {
            return bad("model.k_count must be at least 1".into());
        }
        if !(self.model.t > 0.0) {
            return bad(format!("model.t must be positive, got {}", self.model.t));
        }
        if self.model.coefficients.len() > self.model.k_count {
            return bad(format!(
                "model.coefficients has {} entries but k_count is {}",
                self.model.coefficients.len(),
                self.model.k_count
            ));
        }
        if self.grid.n_cross < 8 || self.grid.n_axial < 8 {
            return bad(format!(
                "grid {}x{} too coarse; need at least 8 nodes per direction",
                self.grid.n_cross, self.grid.n_axial
            ));
        }
        for (name, (lo, hi)) in [
            ("dispersion", (self.dispersion.t_min, self.dispersion.t_max)),
            ("window", (self.window.t_min, self.window.t_max)),
        ] {
            if !(lo > 0.0 && lo < hi) {
                return bad(format!(
                    "{name} range ({lo}, {hi}) is not an ordered positive interval"
                ));
            }
        }
        if self.dispersion.samples < 2 {
            return bad("dispersion.samples must be at least 2".into());
        }
        if self.dispersion.k_max == 0 {
            return bad("dispersion.k_max must be at least 1".into());
        }
        if self.branch.j == 0 || self.branch.j > self.model.k_count {
            return bad(format!(
                "branch.j = {} outside 1..={}",
                self.branch.j, self.model.k_count
            ));
        }
        if !(self.branch.ds > 0.0 && self.branch.s_max >= self.branch.ds) {
            return bad(format!(
                "branch needs 0 < ds <= s_max, got ds={}, s_max={}",
                self.branch.ds, self.branch.s_max
            ));
        }
        for (name, v) in [
            ("tolerances.newton", self.tolerances.newton),
            ("tolerances.eig", self.tolerances.eig),
            ("tolerances.fd_eps", self.tolerances.fd_eps),
            ("tolerances.verify_gap", self.tolerances.verify_gap),
        ] {
            if !(v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serialization cannot fail")
    }
}
