//! Run configuration: a TOML key tree with dotted-key overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use nsk_core::dynamics::{EvolveConfig, Frame, Grid1D, Perturbation, PerturbationKind, Scheme, Sponge, WInit};
use nsk_core::profile::{ProfileMethod, ProfileOptions};
use nsk_core::{EndStates, GasLaw};
use serde::{Deserialize, Serialize};

pub const DEFAULT_DELTA_S: f64 = 0.05;

#[derive(Debug)]
pub enum ConfigError {
    Io(PathBuf, std::io::Error),
    Parse(String),
    Override(String),
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(p, e) => write!(f, "cannot read config {}: {e}", p.display()),
            ConfigError::Parse(m) => write!(f, "config parse error: {m}"),
            ConfigError::Override(m) => write!(f, "bad --set override: {m}"),
            ConfigError::Invalid(m) => write!(f, "invalid config: {m}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LawConfig {
    pub gamma: f64,
}

impl Default for LawConfig {
    fn default() -> Self {
        Self { gamma: 5.0 / 3.0 }
    }
}

/// `delta_s` wins over `v_minus` when both are given; with neither, `delta_s = 0.05`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EndStatesConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_minus: Option<f64>,
    pub v_plus: f64,
    pub u_plus: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_s: Option<f64>,
}

impl Default for EndStatesConfig {
    fn default() -> Self {
        Self { v_minus: None, v_plus: 0.7, u_plus: 0.0, delta_s: None }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileConfig {
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub half_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_tol: Option<f64>,
    pub method: ProfileMethod,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Cell count; overrides `dx`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
    #[serde(rename = "L_dom", skip_serializing_if = "Option::is_none")]
    pub half_length: Option<f64>,
    pub frame: Frame,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeConfig {
    pub kind: Scheme,
    pub cfl: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_override: Option<f64>,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self { kind: Scheme::Rk4, cfl: 0.2, dt_override: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpongeConfig {
    pub fraction: f64,
    /// Default `delta_s`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
}

impl Default for SpongeConfig {
    fn default() -> Self {
        Self { fraction: 0.1, rate: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerturbationConfig {
    pub kind: PerturbationKind,
    pub amplitude_v: f64,
    pub amplitude_u: f64,
    pub amplitude_w: f64,
    pub center: f64,
    /// Full width at half maximum; default `5 / delta_s`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    pub zero_mass: bool,
    pub w_init: WInit,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self {
            kind: PerturbationKind::GaussianBump,
            amplitude_v: 0.0,
            amplitude_u: 0.01,
            amplitude_w: 0.0,
            center: 0.0,
            width: None,
            zero_mass: false,
            w_init: WInit::Consistent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub law: LawConfig,
    pub end_states: EndStatesConfig,
    pub profile: ProfileConfig,
    pub grid: GridConfig,
    pub scheme: SchemeConfig,
    pub sponge: SpongeConfig,
    pub perturbation: PerturbationConfig,
    /// Default `50 / delta_s`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    /// Default `t_final / 400`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diag_cadence: Option<f64>,
    /// Default `t_final / 10`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_cadence: Option<f64>,
    /// Default `v_minus / 3`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_floor: Option<f64>,
    pub shift: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            law: LawConfig::default(),
            end_states: EndStatesConfig::default(),
            profile: ProfileConfig::default(),
            grid: GridConfig::default(),
            scheme: SchemeConfig::default(),
            sponge: SpongeConfig::default(),
            perturbation: PerturbationConfig::default(),
            t_final: None,
            diag_cadence: None,
            snapshot_cadence: None,
            v_floor: None,
            shift: true,
            output: None,
            seed: 0,
        }
    }
}

/// Parses `key=value`; the value is read as a TOML literal, falling back to a string.
fn parse_override(spec: &str) -> Result<(Vec<String>, toml::Value), ConfigError> {
    let (key, raw) = spec.split_once('=').ok_or_else(|| ConfigError::Override(format!("`{spec}` is not key=value")))?;
    let key = key.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(ConfigError::Override(format!("empty key segment in `{key}`")));
    }
    let raw = raw.trim();
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.to_string())),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    Ok((key.split('.').map(str::to_string).collect(), value))
}

fn set_path(root: &mut toml::Table, path: &[String], value: toml::Value) -> Result<(), ConfigError> {
    let (last, parents) = path.split_last().expect("nonempty key");
    let mut table = root;
    for seg in parents {
        let entry = table.entry(seg.clone()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| ConfigError::Override(format!("`{seg}` is not a table in `{}`", path.join("."))))?;
    }
    table.insert(last.clone(), value);
    Ok(())
}

impl RunConfig {
    /// Reads an optional TOML file and applies `key=value` overrides in order.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| ConfigError::Io(p.to_path_buf(), e))?;
                text.parse::<toml::Table>().map_err(|e| ConfigError::Parse(e.to_string()))?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            let (key, value) = parse_override(o)?;
            set_path(&mut table, &key, value)?;
        }
        Self::from_table(table)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        Self::from_table(text.parse::<toml::Table>().map_err(|e| ConfigError::Parse(e.to_string()))?)
    }

    fn from_table(table: toml::Table) -> Result<Self, ConfigError> {
        let cfg: RunConfig = table.try_into().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if !(self.law.gamma > 1.0) {
            return bad(format!("law.gamma must exceed 1, got {}", self.law.gamma));
        }
        if !(self.end_states.v_plus > 0.0) {
            return bad(format!("end_states.v_plus must be positive, got {}", self.end_states.v_plus));
        }
        match (self.end_states.delta_s, self.end_states.v_minus) {
            (Some(d), _) if !(d > 0.0) => return bad(format!("end_states.delta_s must be positive, got {d}")),
            (None, Some(v)) if !(v > 0.0) => return bad(format!("end_states.v_minus must be positive, got {v}")),
            _ => {}
        }
        if !(self.scheme.cfl > 0.0) {
            return bad(format!("scheme.cfl must be positive, got {}", self.scheme.cfl));
        }
        for (name, v) in [
            ("t_final", self.t_final),
            ("diag_cadence", self.diag_cadence),
            ("snapshot_cadence", self.snapshot_cadence),
            ("perturbation.width", self.perturbation.width),
            ("grid.dx", self.grid.dx),
            ("grid.L_dom", self.grid.half_length),
            ("profile.L", self.profile.half_length),
            ("scheme.dt_override", self.scheme.dt_override),
        ] {
            if let Some(x) = v {
                if !(x > 0.0 && x.is_finite()) {
                    return bad(format!("{name} must be positive, got {x}"));
                }
            }
        }
        if !(0.0..0.5).contains(&self.sponge.fraction) {
            return bad(format!("sponge.fraction must lie in [0, 0.5), got {}", self.sponge.fraction));
        }
        Ok(())
    }

    pub fn law(&self) -> Result<GasLaw, nsk_core::Error> {
        GasLaw::new(self.law.gamma)
    }

    pub fn end_states(&self, law: &GasLaw) -> Result<EndStates, nsk_core::Error> {
        let es = &self.end_states;
        match (es.delta_s, es.v_minus) {
            (Some(d), _) => EndStates::from_strength(law, es.v_plus, es.u_plus, d),
            (None, Some(vm)) => EndStates::solve(law, vm, es.v_plus, es.u_plus),
            (None, None) => EndStates::from_strength(law, es.v_plus, es.u_plus, DEFAULT_DELTA_S),
        }
    }

    pub fn profile_options(&self) -> ProfileOptions {
        ProfileOptions {
            half_length: self.profile.half_length,
            n_points: self.profile.n,
            method: self.profile.method,
            tail_tol: self.profile.tail_tol,
            ..ProfileOptions::default()
        }
    }

    pub fn t_final(&self, es: &EndStates) -> f64 {
        self.t_final.unwrap_or(50.0 / es.delta_s)
    }

    /// Grid from the explicit settings or the defaults:
    /// `L_dom = 1.25 max(8/delta_s, 4 width)` (plus `sigma t_final` in the lab frame)
    /// and `dx = min(1, width/64)`.
    pub fn grid(&self, es: &EndStates, profile_width: f64) -> Result<Grid1D, nsk_core::Error> {
        let width = if profile_width.is_finite() && profile_width > 0.0 { profile_width } else { 1.0 };
        let mut half = self.grid.half_length.unwrap_or(1.25 * (8.0 / es.delta_s).max(4.0 * width));
        if self.grid.half_length.is_none() && self.grid.frame == Frame::Lab {
            half += es.sigma * self.t_final(es);
        }
        match self.grid.n {
            Some(n) => Grid1D::new(-half, half, n),
            None => Grid1D::symmetric(half, self.grid.dx.unwrap_or((width / 64.0).min(1.0))),
        }
    }

    pub fn perturbation(&self, es: &EndStates) -> Perturbation {
        let p = &self.perturbation;
        Perturbation {
            kind: p.kind,
            amplitude_v: p.amplitude_v,
            amplitude_u: p.amplitude_u,
            amplitude_w: p.amplitude_w,
            center: p.center,
            width: p.width.unwrap_or(5.0 / es.delta_s),
            zero_mass: p.zero_mass,
            w_init: p.w_init,
            seed: self.seed,
        }
    }

    pub fn evolve_config(&self, es: &EndStates, grid: Grid1D) -> EvolveConfig {
        let t_final = self.t_final(es);
        let mut cfg = EvolveConfig::new(grid, t_final, self.diag_cadence.unwrap_or(t_final / 400.0));
        cfg.frame = self.grid.frame;
        cfg.scheme = self.scheme.kind;
        cfg.cfl = self.scheme.cfl;
        cfg.dt_override = self.scheme.dt_override;
        cfg.snapshot_cadence = Some(self.snapshot_cadence.unwrap_or(t_final / 10.0));
        cfg.sponge = Sponge { fraction: self.sponge.fraction, rate: self.sponge.rate.unwrap_or(es.delta_s) };
        cfg.v_floor = self.v_floor;
        cfg.shift = self.shift;
        cfg
    }
}
