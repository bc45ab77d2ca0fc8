//! JSON scenario configs, the dispatch behind `fluxtrap run` and
//! `fluxtrap sweep`, report documents, and the built-in presets.
//!
//! A config is a single JSON object; `kind` selects the scenario, the other
//! keys supply profiles, physics parameters, numerics, and output names.
//! Unknown keys are rejected. [`ScenarioConfig::resolve`] fills in every
//! kind-specific default, and the report echoes that resolved config, so a
//! report can be re-run bit-identically; two runs of the same config on the
//! same build differ only in `wall_time_seconds`.

use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::fields::{self, CurrentProfile, FieldProfile, GridField};
use crate::planar_solver::{self, PlanarGrid};
use crate::radial_solver::{self, Discretization, RadialProblem, Spin};
use crate::specfun;
use crate::zeromodes::{self, CertifyOutcome};
use crate::{Error, Result};

pub const KINDS: &[&str] = &[
    "flux",
    "zero-modes",
    "count",
    "radial-spectrum",
    "vortex",
    "critical-lambda",
    "weak-coupling",
    "strong-coupling",
    "planar-verify",
    "identity-check",
];

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

/// Field selection as it appears in configs; `build` turns it into a
/// [`FieldProfile`]. `grid` profiles read their sample file at build time,
/// `tuned-annulus` runs the ring-amplitude root-find.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldConfig {
    Disk {
        b0: f64,
        radius: f64,
    },
    Annulus {
        disk_amp: f64,
        disk_radius: f64,
        ring_amp: f64,
        ring_inner: f64,
        ring_outer: f64,
    },
    GaussianBump {
        amp: f64,
        width: f64,
        cutoff: f64,
    },
    TunedAnnulus {
        g: f64,
    },
    Grid {
        path: String,
    },
    Vortex {
        #[serde(default = "one")]
        amp: f64,
        #[serde(default = "two")]
        power: f64,
        #[serde(default = "one")]
        scale: f64,
    },
}

impl FieldConfig {
    pub fn build(&self) -> Result<FieldProfile> {
        let field = match self {
            FieldConfig::Disk { b0, radius } => FieldProfile::uniform_disk(*b0, *radius),
            FieldConfig::Annulus {
                disk_amp,
                disk_radius,
                ring_amp,
                ring_inner,
                ring_outer,
            } => FieldProfile::Annulus {
                disk_amp: *disk_amp,
                disk_radius: *disk_radius,
                ring_amp: *ring_amp,
                ring_inner: *ring_inner,
                ring_outer: *ring_outer,
            },
            FieldConfig::GaussianBump { amp, width, cutoff } => FieldProfile::GaussianBump {
                amp: *amp,
                width: *width,
                cutoff: *cutoff,
            },
            FieldConfig::TunedAnnulus { g } => {
                if !(*g > 2.0) {
                    return Err(Error::Validation(format!(
                        "tuned-annulus: `g` must be > 2 (got {g})"
                    )));
                }
                zeromodes::tuned_linear_term_annulus(*g)?
            }
            FieldConfig::Grid { path } => FieldProfile::Grid(GridField::from_file(Path::new(path))?),
            FieldConfig::Vortex { amp, power, scale } => FieldProfile::vortex(CurrentProfile {
                amp: *amp,
                power: *power,
                scale: *scale,
            })?,
        };
        field.validate()?;
        Ok(field)
    }

    pub fn label(&self) -> String {
        match self {
            FieldConfig::Disk { b0, radius } => format!("disk(b0={b0}, radius={radius})"),
            FieldConfig::Annulus {
                disk_amp,
                disk_radius,
                ring_amp,
                ring_inner,
                ring_outer,
            } => format!(
                "annulus({disk_amp}@r<{disk_radius}, {ring_amp}@[{ring_inner},{ring_outer}])"
            ),
            FieldConfig::GaussianBump { amp, width, cutoff } => {
                format!("gaussian-bump(amp={amp}, width={width}, cutoff={cutoff})")
            }
            FieldConfig::TunedAnnulus { g } => format!("tuned-annulus(g={g})"),
            FieldConfig::Grid { path } => format!("grid({path})"),
            FieldConfig::Vortex { amp, power, scale } => {
                format!("vortex(amp={amp}, power={power}, scale={scale})")
            }
        }
    }
}

/// Azimuthal current profile J(r) = amp · r^power · e^{−r/scale}; the
/// defaults give the r²e^{−r} profile used throughout.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentConfig {
    #[serde(default = "one")]
    pub amp: f64,
    #[serde(default = "two")]
    pub power: f64,
    #[serde(default = "one")]
    pub scale: f64,
}

impl CurrentConfig {
    pub fn build(&self) -> Result<CurrentProfile> {
        let c = CurrentProfile {
            amp: self.amp,
            power: self.power,
            scale: self.scale,
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorConfig {
    pub mu: f64,
}

/// A swept parameter range: either an explicit `values` list or
/// start/stop/steps with `"linear"` (default) or `"log"` spacing.
/// Values must be strictly monotone.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RangeConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacing: Option<String>,
}

fn strictly_monotone(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1]) || v.windows(2).all(|w| w[0] > w[1])
}

impl RangeConfig {
    pub fn values(&self) -> Result<Vec<f64>> {
        let vals = if let Some(v) = &self.values {
            if self.start.is_some() || self.stop.is_some() || self.steps.is_some() {
                return Err(Error::Validation(
                    "range: give either `values` or start/stop/steps, not both".into(),
                ));
            }
            v.clone()
        } else {
            let (Some(a), Some(b), Some(k)) = (self.start, self.stop, self.steps) else {
                return Err(Error::Validation(
                    "range needs `values` or all of `start`, `stop`, `steps`".into(),
                ));
            };
            if k < 2 {
                return Err(Error::Validation("range: `steps` must be ≥ 2".into()));
            }
            match self.spacing.as_deref().unwrap_or("linear") {
                "linear" => (0..k)
                    .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
                    .collect(),
                "log" => {
                    if !(a > 0.0 && b > 0.0) {
                        return Err(Error::Validation(
                            "range: log spacing needs positive endpoints".into(),
                        ));
                    }
                    (0..k)
                        .map(|i| a * (b / a).powf(i as f64 / (k - 1) as f64))
                        .collect()
                }
                other => {
                    return Err(Error::Validation(format!(
                        "range: spacing must be `linear` or `log`, got `{other}`"
                    )))
                }
            }
        };
        if vals.is_empty() {
            return Err(Error::Validation("range must be non-empty".into()));
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("range contains a non-finite value".into()));
        }
        if !strictly_monotone(&vals) {
            return Err(Error::Validation(
                "range values must be strictly monotone".into(),
            ));
        }
        Ok(vals)
    }
}

/// Numeric knobs. Everything is optional; [`ScenarioConfig::resolve`] fills
/// the kind-specific defaults so the report echo shows what actually ran.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    /// Radial truncation radius of the base grid (the solver still doubles
    /// the domain on its own until the spectrum stabilizes).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement_levels: Option<usize>,
    /// Planar box half width L; default 3× the support radius (at least 3).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planar_half_width: Option<f64>,
    /// Planar grid sizes, strictly increasing; the two finest drive the
    /// h² extrapolation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planar_ns: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// When set, planar runs also count eigenvalues inside ±factor·h.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub near_zero_window_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compare_radial: Option<bool>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<Vec<FieldConfig>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub current: Option<CurrentConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oscillator: Option<OscillatorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_range: Option<RangeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ells: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerics: Option<NumericsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

fn parse_spin(s: &str) -> Result<Spin> {
    match s {
        "down" => Ok(Spin::Down),
        "up" => Ok(Spin::Up),
        other => Err(Error::Validation(format!(
            "`spin` must be `up` or `down`, got `{other}`"
        ))),
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("config: {e}")))
    }

    pub fn from_value(doc: Value) -> Result<Self> {
        serde_json::from_value(doc).map_err(|e| Error::Validation(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Check every kind-specific requirement and materialize defaults. All
    /// violations are collected into one message so a bad config is fixed
    /// in one round trip.
    pub fn resolve(&self) -> Result<ScenarioConfig> {
        let mut c = self.clone();
        let kind = c.kind.clone();
        if !KINDS.contains(&kind.as_str()) {
            return Err(Error::Validation(format!(
                "unknown scenario kind `{kind}`; expected one of: {}",
                KINDS.join(", ")
            )));
        }
        let mut bad: Vec<String> = Vec::new();
        if let Some(g) = c.g {
            if !(g > 0.0) {
                bad.push(format!("`g` must be > 0 (got {g})"));
            }
        }
        if let Some(l) = c.lambda {
            if !(l >= 0.0) {
                bad.push(format!("`lambda` must be ≥ 0 (got {l})"));
            }
        }
        if let Some(s) = &c.spin {
            if let Err(e) = parse_spin(s) {
                bad.push(e.to_string());
            }
        }
        if let Some(e) = &c.ells {
            if e.is_empty() {
                bad.push("`ells` must be non-empty".into());
            }
        }
        if let Some(r) = &c.lambda_range {
            if let Err(e) = r.values() {
                bad.push(format!("`lambda_range`: {e}"));
            }
        }
        if let Some(gv) = &c.g_values {
            if gv.is_empty() || gv.iter().any(|g| !(*g > 0.0)) {
                bad.push("`g_values` must be a non-empty list of positive couplings".into());
            }
        }
        if let Some(b) = c.bracket {
            if !(b[0] > 0.0 && b[1] > b[0]) {
                bad.push(format!(
                    "`bracket` must satisfy 0 < lo < hi (got [{}, {}])",
                    b[0], b[1]
                ));
            }
        }
        if let Some(ns) = c.numerics.as_ref().and_then(|n| n.planar_ns.as_ref()) {
            if ns.is_empty() || !ns.windows(2).all(|w| w[0] < w[1]) {
                bad.push("`numerics.planar_ns` must be non-empty and strictly increasing".into());
            }
        }

        match kind.as_str() {
            "flux" | "zero-modes" => {
                if c.field.is_none() {
                    bad.push("missing field `field` (a field profile)".into());
                }
            }
            "count" => {
                if c.field.is_none() {
                    bad.push("missing field `field` (a field profile)".into());
                }
                if c.g.is_none() {
                    bad.push("missing field `g` (coupling for the certificates)".into());
                }
                let num = c.numerics.get_or_insert_with(Default::default);
                if num.compare_radial == Some(true) {
                    num.r_max.get_or_insert(32.0);
                    num.n.get_or_insert(2048);
                    num.refinement_levels.get_or_insert(2);
                    c.lambda.get_or_insert(1.0);
                    c.spin.get_or_insert_with(|| "down".into());
                }
            }
            "radial-spectrum" => {
                let sources = [
                    c.field.is_some(),
                    c.current.is_some(),
                    c.oscillator.is_some(),
                ]
                .iter()
                .filter(|b| **b)
                .count();
                if sources != 1 {
                    bad.push(
                        "give exactly one of `field`, `current`, or `oscillator`".into(),
                    );
                }
                if let Some(o) = &c.oscillator {
                    if !(o.mu > 0.0) {
                        bad.push(format!("`oscillator.mu` must be > 0 (got {})", o.mu));
                    } else {
                        c.ells.get_or_insert_with(|| vec![0]);
                        let mu = o.mu;
                        let num = c.numerics.get_or_insert_with(Default::default);
                        num.r_max.get_or_insert(10.0 / mu.sqrt());
                        num.n.get_or_insert(2048);
                        num.refinement_levels.get_or_insert(2);
                    }
                } else {
                    if c.g.is_none() {
                        bad.push("missing field `g` (coupling constant)".into());
                    }
                    c.spin.get_or_insert_with(|| "down".into());
                    if c.current.is_some() {
                        if c.lambda.is_none() && c.lambda_range.is_none() {
                            bad.push(
                                "missing field `lambda` (current strength; or a `lambda_range` for sweeps)"
                                    .into(),
                            );
                        }
                        c.ells.get_or_insert_with(|| vec![0]);
                        let num = c.numerics.get_or_insert_with(Default::default);
                        num.r_max.get_or_insert(60.0);
                        num.n.get_or_insert(1024);
                        num.refinement_levels.get_or_insert(2);
                    } else if c.field.is_some() {
                        c.lambda.get_or_insert(1.0);
                        c.ells.get_or_insert_with(|| vec![-2, -1, 0, 1, 2]);
                        let num = c.numerics.get_or_insert_with(Default::default);
                        num.r_max.get_or_insert(32.0);
                        num.n.get_or_insert(2048);
                        num.refinement_levels.get_or_insert(2);
                    }
                }
            }
            "vortex" => {
                if c.current.is_none() {
                    bad.push("missing field `current` (a current profile)".into());
                }
            }
            "critical-lambda" => {
                if c.current.is_none() {
                    bad.push("missing field `current` (a current profile)".into());
                }
                if c.g.is_none() {
                    bad.push("missing field `g` (coupling constant)".into());
                }
                if c.bracket.is_none() {
                    bad.push("missing field `bracket` (strength interval [lo, hi])".into());
                }
                c.ells.get_or_insert_with(|| vec![0]);
                c.spin.get_or_insert_with(|| "down".into());
                let num = c.numerics.get_or_insert_with(Default::default);
                num.r_max.get_or_insert(60.0);
                num.n.get_or_insert(1024);
                num.refinement_levels.get_or_insert(2);
            }
            "weak-coupling" => {
                if c.current.is_none() {
                    bad.push("missing field `current` (a current profile)".into());
                }
                if c.g.is_none() {
                    bad.push("missing field `g` (coupling constant)".into());
                }
                let num = c.numerics.get_or_insert_with(Default::default);
                num.r_max.get_or_insert(100.0);
                num.n.get_or_insert(4096);
                num.refinement_levels.get_or_insert(2);
            }
            "strong-coupling" => {
                if c.current.is_none() {
                    bad.push("missing field `current` (a current profile)".into());
                }
                if c.g.is_none() {
                    bad.push("missing field `g` (coupling constant)".into());
                }
                if c.lambda.is_none() && c.lambda_range.is_none() {
                    bad.push("missing field `lambda` or `lambda_range`".into());
                }
                c.ells.get_or_insert_with(|| vec![0]);
            }
            "planar-verify" => {
                match (c.field.is_some(), c.fields.is_some()) {
                    (true, true) => bad.push("give `field` or `fields`, not both".into()),
                    (true, false) => c.fields = Some(vec![c.field.take().unwrap()]),
                    (false, false) => {
                        bad.push("missing field `fields` (list of field profiles)".into())
                    }
                    (false, true) => {}
                }
                if let Some(fs) = &c.fields {
                    if fs.is_empty() {
                        bad.push("`fields` must be non-empty".into());
                    }
                }
                if c.g.is_none() {
                    bad.push("missing field `g` (coupling constant)".into());
                }
                c.spin.get_or_insert_with(|| "down".into());
                let num = c.numerics.get_or_insert_with(Default::default);
                num.planar_ns.get_or_insert_with(|| vec![48, 96]);
                num.k.get_or_insert(4);
                num.tol.get_or_insert(1e-8);
                num.compare_radial.get_or_insert(false);
            }
            "identity-check" => {
                if c.current.is_some() && c.g_values.is_none() {
                    c.g_values = Some(vec![1.9, 2.1]);
                }
            }
            _ => unreachable!("kind checked above"),
        }

        if !bad.is_empty() {
            return Err(Error::Validation(format!(
                "config invalid for kind `{kind}`: {}",
                bad.join("; ")
            )));
        }
        Ok(c)
    }
}

/// Apply one `--override key=value` assignment to the raw JSON document
/// before it is deserialized. The key is a dot-separated path; numeric
/// segments index into arrays; the value is parsed as JSON when possible
/// and kept as a bare string otherwise.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment.split_once('=').ok_or_else(|| {
        Error::Validation(format!("override `{assignment}` must look like key=value"))
    })?;
    if path.is_empty() {
        return Err(Error::Validation("override has an empty key".into()));
    }
    let val: Value =
        serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let segs: Vec<&str> = path.split('.').collect();
    let (parents, leaf) = segs.split_at(segs.len() - 1);
    let mut cur = doc;
    for seg in parents {
        cur = if let Ok(idx) = seg.parse::<usize>() {
            let arr = cur.as_array_mut().ok_or_else(|| {
                Error::Validation(format!("override `{path}`: `{seg}` indexes a non-array"))
            })?;
            arr.get_mut(idx).ok_or_else(|| {
                Error::Validation(format!("override `{path}`: index {idx} out of range"))
            })?
        } else {
            let obj = cur.as_object_mut().ok_or_else(|| {
                Error::Validation(format!(
                    "override `{path}`: `{seg}` addresses a non-object"
                ))
            })?;
            obj.entry(seg.to_string()).or_insert_with(|| json!({}))
        };
    }
    let leaf = leaf[0];
    if let Ok(idx) = leaf.parse::<usize>() {
        let arr = cur.as_array_mut().ok_or_else(|| {
            Error::Validation(format!("override `{path}`: `{leaf}` indexes a non-array"))
        })?;
        let slot = arr.get_mut(idx).ok_or_else(|| {
            Error::Validation(format!("override `{path}`: index {idx} out of range"))
        })?;
        *slot = val;
    } else {
        let obj = cur.as_object_mut().ok_or_else(|| {
            Error::Validation(format!("override `{path}`: `{leaf}` addresses a non-object"))
        })?;
        obj.insert(leaf.to_string(), val);
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

/// One complete run: the resolved inputs, the results tree, human-readable
/// diagnostics, an overall convergence verdict, and the wall time. Every
/// headline numeric inside `results` is an object
/// `{value, error, converged}`; serialization key order is stable.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub config: ScenarioConfig,
    pub results: Value,
    pub diagnostics: Vec<String>,
    pub converged: bool,
    pub wall_time_seconds: f64,
}

impl Report {
    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_pretty())
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn measured(value: f64, error: f64, converged: bool) -> Value {
    json!({ "value": value, "error": error, "converged": converged })
}

type RunParts = Result<(Value, Vec<String>, bool)>;

fn req_field(cfg: &ScenarioConfig) -> Result<FieldProfile> {
    cfg.field
        .as_ref()
        .ok_or_else(|| Error::Validation("missing field `field`".into()))?
        .build()
}

fn req_current(cfg: &ScenarioConfig) -> Result<CurrentProfile> {
    cfg.current
        .as_ref()
        .ok_or_else(|| Error::Validation("missing field `current`".into()))?
        .build()
}

fn req_g(cfg: &ScenarioConfig) -> Result<f64> {
    cfg.g
        .ok_or_else(|| Error::Validation("missing field `g`".into()))
}

fn cfg_spin(cfg: &ScenarioConfig) -> Result<Spin> {
    parse_spin(cfg.spin.as_deref().unwrap_or("down"))
}

fn radial_disc(cfg: &ScenarioConfig, r_max: f64, n: usize) -> Discretization {
    let num = cfg.numerics.clone().unwrap_or_default();
    Discretization {
        r_max: num.r_max.unwrap_or(r_max),
        n: num.n.unwrap_or(n),
        refinement_levels: num.refinement_levels.unwrap_or(2),
    }
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<Report> {
    let t0 = Instant::now();
    let cfg = config.resolve()?;
    let (results, diagnostics, converged) = match cfg.kind.as_str() {
        "flux" => run_flux(&cfg)?,
        "zero-modes" => run_zero_modes(&cfg)?,
        "count" => run_count(&cfg)?,
        "radial-spectrum" => run_radial_spectrum(&cfg)?,
        "vortex" => run_vortex(&cfg)?,
        "critical-lambda" => run_critical_lambda(&cfg)?,
        "weak-coupling" => run_weak_coupling(&cfg)?,
        "strong-coupling" => run_strong_coupling(&cfg)?,
        "planar-verify" => run_planar_verify(&cfg)?,
        "identity-check" => run_identity_check(&cfg)?,
        _ => unreachable!("resolve checked the kind"),
    };
    Ok(Report {
        tool: ToolInfo {
            name: "fluxtrap",
            version: crate::VERSION,
        },
        config: cfg,
        results,
        diagnostics,
        converged,
        wall_time_seconds: t0.elapsed().as_secs_f64(),
    })
}

fn flux_json(flux: &fields::FluxDecomposition) -> Value {
    json!({ "f": flux.f, "whole_modes": flux.n, "eps": flux.eps })
}

fn run_flux(cfg: &ScenarioConfig) -> RunParts {
    let field = req_field(cfg)?;
    let flux = field.total_flux()?;
    let supp = field.support_radius();
    let mut results = json!({
        "flux": flux_json(&flux),
        "support_radius": supp,
        "square_integrable_zero_modes": flux.n.max(0),
    });
    let mut diags = vec![format!(
        "flux F = {:.6} = N + eps with N = {}, eps = {:.6}",
        flux.f, flux.n, flux.eps
    )];
    if field.is_compact() && flux.f.abs() > 1e-12 {
        let r_far = 50.0 * supp.max(1.0);
        let phi = field.log_potential([r_far, 0.0])?;
        let ratio = phi / (flux.f * r_far.ln());
        results["far_field_log_ratio"] = json!(ratio);
        diags.push(format!(
            "phi(r) / (F ln r) = {ratio:.6} at r = {r_far:.1} (tends to 1)"
        ));
    }
    Ok((results, diags, true))
}

fn run_zero_modes(cfg: &ScenarioConfig) -> RunParts {
    let field = req_field(cfg)?;
    if !field.is_compact() {
        return Err(Error::Validation(
            "zero-mode analysis needs a compactly supported field".into(),
        ));
    }
    let flux = field.total_flux()?;
    let top = flux.n.max(0) as usize;
    let js: Vec<usize> = match cfg.j {
        Some(j) => vec![j],
        None => (0..=top).collect(),
    };
    let supp = field.support_radius().max(1.0);
    let mut rows = Vec::new();
    let mut diags = Vec::new();
    for &j in &js {
        let (r1, r2) = (20.0 * supp, 40.0 * supp);
        let m1 = zeromodes::zero_mode(&field, j, [r1, 0.0])?.norm();
        let m2 = zeromodes::zero_mode(&field, j, [r2, 0.0])?.norm();
        let expo = (m2 / m1).ln() / (r2 / r1).ln();
        let expected = j as f64 - flux.f;
        let residual =
            planar_solver::zero_mode_residual(&field, j, PlanarGrid::new(3.0 * supp, 64)?)?;
        let i_j = if field.is_radial() {
            Some(zeromodes::binding_integral(&field, j)?)
        } else {
            None
        };
        rows.push(json!({
            "j": j,
            "binding_integral": i_j,
            "far_field_exponent": expo,
            "expected_exponent": expected,
            "stencil_residual": residual,
        }));
        diags.push(format!(
            "j = {j}: |chi| ~ r^{expo:.4} (expected r^{expected:.4}), discrete-D residual {residual:.3e}"
        ));
    }
    Ok((json!({ "flux": flux_json(&flux), "modes": rows }), diags, true))
}

fn run_count(cfg: &ScenarioConfig) -> RunParts {
    let field = req_field(cfg)?;
    let g = req_g(cfg)?;
    let gc = zeromodes::guaranteed_count(&field)?;
    let mut certs = Vec::new();
    let mut all_ok = true;
    let mut diags = vec![format!("guaranteed count n_B = {}", gc.n_bound)];
    for j in 0..gc.n_bound {
        match zeromodes::certify(&field, g, j)? {
            CertifyOutcome::Certified(c) => {
                let via = if c.eps != 0.0 {
                    format!(" via bump amplitude eps = {:.4e}", c.eps)
                } else {
                    String::new()
                };
                diags.push(format!(
                    "j = {j}: certified, quadratic form {:.6e}{via}",
                    c.form_value
                ));
                certs.push(json!({
                    "j": c.j,
                    "status": "certified",
                    "form_value": c.form_value,
                    "eps": c.eps,
                    "r_cut": c.r_cut,
                    "bump": { "center_r": c.bump.center_r, "radius": c.bump.radius },
                    "breakdown": {
                        "cutoff_kinetic": c.breakdown.cutoff_kinetic,
                        "perturbation_kinetic": c.breakdown.perturbation_kinetic,
                        "cross": c.breakdown.cross,
                        "zeeman": c.breakdown.zeeman,
                    },
                    "warning": c.warning,
                }));
            }
            CertifyOutcome::Exhausted(f) => {
                all_ok = false;
                diags.push(format!(
                    "j = {j}: certificate search exhausted ({:?}, best value {:.3e})",
                    f.reason, f.best_value
                ));
                certs.push(json!({
                    "j": f.j,
                    "status": "exhausted",
                    "reason": format!("{:?}", f.reason),
                    "binding_integral": f.binding_integral,
                    "best_value": f.best_value,
                }));
            }
        }
    }
    let mut results = json!({
        "flux": flux_json(&gc.flux),
        "n_bound": gc.n_bound,
        "binding_integrals": gc.binding_integrals,
        "certificates": certs,
    });
    let mut converged = all_ok;
    let compare = cfg
        .numerics
        .as_ref()
        .and_then(|n| n.compare_radial)
        .unwrap_or(false);
    if compare {
        let lambda = cfg.lambda.unwrap_or(1.0);
        let spin = cfg_spin(cfg)?;
        let disc = radial_disc(cfg, 32.0, 2048);
        let ells: Vec<i64> = cfg
            .ells
            .clone()
            .unwrap_or_else(|| (0..gc.n_bound as i64).map(|j| -j).collect());
        let mut chans = Vec::new();
        let mut total = 0usize;
        for &ell in &ells {
            let p = RadialProblem::from_field(ell, spin, g, lambda, field.clone())?;
            let spec = radial_solver::negative_spectrum(&p, &disc)?;
            total += spec.eigenvalues.len();
            if !spec.unconverged.is_empty() {
                converged = false;
            }
            let vals: Vec<Value> = spec
                .extrapolated
                .iter()
                .zip(&spec.error_estimates)
                .map(|(e, err)| measured(*e, *err, true))
                .collect();
            chans.push(json!({
                "ell": ell,
                "count": spec.eigenvalues.len(),
                "eigenvalues": vals,
                "unconverged": spec.unconverged,
            }));
        }
        diags.push(format!(
            "radial cross-check: {total} negative levels across channels {ells:?}"
        ));
        results["radial_crosscheck"] = json!({ "channels": chans, "total_negative": total });
    }
    Ok((results, diags, converged))
}

fn run_oscillator_calibration(cfg: &ScenarioConfig) -> RunParts {
    let mu = cfg.oscillator.as_ref().unwrap().mu;
    let ells = cfg.ells.clone().unwrap_or_else(|| vec![0]);
    let disc = radial_disc(cfg, 10.0 / mu.sqrt(), 2048);
    let mut channels = Vec::new();
    let mut diags = Vec::new();
    let mut max_rel: f64 = 0.0;
    for &ell in &ells {
        let l2 = (ell * ell) as f64;
        let p = RadialProblem::synthetic(move |r| mu * mu * r * r + l2 / (r * r));
        let got = radial_solver::lowest_eigenvalues(&p, &disc, 3)?;
        let mut levels = Vec::new();
        for (n_r, &v) in got.iter().enumerate() {
            let exact = 2.0 * mu * (2.0 * n_r as f64 + ell.unsigned_abs() as f64 + 1.0);
            let rel = (v - exact).abs() / exact;
            max_rel = max_rel.max(rel);
            levels.push(json!({
                "n_r": n_r,
                "level": measured(v, (v - exact).abs(), rel < 1e-2),
                "exact": exact,
                "rel_dev": rel,
            }));
        }
        diags.push(format!(
            "ell = {ell}: levels {got:?} vs 2mu(2n+|l|+1)"
        ));
        channels.push(json!({ "ell": ell, "levels": levels }));
    }
    // raw single-grid errors against the exact s-wave ground level expose
    // the stencil's convergence order
    let p0 = RadialProblem::synthetic(move |r| mu * mu * r * r);
    let exact0 = 2.0 * mu;
    let mut errs = Vec::new();
    for n in [128usize, 256, 512] {
        let v = radial_solver::ground_state_at_resolution(&p0, disc.r_max, n)?;
        errs.push((v - exact0).abs());
    }
    let order =
        ((errs[0] / errs[1]).ln() / 2f64.ln() + (errs[1] / errs[2]).ln() / 2f64.ln()) / 2.0;
    diags.push(format!(
        "convergence order {order:.3} from ground-level errors {errs:?}"
    ));
    let results = json!({
        "mu": mu,
        "channels": channels,
        "convergence_order": order,
        "max_rel_dev": max_rel,
    });
    Ok((results, diags, max_rel < 1e-2))
}

fn run_radial_spectrum(cfg: &ScenarioConfig) -> RunParts {
    if cfg.oscillator.is_some() {
        return run_oscillator_calibration(cfg);
    }
    let g = req_g(cfg)?;
    let spin = cfg_spin(cfg)?;
    let lambda = cfg.lambda.ok_or_else(|| {
        Error::Validation(
            "`run` needs a single `lambda`; a `lambda_range` is swept with `fluxtrap sweep`"
                .into(),
        )
    })?;
    let is_vortex = cfg.current.is_some();
    let field = if is_vortex {
        FieldProfile::vortex(req_current(cfg)?)?
    } else {
        req_field(cfg)?
    };
    let disc = radial_disc(cfg, if is_vortex { 60.0 } else { 32.0 }, if is_vortex { 1024 } else { 2048 });
    let ells = cfg
        .ells
        .clone()
        .unwrap_or_else(|| if is_vortex { vec![0] } else { vec![-2, -1, 0, 1, 2] });
    let mut channels = Vec::new();
    let mut diags = Vec::new();
    let mut converged = true;
    let mut s_channel_count = None;
    for &ell in &ells {
        let p = RadialProblem::from_field(ell, spin, g, lambda, field.clone())?;
        let spec = radial_solver::negative_spectrum(&p, &disc)?;
        if !spec.unconverged.is_empty() {
            converged = false;
        }
        if ell == 0 {
            s_channel_count = Some(spec.eigenvalues.len());
        }
        let vals: Vec<Value> = spec
            .extrapolated
            .iter()
            .zip(&spec.error_estimates)
            .map(|(e, err)| measured(*e, *err, true))
            .collect();
        diags.push(format!(
            "ell = {ell}: {} negative level(s){}",
            spec.eigenvalues.len(),
            if spec.unconverged.is_empty() {
                String::new()
            } else {
                format!(", {} unconverged", spec.unconverged.len())
            }
        ));
        channels.push(json!({
            "ell": ell,
            "count": spec.eigenvalues.len(),
            "eigenvalues": vals,
            "unconverged": spec.unconverged,
            "r_max_used": spec.r_max_used,
        }));
    }
    let mut results = json!({ "lambda": lambda, "channels": channels });
    if is_vortex && g > 2.0 {
        if let Ok(pred) = radial_solver::weak_coupling_energy(lambda, g, &field) {
            results["predicted_shallow_energy"] = json!(pred);
            if s_channel_count == Some(0) && pred.abs() < 1e-8 {
                results["below_floor"] = json!(true);
                diags.push(format!(
                    "s-channel state below the numerical floor; asymptotic prediction {pred:.3e}"
                ));
            }
        }
    }
    Ok((results, diags, converged))
}

fn run_vortex(cfg: &ScenarioConfig) -> RunParts {
    let current = req_current(cfg)?;
    let m = fields::current_moments(&current)?;
    let field = FieldProfile::vortex(current.clone())?;
    let ge = fields::gauge_energy(&field)?;
    let pairing = fields::pair_interaction(&field)?;
    let rel = (pairing + 2.0 * PI * ge).abs() / (2.0 * PI * ge).abs();
    let s = current.scale;
    let (r_lo, r_hi, k) = (0.02 * s, 15.0 * s, 120usize);
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        let r = r_lo * (r_hi / r_lo).powf(i as f64 / (k - 1) as f64);
        rows.push(json!([r, field.radial_vector_potential(r)?, field.radial_b(r)]));
    }
    let results = json!({
        "moments": { "dipole": m.dipole, "mu": m.mu, "leading_coefficient": m.a },
        "gauge_energy": ge,
        "pair_interaction": pairing,
        "pairing_identity_rel_diff": rel,
        "samples": { "columns": ["r", "a_phi_unit", "b_unit"], "rows": rows },
    });
    let diags = vec![
        format!("mu = {:.6}, dipole = {:.6}", m.mu, m.dipole),
        format!("pairing identity relative difference {rel:.3e}"),
    ];
    Ok((results, diags, true))
}

fn run_critical_lambda(cfg: &ScenarioConfig) -> RunParts {
    let current = req_current(cfg)?;
    let g = req_g(cfg)?;
    let spin = cfg_spin(cfg)?;
    let bracket = cfg
        .bracket
        .ok_or_else(|| Error::Validation("missing field `bracket`".into()))?;
    let disc = radial_disc(cfg, 60.0, 1024);
    let ells = cfg.ells.clone().unwrap_or_else(|| vec![0]);
    let mut rows = Vec::new();
    let mut diags = Vec::new();
    let mut converged = true;
    for &ell in &ells {
        match radial_solver::critical_strength(ell, spin, g, &current, (bracket[0], bracket[1]), &disc)
        {
            Ok(c) => {
                diags.push(format!(
                    "ell = {ell}: lambda_c = {:.4} (counts {} -> {})",
                    c.lambda_c, c.count_below, c.count_above
                ));
                rows.push(json!({
                    "ell": ell,
                    "lambda_c": measured(c.lambda_c, 1e-3 * c.lambda_c, true),
                    "count_below": c.count_below,
                    "count_above": c.count_above,
                }));
            }
            Err(e) => {
                converged = false;
                diags.push(format!("ell = {ell}: {e}"));
                rows.push(json!({ "ell": ell, "error": e.to_string() }));
            }
        }
    }
    Ok((
        json!({ "bracket": bracket, "channels": rows }),
        diags,
        converged,
    ))
}

/// Least squares y = s·x + c.
fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let s = (n * sxy - sx * sy) / denom;
    (s, (sy - s * sx) / n)
}

/// Least squares y = s·x + d·√x + c; the √x term absorbs the first
/// subleading correction so the slope stops soaking it up.
fn fit_with_sqrt_term(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let mut a = [[0.0f64; 4]; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let b = [x, x.sqrt(), 1.0];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += b[i] * b[j];
            }
            a[i][3] += b[i] * y;
        }
    }
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for j in col..4 {
                a[row][j] -= f * a[col][j];
            }
        }
    }
    let mut sol = [0.0f64; 3];
    for i in (0..3).rev() {
        let mut acc = a[i][3];
        for j in i + 1..3 {
            acc -= a[i][j] * sol[j];
        }
        sol[i] = acc / a[i][i];
    }
    (sol[0], sol[1], sol[2])
}

fn run_weak_coupling(cfg: &ScenarioConfig) -> RunParts {
    let current = req_current(cfg)?;
    let g = req_g(cfg)?;
    let field = FieldProfile::vortex(current)?;
    let i_a = fields::gauge_energy(&field)? / (2.0 * PI);
    let (lhs, binds) = radial_solver::weak_coupling_condition(&field, g)?;
    let mut results = json!({
        "condition": { "lhs": lhs, "binds": binds },
        "integral_a_squared_r": i_a,
    });
    let mut diags = vec![format!(
        "second-order condition at g = {g}: lhs = {lhs:.6e} ({})",
        if binds { "binding" } else { "not binding" }
    )];
    if let Some(gv) = &cfg.g_values {
        let mut scan = Vec::new();
        for &gi in gv {
            let (l, b) = radial_solver::weak_coupling_condition(&field, gi)?;
            diags.push(format!(
                "condition at g = {gi}: lhs = {l:.6e} ({})",
                if b { "binding" } else { "not binding" }
            ));
            scan.push(json!({ "g": gi, "lhs": l, "binds": b }));
        }
        results["condition_scan"] = json!(scan);
    }
    let mut converged = true;
    if let Some(range) = &cfg.lambda_range {
        let lambdas = range.values()?;
        let disc = radial_disc(cfg, 100.0, 4096);
        let rows: Vec<Result<(f64, f64, Option<(f64, f64)>, bool)>> = lambdas
            .par_iter()
            .map(|&lambda| {
                let predicted = radial_solver::weak_coupling_energy(lambda, g, &field)?;
                let p = RadialProblem::from_field(0, Spin::Down, g, lambda, field.clone())?;
                let spec = radial_solver::negative_spectrum(&p, &disc)?;
                let solve = spec
                    .extrapolated
                    .first()
                    .map(|&e| (e, spec.error_estimates[0]));
                Ok((lambda, predicted, solve, spec.unconverged.is_empty()))
            })
            .collect();
        let mut row_json = Vec::new();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for row in rows {
            let (lambda, predicted, solve, clean) = row?;
            match solve {
                Some((e, err)) => {
                    xs.push(1.0 / (lambda * lambda));
                    ys.push(e.abs().ln());
                    diags.push(format!(
                        "lambda = {lambda}: solver {e:.6e}, predicted {predicted:.6e}"
                    ));
                    row_json.push(json!({
                        "lambda": lambda,
                        "predicted": predicted,
                        "solver": measured(e, err, clean),
                    }));
                    if !clean {
                        converged = false;
                    }
                }
                None => {
                    converged = false;
                    diags.push(format!(
                        "lambda = {lambda}: no negative eigenvalue resolved (prediction {predicted:.3e})"
                    ));
                    row_json.push(json!({
                        "lambda": lambda,
                        "predicted": predicted,
                        "solver": null,
                    }));
                }
            }
        }
        let predicted_slope = -1.0 / ((g * g - 4.0) / 8.0 * i_a);
        let mut law = json!({
            "rows": row_json,
            "predicted_slope": predicted_slope,
            "points_used": xs.len(),
        });
        if xs.len() >= 3 {
            let (s3, _, _) = fit_with_sqrt_term(&xs, &ys);
            let (s2, _) = fit_line(&xs, &ys);
            law["fitted_slope"] = json!(s3);
            law["fitted_slope_two_parameter"] = json!(s2);
            law["slope_ratio"] = json!(s3 / predicted_slope);
            diags.push(format!(
                "ln|E| vs 1/lambda^2: fitted slope {s3:.6e} (two-parameter {s2:.6e}), predicted {predicted_slope:.6e}, ratio {:.4}",
                s3 / predicted_slope
            ));
        } else {
            converged = false;
            diags.push("too few resolved points for the slope fit (need 3)".into());
        }
        results["energy_law"] = law;
    }
    Ok((results, diags, converged))
}

fn run_strong_coupling(cfg: &ScenarioConfig) -> RunParts {
    let current = req_current(cfg)?;
    let g = req_g(cfg)?;
    let mu = fields::current_moments(&current)?.mu;
    let lambdas = match (&cfg.lambda_range, cfg.lambda) {
        (Some(r), _) => r.values()?,
        (None, Some(l)) => vec![l],
        (None, None) => {
            return Err(Error::Validation(
                "missing field `lambda` or `lambda_range`".into(),
            ))
        }
    };
    let ells = cfg.ells.clone().unwrap_or_else(|| vec![0]);
    let num = cfg.numerics.clone().unwrap_or_default();
    let mut rows = Vec::new();
    let mut decreasing = Vec::new();
    let mut diags = Vec::new();
    let mut converged = true;
    for &ell in &ells {
        let nu = radial_solver::strong_coupling_limit(mu, g, 0, ell)?;
        let mut errs: Vec<(f64, Option<f64>)> = Vec::new();
        for &lambda in &lambdas {
            let disc = match (num.r_max, num.n) {
                (Some(r), Some(n)) => Discretization {
                    r_max: r,
                    n,
                    refinement_levels: num.refinement_levels.unwrap_or(2),
                },
                _ => radial_solver::strong_coupling_discretization(lambda, mu),
            };
            let resc = radial_solver::rescaled_ground_state(lambda, g, ell, &current, &disc)?;
            let abs_err = resc.map(|v| (v - nu).abs());
            errs.push((lambda, abs_err));
            if resc.is_none() && nu < 0.0 {
                converged = false;
            }
            diags.push(match resc {
                Some(v) => format!(
                    "lambda = {lambda}, ell = {ell}: E0/lambda = {v:.6} (limit {nu:.6})"
                ),
                None => format!("lambda = {lambda}, ell = {ell}: no negative eigenvalue"),
            });
            rows.push(json!({
                "lambda": lambda,
                "ell": ell,
                "rescaled": resc,
                "oscillator_limit": nu,
                "abs_err": abs_err,
            }));
        }
        errs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let dec = if errs.iter().all(|(_, e)| e.is_some()) && errs.len() >= 2 {
            Some(
                errs.windows(2)
                    .all(|w| w[1].1.unwrap() < w[0].1.unwrap()),
            )
        } else {
            None
        };
        decreasing.push(json!({ "ell": ell, "decreasing": dec }));
    }
    let results = json!({
        "mu": mu,
        "rows": rows,
        "error_decreasing": decreasing,
    });
    Ok((results, diags, converged))
}

fn run_planar_verify(cfg: &ScenarioConfig) -> RunParts {
    let g = req_g(cfg)?;
    let spin = cfg_spin(cfg)?;
    let fcs = cfg
        .fields
        .as_ref()
        .ok_or_else(|| Error::Validation("missing field `fields`".into()))?;
    let num = cfg.numerics.clone().unwrap_or_default();
    let ns = num.planar_ns.clone().unwrap_or_else(|| vec![48, 96]);
    let k = num.k.unwrap_or(4);
    let tol = num.tol.unwrap_or(1e-8);
    let compare = num.compare_radial.unwrap_or(false);
    let mut field_reports = Vec::new();
    let mut diags = Vec::new();
    let mut converged = true;
    for fc in fcs {
        let field = fc.build()?;
        let supp = field.support_radius();
        let l = num.planar_half_width.unwrap_or((3.0 * supp).max(3.0));
        let mut runs = Vec::new();
        let mut raw: Vec<(f64, Vec<f64>)> = Vec::new();
        let mut indicative = false;
        for &n in &ns {
            let grid = PlanarGrid::new(l, n)?;
            let h = grid.h();
            let op = planar_solver::build_operator(&field, g, spin, grid)?;
            indicative = op.indicative;
            let vals = planar_solver::lowest_eigenvalues(&op, k, tol)?;
            let prev = raw.last();
            let entries: Vec<Value> = vals
                .iter()
                .enumerate()
                .map(|(i, &v)| match prev.and_then(|(_, p)| p.get(i)) {
                    Some(&p) => measured(v, (v - p).abs(), true),
                    None => json!({ "value": v, "error": null, "converged": true }),
                })
                .collect();
            let mut run = json!({ "n": n, "h": h, "eigenvalues": entries });
            if let Some(w) = num.near_zero_window_factor {
                let win = w * h;
                let count = op.count_eigenvalues_below(win) - op.count_eigenvalues_below(-win);
                let max_abs = vals
                    .iter()
                    .filter(|v| v.abs() < win)
                    .fold(0.0f64, |m, v| m.max(v.abs()));
                if count > k {
                    diags.push(format!(
                        "{}: {count} eigenvalues inside the near-zero window exceed k = {k}; max_abs uses the k lowest only",
                        fc.label()
                    ));
                }
                run["near_zero"] = json!({ "window": win, "count": count, "max_abs": max_abs });
                diags.push(format!(
                    "{} at n = {n}: {count} eigenvalue(s) inside |E| < {win:.4}",
                    fc.label()
                ));
            }
            runs.push(run);
            raw.push((h, vals));
        }
        let mut fr = json!({
            "label": fc.label(),
            "indicative": indicative,
            "half_width": l,
            "runs": runs,
        });
        if indicative {
            diags.push(format!(
                "{}: field support reaches the Dirichlet wall; results are indicative",
                fc.label()
            ));
        }
        if compare && raw.len() >= 2 && field.is_radial() && field.is_compact() {
            let (h_c, coarse) = &raw[raw.len() - 2];
            let (h_f, fine) = &raw[raw.len() - 1];
            let w = h_c * h_c / (h_c * h_c - h_f * h_f);
            let extrap: Vec<f64> = fine
                .iter()
                .zip(coarse)
                .map(|(f, c)| w * f + (1.0 - w) * c)
                .collect();
            let disc = Discretization {
                r_max: (4.0 * supp).max(16.0),
                n: 2048,
                refinement_levels: 2,
            };
            let mut radial_union = Vec::new();
            for ell in -2i64..=2 {
                let p = RadialProblem::from_field(ell, spin, g, 1.0, field.clone())?;
                let spec = radial_solver::negative_spectrum(&p, &disc)?;
                radial_union.extend(spec.extrapolated);
            }
            radial_union.sort_by(|a, b| a.total_cmp(b));
            let m = radial_union.len().min(3).min(extrap.len());
            let devs: Vec<f64> = (0..m)
                .map(|i| (extrap[i] - radial_union[i]).abs() / radial_union[i].abs())
                .collect();
            let max_dev = devs.iter().fold(0.0f64, |a, &d| a.max(d));
            diags.push(format!(
                "{}: radial vs planar deviation {:.4e} over the lowest {m}",
                fc.label(),
                max_dev
            ));
            if m < 3 {
                converged = false;
                diags.push(format!(
                    "{}: only {m} comparable negative level(s)",
                    fc.label()
                ));
            }
            fr["radial_comparison"] = json!({
                "radial": &radial_union[..m],
                "planar_extrapolated": &extrap[..m.min(extrap.len())],
                "rel_devs": devs,
                "max_rel_dev": max_dev,
            });
        }
        field_reports.push(fr);
    }
    Ok((json!({ "fields": field_reports }), diags, converged))
}

fn run_identity_check(cfg: &ScenarioConfig) -> RunParts {
    let k0 = specfun::elliptic_k(0.0)?;
    let e0 = specfun::elliptic_e(0.0)?;
    let e1 = specfun::elliptic_e(1.0)?;
    let mut legendre_max: f64 = 0.0;
    for i in 1..=9 {
        let m = i as f64 / 10.0;
        let lhs = specfun::elliptic_k(m)? * specfun::elliptic_e(1.0 - m)?
            + specfun::elliptic_e(m)? * specfun::elliptic_k(1.0 - m)?
            - specfun::elliptic_k(m)? * specfun::elliptic_k(1.0 - m)?;
        legendre_max = legendre_max.max((lhs - PI / 2.0).abs());
    }
    let mut results = json!({
        "elliptic": {
            "k_at_0": k0,
            "e_at_0": e0,
            "e_at_1": e1,
            "legendre_max_dev": legendre_max,
        }
    });
    let mut diags = vec![format!(
        "K(0) = {k0:.15}, E(0) = {e0:.15}, E(1) = {e1:.15}, Legendre deviation {legendre_max:.3e}"
    )];
    if let Some(cc) = &cfg.current {
        let field = FieldProfile::vortex(cc.build()?)?;
        let lhs = fields::pair_interaction(&field)?;
        let rhs = -2.0 * PI * fields::gauge_energy(&field)?;
        let rel = (lhs - rhs).abs() / rhs.abs();
        results["pairing"] = json!({
            "double_integral": lhs,
            "minus_two_pi_gauge_energy": rhs,
            "rel_diff": rel,
        });
        diags.push(format!(
            "pairing identity: {lhs:.8e} vs {rhs:.8e} (relative difference {rel:.3e})"
        ));
        if let Some(gv) = &cfg.g_values {
            let mut scan = Vec::new();
            for &gi in gv {
                let (l, b) = radial_solver::weak_coupling_condition(&field, gi)?;
                diags.push(format!(
                    "condition at g = {gi}: lhs = {l:.6e} ({})",
                    if b { "binding" } else { "not binding" }
                ));
                scan.push(json!({ "g": gi, "lhs": l, "binds": b }));
            }
            results["condition_scan"] = json!(scan);
        }
    }
    Ok((results, diags, true))
}

/// A sweep result: column names, formatted rows, and the two columns that
/// go into the companion plot file.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub plot_columns: (usize, usize),
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(
                &row.iter()
                    .map(|c| csv_escape(c))
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.push('\n');
        }
        out
    }

    /// Two-column numeric file for plotting; rows with an empty cell in
    /// either column are skipped.
    pub fn to_plot(&self) -> String {
        let (a, b) = self.plot_columns;
        let mut out = String::new();
        for row in &self.rows {
            if row[a].is_empty() || row[b].is_empty() {
                continue;
            }
            out.push_str(&row[a]);
            out.push(' ');
            out.push_str(&row[b]);
            out.push('\n');
        }
        out
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x:.10e}")
}

enum SweepAxis {
    Lambda(Vec<f64>),
    G(Vec<f64>),
    Ell(Vec<i64>),
}

fn sweep_axis(cfg: &ScenarioConfig) -> Result<SweepAxis> {
    if let Some(r) = &cfg.lambda_range {
        return Ok(SweepAxis::Lambda(r.values()?));
    }
    if let Some(gv) = &cfg.g_values {
        if !strictly_monotone(gv) {
            return Err(Error::Validation(
                "`g_values` must be strictly monotone for a sweep".into(),
            ));
        }
        return Ok(SweepAxis::G(gv.clone()));
    }
    if let Some(es) = &cfg.ells {
        let as_f: Vec<f64> = es.iter().map(|&e| e as f64).collect();
        if !strictly_monotone(&as_f) {
            return Err(Error::Validation(
                "`ells` must be strictly monotone for a sweep".into(),
            ));
        }
        return Ok(SweepAxis::Ell(es.clone()));
    }
    Err(Error::Validation(
        "sweep needs `lambda_range`, `g_values`, or `ells` as the swept axis".into(),
    ))
}

/// One row per swept value, in range order; a failed row keeps its place
/// with the error message in the trailing `note` column.
fn sweep_rows<T: Copy + Sync + Send>(
    values: &[T],
    columns: &[&str],
    param_fmt: impl Fn(T) -> String + Sync,
    row_fn: impl Fn(T) -> Result<(Vec<String>, String)> + Sync,
) -> SweepTable {
    let width = columns.len();
    let rows: Vec<Vec<String>> = values
        .par_iter()
        .map(|&v| match row_fn(v) {
            Ok((mut cells, note)) => {
                cells.push(note);
                debug_assert_eq!(cells.len(), width);
                cells
            }
            Err(e) => {
                let mut cells = vec![param_fmt(v)];
                cells.resize(width - 1, String::new());
                cells.push(e.to_string());
                cells
            }
        })
        .collect();
    SweepTable {
        columns: columns.iter().map(|s| s.to_string()).collect(),
        rows,
        plot_columns: (0, 1),
    }
}

pub fn run_sweep(config: &ScenarioConfig) -> Result<SweepTable> {
    let cfg = config.resolve()?;
    let axis = sweep_axis(&cfg)?;
    match (cfg.kind.as_str(), &axis) {
        ("strong-coupling", SweepAxis::Lambda(vs)) => {
            let current = req_current(&cfg)?;
            let g = req_g(&cfg)?;
            let mu = fields::current_moments(&current)?.mu;
            let ells = cfg.ells.clone().unwrap_or_else(|| vec![0]);
            if ells.len() != 1 {
                return Err(Error::Validation(
                    "a lambda sweep runs one channel; set `ells` to a single value".into(),
                ));
            }
            let ell = ells[0];
            let nu = radial_solver::strong_coupling_limit(mu, g, 0, ell)?;
            Ok(sweep_rows(
                vs,
                &["lambda", "rescaled_ground_state", "oscillator_limit", "abs_err", "note"],
                fmt_num,
                |lambda| {
                    let disc = radial_solver::strong_coupling_discretization(lambda, mu);
                    let resc =
                        radial_solver::rescaled_ground_state(lambda, g, ell, &current, &disc)?;
                    Ok(match resc {
                        Some(v) => (
                            vec![fmt_num(lambda), fmt_num(v), fmt_num(nu), fmt_num((v - nu).abs())],
                            String::new(),
                        ),
                        None => (
                            vec![fmt_num(lambda), String::new(), fmt_num(nu), String::new()],
                            "no negative eigenvalue".into(),
                        ),
                    })
                },
            ))
        }
        ("strong-coupling", SweepAxis::Ell(es)) => {
            let current = req_current(&cfg)?;
            let g = req_g(&cfg)?;
            let lambda = cfg.lambda.ok_or_else(|| {
                Error::Validation("an ell sweep needs a fixed `lambda`".into())
            })?;
            let mu = fields::current_moments(&current)?.mu;
            Ok(sweep_rows(
                es,
                &["ell", "rescaled_ground_state", "oscillator_limit", "abs_err", "note"],
                |e| e.to_string(),
                |ell| {
                    let nu = radial_solver::strong_coupling_limit(mu, g, 0, ell)?;
                    let disc = radial_solver::strong_coupling_discretization(lambda, mu);
                    let resc =
                        radial_solver::rescaled_ground_state(lambda, g, ell, &current, &disc)?;
                    Ok(match resc {
                        Some(v) => (
                            vec![ell.to_string(), fmt_num(v), fmt_num(nu), fmt_num((v - nu).abs())],
                            String::new(),
                        ),
                        None => (
                            vec![ell.to_string(), String::new(), fmt_num(nu), String::new()],
                            "no negative eigenvalue".into(),
                        ),
                    })
                },
            ))
        }
        ("radial-spectrum", SweepAxis::Lambda(vs)) if cfg.current.is_some() => {
            let g = req_g(&cfg)?;
            let spin = cfg_spin(&cfg)?;
            let field = FieldProfile::vortex(req_current(&cfg)?)?;
            let ells = cfg.ells.clone().unwrap_or_else(|| vec![0]);
            if ells.len() != 1 {
                return Err(Error::Validation(
                    "a lambda sweep runs one channel; set `ells` to a single value".into(),
                ));
            }
            let ell = ells[0];
            let disc = radial_disc(&cfg, 60.0, 1024);
            Ok(sweep_rows(
                vs,
                &["lambda", "negative_count", "lowest", "note"],
                fmt_num,
                |lambda| {
                    let p = RadialProblem::from_field(ell, spin, g, lambda, field.clone())?;
                    let spec = radial_solver::negative_spectrum(&p, &disc)?;
                    let lowest = spec
                        .extrapolated
                        .first()
                        .map(|&e| fmt_num(e))
                        .unwrap_or_default();
                    Ok((
                        vec![fmt_num(lambda), spec.eigenvalues.len().to_string(), lowest],
                        String::new(),
                    ))
                },
            ))
        }
        ("radial-spectrum", SweepAxis::Ell(es)) => {
            let g = req_g(&cfg)?;
            let spin = cfg_spin(&cfg)?;
            let lambda = cfg.lambda.ok_or_else(|| {
                Error::Validation("an ell sweep needs a fixed `lambda`".into())
            })?;
            let field = if cfg.current.is_some() {
                FieldProfile::vortex(req_current(&cfg)?)?
            } else {
                req_field(&cfg)?
            };
            let disc = radial_disc(&cfg, 60.0, 1024);
            Ok(sweep_rows(
                es,
                &["ell", "negative_count", "lowest", "note"],
                |e| e.to_string(),
                |ell| {
                    let p = RadialProblem::from_field(ell, spin, g, lambda, field.clone())?;
                    let spec = radial_solver::negative_spectrum(&p, &disc)?;
                    let lowest = spec
                        .extrapolated
                        .first()
                        .map(|&e| fmt_num(e))
                        .unwrap_or_default();
                    Ok((
                        vec![ell.to_string(), spec.eigenvalues.len().to_string(), lowest],
                        String::new(),
                    ))
                },
            ))
        }
        ("critical-lambda", SweepAxis::Ell(es)) => {
            let current = req_current(&cfg)?;
            let g = req_g(&cfg)?;
            let spin = cfg_spin(&cfg)?;
            let bracket = cfg
                .bracket
                .ok_or_else(|| Error::Validation("missing field `bracket`".into()))?;
            let disc = radial_disc(&cfg, 60.0, 1024);
            Ok(sweep_rows(
                es,
                &["ell", "lambda_c", "count_below", "count_above", "note"],
                |e| e.to_string(),
                |ell| {
                    let c = radial_solver::critical_strength(
                        ell,
                        spin,
                        g,
                        &current,
                        (bracket[0], bracket[1]),
                        &disc,
                    )?;
                    Ok((
                        vec![
                            ell.to_string(),
                            fmt_num(c.lambda_c),
                            c.count_below.to_string(),
                            c.count_above.to_string(),
                        ],
                        String::new(),
                    ))
                },
            ))
        }
        ("weak-coupling", SweepAxis::Lambda(vs)) => {
            let g = req_g(&cfg)?;
            let field = FieldProfile::vortex(req_current(&cfg)?)?;
            let disc = radial_disc(&cfg, 100.0, 4096);
            Ok(sweep_rows(
                vs,
                &["lambda", "solver_energy", "predicted_energy", "note"],
                fmt_num,
                |lambda| {
                    let predicted = radial_solver::weak_coupling_energy(lambda, g, &field)?;
                    let p = RadialProblem::from_field(0, Spin::Down, g, lambda, field.clone())?;
                    let spec = radial_solver::negative_spectrum(&p, &disc)?;
                    Ok(match spec.extrapolated.first() {
                        Some(&e) => (
                            vec![fmt_num(lambda), fmt_num(e), fmt_num(predicted)],
                            String::new(),
                        ),
                        None => (
                            vec![fmt_num(lambda), String::new(), fmt_num(predicted)],
                            "no negative eigenvalue".into(),
                        ),
                    })
                },
            ))
        }
        ("weak-coupling", SweepAxis::G(gs)) => {
            let field = FieldProfile::vortex(req_current(&cfg)?)?;
            // lhs(g) = gauge + g²/8π · pairing; both integrals are
            // g-independent, compute them once
            let gauge = fields::gauge_energy(&field)?;
            let pairing = fields::pair_interaction(&field)?;
            Ok(sweep_rows(
                gs,
                &["g", "condition_lhs", "binds", "note"],
                fmt_num,
                |g| {
                    let lhs = gauge + g * g / (8.0 * PI) * pairing;
                    Ok((
                        vec![fmt_num(g), fmt_num(lhs), (lhs < 0.0).to_string()],
                        String::new(),
                    ))
                },
            ))
        }
        (kind, _) => Err(Error::Validation(format!(
            "kind `{kind}` has no sweep over this axis; supported sweeps: \
             strong-coupling (lambda_range or ells), radial-spectrum (lambda_range or ells), \
             critical-lambda (ells), weak-coupling (lambda_range or g_values)"
        ))),
    }
}

/// Tabular view of a run report for kinds that naturally produce one
/// (vortex samples, strong-coupling rows, the weak-coupling energy law);
/// `None` for everything else.
pub fn tabular_view(report: &Report) -> Option<SweepTable> {
    let r = &report.results;
    match report.config.kind.as_str() {
        "vortex" => {
            let cols: Vec<String> = r["samples"]["columns"]
                .as_array()?
                .iter()
                .map(|c| c.as_str().unwrap_or_default().to_string())
                .collect();
            let rows = r["samples"]["rows"]
                .as_array()?
                .iter()
                .map(|row| {
                    row.as_array()
                        .map(|cells| {
                            cells
                                .iter()
                                .map(|c| c.as_f64().map(fmt_num).unwrap_or_default())
                                .collect()
                        })
                        .unwrap_or_default()
                })
                .collect();
            Some(SweepTable {
                columns: cols,
                rows,
                plot_columns: (0, 1),
            })
        }
        "strong-coupling" => {
            let rows = r["rows"]
                .as_array()?
                .iter()
                .map(|row| {
                    vec![
                        row["lambda"].as_f64().map(fmt_num).unwrap_or_default(),
                        row["rescaled"].as_f64().map(fmt_num).unwrap_or_default(),
                        row["ell"].as_i64().map(|e| e.to_string()).unwrap_or_default(),
                        row["oscillator_limit"].as_f64().map(fmt_num).unwrap_or_default(),
                        row["abs_err"].as_f64().map(fmt_num).unwrap_or_default(),
                    ]
                })
                .collect();
            Some(SweepTable {
                columns: ["lambda", "rescaled_ground_state", "ell", "oscillator_limit", "abs_err"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                rows,
                plot_columns: (0, 1),
            })
        }
        "weak-coupling" => {
            let rows = r["energy_law"]["rows"]
                .as_array()?
                .iter()
                .map(|row| {
                    vec![
                        row["lambda"].as_f64().map(fmt_num).unwrap_or_default(),
                        row["solver"]["value"].as_f64().map(fmt_num).unwrap_or_default(),
                        row["predicted"].as_f64().map(fmt_num).unwrap_or_default(),
                    ]
                })
                .collect();
            Some(SweepTable {
                columns: ["lambda", "solver_energy", "predicted_energy"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                rows,
                plot_columns: (0, 1),
            })
        }
        _ => None,
    }
}

/// Built-in presets; the files under `presets/` hold the same bytes, which
/// a test enforces, so both `fluxtrap run presets/<name>.json` and
/// `fluxtrap run <name>` mean the same run.
pub struct Preset {
    pub name: &'static str,
    pub json: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "01-elliptic-identities",
        json: include_str!("../../../presets/01-elliptic-identities.json"),
    },
    Preset {
        name: "02-disk-zero-modes",
        json: include_str!("../../../presets/02-disk-zero-modes.json"),
    },
    Preset {
        name: "03-disk-bound-count",
        json: include_str!("../../../presets/03-disk-bound-count.json"),
    },
    Preset {
        name: "04-annulus-linear-term",
        json: include_str!("../../../presets/04-annulus-linear-term.json"),
    },
    Preset {
        name: "05-pairing-identity",
        json: include_str!("../../../presets/05-pairing-identity.json"),
    },
    Preset {
        name: "06-weak-coupling-law",
        json: include_str!("../../../presets/06-weak-coupling-law.json"),
    },
    Preset {
        name: "07-strong-coupling-limit",
        json: include_str!("../../../presets/07-strong-coupling-limit.json"),
    },
    Preset {
        name: "08-small-lambda-channels",
        json: include_str!("../../../presets/08-small-lambda-channels.json"),
    },
    Preset {
        name: "09-radial-planar-agreement",
        json: include_str!("../../../presets/09-radial-planar-agreement.json"),
    },
    Preset {
        name: "10-oscillator-calibration",
        json: include_str!("../../../presets/10-oscillator-calibration.json"),
    },
];

pub fn find_preset(name: &str) -> Option<&'static Preset> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    PRESETS.iter().find(|p| p.name == stem)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ScenarioConfig {
        ScenarioConfig::from_json(text).unwrap()
    }

    #[test]
    fn rejects_unknown_fields_and_bad_kind() {
        let e = ScenarioConfig::from_json(r#"{ "kind": "flux", "bogus": 1 }"#).unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
        let e = cfg(r#"{ "kind": "no-such" }"#).resolve().unwrap_err();
        assert!(e.to_string().contains("no-such"), "{e}");
        assert!(matches!(e, Error::Validation(_)));
    }

    #[test]
    fn missing_required_fields_are_all_named() {
        let e = cfg(r#"{ "kind": "count" }"#).resolve().unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("`field`") && msg.contains("`g`"), "{msg}");
        let e = cfg(r#"{ "kind": "critical-lambda" }"#).resolve().unwrap_err();
        let msg = e.to_string();
        assert!(
            msg.contains("`current`") && msg.contains("`g`") && msg.contains("`bracket`"),
            "{msg}"
        );
    }

    #[test]
    fn range_generation_and_validation() {
        let r: RangeConfig = serde_json::from_str(
            r#"{ "start": 1.0, "stop": 3.0, "steps": 5 }"#,
        )
        .unwrap();
        let v = r.values().unwrap();
        assert_eq!(v, vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        let r: RangeConfig =
            serde_json::from_str(r#"{ "start": 1.0, "stop": 100.0, "steps": 3, "spacing": "log" }"#)
                .unwrap();
        let v = r.values().unwrap();
        assert!((v[1] - 10.0).abs() < 1e-12, "{v:?}");
        assert!(RangeConfig { values: Some(vec![]), ..Default::default() }
            .values()
            .is_err());
        assert!(RangeConfig { values: Some(vec![1.0, 3.0, 2.0]), ..Default::default() }
            .values()
            .is_err());
        assert!(RangeConfig {
            values: Some(vec![1.0]),
            start: Some(0.0),
            ..Default::default()
        }
        .values()
        .is_err());
    }

    #[test]
    fn override_paths() {
        let mut doc = serde_json::json!({ "kind": "count", "numerics": { "n": 128 } });
        apply_override(&mut doc, "g=2.5").unwrap();
        apply_override(&mut doc, "numerics.n=256").unwrap();
        apply_override(&mut doc, "numerics.compare_radial=true").unwrap();
        apply_override(&mut doc, "spin=down").unwrap();
        assert_eq!(doc["g"], serde_json::json!(2.5));
        assert_eq!(doc["numerics"]["n"], serde_json::json!(256));
        assert_eq!(doc["numerics"]["compare_radial"], serde_json::json!(true));
        assert_eq!(doc["spin"], serde_json::json!("down"));
        let mut doc = serde_json::json!({ "fields": [{ "profile": "disk", "b0": 1.0, "radius": 1.0 }] });
        apply_override(&mut doc, "fields.0.b0=8.0").unwrap();
        assert_eq!(doc["fields"][0]["b0"], serde_json::json!(8.0));
        assert!(apply_override(&mut doc, "fields.7.b0=1").is_err());
        assert!(apply_override(&mut doc, "no-equals").is_err());
    }

    #[test]
    fn resolve_materializes_defaults() {
        let c = cfg(
            r#"{ "kind": "radial-spectrum",
                 "current": {}, "g": 3.0, "lambda": 0.2 }"#,
        )
        .resolve()
        .unwrap();
        assert_eq!(c.spin.as_deref(), Some("down"));
        assert_eq!(c.ells, Some(vec![0]));
        let num = c.numerics.unwrap();
        assert_eq!(num.r_max, Some(60.0));
        assert_eq!(num.n, Some(1024));
        assert_eq!(c.current.as_ref().unwrap().power, 2.0);
    }

    #[test]
    fn flux_report_shape_and_determinism() {
        let c = cfg(
            r#"{ "kind": "flux", "field": { "profile": "disk", "b0": 5.0, "radius": 1.0 } }"#,
        );
        let mut a = run_scenario(&c).unwrap();
        let mut b = run_scenario(&c).unwrap();
        assert!((a.results["flux"]["f"].as_f64().unwrap() - 2.5).abs() < 1e-12);
        assert_eq!(a.results["flux"]["whole_modes"], json!(2));
        assert_eq!(a.results["square_integrable_zero_modes"], json!(2));
        assert!(a.converged);
        assert_eq!(a.tool.version, crate::VERSION);
        a.wall_time_seconds = 0.0;
        b.wall_time_seconds = 0.0;
        assert_eq!(a.to_json_pretty(), b.to_json_pretty());
    }

    #[test]
    fn identity_check_plain_values() {
        let c = cfg(r#"{ "kind": "identity-check" }"#);
        let rep = run_scenario(&c).unwrap();
        let e = &rep.results["elliptic"];
        assert_eq!(e["k_at_0"].as_f64().unwrap(), PI / 2.0);
        assert_eq!(e["e_at_0"].as_f64().unwrap(), PI / 2.0);
        assert_eq!(e["e_at_1"].as_f64().unwrap(), 1.0);
        assert!(e["legendre_max_dev"].as_f64().unwrap() < 1e-10);
    }

    #[test]
    fn identity_check_with_current_flips_at_two() {
        let c = cfg(r#"{ "kind": "identity-check", "current": {} }"#);
        let rep = run_scenario(&c).unwrap();
        assert!(rep.results["pairing"]["rel_diff"].as_f64().unwrap() < 1e-4);
        let scan = rep.results["condition_scan"].as_array().unwrap();
        assert_eq!(scan.len(), 2);
        assert_eq!(scan[0]["g"], json!(1.9));
        assert_eq!(scan[0]["binds"], json!(false));
        assert_eq!(scan[1]["binds"], json!(true));
    }

    #[test]
    fn zero_modes_scenario_disk() {
        let c = cfg(
            r#"{ "kind": "zero-modes", "field": { "profile": "disk", "b0": 5.0, "radius": 1.0 } }"#,
        );
        let rep = run_scenario(&c).unwrap();
        let modes = rep.results["modes"].as_array().unwrap();
        assert_eq!(modes.len(), 3);
        for m in modes {
            let got = m["far_field_exponent"].as_f64().unwrap();
            let want = m["expected_exponent"].as_f64().unwrap();
            assert!((got - want).abs() < 0.05, "{got} vs {want}");
            assert!(m["binding_integral"].as_f64().unwrap() > 0.0);
        }
    }

    #[test]
    fn vortex_scenario_moments_and_table() {
        let c = cfg(r#"{ "kind": "vortex", "current": {} }"#);
        let rep = run_scenario(&c).unwrap();
        assert!((rep.results["moments"]["mu"].as_f64().unwrap() - 1.0).abs() < 1e-6);
        assert!(rep.results["pairing_identity_rel_diff"].as_f64().unwrap() < 1e-4);
        let rows = rep.results["samples"]["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 120);
        let table = tabular_view(&rep).unwrap();
        assert_eq!(table.columns, vec!["r", "a_phi_unit", "b_unit"]);
        assert_eq!(table.rows.len(), 120);
        let csv = table.to_csv();
        assert!(csv.starts_with("r,a_phi_unit,b_unit\n"));
        assert_eq!(csv.lines().count(), 121);
    }

    #[test]
    fn oscillator_calibration_scenario() {
        let c = cfg(r#"{ "kind": "radial-spectrum", "oscillator": { "mu": 1.0 } }"#);
        let rep = run_scenario(&c).unwrap();
        assert!(rep.converged);
        assert!(rep.results["max_rel_dev"].as_f64().unwrap() < 1e-3);
        let order = rep.results["convergence_order"].as_f64().unwrap();
        assert!((order - 2.0).abs() < 0.2, "order {order}");
        let levels = rep.results["channels"][0]["levels"].as_array().unwrap();
        assert_eq!(levels.len(), 3);
        assert_eq!(levels[2]["exact"], json!(10.0));
    }

    #[test]
    fn planar_verify_near_zero_window() {
        let c = cfg(
            r#"{ "kind": "planar-verify",
                 "field": { "profile": "disk", "b0": 5.0, "radius": 1.0 },
                 "g": 2.0,
                 "numerics": { "planar_half_width": 3.0, "planar_ns": [96], "k": 4,
                               "near_zero_window_factor": 5.0 } }"#,
        );
        let rep = run_scenario(&c).unwrap();
        let fr = &rep.results["fields"][0];
        assert_eq!(fr["indicative"], json!(false));
        assert_eq!(fr["runs"][0]["near_zero"]["count"], json!(2));
        assert!(fr["runs"][0]["near_zero"]["max_abs"].as_f64().unwrap() < 5.0 * 2.0 * 3.0 / 96.0);
    }

    #[test]
    fn strong_coupling_sweep_rows_in_order() {
        let c = cfg(
            r#"{ "kind": "strong-coupling", "current": {}, "g": 3.0,
                 "lambda_range": { "values": [400.0, 800.0] } }"#,
        );
        let table = run_sweep(&c).unwrap();
        assert_eq!(
            table.columns,
            vec!["lambda", "rescaled_ground_state", "oscillator_limit", "abs_err", "note"]
        );
        assert_eq!(table.rows.len(), 2);
        assert!(table.rows.iter().all(|r| r[4].is_empty()), "{:?}", table.rows);
        let l0: f64 = table.rows[0][0].parse().unwrap();
        let l1: f64 = table.rows[1][0].parse().unwrap();
        assert!(l0 < l1);
        let e0: f64 = table.rows[0][3].parse().unwrap();
        let e1: f64 = table.rows[1][3].parse().unwrap();
        assert!(e1 < e0, "errors {e0} then {e1}");
        let plot = table.to_plot();
        assert_eq!(plot.lines().count(), 2);
    }

    #[test]
    fn weak_coupling_g_sweep_flips() {
        let c = cfg(
            r#"{ "kind": "weak-coupling", "current": {}, "g": 4.0,
                 "g_values": [1.9, 2.1] }"#,
        );
        let table = run_sweep(&c).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.rows[0][2], "false");
        assert_eq!(table.rows[1][2], "true");
    }

    #[test]
    fn sweep_needs_an_axis() {
        let c = cfg(r#"{ "kind": "identity-check" }"#);
        assert!(run_sweep(&c).is_err());
        let c = cfg(
            r#"{ "kind": "flux", "field": { "profile": "disk", "b0": 1.0, "radius": 1.0 },
                 "lambda_range": { "values": [1.0, 2.0] } }"#,
        );
        let e = run_sweep(&c).unwrap_err();
        assert!(e.to_string().contains("no sweep"), "{e}");
    }

    #[test]
    fn csv_escaping() {
        let t = SweepTable {
            columns: vec!["a".into(), "note".into()],
            rows: vec![vec!["1".into(), "x, \"y\"".into()]],
            plot_columns: (0, 1),
        };
        assert_eq!(t.to_csv(), "a,note\n1,\"x, \"\"y\"\"\"\n");
    }

    #[test]
    fn presets_enumerate_parse_and_match_files() {
        assert_eq!(PRESETS.len(), 10);
        let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets");
        for p in PRESETS {
            let parsed = ScenarioConfig::from_json(p.json).unwrap();
            parsed.resolve().unwrap_or_else(|e| panic!("{}: {e}", p.name));
            assert!(parsed.description.is_some(), "{} lacks a description", p.name);
            let disk = std::fs::read_to_string(root.join(format!("{}.json", p.name)))
                .unwrap_or_else(|e| panic!("{}: {e}", p.name));
            assert_eq!(disk, p.json, "{} drifted from the embedded copy", p.name);
        }
        assert!(find_preset("03-disk-bound-count.json").is_some());
        assert!(find_preset("nope").is_none());
    }

    #[test]
    fn fit_recovers_planted_slope() {
        let xs: Vec<f64> = (1..=6).map(|i| i as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| -2.0 * x + 0.4 * x.sqrt() - 1.0).collect();
        let (s, d, c) = fit_with_sqrt_term(&xs, &ys);
        assert!((s + 2.0).abs() < 1e-9 && (d - 0.4).abs() < 1e-9 && (c + 1.0).abs() < 1e-9);
        let ys2: Vec<f64> = xs.iter().map(|&x| 3.0 * x + 0.5).collect();
        let (s2, c2) = fit_line(&xs, &ys2);
        assert!((s2 - 3.0).abs() < 1e-9 && (c2 - 0.5).abs() < 1e-9);
    }
}
