//! Parameter sweeps over (A, B, E, Ω) grids and figure presets.
//!
//! A sweep is described by a flat JSON document. Every grid point is
//! evaluated independently; failures are recorded in the row rather than
//! aborting the sweep. Row order is the lexicographic grid order (A, B, E, Ω)
//! whatever the thread count.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::kubo_dynamic::{self, Broadening};
use crate::kubo_static::{self, Regime};
use crate::model::{LandauSpectrum, ModelParams, SelfEnergyModel, DEFAULT_CUTOFF_EC, DEFAULT_HBAR_VF, DEFAULT_LEVEL_CAP};
use crate::scba;
use crate::vertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    SelfEnergy,
    Dos,
    StaticShear,
    StaticHall,
    DynamicShear,
    DynamicHall,
    VertexCheck,
}

impl Quantity {
    pub fn is_dynamic(self) -> bool {
        matches!(self, Quantity::DynamicShear | Quantity::DynamicHall)
    }

    /// Column label of the main value, with units.
    pub fn value_label(self) -> &'static str {
        match self {
            Quantity::SelfEnergy => "gamma (eV)",
            Quantity::Dos => "dos (1/(eV nm^2))",
            Quantity::StaticShear | Quantity::DynamicShear => "eta_s (hbar/nm^2)",
            Quantity::StaticHall | Quantity::DynamicHall => "eta_h (hbar/nm^2)",
            Quantity::VertexCheck => "ratio (1)",
        }
    }

    /// Labels of the auxiliary channels, with units.
    pub fn channel_labels(self) -> &'static [&'static str] {
        match self {
            Quantity::SelfEnergy => &["sigma_re (eV)", "sigma_im (eV)", "iterations (1)"],
            Quantity::Dos => &["sigma_re (eV)", "sigma_im (eV)"],
            Quantity::StaticShear => &["eta_ra (hbar/nm^2)", "eta_rr (hbar/nm^2)", "eta_analytic (hbar/nm^2)", "sigma_re (eV)", "sigma_im (eV)"],
            Quantity::StaticHall => &[
                "eta_ra (hbar/nm^2)",
                "eta_ii (hbar/nm^2)",
                "eta_analytic (hbar/nm^2)",
                "sigma_re (eV)",
                "sigma_im (eV)",
            ],
            Quantity::DynamicShear | Quantity::DynamicHall => &[],
            Quantity::VertexCheck => &["norm_bare (eV)", "norm_correction (eV)"],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

fn default_hbar_vf() -> f64 {
    DEFAULT_HBAR_VF
}
fn default_cutoff() -> f64 {
    DEFAULT_CUTOFF_EC
}
fn default_degeneracy() -> u32 {
    4
}
fn default_level_cap() -> usize {
    DEFAULT_LEVEL_CAP
}
fn default_a_values() -> Vec<f64> {
    vec![20.0]
}
fn default_broadening() -> Broadening {
    Broadening::SelfConsistent
}

/// Flat sweep description. Each axis is either an explicit `*_values` list
/// or a `*_start`/`*_stop`/`*_count`/`*_scale` range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub quantity: Quantity,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_count: Option<usize>,
    #[serde(default)]
    pub e_scale: Scale,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_values: Option<Vec<f64>>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_count: Option<usize>,
    #[serde(default)]
    pub b_scale: Scale,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_values: Option<Vec<f64>>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_count: Option<usize>,
    #[serde(default)]
    pub omega_scale: Scale,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_values: Option<Vec<f64>>,

    #[serde(default = "default_a_values")]
    pub a_values: Vec<f64>,

    #[serde(default = "default_hbar_vf")]
    pub hbar_vf: f64,
    #[serde(default = "default_cutoff")]
    pub cutoff_ec: f64,
    #[serde(default = "default_degeneracy")]
    pub degeneracy: u32,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default)]
    pub sigma_model: SelfEnergyModel,
    /// Level width for the dynamic Landau-level sums.
    #[serde(default = "default_broadening")]
    pub broadening: Broadening,
    #[serde(default = "default_level_cap")]
    pub level_cap: usize,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(default)]
    pub format: Format,
    /// Worker threads; 0 or absent means one per core.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl SweepSpec {
    /// A spec with every optional field unset.
    pub fn new(quantity: Quantity) -> Self {
        serde_json::from_value(serde_json::json!({ "quantity": quantity })).expect("minimal spec parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec { field: "json", reason: e.to_string() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn params(&self, a: f64) -> ModelParams {
        ModelParams {
            hbar_vf: self.hbar_vf,
            cutoff_ec: self.cutoff_ec,
            disorder_a: a,
            degeneracy: self.degeneracy,
            temperature: self.temperature,
            self_energy: self.sigma_model,
        }
    }

    pub fn e_grid(&self) -> Result<Vec<f64>> {
        axis("e", self.e_start, self.e_stop, self.e_count, self.e_scale, &self.e_values)?
            .ok_or(Error::Spec { field: "e", reason: "an energy grid is required".into() })
    }

    pub fn b_grid(&self) -> Result<Vec<f64>> {
        Ok(axis("b", self.b_start, self.b_stop, self.b_count, self.b_scale, &self.b_values)?.unwrap_or_else(|| vec![0.0]))
    }

    /// Frequencies; a single NaN placeholder for static quantities.
    pub fn omega_grid(&self) -> Result<Vec<f64>> {
        let g = axis("omega", self.omega_start, self.omega_stop, self.omega_count, self.omega_scale, &self.omega_values)?;
        match (self.quantity.is_dynamic(), g) {
            (true, Some(g)) => Ok(g),
            (true, None) => Err(Error::Spec { field: "omega", reason: "dynamic quantities need a frequency grid".into() }),
            (false, None) => Ok(vec![f64::NAN]),
            (false, Some(_)) => Err(Error::Spec { field: "omega", reason: "only dynamic quantities take a frequency grid".into() }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let e = self.e_grid()?;
        let b = self.b_grid()?;
        let w = self.omega_grid()?;
        if e.iter().any(|x| !x.is_finite()) {
            return Err(Error::Spec { field: "e", reason: "energies must be finite".into() });
        }
        if b.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Spec { field: "b", reason: "fields must be finite and non-negative".into() });
        }
        if matches!(self.quantity, Quantity::StaticHall | Quantity::DynamicHall) && b.contains(&0.0) {
            return Err(Error::Spec { field: "b", reason: "Hall viscosity needs B > 0".into() });
        }
        if self.quantity.is_dynamic() && w.iter().any(|x| !x.is_finite() || *x == 0.0) {
            return Err(Error::Spec { field: "omega", reason: "frequencies must be finite and non-zero".into() });
        }
        if self.a_values.is_empty() {
            return Err(Error::Spec { field: "a_values", reason: "at least one disorder strength is required".into() });
        }
        if let Broadening::Constant(g) = self.broadening {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::Spec { field: "broadening", reason: format!("gamma must be positive, got {g}") });
            }
        }
        if self.level_cap < 8 {
            return Err(Error::Spec { field: "level_cap", reason: "must be at least 8".into() });
        }
        for &a in &self.a_values {
            self.params(a).validate().map_err(|e| Error::Spec { field: "a_values", reason: e.to_string() })?;
        }
        Ok(())
    }
}

fn axis(
    field: &'static str,
    start: Option<f64>,
    stop: Option<f64>,
    count: Option<usize>,
    scale: Scale,
    values: &Option<Vec<f64>>,
) -> Result<Option<Vec<f64>>> {
    let err = |reason: &str| Error::Spec { field, reason: reason.into() };
    if let Some(v) = values {
        if start.is_some() || stop.is_some() || count.is_some() {
            return Err(err("give either a value list or a start/stop/count range, not both"));
        }
        if v.is_empty() {
            return Err(err("value list is empty"));
        }
        return Ok(Some(v.clone()));
    }
    let Some(start) = start else {
        return if stop.is_some() || count.is_some() { Err(err("range needs a start")) } else { Ok(None) };
    };
    let count = count.unwrap_or(1);
    if count == 0 {
        return Err(err("count must be at least 1"));
    }
    let stop = match (stop, count) {
        (Some(s), _) => s,
        (None, 1) => start,
        (None, _) => return Err(err("range with count > 1 needs a stop")),
    };
    if count == 1 {
        return Ok(Some(vec![start]));
    }
    let t = |i: usize| i as f64 / (count - 1) as f64;
    let v = match scale {
        Scale::Linear => (0..count).map(|i| start + (stop - start) * t(i)).collect(),
        Scale::Log => {
            if !(start > 0.0 && stop > 0.0) {
                return Err(err("log scale needs positive bounds"));
            }
            let (l0, l1) = (start.ln(), stop.ln());
            (0..count).map(|i| (l0 + (l1 - l0) * t(i)).exp()).collect()
        }
    };
    Ok(Some(v))
}

/// One evaluated grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub disorder_a: f64,
    pub b_field: f64,
    pub energy: f64,
    /// NaN for static quantities.
    pub omega: f64,
    pub value: f64,
    pub channels: Vec<f64>,
    pub regime: Option<Regime>,
    pub converged: bool,
    /// Empty on success.
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepHeader {
    /// Fully resolved spec; parses back into the same `SweepSpec`.
    pub config: SweepSpec,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub header: SweepHeader,
    pub rows: Vec<SweepRow>,
}

struct Point {
    a: f64,
    b: f64,
    e: f64,
    omega: f64,
    spectrum: Option<usize>,
}

/// Evaluates every grid point of `spec`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    use rayon::prelude::*;

    spec.validate()?;
    let (es, bs, ws) = (spec.e_grid()?, spec.b_grid()?, spec.omega_grid()?);
    let e_max = es.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let w_max = ws.iter().filter(|x| x.is_finite()).fold(0.0f64, |m, x| m.max(x.abs()));

    // Spectra are shared by every point with the same (A, B).
    let mut spectra = Vec::new();
    let mut points = Vec::with_capacity(spec.a_values.len() * bs.len() * es.len() * ws.len());
    for &a in &spec.a_values {
        for &b in &bs {
            let idx = if b > 0.0 {
                spectra.push(LandauSpectrum::with_cap(b, &spec.params(a), e_max + w_max, spec.level_cap)?);
                Some(spectra.len() - 1)
            } else {
                None
            };
            for &e in &es {
                for &omega in &ws {
                    points.push(Point { a, b, e, omega, spectrum: idx });
                }
            }
        }
    }

    let eval = |p: &Point| evaluate(spec, p, p.spectrum.map(|i| &spectra[i]));
    let rows: Vec<SweepRow> = match spec.threads {
        Some(n) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Spec { field: "threads", reason: e.to_string() })?;
            pool.install(|| points.par_iter().map(eval).collect())
        }
        _ => points.par_iter().map(eval).collect(),
    };

    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SweepResult {
        header: SweepHeader { config: spec.clone(), version: env!("CARGO_PKG_VERSION").to_string(), timestamp },
        rows,
    })
}

fn evaluate(spec: &SweepSpec, p: &Point, sp: Option<&LandauSpectrum>) -> SweepRow {
    let mut row = SweepRow {
        disorder_a: p.a,
        b_field: p.b,
        energy: p.e,
        omega: p.omega,
        value: f64::NAN,
        channels: vec![f64::NAN; spec.quantity.channel_labels().len()],
        regime: None,
        converged: false,
        error: String::new(),
    };
    match compute(spec, p, sp, &mut row) {
        Ok(()) => row.converged = true,
        Err(e) => {
            row.value = f64::NAN;
            row.error = e.to_string();
        }
    }
    row
}

fn solve(e: f64, params: &ModelParams, sp: Option<&LandauSpectrum>) -> Result<Complex64> {
    Ok(match sp {
        Some(sp) => scba::solve_self_energy_landau(e, params, sp)?.sigma,
        None => scba::solve_self_energy_b0(e, params)?.sigma,
    })
}

fn compute(spec: &SweepSpec, p: &Point, sp: Option<&LandauSpectrum>, row: &mut SweepRow) -> Result<()> {
    let params = spec.params(p.a);
    let e = p.e;
    match spec.quantity {
        Quantity::SelfEnergy => {
            let s = match sp {
                Some(sp) => scba::solve_self_energy_landau(e, &params, sp)?,
                None => scba::solve_self_energy_b0(e, &params)?,
            };
            row.value = s.gamma();
            row.channels = vec![s.sigma.re, s.sigma.im, s.iterations as f64];
        }
        Quantity::Dos => {
            let sigma = solve(e, &params, sp)?;
            row.value = scba::dos(e, sigma, &params, sp.map(|s| s.b_field))?;
            row.channels = vec![sigma.re, sigma.im];
        }
        Quantity::StaticShear => {
            let (v, analytic) = match sp {
                Some(sp) => (
                    kubo_static::shear_bfield_numeric(e, &params, sp)?,
                    kubo_static::shear_bfield_analytic(e, &params, sp).map(|a| a.value).unwrap_or(f64::NAN),
                ),
                None => (kubo_static::shear_b0_numeric(e, &params)?, kubo_static::shear_b0_analytic(e, &params)),
            };
            row.value = v.value;
            row.regime = Some(v.regime);
            row.channels = vec![v.ra.re, v.rr.re, analytic, v.sigma.re, v.sigma.im];
        }
        Quantity::StaticHall => {
            let sp = sp.expect("validated: B > 0");
            let v = kubo_static::hall_static_numeric(e, &params, sp)?;
            let analytic = kubo_static::hall_static_analytic(e, &params, sp).map(|a| a.value).unwrap_or(f64::NAN);
            row.value = v.value;
            row.regime = Some(v.regime);
            row.channels = vec![v.ra.re, v.ii.map_or(0.0, |c| c.re), analytic, v.sigma.re, v.sigma.im];
        }
        Quantity::DynamicShear => {
            row.value = match sp {
                Some(sp) => kubo_dynamic::shear_dynamic_bfield(e, p.omega, &params, sp, spec.broadening)?,
                None => kubo_dynamic::shear_dynamic_b0(e, p.omega, &params)?,
            };
            row.regime = sp.is_none().then_some(Regime::BZero);
        }
        Quantity::DynamicHall => {
            let sp = sp.expect("validated: B > 0");
            row.value = kubo_dynamic::hall_dynamic(e, p.omega, &params, sp, spec.broadening)?;
        }
        Quantity::VertexCheck => {
            let r = match sp {
                Some(sp) => vertex::vertex_correction_landau(e, &params, sp)?,
                None => vertex::vertex_correction_b0(e, &params, 64)?,
            };
            row.value = r.ratio;
            row.channels = vec![r.norm_bare, r.norm_correction];
        }
    }
    Ok(())
}

/// Shortest round-trip text for `x`: positional for moderate magnitudes,
/// exponent form otherwise, `NaN` for missing values.
pub fn format_number(x: f64) -> String {
    let m = x.abs();
    if x.is_nan() {
        "NaN".into()
    } else if x == 0.0 || (1e-4..1e6).contains(&m) || m.is_infinite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

use format_number as num;

impl SweepResult {
    /// Column labels with units, as written to the CSV header.
    pub fn columns(&self) -> Vec<String> {
        let q = self.header.config.quantity;
        let mut c: Vec<String> = ["disorder_a (1)", "b_field (T)", "energy (eV)"].iter().map(|s| s.to_string()).collect();
        if q.is_dynamic() {
            c.push("omega (eV)".into());
        }
        c.push(q.value_label().into());
        c.extend(q.channel_labels().iter().map(|s| s.to_string()));
        c.extend(["regime".to_string(), "converged".to_string(), "error".to_string()]);
        c
    }

    /// CSV text. Deterministic: the timestamp lives only in [`SweepResult::meta_json`].
    pub fn to_csv(&self) -> String {
        let dynamic = self.header.config.quantity.is_dynamic();
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.columns()).expect("in-memory write");
        for r in &self.rows {
            let mut rec = vec![num(r.disorder_a), num(r.b_field), num(r.energy)];
            if dynamic {
                rec.push(num(r.omega));
            }
            rec.push(num(r.value));
            rec.extend(r.channels.iter().map(|&x| num(x)));
            rec.push(r.regime.map(|g| g.to_string()).unwrap_or_default());
            rec.push(r.converged.to_string());
            rec.push(r.error.clone());
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    /// Header and rows as one JSON document. NaN values become null.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    /// Header alone, written next to CSV output.
    pub fn meta_json(&self) -> String {
        serde_json::to_string_pretty(&self.header).expect("header serializes")
    }

    /// Number of rows flagged as failed.
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.converged).count()
    }

    /// Short human summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{} rows, {} failed", self.rows.len(), self.failures());
        s
    }
}

pub const PRESETS: [&str; 7] = ["fig1", "fig2a", "fig2b", "fig3", "fig4", "fig5", "fig6"];

/// Sweep reproducing one of the published figures.
pub fn figure_preset(name: &str) -> Result<SweepSpec> {
    let mut s;
    match name {
        "fig1" => {
            s = SweepSpec::new(Quantity::StaticShear);
            (s.e_start, s.e_stop, s.e_count) = (Some(-2.0), Some(2.0), Some(81));
            s.a_values = vec![10.0, 15.0, 20.0, 35.0];
        }
        "fig2a" => {
            s = SweepSpec::new(Quantity::StaticShear);
            (s.e_start, s.e_stop, s.e_count) = (Some(-0.6), Some(0.6), Some(241));
            s.b_values = Some(vec![10.0]);
            s.a_values = vec![20.0, 50.0, 100.0, 500.0];
        }
        "fig2b" => {
            s = SweepSpec::new(Quantity::StaticShear);
            (s.e_start, s.e_stop, s.e_count) = (Some(-0.3), Some(0.3), Some(121));
            s.b_values = Some(vec![0.1, 0.2, 0.5, 1.0, 1.5]);
            s.a_values = vec![15.0];
        }
        "fig3" => {
            s = SweepSpec::new(Quantity::StaticHall);
            (s.e_start, s.e_stop, s.e_count) = (Some(-0.6), Some(0.6), Some(241));
            s.b_values = Some(vec![10.0]);
            s.a_values = vec![50.0, 100.0, 500.0];
        }
        "fig4" => {
            s = SweepSpec::new(Quantity::DynamicShear);
            s.e_values = Some(vec![0.0, 0.5, 1.5]);
            (s.omega_start, s.omega_stop, s.omega_count) = (Some(0.01), Some(2.0), Some(100));
            s.a_values = vec![10.0, 15.0, 20.0, 35.0];
        }
        "fig5" => {
            s = SweepSpec::new(Quantity::DynamicShear);
            s.e_values = Some(vec![0.05, 0.13]);
            s.b_values = Some(vec![10.0]);
            (s.omega_start, s.omega_stop, s.omega_count) = (Some(0.005), Some(0.4), Some(400));
            s.a_values = vec![500.0];
            s.broadening = Broadening::Constant(0.005);
        }
        "fig6" => {
            s = SweepSpec::new(Quantity::DynamicHall);
            s.e_values = Some(vec![0.05, 0.13, 0.18, 0.22]);
            s.b_values = Some(vec![10.0]);
            (s.omega_start, s.omega_stop, s.omega_count) = (Some(0.005), Some(0.4), Some(400));
            s.a_values = vec![500.0];
            s.broadening = Broadening::Constant(0.005);
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_log_axes() {
        let v = axis("e", Some(0.0), Some(1.0), Some(5), Scale::Linear, &None).unwrap().unwrap();
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let v = axis("e", Some(0.01), Some(1.0), Some(3), Scale::Log, &None).unwrap().unwrap();
        assert!((v[1] - 0.1).abs() < 1e-15);
        assert!(axis("e", Some(-1.0), Some(1.0), Some(3), Scale::Log, &None).is_err());
        assert!(axis("e", Some(0.0), Some(1.0), Some(0), Scale::Linear, &None).is_err());
        assert!(axis("e", Some(0.0), None, None, Scale::Linear, &Some(vec![1.0])).is_err());
    }

    #[test]
    fn omega_only_for_dynamic() {
        let mut s = SweepSpec::new(Quantity::StaticShear);
        s.e_values = Some(vec![0.1]);
        s.omega_values = Some(vec![0.1]);
        assert!(matches!(s.validate(), Err(Error::Spec { field: "omega", .. })));
        let mut d = SweepSpec::new(Quantity::DynamicShear);
        d.e_values = Some(vec![0.1]);
        assert!(matches!(d.validate(), Err(Error::Spec { field: "omega", .. })));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(SweepSpec::from_json(r#"{"quantity":"dos","e_values":[0.1],"bogus":1}"#).is_err());
    }

    #[test]
    fn presets_validate() {
        for p in PRESETS {
            figure_preset(p).unwrap().validate().unwrap();
        }
        assert!(matches!(figure_preset("fig9"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn failed_points_are_flagged() {
        let mut s = SweepSpec::new(Quantity::StaticHall);
        s.e_values = Some(vec![0.1]);
        s.b_values = Some(vec![0.05]);
        s.level_cap = 100;
        let r = run_sweep(&s).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(!r.rows[0].converged);
        assert!(r.rows[0].value.is_nan());
        assert!(r.to_csv().contains("NaN"));
    }
}
