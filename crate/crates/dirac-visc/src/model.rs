//! Units, constants, Landau spectra and stress-tensor matrix elements.
//!
//! Internally ħ = 1: energies are in eV, lengths in nm, and viscosities come
//! out in ħ/nm².

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::error::{Error, Result};

/// ħ/e in T·m² (CODATA 2018).
pub const HBAR_OVER_E: f64 = 6.582_119_569e-16;
/// ħv_f for v_f = 10⁶ m/s, in eV·nm.
pub const DEFAULT_HBAR_VF: f64 = 0.6582;
pub const DEFAULT_CUTOFF_EC: f64 = 7.2;
pub const DEFAULT_LEVEL_CAP: usize = 20_000;
/// Smallest |ImΣ| used where a Kubo integrand would otherwise divide by zero.
pub const GAMMA_MIN: f64 = 1e-6;
/// Lower bound on Lorentzian half-widths in the dynamic transition sums.
pub const GAMMA_FLOOR: f64 = 1e-4;

/// How the numeric SCBA solvers treat ReΣ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelfEnergyModel {
    /// Full complex fixed point.
    #[default]
    Full,
    /// ReΣ projected out at every iteration, the approximation under which the
    /// closed-form limits are derived.
    ImaginaryOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// ħv_f in eV·nm.
    pub hbar_vf: f64,
    /// Band cutoff E_c in eV.
    pub cutoff_ec: f64,
    /// A = 4π(ħv_f)²/(n_i V_0²).
    pub disorder_a: f64,
    /// Spin × valley degeneracy.
    pub degeneracy: u32,
    /// k_B T in eV; 0 selects the strict zero-temperature limits.
    pub temperature: f64,
    #[serde(default)]
    pub self_energy: SelfEnergyModel,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            hbar_vf: DEFAULT_HBAR_VF,
            cutoff_ec: DEFAULT_CUTOFF_EC,
            disorder_a: 20.0,
            degeneracy: 4,
            temperature: 0.0,
            self_energy: SelfEnergyModel::Full,
        }
    }
}

impl ModelParams {
    pub fn new(disorder_a: f64) -> Self {
        Self { disorder_a, ..Self::default() }
    }

    pub fn with_self_energy(mut self, model: SelfEnergyModel) -> Self {
        self.self_energy = model;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar_vf > 0.0) {
            return Err(Error::domain(format!("hbar_vf must be positive, got {}", self.hbar_vf)));
        }
        if !(self.cutoff_ec > 0.0) {
            return Err(Error::domain(format!("cutoff_ec must be positive, got {}", self.cutoff_ec)));
        }
        if !(self.disorder_a > 0.0) {
            return Err(Error::domain(format!("disorder_a must be positive, got {}", self.disorder_a)));
        }
        if self.degeneracy < 1 {
            return Err(Error::domain("degeneracy must be at least 1"));
        }
        if !(self.temperature >= 0.0) {
            return Err(Error::domain(format!("temperature must be non-negative, got {}", self.temperature)));
        }
        Ok(())
    }

    /// E_c e^{−A/2}, the Dirac-point broadening of the clean-limit SCBA.
    pub fn gamma0(&self) -> f64 {
        self.cutoff_ec * (-0.5 * self.disorder_a).exp()
    }

    pub fn g(&self) -> f64 {
        self.degeneracy as f64
    }
}

/// √(ħ/eB) in nm.
pub fn magnetic_length(b_field: f64) -> Result<f64> {
    if !(b_field > 0.0) {
        return Err(Error::domain(format!("magnetic field must be positive, got {b_field} T")));
    }
    Ok((HBAR_OVER_E / b_field).sqrt() * 1e9)
}

/// ħω_c = √2 ħv_f / l_B in eV.
pub fn cyclotron_energy(b_field: f64, hbar_vf: f64) -> Result<f64> {
    Ok(SQRT_2 * hbar_vf / magnetic_length(b_field)?)
}

/// A Landau state label. For n = 0 the band sign is irrelevant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct State {
    pub n: u32,
    pub s: i8,
}

impl State {
    pub const fn new(n: u32, s: i8) -> Self {
        Self { n, s }
    }

    pub const ZERO: State = State { n: 0, s: 1 };
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: u32,
    pub s: i8,
    pub energy: f64,
}

#[derive(Clone, Debug)]
pub struct LandauSpectrum {
    pub b_field: f64,
    pub l_b: f64,
    pub hbar_omega_c: f64,
    /// Largest explicitly summed Landau index.
    pub n_cutoff: usize,
    /// Index at which the band cutoff is reached; sums between `n_cutoff`
    /// and `n_band` are carried by a continuum tail.
    pub n_band: usize,
    /// All retained levels in ascending energy.
    pub levels: Vec<Level>,
    root: Vec<f64>,
}

impl LandauSpectrum {
    /// Builds the spectrum needed at energy scale |E| + |Ω| with the default level cap.
    pub fn new(b_field: f64, params: &ModelParams, energy_scale: f64) -> Result<Self> {
        Self::with_cap(b_field, params, energy_scale, DEFAULT_LEVEL_CAP)
    }

    pub fn with_cap(b_field: f64, params: &ModelParams, energy_scale: f64, cap: usize) -> Result<Self> {
        params.validate()?;
        let l_b = magnetic_length(b_field)?;
        let w = SQRT_2 * params.hbar_vf / l_b;
        let threshold = params.cutoff_ec.max(3.0 * energy_scale.abs());
        let mut n_band = ((threshold / w).powi(2)).ceil() as usize;
        while w * (n_band as f64).sqrt() < threshold {
            n_band += 1;
        }
        while n_band > 0 && w * ((n_band - 1) as f64).sqrt() >= threshold {
            n_band -= 1;
        }
        let n_band = n_band.max(2);
        let n_cutoff = n_band.min(cap.max(8));
        let root: Vec<f64> = (0..=n_cutoff).map(|n| w * (n as f64).sqrt()).collect();

        let mut levels = Vec::with_capacity(2 * n_cutoff + 1);
        for n in (1..=n_cutoff).rev() {
            levels.push(Level { n: n as u32, s: -1, energy: -root[n] });
        }
        levels.push(Level { n: 0, s: 1, energy: 0.0 });
        for n in 1..=n_cutoff {
            levels.push(Level { n: n as u32, s: 1, energy: root[n] });
        }
        Ok(Self { b_field, l_b, hbar_omega_c: w, n_cutoff, n_band, levels, root })
    }

    /// s·ħω_c·√n for a retained level.
    #[inline]
    pub fn energy(&self, n: usize, s: i8) -> f64 {
        if s < 0 {
            -self.root[n]
        } else {
            self.root[n]
        }
    }

    /// Landau degeneracy per area, 1/(2πl_B²), in nm⁻².
    pub fn states_per_area(&self) -> f64 {
        1.0 / (2.0 * std::f64::consts::PI * self.l_b * self.l_b)
    }

    pub fn has_tail(&self) -> bool {
        self.n_band > self.n_cutoff
    }

    /// Position of (n, s) in `levels`.
    #[inline]
    pub fn index(&self, n: usize, s: i8) -> usize {
        if n == 0 {
            self.n_cutoff
        } else if s < 0 {
            self.n_cutoff - n
        } else {
            self.n_cutoff + n
        }
    }

    /// All state pairs connected by the stress vertex, lower index first, in
    /// ascending n with s = − before s = +.
    pub fn stress_pairs(&self) -> Vec<StressPair> {
        let mut out = Vec::with_capacity(4 * self.n_cutoff);
        for n in 0..=self.n_cutoff.saturating_sub(2) {
            let signs: &[i8] = if n == 0 { &[1] } else { &[-1, 1] };
            for &s in signs {
                for sp in [-1i8, 1] {
                    let lo = State::new(n as u32, s);
                    let hi = State::new(n as u32 + 2, sp);
                    let t = stress_element_xy(lo, hi, self);
                    let c = stress_element_xx_minus_yy(lo, hi, self) * stress_element_xy(hi, lo, self);
                    out.push(StressPair { lo: self.index(n, s), hi: self.index(n + 2, sp), t2: t.norm_sqr(), c });
                }
            }
        }
        out
    }
}

/// A pair of Landau states with |Δn| = 2.
#[derive(Clone, Copy, Debug)]
pub struct StressPair {
    /// Index into `LandauSpectrum::levels` of the state with the smaller n.
    pub lo: usize,
    pub hi: usize,
    /// |⟨lo|T_xy|hi⟩|².
    pub t2: f64,
    /// ⟨lo|T_xx − T_yy|hi⟩⟨hi|T_xy|lo⟩. The reversed product is −c.
    pub c: Complex64,
}

/// s·ħω_c·√n.
pub fn landau_energy(n: i64, s: i8, spectrum: &LandauSpectrum) -> Result<f64> {
    if n < 0 {
        return Err(Error::domain(format!("Landau index must be non-negative, got {n}")));
    }
    let sign = if s < 0 { -1.0 } else { 1.0 };
    Ok(sign * spectrum.hbar_omega_c * (n as f64).sqrt())
}

/// ħω̃_c = (ħω_c)²/(2|E|). Returns +∞ at E = 0, where the separated regime
/// holds by definition.
pub fn effective_cyclotron(e: f64, spectrum: &LandauSpectrum) -> f64 {
    if e == 0.0 {
        return f64::INFINITY;
    }
    spectrum.hbar_omega_c.powi(2) / (2.0 * e.abs())
}

#[inline]
fn sgn(s: i8) -> f64 {
    if s < 0 {
        -1.0
    } else {
        1.0
    }
}

/// ⟨bra|T_xy|ket⟩ in the Landau basis, in eV.
pub fn stress_element_xy(bra: State, ket: State, spectrum: &LandauSpectrum) -> Complex64 {
    let w = spectrum.hbar_omega_c;
    let (n, s, m, t) = (bra.n, sgn(bra.s), ket.n, sgn(ket.s));
    let i = Complex64::i();
    match (n, m) {
        (0, 0) => Complex64::new(0.0, 0.0),
        (0, 2) => -i * t * w * 0.5 * FRAC_1_SQRT_2,
        (2, 0) => i * s * w * 0.5 * FRAC_1_SQRT_2,
        (0, _) | (_, 0) => Complex64::new(0.0, 0.0),
        _ if n == m + 2 => i * s * (w / 4.0) * ((n - 1) as f64).sqrt(),
        _ if m == n + 2 => -i * t * (w / 4.0) * ((n + 1) as f64).sqrt(),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// ⟨bra|T_xx − T_yy|ket⟩ in the Landau basis, in eV.
pub fn stress_element_xx_minus_yy(bra: State, ket: State, spectrum: &LandauSpectrum) -> Complex64 {
    let w = spectrum.hbar_omega_c;
    let (n, s, m, t) = (bra.n, sgn(bra.s), ket.n, sgn(ket.s));
    let v = match (n, m) {
        (0, 0) => 0.0,
        (0, 2) => -t * w * FRAC_1_SQRT_2,
        (2, 0) => -s * w * FRAC_1_SQRT_2,
        (0, _) | (_, 0) => 0.0,
        _ if m + 2 == n => -0.5 * w * s * ((n - 1) as f64).sqrt(),
        _ if m == n + 2 => -0.5 * w * t * ((n + 1) as f64).sqrt(),
        _ => 0.0,
    };
    Complex64::new(v, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StressComponent {
    Xy,
    XxMinusYy,
}

/// Momentum-space stress vertex in the chiral (s = +, s = −) basis.
pub fn stress_kspace(k: f64, theta: f64, which: StressComponent, hbar_vf: f64) -> Matrix2<Complex64> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let (sin2, cos2) = (2.0 * theta).sin_cos();
    let e = hbar_vf * k;
    match which {
        // (ħv_f k/2)(σ_z sin2θ − σ_y cos2θ)
        StressComponent::Xy => {
            let h = 0.5 * e;
            Matrix2::new(c(h * sin2, 0.0), c(0.0, h * cos2), c(0.0, -h * cos2), c(-h * sin2, 0.0))
        }
        // ħv_f k(σ_z cos2θ + σ_y sin2θ)
        StressComponent::XxMinusYy => {
            Matrix2::new(c(e * cos2, 0.0), c(0.0, -e * sin2), c(0.0, e * sin2), c(-e * cos2, 0.0))
        }
    }
}
