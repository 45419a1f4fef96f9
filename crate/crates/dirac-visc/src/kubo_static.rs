//! Static (Ω → 0) shear and Hall viscosities.
//!
//! Numeric paths evaluate the Kubo traces with the solved self-energy. The
//! closed forms are the weak-disorder limits they are compared against.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{stress_kspace, LandauSpectrum, ModelParams, StressComponent, GAMMA_MIN};
use crate::quad::Quad;
use crate::scba::{self, self_energy_overlapped, self_energy_separated};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Separated,
    Overlapped,
    BZero,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Separated => "separated",
            Regime::Overlapped => "overlapped",
            Regime::BZero => "b_zero",
        })
    }
}

/// A viscosity with its Kubo channels, all in ħ/nm².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViscosityValue {
    /// Re(RA) − Re(RR) + Re(II).
    pub value: f64,
    pub ra: Complex64,
    pub rr: Complex64,
    /// Fermi-sea channel, Hall only.
    pub ii: Option<Complex64>,
    pub regime: Regime,
    /// Self-energy used at the Fermi energy.
    pub sigma: Complex64,
}

impl ViscosityValue {
    fn new(ra: Complex64, rr: Complex64, ii: Option<Complex64>, regime: Regime, sigma: Complex64) -> Self {
        let value = ra.re - rr.re + ii.map_or(0.0, |c| c.re);
        Self { value, ra, rr, ii, regime, sigma }
    }
}

/// A closed-form estimate together with the regime it was evaluated in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticValue {
    pub value: f64,
    pub regime: Regime,
    /// ω̃_c τ used for the regime decision.
    pub omega_tau: f64,
    /// Set when 0.5 < ω̃_c τ < 2, where neither limit is reliable.
    pub low_confidence: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Retarded,
    Advanced,
}

/// ω̃_c τ = (ħω_c)²/(4|E||ImΣ|); infinite at E = 0 or ImΣ = 0.
pub fn omega_tau(e: f64, sigma: Complex64, spectrum: &LandauSpectrum) -> f64 {
    let d = 4.0 * e.abs() * sigma.im.abs();
    if d == 0.0 {
        f64::INFINITY
    } else {
        spectrum.hbar_omega_c.powi(2) / d
    }
}

pub(crate) fn numeric_regime(e: f64, sigma: Complex64, spectrum: &LandauSpectrum) -> Regime {
    if omega_tau(e, sigma, spectrum) > 2.0 {
        Regime::Separated
    } else {
        Regime::Overlapped
    }
}

/// Regime of the closed forms, judged from the larger of the semicircle
/// width and the zero-field broadening.
pub fn analytic_regime(e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> (Regime, f64) {
    let a = params.disorder_a;
    let g = (spectrum.hbar_omega_c / (2.0 * a).sqrt()).max(PI * e.abs() / a + params.gamma0());
    let wt = omega_tau(e, Complex64::new(0.0, -g), spectrum);
    (if wt > 2.0 { Regime::Separated } else { Regime::Overlapped }, wt)
}

// ---------------------------------------------------------------- B = 0

/// θ-averaged chiral trace Tr[G(z1) T_xy G(z2) T_xy] at ħv_f k = x.
///
/// The trace only contains sin² 2θ and cos² 2θ, so the mean of θ = 0 and
/// θ = π/4 is the exact angular average.
fn chiral_trace(x: f64, z1: Complex64, z2: Complex64, hbar_vf: f64) -> Complex64 {
    let g = |z: Complex64| {
        let zero = Complex64::new(0.0, 0.0);
        Matrix2::new(1.0 / (z - x), zero, zero, 1.0 / (z + x))
    };
    let (g1, g2) = (g(z1), g(z2));
    let k = x / hbar_vf;
    [0.0, PI / 4.0]
        .iter()
        .map(|&th| {
            let t = stress_kspace(k, th, StressComponent::Xy, hbar_vf);
            (g1 * t * g2 * t).trace()
        })
        .sum::<Complex64>()
        * 0.5
}

fn peak_points(centers: &[Complex64], hi: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    for z in centers {
        let (r, w) = (z.re.abs(), z.im.abs().max(1e-12));
        pts.push(r);
        for k in 0..4 {
            let d = w * 10f64.powi(k);
            pts.push(r - d);
            pts.push(r + d);
        }
    }
    pts.retain(|p| *p > 0.0 && *p < hi);
    pts
}

/// g/(4π²(ħv_f)²)·∫_0^{E_c} x·⟨Tr[G(z1) T G(z2) T]⟩_θ dx.
pub(crate) fn b0_kernel(z1: Complex64, z2: Complex64, params: &ModelParams) -> Result<Complex64> {
    let hv = params.hbar_vf;
    let ec = params.cutoff_ec;
    let pref = params.g() / (4.0 * PI * PI * hv * hv);
    let pts = peak_points(&[z1, z2], ec);
    // absolute floor relative to the size of the integrand near its peak
    let scale = {
        let x = z1.re.abs().max(z2.re.abs()).max(z1.im.abs());
        (x * x * x / (z1.im.abs() * z2.im.abs()).max(1e-300)).min(1e300)
    };
    let q = Quad::new(1e-13 * scale.max(1e-300), 1e-9);
    let (v, _) = q.run_complex("shear kernel", |x| x * chiral_trace(x, z1, z2, hv), 0.0, ec, &pts)?;
    Ok(pref * v)
}

fn g_arg(e: f64, sigma: Complex64, branch: Branch) -> Complex64 {
    let z = e - sigma;
    match branch {
        Branch::Retarded => z,
        Branch::Advanced => z.conj(),
    }
}

/// One Kubo channel η^{LM} at B = 0 for a given Σ.
pub fn shear_b0_channel(e: f64, sigma: Complex64, left: Branch, right: Branch, params: &ModelParams) -> Result<Complex64> {
    b0_kernel(g_arg(e, sigma, left), g_arg(e, sigma, right), params)
}

/// Static shear viscosity at B = 0 from the Kubo traces and the solved Σ(E).
pub fn shear_b0_numeric(e: f64, params: &ModelParams) -> Result<ViscosityValue> {
    let s = scba::solve_self_energy_b0(e, params)?;
    shear_b0_with_sigma(e, s.sigma, params)
}

pub fn shear_b0_with_sigma(e: f64, sigma: Complex64, params: &ModelParams) -> Result<ViscosityValue> {
    let ra = shear_b0_channel(e, sigma, Branch::Retarded, Branch::Advanced, params)?;
    let rr = shear_b0_channel(e, sigma, Branch::Retarded, Branch::Retarded, params)?;
    Ok(ViscosityValue::new(ra, rr, None, Regime::BZero, sigma))
}

/// (ħ/8π²(ħv_f)²)[A E² + (3/A)(π|E| + E_c A e^{−A/2})²], scaled by degeneracy/4.
pub fn shear_b0_analytic(e: f64, params: &ModelParams) -> f64 {
    let a = params.disorder_a;
    let hv = params.hbar_vf;
    let b = PI * e.abs() + params.cutoff_ec * a * (-0.5 * a).exp();
    params.g() / 4.0 / (8.0 * PI * PI * hv * hv) * (a * e * e + 3.0 / a * b * b)
}

/// E²ρτ/8 + 3ħ²ρ/(32τ) for given DOS and lifetime.
pub fn shear_b0_from_lifetime(e: f64, rho: f64, tau: f64) -> f64 {
    e * e * rho * tau / 8.0 + 3.0 * rho / (32.0 * tau)
}

// ---------------------------------------------------------------- B ≠ 0

fn green(z: Complex64, spectrum: &LandauSpectrum) -> Vec<Complex64> {
    spectrum.levels.iter().map(|l| 1.0 / (z - l.energy)).collect()
}

/// Continuum estimate of the shear pair sums for levels between the explicit
/// cutoff and the band edge. Returns the (RA, RR) sums before the prefactor.
fn shear_tail(z: Complex64, spectrum: &LandauSpectrum) -> Result<(Complex64, Complex64)> {
    let zero = Complex64::new(0.0, 0.0);
    if !spectrum.has_tail() {
        return Ok((zero, zero));
    }
    let w2 = spectrum.hbar_omega_c.powi(2);
    let lo = spectrum.n_cutoff as f64 - 1.5;
    let hi = spectrum.n_band as f64 - 1.5;
    let s = |t: f64| 2.0 * z / (z * z - t * w2);
    let mut pts = vec![(z * z).re / w2];
    pts.retain(|p| *p > lo && *p < hi);
    let q = Quad::new(1e-300, 1e-9);
    let (ra, _) = q.run("shear tail", |t| (t + 1.0) * s(t).norm_sqr(), lo, hi, &pts)?;
    let (rr, _) = q.run_complex("shear tail", |t| (t + 1.0) * s(t) * s(t), lo, hi, &pts)?;
    let k = w2 / 16.0 * 2.0;
    Ok((Complex64::new(k * ra, 0.0), k * rr))
}

/// Static shear viscosity in a field from the Landau pair sums and the solved Σ(E).
pub fn shear_bfield_numeric(e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<ViscosityValue> {
    let s = scba::solve_self_energy_landau(e, params, spectrum)?;
    shear_bfield_with_sigma(e, s.sigma, params, spectrum)
}

pub fn shear_bfield_with_sigma(e: f64, sigma: Complex64, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<ViscosityValue> {
    let z = e - sigma;
    let g = green(z, spectrum);
    let mut ra = Complex64::new(0.0, 0.0);
    let mut rr = Complex64::new(0.0, 0.0);
    for p in spectrum.stress_pairs() {
        let (ga, gb) = (g[p.lo], g[p.hi]);
        ra += p.t2 * (ga * gb.conj() + gb * ga.conj());
        rr += p.t2 * 2.0 * ga * gb;
    }
    let (tra, trr) = shear_tail(z, spectrum)?;
    let pref = params.g() / (2.0 * PI) * spectrum.states_per_area();
    Ok(ViscosityValue::new(pref * (ra + tra), pref * (rr + trr), None, numeric_regime(e, sigma, spectrum), sigma))
}

fn nearest_level(e: f64, spectrum: &LandauSpectrum) -> (u32, i8) {
    let w = spectrum.hbar_omega_c;
    let x = (e / w).powi(2);
    let s = if e < 0.0 { -1 } else { 1 };
    let (lo, hi) = (x.floor(), x.floor() + 1.0);
    let n = if (e.abs() - w * lo.sqrt()).abs() <= (w * hi.sqrt() - e.abs()).abs() { lo } else { hi };
    (n as u32, s)
}

/// Isolated-level closed form (N² + δ_{N,0})·ħ/(2π²l_B²)·(1 − 2Aε²), zero
/// outside the level's semicircle.
pub fn shear_bfield_separated(e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> f64 {
    let (n, s) = nearest_level(e, spectrum);
    let eps = (e - spectrum.energy(n as usize, s)) / (2.0 * spectrum.hbar_omega_c);
    let nn = if n == 0 { 1.0 } else { (n as f64).powi(2) };
    let shape = (1.0 - 2.0 * params.disorder_a * eps * eps).max(0.0);
    params.g() / 4.0 * nn / (2.0 * PI * PI * spectrum.l_b.powi(2)) * shape
}

/// Overlapping-level form
/// E²ρτ/(8(1+4ω̃²τ²)) + (ħ²ρ/32τ)(3+16ω̃²τ²)/(1+4ω̃²τ²), with ρ and τ from the
/// overlapping-level self-energy.
pub fn shear_bfield_overlapped(e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<f64> {
    let sigma = self_energy_overlapped(e, params, spectrum);
    let rho = scba::dos(e, sigma, params, Some(spectrum.b_field))?;
    let tau = scba::relaxation_time(sigma)?;
    let wt = omega_tau(e, sigma, spectrum);
    let r = 1.0 / (1.0 + 4.0 * wt * wt);
    Ok(e * e * rho * tau / 8.0 * r + rho / (32.0 * tau) * (4.0 - r))
}

/// Shubnikov–de Haas form valid for |E| > ħω_c, scaled by degeneracy/4.
pub fn shear_bfield_sdh(e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> f64 {
    let a = params.disorder_a;
    let w = spectrum.hbar_omega_c;
    let wt = w * w / (2.0 * e.abs());
    let alpha = a / PI * wt / e.abs();
    let delta = (-4.0 * PI * PI * e * e / (a * w * w)).exp();
    let al2 = 4.0 * alpha * alpha;
    let osc = 1.0 + al2 * delta / (1.0 + al2) * (PI * e.abs() / wt).cos();
    params.g() / 4.0 / (4.0 * PI * PI * spectrum.l_b.powi(2)) * a * e * e / (w * w * (1.0 + al2)) * osc
}

/// Dirac-point form (3A/(8π²(ħv_f)²))·[Γ0 + (ħv_f)²/(l_B² Γ0)]², scaled by degeneracy/4.
pub fn shear_bfield_dirac_point(params: &ModelParams, spectrum: &LandauSpectrum) -> f64 {
    let hv = params.hbar_vf;
    let g0 = params.gamma0();
    let b = g0 + hv * hv / (spectrum.l_b.powi(2) * g0);
    params.g() / 4.0 * 3.0 * params.disorder_a / (8.0 * PI * PI * hv * hv) * b * b
}

/// Regime-dispatched closed form for the static shear viscosity in a field.
pub fn shear_bfield_analytic(e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<AnalyticValue> {
    let (regime, wt) = analytic_regime(e, params, spectrum);
    let value = match regime {
        Regime::Separated => shear_bfield_separated(e, params, spectrum),
        _ => shear_bfield_overlapped(e, params, spectrum)?,
    };
    Ok(AnalyticValue { value, regime, omega_tau: wt, low_confidence: wt > 0.5 && wt < 2.0 })
}

// ---------------------------------------------------------------- Hall

fn hall_pref(params: &ModelParams, spectrum: &LandauSpectrum) -> f64 {
    params.g() / (4.0 * PI) * spectrum.states_per_area()
}

/// z = E − ReΣ + i·max(|ImΣ|, Γ_min).
fn floored(e: f64, sigma: Complex64) -> Complex64 {
    Complex64::new(e - sigma.re, (-sigma.im).max(GAMMA_MIN))
}

/// Antiderivative in z of G_a(z)² G_b(z)², vanishing as z → −∞.
fn pair_antiderivative(z: Complex64, ea: f64, eb: f64) -> Complex64 {
    let d = ea - eb;
    let wm = z - 0.5 * (ea + eb);
    let t = d / (2.0 * wm);
    if t.norm() < 0.05 {
        let t2 = t * t;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for k in 1..=12 {
            acc += k as f64 / (2 * k + 1) as f64 * pw;
            pw *= t2;
        }
        -acc / (wm * wm * wm)
    } else {
        let (u, v) = (z - ea, z - eb);
        -(1.0 / u + 1.0 / v) / (d * d) - 2.0 / (d * d * d) * (u.ln() - v.ln())
    }
}

fn fermi_sea_sum(z: Complex64, spectrum: &LandauSpectrum) -> Complex64 {
    let lv = &spectrum.levels;
    spectrum
        .stress_pairs()
        .iter()
        .map(|p| {
            let (ea, eb) = (lv[p.lo].energy, lv[p.hi].energy);
            2.0 * p.c * (ea - eb) * pair_antiderivative(z, ea, eb)
        })
        .sum()
}

fn require_no_tail(spectrum: &LandauSpectrum) -> Result<()> {
    if spectrum.has_tail() {
        return Err(Error::Cutoff { tail: f64::NAN, n_cutoff: spectrum.n_cutoff });
    }
    Ok(())
}

/// Fermi-sea channel from the exact antiderivative of its integrand, taken
/// from −∞ (or from `lower`, when given) up to E.
pub fn hall_fermi_sea_antiderivative(e: f64, lower: Option<f64>, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<Complex64> {
    require_no_tail(spectrum)?;
    let s = scba::solve_self_energy_landau(e, params, spectrum)?;
    let mut v = fermi_sea_sum(floored(e, s.sigma), spectrum);
    if let Some(lo) = lower {
        let s0 = scba::solve_self_energy_landau(lo, params, spectrum)?;
        v -= fermi_sea_sum(floored(lo, s0.sigma), spectrum);
    }
    Ok(hall_pref(params, spectrum) * v)
}

/// Fermi-sea channel on [ω_lo, E] by direct quadrature of
/// Tr[G^R D dG^R/dω T_xy − dG^R/dω D G^R T_xy], with Σ solved at every node
/// and ∂_ωΣ from central differences.
pub fn hall_fermi_sea_quadrature(omega_lo: f64, e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<Complex64> {
    require_no_tail(spectrum)?;
    let pairs = spectrum.stress_pairs();
    let sig = |w: f64| scba::solve_self_energy_landau(w, params, spectrum).map(|s| s.sigma);
    let integrand = |w: f64| -> Result<Complex64> {
        let s0 = sig(w)?;
        let h = 1e-3 * (-s0.im).max(GAMMA_MIN);
        if h < 1e-12 {
            return Err(Error::domain("derivative step underflow"));
        }
        let ds = (sig(w + h)? - sig(w - h)?) / (2.0 * h);
        let z = floored(w, s0);
        let g = green(z, spectrum);
        let dg: Vec<Complex64> = g.iter().map(|gi| -(1.0 - ds) * gi * gi).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &pairs {
            let (a, b) = (p.lo, p.hi);
            // ordered pairs (a,b) with c and (b,a) with −c
            acc += p.c * (g[a] * dg[b] - dg[a] * g[b]) - p.c * (g[b] * dg[a] - dg[b] * g[a]);
        }
        Ok(acc)
    };
    let mut err = None;
    let mut f = |w: f64, part: usize| match integrand(w) {
        Ok(c) => {
            if part == 0 {
                c.re
            } else {
                c.im
            }
        }
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    };
    let pts: Vec<f64> = spectrum.levels.iter().map(|l| l.energy).filter(|x| *x > omega_lo && *x < e).collect();
    let q = Quad::new(1e-10, 1e-7);
    let (re, _) = q.run("fermi sea", |w| f(w, 0), omega_lo, e, &pts)?;
    let (im, _) = q.run("fermi sea", |w| f(w, 1), omega_lo, e, &pts)?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(hall_pref(params, spectrum) * Complex64::new(re, im))
}

/// Static Hall viscosity: Fermi-surface channels at E plus the Fermi-sea channel.
pub fn hall_static_numeric(e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<ViscosityValue> {
    let s = scba::solve_self_energy_landau(e, params, spectrum)?;
    hall_static_with_sigma(e, s.sigma, params, spectrum)
}

pub fn hall_static_with_sigma(e: f64, sigma: Complex64, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<ViscosityValue> {
    require_no_tail(spectrum)?;
    let z = floored(e, sigma);
    let g = green(z, spectrum);
    let mut ra = Complex64::new(0.0, 0.0);
    let mut rr = Complex64::new(0.0, 0.0);
    for p in spectrum.stress_pairs() {
        let (ga, gb) = (g[p.lo], g[p.hi]);
        ra += p.c * (ga * gb.conj() - gb * ga.conj());
        rr += p.c * (ga * gb - gb * ga);
    }
    let ii = fermi_sea_sum(z, spectrum);
    let pref = hall_pref(params, spectrum);
    Ok(ViscosityValue::new(pref * ra, pref * rr, Some(pref * ii), numeric_regime(e, sigma, spectrum), sigma))
}

/// Closed-form static Hall viscosity.
///
/// Separated levels: sgn(E)(2N²+2N+1)ħ/(4πl_B²) − ρE²/(16ω̃_c(1+4ω̃_c²τ²)).
/// Overlapping levels: sgn(E)ρω̃_cτ²E²/(4(1+4ω̃_c²τ²)).
pub fn hall_static_analytic(e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<AnalyticValue> {
    let (regime, wt) = analytic_regime(e, params, spectrum);
    let sgn = if e > 0.0 {
        1.0
    } else if e < 0.0 {
        -1.0
    } else {
        0.0
    };
    let w = spectrum.hbar_omega_c;
    let gscale = params.g() / 4.0;
    let value = match regime {
        Regime::Separated => {
            let n = ((e / w).powi(2) + 1e-12).floor();
            let plateau = (2.0 * n * n + 2.0 * n + 1.0) / (4.0 * PI * spectrum.l_b.powi(2));
            let corr = match self_energy_separated(e, nearest_level(e, spectrum), params, spectrum) {
                Ok(sigma) if sigma.im < 0.0 && e != 0.0 => {
                    let rho = scba::dos(e, sigma, params, Some(spectrum.b_field))? / gscale;
                    let wtn = omega_tau(e, sigma, spectrum);
                    let wtil = w * w / (2.0 * e.abs());
                    rho * e * e / (16.0 * wtil * (1.0 + 4.0 * wtn * wtn))
                }
                _ => 0.0,
            };
            gscale * sgn * (plateau - corr)
        }
        _ => {
            let sigma = self_energy_overlapped(e, params, spectrum);
            let rho = scba::dos(e, sigma, params, Some(spectrum.b_field))? / gscale;
            let tau = scba::relaxation_time(sigma)?;
            let wtn = omega_tau(e, sigma, spectrum);
            let wtil = if e == 0.0 { 0.0 } else { w * w / (2.0 * e.abs()) };
            gscale * sgn * rho * wtil * tau * tau * e * e / (4.0 * (1.0 + 4.0 * wtn * wtn))
        }
    };
    Ok(AnalyticValue { value, regime, omega_tau: wt, low_confidence: wt > 0.5 && wt < 2.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SelfEnergyModel;

    fn unit_shear(sp: &LandauSpectrum) -> f64 {
        1.0 / (2.0 * PI * PI * sp.l_b.powi(2))
    }

    fn unit_hall(sp: &LandauSpectrum) -> f64 {
        1.0 / (4.0 * PI * sp.l_b.powi(2))
    }

    #[test]
    fn b0_analytic_examples() {
        let p = ModelParams::new(20.0);
        assert!((shear_b0_analytic(1.5, &p) - 1.413).abs() < 1e-3);
        assert_eq!(shear_b0_analytic(0.7, &p), shear_b0_analytic(-0.7, &p));
        let c = 1.0 / (8.0 * PI * PI * p.hbar_vf.powi(2));
        let e0 = 3.0 * 20.0 * 7.2f64.powi(2) * (-20.0f64).exp() * c;
        assert!((shear_b0_analytic(0.0, &p) / e0 - 1.0).abs() < 1e-12);
        assert!(shear_b0_analytic(0.0, &ModelParams::new(5.0)) > shear_b0_analytic(0.0, &p));
    }

    /// At E = 0 the radial integrals are elementary:
    /// RA = −RR = (g/16)·Γ²/(π²(ħv_f)²)·[ln(1 + E_c²/Γ²) + Γ²/(Γ² + E_c²) − 1].
    #[test]
    fn b0_zero_energy_channels() {
        for a in [5.0, 10.0, 20.0] {
            let p = ModelParams::new(a);
            let v = shear_b0_numeric(0.0, &p).unwrap();
            let gm = -v.sigma.im;
            let ec2 = 7.2f64 * 7.2;
            let oracle = 4.0 / 16.0 * gm * gm / (PI * PI * p.hbar_vf.powi(2))
                * ((1.0 + ec2 / (gm * gm)).ln() + gm * gm / (gm * gm + ec2) - 1.0);
            assert!((v.ra.re / oracle - 1.0).abs() < 1e-6, "A={a}: {} vs {oracle}", v.ra.re);
            assert!((v.rr.re / oracle + 1.0).abs() < 1e-6);
            assert!((v.value - 2.0 * oracle).abs() < 1e-6 * oracle);
        }
    }

    #[test]
    fn b0_numeric_close_to_closed_form() {
        let p = ModelParams::new(20.0).with_self_energy(SelfEnergyModel::ImaginaryOnly);
        let v = shear_b0_numeric(1.5, &p).unwrap();
        assert!((v.value / shear_b0_analytic(1.5, &p) - 1.0).abs() < 0.05, "{}", v.value);
        assert_eq!(v.regime, Regime::BZero);
        assert!(v.ii.is_none());
    }

    #[test]
    fn b0_disorder_enhancement_at_dirac_point() {
        let a5 = shear_b0_numeric(0.0, &ModelParams::new(5.0)).unwrap().value;
        let a20 = shear_b0_numeric(0.0, &ModelParams::new(20.0)).unwrap().value;
        assert!(a5 > a20);
    }

    #[test]
    fn b0_advanced_channel_is_conjugate_pair() {
        let p = ModelParams::new(15.0);
        let s = scba::solve_self_energy_b0(0.4, &p).unwrap().sigma;
        let aa = shear_b0_channel(0.4, s, Branch::Advanced, Branch::Advanced, &p).unwrap();
        let rr = shear_b0_channel(0.4, s, Branch::Retarded, Branch::Retarded, &p).unwrap();
        assert!((aa.re - rr.re).abs() < 1e-9 * rr.norm());
    }

    #[test]
    fn chiral_trace_matches_closed_angle_average() {
        let z1 = Complex64::new(0.3, 0.05);
        let z2 = Complex64::new(0.2, -0.02);
        let x = 0.25;
        let s = |z: Complex64| 2.0 * z / (z * z - x * x);
        let expect = x * x / 8.0 * s(z1) * s(z2);
        assert!((chiral_trace(x, z1, z2, 0.6582) - expect).norm() < 1e-12 * expect.norm());
    }

    /// Clean-limit level centers carry (N² + 1)ħ/(2π²l_B²) for N ≥ 1 and
    /// ħ/(2π²l_B²) for N = 0: level N couples to both N − 2 and N + 2.
    #[test]
    fn level_center_shear_quantization() {
        let p = ModelParams::new(500.0).with_self_energy(SelfEnergyModel::ImaginaryOnly);
        let sp = LandauSpectrum::new(10.0, &p, 0.5).unwrap();
        let u = unit_shear(&sp);
        assert!((u - 7.70e-4).abs() < 1e-6);
        for (n, expect) in [(0usize, 1.0), (1, 2.0), (2, 5.0), (3, 10.0)] {
            let e = sp.energy(n, 1);
            let v = shear_bfield_numeric(e, &p, &sp).unwrap().value / u;
            assert!((v / expect - 1.0).abs() < 0.05, "N={n}: {v}");
        }
    }

    #[test]
    fn tail_matches_explicit_sum() {
        let p = ModelParams::new(20.0);
        let full = LandauSpectrum::new(10.0, &p, 0.3).unwrap();
        assert!(!full.has_tail());
        let cut = LandauSpectrum::with_cap(10.0, &p, 0.3, 1500).unwrap();
        assert!(cut.has_tail());
        let s = scba::solve_self_energy_landau(0.3, &p, &full).unwrap().sigma;
        let a = shear_bfield_with_sigma(0.3, s, &p, &full).unwrap().value;
        let b = shear_bfield_with_sigma(0.3, s, &p, &cut).unwrap().value;
        assert!((a / b - 1.0).abs() < 1e-4, "{a} {b}");
    }

    #[test]
    fn separated_and_dirac_point_closed_forms() {
        let p = ModelParams::new(500.0);
        let sp = LandauSpectrum::new(10.0, &p, 0.0).unwrap();
        let v = shear_bfield_separated(sp.energy(2, 1), &p, &sp);
        assert!((v - 3.08e-3).abs() < 1e-5);
        assert!((shear_bfield_separated(0.0, &p, &sp) - 7.70e-4).abs() < 1e-6);
        let q = ModelParams::new(15.0);
        let vals: Vec<f64> = [1.0, 5.0, 10.0]
            .iter()
            .map(|b| shear_bfield_dirac_point(&q, &LandauSpectrum::new(*b, &q, 0.0).unwrap()))
            .collect();
        assert!(vals[0] < vals[1] && vals[1] < vals[2]);
    }

    #[test]
    fn overlapped_reduces_to_b0_closed_form() {
        let p = ModelParams::new(15.0);
        let sp = LandauSpectrum::new(1e-4, &p, 1.0).unwrap_or_else(|_| unreachable!());
        let e = 1.0;
        let sigma = self_energy_overlapped(e, &p, &sp);
        let rho = scba::dos(e, sigma, &p, None).unwrap();
        let tau = scba::relaxation_time(sigma).unwrap();
        let v = shear_bfield_overlapped(e, &p, &sp).unwrap();
        assert!((v / shear_b0_from_lifetime(e, rho, tau) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn hall_plateaus_clean_limit() {
        let p = ModelParams::new(500.0);
        let sp = LandauSpectrum::new(10.0, &p, 0.5).unwrap();
        let w = sp.hbar_omega_c;
        let u = unit_hall(&sp);
        for n in 0..4 {
            let nf = n as f64;
            let e = w * (nf.sqrt() + (nf + 1.0).sqrt()) / 2.0;
            let expect = 2.0 * nf * nf + 2.0 * nf + 1.0;
            let v = hall_static_numeric(e, &p, &sp).unwrap();
            assert!((v.value / u / expect - 1.0).abs() < 1e-3, "N={n}: {}", v.value / u);
            let m = hall_static_numeric(-e, &p, &sp).unwrap();
            assert!((m.value + v.value).abs() < 1e-6 * v.value.abs());
            assert!(v.ii.unwrap().re.abs() / v.value.abs() >= 0.8);
        }
        let v0 = hall_static_numeric(w / 2.0, &p, &sp).unwrap().value;
        assert!((v0 - 1.209e-3).abs() < 2e-6);
    }

    #[test]
    fn fermi_sea_quadrature_matches_antiderivative() {
        // Moderate disorder keeps Σ(ω) smooth enough for a quick quadrature.
        let p = ModelParams::new(20.0);
        let sp = LandauSpectrum::new(10.0, &p, 0.3).unwrap();
        let (lo, hi) = (0.05, 0.2);
        let q = hall_fermi_sea_quadrature(lo, hi, &p, &sp).unwrap();
        let a = hall_fermi_sea_antiderivative(hi, Some(lo), &p, &sp).unwrap();
        assert!((q - a).norm() < 1e-5 * a.norm(), "{q} vs {a}");
    }

    #[test]
    fn hall_analytic_plateau_and_oddness() {
        let p = ModelParams::new(500.0);
        let sp = LandauSpectrum::new(10.0, &p, 0.0).unwrap();
        let e = sp.hbar_omega_c / 2.0;
        let v = hall_static_analytic(e, &p, &sp).unwrap();
        assert_eq!(v.regime, Regime::Separated);
        assert!((v.value - 1.209e-3).abs() < 2e-6);
        let m = hall_static_analytic(-e, &p, &sp).unwrap();
        assert_eq!(m.value, -v.value);
        let q = ModelParams::new(10.0);
        let o = hall_static_analytic(1.0, &q, &sp).unwrap();
        assert_eq!(o.regime, Regime::Overlapped);
        assert_eq!(hall_static_analytic(-1.0, &q, &sp).unwrap().value, -o.value);
    }
}
