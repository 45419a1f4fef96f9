//! Self-consistent Born self-energy, its closed-form limits, DOS and lifetime.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{LandauSpectrum, ModelParams, SelfEnergyModel};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfEnergySolution {
    /// Evaluation energy in eV.
    pub energy: f64,
    /// Retarded Σ in eV. The advanced one is its conjugate.
    pub sigma: Complex64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl SelfEnergySolution {
    pub fn gamma(&self) -> f64 {
        -self.sigma.im
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Damping of the fixed-point step.
    pub alpha: f64,
    /// Relative tolerance on successive iterates.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { alpha: 0.3, tol: 1e-10, max_iter: 10_000 }
    }
}

const SIGMA_FLOOR: f64 = 1e-14;

/// Σ ↦ F(Σ) for B = 0 and its derivative dF/dΣ.
fn map_b0(e: f64, sigma: Complex64, p: &ModelParams) -> (Complex64, Complex64) {
    let z = e - sigma;
    let ec2 = p.cutoff_ec * p.cutoff_ec;
    let z2 = z * z;
    let l = (1.0 - ec2 / z2).ln();
    let f = -z * l / p.disorder_a;
    let df = (l + 2.0 * ec2 / (z2 - ec2)) / p.disorder_a;
    (f, df)
}

/// Right-hand side of the B = 0 SCBA equation, −(z/A)·ln(1 − E_c²/z²) with z = E − Σ.
pub fn scba_map_b0(e: f64, sigma: Complex64, params: &ModelParams) -> Complex64 {
    map_b0(e, sigma, params).0
}

/// Σ ↦ F(Σ) for the Landau sum, with the midpoint-integral tail for levels
/// beyond the explicit cutoff.
fn map_landau(e: f64, sigma: Complex64, p: &ModelParams, sp: &LandauSpectrum) -> Result<(Complex64, Complex64)> {
    let w = sp.hbar_omega_c;
    let w2 = w * w;
    let kappa = w2 / (2.0 * p.disorder_a);
    let z = e - sigma;
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for lv in &sp.levels {
        let g = 1.0 / (z - lv.energy);
        f += g;
        df += g * g;
    }
    if sp.has_tail() {
        let z2 = z * z;
        let ta = sp.n_cutoff as f64 + 0.5;
        let tb = sp.n_band as f64 + 0.5;
        let (ua, ub) = (z2 - ta * w2, z2 - tb * w2);
        let lg = ua.ln() - ub.ln();
        f += 2.0 * z / w2 * lg;
        df += 2.0 / w2 * lg + 4.0 * z2 / w2 * (1.0 / ua - 1.0 / ub);
        // Euler–Maclaurin remainder of the midpoint rule
        let fp = |u: Complex64| 2.0 * z * w2 / (u * u);
        let rem = kappa * (fp(ub) - fp(ua)).norm() / 24.0;
        let scale = (kappa * f).norm().max(1e-12);
        if rem > 1e-6 * scale {
            return Err(Error::Cutoff { tail: rem, n_cutoff: sp.n_cutoff });
        }
    }
    Ok((kappa * f, kappa * df))
}

/// Right-hand side of the Landau SCBA equation, (ħω_c)²/(2A)·Σ_{n,s} 1/(E − E_ns − Σ).
pub fn scba_map_landau(e: f64, sigma: Complex64, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<Complex64> {
    Ok(map_landau(e, sigma, params, spectrum)?.0)
}

fn iterate<M>(e: f64, seed: Complex64, model: SelfEnergyModel, opts: &SolverOptions, mut map: M) -> Result<SelfEnergySolution>
where
    M: FnMut(Complex64) -> Result<(Complex64, Complex64)>,
{
    let project = |s: Complex64| match model {
        SelfEnergyModel::Full => s,
        SelfEnergyModel::ImaginaryOnly => Complex64::new(0.0, s.im),
    };
    let retarded = |s: Complex64| if s.im > 0.0 { s.conj() } else { s };
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(SIGMA_FLOOR);

    let mut sigma = project(seed);
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let (f, df) = map(sigma)?;
        let f = project(f);
        residual = rel(f, sigma);
        if residual <= opts.tol {
            return Ok(SelfEnergySolution { energy: e, sigma: retarded(f), residual, iterations: it, converged: true });
        }
        let damped = retarded((1.0 - opts.alpha) * sigma + opts.alpha * f);
        // Close to the fixed point a Newton step replaces the slow damped
        // contraction; it is kept only if it lowers the residual.
        let mut next = damped;
        if residual < 1e-3 {
            let newton = match model {
                SelfEnergyModel::Full => sigma - (f - sigma) / (df - 1.0),
                SelfEnergyModel::ImaginaryOnly => {
                    let h = f.im - sigma.im;
                    Complex64::new(0.0, sigma.im - h / (df.re - 1.0))
                }
            };
            let newton = retarded(newton);
            if newton.is_finite() {
                if let Ok((fn_, _)) = map(newton) {
                    let fd = project(map(damped)?.0);
                    if rel(project(fn_), newton) < rel(fd, damped) {
                        next = newton;
                    }
                }
            }
        }
        if !next.is_finite() {
            break;
        }
        sigma = next;
    }
    let last = SelfEnergySolution { energy: e, sigma, residual, iterations: opts.max_iter, converged: false };
    Err(Error::NoConvergence { last })
}

/// Solves Σ(E) at B = 0 with the default solver options.
pub fn solve_self_energy_b0(e: f64, params: &ModelParams) -> Result<SelfEnergySolution> {
    solve_self_energy_b0_with(e, params, &SolverOptions::default())
}

pub fn solve_self_energy_b0_with(e: f64, params: &ModelParams, opts: &SolverOptions) -> Result<SelfEnergySolution> {
    params.validate()?;
    if !e.is_finite() {
        return Err(Error::domain("energy must be finite"));
    }
    let seed = Complex64::new(0.0, -params.gamma0().max(PI * e.abs() / params.disorder_a));
    iterate(e, seed, params.self_energy, opts, |s| Ok(map_b0(e, s, params)))
}

/// Solves Σ(E) in a quantizing field with the default solver options.
pub fn solve_self_energy_landau(e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<SelfEnergySolution> {
    solve_self_energy_landau_with(e, params, spectrum, &SolverOptions::default())
}

pub fn solve_self_energy_landau_with(
    e: f64,
    params: &ModelParams,
    spectrum: &LandauSpectrum,
    opts: &SolverOptions,
) -> Result<SelfEnergySolution> {
    params.validate()?;
    if !e.is_finite() {
        return Err(Error::domain("energy must be finite"));
    }
    let a = params.disorder_a;
    // The semicircle width enters the seed so the iteration starts inside the
    // level rather than on the real axis of a gap.
    let g = params
        .gamma0()
        .max(PI * e.abs() / a)
        .max(spectrum.hbar_omega_c / (2.0 * a).sqrt());
    iterate(e, Complex64::new(0.0, -g), params.self_energy, opts, |s| map_landau(e, s, params, spectrum))
}

/// −i(E_c e^{−A/2} + π|E|/A).
pub fn self_energy_b0_asymptotic(e: f64, params: &ModelParams) -> Complex64 {
    Complex64::new(0.0, -(params.gamma0() + PI * e.abs() / params.disorder_a))
}

/// Semicircle self-energy of an isolated Landau level.
///
/// With ε = (E − E_NS)/(2ħω_c): ReΣ = ħω_c ε and ImΣ = −ħω_c √(1/2A − ε²).
/// Outside the semicircle the energy lies in a level gap and a domain error is
/// returned.
pub fn self_energy_separated(e: f64, nearest: (u32, i8), params: &ModelParams, spectrum: &LandauSpectrum) -> Result<Complex64> {
    let w = spectrum.hbar_omega_c;
    let sign = if nearest.1 < 0 { -1.0 } else { 1.0 };
    let level = sign * w * (nearest.0 as f64).sqrt();
    let eps = (e - level) / (2.0 * w);
    let r2 = 1.0 / (2.0 * params.disorder_a);
    if eps * eps > r2 {
        return Err(Error::domain(format!("E = {e} eV lies in a level gap (|ε| = {:.4} > {:.4})", eps.abs(), r2.sqrt())));
    }
    Ok(Complex64::new(w * eps, -w * (r2 - eps * eps).sqrt()))
}

/// Overlapping-level asymptotic with the Shubnikov–de Haas oscillation.
pub fn self_energy_overlapped(e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> Complex64 {
    let w = spectrum.hbar_omega_c;
    let a = params.disorder_a;
    let g0 = params.gamma0();
    let delta = (-4.0 * PI * PI * e * e / (a * w * w)).exp();
    let osc = if e == 0.0 { 0.0 } else { 2.0 * delta * (PI * 2.0 * e.abs() * e.abs() / (w * w)).cos() };
    Complex64::new(0.0, -(g0 + w * w / (2.0 * g0) + PI * e.abs() / a * (1.0 + osc)))
}

/// Broadening at E = 0 from the Lambert-W solution of the Landau SCBA,
/// Γ = ħω_c/√(2 W((ħω_c)²/(2E_c²)·e^A)).
///
/// The derivation replaces the level sum by an integral, so it holds when
/// ħω_c ≪ Γ.
pub fn self_energy_lambert_w(params: &ModelParams, spectrum: &LandauSpectrum) -> f64 {
    let w = spectrum.hbar_omega_c;
    let ec = params.cutoff_ec;
    // e^A overflows for A ≳ 709; work with logs there.
    let ln_x = 2.0 * (w / ec).ln() - std::f64::consts::LN_2 + params.disorder_a;
    let wv = if ln_x < 700.0 { lambert_w::lambert_w0(ln_x.exp()) } else { lambert_w_large(ln_x) };
    w / (2.0 * wv).sqrt()
}

/// W(x) for x = e^{ln_x} too large for f64, via Newton on w + ln w = ln x.
fn lambert_w_large(ln_x: f64) -> f64 {
    let mut w = ln_x - ln_x.ln();
    for _ in 0..50 {
        let step = (w + w.ln() - ln_x) / (1.0 + 1.0 / w);
        w -= step;
        if step.abs() < 1e-15 * w {
            break;
        }
    }
    w
}

/// Density of states in eV⁻¹nm⁻², scaled by degeneracy/4.
pub fn dos(e: f64, sigma: Complex64, params: &ModelParams, b_field: Option<f64>) -> Result<f64> {
    let _ = e;
    if sigma.im > 0.0 {
        return Err(Error::domain(format!("Im(sigma) must be non-positive, got {}", sigma.im)));
    }
    let a = params.disorder_a;
    let g = params.g() / 4.0;
    match b_field {
        None => Ok(-g * 2.0 * a / (PI * PI * params.hbar_vf * params.hbar_vf) * sigma.im),
        Some(b) => {
            let lb = crate::model::magnetic_length(b)?;
            let w = std::f64::consts::SQRT_2 * params.hbar_vf / lb;
            Ok(-g * 4.0 * a / (PI * PI * lb * lb * w * w) * sigma.im)
        }
    }
}

/// τ = ħ/(2|ImΣ|) in ħ/eV.
pub fn relaxation_time(sigma: Complex64) -> Result<f64> {
    if sigma.im == 0.0 {
        return Err(Error::InfiniteLifetime);
    }
    if sigma.im > 0.0 {
        return Err(Error::domain("Im(sigma) must be negative for a retarded self-energy"));
    }
    Ok(0.5 / sigma.im.abs())
}
