//! Frequency-dependent shear and Hall viscosities.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kubo_static::{self, Regime};
use crate::model::{LandauSpectrum, ModelParams, State, GAMMA_FLOOR};
use crate::quad::Quad;
use crate::scba;

/// Level width used by the Landau-level transition sums.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "gamma")]
pub enum Broadening {
    /// Fixed half-width Γ in eV.
    Constant(f64),
    /// Σ(ω) solved self-consistently at every frequency that is needed.
    SelfConsistent,
}

/// Occupation at energy x: a step (½ exactly at E_F) at zero temperature.
pub fn occupation(x: f64, e_fermi: f64, temperature: f64) -> f64 {
    if temperature > 0.0 {
        let y = (x - e_fermi) / temperature;
        if y > 0.0 {
            let t = (-y).exp();
            t / (1.0 + t)
        } else {
            1.0 / (1.0 + y.exp())
        }
    } else if x < e_fermi {
        1.0
    } else if x > e_fermi {
        0.0
    } else {
        0.5
    }
}

/// ∫ dω w(ω) g(ω) with w = (f_ω − f_{ω+Ω})/Ω, Ω > 0. At zero temperature
/// w is 1/Ω on [E − Ω, E].
fn window<F: FnMut(f64) -> f64>(e: f64, omega: f64, temperature: f64, q: &Quad, points: &[f64], mut g: F) -> Result<f64> {
    if temperature > 0.0 {
        let (lo, hi) = (e - omega - 40.0 * temperature, e + 40.0 * temperature);
        let w = |x: f64| (occupation(x, e, temperature) - occupation(x + omega, e, temperature)) / omega;
        Ok(q.run("frequency window", |x| w(x) * g(x), lo, hi, points)?.0)
    } else {
        Ok(q.run("frequency window", g, e - omega, e, points)?.0 / omega)
    }
}

fn check_omega(omega: f64) -> Result<f64> {
    if !omega.is_finite() || omega == 0.0 {
        return Err(Error::domain(format!("frequency must be finite and non-zero, got {omega}")));
    }
    // η_s(−Ω) = η_s(Ω)
    Ok(omega.abs())
}

// ---------------------------------------------------------------- B = 0

/// Re[RA − RR] kernel at B = 0 with distinct frequencies on the two lines.
fn b0_pair(z1: Complex64, z2: Complex64, params: &ModelParams) -> Result<f64> {
    let ra = kubo_static::b0_kernel(z1, z2.conj(), params)?;
    let rr = kubo_static::b0_kernel(z1, z2, params)?;
    Ok(ra.re - rr.re)
}

/// Dynamic shear viscosity at B = 0: the frequency window of the Kubo
/// kernel, with Σ solved at ω and ω + Ω at every node.
pub fn shear_dynamic_b0(e: f64, omega: f64, params: &ModelParams) -> Result<f64> {
    let omega = check_omega(omega)?;
    let mut err = None;
    let g = |w: f64| -> Result<f64> {
        let s1 = scba::solve_self_energy_b0(w + omega, params)?.sigma;
        let s2 = scba::solve_self_energy_b0(w, params)?.sigma;
        b0_pair(w + omega - s1, w - s2, params)
    };
    let scale = kubo_static::shear_b0_analytic(e, params).max(shear_dynamic_b0_eh_limit(omega, params));
    let q = Quad::new(1e-9 * scale, 1e-6);
    let v = window(e, omega, params.temperature, &q, &[0.0, -omega], |w| match g(w) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Electron-hole limit E ≪ Ω: (Ω²/16(ħv_f)²)(1/2 + 16/(15A)), scaled by degeneracy/4.
pub fn shear_dynamic_b0_eh_limit(omega: f64, params: &ModelParams) -> f64 {
    let hv = params.hbar_vf;
    params.g() / 4.0 * omega * omega / (16.0 * hv * hv) * (0.5 + 16.0 / (15.0 * params.disorder_a))
}

/// Electron-electron limit 0 < Ω ≪ E:
/// (E²/2π²(ħv_f)²)(π²/A + AE²/((A²/π²)Ω² + 4E²)), scaled by degeneracy/4.
pub fn shear_dynamic_b0_ee_limit(e: f64, omega: f64, params: &ModelParams) -> f64 {
    let hv = params.hbar_vf;
    let a = params.disorder_a;
    let e2 = e * e;
    params.g() / 4.0 * e2 / (2.0 * PI * PI * hv * hv) * (PI * PI / a + a * e2 / (a * a / (PI * PI) * omega * omega + 4.0 * e2))
}

// ---------------------------------------------------------------- transitions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionKind {
    ElectronHole,
    ElectronElectron,
    HoleHole,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub from: State,
    pub to: State,
    /// |ΔE| in eV.
    pub frequency: f64,
    /// n_low + 1.
    pub weight: f64,
    pub kind: TransitionKind,
}

/// Pauli-allowed |Δn| = 2 transitions from occupied to empty levels with
/// ΔE ≤ Ω_max, ordered by frequency.
///
/// A level exactly at E_F counts as both occupied and empty. The kind says
/// whether the two levels lie on opposite sides of the Dirac point, with the
/// zero-energy level counted on both sides.
pub fn transition_table(e_fermi: f64, spectrum: &LandauSpectrum, omega_max: f64) -> Result<Vec<Transition>> {
    if !(omega_max > 0.0) {
        return Err(Error::domain("omega_max must be positive"));
    }
    let lv = &spectrum.levels;
    let occupied = |x: f64| x <= e_fermi;
    let empty = |x: f64| x >= e_fermi;
    let mut out = Vec::new();
    for p in spectrum.stress_pairs() {
        let (a, b) = (lv[p.lo], lv[p.hi]);
        for (from, to) in [(a, b), (b, a)] {
            let df = to.energy - from.energy;
            if df <= 0.0 || df > omega_max || !occupied(from.energy) || !empty(to.energy) {
                continue;
            }
            let kind = if from.energy <= 0.0 && to.energy >= 0.0 {
                TransitionKind::ElectronHole
            } else if from.energy > 0.0 {
                TransitionKind::ElectronElectron
            } else {
                TransitionKind::HoleHole
            };
            out.push(Transition {
                from: State::new(from.n, from.s),
                to: State::new(to.n, to.s),
                frequency: df,
                weight: (from.n.min(to.n) + 1) as f64,
                kind,
            });
        }
    }
    out.sort_by(|x, y| {
        x.frequency
            .partial_cmp(&y.frequency)
            .unwrap()
            .then((x.from.n, x.from.s).cmp(&(y.from.n, y.from.s)))
    });
    Ok(out)
}

// ---------------------------------------------------------------- B ≠ 0 shear

/// ln(1 + x)/x, accurate for small x.
fn log1p_over_x(x: Complex64) -> Complex64 {
    if x.norm() < 1e-4 {
        1.0 - x / 2.0 + x * x / 3.0 - x * x * x / 4.0
    } else {
        (1.0 + x).ln() / x
    }
}

/// Antiderivative pieces of Im G(ω − p)·Im G(ω − q) with G(x) = 1/(x + iΓ).
fn lorentz_product_primitive(w: f64, p: f64, q: f64, gamma: f64) -> f64 {
    let i = Complex64::i();
    let alpha = p - i * gamma;
    let beta = q + i * gamma;
    let alpha2 = q - i * gamma;
    let u_vbar = ((w - alpha).ln() - (w - beta).ln()) / (alpha - beta);
    // ∫ dω/((ω−α)(ω−α')) with α − α' = p − q, written to survive p = q
    let r = 1.0 / (w - alpha2);
    let u_v = -r * log1p_over_x(-(p - q) * r);
    0.5 * (u_vbar - u_v).re
}

/// ∫_{lo}^{hi} Im G(ω − p) Im G(ω − q) dω for a constant width Γ.
pub(crate) fn lorentz_product_integral(lo: f64, hi: f64, p: f64, q: f64, gamma: f64) -> f64 {
    lorentz_product_primitive(hi, p, q, gamma) - lorentz_product_primitive(lo, p, q, gamma)
}

fn require_no_tail(spectrum: &LandauSpectrum) -> Result<()> {
    if spectrum.has_tail() {
        return Err(Error::Cutoff { tail: f64::NAN, n_cutoff: spectrum.n_cutoff });
    }
    Ok(())
}

/// Dynamic shear viscosity in a field from the Landau transition sum.
///
/// With a constant width the window integral of every pair is done in closed
/// form. With self-consistent broadening Σ(ω) is solved at each quadrature node.
pub fn shear_dynamic_bfield(e: f64, omega: f64, params: &ModelParams, spectrum: &LandauSpectrum, broadening: Broadening) -> Result<f64> {
    let omega = check_omega(omega)?;
    require_no_tail(spectrum)?;
    let pairs = spectrum.stress_pairs();
    let lv = &spectrum.levels;
    let pref = params.g() / (2.0 * PI) * spectrum.states_per_area();
    let t = params.temperature;
    match broadening {
        Broadening::Constant(g) if t == 0.0 => {
            let g = g.max(GAMMA_FLOOR);
            let (lo, hi) = (e - omega, e);
            let mut acc = 0.0;
            for p in &pairs {
                let (ea, eb) = (lv[p.lo].energy, lv[p.hi].energy);
                let j = lorentz_product_integral(lo, hi, ea - omega, eb, g) + lorentz_product_integral(lo, hi, eb - omega, ea, g);
                acc += p.t2 * 2.0 * j;
            }
            Ok(pref * acc / omega)
        }
        _ => {
            let width = |w: f64| -> Result<Complex64> {
                match broadening {
                    Broadening::Constant(g) => Ok(Complex64::new(0.0, -g.max(GAMMA_FLOOR))),
                    Broadening::SelfConsistent => Ok(scba::solve_self_energy_landau(w, params, spectrum)?.sigma),
                }
            };
            let mut err = None;
            let g = |w: f64| -> Result<f64> {
                let z1 = w + omega - width(w + omega)?;
                let z2 = w - width(w)?;
                let mut acc = 0.0;
                for p in &pairs {
                    let (ea, eb) = (lv[p.lo].energy, lv[p.hi].energy);
                    let im = |z: Complex64, x: f64| (1.0 / (z - x)).im;
                    acc += p.t2 * 2.0 * (im(z1, ea) * im(z2, eb) + im(z2, ea) * im(z1, eb));
                }
                Ok(acc)
            };
            let mut pts: Vec<f64> = lv.iter().flat_map(|l| [l.energy, l.energy - omega]).collect();
            pts.retain(|x| (x - e).abs() < omega + 50.0 * t.max(1e-3));
            let q = Quad::new(1e-12, 1e-7);
            let v = window(e, omega, t, &q, &pts, |w| match g(w) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            })?;
            match err {
                Some(e) => Err(e),
                None => Ok(pref * v),
            }
        }
    }
}

// ---------------------------------------------------------------- Hall

fn kink(x: f64, gamma: f64) -> f64 {
    x / (x * x + gamma * gamma)
}

fn broadening_width(e: f64, params: &ModelParams, spectrum: &LandauSpectrum, broadening: Broadening) -> Result<f64> {
    let g = match broadening {
        Broadening::Constant(g) => g,
        Broadening::SelfConsistent => scba::solve_self_energy_landau(e, params, spectrum)?.gamma(),
    };
    Ok(g.max(GAMMA_FLOOR))
}

/// Terms of the kink sum, ascending n and s = −, + for both bands. The
/// zero-energy level enters with both signs, which doubles its weight.
fn kink_terms(spectrum: &LandauSpectrum) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
    (0..=spectrum.n_cutoff.saturating_sub(2)).flat_map(move |n| {
        [-1i8, 1].into_iter().flat_map(move |s| {
            [-1i8, 1].into_iter().map(move |sp| ((n + 1) as f64, spectrum.energy(n, s), spectrum.energy(n + 2, sp)))
        })
    })
}

/// Dynamic Hall viscosity of well-separated levels with Σ = −iΓ:
/// (ħ³ω_c²/8πl_B²) Σ (n+1)/Ω {2(f_{E_n+Ω} − f_{E_n}) K(Ω − E_m + E_n)
/// \+ (f_{E_m+Ω} − f_{E_n−Ω}) K(Ω + E_m − E_n) − (E_n ↔ E_m)}, K(x) = x/(x² + Γ²),
/// scaled by degeneracy/4.
pub fn hall_dynamic(e: f64, omega: f64, params: &ModelParams, spectrum: &LandauSpectrum, broadening: Broadening) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!("frequency must be positive, got {omega}")));
    }
    let g = broadening_width(e, params, spectrum, broadening)?;
    let t = params.temperature;
    let f = |x: f64| occupation(x, e, t);
    let mut acc = 0.0;
    for (w, en, em) in kink_terms(spectrum) {
        let a = 2.0 * (f(en + omega) - f(en)) * kink(omega - em + en, g) + (f(em + omega) - f(en - omega)) * kink(omega + em - en, g);
        let b = 2.0 * (f(em + omega) - f(em)) * kink(omega - en + em, g) + (f(en + omega) - f(em - omega)) * kink(omega + en - em, g);
        acc += w / omega * (a - b);
    }
    Ok(hall_dynamic_pref(params, spectrum) * acc)
}

fn hall_dynamic_pref(params: &ModelParams, spectrum: &LandauSpectrum) -> f64 {
    params.g() / 4.0 * spectrum.hbar_omega_c.powi(2) / (8.0 * PI * spectrum.l_b.powi(2))
}

/// One term of the reduced kink sum for the pair (n, s) ↔ (n + 2, s'):
/// (n+1)/Ω [(f_{E_m} − f_{E_n}) K(Ω − E_m + E_n) − (f_{E_n} − f_{E_m}) K(Ω − E_n + E_m)].
pub fn hall_dynamic_reduced_term(n: usize, s: i8, sp: i8, e_fermi: f64, omega: f64, gamma: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> f64 {
    let f = |x: f64| occupation(x, e_fermi, params.temperature);
    let (en, em) = (spectrum.energy(n, s), spectrum.energy(n + 2, sp));
    let g = gamma.max(GAMMA_FLOOR);
    let v = (f(em) - f(en)) * kink(omega - em + en, g) - (f(en) - f(em)) * kink(omega - en + em, g);
    hall_dynamic_pref(params, spectrum) * (n + 1) as f64 / omega * v
}

/// The reduced kink sum, in which Ω inside the occupations is replaced by
/// the kink center.
pub fn hall_dynamic_reduced(e: f64, omega: f64, params: &ModelParams, spectrum: &LandauSpectrum, broadening: Broadening) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!("frequency must be positive, got {omega}")));
    }
    let g = broadening_width(e, params, spectrum, broadening)?;
    let mut acc = 0.0;
    for n in 0..=spectrum.n_cutoff.saturating_sub(2) {
        for s in [-1i8, 1] {
            for sp in [-1i8, 1] {
                acc += hall_dynamic_reduced_term(n, s, sp, e, omega, g, params, spectrum);
            }
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------- static limit

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaticLimitReport {
    pub energy: f64,
    pub omega: f64,
    pub regime: Regime,
    pub shear_static: f64,
    pub shear_dynamic: f64,
    pub shear_rel_diff: f64,
    pub hall_static: Option<f64>,
    pub hall_dynamic: Option<f64>,
    pub hall_rel_diff: Option<f64>,
}

/// Compares the dynamic viscosities at Ω = 10⁻³ eV with the static ones.
pub fn static_limit_check(e: f64, params: &ModelParams, spectrum: Option<&LandauSpectrum>) -> Result<StaticLimitReport> {
    let omega = 1e-3;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    match spectrum {
        None => {
            let st = kubo_static::shear_b0_numeric(e, params)?.value;
            let dy = shear_dynamic_b0(e, omega, params)?;
            Ok(StaticLimitReport {
                energy: e,
                omega,
                regime: Regime::BZero,
                shear_static: st,
                shear_dynamic: dy,
                shear_rel_diff: rel(dy, st),
                hall_static: None,
                hall_dynamic: None,
                hall_rel_diff: None,
            })
        }
        Some(sp) => {
            let sv = kubo_static::shear_bfield_numeric(e, params, sp)?;
            let dy = shear_dynamic_bfield(e, omega, params, sp, Broadening::SelfConsistent)?;
            let hs = kubo_static::hall_static_numeric(e, params, sp)?.value;
            let hd = hall_dynamic(e, omega, params, sp, Broadening::SelfConsistent)?;
            Ok(StaticLimitReport {
                energy: e,
                omega,
                regime: sv.regime,
                shear_static: sv.value,
                shear_dynamic: dy,
                shear_rel_diff: rel(dy, sv.value),
                hall_static: Some(hs),
                hall_dynamic: Some(hd),
                hall_rel_diff: Some(rel(hd, hs)),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp10() -> LandauSpectrum {
        LandauSpectrum::new(10.0, &ModelParams::default(), 0.5).unwrap()
    }

    #[test]
    fn closed_limits() {
        let p = ModelParams::new(20.0);
        assert!((shear_dynamic_b0_eh_limit(1.0, &p) - 0.0798).abs() < 1e-4);
        assert!((shear_dynamic_b0_eh_limit(2.0, &p) - 4.0 * shear_dynamic_b0_eh_limit(1.0, &p)).abs() < 1e-15);
        let clean = ModelParams::new(1e12);
        assert!((shear_dynamic_b0_eh_limit(1.0, &clean) - 1.0 / (32.0 * 0.6582f64.powi(2))).abs() < 1e-9);
        // 0.26313·(0.49348 + 45/9.40528)
        assert!((shear_dynamic_b0_ee_limit(1.5, 0.1, &p) - 1.38888).abs() < 2e-4);
        let a = shear_dynamic_b0_ee_limit(1.5, 0.1, &p);
        let b = shear_dynamic_b0_ee_limit(1.5, 0.2, &p);
        assert!(b < a);
        let zero = shear_dynamic_b0_ee_limit(1.5, 0.0, &p);
        let expect = 2.25 / (2.0 * PI * PI * 0.6582f64.powi(2)) * (PI * PI / 20.0 + 5.0);
        assert!((zero - expect).abs() < 1e-12);
    }

    /// The closed-form pair integral against brute-force quadrature.
    #[test]
    fn lorentz_product_matches_quadrature() {
        let q = Quad::new(1e-14, 1e-12);
        for (p, qq, g) in [(0.1, 0.3, 0.01), (0.2, 0.2, 0.005), (0.2, 0.2 + 1e-9, 0.005), (-0.4, 0.5, 0.02)] {
            let im = |x: f64| -g / (x * x + g * g);
            let (num, _) = q.run("check", |w| im(w - p) * im(w - qq), -0.3, 0.6, &[p, qq]).unwrap();
            let cf = lorentz_product_integral(-0.3, 0.6, p, qq, g);
            assert!((num - cf).abs() < 1e-9 * num.abs(), "{p} {qq}: {num} vs {cf}");
        }
    }

    #[test]
    fn negative_frequency_symmetric() {
        let p = ModelParams::new(100.0);
        let sp = sp10();
        let b = Broadening::Constant(sp.hbar_omega_c / 50.0);
        let a = shear_dynamic_bfield(0.05, 0.16, &p, &sp, b).unwrap();
        let m = shear_dynamic_bfield(0.05, -0.16, &p, &sp, b).unwrap();
        assert_eq!(a, m);
    }

    #[test]
    fn constant_width_closed_form_matches_quadrature_path() {
        let p = ModelParams { temperature: 1e-9, ..ModelParams::new(100.0) };
        let sp = sp10();
        let b = Broadening::Constant(0.01);
        let cf = shear_dynamic_bfield(0.13, 0.2, &ModelParams::new(100.0), &sp, b).unwrap();
        let qd = shear_dynamic_bfield(0.13, 0.2, &p, &sp, b).unwrap();
        assert!((cf / qd - 1.0).abs() < 1e-4, "{cf} {qd}");
    }

    #[test]
    fn transition_examples() {
        let sp = sp10();
        let t = transition_table(0.05, &sp, 0.4).unwrap();
        let has = |t: &[Transition], from: (u32, i8), to: (u32, i8), f: f64| {
            t.iter().any(|x| (x.from.n, x.from.s) == from && (x.to.n, x.to.s) == to && (x.frequency - f).abs() < 1e-3)
        };
        assert!(has(&t, (0, 1), (2, 1), 0.1623));
        assert!(has(&t, (1, -1), (3, 1), 0.3134));
        assert!(has(&t, (3, -1), (1, 1), 0.3134));
        assert!(t.windows(2).all(|w| w[0].frequency <= w[1].frequency));
        assert!(t.iter().all(|x| x.from.n.abs_diff(x.to.n) == 2));
        let t13 = transition_table(0.13, &sp, 0.4).unwrap();
        assert!(has(&t13, (1, 1), (3, 1), 0.0840));
        assert_eq!(t13.iter().find(|x| x.from.s == 1 && x.from.n == 1).unwrap().kind, TransitionKind::ElectronElectron);
        assert!(!has(&t13, (3, -1), (1, 1), 0.3134));
        assert!(transition_table(100.0, &sp, 0.4).unwrap().is_empty());
    }

    #[test]
    fn hall_small_frequency_plateaus() {
        let p = ModelParams::default();
        let sp = sp10();
        let u = 1.0 / (4.0 * PI * sp.l_b.powi(2));
        let b = Broadening::Constant(sp.hbar_omega_c / 50.0);
        let v0 = hall_dynamic(0.05, 0.002, &p, &sp, b).unwrap() / u;
        let v1 = hall_dynamic(0.13, 0.002, &p, &sp, b).unwrap() / u;
        assert!((v0 - 1.0).abs() < 0.01, "{v0}");
        assert!((v1 - 5.0).abs() < 0.05, "{v1}");
        let m = hall_dynamic(-0.13, 0.002, &p, &sp, b).unwrap() / u;
        assert!((m + v1).abs() < 1e-9);
    }

    #[test]
    fn counterpart_terms_cancel() {
        let p = ModelParams::default();
        let sp = sp10();
        let g = sp.hbar_omega_c / 50.0;
        for n in 1..6 {
            for om in [0.1, 0.16, 0.3] {
                let a = hall_dynamic_reduced_term(n, -1, 1, 0.05, om, g, &p, &sp);
                let b = hall_dynamic_reduced_term(n, 1, -1, 0.05, om, g, &p, &sp);
                assert!((a + b).abs() <= 1e-12 * a.abs().max(1e-30));
            }
        }
    }

    #[test]
    fn occupation_step() {
        assert_eq!(occupation(0.1, 0.1, 0.0), 0.5);
        assert_eq!(occupation(0.0, 0.1, 0.0), 1.0);
        assert!((occupation(0.1, 0.1, 0.01) - 0.5).abs() < 1e-15);
        assert!(occupation(10.0, 0.0, 0.01) < 1e-300);
    }
}
