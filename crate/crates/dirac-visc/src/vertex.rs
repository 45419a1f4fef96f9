//! First-order ladder correction to the stress vertex.
//!
//! For short-range disorder the dressed vertex equals the bare one: the
//! first rung of the Bethe–Salpeter ladder integrates to zero. Both checks
//! below evaluate that rung explicitly and report its size relative to the
//! bare vertex.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{stress_element_xy, stress_kspace, LandauSpectrum, ModelParams, State, StressComponent};
use crate::quad::Quad;
use crate::scba;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Momentum,
    Landau,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexReport {
    pub basis: Basis,
    /// Frobenius norm of the bare vertex, eV.
    pub norm_bare: f64,
    /// Frobenius norm of the first-order correction, eV.
    pub norm_correction: f64,
    pub ratio: f64,
}

impl VertexReport {
    fn new(basis: Basis, norm_bare: f64, norm_correction: f64) -> Self {
        let ratio = if norm_bare > 0.0 { norm_correction / norm_bare } else { 0.0 };
        Self { basis, norm_bare, norm_correction, ratio }
    }
}

type M2 = Matrix2<Complex64>;

/// U_k†U_k' for Δθ = θ' − θ.
fn rotation(dtheta: f64) -> M2 {
    let e = Complex64::from_polar(1.0, dtheta);
    let one = Complex64::new(1.0, 0.0);
    (M2::new(one + e, one - e, one - e, one + e)) * Complex64::new(0.5, 0.0)
}

fn frobenius(m: &M2) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Angular average over θ' of U_k†U_k' G^R T(k', θ') G^A U_k'†U_k, by the
/// trapezoid rule on `nodes` equispaced points.
fn angular_average<F: Fn(f64, f64) -> M2>(vertex: &F, theta_k: f64, kp: f64, z: Complex64, hbar_vf: f64, nodes: usize) -> M2 {
    let e = hbar_vf * kp;
    let zero = Complex64::new(0.0, 0.0);
    let gr = M2::new(1.0 / (z - e), zero, zero, 1.0 / (z + e));
    let ga = M2::new(1.0 / (z.conj() - e), zero, zero, 1.0 / (z.conj() + e));
    let mut acc = M2::zeros();
    for j in 0..nodes {
        let tp = 2.0 * PI * j as f64 / nodes as f64;
        let u = rotation(tp - theta_k);
        acc += u * gr * vertex(kp, tp) * ga * u.adjoint();
    }
    acc / Complex64::new(nodes as f64, 0.0)
}

/// First rung for an arbitrary band-basis vertex; `vertex(k, θ)` in eV.
fn first_order_b0<F: Fn(f64, f64) -> M2>(vertex: F, e: f64, params: &ModelParams, nodes: usize) -> Result<(M2, M2)> {
    if nodes < 8 {
        return Err(Error::domain(format!("angular_nodes must be at least 8, got {nodes}")));
    }
    params.validate()?;
    let sol = scba::solve_self_energy_b0(e, params)?;
    let z = e - sol.sigma;
    let hv = params.hbar_vf;
    let k = e.abs().max(0.1) / hv;
    let theta_k = 0.3;
    let bare = vertex(k, theta_k);
    // n_i V₀² = 4π(ħv_f)²/A, and d²k'/(2π)² = k'dk'/(2π) × angular mean.
    let strength = 4.0 * PI * hv * hv / params.disorder_a;
    let kc = params.cutoff_ec / hv;
    let scale = frobenius(&bare).max(f64::MIN_POSITIVE);
    let q = Quad::new(1e-12 * scale, 1e-8);
    let points = [e.abs() / hv];
    let mut out = M2::zeros();
    for idx in 0..4 {
        let (r, c) = (idx / 2, idx % 2);
        let f = |kp: f64| angular_average(&vertex, theta_k, kp, z, hv, nodes)[(r, c)] * (strength * kp / (2.0 * PI));
        out[(r, c)] = q.run_complex("vertex rung", f, 0.0, kc, &points)?.0;
    }
    Ok((bare, out))
}

/// First-order vertex correction at B = 0 in the chiral (k, s) basis.
pub fn vertex_correction_b0(e: f64, params: &ModelParams, angular_nodes: usize) -> Result<VertexReport> {
    let hv = params.hbar_vf;
    let (bare, corr) = first_order_b0(|k, t| stress_kspace(k, t, StressComponent::Xy, hv), e, params, angular_nodes)?;
    Ok(VertexReport::new(Basis::Momentum, frobenius(&bare), frobenius(&corr)))
}

/// First-order vertex correction in the Landau basis.
///
/// Short-range scattering couples ⟨n|…|n'⟩ only to inner pairs with
/// n'' − n''' ∈ {0, ±1}, while T_xy connects |Δn| = 2. The inner sums are
/// assembled term by term anyway, so the zero is a computed result.
pub fn vertex_correction_landau(e: f64, params: &ModelParams, spectrum: &LandauSpectrum) -> Result<VertexReport> {
    params.validate()?;
    let sigma = scba::solve_self_energy_landau(e, params, spectrum)?.sigma;
    let g = |l: &crate::model::Level| 1.0 / (e - l.energy - sigma);
    let ga = |l: &crate::model::Level| 1.0 / (e - l.energy - sigma.conj());
    let st = |l: &crate::model::Level| State::new(l.n, l.s);
    let sg = |s: i8| if s < 0 { -1.0 } else { 1.0 };
    let lv = &spectrum.levels;
    let zero = Complex64::new(0.0, 0.0);

    // diag[p][q]: Σ (s s' s'' s''' + 1) G Ḡ T over n'' = n''' with external
    // sign product p·q; up/down: shifted bands weighted by s'' resp. s'''.
    let mut diag = [zero; 2];
    let mut up = zero;
    let mut down = zero;
    let nc = spectrum.n_cutoff as i64;
    for a in lv {
        let near = (a.n as i64 - 1).max(0)..=(a.n as i64 + 1).min(nc);
        for b in near.flat_map(|m| [-1i8, 1].map(|s| (m, s))).filter(|&(m, s)| m > 0 || s > 0) {
            let b = &lv[spectrum.index(b.0 as usize, b.1)];
            let dn = a.n as i64 - b.n as i64;
            let t = g(a) * stress_element_xy(st(a), st(b), spectrum) * ga(b);
            match dn {
                0 => {
                    let inner = sg(a.s) * sg(b.s);
                    diag[0] += t * (1.0 - inner);
                    diag[1] += t * (1.0 + inner);
                }
                1 => up += t * sg(a.s),
                _ => down += t * sg(b.s),
            }
        }
    }

    // Active window: every state up to a few levels above |E|.
    let w = spectrum.hbar_omega_c;
    let n_w = (((e.abs() / w).powi(2)).ceil() as usize + 4).min(spectrum.n_cutoff);
    let ext: Vec<&crate::model::Level> = lv.iter().filter(|l| (l.n as usize) <= n_w).collect();
    let pref = w * w / (4.0 * params.disorder_a);
    let (mut bare2, mut corr2) = (0.0, 0.0);
    for a in &ext {
        for b in &ext {
            bare2 += stress_element_xy(st(a), st(b), spectrum).norm_sqr();
            let mut v = zero;
            if a.n == b.n {
                v += diag[usize::from(a.s * b.s > 0)];
            }
            if a.n == b.n + 1 {
                v += up * sg(a.s);
            }
            if a.n + 1 == b.n {
                v += down * sg(b.s);
            }
            corr2 += (v * pref).norm_sqr();
        }
    }
    Ok(VertexReport::new(Basis::Landau, bare2.sqrt(), corr2.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn momentum_rung_vanishes() {
        let p = ModelParams::new(20.0);
        let r = vertex_correction_b0(1.0, &p, 64).unwrap();
        assert!(r.norm_bare > 0.1);
        assert!(r.ratio <= 1e-8, "{r:?}");
        let r2 = vertex_correction_b0(1.0, &p, 128).unwrap();
        assert!(r2.ratio <= 1e-8);
    }

    #[test]
    fn scalar_vertex_is_not_cancelled() {
        // Control: an isotropic vertex survives the same rung.
        let p = ModelParams::new(20.0);
        let one = Complex64::new(1.0, 0.0);
        let (_, corr) = first_order_b0(|_, _| M2::new(one, one * 0.0, one * 0.0, one), 1.0, &p, 32).unwrap();
        assert!(frobenius(&corr) > 1e-3, "{corr}");
    }

    #[test]
    fn landau_rung_is_structural_zero() {
        let p = ModelParams::new(50.0);
        let sp = LandauSpectrum::with_cap(10.0, &p, 0.3, 400).unwrap();
        let r = vertex_correction_landau(0.2, &p, &sp).unwrap();
        assert!(r.norm_bare > 0.0);
        assert_eq!(r.norm_correction, 0.0);
        assert_eq!(r.ratio, 0.0);
    }

    #[test]
    fn too_few_nodes_rejected() {
        assert!(vertex_correction_b0(1.0, &ModelParams::default(), 4).is_err());
    }
}
