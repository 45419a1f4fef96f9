//! Oracle-equivalence suite: numeric paths against independent closed forms.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::Result;
use crate::kubo_dynamic;
use crate::kubo_static;
use crate::model::{LandauSpectrum, ModelParams, SelfEnergyModel};
use crate::scba;
use crate::vertex;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    /// |computed − expected| / |expected|, or the absolute value when expected is 0.
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleCheck {
    fn new(name: &str, computed: f64, expected: f64, tolerance: f64) -> Self {
        let error = if expected == 0.0 { computed.abs() } else { (computed / expected - 1.0).abs() };
        Self { name: name.to_string(), computed, expected, error, tolerance, pass: error <= tolerance }
    }

    fn failed(name: &str, expected: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), computed: f64::NAN, expected, error: f64::INFINITY, tolerance, pass: false }
    }
}

fn check(name: &str, computed: Result<f64>, expected: f64, tolerance: f64) -> OracleCheck {
    match computed {
        Ok(v) => OracleCheck::new(name, v, expected, tolerance),
        Err(_) => OracleCheck::failed(name, expected, tolerance),
    }
}

/// Runs every oracle comparison. Takes a few seconds.
pub fn oracle_suite() -> Vec<OracleCheck> {
    let mut out = Vec::new();
    let ec = crate::model::DEFAULT_CUTOFF_EC;

    // At E = 0 the SCBA gap equation gives Γ = E_c/√(e^A − 1).
    for a in [5.0, 20.0] {
        let p = ModelParams::new(a);
        let expected = ec / (a.exp() - 1.0).sqrt();
        let got = scba::solve_self_energy_b0(0.0, &p).map(|s| s.gamma());
        out.push(check(&format!("scba gamma at E=0, A={a}"), got, expected, 1e-8));
    }

    // Elementary radial integrals at E = 0.
    {
        let p = ModelParams::new(10.0);
        let gm = ec / (10f64.exp() - 1.0).sqrt();
        let (g2, ec2) = (gm * gm, ec * ec);
        let ra = p.g() / 16.0 * g2 / (PI * PI * p.hbar_vf.powi(2)) * ((1.0 + ec2 / g2).ln() + g2 / (g2 + ec2) - 1.0);
        let got = kubo_static::shear_b0_numeric(0.0, &p).map(|v| v.value);
        out.push(check("static shear at E=0, A=10", got, 2.0 * ra, 1e-6));
    }

    // Weak-disorder closed form away from the Dirac point.
    {
        let p = ModelParams::new(20.0).with_self_energy(SelfEnergyModel::ImaginaryOnly);
        let got = kubo_static::shear_b0_numeric(1.5, &p).map(|v| v.value);
        out.push(check("static shear at E=1.5, A=20", got, kubo_static::shear_b0_analytic(1.5, &p), 0.07));
    }

    // Clean-limit Landau quantization: lowest level center and gap.
    let p500 = ModelParams::new(500.0).with_self_energy(SelfEnergyModel::ImaginaryOnly);
    match LandauSpectrum::new(10.0, &p500, 0.5) {
        Ok(sp) => {
            let shear_unit = 1.0 / (2.0 * PI * PI * sp.l_b.powi(2));
            let hall_unit = 1.0 / (4.0 * PI * sp.l_b.powi(2));
            let got = kubo_static::shear_bfield_numeric(0.0, &p500, &sp).map(|v| v.value);
            out.push(check("shear at N=0 level center, B=10 T", got, shear_unit, 0.05));
            let w = sp.hbar_omega_c;
            let got = kubo_static::hall_static_numeric(w / 2.0, &ModelParams::new(500.0), &sp).map(|v| v.value);
            out.push(check("Hall plateau in N=0 gap, B=10 T", got, hall_unit, 0.02));
            let e1 = w * (1.0 + 2f64.sqrt()) / 2.0;
            let got = kubo_static::hall_static_numeric(e1, &ModelParams::new(500.0), &sp).map(|v| v.value);
            out.push(check("Hall plateau in N=1 gap, B=10 T", got, 5.0 * hall_unit, 0.02));
            let got = vertex::vertex_correction_landau(0.2, &p500, &sp).map(|r| r.ratio);
            out.push(check("vertex rung, Landau basis", got, 0.0, 0.0));
        }
        Err(_) => out.push(OracleCheck::failed("Landau spectrum at B=10 T", 0.0, 0.0)),
    }

    // Low-frequency limit of the dynamic shear.
    {
        let p = ModelParams::new(20.0);
        let stat = kubo_static::shear_b0_numeric(1.5, &p).map(|v| v.value).unwrap_or(f64::NAN);
        let got = kubo_dynamic::shear_dynamic_b0(1.5, 1e-3, &p);
        out.push(check("dynamic shear at Omega=1e-3, E=1.5", got, stat, 0.05));
    }

    {
        let p = ModelParams::new(20.0);
        let got = vertex::vertex_correction_b0(1.0, &p, 64).map(|r| r.ratio);
        out.push(check("vertex rung, momentum basis", got, 0.0, 1e-8));
    }

    out
}

/// Fixed-width pass/fail table.
pub fn format_table(checks: &[OracleCheck]) -> String {
    let mut s = format!("{:<42} {:>13} {:>13} {:>10} {:>9}  result\n", "check", "computed", "expected", "error", "tol");
    for c in checks {
        s += &format!(
            "{:<42} {:>13.6e} {:>13.6e} {:>10.2e} {:>9.1e}  {}\n",
            c.name,
            c.computed,
            c.expected,
            c.error,
            c.tolerance,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    s
}
