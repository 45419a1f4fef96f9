use num_complex::Complex64;
use proptest::prelude::*;

use dirac_visc::kubo_dynamic::{self as kd, Broadening};
use dirac_visc::kubo_static as ks;
use dirac_visc::model::{self, stress_kspace, StressComponent};
use dirac_visc::scba;
use dirac_visc::sweep::{run_sweep, Quantity, SweepSpec};
use dirac_visc::{LandauSpectrum, ModelParams};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn b0_shear_is_even_and_positive(e in 0.0f64..2.5, a in 5.0f64..60.0) {
        let p = ModelParams::new(a);
        let plus = ks::shear_b0_numeric(e, &p).unwrap().value;
        let minus = ks::shear_b0_numeric(-e, &p).unwrap().value;
        prop_assert!(plus > 0.0);
        prop_assert!(rel(plus, minus) < 1e-10);
    }

    #[test]
    fn landau_shear_even_hall_odd(e in 0.01f64..0.5, b in 2.0f64..12.0, a in 20.0f64..200.0) {
        let p = ModelParams::new(a);
        let sp = LandauSpectrum::new(b, &p, e).unwrap();
        let s1 = ks::shear_bfield_numeric(e, &p, &sp).unwrap().value;
        let s2 = ks::shear_bfield_numeric(-e, &p, &sp).unwrap().value;
        prop_assert!(s1 > -1e-12 && (s1 - s2).abs() <= 1e-9 * s1.abs().max(1e-6));
        let h1 = ks::hall_static_numeric(e, &p, &sp).unwrap().value;
        let h2 = ks::hall_static_numeric(-e, &p, &sp).unwrap().value;
        prop_assert!(h1 > 0.0);
        prop_assert!(rel(h1, -h2) < 1e-8);
    }

    #[test]
    fn scba_solution_is_a_fixed_point(e in -3.0f64..3.0, a in 3.0f64..100.0) {
        let p = ModelParams::new(a);
        let s = scba::solve_self_energy_b0(e, &p).unwrap();
        prop_assert!(s.converged);
        prop_assert!(s.sigma.im < 0.0);
        let back = scba::scba_map_b0(e, s.sigma, &p);
        prop_assert!((back - s.sigma).norm() <= 1e-9 * s.sigma.norm().max(1e-12));
    }

    #[test]
    fn magnetic_length_scales_as_inverse_root_b(b in 0.05f64..40.0, k in 1.5f64..9.0) {
        let l1 = model::magnetic_length(b).unwrap();
        let l2 = model::magnetic_length(k * b).unwrap();
        prop_assert!(rel(l1 / l2, k.sqrt()) < 1e-12);
        let w1 = model::cyclotron_energy(b, 0.6582).unwrap();
        let w2 = model::cyclotron_energy(k * b, 0.6582).unwrap();
        prop_assert!(rel(w2 / w1, k.sqrt()) < 1e-12);
    }

    #[test]
    fn kspace_stress_eigenvalues(k in 0.01f64..10.0, theta in 0.0f64..6.3) {
        let hv = 0.6582;
        let xy = stress_kspace(k, theta, StressComponent::Xy, hv);
        let d = stress_kspace(k, theta, StressComponent::XxMinusYy, hv);
        for (m, half) in [(xy, 0.5 * hv * k), (d, hv * k)] {
            prop_assert!((m - m.adjoint()).norm() < 1e-12 * half);
            prop_assert!((m.trace()).norm() < 1e-12 * half);
            // Traceless Hermitian 2x2: eigenvalues ±√(−det).
            let ev = (-m.determinant().re).sqrt();
            prop_assert!(rel(ev, half) < 1e-12);
        }
    }

    #[test]
    fn dynamic_shear_is_even_in_omega(e in 0.0f64..2.0, omega in 0.05f64..1.5, a in 8.0f64..40.0) {
        let p = ModelParams::new(a);
        let plus = kd::shear_dynamic_b0(e, omega, &p).unwrap();
        let minus = kd::shear_dynamic_b0(e, -omega, &p).unwrap();
        prop_assert!(plus > 0.0);
        prop_assert!(rel(plus, minus) < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// ρ = −(g/π)·Im ∫ d²k/(2π)² Tr G(k), integrated directly over ε = ħv_f k.
    #[test]
    fn dos_matches_trace_of_green_function(e in 0.1f64..2.0, a in 4.0f64..15.0) {
        let p = ModelParams::new(a);
        let s = scba::solve_self_energy_b0(e, &p).unwrap().sigma;
        let z = Complex64::new(e, 0.0) - s;
        let hv2 = p.hbar_vf * p.hbar_vf;
        let n = 200_000;
        let h = p.cutoff_ec / n as f64;
        let f = |x: f64| (2.0 * z * x / (z * z - x * x)).im;
        let mut sum = f(0.0) + f(p.cutoff_ec);
        for i in 1..n {
            sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        let trace = sum * h / 3.0 / (2.0 * std::f64::consts::PI * hv2);
        let direct = -p.g() / std::f64::consts::PI * trace;
        let got = scba::dos(e, s, &p, None).unwrap();
        prop_assert!(rel(got, direct) < 1e-6, "dos {got} vs trace {direct}");
    }

    /// Every shear resonance comes from a listed transition and every listed
    /// transition produces a resonance. E_F stays in the middle of a gap: a
    /// partly filled Lorentzian tail adds Fermi-edge features that are not lines.
    #[test]
    fn shear_peaks_match_transition_table(gap in 0usize..3, frac in 0.35f64..0.65) {
        let p = ModelParams::new(500.0);
        let sp = LandauSpectrum::new(10.0, &p, 0.6).unwrap();
        let e_fermi = sp.energy(gap, 1) + frac * (sp.energy(gap + 1, 1) - sp.energy(gap, 1));
        let g = sp.hbar_omega_c / 50.0;
        let om_max = 0.4;
        let table = kd::transition_table(e_fermi, &sp, om_max).unwrap();
        // Lines closer than 4Γ are not resolved separately.
        let mut clusters: Vec<(f64, f64)> = Vec::new();
        for f in table.iter().map(|t| t.frequency).filter(|&f| f < om_max - 5.0 * g) {
            match clusters.last_mut() {
                Some(c) if f - c.1 < 4.0 * g => c.1 = f,
                _ => clusters.push((f, f)),
            }
        }
        let grid: Vec<f64> = (0..=800).map(|i| 0.02 + (om_max - 0.02) * i as f64 / 800.0).collect();
        let y: Vec<f64> = grid.iter().map(|&o| kd::shear_dynamic_bfield(e_fermi, o, &p, &sp, Broadening::Constant(g)).unwrap()).collect();
        let top = y.iter().cloned().fold(0.0, f64::max);
        // A line dips by 10% within 6Γ on both sides; edge ripples are shallower.
        let step = grid[1] - grid[0];
        let w = (6.0 * g / step).ceil() as usize;
        let prominent = |i: usize| {
            let left = y[i.saturating_sub(w)..i].iter().cloned().fold(f64::INFINITY, f64::min);
            let right = y[i + 1..(i + w + 1).min(y.len())].iter().cloned().fold(f64::INFINITY, f64::min);
            left.max(right) < 0.9 * y[i]
        };
        let peaks: Vec<f64> = (1..y.len() - 1)
            .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > 0.02 * top && prominent(i))
            .map(|i| grid[i])
            .filter(|&x| x < om_max - 5.0 * g)
            .collect();
        for x in &peaks {
            prop_assert!(clusters.iter().any(|c| *x >= c.0 - g && *x <= c.1 + g), "peak at {x} not in {clusters:?}");
        }
        for c in clusters.iter().filter(|c| c.0 > 0.02 + g) {
            prop_assert!(peaks.iter().any(|x| *x >= c.0 - g && *x <= c.1 + g), "lines {c:?} have no peak in {peaks:?}");
        }
    }

    #[test]
    fn sweep_header_round_trips(a in 5.0f64..50.0, n in 2usize..6, lo in -1.0f64..0.0) {
        let mut spec = SweepSpec::new(Quantity::StaticShear);
        (spec.e_start, spec.e_stop, spec.e_count) = (Some(lo), Some(lo + 1.0), Some(n));
        spec.a_values = vec![a];
        let r = run_sweep(&spec).unwrap();
        prop_assert_eq!(r.rows.len(), n);
        let back = SweepSpec::from_json(&r.header.config.to_json()).unwrap();
        prop_assert_eq!(back, r.header.config);
    }
}
