//! Shared oracles and fixtures for the integration and acceptance
//! suites. The oracles are deliberately independent of the library's
//! evaluation paths: Bessel functions come from a quadrature of the
//! integral representation, azimuthal averages from Simpson's rule,
//! and kinematic roots from bisection.

#![allow(dead_code)]

use vmi_core::catalog::{BeamConfig, Catalog};
use vmi_core::decoherence::DecoherenceModel;
use vmi_core::formfactor::FormFactorModel;
use vmi_core::photoproduction::ProductionModel;
use vmi_core::sigma::{GammaACrossSection, SigmaParams};
use vmi_core::spectrum::SpectrumEngine;

/// K_nu(x) via Simpson quadrature of
/// integral_0^inf exp(-x cosh t) cosh(nu t) dt.
pub fn bessel_k_oracle(nu: u32, x: f64) -> f64 {
    assert!(x > 0.0);
    // truncate where the integrand falls 1e-30 below its t = 0 value
    let t_max = ((x + 70.0) / x).acosh();
    let n = 60_000; // even
    let h = t_max / n as f64;
    let f = |t: f64| (-x * t.cosh()).exp() * (nu as f64 * t).cosh();
    let mut sum = f(0.0) + f(t_max);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(i as f64 * h);
    }
    sum * h / 3.0
}

/// Average of f(phi) over [0, 2pi) by Simpson with Richardson
/// refinement to ~1e-12 relative.
pub fn phi_average<F: Fn(f64) -> f64>(f: F) -> f64 {
    let simpson = |n: usize| {
        let h = std::f64::consts::TAU / n as f64;
        let mut sum = f(0.0) + f(std::f64::consts::TAU);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(i as f64 * h);
        }
        sum * h / 3.0 / std::f64::consts::TAU
    };
    let mut prev = simpson(64);
    for k in [128usize, 256, 512, 1024, 2048, 4096] {
        let cur = simpson(k);
        if (cur - prev).abs() <= 1e-12 * cur.abs().max(1e-30) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Two-body rest-frame momentum by bisection on energy conservation
/// sqrt(p² + m1²) + sqrt(p² + m2²) = m.
pub fn two_body_momentum_bisect(m: f64, m1: f64, m2: f64) -> f64 {
    let energy = |p: f64| (p * p + m1 * m1).sqrt() + (p * p + m2 * m2).sqrt();
    let (mut lo, mut hi) = (0.0, m);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if energy(mid) < m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First positive root of tan x = x by bisection inside (pi, 3pi/2).
pub fn tan_x_equals_x_root() -> f64 {
    // g(x) = sin x - x cos x shares the root and is continuous there
    let g = |x: f64| x.sin() - x * x.cos();
    let (mut lo, mut hi) = (std::f64::consts::PI, 1.5 * std::f64::consts::PI);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(lo) * g(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn production(
    nucleus: &str,
    sqrt_s: f64,
    meson: &str,
    b_max: Option<f64>,
) -> ProductionModel {
    let cat = Catalog::builtin();
    let nuc = cat.nucleus(nucleus).unwrap();
    let mes = cat.meson(meson).unwrap().clone();
    let beams = BeamConfig::new(nuc, sqrt_s, None, b_max, &mes).unwrap();
    let ff = FormFactorModel::hard_sphere_yukawa(&beams.nucleus);
    let xs = GammaACrossSection::new(&mes, beams.nucleus.a, SigmaParams::defaults_for(&mes));
    ProductionModel {
        beams,
        meson: mes,
        form_factor: ff,
        cross_section: xs,
        delta_rad: 0.0,
    }
}

pub fn rhic_rho(model: DecoherenceModel) -> SpectrumEngine {
    SpectrumEngine::new(production("au", 200.0, "rho0", None), model)
}

pub fn rhic_jpsi(model: DecoherenceModel) -> SpectrumEngine {
    SpectrumEngine::new(production("au", 200.0, "jpsi", None), model)
}

pub fn lhc_rho(model: DecoherenceModel) -> SpectrumEngine {
    SpectrumEngine::new(production("pb", 5500.0, "rho0", None), model)
}

pub fn lhc_jpsi(model: DecoherenceModel) -> SpectrumEngine {
    SpectrumEngine::new(production("pb", 5500.0, "jpsi", None), model)
}
