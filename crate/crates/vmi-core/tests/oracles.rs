//! Oracle-equivalence tests: every derived number asserted here is
//! computed by an independent route (quadrature of integral
//! representations, bisection, or direct formula evaluation in test
//! code) before being compared to the library.

mod common;

use common::*;
use vmi_core::catalog::Catalog;
use vmi_core::constants::{C_LIGHT, HBAR_C, NUCLEON_MASS_GEV};
use vmi_core::decoherence::DecoherenceModel;
use vmi_core::flux::flux_density;
use vmi_core::generator::{two_body_momentum, EventGenerator, GeneratorConfig};
use vmi_core::kinematics::{decay_distance, lorentz_gamma, photon_energies_for_rapidity};
use vmi_core::special::{bessel_k0, bessel_k1};
use vmi_core::spectrum::{GridSpec, SpectrumEngine};
use vmi_core::stats;

#[test]
fn bessel_k_matches_integral_representation_to_1e9() {
    // the production split is at x = 2; probe both sides and far tails
    let xs = [0.05, 0.2, 0.7, 1.3, 1.9, 1.999, 2.0, 2.001, 2.6, 4.0, 9.0, 17.0, 40.0];
    for &x in &xs {
        let k0 = bessel_k0(x);
        let k1 = bessel_k1(x);
        let o0 = bessel_k_oracle(0, x);
        let o1 = bessel_k_oracle(1, x);
        assert!(
            ((k0 - o0) / o0).abs() < 1e-9,
            "K0({x}): {k0} vs oracle {o0}"
        );
        assert!(
            ((k1 - o1) / o1).abs() < 1e-9,
            "K1({x}): {k1} vs oracle {o1}"
        );
    }
}

#[test]
fn lorentz_gamma_direct_evaluations() {
    let g_rhic = lorentz_gamma(200.0, NUCLEON_MASS_GEV).unwrap();
    assert!((g_rhic - 200.0 / (2.0 * 0.9315)).abs() < 1e-12);
    assert!((g_rhic - 107.4).abs() < 0.1);
    let g_lhc = lorentz_gamma(5500.0, NUCLEON_MASS_GEV).unwrap();
    assert!((g_lhc - 2952.0).abs() < 1.0);
}

#[test]
fn decay_distances_against_formula() {
    let cat = Catalog::builtin();
    let au = cat.nucleus("au").unwrap();
    let rho = cat.meson("rho0").unwrap();
    let jpsi = cat.meson("jpsi").unwrap();
    // independent evaluation with literal constants
    let d_rho: f64 = 2.0 * 197.3269804 / (7.0 * 775.26) * (4.0e-24 * 2.99792458e23);
    let d_jpsi: f64 = 2.0 * 197.3269804 / (7.0 * 3096.9) * (7.5e-21 * 2.99792458e23);
    assert!((d_rho - 0.0872).abs() < 5e-4);
    assert!((d_jpsi - 40.93).abs() < 0.05);
    assert!((decay_distance(rho, au) - d_rho).abs() < 1e-12);
    assert!((decay_distance(jpsi, au) - d_jpsi).abs() < 1e-12);
}

#[test]
fn photon_energy_direct_evaluation() {
    let (k1, k2) = photon_energies_for_rapidity(1.0, 775.26);
    assert!((k1 - 0.5 * 775.26 * 1.0f64.exp()).abs() < 1e-9);
    assert!((k2 - 0.5 * 775.26 * (-1.0f64).exp()).abs() < 1e-9);
    assert!((k1 - 1053.7).abs() < 0.1);
    assert!((k2 - 142.6).abs() < 0.1);
}

#[test]
fn flux_point_against_bessel_oracle_to_six_digits() {
    let cat = Catalog::builtin();
    let mut au = cat.nucleus("au").unwrap().clone();
    au.gamma_beam = lorentz_gamma(200.0, NUCLEON_MASS_GEV).unwrap();
    let (k, b) = (387.63, 40.0);
    let n = flux_density(k, b, &au).unwrap();
    // independent evaluation from the integral-representation oracle
    let x = k * b / (au.gamma_beam * HBAR_C);
    let alpha = 1.0 / 137.035999;
    let pre = 79.0f64 * 79.0 * alpha / (std::f64::consts::PI * std::f64::consts::PI);
    let oracle = pre * x * x / (k * b * b)
        * (bessel_k_oracle(1, x).powi(2)
            + bessel_k_oracle(0, x).powi(2) / (au.gamma_beam * au.gamma_beam));
    assert!(
        ((n - oracle) / oracle).abs() < 1e-6,
        "flux {n} vs oracle {oracle}"
    );
}

#[test]
fn form_factor_first_zero_from_bisection() {
    let root = tan_x_equals_x_root();
    assert!((root - 4.4934).abs() < 1e-3);
    // the hard-sphere factor vanishes at q R_A / hbar c = root
    let engine = rhic_rho(DecoherenceModel::FullCoherence);
    let q_zero = root * HBAR_C / 7.0;
    let f = engine.production.form_factor.eval(q_zero);
    let step = engine.production.form_factor.eval(q_zero - 1.0);
    assert!(f.abs() < 1e-6, "F at first zero: {f}");
    assert!(step > 0.0);
}

#[test]
fn amplitude_ratio_dual_route() {
    // |c|(y=1, b=40) recomputed from oracle Bessels and the sigma
    // parameterization; also the reciprocal-pair value at y = -1
    let engine = rhic_rho(DecoherenceModel::FullCoherence);
    let prod = &engine.production;
    let gamma = prod.beams.gamma();
    let (k1, k2) = photon_energies_for_rapidity(1.0, prod.meson.mass_mev);
    let b = 40.0;
    let oracle_weight = |k: f64| {
        let x = k * b / (gamma * HBAR_C);
        let alpha = 1.0 / 137.035999;
        let pre = 79.0f64 * 79.0 * alpha / (std::f64::consts::PI * std::f64::consts::PI);
        let n = pre * x * x / (k * b * b)
            * (bessel_k_oracle(1, x).powi(2) + bessel_k_oracle(0, x).powi(2) / (gamma * gamma));
        n * prod.cross_section.eval(k, gamma)
    };
    let oracle_c = (oracle_weight(k2) / oracle_weight(k1)).sqrt();
    let (mag, _) = prod.amplitude_ratio_c(1.0, b).unwrap();
    assert!(
        ((mag - oracle_c) / oracle_c).abs() < 1e-8,
        "|c| {mag} vs oracle {oracle_c}"
    );
    // frozen oracle value: the softer-photon source dominates at y = +1
    assert!((oracle_c - 9.0).abs() < 0.5, "oracle |c| = {oracle_c}");
    let (mag_neg, _) = prod.amplitude_ratio_c(-1.0, b).unwrap();
    assert!((mag * mag_neg - 1.0).abs() < 1e-10);
}

#[test]
fn two_body_momentum_bisection_oracle() {
    let oracle = two_body_momentum_bisect(775.26, 139.57039, 139.57039);
    assert!((oracle - 361.63).abs() < 0.01, "oracle p* = {oracle}");
    let lib = two_body_momentum(775.26, 139.57039, 139.57039);
    assert!((lib - oracle).abs() < 1e-9);
    // asymmetric masses
    let o2 = two_body_momentum_bisect(1019.461, 493.677, 497.611);
    let l2 = two_body_momentum(1019.461, 493.677, 497.611);
    assert!((l2 - o2).abs() < 1e-9);
}

#[test]
fn eta_closed_form_evaluations() {
    let cat = Catalog::builtin();
    let rho = cat.meson("rho0").unwrap();
    let jpsi = cat.meson("jpsi").unwrap();
    // rho at b = 40, omega ~ M: exponent b/(c tau) = 40/1.1992 = 33.36
    let exponent = 40.0 / (4.0e-24 * C_LIGHT);
    assert!((exponent - 33.36).abs() < 0.02);
    let eta_rho = DecoherenceModel::SurvivalLightSpeed.eta(40.0, rho, rho.mass_mev, 0.0);
    assert!((eta_rho - (1.0 - (-exponent).exp())).abs() < 1e-12);
    // jpsi meson-velocity: exponent = 50 M/(56.4 c tau) = 1.221
    let exp_jpsi: f64 = 50.0 * 3096.9 / (56.4 * 7.5e-21 * 2.99792458e23);
    assert!((exp_jpsi - 1.221).abs() < 0.002);
    let eta_jpsi = DecoherenceModel::SurvivalMesonVelocity.eta(50.0, jpsi, 3097.0, 56.4);
    assert!((eta_jpsi - (1.0 - (-exp_jpsi).exp())).abs() < 1e-12);
    assert!((eta_jpsi - 0.705).abs() < 0.005);
}

#[test]
fn azimuthal_average_matches_phi_quadrature() {
    // spot checks here; the full 50x50 grid runs in the acceptance suite
    let engine = rhic_rho(DecoherenceModel::FixedEta(0.3));
    for &(pt, b) in &[(12.0, 20.0), (56.4, 40.0), (150.0, 77.0)] {
        let bessel = engine.azimuth_averaged_rate(pt, b, 0.0).unwrap();
        let quad = phi_average(|phi| {
            engine
                .point_rate(&vmi_core::spectrum::KinematicPoint {
                    y: 0.0,
                    pt_mev: pt,
                    phi: phi.rem_euclid(std::f64::consts::TAU),
                    b_fm: b,
                })
                .unwrap()
        });
        assert!(
            (bessel - quad).abs() <= 1e-9 * quad.abs().max(1e-30),
            "pt={pt} b={b}: {bessel} vs {quad}"
        );
    }
}

#[test]
fn spectrum_total_rate_is_eta_independent_to_1e3() {
    // interference redistributes events; the pT-integrated rate moves
    // only by the form-factor-suppressed J0 cross term
    let grid = GridSpec {
        pt_max_mev: 300.0,
        bins: 150,
    };
    let reference = {
        let e = rhic_rho(DecoherenceModel::FullDecoherence);
        let t = e.pt_spectrum(0.0, &grid).unwrap();
        integrate_pt(&t.pt_mev, &t.rate_no_interference)
    };
    for model in [DecoherenceModel::FullCoherence, DecoherenceModel::FixedEta(0.5)] {
        let e = rhic_rho(model);
        let t = e.pt_spectrum(0.0, &grid).unwrap();
        let total = integrate_pt(&t.pt_mev, &t.rate_interference);
        assert!(
            ((total - reference) / reference).abs() < 1e-3,
            "total {total} vs {reference}"
        );
    }
}

fn integrate_pt(pt: &[f64], rate: &[f64]) -> f64 {
    // sum of 2 pi pT rate dpT over uniform bins
    let dpt = pt[1] - pt[0];
    pt.iter()
        .zip(rate)
        .map(|(p, r)| std::f64::consts::TAU * p * r * dpt)
        .sum()
}

#[test]
fn generated_mean_b_matches_quadrature() {
    let engine = rhic_rho(DecoherenceModel::FullDecoherence);
    let stats_quad = engine.b_stats(0.0).unwrap();
    let gen = EventGenerator::new(
        engine,
        GeneratorConfig {
            seed: 21,
            n_events: 100_000,
            ..Default::default()
        },
    )
    .unwrap();
    let events = gen.generate().unwrap();
    let n = events.len() as f64;
    let mean: f64 = events.iter().map(|e| e.b_fm).sum::<f64>() / n;
    let var: f64 = events.iter().map(|e| (e.b_fm - mean).powi(2)).sum::<f64>() / n;
    let sigma_mean = (var / n).sqrt();
    assert!(
        (mean - stats_quad.mean_fm).abs() < 4.0 * sigma_mean,
        "MC <b> = {mean} +- {sigma_mean}, quadrature {}",
        stats_quad.mean_fm
    );
}

#[test]
fn channel_frequencies_match_branching_table() {
    // phi has three listed channels plus an "other" remainder
    let engine = SpectrumEngine::new(
        production("au", 200.0, "phi", None),
        DecoherenceModel::FullDecoherence,
    );
    let meson = engine.production.meson.clone();
    let gen = EventGenerator::new(
        engine,
        GeneratorConfig {
            seed: 8,
            n_events: 1_000_000,
            ..Default::default()
        },
    )
    .unwrap();
    let events = gen.generate().unwrap();
    let n = events.len() as f64;
    let mut observed = Vec::new();
    let mut expected = Vec::new();
    for ch in &meson.decay_channels {
        let count = events.iter().filter(|e| e.channel == ch.id).count() as f64;
        observed.push(count);
        expected.push(ch.fraction * n);
        // 3 sigma multinomial bound per channel
        let sigma = (ch.fraction * (1.0 - ch.fraction) * n).sqrt();
        assert!(
            (count - ch.fraction * n).abs() < 3.0 * sigma,
            "channel {}: {count} vs {}",
            ch.id,
            ch.fraction * n
        );
    }
    let other = events.iter().filter(|e| e.channel == "other").count() as f64;
    observed.push(other);
    expected.push(meson.other_fraction() * n);
    let (_, _, p) = stats::chi2_test(&observed, &expected, 5.0);
    assert!(p > 0.001, "channel chi2 p = {p}");
}

#[test]
fn decay_time_sample_mean_tracks_dilation() {
    use rand_chacha::ChaCha8Rng;
    use rand_chacha::rand_core::SeedableRng;
    let cat = Catalog::builtin();
    let rho = cat.meson("rho0").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let omega = 2.0 * rho.mass_mev; // gamma_V = 2
    let n = 1_000_000;
    let mean: f64 = (0..n)
        .map(|_| vmi_core::generator::sample_decay_time(rho, omega, &mut rng))
        .sum::<f64>()
        / n as f64;
    assert!(
        (mean / (2.0 * rho.lifetime_s) - 1.0).abs() < 0.005,
        "mean {mean}"
    );
    // at rest: mean tau
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mean0: f64 = (0..n)
        .map(|_| vmi_core::generator::sample_decay_time(rho, rho.mass_mev, &mut rng))
        .sum::<f64>()
        / n as f64;
    assert!((mean0 / rho.lifetime_s - 1.0).abs() < 0.005);
    // survival past a 40 fm light-transit is negligible
    let t40 = 40.0 / C_LIGHT;
    let survive = (0..200_000)
        .filter(|i| {
            let mut r = ChaCha8Rng::seed_from_u64(*i as u64);
            vmi_core::generator::sample_decay_time(rho, rho.mass_mev, &mut r) > t40
        })
        .count();
    assert_eq!(survive, 0);
}

#[test]
fn reweighted_decoherent_events_reproduce_coherent_spectrum() {
    // generate with eta = 1, reweight by the stored amplitudes, compare
    // against the eta = 0 quadrature
    let engine = rhic_rho(DecoherenceModel::FullDecoherence);
    let coherent = rhic_rho(DecoherenceModel::FullCoherence);
    let gen = EventGenerator::new(
        engine,
        GeneratorConfig {
            seed: 33,
            n_events: 200_000,
            pt_max_mev: 200.0,
            ..Default::default()
        },
    )
    .unwrap();
    let events = gen.generate().unwrap();
    let bins = 25;
    let mut hist = vmi_core::stats::Histogram::new(0.0, 200.0, bins);
    for ev in &events {
        hist.fill_weighted(ev.pt_mev, ev.coherent_bracket() / ev.incoherent_bracket());
    }
    // expected shape from quadrature
    let total = coherent.total_weight(0.0).unwrap();
    let mut expected: Vec<f64> = Vec::new();
    for i in 0..bins {
        let lo = 200.0 * i as f64 / bins as f64;
        let hi = 200.0 * (i + 1) as f64 / bins as f64;
        expected.push(bin_rate(&coherent, lo, hi, total));
    }
    let scale = hist.total() / expected.iter().sum::<f64>();
    let expected: Vec<f64> = expected.iter().map(|e| e * scale).collect();
    let (chi2, dof, p) = stats::chi2_test(&hist.counts, &expected, 10.0);
    assert!(p > 0.01, "chi2/dof = {chi2:.1}/{dof}, p = {p}");
}

fn bin_rate(engine: &vmi_core::SpectrumEngine, lo: f64, hi: f64, total: f64) -> f64 {
    // Simpson over the bin of 2 pi pT rate(pT)
    let n = 8;
    let h = (hi - lo) / n as f64;
    let f = |pt: f64| {
        let (with_int, _) = engine.rates_at(pt, 0.0, total).unwrap();
        std::f64::consts::TAU * pt * with_int
    };
    let mut sum = f(lo) + f(hi);
    for i in 1..n {
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(lo + i as f64 * h);
    }
    sum * h / 3.0
}

#[test]
fn phi_uniform_under_full_decoherence() {
    let gen = EventGenerator::new(
        rhic_rho(DecoherenceModel::FullDecoherence),
        GeneratorConfig {
            seed: 12,
            n_events: 100_000,
            ..Default::default()
        },
    )
    .unwrap();
    let events = gen.generate().unwrap();
    let bins = 24;
    let mut hist = stats::Histogram::new(0.0, std::f64::consts::TAU, bins);
    for ev in &events {
        hist.fill(ev.phi);
    }
    let expected = vec![events.len() as f64 / bins as f64; bins];
    let (chi2, dof, p) = stats::chi2_test(&hist.counts, &expected, 5.0);
    assert!(p > 0.01, "phi uniformity chi2/dof = {chi2:.1}/{dof}, p = {p}");
}

#[test]
fn coherent_null_suppresses_zero_phase_events() {
    let mk = |model| {
        EventGenerator::new(
            rhic_rho(model),
            GeneratorConfig {
                seed: 14,
                n_events: 200_000,
                ..Default::default()
            },
        )
        .unwrap()
        .generate()
        .unwrap()
    };
    let count_near_null = |events: &[vmi_core::Event]| {
        events
            .iter()
            .filter(|e| (e.pt_mev * e.b_fm * e.phi.cos() / HBAR_C).abs() < 0.01)
            .count()
    };
    let n_coh = count_near_null(&mk(DecoherenceModel::FullCoherence));
    let n_dec = count_near_null(&mk(DecoherenceModel::FullDecoherence));
    assert!(n_dec > 200, "decoherent near-null sample too small: {n_dec}");
    assert!(
        n_dec > 100 * n_coh.max(1),
        "suppression only {n_dec}/{n_coh}"
    );
}

#[test]
fn pt_integrated_amplitude_tracks_flux_times_sigma() {
    // 2-D quadrature of |A1|^2 over (pT, phi); its b-dependence must be
    // the oracle-evaluated flux x cross-section at k1
    let engine = rhic_rho(DecoherenceModel::FullCoherence);
    let prod = &engine.production;
    let gamma = prod.beams.gamma();
    let (k1, _) = prod.photon_energies(0.0);
    let integrate_a1 = |b: f64| {
        // Simpson in pT with the 2 pi pT measure (phi integral is flat)
        let n = 600;
        let h = 300.0 / n as f64;
        let f = |pt: f64| {
            std::f64::consts::TAU * pt * prod.single_source_amplitude_sq(pt, 0.0, b).unwrap()
        };
        let mut s = f(0.0) + f(300.0);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        s * h / 3.0
    };
    let oracle_weight = |b: f64| {
        let x = k1 * b / (gamma * HBAR_C);
        let alpha = 1.0 / 137.035999;
        let pre = 79.0f64 * 79.0 * alpha / (std::f64::consts::PI * std::f64::consts::PI);
        pre * x * x / (k1 * b * b)
            * (bessel_k_oracle(1, x).powi(2) + bessel_k_oracle(0, x).powi(2) / (gamma * gamma))
            * prod.cross_section.eval(k1, gamma)
    };
    let (b1, b2) = (20.0, 80.0);
    let lhs = integrate_a1(b1) / integrate_a1(b2);
    let rhs = oracle_weight(b1) / oracle_weight(b2);
    assert!(
        ((lhs - rhs) / rhs).abs() < 1e-7,
        "b-dependence ratio {lhs} vs oracle {rhs}"
    );
}

#[test]
fn shapes_invariant_under_sigma_rescaling() {
    use vmi_core::sigma::{GammaACrossSection, SigmaParams};
    let engine = rhic_rho(DecoherenceModel::FullCoherence);
    let mut scaled = engine.clone();
    let mut params: SigmaParams = scaled.production.cross_section.params;
    params.pomeron_norm *= 7.0;
    params.meson_norm *= 7.0;
    scaled.production.cross_section =
        GammaACrossSection::new(&scaled.production.meson, 197, params);
    // |c| unchanged
    for &(y, b) in &[(0.5, 30.0), (1.0, 60.0)] {
        let (c1, _) = engine.production.amplitude_ratio_c(y, b).unwrap();
        let (c2, _) = scaled.production.amplitude_ratio_c(y, b).unwrap();
        assert!((c1 - c2).abs() < 1e-12);
    }
    // spectrum ratio column and argmax unchanged, raw rates scaled
    let grid = GridSpec {
        pt_max_mev: 120.0,
        bins: 24,
    };
    let t1 = engine.pt_spectrum(0.0, &grid).unwrap();
    let t2 = scaled.pt_spectrum(0.0, &grid).unwrap();
    for (r1, r2) in t1.ratio().iter().zip(t2.ratio()) {
        assert!((r1 - r2).abs() < 1e-9);
    }
    let argmax = |v: &[f64]| {
        v.iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0
    };
    assert_eq!(
        argmax(&t1.rate_interference),
        argmax(&t2.rate_interference)
    );
    let scale = t2.rate_no_interference[0] / t1.rate_no_interference[0];
    assert!((scale - 7.0).abs() < 1e-6);
}
