//! Equivalent (Weizsäcker-Williams) photon flux of a relativistic
//! point charge.

use crate::catalog::NucleusSpec;
use crate::constants::{ALPHA_EM, HBAR_C};
use crate::error::{Error, Result};
use crate::special::{bessel_k0, bessel_k1};

/// Smallest transverse distance at which the point-form flux is taken
/// seriously, in fm.
pub const B_VALIDITY_FM: f64 = 0.1;

/// Double-differential photon flux n(k, b) in photons / (MeV·fm²):
///
///   n = (Z² α / π²) · x² / (k b²) · [K1²(x) + K0²(x)/γ²],
///   x = k b / (γ ħc).
///
/// `k` is the photon energy in MeV, `b` the transverse distance from
/// the emitting charge in fm.
pub fn flux_density(k_mev: f64, b_fm: f64, nucleus: &NucleusSpec) -> Result<f64> {
    if !(k_mev > 0.0) {
        return Err(Error::domain("photon energy", format!("k = {k_mev} MeV must be positive")));
    }
    if !(b_fm > 0.0) {
        return Err(Error::domain("flux distance", format!("b = {b_fm} fm must be positive")));
    }
    if b_fm < B_VALIDITY_FM {
        return Err(Error::domain(
            "flux distance",
            format!("b = {b_fm} fm is below the {B_VALIDITY_FM} fm validity floor"),
        ));
    }
    let gamma = nucleus.gamma_beam;
    let z = f64::from(nucleus.z);
    let x = k_mev * b_fm / (gamma * HBAR_C);
    let k1 = bessel_k1(x);
    let k0 = bessel_k0(x);
    let pre = z * z * ALPHA_EM / (std::f64::consts::PI * std::f64::consts::PI);
    Ok(pre * x * x / (k_mev * b_fm * b_fm) * (k1 * k1 + k0 * k0 / (gamma * gamma)))
}

/// Characteristic maximum photon energy ħc·γ/b (MeV) carried by the
/// field at transverse distance b.
pub fn flux_cutoff_energy(b_fm: f64, gamma: f64) -> f64 {
    HBAR_C * gamma / b_fm
}
