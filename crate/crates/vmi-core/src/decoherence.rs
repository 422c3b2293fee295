//! Decoherence hypotheses: the fraction eta of the two-source rate that
//! adds incoherently. eta = 0 is full coherence (interference survives
//! the decay), eta = 1 is a fully collapsed, non-interfering sum.

use crate::catalog::MesonSpec;
use crate::constants::C_LIGHT;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant", content = "value")]
pub enum DecoherenceModel {
    /// eta = 0 everywhere: collapse only at measurement.
    FullCoherence,
    /// eta = 1 everywhere: collapse at decay.
    FullDecoherence,
    /// Constant eta in [0, 1].
    FixedEta(f64),
    /// Survival-probability model with the amplitude transported at
    /// light speed: eta = 1 - exp(-M_V b / (omega tau c)).
    SurvivalLightSpeed,
    /// Same survival logic with transit at the meson's own velocity,
    /// p/omega: eta = 1 - exp(-M_V b / (pT tau c)).
    SurvivalMesonVelocity,
}

impl DecoherenceModel {
    /// Degree of decoherence at impact parameter `b_fm` for a meson of
    /// energy `omega_mev` and transverse momentum `pt_mev`.
    ///
    /// Both survival variants give eta(0) = 0 and eta -> 1 as b grows.
    /// The meson-velocity variant at pT = 0 never transits: eta = 1.
    pub fn eta(&self, b_fm: f64, meson: &MesonSpec, omega_mev: f64, pt_mev: f64) -> f64 {
        1.0 - self.survival(b_fm, meson, omega_mev, pt_mev)
    }

    /// The coherent fraction 1 - eta, computed directly. The survival
    /// exponentials must not be reconstructed from eta: 1 - (1 - e^-x)
    /// keeps only the ulp-of-one digits and turns the interference
    /// weight into noise at large x.
    pub fn survival(&self, b_fm: f64, meson: &MesonSpec, omega_mev: f64, pt_mev: f64) -> f64 {
        debug_assert!(b_fm >= 0.0);
        match *self {
            DecoherenceModel::FullCoherence => 1.0,
            DecoherenceModel::FullDecoherence => 0.0,
            DecoherenceModel::FixedEta(v) => 1.0 - v.clamp(0.0, 1.0),
            DecoherenceModel::SurvivalLightSpeed => {
                let tau_c = meson.lifetime_s * C_LIGHT; // fm
                if tau_c == 0.0 {
                    return 0.0;
                }
                let exponent = meson.mass_mev * b_fm / (omega_mev * tau_c);
                (-exponent).exp()
            }
            DecoherenceModel::SurvivalMesonVelocity => {
                if pt_mev <= 0.0 {
                    return 0.0;
                }
                let tau_c = meson.lifetime_s * C_LIGHT;
                if tau_c == 0.0 {
                    return 0.0;
                }
                let exponent = meson.mass_mev * b_fm / (pt_mev * tau_c);
                (-exponent).exp()
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            DecoherenceModel::FullCoherence => "full_coherence".into(),
            DecoherenceModel::FullDecoherence => "full_decoherence".into(),
            DecoherenceModel::FixedEta(v) => format!("fixed_eta({v})"),
            DecoherenceModel::SurvivalLightSpeed => "survival_light_speed".into(),
            DecoherenceModel::SurvivalMesonVelocity => "survival_meson_velocity".into(),
        }
    }
}
