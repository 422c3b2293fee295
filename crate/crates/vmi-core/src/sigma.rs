//! Photon-nucleus cross-section parameterization.
//!
//! Two-term soft-Pomeron + meson-exchange form on the photon-nucleon
//! energy,
//!
//!   sigma_gamma_p(W) = X W^eps + Y W^{-eta_R}   (microbarn, W in GeV),
//!
//! scaled by A^{2/3} for the nuclear target. Only the energy SHAPE of
//! this object ever matters to the interference observables; the
//! constants are run configuration, never ground truth.

use crate::catalog::MesonSpec;
use crate::kinematics::w_gamma_nucleon_gev;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaParams {
    /// Pomeron-term normalization X (microbarn).
    pub pomeron_norm: f64,
    /// Pomeron power eps.
    pub pomeron_eps: f64,
    /// Meson-exchange normalization Y (microbarn).
    pub meson_norm: f64,
    /// Meson-exchange power eta_R.
    pub meson_eta: f64,
}

impl SigmaParams {
    /// Defaults per meson species, chosen to reproduce the qualitative
    /// slow rise (and, for the light mesons, the low-W meson-exchange
    /// tail) of the photoproduction data fits.
    pub fn defaults_for(meson: &MesonSpec) -> SigmaParams {
        match meson.name.as_str() {
            "rho0" => SigmaParams {
                pomeron_norm: 5.0,
                pomeron_eps: 0.22,
                meson_norm: 26.0,
                meson_eta: 1.23,
            },
            "omega" => SigmaParams {
                pomeron_norm: 0.55,
                pomeron_eps: 0.22,
                meson_norm: 18.0,
                meson_eta: 1.92,
            },
            "phi" => SigmaParams {
                pomeron_norm: 0.34,
                pomeron_eps: 0.22,
                meson_norm: 0.0,
                meson_eta: 1.0,
            },
            "jpsi" => SigmaParams {
                pomeron_norm: 0.0046,
                pomeron_eps: 0.65,
                meson_norm: 0.0,
                meson_eta: 1.0,
            },
            _ => SigmaParams {
                pomeron_norm: 1.0,
                pomeron_eps: 0.22,
                meson_norm: 0.0,
                meson_eta: 1.0,
            },
        }
    }
}

/// Cross section for producing a given meson on a nucleus, as a
/// function of photon energy. Immutable after construction.
#[derive(Debug, Clone)]
pub struct GammaACrossSection {
    pub params: SigmaParams,
    /// W threshold: below m_N + M_V the channel is closed.
    w_min_gev: f64,
    /// A^{2/3} scale factor.
    a_scale: f64,
}

impl GammaACrossSection {
    pub fn new(meson: &MesonSpec, mass_number: u32, params: SigmaParams) -> Self {
        let m_n = crate::constants::NUCLEON_MASS_GEV;
        GammaACrossSection {
            params,
            w_min_gev: m_n + meson.mass_mev * 1e-3,
            a_scale: f64::from(mass_number).powf(2.0 / 3.0),
        }
    }

    /// sigma_gamma_A in microbarn for photon lab energy `k_mev` on a
    /// beam of Lorentz factor `gamma_beam`. Zero below threshold.
    pub fn eval(&self, k_mev: f64, gamma_beam: f64) -> f64 {
        let w = w_gamma_nucleon_gev(k_mev, gamma_beam);
        if w <= self.w_min_gev {
            return 0.0;
        }
        let p = &self.params;
        let sigma_p = p.pomeron_norm * w.powf(p.pomeron_eps) + p.meson_norm * w.powf(-p.meson_eta);
        self.a_scale * sigma_p.max(0.0)
    }
}
