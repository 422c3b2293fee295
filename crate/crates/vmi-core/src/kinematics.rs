//! Relativistic kinematics helpers: beam Lorentz factor, rapidity to
//! photon-energy mapping, median decay distance, four-vectors.

use crate::catalog::{MesonSpec, NucleusSpec};
use crate::constants::HBAR_C;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Per-beam Lorentz factor in a symmetric collider,
/// gamma = sqrt(s_NN) / (2 m_N).
pub fn lorentz_gamma(sqrt_s_nn_gev: f64, nucleon_mass_gev: f64) -> Result<f64> {
    if !(sqrt_s_nn_gev >= 2.0 * nucleon_mass_gev) {
        return Err(Error::domain(
            "sqrt_s_NN",
            format!(
                "{sqrt_s_nn_gev} GeV is below the 2 m_N = {} GeV threshold",
                2.0 * nucleon_mass_gev
            ),
        ));
    }
    Ok(sqrt_s_nn_gev / (2.0 * nucleon_mass_gev))
}

/// Median decay distance d = (2 ħc / R_A M_V) · cτ for a meson produced
/// at midrapidity with the typical transverse momentum 2ħ/R_A.
pub fn decay_distance(meson: &MesonSpec, nucleus: &NucleusSpec) -> f64 {
    2.0 * HBAR_C / (nucleus.radius_fm * meson.mass_mev) * meson.c_tau_fm()
}

/// The two candidate photon energies for a vector meson of mass `m_v`
/// at rapidity `y`: k1 = (M/2) e^{+y} from the beam-direction source,
/// k2 = (M/2) e^{-y} from the other.
pub fn photon_energies_for_rapidity(y: f64, m_v_mev: f64) -> (f64, f64) {
    let half = 0.5 * m_v_mev;
    (half * y.exp(), half * (-y).exp())
}

/// Photon-nucleon center-of-mass energy in GeV for a photon of lab
/// energy `k_mev` on a beam nucleon of energy gamma·m_N: in the
/// ultrarelativistic head-on limit W^2 = m_N^2 + 4 k E_N.
pub fn w_gamma_nucleon_gev(k_mev: f64, gamma_beam: f64) -> f64 {
    let m_n = crate::constants::NUCLEON_MASS_GEV;
    let e_n = gamma_beam * m_n;
    (m_n * m_n + 4.0 * (k_mev * 1e-3) * e_n).sqrt()
}

/// A lab-frame four-momentum in MeV, z along the beams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum {
    pub e: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl FourMomentum {
    pub fn from_mass_and_momentum(mass: f64, px: f64, py: f64, pz: f64) -> Self {
        let e = (mass * mass + px * px + py * py + pz * pz).sqrt();
        FourMomentum { e, px, py, pz }
    }

    /// Meson four-momentum from (pT, azimuth, rapidity).
    pub fn from_pt_phi_rapidity(mass: f64, pt: f64, phi: f64, y: f64) -> Self {
        let mt = (mass * mass + pt * pt).sqrt();
        FourMomentum {
            e: mt * y.cosh(),
            px: pt * phi.sin(),
            py: pt * phi.cos(),
            pz: mt * y.sinh(),
        }
    }

    pub fn p2(&self) -> f64 {
        self.px * self.px + self.py * self.py + self.pz * self.pz
    }

    pub fn p(&self) -> f64 {
        self.p2().sqrt()
    }

    pub fn pt(&self) -> f64 {
        (self.px * self.px + self.py * self.py).sqrt()
    }

    pub fn mass(&self) -> f64 {
        (self.e * self.e - self.p2()).max(0.0).sqrt()
    }

    pub fn add(&self, other: &FourMomentum) -> FourMomentum {
        FourMomentum {
            e: self.e + other.e,
            px: self.px + other.px,
            py: self.py + other.py,
            pz: self.pz + other.pz,
        }
    }

    /// Boost by the velocity of `frame` (a timelike four-momentum):
    /// takes a vector given in the rest frame of `frame` to the lab.
    pub fn boosted_by(&self, frame: &FourMomentum) -> FourMomentum {
        let m = frame.mass();
        let gamma = frame.e / m;
        let bx = frame.px / frame.e;
        let by = frame.py / frame.e;
        let bz = frame.pz / frame.e;
        let b2 = bx * bx + by * by + bz * bz;
        if b2 == 0.0 {
            return *self;
        }
        let bp = bx * self.px + by * self.py + bz * self.pz;
        let f = (gamma - 1.0) * bp / b2 + gamma * self.e;
        FourMomentum {
            e: gamma * (self.e + bp),
            px: self.px + f * bx,
            py: self.py + f * by,
            pz: self.pz + f * bz,
        }
    }
}
