//! Single-nucleus production amplitude: |A1|² factorizes into
//! (photon flux × photon-nucleus cross section) × |F(pT)|², and the
//! two-source amplitude ratio c carries the rapidity asymmetry plus a
//! configurable constant phase.

use crate::catalog::{BeamConfig, MesonSpec};
use crate::error::Result;
use crate::flux::flux_density;
use crate::formfactor::FormFactorModel;
use crate::kinematics::photon_energies_for_rapidity;
use crate::sigma::GammaACrossSection;

/// Everything needed to evaluate production rates at a kinematic point.
/// Pure value type; safe to share across threads.
#[derive(Debug, Clone)]
pub struct ProductionModel {
    pub beams: BeamConfig,
    pub meson: MesonSpec,
    pub form_factor: FormFactorModel,
    pub cross_section: GammaACrossSection,
    /// Constant phase delta of the amplitude ratio c, radians.
    pub delta_rad: f64,
}

impl ProductionModel {
    /// flux × cross-section weight for the source whose photon has
    /// energy `k` at transverse distance `b` from its emitter.
    pub fn source_weight(&self, k_mev: f64, b_fm: f64) -> Result<f64> {
        let n = flux_density(k_mev, b_fm, &self.beams.nucleus)?;
        Ok(n * self.cross_section.eval(k_mev, self.beams.gamma()))
    }

    /// The two candidate photon energies at rapidity `y`.
    pub fn photon_energies(&self, y: f64) -> (f64, f64) {
        photon_energies_for_rapidity(y, self.meson.mass_mev)
    }

    /// |A1|²: source-1 production rate density at (pT, y, b), in
    /// arbitrary but run-fixed normalization. The pT shape is purely
    /// the nuclear form factor.
    pub fn single_source_amplitude_sq(&self, pt_mev: f64, y: f64, b_fm: f64) -> Result<f64> {
        let (k1, _) = self.photon_energies(y);
        let f = self.form_factor.eval(pt_mev);
        Ok(self.source_weight(k1, b_fm)? * f * f)
    }

    /// Amplitude ratio c between the two sources, as (|c|, delta).
    /// |c|² = n(k2,b)σ(k2) / n(k1,b)σ(k1); exactly 1 at y = 0.
    pub fn amplitude_ratio_c(&self, y: f64, b_fm: f64) -> Result<(f64, f64)> {
        if y == 0.0 {
            return Ok((1.0, self.delta_rad));
        }
        let (k1, k2) = self.photon_energies(y);
        let w1 = self.source_weight(k1, b_fm)?;
        let w2 = self.source_weight(k2, b_fm)?;
        let mag = if w1 > 0.0 {
            (w2 / w1).sqrt()
        } else if w2 > 0.0 {
            f64::INFINITY
        } else {
            1.0
        };
        Ok((mag, self.delta_rad))
    }

    /// Incoherent two-source production density per unit area,
    /// w(b) = Σ_i n(k_i, b) σ(k_i); zero outside the b window.
    pub fn b_weight(&self, b_fm: f64, y: f64) -> Result<f64> {
        if b_fm < self.beams.b_min_fm || b_fm > self.beams.b_max_fm {
            return Ok(0.0);
        }
        let (k1, k2) = self.photon_energies(y);
        Ok(self.source_weight(k1, b_fm)? + self.source_weight(k2, b_fm)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::formfactor::FormFactorModel;
    use crate::sigma::SigmaParams;

    pub(crate) fn rhic_rho() -> ProductionModel {
        let cat = Catalog::builtin();
        let au = cat.nucleus("au").unwrap();
        let rho = cat.meson("rho0").unwrap().clone();
        let beams = BeamConfig::new(au, 200.0, None, None, &rho).unwrap();
        let ff = FormFactorModel::hard_sphere_yukawa(&beams.nucleus);
        let xs = GammaACrossSection::new(&rho, beams.nucleus.a, SigmaParams::defaults_for(&rho));
        ProductionModel {
            beams,
            meson: rho,
            form_factor: ff,
            cross_section: xs,
            delta_rad: 0.0,
        }
    }

    #[test]
    fn pt_shape_is_pure_form_factor() {
        let m = rhic_rho();
        let a0 = m.single_source_amplitude_sq(0.0, 0.0, 40.0).unwrap();
        for &pt in &[5.0, 25.0, 56.4, 120.0] {
            let a = m.single_source_amplitude_sq(pt, 0.0, 40.0).unwrap();
            let f = m.form_factor.eval(pt);
            assert!((a / a0 - f * f).abs() < 1e-12);
        }
    }

    #[test]
    fn sources_equal_at_midrapidity() {
        let m = rhic_rho();
        let (mag, delta) = m.amplitude_ratio_c(0.0, 40.0).unwrap();
        assert_eq!(mag, 1.0);
        assert_eq!(delta, 0.0);
    }

    #[test]
    fn ratio_swap_symmetry() {
        let m = rhic_rho();
        for &y in &[0.25, 0.5, 1.0] {
            let (c_plus, _) = m.amplitude_ratio_c(y, 40.0).unwrap();
            let (c_minus, _) = m.amplitude_ratio_c(-y, 40.0).unwrap();
            assert!((c_plus * c_minus - 1.0).abs() < 1e-12, "y={y}");
            // at y > 0 the source-2 photon is softer and its flux larger
            assert!(c_plus > 1.0, "softer-photon source dominates: {c_plus}");
        }
    }

    #[test]
    fn rank_one_factorization_over_grid() {
        // |A1|²(pT, b) / (|A1|²(pT, b0) |A1|²(pT0, b)) * |A1|²(pT0, b0) = 1
        let m = rhic_rho();
        let (pt0, b0) = (10.0, 30.0);
        let base = m.single_source_amplitude_sq(pt0, 0.0, b0).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let pt = 3.0 + 12.0 * i as f64;
                let b = 15.0 + 20.0 * j as f64;
                let a = m.single_source_amplitude_sq(pt, 0.0, b).unwrap();
                let ap = m.single_source_amplitude_sq(pt, 0.0, b0).unwrap();
                let ab = m.single_source_amplitude_sq(pt0, 0.0, b).unwrap();
                assert!((a * base / (ap * ab) - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn b_window_enforced() {
        let m = rhic_rho();
        assert_eq!(m.b_weight(13.9, 0.0).unwrap(), 0.0);
        assert!(m.b_weight(14.1, 0.0).unwrap() > 0.0);
        assert_eq!(m.b_weight(m.beams.b_max_fm + 1.0, 0.0).unwrap(), 0.0);
    }
}
