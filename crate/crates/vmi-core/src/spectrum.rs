//! Two-source interference rate and the impact-parameter-integrated
//! transverse-momentum spectrum.
//!
//! The point rate generalizes the midrapidity interference cross
//! section to |c| != 1 and partial decoherence eta:
//!
//!   R = |A1|² [ 1 + |c|² - 2|c|(1-eta) cos(pT·b·cosphi/ħc + delta) ]
//!
//! with the destructive sign convention folded into the cosine so the
//! symmetric point (pT = 0, |c| = 1, delta = 0, eta = 0) is an exact
//! null. Averaging over the unmeasured azimuth of b turns the cosine
//! into cos(delta)·J0(pT b/ħc).

use crate::constants::HBAR_C;
use crate::decoherence::DecoherenceModel;
use crate::error::{Error, Result};
use crate::photoproduction::ProductionModel;
use crate::quadrature;
use crate::special::bessel_j0;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A point in the event kinematics. The impact parameter direction is
/// fixed along the y axis; `phi` is the azimuth of the meson pT
/// relative to b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicPoint {
    pub y: f64,
    pub pt_mev: f64,
    pub phi: f64,
    pub b_fm: f64,
}

impl KinematicPoint {
    pub fn validate(&self) -> Result<()> {
        if !(self.pt_mev >= 0.0) {
            return Err(Error::domain("kinematic point", "pT must be >= 0"));
        }
        if !(self.b_fm > 0.0) {
            return Err(Error::domain("kinematic point", "b must be > 0"));
        }
        if !(0.0..std::f64::consts::TAU).contains(&self.phi) {
            return Err(Error::domain("kinematic point", "phi must lie in [0, 2pi)"));
        }
        Ok(())
    }
}

/// Rate density at a fully specified kinematic point, given the
/// amplitude ratio (magnitude, phase), the decoherence fraction and the
/// single-source rate |A1|².
pub fn point_rate(kp: &KinematicPoint, c: (f64, f64), eta: f64, a1_sq: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&eta));
    let (c_mag, delta) = c;
    let phase = kp.pt_mev * kp.b_fm * kp.phi.cos() / HBAR_C + delta;
    a1_sq * (1.0 + c_mag * c_mag - 2.0 * c_mag * (1.0 - eta) * phase.cos())
}

/// Exact azimuthal average of `point_rate` over the orientation of b.
pub fn azimuth_averaged_rate(
    pt_mev: f64,
    b_fm: f64,
    c: (f64, f64),
    eta: f64,
    a1_sq: f64,
) -> f64 {
    let (c_mag, delta) = c;
    let j0 = bessel_j0(pt_mev * b_fm / HBAR_C);
    a1_sq * (1.0 + c_mag * c_mag - 2.0 * c_mag * (1.0 - eta) * delta.cos() * j0)
}

/// Binning for the pT spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub pt_max_mev: f64,
    pub bins: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            pt_max_mev: 200.0,
            bins: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Raw quadrature values (flux × microbarn × fm² units).
    Raw,
    /// No-interference rate scaled to 1 at pT = 0.
    UnitAtZero,
}

/// Binned dN/dy dpT² densities with and without interference,
/// evaluated at bin centers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub pt_edges_mev: Vec<f64>,
    pub pt_mev: Vec<f64>,
    pub rate_interference: Vec<f64>,
    pub rate_no_interference: Vec<f64>,
    pub normalization: Normalization,
    pub model: String,
    pub y: f64,
    /// Worst relative quadrature error over the bins.
    pub quadrature_error: f64,
}

impl SpectrumTable {
    pub fn ratio(&self) -> Vec<f64> {
        self.rate_interference
            .iter()
            .zip(&self.rate_no_interference)
            .map(|(i, n)| if *n > 0.0 { i / n } else { 1.0 })
            .collect()
    }

    /// Rescale both columns so the no-interference rate at pT = 0 is 1.
    /// `rate0` is the unnormalized no-interference value at pT = 0.
    pub fn normalize_unit_at_zero(&mut self, rate0: f64) {
        if rate0 <= 0.0 {
            return;
        }
        for v in self
            .rate_interference
            .iter_mut()
            .chain(self.rate_no_interference.iter_mut())
        {
            *v /= rate0;
        }
        self.normalization = Normalization::UnitAtZero;
    }

    /// CSV with the frozen column order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("pt_mev,rate_interf,rate_no_interf,ratio\n");
        for (i, ratio) in self.ratio().iter().enumerate() {
            out.push_str(&format!(
                "{:.6},{:.9e},{:.9e},{:.9e}\n",
                self.pt_mev[i], self.rate_interference[i], self.rate_no_interference[i], ratio
            ));
        }
        out
    }
}

/// Mean, median and total of the production-weighted b distribution.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BStats {
    pub mean_fm: f64,
    pub median_fm: f64,
    /// Total two-source weight  ∫ 2πb db w(b).
    pub total_weight: f64,
}

/// Spectrum evaluation: a production model plus a decoherence
/// hypothesis. Pure value type; parallel evaluation is over pT bins
/// with per-bin sequential quadrature, so results are independent of
/// thread count.
#[derive(Debug, Clone)]
pub struct SpectrumEngine {
    pub production: ProductionModel,
    pub model: DecoherenceModel,
}

/// Target relative accuracy of the b quadrature.
const B_QUAD_TOL: f64 = 1e-8;
/// Above this estimated relative error the spectrum reports
/// non-convergence.
pub const B_QUAD_FAIL: f64 = 1e-4;

impl SpectrumEngine {
    pub fn new(production: ProductionModel, model: DecoherenceModel) -> Self {
        SpectrumEngine { production, model }
    }

    fn meson_energy(&self, pt_mev: f64, y: f64) -> f64 {
        let m = self.production.meson.mass_mev;
        (m * m + pt_mev * pt_mev).sqrt() * y.cosh()
    }

    /// eta of the configured model at this kinematic point.
    pub fn eta(&self, b_fm: f64, pt_mev: f64, y: f64) -> f64 {
        1.0 - self.survival(b_fm, pt_mev, y)
    }

    /// Coherent fraction 1 - eta, exact in the survival tails.
    pub fn survival(&self, b_fm: f64, pt_mev: f64, y: f64) -> f64 {
        let omega = self.meson_energy(pt_mev, y);
        self.model
            .survival(b_fm, &self.production.meson, omega, pt_mev)
    }

    /// Azimuth-averaged rate density at (pT, b, y) under the configured
    /// model, flux and form factor included.
    pub fn azimuth_averaged_rate(&self, pt_mev: f64, b_fm: f64, y: f64) -> Result<f64> {
        let a1 = self.production.single_source_amplitude_sq(pt_mev, y, b_fm)?;
        let c = self.production.amplitude_ratio_c(y, b_fm)?;
        let eta = self.eta(b_fm, pt_mev, y);
        Ok(azimuth_averaged_rate(pt_mev, b_fm, c, eta, a1))
    }

    /// Rate density at a full kinematic point under the configured model.
    pub fn point_rate(&self, kp: &KinematicPoint) -> Result<f64> {
        kp.validate()?;
        let a1 = self
            .production
            .single_source_amplitude_sq(kp.pt_mev, kp.y, kp.b_fm)?;
        let c = self.production.amplitude_ratio_c(kp.y, kp.b_fm)?;
        let eta = self.eta(kp.b_fm, kp.pt_mev, kp.y);
        Ok(point_rate(kp, c, eta, a1))
    }

    /// Integral over the b window of 2πb × f(b), with panels sized so
    /// that an oscillation scale `pt` in J0(pt·b/ħc) is resolved.
    ///
    /// A first coarse pass sets the magnitude scale; refinement then
    /// works against an absolute budget, so panels where the integrand
    /// is negligible (deep survival suppression, flux tail) are
    /// accepted immediately instead of being refined against their own
    /// near-zero values.
    fn b_integral<F: Fn(f64) -> f64 + Sync>(&self, pt_mev: f64, f: F) -> quadrature::Quadrature {
        let a = self.production.beams.b_min_fm;
        let b = self.production.beams.b_max_fm;
        let half_period = std::f64::consts::PI * HBAR_C / pt_mev.max(1e-3);
        // log-spaced backbone, linearly subdivided where J0 oscillates
        let n_log = 48usize;
        let log_step = (b / a).ln() / n_log as f64;
        let g = |x: f64| 2.0 * std::f64::consts::PI * x * f(x);
        let mut bounds: Vec<(f64, f64)> = Vec::new();
        for i in 0..n_log {
            let lo = a * (i as f64 * log_step).exp();
            let hi = if i + 1 == n_log {
                b
            } else {
                a * ((i + 1) as f64 * log_step).exp()
            };
            let splits = ((hi - lo) / half_period).ceil().max(1.0) as usize;
            let w = (hi - lo) / splits as f64;
            for j in 0..splits {
                let pa = lo + j as f64 * w;
                let pb = if j + 1 == splits { hi } else { pa + w };
                bounds.push((pa, pb));
            }
        }
        let coarse: Vec<quadrature::Quadrature> = bounds
            .iter()
            .map(|&(pa, pb)| quadrature::integrate_abs(g, pa, pb, f64::INFINITY))
            .collect();
        let scale: f64 = coarse.iter().map(|q| q.value.abs()).sum::<f64>().max(1e-300);
        let budget = B_QUAD_TOL * scale / bounds.len() as f64;
        let mut total = quadrature::Quadrature {
            value: 0.0,
            error: 0.0,
            panels: 0,
        };
        for (&(pa, pb), first) in bounds.iter().zip(&coarse) {
            let q = if first.error <= budget {
                *first
            } else {
                quadrature::integrate_abs(g, pa, pb, budget)
            };
            total.value += q.value;
            total.error += q.error;
            total.panels += q.panels;
        }
        total
    }

    /// Total production weight  W = ∫ 2πb db w(b)  at rapidity y.
    pub fn total_weight(&self, y: f64) -> Result<f64> {
        let q = self.b_integral(0.0, |b| self.production.b_weight(b, y).unwrap_or(0.0));
        if q.relative_error() > B_QUAD_FAIL {
            return Err(Error::NonConvergence {
                est: q.relative_error(),
                tol: B_QUAD_FAIL,
            });
        }
        Ok(q.value)
    }

    /// Interference cross-term  ∫ 2πb db sqrt(w1 w2)(1 - eta) J0(pT b/ħc).
    fn cross_term(&self, pt_mev: f64, y: f64) -> quadrature::Quadrature {
        let (k1, k2) = self.production.photon_energies(y);
        self.b_integral(pt_mev, |b| {
            let w1 = self.production.source_weight(k1, b).unwrap_or(0.0);
            let w2 = self.production.source_weight(k2, b).unwrap_or(0.0);
            if b < self.production.beams.b_min_fm || b > self.production.beams.b_max_fm {
                return 0.0;
            }
            let survival = self.survival(b, pt_mev, y);
            (w1 * w2).sqrt() * survival * bessel_j0(pt_mev * b / HBAR_C)
        })
    }

    /// The b-integrated rate densities at one pT: (interference,
    /// no-interference) in dN/dy dpT² units.
    pub fn rates_at(&self, pt_mev: f64, y: f64, total_weight: f64) -> Result<(f64, f64)> {
        let f = self.production.form_factor.eval(pt_mev);
        let f2 = f * f;
        let no_int = f2 * total_weight;
        let cross = self.cross_term(pt_mev, y);
        if total_weight > 0.0 && cross.error / total_weight > B_QUAD_FAIL {
            return Err(Error::NonConvergence {
                est: cross.error / total_weight,
                tol: B_QUAD_FAIL,
            });
        }
        let with_int = f2 * (total_weight - 2.0 * self.production.delta_rad.cos() * cross.value);
        Ok((with_int, no_int))
    }

    /// The Fig.-2 style table: per-bin rates for the configured model
    /// and for the full-decoherence reference, at bin centers.
    pub fn pt_spectrum(&self, y: f64, grid: &GridSpec) -> Result<SpectrumTable> {
        if grid.bins == 0 || !(grid.pt_max_mev > 0.0) {
            return Err(Error::domain("grid", "need bins >= 1 and pt_max > 0"));
        }
        let total = self.total_weight(y)?;
        let step = grid.pt_max_mev / grid.bins as f64;
        let edges: Vec<f64> = (0..=grid.bins).map(|i| i as f64 * step).collect();
        let centers: Vec<f64> = (0..grid.bins).map(|i| (i as f64 + 0.5) * step).collect();
        let rates: Result<Vec<(f64, f64)>> = centers
            .par_iter()
            .map(|&pt| self.rates_at(pt, y, total))
            .collect();
        let rates = rates?;
        let mut worst = 0.0f64;
        // a second pass for the error estimate keeps the hot path lean
        for &pt in centers.iter().step_by((grid.bins / 8).max(1)) {
            let q = self.cross_term(pt, y);
            worst = worst.max(q.error / total.max(1e-300));
        }
        Ok(SpectrumTable {
            pt_edges_mev: edges,
            pt_mev: centers,
            rate_interference: rates.iter().map(|r| r.0).collect(),
            rate_no_interference: rates.iter().map(|r| r.1).collect(),
            normalization: Normalization::Raw,
            model: self.model.name(),
            y,
            quadrature_error: worst,
        })
    }

    /// No-interference rate exactly at pT = 0 (the Fig. 2 normalization
    /// point).
    pub fn rate_no_interference_at_zero(&self, y: f64) -> Result<f64> {
        let total = self.total_weight(y)?;
        Ok(total) // F(0) = 1
    }

    /// Mean and median of the production-weighted b distribution at
    /// rapidity y.
    pub fn b_stats(&self, y: f64) -> Result<BStats> {
        let total = self.total_weight(y)?;
        if total <= 0.0 {
            return Err(Error::domain("b stats", "zero production weight in window"));
        }
        let first = self.b_integral(0.0, |b| b * self.production.b_weight(b, y).unwrap_or(0.0));
        let mean = first.value / total;
        // median by bisection on the cumulative weight
        let (mut lo, mut hi) = (
            self.production.beams.b_min_fm,
            self.production.beams.b_max_fm,
        );
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let engine = self.clone_with_bmax(mid);
            let cum = engine.b_integral(0.0, |b| engine.production.b_weight(b, y).unwrap_or(0.0));
            if cum.value < 0.5 * total {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-6 * hi {
                break;
            }
        }
        Ok(BStats {
            mean_fm: mean,
            median_fm: 0.5 * (lo + hi),
            total_weight: total,
        })
    }

    fn clone_with_bmax(&self, b_max: f64) -> SpectrumEngine {
        let mut e = self.clone();
        e.production.beams.b_max_fm = b_max;
        e
    }
}
