//! Nuclear form factor models setting the coherent pT shape.
//!
//! The default is the analytic convolution of a hard sphere with a
//! Yukawa; a numerically Fourier-transformed Woods-Saxon sits behind a
//! config switch for shape cross-checks.

use crate::catalog::NucleusSpec;
use crate::constants::HBAR_C;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormFactorKind {
    HardsphereYukawa,
    WoodsSaxonFft,
}

/// Form factor evaluator, normalized to F(0) = 1 and real-valued.
#[derive(Debug, Clone)]
pub struct FormFactorModel {
    pub kind: FormFactorKind,
    pub radius_fm: f64,
    pub yukawa_fm: f64,
    /// Sampled |q| -> F table for the Woods-Saxon variant.
    ws_table: Option<WsTable>,
}

#[derive(Debug, Clone)]
struct WsTable {
    q_step: f64,
    values: Vec<f64>,
}

impl FormFactorModel {
    pub fn new(kind: FormFactorKind, nucleus: &NucleusSpec) -> Self {
        let mut model = FormFactorModel {
            kind,
            radius_fm: nucleus.radius_fm,
            yukawa_fm: nucleus.yukawa_fm,
            ws_table: None,
        };
        if kind == FormFactorKind::WoodsSaxonFft {
            model.ws_table = Some(model.build_ws_table());
        }
        model
    }

    pub fn hard_sphere_yukawa(nucleus: &NucleusSpec) -> Self {
        Self::new(FormFactorKind::HardsphereYukawa, nucleus)
    }

    /// F(q) for momentum transfer q in MeV.
    pub fn eval(&self, q_mev: f64) -> f64 {
        debug_assert!(q_mev >= 0.0);
        match self.kind {
            FormFactorKind::HardsphereYukawa => {
                let x = q_mev * self.radius_fm / HBAR_C;
                let aq = self.yukawa_fm * q_mev / HBAR_C;
                hard_sphere(x) / (1.0 + aq * aq)
            }
            FormFactorKind::WoodsSaxonFft => {
                let t = self.ws_table.as_ref().expect("table built in new()");
                let u = q_mev / t.q_step;
                let i = u as usize;
                if i + 1 >= t.values.len() {
                    return 0.0;
                }
                let f = u - i as f64;
                t.values[i] * (1.0 - f) + t.values[i + 1] * f
            }
        }
    }

    /// Spherical Bessel transform of a Woods-Saxon density on a dense
    /// q grid, trapezoid rule in r; normalized to F(0) = 1.
    fn build_ws_table(&self) -> WsTable {
        let r0 = self.radius_fm;
        let a = self.yukawa_fm.max(0.2);
        let r_max = r0 + 14.0 * a;
        let nr = 4000;
        let dr = r_max / nr as f64;
        let rho = |r: f64| 1.0 / (1.0 + ((r - r0) / a).exp());
        let q_max = 500.0;
        let nq = 4096;
        let q_step = q_max / (nq - 1) as f64;
        let mut norm = 0.0;
        for i in 1..=nr {
            let r = i as f64 * dr;
            norm += r * r * rho(r) * dr;
        }
        let values: Vec<f64> = (0..nq)
            .map(|j| {
                let q = j as f64 * q_step;
                let qr_unit = q / HBAR_C;
                if j == 0 {
                    return 1.0;
                }
                let mut s = 0.0;
                for i in 1..=nr {
                    let r = i as f64 * dr;
                    s += r * (qr_unit * r).sin() * rho(r) * dr;
                }
                s / (qr_unit * norm)
            })
            .collect();
        WsTable { q_step, values }
    }
}

/// 3 (sin x - x cos x) / x^3, the hard-sphere factor, with the series
/// limit near x = 0.
fn hard_sphere(x: f64) -> f64 {
    if x < 0.05 {
        let x2 = x * x;
        1.0 - x2 / 10.0 + x2 * x2 / 280.0
    } else {
        3.0 * (x.sin() - x * x.cos()) / (x * x * x)
    }
}
