//! The Monte Carlo event record and its serialized forms (newline-
//! delimited JSON and compact CSV).

use crate::error::{Error, Result};
use crate::kinematics::FourMomentum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One decay product: lab four-momentum and the straight-line
/// trajectory origin (the decay vertex), in fm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Product {
    pub momentum: FourMomentum,
    pub origin_fm: [f64; 3],
}

/// A generated vector-meson event.
///
/// The impact parameter lies along the y axis; source 1 sits at
/// y = +b/2, source 2 at y = -b/2. `phi` is the azimuth of the meson
/// pT measured from the b direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub index: u64,
    pub y: f64,
    pub pt_mev: f64,
    pub phi: f64,
    pub b_fm: f64,
    /// Which source the Monte Carlo assigned (1 or 2); the physical
    /// state is a superposition, this is bookkeeping for the classical
    /// gedanken constructions.
    pub source: u8,
    pub momentum: FourMomentum,
    /// Source amplitudes: a1 has magnitude 1, a2 magnitude |c|; their
    /// relative phase carries pT·b/ħc plus the constant delta, with the
    /// antisymmetric-field sign folded into a2.
    pub a1: Complex64,
    pub a2: Complex64,
    /// Lab-frame decay time, seconds.
    pub t_decay_s: f64,
    /// Decay displacement (p/M_V)·c·t_decay, fm.
    pub x_decay_fm: [f64; 3],
    pub channel: String,
    pub products: Vec<Product>,
}

impl Event {
    /// |a1 + a2|²: the coherent two-source weight of this event.
    pub fn coherent_bracket(&self) -> f64 {
        (self.a1 + self.a2).norm_sqr()
    }

    /// 1 + |c|²: the incoherent weight.
    pub fn incoherent_bracket(&self) -> f64 {
        self.a1.norm_sqr() + self.a2.norm_sqr()
    }

    /// Transverse position of the event's assigned source, fm.
    pub fn source_position(&self) -> [f64; 2] {
        match self.source {
            1 => [0.0, 0.5 * self.b_fm],
            _ => [0.0, -0.5 * self.b_fm],
        }
    }

    /// Decay vertex in the transverse plane, fm.
    pub fn vertex(&self) -> [f64; 3] {
        let s = self.source_position();
        [
            s[0] + self.x_decay_fm[0],
            s[1] + self.x_decay_fm[1],
            self.x_decay_fm[2],
        ]
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("event serializes")
    }

    /// Compact CSV row: base kinematics then px,py,pz,E per product.
    pub fn to_csv_row(&self) -> String {
        let mut row = format!(
            "{},{:.6},{:.6},{:.6},{:.6},{:.6e},{}",
            self.index, self.y, self.pt_mev, self.phi, self.b_fm, self.t_decay_s, self.channel
        );
        for p in &self.products {
            row.push_str(&format!(
                ",{:.6},{:.6},{:.6},{:.6}",
                p.momentum.px, p.momentum.py, p.momentum.pz, p.momentum.e
            ));
        }
        row
    }

    pub const CSV_HEADER: &'static str =
        "evt,y,pt_mev,phi,b_fm,tdec_s,channel,prod_px,prod_py,prod_pz,prod_e...";
}

/// Parse a newline-delimited JSON event stream. Blank lines are
/// skipped; any malformed line is an error with its line number.
pub fn parse_event_records(text: &str) -> Result<Vec<Event>> {
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let ev: Event = serde_json::from_str(line).map_err(|e| Error::EventRecord {
            line: i + 1,
            msg: e.to_string(),
        })?;
        if !ev.y.is_finite() || !ev.pt_mev.is_finite() || !ev.b_fm.is_finite() {
            return Err(Error::EventRecord {
                line: i + 1,
                msg: "non-finite kinematics".into(),
            });
        }
        if ev.pt_mev < 0.0 || ev.b_fm <= 0.0 || !(ev.source == 1 || ev.source == 2) {
            return Err(Error::EventRecord {
                line: i + 1,
                msg: "kinematics out of domain".into(),
            });
        }
        events.push(ev);
    }
    Ok(events)
}
