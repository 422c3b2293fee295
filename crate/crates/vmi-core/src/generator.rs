//! Monte Carlo event generation: kinematics sampled from the
//! interference rate, exponential decay times, channel selection,
//! final-state phase space, and the entangled two-source amplitude
//! bookkeeping carried on every event.

use crate::catalog::{DecayChannel, MesonSpec, OTHER_CHANNEL};
use crate::constants::{C_LIGHT, HBAR_C};
use crate::error::{Error, Result};
use crate::event::{Event, Product};
use crate::kinematics::FourMomentum;
use crate::rng::{self, Purpose};
use crate::spectrum::SpectrumEngine;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub n_events: u64,
    /// Rapidity window; equal endpoints fix y.
    pub y_min: f64,
    pub y_max: f64,
    /// Upper edge of the sampled pT range, MeV.
    pub pt_max_mev: f64,
    /// Restrict decays to one catalog channel id.
    pub channel_filter: Option<String>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 1,
            n_events: 10_000,
            y_min: 0.0,
            y_max: 0.0,
            pt_max_mev: 250.0,
            channel_filter: None,
        }
    }
}

/// Tabulated inverse CDF on a fixed grid.
#[derive(Debug, Clone)]
struct CdfTable {
    x: Vec<f64>,
    cdf: Vec<f64>,
}

impl CdfTable {
    fn build(x: Vec<f64>, density: impl Fn(f64) -> f64) -> CdfTable {
        let mut cdf = vec![0.0; x.len()];
        let mut acc = 0.0;
        let mut prev = density(x[0]).max(0.0);
        for i in 1..x.len() {
            let cur = density(x[i]).max(0.0);
            acc += 0.5 * (prev + cur) * (x[i] - x[i - 1]);
            cdf[i] = acc;
            prev = cur;
        }
        if acc > 0.0 {
            for v in cdf.iter_mut() {
                *v /= acc;
            }
        }
        CdfTable { x, cdf }
    }

    fn invert(&self, u: f64) -> f64 {
        let i = self.cdf.partition_point(|&c| c < u).min(self.x.len() - 1);
        if i == 0 {
            return self.x[0];
        }
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let f = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
        self.x[i - 1] + f * (self.x[i] - self.x[i - 1])
    }
}

/// Event generator: a spectrum engine (production model + decoherence
/// hypothesis) plus sampling tables. Immutable while generating.
#[derive(Debug, Clone)]
pub struct EventGenerator {
    pub engine: SpectrumEngine,
    pub config: GeneratorConfig,
    pt_proposal: CdfTable,
    /// Exact b inversion table for the fixed-y case.
    b_table: Option<CdfTable>,
    /// Envelope for the windowed-y rejection path.
    yb_envelope: f64,
}

/// Proposal cap per event before the window is declared too restrictive
/// (acceptance below 1e-4).
const MAX_PROPOSALS: usize = 10_000;

impl EventGenerator {
    pub fn new(engine: SpectrumEngine, config: GeneratorConfig) -> Result<EventGenerator> {
        if config.pt_max_mev <= 0.0 {
            return Err(Error::domain("generator", "pt_max must be positive"));
        }
        if config.y_max < config.y_min {
            return Err(Error::domain("generator", "empty rapidity window"));
        }
        if let Some(filter) = &config.channel_filter {
            if filter != OTHER_CHANNEL && engine.production.meson.channel(filter).is_none() {
                return Err(Error::domain(
                    "generator",
                    format!("channel filter '{filter}' not in catalog for {}", engine.production.meson.name),
                ));
            }
        }
        let ff = engine.production.form_factor.clone();
        let n_pt = 4097;
        let pt_grid: Vec<f64> = (0..n_pt)
            .map(|i| config.pt_max_mev * i as f64 / (n_pt - 1) as f64)
            .collect();
        let pt_proposal = CdfTable::build(pt_grid, |q| {
            let f = ff.eval(q);
            q * f * f
        });

        let beams = &engine.production.beams;
        let (b_lo, b_hi) = (beams.b_min_fm, beams.b_max_fm);
        let fixed_y = config.y_min == config.y_max;
        let mut b_table = None;
        let mut envelope = 0.0;
        if fixed_y {
            let y = config.y_min;
            let n_b = 4097;
            let grid: Vec<f64> = (0..n_b)
                .map(|i| b_lo * (b_hi / b_lo).powf(i as f64 / (n_b - 1) as f64))
                .collect();
            let prod = engine.production.clone();
            b_table = Some(CdfTable::build(grid, |b| {
                std::f64::consts::TAU * b * prod.b_weight(b, y).unwrap_or(0.0)
            }));
        } else {
            // scan for the b^2 w(b, y) envelope of the log-uniform proposal
            for i in 0..65 {
                let y = config.y_min + (config.y_max - config.y_min) * i as f64 / 64.0;
                for j in 0..129 {
                    let b = b_lo * (b_hi / b_lo).powf(j as f64 / 128.0);
                    let v = b * b * engine.production.b_weight(b, y).unwrap_or(0.0);
                    if v > envelope {
                        envelope = v;
                    }
                }
            }
            envelope *= 1.1;
            if envelope <= 0.0 {
                return Err(Error::Sampling("zero production weight in the (y, b) window".into()));
            }
        }
        Ok(EventGenerator {
            engine,
            config,
            pt_proposal,
            b_table,
            yb_envelope: envelope,
        })
    }

    /// Generate the full batch. Parallel over event indices; event i is
    /// a pure function of (seed, i).
    pub fn generate(&self) -> Result<Vec<Event>> {
        (0..self.config.n_events)
            .into_par_iter()
            .map(|i| self.generate_event(i))
            .collect()
    }

    /// Generate the single event with the given index.
    pub fn generate_event(&self, index: u64) -> Result<Event> {
        let seed = self.config.seed;
        let mut kin_rng = rng::stream(seed, index, Purpose::Kinematics);
        let (y, pt, phi, b) = self.sample_kinematics(&mut kin_rng)?;
        let prod = &self.engine.production;
        let (k1, k2) = prod.photon_energies(y);
        let w1 = prod.source_weight(k1, b)?;
        let w2 = prod.source_weight(k2, b)?;
        let source = if rng::uniform(&mut kin_rng) * (w1 + w2) < w1 { 1u8 } else { 2u8 };

        let meson = &prod.meson;
        let momentum = FourMomentum::from_pt_phi_rapidity(meson.mass_mev, pt, phi, y);

        let mut time_rng = rng::stream(seed, index, Purpose::DecayTime);
        let t_decay = sample_decay_time(meson, momentum.e, &mut time_rng);
        let scale = C_LIGHT * t_decay / meson.mass_mev;
        let x_decay = [
            momentum.px * scale,
            momentum.py * scale,
            momentum.pz * scale,
        ];

        let mut channel_rng = rng::stream(seed, index, Purpose::Channel);
        let channel = self.pick_channel(&mut channel_rng)?;

        let (c_mag, delta) = prod.amplitude_ratio_c(y, b)?;
        let (a1, a2) = entangled_amplitudes(pt, phi, b, c_mag, delta);

        let mut event = Event {
            index,
            y,
            pt_mev: pt,
            phi,
            b_fm: b,
            source,
            momentum,
            a1,
            a2,
            t_decay_s: t_decay,
            x_decay_fm: x_decay,
            channel: String::new(),
            products: Vec::new(),
        };

        let mut decay_rng = rng::stream(seed, index, Purpose::DecayAngles);
        match channel {
            Some(ch) => {
                event.channel = ch.id.clone();
                event.products = decay_event(&momentum, &ch, event.vertex(), &mut decay_rng)?;
            }
            None => {
                event.channel = OTHER_CHANNEL.to_string();
            }
        }
        Ok(event)
    }

    /// Draw (y, b) by inversion (fixed y) or rejection (window), then
    /// (pT, phi) by rejection against the interference bracket.
    fn sample_kinematics(&self, rng_stream: &mut ChaCha8Rng) -> Result<(f64, f64, f64, f64)> {
        let (y, b) = if let Some(table) = &self.b_table {
            (self.config.y_min, table.invert(rng::uniform(rng_stream)))
        } else {
            self.sample_yb_rejection(rng_stream)?
        };
        let prod = &self.engine.production;
        let (c_mag, delta) = prod.amplitude_ratio_c(y, b)?;
        let bracket_max = (1.0 + c_mag) * (1.0 + c_mag);
        for _ in 0..MAX_PROPOSALS {
            let pt = self.pt_proposal.invert(rng::uniform(rng_stream));
            let phi = rng::uniform_in(rng_stream, 0.0, std::f64::consts::TAU);
            let survival = self.engine.survival(b, pt, y);
            let phase = pt * b * phi.cos() / HBAR_C + delta;
            let bracket = 1.0 + c_mag * c_mag - 2.0 * c_mag * survival * phase.cos();
            if rng::uniform(rng_stream) * bracket_max < bracket {
                return Ok((y, pt, phi, b));
            }
        }
        Err(Error::Sampling(format!(
            "(pT, phi) acceptance below 1e-4 after {MAX_PROPOSALS} proposals; the kinematic window suppresses the configured rate"
        )))
    }

    fn sample_yb_rejection(&self, rng_stream: &mut ChaCha8Rng) -> Result<(f64, f64)> {
        let beams = &self.engine.production.beams;
        let ln_ratio = (beams.b_max_fm / beams.b_min_fm).ln();
        for _ in 0..MAX_PROPOSALS {
            let y = rng::uniform_in(rng_stream, self.config.y_min, self.config.y_max);
            let b = beams.b_min_fm * (rng::uniform(rng_stream) * ln_ratio).exp();
            let target = b * b * self.engine.production.b_weight(b, y).unwrap_or(0.0);
            if target > self.yb_envelope {
                return Err(Error::Sampling(
                    "(y, b) proposal envelope exceeded; density scan was too coarse".into(),
                ));
            }
            if rng::uniform(rng_stream) * self.yb_envelope < target {
                return Ok((y, b));
            }
        }
        Err(Error::Sampling(format!(
            "(y, b) acceptance below 1e-4 after {MAX_PROPOSALS} proposals"
        )))
    }

    fn pick_channel(&self, rng_stream: &mut ChaCha8Rng) -> Result<Option<DecayChannel>> {
        let meson = &self.engine.production.meson;
        if let Some(filter) = &self.config.channel_filter {
            if filter == OTHER_CHANNEL {
                return Ok(None);
            }
            return Ok(meson.channel(filter).cloned());
        }
        let u = rng::uniform(rng_stream);
        let mut acc = 0.0;
        for ch in &meson.decay_channels {
            acc += ch.fraction;
            if u < acc {
                return Ok(Some(ch.clone()));
            }
        }
        Ok(None) // the lumped "other" remainder
    }
}

/// Exponential lab-frame decay time with mean gamma_V tau,
/// gamma_V = omega / M_V.
pub fn sample_decay_time(meson: &MesonSpec, omega_mev: f64, rng_stream: &mut ChaCha8Rng) -> f64 {
    debug_assert!(omega_mev >= meson.mass_mev);
    let gamma_v = omega_mev / meson.mass_mev;
    rng::exponential(rng_stream, gamma_v * meson.lifetime_s)
}

/// Unit-normalized source amplitudes for a kinematic point: a1 has
/// magnitude 1 and phase +pT·b·cosphi/(2ħc); a2 carries magnitude |c|,
/// the opposite translation phase, the constant delta, and the
/// negative-parity sign, so that |a1 + a2|² reproduces the interference
/// bracket and vanishes at the symmetric point.
pub fn entangled_amplitudes(
    pt_mev: f64,
    phi: f64,
    b_fm: f64,
    c_mag: f64,
    delta: f64,
) -> (Complex64, Complex64) {
    let theta = 0.5 * pt_mev * b_fm * phi.cos() / HBAR_C;
    let a1 = Complex64::from_polar(1.0, theta);
    let a2 = -Complex64::from_polar(c_mag, -(theta + delta));
    (a1, a2)
}

/// Decay a meson into the channel's products: isotropic two-body in the
/// rest frame, flat phase space for three bodies (sequential mass
/// splitting with rejection), boosted to the lab. All products share
/// the decay vertex as trajectory origin.
pub fn decay_event(
    momentum: &FourMomentum,
    channel: &DecayChannel,
    vertex: [f64; 3],
    rng_stream: &mut ChaCha8Rng,
) -> Result<Vec<Product>> {
    let m = momentum.mass();
    match channel.product_masses_mev.len() {
        2 => {
            let (m1, m2) = (channel.product_masses_mev[0], channel.product_masses_mev[1]);
            let (p1, p2) = two_body_rest_frame(m, m1, m2, rng_stream);
            Ok(vec![
                Product {
                    momentum: p1.boosted_by(momentum),
                    origin_fm: vertex,
                },
                Product {
                    momentum: p2.boosted_by(momentum),
                    origin_fm: vertex,
                },
            ])
        }
        3 => three_body(momentum, channel, vertex, rng_stream),
        n => Err(Error::domain(
            "decay",
            format!("channel {} has {n} products; only 2- and 3-body supported", channel.id),
        )),
    }
}

/// Two-body rest-frame momentum magnitude
/// p* = sqrt([M² - (m1+m2)²][M² - (m1-m2)²]) / 2M.
pub fn two_body_momentum(m: f64, m1: f64, m2: f64) -> f64 {
    let sum = m1 + m2;
    let diff = m1 - m2;
    ((m * m - sum * sum) * (m * m - diff * diff)).max(0.0).sqrt() / (2.0 * m)
}

fn two_body_rest_frame(
    m: f64,
    m1: f64,
    m2: f64,
    rng_stream: &mut ChaCha8Rng,
) -> (FourMomentum, FourMomentum) {
    let p = two_body_momentum(m, m1, m2);
    let cos_t = rng::uniform_in(rng_stream, -1.0, 1.0);
    let sin_t = (1.0 - cos_t * cos_t).sqrt();
    let phi = rng::uniform_in(rng_stream, 0.0, std::f64::consts::TAU);
    let dir = [sin_t * phi.cos(), sin_t * phi.sin(), cos_t];
    let p1 = FourMomentum::from_mass_and_momentum(m1, p * dir[0], p * dir[1], p * dir[2]);
    let p2 = FourMomentum::from_mass_and_momentum(m2, -p * dir[0], -p * dir[1], -p * dir[2]);
    (p1, p2)
}

fn three_body(
    momentum: &FourMomentum,
    channel: &DecayChannel,
    vertex: [f64; 3],
    rng_stream: &mut ChaCha8Rng,
) -> Result<Vec<Product>> {
    let m = momentum.mass();
    let (m1, m2, m3) = (
        channel.product_masses_mev[0],
        channel.product_masses_mev[1],
        channel.product_masses_mev[2],
    );
    let lo = m1 + m2;
    let hi = m - m3;
    // weight of the intermediate mass in flat phase space
    let weight = |m12: f64| two_body_momentum(m, m12, m3) * two_body_momentum(m12, m1, m2);
    let mut w_max = 0.0f64;
    for i in 0..=256 {
        let m12 = lo + (hi - lo) * i as f64 / 256.0;
        w_max = w_max.max(weight(m12));
    }
    w_max *= 1.05;
    let m12 = loop {
        let cand = rng::uniform_in(rng_stream, lo, hi);
        if rng::uniform(rng_stream) * w_max < weight(cand) {
            break cand;
        }
    };
    let (pair, p3) = two_body_rest_frame(m, m12, m3, rng_stream);
    let (q1, q2) = two_body_rest_frame(m12, m1, m2, rng_stream);
    let pair_lab = pair.boosted_by(momentum);
    Ok(vec![
        Product {
            momentum: q1.boosted_by(&pair_lab),
            origin_fm: vertex,
        },
        Product {
            momentum: q2.boosted_by(&pair_lab),
            origin_fm: vertex,
        },
        Product {
            momentum: p3.boosted_by(momentum),
            origin_fm: vertex,
        },
    ])
}
