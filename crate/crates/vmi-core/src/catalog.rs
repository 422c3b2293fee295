//! Nucleus and meson catalogs, loaded from a flat key-value text format.
//!
//! The builtin catalog ships gold and lead beams plus the rho0, omega,
//! phi and jpsi mesons; user files can add or override entries without a
//! rebuild.

use crate::constants::NUCLEON_MASS_GEV;
use crate::error::{Error, Result};
use crate::kinematics::lorentz_gamma;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const BUILTIN_CATALOG: &str = include_str!("../data/catalog.txt");

/// A photon-emitting / scattering nucleus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NucleusSpec {
    pub name: String,
    /// Charge number.
    pub z: u32,
    /// Mass number.
    pub a: u32,
    /// Hard-sphere radius in fm.
    pub radius_fm: f64,
    /// Form-factor diffuseness (Yukawa range) in fm.
    pub yukawa_fm: f64,
    /// Per-beam Lorentz factor; 1 in the catalog, set by `BeamConfig`.
    pub gamma_beam: f64,
}

impl NucleusSpec {
    pub fn validate(&self) -> Result<()> {
        if self.z < 1 {
            return Err(Error::domain("nucleus", format!("{}: Z must be >= 1", self.name)));
        }
        if self.a < self.z {
            return Err(Error::domain("nucleus", format!("{}: A must be >= Z", self.name)));
        }
        if !(self.radius_fm > 0.0) {
            return Err(Error::domain("nucleus", format!("{}: radius must be positive", self.name)));
        }
        if !(self.gamma_beam >= 1.0) {
            return Err(Error::domain("nucleus", format!("{}: gamma_beam must be >= 1", self.name)));
        }
        Ok(())
    }
}

/// One decay channel: identifier, branching fraction, product masses (MeV).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayChannel {
    pub id: String,
    pub fraction: f64,
    pub product_masses_mev: Vec<f64>,
}

/// Channel id given to the lumped remainder of unlisted decay modes.
pub const OTHER_CHANNEL: &str = "other";

/// A vector meson: pole mass, lifetime, decay table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MesonSpec {
    pub name: String,
    pub mass_mev: f64,
    pub lifetime_s: f64,
    pub decay_channels: Vec<DecayChannel>,
}

impl MesonSpec {
    /// Lifetime expressed as a decay length c·tau in fm.
    pub fn c_tau_fm(&self) -> f64 {
        crate::constants::C_LIGHT * self.lifetime_s
    }

    /// Branching fraction not covered by the listed channels.
    pub fn other_fraction(&self) -> f64 {
        (1.0 - self.decay_channels.iter().map(|c| c.fraction).sum::<f64>()).max(0.0)
    }

    pub fn channel(&self, id: &str) -> Option<&DecayChannel> {
        self.decay_channels.iter().find(|c| c.id == id)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass_mev > 0.0) {
            return Err(Error::domain("meson", format!("{}: mass must be positive", self.name)));
        }
        if !(self.lifetime_s >= 0.0) {
            return Err(Error::domain("meson", format!("{}: lifetime must be non-negative", self.name)));
        }
        let mut sum = 0.0;
        for ch in &self.decay_channels {
            if !(ch.fraction > 0.0 && ch.fraction <= 1.0) {
                return Err(Error::domain(
                    "meson",
                    format!("{}: channel {} fraction {} outside (0,1]", self.name, ch.id, ch.fraction),
                ));
            }
            // Sub-threshold channels are a configuration error at load time.
            let msum: f64 = ch.product_masses_mev.iter().sum();
            if msum >= self.mass_mev {
                return Err(Error::domain(
                    "meson",
                    format!(
                        "{}: channel {} product masses sum to {msum} MeV >= meson mass {}",
                        self.name, ch.id, self.mass_mev
                    ),
                ));
            }
            if ch.product_masses_mev.is_empty() {
                return Err(Error::domain(
                    "meson",
                    format!("{}: channel {} has no products", self.name, ch.id),
                ));
            }
            sum += ch.fraction;
        }
        if sum > 1.0 + 1e-12 {
            return Err(Error::domain(
                "meson",
                format!("{}: channel fractions sum to {sum} > 1", self.name),
            ));
        }
        Ok(())
    }
}

/// Beam setup: the colliding nucleus species, per-nucleon CM energy and
/// the impact-parameter window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamConfig {
    pub nucleus: NucleusSpec,
    pub sqrt_s_nn_gev: f64,
    pub b_min_fm: f64,
    pub b_max_fm: f64,
    pub hadronic_exclusion: bool,
}

impl BeamConfig {
    /// Symmetric-collider beam from a catalog nucleus. `b_max_fm = None`
    /// selects an automatic window wide enough for the flux tail at the
    /// midrapidity photon energy of `meson`.
    pub fn new(
        nucleus: &NucleusSpec,
        sqrt_s_nn_gev: f64,
        b_min_fm: Option<f64>,
        b_max_fm: Option<f64>,
        meson: &MesonSpec,
    ) -> Result<Self> {
        let gamma = lorentz_gamma(sqrt_s_nn_gev, NUCLEON_MASS_GEV)?;
        let mut nucleus = nucleus.clone();
        nucleus.gamma_beam = gamma;
        let b_min = b_min_fm.unwrap_or(2.0 * nucleus.radius_fm);
        let k0 = 0.5 * meson.mass_mev; // midrapidity photon energy
        let b_max = b_max_fm.unwrap_or(10.0 * gamma * crate::constants::HBAR_C / k0);
        let cfg = BeamConfig {
            nucleus,
            sqrt_s_nn_gev,
            b_min_fm: b_min,
            b_max_fm: b_max,
            hadronic_exclusion: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn gamma(&self) -> f64 {
        self.nucleus.gamma_beam
    }

    pub fn validate(&self) -> Result<()> {
        self.nucleus.validate()?;
        if self.hadronic_exclusion && self.b_min_fm < 2.0 * self.nucleus.radius_fm - 1e-9 {
            return Err(Error::domain(
                "beam",
                format!(
                    "b_min = {} fm is inside the hadronic-exclusion bound 2 R_A = {} fm",
                    self.b_min_fm,
                    2.0 * self.nucleus.radius_fm
                ),
            ));
        }
        if !(self.b_max_fm > self.b_min_fm) {
            return Err(Error::domain("beam", "b_max must exceed b_min"));
        }
        Ok(())
    }
}

/// Immutable after load; shared freely across threads.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub nuclei: BTreeMap<String, NucleusSpec>,
    pub mesons: BTreeMap<String, MesonSpec>,
}

impl Catalog {
    /// The catalog compiled into the library.
    pub fn builtin() -> Catalog {
        parse_catalog(BUILTIN_CATALOG).expect("builtin catalog parses")
    }

    /// Builtin entries plus (or overridden by) the given catalog text.
    pub fn with_overrides(text: &str) -> Result<Catalog> {
        let mut cat = Catalog::builtin();
        let user = parse_catalog(text)?;
        cat.nuclei.extend(user.nuclei);
        cat.mesons.extend(user.mesons);
        Ok(cat)
    }

    pub fn nucleus(&self, name: &str) -> Result<&NucleusSpec> {
        self.nuclei
            .get(name)
            .ok_or_else(|| Error::domain("nucleus", format!("unknown nucleus '{name}'")))
    }

    pub fn meson(&self, name: &str) -> Result<&MesonSpec> {
        self.mesons
            .get(name)
            .ok_or_else(|| Error::domain("meson", format!("unknown meson '{name}'")))
    }
}

/// Parse the flat key-value catalog format. Records are blank-line
/// separated; `#` starts a comment.
pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let mut cat = Catalog::default();
    let mut block: Vec<(usize, String, String)> = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    loop {
        let item = lines.next();
        let blank = match &item {
            Some((_, l)) => {
                let t = l.split('#').next().unwrap_or("").trim();
                t.is_empty()
            }
            None => true,
        };
        if !blank {
            let (idx, line) = item.unwrap();
            let t = line.split('#').next().unwrap_or("").trim();
            let (key, value) = t.split_once('=').ok_or(Error::Catalog {
                line: idx + 1,
                msg: format!("expected 'key = value', got '{t}'"),
            })?;
            block.push((idx + 1, key.trim().to_string(), value.trim().to_string()));
        } else if !block.is_empty() {
            flush_block(&mut cat, &block)?;
            block.clear();
        }
        if item.is_none() {
            break;
        }
    }
    Ok(cat)
}

fn flush_block(cat: &mut Catalog, block: &[(usize, String, String)]) -> Result<()> {
    let first_line = block[0].0;
    let get = |key: &str| -> Option<&(usize, String, String)> {
        block.iter().find(|(_, k, _)| k == key)
    };
    let name = match get("name") {
        Some((_, _, v)) => v.clone(),
        None => {
            return Err(Error::Catalog {
                line: first_line,
                msg: "record has no 'name' key".into(),
            })
        }
    };
    let parse_f64 = |entry: &(usize, String, String)| -> Result<f64> {
        entry.2.parse::<f64>().map_err(|_| Error::Catalog {
            line: entry.0,
            msg: format!("{}: not a number: '{}'", entry.1, entry.2),
        })
    };
    let parse_u32 = |entry: &(usize, String, String)| -> Result<u32> {
        entry.2.parse::<u32>().map_err(|_| Error::Catalog {
            line: entry.0,
            msg: format!("{}: not an integer: '{}'", entry.1, entry.2),
        })
    };

    if get("z").is_some() || get("a").is_some() || get("radius_fm").is_some() {
        let missing = |k: &str| Error::Catalog {
            line: first_line,
            msg: format!("nucleus '{name}' missing key '{k}'"),
        };
        let nuc = NucleusSpec {
            name: name.clone(),
            z: parse_u32(get("z").ok_or_else(|| missing("z"))?)?,
            a: parse_u32(get("a").ok_or_else(|| missing("a"))?)?,
            radius_fm: parse_f64(get("radius_fm").ok_or_else(|| missing("radius_fm"))?)?,
            yukawa_fm: match get("yukawa_fm") {
                Some(e) => parse_f64(e)?,
                None => 0.7,
            },
            gamma_beam: 1.0,
        };
        nuc.validate().map_err(|e| Error::Catalog {
            line: first_line,
            msg: e.to_string(),
        })?;
        cat.nuclei.insert(name, nuc);
        return Ok(());
    }

    let missing = |k: &str| Error::Catalog {
        line: first_line,
        msg: format!("meson '{name}' missing key '{k}'"),
    };
    let mut channels = Vec::new();
    for entry in block.iter().filter(|(_, k, _)| k == "channel") {
        channels.push(parse_channel(entry)?);
    }
    let meson = MesonSpec {
        name: name.clone(),
        mass_mev: parse_f64(get("mass_mev").ok_or_else(|| missing("mass_mev"))?)?,
        lifetime_s: parse_f64(get("lifetime_s").ok_or_else(|| missing("lifetime_s"))?)?,
        decay_channels: channels,
    };
    meson.validate().map_err(|e| Error::Catalog {
        line: first_line,
        msg: e.to_string(),
    })?;
    cat.mesons.insert(name, meson);
    Ok(())
}

fn parse_channel(entry: &(usize, String, String)) -> Result<DecayChannel> {
    let (line, _, v) = entry;
    let bad = |msg: String| Error::Catalog { line: *line, msg };
    let mut parts = v.splitn(3, ':');
    let id = parts
        .next()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| bad("channel: empty id".into()))?;
    let frac = parts
        .next()
        .ok_or_else(|| bad("channel: missing fraction".into()))?
        .trim()
        .parse::<f64>()
        .map_err(|_| bad("channel: fraction is not a number".into()))?;
    let masses_str = parts
        .next()
        .ok_or_else(|| bad("channel: missing product masses".into()))?;
    let mut masses = Vec::new();
    for m in masses_str.split(',') {
        let m = m.trim().parse::<f64>().map_err(|_| {
            bad(format!("channel: product mass '{}' is not a number", m.trim()))
        })?;
        if m < 0.0 {
            return Err(bad("channel: negative product mass".into()));
        }
        masses.push(m);
    }
    Ok(DecayChannel {
        id: id.trim().to_string(),
        fraction: frac,
        product_masses_mev: masses,
    })
}
