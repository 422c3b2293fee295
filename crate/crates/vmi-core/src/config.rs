//! Flat dotted-key run configuration.
//!
//! One `key = value` per line, `#` comments, every key either present
//! or defaulted from the documented table (see the README config
//! reference). Unknown or duplicate keys are rejected with their line
//! number. The canonical sorted key=value text is hashed into every
//! output file for reproducibility.

use crate::catalog::{BeamConfig, Catalog};
use crate::decoherence::DecoherenceModel;
use crate::error::{Error, Result};
use crate::formfactor::{FormFactorKind, FormFactorModel};
use crate::gedanken::{CollapseScenario, DetectorLayout};
use crate::generator::{EventGenerator, GeneratorConfig};
use crate::photoproduction::ProductionModel;
use crate::sigma::{GammaACrossSection, SigmaParams};
use crate::spectrum::{GridSpec, SpectrumEngine};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

const KNOWN_KEYS: &[&str] = &[
    "beam.nucleus",
    "beam.sqrt_s_nn_gev",
    "beam.b_min_fm",
    "beam.b_max_fm",
    "beam.hadronic_exclusion",
    "meson",
    "rapidity",
    "decoherence.model",
    "decoherence.eta",
    "phase.delta_rad",
    "formfactor.model",
    "sigma.pomeron_norm",
    "sigma.pomeron_eps",
    "sigma.meson_norm",
    "sigma.meson_eta",
    "grid.pt_max_mev",
    "grid.pt_bins",
    "generator.seed",
    "generator.n_events",
    "generator.pt_max_mev",
    "generator.y_min",
    "generator.y_max",
    "generator.channel",
    "detector.radius_fm",
    "detector.position_resolution_fm",
    "detector.time_resolution_s",
    "detector.pointing_scale_fm",
    "detector.arm_half_angle_rad",
    "gedanken.events_path",
    "scenario",
    "scan.parameter",
    "scan.values",
    "catalog.path",
    "output.events_format",
];

/// Parsed run configuration: raw key/value pairs with source lines.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.split('#').next().unwrap_or("").trim();
            if t.is_empty() {
                continue;
            }
            let (key, value) = t.split_once('=').ok_or(Error::Config {
                line,
                msg: format!("expected 'key = value', got '{t}'"),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config {
                    line,
                    msg: format!("unknown key '{key}'"),
                });
            }
            if entries.insert(key.clone(), (line, value)).is_some() {
                return Err(Error::Config {
                    line,
                    msg: format!("duplicate key '{key}'"),
                });
            }
        }
        Ok(RunConfig { entries })
    }

    pub fn from_file(path: &std::path::Path) -> Result<RunConfig> {
        RunConfig::parse(&std::fs::read_to_string(path)?)
    }

    /// Override or inject a key (CLI flags).
    pub fn set(&mut self, key: &str, value: &str) {
        self.entries
            .insert(key.to_string(), (0, value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn bad(&self, key: &str, msg: String) -> Error {
        let line = self.entries.get(key).map(|(l, _)| *l).unwrap_or(0);
        Error::Config { line, msg }
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| self.bad(key, format!("{key}: '{v}' is not a number"))),
        }
    }

    fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| self.bad(key, format!("{key}: '{v}' is not an integer"))),
        }
    }

    fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(v) => Err(self.bad(key, format!("{key}: '{v}' is not a boolean"))),
        }
    }

    /// Optional length with the literal `auto` mapped to None.
    fn auto_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None | Some("auto") => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| self.bad(key, format!("{key}: '{v}' is not a number or 'auto'"))),
        }
    }

    /// SHA-256 of the canonical sorted key=value text, first 16 hex
    /// digits. Defaulted keys do not contribute.
    pub fn hash_hex(&self) -> String {
        let mut hasher = Sha256::new();
        for (k, (_, v)) in &self.entries {
            hasher.update(k.as_bytes());
            hasher.update(b"=");
            hasher.update(v.as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Catalog with optional user overrides from `catalog.path`.
    pub fn load_catalog(&self) -> Result<Catalog> {
        match self.get("catalog.path") {
            None => Ok(Catalog::builtin()),
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                Catalog::with_overrides(&text)
            }
        }
    }

    pub fn rapidity(&self) -> Result<f64> {
        self.f64_or("rapidity", 0.0)
    }

    pub fn build_production(&self, catalog: &Catalog) -> Result<ProductionModel> {
        let meson_name = self.get("meson").unwrap_or("rho0");
        let meson = catalog.meson(meson_name)?.clone();
        let nucleus_name = self.get("beam.nucleus").unwrap_or("au");
        let nucleus = catalog.nucleus(nucleus_name)?;
        let sqrt_s = self.f64_or("beam.sqrt_s_nn_gev", 200.0)?;
        let b_min = self.auto_f64("beam.b_min_fm")?;
        let b_max = self.auto_f64("beam.b_max_fm")?;
        let mut beams = BeamConfig::new(nucleus, sqrt_s, b_min, b_max, &meson)?;
        beams.hadronic_exclusion = self.bool_or("beam.hadronic_exclusion", true)?;
        beams.validate()?;

        let ff_kind = match self.get("formfactor.model").unwrap_or("hardsphere_yukawa") {
            "hardsphere_yukawa" => FormFactorKind::HardsphereYukawa,
            "woods_saxon_fft" => FormFactorKind::WoodsSaxonFft,
            other => {
                return Err(self.bad(
                    "formfactor.model",
                    format!("formfactor.model: unknown model '{other}'"),
                ))
            }
        };
        let form_factor = FormFactorModel::new(ff_kind, &beams.nucleus);

        let defaults = SigmaParams::defaults_for(&meson);
        let params = SigmaParams {
            pomeron_norm: self.f64_or("sigma.pomeron_norm", defaults.pomeron_norm)?,
            pomeron_eps: self.f64_or("sigma.pomeron_eps", defaults.pomeron_eps)?,
            meson_norm: self.f64_or("sigma.meson_norm", defaults.meson_norm)?,
            meson_eta: self.f64_or("sigma.meson_eta", defaults.meson_eta)?,
        };
        let cross_section = GammaACrossSection::new(&meson, beams.nucleus.a, params);
        Ok(ProductionModel {
            beams,
            meson,
            form_factor,
            cross_section,
            delta_rad: self.f64_or("phase.delta_rad", 0.0)?,
        })
    }

    pub fn decoherence_model(&self) -> Result<DecoherenceModel> {
        match self.get("decoherence.model").unwrap_or("full_coherence") {
            "full_coherence" => Ok(DecoherenceModel::FullCoherence),
            "full_decoherence" => Ok(DecoherenceModel::FullDecoherence),
            "fixed_eta" => {
                let eta = self.f64_or("decoherence.eta", 0.5)?;
                if !(0.0..=1.0).contains(&eta) {
                    return Err(self.bad(
                        "decoherence.eta",
                        format!("decoherence.eta: {eta} outside [0, 1]"),
                    ));
                }
                Ok(DecoherenceModel::FixedEta(eta))
            }
            "survival_light_speed" => Ok(DecoherenceModel::SurvivalLightSpeed),
            "survival_meson_velocity" => Ok(DecoherenceModel::SurvivalMesonVelocity),
            other => Err(self.bad(
                "decoherence.model",
                format!("decoherence.model: unknown model '{other}'"),
            )),
        }
    }

    pub fn build_engine(&self, catalog: &Catalog) -> Result<SpectrumEngine> {
        Ok(SpectrumEngine::new(
            self.build_production(catalog)?,
            self.decoherence_model()?,
        ))
    }

    pub fn grid(&self) -> Result<GridSpec> {
        let grid = GridSpec {
            pt_max_mev: self.f64_or("grid.pt_max_mev", 200.0)?,
            bins: self.u64_or("grid.pt_bins", 100)? as usize,
        };
        if grid.bins == 0 {
            return Err(self.bad("grid.pt_bins", "grid.pt_bins: need >= 1".into()));
        }
        Ok(grid)
    }

    pub fn generator_config(&self) -> Result<GeneratorConfig> {
        let y = self.rapidity()?;
        Ok(GeneratorConfig {
            seed: self.u64_or("generator.seed", 1)?,
            n_events: self.u64_or("generator.n_events", 10_000)?,
            y_min: self.f64_or("generator.y_min", y)?,
            y_max: self.f64_or("generator.y_max", y)?,
            pt_max_mev: self.f64_or("generator.pt_max_mev", 250.0)?,
            channel_filter: self.get("generator.channel").map(str::to_string),
        })
    }

    pub fn build_generator(&self, catalog: &Catalog) -> Result<EventGenerator> {
        EventGenerator::new(self.build_engine(catalog)?, self.generator_config()?)
    }

    pub fn build_layout(&self) -> Result<DetectorLayout> {
        let d = DetectorLayout::default();
        let layout = DetectorLayout {
            radius_fm: self.f64_or("detector.radius_fm", d.radius_fm)?,
            position_resolution_fm: self
                .f64_or("detector.position_resolution_fm", d.position_resolution_fm)?,
            time_resolution_s: self.f64_or("detector.time_resolution_s", d.time_resolution_s)?,
            pointing_scale_fm: self.f64_or("detector.pointing_scale_fm", d.pointing_scale_fm)?,
            arm_half_angle_rad: self.f64_or("detector.arm_half_angle_rad", d.arm_half_angle_rad)?,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn scenario(&self) -> Result<CollapseScenario> {
        match self.get("scenario").unwrap_or("collapse_at_measurement") {
            "collapse_at_measurement" => Ok(CollapseScenario::CollapseAtMeasurement),
            "collapse_at_decay" => Ok(CollapseScenario::CollapseAtDecay),
            other => Err(self.bad("scenario", format!("scenario: unknown '{other}'"))),
        }
    }
}
