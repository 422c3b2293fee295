//! Physical constants. Fixed, not configurable.

/// ħc in MeV·fm (CODATA).
pub const HBAR_C: f64 = 197.326_980_4;

/// Fine-structure constant.
pub const ALPHA_EM: f64 = 1.0 / 137.035_999;

/// Speed of light in fm/s.
pub const C_LIGHT: f64 = 2.997_924_58e23;

/// Nucleon mass used to convert per-nucleon beam energy to a Lorentz
/// factor, in GeV (atomic mass unit convention).
pub const NUCLEON_MASS_GEV: f64 = 0.9315;
