//! Chain parameters for the Fermi-Hubbard model.
//!
//! `ModelSpec` fixes the lattice size N, hopping t, on-site repulsion U,
//! boundary condition and the particle numbers (N↑, N↓) of the sector all
//! calculations run in. Experiments in this repo use open boundaries at
//! half filling (N↑ = N↓ = N/2); the type itself permits any filling.

use crate::error::CoreError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Open => write!(f, "open"),
            Boundary::Periodic => write!(f, "periodic"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    /// Number of lattice sites N.
    pub n_sites: usize,
    /// Hopping amplitude t > 0; all energies are reported in units of t.
    pub hopping: f64,
    /// On-site repulsion U ≥ 0.
    pub hubbard_u: f64,
    pub boundary: Boundary,
    pub n_up: usize,
    pub n_down: usize,
}

impl ModelSpec {
    pub fn new(
        n_sites: usize,
        hopping: f64,
        hubbard_u: f64,
        boundary: Boundary,
        n_up: usize,
        n_down: usize,
    ) -> Result<Self, CoreError> {
        let spec = Self {
            n_sites,
            hopping,
            hubbard_u,
            boundary,
            n_up,
            n_down,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Open chain at half filling, the configuration used by all shipped
    /// experiments.
    pub fn half_filled_chain(n_sites: usize, u_over_t: f64) -> Result<Self, CoreError> {
        if n_sites % 2 != 0 {
            return Err(CoreError::InvalidModel(format!(
                "half filling requires even N, got {n_sites}"
            )));
        }
        Self::new(n_sites, 1.0, u_over_t, Boundary::Open, n_sites / 2, n_sites / 2)
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.n_sites == 0 {
            return Err(CoreError::InvalidModel("n_sites must be positive".into()));
        }
        if self.n_sites > 31 {
            return Err(CoreError::InvalidModel(format!(
                "n_sites = {} exceeds the 31-site occupation-word limit",
                self.n_sites
            )));
        }
        if !(self.hopping > 0.0) || !self.hopping.is_finite() {
            return Err(CoreError::InvalidModel(format!(
                "hopping must be positive and finite, got {}",
                self.hopping
            )));
        }
        if !(self.hubbard_u >= 0.0) || !self.hubbard_u.is_finite() {
            return Err(CoreError::InvalidModel(format!(
                "hubbard_u must be non-negative and finite, got {}",
                self.hubbard_u
            )));
        }
        if self.n_up > self.n_sites || self.n_down > self.n_sites {
            return Err(CoreError::InvalidModel(format!(
                "particle numbers ({}, {}) exceed n_sites = {}",
                self.n_up, self.n_down, self.n_sites
            )));
        }
        Ok(())
    }

    /// Number of spin-orbitals, i.e. the occupation-word width.
    pub fn n_orbitals(&self) -> usize {
        2 * self.n_sites
    }

    pub fn u_over_t(&self) -> f64 {
        self.hubbard_u / self.hopping
    }

    pub fn is_half_filled(&self) -> bool {
        self.n_sites % 2 == 0 && self.n_up == self.n_sites / 2 && self.n_down == self.n_sites / 2
    }

    /// Serialize as a flat key-value config document.
    pub fn to_config_string(&self) -> String {
        format!(
            "n_sites = {}\nt = {}\nu = {}\nboundary = {}\nn_up = {}\nn_down = {}\n",
            self.n_sites, self.hopping, self.hubbard_u, self.boundary, self.n_up, self.n_down
        )
    }

    /// Parse the flat key-value config format produced by
    /// [`to_config_string`](Self::to_config_string). Lines are `key = value`;
    /// blank lines and `#` comments are skipped.
    pub fn from_config_str(text: &str) -> Result<Self, CoreError> {
        let mut n_sites = None;
        let mut t = None;
        let mut u = None;
        let mut boundary = None;
        let mut n_up = None;
        let mut n_down = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CoreError::ConfigParse(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_usize = |v: &str| {
                v.parse::<usize>()
                    .map_err(|e| CoreError::ConfigParse(format!("{key}: {e}")))
            };
            let parse_f64 = |v: &str| {
                v.parse::<f64>()
                    .map_err(|e| CoreError::ConfigParse(format!("{key}: {e}")))
            };
            match key {
                "n_sites" => n_sites = Some(parse_usize(value)?),
                "t" => t = Some(parse_f64(value)?),
                "u" => u = Some(parse_f64(value)?),
                "boundary" => {
                    boundary = Some(match value {
                        "open" => Boundary::Open,
                        "periodic" => Boundary::Periodic,
                        other => {
                            return Err(CoreError::ConfigParse(format!(
                                "boundary must be open or periodic, got {other}"
                            )))
                        }
                    })
                }
                "n_up" => n_up = Some(parse_usize(value)?),
                "n_down" => n_down = Some(parse_usize(value)?),
                other => {
                    return Err(CoreError::ConfigParse(format!("unknown key {other}")));
                }
            }
        }
        let missing = |k: &str| CoreError::ConfigParse(format!("missing key {k}"));
        Self::new(
            n_sites.ok_or_else(|| missing("n_sites"))?,
            t.ok_or_else(|| missing("t"))?,
            u.ok_or_else(|| missing("u"))?,
            boundary.ok_or_else(|| missing("boundary"))?,
            n_up.ok_or_else(|| missing("n_up"))?,
            n_down.ok_or_else(|| missing("n_down"))?,
        )
    }
}
