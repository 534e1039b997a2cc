//! Hyperbolicity constants and their configuration.
//!
//! κ, γ and ξ have no closed formulas; they are read from a TOML file named
//! by `HYPERSACK_CONSTANTS`, one section per backend kind:
//!
//! ```toml
//! [free]
//! kappa = 0
//! gamma = 1
//! xi = 0
//!
//! [free_product]
//! gamma = 3
//! ```
//!
//! Missing sections or fields keep the shipped defaults, which were chosen
//! with `hypersack bench --calibrate`.

use std::path::Path;

use serde::Deserialize;

use super::GroupError;

pub const CONSTANTS_ENV: &str = "HYPERSACK_CONSTANTS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Knobs {
    pub kappa: u64,
    pub gamma: u64,
    pub xi: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConstantsConfig {
    pub free: Knobs,
    pub finite: Knobs,
    pub free_product: Knobs,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig {
            free: Knobs {
                kappa: 0,
                gamma: 1,
                xi: 0,
            },
            finite: Knobs {
                kappa: 0,
                gamma: 1,
                xi: 0,
            },
            free_product: Knobs {
                kappa: 0,
                gamma: 1,
                xi: 0,
            },
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawKnobs {
    kappa: Option<u64>,
    gamma: Option<u64>,
    xi: Option<u64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    free: RawKnobs,
    #[serde(default)]
    finite: RawKnobs,
    #[serde(default)]
    free_product: RawKnobs,
}

fn merge(base: Knobs, raw: RawKnobs) -> Knobs {
    Knobs {
        kappa: raw.kappa.unwrap_or(base.kappa),
        gamma: raw.gamma.unwrap_or(base.gamma),
        xi: raw.xi.unwrap_or(base.xi),
    }
}

impl ConstantsConfig {
    pub fn from_toml(text: &str) -> Result<Self, GroupError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| GroupError::Config(e.to_string()))?;
        let d = ConstantsConfig::default();
        Ok(ConstantsConfig {
            free: merge(d.free, raw.free),
            finite: merge(d.finite, raw.finite),
            free_product: merge(d.free_product, raw.free_product),
        })
    }

    pub fn load(path: &Path) -> Result<Self, GroupError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GroupError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Defaults, overridden by the file named in `HYPERSACK_CONSTANTS` if set.
    pub fn from_env() -> Result<Self, GroupError> {
        match std::env::var_os(CONSTANTS_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HyperbolicConstants {
    pub delta: u64,
    /// |B_{2δ}(1)|
    pub n: u64,
    pub lambda: u64,
    pub epsilon: u64,
    pub l: u64,
    pub k_eh: u64,
    pub kappa: u64,
    pub gamma: u64,
    pub xi: u64,
}

impl HyperbolicConstants {
    pub(crate) fn assemble(delta: u64, n: u64, b4: u64, knobs: Knobs) -> Self {
        let l = 34 * delta + 2;
        let q = 2 * l + 1;
        HyperbolicConstants {
            delta,
            n,
            lambda: n * q,
            epsilon: 2 * n * n * q * q + 2 * n * q,
            l,
            k_eh: b4 * b4,
            kappa: knobs.kappa,
            gamma: knobs.gamma.max(2 * delta + 2 * knobs.kappa),
            xi: knobs.xi,
        }
    }

    /// λ and ε for which every power of a word of length `len` is quasigeodesic.
    pub fn for_word_length(&self, len: u64) -> (u64, u64) {
        let n = self.n;
        (n * len, 2 * n * n * len * len + 2 * n * len)
    }

    /// Width of the connecting words in a polygon with `2k` sides.
    pub fn h(&self, k: usize) -> u64 {
        let log = ((2 * k.max(1)) as f64).log2();
        self.xi + (self.xi as f64 * log).ceil() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_override_keeps_defaults() {
        let c = ConstantsConfig::from_toml("[free]\nxi = 2\n").unwrap();
        assert_eq!(c.free.xi, 2);
        assert_eq!(c.free.gamma, ConstantsConfig::default().free.gamma);
        assert_eq!(c.finite, ConstantsConfig::default().finite);
    }

    #[test]
    fn unknown_field_is_rejected() {
        assert!(ConstantsConfig::from_toml("[free]\nzeta = 1\n").is_err());
    }

    #[test]
    fn h_formula() {
        let mut c = HyperbolicConstants::assemble(0, 1, 1, ConstantsConfig::default().free);
        assert_eq!(c.h(4), 0);
        c.xi = 1;
        // 1 + ⌈log2 8⌉
        assert_eq!(c.h(4), 4);
    }

    #[test]
    fn gamma_is_clamped() {
        let knobs = Knobs {
            kappa: 1,
            gamma: 0,
            xi: 0,
        };
        let c = HyperbolicConstants::assemble(1, 5, 9, knobs);
        assert_eq!(c.gamma, 4);
        assert_eq!(c.l, 36);
        assert_eq!(c.k_eh, 81);
    }
}
