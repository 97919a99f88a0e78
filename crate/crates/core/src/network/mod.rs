//! Analytic rate model for a chain of `N` edges that concentrate entanglement
//! catalytically before swapping.

mod rate;
mod sweep;
mod timing;
mod waiting;

pub use rate::{edge_catalyst, rate_catalytic, RateOptions, RateReport};
pub(crate) use rate::rate_with_catalyst;
pub use sweep::{
    alpha_grid, locate_n_cat_jumps, sweep_fig2, write_sweep_csv, NCatJump, SweepRow, WindowFlag,
    SWEEP_CSV_HEADER,
};
pub use timing::{
    t_catalyst, t_edge_cycle, t_primary, CatalystSupply, CatalystTime, CatalystTimeFormula,
    TimingBreakdown,
};
pub use waiting::{
    harmonic_number, waiting_factor, waiting_factor_inclusion_exclusion, waiting_factor_small_p,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default fiber length per edge, km.
pub const DEFAULT_LENGTH_KM: f64 = 25.0;
/// Default speed of light in fiber, km/s.
pub const DEFAULT_FIBER_SPEED_KM_S: f64 = 2.0e5;
/// Default heralding probability per attempt.
pub const DEFAULT_HERALD_PROBABILITY: f64 = 0.5;

/// Physical and protocol parameters of one edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeParams {
    pub length_km: f64,
    pub fiber_speed_km_s: f64,
    pub herald_probability: f64,
    pub copies: u32,
    pub alpha: f64,
    pub catalyst_dim: usize,
}

impl EdgeParams {
    /// Edge with the default physical layer.
    pub fn new(copies: u32, alpha: f64) -> Self {
        EdgeParams {
            length_km: DEFAULT_LENGTH_KM,
            fiber_speed_km_s: DEFAULT_FIBER_SPEED_KM_S,
            herald_probability: DEFAULT_HERALD_PROBABILITY,
            copies,
            alpha,
            catalyst_dim: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_km > 0.0 && self.length_km.is_finite()) {
            return Err(Error::invalid(format!("L0 must be positive, got {}", self.length_km)));
        }
        if !(self.fiber_speed_km_s > 0.0 && self.fiber_speed_km_s.is_finite()) {
            return Err(Error::invalid(format!(
                "fiber speed must be positive, got {}",
                self.fiber_speed_km_s
            )));
        }
        if !(self.herald_probability > 0.0 && self.herald_probability <= 1.0) {
            return Err(Error::invalid(format!(
                "P0 must lie in (0, 1], got {}",
                self.herald_probability
            )));
        }
        if self.copies < 2 {
            return Err(Error::invalid(format!("n must be at least 2, got {}", self.copies)));
        }
        if !(self.alpha > 0.5 && self.alpha < 1.0) {
            return Err(Error::invalid(format!("alpha must lie in (0.5, 1), got {}", self.alpha)));
        }
        if !matches!(self.catalyst_dim, 2 | 4) {
            return Err(Error::invalid(format!(
                "catalyst dimension must be 2 or 4, got {}",
                self.catalyst_dim
            )));
        }
        Ok(())
    }

    /// Round-trip heralding time `T0 = 2 L0 / c_f`, seconds.
    pub fn t0(&self) -> f64 {
        2.0 * self.length_km / self.fiber_speed_km_s
    }
}

/// One auxiliary short-range path supplying catalyst material.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxPath {
    pub alpha: f64,
    pub gen_probability: f64,
    pub gen_time_s: f64,
}

impl AuxPath {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.5 && self.alpha < 1.0) {
            return Err(Error::invalid(format!(
                "aux path alpha must lie in (0.5, 1), got {}",
                self.alpha
            )));
        }
        if !(self.gen_probability > 0.0 && self.gen_probability <= 1.0) {
            return Err(Error::invalid(format!(
                "aux path probability must lie in (0, 1], got {}",
                self.gen_probability
            )));
        }
        if !(self.gen_time_s > 0.0 && self.gen_time_s.is_finite()) {
            return Err(Error::invalid(format!(
                "aux path time must be positive, got {}",
                self.gen_time_s
            )));
        }
        Ok(())
    }
}

/// Availability of auxiliary paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxMode {
    /// Catalysts are replenished faster than they are lost.
    AuxRich,
    /// No auxiliary paths; catalysts come out of the primary supply.
    None,
    /// A finite list of auxiliary paths.
    Finite,
}

impl AuxMode {
    pub fn label(self) -> &'static str {
        match self {
            AuxMode::AuxRich => "aux_rich",
            AuxMode::None => "none",
            AuxMode::Finite => "finite",
        }
    }
}

impl fmt::Display for AuxMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AuxMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "aux_rich" | "aux-rich" => Ok(AuxMode::AuxRich),
            "none" => Ok(AuxMode::None),
            "finite" => Ok(AuxMode::Finite),
            other => Err(Error::invalid(format!(
                "unknown aux mode '{other}' (expected aux_rich, none or finite)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxConfig {
    pub mode: AuxMode,
    pub paths: Vec<AuxPath>,
}

impl AuxConfig {
    pub fn aux_rich() -> Self {
        AuxConfig {
            mode: AuxMode::AuxRich,
            paths: Vec::new(),
        }
    }

    pub fn none() -> Self {
        AuxConfig {
            mode: AuxMode::None,
            paths: Vec::new(),
        }
    }

    pub fn finite(paths: Vec<AuxPath>) -> Result<Self> {
        let cfg = AuxConfig {
            mode: AuxMode::Finite,
            paths,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == AuxMode::Finite && self.paths.is_empty() {
            return Err(Error::invalid("finite aux mode needs at least one path"));
        }
        self.paths.iter().try_for_each(AuxPath::validate)
    }
}

/// `alpha = tL / (tL + tR)`, relabeled so that `alpha >= 0.5`.
pub fn alpha_from_transmittivities(t_left: f64, t_right: f64) -> Result<f64> {
    for t in [t_left, t_right] {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::invalid(format!("transmittivity must lie in (0, 1), got {t}")));
        }
    }
    let a = t_left / (t_left + t_right);
    Ok(a.max(1.0 - a))
}

/// Overlap of `|alpha>` with the target Bell state, `1/2 + sqrt(alpha (1 - alpha))`.
pub fn fidelity_from_alpha(alpha: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha must lie in [0.5, 1], got {alpha}")));
    }
    Ok(0.5 + (alpha * (1.0 - alpha)).sqrt())
}

/// Inverse of [`fidelity_from_alpha`] on the `alpha >= 0.5` branch.
pub fn alpha_from_fidelity(fidelity: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&fidelity) {
        return Err(Error::invalid(format!("fidelity must lie in [0.5, 1], got {fidelity}")));
    }
    // alpha (1 - alpha) = s^2  =>  alpha = (1 + sqrt(1 - 4 s^2)) / 2
    let s = fidelity - 0.5;
    Ok(0.5 * (1.0 + (1.0 - 4.0 * s * s).max(0.0).sqrt()))
}

/// `(alpha (1 - alpha))^(N/2)`: the decay of the end-to-end Bell overlap above
/// 1/2 when `N` raw edges are swapped directly. Only the scaling is exposed;
/// the prefactor is not modeled.
pub fn swap_decay_scaling(alpha: f64, n_edges: u32) -> Result<f64> {
    if !(0.5..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha must lie in [0.5, 1], got {alpha}")));
    }
    if n_edges == 0 {
        return Err(Error::invalid("number of edges must be at least 1"));
    }
    Ok((alpha * (1.0 - alpha)).powf(n_edges as f64 / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transmittivity_examples() {
        assert_eq!(alpha_from_transmittivities(0.3, 0.3).unwrap(), 0.5);
        assert!((alpha_from_transmittivities(0.8, 0.2).unwrap() - 0.8).abs() < 1e-15);
        assert!((alpha_from_transmittivities(0.2, 0.8).unwrap() - 0.8).abs() < 1e-15);
        assert!(alpha_from_transmittivities(0.0, 0.5).is_err());
        assert!(alpha_from_transmittivities(0.5, 1.0).is_err());
    }

    #[test]
    fn fidelity_examples() {
        assert_eq!(fidelity_from_alpha(0.5).unwrap(), 1.0);
        assert!((fidelity_from_alpha(0.8).unwrap() - 0.9).abs() < 1e-15);
        assert!((fidelity_from_alpha(1.0 - 1e-12).unwrap() - 0.5) < 1e-5);
        assert!(fidelity_from_alpha(0.4).is_err());
    }

    #[test]
    fn fidelity_inverse() {
        for i in 0..100 {
            let alpha = 0.5 + 0.4999 * i as f64 / 99.0;
            let back = alpha_from_fidelity(fidelity_from_alpha(alpha).unwrap()).unwrap();
            assert!((back - alpha).abs() < 1e-7, "{alpha} -> {back}");
        }
    }

    #[test]
    fn swap_decay_examples() {
        assert_eq!(swap_decay_scaling(0.5, 2).unwrap(), 0.25);
        assert!((swap_decay_scaling(0.8, 4).unwrap() - 0.0256).abs() < 1e-15);
        assert!(swap_decay_scaling(0.7, 400).unwrap() < 1e-100);
        assert!(swap_decay_scaling(0.7, 0).is_err());
    }

    #[test]
    fn edge_validation_and_t0() {
        let e = EdgeParams::new(2, 0.8);
        e.validate().unwrap();
        assert!((e.t0() - 2.5e-4).abs() < 1e-18);
        assert!(EdgeParams { copies: 1, ..e.clone() }.validate().is_err());
        assert!(EdgeParams { catalyst_dim: 3, ..e.clone() }.validate().is_err());
        assert!(EdgeParams { herald_probability: 0.0, ..e.clone() }.validate().is_err());
        assert!(EdgeParams { length_km: -1.0, ..e }.validate().is_err());
    }

    #[test]
    fn aux_config_validation() {
        assert!(AuxConfig::finite(vec![]).is_err());
        let path = AuxPath {
            alpha: 0.7,
            gen_probability: 0.5,
            gen_time_s: 1e-3,
        };
        assert!(AuxConfig::finite(vec![path.clone()]).is_ok());
        assert!(AuxConfig::finite(vec![AuxPath { gen_time_s: 0.0, ..path }]).is_err());
        assert_eq!("aux_rich".parse::<AuxMode>().unwrap(), AuxMode::AuxRich);
        assert!("many".parse::<AuxMode>().is_err());
    }
}
