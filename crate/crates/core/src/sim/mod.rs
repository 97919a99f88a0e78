//! Monte Carlo simulation of an `N`-edge chain.
//!
//! Two modes are provided. The abstract mode draws a geometric number of
//! catalysis cycles per edge, each lasting the analytic mean cycle time, and
//! takes the maximum over edges. The detailed mode steps a global clock in
//! slots of `T0` and tracks pair loading, catalyst stock, recycling on
//! success, loss on failure and auxiliary replenishment per edge.
//!
//! Trials run in parallel; every trial owns its random streams and results
//! are reduced in trial order, so output does not depend on the thread count.

mod detailed;
mod geometric;
mod rng;
mod validate;

pub use detailed::simulate_detailed;
pub use geometric::simulate_abstract;
pub use validate::{validate_waiting_factor, WaitingFactorCheck};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::catalysis::CatalystSpec;
use crate::error::{Error, Result};
use crate::network::{edge_catalyst, rate_with_catalyst, AuxConfig, EdgeParams, RateOptions};
use crate::schmidt::SchmidtVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    Abstract,
    Detailed,
}

impl fmt::Display for SimMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimMode::Abstract => "abstract",
            SimMode::Detailed => "detailed",
        })
    }
}

impl FromStr for SimMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "abstract" => Ok(SimMode::Abstract),
            "detailed" => Ok(SimMode::Detailed),
            other => Err(Error::invalid(format!(
                "unknown simulation mode '{other}' (expected abstract or detailed)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub n_edges: u32,
    pub edge: EdgeParams,
    pub aux: AuxConfig,
    /// Catalysts held by every edge at the start of each trial.
    pub initial_stock: u32,
    /// `None` is unlimited.
    pub stock_capacity: Option<u32>,
    pub mode: SimMode,
    /// Slots per trial in detailed mode.
    pub max_slots: u64,
    pub trials: u32,
    pub seed: u64,
    /// Replaces the optimal catalysis success probability.
    pub p_cat_override: Option<f64>,
}

impl SimConfig {
    pub fn new(n_edges: u32, edge: EdgeParams, aux: AuxConfig, mode: SimMode) -> Self {
        SimConfig {
            n_edges,
            edge,
            aux,
            initial_stock: 1,
            stock_capacity: None,
            mode,
            max_slots: 100_000,
            trials: 1,
            seed: 0,
            p_cat_override: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_edges == 0 {
            return Err(Error::invalid("number of edges must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.mode == SimMode::Detailed && self.max_slots == 0 {
            return Err(Error::invalid("max_slots must be at least 1"));
        }
        if let Some(cap) = self.stock_capacity {
            if cap < self.initial_stock {
                return Err(Error::invalid(format!(
                    "stock capacity {cap} is below the initial stock {}",
                    self.initial_stock
                )));
            }
        }
        if let Some(p) = self.p_cat_override {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::invalid(format!("P_cat override must lie in (0, 1], got {p}")));
            }
        }
        self.edge.validate()?;
        self.aux.validate()
    }
}

/// Event counts for one edge, summed over trials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EdgeCounters {
    pub primary_attempts: u64,
    /// Times the edge reached `n` stored pairs.
    pub loads_completed: u64,
    pub catalysis_attempts: u64,
    pub successes: u64,
    pub failures: u64,
    pub catalysts_produced: u64,
    /// Catalysts lost to failed attempts; successful attempts recycle.
    pub catalysts_consumed: u64,
    /// Sum over trials of the stock left at the end of the trial.
    pub stock_final: u64,
    /// Largest stock seen in any trial.
    pub stock_peak: u64,
}

impl EdgeCounters {
    pub(crate) fn merge(&mut self, other: &EdgeCounters) {
        self.primary_attempts += other.primary_attempts;
        self.loads_completed += other.loads_completed;
        self.catalysis_attempts += other.catalysis_attempts;
        self.successes += other.successes;
        self.failures += other.failures;
        self.catalysts_produced += other.catalysts_produced;
        self.catalysts_consumed += other.catalysts_consumed;
        self.stock_final += other.stock_final;
        self.stock_peak = self.stock_peak.max(other.stock_peak);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimResult {
    pub config: SimConfig,
    /// Catalysis success probability used per attempt.
    pub p_cat: f64,
    /// Analytic mean time per catalysis attempt for this configuration.
    pub t_edge_cycle_s: f64,
    /// Mean time to a chain delivery; `None` when nothing was delivered.
    pub mean_completion_s: Option<f64>,
    pub std_error_s: Option<f64>,
    pub rate_hz: f64,
    pub deliveries: u64,
    pub simulated_time_s: f64,
    /// Trials with at least one delivery.
    pub trials_completed: u32,
    /// Set when a detailed run delivered nothing within `max_slots`.
    pub timeout: bool,
    pub counters: Vec<EdgeCounters>,
    pub seed: u64,
}

impl SimResult {
    /// One JSON-lines record.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("simulation results contain only finite numbers")
    }
}

pub fn simulate(cfg: &SimConfig) -> Result<SimResult> {
    match cfg.mode {
        SimMode::Abstract => simulate_abstract(cfg),
        SimMode::Detailed => simulate_detailed(cfg),
    }
}

/// Catalyst, success probability and analytic cycle time for a config.
pub(crate) struct Resolved {
    pub catalyst: SchmidtVector,
    pub p_cat: f64,
    pub t_edge_cycle: f64,
}

pub(crate) fn resolve(cfg: &SimConfig) -> Result<Resolved> {
    cfg.validate()?;
    let options = RateOptions::default();
    let spec = match (edge_catalyst(&cfg.edge, &options), cfg.p_cat_override) {
        (Ok(spec), None) => spec,
        (Ok(spec), Some(p)) => CatalystSpec {
            success_probability: p,
            ..spec
        },
        // A forced probability outside the catalysis window runs with a
        // trivial catalyst.
        (Err(Error::Domain(_)), Some(p)) => CatalystSpec {
            spectrum: SchmidtVector::product(),
            success_probability: p,
        },
        (Err(e), _) => return Err(e),
    };
    let report = rate_with_catalyst(&cfg.edge, &cfg.aux, cfg.n_edges, &spec, &options)?;
    Ok(Resolved {
        catalyst: spec.spectrum,
        p_cat: spec.success_probability,
        t_edge_cycle: report.timing.t_edge_cycle,
    })
}

/// Mean and standard error of the mean, accumulated in order.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn add(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then_some(self.mean)
    }

    pub fn std_error(&self) -> Option<f64> {
        match self.count {
            0 => None,
            1 => Some(0.0),
            n => Some((self.m2 / (n - 1) as f64 / n as f64).sqrt()),
        }
    }
}
