use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::rng::{stream_rng, STREAM_AUX_BASE, STREAM_CATALYSIS, STREAM_LOADING};
use super::{resolve, EdgeCounters, SimConfig, SimMode, SimResult, Welford};
use crate::catalysis::n_cat_for_catalyst;
use crate::error::{Error, Result};
use crate::network::AuxMode;
use crate::schmidt::DEFAULT_DIM_CAP;

/// Static per-path parameters, in slot units.
#[derive(Clone, Debug)]
struct PathSpec {
    period_slots: f64,
    p: f64,
    n_cat: u32,
}

struct PathState {
    rng: ChaCha8Rng,
    /// Index of the next generation attempt; it completes at `next * period`.
    next: u64,
    pairs: u32,
}

struct Edge {
    load_rng: ChaCha8Rng,
    cat_rng: ChaCha8Rng,
    paths: Vec<PathState>,
    pairs: u32,
    ready: bool,
    stock: u64,
    c: EdgeCounters,
}

struct Params<'a> {
    n: u32,
    p0: f64,
    p_cat: f64,
    capacity: Option<u64>,
    aux_rich: bool,
    paths: &'a [PathSpec],
}

impl Edge {
    fn new(cfg: &SimConfig, paths: &[PathSpec], trial: u64, edge: u32) -> Self {
        let stock = cfg.initial_stock as u64;
        Edge {
            load_rng: stream_rng(cfg.seed, trial, edge, STREAM_LOADING),
            cat_rng: stream_rng(cfg.seed, trial, edge, STREAM_CATALYSIS),
            paths: (0..paths.len())
                .map(|i| PathState {
                    rng: stream_rng(cfg.seed, trial, edge, STREAM_AUX_BASE + i as u64),
                    next: 1,
                    pairs: 0,
                })
                .collect(),
            pairs: 0,
            ready: false,
            stock,
            c: EdgeCounters {
                stock_peak: stock,
                ..EdgeCounters::default()
            },
        }
    }

    fn add_catalyst(&mut self, capacity: Option<u64>) {
        if capacity.is_none_or(|cap| self.stock < cap) {
            self.stock += 1;
            self.c.catalysts_produced += 1;
            self.c.stock_peak = self.c.stock_peak.max(self.stock);
        }
    }

    /// Advances the edge through slot `slot`, which ends at `(slot + 1) T0`.
    fn step(&mut self, slot: u64, params: &Params) {
        if !self.ready && self.pairs < params.n {
            self.c.primary_attempts += 1;
            if self.load_rng.random::<f64>() < params.p0 {
                self.pairs += 1;
                if self.pairs == params.n {
                    self.c.loads_completed += 1;
                }
            }
        }

        let slot_end = (slot + 1) as f64;
        for i in 0..self.paths.len() {
            let spec = &params.paths[i];
            // Completion times falling inside this slot are served at its end.
            while self.paths[i].next as f64 * spec.period_slots <= slot_end * (1.0 + 1e-12) {
                let path = &mut self.paths[i];
                path.next += 1;
                if path.rng.random::<f64>() < spec.p {
                    path.pairs += 1;
                    if path.pairs >= spec.n_cat {
                        path.pairs -= spec.n_cat;
                        self.add_catalyst(params.capacity);
                    }
                }
            }
        }

        if !self.ready && self.pairs == params.n {
            if params.aux_rich && self.stock == 0 {
                self.add_catalyst(params.capacity);
            }
            if self.stock >= 1 {
                self.c.catalysis_attempts += 1;
                if self.cat_rng.random::<f64>() < params.p_cat {
                    // The catalyst is recovered; the Bell pair waits for delivery.
                    self.c.successes += 1;
                    self.ready = true;
                } else {
                    self.c.failures += 1;
                    self.pairs = 0;
                    self.stock -= 1;
                    self.c.catalysts_consumed += 1;
                }
            }
        }
    }
}

struct TrialOutcome {
    intervals: Vec<f64>,
    counters: Vec<EdgeCounters>,
}

fn run_trial(cfg: &SimConfig, params: &Params, trial: u64, t0: f64) -> TrialOutcome {
    let mut edges: Vec<Edge> = (0..cfg.n_edges)
        .map(|e| Edge::new(cfg, params.paths, trial, e))
        .collect();
    let mut intervals = Vec::new();
    let mut last_delivery = 0u64;
    for slot in 0..cfg.max_slots {
        for edge in edges.iter_mut() {
            edge.step(slot, params);
        }
        if edges.iter().all(|e| e.ready) {
            intervals.push((slot + 1 - last_delivery) as f64 * t0);
            last_delivery = slot + 1;
            for edge in edges.iter_mut() {
                edge.ready = false;
                edge.pairs = 0;
            }
        }
    }
    TrialOutcome {
        intervals,
        counters: edges
            .into_iter()
            .map(|e| EdgeCounters {
                stock_final: e.stock,
                ..e.c
            })
            .collect(),
    }
}

/// Slot-level simulation with slot length `T0`.
///
/// Per edge and slot: one primary attempt while fewer than `n` pairs are
/// held; auxiliary generations that completed during the slot, every
/// `n_cat` successes of a path turning into one catalyst (dropped at
/// capacity); then, with `n` pairs and a catalyst in stock, one catalysis
/// attempt. Success marks the edge ready and recycles the catalyst; failure
/// discards the pairs and loses the catalyst. When every edge is ready the
/// chain delivers and all edges restart loading with their stocks intact.
/// In aux-rich mode a lost catalyst is replaced before the next attempt.
pub fn simulate_detailed(cfg: &SimConfig) -> Result<SimResult> {
    if cfg.mode != SimMode::Detailed {
        return Err(Error::invalid("simulate_detailed needs mode = detailed"));
    }
    let resolved = resolve(cfg)?;
    let t0 = cfg.edge.t0();
    let paths = if cfg.aux.mode == AuxMode::Finite {
        cfg.aux
            .paths
            .iter()
            .map(|p| {
                Ok(PathSpec {
                    period_slots: p.gen_time_s / t0,
                    p: p.gen_probability,
                    n_cat: n_cat_for_catalyst(&resolved.catalyst, p.alpha, DEFAULT_DIM_CAP)?.max(1),
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let params = Params {
        n: cfg.edge.copies,
        p0: cfg.edge.herald_probability,
        p_cat: resolved.p_cat,
        capacity: cfg.stock_capacity.map(u64::from),
        aux_rich: cfg.aux.mode == AuxMode::AuxRich,
        paths: &paths,
    };

    let outcomes: Vec<TrialOutcome> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| run_trial(cfg, &params, trial, t0))
        .collect();

    let mut stats = Welford::default();
    let mut counters = vec![EdgeCounters::default(); cfg.n_edges as usize];
    let mut trials_completed = 0;
    for outcome in &outcomes {
        if !outcome.intervals.is_empty() {
            trials_completed += 1;
        }
        outcome.intervals.iter().for_each(|&x| stats.add(x));
        for (total, c) in counters.iter_mut().zip(&outcome.counters) {
            total.merge(c);
        }
    }
    let deliveries = stats.count();
    let simulated_time_s = cfg.trials as f64 * cfg.max_slots as f64 * t0;
    Ok(SimResult {
        config: cfg.clone(),
        p_cat: resolved.p_cat,
        t_edge_cycle_s: resolved.t_edge_cycle,
        mean_completion_s: stats.mean(),
        std_error_s: stats.std_error(),
        rate_hz: deliveries as f64 / simulated_time_s,
        deliveries,
        simulated_time_s,
        trials_completed,
        timeout: deliveries == 0,
        counters,
        seed: cfg.seed,
    })
}
