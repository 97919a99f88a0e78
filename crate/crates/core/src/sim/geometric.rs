use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;

use super::rng::{stream_rng, STREAM_CATALYSIS};
use super::{resolve, EdgeCounters, SimConfig, SimMode, SimResult, Welford};
use crate::error::{Error, Result};

/// Trials per parallel work item. Fixed so the reduction order never depends
/// on the thread count.
pub(crate) const BLOCK: u64 = 1024;

/// Per trial, every edge needs a geometric number of catalysis cycles of
/// length `<T_L0>`; the chain completes with the slowest edge.
pub fn simulate_abstract(cfg: &SimConfig) -> Result<SimResult> {
    if cfg.mode != SimMode::Abstract {
        return Err(Error::invalid("simulate_abstract needs mode = abstract"));
    }
    let resolved = resolve(cfg)?;
    let geometric = Geometric::new(resolved.p_cat)
        .map_err(|e| Error::invalid(format!("bad success probability: {e}")))?;
    let n = cfg.n_edges as usize;
    let trials = cfg.trials as u64;
    let blocks: Vec<(Vec<u64>, Vec<EdgeCounters>)> = (0..trials.div_ceil(BLOCK))
        .into_par_iter()
        .map(|block| {
            let range = block * BLOCK..((block + 1) * BLOCK).min(trials);
            let mut slowest = Vec::with_capacity(range.clone().count());
            let mut counters = vec![EdgeCounters::default(); n];
            for trial in range {
                let mut max_cycles = 0;
                for (edge, c) in counters.iter_mut().enumerate() {
                    let mut rng = stream_rng(cfg.seed, trial, edge as u32, STREAM_CATALYSIS);
                    let cycles = geometric.sample(&mut rng) + 1;
                    max_cycles = max_cycles.max(cycles);
                    let failures = cycles - 1;
                    // Replacement catalysts arrive as they are lost.
                    c.catalysis_attempts += cycles;
                    c.successes += 1;
                    c.failures += failures;
                    c.catalysts_produced += failures;
                    c.catalysts_consumed += failures;
                    c.stock_final += cfg.initial_stock as u64;
                    c.stock_peak = c.stock_peak.max(cfg.initial_stock as u64);
                }
                slowest.push(max_cycles);
            }
            (slowest, counters)
        })
        .collect();

    let mut stats = Welford::default();
    let mut counters = vec![EdgeCounters::default(); n];
    for (slowest, block_counters) in &blocks {
        for &cycles in slowest {
            stats.add(cycles as f64 * resolved.t_edge_cycle);
        }
        for (total, c) in counters.iter_mut().zip(block_counters) {
            total.merge(c);
        }
    }
    let mean = stats.mean().expect("at least one trial");
    Ok(SimResult {
        config: cfg.clone(),
        p_cat: resolved.p_cat,
        t_edge_cycle_s: resolved.t_edge_cycle,
        mean_completion_s: Some(mean),
        std_error_s: stats.std_error(),
        rate_hz: 1.0 / mean,
        deliveries: trials,
        simulated_time_s: mean * trials as f64,
        trials_completed: cfg.trials,
        timeout: false,
        counters,
        seed: cfg.seed,
    })
}
