use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::Serialize;

use super::geometric::BLOCK;
use super::rng::{stream_rng, STREAM_CATALYSIS};
use super::Welford;
use crate::error::{Error, Result};
use crate::network::waiting_factor;

/// Empirical mean of the maximum of `N` geometric variables against `Z(N, P)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WaitingFactorCheck {
    pub n_edges: u32,
    pub p: f64,
    pub trials: u32,
    pub seed: u64,
    pub empirical: f64,
    pub std_error: f64,
    pub analytic: f64,
    /// `(empirical - analytic) / std_error`; zero when both agree exactly.
    pub z_score: f64,
    /// Agreement within three standard errors.
    pub pass: bool,
}

pub fn validate_waiting_factor(n_edges: u32, p: f64, trials: u32, seed: u64) -> Result<WaitingFactorCheck> {
    let analytic = waiting_factor(n_edges, p)?;
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let geometric = Geometric::new(p).map_err(|e| Error::invalid(format!("bad probability: {e}")))?;
    let trials64 = trials as u64;
    let blocks: Vec<Vec<u64>> = (0..trials64.div_ceil(BLOCK))
        .into_par_iter()
        .map(|block| {
            (block * BLOCK..((block + 1) * BLOCK).min(trials64))
                .map(|trial| {
                    (0..n_edges)
                        .map(|edge| {
                            let mut rng = stream_rng(seed, trial, edge, STREAM_CATALYSIS);
                            geometric.sample(&mut rng) + 1
                        })
                        .max()
                        .unwrap_or(0)
                })
                .collect()
        })
        .collect();
    let mut stats = Welford::default();
    blocks.iter().flatten().for_each(|&m| stats.add(m as f64));
    let empirical = stats.mean().expect("at least one trial");
    let std_error = stats.std_error().unwrap_or(0.0);
    let diff = empirical - analytic;
    let z_score = if std_error > 0.0 { diff / std_error } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
    Ok(WaitingFactorCheck {
        n_edges,
        p,
        trials,
        seed,
        empirical,
        std_error,
        analytic,
        z_score,
        pass: diff.abs() <= 3.0 * std_error + 1e-12 * analytic,
    })
}
