//! Average time per catalysis attempt on one edge.

use serde::Serialize;

use super::AuxPath;
use crate::catalysis::n_cat_for_catalyst;
use crate::error::{Error, Result};
use crate::schmidt::{SchmidtVector, DEFAULT_DIM_CAP};

/// Expected time to herald `n` primary pairs one after the other, `n T0 / P0`.
pub fn t_primary(n: u32, t0: f64, p0: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("copy count must be at least 1"));
    }
    if !(t0 > 0.0) {
        return Err(Error::invalid(format!("T0 must be positive, got {t0}")));
    }
    if !(p0 > 0.0 && p0 <= 1.0) {
        return Err(Error::invalid(format!("P0 must lie in (0, 1], got {p0}")));
    }
    Ok(n as f64 * t0 / p0)
}

/// How the per-path copy count enters the catalyst supply time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalystTimeFormula {
    /// `1 / sum_i (n_cat_i P_i / T_i)`.
    #[default]
    Printed,
    /// `1 / sum_i (P_i / (n_cat_i T_i))`: each path delivers one catalyst per
    /// `n_cat_i` successful generations. Diagnostic alternative.
    PerCopy,
}

/// Catalyst supply time over a set of auxiliary paths.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalystTime {
    pub t_cat: f64,
    /// `1 / (N_paths * min_i term_i)`, never below `t_cat`.
    pub bound: f64,
    pub n_cat_per_path: Vec<u32>,
}

/// Catalyst supply time for a two-qubit catalyst with larger coefficient `c0`.
pub fn t_catalyst(paths: &[AuxPath], c0: f64, formula: CatalystTimeFormula) -> Result<CatalystTime> {
    if !(c0 > 0.5 && c0 < 1.0) {
        return Err(Error::invalid(format!(
            "catalyst coefficient must lie in (0.5, 1), got {c0}"
        )));
    }
    let catalyst = SchmidtVector::two_qubit(c0)?;
    catalyst_time(paths, &catalyst, formula, DEFAULT_DIM_CAP)
}

pub(crate) fn catalyst_time(
    paths: &[AuxPath],
    catalyst: &SchmidtVector,
    formula: CatalystTimeFormula,
    cap: usize,
) -> Result<CatalystTime> {
    if paths.is_empty() {
        return Err(Error::invalid("catalyst time needs at least one auxiliary path"));
    }
    let mut n_cat_per_path = Vec::with_capacity(paths.len());
    let mut terms = Vec::with_capacity(paths.len());
    for path in paths {
        path.validate()?;
        let m = n_cat_for_catalyst(catalyst, path.alpha, cap)?.max(1);
        n_cat_per_path.push(m);
        let m = m as f64;
        terms.push(match formula {
            CatalystTimeFormula::Printed => m * path.gen_probability / path.gen_time_s,
            CatalystTimeFormula::PerCopy => path.gen_probability / (m * path.gen_time_s),
        });
    }
    let total: f64 = terms.iter().sum();
    let min = terms.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(CatalystTime {
        t_cat: 1.0 / total,
        bound: 1.0 / (paths.len() as f64 * min),
        n_cat_per_path,
    })
}

/// Where replacement catalysts come from after a failed attempt.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CatalystSupply {
    /// Replacement is never the bottleneck.
    AuxRich,
    /// Built from `n_cat` extra primary pairs.
    Primary { n_cat: u32 },
    /// Supplied by auxiliary paths in parallel with primary generation.
    Paths { t_cat: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimingBreakdown {
    pub t_pri: f64,
    pub t_cat: Option<f64>,
    pub t_pri_plus_cat: f64,
    /// Mean time per attempt, `P t_pri + (1 - P) t_pri_plus_cat`.
    pub t_edge_cycle: f64,
}

/// Mean time per catalysis attempt given the success probability and the
/// catalyst supply regime.
pub fn t_edge_cycle(
    p_cat: f64,
    n: u32,
    t0: f64,
    p0: f64,
    supply: CatalystSupply,
) -> Result<TimingBreakdown> {
    if !(0.0..=1.0).contains(&p_cat) {
        return Err(Error::invalid(format!("success probability must lie in [0, 1], got {p_cat}")));
    }
    let t_pri = t_primary(n, t0, p0)?;
    let (t_cat, t_pri_plus_cat) = match supply {
        CatalystSupply::AuxRich => (None, t_pri),
        CatalystSupply::Primary { n_cat } => {
            let t_cat = n_cat as f64 * t0 / p0;
            (Some(t_cat), (n + n_cat) as f64 * t0 / p0)
        }
        CatalystSupply::Paths { t_cat } => {
            if !(t_cat > 0.0) {
                return Err(Error::invalid(format!("catalyst time must be positive, got {t_cat}")));
            }
            (Some(t_cat), t_pri.max(t_cat))
        }
    };
    Ok(TimingBreakdown {
        t_pri,
        t_cat,
        t_pri_plus_cat,
        t_edge_cycle: p_cat * t_pri + (1.0 - p_cat) * t_pri_plus_cat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primary_time_examples() {
        assert!((t_primary(2, 2.5e-4, 0.5).unwrap() - 1e-3).abs() < 1e-18);
        assert_eq!(t_primary(1, 0.7, 1.0).unwrap(), 0.7);
        assert_eq!(t_primary(4, 1.0, 0.25).unwrap(), 16.0);
        assert!(t_primary(0, 1.0, 0.5).is_err());
        assert!(t_primary(2, 1.0, 0.0).is_err());
    }

    #[test]
    fn catalyst_time_examples() {
        // alpha 0.8 needs 3 copies for c0 = 0.59196.
        let path = AuxPath {
            alpha: 0.8,
            gen_probability: 0.5,
            gen_time_s: 1e-3,
        };
        let one = t_catalyst(std::slice::from_ref(&path), 0.59196, CatalystTimeFormula::Printed).unwrap();
        assert_eq!(one.n_cat_per_path, vec![3]);
        assert!((one.t_cat - 1.0 / 1500.0).abs() < 1e-15);
        let two = t_catalyst(&[path.clone(), path.clone()], 0.59196, CatalystTimeFormula::Printed).unwrap();
        assert!((two.t_cat - one.t_cat / 2.0).abs() < 1e-15);
        assert!(two.t_cat <= two.bound + 1e-18);

        let alt = t_catalyst(std::slice::from_ref(&path), 0.59196, CatalystTimeFormula::PerCopy).unwrap();
        assert!((alt.t_cat - 3.0 * 1e-3 / 0.5).abs() < 1e-15);
        assert!(t_catalyst(&[], 0.6, CatalystTimeFormula::Printed).is_err());
    }

    #[test]
    fn bound_dominates_for_mixed_paths() {
        let paths = [
            AuxPath { alpha: 0.7, gen_probability: 0.9, gen_time_s: 1e-3 },
            AuxPath { alpha: 0.95, gen_probability: 0.2, gen_time_s: 5e-3 },
            AuxPath { alpha: 0.6, gen_probability: 0.5, gen_time_s: 2e-4 },
        ];
        for formula in [CatalystTimeFormula::Printed, CatalystTimeFormula::PerCopy] {
            let t = t_catalyst(&paths, 0.65, formula).unwrap();
            assert!(t.t_cat <= t.bound);
        }
    }

    #[test]
    fn edge_cycle_regimes() {
        let rich = t_edge_cycle(0.7, 2, 2.5e-4, 0.5, CatalystSupply::AuxRich).unwrap();
        assert_eq!(rich.t_edge_cycle, rich.t_pri);
        assert_eq!(rich.t_cat, None);

        let none = t_edge_cycle(0.88227, 2, 2.5e-4, 0.5, CatalystSupply::Primary { n_cat: 3 }).unwrap();
        assert!((none.t_pri_plus_cat - 2.5e-3).abs() < 1e-15);
        assert!((none.t_edge_cycle - 1.1766e-3).abs() < 1e-7);

        let slow = t_edge_cycle(0.5, 2, 2.5e-4, 0.5, CatalystSupply::Paths { t_cat: 4e-3 }).unwrap();
        assert_eq!(slow.t_pri_plus_cat, 4e-3);
        let fast = t_edge_cycle(0.5, 2, 2.5e-4, 0.5, CatalystSupply::Paths { t_cat: 1e-4 }).unwrap();
        assert_eq!(fast.t_pri_plus_cat, fast.t_pri);

        for supply in [
            CatalystSupply::AuxRich,
            CatalystSupply::Primary { n_cat: 5 },
            CatalystSupply::Paths { t_cat: 1.0 },
        ] {
            let t = t_edge_cycle(1.0, 3, 1e-3, 0.2, supply).unwrap();
            assert_eq!(t.t_edge_cycle, t.t_pri);
            let t = t_edge_cycle(0.3, 3, 1e-3, 0.2, supply).unwrap();
            assert!(t.t_pri <= t.t_edge_cycle && t.t_edge_cycle <= t.t_pri_plus_cat);
        }
    }
}
