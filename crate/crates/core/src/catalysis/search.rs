//! Numerical search for the catalyst that maximizes the concentration
//! success probability.
//!
//! The objective is a minimum of monotone ratios over a sorted tensor product,
//! so it is only piecewise smooth. Points are parameterized on the ordered
//! simplex `c_1 >= ... >= c_d >= 0` through barycentric weights on the
//! vertices `v_k = (1/k, ..., 1/k, 0, ...)`, which are in turn produced by
//! stick-breaking from the unit cube. A coarse grid on the cube is followed by
//! a compass/diagonal pattern search. For `d > 2` the optimum of dimension
//! `d - 1`, padded with a zero, is refined as a second seed, so the result
//! never falls below the lower-dimensional optimum.

use rayon::prelude::*;

use super::{CatalystSpec, ConcentrationProblem, Evaluator};
use crate::error::{Error, Result};
use crate::schmidt::{SchmidtVector, DEFAULT_DIM_CAP};

/// Tuning knobs for [`search_catalyst`].
#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Grid points for the single free parameter of a two-dimensional catalyst.
    pub grid_points_2d: usize,
    /// Grid points per free parameter for `d > 2`.
    pub grid_points_per_axis: usize,
    /// Refinement stops once the pattern step falls below this size.
    pub min_step: f64,
    /// Objective evaluations allowed for each refinement run.
    pub max_evals: usize,
    /// Allowed range of the largest catalyst coefficient.
    pub leading_range: (f64, f64),
    pub dim_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_points_2d: 200,
            grid_points_per_axis: 40,
            min_step: 1e-12,
            max_evals: 1_000_000,
            leading_range: (0.5, 1.0),
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

const MAX_GRID: usize = 20_000_000;

/// Finds a catalyst of dimension `d_c` maximizing the catalysis probability.
///
/// Ties are broken toward the smaller largest coefficient.
pub fn search_catalyst(
    problem: &ConcentrationProblem,
    d_c: usize,
    config: &SearchConfig,
) -> Result<CatalystSpec> {
    if d_c < 2 {
        return Err(Error::invalid(format!(
            "catalyst dimension must be at least 2, got {d_c}"
        )));
    }
    if !problem.in_window() {
        return Err(Error::Domain(format!(
            "catalysis unnecessary or unsupported for n = {} at alpha = {}",
            problem.n(),
            problem.alpha()
        )));
    }
    let (lo, hi) = config.leading_range;
    if !(0.5..=1.0).contains(&lo) || !(lo..=1.0).contains(&hi) {
        return Err(Error::invalid(format!(
            "leading coefficient range must satisfy 0.5 <= lo <= hi <= 1, got ({lo}, {hi})"
        )));
    }
    if !(config.min_step > 0.0) || config.grid_points_2d < 2 || config.grid_points_per_axis < 2 {
        return Err(Error::invalid("grid needs at least 2 points and a positive step"));
    }
    let evaluator = Evaluator::new(problem, config.dim_cap)?;
    let searcher = Searcher {
        evaluator: &evaluator,
        dim: d_c,
        config,
    };
    let best = searcher.run()?;
    Ok(CatalystSpec {
        spectrum: SchmidtVector::from_sorted(best.coefficients),
        success_probability: best.value,
    })
}

#[derive(Clone, Debug)]
struct Candidate {
    u: Vec<f64>,
    coefficients: Vec<f64>,
    value: f64,
}

impl Candidate {
    /// Higher probability wins; ties go to the smaller leading coefficient.
    fn beats(&self, other: &Candidate) -> bool {
        self.value > other.value
            || (self.value == other.value && self.coefficients[0] < other.coefficients[0])
    }
}

struct Searcher<'a> {
    evaluator: &'a Evaluator,
    dim: usize,
    config: &'a SearchConfig,
}

impl Searcher<'_> {
    fn run(&self) -> Result<Candidate> {
        let grid_best = self.grid()?;
        let mut best = self.refine(grid_best)?;
        if self.dim > 2 {
            let lower = Searcher {
                evaluator: self.evaluator,
                dim: self.dim - 1,
                config: self.config,
            }
            .run()?;
            let mut padded = lower.coefficients.clone();
            padded.push(0.0);
            let seed = self.candidate(self.to_cube(&padded))?;
            let refined = self.refine(seed)?;
            if refined.beats(&best) {
                best = refined;
            }
        }
        Ok(best)
    }

    fn grid(&self) -> Result<Candidate> {
        let free = self.dim - 1;
        let per_axis = if self.dim == 2 {
            self.config.grid_points_2d
        } else {
            self.config.grid_points_per_axis
        };
        let total = per_axis
            .checked_pow(free as u32)
            .filter(|t| *t <= MAX_GRID)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "grid of {per_axis}^{free} points is too large; lower the resolution"
                ))
            })?;
        let step = 1.0 / (per_axis - 1) as f64;
        let results: Vec<Result<Candidate>> = (0..total)
            .into_par_iter()
            .map(|index| {
                let mut rest = index;
                let u = (0..free)
                    .map(|_| {
                        let i = rest % per_axis;
                        rest /= per_axis;
                        i as f64 * step
                    })
                    .collect();
                self.candidate(u)
            })
            .collect();
        let mut best: Option<Candidate> = None;
        for r in results {
            let c = r?;
            if best.as_ref().is_none_or(|b| c.beats(b)) {
                best = Some(c);
            }
        }
        Ok(best.expect("non-empty grid"))
    }

    fn refine(&self, start: Candidate) -> Result<Candidate> {
        let free = self.dim - 1;
        let directions = pattern_directions(free);
        let per_axis = if self.dim == 2 {
            self.config.grid_points_2d
        } else {
            self.config.grid_points_per_axis
        };
        let mut step = 1.0 / (per_axis - 1) as f64;
        let mut current = start;
        let mut evals = 0usize;
        while step >= self.config.min_step {
            let mut improved: Option<Candidate> = None;
            for dir in &directions {
                let u: Vec<f64> = current
                    .u
                    .iter()
                    .zip(dir)
                    .map(|(x, d)| (x + step * d).clamp(0.0, 1.0))
                    .collect();
                if u == current.u {
                    continue;
                }
                evals += 1;
                let cand = self.candidate(u)?;
                if cand.beats(improved.as_ref().unwrap_or(&current)) {
                    improved = Some(cand);
                }
            }
            match improved {
                Some(c) => current = c,
                None => step *= 0.5,
            }
            if evals > self.config.max_evals {
                return Err(Error::numeric(
                    format!(
                        "catalyst search did not converge within {} evaluations (step {step:e})",
                        self.config.max_evals
                    ),
                    Some(current.coefficients),
                ));
            }
        }
        Ok(current)
    }

    fn candidate(&self, u: Vec<f64>) -> Result<Candidate> {
        let coefficients = self.to_coefficients(&u);
        let (lo, hi) = self.config.leading_range;
        let value = if self.dim > 2 && !(lo..=hi).contains(&coefficients[0]) {
            f64::NEG_INFINITY
        } else {
            let spectrum = SchmidtVector::from_sorted(coefficients.clone());
            self.evaluator.probability(&spectrum)?
        };
        Ok(Candidate {
            u,
            coefficients,
            value,
        })
    }

    fn to_coefficients(&self, u: &[f64]) -> Vec<f64> {
        if self.dim == 2 {
            let (lo, hi) = self.config.leading_range;
            let c1 = lo + u[0] * (hi - lo);
            // Exact for c1 >= 0.5.
            return vec![c1, 1.0 - c1];
        }
        let weights = stick_breaking(u);
        // c_j = sum_{k >= j} w_k / k
        let mut c = vec![0.0; self.dim];
        let mut acc = 0.0;
        for j in (0..self.dim).rev() {
            acc += weights[j] / (j + 1) as f64;
            c[j] = acc;
        }
        c
    }

    /// Inverse of [`to_coefficients`](Self::to_coefficients) for a sorted
    /// spectrum of this searcher's dimension.
    fn to_cube(&self, c: &[f64]) -> Vec<f64> {
        if self.dim == 2 {
            let (lo, hi) = self.config.leading_range;
            return vec![if hi > lo { ((c[0] - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.0 }];
        }
        let d = self.dim;
        let weights: Vec<f64> = (0..d)
            .map(|k| ((k + 1) as f64 * (c[k] - c.get(k + 1).copied().unwrap_or(0.0))).max(0.0))
            .collect();
        let mut remaining = 1.0;
        let mut u = Vec::with_capacity(d - 1);
        for w in &weights[..d - 1] {
            let ui = if remaining > 0.0 { (w / remaining).clamp(0.0, 1.0) } else { 0.0 };
            u.push(ui);
            remaining -= w;
        }
        u
    }
}

fn stick_breaking(u: &[f64]) -> Vec<f64> {
    let mut weights = Vec::with_capacity(u.len() + 1);
    let mut remaining = 1.0;
    for ui in u {
        let w = remaining * ui;
        weights.push(w);
        remaining -= w;
    }
    weights.push(remaining.max(0.0));
    weights
}

/// Unit coordinate moves plus pairwise diagonals, which let the search follow
/// ridges of the max-min objective that are not axis aligned.
fn pattern_directions(free: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for i in 0..free {
        for s in [1.0, -1.0] {
            let mut d = vec![0.0; free];
            d[i] = s;
            dirs.push(d);
        }
    }
    for i in 0..free {
        for j in (i + 1)..free {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut d = vec![0.0; free];
                d[i] = si;
                d[j] = sj;
                dirs.push(d);
            }
        }
    }
    dirs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalysis::{catalysis_probability, optimal_two_qubit_catalyst};

    fn problem(n: u32, alpha: f64) -> ConcentrationProblem {
        ConcentrationProblem::new(n, alpha).unwrap()
    }

    #[test]
    fn two_dim_search_matches_closed_form() {
        let p = problem(2, 0.8);
        let found = search_catalyst(&p, 2, &SearchConfig::default()).unwrap();
        let exact = optimal_two_qubit_catalyst(&p).unwrap();
        assert!((found.leading() - exact.leading()).abs() < 1e-4);
        assert!((found.success_probability - exact.success_probability).abs() < 1e-6);
        assert!((found.leading() - 0.592).abs() < 1e-3);
    }

    #[test]
    fn four_dim_search_dominates_two_dim() {
        let p = problem(2, 0.8);
        let two = search_catalyst(&p, 2, &SearchConfig::default()).unwrap();
        let four = search_catalyst(&p, 4, &SearchConfig::default()).unwrap();
        assert_eq!(four.dimension(), 4);
        assert!(four.success_probability >= two.success_probability - 1e-9);
        let recomputed = catalysis_probability(&p, &four.spectrum).unwrap();
        assert_eq!(recomputed, four.success_probability);
    }

    #[test]
    fn search_pinned_to_product_catalyst_recovers_locc() {
        let p = problem(3, 0.9);
        let config = SearchConfig {
            leading_range: (1.0, 1.0),
            ..SearchConfig::default()
        };
        let found = search_catalyst(&p, 2, &config).unwrap();
        assert_eq!(found.spectrum.coefficients(), &[1.0, 0.0]);
        assert!((found.success_probability - p.locc_probability()).abs() < 1e-12);
    }

    #[test]
    fn search_errors() {
        let p = problem(2, 0.8);
        assert!(matches!(search_catalyst(&p, 1, &SearchConfig::default()), Err(Error::InvalidInput(_))));
        assert!(matches!(
            search_catalyst(&problem(5, 0.8), 2, &SearchConfig::default()),
            Err(Error::Domain(_))
        ));
        let starved = SearchConfig {
            max_evals: 3,
            ..SearchConfig::default()
        };
        match search_catalyst(&p, 2, &starved) {
            Err(Error::NumericFailure { best: Some(b), .. }) => assert_eq!(b.len(), 2),
            other => panic!("expected numeric failure, got {other:?}"),
        }
    }

    #[test]
    fn cube_round_trip() {
        let evaluator = Evaluator::new(&problem(2, 0.8), DEFAULT_DIM_CAP).unwrap();
        let config = SearchConfig::default();
        let s = Searcher {
            evaluator: &evaluator,
            dim: 4,
            config: &config,
        };
        let c = [0.5, 0.3, 0.15, 0.05];
        let back = s.to_coefficients(&s.to_cube(&c));
        for (a, b) in c.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
