//! Catalytic entanglement concentration.
//!
//! The concentration problem takes `n` copies of the edge state
//! `|alpha> = sqrt(alpha)|HV> + sqrt(1-alpha)|VH>` to one Bell pair plus
//! `n - 1` product pairs. Without assistance the optimal LOCC success
//! probability is `min(1, 2(1 - alpha^n))`. A shared two-qubit catalyst with
//! larger coefficient `c0(n, alpha)` raises it to `(1 - alpha^n)/(1 - c0)`
//! for `2 <= n <= n_star(alpha) - 1`, and the catalyst is returned on success.

mod intermediate;
mod search;
mod supply;

pub use intermediate::intermediate_state;
pub use search::{search_catalyst, SearchConfig};
pub use supply::{combined_supply_feasible, n_cat_for_catalyst, n_cat_required};

use crate::error::{Error, Result};
use crate::schmidt::{conversion_probability, SchmidtVector, DEFAULT_DIM_CAP};

/// `n` copies of `|alpha>` to be concentrated into one Bell pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcentrationProblem {
    n: u32,
    alpha: f64,
}

impl ConcentrationProblem {
    pub fn new(n: u32, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("copy count n must be at least 1"));
        }
        if !(alpha > 0.5 && alpha < 1.0) {
            return Err(Error::invalid(format!(
                "alpha must lie in (0.5, 1), got {alpha}"
            )));
        }
        Ok(ConcentrationProblem { n, alpha })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `1 - alpha^n`, evaluated without cancellation.
    pub fn one_minus_alpha_pow_n(&self) -> f64 {
        -(self.n as f64 * self.alpha.ln()).exp_m1()
    }

    /// Whether `2 <= n <= n_star(alpha) - 1`.
    pub fn in_window(&self) -> bool {
        self.n >= 2 && self.n < n_star_unchecked(self.alpha)
    }

    /// Spectrum of `|alpha>^{(x)n}`.
    pub fn initial_spectrum(&self) -> Result<SchmidtVector> {
        self.initial_spectrum_capped(DEFAULT_DIM_CAP)
    }

    pub fn initial_spectrum_capped(&self, cap: usize) -> Result<SchmidtVector> {
        let dim = pow2(self.n);
        if dim > cap {
            return Err(Error::ResourceLimit { dim, cap });
        }
        let beta = 1.0 - self.alpha;
        let mut coefficients = Vec::with_capacity(dim);
        let mut multiplicity: u64 = 1;
        // k = number of factors equal to alpha, from n down to 0 keeps the
        // output already sorted.
        for j in 0..=self.n {
            let k = self.n - j;
            let value = self.alpha.powi(k as i32) * beta.powi(j as i32);
            coefficients.extend(std::iter::repeat_n(value, multiplicity as usize));
            multiplicity = multiplicity * (self.n - j) as u64 / (j + 1) as u64;
        }
        Ok(SchmidtVector::from_sorted(coefficients))
    }

    /// Spectrum of `|beta>|00>^{(x)(n-1)}`: `(1/2, 1/2, 0, ..., 0)` of
    /// dimension `2^n`.
    pub fn target_spectrum(&self) -> Result<SchmidtVector> {
        target_spectrum(self.n)
    }

    /// `min(1, 2(1 - alpha^n))`.
    pub fn locc_probability(&self) -> f64 {
        (2.0 * self.one_minus_alpha_pow_n()).min(1.0)
    }
}

/// Target of the concentration: a Bell pair padded to dimension `2^n`.
pub fn target_spectrum(n: u32) -> Result<SchmidtVector> {
    if n == 0 {
        return Err(Error::invalid("copy count n must be at least 1"));
    }
    let dim = pow2(n);
    if dim > DEFAULT_DIM_CAP {
        return Err(Error::ResourceLimit {
            dim,
            cap: DEFAULT_DIM_CAP,
        });
    }
    Ok(SchmidtVector::new(&[0.5, 0.5]).expect("bell").padded(dim))
}

/// `2^n`, saturating.
fn pow2(n: u32) -> usize {
    if n >= usize::BITS - 1 {
        usize::MAX
    } else {
        1usize << n
    }
}

/// Smallest copy count from which LOCC alone concentrates deterministically,
/// `ceil(1 / log2(1/alpha))`.
pub fn n_star(alpha: f64) -> Result<u32> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::invalid(format!(
            "alpha must lie in (0.5, 1), got {alpha}"
        )));
    }
    Ok(n_star_unchecked(alpha))
}

fn n_star_unchecked(alpha: f64) -> u32 {
    let estimate = (1.0 / (1.0 / alpha).log2()).ceil().max(1.0);
    if estimate >= u32::MAX as f64 {
        return u32::MAX;
    }
    // The closed form can be off by one at exact boundaries; settle it on the
    // defining condition alpha^n <= 1/2.
    let mut n = estimate as u32;
    while n > 1 && alpha.powi(n as i32 - 1) <= 0.5 {
        n -= 1;
    }
    while alpha.powi(n as i32) > 0.5 {
        n += 1;
    }
    n
}

/// Larger coefficient of the optimal two-qubit catalyst and its complement,
/// `c0 = (1 + 3a - sqrt((1 + 3a)^2 - 16a^2)) / 4a` with `a = alpha^n`.
///
/// No window check; outside `2 <= n < n_star` the value is not a valid
/// larger coefficient (e.g. `n = 2, alpha = 0.5` gives 0.3139).
pub fn closed_form_c0(n: u32, alpha: f64) -> (f64, f64) {
    let a = alpha.powi(n as i32);
    let one_minus_a = -(n as f64 * alpha.ln()).exp_m1();
    // (1 + 3a)^2 - 16a^2 = (1 - a)(1 + 7a)
    let root = (one_minus_a * (1.0 + 7.0 * a)).sqrt();
    let c0 = (1.0 + 3.0 * a - root) / (4.0 * a);
    let tail = (root - one_minus_a) / (4.0 * a);
    (c0, tail)
}

/// A catalyst spectrum together with the success probability it achieves on
/// the problem it was built for.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalystSpec {
    pub spectrum: SchmidtVector,
    pub success_probability: f64,
}

impl CatalystSpec {
    pub fn dimension(&self) -> usize {
        self.spectrum.dim()
    }

    /// Largest Schmidt coefficient.
    pub fn leading(&self) -> f64 {
        self.spectrum.largest()
    }
}

/// Closed-form optimal two-qubit catalyst, defined for `2 <= n <= n_star - 1`.
pub fn optimal_two_qubit_catalyst(problem: &ConcentrationProblem) -> Result<CatalystSpec> {
    if !problem.in_window() {
        return Err(Error::Domain(format!(
            "catalysis unnecessary or unsupported for n = {} at alpha = {} (window is 2..={})",
            problem.n,
            problem.alpha,
            n_star_unchecked(problem.alpha).saturating_sub(1)
        )));
    }
    let (c0, tail) = closed_form_c0(problem.n, problem.alpha);
    if !(c0 > 0.5 && c0 < 1.0) {
        return Err(Error::numeric(
            format!("closed-form catalyst coefficient {c0} left (0.5, 1)"),
            Some(vec![c0, tail]),
        ));
    }
    Ok(CatalystSpec {
        spectrum: SchmidtVector::two_qubit_with_tail(c0, tail),
        success_probability: (problem.one_minus_alpha_pow_n() / tail).min(1.0),
    })
}

/// Optimal conversion probability of `|alpha>^n |C> -> |beta>|00..>|C>`.
pub fn catalysis_probability(
    problem: &ConcentrationProblem,
    catalyst: &SchmidtVector,
) -> Result<f64> {
    Evaluator::new(problem, DEFAULT_DIM_CAP)?.probability(catalyst)
}

/// `catalysis_probability / locc_probability`.
pub fn efficiency_ratio(problem: &ConcentrationProblem, catalyst: &SchmidtVector) -> Result<f64> {
    Ok(catalysis_probability(problem, catalyst)? / problem.locc_probability())
}

/// Caches the initial spectrum for repeated catalyst evaluations.
pub(crate) struct Evaluator {
    initial: SchmidtVector,
    bell: SchmidtVector,
    cap: usize,
}

impl Evaluator {
    pub(crate) fn new(problem: &ConcentrationProblem, cap: usize) -> Result<Self> {
        Ok(Evaluator {
            initial: problem.initial_spectrum_capped(cap)?,
            // Padding zeros of the target never bind; the Bell pair alone
            // gives the same monotones.
            bell: SchmidtVector::new(&[0.5, 0.5]).expect("bell"),
            cap,
        })
    }

    pub(crate) fn probability(&self, catalyst: &SchmidtVector) -> Result<f64> {
        let joint_initial = self.initial.tensor_capped(catalyst, self.cap)?;
        let joint_target = self.bell.tensor(catalyst);
        Ok(conversion_probability(&joint_initial, &joint_target))
    }
}
