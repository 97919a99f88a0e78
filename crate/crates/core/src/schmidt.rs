//! Schmidt spectra of bipartite pure states and the majorization calculus
//! built on them.
//!
//! A [`SchmidtVector`] is an ordered probability vector. Its Vidal monotones
//! `E_k = 1 - (sum of the k-1 largest coefficients)` decide whether one pure
//! state converts into another under LOCC deterministically
//! ([`can_convert_deterministically`]) and, if not, with which optimal
//! probability ([`conversion_probability`]).
//!
//! Vectors of different dimension are compared after padding the shorter one
//! with zeros. Zero coefficients are never dropped.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kahan;

/// Absolute tolerance for every equality and ordering test on probabilities.
pub const TOL: f64 = 1e-12;

/// Largest spectrum dimension any constructor will build by default.
pub const DEFAULT_DIM_CAP: usize = 1 << 20;

/// Schmidt coefficients sorted in non-increasing order, summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtVector {
    coefficients: Vec<f64>,
}

impl SchmidtVector {
    /// Normalizes and sorts arbitrary nonnegative weights.
    pub fn new(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("empty weight list"));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::invalid(format!(
                "weights must be finite and nonnegative, got {w}"
            )));
        }
        let total = kahan::sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::invalid("all weights are zero"));
        }
        let mut coefficients: Vec<f64> = weights.iter().map(|w| w / total).collect();
        sort_descending(&mut coefficients);
        Ok(SchmidtVector { coefficients })
    }

    /// The two-qubit state `(p, 1 - p)` with `p` the larger coefficient.
    pub fn two_qubit(p: f64) -> Result<Self> {
        if !(0.5..=1.0).contains(&p) {
            return Err(Error::invalid(format!(
                "larger Schmidt coefficient must lie in [0.5, 1], got {p}"
            )));
        }
        Ok(SchmidtVector {
            coefficients: vec![p, 1.0 - p],
        })
    }

    /// Builds a two-qubit spectrum from a larger coefficient and an
    /// independently computed complement. Used where `1 - p` would lose
    /// precision.
    pub(crate) fn two_qubit_with_tail(p: f64, tail: f64) -> Self {
        debug_assert!(p >= tail && tail >= 0.0);
        SchmidtVector {
            coefficients: vec![p, tail],
        }
    }

    /// The one-dimensional spectrum `(1)` of a product state.
    pub fn product() -> Self {
        SchmidtVector {
            coefficients: vec![1.0],
        }
    }

    /// Wraps coefficients that are already sorted and normalized.
    pub(crate) fn from_sorted(coefficients: Vec<f64>) -> Self {
        debug_assert!(!coefficients.is_empty());
        debug_assert!(coefficients.windows(2).all(|w| w[0] >= w[1]));
        SchmidtVector { coefficients }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn largest(&self) -> f64 {
        self.coefficients[0]
    }

    /// Number of coefficients above [`TOL`].
    pub fn schmidt_rank(&self) -> usize {
        self.coefficients.iter().filter(|c| **c > TOL).count()
    }

    /// Copy padded with zeros up to dimension `d` (no-op if already larger).
    pub fn padded(&self, d: usize) -> SchmidtVector {
        let mut coefficients = self.coefficients.clone();
        if d > coefficients.len() {
            coefficients.resize(d, 0.0);
        }
        SchmidtVector { coefficients }
    }

    /// Copy with trailing zero coefficients removed (at least one entry kept).
    pub fn trimmed(&self) -> SchmidtVector {
        let keep = self
            .coefficients
            .iter()
            .rposition(|c| *c > 0.0)
            .map_or(1, |i| i + 1);
        SchmidtVector {
            coefficients: self.coefficients[..keep].to_vec(),
        }
    }

    pub fn monotones(&self) -> MonotoneVector {
        monotones(self)
    }

    /// Spectrum of the joint state `|a>|b>`.
    pub fn tensor(&self, other: &SchmidtVector) -> SchmidtVector {
        tensor_product(self, other)
    }

    /// [`tensor`](Self::tensor) with a dimension cap.
    pub fn tensor_capped(&self, other: &SchmidtVector, cap: usize) -> Result<SchmidtVector> {
        let dim = self.dim().saturating_mul(other.dim());
        if dim > cap {
            return Err(Error::ResourceLimit { dim, cap });
        }
        Ok(tensor_product(self, other))
    }

    /// `self` tensored with itself `copies` times; `copies = 0` gives the
    /// product state.
    pub fn tensor_power(&self, copies: u32, cap: usize) -> Result<SchmidtVector> {
        let mut out = SchmidtVector::product();
        for _ in 0..copies {
            out = out.tensor_capped(self, cap)?;
        }
        Ok(out)
    }
}

impl fmt::Display for SchmidtVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::list(&self.coefficients))
    }
}

impl FromStr for SchmidtVector {
    type Err = Error;

    /// Parses a comma-separated list of weights, e.g. `"0.64,0.16,0.16,0.04"`.
    fn from_str(s: &str) -> Result<Self> {
        let weights = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<f64>()
                    .map_err(|_| Error::invalid(format!("cannot parse '{tok}' as a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        SchmidtVector::new(&weights)
    }
}

/// Vidal monotones `E_1..E_d` of a spectrum; `E_1 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneVector {
    values: Vec<f64>,
}

impl MonotoneVector {
    /// Validates a candidate monotone vector: `E_1 = 1`, non-increasing,
    /// nonnegative, with non-increasing consecutive differences (so that the
    /// differences form a sorted spectrum).
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("empty monotone vector"));
        }
        if (values[0] - 1.0).abs() > TOL {
            return Err(Error::invalid(format!("E_1 must be 1, got {}", values[0])));
        }
        let m = MonotoneVector { values };
        let coefficients = m.to_coefficients();
        if coefficients.iter().any(|c| *c < -TOL) {
            return Err(Error::invalid("monotones must be non-increasing and nonnegative"));
        }
        if coefficients.windows(2).any(|w| w[1] > w[0] + TOL) {
            return Err(Error::invalid(
                "monotone differences must be non-increasing",
            ));
        }
        Ok(m)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Consecutive differences `E_k - E_{k+1}` with `E_{d+1} = 0`.
    pub fn to_coefficients(&self) -> Vec<f64> {
        let d = self.values.len();
        (0..d)
            .map(|k| self.values[k] - self.values.get(k + 1).copied().unwrap_or(0.0))
            .collect()
    }

    /// Converts back into a spectrum, clamping round-off below zero and
    /// re-sorting.
    pub fn to_schmidt(&self) -> Result<SchmidtVector> {
        let weights: Vec<f64> = self.to_coefficients().into_iter().map(|c| c.max(0.0)).collect();
        SchmidtVector::new(&weights)
    }
}

impl fmt::Display for MonotoneVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::list(&self.values))
    }
}

/// `E_k = 1 - sum_{j<k} lambda_j`. Evaluated as the tail sum `sum_{j>=k}`,
/// which is the same quantity without cancellation for tiny tails.
pub fn monotones(s: &SchmidtVector) -> MonotoneVector {
    let c = s.coefficients();
    let mut values = vec![0.0; c.len()];
    let mut tail = 0.0;
    for k in (1..c.len()).rev() {
        tail += c[k];
        values[k] = tail;
    }
    values[0] = 1.0;
    MonotoneVector { values }
}

/// All pairwise products, sorted.
pub fn tensor_product(a: &SchmidtVector, b: &SchmidtVector) -> SchmidtVector {
    let mut coefficients = Vec::with_capacity(a.dim() * b.dim());
    for x in a.coefficients() {
        for y in b.coefficients() {
            coefficients.push(x * y);
        }
    }
    sort_descending(&mut coefficients);
    SchmidtVector { coefficients }
}

fn padded_monotones(initial: &SchmidtVector, target: &SchmidtVector) -> (Vec<f64>, Vec<f64>) {
    let d = initial.dim().max(target.dim());
    (
        initial.padded(d).monotones().values,
        target.padded(d).monotones().values,
    )
}

/// Majorization test: `E_k(initial) >= E_k(final) - TOL` for every k.
pub fn can_convert_deterministically(initial: &SchmidtVector, target: &SchmidtVector) -> bool {
    let (ei, ef) = padded_monotones(initial, target);
    ei.iter().zip(&ef).all(|(i, f)| *i >= f - TOL)
}

/// Optimal LOCC success probability `min_k E_k(I) / E_k(F)`.
///
/// Indices where `E_k(F) = 0` never bind. The result is exactly 1 iff the
/// conversion is deterministic.
pub fn conversion_probability(initial: &SchmidtVector, target: &SchmidtVector) -> f64 {
    let (ei, ef) = padded_monotones(initial, target);
    if ei.iter().zip(&ef).all(|(i, f)| *i >= f - TOL) {
        return 1.0;
    }
    ei.iter()
        .zip(&ef)
        .filter(|(_, f)| **f > 0.0)
        .map(|(i, f)| i / f)
        .fold(1.0, f64::min)
}

pub(crate) fn sort_descending(v: &mut [f64]) {
    v.sort_unstable_by(|a, b| b.total_cmp(a));
}
