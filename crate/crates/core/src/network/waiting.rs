//! Expected number of synchronous cycles until all `N` edges of a chain have
//! succeeded, each edge independently with probability `P` per cycle.
//!
//! The closed form is the inclusion-exclusion sum
//! `Z(N, P) = sum_{j=1..N} C(N, j) (-1)^(j+1) / (1 - (1-P)^j)`. Its terms grow
//! like `C(N, N/2)` while the result stays near `H_N / P`, so
//! [`waiting_factor`] evaluates the same expectation through a positive
//! recursion on the number of edges still pending; the alternating sum is
//! kept as an independent route for cross-checking.

use crate::error::{Error, Result};
use crate::kahan::{self, NeumaierSum};

fn check(n_edges: u32, p: f64) -> Result<()> {
    if n_edges == 0 {
        return Err(Error::invalid("number of edges must be at least 1"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!(
            "success probability must lie in (0, 1], got {p}"
        )));
    }
    Ok(())
}

/// `Z(N, P)`, the expected maximum of `N` independent geometric variables on
/// `{1, 2, ...}` with success probability `P`.
///
/// With `W_m` the expected remaining cycles while `m` edges are pending,
/// `W_m (1 - q^m) = 1 + sum_{i=1}^{m-1} C(m, i) q^i P^(m-i) W_i`, `q = 1 - P`.
/// Every term is nonnegative.
pub fn waiting_factor(n_edges: u32, p: f64) -> Result<f64> {
    check(n_edges, p)?;
    if p == 1.0 {
        return Ok(1.0);
    }
    let n = n_edges as usize;
    let ln_q = (-p).ln_1p();
    let ln_p = p.ln();
    let mut ln_fact = vec![0.0f64; n + 1];
    for k in 1..=n {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    let mut w = vec![0.0f64; n + 1];
    for m in 1..=n {
        let mut acc = NeumaierSum::default();
        acc.add(1.0);
        for (i, wi) in w.iter().enumerate().take(m).skip(1) {
            let ln_term = ln_fact[m] - ln_fact[i] - ln_fact[m - i]
                + i as f64 * ln_q
                + (m - i) as f64 * ln_p;
            acc.add(ln_term.exp() * wi);
        }
        let all_fail_complement = -(m as f64 * ln_q).exp_m1();
        w[m] = acc.total() / all_fail_complement;
    }
    Ok(w[n])
}

/// `Z(N, P)` evaluated term by term from the inclusion-exclusion sum with
/// compensated accumulation. Accurate while `C(N, N/2) * eps` is small
/// relative to the result (roughly `N <= 32` for 1e-7 relative error).
pub fn waiting_factor_inclusion_exclusion(n_edges: u32, p: f64) -> Result<f64> {
    check(n_edges, p)?;
    let ln_q = (-p).ln_1p();
    let mut binom = 1.0f64;
    let mut acc = NeumaierSum::default();
    for j in 1..=n_edges {
        binom = binom * (n_edges - j + 1) as f64 / j as f64;
        let denom = if p == 1.0 { 1.0 } else { -(j as f64 * ln_q).exp_m1() };
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        acc.add(sign * binom / denom);
    }
    Ok(acc.total())
}

/// Small-`P` approximation `1 / (P (2/3)^(N-1))`, kept for comparison only.
/// It agrees with the exact factor at `N = 1` but not in general; the exact
/// small-`P` limit is `H_N / P` (see [`harmonic_number`]).
pub fn waiting_factor_small_p(n_edges: u32, p: f64) -> Result<f64> {
    check(n_edges, p)?;
    Ok(1.0 / (p * (2.0f64 / 3.0).powi(n_edges as i32 - 1)))
}

/// `H_N = 1 + 1/2 + ... + 1/N`.
pub fn harmonic_number(n: u32) -> f64 {
    kahan::sum((1..=n).map(|k| 1.0 / k as f64))
}
