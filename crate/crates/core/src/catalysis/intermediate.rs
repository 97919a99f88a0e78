//! Intermediate state of the two-step probabilistic conversion: a state `gamma`
//! reachable from `I` with certainty, from which a single two-outcome
//! measurement yields `F` with the optimal probability `P(I -> F)`.

use crate::error::{Error, Result};
use crate::schmidt::{
    can_convert_deterministically, conversion_probability, MonotoneVector, SchmidtVector,
};

const CONTRACT_TOL: f64 = 1e-10;

/// Builds `gamma` for the conversion `initial -> target` and verifies that
/// `initial -> gamma` is deterministic and `P(gamma -> target) = P(initial -> target)`.
///
/// The monotones of `gamma` are `E_k = min(E_k(I), P * E_k(F))` for `k >= 2`.
/// That sequence is a valid monotone vector in exact arithmetic; if round-off
/// breaks it, its greatest convex minorant is used instead. The minorant stays
/// below `E(I)` and above `(1, P * E_2(F), ..., P * E_d(F))`, which is convex.
pub fn intermediate_state(initial: &SchmidtVector, target: &SchmidtVector) -> Result<SchmidtVector> {
    let d = initial.dim().max(target.dim());
    let initial = initial.padded(d);
    let target = target.padded(d);
    let p = conversion_probability(&initial, &target);
    let ei = initial.monotones();
    let ef = target.monotones();

    let lower: Vec<f64> = ef
        .values()
        .iter()
        .enumerate()
        .map(|(k, e)| if k == 0 { 1.0 } else { p * e })
        .collect();
    let candidate: Vec<f64> = lower
        .iter()
        .zip(ei.values())
        .map(|(l, u)| l.min(*u))
        .collect();

    let gamma = match MonotoneVector::from_values(candidate.clone()) {
        Ok(m) => verified(&m, &initial, &target, p),
        Err(_) => None,
    };
    if let Some(g) = gamma {
        return Ok(g);
    }
    let hull = MonotoneVector::from_values(convex_minorant(&candidate)).map_err(|e| {
        Error::numeric(format!("convex minorant is not a monotone vector: {e}"), None)
    })?;
    verified(&hull, &initial, &target, p).ok_or_else(|| {
        Error::numeric(
            "intermediate state failed contract verification",
            Some(hull.to_coefficients()),
        )
    })
}

fn verified(
    m: &MonotoneVector,
    initial: &SchmidtVector,
    target: &SchmidtVector,
    p: f64,
) -> Option<SchmidtVector> {
    let gamma = m.to_schmidt().ok()?;
    let reachable = can_convert_deterministically(initial, &gamma);
    let preserves = (conversion_probability(&gamma, target) - p).abs() <= CONTRACT_TOL;
    (reachable && preserves).then_some(gamma)
}

/// Largest convex sequence below `points[k]` at `k = 0..d`, anchored to zero
/// at `k = d` (lower convex hull, monotone chain).
fn convex_minorant(points: &[f64]) -> Vec<f64> {
    let d = points.len();
    let pts: Vec<(f64, f64)> = points
        .iter()
        .enumerate()
        .map(|(k, v)| (k as f64, *v))
        .chain(std::iter::once((d as f64, 0.0)))
        .collect();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop b if it lies on or above the chord a-p.
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    (0..d)
        .map(|k| {
            let x = k as f64;
            let seg = hull
                .windows(2)
                .find(|w| w[0].0 <= x && x <= w[1].0)
                .expect("hull spans the range");
            let (a, b) = (seg[0], seg[1]);
            if b.0 == a.0 {
                a.1.min(b.1)
            } else {
                a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(w: &[f64]) -> SchmidtVector {
        SchmidtVector::new(w).unwrap()
    }

    #[test]
    fn two_qubit_to_bell() {
        let gamma = intermediate_state(&sv(&[0.75, 0.25]), &sv(&[0.5, 0.5])).unwrap();
        assert!((gamma.coefficients()[0] - 0.75).abs() < 1e-12);
        assert!((gamma.coefficients()[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn identity_and_deterministic_cases_return_target() {
        let f = sv(&[0.5, 0.3, 0.2]);
        let g = intermediate_state(&f, &f).unwrap();
        assert!(g.coefficients().iter().zip(f.coefficients()).all(|(a, b)| (a - b).abs() < 1e-12));

        let i = sv(&[0.4, 0.3, 0.2, 0.1]);
        let f = sv(&[0.6, 0.3, 0.1]);
        assert!(can_convert_deterministically(&i, &f));
        let g = intermediate_state(&i, &f).unwrap();
        let f = f.padded(4);
        assert!(g.coefficients().iter().zip(f.coefficients()).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn convex_minorant_examples() {
        let v = convex_minorant(&[1.0, 0.6, 0.3, 0.1]);
        assert!(v.iter().zip([1.0, 0.6, 0.3, 0.1]).all(|(a, b)| (a - b).abs() < 1e-12));
        // A bump at index 2 is lowered onto the chord from index 1 to 3.
        let v = convex_minorant(&[1.0, 0.7, 0.5, 0.1]);
        assert!((v[2] - 0.4).abs() < 1e-12);
        assert!(MonotoneVector::from_values(v).is_ok());
    }

    #[test]
    fn larger_problem_keeps_contract() {
        let i = sv(&[0.7, 0.1, 0.1, 0.1]);
        let f = sv(&[0.4, 0.4, 0.1, 0.1]);
        let gamma = intermediate_state(&i, &f).unwrap();
        assert!(can_convert_deterministically(&i, &gamma));
        assert!((conversion_probability(&gamma, &f) - conversion_probability(&i, &f)).abs() < 1e-10);
    }

    #[test]
    fn zero_probability_goes_to_product_state() {
        let i = sv(&[0.5, 0.5]);
        let f = sv(&[0.4, 0.3, 0.3]);
        let gamma = intermediate_state(&i, &f).unwrap();
        assert_eq!(conversion_probability(&gamma, &f), 0.0);
        assert!(can_convert_deterministically(&i, &gamma));
    }
}
