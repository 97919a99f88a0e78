//! How many copies of a supply state it takes to build a catalyst by LOCC.

use crate::error::{Error, Result};
use crate::schmidt::{can_convert_deterministically, SchmidtVector, DEFAULT_DIM_CAP, TOL};

/// Smallest `m` with `alpha_supply^m <= c0`, i.e. `ceil(log c0 / log alpha)`,
/// so that `|alpha>^m -> (c0, 1 - c0)` is deterministic.
pub fn n_cat_required(c0: f64, alpha_supply: f64) -> Result<u32> {
    if !(alpha_supply > 0.5 && alpha_supply < 1.0) {
        return Err(Error::invalid(format!(
            "supply alpha must lie in (0.5, 1), got {alpha_supply}"
        )));
    }
    if !(c0 > 0.5 && c0 < 1.0) {
        return Err(Error::invalid(format!(
            "catalyst coefficient must lie in (0.5, 1), got {c0}"
        )));
    }
    let estimate = (c0.ln() / alpha_supply.ln()).ceil().max(1.0);
    if estimate > i32::MAX as f64 {
        return Err(Error::invalid("copy count overflows"));
    }
    // Settle the ceiling on the majorization condition itself, with the same
    // tolerance the deterministic test uses.
    let fits = |m: u32| alpha_supply.powi(m as i32) <= c0 + TOL;
    let mut m = estimate as u32;
    while m > 1 && fits(m - 1) {
        m -= 1;
    }
    while !fits(m) {
        m += 1;
    }
    Ok(m)
}

/// Copies of `(alpha_supply, 1 - alpha_supply)` needed to reach an arbitrary
/// catalyst spectrum deterministically.
///
/// Two-dimensional catalysts use [`n_cat_required`]. Larger catalysts are
/// settled by testing growing tensor powers, which fails with a resource error
/// once the power exceeds `cap`.
pub fn n_cat_for_catalyst(catalyst: &SchmidtVector, alpha_supply: f64, cap: usize) -> Result<u32> {
    let trimmed = catalyst.trimmed();
    if trimmed.dim() <= 2 {
        let c = trimmed.largest();
        if c >= 1.0 - TOL {
            return Ok(0);
        }
        return n_cat_required(c, alpha_supply);
    }
    let supply = SchmidtVector::two_qubit(alpha_supply)?;
    let mut power = SchmidtVector::product();
    let mut m = 0u32;
    loop {
        power = power.tensor_capped(&supply, cap)?;
        m += 1;
        if can_convert_deterministically(&power, catalyst) {
            return Ok(m);
        }
    }
}

/// Whether `(x)_i |alpha_i>^{m_i}` converts deterministically into the
/// two-qubit catalyst `(c0, 1 - c0)`.
pub fn combined_supply_feasible(supplies: &[(f64, u32)], c0: f64) -> Result<bool> {
    if !(c0 > 0.5 && c0 < 1.0) {
        return Err(Error::invalid(format!(
            "catalyst coefficient must lie in (0.5, 1), got {c0}"
        )));
    }
    if supplies.iter().all(|(_, m)| *m == 0) {
        return Err(Error::invalid("at least one supply must contribute a copy"));
    }
    let mut joint = SchmidtVector::product();
    for &(alpha, m) in supplies {
        if !(alpha > 0.5 && alpha < 1.0) {
            return Err(Error::invalid(format!(
                "supply alpha must lie in (0.5, 1), got {alpha}"
            )));
        }
        let state = SchmidtVector::two_qubit(alpha)?;
        joint = joint.tensor_capped(&state.tensor_power(m, DEFAULT_DIM_CAP)?, DEFAULT_DIM_CAP)?;
    }
    let catalyst = SchmidtVector::two_qubit(c0)?;
    Ok(can_convert_deterministically(&joint, &catalyst))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_cat_examples() {
        assert_eq!(n_cat_required(0.59196, 0.8).unwrap(), 3);
        assert_eq!(n_cat_required(0.59196, 0.59196).unwrap(), 1);
        assert_eq!(n_cat_required(0.9, 0.99).unwrap(), 11);
        assert!(n_cat_required(0.5, 0.8).is_err());
        assert!(n_cat_required(0.6, 1.0).is_err());
    }

    #[test]
    fn n_cat_is_the_smallest_sufficient_count() {
        for (c0, a) in [(0.6, 0.9), (0.75, 0.95), (0.51, 0.99), (0.999, 0.999999)] {
            let m = n_cat_required(c0, a).unwrap();
            assert!(a.powi(m as i32) <= c0 + TOL);
            assert!(m == 1 || a.powi(m as i32 - 1) > c0 + TOL);
        }
    }

    #[test]
    fn combined_supply_examples() {
        assert!(combined_supply_feasible(&[(0.8, 3)], 0.59196).unwrap());
        assert!(!combined_supply_feasible(&[(0.8, 1)], 0.59196).unwrap());
        assert!(combined_supply_feasible(&[(0.75, 1), (0.75, 1)], 0.6).unwrap());
        assert!(combined_supply_feasible(&[(0.8, 0)], 0.6).is_err());
        assert!(matches!(
            combined_supply_feasible(&[(0.9, 30)], 0.6),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn combined_supply_agrees_with_copy_count() {
        for a in [0.6, 0.7, 0.8, 0.9] {
            let m = n_cat_required(0.55, a).unwrap();
            assert!(combined_supply_feasible(&[(a, m)], 0.55).unwrap());
            assert!(!combined_supply_feasible(&[(a, m - 1)], 0.55).unwrap_or(false));
        }
    }

    #[test]
    fn n_cat_for_larger_catalysts() {
        let c2 = SchmidtVector::two_qubit(0.59196).unwrap();
        assert_eq!(n_cat_for_catalyst(&c2, 0.8, DEFAULT_DIM_CAP).unwrap(), 3);
        assert_eq!(n_cat_for_catalyst(&c2.padded(4), 0.8, DEFAULT_DIM_CAP).unwrap(), 3);
        let c4 = SchmidtVector::new(&[0.4, 0.3, 0.2, 0.1]).unwrap();
        let m = n_cat_for_catalyst(&c4, 0.6, DEFAULT_DIM_CAP).unwrap();
        let supply = SchmidtVector::two_qubit(0.6).unwrap();
        assert!(can_convert_deterministically(&supply.tensor_power(m, 1 << 20).unwrap(), &c4));
        assert!(!can_convert_deterministically(&supply.tensor_power(m - 1, 1 << 20).unwrap(), &c4));
        assert_eq!(n_cat_for_catalyst(&SchmidtVector::product(), 0.8, 16).unwrap(), 0);
    }
}
