//! Membership tests for the range of the restricted k-plane transform on
//! Schwartz functions: evenness, weighted derivative bounds, the moment
//! condition, and the explicit preimage construction.

mod construct;
mod moments;
mod seminorm;
mod verdict;

pub use construct::{range_construct_f, CONSTRUCT_EVENNESS_TOL};
pub use moments::{check_moment_condition, multi_indices, MomentPolynomial};
pub use seminorm::{estimate_seminorm, SeminormReport};
pub use verdict::{range_verdict, CriterionRow, RangeOptions, RangeReport, RangeTolerances, Verdict};

use crate::error::{Error, Result};
use crate::euclid::RestrictedSinogram;

/// `max |φ(θ, s; x'') - φ(-θ, -s; x'')|` over the grid.
pub fn check_evenness(phi: &RestrictedSinogram) -> Result<f64> {
    let grid = phi.grid();
    if !grid.is_antipodally_closed() {
        return Err(Error::Grid("the s-grid is not symmetric about 0".into()));
    }
    let v = phi.values();
    let mut worst = 0.0f64;
    for i in 0..v.len() {
        let j = grid.antipode(i).ok_or_else(|| Error::Grid("missing antipodal grid point".into()))?;
        worst = worst.max((v[i] - v[j]).abs());
    }
    Ok(worst)
}
