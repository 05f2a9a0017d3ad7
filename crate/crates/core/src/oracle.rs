//! Brute-force Stanley depth by enumerating every interval partition.
//!
//! Shares nothing with the solver beyond the poset's public membership
//! queries, so agreement between the two is meaningful.

use crate::error::{Error, Result};
use crate::monomial::ExponentVector;
use crate::poset::{rho, CharPoset};

/// Largest poset the oracle accepts.
pub const BRUTE_FORCE_MAX_MEMBERS: usize = 14;

/// Maximum over all interval partitions of the minimum `ρ` of the tops.
pub fn brute_force_sdepth(poset: &CharPoset) -> Result<usize> {
    let members = poset.members();
    if members.len() > BRUTE_FORCE_MAX_MEMBERS {
        return Err(Error::Resource(format!(
            "brute force is capped at {BRUTE_FORCE_MAX_MEMBERS} members, poset has {}",
            members.len()
        )));
    }
    let le = |a: &ExponentVector, b: &ExponentVector| a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| x <= y);
    // Every interval of the poset, as a member bitmask plus the ρ of its top.
    let mut intervals: Vec<(u32, usize)> = Vec::new();
    for lo in &members {
        for hi in &members {
            if !le(lo, hi) {
                continue;
            }
            let between: Vec<usize> = (0..members.len())
                .filter(|&k| le(lo, &members[k]) && le(&members[k], hi))
                .collect();
            let volume: usize = (0..lo.len()).map(|j| (hi[j] - lo[j]) as usize + 1).product();
            if between.len() == volume {
                let mask = between.iter().fold(0u32, |m, &k| m | (1 << k));
                intervals.push((mask, rho(hi, poset.bound())?));
            }
        }
    }
    let full = if members.len() == 32 {
        u32::MAX
    } else {
        (1u32 << members.len()) - 1
    };
    Ok(best(full, 0, &intervals).expect("singletons always partition the poset"))
}

/// Best min-ρ over partitions of the members outside `covered`.
fn best(full: u32, covered: u32, intervals: &[(u32, usize)]) -> Option<usize> {
    if covered == full {
        return Some(usize::MAX);
    }
    let first = (!covered & full).trailing_zeros();
    intervals
        .iter()
        .filter(|(mask, _)| mask & (1 << first) != 0 && mask & covered == 0)
        .filter_map(|&(mask, r)| best(full, covered | mask, intervals).map(|rest| rest.min(r)))
        .max()
}
