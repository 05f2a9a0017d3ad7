//! Closed-form Stanley depth values for path ideals, their powers, and the
//! graded maximal ideal, used as the expected side of the verification harness.
//!
//! All arithmetic is on integers; `⌈x/d⌉` for signed `x` is computed with
//! `div_euclid` so that nonpositive numerators are handled exactly.

use crate::error::{Error, Result};

fn ceil_div(x: i64, d: i64) -> i64 {
    -((-x).div_euclid(d))
}

fn check_path(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Argument(format!("path formulas need n ≥ 2, got {n}")));
    }
    Ok(())
}

fn check_power(n: u32, t: u32) -> Result<()> {
    check_path(n)?;
    if t < 1 {
        return Err(Error::Argument("power formulas need t ≥ 1".into()));
    }
    Ok(())
}

/// `sdepth(S/I(P_n)) = ⌈n/3⌉`.
pub fn path_sdepth(n: u32) -> Result<u32> {
    check_path(n)?;
    Ok(n.div_ceil(3))
}

/// `sdepth(S/I(P_n)^t) = max{⌈(n−t+1)/3⌉, 1}`.
pub fn path_power_sdepth(n: u32, t: u32) -> Result<u32> {
    check_power(n, t)?;
    let v = ceil_div(i64::from(n) - i64::from(t) + 1, 3).max(1);
    Ok(v as u32)
}

/// Cited depth bound `depth(S/I(P_n)^t) ≥ max{⌈(n−t+1)/3⌉, 1}`.
///
/// This is a lower bound on depth quoted from the literature, not a computed depth.
pub fn morey_depth_lower_bound(n: u32, t: u32) -> Result<u32> {
    check_power(n, t)?;
    Ok(ceil_div(i64::from(n) - i64::from(t) + 1, 3).max(1) as u32)
}

/// `sdepth(m) = ⌈n/2⌉` for `m = (x1, …, xn)`.
pub fn maximal_ideal_sdepth(n: u32) -> Result<u32> {
    if n < 1 {
        return Err(Error::Argument("the maximal ideal needs n ≥ 1".into()));
    }
    Ok(n.div_ceil(2))
}

/// Least `τ` with `path_power_sdepth(n, t) = 1` for every `t ≥ τ`: `max{n−2, 1}`.
pub fn stabilization_threshold(n: u32) -> Result<u32> {
    check_path(n)?;
    Ok(n.saturating_sub(2).max(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Path,
    PathPower,
    Maximal,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::PathPower => "path-power",
            Family::Maximal => "maximal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaRow {
    pub family: Family,
    pub n: u32,
    pub t: u32,
    pub expected_sdepth: u32,
    pub source: &'static str,
}

/// Expected values for the given family over `n_range × t_range`
/// (`t` is fixed to 1 for the path and maximal families).
pub fn formula_table(family: Family, ns: impl IntoIterator<Item = u32>, ts: &[u32]) -> Result<Vec<FormulaRow>> {
    let mut rows = Vec::new();
    for n in ns {
        match family {
            Family::Path => rows.push(FormulaRow {
                family,
                n,
                t: 1,
                expected_sdepth: path_sdepth(n)?,
                source: "sdepth(S/I(P_n)) = ceil(n/3)",
            }),
            Family::Maximal => rows.push(FormulaRow {
                family,
                n,
                t: 1,
                expected_sdepth: maximal_ideal_sdepth(n)?,
                source: "sdepth(m) = ceil(n/2)",
            }),
            Family::PathPower => {
                for &t in ts {
                    rows.push(FormulaRow {
                        family,
                        n,
                        t,
                        expected_sdepth: path_power_sdepth(n, t)?,
                        source: "sdepth(S/I(P_n)^t) = max(ceil((n-t+1)/3), 1)",
                    });
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_values() {
        assert_eq!(path_sdepth(3).unwrap(), 1);
        assert_eq!(path_sdepth(6).unwrap(), 2);
        assert_eq!(path_sdepth(7).unwrap(), 3);
        assert!(path_sdepth(1).is_err());
    }

    #[test]
    fn path_power_values() {
        assert_eq!(path_power_sdepth(6, 2).unwrap(), 2);
        assert_eq!(path_power_sdepth(4, 3).unwrap(), 1);
        for n in 2..=12 {
            assert_eq!(path_power_sdepth(n, 1).unwrap(), path_sdepth(n).unwrap());
        }
        assert!(path_power_sdepth(3, 0).is_err());
        assert_eq!(path_power_sdepth(2, 40).unwrap(), 1);
    }

    #[test]
    fn depth_bound_values() {
        assert_eq!(morey_depth_lower_bound(6, 2).unwrap(), 2);
        assert_eq!(morey_depth_lower_bound(3, 1).unwrap(), 1);
        assert_eq!(morey_depth_lower_bound(2, 5).unwrap(), 1);
    }

    #[test]
    fn maximal_values() {
        assert_eq!(maximal_ideal_sdepth(2).unwrap(), 1);
        assert_eq!(maximal_ideal_sdepth(5).unwrap(), 3);
        assert_eq!(maximal_ideal_sdepth(1).unwrap(), 1);
        assert!(maximal_ideal_sdepth(0).is_err());
    }

    #[test]
    fn threshold_values() {
        assert_eq!(stabilization_threshold(5).unwrap(), 3);
        assert_eq!(stabilization_threshold(4).unwrap(), 2);
        assert_eq!(stabilization_threshold(2).unwrap(), 1);
        assert!(stabilization_threshold(1).is_err());
    }

    #[test]
    fn ceil_div_signs() {
        assert_eq!(ceil_div(4, 3), 2);
        assert_eq!(ceil_div(3, 3), 1);
        assert_eq!(ceil_div(0, 3), 0);
        assert_eq!(ceil_div(-1, 3), 0);
        assert_eq!(ceil_div(-3, 3), -1);
        assert_eq!(ceil_div(-4, 3), -1);
    }

    #[test]
    fn grid_properties() {
        for n in 2..=100 {
            assert_eq!(path_power_sdepth(n, 1).unwrap(), path_sdepth(n).unwrap());
        }
        for n in 2..=50 {
            let tau = stabilization_threshold(n).unwrap();
            for t in 1..=60 {
                let v = path_power_sdepth(n, t).unwrap();
                assert_eq!(v == 1, t >= tau, "n={n} t={t}");
                if t > 1 {
                    assert!(v <= path_power_sdepth(n, t - 1).unwrap());
                }
                if n > 2 {
                    assert!(v >= path_power_sdepth(n - 1, t).unwrap());
                }
            }
        }
    }

    #[test]
    fn table_rows() {
        let rows = formula_table(Family::PathPower, 3..=4, &[2, 3]).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].expected_sdepth, 1);
        let rows = formula_table(Family::Maximal, 2..=6, &[]).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.expected_sdepth).collect::<Vec<_>>(),
            vec![1, 2, 2, 3, 3]
        );
    }
}
