//! Exponent vectors: the shared representation of monomials `x^a` and of
//! points of the lattice `ℕⁿ`.
//!
//! The componentwise order on exponent vectors is the divisibility order on
//! monomials, so [`ExponentVector::divides`] doubles as the poset order used
//! by the characteristic posets in [`crate::poset`].

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest admissible exponent entry.
pub const EXPONENT_CEILING: u32 = 1 << 16;

/// A point `a ∈ ℕⁿ`, read as the monomial `x₁^a(1) ⋯ xₙ^a(n)`.
///
/// Entries are stored 0-based; all textual I/O names variables `x1..xn`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    exps: Box<[u32]>,
}

impl ExponentVector {
    /// Builds a vector from its entries, enforcing `n ≥ 1` and the ceiling.
    pub fn new(exps: impl Into<Vec<u32>>) -> Result<Self> {
        let exps = exps.into();
        if exps.is_empty() {
            return Err(Error::Argument("exponent vectors need at least one variable".into()));
        }
        if let Some(&e) = exps.iter().find(|&&e| e > EXPONENT_CEILING) {
            return Err(Error::Overflow(format!(
                "exponent {e} exceeds the ceiling {EXPONENT_CEILING}"
            )));
        }
        Ok(Self {
            exps: exps.into_boxed_slice(),
        })
    }

    /// The zero vector, i.e. the monomial `1`.
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "exponent vectors need at least one variable");
        Self {
            exps: vec![0; n].into_boxed_slice(),
        }
    }

    /// The unit vector `e_i` for a 1-based variable index `i`.
    pub fn unit(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Argument(format!("variable x{i} out of range 1..={n}")));
        }
        let mut v = vec![0; n];
        v[i - 1] = 1;
        Self::new(v)
    }

    /// Builds `Σ e_i` over 1-based indices (repetitions add up).
    pub fn sum_of_units(n: usize, indices: &[usize]) -> Result<Self> {
        let mut v = vec![0; n];
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::Argument(format!("variable x{i} out of range 1..={n}")));
            }
            v[i - 1] += 1;
        }
        Self::new(v)
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_zero(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// `|a| = Σ a(i)`.
    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| u64::from(e)).sum()
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    /// Componentwise `self ≤ other`: monomial divisibility and the poset order.
    pub fn divides(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.divides_unchecked(other))
    }

    pub(crate) fn divides_unchecked(&self, other: &Self) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// Monomial product `x^a · x^b`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        let sum: Vec<u32> = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Self::new(sum)
    }

    /// Componentwise `max(a − b, 0)`, the exponent of `x^a / gcd(x^a, x^b)`.
    pub fn saturating_subtract(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a.saturating_sub(*b))
            .collect::<Vec<_>>();
        Ok(Self {
            exps: exps.into_boxed_slice(),
        })
    }

    /// Componentwise maximum (lcm of monomials).
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| *a.max(b))
            .collect::<Vec<_>>();
        Ok(Self {
            exps: exps.into_boxed_slice(),
        })
    }

    /// Parses the textual monomial syntax in `n` variables.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let parsed: Monomial = text.parse()?;
        parsed.into_vector(n)
    }

    /// Ordering by total degree, then lexicographically on the entries.
    pub fn degree_lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }

    /// Comma-separated entries, as used by the poset dump.
    pub fn to_csv(&self) -> String {
        let parts: Vec<String> = self.exps.iter().map(u32::to_string).collect();
        parts.join(",")
    }
}

impl Index<usize> for ExponentVector {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.exps[i]
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_csv())
    }
}

/// Prints `x1^2*x3`, or `1` for the zero vector.
impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A parsed monomial whose ambient variable count is not yet known.
///
/// Factors may repeat a variable (`x1*x1` is `x1^2`).
#[derive(Clone, Debug, PartialEq, Eq)]
struct Monomial {
    factors: Vec<(usize, u32)>,
}

impl Monomial {
    fn into_vector(self, n: usize) -> Result<ExponentVector> {
        let mut v = vec![0u32; n];
        for (var, e) in self.factors {
            if var == 0 || var > n {
                return Err(Error::Parse(format!("variable x{var} out of range 1..={n}")));
            }
            v[var - 1] = v[var - 1]
                .checked_add(e)
                .ok_or_else(|| Error::Overflow(format!("exponent of x{var} overflows")))?;
        }
        ExponentVector::new(v)
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self { factors: Vec::new() });
        }
        if s.is_empty() {
            return Err(Error::Parse("empty monomial".into()));
        }
        let mut factors = Vec::new();
        for factor in s.split('*') {
            let factor = factor.trim();
            let body = factor
                .strip_prefix('x')
                .ok_or_else(|| Error::Parse(format!("bad factor `{factor}`")))?;
            let (var, exp) = match body.split_once('^') {
                Some((v, e)) => (v, e),
                None => (body, "1"),
            };
            let var: usize = var
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable index in `{factor}`")))?;
            let exp: u32 = exp
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
            factors.push((var, exp));
        }
        Ok(Self { factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(e: &[u32]) -> ExponentVector {
        ExponentVector::new(e.to_vec()).unwrap()
    }

    #[test]
    fn total_degree_examples() {
        assert_eq!(v(&[0, 0, 0]).total_degree(), 0);
        assert_eq!(v(&[1, 0, 1]).total_degree(), 2);
        assert_eq!(v(&[2, 1, 2, 0]).total_degree(), 5);
    }

    #[test]
    fn divides_examples() {
        assert!(v(&[1, 0]).divides(&v(&[1, 1])).unwrap());
        assert!(!v(&[0, 1, 0]).divides(&v(&[1, 0, 1])).unwrap());
        assert!(v(&[2, 2, 2]).divides(&v(&[2, 2, 2])).unwrap());
        assert!(matches!(
            v(&[1, 0]).divides(&v(&[1, 0, 0])),
            Err(Error::Dimension { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn add_examples() {
        assert_eq!(v(&[1, 1, 0]).add(&v(&[0, 1, 1])).unwrap(), v(&[1, 2, 1]));
        let a = v(&[3, 0, 7]);
        assert_eq!(a.add(&ExponentVector::zero(3)).unwrap(), a);
        let e = ExponentVector::unit(5, 2)
            .unwrap()
            .add(&ExponentVector::unit(5, 4).unwrap())
            .unwrap();
        assert_eq!(e, v(&[0, 1, 0, 1, 0]));
        let big = v(&[EXPONENT_CEILING]);
        assert!(matches!(big.add(&v(&[1])), Err(Error::Overflow(_))));
    }

    #[test]
    fn saturating_subtract_examples() {
        assert_eq!(v(&[2, 2]).saturating_subtract(&v(&[1, 0])).unwrap(), v(&[1, 2]));
        assert_eq!(v(&[1, 0]).saturating_subtract(&v(&[2, 0])).unwrap(), v(&[0, 0]));
        let a = v(&[4, 1, 0]);
        assert_eq!(a.saturating_subtract(&ExponentVector::zero(3)).unwrap(), a);
    }

    #[test]
    fn construction_limits() {
        assert!(ExponentVector::new(Vec::new()).is_err());
        assert!(ExponentVector::new(vec![EXPONENT_CEILING]).is_ok());
        assert!(matches!(
            ExponentVector::new(vec![EXPONENT_CEILING + 1]),
            Err(Error::Overflow(_))
        ));
        assert!(ExponentVector::unit(3, 0).is_err());
        assert!(ExponentVector::unit(3, 4).is_err());
    }

    #[test]
    fn textual_syntax() {
        assert_eq!(ExponentVector::parse("x3", 3).unwrap(), v(&[0, 0, 1]));
        assert_eq!(ExponentVector::parse("x1^2*x2", 3).unwrap(), v(&[2, 1, 0]));
        assert_eq!(ExponentVector::parse("1", 2).unwrap(), v(&[0, 0]));
        assert_eq!(ExponentVector::parse(" x2 * x2 ", 2).unwrap(), v(&[0, 2]));
        assert_eq!(v(&[2, 1, 0]).to_string(), "x1^2*x2");
        assert_eq!(v(&[0, 0]).to_string(), "1");
        assert!(matches!(ExponentVector::parse("x4", 3), Err(Error::Parse(_))));
        assert!(matches!(ExponentVector::parse("y1", 3), Err(Error::Parse(_))));
        assert!(matches!(ExponentVector::parse("x1^", 3), Err(Error::Parse(_))));
        assert!(matches!(ExponentVector::parse("", 3), Err(Error::Parse(_))));
    }

    fn vectors(n: usize) -> impl Strategy<Value = ExponentVector> {
        proptest::collection::vec(0u32..4, n).prop_map(|e| ExponentVector::new(e).unwrap())
    }

    proptest! {
        #[test]
        fn divides_is_a_partial_order(a in vectors(3), b in vectors(3), c in vectors(3)) {
            prop_assert!(a.divides(&a).unwrap());
            if a.divides(&b).unwrap() && b.divides(&a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            if a.divides(&b).unwrap() && b.divides(&c).unwrap() {
                prop_assert!(a.divides(&c).unwrap());
            }
        }

        #[test]
        fn divides_iff_difference_vanishes(a in vectors(4), b in vectors(4)) {
            prop_assert_eq!(a.divides(&b).unwrap(), a.saturating_subtract(&b).unwrap().is_zero());
        }

        #[test]
        fn add_is_commutative_associative_and_additive(a in vectors(3), b in vectors(3), c in vectors(3)) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(a.add(&b).unwrap().total_degree(), a.total_degree() + b.total_degree());
        }

        #[test]
        fn text_round_trip(a in vectors(5)) {
            let text = a.to_string();
            prop_assert_eq!(ExponentVector::parse(&text, 5).unwrap(), a);
        }
    }
}
