//! Monomial ideals stored by their minimal generators.
//!
//! Minimal generating sets of monomial ideals are unique, so equality of
//! ideals is equality of the canonical (sorted) generator lists.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::monomial::ExponentVector;

/// A monomial ideal in `n_vars` variables.
///
/// The empty generator list is the zero ideal; the single generator `1` is
/// the unit ideal. Generators are kept sorted by degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    n_vars: usize,
    min_gens: Vec<ExponentVector>,
}

impl MonomialIdeal {
    /// Reduces `gens` to an antichain generating the same ideal.
    pub fn minimalize(n_vars: usize, gens: impl IntoIterator<Item = ExponentVector>) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::Argument("an ideal needs at least one variable".into()));
        }
        let mut gens: Vec<ExponentVector> = gens.into_iter().collect();
        if let Some(bad) = gens.iter().find(|g| g.len() != n_vars) {
            return Err(Error::Dimension {
                expected: n_vars,
                found: bad.len(),
            });
        }
        // A divisor has degree ≤ its multiple, so a single sorted sweep suffices.
        gens.sort_by(|a, b| a.degree_lex_cmp(b));
        gens.dedup();
        let mut min_gens: Vec<ExponentVector> = Vec::with_capacity(gens.len());
        for g in gens {
            if !min_gens.iter().any(|m| m.divides_unchecked(&g)) {
                min_gens.push(g);
            }
        }
        Ok(Self { n_vars, min_gens })
    }

    pub fn zero(n_vars: usize) -> Result<Self> {
        Self::minimalize(n_vars, [])
    }

    pub fn unit(n_vars: usize) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::Argument("an ideal needs at least one variable".into()));
        }
        Self::minimalize(n_vars, [ExponentVector::zero(n_vars)])
    }

    /// Edge ideal of the path `x1 - x2 - ... - xn`.
    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Argument(format!("a path needs at least 2 vertices, got {n}")));
        }
        Self::embedded_path(n, n)
    }

    /// The path ideal on the first `k` variables inside a ring with `n ≥ k`
    /// variables. Paths with fewer than two vertices have no edges, giving
    /// the zero ideal.
    pub fn embedded_path(k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::Argument(format!(
                "cannot embed a path on {k} vertices into {n} variables"
            )));
        }
        let edges: Vec<(usize, usize)> = (1..k).map(|i| (i, i + 1)).collect();
        Self::edge_ideal(n, &edges)
    }

    /// Edge ideal of a simple graph on vertices `1..=n`.
    pub fn edge_ideal(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut gens = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            if i == j {
                return Err(Error::Argument(format!("loop edge ({i},{j})")));
            }
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::Argument(format!("edge ({i},{j}) out of range 1..={n}")));
            }
            gens.push(ExponentVector::sum_of_units(n, &[i, j])?);
        }
        Self::minimalize(n, gens)
    }

    /// The graded maximal ideal `(x1, ..., xn)`.
    pub fn maximal(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("an ideal needs at least one variable".into()));
        }
        let gens = (1..=n)
            .map(|i| ExponentVector::unit(n, i))
            .collect::<Result<Vec<_>>>()?;
        Self::minimalize(n, gens)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.min_gens
    }

    pub fn is_zero(&self) -> bool {
        self.min_gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.min_gens.iter().any(ExponentVector::is_zero)
    }

    fn check_vector(&self, m: &ExponentVector) -> Result<()> {
        if m.len() != self.n_vars {
            return Err(Error::Dimension {
                expected: self.n_vars,
                found: m.len(),
            });
        }
        Ok(())
    }

    fn check_ideal(&self, other: &Self) -> Result<()> {
        if other.n_vars != self.n_vars {
            return Err(Error::Dimension {
                expected: self.n_vars,
                found: other.n_vars,
            });
        }
        Ok(())
    }

    /// Membership of the monomial `x^m`.
    pub fn contains(&self, m: &ExponentVector) -> Result<bool> {
        self.check_vector(m)?;
        Ok(self.contains_unchecked(m.as_slice()))
    }

    pub(crate) fn contains_unchecked(&self, m: &[u32]) -> bool {
        self.min_gens
            .iter()
            .any(|g| g.as_slice().iter().zip(m).all(|(a, b)| a <= b))
    }

    /// `I^t`, minimalized after every multiplication step.
    pub fn power(&self, t: u32) -> Result<Self> {
        if t < 1 {
            return Err(Error::Argument("ideal powers need t ≥ 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..t {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// The product ideal `I·J`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_ideal(other)?;
        let mut gens = Vec::with_capacity(self.min_gens.len() * other.min_gens.len());
        for a in &self.min_gens {
            for b in &other.min_gens {
                gens.push(a.add(b)?);
            }
        }
        Self::minimalize(self.n_vars, gens)
    }

    /// The colon ideal `(I : x^u)`.
    pub fn colon(&self, u: &ExponentVector) -> Result<Self> {
        self.check_vector(u)?;
        let gens = self
            .min_gens
            .iter()
            .map(|g| g.saturating_subtract(u))
            .collect::<Result<Vec<_>>>()?;
        Self::minimalize(self.n_vars, gens)
    }

    /// The ideal sum `(I, extra)`.
    pub fn add_generators(&self, extra: &[ExponentVector]) -> Result<Self> {
        for e in extra {
            self.check_vector(e)?;
        }
        Self::minimalize(self.n_vars, self.min_gens.iter().chain(extra).cloned())
    }

    /// Equality of minimal generator sets; errors when ambient rings differ.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check_ideal(other)?;
        Ok(self.min_gens == other.min_gens)
    }

    /// Parses the ideal file format: a `vars <n>` header line followed by one
    /// monomial per line. Blank lines and lines starting with `#` are skipped.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `vars <n>` header".into()))?;
        let n: usize = header
            .strip_prefix("vars")
            .map(str::trim)
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header `{header}`, expected `vars <n>`")))?;
        if n == 0 {
            return Err(Error::Parse("`vars 0` is not allowed".into()));
        }
        let gens = lines.map(|l| ExponentVector::parse(l, n)).collect::<Result<Vec<_>>>()?;
        Self::minimalize(n, gens)
    }

    /// Inverse of [`MonomialIdeal::parse_file`].
    pub fn to_file_string(&self) -> String {
        let mut out = format!("vars {}\n", self.n_vars);
        for g in &self.min_gens {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

impl FromStr for MonomialIdeal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_file(s)
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialIdeal(n={}, {})", self.n_vars, self)
    }
}

/// `(x1*x2, x2*x3)`; the zero ideal prints as `(0)`.
impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.min_gens.is_empty() {
            return f.write_str("(0)");
        }
        let gens: Vec<String> = self.min_gens.iter().map(ToString::to_string).collect();
        write!(f, "({})", gens.join(", "))
    }
}
