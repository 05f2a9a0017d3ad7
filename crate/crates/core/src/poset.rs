//! Characteristic posets of `S/I` and of `I`.
//!
//! For a bound vector `g` the box `{a : 0 ≤ a ≤ g}` is stored as a dense
//! membership table addressed by mixed-radix indices
//! `index(a) = Σ a(i)·stride(i)`, with `stride(0) = 1` and
//! `stride(i+1) = stride(i)·(g(i)+1)`. In quotient mode the members are the
//! exponents of monomials outside `I` (a down-set); in ideal mode they are
//! the exponents inside `I` (an up-set within the box).

use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::ExponentVector;

/// Default cap on the number of lattice points in the box.
pub const DEFAULT_VOLUME_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Quotient,
    Ideal,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Quotient => "quotient",
            Mode::Ideal => "ideal",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quotient" => Ok(Mode::Quotient),
            "ideal" => Ok(Mode::Ideal),
            other => Err(Error::Parse(format!(
                "unknown mode `{other}`, expected quotient or ideal"
            ))),
        }
    }
}

/// The exponent ceiling `g` of the box a characteristic poset lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundVector(ExponentVector);

impl BoundVector {
    pub fn new(g: ExponentVector) -> Self {
        Self(g)
    }

    pub fn from_slice(g: &[u32]) -> Result<Self> {
        Ok(Self(ExponentVector::new(g.to_vec())?))
    }

    /// Componentwise maximum of the generator exponents, floored at 1.
    ///
    /// This is `(1,…,1)` for a squarefree ideal using every variable and
    /// `(t,…,t)` for the `t`-th power of a path ideal.
    pub fn default_for(ideal: &MonomialIdeal) -> Result<Self> {
        if ideal.is_zero() || ideal.is_unit() {
            return Err(Error::Argument(format!("no default bound for the ideal {ideal}")));
        }
        let mut g = vec![1u32; ideal.n_vars()];
        for gen in ideal.generators() {
            for (gi, &e) in g.iter_mut().zip(gen.as_slice()) {
                *gi = (*gi).max(e);
            }
        }
        Ok(Self(ExponentVector::new(g)?))
    }

    /// `g + (1,…,1)`.
    pub fn widened(&self) -> Result<Self> {
        let ones = ExponentVector::new(vec![1; self.0.len()])?;
        Ok(Self(self.0.add(&ones)?))
    }

    pub fn as_vector(&self) -> &ExponentVector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of lattice points `Π (g(i)+1)`, saturating at `u64::MAX`.
    pub fn volume(&self) -> u64 {
        self.0
            .as_slice()
            .iter()
            .try_fold(1u64, |acc, &e| acc.checked_mul(u64::from(e) + 1))
            .unwrap_or(u64::MAX)
    }
}

/// Number of coordinates where `top` reaches the bound: `|{j : G(j) = g(j)}|`.
pub fn rho(top: &ExponentVector, g: &BoundVector) -> Result<usize> {
    if top.len() != g.len() {
        return Err(Error::Dimension {
            expected: g.len(),
            found: top.len(),
        });
    }
    if !top.divides_unchecked(g.as_vector()) {
        return Err(Error::Bound(format!("{top:?} exceeds the bound {:?}", g.as_vector())));
    }
    Ok(rho_unchecked(top.as_slice(), g.as_vector().as_slice()))
}

#[inline]
pub(crate) fn rho_unchecked(top: &[u32], g: &[u32]) -> usize {
    top.iter().zip(g).filter(|(a, b)| a == b).count()
}

/// Calls `f` on the box index of every point `b` with `lo ≤ b ≤ hi`, stopping
/// early when `f` returns false. Returns false iff stopped early.
#[inline]
pub(crate) fn for_each_in_box(lo: &[u32], hi: &[u32], strides: &[usize], mut f: impl FnMut(usize) -> bool) -> bool {
    let n = lo.len();
    let base: usize = lo.iter().zip(strides).map(|(&a, &s)| a as usize * s).sum();
    let mut cur = lo.to_vec();
    let mut idx = base;
    loop {
        if !f(idx) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == n {
                return true;
            }
            if cur[i] < hi[i] {
                cur[i] += 1;
                idx += strides[i];
                break;
            }
            idx -= (cur[i] - lo[i]) as usize * strides[i];
            cur[i] = lo[i];
            i += 1;
        }
    }
}

/// The characteristic poset of `S/I` (quotient mode) or `I` (ideal mode)
/// inside the box bounded by `g`.
#[derive(Clone)]
pub struct CharPoset {
    g: BoundVector,
    mode: Mode,
    strides: Vec<usize>,
    volume: usize,
    members: BitSet,
    len: usize,
}

impl CharPoset {
    pub fn quotient(ideal: &MonomialIdeal, g: &BoundVector) -> Result<Self> {
        Self::build(ideal, g, Mode::Quotient, DEFAULT_VOLUME_LIMIT)
    }

    pub fn ideal(ideal: &MonomialIdeal, g: &BoundVector) -> Result<Self> {
        Self::build(ideal, g, Mode::Ideal, DEFAULT_VOLUME_LIMIT)
    }

    pub fn build(ideal: &MonomialIdeal, g: &BoundVector, mode: Mode, volume_limit: u64) -> Result<Self> {
        let n = ideal.n_vars();
        if g.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: g.len(),
            });
        }
        match mode {
            Mode::Quotient if ideal.is_unit() => {
                return Err(Error::EmptyPoset(
                    "the quotient by the unit ideal has no monomials".into(),
                ))
            }
            Mode::Ideal if ideal.is_zero() => return Err(Error::EmptyPoset("the zero ideal has no monomials".into())),
            _ => {}
        }
        let gv = g.as_vector();
        if let Some(gen) = ideal.generators().iter().find(|gen| !gen.divides_unchecked(gv)) {
            return Err(Error::Bound(format!(
                "generator {gen} does not divide x^g for g = {gv:?}"
            )));
        }
        let volume = g.volume();
        if volume > volume_limit {
            return Err(Error::Resource(format!(
                "box volume {volume} exceeds the limit {volume_limit}"
            )));
        }
        let volume =
            usize::try_from(volume).map_err(|_| Error::Resource("box volume does not fit in memory".into()))?;

        let mut strides = Vec::with_capacity(n);
        let mut s = 1usize;
        for &e in gv.as_slice() {
            strides.push(s);
            s *= e as usize + 1;
        }

        let mut members = BitSet::new(volume);
        let zero = vec![0u32; n];
        let mut point = vec![0u32; n];
        let mut idx = 0usize;
        for_each_in_box(&zero, gv.as_slice(), &strides, |i| {
            debug_assert_eq!(i, idx);
            let inside = ideal.contains_unchecked(&point);
            if inside == (mode == Mode::Ideal) {
                members.insert(i);
            }
            idx += 1;
            // Advance `point` in step with the odometer (coordinate 0 fastest).
            for (p, &bound) in point.iter_mut().zip(gv.as_slice()) {
                if *p < bound {
                    *p += 1;
                    break;
                }
                *p = 0;
            }
            true
        });
        let len = members.count();
        if len == 0 {
            return Err(Error::EmptyPoset(format!("no {mode} monomials inside the box {gv:?}")));
        }
        Ok(Self {
            g: g.clone(),
            mode,
            strides,
            volume,
            members,
            len,
        })
    }

    pub fn bound(&self) -> &BoundVector {
        &self.g
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n_vars(&self) -> usize {
        self.g.len()
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Never true for a successfully built poset.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of lattice points in the box.
    pub fn volume(&self) -> usize {
        self.volume
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub(crate) fn g_slice(&self) -> &[u32] {
        self.g.as_vector().as_slice()
    }

    #[inline]
    pub(crate) fn is_member_index(&self, idx: usize) -> bool {
        self.members.contains(idx)
    }

    pub(crate) fn member_bits(&self) -> &BitSet {
        &self.members
    }

    pub(crate) fn index_unchecked(&self, a: &[u32]) -> usize {
        a.iter().zip(&self.strides).map(|(&e, &s)| e as usize * s).sum()
    }

    pub(crate) fn decode_into(&self, mut idx: usize, out: &mut [u32]) {
        for (o, &e) in out.iter_mut().zip(self.g_slice()) {
            let r = e as usize + 1;
            *o = (idx % r) as u32;
            idx /= r;
        }
    }

    pub(crate) fn point(&self, idx: usize) -> ExponentVector {
        let mut v = vec![0u32; self.n_vars()];
        self.decode_into(idx, &mut v);
        ExponentVector::new(v).expect("box points respect the exponent ceiling")
    }

    fn check_in_box(&self, a: &ExponentVector) -> Result<()> {
        if a.len() != self.n_vars() {
            return Err(Error::Dimension {
                expected: self.n_vars(),
                found: a.len(),
            });
        }
        if !a.divides_unchecked(self.g.as_vector()) {
            return Err(Error::Bound(format!(
                "{a:?} lies outside the box {:?}",
                self.g.as_vector()
            )));
        }
        Ok(())
    }

    /// Membership of `a`; points outside the box or of the wrong length are not members.
    pub fn contains(&self, a: &ExponentVector) -> bool {
        a.len() == self.n_vars()
            && a.divides_unchecked(self.g.as_vector())
            && self.members.contains(self.index_unchecked(a.as_slice()))
    }

    /// All members, sorted by degree and then lexicographically.
    pub fn members(&self) -> Vec<ExponentVector> {
        let mut out: Vec<ExponentVector> = self.members.iter().map(|i| self.point(i)).collect();
        out.sort_by(|a, b| a.degree_lex_cmp(b));
        out
    }

    /// Members with no other member below them.
    pub fn minimal_members(&self) -> Vec<ExponentVector> {
        let mut buf = vec![0u32; self.n_vars()];
        let mut out: Vec<ExponentVector> = self
            .members
            .iter()
            .filter(|&idx| {
                self.decode_into(idx, &mut buf);
                (0..buf.len()).all(|j| buf[j] == 0 || !self.members.contains(idx - self.strides[j]))
            })
            .map(|idx| self.point(idx))
            .collect();
        out.sort_by(|a, b| a.degree_lex_cmp(b));
        out
    }

    /// True iff every `b` with `lower ≤ b ≤ upper` is a member.
    pub fn interval_contained(&self, lower: &ExponentVector, upper: &ExponentVector) -> Result<bool> {
        self.check_in_box(lower)?;
        self.check_in_box(upper)?;
        if !lower.divides_unchecked(upper) {
            return Err(Error::Bound(format!("interval [{lower:?}, {upper:?}] is empty")));
        }
        Ok(for_each_in_box(
            lower.as_slice(),
            upper.as_slice(),
            &self.strides,
            |i| self.members.contains(i),
        ))
    }

    /// Upward neighbours `a + e_j` that stay inside the box and the poset.
    pub fn covers(&self, a: &ExponentVector) -> Result<Vec<ExponentVector>> {
        self.check_in_box(a)?;
        if !self.contains(a) {
            return Err(Error::Argument(format!("{a:?} is not a member of the poset")));
        }
        let idx = self.index_unchecked(a.as_slice());
        let g = self.g_slice();
        let mut out: Vec<ExponentVector> = (0..self.n_vars())
            .filter(|&j| a[j] < g[j] && self.members.contains(idx + self.strides[j]))
            .map(|j| self.point(idx + self.strides[j]))
            .collect();
        out.sort_by(|x, y| x.degree_lex_cmp(y));
        Ok(out)
    }

    /// Members of total degree `d`.
    pub fn layer(&self, d: u64) -> Vec<ExponentVector> {
        self.members().into_iter().filter(|a| a.total_degree() == d).collect()
    }

    /// Members of total degree `d` divisible by `x^alpha`.
    pub fn layer_multiples(&self, d: u64, alpha: &ExponentVector) -> Result<Vec<ExponentVector>> {
        if alpha.len() != self.n_vars() {
            return Err(Error::Dimension {
                expected: self.n_vars(),
                found: alpha.len(),
            });
        }
        Ok(self
            .layer(d)
            .into_iter()
            .filter(|a| alpha.divides_unchecked(a))
            .collect())
    }

    /// Text dump: `g=…` and `mode=…` headers, then one member per line.
    pub fn dump(&self) -> String {
        let mut out = format!("g={}\nmode={}\n", self.g.as_vector().to_csv(), self.mode);
        for a in self.members() {
            out.push_str(&a.to_csv());
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for CharPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharPoset")
            .field("g", self.g.as_vector())
            .field("mode", &self.mode)
            .field("len", &self.len)
            .finish()
    }
}

/// A nonempty interval `[lower, upper]` lying inside a given poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lower: ExponentVector,
    upper: ExponentVector,
}

impl Interval {
    /// Checks `lower ≤ upper` and containment in `poset`.
    pub fn new_in(poset: &CharPoset, lower: ExponentVector, upper: ExponentVector) -> Result<Self> {
        if !poset.interval_contained(&lower, &upper)? {
            return Err(Error::Argument(format!(
                "interval [{lower:?}, {upper:?}] leaves the poset"
            )));
        }
        Ok(Self { lower, upper })
    }

    /// No containment check; used for certificates read back from disk.
    pub fn from_bounds(lower: ExponentVector, upper: ExponentVector) -> Self {
        Self { lower, upper }
    }

    pub fn lower(&self) -> &ExponentVector {
        &self.lower
    }

    pub fn upper(&self) -> &ExponentVector {
        &self.upper
    }
}
