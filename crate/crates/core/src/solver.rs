//! Exact Stanley depth through interval partitions of a characteristic poset.
//!
//! A partition `P = [F₁,G₁] ∪ … ∪ [F_r,G_r]` certifies the value
//! `min ρ(G_i)`, and the Stanley depth is the best value over all
//! partitions. [`Solver::partition_exists`] decides whether some partition
//! reaches a target `s` by depth-first search; [`Solver::sdepth`] scans `s`
//! downward from an upper bound until the decision succeeds.
//!
//! # Search
//!
//! Members are visited in (degree, lexicographic) order, which is a linear
//! extension of the componentwise order. Let `a` be the least member not yet
//! covered. Every member strictly below `a` precedes it in that order and is
//! already covered, so whichever interval `[F,G]` ends up containing `a` has
//! `F ≤ a` with `F` uncovered, which forces `F = a`. The search therefore only
//! branches on the top `G` of the interval anchored at `a`.
//!
//! With [`CandidateMode::MinimalTops`] the tops are further restricted to
//! `a` raised to the bound on just enough free coordinates to reach `ρ = s`.
//! This loses nothing: an interval `[a,G]` with `ρ(G) ≥ s` and any `G' ≤ G`
//! with `a ≤ G'`, `ρ(G') ≥ s` split as `[a,G'] ∪ ⋃_j B_j`, where `B_j` has top
//! `(G'(1..j-1), G(j..n))`, and each such top saturates at least the
//! coordinates `G'` saturates.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::cover::CoverProblem;
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::ExponentVector;
use crate::poset::{for_each_in_box, rho, rho_unchecked, BoundVector, CharPoset, Interval, Mode};

/// How the decision search branches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Exact cover over minimal-top intervals, branching on the member with
    /// the fewest live intervals, with backjumping and restarts.
    #[default]
    ExactCover,
    /// Always anchor at the least uncovered member and branch on the top of
    /// the interval starting there.
    Anchored,
}

/// Which interval tops the anchored search branches on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CandidateMode {
    /// Only tops with `ρ` exactly `max(s, ρ(a))` that are minimal above the anchor.
    #[default]
    MinimalTops,
    /// Every admissible top, ordered by descending `ρ`, then descending degree.
    AllTops,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Worker threads for the top-level branches; 1 runs sequentially.
    pub threads: usize,
    pub strategy: Strategy,
    /// Only consulted by [`Strategy::Anchored`].
    pub candidates: CandidateMode,
    /// Anchored search only: after placing an interval, every uncovered
    /// member below its top must still start some admissible interval.
    pub forward_check: bool,
    pub node_limit: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            threads: 1,
            strategy: Strategy::default(),
            candidates: CandidateMode::default(),
            forward_check: true,
            node_limit: None,
            deadline: None,
        }
    }
}

/// A full disjoint cover of a poset by intervals, witnessing `claimed_sdepth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub mode: Mode,
    pub g: BoundVector,
    pub intervals: Vec<Interval>,
    pub claimed_sdepth: usize,
}

#[derive(Serialize, Deserialize)]
struct IntervalJson {
    #[serde(rename = "F")]
    lower: Vec<u32>,
    #[serde(rename = "G")]
    upper: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    claimed_sdepth: usize,
    g: Vec<u32>,
    mode: String,
    intervals: Vec<IntervalJson>,
}

impl PartitionCertificate {
    pub fn to_json(&self) -> String {
        let json = CertificateJson {
            claimed_sdepth: self.claimed_sdepth,
            g: self.g.as_vector().as_slice().to_vec(),
            mode: self.mode.as_str().to_owned(),
            intervals: self
                .intervals
                .iter()
                .map(|iv| IntervalJson {
                    lower: iv.lower().as_slice().to_vec(),
                    upper: iv.upper().as_slice().to_vec(),
                })
                .collect(),
        };
        serde_json::to_string(&json).expect("certificate serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: CertificateJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let intervals = json
            .intervals
            .into_iter()
            .map(|iv| {
                Ok(Interval::from_bounds(
                    ExponentVector::new(iv.lower)?,
                    ExponentVector::new(iv.upper)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mode: json.mode.parse()?,
            g: BoundVector::from_slice(&json.g)?,
            intervals,
            claimed_sdepth: json.claimed_sdepth,
        })
    }
}

/// Result of a full Stanley depth computation.
#[derive(Clone, Debug)]
pub struct Solution {
    pub sdepth: usize,
    pub certificate: PartitionCertificate,
    /// Search nodes (interval placements) over all decision calls.
    pub nodes: u64,
    /// The starting point of the downward scan.
    pub upper_bound: usize,
}

/// A placed interval, by box indices of its bottom and top.
pub(crate) type Placement = (usize, usize);

enum Outcome {
    Found(Vec<Placement>),
    Exhausted,
}

pub(crate) struct Budget<'a> {
    nodes: &'a AtomicU64,
    cancel: &'a AtomicBool,
    config: &'a SolverConfig,
}

impl Budget<'_> {
    /// Records one node; returns Ok(false) when another branch already won.
    pub(crate) fn tick(&self) -> Result<bool> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(limit) = self.config.node_limit {
            if n > limit {
                return Err(Error::Resource(format!("search exceeded {limit} nodes")));
            }
        }
        if n.is_multiple_of(1024) {
            if self.cancel.load(Ordering::Relaxed) {
                return Ok(false);
            }
            if let Some(deadline) = self.config.deadline {
                if Instant::now() >= deadline {
                    return Err(Error::Resource("search exceeded its time budget".into()));
                }
            }
        }
        Ok(true)
    }
}

struct Frame {
    pos: usize,
    anchor: usize,
    candidates: Vec<usize>,
    next: usize,
    placed: bool,
}

pub struct Solver<'p> {
    poset: &'p CharPoset,
    config: SolverConfig,
    /// Member box indices in (degree, lexicographic) order.
    order: Vec<usize>,
    nodes: AtomicU64,
}

impl<'p> Solver<'p> {
    pub fn new(poset: &'p CharPoset, config: SolverConfig) -> Self {
        let mut order: Vec<usize> = poset.member_bits().iter().collect();
        let mut buf = vec![0u32; poset.n_vars()];
        let mut keyed: Vec<(u64, Vec<u32>, usize)> = order
            .drain(..)
            .map(|idx| {
                poset.decode_into(idx, &mut buf);
                (buf.iter().map(|&e| u64::from(e)).sum(), buf.clone(), idx)
            })
            .collect();
        keyed.sort();
        let order = keyed.into_iter().map(|(_, _, idx)| idx).collect();
        Self {
            poset,
            config,
            order,
            nodes: AtomicU64::new(0),
        }
    }

    pub fn poset(&self) -> &CharPoset {
        self.poset
    }

    /// Nodes explored so far by this solver.
    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    /// `min` over minimal members `a` of the largest `ρ(G)` with `[a,G] ⊆ P`.
    ///
    /// Any partition puts each minimal member at the bottom of its interval,
    /// so no partition can beat this value.
    pub fn upper_bound(&self) -> usize {
        let p = self.poset;
        let g = p.g_slice();
        let n = p.n_vars();
        let mut best_overall = n;
        let mut reach = BitSet::new(p.volume());
        let mut cur = vec![0u32; n];
        for a in p.minimal_members() {
            let a = a.as_slice();
            let mut best = 0;
            // [a,G] ⊆ P iff G ∈ P and [a, G - e_j] ⊆ P for every j with G(j) > a(j);
            // the odometer visits every G - e_j before G.
            cur.copy_from_slice(a);
            for_each_in_box(a, g, p.strides(), |idx| {
                let ok =
                    p.is_member_index(idx) && (0..n).all(|j| cur[j] == a[j] || reach.contains(idx - p.strides()[j]));
                if ok {
                    reach.insert(idx);
                    best = best.max(rho_unchecked(&cur, g));
                }
                for j in 0..n {
                    if cur[j] < g[j] {
                        cur[j] += 1;
                        break;
                    }
                    cur[j] = a[j];
                }
                true
            });
            // Clear only what this pass touched.
            for_each_in_box(a, g, p.strides(), |idx| {
                reach.remove(idx);
                true
            });
            best_overall = best_overall.min(best);
        }
        best_overall
    }

    /// Decides whether a partition with `min ρ ≥ s` exists and returns one.
    pub fn partition_exists(&self, s: usize) -> Result<Option<PartitionCertificate>> {
        let cancel = AtomicBool::new(false);
        let budget = Budget {
            nodes: &self.nodes,
            cancel: &cancel,
            config: &self.config,
        };
        let found = if self.config.strategy == Strategy::ExactCover {
            self.exact_cover(s, &budget)?
        } else if self.config.threads > 1 {
            self.search_parallel(s, &budget)?
        } else {
            let mut uncovered = self.poset.member_bits().clone();
            match self.search(s, &mut uncovered, 0, Vec::new(), &budget)? {
                Outcome::Found(p) => Some(p),
                Outcome::Exhausted => None,
            }
        };
        Ok(found.map(|placements| self.certificate(&placements)))
    }

    /// The Stanley depth of the poset together with a witness partition.
    pub fn sdepth(&self) -> Result<Solution> {
        let upper_bound = self.upper_bound();
        for s in (0..=upper_bound).rev() {
            if let Some(certificate) = self.partition_exists(s)? {
                return Ok(Solution {
                    sdepth: certificate.claimed_sdepth,
                    certificate,
                    nodes: self.nodes(),
                    upper_bound,
                });
            }
        }
        unreachable!("the partition into singletons always reaches s = 0")
    }

    fn certificate(&self, placements: &[Placement]) -> PartitionCertificate {
        let g = self.poset.g_slice();
        let mut intervals = Vec::with_capacity(placements.len());
        let mut claimed = usize::MAX;
        for &(lo, hi) in placements {
            let upper = self.poset.point(hi);
            claimed = claimed.min(rho_unchecked(upper.as_slice(), g));
            intervals.push(Interval::from_bounds(self.poset.point(lo), upper));
        }
        PartitionCertificate {
            mode: self.poset.mode(),
            g: self.poset.bound().clone(),
            intervals,
            claimed_sdepth: claimed,
        }
    }

    fn advance(&self, uncovered: &BitSet, mut pos: usize) -> usize {
        while pos < self.order.len() && !uncovered.contains(self.order[pos]) {
            pos += 1;
        }
        pos
    }

    fn box_free(&self, uncovered: &BitSet, lo: &[u32], hi: &[u32]) -> bool {
        for_each_in_box(lo, hi, self.poset.strides(), |i| uncovered.contains(i))
    }

    fn set_box(&self, uncovered: &mut BitSet, lo: usize, hi: usize, free: bool) {
        let n = self.poset.n_vars();
        let mut a = vec![0u32; n];
        let mut b = vec![0u32; n];
        self.poset.decode_into(lo, &mut a);
        self.poset.decode_into(hi, &mut b);
        for_each_in_box(&a, &b, self.poset.strides(), |i| {
            if free {
                uncovered.insert(i);
            } else {
                uncovered.remove(i);
            }
            true
        });
    }

    /// Admissible tops for an interval anchored at `anchor`, best first.
    fn candidates(&self, s: usize, uncovered: &BitSet, anchor: usize) -> Vec<usize> {
        let p = self.poset;
        let g = p.g_slice();
        let n = p.n_vars();
        let mut a = vec![0u32; n];
        p.decode_into(anchor, &mut a);
        match self.config.candidates {
            CandidateMode::MinimalTops => {
                let free: Vec<usize> = (0..n).filter(|&j| a[j] < g[j]).collect();
                let need = s.saturating_sub(n - free.len());
                if need > free.len() {
                    return Vec::new();
                }
                let mut out = Vec::new();
                let mut top = a.clone();
                for_each_subset(free.len(), need, |chosen| {
                    top.copy_from_slice(&a);
                    for &c in chosen {
                        top[free[c]] = g[free[c]];
                    }
                    if self.box_free(uncovered, &a, &top) {
                        out.push((top.clone(), p.index_unchecked(&top)));
                    }
                });
                // All candidates share ρ; prefer deeper boxes.
                out.sort_by_key(|(t, _)| std::cmp::Reverse(t.iter().map(|&e| u64::from(e)).sum::<u64>()));
                out.into_iter().map(|(_, idx)| idx).collect()
            }
            CandidateMode::AllTops => {
                let mut out: Vec<(usize, u64, Vec<u32>, usize)> = Vec::new();
                let mut top = a.clone();
                for_each_in_box(&a, g, p.strides(), |idx| {
                    if rho_unchecked(&top, g) >= s && self.box_free(uncovered, &a, &top) {
                        let deg = top.iter().map(|&e| u64::from(e)).sum();
                        out.push((rho_unchecked(&top, g), deg, top.clone(), idx));
                    }
                    for j in 0..n {
                        if top[j] < g[j] {
                            top[j] += 1;
                            break;
                        }
                        top[j] = a[j];
                    }
                    true
                });
                out.sort_by(|x, y| y.0.cmp(&x.0).then(y.1.cmp(&x.1)).then(x.2.cmp(&y.2)));
                out.into_iter().map(|(_, _, _, idx)| idx).collect()
            }
        }
    }

    /// True if the uncovered member `b` can still start an admissible interval.
    fn viable(&self, s: usize, uncovered: &BitSet, b: &[u32]) -> bool {
        let g = self.poset.g_slice();
        let n = b.len();
        let free: Vec<usize> = (0..n).filter(|&j| b[j] < g[j]).collect();
        let need = s.saturating_sub(n - free.len());
        if need > free.len() {
            return false;
        }
        let mut top = b.to_vec();
        let mut ok = false;
        for_each_subset(free.len(), need, |chosen| {
            if ok {
                return;
            }
            top.copy_from_slice(b);
            for &c in chosen {
                top[free[c]] = g[free[c]];
            }
            ok = self.box_free(uncovered, b, &top);
        });
        ok
    }

    /// Every uncovered member below `top` must remain the bottom of some
    /// admissible interval; the interval containing it in any completion
    /// restricts to one.
    fn forward_ok(&self, s: usize, uncovered: &BitSet, top: usize) -> bool {
        let p = self.poset;
        let n = p.n_vars();
        let mut hi = vec![0u32; n];
        p.decode_into(top, &mut hi);
        let lo = vec![0u32; n];
        let mut cur = lo.clone();
        for_each_in_box(&lo, &hi, p.strides(), |idx| {
            let ok = !uncovered.contains(idx) || self.viable(s, uncovered, &cur);
            for j in 0..n {
                if cur[j] < hi[j] {
                    cur[j] += 1;
                    break;
                }
                cur[j] = 0;
            }
            ok
        })
    }

    fn search(
        &self,
        s: usize,
        uncovered: &mut BitSet,
        start: usize,
        mut placed: Vec<Placement>,
        budget: &Budget<'_>,
    ) -> Result<Outcome> {
        let pos = self.advance(uncovered, start);
        if pos == self.order.len() {
            return Ok(Outcome::Found(placed));
        }
        let anchor = self.order[pos];
        let mut stack = vec![Frame {
            pos,
            anchor,
            candidates: self.candidates(s, uncovered, anchor),
            next: 0,
            placed: false,
        }];
        let base = placed.len();
        while let Some(frame) = stack.last_mut() {
            if frame.placed {
                let (lo, hi) = placed.pop().expect("placement recorded");
                self.set_box(uncovered, lo, hi, true);
                frame.placed = false;
            }
            if frame.next == frame.candidates.len() {
                stack.pop();
                continue;
            }
            let top = frame.candidates[frame.next];
            frame.next += 1;
            if !budget.tick()? {
                return Ok(Outcome::Exhausted);
            }
            let anchor = frame.anchor;
            self.set_box(uncovered, anchor, top, false);
            placed.push((anchor, top));
            frame.placed = true;
            let next_pos = self.advance(uncovered, frame.pos + 1);
            if next_pos == self.order.len() {
                return Ok(Outcome::Found(placed));
            }
            if self.config.forward_check && !self.forward_ok(s, uncovered, top) {
                continue;
            }
            let next_anchor = self.order[next_pos];
            let candidates = self.candidates(s, uncovered, next_anchor);
            stack.push(Frame {
                pos: next_pos,
                anchor: next_anchor,
                candidates,
                next: 0,
                placed: false,
            });
        }
        debug_assert_eq!(placed.len(), base);
        Ok(Outcome::Exhausted)
    }

    fn exact_cover(&self, s: usize, budget: &Budget<'_>) -> Result<Option<Vec<Placement>>> {
        let problem = CoverProblem::new(self.poset, &self.order, s);
        let mut state = problem.initial_state();
        let placements = |chosen: Vec<u32>| chosen.into_iter().map(|o| problem.bounds(o)).collect::<Vec<_>>();
        if self.config.threads <= 1 {
            return Ok(problem.solve(&mut state, 0, budget)?.map(placements));
        }
        let Some(first) = problem.choose(&state) else {
            return Ok(Some(Vec::new()));
        };
        let branches: Vec<u32> = problem.live_options(&state, first).collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.threads)
            .build()
            .map_err(|e| Error::Resource(format!("cannot start worker threads: {e}")))?;
        let result: Option<Result<Vec<u32>>> = pool.install(|| {
            branches.par_iter().find_map_any(|&o| {
                let mut local = state.clone();
                problem.cover(&mut local, o, 0);
                match problem.solve(&mut local, 1, budget) {
                    Ok(Some(mut rest)) => {
                        budget.cancel.store(true, Ordering::Relaxed);
                        rest.insert(0, o);
                        Some(Ok(rest))
                    }
                    Ok(None) => None,
                    Err(e) => {
                        budget.cancel.store(true, Ordering::Relaxed);
                        Some(Err(e))
                    }
                }
            })
        });
        // A cancelled branch reports exhaustion, so only trust `None` when no
        // branch succeeded; a success always sets the flag first.
        Ok(result.transpose()?.map(placements))
    }

    fn search_parallel(&self, s: usize, budget: &Budget<'_>) -> Result<Option<Vec<Placement>>> {
        let members = self.poset.member_bits();
        let pos = self.advance(members, 0);
        let anchor = self.order[pos];
        let candidates = self.candidates(s, members, anchor);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.threads)
            .build()
            .map_err(|e| Error::Resource(format!("cannot start worker threads: {e}")))?;
        let result: Option<Result<Vec<Placement>>> = pool.install(|| {
            candidates.par_iter().find_map_any(|&top| {
                let mut uncovered = members.clone();
                self.set_box(&mut uncovered, anchor, top, false);
                if self.config.forward_check && !self.forward_ok(s, &uncovered, top) {
                    return None;
                }
                match self.search(s, &mut uncovered, pos + 1, vec![(anchor, top)], budget) {
                    Ok(Outcome::Found(p)) => {
                        budget.cancel.store(true, Ordering::Relaxed);
                        Some(Ok(p))
                    }
                    Ok(Outcome::Exhausted) => None,
                    Err(e) => {
                        budget.cancel.store(true, Ordering::Relaxed);
                        Some(Err(e))
                    }
                }
            })
        });
        result.transpose()
    }
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Decision form with the default (sequential) configuration.
pub fn partition_exists(poset: &CharPoset, s: usize) -> Result<Option<PartitionCertificate>> {
    Solver::new(poset, SolverConfig::default()).partition_exists(s)
}

/// Stanley depth of a poset with the default configuration.
pub fn sdepth_of_poset(poset: &CharPoset) -> Result<(usize, PartitionCertificate)> {
    let sol = Solver::new(poset, SolverConfig::default()).sdepth()?;
    Ok((sol.sdepth, sol.certificate))
}

fn sdepth_mode(ideal: &MonomialIdeal, g: Option<&BoundVector>, mode: Mode) -> Result<(usize, PartitionCertificate)> {
    let g = match g {
        Some(g) => g.clone(),
        None => BoundVector::default_for(ideal)?,
    };
    let poset = CharPoset::build(ideal, &g, mode, crate::poset::DEFAULT_VOLUME_LIMIT)?;
    sdepth_of_poset(&poset)
}

/// `sdepth(S/I)`; `g` defaults to [`BoundVector::default_for`].
pub fn sdepth_quotient(ideal: &MonomialIdeal, g: Option<&BoundVector>) -> Result<(usize, PartitionCertificate)> {
    sdepth_mode(ideal, g, Mode::Quotient)
}

/// `sdepth(I)`; `g` defaults to [`BoundVector::default_for`].
pub fn sdepth_ideal(ideal: &MonomialIdeal, g: Option<&BoundVector>) -> Result<(usize, PartitionCertificate)> {
    sdepth_mode(ideal, g, Mode::Ideal)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateIssue {
    BoundMismatch,
    ModeMismatch,
    NoIntervals,
    /// Interval `index` has `F ≰ G`, a wrong length, or leaves the box.
    Malformed {
        index: usize,
    },
    /// Interval `index` contains a non-member.
    LeavesPoset {
        index: usize,
    },
    Overlap {
        point: ExponentVector,
    },
    Uncovered {
        point: ExponentVector,
    },
    ClaimMismatch {
        claimed: usize,
        actual: usize,
    },
}

/// Outcome of [`validate_certificate`]; valid iff no issues were found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    pub issues: Vec<CertificateIssue>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Points of `[lo, hi]` as vectors, enumerated independently of box indexing.
fn interval_points(lo: &ExponentVector, hi: &ExponentVector) -> Vec<ExponentVector> {
    let mut out = vec![Vec::<u32>::new()];
    for j in 0..lo.len() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo[j]..=hi[j]).map(move |e| {
                    let mut p = prefix.clone();
                    p.push(e);
                    p
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|p| ExponentVector::new(p).expect("within ceiling"))
        .collect()
}

/// Re-checks every certificate invariant without using the solver.
pub fn validate_certificate(poset: &CharPoset, cert: &PartitionCertificate) -> Validation {
    use std::collections::HashMap;

    let mut issues = Vec::new();
    if cert.g != *poset.bound() {
        issues.push(CertificateIssue::BoundMismatch);
        return Validation { issues };
    }
    if cert.mode != poset.mode() {
        issues.push(CertificateIssue::ModeMismatch);
    }
    if cert.intervals.is_empty() {
        issues.push(CertificateIssue::NoIntervals);
        return Validation { issues };
    }
    let g = poset.bound().as_vector();
    let mut seen: HashMap<ExponentVector, usize> = HashMap::new();
    let mut min_rho = usize::MAX;
    for (index, iv) in cert.intervals.iter().enumerate() {
        let (lo, hi) = (iv.lower(), iv.upper());
        let well_formed =
            lo.len() == g.len() && hi.len() == g.len() && lo.divides_unchecked(hi) && hi.divides_unchecked(g);
        if !well_formed {
            issues.push(CertificateIssue::Malformed { index });
            continue;
        }
        min_rho = min_rho.min(rho(hi, poset.bound()).expect("checked against the bound"));
        let mut inside = true;
        for point in interval_points(lo, hi) {
            inside &= poset.contains(&point);
            *seen.entry(point).or_insert(0) += 1;
        }
        if !inside {
            issues.push(CertificateIssue::LeavesPoset { index });
        }
    }
    let mut overlaps: Vec<_> = seen.iter().filter(|(_, &c)| c > 1).map(|(p, _)| p.clone()).collect();
    overlaps.sort_by(|a, b| a.degree_lex_cmp(b));
    issues.extend(overlaps.into_iter().map(|point| CertificateIssue::Overlap { point }));
    for point in poset.members() {
        if !seen.contains_key(&point) {
            issues.push(CertificateIssue::Uncovered { point });
        }
    }
    if min_rho != usize::MAX && min_rho != cert.claimed_sdepth {
        issues.push(CertificateIssue::ClaimMismatch {
            claimed: cert.claimed_sdepth,
            actual: min_rho,
        });
    }
    Validation { issues }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(e: &[u32]) -> ExponentVector {
        ExponentVector::new(e.to_vec()).unwrap()
    }

    fn ones(n: usize) -> BoundVector {
        BoundVector::from_slice(&vec![1; n]).unwrap()
    }

    fn p3_quotient() -> CharPoset {
        CharPoset::quotient(&MonomialIdeal::path(3).unwrap(), &ones(3)).unwrap()
    }

    #[test]
    fn subsets_in_lex_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let mut count = 0;
        for_each_subset(3, 0, |s| {
            assert!(s.is_empty());
            count += 1;
        });
        assert_eq!(count, 1);
        for_each_subset(2, 3, |_| panic!("no 3-subsets of a 2-set"));
    }

    #[test]
    fn partition_exists_examples() {
        let p = p3_quotient();
        let cert = partition_exists(&p, 1).unwrap().expect("s = 1 is reachable");
        assert!(cert.claimed_sdepth >= 1);
        assert!(validate_certificate(&p, &cert).is_valid());
        assert!(partition_exists(&p, 2).unwrap().is_none());
        let singles = partition_exists(&p, 0).unwrap().unwrap();
        assert!(validate_certificate(&p, &singles).is_valid());
    }

    #[test]
    fn singleton_partition_at_zero() {
        // With minimal tops and s = 0 every interval is a singleton.
        let p = CharPoset::quotient(&MonomialIdeal::path(4).unwrap(), &ones(4)).unwrap();
        let cert = partition_exists(&p, 0).unwrap().unwrap();
        assert_eq!(cert.intervals.len(), p.len());
        assert!(cert.intervals.iter().all(|iv| iv.lower() == iv.upper()));
    }

    #[test]
    fn sdepth_examples() {
        let p6 = CharPoset::quotient(&MonomialIdeal::path(6).unwrap(), &ones(6)).unwrap();
        assert_eq!(sdepth_of_poset(&p6).unwrap().0, 2);
        let m4 = CharPoset::ideal(&MonomialIdeal::maximal(4).unwrap(), &ones(4)).unwrap();
        assert_eq!(sdepth_of_poset(&m4).unwrap().0, 2);
        let sq = MonomialIdeal::path(4).unwrap().power(2).unwrap();
        let p = CharPoset::quotient(&sq, &BoundVector::from_slice(&[2, 2, 2, 2]).unwrap()).unwrap();
        assert_eq!(sdepth_of_poset(&p).unwrap().0, 1);
    }

    #[test]
    fn sdepth_quotient_examples() {
        assert_eq!(sdepth_quotient(&MonomialIdeal::path(5).unwrap(), None).unwrap().0, 2);
        // The closed form max(ceil((n - t + 1) / 3), 1) predicts 1 here, but the
        // poset admits a partition with every top at ρ ≥ 2.
        let cube = MonomialIdeal::path(5).unwrap().power(3).unwrap();
        let (s, cert) = sdepth_quotient(&cube, None).unwrap();
        assert_eq!(s, 2);
        let p = CharPoset::quotient(&cube, &BoundVector::default_for(&cube).unwrap()).unwrap();
        assert!(validate_certificate(&p, &cert).is_valid());
        assert_eq!(sdepth_quotient(&MonomialIdeal::path(2).unwrap(), None).unwrap().0, 1);
        assert!(sdepth_quotient(&MonomialIdeal::zero(2).unwrap(), None).is_err());
        assert!(sdepth_quotient(&MonomialIdeal::unit(2).unwrap(), None).is_err());
    }

    #[test]
    fn sdepth_ideal_examples() {
        assert_eq!(sdepth_ideal(&MonomialIdeal::maximal(3).unwrap(), None).unwrap().0, 2);
        assert_eq!(sdepth_ideal(&MonomialIdeal::maximal(5).unwrap(), None).unwrap().0, 3);
        let principal = MonomialIdeal::path(2).unwrap();
        let (s, cert) = sdepth_ideal(&principal, None).unwrap();
        assert_eq!(s, 2);
        assert_eq!(cert.intervals, vec![Interval::from_bounds(v(&[1, 1]), v(&[1, 1]))]);
    }

    #[test]
    fn upper_bound_seed() {
        let p = p3_quotient();
        // The top of any interval at 0 is a member; (1,0,1) has ρ = 2.
        assert_eq!(Solver::new(&p, SolverConfig::default()).upper_bound(), 2);
        let m3 = CharPoset::ideal(&MonomialIdeal::maximal(3).unwrap(), &ones(3)).unwrap();
        assert_eq!(Solver::new(&m3, SolverConfig::default()).upper_bound(), 3);
    }

    #[test]
    fn validation_detects_tampering() {
        let p = p3_quotient();
        let (_, cert) = sdepth_of_poset(&p).unwrap();
        assert!(validate_certificate(&p, &cert).is_valid());

        let mut missing = cert.clone();
        missing.intervals.pop();
        let report = validate_certificate(&p, &missing);
        assert!(report
            .issues
            .iter()
            .any(|i| matches!(i, CertificateIssue::Uncovered { .. })));

        let mut inflated = cert.clone();
        inflated.claimed_sdepth += 1;
        let report = validate_certificate(&p, &inflated);
        assert_eq!(
            report.issues,
            vec![CertificateIssue::ClaimMismatch { claimed: 2, actual: 1 }]
        );

        let mut overlapping = cert.clone();
        overlapping
            .intervals
            .push(Interval::from_bounds(v(&[0, 0, 0]), v(&[0, 0, 0])));
        let report = validate_certificate(&p, &overlapping);
        assert!(report
            .issues
            .contains(&CertificateIssue::Overlap { point: v(&[0, 0, 0]) }));

        let mut leaking = cert.clone();
        leaking.intervals = vec![Interval::from_bounds(v(&[0, 0, 0]), v(&[1, 1, 1]))];
        let report = validate_certificate(&p, &leaking);
        assert!(report.issues.contains(&CertificateIssue::LeavesPoset { index: 0 }));

        let mut backwards = cert;
        backwards
            .intervals
            .push(Interval::from_bounds(v(&[1, 0, 0]), v(&[0, 0, 0])));
        let report = validate_certificate(&p, &backwards);
        assert!(report.issues.contains(&CertificateIssue::Malformed {
            index: backwards.intervals.len() - 1
        }));
    }

    #[test]
    fn json_layout_is_stable() {
        let p = CharPoset::quotient(&MonomialIdeal::path(2).unwrap(), &ones(2)).unwrap();
        let (_, cert) = sdepth_of_poset(&p).unwrap();
        let json = cert.to_json();
        assert!(json.starts_with("{\"claimed_sdepth\":1,\"g\":[1,1],\"mode\":\"quotient\",\"intervals\":[{\"F\":"));
        assert_eq!(PartitionCertificate::from_json(&json).unwrap(), cert);
        assert!(PartitionCertificate::from_json("{\"claimed_sdepth\":1}").is_err());
    }

    #[test]
    fn candidate_modes_agree() {
        for n in 2..=7 {
            let p = CharPoset::quotient(&MonomialIdeal::path(n).unwrap(), &ones(n)).unwrap();
            let full = SolverConfig {
                candidates: CandidateMode::AllTops,
                forward_check: false,
                ..Default::default()
            };
            let a = Solver::new(&p, full).sdepth().unwrap();
            let b = Solver::new(&p, SolverConfig::default()).sdepth().unwrap();
            assert_eq!(a.sdepth, b.sdepth, "n = {n}");
            assert!(validate_certificate(&p, &a.certificate).is_valid());
        }
    }

    #[test]
    fn monotone_decision() {
        let sq = MonomialIdeal::path(4).unwrap().power(2).unwrap();
        let p = CharPoset::quotient(&sq, &BoundVector::default_for(&sq).unwrap()).unwrap();
        let solver = Solver::new(&p, SolverConfig::default());
        let best = solver.sdepth().unwrap().sdepth;
        for s in 0..=best {
            assert!(solver.partition_exists(s).unwrap().is_some());
        }
        assert!(solver.partition_exists(best + 1).unwrap().is_none());
    }

    #[test]
    fn parallel_matches_sequential() {
        for n in 3..=8 {
            let p = CharPoset::quotient(&MonomialIdeal::path(n).unwrap(), &ones(n)).unwrap();
            let seq = Solver::new(&p, SolverConfig::default()).sdepth().unwrap();
            let par = Solver::new(
                &p,
                SolverConfig {
                    threads: 4,
                    ..Default::default()
                },
            )
            .sdepth()
            .unwrap();
            assert_eq!(seq.sdepth, par.sdepth);
            assert!(validate_certificate(&p, &par.certificate).is_valid());
        }
    }

    #[test]
    fn deterministic_certificates() {
        let sq = MonomialIdeal::path(3).unwrap().power(2).unwrap();
        let p = CharPoset::quotient(&sq, &BoundVector::default_for(&sq).unwrap()).unwrap();
        let first = Solver::new(&p, SolverConfig::default()).sdepth().unwrap();
        let second = Solver::new(&p, SolverConfig::default()).sdepth().unwrap();
        assert_eq!(first.certificate, second.certificate);
        assert_eq!(first.nodes, second.nodes);
    }

    #[test]
    fn node_limit_is_a_resource_error() {
        let p = CharPoset::ideal(&MonomialIdeal::maximal(5).unwrap(), &ones(5)).unwrap();
        let cfg = SolverConfig {
            node_limit: Some(3),
            ..Default::default()
        };
        assert!(matches!(Solver::new(&p, cfg).sdepth(), Err(Error::Resource(_))));
    }
}
