//! Exact cover of a poset by intervals with minimal tops.
//!
//! Items are the poset members; options are the intervals `[F, G]` lying in
//! the poset whose top `G` raises `F` to the bound on exactly
//! `max(0, s − ρ(F))` free coordinates. Every partition reaching `s` refines
//! into one built from such options (see the module docs of
//! [`crate::solver`]), so the option set is complete for the decision.
//!
//! The search is Algorithm X with the fewest-live-options rule: live option
//! counts are maintained incrementally and an item with no live option fails
//! the branch at once. Failures are traced back to the decisions that caused
//! them, which lets the search jump over irrelevant levels, and items that
//! fail often are preferred when branching (see [`CoverProblem::solve`]).

use crate::bitset::BitSet;
use crate::error::Result;
use crate::poset::{for_each_in_box, CharPoset};
use crate::solver::{for_each_subset, Budget, Placement};

pub(crate) struct CoverProblem {
    /// Option bounds as box indices.
    bounds: Vec<Placement>,
    /// CSR layout: items of option `o` are `option_items[option_start[o]..option_start[o + 1]]`.
    option_start: Vec<usize>,
    option_items: Vec<u32>,
    /// CSR layout of the options containing each item, largest option first.
    item_start: Vec<usize>,
    item_options: Vec<u32>,
}

const UNCOVERED: u32 = u32::MAX;

/// Node limit of the first search run; later runs grow it by half each time.
const RESTART_BASE: u64 = 1000;

enum Run {
    Found(Vec<u32>),
    Exhausted,
    Restart,
}

#[derive(Clone)]
pub(crate) struct CoverState {
    /// Decision level that covered each item, or `UNCOVERED`.
    level: Vec<u32>,
    /// Number of covered items inside each option; live iff zero.
    killed: Vec<u32>,
    /// Number of live options containing each item.
    live: Vec<u32>,
    remaining: usize,
}

struct Frame {
    item: u32,
    next: usize,
    chosen: Option<u32>,
    /// Earlier decision levels responsible for the options of `item` failing so far.
    conflict: BitSet,
}

impl Frame {
    fn new(item: u32, levels: usize) -> Self {
        Self {
            item,
            next: 0,
            chosen: None,
            conflict: BitSet::new(levels),
        }
    }
}

impl CoverProblem {
    /// `order` lists member box indices in (degree, lex) order; item ids follow it.
    pub fn new(poset: &CharPoset, order: &[usize], s: usize) -> Self {
        let n = poset.n_vars();
        let g = poset.g_slice();
        let strides = poset.strides();
        let mut item_of = vec![u32::MAX; poset.volume()];
        for (item, &idx) in order.iter().enumerate() {
            item_of[idx] = item as u32;
        }

        let mut bounds = Vec::new();
        let mut option_start = vec![0];
        let mut option_items: Vec<u32> = Vec::new();
        let mut lo = vec![0u32; n];
        let mut hi = vec![0u32; n];
        for &idx in order {
            poset.decode_into(idx, &mut lo);
            let free: Vec<usize> = (0..n).filter(|&j| lo[j] < g[j]).collect();
            let need = s.saturating_sub(n - free.len());
            for_each_subset(free.len(), need, |chosen| {
                hi.copy_from_slice(&lo);
                for &c in chosen {
                    hi[free[c]] = g[free[c]];
                }
                let mark = option_items.len();
                let inside = for_each_in_box(&lo, &hi, strides, |p| {
                    let item = item_of[p];
                    option_items.push(item);
                    item != u32::MAX
                });
                if inside {
                    option_items[mark..].sort_unstable();
                    bounds.push((idx, poset.index_unchecked(&hi)));
                    option_start.push(option_items.len());
                } else {
                    option_items.truncate(mark);
                }
            });
        }

        let n_items = order.len();
        let n_options = bounds.len();
        let mut per_item: Vec<Vec<u32>> = vec![Vec::new(); n_items];
        for o in 0..n_options {
            for &item in &option_items[option_start[o]..option_start[o + 1]] {
                per_item[item as usize].push(o as u32);
            }
        }
        let size = |o: u32| option_start[o as usize + 1] - option_start[o as usize];
        let mut item_start = vec![0];
        let mut item_options = Vec::new();
        for mut list in per_item {
            list.sort_by(|&a, &b| size(b).cmp(&size(a)).then(a.cmp(&b)));
            item_options.extend(list);
            item_start.push(item_options.len());
        }
        Self {
            bounds,
            option_start,
            option_items,
            item_start,
            item_options,
        }
    }

    fn items(&self, o: u32) -> &[u32] {
        &self.option_items[self.option_start[o as usize]..self.option_start[o as usize + 1]]
    }

    fn options(&self, item: u32) -> &[u32] {
        &self.item_options[self.item_start[item as usize]..self.item_start[item as usize + 1]]
    }

    pub fn initial_state(&self) -> CoverState {
        let n_items = self.item_start.len() - 1;
        let live = (0..n_items as u32).map(|i| self.options(i).len() as u32).collect();
        CoverState {
            level: vec![UNCOVERED; n_items],
            killed: vec![0; self.bounds.len()],
            live,
            remaining: n_items,
        }
    }

    fn n_items(&self) -> usize {
        self.item_start.len() - 1
    }

    /// Covers the items of `o`, recording `level` as the responsible decision.
    pub fn cover(&self, state: &mut CoverState, o: u32, level: u32) {
        for &item in self.items(o) {
            debug_assert_eq!(state.level[item as usize], UNCOVERED);
            state.level[item as usize] = level;
            state.remaining -= 1;
            for &other in self.options(item) {
                let k = &mut state.killed[other as usize];
                *k += 1;
                if *k == 1 {
                    for &j in self.items(other) {
                        state.live[j as usize] -= 1;
                    }
                }
            }
        }
    }

    pub fn uncover(&self, state: &mut CoverState, o: u32) {
        for &item in self.items(o).iter().rev() {
            for &other in self.options(item).iter().rev() {
                let k = &mut state.killed[other as usize];
                *k -= 1;
                if *k == 0 {
                    for &j in self.items(other) {
                        state.live[j as usize] += 1;
                    }
                }
            }
            state.level[item as usize] = UNCOVERED;
            state.remaining += 1;
        }
    }

    /// Uncovered item with the fewest live options, or `None` when all are covered.
    pub fn choose(&self, state: &CoverState) -> Option<u32> {
        if state.remaining == 0 {
            return None;
        }
        let mut best: Option<(u32, u32)> = None;
        for (item, (&level, &live)) in state.level.iter().zip(&state.live).enumerate() {
            if level != UNCOVERED {
                continue;
            }
            if best.is_none_or(|(_, l)| live < l) {
                best = Some((item as u32, live));
                if live <= 1 {
                    break;
                }
            }
        }
        best.map(|(item, _)| item)
    }

    /// Like [`Self::choose`], but ranks items by live options per unit of
    /// conflict weight, so items that keep failing are branched on early.
    fn choose_weighted(&self, state: &CoverState, weights: &[u64]) -> Option<u32> {
        if state.remaining == 0 {
            return None;
        }
        let mut best: Option<(u32, u64, u64)> = None;
        for (item, (&level, &live)) in state.level.iter().zip(&state.live).enumerate() {
            if level != UNCOVERED {
                continue;
            }
            let (live, w) = (u64::from(live), weights[item]);
            if best.is_none_or(|(_, l, bw)| live * bw < l * w) {
                best = Some((item as u32, live, w));
                if live == 0 {
                    break;
                }
            }
        }
        best.map(|(item, _, _)| item)
    }

    /// Live options containing `item`, in branching order.
    pub fn live_options<'a>(&'a self, state: &'a CoverState, item: u32) -> impl Iterator<Item = u32> + 'a {
        self.options(item)
            .iter()
            .copied()
            .filter(|&o| state.killed[o as usize] == 0)
    }

    pub fn bounds(&self, o: u32) -> Placement {
        self.bounds[o as usize]
    }

    /// Earliest decision that covered an item of the dead option `o`.
    fn killer(&self, state: &CoverState, o: u32) -> usize {
        self.items(o)
            .iter()
            .map(|&i| state.level[i as usize])
            .min()
            .expect("options are nonempty") as usize
    }

    /// Decisions that together killed every option containing `item`.
    fn dead_item_conflict(&self, state: &CoverState, item: u32, levels: usize) -> BitSet {
        let mut conflict = BitSet::new(levels);
        for &o in self.options(item) {
            conflict.insert(self.killer(state, o));
        }
        conflict
    }

    /// Depth-first search with conflict-directed backjumping and restarts.
    ///
    /// Decisions already applied to `state` are assumed to sit at levels
    /// below `base`; the search numbers its own decisions from `base` up.
    /// When every option of an item fails, the union of the decisions that
    /// killed those options (directly, or through the failed subtrees) is a
    /// reason for the failure, and the search resumes at the deepest level in
    /// that reason instead of the previous one. An empty reason, or one that
    /// lies entirely below `base`, ends the search.
    ///
    /// Items that fail gain weight, and runs are restarted after a growing
    /// number of nodes so the weights can steer branching towards a small
    /// contradiction. The run limit grows without bound, so the search stays
    /// complete. Returns the chosen options on success.
    pub fn solve(&self, state: &mut CoverState, base: u32, budget: &Budget<'_>) -> Result<Option<Vec<u32>>> {
        let mut weights = vec![1u64; self.n_items()];
        let mut limit = RESTART_BASE;
        loop {
            match self.run(state, base, budget, &mut weights, limit)? {
                Run::Found(chosen) => return Ok(Some(chosen)),
                Run::Exhausted => return Ok(None),
                Run::Restart => limit += limit / 2,
            }
        }
    }

    fn run(
        &self,
        state: &mut CoverState,
        base: u32,
        budget: &Budget<'_>,
        weights: &mut [u64],
        limit: u64,
    ) -> Result<Run> {
        let levels = base as usize + self.n_items() + 1;
        let mut chosen: Vec<u32> = Vec::new();
        let Some(first) = self.choose_weighted(state, weights) else {
            return Ok(Run::Found(chosen));
        };
        if state.live[first as usize] == 0 {
            return Ok(Run::Exhausted);
        }
        let mut stack = vec![Frame::new(first, levels)];
        let mut pending: Option<BitSet> = None;
        let mut nodes = 0u64;
        let unwind = |state: &mut CoverState, chosen: &mut Vec<u32>| {
            while let Some(o) = chosen.pop() {
                self.uncover(state, o);
            }
        };
        loop {
            if let Some(conflict) = pending.take() {
                let Some(deepest) = conflict.max().filter(|&l| l >= base as usize) else {
                    unwind(state, &mut chosen);
                    return Ok(Run::Exhausted);
                };
                let target = deepest - base as usize;
                while stack.len() > target + 1 {
                    let frame = stack.pop().expect("stack deeper than target");
                    if let Some(o) = frame.chosen {
                        self.uncover(state, o);
                        chosen.pop();
                    }
                }
                let frame = stack.last_mut().expect("target frame exists");
                frame.conflict.union_with(&conflict);
                frame.conflict.remove(deepest);
            }

            let level = base + (stack.len() - 1) as u32;
            let frame = stack.last_mut().expect("search stack is nonempty");
            if let Some(o) = frame.chosen.take() {
                self.uncover(state, o);
                chosen.pop();
            }
            let opts = self.options(frame.item);
            let mut pick = None;
            while frame.next < opts.len() {
                let o = opts[frame.next];
                frame.next += 1;
                if state.killed[o as usize] == 0 {
                    pick = Some(o);
                    break;
                }
                frame.conflict.insert(self.killer(state, o));
            }
            let Some(o) = pick else {
                let frame = stack.pop().expect("search stack is nonempty");
                weights[frame.item as usize] += 1;
                if stack.is_empty() {
                    unwind(state, &mut chosen);
                    return Ok(Run::Exhausted);
                }
                pending = Some(frame.conflict);
                continue;
            };
            nodes += 1;
            if nodes > limit {
                unwind(state, &mut chosen);
                return Ok(Run::Restart);
            }
            if !budget.tick()? {
                unwind(state, &mut chosen);
                return Ok(Run::Exhausted);
            }
            self.cover(state, o, level);
            chosen.push(o);
            frame.chosen = Some(o);
            match self.choose_weighted(state, weights) {
                None => return Ok(Run::Found(chosen)),
                Some(item) if state.live[item as usize] == 0 => {
                    weights[item as usize] += 1;
                    pending = Some(self.dead_item_conflict(state, item, levels));
                }
                Some(item) => stack.push(Frame::new(item, levels)),
            }
        }
    }
}

/// Items still uncovered, as a bitset over item ids (test helper).
#[cfg(test)]
pub(crate) fn uncovered_items(state: &CoverState) -> BitSet {
    let mut set = BitSet::new(state.level.len());
    for (i, &l) in state.level.iter().enumerate() {
        if l == UNCOVERED {
            set.insert(i);
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::MonomialIdeal;
    use crate::poset::BoundVector;

    fn order(p: &CharPoset) -> Vec<usize> {
        let mut v: Vec<(crate::ExponentVector, usize)> = p.member_bits().iter().map(|i| (p.point(i), i)).collect();
        v.sort_by(|a, b| a.0.degree_lex_cmp(&b.0));
        v.into_iter().map(|(_, i)| i).collect()
    }

    #[test]
    fn options_of_path3() {
        let p = CharPoset::quotient(
            &MonomialIdeal::path(3).unwrap(),
            &BoundVector::from_slice(&[1, 1, 1]).unwrap(),
        )
        .unwrap();
        let ord = order(&p);
        // s = 1: from 000 raise one of three coordinates; 001, 010, 100 are
        // already saturated somewhere, giving singletons; 101 likewise.
        let prob = CoverProblem::new(&p, &ord, 1);
        assert_eq!(prob.bounds.len(), 3 + 4);
        // s = 2 from 000 only {x1, x3} stays inside; 010 cannot reach ρ = 2.
        let prob = CoverProblem::new(&p, &ord, 2);
        let state = prob.initial_state();
        let item_010 = ord.iter().position(|&i| p.point(i).as_slice() == [0, 1, 0]).unwrap() as u32;
        assert_eq!(state.live[item_010 as usize], 0);
    }

    #[test]
    fn cover_uncover_restores_state() {
        let sq = MonomialIdeal::path(3).unwrap().power(2).unwrap();
        let p = CharPoset::quotient(&sq, &BoundVector::default_for(&sq).unwrap()).unwrap();
        let ord = order(&p);
        let prob = CoverProblem::new(&p, &ord, 1);
        let mut state = prob.initial_state();
        let before = (state.live.clone(), state.killed.clone(), uncovered_items(&state));
        let first = prob.choose(&state).unwrap();
        let opts: Vec<u32> = prob.live_options(&state, first).collect();
        prob.cover(&mut state, opts[0], 0);
        assert!(state.remaining < ord.len());
        prob.uncover(&mut state, opts[0]);
        assert_eq!(
            (state.live.clone(), state.killed.clone(), uncovered_items(&state)),
            before
        );
    }
}
