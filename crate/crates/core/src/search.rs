//! Lexicographic k-subset searches for linearly dependent columns.
//!
//! Subsets are enumerated depth first in lexicographic order of positions in
//! a candidate list, keeping one [`Eliminator`] per worker so that each leaf
//! costs a single vector reduction. Work is split by the first element; every
//! split covers a contiguous range of lexicographic ranks, which lets a global
//! budget be enforced identically for any worker count.

use crate::ff::{Elem, FieldCtx};
use crate::linalg::Eliminator;
use crate::veronese::binomial;

/// Vectors stored contiguously, one per candidate column.
#[derive(Clone, Copy, Debug)]
pub struct Columns<'a> {
    pub ctx: &'a FieldCtx,
    pub width: usize,
    pub data: &'a [Elem],
}

impl<'a> Columns<'a> {
    pub fn new(ctx: &'a FieldCtx, width: usize, data: &'a [Elem]) -> Self {
        debug_assert_eq!(data.len() % width.max(1), 0);
        Columns { ctx, width, data }
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.width).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> &'a [Elem] {
        &self.data[i * self.width..(i + 1) * self.width]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Lexicographically first dependent subset (column indices) and its
    /// 0-based lexicographic rank among all k-subsets of the candidates.
    Found { subset: Vec<usize>, rank: u64 },
    /// Every subset examined; none dependent.
    Exhausted { examined: u64 },
    /// The budget ran out first.
    BudgetHit { examined: u64 },
}

impl Outcome {
    pub fn examined(&self) -> u64 {
        match self {
            Outcome::Found { rank, .. } => rank + 1,
            Outcome::Exhausted { examined } | Outcome::BudgetHit { examined } => *examined,
        }
    }
}

enum Local {
    Found(Vec<usize>, u64),
    Budget,
    Done,
}

struct Dfs<'a> {
    cols: Columns<'a>,
    cand: &'a [usize],
    k: usize,
    elim: Eliminator,
    stack: Vec<usize>,
    examined: u64,
    limit: u64,
}

impl<'a> Dfs<'a> {
    fn new(cols: Columns<'a>, cand: &'a [usize], k: usize, limit: u64) -> Self {
        Dfs {
            cols,
            cand,
            k,
            elim: Eliminator::with_capacity(cols.width, k),
            stack: Vec::with_capacity(k),
            examined: 0,
            limit,
        }
    }

    fn subset(&self) -> Vec<usize> {
        self.stack.iter().map(|&p| self.cand[p]).collect()
    }

    /// Extends the current stack with positions `from..`; returns the first
    /// dependent completion.
    fn run(&mut self, from: usize) -> Option<Local> {
        let depth = self.stack.len();
        let last = self.cand.len() - (self.k - depth);
        for pos in from..=last {
            if depth + 1 == self.k {
                if self.examined == self.limit {
                    return Some(Local::Budget);
                }
                self.examined += 1;
            }
            let ok = self.elim.push(self.cols.ctx, self.cols.get(self.cand[pos]));
            self.stack.push(pos);
            if !ok {
                // Every completion is dependent; the first one is the
                // lexicographically smallest leaf of this subtree.
                if depth + 1 < self.k {
                    if self.examined == self.limit {
                        return Some(Local::Budget);
                    }
                    self.examined += 1;
                    self.stack.extend(pos + 1..pos + self.k - depth);
                }
                return Some(Local::Found(self.subset(), self.examined - 1));
            }
            if depth + 1 < self.k {
                if let Some(hit) = self.run(pos + 1) {
                    return Some(hit);
                }
            }
            self.stack.pop();
            self.elim.truncate(depth);
        }
        None
    }

    /// Subtree rooted at first position `first`.
    fn run_first(mut self, first: usize) -> Local {
        self.stack.clear();
        self.elim.clear();
        if self.k == 1 {
            if self.limit == 0 {
                return Local::Budget;
            }
            let v = self.cols.get(self.cand[first]);
            return if v.iter().all(|x| x.is_zero()) {
                Local::Found(vec![self.cand[first]], 0)
            } else {
                Local::Done
            };
        }
        let ok = self.elim.push(self.cols.ctx, self.cols.get(self.cand[first]));
        self.stack.push(first);
        if !ok {
            if self.limit == 0 {
                return Local::Budget;
            }
            self.stack.extend(first + 1..first + self.k);
            return Local::Found(self.subset(), 0);
        }
        match self.run(first + 1) {
            Some(hit) => hit,
            None => Local::Done,
        }
    }
}

/// Number of k-subsets whose first element is at position `first` of `len`.
fn block_size(len: usize, k: usize, first: usize) -> u64 {
    binomial((len - first - 1) as u64, (k - 1) as u64)
}

fn block_starts(len: usize, k: usize) -> Vec<u64> {
    let mut starts = Vec::with_capacity(len);
    let mut acc = 0u64;
    for first in 0..=len - k {
        starts.push(acc);
        acc = acc.saturating_add(block_size(len, k, first));
    }
    starts
}

/// Searches the k-subsets of `cand` (sorted column indices) for the
/// lexicographically first dependent one, examining at most `limit` subsets
/// in lexicographic order. The result does not depend on `workers`.
pub fn first_dependent(cols: Columns<'_>, cand: &[usize], k: usize, limit: u64, workers: usize) -> Outcome {
    if k == 0 || k > cand.len() {
        return Outcome::Exhausted { examined: 0 };
    }
    let starts = block_starts(cand.len(), k);
    let total = binomial(cand.len() as u64, k as u64);
    let task = |first: usize| -> Option<(Local, u64)> {
        let start = starts[first];
        if start >= limit {
            return Some((Local::Budget, start));
        }
        match Dfs::new(cols, cand, k, limit - start).run_first(first) {
            Local::Done => None,
            hit => Some((hit, start)),
        }
    };
    let hit = run_tasks(starts.len(), workers, task);
    match hit {
        Some((Local::Found(subset, r), start)) => Outcome::Found { subset, rank: start + r },
        Some((Local::Budget, _)) => Outcome::BudgetHit { examined: limit.min(total) },
        Some((Local::Done, _)) => unreachable!(),
        None => Outcome::Exhausted { examined: total },
    }
}

/// Every dependent k-subset of `cand`, in lexicographic order. `None` when
/// the number of k-subsets exceeds `limit`.
pub fn all_dependent(cols: Columns<'_>, cand: &[usize], k: usize, limit: u64, workers: usize) -> Option<Vec<Vec<usize>>> {
    if k == 0 || k > cand.len() {
        return Some(Vec::new());
    }
    if binomial(cand.len() as u64, k as u64) > limit {
        return None;
    }
    let task = |first: usize| -> Vec<Vec<usize>> {
        let mut found = Vec::new();
        let mut elim = Eliminator::with_capacity(cols.width, k);
        let mut stack = vec![first];
        collect(cols, cand, k, &mut elim, &mut stack, &mut found);
        found
    };
    let per_first = map_tasks(cand.len() - k + 1, workers, task);
    Some(per_first.into_iter().flatten().collect())
}

fn collect(
    cols: Columns<'_>,
    cand: &[usize],
    k: usize,
    elim: &mut Eliminator,
    stack: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    let depth = stack.len() - 1;
    let pos = stack[depth];
    if !elim.push(cols.ctx, cols.get(cand[pos])) {
        // all completions are dependent
        let mut rest = Vec::new();
        completions(pos + 1, cand.len(), k - depth - 1, &mut rest, &mut |tail| {
            let mut s: Vec<usize> = stack.iter().map(|&p| cand[p]).collect();
            s.extend(tail.iter().map(|&p| cand[p]));
            found.push(s);
        });
        return;
    }
    if depth + 1 == k {
        elim.truncate(depth);
        return;
    }
    for next in pos + 1..=cand.len() - (k - depth - 1) {
        stack.push(next);
        collect(cols, cand, k, elim, stack, found);
        stack.pop();
    }
    elim.truncate(depth);
}

fn completions(from: usize, len: usize, need: usize, acc: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if need == 0 {
        emit(acc);
        return;
    }
    for p in from..=len - need {
        acc.push(p);
        completions(p + 1, len, need - 1, acc, emit);
        acc.pop();
    }
}

#[cfg(feature = "parallel")]
fn run_tasks<T: Send>(count: usize, workers: usize, task: impl Fn(usize) -> Option<T> + Sync + Send) -> Option<T> {
    use rayon::prelude::*;
    if workers == 1 {
        return (0..count).find_map(task);
    }
    with_pool(workers, || (0..count).into_par_iter().find_map_first(task))
}

#[cfg(not(feature = "parallel"))]
fn run_tasks<T>(count: usize, _workers: usize, task: impl Fn(usize) -> Option<T>) -> Option<T> {
    (0..count).find_map(task)
}

#[cfg(feature = "parallel")]
fn map_tasks<T: Send>(count: usize, workers: usize, task: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    if workers == 1 {
        return (0..count).map(task).collect();
    }
    with_pool(workers, || (0..count).into_par_iter().map(task).collect())
}

#[cfg(not(feature = "parallel"))]
fn map_tasks<T>(count: usize, _workers: usize, task: impl Fn(usize) -> T) -> Vec<T> {
    (0..count).map(task).collect()
}

/// Runs `f` on a pool of `workers` threads; 0 means the global pool.
#[cfg(feature = "parallel")]
fn with_pool<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
