//! Positional constraint solving: find the lexicographically smallest admissible
//! word whose factors at given offsets fall in given cylinder unions.
//!
//! This is how `U_0 ∩ T_1^{-n} U_1 ∩ …` is decided for shift powers without
//! materializing the preimages: `σ^{-k}[w]` is just "`w` at offset `k`".

use std::collections::HashSet;

use crate::cylinder::CylinderUnion;
use crate::error::{Error, Result};
use crate::symbolic::{ShiftSpace, Symbol, Word};
use crate::systems::MapSpec;

/// Longest word the solver will build by default.
pub const DEFAULT_MAX_LEN: usize = 4096;

const NODE_BUDGET: usize = 50_000_000;

/// The set `σ^{-offset}(union)`.
#[derive(Clone, Debug)]
pub struct Window {
    pub offset: usize,
    pub union: CylinderUnion,
}

impl Window {
    pub fn new(offset: usize, union: CylinderUnion) -> Self {
        Window { offset, union }
    }

    pub fn end(&self) -> usize {
        self.offset + self.union.depth()
    }
}

/// `T^{-1}` of a window. Shift powers move the offset; cellular automata
/// materialize the preimage union in place.
pub fn pull_back(map: &MapSpec, w: &Window) -> Result<Window> {
    match map {
        MapSpec::ShiftPower(p) => Ok(Window::new(w.offset + p, w.union.clone())),
        MapSpec::Ca(ca) => Ok(Window::new(w.offset, w.union.preimage_ca(ca)?)),
        MapSpec::Composed(parts) => {
            let mut cur = w.clone();
            for part in parts {
                cur = pull_back(part, &cur)?;
            }
            Ok(cur)
        }
    }
}

/// Smallest admissible word of length `max(end)` meeting every window, or
/// `None` if the intersection is empty.
pub fn solve(space: &ShiftSpace, windows: &[Window], max_len: usize) -> Result<Option<Word>> {
    for w in windows {
        if w.union.space() != space {
            return Err(Error::SpaceMismatch);
        }
        if w.union.is_empty() {
            return Ok(None);
        }
    }
    let len = windows.iter().map(Window::end).max().unwrap_or(0);
    if len > max_len {
        return Err(Error::budget("window length", max_len));
    }
    let active: Vec<ActiveWindow> = windows
        .iter()
        .filter(|w| w.union.depth() > 0)
        .map(|w| ActiveWindow {
            offset: w.offset,
            depth: w.union.depth(),
            words: w.union.words().iter().cloned().collect(),
        })
        .collect();
    let mut starts: Vec<Vec<usize>> = vec![Vec::new(); len];
    let mut covered = vec![false; len];
    for (i, w) in active.iter().enumerate() {
        starts[w.offset].push(i);
        for c in &mut covered[w.offset..w.offset + w.depth] {
            *c = true;
        }
    }
    let mut solver = Solver {
        space,
        windows: &active,
        starts,
        covered,
        len,
        memo: space.local_order().map(|m| (m, HashSet::new())),
        nodes: 0,
        ranges: vec![(0, 0); active.len()],
        buf: Vec::with_capacity(len),
    };
    if solver.search()? {
        Ok(Some(Word::from(solver.buf)))
    } else {
        Ok(None)
    }
}

struct ActiveWindow {
    offset: usize,
    depth: usize,
    words: Vec<Word>,
}

type MemoKey = (usize, Vec<Symbol>, Vec<(u32, u32)>);

struct Solver<'a> {
    space: &'a ShiftSpace,
    windows: &'a [ActiveWindow],
    starts: Vec<Vec<usize>>,
    covered: Vec<bool>,
    len: usize,
    memo: Option<(usize, HashSet<MemoKey>)>,
    nodes: usize,
    ranges: Vec<(usize, usize)>,
    buf: Vec<Symbol>,
}

impl Solver<'_> {
    fn memo_key(&self, order: usize) -> MemoKey {
        let pos = self.buf.len();
        let tail = self.buf[pos.saturating_sub(order)..].to_vec();
        let ranges = self
            .windows
            .iter()
            .zip(&self.ranges)
            .filter(|(w, _)| w.offset < pos && pos < w.offset + w.depth)
            .map(|(_, &(lo, hi))| (lo as u32, hi as u32))
            .collect();
        (pos, tail, ranges)
    }

    fn search(&mut self) -> Result<bool> {
        let pos = self.buf.len();
        if pos == self.len {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(Error::budget("solver nodes", NODE_BUDGET));
        }
        let key = match &self.memo {
            Some((order, seen)) => {
                let key = self.memo_key(*order);
                if seen.contains(&key) {
                    return Ok(false);
                }
                Some(key)
            }
            None => None,
        };
        for &i in &self.starts[pos] {
            self.ranges[i] = (0, self.windows[i].words.len());
        }
        let k = self.space.alphabet().size() as Symbol;
        let top = if self.covered[pos] || !self.space.is_hereditary() { k } else { 1 };
        for s in 0..top {
            if !self.space.extends(&self.buf, s) {
                continue;
            }
            let saved = self.ranges.clone();
            if !self.narrow(pos, s) {
                self.ranges = saved;
                continue;
            }
            self.buf.push(s);
            if self.search()? {
                return Ok(true);
            }
            self.buf.pop();
            self.ranges = saved;
        }
        if let (Some(key), Some((_, seen))) = (key, &mut self.memo) {
            seen.insert(key);
        }
        Ok(false)
    }

    /// Restrict every window covering `pos` to words with `s` there.
    fn narrow(&mut self, pos: usize, s: Symbol) -> bool {
        for (i, w) in self.windows.iter().enumerate() {
            if pos < w.offset || pos >= w.offset + w.depth {
                continue;
            }
            let j = pos - w.offset;
            let (lo, hi) = self.ranges[i];
            let slice = &w.words[lo..hi];
            let a = lo + slice.partition_point(|v| v[j] < s);
            let b = lo + slice.partition_point(|v| v[j] <= s);
            if a == b {
                return false;
            }
            self.ranges[i] = (a, b);
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::CellularAutomaton;

    fn cyl(space: &ShiftSpace, bits: &[u8]) -> CylinderUnion {
        CylinderUnion::cylinder(space, bits.to_vec()).unwrap()
    }

    #[test]
    fn overlapping_windows() {
        let full = ShiftSpace::full(2).unwrap();
        let ws = [
            Window::new(0, cyl(&full, &[1])),
            Window::new(1, cyl(&full, &[1])),
            Window::new(2, cyl(&full, &[1])),
        ];
        assert_eq!(solve(&full, &ws, 100).unwrap().unwrap().as_slice(), &[1, 1, 1]);
        let clash = [Window::new(0, cyl(&full, &[0, 1])), Window::new(1, cyl(&full, &[0]))];
        assert!(solve(&full, &clash, 100).unwrap().is_none());
    }

    #[test]
    fn gaps_are_filled_smallest_first() {
        let gm = ShiftSpace::golden_mean();
        let ws = [Window::new(0, cyl(&gm, &[1])), Window::new(3, cyl(&gm, &[1]))];
        assert_eq!(solve(&gm, &ws, 100).unwrap().unwrap().as_slice(), &[1, 0, 0, 1]);
        let adjacent = [Window::new(0, cyl(&gm, &[1])), Window::new(1, cyl(&gm, &[1]))];
        assert!(solve(&gm, &adjacent, 100).unwrap().is_none());
    }

    #[test]
    fn dead_ends_are_rejected() {
        // 1 must be followed by 1, and 11 is forbidden: any 1 is a dead end.
        let space = ShiftSpace::sft(2, 1, vec![vec![1, 0].into(), vec![1, 1].into()]).unwrap();
        let ws = [Window::new(2, cyl(&space, &[0]))];
        assert_eq!(solve(&space, &ws, 10).unwrap().unwrap().as_slice(), &[0, 0, 0]);
    }

    #[test]
    fn pull_back_composes_in_list_order() {
        let full = ShiftSpace::full(2).unwrap();
        let w = Window::new(0, cyl(&full, &[1]));
        let map = MapSpec::Composed(vec![MapSpec::shift(1), MapSpec::Ca(CellularAutomaton::xor())]);
        let back = pull_back(&map, &w).unwrap();
        assert_eq!(back.offset, 1);
        assert_eq!(back.union.depth(), 2);
        assert_eq!(pull_back(&MapSpec::shift(3), &w).unwrap().offset, 3);
    }

    #[test]
    fn length_budget() {
        let full = ShiftSpace::full(2).unwrap();
        let ws = [Window::new(50, cyl(&full, &[1]))];
        assert!(matches!(solve(&full, &ws, 10), Err(Error::Budget { .. })));
    }
}
