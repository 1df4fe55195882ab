//! Locally constant functions on a shift space and on its `H`-fold product,
//! with exact rational values.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::symbolic::{code, Point, ShiftSpace, Symbol, Word, MAX_WORDS};
use crate::systems::ProductPoint;

fn table_size(k: usize, depth: usize) -> Result<usize> {
    k.checked_pow(depth as u32)
        .filter(|&n| n <= MAX_WORDS)
        .ok_or_else(|| Error::budget("function table", MAX_WORDS))
}

/// `f(x) = table[x_0 … x_{m−1}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocallyConstantFn {
    space: ShiftSpace,
    depth: usize,
    table: Vec<Option<Q>>,
}

impl LocallyConstantFn {
    /// Every admissible word of length `depth` must get a value; inadmissible
    /// words must not.
    pub fn new<I>(space: &ShiftSpace, depth: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Q)>,
    {
        if depth == 0 {
            return Err(Error::InvalidArgument("function depth must be positive".into()));
        }
        let k = space.alphabet().size();
        let mut table = vec![None; table_size(k, depth)?];
        for (w, q) in entries {
            if w.len() != depth {
                return Err(Error::InvalidArgument(format!(
                    "entry {} has length {} in a depth-{depth} table",
                    space.alphabet().format_word(&w),
                    w.len()
                )));
            }
            if !space.admissible(&w)? {
                return Err(Error::InvalidArgument(format!(
                    "entry {} is not an admissible word",
                    space.alphabet().format_word(&w)
                )));
            }
            table[code(k, &w)] = Some(q);
        }
        for w in space.admissible_words(depth)? {
            if table[code(k, &w)].is_none() {
                return Err(Error::InvalidArgument(format!(
                    "missing entry for {}",
                    space.alphabet().format_word(&w)
                )));
            }
        }
        Ok(LocallyConstantFn {
            space: space.clone(),
            depth,
            table,
        })
    }

    pub fn from_fn(space: &ShiftSpace, depth: usize, mut f: impl FnMut(&[Symbol]) -> Q) -> Result<Self> {
        let words = space.admissible_words(depth)?;
        let entries: Vec<(Word, Q)> = words.into_iter().map(|w| {
            let q = f(&w);
            (w, q)
        }).collect();
        Self::new(space, depth, entries)
    }

    pub fn zero(space: &ShiftSpace, depth: usize) -> Result<Self> {
        Self::from_fn(space, depth, |_| Q::zero())
    }

    /// `x ↦ x_0`.
    pub fn first_symbol(space: &ShiftSpace) -> Result<Self> {
        Self::from_fn(space, 1, |w| rational::int(w[0] as i64))
    }

    pub fn space(&self) -> &ShiftSpace {
        &self.space
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Value on any word at least `depth` long; only the prefix matters.
    pub fn value(&self, w: &[Symbol]) -> &Q {
        let k = self.space.alphabet().size();
        self.table[code(k, &w[..self.depth])]
            .as_ref()
            .expect("value requested on an inadmissible word")
    }

    pub fn try_value(&self, w: &[Symbol]) -> Option<&Q> {
        if w.len() < self.depth {
            return None;
        }
        let k = self.space.alphabet().size();
        self.table.get(code(k, &w[..self.depth]))?.as_ref()
    }

    pub fn eval(&self, x: &Point) -> Q {
        self.value(&x.prefix(self.depth)).clone()
    }

    /// `f(σ^offset x)`.
    pub fn eval_at(&self, x: &Point, offset: usize) -> Q {
        self.value(&x.window(offset, self.depth)).clone()
    }

    /// Admissible words and their values, in word order.
    pub fn entries(&self) -> Vec<(Word, &Q)> {
        let k = self.space.alphabet().size();
        self.space
            .admissible_words(self.depth)
            .expect("table size already within budget")
            .into_iter()
            .map(|w| {
                let q = self.table[code(k, &w)].as_ref().unwrap();
                (w, q)
            })
            .collect()
    }

    fn values(&self) -> impl Iterator<Item = &Q> {
        self.table.iter().flatten()
    }

    pub fn max(&self) -> Q {
        self.values().max().cloned().unwrap_or_else(Q::zero)
    }

    pub fn min(&self) -> Q {
        self.values().min().cloned().unwrap_or_else(Q::zero)
    }

    pub fn oscillation(&self) -> Q {
        self.max() - self.min()
    }

    pub fn sup_abs(&self) -> Q {
        self.values().map(|q| q.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values().all(Zero::is_zero)
    }

    /// `g − g∘σ^p`, of depth `g.depth + p`.
    pub fn coboundary(g: &LocallyConstantFn, p: usize) -> Result<Self> {
        let depth = g.depth + p;
        Self::from_fn(&g.space, depth, |w| g.value(w) - g.value(&w[p..]))
    }

    /// The same function read through a deeper table.
    pub fn deepen(&self, depth: usize) -> Result<Self> {
        if depth < self.depth {
            return Err(Error::InvalidArgument("cannot make a table shallower".into()));
        }
        Self::from_fn(&self.space, depth, |w| self.value(w).clone())
    }

    /// Replaces one entry.
    pub fn with_entry(&self, w: &[Symbol], q: Q) -> Result<Self> {
        let k = self.space.alphabet().size();
        if w.len() != self.depth || self.table.get(code(k, w)).and_then(Option::as_ref).is_none() {
            return Err(Error::InvalidArgument("no such entry".into()));
        }
        let mut out = self.clone();
        out.table[code(k, w)] = Some(q);
        Ok(out)
    }

    pub fn to_json(&self) -> FunctionJson {
        let alphabet = self.space.alphabet();
        FunctionJson {
            depth: self.depth,
            entries: self
                .entries()
                .into_iter()
                .map(|(w, q)| (alphabet.format_word(&w), rational::format(q)))
                .collect(),
        }
    }

    pub fn from_json(space: &ShiftSpace, j: &FunctionJson) -> Result<Self> {
        let entries = j
            .entries
            .iter()
            .map(|(w, q)| Ok((space.alphabet().parse_word(w)?, rational::parse(q)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, j.depth, entries)
    }
}

/// `{depth, entries: {word: "num/den"}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FunctionJson {
    pub depth: usize,
    pub entries: BTreeMap<String, String>,
}

/// `F(x_1, …, x_H) = table[x_1[0..m_1], …, x_H[0..m_H]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductFn {
    space: ShiftSpace,
    depths: Vec<usize>,
    strides: Vec<usize>,
    table: Vec<Option<Q>>,
}

impl ProductFn {
    pub fn from_fn(
        space: &ShiftSpace,
        depths: &[usize],
        mut f: impl FnMut(&[&[Symbol]]) -> Q,
    ) -> Result<Self> {
        if depths.is_empty() {
            return Err(Error::InvalidArgument("a product function needs at least one coordinate".into()));
        }
        let k = space.alphabet().size();
        let mut strides = vec![0; depths.len()];
        let mut size = 1usize;
        for (i, &m) in depths.iter().enumerate().rev() {
            strides[i] = size;
            size = size
                .checked_mul(table_size(k, m)?)
                .filter(|&n| n <= MAX_WORDS)
                .ok_or_else(|| Error::budget("function table", MAX_WORDS))?;
        }
        let per_coord: Vec<Vec<Word>> = depths
            .iter()
            .map(|&m| space.admissible_words(m))
            .collect::<Result<_>>()?;
        let mut table = vec![None; size];
        let mut idx = vec![0usize; depths.len()];
        if per_coord.iter().any(Vec::is_empty) {
            return Err(Error::InvalidArgument("empty space".into()));
        }
        loop {
            let words: Vec<&[Symbol]> = idx.iter().zip(&per_coord).map(|(&i, ws)| ws[i].as_slice()).collect();
            let slot: usize = words.iter().zip(&strides).map(|(w, s)| code(k, w) * s).sum();
            table[slot] = Some(f(&words));
            // Odometer over the coordinate word lists.
            let mut c = depths.len();
            loop {
                if c == 0 {
                    return Ok(ProductFn {
                        space: space.clone(),
                        depths: depths.to_vec(),
                        strides,
                        table,
                    });
                }
                c -= 1;
                idx[c] += 1;
                if idx[c] < per_coord[c].len() {
                    break;
                }
                idx[c] = 0;
            }
        }
    }

    /// `⊗ f_i`.
    pub fn tensor(fs: &[LocallyConstantFn]) -> Result<Self> {
        let first = fs.first().ok_or_else(|| Error::InvalidArgument("no factors".into()))?;
        if fs.iter().any(|f| f.space != first.space) {
            return Err(Error::SpaceMismatch);
        }
        let depths: Vec<usize> = fs.iter().map(|f| f.depth).collect();
        Self::from_fn(&first.space, &depths, |ws| {
            fs.iter().zip(ws).map(|(f, w)| f.value(w).clone()).product()
        })
    }

    pub fn from_single(f: &LocallyConstantFn) -> Result<Self> {
        Self::tensor(std::slice::from_ref(f))
    }

    /// `V − V∘𝒯` for `𝒯 = σ^{p_1} × … × σ^{p_H}`.
    pub fn coboundary_of(v: &ProductFn, powers: &[usize]) -> Result<Self> {
        if powers.len() != v.arity() {
            return Err(Error::InvalidArgument("one power per coordinate".into()));
        }
        let depths: Vec<usize> = v.depths.iter().zip(powers).map(|(m, p)| m + p).collect();
        Self::from_fn(&v.space, &depths, |ws| {
            let shifted: Vec<&[Symbol]> = ws.iter().zip(powers).map(|(w, &p)| &w[p..]).collect();
            v.value(ws) - v.value(&shifted)
        })
    }

    pub fn space(&self) -> &ShiftSpace {
        &self.space
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    pub fn arity(&self) -> usize {
        self.depths.len()
    }

    /// Value on coordinate words at least as long as the depths.
    pub fn value(&self, words: &[&[Symbol]]) -> &Q {
        let k = self.space.alphabet().size();
        let slot: usize = words
            .iter()
            .zip(&self.depths)
            .zip(&self.strides)
            .map(|((w, &m), s)| code(k, &w[..m]) * s)
            .sum();
        self.table[slot].as_ref().expect("value requested on an inadmissible word")
    }

    pub fn eval(&self, x: &ProductPoint) -> Q {
        let offsets = vec![0; self.arity()];
        self.eval_at(&x.coords, &offsets)
    }

    /// `F(σ^{o_1} x_1, …, σ^{o_H} x_H)`.
    pub fn eval_at(&self, coords: &[Point], offsets: &[usize]) -> Q {
        let words: Vec<Word> = coords
            .iter()
            .zip(offsets)
            .zip(&self.depths)
            .map(|((x, &o), &m)| x.window(o, m))
            .collect();
        let refs: Vec<&[Symbol]> = words.iter().map(|w| w.as_slice()).collect();
        self.value(&refs).clone()
    }

    pub fn sup_abs(&self) -> Q {
        self.table.iter().flatten().map(|q| q.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().flatten().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn construction_checks_totality() {
        let full = ShiftSpace::full(2).unwrap();
        let partial = LocallyConstantFn::new(&full, 1, [(Word::from([0]), int(1))]);
        assert!(partial.is_err());
        let gm = ShiftSpace::golden_mean();
        let bad = LocallyConstantFn::new(&gm, 2, [(Word::from([1, 1]), int(1))]);
        assert!(bad.is_err());
        let f = LocallyConstantFn::from_fn(&gm, 2, |w| int(w[0] as i64 + w[1] as i64)).unwrap();
        assert_eq!(f.entries().len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let full = ShiftSpace::full(2).unwrap();
        let f = LocallyConstantFn::from_fn(&full, 2, |w| ratio(w[0] as i64 + 1, 2 + w[1] as i64)).unwrap();
        let j = f.to_json();
        assert_eq!(j.entries["01"], "1/3");
        assert_eq!(j.entries["10"], "1/1");
        assert_eq!(LocallyConstantFn::from_json(&full, &j).unwrap(), f);
    }

    #[test]
    fn coboundary_telescopes() {
        let full = ShiftSpace::full(2).unwrap();
        let g = LocallyConstantFn::first_symbol(&full).unwrap();
        let f = LocallyConstantFn::coboundary(&g, 1).unwrap();
        assert_eq!(f.value(&[1, 0]), &int(1));
        assert_eq!(f.value(&[0, 1]), &int(-1));
        assert_eq!(f.value(&[1, 1]), &int(0));
    }

    #[test]
    fn tensor_of_indicators() {
        let full = ShiftSpace::full(2).unwrap();
        let f = LocallyConstantFn::first_symbol(&full).unwrap();
        let t = ProductFn::tensor(&[f.clone(), f]).unwrap();
        assert_eq!(t.value(&[&[0], &[0]]), &int(0));
        assert_eq!(t.value(&[&[0], &[1]]), &int(0));
        assert_eq!(t.value(&[&[1], &[0]]), &int(0));
        assert_eq!(t.value(&[&[1], &[1]]), &int(1));
    }
}
