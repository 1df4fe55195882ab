//! Finite unions of equal-depth cylinders and their exact set algebra.
//!
//! A [`CylinderUnion`] of depth `d` is the set of points whose first `d` symbols
//! form one of its words. Words are filtered for admissibility on construction,
//! so an empty word set is exactly the empty set.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::{Point, ShiftSpace, Symbol, Word, MAX_WORDS};
use crate::systems::CellularAutomaton;

/// Deepest union any materializing operation will produce.
pub const MAX_DEPTH: usize = 64;

#[derive(Clone, Debug)]
pub struct CylinderUnion {
    space: ShiftSpace,
    depth: usize,
    words: BTreeSet<Word>,
}

impl PartialEq for CylinderUnion {
    /// Syntactic equality; use [`CylinderUnion::same_set`] for set equality.
    fn eq(&self, other: &Self) -> bool {
        self.depth == other.depth && self.words == other.words && self.space == other.space
    }
}

impl CylinderUnion {
    pub fn new<I>(space: &ShiftSpace, depth: usize, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = Word>,
    {
        let mut set = BTreeSet::new();
        for w in words {
            if w.len() != depth {
                return Err(Error::InvalidArgument(format!(
                    "word of length {} in a depth-{depth} union",
                    w.len()
                )));
            }
            if space.admissible(&w)? {
                set.insert(w);
            }
        }
        Ok(CylinderUnion {
            space: space.clone(),
            depth,
            words: set,
        })
    }

    pub fn cylinder(space: &ShiftSpace, word: impl Into<Word>) -> Result<Self> {
        let w = word.into();
        Self::new(space, w.len(), [w])
    }

    /// The whole space, as the depth-0 union `{ε}`.
    pub fn full(space: &ShiftSpace) -> Self {
        let mut words = BTreeSet::new();
        if space.is_nonempty() {
            words.insert(Word::empty());
        }
        CylinderUnion {
            space: space.clone(),
            depth: 0,
            words,
        }
    }

    pub fn empty(space: &ShiftSpace, depth: usize) -> Self {
        CylinderUnion {
            space: space.clone(),
            depth,
            words: BTreeSet::new(),
        }
    }

    /// Words are already known admissible and of length `depth`.
    fn from_trusted(space: &ShiftSpace, depth: usize, words: BTreeSet<Word>) -> Self {
        CylinderUnion {
            space: space.clone(),
            depth,
            words,
        }
    }

    pub fn space(&self) -> &ShiftSpace {
        &self.space
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        self.words.contains(&x.prefix(self.depth))
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    fn check_budget(depth: usize) -> Result<()> {
        if depth > MAX_DEPTH {
            return Err(Error::budget("cylinder depth", MAX_DEPTH));
        }
        Ok(())
    }

    /// Same point set, every word extended through its admissible continuations.
    pub fn refine(&self, new_depth: usize) -> Result<Self> {
        if new_depth < self.depth {
            return Err(Error::InvalidArgument(format!(
                "cannot refine depth {} down to {new_depth}",
                self.depth
            )));
        }
        if new_depth == self.depth {
            return Ok(self.clone());
        }
        Self::check_budget(new_depth)?;
        let mut out = BTreeSet::new();
        for w in &self.words {
            let mut buf = w.to_vec();
            extend_all(&self.space, &mut buf, new_depth, &mut out)?;
        }
        Ok(Self::from_trusted(&self.space, new_depth, out))
    }

    /// Canonical form: the least uniform depth at which the set is a union of
    /// cylinders. Two unions are the same set iff their normal forms are equal.
    pub fn normalize(&self) -> Self {
        let mut depth = self.depth;
        let mut words = self.words.clone();
        while depth > 0 {
            let mut groups: BTreeMap<&[Symbol], usize> = BTreeMap::new();
            for w in &words {
                *groups.entry(&w[..depth - 1]).or_default() += 1;
            }
            let k = self.space.alphabet().size() as Symbol;
            let complete = groups.iter().all(|(prefix, &count)| {
                (0..k).filter(|&s| self.space.extends(prefix, s)).count() == count
            });
            if !complete {
                break;
            }
            let parents: BTreeSet<Word> = groups.keys().map(|p| Word::from(*p)).collect();
            words = parents;
            depth -= 1;
        }
        Self::from_trusted(&self.space, depth, words)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let d = self.depth.max(other.depth);
        let (a, b) = (self.refine(d)?, other.refine(d)?);
        let words = a.words.intersection(&b.words).cloned().collect();
        Ok(Self::from_trusted(&self.space, d, words))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let d = self.depth.max(other.depth);
        let (a, b) = (self.refine(d)?, other.refine(d)?);
        let words = a.words.union(&b.words).cloned().collect();
        Ok(Self::from_trusted(&self.space, d, words))
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.same_space(other)?;
        let d = self.depth.max(other.depth);
        Ok(self.refine(d)?.words.is_subset(&other.refine(d)?.words))
    }

    pub fn same_set(&self, other: &Self) -> Result<bool> {
        self.same_space(other)?;
        Ok(self.normalize() == other.normalize())
    }

    pub fn is_full(&self) -> bool {
        let n = self.normalize();
        n.depth == 0 && !n.words.is_empty()
    }

    /// `σ^{-p}(U)`: every admissible `a·w` with `|a| = p`, at depth `depth + p`.
    pub fn preimage_shift_power(&self, p: usize) -> Result<Self> {
        let depth = self.depth + p;
        Self::check_budget(depth)?;
        let prefixes = self.space.admissible_words(p)?;
        let mut out = BTreeSet::new();
        for a in &prefixes {
            for w in &self.words {
                let v = a.concat(w);
                if self.space.accepts(&v) {
                    if out.len() >= MAX_WORDS {
                        return Err(Error::budget("cylinder words", MAX_WORDS));
                    }
                    out.insert(v);
                }
            }
        }
        Ok(Self::from_trusted(&self.space, depth, out))
    }

    /// `σ^p(U)`. Exact on finite-type spaces: the union is first refined until
    /// every word keeps at least `order` symbols after the dropped prefix, so
    /// the follower constraint is carried by the retained suffix.
    pub fn image_shift_power(&self, p: usize) -> Result<Self> {
        let Some(m) = self.space.local_order() else {
            return Err(Error::InexactImage);
        };
        let refined = self.refine(self.depth.max(p + m))?;
        let depth = refined.depth - p;
        let words = refined.words.iter().map(|w| Word::from(&w[p..])).collect();
        Ok(Self::from_trusted(&self.space, depth, words))
    }

    /// `F^{-1}(U)` for a cellular automaton of anticipation `a`, at depth
    /// `depth + a`.
    pub fn preimage_ca(&self, ca: &CellularAutomaton) -> Result<Self> {
        if ca.alphabet() != self.space.alphabet() {
            return Err(Error::AlphabetMismatch(
                ca.alphabet().size(),
                self.space.alphabet().size(),
            ));
        }
        let a = ca.anticipation();
        let depth = self.depth + a;
        Self::check_budget(depth)?;
        let mut out = BTreeSet::new();
        for w in &self.words {
            let mut buf = Vec::with_capacity(depth);
            ca_preimages(&self.space, ca, w, &mut buf, depth, &mut out)?;
        }
        Ok(Self::from_trusted(&self.space, depth, out))
    }

    pub fn to_json(&self) -> CylinderUnionJson {
        let alphabet = self.space.alphabet();
        CylinderUnionJson {
            depth: self.depth,
            words: self.words.iter().map(|w| alphabet.format_word(w)).collect(),
        }
    }

    pub fn from_json(space: &ShiftSpace, j: &CylinderUnionJson) -> Result<Self> {
        let words = j
            .words
            .iter()
            .map(|s| space.alphabet().parse_word(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, j.depth, words)
    }
}

fn extend_all(
    space: &ShiftSpace,
    buf: &mut Vec<Symbol>,
    depth: usize,
    out: &mut BTreeSet<Word>,
) -> Result<()> {
    if buf.len() == depth {
        if out.len() >= MAX_WORDS {
            return Err(Error::budget("cylinder words", MAX_WORDS));
        }
        out.insert(Word::from(buf.as_slice()));
        return Ok(());
    }
    for s in 0..space.alphabet().size() as Symbol {
        if space.extends(buf, s) {
            buf.push(s);
            extend_all(space, buf, depth, out)?;
            buf.pop();
        }
    }
    Ok(())
}

fn ca_preimages(
    space: &ShiftSpace,
    ca: &CellularAutomaton,
    target: &[Symbol],
    buf: &mut Vec<Symbol>,
    depth: usize,
    out: &mut BTreeSet<Word>,
) -> Result<()> {
    if buf.len() == depth {
        if out.len() >= MAX_WORDS {
            return Err(Error::budget("cylinder words", MAX_WORDS));
        }
        out.insert(Word::from(buf.as_slice()));
        return Ok(());
    }
    let a = ca.anticipation();
    for s in 0..space.alphabet().size() as Symbol {
        if !space.extends(buf, s) {
            continue;
        }
        buf.push(s);
        let j = buf.len() - 1;
        let fits = j < a || ca.local(&buf[j - a..]) == target[j - a];
        if fits {
            ca_preimages(space, ca, target, buf, depth, out)?;
        }
        buf.pop();
    }
    Ok(())
}

/// `{depth, words: [strings]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CylinderUnionJson {
    pub depth: usize,
    pub words: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(bits: &str) -> Word {
        bits.bytes().map(|b| b - b'0').collect::<Vec<_>>().into()
    }

    fn union(space: &ShiftSpace, words: &[&str]) -> CylinderUnion {
        let depth = words.first().map_or(0, |w| w.len());
        CylinderUnion::new(space, depth, words.iter().map(|w| bin(w))).unwrap()
    }

    fn words(u: &CylinderUnion) -> Vec<String> {
        u.words().iter().map(|w| u.space().alphabet().format_word(w)).collect()
    }

    #[test]
    fn refine_examples() {
        let full = ShiftSpace::full(2).unwrap();
        assert_eq!(words(&union(&full, &["0"]).refine(2).unwrap()), ["00", "01"]);
        let gm = ShiftSpace::golden_mean();
        assert_eq!(words(&union(&gm, &["1"]).refine(2).unwrap()), ["10"]);
        let u = union(&gm, &["01", "10"]);
        assert_eq!(u.refine(2).unwrap(), u);
        assert!(u.refine(1).is_err());
    }

    #[test]
    fn intersect_examples() {
        let full = ShiftSpace::full(2).unwrap();
        assert!(union(&full, &["0"]).intersect(&union(&full, &["1"])).unwrap().is_empty());
        assert_eq!(
            words(&union(&full, &["0"]).intersect(&union(&full, &["01"])).unwrap()),
            ["01"]
        );
        let gm = ShiftSpace::golden_mean();
        assert_eq!(
            words(&union(&gm, &["01"]).intersect(&union(&gm, &["0"])).unwrap()),
            ["01"]
        );
        assert!(matches!(
            union(&full, &["0"]).intersect(&union(&gm, &["0"])),
            Err(Error::SpaceMismatch)
        ));
    }

    #[test]
    fn preimage_shift_examples() {
        let full = ShiftSpace::full(2).unwrap();
        assert_eq!(
            words(&union(&full, &["1"]).preimage_shift_power(1).unwrap()),
            ["01", "11"]
        );
        let gm = ShiftSpace::golden_mean();
        assert_eq!(words(&union(&gm, &["1"]).preimage_shift_power(1).unwrap()), ["01"]);
        let x = CylinderUnion::full(&gm).preimage_shift_power(2).unwrap();
        assert_eq!(words(&x), ["00", "01", "10"]);
        assert!(x.is_full());
    }

    #[test]
    fn image_shift_examples() {
        let full = ShiftSpace::full(2).unwrap();
        let u = union(&full, &["01"]);
        assert!(u.image_shift_power(1).unwrap().same_set(&union(&full, &["1"])).unwrap());
        assert!(u.image_shift_power(2).unwrap().is_full());
        let gm = ShiftSpace::golden_mean();
        let img = union(&gm, &["10"]).image_shift_power(1).unwrap();
        assert!(img.same_set(&union(&gm, &["0"])).unwrap());
        let gap = ShiftSpace::gap_excluded(vec![1, 2]).unwrap();
        assert!(matches!(
            union(&gap, &["1"]).image_shift_power(1),
            Err(Error::InexactImage)
        ));
    }

    #[test]
    fn preimage_ca_examples() {
        let full = ShiftSpace::full(2).unwrap();
        let xor = CellularAutomaton::xor();
        assert_eq!(words(&union(&full, &["0"]).preimage_ca(&xor).unwrap()), ["00", "11"]);
        assert_eq!(words(&union(&full, &["1"]).preimage_ca(&xor).unwrap()), ["01", "10"]);
        assert!(CylinderUnion::full(&full).preimage_ca(&xor).unwrap().is_full());
    }

    #[test]
    fn emptiness_examples() {
        let full = ShiftSpace::full(2).unwrap();
        assert!(CylinderUnion::empty(&full, 0).is_empty());
        assert!(!union(&full, &["0"]).is_empty());
        assert!(union(&ShiftSpace::golden_mean(), &["11"]).is_empty());
    }

    #[test]
    fn normalization_merges_complete_groups() {
        let full = ShiftSpace::full(2).unwrap();
        let u = union(&full, &["00", "01", "10"]);
        assert_eq!(u.normalize(), u);
        let v = union(&full, &["00", "01"]);
        assert_eq!(words(&v.normalize()), ["0"]);
        let gm = ShiftSpace::golden_mean();
        assert_eq!(words(&union(&gm, &["10"]).normalize()), ["1"]);
    }

    #[test]
    fn depth_budget_is_enforced() {
        let full = ShiftSpace::full(2).unwrap();
        assert!(matches!(
            union(&full, &["0"]).refine(MAX_DEPTH + 1),
            Err(Error::Budget { .. })
        ));
        assert!(matches!(
            union(&full, &["0"]).preimage_shift_power(30),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let full = ShiftSpace::full(2).unwrap();
        let u = union(&full, &["01", "10"]);
        let j = serde_json::to_string(&u.to_json()).unwrap();
        assert_eq!(j, r#"{"depth":2,"words":["01","10"]}"#);
        let back: CylinderUnionJson = serde_json::from_str(&j).unwrap();
        assert_eq!(CylinderUnion::from_json(&full, &back).unwrap(), u);
    }
}
