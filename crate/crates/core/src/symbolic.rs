//! Alphabets, finite words, eventually periodic points and one-sided shift spaces.
//!
//! Symbols are `0..size`. Points are sequences `preperiod · period^∞`, kept in a
//! canonical form so that structural equality is sequence equality. The metric is
//! `d(x, y) = 2^-k` with `k` the first index where `x` and `y` disagree.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = u8;

/// Largest table (`alphabet^(order+1)`) a finite-type presentation may use.
const MAX_BLOCK_TABLE: usize = 1 << 24;

/// Upper bound on the number of words any enumeration here may produce.
pub const MAX_WORDS: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > 256 {
            return Err(Error::InvalidArgument(format!(
                "alphabet size must be in 1..=256, got {size}"
            )));
        }
        Ok(Alphabet { size })
    }

    pub fn binary() -> Self {
        Alphabet { size: 2 }
    }

    pub fn size(self) -> usize {
        self.size
    }

    pub fn check(self, symbols: &[Symbol]) -> Result<()> {
        match symbols.iter().find(|&&s| s as usize >= self.size) {
            Some(&s) => Err(Error::SymbolOutOfRange {
                symbol: s as u32,
                size: self.size,
            }),
            None => Ok(()),
        }
    }

    /// Decimal digits with no separator for alphabets of size at most ten,
    /// comma separated otherwise.
    pub fn format_word(self, symbols: &[Symbol]) -> String {
        if self.size <= 10 {
            symbols.iter().map(|s| char::from(b'0' + s)).collect()
        } else {
            symbols
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    pub fn parse_word(self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let symbols: Vec<Symbol> = if self.size <= 10 {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as Symbol)
                        .ok_or_else(|| Error::Parse(format!("bad symbol {c:?} in {text:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<Symbol>()
                        .map_err(|_| Error::Parse(format!("bad symbol {t:?} in {text:?}")))
                })
                .collect::<Result<_>>()?
        };
        self.check(&symbols)?;
        Ok(Word(symbols))
    }
}

/// A finite word over some alphabet. The empty word is allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }

    pub fn concat(&self, other: &[Symbol]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }
}

impl Deref for Word {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl<const N: usize> From<[Symbol; N]> for Word {
    fn from(v: [Symbol; N]) -> Self {
        Word(v.to_vec())
    }
}

/// Encodes a word as a base-`k` integer, most significant symbol first.
pub(crate) fn code(k: usize, w: &[Symbol]) -> usize {
    w.iter().fold(0, |acc, &s| acc * k + s as usize)
}

/// The eventually periodic sequence `preperiod · period^∞`.
///
/// Always stored in normal form: the period is primitive and the preperiod
/// cannot be shortened by rotating the period.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    alphabet: Alphabet,
    preperiod: Vec<Symbol>,
    period: Vec<Symbol>,
}

impl Point {
    pub fn new(alphabet: Alphabet, preperiod: Vec<Symbol>, period: Vec<Symbol>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument("point period must be nonempty".into()));
        }
        alphabet.check(&preperiod)?;
        alphabet.check(&period)?;
        let mut p = Point {
            alphabet,
            preperiod,
            period,
        };
        p.normalize();
        Ok(p)
    }

    pub fn periodic(alphabet: Alphabet, period: Vec<Symbol>) -> Result<Self> {
        Point::new(alphabet, Vec::new(), period)
    }

    pub fn constant(alphabet: Alphabet, symbol: Symbol) -> Result<Self> {
        Point::new(alphabet, Vec::new(), vec![symbol])
    }

    fn normalize(&mut self) {
        let n = self.period.len();
        let root = (1..=n)
            .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| self.period[i] == self.period[i - d]))
            .unwrap_or(n);
        self.period.truncate(root);
        while let Some(&last) = self.preperiod.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn preperiod(&self) -> &[Symbol] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Symbol] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    #[inline]
    pub fn symbol_at(&self, i: usize) -> Symbol {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.symbol_at(i)).collect())
    }

    /// Symbols `start..start+len`, i.e. the prefix of `σ^start x`.
    pub fn window(&self, start: usize, len: usize) -> Word {
        Word((start..start + len).map(|i| self.symbol_at(i)).collect())
    }

    /// `σ^k x`.
    pub fn shift(&self, k: usize) -> Point {
        let (pre, per) = if k <= self.preperiod.len() {
            (self.preperiod[k..].to_vec(), self.period.clone())
        } else {
            let mut per = self.period.clone();
            let r = (k - self.preperiod.len()) % per.len();
            per.rotate_left(r);
            (Vec::new(), per)
        };
        let mut p = Point {
            alphabet: self.alphabet,
            preperiod: pre,
            period: per,
        };
        p.normalize();
        p
    }

    /// A finite horizon after which `self` and `other` cannot first disagree.
    fn comparison_horizon(&self, a: usize, other: &Point, b: usize) -> usize {
        let pre = self
            .preperiod
            .len()
            .saturating_sub(a)
            .max(other.preperiod.len().saturating_sub(b));
        pre + self.period.len().lcm(&other.period.len())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({})^inf",
            self.alphabet.format_word(&self.preperiod),
            self.alphabet.format_word(&self.period)
        )
    }
}

/// Index of the first disagreement between `σ^a x` and `σ^b y`, or `None` when
/// the two sequences are equal.
pub fn first_disagreement_shifted(x: &Point, a: usize, y: &Point, b: usize) -> Option<usize> {
    let horizon = x.comparison_horizon(a, y, b);
    (0..horizon).find(|&i| x.symbol_at(a + i) != y.symbol_at(b + i))
}

pub fn first_disagreement(x: &Point, y: &Point) -> Option<usize> {
    first_disagreement_shifted(x, 0, y, 0)
}

/// `2^-k` for a first disagreement at `k`, zero for equal sequences.
pub fn distance_from_index(k: Option<usize>) -> f64 {
    match k {
        None => 0.0,
        Some(k) => (-(k as f64)).exp2(),
    }
}

pub fn metric_distance(x: &Point, y: &Point) -> Result<f64> {
    if x.alphabet != y.alphabet {
        return Err(Error::AlphabetMismatch(x.alphabet.size, y.alphabet.size));
    }
    Ok(distance_from_index(first_disagreement(x, y)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SpaceKind {
    Full,
    Sft,
    /// Binary sequences with no `11` and no ones at positions
    /// `i, i + n·p_1, …, i + n·p_t` for any `i` and `n ≥ 1`.
    GapExcluded { powers: Vec<usize> },
}

/// Transition structure of a finite-type space on `order`-blocks, after
/// removing blocks with no infinite forward continuation.
#[derive(Clone, Debug)]
struct BlockGraph {
    k: usize,
    m: usize,
    live: Vec<bool>,
    edges: Vec<bool>,
    /// `prefix_ok[l][code]`: the length-`l` word is a prefix of a live block.
    prefix_ok: Vec<Vec<bool>>,
}

impl BlockGraph {
    fn build(alphabet: Alphabet, m: usize, forbidden: &[Word]) -> Result<Self> {
        let k = alphabet.size();
        let table = k
            .checked_pow(m as u32 + 1)
            .filter(|&t| t <= MAX_BLOCK_TABLE)
            .ok_or_else(|| Error::budget("block table alphabet^(order+1)", MAX_BLOCK_TABLE))?;
        let blocks = table / k;
        let clean = |w: &[Symbol]| {
            !forbidden
                .iter()
                .any(|f| f.len() <= w.len() && w.windows(f.len()).any(|win| win == f.as_slice()))
        };
        let decode = |mut c: usize, len: usize| {
            let mut w = vec![0; len];
            for i in (0..len).rev() {
                w[i] = (c % k) as Symbol;
                c /= k;
            }
            w
        };
        let mut edges: Vec<bool> = (0..table).map(|c| clean(&decode(c, m + 1))).collect();
        let mut live: Vec<bool> = (0..blocks).map(|c| clean(&decode(c, m))).collect();
        loop {
            let mut changed = false;
            for u in 0..blocks {
                if !live[u] {
                    continue;
                }
                let has_next = (0..k).any(|s| {
                    let e = u * k + s;
                    edges[e] && live[e % blocks]
                });
                if !has_next {
                    live[u] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for (e, allowed) in edges.iter_mut().enumerate() {
            *allowed = *allowed && live[e / k] && live[e % blocks];
        }
        let mut prefix_ok: Vec<Vec<bool>> = (0..=m).map(|l| vec![false; k.pow(l as u32)]).collect();
        for u in (0..blocks).filter(|&u| live[u]) {
            let w = decode(u, m);
            for l in 0..=m {
                prefix_ok[l][code(k, &w[..l])] = true;
            }
        }
        Ok(BlockGraph {
            k,
            m,
            live,
            edges,
            prefix_ok,
        })
    }

    fn blocks(&self) -> usize {
        self.live.len()
    }

    fn accepts(&self, w: &[Symbol]) -> bool {
        if w.len() <= self.m {
            return self.prefix_ok[w.len()][code(self.k, w)];
        }
        w.windows(self.m + 1).all(|f| self.edges[code(self.k, f)])
    }

    fn extends(&self, prefix: &[Symbol], s: Symbol) -> bool {
        let n = prefix.len() + 1;
        if n <= self.m {
            self.prefix_ok[n][code(self.k, prefix) * self.k + s as usize]
        } else {
            let tail = &prefix[prefix.len() - self.m..];
            self.edges[code(self.k, tail) * self.k + s as usize]
        }
    }

    fn live_blocks(&self) -> Vec<usize> {
        (0..self.blocks()).filter(|&u| self.live[u]).collect()
    }

    fn successors(&self, u: usize) -> impl Iterator<Item = (Symbol, usize)> + '_ {
        let blocks = self.blocks();
        (0..self.k).filter_map(move |s| {
            let e = u * self.k + s;
            self.edges[e].then_some((s as Symbol, e % blocks))
        })
    }
}

/// A one-sided shift space: the full shift, a subshift of finite type given by
/// forbidden words, or a gap-excluded binary shift.
#[derive(Clone, Debug)]
pub struct ShiftSpace {
    alphabet: Alphabet,
    order: usize,
    forbidden: Vec<Word>,
    kind: SpaceKind,
    graph: Option<Arc<BlockGraph>>,
}

impl PartialEq for ShiftSpace {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.order == other.order
            && self.forbidden == other.forbidden
            && self.kind == other.kind
    }
}

impl Eq for ShiftSpace {}

impl ShiftSpace {
    pub fn full(alphabet_size: usize) -> Result<Self> {
        Self::sft(alphabet_size, 1, Vec::new())
    }

    /// Order-`order` subshift of finite type: a word is admissible iff it avoids
    /// every forbidden word and extends to an infinite sequence. Forbidden words
    /// have length at most `order + 1`.
    pub fn sft(alphabet_size: usize, order: usize, forbidden: Vec<Word>) -> Result<Self> {
        let alphabet = Alphabet::new(alphabet_size)?;
        if order == 0 {
            return Err(Error::InvalidSpace("order must be at least 1".into()));
        }
        let mut forbidden = forbidden;
        for f in &forbidden {
            alphabet.check(f)?;
            if f.is_empty() || f.len() > order + 1 {
                return Err(Error::InvalidSpace(format!(
                    "forbidden word {:?} must have length 1..={}",
                    alphabet.format_word(f),
                    order + 1
                )));
            }
        }
        forbidden.sort();
        forbidden.dedup();
        let kind = if forbidden.is_empty() {
            SpaceKind::Full
        } else {
            SpaceKind::Sft
        };
        let graph = BlockGraph::build(alphabet, order, &forbidden)?;
        Ok(ShiftSpace {
            alphabet,
            order,
            forbidden,
            kind,
            graph: Some(Arc::new(graph)),
        })
    }

    /// Order-1 SFT from a 0/1 transition matrix on symbols.
    pub fn from_matrix(matrix: &[Vec<u8>]) -> Result<Self> {
        let k = matrix.len();
        let mut forbidden = Vec::new();
        for (a, row) in matrix.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidSpace("transition matrix must be square".into()));
            }
            for (b, &v) in row.iter().enumerate() {
                if v == 0 {
                    forbidden.push(Word(vec![a as Symbol, b as Symbol]));
                }
            }
        }
        Self::sft(k, 1, forbidden)
    }

    /// Binary shift forbidding `11`.
    pub fn golden_mean() -> Self {
        Self::sft(2, 1, vec![Word(vec![1, 1])]).expect("valid golden-mean presentation")
    }

    /// Binary sequences with no `11` and no ones at `i, i+n·p_1, …, i+n·p_t`.
    pub fn gap_excluded(powers: Vec<usize>) -> Result<Self> {
        if powers.len() < 2 {
            return Err(Error::InvalidArgument("need at least two powers".into()));
        }
        if powers[0] == 0 || powers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "powers must be positive and strictly increasing".into(),
            ));
        }
        Ok(ShiftSpace {
            alphabet: Alphabet::binary(),
            order: 1,
            forbidden: vec![Word(vec![1, 1])],
            kind: SpaceKind::GapExcluded { powers },
            graph: None,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn forbidden_words(&self) -> &[Word] {
        &self.forbidden
    }

    pub fn is_finite_type(&self) -> bool {
        self.graph.is_some()
    }

    /// Order of the local rule, when membership is decided by bounded windows.
    pub(crate) fn local_order(&self) -> Option<usize> {
        match self.kind {
            SpaceKind::Full => Some(0),
            SpaceKind::Sft => Some(self.order),
            SpaceKind::GapExcluded { .. } => None,
        }
    }

    /// Replacing any symbol by `0` keeps words admissible.
    pub(crate) fn is_hereditary(&self) -> bool {
        matches!(self.kind, SpaceKind::GapExcluded { .. })
    }

    pub fn admissible(&self, w: &[Symbol]) -> Result<bool> {
        self.alphabet.check(w)?;
        Ok(self.accepts(w))
    }

    /// Language membership for a word already known to be in range.
    pub(crate) fn accepts(&self, w: &[Symbol]) -> bool {
        match (&self.kind, &self.graph) {
            (SpaceKind::GapExcluded { powers }, _) => gap_word_ok(powers, w),
            (_, Some(g)) => g.accepts(w),
            _ => unreachable!("finite-type space without graph"),
        }
    }

    /// Whether `prefix · s` is admissible, given that `prefix` is.
    pub(crate) fn extends(&self, prefix: &[Symbol], s: Symbol) -> bool {
        match (&self.kind, &self.graph) {
            (SpaceKind::GapExcluded { powers }, _) => gap_extends(powers, prefix, s),
            (_, Some(g)) => g.extends(prefix, s),
            _ => unreachable!("finite-type space without graph"),
        }
    }

    pub fn is_nonempty(&self) -> bool {
        self.accepts(&[])
    }

    pub fn contains_point(&self, x: &Point) -> Result<bool> {
        if x.alphabet != self.alphabet {
            return Err(Error::AlphabetMismatch(x.alphabet.size, self.alphabet.size));
        }
        Ok(match &self.kind {
            SpaceKind::GapExcluded { powers } => {
                // a one in the period recurs with every multiple of the period length
                !x.period.contains(&1) && gap_word_ok(powers, &x.preperiod)
            }
            _ => {
                let n = x.preperiod.len() + x.period.len() + self.order;
                self.accepts(&x.prefix(n))
            }
        })
    }

    /// All admissible words of length `len`, in lexicographic order.
    pub fn admissible_words(&self, len: usize) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(len);
        self.enumerate_into(&mut buf, len, &mut out)?;
        Ok(out)
    }

    fn enumerate_into(&self, buf: &mut Vec<Symbol>, len: usize, out: &mut Vec<Word>) -> Result<()> {
        if buf.len() == len {
            if out.len() >= MAX_WORDS {
                return Err(Error::budget("admissible words", MAX_WORDS));
            }
            out.push(Word(buf.clone()));
            return Ok(());
        }
        for s in 0..self.alphabet.size() as Symbol {
            if self.extends(buf, s) {
                buf.push(s);
                self.enumerate_into(buf, len, out)?;
                buf.pop();
            }
        }
        Ok(())
    }

    /// Deterministic admissible continuation of `w` to an eventually periodic
    /// point: always append the smallest symbol that keeps the word admissible.
    pub fn extend_to_point(&self, w: &[Symbol]) -> Result<Point> {
        if !self.admissible(w)? {
            return Err(Error::InvalidArgument(format!(
                "word {} is not admissible",
                self.alphabet.format_word(w)
            )));
        }
        let Some(g) = &self.graph else {
            // gap-excluded: zeros never create a forbidden pattern
            return Point::new(self.alphabet, w.to_vec(), vec![0]);
        };
        let mut word = w.to_vec();
        while word.len() < g.m {
            let s = (0..g.k as Symbol)
                .find(|&s| g.extends(&word, s))
                .expect("admissible prefix of a live block extends");
            word.push(s);
        }
        let mut seen = vec![usize::MAX; g.blocks()];
        let mut state = code(g.k, &word[word.len() - g.m..]);
        loop {
            if seen[state] != usize::MAX {
                let start = seen[state];
                let period = word[start..].to_vec();
                word.truncate(start);
                return Point::new(self.alphabet, word, period);
            }
            seen[state] = word.len();
            let (s, next) = g
                .successors(state)
                .next()
                .expect("live block has a successor");
            word.push(s);
            state = next;
        }
    }

    /// 0/1 transition matrix on live `order`-blocks, with block labels.
    pub fn transition_matrix(&self) -> Result<(Vec<Word>, Vec<Vec<u8>>)> {
        let g = self.graph.as_ref().ok_or(Error::NotFiniteType)?;
        let states = g.live_blocks();
        let index = |c: usize| states.binary_search(&c).ok();
        let labels = states
            .iter()
            .map(|&c| {
                let mut w = vec![0; g.m];
                let mut c = c;
                for i in (0..g.m).rev() {
                    w[i] = (c % g.k) as Symbol;
                    c /= g.k;
                }
                Word(w)
            })
            .collect();
        let mut m = vec![vec![0u8; states.len()]; states.len()];
        for (i, &u) in states.iter().enumerate() {
            for (_, v) in g.successors(u) {
                if let Some(j) = index(v) {
                    m[i][j] = 1;
                }
            }
        }
        Ok((labels, m))
    }

    pub fn is_mixing(&self) -> Result<Mixing> {
        let n = self.graph.as_ref().ok_or(Error::NotFiniteType)?.live_blocks().len();
        self.is_mixing_with_cap(4 * n * n)
    }

    /// Primitivity of the transition matrix. Irreducibility and aperiodicity are
    /// decided exactly; the mixing time is searched up to `cap`.
    pub fn is_mixing_with_cap(&self, cap: usize) -> Result<Mixing> {
        let (_, m) = self.transition_matrix()?;
        let n = m.len();
        if n == 0 || !strongly_connected(&m) || cyclic_period(&m) != 1 {
            return Ok(Mixing::NotMixing);
        }
        let mut power = m.clone();
        for q in 1..=cap {
            if power.iter().all(|row| row.iter().all(|&v| v > 0)) {
                return Ok(Mixing::Mixing { time: q });
            }
            power = bool_product(&power, &m);
        }
        Ok(Mixing::Indeterminate { cap })
    }

    /// Every `p` with `σ^k p = p`, ordered by its first `k` symbols.
    pub fn periodic_points(&self, k: usize) -> Result<Vec<Point>> {
        if k == 0 {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        let mut out = Vec::new();
        for w in self.admissible_words(k)? {
            let p = Point::periodic(self.alphabet, w.into_inner())?;
            if self.contains_point(&p)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Order-1 presentation on the live `order`-blocks. Symbol `i` of the
    /// result stands for `labels[i]`.
    pub fn recode_to_order_1(&self) -> Result<(ShiftSpace, Vec<Word>)> {
        let (labels, m) = self.transition_matrix()?;
        if labels.len() > 256 {
            return Err(Error::budget("recoded alphabet", 256));
        }
        Ok((ShiftSpace::from_matrix(&m)?, labels))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Mixing {
    Mixing { time: usize },
    NotMixing,
    Indeterminate { cap: usize },
}

fn strongly_connected(m: &[Vec<u8>]) -> bool {
    let n = m.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                let e = if forward { m[u][v] } else { m[v][u] };
                if e > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// gcd of cycle lengths of an irreducible graph, via BFS levels.
fn cyclic_period(m: &[Vec<u8>]) -> usize {
    let n = m.len();
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = VecDeque::from([0]);
    let mut g = 0usize;
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if m[u][v] == 0 {
                continue;
            }
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                g = g.gcd(&(level[u] + 1).abs_diff(level[v]));
            }
        }
    }
    g
}

fn bool_product(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let n = a.len();
    let mut c = vec![vec![0u8; n]; n];
    for i in 0..n {
        for k in (0..n).filter(|&k| a[i][k] > 0) {
            for j in 0..n {
                if b[k][j] > 0 {
                    c[i][j] = 1;
                }
            }
        }
    }
    c
}

/// Ones at `base + n·p_j` for all `j`, with `base` itself a one, ending at `i`.
fn gap_pattern_ends_at(powers: &[usize], w: &[Symbol], i: usize) -> bool {
    let last = *powers.last().unwrap();
    (1..).take_while(|n| n * last <= i).any(|n| {
        let base = i - n * last;
        w[base] == 1 && powers.iter().all(|p| w[base + n * p] == 1)
    })
}

fn gap_word_ok(powers: &[usize], w: &[Symbol]) -> bool {
    if w.iter().any(|&s| s > 1) {
        return false;
    }
    (0..w.len()).all(|i| {
        w[i] == 0 || ((i == 0 || w[i - 1] == 0) && !gap_pattern_ends_at(powers, w, i))
    })
}

fn gap_extends(powers: &[usize], prefix: &[Symbol], s: Symbol) -> bool {
    match s {
        0 => true,
        1 => {
            if prefix.last() == Some(&1) {
                return false;
            }
            let i = prefix.len();
            let last = *powers.last().unwrap();
            !(1..).take_while(|n| n * last <= i).any(|n| {
                let base = i - n * last;
                prefix[base] == 1
                    && powers
                        .iter()
                        .all(|p| base + n * p == i || prefix[base + n * p] == 1)
            })
        }
        _ => false,
    }
}

/// Wire form: `{alphabet_size, order, forbidden_words}`; the gap-excluded shift
/// adds `excluded_gap_powers`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShiftSpaceJson {
    pub alphabet_size: usize,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub forbidden_words: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excluded_gap_powers: Option<Vec<usize>>,
}

fn default_order() -> usize {
    1
}

impl ShiftSpace {
    pub fn to_json(&self) -> ShiftSpaceJson {
        ShiftSpaceJson {
            alphabet_size: self.alphabet.size(),
            order: self.order,
            forbidden_words: self
                .forbidden
                .iter()
                .map(|w| self.alphabet.format_word(w))
                .collect(),
            excluded_gap_powers: match &self.kind {
                SpaceKind::GapExcluded { powers } => Some(powers.clone()),
                _ => None,
            },
        }
    }

    pub fn from_json(j: &ShiftSpaceJson) -> Result<Self> {
        if let Some(powers) = &j.excluded_gap_powers {
            if j.alphabet_size != 2 {
                return Err(Error::InvalidSpace("gap-excluded shift is binary".into()));
            }
            return Self::gap_excluded(powers.clone());
        }
        let alphabet = Alphabet::new(j.alphabet_size)?;
        let forbidden = j
            .forbidden_words
            .iter()
            .map(|s| alphabet.parse_word(s))
            .collect::<Result<Vec<_>>>()?;
        Self::sft(j.alphabet_size, j.order, forbidden)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: ShiftSpaceJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(bits: &str) -> Vec<Symbol> {
        bits.bytes().map(|b| b - b'0').collect()
    }

    fn pt(pre: &str, per: &str) -> Point {
        Point::new(Alphabet::binary(), bin(pre), bin(per)).unwrap()
    }

    #[test]
    fn normal_form_is_canonical() {
        assert_eq!(pt("", "0101"), pt("", "01"));
        assert_eq!(pt("0101", "01"), pt("", "01"));
        assert_eq!(pt("1", "01"), pt("", "10"));
        assert_eq!(pt("001", "0"), pt("001", "00"));
        assert_ne!(pt("", "01"), pt("", "10"));
    }

    #[test]
    fn metric_examples() {
        let zero = pt("", "0");
        assert_eq!(metric_distance(&zero, &zero).unwrap(), 0.0);
        assert_eq!(metric_distance(&zero, &pt("001", "0")).unwrap(), 0.25);
        // (01)^∞ vs (0110)^∞: 0101… / 0110… differ at index 2
        assert_eq!(metric_distance(&pt("", "01"), &pt("", "0110")).unwrap(), 0.25);
        let ternary = Point::constant(Alphabet::new(3).unwrap(), 0).unwrap();
        assert!(matches!(
            metric_distance(&zero, &ternary),
            Err(Error::AlphabetMismatch(2, 3))
        ));
    }

    #[test]
    fn shift_moves_through_preperiod() {
        assert_eq!(pt("01", "0").shift(1), pt("1", "0"));
        assert_eq!(pt("", "01").shift(2), pt("", "01"));
        assert_eq!(pt("", "001").shift(4), pt("", "010"));
    }

    #[test]
    fn mixing_examples() {
        assert_eq!(ShiftSpace::full(2).unwrap().is_mixing().unwrap(), Mixing::Mixing { time: 1 });
        assert_eq!(ShiftSpace::golden_mean().is_mixing().unwrap(), Mixing::Mixing { time: 2 });
        let flip = ShiftSpace::from_matrix(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(flip.is_mixing().unwrap(), Mixing::NotMixing);
        assert_eq!(
            ShiftSpace::golden_mean().is_mixing_with_cap(1).unwrap(),
            Mixing::Indeterminate { cap: 1 }
        );
        assert!(matches!(
            ShiftSpace::gap_excluded(vec![1, 2]).unwrap().is_mixing(),
            Err(Error::NotFiniteType)
        ));
    }

    #[test]
    fn admissibility_examples() {
        let gm = ShiftSpace::golden_mean();
        assert!(!gm.admissible(&bin("0110")).unwrap());
        assert!(gm.admissible(&bin("01010")).unwrap());
        assert!(ShiftSpace::full(2).unwrap().admissible(&bin("111011")).unwrap());
        assert!(matches!(gm.admissible(&[0, 2]), Err(Error::SymbolOutOfRange { .. })));
    }

    #[test]
    fn dead_ends_are_pruned() {
        // symbol 2 may only be followed by 2, and 22 is forbidden: 2 never survives
        let s = ShiftSpace::sft(3, 1, vec![[2, 0].into(), [2, 1].into(), [2, 2].into()]).unwrap();
        assert!(!s.admissible(&[2]).unwrap());
        assert!(!s.admissible(&[0, 2]).unwrap());
        assert!(s.admissible(&[0, 1]).unwrap());
    }

    #[test]
    fn periodic_point_examples() {
        let full = ShiftSpace::full(2).unwrap();
        assert_eq!(full.periodic_points(1).unwrap(), vec![pt("", "0"), pt("", "1")]);
        assert_eq!(full.periodic_points(2).unwrap().len(), 4);
        let gm = ShiftSpace::golden_mean();
        assert_eq!(
            gm.periodic_points(2).unwrap(),
            vec![pt("", "0"), pt("", "01"), pt("", "10")]
        );
    }

    #[test]
    fn extension_to_point_is_admissible() {
        let gm = ShiftSpace::golden_mean();
        let x = gm.extend_to_point(&bin("101")).unwrap();
        assert!(gm.contains_point(&x).unwrap());
        assert_eq!(x.prefix(3).as_slice(), &bin("101")[..]);
        let flip = ShiftSpace::from_matrix(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(flip.extend_to_point(&[0]).unwrap(), pt("", "01"));
    }

    #[test]
    fn gap_excluded_membership() {
        let x = ShiftSpace::gap_excluded(vec![1, 2]).unwrap();
        assert!(!x.admissible(&bin("10101")).unwrap());
        assert!(x.admissible(&bin("101001")).unwrap());
        assert!(!x.admissible(&bin("0110")).unwrap());
        assert!(x.contains_point(&pt("", "0")).unwrap());
        assert!(x.contains_point(&pt("1001", "0")).unwrap());
        assert!(!x.contains_point(&pt("", "100")).unwrap());
        // incremental and whole-word checks agree on every short word
        for len in 0..12 {
            for c in 0..(1usize << len) {
                let w: Vec<Symbol> = (0..len).map(|i| ((c >> (len - 1 - i)) & 1) as Symbol).collect();
                let inc = (0..len).all(|i| x.extends(&w[..i], w[i]));
                assert_eq!(inc, x.accepts(&w), "{w:?}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let gm = ShiftSpace::golden_mean();
        let j = serde_json::to_string(&gm.to_json()).unwrap();
        assert_eq!(j, r#"{"alphabet_size":2,"order":1,"forbidden_words":["11"]}"#);
        assert_eq!(ShiftSpace::from_json_str(&j).unwrap(), gm);
        let big = Alphabet::new(12).unwrap();
        assert_eq!(big.format_word(&[1, 11, 0]), "1,11,0");
        assert_eq!(big.parse_word("1,11,0").unwrap().as_slice(), &[1, 11, 0]);
    }

    #[test]
    fn recoding_preserves_periodic_counts() {
        let s = ShiftSpace::sft(2, 2, vec![[1, 1, 1].into(), [0, 0, 0].into()]).unwrap();
        let (r, labels) = s.recode_to_order_1().unwrap();
        assert_eq!(labels.len(), 4);
        for k in 1..=6 {
            assert_eq!(
                s.periodic_points(k).unwrap().len(),
                r.periodic_points(k).unwrap().len()
            );
        }
    }
}
