//! Transformations of a shift space and the product system `T_1 × … × T_H`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::{code, Alphabet, Point, ShiftSpace, Symbol, Word};

/// One-sided cellular automaton `F(x)_i = φ(x_i, …, x_{i+a})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularAutomaton {
    alphabet: Alphabet,
    anticipation: usize,
    rule: Vec<Symbol>,
}

impl CellularAutomaton {
    /// `rule[code(window)]` is the image of a window of `anticipation + 1`
    /// symbols, windows read as base-`k` numbers with the leftmost symbol most
    /// significant.
    pub fn new(alphabet_size: usize, anticipation: usize, rule: Vec<Symbol>) -> Result<Self> {
        let alphabet = Alphabet::new(alphabet_size)?;
        if anticipation == 0 {
            return Err(Error::InvalidArgument("anticipation must be positive".into()));
        }
        let expected = alphabet_size
            .checked_pow(anticipation as u32 + 1)
            .ok_or_else(|| Error::budget("CA rule table", usize::MAX))?;
        if rule.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "CA rule needs {expected} entries, got {}",
                rule.len()
            )));
        }
        alphabet.check(&rule)?;
        Ok(CellularAutomaton {
            alphabet,
            anticipation,
            rule,
        })
    }

    /// `x_i ⊕ x_{i+1}` on the binary alphabet.
    pub fn xor() -> Self {
        Self::new(2, 1, vec![0, 1, 1, 0]).expect("valid rule")
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn anticipation(&self) -> usize {
        self.anticipation
    }

    pub fn rule(&self) -> &[Symbol] {
        &self.rule
    }

    #[inline]
    pub fn local(&self, window: &[Symbol]) -> Symbol {
        self.rule[code(self.alphabet.size(), window)]
    }

    /// Image of a finite word; `anticipation` symbols shorter.
    pub fn apply_word(&self, w: &[Symbol]) -> Word {
        w.windows(self.anticipation + 1)
            .map(|win| self.local(win))
            .collect::<Vec<_>>()
            .into()
    }

    pub fn apply_point(&self, x: &Point) -> Result<Point> {
        if x.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch(x.alphabet().size(), self.alphabet.size()));
        }
        let pre = x.preperiod().len();
        let per = x.period().len();
        let out = |i: usize| {
            let win: Vec<Symbol> = (i..=i + self.anticipation).map(|j| x.symbol_at(j)).collect();
            self.local(&win)
        };
        Point::new(
            self.alphabet,
            (0..pre).map(out).collect(),
            (pre..pre + per).map(out).collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapSpec {
    ShiftPower(usize),
    Ca(CellularAutomaton),
    /// `parts[0] ∘ parts[1] ∘ …`: the last part acts first.
    Composed(Vec<MapSpec>),
}

impl MapSpec {
    pub fn shift(p: usize) -> Self {
        MapSpec::ShiftPower(p)
    }

    pub fn validate(&self, space: &ShiftSpace) -> Result<()> {
        match self {
            MapSpec::ShiftPower(0) => {
                Err(Error::InvalidArgument("shift power must be positive".into()))
            }
            MapSpec::ShiftPower(_) => Ok(()),
            MapSpec::Ca(ca) if ca.alphabet() != space.alphabet() => Err(Error::AlphabetMismatch(
                ca.alphabet().size(),
                space.alphabet().size(),
            )),
            MapSpec::Ca(_) => Ok(()),
            MapSpec::Composed(parts) if parts.is_empty() => {
                Err(Error::InvalidArgument("composition needs at least one part".into()))
            }
            MapSpec::Composed(parts) => parts.iter().try_for_each(|p| p.validate(space)),
        }
    }

    /// Total shift when the map is a shift power or a composition of them.
    pub fn shift_total(&self) -> Option<usize> {
        match self {
            MapSpec::ShiftPower(p) => Some(*p),
            MapSpec::Ca(_) => None,
            MapSpec::Composed(parts) => parts.iter().map(MapSpec::shift_total).sum(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            MapSpec::ShiftPower(p) => format!("shift^{p}"),
            MapSpec::Ca(ca) => format!("ca(a={})", ca.anticipation()),
            MapSpec::Composed(parts) => parts
                .iter()
                .map(MapSpec::describe)
                .collect::<Vec<_>>()
                .join(" o "),
        }
    }
}

pub fn apply(map: &MapSpec, x: &Point) -> Result<Point> {
    match map {
        MapSpec::ShiftPower(p) => Ok(x.shift(*p)),
        MapSpec::Ca(ca) => ca.apply_point(x),
        MapSpec::Composed(parts) => parts
            .iter()
            .rev()
            .try_fold(x.clone(), |acc, part| apply(part, &acc)),
    }
}

/// `map^n (x)`.
pub fn apply_n(map: &MapSpec, x: &Point, n: usize) -> Result<Point> {
    if let Some(p) = map.shift_total() {
        return Ok(x.shift(p * n));
    }
    (0..n).try_fold(x.clone(), |acc, _| apply(map, &acc))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSystem {
    space: ShiftSpace,
    factors: Vec<MapSpec>,
}

impl ProductSystem {
    pub fn new(space: ShiftSpace, factors: Vec<MapSpec>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a product system needs H >= 2 factors, got {}",
                factors.len()
            )));
        }
        Self::build(space, factors)
    }

    /// The degenerate one-factor system, for ordinary cohomology questions.
    pub fn single(space: ShiftSpace, map: MapSpec) -> Result<Self> {
        Self::build(space, vec![map])
    }

    fn build(space: ShiftSpace, factors: Vec<MapSpec>) -> Result<Self> {
        for f in &factors {
            f.validate(&space)?;
        }
        Ok(ProductSystem { space, factors })
    }

    pub fn space(&self) -> &ShiftSpace {
        &self.space
    }

    pub fn factors(&self) -> &[MapSpec] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    /// Per-factor shifts, when every factor is a shift power.
    pub fn shift_powers(&self) -> Option<Vec<usize>> {
        self.factors.iter().map(MapSpec::shift_total).collect()
    }

    pub fn require_shift_powers(&self) -> Result<Vec<usize>> {
        self.shift_powers().ok_or_else(|| {
            Error::NotShiftPower(
                self.factors
                    .iter()
                    .map(MapSpec::describe)
                    .collect::<Vec<_>>()
                    .join(", "),
            )
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductPoint {
    pub coords: Vec<Point>,
}

impl ProductPoint {
    pub fn new(coords: Vec<Point>) -> Result<Self> {
        if let Some(first) = coords.first() {
            if let Some(bad) = coords.iter().find(|c| c.alphabet() != first.alphabet()) {
                return Err(Error::AlphabetMismatch(
                    first.alphabet().size(),
                    bad.alphabet().size(),
                ));
            }
        }
        Ok(ProductPoint { coords })
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }
}

pub fn product_metric(x: &ProductPoint, y: &ProductPoint) -> Result<f64> {
    if x.arity() != y.arity() {
        return Err(Error::InvalidArgument(format!(
            "product points of different length {} and {}",
            x.arity(),
            y.arity()
        )));
    }
    x.coords
        .iter()
        .zip(&y.coords)
        .try_fold(0.0f64, |acc, (a, b)| Ok(acc.max(crate::symbolic::metric_distance(a, b)?)))
}

pub fn product_apply(sys: &ProductSystem, x: &ProductPoint, n: usize) -> Result<ProductPoint> {
    if x.arity() != sys.arity() {
        return Err(Error::InvalidArgument("point arity differs from system".into()));
    }
    let coords = sys
        .factors
        .iter()
        .zip(&x.coords)
        .map(|(f, c)| apply_n(f, c, n))
        .collect::<Result<_>>()?;
    Ok(ProductPoint { coords })
}

pub fn diagonal(x: &Point, h: usize) -> Result<ProductPoint> {
    if h < 2 {
        return Err(Error::InvalidArgument(format!("diagonal needs H >= 2, got {h}")));
    }
    Ok(ProductPoint {
        coords: vec![x.clone(); h],
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpecJson {
    ShiftPower { p: usize },
    Ca { anticipation: usize, rule: Vec<Symbol> },
    Composed { parts: Vec<MapSpecJson> },
}

impl MapSpecJson {
    pub fn into_map(self, alphabet: Alphabet) -> Result<MapSpec> {
        Ok(match self {
            MapSpecJson::ShiftPower { p } => MapSpec::ShiftPower(p),
            MapSpecJson::Ca { anticipation, rule } => {
                MapSpec::Ca(CellularAutomaton::new(alphabet.size(), anticipation, rule)?)
            }
            MapSpecJson::Composed { parts } => MapSpec::Composed(
                parts
                    .into_iter()
                    .map(|p| p.into_map(alphabet))
                    .collect::<Result<_>>()?,
            ),
        })
    }

    pub fn from_map(map: &MapSpec) -> Self {
        match map {
            MapSpec::ShiftPower(p) => MapSpecJson::ShiftPower { p: *p },
            MapSpec::Ca(ca) => MapSpecJson::Ca {
                anticipation: ca.anticipation(),
                rule: ca.rule().to_vec(),
            },
            MapSpec::Composed(parts) => MapSpecJson::Composed {
                parts: parts.iter().map(MapSpecJson::from_map).collect(),
            },
        }
    }
}

/// `{"factors": [MapSpec, …]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemJson {
    pub factors: Vec<MapSpecJson>,
}

impl SystemJson {
    pub fn into_factors(self, space: &ShiftSpace) -> Result<Vec<MapSpec>> {
        self.factors
            .into_iter()
            .map(|f| {
                let m = f.into_map(space.alphabet())?;
                m.validate(space)?;
                Ok(m)
            })
            .collect()
    }
}
