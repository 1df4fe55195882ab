//! Nonconventional ergodic sums `S_n = ∑_{j≤n} ∏ f_i(T_i^j x)` and their
//! product-space analogue, in exact arithmetic.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::livsic::functions::{LocallyConstantFn, ProductFn};
use crate::rational::{self, Q};
use crate::symbolic::Point;
use crate::systems::{apply, diagonal, ProductPoint, ProductSystem};

#[derive(Clone, Debug, PartialEq)]
pub struct SumTrajectory {
    /// `S_0, …, S_N`.
    pub sums: Vec<Q>,
    pub sup_abs: Q,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SumTrajectoryJson {
    pub n: usize,
    pub sup_abs: String,
    pub last: String,
    pub sums: Vec<String>,
}

impl SumTrajectory {
    fn from_terms(terms: impl Iterator<Item = Q>) -> Self {
        let mut acc = Q::zero();
        let mut sup = Q::zero();
        let mut sums = Vec::new();
        for t in terms {
            acc += t;
            if acc.abs() > sup {
                sup = acc.abs();
            }
            sums.push(acc.clone());
        }
        SumTrajectory { sums, sup_abs: sup }
    }

    pub fn to_json(&self) -> SumTrajectoryJson {
        SumTrajectoryJson {
            n: self.sums.len().saturating_sub(1),
            sup_abs: rational::format(&self.sup_abs),
            last: self.sums.last().map(rational::format).unwrap_or_else(|| "0/1".into()),
            sums: self.sums.iter().map(rational::format).collect(),
        }
    }
}

/// Orbit of each coordinate under its own map, `n_max + 1` points long.
/// Shift powers are read off by offset instead.
enum Orbit<'a> {
    Offsets(&'a Point, usize),
    Points(Vec<Point>),
}

impl Orbit<'_> {
    fn at(&self, j: usize) -> (&Point, usize) {
        match self {
            Orbit::Offsets(x, p) => (x, p * j),
            Orbit::Points(ps) => (&ps[j], 0),
        }
    }
}

fn orbits<'a>(sys: &ProductSystem, coords: &'a [Point], n_max: usize) -> Result<Vec<Orbit<'a>>> {
    sys.factors()
        .iter()
        .zip(coords)
        .map(|(f, x)| match f.shift_total() {
            Some(p) => Ok(Orbit::Offsets(x, p)),
            None => {
                let mut ps = Vec::with_capacity(n_max + 1);
                ps.push(x.clone());
                for _ in 0..n_max {
                    let next = apply(f, ps.last().unwrap())?;
                    ps.push(next);
                }
                Ok(Orbit::Points(ps))
            }
        })
        .collect()
}

fn check_point(sys: &ProductSystem, x: &Point) -> Result<()> {
    if !sys.space().contains_point(x)? {
        return Err(Error::PointNotInSpace);
    }
    Ok(())
}

/// `S_n = ∑_{j=0}^{n} ∏_i f_i(T_i^j x)` for `n ≤ n_max`.
pub fn nonconventional_sums(
    fs: &[LocallyConstantFn],
    sys: &ProductSystem,
    x: &Point,
    n_max: usize,
) -> Result<SumTrajectory> {
    if fs.len() != sys.arity() {
        return Err(Error::InvalidArgument("one function per factor".into()));
    }
    check_point(sys, x)?;
    let coords = vec![x.clone(); sys.arity()];
    let orbits = orbits(sys, &coords, n_max)?;
    Ok(SumTrajectory::from_terms((0..=n_max).map(|j| {
        fs.iter()
            .zip(&orbits)
            .map(|(f, o)| {
                let (p, off) = o.at(j);
                f.eval_at(p, off)
            })
            .product()
    })))
}

/// `S_n = ∑_{j=0}^{n} F(𝒯^j x)` for a point of the product.
pub fn product_sums(f: &ProductFn, sys: &ProductSystem, x: &ProductPoint, n_max: usize) -> Result<SumTrajectory> {
    if f.arity() != sys.arity() || x.arity() != sys.arity() {
        return Err(Error::InvalidArgument("arity mismatch".into()));
    }
    for c in &x.coords {
        check_point(sys, c)?;
    }
    let orbits = orbits(sys, &x.coords, n_max)?;
    Ok(SumTrajectory::from_terms((0..=n_max).map(|j| {
        let (points, offsets): (Vec<Point>, Vec<usize>) = orbits
            .iter()
            .map(|o| {
                let (p, off) = o.at(j);
                (p.clone(), off)
            })
            .unzip();
        f.eval_at(&points, &offsets)
    })))
}

/// `S_n` along the diagonal point `(x, …, x)`.
pub fn diagonal_sums(f: &ProductFn, sys: &ProductSystem, x: &Point, n_max: usize) -> Result<SumTrajectory> {
    let h = sys.arity();
    let point = if h == 1 {
        ProductPoint::new(vec![x.clone()])?
    } else {
        diagonal(x, h)?
    };
    product_sums(f, sys, &point, n_max)
}

/// Net change of `S_n` over one period of the eventually periodic orbit of
/// `x` under shift powers, with that period. `S_n` is bounded along `x` iff
/// the drift is zero.
pub fn orbit_drift(f: &ProductFn, powers: &[usize], x: &ProductPoint) -> (Q, usize) {
    let mut start = 0;
    let mut period = 1usize;
    for (c, &p) in x.coords.iter().zip(powers) {
        start = start.max(c.preperiod().len().div_ceil(p));
        let q = c.period().len();
        period = period.lcm(&(q / q.gcd(&p)));
    }
    let drift = (start..start + period)
        .map(|j| {
            let offsets: Vec<usize> = powers.iter().map(|p| p * j).collect();
            f.eval_at(&x.coords, &offsets)
        })
        .sum();
    (drift, period)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::symbolic::ShiftSpace;
    use crate::systems::MapSpec;

    #[test]
    fn zero_factor() {
        let full = ShiftSpace::full(2).unwrap();
        let sys = ProductSystem::new(full.clone(), vec![MapSpec::shift(1), MapSpec::shift(2)]).unwrap();
        let fs = [LocallyConstantFn::zero(&full, 1).unwrap(), LocallyConstantFn::first_symbol(&full).unwrap()];
        let x = Point::periodic(full.alphabet(), vec![0, 1, 1]).unwrap();
        let t = nonconventional_sums(&fs, &sys, &x, 50).unwrap();
        assert!(t.sums.iter().all(Zero::is_zero));
    }

    #[test]
    fn linear_growth_on_ones() {
        let full = ShiftSpace::full(2).unwrap();
        let sys = ProductSystem::new(full.clone(), vec![MapSpec::shift(1), MapSpec::shift(2)]).unwrap();
        let x0 = LocallyConstantFn::first_symbol(&full).unwrap();
        let one = Point::constant(full.alphabet(), 1).unwrap();
        let t = nonconventional_sums(&[x0.clone(), x0.clone()], &sys, &one, 100).unwrap();
        for (n, s) in t.sums.iter().enumerate() {
            assert_eq!(s, &int(n as i64 + 1));
        }
        let f = ProductFn::tensor(&[x0.clone(), x0]).unwrap();
        assert_eq!(diagonal_sums(&f, &sys, &one, 100).unwrap(), t);
        let (drift, period) = orbit_drift(&f, &[1, 2], &diagonal(&one, 2).unwrap());
        assert_eq!((drift, period), (int(1), 1));
    }

    #[test]
    fn ca_factor_iterates_points() {
        let full = ShiftSpace::full(2).unwrap();
        let xor = MapSpec::Ca(crate::systems::CellularAutomaton::xor());
        let sys = ProductSystem::new(full.clone(), vec![xor, MapSpec::shift(1)]).unwrap();
        let x0 = LocallyConstantFn::first_symbol(&full).unwrap();
        let x = Point::periodic(full.alphabet(), vec![0, 1]).unwrap();
        // XOR sends (01)^∞ to 1^∞ and then to 0^∞.
        let t = nonconventional_sums(&[x0.clone(), x0], &sys, &x, 5).unwrap();
        let terms: Vec<Q> = std::iter::once(t.sums[0].clone())
            .chain(t.sums.windows(2).map(|w| &w[1] - &w[0]))
            .collect();
        assert_eq!(terms, [int(0), int(1), int(0), int(0), int(0), int(0)]);
    }
}
