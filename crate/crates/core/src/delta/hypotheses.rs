//! Concrete checks of the hypotheses used to prove Δ-transitivity: the density
//! condition, syndetic return times and strong transitivity.

use serde::Serialize;

use crate::cylinder::{CylinderUnion, CylinderUnionJson};
use crate::error::{Error, Result};
use crate::symbolic::ShiftSpace;
use crate::systems::MapSpec;
use crate::windows::{pull_back, solve, Window, DEFAULT_MAX_LEN};

fn shift_power(map: &MapSpec) -> Result<usize> {
    match map {
        MapSpec::ShiftPower(p) => Ok(*p),
        other => Err(Error::NotShiftPower(other.describe())),
    }
}

#[derive(Clone, Debug)]
pub struct DensityWitness {
    pub w: CylinderUnion,
    pub n0: usize,
    /// First `n` with `T^n(U) = X`, if seen.
    pub full_from: Option<usize>,
    /// A whole period of the image sequence lies in `n0..=n_probe`, so the
    /// inclusion holds for every `n ≥ n0`, not only up to the probe.
    pub conclusive: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DensityWitnessJson {
    pub w: CylinderUnionJson,
    pub n0: usize,
    pub full_from: Option<usize>,
    pub conclusive: bool,
}

impl DensityWitness {
    pub fn to_json(&self) -> DensityWitnessJson {
        DensityWitnessJson {
            w: self.w.to_json(),
            n0: self.n0,
            full_from: self.full_from,
            conclusive: self.conclusive,
        }
    }
}

/// Least `n0` such that `W = V ∩ ⋂_{n0 ≤ n ≤ n_probe} T^n(U)` is nonempty,
/// together with that `W`. `None` if even `T^{n_probe}(U)` misses `V`.
pub fn density_condition_witness(
    space: &ShiftSpace,
    t: &MapSpec,
    u: &CylinderUnion,
    v: &CylinderUnion,
    n_probe: usize,
) -> Result<Option<DensityWitness>> {
    let p = shift_power(t)?;
    if u.space() != space || v.space() != space {
        return Err(Error::SpaceMismatch);
    }
    if u.is_empty() || v.is_empty() {
        return Err(Error::InvalidArgument("U and V must be nonempty".into()));
    }
    let mut images = Vec::with_capacity(n_probe + 1);
    let mut cur = u.normalize();
    let mut cycle = None;
    for n in 0..=n_probe {
        if n > 0 {
            cur = cur.image_shift_power(p)?.normalize();
        }
        if cycle.is_none() {
            if let Some(a) = images.iter().position(|i| *i == cur) {
                cycle = Some((a, n - a));
            }
        }
        images.push(cur.clone());
    }
    let full_from = images.iter().position(CylinderUnion::is_full);
    let mut acc = v.clone();
    let mut best = None;
    for n0 in (0..=n_probe).rev() {
        acc = acc.intersect(&images[n0])?.normalize();
        if acc.is_empty() {
            break;
        }
        best = Some((n0, acc.clone()));
    }
    // Images cycle from `start` with period `len`; the check is conclusive
    // once a whole cycle lies inside `n0..=n_probe`.
    Ok(best.map(|(n0, w)| DensityWitness {
        w,
        n0,
        full_from,
        conclusive: cycle.is_some_and(|(start, len)| n_probe + 1 - n0.max(start) >= len),
    }))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SyndeticReport {
    pub horizon: usize,
    pub times: Vec<usize>,
    pub max_gap: Option<usize>,
    pub note: String,
}

/// Every `n ≤ horizon` with `U ∩ T^{-n} V ≠ ∅` and the largest gap between
/// consecutive such times.
pub fn syndetic_return_times(
    space: &ShiftSpace,
    t: &MapSpec,
    u: &CylinderUnion,
    v: &CylinderUnion,
    horizon: usize,
) -> Result<SyndeticReport> {
    t.validate(space)?;
    let mut times = Vec::new();
    let mut pulled = Window::new(0, v.clone());
    for n in 0..=horizon {
        if n > 0 {
            pulled = pull_back(t, &pulled).map_err(|e| e.at_n(n))?;
        }
        let windows = [Window::new(0, u.clone()), pulled.clone()];
        if solve(space, &windows, DEFAULT_MAX_LEN).map_err(|e| e.at_n(n))?.is_some() {
            times.push(n);
        }
    }
    let max_gap = times.windows(2).map(|w| w[1] - w[0]).max();
    let note = format!("gaps observed up to n = {horizon}; nothing is claimed beyond it");
    Ok(SyndeticReport {
        horizon,
        times,
        max_gap,
        note,
    })
}

/// Least `M ≤ m_max` with `⋃_{i ≤ M} A^i(U) = X`.
pub fn strong_transitivity_cover(
    space: &ShiftSpace,
    a: &MapSpec,
    u: &CylinderUnion,
    m_max: usize,
) -> Result<Option<usize>> {
    let p = shift_power(a)?;
    if u.space() != space {
        return Err(Error::SpaceMismatch);
    }
    let mut image = u.clone();
    let mut cover = u.clone();
    for m in 0..=m_max {
        if m > 0 {
            image = image.image_shift_power(p)?.normalize();
            cover = cover.union(&image)?.normalize();
        }
        if cover.is_full() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
