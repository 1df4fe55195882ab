//! Hölder constants for locally constant functions and their products.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::livsic::functions::{LocallyConstantFn, ProductFn};

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct HolderSpec {
    pub alpha: f64,
    pub constant: f64,
}

impl HolderSpec {
    /// `|Δf| ≤ C d^α`, with a relative slack of `1e-12` for rounding.
    pub fn bounds(&self, diff: f64, distance: f64) -> bool {
        let rhs = self.constant * distance.powf(self.alpha);
        diff <= rhs * (1.0 + 1e-12) + f64::MIN_POSITIVE
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} is outside (0, 1]")));
    }
    Ok(())
}

/// `C = osc(f) · 2^{α(m−1)}`. Points closer than `2^{−(m−1)}` share the
/// first `m` symbols and hence the value.
pub fn holder_constant(f: &LocallyConstantFn, alpha: f64) -> Result<HolderSpec> {
    check_alpha(alpha)?;
    let osc = rational::to_f64(&f.oscillation());
    Ok(HolderSpec {
        alpha,
        constant: osc * (alpha * (f.depth() - 1) as f64).exp2(),
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ProductHolder {
    pub alpha: f64,
    /// The recursion constant `C` after the last coordinate.
    pub c_rec: f64,
    /// `2·C`, the constant in `|F(x) − F(y)| ≤ 2C d_H(x, y)^α`.
    pub bound: f64,
    /// Valid constants for each partial product `f_1 ⊗ … ⊗ f_h`.
    pub partial: Vec<f64>,
}

/// `F = ⊗ f_i` and its Hölder constant by induction on `H`: with `f*` the
/// product of the first `H−1` factors, `C = max{sup|f*|·C(f_H), sup|f_H|·C(f*)}`
/// and `2C` is a valid constant for `F`.
pub fn product_fn(fs: &[LocallyConstantFn], alpha: f64) -> Result<(ProductFn, ProductHolder)> {
    check_alpha(alpha)?;
    let table = ProductFn::tensor(fs)?;
    let first = holder_constant(&fs[0], alpha)?.constant;
    let mut sup_prev: Q = fs[0].sup_abs();
    let mut k_prev = first;
    let mut c_rec = first;
    let mut partial = vec![first];
    for f in &fs[1..] {
        let c_h = holder_constant(f, alpha)?.constant;
        let sup_h = f.sup_abs();
        c_rec = f64::max(rational::to_f64(&sup_prev) * c_h, rational::to_f64(&sup_h) * k_prev);
        k_prev = 2.0 * c_rec;
        sup_prev *= sup_h;
        partial.push(k_prev);
    }
    let bound = if fs.len() == 1 { c_rec } else { 2.0 * c_rec };
    Ok((
        table,
        ProductHolder {
            alpha,
            c_rec,
            bound,
            partial,
        },
    ))
}
