//! Level-one equivalence: `𝔻_f¹ ≅ 𝔻_g¹` via `z ↦ (λ_i z_{σ(i)})`.
//!
//! With `(σ·m)_i = m_{σ(i)}` and `s_i = |λ_i|²`, the map matches the collapsed
//! polynomials iff `c_f(m) = c_g(σ·m) · Π_i s_i^{(σ·m)_i}` on equal supports.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::symbol::{invert_permutation, CollapsedPolynomial, Symbol};

use super::permutations::Permutations;

/// Largest accepted residual of the log-linear fit.
pub const SUNADA_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SunadaMatch {
    /// Zero-based.
    pub sigma: Vec<usize>,
    pub s: Vec<f64>,
    /// Max absolute residual of the log-linear system.
    pub residual: f64,
}

impl SunadaMatch {
    /// The inverse map, which matches `(g, f)`.
    pub fn inverse(&self) -> SunadaMatch {
        let n = self.sigma.len();
        let inv = invert_permutation(&self.sigma, n).expect("valid permutation");
        let s = inv.iter().map(|&j| 1.0 / self.s[j]).collect();
        SunadaMatch { sigma: inv, s, residual: self.residual }
    }
}

/// First match in lexicographic order of `σ`, or `None`.
pub fn sunada_equivalence(f: &Symbol, g: &Symbol) -> Result<Option<SunadaMatch>> {
    Ok(sunada_search(f, g, true)?.into_iter().next())
}

/// Every matching permutation, in lexicographic order.
pub fn sunada_all(f: &Symbol, g: &Symbol) -> Result<Vec<SunadaMatch>> {
    sunada_search(f, g, false)
}

fn sunada_search(f: &Symbol, g: &Symbol, first_only: bool) -> Result<Vec<SunadaMatch>> {
    f.validate()?;
    g.validate()?;
    if f.n() != g.n() {
        return Ok(Vec::new());
    }
    let cf = f.collapse();
    let cg = g.collapse();
    let mut out = Vec::new();
    for sigma in Permutations::new(f.n()) {
        if let Some(m) = fit(&cf, &cg, &sigma) {
            out.push(m);
            if first_only {
                break;
            }
        }
    }
    Ok(out)
}

fn fit(cf: &CollapsedPolynomial, cg: &CollapsedPolynomial, sigma: &[usize]) -> Option<SunadaMatch> {
    let image: BTreeSet<_> = cf.support().map(|m| m.permuted(sigma)).collect();
    if !image.iter().eq(cg.support()) {
        return None;
    }
    let n = cf.n();
    let rows: Vec<_> = cf.terms().collect();
    let a = DMatrix::from_fn(rows.len(), n, |r, i| rows[r].0.permuted(sigma).counts()[i] as f64);
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|(m, c)| c.ln() - cg.coeff(&m.permuted(sigma)).ln()));
    let x = a.clone().svd(true, true).solve(&b, 1e-14).ok()?;
    let residual = (&a * &x - &b).amax();
    (residual <= SUNADA_TOL).then(|| SunadaMatch { sigma: sigma.to_vec(), s: x.iter().map(|v| v.exp()).collect(), residual })
}

/// Max `|log c_f(m) - log c_g(σ·m) - Σ_i (σ·m)_i log s_i|`, or `None` when the
/// permuted supports differ.
pub fn sunada_residual(f: &Symbol, g: &Symbol, sigma: &[usize], s: &[f64]) -> Option<f64> {
    let cf = f.collapse();
    let cg = g.collapse();
    if f.n() != g.n() || sigma.len() != f.n() || s.len() != f.n() {
        return None;
    }
    let image: BTreeSet<_> = cf.support().map(|m| m.permuted(sigma)).collect();
    if !image.iter().eq(cg.support()) {
        return None;
    }
    Some(
        cf.terms()
            .map(|(m, c)| {
                let pm = m.permuted(sigma);
                let shift: f64 = pm.counts().iter().zip(s).map(|(&k, si)| k as f64 * si.ln()).sum();
                (c.ln() - cg.coeff(&pm).ln() - shift).abs()
            })
            .fold(0.0, f64::max),
    )
}
