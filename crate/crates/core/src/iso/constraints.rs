//! Degree-`d` norm constraints on a zero-fixing isometric isomorphism.
//!
//! If `Φ(W_i^f) = Σ_j m_ij W_j^g` with `M` unitary, then for `|β| = d`
//! `Φ(W_β^f) = Σ_{|α|=d} (Π_t m_{β_t α_t}) W_α^g`, and comparing norms gives
//! `Σ_α (Π_t p_{β_t α_t}) / b^g_α = 1 / b^f_β` with `p_ij = |m_ij|²`.

use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::weights::compute_weights;
use crate::words::{Alphabet, Word};

use super::candidate::LinearCandidate;
use super::univariate::Univariate;

/// The `n^d` constraints of one degree, indexed by `β` in graded-lex order.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    n: usize,
    degree: usize,
    words: Vec<Word>,
    /// `1 / b^g_α`, aligned with `words`.
    inv_g: Vec<f64>,
    /// `1 / b^f_β`, aligned with `words`.
    targets: Vec<f64>,
}

pub fn degree_d_constraints(f: &Symbol, g: &Symbol, d: usize) -> Result<ConstraintSystem> {
    if f.n() != g.n() {
        return Err(Error::AlphabetMismatch { expected: f.n(), found: g.n() });
    }
    f.validate()?;
    g.validate()?;
    if !f.is_normalized() || !g.is_normalized() {
        return Err(Error::NotNormalized);
    }
    if d == 0 {
        return Err(Error::Invalid("constraint degree must be at least 1".into()));
    }
    let bf = compute_weights(f, d)?;
    let bg = compute_weights(g, d)?;
    let words = Alphabet::new(f.n())?.words_of_len(d);
    let inv = |table: &crate::weights::WeightTable, w: &Word| 1.0 / table.get(w).expect("within table");
    let inv_g = words.iter().map(|w| inv(&bg, w)).collect();
    let targets = words.iter().map(|w| inv(&bf, w)).collect();
    Ok(ConstraintSystem { n: f.n(), degree: d, words, inv_g, targets })
}

impl ConstraintSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn beta(&self, c: usize) -> &Word {
        &self.words[c]
    }

    /// `1 / b^f_β`.
    pub fn target(&self, c: usize) -> f64 {
        self.targets[c]
    }

    /// `(min, max)` of `1 / b^g_α` over `|α| = d`. Row sums of `P` are one, so
    /// every left-hand side is a convex combination of these values.
    pub fn hull(&self) -> (f64, f64) {
        min_max(&self.inv_g)
    }

    pub fn target_range(&self) -> (f64, f64) {
        min_max(&self.targets)
    }

    /// `Σ_α (Π_t p_{β_t α_t}) / b^g_α`.
    pub fn lhs(&self, c: usize, p: &LinearCandidate) -> f64 {
        let beta: Vec<usize> = self.words[c].letters().collect();
        self.words
            .iter()
            .zip(&self.inv_g)
            .map(|(alpha, &w)| w * alpha.letters().zip(&beta).map(|(a, &b)| p.get(b, a)).product::<f64>())
            .sum()
    }

    /// `1/b^f_β - lhs`.
    pub fn residual(&self, c: usize, p: &LinearCandidate) -> f64 {
        self.targets[c] - self.lhs(c, p)
    }

    /// The same mismatch measured between operator norms: `|√lhs - 1/√b^f_β|`.
    pub fn norm_violation(&self, c: usize, p: &LinearCandidate) -> f64 {
        (self.lhs(c, p).max(0.0).sqrt() - self.targets[c].sqrt()).abs()
    }

    pub fn max_abs_residual(&self, p: &LinearCandidate) -> f64 {
        (0..self.len()).map(|c| self.residual(c, p).abs()).fold(0.0, f64::max)
    }

    /// The residual as a polynomial in `p = p₁₁` on the family `[[p, 1-p], [1-p, p]]`.
    pub fn univariate(&self, c: usize) -> Result<Univariate> {
        if self.n != 2 {
            return Err(Error::Invalid(format!("univariate form needs n = 2, got n = {}", self.n)));
        }
        let beta = &self.words[c];
        let mut lhs = Univariate::constant(0.0);
        for (alpha, &w) in self.words.iter().zip(&self.inv_g) {
            let mut term = Univariate::constant(w);
            for (a, b) in alpha.letters().zip(beta.letters()) {
                let factor = if a == b { Univariate::x() } else { Univariate::one_minus_x() };
                term = &term * &factor;
            }
            lhs = &lhs + &term;
        }
        Ok(&Univariate::constant(self.targets[c]) + &(&lhs * -1.0))
    }

    /// The same system with targets replaced by the left-hand sides at `p`.
    #[cfg(test)]
    pub(crate) fn with_targets_from(&self, p: &LinearCandidate) -> ConstraintSystem {
        let targets = (0..self.len()).map(|c| self.lhs(c, p)).collect();
        ConstraintSystem { targets, ..self.clone() }
    }

    /// Residuals and their Jacobian with respect to the entries of `P`
    /// (row-major), appended to `r` and `jac` one constraint at a time.
    pub(crate) fn residuals_and_jacobian(&self, p: &LinearCandidate, r: &mut Vec<f64>, jac: &mut Vec<Vec<f64>>) {
        let d = self.degree;
        let mut prefix = vec![1.0; d + 1];
        let mut suffix = vec![1.0; d + 1];
        for c in 0..self.len() {
            let beta: Vec<usize> = self.words[c].letters().collect();
            let mut row = vec![0.0; self.n * self.n];
            let mut lhs = 0.0;
            for (alpha, &w) in self.words.iter().zip(&self.inv_g) {
                let alpha: Vec<usize> = alpha.letters().collect();
                for t in 0..d {
                    prefix[t + 1] = prefix[t] * p.get(beta[t], alpha[t]);
                }
                for t in (0..d).rev() {
                    suffix[t] = suffix[t + 1] * p.get(beta[t], alpha[t]);
                }
                lhs += w * prefix[d];
                for t in 0..d {
                    row[beta[t] * self.n + alpha[t]] -= w * prefix[t] * suffix[t + 1];
                }
            }
            r.push(self.targets[c] - lhs);
            jac.push(row);
        }
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn f() -> Symbol {
        Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("12", 1.0)]).unwrap()
    }

    fn g() -> Symbol {
        Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("12", 0.5), ("21", 0.5)]).unwrap()
    }

    fn index(sys: &ConstraintSystem, w: &str) -> usize {
        let w = parse_word(w, 2).unwrap();
        (0..sys.len()).find(|&c| sys.beta(c) == &w).unwrap()
    }

    #[test]
    fn flagship_g1g1_residual() {
        let sys = degree_d_constraints(&f(), &g(), 2).unwrap();
        let r = sys.univariate(index(&sys, "11")).unwrap();
        let expected = [0.0, 2.0 / 3.0, -2.0 / 3.0];
        for (k, e) in expected.iter().enumerate() {
            assert!((r.0[k] - e).abs() < 1e-15, "{r:?}");
        }
        // The literal form p² + (4/3)p(1-p) + (1-p)² against the target 1.
        for p in [0.0, 0.2, 0.5, 0.9] {
            let cand = LinearCandidate::two_letter(p).unwrap();
            let lhs = p * p + 4.0 / 3.0 * p * (1.0 - p) + (1.0 - p) * (1.0 - p);
            assert!((sys.lhs(index(&sys, "11"), &cand) - lhs).abs() < 1e-15);
            assert!((r.eval(p) - sys.residual(index(&sys, "11"), &cand)).abs() < 1e-15);
        }
    }

    #[test]
    fn flagship_endpoint_violation() {
        let sys = degree_d_constraints(&f(), &g(), 2).unwrap();
        let c = index(&sys, "21");
        for p in [0.0, 1.0] {
            let cand = LinearCandidate::two_letter(p).unwrap();
            assert!((sys.lhs(c, &cand) - 2.0 / 3.0).abs() < 1e-15);
            assert!((sys.norm_violation(c, &cand) - (1.0 - (2.0f64 / 3.0).sqrt())).abs() < 1e-15);
        }
    }

    #[test]
    fn degree_one_is_row_sums() {
        let sys = degree_d_constraints(&f(), &g(), 1).unwrap();
        let cand = LinearCandidate::new(vec![vec![0.3, 0.7], vec![0.7, 0.3]]).unwrap();
        assert!(sys.max_abs_residual(&cand) < 1e-15);
    }

    #[test]
    fn identity_when_equal() {
        for d in 1..=4 {
            let sys = degree_d_constraints(&f(), &f(), d).unwrap();
            assert_eq!(sys.max_abs_residual(&LinearCandidate::identity(2)), 0.0);
        }
    }

    #[test]
    fn permutation_reduces_to_weight_matching() {
        let h = Symbol::from_pairs(3, &[("1", 1.0), ("2", 1.0), ("3", 1.0), ("12", 0.7), ("31", 0.2), ("223", 1.3)]).unwrap();
        let other = Symbol::from_pairs(3, &[("1", 1.0), ("2", 1.0), ("3", 1.0), ("13", 0.4), ("32", 2.0)]).unwrap();
        let sigma = [1, 2, 0];
        let pm = LinearCandidate::permutation(&sigma).unwrap();
        for d in 1..=3 {
            let sys = degree_d_constraints(&h, &other, d).unwrap();
            let bf = compute_weights(&h, d).unwrap();
            let bg = compute_weights(&other, d).unwrap();
            for c in 0..sys.len() {
                let beta = sys.beta(c);
                let image = beta.relabel(&sigma);
                let expected = 1.0 / bf.get(beta).unwrap() - 1.0 / bg.get(&image).unwrap();
                assert!((sys.residual(c, &pm) - expected).abs() < 1e-15, "{beta}");
            }
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let scaled = Symbol::from_pairs(2, &[("1", 2.0), ("2", 1.0)]).unwrap();
        assert_eq!(degree_d_constraints(&scaled, &f(), 2).unwrap_err(), Error::NotNormalized);
        assert!(degree_d_constraints(&f(), &Symbol::linear(3), 2).is_err());
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let h = Symbol::from_pairs(3, &[("1", 1.0), ("2", 1.0), ("3", 1.0), ("12", 0.7), ("31", 0.2)]).unwrap();
        let sys = degree_d_constraints(&h, &Symbol::linear(3), 2).unwrap();
        let base = vec![0.2, 0.3, 0.5, 0.5, 0.1, 0.4, 0.3, 0.6, 0.1];
        let (mut r, mut jac) = (Vec::new(), Vec::new());
        sys.residuals_and_jacobian(&LinearCandidate::from_flat(3, base.clone()), &mut r, &mut jac);
        let residual = |v: &[f64], c: usize| sys.residual(c, &LinearCandidate::from_flat(3, v.to_vec()));
        for c in 0..sys.len() {
            assert!((r[c] - residual(&base, c)).abs() < 1e-15);
            for k in 0..9 {
                let mut hi = base.clone();
                let mut lo = base.clone();
                hi[k] += 1e-6;
                lo[k] -= 1e-6;
                let fd = (residual(&hi, c) - residual(&lo, c)) / 2e-6;
                assert!((fd - jac[c][k]).abs() < 1e-8, "{c} {k}: {fd} vs {}", jac[c][k]);
            }
        }
    }
}
