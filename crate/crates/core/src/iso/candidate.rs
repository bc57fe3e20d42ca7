use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::invert_permutation;

/// Tolerance on row and column sums for a candidate to count as doubly stochastic.
pub const STOCHASTIC_TOL: f64 = 1e-9;

/// A doubly stochastic matrix `p_ij = |m_ij|²` standing in for a unitary `M`
/// in `Φ(W_i^f) = Σ_j m_ij W_j^g`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCandidate {
    n: usize,
    p: Vec<f64>,
}

impl LinearCandidate {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("candidate must be a nonempty square matrix".into()));
        }
        let p: Vec<f64> = rows.into_iter().flatten().collect();
        if p.iter().any(|&x| !(-STOCHASTIC_TOL..=1.0 + STOCHASTIC_TOL).contains(&x)) {
            return Err(Error::Invalid("candidate entries must lie in [0, 1]".into()));
        }
        let cand = LinearCandidate { n, p };
        let worst = cand.stochastic_residuals().into_iter().fold(0.0, |a: f64, r| a.max(r.abs()));
        if worst > STOCHASTIC_TOL {
            return Err(Error::Invalid(format!("candidate is not doubly stochastic (sum error {worst:e})")));
        }
        Ok(cand)
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_flat(n: usize, p: Vec<f64>) -> Self {
        LinearCandidate { n, p }
    }

    pub fn identity(n: usize) -> Self {
        LinearCandidate::from_flat(n, (0..n * n).map(|k| if k / n == k % n { 1.0 } else { 0.0 }).collect())
    }

    /// `P[i][σ(i)] = 1`, zero-based `σ`.
    pub fn permutation(sigma: &[usize]) -> Result<Self> {
        let n = sigma.len();
        invert_permutation(sigma, n)?;
        let mut p = vec![0.0; n * n];
        for (i, &s) in sigma.iter().enumerate() {
            p[i * n + s] = 1.0;
        }
        Ok(LinearCandidate { n, p })
    }

    /// The two-letter family `[[p, 1-p], [1-p, p]]`.
    pub fn two_letter(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Invalid(format!("p = {p} outside [0, 1]")));
        }
        Ok(LinearCandidate::from_flat(2, vec![p, 1.0 - p, 1.0 - p, p]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n + j]
    }

    pub fn flat(&self) -> &[f64] {
        &self.p
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.p.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Row sums minus one, then column sums minus one: the `2n` equalities.
    pub fn stochastic_residuals(&self) -> Vec<f64> {
        let n = self.n;
        let rows = (0..n).map(|i| (0..n).map(|j| self.get(i, j)).sum::<f64>() - 1.0);
        let cols = (0..n).map(|j| (0..n).map(|i| self.get(i, j)).sum::<f64>() - 1.0);
        rows.chain(cols).collect()
    }

    /// `Some(σ)` when the matrix is exactly a permutation matrix.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if self.p.iter().any(|&x| x != 0.0 && x != 1.0) {
            return None;
        }
        let sigma: Vec<usize> = (0..self.n).map(|i| (0..self.n).find(|&j| self.get(i, j) == 1.0)).collect::<Option<_>>()?;
        invert_permutation(&sigma, self.n).ok().map(|_| sigma)
    }
}

impl fmt::Display for LinearCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.12}")).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
