//! Real polynomials in one variable on `[0, 1]`.

use std::ops::{Add, Mul};

/// Coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Univariate(pub Vec<f64>);

/// Zero set of a polynomial restricted to `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum ZeroSet {
    Points(Vec<f64>),
    /// The polynomial vanishes identically (all coefficients below 1e-12).
    Everywhere,
}

impl ZeroSet {
    /// True when every zero lies within `tol` of one of `allowed`.
    pub fn within(&self, allowed: &[f64], tol: f64) -> bool {
        match self {
            ZeroSet::Everywhere => false,
            ZeroSet::Points(ps) => ps.iter().all(|p| allowed.iter().any(|a| (p - a).abs() <= tol)),
        }
    }
}

impl Univariate {
    pub fn constant(v: f64) -> Self {
        Univariate(vec![v])
    }

    /// `p`
    pub fn x() -> Self {
        Univariate(vec![0.0, 1.0])
    }

    /// `1 - p`
    pub fn one_minus_x() -> Self {
        Univariate(vec![1.0, -1.0])
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, p: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * p + c)
    }

    /// `Σ_k k |c_k|`, a Lipschitz constant on `[0, 1]`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.0.iter().enumerate().map(|(k, c)| k as f64 * c.abs()).sum()
    }

    /// Bound on the rounding error of [`Univariate::eval`] on `[0, 1]`.
    pub fn eval_error_bound(&self) -> f64 {
        let scale: f64 = self.0.iter().map(|c| c.abs()).sum();
        4.0 * (self.0.len() as f64 + 1.0) * f64::EPSILON * scale
    }

    pub fn is_negligible(&self) -> bool {
        self.0.iter().all(|c| c.abs() < 1e-12)
    }

    /// Zeros on `[0, 1]`, located on a grid of `resolution` points.
    ///
    /// Sign changes are refined by bisection. Grid points where `|r| ≤ tol`
    /// are refined by golden-section minimisation of `|r|` over the adjacent
    /// cells, which also catches double roots.
    pub fn zeros_in_unit_interval(&self, resolution: usize, tol: f64) -> ZeroSet {
        if self.is_negligible() {
            return ZeroSet::Everywhere;
        }
        let res = resolution.max(2);
        let grid: Vec<f64> = (0..res).map(|k| k as f64 / (res - 1) as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&p| self.eval(p)).collect();
        let mut roots: Vec<f64> = Vec::new();
        for k in 0..res {
            if vals[k] == 0.0 {
                roots.push(grid[k]);
            }
            if k + 1 < res && vals[k] * vals[k + 1] < 0.0 {
                roots.push(self.bisect(grid[k], grid[k + 1]));
            }
        }
        for k in 0..res {
            if vals[k].abs() <= tol {
                let lo = grid[k.saturating_sub(1)];
                let hi = grid[(k + 1).min(res - 1)];
                let p = self.minimise_abs(lo, hi);
                if self.eval(p).abs() <= tol {
                    roots.push(p);
                }
            }
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|a, b| (*a - *b).abs() <= tol.max(1e-12));
        ZeroSet::Points(roots)
    }

    fn bisect(&self, mut lo: f64, mut hi: f64) -> f64 {
        let sign_lo = self.eval(lo).signum();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid).signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn minimise_abs(&self, mut lo: f64, mut hi: f64) -> f64 {
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let f = |p: f64| self.eval(p).abs();
        let mut best = if f(lo) <= f(hi) { lo } else { hi };
        for _ in 0..200 {
            if hi - lo < 1e-15 {
                break;
            }
            let a = hi - phi * (hi - lo);
            let b = lo + phi * (hi - lo);
            if f(a) <= f(b) {
                hi = b;
            } else {
                lo = a;
            }
            let mid = 0.5 * (lo + hi);
            if f(mid) < f(best) {
                best = mid;
            }
        }
        best
    }
}

impl std::fmt::Display for Univariate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let sign = if c < 0.0 { "-" } else { "+" };
            match (first, sign) {
                (true, "-") => f.write_str("-")?,
                (true, _) => {}
                (false, s) => write!(f, " {s} ")?,
            }
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}·p")?,
                _ => write!(f, "{mag}·p^{k}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Add for &Univariate {
    type Output = Univariate;
    fn add(self, rhs: &Univariate) -> Univariate {
        let len = self.0.len().max(rhs.0.len());
        Univariate(
            (0..len)
                .map(|k| self.0.get(k).copied().unwrap_or(0.0) + rhs.0.get(k).copied().unwrap_or(0.0))
                .collect(),
        )
    }
}

impl Mul for &Univariate {
    type Output = Univariate;
    fn mul(self, rhs: &Univariate) -> Univariate {
        let mut out = vec![0.0; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Univariate(out)
    }
}

impl Mul<f64> for &Univariate {
    type Output = Univariate;
    fn mul(self, rhs: f64) -> Univariate {
        Univariate(self.0.iter().map(|c| c * rhs).collect())
    }
}
