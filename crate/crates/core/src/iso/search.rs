//! Feasibility search over doubly stochastic `P` for the degree `≤ d_max` constraints.
//!
//! `n = 2`: `P = [[p, 1-p], [1-p, p]]` and every residual is a polynomial in
//! `p`. A grid of `resolution` points with cell half-width `h` bounds
//! `max_c |r_c|` from below on each cell by `|r_c(p_k)| - Lip_c·h - ε_c`, where
//! `Lip_c = Σ k|coeff_k|` and `ε_c` bounds the rounding of the evaluation. A
//! positive minimum over cells is a verified obstruction.
//!
//! `n ≥ 3`: a left-hand side is a convex combination of the `1/b^g_α`, so a
//! target outside their range obstructs. Otherwise permutation matrices are
//! checked exactly, then seeded random restarts run a Levenberg–Marquardt
//! descent whose steps are projected back onto the Birkhoff polytope.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::sampling;
use crate::symbol::Symbol;
use crate::words::Word;

use super::candidate::LinearCandidate;
use super::constraints::{degree_d_constraints, ConstraintSystem};
use super::permutations::Permutations;
use super::univariate::{Univariate, ZeroSet};

/// A candidate is accepted when every residual is at most this.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Obstructed,
    CandidateFound,
    Inconclusive,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Obstructed => "Obstructed",
            Outcome::CandidateFound => "CandidateFound",
            Outcome::Inconclusive => "Inconclusive",
        })
    }
}

/// How an obstruction bound was obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundMethod {
    /// Lipschitz enclosure on a grid over `p ∈ [0, 1]` (`n = 2`).
    Grid {
        resolution: usize,
        half_width: f64,
        /// Smallest `max_c |r_c|` seen at a grid point, and where.
        grid_minimum: f64,
        argmin: f64,
    },
    /// The target of `beta` lies outside the range of `1/b^g_α` (`n ≥ 3`).
    Hull { beta: Word, target: f64, range: (f64, f64) },
    /// `n = 1`: the only candidate is `P = [1]`.
    Exact { beta: Word },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// No doubly stochastic `P` satisfies the constraints of degree `≤ degree`:
    /// the largest residual is at least `lower_bound > 0` everywhere.
    Obstructed { degree: usize, lower_bound: f64, method: BoundMethod },
    CandidateFound { candidate: LinearCandidate, max_residual: f64 },
    Inconclusive { best_residual: f64, best: Option<LinearCandidate> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeSummary {
    pub degree: usize,
    pub constraints: usize,
    /// Range of `1/b^f_β`.
    pub target_range: (f64, f64),
    /// Range of `1/b^g_α`.
    pub hull: (f64, f64),
    /// Largest residual at `P = I`.
    pub identity_residual: f64,
}

/// One two-letter constraint as a polynomial in `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariateConstraint {
    pub degree: usize,
    pub beta: Word,
    pub target: f64,
    pub residual: Univariate,
    pub zeros: ZeroSet,
}

/// Norm-level violations at one value of `p`, worst first.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointCheck {
    pub p: f64,
    pub violations: Vec<(Word, f64)>,
}

impl EndpointCheck {
    pub fn worst(&self) -> Option<&(Word, f64)> {
        self.violations.first()
    }
}

/// The `n = 2` picture: each residual polynomial with its zeros, and the
/// violations at the permutation endpoints `p = 0, 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoLetterAnalysis {
    pub constraints: Vec<UnivariateConstraint>,
    pub endpoints: Vec<EndpointCheck>,
}

impl TwoLetterAnalysis {
    pub fn constraint(&self, beta: &Word) -> Option<&UnivariateConstraint> {
        self.constraints.iter().find(|c| &c.beta == beta)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionVerdict {
    pub certificate: Certificate,
    pub degrees: Vec<DegreeSummary>,
    pub two_letter: Option<TwoLetterAnalysis>,
}

impl ObstructionVerdict {
    pub fn outcome(&self) -> Outcome {
        match self.certificate {
            Certificate::Obstructed { .. } => Outcome::Obstructed,
            Certificate::CandidateFound { .. } => Outcome::CandidateFound,
            Certificate::Inconclusive { .. } => Outcome::Inconclusive,
        }
    }
}

/// Settings for the `n ≥ 3` random-restart phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { seed: 0, restarts: 8, iterations: 200 }
    }
}

/// Decides whether the degree `2..=d_max` norm constraints admit a doubly
/// stochastic `P`.
///
/// These are necessary conditions for an isometric isomorphism whose dual map
/// fixes the origin. That hypothesis is not checked here; see
/// [`super::zero_fixing_known`]. `CandidateFound` says nothing about existence.
pub fn obstruction_search(f: &Symbol, g: &Symbol, d_max: usize, resolution: usize) -> Result<ObstructionVerdict> {
    obstruction_search_with(f, g, d_max, resolution, &SearchOptions::default())
}

pub fn obstruction_search_with(
    f: &Symbol,
    g: &Symbol,
    d_max: usize,
    resolution: usize,
    opts: &SearchOptions,
) -> Result<ObstructionVerdict> {
    if d_max < 2 {
        return Err(Error::Invalid(format!("d_max must be at least 2, got {d_max}")));
    }
    if resolution < 2 {
        return Err(Error::Invalid(format!("resolution must be at least 2, got {resolution}")));
    }
    let systems = (2..=d_max).map(|d| degree_d_constraints(f, g, d)).collect::<Result<Vec<_>>>()?;
    let degrees = systems
        .iter()
        .map(|s| DegreeSummary {
            degree: s.degree(),
            constraints: s.len(),
            target_range: s.target_range(),
            hull: s.hull(),
            identity_residual: s.max_abs_residual(&LinearCandidate::identity(s.n())),
        })
        .collect();
    let (certificate, two_letter) = match f.n() {
        1 => (single_letter(&systems), None),
        2 => {
            let (cert, analysis) = two_letter(&systems, resolution);
            (cert, Some(analysis))
        }
        _ => (many_letters(&systems, opts), None),
    };
    Ok(ObstructionVerdict { certificate, degrees, two_letter })
}

fn max_residual(systems: &[ConstraintSystem], p: &LinearCandidate) -> f64 {
    systems.iter().map(|s| s.max_abs_residual(p)).fold(0.0, f64::max)
}

fn single_letter(systems: &[ConstraintSystem]) -> Certificate {
    let one = LinearCandidate::identity(1);
    for s in systems {
        let r = s.residual(0, &one).abs();
        if r - 4.0 * f64::EPSILON > FEASIBILITY_TOL {
            return Certificate::Obstructed {
                degree: s.degree(),
                lower_bound: r - 4.0 * f64::EPSILON,
                method: BoundMethod::Exact { beta: s.beta(0).clone() },
            };
        }
    }
    Certificate::CandidateFound { max_residual: max_residual(systems, &one), candidate: one }
}

fn two_letter(systems: &[ConstraintSystem], resolution: usize) -> (Certificate, TwoLetterAnalysis) {
    let grid: Vec<f64> = (0..resolution).map(|k| k as f64 / (resolution - 1) as f64).collect();
    let half_width = 0.5 / (resolution - 1) as f64;
    // Per cell: the best lower bound on max_c |r_c| so far, and max_c |r_c(p_k)|.
    let mut cell_bound = vec![f64::NEG_INFINITY; resolution];
    let mut point_max = vec![0.0f64; resolution];
    let mut constraints = Vec::new();
    let mut certificate = None;

    for s in systems {
        for c in 0..s.len() {
            let poly = s.univariate(c).expect("n = 2");
            let slack = poly.lipschitz_bound() * half_width + poly.eval_error_bound();
            for (k, &p) in grid.iter().enumerate() {
                let v = poly.eval(p).abs();
                point_max[k] = point_max[k].max(v);
                cell_bound[k] = cell_bound[k].max(v - slack);
            }
            constraints.push(UnivariateConstraint {
                degree: s.degree(),
                beta: s.beta(c).clone(),
                target: s.target(c),
                zeros: poly.zeros_in_unit_interval(resolution, FEASIBILITY_TOL),
                residual: poly,
            });
        }
        let lower_bound = cell_bound.iter().copied().fold(f64::INFINITY, f64::min);
        if lower_bound > 0.0 {
            let (argmin, grid_minimum) = grid
                .iter()
                .zip(&point_max)
                .fold((0.0, f64::INFINITY), |best, (&p, &v)| if v < best.1 { (p, v) } else { best });
            certificate = Some(Certificate::Obstructed {
                degree: s.degree(),
                lower_bound,
                method: BoundMethod::Grid { resolution, half_width, grid_minimum, argmin },
            });
            break;
        }
    }

    let used = match &certificate {
        Some(Certificate::Obstructed { degree, .. }) => &systems[..degree - 1],
        _ => systems,
    };
    let endpoints = [0.0, 1.0]
        .iter()
        .map(|&p| {
            let cand = &LinearCandidate::two_letter(p).expect("in range");
            let mut violations: Vec<(Word, f64)> = used
                .iter()
                .flat_map(|s| (0..s.len()).map(move |c| (s.beta(c).clone(), s.norm_violation(c, cand))))
                .collect();
            violations.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            EndpointCheck { p, violations }
        })
        .collect();
    let analysis = TwoLetterAnalysis { constraints, endpoints };

    let certificate = certificate.unwrap_or_else(|| {
        let mut points = grid.clone();
        for c in &analysis.constraints {
            if let ZeroSet::Points(ps) = &c.zeros {
                points.extend(ps);
            }
        }
        let (best_p, best_r) = points
            .iter()
            .map(|&p| (p, max_residual(systems, &LinearCandidate::two_letter(p).expect("in range"))))
            .fold((0.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        let best = LinearCandidate::two_letter(best_p).expect("in range");
        if best_r <= FEASIBILITY_TOL {
            Certificate::CandidateFound { candidate: best, max_residual: best_r }
        } else {
            Certificate::Inconclusive { best_residual: best_r, best: Some(best) }
        }
    });
    (certificate, analysis)
}

fn many_letters(systems: &[ConstraintSystem], opts: &SearchOptions) -> Certificate {
    for s in systems {
        let (lo, hi) = s.hull();
        let worst = (0..s.len())
            .map(|c| {
                let t = s.target(c);
                (c, (lo - t).max(t - hi))
            })
            .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
        // Allow for rounding in the reciprocals of the weights.
        let lower_bound = worst.1 - 8.0 * f64::EPSILON;
        if lower_bound > 0.0 {
            return Certificate::Obstructed {
                degree: s.degree(),
                lower_bound,
                method: BoundMethod::Hull { beta: s.beta(worst.0).clone(), target: s.target(worst.0), range: (lo, hi) },
            };
        }
    }

    let n = systems[0].n();
    let mut best: Option<(LinearCandidate, f64)> = None;
    for sigma in Permutations::new(n) {
        let cand = LinearCandidate::permutation(&sigma).expect("valid permutation");
        let r = max_residual(systems, &cand);
        if r <= FEASIBILITY_TOL {
            return Certificate::CandidateFound { candidate: cand, max_residual: r };
        }
        if best.as_ref().is_none_or(|b| r < b.1) {
            best = Some((cand, r));
        }
    }

    let mut rng = sampling::rng(opts.seed);
    for _ in 0..opts.restarts {
        let start: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>() + 0.05).collect();
        let cand = descend(systems, sinkhorn(n, start), opts.iterations);
        let r = max_residual(systems, &cand);
        let stochastic = cand.stochastic_residuals().into_iter().fold(0.0, |a: f64, x| a.max(x.abs()));
        if r <= FEASIBILITY_TOL && stochastic <= super::candidate::STOCHASTIC_TOL {
            return Certificate::CandidateFound { candidate: cand, max_residual: r };
        }
        if best.as_ref().is_none_or(|b| r < b.1) {
            best = Some((cand, r));
        }
    }
    let (cand, r) = best.expect("at least one permutation");
    Certificate::Inconclusive { best_residual: r, best: Some(cand) }
}

fn residuals(systems: &[ConstraintSystem], p: &LinearCandidate) -> (Vec<f64>, Vec<Vec<f64>>) {
    let (mut r, mut jac) = (Vec::new(), Vec::new());
    for s in systems {
        s.residuals_and_jacobian(p, &mut r, &mut jac);
    }
    (r, jac)
}

/// Projection onto matrices with zero row and column sums.
fn tangent_projection(n: usize, x: &mut [f64]) {
    let rows: Vec<f64> = (0..n).map(|i| x[i * n..(i + 1) * n].iter().sum::<f64>() / n as f64).collect();
    let cols: Vec<f64> = (0..n).map(|j| (0..n).map(|i| x[i * n + j]).sum::<f64>() / n as f64).collect();
    let mean = rows.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            x[i * n + j] -= rows[i] + cols[j] - mean;
        }
    }
}

/// Euclidean projection onto the Birkhoff polytope by Dykstra's algorithm,
/// alternating the affine set of unit row and column sums with `P ≥ 0`.
fn birkhoff_projection(n: usize, y: &[f64]) -> LinearCandidate {
    let affine = |v: &mut [f64]| {
        let rows: Vec<f64> = (0..n).map(|i| v[i * n..(i + 1) * n].iter().sum::<f64>() - 1.0).collect();
        let cols: Vec<f64> = (0..n).map(|j| (0..n).map(|i| v[i * n + j]).sum::<f64>() - 1.0).collect();
        let total = rows.iter().sum::<f64>();
        for i in 0..n {
            for j in 0..n {
                v[i * n + j] -= (rows[i] + cols[j]) / n as f64 - total / (n * n) as f64;
            }
        }
    };
    let mut x = y.to_vec();
    let mut p = vec![0.0; n * n];
    let mut q = vec![0.0; n * n];
    for _ in 0..10_000 {
        let mut a: Vec<f64> = x.iter().zip(&p).map(|(x, p)| x + p).collect();
        affine(&mut a);
        for k in 0..n * n {
            p[k] += x[k] - a[k];
        }
        let mut change: f64 = 0.0;
        for k in 0..n * n {
            let next = (a[k] + q[k]).max(0.0);
            q[k] += a[k] - next;
            change = change.max((next - x[k]).abs());
            x[k] = next;
        }
        if change < 1e-16 {
            break;
        }
    }
    LinearCandidate::from_flat(n, x)
}

/// Levenberg–Marquardt on the residuals, with steps taken in the tangent
/// space of the polytope and then projected back onto it.
fn descend(systems: &[ConstraintSystem], mut p: LinearCandidate, iterations: usize) -> LinearCandidate {
    let n = p.n();
    let dim = n * n;
    let (mut r, mut jac) = residuals(systems, &p);
    let mut value: f64 = r.iter().map(|x| x * x).sum();
    let mut mu = 1e-3;
    for _ in 0..iterations {
        if r.iter().all(|x| x.abs() <= 1e-13) || mu > 1e12 {
            break;
        }
        for row in jac.iter_mut() {
            tangent_projection(n, row);
        }
        let j = DMatrix::from_fn(r.len(), dim, |a, b| jac[a][b]);
        let mut normal = j.transpose() * &j;
        for k in 0..dim {
            normal[(k, k)] += mu;
        }
        let rhs = -(j.transpose() * DVector::from_column_slice(&r));
        let Some(step) = normal.cholesky().map(|ch| ch.solve(&rhs)) else {
            mu *= 10.0;
            continue;
        };
        let moved: Vec<f64> = p.flat().iter().zip(step.iter()).map(|(x, s)| x + s).collect();
        let trial = birkhoff_projection(n, &moved);
        let (tr, tj) = residuals(systems, &trial);
        let tv: f64 = tr.iter().map(|x| x * x).sum();
        if tv < value {
            (p, r, jac, value) = (trial, tr, tj, tv);
            mu = (mu / 3.0).max(1e-15);
        } else {
            mu *= 4.0;
            jac = residuals(systems, &p).1;
        }
    }
    p
}

/// Alternating row and column normalisation.
fn sinkhorn(n: usize, mut p: Vec<f64>) -> LinearCandidate {
    for _ in 0..10_000 {
        for i in 0..n {
            let s: f64 = p[i * n..(i + 1) * n].iter().sum();
            if s > 0.0 {
                p[i * n..(i + 1) * n].iter_mut().for_each(|x| *x /= s);
            }
        }
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let s: f64 = (0..n).map(|i| p[i * n + j]).sum();
            if s > 0.0 {
                (0..n).for_each(|i| p[i * n + j] /= s);
            }
            worst = worst.max((s - 1.0).abs());
        }
        if worst < 1e-14 {
            break;
        }
    }
    LinearCandidate::from_flat(n, p)
}
