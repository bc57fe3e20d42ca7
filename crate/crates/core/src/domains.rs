//! Membership in the matrix domains `D_f(C^k)` and the scalar domain `D_f¹`.
//!
//! A tuple `T` lies in `D_f(C^k)` when `I - Σ a_α T_α T_α* ≥ 0`. Every verdict
//! carries the least eigenvalue of that defect as its margin and classifies it
//! against a tolerance band: `Interior` above `tol`, `Outside` below `-tol`,
//! `Boundary` in between.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, format_matrix_rows, identity, is_finite, min_eigenvalue, CMatrix};
use crate::symbol::{CollapsedPolynomial, Symbol};
use crate::textfmt::{content_lines, header_value, parse_complex, parse_err};
use crate::words::Word;

pub const DEFAULT_TOL: f64 = 1e-9;

/// An `n`-tuple of `k × k` complex matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    mats: Vec<CMatrix>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::Dimension("a tuple needs at least one matrix".into()));
        };
        let k = first.nrows();
        if k == 0 {
            return Err(Error::Dimension("matrices must be at least 1x1".into()));
        }
        for (i, m) in mats.iter().enumerate() {
            if m.nrows() != k || m.ncols() != k {
                return Err(Error::Dimension(format!(
                    "matrix {} is {}x{}, expected {k}x{k}",
                    i + 1,
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(MatrixTuple { mats })
    }

    pub fn zeros(n: usize, k: usize) -> Self {
        MatrixTuple { mats: vec![CMatrix::zeros(k, k); n] }
    }

    /// The `k = 1` tuple of a point `z ∈ C^n`.
    pub fn from_scalars(z: &[Complex64]) -> Result<Self> {
        MatrixTuple::new(z.iter().map(|&zi| CMatrix::from_element(1, 1, zi)).collect())
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    pub fn k(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn get(&self, i: usize) -> &CMatrix {
        &self.mats[i]
    }

    pub fn mats(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn is_finite(&self) -> bool {
        self.mats.iter().all(is_finite)
    }

    /// `(ωT₁, …, ωT_n)`.
    pub fn scaled(&self, omega: Complex64) -> MatrixTuple {
        MatrixTuple { mats: self.mats.iter().map(|m| m * omega).collect() }
    }

    /// `T_α = T_{i₁} ⋯ T_{i_k}`, with `T_e = I`.
    pub fn word_product(&self, word: &Word) -> CMatrix {
        word.letters().fold(identity(self.k()), |acc, l| acc * &self.mats[l])
    }

    /// `Σ_i T_i T_i*`.
    pub fn row_gram(&self) -> CMatrix {
        self.mats.iter().fold(CMatrix::zeros(self.k(), self.k()), |acc, m| acc + m * m.adjoint())
    }

    /// Parses the tuple file format: header `n=<int> k=<int>`, then `n` blocks of
    /// `k` rows with `k` whitespace-separated complex entries.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header n=<int> k=<int>"))?;
        let n = header_value(hline, header, "n")?;
        let k = header_value(hline, header, "k")?;
        if n == 0 || k == 0 {
            return Err(parse_err(hline, "n and k must be positive"));
        }
        let mut mats = Vec::with_capacity(n);
        for _ in 0..n {
            let mut m = CMatrix::zeros(k, k);
            for r in 0..k {
                let (line, body) = lines
                    .next()
                    .ok_or_else(|| parse_err(hline, format!("expected {} matrix rows", n * k)))?;
                let entries: Vec<&str> = body.split_whitespace().collect();
                if entries.len() != k {
                    return Err(parse_err(line, format!("expected {k} entries, found {}", entries.len())));
                }
                for (col, e) in entries.iter().enumerate() {
                    let z = parse_complex(e).ok_or_else(|| parse_err(line, format!("invalid complex entry {e:?}")))?;
                    if !(z.re.is_finite() && z.im.is_finite()) {
                        return Err(parse_err(line, format!("non-finite entry {e:?}")));
                    }
                    m[(r, col)] = z;
                }
            }
            mats.push(m);
        }
        if let Some((line, _)) = lines.next() {
            return Err(parse_err(line, "unexpected trailing content"));
        }
        MatrixTuple::new(mats)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("n={} k={}\n", self.n(), self.k());
        for (i, m) in self.mats.iter().enumerate() {
            out.push_str(&format!("# T{}\n", i + 1));
            out.push_str(&format_matrix_rows(m));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Interior,
    Boundary,
    Outside,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Interior => "interior",
            Status::Boundary => "boundary",
            Status::Outside => "outside",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MembershipVerdict {
    pub status: Status,
    /// Least eigenvalue of the defect (`1 - value` in the scalar case).
    pub margin: f64,
}

impl MembershipVerdict {
    pub fn classify(margin: f64, tol: f64) -> Self {
        let status = if margin > tol {
            Status::Interior
        } else if margin < -tol {
            Status::Outside
        } else {
            Status::Boundary
        };
        MembershipVerdict { status, margin }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("tolerance must be positive, got {tol}")))
    }
}

/// `I - Σ_{α ∈ supp f} a_α T_α T_α*`.
pub fn defect_matrix(sym: &Symbol, t: &MatrixTuple) -> Result<CMatrix> {
    sym.validate()?;
    if t.n() != sym.n() {
        return Err(Error::Dimension(format!("symbol has {} variables, tuple has {}", sym.n(), t.n())));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut d = identity(t.k());
    for (w, a) in sym.terms() {
        let ta = t.word_product(w);
        d -= (&ta * ta.adjoint()) * c(a, 0.0);
    }
    Ok(d)
}

pub fn domain_membership(sym: &Symbol, t: &MatrixTuple, tol: f64) -> Result<MembershipVerdict> {
    check_tol(tol)?;
    let d = defect_matrix(sym, t)?;
    Ok(MembershipVerdict::classify(min_eigenvalue(&d), tol))
}

pub fn scalar_membership(cp: &CollapsedPolynomial, z: &[Complex64], tol: f64) -> MembershipVerdict {
    let moduli: Vec<f64> = z.iter().map(|zi| zi.norm()).collect();
    MembershipVerdict::classify(1.0 - cp.value_at_moduli(&moduli), tol)
}

/// Outcome of an invariance sweep.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct InvarianceReport {
    pub samples: usize,
    pub status_flips: usize,
    pub max_margin_drift: f64,
}

impl InvarianceReport {
    fn record(&mut self, before: MembershipVerdict, after: MembershipVerdict) {
        self.samples += 1;
        if before.status != after.status {
            self.status_flips += 1;
        }
        self.max_margin_drift = self.max_margin_drift.max((before.margin - after.margin).abs());
    }

    pub fn passed(&self, drift_tol: f64) -> bool {
        self.status_flips == 0 && self.max_margin_drift <= drift_tol
    }
}

/// Compares `z` with `(ω₁z₁, …, ω_n z_n)` for each `(z, ω)` sample at `k = 1`.
pub fn reinhardt_check(
    sym: &Symbol,
    samples: &[(Vec<Complex64>, Vec<Complex64>)],
    tol: f64,
) -> Result<InvarianceReport> {
    let mut report = InvarianceReport::default();
    for (z, omega) in samples {
        if omega.len() != z.len() {
            return Err(Error::Dimension("phase vector length differs from point".into()));
        }
        let rotated: Vec<Complex64> = z.iter().zip(omega).map(|(zi, wi)| zi * wi).collect();
        let before = domain_membership(sym, &MatrixTuple::from_scalars(z)?, tol)?;
        let after = domain_membership(sym, &MatrixTuple::from_scalars(&rotated)?, tol)?;
        report.record(before, after);
    }
    Ok(report)
}

/// Compares `T` with `ωT` for each `(T, ω)` sample.
pub fn circular_check(sym: &Symbol, samples: &[(MatrixTuple, Complex64)], tol: f64) -> Result<InvarianceReport> {
    let mut report = InvarianceReport::default();
    for (t, omega) in samples {
        let before = domain_membership(sym, t, tol)?;
        let after = domain_membership(sym, &t.scaled(*omega), tol)?;
        report.record(before, after);
    }
    Ok(report)
}

/// Boundary curve of the scalar domain in the `(|z_i|, |z_j|)` plane, other coordinates zero.
///
/// For each of `resolution` evenly spaced `x ∈ [0, 1]` returns the largest `y ≥ 0`
/// with value `≤ 1`, found by bisection. Infeasible `x` are skipped. Axes are zero-based.
pub fn boundary_slice(cp: &CollapsedPolynomial, axes: (usize, usize), resolution: usize) -> Result<Vec<(f64, f64)>> {
    let (i, j) = axes;
    let n = cp.n();
    if n < 2 || i >= n || j >= n || i == j {
        return Err(Error::Invalid(format!("invalid axis pair ({}, {}) for n = {n}", i + 1, j + 1)));
    }
    if resolution < 2 {
        return Err(Error::Invalid("resolution must be at least 2".into()));
    }
    let value = |x: f64, y: f64| {
        let mut r = vec![0.0; n];
        r[i] = x;
        r[j] = y;
        cp.value_at_moduli(&r)
    };
    let mut points = Vec::with_capacity(resolution);
    for step in 0..resolution {
        let x = step as f64 / (resolution - 1) as f64;
        if value(x, 0.0) > 1.0 {
            continue;
        }
        let mut hi = 1.0;
        while value(x, hi) <= 1.0 {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::Invalid(format!("slice is unbounded along axis {}", j + 1)));
            }
        }
        let mut lo = 0.0;
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if value(x, mid) <= 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        points.push((x, lo));
    }
    Ok(points)
}

/// The `k = 2` packing `T₁ = [[λ₁, λ₂], [λ₅, λ₆]]`, `T₂ = [[λ₃, λ₄], [λ₇, λ₈]]`.
pub fn pack_c8(lambda: &[Complex64; 8]) -> MatrixTuple {
    let l = lambda;
    let t1 = CMatrix::from_row_slice(2, 2, &[l[0], l[1], l[4], l[5]]);
    let t2 = CMatrix::from_row_slice(2, 2, &[l[2], l[3], l[6], l[7]]);
    MatrixTuple::new(vec![t1, t2]).expect("2x2 blocks")
}

/// The two displayed scalar inequalities for the `k = 2` ball of two variables,
/// evaluated literally: returns `(q₁, q₂)`, both required to be `≤ 1`.
pub fn c8_displayed_quantities(lambda: &[Complex64; 8]) -> (f64, f64) {
    let l = lambda;
    let q1: f64 = l[..4].iter().map(|z| z.norm_sqr()).sum();
    let total: f64 = l.iter().map(|z| z.norm_sqr()).sum();
    let mut pairs = 0.0;
    for i in 0..8 {
        for j in i + 1..8 {
            pairs += (l[i] * l[j]).norm_sqr();
        }
    }
    let mut cross = 0.0;
    for i in 0..3 {
        for j in i + 1..4 {
            cross += (l[i] * l[j].conj() + l[i + 4].conj() * l[j + 4]).norm_sqr();
        }
    }
    (q1, total - pairs + cross)
}

/// Two-route verdict for a point of `C⁸` viewed as a pair of `2 × 2` matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C8Audit {
    /// From the displayed inequalities, margin `min(1 - q₁, 1 - q₂)`.
    pub displayed: MembershipVerdict,
    /// From the least eigenvalue of `I - T₁T₁* - T₂T₂*`.
    pub eigen: MembershipVerdict,
    pub agree: bool,
}

pub fn ball_domain_c8(lambda: &[Complex64; 8], tol: f64) -> Result<C8Audit> {
    check_tol(tol)?;
    let (q1, q2) = c8_displayed_quantities(lambda);
    let displayed = MembershipVerdict::classify((1.0 - q1).min(1.0 - q2), tol);
    let eigen = domain_membership(&Symbol::linear(2), &pack_c8(lambda), tol)?;
    Ok(C8Audit { displayed, eigen, agree: displayed.status == eigen.status })
}

/// Aggregate of a batch of [`ball_domain_c8`] calls.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct C8AgreementSummary {
    pub samples: usize,
    pub agreements: usize,
    /// Displayed route says inside/boundary, eigenvalue route says outside.
    pub displayed_looser: usize,
    /// Displayed route says outside, eigenvalue route says inside/boundary.
    pub displayed_stricter: usize,
}

impl C8AgreementSummary {
    pub fn push(&mut self, audit: &C8Audit) {
        self.samples += 1;
        if audit.agree {
            self.agreements += 1;
        } else if audit.eigen.status == Status::Outside {
            self.displayed_looser += 1;
        } else if audit.displayed.status == Status::Outside {
            self.displayed_stricter += 1;
        }
    }

    pub fn rate(&self) -> f64 {
        if self.samples == 0 {
            1.0
        } else {
            self.agreements as f64 / self.samples as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    fn f() -> Symbol {
        Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("12", 1.0)]).unwrap()
    }

    fn scalars(v: &[f64]) -> MatrixTuple {
        MatrixTuple::from_scalars(&v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let v = domain_membership(&f(), &MatrixTuple::zeros(2, 3), DEFAULT_TOL).unwrap();
        assert_eq!(v.status, Status::Interior);
        assert!((v.margin - 1.0).abs() < 1e-15);
        let v = domain_membership(&f(), &scalars(&[1.0, 0.0]), DEFAULT_TOL).unwrap();
        assert_eq!(v.status, Status::Boundary);
        let v = domain_membership(&f(), &scalars(&[0.6, 0.6]), DEFAULT_TOL).unwrap();
        assert_eq!(v.status, Status::Interior);
        assert!((v.margin - 0.1504).abs() < 1e-12);
    }

    #[test]
    fn membership_errors() {
        assert!(matches!(
            domain_membership(&f(), &MatrixTuple::zeros(3, 2), DEFAULT_TOL),
            Err(Error::Dimension(_))
        ));
        assert!(domain_membership(&f(), &MatrixTuple::zeros(2, 2), 0.0).is_err());
        let uneven = MatrixTuple::new(vec![CMatrix::zeros(2, 2), CMatrix::zeros(3, 3)]);
        assert!(matches!(uneven, Err(Error::Dimension(_))));
    }

    #[test]
    fn scalar_membership_examples() {
        let cp = f().collapse();
        assert_eq!(scalar_membership(&cp, &[c(0.0, 0.0); 2], DEFAULT_TOL).status, Status::Interior);
        let v = scalar_membership(&cp, &[c(0.7, 0.0), c(0.7, 0.0)], DEFAULT_TOL);
        assert_eq!(v.status, Status::Outside);
        assert!((v.margin + 0.2201).abs() < 1e-12);
        assert_eq!(scalar_membership(&cp, &[c(1.0, 0.0), c(0.0, 0.0)], DEFAULT_TOL).status, Status::Boundary);
    }

    #[test]
    fn reinhardt_examples() {
        let z = vec![c(0.5, 0.0), c(0.5, 0.0)];
        let omega = vec![c(0.0, 1.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3)];
        let r = reinhardt_check(&f(), &[(z.clone(), vec![c(1.0, 0.0); 2]), (z, omega)], DEFAULT_TOL).unwrap();
        assert_eq!(r.samples, 2);
        assert!(r.passed(1e-12), "{r:?}");
    }

    #[test]
    fn circular_examples() {
        let mut rng = sampling::rng(11);
        let t = sampling::gaussian_tuple(&mut rng, 2, 2).scaled(c(0.1, 0.0));
        let boundary = MatrixTuple::new(vec![
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            CMatrix::zeros(2, 2),
        ])
        .unwrap();
        let mut samples = vec![(t.clone(), c(1.0, 0.0)), (t, c(0.0, 1.0))];
        for step in 0..12 {
            samples.push((boundary.clone(), Complex64::from_polar(1.0, step as f64 * 0.5)));
        }
        let r = circular_check(&f(), &samples, DEFAULT_TOL).unwrap();
        assert!(r.passed(1e-12), "{r:?}");
        assert_eq!(domain_membership(&f(), &boundary, DEFAULT_TOL).unwrap().status, Status::Boundary);
    }

    #[test]
    fn slice_examples() {
        let pts = boundary_slice(&f().collapse(), (0, 1), 11).unwrap();
        assert_eq!(pts.len(), 11);
        assert_eq!(pts[0].0, 0.0);
        assert!((pts[0].1 - 1.0).abs() < 1e-9);
        let last = pts.last().unwrap();
        assert_eq!(last.0, 1.0);
        // 1 + 2y² rounds to 1 for y below ~1e-8.
        assert!(last.1.abs() < 1e-7, "{pts:?}");
        for (x, y) in boundary_slice(&Symbol::linear(2).collapse(), (0, 1), 21).unwrap() {
            assert!((x * x + y * y - 1.0).abs() < 1e-9);
        }
        assert!(boundary_slice(&f().collapse(), (0, 0), 10).is_err());
        assert!(boundary_slice(&Symbol::linear(1).collapse(), (0, 1), 10).is_err());
    }

    #[test]
    fn slice_omits_infeasible_columns() {
        let big = Symbol::linear_with(&[4.0, 1.0]).unwrap().collapse();
        let pts = boundary_slice(&big, (0, 1), 5).unwrap();
        // 4x² ≤ 1 only for x ≤ 1/2.
        assert_eq!(pts.iter().map(|p| p.0).collect::<Vec<_>>(), vec![0.0, 0.25, 0.5]);
    }

    #[test]
    fn c8_examples() {
        let zero = [c(0.0, 0.0); 8];
        let a = ball_domain_c8(&zero, DEFAULT_TOL).unwrap();
        assert_eq!((a.displayed.status, a.eigen.status), (Status::Interior, Status::Interior));
        let mut e1 = zero;
        e1[0] = c(1.0, 0.0);
        assert_eq!(ball_domain_c8(&e1, DEFAULT_TOL).unwrap().eigen.status, Status::Boundary);
        let packed = pack_c8(&[1, 2, 3, 4, 5, 6, 7, 8].map(|v| c(v as f64, 0.0)));
        assert_eq!(packed.get(0)[(1, 0)], c(5.0, 0.0));
        assert_eq!(packed.get(1)[(0, 1)], c(4.0, 0.0));
    }

    #[test]
    fn tuple_file_roundtrip() {
        let text = "n=2 k=2\n1 0+1I\n0 0\n# second\n0.5 0\n0 -2.5-1e-3I\n";
        let t = MatrixTuple::parse(text).unwrap();
        assert_eq!(t.get(0)[(0, 1)], c(0.0, 1.0));
        assert_eq!(t.get(1)[(1, 1)], c(-2.5, -1e-3));
        assert_eq!(MatrixTuple::parse(&t.serialize()).unwrap(), t);
        assert!(matches!(MatrixTuple::parse("n=1 k=2\n1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(MatrixTuple::parse("n=1 k=1\n1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(MatrixTuple::parse("n=1 k=1\nx\n"), Err(Error::Parse { line: 2, .. })));
    }
}
