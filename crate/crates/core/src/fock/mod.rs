//! Weighted shifts on the full Fock space truncated at word length `L`.
//!
//! The basis is `{δ_α : |α| ≤ L}` in graded-lex order, so `δ_e` is index 0.
//! `W_i δ_α = √(b_α / b_{g_i α}) δ_{g_i α}` for `|α| < L`, and `W_i` annihilates
//! the top level `|α| = L`. With that convention `Σ a_α W_α W_α*` is exactly the
//! projection onto the complement of `δ_e`, and norms of homogeneous elements of
//! degree `k ≤ L` are attained on `δ_e`, so the closed forms below are exact on
//! the truncated space.

mod poisson;
mod poly;

pub use poisson::{poisson_kernel, PoissonKernel};
pub use poly::PolyElement;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{c, identity, spectral_norm, CMatrix};
use crate::symbol::Symbol;
use crate::textfmt::{content_lines, header_value, parse_err};
use crate::weights::{compute_weights, WeightTable};
use crate::words::{Alphabet, Word};

/// Basis bookkeeping for the truncated Fock space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncatedFock {
    alphabet: Alphabet,
    max_len: usize,
}

impl TruncatedFock {
    pub fn new(n: usize, max_len: usize) -> Result<Self> {
        Ok(TruncatedFock { alphabet: Alphabet::new(n)?, max_len })
    }

    pub fn n(&self) -> usize {
        self.alphabet.size()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.alphabet.count_up_to(self.max_len)
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        (w.len() <= self.max_len).then(|| self.alphabet.index_of(w))
    }

    pub fn word_at(&self, index: usize) -> Word {
        self.alphabet.word_at(index)
    }
}

/// Sparse matrix with at most one nonzero per column: `column j ↦ (row, value)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftMatrix {
    columns: Vec<Option<(usize, f64)>>,
}

impl ShiftMatrix {
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn entry_in_column(&self, col: usize) -> Option<(usize, f64)> {
        self.columns[col]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        match self.columns[col] {
            Some((r, v)) if r == row => v,
            _ => 0.0,
        }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().flatten().count()
    }

    /// `(row, col, value)` in column order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .filter_map(|(col, e)| e.map(|(row, v)| (row, col, v)))
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for (row, col, v) in self.entries() {
            m[(row, col)] = c(v, 0.0);
        }
        m
    }
}

/// `W_1, …, W_n` for one symbol at one truncation length.
#[derive(Clone, Debug)]
pub struct ShiftOperators {
    fock: TruncatedFock,
    weights: WeightTable,
    mats: Vec<ShiftMatrix>,
}

impl ShiftOperators {
    pub fn fock(&self) -> &TruncatedFock {
        &self.fock
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    pub fn matrix(&self, i: usize) -> &ShiftMatrix {
        &self.mats[i]
    }

    pub fn matrices(&self) -> &[ShiftMatrix] {
        &self.mats
    }

    /// `W_α δ_γ = √(b_γ / b_{αγ}) δ_{αγ}` when `|αγ| ≤ L`, zero otherwise.
    pub fn word_operator(&self, alpha: &Word) -> ShiftMatrix {
        let a = self.fock.alphabet;
        let columns = (0..self.fock.dim())
            .map(|col| {
                let gamma = a.word_at(col);
                if gamma.len() + alpha.len() > self.fock.max_len {
                    return None;
                }
                let target = a.index_of(&alpha.concat(&gamma));
                let v = (self.weights.by_index(col) / self.weights.by_index(target)).sqrt();
                Some((target, v))
            })
            .collect();
        ShiftMatrix { columns }
    }

    /// Dense `Σ x_α W_α`.
    pub fn assemble(&self, x: &PolyElement) -> Result<CMatrix> {
        if x.n() != self.n() {
            return Err(Error::AlphabetMismatch { expected: self.n(), found: x.n() });
        }
        let dim = self.fock.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (w, z) in x.terms() {
            if w.len() > self.fock.max_len {
                return Err(Error::WordTooLong { word: w.render(self.n()), max_len: self.fock.max_len });
            }
            for (row, col, v) in self.word_operator(w).entries() {
                m[(row, col)] += z * v;
            }
        }
        Ok(m)
    }

    /// The tuple `(W_1, …, W_n)` as dense matrices.
    pub fn dense_tuple(&self) -> crate::domains::MatrixTuple {
        crate::domains::MatrixTuple::new(self.mats.iter().map(ShiftMatrix::to_dense).collect())
            .expect("square matrices of equal size")
    }

    /// Text export: header `dim n L`, then per matrix a line `matrix <i> <nnz>`
    /// followed by `nnz` lines `i j re im` with 1-based indices.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.fock.dim(), self.n(), self.fock.max_len);
        for (m, mat) in self.mats.iter().enumerate() {
            let _ = writeln!(out, "matrix {} {}", m + 1, mat.nnz());
            for (row, col, v) in mat.entries() {
                let _ = writeln!(out, "{} {} {} 0", row + 1, col + 1, v);
            }
        }
        out
    }
}

/// Shift matrices read back from [`ShiftOperators::to_text`].
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftExport {
    pub dim: usize,
    pub n: usize,
    pub max_len: usize,
    /// Per generator, `(row, col, value)` with 0-based indices.
    pub matrices: Vec<Vec<(usize, usize, f64)>>,
}

pub fn parse_shift_text(text: &str) -> Result<ShiftExport> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(hline, "header must be \"dim n L\"")))
        .collect::<Result<_>>()?;
    let [dim, n, len] = nums[..] else {
        return Err(parse_err(hline, "header must be \"dim n L\""));
    };
    let mut mats = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, body) = lines.next().ok_or_else(|| parse_err(hline, "missing matrix block"))?;
        let rest = body
            .strip_prefix("matrix")
            .ok_or_else(|| parse_err(line, "expected \"matrix <i> <nnz>\""))?;
        let nnz = header_value(line, &format!("nnz={}", rest.split_whitespace().nth(1).unwrap_or("")), "nnz")?;
        let mut entries = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            let (line, body) = lines.next().ok_or_else(|| parse_err(line, "truncated matrix block"))?;
            let parts: Vec<&str> = body.split_whitespace().collect();
            if parts.len() != 4 {
                return Err(parse_err(line, "expected \"i j re im\""));
            }
            let row: usize = parts[0].parse().map_err(|_| parse_err(line, "bad row"))?;
            let col: usize = parts[1].parse().map_err(|_| parse_err(line, "bad column"))?;
            let v: f64 = parts[2].parse().map_err(|_| parse_err(line, "bad value"))?;
            if row == 0 || col == 0 || row > dim || col > dim {
                return Err(parse_err(line, "index out of range"));
            }
            entries.push((row - 1, col - 1, v));
        }
        mats.push(entries);
    }
    Ok(ShiftExport { dim, n, max_len: len, matrices: mats })
}

pub fn build_shifts(sym: &Symbol, max_len: usize) -> Result<ShiftOperators> {
    let weights = compute_weights(sym, max_len)?;
    let fock = TruncatedFock::new(sym.n(), max_len)?;
    let a = fock.alphabet;
    let dim = fock.dim();
    let top = a.offset(max_len);
    let mats = (0..sym.n())
        .map(|i| {
            let columns = (0..dim)
                .map(|col| {
                    if col >= top {
                        return None;
                    }
                    let target = a.index_of(&a.word_at(col).prepend(i));
                    Some((target, (weights.by_index(col) / weights.by_index(target)).sqrt()))
                })
                .collect();
            ShiftMatrix { columns }
        })
        .collect();
    Ok(ShiftOperators { fock, weights, mats })
}

/// `‖W_α‖ = 1/√b_α`.
pub fn monomial_norm(weights: &WeightTable, alpha: &Word) -> Result<f64> {
    Ok(weights.weight(alpha)?.sqrt().recip())
}

/// `‖Σ_{|α|=k} x_α W_α‖ = √(Σ |x_α|² / b_α)` for a homogeneous element.
pub fn homogeneous_norm(weights: &WeightTable, x: &PolyElement) -> Result<f64> {
    if x.n() != weights.n() {
        return Err(Error::AlphabetMismatch { expected: weights.n(), found: x.n() });
    }
    x.homogeneous_degree()?;
    let mut sum = 0.0;
    for (w, z) in x.terms() {
        sum += z.norm_sqr() / weights.weight(w)?;
    }
    Ok(sum.sqrt())
}

/// Largest singular value of a dense matrix.
pub fn numerical_norm(mat: &CMatrix) -> Result<f64> {
    spectral_norm(mat)
}

/// `I - Σ_{|α|≥1} a_α W_α W_α*` on the space truncated at `max_len`.
pub fn defect_operator(sym: &Symbol, max_len: usize) -> Result<CMatrix> {
    sym.validate()?;
    if max_len < sym.degree() {
        return Err(Error::TruncationTooShort { len: max_len, degree: sym.degree() });
    }
    let shifts = build_shifts(sym, max_len)?;
    let dim = shifts.fock.dim();
    let mut d = identity(dim);
    for (w, a) in sym.terms() {
        let wa = shifts.word_operator(w).to_dense();
        d -= (&wa * wa.adjoint()) * c(a, 0.0);
    }
    Ok(d)
}

/// Rank-one projection onto `δ_e`.
pub fn vacuum_projection(dim: usize) -> CMatrix {
    let mut p = CMatrix::zeros(dim, dim);
    p[(0, 0)] = c(1.0, 0.0);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{domain_membership, Status, DEFAULT_TOL};
    use crate::sampling;
    use crate::words::parse_word;
    use rand::Rng;

    fn f() -> Symbol {
        Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("12", 1.0)]).unwrap()
    }

    fn g() -> Symbol {
        Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("12", 0.5), ("21", 0.5)]).unwrap()
    }

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn fock_dimensions() {
        assert_eq!(TruncatedFock::new(2, 4).unwrap().dim(), 31);
        assert_eq!(TruncatedFock::new(3, 2).unwrap().dim(), 13);
        assert_eq!(TruncatedFock::new(1, 6).unwrap().dim(), 7);
        let fock = TruncatedFock::new(2, 3).unwrap();
        assert_eq!(fock.index_of(&Word::empty()), Some(0));
        assert_eq!(fock.index_of(&w("1111")), None);
    }

    #[test]
    fn shift_entries() {
        let s = build_shifts(&f(), 3).unwrap();
        let fock = s.fock();
        let col = fock.index_of(&w("2")).unwrap();
        let row = fock.index_of(&w("12")).unwrap();
        assert!((s.matrix(0).get(row, col) - 0.5f64.sqrt()).abs() < 1e-15);
        let lin = build_shifts(&Symbol::linear(2), 3).unwrap();
        assert!(lin.matrices().iter().all(|m| m.entries().all(|(_, _, v)| v == 1.0)));
        let scaled = Symbol::from_pairs(2, &[("1", 4.0), ("2", 0.25)]).unwrap();
        let s = build_shifts(&scaled, 2).unwrap();
        assert_eq!(s.matrix(0).entry_in_column(0), Some((1, 0.5)));
        assert_eq!(s.matrix(1).entry_in_column(0), Some((2, 2.0)));
    }

    #[test]
    fn shift_structure() {
        let s = build_shifts(&g(), 4).unwrap();
        let top = s.fock().alphabet().offset(4);
        for m in s.matrices() {
            assert_eq!(m.nnz(), top);
            for (row, col, v) in m.entries() {
                assert!(col < top && v > 0.0);
                assert_eq!(s.fock().word_at(row).tail().unwrap(), s.fock().word_at(col));
            }
        }
    }

    #[test]
    fn generator_norms() {
        let s = Symbol::from_pairs(2, &[("1", 4.0), ("2", 0.5), ("12", 2.0), ("221", 1.0)]).unwrap();
        let shifts = build_shifts(&s, 4).unwrap();
        for i in 0..2 {
            let expected = 1.0 / s.coeff(&Word::generator(i)).sqrt();
            let got = numerical_norm(&shifts.matrix(i).to_dense()).unwrap();
            assert!((got - expected).abs() <= 1e-10 * expected, "{got} vs {expected}");
        }
    }

    #[test]
    fn monomial_norm_examples() {
        let bf = compute_weights(&f(), 2).unwrap();
        let bg = compute_weights(&g(), 2).unwrap();
        assert!((monomial_norm(&bf, &w("12")).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((monomial_norm(&bg, &w("12")).unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(monomial_norm(&bf, &w("1")).unwrap(), 1.0);
        assert!(matches!(monomial_norm(&bf, &w("121")), Err(Error::WordTooLong { .. })));
    }

    #[test]
    fn homogeneous_norm_examples() {
        let bf = compute_weights(&f(), 3).unwrap();
        let x = PolyElement::from_pairs(2, &[("11", 1.0), ("12", 1.0)]).unwrap();
        let closed = homogeneous_norm(&bf, &x).unwrap();
        assert!((closed - 1.5f64.sqrt()).abs() < 1e-15);
        let numeric = numerical_norm(&build_shifts(&f(), 3).unwrap().assemble(&x).unwrap()).unwrap();
        assert!((numeric - closed).abs() <= 1e-10 * closed);
        let single = PolyElement::from_pairs(2, &[("12", 1.0)]).unwrap();
        let mono = monomial_norm(&bf, &w("12")).unwrap();
        assert!((homogeneous_norm(&bf, &single).unwrap() - mono).abs() < 1e-15);
        let lin = compute_weights(&Symbol::linear(2), 1).unwrap();
        let x = PolyElement::from_pairs(2, &[("1", 3.0), ("2", 4.0)]).unwrap();
        assert!((homogeneous_norm(&lin, &x).unwrap() - 5.0).abs() < 1e-15);
        let mixed = PolyElement::from_pairs(2, &[("1", 1.0), ("12", 1.0)]).unwrap();
        assert_eq!(homogeneous_norm(&bf, &mixed), Err(Error::MixedDegree(1, 2)));
    }

    #[test]
    fn random_homogeneous_norms_match_svd() {
        let mut rng = sampling::rng(17);
        for sym in [f(), g()] {
            for k in 1..=3 {
                let shifts = build_shifts(&sym, k + 1).unwrap();
                for _ in 0..5 {
                    let terms = shifts
                        .fock()
                        .alphabet()
                        .words_of_len(k)
                        .into_iter()
                        .map(|word| (word, sampling::complex_normal(&mut rng)));
                    let x = PolyElement::new(2, terms).unwrap();
                    let closed = homogeneous_norm(shifts.weights(), &x).unwrap();
                    let numeric = numerical_norm(&shifts.assemble(&x).unwrap()).unwrap();
                    assert!((closed - numeric).abs() <= 1e-10 * closed, "{closed} vs {numeric}");
                }
            }
        }
    }

    #[test]
    fn defect_is_vacuum_projection() {
        for (sym, len) in [(f(), 4), (g(), 4), (Symbol::linear(3), 3)] {
            let d = defect_operator(&sym, len).unwrap();
            let residual = max_abs(&(&d - vacuum_projection(d.nrows())));
            assert!(residual <= 1e-12, "{sym}: {residual}");
        }
        let cubic = Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("122", 2.0)]).unwrap();
        assert!(matches!(defect_operator(&cubic, 2), Err(Error::TruncationTooShort { .. })));
    }

    #[test]
    fn shifts_sit_on_the_boundary() {
        let t = build_shifts(&f(), 3).unwrap().dense_tuple();
        let v = domain_membership(&f(), &t, DEFAULT_TOL).unwrap();
        assert_eq!(v.status, Status::Boundary);
        assert!(v.margin.abs() < 1e-12);
    }

    #[test]
    fn word_products_match_word_operators() {
        let s = build_shifts(&g(), 4).unwrap();
        let limit = s.fock().alphabet().offset(3);
        for k in 0..2 {
            for l in 0..2 {
                let product = s.matrix(k).to_dense() * s.matrix(l).to_dense();
                let direct = s.word_operator(&Word::from_letters([k, l])).to_dense();
                let diff = (product - direct).columns(0, limit).into_owned();
                assert!(max_abs(&diff) < 1e-15);
            }
        }
    }

    #[test]
    fn homogeneous_part_norm_is_dominated() {
        let shifts = build_shifts(&f(), 4).unwrap();
        let mut rng = sampling::rng(3);
        let words = shifts.fock().alphabet().enumerate(3);
        for _ in 0..10 {
            let mut terms = Vec::new();
            for w in &words {
                if rng.random::<f64>() < 0.5 {
                    terms.push((w.clone(), sampling::complex_normal(&mut rng)));
                }
            }
            let p = PolyElement::new(2, terms).unwrap();
            let whole = numerical_norm(&shifts.assemble(&p).unwrap()).unwrap();
            for j in 0..=3 {
                let part = homogeneous_norm(shifts.weights(), &p.homogeneous_part(j)).unwrap();
                assert!(part <= whole * (1.0 + 1e-12), "degree {j}: {part} > {whole}");
            }
        }
    }

    #[test]
    fn text_export_roundtrip() {
        let s = build_shifts(&f(), 2).unwrap();
        let text = s.to_text();
        assert!(text.starts_with("7 2 2\n"));
        let export = parse_shift_text(&text).unwrap();
        assert_eq!((export.dim, export.n, export.max_len), (7, 2, 2));
        for (parsed, m) in export.matrices.iter().zip(s.matrices()) {
            assert_eq!(parsed, &m.entries().collect::<Vec<_>>());
        }
    }
}
