//! Noncommutative polynomials `Σ c_α X_α` with complex coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::domains::MatrixTuple;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::textfmt::{content_lines, format_complex, header_value, parse_complex, parse_err};
use crate::words::{parse_word, Alphabet, Word};

#[derive(Clone, Debug, PartialEq)]
pub struct PolyElement {
    n: usize,
    coeffs: BTreeMap<Word, Complex64>,
}

impl PolyElement {
    pub fn zero(n: usize) -> Self {
        PolyElement { n, coeffs: BTreeMap::new() }
    }

    /// Exact zeros are dropped; repeated words are summed.
    pub fn new<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Complex64)>,
    {
        let alphabet = Alphabet::new(n)?;
        let mut coeffs: BTreeMap<Word, Complex64> = BTreeMap::new();
        for (w, z) in terms {
            alphabet.check(&w)?;
            *coeffs.entry(w).or_default() += z;
        }
        coeffs.retain(|_, z| *z != Complex64::new(0.0, 0.0));
        Ok(PolyElement { n, coeffs })
    }

    /// Real coefficients on text-syntax words.
    pub fn from_pairs(n: usize, pairs: &[(&str, f64)]) -> Result<Self> {
        let terms = pairs
            .iter()
            .map(|&(w, a)| parse_word(w, n).map(|w| (w, c(a, 0.0))))
            .collect::<Result<Vec<_>>>()?;
        PolyElement::new(n, terms)
    }

    pub fn monomial(n: usize, word: Word) -> Result<Self> {
        PolyElement::new(n, [(word, c(1.0, 0.0))])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, w: &Word) -> Complex64 {
        self.coeffs.get(w).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, Complex64)> + '_ {
        self.coeffs.iter().map(|(w, &z)| (w, z))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(Word::len).max().unwrap_or(0)
    }

    /// The common length of the support words, or an error if they differ.
    /// `None` for the zero element.
    pub fn homogeneous_degree(&self) -> Result<Option<usize>> {
        let mut lens = self.coeffs.keys().map(Word::len);
        let Some(first) = lens.next() else {
            return Ok(None);
        };
        match lens.find(|&l| l != first) {
            Some(other) => Err(Error::MixedDegree(first, other)),
            None => Ok(Some(first)),
        }
    }

    /// `[p]_j`: the terms of length exactly `j`.
    pub fn homogeneous_part(&self, j: usize) -> PolyElement {
        let coeffs = self.coeffs.iter().filter(|(w, _)| w.len() == j).map(|(w, &z)| (w.clone(), z)).collect();
        PolyElement { n: self.n, coeffs }
    }

    /// `c_α ↦ c_α r^{|α|}` for `r ∈ (0, 1)`.
    pub fn radial_truncation(&self, r: f64) -> Result<PolyElement> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::RadiusOutOfRange(r));
        }
        let coeffs = self.coeffs.iter().map(|(w, &z)| (w.clone(), z * r.powi(w.len() as i32))).collect();
        Ok(PolyElement { n: self.n, coeffs })
    }

    pub fn add(&self, other: &PolyElement) -> Result<PolyElement> {
        self.same_alphabet(other)?;
        PolyElement::new(self.n, self.terms().chain(other.terms()).map(|(w, z)| (w.clone(), z)))
    }

    /// Product in the free algebra: `X_α · X_β = X_{αβ}`.
    pub fn mul(&self, other: &PolyElement) -> Result<PolyElement> {
        self.same_alphabet(other)?;
        let mut terms = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                terms.push((u.concat(v), a * b));
            }
        }
        PolyElement::new(self.n, terms)
    }

    fn same_alphabet(&self, other: &PolyElement) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch { expected: self.n, found: other.n })
        }
    }

    /// `p(T) = Σ c_α T_α` with `T_e = I`.
    pub fn evaluate(&self, t: &MatrixTuple) -> Result<CMatrix> {
        if t.n() != self.n {
            return Err(Error::Dimension(format!("polynomial has {} variables, tuple has {}", self.n, t.n())));
        }
        let k = t.k();
        let mut out = CMatrix::zeros(k, k);
        for (w, z) in self.terms() {
            out += t.word_product(w) * z;
        }
        Ok(out)
    }

    /// Polynomial file format: `n=<int>` then `<word> <re|re+imI>` lines; `e` allowed.
    pub fn parse(text: &str) -> Result<PolyElement> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header n=<integer>"))?;
        let n = header_value(hline, header, "n")?;
        let alphabet = Alphabet::new(n).map_err(|e| parse_err(hline, e.to_string()))?;
        let mut coeffs = BTreeMap::new();
        for (line, body) in lines {
            let mut parts = body.split_whitespace();
            let (Some(word), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_err(line, format!("expected \"<word> <coefficient>\", got {body:?}")));
            };
            let word = alphabet.parse(word).map_err(|e| parse_err(line, e.to_string()))?;
            let z = parse_complex(value).ok_or_else(|| parse_err(line, format!("invalid coefficient {value:?}")))?;
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(parse_err(line, format!("coefficient must be finite, got {value}")));
            }
            if coeffs.insert(word.clone(), z).is_some() {
                return Err(parse_err(line, format!("duplicate word {word}")));
            }
        }
        coeffs.retain(|_, z| *z != Complex64::new(0.0, 0.0));
        Ok(PolyElement { n, coeffs })
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for (w, z) in self.terms() {
            out.push_str(&format!("{} {}\n", w.render(self.n), format_complex(z)));
        }
        out
    }
}
