//! Positive regular free polynomials `f = Σ a_α X_α` and their transformations.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::textfmt::{content_lines, header_value, parse_err};
use crate::words::{parse_word, Alphabet, Multidegree, Word};

/// The first violated positivity/regularity condition of a symbol.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Diagnostic {
    #[error("constant term must vanish")]
    ConstantTerm,
    #[error("generator coefficient must be positive: {0}")]
    GeneratorNotPositive(Word),
    #[error("coefficient must be strictly positive: {0}")]
    NonPositiveCoefficient(Word),
}

/// Finite-support coefficient map `α ↦ a_α` over `n` indeterminates.
///
/// Zero coefficients are dropped on construction, so the stored support is
/// canonical. Construction accepts a constant term or a missing generator so
/// that [`Symbol::validate`] can report them; every consumer that needs a
/// positive regular symbol calls `validate` first.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    n: usize,
    coeffs: BTreeMap<Word, f64>,
}

impl Symbol {
    pub fn new<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, f64)>,
    {
        let alphabet = Alphabet::new(n)?;
        let mut coeffs = BTreeMap::new();
        for (word, a) in terms {
            alphabet.check(&word)?;
            if !a.is_finite() || a < 0.0 {
                return Err(Error::Invalid(format!(
                    "coefficient of {word} must be a nonnegative finite number, got {a}"
                )));
            }
            if coeffs.contains_key(&word) {
                return Err(Error::Invalid(format!("duplicate word {word}")));
            }
            if a > 0.0 {
                coeffs.insert(word, a);
            }
        }
        Ok(Symbol { n, coeffs })
    }

    /// `Σ_i X_i`, the symbol of the noncommutative disk algebra.
    pub fn linear(n: usize) -> Self {
        Self::linear_with(&vec![1.0; n]).expect("unit coefficients")
    }

    /// `Σ_i c_i X_i`.
    pub fn linear_with(c: &[f64]) -> Result<Self> {
        Symbol::new(c.len(), c.iter().enumerate().map(|(i, &ci)| (Word::generator(i), ci)))
    }

    /// Parses words in the text syntax: `Symbol::from_pairs(2, &[("1", 1.0), ("12", 0.5)])`.
    pub fn from_pairs(n: usize, pairs: &[(&str, f64)]) -> Result<Self> {
        let terms = pairs
            .iter()
            .map(|&(w, a)| parse_word(w, n).map(|w| (w, a)))
            .collect::<Result<Vec<_>>>()?;
        Symbol::new(n, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.n).expect("validated at construction")
    }

    /// `a_α`, zero off the support.
    pub fn coeff(&self, word: &Word) -> f64 {
        self.coeffs.get(word).copied().unwrap_or(0.0)
    }

    /// Support in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, f64)> + '_ {
        self.coeffs.iter().map(|(w, &a)| (w, a))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Length of the longest word in the support.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Checks `a_e = 0`, `a_{g_i} > 0` and strict positivity of the support.
    pub fn validate(&self) -> std::result::Result<(), Diagnostic> {
        if self.coeffs.contains_key(&Word::empty()) {
            return Err(Diagnostic::ConstantTerm);
        }
        for i in 0..self.n {
            let g = Word::generator(i);
            if self.coeff(&g).is_nan() || self.coeff(&g) <= 0.0 {
                return Err(Diagnostic::GeneratorNotPositive(g));
            }
        }
        if let Some((w, _)) = self.coeffs.iter().find(|(_, &a)| a.is_nan() || a <= 0.0) {
            return Err(Diagnostic::NonPositiveCoefficient(w.clone()));
        }
        Ok(())
    }

    /// `max_d (Σ_{|α|=d} a_α²)^{1/d}` over the degrees present.
    pub fn growth_constant(&self) -> f64 {
        let mut by_degree: BTreeMap<usize, f64> = BTreeMap::new();
        for (w, a) in self.terms() {
            if !w.is_empty() {
                *by_degree.entry(w.len()).or_default() += a * a;
            }
        }
        by_degree
            .into_iter()
            .map(|(d, s)| s.powf(1.0 / d as f64))
            .fold(0.0, f64::max)
    }

    /// `a'_α = a_α / Π_i c_i^{2 r_i(α)}`.
    pub fn rescale(&self, c: &[f64]) -> Result<Symbol> {
        if c.len() != self.n {
            return Err(Error::AlphabetMismatch { expected: self.n, found: c.len() });
        }
        if let Some(&bad) = c.iter().find(|&&ci| !(ci > 0.0 && ci.is_finite())) {
            return Err(Error::NonPositiveScale(bad));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(w, &a)| {
                let denom: f64 = w.letters().map(|l| c[l] * c[l]).product();
                (w.clone(), a / denom)
            })
            .collect();
        Ok(Symbol { n: self.n, coeffs })
    }

    /// Rescales so that every generator coefficient is 1; returns the scale used.
    pub fn normalize(&self) -> Result<(Symbol, Vec<f64>)> {
        self.validate()?;
        let c: Vec<f64> = (0..self.n).map(|i| self.coeff(&Word::generator(i)).sqrt()).collect();
        let mut out = self.rescale(&c)?;
        // Pin the generator coefficients to exactly 1 against sqrt rounding.
        for i in 0..self.n {
            out.coeffs.insert(Word::generator(i), 1.0);
        }
        Ok((out, c))
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.n).all(|i| self.coeff(&Word::generator(i)) == 1.0)
    }

    /// Relabels letters: the result has `a'_{g_{i₁}⋯g_{i_k}} = a_{g_{σ(i₁)}⋯g_{σ(i_k)}}`.
    ///
    /// `sigma` is zero-based.
    pub fn permute(&self, sigma: &[usize]) -> Result<Symbol> {
        let inverse = invert_permutation(sigma, self.n)?;
        let coeffs = self.coeffs.iter().map(|(w, &a)| (w.relabel(&inverse), a)).collect();
        Ok(Symbol { n: self.n, coeffs })
    }

    /// Commutative image `c_m = Σ_{r(α) = m} a_α`.
    pub fn collapse(&self) -> CollapsedPolynomial {
        let mut terms: BTreeMap<Multidegree, f64> = BTreeMap::new();
        for (w, a) in self.terms() {
            *terms.entry(w.multidegree(self.n)).or_default() += a;
        }
        CollapsedPolynomial { n: self.n, terms }
    }

    /// Parses the symbol file format and validates the result.
    pub fn parse(text: &str) -> Result<Symbol> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header n=<integer>"))?;
        let n = header_value(hline, header, "n")?;
        let alphabet = Alphabet::new(n).map_err(|e| parse_err(hline, e.to_string()))?;
        let mut coeffs: BTreeMap<Word, f64> = BTreeMap::new();
        let mut seen: BTreeMap<Word, usize> = BTreeMap::new();
        let mut last_line = hline;
        for (line, body) in lines {
            last_line = line;
            let mut parts = body.split_whitespace();
            let (Some(word), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_err(line, format!("expected \"<word> <coefficient>\", got {body:?}")));
            };
            let word = alphabet.parse(word).map_err(|e| parse_err(line, e.to_string()))?;
            let a: f64 = value
                .parse()
                .map_err(|_| parse_err(line, format!("invalid coefficient {value:?}")))?;
            if !a.is_finite() {
                return Err(parse_err(line, format!("coefficient must be finite, got {value}")));
            }
            if a < 0.0 {
                return Err(parse_err(line, format!("negative coefficient {value} for word {word}")));
            }
            if let Some(prev) = seen.insert(word.clone(), line) {
                return Err(parse_err(line, format!("duplicate word {word} (first on line {prev})")));
            }
            if word.is_empty() && a > 0.0 {
                return Err(parse_err(line, Diagnostic::ConstantTerm.to_string()));
            }
            if a > 0.0 {
                coeffs.insert(word, a);
            }
        }
        let sym = Symbol { n, coeffs };
        if let Err(d) = sym.validate() {
            return Err(parse_err(last_line, d.to_string()));
        }
        Ok(sym)
    }

    /// Writes the symbol file format; coefficients use shortest round-trip decimals.
    pub fn serialize(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for (w, a) in self.terms() {
            out.push_str(&format!("{} {}\n", w.render(self.n), a));
        }
        out
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, a)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if a != 1.0 {
                write!(f, "{a}·")?;
            }
            if w.is_empty() {
                write!(f, "1")?;
            } else {
                for l in w.letters() {
                    write!(f, "X{}", l + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// Zero-based inverse permutation, validating bijectivity on `0..n`.
pub fn invert_permutation(sigma: &[usize], n: usize) -> Result<Vec<usize>> {
    let bad = || Error::InvalidPermutation { perm: sigma.iter().map(|s| s + 1).collect(), n };
    if sigma.len() != n {
        return Err(bad());
    }
    let mut inverse = vec![usize::MAX; n];
    for (i, &s) in sigma.iter().enumerate() {
        if s >= n || inverse[s] != usize::MAX {
            return Err(bad());
        }
        inverse[s] = i;
    }
    Ok(inverse)
}

/// `Σ_m c_m Π_i |z_i|^{2 m_i}`: the defining function of the scalar domain.
#[derive(Clone, Debug, PartialEq)]
pub struct CollapsedPolynomial {
    n: usize,
    terms: BTreeMap<Multidegree, f64>,
}

impl CollapsedPolynomial {
    pub fn new(n: usize, terms: BTreeMap<Multidegree, f64>) -> Self {
        CollapsedPolynomial { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, f64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Multidegree) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = &Multidegree> + '_ {
        self.terms.keys()
    }

    /// Value at squared moduli `x_i = |z_i|²`.
    pub fn value_at_sq_moduli(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, &c)| {
                c * m
                    .counts()
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| xi.powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    }

    /// Value at moduli `|z_i|`.
    pub fn value_at_moduli(&self, r: &[f64]) -> f64 {
        let sq: Vec<f64> = r.iter().map(|v| v * v).collect();
        self.value_at_sq_moduli(&sq)
    }

    /// Reindexes keys by `m ↦ σ·m` with `(σ·m)_i = m_{σ(i)}`.
    pub fn permuted(&self, sigma: &[usize]) -> CollapsedPolynomial {
        let terms = self.terms.iter().map(|(m, &c)| (m.permuted(sigma), c)).collect();
        CollapsedPolynomial { n: self.n, terms }
    }

    /// Largest relative coefficient difference, or `None` when supports differ.
    pub fn compare(&self, other: &CollapsedPolynomial) -> Option<f64> {
        if self.n != other.n || !self.terms.keys().eq(other.terms.keys()) {
            return None;
        }
        Some(
            self.terms
                .iter()
                .map(|(m, &c)| (c - other.terms[m]).abs() / c.abs().max(other.terms[m].abs()))
                .fold(0.0, f64::max),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Symbol {
        Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("12", 1.0)]).unwrap()
    }

    fn g() -> Symbol {
        Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("12", 0.5), ("21", 0.5)]).unwrap()
    }

    fn md(v: &[u32]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    #[test]
    fn validate_examples() {
        assert_eq!(f().validate(), Ok(()));
        let missing = Symbol::from_pairs(2, &[("1", 1.0), ("2", 0.0)]).unwrap();
        let d = missing.validate().unwrap_err();
        assert_eq!(d, Diagnostic::GeneratorNotPositive(Word::generator(1)));
        assert_eq!(d.to_string(), "generator coefficient must be positive: g2");
        let constant = Symbol::from_pairs(1, &[("e", 1.0), ("1", 1.0)]).unwrap();
        assert_eq!(constant.validate().unwrap_err().to_string(), "constant term must vanish");
    }

    #[test]
    fn negative_coefficient_rejected() {
        assert!(Symbol::from_pairs(2, &[("1", -1.0), ("2", 1.0)]).is_err());
        assert!(Symbol::from_pairs(2, &[("1", f64::NAN), ("2", 1.0)]).is_err());
    }

    #[test]
    fn growth_constant_examples() {
        assert_eq!(Symbol::linear(1).growth_constant(), 1.0);
        assert_eq!(f().growth_constant(), 2.0);
        assert_eq!(g().growth_constant(), 2.0);
        let heavy = Symbol::from_pairs(2, &[("1", 0.1), ("2", 0.1), ("12", 3.0), ("21", 4.0)]).unwrap();
        assert_eq!(heavy.growth_constant(), 5.0);
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(f().rescale(&[1.0, 1.0]).unwrap(), f());
        let s = Symbol::from_pairs(2, &[("1", 4.0), ("2", 1.0)]).unwrap();
        assert_eq!(s.rescale(&[2.0, 1.0]).unwrap(), Symbol::linear(2));
        let expected = Symbol::from_pairs(2, &[("1", 0.25), ("2", 1.0), ("12", 0.25)]).unwrap();
        assert_eq!(f().rescale(&[2.0, 1.0]).unwrap(), expected);
        assert_eq!(f().rescale(&[0.0, 1.0]), Err(Error::NonPositiveScale(0.0)));
        assert!(f().rescale(&[1.0]).is_err());
    }

    #[test]
    fn normalize_examples() {
        let (s, c) = Symbol::linear(3).normalize().unwrap();
        assert_eq!(s, Symbol::linear(3));
        assert_eq!(c, vec![1.0; 3]);
        let (s, c) = Symbol::from_pairs(2, &[("1", 4.0), ("2", 9.0)]).unwrap().normalize().unwrap();
        assert_eq!(s, Symbol::linear(2));
        assert_eq!(c, vec![2.0, 3.0]);
        assert_eq!(f().normalize().unwrap().0, f());
    }

    #[test]
    fn permute_examples() {
        assert_eq!(f().permute(&[0, 1]).unwrap(), f());
        let swapped = Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("21", 1.0)]).unwrap();
        assert_eq!(f().permute(&[1, 0]).unwrap(), swapped);
        let s = Symbol::from_pairs(2, &[("1", 2.0), ("2", 1.0)]).unwrap();
        assert_eq!(s.permute(&[1, 0]).unwrap(), Symbol::from_pairs(2, &[("1", 1.0), ("2", 2.0)]).unwrap());
        assert!(f().permute(&[0, 0]).is_err());
        assert!(f().permute(&[0, 2]).is_err());
    }

    #[test]
    fn collapse_examples() {
        let cf = f().collapse();
        let expected: BTreeMap<_, _> =
            [(md(&[1, 0]), 1.0), (md(&[0, 1]), 1.0), (md(&[1, 1]), 1.0)].into_iter().collect();
        assert_eq!(cf, CollapsedPolynomial::new(2, expected));
        assert_eq!(g().collapse(), cf);
        let lin = Symbol::linear_with(&[2.0, 3.0, 5.0]).unwrap().collapse();
        assert_eq!(lin.coeff(&md(&[0, 1, 0])), 3.0);
        assert_eq!(lin.terms().count(), 3);
    }

    #[test]
    fn parse_examples() {
        assert_eq!(Symbol::parse("n=2 \n 1 1 \n 2 1 \n 12 1").unwrap(), f());
        assert_eq!(Symbol::parse("n=1 \n 1 1").unwrap(), Symbol::linear(1));
        assert_eq!(Symbol::parse("n=2 \n 1 1 \n 2 1 \n 12 0.5 \n 21 0.5").unwrap(), g());
        assert_eq!(Symbol::parse("# comment\nn=2\n2 1 # trailing\n1 1\n").unwrap(), Symbol::linear(2));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let cases = [
            ("n=2\n1 1\n2\n", 3, "expected"),
            ("n=2\n1 1\n2 1\n1 2\n", 4, "duplicate"),
            ("n=2\n1 1\n2 -1\n", 3, "negative"),
            ("n=2\n1 1\n12 1\n", 3, "generator coefficient must be positive: g2"),
            ("n=2\n1 1\n3 1\n", 3, "out of range"),
            ("n=2\ne 1\n1 1\n2 1\n", 2, "constant term"),
            ("1 1\n", 1, "n=<integer>"),
        ];
        for (text, line, needle) in cases {
            match Symbol::parse(text) {
                Err(Error::Parse { line: l, message }) => {
                    assert_eq!(l, line, "{text:?}: {message}");
                    assert!(message.contains(needle), "{text:?}: {message}");
                }
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn display_reads_like_a_polynomial() {
        assert_eq!(g().to_string(), "X1 + X2 + 0.5·X1X2 + 0.5·X2X1");
    }
}
