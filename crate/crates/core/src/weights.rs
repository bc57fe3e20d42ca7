//! The weight sequence `b_α` of a symbol: the coefficients of `(1 - f)^{-1}`.
//!
//! [`compute_weights`] uses the prefix recursion `b_α = Σ_{βγ=α, |β|≥1} a_β b_γ`
//! and costs `O(|α|)` per word. [`weight_by_compositions`] sums over all
//! `2^(|α|-1)` compositions of `α` and exists to cross-check the recursion.

use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::words::{Alphabet, Word};

/// Longest word accepted by the exponential composition oracle.
pub const COMPOSITION_ORACLE_MAX_LEN: usize = 12;

/// `α ↦ b_α` for every word of length at most `max_len`, stored by graded-lex index.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable {
    alphabet: Alphabet,
    max_len: usize,
    values: Vec<f64>,
}

impl WeightTable {
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn n(&self) -> usize {
        self.alphabet.size()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `b_α`, or `None` past the truncation length.
    pub fn get(&self, word: &Word) -> Option<f64> {
        if word.len() > self.max_len || self.alphabet.check(word).is_err() {
            return None;
        }
        Some(self.values[self.alphabet.index_of(word)])
    }

    pub fn weight(&self, word: &Word) -> Result<f64> {
        self.get(word).ok_or_else(|| Error::WordTooLong {
            word: word.render(self.n()),
            max_len: self.max_len,
        })
    }

    pub fn by_index(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(word, b_word)` in graded-lex order.
    pub fn iter(&self) -> impl Iterator<Item = (Word, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &b)| (self.alphabet.word_at(i), b))
    }

    /// Builds a table from raw values in graded-lex order.
    ///
    /// Only meant for tests that need a deliberately corrupted table.
    pub fn from_values(alphabet: Alphabet, max_len: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != alphabet.count_up_to(max_len) {
            return Err(Error::Dimension(format!(
                "expected {} weights, got {}",
                alphabet.count_up_to(max_len),
                values.len()
            )));
        }
        Ok(WeightTable { alphabet, max_len, values })
    }

    /// Smallest `b_{αβ} - b_α b_β` over all pairs with `|αβ| ≤ max_len`.
    ///
    /// Nonnegative exactly when the table is supermultiplicative.
    pub fn supermultiplicativity_gap(&self) -> f64 {
        let a = self.alphabet;
        let mut worst = f64::INFINITY;
        for (i, alpha) in a.enumerate(self.max_len).iter().enumerate() {
            for (j, beta) in a.enumerate(self.max_len - alpha.len()).iter().enumerate() {
                let joined = self.values[a.index_of(&alpha.concat(beta))];
                worst = worst.min(joined - self.values[i] * self.values[j]);
            }
        }
        worst
    }
}

/// Dense `a_α` lookup indexed like the weight table, up to `len`.
fn dense_coefficients(sym: &Symbol, len: usize) -> Vec<f64> {
    let alphabet = sym.alphabet();
    let mut dense = vec![0.0; alphabet.count_up_to(len)];
    for (w, a) in sym.terms() {
        if w.len() <= len {
            dense[alphabet.index_of(w)] = a;
        }
    }
    dense
}

/// Weight table up to `max_len` by the prefix recursion.
pub fn compute_weights(sym: &Symbol, max_len: usize) -> Result<WeightTable> {
    sym.validate()?;
    if max_len == 0 {
        return Err(Error::ZeroTruncation);
    }
    let alphabet = sym.alphabet();
    let n = alphabet.size();
    let deg = sym.degree().min(max_len);
    let a = dense_coefficients(sym, deg);
    let total = alphabet.count_up_to(max_len);
    let mut b = vec![0.0; total];
    b[0] = 1.0;
    let mut letters: Vec<usize> = Vec::with_capacity(max_len);
    for len in 1..=max_len {
        let offset = alphabet.offset(len);
        let powers: Vec<usize> = (0..=len).map(|k| n.pow(k as u32)).collect();
        for rank in 0..powers[len] {
            letters.clear();
            let mut r = rank;
            for _ in 0..len {
                letters.push(r % n);
                r /= n;
            }
            letters.reverse();
            let mut acc = 0.0;
            let mut prefix_rank = 0;
            for k in 1..=len.min(deg) {
                prefix_rank = prefix_rank * n + letters[k - 1];
                let coeff = a[alphabet.offset(k) + prefix_rank];
                if coeff != 0.0 {
                    let suffix_rank = rank - prefix_rank * powers[len - k];
                    acc += coeff * b[alphabet.offset(len - k) + suffix_rank];
                }
            }
            b[offset + rank] = acc;
        }
    }
    Ok(WeightTable { alphabet, max_len, values: b })
}

/// `b_α` as the sum over compositions `γ₁⋯γ_j = α` of `a_{γ₁}⋯a_{γ_j}`.
pub fn weight_by_compositions(sym: &Symbol, alpha: &Word) -> Result<f64> {
    sym.alphabet().check(alpha)?;
    if alpha.len() > COMPOSITION_ORACLE_MAX_LEN {
        return Err(Error::Invalid(format!(
            "composition oracle is limited to words of length {COMPOSITION_ORACLE_MAX_LEN}"
        )));
    }
    Ok(alpha
        .compositions()?
        .map(|parts| parts.iter().map(|p| sym.coeff(p)).product::<f64>())
        .sum())
}

/// Largest coefficient of `(1 - A_r)B_r - 1` and `B_r(1 - A_r) - 1` over words of
/// length at most `max_len`, where `A_r = Σ a_α r^{|α|} X_α` and `B_r = Σ b_α r^{|α|} X_α`.
///
/// Requires `r · M < 1/2` with `M` the growth constant.
pub fn verify_series_inverse(sym: &Symbol, max_len: usize, r: f64) -> Result<f64> {
    let m = sym.growth_constant();
    if r.is_nan() || r <= 0.0 || r * m >= 0.5 {
        return Err(Error::RadiusTooLarge { product: r * m });
    }
    let table = compute_weights(sym, max_len)?;
    let alphabet = table.alphabet();
    let words = alphabet.enumerate(max_len);
    let one_minus_a: Vec<f64> = words
        .iter()
        .map(|w| {
            let delta = if w.is_empty() { 1.0 } else { 0.0 };
            delta - sym.coeff(w) * r.powi(w.len() as i32)
        })
        .collect();
    let b_r: Vec<f64> = words
        .iter()
        .enumerate()
        .map(|(i, w)| table.by_index(i) * r.powi(w.len() as i32))
        .collect();
    let mut worst: f64 = 0.0;
    for (idx, w) in words.iter().enumerate() {
        let mut left = 0.0;
        let mut right = 0.0;
        for (u, v) in w.factorizations() {
            let (iu, iv) = (alphabet.index_of(&u), alphabet.index_of(&v));
            left += one_minus_a[iu] * b_r[iv];
            right += b_r[iu] * one_minus_a[iv];
        }
        let target = if idx == 0 { 1.0 } else { 0.0 };
        worst = worst.max((left - target).abs()).max((right - target).abs());
    }
    Ok(worst)
}
