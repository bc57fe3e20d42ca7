//! Words over the free semigroup on `n` generators.
//!
//! Letters are stored as zero-based generator indices: the generator written
//! `g₁` in the usual notation is letter `0`. The text syntax is one-based
//! (`"12"` is `g₁g₂`), with `"e"` for the empty word.
//!
//! Basis order everywhere is graded lexicographic: shorter words first, then
//! lexicographic in the letters. [`Alphabet::index_of`] maps a word to its
//! position in that order in constant time per letter.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index};

use crate::error::{Error, Result};

/// A word `g_{i₁} ⋯ g_{i_k}`; the empty word is the identity `e`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// The single-letter word for zero-based generator `i`.
    pub fn generator(i: usize) -> Self {
        Word(vec![i as u16])
    }

    /// Builds a word from zero-based letters.
    pub fn from_letters<I: IntoIterator<Item = usize>>(letters: I) -> Self {
        Word(letters.into_iter().map(|l| l as u16).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Zero-based letters, left to right.
    pub fn letters(&self) -> impl ExactSizeIterator<Item = usize> + DoubleEndedIterator + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().map(|&l| l as usize)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// `g_i · self`.
    pub fn prepend(&self, i: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(i as u16);
        letters.extend_from_slice(&self.0);
        Word(letters)
    }

    /// The word with its first letter removed; `None` for `e`.
    pub fn tail(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[1..].to_vec()))
        }
    }

    /// Prefix of length `k` and the remaining suffix.
    pub fn split_at(&self, k: usize) -> (Word, Word) {
        let (a, b) = self.0.split_at(k);
        (Word(a.to_vec()), Word(b.to_vec()))
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.0.iter().max().map(|&l| l as usize)
    }

    /// Applies a letter relabeling `letter ↦ map[letter]`.
    pub fn relabel(&self, map: &[usize]) -> Word {
        Word(self.0.iter().map(|&l| map[l as usize] as u16).collect())
    }

    /// All `(β, γ)` with `βγ = self`, by increasing `|β|`.
    pub fn factorizations(&self) -> Vec<(Word, Word)> {
        (0..=self.len()).map(|k| self.split_at(k)).collect()
    }

    /// All ordered splittings of `self` into nonempty factors.
    ///
    /// There are `2^(|α|-1)` of them; the empty word is rejected.
    pub fn compositions(&self) -> Result<Compositions<'_>> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Compositions {
            word: self,
            mask: 0,
            end: 1u64 << (self.len() - 1),
        })
    }

    /// Letter counts, one entry per generator of an alphabet of size `n`.
    pub fn multidegree(&self, n: usize) -> Multidegree {
        let mut counts = vec![0u32; n];
        for l in self.letters() {
            counts[l] += 1;
        }
        Multidegree(counts)
    }

    /// One-based text form: digits when `n ≤ 9`, dot-separated otherwise.
    pub fn render(&self, n: usize) -> String {
        if self.is_empty() {
            return "e".to_string();
        }
        let parts: Vec<String> = self.letters().map(|l| (l + 1).to_string()).collect();
        if n <= 9 {
            parts.concat()
        } else {
            parts.join(".")
        }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Index<usize> for Word {
    type Output = u16;
    fn index(&self, i: usize) -> &u16 {
        &self.0[i]
    }
}

impl Add<&Word> for &Word {
    type Output = Word;
    fn add(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "e");
        }
        for l in self.letters() {
            write!(f, "g{}", l + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Iterator over the compositions of a nonempty word.
///
/// Bit `i` of the internal mask marks a cut after letter `i + 1`, so the
/// whole word comes first and the all-singletons split last.
pub struct Compositions<'a> {
    word: &'a Word,
    mask: u64,
    end: u64,
}

impl Iterator for Compositions<'_> {
    type Item = Vec<Word>;

    fn next(&mut self) -> Option<Vec<Word>> {
        if self.mask >= self.end {
            return None;
        }
        let mut parts = Vec::new();
        let mut start = 0;
        for cut in 1..self.word.len() {
            if self.mask & (1 << (cut - 1)) != 0 {
                parts.push(Word(self.word.0[start..cut].to_vec()));
                start = cut;
            }
        }
        parts.push(Word(self.word.0[start..].to_vec()));
        self.mask += 1;
        Some(parts)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.mask) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Compositions<'_> {}

/// Letter-count vector `(r₁(α), …, r_n(α))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn zero(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// `(σ·m)_i = m_{σ(i)}` for a zero-based permutation `σ`.
    pub fn permuted(&self, sigma: &[usize]) -> Multidegree {
        Multidegree(sigma.iter().map(|&s| self.0[s]).collect())
    }
}

impl Add for &Multidegree {
    type Output = Multidegree;
    fn add(self, rhs: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

/// Alphabet context: the number of generators `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alphabet {
    n: usize,
}

impl Alphabet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > u16::MAX as usize {
            return Err(Error::Invalid(format!("alphabet size must be in 1..=65535, got {n}")));
        }
        Ok(Alphabet { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.max_letter() {
            Some(l) if l >= self.n => Err(Error::LetterOutOfRange { letter: l + 1, n: self.n }),
            _ => Ok(()),
        }
    }

    pub fn concat(&self, u: &Word, v: &Word) -> Result<Word> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.concat(v))
    }

    /// Number of words of length exactly `len`.
    pub fn count_of_len(&self, len: usize) -> usize {
        self.n.pow(len as u32)
    }

    /// Number of words of length at most `max_len`.
    pub fn count_up_to(&self, max_len: usize) -> usize {
        if self.n == 1 {
            max_len + 1
        } else {
            (self.n.pow(max_len as u32 + 1) - 1) / (self.n - 1)
        }
    }

    /// Index of the first word of length `len`.
    pub fn offset(&self, len: usize) -> usize {
        if len == 0 {
            0
        } else {
            self.count_up_to(len - 1)
        }
    }

    /// Position of `w` in graded-lex order.
    pub fn index_of(&self, w: &Word) -> usize {
        let rank = w.letters().fold(0usize, |acc, l| acc * self.n + l);
        self.offset(w.len()) + rank
    }

    /// Inverse of [`Alphabet::index_of`].
    pub fn word_at(&self, index: usize) -> Word {
        let mut len = 0;
        while self.offset(len + 1) <= index {
            len += 1;
        }
        let mut rank = index - self.offset(len);
        let mut letters = vec![0u16; len];
        for slot in letters.iter_mut().rev() {
            *slot = (rank % self.n) as u16;
            rank /= self.n;
        }
        Word(letters)
    }

    /// All words of length exactly `len`, lexicographically.
    pub fn words_of_len(&self, len: usize) -> Vec<Word> {
        let count = self.count_of_len(len);
        let mut out = Vec::with_capacity(count);
        let mut letters = vec![0u16; len];
        for _ in 0..count {
            out.push(Word(letters.clone()));
            for slot in letters.iter_mut().rev() {
                if (*slot as usize) + 1 < self.n {
                    *slot += 1;
                    break;
                }
                *slot = 0;
            }
        }
        out
    }

    /// All words of length at most `max_len` in graded-lex order.
    pub fn enumerate(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.count_up_to(max_len));
        for len in 0..=max_len {
            out.extend(self.words_of_len(len));
        }
        out
    }

    pub fn render(&self, w: &Word) -> String {
        w.render(self.n)
    }

    /// Parses the one-based text syntax against this alphabet.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let w = parse_word(text, self.n)?;
        self.check(&w)?;
        Ok(w)
    }
}

/// Parses `"e"`, contiguous digits (`n ≤ 9`) or dot-separated indices.
pub fn parse_word(text: &str, n: usize) -> Result<Word> {
    let text = text.trim();
    if text == "e" {
        return Ok(Word::empty());
    }
    let bad = || Error::WordSyntax(text.to_string());
    if text.is_empty() {
        return Err(bad());
    }
    let one_based: Vec<usize> = if n <= 9 && !text.contains('.') {
        text.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
            .collect::<Result<_>>()?
    } else {
        text.split('.')
            .map(|p| p.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    let mut letters = Vec::with_capacity(one_based.len());
    for l in one_based {
        if l == 0 || l > n {
            return Err(Error::LetterOutOfRange { letter: l, n });
        }
        letters.push((l - 1) as u16);
    }
    Ok(Word(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s, 4).unwrap()
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w("1").concat(&w("2")), w("12"));
        assert_eq!(Word::empty().concat(&w("12")), w("12"));
        assert_eq!(w("12").concat(&w("1")), w("121"));
    }

    #[test]
    fn factorizations_examples() {
        assert_eq!(Word::empty().factorizations(), vec![(Word::empty(), Word::empty())]);
        assert_eq!(
            w("1").factorizations(),
            vec![(Word::empty(), w("1")), (w("1"), Word::empty())]
        );
        assert_eq!(
            w("12").factorizations(),
            vec![(Word::empty(), w("12")), (w("1"), w("2")), (w("12"), Word::empty())]
        );
    }

    #[test]
    fn compositions_examples() {
        let c: Vec<_> = w("1").compositions().unwrap().collect();
        assert_eq!(c, vec![vec![w("1")]]);
        let c: Vec<_> = w("12").compositions().unwrap().collect();
        assert_eq!(c, vec![vec![w("12")], vec![w("1"), w("2")]]);
        let c: Vec<_> = w("121").compositions().unwrap().collect();
        assert_eq!(
            c,
            vec![
                vec![w("121")],
                vec![w("1"), w("21")],
                vec![w("12"), w("1")],
                vec![w("1"), w("2"), w("1")],
            ]
        );
        assert_eq!(Word::empty().compositions().err(), Some(Error::EmptyWord));
    }

    #[test]
    fn enumerate_examples() {
        let a2 = Alphabet::new(2).unwrap();
        assert_eq!(a2.enumerate(1), vec![Word::empty(), w("1"), w("2")]);
        assert_eq!(a2.enumerate(2).len(), 7);
        assert_eq!(Alphabet::new(3).unwrap().enumerate(2).len(), 13);
        assert_eq!(Alphabet::new(1).unwrap().enumerate(5).len(), 6);
    }

    #[test]
    fn multidegree_examples() {
        assert_eq!(w("2131").multidegree(4).0[0], 2);
        assert_eq!(w("24").multidegree(4).0[0], 0);
        assert!(Word::empty().multidegree(4).is_zero());
    }

    #[test]
    fn index_roundtrip() {
        for n in 1..=4 {
            let a = Alphabet::new(n).unwrap();
            for (i, word) in a.enumerate(4).iter().enumerate() {
                assert_eq!(a.index_of(word), i);
                assert_eq!(&a.word_at(i), word);
            }
        }
    }

    #[test]
    fn text_syntax() {
        assert_eq!(w("e"), Word::empty());
        assert_eq!(w("121").render(2), "121");
        let long = parse_word("1.12.3", 12).unwrap();
        assert_eq!(long.letters().collect::<Vec<_>>(), vec![0, 11, 2]);
        assert_eq!(long.render(12), "1.12.3");
        assert!(parse_word("13", 2).is_err());
        assert!(parse_word("1x", 2).is_err());
        assert!(parse_word("", 2).is_err());
        assert!(Alphabet::new(2).unwrap().check(&Word::generator(2)).is_err());
    }

    #[test]
    fn graded_lex_ordering() {
        let a = Alphabet::new(2).unwrap();
        let words = a.enumerate(3);
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(words, sorted);
    }
}
