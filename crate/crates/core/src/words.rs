//! Free words over an indexed alphabet.
//!
//! A generator is identified by a [`GenId`] (its index into whatever
//! alphabet the caller maintains); a [`Letter`] is a generator or its
//! inverse, and a [`Word`] is a plain sequence of letters. Words are *not*
//! kept freely reduced: several constructions in this crate need to record
//! the exact, letter-for-letter form of a word, including cancelling pairs.
//! Reduction is always an explicit call.
//!
//! The text form of a word is a whitespace separated list of tokens
//! `name`, `name^k`, or `name^-k` with `k >= 1`; the empty token list is
//! the empty word.

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::{Error, Result};

/// Index of a generator in the ambient alphabet.
pub type GenId = u32;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: GenId,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: GenId, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    /// The positive letter `g`.
    pub fn pos(gen: GenId) -> Self {
        Letter { gen, inverse: false }
    }

    /// The negative letter `g^-1`.
    pub fn neg(gen: GenId) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// `true` when `self` and `other` cancel, i.e. `other == self.inverted()`.
    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }

    /// +1 for `g`, -1 for `g^-1`.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A sequence of letters, exactly as written.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// The run `g^k` (empty when `k == 0`, `|k|` inverse letters when
    /// `k < 0`).
    pub fn gen_run(gen: GenId, k: i64) -> Self {
        let letter = if k < 0 { Letter::neg(gen) } else { Letter::pos(gen) };
        Word(alloc::vec![letter; k.unsigned_abs() as usize])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// `self` followed by `other`, with no reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    /// The formal inverse: letters reversed and each inverted.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    /// Left rotation by `by` positions: `uv -> vu` with `|u| = by`.
    ///
    /// `by` is taken modulo the length; rotating the empty word is a no-op.
    pub fn rotated(&self, by: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let by = by % self.0.len();
        let mut out = Vec::with_capacity(self.0.len());
        out.extend_from_slice(&self.0[by..]);
        out.extend_from_slice(&self.0[..by]);
        Word(out)
    }

    /// Free reduction: repeatedly delete adjacent cancelling pairs.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &letter in &self.0 {
            if stack.last().is_some_and(|&top| top.cancels(letter)) {
                stack.pop();
            } else {
                stack.push(letter);
            }
        }
        Word(stack)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|pair| !pair[0].cancels(pair[1]))
    }

    /// Free reduction followed by trimming cancelling first/last pairs, so
    /// the result is the shortest word in the conjugacy-and-rotation class.
    pub fn cyclically_reduce(&self) -> Word {
        let mut word = self.free_reduce().0;
        let mut lo = 0;
        let mut hi = word.len();
        while hi - lo >= 2 && word[lo].cancels(word[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        word.truncate(hi);
        word.drain(..lo);
        Word(word)
    }

    /// Occurrence counts of `gen`: `(positive, inverse)`.
    pub fn occurrences(&self, gen: GenId) -> (usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        for letter in &self.0 {
            if letter.gen == gen {
                if letter.inverse {
                    neg += 1;
                } else {
                    pos += 1;
                }
            }
        }
        (pos, neg)
    }

    /// Signed exponent sum of `gen`.
    pub fn exponent_sum(&self, gen: GenId) -> i64 {
        let (pos, neg) = self.occurrences(gen);
        pos as i64 - neg as i64
    }

    /// Largest generator id occurring, or `None` for the empty word.
    pub fn max_gen(&self) -> Option<GenId> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Maximal runs of a single letter, as `(gen, signed length)` pairs.
    pub fn runs(&self) -> Runs<'_> {
        Runs { letters: &self.0, at: 0 }
    }
}

/// Iterator over maximal single-letter runs; see [`Word::runs`].
pub struct Runs<'a> {
    letters: &'a [Letter],
    at: usize,
}

impl Iterator for Runs<'_> {
    type Item = (GenId, i64);

    fn next(&mut self) -> Option<(GenId, i64)> {
        let first = *self.letters.get(self.at)?;
        let mut len = 1;
        while self.letters.get(self.at + len) == Some(&first) {
            len += 1;
        }
        self.at += len;
        Some((first.gen, first.sign() * len as i64))
    }
}

/// Minimal number of blocks in a factorization of the freely reduced word
/// into maximal runs of letters from the same factor, for a 2-coloring of
/// the generators. The empty word has 0 blocks.
///
/// `factor_of[g]` must be 1 or 2 for every generator `g` occurring in the
/// word; anything else is an error.
pub fn syllable_length(word: &Word, factor_of: &[u8]) -> Result<usize> {
    let reduced = word.free_reduce();
    let mut blocks = 0usize;
    let mut last_factor = 0u8;
    for letter in reduced.letters() {
        let factor = *factor_of.get(letter.gen as usize).unwrap_or(&0);
        if factor != 1 && factor != 2 {
            return Err(Error::UnknownGenerator(alloc::format!(
                "generator #{} has no factor assignment",
                letter.gen
            )));
        }
        if factor != last_factor {
            blocks += 1;
            last_factor = factor;
        }
    }
    Ok(blocks)
}

/// Checks that a generator name is usable in the text formats: nonempty,
/// starting with a letter or underscore, continuing with letters, digits,
/// or underscores.
pub fn valid_gen_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn gen_by_name(names: &[String], name: &str) -> Option<GenId> {
    names.iter().position(|n| n == name).map(|i| i as GenId)
}

/// Parses the text form of a word over the given alphabet.
///
/// `max_letters` bounds the expanded length, so `g^1000000000` cannot be
/// used to force a huge allocation.
pub fn parse_word(text: &str, names: &[String], max_letters: usize) -> Result<Word> {
    let mut word = Word::new();
    for token in text.split_whitespace() {
        let (name, exp) = match token.split_once('^') {
            None => (token, 1i64),
            Some((name, exp)) => {
                let exp: i64 = exp
                    .parse()
                    .map_err(|_| Error::Parse(0, alloc::format!("bad exponent in `{token}`")))?;
                if exp == 0 {
                    return Err(Error::Parse(0, alloc::format!("zero exponent in `{token}`")));
                }
                (name, exp)
            }
        };
        let gen = gen_by_name(names, name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_owned()))?;
        if word.len() + exp.unsigned_abs() as usize > max_letters {
            return Err(Error::ResourceBudget("word length while parsing"));
        }
        let letter = Letter::new(gen, exp < 0);
        for _ in 0..exp.unsigned_abs() {
            word.push(letter);
        }
    }
    Ok(word)
}

/// Renders a word in the text form accepted by [`parse_word`], merging
/// runs into `name^k` tokens. The empty word renders as the empty string.
pub fn word_to_text(word: &Word, names: &[String]) -> String {
    let mut out = String::new();
    for (gen, k) in word.runs() {
        if !out.is_empty() {
            out.push(' ');
        }
        let name = names.get(gen as usize).map(String::as_str).unwrap_or("?");
        if k == 1 {
            let _ = write!(out, "{name}");
        } else {
            let _ = write!(out, "{name}^{k}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn names() -> Vec<String> {
        vec!["x".to_string(), "y".to_string(), "t".to_string()]
    }

    fn w(text: &str) -> Word {
        parse_word(text, &names(), 1 << 20).unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        for text in ["x", "x^3 y^-2 t", "y x y y x y x y", "x^-1 t x t^-1", ""] {
            let word = w(text);
            let reprinted = word_to_text(&word, &names());
            assert_eq!(parse_word(&reprinted, &names(), 1 << 20).unwrap(), word);
        }
        assert_eq!(word_to_text(&w("x x x y^-1 y^-1"), &names()), "x^3 y^-2");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(w("x").clone(), _));
        assert!(parse_word("z", &names(), 100).is_err());
        assert!(parse_word("x^0", &names(), 100).is_err());
        assert!(parse_word("x^abc", &names(), 100).is_err());
        assert!(parse_word("x^9999", &names(), 100).is_err());
    }

    #[test]
    fn free_reduction() {
        assert_eq!(w("x y y^-1 x^-1 t").free_reduce(), w("t"));
        assert_eq!(w("x x^-1").free_reduce(), Word::new());
        assert_eq!(w("x y x^-1").free_reduce(), w("x y x^-1"));
        assert!(w("x y").is_freely_reduced());
        assert!(!w("x x^-1").is_freely_reduced());
    }

    #[test]
    fn cyclic_reduction_trims_both_ends() {
        assert_eq!(w("x y t y^-1 x^-1").cyclically_reduce(), w("t"));
        assert_eq!(w("x x^-1").cyclically_reduce(), Word::new());
        // A conjugate of the empty word collapses entirely.
        assert_eq!(w("x y y^-1 x^-1").cyclically_reduce(), Word::new());
    }

    #[test]
    fn rotation_and_runs() {
        assert_eq!(w("x y t").rotated(1), w("y t x"));
        assert_eq!(w("x y t").rotated(3), w("x y t"));
        let runs: Vec<_> = w("x^3 y^-2 x").runs().collect();
        assert_eq!(runs, vec![(0, 3), (1, -2), (0, 1)]);
    }

    #[test]
    fn counts() {
        let word = w("x y x^-1 x y^-1");
        assert_eq!(word.occurrences(0), (2, 1));
        assert_eq!(word.exponent_sum(0), 1);
        assert_eq!(word.exponent_sum(1), 0);
        assert_eq!(word.max_gen(), Some(1));
    }

    #[test]
    fn inverse_reverses_and_flips() {
        assert_eq!(w("x y^-1 t").inverse(), w("t^-1 y x^-1"));
        let word = w("x y x y y");
        assert_eq!(word.concat(&word.inverse()).free_reduce(), Word::new());
    }

    #[test]
    fn syllable_blocks_alternate_factors() {
        // x in factor 1, y in factor 1, t in factor 2.
        let factors = [1u8, 1, 2];
        assert_eq!(syllable_length(&w("x t x"), &factors).unwrap(), 3);
        assert_eq!(syllable_length(&w("x y x"), &factors).unwrap(), 1);
        assert_eq!(syllable_length(&w(""), &factors).unwrap(), 0);
        // Free reduction happens first: x t t^-1 y is a single block.
        assert_eq!(syllable_length(&w("x t t^-1 y"), &factors).unwrap(), 1);
        assert!(syllable_length(&w("x"), &[0]).is_err());
    }
}
