//! The solvable Baumslag-Solitar group `K = <x, y | y^-1 x y = x^2>`,
//! realized by affine maps of the dyadic rationals.
//!
//! Sending `x` to `t -> t + 1` and `y` to `t -> 2t` identifies `K` with the
//! group of maps `t -> 2^a t + b` where `a` is an integer and `b` is a
//! dyadic rational. Words over `x, y` are evaluated exactly by composing
//! these maps, which decides the word problem in `K`: a word represents the
//! identity iff it evaluates to the identity map, lies in `<x>` iff the
//! map is `t -> t + k` with `k` an integer, and lies in `<y>` iff it is
//! `t -> 2^a t`.
//!
//! The module also fixes a bijective encoding of *block words*: positive
//! words of the shape `y^(s_1) x y^(s_2) x ... x y^(s_r)` built from blocks
//! `y` and `yx`. A block word `v` maps to the pair `(i, j)` where `i`
//! counts the `y` letters and `j` has binary digit `c` set exactly when `v`
//! contains an `x` with `c` letters `y` to its right. Distinct block words
//! give distinct pairs, which is what makes families indexed by block
//! words pairwise distinguishable downstream.

use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::words::{GenId, Letter, Word};
use crate::{Budget, Error, Result};

/// An affine map `t -> 2^a t + b_num / 2^b_exp` with exact integer data.
///
/// Kept canonical: `b_num` is odd, or `b_num = 0` and `b_exp = 0`. The
/// exponent `b_exp` may be negative (then `b` is the even integer
/// `b_num * 2^(-b_exp)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicAffine {
    a: BigInt,
    b_num: BigInt,
    b_exp: i64,
}

impl DyadicAffine {
    pub fn new(a: BigInt, b_num: BigInt, b_exp: i64) -> Self {
        let mut map = DyadicAffine { a, b_num, b_exp };
        map.normalize();
        map
    }

    pub fn identity() -> Self {
        DyadicAffine { a: BigInt::zero(), b_num: BigInt::zero(), b_exp: 0 }
    }

    /// The image of `x^k`, the translation `t -> t + k`.
    pub fn x_power(k: impl Into<BigInt>) -> Self {
        DyadicAffine::new(BigInt::zero(), k.into(), 0)
    }

    /// The image of `y^k`, the scaling `t -> 2^k t`.
    pub fn y_power(k: impl Into<BigInt>) -> Self {
        DyadicAffine { a: k.into(), b_num: BigInt::zero(), b_exp: 0 }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b_num(&self) -> &BigInt {
        &self.b_num
    }

    pub fn b_exp(&self) -> i64 {
        self.b_exp
    }

    fn normalize(&mut self) {
        if self.b_num.is_zero() {
            self.b_exp = 0;
        } else {
            let tz = self.b_num.magnitude().trailing_zeros().unwrap_or(0);
            if tz > 0 {
                self.b_num >>= tz;
                self.b_exp -= tz as i64;
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b_num.is_zero()
    }

    /// `Some(k)` when the map is `t -> t + k` with integer `k`, i.e. the
    /// element lies in the subgroup generated by `x`.
    pub fn as_x_power(&self, budget: &Budget) -> Result<Option<BigInt>> {
        if !self.a.is_zero() || self.b_exp > 0 {
            return Ok(None);
        }
        let shift = self.b_exp.unsigned_abs();
        if self.b_num.magnitude().bits() + shift > budget.max_bits {
            return Err(Error::ResourceBudget("translation part of an affine map"));
        }
        Ok(Some(&self.b_num << shift))
    }

    /// `Some(k)` when the map is `t -> 2^k t`, i.e. the element lies in the
    /// subgroup generated by `y`.
    pub fn as_y_power(&self) -> Option<BigInt> {
        if self.b_num.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    /// The composition that applies `self` first and `rhs` second, so that
    /// evaluating a word letter by letter is a fold with `then`.
    pub fn then(&self, rhs: &DyadicAffine, budget: &Budget) -> Result<DyadicAffine> {
        // rhs(self(t)) = 2^(a1 + a2) t + (b1 * 2^(a2) + b2).
        let a = &self.a + &rhs.a;
        let b1 = &self.b_num;
        let b2 = &rhs.b_num;
        if b1.is_zero() {
            return Ok(DyadicAffine { a, b_num: b2.clone(), b_exp: rhs.b_exp });
        }
        // Scaling b1 by 2^(a2) only adjusts its exponent.
        let a2 = rhs.a.to_i64().ok_or(Error::ResourceBudget("exponent shift in composition"))?;
        let e1 = self
            .b_exp
            .checked_sub(a2)
            .ok_or(Error::ResourceBudget("exponent shift in composition"))?;
        if b2.is_zero() {
            let mut out = DyadicAffine { a, b_num: b1.clone(), b_exp: e1 };
            out.normalize();
            return Ok(out);
        }
        let e = e1.max(rhs.b_exp);
        let s1 = (e - e1) as u64;
        let s2 = (e - rhs.b_exp) as u64;
        let bits = (b1.magnitude().bits() + s1).max(b2.magnitude().bits() + s2) + 1;
        if bits > budget.max_bits {
            return Err(Error::ResourceBudget("translation part of an affine map"));
        }
        let mut out = DyadicAffine { a, b_num: (b1 << s1) + (b2 << s2), b_exp: e };
        out.normalize();
        Ok(out)
    }

    pub fn inverse(&self) -> Result<DyadicAffine> {
        // (2^a t + b)^-1 = 2^(-a) t - b * 2^(-a).
        let a = -&self.a;
        if self.b_num.is_zero() {
            return Ok(DyadicAffine { a, b_num: BigInt::zero(), b_exp: 0 });
        }
        let ai = self.a.to_i64().ok_or(Error::ResourceBudget("exponent shift in inversion"))?;
        let b_exp = self
            .b_exp
            .checked_add(ai)
            .ok_or(Error::ResourceBudget("exponent shift in inversion"))?;
        Ok(DyadicAffine { a, b_num: -&self.b_num, b_exp })
    }
}

/// Evaluates a word over the two designated generators to its affine map.
///
/// Letters are applied left to right: `k_eval(uv) = k_eval(u).then(k_eval(v))`.
/// Runs of a single letter are folded in one step, so long powers cost one
/// composition each.
pub fn k_eval(word: &Word, x: GenId, y: GenId, budget: &Budget) -> Result<DyadicAffine> {
    let mut acc = DyadicAffine::identity();
    for (gen, k) in word.runs() {
        let step = if gen == x {
            DyadicAffine::x_power(k)
        } else if gen == y {
            DyadicAffine::y_power(k)
        } else {
            return Err(Error::UnknownGenerator(alloc::format!(
                "generator #{gen} is outside the x, y alphabet"
            )));
        };
        acc = acc.then(&step, budget)?;
    }
    Ok(acc)
}

/// Writes an affine map back as a word `y^(a + b_exp) x^(b_num) y^(-b_exp)`
/// over the designated generators.
///
/// The word evaluates back to the map under [`k_eval`]; the `x` run has
/// `|b_num|` letters, so the budget bounds the magnitude of the translation
/// numerator, not just its bit length.
pub fn k_to_word(map: &DyadicAffine, x: GenId, y: GenId, budget: &Budget) -> Result<Word> {
    let head = &map.a + BigInt::from(map.b_exp);
    let head = head.to_i64().ok_or(Error::ResourceBudget("y run length"))?;
    let tail = -map.b_exp;
    let mid = map.b_num.to_i64().ok_or(Error::ResourceBudget("x run length"))?;
    let total = head.unsigned_abs() + mid.unsigned_abs() + tail.unsigned_abs();
    if total > budget.max_letters as u64 {
        return Err(Error::ResourceBudget("word length"));
    }
    let mut word = Word::gen_run(y, head);
    word.extend(&Word::gen_run(x, mid));
    word.extend(&Word::gen_run(y, tail));
    Ok(word)
}

/// Decides whether a word is a block word over the designated generators:
/// a nonempty positive word starting with `y` and never containing two
/// adjacent `x` letters, i.e. a concatenation of blocks `y` and `yx`.
///
/// Returns the encoding pair `(i, j)`: `i` counts `y` letters, and `j` has
/// bit `c` set exactly when an `x` has `c` letters `y` to its right.
pub fn v_encode(word: &Word, x: GenId, y: GenId) -> Result<(BigUint, BigUint)> {
    if word.is_empty() {
        return Err(Error::NotABlockWord("empty word"));
    }
    let mut i = 0u64;
    let mut j = BigUint::zero();
    let mut prev_x = false;
    for (pos, letter) in word.letters().iter().enumerate() {
        if letter.inverse {
            return Err(Error::NotABlockWord("contains an inverse letter"));
        }
        if letter.gen == y {
            i += 1;
            prev_x = false;
        } else if letter.gen == x {
            if pos == 0 {
                return Err(Error::NotABlockWord("starts with x"));
            }
            if prev_x {
                return Err(Error::NotABlockWord("contains adjacent x letters"));
            }
            prev_x = true;
        } else {
            return Err(Error::NotABlockWord("contains a letter outside x, y"));
        }
    }
    // Second pass right to left for the digits of j.
    let mut ys_right = 0u64;
    for letter in word.letters().iter().rev() {
        if letter.gen == y {
            ys_right += 1;
        } else {
            j.set_bit(ys_right, true);
        }
    }
    Ok((BigUint::from(i), j))
}

/// Inverse of [`v_encode`]: rebuilds the block word from its pair.
///
/// Requires `j < 2^i` (every digit of `j` must have a `y` to sit against)
/// and a budget large enough for the `i + popcount(j)` letters.
pub fn v_decode(i: &BigUint, j: &BigUint, x: GenId, y: GenId, budget: &Budget) -> Result<Word> {
    let iv = i.to_u64().ok_or(Error::ResourceBudget("block word length"))?;
    if iv == 0 {
        return Err(Error::NotABlockWord("i must be at least 1"));
    }
    if j.bits() > iv {
        return Err(Error::NotABlockWord("j needs more y letters than i provides"));
    }
    if iv.saturating_mul(2) > budget.max_letters as u64 {
        return Err(Error::ResourceBudget("block word length"));
    }
    let mut letters = Vec::new();
    for c in (0..iv).rev() {
        letters.push(Letter::pos(y));
        if j.bit(c) {
            letters.push(Letter::pos(x));
        }
    }
    Ok(Word::from_letters(letters))
}
