//! Compound edits: a builder that records elementary moves while applying
//! them, plus the letter-level dances that compile generator substitution,
//! relator swaps, and free reduction into move sequences.
//!
//! Everything here preserves the builder invariant that replaying the
//! recorded moves from the starting presentation reproduces the current one
//! letter for letter. The dances only ever use the elementary move set:
//! substitution of a generator by its defining word, for instance, rotates
//! the edited relator so the occurrence sits at the end, multiplies by a
//! suitably rotated or inverted copy of the defining relator, and deletes
//! the one cancelling pair this creates at the junction.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::presentation::Presentation;
use crate::tietze::{apply_move, TietzeMove, TietzeScript};
use crate::words::{GenId, Word};
use crate::{Budget, Error, Result};

/// Replaces every occurrence of `gen` in `word` by `value` (and of
/// `gen^-1` by `value^-1`), literally, with no reduction.
pub fn substitute_letters(word: &Word, gen: GenId, value: &Word) -> Word {
    let mut out = Word::new();
    for &letter in word.letters() {
        if letter.gen == gen {
            let piece = if letter.inverse { value.inverse() } else { value.clone() };
            out.extend(&piece);
        } else {
            out.push(letter);
        }
    }
    out
}

/// Records elementary moves while applying them to a working presentation.
///
/// The builder never applies a move it does not record, so
/// [`ScriptBuilder::finish`] always yields a script that replays from the
/// starting presentation to [`ScriptBuilder::current`] exactly.
pub struct ScriptBuilder {
    start_fingerprint: u64,
    current: Presentation,
    moves: Vec<TietzeMove>,
    budget: Budget,
}

impl ScriptBuilder {
    pub fn new(start: &Presentation, budget: &Budget) -> Self {
        ScriptBuilder {
            start_fingerprint: start.fingerprint(),
            current: start.clone(),
            moves: Vec::new(),
            budget: *budget,
        }
    }

    pub fn current(&self) -> &Presentation {
        &self.current
    }

    pub fn moves(&self) -> &[TietzeMove] {
        &self.moves
    }

    /// Applies and records one elementary move.
    pub fn push(&mut self, m: TietzeMove) -> Result<()> {
        self.current = apply_move(&self.current, &m, &self.budget)?;
        self.moves.push(m);
        Ok(())
    }

    /// The finished script, stamped with the starting fingerprint.
    pub fn finish(self, d: u32) -> TietzeScript {
        TietzeScript { start: Some(self.start_fingerprint), d, moves: self.moves }
    }

    fn relator(&self, rel: usize) -> Result<&Word> {
        self.current.relators.get(rel).ok_or(Error::InvalidMove("relator index"))
    }

    /// Rotation that skips recording no-ops (`by` a multiple of the length).
    pub fn rotate(&mut self, rel: usize, by: usize) -> Result<()> {
        let len = self.relator(rel)?.len();
        if len == 0 || by % len == 0 {
            return Ok(());
        }
        self.push(TietzeMove::Rotate { rel, by: by % len })
    }

    pub fn invert(&mut self, rel: usize) -> Result<()> {
        self.push(TietzeMove::Invert { rel })
    }

    pub fn multiply(&mut self, rel: usize, other: usize) -> Result<()> {
        self.push(TietzeMove::Multiply { rel, other })
    }

    /// Deletes cancelling pairs that straddle the junction before position
    /// `junction`, walking left while the letters keep cancelling. After a
    /// multiplication, passing the pre-multiplication length removes
    /// exactly the cancellation the product created.
    pub fn delete_junction(&mut self, rel: usize, mut junction: usize) -> Result<()> {
        loop {
            let word = self.relator(rel)?;
            if junction == 0 || junction >= word.len() {
                return Ok(());
            }
            if !word.letters()[junction - 1].cancels(word.letters()[junction]) {
                return Ok(());
            }
            self.push(TietzeMove::DeletePair { rel, pos: junction - 1 })?;
            junction -= 1;
        }
    }

    /// Deletes adjacent cancelling pairs, leftmost first, until the relator
    /// is freely reduced.
    pub fn free_reduce_relator(&mut self, rel: usize) -> Result<()> {
        loop {
            let word = self.relator(rel)?;
            let Some(pos) = (0..word.len().saturating_sub(1))
                .find(|&i| word.letters()[i].cancels(word.letters()[i + 1]))
            else {
                return Ok(());
            };
            self.push(TietzeMove::DeletePair { rel, pos })?;
        }
    }

    /// Reduces relator `rel` freely and cyclically, then rotates it onto
    /// `target`, which must be one of its rotations; errors otherwise.
    ///
    /// This is the cleanup step after a run of substitutions: those keep
    /// the relator equal to the target as a cyclic word up to free
    /// reduction, and this pins down the exact letters.
    pub fn cyclically_align(&mut self, rel: usize, target: &Word) -> Result<()> {
        self.free_reduce_relator(rel)?;
        // Cancel wrap-around pairs: rotate the head letter to the back,
        // where it sits next to its inverse.
        loop {
            let word = self.relator(rel)?;
            let len = word.len();
            if len < 2 || !word.letters()[0].cancels(word.letters()[len - 1]) {
                break;
            }
            self.rotate(rel, 1)?;
            self.push(TietzeMove::DeletePair { rel, pos: len - 2 })?;
        }
        let word = self.relator(rel)?;
        if word == target {
            return Ok(());
        }
        let by = (0..word.len()).find(|&k| &word.rotated(k) == target).ok_or_else(|| {
            Error::Invalid("relator is not a rotation of the alignment target".to_string())
        })?;
        self.rotate(rel, by)
    }

    /// Replaces every occurrence of a generator inside relator `rel` using
    /// the defining relator `def`, which must read `g u` with `g` a
    /// positive letter not occurring in `u` (so `g = u^-1` in the group).
    ///
    /// Occurrences of `g` become `u^-1` and occurrences of `g^-1` become
    /// `u`, one at a time: the relator is rotated so the occurrence is
    /// last, multiplied by a copy of the defining relator brought into the
    /// form that cancels it, and the junction pair is deleted. The defining
    /// relator is restored after each use. The edited relator is left
    /// rotated and unreduced; follow with [`ScriptBuilder::cyclically_align`].
    pub fn substitute_generator(&mut self, rel: usize, def: usize) -> Result<()> {
        if rel == def {
            return Err(Error::InvalidMove("cannot substitute inside the defining relator"));
        }
        let defining = self.relator(def)?;
        let head = *defining
            .letters()
            .first()
            .ok_or(Error::InvalidMove("empty defining relator"))?;
        if head.inverse {
            return Err(Error::InvalidMove("defining relator must start with a positive letter"));
        }
        let gen = head.gen;
        let tail_len = defining.len() - 1;
        if defining.letters()[1..].iter().any(|l| l.gen == gen) {
            return Err(Error::InvalidMove("defining word mentions the substituted generator"));
        }
        loop {
            let word = self.relator(rel)?;
            let Some(pos) = word.letters().iter().position(|l| l.gen == gen) else {
                return Ok(());
            };
            let inverse = word.letters()[pos].inverse;
            // Put the occurrence at the end of the relator.
            self.rotate(rel, pos + 1)?;
            if inverse {
                // ... g^-1 | g u -> ... u.
                let junction = self.relator(rel)?.len();
                self.multiply(rel, def)?;
                self.push(TietzeMove::DeletePair { rel, pos: junction - 1 })?;
            } else {
                // Bring the defining relator to the form g^-1 u^-1, use it,
                // and restore it; the transform is its own inverse.
                self.invert(def)?;
                self.rotate(def, tail_len)?;
                let junction = self.relator(rel)?.len();
                self.multiply(rel, def)?;
                self.push(TietzeMove::DeletePair { rel, pos: junction - 1 })?;
                self.invert(def)?;
                self.rotate(def, tail_len)?;
            }
        }
    }

    /// Swaps the words of relators `i` and `j` by multiplications,
    /// inversions, and junction deletions.
    pub fn swap_relators(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Ok(());
        }
        let a_len = self.relator(i)?.len();
        let b_len = self.relator(j)?.len();
        self.invert(j)?; // r_j = B^-1
        self.multiply(i, j)?; // r_i = A B^-1
        self.invert(i)?; // r_i = B A^-1
        self.multiply(j, i)?; // r_j = B^-1 B A^-1
        self.delete_junction(j, b_len)?; // r_j = A^-1
        self.invert(j)?; // r_j = A
        self.multiply(i, j)?; // r_i = B A^-1 A
        self.delete_junction(i, b_len + a_len) // r_i = B
    }
}
