//! Exact computation with finitely presented groups and the simplicial
//! complexes built from them.
//!
//! The crate provides, bottom up:
//!
//! * free words over an indexed alphabet ([`words`]),
//! * the solvable Baumslag-Solitar group `<x, y | y^-1 x y = x^2>` acting by
//!   dyadic affine maps, and block-word encodings of commuting pairs
//!   ([`kgroup`]),
//! * the word problem in the Baumslag-Gersten group
//!   `<x, y, t | y^-1 x y = x^2, t^-1 x t = y>` via Britton reductions
//!   ([`bg`]),
//! * integers of tower-exponential size with exact comparison ([`tower`]),
//! * finite presentations, their relation matrices, and Smith normal form
//!   ([`presentation`], [`snf`]),
//! * elementary moves on presentations, recorded scripts, and breadth first
//!   search over move-equivalence classes ([`tietze`], [`canon`],
//!   [`edit`], [`distance`]),
//! * families of balanced presentations of the trivial group whose members
//!   are pairwise hard to connect by short move sequences ([`family`]),
//! * van Kampen diagram area search and the distortion bookkeeping for
//!   effective homomorphisms ([`diagrams`]),
//! * length and valence reduction pipelines that keep the presented group
//!   fixed while making every relator short ([`rewriting`]),
//! * simplicial complexes, bistellar moves, fundamental group presentations,
//!   and spanning-tree exchange walks ([`complexes`]).
//!
//! Everything is deterministic and allocation-only: the crate is `no_std`
//! (with `alloc`) outside of tests. Computations that could materialize
//! numbers or words of unbounded size take an explicit [`Budget`] and fail
//! with [`Error::ResourceBudget`] instead of diverging.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

use alloc::string::String;

pub mod bg;
pub mod canon;
pub mod complexes;
pub mod diagrams;
pub mod distance;
pub mod edit;
pub mod family;
pub mod kgroup;
pub mod presentation;
pub mod rewriting;
pub mod snf;
pub mod tietze;
pub mod tower;
pub mod words;

/// Size cap for computations whose outputs can grow with tower-exponential
/// speed.
///
/// `max_bits` bounds the bit length of any single integer an evaluation is
/// allowed to materialize, and `max_letters` bounds the length of any single
/// word a construction is allowed to write out. The default of `2^20` for
/// both keeps every documented example comfortably inside memory while
/// rejecting inputs that would not fit in any physical machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_bits: u64,
    pub max_letters: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_bits: 1 << 20, max_letters: 1 << 20 }
    }
}

impl Budget {
    pub fn with_bits(max_bits: u64) -> Self {
        Budget { max_bits, max_letters: max_bits.min(usize::MAX as u64) as usize }
    }
}

/// Crate-wide error type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A computation would exceed the configured [`Budget`]. The payload
    /// names the quantity that overflowed.
    ResourceBudget(&'static str),
    /// A word used letters outside the alphabet a function expected.
    UnknownGenerator(String),
    /// The input word is not a positive block word (see
    /// [`kgroup::v_encode`]).
    NotABlockWord(&'static str),
    /// An elementary move does not apply to the presentation in its current
    /// form. The payload says which precondition failed.
    InvalidMove(&'static str),
    /// A recorded script names a starting presentation other than the one it
    /// is being replayed against.
    FingerprintMismatch,
    /// A script replay failed at the given move index.
    Script { index: usize, reason: &'static str },
    /// Text input (a presentation, script, word, or complex) failed to
    /// parse. The payload carries the line number (1-based, 0 when unknown)
    /// and a description.
    Parse(usize, String),
    /// An input violated a documented structural precondition.
    Invalid(String),
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::ResourceBudget(what) => write!(f, "resource budget exceeded: {what}"),
            Error::UnknownGenerator(name) => write!(f, "unknown generator: {name}"),
            Error::NotABlockWord(why) => write!(f, "not a block word: {why}"),
            Error::InvalidMove(why) => write!(f, "move does not apply: {why}"),
            Error::FingerprintMismatch => {
                write!(f, "script names a different starting presentation")
            }
            Error::Script { index, reason } => {
                write!(f, "script move {index} does not apply: {reason}")
            }
            Error::Parse(line, msg) => {
                if *line == 0 {
                    write!(f, "parse error: {msg}")
                } else {
                    write!(f, "parse error on line {line}: {msg}")
                }
            }
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
