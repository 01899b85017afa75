//! Finite presentations: generators, relators, length accounting, text
//! format, and the relation matrix.
//!
//! The length of a presentation is the sum of the relator lengths plus the
//! number of generators. Relators are stored exactly as written (no silent
//! reduction), because elementary moves and their certificates are
//! position-sensitive.
//!
//! Text format: a `gens:` line naming the generators (comma or whitespace
//! separated), then one `rel:` line per relator in word syntax. Blank
//! lines and `#` comments are skipped. An empty `rel:` line is the empty
//! relator, which is legal.

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;

use crate::snf::{cokernel_trivial, smith_normal_form, IntMatrix};
use crate::words::{parse_word, valid_gen_name, word_to_text, GenId, Word};
use crate::{Budget, Error, Result};
use num_bigint::{BigInt, BigUint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub gens: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(gens: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let p = Presentation { gens, relators };
        p.validate()?;
        Ok(p)
    }

    /// Checks the structural invariants: well-formed distinct generator
    /// names, and every relator letter indexing a listed generator.
    pub fn validate(&self) -> Result<()> {
        for (i, name) in self.gens.iter().enumerate() {
            if !valid_gen_name(name) {
                return Err(Error::Invalid(alloc::format!("bad generator name `{name}`")));
            }
            if self.gens[..i].contains(name) {
                return Err(Error::Invalid(alloc::format!("duplicate generator `{name}`")));
            }
        }
        for (idx, relator) in self.relators.iter().enumerate() {
            if let Some(g) = relator.max_gen() {
                if g as usize >= self.gens.len() {
                    return Err(Error::Invalid(alloc::format!(
                        "relator {idx} uses generator #{g}, but only {} exist",
                        self.gens.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn gen_id(&self, name: &str) -> Option<GenId> {
        self.gens.iter().position(|g| g == name).map(|i| i as GenId)
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    /// Total letters across all relators.
    pub fn total_letters(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    /// Presentation length: total relator letters plus generator count.
    pub fn length(&self) -> usize {
        self.total_letters() + self.gens.len()
    }

    pub fn is_balanced(&self) -> bool {
        self.gens.len() == self.relators.len()
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.relators.len(), self.gens.len());
        for (i, relator) in self.relators.iter().enumerate() {
            for letter in relator.letters() {
                let cell = &mut m[(i, letter.gen as usize)];
                *cell += BigInt::from(letter.sign());
            }
        }
        m
    }

    /// Diagonal of the Smith normal form of the relation matrix.
    pub fn snf_diagonal(&self) -> Vec<BigUint> {
        smith_normal_form(&self.relation_matrix())
    }

    /// True when the abelianization is the trivial group.
    pub fn h1_trivial(&self) -> bool {
        cokernel_trivial(&self.relation_matrix())
    }

    /// Parses the text format.
    pub fn parse(text: &str, budget: &Budget) -> Result<Presentation> {
        let mut gens: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.split_once('#') {
                Some((head, _)) => head.trim(),
                None => raw.trim(),
            };
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            if let Some(rest) = line.strip_prefix("gens:") {
                if gens.is_some() {
                    return Err(Error::Parse(lineno, "second gens: line".to_owned()));
                }
                let names: Vec<String> = rest
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(str::to_owned)
                    .collect();
                gens = Some(names);
            } else if let Some(rest) = line.strip_prefix("rel:") {
                let names = gens
                    .as_ref()
                    .ok_or_else(|| Error::Parse(lineno, "rel: before gens:".to_owned()))?;
                let word = parse_word(rest, names, budget.max_letters).map_err(|e| match e {
                    Error::Parse(_, msg) => Error::Parse(lineno, msg),
                    other => other,
                })?;
                relators.push(word);
            } else {
                return Err(Error::Parse(
                    lineno,
                    alloc::format!("expected gens: or rel:, got `{line}`"),
                ));
            }
        }
        let gens = gens.ok_or_else(|| Error::Parse(0, "missing gens: line".to_owned()))?;
        Presentation::new(gens, relators)
    }

    /// Renders the text format parsed by [`Presentation::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::from("gens: ");
        out.push_str(&self.gens.join(", "));
        out.push('\n');
        for relator in &self.relators {
            out.push_str("rel: ");
            out.push_str(&word_to_text(relator, &self.gens));
            out.push('\n');
        }
        out
    }

    /// Word parsing bound to this presentation's alphabet.
    pub fn word(&self, text: &str, budget: &Budget) -> Result<Word> {
        parse_word(text, &self.gens, budget.max_letters)
    }

    /// 64-bit FNV-1a over the literal structure (names, letters, order).
    /// Used by scripts to name their starting presentation; collisions
    /// would need adversarial inputs, and replay still fails loudly on a
    /// mismatched move either way.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv::new();
        h.byte(b'g');
        for name in &self.gens {
            h.bytes(name.as_bytes());
            h.byte(0xFF);
        }
        for relator in &self.relators {
            h.byte(b'r');
            for letter in relator.letters() {
                h.u32(letter.gen);
                h.byte(letter.inverse as u8);
            }
        }
        h.finish()
    }

    pub fn fingerprint_hex(&self) -> String {
        alloc::format!("{:016x}", self.fingerprint())
    }
}

/// Minimal FNV-1a implementation; enough for non-adversarial labels.
pub(crate) struct Fnv(u64);

impl Fnv {
    pub(crate) fn new() -> Self {
        Fnv(0xcbf29ce484222325)
    }

    pub(crate) fn byte(&mut self, b: u8) {
        self.0 ^= b as u64;
        self.0 = self.0.wrapping_mul(0x100000001b3);
    }

    pub(crate) fn bytes(&mut self, bs: &[u8]) {
        for &b in bs {
            self.byte(b);
        }
    }

    pub(crate) fn u32(&mut self, v: u32) {
        self.bytes(&v.to_le_bytes());
    }

    pub(crate) fn finish(&self) -> u64 {
        self.0
    }
}
