//! Elementary moves on presentations, recorded scripts, and replay.
//!
//! The move set, acting on a presentation with generators `x_1..x_r` and
//! relators `a_1..a_p`:
//!
//! * insert or delete a cancelling pair `g g^-1` inside a relator,
//! * cyclically rotate a relator,
//! * invert a relator,
//! * multiply a relator by another (`a_i -> a_i a_j`, `i != j`),
//! * adjoin a fresh generator `g` with defining relator `g w`, where `w`
//!   is a word of length at most `d - 1` in the existing generators (so
//!   `g = w^-1` in the presented group), or remove such a generator whose
//!   only occurrence anywhere is as the leading letter of its defining
//!   relator,
//! * append or remove an empty relator.
//!
//! `d` is the bound that makes move counts meaningful: distances measured
//! with different `d` are different metrics.
//!
//! Moves are applied literally: nothing is freely reduced or reordered
//! behind the caller's back, so a recorded script replays to a
//! letter-identical presentation. A script names its starting presentation
//! by fingerprint and is replayed with [`replay`]; failures carry the
//! index of the offending move.
//!
//! Script text format: one move per line (`OP3 2`, `OP4 1 3`,
//! `OP5 4 b a a`, `OP2 0 5`, `OP1 0 3 1 -1`, `OP1INV 0 3`, `OP5INV 4 b`,
//! `OP6`, `OP6INV 2`), with optional `# start: <hex>` and `# d: <n>`
//! header lines; other `#` lines are comments. Generators appearing in
//! `OP5`/`OP5INV` lines are written by name against the evolving
//! generator list.

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;

use crate::presentation::Presentation;
use crate::words::{parse_word, valid_gen_name, word_to_text, GenId, Letter, Word};
use crate::{Budget, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TietzeMove {
    /// Insert `g^e g^-e` at `pos` in relator `rel` (`e = -1` if `inverse`).
    InsertPair { rel: usize, pos: usize, gen: GenId, inverse: bool },
    /// Delete the cancelling pair at positions `pos, pos + 1`.
    DeletePair { rel: usize, pos: usize },
    /// Cyclic left rotation by `by` letters.
    Rotate { rel: usize, by: usize },
    /// Replace the relator by its inverse.
    Invert { rel: usize },
    /// `a_rel -> a_rel a_other`.
    Multiply { rel: usize, other: usize },
    /// Adjoin generator `name` with defining relator `name . word`.
    AddGen { d: u32, name: String, word: Word },
    /// Remove generator `name` and its defining relator.
    RemoveGen { d: u32, name: String },
    /// Append an empty relator.
    AddEmpty,
    /// Remove the empty relator at index `rel`.
    RemoveEmpty { rel: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TietzeScript {
    /// Fingerprint of the intended starting presentation, if declared.
    pub start: Option<u64>,
    /// The declared move-size parameter.
    pub d: u32,
    pub moves: Vec<TietzeMove>,
}

impl TietzeScript {
    pub fn new(d: u32) -> Self {
        TietzeScript { start: None, d, moves: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

/// Applies one move, returning the transformed presentation.
pub fn apply_move(p: &Presentation, m: &TietzeMove, budget: &Budget) -> Result<Presentation> {
    let mut out = p.clone();
    match m {
        TietzeMove::InsertPair { rel, pos, gen, inverse } => {
            let relator =
                out.relators.get_mut(*rel).ok_or(Error::InvalidMove("relator index"))?;
            if *pos > relator.len() {
                return Err(Error::InvalidMove("insertion position out of range"));
            }
            if *gen as usize >= out.gens.len() {
                return Err(Error::InvalidMove("generator index out of range"));
            }
            if relator.len() + 2 > budget.max_letters {
                return Err(Error::ResourceBudget("relator length"));
            }
            let first = Letter::new(*gen, *inverse);
            relator.0.insert(*pos, first.inverted());
            relator.0.insert(*pos, first);
        }
        TietzeMove::DeletePair { rel, pos } => {
            let relator =
                out.relators.get_mut(*rel).ok_or(Error::InvalidMove("relator index"))?;
            if pos + 1 >= relator.len() {
                return Err(Error::InvalidMove("deletion position out of range"));
            }
            if !relator.0[*pos].cancels(relator.0[pos + 1]) {
                return Err(Error::InvalidMove("letters at the position do not cancel"));
            }
            relator.0.drain(*pos..pos + 2);
        }
        TietzeMove::Rotate { rel, by } => {
            let relator =
                out.relators.get_mut(*rel).ok_or(Error::InvalidMove("relator index"))?;
            if relator.is_empty() {
                return Err(Error::InvalidMove("cannot rotate an empty relator"));
            }
            *relator = relator.rotated(*by);
        }
        TietzeMove::Invert { rel } => {
            let relator =
                out.relators.get_mut(*rel).ok_or(Error::InvalidMove("relator index"))?;
            *relator = relator.inverse();
        }
        TietzeMove::Multiply { rel, other } => {
            if rel == other {
                return Err(Error::InvalidMove("multiplication needs two distinct relators"));
            }
            if *rel >= out.relators.len() || *other >= out.relators.len() {
                return Err(Error::InvalidMove("relator index"));
            }
            if out.relators[*rel].len() + out.relators[*other].len() > budget.max_letters {
                return Err(Error::ResourceBudget("relator length"));
            }
            let rhs = out.relators[*other].clone();
            out.relators[*rel].extend(&rhs);
        }
        TietzeMove::AddGen { d, name, word } => {
            if *d < 2 {
                return Err(Error::InvalidMove("d must be at least 2"));
            }
            if !valid_gen_name(name) {
                return Err(Error::InvalidMove("bad generator name"));
            }
            if out.gen_id(name).is_some() {
                return Err(Error::InvalidMove("generator name already in use"));
            }
            if word.len() + 1 > *d as usize {
                return Err(Error::InvalidMove("defining word longer than d - 1"));
            }
            if word.max_gen().is_some_and(|g| g as usize >= out.gens.len()) {
                return Err(Error::InvalidMove("defining word uses the new generator"));
            }
            let new_id = out.gens.len() as GenId;
            out.gens.push(name.clone());
            let mut relator = Word::new();
            relator.push(Letter::pos(new_id));
            relator.extend(word);
            out.relators.push(relator);
        }
        TietzeMove::RemoveGen { d, name } => {
            if *d < 2 {
                return Err(Error::InvalidMove("d must be at least 2"));
            }
            let gen = out
                .gen_id(name)
                .ok_or(Error::InvalidMove("no generator with that name"))?;
            let mut home = None;
            for (idx, relator) in out.relators.iter().enumerate() {
                let (pos, neg) = relator.occurrences(gen);
                if pos + neg == 0 {
                    continue;
                }
                if home.is_some() || pos != 1 || neg != 0 {
                    return Err(Error::InvalidMove(
                        "generator must occur exactly once, positively",
                    ));
                }
                home = Some(idx);
            }
            let home = home.ok_or(Error::InvalidMove("generator occurs in no relator"))?;
            let relator = &out.relators[home];
            if relator.letters()[0] != Letter::pos(gen) {
                return Err(Error::InvalidMove(
                    "defining relator must start with the generator",
                ));
            }
            if relator.len() > *d as usize {
                return Err(Error::InvalidMove("defining relator longer than d"));
            }
            out.relators.remove(home);
            out.gens.remove(gen as usize);
            for relator in &mut out.relators {
                for letter in &mut relator.0 {
                    if letter.gen > gen {
                        letter.gen -= 1;
                    }
                }
            }
        }
        TietzeMove::AddEmpty => {
            out.relators.push(Word::new());
        }
        TietzeMove::RemoveEmpty { rel } => {
            let relator = out.relators.get(*rel).ok_or(Error::InvalidMove("relator index"))?;
            if !relator.is_empty() {
                return Err(Error::InvalidMove("relator is not empty"));
            }
            out.relators.remove(*rel);
        }
    }
    Ok(out)
}

/// A short script undoing `m` on `apply_move(p, m)`.
///
/// Pair insertions/deletions, rotations, inversions, and generator moves
/// invert exactly (up to appending removed items at the end rather than
/// their original position); multiplication has no single-move inverse, so
/// its script leaves a freely cancelling tail: the result is canonically
/// equal to `p`, not letter-identical.
pub fn invert_move(p: &Presentation, m: &TietzeMove) -> Result<Vec<TietzeMove>> {
    Ok(match m {
        TietzeMove::InsertPair { rel, pos, .. } => {
            alloc::vec![TietzeMove::DeletePair { rel: *rel, pos: *pos }]
        }
        TietzeMove::DeletePair { rel, pos } => {
            let relator = p.relators.get(*rel).ok_or(Error::InvalidMove("relator index"))?;
            let letter = *relator
                .letters()
                .get(*pos)
                .ok_or(Error::InvalidMove("deletion position out of range"))?;
            alloc::vec![TietzeMove::InsertPair {
                rel: *rel,
                pos: *pos,
                gen: letter.gen,
                inverse: letter.inverse,
            }]
        }
        TietzeMove::Rotate { rel, by } => {
            let relator = p.relators.get(*rel).ok_or(Error::InvalidMove("relator index"))?;
            let len = relator.len().max(1);
            alloc::vec![TietzeMove::Rotate { rel: *rel, by: len - by % len }]
        }
        TietzeMove::Invert { rel } => alloc::vec![TietzeMove::Invert { rel: *rel }],
        TietzeMove::Multiply { rel, other } => alloc::vec![
            TietzeMove::Invert { rel: *other },
            TietzeMove::Multiply { rel: *rel, other: *other },
            TietzeMove::Invert { rel: *other },
        ],
        TietzeMove::AddGen { d, name, .. } => {
            alloc::vec![TietzeMove::RemoveGen { d: *d, name: name.clone() }]
        }
        TietzeMove::RemoveGen { d, name } => {
            let gen = p.gen_id(name).ok_or(Error::InvalidMove("no generator with that name"))?;
            let relator = p
                .relators
                .iter()
                .find(|r| r.occurrences(gen).0 > 0)
                .ok_or(Error::InvalidMove("generator occurs in no relator"))?;
            // Removal renumbers the generators above the removed id, so the
            // defining tail (which never mentions the removed generator
            // itself) is shifted to match the presentation it will re-enter.
            let letters = relator.letters()[1..]
                .iter()
                .map(|l| Letter { gen: l.gen - u32::from(l.gen > gen), ..*l })
                .collect();
            alloc::vec![TietzeMove::AddGen { d: *d, name: name.clone(), word: Word::from_letters(letters) }]
        }
        TietzeMove::AddEmpty => {
            alloc::vec![TietzeMove::RemoveEmpty { rel: p.relators.len() }]
        }
        TietzeMove::RemoveEmpty { .. } => alloc::vec![TietzeMove::AddEmpty],
    })
}

/// Replays a script from its starting presentation.
pub fn replay(p: &Presentation, script: &TietzeScript, budget: &Budget) -> Result<Presentation> {
    if let Some(want) = script.start {
        if p.fingerprint() != want {
            return Err(Error::FingerprintMismatch);
        }
    }
    let mut current = p.clone();
    for (index, m) in script.moves.iter().enumerate() {
        current = apply_move(&current, m, budget).map_err(|e| match e {
            Error::InvalidMove(reason) => Error::Script { index, reason },
            other => other,
        })?;
    }
    Ok(current)
}

/// Walks a move list, tracking how the generator name list evolves.
fn evolve_names(names: &mut Vec<String>, m: &TietzeMove) {
    match m {
        TietzeMove::AddGen { name, .. } => names.push(name.clone()),
        TietzeMove::RemoveGen { name, .. } => {
            if let Some(at) = names.iter().position(|n| n == name) {
                names.remove(at);
            }
        }
        _ => {}
    }
}

/// Renders a script in the line format, resolving generator names against
/// the evolving alphabet that starts at `start`.
pub fn script_to_text(script: &TietzeScript, start: &Presentation) -> String {
    use core::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "# start: {}", start.fingerprint_hex());
    let _ = writeln!(out, "# d: {}", script.d);
    let mut names = start.gens.clone();
    for m in &script.moves {
        match m {
            TietzeMove::InsertPair { rel, pos, gen, inverse } => {
                let eps = if *inverse { -1 } else { 1 };
                let _ = writeln!(out, "OP1 {rel} {pos} {gen} {eps}");
            }
            TietzeMove::DeletePair { rel, pos } => {
                let _ = writeln!(out, "OP1INV {rel} {pos}");
            }
            TietzeMove::Rotate { rel, by } => {
                let _ = writeln!(out, "OP2 {rel} {by}");
            }
            TietzeMove::Invert { rel } => {
                let _ = writeln!(out, "OP3 {rel}");
            }
            TietzeMove::Multiply { rel, other } => {
                let _ = writeln!(out, "OP4 {rel} {other}");
            }
            TietzeMove::AddGen { d, name, word } => {
                let rendered = word_to_text(word, &names);
                if rendered.is_empty() {
                    let _ = writeln!(out, "OP5 {d} {name}");
                } else {
                    let _ = writeln!(out, "OP5 {d} {name} {rendered}");
                }
            }
            TietzeMove::RemoveGen { d, name } => {
                let _ = writeln!(out, "OP5INV {d} {name}");
            }
            TietzeMove::AddEmpty => {
                let _ = writeln!(out, "OP6");
            }
            TietzeMove::RemoveEmpty { rel } => {
                let _ = writeln!(out, "OP6INV {rel}");
            }
        }
        evolve_names(&mut names, m);
    }
    out
}

/// Parses the line format against the starting presentation's alphabet.
pub fn parse_script(text: &str, start: &Presentation, budget: &Budget) -> Result<TietzeScript> {
    let mut script = TietzeScript::new(2);
    let mut names = start.gens.clone();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("# start:") {
            let hex = rest.trim();
            let v = u64::from_str_radix(hex, 16)
                .map_err(|_| Error::Parse(lineno, "bad fingerprint".to_owned()))?;
            script.start = Some(v);
            continue;
        }
        if let Some(rest) = line.strip_prefix("# d:") {
            script.d = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(lineno, "bad d".to_owned()))?;
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let op = tokens.next().expect("nonempty line");
        let rest: Vec<&str> = tokens.collect();
        let parse_num = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse(lineno, alloc::format!("bad number `{s}`")))
        };
        let m = match op {
            "OP1" => {
                if rest.len() != 4 {
                    return Err(Error::Parse(lineno, "OP1 needs rel pos gen eps".to_owned()));
                }
                let eps: i8 = rest[3]
                    .parse()
                    .map_err(|_| Error::Parse(lineno, "bad sign".to_owned()))?;
                if eps != 1 && eps != -1 {
                    return Err(Error::Parse(lineno, "sign must be 1 or -1".to_owned()));
                }
                TietzeMove::InsertPair {
                    rel: parse_num(rest[0])?,
                    pos: parse_num(rest[1])?,
                    gen: parse_num(rest[2])? as GenId,
                    inverse: eps < 0,
                }
            }
            "OP1INV" => {
                if rest.len() != 2 {
                    return Err(Error::Parse(lineno, "OP1INV needs rel pos".to_owned()));
                }
                TietzeMove::DeletePair { rel: parse_num(rest[0])?, pos: parse_num(rest[1])? }
            }
            "OP2" => {
                if rest.len() != 2 {
                    return Err(Error::Parse(lineno, "OP2 needs rel by".to_owned()));
                }
                TietzeMove::Rotate { rel: parse_num(rest[0])?, by: parse_num(rest[1])? }
            }
            "OP3" => {
                if rest.len() != 1 {
                    return Err(Error::Parse(lineno, "OP3 needs rel".to_owned()));
                }
                TietzeMove::Invert { rel: parse_num(rest[0])? }
            }
            "OP4" => {
                if rest.len() != 2 {
                    return Err(Error::Parse(lineno, "OP4 needs rel other".to_owned()));
                }
                TietzeMove::Multiply { rel: parse_num(rest[0])?, other: parse_num(rest[1])? }
            }
            "OP5" => {
                if rest.len() < 2 {
                    return Err(Error::Parse(lineno, "OP5 needs d name [word]".to_owned()));
                }
                let d = parse_num(rest[0])? as u32;
                let name = rest[1].to_owned();
                let word_text = rest[2..].join(" ");
                let word = parse_word(&word_text, &names, budget.max_letters)
                    .map_err(|e| annotate_parse(e, lineno))?;
                TietzeMove::AddGen { d, name, word }
            }
            "OP5INV" => {
                if rest.len() != 2 {
                    return Err(Error::Parse(lineno, "OP5INV needs d name".to_owned()));
                }
                TietzeMove::RemoveGen { d: parse_num(rest[0])? as u32, name: rest[1].to_owned() }
            }
            "OP6" => {
                if !rest.is_empty() {
                    return Err(Error::Parse(lineno, "OP6 takes no arguments".to_owned()));
                }
                TietzeMove::AddEmpty
            }
            "OP6INV" => {
                if rest.len() != 1 {
                    return Err(Error::Parse(lineno, "OP6INV needs rel".to_owned()));
                }
                TietzeMove::RemoveEmpty { rel: parse_num(rest[0])? }
            }
            other => {
                return Err(Error::Parse(lineno, alloc::format!("unknown move `{other}`")));
            }
        };
        evolve_names(&mut names, &m);
        script.moves.push(m);
    }
    Ok(script)
}

fn annotate_parse(e: Error, lineno: usize) -> Error {
    match e {
        Error::Parse(_, msg) => Error::Parse(lineno, msg),
        other => other,
    }
}
