//! Van Kampen area search and effective-homomorphism verification.
//!
//! The area of a word `w` that is trivial in a finitely presented group is
//! the minimal number of 2-cells in a van Kampen diagram with boundary
//! `w`, equivalently the minimal `A` such that `w` is a product of `A`
//! conjugates of relators or their inverses in the free group. The search
//! here uses a third equivalent form, rewrite sequences: one cell
//! application inserts a cyclic rotation of a relator or its inverse at a
//! position in the current word and freely reduces. Replacing an occurrence
//! of `r1` by `r2^-1` (for a relator conjugate `r = r1 r2`) is the same
//! transition, because inserting the rotation of `r^-1` that begins with
//! `r1^-1` directly after the occurrence cancels it and leaves `r2^-1`; so
//! plain insertions already reach every word subword replacement does, at
//! the same cell count.
//!
//! The equivalence between diagram count and rewrite count is folklore but
//! load-bearing, so it is spelled out here. From a rewrite sequence, gluing
//! one lollipop per step (a disc with the relator boundary, attached along
//! the insertion path) builds a diagram with exactly one cell per
//! application. Conversely a diagram with `A` cells can be peeled one
//! boundary-adjacent cell at a time (recursing into lobes at cut points,
//! which only shortens the boundary); each peel is one relator application
//! and changes the boundary length by at most the relator length, so every
//! intermediate word stays within `l(w) + A * maxrel`. That bound is the
//! [`AreaBudget`] exactness guarantee: with `max_len` at least
//! `l(w) + max_cells * maxrel`, breadth-first search over reduced words
//! cannot prune away a minimal diagram, so a result at or below `max_cells`
//! is the exact area and exhaustion is a genuine lower-bound certificate.
//!
//! The second half verifies effective homomorphisms between presentations:
//! exact length bounds per generator image, area bounds per relator image
//! (three-valued, since the search may be inconclusive), round-trip bounds
//! for mutually inverse pairs, and [`script_to_map`], which extracts the
//! induced map from a replayable move script. Every move fixes the
//! surviving generators; removing a generator sends it to the inverse of
//! its defining tail, so the composite expresses each original generator in
//! the final presentation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::edit::substitute_letters;
use crate::presentation::Presentation;
use crate::tietze::{apply_move, TietzeMove, TietzeScript};
use crate::words::{GenId, Letter, Word};
use crate::{Budget, Error, Result};

/// Search limits for [`area_upper`].
///
/// `max_cells` caps the number of 2-cells; `max_len` caps the length of
/// every intermediate reduced word. Exactness guarantee: if
/// `max_len >= l(w) + max_cells * maxrel` (the longest relator length),
/// then a returned area `<= max_cells` is exactly the area of `w`, and an
/// absent result proves no diagram with at most `max_cells` cells exists.
/// See the module docs for why the bound suffices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AreaBudget {
    /// Most 2-cells any explored rewrite sequence may use.
    pub max_cells: u32,
    /// Longest intermediate reduced word the search will keep.
    pub max_len: usize,
}

impl AreaBudget {
    /// A budget satisfying the exactness guarantee for `w` at `max_cells`.
    pub fn exhaustive_for(p: &Presentation, w: &Word, max_cells: u32) -> AreaBudget {
        let maxrel = p.relators.iter().map(Word::len).max().unwrap_or(0);
        AreaBudget { max_cells, max_len: w.len() + (max_cells as usize) * maxrel }
    }

    /// The stock budget: 12 cells with the exactness-condition length cap.
    pub fn default_for(p: &Presentation, w: &Word) -> AreaBudget {
        AreaBudget::exhaustive_for(p, w, 12)
    }

    /// Whether this budget meets the exactness condition for `w` over `p`.
    pub fn is_exhaustive(&self, p: &Presentation, w: &Word) -> bool {
        let maxrel = p.relators.iter().map(Word::len).max().unwrap_or(0);
        (self.max_cells as usize)
            .checked_mul(maxrel)
            .and_then(|c| w.len().checked_add(c))
            .is_some_and(|need| self.max_len >= need)
    }
}

/// One applied 2-cell: insert rotation `offset` of relator `relator`
/// (inverted first when `inverted`) at letter boundary `position`, then
/// freely reduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellStep {
    /// Index of the relator being applied.
    pub relator: usize,
    /// Cyclic rotation applied to the oriented relator before insertion.
    pub offset: usize,
    /// Whether the relator is inverted before rotating.
    pub inverted: bool,
    /// Letter boundary of the current word receiving the insertion.
    pub position: usize,
}

/// Outcome of an [`area_upper`] search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaResult {
    /// Minimal cell count found, if the empty word was reached.
    pub cells: Option<u32>,
    /// A witnessing rewrite: exactly `cells` steps replaying to empty.
    pub trace: Vec<CellStep>,
    /// Whether the budget met the exactness condition, making `cells`
    /// exact when present and a proven lower bound (`> max_cells`) when
    /// absent.
    pub exhaustive: bool,
    /// Why the search stopped short, when `cells` is absent.
    pub exhaustion: Option<&'static str>,
    /// Number of distinct reduced words visited.
    pub explored: usize,
}

/// Pushes a letter onto a reduced-word stack, cancelling when possible.
fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last().is_some_and(|p| p.cancels(l)) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// `u` with `ins` spliced in at letter boundary `pos`, freely reduced.
fn spliced(u: &Word, pos: usize, ins: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(u.len() + ins.len());
    for &l in u.letters()[..pos].iter().chain(ins.letters()).chain(u.letters()[pos..].iter()) {
        push_reduced(&mut out, l);
    }
    Word::from_letters(out)
}

/// Breadth-first search for the minimal number of 2-cells filling `w`.
///
/// States are freely reduced words; one transition inserts a cyclic
/// rotation of a relator or its inverse and reduces. Returns the minimal
/// cell count reaching the empty word within the budget, with a replayable
/// trace; an absent count carries the exhaustion reason. The search is
/// deterministic: states expand in first-seen order and cells in
/// (relator, orientation, rotation, position) order.
pub fn area_upper(p: &Presentation, w: &Word, budget: &AreaBudget) -> Result<AreaResult> {
    for l in w.letters() {
        if (l.gen as usize) >= p.num_gens() {
            return Err(Error::UnknownGenerator(format!("generator id {}", l.gen)));
        }
    }
    let exhaustive = budget.is_exhaustive(p, w);
    let start = w.free_reduce();
    if start.is_empty() {
        return Ok(AreaResult {
            cells: Some(0),
            trace: Vec::new(),
            exhaustive,
            exhaustion: None,
            explored: 1,
        });
    }
    if start.len() > budget.max_len {
        return Ok(AreaResult {
            cells: None,
            trace: Vec::new(),
            exhaustive,
            exhaustion: Some("the start word already exceeds the length cap"),
            explored: 1,
        });
    }
    // Every insertable cell word: each relator, both orientations, every
    // cyclic rotation. Empty relators never change a word, so they are
    // skipped.
    let mut cells: Vec<(CellStep, Word)> = Vec::new();
    for (ri, r) in p.relators.iter().enumerate() {
        if r.is_empty() {
            continue;
        }
        for inverted in [false, true] {
            let oriented = if inverted { r.inverse() } else { r.clone() };
            for offset in 0..oriented.len() {
                let step = CellStep { relator: ri, offset, inverted, position: 0 };
                cells.push((step, oriented.rotated(offset)));
            }
        }
    }
    let mut nodes: Vec<(Word, Option<(usize, CellStep)>)> = vec![(start.clone(), None)];
    let mut seen: BTreeMap<Word, usize> = BTreeMap::new();
    seen.insert(start, 0);
    let mut frontier: Vec<usize> = vec![0];
    let mut depth: u32 = 0;
    while !frontier.is_empty() && depth < budget.max_cells {
        let mut next: Vec<usize> = Vec::new();
        for &ni in &frontier {
            let u = nodes[ni].0.clone();
            for (proto, cw) in &cells {
                for position in 0..=u.len() {
                    let cand = spliced(&u, position, cw);
                    let step = CellStep { position, ..*proto };
                    if cand.is_empty() {
                        let mut trace = vec![step];
                        let mut at = ni;
                        while let Some((parent, s)) = nodes[at].1 {
                            trace.push(s);
                            at = parent;
                        }
                        trace.reverse();
                        return Ok(AreaResult {
                            cells: Some(depth + 1),
                            trace,
                            exhaustive,
                            exhaustion: None,
                            explored: nodes.len() + 1,
                        });
                    }
                    if cand.len() > budget.max_len || seen.contains_key(&cand) {
                        continue;
                    }
                    let idx = nodes.len();
                    seen.insert(cand.clone(), idx);
                    nodes.push((cand, Some((ni, step))));
                    next.push(idx);
                }
            }
        }
        frontier = next;
        depth += 1;
    }
    let exhaustion = Some(if frontier.is_empty() {
        "every reachable word within the length cap was explored"
    } else {
        "the cell budget ran out before the empty word was reached"
    });
    Ok(AreaResult { cells: None, trace: Vec::new(), exhaustive, exhaustion, explored: nodes.len() })
}

/// Applies one recorded 2-cell to a word and freely reduces.
pub fn apply_cell(p: &Presentation, word: &Word, step: &CellStep) -> Result<Word> {
    let r = p
        .relators
        .get(step.relator)
        .ok_or_else(|| Error::Invalid(format!("no relator {}", step.relator)))?;
    if r.is_empty() {
        return Err(Error::Invalid(format!("relator {} is empty", step.relator)));
    }
    if step.offset >= r.len() {
        return Err(Error::Invalid(format!("rotation {} out of range", step.offset)));
    }
    if step.position > word.len() {
        return Err(Error::Invalid(format!("position {} out of range", step.position)));
    }
    let oriented = if step.inverted { r.inverse() } else { r.clone() };
    Ok(spliced(word, step.position, &oriented.rotated(step.offset)))
}

/// Replays a cell trace from `w` (reduced first), returning the final word.
pub fn replay_trace(p: &Presentation, w: &Word, trace: &[CellStep]) -> Result<Word> {
    let mut current = w.free_reduce();
    for step in trace {
        current = apply_cell(p, &current, step)?;
    }
    Ok(current)
}

/// Renders a trace one cell per line: `relator offset +|- position`.
pub fn trace_to_text(trace: &[CellStep]) -> String {
    let mut out = String::new();
    for s in trace {
        let orientation = if s.inverted { '-' } else { '+' };
        out.push_str(&format!("{} {} {} {}\n", s.relator, s.offset, orientation, s.position));
    }
    out
}

/// Parses the [`trace_to_text`] format; `#` lines and blanks are skipped.
pub fn parse_trace(text: &str) -> Result<Vec<CellStep>> {
    let mut out = Vec::new();
    for (at, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let &[relator, offset, orientation, position] = fields.as_slice() else {
            return Err(Error::Parse(at + 1, "expected: relator offset +|- position".into()));
        };
        let relator = relator
            .parse()
            .map_err(|_| Error::Parse(at + 1, format!("bad relator index {relator:?}")))?;
        let offset = offset
            .parse()
            .map_err(|_| Error::Parse(at + 1, format!("bad rotation {offset:?}")))?;
        let inverted = match orientation {
            "+" => false,
            "-" => true,
            other => return Err(Error::Parse(at + 1, format!("bad orientation {other:?}"))),
        };
        let position = position
            .parse()
            .map_err(|_| Error::Parse(at + 1, format!("bad position {position:?}")))?;
        out.push(CellStep { relator, offset, inverted, position });
    }
    Ok(out)
}

/// Evidence for the claim "no diagram with fewer than `threshold` cells".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerEvidence {
    /// The claimed strict lower bound on cell counts.
    pub threshold: u32,
    /// A found diagram size below the threshold, refuting the claim.
    pub counterexample: Option<u32>,
    /// Whether the refutation search was exhaustive; when true and no
    /// counterexample was found, the claim is proven, otherwise the
    /// absence of a counterexample is evidence only.
    pub exhaustive: bool,
}

impl LowerEvidence {
    /// Whether the claim survived the search (possibly only as evidence).
    pub fn holds_within_budget(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Searches for a diagram refuting `Area(w) >= threshold`.
///
/// The search runs below `threshold` cells within `budget`; a lower bound
/// is never *established* here unless the clipped budget was exhaustive.
pub fn area_lower_evidence(
    p: &Presentation,
    w: &Word,
    threshold: u32,
    budget: &AreaBudget,
) -> Result<LowerEvidence> {
    if threshold == 0 {
        // No diagram has fewer than zero cells.
        return Ok(LowerEvidence { threshold, counterexample: None, exhaustive: true });
    }
    let clipped = AreaBudget { max_cells: budget.max_cells.min(threshold - 1), ..*budget };
    let result = area_upper(p, w, &clipped)?;
    Ok(LowerEvidence {
        threshold,
        counterexample: result.cells,
        exhaustive: result.exhaustive && clipped.max_cells == threshold - 1,
    })
}

/// Three-valued outcome of a budget-limited check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The bound was verified.
    Satisfied,
    /// The bound provably fails.
    Violated,
    /// The search budget ran out before deciding.
    Unknown,
}

impl Verdict {
    /// Combines clause verdicts: any violation dominates, then unknowns.
    pub fn meet(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Violated, _) | (_, Verdict::Violated) => Verdict::Violated,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Satisfied,
        }
    }
}

/// A homomorphism candidate between presented groups, given by generator
/// images. Images are kept freely reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectiveMap {
    /// Domain presentation.
    pub source: Presentation,
    /// Codomain presentation.
    pub target: Presentation,
    /// Image of each source generator, a reduced word over the target.
    pub image: Vec<Word>,
}

impl EffectiveMap {
    /// Builds a map after validating image count and target alphabet.
    pub fn new(source: Presentation, target: Presentation, image: Vec<Word>) -> Result<Self> {
        if image.len() != source.num_gens() {
            return Err(Error::Invalid(format!(
                "expected {} generator images, got {}",
                source.num_gens(),
                image.len()
            )));
        }
        let mut reduced = Vec::with_capacity(image.len());
        for w in &image {
            for l in w.letters() {
                if (l.gen as usize) >= target.num_gens() {
                    return Err(Error::UnknownGenerator(format!("generator id {}", l.gen)));
                }
            }
            reduced.push(w.free_reduce());
        }
        Ok(EffectiveMap { source, target, image: reduced })
    }

    /// The identity map on `p`.
    pub fn identity(p: &Presentation) -> Self {
        let image = (0..p.num_gens())
            .map(|g| Word::from_letters(vec![Letter::pos(g as GenId)]))
            .collect();
        EffectiveMap { source: p.clone(), target: p.clone(), image }
    }

    /// Applies the map letterwise and freely reduces.
    pub fn apply(&self, w: &Word, budget: &Budget) -> Result<Word> {
        let mut out: Vec<Letter> = Vec::new();
        for l in w.letters() {
            let img = self
                .image
                .get(l.gen as usize)
                .ok_or_else(|| Error::UnknownGenerator(format!("generator id {}", l.gen)))?;
            if l.inverse {
                for &m in img.letters().iter().rev() {
                    push_reduced(&mut out, Letter::new(m.gen, !m.inverse));
                }
            } else {
                for &m in img.letters() {
                    push_reduced(&mut out, m);
                }
            }
            if out.len() > budget.max_letters {
                return Err(Error::ResourceBudget("mapped word length"));
            }
        }
        Ok(Word::from_letters(out))
    }
}

/// Per-clause report from [`map_type_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapTypeReport {
    /// `l(F(a))` for each source generator; the length clause is exact.
    pub image_lengths: Vec<usize>,
    /// Whether every image length is strictly below the length bound.
    pub lengths_ok: bool,
    /// `Area(F(u)) < n_bound` verdict for each source relator.
    pub relator_checks: Vec<Verdict>,
    /// Combined verdict over all clauses.
    pub verdict: Verdict,
}

/// Area verdict for a single word: is `Area(w) < n_bound` over `p`?
fn area_verdict(p: &Presentation, w: &Word, n_bound: u32, area: &AreaBudget) -> Result<Verdict> {
    if n_bound == 0 {
        // No word has area below zero.
        return Ok(Verdict::Violated);
    }
    let clipped = AreaBudget { max_cells: area.max_cells.min(n_bound - 1), ..*area };
    let result = area_upper(p, w, &clipped)?;
    Ok(match result.cells {
        Some(_) => Verdict::Satisfied,
        None if result.exhaustive && clipped.max_cells == n_bound - 1 => Verdict::Violated,
        None => Verdict::Unknown,
    })
}

/// Checks the two decidable clauses of an `(L, N)` effective map: every
/// generator image shorter than `l_bound` (exact) and every relator image
/// of area below `n_bound` (three-valued, via [`area_upper`]).
pub fn map_type_check(
    f: &EffectiveMap,
    l_bound: usize,
    n_bound: u32,
    area: &AreaBudget,
    budget: &Budget,
) -> Result<MapTypeReport> {
    let image_lengths: Vec<usize> = f.image.iter().map(Word::len).collect();
    let lengths_ok = image_lengths.iter().all(|&l| l < l_bound);
    let mut relator_checks = Vec::with_capacity(f.source.num_relators());
    for r in &f.source.relators {
        let image = f.apply(r, budget)?;
        relator_checks.push(area_verdict(&f.target, &image, n_bound, area)?);
    }
    let mut verdict = if lengths_ok { Verdict::Satisfied } else { Verdict::Violated };
    for v in &relator_checks {
        verdict = verdict.meet(*v);
    }
    Ok(MapTypeReport { image_lengths, lengths_ok, relator_checks, verdict })
}

/// Report from [`effective_iso_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    /// Type check of the forward map.
    pub forward: MapTypeReport,
    /// Type check of the backward map.
    pub backward: MapTypeReport,
    /// Per source generator `a`: `Area((G o F)(a) a^-1) < n_bound`.
    pub forward_round_trips: Vec<Verdict>,
    /// Per target generator `b`: `Area((F o G)(b) b^-1) < n_bound`.
    pub backward_round_trips: Vec<Verdict>,
    /// Combined verdict over every clause of both maps.
    pub verdict: Verdict,
}

/// Round-trip verdicts for `after(before(a)) a^-1` over `before.source`.
fn round_trips(
    before: &EffectiveMap,
    after: &EffectiveMap,
    n_bound: u32,
    area: &AreaBudget,
    budget: &Budget,
) -> Result<Vec<Verdict>> {
    let mut out = Vec::with_capacity(before.image.len());
    for (a, img) in before.image.iter().enumerate() {
        let mut w = after.apply(img, budget)?;
        w.push(Letter::neg(a as GenId));
        out.push(area_verdict(&before.source, &w.free_reduce(), n_bound, area)?);
    }
    Ok(out)
}

/// Checks a mutually inverse pair of effective maps: both are `(L, N)` and
/// both round-trip words `(G o F)(a) a^-1`, `(F o G)(b) b^-1` have area
/// below `n_bound`.
pub fn effective_iso_check(
    f: &EffectiveMap,
    g: &EffectiveMap,
    l_bound: usize,
    n_bound: u32,
    area: &AreaBudget,
    budget: &Budget,
) -> Result<IsoReport> {
    if f.target != g.source || g.target != f.source {
        return Err(Error::Invalid(
            "the two maps do not connect the same pair of presentations".into(),
        ));
    }
    let forward = map_type_check(f, l_bound, n_bound, area, budget)?;
    let backward = map_type_check(g, l_bound, n_bound, area, budget)?;
    let forward_round_trips = round_trips(f, g, n_bound, area, budget)?;
    let backward_round_trips = round_trips(g, f, n_bound, area, budget)?;
    let mut verdict = forward.verdict.meet(backward.verdict);
    for v in forward_round_trips.iter().chain(&backward_round_trips) {
        verdict = verdict.meet(*v);
    }
    Ok(IsoReport { forward, backward, forward_round_trips, backward_round_trips, verdict })
}

/// Extracts the effective map induced by a move script from `p` to `q`,
/// together with its claimed type.
///
/// Every move fixes the surviving generators; a generator removal sends
/// the removed generator to the inverse of its defining tail (the relator
/// is `g w`, so `g = w^-1` in the group) and renumbers the rest. The
/// claimed type multiplies per-move types: a relator multiplication
/// contributes `(2, 3)`, every other move `(d, 2)`, composing to
/// `(product of length factors, 1 + 2^multiplications)`; both components
/// are bounded by the blanket `(d^N, 1 + 2^N)` for a script of `N` moves.
/// The length component is clamped to at least 2 so the empty script
/// claims `(2, 2)`, the type of the identity map.
pub fn script_to_map(
    script: &TietzeScript,
    p: &Presentation,
    q: &Presentation,
    budget: &Budget,
) -> Result<(EffectiveMap, (BigUint, BigUint))> {
    if let Some(want) = script.start {
        if p.fingerprint() != want {
            return Err(Error::FingerprintMismatch);
        }
    }
    let d = BigUint::from(script.d.max(2));
    let mut current = p.clone();
    let mut image: Vec<Word> = (0..p.num_gens())
        .map(|g| Word::from_letters(vec![Letter::pos(g as GenId)]))
        .collect();
    let mut length_factor = BigUint::one();
    let mut multiplications: u64 = 0;
    for (index, m) in script.moves.iter().enumerate() {
        let next = apply_move(&current, m, budget).map_err(|e| match e {
            Error::InvalidMove(reason) => Error::Script { index, reason },
            other => other,
        })?;
        if let TietzeMove::RemoveGen { name, .. } = m {
            // apply_move validated the removal, so the generator exists and
            // heads exactly one relator g w with no other occurrences.
            let g = current
                .gen_id(name)
                .ok_or(Error::Script { index, reason: "unknown generator" })?;
            let home = current
                .relators
                .iter()
                .find(|r| r.letters().first() == Some(&Letter::pos(g)))
                .ok_or(Error::Script { index, reason: "defining relator" })?;
            let value = Word::from_letters(home.letters()[1..].to_vec()).inverse();
            for img in image.iter_mut() {
                let substituted = substitute_letters(img, g, &value);
                let mut out: Vec<Letter> = Vec::with_capacity(substituted.len());
                for &l in substituted.letters() {
                    let l = if l.gen > g { Letter::new(l.gen - 1, l.inverse) } else { l };
                    push_reduced(&mut out, l);
                }
                if out.len() > budget.max_letters {
                    return Err(Error::ResourceBudget("generator image length"));
                }
                *img = Word::from_letters(out);
            }
        }
        if matches!(m, TietzeMove::Multiply { .. }) {
            multiplications += 1;
            length_factor *= 2u32;
        } else {
            length_factor *= &d;
        }
        if length_factor.bits() > budget.max_bits {
            return Err(Error::ResourceBudget("claimed type size"));
        }
        current = next;
    }
    if current != *q {
        return Err(Error::Invalid(
            "the script does not land on the given target presentation".into(),
        ));
    }
    if multiplications >= budget.max_bits {
        return Err(Error::ResourceBudget("claimed type size"));
    }
    let length_bound = length_factor.max(BigUint::from(2u32));
    let area_bound = BigUint::one() + (BigUint::one() << multiplications);
    let map = EffectiveMap::new(p.clone(), q.clone(), image)?;
    Ok((map, (length_bound, area_bound)))
}
