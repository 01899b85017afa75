//! Breadth first search for the move distance between presentations.
//!
//! The metric counts substantive elementary moves: relator inversion,
//! relator multiplication (by a relator or its inverse), adjoining or
//! removing a generator, and appending or removing an empty relator.
//! Cancelling-pair insertions and cyclic rotations are absorbed into the
//! search states, which are canonical forms (see [`crate::canon`]): two
//! presentations at distance 0 are equal up to exactly those free
//! operations plus relator reordering and generator renaming.
//!
//! The move set is closed under inverses (multiplication by an inverse
//! relator counts one move, exactly like the multiplication it undoes),
//! which makes every class edge symmetric and the distance a true metric.
//!
//! The searched graph is infinite, so every search runs under
//! [`SearchLimits`] and reports honestly in [`Outcome`] whether the number
//! it found is the exact distance or only an upper bound:
//!
//! * a found distance of 0 or 1 is always exact (distance 0 is checked
//!   first, and single moves are enumerated completely enough that a
//!   1-step path cannot be beaten);
//! * a longer found distance is exact only when every expansion below the
//!   found depth enumerated its complete neighbor set and nothing was
//!   pruned there. Complete enumeration needs `op5_all_words`, a letter
//!   cap (to bound multiplication conjugators), and `conjugator_letters`
//!   at least the bound the cap implies; the search tracks the first depth
//!   at which any of this failed.
//! * when the target is not found and no incompleteness occurred at
//!   expanded depths, `exact` certifies "distance greater than
//!   `max_depth`" (or, if the whole capped component was exhausted,
//!   "unreachable within these limits").
//!
//! Neighbor enumeration per class: inversion of each relator; every
//! splicing `rot(a_i) z rot(a_j)^e z^-1` (`e = 1, -1`) of an ordered
//! relator pair with conjugators `z` up to `conjugator_letters` (the plain
//! `z = empty` case is the workhorse; conjugation is reachable in one move
//! because pair insertions are free); adjoining a generator defined by a
//! candidate word (cyclic subwords of current relators and their inverses
//! by default, all reduced words of length below `d` with
//! `op5_all_words`); removing a generator that occurs exactly once,
//! positively, in a relator of length at most `d`; appending or removing
//! an empty relator.
//!
//! With `bidirectional`, the search meets in the middle; edge symmetry
//! lets both sides expand the same neighbor sets. Alternating frontiers
//! can overshoot the minimal meeting point, so bidirectional results
//! beyond distance 1 are reported as upper bounds.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::canon::{canonical_form, canonical_form_of, CanonicalForm};
use crate::edit::ScriptBuilder;
use crate::presentation::Presentation;
use crate::tietze::TietzeMove;
use crate::words::{word_to_text, GenId, Letter, Word};
use crate::Budget;

#[derive(Clone, Debug)]
pub struct SearchLimits {
    /// Move-size parameter: adjoined generators are defined by words of
    /// length below `d`, and removed ones need defining relators of length
    /// at most `d`.
    pub d: u32,
    /// Do not look for paths longer than this.
    pub max_depth: usize,
    /// Cap on distinct classes visited.
    pub max_states: usize,
    /// Cap on total relator letters per visited class. `None` leaves word
    /// growth unchecked (and makes exactness beyond distance 1
    /// unclaimable, since multiplication conjugators cannot be bounded).
    pub max_total_letters: Option<usize>,
    /// Enumerate every reduced defining word for adjoined generators
    /// instead of only cyclic subwords of current relators.
    pub op5_all_words: bool,
    /// Enumerate multiplication splicings conjugated by words up to this
    /// length (0 keeps plain concatenation of rotations).
    pub conjugator_letters: usize,
    /// Meet-in-the-middle search; faster for long paths, upper bounds only.
    pub bidirectional: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            d: 4,
            max_depth: 6,
            max_states: 200_000,
            max_total_letters: None,
            op5_all_words: false,
            conjugator_letters: 0,
            bidirectional: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    /// Length of the move path found, if any.
    pub distance: Option<usize>,
    /// Whether the result is proven: a found distance is the true metric
    /// value, or an absent one certifies that no path of length
    /// `<= max_depth` exists.
    pub exact: bool,
    /// Distinct classes visited.
    pub states: usize,
    /// Classes expanded.
    pub expansions: usize,
    /// What ended the search.
    pub reason: String,
    /// Human-readable class-move descriptions along the found path.
    /// Relator and generator indices refer to the canonical form of the
    /// state the move is applied to.
    pub path: Option<Vec<String>>,
}

/// One enumerated neighbor: the class reached and a description of the
/// move that reaches it.
type Neighbor = (CanonicalForm, String);

struct Enumeration {
    neighbors: Vec<Neighbor>,
    /// Whether this expansion provably listed every neighbor (within the
    /// letter cap, with complete conjugator and defining-word coverage).
    complete: bool,
}

fn letters_ok(form: &CanonicalForm, limits: &SearchLimits) -> bool {
    limits.max_total_letters.is_none_or(|cap| form.total_letters() <= cap)
}

/// All rotations of a word; the empty word has one rotation.
fn rotations(w: &Word) -> Vec<Word> {
    if w.is_empty() {
        return alloc::vec![Word::new()];
    }
    (0..w.len()).map(|by| w.rotated(by)).collect()
}

/// Reduced words over `n` generators of length `min..=max`, by depth
/// first search in a fixed letter order.
fn reduced_words(n: usize, min: usize, max: usize, out: &mut Vec<Word>) {
    fn go(n: usize, min: usize, max: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if cur.len() >= min {
            out.push(Word::from_letters(cur.clone()));
        }
        if cur.len() == max {
            return;
        }
        for gen in 0..n as GenId {
            for inverse in [false, true] {
                let l = Letter::new(gen, inverse);
                if cur.last().is_some_and(|prev| prev.cancels(l)) {
                    continue;
                }
                cur.push(l);
                go(n, min, max, cur, out);
                cur.pop();
            }
        }
    }
    let mut cur = Vec::new();
    go(n, min, max, &mut cur, out);
}

/// Candidate defining words for adjoining a generator.
fn op5_candidates(form: &CanonicalForm, limits: &SearchLimits) -> Vec<Word> {
    let max = (limits.d as usize).saturating_sub(1);
    let mut set: BTreeSet<Word> = BTreeSet::new();
    set.insert(Word::new());
    if limits.op5_all_words {
        let mut all = Vec::new();
        reduced_words(form.num_gens, 1, max, &mut all);
        set.extend(all);
    } else {
        for r in &form.relators {
            for base in [r.clone(), r.inverse()] {
                for rot in rotations(&base) {
                    for len in 1..=max.min(rot.len()) {
                        set.insert(Word::from_letters(rot.letters()[..len].to_vec()));
                    }
                }
            }
        }
    }
    set.into_iter().collect()
}

/// Enumerates the forward neighbors of a class.
fn forward_neighbors(form: &CanonicalForm, limits: &SearchLimits) -> Enumeration {
    let n = form.num_gens;
    let rels = &form.relators;
    let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
    let mut neighbors: Vec<Neighbor> = Vec::new();
    let mut complete = true;
    let mut push = |form: CanonicalForm, desc: String, seen: &mut BTreeSet<CanonicalForm>| {
        if letters_ok(&form, limits) {
            if seen.insert(form.clone()) {
                neighbors.push((form, desc));
            }
            true
        } else {
            false
        }
    };

    // Inversion. Empty relators invert to themselves.
    for i in 0..rels.len() {
        if rels[i].is_empty() {
            continue;
        }
        let mut next = rels.to_vec();
        next[i] = next[i].inverse();
        let c = canonical_form_of(n, &next);
        if !push(c.form, format!("invert relator {i}"), &mut seen) {
            complete = false;
        }
    }

    // Multiplication splicings rot(r_i) z rot(r_j)^e z^-1. A conjugator
    // longer than (result cap + both factor lengths) / 2 only reproduces
    // classes reachable with a shorter one, so with a letter cap the
    // per-pair enumeration below that bound is complete; without a cap no
    // finite enumeration is.
    let total = form.total_letters();
    for i in 0..rels.len() {
        for j in 0..rels.len() {
            if i == j || rels[j].is_empty() {
                continue;
            }
            let z_max = match limits.max_total_letters {
                Some(cap) => {
                    let result_cap = cap.saturating_sub(total - rels[i].len());
                    let bound = (result_cap + rels[i].len() + rels[j].len()) / 2 + 1;
                    if limits.conjugator_letters < bound {
                        complete = false;
                    }
                    bound.min(limits.conjugator_letters)
                }
                None => {
                    complete = false;
                    limits.conjugator_letters
                }
            };
            let mut conjugators: Vec<Word> = Vec::new();
            reduced_words(n, 0, z_max, &mut conjugators);
            for (rj_base, inverse) in [(rels[j].clone(), false), (rels[j].inverse(), true)] {
                for ri in rotations(&rels[i]) {
                    for rj in rotations(&rj_base) {
                        for z in &conjugators {
                            let mut w = ri.clone();
                            w.extend(z);
                            w.extend(&rj);
                            w.extend(&z.inverse());
                            let mut next = rels.to_vec();
                            next[i] = w;
                            let c = canonical_form_of(n, &next);
                            let what = if inverse {
                                format!("the inverse of relator {j}")
                            } else {
                                format!("relator {j}")
                            };
                            let desc = if z.is_empty() {
                                format!("multiply relator {i} by a rotation of {what}")
                            } else {
                                format!(
                                    "multiply relator {i} by a conjugated rotation of {what}"
                                )
                            };
                            if !push(c.form, desc, &mut seen) {
                                complete = false;
                            }
                        }
                    }
                }
            }
        }
    }

    // Adjoin a generator.
    for w in op5_candidates(form, limits) {
        let mut relator = Word::new();
        relator.push(Letter::pos(n as GenId));
        relator.extend(&w);
        let mut next = rels.to_vec();
        next.push(relator);
        let c = canonical_form_of(n + 1, &next);
        let names: Vec<String> = (0..n).map(|k| format!("g{k}")).collect();
        let desc = if w.is_empty() {
            String::from("adjoin a generator with empty defining word")
        } else {
            format!("adjoin a generator defined by {}", word_to_text(&w, &names))
        };
        if !push(c.form, desc, &mut seen) {
            complete = false;
        }
    }
    if !limits.op5_all_words {
        complete = false;
    }

    // Remove a generator occurring exactly once, positively, in a short
    // enough relator.
    for g in 0..n as GenId {
        let mut home = None;
        let mut counts = (0usize, 0usize);
        for (idx, r) in rels.iter().enumerate() {
            let (pos, neg) = r.occurrences(g);
            if pos + neg > 0 {
                home = Some(idx);
            }
            counts.0 += pos;
            counts.1 += neg;
        }
        if counts != (1, 0) {
            continue;
        }
        let home = home.expect("occurrence located");
        if rels[home].len() > limits.d as usize {
            continue;
        }
        let mut next: Vec<Word> = Vec::new();
        for (idx, r) in rels.iter().enumerate() {
            if idx == home {
                continue;
            }
            let mut shifted = r.clone();
            for l in &mut shifted.0 {
                if l.gen > g {
                    l.gen -= 1;
                }
            }
            next.push(shifted);
        }
        let c = canonical_form_of(n - 1, &next);
        if !push(c.form, format!("remove generator {g}"), &mut seen) {
            complete = false;
        }
    }

    // Empty relators.
    {
        let mut next = rels.to_vec();
        next.push(Word::new());
        let c = canonical_form_of(n, &next);
        if !push(c.form, String::from("append an empty relator"), &mut seen) {
            complete = false;
        }
    }
    if let Some(at) = rels.iter().position(|r| r.is_empty()) {
        let mut next = rels.to_vec();
        next.remove(at);
        let c = canonical_form_of(n, &next);
        if !push(c.form, String::from("remove an empty relator"), &mut seen) {
            complete = false;
        }
    }

    Enumeration { neighbors, complete }
}

/// Move distance between two presentations under the given limits.
pub fn tietze_distance(p: &Presentation, q: &Presentation, limits: &SearchLimits) -> Outcome {
    class_distance(&canonical_form(p).form, &canonical_form(q).form, limits)
}

/// Move distance between two canonical classes.
pub fn class_distance(
    start: &CanonicalForm,
    target: &CanonicalForm,
    limits: &SearchLimits,
) -> Outcome {
    if start == target {
        return Outcome {
            distance: Some(0),
            exact: true,
            states: 1,
            expansions: 0,
            reason: String::from("equal canonical forms"),
            path: Some(Vec::new()),
        };
    }
    if limits.bidirectional {
        bidirectional_search(start, target, limits)
    } else {
        forward_search(start, target, limits)
    }
}

fn forward_search(
    start: &CanonicalForm,
    target: &CanonicalForm,
    limits: &SearchLimits,
) -> Outcome {
    // visited maps a class to its depth; parents record the tree.
    let mut visited: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
    let mut parents: BTreeMap<CanonicalForm, (CanonicalForm, String)> = BTreeMap::new();
    let mut queue: VecDeque<CanonicalForm> = VecDeque::new();
    visited.insert(start.clone(), 0);
    queue.push_back(start.clone());
    // First depth at which the search provably missed an edge (incomplete
    // expansion or pruned neighbor). A found distance k is exact when
    // k <= 1 or every such depth is >= k - 1.
    let mut incomplete_at: Option<usize> = None;
    let mut expansions = 0usize;
    let mut capped = false;
    while let Some(state) = queue.pop_front() {
        let depth = visited[&state];
        if depth >= limits.max_depth {
            continue;
        }
        let enumeration = forward_neighbors(&state, limits);
        expansions += 1;
        if !enumeration.complete {
            incomplete_at = Some(incomplete_at.map_or(depth, |d| d.min(depth)));
        }
        for (child, desc) in enumeration.neighbors {
            if visited.contains_key(&child) {
                continue;
            }
            if visited.len() >= limits.max_states {
                capped = true;
                incomplete_at = Some(incomplete_at.map_or(depth, |d| d.min(depth)));
                break;
            }
            visited.insert(child.clone(), depth + 1);
            parents.insert(child.clone(), (state.clone(), desc));
            if child == *target {
                let k = depth + 1;
                let exact = k <= 1 || incomplete_at.is_none_or(|d| d + 1 >= k);
                return Outcome {
                    distance: Some(k),
                    exact,
                    states: visited.len(),
                    expansions,
                    reason: if exact {
                        String::from("path found; complete search below its length")
                    } else {
                        String::from("path found; upper bound (search was not complete)")
                    },
                    path: Some(rebuild_path(&parents, start, target)),
                };
            }
            queue.push_back(child);
        }
        if capped {
            break;
        }
    }
    let exact = !capped && incomplete_at.is_none();
    Outcome {
        distance: None,
        exact,
        states: visited.len(),
        expansions,
        reason: if capped {
            String::from("state cap reached before finding a path")
        } else if exact {
            format!("no path of length <= {} exists", limits.max_depth)
        } else {
            String::from("no path found; search was not complete")
        },
        path: None,
    }
}

fn rebuild_path(
    parents: &BTreeMap<CanonicalForm, (CanonicalForm, String)>,
    start: &CanonicalForm,
    target: &CanonicalForm,
) -> Vec<String> {
    let mut path = Vec::new();
    let mut cur = target;
    while cur != start {
        let (prev, desc) = &parents[cur];
        path.push(desc.clone());
        cur = prev;
    }
    path.reverse();
    path
}

fn bidirectional_search(
    start: &CanonicalForm,
    target: &CanonicalForm,
    limits: &SearchLimits,
) -> Outcome {
    // Forward tree from the start, backward (predecessor) tree from the
    // target. Expand the smaller frontier each round; any class seen from
    // both sides closes a path.
    let mut dist_f: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
    let mut dist_b: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
    let mut parent_f: BTreeMap<CanonicalForm, (CanonicalForm, String)> = BTreeMap::new();
    // parent_b[s] = (t, move): applying the move to s yields t, one step
    // closer to the target.
    let mut parent_b: BTreeMap<CanonicalForm, (CanonicalForm, String)> = BTreeMap::new();
    dist_f.insert(start.clone(), 0);
    dist_b.insert(target.clone(), 0);
    let mut frontier_f = alloc::vec![start.clone()];
    let mut frontier_b = alloc::vec![target.clone()];
    let mut depth_f = 0usize;
    let mut depth_b = 0usize;
    let mut expansions = 0usize;

    let finish = |meet: &CanonicalForm,
                  parent_f: &BTreeMap<CanonicalForm, (CanonicalForm, String)>,
                  parent_b: &BTreeMap<CanonicalForm, (CanonicalForm, String)>,
                  k: usize,
                  states: usize,
                  expansions: usize| {
        let mut path = rebuild_path(parent_f, start, meet);
        // The backward tree recorded moves pointing away from the target,
        // so the steps along the second half are the inverses of the
        // recorded descriptions.
        let mut cur = meet.clone();
        while cur != *target {
            let (next, desc) = &parent_b[&cur];
            path.push(format!("inverse of: {desc}"));
            cur = next.clone();
        }
        let exact = k <= 1;
        Outcome {
            distance: Some(k),
            exact,
            states,
            expansions,
            reason: if exact {
                String::from("path found; complete search below its length")
            } else {
                String::from(
                    "path found by meet-in-the-middle search; upper bound only",
                )
            },
            path: Some(path),
        }
    };

    while depth_f + depth_b < limits.max_depth
        && (!frontier_f.is_empty() || !frontier_b.is_empty())
    {
        let forward_turn = if frontier_f.is_empty() {
            false
        } else if frontier_b.is_empty() {
            true
        } else {
            frontier_f.len() <= frontier_b.len()
        };
        let mut next_frontier = Vec::new();
        let frontier = if forward_turn { &frontier_f } else { &frontier_b };
        let this_depth = if forward_turn { depth_f } else { depth_b };
        for state in frontier {
            // Every class move has an inverse class move (inversion is an
            // involution, multiplication by an inverse undoes
            // multiplication, the generator and empty-relator moves come
            // in pairs), so predecessors and successors coincide.
            let enumeration = forward_neighbors(state, limits);
            expansions += 1;
            for (child, desc) in enumeration.neighbors {
                let (mine, theirs) = if forward_turn {
                    (&mut dist_f, &dist_b)
                } else {
                    (&mut dist_b, &dist_f)
                };
                if mine.contains_key(&child) {
                    continue;
                }
                if mine.len() + theirs.len() >= limits.max_states {
                    return Outcome {
                        distance: None,
                        exact: false,
                        states: dist_f.len() + dist_b.len(),
                        expansions,
                        reason: String::from("state cap reached before finding a path"),
                        path: None,
                    };
                }
                mine.insert(child.clone(), this_depth + 1);
                if forward_turn {
                    parent_f.insert(child.clone(), (state.clone(), desc));
                } else {
                    parent_b.insert(child.clone(), (state.clone(), desc));
                }
                if let Some(other) = theirs.get(&child) {
                    let k = this_depth + 1 + other;
                    let states = dist_f.len() + dist_b.len();
                    return finish(&child, &parent_f, &parent_b, k, states, expansions);
                }
                next_frontier.push(child);
            }
        }
        if forward_turn {
            frontier_f = next_frontier;
            depth_f += 1;
        } else {
            frontier_b = next_frontier;
            depth_b += 1;
        }
    }
    Outcome {
        distance: None,
        exact: false,
        states: dist_f.len() + dist_b.len(),
        expansions,
        reason: format!(
            "no path found within combined depth {} (bidirectional, not a proof)",
            limits.max_depth
        ),
        path: None,
    }
}

/// The junction cancellation length when `b` is appended to `a`: the
/// number of trailing letters of `a` that cancel leading letters of `b`.
fn junction_cancellation(a: &Word, b: &Word) -> usize {
    let mut c = 0;
    while c < a.len() && c < b.len() && a.letters()[a.len() - 1 - c].cancels(b.letters()[c]) {
        c += 1;
    }
    c
}

/// Upper-bound search for a move path from `p` to the empty presentation
/// (no generators, no relators) — the certificate that `p` presents the
/// trivial group.
///
/// A greedy certified phase runs first, repeating the first applicable of:
/// removing an empty relator; removing a generator with a single global
/// occurrence whose home relator has at most four letters (inverting and
/// rotating the relator into removal position); and replacing a relator by
/// a strictly shorter product with a rotated copy (or inverse) of another
/// relator, cancelling at the junction. Every greedy step strictly shrinks
/// the presentation, so the phase terminates; each step is applied through
/// a move builder, so the path is certified by construction. If the greedy
/// phase stalls short of the empty presentation, a class-level breadth
/// first search under `limits` finishes the job.
///
/// Returns the total move count — elementary moves for the greedy phase
/// plus class moves for the search tail — or `None` when the greedy phase
/// stalls and the search exhausts its limits. An absent result is a budget
/// statement, never a proof that `p` is nontrivial.
pub fn trivialization_moves(p: &Presentation, limits: &SearchLimits) -> Option<usize> {
    let budget = Budget::default();
    let mut builder = ScriptBuilder::new(p, &budget);
    'greedy: loop {
        let cur = builder.current().clone();
        if cur.num_gens() == 0 && cur.num_relators() == 0 {
            return Some(builder.moves().len());
        }
        if let Some(i) = cur.relators.iter().position(|r| r.is_empty()) {
            builder.push(TietzeMove::RemoveEmpty { rel: i }).ok()?;
            continue;
        }
        // A generator occurring exactly once overall, in a short relator,
        // is removable after orienting its occurrence to the front.
        for g in 0..cur.num_gens() as GenId {
            let mut counts = (0usize, 0usize);
            let mut site = None;
            for (ri, r) in cur.relators.iter().enumerate() {
                let (pos, neg) = r.occurrences(g);
                counts.0 += pos;
                counts.1 += neg;
                if pos + neg > 0 && site.is_none() {
                    let at = r.letters().iter().position(|l| l.gen == g).expect("occurrence");
                    site = Some((ri, at, r.letters()[at].inverse));
                }
            }
            if counts.0 + counts.1 != 1 {
                continue;
            }
            let (rel, at, inverse) = site.expect("counted occurrence");
            if cur.relators[rel].len() > 4 {
                continue;
            }
            let front = if inverse {
                builder.invert(rel).ok()?;
                cur.relators[rel].len() - 1 - at
            } else {
                at
            };
            builder.rotate(rel, front).ok()?;
            let name = cur.gens[g as usize].clone();
            builder.push(TietzeMove::RemoveGen { d: 4, name }).ok()?;
            continue 'greedy;
        }
        // The strictest shortening product available, deterministically:
        // smallest resulting length, then lexicographic choice indices.
        let mut best: Option<(usize, usize, usize, bool, usize, usize, usize)> = None;
        for i in 0..cur.num_relators() {
            let a_len = cur.relators[i].len();
            for j in 0..cur.num_relators() {
                if i == j || cur.relators[j].is_empty() {
                    continue;
                }
                for (inv, base) in
                    [(false, cur.relators[j].clone()), (true, cur.relators[j].inverse())]
                {
                    for rot_i in 0..a_len.max(1) {
                        let a = cur.relators[i].rotated(rot_i);
                        for rot_j in 0..base.len() {
                            let bj = base.rotated(rot_j);
                            let c = junction_cancellation(&a, &bj);
                            let result = a_len + bj.len() - 2 * c;
                            if result >= a_len {
                                continue;
                            }
                            let key = (result, i, j, inv, rot_i, rot_j, c);
                            if best.as_ref().is_none_or(|b| key < *b) {
                                best = Some(key);
                            }
                        }
                    }
                }
            }
        }
        let Some((_, i, j, inv, rot_i, rot_j, c)) = best else {
            break;
        };
        let a_len = cur.relators[i].len();
        let j_len = cur.relators[j].len();
        builder.rotate(i, rot_i).ok()?;
        if inv {
            builder.invert(j).ok()?;
        }
        builder.rotate(j, rot_j).ok()?;
        builder.multiply(i, j).ok()?;
        for t in 0..c {
            builder.push(TietzeMove::DeletePair { rel: i, pos: a_len - 1 - t }).ok()?;
        }
        builder.rotate(j, (j_len - rot_j) % j_len.max(1)).ok()?;
        if inv {
            builder.invert(j).ok()?;
        }
    }
    let stalled = builder.current().clone();
    let empty = Presentation::new(Vec::new(), Vec::new()).expect("empty presentation");
    let tail = tietze_distance(&stalled, &empty, limits);
    tail.distance.map(|d| builder.moves().len() + d)
}
