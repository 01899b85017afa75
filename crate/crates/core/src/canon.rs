//! Canonical forms for presentations up to the free symmetries of the
//! move metric.
//!
//! Two presentations are put in the same class when one can be carried to
//! the other by operations that either cost nothing in the move metric or
//! are pure bookkeeping: inserting and deleting cancelling pairs inside
//! relators, cyclically rotating relators, reordering the relator list,
//! and renaming generators. Relator inversion and multiplication are *not*
//! absorbed; they are counted moves.
//!
//! [`canonical_form`] computes a complete invariant for this equivalence:
//! equal forms if and only if equivalent presentations. The form keeps the
//! generator count, cyclically reduces every relator, relabels generators
//! by a permutation chosen canonically, rotates each relator to its least
//! cyclic position, and sorts the relator list. The returned
//! [`Canonicalization`] carries the relabeling permutation as a witness;
//! [`check_witness`] replays it.
//!
//! The relabeling is chosen by color refinement followed by exhaustive
//! search inside symmetric color classes: generators are partitioned by
//! iterated occurrence signatures (a renaming invariant), classes are
//! ordered by signature, and the least relabeled form over all
//! class-respecting permutations wins. Distinct signatures make the search
//! trivial; fully symmetric generator sets cost the factorial of the class
//! size, which stays small for the presentation sizes breadth first search
//! can visit anyway.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::presentation::Presentation;
use crate::words::{GenId, Letter, Word};

/// A complete invariant of a presentation class: generator count plus the
/// relabeled, cyclically reduced, least-rotated, sorted relator list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub num_gens: usize,
    pub relators: Vec<Word>,
}

impl CanonicalForm {
    pub fn total_letters(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    /// The length of the shortest presentation in the class: letters of the
    /// cyclically reduced relators plus the generator count.
    pub fn length(&self) -> usize {
        self.total_letters() + self.num_gens
    }

    /// A concrete representative with synthetic generator names `g0..`.
    pub fn to_presentation(&self) -> Presentation {
        let gens: Vec<alloc::string::String> =
            (0..self.num_gens).map(|i| alloc::format!("g{i}")).collect();
        Presentation { gens, relators: self.relators.clone() }
    }
}

/// A canonical form together with the generator relabeling that produced
/// it: `relabel[original_id] = canonical_id`.
#[derive(Clone, Debug)]
pub struct Canonicalization {
    pub form: CanonicalForm,
    pub relabel: Vec<GenId>,
}

/// The least rotation of a cyclic word.
fn least_rotation(w: &Word) -> Word {
    if w.len() <= 1 {
        return w.clone();
    }
    let mut best = w.clone();
    for by in 1..w.len() {
        let candidate = w.rotated(by);
        if candidate < best {
            best = candidate;
        }
    }
    best
}

/// Applies a generator relabeling to a word.
fn relabel_word(w: &Word, relabel: &[GenId]) -> Word {
    Word::from_letters(
        w.letters()
            .iter()
            .map(|l| Letter::new(relabel[l.gen as usize], l.inverse))
            .collect(),
    )
}

/// Builds the sorted relator list for one relabeling choice.
fn form_under(reduced: &[Word], relabel: &[GenId], num_gens: usize) -> CanonicalForm {
    let mut relators: Vec<Word> =
        reduced.iter().map(|r| least_rotation(&relabel_word(r, relabel))).collect();
    relators.sort();
    CanonicalForm { num_gens, relators }
}

/// One color-refinement round. Colors are ranks into the sorted list of
/// signatures, so they are invariant under renaming.
fn refine_colors(reduced: &[Word], colors: &[u32]) -> Vec<u32> {
    // Profile of each relator: its length plus the sorted multiset of
    // (letter color, inverse flag) entries.
    let profiles: Vec<(usize, Vec<(u32, bool)>)> = reduced
        .iter()
        .map(|r| {
            let mut entries: Vec<(u32, bool)> = r
                .letters()
                .iter()
                .map(|l| (colors[l.gen as usize], l.inverse))
                .collect();
            entries.sort_unstable();
            (r.len(), entries)
        })
        .collect();
    // Signature of a generator: its old color plus, over the relators it
    // occurs in, the sorted multiset of (relator profile, positive
    // occurrences, negative occurrences).
    type Sig = (u32, Vec<((usize, Vec<(u32, bool)>), usize, usize)>);
    let mut sigs: Vec<Sig> = colors.iter().map(|&c| (c, Vec::new())).collect();
    for (relator, profile) in reduced.iter().zip(&profiles) {
        let mut seen: BTreeMap<GenId, (usize, usize)> = BTreeMap::new();
        for l in relator.letters() {
            let entry = seen.entry(l.gen).or_insert((0, 0));
            if l.inverse {
                entry.1 += 1;
            } else {
                entry.0 += 1;
            }
        }
        for (gen, (pos, neg)) in seen {
            sigs[gen as usize].1.push((profile.clone(), pos, neg));
        }
    }
    for sig in &mut sigs {
        sig.1.sort_unstable();
    }
    let mut ranked: Vec<&Sig> = sigs.iter().collect();
    ranked.sort_unstable();
    ranked.dedup();
    sigs.iter()
        .map(|s| ranked.binary_search(&s).expect("signature present") as u32)
        .collect()
}

/// Computes the canonical form of a presentation together with a witness
/// relabeling.
pub fn canonical_form(p: &Presentation) -> Canonicalization {
    canonical_form_of(p.gens.len(), &p.relators)
}

/// [`canonical_form`] on bare parts: a generator count and a relator list.
pub fn canonical_form_of(n: usize, relators: &[Word]) -> Canonicalization {
    let reduced: Vec<Word> = relators.iter().map(|r| r.cyclically_reduce()).collect();
    // Color refinement to a stable partition.
    let mut colors = alloc::vec![0u32; n];
    loop {
        let next = refine_colors(&reduced, &colors);
        if next == colors {
            break;
        }
        colors = next;
    }
    // Cells in color order; canonical ids are dealt to cells in that order.
    let mut cells: BTreeMap<u32, Vec<GenId>> = BTreeMap::new();
    for (gen, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(gen as GenId);
    }
    let mut used = alloc::vec![false; n];
    for r in &reduced {
        for l in r.letters() {
            used[l.gen as usize] = true;
        }
    }
    // Depth-first over within-cell orderings, keeping the least form. Cells
    // whose generators never occur cannot affect the relators, so their
    // internal order is fixed.
    let mut search = Search {
        cells: cells.into_values().collect(),
        used,
        reduced,
        n,
        relabel: alloc::vec![0 as GenId; n],
        best: None,
    };
    search.assign(0, 0);
    let (form, relabel) = search.best.expect("at least one labeling");
    Canonicalization { form, relabel }
}

struct Search {
    cells: Vec<Vec<GenId>>,
    used: Vec<bool>,
    reduced: Vec<Word>,
    n: usize,
    relabel: Vec<GenId>,
    best: Option<(CanonicalForm, Vec<GenId>)>,
}

impl Search {
    fn assign(&mut self, cell_idx: usize, next_id: GenId) {
        if cell_idx == self.cells.len() {
            let form = form_under(&self.reduced, &self.relabel, self.n);
            if self.best.as_ref().is_none_or(|(current, _)| form < *current) {
                self.best = Some((form, self.relabel.clone()));
            }
            return;
        }
        let cell = self.cells[cell_idx].clone();
        if cell.len() == 1 || cell.iter().all(|&g| !self.used[g as usize]) {
            for (offset, &g) in cell.iter().enumerate() {
                self.relabel[g as usize] = next_id + offset as GenId;
            }
            self.assign(cell_idx + 1, next_id + cell.len() as GenId);
            return;
        }
        let mut taken = alloc::vec![false; cell.len()];
        self.perms(&cell, &mut taken, 0, cell_idx, next_id);
    }

    /// Permutes within one cell by choosing which member takes each id.
    fn perms(
        &mut self,
        cell: &[GenId],
        taken: &mut [bool],
        depth: usize,
        cell_idx: usize,
        next_id: GenId,
    ) {
        if depth == cell.len() {
            self.assign(cell_idx + 1, next_id + cell.len() as GenId);
            return;
        }
        for i in 0..cell.len() {
            if taken[i] {
                continue;
            }
            taken[i] = true;
            self.relabel[cell[i] as usize] = next_id + depth as GenId;
            self.perms(cell, taken, depth + 1, cell_idx, next_id);
            taken[i] = false;
        }
    }
}

/// Checks that a witness relabeling really carries the presentation to the
/// claimed form.
pub fn check_witness(p: &Presentation, canon: &Canonicalization) -> bool {
    let n = p.gens.len();
    if canon.relabel.len() != n || canon.form.num_gens != n {
        return false;
    }
    // The witness must be a permutation of 0..n.
    let mut seen = alloc::vec![false; n];
    for &id in &canon.relabel {
        let Some(slot) = seen.get_mut(id as usize) else { return false };
        if *slot {
            return false;
        }
        *slot = true;
    }
    let reduced: Vec<Word> = p.relators.iter().map(|r| r.cyclically_reduce()).collect();
    form_under(&reduced, &canon.relabel, n) == canon.form
}
