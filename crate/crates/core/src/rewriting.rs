//! Rewriting presentations into short-relator, low-load form, with a
//! certified move script for every transformation.
//!
//! The stages, each returning the rewritten presentation together with an
//! elementary-move script that replays from the input to the output:
//!
//! - [`halve_relators`]: while any relator is longer than three letters,
//!   split it into consecutive two-letter chunks (plus a trailing
//!   singleton when the length is odd) and abbreviate each distinct chunk
//!   of the round by a fresh generator with a three-letter defining
//!   relator. Identical chunks discovered in the same round share one
//!   abbreviation, even across relators. The relator count minus generator
//!   count never changes, and rounds are logarithmic in the longest
//!   relator.
//! - [`split_occurrences`]: once all relators have length at most three, a
//!   generator occurring more than three times gets a chain of synonym
//!   generators (each defined as equal to the previous) over which its
//!   occurrences are redistributed, leaving every generator of the chain
//!   with exactly three occurrences. The [`SplitVariant`] picks the
//!   counting scope: one global pool, or one pool per relator.
//! - [`rewrite_nice`]: the composition of the two stages; with the global
//!   variant every generator of the output occurs at most three times,
//!   with the per-relator variant at most three times among the relators
//!   descended from each input relator.
//! - [`compress`]: abbreviate blocks of length `k = floor(log2(n / ln n))`
//!   (`n` the total relator length) by a dictionary of block generators,
//!   each defined from two shorter dictionary entries so defining relators
//!   keep length three. Only blocks that actually occur (and their halves)
//!   enter the dictionary, keeping the dictionary linear in the input
//!   rather than exponential in `k`.
//! - [`pipeline_thm65`]: per-relator compression with disjoint dictionary
//!   alphabets, then halving, then per-relator occurrence splitting. For a
//!   presentation with at most four relators this bounds every generator's
//!   load (the number of relators containing it) by twelve while the
//!   co-occurrence graph keeps logarithmic diameter.
//!
//! [`pres_graph`] builds the generator co-occurrence multigraph (one edge
//! per unordered pair of letter positions within a relator, loops
//! included) and [`graph_diameter`] measures its per-component diameters.
//!
//! Fresh generators are named deterministically: `_r{i}_d{round}_c{chunk}`
//! for halving abbreviations (first hosting relator, round, discovery
//! index), `_s{gen}_c{cluster}_w{j}` for splitting chains, and a caller
//! prefix plus discovery index (`_a0`, `_a1`, ...) for compression
//! dictionaries, with underscores appended on the rare collision.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::edit::ScriptBuilder;
use crate::presentation::Presentation;
use crate::tietze::{TietzeMove, TietzeScript};
use crate::words::{GenId, Letter, Word};
use crate::{Budget, Error, Result};

/// Scope over which [`split_occurrences`] counts generator occurrences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitVariant {
    /// Count within the relators descended from each input relator; a
    /// generator may end up in at most three relators per descent class.
    PerRelator,
    /// Count across the whole presentation; every generator ends up with
    /// at most three letter occurrences overall.
    Global,
}

/// The generator co-occurrence multigraph of a presentation.
///
/// Vertices are the generators; every unordered pair of letter positions
/// within one relator contributes one edge between the generators at those
/// positions (a loop when they coincide), so a relator reading `a a b`
/// contributes one loop at `a` and two copies of the edge `a b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresGraph {
    /// Number of vertices (generators).
    pub vertices: usize,
    /// Multiedges as normalized pairs (smaller id first), sorted.
    pub edges: Vec<(GenId, GenId)>,
}

impl PresGraph {
    /// Number of parallel edges between `a` and `b` (loops when `a == b`).
    pub fn multiplicity(&self, a: GenId, b: GenId) -> usize {
        let key = (a.min(b), a.max(b));
        self.edges.iter().filter(|&&e| e == key).count()
    }
}

/// Builds the co-occurrence multigraph of `p`.
pub fn pres_graph(p: &Presentation) -> PresGraph {
    let mut edges = Vec::new();
    for r in &p.relators {
        let ls = r.letters();
        for i in 0..ls.len() {
            for j in i + 1..ls.len() {
                let (a, b) = (ls[i].gen, ls[j].gen);
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    edges.sort_unstable();
    PresGraph { vertices: p.num_gens(), edges }
}

/// Distances from `source` over the simple graph underlying `adj`.
fn bfs_distances(adj: &[BTreeSet<usize>], source: usize) -> BTreeMap<usize, usize> {
    let mut dist = BTreeMap::new();
    dist.insert(source, 0);
    let mut frontier = vec![source];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in &adj[v] {
                if !dist.contains_key(&w) {
                    dist.insert(w, d);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Per-component diameters, ordered by each component's smallest vertex.
/// Loops and edge multiplicities do not affect distances; an isolated
/// vertex is a component of diameter zero.
pub fn graph_diameter(g: &PresGraph) -> Vec<usize> {
    let n = g.vertices;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(a, b) in &g.edges {
        if a != b {
            adj[a as usize].insert(b as usize);
            adj[b as usize].insert(a as usize);
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let component = bfs_distances(&adj, s);
        let mut diameter = 0;
        for &v in component.keys() {
            seen[v] = true;
            let ecc = bfs_distances(&adj, v).values().copied().max().unwrap_or(0);
            diameter = diameter.max(ecc);
        }
        out.push(diameter);
    }
    out
}

/// Number of relators containing each generator.
pub fn generator_loads(p: &Presentation) -> Vec<usize> {
    (0..p.num_gens())
        .map(|g| {
            p.relators
                .iter()
                .filter(|r| r.letters().iter().any(|l| l.gen as usize == g))
                .count()
        })
        .collect()
}

/// Total letter occurrences of each generator across all relators.
pub fn occurrence_counts(p: &Presentation) -> Vec<usize> {
    let mut counts = vec![0usize; p.num_gens()];
    for r in &p.relators {
        for l in r.letters() {
            counts[l.gen as usize] += 1;
        }
    }
    counts
}

/// A collision-free variant of `base` (underscores appended while taken).
fn fresh_name(b: &ScriptBuilder, base: String) -> String {
    let mut name = base;
    while b.current().gen_id(&name).is_some() {
        name.push('_');
    }
    name
}

/// Replaces the literal chunk at `pos..pos + len` of relator `rel` by the
/// abbreviation generator whose defining relator `def` currently reads
/// `g chunk^-1`: the chunk is rotated to the end, cancelled against a
/// rotated copy of the definition, and the relator is rotated back into
/// its original alignment (now one letter per chunk shorter).
fn replace_chunk(b: &mut ScriptBuilder, rel: usize, pos: usize, len: usize, def: usize) -> Result<()> {
    let relator_len = b.current().relators[rel].len();
    let def_len = b.current().relators[def].len();
    b.rotate(rel, pos + len)?;
    b.rotate(def, 1)?; // chunk^-1 g
    b.multiply(rel, def)?; // ... chunk chunk^-1 g
    for i in 0..len {
        b.push(TietzeMove::DeletePair { rel, pos: relator_len - 1 - i })?;
    }
    b.rotate(def, def_len - 1)?; // back to g chunk^-1
    b.rotate(rel, relator_len - pos - len)
}

/// Replaces the single letter at `pos` of relator `rel` (some `f` or
/// `f^-1`) by the synonym generator whose defining relator `def` currently
/// reads `w f^-1`, preserving the letter's sign and the relator's length
/// and alignment.
fn replace_letter(b: &mut ScriptBuilder, rel: usize, pos: usize, def: usize) -> Result<()> {
    let relator_len = b.current().relators[rel].len();
    let inverse = b.current().relators[rel].letters()[pos].inverse;
    b.rotate(rel, pos + 1)?;
    if inverse {
        b.invert(def)?; // f w^-1
        b.multiply(rel, def)?; // ... f^-1 f w^-1
        b.push(TietzeMove::DeletePair { rel, pos: relator_len - 1 })?;
        b.invert(def)?;
    } else {
        b.rotate(def, 1)?; // f^-1 w
        b.multiply(rel, def)?; // ... f f^-1 w
        b.push(TietzeMove::DeletePair { rel, pos: relator_len - 1 })?;
        b.rotate(def, 1)?;
    }
    b.rotate(rel, relator_len - pos - 1)
}

/// Runs halving rounds on the builder until every relator has length at
/// most three. Returns, for each output relator, the index of the input
/// relator it descends from (defining relators descend from the first
/// relator their chunk was discovered in).
fn halve_steps(b: &mut ScriptBuilder) -> Result<Vec<usize>> {
    let mut ancestry: Vec<usize> = (0..b.current().num_relators()).collect();
    let mut round = 0usize;
    loop {
        let snapshot = b.current().clone();
        let long: Vec<usize> = (0..snapshot.num_relators())
            .filter(|&i| snapshot.relators[i].len() > 3)
            .collect();
        if long.is_empty() {
            return Ok(ancestry);
        }
        round += 1;
        // One abbreviation per distinct two-letter chunk this round, in
        // discovery order (relators ascending, chunks left to right).
        let mut order: Vec<Word> = Vec::new();
        let mut owner: BTreeMap<Word, usize> = BTreeMap::new();
        for &ri in &long {
            let letters = snapshot.relators[ri].letters();
            for c in 0..letters.len() / 2 {
                let chunk = Word::from_letters(letters[2 * c..2 * c + 2].to_vec());
                if !owner.contains_key(&chunk) {
                    owner.insert(chunk.clone(), ri);
                    order.push(chunk);
                }
            }
        }
        let mut defs: BTreeMap<Word, usize> = BTreeMap::new();
        for (ci, chunk) in order.iter().enumerate() {
            let name = fresh_name(b, format!("_r{}_d{}_c{}", owner[chunk], round, ci));
            let def_idx = b.current().num_relators();
            b.push(TietzeMove::AddGen { d: 4, name, word: chunk.inverse() })?;
            defs.insert(chunk.clone(), def_idx);
            ancestry.push(ancestry[owner[chunk]]);
        }
        // Rewrite right to left so earlier chunk positions stay valid as
        // the relator shrinks; a trailing singleton passes through.
        for &ri in &long {
            let letters = snapshot.relators[ri].letters().to_vec();
            for c in (0..letters.len() / 2).rev() {
                let chunk = Word::from_letters(letters[2 * c..2 * c + 2].to_vec());
                replace_chunk(b, ri, 2 * c, 2, defs[&chunk])?;
            }
        }
        // Leave definitions in the readable g^-1 chunk form.
        for chunk in &order {
            let def = defs[chunk];
            b.invert(def)?;
            b.rotate(def, 2)?;
        }
    }
}

/// Splits overloaded generators on the builder. `clusters[i]` names the
/// pool relator `i` is counted in; chain relators join the pool they are
/// created for. Occurrences beyond the first two in a pool move onto a
/// chain of synonym generators, the last of which keeps two.
fn split_steps(b: &mut ScriptBuilder, clusters: &mut Vec<usize>) -> Result<()> {
    if let Some(bad) = b.current().relators.iter().position(|r| r.len() > 3) {
        return Err(Error::Invalid(format!(
            "occurrence splitting needs relators of length at most three, relator {bad} is longer"
        )));
    }
    let entry_gens = b.current().num_gens();
    let mut pool_ids: Vec<usize> = clusters.clone();
    pool_ids.sort_unstable();
    pool_ids.dedup();
    for f in 0..entry_gens as GenId {
        for &c in &pool_ids {
            let occ: Vec<(usize, usize)> = {
                let current = b.current();
                let mut occ = Vec::new();
                for (ri, r) in current.relators.iter().enumerate() {
                    if clusters[ri] != c {
                        continue;
                    }
                    for (pos, l) in r.letters().iter().enumerate() {
                        if l.gen == f {
                            occ.push((ri, pos));
                        }
                    }
                }
                occ
            };
            let t = occ.len();
            if t <= 3 {
                continue;
            }
            let fname = b.current().gens[f as usize].clone();
            let mut chain: Vec<usize> = Vec::new();
            let mut prev = f;
            for j in 1..=t - 3 {
                let name = fresh_name(b, format!("_s{fname}_c{c}_w{j}"));
                let gen = b.current().num_gens() as GenId;
                let def_idx = b.current().num_relators();
                let word = Word::from_letters(vec![Letter::neg(prev)]);
                b.push(TietzeMove::AddGen { d: 4, name, word })?;
                clusters.push(c);
                chain.push(def_idx);
                prev = gen;
            }
            // Occurrence k (0-based) keeps the original generator for
            // k < 2, moves to chain link min(k - 1, t - 3) otherwise; the
            // definitions only relate consecutive links, so the move walks
            // the chain one link at a time.
            for (k, &(rel, pos)) in occ.iter().enumerate().skip(2) {
                let steps = (k - 1).min(t - 3);
                for &def in &chain[..steps] {
                    replace_letter(b, rel, pos, def)?;
                }
            }
            // Leave chain definitions in the readable prev w^-1 form.
            for &def in &chain {
                b.invert(def)?;
            }
        }
    }
    Ok(())
}

/// Abbreviates every relator chunk of length over three until all relators
/// have length at most three; already-short relators pass through (input
/// relators of length zero or one included, untouched).
pub fn halve_relators(p: &Presentation, budget: &Budget) -> Result<(Presentation, TietzeScript)> {
    let mut b = ScriptBuilder::new(p, budget);
    halve_steps(&mut b)?;
    Ok((b.current().clone(), b.finish(4)))
}

/// Redistributes overloaded generators over synonym chains. Requires all
/// relators of length at most three. With [`SplitVariant::Global`] every
/// generator ends with at most three letter occurrences; with
/// [`SplitVariant::PerRelator`] each relator is its own pool, so a short
/// relator can never overload a generator and the call is the identity.
pub fn split_occurrences(
    p: &Presentation,
    variant: SplitVariant,
    budget: &Budget,
) -> Result<(Presentation, TietzeScript)> {
    let mut clusters: Vec<usize> = match variant {
        SplitVariant::Global => vec![0; p.num_relators()],
        SplitVariant::PerRelator => (0..p.num_relators()).collect(),
    };
    let mut b = ScriptBuilder::new(p, budget);
    split_steps(&mut b, &mut clusters)?;
    Ok((b.current().clone(), b.finish(4)))
}

/// Halves relators and then splits occurrences, with the per-relator
/// variant pooling occurrences by the input relator each output relator
/// descends from. The output has relator lengths at most three, bounded
/// generator loads per the variant, an unchanged relator-minus-generator
/// count, and the script replays input to output exactly.
pub fn rewrite_nice(
    p: &Presentation,
    variant: SplitVariant,
    budget: &Budget,
) -> Result<(Presentation, TietzeScript)> {
    let mut b = ScriptBuilder::new(p, budget);
    let ancestry = halve_steps(&mut b)?;
    let mut clusters: Vec<usize> = match variant {
        SplitVariant::Global => vec![0; ancestry.len()],
        SplitVariant::PerRelator => ancestry,
    };
    split_steps(&mut b, &mut clusters)?;
    Ok((b.current().clone(), b.finish(4)))
}

/// Natural logarithm for `x >= 1`, accurate to well under one part in a
/// trillion: split off the binary exponent and sum the odd series for
/// `ln` on the mantissa. Keeping this in ordinary arithmetic makes the
/// block-length computation available without a runtime library.
fn ln_at_least_one(x: f64) -> f64 {
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let m = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | (1023u64 << 52));
    let z = (m - 1.0) / (m + 1.0);
    let z2 = z * z;
    let mut term = z;
    let mut sum = 0.0;
    let mut odd = 1.0;
    for _ in 0..14 {
        sum += term / odd;
        term *= z2;
        odd += 2.0;
    }
    2.0 * sum + (e as f64) * core::f64::consts::LN_2
}

/// The compression block length `floor(log2(n / ln n))` for total relator
/// length `n`; zero when `n < 2`. Values below two make [`compress`] the
/// identity transform.
pub fn compress_block_length(total: usize) -> usize {
    if total < 2 {
        return 0;
    }
    let n = total as f64;
    let ratio = n / ln_at_least_one(n);
    let mut k = 0usize;
    while k < 62 && ((1u64 << (k + 1)) as f64) <= ratio {
        k += 1;
    }
    k
}

/// The positions and lengths of the length-`k` blocks of a relator of
/// length `len`, plus the shorter tail block if any.
fn blocks(len: usize, k: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..len / k).map(|i| (i * k, k)).collect();
    if len % k > 0 {
        out.push((len - len % k, len % k));
    }
    out
}

/// Records `u` and (recursively) both halves in dictionary discovery
/// order, children before parents, each distinct word once.
fn collect_abbreviations(u: &[Letter], order: &mut Vec<Word>, seen: &mut BTreeSet<Word>) {
    if u.len() < 2 {
        return;
    }
    let w = Word::from_letters(u.to_vec());
    if seen.contains(&w) {
        return;
    }
    let mid = u.len() / 2;
    collect_abbreviations(&u[..mid], order, seen);
    collect_abbreviations(&u[mid..], order, seen);
    seen.insert(w.clone());
    order.push(w);
}

/// The single letter standing for `u`: the letter itself when `u` has
/// length one, otherwise its dictionary generator.
fn block_letter(u: &[Letter], letter_for: &BTreeMap<Word, Letter>) -> Letter {
    if u.len() == 1 {
        u[0]
    } else {
        letter_for[&Word::from_letters(u.to_vec())]
    }
}

/// Reduces the block `u` sitting at `pos` of relator `rel` to its single
/// dictionary letter, bottom up through the definition tree.
fn emit_block(
    b: &mut ScriptBuilder,
    rel: usize,
    pos: usize,
    u: &[Letter],
    def_for: &BTreeMap<Word, usize>,
) -> Result<()> {
    if u.len() < 2 {
        return Ok(());
    }
    let mid = u.len() / 2;
    emit_block(b, rel, pos, &u[..mid], def_for)?;
    emit_block(b, rel, pos + 1, &u[mid..], def_for)?;
    replace_chunk(b, rel, pos, 2, def_for[&Word::from_letters(u.to_vec())])
}

/// Compresses the listed relators (all longer than `k`) with one shared
/// dictionary named `prefix{i}`; `on_def` hears each new defining
/// relator's index as it is added.
fn compress_steps(
    b: &mut ScriptBuilder,
    rels: &[usize],
    k: usize,
    prefix: &str,
    mut on_def: impl FnMut(usize),
) -> Result<()> {
    let snapshot = b.current().clone();
    let mut order: Vec<Word> = Vec::new();
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    for &ri in rels {
        let letters = snapshot.relators[ri].letters();
        for (start, blen) in blocks(letters.len(), k) {
            collect_abbreviations(&letters[start..start + blen], &mut order, &mut seen);
        }
    }
    let mut letter_for: BTreeMap<Word, Letter> = BTreeMap::new();
    let mut def_for: BTreeMap<Word, usize> = BTreeMap::new();
    for (i, u) in order.iter().enumerate() {
        let mid = u.len() / 2;
        let c1 = block_letter(&u.letters()[..mid], &letter_for);
        let c2 = block_letter(&u.letters()[mid..], &letter_for);
        let chunk = Word::from_letters(vec![c1, c2]);
        let name = fresh_name(b, format!("{prefix}{i}"));
        let gen = b.current().num_gens() as GenId;
        let def_idx = b.current().num_relators();
        b.push(TietzeMove::AddGen { d: 4, name, word: chunk.inverse() })?;
        on_def(def_idx);
        letter_for.insert(u.clone(), Letter::pos(gen));
        def_for.insert(u.clone(), def_idx);
    }
    for &ri in rels {
        let letters = snapshot.relators[ri].letters().to_vec();
        for &(start, blen) in blocks(letters.len(), k).iter().rev() {
            emit_block(b, ri, start, &letters[start..start + blen], &def_for)?;
        }
    }
    for u in &order {
        let def = def_for[u];
        b.invert(def)?;
        b.rotate(def, 2)?;
    }
    Ok(())
}

/// Rewrites each relator longer than the block length as a word of
/// dictionary letters (one shared dictionary), leaving shorter relators
/// untouched; the identity transform when the block length is below two.
pub fn compress(p: &Presentation, budget: &Budget) -> Result<(Presentation, TietzeScript)> {
    let k = compress_block_length(p.total_letters());
    let mut b = ScriptBuilder::new(p, budget);
    if k >= 2 {
        let rels: Vec<usize> =
            (0..p.num_relators()).filter(|&i| p.relators[i].len() > k).collect();
        if !rels.is_empty() {
            compress_steps(&mut b, &rels, k, "_a", |_| {})?;
        }
    }
    Ok((b.current().clone(), b.finish(4)))
}

/// The full normalization for presentations with a handful of relators:
/// per-relator compression with disjoint dictionaries, halving, and
/// per-relator occurrence splitting. Every output relator has length at
/// most three, and each generator's load is at most three relators per
/// input relator it serves, so at most three times the input relator
/// count overall.
pub fn pipeline_thm65(p: &Presentation, budget: &Budget) -> Result<(Presentation, TietzeScript)> {
    let mut b = ScriptBuilder::new(p, budget);
    let k = compress_block_length(p.total_letters());
    let m = p.num_relators();
    let mut ancestry0: Vec<usize> = (0..m).collect();
    if k >= 2 {
        for ri in 0..m {
            if b.current().relators[ri].len() > k {
                let prefix = format!("_r{ri}_a");
                compress_steps(&mut b, &[ri], k, &prefix, |_| ancestry0.push(ri))?;
            }
        }
    }
    let ancestry1 = halve_steps(&mut b)?;
    let mut clusters: Vec<usize> = ancestry1.iter().map(|&i| ancestry0[i]).collect();
    split_steps(&mut b, &mut clusters)?;
    Ok((b.current().clone(), b.finish(4)))
}
