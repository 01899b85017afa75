//! Abstract simplicial complexes with bistellar (Pachner) moves,
//! spanning-tree fundamental-group presentations, tree-exchange paths,
//! simplicial presentation complexes, and cycle-basis graph filling.
//!
//! A [`SimplicialComplex`] stores its maximal faces as sorted vertex
//! tuples; downward closure is implicit. Complexes are immutable — every
//! operation returns a new value — and two complexes are compared up to
//! relabeling with [`canonically_equal`], which relabels both through an
//! individualization-refinement search.
//!
//! A bistellar move of index `i` on a pure `n`-dimensional complex picks
//! `i` maximal cells forming the star of a common face `E` inside an
//! `(n+2)`-vertex configuration and replaces them by the complementary
//! `n+2-i` cells joined over the omitted vertex set `D`. The move is
//! rejected unless the replaced cells are the *entire* star of `E` and
//! the interior simplex on `D` is absent from the complex; both checks
//! are what make the surgery a homeomorphism on abstract complexes
//! rather than a quotient, and together they keep the Euler
//! characteristic and pure dimension invariant. [`apply_pachner`] returns
//! the moved complex together with the exact inverse move;
//! [`find_pachner_moves`] enumerates every admissible move of one index.
//!
//! [`pi1_presentation`] reads a fundamental-group presentation off a
//! rooted spanning tree of the 1-skeleton: one generator per non-tree
//! edge and, for each 2-simplex `{u < v < w}`, the boundary relation
//! taken in ascending orientation (`uv`, then `vw`, then the inverse of
//! `uw`), with tree edges contributing nothing. [`tree_exchange_path`]
//! connects any two spanning trees of one graph by single edge
//! exchanges, at most vertices-plus-edges of them.
//!
//! [`presentation_complex`] realizes a group presentation as a
//! 2-dimensional complex with one basepoint, a 3-edge circle per
//! generator, and one triangulated polygon per relator: the polygon rim
//! walks the subdivided circles, and an interposed fresh ring (one
//! subdivision of the boundary) keeps the cone from its apex simplicial
//! even when a relator repeats a generator. The construction spends
//! exactly nine triangles per relator letter. [`fill_cycle_basis`] fills
//! a connected multigraph into a simply connected 2-complex: loops and
//! parallel edges are subdivided and filled first, then every
//! cycle-basis cycle of the remaining simple graph (one non-tree edge
//! plus the tree path through the nearest common ancestor) is fanned by
//! triangles from that ancestor.
//!
//! [`lemma72_check`] measures, within a search budget, how many
//! presentation moves separate the fundamental-group presentations read
//! before and after one bistellar move when the two spanning trees are
//! chosen to coincide away from the moved cells.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::distance::{tietze_distance, SearchLimits};
use crate::presentation::Presentation;
use crate::words::{GenId, Letter, Word};
use crate::{Error, Result};

/// An abstract simplicial complex, stored as its set of maximal faces.
///
/// Every face is a strictly sorted vertex tuple. All subsets of a stored
/// face are implicitly faces of the complex; no stored face contains
/// another. The empty complex has no faces at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// The inclusion-maximal faces, each a strictly ascending vertex list.
    pub maximal: BTreeSet<Vec<u32>>,
}

impl SimplicialComplex {
    /// Builds a complex from any family of faces: each face is sorted,
    /// validated, and then absorbed into the family's maximal members.
    ///
    /// Errors if a face is empty or repeats a vertex.
    pub fn from_maximal<I>(faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut sorted: Vec<Vec<u32>> = Vec::new();
        for mut face in faces {
            if face.is_empty() {
                return Err(Error::Invalid("a simplex needs at least one vertex".into()));
            }
            face.sort_unstable();
            if face.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Invalid(format!(
                    "simplex repeats vertex {}",
                    face.windows(2).find(|w| w[0] == w[1]).expect("repeat")[0]
                )));
            }
            sorted.push(face);
        }
        let mut maximal: BTreeSet<Vec<u32>> = BTreeSet::new();
        for face in &sorted {
            let absorbed = sorted
                .iter()
                .any(|other| other.len() > face.len() && is_subface(face, other));
            if !absorbed {
                maximal.insert(face.clone());
            }
        }
        Ok(SimplicialComplex { maximal })
    }

    /// True when the complex has no faces.
    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    /// The dimension: the largest face size minus one, and zero for the
    /// empty complex.
    pub fn dim(&self) -> usize {
        self.maximal.iter().map(|f| f.len() - 1).max().unwrap_or(0)
    }

    /// True when the complex is nonempty and every maximal face has the
    /// full dimension — the eligibility condition for bistellar moves.
    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        !self.is_empty() && self.maximal.iter().all(|f| f.len() == d + 1)
    }

    /// All vertices, ascending.
    pub fn vertices(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.maximal.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// All faces of dimension `k`, each a sorted vertex tuple.
    pub fn faces(&self, k: usize) -> BTreeSet<Vec<u32>> {
        let mut out = BTreeSet::new();
        for face in &self.maximal {
            if face.len() >= k + 1 {
                subsets_of_size(face, k + 1, &mut out);
            }
        }
        out
    }

    /// Face counts by dimension, from vertices up to the top dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        if self.is_empty() {
            return Vec::new();
        }
        (0..=self.dim()).map(|k| self.faces(k).len()).collect()
    }

    /// The alternating sum of face counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &count)| if k % 2 == 0 { count as i64 } else { -(count as i64) })
            .sum()
    }

    /// True when `simplex` (in any vertex order) is a face.
    pub fn contains(&self, simplex: &[u32]) -> bool {
        let mut probe: Vec<u32> = simplex.to_vec();
        probe.sort_unstable();
        probe.dedup();
        probe.len() == simplex.len()
            && self.maximal.iter().any(|face| is_subface(&probe, face))
    }

    /// The edges of the 1-skeleton as ascending pairs.
    pub fn skeleton_edges(&self) -> BTreeSet<(u32, u32)> {
        self.faces(1).into_iter().map(|edge| (edge[0], edge[1])).collect()
    }

    /// A canonical relabeling of the complex onto vertices `0..v`:
    /// isomorphic complexes (equal up to a vertex bijection) canonicalize
    /// to equal values.
    ///
    /// Vertices are first partitioned by iterated signature refinement
    /// (the multiset, over maximal faces through a vertex, of face sizes
    /// and co-vertex colors); ties are broken by individualizing each
    /// member of the first non-singleton class in turn and keeping the
    /// lexicographically smallest relabeled face set.
    pub fn canonical(&self) -> SimplicialComplex {
        if self.is_empty() {
            return self.clone();
        }
        let verts = self.vertices();
        let index: BTreeMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let faces: Vec<Vec<usize>> = self
            .maximal
            .iter()
            .map(|face| face.iter().map(|v| index[v]).collect())
            .collect();
        let colors = vec![0usize; verts.len()];
        let best = canonical_search(&faces, colors);
        SimplicialComplex { maximal: best }
    }
}

/// True when the two complexes are equal up to a vertex relabeling.
pub fn canonically_equal(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    a.canonical() == b.canonical()
}

/// True when every element of the sorted list `small` appears in the
/// sorted list `big`.
fn is_subface(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    small.iter().all(|v| it.any(|w| w == v))
}

/// Inserts every `size`-element subset of the sorted `face` into `out`.
fn subsets_of_size(face: &[u32], size: usize, out: &mut BTreeSet<Vec<u32>>) {
    fn rec(face: &[u32], size: usize, start: usize, cur: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>) {
        if cur.len() == size {
            out.insert(cur.clone());
            return;
        }
        let needed = size - cur.len();
        for i in start..=face.len().saturating_sub(needed) {
            cur.push(face[i]);
            rec(face, size, i + 1, cur, out);
            cur.pop();
        }
    }
    if size == 0 || size > face.len() {
        return;
    }
    let mut cur = Vec::with_capacity(size);
    rec(face, size, 0, &mut cur, out);
}

/// Refines a vertex coloring to the coarsest stable one: vertices get
/// equal colors exactly when their current colors and the multisets of
/// (face size, co-vertex colors) over the maximal faces through them
/// agree. Colors are ranks, so equal partitions yield equal colorings.
fn refine_colors(faces: &[Vec<usize>], mut colors: Vec<usize>) -> Vec<usize> {
    loop {
        let mut signatures: Vec<(usize, Vec<(usize, Vec<usize>)>)> = colors
            .iter()
            .map(|&c| (c, Vec::new()))
            .collect();
        for face in faces {
            for &v in face {
                let mut others: Vec<usize> =
                    face.iter().filter(|&&w| w != v).map(|&w| colors[w]).collect();
                others.sort_unstable();
                signatures[v].1.push((face.len(), others));
            }
        }
        for sig in &mut signatures {
            sig.1.sort();
        }
        let mut ranks: BTreeMap<&(usize, Vec<(usize, Vec<usize>)>), usize> = BTreeMap::new();
        let mut ordered: Vec<&(usize, Vec<(usize, Vec<usize>)>)> = signatures.iter().collect();
        ordered.sort();
        ordered.dedup();
        for (rank, sig) in ordered.into_iter().enumerate() {
            ranks.insert(sig, rank);
        }
        let next: Vec<usize> = signatures.iter().map(|sig| ranks[sig]).collect();
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

/// The individualization-refinement search: returns the lexicographically
/// smallest relabeled maximal-face set over all discrete refinements of
/// the given coloring.
fn canonical_search(faces: &[Vec<usize>], colors: Vec<usize>) -> BTreeSet<Vec<u32>> {
    let colors = refine_colors(faces, colors);
    let n = colors.len();
    let mut class_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        class_of.entry(c).or_default().push(v);
    }
    if let Some((_, members)) = class_of.iter().find(|(_, m)| m.len() > 1) {
        let mut best: Option<BTreeSet<Vec<u32>>> = None;
        for &v in members {
            let mut split = colors.clone();
            split[v] = n;
            let candidate = canonical_search(faces, split);
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
        return best.expect("non-singleton class is nonempty");
    }
    faces
        .iter()
        .map(|face| {
            let mut relabeled: Vec<u32> = face.iter().map(|&v| colors[v] as u32).collect();
            relabeled.sort_unstable();
            relabeled
        })
        .collect()
}

/// One bistellar move: index `i`, the `i` maximal cells it replaces, and
/// the fresh vertex a 1-move introduces (`None` for every other index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PachnerMoveSpec {
    /// The move index, between 1 and dimension + 1.
    pub i: usize,
    /// The maximal cells replaced by the move, sorted vertex tuples.
    pub cells: Vec<Vec<u32>>,
    /// The fresh vertex introduced when `i == 1`.
    pub fresh: Option<u32>,
}

/// Applies one bistellar move, returning the moved complex and the spec
/// of the exact inverse move.
///
/// The move replaces the `i` cells (which must form the whole star of
/// their common face `E` inside an `(n+2)`-vertex configuration `L`) by
/// the `n+2-i` cells spanning the omitted vertices `D` joined with the
/// facets of `E`. Rejected with a reason when the complex is not pure,
/// the cells do not form the required configuration, some maximal face
/// outside the cells also contains `E`, or the interior simplex on `D`
/// is already present — the latter two would quotient the complex
/// instead of re-triangulating a ball.
pub fn apply_pachner(
    t: &SimplicialComplex,
    spec: &PachnerMoveSpec,
) -> Result<(SimplicialComplex, PachnerMoveSpec)> {
    if !t.is_pure() {
        return Err(Error::Invalid("bistellar moves need a pure complex".into()));
    }
    let n = t.dim();
    if spec.i < 1 || spec.i > n + 1 {
        return Err(Error::Invalid(format!(
            "move index {} out of range 1..={}",
            spec.i,
            n + 1
        )));
    }
    if spec.cells.len() != spec.i {
        return Err(Error::Invalid(format!(
            "a {}-move replaces exactly {} cells, got {}",
            spec.i,
            spec.i,
            spec.cells.len()
        )));
    }
    let mut cells: Vec<Vec<u32>> = Vec::with_capacity(spec.cells.len());
    for cell in &spec.cells {
        let mut sorted = cell.clone();
        sorted.sort_unstable();
        if sorted.len() != n + 1 || sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("cell {sorted:?} is not an {n}-simplex")));
        }
        if !t.maximal.contains(&sorted) {
            return Err(Error::Invalid(format!("cell {sorted:?} is not a maximal face")));
        }
        if cells.contains(&sorted) {
            return Err(Error::Invalid(format!("cell {sorted:?} listed twice")));
        }
        cells.push(sorted);
    }
    let mut label_set: BTreeSet<u32> = cells.iter().flatten().copied().collect();
    match (spec.i, spec.fresh) {
        (1, None) => {
            return Err(Error::Invalid("a 1-move needs a fresh vertex".into()));
        }
        (1, Some(f)) => {
            if label_set.contains(&f) {
                return Err(Error::Invalid(format!("vertex {f} is not fresh to the cell")));
            }
            label_set.insert(f);
        }
        (_, Some(_)) => {
            return Err(Error::Invalid("only a 1-move introduces a fresh vertex".into()));
        }
        (_, None) => {}
    }
    if label_set.len() != n + 2 {
        return Err(Error::Invalid(format!(
            "the cells must span {} vertices, got {}",
            n + 2,
            label_set.len()
        )));
    }
    // Each cell must omit exactly one label, all omissions distinct.
    let mut omitted: BTreeSet<u32> = BTreeSet::new();
    for cell in &cells {
        let extra: Vec<u32> =
            label_set.iter().copied().filter(|v| !cell.contains(v)).collect();
        let [d] = extra[..] else {
            return Err(Error::Invalid(format!(
                "cell {cell:?} does not omit exactly one of the spanned vertices"
            )));
        };
        if !omitted.insert(d) {
            return Err(Error::Invalid(format!(
                "two cells omit the same vertex {d}"
            )));
        }
    }
    let interior: Vec<u32> = omitted.iter().copied().collect();
    let shared: Vec<u32> =
        label_set.iter().copied().filter(|v| !omitted.contains(v)).collect();
    // The cells must be the entire star of their shared face: a bystander
    // maximal face through it would be quotiented, not re-triangulated.
    for face in &t.maximal {
        if is_subface(&shared, face) && !cells.contains(face) {
            return Err(Error::Invalid(format!(
                "maximal face {face:?} also contains the shared face {shared:?}"
            )));
        }
    }
    // The interior simplex the move creates must be genuinely new.
    if t.contains(&interior) {
        return Err(Error::Invalid(format!(
            "the interior simplex {interior:?} is already present"
        )));
    }
    let mut maximal = t.maximal.clone();
    for cell in &cells {
        maximal.remove(cell);
    }
    let mut replacement: Vec<Vec<u32>> = Vec::with_capacity(shared.len());
    for &e in &shared {
        let mut facet: Vec<u32> = interior.clone();
        facet.extend(shared.iter().copied().filter(|&v| v != e));
        facet.sort_unstable();
        maximal.insert(facet.clone());
        replacement.push(facet);
    }
    replacement.sort();
    let inverse = PachnerMoveSpec {
        i: n + 2 - spec.i,
        cells: replacement,
        fresh: if spec.i == n + 1 { Some(shared[0]) } else { None },
    };
    Ok((SimplicialComplex { maximal }, inverse))
}

/// Enumerates every admissible bistellar move of index `i` on `t`, in a
/// deterministic order. A 1-move is offered at every maximal cell, with
/// the smallest unused vertex id as the fresh vertex.
pub fn find_pachner_moves(t: &SimplicialComplex, i: usize) -> Result<Vec<PachnerMoveSpec>> {
    if !t.is_pure() {
        return Err(Error::Invalid("bistellar moves need a pure complex".into()));
    }
    let n = t.dim();
    if i < 1 || i > n + 1 {
        return Err(Error::Invalid(format!("move index {i} out of range 1..={}", n + 1)));
    }
    if i == 1 {
        let fresh = t.vertices().last().map_or(0, |&v| v + 1);
        return Ok(t
            .maximal
            .iter()
            .map(|cell| PachnerMoveSpec { i: 1, cells: vec![cell.clone()], fresh: Some(fresh) })
            .collect());
    }
    let mut out = Vec::new();
    for shared in t.faces(n + 1 - i) {
        let star: Vec<&Vec<u32>> =
            t.maximal.iter().filter(|face| is_subface(&shared, face)).collect();
        if star.len() != i {
            continue;
        }
        let label_set: BTreeSet<u32> = star.iter().flat_map(|f| f.iter()).copied().collect();
        if label_set.len() != n + 2 {
            continue;
        }
        let mut omitted = BTreeSet::new();
        let mut well_formed = true;
        for cell in &star {
            let extra: Vec<u32> =
                label_set.iter().copied().filter(|v| !cell.contains(v)).collect();
            match extra[..] {
                [d] => {
                    well_formed &= omitted.insert(d);
                }
                _ => well_formed = false,
            }
        }
        let interior: Vec<u32> = omitted.into_iter().collect();
        if !well_formed || t.contains(&interior) {
            continue;
        }
        out.push(PachnerMoveSpec {
            i,
            cells: star.into_iter().cloned().collect(),
            fresh: None,
        });
    }
    Ok(out)
}

/// A rooted spanning tree of a complex's 1-skeleton, stored as ascending
/// edge pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    /// The root vertex.
    pub root: u32,
    /// The tree edges, each an ascending pair.
    pub edges: BTreeSet<(u32, u32)>,
}

impl SpanningTree {
    /// True when this tree spans the graph on `vertices` whose edges are
    /// `edges`: the tree edges belong to the graph, there are exactly
    /// vertices-minus-one of them, they reach every vertex from the
    /// root, and the root is a vertex.
    pub fn spans(&self, vertices: &[u32], edges: &BTreeSet<(u32, u32)>) -> bool {
        if !vertices.contains(&self.root) {
            return false;
        }
        if !self.edges.iter().all(|e| edges.contains(e)) {
            return false;
        }
        if self.edges.len() + 1 != vertices.len() {
            return false;
        }
        let adjacency = adjacency_of(&self.edges);
        let reached = bfs_reach(self.root, &adjacency);
        vertices.iter().all(|v| reached.contains(v))
    }
}

/// Builds neighbor lists (ascending) from an edge set.
fn adjacency_of(edges: &BTreeSet<(u32, u32)>) -> BTreeMap<u32, Vec<u32>> {
    let mut adjacency: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &(u, v) in edges {
        adjacency.entry(u).or_default().push(v);
        adjacency.entry(v).or_default().push(u);
    }
    for neighbors in adjacency.values_mut() {
        neighbors.sort_unstable();
        neighbors.dedup();
    }
    adjacency
}

/// The set of vertices reachable from `start` over `adjacency`.
fn bfs_reach(start: u32, adjacency: &BTreeMap<u32, Vec<u32>>) -> BTreeSet<u32> {
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    seen.insert(start);
    let mut queue: Vec<u32> = vec![start];
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &w in adjacency.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                queue.push(w);
            }
        }
    }
    seen
}

/// Grows a spanning tree of the 1-skeleton by breadth-first search from
/// `root`, visiting neighbors in ascending order.
///
/// Errors when the root is not a vertex or the skeleton is disconnected.
pub fn spanning_tree(t: &SimplicialComplex, root: u32) -> Result<SpanningTree> {
    let vertices = t.vertices();
    if !vertices.contains(&root) {
        return Err(Error::Invalid(format!("root {root} is not a vertex")));
    }
    let adjacency = adjacency_of(&t.skeleton_edges());
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    seen.insert(root);
    let mut queue: Vec<u32> = vec![root];
    let mut head = 0;
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &w in adjacency.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                edges.insert((v.min(w), v.max(w)));
                queue.push(w);
            }
        }
    }
    if seen.len() != vertices.len() {
        return Err(Error::Invalid("the 1-skeleton is disconnected".into()));
    }
    Ok(SpanningTree { root, edges })
}

/// Reads a fundamental-group presentation off the complex relative to a
/// spanning tree: one generator `e{u}_{v}` per non-tree skeleton edge
/// `(u, v)`, and one relation per 2-dimensional face `{u < v < w}` — the
/// ascending boundary word over edges `(u,v)`, `(v,w)`, then `(u,w)`
/// inverted, where tree edges contribute nothing. Relations that come
/// out empty are kept.
///
/// Errors when the skeleton is disconnected or the tree does not span it.
pub fn pi1_presentation(t: &SimplicialComplex, tree: &SpanningTree) -> Result<Presentation> {
    let vertices = t.vertices();
    if vertices.is_empty() {
        return Err(Error::Invalid("the complex has no vertices".into()));
    }
    let skeleton = t.skeleton_edges();
    let adjacency = adjacency_of(&skeleton);
    if bfs_reach(vertices[0], &adjacency).len() != vertices.len() {
        return Err(Error::Invalid("the 1-skeleton is disconnected".into()));
    }
    if !tree.spans(&vertices, &skeleton) {
        return Err(Error::Invalid("the tree does not span the 1-skeleton".into()));
    }
    let mut gens: Vec<String> = Vec::new();
    let mut ids: BTreeMap<(u32, u32), GenId> = BTreeMap::new();
    for &(u, v) in &skeleton {
        if !tree.edges.contains(&(u, v)) {
            ids.insert((u, v), gens.len() as GenId);
            gens.push(format!("e{u}_{v}"));
        }
    }
    let mut relators: Vec<Word> = Vec::new();
    for triangle in t.faces(2) {
        let [u, v, w] = triangle[..] else { unreachable!("faces(2) yields triples") };
        let mut word = Word::new();
        for (a, b, invert) in [(u, v, false), (v, w, false), (u, w, true)] {
            if let Some(&g) = ids.get(&(a, b)) {
                word.0.push(if invert { Letter::neg(g) } else { Letter::pos(g) });
            }
        }
        relators.push(word);
    }
    Presentation::new(gens, relators)
}

/// One spanning-tree exchange: `add` joins the tree, `remove` leaves it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeExchange {
    /// The edge entering the tree.
    pub add: (u32, u32),
    /// The edge leaving the tree, from the cycle the addition closes.
    pub remove: (u32, u32),
}

/// A union-find over `0..n` with path compression.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Connects two spanning trees of one graph by single edge exchanges.
///
/// Works down the edge list once, contracting edges common to both
/// trees and discarding edges in neither; an edge in exactly one tree
/// triggers one exchange that brings the trees closer (the removed edge
/// is the first edge of the contracted path between the added edge's
/// endpoints in the other tree), after which the edge is common and gets
/// contracted. Exchanges recorded against the second tree are replayed
/// reversed at the end. Every intermediate edge set is a spanning tree
/// of the original graph, and the path length is at most the vertex
/// count plus the edge count.
///
/// Errors when either tree fails to span the graph.
pub fn tree_exchange_path(
    edges: &BTreeSet<(u32, u32)>,
    t1: &SpanningTree,
    t2: &SpanningTree,
) -> Result<Vec<TreeExchange>> {
    let mut vertex_set: BTreeSet<u32> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    vertex_set.insert(t1.root);
    vertex_set.insert(t2.root);
    let vertices: Vec<u32> = vertex_set.into_iter().collect();
    for (name, tree) in [("first", t1), ("second", t2)] {
        if !tree.spans(&vertices, edges) {
            return Err(Error::Invalid(format!("the {name} tree does not span the graph")));
        }
    }
    let index: BTreeMap<u32, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edge_list: Vec<(u32, u32)> = edges.iter().copied().collect();
    let m = edge_list.len();
    let mut in_first: Vec<bool> = edge_list.iter().map(|e| t1.edges.contains(e)).collect();
    let mut in_second: Vec<bool> = edge_list.iter().map(|e| t2.edges.contains(e)).collect();
    let mut alive: Vec<bool> = vec![true; m];
    let mut uf = UnionFind::new(vertices.len());
    let mut prefix: Vec<TreeExchange> = Vec::new();
    let mut suffix: Vec<TreeExchange> = Vec::new();
    let mut e = 0;
    while e < m {
        let (u, v) = edge_list[e];
        let (ru, rv) = (uf.find(index[&u]), uf.find(index[&v]));
        if ru == rv {
            debug_assert!(
                !in_first[e] && !in_second[e],
                "a contracted loop cannot sit in a tree"
            );
            alive[e] = false;
            e += 1;
        } else if in_first[e] && in_second[e] {
            uf.union(ru, rv);
            alive[e] = false;
            e += 1;
        } else if !in_first[e] && !in_second[e] {
            alive[e] = false;
            e += 1;
        } else if in_second[e] {
            let f = first_path_edge(&mut uf, &index, &edge_list, &alive, &in_first, ru, rv);
            in_first[f] = false;
            in_first[e] = true;
            prefix.push(TreeExchange { add: edge_list[e], remove: edge_list[f] });
        } else {
            let f = first_path_edge(&mut uf, &index, &edge_list, &alive, &in_second, ru, rv);
            in_second[f] = false;
            in_second[e] = true;
            suffix.push(TreeExchange { add: edge_list[e], remove: edge_list[f] });
        }
    }
    prefix.extend(
        suffix
            .into_iter()
            .rev()
            .map(|x| TreeExchange { add: x.remove, remove: x.add }),
    );
    Ok(prefix)
}

/// The first edge on the contracted-tree path from class `from` to class
/// `to`, where the tree is the alive edges flagged in `membership`.
fn first_path_edge(
    uf: &mut UnionFind,
    index: &BTreeMap<u32, usize>,
    edge_list: &[(u32, u32)],
    alive: &[bool],
    membership: &[bool],
    from: usize,
    to: usize,
) -> usize {
    let mut adjacency: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (id, &(a, b)) in edge_list.iter().enumerate() {
        if alive[id] && membership[id] {
            let (ra, rb) = (uf.find(index[&a]), uf.find(index[&b]));
            adjacency.entry(ra).or_default().push((rb, id));
            adjacency.entry(rb).or_default().push((ra, id));
        }
    }
    let mut via: BTreeMap<usize, usize> = BTreeMap::new();
    via.insert(to, usize::MAX);
    let mut queue: Vec<usize> = vec![to];
    let mut head = 0;
    while head < queue.len() {
        let class = queue[head];
        head += 1;
        if class == from {
            break;
        }
        for &(next, id) in adjacency.get(&class).into_iter().flatten() {
            via.entry(next).or_insert_with(|| {
                queue.push(next);
                id
            });
        }
    }
    via[&from]
}

/// Realizes a presentation as a 2-dimensional simplicial complex with
/// the homotopy type of its presentation complex.
///
/// One basepoint serves every generator circle, each subdivided into
/// three edges. Every relator contributes a polygon walking the circles
/// letter by letter (three rim vertices per letter), a fresh ring
/// parallel to the rim — the one boundary subdivision that keeps the
/// triangulation simplicial when a relator revisits a generator — and a
/// fresh cone apex over the ring: nine triangles per letter.
///
/// Errors on an empty relator, which has no polygon to triangulate.
pub fn presentation_complex(p: &Presentation) -> Result<SimplicialComplex> {
    if let Some(idx) = p.relators.iter().position(|r| r.is_empty()) {
        return Err(Error::Invalid(format!("relator {idx} is empty")));
    }
    let base = 0u32;
    let circle = |g: GenId| (1 + 2 * g, 2 + 2 * g);
    let mut faces: Vec<Vec<u32>> = Vec::new();
    for g in 0..p.num_gens() as GenId {
        let (a, b) = circle(g);
        faces.push(vec![base, a]);
        faces.push(vec![a, b]);
        faces.push(vec![b, base]);
    }
    let mut fresh = 1 + 2 * p.num_gens() as u32;
    for relator in &p.relators {
        let mut rim: Vec<u32> = vec![base];
        for letter in relator.letters() {
            let (a, b) = circle(letter.gen);
            if letter.inverse {
                rim.extend([b, a, base]);
            } else {
                rim.extend([a, b, base]);
            }
        }
        let len = rim.len() - 1;
        let ring: Vec<u32> = (0..len).map(|k| fresh + k as u32).collect();
        fresh += len as u32;
        let apex = fresh;
        fresh += 1;
        for k in 0..len {
            let next = (k + 1) % len;
            faces.push(vec![rim[k], rim[k + 1], ring[k]]);
            faces.push(vec![rim[k + 1], ring[k], ring[next]]);
            faces.push(vec![apex, ring[k], ring[next]]);
        }
    }
    SimplicialComplex::from_maximal(faces)
}

/// Fills a connected multigraph into a simply connected 2-complex.
///
/// Loops are subdivided into triangles and filled first, then parallel
/// edges: each extra copy is subdivided through a fresh midpoint, and
/// the digon between consecutive copies becomes one or two triangles.
/// What remains is a simple graph; each cycle of its spanning-tree cycle
/// basis (one non-tree edge plus the tree path through the nearest
/// common ancestor) is filled by a triangle fan from that ancestor,
/// spending cycle-length-minus-two triangles.
///
/// The input lists edges of a multigraph: loops and repeated pairs are
/// allowed. Errors on an empty or disconnected graph.
pub fn fill_cycle_basis(edges: &[(u32, u32)]) -> Result<SimplicialComplex> {
    if edges.is_empty() {
        return Err(Error::Invalid("the graph has no edges".into()));
    }
    let vertex_set: BTreeSet<u32> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let vertices: Vec<u32> = vertex_set.iter().copied().collect();
    let support: BTreeSet<(u32, u32)> = edges
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    let adjacency = adjacency_of(&support);
    if bfs_reach(vertices[0], &adjacency).len() != vertices.len() {
        return Err(Error::Invalid("the graph is disconnected".into()));
    }
    let mut fresh = vertices.last().expect("nonempty") + 1;
    let mut faces: Vec<Vec<u32>> = Vec::new();
    // Loops first: a loop subdivides into a triangle through two fresh
    // vertices, immediately filled.
    for &(u, v) in edges.iter().filter(|(u, v)| u == v) {
        let _ = v;
        faces.push(vec![u, fresh, fresh + 1]);
        fresh += 2;
    }
    // Then parallel edges: copy one stays an edge, every further copy is
    // subdivided through a fresh midpoint, and consecutive copies bound
    // digons filled by one triangle (against the plain copy) or two.
    let mut multiplicity: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for &(u, v) in edges.iter().filter(|(u, v)| u != v) {
        *multiplicity.entry((u.min(v), u.max(v))).or_default() += 1;
    }
    for (&(u, v), &count) in &multiplicity {
        faces.push(vec![u, v]);
        let midpoints: Vec<u32> = (1..count).map(|c| fresh + c as u32 - 1).collect();
        fresh += midpoints.len() as u32;
        if let Some(&first) = midpoints.first() {
            faces.push(vec![u, v, first]);
        }
        for pair in midpoints.windows(2) {
            faces.push(vec![u, pair[0], pair[1]]);
            faces.push(vec![v, pair[0], pair[1]]);
        }
    }
    // Finally the simple support graph: fan-fill each cycle of the
    // spanning-tree cycle basis from the nearest common ancestor.
    let root = vertices[0];
    let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
    let mut depth: BTreeMap<u32, usize> = BTreeMap::new();
    depth.insert(root, 0);
    let mut queue: Vec<u32> = vec![root];
    let mut head = 0;
    let mut tree: BTreeSet<(u32, u32)> = BTreeSet::new();
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let next_depth = depth[&x] + 1;
        for &y in adjacency.get(&x).into_iter().flatten() {
            if let alloc::collections::btree_map::Entry::Vacant(slot) = depth.entry(y) {
                slot.insert(next_depth);
                parent.insert(y, x);
                tree.insert((x.min(y), x.max(y)));
                queue.push(y);
            }
        }
    }
    for &(u, v) in support.iter().filter(|e| !tree.contains(e)) {
        // Walk the deeper endpoint up until the walks meet: the meeting
        // vertex heads the cycle and anchors the fan.
        let (mut a, mut b) = (u, v);
        let mut from_u: Vec<u32> = vec![a];
        let mut from_v: Vec<u32> = vec![b];
        while depth[&a] > depth[&b] {
            a = parent[&a];
            from_u.push(a);
        }
        while depth[&b] > depth[&a] {
            b = parent[&b];
            from_v.push(b);
        }
        while a != b {
            a = parent[&a];
            from_u.push(a);
            b = parent[&b];
            from_v.push(b);
        }
        // Cycle: ancestor down to u, then v back up to just below it.
        let mut cycle: Vec<u32> = from_u.into_iter().rev().collect();
        from_v.pop();
        cycle.extend(from_v);
        let l = cycle.len();
        for j in 1..=l - 2 {
            faces.push(vec![cycle[0], cycle[j], cycle[j + 1]]);
        }
    }
    SimplicialComplex::from_maximal(faces)
}

/// Measures, within the search budget, the move distance between the
/// fundamental-group presentations read before and after one bistellar
/// move, with spanning trees chosen to coincide away from the moved
/// cells: the before-tree avoids edges inside the cells where it can,
/// and the after-tree keeps every before-tree edge that survives the
/// move. Passing no move compares the presentation with itself.
///
/// Returns the distance when the search finds one, `None` when it
/// exhausts the budget, and an error when the complex or move is
/// invalid.
pub fn lemma72_check(
    t: &SimplicialComplex,
    spec: Option<&PachnerMoveSpec>,
    limits: &SearchLimits,
) -> Result<Option<usize>> {
    let patch: BTreeSet<(u32, u32)> = spec
        .iter()
        .flat_map(|s| s.cells.iter())
        .flat_map(|cell| {
            let mut pairs = BTreeSet::new();
            subsets_of_size(cell, 2, &mut pairs);
            pairs
        })
        .map(|edge| (edge[0], edge[1]))
        .collect();
    let before_tree = grow_tree(t, &patch, &BTreeSet::new())?;
    let before = pi1_presentation(t, &before_tree)?;
    let Some(spec) = spec else {
        return Ok(tietze_distance(&before, &before, limits).distance);
    };
    let (moved, _inverse) = apply_pachner(t, spec)?;
    let seed: BTreeSet<(u32, u32)> = before_tree
        .edges
        .intersection(&moved.skeleton_edges())
        .copied()
        .collect();
    let after_tree = grow_tree(&moved, &BTreeSet::new(), &seed)?;
    let after = pi1_presentation(&moved, &after_tree)?;
    Ok(tietze_distance(&before, &after, limits).distance)
}

/// Grows a spanning tree of the 1-skeleton that contains every `seed`
/// edge and otherwise prefers edges outside `avoid`, scanning ascending.
fn grow_tree(
    t: &SimplicialComplex,
    avoid: &BTreeSet<(u32, u32)>,
    seed: &BTreeSet<(u32, u32)>,
) -> Result<SpanningTree> {
    let vertices = t.vertices();
    if vertices.is_empty() {
        return Err(Error::Invalid("the complex has no vertices".into()));
    }
    let index: BTreeMap<u32, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let skeleton = t.skeleton_edges();
    let mut ordered: Vec<(u32, u32)> = skeleton.iter().copied().collect();
    ordered.sort_by_key(|e| (!seed.contains(e), avoid.contains(e), *e));
    let mut uf = UnionFind::new(vertices.len());
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for (u, v) in ordered {
        if uf.union(index[&u], index[&v]) {
            edges.insert((u, v));
        }
    }
    if edges.len() + 1 != vertices.len() {
        return Err(Error::Invalid("the 1-skeleton is disconnected".into()));
    }
    Ok(SpanningTree { root: vertices[0], edges })
}

/// Renders a complex in the exchange format: a `dim:` header, then one
/// maximal face per line as space-separated vertex ids.
pub fn complex_to_text(t: &SimplicialComplex) -> String {
    let mut out = format!("dim: {}\n", t.dim());
    for face in &t.maximal {
        let parts: Vec<String> = face.iter().map(|v| format!("{v}")).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the exchange format produced by [`complex_to_text`]: a
/// `dim: n` header line, then one maximal face per line as
/// space-separated vertex ids. Blank lines are skipped and `#` starts a
/// comment. The declared dimension must match the faces.
pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let mut declared: Option<(usize, usize)> = None;
    let mut faces: Vec<Vec<u32>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if declared.is_none() {
            let Some(rest) = line.strip_prefix("dim:") else {
                return Err(Error::Parse(lineno, "expected a `dim: n` header".into()));
            };
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(lineno, format!("bad dimension `{}`", rest.trim())))?;
            declared = Some((lineno, n));
            continue;
        }
        let mut face: Vec<u32> = Vec::new();
        for token in line.split_whitespace() {
            let v: u32 = token
                .parse()
                .map_err(|_| Error::Parse(lineno, format!("bad vertex id `{token}`")))?;
            face.push(v);
        }
        let mut sorted = face.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parse(lineno, "face repeats a vertex".into()));
        }
        faces.push(face);
    }
    let Some((header_line, n)) = declared else {
        return Err(Error::Parse(1, "missing `dim: n` header".into()));
    };
    let complex = SimplicialComplex::from_maximal(faces)?;
    if complex.dim() != n {
        return Err(Error::Parse(
            header_line,
            format!("declared dimension {n}, but the faces have dimension {}", complex.dim()),
        ));
    }
    Ok(complex)
}

/// Renders a move sequence, one move per line: the index, then each
/// cell as space-separated vertex ids, then `fresh v` when the move
/// introduces a vertex, all separated by `; `.
pub fn pachner_trace_to_text(trace: &[PachnerMoveSpec]) -> String {
    let mut out = String::new();
    for spec in trace {
        let mut fields: Vec<String> = vec![format!("{}", spec.i)];
        for cell in &spec.cells {
            let parts: Vec<String> = cell.iter().map(|v| format!("{v}")).collect();
            fields.push(parts.join(" "));
        }
        if let Some(f) = spec.fresh {
            fields.push(format!("fresh {f}"));
        }
        out.push_str(&fields.join("; "));
        out.push('\n');
    }
    out
}

/// Parses the move-sequence format produced by [`pachner_trace_to_text`].
/// Blank lines are skipped and `#` starts a comment.
pub fn parse_pachner_trace(text: &str) -> Result<Vec<PachnerMoveSpec>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(';').map(str::trim).collect();
        let i: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse(lineno, format!("bad move index `{}`", fields[0])))?;
        let mut cells: Vec<Vec<u32>> = Vec::new();
        let mut fresh: Option<u32> = None;
        for (fi, field) in fields.iter().enumerate().skip(1) {
            if let Some(rest) = field.strip_prefix("fresh") {
                if fi + 1 != fields.len() {
                    return Err(Error::Parse(lineno, "`fresh` must be the last field".into()));
                }
                let v: u32 = rest.trim().parse().map_err(|_| {
                    Error::Parse(lineno, format!("bad fresh vertex `{}`", rest.trim()))
                })?;
                fresh = Some(v);
                continue;
            }
            let mut cell = Vec::new();
            for token in field.split_whitespace() {
                let v: u32 = token
                    .parse()
                    .map_err(|_| Error::Parse(lineno, format!("bad vertex id `{token}`")))?;
                cell.push(v);
            }
            if cell.is_empty() {
                return Err(Error::Parse(lineno, "empty cell field".into()));
            }
            cells.push(cell);
        }
        if cells.is_empty() {
            return Err(Error::Parse(lineno, "a move needs at least one cell".into()));
        }
        out.push(PachnerMoveSpec { i, cells, fresh });
    }
    Ok(out)
}
